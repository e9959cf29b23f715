// Several non-Gaussian directions by deflation, with per-restart traces.
//
// ```bash
// cargo run --example pursuit_restarts
// ```

use nalgebra::DMatrix;
use projpursuit::indexes::{CumulantIndex, ProjectionIndex};
use projpursuit::linalg::DataMatrix;
use projpursuit::pursuit::{prepare, pursue_k, PursuitConfig};
use projpursuit::random;
use projpursuit::spectra::Marginal;

pub fn run_example() -> projpursuit::Result<()> {
    // five independent sources, three of them non-Gaussian, mixed linearly
    let n = 2000;
    let sources = [
        Marginal::Exponential,
        Marginal::Uniform,
        Marginal::Gaussian,
        Marginal::Laplace,
        Marginal::Gaussian,
    ];
    let mut rng = random::rng(4);
    let s = DMatrix::from_fn(n, 5, |_, j| sources[j].sample(&mut rng));
    let mix = DMatrix::from_fn(5, 5, |i, j| {
        if i == j {
            2.0
        } else {
            0.4 * ((i + 2 * j) % 3) as f64 - 0.4
        }
    });
    let x = DataMatrix::from_matrix(s * mix.transpose())?;

    let index = CumulantIndex;
    let prepared = prepare(&x, index.preparation())?;
    let cfg = PursuitConfig {
        restarts: 6,
        seed: 4,
        ..Default::default()
    };
    let fit = pursue_k(&prepared.data, &index, 3, &cfg)?;
    for (j, traces) in fit.traces.iter().enumerate() {
        println!(
            "direction {}: index {:.4} from restart {}",
            j + 1,
            fit.values[j],
            fit.chosen_restart[j]
        );
        for t in traces {
            println!(
                "    restart {}: {:.4} -> {:.4} in {} steps{}",
                t.restart,
                t.initial_value,
                t.final_value,
                t.steps.len(),
                if t.converged { "" } else { " (iteration cap)" }
            );
        }
    }
    Ok(())
}

fn main() -> projpursuit::Result<()> {
    run_example()
}
