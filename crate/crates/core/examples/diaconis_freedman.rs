// Random one-dimensional projections of high-dimensional data look
// Gaussian even when every coordinate is uniform.
//
// ```bash
// cargo run --example diaconis_freedman
// ```

use projpursuit::spectra::{df_projection_experiment, median, Marginal};

pub fn run_example() -> projpursuit::Result<()> {
    let (n, m, seed) = (1000, 50, 3);
    println!("median KS distance to N(0, 1) over {m} random directions, n = {n}");
    for marginal in [Marginal::Uniform, Marginal::Exponential] {
        let row: Vec<String> = [1usize, 2, 5, 20, 100, 500]
            .iter()
            .map(|&d| {
                df_projection_experiment(n, d, m, seed, marginal)
                    .map(|ks| format!("d={d}: {:.4}", median(&ks)))
            })
            .collect::<projpursuit::Result<_>>()?;
        println!("{marginal:?}: {}", row.join("  "));
    }
    // for reference: the KS statistic of n true Gaussian draws is about 0.027
    let gaussian = df_projection_experiment(n, 1, m, seed, Marginal::Gaussian)?;
    println!("Gaussian coordinates, d = 1: {:.4}", median(&gaussian));
    Ok(())
}

fn main() -> projpursuit::Result<()> {
    run_example()
}
