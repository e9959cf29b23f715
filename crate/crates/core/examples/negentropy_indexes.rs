// The cumulant and log-cosh non-Gaussianity indexes on a few reference
// distributions. Both vanish for the Gaussian and are scale-free.
//
// ```bash
// cargo run --example negentropy_indexes
// ```

use projpursuit::indexes::{cumulant_negentropy, logcosh_gaussian_baseline, logcosh_negentropy};
use projpursuit::random;
use projpursuit::spectra::Marginal;

pub fn run_example() -> projpursuit::Result<()> {
    let n = 200_000;
    let mut rng = random::rng(1);
    println!(
        "Gaussian baseline E log cosh(v): alpha = 1 -> {:.6}, alpha = 2 -> {:.6}",
        logcosh_gaussian_baseline(1.0),
        logcosh_gaussian_baseline(2.0)
    );
    println!(
        "{:<12} {:>10} {:>12} {:>12}",
        "law", "cumulant", "logcosh a=1", "logcosh a=2"
    );
    for marginal in [
        Marginal::Gaussian,
        Marginal::Uniform,
        Marginal::Laplace,
        Marginal::Rademacher,
        Marginal::Exponential,
    ] {
        let z: Vec<f64> = (0..n).map(|_| marginal.sample(&mut rng)).collect();
        println!(
            "{:<12} {:>10.5} {:>12.6} {:>12.6}",
            format!("{marginal:?}"),
            cumulant_negentropy(&z)?.value,
            logcosh_negentropy(&z, 1.0)?.value,
            logcosh_negentropy(&z, 2.0)?.value,
        );
    }

    // affine maps leave both indexes unchanged
    let z: Vec<f64> = (0..n).map(|_| Marginal::Laplace.sample(&mut rng)).collect();
    let moved: Vec<f64> = z.iter().map(|v| -4.0 * v + 10.0).collect();
    println!(
        "Laplace vs -4x + 10: cumulant {:.3e} difference, logcosh {:.3e} difference",
        (cumulant_negentropy(&z)?.value - cumulant_negentropy(&moved)?.value).abs(),
        (logcosh_negentropy(&z, 1.0)?.value - logcosh_negentropy(&moved, 1.0)?.value).abs(),
    );
    Ok(())
}

fn main() -> projpursuit::Result<()> {
    run_example()
}
