// Eigenvalues of a simulated sample covariance against the Marcenko-Pastur
// law, bin by bin.
//
// ```bash
// cargo run --example marchenko_pastur
// ```

use projpursuit::spectra::{esd_vs_mp_distance, simulate_wishart_esd, MpParams};

pub fn run_example() -> projpursuit::Result<()> {
    let (n, d, seed) = (800, 400, 7);
    let sample = simulate_wishart_esd(n, d, seed)?;
    let law = MpParams::new(sample.gamma())?;
    println!(
        "n = {n}, d = {d}: gamma = {}, support [{:.4}, {:.4}]",
        sample.gamma(),
        law.b_minus,
        law.b_plus
    );

    // eight coarse bins across the support: observed vs predicted mass
    let bins = 8;
    let width = (law.b_plus - law.b_minus) / bins as f64;
    println!("{:>17}  {:>8}  {:>8}", "interval", "observed", "law");
    for j in 0..bins {
        let lo = law.b_minus + j as f64 * width;
        let hi = lo + width;
        let observed = sample
            .eigenvalues()
            .iter()
            .filter(|&&v| v >= lo && (v < hi || j == bins - 1))
            .count() as f64
            / d as f64;
        println!(
            "[{lo:.3}, {hi:.3})  {observed:>8.4}  {:>8.4}",
            law.mass(lo, hi)
        );
    }

    let ev = sample.eigenvalues();
    println!(
        "smallest {:.4}, largest {:.4}; 64-bin L1 distance {:.4}",
        ev[0],
        ev[ev.len() - 1],
        esd_vs_mp_distance(&sample)?
    );
    Ok(())
}

fn main() -> projpursuit::Result<()> {
    run_example()
}
