// Pairwise distances under Gaussian random projections of shrinking rank.
//
// ```bash
// cargo run --example johnson_lindenstrauss
// ```

use projpursuit::indexes::{apply_linear_map, jl_distortion, random_projection};
use projpursuit::linalg::DataMatrix;
use projpursuit::random;

pub fn run_example() -> projpursuit::Result<()> {
    let (n, d) = (100, 1000);
    let x =
        DataMatrix::from_row_major(n, d, &random::standard_normals(&mut random::rng(0), n * d))?;
    let delta = 0.5;
    let bound = (16.0 * (n as f64).ln() / (delta * delta)).ceil() as usize;
    println!("n = {n} points in d = {d}; r = {bound} guarantees distortion below {delta} with high probability");
    for r in [bound, 100, 30, 10] {
        let worst: Vec<f64> = (0..10)
            .map(|seed| {
                let a = random_projection(d, r, seed)?;
                Ok(jl_distortion(&x, &apply_linear_map(&x, &a)?)?.max_relative)
            })
            .collect::<projpursuit::Result<_>>()?;
        let max = worst.iter().copied().fold(0.0, f64::max);
        let mean = worst.iter().sum::<f64>() / worst.len() as f64;
        println!("r = {r:>3}: max relative distortion mean {mean:.3}, worst {max:.3} (10 seeds)");
    }
    Ok(())
}

fn main() -> projpursuit::Result<()> {
    run_example()
}
