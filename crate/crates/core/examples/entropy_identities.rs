// Entropy under affine maps, KL divergence under relabelling, and binned
// mutual information.
//
// ```bash
// cargo run --example entropy_identities
// ```

use projpursuit::info::{
    differential_entropy_hist, kl_divergence, mutual_information_binned, BinCount, DiscreteDist,
};
use projpursuit::random;

pub fn run_example() -> projpursuit::Result<()> {
    let x = random::standard_normals(&mut random::rng(2), 200_000);
    let h = differential_entropy_hist(&x, BinCount::Auto)?;
    println!(
        "H(X) for X ~ N(0, 1): {h:.4} (exact {:.4})",
        0.5 * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln()
    );
    for s in [0.5f64, 2.0, 10.0] {
        let y: Vec<f64> = x.iter().map(|v| s * v + 3.0).collect();
        let hy = differential_entropy_hist(&y, BinCount::Auto)?;
        println!(
            "H({s}X + 3) - H(X) = {:.4}, log {s} = {:.4}",
            hy - h,
            s.ln()
        );
    }

    let p = DiscreteDist::new(vec![0.5, 0.3, 0.2])?;
    let q = DiscreteDist::new(vec![0.2, 0.2, 0.6])?;
    let pp = DiscreteDist::new(vec![0.2, 0.5, 0.3])?;
    let qp = DiscreteDist::new(vec![0.6, 0.2, 0.2])?;
    println!(
        "\nKL(p || q) = {:.6}; after relabelling outcomes {:.6}",
        kl_divergence(&p, &q)?,
        kl_divergence(&pp, &qp)?
    );

    let noise = random::standard_normals(&mut random::rng(3), x.len());
    for rho in [0.0f64, 0.5, 0.9] {
        let y: Vec<f64> = x
            .iter()
            .zip(&noise)
            .map(|(a, e)| rho * a + (1.0 - rho * rho).sqrt() * e)
            .collect();
        println!(
            "correlation {rho}: binned MI {:.4}, Gaussian value {:.4}",
            mutual_information_binned(&x, &y, 20)?,
            -0.5 * (1.0 - rho * rho).ln()
        );
    }
    Ok(())
}

fn main() -> projpursuit::Result<()> {
    run_example()
}
