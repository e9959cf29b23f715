// Fisher's discriminant as a projection index: the sphere optimizer lands
// on the closed-form direction `Σ⁻¹(μ₁ − μ₂)`.
//
// ```bash
// cargo run --example fisher_lda
// ```

use nalgebra::DMatrix;
use projpursuit::indexes::{lda_direction, lda_index, ClassStats, Direction, LdaIndex};
use projpursuit::linalg::DataMatrix;
use projpursuit::pursuit::{pursue_one, PursuitConfig};
use projpursuit::random;
use rand::Rng;
use rand_distr::StandardNormal;

/// `n` draws from `N(mean, L Lᵀ)`.
fn class(n: usize, mean: &[f64], l: &DMatrix<f64>, seed: u64) -> projpursuit::Result<DataMatrix> {
    let mut rng = random::rng(seed);
    let d = mean.len();
    let e = DMatrix::from_fn(n, d, |_, _| rng.sample::<f64, _>(StandardNormal));
    let mut x = e * l.transpose();
    for mut row in x.row_iter_mut() {
        for (v, m) in row.iter_mut().zip(mean) {
            *v += m;
        }
    }
    DataMatrix::from_matrix(x)
}

pub fn run_example() -> projpursuit::Result<()> {
    let l = DMatrix::from_row_slice(3, 3, &[1.0, 0.0, 0.0, 0.8, 0.6, 0.0, 0.0, 0.5, 1.2]);
    let a = ClassStats::from_data(&class(500, &[0.0, 0.0, 0.0], &l, 1)?)?;
    let b = ClassStats::from_data(&class(500, &[1.0, 1.5, -0.5], &l, 2)?)?;

    let index = LdaIndex::new(&a, &b)?;
    let closed = lda_direction(&a.mean, &b.mean, index.shared_covariance())?;
    // the Fisher index reads only the class statistics, so any matrix with
    // the right width will do as data
    let dummy = DataMatrix::from_matrix(DMatrix::identity(3, 3))?;
    let found = pursue_one(&dummy, &index, &[], &PursuitConfig::default())?;

    println!("closed form: {:?}", closed.as_slice());
    println!("pursuit:     {:?}", found.direction.as_slice());
    println!(
        "angle between them: {:.2e} rad",
        found.direction.axis_angle(&closed)
    );
    let axis = Direction::axis(3, 0);
    println!(
        "index at the optimum {:.4}; along the first axis only {:.4}",
        found.value,
        lda_index(&axis, &a, &b)?.value
    );
    Ok(())
}

fn main() -> projpursuit::Result<()> {
    run_example()
}
