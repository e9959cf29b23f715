// Zero-fraction gene filtering followed by quantile normalization, on a
// small hand-made matrix and on a synthetic count matrix.
//
// ```bash
// cargo run --example quantile_normalize
// ```

use projpursuit::preprocess::{
    filter_genes, quantile_normalize, CountMatrix, DEFAULT_ZERO_FRACTION,
};
use projpursuit::synth::poisson_counts;

pub fn run_example() -> projpursuit::Result<()> {
    let small = CountMatrix::new(
        vec!["cell1".into(), "cell2".into()],
        vec!["a".into(), "b".into(), "c".into()],
        vec![1.0, 2.0, 3.0, 6.0, 4.0, 5.0],
    )?;
    let q = quantile_normalize(&small)?;
    println!("cell1 {:?} -> {:?}", small.cell(0), q.cell(0));
    println!("cell2 {:?} -> {:?}", small.cell(1), q.cell(1));

    let counts = poisson_counts(300, 500, 5)?;
    let zeros = counts.counts().iter().filter(|&&v| v == 0.0).count();
    println!(
        "\nsynthetic counts: {} cells x {} genes, {:.1}% zeros",
        counts.n_cells(),
        counts.n_genes(),
        100.0 * zeros as f64 / counts.counts().len() as f64
    );
    let kept = filter_genes(&counts, DEFAULT_ZERO_FRACTION)?;
    println!(
        "genes zero in more than {:.0}% of cells removed: {} remain",
        100.0 * DEFAULT_ZERO_FRACTION,
        kept.n_genes()
    );
    let normalized = quantile_normalize(&kept)?;
    // tied counts share the mean reference value over their ranks, which
    // keeps every cell's total equal to the reference total
    let mean_range = |m: &CountMatrix| {
        let means: Vec<f64> = (0..m.n_cells())
            .map(|i| m.cell(i).iter().sum::<f64>() / m.n_genes() as f64)
            .collect();
        let lo = means.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    };
    let (lo, hi) = mean_range(&kept);
    println!("per-cell mean count before: {lo:.3} to {hi:.3}");
    let (lo, hi) = mean_range(&normalized);
    println!("per-cell mean after:        {lo:.3} to {hi:.3}");
    Ok(())
}

fn main() -> projpursuit::Result<()> {
    run_example()
}
