//! Synthetic data generators used by the examples, the CLI and the tests.

use rand::Rng;
use rand_distr::{Distribution, Gamma, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::DataMatrix;
use crate::preprocess::CountMatrix;
use crate::random;

/// Balanced two-component Gaussian mixture `½N(-s·u, Σ) + ½N(+s·u, Σ)`
/// where `Σ` is the identity except for standard deviation `spread` along an
/// axis `v ⊥ u`.
///
/// With `spread` large enough the top-variance direction is `v` while the
/// clusters separate only along `u`, which is exactly where PCA and a
/// non-Gaussianity index disagree.
#[derive(Debug, Clone)]
pub struct TwoClusters {
    pub data: DataMatrix,
    /// `0` or `1` per row; even rows are cluster 0.
    pub labels: Vec<usize>,
    /// Unit separation axis `u`.
    pub separation_axis: Vec<f64>,
    /// Unit high-variance axis `v`.
    pub spread_axis: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoClusterSpec {
    pub n: usize,
    pub d: usize,
    /// Half the distance between the cluster means.
    pub separation: f64,
    /// Within-cluster standard deviation along the spread axis.
    pub spread: f64,
}

impl Default for TwoClusterSpec {
    fn default() -> Self {
        Self {
            n: 2000,
            d: 10,
            separation: 4.0,
            spread: 10.0,
        }
    }
}

pub fn two_clusters(spec: TwoClusterSpec, seed: u64) -> Result<TwoClusters> {
    let TwoClusterSpec {
        n,
        d,
        separation,
        spread,
    } = spec;
    if d < 2 || n < 2 {
        return Err(Error::OutOfRange {
            what: "two-cluster shape",
            detail: format!("need n >= 2 and d >= 2, got n = {n}, d = {d}"),
        });
    }
    let mut rng = random::substream(seed, 0, 0);
    let u = random::unit_sphere(&mut rng, d);
    let mut v = random::unit_sphere(&mut rng, d);
    let p: f64 = v.iter().zip(&u).map(|(a, b)| a * b).sum();
    v.iter_mut().zip(&u).for_each(|(a, b)| *a -= p * b);
    let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
    v.iter_mut().for_each(|a| *a /= norm);

    let mut rng = random::substream(seed, 1, 0);
    let mut values = Vec::with_capacity(n * d);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let label = i % 2;
        let sign = if label == 0 { -1.0 } else { 1.0 };
        let noise = random::standard_normals(&mut rng, d);
        // stretch the noise along v: e + (spread - 1)(e·v) v
        let along: f64 = noise.iter().zip(&v).map(|(a, b)| a * b).sum();
        for j in 0..d {
            values.push(sign * separation * u[j] + noise[j] + (spread - 1.0) * along * v[j]);
        }
        labels.push(label);
    }
    Ok(TwoClusters {
        data: DataMatrix::from_row_major(n, d, &values)?,
        labels,
        separation_axis: u,
        spread_axis: v,
    })
}

/// Sparse-ish Poisson count matrix with gamma-distributed gene rates. Roughly
/// a third of genes are mostly zero so zero-fraction filtering has work to do.
pub fn poisson_counts(n_cells: usize, n_genes: usize, seed: u64) -> Result<CountMatrix> {
    if n_cells == 0 || n_genes == 0 {
        return Err(Error::OutOfRange {
            what: "count matrix shape",
            detail: format!("{n_cells}x{n_genes}"),
        });
    }
    let mut rng = random::substream(seed, 0, 0);
    let rate_dist = Gamma::new(0.6, 2.0).expect("valid gamma parameters");
    let rates: Vec<f64> = (0..n_genes)
        .map(|_| f64::max(rate_dist.sample(&mut rng), 1e-3))
        .collect();
    let mut rng = random::substream(seed, 1, 0);
    let mut counts = Vec::with_capacity(n_cells * n_genes);
    for _ in 0..n_cells {
        let depth: f64 = (0.25f64 * rng.sample::<f64, _>(StandardNormal)).exp();
        for &rate in &rates {
            let p = Poisson::new(rate * depth).expect("positive rate");
            counts.push(p.sample(&mut rng));
        }
    }
    let cells = (0..n_cells).map(|i| format!("cell{i}")).collect();
    let genes = (0..n_genes).map(|j| format!("gene{j}")).collect();
    CountMatrix::new(cells, genes, counts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axes_are_orthonormal() {
        let c = two_clusters(TwoClusterSpec::default(), 3).unwrap();
        let dot: f64 = c
            .separation_axis
            .iter()
            .zip(&c.spread_axis)
            .map(|(a, b)| a * b)
            .sum();
        assert!(dot.abs() < 1e-12);
        assert_eq!(c.data.n_rows(), 2000);
        assert_eq!(c.labels.iter().filter(|&&l| l == 1).count(), 1000);
    }

    #[test]
    fn counts_are_deterministic() {
        let a = poisson_counts(20, 30, 5).unwrap();
        let b = poisson_counts(20, 30, 5).unwrap();
        assert_eq!(a, b);
        assert!(a.counts().contains(&0.0));
    }
}
