//! Information-theoretic estimators: discrete entropy, KL divergence,
//! histogram differential entropy, binned mutual information, Hermite
//! polynomials and the Kolmogorov-Smirnov distance to the standard normal.
//!
//! All logarithms are natural, so every quantity is in nats.

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::quad;

/// Largest Hermite degree accepted by [`hermite`].
pub const MAX_HERMITE_DEGREE: usize = 20;

/// Cap on the automatic bin count of [`BinCount::Auto`].
pub const MAX_AUTO_BINS: usize = 512;

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Probability vector over a finite set of outcomes.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDist {
    probs: Vec<f64>,
}

impl DiscreteDist {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::Degenerate("empty distribution".into()));
        }
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(Error::Contract(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::Contract(format!(
                "probabilities sum to {sum}, not 1"
            )));
        }
        Ok(Self { probs })
    }

    /// Normalizes non-negative counts.
    pub fn from_counts(counts: &[u64]) -> Result<Self> {
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::Degenerate("all counts are zero".into()));
        }
        let t = total as f64;
        Ok(Self {
            probs: counts.iter().map(|&c| c as f64 / t).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// `-Σ p log p`, with `0 log 0 = 0`.
pub fn discrete_entropy(p: &DiscreteDist) -> f64 {
    -p.probs
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| x * x.ln())
        .sum::<f64>()
}

/// `Σ p log(p / q)`. Returns `f64::INFINITY` when `q` vanishes somewhere `p`
/// does not.
pub fn kl_divergence(p: &DiscreteDist, q: &DiscreteDist) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::Dimension(format!(
            "support lengths differ: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    let mut acc = 0.0;
    for (&pi, &qi) in p.probs.iter().zip(&q.probs) {
        if pi == 0.0 {
            continue;
        }
        if qi == 0.0 {
            return Ok(f64::INFINITY);
        }
        acc += pi * (pi / qi).ln();
    }
    Ok(acc)
}

/// Equal-width histogram.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
}

impl Histogram {
    /// `bins` equal-width bins spanning `[min, max]` of the samples. The last
    /// bin is closed on the right.
    pub fn equal_width(samples: &[f64], bins: usize) -> Result<Self> {
        if bins == 0 {
            return Err(Error::OutOfRange {
                what: "bin count",
                detail: "must be positive".into(),
            });
        }
        if samples.is_empty() {
            return Err(Error::Degenerate("no samples".into()));
        }
        let (lo, hi) = min_max(samples)?;
        if !(hi > lo) {
            return Err(Error::Degenerate(format!(
                "all samples equal {lo}; histogram has zero width"
            )));
        }
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins)
            .map(|i| if i == bins { hi } else { lo + width * i as f64 })
            .collect();
        let mut counts = vec![0u64; bins];
        for &x in samples {
            counts[bin_of(x, lo, width, bins)] += 1;
        }
        Ok(Self {
            edges,
            counts,
            total: samples.len() as u64,
        })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn bin_width(&self) -> f64 {
        (self.edges[self.edges.len() - 1] - self.edges[0]) / self.counts.len() as f64
    }

    pub fn probabilities(&self) -> DiscreteDist {
        DiscreteDist::from_counts(&self.counts).expect("histogram total is positive")
    }
}

fn min_max(samples: &[f64]) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in samples {
        if !x.is_finite() {
            return Err(Error::Contract("samples must be finite".into()));
        }
        lo = lo.min(x);
        hi = hi.max(x);
    }
    Ok((lo, hi))
}

fn bin_of(x: f64, lo: f64, width: f64, bins: usize) -> usize {
    (((x - lo) / width) as usize).min(bins - 1)
}

/// Bin-count rule for [`differential_entropy_hist`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BinCount {
    /// `ceil(sqrt(n))`, capped at [`MAX_AUTO_BINS`].
    #[default]
    Auto,
    Fixed(usize),
}

impl BinCount {
    pub fn resolve(self, n: usize) -> usize {
        match self {
            BinCount::Auto => ((n as f64).sqrt().ceil() as usize).clamp(1, MAX_AUTO_BINS),
            BinCount::Fixed(k) => k,
        }
    }
}

/// Plug-in differential entropy from an equal-width histogram over
/// `[min, max]`: `-Σ p_j log p_j + log Δ`.
pub fn differential_entropy_hist(samples: &[f64], bins: BinCount) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::Degenerate(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let hist = Histogram::equal_width(samples, bins.resolve(samples.len()))?;
    Ok(discrete_entropy(&hist.probabilities()) + hist.bin_width().ln())
}

/// Probabilists' Hermite polynomial `He_n(x)` by the three-term recurrence
/// `He_{n+1} = x He_n - n He_{n-1}`.
pub fn hermite(n: usize, x: f64) -> Result<f64> {
    if n > MAX_HERMITE_DEGREE {
        return Err(Error::OutOfRange {
            what: "Hermite degree",
            detail: format!("{n} > {MAX_HERMITE_DEGREE}"),
        });
    }
    Ok(hermite_unchecked(n, x))
}

fn hermite_unchecked(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = x * cur - k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Simpson quadrature of `∫ φ(x) He_n(x) He_m(x) dx` over `[-12, 12]`.
/// Equals `n! δ_nm` up to quadrature error.
pub fn hermite_orthogonality(n: usize, m: usize) -> Result<f64> {
    const LIMIT: usize = 10;
    if n > LIMIT || m > LIMIT {
        return Err(Error::OutOfRange {
            what: "Hermite degree",
            detail: format!("({n}, {m}) exceeds {LIMIT}"),
        });
    }
    Ok(quad::simpson(
        |x| normal_pdf(x) * hermite_unchecked(n, x) * hermite_unchecked(m, x),
        -12.0,
        12.0,
        4000,
    ))
}

/// Plug-in mutual information of the joint equal-width histogram with
/// `bins` bins per marginal.
pub fn mutual_information_binned(x: &[f64], y: &[f64], bins: usize) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!(
            "sample lengths differ: {} vs {}",
            x.len(),
            y.len()
        )));
    }
    if bins == 0 {
        return Err(Error::OutOfRange {
            what: "bin count",
            detail: "must be positive".into(),
        });
    }
    let n = x.len();
    if n < 2 {
        return Err(Error::Degenerate("need at least 2 samples".into()));
    }
    if n < 5 * bins * bins {
        log::warn!("mutual information with {n} samples and {bins}x{bins} bins is heavily biased");
    }
    let bx = bin_indices(x, bins)?;
    let by = bin_indices(y, bins)?;
    let mut joint = vec![0u64; bins * bins];
    let mut mx = vec![0u64; bins];
    let mut my = vec![0u64; bins];
    for (&i, &j) in bx.iter().zip(&by) {
        joint[i * bins + j] += 1;
        mx[i] += 1;
        my[j] += 1;
    }
    let nf = n as f64;
    let mut mi = 0.0;
    for i in 0..bins {
        for j in 0..bins {
            let c = joint[i * bins + j];
            if c == 0 {
                continue;
            }
            let pxy = c as f64 / nf;
            let px = mx[i] as f64 / nf;
            let py = my[j] as f64 / nf;
            mi += pxy * (pxy / (px * py)).ln();
        }
    }
    Ok(mi)
}

fn bin_indices(samples: &[f64], bins: usize) -> Result<Vec<usize>> {
    let (lo, hi) = min_max(samples)?;
    if !(hi > lo) {
        return Err(Error::Degenerate("constant sample; cannot bin".into()));
    }
    let width = (hi - lo) / bins as f64;
    Ok(samples
        .iter()
        .map(|&v| bin_of(v, lo, width, bins))
        .collect())
}

/// Kolmogorov-Smirnov distance `sup_t |F_n(t) - Φ(t)|` between the empirical
/// distribution of `samples` and the standard normal.
pub fn ks_to_standard_normal(samples: &[f64]) -> Result<f64> {
    if samples.len() < 10 {
        return Err(Error::Degenerate(format!(
            "KS statistic needs at least 10 samples, got {}",
            samples.len()
        )));
    }
    let mut sorted = samples.to_vec();
    if sorted.iter().any(|v| !v.is_finite()) {
        return Err(Error::Contract("samples must be finite".into()));
    }
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = normal_cdf(x);
        let above = (i + 1) as f64 / n - f;
        let below = f - i as f64 / n;
        d = d.max(above).max(below);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entropy_examples() {
        let u = DiscreteDist::new(vec![0.25; 4]).unwrap();
        assert!((discrete_entropy(&u) - 4f64.ln()).abs() < 1e-15);
        let point = DiscreteDist::new(vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(discrete_entropy(&point), 0.0);
        let p = DiscreteDist::new(vec![0.5, 0.25, 0.25]).unwrap();
        let expected = 0.5 * 2f64.ln() + 0.5 * 4f64.ln();
        assert!((discrete_entropy(&p) - expected).abs() < 1e-15);
        assert!((discrete_entropy(&p) - 1.0397).abs() < 1e-4);
    }

    #[test]
    fn dist_validation() {
        assert!(DiscreteDist::new(vec![0.5, 0.6]).is_err());
        assert!(DiscreteDist::new(vec![1.5, -0.5]).is_err());
        assert!(DiscreteDist::new(vec![]).is_err());
    }

    #[test]
    fn kl_examples() {
        let p = DiscreteDist::new(vec![0.5, 0.5]).unwrap();
        let q = DiscreteDist::new(vec![0.25, 0.75]).unwrap();
        assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        let expected = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
        let kl = kl_divergence(&p, &q).unwrap();
        assert!((kl - expected).abs() < 1e-15);
        assert!((kl - 0.1438).abs() < 1e-4);

        let a = DiscreteDist::new(vec![1.0, 0.0]).unwrap();
        let b = DiscreteDist::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(kl_divergence(&a, &b).unwrap(), f64::INFINITY);
        let c = DiscreteDist::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(kl_divergence(&a, &c), Err(Error::Dimension(_))));
    }

    #[test]
    fn differential_entropy_rejects_constant() {
        assert!(matches!(
            differential_entropy_hist(&[2.0; 10], BinCount::Auto),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn auto_bins() {
        assert_eq!(BinCount::Auto.resolve(100), 10);
        assert_eq!(BinCount::Auto.resolve(101), 11);
        assert_eq!(BinCount::Auto.resolve(1_000_000), MAX_AUTO_BINS);
    }

    #[test]
    fn hermite_values() {
        for x in [-3.0, 0.0, 0.7, 12.0] {
            assert_eq!(hermite(0, x).unwrap(), 1.0);
            assert_eq!(hermite(1, x).unwrap(), x);
        }
        assert_eq!(hermite(2, 3.0).unwrap(), 8.0);
        assert_eq!(hermite(3, 2.0).unwrap(), 2.0);
        assert!(hermite(21, 1.0).is_err());
        assert!(hermite(20, 1.0).is_ok());
    }

    #[test]
    fn hermite_matches_gaussian_derivative_forms() {
        // (-1)^n φ^(n)/φ differentiated by hand
        let forms: [fn(f64) -> f64; 5] = [
            |_| 1.0,
            |x| x,
            |x| x * x - 1.0,
            |x| x * x * x - 3.0 * x,
            |x| x.powi(4) - 6.0 * x * x + 3.0,
        ];
        for (n, form) in forms.iter().enumerate() {
            for x in [-2.5, -1.0, 0.0, 0.3, 1.7, 4.0] {
                assert!(
                    (hermite(n, x).unwrap() - form(x)).abs() < 1e-12,
                    "n={n} x={x}"
                );
            }
        }
    }

    #[test]
    fn hermite_matches_finite_difference_of_density() {
        let h = 1e-3;
        for x in [-1.3, 0.4, 2.1] {
            let d1 = (normal_pdf(x + h) - normal_pdf(x - h)) / (2.0 * h);
            let d2 = (normal_pdf(x + h) - 2.0 * normal_pdf(x) + normal_pdf(x - h)) / (h * h);
            assert!((-d1 / normal_pdf(x) - hermite(1, x).unwrap()).abs() < 1e-5);
            assert!((d2 / normal_pdf(x) - hermite(2, x).unwrap()).abs() < 1e-5);
        }
    }

    #[test]
    fn orthogonality_examples() {
        assert!(hermite_orthogonality(1, 2).unwrap().abs() < 1e-8);
        assert!((hermite_orthogonality(2, 2).unwrap() - 2.0).abs() < 2e-6);
        assert!((hermite_orthogonality(0, 0).unwrap() - 1.0).abs() < 1e-6);
        assert!(hermite_orthogonality(11, 0).is_err());
    }

    #[test]
    fn ks_examples() {
        assert!(ks_to_standard_normal(&[0.0; 9]).is_err());
        assert!((ks_to_standard_normal(&[0.0; 20]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn mutual_information_of_identity() {
        let x: Vec<f64> = (0..2000)
            .map(|i| ((i * 7919) % 2003) as f64 * 0.37)
            .collect();
        let hist = Histogram::equal_width(&x, 10).unwrap();
        let h = discrete_entropy(&hist.probabilities());
        assert!((mutual_information_binned(&x, &x, 10).unwrap() - h).abs() < 1e-12);
        assert!(mutual_information_binned(&x, &x[1..], 10).is_err());
    }
}
