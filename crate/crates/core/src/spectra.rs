//! Marcenko-Pastur spectra and random-projection Gaussianity.
//!
//! For `X` an `n × d` matrix of i.i.d. standard normals, the eigenvalues of
//! `XᵀX / n` follow, as `d/n → γ ∈ (0, 1]`, the density
//!
//! ```text
//! g(k) = sqrt((b+ - k)(k - b-)) / (2π γ k),   b± = (1 ± √γ)²
//! ```
//!
//! (the law is often nicknamed the quarter-circle law, after the form it
//! takes for singular values at γ = 1). For γ > 1 the limit also carries a
//! point mass at zero; only the absolutely continuous part is modelled here.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::info::ks_to_standard_normal;
use crate::linalg;
use crate::quad;
use crate::random;

/// Largest `n · d` accepted by [`simulate_wishart_esd`].
pub const MAX_WISHART_ENTRIES: usize = 100_000_000;

/// Number of bins used by [`esd_vs_mp_distance`].
pub const ESD_BINS: usize = 64;

/// Aspect ratio `γ = d/n` and the derived support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MpParams {
    pub gamma: f64,
    pub b_minus: f64,
    pub b_plus: f64,
}

impl MpParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::OutOfRange {
                what: "gamma",
                detail: format!("{gamma} is not a positive aspect ratio"),
            });
        }
        let r = gamma.sqrt();
        Ok(Self {
            gamma,
            b_minus: (1.0 - r).powi(2),
            b_plus: (1.0 + r).powi(2),
        })
    }

    pub fn density(&self, k: f64) -> f64 {
        if k <= self.b_minus || k >= self.b_plus || k <= 0.0 {
            return 0.0;
        }
        ((self.b_plus - k) * (k - self.b_minus)).sqrt()
            / (2.0 * std::f64::consts::PI * self.gamma * k)
    }

    /// Mass of the density on `[lo, hi]`.
    ///
    /// Integrates in the angle `θ` with `k = b- + (b+ - b-)(1 - cos θ)/2`,
    /// which removes the square-root endpoint singularities (and the `1/k`
    /// pole when γ = 1, where `b- = 0`).
    pub fn mass(&self, lo: f64, hi: f64) -> f64 {
        let lo = lo.max(self.b_minus);
        let hi = hi.min(self.b_plus);
        if hi <= lo {
            return 0.0;
        }
        let half = 0.5 * (self.b_plus - self.b_minus);
        let theta = |k: f64| (1.0 - (k - self.b_minus) / half).clamp(-1.0, 1.0).acos();
        let gamma = self.gamma;
        let b_minus = self.b_minus;
        let integrand = move |t: f64| {
            let (s, c) = t.sin_cos();
            let k = b_minus + half * (1.0 - c);
            if k <= 0.0 {
                // γ = 1 at θ = 0: sin²θ / (1 - cos θ) → 2, times half²/(2πγ·half)
                return half * 2.0 / (2.0 * std::f64::consts::PI * gamma);
            }
            half * half * s * s / (2.0 * std::f64::consts::PI * gamma * k)
        };
        quad::adaptive_simpson(integrand, theta(lo), theta(hi), 1e-12)
    }
}

/// Marcenko-Pastur density at `k`; zero outside `[b-, b+]`.
pub fn mp_density(k: f64, gamma: f64) -> Result<f64> {
    Ok(MpParams::new(gamma)?.density(k))
}

/// Total mass of [`mp_density`] by adaptive quadrature. Equals 1 for
/// γ ∈ (0, 1].
pub fn mp_total_mass(gamma: f64) -> Result<f64> {
    if gamma > 1.0 {
        return Err(Error::OutOfRange {
            what: "gamma",
            detail: format!("{gamma} > 1 has a point mass at zero"),
        });
    }
    let p = MpParams::new(gamma)?;
    Ok(p.mass(p.b_minus, p.b_plus))
}

/// Eigenvalues of a simulated `XᵀX / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSample {
    eigenvalues: Vec<f64>,
    pub n: usize,
    pub d: usize,
    pub seed: u64,
}

impl SpectralSample {
    /// Wraps a spectrum, sorting it ascending.
    pub fn new(mut eigenvalues: Vec<f64>, n: usize, d: usize, seed: u64) -> Result<Self> {
        if eigenvalues.len() != d {
            return Err(Error::Dimension(format!(
                "{} eigenvalues for dimension {d}",
                eigenvalues.len()
            )));
        }
        if eigenvalues.iter().any(|v| !v.is_finite() || *v < -1e-10) {
            return Err(Error::Contract(
                "eigenvalues must be finite and non-negative".into(),
            ));
        }
        eigenvalues.sort_by(f64::total_cmp);
        Ok(Self {
            eigenvalues,
            n,
            d,
            seed,
        })
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn gamma(&self) -> f64 {
        self.d as f64 / self.n as f64
    }
}

/// Samples `X` (`n × d`, i.i.d. N(0,1)) and returns the spectrum of `XᵀX/n`.
pub fn simulate_wishart_esd(n: usize, d: usize, seed: u64) -> Result<SpectralSample> {
    if d == 0 || n < d {
        return Err(Error::OutOfRange {
            what: "ensemble shape",
            detail: format!("need n >= d >= 1, got n = {n}, d = {d}"),
        });
    }
    if n.saturating_mul(d) > MAX_WISHART_ENTRIES {
        return Err(Error::OutOfRange {
            what: "ensemble size",
            detail: format!(
                "n·d = {} exceeds {MAX_WISHART_ENTRIES}",
                n as u128 * d as u128
            ),
        });
    }
    let mut rng = random::rng(seed);
    let x = DMatrix::<f64>::from_fn(n, d, |_, _| rng.sample(StandardNormal));
    let s = x.tr_mul(&x) / n as f64;
    let eigenvalues = linalg::sym_eigenvalues(&s)?
        .into_iter()
        .map(|v| v.max(0.0))
        .collect();
    SpectralSample::new(eigenvalues, n, d, seed)
}

/// L1 distance `Σ_j |p̂_j - p_j|` between the eigenvalue histogram and the
/// Marcenko-Pastur law over [`ESD_BINS`] equal bins on `[0, 1.1 b+]`.
/// Eigenvalues beyond the range count fully towards the distance.
pub fn esd_vs_mp_distance(sample: &SpectralSample) -> Result<f64> {
    let gamma = sample.gamma();
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::OutOfRange {
            what: "gamma",
            detail: format!("{gamma} not in (0, 1]"),
        });
    }
    let p = MpParams::new(gamma)?;
    let upper = 1.1 * p.b_plus;
    let width = upper / ESD_BINS as f64;
    let mut counts = [0usize; ESD_BINS];
    let mut outside = 0usize;
    for &v in sample.eigenvalues() {
        if (0.0..=upper).contains(&v) {
            counts[((v / width) as usize).min(ESD_BINS - 1)] += 1;
        } else {
            outside += 1;
        }
    }
    let d = sample.eigenvalues().len() as f64;
    let mut dist = outside as f64 / d;
    for (j, &c) in counts.iter().enumerate() {
        let lo = j as f64 * width;
        let expected = p.mass(lo, lo + width);
        dist += (c as f64 / d - expected).abs();
    }
    Ok(dist)
}

/// Coordinate distribution for [`df_projection_experiment`]. Every choice
/// has mean 0 and variance 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Marginal {
    /// Uniform on `[-√3, √3]`.
    #[default]
    Uniform,
    /// Laplace with scale `1/√2`.
    Laplace,
    /// `Exp(1) - 1`.
    Exponential,
    /// Symmetric `±1`.
    Rademacher,
    Gaussian,
}

impl Marginal {
    pub fn sample<R: Rng>(self, rng: &mut R) -> f64 {
        match self {
            Marginal::Uniform => 3f64.sqrt() * (2.0 * rng.random::<f64>() - 1.0),
            Marginal::Laplace => {
                let u: f64 = rng.random::<f64>() - 0.5;
                -u.signum() * (1.0 - 2.0 * u.abs()).ln() / std::f64::consts::SQRT_2
            }
            Marginal::Exponential => -(1.0 - rng.random::<f64>()).ln() - 1.0,
            Marginal::Rademacher => {
                if rng.random::<bool>() {
                    1.0
                } else {
                    -1.0
                }
            }
            Marginal::Gaussian => rng.sample(StandardNormal),
        }
    }
}

/// Projects `n` i.i.d. points in `ℝ^d` (coordinates drawn from `marginal`)
/// onto `m_directions` uniform random unit directions and returns the KS
/// distance of each standardized projection to N(0, 1).
pub fn df_projection_experiment(
    n: usize,
    d: usize,
    m_directions: usize,
    seed: u64,
    marginal: Marginal,
) -> Result<Vec<f64>> {
    if m_directions == 0 || d == 0 {
        return Err(Error::OutOfRange {
            what: "experiment shape",
            detail: format!("need d >= 1 and m >= 1, got d = {d}, m = {m_directions}"),
        });
    }
    if n < 10 {
        return Err(Error::OutOfRange {
            what: "sample count",
            detail: format!("{n} < 10"),
        });
    }
    let mut data_rng = random::substream(seed, 0, 0);
    let x = DMatrix::<f64>::from_fn(n, d, |_, _| marginal.sample(&mut data_rng));
    let mut dir_rng = random::substream(seed, 1, 0);
    let directions: Vec<Vec<f64>> = (0..m_directions)
        .map(|_| random::unit_sphere(&mut dir_rng, d))
        .collect();

    directions
        .par_iter()
        .map(|a| {
            let z = &x * nalgebra::DVector::from_column_slice(a);
            let nf = n as f64;
            let mean = z.iter().sum::<f64>() / nf;
            let sd = (z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0)).sqrt();
            if !(sd > 0.0) {
                return Err(Error::Degenerate("projection has zero variance".into()));
            }
            let u: Vec<f64> = z.iter().map(|v| (v - mean) / sd).collect();
            ks_to_standard_normal(&u)
        })
        .collect()
}

/// Median of a non-empty slice (mean of the two middle values for even
/// lengths).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}
