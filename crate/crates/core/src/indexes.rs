//! Projection indexes: functionals scoring a projection `z = X a` of the
//! data onto a unit direction.
//!
//! Sample-level functions ([`cumulant_negentropy`], [`logcosh_negentropy`])
//! take the projected samples directly and report their gradient with
//! respect to those samples. The [`ProjectionIndex`] implementations own the
//! projection step and map that gradient back to the direction via `X^T`.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::info::normal_pdf;
use crate::linalg::DataMatrix;
use crate::quad;
use crate::random;

/// Norm tolerance for [`Direction`].
pub const UNIT_TOL: f64 = 1e-10;

/// Orthogonality tolerance for [`ProjectionMatrix`] rows.
pub const ORTHO_TOL: f64 = 1e-8;

/// Unit vector on the sphere `S^{d-1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(Vec<f64>);

impl Direction {
    /// Accepts a vector that already has unit norm.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        let norm = l2(&components);
        if components.is_empty() || (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::Contract(format!(
                "direction must have unit norm, got {norm}"
            )));
        }
        Ok(Self(components))
    }

    /// Scales a non-zero vector to unit norm.
    pub fn normalized(mut components: Vec<f64>) -> Result<Self> {
        let norm = l2(&components);
        if components.is_empty() || !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Degenerate("cannot normalize a zero vector".into()));
        }
        components.iter_mut().for_each(|x| *x /= norm);
        Ok(Self(components))
    }

    /// Standard basis vector `e_i` in dimension `d`.
    pub fn axis(d: usize, i: usize) -> Self {
        let mut v = vec![0.0; d];
        v[i] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|x| -x).collect())
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        dot(&self.0, other)
    }

    /// Angle to `other` ignoring sign, in radians.
    pub fn axis_angle(&self, other: &Direction) -> f64 {
        self.dot(&other.0).abs().min(1.0).acos()
    }
}

/// `k` pairwise orthonormal rows, each a [`Direction`] in dimension `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionMatrix {
    rows: Vec<Direction>,
}

impl ProjectionMatrix {
    pub fn new(rows: Vec<Direction>) -> Result<Self> {
        let Some(first) = rows.first() else {
            return Err(Error::Degenerate(
                "projection needs at least one row".into(),
            ));
        };
        let d = first.dim();
        if rows.len() > d {
            return Err(Error::Dimension(format!(
                "{} orthonormal rows cannot live in dimension {d}",
                rows.len()
            )));
        }
        for (i, r) in rows.iter().enumerate() {
            if r.dim() != d {
                return Err(Error::Dimension(format!(
                    "row {i} has dimension {}",
                    r.dim()
                )));
            }
            for (j, s) in rows.iter().enumerate().take(i) {
                let ip = r.dot(s.as_slice());
                if ip.abs() > ORTHO_TOL {
                    return Err(Error::Contract(format!(
                        "rows {j} and {i} are not orthogonal (inner product {ip:e})"
                    )));
                }
            }
        }
        Ok(Self { rows })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            rows: (0..d).map(|i| Direction::axis(d, i)).collect(),
        }
    }

    pub fn rows(&self) -> &[Direction] {
        &self.rows
    }

    /// Number of rows `k`.
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// Ambient dimension `d`.
    pub fn dim(&self) -> usize {
        self.rows[0].dim()
    }

    /// `k × d` matrix.
    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.k(), self.dim(), |i, j| self.rows[i].as_slice()[j])
    }
}

/// Index value at a direction, with the gradient when it is cheap.
///
/// For [`ProjectionIndex::evaluate`] the gradient is `∂Q/∂a` in the
/// ambient space (before any projection onto the sphere). For the
/// sample-level functions it is `∂Q/∂z`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexValue {
    pub value: f64,
    pub gradient: Option<Vec<f64>>,
}

/// How data must be transformed before an index is pursued.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preparation {
    /// Use the data as given.
    Raw,
    /// Subtract column means.
    Center,
    /// Center and whiten to identity covariance.
    Whiten,
}

/// A projection index `Q(Xa)` over directions `a`.
pub trait ProjectionIndex: Sync {
    fn name(&self) -> &str;

    fn preparation(&self) -> Preparation;

    fn has_gradient(&self) -> bool {
        true
    }

    /// Value and, when [`has_gradient`](Self::has_gradient), `∂Q/∂a`.
    /// `a` need not be exactly unit length.
    fn evaluate(&self, x: &DataMatrix, a: &[f64]) -> Result<IndexValue>;

    fn value(&self, x: &DataMatrix, a: &[f64]) -> Result<f64> {
        self.evaluate(x, a).map(|v| v.value)
    }
}

impl<T: ProjectionIndex + ?Sized> ProjectionIndex for &T {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn preparation(&self) -> Preparation {
        (**self).preparation()
    }
    fn has_gradient(&self) -> bool {
        (**self).has_gradient()
    }
    fn evaluate(&self, x: &DataMatrix, a: &[f64]) -> Result<IndexValue> {
        (**self).evaluate(x, a)
    }
    fn value(&self, x: &DataMatrix, a: &[f64]) -> Result<f64> {
        (**self).value(x, a)
    }
}

impl<T: ProjectionIndex + ?Sized> ProjectionIndex for Box<T> {
    fn name(&self) -> &str {
        (**self).name()
    }
    fn preparation(&self) -> Preparation {
        (**self).preparation()
    }
    fn has_gradient(&self) -> bool {
        (**self).has_gradient()
    }
    fn evaluate(&self, x: &DataMatrix, a: &[f64]) -> Result<IndexValue> {
        (**self).evaluate(x, a)
    }
    fn value(&self, x: &DataMatrix, a: &[f64]) -> Result<f64> {
        (**self).value(x, a)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn l2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Projects, scores the samples and pulls the sample gradient back through
/// `X^T`.
fn through_projection(
    x: &DataMatrix,
    a: &[f64],
    score: impl FnOnce(&[f64]) -> Result<IndexValue>,
) -> Result<IndexValue> {
    let z = x.project(a)?;
    let s = score(&z)?;
    let gradient = match s.gradient {
        Some(dz) => Some(x.transpose_times(&dz)?),
        None => None,
    };
    Ok(IndexValue {
        value: s.value,
        gradient,
    })
}

/// Sample variance of `X a` (`n - 1` denominator); gradient `2 Cov(X) a`.
pub fn variance_index(a: &Direction, x: &DataMatrix) -> Result<IndexValue> {
    VarianceIndex.evaluate(x, a.as_slice())
}

/// Mean of `X a`, i.e. `a · x̄`; gradient `x̄`.
pub fn mean_index(a: &Direction, x: &DataMatrix) -> Result<IndexValue> {
    MeanIndex.evaluate(x, a.as_slice())
}

fn variance_of_samples(z: &[f64]) -> Result<IndexValue> {
    let n = z.len();
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "variance needs at least 2 observations, got {n}"
        )));
    }
    let mean = z.iter().sum::<f64>() / n as f64;
    let denom = n as f64 - 1.0;
    let value = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / denom;
    let dz = z.iter().map(|v| 2.0 * (v - mean) / denom).collect();
    Ok(IndexValue {
        value,
        gradient: Some(dz),
    })
}

fn mean_of_samples(z: &[f64]) -> Result<IndexValue> {
    let n = z.len() as f64;
    Ok(IndexValue {
        value: z.iter().sum::<f64>() / n,
        gradient: Some(vec![1.0 / n; z.len()]),
    })
}

/// Centered samples with their plug-in (`1/n`) central moments.
struct Central {
    c: Vec<f64>,
    m2: f64,
}

fn central(z: &[f64]) -> Result<Central> {
    let n = z.len();
    if n < 2 {
        return Err(Error::Degenerate(format!(
            "need at least 2 projected samples, got {n}"
        )));
    }
    let nf = n as f64;
    let mean = z.iter().sum::<f64>() / nf;
    let c: Vec<f64> = z.iter().map(|v| v - mean).collect();
    let m2 = c.iter().map(|v| v * v).sum::<f64>() / nf;
    let scale = z.iter().map(|v| v * v).sum::<f64>() / nf;
    if !(m2 > 1e-24 * scale) {
        return Err(Error::Degenerate(
            "projected samples have zero variance".into(),
        ));
    }
    Ok(Central { c, m2 })
}

/// Cumulant approximation of negentropy, `κ3²/12 + κ4²/48`, where `κ3` and
/// `κ4` are the skewness and excess kurtosis of `z` after standardizing
/// with plug-in moments. The gradient is with respect to `z`.
pub fn cumulant_negentropy(z: &[f64]) -> Result<IndexValue> {
    let Central { c, m2 } = central(z)?;
    let nf = z.len() as f64;
    let m3 = c.iter().map(|v| v.powi(3)).sum::<f64>() / nf;
    let m4 = c.iter().map(|v| v.powi(4)).sum::<f64>() / nf;
    let k3 = m3 / m2.powf(1.5);
    let k4 = m4 / (m2 * m2) - 3.0;
    let value = k3 * k3 / 12.0 + k4 * k4 / 48.0;

    let dk3_dm3 = 1.0 / m2.powf(1.5);
    let dk3_dm2 = -1.5 * m3 / m2.powf(2.5);
    let dk4_dm4 = 1.0 / (m2 * m2);
    let dk4_dm2 = -2.0 * m4 / m2.powi(3);
    let gradient = c
        .iter()
        .map(|&ci| {
            let dm2 = 2.0 * ci / nf;
            let dm3 = 3.0 * (ci * ci - m2) / nf;
            let dm4 = 4.0 * (ci.powi(3) - m3) / nf;
            let dk3 = dk3_dm3 * dm3 + dk3_dm2 * dm2;
            let dk4 = dk4_dm4 * dm4 + dk4_dm2 * dm2;
            k3 / 6.0 * dk3 + k4 / 24.0 * dk4
        })
        .collect();
    Ok(IndexValue {
        value,
        gradient: Some(gradient),
    })
}

/// `log cosh(x)` without overflow.
fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Contrast `G(u) = log cosh(α u) / α`.
fn logcosh_contrast(u: f64, alpha: f64) -> f64 {
    log_cosh(alpha * u) / alpha
}

/// `E[G(ν)]` for `ν ~ N(0, 1)` by Simpson quadrature on `[-12, 12]`.
pub fn logcosh_gaussian_baseline(alpha: f64) -> f64 {
    quad::simpson(
        |x| normal_pdf(x) * logcosh_contrast(x, alpha),
        -12.0,
        12.0,
        4000,
    )
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(1.0..=2.0).contains(&alpha) {
        return Err(Error::OutOfRange {
            what: "log-cosh alpha",
            detail: format!("{alpha} not in [1, 2]"),
        });
    }
    Ok(())
}

/// Non-polynomial negentropy approximation `½ (mean G(u) - γ_α)²` with
/// `G(u) = log cosh(α u)/α`, `u` the standardized samples and `γ_α` the
/// Gaussian expectation of `G`. The gradient is with respect to `z`.
pub fn logcosh_negentropy(z: &[f64], alpha: f64) -> Result<IndexValue> {
    check_alpha(alpha)?;
    logcosh_with_baseline(z, alpha, logcosh_gaussian_baseline(alpha))
}

fn logcosh_with_baseline(z: &[f64], alpha: f64, baseline: f64) -> Result<IndexValue> {
    let Central { c, m2 } = central(z)?;
    let nf = z.len() as f64;
    let s = m2.sqrt();
    let u: Vec<f64> = c.iter().map(|v| v / s).collect();
    let g_mean = u.iter().map(|&v| logcosh_contrast(v, alpha)).sum::<f64>() / nf;
    let deriv: Vec<f64> = u.iter().map(|&v| (alpha * v).tanh()).collect();
    let d_mean = deriv.iter().sum::<f64>() / nf;
    let du_mean = deriv.iter().zip(&u).map(|(g, v)| g * v).sum::<f64>() / nf;
    let gap = g_mean - baseline;
    let gradient = deriv
        .iter()
        .zip(&u)
        .map(|(&g, &v)| gap * ((g - d_mean) - du_mean * v) / (s * nf))
        .collect();
    Ok(IndexValue {
        value: 0.5 * gap * gap,
        gradient: Some(gradient),
    })
}

/// Sample variance of the projection. Pursued on centered data.
#[derive(Debug, Clone, Copy, Default)]
pub struct VarianceIndex;

impl ProjectionIndex for VarianceIndex {
    fn name(&self) -> &str {
        "variance"
    }
    fn preparation(&self) -> Preparation {
        Preparation::Center
    }
    fn evaluate(&self, x: &DataMatrix, a: &[f64]) -> Result<IndexValue> {
        through_projection(x, a, variance_of_samples)
    }
}

/// Sample mean of the projection. Pursued on raw data, since centering
/// would zero it.
#[derive(Debug, Clone, Copy, Default)]
pub struct MeanIndex;

impl ProjectionIndex for MeanIndex {
    fn name(&self) -> &str {
        "mean"
    }
    fn preparation(&self) -> Preparation {
        Preparation::Raw
    }
    fn evaluate(&self, x: &DataMatrix, a: &[f64]) -> Result<IndexValue> {
        through_projection(x, a, mean_of_samples)
    }
}

/// [`cumulant_negentropy`] as a pursuit index. Pursued on whitened data.
#[derive(Debug, Clone, Copy, Default)]
pub struct CumulantIndex;

impl ProjectionIndex for CumulantIndex {
    fn name(&self) -> &str {
        "cumulant"
    }
    fn preparation(&self) -> Preparation {
        Preparation::Whiten
    }
    fn evaluate(&self, x: &DataMatrix, a: &[f64]) -> Result<IndexValue> {
        through_projection(x, a, cumulant_negentropy)
    }
}

/// [`logcosh_negentropy`] as a pursuit index, with the Gaussian baseline
/// computed once. Pursued on whitened data.
#[derive(Debug, Clone, Copy)]
pub struct LogCoshIndex {
    alpha: f64,
    baseline: f64,
}

impl LogCoshIndex {
    pub const DEFAULT_ALPHA: f64 = 1.0;

    pub fn new(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha,
            baseline: logcosh_gaussian_baseline(alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn baseline(&self) -> f64 {
        self.baseline
    }
}

impl Default for LogCoshIndex {
    fn default() -> Self {
        Self::new(Self::DEFAULT_ALPHA).expect("default alpha is in range")
    }
}

impl ProjectionIndex for LogCoshIndex {
    fn name(&self) -> &str {
        "logcosh"
    }
    fn preparation(&self) -> Preparation {
        Preparation::Whiten
    }
    fn evaluate(&self, x: &DataMatrix, a: &[f64]) -> Result<IndexValue> {
        through_projection(x, a, |z| {
            logcosh_with_baseline(z, self.alpha, self.baseline)
        })
    }
}

/// Mean and covariance of one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub mean: Vec<f64>,
    pub cov: DMatrix<f64>,
}

impl ClassStats {
    pub fn new(mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Self> {
        if !cov.is_square() || cov.nrows() != mean.len() {
            return Err(Error::Dimension(format!(
                "mean of length {} with {}x{} covariance",
                mean.len(),
                cov.nrows(),
                cov.ncols()
            )));
        }
        Ok(Self { mean, cov })
    }

    /// Sample mean and covariance of the rows of `x`.
    pub fn from_data(x: &DataMatrix) -> Result<Self> {
        Ok(Self {
            mean: x.column_means(),
            cov: crate::linalg::covariance(x)?,
        })
    }
}

/// Fisher's discriminant ratio `(a·(μ1 - μ2))² / (aᵀ Σ a)` with `Σ` the
/// average of the two class covariances.
#[derive(Debug, Clone)]
pub struct LdaIndex {
    diff: Vec<f64>,
    sigma: DMatrix<f64>,
}

impl LdaIndex {
    pub fn new(class1: &ClassStats, class2: &ClassStats) -> Result<Self> {
        if class1.mean.len() != class2.mean.len() {
            return Err(Error::Dimension("class dimensions differ".into()));
        }
        let sigma = (&class1.cov + &class2.cov) * 0.5;
        Self::with_shared_covariance(&class1.mean, &class2.mean, sigma)
    }

    pub fn with_shared_covariance(mu1: &[f64], mu2: &[f64], sigma: DMatrix<f64>) -> Result<Self> {
        if mu1.len() != mu2.len() || sigma.nrows() != mu1.len() || !sigma.is_square() {
            return Err(Error::Dimension(format!(
                "means of length {} and {} with {}x{} covariance",
                mu1.len(),
                mu2.len(),
                sigma.nrows(),
                sigma.ncols()
            )));
        }
        if sigma.clone().cholesky().is_none() {
            return Err(Error::Contract(
                "shared covariance is not positive definite".into(),
            ));
        }
        let diff = mu1.iter().zip(mu2).map(|(a, b)| a - b).collect();
        Ok(Self { diff, sigma })
    }

    pub fn shared_covariance(&self) -> &DMatrix<f64> {
        &self.sigma
    }
}

impl ProjectionIndex for LdaIndex {
    fn name(&self) -> &str {
        "lda"
    }
    fn preparation(&self) -> Preparation {
        Preparation::Raw
    }
    /// The data argument only fixes the dimension; the ratio depends on the
    /// class statistics alone.
    fn evaluate(&self, x: &DataMatrix, a: &[f64]) -> Result<IndexValue> {
        if a.len() != self.diff.len() || x.n_cols() != a.len() {
            return Err(Error::Dimension(format!(
                "direction of length {} for {}-dimensional classes",
                a.len(),
                self.diff.len()
            )));
        }
        Ok(self.ratio(a))
    }
}

impl LdaIndex {
    fn ratio(&self, a: &[f64]) -> IndexValue {
        let av = DVector::from_column_slice(a);
        let sa = &self.sigma * &av;
        let q = av.dot(&sa);
        let p = dot(a, &self.diff);
        let value = p * p / q;
        let gradient = self
            .diff
            .iter()
            .zip(sa.iter())
            .map(|(d, s)| 2.0 * p * d / q - 2.0 * p * p * s / (q * q))
            .collect();
        IndexValue {
            value,
            gradient: Some(gradient),
        }
    }
}

/// Fisher's discriminant ratio at `a` for two classes sharing the pooled
/// covariance `(Σ1 + Σ2)/2`.
pub fn lda_index(a: &Direction, class1: &ClassStats, class2: &ClassStats) -> Result<IndexValue> {
    let idx = LdaIndex::new(class1, class2)?;
    if a.dim() != idx.diff.len() {
        return Err(Error::Dimension(format!(
            "direction of length {} for {}-dimensional classes",
            a.dim(),
            idx.diff.len()
        )));
    }
    Ok(idx.ratio(a.as_slice()))
}

/// Closed-form maximizer of the discriminant ratio, `Σ⁻¹(μ1 - μ2)`
/// normalized.
pub fn lda_direction(mu1: &[f64], mu2: &[f64], sigma: &DMatrix<f64>) -> Result<Direction> {
    if mu1.len() != mu2.len() || sigma.nrows() != mu1.len() || !sigma.is_square() {
        return Err(Error::Dimension(
            "means and covariance disagree in size".into(),
        ));
    }
    let diff = DVector::from_iterator(mu1.len(), mu1.iter().zip(mu2).map(|(a, b)| a - b));
    if diff.iter().all(|&v| v == 0.0) {
        return Err(Error::Degenerate("class means are equal".into()));
    }
    let chol = sigma
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Contract("covariance is singular or not positive definite".into()))?;
    Direction::normalized(chol.solve(&diff).as_slice().to_vec())
}

/// Pearson correlation of `X a` and `Y b`.
pub fn cca_index(a: &Direction, b: &Direction, x: &DataMatrix, y: &DataMatrix) -> Result<f64> {
    if x.n_rows() != y.n_rows() {
        return Err(Error::Dimension(format!(
            "X has {} rows, Y has {}",
            x.n_rows(),
            y.n_rows()
        )));
    }
    let u = x.project(a.as_slice())?;
    let v = y.project(b.as_slice())?;
    let n = u.len() as f64;
    let mu = u.iter().sum::<f64>() / n;
    let mv = v.iter().sum::<f64>() / n;
    let (mut suv, mut suu, mut svv) = (0.0, 0.0, 0.0);
    for (p, q) in u.iter().zip(&v) {
        let (p, q) = (p - mu, q - mv);
        suv += p * q;
        suu += p * p;
        svv += q * q;
    }
    if !(suu > 0.0) || !(svv > 0.0) {
        return Err(Error::Degenerate("projected variance is zero".into()));
    }
    Ok((suv / (suu.sqrt() * svv.sqrt())).clamp(-1.0, 1.0))
}

/// Pairwise squared-distance distortion between `X` and its embedding `Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JlDistortion {
    /// `Σ_{i<j} | ‖z_i - z_j‖² - ‖x_i - x_j‖² |`.
    pub sum_abs: f64,
    /// `max_{i<j} | ‖z_i - z_j‖² / ‖x_i - x_j‖² - 1 |` over pairs with distinct `x`.
    pub max_relative: f64,
    /// Pairs skipped in `max_relative` because `x_i = x_j`.
    pub skipped_pairs: usize,
}

pub fn jl_distortion(x: &DataMatrix, z: &DataMatrix) -> Result<JlDistortion> {
    let n = x.n_rows();
    if z.n_rows() != n {
        return Err(Error::Dimension(format!(
            "X has {n} rows, Z has {}",
            z.n_rows()
        )));
    }
    let xs: Vec<Vec<f64>> = (0..n).map(|i| x.row(i)).collect();
    let zs: Vec<Vec<f64>> = (0..n).map(|i| z.row(i)).collect();
    let sq = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum::<f64>();
    let mut out = JlDistortion {
        sum_abs: 0.0,
        max_relative: 0.0,
        skipped_pairs: 0,
    };
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = sq(&xs[i], &xs[j]);
            let dz = sq(&zs[i], &zs[j]);
            out.sum_abs += (dz - dx).abs();
            if dx == 0.0 {
                out.skipped_pairs += 1;
            } else {
                out.max_relative = out.max_relative.max((dz / dx - 1.0).abs());
            }
        }
    }
    Ok(out)
}

/// Sub-stream reserved for random projection matrices.
const PROJECTION_STREAM: u32 = 0x6a6c;

/// `r × d` Gaussian sketch with entries `N(0, 1)/√r`, deterministic per seed.
pub fn random_projection(d: usize, r: usize, seed: u64) -> Result<DMatrix<f64>> {
    if r == 0 || d == 0 || r > d {
        return Err(Error::Dimension(format!(
            "need 1 <= r <= d, got r = {r}, d = {d}"
        )));
    }
    // a dedicated stream, so data drawn from the same seed stays independent
    let mut rng = random::substream(seed, PROJECTION_STREAM, 0);
    let scale = 1.0 / (r as f64).sqrt();
    let entries = random::standard_normals(&mut rng, r * d);
    Ok(DMatrix::from_row_iterator(
        r,
        d,
        entries.into_iter().map(|v| v * scale),
    ))
}

/// `X Aᵀ` for an arbitrary `r × d` matrix `A`.
pub fn apply_linear_map(x: &DataMatrix, a: &DMatrix<f64>) -> Result<DataMatrix> {
    if a.ncols() != x.n_cols() {
        return Err(Error::Dimension(format!(
            "map has {} columns, data has {}",
            a.ncols(),
            x.n_cols()
        )));
    }
    DataMatrix::from_matrix(x.as_matrix() * a.transpose())
}

/// Turns a maximization index into a minimization one.
#[derive(Debug, Clone)]
pub struct Negated<I>(pub I);

impl<I: ProjectionIndex> ProjectionIndex for Negated<I> {
    fn name(&self) -> &str {
        self.0.name()
    }
    fn preparation(&self) -> Preparation {
        self.0.preparation()
    }
    fn has_gradient(&self) -> bool {
        self.0.has_gradient()
    }
    fn evaluate(&self, x: &DataMatrix, a: &[f64]) -> Result<IndexValue> {
        let v = self.0.evaluate(x, a)?;
        Ok(IndexValue {
            value: -v.value,
            gradient: v.gradient.map(|g| g.into_iter().map(|x| -x).collect()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direction_checks_norm() {
        assert!(Direction::new(vec![0.6, 0.8]).is_ok());
        assert!(Direction::new(vec![1.0, 1.0]).is_err());
        assert!(Direction::normalized(vec![0.0, 0.0]).is_err());
        let d = Direction::normalized(vec![3.0, 4.0]).unwrap();
        assert_eq!(d.as_slice(), [0.6, 0.8]);
    }

    #[test]
    fn projection_matrix_checks_orthogonality() {
        let a = Direction::axis(3, 0);
        let b = Direction::normalized(vec![1.0, 1.0, 0.0]).unwrap();
        assert!(ProjectionMatrix::new(vec![a.clone(), b]).is_err());
        assert!(ProjectionMatrix::new(vec![a, Direction::axis(3, 2)]).is_ok());
    }

    #[test]
    fn mean_index_examples() {
        let x = DataMatrix::from_rows(&[[2.0, 4.0], [4.0, 4.0]]).unwrap();
        let a = Direction::new(vec![0.6, 0.8]).unwrap();
        let v = mean_index(&a, &x).unwrap();
        assert!((v.value - 5.0).abs() < 1e-12);
        let g = v.gradient.unwrap();
        assert!((g[0] - 3.0).abs() < 1e-12 && (g[1] - 4.0).abs() < 1e-12);
        let neg = mean_index(&a.negated(), &x).unwrap();
        assert!((neg.value + 5.0).abs() < 1e-12);

        let zero_mean = DataMatrix::from_rows(&[[1.0, -2.0], [-1.0, 2.0]]).unwrap();
        for a in [vec![1.0, 0.0], vec![0.6, -0.8]] {
            let a = Direction::new(a).unwrap();
            assert_eq!(mean_index(&a, &zero_mean).unwrap().value, 0.0);
        }
    }

    #[test]
    fn variance_index_needs_two_rows() {
        let x = DataMatrix::from_rows(&[[1.0, 2.0]]).unwrap();
        assert!(variance_index(&Direction::axis(2, 0), &x).is_err());
    }

    #[test]
    fn sample_indexes_reject_constant() {
        assert!(cumulant_negentropy(&[3.0; 50]).is_err());
        assert!(logcosh_negentropy(&[3.0; 50], 1.0).is_err());
        assert!(logcosh_negentropy(&[1.0, 2.0, 3.0], 0.5).is_err());
    }

    #[test]
    fn rademacher_cumulant_is_exact() {
        let z: Vec<f64> = (0..1000)
            .map(|i| if i % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        let v = cumulant_negentropy(&z).unwrap().value;
        assert!((v - 1.0 / 12.0).abs() < 1e-12);
    }

    #[test]
    fn logcosh_is_even() {
        let z: Vec<f64> = (0..200)
            .map(|i| ((i * 37) % 101) as f64 / 7.0 - 3.0)
            .collect();
        let neg: Vec<f64> = z.iter().map(|v| -v).collect();
        let a = logcosh_negentropy(&z, 1.3).unwrap().value;
        let b = logcosh_negentropy(&neg, 1.3).unwrap().value;
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn log_cosh_is_stable() {
        assert!((log_cosh(0.0)).abs() < 1e-16);
        assert!((log_cosh(1.0) - 1f64.cosh().ln()).abs() < 1e-15);
        assert!((log_cosh(800.0) - (800.0 - std::f64::consts::LN_2)).abs() < 1e-9);
    }

    #[test]
    fn lda_examples() {
        let id = DMatrix::identity(2, 2);
        let a = Direction::new(vec![0.6, 0.8]).unwrap();
        let c1 = ClassStats::new(vec![3.0, 4.0], id.clone()).unwrap();
        let c2 = ClassStats::new(vec![0.0, 0.0], id.clone()).unwrap();
        assert!((lda_index(&a, &c1, &c2).unwrap().value - 25.0).abs() < 1e-12);
        let same = lda_index(&a, &c1, &c1).unwrap();
        assert_eq!(same.value, 0.0);

        let sigma = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0]));
        let c1 = ClassStats::new(vec![0.0, 2.0], sigma.clone()).unwrap();
        let c2 = ClassStats::new(vec![0.0, 0.0], sigma.clone()).unwrap();
        let best = lda_index(&Direction::axis(2, 1), &c1, &c2).unwrap().value;
        assert!((best - 1.0).abs() < 1e-12);

        let singular = ClassStats::new(vec![1.0, 0.0], DMatrix::zeros(2, 2)).unwrap();
        assert!(lda_index(&a, &singular, &singular).is_err());
    }

    #[test]
    fn lda_direction_examples() {
        let id = DMatrix::identity(2, 2);
        let a = lda_direction(&[3.0, 4.0], &[0.0, 0.0], &id).unwrap();
        assert!((a.as_slice()[0] - 0.6).abs() < 1e-12 && (a.as_slice()[1] - 0.8).abs() < 1e-12);
        let sigma = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 4.0]));
        let a = lda_direction(&[0.0, 2.0], &[0.0, 0.0], &sigma).unwrap();
        assert!(a.as_slice()[0].abs() < 1e-12 && (a.as_slice()[1] - 1.0).abs() < 1e-12);
        let a = lda_direction(&[1.0, 0.0], &[0.0, 0.0], &id).unwrap();
        assert_eq!(a.as_slice(), [1.0, 0.0]);

        assert!(matches!(
            lda_direction(&[1.0, 1.0], &[1.0, 1.0], &id),
            Err(Error::Degenerate(_))
        ));
        assert!(lda_direction(&[1.0, 0.0], &[0.0, 0.0], &DMatrix::zeros(2, 2)).is_err());
    }

    #[test]
    fn cca_examples() {
        let x = DataMatrix::from_rows(&[[1.0, 0.0], [2.0, 1.0], [0.0, 3.0], [4.0, -1.0]]).unwrap();
        let neg = DataMatrix::from_matrix(-x.as_matrix()).unwrap();
        let a = Direction::normalized(vec![1.0, 2.0]).unwrap();
        assert!((cca_index(&a, &a, &x, &x).unwrap() - 1.0).abs() < 1e-12);
        assert!((cca_index(&a, &a, &x, &neg).unwrap() + 1.0).abs() < 1e-12);
        let flat = DataMatrix::from_rows(&[[1.0], [1.0], [1.0], [1.0]]).unwrap();
        assert!(cca_index(&a, &Direction::axis(1, 0), &x, &flat).is_err());
    }

    #[test]
    fn jl_distortion_examples() {
        let x = DataMatrix::from_rows(&[[0.0, 1.0], [2.0, 3.0], [-1.0, 5.0], [0.0, 1.0]]).unwrap();
        let same = jl_distortion(&x, &x).unwrap();
        assert_eq!((same.sum_abs, same.max_relative), (0.0, 0.0));
        assert_eq!(same.skipped_pairs, 1);
        let doubled = DataMatrix::from_matrix(x.as_matrix() * 2.0).unwrap();
        let d = jl_distortion(&x, &doubled).unwrap();
        assert!((d.max_relative - 3.0).abs() < 1e-12);
    }

    #[test]
    fn random_projection_shape_and_determinism() {
        let a = random_projection(20, 5, 7).unwrap();
        assert_eq!(a.shape(), (5, 20));
        assert_eq!(a, random_projection(20, 5, 7).unwrap());
        assert_ne!(a, random_projection(20, 5, 8).unwrap());
        assert_eq!(random_projection(1, 1, 3).unwrap().shape(), (1, 1));
        assert!(random_projection(3, 4, 0).is_err());
    }

    #[test]
    fn negation_flips_value_and_gradient() {
        let x = DataMatrix::from_rows(&[[2.0, 4.0], [4.0, 4.0]]).unwrap();
        let v = Negated(MeanIndex).evaluate(&x, &[0.6, 0.8]).unwrap();
        assert!((v.value + 5.0).abs() < 1e-12);
        assert!((v.gradient.unwrap()[1] + 4.0).abs() < 1e-12);
    }
}
