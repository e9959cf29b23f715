//! Projection pursuit: maximize a [`ProjectionIndex`] over the unit sphere.
//!
//! Each restart runs projected-gradient ascent along great circles with an
//! Armijo backtracking line search, so the index value never decreases
//! within a restart. Extra directions are found by deflation: the iterate
//! and the gradient are kept orthogonal to every previously found
//! direction.
//!
//! Restart `i` of direction `j` draws its starting point from the seeded
//! sub-stream `(j, i)`. Changing the number of restarts therefore leaves
//! the existing restarts untouched, and results are bit-identical for
//! identical inputs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::indexes::{Direction, Preparation, ProjectionIndex, ProjectionMatrix};
use crate::linalg::{self, DataMatrix, Whitening};
use crate::random;

/// Armijo sufficient-increase constant.
const ARMIJO: f64 = 1e-4;

/// Above this dimension finite-difference gradients emit a cost warning.
const FD_WARN_DIM: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradientMode {
    /// Use the index's analytic gradient, falling back to finite differences
    /// when it has none.
    #[default]
    AnalyticIfAvailable,
    FiniteDifference,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PursuitConfig {
    pub restarts: usize,
    pub max_iters: usize,
    /// Initial great-circle step, in radians.
    pub step_init: f64,
    /// Stop once an accepted step moves the direction by less than this.
    pub tol: f64,
    pub seed: u64,
    pub gradient_mode: GradientMode,
    /// Largest `k` accepted by [`pursue_k`].
    pub max_k: usize,
}

impl Default for PursuitConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_iters: 500,
            step_init: 1.0,
            tol: 1e-7,
            seed: 0,
            gradient_mode: GradientMode::AnalyticIfAvailable,
            max_k: 3,
        }
    }
}

impl PursuitConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::OutOfRange {
                what: "restarts",
                detail: "must be at least 1".into(),
            });
        }
        if self.max_iters == 0 {
            return Err(Error::OutOfRange {
                what: "max_iters",
                detail: "must be at least 1".into(),
            });
        }
        if !(self.tol > 0.0) {
            return Err(Error::OutOfRange {
                what: "tol",
                detail: format!("{} is not positive", self.tol),
            });
        }
        if !(self.step_init > 0.0) || !self.step_init.is_finite() {
            return Err(Error::OutOfRange {
                what: "step_init",
                detail: format!("{} is not a positive finite step", self.step_init),
            });
        }
        Ok(())
    }
}

/// One accepted iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub iteration: usize,
    pub value: f64,
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartTrace {
    pub restart: usize,
    pub initial_value: f64,
    pub steps: Vec<TraceStep>,
    /// Value at the final iterate; `NaN` if the restart failed.
    pub final_value: f64,
    pub converged: bool,
    /// Failure message when the index could not be evaluated.
    pub error: Option<String>,
}

/// Best direction from [`pursue_one`].
#[derive(Debug, Clone, PartialEq)]
pub struct OneResult {
    pub direction: Direction,
    pub value: f64,
    pub traces: Vec<RestartTrace>,
    pub chosen_restart: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PursuitResult {
    pub directions: ProjectionMatrix,
    pub values: Vec<f64>,
    /// `traces[j]` holds every restart for direction `j`.
    pub traces: Vec<Vec<RestartTrace>>,
    pub chosen_restart: Vec<usize>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

/// Removes the components of `v` along each (orthonormal) basis vector.
fn remove_span(v: &mut [f64], basis: &[Direction]) {
    // two passes of modified Gram-Schmidt
    for _ in 0..2 {
        for b in basis {
            let p = b.dot(v);
            v.iter_mut()
                .zip(b.as_slice())
                .for_each(|(x, y)| *x -= p * y);
        }
    }
}

fn check_basis(basis: &[Direction], d: usize) -> Result<()> {
    for (i, b) in basis.iter().enumerate() {
        if b.dim() != d {
            return Err(Error::Dimension(format!(
                "constraint {i} has dimension {}, data has {d}",
                b.dim()
            )));
        }
        for (j, c) in basis.iter().enumerate().take(i) {
            if b.dot(c.as_slice()).abs() > crate::indexes::ORTHO_TOL {
                return Err(Error::Contract(format!(
                    "constraints {j} and {i} are not orthogonal"
                )));
            }
        }
    }
    if basis.len() >= d {
        return Err(Error::Dimension(format!(
            "{} constraints leave no free direction in dimension {d}",
            basis.len()
        )));
    }
    Ok(())
}

struct Evaluator<'a, I: ?Sized> {
    x: &'a DataMatrix,
    index: &'a I,
    finite_difference: bool,
}

impl<I: ProjectionIndex + ?Sized> Evaluator<'_, I> {
    fn value(&self, a: &[f64]) -> Result<f64> {
        let v = self.index.value(self.x, a)?;
        if v.is_nan() {
            return Err(Error::Degenerate("index evaluated to NaN".into()));
        }
        Ok(v)
    }

    fn value_and_gradient(&self, a: &[f64]) -> Result<(f64, Vec<f64>)> {
        if self.finite_difference {
            let value = self.value(a)?;
            return Ok((value, self.central_difference(a)?));
        }
        let v = self.index.evaluate(self.x, a)?;
        if v.value.is_nan() {
            return Err(Error::Degenerate("index evaluated to NaN".into()));
        }
        let g = v.gradient.ok_or_else(|| {
            Error::Contract(format!("index {} has no gradient", self.index.name()))
        })?;
        Ok((v.value, g))
    }

    fn central_difference(&self, a: &[f64]) -> Result<Vec<f64>> {
        let mut probe = a.to_vec();
        let mut g = Vec::with_capacity(a.len());
        for i in 0..a.len() {
            let h = 1e-5 * (1.0 + a[i].abs());
            probe[i] = a[i] + h;
            let up = self.value(&probe)?;
            probe[i] = a[i] - h;
            let down = self.value(&probe)?;
            probe[i] = a[i];
            g.push((up - down) / (2.0 * h));
        }
        Ok(g)
    }
}

struct RestartOutcome {
    direction: Vec<f64>,
    trace: RestartTrace,
}

fn ascend<I: ProjectionIndex + ?Sized>(
    eval: &Evaluator<'_, I>,
    basis: &[Direction],
    cfg: &PursuitConfig,
    restart: usize,
    start: Vec<f64>,
) -> std::result::Result<RestartOutcome, (usize, Error)> {
    let mut a = start;
    let (mut q, mut g) = eval.value_and_gradient(&a).map_err(|e| (0, e))?;
    let mut trace = RestartTrace {
        restart,
        initial_value: q,
        steps: Vec::new(),
        final_value: q,
        converged: false,
        error: None,
    };
    let mut step_try = cfg.step_init;

    for iteration in 1..=cfg.max_iters {
        // Riemannian gradient: drop the radial part and the deflated span
        let radial = dot(&g, &a);
        g.iter_mut().zip(&a).for_each(|(x, y)| *x -= radial * y);
        remove_span(&mut g, basis);
        let slope = normalize(&mut g);
        if !(slope > 1e-14 * (1.0 + q.abs())) {
            trace.converged = true;
            break;
        }

        let mut s = step_try;
        let mut accepted = None;
        while s >= 0.5 * cfg.tol {
            let (sin, cos) = s.sin_cos();
            let mut cand: Vec<f64> = a.iter().zip(&g).map(|(p, t)| cos * p + sin * t).collect();
            remove_span(&mut cand, basis);
            normalize(&mut cand);
            let qc = eval.value(&cand).map_err(|e| (iteration, e))?;
            if qc >= q + ARMIJO * s * slope {
                accepted = Some(cand);
                break;
            }
            s *= 0.5;
        }
        let Some(next) = accepted else {
            trace.converged = true;
            break;
        };

        let moved = a
            .iter()
            .zip(&next)
            .map(|(p, r)| (p - r) * (p - r))
            .sum::<f64>()
            .sqrt();
        a = next;
        let (qn, gn) = eval.value_and_gradient(&a).map_err(|e| (iteration, e))?;
        q = qn;
        g = gn;
        trace.steps.push(TraceStep {
            iteration,
            value: q,
            step: s,
        });
        step_try = (2.0 * s).min(cfg.step_init);
        if moved < cfg.tol {
            trace.converged = true;
            break;
        }
    }
    trace.final_value = q;
    Ok(RestartOutcome {
        direction: a,
        trace,
    })
}

/// Finds the direction maximizing `index` on `x`, orthogonal to every
/// direction in `orthogonal_to` (which must be orthonormal).
///
/// `x` must already be prepared as the index requires (see
/// [`ProjectionIndex::preparation`] and [`prepare`]). Restarts that fail are
/// recorded in their trace; the call errors only if every restart fails.
pub fn pursue_one<I: ProjectionIndex + ?Sized>(
    x: &DataMatrix,
    index: &I,
    orthogonal_to: &[Direction],
    cfg: &PursuitConfig,
) -> Result<OneResult> {
    cfg.validate()?;
    let d = x.n_cols();
    check_basis(orthogonal_to, d)?;

    let finite_difference =
        cfg.gradient_mode == GradientMode::FiniteDifference || !index.has_gradient();
    if finite_difference && d > FD_WARN_DIM {
        log::warn!(
            "finite-difference gradients in dimension {d} cost {} index evaluations per iteration",
            2 * d
        );
    }
    let eval = Evaluator {
        x,
        index,
        finite_difference,
    };
    let slot = orthogonal_to.len() as u32;

    let outcomes: Vec<_> = (0..cfg.restarts)
        .into_par_iter()
        .map(|restart| {
            let mut rng = random::substream(cfg.seed, slot, restart as u32);
            let mut start = random::unit_sphere(&mut rng, d);
            remove_span(&mut start, orthogonal_to);
            if normalize(&mut start) < 1e-8 {
                // start landed in the deflated span; fall back to a basis axis
                start = (0..d)
                    .map(|i| {
                        let mut e = Direction::axis(d, i).into_vec();
                        remove_span(&mut e, orthogonal_to);
                        e
                    })
                    .max_by(|p, q| dot(p, p).total_cmp(&dot(q, q)))
                    .expect("d > 0");
                normalize(&mut start);
            }
            ascend(&eval, orthogonal_to, cfg, restart, start)
        })
        .collect();

    let mut traces = Vec::with_capacity(cfg.restarts);
    let mut best: Option<(usize, Vec<f64>, f64)> = None;
    let mut first_failure = None;
    for (restart, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(RestartOutcome { direction, trace }) => {
                let v = trace.final_value;
                if best.as_ref().is_none_or(|(_, _, bv)| v > *bv) {
                    best = Some((restart, direction, v));
                }
                traces.push(trace);
            }
            Err((iteration, err)) => {
                traces.push(RestartTrace {
                    restart,
                    initial_value: f64::NAN,
                    steps: Vec::new(),
                    final_value: f64::NAN,
                    converged: false,
                    error: Some(err.to_string()),
                });
                first_failure.get_or_insert((restart, iteration, err));
            }
        }
    }

    match best {
        Some((chosen_restart, direction, value)) => Ok(OneResult {
            direction: Direction::normalized(direction)?,
            value,
            traces,
            chosen_restart,
        }),
        None => {
            let (restart, iteration, source) = first_failure.expect("at least one restart ran");
            Err(Error::Optimizer {
                restart,
                iteration,
                source: Box::new(source),
            })
        }
    }
}

/// Extracts `k` orthonormal directions by sequential deflation.
pub fn pursue_k<I: ProjectionIndex + ?Sized>(
    x: &DataMatrix,
    index: &I,
    k: usize,
    cfg: &PursuitConfig,
) -> Result<PursuitResult> {
    let d = x.n_cols();
    if k == 0 || k > d {
        return Err(Error::Dimension(format!(
            "cannot extract {k} directions from {d} features"
        )));
    }
    if k > cfg.max_k {
        return Err(Error::OutOfRange {
            what: "number of directions",
            detail: format!("{k} exceeds configured maximum {}", cfg.max_k),
        });
    }
    let mut found: Vec<Direction> = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    let mut traces = Vec::with_capacity(k);
    let mut chosen = Vec::with_capacity(k);
    for _ in 0..k {
        let one = pursue_one(x, index, &found, cfg)?;
        found.push(one.direction);
        values.push(one.value);
        traces.push(one.traces);
        chosen.push(one.chosen_restart);
    }
    Ok(PursuitResult {
        directions: ProjectionMatrix::new(found)?,
        values,
        traces,
        chosen_restart: chosen,
    })
}

/// Data transformed as an index requires, with the map back to input
/// coordinates.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub data: DataMatrix,
    pub whitening: Option<Whitening>,
}

impl Prepared {
    /// Unit direction in input coordinates whose projection is proportional
    /// to the projection along `a` in prepared coordinates.
    pub fn input_direction(&self, a: &Direction) -> Result<Direction> {
        match &self.whitening {
            Some(w) => Direction::normalized(w.input_direction(a.as_slice())),
            None => Ok(a.clone()),
        }
    }
}

pub fn prepare(x: &DataMatrix, how: Preparation) -> Result<Prepared> {
    Ok(match how {
        Preparation::Raw => Prepared {
            data: x.clone(),
            whitening: None,
        },
        Preparation::Center => Prepared {
            data: x.centered(),
            whitening: None,
        },
        Preparation::Whiten => {
            let w = linalg::whiten(x)?;
            Prepared {
                data: w.data.clone(),
                whitening: Some(w),
            }
        }
    })
}

/// Principal axes from the covariance eigendecomposition.
#[derive(Debug, Clone)]
pub struct Pca {
    pub components: ProjectionMatrix,
    /// Variance along each component, descending.
    pub explained_variances: Vec<f64>,
    pub mean: Vec<f64>,
}

pub fn pca(x: &DataMatrix, k: usize) -> Result<Pca> {
    let d = x.n_cols();
    if k == 0 || k > d {
        return Err(Error::Dimension(format!(
            "cannot extract {k} components from {d} features"
        )));
    }
    let eig = linalg::sym_eigen(&linalg::covariance(x)?)?;
    let rows = (0..k)
        .map(|j| Direction::normalized(eig.eigenvector(j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Pca {
        components: ProjectionMatrix::new(rows)?,
        explained_variances: eig.eigenvalues[..k].to_vec(),
        mean: x.column_means(),
    })
}

/// `Z = X Aᵀ`: coordinates of each row along the rows of `A`.
pub fn embed(x: &DataMatrix, a: &ProjectionMatrix) -> Result<DataMatrix> {
    if a.dim() != x.n_cols() {
        return Err(Error::Dimension(format!(
            "projection has dimension {}, data has {} columns",
            a.dim(),
            x.n_cols()
        )));
    }
    DataMatrix::from_matrix(x.as_matrix() * a.to_matrix().transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indexes::{MeanIndex, VarianceIndex};

    #[test]
    fn config_validation() {
        let x = DataMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0], [0.0, 0.5]]).unwrap();
        let bad = PursuitConfig {
            restarts: 0,
            ..Default::default()
        };
        assert!(pursue_one(&x, &VarianceIndex, &[], &bad).is_err());
        let bad = PursuitConfig {
            tol: 0.0,
            ..Default::default()
        };
        assert!(pursue_one(&x, &VarianceIndex, &[], &bad).is_err());
    }

    #[test]
    fn constraints_must_leave_room() {
        let x = DataMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0], [0.0, 0.5]]).unwrap();
        let full = [Direction::axis(2, 0), Direction::axis(2, 1)];
        assert!(pursue_one(&x, &VarianceIndex, &full, &PursuitConfig::default()).is_err());
        let skew = [
            Direction::axis(2, 0),
            Direction::normalized(vec![1.0, 1.0]).unwrap(),
        ];
        assert!(pursue_one(&x, &MeanIndex, &skew[..2], &PursuitConfig::default()).is_err());
    }

    #[test]
    fn pursue_k_bounds() {
        let x = DataMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0], [0.0, 0.5]]).unwrap();
        let cfg = PursuitConfig::default();
        assert!(pursue_k(&x, &VarianceIndex, 0, &cfg).is_err());
        assert!(matches!(
            pursue_k(&x, &VarianceIndex, 3, &cfg),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn embed_examples() {
        let x = DataMatrix::from_rows(&[[1.0, 2.0, 3.0], [-1.0, 0.5, 2.0]]).unwrap();
        let z = embed(&x, &ProjectionMatrix::identity(3)).unwrap();
        assert_eq!(z, x);
        let e1 = ProjectionMatrix::new(vec![Direction::axis(3, 0)]).unwrap();
        assert_eq!(embed(&x, &e1).unwrap().column(0), x.column(0));
        assert!(embed(&x, &ProjectionMatrix::identity(2)).is_err());
    }

    #[test]
    fn pca_rejects_too_many_components() {
        let x = DataMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0], [0.0, 0.5]]).unwrap();
        assert!(matches!(pca(&x, 3), Err(Error::Dimension(_))));
    }
}
