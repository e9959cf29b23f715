//! Invariants checked over generated inputs.

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;

use projpursuit::indexes::{
    cca_index, cumulant_negentropy, logcosh_negentropy, CumulantIndex, Direction, LdaIndex,
    LogCoshIndex, MeanIndex, ProjectionIndex, VarianceIndex,
};
use projpursuit::info::{discrete_entropy, kl_divergence, DiscreteDist};
use projpursuit::linalg::{covariance, sym_eigen, sym_eigenvalues, whiten, DataMatrix};
use projpursuit::preprocess::{filter_genes, quantile_normalize, CountMatrix};
use projpursuit::pursuit::{prepare, pursue_k, pursue_one, PursuitConfig};
use projpursuit::random;
use projpursuit::spectra::{mp_density, MpParams};

fn gaussian_matrix(n: usize, d: usize, seed: u64) -> DataMatrix {
    let mut rng = random::rng(seed);
    DataMatrix::from_matrix(DMatrix::from_fn(n, d, |_, _| rng.sample(StandardNormal))).unwrap()
}

/// Gaussian data pushed through a random linear map, so columns correlate.
fn correlated_matrix(n: usize, d: usize, seed: u64) -> DataMatrix {
    let mut rng = random::substream(seed, 0, 1);
    let mix = DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal))
        + DMatrix::identity(d, d) * 2.0;
    DataMatrix::from_matrix(gaussian_matrix(n, d, seed).as_matrix() * mix).unwrap()
}

/// Skewed, heavy-tailed columns so the non-Gaussianity indexes have
/// non-trivial gradients.
fn skewed_matrix(n: usize, d: usize, seed: u64) -> DataMatrix {
    let mut rng = random::rng(seed);
    DataMatrix::from_matrix(DMatrix::from_fn(n, d, |_, j| {
        let e: f64 = -(1.0 - rng.random::<f64>()).ln();
        let g: f64 = rng.sample(StandardNormal);
        if j % 2 == 0 {
            e + 0.3 * g
        } else {
            g * g * g
        }
    }))
    .unwrap()
}

fn random_orthogonal(d: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = random::rng(seed);
    DMatrix::from_fn(d, d, |_, _| rng.sample::<f64, _>(StandardNormal))
        .qr()
        .q()
}

fn random_direction(d: usize, seed: u64) -> Direction {
    Direction::new(random::unit_sphere(&mut random::rng(seed), d)).unwrap()
}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).amax()
}

fn shuffled(len: usize, seed: u64) -> Vec<usize> {
    let mut rng = random::rng(seed);
    let mut p: Vec<usize> = (0..len).collect();
    for i in (1..len).rev() {
        p.swap(i, rng.random_range(0..=i));
    }
    p
}

fn dist_strategy(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..1000, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn covariance_ignores_row_order(n in 3usize..40, d in 1usize..6, seed in any::<u64>()) {
        let x = gaussian_matrix(n, d, seed);
        let perm = shuffled(n, seed ^ 1);
        let rows: Vec<Vec<f64>> = perm.iter().map(|&i| x.row(i)).collect();
        let y = DataMatrix::from_rows(&rows).unwrap();
        let diff = max_abs_diff(&covariance(&x).unwrap(), &covariance(&y).unwrap());
        prop_assert!(diff < 1e-12, "diff {diff}");
    }

    #[test]
    fn spectrum_is_invariant_under_rotation(d in 1usize..12, seed in any::<u64>()) {
        let s = covariance(&correlated_matrix(3 * d + 5, d, seed)).unwrap();
        let u = random_orthogonal(d, seed ^ 2);
        let rotated = &u * &s * u.transpose();
        let rotated = (&rotated + rotated.transpose()) * 0.5;
        let a = sym_eigenvalues(&s).unwrap();
        let b = sym_eigenvalues(&rotated).unwrap();
        let scale = a.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-8 * scale, "{x} vs {y}");
        }
    }

    #[test]
    fn eigendecomposition_reconstructs(d in 1usize..15, seed in any::<u64>()) {
        let s = covariance(&correlated_matrix(2 * d + 3, d, seed)).unwrap();
        let eig = sym_eigen(&s).unwrap();
        prop_assert!(max_abs_diff(&eig.reconstruct(), &s) <= 1e-8 * s.amax().max(1.0));
        let v = &eig.eigenvectors;
        prop_assert!(max_abs_diff(&(v.transpose() * v), &DMatrix::identity(d, d)) <= 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn whitened_data_has_identity_covariance(d in 1usize..20, extra in 0usize..30, seed in any::<u64>()) {
        let n = 10 * d + extra;
        let w = whiten(&correlated_matrix(n, d, seed)).unwrap();
        let c = covariance(&w.data).unwrap();
        prop_assert!(max_abs_diff(&c, &DMatrix::identity(d, d)) <= 1e-8);
    }

    #[test]
    fn filtering_is_idempotent(
        cells in 2usize..15,
        genes in 1usize..10,
        zero_odds in 0.0f64..0.95,
        threshold in 0.05f64..1.0,
        seed in any::<u64>(),
    ) {
        let mut rng = random::rng(seed);
        let counts: Vec<f64> = (0..cells * genes)
            .map(|_| if rng.random::<f64>() < zero_odds { 0.0 } else { rng.random_range(1..20) as f64 })
            .collect();
        let ids = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        let m = CountMatrix::new(ids("c", cells), ids("g", genes), counts).unwrap();
        if let Ok(once) = filter_genes(&m, threshold) {
            prop_assert_eq!(filter_genes(&once, threshold).unwrap(), once);
        }
    }

    #[test]
    fn quantile_normalization_shares_values_and_keeps_ranks(
        cells in 1usize..8,
        genes in 1usize..12,
        seed in any::<u64>(),
    ) {
        // distinct values within each row, so every rank is unambiguous
        let mut counts = Vec::with_capacity(cells * genes);
        for c in 0..cells {
            let perm = shuffled(genes, seed.wrapping_add(c as u64));
            let offset = (c * 7) as f64;
            counts.extend(perm.iter().map(|&p| offset + 3.0 * p as f64));
        }
        let ids = |p: &str, n: usize| (0..n).map(|i| format!("{p}{i}")).collect::<Vec<_>>();
        let m = CountMatrix::new(ids("c", cells), ids("g", genes), counts).unwrap();
        let q = quantile_normalize(&m).unwrap();
        let sorted = |row: &[f64]| {
            let mut v = row.to_vec();
            v.sort_by(f64::total_cmp);
            v
        };
        let first = sorted(q.cell(0));
        for c in 0..cells {
            for (a, b) in sorted(q.cell(c)).iter().zip(&first) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
            let (before, after) = (m.cell(c), q.cell(c));
            for i in 0..genes {
                for j in 0..genes {
                    if before[i] < before[j] {
                        prop_assert!(after[i] < after[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn entropy_ignores_outcome_order(counts in dist_strategy(1..30), seed in any::<u64>()) {
        let p = DiscreteDist::from_counts(&counts).unwrap();
        let perm = shuffled(counts.len(), seed);
        let q = DiscreteDist::from_counts(&perm.iter().map(|&i| counts[i]).collect::<Vec<_>>()).unwrap();
        prop_assert!((discrete_entropy(&p) - discrete_entropy(&q)).abs() <= 1e-12);
        prop_assert!(discrete_entropy(&p) <= (counts.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn kl_is_nonnegative_and_permutation_invariant(
        pair in (1usize..25).prop_flat_map(|len| (dist_strategy(len..len + 1), dist_strategy(len..len + 1))),
        seed in any::<u64>(),
    ) {
        let (pc, qc) = pair;
        let p = DiscreteDist::from_counts(&pc).unwrap();
        let q = DiscreteDist::from_counts(&qc).unwrap();
        let kl = kl_divergence(&p, &q).unwrap();
        prop_assert!(kl >= -1e-12);
        prop_assert!(kl_divergence(&p, &p).unwrap().abs() <= 1e-12);
        let perm = shuffled(pc.len(), seed);
        let pp = DiscreteDist::new(perm.iter().map(|&i| p.probs()[i]).collect()).unwrap();
        let qp = DiscreteDist::new(perm.iter().map(|&i| q.probs()[i]).collect()).unwrap();
        prop_assert!((kl_divergence(&pp, &qp).unwrap() - kl).abs() <= 1e-12);
    }

    #[test]
    fn non_gaussianity_is_affine_invariant(
        scale in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0],
        shift in -100.0f64..100.0,
        seed in any::<u64>(),
    ) {
        let x = skewed_matrix(500, 1, seed).column(0);
        let y: Vec<f64> = x.iter().map(|v| scale * v + shift).collect();
        let c = (cumulant_negentropy(&x).unwrap().value, cumulant_negentropy(&y).unwrap().value);
        let l = (logcosh_negentropy(&x, 1.5).unwrap().value, logcosh_negentropy(&y, 1.5).unwrap().value);
        prop_assert!((c.0 - c.1).abs() <= 1e-9 * c.0.abs().max(1.0), "{c:?}");
        prop_assert!((l.0 - l.1).abs() <= 1e-9 * l.0.abs().max(1e-3), "{l:?}");
    }

    #[test]
    fn canonical_correlation_is_affine_invariant(
        t1 in 0.01f64..100.0,
        t2 in -100.0f64..100.0,
        u1 in 0.01f64..100.0,
        u2 in -100.0f64..100.0,
        seed in any::<u64>(),
    ) {
        let x = correlated_matrix(60, 3, seed);
        let noise = gaussian_matrix(60, 2, seed ^ 9);
        let y = DataMatrix::from_matrix(
            x.as_matrix().columns(0, 2) + noise.as_matrix(),
        ).unwrap();
        let a = random_direction(3, seed ^ 3);
        let b = random_direction(2, seed ^ 4);
        let base = cca_index(&a, &b, &x, &y).unwrap();
        let xs = DataMatrix::from_matrix(x.as_matrix().map(|v| t1 * v + t2)).unwrap();
        let ys = DataMatrix::from_matrix(y.as_matrix().map(|v| u1 * v + u2)).unwrap();
        let moved = cca_index(&a, &b, &xs, &ys).unwrap();
        prop_assert!((base - moved).abs() <= 1e-10, "{base} vs {moved}");
        prop_assert!(base.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn symmetric_indexes_ignore_direction_sign(d in 1usize..8, seed in any::<u64>()) {
        let x = skewed_matrix(80, d, seed).centered();
        let a = random_direction(d, seed ^ 5);
        let neg = a.negated();
        for index in [&VarianceIndex as &dyn ProjectionIndex, &LogCoshIndex::default(), &CumulantIndex] {
            let (p, q) = (index.value(&x, a.as_slice()).unwrap(), index.value(&x, neg.as_slice()).unwrap());
            prop_assert!((p - q).abs() <= 1e-12 * p.abs().max(1.0), "{}: {p} vs {q}", index.name());
        }
        let m = (MeanIndex.value(&x, a.as_slice()).unwrap(), MeanIndex.value(&x, neg.as_slice()).unwrap());
        prop_assert!((m.0 + m.1).abs() <= 1e-12);
    }

    #[test]
    fn mp_density_is_a_density(gamma in 0.01f64..=1.0, k in -1.0f64..6.0) {
        let p = MpParams::new(gamma).unwrap();
        let f = mp_density(k, gamma).unwrap();
        prop_assert!(f >= 0.0 && f.is_finite());
        if k < p.b_minus || k > p.b_plus {
            prop_assert_eq!(f, 0.0);
        }
        prop_assert!((p.b_minus - (1.0 - gamma.sqrt()).powi(2)).abs() <= 1e-12);
        prop_assert!((p.b_plus - (1.0 + gamma.sqrt()).powi(2)).abs() <= 1e-12);
    }
}

/// Central differences with `h = 1e-5 (1 + |a_i|)`.
fn finite_difference(index: &dyn ProjectionIndex, x: &DataMatrix, a: &[f64]) -> Vec<f64> {
    (0..a.len())
        .map(|i| {
            let h = 1e-5 * (1.0 + a[i].abs());
            let mut up = a.to_vec();
            let mut down = a.to_vec();
            up[i] += h;
            down[i] -= h;
            (index.value(x, &up).unwrap() - index.value(x, &down).unwrap()) / (2.0 * h)
        })
        .collect()
}

#[test]
fn analytic_gradients_match_finite_differences() {
    let lda = {
        let sigma = DMatrix::from_fn(4, 4, |i, j| if i == j { 2.0 } else { 0.3 });
        LdaIndex::with_shared_covariance(&[1.0, 0.0, -1.0, 0.5], &[0.0, 0.5, 0.0, 0.0], sigma)
            .unwrap()
    };
    let logcosh_2 = LogCoshIndex::new(2.0).unwrap();
    let indexes: [&dyn ProjectionIndex; 6] = [
        &VarianceIndex,
        &MeanIndex,
        &CumulantIndex,
        &LogCoshIndex::default(),
        &logcosh_2,
        &lda,
    ];
    for index in indexes {
        for instance in 0..20u64 {
            let d = if index.name() == "lda" {
                4
            } else {
                2 + (instance as usize % 9)
            };
            let x = prepare(&skewed_matrix(120, d, instance), index.preparation())
                .unwrap()
                .data;
            let a = random_direction(d, 1000 + instance);
            let analytic = index.evaluate(&x, a.as_slice()).unwrap().gradient.unwrap();
            let numeric = finite_difference(index, &x, a.as_slice());
            let scale = numeric.iter().fold(1e-8f64, |m, v| m.max(v.abs()));
            for (g, f) in analytic.iter().zip(&numeric) {
                assert!(
                    (g - f).abs() <= 1e-4 * scale,
                    "{} instance {instance}: analytic {g} vs numeric {f}",
                    index.name()
                );
            }
        }
    }
}

#[test]
fn pursuit_is_deterministic_and_monotone() {
    let x = skewed_matrix(300, 5, 3);
    let index = LogCoshIndex::default();
    let prepared = prepare(&x, index.preparation()).unwrap();
    let cfg = PursuitConfig {
        restarts: 6,
        seed: 17,
        ..Default::default()
    };
    let a = pursue_k(&prepared.data, &index, 3, &cfg).unwrap();
    let b = pursue_k(&prepared.data, &index, 3, &cfg).unwrap();
    assert_eq!(a, b);

    for traces in &a.traces {
        for t in traces {
            let mut last = t.initial_value;
            for step in &t.steps {
                assert!(
                    step.value >= last - 1e-12,
                    "restart {} decreased",
                    t.restart
                );
                last = step.value;
            }
        }
    }
    // deflation keeps the directions orthonormal
    let m = a.directions.to_matrix();
    assert!(max_abs_diff(&(&m * m.transpose()), &DMatrix::identity(3, 3)) <= 1e-8);
}

#[test]
fn best_restart_dominates_every_restart() {
    let x = skewed_matrix(200, 6, 8);
    let index = CumulantIndex;
    let prepared = prepare(&x, index.preparation()).unwrap();
    let cfg = PursuitConfig {
        restarts: 8,
        seed: 2,
        ..Default::default()
    };
    let one = pursue_one(&prepared.data, &index, &[], &cfg).unwrap();
    for t in &one.traces {
        assert!(one.value >= t.final_value);
    }
    assert_eq!(one.value, one.traces[one.chosen_restart].final_value);
}

#[test]
fn more_restarts_never_lower_the_optimum() {
    let x = skewed_matrix(200, 6, 9);
    let index = LogCoshIndex::default();
    let prepared = prepare(&x, index.preparation()).unwrap();
    let few = PursuitConfig {
        restarts: 2,
        ..Default::default()
    };
    let many = PursuitConfig {
        restarts: 8,
        ..Default::default()
    };
    let a = pursue_one(&prepared.data, &index, &[], &few).unwrap();
    let b = pursue_one(&prepared.data, &index, &[], &many).unwrap();
    // restarts draw from independent sub-streams, so the first two coincide
    assert_eq!(a.traces[..], b.traces[..2]);
    assert!(b.value >= a.value);
}

#[test]
fn full_deflation_spans_the_space() {
    let d = 4;
    let x = skewed_matrix(250, d, 12);
    let index = CumulantIndex;
    let prepared = prepare(&x, index.preparation()).unwrap();
    let cfg = PursuitConfig {
        restarts: 3,
        max_k: d,
        ..Default::default()
    };
    let fit = pursue_k(&prepared.data, &index, d, &cfg).unwrap();
    let m = fit.directions.to_matrix();
    assert!(max_abs_diff(&(m.transpose() * &m), &DMatrix::identity(d, d)) <= 1e-8);
}
