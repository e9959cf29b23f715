//! Seeded random streams.
//!
//! Every stochastic routine takes a `u64` seed. Sub-streams are derived with
//! ChaCha's stream counter so that, e.g., restart `i` of direction `j` draws
//! the same numbers no matter how many other restarts exist.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub type StreamRng = ChaCha8Rng;

pub fn rng(seed: u64) -> StreamRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent named sub-stream `(major, minor)` of `seed`.
pub fn substream(seed: u64, major: u32, minor: u32) -> StreamRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(((major as u64) << 32) | minor as u64);
    r
}

pub fn standard_normals<R: Rng>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len).map(|_| rng.sample(StandardNormal)).collect()
}

/// Uniformly distributed point on the unit sphere `S^{d-1}`.
pub fn unit_sphere<R: Rng>(rng: &mut R, d: usize) -> Vec<f64> {
    loop {
        let mut v = standard_normals(rng, d);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            v.iter_mut().for_each(|x| *x /= norm);
            return v;
        }
    }
}
