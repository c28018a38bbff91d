//! Shared fixtures for the integration suites.
#![allow(dead_code)]

use ballmaps::linalg::{CMatrix, CVector};
use ballmaps::maps::{catalog, tensor_power, whitney};
use ballmaps::{RationalMap, C64};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ballmaps::sampling::rng_from_seed(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-distributed unitary via QR with phase correction.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| gaussian(rng));
    let qr = g.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = CVector::from_iterator(n, (0..n).map(|i| {
        let d = r[(i, i)];
        if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) }
    }));
    q * CMatrix::from_diagonal(&phases)
}

/// Point of the ball with norm at most `radius`.
pub fn ball_point(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<C64> {
    ballmaps::sampling::ball_point(rng, n, radius)
}

/// Polynomial proper maps with two source variables vanishing at the origin.
pub fn planar_fixtures() -> Vec<(String, RationalMap)> {
    let mut out: Vec<(String, RationalMap)> = ["faran-1", "faran-2", "faran-3", "faran-4", "example-7-2", "remark-4-1"]
        .iter()
        .map(|s| (s.to_string(), catalog(s).unwrap()))
        .collect();
    out.push(("whitney-seq-2".into(), catalog("whitney-seq-2").unwrap()));
    out.push(("z^(x)3".into(), tensor_power(2, 3).unwrap()));
    out.push(("whitney(2)".into(), whitney(2).unwrap()));
    out
}
