#![allow(dead_code)]

use jacobi_scattering::lattice::{validate_sequence, CoefficientSequence, Fragmentation, RawCoefficients};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn raw(limits: (f64, f64, f64), n_min: i64, a: &[f64], b: &[f64], w: &[f64]) -> RawCoefficients {
    RawCoefficients {
        a_inf: limits.0,
        b_inf: limits.1,
        w_inf: limits.2,
        n_min,
        n_max: n_min + a.len() as i64 - 1,
        a: a.to_vec(),
        b: b.to_vec(),
        w: w.to_vec(),
    }
}

pub fn seq(limits: (f64, f64, f64), n_min: i64, a: &[f64], b: &[f64], w: &[f64]) -> CoefficientSequence {
    validate_sequence(&raw(limits, n_min, a, b, w)).unwrap()
}

pub fn free() -> CoefficientSequence {
    seq((1.0, 0.0, 1.0), 0, &[1.0], &[0.0], &[1.0])
}

pub fn q1() -> CoefficientSequence {
    seq((1.0, 0.0, 1.0), 0, &[1.0], &[0.5], &[1.0])
}

/// Split at 0 with `a(1) = 2 != a_inf`.
pub fn bond_jump() -> CoefficientSequence {
    seq(
        (1.2, 0.1, 0.9),
        -2,
        &[1.0, 0.7, 1.5, 2.0, 0.9, 1.1],
        &[0.3, -0.5, 0.2, 0.4, -0.1, 0.6],
        &[1.1, 0.8, 1.3, 0.9, 1.2, 1.0],
    )
}

pub fn two_impurity() -> CoefficientSequence {
    seq(
        (1.0, 0.0, 1.0),
        -1,
        &[1.0, 1.0, 1.0],
        &[0.3, 0.0, -0.4],
        &[1.0, 1.0, 1.0],
    )
}

/// Draws `x0 + U(-2, 2)` until the value is at least `floor`.
fn near(rng: &mut ChaCha8Rng, x0: f64, floor: f64) -> f64 {
    loop {
        let x = x0 + rng.gen_range(-2.0..2.0);
        if x >= floor {
            return x;
        }
    }
}

/// Random sequence: support of 1 to 40 sites, every coefficient uniform
/// within 2 of its limit, bonds and weights kept at or above `FLOOR`.
pub fn random_sequence(rng: &mut ChaCha8Rng) -> CoefficientSequence {
    const FLOOR: f64 = 0.25;
    let a_inf = rng.gen_range(0.5..2.0);
    let b_inf = rng.gen_range(-1.0..1.0);
    let w_inf = rng.gen_range(0.5..2.0);
    let len = rng.gen_range(1..=40usize);
    let n_min = rng.gen_range(-20..=5i64);
    let a: Vec<f64> = (0..len).map(|_| near(rng, a_inf, FLOOR)).collect();
    let b: Vec<f64> = (0..len).map(|_| b_inf + rng.gen_range(-2.0..2.0)).collect();
    let w: Vec<f64> = (0..len).map(|_| near(rng, w_inf, FLOOR)).collect();
    seq((a_inf, b_inf, w_inf), n_min, &a, &b, &w)
}

/// Random fragmentation into `2..=5` pieces with breakpoints inside or just
/// around the window.
pub fn random_fragmentation(rng: &mut ChaCha8Rng, seq: &CoefficientSequence) -> Fragmentation {
    let w = seq.window();
    let pieces = rng.gen_range(2..=5usize);
    let mut cuts = std::collections::BTreeSet::new();
    while cuts.len() < pieces - 1 {
        cuts.insert(rng.gen_range(w.n_min - 2..=w.n_max + 2));
    }
    Fragmentation::new(cuts.into_iter().collect()).unwrap()
}
