//! Jost solutions and Wronskians of
//! `a(n+1) phi(n+1) + b(n) phi(n) + a(n) phi(n-1) = (w(n)/w_inf) [a_inf (z + 1/z) + b_inf] phi(n)`.
//!
//! Because the perturbation has finite support, the Jost solutions are exact
//! plane waves beyond the stored window. They are seeded there with two exact
//! values and carried across the window by the three-term recursion.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{CoefficientSequence, IndexWindow};
use crate::matrix::relative_residual;
use crate::spectral::{check_on_circle, edge_distance};

/// Hard floor on the distance of `z` from `+1` and `-1`. Grids normally
/// enforce a much larger exclusion; anything closer is a numerical fault.
pub const MIN_EDGE_DISTANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolutionKind {
    LeftJost,
    RightJost,
    LeftConjugate,
    RightConjugate,
}

/// A solution sampled on the contiguous range `[lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSolution {
    lo: i64,
    values: Vec<Complex64>,
    pub kind: SolutionKind,
    pub z: Complex64,
}

impl LatticeSolution {
    pub fn range(&self) -> IndexWindow {
        IndexWindow {
            n_min: self.lo,
            n_max: self.lo + self.values.len() as i64 - 1,
        }
    }

    pub fn get(&self, n: i64) -> Option<Complex64> {
        if n < self.lo {
            return None;
        }
        self.values.get((n - self.lo) as usize).copied()
    }

    pub fn at(&self, n: i64) -> Result<Complex64> {
        self.get(n).ok_or_else(|| {
            let r = self.range();
            Error::IndexOutOfRange {
                n,
                lo: r.n_min,
                hi: r.n_max,
            }
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values.iter().enumerate().map(|(k, v)| (self.lo + k as i64, *v))
    }
}

/// `z^n` for any lattice index.
pub(crate) fn zpow(z: Complex64, n: i64) -> Complex64 {
    match i32::try_from(n) {
        Ok(k) => z.powi(k),
        Err(_) => Complex64::from_polar(z.norm().powf(n as f64), z.arg() * n as f64),
    }
}

pub(crate) fn check_admissible(z: Complex64) -> Result<()> {
    check_on_circle(z)?;
    if edge_distance(z) < MIN_EDGE_DISTANCE {
        return Err(Error::NearBandEdge { z });
    }
    Ok(())
}

/// Right-hand side multiplier `(w(n)/w_inf) [a_inf (z + 1/z) + b_inf]` at site `n`.
pub(crate) fn spectral_factor(seq: &CoefficientSequence, z: Complex64, n: i64) -> Complex64 {
    let lim = seq.limits();
    (seq.w(n) / lim.w_inf) * (lim.a_inf * (z + z.inv()) + lim.b_inf)
}

fn default_range(seq: &CoefficientSequence) -> IndexWindow {
    let w = seq.window();
    IndexWindow {
        n_min: w.n_min - 2,
        n_max: w.n_max + 2,
    }
}

pub fn jost_left(seq: &CoefficientSequence, z: Complex64) -> Result<LatticeSolution> {
    jost_left_over(seq, z, default_range(seq))
}

pub fn jost_right(seq: &CoefficientSequence, z: Complex64) -> Result<LatticeSolution> {
    jost_right_over(seq, z, default_range(seq))
}

/// Left Jost solution on the default range extended to cover `span`.
pub fn jost_left_over(seq: &CoefficientSequence, z: Complex64, span: IndexWindow) -> Result<LatticeSolution> {
    check_admissible(z)?;
    let range = default_range(seq).union(&span);
    let window = seq.window();
    let len = range.len();
    let mut values = vec![Complex64::new(0.0, 0.0); len];
    let idx = |n: i64| (n - range.n_min) as usize;

    // Exact plane wave from n_max upward.
    for n in window.n_max..=range.n_max {
        values[idx(n)] = zpow(z, n);
    }
    let mut n = window.n_max;
    while n > range.n_min {
        let next = values[idx(n + 1)];
        let cur = values[idx(n)];
        values[idx(n - 1)] = ((spectral_factor(seq, z, n) - seq.b(n)) * cur - seq.a(n + 1) * next) / seq.a(n);
        n -= 1;
    }
    Ok(LatticeSolution {
        lo: range.n_min,
        values,
        kind: SolutionKind::LeftJost,
        z,
    })
}

/// Right Jost solution on the default range extended to cover `span`.
pub fn jost_right_over(seq: &CoefficientSequence, z: Complex64, span: IndexWindow) -> Result<LatticeSolution> {
    check_admissible(z)?;
    let range = default_range(seq).union(&span);
    let window = seq.window();
    let len = range.len();
    let mut values = vec![Complex64::new(0.0, 0.0); len];
    let idx = |n: i64| (n - range.n_min) as usize;

    for n in range.n_min..=window.n_min - 1 {
        values[idx(n)] = zpow(z, -n);
    }
    let mut n = window.n_min - 1;
    while n < range.n_max {
        let prev = values[idx(n - 1)];
        let cur = values[idx(n)];
        values[idx(n + 1)] = ((spectral_factor(seq, z, n) - seq.b(n)) * cur - seq.a(n) * prev) / seq.a(n + 1);
        n += 1;
    }
    Ok(LatticeSolution {
        lo: range.n_min,
        values,
        kind: SolutionKind::RightJost,
        z,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// `g(z, n) = f(1/z, n)` for the chosen side.
pub fn conjugate_solution(seq: &CoefficientSequence, z: Complex64, side: Side) -> Result<LatticeSolution> {
    conjugate_solution_over(seq, z, side, default_range(seq))
}

pub fn conjugate_solution_over(
    seq: &CoefficientSequence,
    z: Complex64,
    side: Side,
    span: IndexWindow,
) -> Result<LatticeSolution> {
    let zi = z.inv();
    let mut sol = match side {
        Side::Left => jost_left_over(seq, zi, span)?,
        Side::Right => jost_right_over(seq, zi, span)?,
    };
    sol.kind = match side {
        Side::Left => SolutionKind::LeftConjugate,
        Side::Right => SolutionKind::RightConjugate,
    };
    sol.z = z;
    Ok(sol)
}

/// `[phi; zeta](n) = a(n+1) (phi(n) zeta(n+1) - phi(n+1) zeta(n))`.
pub fn wronskian(
    seq: &CoefficientSequence,
    phi: &LatticeSolution,
    zeta: &LatticeSolution,
    n: i64,
) -> Result<Complex64> {
    let (p0, p1) = (phi.at(n)?, phi.at(n + 1)?);
    let (q0, q1) = (zeta.at(n)?, zeta.at(n + 1)?);
    Ok(seq.a(n + 1) * (p0 * q1 - p1 * q0))
}

/// Wronskian at `n` with the larger modulus of its two products.
pub fn wronskian_with_magnitude(
    seq: &CoefficientSequence,
    phi: &LatticeSolution,
    zeta: &LatticeSolution,
    n: i64,
) -> Result<(Complex64, f64)> {
    let (p0, p1) = (phi.at(n)?, phi.at(n + 1)?);
    let (q0, q1) = (zeta.at(n)?, zeta.at(n + 1)?);
    let a = seq.a(n + 1);
    let (u, v) = (a * p0 * q1, a * p1 * q0);
    Ok((u - v, u.norm().max(v.norm())))
}

/// Largest deviation of the Wronskian from its value at the first common
/// site, relative to the largest product entering either value.
pub fn wronskian_constancy_check(
    seq: &CoefficientSequence,
    phi: &LatticeSolution,
    zeta: &LatticeSolution,
) -> Result<f64> {
    let (rp, rz) = (phi.range(), zeta.range());
    let lo = rp.n_min.max(rz.n_min);
    let hi = rp.n_max.min(rz.n_max);
    if hi - lo < 2 {
        return Err(Error::IndexOutOfRange { n: hi, lo, hi });
    }
    let (w0, m0) = wronskian_with_magnitude(seq, phi, zeta, lo)?;
    let mut worst: f64 = 0.0;
    for n in lo + 1..hi {
        let (w, m) = wronskian_with_magnitude(seq, phi, zeta, n)?;
        worst = worst.max(relative_residual((w - w0).norm(), m.max(m0)));
    }
    Ok(worst)
}

/// Largest relative residual of the difference equation at the interior
/// sites of `sol`. The solution is evaluated at `sol.z` except for the
/// conjugate kinds, which solve the equation at `1/z` (the same equation).
pub fn equation_residual(seq: &CoefficientSequence, sol: &LatticeSolution) -> f64 {
    let r = sol.range();
    let mut worst: f64 = 0.0;
    for n in r.n_min + 1..r.n_max {
        let (prev, cur, next) = (sol.values_at(n - 1), sol.values_at(n), sol.values_at(n + 1));
        let lhs_terms = [seq.a(n + 1) * next, seq.b(n) * cur, seq.a(n) * prev];
        let rhs = spectral_factor(seq, sol.z, n) * cur;
        let scale = lhs_terms.iter().map(|t| t.norm()).sum::<f64>() + rhs.norm();
        let diff = (lhs_terms.iter().sum::<Complex64>() - rhs).norm();
        if scale > 0.0 {
            worst = worst.max(diff / scale);
        }
    }
    worst
}

impl LatticeSolution {
    fn values_at(&self, n: i64) -> Complex64 {
        self.values[(n - self.lo) as usize]
    }
}
