//! Transmission and reflection coefficients read off the plane-wave tails of
//! the Jost solutions:
//!
//! * `f_l(n) = (1/T) z^n + (L/T) z^-n` left of the support,
//! * `f_r(n) = (1/T) z^-n + (R/T) z^n` right of the support.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jost::{jost_left, jost_right, zpow};
use crate::lattice::CoefficientSequence;
use crate::matrix::{largest, relative_residual};
use crate::spectral::{CircleGrid, SpectralPoint};

/// Agreement required between the two tail estimates of `1/T`, relative to
/// `max(1, |1/T|)`.
pub const TAIL_AGREEMENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringData {
    pub z: Complex64,
    pub t: Complex64,
    pub r: Complex64,
    pub l: Complex64,
}

impl ScatteringData {
    /// Data of a sequence with no perturbation.
    pub fn reflectionless(z: Complex64) -> Self {
        Self {
            z,
            t: Complex64::new(1.0, 0.0),
            r: Complex64::new(0.0, 0.0),
            l: Complex64::new(0.0, 0.0),
        }
    }

    /// `|T|^2 + |R|^2`.
    pub fn unitarity_right(&self) -> f64 {
        self.t.norm_sqr() + self.r.norm_sqr()
    }

    /// `|T|^2 + |L|^2`.
    pub fn unitarity_left(&self) -> f64 {
        self.t.norm_sqr() + self.l.norm_sqr()
    }
}

/// Solves `[[z^n, z^-n], [z^(n+1), z^-(n+1)]] (x, y) = (v0, v1)` by Cramer's
/// rule. The determinant is `1/z - z`.
pub(crate) fn plane_wave_amplitudes(
    z: Complex64,
    n: i64,
    v0: Complex64,
    v1: Complex64,
) -> Result<(Complex64, Complex64)> {
    let (p0, m0) = (zpow(z, n), zpow(z, -n));
    let (p1, m1) = (zpow(z, n + 1), zpow(z, -n - 1));
    let det = p0 * m1 - m0 * p1;
    if det.norm() < 1e-12 {
        return Err(Error::SingularSystem("solving for plane-wave amplitudes"));
    }
    Ok(((v0 * m1 - m0 * v1) / det, (p0 * v1 - v0 * p1) / det))
}

pub fn extract_scattering(seq: &CoefficientSequence, z: Complex64) -> Result<ScatteringData> {
    let fl = jost_left(seq, z)?;
    let fr = jost_right(seq, z)?;
    let window = seq.window();

    let left = window.n_min - 2;
    let (inv_t_left, l_over_t) = plane_wave_amplitudes(z, left, fl.at(left)?, fl.at(left + 1)?)?;

    let right = window.n_max;
    // f_r = (R/T) z^n + (1/T) z^-n on the right.
    let (r_over_t, inv_t_right) = plane_wave_amplitudes(z, right, fr.at(right)?, fr.at(right + 1)?)?;

    let scale = inv_t_left.norm().max(inv_t_right.norm()).max(1.0);
    let deviation = (inv_t_left - inv_t_right).norm() / scale;
    if deviation > TAIL_AGREEMENT_TOL {
        return Err(Error::InconsistentTransmission { deviation });
    }
    let inv_t = (inv_t_left + inv_t_right) * 0.5;
    if inv_t.norm() == 0.0 {
        return Err(Error::SingularSystem("inverting 1/T"));
    }
    let t = inv_t.inv();
    Ok(ScatteringData {
        z,
        t,
        r: r_over_t * t,
        l: l_over_t * t,
    })
}

/// Residuals of `X(1/z) = X(z)*` for `X = T, R, L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub t: f64,
    pub r: f64,
    pub l: f64,
}

impl SymmetryReport {
    pub fn max(&self) -> f64 {
        self.t.max(self.r).max(self.l)
    }
}

pub fn check_symmetries(seq: &CoefficientSequence, z: Complex64) -> Result<SymmetryReport> {
    let sd = extract_scattering(seq, z)?;
    let sd_inv = extract_scattering(seq, z.inv())?;
    Ok(SymmetryReport {
        t: (sd_inv.t - sd.t.conj()).norm(),
        r: (sd_inv.r - sd.r.conj()).norm(),
        l: (sd_inv.l - sd.l.conj()).norm(),
    })
}

/// Residuals of the quadratic identities between the coefficients at `z`
/// and at `1/z`, each relative to its largest term (floored at 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    /// `1/(T T~) - L L~/(T T~) = 1`
    pub left_unitarity: f64,
    /// `1/(T T~) - R R~/(T T~) = 1`
    pub right_unitarity: f64,
    /// `R~/T~ = -L/T` and `L~/T~ = -R/T`
    pub reflection_exchange: f64,
    /// `T^2 - R L = T/T~`
    pub transmission_square: f64,
}

impl IdentityReport {
    pub fn max(&self) -> f64 {
        self.left_unitarity
            .max(self.right_unitarity)
            .max(self.reflection_exchange)
            .max(self.transmission_square)
    }
}

/// `sd_inv` must be the data at `1/sd.z`; the tilde above denotes it.
pub fn check_identities(sd: &ScatteringData, sd_inv: &ScatteringData) -> IdentityReport {
    let (t, r, l) = (sd.t, sd.r, sd.l);
    let (tt, rt, lt) = (sd_inv.t, sd_inv.r, sd_inv.l);
    let one = Complex64::new(1.0, 0.0);
    let inv_prod = one / (t * tt);
    let unitarity = |x: Complex64, xt: Complex64| {
        let cross = x * xt * inv_prod;
        relative_residual((inv_prod - cross - one).norm(), largest(&[inv_prod, cross]))
    };
    let exchange = |a: Complex64, b: Complex64| relative_residual((a + b).norm(), largest(&[a, b]));
    let (sq, rl, ratio) = (t * t, r * l, t / tt);
    IdentityReport {
        left_unitarity: unitarity(l, lt),
        right_unitarity: unitarity(r, rt),
        reflection_exchange: exchange(rt / tt, l / t).max(exchange(lt / tt, r / t)),
        transmission_square: relative_residual((sq - rl - ratio).norm(), largest(&[sq, rl, ratio])),
    }
}

/// Scattering data for every grid point, in grid order.
pub fn scattering_sweep(seq: &CoefficientSequence, grid: &CircleGrid) -> Result<Vec<ScatteringData>> {
    scattering_sweep_points(seq, &grid.points).into_iter().collect()
}

/// Per-point results of a sweep, keeping failures in place.
pub fn scattering_sweep_points(seq: &CoefficientSequence, points: &[SpectralPoint]) -> Vec<Result<ScatteringData>> {
    points
        .par_iter()
        .map(|p| extract_scattering(seq, p.z).map_err(|e| e.at_theta(p.theta())))
        .collect()
}
