//! The map between the spectral parameter `lambda` and the unit-circle
//! parameter `z`, `lambda = (a_inf (z + 1/z) + b_inf) / w_inf`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::Limits;

/// Allowed deviation of `|z|` from one.
pub const CIRCLE_TOL: f64 = 1e-12;

/// Default minimum chord distance of grid points from `z = +1` and `z = -1`.
pub const DEFAULT_EXCLUSION_DELTA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPoint {
    pub z: Complex64,
    pub lambda: f64,
}

impl SpectralPoint {
    pub fn from_theta(limits: &Limits, theta: f64) -> Self {
        let z = Complex64::from_polar(1.0, theta);
        let lambda = (limits.a_inf * 2.0 * theta.cos() + limits.b_inf) / limits.w_inf;
        Self { z, lambda }
    }

    pub fn theta(&self) -> f64 {
        self.z.arg()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandEdges {
    pub lambda_min: f64,
    pub lambda_max: f64,
}

impl BandEdges {
    pub fn contains(&self, lambda: f64) -> bool {
        self.lambda_min <= lambda && lambda <= self.lambda_max
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircleGrid {
    pub points: Vec<SpectralPoint>,
    pub exclusion_delta: f64,
}

impl CircleGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Grid with no points, for callers that need an explicit empty sweep.
    pub fn empty(exclusion_delta: f64) -> Self {
        Self {
            points: Vec::new(),
            exclusion_delta,
        }
    }
}

/// Distance from `z` to the nearer of `+1` and `-1`.
pub fn edge_distance(z: Complex64) -> f64 {
    (z - 1.0).norm().min((z + 1.0).norm())
}

pub fn check_on_circle(z: Complex64) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() || (z.norm() - 1.0).abs() > CIRCLE_TOL {
        return Err(Error::OffCircle { z });
    }
    Ok(())
}

pub fn lambda_from_z(limits: &Limits, z: Complex64) -> Result<f64> {
    check_on_circle(z)?;
    let image = (limits.a_inf * (z + z.inv()) + limits.b_inf) / limits.w_inf;
    if image.im.abs() >= 1e-12 {
        return Err(Error::OffCircle { z });
    }
    Ok(image.re)
}

pub fn band_edges(limits: &Limits) -> BandEdges {
    let spread = 2.0 * limits.a_inf.abs();
    BandEdges {
        lambda_min: (-spread + limits.b_inf) / limits.w_inf,
        lambda_max: (spread + limits.b_inf) / limits.w_inf,
    }
}

/// Inverts the spectral map on the band. The root is taken on the closed
/// upper half circle for `a_inf < 0` and on the closed lower half circle for
/// `a_inf > 0`.
pub fn z_from_lambda(limits: &Limits, lambda: f64) -> Result<Complex64> {
    let edges = band_edges(limits);
    if !lambda.is_finite() || !edges.contains(lambda) {
        return Err(Error::OutsideBand {
            lambda,
            lambda_min: edges.lambda_min,
            lambda_max: edges.lambda_max,
        });
    }
    let cos_theta = ((lambda * limits.w_inf - limits.b_inf) / (2.0 * limits.a_inf)).clamp(-1.0, 1.0);
    let theta = cos_theta.acos();
    let theta = if limits.a_inf < 0.0 { theta } else { -theta };
    Ok(Complex64::from_polar(1.0, theta))
}

/// `count` points on the unit circle, kept at chord distance at least
/// `exclusion_delta` from `+1` and `-1`.
///
/// `ceil(count / 2)` points are spread evenly (endpoints included) over the
/// upper arc and the rest over the lower arc; points are ordered by
/// increasing `theta` in `(-pi, pi)`.
pub fn sample_circle(limits: &Limits, count: usize, exclusion_delta: f64) -> Result<CircleGrid> {
    if count == 0 {
        return Err(Error::InvalidGrid("point count must be positive"));
    }
    if !(exclusion_delta > 0.0 && exclusion_delta < 1.0) {
        return Err(Error::InvalidGrid("exclusion delta must lie in (0, 1)"));
    }
    let mut theta_lo = 2.0 * (exclusion_delta / 2.0).asin();
    while edge_distance(Complex64::from_polar(1.0, theta_lo)) < exclusion_delta
        || edge_distance(Complex64::from_polar(1.0, PI - theta_lo)) < exclusion_delta
    {
        theta_lo = f64::from_bits(theta_lo.to_bits() + 1);
    }
    let theta_hi = PI - theta_lo;
    if theta_hi < theta_lo {
        return Err(Error::InvalidGrid("exclusion removes every point"));
    }

    let upper = count.div_ceil(2);
    let lower = count - upper;
    let arc = |m: usize| -> Vec<f64> {
        match m {
            0 => Vec::new(),
            1 => vec![PI / 2.0],
            _ => {
                let step = (theta_hi - theta_lo) / (m - 1) as f64;
                (0..m)
                    .map(|k| {
                        if k == m - 1 {
                            theta_hi
                        } else {
                            theta_lo + step * k as f64
                        }
                    })
                    .collect()
            }
        }
    };

    let mut thetas: Vec<f64> = arc(lower).into_iter().rev().map(|t| -t).collect();
    thetas.extend(arc(upper));
    let points = thetas
        .into_iter()
        .map(|t| SpectralPoint::from_theta(limits, t))
        .collect();
    Ok(CircleGrid {
        points,
        exclusion_delta,
    })
}
