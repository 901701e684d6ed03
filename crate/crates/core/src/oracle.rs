//! Reference computations of the scattering coefficients, used to
//! cross-check [`crate::scattering::extract_scattering`].
//!
//! [`transfer_matrix_scattering`] multiplies one-step transfer matrices and
//! touches nothing from the Jost module. [`wronskian_scattering`] reads the
//! coefficients off Wronskians of the Jost solutions instead of their tails.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jost::{conjugate_solution, jost_left, jost_right, wronskian, Side};
use crate::lattice::CoefficientSequence;
use crate::matrix::Mat2;
use crate::scattering::ScatteringData;
use crate::spectral::{check_on_circle, edge_distance};

/// One-step transfer matrix mapping `(phi(n), phi(n-1))` to `(phi(n+1), phi(n))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepMatrix {
    pub entries: Mat2,
    pub site: i64,
}

impl StepMatrix {
    pub fn at(seq: &CoefficientSequence, z: Complex64, site: i64) -> Self {
        let lim = seq.limits();
        let c = seq.at(site);
        let a_next = seq.a(site + 1);
        let lambda_w = (c.w / lim.w_inf) * (lim.a_inf * (z + z.inv()) + lim.b_inf);
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        StepMatrix {
            entries: Mat2::new((lambda_w - c.b) / a_next, Complex64::new(-c.a / a_next, 0.0), one, zero),
            site,
        }
    }
}

fn power(z: Complex64, n: i64) -> Complex64 {
    match i32::try_from(n) {
        Ok(k) => z.powi(k),
        Err(_) => Complex64::from_polar(1.0, z.arg() * n as f64),
    }
}

/// `[[z^n, z^-n], [z^(n-1), z^-(n-1)]]`: amplitudes `(A, B)` of
/// `A z^m + B z^-m` to the state `(phi(n), phi(n-1))`.
fn basis(z: Complex64, n: i64) -> Mat2 {
    Mat2::new(power(z, n), power(z, -n), power(z, n - 1), power(z, -(n - 1)))
}

/// Product of the step matrices over `sites` (rightmost site applied last).
pub fn step_product(seq: &CoefficientSequence, z: Complex64, lo: i64, hi: i64) -> Mat2 {
    (lo..=hi).fold(Mat2::identity(), |acc, n| StepMatrix::at(seq, z, n).entries * acc)
}

pub fn transfer_matrix_scattering(seq: &CoefficientSequence, z: Complex64) -> Result<ScatteringData> {
    check_on_circle(z)?;
    if edge_distance(z) < 1e-9 {
        return Err(Error::NearBandEdge { z });
    }
    let w = seq.window();
    let (lo, hi) = (w.n_min - 1, w.n_max);
    let product = step_product(seq, z, lo, hi);
    let left = basis(z, lo);
    let right_inv = basis(z, hi + 1)
        .inverse()
        .ok_or(Error::SingularSystem("changing to the plane-wave basis"))?;
    // Left amplitudes -> right amplitudes.
    let m = right_inv * product * left;
    let inv_t = m.get(1, 1);
    if inv_t.norm() == 0.0 {
        return Err(Error::SingularSystem("reading 1/T from the amplitude map"));
    }
    let t = inv_t.inv();
    Ok(ScatteringData {
        z,
        t,
        r: m.get(0, 1) * t,
        l: -m.get(1, 0) * t,
    })
}

pub fn wronskian_scattering(seq: &CoefficientSequence, z: Complex64) -> Result<ScatteringData> {
    let fl = jost_left(seq, z)?;
    let fr = jost_right(seq, z)?;
    let gl = conjugate_solution(seq, z, Side::Left)?;
    let gr = conjugate_solution(seq, z, Side::Right)?;
    let n = seq.window().n_min;
    let free = seq.limits().a_inf * (z.inv() - z);

    let w_lr = wronskian(seq, &fl, &fr, n)?;
    if w_lr.norm() < 1e-300 {
        return Err(Error::SingularSystem("dividing by [f_l; f_r]"));
    }
    let t = free / w_lr;
    // [f_l; g_r] = -a_inf (1/z - z) L/T and [f_r; g_l] = a_inf (1/z - z) R/T.
    let l_over_t = -wronskian(seq, &fl, &gr, n)? / free;
    let r_over_t = wronskian(seq, &fr, &gl, n)? / free;
    Ok(ScatteringData {
        z,
        t,
        r: r_over_t * t,
        l: l_over_t * t,
    })
}
