//! Transition matrices
//!
//! ```text
//! Lambda(z) = [ 1/T(z)   -R(z)/T(z) ]
//!             [ L(z)/T(z)  1/T(1/z) ]
//! ```
//!
//! map the plane-wave amplitudes of a solution right of the support to its
//! amplitudes left of the support. Splitting the lattice into consecutive
//! fragments factors `Lambda` into the ordered product of the fragments'
//! matrices. The checks in this module verify that product together with the
//! junction relations between the Jost solutions of the whole sequence and
//! those of a two-fragment split.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::Result;
use crate::jost::{
    conjugate_solution_over, jost_left_over, jost_right_over, wronskian_with_magnitude, zpow, LatticeSolution, Side,
};
use crate::lattice::{fragment, CoefficientSequence, Fragmentation, IndexWindow};
use crate::matrix::{largest, relative_residual, Mat2};
use crate::scattering::{extract_scattering, ScatteringData};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransitionMatrix {
    pub entries: Mat2,
    pub z: Complex64,
}

impl TransitionMatrix {
    pub fn det(&self) -> Complex64 {
        self.entries.det()
    }
}

/// Assembles the transition matrix from the data at `z` and at `1/z`.
pub fn transition_matrix(sd: &ScatteringData, sd_inv: &ScatteringData) -> TransitionMatrix {
    let inv_t = sd.t.inv();
    TransitionMatrix {
        entries: Mat2::new(inv_t, -sd.r * inv_t, sd.l * inv_t, sd_inv.t.inv()),
        z: sd.z,
    }
}

pub fn transition_at(seq: &CoefficientSequence, z: Complex64) -> Result<TransitionMatrix> {
    let sd = extract_scattering(seq, z)?;
    let sd_inv = extract_scattering(seq, z.inv())?;
    Ok(transition_matrix(&sd, &sd_inv))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FactorizationReport {
    pub z: Complex64,
    pub lhs: TransitionMatrix,
    pub rhs_product: Mat2,
    /// Largest entrywise absolute difference between `lhs` and `rhs_product`.
    pub residual: f64,
    /// Size of the terms compared: the largest entry of `lhs` or the product
    /// of the fragments' largest entries, at least 1.
    pub magnitude: f64,
    pub fragment_count: usize,
    pub tolerance: f64,
}

impl FactorizationReport {
    pub fn passed(&self) -> bool {
        self.residual <= self.tolerance
    }

    /// `residual / magnitude`.
    pub fn relative_residual(&self) -> f64 {
        self.residual / self.magnitude
    }
}

/// Compares the transition matrix of `seq` with the ordered product of the
/// transition matrices of its fragments.
pub fn factorization_check(
    seq: &CoefficientSequence,
    frag: &Fragmentation,
    z: Complex64,
    tol: f64,
) -> Result<FactorizationReport> {
    factorization_check_fragments(seq, &fragment(seq, frag), z, tol)
}

/// As [`factorization_check`] with caller-supplied fragments, in order.
pub fn factorization_check_fragments(
    seq: &CoefficientSequence,
    fragments: &[CoefficientSequence],
    z: Complex64,
    tol: f64,
) -> Result<FactorizationReport> {
    let lhs = transition_at(seq, z)?;
    let mut product = Mat2::identity();
    let mut bound = 1.0;
    for part in fragments {
        let entries = transition_at(part, z)?.entries;
        bound *= entries.max_abs();
        product = product * entries;
    }
    Ok(FactorizationReport {
        z,
        lhs,
        rhs_product: product,
        residual: lhs.entries.max_abs_diff(&product),
        magnitude: bound.max(lhs.entries.max_abs()).max(1.0),
        fragment_count: fragments.len(),
        tolerance: tol,
    })
}

/// `num / den` and the residual of `num = expected * den`, each Wronskian
/// given with the size of its products.
fn wronskian_ratio(num: (Complex64, f64), den: (Complex64, f64), expected: Complex64) -> (Complex64, f64) {
    let residual = relative_residual((num.0 - expected * den.0).norm(), num.1.max(expected.norm() * den.1));
    (num.0 / den.0, residual)
}

fn column_pair(a: &LatticeSolution, b: &LatticeSolution, n: i64) -> Result<Mat2> {
    Ok(Mat2::new(a.at(n)?, b.at(n)?, a.at(n + 1)?, b.at(n + 1)?))
}

/// `|value - sum(terms)|` relative to the largest of `value` and `terms`.
fn term_residual(value: Complex64, terms: &[Complex64]) -> f64 {
    let diff = value - terms.iter().sum::<Complex64>();
    relative_residual(diff.norm(), largest(terms).max(value.norm()))
}

/// `lhs = prod(factors)` entrywise, relative to the larger side and the
/// product of the factors' largest entries.
fn product_residual(lhs: &Mat2, factors: &[Mat2]) -> f64 {
    let rhs = factors.iter().fold(Mat2::identity(), |acc, m| acc * *m);
    let bound = factors.iter().map(Mat2::max_abs).product::<f64>();
    relative_residual(lhs.max_abs_diff(&rhs), bound.max(lhs.max_abs()).max(rhs.max_abs()))
}

/// Everything the two-fragment checks need at one `z`.
struct Junction {
    n1: i64,
    z: Complex64,
    /// `a_inf / a(n1 + 1)`
    bond_ratio: f64,
    range: IndexWindow,
    f_l: LatticeSolution,
    f_r: LatticeSolution,
    f_l2: LatticeSolution,
    g_l2: LatticeSolution,
    f_r1: LatticeSolution,
    g_r1: LatticeSolution,
    sd: ScatteringData,
    sd1: ScatteringData,
    sd1_inv: ScatteringData,
    sd2: ScatteringData,
    sd2_inv: ScatteringData,
}

impl Junction {
    fn new(seq: &CoefficientSequence, n1: i64, z: Complex64) -> Result<Self> {
        let frag = Fragmentation::new(vec![n1])?;
        let parts = fragment(seq, &frag);
        let (left, right) = (&parts[0], &parts[1]);
        let span = IndexWindow {
            n_min: n1 - 2,
            n_max: n1 + 2,
        };
        let f_l = jost_left_over(seq, z, span)?;
        let f_r = jost_right_over(seq, z, span)?;
        let f_l2 = jost_left_over(right, z, span)?;
        let g_l2 = conjugate_solution_over(right, z, Side::Left, span)?;
        let f_r1 = jost_right_over(left, z, span)?;
        let g_r1 = conjugate_solution_over(left, z, Side::Right, span)?;
        let range = f_l.range();
        Ok(Self {
            n1,
            z,
            bond_ratio: seq.limits().a_inf / seq.a(n1 + 1),
            range,
            f_l,
            f_r,
            f_l2,
            g_l2,
            f_r1,
            g_r1,
            sd: extract_scattering(seq, z)?,
            sd1: extract_scattering(left, z)?,
            sd1_inv: extract_scattering(left, z.inv())?,
            sd2: extract_scattering(right, z)?,
            sd2_inv: extract_scattering(right, z.inv())?,
        })
    }

    fn plane_wave_basis(&self) -> Mat2 {
        let (z, n1) = (self.z, self.n1);
        Mat2::new(zpow(z, n1), zpow(z, -n1), zpow(z, n1 + 1), zpow(z, -n1 - 1))
    }

    fn junction_scaling(&self) -> Mat2 {
        Mat2::diag(Complex64::new(1.0, 0.0), Complex64::new(self.bond_ratio, 0.0))
    }
}

/// Expansion of the full Jost solutions right of the breakpoint in terms of
/// the right fragment's `f_l2` and `g_l2`:
/// `f_l = f_l2` and `f_r = alpha f_l2 + beta g_l2` for `n >= n1`, with
/// `alpha = R/T`, `beta = 1/T`. The coefficients are read off Wronskians
/// with the basis pair; residuals are relative to the size of the terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RightExpansionReport {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub alpha_residual: f64,
    pub beta_residual: f64,
    /// `f_l(n) = f_l2(n)` for `n = n1, n1 + 1`.
    pub first_column_residual: f64,
    /// `f_r(n) = (R/T) f_l2(n) + (1/T) g_l2(n)` over the computed `n >= n1`.
    pub expansion_residual: f64,
}

impl RightExpansionReport {
    pub fn max(&self) -> f64 {
        self.alpha_residual
            .max(self.beta_residual)
            .max(self.first_column_residual)
            .max(self.expansion_residual)
    }
}

pub fn right_fragment_expansion_check(
    seq: &CoefficientSequence,
    n1: i64,
    z: Complex64,
) -> Result<RightExpansionReport> {
    let j = Junction::new(seq, n1, z)?;
    let inv_t = j.sd.t.inv();
    let r_over_t = j.sd.r * inv_t;
    let basis = wronskian_with_magnitude(seq, &j.f_l2, &j.g_l2, n1)?;
    let (alpha, alpha_residual) = wronskian_ratio(wronskian_with_magnitude(seq, &j.f_r, &j.g_l2, n1)?, basis, r_over_t);
    let (beta, beta_residual) = wronskian_ratio(wronskian_with_magnitude(seq, &j.f_l2, &j.f_r, n1)?, basis, inv_t);

    let mut first_column: f64 = 0.0;
    for n in [n1, n1 + 1] {
        first_column = first_column.max(term_residual(j.f_l.at(n)?, &[j.f_l2.at(n)?]));
    }
    let mut expansion: f64 = 0.0;
    for n in n1..=j.range.n_max {
        let terms = [r_over_t * j.f_l2.at(n)?, inv_t * j.g_l2.at(n)?];
        expansion = expansion.max(term_residual(j.f_r.at(n)?, &terms));
    }
    Ok(RightExpansionReport {
        alpha,
        beta,
        alpha_residual,
        beta_residual,
        first_column_residual: first_column,
        expansion_residual: expansion,
    })
}

/// Expansion of the full Jost solutions left of the breakpoint in terms of
/// the left fragment's `f_r1` and `g_r1`: `f_r = f_r1` for `n <= n1` and
/// `f_l = epsilon g_r1 + gamma f_r1` with `gamma = L/T`, `epsilon = 1/T`,
/// plus the bond-ratio jumps at `n1 + 1`. Measured as for
/// [`RightExpansionReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LeftExpansionReport {
    pub gamma: Complex64,
    pub epsilon: Complex64,
    pub gamma_residual: f64,
    pub epsilon_residual: f64,
    /// `f_r(n) = f_r1(n)` over the computed `n <= n1`.
    pub second_column_residual: f64,
    /// `f_l(n) = epsilon g_r1(n) + gamma f_r1(n)` over the computed `n <= n1`.
    pub expansion_residual: f64,
    /// `f_r(n1+1) = (a_inf/a(n1+1)) f_r1(n1+1)`
    pub right_jump_residual: f64,
    /// `f_l(n1+1) = (a_inf/a(n1+1)) (epsilon g_r1 + gamma f_r1)(n1+1)`
    pub left_jump_residual: f64,
}

impl LeftExpansionReport {
    pub fn max(&self) -> f64 {
        [
            self.gamma_residual,
            self.epsilon_residual,
            self.second_column_residual,
            self.expansion_residual,
            self.right_jump_residual,
            self.left_jump_residual,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn left_fragment_expansion_check(seq: &CoefficientSequence, n1: i64, z: Complex64) -> Result<LeftExpansionReport> {
    let j = Junction::new(seq, n1, z)?;
    let inv_t = j.sd.t.inv();
    let l_over_t = j.sd.l * inv_t;
    let basis = wronskian_with_magnitude(seq, &j.g_r1, &j.f_r1, n1 - 1)?;
    let (epsilon, epsilon_residual) =
        wronskian_ratio(wronskian_with_magnitude(seq, &j.f_l, &j.f_r1, n1 - 1)?, basis, inv_t);
    let (gamma, gamma_residual) =
        wronskian_ratio(wronskian_with_magnitude(seq, &j.g_r1, &j.f_l, n1 - 1)?, basis, l_over_t);
    let terms = |n: i64, scale: f64| -> Result<[Complex64; 2]> {
        Ok([scale * inv_t * j.g_r1.at(n)?, scale * l_over_t * j.f_r1.at(n)?])
    };

    let mut second_column: f64 = 0.0;
    let mut expansion: f64 = 0.0;
    for n in j.range.n_min..=n1 {
        second_column = second_column.max(term_residual(j.f_r.at(n)?, &[j.f_r1.at(n)?]));
        expansion = expansion.max(term_residual(j.f_l.at(n)?, &terms(n, 1.0)?));
    }
    let right_jump = term_residual(j.f_r.at(n1 + 1)?, &[j.bond_ratio * j.f_r1.at(n1 + 1)?]);
    let left_jump = term_residual(j.f_l.at(n1 + 1)?, &terms(n1 + 1, j.bond_ratio)?);
    Ok(LeftExpansionReport {
        gamma,
        epsilon,
        gamma_residual,
        epsilon_residual,
        second_column_residual: second_column,
        expansion_residual: expansion,
        right_jump_residual: right_jump,
        left_jump_residual: left_jump,
    })
}

/// Plane-wave forms of the fragment solutions at the breakpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JunctionReport {
    /// `f_l2(n) = (1/T2) z^n + (L2/T2) z^-n` for `n <= n1`.
    pub right_fragment_plane_wave: f64,
    /// `f_l2(n1+1) = (a_inf/a(n1+1)) [(1/T2) z^(n1+1) + (L2/T2) z^-(n1+1)]`.
    pub right_fragment_jump: f64,
    /// `f_r1(n) = (1/T1) z^-n + (R1/T1) z^n` for `n >= n1`.
    pub left_fragment_plane_wave: f64,
    /// `[f_l2 g_l2](n1, n1+1) = diag(1, a_inf/a(n1+1)) Z [[1/T2, L2~/T2~], [L2/T2, 1/T2~]]`.
    pub right_fragment_matrix: f64,
    /// `[g_r1 f_r1](n1, n1+1) = Z [[1/T1~, R1/T1], [R1~/T1~, 1/T1]]`.
    pub left_fragment_matrix: f64,
    /// `[f_l f_r](n1, n1+1)` computed through each fragment's basis.
    pub through_right_fragment: f64,
    pub through_left_fragment: f64,
}

impl JunctionReport {
    pub fn max(&self) -> f64 {
        [
            self.right_fragment_plane_wave,
            self.right_fragment_jump,
            self.left_fragment_plane_wave,
            self.right_fragment_matrix,
            self.left_fragment_matrix,
            self.through_right_fragment,
            self.through_left_fragment,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn junction_planewave_check(seq: &CoefficientSequence, n1: i64, z: Complex64) -> Result<JunctionReport> {
    let j = Junction::new(seq, n1, z)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (t1, r1, t1i, r1i) = (j.sd1.t, j.sd1.r, j.sd1_inv.t, j.sd1_inv.r);
    let (t2, l2, t2i, l2i) = (j.sd2.t, j.sd2.l, j.sd2_inv.t, j.sd2_inv.l);

    let right_wave = |n: i64, scale: f64| [scale * zpow(z, n) / t2, scale * l2 * zpow(z, -n) / t2];
    let mut right_plane: f64 = 0.0;
    for n in j.range.n_min..=n1 {
        right_plane = right_plane.max(term_residual(j.f_l2.at(n)?, &right_wave(n, 1.0)));
    }
    let right_jump = term_residual(j.f_l2.at(n1 + 1)?, &right_wave(n1 + 1, j.bond_ratio));

    let mut left_plane: f64 = 0.0;
    for n in n1..=j.range.n_max {
        let terms = [zpow(z, -n) / t1, r1 * zpow(z, n) / t1];
        left_plane = left_plane.max(term_residual(j.f_r1.at(n)?, &terms));
    }

    let basis = j.plane_wave_basis();
    let right_amplitudes = Mat2::new(one / t2, l2i / t2i, l2 / t2, one / t2i);
    let left_amplitudes = Mat2::new(one / t1i, r1 / t1, r1i / t1i, one / t1);
    let right_pair = column_pair(&j.f_l2, &j.g_l2, n1)?;
    let left_pair = column_pair(&j.g_r1, &j.f_r1, n1)?;

    let full = column_pair(&j.f_l, &j.f_r, n1)?;
    let inv_t = j.sd.t.inv();
    let upper = Mat2::new(one, j.sd.r * inv_t, zero, inv_t);
    let lower = Mat2::new(inv_t, zero, j.sd.l * inv_t, one);

    Ok(JunctionReport {
        right_fragment_plane_wave: right_plane,
        right_fragment_jump: right_jump,
        left_fragment_plane_wave: left_plane,
        right_fragment_matrix: product_residual(&right_pair, &[j.junction_scaling(), basis, right_amplitudes]),
        left_fragment_matrix: product_residual(&left_pair, &[basis, left_amplitudes]),
        through_right_fragment: product_residual(&full, &[right_pair, upper]),
        through_left_fragment: product_residual(&full, &[j.junction_scaling(), left_pair, lower]),
    })
}

/// Matrix algebra turning the junction relations into the two-fragment
/// product. `Q1 = [[1/T1~, R1/T1], [R1~/T1~, 1/T1]]`,
/// `P2 = [[1/T2, L2~/T2~], [L2/T2, 1/T2~]]`, `U = [[1, R/T], [0, 1/T]]`,
/// `C = [[1/T, 0], [L/T, 1]]`; tilde marks values at `1/z`. Residuals are
/// relative to the size of the matrices involved.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InverseAlgebraReport {
    /// `P2 U = Q1 C`, i.e. `Q1^-1 P2 = C U^-1` without inverting.
    pub rearranged: f64,
    /// `U [[1, -R], [0, T]] = I`.
    pub triangular_inverse: f64,
    /// `1/(T1 T1~) - R1 R1~/(T1 T1~) = 1`.
    pub determinant_prefactor: f64,
    /// `Q1 [[1/T1, -R1/T1], [-R1~/T1~, 1/T1~]] = I`.
    pub fragment_inverse: f64,
    /// Closed-form `Q1^-1 P2` against closed-form `C U^-1`.
    pub closed_form_product: f64,
    /// Closed-form `Q1^-1 P2` against `Lambda_1 Lambda_2`.
    pub equals_fragment_product: f64,
    /// Closed-form `C U^-1` against `Lambda`.
    pub equals_transition: f64,
}

impl InverseAlgebraReport {
    pub fn max(&self) -> f64 {
        [
            self.rearranged,
            self.triangular_inverse,
            self.determinant_prefactor,
            self.fragment_inverse,
            self.closed_form_product,
            self.equals_fragment_product,
            self.equals_transition,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// `sd1*`, `sd2*` are the data of the left and right fragments and `sd*` of
/// the whole sequence; `*_inv` are at `1/z`.
pub fn inverse_algebra_check(
    sd1: &ScatteringData,
    sd1_inv: &ScatteringData,
    sd2: &ScatteringData,
    sd2_inv: &ScatteringData,
    sd: &ScatteringData,
    sd_inv: &ScatteringData,
) -> InverseAlgebraReport {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (t1, r1, t1i, r1i) = (sd1.t, sd1.r, sd1_inv.t, sd1_inv.r);
    let (t2, l2, t2i, l2i) = (sd2.t, sd2.l, sd2_inv.t, sd2_inv.l);
    let (t, r, l) = (sd.t, sd.r, sd.l);

    let q1 = Mat2::new(one / t1i, r1 / t1, r1i / t1i, one / t1);
    let p2 = Mat2::new(one / t2, l2i / t2i, l2 / t2, one / t2i);
    let u = Mat2::new(one, r / t, zero, one / t);
    let c = Mat2::new(one / t, zero, l / t, one);

    let u_inv = Mat2::new(one, -r, zero, t);
    let q1_inv = Mat2::new(one / t1, -r1 / t1, -r1i / t1i, one / t1i);
    let inv_prod = one / (t1 * t1i);

    let lhs = q1_inv * p2;
    let rhs = c * u_inv;
    let lambda1 = transition_matrix(sd1, sd1_inv).entries;
    let lambda2 = transition_matrix(sd2, sd2_inv).entries;
    let lambda = transition_matrix(sd, sd_inv).entries;
    let bound = |ms: &[Mat2]| ms.iter().map(Mat2::max_abs).product::<f64>();

    InverseAlgebraReport {
        rearranged: relative_residual((p2 * u).max_abs_diff(&(q1 * c)), bound(&[p2, u]).max(bound(&[q1, c]))),
        triangular_inverse: product_residual(&Mat2::identity(), &[u, u_inv]),
        determinant_prefactor: term_residual(one, &[inv_prod, -r1 * r1i * inv_prod]),
        fragment_inverse: product_residual(&Mat2::identity(), &[q1, q1_inv]),
        closed_form_product: relative_residual(lhs.max_abs_diff(&rhs), bound(&[q1_inv, p2]).max(bound(&[c, u_inv]))),
        equals_fragment_product: product_residual(&lhs, &[lambda1, lambda2]),
        equals_transition: relative_residual(rhs.max_abs_diff(&lambda), bound(&[c, u_inv]).max(lambda.max_abs())),
    }
}

/// Runs [`inverse_algebra_check`] for the split of `seq` at `n1`.
pub fn inverse_algebra_check_at(seq: &CoefficientSequence, n1: i64, z: Complex64) -> Result<InverseAlgebraReport> {
    let parts = fragment(seq, &Fragmentation::new(vec![n1])?);
    let data = |s: &CoefficientSequence| -> Result<(ScatteringData, ScatteringData)> {
        Ok((extract_scattering(s, z)?, extract_scattering(s, z.inv())?))
    };
    let (sd1, sd1_inv) = data(&parts[0])?;
    let (sd2, sd2_inv) = data(&parts[1])?;
    let (sd, sd_inv) = data(seq)?;
    Ok(inverse_algebra_check(&sd1, &sd1_inv, &sd2, &sd2_inv, &sd, &sd_inv))
}
