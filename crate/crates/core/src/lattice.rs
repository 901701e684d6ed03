//! Coefficient sequences `(a(n), b(n), w(n))` on the integer lattice.
//!
//! A sequence is stored densely over an [`IndexWindow`] and extended to all of
//! `Z` by its [`Limits`]. Only finitely supported perturbations are
//! representable, so the first-moment summability condition is automatic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest window accepted by [`validate_sequence`].
pub const MAX_WINDOW_LEN: usize = 10_000;

/// Limiting values of the coefficients as `n -> +-infinity`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Limits {
    pub a_inf: f64,
    pub b_inf: f64,
    pub w_inf: f64,
}

impl Limits {
    pub fn new(a_inf: f64, b_inf: f64, w_inf: f64) -> Result<Self> {
        if !a_inf.is_finite() {
            return Err(Error::NonFinite {
                field: "a_inf",
                site: 0,
            });
        }
        if !b_inf.is_finite() {
            return Err(Error::NonFinite {
                field: "b_inf",
                site: 0,
            });
        }
        if !w_inf.is_finite() {
            return Err(Error::NonFinite {
                field: "w_inf",
                site: 0,
            });
        }
        if a_inf == 0.0 {
            return Err(Error::ZeroLimitBond);
        }
        if w_inf <= 0.0 {
            return Err(Error::NonPositiveLimitWeight(w_inf));
        }
        Ok(Self { a_inf, b_inf, w_inf })
    }
}

/// Closed integer interval `[n_min, n_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexWindow {
    pub n_min: i64,
    pub n_max: i64,
}

impl IndexWindow {
    pub fn new(n_min: i64, n_max: i64) -> Result<Self> {
        if n_min > n_max {
            return Err(Error::EmptyWindow { n_min, n_max });
        }
        Ok(Self { n_min, n_max })
    }

    pub fn len(&self) -> usize {
        (self.n_max - self.n_min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, n: i64) -> bool {
        self.n_min <= n && n <= self.n_max
    }

    pub fn union(&self, other: &IndexWindow) -> IndexWindow {
        IndexWindow {
            n_min: self.n_min.min(other.n_min),
            n_max: self.n_max.max(other.n_max),
        }
    }

    pub fn sites(&self) -> std::ops::RangeInclusive<i64> {
        self.n_min..=self.n_max
    }
}

/// Coefficients at one site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficients {
    pub a: f64,
    pub b: f64,
    pub w: f64,
}

/// On-disk / wire description of a coefficient sequence.
///
/// Index `k` of each array is the coefficient at site `n_min + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawCoefficients {
    pub a_inf: f64,
    pub b_inf: f64,
    pub w_inf: f64,
    pub n_min: i64,
    pub n_max: i64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub w: Vec<f64>,
}

/// A validated, immutable coefficient sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSequence {
    limits: Limits,
    window: IndexWindow,
    a: Vec<f64>,
    b: Vec<f64>,
    w: Vec<f64>,
}

/// Result of [`effective_support`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// Every coefficient equals its limit.
    Free,
    /// Smallest window outside which all coefficients are at their limits.
    Window(IndexWindow),
}

impl Support {
    /// The support window, or the degenerate window `[0, 0]` for a free sequence.
    pub fn window(&self) -> IndexWindow {
        match self {
            Support::Free => IndexWindow { n_min: 0, n_max: 0 },
            Support::Window(w) => *w,
        }
    }

    pub fn is_free(&self) -> bool {
        matches!(self, Support::Free)
    }
}

/// Validates a raw description and builds a [`CoefficientSequence`].
///
/// Nonpositive bonds `a(n) < 0` are accepted; a warning is logged since the
/// junction arguments for the factorization are usually stated for `a > 0`.
pub fn validate_sequence(raw: &RawCoefficients) -> Result<CoefficientSequence> {
    let limits = Limits::new(raw.a_inf, raw.b_inf, raw.w_inf)?;
    let window = IndexWindow::new(raw.n_min, raw.n_max)?;
    let seq = CoefficientSequence::new(limits, window, raw.a.clone(), raw.b.clone(), raw.w.clone())?;
    let negative = seq.nonpositive_bonds();
    if !negative.is_empty() || limits.a_inf < 0.0 {
        log::warn!(
            "sequence has nonpositive bond coefficients (a_inf = {}, sites {:?}); \
             results assume only a(n) != 0",
            limits.a_inf,
            negative
        );
    }
    Ok(seq)
}

impl CoefficientSequence {
    pub fn new(limits: Limits, window: IndexWindow, a: Vec<f64>, b: Vec<f64>, w: Vec<f64>) -> Result<Self> {
        let expected = (window.n_max as i128 - window.n_min as i128 + 1) as u128;
        if expected > MAX_WINDOW_LEN as u128 {
            return Err(Error::WindowTooLong {
                len: usize::try_from(expected).unwrap_or(usize::MAX),
                max: MAX_WINDOW_LEN,
            });
        }
        let expected = expected as usize;
        for (field, values) in [("a", &a), ("b", &b), ("w", &w)] {
            if values.len() != expected {
                return Err(Error::LengthMismatch {
                    field,
                    expected,
                    found: values.len(),
                });
            }
        }
        for (k, site) in window.sites().enumerate() {
            for (field, v) in [("a", a[k]), ("b", b[k]), ("w", w[k])] {
                if !v.is_finite() {
                    return Err(Error::NonFinite { field, site });
                }
            }
            if a[k] == 0.0 {
                return Err(Error::ZeroBond(site));
            }
            if w[k] <= 0.0 {
                return Err(Error::NonPositiveWeight { site, value: w[k] });
            }
        }
        Ok(Self {
            limits,
            window,
            a,
            b,
            w,
        })
    }

    /// The everywhere-free sequence stored over the single site `0`.
    pub fn free(limits: Limits) -> Self {
        Self {
            limits,
            window: IndexWindow { n_min: 0, n_max: 0 },
            a: vec![limits.a_inf],
            b: vec![limits.b_inf],
            w: vec![limits.w_inf],
        }
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    pub fn window(&self) -> IndexWindow {
        self.window
    }

    pub fn at(&self, n: i64) -> Coefficients {
        coefficient_at(self, n)
    }

    pub fn a(&self, n: i64) -> f64 {
        match self.offset(n) {
            Some(k) => self.a[k],
            None => self.limits.a_inf,
        }
    }

    pub fn b(&self, n: i64) -> f64 {
        match self.offset(n) {
            Some(k) => self.b[k],
            None => self.limits.b_inf,
        }
    }

    pub fn w(&self, n: i64) -> f64 {
        match self.offset(n) {
            Some(k) => self.w[k],
            None => self.limits.w_inf,
        }
    }

    /// Stored sites with `a(n) <= 0`.
    pub fn nonpositive_bonds(&self) -> Vec<i64> {
        self.window
            .sites()
            .zip(&self.a)
            .filter(|(_, &a)| a <= 0.0)
            .map(|(n, _)| n)
            .collect()
    }

    pub fn to_raw(&self) -> RawCoefficients {
        RawCoefficients {
            a_inf: self.limits.a_inf,
            b_inf: self.limits.b_inf,
            w_inf: self.limits.w_inf,
            n_min: self.window.n_min,
            n_max: self.window.n_max,
            a: self.a.clone(),
            b: self.b.clone(),
            w: self.w.clone(),
        }
    }

    /// Copy of `self` with the coefficients at site `n` replaced. The stored
    /// window grows to include `n` when needed.
    pub fn with_site(&self, n: i64, values: Coefficients) -> Result<Self> {
        let window = self.window.union(&IndexWindow { n_min: n, n_max: n });
        let pick = |f: &dyn Fn(Coefficients) -> f64| -> Vec<f64> {
            window
                .sites()
                .map(|m| if m == n { f(values) } else { f(self.at(m)) })
                .collect()
        };
        Self::new(self.limits, window, pick(&|c| c.a), pick(&|c| c.b), pick(&|c| c.w))
    }

    fn offset(&self, n: i64) -> Option<usize> {
        if self.window.contains(n) {
            Some((n - self.window.n_min) as usize)
        } else {
            None
        }
    }

    fn differs_from_limits(&self, k: usize) -> bool {
        self.a[k] != self.limits.a_inf || self.b[k] != self.limits.b_inf || self.w[k] != self.limits.w_inf
    }
}

/// Total extension of the stored window by the limiting values.
pub fn coefficient_at(seq: &CoefficientSequence, n: i64) -> Coefficients {
    match seq.offset(n) {
        Some(k) => Coefficients {
            a: seq.a[k],
            b: seq.b[k],
            w: seq.w[k],
        },
        None => Coefficients {
            a: seq.limits.a_inf,
            b: seq.limits.b_inf,
            w: seq.limits.w_inf,
        },
    }
}

pub fn effective_support(seq: &CoefficientSequence) -> Support {
    let first = (0..seq.a.len()).find(|&k| seq.differs_from_limits(k));
    let last = (0..seq.a.len()).rev().find(|&k| seq.differs_from_limits(k));
    match (first, last) {
        (Some(lo), Some(hi)) => Support::Window(IndexWindow {
            n_min: seq.window.n_min + lo as i64,
            n_max: seq.window.n_min + hi as i64,
        }),
        _ => Support::Free,
    }
}

/// Ordered interior breakpoints `n_1 < ... < n_{N-1}` of a partition of `Z`
/// into `N` consecutive pieces `(n_{j-1}, n_j]`, with `n_0 = -inf` and
/// `n_N = +inf` implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragmentation {
    breakpoints: Vec<i64>,
}

impl Fragmentation {
    pub fn new(breakpoints: Vec<i64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidBreakpoints);
        }
        Ok(Self { breakpoints })
    }

    pub fn breakpoints(&self) -> &[i64] {
        &self.breakpoints
    }

    /// Number of fragments `N`.
    pub fn fragment_count(&self) -> usize {
        self.breakpoints.len() + 1
    }

    /// Bounds `(n_{j-1}, n_j)` of fragment `j` (0-based), `None` meaning infinite.
    pub fn bounds(&self, j: usize) -> (Option<i64>, Option<i64>) {
        let lower = if j == 0 { None } else { Some(self.breakpoints[j - 1]) };
        let upper = self.breakpoints.get(j).copied();
        (lower, upper)
    }
}

/// Splits `seq` into `N` fragments. Fragment `j` keeps the original
/// coefficients on `n_{j-1} < n <= n_j` and the limiting values elsewhere;
/// all fragments share the stored window of `seq`.
pub fn fragment(seq: &CoefficientSequence, frag: &Fragmentation) -> Vec<CoefficientSequence> {
    (0..frag.fragment_count())
        .map(|j| {
            let (lower, upper) = frag.bounds(j);
            let inside = |n: i64| lower.is_none_or(|lo| n > lo) && upper.is_none_or(|hi| n <= hi);
            let lim = seq.limits;
            let mut out = seq.clone();
            for (k, n) in seq.window.sites().enumerate() {
                if !inside(n) {
                    out.a[k] = lim.a_inf;
                    out.b[k] = lim.b_inf;
                    out.w[k] = lim.w_inf;
                }
            }
            out
        })
        .collect()
}
