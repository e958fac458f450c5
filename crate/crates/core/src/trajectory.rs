//! Vector-valued time sequences over all of `Z` with explicit extension
//! semantics.
//!
//! A trajectory stores an explicit window of values plus an extension rule
//! describing the rest of the time axis:
//!
//! * `FiniteSupport` — zero outside the window. The stored zeros are genuine
//!   values, so operators act on the whole line.
//! * `QuasiConstant` — a designated constant vector outside the window. The
//!   window data is authoritative; applying an operator reports values only
//!   at interior indices where every shifted read lands inside the window,
//!   plus the far tails where the result is exactly the mapped constant.
//!   Boundary indices that would mix window data with the constant are not
//!   invented.
//! * `Periodic` — the window is one period and repeats over all of `Z`.
//!
//! Right-hand sides of systems are quasi-constant, dual certificates are
//! finitely supported so the inner product of Eq.-style pairings stays a
//! finite sum, and witnesses are constant or periodic.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::matrix::PolyMatrix;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TrajectoryError {
    #[error("dimension mismatch: {context}")]
    DimMismatch { context: &'static str },
    #[error("inner product undefined: neither operand has finite support")]
    UndefinedInnerProduct,
    #[error("incompatible extensions: {context}")]
    ExtensionMismatch { context: &'static str },
    #[error("a trajectory window must contain at least one index")]
    EmptyWindow,
    #[error("window rows must all have the trajectory dimension")]
    RaggedValues,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    /// Zero outside the window.
    FiniteSupport,
    /// The given constant vector outside the window.
    QuasiConstant(Vec<Rational>),
    /// The window repeats with period equal to its length.
    Periodic,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    dim: usize,
    start: i64,
    values: Vec<Vec<Rational>>,
    extension: Extension,
}

impl Trajectory {
    pub fn new(
        start: i64,
        values: Vec<Vec<Rational>>,
        extension: Extension,
    ) -> Result<Self, TrajectoryError> {
        if values.is_empty() {
            return Err(TrajectoryError::EmptyWindow);
        }
        let dim = values[0].len();
        if values.iter().any(|row| row.len() != dim) {
            return Err(TrajectoryError::RaggedValues);
        }
        if let Extension::QuasiConstant(constant) = &extension {
            if constant.len() != dim {
                return Err(TrajectoryError::DimMismatch {
                    context: "quasi-constant part must have the trajectory dimension",
                });
            }
        }
        Ok(Self { dim, start, values, extension })
    }

    /// The zero trajectory (finitely supported).
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            start: 0,
            values: vec![vec![Rational::zero(); dim]],
            extension: Extension::FiniteSupport,
        }
    }

    /// The constant trajectory with the given value at every time instant.
    pub fn constant(value: Vec<Rational>) -> Self {
        Self {
            dim: value.len(),
            start: 0,
            values: vec![value.clone()],
            extension: Extension::QuasiConstant(value),
        }
    }

    pub fn finite(start: i64, values: Vec<Vec<Rational>>) -> Result<Self, TrajectoryError> {
        Self::new(start, values, Extension::FiniteSupport)
    }

    pub fn periodic(start: i64, values: Vec<Vec<Rational>>) -> Result<Self, TrajectoryError> {
        Self::new(start, values, Extension::Periodic)
    }

    /// A single nonzero component at one time index, zero elsewhere.
    pub fn spike(dim: usize, component: usize, at: i64, value: Rational) -> Self {
        let mut row = vec![Rational::zero(); dim];
        row[component] = value;
        Self {
            dim,
            start: at,
            values: vec![row],
            extension: Extension::FiniteSupport,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn window(&self) -> (i64, i64) {
        (self.start, self.end())
    }

    pub fn window_values(&self) -> &[Vec<Rational>] {
        &self.values
    }

    pub fn extension(&self) -> &Extension {
        &self.extension
    }

    fn period(&self) -> Option<i64> {
        matches!(self.extension, Extension::Periodic).then(|| self.values.len() as i64)
    }

    /// Value at any time index, following the extension outside the window.
    pub fn value_at(&self, k: i64) -> Vec<Rational> {
        let len = self.values.len() as i64;
        let offset = k - self.start;
        if (0..len).contains(&offset) {
            return self.values[offset as usize].clone();
        }
        match &self.extension {
            Extension::FiniteSupport => vec![Rational::zero(); self.dim],
            Extension::QuasiConstant(constant) => constant.clone(),
            Extension::Periodic => self.values[offset.rem_euclid(len) as usize].clone(),
        }
    }

    /// True iff the stored window equals the extension's outside value
    /// everywhere, i.e. the trajectory is a single constant over all of `Z`.
    pub fn constant_value(&self) -> Option<Vec<Rational>> {
        let first = &self.values[0];
        if self.values.iter().any(|row| row != first) {
            return None;
        }
        match &self.extension {
            Extension::FiniteSupport => first.iter().all(Zero::is_zero).then(|| first.clone()),
            Extension::QuasiConstant(constant) => (constant == first).then(|| first.clone()),
            Extension::Periodic => Some(first.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.constant_value()
            .is_some_and(|v| v.iter().all(Zero::is_zero))
    }

    /// Componentwise nonnegativity of the stored values and every value
    /// implied by the extension.
    pub fn orthant_check(&self) -> bool {
        let window_ok = self
            .values
            .iter()
            .all(|row| row.iter().all(|v| !v.is_negative()));
        let tail_ok = match &self.extension {
            Extension::FiniteSupport | Extension::Periodic => true,
            Extension::QuasiConstant(constant) => constant.iter().all(|v| !v.is_negative()),
        };
        window_ok && tail_ok
    }

    /// `sum_k x(k)^T y(k)`. Defined only when at least one operand has finite
    /// support, so the sum has finitely many nonzero terms.
    pub fn inner_product(&self, other: &Self) -> Result<Rational, TrajectoryError> {
        if self.dim != other.dim {
            return Err(TrajectoryError::DimMismatch {
                context: "inner product operands",
            });
        }
        let (finite, partner) = if matches!(self.extension, Extension::FiniteSupport) {
            (self, other)
        } else if matches!(other.extension, Extension::FiniteSupport) {
            (other, self)
        } else {
            return Err(TrajectoryError::UndefinedInnerProduct);
        };
        let mut sum = Rational::zero();
        for (offset, row) in finite.values.iter().enumerate() {
            let k = finite.start + offset as i64;
            let partner_row = partner.value_at(k);
            for (a, b) in row.iter().zip(&partner_row) {
                sum += a * b;
            }
        }
        Ok(sum)
    }

    /// Drops all-zero rows from both ends of a finitely supported window.
    pub fn trimmed(&self) -> Self {
        if !matches!(self.extension, Extension::FiniteSupport) {
            return self.clone();
        }
        let is_zero_row = |row: &Vec<Rational>| row.iter().all(Zero::is_zero);
        let first = self.values.iter().position(|r| !is_zero_row(r));
        match first {
            None => Self::zero(self.dim),
            Some(lo) => {
                let hi = self.values.iter().rposition(|r| !is_zero_row(r)).unwrap();
                Self {
                    dim: self.dim,
                    start: self.start + lo as i64,
                    values: self.values[lo..=hi].to_vec(),
                    extension: Extension::FiniteSupport,
                }
            }
        }
    }

    pub fn neg(&self) -> Self {
        self.map_values(|v| -v.clone())
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        self.map_values(|v| v * factor)
    }

    fn map_values(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        Self {
            dim: self.dim,
            start: self.start,
            values: self
                .values
                .iter()
                .map(|row| row.iter().map(&f).collect())
                .collect(),
            extension: match &self.extension {
                Extension::QuasiConstant(c) => {
                    Extension::QuasiConstant(c.iter().map(&f).collect())
                }
                other => other.clone(),
            },
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, TrajectoryError> {
        zip_values(self, other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, TrajectoryError> {
        zip_values(self, other, |a, b| a - b)
    }

    /// Concatenates components: the result at time `k` is the stacked vector
    /// of each part at `k`.
    pub fn stack(parts: &[&Trajectory]) -> Result<Self, TrajectoryError> {
        let Some(first) = parts.first() else {
            return Err(TrajectoryError::EmptyWindow);
        };
        let any_periodic = parts.iter().any(|p| p.period().is_some());
        if any_periodic {
            let mut period = 1i64;
            for part in parts {
                match part.period() {
                    Some(p) => period = lcm(period, p),
                    None => {
                        if part.constant_value().is_none() {
                            return Err(TrajectoryError::ExtensionMismatch {
                                context: "cannot stack a periodic part with a non-constant aperiodic part",
                            });
                        }
                    }
                }
            }
            let start = first.start;
            let values = (start..start + period)
                .map(|k| {
                    parts
                        .iter()
                        .flat_map(|p| p.value_at(k))
                        .collect::<Vec<_>>()
                })
                .collect();
            return Self::new(start, values, Extension::Periodic);
        }
        let all_finite = parts
            .iter()
            .all(|p| matches!(p.extension, Extension::FiniteSupport));
        let lo = parts.iter().map(|p| p.start).min().unwrap();
        let hi = parts.iter().map(|p| p.end()).max().unwrap();
        let values: Vec<Vec<Rational>> = (lo..=hi)
            .map(|k| parts.iter().flat_map(|p| p.value_at(k)).collect())
            .collect();
        let extension = if all_finite {
            Extension::FiniteSupport
        } else {
            let constant = parts
                .iter()
                .flat_map(|p| match &p.extension {
                    Extension::QuasiConstant(c) => c.clone(),
                    _ => vec![Rational::zero(); p.dim],
                })
                .collect();
            Extension::QuasiConstant(constant)
        };
        Self::new(lo, values, extension)
    }
}

/// Semantic equality: two trajectories are equal when they agree at every
/// time index, regardless of how their windows are laid out.
impl PartialEq for Trajectory {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && compare(self, other, Relation::Eq)
    }
}

impl fmt::Display for Trajectory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.window();
        write!(f, "window [{lo}, {hi}]")?;
        match &self.extension {
            Extension::FiniteSupport => write!(f, ", zero outside")?,
            Extension::QuasiConstant(c) => {
                write!(f, ", constant (")?;
                for (i, v) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, ") outside")?;
            }
            Extension::Periodic => write!(f, ", period {}", self.values.len())?,
        }
        Ok(())
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

fn zip_values(
    a: &Trajectory,
    b: &Trajectory,
    f: impl Fn(&Rational, &Rational) -> Rational,
) -> Result<Trajectory, TrajectoryError> {
    if a.dim != b.dim {
        return Err(TrajectoryError::DimMismatch {
            context: "pointwise combination operands",
        });
    }
    let combine_row = |k: i64| -> Vec<Rational> {
        a.value_at(k)
            .iter()
            .zip(&b.value_at(k))
            .map(|(x, y)| f(x, y))
            .collect()
    };
    match (a.period(), b.period()) {
        (Some(pa), Some(pb)) => {
            let period = lcm(pa, pb);
            let values = (0..period).map(combine_row).collect();
            Trajectory::new(0, values, Extension::Periodic)
        }
        (Some(p), None) | (None, Some(p)) => {
            let aperiodic = if a.period().is_none() { a } else { b };
            if aperiodic.constant_value().is_none() {
                return Err(TrajectoryError::ExtensionMismatch {
                    context: "periodic combined with a non-constant aperiodic trajectory",
                });
            }
            let values = (0..p).map(combine_row).collect();
            Trajectory::new(0, values, Extension::Periodic)
        }
        (None, None) => {
            let lo = a.start.min(b.start);
            let hi = a.end().max(b.end());
            let values = (lo..=hi).map(combine_row).collect();
            let both_finite = matches!(a.extension, Extension::FiniteSupport)
                && matches!(b.extension, Extension::FiniteSupport);
            let extension = if both_finite {
                Extension::FiniteSupport
            } else {
                let tail = |t: &Trajectory| match &t.extension {
                    Extension::QuasiConstant(c) => c.clone(),
                    _ => vec![Rational::zero(); t.dim],
                };
                Extension::QuasiConstant(
                    tail(a)
                        .iter()
                        .zip(&tail(b))
                        .map(|(x, y)| f(x, y))
                        .collect(),
                )
            };
            Trajectory::new(lo, values, extension)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
}

/// Pointwise comparison over all of `Z`, decided on a finite covering window.
///
/// Beyond one combined period past both windows every pair of values repeats
/// a pair already inspected, so the scan below is exhaustive.
pub(crate) fn compare(lhs: &Trajectory, rhs: &Trajectory, relation: Relation) -> bool {
    debug_assert_eq!(lhs.dim, rhs.dim);
    let period = lcm(lhs.period().unwrap_or(1), rhs.period().unwrap_or(1));
    let lo = lhs.start.min(rhs.start) - period;
    let hi = lhs.end().max(rhs.end()) + period;
    for k in lo..=hi {
        let a = lhs.value_at(k);
        let b = rhs.value_at(k);
        let ok = match relation {
            Relation::Eq => a == b,
            Relation::Le => a.iter().zip(&b).all(|(x, y)| x <= y),
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Applies the matrix shift operator: `(M w)(k) = sum_i M_i w(k+i)`.
///
/// Extension semantics:
/// * finite support in, finite support out, window widened by the degree span;
/// * quasi-constant in: values at interior indices (every read inside the
///   window) plus a quasi-constant tail equal to `M(1) c`; boundary indices
///   that would mix window data with the constant are not reported;
/// * periodic in, periodic out with the same period.
pub fn apply(m: &PolyMatrix, w: &Trajectory) -> Result<Trajectory, TrajectoryError> {
    apply_inner(m, w, false)
}

/// Like [`apply`], but a quasi-constant input is taken at face value: reads
/// outside the window use the constant, and the result covers the full
/// widened window. This is the right transport for right-hand sides, whose
/// quasi-constant model is exact by definition.
pub fn apply_total(m: &PolyMatrix, w: &Trajectory) -> Result<Trajectory, TrajectoryError> {
    apply_inner(m, w, true)
}

fn apply_inner(
    m: &PolyMatrix,
    w: &Trajectory,
    backfill: bool,
) -> Result<Trajectory, TrajectoryError> {
    if m.cols() != w.dim() {
        return Err(TrajectoryError::DimMismatch {
            context: "operator columns must match trajectory dimension",
        });
    }
    let (min_deg, max_deg) = m.degree_range().unwrap_or((0, 0));
    let (t0, t1) = w.window();
    let row_at = |k: i64| -> Vec<Rational> {
        (0..m.rows())
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..m.cols() {
                    for (degree, coeff) in m.entry(i, j).terms() {
                        acc += coeff * &w.value_at(k + degree)[j];
                    }
                }
                acc
            })
            .collect()
    };
    match w.extension() {
        Extension::FiniteSupport => {
            let lo = t0 - max_deg;
            let hi = t1 - min_deg;
            let values = (lo..=hi).map(row_at).collect();
            Trajectory::new(lo, values, Extension::FiniteSupport)
        }
        Extension::Periodic => {
            let values = (t0..=t1).map(row_at).collect();
            Trajectory::new(t0, values, Extension::Periodic)
        }
        Extension::QuasiConstant(constant) => {
            let mapped: Vec<Rational> = m
                .eval_one()
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(constant)
                        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect();
            let (lo, hi) = if backfill {
                (t0 - max_deg, t1 - min_deg)
            } else {
                (t0 - min_deg, t1 - max_deg)
            };
            if lo > hi {
                // The window is shorter than the operator span: no interior
                // index exists and only the tail value is defined.
                return Trajectory::new(
                    t0,
                    vec![mapped.clone()],
                    Extension::QuasiConstant(mapped),
                );
            }
            let values = (lo..=hi).map(row_at).collect();
            Trajectory::new(lo, values, Extension::QuasiConstant(mapped))
        }
    }
}

/// First defined index and the values from there on.
pub type WindowValues = (i64, Vec<Vec<Rational>>);

/// Extension-blind interior evaluation: values of `M w` at every index whose
/// shifted reads all land inside the stored window. Returns `None` when the
/// window is shorter than the operator span. Used to validate rolled-out
/// window samples without trusting any extension.
pub fn apply_on_window(
    m: &PolyMatrix,
    w: &Trajectory,
) -> Result<Option<WindowValues>, TrajectoryError> {
    if m.cols() != w.dim() {
        return Err(TrajectoryError::DimMismatch {
            context: "operator columns must match trajectory dimension",
        });
    }
    let (min_deg, max_deg) = m.degree_range().unwrap_or((0, 0));
    let (t0, t1) = w.window();
    let lo = t0 - min_deg;
    let hi = t1 - max_deg;
    if lo > hi {
        return Ok(None);
    }
    let values = (lo..=hi)
        .map(|k| {
            (0..m.rows())
                .map(|i| {
                    let mut acc = Rational::zero();
                    for j in 0..m.cols() {
                        for (degree, coeff) in m.entry(i, j).terms() {
                            acc += coeff * &w.value_at(k + degree)[j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    Ok(Some((lo, values)))
}

/// Whether `M w (rel) rhs` holds at every index where the application is
/// defined, the tail comparisons included.
pub fn satisfies(
    m: &PolyMatrix,
    w: &Trajectory,
    rhs: &Trajectory,
    relation: Relation,
) -> Result<bool, TrajectoryError> {
    if m.rows() != rhs.dim() {
        return Err(TrajectoryError::DimMismatch {
            context: "right-hand side dimension must match operator rows",
        });
    }
    let lhs = apply(m, w)?;
    Ok(compare(&lhs, rhs, relation))
}

/// Window-scoped variant of [`satisfies`]: checks only interior indices of
/// the stored window and ignores every extension. Vacuously true when the
/// window is shorter than the operator span.
pub fn satisfies_on_window(
    m: &PolyMatrix,
    w: &Trajectory,
    rhs: &Trajectory,
    relation: Relation,
) -> Result<bool, TrajectoryError> {
    if m.rows() != rhs.dim() {
        return Err(TrajectoryError::DimMismatch {
            context: "right-hand side dimension must match operator rows",
        });
    }
    let Some((lo, values)) = apply_on_window(m, w)? else {
        return Ok(true);
    };
    for (offset, row) in values.iter().enumerate() {
        let bound = rhs.value_at(lo + offset as i64);
        let ok = match relation {
            Relation::Eq => *row == bound,
            Relation::Le => row.iter().zip(&bound).all(|(a, b)| a <= b),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}
