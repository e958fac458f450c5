//! Laurent polynomials in the shift indeterminate.
//!
//! A `LaurentPoly` is a finite sum `sum_i c_i s^i` with exact rational
//! coefficients and integer degrees of either sign. `s` stands for the
//! one-step advance operator and `s^-1` for the one-step delay, so these
//! polynomials act on trajectories by shifting. The zero polynomial is the
//! empty term map; no stored coefficient is ever zero.

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{rat, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, rat(1))
    }

    /// The advance operator `s`.
    pub fn shift_op() -> Self {
        Self::monomial(1, rat(1))
    }

    /// The delay operator `s^-1`.
    pub fn delay_op() -> Self {
        Self::monomial(-1, rat(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(degree: i64, coeff: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(degree, coeff);
        }
        Self { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Rational)>>(iter: I) -> Self {
        let mut poly = Self::zero();
        for (degree, coeff) in iter {
            poly.add_term(degree, coeff);
        }
        poly
    }

    fn add_term(&mut self, degree: i64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&degree) {
            Some(existing) => {
                *existing += coeff;
                if existing.is_zero() {
                    self.terms.remove(&degree);
                }
            }
            None => {
                self.terms.insert(degree, coeff);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the polynomial is `c * s^k` for nonzero `c` — a unit of the
    /// Laurent ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff(&self, degree: i64) -> Rational {
        self.terms.get(&degree).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.terms.iter().map(|(&d, c)| (d, c))
    }

    /// Lowest degree with a nonzero coefficient; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `max_degree - min_degree`; the Euclidean measure used by row reduction.
    pub fn degree_span(&self) -> Option<i64> {
        Some(self.max_degree()? - self.min_degree()?)
    }

    /// Multiplication by `s^k`.
    pub fn shifted(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&d, c)| (d + k, c.clone())).collect(),
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&d, c)| (d, c * factor)).collect(),
        }
    }

    /// Substitutes `s -> s^-1`, the scalar part of forming an adjoint.
    pub fn adjoint(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&d, c)| (-d, c.clone())).collect(),
        }
    }

    /// Value at `s = 1`, i.e. the sum of all coefficients. A constant
    /// trajectory is mapped through a shift polynomial by this number.
    pub fn eval_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// Euclidean-style division: `self = divisor * quotient + remainder` with
    /// `degree_span(remainder) < degree_span(divisor)` (or remainder zero).
    /// Returns `None` when the divisor is zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        if divisor.is_zero() {
            return None;
        }
        let div_span = divisor.degree_span().unwrap();
        let div_max = divisor.max_degree().unwrap();
        let div_lead = divisor.coeff(div_max);
        let mut quotient = Self::zero();
        let mut remainder = self.clone();
        while let Some(rem_span) = remainder.degree_span() {
            if rem_span < div_span {
                break;
            }
            let rem_max = remainder.max_degree().unwrap();
            let factor = Self::monomial(rem_max - div_max, remainder.coeff(rem_max) / &div_lead);
            remainder = &remainder - &(&factor * divisor);
            quotient = &quotient + &factor;
        }
        Some((quotient, remainder))
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (quotient, remainder) = self.div_rem(divisor)?;
        remainder.is_zero().then_some(quotient)
    }

    /// Inverse of a unit `c * s^k`, namely `c^-1 * s^-k`.
    pub fn unit_inverse(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let degree = self.min_degree().unwrap();
        Some(Self::monomial(-degree, self.coeff(degree).recip()))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;

    fn add(self, other: &LaurentPoly) -> LaurentPoly {
        let mut result = self.clone();
        for (degree, coeff) in &other.terms {
            result.add_term(*degree, coeff.clone());
        }
        result
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;

    fn sub(self, other: &LaurentPoly) -> LaurentPoly {
        let mut result = self.clone();
        for (degree, coeff) in &other.terms {
            result.add_term(*degree, -coeff.clone());
        }
        result
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;

    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(&d, c)| (d, -c.clone())).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;

    fn mul(self, other: &LaurentPoly) -> LaurentPoly {
        let mut result = LaurentPoly::zero();
        for (&da, ca) in &self.terms {
            for (&db, cb) in &other.terms {
                result.add_term(da + db, ca * cb);
            }
        }
        result
    }
}

/// Renders in the textual grammar shared with the model parser: terms in
/// descending degree, `s` for the advance, `s^-1` for the delay, e.g.
/// `1 - s^-1 - s^-2` or `3*s^2 + 1/2`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&degree, coeff) in self.terms.iter().rev() {
            if first {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let magnitude = coeff.abs();
            let power: Option<String> = match degree {
                0 => None,
                1 => Some(String::from("s")),
                d => Some(alloc::format!("s^{d}")),
            };
            match power {
                None => write!(f, "{magnitude}")?,
                Some(p) if magnitude.is_one() => write!(f, "{p}")?,
                Some(p) => write!(f, "{magnitude}*{p}")?,
            }
        }
        Ok(())
    }
}
