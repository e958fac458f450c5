//! Exact rational coefficients.
//!
//! All arithmetic in this crate is over `Q`, realized as arbitrary-precision
//! rationals kept in lowest terms with a positive denominator. Feasibility
//! verdicts and unimodularity checks are exact; no tolerances exist anywhere.

use alloc::string::String;
use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

/// Integer as a rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n/d` in lowest terms. Panics on a zero denominator.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `p` or `p/q` with optional sign, e.g. `-3/4`.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(String::from("empty rational literal"));
    }
    let mut split = trimmed.splitn(2, '/');
    let numer_text = split.next().unwrap().trim();
    let numer = BigInt::parse_bytes(numer_text.as_bytes(), 10)
        .ok_or_else(|| alloc::format!("invalid integer `{numer_text}`"))?;
    match split.next() {
        None => Ok(Rational::from_integer(numer)),
        Some(denom_text) => {
            let denom_text = denom_text.trim();
            let denom = BigInt::parse_bytes(denom_text.as_bytes(), 10)
                .ok_or_else(|| alloc::format!("invalid integer `{denom_text}`"))?;
            if denom == BigInt::from(0) {
                return Err(String::from("zero denominator"));
            }
            Ok(Rational::new(numer, denom))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = ratio(6, -4);
        assert_eq!(r, ratio(-3, 2));
        assert_eq!(alloc::format!("{r}"), "-3/2");
    }

    #[test]
    fn parse_round_trip() {
        for text in ["0", "5", "-7", "3/4", "-12/8"] {
            let r = parse_rational(text).unwrap();
            let back = parse_rational(&alloc::format!("{r}")).unwrap();
            assert_eq!(r, back);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }
}
