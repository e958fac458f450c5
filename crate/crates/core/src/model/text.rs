//! The `.bsys` model file format and the shared polynomial grammar.
//!
//! A model file is sectioned plain text:
//!
//! ```text
//! # stock management over w = (x, u, d)
//! [vars]
//! x u d
//!
//! [eq]
//! s - 1 | -1 | 1 = 0
//!
//! [ineq]
//! -1 | -1 | 1 <= 0
//! -1 |  0 | 0 <= 0
//! ```
//!
//! Each row lists one polynomial per variable separated by `|`, then `=` or
//! `<=` and a rational right-hand side. Polynomials use `c*s^k` terms joined
//! by `+`/`-`, with `s` the advance and `s^-1` the delay; rational literals
//! are `p` or `p/q`. Parsing and serialization are exact and round-trip.

use alloc::string::String;

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{BehavioralSystem, ModelError};
use crate::laurent::LaurentPoly;
use crate::matrix::PolyMatrix;
use crate::rational::Rational;
use crate::trajectory::Trajectory;

struct Cursor<'a> {
    chars: core::iter::Peekable<core::str::CharIndices<'a>>,
    text: &'a str,
    /// Column (in characters) of the next unread char, 1-based.
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, start_column: usize) -> Self {
        Self {
            chars: text.char_indices().peekable(),
            text,
            column: start_column,
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        self.column += 1;
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn digits(&mut self) -> Option<String> {
        let mut out = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            out.push(self.bump().unwrap());
        }
        (!out.is_empty()).then_some(out)
    }

    fn error<T>(&self, message: &str) -> Result<T, (usize, String)> {
        Err((self.column, String::from(message)))
    }

    fn rest_is_blank(&mut self) -> bool {
        self.skip_ws();
        self.peek().is_none()
    }
}

fn big(digits: &str) -> BigInt {
    BigInt::parse_bytes(digits.as_bytes(), 10).expect("scanner produced decimal digits")
}

/// Unsigned rational literal `p` or `p/q`.
fn scan_rational(cursor: &mut Cursor) -> Result<Rational, (usize, String)> {
    let Some(numer) = cursor.digits() else {
        return cursor.error("expected a number");
    };
    cursor.skip_ws();
    if cursor.peek() == Some('/') {
        cursor.bump();
        cursor.skip_ws();
        let Some(denom) = cursor.digits() else {
            return cursor.error("expected a denominator after `/`");
        };
        let denom = big(&denom);
        if denom.is_zero() {
            return cursor.error("zero denominator");
        }
        Ok(Rational::new(big(&numer), denom))
    } else {
        Ok(Rational::from_integer(big(&numer)))
    }
}

/// Power `s`, `s^3`, or `s^-2`.
fn scan_power(cursor: &mut Cursor) -> Result<i64, (usize, String)> {
    debug_assert_eq!(cursor.peek(), Some('s'));
    cursor.bump();
    cursor.skip_ws();
    if cursor.peek() != Some('^') {
        return Ok(1);
    }
    cursor.bump();
    let expected_at = cursor.column;
    cursor.skip_ws();
    let negative = if cursor.peek() == Some('-') {
        cursor.bump();
        true
    } else {
        false
    };
    let Some(digits) = cursor.digits() else {
        return Err((expected_at, String::from("expected an exponent after `^`")));
    };
    let exponent: i64 = digits
        .parse()
        .map_err(|_| (cursor.column, String::from("exponent out of range")))?;
    Ok(if negative { -exponent } else { exponent })
}

fn scan_poly(cursor: &mut Cursor) -> Result<LaurentPoly, (usize, String)> {
    let mut poly = LaurentPoly::zero();
    let mut first = true;
    loop {
        cursor.skip_ws();
        let sign = match cursor.peek() {
            Some('+') => {
                cursor.bump();
                false
            }
            Some('-') => {
                cursor.bump();
                true
            }
            None if first => return cursor.error("expected a polynomial"),
            None => return cursor.error("dangling operator"),
            _ if first => false,
            _ => return cursor.error("expected `+` or `-` between terms"),
        };
        cursor.skip_ws();
        // term := rational ['*'] [power] | power
        let mut coeff = None;
        if matches!(cursor.peek(), Some(c) if c.is_ascii_digit()) {
            coeff = Some(scan_rational(cursor)?);
            cursor.skip_ws();
            if cursor.peek() == Some('*') {
                cursor.bump();
                cursor.skip_ws();
                if cursor.peek() != Some('s') {
                    return cursor.error("expected `s` after `*`");
                }
            }
        }
        let degree = if cursor.peek() == Some('s') {
            scan_power(cursor)?
        } else {
            if coeff.is_none() {
                return cursor.error("expected a coefficient or `s`");
            }
            0
        };
        let mut value = coeff.unwrap_or_else(|| Rational::from_integer(1.into()));
        if sign {
            value = -value;
        }
        poly = &poly + &LaurentPoly::monomial(degree, value);
        first = false;
        cursor.skip_ws();
        match cursor.peek() {
            None => return Ok(poly),
            Some('+') | Some('-') => continue,
            Some(_) => return cursor.error("unexpected character in polynomial"),
        }
    }
}

/// Parses one polynomial in the shared grammar. The error carries the
/// 1-based column where scanning stopped.
pub fn parse_poly(text: &str) -> Result<LaurentPoly, (usize, String)> {
    let mut cursor = Cursor::new(text, 1);
    let poly = scan_poly(&mut cursor)?;
    if !cursor.rest_is_blank() {
        return cursor.error("trailing input after polynomial");
    }
    let _ = cursor.text;
    Ok(poly)
}

/// Parses a matrix literal: rows separated by `;`, entries by `|`, e.g.
/// `s^-1 + 1 | 1 ; 1 | s^-1`.
pub fn parse_matrix(text: &str) -> Result<PolyMatrix, ModelError> {
    let mut rows: Vec<Vec<LaurentPoly>> = Vec::new();
    let mut offset = 0usize;
    for row_text in text.split(';') {
        let mut row = Vec::new();
        let mut entry_offset = offset;
        for entry in row_text.split('|') {
            let mut cursor = Cursor::new(entry, entry_offset + 1);
            let poly = scan_poly(&mut cursor).map_err(|(column, message)| ModelError::Syntax {
                line: 1,
                column,
                message,
            })?;
            if !cursor.rest_is_blank() {
                return Err(ModelError::Syntax {
                    line: 1,
                    column: cursor.column,
                    message: String::from("trailing input after polynomial"),
                });
            }
            row.push(poly);
            entry_offset += entry.chars().count() + 1;
        }
        if let Some(prev) = rows.first() {
            if prev.len() != row.len() {
                return Err(ModelError::Structure(String::from(
                    "matrix rows have differing entry counts",
                )));
            }
        }
        rows.push(row);
        offset += row_text.chars().count() + 1;
    }
    PolyMatrix::from_rows(rows).map_err(|e| ModelError::Structure(alloc::format!("{e}")))
}

#[derive(PartialEq, Clone, Copy)]
enum Section {
    None,
    Vars,
    Eq,
    Ineq,
}

/// Parses a `.bsys` model. See the module docs for the grammar.
pub fn parse_model(text: &str) -> Result<BehavioralSystem, ModelError> {
    let mut section = Section::None;
    let mut names: Vec<String> = Vec::new();
    let mut eq_rows: Vec<Vec<LaurentPoly>> = Vec::new();
    let mut eq_rhs: Vec<Rational> = Vec::new();
    let mut ineq_rows: Vec<Vec<LaurentPoly>> = Vec::new();
    let mut ineq_rhs: Vec<Rational> = Vec::new();

    for (line_index, raw_line) in text.lines().enumerate() {
        let line_no = line_index + 1;
        let line = match raw_line.find('#') {
            Some(hash) => &raw_line[..hash],
            None => raw_line,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        match trimmed {
            "[vars]" => {
                section = Section::Vars;
                continue;
            }
            "[eq]" => {
                section = Section::Eq;
                continue;
            }
            "[ineq]" => {
                section = Section::Ineq;
                continue;
            }
            _ => {}
        }
        if trimmed.starts_with('[') {
            return Err(ModelError::Syntax {
                line: line_no,
                column: line.find('[').unwrap_or(0) + 1,
                message: alloc::format!("unknown section `{trimmed}`"),
            });
        }
        match section {
            Section::None => {
                return Err(ModelError::Syntax {
                    line: line_no,
                    column: 1,
                    message: String::from("content before any section header"),
                })
            }
            Section::Vars => {
                names.extend(trimmed.split_whitespace().map(String::from));
            }
            Section::Eq | Section::Ineq => {
                let separator = if section == Section::Eq { "=" } else { "<=" };
                let Some(sep_at) = line.find(separator) else {
                    return Err(ModelError::Syntax {
                        line: line_no,
                        column: line.chars().count() + 1,
                        message: alloc::format!("expected `{separator}` before the right-hand side"),
                    });
                };
                if section == Section::Eq && sep_at > 0 && line.as_bytes()[sep_at - 1] == b'<' {
                    return Err(ModelError::Syntax {
                        line: line_no,
                        column: sep_at,
                        message: String::from("`<=` found in an equality section"),
                    });
                }
                let lhs = &line[..sep_at];
                let rhs_text = &line[sep_at + separator.len()..];
                let mut row = Vec::new();
                let mut entry_offset = 0usize;
                for entry in lhs.split('|') {
                    let mut cursor = Cursor::new(entry, entry_offset + 1);
                    let poly =
                        scan_poly(&mut cursor).map_err(|(column, message)| ModelError::Syntax {
                            line: line_no,
                            column,
                            message,
                        })?;
                    if !cursor.rest_is_blank() {
                        return Err(ModelError::Syntax {
                            line: line_no,
                            column: cursor.column,
                            message: String::from("trailing input after polynomial"),
                        });
                    }
                    row.push(poly);
                    entry_offset += entry.chars().count() + 1;
                }
                let rhs_column = lhs.chars().count() + separator.len() + 1;
                let mut cursor = Cursor::new(rhs_text, rhs_column);
                cursor.skip_ws();
                let negative = if cursor.peek() == Some('-') {
                    cursor.bump();
                    cursor.skip_ws();
                    true
                } else {
                    false
                };
                let mut value =
                    scan_rational(&mut cursor).map_err(|(column, message)| ModelError::Syntax {
                        line: line_no,
                        column,
                        message,
                    })?;
                if negative {
                    value = -value;
                }
                if !cursor.rest_is_blank() {
                    return Err(ModelError::Syntax {
                        line: line_no,
                        column: cursor.column,
                        message: String::from("trailing input after right-hand side"),
                    });
                }
                if section == Section::Eq {
                    eq_rows.push(row);
                    eq_rhs.push(value);
                } else {
                    ineq_rows.push(row);
                    ineq_rhs.push(value);
                }
            }
        }
    }

    let widths: Vec<usize> = eq_rows
        .iter()
        .chain(ineq_rows.iter())
        .map(Vec::len)
        .collect();
    let Some(&q) = widths.first() else {
        return Err(ModelError::Structure(String::from(
            "model has no equality or inequality rows",
        )));
    };
    if widths.iter().any(|&w| w != q) {
        return Err(ModelError::Structure(String::from(
            "rows have differing variable counts",
        )));
    }
    if !names.is_empty() && names.len() != q {
        return Err(ModelError::Structure(alloc::format!(
            "[vars] lists {} names but rows have {q} entries",
            names.len()
        )));
    }

    let equality = if eq_rows.is_empty() {
        None
    } else {
        let matrix =
            PolyMatrix::from_rows(eq_rows).map_err(|e| ModelError::Structure(alloc::format!("{e}")))?;
        Some((matrix, Trajectory::constant(eq_rhs)))
    };
    let inequality = if ineq_rows.is_empty() {
        None
    } else {
        let matrix = PolyMatrix::from_rows(ineq_rows)
            .map_err(|e| ModelError::Structure(alloc::format!("{e}")))?;
        Some((matrix, Trajectory::constant(ineq_rhs)))
    };
    let names = (!names.is_empty()).then_some(names);
    BehavioralSystem::new(equality, inequality, names)
}

/// Renders a system in the `.bsys` grammar. `parse_model(serialize_model(s))`
/// reproduces `s` exactly.
pub fn serialize_model(sys: &BehavioralSystem) -> String {
    let mut out = String::new();
    out.push_str("[vars]\n");
    for i in 0..sys.q() {
        if i > 0 {
            out.push(' ');
        }
        out.push_str(&sys.var_name(i));
    }
    out.push('\n');
    let mut write_part = |tag: &str, part: &super::SystemPart, separator: &str| {
        out.push('\n');
        out.push_str(tag);
        out.push('\n');
        for row in 0..part.matrix.rows() {
            let line: Vec<String> = (0..part.matrix.cols())
                .map(|col| alloc::format!("{}", part.matrix.entry(row, col)))
                .collect();
            out.push_str(&line.join(" | "));
            out.push(' ');
            out.push_str(separator);
            out.push(' ');
            // Right-hand sides serialize through their constant value; the
            // file format carries constant levels only.
            let constant = match part.rhs.extension() {
                crate::trajectory::Extension::QuasiConstant(c) => c[row].clone(),
                _ => part.rhs.value_at(0)[row].clone(),
            };
            out.push_str(&alloc::format!("{constant}\n"));
        }
    };
    if let Some(part) = sys.equality() {
        write_part("[eq]", part, "=");
    }
    if let Some(part) = sys.inequality() {
        write_part("[ineq]", part, "<=");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn poly_grammar_round_trip() {
        for text in [
            "s^2 - s + 1",
            "1 - s^-1 - s^-2",
            "3*s^2 + 1/2",
            "-s + 2",
            "0",
            "5/3",
        ] {
            let poly = parse_poly(text).unwrap();
            let rendered = alloc::format!("{poly}");
            let reparsed = parse_poly(&rendered).unwrap();
            assert_eq!(poly, reparsed, "{text} -> {rendered}");
        }
        assert_eq!(parse_poly("2s").unwrap(), parse_poly("2*s").unwrap());
    }

    #[test]
    fn poly_grammar_errors() {
        // `s^` with nothing after the caret fails at that token.
        let err = parse_poly("s^").unwrap_err();
        assert_eq!(err.0, 3);
        assert!(parse_poly("1 +").is_err());
        assert!(parse_poly("x").is_err());
        assert!(parse_poly("1 2").is_err());
    }

    #[test]
    fn matrix_literal() {
        let m = parse_matrix("s^-1 + 1 | 1 ; 1 | s^-1").unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.cols(), 2);
        assert_eq!(*m.entry(0, 1), LaurentPoly::one());
        assert!(parse_matrix("1 | s ; 1").is_err());
    }

    #[test]
    fn model_round_trip() {
        let text = "\
# two coupled inequality rows
[vars]
w1 w2

[ineq]
s + 1 | 1 <= 15
1 | s <= 10
";
        let sys = parse_model(text).unwrap();
        assert_eq!(sys.q(), 2);
        assert!(sys.equality().is_none());
        let h = &sys.inequality().unwrap().matrix;
        assert_eq!(*h.entry(1, 1), LaurentPoly::monomial(1, rat(1)));
        let round = parse_model(&serialize_model(&sys)).unwrap();
        assert_eq!(sys, round);
    }

    #[test]
    fn model_mixed_sections_and_rationals() {
        let text = "\
[vars]
x u d
[eq]
s - 1 | -1 | 1 = 0
[ineq]
-1 | -1 | 1 <= -3/2
";
        let sys = parse_model(text).unwrap();
        assert_eq!(sys.q(), 3);
        let g = &sys.inequality().unwrap().rhs;
        assert_eq!(g.value_at(7), alloc::vec![ratio(-3, 2)]);
        let round = parse_model(&serialize_model(&sys)).unwrap();
        assert_eq!(sys, round);
    }

    #[test]
    fn model_single_equality_row_is_valid() {
        let sys = parse_model("[eq]\ns | 1 = 4\n").unwrap();
        assert!(sys.inequality().is_none());
        assert_eq!(sys.q(), 2);
        assert_eq!(sys.var_name(0), "w1");
    }

    #[test]
    fn model_errors_carry_position() {
        let err = parse_model("[ineq]\ns^ | 1 <= 2\n").unwrap_err();
        match err {
            ModelError::Syntax { line, column, .. } => {
                assert_eq!(line, 2);
                assert_eq!(column, 3);
            }
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(parse_model("w1 w2\n").is_err());
        assert!(parse_model("[vars]\na b\n[ineq]\n1 <= 0\n").is_err());
        assert!(parse_model("[eq]\n1 | s <= 3\n").is_err());
    }
}
