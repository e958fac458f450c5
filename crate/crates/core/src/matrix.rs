//! Dense matrices of Laurent polynomials.
//!
//! These are the matrix shift operators acting on trajectories. Dense storage
//! is deliberate; systems in scope have a handful of rows and columns.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::laurent::LaurentPoly;
use crate::rational::{rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MatrixError {
    #[error("shape mismatch in {op}: left is {left_rows}x{left_cols}, right is {right_rows}x{right_cols}")]
    ShapeMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("expected {expected} entries for a {rows}x{cols} matrix, got {got}")]
    BadCellCount {
        rows: usize,
        cols: usize,
        expected: usize,
        got: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![LaurentPoly::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.entry_mut(i, i) = LaurentPoly::one();
        }
        m
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: Vec<LaurentPoly>,
    ) -> Result<Self, MatrixError> {
        if entries.len() != rows * cols {
            return Err(MatrixError::BadCellCount {
                rows,
                cols,
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<LaurentPoly>>) -> Result<Self, MatrixError> {
        let row_count = rows.len();
        let col_count = rows.first().map_or(0, Vec::len);
        for row in &rows {
            if row.len() != col_count {
                return Err(MatrixError::BadCellCount {
                    rows: row_count,
                    cols: col_count,
                    expected: col_count,
                    got: row.len(),
                });
            }
        }
        Ok(Self {
            rows: row_count,
            cols: col_count,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Constant matrix, each entry a degree-zero polynomial.
    pub fn from_rational_rows(rows: Vec<Vec<Rational>>) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.into_iter()
                .map(|row| row.into_iter().map(LaurentPoly::constant).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, row: usize, col: usize) -> &LaurentPoly {
        &self.entries[row * self.cols + col]
    }

    pub fn entry_mut(&mut self, row: usize, col: usize) -> &mut LaurentPoly {
        &mut self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[LaurentPoly] {
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(LaurentPoly::is_zero)
    }

    pub fn mul(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.rows {
            return Err(MatrixError::ShapeMismatch {
                op: "mul",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut result = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = LaurentPoly::zero();
                for k in 0..self.cols {
                    acc = &acc + &(self.entry(i, k) * other.entry(k, j));
                }
                *result.entry_mut(i, j) = acc;
            }
        }
        Ok(result)
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut result = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *result.entry_mut(j, i) = self.entry(i, j).clone();
            }
        }
        result
    }

    /// Adjoint operator: transpose with every degree negated, so that
    /// `<M w, y> = <w, adjoint(M) y>` for finitely supported trajectories.
    pub fn adjoint(&self) -> Self {
        let mut result = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *result.entry_mut(j, i) = self.entry(i, j).adjoint();
            }
        }
        result
    }

    pub fn hstack(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.rows != other.rows {
            return Err(MatrixError::ShapeMismatch {
                op: "hstack",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = self.row(i).to_vec();
            row.extend_from_slice(other.row(i));
            rows.push(row);
        }
        Self::from_rows(rows)
    }

    pub fn vstack(&self, other: &Self) -> Result<Self, MatrixError> {
        if self.cols != other.cols {
            return Err(MatrixError::ShapeMismatch {
                op: "vstack",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Self::from_entries(self.rows + other.rows, self.cols, entries)
    }

    /// Smallest and largest degree over all entries; `None` for a zero matrix.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let mut range: Option<(i64, i64)> = None;
        for entry in &self.entries {
            if let (Some(lo), Some(hi)) = (entry.min_degree(), entry.max_degree()) {
                range = Some(match range {
                    None => (lo, hi),
                    Some((a, b)) => (a.min(lo), b.max(hi)),
                });
            }
        }
        range
    }

    /// Constant matrix obtained by substituting `s = 1` in every entry.
    pub fn eval_one(&self) -> Vec<Vec<Rational>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.entry(i, j).eval_one()).collect())
            .collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for col in 0..self.cols {
            self.entries.swap(a * self.cols + col, b * self.cols + col);
        }
    }

    pub fn scale_row(&mut self, row: usize, factor: &LaurentPoly) {
        for col in 0..self.cols {
            let cell = self.entry_mut(row, col);
            *cell = &*cell * factor;
        }
    }

    /// `row[target] -= factor * row[source]`.
    pub fn sub_scaled_row(&mut self, target: usize, source: usize, factor: &LaurentPoly) {
        for col in 0..self.cols {
            let delta = self.entry(source, col) * factor;
            let cell = self.entry_mut(target, col);
            *cell = &*cell - &delta;
        }
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[ ")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " | ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

/// Sum of entrywise values at `s = 1`; handy for building constant data.
pub fn constant_action(matrix: &[Vec<Rational>], vector: &[Rational]) -> Vec<Rational> {
    matrix
        .iter()
        .map(|row| {
            row.iter()
                .zip(vector)
                .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

pub fn onehot(dim: usize, index: usize) -> Vec<Rational> {
    let mut v = vec![rat(0); dim];
    v[index] = rat(1);
    v
}
