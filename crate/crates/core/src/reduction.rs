//! Unimodular row reduction of Laurent polynomial matrices.
//!
//! `reduce` brings a matrix to staircase upper-triangular form `T = U M`
//! where `U` is unimodular (its determinant is a unit `c * s^k`), so the row
//! module — and hence the solution set of the corresponding system — is
//! preserved. The elimination measure is the degree span: within a column the
//! entry with the smallest span divides the others, and each division step
//! strictly shrinks the span multiset, which gives termination.
//!
//! Pivots are normalized to minimum degree zero with trailing coefficient
//! one. That is enough canonicality for reproducible tests; full Hermite or
//! Popov form is out of scope.


use alloc::vec::Vec;

use crate::laurent::LaurentPoly;
use crate::matrix::{MatrixError, PolyMatrix};

#[derive(Clone, Debug)]
pub struct ReducedForm {
    /// Unimodular multiplier with `u * original = t`.
    pub u: PolyMatrix,
    /// Staircase upper-triangular result.
    pub t: PolyMatrix,
    pub rank: usize,
    /// Strictly increasing pivot column indices, one per nonzero row of `t`.
    pub pivot_cols: Vec<usize>,
}

pub fn reduce(m: &PolyMatrix) -> ReducedForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut t = m.clone();
    let mut u = PolyMatrix::identity(rows);
    let mut pivot_row = 0usize;
    let mut pivot_cols = Vec::new();

    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        loop {
            let nonzero: Vec<usize> = (pivot_row..rows)
                .filter(|&r| !t.entry(r, col).is_zero())
                .collect();
            match nonzero.len() {
                0 => break,
                1 => {
                    let r = nonzero[0];
                    t.swap_rows(pivot_row, r);
                    u.swap_rows(pivot_row, r);
                    let pivot = t.entry(pivot_row, col);
                    let min_deg = pivot.min_degree().unwrap();
                    let trailing = pivot.coeff(min_deg);
                    let unit = LaurentPoly::monomial(-min_deg, trailing.recip());
                    t.scale_row(pivot_row, &unit);
                    u.scale_row(pivot_row, &unit);
                    pivot_cols.push(col);
                    pivot_row += 1;
                    break;
                }
                _ => {
                    let smallest = *nonzero
                        .iter()
                        .min_by_key(|&&r| (t.entry(r, col).degree_span().unwrap(), r))
                        .unwrap();
                    for &r in &nonzero {
                        if r == smallest {
                            continue;
                        }
                        let (quotient, _) = t
                            .entry(r, col)
                            .div_rem(t.entry(smallest, col))
                            .expect("pivot candidate is nonzero");
                        t.sub_scaled_row(r, smallest, &quotient);
                        u.sub_scaled_row(r, smallest, &quotient);
                    }
                }
            }
        }
    }

    ReducedForm { u, t, rank: pivot_row, pivot_cols }
}

/// Exact determinant by cofactor expansion along the first row. Matrices in
/// scope stay small, so the factorial cost is immaterial.
pub fn det(m: &PolyMatrix) -> Result<LaurentPoly, MatrixError> {
    if m.rows() != m.cols() {
        return Err(MatrixError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(det_unchecked(m))
}

fn det_unchecked(m: &PolyMatrix) -> LaurentPoly {
    let n = m.rows();
    if n == 0 {
        return LaurentPoly::one();
    }
    if n == 1 {
        return m.entry(0, 0).clone();
    }
    let mut sum = LaurentPoly::zero();
    for col in 0..n {
        let cofactor = m.entry(0, col);
        if cofactor.is_zero() {
            continue;
        }
        let minor = minor_matrix(m, 0, col);
        let mut term = cofactor * &det_unchecked(&minor);
        if col % 2 == 1 {
            term = -&term;
        }
        sum = &sum + &term;
    }
    sum
}

fn minor_matrix(m: &PolyMatrix, skip_row: usize, skip_col: usize) -> PolyMatrix {
    let n = m.rows();
    let rows: Vec<Vec<LaurentPoly>> = (0..n)
        .filter(|&r| r != skip_row)
        .map(|r| {
            (0..n)
                .filter(|&c| c != skip_col)
                .map(|c| m.entry(r, c).clone())
                .collect()
        })
        .collect();
    PolyMatrix::from_rows(rows).expect("minor rows are rectangular")
}

/// Number of freely choosable finitely supported kernel coordinates of `m`
/// as an operator: `cols - rank`.
pub fn kernel_rank_deficit(m: &PolyMatrix) -> usize {
    m.cols() - reduce(m).rank
}

/// Inverse of a unimodular matrix via the adjugate divided by the unit
/// determinant. Returns `None` when the determinant is not a unit.
pub fn unimodular_inverse(m: &PolyMatrix) -> Option<PolyMatrix> {
    let n = m.rows();
    if n != m.cols() {
        return None;
    }
    let determinant = det_unchecked(m);
    let det_inv = determinant.unit_inverse()?;
    let mut inverse = PolyMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut cofactor = det_unchecked(&minor_matrix(m, j, i));
            if (i + j) % 2 == 1 {
                cofactor = -&cofactor;
            }
            *inverse.entry_mut(i, j) = &cofactor * &det_inv;
        }
    }
    Some(inverse)
}

/// Expresses every row of `target` as a Laurent-ring combination of the rows
/// of a staircase matrix, returning `w` with `target = w * staircase`. Fails
/// when some row lies outside the row module. Two staircase forms of the same
/// matrix certify row equivalence through such a `w` with unit determinant.
pub fn express_rows(
    target: &PolyMatrix,
    staircase: &PolyMatrix,
    pivot_cols: &[usize],
) -> Option<PolyMatrix> {
    if target.cols() != staircase.cols() {
        return None;
    }
    let mut w = PolyMatrix::zero(target.rows(), staircase.rows());
    for row in 0..target.rows() {
        let mut residual: Vec<LaurentPoly> = target.row(row).to_vec();
        for (pivot_index, &pivot_col) in pivot_cols.iter().enumerate() {
            if residual[pivot_col].is_zero() {
                continue;
            }
            let coefficient =
                residual[pivot_col].exact_div(staircase.entry(pivot_index, pivot_col))?;
            for (col, cell) in residual.iter_mut().enumerate() {
                let delta = &coefficient * staircase.entry(pivot_index, col);
                *cell = &*cell - &delta;
            }
            *w.entry_mut(row, pivot_index) = coefficient;
        }
        if residual.iter().any(|p| !p.is_zero()) {
            return None;
        }
    }
    Some(w)
}

/// Staircase shape check used by tests: pivots strictly move right and
/// everything below or left of each pivot is zero.
pub fn is_staircase(form: &ReducedForm) -> bool {
    let t = &form.t;
    if form.pivot_cols.len() != form.rank {
        return false;
    }
    if !form.pivot_cols.windows(2).all(|w| w[0] < w[1]) {
        return false;
    }
    for (row, &col) in form.pivot_cols.iter().enumerate() {
        if t.entry(row, col).is_zero() {
            return false;
        }
        for earlier in 0..col {
            if !t.entry(row, earlier).is_zero() {
                return false;
            }
        }
    }
    for row in form.rank..t.rows() {
        if (0..t.cols()).any(|c| !t.entry(row, c).is_zero()) {
            return false;
        }
    }
    true
}
