//! Exact rational linear programming.
//!
//! A dense two-phase simplex over arbitrary-precision rationals. Variables
//! are nonnegative; callers split free variables into differences themselves.
//! Pivoting uses the least-index rule in both the entering and the leaving
//! choice, which rules out cycling without any perturbation — exact
//! arithmetic makes degeneracy harmless otherwise. Problems in scope are a
//! few hundred variables at most, so no factorization or sparsity is needed.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpRelation {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpSense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug)]
pub struct LpConstraint {
    pub coeffs: Vec<Rational>,
    pub relation: LpRelation,
    pub rhs: Rational,
}

/// `optimize sense c^T x  subject to  A x (rel) b, x >= 0`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub sense: LpSense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<LpConstraint>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { point: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// One row per constraint; the last column is the right-hand side.
    rows: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs for the active objective; last cell tracks -value.
    reduced: Vec<Rational>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.reduced.len() - 1
    }

    fn pivot(&mut self, pivot_row: usize, pivot_col: usize) {
        let factor = self.rows[pivot_row][pivot_col].clone();
        debug_assert!(!factor.is_zero());
        for cell in &mut self.rows[pivot_row] {
            *cell = &*cell / &factor;
        }
        let pivot_cells = self.rows[pivot_row].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == pivot_row || row[pivot_col].is_zero() {
                continue;
            }
            let scale = row[pivot_col].clone();
            for (cell, pivot_cell) in row.iter_mut().zip(&pivot_cells) {
                *cell = &*cell - &(&scale * pivot_cell);
            }
        }
        if !self.reduced[pivot_col].is_zero() {
            let scale = self.reduced[pivot_col].clone();
            for (cell, pivot_cell) in self.reduced.iter_mut().zip(&pivot_cells) {
                *cell = &*cell - &(&scale * pivot_cell);
            }
        }
        self.basis[pivot_row] = pivot_col;
    }

    /// Least-index simplex iteration for the current reduced-cost row.
    /// Columns at or past `forbidden_from` never enter.
    fn optimize(&mut self, forbidden_from: usize) -> Result<(), ()> {
        loop {
            let width = self.width();
            let entering = (0..width.min(forbidden_from))
                .find(|&j| self.reduced[j].is_negative());
            let Some(entering) = entering else {
                return Ok(());
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[entering].is_positive() {
                    continue;
                }
                let ratio = &row[self.width()] / &row[entering];
                let better = match &leaving {
                    None => true,
                    Some((current, best)) => {
                        ratio < *best
                            || (ratio == *best && self.basis[i] < self.basis[*current])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            let Some((leaving, _)) = leaving else {
                return Err(());
            };
            self.pivot(leaving, entering);
        }
    }

    /// Installs reduced costs for the cost vector `c` (over all columns),
    /// eliminating the basic columns.
    fn set_costs(&mut self, costs: &[Rational]) {
        self.reduced = costs.to_vec();
        self.reduced.push(Rational::zero());
        for (i, &basic) in self.basis.iter().enumerate() {
            if costs[basic].is_zero() {
                continue;
            }
            let scale = costs[basic].clone();
            let row = self.rows[i].clone();
            for (cell, row_cell) in self.reduced.iter_mut().zip(&row) {
                *cell = &*cell - &(&scale * row_cell);
            }
        }
    }
}

impl LinearProgram {
    pub fn feasibility(num_vars: usize, constraints: Vec<LpConstraint>) -> Self {
        Self {
            num_vars,
            sense: LpSense::Minimize,
            objective: vec![Rational::zero(); num_vars],
            constraints,
        }
    }

    pub fn solve(&self) -> LpOutcome {
        assert_eq!(self.objective.len(), self.num_vars, "objective length");
        for c in &self.constraints {
            assert_eq!(c.coeffs.len(), self.num_vars, "constraint width");
        }
        let n = self.num_vars;
        let m = self.constraints.len();

        // Orient rows to a nonnegative right-hand side.
        let mut oriented: Vec<(Vec<Rational>, LpRelation, Rational)> = Vec::with_capacity(m);
        for c in &self.constraints {
            if c.rhs.is_negative() {
                let coeffs = c.coeffs.iter().map(|v| -v.clone()).collect();
                let relation = match c.relation {
                    LpRelation::Le => LpRelation::Ge,
                    LpRelation::Ge => LpRelation::Le,
                    LpRelation::Eq => LpRelation::Eq,
                };
                oriented.push((coeffs, relation, -c.rhs.clone()));
            } else {
                oriented.push((c.coeffs.clone(), c.relation, c.rhs.clone()));
            }
        }

        let slack_count = oriented
            .iter()
            .filter(|(_, rel, _)| !matches!(rel, LpRelation::Eq))
            .count();
        let artificial_count = oriented
            .iter()
            .filter(|(_, rel, _)| !matches!(rel, LpRelation::Le))
            .count();
        let artificial_start = n + slack_count;
        let width = artificial_start + artificial_count;

        let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_slack = n;
        let mut next_artificial = artificial_start;
        for (coeffs, relation, rhs) in &oriented {
            let mut row = vec![Rational::zero(); width + 1];
            row[..n].clone_from_slice(coeffs);
            row[width] = rhs.clone();
            match relation {
                LpRelation::Le => {
                    row[next_slack] = Rational::from_integer(1.into());
                    basis.push(next_slack);
                    next_slack += 1;
                }
                LpRelation::Ge => {
                    row[next_slack] = Rational::from_integer((-1).into());
                    next_slack += 1;
                    row[next_artificial] = Rational::from_integer(1.into());
                    basis.push(next_artificial);
                    next_artificial += 1;
                }
                LpRelation::Eq => {
                    row[next_artificial] = Rational::from_integer(1.into());
                    basis.push(next_artificial);
                    next_artificial += 1;
                }
            }
            rows.push(row);
        }

        let mut tableau = Tableau {
            rows,
            basis,
            reduced: vec![Rational::zero(); width + 1],
        };

        if artificial_count > 0 {
            let mut phase1 = vec![Rational::zero(); width];
            for cost in phase1.iter_mut().skip(artificial_start) {
                *cost = Rational::from_integer(1.into());
            }
            tableau.set_costs(&phase1);
            tableau
                .optimize(artificial_start)
                .expect("phase one is bounded below by zero");
            let infeasibility: Rational = tableau
                .basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b >= artificial_start)
                .map(|(i, _)| tableau.rows[i][width].clone())
                .fold(Rational::zero(), |acc, v| acc + v);
            if !infeasibility.is_zero() {
                return LpOutcome::Infeasible;
            }
            // Pivot lingering artificials out; drop rows that became redundant.
            let mut row_index = 0;
            while row_index < tableau.rows.len() {
                if tableau.basis[row_index] < artificial_start {
                    row_index += 1;
                    continue;
                }
                let column = (0..artificial_start)
                    .find(|&j| !tableau.rows[row_index][j].is_zero());
                match column {
                    Some(j) => {
                        tableau.pivot(row_index, j);
                        row_index += 1;
                    }
                    None => {
                        tableau.rows.remove(row_index);
                        tableau.basis.remove(row_index);
                    }
                }
            }
        }

        let mut phase2 = vec![Rational::zero(); width];
        for (j, cost) in self.objective.iter().enumerate() {
            phase2[j] = match self.sense {
                LpSense::Minimize => cost.clone(),
                LpSense::Maximize => -cost.clone(),
            };
        }
        tableau.set_costs(&phase2);
        if tableau.optimize(artificial_start).is_err() {
            return LpOutcome::Unbounded;
        }

        let mut point = vec![Rational::zero(); n];
        for (i, &basic) in tableau.basis.iter().enumerate() {
            if basic < n {
                point[basic] = tableau.rows[i][width].clone();
            }
        }
        let value = self
            .objective
            .iter()
            .zip(&point)
            .fold(Rational::zero(), |acc, (c, x)| acc + c * x);
        LpOutcome::Optimal { point, value }
    }
}
