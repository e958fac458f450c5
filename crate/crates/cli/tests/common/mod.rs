//! Shared support for the acceptance suite: a deterministic generator of
//! small random systems and a brute-force feasibility oracle that shares no
//! code with the decision procedure.

use bsys_core::{
    rat, verify_witness, BehavioralSystem, LaurentPoly, PolyMatrix, Rational, Trajectory,
};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

/// SplitMix64: tiny, seedable, reproducible across platforms.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed)
    }

    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform in `lo..=hi`.
    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        let span = (hi - lo + 1) as u64;
        lo + (self.next() % span) as i64
    }
}

/// A random system with q <= 2 variables, at most three rows total, degrees
/// in [-1, 1], and small integer data.
pub fn random_system(rng: &mut Rng) -> BehavioralSystem {
    let q = rng.int(1, 2) as usize;
    let eq_rows = rng.int(0, 1) as usize;
    let ineq_rows = rng.int(1, 3 - eq_rows as i64) as usize;
    let mut poly = |rng: &mut Rng| {
        LaurentPoly::from_terms((-1..=1).filter_map(|degree| {
            let coeff = rng.int(-2, 2);
            (coeff != 0 && rng.int(0, 1) == 1).then(|| (degree, rat(coeff)))
        }))
    };
    let matrix = |rng: &mut Rng, rows: usize, poly: &mut dyn FnMut(&mut Rng) -> LaurentPoly| {
        PolyMatrix::from_rows(
            (0..rows)
                .map(|_| (0..q).map(|_| poly(rng)).collect())
                .collect(),
        )
        .unwrap()
    };
    let level = |rng: &mut Rng, rows: usize| {
        Trajectory::constant((0..rows).map(|_| rat(rng.int(-3, 3))).collect())
    };
    let equality = (eq_rows > 0).then(|| {
        let m = matrix(rng, eq_rows, &mut poly);
        let d = level(rng, eq_rows);
        (m, d)
    });
    let inequality = {
        let m = matrix(rng, ineq_rows, &mut poly);
        let g = level(rng, ineq_rows);
        Some((m, g))
    };
    BehavioralSystem::new(equality, inequality, None).unwrap()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleAnswer {
    /// A small-integer constant witness satisfies the system.
    Feasible,
    /// The time-unrolled relaxation over the window is already contradictory.
    Infeasible,
    Inconclusive,
}

pub fn oracle(sys: &BehavioralSystem, window: i64) -> OracleAnswer {
    if grid_witness(sys).is_some() {
        return OracleAnswer::Feasible;
    }
    match window_relaxation_infeasible(sys, window) {
        Some(true) => OracleAnswer::Infeasible,
        _ => OracleAnswer::Inconclusive,
    }
}

/// Exhaustive constant witnesses with integer entries in [-3, 3].
pub fn grid_witness(sys: &BehavioralSystem) -> Option<Trajectory> {
    let q = sys.q();
    let mut assignment = vec![-3i64; q];
    loop {
        let candidate = Trajectory::constant(assignment.iter().map(|&v| rat(v)).collect());
        if verify_witness(sys, &candidate) {
            return Some(candidate);
        }
        let mut position = 0;
        loop {
            if position == q {
                return None;
            }
            assignment[position] += 1;
            if assignment[position] <= 3 {
                break;
            }
            assignment[position] = -3;
            position += 1;
        }
    }
}

/// Fourier-Motzkin elimination over the system unrolled at time indices
/// `[-window, window]`, with every shifted read a free variable (no
/// extension assumed). Infeasibility of this relaxation implies the full
/// system has no solution of any kind. Returns `None` when the row count
/// blows past the cap.
pub fn window_relaxation_infeasible(sys: &BehavioralSystem, window: i64) -> Option<bool> {
    const ROW_CAP: usize = 20_000;
    let q = sys.q();
    let mut min_deg = 0i64;
    let mut max_deg = 0i64;
    for part in [sys.equality(), sys.inequality()].into_iter().flatten() {
        if let Some((lo, hi)) = part.matrix.degree_range() {
            min_deg = min_deg.min(lo);
            max_deg = max_deg.max(hi);
        }
    }
    let t_lo = -window + min_deg;
    let t_hi = window + max_deg;
    let times = (t_hi - t_lo + 1) as usize;
    let num_vars = q * times;
    let var = |col: usize, t: i64| col * times + (t - t_lo) as usize;

    let mut equalities: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let mut inequalities: Vec<(Vec<Rational>, Rational)> = Vec::new();
    let instantiate = |matrix: &PolyMatrix, rhs: &Trajectory, rows: &mut Vec<(Vec<Rational>, Rational)>| {
        for row in 0..matrix.rows() {
            for k in -window..=window {
                let mut coeffs = vec![Rational::zero(); num_vars];
                for col in 0..q {
                    for (degree, coeff) in matrix.entry(row, col).terms() {
                        coeffs[var(col, k + degree)] += coeff;
                    }
                }
                rows.push((coeffs, rhs.value_at(k)[row].clone()));
            }
        }
    };
    if let Some(part) = sys.equality() {
        instantiate(&part.matrix, &part.rhs, &mut equalities);
    }
    if let Some(part) = sys.inequality() {
        instantiate(&part.matrix, &part.rhs, &mut inequalities);
    }

    // Gaussian elimination of the equality rows.
    while let Some(position) = equalities
        .iter()
        .position(|(coeffs, _)| coeffs.iter().any(|c| !c.is_zero()))
    {
        let (coeffs, rhs) = equalities.swap_remove(position);
        let pivot = coeffs.iter().position(|c| !c.is_zero()).unwrap();
        let pivot_coeff = coeffs[pivot].clone();
        let substitute = |row: &mut (Vec<Rational>, Rational)| {
            let factor = &row.0[pivot] / &pivot_coeff;
            if factor.is_zero() {
                return;
            }
            for (cell, source) in row.0.iter_mut().zip(&coeffs) {
                *cell = &*cell - &(&factor * source);
            }
            row.1 = &row.1 - &(&factor * &rhs);
        };
        equalities.iter_mut().for_each(substitute);
        inequalities.iter_mut().for_each(substitute);
    }
    for (_, rhs) in &equalities {
        if !rhs.is_zero() {
            return Some(true);
        }
    }

    // Fourier-Motzkin on what remains.
    let normalize = |mut row: (Vec<Rational>, Rational)| {
        if let Some(first) = row.0.iter().find(|c| !c.is_zero()) {
            let scale = first.abs();
            for cell in &mut row.0 {
                *cell = &*cell / &scale;
            }
            row.1 = &row.1 / &scale;
        }
        row
    };
    let mut rows: BTreeSet<(Vec<Rational>, Rational)> =
        inequalities.into_iter().map(normalize).collect();
    for v in 0..num_vars {
        let mut positive = Vec::new();
        let mut negative = Vec::new();
        let mut untouched = BTreeSet::new();
        for row in rows {
            if row.0[v].is_positive() {
                positive.push(row);
            } else if row.0[v].is_negative() {
                negative.push(row);
            } else {
                untouched.insert(row);
            }
        }
        let mut next = untouched;
        for (p_coeffs, p_rhs) in &positive {
            for (n_coeffs, n_rhs) in &negative {
                let a_p = &p_coeffs[v];
                let a_n = &n_coeffs[v];
                // a_p * (negative row) - a_n * (positive row): a nonnegative
                // combination with the pivot variable cancelled.
                let coeffs: Vec<Rational> = p_coeffs
                    .iter()
                    .zip(n_coeffs)
                    .map(|(pc, nc)| a_p * nc - a_n * pc)
                    .collect();
                let rhs = a_p * n_rhs - a_n * p_rhs;
                if coeffs.iter().all(Zero::is_zero) {
                    if rhs.is_negative() {
                        return Some(true);
                    }
                    continue;
                }
                next.insert(normalize((coeffs, rhs)));
                if next.len() > ROW_CAP {
                    return None;
                }
            }
        }
        rows = next;
    }
    for (coeffs, rhs) in &rows {
        debug_assert!(coeffs.iter().all(Zero::is_zero));
        if rhs.is_negative() {
            return Some(true);
        }
    }
    Some(false)
}

#[cfg(test)]
mod sanity {
    use super::*;
    use bsys_core::parse_model;

    #[test]
    fn oracle_flags_obvious_contradiction() {
        let sys = parse_model("[ineq]\n1 <= -1\n-1 <= 0\n").unwrap();
        assert_eq!(oracle(&sys, 3), OracleAnswer::Infeasible);
    }

    #[test]
    fn oracle_accepts_trivial_system() {
        let sys = parse_model("[ineq]\n1 <= 1\n").unwrap();
        assert_eq!(oracle(&sys, 3), OracleAnswer::Feasible);
    }
}
