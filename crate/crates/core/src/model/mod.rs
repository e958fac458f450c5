//! The behavioral-system data model.
//!
//! A [`BehavioralSystem`] couples an equality part `R w = d` with an
//! inequality part `H w <= g` over a shared variable vector of dimension `q`.
//! Right-hand sides are quasi-constant trajectories: a constant level plus an
//! optional finite perturbation window, which covers every system in scope
//! and keeps all comparisons exact.

pub(crate) mod builders;
mod text;

pub use builders::{inventory_model, lti_to_behavior, ConstraintTarget, LtiSystem, PolytopicConstraint};
pub use text::{parse_matrix, parse_model, parse_poly, serialize_model};

use alloc::string::String;
use alloc::vec::Vec;

use crate::matrix::PolyMatrix;
use crate::rational::Rational;
use crate::trajectory::{Extension, Trajectory};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Structure(String),
}

fn structure_error(message: String) -> ModelError {
    ModelError::Structure(message)
}

/// One side of a system: a matrix shift operator and its right-hand side.
#[derive(Clone, Debug, PartialEq)]
pub struct SystemPart {
    pub matrix: PolyMatrix,
    pub rhs: Trajectory,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BehavioralSystem {
    q: usize,
    equality: Option<SystemPart>,
    inequality: Option<SystemPart>,
    variable_names: Option<Vec<String>>,
}

impl BehavioralSystem {
    pub fn new(
        equality: Option<(PolyMatrix, Trajectory)>,
        inequality: Option<(PolyMatrix, Trajectory)>,
        variable_names: Option<Vec<String>>,
    ) -> Result<Self, ModelError> {
        let q = match (&equality, &inequality) {
            (Some((r, _)), _) => r.cols(),
            (_, Some((h, _))) => h.cols(),
            (None, None) => {
                return Err(structure_error(String::from(
                    "a system needs an equality block, an inequality block, or both",
                )))
            }
        };
        let check_part = |name: &str, matrix: &PolyMatrix, rhs: &Trajectory| {
            if matrix.cols() != q {
                return Err(structure_error(alloc::format!(
                    "{name} block has {} columns, expected {q}",
                    matrix.cols()
                )));
            }
            if rhs.dim() != matrix.rows() {
                return Err(structure_error(alloc::format!(
                    "{name} right-hand side has dimension {}, expected {} rows",
                    rhs.dim(),
                    matrix.rows()
                )));
            }
            if !matches!(rhs.extension(), Extension::QuasiConstant(_)) {
                return Err(structure_error(alloc::format!(
                    "{name} right-hand side must be quasi-constant"
                )));
            }
            Ok(())
        };
        if let Some((matrix, rhs)) = &equality {
            check_part("equality", matrix, rhs)?;
        }
        if let Some((matrix, rhs)) = &inequality {
            check_part("inequality", matrix, rhs)?;
        }
        if let Some(names) = &variable_names {
            if names.len() != q {
                return Err(structure_error(alloc::format!(
                    "{} variable names given for {q} variables",
                    names.len()
                )));
            }
        }
        Ok(Self {
            q,
            equality: equality.map(|(matrix, rhs)| SystemPart { matrix, rhs }),
            inequality: inequality.map(|(matrix, rhs)| SystemPart { matrix, rhs }),
            variable_names,
        })
    }

    pub fn inequality_only(
        h: PolyMatrix,
        g: Trajectory,
        names: Option<Vec<String>>,
    ) -> Result<Self, ModelError> {
        Self::new(None, Some((h, g)), names)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn equality(&self) -> Option<&SystemPart> {
        self.equality.as_ref()
    }

    pub fn inequality(&self) -> Option<&SystemPart> {
        self.inequality.as_ref()
    }

    pub fn variable_names(&self) -> Option<&[String]> {
        self.variable_names.as_deref()
    }

    pub fn var_name(&self, index: usize) -> String {
        match &self.variable_names {
            Some(names) => names[index].clone(),
            None => alloc::format!("w{}", index + 1),
        }
    }

    /// Folds the equality part into inequalities: `R w = d` becomes the pair
    /// `R w <= d`, `-R w <= -d`, stacked above `H w <= g`. The result has the
    /// same solution set as the mixed system.
    pub fn augment_mixed(&self) -> (PolyMatrix, Trajectory) {
        match (&self.equality, &self.inequality) {
            (Some(eq), Some(ineq)) => {
                let stacked = eq
                    .matrix
                    .vstack(&eq.matrix.neg())
                    .and_then(|m| m.vstack(&ineq.matrix))
                    .expect("parts share the variable dimension");
                let rhs = Trajectory::stack(&[&eq.rhs, &eq.rhs.neg(), &ineq.rhs])
                    .expect("right-hand sides are quasi-constant");
                (stacked, rhs)
            }
            (Some(eq), None) => {
                let stacked = eq
                    .matrix
                    .vstack(&eq.matrix.neg())
                    .expect("a matrix stacks with its negation");
                let rhs = Trajectory::stack(&[&eq.rhs, &eq.rhs.neg()])
                    .expect("right-hand sides are quasi-constant");
                (stacked, rhs)
            }
            (None, Some(ineq)) => (ineq.matrix.clone(), ineq.rhs.clone()),
            (None, None) => unreachable!("constructor requires at least one part"),
        }
    }
}

/// Adjoins one slack column per inequality row: `[H  I]`, so that
/// `H w <= g` iff there is `s >= 0` with `H w + s = g`.
pub fn augment_slack(h: &PolyMatrix, g: &Trajectory) -> (PolyMatrix, Trajectory) {
    let augmented = h
        .hstack(&PolyMatrix::identity(h.rows()))
        .expect("identity block matches the row count");
    (augmented, g.clone())
}

/// Linear cost of one trajectory component against per-instant weights:
/// `sum_k c(k) * w(k)[component]` over the trajectory's window. The weight
/// trajectory must cover that window.
pub fn linear_cost(
    trajectory: &Trajectory,
    weights: &Trajectory,
    component: usize,
) -> Result<Rational, ModelError> {
    if component >= trajectory.dim() {
        return Err(structure_error(alloc::format!(
            "component {component} out of range for dimension {}",
            trajectory.dim()
        )));
    }
    if weights.dim() != 1 {
        return Err(structure_error(String::from(
            "cost weights must be a one-dimensional trajectory",
        )));
    }
    let (lo, hi) = trajectory.window();
    let (wlo, whi) = weights.window();
    let covered = matches!(weights.extension(), Extension::QuasiConstant(_))
        || matches!(weights.extension(), Extension::Periodic)
        || (wlo <= lo && whi >= hi);
    if !covered {
        return Err(structure_error(alloc::format!(
            "cost weights cover [{wlo}, {whi}] but the trajectory runs over [{lo}, {hi}]"
        )));
    }
    let mut total = Rational::from_integer(0.into());
    for k in lo..=hi {
        total += &weights.value_at(k)[0] * &trajectory.value_at(k)[component];
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::LaurentPoly;
    use crate::rational::rat;
    use crate::trajectory::{satisfies, Relation};
    use alloc::vec;

    fn p(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(d, c)| (d, rat(c))))
    }

    #[test]
    fn augment_mixed_stacks_blocks() {
        let sys = builders::tests::safety_lti_fixture();
        let (h_prime, g_prime) = sys.augment_mixed();
        assert_eq!(h_prime.rows(), 10);
        assert_eq!(h_prime.cols(), 3);
        let expected = Trajectory::constant(vec![
            rat(0),
            rat(0),
            rat(0),
            rat(0),
            rat(5),
            rat(-1),
            rat(5),
            rat(5),
            rat(1),
            rat(1),
        ]);
        assert_eq!(g_prime, expected);
        // First block is R, second -R, third H.
        assert_eq!(
            h_prime.entry(0, 0),
            sys.equality().unwrap().matrix.entry(0, 0)
        );
        assert_eq!(
            *h_prime.entry(2, 0),
            -sys.equality().unwrap().matrix.entry(0, 0)
        );
    }

    #[test]
    fn augment_mixed_passthrough_cases() {
        let h = PolyMatrix::from_rows(vec![vec![p(&[(0, 1)])]]).unwrap();
        let g = Trajectory::constant(vec![rat(4)]);
        let sys = BehavioralSystem::inequality_only(h.clone(), g.clone(), None).unwrap();
        let (h_prime, g_prime) = sys.augment_mixed();
        assert_eq!(h_prime, h);
        assert_eq!(g_prime, g);

        let r = PolyMatrix::from_rows(vec![vec![p(&[(1, 1), (0, -1)])]]).unwrap();
        let zero = Trajectory::constant(vec![rat(0)]);
        let sys = BehavioralSystem::new(Some((r.clone(), zero.clone())), None, None).unwrap();
        let (h_prime, g_prime) = sys.augment_mixed();
        assert_eq!(h_prime.rows(), 2);
        assert_eq!(h_prime.entry(0, 0), r.entry(0, 0));
        assert_eq!(*h_prime.entry(1, 0), -r.entry(0, 0));
        assert!(g_prime.is_zero());
    }

    #[test]
    fn augment_mixed_preserves_membership() {
        let sys = builders::tests::safety_lti_fixture();
        let (h_prime, g_prime) = sys.augment_mixed();
        let eq = sys.equality().unwrap();
        let ineq = sys.inequality().unwrap();
        for w in [
            Trajectory::finite(0, vec![vec![rat(1), rat(0), rat(1)]]).unwrap(),
            Trajectory::zero(3),
            Trajectory::finite(-1, vec![vec![rat(2), rat(1), rat(0)], vec![rat(4), rat(3), rat(1)]])
                .unwrap(),
        ] {
            let direct = satisfies(&eq.matrix, &w, &eq.rhs, Relation::Eq).unwrap()
                && satisfies(&ineq.matrix, &w, &ineq.rhs, Relation::Le).unwrap();
            let folded = satisfies(&h_prime, &w, &g_prime, Relation::Le).unwrap();
            assert_eq!(direct, folded);
        }
    }

    #[test]
    fn augment_slack_shapes() {
        // [[s+1, 1], [1, s]] gains a 2x2 identity block.
        let h = PolyMatrix::from_rows(vec![
            vec![p(&[(1, 1), (0, 1)]), p(&[(0, 1)])],
            vec![p(&[(0, 1)]), p(&[(1, 1)])],
        ])
        .unwrap();
        let g = Trajectory::constant(vec![rat(15), rat(10)]);
        let (h_s, g_back) = augment_slack(&h, &g);
        assert_eq!(h_s.rows(), 2);
        assert_eq!(h_s.cols(), 4);
        assert_eq!(*h_s.entry(0, 2), LaurentPoly::one());
        assert!(h_s.entry(0, 3).is_zero());
        assert_eq!(*h_s.entry(1, 3), LaurentPoly::one());
        assert_eq!(g_back, g);

        let scalar = PolyMatrix::from_rows(vec![vec![p(&[(0, 1)])]]).unwrap();
        let (h_s, _) = augment_slack(&scalar, &Trajectory::constant(vec![rat(5)]));
        assert_eq!(h_s.cols(), 2);

        let ripple = PolyMatrix::from_rows(vec![vec![p(&[(2, 1), (1, -1), (0, 1)])]]).unwrap();
        let (h_s, _) = augment_slack(&ripple, &Trajectory::constant(vec![rat(2)]));
        assert_eq!(*h_s.entry(0, 0), p(&[(2, 1), (1, -1), (0, 1)]));
        assert_eq!(*h_s.entry(0, 1), LaurentPoly::one());
    }

    #[test]
    fn slack_equivalence_constructively() {
        // w solves H w <= g iff s := g - H w is componentwise nonnegative,
        // and then (w, s) solves the slack-augmented equality exactly.
        let h = PolyMatrix::from_rows(vec![
            vec![p(&[(1, 1), (0, 1)]), p(&[(0, 1)])],
            vec![p(&[(0, 1)]), p(&[(1, 1)])],
        ])
        .unwrap();
        let g = Trajectory::constant(vec![rat(15), rat(10)]);
        let (h_s, _) = augment_slack(&h, &g);
        for w in [
            Trajectory::zero(2),
            Trajectory::finite(0, vec![vec![rat(3), rat(2)], vec![rat(1), rat(4)]]).unwrap(),
            Trajectory::constant(vec![rat(100), rat(0)]),
        ] {
            let hw = crate::trajectory::apply(&h, &w).unwrap();
            let s = g.sub(&hw).unwrap();
            let solves = satisfies(&h, &w, &g, Relation::Le).unwrap();
            assert_eq!(s.orthant_check(), solves);
            if solves {
                let stacked = Trajectory::stack(&[&w, &s]).unwrap();
                assert!(satisfies(&h_s, &stacked, &g, Relation::Eq).unwrap());
            }
        }
    }

    #[test]
    fn cost_examples() {
        let names = Some(vec![String::from("x"), String::from("u"), String::from("d")]);
        let _ = names;
        // u constant 2 on [0, 4] with unit weights: 10.
        let plan = Trajectory::finite(
            0,
            (0..5).map(|_| vec![rat(0), rat(2), rat(2)]).collect(),
        )
        .unwrap();
        let unit_cost = Trajectory::constant(vec![rat(1)]);
        assert_eq!(linear_cost(&plan, &unit_cost, 1).unwrap(), rat(10));
        // Zero orders cost nothing.
        let idle = Trajectory::finite(0, (0..5).map(|_| vec![rat(0); 3]).collect()).unwrap();
        assert_eq!(linear_cost(&idle, &unit_cost, 1).unwrap(), rat(0));
        // Weights (1, 2, 3) against unit orders: 6.
        let steady = Trajectory::finite(0, (0..3).map(|_| vec![rat(0), rat(1), rat(1)]).collect())
            .unwrap();
        let ramp_cost =
            Trajectory::finite(0, vec![vec![rat(1)], vec![rat(2)], vec![rat(3)]]).unwrap();
        assert_eq!(linear_cost(&steady, &ramp_cost, 1).unwrap(), rat(6));
        // Window mismatch is an error.
        let short = Trajectory::finite(0, vec![vec![rat(1)], vec![rat(2)]]).unwrap();
        assert!(linear_cost(&plan, &short, 1).is_err());
    }
}
