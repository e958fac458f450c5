//! Builders for the two application classes: safety-constrained LTI systems
//! and the warehouse stock-management model.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{structure_error, BehavioralSystem, ModelError};
use crate::laurent::LaurentPoly;
use crate::matrix::PolyMatrix;
use crate::rational::{rat, Rational};
use crate::trajectory::Trajectory;

/// A discrete-time LTI system `x(k+1) = A x(k) + B u(k)`, optionally with an
/// output map `y(k) = C x(k) + D u(k)`.
#[derive(Clone, Debug)]
pub struct LtiSystem {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Vec<Rational>>,
    pub c: Option<Vec<Vec<Rational>>>,
    pub d: Option<Vec<Vec<Rational>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstraintTarget {
    State,
    Input,
    Output,
    /// Constrains the one-step input increment `u(k+1) - u(k)`.
    InputRate,
}

/// A block `F v <= bound` on one variable group.
#[derive(Clone, Debug)]
pub struct PolytopicConstraint {
    pub target: ConstraintTarget,
    pub coeffs: Vec<Vec<Rational>>,
    pub bounds: Vec<Rational>,
}

fn rect_dims(m: &[Vec<Rational>]) -> Result<(usize, usize), ModelError> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|row| row.len() != cols) {
        return Err(structure_error(String::from("ragged constant matrix")));
    }
    Ok((rows, cols))
}

/// Encodes the LTI dynamics as a kernel representation over the stacked
/// variable `w = (x, u)` — or `w = (x, u, y)` when an output map is present —
/// and routes each polytopic block to its variable slots. Input-rate blocks
/// are multiplied by `(s - 1)`, since `(s - 1) u (k) = u(k+1) - u(k)`.
pub fn lti_to_behavior(
    sys: &LtiSystem,
    constraints: &[PolytopicConstraint],
) -> Result<BehavioralSystem, ModelError> {
    let (n, n2) = rect_dims(&sys.a)?;
    if n != n2 {
        return Err(structure_error(String::from("state matrix must be square")));
    }
    let (bn, m) = rect_dims(&sys.b)?;
    if bn != n {
        return Err(structure_error(String::from(
            "input matrix must have one row per state",
        )));
    }
    let p = match (&sys.c, &sys.d) {
        (None, None) => 0,
        (Some(c), d) => {
            let (p, cn) = rect_dims(c)?;
            if cn != n {
                return Err(structure_error(String::from(
                    "output matrix must have one column per state",
                )));
            }
            if let Some(d) = d {
                let (dp, dm) = rect_dims(d)?;
                if dp != p || dm != m {
                    return Err(structure_error(String::from(
                        "feedthrough matrix must be p x m",
                    )));
                }
            }
            p
        }
        (None, Some(_)) => {
            return Err(structure_error(String::from(
                "a feedthrough matrix needs an output matrix",
            )))
        }
    };
    let q = n + m + p;

    // Dynamics rows: [s*I - A, -B, 0]; output rows: [-C, -D, I].
    let mut r_rows: Vec<Vec<LaurentPoly>> = Vec::new();
    for i in 0..n {
        let mut row = Vec::with_capacity(q);
        for j in 0..n {
            let mut entry = LaurentPoly::constant(-sys.a[i][j].clone());
            if i == j {
                entry = &entry + &LaurentPoly::shift_op();
            }
            row.push(entry);
        }
        for j in 0..m {
            row.push(LaurentPoly::constant(-sys.b[i][j].clone()));
        }
        row.extend(core::iter::repeat_with(LaurentPoly::zero).take(p));
        r_rows.push(row);
    }
    if p > 0 {
        let c = sys.c.as_ref().unwrap();
        for i in 0..p {
            let mut row = Vec::with_capacity(q);
            for value in &c[i][..n] {
                row.push(LaurentPoly::constant(-value.clone()));
            }
            for j in 0..m {
                let dij = sys
                    .d
                    .as_ref()
                    .map_or_else(Rational::zero, |d| d[i][j].clone());
                row.push(LaurentPoly::constant(-dij));
            }
            for j in 0..p {
                row.push(if i == j {
                    LaurentPoly::one()
                } else {
                    LaurentPoly::zero()
                });
            }
            r_rows.push(row);
        }
    }
    let r = PolyMatrix::from_rows(r_rows).expect("dynamics rows are rectangular");
    let d_rhs = Trajectory::constant(vec![Rational::zero(); n + p]);

    let mut h_rows: Vec<Vec<LaurentPoly>> = Vec::new();
    let mut bounds: Vec<Rational> = Vec::new();
    for block in constraints {
        let (rows, cols) = rect_dims(&block.coeffs)?;
        if block.bounds.len() != rows {
            return Err(structure_error(String::from(
                "constraint block needs one bound per row",
            )));
        }
        let (offset, width) = match block.target {
            ConstraintTarget::State => (0, n),
            ConstraintTarget::Input | ConstraintTarget::InputRate => (n, m),
            ConstraintTarget::Output => {
                if p == 0 {
                    return Err(structure_error(String::from(
                        "output constraint on a system without an output map",
                    )));
                }
                (n + m, p)
            }
        };
        if cols != width {
            return Err(structure_error(alloc::format!(
                "constraint block has {cols} columns, its variable group has {width}"
            )));
        }
        let rate = LaurentPoly::from_terms(vec![(1, rat(1)), (0, rat(-1))]);
        for (i, coeff_row) in block.coeffs.iter().enumerate() {
            let mut row = vec![LaurentPoly::zero(); q];
            for (j, value) in coeff_row.iter().enumerate() {
                let mut entry = LaurentPoly::constant(value.clone());
                if block.target == ConstraintTarget::InputRate {
                    entry = &entry * &rate;
                }
                row[offset + j] = entry;
            }
            h_rows.push(row);
            bounds.push(block.bounds[i].clone());
        }
    }

    let mut names: Vec<String> = Vec::with_capacity(q);
    for i in 0..n {
        names.push(alloc::format!("x{}", i + 1));
    }
    for i in 0..m {
        names.push(alloc::format!("u{}", i + 1));
    }
    for i in 0..p {
        names.push(alloc::format!("y{}", i + 1));
    }

    let inequality = if h_rows.is_empty() {
        None
    } else {
        let h = PolyMatrix::from_rows(h_rows).expect("constraint rows are rectangular");
        Some((h, Trajectory::constant(bounds)))
    };
    BehavioralSystem::new(Some((r, d_rhs)), inequality, Some(names))
}

/// Warehouse stock management over `w = (x, u, d)`: stock, orders, demand.
///
/// The dynamics `x(k+1) = x(k) + u(k) - d(k)` give the equality row
/// `[(s - 1), -1, +1] w = 0`. The inequalities demand coverage
/// `x + u >= d` and nonnegativity of all three variables, written as
/// `H w <= 0`.
///
/// `displayed_demand_sign` flips the demand coefficient of the equality row
/// to `-1`, reproducing a published variant of the model whose demand sign
/// disagrees with the dynamics above; it is provided for comparison only.
pub fn inventory_model(displayed_demand_sign: bool) -> BehavioralSystem {
    let demand_coeff = if displayed_demand_sign { rat(-1) } else { rat(1) };
    let r = PolyMatrix::from_rows(vec![vec![
        LaurentPoly::from_terms(vec![(1, rat(1)), (0, rat(-1))]),
        LaurentPoly::constant(rat(-1)),
        LaurentPoly::constant(demand_coeff),
    ]])
    .expect("single equality row");
    let h = PolyMatrix::from_rational_rows(vec![
        vec![rat(-1), rat(-1), rat(1)],
        vec![rat(-1), rat(0), rat(0)],
        vec![rat(0), rat(-1), rat(0)],
        vec![rat(0), rat(0), rat(-1)],
    ])
    .expect("rectangular inequality block");
    BehavioralSystem::new(
        Some((r, Trajectory::constant(vec![rat(0)]))),
        Some((h, Trajectory::constant(vec![rat(0); 4]))),
        Some(vec![String::from("x"), String::from("u"), String::from("d")]),
    )
    .expect("inventory model is well formed")
}
