//! Exact modeling and feasibility analysis for discrete-time systems described
//! by equalities and inequalities over Laurent polynomial shift operators.
//!
//! A system is a set of vector-valued sequences `w: Z -> Q^q` constrained by
//! `R(s, s^-1) w = d` and `H(s, s^-1) w <= g`, where `s` is the one-step
//! advance and the ordering is componentwise with respect to the positive
//! orthant. This crate decides whether such a system admits a solution by
//! producing either an explicit witness trajectory or a finitely supported
//! dual certificate of infeasibility, both checkable by exact rational
//! arithmetic, and parametrizes solution sets of inequality systems through
//! slack trajectories.
//!
//! The crate is `no_std` (with `alloc`); all file formats and the command-line
//! front end live in the companion `bsys-cli` crate.

#![no_std]

extern crate alloc;

pub mod feasibility;
pub mod laurent;
pub mod matrix;
pub mod model;
pub mod parametrize;
pub mod rational;
pub mod reduction;
pub mod trajectory;

pub use feasibility::{
    certificate_search, decide, decide_plan, run_point, stacked_adjoint, verify_certificate,
    verify_witness, witness_search, Budget, Certificate, DecidePlan, LinearProgram, LpConstraint,
    LpOutcome, LpRelation, LpSense, PointOutcome, SearchPoint, Verdict, VerdictKind,
};
pub use laurent::LaurentPoly;
pub use matrix::{MatrixError, PolyMatrix};
pub use model::{
    augment_slack, inventory_model, linear_cost, lti_to_behavior, parse_matrix, parse_model,
    parse_poly, serialize_model, BehavioralSystem, ConstraintTarget, LtiSystem, ModelError,
    PolytopicConstraint, SystemPart,
};
pub use parametrize::{
    build_recursive_form, residual_slack, rollout, InitialConditions, RecursiveForm, RolloutError,
};
pub use rational::{rat, ratio, Rational};
pub use reduction::{
    det, express_rows, is_staircase, kernel_rank_deficit, reduce, unimodular_inverse, ReducedForm,
};
pub use trajectory::{
    apply, apply_on_window, apply_total, satisfies, satisfies_on_window, Extension, Relation,
    Trajectory, TrajectoryError,
};
