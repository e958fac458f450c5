//! Independent replay of verdict evidence.
//!
//! Verification shares no code path with the searches: it re-derives every
//! invariant from the raw data with exact arithmetic, so a verified
//! certificate or witness stands on its own.

use num_traits::{Signed, Zero};

use super::search::stacked_adjoint;
use super::Certificate;
use crate::model::BehavioralSystem;
use crate::rational::Rational;
use crate::trajectory::{apply, satisfies, Extension, Relation, Trajectory};

/// Replays all certificate invariants: duals finitely supported and matching
/// the system shape, the inequality dual nonnegative, the stacked dual in the
/// adjoint kernel as a full trajectory (support boundaries included), and a
/// strictly negative pairing that equals the recorded objective.
pub fn verify_certificate(sys: &BehavioralSystem, certificate: &Certificate) -> bool {
    let eq = sys.equality();
    let ineq = sys.inequality();
    if certificate.equality_dual.is_some() != eq.is_some() {
        return false;
    }
    if certificate.inequality_dual.is_some() != ineq.is_some() {
        return false;
    }
    for dual in [&certificate.equality_dual, &certificate.inequality_dual]
        .into_iter()
        .flatten()
    {
        if !matches!(dual.extension(), Extension::FiniteSupport) {
            return false;
        }
    }
    if let (Some(part), Some(dual)) = (eq, &certificate.equality_dual) {
        if dual.dim() != part.matrix.rows() {
            return false;
        }
    }
    if let (Some(part), Some(dual)) = (ineq, &certificate.inequality_dual) {
        if dual.dim() != part.matrix.rows() {
            return false;
        }
        if !dual.orthant_check() {
            return false;
        }
    }

    let stacked = match (&certificate.equality_dual, &certificate.inequality_dual) {
        (Some(y), Some(z)) => match Trajectory::stack(&[y, z]) {
            Ok(v) => v,
            Err(_) => return false,
        },
        (Some(y), None) => y.clone(),
        (None, Some(z)) => z.clone(),
        (None, None) => return false,
    };
    let adjoint = stacked_adjoint(sys);
    let Ok(image) = apply(&adjoint, &stacked) else {
        return false;
    };
    if image != Trajectory::zero(sys.q()) {
        return false;
    }

    let mut pairing = Rational::zero();
    if let (Some(part), Some(dual)) = (eq, &certificate.equality_dual) {
        match dual.inner_product(&part.rhs) {
            Ok(v) => pairing += v,
            Err(_) => return false,
        }
    }
    if let (Some(part), Some(dual)) = (ineq, &certificate.inequality_dual) {
        match dual.inner_product(&part.rhs) {
            Ok(v) => pairing += v,
            Err(_) => return false,
        }
    }
    pairing == certificate.objective && pairing.is_negative()
}

/// Membership replay: the witness must satisfy the equality part exactly and
/// the inequality part componentwise, tails included.
pub fn verify_witness(sys: &BehavioralSystem, witness: &Trajectory) -> bool {
    if witness.dim() != sys.q() {
        return false;
    }
    if let Some(part) = sys.equality() {
        match satisfies(&part.matrix, witness, &part.rhs, Relation::Eq) {
            Ok(true) => {}
            _ => return false,
        }
    }
    if let Some(part) = sys.inequality() {
        match satisfies(&part.matrix, witness, &part.rhs, Relation::Le) {
            Ok(true) => {}
            _ => return false,
        }
    }
    true
}
