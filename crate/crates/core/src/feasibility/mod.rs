//! Feasibility decisions with machine-checkable outcomes.
//!
//! A system `R w = d, H w <= g` is either inhabited by a witness trajectory
//! or excluded by a finitely supported dual pair `(y, z)` with `z >= 0`,
//! `adjoint([R; H]) (y, z) = 0` as a full trajectory, and
//! `<y, d> + <z, g> < 0`. Exactly one of the two can verify, so [`decide`]
//! interleaves a certificate search over growing dual support windows with a
//! witness search over growing periods and reports the first success.
//!
//! Duals are restricted to finite support: that is what makes the pairing a
//! finite sum and the kernel condition checkable. The restriction keeps the
//! certificate direction sound but complete only in the limit of growing
//! windows, so exhausting the budget yields an honest `Unknown` rather than
//! a guess.

mod lp;
mod search;
mod verify;

pub use lp::{LinearProgram, LpConstraint, LpOutcome, LpRelation, LpSense};
pub use search::{certificate_search, stacked_adjoint, witness_search};
pub use verify::{verify_certificate, verify_witness};

use alloc::vec::Vec;

use crate::model::BehavioralSystem;
use crate::rational::Rational;
use crate::reduction::kernel_rank_deficit;
use crate::trajectory::Trajectory;

/// A Farkas-style infeasibility proof: finitely supported duals against the
/// equality and inequality parts, and the (negative) value they assign to
/// the right-hand sides.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    /// Dual against `R w = d`; sign-free. Absent when the system has no
    /// equality part.
    pub equality_dual: Option<Trajectory>,
    /// Dual against `H w <= g`; componentwise nonnegative. Absent when the
    /// system has no inequality part.
    pub inequality_dual: Option<Trajectory>,
    /// `<y, d> + <z, g>`, strictly negative.
    pub objective: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Feasible {
        witness: Trajectory,
    },
    Infeasible {
        certificate: Certificate,
    },
    /// Budget exhausted without a verdict. When `infeasibility_ruled_out` is
    /// set, the stacked adjoint has full column rank, so no certificate can
    /// exist and only the witness side remained open.
    Unknown {
        windows_tried: Vec<u32>,
        periods_tried: Vec<u32>,
        infeasibility_ruled_out: bool,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    Feasible,
    Infeasible,
    Unknown,
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::Feasible { .. } => VerdictKind::Feasible,
            Verdict::Infeasible { .. } => VerdictKind::Infeasible,
            Verdict::Unknown { .. } => VerdictKind::Unknown,
        }
    }
}

/// Search budget: dual support half-windows for the certificate side and
/// periods for the witness side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub windows: Vec<u32>,
    pub periods: Vec<u32>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            windows: alloc::vec![1, 2, 4, 8],
            periods: alloc::vec![1, 2, 4],
        }
    }
}

impl Budget {
    /// Doubling window schedule up to `window_max`, with the given periods.
    pub fn with_window_max(window_max: u32, periods: Vec<u32>) -> Self {
        let mut windows = Vec::new();
        let mut w = 1u32;
        while w <= window_max {
            windows.push(w);
            match w.checked_mul(2) {
                Some(next) => w = next,
                None => break,
            }
        }
        if windows.last().copied() != Some(window_max) && window_max >= 1 {
            windows.push(window_max);
        }
        Self { windows, periods }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchPoint {
    Certificate { window: u32 },
    Witness { period: u32 },
}

/// The ordered search schedule [`decide`] walks. Exposed so front ends can
/// evaluate points in parallel and still reproduce the sequential verdict:
/// the first point (in order) with an outcome wins.
#[derive(Clone, Debug)]
pub struct DecidePlan {
    pub points: Vec<SearchPoint>,
    /// Full column rank of the stacked adjoint: the only finitely supported
    /// dual is zero, so certificate searches are pointless and infeasibility
    /// can never be concluded.
    pub certificates_impossible: bool,
}

pub fn decide_plan(sys: &BehavioralSystem, budget: &Budget) -> DecidePlan {
    let adjoint = stacked_adjoint(sys);
    let certificates_impossible = kernel_rank_deficit(&adjoint) == 0;
    let mut points = Vec::new();
    if certificates_impossible {
        points.extend(
            budget
                .periods
                .iter()
                .map(|&period| SearchPoint::Witness { period }),
        );
    } else {
        let mut windows = budget.windows.iter().copied();
        let mut periods = budget.periods.iter().copied();
        loop {
            let window = windows.next();
            let period = periods.next();
            if window.is_none() && period.is_none() {
                break;
            }
            if let Some(window) = window {
                points.push(SearchPoint::Certificate { window });
            }
            if let Some(period) = period {
                points.push(SearchPoint::Witness { period });
            }
        }
    }
    DecidePlan { points, certificates_impossible }
}

#[derive(Clone, Debug)]
pub enum PointOutcome {
    Certificate(Certificate),
    Witness(Trajectory),
}

/// Evaluates one schedule point. Pure: the result depends only on the system
/// and the point, so points may be evaluated concurrently.
pub fn run_point(sys: &BehavioralSystem, point: &SearchPoint) -> Option<PointOutcome> {
    match point {
        SearchPoint::Certificate { window } => {
            certificate_search(sys, *window).map(PointOutcome::Certificate)
        }
        SearchPoint::Witness { period } => {
            witness_search(sys, *period).map(PointOutcome::Witness)
        }
    }
}

pub fn decide(sys: &BehavioralSystem, budget: &Budget) -> Verdict {
    let plan = decide_plan(sys, budget);
    let mut windows_tried = Vec::new();
    let mut periods_tried = Vec::new();
    for point in &plan.points {
        match point {
            SearchPoint::Certificate { window } => windows_tried.push(*window),
            SearchPoint::Witness { period } => periods_tried.push(*period),
        }
        match run_point(sys, point) {
            Some(PointOutcome::Certificate(certificate)) => {
                return Verdict::Infeasible { certificate }
            }
            Some(PointOutcome::Witness(witness)) => return Verdict::Feasible { witness },
            None => {}
        }
    }
    Verdict::Unknown {
        windows_tried,
        periods_tried,
        infeasibility_ruled_out: plan.certificates_impossible,
    }
}
