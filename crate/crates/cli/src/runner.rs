//! Budget-point evaluation with optional parallelism.
//!
//! The schedule comes from `decide_plan`; points are pure functions of the
//! system, so waves of them can run on worker threads. The winner is always
//! the first point in schedule order with an outcome, which makes the
//! verdict independent of the job count.

use bsys_core::{
    decide_plan, run_point, BehavioralSystem, Budget, PointOutcome, SearchPoint, Verdict,
};

pub struct RunOutcome {
    pub verdict: Verdict,
    pub windows_tried: Vec<u32>,
    pub periods_tried: Vec<u32>,
}

pub fn decide_with_jobs(sys: &BehavioralSystem, budget: &Budget, jobs: usize) -> RunOutcome {
    let jobs = jobs.max(1);
    let plan = decide_plan(sys, budget);
    let mut windows_tried = Vec::new();
    let mut periods_tried = Vec::new();
    let mut verdict: Option<Verdict> = None;

    'waves: for wave in plan.points.chunks(jobs) {
        let outcomes: Vec<Option<PointOutcome>> = if jobs == 1 {
            wave.iter().map(|point| run_point(sys, point)).collect()
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = wave
                    .iter()
                    .map(|point| scope.spawn(move || run_point(sys, point)))
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("search workers do not panic"))
                    .collect()
            })
        };
        for (point, outcome) in wave.iter().zip(outcomes) {
            match point {
                SearchPoint::Certificate { window } => windows_tried.push(*window),
                SearchPoint::Witness { period } => periods_tried.push(*period),
            }
            if let Some(outcome) = outcome {
                verdict = Some(match outcome {
                    PointOutcome::Certificate(certificate) => {
                        Verdict::Infeasible { certificate }
                    }
                    PointOutcome::Witness(witness) => Verdict::Feasible { witness },
                });
                break 'waves;
            }
        }
    }

    let verdict = verdict.unwrap_or(Verdict::Unknown {
        windows_tried: windows_tried.clone(),
        periods_tried: periods_tried.clone(),
        infeasibility_ruled_out: plan.certificates_impossible,
    });
    RunOutcome { verdict, windows_tried, periods_tried }
}
