//! Solution-set parametrization of feasible inequality systems through slack
//! trajectories.
//!
//! `H w <= g` is equivalent to `[H I] [w; s] = g, s >= 0`. Reducing the
//! slack-augmented matrix by unimodular row operations yields a staircase
//! system whose rows are recurrences: each row is solved for its pivot
//! variable at the lead shift, stepping forward in time. Choosing the free
//! slack components (any nonnegative trajectory) and the initial-condition
//! footprint then rolls out a solution `w`, and every solution arises this
//! way with `s = g - H w`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::matrix::PolyMatrix;
use crate::model::augment_slack;
use crate::rational::Rational;
use crate::reduction::{reduce, unimodular_inverse, ReducedForm};
use crate::trajectory::{apply_on_window, apply_total, Extension, Trajectory, TrajectoryError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RolloutError {
    #[error("right-hand side must be quasi-constant")]
    RhsNotQuasiConstant,
    #[error("slack trajectory must be componentwise nonnegative")]
    NegativeSlack,
    #[error("slack window covers [{got_lo}, {got_hi}] but the rollout needs [{needed_lo}, {needed_hi}]")]
    SlackWindowTooShort {
        needed_lo: i64,
        needed_hi: i64,
        got_lo: i64,
        got_hi: i64,
    },
    #[error("missing initial value for variable {var} at time {time}")]
    MissingInitial { var: usize, time: i64 },
    #[error("initial value for variable {var} at time {time} is outside the required footprint")]
    UnexpectedInitial { var: usize, time: i64 },
    #[error("recurrence row {row} cannot be solved by forward stepping")]
    NonCausalRow { row: usize },
    #[error("slack component {slack} is determined by the recurrences and comes out negative at time {time}")]
    DeterminedSlackNegative { slack: usize, time: i64 },
    #[error("residual identity failed at time {time}")]
    ResidualMismatch { time: i64 },
    #[error(transparent)]
    Trajectory(#[from] TrajectoryError),
}

/// One staircase row read as a recurrence: the pivot variable at its lead
/// shift expressed through the remaining terms.
#[derive(Clone, Debug)]
pub struct RecurrenceRow {
    pub row: usize,
    /// Column of the pivot in the slack-augmented matrix (`< q` for system
    /// variables, `>= q` for slack components).
    pub pivot_col: usize,
    /// Highest degree of the pivot polynomial; the row determines the pivot
    /// variable this many steps ahead.
    pub lead_shift: i64,
    pub lead_coeff: Rational,
}

#[derive(Clone, Debug)]
pub struct RecursiveForm {
    pub q: usize,
    pub slack_count: usize,
    /// Reduction of `[H I]`.
    pub reduced: ReducedForm,
    /// `U`-image of `g`; the right-hand side of the staircase system.
    pub transformed_rhs: Trajectory,
    /// Slack components (indices into `0..slack_count`) not pinned by a
    /// pivot: these may be chosen freely as nonnegative trajectories.
    pub free_slack: Vec<usize>,
    /// System variables not pinned by a pivot; rolled out as zero unless the
    /// caller supplies them.
    pub free_variables: Vec<usize>,
    pub rows: Vec<RecurrenceRow>,
}

/// Partial assignment of variable values on the start window.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct InitialConditions {
    values: BTreeMap<(usize, i64), Rational>,
}

impl InitialConditions {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, var: usize, time: i64, value: Rational) {
        self.values.insert((var, time), value);
    }

    pub fn get(&self, var: usize, time: i64) -> Option<&Rational> {
        self.values.get(&(var, time))
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, &Rational)> {
        self.values.iter().map(|(&(v, t), r)| (v, t, r))
    }
}

/// Reduces the slack-augmented system and reads off the recurrence rows.
pub fn build_recursive_form(
    h: &PolyMatrix,
    g: &Trajectory,
) -> Result<RecursiveForm, RolloutError> {
    if !matches!(g.extension(), Extension::QuasiConstant(_)) {
        return Err(RolloutError::RhsNotQuasiConstant);
    }
    let q = h.cols();
    let slack_count = h.rows();
    let (h_s, g) = augment_slack(h, g);
    let reduced = reduce(&h_s);
    let transformed_rhs =
        apply_total(&reduced.u, &g).expect("multiplier rows match the right-hand side");
    let rows: Vec<RecurrenceRow> = reduced
        .pivot_cols
        .iter()
        .enumerate()
        .map(|(row, &pivot_col)| {
            let pivot = reduced.t.entry(row, pivot_col);
            let lead_shift = pivot.max_degree().expect("pivots are nonzero");
            RecurrenceRow {
                row,
                pivot_col,
                lead_shift,
                lead_coeff: pivot.coeff(lead_shift),
            }
        })
        .collect();
    let free_slack = (q..q + slack_count)
        .filter(|col| !reduced.pivot_cols.contains(col))
        .map(|col| col - q)
        .collect();
    let free_variables = (0..q)
        .filter(|col| !reduced.pivot_cols.contains(col))
        .collect();
    Ok(RecursiveForm {
        q,
        slack_count,
        reduced,
        transformed_rhs,
        free_slack,
        free_variables,
        rows,
    })
}

impl RecursiveForm {
    fn pivot_row_of(&self, col: usize) -> Option<&RecurrenceRow> {
        self.rows.iter().find(|r| r.pivot_col == col)
    }

    /// Earliest degree at which any row reads the given column.
    fn min_read_degree(&self, col: usize) -> Option<i64> {
        (0..self.reduced.t.rows())
            .filter_map(|row| self.reduced.t.entry(row, col).min_degree())
            .min()
    }

    /// The initial-condition footprint for a rollout beginning at `start`:
    /// for each pivot system variable, the inclusive time range that must be
    /// supplied because it is read before the recurrences first write it.
    pub fn required_initials(&self, start: i64) -> BTreeMap<usize, (i64, i64)> {
        let mut footprint = BTreeMap::new();
        for row in &self.rows {
            if row.pivot_col >= self.q {
                continue;
            }
            let Some(min_read) = self.min_read_degree(row.pivot_col) else {
                continue;
            };
            let lo = start + min_read;
            let hi = start + row.lead_shift - 1;
            if lo <= hi {
                footprint.insert(row.pivot_col, (lo, hi));
            }
        }
        footprint
    }

    /// Pretty-prints the recurrences, one equation per staircase row, e.g.
    /// `w1(k) + w2(k+1) + s2(k) = 10`.
    pub fn render(&self, variable_names: Option<&[String]>) -> String {
        let name_of = |col: usize| -> String {
            if col < self.q {
                match variable_names {
                    Some(names) => names[col].clone(),
                    None => alloc::format!("w{}", col + 1),
                }
            } else {
                alloc::format!("s{}", col - self.q + 1)
            }
        };
        let mut out = String::new();
        let level = match self.transformed_rhs.extension() {
            Extension::QuasiConstant(c) => c.clone(),
            _ => self.transformed_rhs.value_at(0),
        };
        for row in &self.rows {
            let mut first = true;
            for col in 0..self.reduced.t.cols() {
                for (degree, coeff) in self.reduced.t.entry(row.row, col).terms() {
                    if first {
                        if coeff.is_negative() {
                            out.push('-');
                        }
                        first = false;
                    } else if coeff.is_negative() {
                        out.push_str(" - ");
                    } else {
                        out.push_str(" + ");
                    }
                    let magnitude = coeff.abs();
                    if !magnitude.is_one() {
                        out.push_str(&alloc::format!("{magnitude}*"));
                    }
                    let shift = match degree {
                        0 => String::from("k"),
                        d if d > 0 => alloc::format!("k+{d}"),
                        d => alloc::format!("k{d}"),
                    };
                    out.push_str(&alloc::format!("{}({shift})", name_of(col)));
                }
            }
            out.push_str(&alloc::format!(" = {}\n", level[row.row]));
        }
        out
    }
}

/// Rolls the recurrences forward from `start` over `horizon` steps.
///
/// `initial` must cover exactly the footprint reported by
/// [`RecursiveForm::required_initials`]; `slack` supplies the free slack
/// components (nonnegative; its values are consumed as given) and the
/// pre-lead values of any pivot slack components. Free system variables
/// default to zero. The returned trajectory holds the window
/// `[start, start + horizon]`; the residual identity `g - H w = s` is
/// asserted on every index it determines.
pub fn rollout(
    form: &RecursiveForm,
    initial: &InitialConditions,
    slack: &Trajectory,
    start: i64,
    horizon: u32,
) -> Result<Trajectory, RolloutError> {
    if slack.dim() != form.slack_count {
        return Err(RolloutError::Trajectory(TrajectoryError::DimMismatch {
            context: "slack trajectory must have one component per inequality row",
        }));
    }
    if !slack.orthant_check() {
        return Err(RolloutError::NegativeSlack);
    }
    let end_requested = start + i64::from(horizon);
    if matches!(slack.extension(), Extension::FiniteSupport) {
        let (lo, hi) = slack.window();
        if lo > start || hi < end_requested {
            return Err(RolloutError::SlackWindowTooShort {
                needed_lo: start,
                needed_hi: end_requested,
                got_lo: lo,
                got_hi: hi,
            });
        }
    }

    // Validate the initial assignment against the footprint exactly.
    let footprint = form.required_initials(start);
    for (&var, &(lo, hi)) in &footprint {
        for time in lo..=hi {
            if initial.get(var, time).is_none() {
                return Err(RolloutError::MissingInitial { var, time });
            }
        }
    }
    for (var, time, _) in initial.iter() {
        let inside = footprint
            .get(&var)
            .is_some_and(|&(lo, hi)| (lo..=hi).contains(&time));
        if !inside {
            return Err(RolloutError::UnexpectedInitial { var, time });
        }
    }

    let t = &form.reduced.t;
    let u_inv = unimodular_inverse(&form.reduced.u).expect("reduction multipliers are unimodular");
    let (uinv_min, uinv_max) = u_inv.degree_range().unwrap_or((0, 0));
    let lead_max = form.rows.iter().map(|r| r.lead_shift).max().unwrap_or(0);
    let (t_min, t_max) = t.degree_range().unwrap_or((0, 0));
    let margin = lead_max + uinv_max.max(0) + t_max.max(0) - t_min.min(0);
    let end_compute = end_requested + margin;

    let mut state: BTreeMap<(usize, i64), Rational> = BTreeMap::new();
    for (var, time, value) in initial.iter() {
        state.insert((var, time), value.clone());
    }
    let determined_slack: Vec<bool> = (0..form.slack_count)
        .map(|j| form.pivot_row_of(form.q + j).is_some())
        .collect();

    let read = |state: &BTreeMap<(usize, i64), Rational>, col: usize, time: i64| -> Option<Rational> {
        if let Some(v) = state.get(&(col, time)) {
            return Some(v.clone());
        }
        if col >= form.q {
            let j = col - form.q;
            let write_from = form
                .pivot_row_of(col)
                .map(|r| start + r.lead_shift);
            if determined_slack[j] && write_from.is_some_and(|w| time >= w) {
                return None; // determined but not yet computed
            }
            return Some(slack.value_at(time)[j].clone());
        }
        if form.free_variables.contains(&col) {
            return Some(Rational::zero());
        }
        // Pivot system variable before its first write: footprint-validated,
        // so a miss here means the value is simply not computed yet.
        None
    };

    for k in start..=end_compute {
        let mut fired = vec![false; form.rows.len()];
        loop {
            let mut progressed = false;
            for (index, row) in form.rows.iter().enumerate().rev() {
                if fired[index] {
                    continue;
                }
                let mut acc = form.transformed_rhs.value_at(k)[row.row].clone();
                let mut available = true;
                'cols: for col in 0..t.cols() {
                    for (degree, coeff) in t.entry(row.row, col).terms() {
                        if col == row.pivot_col && degree == row.lead_shift {
                            continue;
                        }
                        match read(&state, col, k + degree) {
                            Some(value) => acc -= coeff * &value,
                            None => {
                                available = false;
                                break 'cols;
                            }
                        }
                    }
                }
                if !available {
                    continue;
                }
                let value = acc / &row.lead_coeff;
                let write_time = k + row.lead_shift;
                if row.pivot_col >= form.q && value.is_negative() {
                    return Err(RolloutError::DeterminedSlackNegative {
                        slack: row.pivot_col - form.q,
                        time: write_time,
                    });
                }
                state.insert((row.pivot_col, write_time), value);
                fired[index] = true;
                progressed = true;
            }
            if fired.iter().all(|&f| f) {
                break;
            }
            if !progressed {
                let stuck = fired.iter().position(|&f| !f).unwrap();
                return Err(RolloutError::NonCausalRow {
                    row: form.rows[stuck].row,
                });
            }
        }
    }

    // Assemble the full computed window for the cross-check, then return the
    // requested slice.
    let full_values: Vec<Vec<Rational>> = (start..=end_compute)
        .map(|time| {
            (0..form.q)
                .map(|col| read(&state, col, time).unwrap_or_else(Rational::zero))
                .collect()
        })
        .collect();
    let w_full = Trajectory::finite(start, full_values.clone())?;

    // Residual identity on every index the recurrences enforce: the original
    // rows hold wherever all contributing staircase instantiations fired.
    let h = original_rows(form);
    if let Some((lo, values)) = apply_on_window(&h, &w_full)? {
        let enforce_lo = start - uinv_min.min(0);
        let enforce_hi = end_compute - lead_max - uinv_max.max(0);
        for (offset, row_vals) in values.iter().enumerate() {
            let k = lo + offset as i64;
            if k < enforce_lo || k > enforce_hi {
                continue;
            }
            let g_k = g_of(form, k);
            for j in 0..form.slack_count {
                let expected = read(&state, form.q + j, k)
                    .unwrap_or_else(|| slack.value_at(k)[j].clone());
                if &g_k[j] - &row_vals[j] != expected {
                    return Err(RolloutError::ResidualMismatch { time: k });
                }
            }
        }
    }

    let returned: Vec<Vec<Rational>> = full_values
        .into_iter()
        .take((i64::from(horizon) + 1) as usize)
        .collect();
    Ok(Trajectory::finite(start, returned)?)
}

/// Recovers `H` (the non-slack columns of the staircase origin `[H I]`).
fn original_rows(form: &RecursiveForm) -> PolyMatrix {
    let h_s = unimodular_inverse(&form.reduced.u)
        .expect("reduction multipliers are unimodular")
        .mul(&form.reduced.t)
        .expect("square times staircase");
    let rows: Vec<Vec<crate::laurent::LaurentPoly>> = (0..h_s.rows())
        .map(|r| (0..form.q).map(|c| h_s.entry(r, c).clone()).collect())
        .collect();
    PolyMatrix::from_rows(rows).expect("rectangular block")
}

/// Original right-hand side value at time `k`, recovered as
/// `u_inv * transformed_rhs`.
fn g_of(form: &RecursiveForm, k: i64) -> Vec<Rational> {
    let u_inv = unimodular_inverse(&form.reduced.u).expect("unimodular");
    (0..u_inv.rows())
        .map(|i| {
            let mut acc = Rational::zero();
            for j in 0..u_inv.cols() {
                for (degree, coeff) in u_inv.entry(i, j).terms() {
                    acc += coeff * &form.transformed_rhs.value_at(k + degree)[j];
                }
            }
            acc
        })
        .collect()
}

/// The slack a candidate solution leaves: `s = g - H w`. Nonnegative exactly
/// when `w` solves `H w <= g`.
pub fn residual_slack(
    h: &PolyMatrix,
    g: &Trajectory,
    w: &Trajectory,
) -> Result<Trajectory, TrajectoryError> {
    let image = crate::trajectory::apply(h, w)?;
    g.sub(&image)
}
