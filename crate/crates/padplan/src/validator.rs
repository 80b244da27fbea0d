//! Independent plan checker and PAD trajectory simulator. Validation is an
//! event-ordered replay through the timed-state semantics: starts from the
//! plan file and pending ends are interleaved chronologically, ends first on
//! ties. The default mode stops at the first violation; the exhaustive mode
//! keeps replaying with the failed action's effects skipped (diagnostic
//! output, not alternative semantics).

use crate::emotion::{classify, EmotionLabel, Thresholds};
use crate::grounding::{ground, ground_goal, GroundAction};
use crate::pddl::{Domain, Problem};
use crate::plan::{Plan, TimedAction};
use crate::state::{
    holds, initial_state, EvalError, PadState, StepError, TimedState, Violation,
    ViolationKind, TIME_SLACK,
};
use std::collections::HashMap;
use std::sync::Arc;

pub const DEFAULT_EPSILON: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Valid,
    Invalid,
}

#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub verdict: Verdict,
    /// First-failure mode records exactly one entry; exhaustive mode lists
    /// every violation found.
    pub violations: Vec<Violation>,
    /// State after the replay (at the first violation in first-failure mode).
    pub final_state: TimedState,
    /// max(start + duration) over the plan's actions, violations or not.
    pub makespan: f64,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.verdict == Verdict::Valid
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ValidateError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("replay error: {0}")]
    Step(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureMode {
    FirstFailure,
    Exhaustive,
}

/// Replays `plan` against the domain/problem semantics and reports either
/// the first violation or, in exhaustive mode, all of them.
pub fn validate_with_mode(
    dom: &Domain,
    prob: &Problem,
    plan: &Plan,
    epsilon: f64,
    mode: FailureMode,
) -> Result<ValidationReport, ValidateError> {
    let actions: Vec<Arc<GroundAction>> = ground(dom, prob).into_iter().map(Arc::new).collect();
    let index: HashMap<(String, Vec<String>), Arc<GroundAction>> = actions
        .iter()
        .map(|a| ((a.schema.clone(), a.args.clone()), Arc::clone(a)))
        .collect();
    let goal = ground_goal(prob);
    let makespan = plan.makespan();

    let mut state = initial_state(prob);
    let mut violations: Vec<Violation> = Vec::new();
    let mut last_event: Option<f64> = None;
    let mut starts = plan.actions.iter().peekable();

    macro_rules! record {
        ($v:expr) => {{
            violations.push($v);
            if mode == FailureMode::FirstFailure {
                return Ok(ValidationReport {
                    verdict: Verdict::Invalid,
                    violations,
                    final_state: state,
                    makespan,
                });
            }
        }};
    }

    loop {
        let next_end = state.agenda.first().map(|p| p.end_time);
        let next_start = starts.peek().map(|a| a.start);
        // Ends strictly first on ties; a start exactly at an end time is an
        // epsilon violation caught below.
        let do_end = match (next_end, next_start) {
            (Some(e), Some(s)) => e <= s + TIME_SLACK,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if do_end {
            let (next, _, step_violations) = state
                .advance_forced()
                .map_err(|e| ValidateError::Step(e.to_string()))?;
            let t = next.time;
            state = next;
            last_event = Some(t);
            for v in step_violations {
                record!(v);
            }
        } else {
            let timed = starts.next().unwrap();
            let sig = timed.action.clone();
            if let Some(prev) = last_event {
                if timed.start < prev + epsilon - TIME_SLACK {
                    record!(Violation {
                        kind: ViolationKind::EpsilonViolation,
                        time: timed.start,
                        action: Some(sig.clone()),
                        condition: None,
                    });
                    // The start still counts as a plan event.
                    last_event = Some(timed.start.max(prev));
                    continue;
                }
            }
            last_event = Some(timed.start);
            let Some(action) = index.get(&(sig.name.clone(), sig.args.clone())) else {
                record!(Violation {
                    kind: ViolationKind::UnknownAction,
                    time: timed.start,
                    action: Some(sig),
                    condition: None,
                });
                continue;
            };
            match state.try_start(action, timed.duration, timed.start) {
                Ok((next, step_violations)) => {
                    if let Some(next) = next {
                        state = next;
                    }
                    for v in step_violations {
                        record!(v);
                    }
                }
                Err(StepError::Eval(e)) => return Err(e.into()),
                Err(e) => return Err(ValidateError::Step(e.to_string())),
            }
        }
    }

    for c in &goal {
        if !holds(c, &state)? {
            record!(Violation {
                kind: ViolationKind::GoalUnsatisfied,
                time: makespan,
                action: None,
                condition: Some(c.clone()),
            });
        }
    }

    let verdict = if violations.is_empty() { Verdict::Valid } else { Verdict::Invalid };
    Ok(ValidationReport { verdict, violations, final_state: state, makespan })
}

pub fn validate(
    dom: &Domain,
    prob: &Problem,
    plan: &Plan,
    epsilon: f64,
) -> Result<ValidationReport, ValidateError> {
    validate_with_mode(dom, prob, plan, epsilon, FailureMode::FirstFailure)
}

// ---- trajectory simulation ----

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub time: f64,
    pub child: String,
    pub pad: PadState,
    pub emotion: EmotionLabel,
}

/// Time series of sampled PAD values: one sample per child at every grid
/// time (multiples of the period up to the makespan) and immediately after
/// every effect event.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub sample_period: f64,
}

impl Trajectory {
    /// `time,child,pleasure,arousal,dominance,emotion` with three decimal
    /// digits, sorted by time then child.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("time,child,pleasure,arousal,dominance,emotion\n");
        for row in &self.samples {
            s.push_str(&format!(
                "{:.3},{},{:.3},{:.3},{:.3},{}\n",
                row.time, row.child, row.pad.pleasure, row.pad.arousal, row.pad.dominance, row.emotion
            ));
        }
        s
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SimulateError {
    #[error("plan is invalid: {reason}")]
    InvalidPlan { reason: String, report: Box<ValidationReport> },
    #[error(transparent)]
    Validate(#[from] ValidateError),
}

/// Replays a validated plan and samples every child's PAD triple. Fails with
/// the validation report when the plan does not validate.
pub fn simulate_trajectory(
    dom: &Domain,
    prob: &Problem,
    plan: &Plan,
    sample_dt: f64,
) -> Result<Trajectory, SimulateError> {
    assert!(sample_dt > 0.0, "sample period must be positive");
    let report = validate(dom, prob, plan, DEFAULT_EPSILON)?;
    if !report.is_valid() {
        let reason = report
            .violations
            .first()
            .map(|v| v.to_string())
            .unwrap_or_else(|| "unknown violation".to_string());
        return Err(SimulateError::InvalidPlan { reason, report: Box::new(report) });
    }

    let children = children_of(dom, prob);
    let makespan = plan.makespan();

    // Event replay, recording the valuation after every event.
    let mut timeline: Vec<(f64, Vec<(String, PadState)>)> = Vec::new();
    let snapshot = |state: &TimedState| -> Vec<(String, PadState)> {
        children
            .iter()
            .filter_map(|c| PadState::of(&state.fluents, c).map(|p| (c.clone(), p)))
            .collect()
    };

    let actions: Vec<Arc<GroundAction>> = ground(dom, prob).into_iter().map(Arc::new).collect();
    let index: HashMap<(String, Vec<String>), Arc<GroundAction>> = actions
        .iter()
        .map(|a| ((a.schema.clone(), a.args.clone()), Arc::clone(a)))
        .collect();

    let mut state = initial_state(prob);
    let initial_snapshot = snapshot(&state);
    let mut starts = plan.actions.iter().peekable();
    loop {
        let next_end = state.agenda.first().map(|p| p.end_time);
        let next_start = starts.peek().map(|a| a.start);
        let do_end = match (next_end, next_start) {
            (Some(e), Some(s)) => e <= s + TIME_SLACK,
            (Some(_), None) => true,
            (None, Some(_)) => false,
            (None, None) => break,
        };
        if do_end {
            let (next, _) = state
                .advance_to_next_end()
                .map_err(|e| ValidateError::Step(e.to_string()))?;
            state = next;
            timeline.push((state.time, snapshot(&state)));
        } else {
            let timed: &TimedAction = starts.next().unwrap();
            let action = &index[&(timed.action.name.clone(), timed.action.args.clone())];
            state = state
                .apply_start(action, timed.duration, timed.start)
                .map_err(|e| ValidateError::Step(e.to_string()))?;
            timeline.push((state.time, snapshot(&state)));
        }
    }

    // One row set per grid time (value right-continuous: the state after all
    // events at or before it) plus one per event.
    let mut instants: Vec<f64> = Vec::new();
    let mut k = 0u64;
    loop {
        let t = k as f64 * sample_dt;
        if t > makespan + TIME_SLACK {
            break;
        }
        instants.push(t);
        k += 1;
    }
    let th = Thresholds::default();
    let mut samples = Vec::new();
    let mut emit = |time: f64, pads: &Vec<(String, PadState)>| {
        for (child, pad) in pads {
            samples.push(TrajectorySample {
                time,
                child: child.clone(),
                pad: *pad,
                emotion: classify(*pad, th),
            });
        }
    };
    for &t in &instants {
        let pads = timeline
            .iter()
            .take_while(|(et, _)| *et <= t + TIME_SLACK)
            .last()
            .map(|(_, p)| p)
            .unwrap_or(&initial_snapshot);
        emit(t, pads);
    }
    for (t, pads) in &timeline {
        emit(*t, pads);
    }
    samples.sort_by(|a, b| a.time.total_cmp(&b.time).then(a.child.cmp(&b.child)));
    Ok(Trajectory { samples, sample_period: sample_dt })
}

/// Objects the PAD functions range over, sorted by name.
pub fn children_of(dom: &Domain, prob: &Problem) -> Vec<String> {
    let Some(child_ty) = dom.function("pleasure").and_then(|f| f.params.first().map(|p| p.ty.clone()))
    else {
        return Vec::new();
    };
    crate::grounding::extension(dom, prob, &child_ty)
        .into_iter()
        .map(str::to_string)
        .collect()
}
