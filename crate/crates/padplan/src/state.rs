//! Timed-state semantics: the single source of truth for how starting an
//! action, elapsing time, and ending an action transform facts and fluents.
//! Both the planner and the validator replay plans through these operations.
//!
//! Over-all conditions use piecewise-constant semantics: an invariant of a
//! running action must hold at its start, immediately after every effect
//! application strictly inside its open interval, and immediately before its
//! own at-end effects. All effects are discrete, so checking at those event
//! points is exact.

use crate::grounding::{GroundAction, GroundCondition, GroundEffect, GroundExpr};
use crate::pddl::{FluentRef, GroundAtom, NumOp, Problem, TimeSpecifier};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

/// Slack for comparisons between times that went through decimal printing.
pub const TIME_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("fluent {0} has no value (missing :init assignment)")]
    MissingFluent(FluentRef),
    #[error("division by zero")]
    DivisionByZero,
    #[error("expression mentions ?duration but no duration is bound")]
    DurationUnavailable,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StepError {
    #[error("{0}")]
    Violation(Violation),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("cannot advance: agenda is empty")]
    EmptyAgenda,
    #[error("event at {at:.3} precedes current time {now:.3}")]
    TimeRegression { at: f64, now: f64 },
    #[error("start at {at:.3} would skip the scheduled end at {end:.3}")]
    SkipsScheduledEnd { at: f64, end: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ViolationKind {
    UnsatisfiedAtStart,
    UnsatisfiedAtEnd,
    UnsatisfiedOverAll,
    EpsilonViolation,
    GoalUnsatisfied,
    DurationOutOfBounds,
    UnknownAction,
}

/// Name and bound arguments of an action, for reporting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSig {
    pub name: String,
    pub args: Vec<String>,
}

impl From<&GroundAction> for ActionSig {
    fn from(a: &GroundAction) -> Self {
        ActionSig { name: a.schema.clone(), args: a.args.clone() }
    }
}

impl std::fmt::Display for ActionSig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}", self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub time: f64,
    pub action: Option<ActionSig>,
    pub condition: Option<GroundCondition>,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "at {:.3}: ", self.time)?;
        match self.kind {
            ViolationKind::UnsatisfiedAtStart => write!(f, "unsatisfied at-start condition")?,
            ViolationKind::UnsatisfiedAtEnd => write!(f, "unsatisfied at-end condition")?,
            ViolationKind::UnsatisfiedOverAll => write!(f, "unsatisfied over-all condition")?,
            ViolationKind::EpsilonViolation => write!(f, "start violates epsilon separation")?,
            ViolationKind::GoalUnsatisfied => write!(f, "goal not satisfied")?,
            ViolationKind::DurationOutOfBounds => write!(f, "duration out of bounds")?,
            ViolationKind::UnknownAction => write!(f, "unknown action")?,
        }
        if let Some(c) = &self.condition {
            write!(f, " {c}")?;
        }
        if let Some(a) = &self.action {
            write!(f, " for {a}")?;
        }
        Ok(())
    }
}

/// Map from ground fluent to value. Values of the PAD fluents are clamped to
/// [-1, 1] on every update; other fluents are unconstrained.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FluentValuation {
    values: BTreeMap<FluentRef, f64>,
}

impl FluentValuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, r: &FluentRef) -> Result<f64, EvalError> {
        self.values
            .get(r)
            .copied()
            .ok_or_else(|| EvalError::MissingFluent(r.clone()))
    }

    pub fn lookup(&self, r: &FluentRef) -> Option<f64> {
        self.values.get(r).copied()
    }

    pub fn set(&mut self, r: FluentRef, value: f64) {
        let value = if r.is_pad() { value.clamp(-1.0, 1.0) } else { value };
        self.values.insert(r, value);
    }

    /// Applies a numeric effect. `increase`/`decrease` read the current
    /// value and therefore fail on unassigned fluents; `assign` never reads.
    pub fn apply(&mut self, op: NumOp, fluent: &FluentRef, amount: f64) -> Result<(), EvalError> {
        let value = match op {
            NumOp::Assign => amount,
            NumOp::Increase => self.get(fluent)? + amount,
            NumOp::Decrease => self.get(fluent)? - amount,
        };
        self.set(fluent.clone(), value);
        Ok(())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&FluentRef, f64)> {
        self.values.iter().map(|(k, v)| (k, *v))
    }
}

/// A (pleasure, arousal, dominance) triple, each component in [-1, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PadState {
    pub pleasure: f64,
    pub arousal: f64,
    pub dominance: f64,
}

impl PadState {
    /// Components outside [-1, 1] are clamped, mirroring effect application.
    pub fn new(pleasure: f64, arousal: f64, dominance: f64) -> Self {
        PadState {
            pleasure: pleasure.clamp(-1.0, 1.0),
            arousal: arousal.clamp(-1.0, 1.0),
            dominance: dominance.clamp(-1.0, 1.0),
        }
    }

    /// Reads a child's triple from a valuation; `None` when any of the three
    /// fluents is unassigned.
    pub fn of(v: &FluentValuation, child: &str) -> Option<PadState> {
        Some(PadState {
            pleasure: v.lookup(&FluentRef::new("pleasure", &[child]))?,
            arousal: v.lookup(&FluentRef::new("arousal", &[child]))?,
            dominance: v.lookup(&FluentRef::new("dominance", &[child]))?,
        })
    }
}

/// An action end waiting on the agenda.
#[derive(Debug, Clone)]
pub struct PendingEnd {
    pub end_time: f64,
    pub action: Arc<GroundAction>,
    pub duration: f64,
    /// Insertion order; breaks ties among equal end times.
    pub seq: u64,
}

/// Facts, fluent values, wall-clock time, and the queue of pending ends.
/// Transitions return new states; values are freely shareable.
#[derive(Debug, Clone)]
pub struct TimedState {
    pub time: f64,
    pub facts: BTreeSet<GroundAtom>,
    pub fluents: FluentValuation,
    /// Sorted by (end_time, seq).
    pub agenda: Vec<PendingEnd>,
    next_seq: u64,
}

/// State at time zero: init facts and fluents, empty agenda.
pub fn initial_state(prob: &Problem) -> TimedState {
    let mut fluents = FluentValuation::new();
    for (r, v) in &prob.init_fluents {
        fluents.set(r.clone(), *v);
    }
    TimedState {
        time: 0.0,
        facts: prob.init_facts.iter().cloned().collect(),
        fluents,
        agenda: Vec::new(),
        next_seq: 0,
    }
}

/// Arithmetic evaluation; `duration` binds `?duration` when present.
pub fn evaluate(
    expr: &GroundExpr,
    v: &FluentValuation,
    duration: Option<f64>,
) -> Result<f64, EvalError> {
    match expr {
        GroundExpr::Constant(c) => Ok(*c),
        GroundExpr::Fluent(r) => v.get(r),
        GroundExpr::Duration => duration.ok_or(EvalError::DurationUnavailable),
        GroundExpr::Binary { op, lhs, rhs } => {
            let l = evaluate(lhs, v, duration)?;
            let r = evaluate(rhs, v, duration)?;
            match op {
                crate::pddl::BinOp::Add => Ok(l + r),
                crate::pddl::BinOp::Sub => Ok(l - r),
                crate::pddl::BinOp::Mul => Ok(l * r),
                crate::pddl::BinOp::Div => {
                    if r == 0.0 {
                        Err(EvalError::DivisionByZero)
                    } else {
                        Ok(l / r)
                    }
                }
            }
        }
    }
}

/// Truth of a ground condition in a state.
pub fn holds(c: &GroundCondition, s: &TimedState) -> Result<bool, EvalError> {
    match c {
        GroundCondition::Literal { atom, positive } => {
            Ok(s.facts.contains(atom) == *positive)
        }
        GroundCondition::Comparison { op, lhs, rhs } => {
            let l = evaluate(lhs, &s.fluents, None)?;
            let r = evaluate(rhs, &s.fluents, None)?;
            Ok(op.eval(l, r))
        }
    }
}

impl TimedState {
    pub fn holds(&self, c: &GroundCondition) -> Result<bool, EvalError> {
        holds(c, self)
    }

    fn first_failing(
        &self,
        action: &GroundAction,
        spec: TimeSpecifier,
    ) -> Result<Option<GroundCondition>, EvalError> {
        for c in action.conditions_at(spec) {
            if !self.holds(c)? {
                return Ok(Some(c.clone()));
            }
        }
        Ok(None)
    }

    fn apply_effects(
        &mut self,
        action: &GroundAction,
        spec: TimeSpecifier,
        duration: f64,
    ) -> Result<(), EvalError> {
        for e in action.effects_at(spec) {
            match e {
                GroundEffect::Add(atom) => {
                    self.facts.insert(atom.clone());
                }
                GroundEffect::Delete(atom) => {
                    self.facts.remove(atom);
                }
                GroundEffect::Numeric { op, fluent, amount } => {
                    let v = evaluate(amount, &self.fluents, Some(duration))?;
                    self.fluents.apply(*op, fluent, v)?;
                }
            }
        }
        Ok(())
    }

    /// Over-all checks for every agenda entry whose interval strictly
    /// contains the current time.
    fn running_overall_violations(&self) -> Result<Vec<Violation>, EvalError> {
        let mut out = Vec::new();
        for pending in &self.agenda {
            if pending.end_time <= self.time + TIME_SLACK {
                continue; // at its own boundary; checked by its end event
            }
            for c in pending.action.conditions_at(TimeSpecifier::OverAll) {
                if !self.holds(c)? {
                    out.push(Violation {
                        kind: ViolationKind::UnsatisfiedOverAll,
                        time: self.time,
                        action: Some(pending.action.as_ref().into()),
                        condition: Some(c.clone()),
                    });
                }
            }
        }
        Ok(out)
    }

    fn enqueue(&mut self, action: Arc<GroundAction>, duration: f64) {
        let entry = PendingEnd {
            end_time: self.time + duration,
            action,
            duration,
            seq: self.next_seq,
        };
        self.next_seq += 1;
        let pos = self
            .agenda
            .partition_point(|p| (p.end_time, p.seq) <= (entry.end_time, entry.seq));
        self.agenda.insert(pos, entry);
    }

    /// Attempts to start `action` at time `at` with the chosen `duration`.
    ///
    /// Checks the duration bounds, the at-start conditions (in the state
    /// before the start), the action's own over-all conditions (immediately
    /// after its at-start effects), and the over-all conditions of every
    /// other running action. On success the returned pair is the new state
    /// (with the pending end enqueued) and an empty violation list; on
    /// failure of the action's own checks no state is produced.
    pub fn try_start(
        &self,
        action: &Arc<GroundAction>,
        duration: f64,
        at: f64,
    ) -> Result<(Option<TimedState>, Vec<Violation>), StepError> {
        if at < self.time - TIME_SLACK {
            return Err(StepError::TimeRegression { at, now: self.time });
        }
        if let Some(first) = self.agenda.first() {
            if at >= first.end_time - TIME_SLACK {
                return Err(StepError::SkipsScheduledEnd { at, end: first.end_time });
            }
        }
        let sig: ActionSig = action.as_ref().into();
        if !action.duration.admits(duration) {
            return Ok((
                None,
                vec![Violation {
                    kind: ViolationKind::DurationOutOfBounds,
                    time: at,
                    action: Some(sig),
                    condition: None,
                }],
            ));
        }
        if let Some(c) = self.first_failing(action, TimeSpecifier::AtStart)? {
            return Ok((
                None,
                vec![Violation {
                    kind: ViolationKind::UnsatisfiedAtStart,
                    time: at,
                    action: Some(sig),
                    condition: Some(c),
                }],
            ));
        }

        let mut next = self.clone();
        next.time = at;
        next.apply_effects(action, TimeSpecifier::AtStart, duration)?;
        if let Some(c) = next.first_failing(action, TimeSpecifier::OverAll)? {
            return Ok((
                None,
                vec![Violation {
                    kind: ViolationKind::UnsatisfiedOverAll,
                    time: at,
                    action: Some(sig),
                    condition: Some(c),
                }],
            ));
        }
        // The start's effects land strictly inside every other running
        // action's interval.
        let runner_violations = next.running_overall_violations()?;
        next.enqueue(Arc::clone(action), duration);
        Ok((Some(next), runner_violations))
    }

    /// Start transition that fails on the first violation.
    pub fn apply_start(
        &self,
        action: &Arc<GroundAction>,
        duration: f64,
        at: f64,
    ) -> Result<TimedState, StepError> {
        match self.try_start(action, duration, at)? {
            (Some(state), v) if v.is_empty() => Ok(state),
            (_, mut v) => Err(StepError::Violation(v.remove(0))),
        }
    }

    /// Pops the earliest pending end, jumps time to it, and applies the
    /// action's at-end semantics. Check order: the ending action's over-all
    /// conditions (immediately before its at-end effects), its at-end
    /// conditions, then — after the effects — the over-all conditions of the
    /// actions still running. When a check fails the at-end effects are
    /// skipped and the violations are reported alongside the advanced state.
    pub fn advance_forced(
        &self,
    ) -> Result<(TimedState, Arc<GroundAction>, Vec<Violation>), StepError> {
        let Some(entry) = self.agenda.first().cloned() else {
            return Err(StepError::EmptyAgenda);
        };
        let mut next = self.clone();
        next.agenda.remove(0);
        next.time = entry.end_time;
        let action = entry.action.clone();
        let sig: ActionSig = action.as_ref().into();

        let mut violations = Vec::new();
        if let Some(c) = next.first_failing(&action, TimeSpecifier::OverAll)? {
            violations.push(Violation {
                kind: ViolationKind::UnsatisfiedOverAll,
                time: next.time,
                action: Some(sig.clone()),
                condition: Some(c),
            });
        } else if let Some(c) = next.first_failing(&action, TimeSpecifier::AtEnd)? {
            violations.push(Violation {
                kind: ViolationKind::UnsatisfiedAtEnd,
                time: next.time,
                action: Some(sig.clone()),
                condition: Some(c),
            });
        } else {
            next.apply_effects(&action, TimeSpecifier::AtEnd, entry.duration)?;
            violations.extend(next.running_overall_violations()?);
        }
        Ok((next, action, violations))
    }

    /// End transition that fails on the first violation.
    pub fn advance_to_next_end(&self) -> Result<(TimedState, Arc<GroundAction>), StepError> {
        let (state, action, violations) = self.advance_forced()?;
        match violations.into_iter().next() {
            None => Ok((state, action)),
            Some(v) => Err(StepError::Violation(v)),
        }
    }
}
