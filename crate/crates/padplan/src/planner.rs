//! Forward decision-epoch temporal search. Branching at a node either starts
//! a ground action (epsilon after the last event) for one of its candidate
//! durations, or advances time to the next scheduled action end. Greedy
//! best-first on the heuristic, tie-broken by smaller makespan and then by a
//! seed-hashed key, so a fixed seed yields a byte-identical plan.

use crate::grounding::{ground, ground_goal, GroundAction, GroundCondition, GroundEffect};
use crate::pddl::{Domain, DurationConstraint, FluentRef, Problem, TimeSpecifier};
use crate::plan::{Plan, TimedAction};
use crate::state::{holds, initial_state, EvalError, StepError, TimedState};
use std::collections::{BinaryHeap, HashSet};
use std::hash::{Hash, Hasher};
use std::sync::Arc;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    /// Minimal gap between a start and any earlier plan event.
    pub epsilon: f64,
    pub timeout: Duration,
    /// Grid step for sampling durations of upper-bounded actions.
    pub duration_grid_step: f64,
    /// Shuffles expansion order among exact ties; different seeds explore
    /// plateaus differently.
    pub seed: u64,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        PlannerConfig {
            epsilon: 0.001,
            timeout: Duration::from_secs(60),
            duration_grid_step: 5.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanOutcome {
    Solved(Plan),
    /// The reachable state space was exhausted without reaching the goal.
    Unsolvable,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlanError {
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Ground goal plus the tables the heuristic reads: the per-child PAD fluent
/// references and the atom/action index of the delete-relaxation.
pub struct Goal {
    pub conditions: Vec<GroundCondition>,
    child_pads: Vec<[FluentRef; 3]>,
    /// Interned ground atoms referenced by action preconditions or the goal.
    atom_ids: std::collections::HashMap<crate::pddl::GroundAtom, u32>,
    /// Per ground action: positive precondition atom ids (any time
    /// specifier) and added atom ids.
    act_pres: Vec<Vec<u32>>,
    act_adds: Vec<Vec<u32>>,
    /// Per atom: the actions that add it.
    adders: Vec<Vec<u32>>,
    /// Positive goal literals, as atom ids.
    goal_atoms: Vec<u32>,
}

impl Goal {
    pub fn new(dom: &Domain, prob: &Problem) -> Goal {
        let conditions = ground_goal(prob);
        // Children are the objects the PAD functions range over.
        let child_type = dom
            .function("pleasure")
            .and_then(|f| f.params.first())
            .map(|p| p.ty.clone());
        let child_pads = match child_type {
            Some(ty) => crate::grounding::extension(dom, prob, &ty)
                .into_iter()
                .map(|c| {
                    [
                        FluentRef::new("pleasure", &[c]),
                        FluentRef::new("arousal", &[c]),
                        FluentRef::new("dominance", &[c]),
                    ]
                })
                .collect(),
            None => Vec::new(),
        };

        let actions = ground(dom, prob);
        let mut atom_ids = std::collections::HashMap::new();
        let intern = |atom: &crate::pddl::GroundAtom, ids: &mut std::collections::HashMap<_, u32>| -> u32 {
            let next = ids.len() as u32;
            *ids.entry(atom.clone()).or_insert(next)
        };
        let mut act_pres = Vec::with_capacity(actions.len());
        let mut act_adds = Vec::with_capacity(actions.len());
        for a in &actions {
            let mut pres = Vec::new();
            for (_, c) in &a.conditions {
                if let GroundCondition::Literal { atom, positive: true } = c {
                    pres.push(intern(atom, &mut atom_ids));
                }
            }
            let mut adds = Vec::new();
            for (_, e) in &a.effects {
                if let GroundEffect::Add(atom) = e {
                    adds.push(intern(atom, &mut atom_ids));
                }
            }
            act_pres.push(pres);
            act_adds.push(adds);
        }
        let mut goal_atoms = Vec::new();
        for c in &conditions {
            if let GroundCondition::Literal { atom, positive: true } = c {
                goal_atoms.push(intern(atom, &mut atom_ids));
            }
        }
        let mut adders = vec![Vec::new(); atom_ids.len()];
        for (i, adds) in act_adds.iter().enumerate() {
            for &a in adds {
                adders[a as usize].push(i as u32);
            }
        }
        Goal { conditions, child_pads, atom_ids, act_pres, act_adds, adders, goal_atoms }
    }

    pub fn satisfied(&self, s: &TimedState) -> Result<bool, EvalError> {
        for c in &self.conditions {
            if !holds(c, s)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Length of a relaxed plan: ignore deletes, negative literals, and
    /// numeric comparisons; build reachability layers from the current facts
    /// (at-end effects of running actions count as already paid for), then
    /// extract supporting actions backwards, counting each action once.
    /// Infinite exactly when some positive goal literal is unreachable even
    /// under the relaxation, which makes the state a provable dead end.
    fn relaxed_plan_len(&self, state: &TimedState) -> f64 {
        const UNREACHED: u32 = u32::MAX;
        let n = self.atom_ids.len();
        let mut fact_level = vec![UNREACHED; n];
        let mut act_level = vec![UNREACHED; self.act_pres.len()];
        for f in &state.facts {
            if let Some(&id) = self.atom_ids.get(f) {
                fact_level[id as usize] = 0;
            }
        }
        for pending in &state.agenda {
            for e in pending.action.effects_at(TimeSpecifier::AtEnd) {
                if let crate::grounding::GroundEffect::Add(atom) = e {
                    if let Some(&id) = self.atom_ids.get(atom) {
                        fact_level[id as usize] = 0;
                    }
                }
            }
        }

        let mut level: u32 = 0;
        loop {
            if self.goal_atoms.iter().all(|&g| fact_level[g as usize] <= level) {
                break;
            }
            let mut changed = false;
            for (i, pres) in self.act_pres.iter().enumerate() {
                if act_level[i] != UNREACHED {
                    continue;
                }
                if pres.iter().all(|&p| fact_level[p as usize] <= level) {
                    act_level[i] = level;
                    for &a in &self.act_adds[i] {
                        if fact_level[a as usize] == UNREACHED {
                            fact_level[a as usize] = level + 1;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                // Fixpoint without reaching every goal atom.
                if self.goal_atoms.iter().any(|&g| fact_level[g as usize] == UNREACHED) {
                    return f64::INFINITY;
                }
                break;
            }
            level += 1;
        }

        // Backward extraction: support each marked fact with the first adder
        // available one level earlier (deterministic by ground order).
        let max_level = self
            .goal_atoms
            .iter()
            .map(|&g| fact_level[g as usize])
            .max()
            .unwrap_or(0);
        let mut marked: Vec<Vec<u32>> = vec![Vec::new(); max_level as usize + 1];
        for &g in &self.goal_atoms {
            let l = fact_level[g as usize];
            if l > 0 {
                marked[l as usize].push(g);
            }
        }
        let mut chosen: HashSet<u32> = HashSet::new();
        for l in (1..=max_level as usize).rev() {
            let goals_here = std::mem::take(&mut marked[l]);
            for fact in goals_here {
                let supporter = self.adders[fact as usize]
                    .iter()
                    .copied()
                    .find(|&a| act_level[a as usize] == l as u32 - 1);
                let Some(a) = supporter else { continue };
                if !chosen.insert(a) {
                    continue;
                }
                for &p in &self.act_pres[a as usize] {
                    let pl = fact_level[p as usize] as usize;
                    if pl > 0 && pl < l && !marked[pl].contains(&p) {
                        marked[pl].push(p);
                    }
                }
            }
        }
        chosen.len() as f64
    }
}

/// Unsatisfied goal conjuncts weighted to dominate, a relaxed-plan estimate
/// of the remaining task steps, and an emotional-deficit term that rewards
/// lifting every child's PAD values above 0.5 (pre-emptive strategy work).
/// Zero exactly on goal states; infinite on provable dead ends.
pub fn heuristic(state: &TimedState, goal: &Goal) -> f64 {
    let unsat = goal
        .conditions
        .iter()
        .filter(|c| !holds(c, state).unwrap_or(false))
        .count();
    if unsat == 0 {
        return 0.0;
    }
    let mut h = 10.0 * unsat as f64 + goal.relaxed_plan_len(state);
    for pads in &goal.child_pads {
        let mut lowest = f64::INFINITY;
        for r in pads {
            match state.fluents.lookup(r) {
                Some(v) => lowest = lowest.min(v),
                None => {
                    lowest = f64::INFINITY;
                    break;
                }
            }
        }
        if lowest.is_finite() {
            h += (0.5 - lowest).max(0.0);
        }
    }
    h
}

/// Durations the search tries for an action: the fixed value, or the grid
/// multiples of the step up to and including an upper bound.
pub fn candidate_durations(
    action: &GroundAction,
    _state: &TimedState,
    cfg: &PlannerConfig,
) -> Vec<f64> {
    match action.duration {
        DurationConstraint::Fixed(d) => vec![d],
        DurationConstraint::UpperBounded(max) => {
            let mut out = Vec::new();
            let mut k = 1u32;
            loop {
                let d = cfg.duration_grid_step * f64::from(k);
                if d < max - 1e-9 {
                    out.push(d);
                    k += 1;
                } else {
                    break;
                }
            }
            out.push(max);
            out
        }
    }
}

struct NodeRec {
    state: TimedState,
    parent: usize,
    /// The start that created this node; `None` for the root and for
    /// advance-to-end nodes.
    step: Option<TimedAction>,
    g: f64,
    starts: usize,
}

struct OpenEntry {
    h: f64,
    g: f64,
    tie: u64,
    node: usize,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == std::cmp::Ordering::Equal
    }
}
impl Eq for OpenEntry {}
impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for OpenEntry {
    // Reversed so the max-heap pops the smallest (h, g, tie, node).
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .h
            .total_cmp(&self.h)
            .then(other.g.total_cmp(&self.g))
            .then(other.tie.cmp(&self.tie))
            .then(other.node.cmp(&self.node))
    }
}

fn tie_key(seed: u64, counter: u64) -> u64 {
    let mut h = std::collections::hash_map::DefaultHasher::new();
    (seed, counter).hash(&mut h);
    h.finish()
}

fn round_micro(v: f64) -> i64 {
    (v * 1e6).round() as i64
}

/// Duplicate-detection key: facts, fluents (rounded), and the agenda as
/// offsets relative to the current time. Absolute time is deliberately
/// excluded so a later revisit of an identical situation is pruned.
fn canonical_key(state: &TimedState) -> Vec<u8> {
    use std::fmt::Write;
    let mut s = String::new();
    for f in &state.facts {
        let _ = write!(s, "{f};");
    }
    s.push('|');
    for (r, v) in state.fluents.iter() {
        let _ = write!(s, "{r}={};", round_micro(v));
    }
    s.push('|');
    for p in &state.agenda {
        let _ = write!(
            s,
            "[{}@{}+{}]",
            p.action.signature(),
            round_micro(p.end_time - state.time),
            round_micro(p.duration)
        );
    }
    s.into_bytes()
}

/// Searches for a plan that reaches the goal with an empty agenda. The
/// returned plan is valid by construction: every transition goes through the
/// timed-state semantics.
pub fn plan(dom: &Domain, prob: &Problem, cfg: &PlannerConfig) -> Result<PlanOutcome, PlanError> {
    let deadline = Instant::now() + cfg.timeout;
    let actions: Vec<Arc<GroundAction>> = ground(dom, prob).into_iter().map(Arc::new).collect();
    let goal = Goal::new(dom, prob);
    let init = initial_state(prob);

    if goal.satisfied(&init)? {
        return Ok(PlanOutcome::Solved(Plan::default()));
    }
    let h0 = heuristic(&init, &goal);
    if h0.is_infinite() {
        // Some goal literal is unreachable even under delete relaxation.
        return Ok(PlanOutcome::Unsolvable);
    }

    let mut nodes: Vec<NodeRec> = Vec::new();
    let mut open: BinaryHeap<OpenEntry> = BinaryHeap::new();
    let mut closed: HashSet<Vec<u8>> = HashSet::new();
    let mut counter: u64 = 0;

    closed.insert(canonical_key(&init));
    nodes.push(NodeRec { state: init, parent: 0, step: None, g: 0.0, starts: 0 });
    open.push(OpenEntry { h: h0, g: 0.0, tie: tie_key(cfg.seed, 0), node: 0 });

    let stats = std::env::var_os("PADPLAN_STATS").is_some();
    if stats {
        eprintln!("h0={h0:.3} actions={}", actions.len());
    }
    let mut best_h = f64::INFINITY;
    let mut pops: u64 = 0;
    while let Some(entry) = open.pop() {
        if Instant::now() > deadline {
            return Ok(PlanOutcome::Timeout);
        }
        pops += 1;
        if stats && entry.h < best_h {
            best_h = entry.h;
            let step = nodes[entry.node].step.as_ref().map(|s| s.action.to_string());
            eprintln!("new best h={:.3} g={:.3} pops={} step={:?}", entry.h, entry.g, pops, step);
        }
        if stats && pops % 20_000 == 0 {
            eprintln!(
                "pops={} open={} closed={} h={:.3} g={:.3}",
                pops,
                open.len(),
                closed.len(),
                entry.h,
                entry.g
            );
        }
        let idx = entry.node;
        let state = nodes[idx].state.clone();
        let g = nodes[idx].g;
        let starts = nodes[idx].starts;

        if state.agenda.is_empty() && goal.satisfied(&state)? {
            return Ok(PlanOutcome::Solved(reconstruct(&nodes, idx)));
        }

        let push = |nodes: &mut Vec<NodeRec>,
                        open: &mut BinaryHeap<OpenEntry>,
                        closed: &mut HashSet<Vec<u8>>,
                        counter: &mut u64,
                        rec: NodeRec| {
            if !closed.insert(canonical_key(&rec.state)) {
                return;
            }
            let h = heuristic(&rec.state, &goal);
            if h.is_infinite() {
                return; // provable dead end
            }
            *counter += 1;
            let e = OpenEntry { h, g: rec.g, tie: tie_key(cfg.seed, *counter), node: nodes.len() };
            nodes.push(rec);
            open.push(e);
        };

        // Advance to the next scheduled end.
        if !state.agenda.is_empty() {
            match state.advance_to_next_end() {
                Ok((next, _)) => push(
                    &mut nodes,
                    &mut open,
                    &mut closed,
                    &mut counter,
                    NodeRec { state: next, parent: idx, step: None, g, starts },
                ),
                Err(StepError::Violation(_)) => {}
                Err(StepError::Eval(e)) => return Err(e.into()),
                Err(_) => {}
            }
        }

        // Start an action epsilon after the last event (at 0 for the first).
        let t = if starts == 0 { 0.0 } else { state.time + cfg.epsilon };
        if let Some(first) = state.agenda.first() {
            if t >= first.end_time - crate::state::TIME_SLACK {
                continue; // the pending end must be processed first
            }
        }
        for action in &actions {
            for d in candidate_durations(action, &state, cfg) {
                match state.apply_start(action, d, t) {
                    Ok(next) => {
                        let step = TimedAction {
                            start: t,
                            action: action.as_ref().into(),
                            duration: d,
                        };
                        push(
                            &mut nodes,
                            &mut open,
                            &mut closed,
                            &mut counter,
                            NodeRec {
                                state: next,
                                parent: idx,
                                step: Some(step),
                                g: g.max(t + d),
                                starts: starts + 1,
                            },
                        );
                    }
                    Err(StepError::Violation(_)) => {}
                    Err(StepError::Eval(e)) => return Err(e.into()),
                    Err(_) => {}
                }
            }
        }
    }
    Ok(PlanOutcome::Unsolvable)
}

fn reconstruct(nodes: &[NodeRec], mut idx: usize) -> Plan {
    let mut steps = Vec::new();
    loop {
        if let Some(step) = &nodes[idx].step {
            steps.push(step.clone());
        }
        if idx == nodes[idx].parent {
            break;
        }
        idx = nodes[idx].parent;
    }
    steps.reverse();
    Plan::new(steps)
}
