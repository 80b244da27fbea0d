//! Shared test support: a structured AST generator, randomized benchmark
//! instances, plan mutators, a from-scratch event-sweep plan checker, and a
//! breadth-first plan-existence oracle. The checkers here deliberately avoid
//! the library's replay machinery so they can disagree with it.

#![allow(dead_code)]

use padplan::emotion::{synthesize_domain, synthesize_problem, SynthesisConfig};
use padplan::grounding::{ground, ground_goal, GroundAction, GroundCondition, GroundExpr};
use padplan::pddl::*;
use padplan::plan::Plan;
use padplan::planner::candidate_durations;
use padplan::state::{initial_state, PadState, StepError, TimedState, ViolationKind};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn round2(v: f64) -> f64 {
    (v * 100.0).round() / 100.0
}

fn round3(v: f64) -> f64 {
    (v * 1000.0).round() / 1000.0
}

// ---- structured AST generator ----

pub struct GeneratedPair {
    pub domain: Domain,
    pub problem: Problem,
}

/// Builds a random well-typed domain/problem pair. Every output passes the
/// library's semantic validation by construction.
pub fn generate_pair(seed: u64) -> GeneratedPair {
    let mut r = rng(seed);
    let domain = generate_domain(&mut r);
    let problem = generate_problem(&mut r, &domain);
    validate_domain(&domain).expect("generator produced an invalid domain");
    validate_problem(&problem, &domain).expect("generator produced an invalid problem");
    GeneratedPair { domain, problem }
}

fn pick<'a, T>(r: &mut ChaCha8Rng, items: &'a [T]) -> &'a T {
    &items[r.random_range(0..items.len())]
}

fn maybe_capitalized(r: &mut ChaCha8Rng, base: String) -> String {
    if r.random_bool(0.15) {
        let mut c = base.chars();
        match c.next() {
            Some(f) => f.to_uppercase().collect::<String>() + c.as_str(),
            None => base,
        }
    } else {
        base
    }
}

fn generate_domain(r: &mut ChaCha8Rng) -> Domain {
    let n_types = r.random_range(1..=4usize);
    let mut types: Vec<TypeDecl> = Vec::new();
    for i in 0..n_types {
        let parent = if i > 0 && r.random_bool(0.3) {
            Some(types[r.random_range(0..i)].name.clone())
        } else {
            None
        };
        types.push(TypeDecl { name: format!("kind{i}"), parent });
    }
    let type_names: Vec<String> = types.iter().map(|t| t.name.clone()).collect();

    let constants: Vec<TypedIdent> = (0..r.random_range(0..=3usize))
        .map(|i| TypedIdent {
            name: maybe_capitalized(r, format!("konst{i}")),
            ty: pick(r, &type_names).clone(),
        })
        .collect();

    let predicates: Vec<PredicateDecl> = (0..r.random_range(1..=5usize))
        .map(|i| PredicateDecl {
            name: format!("pred{i}"),
            params: (0..r.random_range(0..=3usize))
                .map(|j| Param { name: format!("x{j}"), ty: pick(r, &type_names).clone() })
                .collect(),
        })
        .collect();

    let functions: Vec<FunctionDecl> = (0..r.random_range(0..=3usize))
        .map(|i| FunctionDecl {
            name: format!("fn{i}"),
            params: (0..r.random_range(0..=2usize))
                .map(|j| Param { name: format!("x{j}"), ty: pick(r, &type_names).clone() })
                .collect(),
        })
        .collect();

    let mut dom = Domain {
        name: maybe_capitalized(r, "generated-dom".to_string()),
        types,
        constants,
        predicates,
        functions,
        actions: Vec::new(),
    };

    let n_actions = r.random_range(1..=4usize);
    for i in 0..n_actions {
        if let Some(a) = generate_action(r, &dom, i) {
            dom.actions.push(a);
        }
    }
    dom
}

/// Arguments compatible with `ty`: parameters first, then constants.
fn arg_candidates(dom: &Domain, params: &[Param], ty: &str) -> Vec<Term> {
    let mut out: Vec<Term> = params
        .iter()
        .filter(|p| dom.is_subtype(&p.ty, ty))
        .map(|p| Term::Var(p.name.clone()))
        .collect();
    out.extend(
        dom.constants
            .iter()
            .filter(|c| dom.is_subtype(&c.ty, ty))
            .map(|c| Term::Obj(c.name.clone())),
    );
    out
}

fn generate_atom(r: &mut ChaCha8Rng, dom: &Domain, params: &[Param]) -> Option<Atom> {
    for _ in 0..8 {
        let pred = pick(r, &dom.predicates);
        let mut args = Vec::new();
        let mut ok = true;
        for p in &pred.params {
            let cands = arg_candidates(dom, params, &p.ty);
            if cands.is_empty() {
                ok = false;
                break;
            }
            args.push(pick(r, &cands).clone());
        }
        if ok {
            return Some(Atom { pred: pred.name.clone(), args });
        }
    }
    None
}

fn generate_fluent(r: &mut ChaCha8Rng, dom: &Domain, params: &[Param]) -> Option<FluentExpr> {
    if dom.functions.is_empty() {
        return None;
    }
    for _ in 0..8 {
        let func = pick(r, &dom.functions);
        let mut args = Vec::new();
        let mut ok = true;
        for p in &func.params {
            let cands = arg_candidates(dom, params, &p.ty);
            if cands.is_empty() {
                ok = false;
                break;
            }
            args.push(pick(r, &cands).clone());
        }
        if ok {
            return Some(FluentExpr { func: func.name.clone(), args });
        }
    }
    None
}

fn generate_expr(
    r: &mut ChaCha8Rng,
    dom: &Domain,
    params: &[Param],
    depth: usize,
    allow_duration: bool,
) -> NumericExpr {
    let roll = r.random_range(0..10u32);
    if depth == 0 || roll < 4 {
        return NumericExpr::Constant(round3(r.random_range(-4.0..4.0)));
    }
    if roll < 6 && allow_duration {
        return NumericExpr::Duration;
    }
    if roll < 8 {
        if let Some(f) = generate_fluent(r, dom, params) {
            return NumericExpr::Fluent(f);
        }
        return NumericExpr::Constant(round3(r.random_range(0.0..2.0)));
    }
    let op = *pick(r, &[BinOp::Add, BinOp::Sub, BinOp::Mul]);
    NumericExpr::Binary {
        op,
        lhs: Box::new(generate_expr(r, dom, params, depth - 1, allow_duration)),
        rhs: Box::new(generate_expr(r, dom, params, depth - 1, allow_duration)),
    }
}

fn generate_action(r: &mut ChaCha8Rng, dom: &Domain, idx: usize) -> Option<DurativeAction> {
    let type_names: Vec<String> = dom.types.iter().map(|t| t.name.clone()).collect();
    let params: Vec<Param> = (0..r.random_range(0..=3usize))
        .map(|j| Param { name: format!("a{j}"), ty: pick(r, &type_names).clone() })
        .collect();
    let duration = if r.random_bool(0.5) {
        DurationConstraint::Fixed(round2(r.random_range(0.5..60.0)))
    } else {
        DurationConstraint::UpperBounded(round2(r.random_range(0.5..60.0)))
    };

    let mut conditions = Vec::new();
    for _ in 0..r.random_range(0..=4usize) {
        let spec = *pick(
            r,
            &[TimeSpecifier::AtStart, TimeSpecifier::OverAll, TimeSpecifier::AtEnd],
        );
        let cond = if r.random_bool(0.6) {
            match generate_atom(r, dom, &params) {
                Some(atom) => Condition::Literal { atom, positive: r.random_bool(0.8) },
                None => continue,
            }
        } else {
            Condition::Comparison {
                op: *pick(r, &[CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq]),
                lhs: generate_expr(r, dom, &params, 2, false),
                rhs: generate_expr(r, dom, &params, 2, false),
            }
        };
        conditions.push((spec, cond));
    }

    let mut effects: Vec<(TimeSpecifier, Effect)> = Vec::new();
    for _ in 0..r.random_range(0..=4usize) {
        let spec = *pick(r, &[TimeSpecifier::AtStart, TimeSpecifier::AtEnd]);
        let eff = if r.random_bool(0.6) {
            let Some(atom) = generate_atom(r, dom, &params) else { continue };
            let delete = r.random_bool(0.4);
            // Avoid contradictory simultaneous effects on the same literal.
            let clashes = effects.iter().any(|(s, e)| {
                *s == spec
                    && match e {
                        Effect::Add(a) => delete && *a == atom,
                        Effect::Delete(a) => !delete && *a == atom,
                        _ => false,
                    }
            });
            if clashes {
                continue;
            }
            if delete {
                Effect::Delete(atom)
            } else {
                Effect::Add(atom)
            }
        } else {
            let Some(fluent) = generate_fluent(r, dom, &params) else { continue };
            Effect::Numeric {
                op: *pick(r, &[NumOp::Increase, NumOp::Decrease, NumOp::Assign]),
                fluent,
                amount: generate_expr(r, dom, &params, 2, true),
            }
        };
        effects.push((spec, eff));
    }

    Some(DurativeAction {
        name: format!("op{idx}"),
        params,
        duration,
        conditions,
        effects,
    })
}

fn generate_problem(r: &mut ChaCha8Rng, dom: &Domain) -> Problem {
    let type_names: Vec<String> = dom.types.iter().map(|t| t.name.clone()).collect();
    let objects: Vec<TypedIdent> = (0..r.random_range(1..=6usize))
        .map(|i| TypedIdent {
            name: maybe_capitalized(r, format!("obj{i}")),
            ty: pick(r, &type_names).clone(),
        })
        .collect();

    let named: Vec<TypedIdent> = dom.constants.iter().chain(objects.iter()).cloned().collect();
    let of_type = |ty: &str| -> Vec<&TypedIdent> {
        named.iter().filter(|o| dom.is_subtype(&o.ty, ty)).collect()
    };

    let mut init_facts: Vec<GroundAtom> = Vec::new();
    let mut seen = HashSet::new();
    for pred in &dom.predicates {
        for _ in 0..r.random_range(0..=2u32) {
            let mut args = Vec::new();
            let mut ok = true;
            for p in &pred.params {
                let cands = of_type(&p.ty);
                if cands.is_empty() {
                    ok = false;
                    break;
                }
                args.push(pick(r, &cands).name.clone());
            }
            if !ok {
                continue;
            }
            let atom = GroundAtom { pred: pred.name.clone(), args };
            if seen.insert(atom.clone()) {
                init_facts.push(atom);
            }
        }
    }

    let mut init_fluents: Vec<(FluentRef, f64)> = Vec::new();
    let mut assigned = HashSet::new();
    for func in &dom.functions {
        for _ in 0..r.random_range(0..=2u32) {
            let mut args = Vec::new();
            let mut ok = true;
            for p in &func.params {
                let cands = of_type(&p.ty);
                if cands.is_empty() {
                    ok = false;
                    break;
                }
                args.push(pick(r, &cands).name.clone());
            }
            if !ok {
                continue;
            }
            let fl = FluentRef { func: func.name.clone(), args };
            if assigned.insert(fl.clone()) {
                init_fluents.push((fl, round3(r.random_range(-5.0..5.0))));
            }
        }
    }

    let mut goal = Vec::new();
    for _ in 0..r.random_range(1..=3usize) {
        if r.random_bool(0.7) || init_fluents.is_empty() {
            let Some(atom) = ground_atom_for_goal(r, dom, &of_type) else { continue };
            goal.push(Condition::Literal { atom, positive: r.random_bool(0.8) });
        } else {
            let (fl, _) = pick(r, &init_fluents).clone();
            goal.push(Condition::Comparison {
                op: *pick(r, &[CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq]),
                lhs: NumericExpr::Fluent(FluentExpr {
                    func: fl.func.clone(),
                    args: fl.args.iter().map(|a| Term::Obj(a.clone())).collect(),
                }),
                rhs: NumericExpr::Constant(round3(r.random_range(-4.0..4.0))),
            });
        }
    }
    if goal.is_empty() {
        // Nothing instantiable; a constant comparison is always a valid
        // ground conjunct.
        goal.push(Condition::Comparison {
            op: CmpOp::Ge,
            lhs: NumericExpr::Constant(1.0),
            rhs: NumericExpr::Constant(0.0),
        });
    }

    Problem {
        name: "generated-prob".to_string(),
        domain_name: dom.name.clone(),
        objects,
        init_facts,
        init_fluents,
        goal,
    }
}

fn ground_atom_for_goal(
    r: &mut ChaCha8Rng,
    dom: &Domain,
    of_type: &dyn Fn(&str) -> Vec<&TypedIdent>,
) -> Option<Atom> {
    for _ in 0..8 {
        let pred = pick(r, &dom.predicates);
        let mut args = Vec::new();
        let mut ok = true;
        for p in &pred.params {
            let cands = of_type(&p.ty);
            if cands.is_empty() {
                ok = false;
                break;
            }
            args.push(Term::Obj(pick(r, &cands).name.clone()));
        }
        if ok {
            return Some(Atom { pred: pred.name.clone(), args });
        }
    }
    None
}

// ---- randomized benchmark-family instances ----

pub struct FuzzInstance {
    pub domain: Domain,
    pub problem: Problem,
    /// Set when the instance was built around an unreachable goal.
    pub rigged_unsolvable: bool,
}

pub fn generate_instance(seed: u64) -> FuzzInstance {
    let mut r = rng(seed);
    let rigged = r.random_bool(0.2);
    let (children, toys) = if rigged {
        (1usize, r.random_range(1..=2usize))
    } else {
        (r.random_range(1..=3usize), r.random_range(1..=4usize))
    };
    let cfg = SynthesisConfig { children, ..SynthesisConfig::default() };
    let pads: Vec<PadState> = (0..children)
        .map(|_| {
            PadState::new(
                round2(r.random_range(0.0..1.0)),
                round2(r.random_range(0.0..1.0)),
                round2(r.random_range(0.0..1.0)),
            )
        })
        .collect();
    let domain = synthesize_domain(&cfg);
    let mut problem = synthesize_problem(toys, &pads);
    if rigged {
        // A box that exists but is never placed anywhere: tidy can never
        // target it, so the extra goal conjunct is unreachable.
        problem.objects.push(TypedIdent { name: "box2".to_string(), ty: "box".to_string() });
        problem.goal.push(Condition::Literal {
            atom: Atom {
                pred: "in_box".to_string(),
                args: vec![Term::Obj("box2".to_string()), Term::Obj("toy1".to_string())],
            },
            positive: true,
        });
    }
    FuzzInstance { domain, problem, rigged_unsolvable: rigged }
}

// ---- plan mutators ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    /// Remove the last tidy: its goal conjunct loses support.
    DropTidy,
    /// Swap the start times of the first action and the last tidy: the tidy
    /// runs first, before anything is held or classified.
    SwapFirstWithLastTidy,
    /// Halve the duration of the first fixed-duration action.
    ShrinkFixedDuration,
    /// Pull the second action's start back by epsilon/2.
    PerturbStartBackward,
}

pub const ALL_MUTATIONS: [Mutation; 4] = [
    Mutation::DropTidy,
    Mutation::SwapFirstWithLastTidy,
    Mutation::ShrinkFixedDuration,
    Mutation::PerturbStartBackward,
];

/// Applies a mutation known to invalidate any plan this toolkit's planner
/// produces for the toy-sorting family. Returns `None` when the plan lacks
/// the required structure.
pub fn mutate(plan: &Plan, dom: &Domain, mutation: Mutation, epsilon: f64) -> Option<Plan> {
    let mut actions = plan.actions.clone();
    match mutation {
        Mutation::DropTidy => {
            let idx = actions.iter().rposition(|a| a.action.name == "tidy")?;
            actions.remove(idx);
        }
        Mutation::SwapFirstWithLastTidy => {
            let idx = actions.iter().rposition(|a| a.action.name == "tidy")?;
            if idx == 0 {
                return None;
            }
            let first_start = actions[0].start;
            let tidy_start = actions[idx].start;
            actions[0].start = tidy_start;
            actions[idx].start = first_start;
        }
        Mutation::ShrinkFixedDuration => {
            let idx = actions.iter().position(|a| {
                matches!(
                    dom.action(&a.action.name).map(|s| &s.duration),
                    Some(DurationConstraint::Fixed(_))
                )
            })?;
            actions[idx].duration /= 2.0;
        }
        Mutation::PerturbStartBackward => {
            if actions.len() < 2 {
                return None;
            }
            actions[1].start -= epsilon / 2.0;
        }
    }
    Some(Plan::new(actions))
}

// ---- independent event-sweep checker ----

/// Verdict of the from-scratch checker: either valid, or the time and kind
/// of the first violation.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepVerdict {
    Valid,
    Invalid { time: f64, kind: ViolationKind },
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum EvKind {
    End,
    Start,
}

/// Replays a plan by sorting all 2n start/end events and checking every
/// condition at every event, against its own fact-set/valuation model. This
/// duplicates the library semantics on purpose; agreement with the replay
/// validator is asserted by the acceptance suite.
pub fn sweep_check(dom: &Domain, prob: &Problem, plan: &Plan, epsilon: f64) -> SweepVerdict {
    let ground_actions = ground(dom, prob);
    let index: HashMap<(String, Vec<String>), &GroundAction> = ground_actions
        .iter()
        .map(|a| ((a.schema.clone(), a.args.clone()), a))
        .collect();

    #[derive(Clone, Copy)]
    struct Ev {
        time: f64,
        kind: EvKind,
        plan_idx: usize,
    }
    let mut events: Vec<Ev> = Vec::new();
    for (i, a) in plan.actions.iter().enumerate() {
        events.push(Ev { time: a.start, kind: EvKind::Start, plan_idx: i });
        events.push(Ev { time: a.start + a.duration, kind: EvKind::End, plan_idx: i });
    }
    // Ends sort before starts at equal times; equal ends keep start order.
    events.sort_by(|a, b| {
        a.time
            .total_cmp(&b.time)
            .then_with(|| match (a.kind, b.kind) {
                (EvKind::End, EvKind::Start) => std::cmp::Ordering::Less,
                (EvKind::Start, EvKind::End) => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Equal,
            })
            .then(a.plan_idx.cmp(&b.plan_idx))
    });

    let mut facts: HashSet<GroundAtom> = prob.init_facts.iter().cloned().collect();
    let mut fluents: HashMap<FluentRef, f64> = prob.init_fluents.iter().cloned().collect();
    let mut running: Vec<usize> = Vec::new(); // plan indices
    let mut last_event: Option<f64> = None;

    fn eval(e: &GroundExpr, fl: &HashMap<FluentRef, f64>, dur: Option<f64>) -> Option<f64> {
        Some(match e {
            GroundExpr::Constant(c) => *c,
            GroundExpr::Fluent(r) => *fl.get(r)?,
            GroundExpr::Duration => dur?,
            GroundExpr::Binary { op, lhs, rhs } => {
                let l = eval(lhs, fl, dur)?;
                let r = eval(rhs, fl, dur)?;
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        if r == 0.0 {
                            return None;
                        }
                        l / r
                    }
                }
            }
        })
    }
    let check = |c: &GroundCondition,
                 facts: &HashSet<GroundAtom>,
                 fluents: &HashMap<FluentRef, f64>|
     -> bool {
        match c {
            GroundCondition::Literal { atom, positive } => facts.contains(atom) == *positive,
            GroundCondition::Comparison { op, lhs, rhs } => {
                match (eval(lhs, fluents, None), eval(rhs, fluents, None)) {
                    (Some(l), Some(r)) => op.eval(l, r),
                    _ => false,
                }
            }
        }
    };
    let apply = |effs: Vec<&padplan::grounding::GroundEffect>,
                 dur: f64,
                 facts: &mut HashSet<GroundAtom>,
                 fluents: &mut HashMap<FluentRef, f64>| {
        for e in effs {
            match e {
                padplan::grounding::GroundEffect::Add(a) => {
                    facts.insert(a.clone());
                }
                padplan::grounding::GroundEffect::Delete(a) => {
                    facts.remove(a);
                }
                padplan::grounding::GroundEffect::Numeric { op, fluent, amount } => {
                    let Some(v) = eval(amount, fluents, Some(dur)) else { continue };
                    let cur = fluents.get(fluent).copied();
                    let newv = match op {
                        NumOp::Assign => Some(v),
                        NumOp::Increase => cur.map(|c| c + v),
                        NumOp::Decrease => cur.map(|c| c - v),
                    };
                    if let Some(mut nv) = newv {
                        if fluent.is_pad() {
                            nv = nv.clamp(-1.0, 1.0);
                        }
                        fluents.insert(fluent.clone(), nv);
                    }
                }
            }
        }
    };

    for ev in &events {
        let timed = &plan.actions[ev.plan_idx];
        match ev.kind {
            EvKind::Start => {
                if let Some(prev) = last_event {
                    if timed.start < prev + epsilon - 1e-9 {
                        return SweepVerdict::Invalid {
                            time: timed.start,
                            kind: ViolationKind::EpsilonViolation,
                        };
                    }
                }
                last_event = Some(timed.start);
                let Some(action) =
                    index.get(&(timed.action.name.clone(), timed.action.args.clone()))
                else {
                    return SweepVerdict::Invalid {
                        time: timed.start,
                        kind: ViolationKind::UnknownAction,
                    };
                };
                if !action.duration.admits(timed.duration) {
                    return SweepVerdict::Invalid {
                        time: timed.start,
                        kind: ViolationKind::DurationOutOfBounds,
                    };
                }
                for c in action.conditions_at(TimeSpecifier::AtStart) {
                    if !check(c, &facts, &fluents) {
                        return SweepVerdict::Invalid {
                            time: timed.start,
                            kind: ViolationKind::UnsatisfiedAtStart,
                        };
                    }
                }
                apply(
                    action.effects_at(TimeSpecifier::AtStart).collect(),
                    timed.duration,
                    &mut facts,
                    &mut fluents,
                );
                for c in action.conditions_at(TimeSpecifier::OverAll) {
                    if !check(c, &facts, &fluents) {
                        return SweepVerdict::Invalid {
                            time: timed.start,
                            kind: ViolationKind::UnsatisfiedOverAll,
                        };
                    }
                }
                for &other in &running {
                    let oa = index
                        .get(&(plan.actions[other].action.name.clone(), plan.actions[other].action.args.clone()))
                        .expect("running action was resolved at its start");
                    for c in oa.conditions_at(TimeSpecifier::OverAll) {
                        if !check(c, &facts, &fluents) {
                            return SweepVerdict::Invalid {
                                time: timed.start,
                                kind: ViolationKind::UnsatisfiedOverAll,
                            };
                        }
                    }
                }
                running.push(ev.plan_idx);
            }
            EvKind::End => {
                let end_time = timed.start + timed.duration;
                last_event = Some(end_time);
                running.retain(|&i| i != ev.plan_idx);
                let action = index
                    .get(&(timed.action.name.clone(), timed.action.args.clone()))
                    .expect("running action was resolved at its start");
                for c in action.conditions_at(TimeSpecifier::OverAll) {
                    if !check(c, &facts, &fluents) {
                        return SweepVerdict::Invalid {
                            time: end_time,
                            kind: ViolationKind::UnsatisfiedOverAll,
                        };
                    }
                }
                for c in action.conditions_at(TimeSpecifier::AtEnd) {
                    if !check(c, &facts, &fluents) {
                        return SweepVerdict::Invalid {
                            time: end_time,
                            kind: ViolationKind::UnsatisfiedAtEnd,
                        };
                    }
                }
                apply(
                    action.effects_at(TimeSpecifier::AtEnd).collect(),
                    timed.duration,
                    &mut facts,
                    &mut fluents,
                );
                for &other in &running {
                    let ot = &plan.actions[other];
                    if ot.start + ot.duration <= end_time + 1e-9 {
                        continue; // ends at this very instant; its own event checks it
                    }
                    let oa = index
                        .get(&(ot.action.name.clone(), ot.action.args.clone()))
                        .expect("running action was resolved at its start");
                    for c in oa.conditions_at(TimeSpecifier::OverAll) {
                        if !check(c, &facts, &fluents) {
                            return SweepVerdict::Invalid {
                                time: end_time,
                                kind: ViolationKind::UnsatisfiedOverAll,
                            };
                        }
                    }
                }
            }
        }
    }

    for c in ground_goal(prob) {
        if !check(&c, &facts, &fluents) {
            return SweepVerdict::Invalid {
                time: plan.makespan(),
                kind: ViolationKind::GoalUnsatisfied,
            };
        }
    }
    SweepVerdict::Valid
}

// ---- breadth-first plan-existence oracle ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleVerdict {
    PlanFound,
    /// The reachable space (up to the depth bound) holds no goal state.
    Exhausted,
    /// Node cap hit before exhausting; no plan was found up to that point.
    CapHit,
}

/// Depth-bounded breadth-first enumeration over the decision-epoch successor
/// relation. Depth counts action starts.
pub fn bfs_plan_exists(
    dom: &Domain,
    prob: &Problem,
    max_starts: usize,
    node_cap: usize,
) -> OracleVerdict {
    let actions: Vec<Arc<GroundAction>> = ground(dom, prob).into_iter().map(Arc::new).collect();
    let goal = ground_goal(prob);
    let cfg = padplan::planner::PlannerConfig::default();
    let epsilon = cfg.epsilon;

    let goal_holds = |s: &TimedState| -> bool {
        goal.iter().all(|c| padplan::state::holds(c, s).unwrap_or(false))
    };

    let key_of = |s: &TimedState| -> String {
        use std::fmt::Write;
        let mut k = String::new();
        for f in &s.facts {
            let _ = write!(k, "{f};");
        }
        for (r, v) in s.fluents.iter() {
            let _ = write!(k, "{r}={};", (v * 1e6).round() as i64);
        }
        for p in &s.agenda {
            let _ = write!(
                k,
                "[{}@{}]",
                p.action.signature(),
                ((p.end_time - s.time) * 1e6).round() as i64
            );
        }
        k
    };

    let init = initial_state(prob);
    if goal_holds(&init) {
        return OracleVerdict::PlanFound;
    }
    let mut queue: VecDeque<(TimedState, usize)> = VecDeque::new();
    let mut seen: HashSet<String> = HashSet::new();
    seen.insert(key_of(&init));
    queue.push_back((init, 0));
    let mut visited = 0usize;

    while let Some((state, starts)) = queue.pop_front() {
        visited += 1;
        if visited > node_cap {
            return OracleVerdict::CapHit;
        }
        if state.agenda.is_empty() && goal_holds(&state) {
            return OracleVerdict::PlanFound;
        }
        if !state.agenda.is_empty() {
            if let Ok((next, _)) = state.advance_to_next_end() {
                if next.agenda.is_empty() && goal_holds(&next) {
                    return OracleVerdict::PlanFound;
                }
                if seen.insert(key_of(&next)) {
                    queue.push_back((next, starts));
                }
            }
        }
        if starts >= max_starts {
            continue;
        }
        let t = if starts == 0 { 0.0 } else { state.time + epsilon };
        if let Some(first) = state.agenda.first() {
            if t >= first.end_time - 1e-9 {
                continue;
            }
        }
        for action in &actions {
            for d in candidate_durations(action, &state, &cfg) {
                match state.apply_start(action, d, t) {
                    Ok(next) => {
                        if seen.insert(key_of(&next)) {
                            queue.push_back((next, starts + 1));
                        }
                    }
                    Err(StepError::Violation(_)) => {}
                    Err(_) => {}
                }
            }
        }
    }
    OracleVerdict::Exhausted
}
