//! The PAD emotion model: classification of (pleasure, arousal, dominance)
//! triples into discrete emotions, per-second effect rates for the robot's
//! social strategies, and the generator that emits the bundled toy-sorting
//! domain and problem as PDDL.
//!
//! Rate calibration: `+` is +0.01/s and `-` is -0.02/s (read off the one
//! fully specified strategy action), with `++`/`--` doubling those
//! magnitudes. Negative entries are twice as strong as positive ones.

use crate::pddl::*;
use crate::state::PadState;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EmotionLabel {
    Distress,
    Sadness,
    Boredom,
    Happiness,
    /// PAD pattern outside the four modelled emotions, or a component
    /// exactly at the low/high cut.
    Unclassified,
}

impl EmotionLabel {
    pub const MODELLED: [EmotionLabel; 4] = [
        EmotionLabel::Distress,
        EmotionLabel::Sadness,
        EmotionLabel::Boredom,
        EmotionLabel::Happiness,
    ];

    /// The (pleasure, arousal, dominance) pattern defining the emotion:
    /// `Some(true)` means high (above the cut), `Some(false)` low (below),
    /// `None` unconstrained.
    pub fn pattern(self) -> Option<[Option<bool>; 3]> {
        match self {
            EmotionLabel::Distress => Some([Some(false), Some(true), Some(true)]),
            EmotionLabel::Sadness => Some([Some(false), Some(false), Some(true)]),
            EmotionLabel::Boredom => Some([Some(false), Some(false), Some(false)]),
            EmotionLabel::Happiness => Some([Some(true), None, Some(true)]),
            EmotionLabel::Unclassified => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EmotionLabel::Distress => "distress",
            EmotionLabel::Sadness => "sadness",
            EmotionLabel::Boredom => "boredom",
            EmotionLabel::Happiness => "happiness",
            EmotionLabel::Unclassified => "unclassified",
        }
    }
}

impl std::fmt::Display for EmotionLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Give the child time to settle into the situation.
    Accommodate,
    /// Keep a positive child engaged.
    Maintain,
    /// Actively push toward a positive state.
    Improve,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Accommodate, Strategy::Maintain, Strategy::Improve];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Accommodate => "accommodate",
            Strategy::Maintain => "maintain",
            Strategy::Improve => "improve",
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EmotionError {
    #[error("no strategy rates are defined for unclassified PAD states")]
    UnclassifiedEmotion,
    #[error("duration must be strictly positive")]
    NonPositiveDuration,
}

/// Per-second PAD change rates of a strategy applied to an emotion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateVector {
    pub dp: f64,
    pub da: f64,
    pub dd: f64,
}

/// Classification thresholds: `low_high_cut` separates low from high
/// components, `hard_floor` is the non-negativity bound task actions demand
/// of every child.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub low_high_cut: f64,
    pub hard_floor: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds { low_high_cut: 0.5, hard_floor: 0.0 }
    }
}

/// Strict-threshold pattern match: low means strictly below the cut, high
/// strictly above. A component exactly at the cut matches neither, so such
/// states are `Unclassified`.
pub fn classify(pad: PadState, th: Thresholds) -> EmotionLabel {
    let comps = [pad.pleasure, pad.arousal, pad.dominance];
    for label in EmotionLabel::MODELLED {
        let pattern = label.pattern().unwrap();
        let matches = comps.iter().zip(pattern).all(|(v, want)| match want {
            Some(true) => *v > th.low_high_cut,
            Some(false) => *v < th.low_high_cut,
            None => true,
        });
        if matches {
            return label;
        }
    }
    EmotionLabel::Unclassified
}

/// Sign table of strategy effects, mapped through the rate calibration.
pub fn strategy_rates(s: Strategy, e: EmotionLabel) -> Result<RateVector, EmotionError> {
    const P: f64 = 0.01; // `+`
    const PP: f64 = 0.02; // `++`
    const N: f64 = -0.02; // `-`
    const NN: f64 = -0.04; // `--`
    let (dp, da, dd) = match (s, e) {
        (_, EmotionLabel::Unclassified) => return Err(EmotionError::UnclassifiedEmotion),
        (Strategy::Accommodate, EmotionLabel::Distress) => (P, N, 0.0),
        (Strategy::Accommodate, EmotionLabel::Sadness) => (P, 0.0, 0.0),
        (Strategy::Accommodate, _) => (0.0, 0.0, 0.0),
        (Strategy::Maintain, EmotionLabel::Happiness) => (0.0, N, 0.0),
        (Strategy::Maintain, _) => (0.0, 0.0, 0.0),
        (Strategy::Improve, EmotionLabel::Distress) => (PP, NN, 0.0),
        (Strategy::Improve, EmotionLabel::Sadness) => (PP, 0.0, 0.0),
        (Strategy::Improve, EmotionLabel::Boredom) => (P, P, P),
        (Strategy::Improve, EmotionLabel::Happiness) => (0.0, 0.0, 0.0),
    };
    Ok(RateVector { dp, da, dd })
}

/// Component-wise rate x duration, before clamping.
pub fn expected_delta(
    s: Strategy,
    e: EmotionLabel,
    duration: f64,
) -> Result<(f64, f64, f64), EmotionError> {
    if duration <= 0.0 {
        return Err(EmotionError::NonPositiveDuration);
    }
    let r = strategy_rates(s, e)?;
    Ok((r.dp * duration, r.da * duration, r.dd * duration))
}

/// Splits a strategy action name like `improve-sadness` into its parts.
/// Returns `None` for names that do not target one of the modelled emotions.
pub fn strategy_parts(action_name: &str) -> Option<(Strategy, EmotionLabel)> {
    let (s, e) = action_name.split_once('-')?;
    let strategy = Strategy::ALL.into_iter().find(|k| k.name() == s)?;
    let emotion = EmotionLabel::MODELLED.into_iter().find(|k| k.name() == e)?;
    Some((strategy, emotion))
}

/// Knobs of the domain generator.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisConfig {
    pub children: usize,
    pub thresholds: Thresholds,
    /// Per-second pleasure/arousal loss inflicted on every child by the
    /// robot's task actions (move, classify, pickup, tidy).
    pub degradation_rate: f64,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            children: 3,
            thresholds: Thresholds::default(),
            degradation_rate: 0.001,
        }
    }
}

pub const DOMAIN_NAME: &str = "squirrel_emotion";
pub const PROBLEM_NAME: &str = "squirrel_emotion_problem";

/// The bundled benchmark's initial PAD triples for its three children.
pub fn benchmark_pads() -> Vec<PadState> {
    vec![
        PadState::new(0.4, 0.4, 0.45),
        PadState::new(1.0, 1.0, 1.0),
        PadState::new(0.83, 0.98, 0.6),
    ]
}

pub fn child_name(i: usize) -> String {
    format!("c{}", i + 1)
}

fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

fn obj(name: &str) -> Term {
    Term::Obj(name.to_string())
}

fn lit(pred: &str, args: Vec<Term>) -> Atom {
    Atom { pred: pred.to_string(), args }
}

fn fluent(func: &str, args: Vec<Term>) -> FluentExpr {
    FluentExpr { func: func.to_string(), args }
}

fn cmp(op: CmpOp, f: FluentExpr, c: f64) -> Condition {
    Condition::Comparison {
        op,
        lhs: NumericExpr::Fluent(f),
        rhs: NumericExpr::Constant(c),
    }
}

fn rate_effect(func: &str, args: Vec<Term>, rate: f64) -> Effect {
    Effect::Numeric {
        op: if rate >= 0.0 { NumOp::Increase } else { NumOp::Decrease },
        fluent: fluent(func, args),
        amount: NumericExpr::Binary {
            op: BinOp::Mul,
            lhs: Box::new(NumericExpr::Duration),
            rhs: Box::new(NumericExpr::Constant(rate.abs())),
        },
    }
}

const PAD_DIMS: [&str; 3] = ["pleasure", "arousal", "dominance"];

fn strategy_action(s: Strategy, e: EmotionLabel, duration: DurationConstraint, cut: f64) -> DurativeAction {
    use TimeSpecifier::*;
    let mut conditions = Vec::new();
    let pattern = e.pattern().expect("modelled emotion");
    for (dim, want) in PAD_DIMS.iter().zip(pattern) {
        if let Some(high) = want {
            let op = if high { CmpOp::Gt } else { CmpOp::Lt };
            conditions.push((AtStart, cmp(op, fluent(dim, vec![var("c")]), cut)));
        }
    }
    conditions.push((
        AtStart,
        Condition::Literal { atom: lit("not_busy", vec![]), positive: true },
    ));

    let mut effects = vec![
        (AtStart, Effect::Delete(lit("not_busy", vec![]))),
        (AtEnd, Effect::Add(lit("not_busy", vec![]))),
    ];
    let rates = strategy_rates(s, e).expect("modelled emotion");
    for (dim, rate) in PAD_DIMS.iter().zip([rates.dp, rates.da, rates.dd]) {
        if rate != 0.0 {
            effects.push((AtEnd, rate_effect(dim, vec![var("c")], rate)));
        }
    }

    DurativeAction {
        name: format!("{}-{}", s.name(), e.name()),
        params: vec![Param { name: "c".to_string(), ty: "child".to_string() }],
        duration,
        conditions,
        effects,
    }
}

/// Shared scaffolding of the robot's task actions: the busy semaphore, a
/// non-negativity guard on every child's PAD values over the whole interval,
/// and the per-second pleasure/arousal degradation applied at the end.
fn task_action(
    name: &str,
    params: Vec<Param>,
    duration: f64,
    mut conditions: Vec<(TimeSpecifier, Condition)>,
    mut effects: Vec<(TimeSpecifier, Effect)>,
    cfg: &SynthesisConfig,
) -> DurativeAction {
    use TimeSpecifier::*;
    conditions.push((
        AtStart,
        Condition::Literal { atom: lit("not_busy", vec![]), positive: true },
    ));
    for i in 0..cfg.children {
        let c = child_name(i);
        for dim in PAD_DIMS {
            conditions.push((
                OverAll,
                cmp(CmpOp::Ge, fluent(dim, vec![obj(&c)]), cfg.thresholds.hard_floor),
            ));
        }
    }
    effects.insert(0, (AtStart, Effect::Delete(lit("not_busy", vec![]))));
    effects.insert(1, (AtEnd, Effect::Add(lit("not_busy", vec![]))));
    if cfg.degradation_rate > 0.0 {
        for i in 0..cfg.children {
            let c = child_name(i);
            for dim in ["pleasure", "arousal"] {
                effects.push((AtEnd, rate_effect(dim, vec![obj(&c)], -cfg.degradation_rate)));
            }
        }
    }
    DurativeAction {
        name: name.to_string(),
        params,
        duration: DurationConstraint::Fixed(duration),
        conditions,
        effects,
    }
}

fn p(name: &str, ty: &str) -> Param {
    Param { name: name.to_string(), ty: ty.to_string() }
}

/// Emits the full reconstructed domain: six strategy actions, the social
/// give-me-the-toy action, and the four task actions.
pub fn synthesize_domain(cfg: &SynthesisConfig) -> Domain {
    use TimeSpecifier::*;
    let cut = cfg.thresholds.low_high_cut;

    let mut actions = vec![
        strategy_action(
            Strategy::Accommodate,
            EmotionLabel::Distress,
            DurationConstraint::UpperBounded(30.0),
            cut,
        ),
        strategy_action(
            Strategy::Improve,
            EmotionLabel::Distress,
            DurationConstraint::Fixed(30.0),
            cut,
        ),
        strategy_action(
            Strategy::Accommodate,
            EmotionLabel::Sadness,
            DurationConstraint::UpperBounded(30.0),
            cut,
        ),
        strategy_action(
            Strategy::Improve,
            EmotionLabel::Sadness,
            DurationConstraint::Fixed(10.0),
            cut,
        ),
        strategy_action(
            Strategy::Improve,
            EmotionLabel::Boredom,
            DurationConstraint::Fixed(10.0),
            cut,
        ),
        strategy_action(
            Strategy::Maintain,
            EmotionLabel::Happiness,
            DurationConstraint::Fixed(10.0),
            cut,
        ),
    ];

    // kid_give: the child hands the robot an object; contributes to the task
    // and lifts all three PAD values of the helping child.
    let kid_give = DurativeAction {
        name: "kid_give".to_string(),
        params: vec![
            p("c", "child"),
            p("v", "robot"),
            p("o", "object"),
            p("robot_wp", "waypoint"),
            p("object_wp", "waypoint"),
        ],
        duration: DurationConstraint::Fixed(60.0),
        conditions: vec![
            (
                OverAll,
                Condition::Literal {
                    atom: lit("robot_at", vec![var("v"), var("robot_wp")]),
                    positive: true,
                },
            ),
            (
                AtStart,
                Condition::Literal {
                    atom: lit("gripper_empty", vec![var("v")]),
                    positive: true,
                },
            ),
            (
                AtStart,
                Condition::Literal {
                    atom: lit("object_at", vec![var("o"), var("object_wp")]),
                    positive: true,
                },
            ),
            (
                AtStart,
                Condition::Literal { atom: lit("not_busy", vec![]), positive: true },
            ),
            (OverAll, cmp(CmpOp::Le, fluent("pleasure", vec![var("c")]), 1.0)),
            (OverAll, cmp(CmpOp::Le, fluent("arousal", vec![var("c")]), 1.0)),
            (OverAll, cmp(CmpOp::Le, fluent("dominance", vec![var("c")]), 1.0)),
        ],
        effects: vec![
            (AtStart, Effect::Delete(lit("not_busy", vec![]))),
            (AtEnd, Effect::Add(lit("not_busy", vec![]))),
            (AtStart, Effect::Delete(lit("gripper_empty", vec![var("v")]))),
            (AtEnd, Effect::Add(lit("holding", vec![var("v"), var("o")]))),
            (
                AtStart,
                Effect::Delete(lit("object_at", vec![var("o"), var("object_wp")])),
            ),
            (AtEnd, rate_effect("pleasure", vec![var("c")], 0.005)),
            (AtEnd, rate_effect("arousal", vec![var("c")], 0.005)),
            (AtEnd, rate_effect("dominance", vec![var("c")], 0.005)),
        ],
    };
    actions.push(kid_give);

    actions.push(task_action(
        "move",
        vec![p("v", "robot"), p("from", "waypoint"), p("to", "waypoint")],
        10.0,
        vec![(
            AtStart,
            Condition::Literal {
                atom: lit("robot_at", vec![var("v"), var("from")]),
                positive: true,
            },
        )],
        vec![
            (AtStart, Effect::Delete(lit("robot_at", vec![var("v"), var("from")]))),
            (AtEnd, Effect::Add(lit("robot_at", vec![var("v"), var("to")]))),
        ],
        cfg,
    ));

    actions.push(task_action(
        "classify",
        vec![p("v", "robot"), p("o", "object"), p("wp", "waypoint")],
        60.0,
        vec![
            (
                OverAll,
                Condition::Literal {
                    atom: lit("robot_at", vec![var("v"), var("wp")]),
                    positive: true,
                },
            ),
            (
                AtStart,
                Condition::Literal {
                    atom: lit("object_at", vec![var("o"), var("wp")]),
                    positive: true,
                },
            ),
        ],
        vec![(AtEnd, Effect::Add(lit("classified", vec![var("o")])))],
        cfg,
    ));

    actions.push(task_action(
        "pickup",
        vec![p("v", "robot"), p("o", "object"), p("wp", "waypoint")],
        60.0,
        vec![
            (
                OverAll,
                Condition::Literal {
                    atom: lit("robot_at", vec![var("v"), var("wp")]),
                    positive: true,
                },
            ),
            (
                AtStart,
                Condition::Literal {
                    atom: lit("object_at", vec![var("o"), var("wp")]),
                    positive: true,
                },
            ),
            (
                AtStart,
                Condition::Literal {
                    atom: lit("gripper_empty", vec![var("v")]),
                    positive: true,
                },
            ),
        ],
        vec![
            (AtStart, Effect::Delete(lit("object_at", vec![var("o"), var("wp")]))),
            (AtStart, Effect::Delete(lit("gripper_empty", vec![var("v")]))),
            (AtEnd, Effect::Add(lit("holding", vec![var("v"), var("o")]))),
        ],
        cfg,
    ));

    actions.push(task_action(
        "tidy",
        vec![p("v", "robot"), p("o", "object"), p("b", "box"), p("wp", "waypoint")],
        30.0,
        vec![
            (
                OverAll,
                Condition::Literal {
                    atom: lit("robot_at", vec![var("v"), var("wp")]),
                    positive: true,
                },
            ),
            (
                AtStart,
                Condition::Literal {
                    atom: lit("box_at", vec![var("b"), var("wp")]),
                    positive: true,
                },
            ),
            (
                AtStart,
                Condition::Literal {
                    atom: lit("holding", vec![var("v"), var("o")]),
                    positive: true,
                },
            ),
            (
                AtStart,
                Condition::Literal { atom: lit("classified", vec![var("o")]), positive: true },
            ),
        ],
        vec![
            (AtStart, Effect::Delete(lit("holding", vec![var("v"), var("o")]))),
            (AtEnd, Effect::Add(lit("gripper_empty", vec![var("v")]))),
            (AtEnd, Effect::Add(lit("in_box", vec![var("b"), var("o")]))),
        ],
        cfg,
    ));

    Domain {
        name: DOMAIN_NAME.to_string(),
        types: ["robot", "child", "waypoint", "box", "object"]
            .into_iter()
            .map(|t| TypeDecl { name: t.to_string(), parent: None })
            .collect(),
        constants: (0..cfg.children)
            .map(|i| TypedIdent { name: child_name(i), ty: "child".to_string() })
            .collect(),
        predicates: vec![
            PredicateDecl {
                name: "robot_at".to_string(),
                params: vec![p("v", "robot"), p("wp", "waypoint")],
            },
            PredicateDecl {
                name: "object_at".to_string(),
                params: vec![p("o", "object"), p("wp", "waypoint")],
            },
            PredicateDecl {
                name: "box_at".to_string(),
                params: vec![p("b", "box"), p("wp", "waypoint")],
            },
            PredicateDecl { name: "classified".to_string(), params: vec![p("o", "object")] },
            PredicateDecl {
                name: "in_box".to_string(),
                params: vec![p("b", "box"), p("o", "object")],
            },
            PredicateDecl {
                name: "holding".to_string(),
                params: vec![p("v", "robot"), p("o", "object")],
            },
            PredicateDecl { name: "gripper_empty".to_string(), params: vec![p("v", "robot")] },
            PredicateDecl { name: "not_busy".to_string(), params: vec![] },
        ],
        functions: PAD_DIMS
            .iter()
            .map(|f| FunctionDecl { name: f.to_string(), params: vec![p("c", "child")] })
            .collect(),
        actions,
    }
}

/// Emits a problem instance: `toys` objects spread over per-toy waypoints,
/// one box, one robot, and an initial PAD triple per child.
pub fn synthesize_problem(toys: usize, init_pads: &[PadState]) -> Problem {
    let mut objects = Vec::new();
    for i in 0..toys {
        objects.push(TypedIdent { name: format!("toy{}", i + 1), ty: "object".to_string() });
    }
    objects.push(TypedIdent { name: "box1".to_string(), ty: "box".to_string() });
    objects.push(TypedIdent { name: "kenny".to_string(), ty: "robot".to_string() });
    objects.push(TypedIdent { name: "kenny_wp".to_string(), ty: "waypoint".to_string() });
    for i in 0..toys {
        objects.push(TypedIdent { name: format!("toy{}_wp", i + 1), ty: "waypoint".to_string() });
    }
    objects.push(TypedIdent { name: "box1_wp".to_string(), ty: "waypoint".to_string() });

    let mut init_facts = vec![
        GroundAtom::new("not_busy", &[]),
        GroundAtom::new("robot_at", &["kenny", "kenny_wp"]),
        GroundAtom::new("box_at", &["box1", "box1_wp"]),
    ];
    for i in 0..toys {
        let toy = format!("toy{}", i + 1);
        let wp = format!("toy{}_wp", i + 1);
        init_facts.push(GroundAtom::new("object_at", &[&toy, &wp]));
    }
    init_facts.push(GroundAtom::new("gripper_empty", &["kenny"]));

    let mut init_fluents = Vec::new();
    for (i, pad) in init_pads.iter().enumerate() {
        let c = child_name(i);
        init_fluents.push((FluentRef::new("pleasure", &[&c]), pad.pleasure));
        init_fluents.push((FluentRef::new("arousal", &[&c]), pad.arousal));
        init_fluents.push((FluentRef::new("dominance", &[&c]), pad.dominance));
    }

    let goal = (0..toys)
        .map(|i| Condition::Literal {
            atom: lit("in_box", vec![obj("box1"), obj(&format!("toy{}", i + 1))]),
            positive: true,
        })
        .collect();

    Problem {
        name: PROBLEM_NAME.to_string(),
        domain_name: DOMAIN_NAME.to_string(),
        objects,
        init_facts,
        init_fluents,
        goal,
    }
}

/// The bundled 3-child, 3-toy benchmark pair.
pub fn benchmark() -> (Domain, Problem) {
    let cfg = SynthesisConfig::default();
    (synthesize_domain(&cfg), synthesize_problem(3, &benchmark_pads()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grounding::ground;
    use crate::pddl::{parse_domain, parse_problem, print_domain, print_problem};

    #[test]
    fn classify_benchmark_children() {
        let th = Thresholds::default();
        assert_eq!(classify(PadState::new(0.4, 0.4, 0.45), th), EmotionLabel::Boredom);
        assert_eq!(classify(PadState::new(1.0, 1.0, 1.0), th), EmotionLabel::Happiness);
        assert_eq!(classify(PadState::new(0.83, 0.98, 0.6), th), EmotionLabel::Happiness);
    }

    #[test]
    fn classify_boundary_is_unclassified() {
        let th = Thresholds::default();
        assert_eq!(classify(PadState::new(0.5, 0.5, 0.5), th), EmotionLabel::Unclassified);
        assert_eq!(classify(PadState::new(0.9, 0.9, 0.1), th), EmotionLabel::Unclassified);
        assert_eq!(classify(PadState::new(0.1, 0.9, 0.1), th), EmotionLabel::Unclassified);
    }

    #[test]
    fn classify_prototype_corners() {
        let th = Thresholds::default();
        assert_eq!(classify(PadState::new(0.25, 0.75, 0.75), th), EmotionLabel::Distress);
        assert_eq!(classify(PadState::new(0.25, 0.25, 0.75), th), EmotionLabel::Sadness);
        assert_eq!(classify(PadState::new(0.25, 0.25, 0.25), th), EmotionLabel::Boredom);
        assert_eq!(classify(PadState::new(0.75, 0.25, 0.75), th), EmotionLabel::Happiness);
        assert_eq!(classify(PadState::new(0.75, 0.75, 0.75), th), EmotionLabel::Happiness);
    }

    #[test]
    fn rates_follow_the_sign_table() {
        let r = strategy_rates(Strategy::Accommodate, EmotionLabel::Distress).unwrap();
        assert_eq!((r.dp, r.da, r.dd), (0.01, -0.02, 0.0));
        let r = strategy_rates(Strategy::Maintain, EmotionLabel::Distress).unwrap();
        assert_eq!((r.dp, r.da, r.dd), (0.0, 0.0, 0.0));
        let r = strategy_rates(Strategy::Improve, EmotionLabel::Boredom).unwrap();
        assert_eq!((r.dp, r.da, r.dd), (0.01, 0.01, 0.01));
        let r = strategy_rates(Strategy::Maintain, EmotionLabel::Happiness).unwrap();
        assert_eq!((r.dp, r.da, r.dd), (0.0, -0.02, 0.0));
        assert_eq!(
            strategy_rates(Strategy::Improve, EmotionLabel::Unclassified),
            Err(EmotionError::UnclassifiedEmotion)
        );
    }

    #[test]
    fn expected_delta_examples() {
        let (dp, da, dd) = expected_delta(Strategy::Accommodate, EmotionLabel::Distress, 30.0).unwrap();
        assert!((dp - 0.3).abs() < 1e-9);
        assert!((da + 0.6).abs() < 1e-9);
        assert_eq!(dd, 0.0);

        let (dp, da, dd) = expected_delta(Strategy::Improve, EmotionLabel::Sadness, 10.0).unwrap();
        assert!((dp - 0.2).abs() < 1e-9);
        assert_eq!((da, dd), (0.0, 0.0));

        assert_eq!(
            expected_delta(Strategy::Improve, EmotionLabel::Sadness, 0.0),
            Err(EmotionError::NonPositiveDuration)
        );
    }

    #[test]
    fn action_names_map_back_to_parts() {
        assert_eq!(
            strategy_parts("accommodate-distress"),
            Some((Strategy::Accommodate, EmotionLabel::Distress))
        );
        assert_eq!(
            strategy_parts("maintain-happiness"),
            Some((Strategy::Maintain, EmotionLabel::Happiness))
        );
        assert_eq!(strategy_parts("improve-introvert"), None);
        assert_eq!(strategy_parts("move"), None);
    }

    #[test]
    fn synthesized_domain_is_valid_and_grounds() {
        let (dom, prob) = benchmark();
        crate::pddl::validate_domain(&dom).unwrap();
        crate::pddl::validate_problem(&prob, &dom).unwrap();
        let actions = ground(&dom, &prob);
        assert!(!actions.is_empty());
    }

    #[test]
    fn benchmark_problem_contents() {
        let (_, prob) = benchmark();
        let toys = prob.objects.iter().filter(|o| o.ty == "object").count();
        let boxes = prob.objects.iter().filter(|o| o.ty == "box").count();
        let robots = prob.objects.iter().filter(|o| o.ty == "robot").count();
        let wps = prob.objects.iter().filter(|o| o.ty == "waypoint").count();
        assert_eq!((toys, boxes, robots, wps), (3, 1, 1, 5));
        assert_eq!(prob.init_fluents.len(), 9);
        assert_eq!(prob.goal.len(), 3);
    }

    #[test]
    fn printed_problem_contains_expected_lines() {
        let (_, prob) = benchmark();
        let text = print_problem(&prob);
        assert!(text.contains("(= (pleasure c1) 0.4)"));
        assert!(text.contains("(= (dominance c1) 0.45)"));
        assert!(text.contains("(= (arousal c3) 0.98)"));
        assert!(text.contains("(in_box box1 toy1)"));
    }

    #[test]
    fn kid_give_is_faithful() {
        let (dom, _) = benchmark();
        let kg = dom.action("kid_give").unwrap();
        assert_eq!(kg.duration, DurationConstraint::Fixed(60.0));
        let rates: Vec<f64> = kg
            .effects
            .iter()
            .filter_map(|(_, e)| match e {
                Effect::Numeric { amount: NumericExpr::Binary { rhs, .. }, .. } => match **rhs {
                    NumericExpr::Constant(c) => Some(c),
                    _ => None,
                },
                _ => None,
            })
            .collect();
        assert_eq!(rates, vec![0.005, 0.005, 0.005]);
    }

    #[test]
    fn strategy_actions_match_rates_and_patterns() {
        let cfg = SynthesisConfig::default();
        let dom = synthesize_domain(&cfg);
        let cut = cfg.thresholds.low_high_cut;
        let mut checked = 0;
        for action in &dom.actions {
            let Some((s, e)) = strategy_parts(&action.name) else { continue };
            checked += 1;
            let rates = strategy_rates(s, e).unwrap();

            // At-end numeric effects must be exactly rate x ?duration.
            let mut effect_rates = [0.0f64; 3];
            for (spec, eff) in &action.effects {
                if let Effect::Numeric { op, fluent, amount } = eff {
                    assert_eq!(*spec, TimeSpecifier::AtEnd);
                    let NumericExpr::Binary { op: BinOp::Mul, lhs, rhs } = amount else {
                        panic!("{}: unexpected amount shape", action.name);
                    };
                    assert_eq!(**lhs, NumericExpr::Duration);
                    let NumericExpr::Constant(c) = **rhs else { panic!() };
                    let sign = if *op == NumOp::Increase { 1.0 } else { -1.0 };
                    let dim = PAD_DIMS.iter().position(|d| *d == fluent.func).unwrap();
                    effect_rates[dim] = sign * c;
                }
            }
            assert_eq!(effect_rates, [rates.dp, rates.da, rates.dd], "{}", action.name);

            // At-start comparisons must be the emotion's pattern at the cut.
            let pattern = e.pattern().unwrap();
            for (dim, want) in PAD_DIMS.iter().zip(pattern) {
                let found = action.conditions.iter().find_map(|(spec, c)| match c {
                    Condition::Comparison { op, lhs: NumericExpr::Fluent(f), rhs: NumericExpr::Constant(v) }
                        if f.func == *dim =>
                    {
                        assert_eq!(*spec, TimeSpecifier::AtStart);
                        assert_eq!(*v, cut);
                        Some(*op)
                    }
                    _ => None,
                });
                match want {
                    Some(true) => assert_eq!(found, Some(CmpOp::Gt), "{} {dim}", action.name),
                    Some(false) => assert_eq!(found, Some(CmpOp::Lt), "{} {dim}", action.name),
                    None => assert_eq!(found, None, "{} {dim}", action.name),
                }
            }
        }
        assert_eq!(checked, 6);
    }

    #[test]
    fn single_child_single_toy_grounds_one_strategy_instance_each() {
        let cfg = SynthesisConfig { children: 1, ..SynthesisConfig::default() };
        let dom = synthesize_domain(&cfg);
        let prob = synthesize_problem(1, &[PadState::new(0.4, 0.4, 0.4)]);
        let actions = ground(&dom, &prob);
        for name in [
            "accommodate-distress",
            "improve-distress",
            "accommodate-sadness",
            "improve-sadness",
            "improve-boredom",
            "maintain-happiness",
        ] {
            assert_eq!(actions.iter().filter(|a| a.schema == name).count(), 1, "{name}");
        }
    }

    #[test]
    fn synthesized_files_round_trip() {
        let (dom, prob) = benchmark();
        let dom2 = parse_domain(&print_domain(&dom)).unwrap();
        assert_eq!(dom, dom2);
        let prob2 = parse_problem(&print_problem(&prob), &dom2).unwrap();
        assert_eq!(prob, prob2);
    }
}
