//! Exhaustive instantiation of durative actions over all type-compatible
//! object tuples. No reachability pruning: the ground set is a pure,
//! deterministic function of the domain/problem pair.

use crate::pddl::*;
use std::collections::HashMap;

/// A durative action with all parameters bound. Only `?duration` may remain
/// symbolic, inside numeric expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundAction {
    pub schema: String,
    pub args: Vec<String>,
    pub duration: DurationConstraint,
    pub conditions: Vec<(TimeSpecifier, GroundCondition)>,
    pub effects: Vec<(TimeSpecifier, GroundEffect)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroundCondition {
    Literal { atom: GroundAtom, positive: bool },
    Comparison { op: CmpOp, lhs: GroundExpr, rhs: GroundExpr },
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroundEffect {
    Add(GroundAtom),
    Delete(GroundAtom),
    Numeric { op: NumOp, fluent: FluentRef, amount: GroundExpr },
}

#[derive(Debug, Clone, PartialEq)]
pub enum GroundExpr {
    Constant(f64),
    Fluent(FluentRef),
    Duration,
    Binary { op: BinOp, lhs: Box<GroundExpr>, rhs: Box<GroundExpr> },
}

impl GroundAction {
    /// `(name arg1 arg2 ...)`, the form used in plan files and diagnostics.
    pub fn signature(&self) -> String {
        let mut s = format!("({}", self.schema);
        for a in &self.args {
            s.push(' ');
            s.push_str(a);
        }
        s.push(')');
        s
    }

    pub fn conditions_at(
        &self,
        spec: TimeSpecifier,
    ) -> impl Iterator<Item = &GroundCondition> {
        self.conditions.iter().filter_map(move |(s, c)| (*s == spec).then_some(c))
    }

    pub fn effects_at(&self, spec: TimeSpecifier) -> impl Iterator<Item = &GroundEffect> {
        self.effects.iter().filter_map(move |(s, e)| (*s == spec).then_some(e))
    }
}

impl std::fmt::Display for GroundCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroundCondition::Literal { atom, positive: true } => write!(f, "{atom}"),
            GroundCondition::Literal { atom, positive: false } => write!(f, "(not {atom})"),
            GroundCondition::Comparison { op, lhs, rhs } => {
                write!(f, "({} {lhs} {rhs})", op.symbol())
            }
        }
    }
}

impl std::fmt::Display for GroundExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroundExpr::Constant(c) => write!(f, "{c}"),
            GroundExpr::Fluent(fl) => write!(f, "{fl}"),
            GroundExpr::Duration => write!(f, "?duration"),
            GroundExpr::Binary { op, lhs, rhs } => write!(f, "({} {lhs} {rhs})", op.symbol()),
        }
    }
}

/// All objects (domain constants plus problem objects) whose declared type is
/// a subtype of `ty`, sorted by name.
pub fn extension<'a>(dom: &'a Domain, prob: &'a Problem, ty: &str) -> Vec<&'a str> {
    let mut names: Vec<&str> = prob
        .all_objects(dom)
        .filter(|o| dom.is_subtype(&o.ty, ty))
        .map(|o| o.name.as_str())
        .collect();
    names.sort_unstable();
    names
}

/// Instantiates every action schema over the full cartesian product of its
/// per-parameter type extensions. Output is ordered lexicographically by
/// schema name, then by argument tuple.
pub fn ground(dom: &Domain, prob: &Problem) -> Vec<GroundAction> {
    let mut schemas: Vec<&DurativeAction> = dom.actions.iter().collect();
    schemas.sort_unstable_by(|a, b| a.name.cmp(&b.name));

    let mut out = Vec::new();
    for schema in schemas {
        let candidates: Vec<Vec<&str>> = schema
            .params
            .iter()
            .map(|p| extension(dom, prob, &p.ty))
            .collect();
        if candidates.iter().any(|c| c.is_empty()) && !schema.params.is_empty() {
            continue;
        }
        let mut index = vec![0usize; candidates.len()];
        loop {
            let binding: HashMap<&str, &str> = schema
                .params
                .iter()
                .enumerate()
                .map(|(i, p)| (p.name.as_str(), candidates[i][index[i]]))
                .collect();
            out.push(instantiate(schema, &binding));
            // Advance the rightmost digit of the mixed-radix counter; a full
            // wrap back to all zeros ends the enumeration.
            let mut pos = index.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                index[pos] += 1;
                if index[pos] < candidates[pos].len() {
                    break;
                }
                index[pos] = 0;
            }
            if index.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    out
}

fn instantiate(schema: &DurativeAction, binding: &HashMap<&str, &str>) -> GroundAction {
    let bind = |t: &Term| -> String {
        match t {
            Term::Var(v) => binding
                .get(v.as_str())
                .unwrap_or_else(|| panic!("unbound variable ?{v} in {}", schema.name))
                .to_string(),
            Term::Obj(o) => o.clone(),
        }
    };
    let bind_atom = |a: &Atom| GroundAtom {
        pred: a.pred.clone(),
        args: a.args.iter().map(&bind).collect(),
    };
    let bind_fluent = |fl: &FluentExpr| FluentRef {
        func: fl.func.clone(),
        args: fl.args.iter().map(&bind).collect(),
    };
    fn bind_expr(
        e: &NumericExpr,
        bind_fluent: &dyn Fn(&FluentExpr) -> FluentRef,
    ) -> GroundExpr {
        match e {
            NumericExpr::Constant(c) => GroundExpr::Constant(*c),
            NumericExpr::Duration => GroundExpr::Duration,
            NumericExpr::Fluent(fl) => GroundExpr::Fluent(bind_fluent(fl)),
            NumericExpr::Binary { op, lhs, rhs } => GroundExpr::Binary {
                op: *op,
                lhs: Box::new(bind_expr(lhs, bind_fluent)),
                rhs: Box::new(bind_expr(rhs, bind_fluent)),
            },
        }
    }

    let conditions = schema
        .conditions
        .iter()
        .map(|(spec, c)| {
            let g = match c {
                Condition::Literal { atom, positive } => GroundCondition::Literal {
                    atom: bind_atom(atom),
                    positive: *positive,
                },
                Condition::Comparison { op, lhs, rhs } => GroundCondition::Comparison {
                    op: *op,
                    lhs: bind_expr(lhs, &bind_fluent),
                    rhs: bind_expr(rhs, &bind_fluent),
                },
            };
            (*spec, g)
        })
        .collect();
    let effects = schema
        .effects
        .iter()
        .map(|(spec, e)| {
            let g = match e {
                Effect::Add(a) => GroundEffect::Add(bind_atom(a)),
                Effect::Delete(a) => GroundEffect::Delete(bind_atom(a)),
                Effect::Numeric { op, fluent, amount } => GroundEffect::Numeric {
                    op: *op,
                    fluent: bind_fluent(fluent),
                    amount: bind_expr(amount, &bind_fluent),
                },
            };
            (*spec, g)
        })
        .collect();

    GroundAction {
        schema: schema.name.clone(),
        args: schema
            .params
            .iter()
            .map(|p| binding[p.name.as_str()].to_string())
            .collect(),
        duration: schema.duration.clone(),
        conditions,
        effects,
    }
}

/// Also grounds the goal conjunction (goals are ground by construction; this
/// converts the AST form to the ground form used by the state semantics).
pub fn ground_goal(prob: &Problem) -> Vec<GroundCondition> {
    fn conv_expr(e: &NumericExpr) -> GroundExpr {
        match e {
            NumericExpr::Constant(c) => GroundExpr::Constant(*c),
            NumericExpr::Duration => GroundExpr::Duration,
            NumericExpr::Fluent(fl) => GroundExpr::Fluent(FluentRef {
                func: fl.func.clone(),
                args: fl.args.iter().map(term_name).collect(),
            }),
            NumericExpr::Binary { op, lhs, rhs } => GroundExpr::Binary {
                op: *op,
                lhs: Box::new(conv_expr(lhs)),
                rhs: Box::new(conv_expr(rhs)),
            },
        }
    }
    fn term_name(t: &Term) -> String {
        match t {
            Term::Obj(o) => o.clone(),
            Term::Var(v) => panic!("goal is not ground: ?{v}"),
        }
    }
    prob.goal
        .iter()
        .map(|c| match c {
            Condition::Literal { atom, positive } => GroundCondition::Literal {
                atom: GroundAtom {
                    pred: atom.pred.clone(),
                    args: atom.args.iter().map(term_name).collect(),
                },
                positive: *positive,
            },
            Condition::Comparison { op, lhs, rhs } => GroundCondition::Comparison {
                op: *op,
                lhs: conv_expr(lhs),
                rhs: conv_expr(rhs),
            },
        })
        .collect()
}
