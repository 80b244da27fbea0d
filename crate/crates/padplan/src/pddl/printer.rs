//! Canonical printer. Output re-parses to a structurally equal AST.

use super::ast::*;
use std::fmt::Write;

/// Shortest decimal form that round-trips through the lexer.
fn num(v: f64) -> String {
    format!("{v}")
}

fn term(t: &Term) -> String {
    match t {
        Term::Var(v) => format!("?{v}"),
        Term::Obj(o) => o.clone(),
    }
}

fn atom(a: &Atom) -> String {
    let mut s = format!("({}", a.pred);
    for t in &a.args {
        s.push(' ');
        s.push_str(&term(t));
    }
    s.push(')');
    s
}

fn fluent(f: &FluentExpr) -> String {
    let mut s = format!("({}", f.func);
    for t in &f.args {
        s.push(' ');
        s.push_str(&term(t));
    }
    s.push(')');
    s
}

fn expr(e: &NumericExpr) -> String {
    match e {
        NumericExpr::Constant(c) => num(*c),
        NumericExpr::Duration => "?duration".to_string(),
        NumericExpr::Fluent(f) => fluent(f),
        NumericExpr::Binary { op, lhs, rhs } => {
            format!("({} {} {})", op.symbol(), expr(lhs), expr(rhs))
        }
    }
}

fn condition(c: &Condition) -> String {
    match c {
        Condition::Literal { atom: a, positive: true } => atom(a),
        Condition::Literal { atom: a, positive: false } => format!("(not {})", atom(a)),
        Condition::Comparison { op, lhs, rhs } => {
            format!("({} {} {})", op.symbol(), expr(lhs), expr(rhs))
        }
    }
}

fn effect(e: &Effect) -> String {
    match e {
        Effect::Add(a) => atom(a),
        Effect::Delete(a) => format!("(not {})", atom(a)),
        Effect::Numeric { op, fluent: f, amount } => {
            format!("({} {} {})", op.keyword(), fluent(f), expr(amount))
        }
    }
}

fn time_spec(t: TimeSpecifier) -> &'static str {
    match t {
        TimeSpecifier::AtStart => "at start",
        TimeSpecifier::OverAll => "over all",
        TimeSpecifier::AtEnd => "at end",
    }
}

/// Writes a typed list, batching consecutive entries that share a type tag.
fn typed_list<'a, I>(out: &mut String, entries: I)
where
    I: Iterator<Item = (&'a str, Option<&'a str>)>,
{
    let entries: Vec<_> = entries.collect();
    let mut i = 0;
    let mut first = true;
    while i < entries.len() {
        let tag = entries[i].1;
        let mut j = i;
        while j < entries.len() && entries[j].1 == tag {
            j += 1;
        }
        for (name, _) in &entries[i..j] {
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(name);
        }
        if let Some(t) = tag {
            out.push_str(" - ");
            out.push_str(t);
        }
        i = j;
    }
}

fn params(list: &[Param]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < list.len() {
        let ty = list[i].ty.as_str();
        let mut j = i;
        while j < list.len() && list[j].ty == ty {
            j += 1;
        }
        for p in &list[i..j] {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push('?');
            out.push_str(&p.name);
        }
        out.push_str(" - ");
        out.push_str(ty);
        i = j;
    }
    out
}

pub fn print_domain(dom: &Domain) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "(define (domain {})", dom.name);
    let _ = writeln!(s, "  (:requirements :typing :fluents :durative-actions)");
    if !dom.types.is_empty() {
        s.push_str("  (:types ");
        typed_list(
            &mut s,
            dom.types.iter().map(|t| (t.name.as_str(), t.parent.as_deref())),
        );
        s.push_str(")\n");
    }
    if !dom.constants.is_empty() {
        s.push_str("  (:constants ");
        typed_list(
            &mut s,
            dom.constants.iter().map(|c| (c.name.as_str(), Some(c.ty.as_str()))),
        );
        s.push_str(")\n");
    }
    if !dom.predicates.is_empty() {
        s.push_str("  (:predicates\n");
        for p in &dom.predicates {
            let _ = writeln!(s, "    ({}{})", p.name, prefixed(&params(&p.params)));
        }
        s.push_str("  )\n");
    }
    if !dom.functions.is_empty() {
        s.push_str("  (:functions\n");
        for f in &dom.functions {
            let _ = writeln!(s, "    ({}{})", f.name, prefixed(&params(&f.params)));
        }
        s.push_str("  )\n");
    }
    for a in &dom.actions {
        s.push('\n');
        let _ = writeln!(s, "  (:durative-action {}", a.name);
        let _ = writeln!(s, "    :parameters ({})", params(&a.params));
        let dur = match &a.duration {
            DurationConstraint::Fixed(v) => format!("(= ?duration {})", num(*v)),
            DurationConstraint::UpperBounded(m) => format!("(<= ?duration {})", num(*m)),
        };
        let _ = writeln!(s, "    :duration {dur}");
        s.push_str("    :condition (and\n");
        for (spec, c) in &a.conditions {
            let _ = writeln!(s, "      ({} {})", time_spec(*spec), condition(c));
        }
        s.push_str("    )\n");
        s.push_str("    :effect (and\n");
        for (spec, e) in &a.effects {
            let _ = writeln!(s, "      ({} {})", time_spec(*spec), effect(e));
        }
        s.push_str("    )\n");
        s.push_str("  )\n");
    }
    s.push_str(")\n");
    s
}

fn prefixed(p: &str) -> String {
    if p.is_empty() {
        String::new()
    } else {
        format!(" {p}")
    }
}

pub fn print_problem(prob: &Problem) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "(define (problem {})", prob.name);
    let _ = writeln!(s, "  (:domain {})", prob.domain_name);
    if !prob.objects.is_empty() {
        s.push_str("  (:objects\n    ");
        typed_list(
            &mut s,
            prob.objects.iter().map(|o| (o.name.as_str(), Some(o.ty.as_str()))),
        );
        s.push_str("\n  )\n");
    }
    s.push_str("  (:init\n");
    for fact in &prob.init_facts {
        let _ = writeln!(s, "    {fact}");
    }
    if !prob.init_facts.is_empty() && !prob.init_fluents.is_empty() {
        s.push('\n');
    }
    for (fl, v) in &prob.init_fluents {
        let _ = writeln!(s, "    (= {fl} {})", num(*v));
    }
    s.push_str("  )\n");
    s.push_str("  (:goal (and\n");
    for c in &prob.goal {
        let _ = writeln!(s, "    {}", condition(c));
    }
    s.push_str("  ))\n");
    s.push_str(")\n");
    s
}
