//! Recursive-descent parser for the supported fragment, plus the semantic
//! validation pass shared with programmatically built ASTs.

use super::ast::*;
use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;

pub fn parse_domain(text: &str) -> Result<Domain, ParseError> {
    let mut p = Parser::new(text)?;
    let dom = p.domain()?;
    p.expect_end()?;
    validate_domain(&dom)?;
    Ok(dom)
}

/// Parses a problem and checks it against the domain it declares.
pub fn parse_problem(text: &str, dom: &Domain) -> Result<Problem, ParseError> {
    let mut p = Parser::new(text)?;
    let prob = p.problem()?;
    p.expect_end()?;
    validate_problem(&prob, dom)?;
    Ok(prob)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: tokenize(text)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn last_pos(&self) -> (u32, u32) {
        self.toks.last().map(|t| (t.line, t.col)).unwrap_or((1, 1))
    }

    fn err_here(&self, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::Syntax {
                line: t.line,
                col: t.col,
                expected: expected.to_string(),
                found: t.describe(),
            },
            None => {
                let (line, col) = self.last_pos();
                ParseError::Syntax {
                    line,
                    col,
                    expected: expected.to_string(),
                    found: "end of input".to_string(),
                }
            }
        }
    }

    fn advance(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect_lparen(&mut self) -> Result<(), ParseError> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::LParen) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_here("'('")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::RParen) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_here("')'")),
        }
    }

    fn at_rparen(&self) -> bool {
        matches!(self.peek().map(|t| &t.kind), Some(TokenKind::RParen))
    }

    /// Consumes a symbol matching `kw` case-insensitively.
    fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Symbol(s)) if s.eq_ignore_ascii_case(kw) => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_here(&format!("'{kw}'"))),
        }
    }

    fn peek_kw(&self, kw: &str) -> bool {
        matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Symbol(s)) if s.eq_ignore_ascii_case(kw))
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Symbol(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.err_here(what)),
        }
    }

    fn variable(&mut self) -> Result<String, ParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Variable(v)) => {
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.err_here("a '?variable'")),
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Number(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.err_here("a number")),
        }
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            return Err(self.err_here("end of input"));
        }
        Ok(())
    }

    /// Skips a balanced token group; the opening '(' has been consumed.
    fn skip_balanced(&mut self) -> Result<(), ParseError> {
        let mut depth = 1usize;
        while depth > 0 {
            match self.advance().map(|t| t.kind) {
                Some(TokenKind::LParen) => depth += 1,
                Some(TokenKind::RParen) => depth -= 1,
                Some(_) => {}
                None => return Err(self.err_here("')'")),
            }
        }
        Ok(())
    }

    // ---- domain ----

    fn domain(&mut self) -> Result<Domain, ParseError> {
        self.expect_lparen()?;
        self.expect_kw("define")?;
        self.expect_lparen()?;
        self.expect_kw("domain")?;
        let name = self.ident("a domain name")?;
        self.expect_rparen()?;

        let mut dom = Domain {
            name,
            types: Vec::new(),
            constants: Vec::new(),
            predicates: Vec::new(),
            functions: Vec::new(),
            actions: Vec::new(),
        };

        while !self.at_rparen() {
            self.expect_lparen()?;
            if self.peek_kw(":requirements") {
                self.skip_balanced()?;
            } else if self.peek_kw(":types") {
                self.expect_kw(":types")?;
                dom.types = self
                    .typed_names()?
                    .into_iter()
                    .map(|(name, parent)| TypeDecl { name, parent })
                    .collect();
                self.expect_rparen()?;
            } else if self.peek_kw(":constants") {
                self.expect_kw(":constants")?;
                dom.constants = self
                    .typed_names()?
                    .into_iter()
                    .map(|(name, ty)| TypedIdent { name, ty: ty.unwrap_or_else(|| ROOT_TYPE.to_string()) })
                    .collect();
                self.expect_rparen()?;
            } else if self.peek_kw(":predicates") {
                self.expect_kw(":predicates")?;
                while !self.at_rparen() {
                    let (name, params) = self.signature()?;
                    dom.predicates.push(PredicateDecl { name, params });
                }
                self.expect_rparen()?;
            } else if self.peek_kw(":functions") {
                self.expect_kw(":functions")?;
                while !self.at_rparen() {
                    let (name, params) = self.signature()?;
                    dom.functions.push(FunctionDecl { name, params });
                }
                self.expect_rparen()?;
            } else if self.peek_kw(":durative-action") {
                self.expect_kw(":durative-action")?;
                dom.actions.push(self.durative_action()?);
            } else {
                return Err(self.err_here(
                    "':requirements', ':types', ':constants', ':predicates', ':functions', or ':durative-action'",
                ));
            }
        }
        self.expect_rparen()?;
        Ok(dom)
    }

    /// `(name ?a ?b - t ?c)`; the opening '(' has not been consumed.
    fn signature(&mut self) -> Result<(String, Vec<Param>), ParseError> {
        self.expect_lparen()?;
        let name = self.ident("a predicate or function name")?;
        let params = self.typed_params()?;
        self.expect_rparen()?;
        Ok((name, params))
    }

    /// Typed list of plain names, as in `:types` / `:constants` / `:objects`.
    /// Stops before the closing ')'.
    fn typed_names(&mut self) -> Result<Vec<(String, Option<String>)>, ParseError> {
        let mut out: Vec<(String, Option<String>)> = Vec::new();
        let mut pending: Vec<String> = Vec::new();
        loop {
            match self.peek().map(|t| t.kind.clone()) {
                Some(TokenKind::Symbol(s)) if s == "-" => {
                    if pending.is_empty() {
                        return Err(self.err_here("a name before '-'"));
                    }
                    self.pos += 1;
                    let ty = self.ident("a type name")?;
                    out.extend(pending.drain(..).map(|n| (n, Some(ty.clone()))));
                }
                Some(TokenKind::Symbol(s)) => {
                    self.pos += 1;
                    pending.push(s);
                }
                Some(TokenKind::RParen) | None => break,
                _ => return Err(self.err_here("a name, '-', or ')'")),
            }
        }
        out.extend(pending.into_iter().map(|n| (n, None)));
        Ok(out)
    }

    /// Typed list of variables; untyped entries default to the root type.
    fn typed_params(&mut self) -> Result<Vec<Param>, ParseError> {
        let mut out: Vec<Param> = Vec::new();
        let mut pending: Vec<String> = Vec::new();
        loop {
            match self.peek().map(|t| t.kind.clone()) {
                Some(TokenKind::Variable(v)) => {
                    self.pos += 1;
                    pending.push(v);
                }
                Some(TokenKind::Symbol(s)) if s == "-" => {
                    if pending.is_empty() {
                        return Err(self.err_here("a '?variable' before '-'"));
                    }
                    self.pos += 1;
                    let ty = self.ident("a type name")?;
                    out.extend(pending.drain(..).map(|name| Param { name, ty: ty.clone() }));
                }
                Some(TokenKind::RParen) | None => break,
                _ => return Err(self.err_here("a '?variable', '-', or ')'")),
            }
        }
        out.extend(pending.into_iter().map(|name| Param { name, ty: ROOT_TYPE.to_string() }));
        Ok(out)
    }

    fn durative_action(&mut self) -> Result<DurativeAction, ParseError> {
        let name = self.ident("an action name")?;
        self.expect_kw(":parameters")?;
        self.expect_lparen()?;
        let params = self.typed_params()?;
        self.expect_rparen()?;
        self.expect_kw(":duration")?;
        let duration = self.duration_constraint()?;
        self.expect_kw(":condition")?;
        let conditions = self.timed_conditions()?;
        self.expect_kw(":effect")?;
        let effects = self.timed_effects()?;
        self.expect_rparen()?;
        Ok(DurativeAction { name, params, duration, conditions, effects })
    }

    fn duration_constraint(&mut self) -> Result<DurationConstraint, ParseError> {
        self.expect_lparen()?;
        let op = self.ident("'=' or '<='")?;
        let v = self.variable()?;
        if !v.eq_ignore_ascii_case("duration") {
            return Err(ParseError::Semantic {
                message: format!("duration constraint must bind '?duration', found '?{v}'"),
            });
        }
        let value = self.number()?;
        self.expect_rparen()?;
        match op.as_str() {
            "=" => Ok(DurationConstraint::Fixed(value)),
            "<=" => Ok(DurationConstraint::UpperBounded(value)),
            _ => Err(ParseError::Semantic {
                message: format!("unsupported duration constraint operator '{op}'"),
            }),
        }
    }

    /// `(and <timed>*)` or a single timed condition.
    fn timed_conditions(&mut self) -> Result<Vec<(TimeSpecifier, Condition)>, ParseError> {
        let mut out = Vec::new();
        self.expect_lparen()?;
        if self.peek_kw("and") {
            self.expect_kw("and")?;
            while !self.at_rparen() {
                out.push(self.timed_condition()?);
            }
            self.expect_rparen()?;
        } else {
            // Re-enter with the '(' already consumed.
            out.push(self.timed_condition_body()?);
        }
        Ok(out)
    }

    fn timed_condition(&mut self) -> Result<(TimeSpecifier, Condition), ParseError> {
        self.expect_lparen()?;
        self.timed_condition_body()
    }

    fn timed_condition_body(&mut self) -> Result<(TimeSpecifier, Condition), ParseError> {
        let spec = self.time_specifier(true)?;
        let cond = self.condition()?;
        self.expect_rparen()?;
        Ok((spec, cond))
    }

    fn timed_effects(&mut self) -> Result<Vec<(TimeSpecifier, Effect)>, ParseError> {
        let mut out = Vec::new();
        self.expect_lparen()?;
        if self.peek_kw("and") {
            self.expect_kw("and")?;
            while !self.at_rparen() {
                self.expect_lparen()?;
                out.push(self.timed_effect_body()?);
            }
            self.expect_rparen()?;
        } else {
            out.push(self.timed_effect_body()?);
        }
        Ok(out)
    }

    fn timed_effect_body(&mut self) -> Result<(TimeSpecifier, Effect), ParseError> {
        let spec = self.time_specifier(false)?;
        let eff = self.effect()?;
        self.expect_rparen()?;
        Ok((spec, eff))
    }

    /// `at start`, `at end`, or (conditions only) `over all`.
    fn time_specifier(&mut self, allow_over_all: bool) -> Result<TimeSpecifier, ParseError> {
        if self.peek_kw("at") {
            self.expect_kw("at")?;
            if self.peek_kw("start") {
                self.expect_kw("start")?;
                Ok(TimeSpecifier::AtStart)
            } else if self.peek_kw("end") {
                self.expect_kw("end")?;
                Ok(TimeSpecifier::AtEnd)
            } else {
                Err(self.err_here("'start' or 'end'"))
            }
        } else if self.peek_kw("over") {
            if !allow_over_all {
                return Err(self.err_here("'at start' or 'at end' (effects cannot be 'over all')"));
            }
            self.expect_kw("over")?;
            self.expect_kw("all")?;
            Ok(TimeSpecifier::OverAll)
        } else {
            Err(self.err_here(if allow_over_all { "'at' or 'over'" } else { "'at'" }))
        }
    }

    /// A literal or numeric comparison; the opening '(' has been consumed by
    /// the caller, so this parses from the inner '('.
    fn condition(&mut self) -> Result<Condition, ParseError> {
        self.expect_lparen()?;
        if self.peek_kw("not") {
            self.expect_kw("not")?;
            let atom = self.atom_in_parens()?;
            self.expect_rparen()?;
            return Ok(Condition::Literal { atom, positive: false });
        }
        if let Some(op) = self.peek_cmp_op() {
            self.pos += 1;
            let lhs = self.numeric_expr()?;
            let rhs = self.numeric_expr()?;
            self.expect_rparen()?;
            return Ok(Condition::Comparison { op, lhs, rhs });
        }
        let atom = self.atom_body()?;
        Ok(Condition::Literal { atom, positive: true })
    }

    fn peek_cmp_op(&self) -> Option<CmpOp> {
        match self.peek().map(|t| &t.kind) {
            Some(TokenKind::Symbol(s)) => match s.as_str() {
                "<" => Some(CmpOp::Lt),
                "<=" => Some(CmpOp::Le),
                ">" => Some(CmpOp::Gt),
                ">=" => Some(CmpOp::Ge),
                "=" => Some(CmpOp::Eq),
                _ => None,
            },
            _ => None,
        }
    }

    fn atom_in_parens(&mut self) -> Result<Atom, ParseError> {
        self.expect_lparen()?;
        self.atom_body()
    }

    /// `name term* )` — consumes the closing paren.
    fn atom_body(&mut self) -> Result<Atom, ParseError> {
        let pred = self.ident("a predicate name")?;
        let mut args = Vec::new();
        while !self.at_rparen() {
            args.push(self.term()?);
        }
        self.expect_rparen()?;
        Ok(Atom { pred, args })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Variable(v)) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(TokenKind::Symbol(s)) if s != "-" => {
                self.pos += 1;
                Ok(Term::Obj(s))
            }
            _ => Err(self.err_here("an argument (object or '?variable')")),
        }
    }

    fn effect(&mut self) -> Result<Effect, ParseError> {
        self.expect_lparen()?;
        if self.peek_kw("not") {
            self.expect_kw("not")?;
            let atom = self.atom_in_parens()?;
            self.expect_rparen()?;
            return Ok(Effect::Delete(atom));
        }
        for (kw, op) in [
            ("increase", NumOp::Increase),
            ("decrease", NumOp::Decrease),
            ("assign", NumOp::Assign),
        ] {
            if self.peek_kw(kw) {
                self.expect_kw(kw)?;
                let fluent = self.fluent_in_parens()?;
                let amount = self.numeric_expr()?;
                self.expect_rparen()?;
                return Ok(Effect::Numeric { op, fluent, amount });
            }
        }
        let atom = self.atom_body()?;
        Ok(Effect::Add(atom))
    }

    fn fluent_in_parens(&mut self) -> Result<FluentExpr, ParseError> {
        self.expect_lparen()?;
        let func = self.ident("a function name")?;
        let mut args = Vec::new();
        while !self.at_rparen() {
            args.push(self.term()?);
        }
        self.expect_rparen()?;
        Ok(FluentExpr { func, args })
    }

    fn numeric_expr(&mut self) -> Result<NumericExpr, ParseError> {
        match self.peek().map(|t| t.kind.clone()) {
            Some(TokenKind::Number(n)) => {
                self.pos += 1;
                Ok(NumericExpr::Constant(n))
            }
            Some(TokenKind::Variable(v)) => {
                if !v.eq_ignore_ascii_case("duration") {
                    return Err(self.err_here("'?duration' (the only variable allowed in expressions)"));
                }
                self.pos += 1;
                Ok(NumericExpr::Duration)
            }
            Some(TokenKind::LParen) => {
                self.pos += 1;
                let head = match self.peek().map(|t| t.kind.clone()) {
                    Some(TokenKind::Symbol(s)) => s,
                    _ => return Err(self.err_here("an operator or function name")),
                };
                if let Some(op) = match head.as_str() {
                    "+" => Some(BinOp::Add),
                    "-" => Some(BinOp::Sub),
                    "*" => Some(BinOp::Mul),
                    "/" => Some(BinOp::Div),
                    _ => None,
                } {
                    self.pos += 1;
                    let lhs = Box::new(self.numeric_expr()?);
                    let rhs = Box::new(self.numeric_expr()?);
                    self.expect_rparen()?;
                    Ok(NumericExpr::Binary { op, lhs, rhs })
                } else {
                    let func = self.ident("a function name")?;
                    let mut args = Vec::new();
                    while !self.at_rparen() {
                        args.push(self.term()?);
                    }
                    self.expect_rparen()?;
                    Ok(NumericExpr::Fluent(FluentExpr { func, args }))
                }
            }
            _ => Err(self.err_here("a numeric expression")),
        }
    }

    // ---- problem ----

    fn problem(&mut self) -> Result<Problem, ParseError> {
        self.expect_lparen()?;
        self.expect_kw("define")?;
        self.expect_lparen()?;
        self.expect_kw("problem")?;
        let name = self.ident("a problem name")?;
        self.expect_rparen()?;

        let mut domain_name: Option<String> = None;
        let mut objects = Vec::new();
        let mut init_facts = Vec::new();
        let mut init_fluents = Vec::new();
        let mut goal: Option<Vec<Condition>> = None;

        while !self.at_rparen() {
            self.expect_lparen()?;
            if self.peek_kw(":domain") {
                self.expect_kw(":domain")?;
                domain_name = Some(self.ident("a domain name")?);
                self.expect_rparen()?;
            } else if self.peek_kw(":requirements") {
                self.skip_balanced()?;
            } else if self.peek_kw(":objects") {
                self.expect_kw(":objects")?;
                objects = self
                    .typed_names()?
                    .into_iter()
                    .map(|(name, ty)| TypedIdent { name, ty: ty.unwrap_or_else(|| ROOT_TYPE.to_string()) })
                    .collect();
                self.expect_rparen()?;
            } else if self.peek_kw(":init") {
                self.expect_kw(":init")?;
                while !self.at_rparen() {
                    self.init_element(&mut init_facts, &mut init_fluents)?;
                }
                self.expect_rparen()?;
            } else if self.peek_kw(":goal") {
                self.expect_kw(":goal")?;
                goal = Some(self.goal_conditions()?);
                self.expect_rparen()?;
            } else {
                return Err(self.err_here("':domain', ':objects', ':init', or ':goal'"));
            }
        }
        self.expect_rparen()?;

        let domain_name = domain_name.ok_or_else(|| ParseError::Semantic {
            message: "problem declares no (:domain ...)".to_string(),
        })?;
        let goal = goal.ok_or_else(|| ParseError::Semantic {
            message: "problem declares no (:goal ...)".to_string(),
        })?;
        Ok(Problem { name, domain_name, objects, init_facts, init_fluents, goal })
    }

    fn init_element(
        &mut self,
        facts: &mut Vec<GroundAtom>,
        fluents: &mut Vec<(FluentRef, f64)>,
    ) -> Result<(), ParseError> {
        self.expect_lparen()?;
        if self.peek_kw("=") {
            self.expect_kw("=")?;
            self.expect_lparen()?;
            let func = self.ident("a function name")?;
            let mut args = Vec::new();
            while !self.at_rparen() {
                args.push(self.ident("an object name")?);
            }
            self.expect_rparen()?;
            let value = self.number()?;
            self.expect_rparen()?;
            fluents.push((FluentRef { func, args }, value));
        } else if self.peek_kw("not") {
            return Err(ParseError::Semantic {
                message: "negative literals are not allowed in :init (closed world)".to_string(),
            });
        } else {
            let pred = self.ident("a predicate name")?;
            let mut args = Vec::new();
            while !self.at_rparen() {
                match self.peek().map(|t| t.kind.clone()) {
                    Some(TokenKind::Variable(_)) => {
                        return Err(ParseError::Semantic {
                            message: format!("init fact ({pred} ...) is not ground"),
                        })
                    }
                    _ => args.push(self.ident("an object name")?),
                }
            }
            self.expect_rparen()?;
            facts.push(GroundAtom { pred, args });
        }
        Ok(())
    }

    fn goal_conditions(&mut self) -> Result<Vec<Condition>, ParseError> {
        let mut out = Vec::new();
        // Peek: `(and ...)` or a single condition.
        let save = self.pos;
        self.expect_lparen()?;
        if self.peek_kw("and") {
            self.expect_kw("and")?;
            while !self.at_rparen() {
                out.push(self.condition()?);
            }
            self.expect_rparen()?;
        } else {
            self.pos = save;
            out.push(self.condition()?);
        }
        Ok(out)
    }
}

// ---- semantic validation ----

/// Checks declarations, arities, and typing. Also applied to synthesized
/// ASTs so generated and parsed domains satisfy the same rules.
pub fn validate_domain(dom: &Domain) -> Result<(), ParseError> {
    let semantic = |message: String| ParseError::Semantic { message };

    let mut seen_types = std::collections::HashSet::new();
    for t in &dom.types {
        if !seen_types.insert(t.name.as_str()) {
            return Err(semantic(format!("duplicate type '{}'", t.name)));
        }
    }
    for t in &dom.types {
        if let Some(p) = &t.parent {
            if !dom.type_known(p) {
                return Err(semantic(format!("type '{}' has undeclared parent '{p}'", t.name)));
            }
        }
    }
    // Reject cycles among parent links.
    for t in &dom.types {
        let mut cur = t.name.as_str();
        for _ in 0..=dom.types.len() {
            match dom.types.iter().find(|d| d.name == cur).and_then(|d| d.parent.as_deref()) {
                Some(p) if p == t.name => {
                    return Err(semantic(format!("type '{}' is its own ancestor", t.name)))
                }
                Some(p) => cur = p,
                None => break,
            }
        }
    }

    let mut seen = std::collections::HashSet::new();
    for c in &dom.constants {
        if !seen.insert(c.name.as_str()) {
            return Err(semantic(format!("duplicate constant '{}'", c.name)));
        }
        if !dom.type_known(&c.ty) {
            return Err(semantic(format!("constant '{}' has undeclared type '{}'", c.name, c.ty)));
        }
    }

    let mut seen = std::collections::HashSet::new();
    for p in &dom.predicates {
        if !seen.insert(p.name.as_str()) {
            return Err(semantic(format!("duplicate predicate '{}'", p.name)));
        }
        check_params(dom, &p.params, &format!("predicate '{}'", p.name))?;
    }
    for f in &dom.functions {
        if !seen.insert(f.name.as_str()) {
            return Err(semantic(format!("duplicate function or predicate name '{}'", f.name)));
        }
        check_params(dom, &f.params, &format!("function '{}'", f.name))?;
    }

    let mut seen = std::collections::HashSet::new();
    for a in &dom.actions {
        if !seen.insert(a.name.as_str()) {
            return Err(semantic(format!("duplicate action '{}'", a.name)));
        }
        validate_action(dom, a)?;
    }
    Ok(())
}

fn check_params(dom: &Domain, params: &[Param], ctx: &str) -> Result<(), ParseError> {
    let mut seen = std::collections::HashSet::new();
    for p in params {
        if !seen.insert(p.name.as_str()) {
            return Err(ParseError::Semantic {
                message: format!("{ctx}: duplicate parameter '?{}'", p.name),
            });
        }
        if !dom.type_known(&p.ty) {
            return Err(ParseError::Semantic {
                message: format!("{ctx}: parameter '?{}' has undeclared type '{}'", p.name, p.ty),
            });
        }
    }
    Ok(())
}

fn validate_action(dom: &Domain, a: &DurativeAction) -> Result<(), ParseError> {
    let ctx = format!("action '{}'", a.name);
    check_params(dom, &a.params, &ctx)?;

    match a.duration {
        DurationConstraint::Fixed(v) | DurationConstraint::UpperBounded(v) if v <= 0.0 => {
            return Err(ParseError::Semantic {
                message: format!("{ctx}: duration bound must be strictly positive"),
            })
        }
        _ => {}
    }

    for (spec, cond) in &a.conditions {
        debug_assert!(matches!(
            spec,
            TimeSpecifier::AtStart | TimeSpecifier::OverAll | TimeSpecifier::AtEnd
        ));
        match cond {
            Condition::Literal { atom, .. } => check_atom(dom, a, atom, &ctx)?,
            Condition::Comparison { lhs, rhs, .. } => {
                for e in [lhs, rhs] {
                    if e.mentions_duration() {
                        return Err(ParseError::Semantic {
                            message: format!(
                                "{ctx}: '?duration' may only appear in effect expressions and the duration constraint"
                            ),
                        });
                    }
                    check_expr(dom, a, e, &ctx)?;
                }
            }
        }
    }

    let mut adds: Vec<(TimeSpecifier, &Atom)> = Vec::new();
    let mut dels: Vec<(TimeSpecifier, &Atom)> = Vec::new();
    for (spec, eff) in &a.effects {
        if *spec == TimeSpecifier::OverAll {
            return Err(ParseError::Semantic {
                message: format!("{ctx}: effects cannot be annotated 'over all'"),
            });
        }
        match eff {
            Effect::Add(atom) => {
                check_atom(dom, a, atom, &ctx)?;
                adds.push((*spec, atom));
            }
            Effect::Delete(atom) => {
                check_atom(dom, a, atom, &ctx)?;
                dels.push((*spec, atom));
            }
            Effect::Numeric { fluent, amount, .. } => {
                check_fluent(dom, a, fluent, &ctx)?;
                check_expr(dom, a, amount, &ctx)?;
            }
        }
    }
    for (spec, add) in &adds {
        if dels.iter().any(|(s, d)| s == spec && *d == *add) {
            return Err(ParseError::Semantic {
                message: format!(
                    "{ctx}: contradictory simultaneous effects on ({} ...)",
                    add.pred
                ),
            });
        }
    }
    Ok(())
}

/// Resolves a term's type inside an action body: a declared parameter or a
/// domain constant.
fn term_type<'a>(dom: &'a Domain, a: &'a DurativeAction, t: &Term, ctx: &str) -> Result<&'a str, ParseError> {
    match t {
        Term::Var(v) => a
            .params
            .iter()
            .find(|p| p.name == *v)
            .map(|p| p.ty.as_str())
            .ok_or_else(|| ParseError::Semantic {
                message: format!("{ctx}: undeclared variable '?{v}'"),
            }),
        Term::Obj(o) => dom
            .constant(o)
            .map(|c| c.ty.as_str())
            .ok_or_else(|| ParseError::Semantic {
                message: format!("{ctx}: unknown constant '{o}'"),
            }),
    }
}

fn check_atom(dom: &Domain, a: &DurativeAction, atom: &Atom, ctx: &str) -> Result<(), ParseError> {
    let decl = dom.predicate(&atom.pred).ok_or_else(|| ParseError::Semantic {
        message: format!("{ctx}: undeclared predicate '{}'", atom.pred),
    })?;
    if decl.params.len() != atom.args.len() {
        return Err(ParseError::Semantic {
            message: format!(
                "{ctx}: predicate '{}' expects {} arguments, got {}",
                atom.pred,
                decl.params.len(),
                atom.args.len()
            ),
        });
    }
    for (arg, param) in atom.args.iter().zip(&decl.params) {
        if matches!(arg, Term::Var(v) if v.eq_ignore_ascii_case("duration")) {
            return Err(ParseError::Semantic {
                message: format!("{ctx}: '?duration' cannot be a predicate argument"),
            });
        }
        let ty = term_type(dom, a, arg, ctx)?;
        if !dom.is_subtype(&ty, &param.ty) {
            return Err(ParseError::Semantic {
                message: format!(
                    "{ctx}: argument of type '{ty}' does not match '{}' in predicate '{}'",
                    param.ty, atom.pred
                ),
            });
        }
    }
    Ok(())
}

fn check_fluent(dom: &Domain, a: &DurativeAction, fl: &FluentExpr, ctx: &str) -> Result<(), ParseError> {
    let decl = dom.function(&fl.func).ok_or_else(|| ParseError::Semantic {
        message: format!("{ctx}: undeclared function '{}'", fl.func),
    })?;
    if decl.params.len() != fl.args.len() {
        return Err(ParseError::Semantic {
            message: format!(
                "{ctx}: function '{}' expects {} arguments, got {}",
                fl.func,
                decl.params.len(),
                fl.args.len()
            ),
        });
    }
    for (arg, param) in fl.args.iter().zip(&decl.params) {
        if matches!(arg, Term::Var(v) if v.eq_ignore_ascii_case("duration")) {
            return Err(ParseError::Semantic {
                message: format!("{ctx}: '?duration' cannot be a function argument"),
            });
        }
        let ty = term_type(dom, a, arg, ctx)?;
        if !dom.is_subtype(&ty, &param.ty) {
            return Err(ParseError::Semantic {
                message: format!(
                    "{ctx}: argument of type '{ty}' does not match '{}' in function '{}'",
                    param.ty, fl.func
                ),
            });
        }
    }
    Ok(())
}

fn check_expr(dom: &Domain, a: &DurativeAction, e: &NumericExpr, ctx: &str) -> Result<(), ParseError> {
    match e {
        NumericExpr::Constant(_) | NumericExpr::Duration => Ok(()),
        NumericExpr::Fluent(fl) => check_fluent(dom, a, fl, ctx),
        NumericExpr::Binary { op, lhs, rhs } => {
            if *op == BinOp::Div {
                if let NumericExpr::Constant(c) = **rhs {
                    if c == 0.0 {
                        return Err(ParseError::Semantic {
                            message: format!("{ctx}: division by the literal constant zero"),
                        });
                    }
                }
            }
            check_expr(dom, a, lhs, ctx)?;
            check_expr(dom, a, rhs, ctx)
        }
    }
}

pub fn validate_problem(prob: &Problem, dom: &Domain) -> Result<(), ParseError> {
    let semantic = |message: String| ParseError::Semantic { message };

    if prob.domain_name != dom.name {
        return Err(semantic(format!(
            "problem declares domain '{}' but was parsed against '{}'",
            prob.domain_name, dom.name
        )));
    }

    let mut object_types: std::collections::HashMap<&str, &str> = std::collections::HashMap::new();
    for c in &dom.constants {
        object_types.insert(&c.name, &c.ty);
    }
    for o in &prob.objects {
        if !dom.type_known(&o.ty) {
            return Err(semantic(format!("object '{}' has undeclared type '{}'", o.name, o.ty)));
        }
        if object_types.insert(&o.name, &o.ty).is_some() {
            return Err(semantic(format!("duplicate object '{}'", o.name)));
        }
    }

    let lookup = |name: &str| -> Result<String, ParseError> {
        object_types
            .get(name)
            .map(|t| t.to_string())
            .ok_or_else(|| semantic(format!("unknown object '{name}'")))
    };

    for fact in &prob.init_facts {
        let decl = dom
            .predicate(&fact.pred)
            .ok_or_else(|| semantic(format!("init fact uses undeclared predicate '{}'", fact.pred)))?;
        if decl.params.len() != fact.args.len() {
            return Err(semantic(format!(
                "init fact ({} ...) has {} arguments, expected {}",
                fact.pred,
                fact.args.len(),
                decl.params.len()
            )));
        }
        for (arg, param) in fact.args.iter().zip(&decl.params) {
            let ty = lookup(arg)?;
            if !dom.is_subtype(&ty, &param.ty) {
                return Err(semantic(format!(
                    "init fact ({} ...): '{arg}' of type '{ty}' does not match '{}'",
                    fact.pred, param.ty
                )));
            }
        }
    }

    let mut assigned = std::collections::HashSet::new();
    for (fl, _) in &prob.init_fluents {
        let decl = dom
            .function(&fl.func)
            .ok_or_else(|| semantic(format!("init assigns undeclared function '{}'", fl.func)))?;
        if decl.params.len() != fl.args.len() {
            return Err(semantic(format!(
                "init assignment ({} ...) has {} arguments, expected {}",
                fl.func,
                fl.args.len(),
                decl.params.len()
            )));
        }
        for (arg, param) in fl.args.iter().zip(&decl.params) {
            let ty = lookup(arg)?;
            if !dom.is_subtype(&ty, &param.ty) {
                return Err(semantic(format!(
                    "init assignment ({} ...): '{arg}' of type '{ty}' does not match '{}'",
                    fl.func, param.ty
                )));
            }
        }
        if !assigned.insert(fl.clone()) {
            return Err(semantic(format!("fluent {fl} assigned more than once in :init")));
        }
    }

    for cond in &prob.goal {
        validate_ground_condition(dom, cond, &lookup)?;
    }
    Ok(())
}

fn validate_ground_condition(
    dom: &Domain,
    cond: &Condition,
    lookup: &dyn Fn(&str) -> Result<String, ParseError>,
) -> Result<(), ParseError> {
    let semantic = |message: String| ParseError::Semantic { message };
    let ground_args = |args: &[Term], sig: &[Param], what: &str| -> Result<(), ParseError> {
        if args.len() != sig.len() {
            return Err(semantic(format!("goal {what} has wrong arity")));
        }
        for (arg, param) in args.iter().zip(sig) {
            match arg {
                Term::Var(v) => return Err(semantic(format!("goal is not ground: '?{v}'"))),
                Term::Obj(o) => {
                    let ty = lookup(o)?;
                    if !dom.is_subtype(&ty, &param.ty) {
                        return Err(semantic(format!(
                            "goal {what}: '{o}' of type '{ty}' does not match '{}'",
                            param.ty
                        )));
                    }
                }
            }
        }
        Ok(())
    };
    match cond {
        Condition::Literal { atom, .. } => {
            let decl = dom
                .predicate(&atom.pred)
                .ok_or_else(|| semantic(format!("goal uses undeclared predicate '{}'", atom.pred)))?;
            ground_args(&atom.args, &decl.params, &format!("literal ({} ...)", atom.pred))
        }
        Condition::Comparison { lhs, rhs, .. } => {
            for e in [lhs, rhs] {
                validate_ground_expr(dom, e, lookup)?;
            }
            Ok(())
        }
    }
}

fn validate_ground_expr(
    dom: &Domain,
    e: &NumericExpr,
    lookup: &dyn Fn(&str) -> Result<String, ParseError>,
) -> Result<(), ParseError> {
    let semantic = |message: String| ParseError::Semantic { message };
    match e {
        NumericExpr::Constant(_) => Ok(()),
        NumericExpr::Duration => {
            Err(semantic("goal expressions cannot mention '?duration'".to_string()))
        }
        NumericExpr::Fluent(fl) => {
            let decl = dom
                .function(&fl.func)
                .ok_or_else(|| semantic(format!("goal uses undeclared function '{}'", fl.func)))?;
            if fl.args.len() != decl.params.len() {
                return Err(semantic(format!("goal fluent ({} ...) has wrong arity", fl.func)));
            }
            for (arg, param) in fl.args.iter().zip(&decl.params) {
                match arg {
                    Term::Var(v) => {
                        return Err(semantic(format!("goal is not ground: '?{v}'")))
                    }
                    Term::Obj(o) => {
                        let ty = lookup(o)?;
                        if !dom.is_subtype(&ty, &param.ty) {
                            return Err(semantic(format!(
                                "goal fluent ({} ...): '{o}' has type '{ty}', expected '{}'",
                                fl.func, param.ty
                            )));
                        }
                    }
                }
            }
            Ok(())
        }
        NumericExpr::Binary { lhs, rhs, .. } => {
            validate_ground_expr(dom, lhs, lookup)?;
            validate_ground_expr(dom, rhs, lookup)
        }
    }
}
