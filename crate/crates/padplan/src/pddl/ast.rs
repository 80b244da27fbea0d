//! AST for the supported PDDL 2.1 fragment: typed objects, numeric fluents,
//! and durative actions with discrete at-start/at-end effects.

/// Names of the three bounded emotion fluents. Values of these fluents are
/// clamped to [-1, 1] whenever a numeric effect touches them.
pub const PAD_FLUENTS: [&str; 3] = ["pleasure", "arousal", "dominance"];

/// The implicit root type. May be referenced without being declared.
pub const ROOT_TYPE: &str = "object";

#[derive(Debug, Clone, PartialEq)]
pub struct Domain {
    pub name: String,
    pub types: Vec<TypeDecl>,
    pub constants: Vec<TypedIdent>,
    pub predicates: Vec<PredicateDecl>,
    pub functions: Vec<FunctionDecl>,
    pub actions: Vec<DurativeAction>,
}

/// A declared type. `parent` is set only when the source used an explicit
/// `- parent` clause; types declared bare are mutually incomparable siblings.
#[derive(Debug, Clone, PartialEq)]
pub struct TypeDecl {
    pub name: String,
    pub parent: Option<String>,
}

/// A typed constant or problem object.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedIdent {
    pub name: String,
    pub ty: String,
}

/// A typed formal parameter. The name is stored without the leading `?`.
#[derive(Debug, Clone, PartialEq)]
pub struct Param {
    pub name: String,
    pub ty: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PredicateDecl {
    pub name: String,
    pub params: Vec<Param>,
}

/// A numeric-valued function (fluent) signature.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionDecl {
    pub name: String,
    pub params: Vec<Param>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TimeSpecifier {
    AtStart,
    OverAll,
    AtEnd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DurativeAction {
    pub name: String,
    pub params: Vec<Param>,
    pub duration: DurationConstraint,
    /// Conditions annotated `at start`, `over all`, or `at end`.
    pub conditions: Vec<(TimeSpecifier, Condition)>,
    /// Effects annotated `at start` or `at end`; never `over all`.
    pub effects: Vec<(TimeSpecifier, Effect)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DurationConstraint {
    /// `(= ?duration v)`
    Fixed(f64),
    /// `(<= ?duration max)`
    UpperBounded(f64),
}

impl DurationConstraint {
    /// True when `d` satisfies the constraint (strictly positive and within
    /// bounds, with a small slack for re-parsed decimal values).
    pub fn admits(&self, d: f64) -> bool {
        const SLACK: f64 = 1e-9;
        if d <= 0.0 {
            return false;
        }
        match *self {
            DurationConstraint::Fixed(v) => (d - v).abs() <= SLACK,
            DurationConstraint::UpperBounded(m) => d <= m + SLACK,
        }
    }
}

/// An argument position in a lifted expression: a variable or an object name.
#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Var(String),
    Obj(String),
}

/// A lifted predicate application.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub pred: String,
    pub args: Vec<Term>,
}

/// A lifted fluent application.
#[derive(Debug, Clone, PartialEq)]
pub struct FluentExpr {
    pub func: String,
    pub args: Vec<Term>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
}

impl CmpOp {
    pub fn eval(self, lhs: f64, rhs: f64) -> bool {
        match self {
            CmpOp::Lt => lhs < rhs,
            CmpOp::Le => lhs <= rhs,
            CmpOp::Gt => lhs > rhs,
            CmpOp::Ge => lhs >= rhs,
            CmpOp::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Condition {
    Literal { atom: Atom, positive: bool },
    Comparison { op: CmpOp, lhs: NumericExpr, rhs: NumericExpr },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NumOp {
    Increase,
    Decrease,
    Assign,
}

impl NumOp {
    pub fn keyword(self) -> &'static str {
        match self {
            NumOp::Increase => "increase",
            NumOp::Decrease => "decrease",
            NumOp::Assign => "assign",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Effect {
    Add(Atom),
    Delete(Atom),
    Numeric { op: NumOp, fluent: FluentExpr, amount: NumericExpr },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NumericExpr {
    Constant(f64),
    Fluent(FluentExpr),
    /// The `?duration` variable, bound when the action's duration is chosen.
    Duration,
    Binary { op: BinOp, lhs: Box<NumericExpr>, rhs: Box<NumericExpr> },
}

impl NumericExpr {
    pub fn mentions_duration(&self) -> bool {
        match self {
            NumericExpr::Duration => true,
            NumericExpr::Binary { lhs, rhs, .. } => {
                lhs.mentions_duration() || rhs.mentions_duration()
            }
            _ => false,
        }
    }
}

/// A fully ground predicate application; args are object names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroundAtom {
    pub pred: String,
    pub args: Vec<String>,
}

impl GroundAtom {
    pub fn new(pred: &str, args: &[&str]) -> Self {
        GroundAtom {
            pred: pred.to_string(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }
}

impl std::fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}", self.pred)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

/// A fully ground fluent reference; args are object names.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FluentRef {
    pub func: String,
    pub args: Vec<String>,
}

impl FluentRef {
    pub fn new(func: &str, args: &[&str]) -> Self {
        FluentRef {
            func: func.to_string(),
            args: args.iter().map(|a| a.to_string()).collect(),
        }
    }

    /// True for the bounded emotion fluents.
    pub fn is_pad(&self) -> bool {
        PAD_FLUENTS.contains(&self.func.as_str())
    }
}

impl std::fmt::Display for FluentRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}", self.func)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub name: String,
    pub domain_name: String,
    pub objects: Vec<TypedIdent>,
    pub init_facts: Vec<GroundAtom>,
    pub init_fluents: Vec<(FluentRef, f64)>,
    /// Conjunction of ground conditions.
    pub goal: Vec<Condition>,
}

impl Domain {
    /// True when `ty` is declared, or is the implicit root.
    pub fn type_known(&self, ty: &str) -> bool {
        ty == ROOT_TYPE || self.types.iter().any(|t| t.name == ty)
    }

    /// Reflexive-transitive subtype check over explicitly declared parents.
    pub fn is_subtype(&self, ty: &str, ancestor: &str) -> bool {
        if ty == ancestor {
            return true;
        }
        let mut cur = ty;
        // Walk parent links; the hierarchy is acyclic by the declaration check.
        for _ in 0..=self.types.len() {
            match self.types.iter().find(|t| t.name == cur).and_then(|t| t.parent.as_deref()) {
                Some(p) if p == ancestor => return true,
                Some(p) => cur = p,
                None => return false,
            }
        }
        false
    }

    pub fn action(&self, name: &str) -> Option<&DurativeAction> {
        self.actions.iter().find(|a| a.name == name)
    }

    pub fn predicate(&self, name: &str) -> Option<&PredicateDecl> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn function(&self, name: &str) -> Option<&FunctionDecl> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn constant(&self, name: &str) -> Option<&TypedIdent> {
        self.constants.iter().find(|c| c.name == name)
    }
}

impl Problem {
    /// All named objects visible to this problem: domain constants first,
    /// then problem objects.
    pub fn all_objects<'a>(&'a self, dom: &'a Domain) -> impl Iterator<Item = &'a TypedIdent> {
        dom.constants.iter().chain(self.objects.iter())
    }
}
