//! Value and computation types with answer-type decoration, the polarity
//! lattice and subtyping, and lexical type schemes.
//!
//! A computation type `α!n` is a value type together with a pair of
//! level-(n-1) computation types (incoming and outgoing answer types); fully
//! expanded, `α!n` has 2^(n+1) - 1 value-type leaves.

use std::collections::BTreeSet;

use crate::term::Direction;

/// Polarity marker on `Bool`. `Plain` is the subtype of both `Plus` and
/// `Minus`; `Plus` and `Minus` are incomparable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Polarity {
    Plain,
    Plus,
    Minus,
}

impl Polarity {
    pub fn leq(self, other: Polarity) -> bool {
        self == Polarity::Plain || self == other
    }
    /// Least upper bound, if one exists.
    pub fn join(self, other: Polarity) -> Option<Polarity> {
        match (self, other) {
            (Polarity::Plain, p) | (p, Polarity::Plain) => Some(p),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

/// Function flavor at the type level: plain `->`, forward `|>`, backward `<|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FnKind {
    Plain,
    Dir(Direction),
}

/// Value types.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueType {
    /// `Thing{p, q, ...}` — an individual, tracking free logic variables.
    Thing(BTreeSet<String>),
    /// `Bool{p, ...}` with a polarity marker.
    BoolT(BTreeSet<String>, Polarity),
    /// Base type for the arithmetic examples.
    IntT,
    /// `arg -> result` (plain) or `arg |> result` / `arg <| result`.
    Fn(FnKind, Box<ValueType>, Box<CompType>),
}

/// Computation type: a value type plus, for levels above zero, an
/// (incoming, outgoing) pair of computation types one level down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompType {
    pub value: ValueType,
    pub answer: Option<Box<(CompType, CompType)>>,
}

impl CompType {
    pub fn pure(value: ValueType) -> CompType {
        CompType { value, answer: None }
    }

    /// The level n of `α!n`: the depth of the answer spine.
    pub fn level(&self) -> u32 {
        match &self.answer {
            None => 0,
            Some(p) => 1 + p.0.level(),
        }
    }

    /// Count of value-type leaves when all nested answers are expanded.
    pub fn leaf_count(&self) -> u64 {
        let own = 1;
        match &self.answer {
            None => own,
            Some(p) => own + p.0.leaf_count() + p.1.leaf_count(),
        }
    }
}

impl ValueType {
    pub fn thing() -> ValueType {
        ValueType::Thing(BTreeSet::new())
    }
    pub fn boolt() -> ValueType {
        ValueType::BoolT(BTreeSet::new(), Polarity::Plain)
    }
}

/// Subtyping on value types: `Bool{p⃗} ≤ Bool⁺{p⃗}` and `Bool{p⃗} ≤ Bool⁻{p⃗}`;
/// arrows are contravariant in the argument and covariant in the result.
pub fn subtype_value_leq(a: &ValueType, b: &ValueType) -> bool {
    match (a, b) {
        (ValueType::Thing(s1), ValueType::Thing(s2)) => s1 == s2,
        (ValueType::BoolT(s1, p1), ValueType::BoolT(s2, p2)) => s1 == s2 && p1.leq(*p2),
        (ValueType::IntT, ValueType::IntT) => true,
        (ValueType::Fn(k1, a1, r1), ValueType::Fn(k2, a2, r2)) => {
            k1 == k2 && subtype_value_leq(a2, a1) && subtype_leq(r1, r2)
        }
        _ => false,
    }
}

/// Subtyping on computation types: covariant in the value and the outgoing
/// answer, contravariant in the incoming answer.
pub fn subtype_leq(a: &CompType, b: &CompType) -> bool {
    if !subtype_value_leq(&a.value, &b.value) {
        return false;
    }
    match (&a.answer, &b.answer) {
        (None, None) => true,
        (Some(p), Some(q)) => subtype_leq(&q.0, &p.0) && subtype_leq(&p.1, &q.1),
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Type schemes
// ---------------------------------------------------------------------------

/// A set expression in a scheme: literal logic-variable names plus set
/// metavariables (`?p`).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SchemeSet {
    pub names: BTreeSet<String>,
    pub mvars: BTreeSet<String>,
}

impl SchemeSet {
    pub fn lits(names: &[&str]) -> SchemeSet {
        SchemeSet {
            names: names.iter().map(|s| s.to_string()).collect(),
            mvars: BTreeSet::new(),
        }
    }
    pub fn var(v: &str) -> SchemeSet {
        SchemeSet {
            names: BTreeSet::new(),
            mvars: [v.to_string()].into_iter().collect(),
        }
    }
    pub fn lit_and_var(name: &str, v: &str) -> SchemeSet {
        SchemeSet {
            names: [name.to_string()].into_iter().collect(),
            mvars: [v.to_string()].into_iter().collect(),
        }
    }
    pub fn vars2(v1: &str, v2: &str) -> SchemeSet {
        SchemeSet {
            names: BTreeSet::new(),
            mvars: [v1.to_string(), v2.to_string()].into_iter().collect(),
        }
    }
}

/// Polarity slot on a scheme `Bool`: either pinned to a marking, or a named
/// polarity metavariable (written `Bool~p`) instantiated fresh per use and
/// shared per name within a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemePol {
    Const(Polarity),
    MVar(String),
}

/// Value-type skeleton of a scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeVal {
    /// A value-type metavariable (`?a` in value position).
    MVar(String),
    Thing(SchemeSet),
    BoolT(SchemeSet, SchemePol),
    IntT,
    Fn(FnKind, Box<SchemeVal>, Box<SchemeComp>),
}

/// Computation-type skeleton of a scheme. A comp without a written
/// decoration, and a comp metavariable, both instantiate to
/// answer-type-polymorphic (extensible) computations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeComp {
    /// `?g` in computation position: a whole-computation metavariable.
    MVar(String),
    Comp {
        val: SchemeVal,
        /// `![incoming, outgoing]`, if written.
        dec: Option<Box<(SchemeComp, SchemeComp)>>,
    },
}

/// A lexical/constant type scheme: a computation-type skeleton whose
/// metavariables are instantiated fresh at every use.
pub type TypeScheme = SchemeComp;

impl SchemeComp {
    pub fn of_val(val: SchemeVal) -> SchemeComp {
        SchemeComp::Comp { val, dec: None }
    }
}
