//! Type reconstruction for the metalanguage: the Const/Var/Lift/Shift/Reset
//! rules, directional and plain elimination with left-to-right answer-type
//! chaining, polarity subtyping with the Reset side condition, logic-variable
//! tracking sets, and the leak check.
//!
//! Reconstruction is unification-based over answer-type metavariables only;
//! level choices on quantifiers are explicit in the term (shift levels), not
//! inferred. Subsumption applies at application argument positions, at Reset
//! bodies, and at annotation checks.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use crate::error::TypeError;
use crate::syntax::{format_term, parse_scheme};
use crate::term::{Direction, LamKind, Term};
use crate::types::{
    CompType, FnKind, Polarity, SchemeComp, SchemePol, SchemeSet, SchemeVal, ValueType,
};

/// Typing environment: term variables to value types.
pub type Antecedent = BTreeMap<String, ValueType>;

// ---------------------------------------------------------------------------
// Meta types (unification structures)
// ---------------------------------------------------------------------------

/// A set expression: literal logic-variable names plus set metavariables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetExpr {
    pub names: BTreeSet<String>,
    pub vars: BTreeSet<u32>,
}

impl SetExpr {
    fn lits(names: BTreeSet<String>) -> SetExpr {
        SetExpr { names, vars: BTreeSet::new() }
    }
    fn var(v: u32) -> SetExpr {
        SetExpr { names: BTreeSet::new(), vars: [v].into_iter().collect() }
    }
    fn union(&self, other: &SetExpr) -> SetExpr {
        SetExpr {
            names: self.names.union(&other.names).cloned().collect(),
            vars: self.vars.union(&other.vars).cloned().collect(),
        }
    }
}

/// Polarity term: a constant or a metavariable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolTerm {
    Const(Polarity),
    Var(u32),
}

/// Meta value type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MTy {
    Thing(SetExpr),
    Bool(SetExpr, PolTerm),
    Int,
    Fn(FnKind, Box<MTy>, Box<MCT>),
    Var(u32),
}

/// Meta computation type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MCT {
    pub val: MTy,
    pub ans: MAns,
}

/// Meta answer spine: empty (level 0), an (incoming, outgoing) pair, or an
/// extensible tail standing for answer-type polymorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MAns {
    Empty,
    Pair(Box<MCT>, Box<MCT>),
    Var(u32),
}

/// Internal unification failure, mapped to `TypeError` with rule context.
#[derive(Debug, Clone)]
enum UErr {
    Mismatch(String),
    Dir(String),
    Pol(String),
}

// ---------------------------------------------------------------------------
// Inference session
// ---------------------------------------------------------------------------

/// A single inference run: metavariable supply, substitutions, and deferred
/// constraint stores.
pub struct InferSession {
    next: u32,
    ty_subst: BTreeMap<u32, MTy>,
    ans_subst: BTreeMap<u32, MAns>,
    pol_subst: BTreeMap<u32, PolTerm>,
    set_eqs: Vec<(SetExpr, SetExpr, String)>,
    pol_cons: Vec<(PolTerm, PolTerm, String)>,
    /// (value type, context): must be ≤ Bool⁺ if it resolves to Bool.
    reset_checks: Vec<(MTy, String)>,
    /// Logic-variable tags discharged by quantifier constants in the term.
    discharged: BTreeSet<String>,
    enforce_polarity: bool,
    extra_consts: BTreeMap<String, SchemeComp>,
    /// Solved set-variable values (populated by `solve_sets`).
    set_values: BTreeMap<u32, BTreeSet<String>>,
    /// Solved polarity-variable values (populated by `solve_polarity`).
    pol_values: BTreeMap<u32, Polarity>,
}

impl InferSession {
    pub fn new() -> InferSession {
        InferSession {
            next: 0,
            ty_subst: BTreeMap::new(),
            ans_subst: BTreeMap::new(),
            pol_subst: BTreeMap::new(),
            set_eqs: Vec::new(),
            pol_cons: Vec::new(),
            reset_checks: Vec::new(),
            discharged: BTreeSet::new(),
            enforce_polarity: true,
            extra_consts: BTreeMap::new(),
            set_values: BTreeMap::new(),
            pol_values: BTreeMap::new(),
        }
    }

    fn fresh(&mut self) -> u32 {
        self.next += 1;
        self.next
    }
    fn fresh_ty(&mut self) -> MTy {
        MTy::Var(self.fresh())
    }
    fn fresh_pol(&mut self) -> PolTerm {
        PolTerm::Var(self.fresh())
    }
    fn fresh_set(&mut self) -> SetExpr {
        SetExpr::var(self.fresh())
    }
    /// Extensible (answer-type-polymorphic) computation.
    fn fresh_ext(&mut self) -> MCT {
        MCT { val: self.fresh_ty(), ans: MAns::Var(self.fresh()) }
    }
    /// An exact level-n computation: a fully fresh answer tree.
    fn fresh_exact(&mut self, level: u32) -> MCT {
        let ans = if level == 0 {
            MAns::Empty
        } else {
            MAns::Pair(
                Box::new(self.fresh_exact(level - 1)),
                Box::new(self.fresh_exact(level - 1)),
            )
        };
        MCT { val: self.fresh_ty(), ans }
    }

    // -- resolution ---------------------------------------------------------

    fn resolve_ty(&self, t: &MTy) -> MTy {
        match t {
            MTy::Var(v) => match self.ty_subst.get(v) {
                Some(t2) => self.resolve_ty(t2),
                None => t.clone(),
            },
            _ => t.clone(),
        }
    }

    fn resolve_ans(&self, a: &MAns) -> MAns {
        match a {
            MAns::Var(v) => match self.ans_subst.get(v) {
                Some(a2) => self.resolve_ans(a2),
                None => a.clone(),
            },
            _ => a.clone(),
        }
    }

    fn resolve_pol(&self, p: &PolTerm) -> PolTerm {
        match p {
            PolTerm::Var(v) => match self.pol_subst.get(v) {
                Some(p2) => self.resolve_pol(p2),
                None => *p,
            },
            _ => *p,
        }
    }

    // -- occurs checks ------------------------------------------------------

    fn occurs_ty(&self, v: u32, t: &MTy) -> bool {
        match self.resolve_ty(t) {
            MTy::Var(w) => w == v,
            MTy::Fn(_, a, r) => self.occurs_ty(v, &a) || self.occurs_ct_ty(v, &r),
            _ => false,
        }
    }
    fn occurs_ct_ty(&self, v: u32, c: &MCT) -> bool {
        if self.occurs_ty(v, &c.val) {
            return true;
        }
        match self.resolve_ans(&c.ans) {
            MAns::Pair(i, o) => self.occurs_ct_ty(v, &i) || self.occurs_ct_ty(v, &o),
            _ => false,
        }
    }
    fn occurs_ans(&self, v: u32, a: &MAns) -> bool {
        match self.resolve_ans(a) {
            MAns::Var(w) => w == v,
            MAns::Pair(i, o) => self.occurs_ct_ans(v, &i) || self.occurs_ct_ans(v, &o),
            MAns::Empty => false,
        }
    }
    fn occurs_ct_ans(&self, v: u32, c: &MCT) -> bool {
        if let MTy::Fn(_, _, r) = self.resolve_ty(&c.val) {
            if self.occurs_ct_ans(v, &r) {
                return true;
            }
        }
        self.occurs_ans(v, &c.ans)
    }

    // -- unification (equality) ---------------------------------------------

    fn unify_ty(&mut self, a: &MTy, b: &MTy) -> Result<(), UErr> {
        let ra = self.resolve_ty(a);
        let rb = self.resolve_ty(b);
        match (ra, rb) {
            (MTy::Var(v), MTy::Var(w)) if v == w => Ok(()),
            (MTy::Var(v), t) | (t, MTy::Var(v)) => {
                if self.occurs_ty(v, &t) {
                    return Err(UErr::Mismatch("occurs check (value)".into()));
                }
                self.ty_subst.insert(v, t);
                Ok(())
            }
            (MTy::Thing(s1), MTy::Thing(s2)) => {
                self.set_eq(s1, s2, "Thing var sets");
                Ok(())
            }
            (MTy::Bool(s1, p1), MTy::Bool(s2, p2)) => {
                self.set_eq(s1, s2, "Bool var sets");
                self.pol_unify(p1, p2)
            }
            (MTy::Int, MTy::Int) => Ok(()),
            (MTy::Fn(k1, a1, r1), MTy::Fn(k2, a2, r2)) => {
                if k1 != k2 {
                    return Err(UErr::Dir(format!(
                        "arrow flavor {} vs {}",
                        kind_name(k1),
                        kind_name(k2)
                    )));
                }
                self.unify_ty(&a1, &a2)?;
                self.unify_ct(&r1, &r2)
            }
            (x, y) => Err(UErr::Mismatch(format!(
                "cannot unify {} with {}",
                ty_head(&x),
                ty_head(&y)
            ))),
        }
    }

    fn unify_ct(&mut self, a: &MCT, b: &MCT) -> Result<(), UErr> {
        self.unify_ty(&a.val, &b.val)?;
        self.unify_ans(&a.ans, &b.ans)
    }

    fn unify_ans(&mut self, a: &MAns, b: &MAns) -> Result<(), UErr> {
        let ra = self.resolve_ans(a);
        let rb = self.resolve_ans(b);
        match (ra, rb) {
            (MAns::Empty, MAns::Empty) => Ok(()),
            (MAns::Pair(i1, o1), MAns::Pair(i2, o2)) => {
                self.unify_ct(&i1, &i2)?;
                self.unify_ct(&o1, &o2)
            }
            (MAns::Var(v), MAns::Var(w)) if v == w => Ok(()),
            (MAns::Var(v), MAns::Empty) | (MAns::Empty, MAns::Var(v)) => {
                self.ans_subst.insert(v, MAns::Empty);
                Ok(())
            }
            (MAns::Var(v), MAns::Var(w)) => {
                self.ans_subst.insert(v, MAns::Var(w));
                Ok(())
            }
            (MAns::Var(v), p @ MAns::Pair(..)) | (p @ MAns::Pair(..), MAns::Var(v)) => {
                // An unconstrained answer variable simply takes the pair's
                // shape; transparency (incoming = outgoing) is introduced
                // only by explicit lifting, never by unification.
                if let MAns::Pair(ref i, ref o) = p {
                    if self.occurs_ct_ans(v, i) || self.occurs_ct_ans(v, o) {
                        return Err(UErr::Mismatch("occurs check (answer)".into()));
                    }
                }
                self.ans_subst.insert(v, p);
                Ok(())
            }
            (MAns::Empty, MAns::Pair(..)) | (MAns::Pair(..), MAns::Empty) => Err(UErr::Mismatch(
                "level mismatch: empty answer stack vs delimited pair".into(),
            )),
        }
    }

    fn pol_unify(&mut self, a: PolTerm, b: PolTerm) -> Result<(), UErr> {
        if !self.enforce_polarity {
            return Ok(());
        }
        let ra = self.resolve_pol(&a);
        let rb = self.resolve_pol(&b);
        match (ra, rb) {
            (PolTerm::Const(x), PolTerm::Const(y)) => {
                if x == y {
                    Ok(())
                } else {
                    Err(UErr::Pol(format!("{x:?} vs {y:?}")))
                }
            }
            (PolTerm::Var(v), PolTerm::Var(w)) if v == w => Ok(()),
            (PolTerm::Var(v), t) | (t, PolTerm::Var(v)) => {
                self.pol_subst.insert(v, t);
                Ok(())
            }
        }
    }

    fn set_eq(&mut self, a: SetExpr, b: SetExpr, why: &str) {
        if a != b {
            self.set_eqs.push((a, b, why.to_string()));
        }
    }

    // -- subsumption (a ≤ b) --------------------------------------------------

    /// Replace `Bool` polarities with fresh variables so subsumption against
    /// an unresolved metavariable does not over-commit to equality.
    fn pol_skeleton(&mut self, t: &MTy) -> MTy {
        match self.resolve_ty(t) {
            MTy::Bool(s, _) => MTy::Bool(s, self.fresh_pol()),
            MTy::Fn(k, a, r) => {
                let a2 = self.pol_skeleton(&a);
                let r2 = MCT { val: self.pol_skeleton(&r.val), ans: r.ans.clone() };
                MTy::Fn(k, Box::new(a2), Box::new(r2))
            }
            other => other,
        }
    }

    fn skel_ct(&mut self, c: &MCT) -> MCT {
        MCT { val: self.pol_skeleton(&c.val), ans: self.skel_ans(&c.ans) }
    }

    fn skel_ans(&mut self, a: &MAns) -> MAns {
        match self.resolve_ans(a) {
            MAns::Pair(i, o) => {
                MAns::Pair(Box::new(self.skel_ct(&i)), Box::new(self.skel_ct(&o)))
            }
            other => other,
        }
    }

    fn sub_ty(&mut self, a: &MTy, b: &MTy) -> Result<(), UErr> {
        let ra = self.resolve_ty(a);
        let rb = self.resolve_ty(b);
        match (ra, rb) {
            (MTy::Var(v), MTy::Var(w)) if v == w => Ok(()),
            (MTy::Var(v), t) => {
                let skel = self.pol_skeleton(&t);
                if self.occurs_ty(v, &skel) {
                    return Err(UErr::Mismatch("occurs check (value)".into()));
                }
                self.ty_subst.insert(v, skel.clone());
                self.sub_ty(&skel, &t)
            }
            (t, MTy::Var(v)) => {
                let skel = self.pol_skeleton(&t);
                if self.occurs_ty(v, &skel) {
                    return Err(UErr::Mismatch("occurs check (value)".into()));
                }
                self.ty_subst.insert(v, skel.clone());
                self.sub_ty(&t, &skel)
            }
            (MTy::Thing(s1), MTy::Thing(s2)) => {
                self.set_eq(s1, s2, "Thing var sets");
                Ok(())
            }
            (MTy::Bool(s1, p1), MTy::Bool(s2, p2)) => {
                self.set_eq(s1, s2, "Bool var sets");
                self.pol_cons.push((p1, p2, "Bool subtyping".into()));
                Ok(())
            }
            (MTy::Int, MTy::Int) => Ok(()),
            (MTy::Fn(k1, a1, r1), MTy::Fn(k2, a2, r2)) => {
                if k1 != k2 {
                    return Err(UErr::Dir(format!(
                        "arrow flavor {} vs {}",
                        kind_name(k1),
                        kind_name(k2)
                    )));
                }
                self.sub_ty(&a2, &a1)?;
                self.sub_ct(&r1, &r2)
            }
            (x, y) => Err(UErr::Mismatch(format!(
                "cannot coerce {} to {}",
                ty_head(&x),
                ty_head(&y)
            ))),
        }
    }

    fn sub_ct(&mut self, a: &MCT, b: &MCT) -> Result<(), UErr> {
        self.sub_ty(&a.val, &b.val)?;
        self.sub_ans(&a.ans, &b.ans)
    }

    fn sub_ans(&mut self, a: &MAns, b: &MAns) -> Result<(), UErr> {
        let ra = self.resolve_ans(a);
        let rb = self.resolve_ans(b);
        match (ra, rb) {
            (MAns::Empty, MAns::Empty) => Ok(()),
            (MAns::Pair(i1, o1), MAns::Pair(i2, o2)) => {
                self.sub_ct(&i2, &i1)?;
                self.sub_ct(&o1, &o2)
            }
            // Force the variable side to the other's shape, then retry.
            (MAns::Var(_), _) | (_, MAns::Var(_)) => {
                let (va, vb) = (self.resolve_ans(a), self.resolve_ans(b));
                match (va, vb) {
                    (MAns::Var(v), MAns::Var(w)) => {
                        if v != w {
                            self.ans_subst.insert(v, MAns::Var(w));
                        }
                        Ok(())
                    }
                    (MAns::Var(v), other) | (other, MAns::Var(v)) => {
                        match other {
                            MAns::Empty => {
                                self.ans_subst.insert(v, MAns::Empty);
                            }
                            MAns::Pair(ref i, ref o) => {
                                if self.occurs_ct_ans(v, i) || self.occurs_ct_ans(v, o) {
                                    return Err(UErr::Mismatch("occurs check (answer)".into()));
                                }
                                // Bind to a copy with fresh polarities so the
                                // subsequent one-sided comparison does not
                                // over-commit to polarity equality.
                                let skel =
                                    MAns::Pair(Box::new(self.skel_ct(i)), Box::new(self.skel_ct(o)));
                                self.ans_subst.insert(v, skel);
                            }
                            MAns::Var(_) => unreachable!(),
                        }
                        self.sub_ans(a, b)
                    }
                    _ => unreachable!(),
                }
            }
            _ => Err(UErr::Mismatch("answer spine shape mismatch".into())),
        }
    }

    // -- level manipulation ---------------------------------------------------

    /// Lower bound of the answer-spine depth, and whether the spine ends in
    /// an extensible tail.
    fn spine(&self, c: &MCT) -> (u32, bool) {
        match self.resolve_ans(&c.ans) {
            MAns::Empty => (0, false),
            MAns::Var(_) => (0, true),
            MAns::Pair(i, _) => {
                let (l, e) = self.spine(&i);
                (l + 1, e)
            }
        }
    }

    /// Force `c` to be exactly level `target`, extending extensible tails
    /// and closing them at the leaves.
    fn force_exact(&mut self, c: &MCT, target: u32) -> Result<(), UErr> {
        let ans = self.resolve_ans(&c.ans);
        if target == 0 {
            match ans {
                MAns::Empty => Ok(()),
                MAns::Var(v) => {
                    self.ans_subst.insert(v, MAns::Empty);
                    Ok(())
                }
                MAns::Pair(..) => Err(UErr::Mismatch(
                    "computation is impure at a level where purity is required".into(),
                )),
            }
        } else {
            let (i, o) = match ans {
                MAns::Pair(i, o) => (i, o),
                MAns::Var(v) => {
                    // An unconstrained tail absorbs the remaining levels the
                    // way iterated lifting of a value would: incoming and
                    // outgoing share one computation whose spine repeats the
                    // lift shape, with the sibling slots left independent.
                    let shared = self.lift_shape(target - 1);
                    self.ans_subst.insert(
                        v,
                        MAns::Pair(Box::new(shared.clone()), Box::new(shared.clone())),
                    );
                    (Box::new(shared.clone()), Box::new(shared))
                }
                MAns::Empty => {
                    return Err(UErr::Mismatch("level too low to extend".into()))
                }
            };
            self.force_exact(&i, target - 1)?;
            self.force_exact(&o, target - 1)
        }
    }

    /// The answer shape produced by lifting a value to level `depth`:
    /// `β_{γ!(d-1)}^{T(d-1)}` at each spine step, leaves fresh.
    fn lift_shape(&mut self, depth: u32) -> MCT {
        if depth == 0 {
            return MCT { val: self.fresh_ty(), ans: MAns::Empty };
        }
        let slot = self.fresh_exact(depth - 1);
        let inner = self.lift_shape(depth - 1);
        MCT {
            val: self.fresh_ty(),
            ans: MAns::Pair(Box::new(slot), Box::new(inner)),
        }
    }

    /// Raise a computation to exactly level `target`: extensible tails
    /// absorb levels (pure Lift); rigid computations get the general Lift
    /// applied at the top.
    fn raise(&mut self, c: &MCT, target: u32) -> Result<MCT, UErr> {
        let (lb, ext) = self.spine(c);
        if lb > target {
            return Err(UErr::Mismatch(format!(
                "computation of level {lb} used where level {target} is required"
            )));
        }
        let mut cur = c.clone();
        if !ext {
            for _ in 0..(target - lb) {
                cur = self.lift_top(&cur);
            }
        }
        self.force_exact(&cur, target)?;
        Ok(cur)
    }

    /// One application of the general Lift rule:
    /// `α_{γ1!n}^{γ0!n}` becomes `α_{β_{γ2!n}^{γ1!n}}^{β_{γ2!n}^{γ0!n}}`.
    fn lift_top(&mut self, c: &MCT) -> MCT {
        let ans = self.resolve_ans(&c.ans);
        let (g1, g0) = match ans {
            MAns::Pair(i, o) => (*i, *o),
            // Level 0: base Lift, α ⊢ α_γ^γ.
            MAns::Empty | MAns::Var(_) => {
                let shared = self.fresh_ext();
                return MCT {
                    val: c.val.clone(),
                    ans: MAns::Pair(Box::new(shared.clone()), Box::new(shared)),
                };
            }
        };
        let beta = self.fresh_ty();
        let g2 = self.fresh_ext();
        MCT {
            val: c.val.clone(),
            ans: MAns::Pair(
                Box::new(MCT {
                    val: beta.clone(),
                    ans: MAns::Pair(Box::new(g2.clone()), Box::new(g1)),
                }),
                Box::new(MCT {
                    val: beta,
                    ans: MAns::Pair(Box::new(g2), Box::new(g0)),
                }),
            ),
        }
    }

    // -- scheme instantiation -------------------------------------------------

    /// Instantiate a scheme, replacing every metavariable with a fresh
    /// unification variable (shared per name within one instantiation).
    pub fn instantiate(&mut self, s: &SchemeComp) -> MCT {
        let mut map: BTreeMap<String, u32> = BTreeMap::new();
        self.inst_comp(s, &mut map, false)
    }

    /// Instantiate a constant's scheme. Constants are polarity-transparent:
    /// a bare `Bool` stands for any marking, so plain polarities become fresh
    /// variables. Lexicon schemes keep `Bool` pinned to the neutral marking —
    /// that pin is what classifies a determiner.
    fn instantiate_transparent(&mut self, s: &SchemeComp) -> MCT {
        let mut map: BTreeMap<String, u32> = BTreeMap::new();
        self.inst_comp(s, &mut map, true)
    }

    fn named(&mut self, map: &mut BTreeMap<String, u32>, name: &str) -> u32 {
        if let Some(v) = map.get(name) {
            *v
        } else {
            let v = self.fresh();
            map.insert(name.to_string(), v);
            v
        }
    }

    fn inst_comp(&mut self, s: &SchemeComp, map: &mut BTreeMap<String, u32>, poly: bool) -> MCT {
        match s {
            SchemeComp::MVar(name) => {
                let v = self.named(map, &format!("c.val.{name}"));
                let a = self.named(map, &format!("c.ans.{name}"));
                MCT { val: MTy::Var(v), ans: MAns::Var(a) }
            }
            SchemeComp::Comp { val, dec } => {
                let v = self.inst_val(val, map, poly);
                let ans = match dec {
                    None => MAns::Var(self.fresh()),
                    Some(d) => MAns::Pair(
                        Box::new(self.inst_comp(&d.0, map, poly)),
                        Box::new(self.inst_comp(&d.1, map, poly)),
                    ),
                };
                MCT { val: v, ans }
            }
        }
    }

    fn inst_val(&mut self, s: &SchemeVal, map: &mut BTreeMap<String, u32>, poly: bool) -> MTy {
        match s {
            SchemeVal::MVar(name) => MTy::Var(self.named(map, &format!("v.{name}"))),
            SchemeVal::Thing(set) => MTy::Thing(self.inst_set(set, map)),
            SchemeVal::BoolT(set, pol) => {
                let p = match pol {
                    SchemePol::MVar(name) => {
                        PolTerm::Var(self.named(map, &format!("p.{name}")))
                    }
                    SchemePol::Const(Polarity::Plain) if poly => self.fresh_pol(),
                    SchemePol::Const(c) => PolTerm::Const(*c),
                };
                MTy::Bool(self.inst_set(set, map), p)
            }
            SchemeVal::IntT => MTy::Int,
            SchemeVal::Fn(kind, a, r) => {
                let arg = self.inst_val(a, map, poly);
                let res = self.inst_comp(r, map, poly);
                MTy::Fn(*kind, Box::new(arg), Box::new(res))
            }
        }
    }

    fn inst_set(&mut self, s: &SchemeSet, map: &mut BTreeMap<String, u32>) -> SetExpr {
        let mut vars = BTreeSet::new();
        for m in &s.mvars {
            vars.insert(self.named(map, &format!("s.{m}")));
        }
        SetExpr { names: s.names.clone(), vars }
    }

    /// Metavariable identifiers occurring in a meta computation type (for
    /// freshness checks in tests).
    pub fn meta_vars_of(&self, c: &MCT) -> BTreeSet<u32> {
        let mut acc = BTreeSet::new();
        self.collect_vars_ct(c, &mut acc);
        acc
    }
    fn collect_vars_ct(&self, c: &MCT, acc: &mut BTreeSet<u32>) {
        self.collect_vars_ty(&c.val, acc);
        match self.resolve_ans(&c.ans) {
            MAns::Empty => {}
            MAns::Var(v) => {
                acc.insert(v);
            }
            MAns::Pair(i, o) => {
                self.collect_vars_ct(&i, acc);
                self.collect_vars_ct(&o, acc);
            }
        }
    }
    fn collect_vars_ty(&self, t: &MTy, acc: &mut BTreeSet<u32>) {
        match self.resolve_ty(t) {
            MTy::Var(v) => {
                acc.insert(v);
            }
            MTy::Thing(s) => acc.extend(s.vars.iter().copied()),
            MTy::Bool(s, p) => {
                acc.extend(s.vars.iter().copied());
                if let PolTerm::Var(v) = self.resolve_pol(&p) {
                    acc.insert(v);
                }
            }
            MTy::Int => {}
            MTy::Fn(_, a, r) => {
                self.collect_vars_ty(&a, acc);
                self.collect_vars_ct(&r, acc);
            }
        }
    }
}

fn kind_name(k: FnKind) -> &'static str {
    match k {
        FnKind::Plain => "plain `->`",
        FnKind::Dir(Direction::Forward) => "forward `|>`",
        FnKind::Dir(Direction::Backward) => "backward `<|`",
    }
}

fn ty_head(t: &MTy) -> String {
    match t {
        MTy::Thing(_) => "Thing".into(),
        MTy::Bool(..) => "Bool".into(),
        MTy::Int => "Int".into(),
        MTy::Fn(k, ..) => format!("a {} function", kind_name(*k)),
        MTy::Var(v) => format!("?{v}"),
    }
}

// ---------------------------------------------------------------------------
// Constant signatures
// ---------------------------------------------------------------------------

/// The kernel constant table (name, scheme source). Tagged quantifier
/// constants are handled separately since their scheme mentions the tag.
fn builtin_consts() -> &'static BTreeMap<String, SchemeComp> {
    static TABLE: OnceLock<BTreeMap<String, SchemeComp>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let entries: &[(&str, &str)] = &[
            ("Alice", "Thing"),
            ("Bob", "Thing"),
            ("CS187", "Thing"),
            ("Student", "Thing{?p} -> Bool{?p}"),
            ("Course", "Thing{?p} -> Bool{?p}"),
            ("Representative", "Thing{?p} -> Bool{?p}"),
            ("Company", "Thing{?p} -> Bool{?p}"),
            ("Sample", "Thing{?p} -> Bool{?p}"),
            ("Liked", "Thing{?p} |> (Thing{?q} <| Bool{?p,?q} ![?d,?d]) ![?g,?g]"),
            ("Saw", "Thing{?p} |> (Thing{?q} <| Bool{?p,?q} ![?d,?d]) ![?g,?g]"),
            ("Passed", "Thing{?p} |> (Thing{?q} <| Bool{?p,?q} ![?d,?d]) ![?g,?g]"),
            ("Of", "Thing{?p} -> Thing{?q} -> Bool{?p,?q}"),
            ("implies", "Bool{?p} -> Bool{?q} -> Bool{?p,?q}"),
            ("and", "Bool{?p} -> Bool{?q} -> Bool{?p,?q}"),
            ("not", "Bool{?p} -> Bool{?p}"),
            ("plus", "Int -> Int -> Int"),
            ("times", "Int -> Int -> Int"),
        ];
        entries
            .iter()
            .map(|(n, src)| {
                (n.to_string(), parse_scheme(src).expect("builtin scheme parses"))
            })
            .collect()
    })
}

impl InferSession {
    /// Type of a constant occurrence.
    fn const_type(&mut self, name: &str, tag: &Option<String>) -> Result<MCT, TypeError> {
        if let Some(t) = tag {
            if t == name {
                // A gensym'd logic constant: Thing{t}.
                return Ok(MCT {
                    val: MTy::Thing(SetExpr::lits([t.clone()].into_iter().collect())),
                    ans: MAns::Var(self.fresh()),
                });
            }
            match name {
                // forall/exists : Bool{t, q⃗} -> Bool{q⃗}, discharging t.
                "forall" | "exists" => {
                    self.discharged.insert(t.clone());
                    let q = self.fresh_set();
                    let arg = MTy::Bool(
                        q.union(&SetExpr::lits([t.clone()].into_iter().collect())),
                        self.fresh_pol(),
                    );
                    let res = MCT {
                        val: MTy::Bool(q, self.fresh_pol()),
                        ans: MAns::Var(self.fresh()),
                    };
                    return Ok(MCT {
                        val: MTy::Fn(FnKind::Plain, Box::new(arg), Box::new(res)),
                        ans: MAns::Var(self.fresh()),
                    });
                }
                // most : Bool{t, p⃗} -> Bool{t, q⃗} -> Bool{p⃗ ∪ q⃗}.
                "most" => {
                    self.discharged.insert(t.clone());
                    let p = self.fresh_set();
                    let q = self.fresh_set();
                    let tset = SetExpr::lits([t.clone()].into_iter().collect());
                    let arg1 = MTy::Bool(p.union(&tset), self.fresh_pol());
                    let arg2 = MTy::Bool(q.union(&tset), self.fresh_pol());
                    let res = MCT {
                        val: MTy::Bool(p.union(&q), self.fresh_pol()),
                        ans: MAns::Var(self.fresh()),
                    };
                    let inner = MCT {
                        val: MTy::Fn(FnKind::Plain, Box::new(arg2), Box::new(res)),
                        ans: MAns::Var(self.fresh()),
                    };
                    return Ok(MCT {
                        val: MTy::Fn(FnKind::Plain, Box::new(arg1), Box::new(inner)),
                        ans: MAns::Var(self.fresh()),
                    });
                }
                _ => {
                    return Err(TypeError::UnknownConstant(format!("{name}[{t}]")));
                }
            }
        }
        let scheme = if let Some(s) = self.extra_consts.get(name) {
            s.clone()
        } else if let Some(s) = builtin_consts().get(name) {
            s.clone()
        } else {
            return Err(TypeError::UnknownConstant(name.to_string()));
        };
        Ok(self.instantiate_transparent(&scheme))
    }
}

// ---------------------------------------------------------------------------
// The inference rules
// ---------------------------------------------------------------------------

impl InferSession {
    fn fail(&self, rule: &str, at: &Term, e: UErr) -> TypeError {
        let at = format_term(at);
        match e {
            UErr::Mismatch(msg) => TypeError::UnificationFailure { rule: rule.into(), at, msg },
            UErr::Dir(msg) => TypeError::DirectionMismatch { rule: rule.into(), at, msg },
            UErr::Pol(msg) => TypeError::PolarityViolation { rule: rule.into(), at, msg },
        }
    }

    fn infer_term(
        &mut self,
        env: &BTreeMap<String, MTy>,
        e: &Term,
    ) -> Result<MCT, TypeError> {
        match e {
            Term::Const(name, tag) => self.const_type(name, tag),
            Term::Var(x) => match env.get(x) {
                Some(t) => Ok(MCT { val: t.clone(), ans: MAns::Var(self.fresh()) }),
                None => Err(TypeError::UnboundVariable(x.clone())),
            },
            Term::IntLit(_) => Ok(MCT { val: MTy::Int, ans: MAns::Var(self.fresh()) }),
            Term::Lam(kind, x, body) => {
                let arg = self.fresh_ty();
                let mut env2 = env.clone();
                env2.insert(x.clone(), arg.clone());
                let tb = self.infer_term(&env2, body)?;
                let k = match kind {
                    LamKind::Plain => FnKind::Plain,
                    LamKind::Dir(d) => FnKind::Dir(*d),
                };
                Ok(MCT {
                    val: MTy::Fn(k, Box::new(arg), Box::new(tb)),
                    ans: MAns::Var(self.fresh()),
                })
            }
            Term::App(f, a) => self.infer_app(env, e, f, a, FnKind::Plain, true),
            Term::FwdApp(f, a) => {
                self.infer_app(env, e, f, a, FnKind::Dir(Direction::Forward), true)
            }
            Term::BwdApp(a, f) => {
                self.infer_app(env, e, f, a, FnKind::Dir(Direction::Backward), false)
            }
            Term::Shift(n, f, body) => {
                let alpha = self.fresh_ty();
                let gamma = self.fresh_exact(*n);
                let fty = MTy::Fn(FnKind::Plain, Box::new(alpha.clone()), Box::new(gamma.clone()));
                let mut env2 = env.clone();
                env2.insert(f.clone(), fty);
                let tb = self.infer_term(&env2, body)?;
                let delta = self.raise(&tb, *n).map_err(|u| self.fail("Shift", e, u))?;
                Ok(MCT {
                    val: alpha,
                    ans: MAns::Pair(Box::new(gamma), Box::new(delta)),
                })
            }
            Term::Reset(n, body) => {
                let tb = self.infer_term(env, body)?;
                let (lb, _) = self.spine(&tb);
                let top = lb.max(n + 1);
                let mut cur = self.raise(&tb, top).map_err(|u| self.fail("Reset", e, u))?;
                let mut level = top;
                while level > *n {
                    cur = self.peel(&cur, level, e)?;
                    level -= 1;
                }
                Ok(cur)
            }
            Term::Ann(body, scheme) => {
                let tb = self.infer_term(env, body)?;
                let s = self.instantiate(scheme);
                self.sub_ct(&tb, &s).map_err(|u| self.fail("Ann", e, u))?;
                Ok(s)
            }
        }
    }

    /// One Reset peel: the body has level `level`; produce the outgoing
    /// answer, checking the incoming answer is transparent around the value
    /// and deferring the polarity side condition on the result.
    fn peel(&mut self, body: &MCT, level: u32, at: &Term) -> Result<MCT, TypeError> {
        debug_assert!(level >= 1);
        let alpha = self.fresh_ty();
        let incoming = if level == 1 {
            MCT { val: alpha.clone(), ans: MAns::Empty }
        } else {
            let g = self.fresh_exact(level - 2);
            MCT {
                val: alpha.clone(),
                ans: MAns::Pair(Box::new(g.clone()), Box::new(g)),
            }
        };
        let out = self.fresh_exact(level - 1);
        let pattern = MCT {
            val: alpha,
            ans: MAns::Pair(Box::new(incoming), Box::new(out.clone())),
        };
        self.sub_ct(body, &pattern)
            .map_err(|u| self.fail(&format!("Reset^{}", level - 1), at, u))?;
        self.reset_checks.push((
            out.val.clone(),
            format!("Reset^{} at `{}`", level - 1, format_term(at)),
        ));
        Ok(out)
    }

    fn infer_app(
        &mut self,
        env: &BTreeMap<String, MTy>,
        whole: &Term,
        f: &Term,
        a: &Term,
        kind: FnKind,
        fn_first: bool,
    ) -> Result<MCT, TypeError> {
        let tf = self.infer_term(env, f)?;
        let ta = self.infer_term(env, a)?;
        let (lf, _) = self.spine(&tf);
        let (la, _) = self.spine(&ta);
        let rule = match kind {
            FnKind::Plain => "->E",
            FnKind::Dir(Direction::Forward) => "|>E",
            FnKind::Dir(Direction::Backward) => "<|E",
        };

        // Pure elimination: both sides pure (level 0), result is the arrow's
        // own result computation.
        if lf == 0 && la == 0 {
            let arg = self.fresh_ty();
            let res = self.fresh_ext();
            let want = MTy::Fn(kind, Box::new(arg.clone()), Box::new(res.clone()));
            self.unify_ty(&tf.val, &want).map_err(|u| self.fail(rule, whole, u))?;
            self.sub_ty(&ta.val, &arg).map_err(|u| self.fail(rule, whole, u))?;
            return Ok(res);
        }

        // Leveled elimination at n+1 = max(1, level(F), level(E)), with the
        // answer chain ordered by evaluation: first-evaluated's outgoing is
        // the whole's outgoing.
        let n1 = lf.max(la).max(1);
        let n = n1 - 1;
        let tfr = self.raise(&tf, n1).map_err(|u| self.fail(rule, whole, u))?;
        let tar = self.raise(&ta, n1).map_err(|u| self.fail(rule, whole, u))?;

        let g0 = self.fresh_exact(n);
        let g1 = self.fresh_exact(n);
        let g2 = self.fresh_exact(n);
        let g3 = self.fresh_exact(n);
        let arg = self.fresh_ty();
        let beta = self.fresh_ty();
        let arrow_res = MCT {
            val: beta.clone(),
            ans: MAns::Pair(Box::new(g3.clone()), Box::new(g2.clone())),
        };
        let arrow = MTy::Fn(kind, Box::new(arg.clone()), Box::new(arrow_res));

        // fn_first: F gets (g1 -> g0), E gets (g2 -> g1).
        // arg-first (backward): E gets (g1 -> g0), F gets (g2 -> g1).
        let (fpair, apair) = if fn_first {
            ((g1.clone(), g0.clone()), (g2.clone(), g1.clone()))
        } else {
            ((g2.clone(), g1.clone()), (g1.clone(), g0.clone()))
        };
        let fpat = MCT {
            val: arrow,
            ans: MAns::Pair(Box::new(fpair.0), Box::new(fpair.1)),
        };
        let apat = MCT {
            val: arg,
            ans: MAns::Pair(Box::new(apair.0), Box::new(apair.1)),
        };
        self.unify_ct(&tfr, &fpat).map_err(|u| self.fail(rule, whole, u))?;
        self.sub_ct(&tar, &apat).map_err(|u| self.fail(rule, whole, u))?;

        Ok(MCT {
            val: beta,
            ans: MAns::Pair(Box::new(g3), Box::new(g0)),
        })
    }

    // -- constraint solving ---------------------------------------------------

    fn set_meaning(&self, s: &SetExpr) -> BTreeSet<String> {
        let mut out = s.names.clone();
        for v in &s.vars {
            if let Some(vals) = self.set_values.get(v) {
                out.extend(vals.iter().cloned());
            }
        }
        out
    }

    fn solve_sets(&mut self) -> Result<(), TypeError> {
        // Least-fixpoint propagation: push missing elements into a variable
        // appearing only on the deficient side (smallest id first).
        let eqs = self.set_eqs.clone();
        let mut rounds = 0usize;
        loop {
            rounds += 1;
            if rounds > 10_000 {
                break;
            }
            // Forced pushes first: a missing element whose deficient side
            // offers exactly one variable to absorb it. Pushing into one of
            // several candidates prematurely can poison unrelated equations,
            // so ambiguous pushes wait until nothing forced remains.
            let mut changed = false;
            for (l, r, _) in &eqs {
                for (src, dst) in [(l, r), (r, l)] {
                    let missing: BTreeSet<_> = self
                        .set_meaning(src)
                        .difference(&self.set_meaning(dst))
                        .cloned()
                        .collect();
                    if missing.is_empty() {
                        continue;
                    }
                    let cands: Vec<u32> = dst
                        .vars
                        .iter()
                        .copied()
                        .filter(|v| !src.vars.contains(v))
                        .collect();
                    if cands.len() == 1 {
                        self.set_values.entry(cands[0]).or_default().extend(missing);
                        changed = true;
                    }
                }
            }
            if changed {
                continue;
            }
            // Fixpoint of forced pushes reached; resolve one remaining
            // deficiency and resume. Prefer the least-entangled absorber:
            // the variable occurring in the fewest equations (ties to the
            // youngest), so shared variables are not polluted when a local
            // slack variable can take the elements instead.
            let mut occurs: BTreeMap<u32, usize> = BTreeMap::new();
            for (l, r, _) in &eqs {
                for v in l.vars.iter().chain(r.vars.iter()) {
                    *occurs.entry(*v).or_default() += 1;
                }
            }
            let mut pushed = false;
            'greedy: for (l, r, _) in &eqs {
                for (src, dst) in [(l, r), (r, l)] {
                    let missing: BTreeSet<_> = self
                        .set_meaning(src)
                        .difference(&self.set_meaning(dst))
                        .cloned()
                        .collect();
                    if missing.is_empty() {
                        continue;
                    }
                    let pick = dst
                        .vars
                        .iter()
                        .copied()
                        .filter(|v| !src.vars.contains(v))
                        .min_by_key(|v| (occurs.get(v).copied().unwrap_or(0), u32::MAX - v));
                    if let Some(v) = pick {
                        self.set_values.entry(v).or_default().extend(missing);
                        pushed = true;
                        break 'greedy;
                    }
                }
            }
            if !pushed {
                break;
            }
        }
        for (l, r, why) in &eqs {
            let ml = self.set_meaning(l);
            let mr = self.set_meaning(r);
            if ml != mr {
                return Err(TypeError::UnificationFailure {
                    rule: "var sets".into(),
                    at: why.clone(),
                    msg: format!(
                        "{{{}}} vs {{{}}}",
                        ml.into_iter().collect::<Vec<_>>().join(","),
                        mr.into_iter().collect::<Vec<_>>().join(",")
                    ),
                });
            }
        }
        Ok(())
    }

    fn pol_value(&self, p: &PolTerm) -> Polarity {
        match self.resolve_pol(p) {
            PolTerm::Const(c) => c,
            PolTerm::Var(v) => *self.pol_values.get(&v).unwrap_or(&Polarity::Plain),
        }
    }

    fn solve_polarity(&mut self) -> Result<(), TypeError> {
        if !self.enforce_polarity {
            return Ok(());
        }
        // Reset side conditions become ordinary constraints when the value
        // resolved to Bool.
        let checks = self.reset_checks.clone();
        for (ty, why) in &checks {
            if let MTy::Bool(_, p) = self.resolve_ty(ty) {
                self.pol_cons.push((p, PolTerm::Const(Polarity::Plus), why.clone()));
            }
        }
        // Least-solution propagation of lower bounds.
        let cons = self.pol_cons.clone();
        let mut changed = true;
        while changed {
            changed = false;
            for (lo, hi, why) in &cons {
                let vlo = self.pol_value(lo);
                if let PolTerm::Var(v) = self.resolve_pol(hi) {
                    let cur = *self.pol_values.get(&v).unwrap_or(&Polarity::Plain);
                    match cur.join(vlo) {
                        Some(j) => {
                            if j != cur {
                                self.pol_values.insert(v, j);
                                changed = true;
                            }
                        }
                        None => {
                            return Err(TypeError::PolarityViolation {
                                rule: "Sub".into(),
                                at: why.clone(),
                                msg: format!("{cur:?} and {vlo:?} forced on one answer type"),
                            })
                        }
                    }
                }
            }
        }
        for (lo, hi, why) in &cons {
            let vlo = self.pol_value(lo);
            let vhi = self.pol_value(hi);
            if !vlo.leq(vhi) {
                return Err(TypeError::PolarityViolation {
                    rule: "Sub".into(),
                    at: why.clone(),
                    msg: format!("{vlo:?} is not a subtype of {vhi:?}"),
                });
            }
        }
        Ok(())
    }

    // -- finalization -----------------------------------------------------------

    fn finalize_set(&self, s: &SetExpr) -> BTreeSet<String> {
        self.set_meaning(s)
    }

    /// Convert to a concrete type, pruning answer pairs whose two components
    /// are completely unconstrained (answer-type polymorphism residue).
    fn finalize_ct(&self, c: &MCT) -> (CompType, bool) {
        let (val, vresolved) = self.finalize_ty(&c.val);
        match self.resolve_ans(&c.ans) {
            MAns::Empty | MAns::Var(_) => (CompType { value: val, answer: None }, vresolved),
            MAns::Pair(i, o) => {
                let (fi, ri) = self.finalize_ct(&i);
                let (fo, ro) = self.finalize_ct(&o);
                let prune =
                    !ri && !ro && fi.answer.is_none() && fo.answer.is_none();
                if prune {
                    (CompType { value: val, answer: None }, vresolved)
                } else {
                    let (fi, fo) = equalize_levels(fi, fo);
                    (
                        CompType { value: val, answer: Some(Box::new((fi, fo))) },
                        true,
                    )
                }
            }
        }
    }

    /// Returns the concrete value type and whether it was constrained at all.
    fn finalize_ty(&self, t: &MTy) -> (ValueType, bool) {
        match self.resolve_ty(t) {
            MTy::Var(_) => (ValueType::thing(), false),
            MTy::Thing(s) => (ValueType::Thing(self.finalize_set(&s)), true),
            MTy::Bool(s, p) => (
                ValueType::BoolT(self.finalize_set(&s), self.pol_value(&p)),
                true,
            ),
            MTy::Int => (ValueType::IntT, true),
            MTy::Fn(k, a, r) => {
                let (fa, _) = self.finalize_ty(&a);
                let (fr, _) = self.finalize_ct(&r);
                (ValueType::Fn(k, Box::new(fa), Box::new(fr)), true)
            }
        }
    }
}

/// Pad the shallower side of a kept answer pair so both components have the
/// same level (invariant of `CompType`).
fn equalize_levels(a: CompType, b: CompType) -> (CompType, CompType) {
    fn pad(mut c: CompType, target: u32) -> CompType {
        while c.level() < target {
            let inner = CompType::pure(ValueType::thing());
            c = CompType {
                value: c.value.clone(),
                answer: Some(Box::new((
                    CompType { value: inner.value.clone(), answer: c.answer.clone() },
                    CompType { value: inner.value, answer: c.answer.clone() },
                ))),
            };
        }
        c
    }
    let (la, lb) = (a.level(), b.level());
    if la == lb {
        (a, b)
    } else if la < lb {
        (pad(a, lb), b)
    } else {
        let t = pad(b, la);
        (a, t)
    }
}

// ---------------------------------------------------------------------------
// Public interface
// ---------------------------------------------------------------------------

/// Typechecker configuration.
#[derive(Default)]
pub struct Typer {
    /// When false, polarity constraints are ignored (used for counting
    /// readings before polarity filtering and by the parse filter).
    pub skip_polarity: bool,
    /// Additional constants declared by a custom lexicon.
    pub extra_consts: BTreeMap<String, SchemeComp>,
}

impl Typer {
    pub fn new() -> Typer {
        Typer::default()
    }

    fn session(&self) -> InferSession {
        let mut s = InferSession::new();
        s.enforce_polarity = !self.skip_polarity;
        s.extra_consts = self.extra_consts.clone();
        s
    }

    /// Infer the least derivable computation type of `e` under `env`.
    pub fn infer(&self, env: &Antecedent, e: &Term) -> Result<CompType, TypeError> {
        self.infer_opt(env, e, false)
    }

    fn infer_opt(
        &self,
        env: &Antecedent,
        e: &Term,
        expect_bool: bool,
    ) -> Result<CompType, TypeError> {
        let mut s = self.session();
        let menv: BTreeMap<String, MTy> =
            env.iter().map(|(k, v)| (k.clone(), embed_vty(v))).collect();
        let t = s.infer_term(&menv, e)?;
        // In checking position the result may be left under-determined by
        // transparent answer threading; commit it to the expected Bool.
        if expect_bool {
            if let MTy::Var(_) = s.resolve_ty(&t.val) {
                let want = MTy::Bool(s.fresh_set(), s.fresh_pol());
                s.unify_ty(&t.val, &want).map_err(|u| s.fail("Reset", e, u))?;
            }
        }
        s.solve_sets()?;
        s.solve_polarity()?;
        let (ct, _) = s.finalize_ct(&t);
        // Leak check: a discharged logic variable must not appear in the
        // answer types of the result.
        if let Some(p) = ct.answer.as_ref() {
            let mut names = BTreeSet::new();
            collect_ct_names(&p.0, &mut names);
            collect_ct_names(&p.1, &mut names);
            for tag in &s.discharged {
                if names.contains(tag) {
                    return Err(TypeError::VariableLeak {
                        var: tag.clone(),
                        at: format_term(e),
                    });
                }
            }
        }
        Ok(ct)
    }

    /// Check a full sentence: an outermost `#{0}[...]` whose result is a
    /// closed plain-or-positive `Bool` with no residual effects.
    pub fn check_sentence(&self, e: &Term) -> Result<CompType, TypeError> {
        if !matches!(e, Term::Reset(0, _)) {
            return Err(TypeError::UnificationFailure {
                rule: "Reset".into(),
                at: format_term(e),
                msg: "a sentence must be delimited by an outermost #{0}[...]".into(),
            });
        }
        let ct = self.infer_opt(&Antecedent::new(), e, true)?;
        match &ct {
            CompType { value: ValueType::BoolT(vars, pol), answer: None } => {
                if !vars.is_empty() {
                    return Err(TypeError::VariableLeak {
                        var: vars.iter().next().unwrap().clone(),
                        at: format_term(e),
                    });
                }
                if !pol.leq(Polarity::Plus) {
                    return Err(TypeError::PolarityViolation {
                        rule: "Reset".into(),
                        at: format_term(e),
                        msg: "sentence answer type is Bool⁻".into(),
                    });
                }
                Ok(ct)
            }
            _ => Err(TypeError::UnificationFailure {
                rule: "Reset".into(),
                at: format_term(e),
                msg: format!(
                    "sentence result is {}, not a closed Bool",
                    crate::syntax::format_comp_type(&ct)
                ),
            }),
        }
    }
}

fn collect_ct_names(c: &CompType, acc: &mut BTreeSet<String>) {
    collect_vty_names(&c.value, acc);
    if let Some(p) = &c.answer {
        collect_ct_names(&p.0, acc);
        collect_ct_names(&p.1, acc);
    }
}
fn collect_vty_names(v: &ValueType, acc: &mut BTreeSet<String>) {
    match v {
        ValueType::Thing(s) | ValueType::BoolT(s, _) => acc.extend(s.iter().cloned()),
        ValueType::IntT => {}
        ValueType::Fn(_, a, r) => {
            collect_vty_names(a, acc);
            collect_ct_names(r, acc);
        }
    }
}

fn embed_vty(v: &ValueType) -> MTy {
    match v {
        ValueType::Thing(s) => MTy::Thing(SetExpr::lits(s.clone())),
        ValueType::BoolT(s, p) => MTy::Bool(SetExpr::lits(s.clone()), PolTerm::Const(*p)),
        ValueType::IntT => MTy::Int,
        ValueType::Fn(k, a, r) => {
            MTy::Fn(*k, Box::new(embed_vty(a)), Box::new(embed_cty(r)))
        }
    }
}
fn embed_cty(c: &CompType) -> MCT {
    let ans = match &c.answer {
        None => MAns::Empty,
        Some(p) => MAns::Pair(Box::new(embed_cty(&p.0)), Box::new(embed_cty(&p.1))),
    };
    MCT { val: embed_vty(&c.value), ans }
}

/// Infer with the default configuration.
pub fn infer(env: &Antecedent, e: &Term) -> Result<CompType, TypeError> {
    Typer::new().infer(env, e)
}

/// Check a sentence with the default configuration.
pub fn check_sentence(e: &Term) -> Result<CompType, TypeError> {
    Typer::new().check_sentence(e)
}
