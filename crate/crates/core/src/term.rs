//! Abstract syntax of the logical metalanguage: constants, variables,
//! plain and directional lambdas and applications, and the indexed
//! shift/reset control operators. Level 0 is the outermost (highest)
//! level of the control hierarchy.

use std::collections::BTreeSet;

use crate::types::TypeScheme;

/// The two surface combination directions: forward (function before
/// argument) and backward (argument before function).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// Lambda flavor: plain (`fun x`) or directional (`fun> x` / `fun< x`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LamKind {
    Plain,
    Dir(Direction),
}

/// Terms of the metalanguage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    /// A constant; the optional tag names the logic variable the constant
    /// binds or denotes (`forall[x]`, or the logic constant `$x` where the
    /// name equals the tag).
    Const(String, Option<String>),
    Var(String),
    IntLit(i64),
    Lam(LamKind, String, Box<Term>),
    /// Plain application by juxtaposition.
    App(Box<Term>, Box<Term>),
    /// `f .> e`: forward application.
    FwdApp(Box<Term>, Box<Term>),
    /// `e <. f`: backward application; the argument is first.
    BwdApp(Box<Term>, Box<Term>),
    /// `#{n}[ e ]`
    Reset(u32, Box<Term>),
    /// `shift{n} f -> e`
    Shift(u32, String, Box<Term>),
    /// `(e :: scheme)`: a type-scheme annotation, used by the grammar to pin
    /// lexical schemes (notably determiner polarity) onto denotations.
    Ann(Box<Term>, TypeScheme),
}

impl Term {
    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }
    pub fn fwd(f: Term, a: Term) -> Term {
        Term::FwdApp(Box::new(f), Box::new(a))
    }
    pub fn bwd(a: Term, f: Term) -> Term {
        Term::BwdApp(Box::new(a), Box::new(f))
    }
    pub fn lam(kind: LamKind, x: &str, b: Term) -> Term {
        Term::Lam(kind, x.to_string(), Box::new(b))
    }
    pub fn reset(n: u32, b: Term) -> Term {
        Term::Reset(n, Box::new(b))
    }
    pub fn shift(n: u32, f: &str, b: Term) -> Term {
        Term::Shift(n, f.to_string(), Box::new(b))
    }
    pub fn cst(name: &str) -> Term {
        Term::Const(name.to_string(), None)
    }
    /// A gensym'd logic constant (`$x`).
    pub fn logic(name: &str) -> Term {
        Term::Const(name.to_string(), Some(name.to_string()))
    }
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// Free term variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut acc = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut acc);
        acc
    }

    fn collect_free(&self, bound: &mut Vec<String>, acc: &mut BTreeSet<String>) {
        match self {
            Term::Const(..) | Term::IntLit(_) => {}
            Term::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    acc.insert(x.clone());
                }
            }
            Term::Lam(_, x, b) | Term::Shift(_, x, b) => {
                bound.push(x.clone());
                b.collect_free(bound, acc);
                bound.pop();
            }
            Term::App(f, a) | Term::FwdApp(f, a) | Term::BwdApp(f, a) => {
                f.collect_free(bound, acc);
                a.collect_free(bound, acc);
            }
            Term::Reset(_, b) | Term::Ann(b, _) => b.collect_free(bound, acc),
        }
    }

    /// All variable names occurring anywhere (free, bound, or as binders).
    /// Used to pick fresh names during capture-avoiding substitution.
    pub fn all_names(&self, acc: &mut BTreeSet<String>) {
        match self {
            Term::Const(..) | Term::IntLit(_) => {}
            Term::Var(x) => {
                acc.insert(x.clone());
            }
            Term::Lam(_, x, b) | Term::Shift(_, x, b) => {
                acc.insert(x.clone());
                b.all_names(acc);
            }
            Term::App(f, a) | Term::FwdApp(f, a) | Term::BwdApp(f, a) => {
                f.all_names(acc);
                a.all_names(acc);
            }
            Term::Reset(_, b) | Term::Ann(b, _) => b.all_names(acc),
        }
    }

    /// Capture-avoiding substitution of `v` for the free variable `x`.
    pub fn subst(&self, x: &str, v: &Term) -> Term {
        let mut avoid: BTreeSet<String> = BTreeSet::new();
        v.all_names(&mut avoid);
        self.subst_in(x, v, &mut avoid)
    }

    fn subst_in(&self, x: &str, v: &Term, avoid: &mut BTreeSet<String>) -> Term {
        match self {
            Term::Const(..) | Term::IntLit(_) => self.clone(),
            Term::Var(y) => {
                if y == x {
                    v.clone()
                } else {
                    self.clone()
                }
            }
            Term::Lam(k, y, b) => {
                if y == x {
                    self.clone()
                } else if avoid.contains(y) && b.free_vars().contains(x) {
                    let fresh = fresh_name(y, avoid);
                    avoid.insert(fresh.clone());
                    let renamed = b.subst(y, &Term::Var(fresh.clone()));
                    Term::Lam(*k, fresh, Box::new(renamed.subst_in(x, v, avoid)))
                } else {
                    Term::Lam(*k, y.clone(), Box::new(b.subst_in(x, v, avoid)))
                }
            }
            Term::Shift(n, y, b) => {
                if y == x {
                    self.clone()
                } else if avoid.contains(y) && b.free_vars().contains(x) {
                    let fresh = fresh_name(y, avoid);
                    avoid.insert(fresh.clone());
                    let renamed = b.subst(y, &Term::Var(fresh.clone()));
                    Term::Shift(*n, fresh, Box::new(renamed.subst_in(x, v, avoid)))
                } else {
                    Term::Shift(*n, y.clone(), Box::new(b.subst_in(x, v, avoid)))
                }
            }
            Term::App(f, a) => Term::app(f.subst_in(x, v, avoid), a.subst_in(x, v, avoid)),
            Term::FwdApp(f, a) => Term::fwd(f.subst_in(x, v, avoid), a.subst_in(x, v, avoid)),
            Term::BwdApp(a, f) => Term::bwd(a.subst_in(x, v, avoid), f.subst_in(x, v, avoid)),
            Term::Reset(n, b) => Term::reset(*n, b.subst_in(x, v, avoid)),
            Term::Ann(b, s) => Term::Ann(Box::new(b.subst_in(x, v, avoid)), s.clone()),
        }
    }
}

fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem: String = base.trim_end_matches(|c: char| c.is_ascii_digit()).to_string();
    let stem = if stem.is_empty() { "v".to_string() } else { stem };
    for i in 1.. {
        let cand = format!("{stem}{i}");
        if !avoid.contains(&cand) {
            return cand;
        }
    }
    unreachable!()
}
