//! The output formula language: first-order-style readings with a primitive
//! `most` quantifier, plus canonicalization (alpha-renaming of binders to
//! x1, x2, ... in left-to-right binder order).

use std::collections::BTreeMap;

use crate::error::KernelError;

/// Normalized logical readings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Formula {
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
    Most(String, Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    /// A predicate applied to argument terms (entities or logic variables).
    Pred(String, Vec<Formula>),
    /// A named individual constant.
    Entity(String),
    /// A logic-variable occurrence, bound by an enclosing quantifier.
    LVar(String),
}

impl Formula {
    pub fn forall(v: &str, b: Formula) -> Formula {
        Formula::ForAll(v.to_string(), Box::new(b))
    }
    pub fn exists(v: &str, b: Formula) -> Formula {
        Formula::Exists(v.to_string(), Box::new(b))
    }
    pub fn most(v: &str, r: Formula, s: Formula) -> Formula {
        Formula::Most(v.to_string(), Box::new(r), Box::new(s))
    }
    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }
    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }
    pub fn not(b: Formula) -> Formula {
        Formula::Not(Box::new(b))
    }
    pub fn pred(name: &str, args: Vec<Formula>) -> Formula {
        Formula::Pred(name.to_string(), args)
    }
    pub fn entity(name: &str) -> Formula {
        Formula::Entity(name.to_string())
    }
    pub fn lvar(name: &str) -> Formula {
        Formula::LVar(name.to_string())
    }
}

/// Alpha-rename bound variables to x1, x2, ... in left-to-right binder
/// order. Errors on unbound logic variables. Idempotent.
pub fn canonicalize(f: &Formula) -> Result<Formula, KernelError> {
    let mut counter = 0u32;
    walk(f, &BTreeMap::new(), &mut counter)
}

fn walk(
    f: &Formula,
    env: &BTreeMap<String, String>,
    counter: &mut u32,
) -> Result<Formula, KernelError> {
    Ok(match f {
        Formula::ForAll(v, b) => {
            *counter += 1;
            let fresh = format!("x{counter}");
            let mut env2 = env.clone();
            env2.insert(v.clone(), fresh.clone());
            Formula::ForAll(fresh, Box::new(walk(b, &env2, counter)?))
        }
        Formula::Exists(v, b) => {
            *counter += 1;
            let fresh = format!("x{counter}");
            let mut env2 = env.clone();
            env2.insert(v.clone(), fresh.clone());
            Formula::Exists(fresh, Box::new(walk(b, &env2, counter)?))
        }
        Formula::Most(v, r, s) => {
            *counter += 1;
            let fresh = format!("x{counter}");
            let mut env2 = env.clone();
            env2.insert(v.clone(), fresh.clone());
            Formula::Most(
                fresh,
                Box::new(walk(r, &env2, counter)?),
                Box::new(walk(s, &env2, counter)?),
            )
        }
        Formula::Implies(l, r) => {
            Formula::Implies(Box::new(walk(l, env, counter)?), Box::new(walk(r, env, counter)?))
        }
        Formula::And(l, r) => {
            Formula::And(Box::new(walk(l, env, counter)?), Box::new(walk(r, env, counter)?))
        }
        Formula::Not(b) => Formula::Not(Box::new(walk(b, env, counter)?)),
        Formula::Pred(name, args) => Formula::Pred(
            name.clone(),
            args.iter().map(|a| walk(a, env, counter)).collect::<Result<_, _>>()?,
        ),
        Formula::Entity(n) => Formula::Entity(n.clone()),
        Formula::LVar(v) => match env.get(v) {
            Some(n) => Formula::LVar(n.clone()),
            None => return Err(KernelError::FreeVariable(v.clone())),
        },
    })
}

/// Structural equality of canonical forms.
pub fn formula_equal(a: &Formula, b: &Formula) -> bool {
    match (canonicalize(a), canonicalize(b)) {
        (Ok(ca), Ok(cb)) => ca == cb,
        _ => false,
    }
}

/// Binder names in left-to-right (preorder) order, before canonicalization.
/// Used by the readings module to recover scope order from gensym names.
pub fn binder_order(f: &Formula) -> Vec<String> {
    let mut acc = Vec::new();
    collect_binders(f, &mut acc);
    acc
}

fn collect_binders(f: &Formula, acc: &mut Vec<String>) {
    match f {
        Formula::ForAll(v, b) | Formula::Exists(v, b) => {
            acc.push(v.clone());
            collect_binders(b, acc);
        }
        Formula::Most(v, r, s) => {
            acc.push(v.clone());
            collect_binders(r, acc);
            collect_binders(s, acc);
        }
        Formula::Implies(l, r) | Formula::And(l, r) => {
            collect_binders(l, acc);
            collect_binders(r, acc);
        }
        Formula::Not(b) => collect_binders(b, acc),
        Formula::Pred(..) | Formula::Entity(_) | Formula::LVar(_) => {}
    }
}
