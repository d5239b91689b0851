//! Continuation-passing-style transform for the level-0 fragment, and a
//! beta/delta normalizer for the transformed terms.
//!
//! The transform is the standard left-to-right call-by-value one: `shift{0}`
//! grabs the current continuation as an object-level function, `#{0}[...]`
//! resets it to the identity. Higher levels are not supported here; they are
//! the machine's job. Arithmetic constants are eta-expanded into the CPS
//! calling convention so that transformed programs can be normalized closed.

use std::collections::BTreeSet;

use crate::error::CpsError;
use crate::term::{LamKind, Term};

struct Fresh {
    used: BTreeSet<String>,
    counter: u64,
}

impl Fresh {
    fn new(t: &Term) -> Fresh {
        let mut used = BTreeSet::new();
        t.all_names(&mut used);
        Fresh { used, counter: 0 }
    }
    fn make(&mut self, base: &str) -> String {
        loop {
            let cand = format!("{}{}", base, self.counter);
            self.counter += 1;
            if !self.used.contains(&cand) {
                self.used.insert(cand.clone());
                return cand;
            }
        }
    }
}

fn lam(x: &str, b: Term) -> Term {
    Term::lam(LamKind::Plain, x, b)
}

/// CPS value for a constant: arithmetic constants become curried CPS
/// functions; all other constants stay inert.
fn const_value(name: &str, tag: &Option<String>, fresh: &mut Fresh) -> Term {
    match (name, tag) {
        ("plus" | "times", None) => {
            let a = fresh.make("a");
            let b = fresh.make("b");
            let k1 = fresh.make("k");
            let k2 = fresh.make("k");
            // λa.λk1. k1 (λb.λk2. k2 (name a b))
            lam(
                &a,
                lam(
                    &k1,
                    Term::app(
                        Term::var(&k1),
                        lam(
                            &b,
                            lam(
                                &k2,
                                Term::app(
                                    Term::var(&k2),
                                    Term::app(
                                        Term::app(Term::cst(name), Term::var(&a)),
                                        Term::var(&b),
                                    ),
                                ),
                            ),
                        ),
                    ),
                ),
            )
        }
        _ => Term::Const(name.to_string(), tag.clone()),
    }
}

fn tr(t: &Term, fresh: &mut Fresh) -> Result<Term, CpsError> {
    Ok(match t {
        Term::Var(x) => {
            let k = fresh.make("k");
            lam(&k, Term::app(Term::var(&k), Term::var(x)))
        }
        Term::IntLit(n) => {
            let k = fresh.make("k");
            lam(&k, Term::app(Term::var(&k), Term::IntLit(*n)))
        }
        Term::Const(name, tag) => {
            let k = fresh.make("k");
            let v = const_value(name, tag, fresh);
            lam(&k, Term::app(Term::var(&k), v))
        }
        Term::Lam(_, x, b) => {
            let k = fresh.make("k");
            let tb = tr(b, fresh)?;
            lam(&k, Term::app(Term::var(&k), lam(x, tb)))
        }
        Term::App(f, e) | Term::FwdApp(f, e) => {
            let k = fresh.make("k");
            let fv = fresh.make("f");
            let ev = fresh.make("e");
            let tf = tr(f, fresh)?;
            let te = tr(e, fresh)?;
            lam(
                &k,
                Term::app(
                    tf,
                    lam(
                        &fv,
                        Term::app(
                            te,
                            lam(
                                &ev,
                                Term::app(
                                    Term::app(Term::var(&fv), Term::var(&ev)),
                                    Term::var(&k),
                                ),
                            ),
                        ),
                    ),
                ),
            )
        }
        Term::BwdApp(e, f) => {
            let k = fresh.make("k");
            let ev = fresh.make("e");
            let fv = fresh.make("f");
            let te = tr(e, fresh)?;
            let tf = tr(f, fresh)?;
            lam(
                &k,
                Term::app(
                    te,
                    lam(
                        &ev,
                        Term::app(
                            tf,
                            lam(
                                &fv,
                                Term::app(
                                    Term::app(Term::var(&fv), Term::var(&ev)),
                                    Term::var(&k),
                                ),
                            ),
                        ),
                    ),
                ),
            )
        }
        Term::Shift(0, f, body) => {
            let k = fresh.make("k");
            let x = fresh.make("x");
            let k2 = fresh.make("k");
            let v = fresh.make("v");
            let tb = tr(body, fresh)?;
            // λk. (λf. ⟦body⟧ (λv.v)) (λx.λk2. k2 (k x))
            lam(
                &k,
                Term::app(
                    lam(f, Term::app(tb, lam(&v, Term::var(&v)))),
                    lam(
                        &x,
                        lam(
                            &k2,
                            Term::app(
                                Term::var(&k2),
                                Term::app(Term::var(&k), Term::var(&x)),
                            ),
                        ),
                    ),
                ),
            )
        }
        Term::Reset(0, body) => {
            let k = fresh.make("k");
            let v = fresh.make("v");
            let tb = tr(body, fresh)?;
            lam(
                &k,
                Term::app(Term::var(&k), Term::app(tb, lam(&v, Term::var(&v)))),
            )
        }
        Term::Shift(n, _, _) | Term::Reset(n, _) => {
            return Err(CpsError::UnsupportedLevel(*n))
        }
        Term::Ann(b, _) => tr(b, fresh)?,
    })
}

/// Transform a level-0 program into continuation-passing style. The result
/// expects a continuation; apply it to the identity to run it.
pub fn cps_transform(t: &Term) -> Result<Term, CpsError> {
    let mut fresh = Fresh::new(t);
    tr(t, &mut fresh)
}

fn is_delta(t: &Term) -> Option<Term> {
    if let Term::App(f, b) = t {
        if let Term::App(g, a) = f.as_ref() {
            if let (Term::Const(name, None), Term::IntLit(x), Term::IntLit(y)) =
                (g.as_ref(), a.as_ref(), b.as_ref())
            {
                return match name.as_str() {
                    "plus" => Some(Term::IntLit(x + y)),
                    "times" => Some(Term::IntLit(x * y)),
                    _ => None,
                };
            }
        }
    }
    None
}

/// Leftmost-outermost reduction of one beta or delta redex, including under
/// binders.
fn reduce_once(t: &Term) -> Option<Term> {
    if let Some(r) = is_delta(t) {
        return Some(r);
    }
    match t {
        Term::App(f, a) => {
            if let Term::Lam(_, x, b) = f.as_ref() {
                return Some(b.subst(x, a));
            }
            if let Some(f2) = reduce_once(f) {
                return Some(Term::app(f2, (**a).clone()));
            }
            reduce_once(a).map(|a2| Term::app((**f).clone(), a2))
        }
        Term::FwdApp(f, a) => {
            if let Term::Lam(_, x, b) = f.as_ref() {
                return Some(b.subst(x, a));
            }
            if let Some(f2) = reduce_once(f) {
                return Some(Term::fwd(f2, (**a).clone()));
            }
            reduce_once(a).map(|a2| Term::fwd((**f).clone(), a2))
        }
        Term::BwdApp(a, f) => {
            if let Term::Lam(_, x, b) = f.as_ref() {
                return Some(b.subst(x, a));
            }
            if let Some(a2) = reduce_once(a) {
                return Some(Term::bwd(a2, (**f).clone()));
            }
            reduce_once(f).map(|f2| Term::bwd((**a).clone(), f2))
        }
        Term::Lam(k, x, b) => reduce_once(b).map(|b2| Term::Lam(*k, x.clone(), Box::new(b2))),
        _ => None,
    }
}

/// Normalize by repeated beta/delta reduction, with a reduction budget.
pub fn beta_normalize(t: &Term, fuel: u64) -> Result<Term, CpsError> {
    let mut cur = t.clone();
    for _ in 0..fuel {
        match reduce_once(&cur) {
            Some(next) => cur = next,
            None => return Ok(cur),
        }
    }
    Err(CpsError::FuelExhausted)
}

/// Transform, feed the identity continuation, and normalize.
pub fn cps_eval(t: &Term) -> Result<Term, CpsError> {
    let transformed = cps_transform(t)?;
    let mut fresh = Fresh::new(&transformed);
    let v = fresh.make("v");
    let run = Term::app(transformed, lam(&v, Term::var(&v)));
    beta_normalize(&run, 100_000)
}
