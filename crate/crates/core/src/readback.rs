//! Read-back of evaluated sentence denotations into first-order formulas.
//!
//! Evaluation of a sentence term ends in an application spine headed by
//! logical constants (quantifiers, connectives, predicates), since those
//! have no reduction rules. This module interprets such value spines as
//! `Formula`s; anything else is an engine fault, not a valid reading.

use crate::error::EngineFault;
use crate::formula::Formula;
use crate::syntax::format_term;
use crate::term::Term;

/// Interpret an evaluated sentence value as a formula.
pub fn readback(t: &Term) -> Result<Formula, EngineFault> {
    match t {
        Term::Const(name, Some(tag)) if name == tag => Ok(Formula::lvar(name)),
        Term::Const(name, None) => Ok(Formula::entity(&name.to_lowercase())),
        Term::App(..) | Term::FwdApp(..) | Term::BwdApp(..) => {
            let (head, args) = spine(t);
            match head {
                Term::Const(name, Some(tag)) if name == "forall" && args.len() == 1 => {
                    Ok(Formula::forall(tag, readback(args[0])?))
                }
                Term::Const(name, Some(tag)) if name == "exists" && args.len() == 1 => {
                    Ok(Formula::exists(tag, readback(args[0])?))
                }
                Term::Const(name, Some(tag)) if name == "most" && args.len() == 2 => {
                    Ok(Formula::most(tag, readback(args[0])?, readback(args[1])?))
                }
                Term::Const(name, None) if name == "implies" && args.len() == 2 => {
                    Ok(Formula::implies(readback(args[0])?, readback(args[1])?))
                }
                Term::Const(name, None) if name == "and" && args.len() == 2 => {
                    Ok(Formula::and(readback(args[0])?, readback(args[1])?))
                }
                Term::Const(name, None) if name == "not" && args.len() == 1 => {
                    Ok(Formula::not(readback(args[0])?))
                }
                Term::Const(name, None) => {
                    let mut out = Vec::with_capacity(args.len());
                    for a in args {
                        out.push(readback(a)?);
                    }
                    Ok(Formula::pred(&name.to_lowercase(), out))
                }
                _ => Err(EngineFault::Readback(format!(
                    "spine head is not a constant in `{}`",
                    format_term(t)
                ))),
            }
        }
        _ => Err(EngineFault::Readback(format!(
            "not a formula value: `{}`",
            format_term(t)
        ))),
    }
}

/// Flatten an application spine into head and arguments in application
/// order: backward-applied arguments come after the function's earlier
/// arguments (`alice <. (liked .> cs187)` ↦ liked, [cs187, alice]).
fn spine(t: &Term) -> (&Term, Vec<&Term>) {
    match t {
        Term::App(f, a) | Term::FwdApp(f, a) => {
            let (h, mut args) = spine(f);
            args.push(a);
            (h, args)
        }
        Term::BwdApp(a, f) => {
            let (h, mut args) = spine(f);
            args.push(a);
            (h, args)
        }
        _ => (t, Vec::new()),
    }
}
