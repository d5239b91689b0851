//! A small-step abstract machine for the metalanguage: left-to-right
//! call-by-value for plain and forward application, argument-first for
//! backward application, arithmetic delta rules, and the control hierarchy.
//!
//! A `shift{n}` captures its context up to the nearest dynamically enclosing
//! delimiter of level at most `n`; stronger (lower-level) delimiters are
//! opaque to it. The captured continuation is reified as a function whose
//! body re-installs the intervening delimiters and a copy of the level-`n`
//! delimiter itself. Logical constants (quantifiers, connectives,
//! predicates) have no reduction rules: applications headed by them are
//! values, which is how evaluated sentences come to denote formulas.

use std::collections::BTreeSet;

use crate::error::MachineError;
use crate::syntax::format_term;
use crate::term::{Direction, LamKind, Term};

/// Default step budget; the fragment is strongly normalizing, so running out
/// signals a bug rather than a long computation.
pub const DEFAULT_FUEL: u64 = 10_000;

/// One evaluation-context frame. The innermost frame is last in a context.
#[derive(Debug, Clone)]
enum Frame {
    /// `□ e` (also `□ .> e`): evaluating the function, argument pending.
    Fun(AppKind, Term),
    /// `v □` (also `v .> □`): function value done, evaluating the argument.
    Arg(AppKind, Term),
    /// `□ <. f`: backward application evaluates the argument first.
    BwdArg(Term),
    /// `v <. □`: argument value done, evaluating the function.
    BwdFun(Term),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum AppKind {
    Plain,
    Fwd,
}

type Ctx = Vec<Frame>;

/// A decomposed machine state: the metacontext of pending delimiters
/// (outermost first), the context inside the innermost delimiter, and the
/// focused redex.
#[derive(Debug, Clone)]
pub struct Configuration {
    meta: Vec<(u32, Ctx)>,
    ctx: Ctx,
    focus: Term,
}

/// Result of decomposing a term.
#[derive(Debug, Clone)]
pub enum Decomposition {
    AlreadyValue,
    Config(Configuration),
}

/// Strip type annotations; they are typing decoration only.
fn erase(t: &Term) -> Term {
    match t {
        Term::Ann(b, _) => erase(b),
        Term::Lam(k, x, b) => Term::Lam(*k, x.clone(), Box::new(erase(b))),
        Term::App(f, a) => Term::app(erase(f), erase(a)),
        Term::FwdApp(f, a) => Term::fwd(erase(f), erase(a)),
        Term::BwdApp(a, f) => Term::bwd(erase(a), erase(f)),
        Term::Reset(n, b) => Term::reset(*n, erase(b)),
        Term::Shift(n, f, b) => Term::shift(*n, f, erase(b)),
        _ => t.clone(),
    }
}

/// Does the application spine end in a constant?
fn const_headed(t: &Term) -> bool {
    match t {
        Term::Const(..) => true,
        Term::App(f, _) | Term::FwdApp(f, _) => const_headed(f),
        Term::BwdApp(_, f) => const_headed(f),
        _ => false,
    }
}

fn delta(t: &Term) -> Option<Term> {
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

/// Values: lambdas, literals, constants, and constant-headed applications of
/// values (partially- or fully-applied logical constants), except arithmetic
/// redexes.
pub fn is_value(t: &Term) -> bool {
    match t {
        Term::Lam(..) | Term::IntLit(_) | Term::Const(..) => true,
        Term::App(f, a) | Term::FwdApp(f, a) => {
            is_value(f) && is_value(a) && const_headed(f) && delta(t).is_none()
        }
        Term::BwdApp(a, f) => is_value(a) && is_value(f) && const_headed(f),
        _ => false,
    }
}

fn plug_frame(frame: &Frame, t: Term) -> Term {
    match frame {
        Frame::Fun(AppKind::Plain, e) => Term::app(t, e.clone()),
        Frame::Fun(AppKind::Fwd, e) => Term::fwd(t, e.clone()),
        Frame::Arg(AppKind::Plain, v) => Term::app(v.clone(), t),
        Frame::Arg(AppKind::Fwd, v) => Term::fwd(v.clone(), t),
        Frame::BwdArg(f) => Term::bwd(t, f.clone()),
        Frame::BwdFun(v) => Term::bwd(v.clone(), t),
    }
}

fn plug(ctx: &Ctx, t: Term) -> Term {
    ctx.iter().rev().fold(t, |acc, frame| plug_frame(frame, acc))
}

impl Configuration {
    /// Plug the focus back through the context and metacontext.
    pub fn recompose(&self) -> Term {
        self.recompose_with(self.focus.clone())
    }

    fn recompose_with(&self, focus: Term) -> Term {
        let mut t = plug(&self.ctx, focus);
        for (n, c) in self.meta.iter().rev() {
            t = plug(c, Term::reset(*n, t));
        }
        t
    }

    /// The focused redex.
    pub fn focus(&self) -> &Term {
        &self.focus
    }

    /// The whole program with the redex bracketed by ⟦…⟧.
    pub fn marked(&self) -> String {
        let marker = Term::var(&format!("⟦{}⟧", format_term(&self.focus)));
        format_term(&self.recompose_with(marker))
    }
}

/// Is the focused term a redex in this state? A value in an empty context
/// under a delimiter stands for the reset-of-value redex.
fn focus_is_redex(cfg: &Configuration) -> bool {
    match &cfg.focus {
        Term::Shift(..) => true,
        t if is_value(t) => cfg.ctx.is_empty() && !cfg.meta.is_empty(),
        Term::App(f, a) | Term::FwdApp(f, a) => is_value(f) && is_value(a),
        Term::BwdApp(a, f) => is_value(a) && is_value(f),
        _ => false,
    }
}

/// Decompose a closed term into the unique next redex and its context, or
/// report that it is already a value.
pub fn decompose(e: &Term) -> Result<Decomposition, MachineError> {
    let mut cfg = Configuration { meta: Vec::new(), ctx: Vec::new(), focus: erase(e) };
    loop {
        if focus_is_redex(&cfg) {
            // The reset-of-value redex is presented with the delimiter in
            // focus rather than on the metacontext.
            if is_value(&cfg.focus) {
                let (n, octx) = cfg.meta.pop().expect("guarded by focus_is_redex");
                cfg.focus = Term::reset(n, cfg.focus);
                cfg.ctx = octx;
            }
            return Ok(Decomposition::Config(cfg));
        }
        if is_value(&cfg.focus) {
            match cfg.ctx.pop() {
                Some(frame) => {
                    cfg.focus = plug_frame(&frame, cfg.focus);
                    continue;
                }
                None => return Ok(Decomposition::AlreadyValue),
            }
        }
        match std::mem::replace(&mut cfg.focus, Term::IntLit(0)) {
            Term::Var(x) => {
                return Err(MachineError::Stuck(format!("free variable `{x}`")))
            }
            Term::App(f, a) => {
                if !is_value(&f) {
                    cfg.ctx.push(Frame::Fun(AppKind::Plain, *a));
                    cfg.focus = *f;
                } else {
                    cfg.ctx.push(Frame::Arg(AppKind::Plain, *f));
                    cfg.focus = *a;
                }
            }
            Term::FwdApp(f, a) => {
                if !is_value(&f) {
                    cfg.ctx.push(Frame::Fun(AppKind::Fwd, *a));
                    cfg.focus = *f;
                } else {
                    cfg.ctx.push(Frame::Arg(AppKind::Fwd, *f));
                    cfg.focus = *a;
                }
            }
            Term::BwdApp(a, f) => {
                if !is_value(&a) {
                    cfg.ctx.push(Frame::BwdArg(*f));
                    cfg.focus = *a;
                } else {
                    cfg.ctx.push(Frame::BwdFun(*a));
                    cfg.focus = *f;
                }
            }
            Term::Reset(n, b) => {
                cfg.meta.push((n, std::mem::take(&mut cfg.ctx)));
                cfg.focus = *b;
            }
            other => {
                // Shift and values are handled before this match.
                cfg.focus = other;
                unreachable!("decomposition missed a case");
            }
        }
    }
}

fn fresh_var(avoid: &BTreeSet<String>) -> String {
    let mut i = 0usize;
    loop {
        let cand = if i == 0 { "v".to_string() } else { format!("v{i}") };
        if !avoid.contains(&cand) {
            return cand;
        }
        i += 1;
    }
}

/// Contract the focused redex and recompose to a whole term.
pub fn step(cfg: &Configuration) -> Result<Term, MachineError> {
    let mut cfg = cfg.clone();
    match std::mem::replace(&mut cfg.focus, Term::IntLit(0)) {
        Term::Reset(_, v) if is_value(&v) => Ok(cfg.recompose_with(*v)),
        redex @ (Term::App(..) | Term::FwdApp(..) | Term::BwdApp(..)) => {
            if let Some(r) = delta(&redex) {
                return Ok(cfg.recompose_with(r));
            }
            let contracted = match &redex {
                Term::App(f, a) => match f.as_ref() {
                    Term::Lam(LamKind::Plain, x, b) => b.subst(x, a),
                    _ => {
                        return Err(MachineError::Stuck(format!(
                            "plain application of a non-plain function: `{}`",
                            format_term(&redex)
                        )))
                    }
                },
                Term::FwdApp(f, a) => match f.as_ref() {
                    Term::Lam(LamKind::Dir(Direction::Forward), x, b) => b.subst(x, a),
                    _ => {
                        return Err(MachineError::Stuck(format!(
                            "forward application of a non-forward function: `{}`",
                            format_term(&redex)
                        )))
                    }
                },
                Term::BwdApp(a, f) => match f.as_ref() {
                    Term::Lam(LamKind::Dir(Direction::Backward), x, b) => b.subst(x, a),
                    _ => {
                        return Err(MachineError::Stuck(format!(
                            "backward application of a non-backward function: `{}`",
                            format_term(&redex)
                        )))
                    }
                },
                _ => unreachable!(),
            };
            Ok(cfg.recompose_with(contracted))
        }
        Term::Shift(n, fname, body) => {
            // Capture: pop metacontext frames strictly weaker than n,
            // leaving the matching delimiter in place.
            let mut captured: Vec<(u32, Ctx)> = Vec::new();
            while let Some((l, _)) = cfg.meta.last() {
                if *l > n {
                    captured.push(cfg.meta.pop().unwrap());
                } else {
                    break;
                }
            }
            if cfg.meta.is_empty() {
                return Err(MachineError::Stuck(format!(
                    "no delimiter of level <= {n} encloses `{}`",
                    format_term(&Term::shift(n, &fname, (*body).clone()))
                )));
            }
            let inner_ctx = std::mem::take(&mut cfg.ctx);
            let mut avoid = BTreeSet::new();
            body.all_names(&mut avoid);
            let collect = |c: &Ctx, avoid: &mut BTreeSet<String>| {
                for fr in c {
                    match fr {
                        Frame::Fun(_, e) | Frame::Arg(_, e) | Frame::BwdArg(e)
                        | Frame::BwdFun(e) => e.all_names(avoid),
                    }
                }
            };
            collect(&inner_ctx, &mut avoid);
            for (_, c) in &captured {
                collect(c, &mut avoid);
            }
            let v = fresh_var(&avoid);
            // K = C_k⟨#{l_k}[ … C_1⟨#{l_1}[ E⟨v⟩ ]⟩ … ]⟩ where E is the
            // innermost context and C_i the captured outer ones.
            let mut k = plug(&inner_ctx, Term::var(&v));
            for (l, c) in captured {
                k = plug(&c, Term::reset(l, k));
            }
            let reified = Term::lam(LamKind::Plain, &v, Term::reset(n, k));
            Ok(cfg.recompose_with(body.subst(&fname, &reified)))
        }
        other => Err(MachineError::Stuck(format!(
            "not a redex: `{}`",
            format_term(&other)
        ))),
    }
}

/// Evaluate a closed term to a value.
pub fn evaluate(t: &Term) -> Result<Term, MachineError> {
    evaluate_with_fuel(t, DEFAULT_FUEL)
}

/// Evaluate with an explicit step budget.
pub fn evaluate_with_fuel(t: &Term, fuel: u64) -> Result<Term, MachineError> {
    let mut cur = erase(t);
    for _ in 0..fuel {
        match decompose(&cur)? {
            Decomposition::AlreadyValue => return Ok(cur),
            Decomposition::Config(cfg) => cur = step(&cfg)?,
        }
    }
    Err(MachineError::FuelExhausted(fuel))
}

/// A reduction trace: the whole program at each step, the same with the
/// contracted redex marked by ⟦…⟧ brackets, and the final value.
#[derive(Debug, Clone)]
pub struct Trace {
    /// The program before each contraction plus the final value;
    /// `states.len() == marked.len() + 1`.
    pub states: Vec<String>,
    /// The program before each contraction with the redex bracketed.
    pub marked: Vec<String>,
}

/// Trace the evaluation of a closed term.
pub fn trace(t: &Term) -> Result<Trace, MachineError> {
    let mut cur = erase(t);
    let mut states = Vec::new();
    let mut marked = Vec::new();
    for _ in 0..DEFAULT_FUEL {
        states.push(format_term(&cur));
        match decompose(&cur)? {
            Decomposition::AlreadyValue => return Ok(Trace { states, marked }),
            Decomposition::Config(cfg) => {
                marked.push(cfg.marked());
                cur = step(&cfg)?;
            }
        }
    }
    Err(MachineError::FuelExhausted(DEFAULT_FUEL))
}
