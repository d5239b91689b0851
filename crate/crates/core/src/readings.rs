//! Reading enumeration and acceptability verdicts.
//!
//! For every parse of a sentence and every assignment of hierarchy levels to
//! its quantifier occurrences, the sentence is translated, typechecked
//! (including polarity), evaluated, and read back; canonical formulas are
//! deduplicated. The module also implements the answer-type-transition
//! automaton as an independent acceptability oracle: per level, the
//! evaluation-order determiner string must match `some* (a | no any*)*` on a
//! positive level or `(a | no any*)*` on a neutral one, and all positive
//! levels must sit higher (smaller numbers) than the occupied neutral ones.

use std::collections::BTreeMap;

use crate::error::{AnalysisError, EngineFault, GrammarError};
use crate::formula::{binder_order, canonicalize, formula_equal, Formula};
use crate::grammar::{
    self, level_assignments, quantifier_positions, tokenize, Lexicon, Translation,
};
use crate::machine;
use crate::readback::readback;
use crate::typer::Typer;
use crate::types::Polarity;

/// States of the answer-type-transition automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AutomatonState {
    BPlus,
    BNeutral,
    BMinus,
}

/// Relative scope of the unique existential and the unique negation, where
/// both exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScopeClass {
    /// ∃¬: the existential dominates the negation.
    ExistsOverNot,
    /// ¬∃: the negation dominates the existential.
    NotOverExists,
}

impl ScopeClass {
    pub fn label(self) -> &'static str {
        match self {
            ScopeClass::ExistsOverNot => "∃¬",
            ScopeClass::NotOverExists => "¬∃",
        }
    }
}

/// One reading of a sentence.
#[derive(Debug, Clone)]
pub struct Reading {
    /// Canonical formula.
    pub formula: Formula,
    /// Quantifier occurrence (`word@tokenindex`) → level.
    pub levels: BTreeMap<String, u32>,
    /// Occurrences outermost-first in the formula.
    pub scope_order: Vec<String>,
    /// Automaton states traversed, levels outermost-first.
    pub polarity_path: Vec<AutomatonState>,
    /// ∃/¬ scope class where applicable.
    pub class: Option<ScopeClass>,
}

/// Acceptability verdict.
#[derive(Debug, Clone)]
pub enum Verdict {
    Unacceptable,
    Unambiguous(Reading),
    Ambiguous(Vec<Reading>),
}

/// Full analysis of a sentence.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub sentence: String,
    pub parses: usize,
    pub readings: Vec<Reading>,
    /// Distinct scopings that typecheck when polarity is ignored.
    pub readings_before_polarity: usize,
    pub verdict: Verdict,
}

/// Enumerate the readings of a sentence. `max_level` defaults to the number
/// of quantifier occurrences (relative order is all that matters).
pub fn enumerate_readings(
    sentence: &str,
    lex: &Lexicon,
    max_level: Option<u32>,
) -> Result<Vec<Reading>, AnalysisError> {
    Ok(analyze(sentence, lex, max_level)?.readings)
}

/// Judge a sentence's acceptability.
pub fn judge(sentence: &str, lex: &Lexicon) -> Result<Verdict, AnalysisError> {
    Ok(analyze(sentence, lex, None)?.verdict)
}

/// Analyze a sentence: parses, readings before and after polarity
/// filtering, and the verdict.
pub fn analyze(
    sentence: &str,
    lex: &Lexicon,
    max_level: Option<u32>,
) -> Result<Analysis, AnalysisError> {
    let tokens = tokenize(sentence);
    let candidates = grammar::candidate_trees(&tokens, lex)?;
    let quants = quantifier_positions(&tokens, lex);
    let k = quants.len();
    let max = max_level.unwrap_or(k.max(1) as u32).max(1);

    let strict = Typer { skip_polarity: false, extra_consts: lex.consts.clone() };
    let lax = Typer { skip_polarity: true, extra_consts: lex.consts.clone() };

    let mut parses = 0usize;
    let mut readings: Vec<Reading> = Vec::new();
    let mut before: Vec<Formula> = Vec::new();
    for tree in &candidates {
        let mut tree_parses = false;
        for levels in level_assignments(k, max) {
            let map: BTreeMap<usize, u32> =
                quants.iter().copied().zip(levels.iter().copied()).collect();
            let tr = match grammar::translate(tree, &tokens, lex, &map) {
                Ok(tr) => tr,
                Err(_) => continue,
            };
            match lax.check_sentence(&tr.term) {
                Ok(_) => {}
                // A level-independent failure dooms every assignment of
                // this bracketing; skip the rest.
                Err(e) if e.is_level_invariant() => break,
                Err(_) => continue,
            }
            tree_parses = true;
            let accepted = strict.check_sentence(&tr.term).is_ok();
            let (canonical, order) = run_reading(&tr)?;
            if !before.iter().any(|f| formula_equal(f, &canonical)) {
                before.push(canonical.clone());
            }
            if !accepted {
                continue;
            }
            if readings.iter().any(|r| formula_equal(&r.formula, &canonical)) {
                continue;
            }
            let path = polarity_path(&tokens, lex, &map)
                .ok_or_else(|| EngineFault::Readback(
                    "typechecker accepted an assignment the automaton rejects".into(),
                ))?;
            readings.push(Reading {
                formula: canonical,
                levels: tr.levels.clone(),
                scope_order: order,
                polarity_path: path,
                class: None,
            });
        }
        if tree_parses {
            parses += 1;
        }
    }
    if parses == 0 {
        return Err(GrammarError::NoParse.into());
    }
    for r in &mut readings {
        r.class = scope_class(&r.formula);
    }
    readings.sort_by(|a, b| a.scope_order.cmp(&b.scope_order));
    let verdict = match readings.len() {
        0 => Verdict::Unacceptable,
        1 => Verdict::Unambiguous(readings[0].clone()),
        _ => Verdict::Ambiguous(readings.clone()),
    };
    Ok(Analysis {
        sentence: sentence.to_string(),
        parses,
        readings,
        readings_before_polarity: before.len(),
        verdict,
    })
}

/// Evaluate a translated sentence and return its canonical formula and the
/// scope order of its quantifier occurrences.
fn run_reading(tr: &Translation) -> Result<(Formula, Vec<String>), AnalysisError> {
    let value = machine::evaluate(&tr.term)
        .map_err(|e| EngineFault::Machine(e.to_string()))?;
    let raw = readback(&value)?;
    let order: Vec<String> = binder_order(&raw)
        .into_iter()
        .filter_map(|g| tr.gensyms.get(&g).cloned())
        .collect();
    let canonical = canonicalize(&raw)
        .map_err(|e| EngineFault::Readback(e.to_string()))?;
    Ok((canonical, order))
}

/// The automaton alphabet, read off a determiner's answer-type transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DetClass {
    Some_,
    A,
    No,
    Any,
}

fn classify(transition: (Polarity, Polarity)) -> Option<DetClass> {
    match transition {
        (Polarity::Plus, Polarity::Plus) => Some(DetClass::Some_),
        (Polarity::Plain, Polarity::Plain) => Some(DetClass::A),
        (Polarity::Minus, Polarity::Plain) => Some(DetClass::No),
        (Polarity::Minus, Polarity::Minus) => Some(DetClass::Any),
        _ => None,
    }
}

/// `Ok(None)` for polarity-transparent quantifiers (no pinned transition),
/// which the automaton ignores.
fn classify_word(word: &str, lex: &Lexicon) -> Result<Option<DetClass>, GrammarError> {
    let entry = lex
        .lookup(word)
        .filter(|e| e.is_quantifier())
        .ok_or_else(|| GrammarError::UnknownDeterminer(word.to_string()))?;
    match entry.transition {
        None => Ok(None),
        Some(t) => classify(t)
            .map(Some)
            .ok_or_else(|| GrammarError::UnknownDeterminer(word.to_string())),
    }
}

/// Match one level's determiner string. `positive` levels start in the
/// `some` loop; neutral ones start past it. Returns the traversed states.
fn match_level(dets: &[DetClass], positive: bool) -> Option<Vec<AutomatonState>> {
    let mut state = if positive { AutomatonState::BPlus } else { AutomatonState::BNeutral };
    let mut path = vec![state];
    for d in dets {
        state = match (state, d) {
            (AutomatonState::BPlus, DetClass::Some_) => AutomatonState::BPlus,
            (AutomatonState::BPlus, _) => {
                // ε to the neutral block, then consume.
                match d {
                    DetClass::A => AutomatonState::BNeutral,
                    DetClass::No => AutomatonState::BMinus,
                    _ => return None,
                }
            }
            (AutomatonState::BNeutral, DetClass::A) => AutomatonState::BNeutral,
            (AutomatonState::BNeutral, DetClass::No) => AutomatonState::BMinus,
            (AutomatonState::BNeutral, _) => return None,
            (AutomatonState::BMinus, DetClass::Any) => AutomatonState::BMinus,
            (AutomatonState::BMinus, DetClass::A) => AutomatonState::BNeutral,
            (AutomatonState::BMinus, DetClass::No) => AutomatonState::BMinus,
            (AutomatonState::BMinus, DetClass::Some_) => return None,
        };
        path.push(state);
    }
    Some(path)
}

fn oracle_paths(
    per_level: &BTreeMap<u32, Vec<DetClass>>,
) -> Option<Vec<AutomatonState>> {
    // Positive (Bool⁺-to-Bool) levels must all be higher — numerically
    // smaller — than the occupied neutral (Bool-to-Bool) levels.
    let positive: Vec<u32> = per_level
        .iter()
        .filter(|(_, v)| v.contains(&DetClass::Some_))
        .map(|(l, _)| *l)
        .collect();
    let neutral: Vec<u32> = per_level
        .iter()
        .filter(|(_, v)| !v.is_empty() && !v.contains(&DetClass::Some_))
        .map(|(l, _)| *l)
        .collect();
    for p in &positive {
        for n in &neutral {
            if p >= n {
                return None;
            }
        }
    }
    let mut path = Vec::new();
    for (level, dets) in per_level {
        let positive = dets.contains(&DetClass::Some_);
        path.extend(match_level(dets, positive)?);
        let _ = level;
    }
    Some(path)
}

/// Independent acceptability oracle over determiner strings per level, in
/// evaluation (left-to-right) order.
pub fn polarity_oracle(
    per_level: &BTreeMap<u32, Vec<String>>,
    lex: &Lexicon,
) -> Result<bool, GrammarError> {
    let mut classes: BTreeMap<u32, Vec<DetClass>> = BTreeMap::new();
    for (level, words) in per_level {
        let mut v = Vec::new();
        for w in words {
            if let Some(c) = classify_word(w, lex)? {
                v.push(c);
            }
        }
        classes.insert(*level, v);
    }
    Ok(oracle_paths(&classes).is_some())
}

/// The automaton path for a sentence's level assignment, if accepted.
pub fn polarity_path(
    tokens: &[String],
    lex: &Lexicon,
    levels: &BTreeMap<usize, u32>,
) -> Option<Vec<AutomatonState>> {
    let mut per_level: BTreeMap<u32, Vec<DetClass>> = BTreeMap::new();
    for pos in quantifier_positions(tokens, lex) {
        let level = *levels.get(&pos)?;
        if let Some(class) = classify_word(&tokens[pos], lex).ok()? {
            per_level.entry(level).or_default().push(class);
        }
    }
    oracle_paths(&per_level)
}

/// ∃¬ / ¬∃ classification: requires exactly one existential and one
/// negation; ∃¬ iff the existential dominates the negation.
pub fn scope_class(f: &Formula) -> Option<ScopeClass> {
    fn count(f: &Formula, ex: &mut u32, not: &mut u32) {
        match f {
            Formula::Exists(_, b) => {
                *ex += 1;
                count(b, ex, not);
            }
            Formula::Not(b) => {
                *not += 1;
                count(b, ex, not);
            }
            Formula::ForAll(_, b) => count(b, ex, not),
            Formula::Most(_, r, s) => {
                count(r, ex, not);
                count(s, ex, not);
            }
            Formula::Implies(l, r) | Formula::And(l, r) => {
                count(l, ex, not);
                count(r, ex, not);
            }
            Formula::Pred(_, args) => {
                for a in args {
                    count(a, ex, not);
                }
            }
            Formula::Entity(_) | Formula::LVar(_) => {}
        }
    }
    let (mut ex, mut not) = (0, 0);
    count(f, &mut ex, &mut not);
    if ex != 1 || not != 1 {
        return None;
    }
    fn exists_dominates(f: &Formula) -> Option<bool> {
        // Walk down; whichever of ∃ / ¬ appears first on the path to the
        // other decides the class.
        match f {
            Formula::Exists(_, b) => {
                if contains_not(b) {
                    Some(true)
                } else {
                    None
                }
            }
            Formula::Not(b) => {
                if contains_exists(b) {
                    Some(false)
                } else {
                    None
                }
            }
            Formula::ForAll(_, b) => exists_dominates(b),
            Formula::Most(_, r, s) => exists_dominates(r).or_else(|| exists_dominates(s)),
            Formula::Implies(l, r) | Formula::And(l, r) => {
                exists_dominates(l).or_else(|| exists_dominates(r))
            }
            _ => None,
        }
    }
    fn contains_not(f: &Formula) -> bool {
        match f {
            Formula::Not(_) => true,
            Formula::Exists(_, b) | Formula::ForAll(_, b) => contains_not(b),
            Formula::Most(_, r, s) => contains_not(r) || contains_not(s),
            Formula::Implies(l, r) | Formula::And(l, r) => contains_not(l) || contains_not(r),
            _ => false,
        }
    }
    fn contains_exists(f: &Formula) -> bool {
        match f {
            Formula::Exists(..) => true,
            Formula::Not(b) | Formula::ForAll(_, b) => contains_exists(b),
            Formula::Most(_, r, s) => contains_exists(r) || contains_exists(s),
            Formula::Implies(l, r) | Formula::And(l, r) => {
                contains_exists(l) || contains_exists(r)
            }
            _ => false,
        }
    }
    match exists_dominates(f) {
        Some(true) => Some(ScopeClass::ExistsOverNot),
        Some(false) | None => Some(ScopeClass::NotOverExists),
    }
}
