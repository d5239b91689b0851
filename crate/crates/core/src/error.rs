//! Errors shared across the engine.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum KernelError {
    #[error("free logic variable `{0}` in formula")]
    FreeVariable(String),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("syntax error at {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

/// Typing failures; each carries the failing rule and the pretty-printed
/// offending subterm.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("unification failure ({rule}) at `{at}`: {msg}")]
    UnificationFailure { rule: String, at: String, msg: String },
    #[error("direction mismatch ({rule}) at `{at}`: {msg}")]
    DirectionMismatch { rule: String, at: String, msg: String },
    #[error("logic variable `{var}` leaks out of its quantifier at `{at}`")]
    VariableLeak { var: String, at: String },
    #[error("polarity violation ({rule}) at `{at}`: {msg}")]
    PolarityViolation { rule: String, at: String, msg: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
}

impl TypeError {
    /// Whether the failure depends only on the term's applicative skeleton,
    /// so retrying the same tree under a different control-level assignment
    /// cannot succeed. Used to prune the bracketing search.
    pub fn is_level_invariant(&self) -> bool {
        match self {
            TypeError::DirectionMismatch { .. } => true,
            TypeError::UnboundVariable(_) | TypeError::UnknownConstant(_) => true,
            TypeError::UnificationFailure { msg, .. } => {
                msg.starts_with("cannot unify") || msg.starts_with("cannot coerce")
            }
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("stuck at `{0}`: ill-typed input")]
    Stuck(String),
    #[error("fuel exhausted after {0} steps")]
    FuelExhausted(u64),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CpsError {
    #[error("unsupported control level {0}: the CPS oracle covers level 0 only")]
    UnsupportedLevel(u32),
    #[error("fuel exhausted during normalization")]
    FuelExhausted,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GrammarError {
    #[error("lexicon syntax error on line {line}: {msg}")]
    SyntaxError { line: usize, msg: String },
    #[error("denotation of `{word}` does not match its scheme: {detail}")]
    SchemeMismatch { word: String, detail: String },
    #[error("word `{0}` is not in the lexicon")]
    UnknownWord(String),
    #[error("no parse for the token sequence")]
    NoParse,
    #[error("quantifier occurrence {0} has no level assigned")]
    MissingLevel(usize),
    #[error("unknown determiner `{0}`")]
    UnknownDeterminer(String),
}

/// Readings-module faults that should never be valid outputs.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EngineFault {
    #[error("machine fault on accepted term: {0}")]
    Machine(String),
    #[error("readback fault: {0}")]
    Readback(String),
}

/// Everything that can interrupt a sentence analysis.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error(transparent)]
    Fault(#[from] EngineFault),
}
