//! A semantic engine for a small English fragment: a typed metalanguage
//! with directional application and a hierarchy of delimited-control
//! operators, an answer-type/polarity typechecker, an abstract machine, a
//! level-0 CPS oracle, a lexicalized grammar, and a reading enumerator that
//! judges sentences acceptable, unambiguous, or ambiguous.

pub mod error;
pub mod term;
pub mod types;
pub mod formula;
pub mod syntax;
pub mod typer;
pub mod machine;
pub mod cps;
pub mod readback;
pub mod grammar;
pub mod readings;
