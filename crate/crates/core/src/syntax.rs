//! Concrete syntax: lexer and recursive-descent parsers for terms and type
//! schemes, and formatters for terms, types, schemes, and formulas.
//!
//! Term syntax: `fun x -> e`, `fun> x -> e`, `fun< x -> e`, juxtaposition,
//! `f .> e`, `e <. f`, `#{n}[ e ]`, `shift{n} f -> e`, integers with `+`/`*`,
//! logic constants `$x`, tagged constants `name[tag]`, annotations
//! `(e :: SCHEME)`.

use std::collections::BTreeSet;

use crate::error::ParseError;
use crate::formula::Formula;
use crate::term::{Direction, LamKind, Term};
use crate::types::{FnKind, Polarity, SchemeComp, SchemePol, SchemeSet, SchemeVal};

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Fun(LamKind),
    Shift,
    Sym(&'static str),
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                s.push(bytes[i]);
                i += 1;
            }
            let tok = match s.as_str() {
                "fun" => {
                    if i < bytes.len() && bytes[i] == '>' {
                        i += 1;
                        Tok::Fun(LamKind::Dir(Direction::Forward))
                    } else if i < bytes.len() && bytes[i] == '<' {
                        i += 1;
                        Tok::Fun(LamKind::Dir(Direction::Backward))
                    } else {
                        Tok::Fun(LamKind::Plain)
                    }
                }
                "shift" => Tok::Shift,
                _ => Tok::Ident(s),
            };
            out.push((start, tok));
            continue;
        }
        if c.is_ascii_digit() {
            let mut n: i64 = 0;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                n = n * 10 + (bytes[i] as i64 - '0' as i64);
                i += 1;
            }
            out.push((start, Tok::Int(n)));
            continue;
        }
        let two: String = bytes[i..bytes.len().min(i + 2)].iter().collect();
        let two_tok = match two.as_str() {
            "->" => Some("->"),
            ".>" => Some(".>"),
            "<." => Some("<."),
            "<|" => Some("<|"),
            "|>" => Some("|>"),
            "::" => Some("::"),
            "!{" => None,
            "![" => Some("!["),
            _ => None,
        };
        if let Some(s) = two_tok {
            out.push((start, Tok::Sym(s)));
            i += 2;
            continue;
        }
        let one = match c {
            '(' => "(",
            ')' => ")",
            '[' => "[",
            ']' => "]",
            '{' => "{",
            '}' => "}",
            ',' => ",",
            '+' => "+",
            '*' => "*",
            '#' => "#",
            '$' => "$",
            '?' => "?",
            '-' => "-",
            '~' => "~",
            '.' => ".",
            _ => {
                return Err(ParseError { pos: start, msg: format!("unexpected character `{c}`") })
            }
        };
        out.push((start, Tok::Sym(one)));
        i += 1;
    }
    Ok(out)
}

impl Lexer {
    fn new(src: &str) -> Result<Lexer, ParseError> {
        Ok(Lexer { toks: lex(src)?, pos: 0 })
    }
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }
    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(usize::MAX)
    }
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { pos: self.here(), msg: msg.into() })
    }
    fn expect(&mut self, sym: &'static str) -> Result<(), ParseError> {
        match self.next() {
            Some(Tok::Sym(s)) if s == sym => Ok(()),
            other => Err(ParseError {
                pos: self.here(),
                msg: format!("expected `{sym}`, found {other:?}"),
            }),
        }
    }
    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            other => {
                Err(ParseError { pos: self.here(), msg: format!("expected name, found {other:?}") })
            }
        }
    }
    fn expect_int(&mut self) -> Result<i64, ParseError> {
        match self.next() {
            Some(Tok::Int(n)) => Ok(n),
            other => Err(ParseError {
                pos: self.here(),
                msg: format!("expected integer, found {other:?}"),
            }),
        }
    }
    fn at_sym(&self, sym: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym)
    }
    fn eat_sym(&mut self, sym: &str) -> bool {
        if self.at_sym(sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }
}

// ---------------------------------------------------------------------------
// Term parser
// ---------------------------------------------------------------------------

/// Parse a term. Identifiers bound by an enclosing `fun`/`shift` become
/// variables; all other identifiers become constants.
pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    let mut lx = Lexer::new(src)?;
    let mut bound = Vec::new();
    let t = p_term(&mut lx, &mut bound)?;
    if lx.peek().is_some() {
        return lx.err("trailing input after term");
    }
    Ok(t)
}

fn p_term(lx: &mut Lexer, bound: &mut Vec<String>) -> Result<Term, ParseError> {
    match lx.peek() {
        Some(Tok::Fun(kind)) => {
            let kind = *kind;
            lx.next();
            let x = lx.expect_ident()?;
            lx.expect("->")?;
            bound.push(x.clone());
            let b = p_term(lx, bound)?;
            bound.pop();
            Ok(Term::Lam(kind, x, Box::new(b)))
        }
        Some(Tok::Shift) => {
            lx.next();
            lx.expect("{")?;
            let n = lx.expect_int()?;
            if n < 0 {
                return lx.err("negative shift level");
            }
            lx.expect("}")?;
            let f = lx.expect_ident()?;
            lx.expect("->")?;
            bound.push(f.clone());
            let b = p_term(lx, bound)?;
            bound.pop();
            Ok(Term::Shift(n as u32, f, Box::new(b)))
        }
        _ => p_dir(lx, bound),
    }
}

fn p_dir(lx: &mut Lexer, bound: &mut Vec<String>) -> Result<Term, ParseError> {
    let lhs = p_add(lx, bound)?;
    if lx.eat_sym(".>") {
        let rhs = p_dir_or_lam(lx, bound)?;
        Ok(Term::fwd(lhs, rhs))
    } else if lx.eat_sym("<.") {
        let rhs = p_dir_or_lam(lx, bound)?;
        Ok(Term::bwd(lhs, rhs))
    } else {
        Ok(lhs)
    }
}

fn p_dir_or_lam(lx: &mut Lexer, bound: &mut Vec<String>) -> Result<Term, ParseError> {
    match lx.peek() {
        Some(Tok::Fun(_)) | Some(Tok::Shift) => p_term(lx, bound),
        _ => p_dir(lx, bound),
    }
}

fn p_add(lx: &mut Lexer, bound: &mut Vec<String>) -> Result<Term, ParseError> {
    let mut lhs = p_mul(lx, bound)?;
    while lx.eat_sym("+") {
        let rhs = p_mul(lx, bound)?;
        lhs = Term::app(Term::app(Term::cst("plus"), lhs), rhs);
    }
    Ok(lhs)
}

fn p_mul(lx: &mut Lexer, bound: &mut Vec<String>) -> Result<Term, ParseError> {
    let mut lhs = p_juxt(lx, bound)?;
    while lx.eat_sym("*") {
        let rhs = p_juxt(lx, bound)?;
        lhs = Term::app(Term::app(Term::cst("times"), lhs), rhs);
    }
    Ok(lhs)
}

fn p_juxt(lx: &mut Lexer, bound: &mut Vec<String>) -> Result<Term, ParseError> {
    let mut head = p_atom(lx, bound)?;
    loop {
        let more = matches!(
            lx.peek(),
            Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::Sym("(")) | Some(Tok::Sym("$"))
        ) || (lx.at_sym("#"));
        if !more {
            return Ok(head);
        }
        let arg = p_atom(lx, bound)?;
        head = Term::app(head, arg);
    }
}

fn p_atom(lx: &mut Lexer, bound: &mut Vec<String>) -> Result<Term, ParseError> {
    match lx.peek() {
        Some(Tok::Ident(_)) => {
            let name = lx.expect_ident()?;
            // `name[tag]`: a tagged constant.
            if lx.at_sym("[") {
                lx.next();
                let tag = lx.expect_ident()?;
                lx.expect("]")?;
                return Ok(Term::Const(name, Some(tag)));
            }
            if bound.iter().any(|b| *b == name) {
                Ok(Term::Var(name))
            } else {
                Ok(Term::Const(name, None))
            }
        }
        Some(Tok::Int(_)) => {
            let n = lx.expect_int()?;
            Ok(Term::IntLit(n))
        }
        Some(Tok::Sym("$")) => {
            lx.next();
            let name = lx.expect_ident()?;
            Ok(Term::Const(name.clone(), Some(name)))
        }
        Some(Tok::Sym("#")) => {
            lx.next();
            lx.expect("{")?;
            let n = lx.expect_int()?;
            if n < 0 {
                return lx.err("negative reset level");
            }
            lx.expect("}")?;
            lx.expect("[")?;
            let b = p_term(lx, bound)?;
            lx.expect("]")?;
            Ok(Term::Reset(n as u32, Box::new(b)))
        }
        Some(Tok::Sym("(")) => {
            lx.next();
            let t = p_term(lx, bound)?;
            if lx.eat_sym("::") {
                let s = p_scheme_comp(lx)?;
                lx.expect(")")?;
                Ok(Term::Ann(Box::new(t), s))
            } else {
                lx.expect(")")?;
                Ok(t)
            }
        }
        other => lx.err(format!("expected a term, found {other:?}")),
    }
}

// ---------------------------------------------------------------------------
// Scheme parser
// ---------------------------------------------------------------------------

/// Parse a type scheme, e.g.
/// `(Thing{?p} -> Bool{?p,?r} ![?u,?v]) |> Thing{p1} ![ Bool- ![?g,?d], Bool ![?g,?d] ]`.
pub fn parse_scheme(src: &str) -> Result<SchemeComp, ParseError> {
    let mut lx = Lexer::new(src)?;
    let s = p_scheme_comp(&mut lx)?;
    if lx.peek().is_some() {
        return lx.err("trailing input after type scheme");
    }
    Ok(s)
}

fn p_scheme_comp(lx: &mut Lexer) -> Result<SchemeComp, ParseError> {
    let val = p_scheme_val(lx)?;
    if lx.eat_sym("![") {
        let inc = p_scheme_comp(lx)?;
        lx.expect(",")?;
        let out = p_scheme_comp(lx)?;
        lx.expect("]")?;
        Ok(SchemeComp::Comp { val, dec: Some(Box::new((inc, out))) })
    } else if let SchemeVal::MVar(name) = val {
        Ok(SchemeComp::MVar(name))
    } else {
        Ok(SchemeComp::Comp { val, dec: None })
    }
}

fn p_scheme_val(lx: &mut Lexer) -> Result<SchemeVal, ParseError> {
    let lhs = p_scheme_atom(lx)?;
    let kind = if lx.eat_sym("->") {
        FnKind::Plain
    } else if lx.eat_sym("|>") {
        FnKind::Dir(Direction::Forward)
    } else if lx.eat_sym("<|") {
        FnKind::Dir(Direction::Backward)
    } else {
        return Ok(lhs);
    };
    let result = p_scheme_comp_arrow_rhs(lx)?;
    Ok(SchemeVal::Fn(kind, Box::new(lhs), Box::new(result)))
}

/// The result side of an arrow: a full scheme comp, right-associative.
fn p_scheme_comp_arrow_rhs(lx: &mut Lexer) -> Result<SchemeComp, ParseError> {
    let val = p_scheme_val(lx)?;
    if lx.eat_sym("![") {
        let inc = p_scheme_comp(lx)?;
        lx.expect(",")?;
        let out = p_scheme_comp(lx)?;
        lx.expect("]")?;
        Ok(SchemeComp::Comp { val, dec: Some(Box::new((inc, out))) })
    } else if let SchemeVal::MVar(name) = val {
        Ok(SchemeComp::MVar(name))
    } else {
        Ok(SchemeComp::Comp { val, dec: None })
    }
}

fn p_scheme_atom(lx: &mut Lexer) -> Result<SchemeVal, ParseError> {
    match lx.peek() {
        Some(Tok::Ident(name)) => {
            let name = name.clone();
            lx.next();
            match name.as_str() {
                "Thing" => Ok(SchemeVal::Thing(p_scheme_set(lx)?)),
                "Bool" => {
                    let pol = if lx.eat_sym("+") {
                        SchemePol::Const(Polarity::Plus)
                    } else if lx.eat_sym("-") {
                        SchemePol::Const(Polarity::Minus)
                    } else if lx.eat_sym("~") {
                        SchemePol::MVar(lx.expect_ident()?)
                    } else {
                        SchemePol::Const(Polarity::Plain)
                    };
                    Ok(SchemeVal::BoolT(p_scheme_set(lx)?, pol))
                }
                "Int" => Ok(SchemeVal::IntT),
                _ => lx.err(format!("unknown base type `{name}`")),
            }
        }
        Some(Tok::Sym("?")) => {
            lx.next();
            let name = lx.expect_ident()?;
            Ok(SchemeVal::MVar(name))
        }
        Some(Tok::Sym("(")) => {
            lx.next();
            let v = p_scheme_val(lx)?;
            lx.expect(")")?;
            Ok(v)
        }
        other => lx.err(format!("expected a type, found {other:?}")),
    }
}

fn p_scheme_set(lx: &mut Lexer) -> Result<SchemeSet, ParseError> {
    let mut set = SchemeSet::default();
    if !lx.at_sym("{") {
        return Ok(set);
    }
    lx.next();
    loop {
        match lx.peek() {
            Some(Tok::Sym("}")) => {
                lx.next();
                return Ok(set);
            }
            Some(Tok::Sym("?")) => {
                lx.next();
                set.mvars.insert(lx.expect_ident()?);
            }
            Some(Tok::Ident(_)) => {
                set.names.insert(lx.expect_ident()?);
            }
            other => return lx.err(format!("expected set element, found {other:?}")),
        }
        if !lx.eat_sym(",") && !lx.at_sym("}") {
            return lx.err("expected `,` or `}` in set");
        }
    }
}

// ---------------------------------------------------------------------------
// Term formatter
// ---------------------------------------------------------------------------

/// Pretty-print a term; `parse_term(format_term(t)) == t` for closed terms.
pub fn format_term(t: &Term) -> String {
    fmt_term(t, 0)
}

fn fmt_term(t: &Term, prec: u8) -> String {
    match t {
        Term::Lam(kind, x, b) => {
            let kw = match kind {
                LamKind::Plain => "fun",
                LamKind::Dir(Direction::Forward) => "fun>",
                LamKind::Dir(Direction::Backward) => "fun<",
            };
            parens(prec > 0, format!("{kw} {x} -> {}", fmt_term(b, 0)))
        }
        Term::Shift(n, f, b) => {
            parens(prec > 0, format!("shift{{{n}}} {f} -> {}", fmt_term(b, 0)))
        }
        Term::FwdApp(f, e) => {
            parens(prec > 1, format!("{} .> {}", fmt_term(f, 2), fmt_term(e, 1)))
        }
        Term::BwdApp(e, f) => {
            parens(prec > 1, format!("{} <. {}", fmt_term(e, 2), fmt_term(f, 1)))
        }
        Term::App(f, a) => {
            if let Term::App(g, l) = f.as_ref() {
                if let Term::Const(name, None) = g.as_ref() {
                    if name == "plus" {
                        return parens(
                            prec > 2,
                            format!("{} + {}", fmt_term(l, 2), fmt_term(a, 3)),
                        );
                    }
                    if name == "times" {
                        return parens(
                            prec > 3,
                            format!("{} * {}", fmt_term(l, 3), fmt_term(a, 4)),
                        );
                    }
                }
            }
            parens(prec > 4, format!("{} {}", fmt_term(f, 4), fmt_term(a, 5)))
        }
        Term::Reset(n, b) => format!("#{{{n}}}[ {} ]", fmt_term(b, 0)),
        Term::Const(name, None) => name.clone(),
        Term::Const(name, Some(tag)) => {
            if name == tag {
                format!("${name}")
            } else {
                format!("{name}[{tag}]")
            }
        }
        Term::Var(x) => x.clone(),
        Term::IntLit(n) => n.to_string(),
        Term::Ann(b, s) => format!("({} :: {})", fmt_term(b, 0), format_scheme(s)),
    }
}

fn parens(yes: bool, s: String) -> String {
    if yes {
        format!("({s})")
    } else {
        s
    }
}

// ---------------------------------------------------------------------------
// Scheme and type formatters
// ---------------------------------------------------------------------------

pub fn format_scheme(s: &SchemeComp) -> String {
    match s {
        SchemeComp::MVar(v) => format!("?{v}"),
        SchemeComp::Comp { val, dec: None } => fmt_sval(val, false),
        SchemeComp::Comp { val, dec: Some(d) } => format!(
            "{} ![{}, {}]",
            fmt_sval(val, true),
            format_scheme(&d.0),
            format_scheme(&d.1)
        ),
    }
}

fn fmt_sval(v: &SchemeVal, atom: bool) -> String {
    match v {
        SchemeVal::MVar(m) => format!("?{m}"),
        SchemeVal::Thing(s) => format!("Thing{}", fmt_sset(s)),
        SchemeVal::BoolT(s, p) => {
            let suffix = match p {
                SchemePol::Const(Polarity::Plain) => String::new(),
                SchemePol::Const(Polarity::Plus) => "+".to_string(),
                SchemePol::Const(Polarity::Minus) => "-".to_string(),
                SchemePol::MVar(m) => format!("~{m}"),
            };
            format!("Bool{suffix}{}", fmt_sset(s))
        }
        SchemeVal::IntT => "Int".to_string(),
        SchemeVal::Fn(kind, a, r) => {
            let arrow = match kind {
                FnKind::Plain => "->",
                FnKind::Dir(Direction::Forward) => "|>",
                FnKind::Dir(Direction::Backward) => "<|",
            };
            let s = format!("{} {arrow} {}", fmt_sval_arg(a), format_scheme(r));
            if atom {
                format!("({s})")
            } else {
                s
            }
        }
    }
}

fn fmt_sval_arg(v: &SchemeVal) -> String {
    match v {
        SchemeVal::Fn(..) => format!("({})", fmt_sval(v, false)),
        _ => fmt_sval(v, false),
    }
}

fn fmt_sset(s: &SchemeSet) -> String {
    if s.names.is_empty() && s.mvars.is_empty() {
        return String::new();
    }
    let mut parts: Vec<String> = s.names.iter().cloned().collect();
    parts.extend(s.mvars.iter().map(|m| format!("?{m}")));
    format!("{{{}}}", parts.join(","))
}

/// Render a concrete type in scheme syntax (`Thing{p}`, `Bool+`, decorations).
pub fn format_comp_type(c: &crate::types::CompType) -> String {
    match &c.answer {
        None => fmt_vtype(&c.value, false),
        Some(p) => format!(
            "{} ![{}, {}]",
            fmt_vtype(&c.value, true),
            format_comp_type(&p.0),
            format_comp_type(&p.1)
        ),
    }
}

fn fmt_vtype(v: &crate::types::ValueType, atom: bool) -> String {
    use crate::types::ValueType as VT;
    match v {
        VT::Thing(s) => format!("Thing{}", fmt_nameset(s)),
        VT::BoolT(s, p) => {
            let suffix = match p {
                Polarity::Plain => "",
                Polarity::Plus => "+",
                Polarity::Minus => "-",
            };
            format!("Bool{suffix}{}", fmt_nameset(s))
        }
        VT::IntT => "Int".to_string(),
        VT::Fn(kind, a, r) => {
            let arrow = match kind {
                FnKind::Plain => "->",
                FnKind::Dir(Direction::Forward) => "|>",
                FnKind::Dir(Direction::Backward) => "<|",
            };
            let arg = match a.as_ref() {
                VT::Fn(..) => format!("({})", fmt_vtype(a, false)),
                _ => fmt_vtype(a, false),
            };
            let s = format!("{arg} {arrow} {}", format_comp_type(r));
            if atom {
                format!("({s})")
            } else {
                s
            }
        }
    }
}

fn fmt_nameset(s: &BTreeSet<String>) -> String {
    if s.is_empty() {
        String::new()
    } else {
        format!("{{{}}}", s.iter().cloned().collect::<Vec<_>>().join(","))
    }
}

// ---------------------------------------------------------------------------
// Formula formatter
// ---------------------------------------------------------------------------

/// Render a formula: `forall x1. student(x1) -> liked(cs187)(x1)`.
/// Precedence: `~` > `&` > `->`; quantifiers extend right.
pub fn format_formula(f: &Formula) -> String {
    fmt_formula(f, 0)
}

fn fmt_formula(f: &Formula, prec: u8) -> String {
    match f {
        Formula::ForAll(v, b) => parens(prec > 0, format!("forall {v}. {}", fmt_formula(b, 0))),
        Formula::Exists(v, b) => parens(prec > 0, format!("exists {v}. {}", fmt_formula(b, 0))),
        Formula::Most(v, r, s) => {
            format!("most {v} ({}) ({})", fmt_formula(r, 0), fmt_formula(s, 0))
        }
        Formula::Implies(l, r) => {
            parens(prec > 1, format!("{} -> {}", fmt_formula(l, 2), fmt_formula(r, 1)))
        }
        Formula::And(l, r) => {
            parens(prec > 2, format!("{} & {}", fmt_formula(l, 2), fmt_formula(r, 3)))
        }
        Formula::Not(b) => format!("~{}", fmt_formula(b, 4)),
        Formula::Pred(name, args) => {
            let mut s = name.clone();
            for a in args {
                s.push_str(&format!("({})", fmt_formula(a, 0)));
            }
            s
        }
        Formula::Entity(n) => n.clone(),
        Formula::LVar(v) => v.clone(),
    }
}
