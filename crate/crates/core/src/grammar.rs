//! Lexicon, tokenizer, exhaustive binary-combination parser, and translation
//! from syntax trees to metalanguage terms.
//!
//! Parsing enumerates every bracketing and direction labeling of the token
//! sequence, prunes with a directional category skeleton derived from the
//! lexical schemes, and keeps the trees whose translation typechecks under
//! some level assignment (polarity constraints excluded — unacceptability is
//! a verdict, not a parse failure). Translation substitutes denotations,
//! gensyms each quantifier's logic variable, delimits each determiner's
//! restrictor at the determiner's own level, and wraps the sentence in
//! `#{0}[...]`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::error::GrammarError;
use crate::syntax::{parse_scheme, parse_term};
use crate::term::{Direction, LamKind, Term};
use crate::typer::Typer;
use crate::types::{FnKind, Polarity, SchemeComp, SchemePol, SchemeVal};

/// One lexical entry. Quantifier entries are templates over the level
/// placeholder `{N}` and the logic-variable placeholder `{P}`.
#[derive(Debug, Clone)]
pub struct LexEntry {
    pub word: String,
    pub scheme_src: String,
    pub term_src: String,
    /// For polarity-classed determiners: the (incoming, outgoing) polarity
    /// of the entry's answer-type transition. The readings module's
    /// automaton reads its alphabet from this. Quantifiers whose schemes
    /// leave the transition undecorated (e.g. `every`, `most`) are
    /// polarity-transparent and carry `None`.
    pub transition: Option<(Polarity, Polarity)>,
    quantifier: bool,
    shape: Shape,
}

impl LexEntry {
    pub fn is_quantifier(&self) -> bool {
        self.quantifier
    }

    /// Instantiate the entry at a level and gensym, producing the annotated
    /// denotation.
    fn instantiate(&self, level: u32, gensym: &str) -> Result<Term, GrammarError> {
        // `{N}` stands for the braced level annotation (as in `shift{3}`);
        // `{P}` for a bare logic-variable name.
        let braced = format!("{{{level}}}");
        let term_src = self.term_src.replace("{N}", &braced).replace("{P}", gensym);
        let scheme_src = self.scheme_src.replace("{N}", &braced).replace("{P}", gensym);
        let term = parse_term(&term_src).map_err(|e| GrammarError::SyntaxError {
            line: 0,
            msg: format!("denotation of `{}`: {e}", self.word),
        })?;
        let scheme = parse_scheme(&scheme_src).map_err(|e| GrammarError::SyntaxError {
            line: 0,
            msg: format!("scheme of `{}`: {e}", self.word),
        })?;
        Ok(Term::Ann(Box::new(term), scheme))
    }
}

/// The lexicon: entries per surface word, plus extra constant declarations.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: BTreeMap<String, Vec<LexEntry>>,
    pub consts: BTreeMap<String, SchemeComp>,
}

impl Lexicon {
    pub fn lookup(&self, word: &str) -> Option<&LexEntry> {
        self.entries.get(word).and_then(|v| v.first())
    }

    pub fn words(&self) -> impl Iterator<Item = &String> {
        self.entries.keys()
    }

    fn typer(&self, skip_polarity: bool) -> Typer {
        Typer { skip_polarity, extra_consts: self.consts.clone() }
    }
}

/// The lexicon file shipped in the binary.
pub const BUILTIN_LEXICON: &str = include_str!("lexicon.lex");

/// The built-in lexicon, loaded once.
pub fn builtin_lexicon() -> &'static Lexicon {
    static LEX: OnceLock<Lexicon> = OnceLock::new();
    LEX.get_or_init(|| load_lexicon(BUILTIN_LEXICON).expect("built-in lexicon loads"))
}

/// Word-order category skeleton used to prune the bracketing search. Plain
/// (non-directional) functions are not applied by surface syntax, so they
/// count as atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Shape {
    Any,
    Atom,
    Fwd(Box<Shape>, Box<Shape>),
    Bwd(Box<Shape>, Box<Shape>),
}

fn shape_of_comp(c: &SchemeComp) -> Shape {
    match c {
        SchemeComp::MVar(_) => Shape::Any,
        SchemeComp::Comp { val, .. } => shape_of_val(val),
    }
}

fn shape_of_val(v: &SchemeVal) -> Shape {
    match v {
        SchemeVal::MVar(_) => Shape::Any,
        SchemeVal::Fn(FnKind::Dir(Direction::Forward), a, r) => {
            Shape::Fwd(Box::new(shape_of_val(a)), Box::new(shape_of_comp(r)))
        }
        SchemeVal::Fn(FnKind::Dir(Direction::Backward), a, r) => {
            Shape::Bwd(Box::new(shape_of_val(a)), Box::new(shape_of_comp(r)))
        }
        _ => Shape::Atom,
    }
}

fn shape_compat(a: &Shape, b: &Shape) -> bool {
    match (a, b) {
        (Shape::Any, _) | (_, Shape::Any) => true,
        (Shape::Atom, Shape::Atom) => true,
        (Shape::Fwd(a1, r1), Shape::Fwd(a2, r2))
        | (Shape::Bwd(a1, r1), Shape::Bwd(a2, r2)) => {
            shape_compat(a1, a2) && shape_compat(r1, r2)
        }
        _ => false,
    }
}

fn shape_apply(f: &Shape, arg: &Shape, dir: Direction) -> Option<Shape> {
    match (f, dir) {
        (Shape::Any, _) => Some(Shape::Any),
        (Shape::Fwd(a, r), Direction::Forward) | (Shape::Bwd(a, r), Direction::Backward) => {
            if shape_compat(a, arg) {
                Some((**r).clone())
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Load a lexicon from its file format: `word := scheme := term` entries,
/// `const Name := scheme` declarations, `#` comments.
pub fn load_lexicon(source: &str) -> Result<Lexicon, GrammarError> {
    let mut lex = Lexicon::default();
    // First pass: constant declarations, so entries may mention them.
    for (lineno, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("const ") {
            let mut parts = rest.splitn(2, ":=");
            let name = parts.next().unwrap_or("").trim().to_string();
            let scheme_src = parts.next().ok_or(GrammarError::SyntaxError {
                line: lineno + 1,
                msg: "expected `const Name := scheme`".into(),
            })?;
            let scheme =
                parse_scheme(scheme_src.trim()).map_err(|e| GrammarError::SyntaxError {
                    line: lineno + 1,
                    msg: e.to_string(),
                })?;
            lex.consts.insert(name, scheme);
        }
    }
    // Second pass: word entries, each typechecked against its scheme.
    for (lineno, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("const ") {
            continue;
        }
        let parts: Vec<&str> = line.splitn(3, ":=").collect();
        if parts.len() != 3 {
            return Err(GrammarError::SyntaxError {
                line: lineno + 1,
                msg: "expected `word := scheme := term`".into(),
            });
        }
        let word = parts[0].trim().to_lowercase();
        let scheme_src = parts[1].trim().to_string();
        let term_src = parts[2].trim().to_string();
        let is_quant = scheme_src.contains("{N}") || term_src.contains("{N}")
            || term_src.contains("{P}");

        // A representative instantiation for validation and metadata.
        let probe_scheme_src = scheme_src.replace("{N}", "{1}").replace("{P}", "p0");
        let probe_term_src = term_src.replace("{N}", "{1}").replace("{P}", "p0");
        let scheme =
            parse_scheme(&probe_scheme_src).map_err(|e| GrammarError::SyntaxError {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
        let term = parse_term(&probe_term_src).map_err(|e| GrammarError::SyntaxError {
            line: lineno + 1,
            msg: e.to_string(),
        })?;
        let ann = Term::Ann(Box::new(term), scheme.clone());
        if let Err(e) = lex.typer(false).infer(&Default::default(), &ann) {
            return Err(GrammarError::SchemeMismatch { word, detail: e.to_string() });
        }
        let transition = if is_quant { extract_transition(&scheme) } else { None };
        let shape = shape_of_comp(&scheme);
        lex.entries.entry(word.clone()).or_default().push(LexEntry {
            word,
            scheme_src,
            term_src,
            transition,
            quantifier: is_quant,
            shape,
        });
    }
    Ok(lex)
}

/// The (incoming, outgoing) polarities of a determiner scheme's result
/// transition.
fn extract_transition(scheme: &SchemeComp) -> Option<(Polarity, Polarity)> {
    let SchemeComp::Comp { val: SchemeVal::Fn(_, _, result), .. } = scheme else {
        return None;
    };
    let SchemeComp::Comp { dec: Some(dec), .. } = result.as_ref() else {
        return None;
    };
    let pol_of = |c: &SchemeComp| match c {
        SchemeComp::Comp { val: SchemeVal::BoolT(_, SchemePol::Const(p)), .. } => Some(*p),
        _ => None,
    };
    Some((pol_of(&dec.0)?, pol_of(&dec.1)?))
}

/// A surface derivation: leaves are token positions; each node applies the
/// function-side child to the argument-side child in the given direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SyntaxTree {
    Leaf(usize),
    Node(Direction, Box<SyntaxTree>, Box<SyntaxTree>),
}

/// Render a tree over its tokens, e.g. `alice <. (liked .> cs187)`.
pub fn format_tree(tree: &SyntaxTree, tokens: &[String]) -> String {
    fn go(t: &SyntaxTree, tokens: &[String], top: bool) -> String {
        match t {
            SyntaxTree::Leaf(i) => tokens[*i].clone(),
            SyntaxTree::Node(dir, f, a) => {
                let body = match dir {
                    Direction::Forward => {
                        format!("{} .> {}", go(f, tokens, false), go(a, tokens, false))
                    }
                    Direction::Backward => {
                        format!("{} <. {}", go(a, tokens, false), go(f, tokens, false))
                    }
                };
                if top {
                    body
                } else {
                    format!("({body})")
                }
            }
        }
    }
    go(tree, tokens, true)
}

/// Split a sentence into lowercase tokens.
pub fn tokenize(sentence: &str) -> Vec<String> {
    sentence.split_whitespace().map(|w| w.to_lowercase()).collect()
}

/// Token indices of quantifier words, in surface order.
pub fn quantifier_positions(tokens: &[String], lex: &Lexicon) -> Vec<usize> {
    tokens
        .iter()
        .enumerate()
        .filter(|(_, w)| lex.lookup(w).is_some_and(|e| e.is_quantifier()))
        .map(|(i, _)| i)
        .collect()
}

/// All derivations of the token sequence admitted by the word-order
/// category skeletons alone, before any typechecking.
pub fn candidate_trees(
    tokens: &[String],
    lex: &Lexicon,
) -> Result<Vec<SyntaxTree>, GrammarError> {
    if tokens.is_empty() {
        return Err(GrammarError::NoParse);
    }
    let mut shapes = Vec::with_capacity(tokens.len());
    for w in tokens {
        let entry = lex.lookup(w).ok_or_else(|| GrammarError::UnknownWord(w.clone()))?;
        shapes.push(entry.shape.clone());
    }
    Ok(gen_trees(0, tokens.len(), &shapes).into_iter().map(|(t, _)| t).collect())
}

/// All derivations of the token sequence that typecheck (ignoring polarity)
/// under some level assignment.
pub fn parse_all(tokens: &[String], lex: &Lexicon) -> Result<Vec<SyntaxTree>, GrammarError> {
    let candidates = candidate_trees(tokens, lex)?;

    let quants = quantifier_positions(tokens, lex);
    let typer = lex.typer(true);
    let mut out = Vec::new();
    for tree in candidates {
        let mut ok = false;
        for levels in level_assignments(quants.len(), quants.len().max(1) as u32) {
            let map: BTreeMap<usize, u32> =
                quants.iter().copied().zip(levels.iter().copied()).collect();
            let Ok(tr) = translate(&tree, tokens, lex, &map) else { continue };
            match typer.check_sentence(&tr.term) {
                Ok(_) => {
                    ok = true;
                    break;
                }
                // A level-independent failure dooms every assignment of
                // this tree; move on to the next bracketing.
                Err(e) if e.is_level_invariant() => break,
                Err(_) => {}
            }
        }
        if ok {
            out.push(tree);
        }
    }
    if out.is_empty() {
        return Err(GrammarError::NoParse);
    }
    Ok(out)
}

fn gen_trees(lo: usize, hi: usize, shapes: &[Shape]) -> Vec<(SyntaxTree, Shape)> {
    if hi - lo == 1 {
        return vec![(SyntaxTree::Leaf(lo), shapes[lo].clone())];
    }
    let mut out = Vec::new();
    for split in lo + 1..hi {
        for (lt, ls) in gen_trees(lo, split, shapes) {
            for (rt, rs) in gen_trees(split, hi, shapes) {
                if let Some(shape) = shape_apply(&ls, &rs, Direction::Forward) {
                    out.push((
                        SyntaxTree::Node(
                            Direction::Forward,
                            Box::new(lt.clone()),
                            Box::new(rt.clone()),
                        ),
                        shape,
                    ));
                }
                if let Some(shape) = shape_apply(&rs, &ls, Direction::Backward) {
                    out.push((
                        SyntaxTree::Node(
                            Direction::Backward,
                            Box::new(rt.clone()),
                            Box::new(lt.clone()),
                        ),
                        shape,
                    ));
                }
            }
        }
    }
    out
}

/// Iterate over `{1..=max}^k` in lexicographic order.
pub fn level_assignments(k: usize, max: u32) -> impl Iterator<Item = Vec<u32>> {
    let total = (max as u64).pow(k as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![1u32; k];
        for slot in (0..k).rev() {
            v[slot] = 1 + (idx % max as u64) as u32;
            idx /= max as u64;
        }
        v
    })
}

/// A translated sentence and the provenance of its gensym'd logic variables.
#[derive(Debug, Clone)]
pub struct Translation {
    pub term: Term,
    /// gensym name → quantifier occurrence id (`word@tokenindex`).
    pub gensyms: BTreeMap<String, String>,
    /// occurrence id → assigned level.
    pub levels: BTreeMap<String, u32>,
}

/// Occurrence identifier of the quantifier at a token position.
pub fn occurrence_id(tokens: &[String], pos: usize) -> String {
    format!("{}@{pos}", tokens[pos])
}

/// Translate a derivation into a delimited metalanguage term. `levels` maps
/// quantifier token positions to hierarchy levels (all ≥ 1).
pub fn translate(
    tree: &SyntaxTree,
    tokens: &[String],
    lex: &Lexicon,
    levels: &BTreeMap<usize, u32>,
) -> Result<Translation, GrammarError> {
    let quants = quantifier_positions(tokens, lex);
    let mut gensyms = BTreeMap::new();
    let mut by_pos: BTreeMap<usize, (String, u32)> = BTreeMap::new();
    let mut level_map = BTreeMap::new();
    for (j, &pos) in quants.iter().enumerate() {
        let level = *levels.get(&pos).ok_or(GrammarError::MissingLevel(pos))?;
        let name = format!("x{}", j + 1);
        gensyms.insert(name.clone(), occurrence_id(tokens, pos));
        level_map.insert(occurrence_id(tokens, pos), level);
        by_pos.insert(pos, (name, level));
    }

    fn build(
        t: &SyntaxTree,
        tokens: &[String],
        lex: &Lexicon,
        by_pos: &BTreeMap<usize, (String, u32)>,
    ) -> Result<Term, GrammarError> {
        match t {
            SyntaxTree::Leaf(i) => {
                let entry = lex
                    .lookup(&tokens[*i])
                    .ok_or_else(|| GrammarError::UnknownWord(tokens[*i].clone()))?;
                if entry.is_quantifier() {
                    let (gensym, level) =
                        by_pos.get(i).ok_or(GrammarError::MissingLevel(*i))?;
                    entry.instantiate(*level, gensym)
                } else {
                    entry.instantiate(0, "_unused")
                }
            }
            SyntaxTree::Node(dir, f, a) => {
                let tf = build(f, tokens, lex, by_pos)?;
                let mut ta = build(a, tokens, lex, by_pos)?;
                // A determiner delimits its restrictor at its own level:
                // quantifiers inside the restrictor may not outscope the
                // determiner itself.
                if let SyntaxTree::Leaf(i) = f.as_ref() {
                    if let Some((gensym, level)) = by_pos.get(i) {
                        let w = format!("{gensym}_r");
                        ta = Term::lam(
                            LamKind::Plain,
                            &w,
                            Term::reset(*level, Term::app(ta, Term::var(&w))),
                        );
                    }
                }
                Ok(match dir {
                    Direction::Forward => Term::fwd(tf, ta),
                    Direction::Backward => Term::bwd(ta, tf),
                })
            }
        }
    }

    let body = build(tree, tokens, lex, &by_pos)?;
    Ok(Translation { term: Term::reset(0, body), gensyms, levels: level_map })
}
