//! Command-line driver for the semantic engine.
//!
//! Exit codes: 0 success (including `unacceptable` verdicts, which are valid
//! linguistic results), 1 input or parse errors, 2 type errors, 3 internal
//! faults.

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use scopal::error::{AnalysisError, GrammarError, MachineError};
use scopal::grammar::{
    builtin_lexicon, format_tree, load_lexicon, parse_all, tokenize, Lexicon, BUILTIN_LEXICON,
};
use scopal::readings::{analyze, Reading, Verdict};
use scopal::syntax::{format_comp_type, format_formula, format_term, parse_term};
use scopal::typer::Typer;
use scopal::{cps, machine};

#[derive(Parser)]
#[command(name = "scopal", about = "Delimited-control semantics for a toy English fragment")]
struct Cli {
    /// Replace the built-in lexicon with this file.
    #[arg(long, global = true)]
    lexicon: Option<std::path::PathBuf>,
    /// Cap on quantifier levels during reading enumeration.
    #[arg(long, global = true)]
    max_level: Option<u32>,
    /// Structured JSON output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a metalanguage term to a value.
    Eval {
        term: String,
        /// Print the reduction trace first.
        #[arg(long)]
        trace: bool,
    },
    /// Infer the type of a metalanguage term.
    Type { term: String },
    /// Print the reduction trace of a term, redexes marked with ⟦…⟧.
    Trace { term: String },
    /// Print the level-0 CPS transform of a term.
    Cps { term: String },
    /// Print all derivations of a sentence.
    Parse { sentence: String },
    /// Enumerate the readings of a sentence.
    Readings { sentence: String },
    /// Judge a sentence: unacceptable, unambiguous, or ambiguous.
    Judge { sentence: String },
    /// Print the embedded lexicon file.
    DumpLexicon,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl ToString) -> Failure {
    Failure { code, message: message.to_string() }
}

fn input_term(src: &str) -> Result<scopal::term::Term, Failure> {
    parse_term(src).map_err(|e| fail(1, e))
}

fn lexicon_of(cli: &Cli) -> Result<Lexicon, Failure> {
    match &cli.lexicon {
        None => Ok(builtin_lexicon().clone()),
        Some(path) => {
            let src = std::fs::read_to_string(path)
                .map_err(|e| fail(1, format!("cannot read {}: {e}", path.display())))?;
            load_lexicon(&src).map_err(|e| fail(1, e))
        }
    }
}

fn machine_err(e: MachineError) -> Failure {
    match e {
        MachineError::Stuck(_) => fail(2, e),
        MachineError::FuelExhausted(_) => fail(3, e),
    }
}

fn analysis_err(e: AnalysisError) -> Failure {
    match e {
        AnalysisError::Grammar(g) => fail(1, g),
        AnalysisError::Fault(f) => fail(3, f),
    }
}

fn reading_json(r: &Reading) -> serde_json::Value {
    json!({
        "formula": format_formula(&r.formula),
        "levels": r.levels,
        "scope_order": r.scope_order,
        "polarity_path": r.polarity_path.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>(),
        "class": r.class.map(|c| c.label()),
    })
}

fn verdict_line(v: &Verdict) -> String {
    match v {
        Verdict::Unacceptable => "unacceptable".to_string(),
        Verdict::Unambiguous(r) => match r.class {
            Some(c) => format!("unambiguous {}: {}", c.label(), format_formula(&r.formula)),
            None => format!("unambiguous: {}", format_formula(&r.formula)),
        },
        Verdict::Ambiguous(rs) => {
            let classes: Vec<String> = rs
                .iter()
                .map(|r| r.class.map(|c| c.label().to_string()).unwrap_or_default())
                .filter(|s| !s.is_empty())
                .collect();
            if classes.len() == rs.len() {
                format!("ambiguous {{{}}}", classes.join(", "))
            } else {
                format!("ambiguous ({} readings)", rs.len())
            }
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Eval { term, trace } => {
            let t = input_term(term)?;
            if *trace {
                let tr = machine::trace(&t).map_err(machine_err)?;
                for line in &tr.marked {
                    println!("{line}");
                }
            }
            let v = machine::evaluate(&t).map_err(machine_err)?;
            println!("{}", format_term(&v));
            Ok(())
        }
        Command::Type { term } => {
            let t = input_term(term)?;
            let lex = lexicon_of(cli)?;
            let typer = Typer { skip_polarity: false, extra_consts: lex.consts.clone() };
            let ty = typer.infer(&Default::default(), &t).map_err(|e| fail(2, e))?;
            println!("{}", format_comp_type(&ty));
            Ok(())
        }
        Command::Trace { term } => {
            let t = input_term(term)?;
            let tr = machine::trace(&t).map_err(machine_err)?;
            for line in &tr.marked {
                println!("{line}");
            }
            println!("{}", tr.states.last().expect("trace has a final state"));
            Ok(())
        }
        Command::Cps { term } => {
            let t = input_term(term)?;
            let out = cps::cps_transform(&t).map_err(|e| fail(1, e))?;
            println!("{}", format_term(&out));
            Ok(())
        }
        Command::Parse { sentence } => {
            let lex = lexicon_of(cli)?;
            let tokens = tokenize(sentence);
            let trees = parse_all(&tokens, &lex).map_err(|e| match e {
                GrammarError::UnknownWord(_) => fail(1, e),
                other => fail(1, other),
            })?;
            if cli.json {
                let rendered: Vec<String> =
                    trees.iter().map(|t| format_tree(t, &tokens)).collect();
                println!("{}", json!({ "sentence": sentence, "parses": rendered }));
            } else {
                for t in &trees {
                    println!("{}", format_tree(t, &tokens));
                }
            }
            Ok(())
        }
        Command::Readings { sentence } => {
            let lex = lexicon_of(cli)?;
            let a = analyze(sentence, &lex, cli.max_level).map_err(analysis_err)?;
            if cli.json {
                let out = json!({
                    "sentence": a.sentence,
                    "parses": a.parses,
                    "readings": a.readings.iter().map(reading_json).collect::<Vec<_>>(),
                    "readings_before_polarity": a.readings_before_polarity,
                    "verdict": verdict_line(&a.verdict),
                });
                println!("{out}");
            } else {
                for r in &a.readings {
                    let levels: Vec<String> =
                        r.levels.iter().map(|(k, v)| format!("{k}->{v}")).collect();
                    println!("{}  [{}]", format_formula(&r.formula), levels.join(", "));
                }
                if a.readings.is_empty() {
                    println!("(no readings)");
                }
            }
            Ok(())
        }
        Command::Judge { sentence } => {
            let lex = lexicon_of(cli)?;
            let a = analyze(sentence, &lex, cli.max_level).map_err(analysis_err)?;
            if cli.json {
                println!(
                    "{}",
                    json!({ "sentence": a.sentence, "verdict": verdict_line(&a.verdict) })
                );
            } else {
                println!("{}", verdict_line(&a.verdict));
            }
            Ok(())
        }
        Command::DumpLexicon => {
            print!("{BUILTIN_LEXICON}");
            Ok(())
        }
    }
}
