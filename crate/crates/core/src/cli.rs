//! The `forge` command line: simulate automata, type-check programs,
//! convert between representations, normalize grammars, generate code, and
//! verify artifact pairs by bisimulation.
//!
//! Exit codes: 0 success or positive verdict, 1 negative verdict (reject,
//! ill-typed, mismatch), 2 usage or input error, 3 inconclusive under the
//! fuel budget.

use std::collections::BTreeSet;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::automata::{membership, AutomatonSpec, RunOptions, RunOutcome};
use crate::emit::{emit, EmitOptions, Target};
use crate::fixtures::{self, Artifact};
use crate::grammar::{cyk_membership, gnf_to_program, to_gnf, Cfg};
use crate::parse;
use crate::randgen;
use crate::term::TermStore;
use crate::transforms;
use crate::typesys::{
    classify_program, expression_to_word, lint_erasure, typecheck, CheckOptions, CheckResult,
    Mode, TypeProgram,
};
use crate::verify::{verify_bisimulation, Side};

#[derive(Parser)]
#[command(
    name = "forge",
    about = "Automata, polymorphic type checkers, and the conversions between them",
    disable_help_subcommand = true
)]
struct Cli {
    /// Transition/application budget per word (env FORGE_FUEL overrides
    /// the default).
    #[arg(long, global = true)]
    fuel: Option<u64>,
    /// Longest word length for enumerating commands.
    #[arg(long, global = true, default_value_t = 8)]
    max_len: usize,
    /// Output format for reports.
    #[arg(long, global = true, default_value = "text")]
    format: String,
    /// Base seed for `random:` pseudo-paths.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an automaton on a word (framing applied when declared).
    Simulate { automaton: String, word: String },
    /// Type-check a word or an expression against a program.
    Typecheck {
        program: String,
        word: Option<String>,
        /// Expression text, e.g. `eps.push.pop` or `g(f(), f())`.
        #[arg(long)]
        expr: Option<String>,
        /// Override the program's overloading mode.
        #[arg(long)]
        mode: Option<String>,
        /// Report ambiguous roots as plain type errors.
        #[arg(long)]
        assume_unambiguous: bool,
        /// Also run the type-erasure overload lint.
        #[arg(long)]
        lint_erasure: bool,
    },
    /// Convert between representations.
    Convert {
        input: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Input word for per-word conversions (Turing machines).
        #[arg(long)]
        word: Option<String>,
    },
    /// Convert a grammar to Greibach normal form.
    Gnf { grammar: String },
    /// Generate target-language source from a program, grammar, or Turing
    /// machine.
    Generate {
        input: String,
        #[arg(long, default_value = "pseudo")]
        target: String,
        /// Word(s) for Turing-machine generation, comma separated.
        #[arg(long)]
        word: Option<String>,
    },
    /// Compare two artifacts word by word.
    Verify { left: String, right: String },
    /// List fixtures, or print one fixture's source.
    Fixtures { name: Option<String> },
}

#[derive(Serialize)]
struct Report {
    command: String,
    verdict: String,
    exit: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    data: Option<serde_json::Value>,
}

struct Ctx {
    ropts: RunOptions,
    copts: CheckOptions,
    max_len: usize,
    json: bool,
    seed: u64,
}

impl Ctx {
    fn finish(&self, report: Report, text: &str) -> i32 {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
        } else if !text.is_empty() {
            println!("{text}");
        }
        report.exit
    }
}

fn fail(json: bool, command: &str, message: &str) -> i32 {
    eprintln!("forge {command}: {message}");
    if json {
        let report = Report {
            command: command.to_string(),
            verdict: "error".to_string(),
            exit: 2,
            data: Some(json!({ "message": message })),
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    }
    2
}

enum Loaded {
    Program(TypeProgram),
    Automaton(AutomatonSpec),
    Grammar(Cfg),
}

impl Loaded {
    fn kind(&self) -> &'static str {
        match self {
            Loaded::Program(_) => "program",
            Loaded::Automaton(_) => "automaton",
            Loaded::Grammar(_) => "grammar",
        }
    }
}

/// Resolves an input: `fixtures:<name>`, `random:<kind>:<index>`,
/// `convert(<input>)`, or a file path with extension `.typ`, `.aut`,
/// `.cfg` (plus the `.aut.json` / `.cfg.json` mirrors).
fn load(spec: &str, seed: u64) -> Result<Loaded, String> {
    if let Some(name) = spec.strip_prefix("fixtures:") {
        let fixture =
            fixtures::fixture(name).ok_or_else(|| format!("unknown fixture `{name}`"))?;
        return Ok(match fixture.artifact {
            Artifact::Program(p) => Loaded::Program(p),
            Artifact::Automaton(a) => Loaded::Automaton(a),
            Artifact::Grammar(g) => Loaded::Grammar(g),
        });
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let (kind, index) = rest.split_once(':').unwrap_or((rest, "0"));
        let index: u64 = index.parse().map_err(|_| format!("bad random index `{index}`"))?;
        let seed = seed.wrapping_add(index);
        return Ok(match kind {
            "fluent" => Loaded::Program(randgen::random_fluent_program(seed)),
            "rudimentary" => Loaded::Program(randgen::random_rudimentary_program(seed)),
            "ta" => Loaded::Automaton(randgen::random_restricted_ta(seed)),
            "cfg" => Loaded::Grammar(randgen::random_cfg(seed)),
            other => return Err(format!("unknown random kind `{other}`")),
        });
    }
    if let Some(inner) = spec.strip_prefix("convert(").and_then(|s| s.strip_suffix(')')) {
        return match load(inner, seed)? {
            Loaded::Program(p) => {
                // Fluent programs become pushdown automata; other
                // rudimentary programs become tree automata.
                match transforms::fluent_to_dpda(&p) {
                    Ok((dpda, _)) => Ok(Loaded::Automaton(dpda)),
                    Err(_) => transforms::rudimentary_to_ta(&p)
                        .map(|(ta, _)| Loaded::Automaton(ta))
                        .map_err(|e| e.to_string()),
                }
            }
            Loaded::Automaton(a) => transforms::ta_to_dpda(&a)
                .map(|out| Loaded::Automaton(out.dpda))
                .map_err(|e| e.to_string()),
            Loaded::Grammar(g) => {
                gnf_to_program(&to_gnf(&g)).map(Loaded::Program).map_err(|e| e.to_string())
            }
        };
    }
    let text = std::fs::read_to_string(spec).map_err(|e| format!("{spec}: {e}"))?;
    if spec.ends_with(".typ") {
        parse::parse_program(&text).map(Loaded::Program).map_err(|e| e.to_string())
    } else if spec.ends_with(".aut.json") {
        parse::automaton_from_json(&text).map(Loaded::Automaton).map_err(|e| e.to_string())
    } else if spec.ends_with(".aut") {
        parse::parse_automaton(&text).map(Loaded::Automaton).map_err(|e| e.to_string())
    } else if spec.ends_with(".cfg.json") {
        parse::grammar_from_json(&text).map(Loaded::Grammar).map_err(|e| e.to_string())
    } else if spec.ends_with(".cfg") {
        parse::parse_grammar(&text).map(Loaded::Grammar).map_err(|e| e.to_string())
    } else {
        Err(format!("{spec}: unknown extension (expected .typ, .aut, .cfg)"))
    }
}

/// Splits a word argument: `eps` or the empty string is the empty word;
/// whitespace separates multi-character letters; otherwise characters are
/// letters.
pub fn word_from_str(alphabet: &[String], text: &str) -> Result<Vec<String>, String> {
    let text = text.trim();
    if text.is_empty() || text == "eps" {
        return Ok(vec![]);
    }
    let letters: Vec<String> = if text.contains(char::is_whitespace) {
        text.split_whitespace().map(str::to_string).collect()
    } else if alphabet.iter().all(|l| l.chars().count() == 1) {
        text.chars().map(|c| c.to_string()).collect()
    } else {
        vec![text.to_string()]
    };
    let known: BTreeSet<&String> = alphabet.iter().collect();
    for letter in &letters {
        if !known.contains(letter) {
            return Err(format!("letter `{letter}` is not in the alphabet {alphabet:?}"));
        }
    }
    Ok(letters)
}

fn outcome_verdict(outcome: &RunOutcome) -> (&'static str, i32) {
    match outcome {
        RunOutcome::Accept => ("accept", 0),
        RunOutcome::Reject(crate::automata::RejectReason::Hang) => ("reject-hang", 1),
        RunOutcome::Reject(_) => ("reject", 1),
        RunOutcome::FuelExhausted => ("fuel-exhausted", 3),
    }
}

fn check_verdict(
    store: &TermStore,
    result: &CheckResult,
    assume_unambiguous: bool,
) -> (String, i32) {
    match result {
        CheckResult::Typed(t) => (format!("typed: {}", store.display(*t)), 0),
        CheckResult::TypedSet(ts) => {
            let rendered: Vec<String> = ts.iter().map(|&t| store.display(t)).collect();
            (format!("typed: {{{}}}", rendered.join(", ")), 0)
        }
        CheckResult::ErrorType => ("error-type".to_string(), 1),
        CheckResult::Ambiguous if assume_unambiguous => ("ill-typed".to_string(), 1),
        CheckResult::Ambiguous => ("ambiguous".to_string(), 1),
        CheckResult::IllTyped { at } => (format!("ill-typed at call {at}"), 1),
        CheckResult::FuelExhausted => ("fuel-exhausted".to_string(), 3),
    }
}

/// Runs the command line; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version print to stdout with success.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let fuel = cli
        .fuel
        .or_else(|| std::env::var("FORGE_FUEL").ok().and_then(|v| v.parse().ok()))
        .unwrap_or(100_000);
    let ctx = Ctx {
        ropts: RunOptions { fuel, ..RunOptions::default() },
        copts: CheckOptions { fuel, ..CheckOptions::default() },
        max_len: cli.max_len,
        json: cli.format == "json",
        seed: cli.seed,
    };
    match cli.command {
        Command::Simulate { automaton, word } => simulate(&ctx, &automaton, &word),
        Command::Typecheck { program, word, expr, mode, assume_unambiguous, lint_erasure } => {
            cmd_typecheck(&ctx, &program, word, expr, mode, assume_unambiguous, lint_erasure)
        }
        Command::Convert { input, from, to, word } => convert(&ctx, &input, &from, &to, word),
        Command::Gnf { grammar } => cmd_gnf(&ctx, &grammar),
        Command::Generate { input, target, word } => generate(&ctx, &input, &target, word),
        Command::Verify { left, right } => cmd_verify(&ctx, &left, &right),
        Command::Fixtures { name } => cmd_fixtures(&ctx, name),
    }
}

fn simulate(ctx: &Ctx, automaton: &str, word_text: &str) -> i32 {
    let spec = match load(automaton, ctx.seed) {
        Ok(Loaded::Automaton(a)) => a,
        Ok(other) => {
            return fail(ctx.json, "simulate", &format!("{automaton} is a {}", other.kind()))
        }
        Err(e) => return fail(ctx.json, "simulate", &e),
    };
    if let Err(e) = crate::automata::validate(&spec) {
        return fail(ctx.json, "simulate", &e.to_string());
    }
    let word = match word_from_str(&spec.word_alphabet(), word_text) {
        Ok(w) => w,
        Err(e) => return fail(ctx.json, "simulate", &e),
    };
    let outcome = match membership(&spec, &word, &ctx.ropts) {
        Ok(o) => o,
        Err(e) => return fail(ctx.json, "simulate", &e.to_string()),
    };
    let (verdict, exit) = outcome_verdict(&outcome);
    let report = Report {
        command: "simulate".into(),
        verdict: verdict.into(),
        exit,
        data: Some(json!({ "word": word })),
    };
    ctx.finish(report, &format!("{verdict}: {}", word.join(" ")))
}

#[allow(clippy::too_many_arguments)]
fn cmd_typecheck(
    ctx: &Ctx,
    program: &str,
    word: Option<String>,
    expr: Option<String>,
    mode: Option<String>,
    assume_unambiguous: bool,
    lint: bool,
) -> i32 {
    let program = match load(program, ctx.seed) {
        Ok(Loaded::Program(p)) => p,
        Ok(other) => {
            return fail(ctx.json, "typecheck", &format!("input is a {}", other.kind()))
        }
        Err(e) => return fail(ctx.json, "typecheck", &e),
    };
    let mode = match mode.as_deref() {
        None => program.mode,
        Some("one-type") => Mode::OneType,
        Some("eventually-one") => Mode::EventuallyOne,
        Some("multi") => Mode::MultipleTypes,
        Some(other) => return fail(ctx.json, "typecheck", &format!("unknown mode `{other}`")),
    };
    let mut lint_findings = Vec::new();
    if lint {
        lint_findings = lint_erasure(&program);
        for finding in &lint_findings {
            eprintln!("lint: {finding}");
        }
    }
    let exprs = if let Some(text) = expr {
        match parse::expr_from_str(&program.store, &text) {
            Ok(e) => vec![e],
            Err(e) => return fail(ctx.json, "typecheck", &e.to_string()),
        }
    } else if let Some(text) = word {
        match word_from_str(&program.word_alphabet(), &text) {
            Ok(w) => vec![crate::typesys::word_to_expression(&program, &w)],
            Err(e) => return fail(ctx.json, "typecheck", &e),
        }
    } else if !program.exprs.is_empty() {
        program.exprs.clone()
    } else {
        return fail(ctx.json, "typecheck", "no word, expression, or embedded expressions");
    };

    let mut lines = Vec::new();
    let mut entries = Vec::new();
    let mut exit = 0;
    for e in &exprs {
        let result = typecheck(&program, e, mode, &ctx.copts);
        let (verdict, code) = check_verdict(&program.store, &result, assume_unambiguous);
        // The worst verdict wins: inconclusive dominates, then negative.
        exit = match (exit, code) {
            (3, _) | (_, 3) => 3,
            (1, _) | (_, 1) => 1,
            _ => 0,
        };
        let rendered = match expression_to_word(&program, e) {
            Ok(w) if !w.is_empty() => w.join(" "),
            _ => "<expression>".to_string(),
        };
        lines.push(format!("{rendered}: {verdict}"));
        entries.push(json!({ "input": rendered, "verdict": verdict }));
    }
    let report = Report {
        command: "typecheck".into(),
        verdict: match exit {
            0 => "typed".into(),
            3 => "fuel-exhausted".into(),
            _ => "rejected".into(),
        },
        exit,
        data: Some(json!({ "results": entries, "lint": lint_findings })),
    };
    ctx.finish(report, &lines.join("\n"))
}

fn convert(ctx: &Ctx, input: &str, from: &str, to: &str, word: Option<String>) -> i32 {
    let loaded = match load(input, ctx.seed) {
        Ok(l) => l,
        Err(e) => return fail(ctx.json, "convert", &e),
    };
    let result: Result<(String, transforms::ConversionReport), String> = match (from, to, loaded) {
        ("tm", "ta", Loaded::Automaton(tm)) => {
            let word_text = word.unwrap_or_default();
            match word_from_str(&tm.word_alphabet(), &word_text)
                .and_then(|w| transforms::tm_to_ta(&tm, &w).map_err(|e| e.to_string()))
            {
                Ok((ta, report)) => Ok((parse::print_automaton(&ta), report)),
                Err(e) => Err(e),
            }
        }
        ("tm", "typeof-program", Loaded::Automaton(tm)) => {
            let word_text = word.unwrap_or_default();
            let run = || -> Result<_, String> {
                let w = word_from_str(&tm.word_alphabet(), &word_text)?;
                let (ta, _) = transforms::tm_to_ta(&tm, &w).map_err(|e| e.to_string())?;
                let (p, report) =
                    transforms::ta_to_typeof_program(&ta, &w).map_err(|e| e.to_string())?;
                Ok((parse::print_program(&p), report))
            };
            run()
        }
        ("ta", "typeof-program", Loaded::Automaton(ta)) => {
            let word_text = word.unwrap_or_default();
            match word_from_str(&ta.word_alphabet(), &word_text)
                .and_then(|w| transforms::ta_to_typeof_program(&ta, &w).map_err(|e| e.to_string()))
            {
                Ok((p, report)) => Ok((parse::print_program(&p), report)),
                Err(e) => Err(e),
            }
        }
        ("fluent", "dpda", Loaded::Program(p)) => transforms::fluent_to_dpda(&p)
            .map(|(dpda, report)| (parse::print_automaton(&dpda), report))
            .map_err(|e| e.to_string()),
        ("rudimentary", "ta", Loaded::Program(p)) => transforms::rudimentary_to_ta(&p)
            .map(|(ta, report)| (parse::print_automaton(&ta), report))
            .map_err(|e| e.to_string()),
        ("ta", "dpda", Loaded::Automaton(ta)) => transforms::ta_to_dpda(&ta)
            .map(|out| (parse::print_automaton(&out.dpda), out.report))
            .map_err(|e| e.to_string()),
        ("ta", "dyadic", Loaded::Automaton(ta)) => transforms::polyadic_to_dyadic(&ta)
            .map(|(out, report)| (parse::print_automaton(&out), report))
            .map_err(|e| e.to_string()),
        (from, to, loaded) => {
            Err(format!("cannot convert a {} from `{from}` to `{to}`", loaded.kind()))
        }
    };
    match result {
        Err(e) => fail(ctx.json, "convert", &e),
        Ok((dsl, report)) => {
            if ctx.json {
                let wrapped = Report {
                    command: "convert".into(),
                    verdict: "converted".into(),
                    exit: 0,
                    data: Some(json!({
                        "dsl": dsl,
                        "report": serde_json::to_value(&report).expect("report serializes"),
                    })),
                };
                println!("{}", serde_json::to_string_pretty(&wrapped).expect("serializes"));
            } else {
                print!("{dsl}");
                eprintln!(
                    "{}: {} -> {} ({} items in, {} out)",
                    report.conversion,
                    report.source_point,
                    report.target_point,
                    report.items_in,
                    report.items_out
                );
            }
            0
        }
    }
}

fn cmd_gnf(ctx: &Ctx, grammar: &str) -> i32 {
    let cfg = match load(grammar, ctx.seed) {
        Ok(Loaded::Grammar(g)) => g,
        Ok(other) => return fail(ctx.json, "gnf", &format!("input is a {}", other.kind())),
        Err(e) => return fail(ctx.json, "gnf", &e),
    };
    let gnf = to_gnf(&cfg);
    if ctx.json {
        let report = Report {
            command: "gnf".into(),
            verdict: "converted".into(),
            exit: 0,
            data: Some(json!({
                "grammar": serde_json::from_str::<serde_json::Value>(
                    &parse::grammar_to_json(&gnf)
                )
                .expect("grammar JSON parses"),
            })),
        };
        println!("{}", serde_json::to_string_pretty(&report).expect("serializes"));
    } else {
        print!("{}", parse::print_grammar(&gnf));
    }
    0
}

fn generate(ctx: &Ctx, input: &str, target: &str, word: Option<String>) -> i32 {
    let target = match Target::from_name(target) {
        Some(t) => t,
        None => return fail(ctx.json, "generate", &format!("unknown target `{target}`")),
    };
    let loaded = match load(input, ctx.seed) {
        Ok(l) => l,
        Err(e) => return fail(ctx.json, "generate", &e),
    };
    let program = match loaded {
        Loaded::Program(p) => Ok(p),
        Loaded::Grammar(g) => {
            gnf_to_program(&to_gnf(&g)).map_err(|e| e.to_string())
        }
        Loaded::Automaton(tm) if matches!(tm.storage, crate::automata::StorageKind::Tape { .. }) => {
            // The Turing pipeline: tape machine -> tree automaton ->
            // typeof program, one expression per requested word.
            let words_text = word.clone().unwrap_or_default();
            let chunks: Vec<&str> =
                words_text.split(',').filter(|c| !c.trim().is_empty()).collect();
            let run = || -> Result<TypeProgram, String> {
                let first = word_from_str(
                    &tm.word_alphabet(),
                    chunks.first().copied().unwrap_or(""),
                )?;
                let (ta, _) = transforms::tm_to_ta(&tm, &first).map_err(|e| e.to_string())?;
                let (mut program, _) =
                    transforms::ta_to_typeof_program(&ta, &first).map_err(|e| e.to_string())?;
                for chunk in chunks.iter().skip(1) {
                    let w = word_from_str(&tm.word_alphabet(), chunk)?;
                    let (p, _) =
                        transforms::ta_to_typeof_program(&ta, &w).map_err(|e| e.to_string())?;
                    program.exprs.extend(p.exprs);
                }
                Ok(program)
            };
            run()
        }
        Loaded::Automaton(_) => Err("generate expects a program, grammar, or tape machine".into()),
    };
    let program = match program {
        Ok(p) => p,
        Err(e) => return fail(ctx.json, "generate", &e),
    };
    let opts = EmitOptions::new(target);
    match emit(&program, &opts) {
        Err(e) => fail(ctx.json, "generate", &e.to_string()),
        Ok(text) => {
            if ctx.json {
                let point = classify_program(&program)
                    .map(|p| p.abbreviated())
                    .unwrap_or_default();
                let report = Report {
                    command: "generate".into(),
                    verdict: "generated".into(),
                    exit: 0,
                    data: Some(json!({ "source": text, "point": point })),
                };
                println!("{}", serde_json::to_string_pretty(&report).expect("serializes"));
            } else {
                print!("{text}");
            }
            0
        }
    }
}

fn cmd_verify(ctx: &Ctx, left: &str, right: &str) -> i32 {
    let side = |spec: &str| -> Result<Side, String> {
        match load(spec, ctx.seed)? {
            Loaded::Program(p) => Ok(Side::Program(p)),
            Loaded::Automaton(a) => Ok(Side::Automaton(a)),
            Loaded::Grammar(_) => {
                Err("verify compares programs and automata; convert grammars first".into())
            }
        }
    };
    let (left, right) = match (side(left), side(right)) {
        (Ok(l), Ok(r)) => (l, r),
        (Err(e), _) | (_, Err(e)) => return fail(ctx.json, "verify", &e),
    };
    let report = match verify_bisimulation(&left, &right, ctx.max_len, &ctx.ropts, &ctx.copts) {
        Ok(r) => r,
        Err(e) => return fail(ctx.json, "verify", &e.to_string()),
    };
    let exit = if !report.agreed() {
        1
    } else if !report.fuel_exhausted.is_empty() {
        3
    } else {
        0
    };
    let verdict = match exit {
        0 => "agree",
        3 => "agree-inconclusive",
        _ => "mismatch",
    };
    let mut text = format!(
        "{verdict}: {} words ≤ {} over {:?}; {} agreements, {} accepted by both, {} mismatches, {} inconclusive",
        report.words_checked,
        report.max_len,
        report.alphabet,
        report.agreements,
        report.accepted_by_both,
        report.mismatches.len(),
        report.fuel_exhausted.len()
    );
    for m in report.mismatches.iter().take(10) {
        text.push_str(&format!(
            "\n  {:?}: left {:?}, right {:?}",
            m.word.join(" "),
            m.left,
            m.right
        ));
    }
    let wrapped = Report {
        command: "verify".into(),
        verdict: verdict.into(),
        exit,
        data: Some(serde_json::to_value(&report).expect("report serializes")),
    };
    ctx.finish(wrapped, &text)
}

fn cmd_fixtures(ctx: &Ctx, name: Option<String>) -> i32 {
    match name {
        None => {
            let all = fixtures::fixtures();
            if ctx.json {
                let entries: Vec<serde_json::Value> = all
                    .iter()
                    .map(|f| {
                        json!({
                            "name": f.name,
                            "kind": match f.artifact {
                                Artifact::Program(_) => "program",
                                Artifact::Automaton(_) => "automaton",
                                Artifact::Grammar(_) => "grammar",
                            },
                            "description": f.description,
                        })
                    })
                    .collect();
                let report = Report {
                    command: "fixtures".into(),
                    verdict: "listed".into(),
                    exit: 0,
                    data: Some(json!({ "fixtures": entries })),
                };
                println!("{}", serde_json::to_string_pretty(&report).expect("serializes"));
            } else {
                for f in &all {
                    let kind = match f.artifact {
                        Artifact::Program(_) => "program",
                        Artifact::Automaton(_) => "automaton",
                        Artifact::Grammar(_) => "grammar",
                    };
                    println!("{:<24} {:<10} {}", f.name, kind, f.description);
                }
            }
            0
        }
        Some(name) => match fixtures::fixture(&name) {
            None => fail(ctx.json, "fixtures", &format!("unknown fixture `{name}`")),
            Some(f) => {
                let dsl = match &f.artifact {
                    Artifact::Program(p) => parse::print_program(p),
                    Artifact::Automaton(a) => parse::print_automaton(a),
                    Artifact::Grammar(g) => parse::print_grammar(g),
                };
                if ctx.json {
                    let report = Report {
                        command: "fixtures".into(),
                        verdict: "printed".into(),
                        exit: 0,
                        data: Some(json!({ "name": f.name, "dsl": dsl })),
                    };
                    println!("{}", serde_json::to_string_pretty(&report).expect("serializes"));
                } else {
                    print!("{dsl}");
                }
                0
            }
        },
    }
}

/// Membership of a word in a grammar fixture; used by tests to cross-check
/// the CLI against the library oracle.
pub fn grammar_membership(cfg: &Cfg, word: &[String]) -> bool {
    cyk_membership(cfg, word)
}
