//! Text formats for terms, programs, automata and grammars, with printers
//! such that printing then parsing is the identity on canonical forms.
//!
//! Term syntax: `eps` for the unit leaf, `x1..xN` for variables,
//! `g(a,b)` for compound terms, and monadic chains `g1 g2 g3` for
//! `g1(g2(g3(eps)))`. Rewrites are written `lhs -> rhs`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automata::{
    AutomatonSpec, ConsumeItem, EpsItem, Frame, InputAlphabet, Rewrite, StorageKind, TapeRule,
};
use crate::grammar::{Cfg, CfgRule, CfgSym};
use crate::term::{Node, RewriteRule, TermId, TermStore, LEAF};
use crate::typesys::{Expr, FunctionDef, Mode, Namespace, PseudoExpr, Ret, TypeProgram};

#[derive(Debug, Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        ParseError { line, col, msg: msg.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Semi,
    Pipe,
    Slash,
    Plus,
    Minus,
    Arrow,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Arrow => "`->`".into(),
        }
    }
}

fn ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '$' || (!c.is_ascii() && !c.is_whitespace())
}

/// Tokenizes one source, attaching line/column to every token. `#` starts a
/// comment running to the end of the line.
fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '#' {
                break;
            }
            let tok = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                ',' => Some(Tok::Comma),
                '.' => Some(Tok::Dot),
                ':' => Some(Tok::Colon),
                ';' => Some(Tok::Semi),
                '|' => Some(Tok::Pipe),
                '/' => Some(Tok::Slash),
                '+' => Some(Tok::Plus),
                _ => None,
            };
            if let Some(tok) = tok {
                out.push((tok, lineno, col));
                i += 1;
                continue;
            }
            if c == '-' {
                if chars.get(i + 1) == Some(&'>') {
                    out.push((Tok::Arrow, lineno, col));
                    i += 2;
                } else {
                    out.push((Tok::Minus, lineno, col));
                    i += 1;
                }
                continue;
            }
            if ident_char(c) {
                let start = i;
                while i < chars.len() {
                    let c = chars[i];
                    if ident_char(c) {
                        i += 1;
                    } else if c == '-'
                        && chars.get(i + 1).map(|&n| ident_char(n)).unwrap_or(false)
                    {
                        // Embedded dash, as in `tape-alphabet`.
                        i += 2;
                    } else {
                        break;
                    }
                }
                let ident: String = chars[start..i].iter().collect();
                out.push((Tok::Ident(ident), lineno, col));
                continue;
            }
            return Err(ParseError::new(lineno, col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

/// Token cursor with position-carrying errors.
struct Cursor {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Cursor {
    fn new(text: &str) -> Result<Self, ParseError> {
        Ok(Cursor { toks: lex(text)?, pos: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _, _)| t)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((1, 1))
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.here();
        ParseError::new(l, c, msg)
    }

    fn expect(&mut self, tok: Tok) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t == tok => Ok(()),
            Some(t) => {
                Err(self.error(format!("expected {}, found {}", tok.describe(), t.describe())))
            }
            None => Err(self.error(format!("expected {}, found end of input", tok.describe()))),
        }
    }

    fn expect_ident(&mut self) -> Result<String, ParseError> {
        match self.next() {
            Some(Tok::Ident(s)) => Ok(s),
            Some(t) => Err(self.error(format!("expected a name, found {}", t.describe()))),
            None => Err(self.error("expected a name, found end of input")),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        let got = self.expect_ident()?;
        if got == kw {
            Ok(())
        } else {
            Err(self.error(format!("expected `{kw}`, found `{got}`")))
        }
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Ident(s)) if s == kw) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

fn is_variable_name(name: &str) -> bool {
    let mut chars = name.chars();
    chars.next() == Some('x') && {
        let rest: String = chars.collect();
        !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())
    }
}

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

fn can_start_atom(tok: Option<&Tok>) -> bool {
    matches!(tok, Some(Tok::Ident(_)))
}

/// Parses one term: juxtaposed atoms form a rank-1 chain.
fn parse_term(cur: &mut Cursor, store: &TermStore) -> Result<TermId, ParseError> {
    let mut atoms: Vec<(String, Option<Vec<TermId>>)> = Vec::new();
    loop {
        let name = match cur.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => break,
        };
        cur.pos += 1;
        if cur.peek() == Some(&Tok::LParen) {
            cur.pos += 1;
            let mut args = Vec::new();
            if cur.peek() != Some(&Tok::RParen) {
                loop {
                    args.push(parse_term(cur, store)?);
                    if cur.peek() == Some(&Tok::Comma) {
                        cur.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            cur.expect(Tok::RParen)?;
            atoms.push((name, Some(args)));
            // A parenthesized atom closes the chain.
            break;
        }
        atoms.push((name, None));
        if !can_start_atom(cur.peek()) {
            break;
        }
    }
    if atoms.is_empty() {
        return Err(cur.error("expected a term"));
    }
    // Fold the chain right to left.
    let (last_name, last_args) = atoms.pop().unwrap();
    let mut term = match (last_name.as_str(), last_args) {
        ("eps", None) => LEAF,
        ("eps", Some(_)) => return Err(cur.error("`eps` takes no arguments")),
        (name, None) if is_variable_name(name) => store.var_term(store.var(name)),
        (name, None) => {
            let sym = store
                .symbol(name)
                .ok_or_else(|| cur.error(format!("undeclared symbol `{name}`")))?;
            if store.rank(sym) != 1 {
                return Err(cur.error(format!(
                    "bare `{name}` needs rank 1 (it has rank {})",
                    store.rank(sym)
                )));
            }
            store.app(sym, &[LEAF]).map_err(|e| cur.error(e.to_string()))?
        }
        (name, Some(args)) => {
            let sym = store
                .symbol(name)
                .ok_or_else(|| cur.error(format!("undeclared symbol `{name}`")))?;
            store.app(sym, &args).map_err(|e| cur.error(e.to_string()))?
        }
    };
    for (name, args) in atoms.into_iter().rev() {
        if args.is_some() {
            return Err(cur.error("only the last atom of a chain may be parenthesized"));
        }
        if name == "eps" || is_variable_name(&name) {
            return Err(cur.error(format!("`{name}` cannot be applied in a chain")));
        }
        let sym = store
            .symbol(&name)
            .ok_or_else(|| cur.error(format!("undeclared symbol `{name}`")))?;
        term = store.app(sym, &[term]).map_err(|e| cur.error(e.to_string()))?;
    }
    Ok(term)
}

/// Parses a term from a standalone string.
pub fn term_from_str(store: &TermStore, text: &str) -> Result<TermId, ParseError> {
    let mut cur = Cursor::new(text)?;
    let t = parse_term(&mut cur, store)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input after term"));
    }
    Ok(t)
}

/// Parses `lhs -> rhs` (comma-separated patterns allowed on the left).
pub fn rule_from_str(store: &TermStore, text: &str) -> Result<RewriteRule, ParseError> {
    let mut cur = Cursor::new(text)?;
    let rule = parse_rule(&mut cur, store)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input after rewrite"));
    }
    Ok(rule)
}

fn parse_rule(cur: &mut Cursor, store: &TermStore) -> Result<RewriteRule, ParseError> {
    let mut lhs = vec![parse_term(cur, store)?];
    while cur.peek() == Some(&Tok::Comma) {
        cur.pos += 1;
        lhs.push(parse_term(cur, store)?);
    }
    cur.expect(Tok::Arrow)?;
    let rhs = parse_term(cur, store)?;
    RewriteRule::new_multi(store, lhs, rhs).map_err(|e| cur.error(e.to_string()))
}

// ---------------------------------------------------------------------------
// Expressions and pseudo-expressions
// ---------------------------------------------------------------------------

fn parse_expr(cur: &mut Cursor, store: &TermStore) -> Result<Expr, ParseError> {
    let head = match cur.peek() {
        Some(Tok::Ident(s)) if s == "eps" => {
            cur.pos += 1;
            Expr::Unit
        }
        Some(Tok::Ident(s)) if s == "new" => {
            cur.pos += 1;
            cur.expect(Tok::LParen)?;
            let t = parse_term(cur, store)?;
            cur.expect(Tok::RParen)?;
            Expr::New(t)
        }
        Some(Tok::Ident(_)) => {
            let name = cur.expect_ident()?;
            cur.expect(Tok::LParen)?;
            let mut args = Vec::new();
            if cur.peek() != Some(&Tok::RParen) {
                loop {
                    args.push(parse_expr(cur, store)?);
                    if cur.peek() == Some(&Tok::Comma) {
                        cur.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            cur.expect(Tok::RParen)?;
            if args.is_empty() {
                args.push(Expr::Unit);
            }
            Expr::Call(name, args)
        }
        _ => return Err(cur.error("expected an expression")),
    };
    let mut expr = head;
    while cur.peek() == Some(&Tok::Dot) {
        cur.pos += 1;
        let name = cur.expect_ident()?;
        expr = Expr::Call(name, vec![expr]);
    }
    Ok(expr)
}

pub fn expr_from_str(store: &TermStore, text: &str) -> Result<Expr, ParseError> {
    let mut cur = Cursor::new(text)?;
    let e = parse_expr(&mut cur, store)?;
    if !cur.at_end() {
        return Err(cur.error("trailing input after expression"));
    }
    Ok(e)
}

/// Pseudo-expressions mirror expressions with terms at the leaves. Idents
/// naming functions parse as calls; everything else parses as a term leaf.
fn parse_pseudo(
    cur: &mut Cursor,
    store: &TermStore,
    fn_names: &BTreeSet<String>,
) -> Result<PseudoExpr, ParseError> {
    let head = match cur.peek() {
        Some(Tok::Ident(name)) if fn_names.contains(name) => {
            let name = cur.expect_ident()?;
            cur.expect(Tok::LParen)?;
            let mut args = Vec::new();
            if cur.peek() != Some(&Tok::RParen) {
                loop {
                    args.push(parse_pseudo(cur, store, fn_names)?);
                    if cur.peek() == Some(&Tok::Comma) {
                        cur.pos += 1;
                    } else {
                        break;
                    }
                }
            }
            cur.expect(Tok::RParen)?;
            PseudoExpr::Call(name, args)
        }
        _ => PseudoExpr::Leaf(parse_term(cur, store)?),
    };
    let mut pseudo = head;
    while cur.peek() == Some(&Tok::Dot) {
        cur.pos += 1;
        let name = cur.expect_ident()?;
        pseudo = PseudoExpr::Call(name, vec![pseudo]);
    }
    Ok(pseudo)
}

// ---------------------------------------------------------------------------
// Program DSL
// ---------------------------------------------------------------------------

/// Parses the program DSL:
///
/// ```text
/// name dyck
/// mode one-type            # or eventually-one | multi
/// frame begin begin
/// frame end empty
/// type Stack/1
/// fn push : Stack(x1) -> Stack(Stack(x1))
/// aux f : Stack(x1) -> typeof x1.g
/// expr eps.push.pop
/// ```
pub fn parse_program(text: &str) -> Result<TypeProgram, ParseError> {
    let store = Arc::new(TermStore::new());
    let mut fn_names: BTreeSet<String> = BTreeSet::new();

    // First pass: declarations and names, so bodies may reference forward.
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let mut cur = Cursor::new(line).map_err(|e| ParseError::new(lineno, e.col, e.msg))?;
        let relocate = |e: ParseError| ParseError::new(lineno, e.col, e.msg);
        match cur.peek() {
            Some(Tok::Ident(kw)) if kw == "type" => {
                cur.pos += 1;
                let name = cur.expect_ident().map_err(relocate)?;
                cur.expect(Tok::Slash).map_err(relocate)?;
                let rank = cur.expect_ident().map_err(relocate)?;
                let rank: usize = rank
                    .parse()
                    .map_err(|_| ParseError::new(lineno, 1, format!("bad rank `{rank}`")))?;
                store
                    .declare(&name, rank)
                    .map_err(|e| ParseError::new(lineno, 1, e.to_string()))?;
            }
            Some(Tok::Ident(kw)) if kw == "fn" || kw == "aux" => {
                cur.pos += 1;
                let name = cur.expect_ident().map_err(relocate)?;
                fn_names.insert(name);
            }
            _ => {}
        }
    }

    let mut program = TypeProgram::new(store.clone());
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let mut cur = Cursor::new(line).map_err(|e| ParseError::new(lineno, e.col, e.msg))?;
        let relocate = |e: ParseError| ParseError::new(lineno, e.col, e.msg);
        let kw = match cur.peek() {
            None => continue,
            Some(Tok::Ident(kw)) => kw.clone(),
            Some(t) => {
                return Err(ParseError::new(lineno, 1, format!("unexpected {}", t.describe())))
            }
        };
        match kw.as_str() {
            "type" => {} // handled in the first pass
            "name" => {
                cur.pos += 1;
                program.name = Some(cur.expect_ident().map_err(relocate)?);
            }
            "mode" => {
                cur.pos += 1;
                let mode = cur.expect_ident().map_err(relocate)?;
                program.mode = match mode.as_str() {
                    "one-type" => Mode::OneType,
                    "eventually-one" => Mode::EventuallyOne,
                    "multi" => Mode::MultipleTypes,
                    other => {
                        return Err(ParseError::new(lineno, 1, format!("unknown mode `{other}`")))
                    }
                };
            }
            "frame" => {
                cur.pos += 1;
                let which = cur.expect_ident().map_err(relocate)?;
                let name = cur.expect_ident().map_err(relocate)?;
                match which.as_str() {
                    "begin" => program.frame.begin = Some(name),
                    "end" => program.frame.end = Some(name),
                    other => {
                        return Err(ParseError::new(
                            lineno,
                            1,
                            format!("expected `begin` or `end`, found `{other}`"),
                        ))
                    }
                }
            }
            "fn" | "aux" => {
                cur.pos += 1;
                let namespace =
                    if kw == "fn" { Namespace::Primary } else { Namespace::Auxiliary };
                let name = cur.expect_ident().map_err(relocate)?;
                cur.expect(Tok::Colon).map_err(relocate)?;
                let mut params = vec![parse_term(&mut cur, &store).map_err(&relocate)?];
                while cur.peek() == Some(&Tok::Comma) {
                    cur.pos += 1;
                    params.push(parse_term(&mut cur, &store).map_err(&relocate)?);
                }
                cur.expect(Tok::Arrow).map_err(&relocate)?;
                let ret = if cur.eat_keyword("typeof") {
                    Ret::Typeof(parse_pseudo(&mut cur, &store, &fn_names).map_err(&relocate)?)
                } else {
                    Ret::Type(parse_term(&mut cur, &store).map_err(&relocate)?)
                };
                if !cur.at_end() {
                    return Err(relocate(cur.error("trailing input after definition")));
                }
                program.defs.push(FunctionDef { name, namespace, params, ret });
            }
            "accept" => {
                cur.pos += 1;
                let t = parse_term(&mut cur, &store).map_err(&relocate)?;
                if !cur.at_end() {
                    return Err(relocate(cur.error("trailing input after accept type")));
                }
                program.accept_type = Some(t);
            }
            "expr" => {
                cur.pos += 1;
                let e = parse_expr(&mut cur, &store).map_err(&relocate)?;
                if !cur.at_end() {
                    return Err(relocate(cur.error("trailing input after expression")));
                }
                program.exprs.push(e);
            }
            other => {
                return Err(ParseError::new(lineno, 1, format!("unknown directive `{other}`")))
            }
        }
    }
    if program.defs.is_empty() {
        return Err(ParseError::new(1, 1, "program defines no functions"));
    }
    program.validate().map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    Ok(program)
}

fn print_pseudo(store: &TermStore, p: &PseudoExpr) -> String {
    match p {
        PseudoExpr::Leaf(t) => print_term_grouped(store, *t),
        PseudoExpr::Call(name, args) => {
            let inner: Vec<String> = args.iter().map(|a| print_pseudo(store, a)).collect();
            format!("{name}({})", inner.join(", "))
        }
    }
}

/// Terms in printed artifacts stay fully parenthesized so comma-separated
/// positions re-parse unambiguously.
fn print_term_grouped(store: &TermStore, t: TermId) -> String {
    match store.node(t) {
        Node::Leaf => "eps".to_string(),
        Node::Var(v) => store.var_name(v),
        Node::App(sym, children) => {
            let inner: Vec<String> =
                children.iter().map(|&c| print_term_grouped(store, c)).collect();
            format!("{}({})", store.symbol_name(sym), inner.join(","))
        }
    }
}

fn print_expr(e: &Expr, store: &TermStore) -> String {
    match e {
        Expr::Unit => "eps".to_string(),
        Expr::New(t) => format!("new({})", print_term_grouped(store, *t)),
        Expr::Call(name, args) if args.len() == 1 => {
            format!("{}.{}", print_expr(&args[0], store), name)
        }
        Expr::Call(name, args) => {
            let inner: Vec<String> = args.iter().map(|a| print_expr(a, store)).collect();
            format!("{name}({})", inner.join(", "))
        }
    }
}

pub fn print_program(program: &TypeProgram) -> String {
    let store = &program.store;
    let mut out = String::new();
    if let Some(name) = &program.name {
        out.push_str(&format!("name {name}\n"));
    }
    out.push_str(&format!(
        "mode {}\n",
        match program.mode {
            Mode::OneType => "one-type",
            Mode::EventuallyOne => "eventually-one",
            Mode::MultipleTypes => "multi",
        }
    ));
    if let Some(b) = &program.frame.begin {
        out.push_str(&format!("frame begin {b}\n"));
    }
    if let Some(e) = &program.frame.end {
        out.push_str(&format!("frame end {e}\n"));
    }
    if let Some(t) = program.accept_type {
        out.push_str(&format!("accept {}\n", print_term_grouped(store, t)));
    }
    for (name, rank) in store.symbols() {
        out.push_str(&format!("type {name}/{rank}\n"));
    }
    for def in &program.defs {
        let kw = match def.namespace {
            Namespace::Primary => "fn",
            Namespace::Auxiliary => "aux",
        };
        let params: Vec<String> =
            def.params.iter().map(|&p| print_term_grouped(store, p)).collect();
        let ret = match &def.ret {
            Ret::Type(t) => print_term_grouped(store, *t),
            Ret::Typeof(p) => format!("typeof {}", print_pseudo(store, p)),
        };
        out.push_str(&format!("{kw} {} : {} -> {ret}\n", def.name, params.join(", ")));
    }
    for e in &program.exprs {
        out.push_str(&format!("expr {}\n", print_expr(e, store)));
    }
    out
}

// ---------------------------------------------------------------------------
// Automaton DSL
// ---------------------------------------------------------------------------

/// Parses the automaton DSL:
///
/// ```text
/// name tm-anbn
/// storage tape             # none | pushdown | tree | tape | tape-linear
/// preload-input
/// states q0 q1
/// initial q0
/// accepting q1
/// alphabet a b             # forest mode: alphabet f/2 g/1
/// tape-alphabet _b a b     # first symbol is the blank
/// delta: on a in q0 rule x1 -> S(x1) goto q0
/// epsilon: in q0 rule a -> _b+ goto q1
/// ```
pub fn parse_automaton(text: &str) -> Result<AutomatonSpec, ParseError> {
    let store = Arc::new(TermStore::new());
    let mut spec = AutomatonSpec {
        name: None,
        store: store.clone(),
        states: Vec::new(),
        initial: 0,
        accepting: BTreeSet::new(),
        input: InputAlphabet::Word(Vec::new()),
        storage: StorageKind::None,
        initial_storage: None,
        preload: false,
        consuming: Vec::new(),
        epsilon: Vec::new(),
        frame: Frame::default(),
        declared: Vec::new(),
    };
    let mut tape_blank: Option<String> = None;
    let mut initial_name: Option<String> = None;
    let mut accepting_names: Vec<String> = Vec::new();
    let mut pending_initial_storage: Option<(usize, String)> = None;
    struct PendingItem {
        line: usize,
        eps: bool,
        letter: Option<String>,
        from: Vec<String>,
        rule_text: Option<String>,
        to: String,
    }
    let mut pending: Vec<PendingItem> = Vec::new();

    for (lineno, raw_line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let mut cur = Cursor::new(raw_line).map_err(|e| ParseError::new(lineno, e.col, e.msg))?;
        let relocate = |e: ParseError| ParseError::new(lineno, e.col, e.msg);
        let kw = match cur.peek() {
            None => continue,
            Some(Tok::Ident(kw)) => kw.clone(),
            Some(t) => {
                return Err(ParseError::new(lineno, 1, format!("unexpected {}", t.describe())))
            }
        };
        cur.pos += 1;
        match kw.as_str() {
            "name" => spec.name = Some(cur.expect_ident().map_err(&relocate)?),
            "storage" => {
                let kind = cur.expect_ident().map_err(&relocate)?;
                spec.storage = match kind.as_str() {
                    "none" => StorageKind::None,
                    "pushdown" => StorageKind::Tree { pushdown: true },
                    "tree" => StorageKind::Tree { pushdown: false },
                    // Blank symbol resolved once the tape alphabet is read.
                    "tape" => StorageKind::Tape { linear: false, blank: crate::term::SymbolId(0) },
                    "tape-linear" => {
                        StorageKind::Tape { linear: true, blank: crate::term::SymbolId(0) }
                    }
                    other => {
                        return Err(ParseError::new(
                            lineno,
                            1,
                            format!("unknown storage `{other}`"),
                        ))
                    }
                };
            }
            "preload-input" => spec.preload = true,
            "states" => {
                while let Some(Tok::Ident(_)) = cur.peek() {
                    spec.states.push(cur.expect_ident().map_err(&relocate)?);
                }
            }
            "initial" => initial_name = Some(cur.expect_ident().map_err(&relocate)?),
            "accepting" => {
                while let Some(Tok::Ident(_)) = cur.peek() {
                    accepting_names.push(cur.expect_ident().map_err(&relocate)?);
                }
            }
            "alphabet" => {
                let mut letters = Vec::new();
                let mut ranked = Vec::new();
                let mut forest = false;
                while let Some(Tok::Ident(_)) = cur.peek() {
                    let name = cur.expect_ident().map_err(&relocate)?;
                    if cur.peek() == Some(&Tok::Slash) {
                        cur.pos += 1;
                        forest = true;
                        let rank = cur.expect_ident().map_err(&relocate)?;
                        let rank: usize = rank.parse().map_err(|_| {
                            ParseError::new(lineno, 1, format!("bad rank `{rank}`"))
                        })?;
                        store
                            .declare(&name, rank)
                            .map_err(|e| ParseError::new(lineno, 1, e.to_string()))?;
                        ranked.push((name, rank));
                    } else {
                        letters.push(name);
                    }
                }
                spec.input = if forest {
                    InputAlphabet::Forest(ranked)
                } else {
                    InputAlphabet::Word(letters)
                };
            }
            "stack-alphabet" => {
                while let Some(Tok::Ident(_)) = cur.peek() {
                    let name = cur.expect_ident().map_err(&relocate)?;
                    store
                        .declare(&name, 1)
                        .map_err(|e| ParseError::new(lineno, 1, e.to_string()))?;
                }
            }
            "tree-alphabet" => {
                while let Some(Tok::Ident(_)) = cur.peek() {
                    let name = cur.expect_ident().map_err(&relocate)?;
                    cur.expect(Tok::Slash).map_err(&relocate)?;
                    let rank = cur.expect_ident().map_err(&relocate)?;
                    let rank: usize = rank
                        .parse()
                        .map_err(|_| ParseError::new(lineno, 1, format!("bad rank `{rank}`")))?;
                    store
                        .declare(&name, rank)
                        .map_err(|e| ParseError::new(lineno, 1, e.to_string()))?;
                }
            }
            "tape-alphabet" => {
                while let Some(Tok::Ident(_)) = cur.peek() {
                    let name = cur.expect_ident().map_err(&relocate)?;
                    store
                        .declare(&name, 1)
                        .map_err(|e| ParseError::new(lineno, 1, e.to_string()))?;
                    if tape_blank.is_none() {
                        tape_blank = Some(name);
                    }
                }
            }
            "initial-storage" => {
                // Term parsed after all alphabet sections are read.
                let rest = raw_line
                    .trim_start()
                    .strip_prefix("initial-storage")
                    .unwrap_or("")
                    .to_string();
                pending_initial_storage = Some((lineno, rest));
            }
            "frame-begin" => spec.frame.begin = Some(cur.expect_ident().map_err(&relocate)?),
            "frame-end" => spec.frame.end = Some(cur.expect_ident().map_err(&relocate)?),
            "expect" => {
                while let Some(Tok::Ident(_)) = cur.peek() {
                    spec.declared.push(cur.expect_ident().map_err(&relocate)?);
                }
            }
            "delta" | "epsilon" => {
                cur.expect(Tok::Colon).map_err(&relocate)?;
                let eps = kw == "epsilon";
                let mut letter = None;
                if !eps {
                    cur.expect_keyword("on").map_err(&relocate)?;
                    letter = Some(cur.expect_ident().map_err(&relocate)?);
                }
                let mut from = Vec::new();
                if cur.eat_keyword("in") {
                    from.push(cur.expect_ident().map_err(&relocate)?);
                }
                if cur.eat_keyword("children") {
                    loop {
                        from.push(cur.expect_ident().map_err(&relocate)?);
                        if cur.peek() == Some(&Tok::Comma) {
                            cur.pos += 1;
                        } else {
                            break;
                        }
                    }
                }
                let rule_text = if cur.eat_keyword("rule") {
                    // Capture tokens up to `goto`; parsed once alphabets exist.
                    let start = cur.pos;
                    while !matches!(cur.peek(), Some(Tok::Ident(s)) if s == "goto") {
                        if cur.next().is_none() {
                            return Err(ParseError::new(lineno, 1, "missing `goto`"));
                        }
                    }
                    Some(render_tokens(&cur.toks[start..cur.pos]))
                } else {
                    None
                };
                cur.expect_keyword("goto").map_err(&relocate)?;
                let to = cur.expect_ident().map_err(&relocate)?;
                if !cur.at_end() {
                    return Err(relocate(cur.error("trailing input after item")));
                }
                pending.push(PendingItem { line: lineno, eps, letter, from, rule_text, to });
            }
            other => {
                return Err(ParseError::new(lineno, 1, format!("unknown directive `{other}`")))
            }
        }
    }

    if let StorageKind::Tape { linear, .. } = spec.storage {
        let blank_name = tape_blank
            .ok_or_else(|| ParseError::new(1, 1, "tape storage requires a tape-alphabet"))?;
        let blank = store.symbol(&blank_name).unwrap();
        spec.storage = StorageKind::Tape { linear, blank };
    }
    if spec.states.is_empty() {
        spec.states.push("q0".to_string());
    }
    if let Some(name) = initial_name {
        spec.initial =
            spec.state_index(&name).map_err(|e| ParseError::new(1, 1, e.to_string()))?;
    }
    for name in accepting_names {
        let idx = spec.state_index(&name).map_err(|e| ParseError::new(1, 1, e.to_string()))?;
        spec.accepting.insert(idx);
    }
    if let Some((lineno, text)) = pending_initial_storage {
        let term =
            term_from_str(&store, &text).map_err(|e| ParseError::new(lineno, e.col, e.msg))?;
        spec.initial_storage = Some(term);
    }
    for item in pending {
        let from: Vec<usize> = item
            .from
            .iter()
            .map(|n| spec.state_index(n))
            .collect::<Result<_, _>>()
            .map_err(|e| ParseError::new(item.line, 1, e.to_string()))?;
        let to = spec
            .state_index(&item.to)
            .map_err(|e| ParseError::new(item.line, 1, e.to_string()))?;
        let rule = match item.rule_text {
            None => None,
            Some(text) => Some(
                parse_rewrite(&store, &spec.storage, &text)
                    .map_err(|e| ParseError::new(item.line, 1, e.msg))?,
            ),
        };
        if item.eps {
            spec.epsilon.push(EpsItem { from: from.first().copied().unwrap_or(0), rule, to });
        } else {
            spec.consuming.push(ConsumeItem { letter: item.letter.unwrap(), from, rule, to });
        }
    }
    Ok(spec)
}

fn render_tokens(toks: &[(Tok, usize, usize)]) -> String {
    let mut out = String::new();
    for (t, _, _) in toks {
        let s = match t {
            Tok::Ident(s) => s.clone(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Comma => ",".into(),
            Tok::Dot => ".".into(),
            Tok::Colon => ":".into(),
            Tok::Semi => ";".into(),
            Tok::Pipe => "|".into(),
            Tok::Slash => "/".into(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Arrow => "->".into(),
        };
        if !out.is_empty() && matches!(t, Tok::Ident(_)) {
            out.push(' ');
        }
        out.push_str(&s);
    }
    out
}

/// Parses a storage rewrite: a tape rule (`a -> b+`, `a -> b-`, `_ -> b`)
/// on tape storage, a term rewrite otherwise.
fn parse_rewrite(
    store: &TermStore,
    storage: &StorageKind,
    text: &str,
) -> Result<Rewrite, ParseError> {
    if let StorageKind::Tape { .. } = storage {
        let mut cur = Cursor::new(text)?;
        let read = cur.expect_ident()?;
        cur.expect(Tok::Arrow)?;
        let write = cur.expect_ident()?;
        let write_sym = store
            .symbol(&write)
            .ok_or_else(|| cur.error(format!("undeclared tape symbol `{write}`")))?;
        let rule = if read == "_" {
            if !cur.at_end() {
                return Err(cur.error("initialization rules do not move the head"));
            }
            TapeRule::Init { write: write_sym }
        } else {
            let read_sym = store
                .symbol(&read)
                .ok_or_else(|| cur.error(format!("undeclared tape symbol `{read}`")))?;
            let right = match cur.next() {
                Some(Tok::Plus) => true,
                Some(Tok::Minus) => false,
                _ => return Err(cur.error("tape rule must end in `+` or `-`")),
            };
            if !cur.at_end() {
                return Err(cur.error("trailing input after tape rule"));
            }
            TapeRule::Write { read: read_sym, write: write_sym, right }
        };
        return Ok(Rewrite::Tape(rule));
    }
    Ok(Rewrite::Term(rule_from_str(store, text)?))
}

fn print_rewrite(store: &TermStore, rewrite: &Rewrite) -> String {
    match rewrite {
        Rewrite::Term(rule) => {
            let lhs: Vec<String> =
                rule.lhs.iter().map(|&p| print_term_grouped(store, p)).collect();
            format!("{} -> {}", lhs.join(", "), print_term_grouped(store, rule.rhs))
        }
        Rewrite::Tape(TapeRule::Write { read, write, right }) => format!(
            "{} -> {}{}",
            store.symbol_name(*read),
            store.symbol_name(*write),
            if *right { "+" } else { "-" }
        ),
        Rewrite::Tape(TapeRule::Init { write }) => format!("_ -> {}", store.symbol_name(*write)),
    }
}

pub fn print_automaton(spec: &AutomatonSpec) -> String {
    let store = &spec.store;
    let mut out = String::new();
    if let Some(name) = &spec.name {
        out.push_str(&format!("name {name}\n"));
    }
    match &spec.storage {
        StorageKind::None => out.push_str("storage none\n"),
        StorageKind::Tree { pushdown: true } => out.push_str("storage pushdown\n"),
        StorageKind::Tree { pushdown: false } => out.push_str("storage tree\n"),
        StorageKind::Tape { linear, .. } => {
            out.push_str(if *linear { "storage tape-linear\n" } else { "storage tape\n" })
        }
    }
    if spec.preload {
        out.push_str("preload-input\n");
    }
    out.push_str(&format!("states {}\n", spec.states.join(" ")));
    out.push_str(&format!("initial {}\n", spec.states[spec.initial]));
    let accepting: Vec<&str> = spec.accepting.iter().map(|&i| spec.states[i].as_str()).collect();
    out.push_str(&format!("accepting {}\n", accepting.join(" ")));
    match &spec.input {
        InputAlphabet::Word(letters) => out.push_str(&format!("alphabet {}\n", letters.join(" "))),
        InputAlphabet::Forest(sig) => {
            let parts: Vec<String> = sig.iter().map(|(n, r)| format!("{n}/{r}")).collect();
            out.push_str(&format!("alphabet {}\n", parts.join(" ")));
        }
    }
    match &spec.storage {
        StorageKind::None => {}
        StorageKind::Tree { pushdown } => {
            let declared: Vec<(String, usize)> = store
                .symbols()
                .into_iter()
                .filter(|(n, r)| match &spec.input {
                    InputAlphabet::Forest(sig) => !sig.iter().any(|(n2, r2)| n2 == n && r2 == r),
                    _ => true,
                })
                .collect();
            if *pushdown {
                let names: Vec<String> = declared.into_iter().map(|(n, _)| n).collect();
                out.push_str(&format!("stack-alphabet {}\n", names.join(" ")));
            } else {
                let parts: Vec<String> =
                    declared.into_iter().map(|(n, r)| format!("{n}/{r}")).collect();
                out.push_str(&format!("tree-alphabet {}\n", parts.join(" ")));
            }
        }
        StorageKind::Tape { blank, .. } => {
            let blank_name = store.symbol_name(*blank);
            let mut names = vec![blank_name.clone()];
            for (n, _) in store.symbols() {
                if n != blank_name {
                    names.push(n);
                }
            }
            out.push_str(&format!("tape-alphabet {}\n", names.join(" ")));
        }
    }
    if let Some(init) = spec.initial_storage {
        if init != LEAF {
            out.push_str(&format!("initial-storage {}\n", print_term_grouped(store, init)));
        }
    }
    if let Some(b) = &spec.frame.begin {
        out.push_str(&format!("frame-begin {b}\n"));
    }
    if let Some(e) = &spec.frame.end {
        out.push_str(&format!("frame-end {e}\n"));
    }
    if !spec.declared.is_empty() {
        out.push_str(&format!("expect {}\n", spec.declared.join(" ")));
    }
    for item in &spec.consuming {
        out.push_str(&format!("delta: on {} ", item.letter));
        match &spec.input {
            InputAlphabet::Forest(_) => {
                let states: Vec<&str> =
                    item.from.iter().map(|&i| spec.states[i].as_str()).collect();
                out.push_str(&format!("children {} ", states.join(",")));
            }
            _ => out.push_str(&format!("in {} ", spec.states[item.from[0]])),
        }
        if let Some(rule) = &item.rule {
            out.push_str(&format!("rule {} ", print_rewrite(store, rule)));
        }
        out.push_str(&format!("goto {}\n", spec.states[item.to]));
    }
    for item in &spec.epsilon {
        out.push_str(&format!("epsilon: in {} ", spec.states[item.from]));
        if let Some(rule) = &item.rule {
            out.push_str(&format!("rule {} ", print_rewrite(store, rule)));
        }
        out.push_str(&format!("goto {}\n", spec.states[item.to]));
    }
    out
}

// ---------------------------------------------------------------------------
// Grammar DSL
// ---------------------------------------------------------------------------

/// Parses the grammar DSL: `start S;` then rules `S -> a S a | b S b | ;`
/// where an empty alternative derives the empty word.
pub fn parse_grammar(text: &str) -> Result<Cfg, ParseError> {
    let mut cur = Cursor::new(text)?;
    cur.expect_keyword("start")?;
    let start = cur.expect_ident()?;
    cur.expect(Tok::Semi)?;

    let mut raw: Vec<(String, Vec<Vec<String>>)> = Vec::new();
    while !cur.at_end() {
        let lhs = cur.expect_ident()?;
        cur.expect(Tok::Arrow)?;
        let mut alts: Vec<Vec<String>> = vec![Vec::new()];
        loop {
            match cur.next() {
                Some(Tok::Ident(name)) => alts.last_mut().unwrap().push(name),
                Some(Tok::Pipe) => alts.push(Vec::new()),
                Some(Tok::Semi) => break,
                Some(t) => return Err(cur.error(format!("unexpected {}", t.describe()))),
                None => return Err(cur.error("missing `;` at end of rule")),
            }
        }
        raw.push((lhs, alts));
    }

    let mut variables: Vec<String> = Vec::new();
    for (lhs, _) in &raw {
        if lhs != &start && !variables.contains(lhs) {
            variables.push(lhs.clone());
        }
    }
    let mut terminals: Vec<String> = Vec::new();
    for (_, alts) in &raw {
        for alt in alts {
            for name in alt {
                if name != &start && !variables.contains(name) && !terminals.contains(name) {
                    terminals.push(name.clone());
                }
            }
        }
    }
    let mut cfg = Cfg { name: None, terminals, variables, rules: Vec::new() };
    for (lhs, alts) in raw {
        let lhs_idx = if lhs == start {
            None
        } else {
            Some(cfg.variables.iter().position(|v| *v == lhs).unwrap())
        };
        for alt in alts {
            let rhs: Vec<CfgSym> = alt
                .iter()
                .map(|name| {
                    if name == &start {
                        CfgSym::Start
                    } else if let Some(v) = cfg.variables.iter().position(|v| v == name) {
                        CfgSym::V(v)
                    } else {
                        CfgSym::T(cfg.terminal(name).unwrap())
                    }
                })
                .collect();
            cfg.rules.push(CfgRule { lhs: lhs_idx, rhs });
        }
    }
    Ok(cfg)
}

pub fn print_grammar(cfg: &Cfg) -> String {
    // The start symbol needs a printable name distinct from everything else.
    let mut start = "S".to_string();
    while cfg.variables.contains(&start) || cfg.terminals.contains(&start) {
        start.push('_');
    }
    let mut out = format!("start {start};\n");
    let sym_name = |s: &CfgSym| match s {
        CfgSym::Start => start.clone(),
        CfgSym::V(v) => cfg.variables[*v].clone(),
        CfgSym::T(t) => cfg.terminals[*t].clone(),
    };
    let mut by_lhs: Vec<(Option<usize>, Vec<String>)> = Vec::new();
    for rule in &cfg.rules {
        let rhs: Vec<String> = rule.rhs.iter().map(&sym_name).collect();
        let rendered = rhs.join(" ");
        match by_lhs.iter_mut().find(|(l, _)| *l == rule.lhs) {
            Some((_, alts)) => alts.push(rendered),
            None => by_lhs.push((rule.lhs, vec![rendered])),
        }
    }
    for (lhs, alts) in by_lhs {
        let lhs_name = match lhs {
            None => start.clone(),
            Some(v) => cfg.variables[v].clone(),
        };
        out.push_str(&format!("{lhs_name} -> {};\n", alts.join(" | ")));
    }
    out
}

// ---------------------------------------------------------------------------
// JSON mirrors
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct AutomatonDto {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    storage: String,
    #[serde(rename = "preload-input", default)]
    preload_input: bool,
    states: Vec<String>,
    initial: String,
    accepting: Vec<String>,
    alphabet: Vec<String>,
    #[serde(rename = "stack-alphabet", default, skip_serializing_if = "Vec::is_empty")]
    stack_alphabet: Vec<String>,
    #[serde(rename = "tree-alphabet", default, skip_serializing_if = "Vec::is_empty")]
    tree_alphabet: Vec<String>,
    #[serde(rename = "tape-alphabet", default, skip_serializing_if = "Vec::is_empty")]
    tape_alphabet: Vec<String>,
    #[serde(rename = "initial-storage", skip_serializing_if = "Option::is_none")]
    initial_storage: Option<String>,
    #[serde(rename = "frame-begin", skip_serializing_if = "Option::is_none")]
    frame_begin: Option<String>,
    #[serde(rename = "frame-end", skip_serializing_if = "Option::is_none")]
    frame_end: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    expect: Vec<String>,
    delta: Vec<DeltaDto>,
    epsilon: Vec<EpsilonDto>,
}

#[derive(Serialize, Deserialize)]
struct DeltaDto {
    on: String,
    #[serde(rename = "in")]
    from: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<String>,
    goto: String,
}

#[derive(Serialize, Deserialize)]
struct EpsilonDto {
    #[serde(rename = "in")]
    from: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    rule: Option<String>,
    goto: String,
}

/// JSON mirror of the automaton DSL, field for field.
pub fn automaton_to_json(spec: &AutomatonSpec) -> String {
    let store = &spec.store;
    let (storage, stack, tree, tape) = match &spec.storage {
        StorageKind::None => ("none", vec![], vec![], vec![]),
        StorageKind::Tree { pushdown: true } => (
            "pushdown",
            store.symbols().into_iter().map(|(n, _)| n).collect(),
            vec![],
            vec![],
        ),
        StorageKind::Tree { pushdown: false } => (
            "tree",
            vec![],
            store.symbols().into_iter().map(|(n, r)| format!("{n}/{r}")).collect(),
            vec![],
        ),
        StorageKind::Tape { linear, blank } => {
            let blank_name = store.symbol_name(*blank);
            let mut names = vec![blank_name.clone()];
            names.extend(
                store.symbols().into_iter().map(|(n, _)| n).filter(|n| *n != blank_name),
            );
            (if *linear { "tape-linear" } else { "tape" }, vec![], vec![], names)
        }
    };
    let dto = AutomatonDto {
        name: spec.name.clone(),
        storage: storage.to_string(),
        preload_input: spec.preload,
        states: spec.states.clone(),
        initial: spec.states[spec.initial].clone(),
        accepting: spec.accepting.iter().map(|&i| spec.states[i].clone()).collect(),
        alphabet: match &spec.input {
            InputAlphabet::Word(l) => l.clone(),
            InputAlphabet::Forest(sig) => sig.iter().map(|(n, r)| format!("{n}/{r}")).collect(),
        },
        stack_alphabet: stack,
        tree_alphabet: tree,
        tape_alphabet: tape,
        initial_storage: spec.initial_storage.map(|t| print_term_grouped(store, t)),
        frame_begin: spec.frame.begin.clone(),
        frame_end: spec.frame.end.clone(),
        expect: spec.declared.clone(),
        delta: spec
            .consuming
            .iter()
            .map(|i| DeltaDto {
                on: i.letter.clone(),
                from: i.from.iter().map(|&q| spec.states[q].clone()).collect(),
                rule: i.rule.as_ref().map(|r| print_rewrite(store, r)),
                goto: spec.states[i.to].clone(),
            })
            .collect(),
        epsilon: spec
            .epsilon
            .iter()
            .map(|i| EpsilonDto {
                from: spec.states[i.from].clone(),
                rule: i.rule.as_ref().map(|r| print_rewrite(store, r)),
                goto: spec.states[i.to].clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("automaton DTO serializes")
}

pub fn automaton_from_json(text: &str) -> Result<AutomatonSpec, ParseError> {
    let dto: AutomatonDto = serde_json::from_str(text)
        .map_err(|e| ParseError::new(e.line().max(1), e.column().max(1), e.to_string()))?;
    // Reassemble DSL text and reuse the DSL parser.
    let mut dsl = String::new();
    if let Some(n) = &dto.name {
        dsl.push_str(&format!("name {n}\n"));
    }
    dsl.push_str(&format!("storage {}\n", dto.storage));
    if dto.preload_input {
        dsl.push_str("preload-input\n");
    }
    dsl.push_str(&format!("states {}\n", dto.states.join(" ")));
    dsl.push_str(&format!("initial {}\n", dto.initial));
    dsl.push_str(&format!("accepting {}\n", dto.accepting.join(" ")));
    dsl.push_str(&format!("alphabet {}\n", dto.alphabet.join(" ")));
    if !dto.stack_alphabet.is_empty() {
        dsl.push_str(&format!("stack-alphabet {}\n", dto.stack_alphabet.join(" ")));
    }
    if !dto.tree_alphabet.is_empty() {
        dsl.push_str(&format!("tree-alphabet {}\n", dto.tree_alphabet.join(" ")));
    }
    if !dto.tape_alphabet.is_empty() {
        dsl.push_str(&format!("tape-alphabet {}\n", dto.tape_alphabet.join(" ")));
    }
    if let Some(t) = &dto.initial_storage {
        dsl.push_str(&format!("initial-storage {t}\n"));
    }
    if let Some(b) = &dto.frame_begin {
        dsl.push_str(&format!("frame-begin {b}\n"));
    }
    if let Some(e) = &dto.frame_end {
        dsl.push_str(&format!("frame-end {e}\n"));
    }
    if !dto.expect.is_empty() {
        dsl.push_str(&format!("expect {}\n", dto.expect.join(" ")));
    }
    for d in &dto.delta {
        let rule = d.rule.as_ref().map(|r| format!("rule {r} ")).unwrap_or_default();
        if d.from.len() == 1 {
            dsl.push_str(&format!("delta: on {} in {} {rule}goto {}\n", d.on, d.from[0], d.goto));
        } else {
            dsl.push_str(&format!(
                "delta: on {} children {} {rule}goto {}\n",
                d.on,
                d.from.join(","),
                d.goto
            ));
        }
    }
    for e in &dto.epsilon {
        let rule = e.rule.as_ref().map(|r| format!("rule {r} ")).unwrap_or_default();
        dsl.push_str(&format!("epsilon: in {} {rule}goto {}\n", e.from, e.goto));
    }
    parse_automaton(&dsl)
}

#[derive(Serialize, Deserialize)]
struct GrammarDto {
    start: String,
    rules: Vec<GrammarRuleDto>,
}

#[derive(Serialize, Deserialize)]
struct GrammarRuleDto {
    lhs: String,
    rhs: Vec<String>,
}

pub fn grammar_to_json(cfg: &Cfg) -> String {
    let mut start = "S".to_string();
    while cfg.variables.contains(&start) || cfg.terminals.contains(&start) {
        start.push('_');
    }
    let dto = GrammarDto {
        start: start.clone(),
        rules: cfg
            .rules
            .iter()
            .map(|r| GrammarRuleDto {
                lhs: match r.lhs {
                    None => start.clone(),
                    Some(v) => cfg.variables[v].clone(),
                },
                rhs: r
                    .rhs
                    .iter()
                    .map(|s| match s {
                        CfgSym::Start => start.clone(),
                        CfgSym::V(v) => cfg.variables[*v].clone(),
                        CfgSym::T(t) => cfg.terminals[*t].clone(),
                    })
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&dto).expect("grammar DTO serializes")
}

pub fn grammar_from_json(text: &str) -> Result<Cfg, ParseError> {
    let dto: GrammarDto = serde_json::from_str(text)
        .map_err(|e| ParseError::new(e.line().max(1), e.column().max(1), e.to_string()))?;
    let mut dsl = format!("start {};\n", dto.start);
    for rule in &dto.rules {
        dsl.push_str(&format!("{} -> {};\n", rule.lhs, rule.rhs.join(" ")));
    }
    parse_grammar(&dsl)
}
