//! Constructive conversions between the automata and type-system worlds:
//! Turing machines into tree automata, tree automata into typeof programs,
//! rudimentary-typeof programs back into tree automata, Fluent programs
//! into deterministic pushdown automata, the rule-stack emulation of tree
//! automata by pushdown automata, and the dyadic rank reduction.

use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::automata::{
    validate, AutomatonSpec, ConsumeItem, EpsItem, Frame, InputAlphabet, Rewrite, StorageKind,
    TapeRule,
};
use crate::term::{follows, Node, RewriteRule, SymbolId, TermId, TermStore, LEAF};
use crate::typesys::{
    classify_program, Expr, FunctionDef, LatticePointT, Mode, Namespace, PseudoExpr, Ret,
    TypeProgram,
};

#[derive(Debug, Error)]
pub enum ConvertError {
    #[error("conversion requires tape storage with preloaded input and no consuming items")]
    NotATuringMachine,
    #[error("tape initialization rules (`_ -> γ`) are not supported by the tree encoding")]
    InitRule,
    #[error("conversion requires an ε-only tree automaton with a rank-3 joiner")]
    NotATreeEncoding,
    #[error("input word letter `{0}` is not a tape symbol")]
    BadLetter(String),
    #[error("program is not rudimentary: a typeof clause chains {0} calls")]
    FullTypeof(usize),
    #[error("typeof forwarding must target an auxiliary function, `{0}` is primary")]
    ForwardToPrimary(String),
    #[error("typeof forwarding argument must be a plain type pattern")]
    ForwardShape,
    #[error("definitions must be unary, `{0}` takes {1} arguments")]
    NotUnary(String, usize),
    #[error("program sits above the Fluent point: {0}")]
    AboveFluent(String),
    #[error("pattern of `{0}` is not a monadic chain")]
    NotMonadic(String),
    #[error("conversion requires a stateless real-time deterministic tree automaton ({0})")]
    NotRestrictedTa(String),
    #[error("rule `{0}` has a non-variable child in its left-hand side")]
    LhsNotVariables(String),
    #[error(transparent)]
    Term(#[from] crate::term::TermError),
    #[error(transparent)]
    Automata(#[from] crate::automata::AutomataError),
    #[error(transparent)]
    Check(#[from] crate::typesys::CheckError),
}

/// Size bookkeeping for one conversion.
#[derive(Debug, Clone, Serialize)]
pub struct ConversionReport {
    pub conversion: String,
    pub source_point: String,
    pub target_point: String,
    pub states_in: usize,
    pub states_out: usize,
    pub items_in: usize,
    pub items_out: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stack_symbols: Option<usize>,
}

/// The unary type encoding of an integer: `Succ` applied `k` times to the
/// unit leaf.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnaryEncoding {
    pub k: usize,
}

impl UnaryEncoding {
    pub fn render(&self, store: &TermStore, succ: SymbolId) -> TermId {
        let mut t = LEAF;
        for _ in 0..self.k {
            t = store.app(succ, &[t]).expect("Succ is rank 1");
        }
        t
    }
}

// ---------------------------------------------------------------------------
// Turing machine → tree automaton
// ---------------------------------------------------------------------------

/// Encodes a tape around its head as the three branches of a joiner node:
/// left of the head (nearest cell first), the head cell, and the right
/// (nearest first). The leaf stands for the infinite blank padding.
pub fn encode_tape(
    store: &TermStore,
    joiner: SymbolId,
    left: &[SymbolId],
    center: SymbolId,
    right: &[SymbolId],
) -> TermId {
    let chain = |syms: &[SymbolId]| {
        let mut t = LEAF;
        for &s in syms.iter().rev() {
            t = store.app(s, &[t]).expect("cell symbols are rank 1");
        }
        t
    };
    let center_t = store.app(center, &[LEAF]).expect("cell symbols are rank 1");
    store.app(joiner, &[chain(left), center_t, chain(right)]).expect("joiner is rank 3")
}

fn tape_symbols_in_order(spec: &AutomatonSpec, blank: SymbolId) -> Vec<SymbolId> {
    // Blank first, matching the tape-alphabet convention.
    let mut out = vec![blank];
    for (name, rank) in spec.store.symbols() {
        if rank == 1 {
            let sym = spec.store.symbol(&name).unwrap();
            if sym != blank {
                out.push(sym);
            }
        }
    }
    out
}

/// Simulates a preloaded Turing machine by a stateful deep tree automaton
/// with ε-transitions only. The input word is embedded in the initial
/// storage; each tape transition expands into one tree rewrite per possible
/// neighbour cell (every tape symbol, plus the leaf for the blank padding).
pub fn tm_to_ta(
    tm: &AutomatonSpec,
    word: &[String],
) -> Result<(AutomatonSpec, ConversionReport), ConvertError> {
    let blank = match tm.storage {
        StorageKind::Tape { blank, .. } if tm.preload && tm.consuming.is_empty() => blank,
        _ => return Err(ConvertError::NotATuringMachine),
    };
    let store = tm.store.clone();
    let joiner = store.declare_fresh("∘", 3);
    let cells = tape_symbols_in_order(tm, blank);

    // Variable names chosen so emitted code reads left/right.
    let xl = store.var_term(store.var("xL"));
    let xr = store.var_term(store.var("xR"));

    let mut epsilon = Vec::new();
    for item in &tm.epsilon {
        let (read, write, right_move) = match item.rule {
            Some(Rewrite::Tape(TapeRule::Write { read, write, right })) => (read, write, right),
            Some(Rewrite::Tape(TapeRule::Init { .. })) => return Err(ConvertError::InitRule),
            _ => return Err(ConvertError::NotATuringMachine),
        };
        let center = |sym: SymbolId| store.app(sym, &[LEAF]).unwrap();
        // One rewrite per possible neighbour: the blank, the leaf standing
        // for the blank padding, then the remaining cell symbols.
        let mut variants: Vec<Option<SymbolId>> = vec![Some(blank), None];
        variants.extend(cells.iter().filter(|&&c| c != blank).map(|&c| Some(c)));
        for neighbour in variants {
            let (lhs, rhs) = if right_move {
                match neighbour {
                    Some(n) => (
                        store.app(joiner, &[xl, center(read), store.app(n, &[xr]).unwrap()]).unwrap(),
                        store.app(joiner, &[store.app(write, &[xl]).unwrap(), center(n), xr]).unwrap(),
                    ),
                    None => (
                        store.app(joiner, &[xl, center(read), LEAF]).unwrap(),
                        store
                            .app(joiner, &[store.app(write, &[xl]).unwrap(), center(blank), LEAF])
                            .unwrap(),
                    ),
                }
            } else {
                match neighbour {
                    Some(n) => (
                        store.app(joiner, &[store.app(n, &[xl]).unwrap(), center(read), xr]).unwrap(),
                        store.app(joiner, &[xl, center(n), store.app(write, &[xr]).unwrap()]).unwrap(),
                    ),
                    None => (
                        store.app(joiner, &[LEAF, center(read), xr]).unwrap(),
                        store
                            .app(joiner, &[LEAF, center(blank), store.app(write, &[xr]).unwrap()])
                            .unwrap(),
                    ),
                }
            };
            epsilon.push(EpsItem {
                from: item.from,
                rule: Some(Rewrite::Term(RewriteRule::new(&store, lhs, rhs)?)),
                to: item.to,
            });
        }
    }

    // Embed the input on the storage tree.
    let word_syms: Vec<SymbolId> = word
        .iter()
        .map(|l| store.symbol(l).ok_or_else(|| ConvertError::BadLetter(l.clone())))
        .collect::<Result<_, _>>()?;
    let initial_storage = match word_syms.split_first() {
        None => encode_tape(&store, joiner, &[], blank, &[]),
        Some((&first, rest)) => encode_tape(&store, joiner, &[], first, rest),
    };

    let ta = AutomatonSpec {
        name: tm.name.as_ref().map(|n| format!("{n}-ta")),
        store,
        states: tm.states.clone(),
        initial: tm.initial,
        accepting: tm.accepting.clone(),
        input: InputAlphabet::Word(vec![]),
        storage: StorageKind::Tree { pushdown: false },
        initial_storage: Some(initial_storage),
        preload: false,
        consuming: vec![],
        epsilon,
        frame: Frame::default(),
        declared: vec![],
    };
    let (source_point, _) = validate(tm)?;
    let (target_point, _) = validate(&ta)?;
    let report = ConversionReport {
        conversion: "tm-to-ta".into(),
        source_point: source_point.abbreviated(),
        target_point: target_point.abbreviated(),
        states_in: tm.states.len(),
        states_out: ta.states.len(),
        items_in: tm.epsilon.len(),
        items_out: ta.epsilon.len(),
        stack_symbols: None,
    };
    Ok((ta, report))
}

// ---------------------------------------------------------------------------
// Tree automaton → typeof program
// ---------------------------------------------------------------------------

/// Encodes an ε-only tree automaton as a program whose auxiliary functions
/// carry one overload per transition: `φ_q : τ -> typeof τ'.φ_q'`. Each
/// accepting state additionally gets terminating overloads
/// `φ_q : ∘(x1, γ(eps), x2) -> eps` for every cell symbol without an
/// outgoing transition. The expression embeds the input word as a grounded
/// joiner type driven through `φ_{q0}`.
pub fn ta_to_typeof_program(
    ta: &AutomatonSpec,
    word: &[String],
) -> Result<(TypeProgram, ConversionReport), ConvertError> {
    if !matches!(ta.storage, StorageKind::Tree { .. }) || !ta.consuming.is_empty() {
        return Err(ConvertError::NotATreeEncoding);
    }
    let store = ta.store.clone();
    let joiner = store
        .symbols()
        .iter()
        .find(|(_, r)| *r == 3)
        .and_then(|(n, _)| store.symbol(n))
        .ok_or(ConvertError::NotATreeEncoding)?;
    let cells: Vec<SymbolId> = {
        let mut out = Vec::new();
        for (name, rank) in store.symbols() {
            if rank == 1 {
                out.push(store.symbol(&name).unwrap());
            }
        }
        out
    };

    let mut program = TypeProgram::new(store.clone());
    program.name = ta.name.as_ref().map(|n| format!("{n}-typeof"));
    program.mode = Mode::OneType;

    let xl = store.var_term(store.var("xL"));
    let xr = store.var_term(store.var("xR"));

    // Terminating overloads first: accepting states halt on any head cell
    // that has no outgoing transition.
    for (q, state_name) in ta.states.iter().enumerate() {
        if !ta.accepting.contains(&q) {
            continue;
        }
        for &cell in &cells {
            let head = store.app(cell, &[LEAF])?;
            let covered = ta.epsilon.iter().any(|item| {
                item.from == q
                    && match &item.rule {
                        Some(Rewrite::Term(rule)) => match store.node(rule.single_lhs()) {
                            Node::App(sym, children) if sym == joiner => children[1] == head,
                            _ => false,
                        },
                        _ => false,
                    }
            });
            if !covered {
                program.defs.push(FunctionDef {
                    name: state_name.clone(),
                    namespace: Namespace::Auxiliary,
                    params: vec![store.app(joiner, &[xl, head, xr])?],
                    ret: Ret::Type(LEAF),
                });
            }
        }
    }

    for item in &ta.epsilon {
        let rule = match &item.rule {
            Some(Rewrite::Term(rule)) => rule,
            _ => return Err(ConvertError::NotATreeEncoding),
        };
        program.defs.push(FunctionDef {
            name: ta.states[item.from].clone(),
            namespace: Namespace::Auxiliary,
            params: vec![rule.single_lhs()],
            ret: Ret::Typeof(PseudoExpr::Call(
                ta.states[item.to].clone(),
                vec![PseudoExpr::Leaf(rule.rhs)],
            )),
        });
    }

    // Drive the word through the initial state.
    let blank_or_first = cells.first().copied().ok_or(ConvertError::NotATreeEncoding)?;
    let word_syms: Vec<SymbolId> = word
        .iter()
        .map(|l| store.symbol(l).ok_or_else(|| ConvertError::BadLetter(l.clone())))
        .collect::<Result<_, _>>()?;
    let tree = match word_syms.split_first() {
        None => encode_tape(&store, joiner, &[], blank_or_first, &[]),
        Some((&first, rest)) => encode_tape(&store, joiner, &[], first, rest),
    };
    program
        .exprs
        .push(Expr::Call(ta.states[ta.initial].clone(), vec![Expr::New(tree)]));

    program.validate()?;
    let (source_point, _) = validate(ta)?;
    let target_point = classify_program(&program)?;
    let report = ConversionReport {
        conversion: "ta-to-typeof-program".into(),
        source_point: source_point.abbreviated(),
        target_point: target_point.abbreviated(),
        states_in: ta.states.len(),
        states_out: 0,
        items_in: ta.epsilon.len(),
        items_out: program.defs.len(),
        stack_symbols: None,
    };
    Ok((program, report))
}

// ---------------------------------------------------------------------------
// Rudimentary typeof elimination
// ---------------------------------------------------------------------------

fn rudimentary_parts<'a>(
    program: &'a TypeProgram,
    def: &'a FunctionDef,
) -> Result<(TermId, TermId, Option<&'a str>), ConvertError> {
    if def.arity() != 1 {
        return Err(ConvertError::NotUnary(def.name.clone(), def.arity()));
    }
    match &def.ret {
        Ret::Type(t) => Ok((def.params[0], *t, None)),
        Ret::Typeof(p) => match p {
            PseudoExpr::Leaf(t) => Ok((def.params[0], *t, None)),
            PseudoExpr::Call(name, args) => {
                if p.call_count() > 1 {
                    return Err(ConvertError::FullTypeof(p.call_count()));
                }
                let target_is_aux = program
                    .defs
                    .iter()
                    .any(|d| &d.name == name && d.namespace == Namespace::Auxiliary);
                if !target_is_aux {
                    return Err(ConvertError::ForwardToPrimary(name.clone()));
                }
                match args.as_slice() {
                    [PseudoExpr::Leaf(t)] => Ok((def.params[0], *t, Some(name.as_str()))),
                    _ => Err(ConvertError::ForwardShape),
                }
            }
        },
    }
}

/// Eliminates rudimentary typeof by compiling the program into a stateful
/// tree automaton with ε-transitions: primary definitions become consuming
/// items, auxiliary ones ε-items, and forwarding moves into the state of
/// the target auxiliary function.
pub fn rudimentary_to_ta(
    program: &TypeProgram,
) -> Result<(AutomatonSpec, ConversionReport), ConvertError> {
    let store = program.store.clone();

    // States: q0 plus one per auxiliary name, in definition order.
    let mut states = vec!["q0".to_string()];
    for def in program.auxiliary() {
        let state = format!("q_{}", def.name);
        if !states.contains(&state) {
            states.push(state);
        }
    }
    let state_of = |name: &str| -> usize {
        states.iter().position(|s| s == &format!("q_{name}")).expect("state exists")
    };

    let mut letters: Vec<String> = Vec::new();
    for def in program.primary() {
        if !letters.contains(&def.name) {
            letters.push(def.name.clone());
        }
    }

    let mut consuming = Vec::new();
    let mut epsilon = Vec::new();
    for def in &program.defs {
        let (lhs, rhs, forward) = rudimentary_parts(program, def)?;
        let rule = Some(Rewrite::Term(RewriteRule::new(&store, lhs, rhs)?));
        let to = match forward {
            None => 0,
            Some(target) => state_of(target),
        };
        match def.namespace {
            Namespace::Primary => {
                consuming.push(ConsumeItem { letter: def.name.clone(), from: vec![0], rule, to })
            }
            Namespace::Auxiliary => {
                epsilon.push(EpsItem { from: state_of(&def.name), rule, to })
            }
        }
    }

    let states_out = states.len();
    let ta = AutomatonSpec {
        name: program.name.as_ref().map(|n| format!("{n}-ta")),
        store,
        states,
        initial: 0,
        accepting: [0].into(),
        input: InputAlphabet::Word(letters),
        storage: StorageKind::Tree { pushdown: false },
        initial_storage: None,
        preload: false,
        consuming,
        epsilon,
        frame: program.frame.clone(),
        declared: vec![],
    };
    let source_point = classify_program(program)?;
    let (target_point, _) = validate(&ta)?;
    let report = ConversionReport {
        conversion: "rudimentary-to-ta".into(),
        source_point: source_point.abbreviated(),
        target_point: target_point.abbreviated(),
        states_in: 0,
        states_out,
        items_in: program.defs.len(),
        items_out: ta.consuming.len() + ta.epsilon.len(),
        stack_symbols: None,
    };
    Ok((ta, report))
}

// ---------------------------------------------------------------------------
// Fluent → DPDA
// ---------------------------------------------------------------------------

/// A monadic pattern split into its symbol spine and tail.
enum ChainTail {
    Var,
    Ground,
}

fn monadic_chain(
    store: &TermStore,
    term: TermId,
    who: &str,
) -> Result<(Vec<SymbolId>, ChainTail), ConvertError> {
    let mut syms = Vec::new();
    let mut cur = term;
    loop {
        match store.node(cur) {
            Node::Leaf => return Ok((syms, ChainTail::Ground)),
            Node::Var(_) => return Ok((syms, ChainTail::Var)),
            Node::App(sym, children) => {
                if children.len() != 1 {
                    return Err(ConvertError::NotMonadic(who.to_string()));
                }
                syms.push(sym);
                cur = children[0];
            }
        }
    }
}

/// Compiles a Fluent program (monadic, deep patterns, rudimentary typeof)
/// into a deterministic pushdown automaton. The stack spells the type of
/// the consumed prefix over the type names, with a designated bottom marker
/// closing each grounded segment; a function that drops its type variable
/// pushes a fresh marker instead of emptying the stack.
pub fn fluent_to_dpda(
    program: &TypeProgram,
) -> Result<(AutomatonSpec, ConversionReport), ConvertError> {
    let source_point = classify_program(program)?;
    if !source_point.le(&LatticePointT::fluent()) {
        return Err(ConvertError::AboveFluent(source_point.abbreviated()));
    }
    let store = program.store.clone();
    let bottom = store.declare_fresh("bottom", 1);
    let x = store.var_term(store.var("x1"));
    let marker = store.app(bottom, &[x])?;

    let mut states = vec!["q0".to_string()];
    for def in program.auxiliary() {
        let state = format!("q_{}", def.name);
        if !states.contains(&state) {
            states.push(state);
        }
    }
    let state_of = |name: &str| -> usize {
        states.iter().position(|s| s == &format!("q_{name}")).expect("state exists")
    };

    let mut letters: Vec<String> = Vec::new();
    for def in program.primary() {
        if !letters.contains(&def.name) {
            letters.push(def.name.clone());
        }
    }

    let mut consuming = Vec::new();
    let mut epsilon = Vec::new();
    for def in &program.defs {
        let (lhs, rhs, forward) = rudimentary_parts(program, def)?;
        let (lhs_spine, lhs_tail) = monadic_chain(&store, lhs, &def.name)?;
        let (rhs_spine, rhs_tail) = monadic_chain(&store, rhs, &def.name)?;
        // The three stack-rewrite cases, by the tails of the two chains.
        let (rule_lhs, rule_rhs) = match (lhs_tail, rhs_tail) {
            (ChainTail::Var, ChainTail::Var) => {
                (store.chain(&lhs_spine, x)?, store.chain(&rhs_spine, x)?)
            }
            (ChainTail::Ground, ChainTail::Ground) => {
                (store.chain(&lhs_spine, marker)?, store.chain(&rhs_spine, marker)?)
            }
            (ChainTail::Var, ChainTail::Ground) => {
                // Empty the unbounded variable part by pushing a new marker.
                (store.chain(&lhs_spine, x)?, store.chain(&rhs_spine, store.app(bottom, &[x])?)?)
            }
            (ChainTail::Ground, ChainTail::Var) => {
                unreachable!("valid rules cannot invent variables")
            }
        };
        let rule = Some(Rewrite::Term(RewriteRule::new(&store, rule_lhs, rule_rhs)?));
        let to = match forward {
            None => 0,
            Some(target) => state_of(target),
        };
        match def.namespace {
            Namespace::Primary => {
                consuming.push(ConsumeItem { letter: def.name.clone(), from: vec![0], rule, to })
            }
            Namespace::Auxiliary => {
                epsilon.push(EpsItem { from: state_of(&def.name), rule, to })
            }
        }
    }

    let states_out = states.len();
    let dpda = AutomatonSpec {
        name: program.name.as_ref().map(|n| format!("{n}-dpda")),
        store: store.clone(),
        states,
        initial: 0,
        accepting: [0].into(),
        input: InputAlphabet::Word(letters),
        storage: StorageKind::Tree { pushdown: true },
        initial_storage: Some(store.app(bottom, &[LEAF])?),
        preload: false,
        consuming,
        epsilon,
        frame: program.frame.clone(),
        declared: vec!["deterministic".into()],
    };
    let (target_point, _) = validate(&dpda)?;
    let report = ConversionReport {
        conversion: "fluent-to-dpda".into(),
        source_point: source_point.abbreviated(),
        target_point: target_point.abbreviated(),
        states_in: 0,
        states_out,
        items_in: program.defs.len(),
        items_out: dpda.consuming.len() + dpda.epsilon.len(),
        stack_symbols: Some(store.symbols().len()),
    };
    Ok((dpda, report))
}

/// Reads the type spelled by a DPDA stack produced by [`fluent_to_dpda`]:
/// the symbols above the first bottom marker.
pub fn decode_fluent_stack(store: &TermStore, bottom: SymbolId, stack: TermId) -> Option<TermId> {
    let mut spine = Vec::new();
    let mut cur = stack;
    loop {
        match store.node(cur) {
            Node::App(sym, children) if sym == bottom => {
                let _ = children;
                return store.chain(&spine, LEAF).ok();
            }
            Node::App(sym, children) => {
                spine.push(sym);
                cur = children[0];
            }
            _ => return None,
        }
    }
}

// ---------------------------------------------------------------------------
// Tree automaton → DPDA (rule-stack encoding)
// ---------------------------------------------------------------------------

/// Output of [`ta_to_dpda`]: the automaton plus the dictionary mapping its
/// stack symbols back to the rewrite rules of the source automaton.
pub struct RuleStackDpda {
    pub dpda: AutomatonSpec,
    /// Stack symbol (in the DPDA's signature) for each encoded rule, in
    /// the order they were introduced.
    pub stack_rules: Vec<(SymbolId, RewriteRule)>,
    pub report: ConversionReport,
}

impl RuleStackDpda {
    /// Folds a stack bottom-up through its rules, reproducing the source
    /// automaton's storage tree. `None` if some rule fails to apply.
    pub fn decode_stack(&self, ta_store: &TermStore, stack: TermId) -> Option<TermId> {
        let mut symbols = Vec::new();
        let mut cur = stack;
        let dpda_store = &self.dpda.store;
        loop {
            match dpda_store.node(cur) {
                Node::Leaf => break,
                Node::App(sym, children) => {
                    symbols.push(sym);
                    cur = children[0];
                }
                Node::Var(_) => return None,
            }
        }
        let mut tree = LEAF;
        for sym in symbols.into_iter().rev() {
            let rule = &self.stack_rules.iter().find(|(s, _)| *s == sym)?.1;
            tree = rule.apply(ta_store, tree)?;
        }
        Some(tree)
    }
}

/// What the tree under a stack looks like at its root.
#[derive(Clone, Copy, PartialEq, Eq)]
enum RootShape {
    Leaf,
    Sym(SymbolId),
}

fn rhs_root(store: &TermStore, rule: &RewriteRule) -> RootShape {
    match store.node(rule.rhs) {
        Node::Leaf => RootShape::Leaf,
        Node::App(sym, _) => RootShape::Sym(sym),
        Node::Var(_) => unreachable!("stack rules are accumulating"),
    }
}

fn lhs_matches_root(store: &TermStore, lhs: TermId, root: RootShape) -> bool {
    match store.node(lhs) {
        Node::Var(_) => true,
        Node::Leaf => root == RootShape::Leaf,
        Node::App(sym, _) => root == RootShape::Sym(sym),
    }
}

/// Emulates a stateless real-time deterministic tree automaton by a DPDA
/// whose stack symbols are the automaton's accumulating rewrite rules:
/// a tree is encoded as the sequence of rules that built it. Accumulating
/// rules push; extracting rules pop down the stack through intermediate
/// states until the extracted child is recovered.
///
/// Restriction: every rule's left-hand side is a bare variable, the leaf,
/// or one symbol applied to distinct variables, so applicability is decided
/// by the root alone.
pub fn ta_to_dpda(ta: &AutomatonSpec) -> Result<RuleStackDpda, ConvertError> {
    // Preconditions: stateless, real-time, deterministic, word input.
    let (source_point, _) = validate(ta)?;
    if !matches!(ta.storage, StorageKind::Tree { .. }) {
        return Err(ConvertError::NotRestrictedTa("storage is not a tree".into()));
    }
    if ta.states.len() != 1 || !ta.accepting.contains(&ta.initial) {
        return Err(ConvertError::NotRestrictedTa("automaton is not stateless".into()));
    }
    if !ta.epsilon.is_empty() {
        return Err(ConvertError::NotRestrictedTa("automaton is not real-time".into()));
    }
    if !source_point.is_deterministic() {
        return Err(ConvertError::NotRestrictedTa("automaton is not deterministic".into()));
    }
    let letters = match &ta.input {
        InputAlphabet::Word(l) => l.clone(),
        InputAlphabet::Forest(_) => {
            return Err(ConvertError::NotRestrictedTa("input is a forest".into()))
        }
    };
    let ta_store = &ta.store;

    // Collect item rules, checking the left-hand restriction.
    let mut item_rules: Vec<(String, RewriteRule)> = Vec::new();
    for item in &ta.consuming {
        let rule = match &item.rule {
            Some(Rewrite::Term(rule)) => rule.canonicalize(ta_store),
            None => RewriteRule::new(
                ta_store,
                ta_store.var_term(ta_store.var("x1")),
                ta_store.var_term(ta_store.var("x1")),
            )?,
            Some(Rewrite::Tape(_)) => {
                return Err(ConvertError::NotRestrictedTa("tape rewrite".into()))
            }
        };
        match ta_store.node(rule.single_lhs()) {
            Node::Var(_) | Node::Leaf => {}
            Node::App(_, children) => {
                for &c in &children {
                    if !matches!(ta_store.node(c), Node::Var(_)) {
                        return Err(ConvertError::LhsNotVariables(rule.display(ta_store)));
                    }
                }
            }
        }
        item_rules.push((item.letter.clone(), rule));
    }

    // The stack-symbol universe: accumulating item rules, closed under
    // child extraction (τ→τ' spawns τ→τ'[k] for non-variable children).
    // Closure terminates because extracted right-hand sides shrink.
    let mut rules: Vec<RewriteRule> = Vec::new();
    let mut queue: Vec<RewriteRule> = item_rules
        .iter()
        .filter(|(_, r)| r.is_accumulating(ta_store) && !matches!(ta_store.node(r.rhs), Node::Var(_)))
        .map(|(_, r)| r.clone())
        .collect();
    while let Some(rule) = queue.pop() {
        if rules.contains(&rule) {
            continue;
        }
        if let Node::App(_, children) = ta_store.node(rule.rhs) {
            for &child in &children {
                if !matches!(ta_store.node(child), Node::Var(_)) {
                    queue.push(RewriteRule { lhs: rule.lhs.clone(), rhs: child });
                }
            }
        }
        rules.push(rule);
    }
    rules.sort_by_key(|r| (r.single_lhs(), r.rhs));

    // DPDA store: one rank-1 symbol per stack rule.
    let dpda_store = Arc::new(TermStore::new());
    let mut stack_rules: Vec<(SymbolId, RewriteRule)> = Vec::new();
    for (i, rule) in rules.iter().enumerate() {
        let sym = dpda_store.declare(&format!("r{i}"), 1)?;
        stack_rules.push((sym, rule.clone()));
    }
    let sym_of = |rule: &RewriteRule| -> SymbolId {
        stack_rules.iter().find(|(_, r)| r == rule).expect("rule interned").0
    };

    // States: the ready state plus one extraction state per child index.
    let max_rank = ta_store.max_rank().max(1);
    let mut states = vec!["q0".to_string()];
    for k in 1..=max_rank {
        states.push(format!("q0_x{k}"));
    }
    let extract_state = |k: usize| k; // states[k] = q0_x{k}

    let x = dpda_store.var_term(dpda_store.var("x1"));
    // Stack micro-operations as monadic rewrites.
    let keep_top = |sym: SymbolId| -> RewriteRule {
        let top = dpda_store.app(sym, &[x]).unwrap();
        RewriteRule::new(&dpda_store, top, top).unwrap()
    };
    let keep_empty = || RewriteRule::new(&dpda_store, LEAF, LEAF).unwrap();
    let push_on = |top: Option<SymbolId>, pushed: SymbolId| -> RewriteRule {
        match top {
            Some(t) => {
                let below = dpda_store.app(t, &[x]).unwrap();
                RewriteRule::new(&dpda_store, below, dpda_store.app(pushed, &[below]).unwrap())
                    .unwrap()
            }
            None => {
                RewriteRule::new(&dpda_store, LEAF, dpda_store.app(pushed, &[LEAF]).unwrap())
                    .unwrap()
            }
        }
    };
    let replace_top = |old: SymbolId, new: SymbolId| -> RewriteRule {
        RewriteRule::new(
            &dpda_store,
            dpda_store.app(old, &[x]).unwrap(),
            dpda_store.app(new, &[x]).unwrap(),
        )
        .unwrap()
    };
    let pop_top = |old: SymbolId| -> RewriteRule {
        RewriteRule::new(&dpda_store, dpda_store.app(old, &[x]).unwrap(), x).unwrap()
    };

    // Every stack configuration the guards can see: empty, or one of the
    // rule symbols on top.
    let tops: Vec<(Option<SymbolId>, RootShape)> = std::iter::once((None, RootShape::Leaf))
        .chain(stack_rules.iter().map(|(sym, rule)| (Some(*sym), rhs_root(ta_store, rule))))
        .collect();

    let mut consuming: Vec<ConsumeItem> = Vec::new();
    let mut epsilon: Vec<EpsItem> = Vec::new();

    for (letter, rule) in &item_rules {
        if rule.is_extracting(ta_store) {
            // γ(x1..xu) -> xk: enter the extraction state for k, keeping
            // the stack; the handlers below walk it down.
            let k = match ta_store.node(rule.rhs) {
                Node::Var(v) => match ta_store.node(rule.single_lhs()) {
                    Node::App(_, children) => {
                        1 + children
                            .iter()
                            .position(|&c| ta_store.node(c) == Node::Var(v))
                            .expect("extracted variable occurs in the lhs")
                    }
                    _ => unreachable!("extracting rules have compound lhs"),
                },
                _ => unreachable!(),
            };
            for (top, root) in &tops {
                if top.is_none() {
                    continue; // the leaf has no children to extract
                }
                if lhs_matches_root(ta_store, rule.single_lhs(), *root) {
                    consuming.push(ConsumeItem {
                        letter: letter.clone(),
                        from: vec![0],
                        rule: Some(Rewrite::Term(keep_top(top.unwrap()))),
                        to: extract_state(k),
                    });
                }
            }
        } else if matches!(ta_store.node(rule.rhs), Node::Var(_)) {
            // The no-op x -> x: consume and keep the stack.
            for (top, _) in &tops {
                let keep = match top {
                    Some(t) => keep_top(*t),
                    None => keep_empty(),
                };
                consuming.push(ConsumeItem {
                    letter: letter.clone(),
                    from: vec![0],
                    rule: Some(Rewrite::Term(keep)),
                    to: 0,
                });
            }
        } else {
            // Accumulating: push the rule wherever it follows the top.
            let pushed = sym_of(rule);
            for (top, root) in &tops {
                let applicable = match top {
                    None => lhs_matches_root(ta_store, rule.single_lhs(), RootShape::Leaf),
                    Some(t) => {
                        let top_rule = &stack_rules.iter().find(|(s, _)| s == t).unwrap().1;
                        let _ = root;
                        follows(ta_store, top_rule, rule)?
                    }
                };
                if applicable {
                    consuming.push(ConsumeItem {
                        letter: letter.clone(),
                        from: vec![0],
                        rule: Some(Rewrite::Term(push_on(*top, pushed))),
                        to: 0,
                    });
                }
            }
        }
    }

    // Extraction handlers: in state ⟨k⟩ with rule τ→τ' on top, recover the
    // k-th child of the encoded tree.
    for k in 1..=max_rank {
        for (sym, rule) in &stack_rules {
            let children = match ta_store.node(rule.rhs) {
                Node::App(_, children) if children.len() >= k => children,
                _ => continue,
            };
            let child = children[k - 1];
            let (stack_rule, to) = match ta_store.node(child) {
                // Non-variable child: the combined rule τ→τ'[k] replaces
                // the top.
                Node::App(..) | Node::Leaf => {
                    let combined = RewriteRule { lhs: rule.lhs.clone(), rhs: child };
                    (replace_top(*sym, sym_of(&combined)), 0)
                }
                Node::Var(v) => match ta_store.node(rule.single_lhs()) {
                    // The rule's input is the child itself: pop.
                    Node::Var(_) => (pop_top(*sym), 0),
                    // Pop and continue extracting child i underneath.
                    Node::App(_, lhs_children) => {
                        let i = 1 + lhs_children
                            .iter()
                            .position(|&c| ta_store.node(c) == Node::Var(v))
                            .expect("rule variables come from the lhs");
                        (pop_top(*sym), extract_state(i))
                    }
                    Node::Leaf => unreachable!("ground lhs cannot bind variables"),
                },
            };
            epsilon.push(EpsItem {
                from: extract_state(k),
                rule: Some(Rewrite::Term(stack_rule)),
                to,
            });
        }
    }

    let dpda = AutomatonSpec {
        name: ta.name.as_ref().map(|n| format!("{n}-dpda")),
        store: dpda_store,
        states,
        initial: 0,
        accepting: [0].into(),
        input: InputAlphabet::Word(letters),
        storage: StorageKind::Tree { pushdown: true },
        initial_storage: None,
        preload: false,
        consuming,
        epsilon,
        frame: ta.frame.clone(),
        declared: vec!["deterministic".into()],
    };
    let (target_point, diags) = validate(&dpda)?;
    if !target_point.is_deterministic() || !diags.is_empty() {
        return Err(ConvertError::NotRestrictedTa(
            "emulation produced a non-deterministic pushdown automaton".into(),
        ));
    }
    let report = ConversionReport {
        conversion: "ta-to-dpda".into(),
        source_point: source_point.abbreviated(),
        target_point: target_point.abbreviated(),
        states_in: ta.states.len(),
        states_out: dpda.states.len(),
        items_in: ta.consuming.len(),
        items_out: dpda.consuming.len() + dpda.epsilon.len(),
        stack_symbols: Some(stack_rules.len()),
    };
    Ok(RuleStackDpda { dpda, stack_rules, report })
}

// ---------------------------------------------------------------------------
// Dyadic rank reduction
// ---------------------------------------------------------------------------

/// Replaces every rank-k symbol (k > 2) by a chain of k−1 rank-2 symbols
/// and one rank-1 symbol, uniformly across rules and the initial storage.
/// The recognized language is unchanged; dyadic input is returned as-is.
pub fn polyadic_to_dyadic(
    ta: &AutomatonSpec,
) -> Result<(AutomatonSpec, ConversionReport), ConvertError> {
    let (source_point, _) = validate(ta)?;
    if ta.store.max_rank() <= 2 {
        let report = ConversionReport {
            conversion: "polyadic-to-dyadic".into(),
            source_point: source_point.abbreviated(),
            target_point: source_point.abbreviated(),
            states_in: ta.states.len(),
            states_out: ta.states.len(),
            items_in: ta.consuming.len() + ta.epsilon.len(),
            items_out: ta.consuming.len() + ta.epsilon.len(),
            stack_symbols: None,
        };
        return Ok((ta.clone(), report));
    }

    let out_store = Arc::new(TermStore::new());
    // Symbol mapping: rank ≤ 2 keeps its name, higher ranks become chains.
    enum SymMap {
        Keep(SymbolId),
        Chain(Vec<SymbolId>),
    }
    let mut mapping: Vec<SymMap> = Vec::new();
    for (name, rank) in ta.store.symbols() {
        if rank <= 2 {
            mapping.push(SymMap::Keep(out_store.declare(&name, rank)?));
        } else {
            let mut chain = Vec::with_capacity(rank);
            for i in 1..=rank {
                let sym_rank = if i == rank { 1 } else { 2 };
                chain.push(out_store.declare(&format!("{name}_{i}"), sym_rank)?);
            }
            mapping.push(SymMap::Chain(chain));
        }
    }

    fn map_term(
        src: &TermStore,
        dst: &TermStore,
        mapping: &[SymMap],
        term: TermId,
    ) -> Result<TermId, ConvertError> {
        Ok(match src.node(term) {
            Node::Leaf => LEAF,
            Node::Var(v) => dst.var_term(dst.var(&src.var_name(v))),
            Node::App(sym, children) => {
                let mapped: Vec<TermId> = children
                    .iter()
                    .map(|&c| map_term(src, dst, mapping, c))
                    .collect::<Result<_, _>>()?;
                match &mapping[sym.0 as usize] {
                    SymMap::Keep(s) => dst.app(*s, &mapped)?,
                    SymMap::Chain(chain) => {
                        // γ(t1..tk) ↦ γ1(t1, γ2(t2, … γk-1(tk-1, γk(tk))…))
                        let k = mapped.len();
                        let mut acc = dst.app(chain[k - 1], &[mapped[k - 1]])?;
                        for i in (0..k - 1).rev() {
                            acc = dst.app(chain[i], &[mapped[i], acc])?;
                        }
                        acc
                    }
                }
            }
        })
    }

    let map_rewrite = |rw: &Option<Rewrite>| -> Result<Option<Rewrite>, ConvertError> {
        Ok(match rw {
            None => None,
            Some(Rewrite::Tape(_)) => {
                return Err(ConvertError::NotRestrictedTa("tape rewrite".into()))
            }
            Some(Rewrite::Term(rule)) => {
                let lhs: Vec<TermId> = rule
                    .lhs
                    .iter()
                    .map(|&p| map_term(&ta.store, &out_store, &mapping, p))
                    .collect::<Result<_, _>>()?;
                let rhs = map_term(&ta.store, &out_store, &mapping, rule.rhs)?;
                Some(Rewrite::Term(RewriteRule::new_multi(&out_store, lhs, rhs)?))
            }
        })
    };

    let mut out = AutomatonSpec {
        name: ta.name.as_ref().map(|n| format!("{n}-dyadic")),
        store: out_store.clone(),
        states: ta.states.clone(),
        initial: ta.initial,
        accepting: ta.accepting.clone(),
        input: ta.input.clone(),
        storage: ta.storage.clone(),
        initial_storage: match ta.initial_storage {
            None => None,
            Some(t) => Some(map_term(&ta.store, &out_store, &mapping, t)?),
        },
        preload: ta.preload,
        consuming: Vec::new(),
        epsilon: Vec::new(),
        frame: ta.frame.clone(),
        declared: vec![],
    };
    for item in &ta.consuming {
        out.consuming.push(ConsumeItem {
            letter: item.letter.clone(),
            from: item.from.clone(),
            rule: map_rewrite(&item.rule)?,
            to: item.to,
        });
    }
    for item in &ta.epsilon {
        out.epsilon.push(EpsItem { from: item.from, rule: map_rewrite(&item.rule)?, to: item.to });
    }
    let (target_point, _) = validate(&out)?;
    let report = ConversionReport {
        conversion: "polyadic-to-dyadic".into(),
        source_point: source_point.abbreviated(),
        target_point: target_point.abbreviated(),
        states_in: ta.states.len(),
        states_out: out.states.len(),
        items_in: ta.consuming.len() + ta.epsilon.len(),
        items_out: out.consuming.len() + out.epsilon.len(),
        stack_symbols: None,
    };
    Ok((out, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{run, RunOptions, RunOutcome};
    use crate::typesys::{typecheck, CheckOptions, CheckResult};

    fn word(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    /// A one-transition machine: ⟨q0, a -> _b+, q1⟩ over tape {_b, a, b}.
    fn mini_tm() -> AutomatonSpec {
        crate::parse::parse_automaton(
            "\
storage tape
preload-input
states q0 q1
initial q0
accepting q1
alphabet a b
tape-alphabet _b a b
epsilon: in q0 rule a -> _b+ goto q1
",
        )
        .unwrap()
    }

    #[test]
    fn tm_transition_expands_to_neighbour_cases() {
        let tm = mini_tm();
        let (ta, report) = tm_to_ta(&tm, &word("ab")).unwrap();
        // One rule per tape symbol plus the leaf case.
        assert_eq!(ta.epsilon.len(), 4);
        assert_eq!(report.items_out, 4);
        let store = &ta.store;
        let rendered: Vec<String> = ta
            .epsilon
            .iter()
            .map(|item| match &item.rule {
                Some(Rewrite::Term(rule)) => rule.display(store),
                _ => panic!(),
            })
            .collect();
        // Blank neighbour, leaf padding, then the other cells in order.
        assert_eq!(rendered[0], "∘(xL,a,_b(xR)) -> ∘(_b(xL),_b,xR)");
        assert_eq!(rendered[1], "∘(xL,a,eps) -> ∘(_b(xL),_b,eps)");
        assert_eq!(rendered[2], "∘(xL,a,a(xR)) -> ∘(_b(xL),a,xR)");
        assert_eq!(rendered[3], "∘(xL,a,b(xR)) -> ∘(_b(xL),b,xR)");
    }

    #[test]
    fn tape_encoding_example() {
        // Tape ⋯♭ b [a] a b b ♭⋯ → ∘(b(eps), a(eps), a(b(b(eps)))).
        let store = TermStore::new();
        let b = store.declare("b", 1).unwrap();
        let a = store.declare("a", 1).unwrap();
        let joiner = store.declare("∘", 3).unwrap();
        let t = encode_tape(&store, joiner, &[b], a, &[a, b, b]);
        assert_eq!(store.display(t), "∘(b,a,a b b)");
    }

    #[test]
    fn mini_tm_pipeline_agrees() {
        let tm = mini_tm();
        let opts = RunOptions::default();
        // The machine erases one `a` and halts: accepts words starting a…
        for w in ["a", "ab", "b", ""] {
            let w = word(w);
            let direct = run(&tm, &w, &opts).unwrap();
            let (ta, _) = tm_to_ta(&tm, &w).unwrap();
            let via_ta = run(&ta, &[], &opts).unwrap();
            assert_eq!(direct.accepted(), via_ta.accepted(), "word {w:?}");
            let (program, _) = ta_to_typeof_program(&ta, &w).unwrap();
            let checked =
                typecheck(&program, &program.exprs[0], program.mode, &CheckOptions::default());
            assert_eq!(direct.accepted(), checked.is_typed(), "word {w:?}");
        }
    }

    #[test]
    fn rudimentary_round_trip_on_forwarding_chain() {
        // σ forwards through two auxiliaries before returning.
        let program = crate::parse::parse_program(
            "\
type G/1
fn s : eps -> typeof f1(G(eps))
aux f1 : G(x1) -> typeof f2(G(G(x1)))
aux f2 : x1 -> x1
",
        )
        .unwrap();
        let (ta, report) = rudimentary_to_ta(&program).unwrap();
        assert_eq!(report.states_out, 3); // q0, q_f1, q_f2
        let opts = RunOptions::default();
        // Trace: consuming s moves to q_f1, ε to q_f2, ε back to q0.
        let runner = crate::automata::Runner::new(&ta);
        let (outcome, trace) = runner.run_traced(&word("s"), &opts).unwrap();
        assert_eq!(outcome, RunOutcome::Accept);
        let states: Vec<usize> = trace.iter().map(|id| id.state).collect();
        assert_eq!(states, vec![0, 1, 2, 0]);

        // Membership agreement on all short words.
        let copts = CheckOptions::default();
        for w in crate::automata::words_up_to(&ta.word_alphabet(), 3) {
            let lhs = crate::typesys::word_membership(&program, &w, &copts).is_typed();
            let rhs = crate::automata::membership(&ta, &w, &opts).unwrap().accepted();
            assert_eq!(lhs, rhs, "word {w:?}");
        }
    }

    #[test]
    fn trivial_program_becomes_single_state_ta() {
        let program = crate::parse::parse_program("type G/1\nfn s : eps -> G(eps)\n").unwrap();
        let (ta, _) = rudimentary_to_ta(&program).unwrap();
        assert_eq!(ta.states.len(), 1);
        assert_eq!(ta.consuming.len(), 1);
        assert!(ta.epsilon.is_empty());
    }

    #[test]
    fn fluent_rewrite_cases() {
        let program = crate::parse::parse_program(
            "\
type Empty/1
type Stack/1
fn a : Empty(eps) -> Stack(eps)
fn b : Empty(x1) -> Stack(eps)
",
        )
        .unwrap();
        let (dpda, _) = fluent_to_dpda(&program).unwrap();
        let store = &dpda.store;
        let rules: Vec<String> = dpda
            .consuming
            .iter()
            .map(|i| match &i.rule {
                Some(Rewrite::Term(rule)) => rule.display(store),
                _ => panic!(),
            })
            .collect();
        // Grounded-to-grounded reuses the marker; variable-dropping pushes
        // a fresh one.
        assert_eq!(rules[0], "Empty bottom x1 -> Stack bottom x1");
        assert_eq!(rules[1], "Empty(x1) -> Stack bottom x1");
    }

    #[test]
    fn fluent_rejects_full_typeof() {
        let program = crate::parse::parse_program(
            "\
type A/1
fn a : eps -> A(eps)
fn s : A(x1) -> typeof f(g(x1))
aux f : x1 -> x1
aux g : x1 -> A(x1)
",
        )
        .unwrap();
        assert!(matches!(fluent_to_dpda(&program), Err(ConvertError::AboveFluent(_))));
    }

    /// Stateless counter TA: a pushes, b pops, end applies only on the leaf.
    fn counter_ta() -> AutomatonSpec {
        crate::parse::parse_automaton(
            "\
name counter
storage pushdown
states q0
initial q0
accepting q0
alphabet a b end
stack-alphabet S
delta: on a in q0 rule x1 -> S(x1) goto q0
delta: on b in q0 rule S(x1) -> x1 goto q0
delta: on end in q0 rule eps -> eps goto q0
",
        )
        .unwrap()
    }

    #[test]
    fn rule_stack_emulation_agrees_with_counter() {
        let ta = counter_ta();
        let out = ta_to_dpda(&ta).unwrap();
        let opts = RunOptions::default();
        for w in crate::automata::words_up_to(&ta.word_alphabet(), 6) {
            let direct = run(&ta, &w, &opts).unwrap().accepted();
            let emulated = run(&out.dpda, &w, &opts).unwrap().accepted();
            assert_eq!(direct, emulated, "word {w:?}");
        }
    }

    #[test]
    fn extraction_replaces_top_with_combined_rule() {
        // p: x -> P(G(x), x); l extracts child 1, r extracts child 2.
        let ta = crate::parse::parse_automaton(
            "\
storage tree
states q0
initial q0
accepting q0
alphabet p l r
tree-alphabet P/2 G/1
delta: on p in q0 rule x1 -> P(G(x1),x1) goto q0
delta: on l in q0 rule P(x1,x2) -> x1 goto q0
delta: on r in q0 rule P(x1,x2) -> x2 goto q0
",
        )
        .unwrap();
        let out = ta_to_dpda(&ta).unwrap();
        // The closure introduced x -> G(x) as a combined extraction rule.
        assert!(out
            .stack_rules
            .iter()
            .any(|(_, r)| r.display(&ta.store) == "x1 -> G(x1)"));
        let opts = RunOptions::default();
        for w in crate::automata::words_up_to(&ta.word_alphabet(), 5) {
            let direct = run(&ta, &w, &opts).unwrap().accepted();
            let emulated = run(&out.dpda, &w, &opts).unwrap().accepted();
            assert_eq!(direct, emulated, "word {w:?}");
        }
    }

    #[test]
    fn dyadic_reduction_maps_joiners() {
        let store = TermStore::new();
        let a = store.declare("a", 1).unwrap();
        let b = store.declare("b", 1).unwrap();
        let c = store.declare("c", 1).unwrap();
        let joiner = store.declare("∘", 3).unwrap();
        let spec = AutomatonSpec {
            name: None,
            store: Arc::new(store),
            states: vec!["q0".into()],
            initial: 0,
            accepting: [0].into(),
            input: InputAlphabet::Word(vec![]),
            storage: StorageKind::Tree { pushdown: false },
            initial_storage: None,
            preload: false,
            consuming: vec![],
            epsilon: vec![],
            frame: Frame::default(),
            declared: vec![],
        };
        let store = spec.store.clone();
        let ae = store.app(a, &[LEAF]).unwrap();
        let be = store.app(b, &[LEAF]).unwrap();
        let ce = store.app(c, &[LEAF]).unwrap();
        let mut spec = spec;
        spec.initial_storage = Some(store.app(joiner, &[ae, be, ce]).unwrap());
        let (out, _) = polyadic_to_dyadic(&spec).unwrap();
        let rendered = out.store.display(out.initial_storage.unwrap());
        assert_eq!(rendered, "∘_1(a,∘_2(b,∘_3 c))");
        assert_eq!(out.store.max_rank(), 2);

        // Identity on a dyadic spec.
        let (again, _) = polyadic_to_dyadic(&out).unwrap();
        assert_eq!(
            again.store.display(again.initial_storage.unwrap()),
            rendered
        );
    }

    #[test]
    fn noop_items_consume_anywhere() {
        let ta = crate::parse::parse_automaton(
            "\
storage tree
states q0
initial q0
accepting q0
alphabet a n
tree-alphabet S/1
delta: on a in q0 rule x1 -> S(x1) goto q0
delta: on n in q0 rule x1 -> x1 goto q0
",
        )
        .unwrap();
        let out = ta_to_dpda(&ta).unwrap();
        let opts = RunOptions::default();
        for w in crate::automata::words_up_to(&ta.word_alphabet(), 5) {
            let direct = run(&ta, &w, &opts).unwrap().accepted();
            let emulated = run(&out.dpda, &w, &opts).unwrap().accepted();
            assert_eq!(direct, emulated, "word {w:?}");
        }

        // Two universally applicable rules on one letter do conflict.
        let ta = crate::parse::parse_automaton(
            "\
storage tree
states q0
initial q0
accepting q0
alphabet a
tree-alphabet S/1
delta: on a in q0 rule x1 -> S(x1) goto q0
delta: on a in q0 rule x1 -> x1 goto q0
",
        )
        .unwrap();
        assert!(ta_to_dpda(&ta).is_err());
    }

    #[test]
    fn unary_encoding_depth() {
        let store = TermStore::new();
        let succ = store.declare("Succ", 1).unwrap();
        assert_eq!(UnaryEncoding { k: 0 }.render(&store, succ), LEAF);
        let u3 = UnaryEncoding { k: 3 }.render(&store, succ);
        assert_eq!(store.depth(u3), 3);
        assert_eq!(
            u3,
            store
                .app(succ, &[store.app(succ, &[store.app(succ, &[LEAF]).unwrap()]).unwrap()])
                .unwrap()
        );
    }

    #[test]
    fn typecheck_result_variants_exercised() {
        // Plumbing check: the typeof program rejects a bad word with an
        // ill-typed position rather than an error type.
        let tm = mini_tm();
        let (ta, _) = tm_to_ta(&tm, &word("b")).unwrap();
        let (program, _) = ta_to_typeof_program(&ta, &word("b")).unwrap();
        let checked =
            typecheck(&program, &program.exprs[0], program.mode, &CheckOptions::default());
        assert!(matches!(checked, CheckResult::IllTyped { .. }));
    }
}
