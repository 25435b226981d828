//! Finite-control automata with a choice of auxiliary storage: none, a
//! pushdown, a tree, or a tape. One simulator covers DFSAs, (D)PDAs, tree
//! automata and Turing machines; runs are breadth-first over instantaneous
//! descriptions so non-deterministic specs work too.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::term::{Node, RewriteRule, SymbolId, TermId, TermStore};

#[derive(Debug, Error)]
pub enum AutomataError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("pushdown storage requires a rank-1 signature, symbol `{0}` has rank {1}")]
    PushdownRank(String, usize),
    #[error("tape rewrites are only valid on tape storage")]
    TapeRuleOnTree,
    #[error("tree rewrites are only valid on tree or pushdown storage")]
    TreeRuleOnTape,
    #[error("item for `{letter}` expects {expected} child states, got {got}")]
    ForestArity { letter: String, expected: usize, got: usize },
    #[error("input letter `{0}` is not in the alphabet")]
    UnknownLetter(String),
    #[error("preloaded input requires tape storage and no consuming items")]
    BadPreload,
    #[error("preloaded input letter `{0}` is not a tape symbol")]
    PreloadLetter(String),
    #[error("word input given to a forest recognizer (or vice versa)")]
    InputKind,
    #[error("run is not deterministic: {0} successors from one description")]
    NotDeterministic(usize),
    #[error(transparent)]
    Term(#[from] crate::term::TermError),
}

/// Input alphabet: plain letters for language recognizers, a ranked
/// signature for forest recognizers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputAlphabet {
    Word(Vec<String>),
    Forest(Vec<(String, usize)>),
}

impl InputAlphabet {
    pub fn letters(&self) -> Vec<String> {
        match self {
            InputAlphabet::Word(l) => l.clone(),
            InputAlphabet::Forest(l) => l.iter().map(|(n, _)| n.clone()).collect(),
        }
    }
}

/// Which auxiliary store the automaton manipulates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StorageKind {
    None,
    /// Tree storage; `pushdown` restricts the signature to rank 1.
    Tree { pushdown: bool },
    /// Tape with a designated blank symbol; `linear` bounds the head by the
    /// input length.
    Tape { linear: bool, blank: SymbolId },
}

/// A tape rewrite: replace-and-move, or initialize an unwritten cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TapeRule {
    /// `γ -> γ'+` / `γ -> γ'-`
    Write { read: SymbolId, write: SymbolId, right: bool },
    /// `_ -> γ`: write an uninitialized cell, head unmoved.
    Init { write: SymbolId },
}

/// Storage transformation carried by a transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rewrite {
    Term(RewriteRule),
    Tape(TapeRule),
}

/// A consuming transition. `from` has one entry for language recognizers and
/// one per child for forest recognizers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsumeItem {
    pub letter: String,
    pub from: Vec<usize>,
    pub rule: Option<Rewrite>,
    pub to: usize,
}

/// An ε-transition: state and storage change only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsItem {
    pub from: usize,
    pub rule: Option<Rewrite>,
    pub to: usize,
}

/// Begin/end framing used when an artifact's word language is wrapped by
/// bootstrap and terminator letters.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub begin: Option<String>,
    pub end: Option<String>,
}

impl Frame {
    pub fn wrap(&self, word: &[String]) -> Vec<String> {
        let mut out = Vec::with_capacity(word.len() + 2);
        if let Some(b) = &self.begin {
            out.push(b.clone());
        }
        out.extend_from_slice(word);
        if let Some(e) = &self.end {
            out.push(e.clone());
        }
        out
    }

    pub fn names(&self) -> Vec<&String> {
        self.begin.iter().chain(self.end.iter()).collect()
    }
}

#[derive(Debug, Clone)]
pub struct AutomatonSpec {
    pub name: Option<String>,
    pub store: Arc<TermStore>,
    pub states: Vec<String>,
    pub initial: usize,
    pub accepting: BTreeSet<usize>,
    pub input: InputAlphabet,
    pub storage: StorageKind,
    /// Initial tree storage; defaults to the leaf.
    pub initial_storage: Option<TermId>,
    /// Tape automata may receive the input preloaded on the tape.
    pub preload: bool,
    pub consuming: Vec<ConsumeItem>,
    pub epsilon: Vec<EpsItem>,
    pub frame: Frame,
    /// Feature names the spec claims for itself; checked by `validate`.
    pub declared: Vec<String>,
}

impl AutomatonSpec {
    pub fn state_index(&self, name: &str) -> Result<usize, AutomataError> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| AutomataError::UnknownState(name.to_string()))
    }

    /// Letters of the word language, framing letters excluded.
    pub fn word_alphabet(&self) -> Vec<String> {
        let frame = self.frame.names();
        self.input
            .letters()
            .into_iter()
            .filter(|l| !frame.iter().any(|f| *f == l))
            .collect()
    }
}

/// Contents of a tape store: head position plus the written cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tape {
    pub head: i64,
    pub cells: Vec<SymbolId>,
}

impl Tape {
    fn read(&self, blank: SymbolId, linear: Option<usize>) -> Option<SymbolId> {
        if self.head < 0 {
            return None;
        }
        let h = self.head as usize;
        if h < self.cells.len() {
            return Some(self.cells[h]);
        }
        match linear {
            Some(n) if h > n => None,
            _ => Some(blank),
        }
    }

    fn unwritten(&self, linear: Option<usize>) -> bool {
        if self.head < 0 {
            return false;
        }
        let h = self.head as usize;
        if h < self.cells.len() {
            return false;
        }
        match linear {
            Some(n) => h <= n,
            None => true,
        }
    }

    fn write(&self, sym: SymbolId, blank: SymbolId) -> Tape {
        let mut cells = self.cells.clone();
        let h = self.head as usize;
        while cells.len() <= h {
            cells.push(blank);
        }
        cells[h] = sym;
        Tape { head: self.head, cells }
    }
}

/// Storage component of an instantaneous description.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum StoreContents {
    Unit,
    Tree(TermId),
    Tape(Tape),
}

/// Instantaneous description: how much input was consumed, the state, and
/// the storage contents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Id {
    pub consumed: usize,
    pub state: usize,
    pub storage: StoreContents,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RejectReason {
    Hang,
    NonAccepting,
}

/// Verdict of a run. Fuel exhaustion is reported as its own outcome and
/// never conflated with rejection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RunOutcome {
    Accept,
    Reject(RejectReason),
    FuelExhausted,
}

impl RunOutcome {
    pub fn accepted(&self) -> bool {
        matches!(self, RunOutcome::Accept)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Total transitions explored per word (consuming and ε together).
    pub fuel: u64,
    /// Cap on distinct instantaneous descriptions for non-deterministic
    /// exploration.
    pub config_cap: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { fuel: 100_000, config_cap: 10_000 }
    }
}

// ---------------------------------------------------------------------------
// Lattice point
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatesFeature {
    Stateless,
    Stateful,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StorageFeature {
    NoStore,
    PushdownStore,
    TreeStore,
    LinearlyBoundedTapeStore,
    UnboundedTapeStore,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecognizerFeature {
    LanguageRecognizer,
    ForestRecognizer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimingFeature {
    RealTime,
    EpsilonTransitions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeterminismFeature {
    Deterministic,
    /// Parsed and stored, but carries no enforced semantics.
    DeterministicAtEnd,
    NonDeterministic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MultiplicityFeature {
    LinearRewrite,
    NonLinearRewrite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DepthFeature {
    ShallowRewrite,
    DeepRewrite,
}

/// The seven-characteristic lattice point of an automaton.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticePointA {
    pub states: StatesFeature,
    pub storage: StorageFeature,
    pub recognizer: RecognizerFeature,
    pub timing: TimingFeature,
    pub determinism: DeterminismFeature,
    pub multiplicity: MultiplicityFeature,
    pub depth: DepthFeature,
}

impl LatticePointA {
    /// Abbreviated notation: only features above the bottom of the lattice.
    pub fn abbreviated(&self) -> String {
        let mut parts = Vec::new();
        if self.states == StatesFeature::Stateful {
            parts.push("stateful".to_string());
        }
        match self.storage {
            StorageFeature::NoStore => {}
            StorageFeature::PushdownStore => parts.push("pushdown-store".into()),
            StorageFeature::TreeStore => parts.push("tree-store".into()),
            StorageFeature::LinearlyBoundedTapeStore => {
                parts.push("linearly-bounded-tape-store".into())
            }
            StorageFeature::UnboundedTapeStore => parts.push("unbounded-tape-store".into()),
        }
        if self.recognizer == RecognizerFeature::ForestRecognizer {
            parts.push("forest-recognizer".into());
        }
        if self.timing == TimingFeature::EpsilonTransitions {
            parts.push("ε-transitions".into());
        }
        match self.determinism {
            DeterminismFeature::Deterministic => {}
            DeterminismFeature::DeterministicAtEnd => parts.push("deterministic-at-end".into()),
            DeterminismFeature::NonDeterministic => parts.push("non-deterministic".into()),
        }
        if self.multiplicity == MultiplicityFeature::NonLinearRewrite {
            parts.push("non-linear-rewrite".into());
        }
        if self.depth == DepthFeature::DeepRewrite {
            parts.push("deep-rewrite".into());
        }
        format!("⟨{}⟩", parts.join(", "))
    }

    pub fn is_deterministic(&self) -> bool {
        self.determinism == DeterminismFeature::Deterministic
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

/// Do two left-hand patterns admit a common subject? Exact for shallow
/// canonical patterns (root comparison); a same-root answer for deeper
/// patterns is a conservative yes.
fn patterns_overlap(store: &TermStore, a: TermId, b: TermId) -> bool {
    match (store.node(a), store.node(b)) {
        (Node::Var(_), _) | (_, Node::Var(_)) => true,
        (Node::Leaf, Node::Leaf) => true,
        (Node::Leaf, Node::App(..)) | (Node::App(..), Node::Leaf) => false,
        (Node::App(s1, _), Node::App(s2, _)) => s1 == s2,
    }
}

fn rewrites_overlap(store: &TermStore, blank: Option<SymbolId>, a: &Option<Rewrite>, b: &Option<Rewrite>) -> bool {
    match (a, b) {
        (None, _) | (_, None) => true,
        (Some(Rewrite::Term(ra)), Some(Rewrite::Term(rb))) => {
            ra.lhs.len() == rb.lhs.len()
                && ra
                    .lhs
                    .iter()
                    .zip(rb.lhs.iter())
                    .all(|(&pa, &pb)| patterns_overlap(store, pa, pb))
        }
        (Some(Rewrite::Tape(ta)), Some(Rewrite::Tape(tb))) => match (ta, tb) {
            (TapeRule::Write { read: r1, .. }, TapeRule::Write { read: r2, .. }) => r1 == r2,
            (TapeRule::Init { .. }, TapeRule::Init { .. }) => true,
            (TapeRule::Init { .. }, TapeRule::Write { read, .. })
            | (TapeRule::Write { read, .. }, TapeRule::Init { .. }) => Some(*read) == blank,
        },
        _ => false,
    }
}

/// Validates a spec and computes its minimal lattice point, together with a
/// diagnostic per declared feature the spec does not actually have.
pub fn validate(spec: &AutomatonSpec) -> Result<(LatticePointA, Vec<String>), AutomataError> {
    let store = &spec.store;

    // Structural checks.
    if spec.initial >= spec.states.len() {
        return Err(AutomataError::UnknownState(format!("#{}", spec.initial)));
    }
    if let StorageKind::Tree { pushdown: true } = spec.storage {
        for (name, rank) in store.symbols() {
            if rank != 1 {
                return Err(AutomataError::PushdownRank(name, rank));
            }
        }
    }
    if spec.preload {
        let tape = matches!(spec.storage, StorageKind::Tape { .. });
        if !tape || !spec.consuming.is_empty() {
            return Err(AutomataError::BadPreload);
        }
    }
    let forest = matches!(spec.input, InputAlphabet::Forest(_));
    for item in &spec.consuming {
        let rank = match &spec.input {
            InputAlphabet::Word(letters) => {
                if !letters.contains(&item.letter) {
                    return Err(AutomataError::UnknownLetter(item.letter.clone()));
                }
                1
            }
            InputAlphabet::Forest(sig) => sig
                .iter()
                .find(|(n, _)| *n == item.letter)
                .map(|&(_, r)| r)
                .ok_or_else(|| AutomataError::UnknownLetter(item.letter.clone()))?,
        };
        let expected = if forest { rank } else { 1 };
        if item.from.len() != expected {
            return Err(AutomataError::ForestArity {
                letter: item.letter.clone(),
                expected,
                got: item.from.len(),
            });
        }
        check_rule(spec, &item.rule)?;
    }
    for item in &spec.epsilon {
        check_rule(spec, &item.rule)?;
    }

    // Seven characteristics.
    let states = if spec.states.len() == 1
        && spec.accepting.len() == 1
        && spec.accepting.contains(&spec.initial)
    {
        StatesFeature::Stateless
    } else {
        StatesFeature::Stateful
    };
    let storage = match &spec.storage {
        StorageKind::None => StorageFeature::NoStore,
        StorageKind::Tape { linear: true, .. } => StorageFeature::LinearlyBoundedTapeStore,
        StorageKind::Tape { linear: false, .. } => StorageFeature::UnboundedTapeStore,
        StorageKind::Tree { .. } => {
            if store.symbols().iter().all(|&(_, r)| r == 1) {
                StorageFeature::PushdownStore
            } else {
                StorageFeature::TreeStore
            }
        }
    };
    let recognizer = if forest {
        RecognizerFeature::ForestRecognizer
    } else {
        RecognizerFeature::LanguageRecognizer
    };
    let timing = if spec.epsilon.is_empty() {
        TimingFeature::RealTime
    } else {
        TimingFeature::EpsilonTransitions
    };

    let all_rules = spec
        .consuming
        .iter()
        .map(|i| &i.rule)
        .chain(spec.epsilon.iter().map(|i| &i.rule));
    let mut linear = true;
    let mut shallow = true;
    for rule in all_rules {
        if let Some(Rewrite::Term(r)) = rule {
            linear &= r.is_linear(store);
            shallow &= r.is_shallow(store);
        }
    }

    let blank = match spec.storage {
        StorageKind::Tape { blank, .. } => Some(blank),
        _ => None,
    };
    let mut deterministic = true;
    for (i, a) in spec.consuming.iter().enumerate() {
        for b in spec.consuming.iter().skip(i + 1) {
            if a.letter == b.letter
                && a.from == b.from
                && rewrites_overlap(store, blank, &a.rule, &b.rule)
            {
                deterministic = false;
            }
        }
    }
    for (i, a) in spec.epsilon.iter().enumerate() {
        for b in spec.epsilon.iter().skip(i + 1) {
            if a.from == b.from && rewrites_overlap(store, blank, &a.rule, &b.rule) {
                deterministic = false;
            }
        }
    }
    for c in &spec.consuming {
        for e in &spec.epsilon {
            if c.from.contains(&e.from) && rewrites_overlap(store, blank, &c.rule, &e.rule) {
                deterministic = false;
            }
        }
    }
    let determinism = if deterministic {
        DeterminismFeature::Deterministic
    } else {
        DeterminismFeature::NonDeterministic
    };

    let point = LatticePointA {
        states,
        storage,
        recognizer,
        timing,
        determinism,
        multiplicity: if linear {
            MultiplicityFeature::LinearRewrite
        } else {
            MultiplicityFeature::NonLinearRewrite
        },
        depth: if shallow { DepthFeature::ShallowRewrite } else { DepthFeature::DeepRewrite },
    };

    let mut diagnostics = Vec::new();
    for feature in &spec.declared {
        let have = match feature.as_str() {
            "stateless" => states == StatesFeature::Stateless,
            "stateful" => states == StatesFeature::Stateful,
            "real-time" => timing == TimingFeature::RealTime,
            "deterministic" => determinism == DeterminismFeature::Deterministic,
            "non-deterministic" => determinism == DeterminismFeature::NonDeterministic,
            // Stored but never defined by the framework; taken on faith.
            "deterministic-at-end" => true,
            "linear-rewrite" => point.multiplicity == MultiplicityFeature::LinearRewrite,
            "non-linear-rewrite" => point.multiplicity == MultiplicityFeature::NonLinearRewrite,
            "shallow-rewrite" => point.depth == DepthFeature::ShallowRewrite,
            "deep-rewrite" => point.depth == DepthFeature::DeepRewrite,
            other => {
                diagnostics.push(format!("unknown declared feature `{other}`"));
                continue;
            }
        };
        if !have {
            diagnostics.push(format!("declared `{feature}` but the spec does not satisfy it"));
        }
    }

    Ok((point, diagnostics))
}

fn check_rule(spec: &AutomatonSpec, rule: &Option<Rewrite>) -> Result<(), AutomataError> {
    match (rule, &spec.storage) {
        (Some(Rewrite::Tape(_)), StorageKind::Tape { .. }) => Ok(()),
        (Some(Rewrite::Tape(_)), _) => Err(AutomataError::TapeRuleOnTree),
        (Some(Rewrite::Term(_)), StorageKind::Tree { .. }) => Ok(()),
        (Some(Rewrite::Term(_)), _) => Err(AutomataError::TreeRuleOnTape),
        (None, _) => Ok(()),
    }
}

// ---------------------------------------------------------------------------
// Running
// ---------------------------------------------------------------------------

/// Precompiled transition tables for one spec.
pub struct Runner<'a> {
    spec: &'a AutomatonSpec,
    by_state: Vec<Vec<&'a ConsumeItem>>,
    eps_by_state: Vec<Vec<&'a EpsItem>>,
}

impl<'a> Runner<'a> {
    pub fn new(spec: &'a AutomatonSpec) -> Self {
        let mut by_state: Vec<Vec<&ConsumeItem>> = vec![Vec::new(); spec.states.len()];
        for item in &spec.consuming {
            if let Some(&q) = item.from.first() {
                by_state[q].push(item);
            }
        }
        let mut eps_by_state: Vec<Vec<&EpsItem>> = vec![Vec::new(); spec.states.len()];
        for item in &spec.epsilon {
            eps_by_state[item.from].push(item);
        }
        Runner { spec, by_state, eps_by_state }
    }

    pub fn initial_id(&self, word: &[String]) -> Result<Id, AutomataError> {
        let spec = self.spec;
        if self.spec.preload {
            if let StorageKind::Tape { .. } = spec.storage {
                let mut cells = Vec::with_capacity(word.len());
                for l in word {
                    let sym = spec
                        .store
                        .symbol(l)
                        .ok_or_else(|| AutomataError::PreloadLetter(l.clone()))?;
                    cells.push(sym);
                }
                return Ok(Id {
                    consumed: word.len(),
                    state: spec.initial,
                    storage: StoreContents::Tape(Tape { head: 0, cells }),
                });
            }
        }
        let storage = match &spec.storage {
            StorageKind::None => StoreContents::Unit,
            StorageKind::Tree { .. } => {
                StoreContents::Tree(spec.initial_storage.unwrap_or(spec.store.leaf()))
            }
            StorageKind::Tape { .. } => StoreContents::Tape(Tape { head: 0, cells: Vec::new() }),
        };
        Ok(Id { consumed: 0, state: spec.initial, storage })
    }

    fn apply_rewrite(
        &self,
        rule: &Option<Rewrite>,
        storage: &StoreContents,
        input_len: usize,
    ) -> Option<StoreContents> {
        let spec = self.spec;
        match (rule, storage) {
            (None, s) => Some(s.clone()),
            (Some(Rewrite::Term(r)), StoreContents::Tree(t)) => {
                r.apply(&spec.store, *t).map(StoreContents::Tree)
            }
            (Some(Rewrite::Tape(tr)), StoreContents::Tape(tape)) => {
                let (blank, linear) = match spec.storage {
                    StorageKind::Tape { linear, blank } => {
                        (blank, if linear { Some(input_len) } else { None })
                    }
                    _ => return None,
                };
                match *tr {
                    TapeRule::Write { read, write, right } => {
                        if tape.read(blank, linear)? != read {
                            return None;
                        }
                        let mut out = tape.write(write, blank);
                        out.head += if right { 1 } else { -1 };
                        Some(StoreContents::Tape(out))
                    }
                    TapeRule::Init { write } => {
                        if !tape.unwritten(linear) {
                            return None;
                        }
                        Some(StoreContents::Tape(tape.write(write, blank)))
                    }
                }
            }
            _ => None,
        }
    }

    /// All successors of an instantaneous description.
    pub fn step(&self, word: &[String], id: &Id) -> Vec<Id> {
        let mut out = Vec::new();
        if id.consumed < word.len() {
            let letter = &word[id.consumed];
            for item in &self.by_state[id.state] {
                if &item.letter == letter {
                    if let Some(storage) = self.apply_rewrite(&item.rule, &id.storage, word.len()) {
                        out.push(Id { consumed: id.consumed + 1, state: item.to, storage });
                    }
                }
            }
        }
        for item in &self.eps_by_state[id.state] {
            if let Some(storage) = self.apply_rewrite(&item.rule, &id.storage, word.len()) {
                out.push(Id { consumed: id.consumed, state: item.to, storage });
            }
        }
        out
    }

    fn eps_applicable(&self, id: &Id, input_len: usize) -> bool {
        self.eps_by_state[id.state]
            .iter()
            .any(|item| self.apply_rewrite(&item.rule, &id.storage, input_len).is_some())
    }

    fn is_accepting(&self, id: &Id, word_len: usize) -> bool {
        id.consumed == word_len
            && self.spec.accepting.contains(&id.state)
            && !self.eps_applicable(id, word_len)
    }

    /// Breadth-first run over descriptions, deduplicated by interned storage.
    pub fn run(&self, word: &[String], opts: &RunOptions) -> Result<RunOutcome, AutomataError> {
        let start = self.initial_id(word)?;
        let mut visited: HashSet<Id> = HashSet::new();
        let mut queue: VecDeque<Id> = VecDeque::new();
        visited.insert(start.clone());
        queue.push_back(start);
        let mut fuel = opts.fuel;
        let mut saw_consumed_end = false;
        while let Some(id) = queue.pop_front() {
            if self.is_accepting(&id, word.len()) {
                return Ok(RunOutcome::Accept);
            }
            let succs = self.step(word, &id);
            if succs.is_empty() && id.consumed == word.len() {
                saw_consumed_end = true;
            }
            for succ in succs {
                if fuel == 0 {
                    return Ok(RunOutcome::FuelExhausted);
                }
                fuel -= 1;
                if visited.len() >= opts.config_cap {
                    return Ok(RunOutcome::FuelExhausted);
                }
                if visited.insert(succ.clone()) {
                    queue.push_back(succ);
                }
            }
        }
        Ok(RunOutcome::Reject(if saw_consumed_end {
            RejectReason::NonAccepting
        } else {
            RejectReason::Hang
        }))
    }

    /// Follows the unique run of a deterministic spec, returning the
    /// outcome and every description along the way.
    pub fn run_traced(
        &self,
        word: &[String],
        opts: &RunOptions,
    ) -> Result<(RunOutcome, Vec<Id>), AutomataError> {
        let mut id = self.initial_id(word)?;
        let mut trace = vec![id.clone()];
        let mut fuel = opts.fuel;
        loop {
            if self.is_accepting(&id, word.len()) {
                return Ok((RunOutcome::Accept, trace));
            }
            let mut succs = self.step(word, &id);
            match succs.len() {
                0 => {
                    let reason = if id.consumed == word.len() {
                        RejectReason::NonAccepting
                    } else {
                        RejectReason::Hang
                    };
                    return Ok((RunOutcome::Reject(reason), trace));
                }
                1 => {
                    if fuel == 0 {
                        return Ok((RunOutcome::FuelExhausted, trace));
                    }
                    fuel -= 1;
                    id = succs.pop().unwrap();
                    trace.push(id.clone());
                }
                n => return Err(AutomataError::NotDeterministic(n)),
            }
        }
    }
}

/// Membership of a word, the spec's framing convention applied.
pub fn membership(
    spec: &AutomatonSpec,
    word: &[String],
    opts: &RunOptions,
) -> Result<RunOutcome, AutomataError> {
    let framed = spec.frame.wrap(word);
    Runner::new(spec).run(&framed, opts)
}

/// Runs a single word without framing.
pub fn run(
    spec: &AutomatonSpec,
    word: &[String],
    opts: &RunOptions,
) -> Result<RunOutcome, AutomataError> {
    Runner::new(spec).run(word, opts)
}

#[derive(Debug, Clone, Default)]
pub struct Enumeration {
    pub accepted: Vec<Vec<String>>,
    pub fuel_exhausted: Vec<Vec<String>>,
}

/// Every word of the (frame-stripped) alphabet up to `max_len`, in
/// length-lexicographic order, partitioned into accepted and inconclusive.
pub fn enumerate_accepted(
    spec: &AutomatonSpec,
    max_len: usize,
    opts: &RunOptions,
) -> Result<Enumeration, AutomataError> {
    if matches!(spec.input, InputAlphabet::Forest(_)) {
        return Err(AutomataError::InputKind);
    }
    let alphabet = spec.word_alphabet();
    let runner = Runner::new(spec);
    let mut out = Enumeration::default();
    for word in words_up_to(&alphabet, max_len) {
        let framed = spec.frame.wrap(&word);
        match runner.run(&framed, opts)? {
            RunOutcome::Accept => out.accepted.push(word),
            RunOutcome::FuelExhausted => out.fuel_exhausted.push(word),
            RunOutcome::Reject(_) => {}
        }
    }
    Ok(out)
}

/// All words over `alphabet` with length ≤ `max_len`, length-lexicographic.
pub fn words_up_to(alphabet: &[String], max_len: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut layer: Vec<Vec<String>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * alphabet.len());
        for w in &layer {
            for l in alphabet {
                let mut w2 = w.clone();
                w2.push(l.clone());
                next.push(w2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
        if layer.is_empty() {
            break;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Forest recognition
// ---------------------------------------------------------------------------

/// Runs a bottom-up forest recognizer on an input tree. Children are
/// evaluated left to right; every node's result set is closed under
/// ε-transitions before its parent is visited.
pub fn run_forest(
    spec: &AutomatonSpec,
    input: TermId,
    opts: &RunOptions,
) -> Result<RunOutcome, AutomataError> {
    let sig = match &spec.input {
        InputAlphabet::Forest(sig) => sig.clone(),
        InputAlphabet::Word(_) => return Err(AutomataError::InputKind),
    };
    let runner = Runner::new(spec);
    let store = &spec.store;
    let mut memo: HashMap<TermId, Vec<(usize, StoreContents)>> = HashMap::new();
    let mut fuel = opts.fuel as i64;

    fn closure(
        runner: &Runner,
        set: Vec<(usize, StoreContents)>,
        fuel: &mut i64,
        cap: usize,
    ) -> Vec<(usize, StoreContents)> {
        let mut seen: HashSet<(usize, StoreContents)> = set.iter().cloned().collect();
        let mut queue: VecDeque<(usize, StoreContents)> = set.into();
        let mut out = Vec::new();
        while let Some((q, storage)) = queue.pop_front() {
            out.push((q, storage.clone()));
            if out.len() > cap {
                break;
            }
            let id = Id { consumed: 0, state: q, storage };
            for succ in runner.step(&[], &id) {
                *fuel -= 1;
                if *fuel < 0 {
                    return out;
                }
                let key = (succ.state, succ.storage.clone());
                if seen.insert(key.clone()) {
                    queue.push_back(key);
                }
            }
        }
        out
    }

    fn eval(
        spec: &AutomatonSpec,
        runner: &Runner,
        sig: &[(String, usize)],
        store: &TermStore,
        node: TermId,
        memo: &mut HashMap<TermId, Vec<(usize, StoreContents)>>,
        fuel: &mut i64,
        cap: usize,
    ) -> Result<Vec<(usize, StoreContents)>, AutomataError> {
        if let Some(r) = memo.get(&node) {
            return Ok(r.clone());
        }
        let results = match store.node(node) {
            Node::Leaf => {
                let init = match &spec.storage {
                    StorageKind::None => StoreContents::Unit,
                    StorageKind::Tree { .. } => {
                        StoreContents::Tree(spec.initial_storage.unwrap_or(store.leaf()))
                    }
                    StorageKind::Tape { .. } => StoreContents::Tape(Tape { head: 0, cells: vec![] }),
                };
                closure(runner, vec![(spec.initial, init)], fuel, cap)
            }
            Node::Var(_) => Vec::new(),
            Node::App(sym, children) => {
                let name = store.symbol_name(sym);
                if !sig.iter().any(|(n, r)| *n == name && *r == children.len()) {
                    return Err(AutomataError::UnknownLetter(name));
                }
                let mut child_sets = Vec::with_capacity(children.len());
                for &c in &children {
                    child_sets.push(eval(spec, runner, sig, store, c, memo, fuel, cap)?);
                }
                // Cartesian product over child results.
                let mut combos: Vec<Vec<(usize, StoreContents)>> = vec![Vec::new()];
                for set in &child_sets {
                    let mut next = Vec::new();
                    for combo in &combos {
                        for item in set {
                            if next.len() > cap {
                                break;
                            }
                            let mut c2 = combo.clone();
                            c2.push(item.clone());
                            next.push(c2);
                        }
                    }
                    combos = next;
                }
                let mut found = Vec::new();
                for item in &spec.consuming {
                    if item.letter != name {
                        continue;
                    }
                    for combo in &combos {
                        if combo.iter().map(|(q, _)| *q).collect::<Vec<_>>() != item.from {
                            continue;
                        }
                        *fuel -= 1;
                        if *fuel < 0 {
                            break;
                        }
                        let next = match &item.rule {
                            None => Some(StoreContents::Unit),
                            Some(Rewrite::Term(rule)) => {
                                let storages: Vec<TermId> = combo
                                    .iter()
                                    .map(|(_, s)| match s {
                                        StoreContents::Tree(t) => *t,
                                        _ => store.leaf(),
                                    })
                                    .collect();
                                rule.apply_multi(store, &storages).map(StoreContents::Tree)
                            }
                            Some(Rewrite::Tape(_)) => None,
                        };
                        if let Some(storage) = next {
                            found.push((item.to, storage));
                        }
                    }
                }
                closure(runner, found, fuel, cap)
            }
        };
        memo.insert(node, results.clone());
        Ok(results)
    }

    let results = eval(spec, &runner, &sig, store, input, &mut memo, &mut fuel, opts.config_cap)?;
    if fuel < 0 {
        return Ok(RunOutcome::FuelExhausted);
    }
    let accept = results.iter().any(|(q, storage)| {
        spec.accepting.contains(q)
            && !runner.eps_applicable(
                &Id { consumed: 0, state: *q, storage: storage.clone() },
                0,
            )
    });
    if accept {
        Ok(RunOutcome::Accept)
    } else {
        Ok(RunOutcome::Reject(RejectReason::NonAccepting))
    }
}
