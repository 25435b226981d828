//! Programs of the parametric-polymorphism family and their type checkers.
//!
//! A program is a set of function definitions over generic class names.
//! Types are interned trees; a function definition matches its argument
//! types against term patterns and rewrites them into a result type, or
//! defers to a `typeof` pseudo-expression. Overloading is resolved under
//! one of three modes: every subexpression single-typed, only the whole
//! expression single-typed (Ada style), or any non-empty typing accepted.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::automata::Frame;
use crate::term::{Node, Substitution, TermId, TermStore};

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("function `{0}` is defined in both namespaces")]
    NamespaceClash(String),
    #[error("definition of `{name}` uses return variables missing from its parameters")]
    UnboundReturn { name: String },
    #[error("pseudo-expression calls unknown function `{0}`")]
    UnknownFunction(String),
    #[error("expression calls unknown function `{0}`")]
    UnknownInExpr(String),
    #[error("chain words require unary calls, found `{0}` with {1} arguments")]
    NotAChain(String, usize),
    #[error("frame function `{0}` is not defined")]
    UnknownFrame(String),
    #[error(transparent)]
    Term(#[from] crate::term::TermError),
}

/// Overloading mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    OneType,
    EventuallyOne,
    MultipleTypes,
}

/// Whether a function may appear in expressions (primary, Σ) or only inside
/// `typeof` clauses (auxiliary, Φ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Namespace {
    Primary,
    Auxiliary,
}

/// Return clause of a definition: a type pattern, or the type of a
/// pseudo-expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ret {
    Type(TermId),
    Typeof(PseudoExpr),
}

/// Expression template with type patterns at the leaves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PseudoExpr {
    Leaf(TermId),
    Call(String, Vec<PseudoExpr>),
}

impl PseudoExpr {
    /// Number of function calls, for the rudimentary/full distinction.
    pub fn call_count(&self) -> usize {
        match self {
            PseudoExpr::Leaf(_) => 0,
            PseudoExpr::Call(_, args) => {
                1 + args.iter().map(PseudoExpr::call_count).sum::<usize>()
            }
        }
    }

    pub fn vars(&self, store: &TermStore) -> Vec<crate::term::VarId> {
        match self {
            PseudoExpr::Leaf(t) => store.vars_of(*t),
            PseudoExpr::Call(_, args) => {
                let mut out = Vec::new();
                for a in args {
                    for v in a.vars(store) {
                        if !out.contains(&v) {
                            out.push(v);
                        }
                    }
                }
                out
            }
        }
    }
}

/// One function definition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    pub namespace: Namespace,
    pub params: Vec<TermId>,
    pub ret: Ret,
}

impl FunctionDef {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

/// Expressions to check: the unit bootstrap, a grounded-type instantiation,
/// or a call.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Unit,
    New(TermId),
    Call(String, Vec<Expr>),
}

impl Expr {
    /// Builds the chain `eps.σ1.….σn`.
    pub fn chain(letters: &[String]) -> Expr {
        let mut e = Expr::Unit;
        for l in letters {
            e = Expr::Call(l.clone(), vec![e]);
        }
        e
    }
}

/// A program: definitions, overloading mode, optional word framing, and
/// expressions to check.
#[derive(Debug, Clone)]
pub struct TypeProgram {
    pub name: Option<String>,
    pub store: Arc<TermStore>,
    pub defs: Vec<FunctionDef>,
    pub mode: Mode,
    pub frame: Frame,
    /// When set, word membership additionally requires the final type to be
    /// exactly this type (the assignment convention of driver expressions).
    pub accept_type: Option<TermId>,
    pub exprs: Vec<Expr>,
}

impl TypeProgram {
    pub fn new(store: Arc<TermStore>) -> Self {
        TypeProgram {
            name: None,
            store,
            defs: Vec::new(),
            mode: Mode::OneType,
            frame: Frame::default(),
            accept_type: None,
            exprs: Vec::new(),
        }
    }

    pub fn primary(&self) -> impl Iterator<Item = &FunctionDef> {
        self.defs.iter().filter(|d| d.namespace == Namespace::Primary)
    }

    pub fn auxiliary(&self) -> impl Iterator<Item = &FunctionDef> {
        self.defs.iter().filter(|d| d.namespace == Namespace::Auxiliary)
    }

    /// Primary function names (sorted, deduplicated) minus framing names:
    /// the word alphabet of the program.
    pub fn word_alphabet(&self) -> Vec<String> {
        let frame = self.frame.names();
        let mut names: Vec<String> = self
            .primary()
            .map(|d| d.name.clone())
            .filter(|n| !frame.iter().any(|f| *f == n))
            .collect();
        names.sort();
        names.dedup();
        names
    }

    pub fn defs_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a FunctionDef> + 'a {
        self.defs.iter().filter(move |d| d.name == name)
    }

    pub fn has_function(&self, name: &str) -> bool {
        self.defs.iter().any(|d| d.name == name)
    }

    /// Structural validation: disjoint namespaces, return variables bound by
    /// parameters, calls resolvable, frame functions defined.
    pub fn validate(&self) -> Result<(), CheckError> {
        let mut primary: BTreeSet<&str> = BTreeSet::new();
        let mut auxiliary: BTreeSet<&str> = BTreeSet::new();
        for def in &self.defs {
            match def.namespace {
                Namespace::Primary => primary.insert(def.name.as_str()),
                Namespace::Auxiliary => auxiliary.insert(def.name.as_str()),
            };
        }
        if let Some(clash) = primary.intersection(&auxiliary).next() {
            return Err(CheckError::NamespaceClash(clash.to_string()));
        }
        for def in &self.defs {
            let mut bound = Vec::new();
            for &p in &def.params {
                bound.extend(self.store.vars_of(p));
            }
            let ret_vars = match &def.ret {
                Ret::Type(t) => self.store.vars_of(*t),
                Ret::Typeof(p) => {
                    self.check_pseudo_calls(p)?;
                    p.vars(&self.store)
                }
            };
            for v in ret_vars {
                if !bound.contains(&v) {
                    return Err(CheckError::UnboundReturn { name: def.name.clone() });
                }
            }
        }
        for name in self.frame.names() {
            if !self.defs.iter().any(|d| d.namespace == Namespace::Primary && &d.name == name) {
                return Err(CheckError::UnknownFrame(name.clone()));
            }
        }
        for e in &self.exprs {
            self.check_expr_calls(e)?;
        }
        Ok(())
    }

    fn check_pseudo_calls(&self, p: &PseudoExpr) -> Result<(), CheckError> {
        if let PseudoExpr::Call(name, args) = p {
            if !self.has_function(name) {
                return Err(CheckError::UnknownFunction(name.clone()));
            }
            for a in args {
                self.check_pseudo_calls(a)?;
            }
        }
        Ok(())
    }

    fn check_expr_calls(&self, e: &Expr) -> Result<(), CheckError> {
        if let Expr::Call(name, args) = e {
            if !self.has_function(name) {
                return Err(CheckError::UnknownInExpr(name.clone()));
            }
            for a in args {
                self.check_expr_calls(a)?;
            }
        }
        Ok(())
    }
}

/// Maps a word to its expression under the program's framing convention.
pub fn word_to_expression(program: &TypeProgram, word: &[String]) -> Expr {
    Expr::chain(&program.frame.wrap(word))
}

/// Inverse of [`word_to_expression`]: strips the frame off a unary chain.
pub fn expression_to_word(program: &TypeProgram, expr: &Expr) -> Result<Vec<String>, CheckError> {
    let mut letters = Vec::new();
    let mut cur = expr;
    loop {
        match cur {
            Expr::Unit => break,
            Expr::New(_) => {
                return Err(CheckError::NotAChain("new".to_string(), 0));
            }
            Expr::Call(name, args) => {
                if args.len() != 1 {
                    return Err(CheckError::NotAChain(name.clone(), args.len()));
                }
                letters.push(name.clone());
                cur = &args[0];
            }
        }
    }
    letters.reverse();
    if let Some(end) = &program.frame.end {
        if letters.last() == Some(end) {
            letters.pop();
        }
    }
    if let Some(begin) = &program.frame.begin {
        if letters.first() == Some(begin) {
            letters.remove(0);
        }
    }
    Ok(letters)
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypeArity {
    Nyladic,
    Monadic,
    Dyadic,
    Polyadic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternDepth {
    Shallow,
    /// Depth-two patterns; recognized in the lattice but `classify` folds
    /// them into `Deep`.
    AlmostShallow,
    Deep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Multiplicity {
    Linear,
    NonLinear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FnArity {
    Unary,
    NAry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TypeofFeature {
    NoTypeof,
    RudimentaryTypeof,
    FullTypeof,
}

/// The six-characteristic lattice point of a program.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LatticePointT {
    pub arity: TypeArity,
    pub depth: PatternDepth,
    pub multiplicity: Multiplicity,
    pub fn_arity: FnArity,
    pub typeof_: TypeofFeature,
    pub overloading: Mode,
}

impl LatticePointT {
    fn mode_rank(mode: Mode) -> u8 {
        match mode {
            Mode::OneType => 0,
            Mode::EventuallyOne => 1,
            Mode::MultipleTypes => 2,
        }
    }

    /// Component-wise lattice order.
    pub fn le(&self, other: &LatticePointT) -> bool {
        self.arity <= other.arity
            && self.depth <= other.depth
            && self.multiplicity <= other.multiplicity
            && self.fn_arity <= other.fn_arity
            && self.typeof_ <= other.typeof_
            && Self::mode_rank(self.overloading) <= Self::mode_rank(other.overloading)
    }

    /// The point of the Fluent intermediate language:
    /// ⟨monadic, deep, rudimentary-typeof⟩.
    pub fn fluent() -> LatticePointT {
        LatticePointT {
            arity: TypeArity::Monadic,
            depth: PatternDepth::Deep,
            multiplicity: Multiplicity::Linear,
            fn_arity: FnArity::Unary,
            typeof_: TypeofFeature::RudimentaryTypeof,
            overloading: Mode::OneType,
        }
    }

    pub fn abbreviated(&self) -> String {
        let mut parts = Vec::new();
        match self.arity {
            TypeArity::Nyladic => {}
            TypeArity::Monadic => parts.push("monadic"),
            TypeArity::Dyadic => parts.push("dyadic"),
            TypeArity::Polyadic => parts.push("polyadic"),
        }
        if self.depth != PatternDepth::Shallow {
            parts.push(if self.depth == PatternDepth::Deep { "deep" } else { "almost-shallow" });
        }
        if self.multiplicity == Multiplicity::NonLinear {
            parts.push("non-linear");
        }
        if self.fn_arity == FnArity::NAry {
            parts.push("n-ary");
        }
        match self.typeof_ {
            TypeofFeature::NoTypeof => {}
            TypeofFeature::RudimentaryTypeof => parts.push("rudimentary-typeof"),
            TypeofFeature::FullTypeof => parts.push("full-typeof"),
        }
        match self.overloading {
            Mode::OneType => {}
            Mode::EventuallyOne => parts.push("eventually-one-type"),
            Mode::MultipleTypes => parts.push("multiple-types"),
        }
        format!("⟨{}⟩", parts.join(", "))
    }
}

#[derive(Default)]
struct TypeScan {
    uses_vars: bool,
    max_rank: usize,
    atomic_only: bool,
}

impl TypeScan {
    fn new() -> Self {
        TypeScan { uses_vars: false, max_rank: 0, atomic_only: true }
    }

    fn visit(&mut self, store: &TermStore, t: TermId) {
        let mut stack = vec![t];
        while let Some(t) = stack.pop() {
            match store.node(t) {
                Node::Leaf => {}
                Node::Var(_) => self.uses_vars = true,
                Node::App(_, children) => {
                    self.max_rank = self.max_rank.max(children.len());
                    // Atomic = a rank-1 class name applied to the unit only.
                    if !(children.len() == 1 && children[0] == store.leaf()) {
                        self.atomic_only = false;
                    }
                    stack.extend(children);
                }
            }
        }
    }
}

/// Computes the least lattice point admitting every definition.
pub fn classify_program(program: &TypeProgram) -> Result<LatticePointT, CheckError> {
    program.validate()?;
    let store = &program.store;

    let mut scan = TypeScan::new();
    let mut max_depth = 0u32;
    let mut non_linear = false;
    let mut n_ary = false;
    let mut typeof_calls = 0usize;

    for def in &program.defs {
        if def.arity() > 1 {
            n_ary = true;
        }
        let mut occurrences = Vec::new();
        for &p in &def.params {
            max_depth = max_depth.max(store.depth(p));
            occurrences.extend(store.var_occurrences(p));
            scan.visit(store, p);
        }
        let mut distinct = occurrences.clone();
        distinct.sort();
        distinct.dedup();
        if distinct.len() != occurrences.len() {
            non_linear = true;
        }
        match &def.ret {
            Ret::Type(t) => scan.visit(store, *t),
            Ret::Typeof(p) => {
                typeof_calls = typeof_calls.max(p.call_count());
                let mut stack = vec![p];
                while let Some(p) = stack.pop() {
                    match p {
                        PseudoExpr::Leaf(t) => scan.visit(store, *t),
                        PseudoExpr::Call(_, args) => stack.extend(args.iter()),
                    }
                }
            }
        }
    }

    let arity = if !scan.uses_vars && scan.atomic_only {
        TypeArity::Nyladic
    } else {
        match scan.max_rank {
            0 | 1 => TypeArity::Monadic,
            2 => TypeArity::Dyadic,
            _ => TypeArity::Polyadic,
        }
    };
    let depth = if max_depth <= 1 { PatternDepth::Shallow } else { PatternDepth::Deep };

    Ok(LatticePointT {
        arity,
        depth,
        multiplicity: if non_linear { Multiplicity::NonLinear } else { Multiplicity::Linear },
        fn_arity: if n_ary { FnArity::NAry } else { FnArity::Unary },
        typeof_: match typeof_calls {
            0 => TypeofFeature::NoTypeof,
            1 => TypeofFeature::RudimentaryTypeof,
            _ => TypeofFeature::FullTypeof,
        },
        overloading: program.mode,
    })
}

// ---------------------------------------------------------------------------
// Type checking
// ---------------------------------------------------------------------------

/// Verdict of checking one expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckResult {
    Typed(TermId),
    TypedSet(Vec<TermId>),
    /// One-type mode only: two applicable definitions disagreed somewhere.
    ErrorType,
    /// Eventually-one mode only: the root kept several types.
    Ambiguous,
    IllTyped { at: usize },
    FuelExhausted,
}

impl CheckResult {
    pub fn is_typed(&self) -> bool {
        matches!(self, CheckResult::Typed(_) | CheckResult::TypedSet(_))
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CheckOptions {
    /// Call evaluations (including typeof-resolved ones) before giving up.
    pub fuel: u64,
    /// Cap on distinct types tracked per node in set modes.
    pub set_cap: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { fuel: 100_000, set_cap: 4096 }
    }
}

/// Outcome of matching argument types against one definition.
pub enum ApplyOutcome {
    Type(TermId),
    Pending(PseudoExpr, Substitution),
    NoMatch,
}

/// Applies one definition to grounded argument types: all parameter
/// patterns must match under a single shared substitution.
pub fn apply_function(store: &TermStore, def: &FunctionDef, args: &[TermId]) -> ApplyOutcome {
    if args.len() != def.arity() {
        return ApplyOutcome::NoMatch;
    }
    match store.match_multi(&def.params, args) {
        None => ApplyOutcome::NoMatch,
        Some(subst) => match &def.ret {
            Ret::Type(t) => ApplyOutcome::Type(store.apply_subst(*t, &subst)),
            Ret::Typeof(p) => ApplyOutcome::Pending(p.clone(), subst),
        },
    }
}

enum Halt {
    IllTyped { at: usize },
    Fuel,
}

/// Inner evaluation result: a set of candidate types, or the poisoned error
/// type of one-type mode (absorbing: a call on ⊥ stays ⊥).
enum Types {
    Poison,
    Set(BTreeSet<TermId>),
}

struct Checker<'a> {
    program: &'a TypeProgram,
    mode: Mode,
    fuel: u64,
    set_cap: usize,
    position: usize,
}

impl<'a> Checker<'a> {
    fn burn(&mut self) -> Result<(), Halt> {
        if self.fuel == 0 {
            return Err(Halt::Fuel);
        }
        self.fuel -= 1;
        Ok(())
    }

    fn eval(&mut self, expr: &Expr) -> Result<Types, Halt> {
        match expr {
            Expr::Unit => Ok(Types::Set([self.program.store.leaf()].into())),
            Expr::New(t) => Ok(Types::Set([*t].into())),
            Expr::Call(name, args) => {
                let mut arg_sets = Vec::with_capacity(args.len());
                for a in args {
                    match self.eval(a)? {
                        Types::Poison => return Ok(Types::Poison),
                        Types::Set(s) => arg_sets.push(s),
                    }
                }
                self.position += 1;
                let at = self.position;
                self.burn()?;
                let mut results: BTreeSet<TermId> = BTreeSet::new();
                // Cartesian product over the argument type sets.
                let mut combos: Vec<Vec<TermId>> = vec![Vec::new()];
                for set in &arg_sets {
                    let mut next = Vec::new();
                    for combo in &combos {
                        for &t in set {
                            if next.len() > self.set_cap {
                                return Err(Halt::Fuel);
                            }
                            let mut c = combo.clone();
                            c.push(t);
                            next.push(c);
                        }
                    }
                    combos = next;
                }
                for combo in &combos {
                    for def in self.program.defs_named(name) {
                        match apply_function(&self.program.store, def, combo) {
                            ApplyOutcome::NoMatch => {}
                            ApplyOutcome::Type(t) => {
                                results.insert(t);
                            }
                            ApplyOutcome::Pending(pseudo, subst) => {
                                let grounded = self.ground(&pseudo, &subst);
                                match self.eval(&grounded)? {
                                    Types::Poison => return Ok(Types::Poison),
                                    Types::Set(s) => results.extend(s),
                                }
                            }
                        }
                        if results.len() > self.set_cap {
                            return Err(Halt::Fuel);
                        }
                    }
                }
                if results.is_empty() {
                    return Err(Halt::IllTyped { at });
                }
                if self.mode == Mode::OneType && results.len() > 1 {
                    return Ok(Types::Poison);
                }
                Ok(Types::Set(results))
            }
        }
    }

    /// Grounds a pseudo-expression with the matching substitution, turning
    /// it into a checkable expression.
    fn ground(&self, pseudo: &PseudoExpr, subst: &Substitution) -> Expr {
        match pseudo {
            PseudoExpr::Leaf(t) => Expr::New(self.program.store.apply_subst(*t, subst)),
            PseudoExpr::Call(name, args) => {
                Expr::Call(name.clone(), args.iter().map(|a| self.ground(a, subst)).collect())
            }
        }
    }
}

/// Resolves a grounded typeof pseudo-expression to a single type, as used
/// by the Typeof Expression rule. Errors and ambiguity surface as the
/// corresponding check results.
pub fn resolve_typeof(
    program: &TypeProgram,
    pseudo: &PseudoExpr,
    subst: &Substitution,
    opts: &CheckOptions,
) -> CheckResult {
    let mut checker = Checker {
        program,
        mode: program.mode,
        fuel: opts.fuel,
        set_cap: opts.set_cap,
        position: 0,
    };
    let grounded = checker.ground(pseudo, subst);
    finish(checker.eval(&grounded), program.mode)
}

fn finish(types: Result<Types, Halt>, mode: Mode) -> CheckResult {
    match types {
        Err(Halt::Fuel) => CheckResult::FuelExhausted,
        Err(Halt::IllTyped { at }) => CheckResult::IllTyped { at },
        Ok(Types::Poison) => CheckResult::ErrorType,
        Ok(Types::Set(set)) => {
            let types: Vec<TermId> = set.into_iter().collect();
            match mode {
                Mode::OneType | Mode::EventuallyOne => {
                    if types.len() == 1 {
                        CheckResult::Typed(types[0])
                    } else if mode == Mode::EventuallyOne {
                        CheckResult::Ambiguous
                    } else {
                        // unreachable: one-type folded >1 into Poison
                        CheckResult::ErrorType
                    }
                }
                Mode::MultipleTypes => {
                    if types.len() == 1 {
                        CheckResult::Typed(types[0])
                    } else {
                        CheckResult::TypedSet(types)
                    }
                }
            }
        }
    }
}

/// Type-checks an expression under the given overloading mode.
pub fn typecheck(
    program: &TypeProgram,
    expr: &Expr,
    mode: Mode,
    opts: &CheckOptions,
) -> CheckResult {
    let mut checker =
        Checker { program, mode, fuel: opts.fuel, set_cap: opts.set_cap, position: 0 };
    finish(checker.eval(expr), mode)
}

/// Word membership under the program's own mode and framing.
pub fn word_membership(
    program: &TypeProgram,
    word: &[String],
    opts: &CheckOptions,
) -> CheckResult {
    let result = typecheck(program, &word_to_expression(program, word), program.mode, opts);
    match (program.accept_type, &result) {
        (Some(accept), CheckResult::Typed(t)) if *t != accept => {
            CheckResult::IllTyped { at: word.len() + 1 }
        }
        (Some(accept), CheckResult::TypedSet(ts)) if !ts.contains(&accept) => {
            CheckResult::IllTyped { at: word.len() + 1 }
        }
        _ => result,
    }
}

/// Optional lint for Java-style erasure clashes: two definitions of one
/// name whose parameter patterns share root symbols erase to the same
/// signature.
pub fn lint_erasure(program: &TypeProgram) -> Vec<String> {
    let store = &program.store;
    let mut findings = Vec::new();
    for (i, a) in program.defs.iter().enumerate() {
        for b in program.defs.iter().skip(i + 1) {
            if a.name != b.name || a.arity() != b.arity() {
                continue;
            }
            let same_roots = a
                .params
                .iter()
                .zip(b.params.iter())
                .all(|(&pa, &pb)| match (store.node(pa), store.node(pb)) {
                    (Node::App(s1, _), Node::App(s2, _)) => s1 == s2,
                    (Node::Leaf, Node::Leaf) => true,
                    _ => false,
                });
            if same_roots {
                findings.push(format!(
                    "`{}`: overloads indistinguishable after type erasure",
                    a.name
                ));
            }
        }
    }
    findings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::LEAF;

    /// The unary increment/decrement program: zero, inc, dec over Succ.
    fn unary_program() -> TypeProgram {
        let store = Arc::new(TermStore::new());
        let succ = store.declare("Succ", 1).unwrap();
        let x = store.var_term(store.var("x"));
        let succ_x = store.app(succ, &[x]).unwrap();
        let succ_succ_x = store.app(succ, &[succ_x]).unwrap();
        let succ_e = store.app(succ, &[LEAF]).unwrap();
        let mut p = TypeProgram::new(store);
        p.defs = vec![
            FunctionDef {
                name: "zero".into(),
                namespace: Namespace::Primary,
                params: vec![LEAF],
                ret: Ret::Type(LEAF),
            },
            FunctionDef {
                name: "inc".into(),
                namespace: Namespace::Primary,
                params: vec![LEAF],
                ret: Ret::Type(succ_e),
            },
            FunctionDef {
                name: "inc".into(),
                namespace: Namespace::Primary,
                params: vec![succ_x],
                ret: Ret::Type(succ_succ_x),
            },
            FunctionDef {
                name: "dec".into(),
                namespace: Namespace::Primary,
                params: vec![succ_x],
                ret: Ret::Type(x),
            },
        ];
        p.frame.begin = Some("zero".into());
        p
    }

    fn unary_type(store: &TermStore, k: usize) -> TermId {
        let succ = store.symbol("Succ").unwrap();
        let mut t = LEAF;
        for _ in 0..k {
            t = store.app(succ, &[t]).unwrap();
        }
        t
    }

    #[test]
    fn inc_dec_chain_types_to_u4() {
        let p = unary_program();
        let letters: Vec<String> =
            ["zero", "inc", "inc", "inc", "inc", "dec", "inc"].map(String::from).into();
        let e = Expr::chain(&letters);
        let result = typecheck(&p, &e, Mode::OneType, &CheckOptions::default());
        assert_eq!(result, CheckResult::Typed(unary_type(&p.store, 4)));
    }

    #[test]
    fn dec_on_zero_is_ill_typed() {
        let p = unary_program();
        let e = Expr::chain(&["zero".into(), "dec".into()]);
        match typecheck(&p, &e, Mode::OneType, &CheckOptions::default()) {
            CheckResult::IllTyped { at } => assert_eq!(at, 2),
            other => panic!("expected ill-typed, got {other:?}"),
        }
    }

    #[test]
    fn instantiation_form_applies() {
        // σ:𝛜→t applied to [𝛜] yields t.
        let p = unary_program();
        let def = p.defs_named("inc").next().unwrap();
        match apply_function(&p.store, def, &[LEAF]) {
            ApplyOutcome::Type(t) => assert_eq!(t, unary_type(&p.store, 1)),
            _ => panic!("expected match"),
        }
    }

    #[test]
    fn non_linear_pattern_compares_types() {
        let store = Arc::new(TermStore::new());
        let g = store.declare("g", 2).unwrap();
        let succ = store.declare("Succ", 1).unwrap();
        let x = store.var_term(store.var("x"));
        let gxx = store.app(g, &[x, x]).unwrap();
        let mut p = TypeProgram::new(store.clone());
        p.defs.push(FunctionDef {
            name: "eq".into(),
            namespace: Namespace::Primary,
            params: vec![gxx],
            ret: Ret::Type(x),
        });
        let u = |k: usize| {
            let mut t = LEAF;
            for _ in 0..k {
                t = store.app(succ, &[t]).unwrap();
            }
            t
        };
        let def = p.defs_named("eq").next().unwrap();
        match apply_function(&store, def, &[store.app(g, &[u(9), u(9)]).unwrap()]) {
            ApplyOutcome::Type(t) => assert_eq!(t, u(9)),
            _ => panic!("expected match"),
        }
        assert!(matches!(
            apply_function(&store, def, &[store.app(g, &[u(7), u(8)]).unwrap()]),
            ApplyOutcome::NoMatch
        ));
    }

    #[test]
    fn one_type_poisons_on_distinct_results() {
        let store = Arc::new(TermStore::new());
        let g1 = store.declare("g1", 1).unwrap();
        let g2 = store.declare("g2", 1).unwrap();
        let g1e = store.app(g1, &[LEAF]).unwrap();
        let g2e = store.app(g2, &[LEAF]).unwrap();
        let mut p = TypeProgram::new(store);
        for t in [g1e, g2e] {
            p.defs.push(FunctionDef {
                name: "a".into(),
                namespace: Namespace::Primary,
                params: vec![LEAF],
                ret: Ret::Type(t),
            });
        }
        let e = Expr::chain(&["a".into()]);
        assert_eq!(typecheck(&p, &e, Mode::OneType, &CheckOptions::default()), CheckResult::ErrorType);
        assert_eq!(
            typecheck(&p, &e, Mode::EventuallyOne, &CheckOptions::default()),
            CheckResult::Ambiguous
        );
        assert_eq!(
            typecheck(&p, &e, Mode::MultipleTypes, &CheckOptions::default()),
            CheckResult::TypedSet(vec![g1e.min(g2e), g1e.max(g2e)])
        );
    }

    #[test]
    fn word_round_trip() {
        let p = unary_program();
        let w: Vec<String> = ["inc", "inc", "dec"].map(String::from).into();
        let e = word_to_expression(&p, &w);
        assert_eq!(expression_to_word(&p, &e).unwrap(), w);
        // The empty word maps to the bare framed bootstrap.
        let e = word_to_expression(&p, &[]);
        assert_eq!(expression_to_word(&p, &e).unwrap(), Vec::<String>::new());
    }

    #[test]
    fn classify_unary_program() {
        let p = unary_program();
        let point = classify_program(&p).unwrap();
        assert_eq!(point.arity, TypeArity::Monadic);
        assert_eq!(point.depth, PatternDepth::Shallow);
        assert_eq!(point.multiplicity, Multiplicity::Linear);
        assert_eq!(point.fn_arity, FnArity::Unary);
        assert_eq!(point.typeof_, TypeofFeature::NoTypeof);
    }

    #[test]
    fn classify_object_based_program() {
        // Only atomic class types, no variables: the bottom of the lattice.
        let store = Arc::new(TermStore::new());
        let a = store.declare("A", 1).unwrap();
        let b = store.declare("B", 1).unwrap();
        let ae = store.app(a, &[LEAF]).unwrap();
        let be = store.app(b, &[LEAF]).unwrap();
        let mut p = TypeProgram::new(store);
        p.defs = vec![
            FunctionDef {
                name: "mk".into(),
                namespace: Namespace::Primary,
                params: vec![LEAF],
                ret: Ret::Type(ae),
            },
            FunctionDef {
                name: "f".into(),
                namespace: Namespace::Primary,
                params: vec![ae],
                ret: Ret::Type(be),
            },
        ];
        let point = classify_program(&p).unwrap();
        assert_eq!(point.arity, TypeArity::Nyladic);
    }

    #[test]
    fn erasure_lint_flags_same_roots() {
        let store = Arc::new(TermStore::new());
        let g = store.declare("g", 2).unwrap();
        let h = store.declare("h", 1).unwrap();
        let (x1, x2) = (store.var_term(store.var("x1")), store.var_term(store.var("x2")));
        let he = store.app(h, &[LEAF]).unwrap();
        let deep = store.app(g, &[store.app(h, &[x1]).unwrap(), x2]).unwrap();
        let flat = store.app(g, &[x1, x2]).unwrap();
        let mut p = TypeProgram::new(store);
        for params in [deep, flat] {
            p.defs.push(FunctionDef {
                name: "f".into(),
                namespace: Namespace::Primary,
                params: vec![params],
                ret: Ret::Type(he),
            });
        }
        assert_eq!(lint_erasure(&p).len(), 1);
    }
}
