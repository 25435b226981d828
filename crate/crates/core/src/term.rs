//! Ranked trees, terms with variables, substitution, matching and rewrite
//! rules, backed by a content-addressed interning store.
//!
//! Every tree and pattern lives in a [`TermStore`] and is referred to by a
//! [`TermId`] handle. Structurally equal terms always receive the same
//! handle, so equality tests are constant time and heavily shared trees
//! (such as the types produced by self-doubling generics) take space
//! proportional to their number of distinct subtrees.

use std::collections::HashMap;
use std::sync::RwLock;

use thiserror::Error;

/// A symbol of the signature. Symbols have rank >= 1; the leaf is not a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

/// A term variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarId(pub u32);

/// Handle of an interned term. Equal handles mean structurally equal terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermId(pub u32);

/// The unique leaf term (the unit tree, printed `eps`).
pub const LEAF: TermId = TermId(0);

/// Shape of a term node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    /// The universal leaf.
    Leaf,
    /// A variable occurrence.
    Var(VarId),
    /// A symbol applied to exactly `rank` children.
    App(SymbolId, Vec<TermId>),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("symbol `{symbol}` has rank {expected} but was applied to {got} children")]
    RankMismatch { symbol: String, expected: usize, got: usize },
    #[error("symbol `{0}` is already declared with rank {1}")]
    ConflictingRank(String, usize),
    #[error("symbol rank must be at least 1, got {0} for `{1}`")]
    ZeroRank(usize, String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("rewrite right-hand side uses variables missing from the left-hand side")]
    UnboundRhsVariable,
    #[error("rewrite rule must have at least one left-hand pattern")]
    EmptyLhs,
    #[error("`follows` requires accumulating rules (right-hand side not a bare variable)")]
    FollowsExtracting,
    #[error("`follows` requires left-hand sides of depth at most one, got depth {0}")]
    FollowsDeep(u32),
    #[error("reserved name `{0}` may not be declared")]
    ReservedName(String),
}

struct NodeData {
    node: Node,
    depth: u32,
    ground: bool,
}

#[derive(Default)]
struct Inner {
    sym_names: Vec<String>,
    sym_ranks: Vec<usize>,
    sym_index: HashMap<String, SymbolId>,
    var_names: Vec<String>,
    var_index: HashMap<String, VarId>,
    nodes: Vec<NodeData>,
    node_index: HashMap<Node, TermId>,
}

/// Interning store for one signature. Shared by every artifact of a "world"
/// so that automaton storage trees and checker types are comparable by
/// handle. Reads and inserts are safe from multiple threads.
pub struct TermStore {
    inner: RwLock<Inner>,
}

impl Default for TermStore {
    fn default() -> Self {
        Self::new()
    }
}

impl std::fmt::Debug for TermStore {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let inner = self.inner.read().unwrap();
        f.debug_struct("TermStore")
            .field("symbols", &inner.sym_names.len())
            .field("terms", &inner.nodes.len())
            .finish()
    }
}

impl TermStore {
    pub fn new() -> Self {
        let mut inner = Inner::default();
        inner.nodes.push(NodeData { node: Node::Leaf, depth: 0, ground: true });
        inner.node_index.insert(Node::Leaf, LEAF);
        TermStore { inner: RwLock::new(inner) }
    }

    /// Declares a symbol. Re-declaring with the same rank returns the
    /// existing id; conflicting ranks are an error.
    pub fn declare(&self, name: &str, rank: usize) -> Result<SymbolId, TermError> {
        if rank == 0 {
            return Err(TermError::ZeroRank(rank, name.to_string()));
        }
        if name == "eps" {
            return Err(TermError::ReservedName(name.to_string()));
        }
        let mut inner = self.inner.write().unwrap();
        if let Some(&id) = inner.sym_index.get(name) {
            let have = inner.sym_ranks[id.0 as usize];
            if have == rank {
                return Ok(id);
            }
            return Err(TermError::ConflictingRank(name.to_string(), have));
        }
        let id = SymbolId(inner.sym_names.len() as u32);
        inner.sym_names.push(name.to_string());
        inner.sym_ranks.push(rank);
        inner.sym_index.insert(name.to_string(), id);
        Ok(id)
    }

    /// Declares a symbol under `base`, or `base_2`, `base_3`, ... if taken
    /// with a different rank.
    pub fn declare_fresh(&self, base: &str, rank: usize) -> SymbolId {
        if let Ok(id) = self.declare(base, rank) {
            return id;
        }
        let mut n = 2usize;
        loop {
            let name = format!("{base}_{n}");
            if let Ok(id) = self.declare(&name, rank) {
                return id;
            }
            n += 1;
        }
    }

    pub fn symbol(&self, name: &str) -> Option<SymbolId> {
        self.inner.read().unwrap().sym_index.get(name).copied()
    }

    pub fn symbol_name(&self, id: SymbolId) -> String {
        self.inner.read().unwrap().sym_names[id.0 as usize].clone()
    }

    pub fn rank(&self, id: SymbolId) -> usize {
        self.inner.read().unwrap().sym_ranks[id.0 as usize]
    }

    /// All declared symbols in declaration order.
    pub fn symbols(&self) -> Vec<(String, usize)> {
        let inner = self.inner.read().unwrap();
        inner.sym_names.iter().cloned().zip(inner.sym_ranks.iter().copied()).collect()
    }

    pub fn max_rank(&self) -> usize {
        self.inner.read().unwrap().sym_ranks.iter().copied().max().unwrap_or(1)
    }

    pub fn var(&self, name: &str) -> VarId {
        let mut inner = self.inner.write().unwrap();
        if let Some(&id) = inner.var_index.get(name) {
            return id;
        }
        let id = VarId(inner.var_names.len() as u32);
        inner.var_names.push(name.to_string());
        inner.var_index.insert(name.to_string(), id);
        id
    }

    pub fn var_name(&self, id: VarId) -> String {
        self.inner.read().unwrap().var_names[id.0 as usize].clone()
    }

    pub fn leaf(&self) -> TermId {
        LEAF
    }

    pub fn var_term(&self, v: VarId) -> TermId {
        self.intern(Node::Var(v))
    }

    pub fn app(&self, sym: SymbolId, children: &[TermId]) -> Result<TermId, TermError> {
        let rank = self.rank(sym);
        if rank != children.len() {
            return Err(TermError::RankMismatch {
                symbol: self.symbol_name(sym),
                expected: rank,
                got: children.len(),
            });
        }
        Ok(self.intern(Node::App(sym, children.to_vec())))
    }

    fn intern(&self, node: Node) -> TermId {
        {
            let inner = self.inner.read().unwrap();
            if let Some(&id) = inner.node_index.get(&node) {
                return id;
            }
        }
        let mut inner = self.inner.write().unwrap();
        if let Some(&id) = inner.node_index.get(&node) {
            return id;
        }
        let (depth, ground) = match &node {
            Node::Leaf => (0, true),
            Node::Var(_) => (0, false),
            Node::App(_, children) => {
                let mut depth = 0;
                let mut ground = true;
                for &c in children {
                    let d = &inner.nodes[c.0 as usize];
                    depth = depth.max(d.depth);
                    ground &= d.ground;
                }
                (depth + 1, ground)
            }
        };
        let id = TermId(inner.nodes.len() as u32);
        inner.nodes.push(NodeData { node: node.clone(), depth, ground });
        inner.node_index.insert(node, id);
        id
    }

    pub fn node(&self, id: TermId) -> Node {
        self.inner.read().unwrap().nodes[id.0 as usize].node.clone()
    }

    pub fn depth(&self, id: TermId) -> u32 {
        self.inner.read().unwrap().nodes[id.0 as usize].depth
    }

    pub fn is_ground(&self, id: TermId) -> bool {
        self.inner.read().unwrap().nodes[id.0 as usize].ground
    }

    /// Root symbol when the term is a symbol application.
    pub fn root(&self, id: TermId) -> Option<SymbolId> {
        match self.node(id) {
            Node::App(sym, _) => Some(sym),
            _ => None,
        }
    }

    /// Number of interned nodes currently in the store.
    pub fn len(&self) -> usize {
        self.inner.read().unwrap().nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // the leaf is always present
    }

    /// Number of distinct subterms of `id`, the leaf included. With
    /// interning this is exactly the storage cost of the term.
    pub fn distinct_subterms(&self, id: TermId) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![id];
        while let Some(t) = stack.pop() {
            if !seen.insert(t) {
                continue;
            }
            if let Node::App(_, children) = self.node(t) {
                stack.extend(children);
            }
        }
        seen.len()
    }

    /// Variable occurrences in depth-first, left-to-right order (a multiset:
    /// repeated occurrences repeat here).
    pub fn var_occurrences(&self, id: TermId) -> Vec<VarId> {
        let mut out = Vec::new();
        self.collect_vars(id, &mut out);
        out
    }

    fn collect_vars(&self, id: TermId, out: &mut Vec<VarId>) {
        match self.node(id) {
            Node::Leaf => {}
            Node::Var(v) => out.push(v),
            Node::App(_, children) => {
                for c in children {
                    self.collect_vars(c, out);
                }
            }
        }
    }

    /// Distinct variables in first-occurrence order.
    pub fn vars_of(&self, id: TermId) -> Vec<VarId> {
        let mut seen = Vec::new();
        for v in self.var_occurrences(id) {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        seen
    }

    pub fn analyze(&self, id: TermId) -> TermInfo {
        let vars = self.var_occurrences(id);
        let mut distinct = vars.clone();
        distinct.sort();
        distinct.dedup();
        TermInfo {
            depth: self.depth(id),
            linear: distinct.len() == vars.len(),
            grounded: self.is_ground(id),
            vars,
        }
    }

    /// Matches `pattern` against `subject` at the root. Non-linear patterns
    /// require repeated variables to bind structurally equal subterms, which
    /// the interning store decides by handle comparison.
    pub fn match_term(&self, pattern: TermId, subject: TermId) -> Option<Substitution> {
        let mut subst = Substitution::new();
        if self.match_into(pattern, subject, &mut subst) {
            Some(subst)
        } else {
            None
        }
    }

    fn match_into(&self, pattern: TermId, subject: TermId, subst: &mut Substitution) -> bool {
        match self.node(pattern) {
            Node::Var(v) => match subst.get(v) {
                Some(bound) => bound == subject,
                None => {
                    subst.insert(v, subject);
                    true
                }
            },
            Node::Leaf => subject == LEAF,
            Node::App(sym, children) => match self.node(subject) {
                Node::App(sym2, children2) if sym == sym2 => children
                    .iter()
                    .zip(children2.iter())
                    .all(|(&p, &s)| self.match_into(p, s, subst)),
                _ => false,
            },
        }
    }

    /// Matches a multi-pattern against a multi-term with one shared
    /// substitution.
    pub fn match_multi(&self, patterns: &[TermId], subjects: &[TermId]) -> Option<Substitution> {
        if patterns.len() != subjects.len() {
            return None;
        }
        let mut subst = Substitution::new();
        for (&p, &s) in patterns.iter().zip(subjects) {
            if !self.match_into(p, s, &mut subst) {
                return None;
            }
        }
        Some(subst)
    }

    /// Applies a substitution simultaneously; unbound variables remain.
    pub fn apply_subst(&self, term: TermId, subst: &Substitution) -> TermId {
        match self.node(term) {
            Node::Leaf => term,
            Node::Var(v) => subst.get(v).unwrap_or(term),
            Node::App(sym, children) => {
                let mapped: Vec<TermId> =
                    children.iter().map(|&c| self.apply_subst(c, subst)).collect();
                if mapped == children {
                    term
                } else {
                    self.intern(Node::App(sym, mapped))
                }
            }
        }
    }

    /// Renders a term. Pure rank-1 chains use the monadic abbreviation
    /// (`g1 g2 g3` for `g1(g2(g3(eps)))`).
    pub fn display(&self, id: TermId) -> String {
        if let Some(chain) = self.as_chain(id) {
            if chain.0.len() > 1 || (chain.0.len() == 1 && chain.1 == LEAF) {
                let mut parts: Vec<String> =
                    chain.0.iter().map(|&s| self.symbol_name(s)).collect();
                match self.node(chain.1) {
                    Node::Leaf => {}
                    _ => parts.push(self.display(chain.1)),
                }
                return parts.join(" ");
            }
        }
        match self.node(id) {
            Node::Leaf => "eps".to_string(),
            Node::Var(v) => self.var_name(v),
            Node::App(sym, children) => {
                let inner: Vec<String> = children.iter().map(|&c| self.display(c)).collect();
                format!("{}({})", self.symbol_name(sym), inner.join(","))
            }
        }
    }

    /// Decomposes a term into a chain of rank-1 symbols plus a tail (the
    /// tail is the first non-rank-1 node, a variable, or the leaf).
    pub fn as_chain(&self, id: TermId) -> Option<(Vec<SymbolId>, TermId)> {
        let mut syms = Vec::new();
        let mut cur = id;
        loop {
            match self.node(cur) {
                Node::App(sym, children) if children.len() == 1 => {
                    syms.push(sym);
                    cur = children[0];
                }
                _ => break,
            }
        }
        if syms.is_empty() {
            None
        } else {
            Some((syms, cur))
        }
    }

    /// Builds `syms[0](syms[1](...(tail)))`; every symbol must be rank 1.
    pub fn chain(&self, syms: &[SymbolId], tail: TermId) -> Result<TermId, TermError> {
        let mut cur = tail;
        for &sym in syms.iter().rev() {
            cur = self.app(sym, &[cur])?;
        }
        Ok(cur)
    }
}

/// Result of [`TermStore::analyze`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermInfo {
    pub depth: u32,
    pub linear: bool,
    pub grounded: bool,
    /// Occurrence multiset of variables in depth-first order.
    pub vars: Vec<VarId>,
}

/// A mapping from variables to terms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: Vec<(VarId, TermId)>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution { bindings: Vec::new() }
    }

    pub fn get(&self, v: VarId) -> Option<TermId> {
        self.bindings
            .binary_search_by_key(&v, |&(var, _)| var)
            .ok()
            .map(|i| self.bindings[i].1)
    }

    pub fn insert(&mut self, v: VarId, t: TermId) {
        match self.bindings.binary_search_by_key(&v, |&(var, _)| var) {
            Ok(i) => self.bindings[i].1 = t,
            Err(i) => self.bindings.insert(i, (v, t)),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, TermId)> + '_ {
        self.bindings.iter().copied()
    }

    pub fn is_grounded(&self, store: &TermStore) -> bool {
        self.bindings.iter().all(|&(_, t)| store.is_ground(t))
    }
}

/// A rewrite rule `lhs -> rhs`. The left-hand side usually holds a single
/// pattern; forest recognizers use one pattern per child.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RewriteRule {
    pub lhs: Vec<TermId>,
    pub rhs: TermId,
}

impl RewriteRule {
    /// Builds a single-input rule, checking `Vars(rhs) ⊆ Vars(lhs)`.
    pub fn new(store: &TermStore, lhs: TermId, rhs: TermId) -> Result<Self, TermError> {
        Self::new_multi(store, vec![lhs], rhs)
    }

    /// Builds a multi-input rule with a shared variable scope.
    pub fn new_multi(store: &TermStore, lhs: Vec<TermId>, rhs: TermId) -> Result<Self, TermError> {
        if lhs.is_empty() {
            return Err(TermError::EmptyLhs);
        }
        let mut bound: Vec<VarId> = Vec::new();
        for &p in &lhs {
            bound.extend(store.vars_of(p));
        }
        for v in store.vars_of(rhs) {
            if !bound.contains(&v) {
                return Err(TermError::UnboundRhsVariable);
            }
        }
        Ok(RewriteRule { lhs, rhs })
    }

    pub fn single_lhs(&self) -> TermId {
        self.lhs[0]
    }

    /// Depth of a rule is the depth of its (deepest) left-hand pattern.
    pub fn depth(&self, store: &TermStore) -> u32 {
        self.lhs.iter().map(|&p| store.depth(p)).max().unwrap_or(0)
    }

    pub fn is_shallow(&self, store: &TermStore) -> bool {
        self.depth(store) <= 1
    }

    /// Linear iff no variable occurs twice across the whole left-hand side.
    pub fn is_linear(&self, store: &TermStore) -> bool {
        let mut occ = Vec::new();
        for &p in &self.lhs {
            occ.extend(store.var_occurrences(p));
        }
        let mut distinct = occ.clone();
        distinct.sort();
        distinct.dedup();
        distinct.len() == occ.len()
    }

    /// Extracting rules rewrite a compound term to one of its variables;
    /// everything else (including the no-op `x -> x`) is accumulating.
    pub fn is_extracting(&self, store: &TermStore) -> bool {
        matches!(store.node(self.rhs), Node::Var(_))
            && !matches!(store.node(self.single_lhs()), Node::Var(_))
    }

    pub fn is_accumulating(&self, store: &TermStore) -> bool {
        !self.is_extracting(store)
    }

    /// Applies the rule at the root of `subject`.
    pub fn apply(&self, store: &TermStore, subject: TermId) -> Option<TermId> {
        debug_assert_eq!(self.lhs.len(), 1);
        let subst = store.match_term(self.single_lhs(), subject)?;
        Some(store.apply_subst(self.rhs, &subst))
    }

    /// Applies a multi-input rule to one subject per pattern, with a single
    /// shared substitution.
    pub fn apply_multi(&self, store: &TermStore, subjects: &[TermId]) -> Option<TermId> {
        let subst = store.match_multi(&self.lhs, subjects)?;
        Some(store.apply_subst(self.rhs, &subst))
    }

    /// Renames variables to `x1, x2, ...` in first-occurrence order over the
    /// left-hand side. Match sets and rewrite results are preserved.
    pub fn canonicalize(&self, store: &TermStore) -> RewriteRule {
        let mut order: Vec<VarId> = Vec::new();
        for &p in &self.lhs {
            for v in store.vars_of(p) {
                if !order.contains(&v) {
                    order.push(v);
                }
            }
        }
        for v in store.vars_of(self.rhs) {
            if !order.contains(&v) {
                order.push(v); // unreachable for valid rules; kept for safety
            }
        }
        let mut subst = Substitution::new();
        for (i, &v) in order.iter().enumerate() {
            let fresh = store.var(&format!("x{}", i + 1));
            subst.insert(v, store.var_term(fresh));
        }
        RewriteRule {
            lhs: self.lhs.iter().map(|&p| store.apply_subst(p, &subst)).collect(),
            rhs: store.apply_subst(self.rhs, &subst),
        }
    }

    pub fn display(&self, store: &TermStore) -> String {
        let lhs: Vec<String> = self.lhs.iter().map(|&p| store.display(p)).collect();
        format!("{} -> {}", lhs.join(", "), store.display(self.rhs))
    }
}

/// Whether `later` is applicable to every tree produced by a stack whose top
/// rule is `earlier` — decided by comparing the root of `earlier`'s
/// right-hand side with the root of `later`'s left-hand side. Both rules
/// must be accumulating with left-hand depth at most one.
pub fn follows(store: &TermStore, earlier: &RewriteRule, later: &RewriteRule) -> Result<bool, TermError> {
    for rule in [earlier, later] {
        if matches!(store.node(rule.rhs), Node::Var(_)) {
            return Err(TermError::FollowsExtracting);
        }
        let d = store.depth(rule.single_lhs());
        if d > 1 {
            return Err(TermError::FollowsDeep(d));
        }
    }
    Ok(match store.node(later.single_lhs()) {
        Node::Var(_) => true,
        Node::Leaf => earlier.rhs == LEAF,
        Node::App(sym, _) => store.root(earlier.rhs) == Some(sym),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn store() -> TermStore {
        let s = TermStore::new();
        s.declare("g", 2).unwrap();
        s.declare("g0", 1).unwrap();
        s.declare("g1", 1).unwrap();
        s.declare("g2", 2).unwrap();
        s.declare("g3", 3).unwrap();
        s.declare("g4", 1).unwrap();
        s.declare("Succ", 1).unwrap();
        s
    }

    fn unary(s: &TermStore, k: usize) -> TermId {
        let succ = s.symbol("Succ").unwrap();
        let mut t = LEAF;
        for _ in 0..k {
            t = s.app(succ, &[t]).unwrap();
        }
        t
    }

    #[test]
    fn analyze_examples() {
        let s = store();
        let info = s.analyze(LEAF);
        assert_eq!(info, TermInfo { depth: 0, linear: true, grounded: true, vars: vec![] });

        let g = s.symbol("g").unwrap();
        let x = s.var_term(s.var("x"));
        let gxx = s.app(g, &[x, x]).unwrap();
        let info = s.analyze(gxx);
        assert_eq!(info.depth, 1);
        assert!(!info.linear);
        assert!(!info.grounded);
        assert_eq!(info.vars.len(), 2);

        let g1 = s.symbol("g1").unwrap();
        let g1x = s.app(g1, &[x]).unwrap();
        let g1g1x = s.app(g1, &[g1x]).unwrap();
        let info = s.analyze(g1g1x);
        assert_eq!(info.depth, 2);
        assert!(info.linear);
        assert!(!info.grounded);
    }

    #[test]
    fn rank_mismatch_is_rejected() {
        let s = store();
        let g = s.symbol("g").unwrap();
        let err = s.app(g, &[LEAF]).unwrap_err();
        assert!(matches!(err, TermError::RankMismatch { .. }));
    }

    #[test]
    fn match_decomposes_structurally() {
        let s = store();
        let g = s.symbol("g").unwrap();
        let x1 = s.var("x1");
        let x2 = s.var("x2");
        let x3 = s.var("x3");
        // pattern g(x1, g(x2, x3))
        let pat = s
            .app(g, &[s.var_term(x1), s.app(g, &[s.var_term(x2), s.var_term(x3)]).unwrap()])
            .unwrap();
        // subject g(eps, g(eps, g(eps, eps)))
        let gee = s.app(g, &[LEAF, LEAF]).unwrap();
        let subj = s.app(g, &[LEAF, s.app(g, &[LEAF, gee]).unwrap()]).unwrap();
        let subst = s.match_term(pat, subj).unwrap();
        assert_eq!(subst.get(x1), Some(LEAF));
        assert_eq!(subst.get(x2), Some(LEAF));
        assert_eq!(subst.get(x3), Some(gee));
        assert_eq!(s.apply_subst(pat, &subst), subj);
    }

    #[test]
    fn atomic_pattern_matches_everything() {
        let s = store();
        let x = s.var("x");
        let t = s.app(s.symbol("g").unwrap(), &[LEAF, LEAF]).unwrap();
        let subst = s.match_term(s.var_term(x), t).unwrap();
        assert_eq!(subst.get(x), Some(t));
    }

    #[test]
    fn non_linear_match_compares_handles() {
        let s = store();
        let g = s.symbol("g").unwrap();
        let x = s.var("x");
        let pat = s.app(g, &[s.var_term(x), s.var_term(x)]).unwrap();
        let u7 = unary(&s, 7);
        let u8 = unary(&s, 8);
        let u9 = unary(&s, 9);
        assert!(s.match_term(pat, s.app(g, &[u7, u8]).unwrap()).is_none());
        let subst = s.match_term(pat, s.app(g, &[u9, u9]).unwrap()).unwrap();
        assert_eq!(subst.get(x), Some(u9));
    }

    #[test]
    fn substitution_is_simultaneous() {
        let s = store();
        let g3 = s.symbol("g3").unwrap();
        let g1 = s.symbol("g1").unwrap();
        let (x1, x2, x3) = (s.var("x1"), s.var("x2"), s.var("x3"));
        let term = s.app(g3, &[s.var_term(x1), s.var_term(x2), s.var_term(x3)]).unwrap();
        let mut subst = Substitution::new();
        subst.insert(x1, s.var_term(x2));
        subst.insert(x2, s.app(g1, &[s.var_term(x1)]).unwrap());
        subst.insert(x3, LEAF);
        let out = s.apply_subst(term, &subst);
        let expect = s
            .app(g3, &[s.var_term(x2), s.app(g1, &[s.var_term(x1)]).unwrap(), LEAF])
            .unwrap();
        assert_eq!(out, expect);

        // Renaming swap: g(x1,x2)/{x1->x2, x2->x1} = g(x2,x1).
        let g = s.symbol("g").unwrap();
        let t = s.app(g, &[s.var_term(x1), s.var_term(x2)]).unwrap();
        let mut swap = Substitution::new();
        swap.insert(x1, s.var_term(x2));
        swap.insert(x2, s.var_term(x1));
        let swapped = s.app(g, &[s.var_term(x2), s.var_term(x1)]).unwrap();
        assert_eq!(s.apply_subst(t, &swap), swapped);
    }

    #[test]
    fn empty_substitution_is_identity() {
        let s = store();
        let g = s.symbol("g").unwrap();
        let x1 = s.var("x1");
        let t = s.app(g, &[s.var_term(x1), LEAF]).unwrap();
        assert_eq!(s.apply_subst(t, &Substitution::new()), t);
    }

    #[test]
    fn monadic_pop_push_rewrite() {
        let s = store();
        let g1 = s.symbol("g1").unwrap();
        let g2 = s.symbol("g2").unwrap();
        // g2 here is rank 2; use fresh rank-1 symbols for the stack view.
        let a = s.declare("sa", 1).unwrap();
        let b = s.declare("sb", 1).unwrap();
        let c = s.declare("sc", 1).unwrap();
        let x = s.var_term(s.var("x"));
        // sa(sb(x)) -> sc(x): pop two symbols, push one.
        let lhs = s.app(a, &[s.app(b, &[x]).unwrap()]).unwrap();
        let rhs = s.app(c, &[x]).unwrap();
        let rule = RewriteRule::new(&s, lhs, rhs).unwrap();
        let g4 = s.symbol("g4").unwrap();
        let subj = s
            .app(a, &[s.app(b, &[s.app(g4, &[LEAF]).unwrap()]).unwrap()])
            .unwrap();
        let out = rule.apply(&s, subj).unwrap();
        assert_eq!(out, s.app(c, &[s.app(g4, &[LEAF]).unwrap()]).unwrap());
        let _ = (g1, g2);
    }

    #[test]
    fn noop_rule_and_not_applicable() {
        let s = store();
        let x = s.var_term(s.var("x"));
        let noop = RewriteRule::new(&s, x, x).unwrap();
        let t = s.app(s.symbol("g").unwrap(), &[LEAF, LEAF]).unwrap();
        assert_eq!(noop.apply(&s, t), Some(t));
        assert!(noop.is_accumulating(&s));

        let g1 = s.symbol("g1").unwrap();
        let lhs = s.app(g1, &[x]).unwrap();
        let rule = RewriteRule::new(&s, lhs, x).unwrap();
        assert!(rule.is_extracting(&s));
        assert_eq!(rule.apply(&s, LEAF), None);
    }

    #[test]
    fn rho6_example_rewrite() {
        let s = store();
        let g2 = s.symbol("g2").unwrap();
        let g3 = s.symbol("g3").unwrap();
        let g1 = s.symbol("g1").unwrap();
        let g0 = s.symbol("g0").unwrap();
        let (x1, x2) = (s.var_term(s.var("x1")), s.var_term(s.var("x2")));
        let g0e = s.app(g0, &[LEAF]).unwrap();
        // g2(x1,x2) -> g3(x2, g1(x1), g0)
        let lhs = s.app(g2, &[x1, x2]).unwrap();
        let rhs = s.app(g3, &[x2, s.app(g1, &[x1]).unwrap(), g0e]).unwrap();
        let rule = RewriteRule::new(&s, lhs, rhs).unwrap();
        let subj = s.app(g2, &[g0e, g0e]).unwrap();
        let out = rule.apply(&s, subj).unwrap();
        let expect = s.app(g3, &[g0e, s.app(g1, &[g0e]).unwrap(), g0e]).unwrap();
        assert_eq!(out, expect);
    }

    #[test]
    fn invalid_rule_rejected() {
        let s = store();
        let x = s.var_term(s.var("x"));
        let y = s.var_term(s.var("y"));
        let g1 = s.symbol("g1").unwrap();
        let lhs = s.app(g1, &[x]).unwrap();
        let rhs = s.app(g1, &[y]).unwrap();
        assert_eq!(RewriteRule::new(&s, lhs, rhs).unwrap_err(), TermError::UnboundRhsVariable);
    }

    #[test]
    fn multi_rewrite_shares_substitution() {
        let s = store();
        let g = s.symbol("g").unwrap();
        let (x1, x2) = (s.var_term(s.var("x1")), s.var_term(s.var("x2")));
        let pair = RewriteRule::new_multi(&s, vec![x1, x2], s.app(g, &[x1, x2]).unwrap()).unwrap();
        assert_eq!(pair.apply_multi(&s, &[LEAF, LEAF]), Some(s.app(g, &[LEAF, LEAF]).unwrap()));

        let x = s.var_term(s.var("x"));
        let same = RewriteRule::new_multi(&s, vec![x, x], x).unwrap();
        let u2 = unary(&s, 2);
        let u3 = unary(&s, 3);
        assert_eq!(same.apply_multi(&s, &[u2, u3]), None);
        assert_eq!(same.apply_multi(&s, &[u2, u2]), Some(u2));
    }

    #[test]
    fn canonicalize_first_occurrence_order() {
        let s = store();
        let g2 = s.symbol("g2").unwrap();
        let (x4, x5) = (s.var_term(s.var("x4")), s.var_term(s.var("x5")));
        // g2(x5, g2(x4, x5)) -> g2(x4, x5)
        let lhs = s.app(g2, &[x5, s.app(g2, &[x4, x5]).unwrap()]).unwrap();
        let rhs = s.app(g2, &[x4, x5]).unwrap();
        let rule = RewriteRule::new(&s, lhs, rhs).unwrap();
        let canon = rule.canonicalize(&s);
        let (x1, x2) = (s.var_term(s.var("x1")), s.var_term(s.var("x2")));
        let c_lhs = s.app(g2, &[x1, s.app(g2, &[x2, x1]).unwrap()]).unwrap();
        let c_rhs = s.app(g2, &[x2, x1]).unwrap();
        assert_eq!(canon.lhs, vec![c_lhs]);
        assert_eq!(canon.rhs, c_rhs);
        // Fixpoint.
        assert_eq!(canon.canonicalize(&s), canon);
        // Single variable.
        let x7 = s.var_term(s.var("x7"));
        let r = RewriteRule::new(&s, x7, x7).unwrap().canonicalize(&s);
        assert_eq!(r.lhs, vec![x1]);
        assert_eq!(r.rhs, x1);
    }

    #[test]
    fn follows_by_root_comparison() {
        let s = store();
        let g0 = s.symbol("g0").unwrap();
        let g1 = s.symbol("g1").unwrap();
        let g2 = s.symbol("g2").unwrap();
        let g3 = s.symbol("g3").unwrap();
        let (x1, x2, x3) = (
            s.var_term(s.var("x1")),
            s.var_term(s.var("x2")),
            s.var_term(s.var("x3")),
        );
        let g0e = s.app(g0, &[LEAF]).unwrap();
        // rho4 = g3(x1,x2,x3) -> g2(g2(x2,x1), x1)
        let rho4 = RewriteRule::new(
            &s,
            s.app(g3, &[x1, x2, x3]).unwrap(),
            s.app(g2, &[s.app(g2, &[x2, x1]).unwrap(), x1]).unwrap(),
        )
        .unwrap();
        // rho6 = g2(x1,x2) -> g3(x2, g1(x1), g0)
        let rho6 = RewriteRule::new(
            &s,
            s.app(g2, &[x1, x2]).unwrap(),
            s.app(g3, &[x2, s.app(g1, &[x1]).unwrap(), g0e]).unwrap(),
        )
        .unwrap();
        assert!(follows(&s, &rho4, &rho6).unwrap());
        assert!(follows(&s, &rho6, &rho4).unwrap());
        assert!(!follows(&s, &rho6, &rho6).unwrap());
    }

    #[test]
    fn follows_preconditions() {
        let s = store();
        let g1 = s.symbol("g1").unwrap();
        let x = s.var_term(s.var("x"));
        let acc = RewriteRule::new(&s, s.app(g1, &[x]).unwrap(), s.app(g1, &[x]).unwrap()).unwrap();
        let extracting = RewriteRule::new(&s, s.app(g1, &[x]).unwrap(), x).unwrap();
        assert_eq!(follows(&s, &extracting, &acc).unwrap_err(), TermError::FollowsExtracting);
        let deep_lhs = s.app(g1, &[s.app(g1, &[x]).unwrap()]).unwrap();
        let deep = RewriteRule::new(&s, deep_lhs, s.app(g1, &[x]).unwrap()).unwrap();
        assert_eq!(follows(&s, &deep, &acc).unwrap_err(), TermError::FollowsDeep(2));
    }

    #[test]
    fn interning_shares_structure() {
        let s = store();
        let g = s.symbol("g").unwrap();
        let a = s.app(g, &[LEAF, LEAF]).unwrap();
        let b = s.app(g, &[LEAF, LEAF]).unwrap();
        assert_eq!(a, b);

        let u2 = unary(&s, 2);
        let t = s.app(g, &[u2, u2]).unwrap();
        // distinct subterms: eps, Succ(eps), Succ(Succ(eps)), g(U2,U2)
        assert_eq!(s.distinct_subterms(t), 4);
    }

    #[test]
    fn doubling_type_stays_linear_in_size() {
        let s = store();
        let c = s.declare("C", 2).unwrap();
        let (x1, x2) = (s.var_term(s.var("x1")), s.var_term(s.var("x2")));
        // C(x1,x2) -> C(C(x2,x1), C(x1,x2))
        let rule = RewriteRule::new(
            &s,
            s.app(c, &[x1, x2]).unwrap(),
            s.app(c, &[s.app(c, &[x2, x1]).unwrap(), s.app(c, &[x1, x2]).unwrap()]).unwrap(),
        )
        .unwrap();
        let mut t = s.app(c, &[LEAF, LEAF]).unwrap();
        for _ in 0..32 {
            t = rule.apply(&s, t).unwrap();
        }
        assert!(s.distinct_subterms(t) <= 2 * 32 + 2);
    }
}
