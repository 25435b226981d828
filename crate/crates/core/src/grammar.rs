//! Context-free grammars, Greibach normal form conversion, a CYK membership
//! oracle, and the encoding of GNF grammars as overloaded monadic type
//! definitions.
//!
//! Grammars follow the quadruple convention with the unit symbol as start:
//! rules derive either from the start or from a variable, and sentential
//! forms mix terminals, variables and (in raw grammars) the start symbol.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::automata::Frame;
use crate::term::{TermStore, LEAF};
use crate::typesys::{Expr, FunctionDef, Mode, Namespace, Ret, TypeProgram};

#[derive(Debug, Error)]
pub enum GrammarError {
    #[error("`$` is reserved and may not appear in a grammar alphabet")]
    ReservedDollar,
    #[error("grammar is not in Greibach normal form: {0}")]
    NotGnf(String),
    #[error(transparent)]
    Term(#[from] crate::term::TermError),
    #[error(transparent)]
    Check(#[from] crate::typesys::CheckError),
}

/// One symbol of a sentential form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CfgSym {
    /// Index into `terminals`.
    T(usize),
    /// Index into `variables`.
    V(usize),
    /// The start symbol (allowed in right-hand sides of raw grammars only).
    Start,
}

/// A derivation rule: from the start (`lhs == None`) or a variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfgRule {
    pub lhs: Option<usize>,
    pub rhs: Vec<CfgSym>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Cfg {
    pub name: Option<String>,
    pub terminals: Vec<String>,
    pub variables: Vec<String>,
    pub rules: Vec<CfgRule>,
}

impl Cfg {
    pub fn terminal(&self, name: &str) -> Option<usize> {
        self.terminals.iter().position(|t| t == name)
    }

    fn fresh_variable(&mut self, base: &str) -> usize {
        let mut name = base.to_string();
        let mut n = 1;
        while self.variables.contains(&name) || self.terminals.contains(&name) {
            n += 1;
            name = format!("{base}{n}");
        }
        self.variables.push(name);
        self.variables.len() - 1
    }

    /// The three Greibach forms: `γ -> σ𝛄`, `𝛜 -> σ𝛄`, or `𝛜 -> ε`.
    pub fn is_gnf(&self) -> bool {
        self.rules.iter().all(|rule| match rule.rhs.split_first() {
            None => rule.lhs.is_none(),
            Some((CfgSym::T(_), tail)) => tail.iter().all(|s| matches!(s, CfgSym::V(_))),
            Some(_) => false,
        })
    }

    /// Words derivable from the start, up to `max_len`, by CYK sweep in
    /// length-lexicographic order.
    pub fn enumerate_words(&self, max_len: usize) -> Vec<Vec<String>> {
        let cyk = Cyk::new(self);
        crate::automata::words_up_to(&self.terminals, max_len)
            .into_iter()
            .filter(|w| cyk.accepts_names(self, w))
            .collect()
    }
}

/// Independent membership oracle: binarized chart parsing (CYK with unit
/// closure), untouched by the automata and type-checker paths.
pub struct Cyk {
    /// Nonterminal count; id 0 is the start.
    nts: usize,
    /// A -> a: per terminal, the nonterminals deriving it in one step.
    term_rules: Vec<Vec<usize>>,
    /// A -> B C.
    bin_rules: Vec<(usize, usize, usize)>,
    /// Transitive unit reachability: unit[a] contains b if a =>* b by unit rules.
    unit_from: Vec<Vec<usize>>,
    nullable_start: bool,
}

impl Cyk {
    pub fn new(cfg: &Cfg) -> Cyk {
        // Nonterminals: 0 = start, 1.. = variables, then fresh ones.
        let base = 1 + cfg.variables.len();
        let mut next = base;
        let mut term_rules: Vec<Vec<usize>> = vec![Vec::new(); cfg.terminals.len()];
        let mut bin_rules = Vec::new();
        let mut unit_edges: Vec<(usize, usize)> = Vec::new();

        // Nullable set over original symbols.
        let sym_id = |s: &CfgSym| match s {
            CfgSym::Start => 0,
            CfgSym::V(v) => 1 + v,
            CfgSym::T(_) => usize::MAX,
        };
        let mut nullable: HashSet<usize> = HashSet::new();
        loop {
            let mut changed = false;
            for rule in &cfg.rules {
                let lhs = rule.lhs.map(|v| 1 + v).unwrap_or(0);
                if nullable.contains(&lhs) {
                    continue;
                }
                let all = rule.rhs.iter().all(|s| match s {
                    CfgSym::T(_) => false,
                    other => nullable.contains(&sym_id(other)),
                });
                if all {
                    nullable.insert(lhs);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }

        // For every rule, expand nullable occurrences, wrap terminals, and
        // binarize.
        let mut terminal_proxy: HashMap<usize, usize> = HashMap::new();
        for rule in &cfg.rules {
            let lhs = rule.lhs.map(|v| 1 + v).unwrap_or(0);
            // All subsets of nullable positions removed (bounded: desk-scale
            // grammars keep right-hand sides short).
            let positions: Vec<usize> = (0..rule.rhs.len())
                .filter(|&i| matches!(rule.rhs[i], CfgSym::T(_)).eq(&false) && nullable.contains(&sym_id(&rule.rhs[i])))
                .collect();
            let subsets = 1usize << positions.len().min(16);
            let mut seen_variants: HashSet<Vec<usize>> = HashSet::new();
            for mask in 0..subsets {
                let dropped: HashSet<usize> = positions
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| mask & (1 << j) != 0)
                    .map(|(_, &i)| i)
                    .collect();
                let mut symbols: Vec<usize> = Vec::new();
                for (i, s) in rule.rhs.iter().enumerate() {
                    if dropped.contains(&i) {
                        continue;
                    }
                    let id = match s {
                        CfgSym::T(t) => *terminal_proxy.entry(*t).or_insert_with(|| {
                            let id = next;
                            next += 1;
                            term_rules[*t].push(id);
                            id
                        }),
                        other => sym_id(other),
                    };
                    symbols.push(id);
                }
                if !seen_variants.insert(symbols.clone()) {
                    continue;
                }
                match symbols.len() {
                    0 => {} // handled via nullable_start
                    1 => unit_edges.push((lhs, symbols[0])),
                    _ => {
                        // Left-fold binarization.
                        let mut rest = symbols[symbols.len() - 1];
                        for i in (1..symbols.len() - 1).rev() {
                            let fresh = next;
                            next += 1;
                            bin_rules.push((fresh, symbols[i], rest));
                            rest = fresh;
                        }
                        bin_rules.push((lhs, symbols[0], rest));
                    }
                }
            }
        }

        // Unit closure (a =>* b).
        let mut unit_from: Vec<Vec<usize>> = vec![Vec::new(); next];
        for i in 0..next {
            let mut reach: HashSet<usize> = HashSet::new();
            let mut stack = vec![i];
            while let Some(a) = stack.pop() {
                for &(x, y) in &unit_edges {
                    if x == a && reach.insert(y) {
                        stack.push(y);
                    }
                }
            }
            unit_from[i] = reach.into_iter().collect();
        }

        Cyk {
            nts: next,
            term_rules,
            bin_rules,
            unit_from,
            nullable_start: nullable.contains(&0),
        }
    }

    fn close(&self, set: &mut HashSet<usize>) {
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(b) = stack.pop() {
            for a in 0..self.nts {
                if self.unit_from[a].contains(&b) && set.insert(a) {
                    stack.push(a);
                }
            }
        }
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        if word.is_empty() {
            return self.nullable_start;
        }
        let n = word.len();
        // chart[i][j] = nonterminals deriving word[i..=i+j]
        let mut chart: Vec<Vec<HashSet<usize>>> = vec![vec![HashSet::new(); n]; n];
        for (i, &t) in word.iter().enumerate() {
            let mut set: HashSet<usize> = self.term_rules.get(t).cloned().unwrap_or_default().into_iter().collect();
            self.close(&mut set);
            chart[i][0] = set;
        }
        for span in 2..=n {
            for i in 0..=n - span {
                let mut set = HashSet::new();
                for split in 1..span {
                    for &(a, b, c) in &self.bin_rules {
                        if chart[i][split - 1].contains(&b)
                            && chart[i + split][span - split - 1].contains(&c)
                        {
                            set.insert(a);
                        }
                    }
                }
                self.close(&mut set);
                chart[i][span - 1] = set;
            }
        }
        chart[0][n - 1].contains(&0)
    }

    pub fn accepts_names(&self, cfg: &Cfg, word: &[String]) -> bool {
        let mut ids = Vec::with_capacity(word.len());
        for l in word {
            match cfg.terminal(l) {
                Some(t) => ids.push(t),
                None => return false,
            }
        }
        self.accepts(&ids)
    }
}

/// CYK membership for one word.
pub fn cyk_membership(cfg: &Cfg, word: &[String]) -> bool {
    Cyk::new(cfg).accepts_names(cfg, word)
}

// ---------------------------------------------------------------------------
// Greibach normal form
// ---------------------------------------------------------------------------

/// Converts a grammar to Greibach normal form through the standard
/// pipeline: start refresh, ε-elimination (the start's ε-rule excepted),
/// unit elimination, useless-symbol removal, left-recursion removal, and
/// terminal-prefix substitution.
pub fn to_gnf(cfg: &Cfg) -> Cfg {
    let mut g = cfg.clone();

    // 1. Keep the start off right-hand sides.
    if g.rules.iter().any(|r| r.rhs.contains(&CfgSym::Start)) {
        let v = g.fresh_variable("S");
        for rule in &mut g.rules {
            for s in &mut rule.rhs {
                if *s == CfgSym::Start {
                    *s = CfgSym::V(v);
                }
            }
        }
        let start_rules: Vec<CfgRule> = g
            .rules
            .iter()
            .filter(|r| r.lhs.is_none())
            .map(|r| CfgRule { lhs: Some(v), rhs: r.rhs.clone() })
            .collect();
        g.rules.extend(start_rules);
    }

    // 2. ε-elimination.
    let mut nullable: HashSet<Option<usize>> = HashSet::new();
    loop {
        let mut changed = false;
        for rule in &g.rules {
            if nullable.contains(&rule.lhs) {
                continue;
            }
            let all = rule.rhs.iter().all(|s| match s {
                CfgSym::V(v) => nullable.contains(&Some(*v)),
                _ => false,
            });
            if all {
                nullable.insert(rule.lhs);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut expanded: Vec<CfgRule> = Vec::new();
    let mut seen: HashSet<(Option<usize>, Vec<CfgSym>)> = HashSet::new();
    for rule in &g.rules {
        let positions: Vec<usize> = (0..rule.rhs.len())
            .filter(|&i| match rule.rhs[i] {
                CfgSym::V(v) => nullable.contains(&Some(v)),
                _ => false,
            })
            .collect();
        for mask in 0..(1usize << positions.len().min(16)) {
            let dropped: HashSet<usize> = positions
                .iter()
                .enumerate()
                .filter(|&(j, _)| mask & (1 << j) != 0)
                .map(|(_, &i)| i)
                .collect();
            let rhs: Vec<CfgSym> = rule
                .rhs
                .iter()
                .enumerate()
                .filter(|(i, _)| !dropped.contains(i))
                .map(|(_, &s)| s)
                .collect();
            if rhs.is_empty() && rule.lhs.is_some() {
                continue;
            }
            if rhs.is_empty() && rule.lhs.is_none() && !nullable.contains(&None) {
                continue;
            }
            if seen.insert((rule.lhs, rhs.clone())) {
                expanded.push(CfgRule { lhs: rule.lhs, rhs });
            }
        }
    }
    // Exactly one ε-rule, present iff the start is nullable.
    expanded.retain(|r| !(r.lhs.is_none() && r.rhs.is_empty()));
    if nullable.contains(&None) {
        expanded.push(CfgRule { lhs: None, rhs: vec![] });
    }
    g.rules = expanded;

    // 3. Unit elimination.
    let mut out: Vec<CfgRule> = Vec::new();
    let mut seen: HashSet<(Option<usize>, Vec<CfgSym>)> = HashSet::new();
    for lhs in std::iter::once(None).chain((0..g.variables.len()).map(Some)) {
        // Unit closure of lhs.
        let mut reach: HashSet<usize> = HashSet::new();
        let mut stack: Vec<usize> = g
            .rules
            .iter()
            .filter(|r| r.lhs == lhs)
            .filter_map(|r| match r.rhs.as_slice() {
                [CfgSym::V(v)] => Some(*v),
                _ => None,
            })
            .collect();
        while let Some(v) = stack.pop() {
            if reach.insert(v) {
                for r in g.rules.iter().filter(|r| r.lhs == Some(v)) {
                    if let [CfgSym::V(v2)] = r.rhs.as_slice() {
                        stack.push(*v2);
                    }
                }
            }
        }
        for rule in &g.rules {
            let from_self = rule.lhs == lhs;
            let from_unit = matches!(rule.lhs, Some(v) if reach.contains(&v));
            if !(from_self || from_unit) {
                continue;
            }
            if matches!(rule.rhs.as_slice(), [CfgSym::V(_)]) {
                continue;
            }
            if rule.rhs.is_empty() && lhs.is_some() {
                continue;
            }
            if seen.insert((lhs, rule.rhs.clone())) {
                out.push(CfgRule { lhs, rhs: rule.rhs.clone() });
            }
        }
    }
    g.rules = out;

    // 4. Remove non-generating and unreachable variables.
    prune_useless(&mut g);

    // 5. Left-recursion removal over an arbitrary variable order.
    let n = g.variables.len();
    for i in 0..n {
        // Substitute V_j-initial rules for j < i.
        loop {
            let mut changed = false;
            let rules = g.rules.clone();
            let mut next_rules = Vec::new();
            for rule in rules {
                if rule.lhs == Some(i) {
                    if let Some(CfgSym::V(j)) = rule.rhs.first().copied() {
                        if j < i {
                            for sub in g.rules.iter().filter(|r| r.lhs == Some(j)) {
                                let mut rhs = sub.rhs.clone();
                                rhs.extend_from_slice(&rule.rhs[1..]);
                                next_rules.push(CfgRule { lhs: Some(i), rhs });
                            }
                            changed = true;
                            continue;
                        }
                    }
                }
                next_rules.push(rule);
            }
            dedup_rules(&mut next_rules);
            g.rules = next_rules;
            if !changed {
                break;
            }
        }
        // Remove immediate left recursion V_i -> V_i α.
        let (recursive, other): (Vec<CfgRule>, Vec<CfgRule>) = g
            .rules
            .iter()
            .cloned()
            .partition(|r| r.lhs == Some(i) && r.rhs.first() == Some(&CfgSym::V(i)));
        if !recursive.is_empty() {
            let z = g.fresh_variable(&format!("Z{}", i + 1));
            let mut rules: Vec<CfgRule> =
                other.iter().filter(|r| r.lhs != Some(i)).cloned().collect();
            for beta in other.iter().filter(|r| r.lhs == Some(i)) {
                rules.push(beta.clone());
                let mut rhs = beta.rhs.clone();
                rhs.push(CfgSym::V(z));
                rules.push(CfgRule { lhs: Some(i), rhs });
            }
            for alpha in &recursive {
                let tail: Vec<CfgSym> = alpha.rhs[1..].to_vec();
                rules.push(CfgRule { lhs: Some(z), rhs: tail.clone() });
                let mut rhs = tail;
                rhs.push(CfgSym::V(z));
                rules.push(CfgRule { lhs: Some(z), rhs });
            }
            dedup_rules(&mut rules);
            g.rules = rules;
        }
    }

    // 6. Back-substitution until every rule starts with a terminal.
    loop {
        let mut changed = false;
        let rules = g.rules.clone();
        let mut next_rules = Vec::new();
        for rule in rules {
            if let Some(CfgSym::V(j)) = rule.rhs.first().copied() {
                for sub in g.rules.iter().filter(|r| r.lhs == Some(j)) {
                    if sub.rhs.first() == Some(&CfgSym::V(j)) {
                        continue; // self-loop survives only in dead variables
                    }
                    let mut rhs = sub.rhs.clone();
                    rhs.extend_from_slice(&rule.rhs[1..]);
                    next_rules.push(CfgRule { lhs: rule.lhs, rhs });
                }
                changed = true;
            } else {
                next_rules.push(rule);
            }
        }
        dedup_rules(&mut next_rules);
        g.rules = next_rules;
        if !changed {
            break;
        }
    }

    // 7. Wrap terminals occurring past the first position.
    let mut proxies: HashMap<usize, usize> = HashMap::new();
    let rules = g.rules.clone();
    let mut next_rules = Vec::new();
    let mut proxy_rules = Vec::new();
    for mut rule in rules {
        for s in rule.rhs.iter_mut().skip(1) {
            if let CfgSym::T(t) = *s {
                let v = *proxies.entry(t).or_insert_with(|| {
                    let name = format!("T_{}", g.terminals[t]);
                    let mut name = name;
                    while g.variables.contains(&name) {
                        name.push('_');
                    }
                    g.variables.push(name);
                    proxy_rules.push(CfgRule {
                        lhs: Some(g.variables.len() - 1),
                        rhs: vec![CfgSym::T(t)],
                    });
                    g.variables.len() - 1
                });
                *s = CfgSym::V(v);
            }
        }
        next_rules.push(rule);
    }
    next_rules.extend(proxy_rules);
    g.rules = next_rules;

    prune_useless(&mut g);
    debug_assert!(g.is_gnf(), "pipeline output must satisfy the GNF predicate");
    g
}

fn dedup_rules(rules: &mut Vec<CfgRule>) {
    let mut seen = HashSet::new();
    rules.retain(|r| seen.insert((r.lhs, r.rhs.clone())));
}

fn prune_useless(g: &mut Cfg) {
    // Generating variables.
    let mut generating: HashSet<usize> = HashSet::new();
    loop {
        let mut changed = false;
        for rule in &g.rules {
            if let Some(v) = rule.lhs {
                if generating.contains(&v) {
                    continue;
                }
                let ok = rule.rhs.iter().all(|s| match s {
                    CfgSym::T(_) => true,
                    CfgSym::V(v2) => generating.contains(v2),
                    CfgSym::Start => false,
                });
                if ok {
                    generating.insert(v);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    g.rules.retain(|r| {
        let lhs_ok = r.lhs.map(|v| generating.contains(&v)).unwrap_or(true);
        lhs_ok
            && r.rhs.iter().all(|s| match s {
                CfgSym::V(v) => generating.contains(v),
                _ => true,
            })
    });
    // Reachable variables.
    let mut reachable: HashSet<usize> = HashSet::new();
    let mut stack: Vec<Option<usize>> = vec![None];
    let mut visited: HashSet<Option<usize>> = HashSet::new();
    while let Some(lhs) = stack.pop() {
        if !visited.insert(lhs) {
            continue;
        }
        for rule in g.rules.iter().filter(|r| r.lhs == lhs) {
            for s in &rule.rhs {
                if let CfgSym::V(v) = s {
                    reachable.insert(*v);
                    stack.push(Some(*v));
                }
            }
        }
    }
    g.rules.retain(|r| r.lhs.map(|v| reachable.contains(&v)).unwrap_or(true));
    // Compact variable indices.
    let kept: Vec<usize> = (0..g.variables.len())
        .filter(|v| reachable.contains(v) && generating.contains(v))
        .collect();
    let remap: HashMap<usize, usize> =
        kept.iter().enumerate().map(|(new, &old)| (old, new)).collect();
    g.variables = kept.iter().map(|&v| g.variables[v].clone()).collect();
    for rule in &mut g.rules {
        if let Some(v) = rule.lhs.as_mut() {
            *v = remap[v];
        }
        for s in &mut rule.rhs {
            if let CfgSym::V(v) = s {
                *v = remap[v];
            }
        }
    }
}

// ---------------------------------------------------------------------------
// GNF → overloaded monadic type definitions
// ---------------------------------------------------------------------------

/// Encodes a GNF grammar as a monadic program checked under
/// eventually-one-type overloading: `w ∈ L(G)` iff the chain
/// `eps.σ1.….σn.$` types to the unit.
pub fn gnf_to_program(cfg: &Cfg) -> Result<TypeProgram, GrammarError> {
    if !cfg.is_gnf() {
        return Err(GrammarError::NotGnf("run to_gnf first".to_string()));
    }
    if cfg.terminals.iter().any(|t| t == "$") || cfg.variables.iter().any(|v| v == "$") {
        return Err(GrammarError::ReservedDollar);
    }
    let store = Arc::new(TermStore::new());
    let mut var_syms = Vec::with_capacity(cfg.variables.len());
    for v in &cfg.variables {
        var_syms.push(store.declare(v, 1)?);
    }
    let dollar = store.declare("$", 1)?;
    let dollar_leaf = store.app(dollar, &[LEAF])?;

    let mut program = TypeProgram::new(store.clone());
    program.name = cfg.name.clone();
    program.mode = Mode::EventuallyOne;
    program.frame = Frame { begin: None, end: Some("$".to_string()) };

    let mut need_dollar_on_unit = false;
    let x = store.var_term(store.var("x1"));

    for rule in &cfg.rules {
        match (rule.lhs, rule.rhs.split_first()) {
            // 𝛜 -> ε : the empty word is in the language.
            (None, None) => need_dollar_on_unit = true,
            // 𝛜 -> σ𝛄 : initialization.
            (None, Some((CfgSym::T(t), tail))) => {
                let mut chain = dollar_leaf;
                for sym in tail.iter().rev() {
                    if let CfgSym::V(v) = sym {
                        chain = store.app(var_syms[*v], &[chain])?;
                    }
                }
                program.defs.push(FunctionDef {
                    name: cfg.terminals[*t].clone(),
                    namespace: Namespace::Primary,
                    params: vec![LEAF],
                    ret: Ret::Type(chain),
                });
            }
            // γ -> σ𝛄 : usual form.
            (Some(v), Some((CfgSym::T(t), tail))) => {
                let mut chain = x;
                for sym in tail.iter().rev() {
                    if let CfgSym::V(v2) = sym {
                        chain = store.app(var_syms[*v2], &[chain])?;
                    }
                }
                program.defs.push(FunctionDef {
                    name: cfg.terminals[*t].clone(),
                    namespace: Namespace::Primary,
                    params: vec![store.app(var_syms[v], &[x])?],
                    ret: Ret::Type(chain),
                });
            }
            _ => return Err(GrammarError::NotGnf("rule outside the three forms".to_string())),
        }
    }
    // The terminator always closes completed derivations; with no
    // derivations the pattern is simply unreachable.
    program.defs.push(FunctionDef {
        name: "$".to_string(),
        namespace: Namespace::Primary,
        params: vec![dollar_leaf],
        ret: Ret::Type(LEAF),
    });
    if need_dollar_on_unit {
        program.defs.push(FunctionDef {
            name: "$".to_string(),
            namespace: Namespace::Primary,
            params: vec![LEAF],
            ret: Ret::Type(LEAF),
        });
    }
    program.validate()?;
    Ok(program)
}

/// All leftmost-derivation frontiers `𝛄` with `start =>* σ1…σi 𝛄` for the
/// given prefix, on a GNF grammar. Each GNF step consumes one terminal, so
/// breadth-first derivation terminates after `prefix` many steps.
pub fn lmd_frontiers(cfg: &Cfg, prefix: &[String]) -> BTreeSet<Vec<usize>> {
    assert!(cfg.is_gnf());
    let mut frontiers: BTreeSet<Vec<usize>> = BTreeSet::new();
    // Frontier after 0 letters is the bare start.
    let mut current: BTreeSet<Option<Vec<usize>>> = BTreeSet::new();
    current.insert(None); // None = still at the start symbol
    for letter in prefix {
        let t = match cfg.terminal(letter) {
            Some(t) => t,
            None => return frontiers,
        };
        let mut next: BTreeSet<Option<Vec<usize>>> = BTreeSet::new();
        for state in &current {
            match state {
                None => {
                    for rule in cfg.rules.iter().filter(|r| r.lhs.is_none()) {
                        if rule.rhs.first() == Some(&CfgSym::T(t)) {
                            let tail: Vec<usize> = rule.rhs[1..]
                                .iter()
                                .map(|s| match s {
                                    CfgSym::V(v) => *v,
                                    _ => unreachable!("GNF tails are variables"),
                                })
                                .collect();
                            next.insert(Some(tail));
                        }
                    }
                }
                Some(gamma) => {
                    if let Some((&first, rest)) = gamma.split_first() {
                        for rule in cfg.rules.iter().filter(|r| r.lhs == Some(first)) {
                            if rule.rhs.first() == Some(&CfgSym::T(t)) {
                                let mut tail: Vec<usize> = rule.rhs[1..]
                                    .iter()
                                    .map(|s| match s {
                                        CfgSym::V(v) => *v,
                                        _ => unreachable!(),
                                    })
                                    .collect();
                                tail.extend_from_slice(rest);
                                next.insert(Some(tail));
                            }
                        }
                    }
                }
            }
        }
        current = next;
    }
    for state in current {
        if let Some(gamma) = state {
            frontiers.insert(gamma);
        }
    }
    frontiers
}

/// The expression for word `w` under the `$`-terminated convention.
pub fn gnf_expression(word: &[String]) -> Expr {
    let mut letters: Vec<String> = word.to_vec();
    letters.push("$".to_string());
    Expr::chain(&letters)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 𝛜 -> a 𝛜 a | b 𝛜 b | ε — even-length palindromes.
    pub(crate) fn palindrome() -> Cfg {
        Cfg {
            name: Some("palindrome".into()),
            terminals: vec!["a".into(), "b".into()],
            variables: vec![],
            rules: vec![
                CfgRule { lhs: None, rhs: vec![CfgSym::T(0), CfgSym::Start, CfgSym::T(0)] },
                CfgRule { lhs: None, rhs: vec![CfgSym::T(1), CfgSym::Start, CfgSym::T(1)] },
                CfgRule { lhs: None, rhs: vec![] },
            ],
        }
    }

    fn word(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    #[test]
    fn cyk_on_palindromes() {
        let g = palindrome();
        assert!(cyk_membership(&g, &word("abba")));
        assert!(!cyk_membership(&g, &word("abb")));
        assert!(cyk_membership(&g, &[]));
    }

    #[test]
    fn enumerate_small_palindromes() {
        let g = palindrome();
        let words: Vec<String> =
            g.enumerate_words(4).iter().map(|w| w.join("")).collect();
        assert_eq!(words, vec!["", "aa", "bb", "aaaa", "abba", "baab", "bbbb"]);
    }

    #[test]
    fn empty_language_enumerates_nothing() {
        let g = Cfg {
            name: None,
            terminals: vec!["a".into()],
            variables: vec!["V".into()],
            // Start requires V, V never terminates.
            rules: vec![
                CfgRule { lhs: None, rhs: vec![CfgSym::V(0)] },
                CfgRule { lhs: Some(0), rhs: vec![CfgSym::T(0), CfgSym::V(0)] },
            ],
        };
        assert!(g.enumerate_words(4).is_empty());
    }

    #[test]
    fn unit_word_language() {
        let g = Cfg {
            name: None,
            terminals: vec!["a".into()],
            variables: vec![],
            rules: vec![CfgRule { lhs: None, rhs: vec![] }],
        };
        let words = g.enumerate_words(3);
        assert_eq!(words, vec![Vec::<String>::new()]);
        let gnf = to_gnf(&g);
        assert!(gnf.is_gnf());
        assert_eq!(gnf.enumerate_words(3), vec![Vec::<String>::new()]);
    }

    #[test]
    fn gnf_preserves_palindromes() {
        let g = palindrome();
        let gnf = to_gnf(&g);
        assert!(gnf.is_gnf());
        let cyk_src = Cyk::new(&g);
        let cyk_gnf = Cyk::new(&gnf);
        for w in crate::automata::words_up_to(&g.terminals, 8) {
            assert_eq!(
                cyk_src.accepts_names(&g, &w),
                cyk_gnf.accepts_names(&gnf, &w),
                "mismatch on {w:?}"
            );
        }
    }

    #[test]
    fn gnf_is_fixpoint_on_gnf_input() {
        let g = to_gnf(&palindrome());
        let again = to_gnf(&g);
        assert!(again.is_gnf());
        let cyk_a = Cyk::new(&g);
        let cyk_b = Cyk::new(&again);
        for w in crate::automata::words_up_to(&g.terminals, 7) {
            assert_eq!(cyk_a.accepts_names(&g, &w), cyk_b.accepts_names(&again, &w));
        }
    }
}
