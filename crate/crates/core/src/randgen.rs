//! Seeded generators for small random artifacts: Fluent programs,
//! restricted tree automata, rudimentary-typeof programs, and context-free
//! grammars. The same seed always produces the same artifact.
//!
//! Generated programs keep overload dispatch unambiguous (distinct pattern
//! roots per function name) so that the deterministic conversions apply:
//! these are the inputs the constructive theorems speak about.

use std::sync::Arc;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::automata::{
    AutomatonSpec, ConsumeItem, Frame, InputAlphabet, Rewrite, StorageKind,
};
use crate::grammar::{Cfg, CfgRule, CfgSym};
use crate::term::{RewriteRule, SymbolId, TermId, TermStore, LEAF};
use crate::typesys::{FunctionDef, Mode, Namespace, PseudoExpr, Ret, TypeProgram};

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Left-hand roots available to one function name; each name draws without
/// replacement so its overloads never collide.
#[derive(Clone, Copy, PartialEq, Eq)]
enum LhsRoot {
    Unit,
    Sym(usize),
}

/// A random Fluent program: monadic rank-1 types, chain patterns of depth
/// at most three, optional rudimentary forwarding through an acyclic chain
/// of auxiliaries.
pub fn random_fluent_program(seed: u64) -> TypeProgram {
    let mut rng = rng_for(seed);
    let store = Arc::new(TermStore::new());
    let type_count = rng.gen_range(2..=4usize);
    let types: Vec<SymbolId> =
        (1..=type_count).map(|i| store.declare(&format!("T{i}"), 1).unwrap()).collect();
    let letters: Vec<String> =
        ["a", "b", "c"][..rng.gen_range(2..=3usize)].iter().map(|s| s.to_string()).collect();
    let aux_count = rng.gen_range(0..=2usize);
    let aux_names: Vec<String> = (1..=aux_count).map(|i| format!("f{i}")).collect();

    let x = store.var_term(store.var("x1"));
    let mut program = TypeProgram::new(store.clone());
    program.name = Some(format!("random-fluent-{seed}"));
    program.mode = Mode::OneType;

    let spine = |rng: &mut ChaCha8Rng, max: usize| -> Vec<SymbolId> {
        let len = rng.gen_range(0..=max);
        (0..len).map(|_| *types.choose(rng).unwrap()).collect()
    };

    let make_defs = |rng: &mut ChaCha8Rng,
                         name: &str,
                         namespace: Namespace,
                         forward_pool: &[String]|
     -> Vec<FunctionDef> {
        let mut roots: Vec<LhsRoot> = vec![LhsRoot::Unit];
        roots.extend((0..types.len()).map(LhsRoot::Sym));
        roots.shuffle(rng);
        let def_count = rng.gen_range(1..=2usize);
        let mut defs = Vec::new();
        for root in roots.into_iter().take(def_count) {
            // Left-hand side: a chain anchored at the chosen root.
            let (lhs, lhs_has_var): (TermId, bool) = match root {
                LhsRoot::Unit => (LEAF, false),
                LhsRoot::Sym(i) => {
                    let mut chain = vec![types[i]];
                    chain.extend(spine(rng, 1));
                    let tail_var = rng.gen_bool(0.7);
                    let tail = if tail_var { x } else { LEAF };
                    (store.chain(&chain, tail).unwrap(), tail_var)
                }
            };
            // Right-hand side: a chain, grounded or reusing the variable.
            let rhs_spine = spine(rng, 2);
            let rhs = if lhs_has_var && rng.gen_bool(0.7) {
                store.chain(&rhs_spine, x).unwrap()
            } else {
                store.chain(&rhs_spine, LEAF).unwrap()
            };
            let ret = if !forward_pool.is_empty() && rng.gen_bool(0.4) {
                let target = forward_pool.choose(rng).unwrap().clone();
                Ret::Typeof(PseudoExpr::Call(target, vec![PseudoExpr::Leaf(rhs)]))
            } else {
                Ret::Type(rhs)
            };
            defs.push(FunctionDef {
                name: name.to_string(),
                namespace,
                params: vec![lhs],
                ret,
            });
        }
        defs
    };

    for letter in &letters {
        let defs = make_defs(&mut rng, letter, Namespace::Primary, &aux_names);
        program.defs.extend(defs);
    }
    // Auxiliaries may only forward to later auxiliaries; the chain is
    // acyclic, so typeof resolution always terminates.
    for (i, name) in aux_names.iter().enumerate() {
        let pool: Vec<String> = aux_names[i + 1..].to_vec();
        let defs = make_defs(&mut rng, name, Namespace::Auxiliary, &pool);
        program.defs.extend(defs);
    }
    program.validate().expect("generated program is well-formed");
    program
}

/// A random stateless real-time deterministic tree automaton obeying the
/// rule-stack restriction: every left-hand side is a bare variable, the
/// leaf, or one symbol over distinct variables.
pub fn random_restricted_ta(seed: u64) -> AutomatonSpec {
    let mut rng = rng_for(seed);
    let store = Arc::new(TermStore::new());
    let sym_count = rng.gen_range(2..=3usize);
    let symbols: Vec<SymbolId> = (1..=sym_count)
        .map(|i| {
            let rank = rng.gen_range(1..=3usize).min(if i == 1 { 3 } else { 2 });
            store.declare(&format!("G{i}"), rank).unwrap()
        })
        .collect();
    let letters: Vec<String> =
        ["a", "b", "c"][..rng.gen_range(2..=3usize)].iter().map(|s| s.to_string()).collect();

    let vars: Vec<TermId> =
        (1..=3).map(|i| store.var_term(store.var(&format!("x{i}")))).collect();

    // Random ground-able term over a set of variables.
    fn random_term(
        rng: &mut ChaCha8Rng,
        store: &TermStore,
        symbols: &[SymbolId],
        vars: &[TermId],
        depth: usize,
    ) -> TermId {
        if depth == 0 || rng.gen_bool(0.3) {
            if !vars.is_empty() && rng.gen_bool(0.6) {
                return *vars.choose(rng).unwrap();
            }
            return LEAF;
        }
        let sym = *symbols.choose(rng).unwrap();
        let children: Vec<TermId> = (0..store.rank(sym))
            .map(|_| random_term(rng, store, symbols, vars, depth - 1))
            .collect();
        store.app(sym, &children).unwrap()
    }

    let mut consuming = Vec::new();
    for letter in &letters {
        let mut roots: Vec<LhsRoot> = vec![LhsRoot::Unit];
        roots.extend((0..symbols.len()).map(LhsRoot::Sym));
        roots.shuffle(&mut rng);
        for root in roots.into_iter().take(rng.gen_range(1..=2usize)) {
            let rule = match root {
                LhsRoot::Unit => {
                    // 𝛜 -> ground term.
                    let rhs = random_term(&mut rng, &store, &symbols, &[], 2);
                    RewriteRule::new(&store, LEAF, rhs).unwrap()
                }
                LhsRoot::Sym(i) => {
                    let sym = symbols[i];
                    let rank = store.rank(sym);
                    let lhs_vars: Vec<TermId> = vars[..rank].to_vec();
                    let lhs = store.app(sym, &lhs_vars).unwrap();
                    if rng.gen_bool(0.35) {
                        // Extracting: project one child.
                        let k = rng.gen_range(0..rank);
                        RewriteRule::new(&store, lhs, lhs_vars[k]).unwrap()
                    } else {
                        let rhs = random_term(&mut rng, &store, &symbols, &lhs_vars, 2);
                        match RewriteRule::new(&store, lhs, rhs) {
                            Ok(rule) if rule.is_extracting(&store) => {
                                // A bare-variable right-hand side is an
                                // extraction; keep it, it is well-formed.
                                rule
                            }
                            Ok(rule) => rule,
                            Err(_) => unreachable!("vars drawn from the lhs"),
                        }
                    }
                }
            };
            consuming.push(ConsumeItem {
                letter: letter.clone(),
                from: vec![0],
                rule: Some(Rewrite::Term(rule)),
                to: 0,
            });
        }
    }

    AutomatonSpec {
        name: Some(format!("random-ta-{seed}")),
        store,
        states: vec!["q0".into()],
        initial: 0,
        accepting: [0].into(),
        input: InputAlphabet::Word(letters),
        storage: StorageKind::Tree { pushdown: false },
        initial_storage: None,
        preload: false,
        consuming,
        epsilon: vec![],
        frame: Frame::default(),
        declared: vec!["stateless".into(), "real-time".into(), "deterministic".into()],
    }
}

/// A random plain-polymorphism program with rudimentary typeof: shallow
/// linear method patterns, overloads with distinct roots, acyclic
/// auxiliary forwarding.
pub fn random_rudimentary_program(seed: u64) -> TypeProgram {
    let mut rng = rng_for(seed);
    let store = Arc::new(TermStore::new());
    let type_count = rng.gen_range(2..=3usize);
    let types: Vec<SymbolId> = (1..=type_count)
        .map(|i| store.declare(&format!("G{i}"), rng.gen_range(1..=2usize)).unwrap())
        .collect();
    let letters: Vec<String> =
        ["a", "b", "c"][..rng.gen_range(2..=3usize)].iter().map(|s| s.to_string()).collect();
    let aux_count = rng.gen_range(0..=2usize);
    let aux_names: Vec<String> = (1..=aux_count).map(|i| format!("f{i}")).collect();

    let vars: Vec<TermId> =
        (1..=2).map(|i| store.var_term(store.var(&format!("x{i}")))).collect();

    fn random_result(
        rng: &mut ChaCha8Rng,
        store: &TermStore,
        types: &[SymbolId],
        vars: &[TermId],
        depth: usize,
    ) -> TermId {
        if depth == 0 || rng.gen_bool(0.35) {
            if !vars.is_empty() && rng.gen_bool(0.6) {
                return *vars.choose(rng).unwrap();
            }
            return LEAF;
        }
        let sym = *types.choose(rng).unwrap();
        let children: Vec<TermId> = (0..store.rank(sym))
            .map(|_| random_result(rng, store, types, vars, depth - 1))
            .collect();
        store.app(sym, &children).unwrap()
    }

    let mut program = TypeProgram::new(store.clone());
    program.name = Some(format!("random-rudimentary-{seed}"));
    program.mode = Mode::OneType;

    let make_defs = |rng: &mut ChaCha8Rng,
                         name: &str,
                         namespace: Namespace,
                         forward_pool: &[String]|
     -> Vec<FunctionDef> {
        let mut roots: Vec<LhsRoot> = vec![LhsRoot::Unit];
        roots.extend((0..types.len()).map(LhsRoot::Sym));
        roots.shuffle(rng);
        let mut defs = Vec::new();
        for root in roots.into_iter().take(rng.gen_range(1..=2usize)) {
            let (pattern, bound): (TermId, Vec<TermId>) = match root {
                LhsRoot::Unit => (LEAF, vec![]),
                LhsRoot::Sym(i) => {
                    let rank = store.rank(types[i]);
                    let params = vars[..rank].to_vec();
                    (store.app(types[i], &params).unwrap(), params)
                }
            };
            let result = random_result(rng, &store, &types, &bound, 2);
            let ret = if !forward_pool.is_empty() && rng.gen_bool(0.4) {
                let target = forward_pool.choose(rng).unwrap().clone();
                Ret::Typeof(PseudoExpr::Call(target, vec![PseudoExpr::Leaf(result)]))
            } else {
                Ret::Type(result)
            };
            defs.push(FunctionDef {
                name: name.to_string(),
                namespace,
                params: vec![pattern],
                ret,
            });
        }
        defs
    };

    for letter in &letters {
        let defs = make_defs(&mut rng, letter, Namespace::Primary, &aux_names);
        program.defs.extend(defs);
    }
    for (i, name) in aux_names.iter().enumerate() {
        let pool: Vec<String> = aux_names[i + 1..].to_vec();
        let defs = make_defs(&mut rng, name, Namespace::Auxiliary, &pool);
        program.defs.extend(defs);
    }
    program.validate().expect("generated program is well-formed");
    program
}

/// A random context-free grammar over {a, b} with at most four variables.
/// Some seeds generate (near-)empty languages; membership comparisons stay
/// meaningful either way.
pub fn random_cfg(seed: u64) -> Cfg {
    let mut rng = rng_for(seed);
    // Rejection sampling keeps the Greibach expansion of the grammar small
    // enough for exhaustive word sweeps.
    loop {
        let cfg = random_cfg_candidate(&mut rng, seed);
        if crate::grammar::to_gnf(&cfg).rules.len() <= 200 {
            return cfg;
        }
    }
}

fn random_cfg_candidate(rng: &mut ChaCha8Rng, seed: u64) -> Cfg {
    let var_count = rng.gen_range(1..=4usize);
    let mut cfg = Cfg {
        name: Some(format!("random-cfg-{seed}")),
        terminals: vec!["a".into(), "b".into()],
        variables: (1..=var_count).map(|i| format!("V{i}")).collect(),
        rules: Vec::new(),
    };
    let random_rhs = |rng: &mut ChaCha8Rng| -> Vec<CfgSym> {
        let len = rng.gen_range(0..=2usize);
        (0..len)
            .map(|_| {
                let roll: f64 = rng.gen();
                if roll < 0.5 {
                    CfgSym::T(rng.gen_range(0..2))
                } else if roll < 0.92 {
                    CfgSym::V(rng.gen_range(0..var_count))
                } else {
                    CfgSym::Start
                }
            })
            .collect()
    };
    for _ in 0..rng.gen_range(1..=3usize) {
        let rhs = random_rhs(rng);
        cfg.rules.push(CfgRule { lhs: None, rhs });
    }
    for v in 0..var_count {
        for _ in 0..rng.gen_range(1..=2usize) {
            let rhs = random_rhs(rng);
            cfg.rules.push(CfgRule { lhs: Some(v), rhs });
        }
    }
    cfg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::validate;
    use crate::typesys::{classify_program, LatticePointT};

    #[test]
    fn generators_are_deterministic() {
        for seed in [0, 1, 17] {
            assert_eq!(
                crate::parse::print_program(&random_fluent_program(seed)),
                crate::parse::print_program(&random_fluent_program(seed))
            );
            assert_eq!(
                crate::parse::print_automaton(&random_restricted_ta(seed)),
                crate::parse::print_automaton(&random_restricted_ta(seed))
            );
            assert_eq!(
                crate::parse::print_grammar(&random_cfg(seed)),
                crate::parse::print_grammar(&random_cfg(seed))
            );
        }
    }

    #[test]
    fn random_fluent_programs_sit_below_fluent() {
        for seed in 0..20 {
            let program = random_fluent_program(seed);
            let point = classify_program(&program).unwrap();
            assert!(point.le(&LatticePointT::fluent()), "seed {seed}: {}", point.abbreviated());
        }
    }

    #[test]
    fn random_tas_are_deterministic_stateless_real_time() {
        for seed in 0..20 {
            let ta = random_restricted_ta(seed);
            let (point, diags) = validate(&ta).unwrap();
            assert!(diags.is_empty(), "seed {seed}: {diags:?}");
            assert!(point.is_deterministic(), "seed {seed}");
        }
    }

    #[test]
    fn random_rudimentary_programs_validate() {
        for seed in 0..20 {
            let program = random_rudimentary_program(seed);
            let point = classify_program(&program).unwrap();
            assert!(point.typeof_ <= crate::typesys::TypeofFeature::RudimentaryTypeof);
            assert_eq!(point.depth, crate::typesys::PatternDepth::Shallow);
        }
    }
}
