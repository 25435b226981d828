//! The built-in artifact catalog: the aⁿbⁿcⁿ programs (deep and non-linear
//! counting), the w#w full-typeof program, the Dyck stack API, the unary
//! counter, the self-doubling blowup program, the aⁿbⁿ Turing machine, the
//! palindrome grammars, and a set of small tree automata. Each fixture
//! carries the accept/reject words it is known for.

use crate::automata::{AutomatonSpec, ConsumeItem, InputAlphabet, Rewrite, StorageKind};
use crate::grammar::{gnf_to_program, Cfg};
use crate::parse::{parse_automaton, parse_grammar, parse_program};
use crate::term::RewriteRule;
use crate::typesys::{Expr, TypeProgram};

/// One named artifact.
pub enum Artifact {
    Program(TypeProgram),
    Automaton(AutomatonSpec),
    Grammar(Cfg),
}

pub struct Fixture {
    pub name: &'static str,
    pub description: &'static str,
    pub artifact: Artifact,
    /// Words the artifact accepts / types.
    pub positive: Vec<Vec<String>>,
    /// Words it rejects.
    pub negative: Vec<Vec<String>>,
}

/// Splits a compact word: single characters, or whitespace-separated
/// letters when any letter is longer.
pub fn word(s: &str) -> Vec<String> {
    if s.contains(' ') {
        s.split_whitespace().map(str::to_string).collect()
    } else {
        s.chars().map(|c| c.to_string()).collect()
    }
}

fn words(ws: &[&str]) -> Vec<Vec<String>> {
    ws.iter().map(|w| word(w)).collect()
}

/// Deep-pattern counting of aⁿbⁿcⁿ (n ≥ 1): two unary counters incremented
/// by `a`, drained by `b` and `c`.
pub fn anbncn_deep() -> TypeProgram {
    parse_program(
        "\
name anbncn-deep
mode one-type
frame begin begin
frame end end
type g1/2
type g2/2
type g3/1
type Succ/1
fn begin : eps -> g1(eps,eps)
fn a : g1(x1,x2) -> g1(Succ(x1),Succ(x2))
fn b : g1(Succ(x1),x2) -> g2(x1,x2)
fn b : g2(Succ(x1),x2) -> g2(x1,x2)
fn c : g2(eps,Succ(x1)) -> g3(x1)
fn c : g3(Succ(x1)) -> g3(x1)
fn end : g3(eps) -> eps
expr eps.begin.a.a.a.b.b.b.c.c.c.end
expr eps.begin.a.a.a.b.b.c.c.c.end
",
    )
    .expect("fixture parses")
}

/// Non-linear counting of aⁿbⁿcⁿ (n ≥ 1): three independent counters
/// compared in one shot by the non-linear `end` pattern.
pub fn anbncn_nonlinear() -> TypeProgram {
    parse_program(
        "\
name anbncn-nonlinear
mode one-type
frame begin begin
frame end end
type g1/3
type g2/3
type g3/3
type Succ/1
fn begin : eps -> g1(eps,eps,eps)
fn a : g1(x1,x2,x3) -> g1(Succ(x1),x2,x3)
fn b : g1(x1,x2,x3) -> g2(x1,Succ(x2),x3)
fn b : g2(x1,x2,x3) -> g2(x1,Succ(x2),x3)
fn c : g2(x1,x2,x3) -> g3(x1,x2,Succ(x3))
fn c : g3(x1,x2,x3) -> g3(x1,x2,Succ(x3))
fn end : g3(x1,x1,x1) -> eps
expr eps.begin.a.a.a.b.b.b.c.c.c.end
expr eps.begin.a.a.a.b.b.c.c.c.end
",
    )
    .expect("fixture parses")
}

/// The w#w recognizer through full typeof: letters accumulate into a
/// monadic type; `$` replays the first half as match obligations, reverses
/// the second half, and the two halves must cancel.
pub fn ww_full_typeof() -> TypeProgram {
    parse_program(
        "\
name ww-full-typeof
mode one-type
frame end $
accept eps
type A/1
type B/1
type S/1
fn a : eps -> A(eps)
fn b : eps -> B(eps)
fn a : x1 -> A(x1)
fn b : x1 -> B(x1)
fn s : x1 -> S(x1)
fn $ : A(x1) -> typeof match_a($(x1))
fn $ : B(x1) -> typeof match_b($(x1))
fn $ : S(x1) -> typeof reverse(x1)
aux reverse : A(x1) -> typeof append2end_a(reverse(x1))
aux reverse : B(x1) -> typeof append2end_b(reverse(x1))
aux reverse : eps -> eps
aux append2end_a : A(x1) -> typeof append2start_a(append2end_a(x1))
aux append2end_a : B(x1) -> typeof append2start_b(append2end_a(x1))
aux append2end_a : eps -> A(eps)
aux append2end_b : A(x1) -> typeof append2start_a(append2end_b(x1))
aux append2end_b : B(x1) -> typeof append2start_b(append2end_b(x1))
aux append2end_b : eps -> B(eps)
aux append2start_a : x1 -> A(x1)
aux append2start_b : x1 -> B(x1)
aux match_a : A(x1) -> x1
aux match_b : B(x1) -> x1
",
    )
    .expect("fixture parses")
}

/// The balanced-parentheses stack API: push/pop under a begin/empty frame.
pub fn dyck_stack() -> TypeProgram {
    parse_program(
        "\
name dyck-stack
mode one-type
frame begin begin
frame end empty
type Empty/1
type Stack/1
fn begin : eps -> Empty(eps)
fn push : Empty(x1) -> Stack(Empty(x1))
fn push : Stack(x1) -> Stack(Stack(x1))
fn pop : Stack(x1) -> x1
fn empty : Empty(x1) -> Empty(x1)
",
    )
    .expect("fixture parses")
}

/// Unary integers with increment and decrement; decrement of zero is a
/// type error.
pub fn unary_inc_dec() -> TypeProgram {
    parse_program(
        "\
name unary-inc-dec
mode one-type
frame begin zero
type Succ/1
fn zero : eps -> eps
fn inc : eps -> Succ(eps)
fn inc : Succ(x1) -> Succ(Succ(x1))
fn dec : Succ(x1) -> x1
",
    )
    .expect("fixture parses")
}

/// The self-doubling generic whose 32-fold chains make naive checkers
/// crawl; the binary `g` compares the two chains by a repeated variable.
pub fn s2_blowup() -> TypeProgram {
    let mut program = parse_program(
        "\
name s2-blowup
mode one-type
type C/2
fn f : eps -> C(eps,eps)
fn f : C(x1,x2) -> C(C(x2,x1),C(x1,x2))
fn g : x1, x1 -> eps
",
    )
    .expect("fixture parses");
    let chain = |n: usize| Expr::chain(&vec!["f".to_string(); n]);
    program.exprs.push(Expr::Call("g".into(), vec![chain(32), chain(32)]));
    program.exprs.push(Expr::Call("g".into(), vec![chain(32), chain(31)]));
    program
}

/// The Turing machine erasing matched a/b pairs from the ends of the tape:
/// accepts exactly aⁿbⁿ, with the input preloaded.
pub fn tm_anbn() -> AutomatonSpec {
    parse_automaton(
        "\
name tm-anbn
storage tape
preload-input
states q0 q1 q2 q3 q4
initial q0
accepting q4
alphabet a b
tape-alphabet ♭ a b
epsilon: in q0 rule ♭ -> ♭- goto q4
epsilon: in q0 rule a -> ♭+ goto q1
epsilon: in q1 rule ♭ -> ♭- goto q2
epsilon: in q1 rule a -> a+ goto q1
epsilon: in q1 rule b -> b+ goto q1
epsilon: in q2 rule b -> ♭- goto q3
epsilon: in q3 rule ♭ -> ♭+ goto q0
epsilon: in q3 rule a -> a- goto q3
epsilon: in q3 rule b -> b- goto q3
",
    )
    .expect("fixture parses")
}

/// The full typeof encoding of [`tm_anbn`], with the three words the
/// machine is exercised on: a4b4 (accepted), a4bab2 and a3b4 (rejected).
pub fn turing_cc_program() -> TypeProgram {
    let tm = tm_anbn();
    let w1 = word("aaaabbbb");
    let (ta, _) = crate::transforms::tm_to_ta(&tm, &w1).expect("fixture converts");
    let (mut program, _) =
        crate::transforms::ta_to_typeof_program(&ta, &w1).expect("fixture converts");
    for w in ["aaaababb", "aaabbbb"] {
        let (p, _) =
            crate::transforms::ta_to_typeof_program(&ta, &word(w)).expect("fixture converts");
        program.exprs.extend(p.exprs);
    }
    program.name = Some("tm-anbn-typeof".into());
    program
}

/// Even-length palindromes over {a, b}.
pub fn palindrome_cfg() -> Cfg {
    let mut cfg = parse_grammar("start S;\nS -> a S a | b S b | ;\n").expect("fixture parses");
    cfg.name = Some("palindrome-cfg".into());
    cfg
}

/// The hand-written Greibach normal form of the even palindromes, without
/// an ε-rule (the empty word is out of this grammar's language).
pub fn greibach_gnf() -> Cfg {
    let mut cfg = parse_grammar(
        "\
start S;
S -> a g1 | b g2;
g1 -> a g1 g3 | b g2 g3 | a;
g2 -> a g1 g4 | b g2 g4 | b;
g3 -> a;
g4 -> b;
",
    )
    .expect("fixture parses");
    cfg.name = Some("greibach-gnf".into());
    assert!(cfg.is_gnf());
    cfg
}

/// The overloaded-type encoding of [`greibach_gnf`], checked under
/// eventually-one-type resolution.
pub fn palindrome_program() -> TypeProgram {
    let mut program = gnf_to_program(&greibach_gnf()).expect("fixture converts");
    program.name = Some("palindrome-eventually".into());
    program.exprs.push(Expr::chain(
        &["a", "a", "b", "b", "a", "a", "$"].map(String::from),
    ));
    program
}

/// Stateless tree automaton mirroring the deep aⁿbⁿcⁿ program, on the
/// program's own store so final types and final storage are comparable.
pub fn ta_anbncn_deep_pair() -> (TypeProgram, AutomatonSpec) {
    let program = anbncn_deep();
    let store = program.store.clone();
    let mut consuming = Vec::new();
    for def in program.primary() {
        consuming.push(ConsumeItem {
            letter: def.name.clone(),
            from: vec![0],
            rule: Some(Rewrite::Term(
                RewriteRule::new(&store, def.params[0], match &def.ret {
                    crate::typesys::Ret::Type(t) => *t,
                    _ => unreachable!("fixture has no typeof"),
                })
                .expect("definitions are valid rewrites"),
            )),
            to: 0,
        });
    }
    let ta = AutomatonSpec {
        name: Some("ta-anbncn-deep".into()),
        store,
        states: vec!["q0".into()],
        initial: 0,
        accepting: [0].into(),
        input: InputAlphabet::Word(
            ["begin", "a", "b", "c", "end"].map(String::from).to_vec(),
        ),
        storage: StorageKind::Tree { pushdown: false },
        initial_storage: None,
        preload: false,
        consuming,
        epsilon: vec![],
        frame: program.frame.clone(),
        declared: vec!["deterministic".into(), "real-time".into(), "stateless".into()],
    };
    (program, ta)
}

/// Stateless tree automaton mirroring the non-linear aⁿbⁿcⁿ program.
pub fn ta_anbncn_nonlinear_pair() -> (TypeProgram, AutomatonSpec) {
    let program = anbncn_nonlinear();
    let store = program.store.clone();
    let mut consuming = Vec::new();
    for def in program.primary() {
        consuming.push(ConsumeItem {
            letter: def.name.clone(),
            from: vec![0],
            rule: Some(Rewrite::Term(
                RewriteRule::new(&store, def.params[0], match &def.ret {
                    crate::typesys::Ret::Type(t) => *t,
                    _ => unreachable!("fixture has no typeof"),
                })
                .expect("definitions are valid rewrites"),
            )),
            to: 0,
        });
    }
    let ta = AutomatonSpec {
        name: Some("ta-anbncn-nonlinear".into()),
        store,
        states: vec!["q0".into()],
        initial: 0,
        accepting: [0].into(),
        input: InputAlphabet::Word(
            ["begin", "a", "b", "c", "end"].map(String::from).to_vec(),
        ),
        storage: StorageKind::Tree { pushdown: false },
        initial_storage: None,
        preload: false,
        consuming,
        epsilon: vec![],
        frame: program.frame.clone(),
        declared: vec!["real-time".into(), "stateless".into(), "non-linear-rewrite".into()],
    };
    (program, ta)
}

/// A stateless pushdown counter: `a` pushes, `b` pops, `end` applies only
/// on the empty stack.
pub fn ta_counter() -> AutomatonSpec {
    parse_automaton(
        "\
name ta-counter
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
    .expect("fixture parses")
}

/// A stateless tree automaton exercising every extraction case of the
/// rule-stack emulation: pair builders, a wrapper, and both projections.
pub fn ta_pairs() -> AutomatonSpec {
    parse_automaton(
        "\
name ta-pairs
storage tree
states q0
initial q0
accepting q0
alphabet p h l r g
tree-alphabet P/2 G/1
delta: on p in q0 rule x1 -> P(x1,x1) goto q0
delta: on h in q0 rule x1 -> P(G(x1),x1) goto q0
delta: on l in q0 rule P(x1,x2) -> x1 goto q0
delta: on r in q0 rule P(x1,x2) -> x2 goto q0
delta: on g in q0 rule x1 -> G(x1) goto q0
",
    )
    .expect("fixture parses")
}

/// A two-state no-store automaton: words over {a, b} with evenly many
/// `a`s.
pub fn fsa_even_a() -> AutomatonSpec {
    parse_automaton(
        "\
name fsa-even-a
storage none
states even odd
initial even
accepting even
alphabet a b
expect stateful deterministic real-time
delta: on a in even goto odd
delta: on a in odd goto even
delta: on b in even goto even
delta: on b in odd goto odd
",
    )
    .expect("fixture parses")
}

/// A program/automaton pair recognizing the same word language on a shared
/// store, for bisimulation checks.
pub struct BisimPair {
    pub name: &'static str,
    pub program: TypeProgram,
    pub automaton: AutomatonSpec,
}

/// Fixture pairs related by the program↔automaton correspondence: the two
/// hand-built aⁿbⁿcⁿ mirrors, plus the Dyck and unary programs compiled by
/// rudimentary typeof elimination.
pub fn bisim_pairs() -> Vec<BisimPair> {
    let (p1, a1) = ta_anbncn_deep_pair();
    let (p2, a2) = ta_anbncn_nonlinear_pair();
    let dyck = dyck_stack();
    let (dyck_ta, _) = crate::transforms::rudimentary_to_ta(&dyck).expect("dyck converts");
    let unary = unary_inc_dec();
    let (unary_ta, _) = crate::transforms::rudimentary_to_ta(&unary).expect("unary converts");
    vec![
        BisimPair { name: "anbncn-deep", program: p1, automaton: a1 },
        BisimPair { name: "anbncn-nonlinear", program: p2, automaton: a2 },
        BisimPair { name: "dyck-stack", program: dyck, automaton: dyck_ta },
        BisimPair { name: "unary-inc-dec", program: unary, automaton: unary_ta },
    ]
}

/// The whole catalog with its annotated accept/reject words.
pub fn fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    out.push(Fixture {
        name: "anbncn-deep",
        description: "a^n b^n c^n (n ≥ 1) by deep type patterns over two unary counters",
        artifact: Artifact::Program(anbncn_deep()),
        positive: words(&["aaabbbccc", "abc"]),
        negative: words(&["aaabbccc", "ab", ""]),
    });
    out.push(Fixture {
        name: "anbncn-nonlinear",
        description: "a^n b^n c^n (n ≥ 1) by one non-linear comparison of three counters",
        artifact: Artifact::Program(anbncn_nonlinear()),
        positive: words(&["aaabbbccc", "abc"]),
        negative: words(&["aaabbccc", "cba", ""]),
    });
    out.push(Fixture {
        name: "ww-full-typeof",
        description: "w#w over {a,b} (# spelled s) through chained typeof resolution",
        artifact: Artifact::Program(ww_full_typeof()),
        positive: words(&["abaasabaa", "s"]),
        negative: words(&["abaasabba", "baasabaa", "abaa", "as"]),
    });
    out.push(Fixture {
        name: "dyck-stack",
        description: "balanced push/pop sequences on a generic stack API",
        artifact: Artifact::Program(dyck_stack()),
        positive: vec![word("push pop"), word("push push pop pop"), vec![]],
        negative: vec![word("push pop pop"), word("pop"), word("push")],
    });
    out.push(Fixture {
        name: "unary-inc-dec",
        description: "unary counter; dec on zero fails to type",
        artifact: Artifact::Program(unary_inc_dec()),
        positive: vec![word("inc inc dec"), vec![]],
        negative: vec![word("dec"), word("inc dec dec")],
    });
    out.push(Fixture {
        name: "s2-blowup",
        description: "self-doubling generic compared non-linearly; quick only with sharing",
        artifact: Artifact::Program(s2_blowup()),
        positive: vec![],
        negative: vec![],
    });
    out.push(Fixture {
        name: "palindrome-eventually",
        description: "even palindromes (non-empty) under Ada-style overloading",
        artifact: Artifact::Program(palindrome_program()),
        positive: words(&["aabbaa", "aa", "abba"]),
        negative: words(&["aab", "ab", ""]),
    });
    out.push(Fixture {
        name: "tm-anbn",
        description: "Turing machine erasing a/b pairs from both ends; accepts a^n b^n",
        artifact: Artifact::Automaton(tm_anbn()),
        positive: words(&["aaaabbbb", "ab", ""]),
        negative: words(&["aaaababb", "aaabbbb", "ba"]),
    });
    out.push(Fixture {
        name: "ta-anbncn-deep",
        description: "stateless tree automaton mirroring anbncn-deep",
        artifact: Artifact::Automaton(ta_anbncn_deep_pair().1),
        positive: words(&["aaabbbccc", "abc"]),
        negative: words(&["aaabbccc", ""]),
    });
    out.push(Fixture {
        name: "ta-anbncn-nonlinear",
        description: "stateless non-linear tree automaton mirroring anbncn-nonlinear",
        artifact: Artifact::Automaton(ta_anbncn_nonlinear_pair().1),
        positive: words(&["aaabbbccc", "abc"]),
        negative: words(&["aaabbccc", ""]),
    });
    out.push(Fixture {
        name: "ta-counter",
        description: "stateless pushdown counter with an empty-stack guard letter",
        artifact: Artifact::Automaton(ta_counter()),
        positive: vec![word("a b end"), word("ab"), vec![]],
        negative: vec![word("b"), word("a end")],
    });
    out.push(Fixture {
        name: "ta-pairs",
        description: "pair-building tree automaton exercising stack extraction",
        artifact: Artifact::Automaton(ta_pairs()),
        positive: vec![word("p l"), word("h r g"), vec![]],
        negative: vec![word("l"), word("g l")],
    });
    out.push(Fixture {
        name: "fsa-even-a",
        description: "no-store automaton for evenly many a's",
        artifact: Artifact::Automaton(fsa_even_a()),
        positive: words(&["aa", "baba", ""]),
        negative: words(&["a", "abb"]),
    });
    out.push(Fixture {
        name: "palindrome-cfg",
        description: "even-length palindromes over {a,b}, with the empty word",
        artifact: Artifact::Grammar(palindrome_cfg()),
        positive: words(&["abba", "aa", ""]),
        negative: words(&["abb", "ab"]),
    });
    out.push(Fixture {
        name: "greibach-gnf",
        description: "hand-written Greibach normal form of the even palindromes (ε excluded)",
        artifact: Artifact::Grammar(greibach_gnf()),
        positive: words(&["abba", "aa"]),
        negative: words(&["abb", ""]),
    });
    out
}

/// Looks a fixture up by name.
pub fn fixture(name: &str) -> Option<Fixture> {
    fixtures().into_iter().find(|f| f.name == name)
}
