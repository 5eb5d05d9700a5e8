#![allow(dead_code)]

use std::collections::BTreeSet;

use ndp_core::formula::{Formula, Term};
use ndp_core::rules::moves;
use ndp_core::{RuleApplication, Session, SystemProfile};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::var),
        prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
        Just(Term::zero()),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Term::succ),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::plus(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::times(a, b)),
        ]
    })
}

/// First-order formulas of depth at most 7.
pub fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::atom),
        Just(Formula::Falsum),
        term().prop_map(|t| Formula::pred("P", vec![t])),
        (term(), term()).prop_map(|(a, b)| Formula::pred("Q", vec![a, b])),
        (term(), term()).prop_map(|(a, b)| Formula::equals(a, b)),
    ];
    leaf.prop_recursive(7, 48, 2, |inner| {
        let var = prop::sample::select(vec!["x", "y", "z"]);
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, a)| Formula::forall(v, a)),
            (var, inner).prop_map(|(v, a)| Formula::exists(v, a)),
        ]
    })
}

/// Propositional formulas over at most four atoms.
pub fn prop_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["p", "q", "r", "s"]).prop_map(Formula::atom),
        1 => Just(Formula::Falsum),
    ];
    leaf.prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

pub fn random_prop(rng: &mut StdRng, depth: u32) -> Formula {
    const ATOMS: [&str; 3] = ["p", "q", "r"];
    if depth == 0 || rng.gen_bool(0.3) {
        return if rng.gen_bool(0.1) { Formula::Falsum } else { Formula::atom(*ATOMS.choose(rng).unwrap()) };
    }
    match rng.gen_range(0..4) {
        0 => Formula::not(random_prop(rng, depth - 1)),
        1 => Formula::and(random_prop(rng, depth - 1), random_prop(rng, depth - 1)),
        2 => Formula::or(random_prop(rng, depth - 1), random_prop(rng, depth - 1)),
        _ => Formula::implies(random_prop(rng, depth - 1), random_prop(rng, depth - 1)),
    }
}

fn collect_atoms(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(p, _) => {
            out.insert(p.clone());
        }
        Formula::Falsum => {}
        Formula::Not(a) => collect_atoms(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_atoms(a, out);
            collect_atoms(b, out);
        }
        _ => panic!("not propositional: {f}"),
    }
}

fn eval(f: &Formula, atoms: &[String], v: u32) -> bool {
    match f {
        Formula::Atom(p, _) => v >> atoms.iter().position(|a| a == p).unwrap() & 1 == 1,
        Formula::Falsum => false,
        Formula::Not(a) => !eval(a, atoms, v),
        Formula::And(a, b) => eval(a, atoms, v) && eval(b, atoms, v),
        Formula::Or(a, b) => eval(a, atoms, v) || eval(b, atoms, v),
        Formula::Implies(a, b) => !eval(a, atoms, v) || eval(b, atoms, v),
        _ => unreachable!(),
    }
}

/// Truth table of each formula over the union of their atoms.
pub fn truth_tables(fs: &[&Formula]) -> Vec<Vec<bool>> {
    let mut atoms = BTreeSet::new();
    fs.iter().for_each(|f| collect_atoms(f, &mut atoms));
    let atoms: Vec<String> = atoms.into_iter().collect();
    assert!(atoms.len() <= 6);
    fs.iter().map(|f| (0..1u32 << atoms.len()).map(|v| eval(f, &atoms, v)).collect()).collect()
}

/// premises ⊨ conclusion by exhaustive valuation.
pub fn entails(premises: &[Formula], conclusion: &Formula) -> bool {
    let mut all: Vec<&Formula> = premises.iter().collect();
    all.push(conclusion);
    let tables = truth_tables(&all);
    let (goal, prem) = tables.split_last().unwrap();
    (0..goal.len()).all(|v| !prem.iter().all(|t| t[v]) || goal[v])
}

pub fn witnesses() -> Vec<Term> {
    vec![Term::constant("a"), Term::var("x")]
}

/// Plays up to `depth` random valid moves. Returns the session and the
/// applications made.
pub fn random_play(
    rng: &mut StdRng,
    premises: Vec<Formula>,
    conclusion: Formula,
    system: SystemProfile,
    depth: usize,
) -> (Session, Vec<RuleApplication>) {
    let mut s = Session::new(premises, conclusion, system);
    let mut played = Vec::new();
    for _ in 0..depth {
        let options = moves(s.state(), &witnesses());
        let Some(app) = options.choose(rng) else { break };
        s.apply(app).expect("listed move applies");
        played.push(app.clone());
    }
    (s, played)
}
