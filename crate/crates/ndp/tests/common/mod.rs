#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::{Command, Output};

use ndp_core::formula::{Formula, Term};
use ndp_core::rules::moves;
use ndp_core::{RuleId, Session, SystemProfile};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join(name)
}

pub fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn ndp(args: &[&str]) -> Run {
    ndp_env(args, &[])
}

pub fn ndp_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ndp"));
    cmd.args(args).env_remove("NDP_SYSTEM");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let Output { status, stdout, stderr } = cmd.output().unwrap();
    Run {
        code: status.code().unwrap(),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

/// Brute-force semantic entailment for propositional sequents: every
/// assignment to the atoms that satisfies all premises satisfies the
/// conclusion.
pub fn valid(premises: &[Formula], conclusion: &Formula) -> bool {
    fn atoms(f: &Formula, out: &mut Vec<String>) {
        match f {
            Formula::Atom(p, args) => {
                assert!(args.is_empty(), "not propositional");
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
            Formula::Falsum => {}
            Formula::Not(a) => atoms(a, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                atoms(a, out);
                atoms(b, out);
            }
            other => panic!("not propositional: {other:?}"),
        }
    }
    fn truth(f: &Formula, v: &BTreeMap<String, bool>) -> bool {
        match f {
            Formula::Atom(p, _) => v[p],
            Formula::Falsum => false,
            Formula::Not(a) => !truth(a, v),
            Formula::And(a, b) => truth(a, v) && truth(b, v),
            Formula::Or(a, b) => truth(a, v) || truth(b, v),
            Formula::Implies(a, b) => !truth(a, v) || truth(b, v),
            _ => unreachable!(),
        }
    }
    let mut names = Vec::new();
    premises.iter().chain([conclusion]).for_each(|f| atoms(f, &mut names));
    assert!(names.len() <= 4, "oracle is limited to four atoms");
    (0..1u32 << names.len()).all(|bits| {
        let v: BTreeMap<String, bool> = names.iter().enumerate().map(|(i, n)| (n.clone(), bits >> i & 1 == 1)).collect();
        !premises.iter().all(|p| truth(p, &v)) || truth(conclusion, &v)
    })
}

fn random_formula(rng: &mut StdRng, depth: u32) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..6) {
            0 => Formula::Falsum,
            1 => Formula::pred("P", vec![Term::var("x")]),
            2 => Formula::pred("Q", vec![Term::constant("a")]),
            n => Formula::atom(["p", "q", "r"][n - 3]),
        };
    }
    let sub = |rng: &mut StdRng| random_formula(rng, depth - 1);
    match rng.gen_range(0..6) {
        0 => Formula::not(sub(rng)),
        1 => Formula::and(sub(rng), sub(rng)),
        2 => Formula::or(sub(rng), sub(rng)),
        3 => Formula::implies(sub(rng), sub(rng)),
        4 => Formula::forall("x", sub(rng)),
        _ => Formula::exists("x", sub(rng)),
    }
}

/// A session built from a random sequent by random valid commands:
/// applications, undos, redos, selections and palette toggles.
pub fn fuzz_session(rng: &mut StdRng, steps: usize) -> Session {
    let system = match rng.gen_range(0..3) {
        0 => SystemProfile::nj(),
        1 => SystemProfile::nk(),
        _ => SystemProfile::pa(),
    };
    let premises = (0..rng.gen_range(0..3)).map(|_| random_formula(rng, 3)).collect();
    let mut s = Session::new(premises, random_formula(rng, 4), system);
    let witnesses = [Term::constant("a"), Term::var("x"), Term::succ(Term::zero())];
    for _ in 0..steps {
        match rng.gen_range(0..10) {
            0 => {
                let _ = s.undo();
            }
            1 => {
                let _ = s.redo();
            }
            2 => {
                let rule = RuleId::LOGICAL.choose(rng).unwrap().clone();
                s.set_palette(rule, rng.gen_bool(0.5)).unwrap();
            }
            3 => {
                if let Some(&g) = s.state().goals().choose(rng) {
                    s.select_goal(g).unwrap();
                }
            }
            _ => {
                let options = moves(s.state(), &witnesses);
                if let Some(app) = options.choose(rng) {
                    s.apply(app).unwrap();
                }
            }
        }
    }
    s
}

/// Paper construction on a fresh NK session.
pub fn paper_session() -> Session {
    let script = ndp::script::Script::from_json(&read("fixtures/paper.json")).unwrap();
    let run = script.run(None).unwrap();
    assert!(run.failure.is_none());
    run.session
}
