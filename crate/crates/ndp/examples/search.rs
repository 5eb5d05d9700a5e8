//! Finds a proof of a propositional sequent by bounded search and prints it
//! as a script for `ndp prove`.
//!
//! ```text
//! cargo run -p ndp --example search -- "p ∧ q" "q ∧ p"
//! ```
//! The last argument is the conclusion, the others are premises.

use ndp_core::formula::print_unicode;
use ndp_core::rules::{moves, RuleClass, RuleKind};
use ndp_core::{apply_rule, ApplyMode, ProofState, RuleApplication, RuleId, Session, SystemProfile};
use ndp::script::{ApplyStep, Script, Step};
use ndp::wire::parse_formula;

fn rank(app: &RuleApplication) -> u8 {
    match app.rule {
        RuleId::Re => 0,
        _ if app.rule.class() == RuleClass::Automatic && app.rule.kind() == RuleKind::Backward => 1,
        RuleId::DoubleNegE => 4,
        RuleId::FalsumE => 3,
        _ => 2,
    }
}

/// Depth-first search on the newest goal, at most `budget` more steps.
fn search(st: &ProofState, budget: usize, path: &mut Vec<RuleApplication>) -> bool {
    let Some(&goal) = st.goals().last() else { return true };
    if budget == 0 {
        return false;
    }
    let mut options: Vec<RuleApplication> = moves(st, &[]).into_iter().filter(|a| a.goal == goal).collect();
    options.sort_by_key(rank);
    // Re and the automatic rules never lose provability: take the first.
    if let Some(first) = options.first() {
        if rank(first) <= 1 {
            options.truncate(1);
        }
    }
    for app in options {
        let applied = apply_rule(st, &app, ApplyMode::Interactive).expect("moves are applicable");
        path.push(applied.record);
        if search(&applied.state, budget - 1, path) {
            return true;
        }
        path.pop();
    }
    false
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (conclusion, premises) = args.split_last().expect("usage: search PREMISE... CONCLUSION");
    let parse = |s: &String| parse_formula(s).unwrap_or_else(|e| panic!("{s}: {e}"));
    let session = Session::new(premises.iter().map(parse).collect(), parse(conclusion), SystemProfile::nk());
    for budget in 1..=24 {
        let mut path = Vec::new();
        if search(session.state(), budget, &mut path) {
            let steps = path
                .iter()
                .map(|a| {
                    let e = ndp::wire::EventDto::from_app(a);
                    Step::Apply(ApplyStep {
                        rule: e.rule,
                        goal: Some(e.goal),
                        resource: e.resource,
                        side: e.side,
                        witness: e.witness,
                        line: e.line,
                        bindings: e.bindings,
                    })
                })
                .collect();
            let script = Script {
                system: Some("NK".into()),
                axioms: Vec::new(),
                palette: None,
                premises: premises.iter().map(|p| print_unicode(&parse(p))).collect(),
                conclusion: print_unicode(&parse(conclusion)),
                steps,
            };
            println!("{}", serde_json::to_string_pretty(&script).unwrap());
            return;
        }
    }
    eprintln!("no proof within 24 steps");
    std::process::exit(1);
}
