//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fail.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{fixture, fuzz_session, ndp, read, valid};
use ndp::persist;
use ndp::script::Script;
use ndp_core::formula::parse_infix;
use ndp_core::rules::{moves, MAGIC_ROUNDS};
use ndp_core::{
    check_proof, list_applicable, magic, replay, CheckStatus, ProofState, RuleApplication, RuleId, Session, Side,
    SystemProfile,
};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

/// Wall-clock limit for the two interactive-scale criteria.
const RUNTIME_LIMIT: Duration = Duration::from_secs(1);
const CORPUS_MIN: usize = 30;
const CORPUS_MAX_ATOMS: usize = 4;
const PERSIST_SESSIONS: u64 = 1000;
const UNDO_SESSIONS: u64 = 1000;
const UNDO_MAX_DEPTH: usize = 12;
const PAPER_FRAMES: usize = 7 + 1;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn path(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

fn paper_reproduction() -> Outcome {
    let start = Instant::now();
    let r = ndp(&["prove", &path("fixtures/paper.json")]);
    let elapsed = start.elapsed();
    ensure(r.code == 0, format!("exit {} ({})", r.code, r.stderr.trim()))?;
    let golden = read("golden/paper.txt");
    ensure(r.stdout == format!("{golden}status: Complete\n"), format!("render differs:\n{}", r.stdout))?;
    let run = Script::from_json(&read("fixtures/paper.json")).unwrap().run(None).unwrap();
    let rows = run.session.state().render().rows;
    let order: Vec<u32> = rows.iter().map(|r| r.creation).collect();
    ensure(order == [1, 3, 5, 9, 6, 7, 10, 8, 4, 2], format!("vertical order {order:?}"))?;
    let expected = [(2, "3-4,¬I"), (4, "1,5-6,7-8,∨E"), (6, "5,9,¬E"), (9, "3,∧E"), (8, "7,10,¬E"), (10, "3,∧E")];
    for (n, j) in expected {
        let got = rows.iter().find(|r| r.creation == n).unwrap().justification_text();
        ensure(got == j, format!("line {n}: {got} != {j}"))?;
    }
    ensure(elapsed < RUNTIME_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("golden render matched in {elapsed:?}"))
}

fn labels(st: &ProofState) -> Vec<String> {
    list_applicable(st).iter().flat_map(|a| a.labels()).collect()
}

fn palette_demo() -> Outcome {
    let start = Instant::now();
    let nj = Session::new(vec![], parse_infix("p ∨ ¬p").unwrap(), SystemProfile::nj());
    let offered = labels(nj.state());
    ensure(offered == ["∨I-left", "∨I-right"], format!("NJ offers {offered:?}"))?;
    for side in [Side::Left, Side::Right] {
        let mut s = nj.clone();
        s.apply(&RuleApplication::new(RuleId::OrI, 1).side(side)).map_err(|e| e.to_string())?;
        // The right branch first unpacks ¬p with ¬I to reach its atomic goal ⊥.
        if side == Side::Right {
            ensure(labels(s.state()) == ["¬I"], format!("¬p offers {:?}", labels(s.state())))?;
            s.apply(&RuleApplication::new(RuleId::NotI, 2)).map_err(|e| e.to_string())?;
        }
        let goal = s.state().selection.goal.unwrap();
        let stuck = labels(s.state());
        ensure(stuck.is_empty(), format!("{side:?}: goal {goal} still offers {stuck:?}"))?;
    }
    let dir = tempfile::tempdir().unwrap();
    let save = dir.path().join("lem.ndp");
    let r = ndp(&["prove", &path("fixtures/excluded_middle_nk.json"), "--save", save.to_str().unwrap()]);
    ensure(r.code == 0, format!("NK script exit {}", r.code))?;
    let st = persist::load(&save).map_err(|e| e.to_string())?;
    ensure(check_proof(st.state()).status == CheckStatus::Complete, "checker disagrees")?;
    let r = ndp(&["prove", &path("fixtures/excluded_middle_nj.json")]);
    ensure(r.code == 1 && r.stderr.starts_with("step 1: RuleDisabled"), format!("NJ palette: {}", r.stderr.trim()))?;
    let elapsed = start.elapsed();
    ensure(elapsed < RUNTIME_LIMIT, format!("took {elapsed:?}"))?;
    Ok(format!("NJ stuck on both branches, NK complete, {elapsed:?}"))
}

fn checker_soundness() -> Outcome {
    let mut files: Vec<_> = std::fs::read_dir(fixture("corpus")).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    ensure(files.len() >= CORPUS_MIN, format!("only {} scripts", files.len()))?;
    let dir = tempfile::tempdir().unwrap();
    for f in &files {
        let name = f.file_name().unwrap().to_string_lossy().into_owned();
        let script = Script::from_json(&std::fs::read_to_string(f).unwrap()).map_err(|e| format!("{name}: {e}"))?;
        ensure(script.profile(None).unwrap().name == ndp_core::SystemName::NK, format!("{name}: not NK"))?;
        let (premises, conclusion) = script.sequent().unwrap();
        let mut atoms = std::collections::BTreeSet::new();
        for f in premises.iter().chain([&conclusion]) {
            atoms.extend(f.names().into_iter().filter(|n| parse_infix(n).is_ok()));
        }
        ensure(atoms.len() <= CORPUS_MAX_ATOMS, format!("{name}: {} atoms", atoms.len()))?;
        let save = dir.path().join(format!("{name}.ndp"));
        let r = ndp(&["prove", f.to_str().unwrap(), "--save", save.to_str().unwrap()]);
        let checked = ndp(&["check", save.to_str().unwrap()]);
        let complete = r.code == 0 && checked.code == 0;
        let oracle = valid(&premises, &conclusion);
        ensure(complete && oracle, format!("{name}: checker complete={complete}, truth tables valid={oracle}"))?;
    }
    Ok(format!("{} scripts complete and valid, 0 disagreements", files.len()))
}

fn eigenvariable() -> Outcome {
    let r = ndp(&["prove", &path("fixtures/forgery.json")]);
    ensure(r.code == 1 && r.stderr.contains("EigenvariableViolation"), format!("forged script: {}", r.stderr.trim()))?;
    let r = ndp(&["check", &path("fixtures/forgery.ndp")]);
    ensure(
        r.code == 1 && r.stdout.starts_with("2:EigenvariableViolation:"),
        format!("forged file: {}", r.stdout.trim()),
    )?;
    let r = ndp(&["prove", &path("fixtures/forall_and.json")]);
    ensure(r.code == 0 && r.stdout.ends_with("status: Complete\n"), "∀x(P(x)∧Q(x)) ⊢ ∀x P(x) not complete")?;
    Ok("forgery rejected by engine and checker, legitimate proof complete".into())
}

fn magic_mode() -> Outcome {
    let f = |s: &str| parse_infix(s).unwrap();
    let st = Session::new(vec![], f("p → (q → p)"), SystemProfile::nj()).state().clone();
    let out = magic(&st);
    ensure(out.state.is_complete(), "p → (q → p) not complete")?;
    let st = Session::new(vec![], f("p ∨ q"), SystemProfile::nj()).state().clone();
    let out = magic(&st);
    ensure(out.applications.is_empty() && out.state == st, "magic changed p ∨ q")?;
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("magic.json");
    std::fs::write(&script, r#"{"conclusion": "p → (q → p)", "steps": ["magic"]}"#).unwrap();
    ensure(ndp(&["prove", script.to_str().unwrap()]).code == 0, "magic script not complete")?;
    // Twelve nested implications need thirteen rounds; magic must stop at ten.
    let deep = goals_deep();
    let mut max_rounds = 0;
    let mut rng = StdRng::seed_from_u64(5);
    let mut goals = vec![deep];
    goals.extend((0..200).map(|_| common_formula(&mut rng)));
    for g in goals {
        let out = magic(&Session::new(vec![], g, SystemProfile::nk()).state().clone());
        max_rounds = max_rounds.max(out.rounds);
        ensure(out.rounds <= MAGIC_ROUNDS, format!("{} rounds", out.rounds))?;
    }
    ensure(max_rounds == MAGIC_ROUNDS, format!("limit never reached (max {max_rounds})"))?;
    let out = magic(&Session::new(vec![], goals_deep(), SystemProfile::nk()).state().clone());
    ensure(!out.state.is_complete() && out.applications.len() == MAGIC_ROUNDS, "deep goal not cut off at the limit")?;
    Ok(format!("complete, no-op, and at most {MAGIC_ROUNDS} rounds over 201 goals"))
}

fn goals_deep() -> ndp_core::Formula {
    let p = parse_infix("p").unwrap();
    (0..12).fold(p.clone(), |acc, _| ndp_core::Formula::implies(p.clone(), acc))
}

fn common_formula(rng: &mut StdRng) -> ndp_core::Formula {
    use ndp_core::Formula;
    fn go(rng: &mut StdRng, d: u32) -> Formula {
        if d == 0 || rng.gen_bool(0.2) {
            return Formula::atom(*["p", "q", "r"].choose(rng).unwrap());
        }
        match rng.gen_range(0..4) {
            0 => Formula::not(go(rng, d - 1)),
            1 => Formula::and(go(rng, d - 1), go(rng, d - 1)),
            2 => Formula::or(go(rng, d - 1), go(rng, d - 1)),
            _ => Formula::implies(go(rng, d - 1), go(rng, d - 1)),
        }
    }
    go(rng, 8)
}

fn persistence() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..PERSIST_SESSIONS {
        let mut rng = StdRng::seed_from_u64(seed);
        let s = fuzz_session(&mut rng, 25);
        let (a, b) = (dir.path().join("s.ndp"), dir.path().join("s.ndu"));
        persist::save(&s, &a).map_err(|e| e.to_string())?;
        persist::save(&s, &b).map_err(|e| e.to_string())?;
        ensure(std::fs::read(&a).unwrap() == std::fs::read(&b).unwrap(), format!("seed {seed}: .ndp != .ndu"))?;
        let back = persist::load(&a).map_err(|e| format!("seed {seed}: {e}"))?;
        // Selections are not saved; compare everything else.
        let strip = |st: &ProofState| ProofState { selection: Default::default(), ..st.clone() };
        ensure(strip(back.state()) == strip(s.state()), format!("seed {seed}: state differs"))?;
        ensure(back.events() == s.events() && back.cursor() == s.cursor(), format!("seed {seed}: history differs"))?;
    }
    let doc = persist::read_document(&fixture("fixtures/paper.ndp")).map_err(|e| e.to_string())?;
    let panel = replay(&doc, 2).map_err(|e| e.to_string())?;
    let rows = panel.render().rows;
    let order: Vec<u32> = rows.iter().map(|r| r.creation).collect();
    let goals: Vec<u32> = rows.iter().filter(|r| r.justification.is_none()).map(|r| r.creation).collect();
    ensure(order == [1, 3, 5, 6, 7, 8, 4, 2] && goals == [6, 8], format!("replay(doc,2) rows {order:?} goals {goals:?}"))?;
    let j4 = rows.iter().find(|r| r.creation == 4).unwrap().justification_text();
    ensure(j4 == "1,5-6,7-8,∨E", format!("line 4: {j4}"))?;
    Ok(format!("{PERSIST_SESSIONS} fuzzed sessions round-trip; third panel reproduced"))
}

fn undo_inversion() -> Outcome {
    let f = |s: &str| parse_infix(s).unwrap();
    let problems = [
        (vec![f("¬p ∨ ¬q")], f("¬(p ∧ q)")),
        (vec![], f("p ∨ ¬p")),
        (vec![f("∀x (P(x) ∧ Q(x))")], f("∀x P(x) ∧ ∃y Q(y)")),
        (vec![f("p → q"), f("q → r")], f("(p ∨ r) → r ∧ ¬¬q")),
    ];
    let witnesses = [ndp_core::Term::constant("a"), ndp_core::Term::var("x")];
    for seed in 0..UNDO_SESSIONS {
        let mut rng = StdRng::seed_from_u64(seed);
        let (premises, conclusion) = problems.choose(&mut rng).unwrap().clone();
        let system = if rng.gen_bool(0.5) { SystemProfile::nk() } else { SystemProfile::pa() };
        let mut s = Session::new(premises, conclusion, system);
        let initial = s.state().clone();
        let depth = rng.gen_range(1..=UNDO_MAX_DEPTH);
        let mut k = 0;
        for _ in 0..depth {
            let Some(app) = moves(s.state(), &witnesses).choose(&mut rng).cloned() else { break };
            s.apply(&app).map_err(|e| format!("seed {seed}: {e}"))?;
            k += 1;
        }
        for _ in 0..k {
            s.undo().map_err(|e| format!("seed {seed}: {e}"))?;
        }
        ensure(s.state() == &initial, format!("seed {seed}: {k} undos did not restore the start"))?;
    }
    Ok(format!("{UNDO_SESSIONS} sessions of depth ≤ {UNDO_MAX_DEPTH} restored exactly"))
}

fn export_fidelity() -> Outcome {
    let r = ndp(&["export", &path("fixtures/paper.ndp"), "--format", "latex"]);
    ensure(r.code == 0 && r.stdout == read("golden/paper.tex"), "LaTeX differs from golden")?;
    let r = ndp(&["export", &path("fixtures/paper.ndp"), "--format", "text"]);
    ensure(r.code == 0 && r.stdout == read("golden/paper.txt"), "text differs from golden")?;
    let dir = tempfile::tempdir().unwrap();
    let r = ndp(&["export", &path("fixtures/paper.ndp"), "--format", "frames", "--out", dir.path().to_str().unwrap()]);
    ensure(r.code == 0, "frames export failed")?;
    let frames = std::fs::read_dir(dir.path()).unwrap().count();
    ensure(
        frames == PAPER_FRAMES,
        format!("goldens match, but frames export yields {frames} frames, expected {PAPER_FRAMES}"),
    )?;
    Ok(format!("goldens match, {frames} frames"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        ("paper-proof reproduction", paper_reproduction),
        ("palette pedagogy demo", palette_demo),
        ("checker soundness at desk scale", checker_soundness),
        ("eigenvariable enforcement", eigenvariable),
        ("magic mode", magic_mode),
        ("persistence", persistence),
        ("undo inversion", undo_inversion),
        ("export fidelity", export_fidelity),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
