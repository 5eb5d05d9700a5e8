mod common;

use common::{fixture, fuzz_session, paper_session};
use ndp::persist::{self, mode_for_path, PersistError};
use ndp_core::{check_proof, replay, CheckStatus, DiagCode, Mode, ProofState, Session};
use rand::rngs::StdRng;
use rand::SeedableRng;

#[test]
fn demo_and_editable_files_hold_the_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let s = paper_session();
    let (a, b) = (dir.path().join("p.ndp"), dir.path().join("p.ndu"));
    persist::save(&s, &a).unwrap();
    persist::save(&s, &b).unwrap();
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(persist::load(&a).unwrap().mode(), Mode::Editable);
    assert_eq!(persist::load(&b).unwrap().mode(), Mode::Demo);
}

/// Selections are not saved; everything else must survive.
fn proof_only(st: &ProofState) -> ProofState {
    ProofState { selection: Default::default(), ..st.clone() }
}

#[test]
fn save_load_save_is_stable() {
    let mut rng = StdRng::seed_from_u64(11);
    let dir = tempfile::tempdir().unwrap();
    for i in 0..100 {
        let s = fuzz_session(&mut rng, 30);
        let path = dir.path().join(format!("s{i}.ndp"));
        persist::save(&s, &path).unwrap();
        let back = persist::load(&path).unwrap();
        assert_eq!(proof_only(back.state()), proof_only(s.state()));
        assert_eq!(back.cursor(), s.cursor());
        assert_eq!(back.events(), s.events());
        let again = dir.path().join(format!("t{i}.ndp"));
        persist::save(&back, &again).unwrap();
        assert_eq!(std::fs::read(&path).unwrap(), std::fs::read(&again).unwrap());
    }
}

#[test]
fn truncated_and_unknown_files_are_rejected() {
    let text = persist::to_string(&paper_session().to_document());
    for cut in [0, 1, text.len() / 3, text.len() - 3] {
        assert!(matches!(persist::from_str(&text[..cut]), Err(PersistError::Json(_))), "cut at {cut}");
    }
    let extra = text.replacen("\"events\"", "\"colour\": 1,\n  \"events\"", 1);
    assert!(matches!(persist::from_str(&extra), Err(PersistError::Json(_))));
    let bad = text.replace("\\\\con{p}{q}", "\\\\con{p}");
    assert!(matches!(persist::from_str(&bad), Err(PersistError::Input(_))));
    assert!(matches!(persist::load(&fixture("missing.ndp")), Err(PersistError::Io { .. })));
}

#[test]
fn third_panel_is_replay_of_two_events() {
    let doc = paper_session().to_document();
    let st = replay(&doc, 2).unwrap();
    let rows = st.render().rows;
    let order: Vec<u32> = rows.iter().map(|r| r.creation).collect();
    assert_eq!(order, [1, 3, 5, 6, 7, 8, 4, 2]);
    let goals: Vec<u32> = rows.iter().filter(|r| r.justification.is_none()).map(|r| r.creation).collect();
    assert_eq!(goals, [6, 8]);
}

#[test]
fn loading_ignores_the_palette() {
    let s = paper_session();
    let mut doc = s.to_document();
    doc.palette.clear();
    let back = Session::from_document(&doc, Mode::Editable).unwrap();
    assert!(back.state().is_complete());
    assert!(back.state().palette.is_empty());
}

#[test]
fn hand_edited_forgery_loads_but_fails_the_check() {
    let s = persist::load(&fixture("fixtures/forgery.ndp")).unwrap();
    let report = check_proof(s.state());
    assert_eq!(report.status, CheckStatus::Invalid);
    assert!(report.diagnostics.iter().any(|d| d.code == DiagCode::EigenvariableViolation && d.line == 2));
}

#[test]
fn extension_decides_mode() {
    assert_eq!(mode_for_path(std::path::Path::new("a/b.ndu")), Mode::Demo);
    assert_eq!(mode_for_path(std::path::Path::new("a/b.NDU")), Mode::Editable);
}

mod props {
    use ndp::persist;
    use ndp_core::formula::{Formula, Term};
    use ndp_core::{ProofDocument, SystemProfile};
    use proptest::prelude::*;

    fn term() -> impl Strategy<Value = Term> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["x", "y"]).prop_map(Term::var),
            prop::sample::select(vec!["a", "b"]).prop_map(Term::constant),
            Just(Term::zero()),
        ];
        leaf.prop_recursive(2, 6, 2, |t| {
            prop_oneof![t.clone().prop_map(Term::succ), (t.clone(), t).prop_map(|(a, b)| Term::plus(a, b))]
        })
    }

    fn formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            prop::sample::select(vec!["p", "q"]).prop_map(Formula::atom),
            Just(Formula::Falsum),
            term().prop_map(|t| Formula::pred("P", vec![t])),
            (term(), term()).prop_map(|(a, b)| Formula::equals(a, b)),
        ];
        leaf.prop_recursive(5, 32, 2, |f| {
            prop_oneof![
                f.clone().prop_map(Formula::not),
                (f.clone(), f.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (f.clone(), f.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (f.clone(), f.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                f.clone().prop_map(|a| Formula::forall("x", a)),
                f.prop_map(|a| Formula::exists("y", a)),
            ]
        })
    }

    proptest! {
        #[test]
        fn documents_round_trip(premises in prop::collection::vec(formula(), 0..3), conclusion in formula()) {
            let doc = ProofDocument::new(premises, conclusion, SystemProfile::pa());
            let text = persist::to_string(&doc);
            let back = persist::from_str(&text).unwrap();
            prop_assert_eq!(&back, &doc);
            prop_assert_eq!(persist::to_string(&back), text);
        }
    }
}
