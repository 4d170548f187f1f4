use pnl_core::dynamic::{check_dproof, prove_dds, DSearchOutcome, RelationalSequent};
use pnl_core::game::{build_game_tree, solve, GameState, Mode, Player, Role};
use pnl_core::model::{
    check_frame, enumerate_models, eval_at, eval_nominal, kripke_eval, FrameClass, NetworkModel,
};
use pnl_core::parse_formula;
use pnl_core::random::{self, Vocabulary};
use pnl_core::sequent::{
    check_proof, elementary_winning, prove, Budget, LabeledFormula, SearchOutcome, Sequent,
};
use pnl_core::syntax::{render, Formula, LinkKind, Nominal, Sign};
use proptest::prelude::*;

fn vocab() -> Vocabulary {
    Vocabulary::new(&["p", "q"], &["i", "j", "k"])
}

fn both_classes() -> impl Strategy<Value = FrameClass> {
    prop_oneof![
        Just(FrameClass::Pnl),
        Just(FrameClass::CollectivelyConnected)
    ]
}

fn winner(m: &NetworkModel, g: GameState, mode: Mode) -> Player {
    solve(build_game_tree(m, &g.with_snapshot(m.clone()), mode).unwrap()).winner()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn ascii_round_trip(seed: u64, d in 0usize..5) {
        let v = vocab().relational(true).dynamic(true);
        let f = random::formula(&mut random::rng(seed), d, &v);
        prop_assert_eq!(parse_formula(&render::ascii(&f)).unwrap(), f);
    }

    #[test]
    fn degree_drops_at_every_child(seed: u64, d in 0usize..6) {
        let f = random::formula(&mut random::rng(seed), d, &vocab().relational(true).dynamic(true));
        for g in f.subformulas() {
            for c in g.children() {
                prop_assert!(c.degree() < g.degree());
            }
        }
    }

    #[test]
    fn renaming_to_a_fresh_nominal_is_undone(seed: u64, d in 0usize..5) {
        let f = random::formula(&mut random::rng(seed), d, &vocab().relational(true));
        let (i, fresh) = (Nominal::new("i"), Nominal::new("zz"));
        let g = f.rename_nominal(&i, &fresh);
        prop_assert!(!g.nominals().contains(&i));
        prop_assert_eq!(g.rename_nominal(&fresh, &i), f);
    }

    #[test]
    fn flips_are_inverse_and_updates_stay_in_frame(seed: u64) {
        let mut r = random::rng(seed);
        let m = random::model(&mut r, 3, &vocab(), FrameClass::Pnl);
        for a in 0..m.len() {
            for b in 0..m.len() {
                for to in [Sign::Plus, Sign::Minus] {
                    if let Ok(n) = m.flip_link_at(a, b, to) {
                        prop_assert!(check_frame(&n, FrameClass::Pnl).is_empty());
                        let back = n.flip_link_at(a, b, to.opposite()).unwrap();
                        prop_assert_eq!(back.fingerprint(), m.fingerprint());
                    }
                    if let Ok(n) = m.add_link_at(a, b, to) {
                        prop_assert!(check_frame(&n, FrameClass::Pnl).is_empty());
                        prop_assert!(n.related(to, a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn either_link_is_plus_or_minus(seed: u64, d in 0usize..3) {
        let mut r = random::rng(seed);
        let v = vocab().dynamic(true);
        let m = random::model(&mut r, 3, &v, FrameClass::Pnl);
        let g = random::formula(&mut r, d, &v);
        for a in 0..m.len() {
            let at = |k| eval_at(&m, a, &Formula::add_link(k, g.clone())).unwrap();
            prop_assert_eq!(at(LinkKind::Either), at(LinkKind::Plus) || at(LinkKind::Minus));
        }
    }

    #[test]
    fn nominal_evaluation_agrees_on_named_models(seed: u64, d in 0usize..5) {
        let mut r = random::rng(seed);
        let v = vocab().relational(true);
        let m = random::model(&mut r, 3, &v, FrameClass::Pnl);
        prop_assume!(m.is_named());
        let f = random::formula(&mut r, d, &v);
        for (i, a) in m.nominals() {
            prop_assert_eq!(eval_nominal(&m, i, &f).unwrap(), eval_at(&m, a, &f).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn game_winner_is_truth(seed: u64, d in 0usize..6, dynamic: bool) {
        let mut r = random::rng(seed);
        let v = vocab().relational(true).dynamic(dynamic);
        let m = random::model(&mut r, 3, &v, FrameClass::Pnl);
        let f = random::formula(&mut r, if dynamic { d.min(3) } else { d }, &v);
        let a = m.agent(0).clone();
        let truth = kripke_eval(&m, &a, &f).unwrap();
        let w = winner(&m, GameState::at_agent(Role::P, a.as_str(), f.clone()), Mode::Agent);
        prop_assert_eq!(w == Player::Me, truth);
        let w = winner(&m, GameState::at_agent(Role::O, a.as_str(), f), Mode::Agent);
        prop_assert_eq!(w == Player::You, truth);
    }

    #[test]
    fn agent_and_nominal_games_agree(seed: u64, d in 0usize..5) {
        let mut r = random::rng(seed);
        let v = vocab().relational(true);
        let m = random::model(&mut r, 3, &v, FrameClass::Pnl);
        prop_assume!(m.is_named());
        let f = random::formula(&mut r, d, &v);
        let i = Nominal::new("i");
        let a = m.agent(m.denote(&i).unwrap()).clone();
        let by_agent = winner(&m, GameState::at_agent(Role::P, a.as_str(), f.clone()), Mode::Agent);
        let by_name = winner(&m, GameState::at_nominal(Role::P, "i", f), Mode::Nominal);
        prop_assert_eq!(by_agent, by_name);
    }

    #[test]
    fn elementary_winning_is_validity(seed: u64, fc in both_classes()) {
        let v = Vocabulary::new(&["p"], &["i", "j", "k"]);
        let s = random::elementary_sequent(&mut random::rng(seed), 3, &v);
        let names = v.nominals.iter().cloned().collect();
        let props = v.props.iter().cloned().collect();
        let valid = !enumerate_models(3, &props, &names, fc).any(|m| s.falsified_by(&m));
        prop_assert_eq!(elementary_winning(&s, fc).unwrap().is_some(), valid, "{}", s);
    }

    #[test]
    fn winning_is_monotone(seed: u64, fc in both_classes()) {
        let v = Vocabulary::new(&["p"], &["i", "j", "k"]);
        let mut r = random::rng(seed);
        let s = random::elementary_sequent(&mut r, 3, &v);
        let extra = random::elementary_sequent(&mut r, 2, &v);
        let bigger = Sequent::new(
            s.gamma.iter().chain(&extra.gamma).cloned().collect(),
            s.delta.iter().chain(&extra.delta).cloned().collect(),
        );
        if elementary_winning(&s, fc).unwrap().is_some() {
            prop_assert!(elementary_winning(&bigger, fc).unwrap().is_some());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn search_outcomes_are_checked(seed: u64, d in 0usize..3, fc in both_classes()) {
        let mut r = random::rng(seed);
        let v = Vocabulary::new(&["p", "q"], &["i", "j"]);
        let f = random::formula(&mut r, d, &v);
        let s = Sequent::new(vec![], vec![LabeledFormula::labeled("i", f)]);
        match prove(&s, fc, Budget::default()) {
            SearchOutcome::Proved(p) => prop_assert_eq!(check_proof(&p, fc), Ok(())),
            SearchOutcome::Refuted { model, .. } => {
                prop_assert!(s.falsified_by(&model));
                prop_assert!(check_frame(&model, fc).is_empty());
            }
            SearchOutcome::Unknown(_) => {}
        }
    }

    #[test]
    fn global_excluded_middle_is_proved(seed: u64, d in 0usize..3) {
        let f = random::formula(&mut random::rng(seed), d, &Vocabulary::new(&["p", "q"], &[]));
        let g = Formula::global(Formula::or(f.clone(), Formula::not(f)));
        let s = Sequent::new(vec![], vec![LabeledFormula::labeled("i", g)]);
        let out = prove(&s, FrameClass::Pnl, Budget::default());
        let p = out.proof();
        prop_assert!(p.is_some());
        prop_assert_eq!(check_proof(p.unwrap(), FrameClass::Pnl), Ok(()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dynamic_proofs_check_and_hold(seed: u64, d in 0usize..3) {
        let v = Vocabulary::new(&["p"], &["i"]).dynamic(true);
        let f = random::formula(&mut random::rng(seed), d, &v);
        let s = RelationalSequent::new([], vec![], vec![LabeledFormula::labeled("i", f)]);
        if let DSearchOutcome::Proved(p) = prove_dds(&s, Budget::default()).unwrap() {
            prop_assert_eq!(check_dproof(&p), Ok(()));
            let names = ["i".into(), "z".into()].into_iter().collect();
            let props = ["p".into()].into_iter().collect();
            for m in enumerate_models(2, &props, &names, FrameClass::Pnl) {
                prop_assert!(!s.falsified_by(&m), "{}\n{}", s, m);
            }
        }
    }
}
