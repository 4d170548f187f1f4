//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use pnl_cli::run;
use pnl_core::dynamic::{
    check_dproof, parse_relational_sequent, prove_dds, DProof, DRule, DSearchOutcome, RelAtom,
    RelationalSequent,
};
use pnl_core::exec::Exec;
use pnl_core::game::{build_game_tree, solve, GameState, Mode, Player, Role};
use pnl_core::model::{check_frame, enumerate_models, kripke_eval, FrameClass, NetworkModel};
use pnl_core::random::{self, Vocabulary};
use pnl_core::sequent::{
    admissible_weakening, check_proof, elementary_winning, parse_labeled, parse_sequent, prove,
    Budget, LabeledFormula, Proof, Rule, SearchOutcome, Sequent, Side,
};
use pnl_core::syntax::{Formula, LinkKind, Sign};
use std::collections::BTreeSet;
use std::time::{Duration, Instant};

const GOLDEN_LIMIT: Duration = Duration::from_secs(1);
const ADEQUACY_INSTANCES: usize = 500;
const ADEQUACY_LIMIT: Duration = Duration::from_secs(60);
const STATIC_DEGREE: usize = 5;
const DYNAMIC_DEGREE: usize = 3;
const MODE_INSTANCES: usize = 200;
const ELEMENTARY_INSTANCES: usize = 300;
const TAUTOLOGY_INSTANCES: usize = 50;
const CORPUS_FORMULAS: usize = 150;
const DYNAMIC_FORMULAS: usize = 150;

const CONNECTEDNESS: &str = ". => i:([+]p -> [A]p) | ([-]p -> [A]p)";

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, n: usize, title: &str, result: Result<String, String>) {
        match result {
            Ok(detail) => println!("criterion {n}: PASS  {title} ({detail})"),
            Err(why) => {
                self.failures += 1;
                println!("criterion {n}: FAIL  {title} ({why})");
            }
        }
    }
}

fn check(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn model_path(name: &str) -> String {
    format!("{}/../../models/{name}.pnl", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv = std::iter::once("pnl").chain(args.iter().copied());
    let code = run(argv, &mut &b""[..], &mut out, &mut Vec::new());
    (code, String::from_utf8(out).expect("utf-8 output"))
}

fn golden() -> Result<String, String> {
    let dir = format!("{}/../core/tests/golden", env!("CARGO_MANIFEST_DIR"));
    let cases = [
        ("M1", "lb(p)", false, "m1_lb.txt"),
        ("M2", "lb(p)", true, "m2_lb_tree.txt"),
        ("M2", "~ lb(p)", false, "m2_not_lb.txt"),
        ("M2", "(-) lb(p)", false, "m2_flipminus_lb.txt"),
        ("M2", "~ ((-) (-) lb(p))", false, "m2_not_flipminus2_lb.txt"),
        (
            "M2",
            "<+> (+) [A] [-] (p /\\ ~ p)",
            false,
            "m2_reconciliation.txt",
        ),
    ];
    let mut slowest = Duration::ZERO;
    for (m, f, tree, file) in cases {
        let expected =
            std::fs::read_to_string(format!("{dir}/{file}")).map_err(|e| format!("{file}: {e}"))?;
        let code = if expected.starts_with("[✔") { 0 } else { 1 };
        let path = model_path(m);
        let view = if tree { "--tree" } else { "--strategy" };
        let start = Instant::now();
        let (got_code, got) = cli(&["solve", &path, "a", f, view]);
        let took = start.elapsed();
        slowest = slowest.max(took);
        check(got == expected, || format!("{file}: output differs"))?;
        check(got_code == code, || {
            format!("{file}: exit {got_code}, expected {code}")
        })?;
        check(took < GOLDEN_LIMIT, || format!("{file}: took {took:?}"))?;
    }
    Ok(format!("6 transcripts, slowest {slowest:?}"))
}

fn winner(m: &NetworkModel, g: GameState, mode: Mode) -> Result<Player, String> {
    let t = build_game_tree(m, &g.with_snapshot(m.clone()), mode).map_err(|e| e.to_string())?;
    Ok(solve(t).winner())
}

fn adequacy() -> Result<String, String> {
    let start = Instant::now();
    let mut dynamic = 0;
    for seed in 0..ADEQUACY_INSTANCES as u64 {
        let mut r = random::rng(1000 + seed);
        let with_dynamic = seed % 2 == 1;
        let v = Vocabulary::new(&["p", "q"], &["i", "j"])
            .relational(true)
            .dynamic(with_dynamic);
        let m = random::model(&mut r, 3, &v, FrameClass::Pnl);
        let degree = (seed as usize / 2)
            % (if with_dynamic {
                DYNAMIC_DEGREE
            } else {
                STATIC_DEGREE
            } + 1);
        let f = random::formula(&mut r, degree, &v);
        dynamic += usize::from(f.is_dynamic());
        let a = m.agent((seed as usize) % m.len()).clone();
        let truth = kripke_eval(&m, &a, &f).map_err(|e| e.to_string())?;
        let role = if seed % 4 < 2 { Role::P } else { Role::O };
        let w = winner(
            &m,
            GameState::at_agent(role, a.as_str(), f.clone()),
            Mode::Agent,
        )?;
        let expected = if (role == Role::P) == truth {
            Player::Me
        } else {
            Player::You
        };
        check(w == expected, || format!("seed {seed}: {f} at {a}"))?;
    }
    let took = start.elapsed();
    check(took < ADEQUACY_LIMIT, || format!("took {took:?}"))?;
    Ok(format!(
        "{ADEQUACY_INSTANCES} instances ({dynamic} dynamic), 0 mismatches, {took:?}"
    ))
}

fn mode_equivalence() -> Result<String, String> {
    let v = Vocabulary::new(&["p", "q"], &["i", "j", "k"]).relational(true);
    let (mut done, mut seed) = (0, 0u64);
    while done < MODE_INSTANCES {
        seed += 1;
        let mut r = random::rng(5000 + seed);
        let m = random::model(&mut r, 3, &v, FrameClass::Pnl);
        if !m.is_named() {
            continue;
        }
        let f = random::formula(&mut r, (seed as usize) % 5, &v);
        let i = &v.nominals[(seed as usize) % 3];
        let a = m.agent(m.denote(i).expect("named")).clone();
        let by_agent = winner(
            &m,
            GameState::at_agent(Role::P, a.as_str(), f.clone()),
            Mode::Agent,
        )?;
        let by_name = winner(
            &m,
            GameState::at_nominal(Role::P, i.as_str(), f.clone()),
            Mode::Nominal,
        )?;
        check(by_agent == by_name, || format!("seed {seed}: {f} at {i}"))?;
        done += 1;
    }
    Ok(format!("{done} named instances, 0 mismatches"))
}

fn elementary_sequents() -> Vec<Sequent> {
    let v = Vocabulary::new(&["p"], &["i", "j", "k"]);
    (0..ELEMENTARY_INSTANCES as u64)
        .map(|seed| random::elementary_sequent(&mut random::rng(9000 + seed), 3, &v))
        .collect()
}

fn elementary_oracle(closing: &mut Vec<(Proof, FrameClass)>) -> Result<String, String> {
    let names: BTreeSet<_> = ["i", "j", "k"].into_iter().map(Into::into).collect();
    let props: BTreeSet<_> = ["p".into()].into_iter().collect();
    let mut winning = 0;
    for fc in [FrameClass::Pnl, FrameClass::CollectivelyConnected] {
        let models: Vec<NetworkModel> = enumerate_models(3, &props, &names, fc).collect();
        for s in elementary_sequents() {
            let w = elementary_winning(&s, fc).map_err(|e| e.to_string())?;
            let valid = !Exec::default().any(&models, |m| s.falsified_by(m));
            check(w.is_some() == valid, || format!("{fc:?}: {s}"))?;
            if let Some(w) = w {
                winning += 1;
                closing.push((w.close(&s), fc));
            }
        }
    }
    Ok(format!(
        "{ELEMENTARY_INSTANCES} sequents x 2 frame classes, {winning} winning, 0 mismatches"
    ))
}

fn root_falsified(s: &Sequent, m: &NetworkModel) -> bool {
    s.members().all(|f| {
        let (label, body) = match f {
            LabeledFormula::Labeled { label, body } => (label.clone(), body.clone()),
            LabeledFormula::Rel(sign, i, j) => {
                (i.clone(), Formula::Rel(*sign, i.clone(), j.clone()))
            }
        };
        let Some(a) = m.denote(&label) else {
            return false;
        };
        kripke_eval(m, m.agent(a), &body).is_ok_and(|truth| truth == s.gamma.contains(f))
    })
}

fn connectedness(proofs: &mut Vec<(Proof, FrameClass)>) -> Result<String, String> {
    let s = parse_sequent(CONNECTEDNESS).map_err(|e| e.to_string())?;
    let cc = FrameClass::CollectivelyConnected;
    let SearchOutcome::Proved(p) = prove(&s, cc, Budget::default()) else {
        return Err("no proof under connected frames".into());
    };
    check_proof(&p, cc).map_err(|v| v.to_string())?;
    let cc_nodes = p.count(Rule::Cc);
    check(cc_nodes == 1, || format!("{cc_nodes} cc nodes"))?;
    let size = p.size();
    proofs.push((p, cc));
    let SearchOutcome::Refuted { model, .. } = prove(&s, FrameClass::Pnl, Budget::default()) else {
        return Err("plain search did not refute".into());
    };
    check(root_falsified(&s, &model), || {
        format!("countermodel does not falsify:\n{model}")
    })?;
    check(check_frame(&model, FrameClass::Pnl).is_empty(), || {
        "countermodel is not a PNL frame".into()
    })?;
    let (code, _) = cli(&["prove", "--cc", CONNECTEDNESS]);
    check(code == 0, || format!("cli exit {code}"))?;
    Ok(format!(
        "cc proof of {size} nodes with one cc; PNL countermodel with {} agents",
        model.len()
    ))
}

fn corpus() -> Vec<(Sequent, FrameClass)> {
    let mut out = vec![
        (parse_sequent(CONNECTEDNESS).unwrap(), FrameClass::Pnl),
        (
            parse_sequent(". => i: [-] p -> p").unwrap(),
            FrameClass::Pnl,
        ),
        (
            parse_sequent(". => i: lb(p)").unwrap(),
            FrameClass::CollectivelyConnected,
        ),
        (
            parse_sequent("i: <+> p => i: [A] p").unwrap(),
            FrameClass::Pnl,
        ),
        (parse_sequent(". => i: <+> p").unwrap(), FrameClass::Pnl),
        (
            parse_sequent("R+(i,j) => j: p, i: <-> p").unwrap(),
            FrameClass::CollectivelyConnected,
        ),
    ];
    let v = Vocabulary::new(&["p", "q"], &["i", "j"]);
    for seed in 0..CORPUS_FORMULAS as u64 {
        let mut r = random::rng(20_000 + seed);
        let f = random::formula(&mut r, (seed as usize) % 3, &v);
        let fc = if seed % 2 == 0 {
            FrameClass::Pnl
        } else {
            FrameClass::CollectivelyConnected
        };
        out.push((
            Sequent::new(vec![], vec![LabeledFormula::labeled("i", f)]),
            fc,
        ));
    }
    out
}

fn refutation_soundness(proofs: &mut Vec<(Proof, FrameClass)>) -> Result<String, String> {
    let (mut refuted, mut proved, mut unknown) = (0, 0, 0);
    for (s, fc) in corpus() {
        match prove(&s, fc, Budget::default()) {
            SearchOutcome::Refuted { model, .. } => {
                refuted += 1;
                check(root_falsified(&s, &model) && s.falsified_by(&model), || {
                    format!("{s}: not falsified")
                })?;
                check(check_frame(&model, fc).is_empty(), || {
                    format!("{s}: not a {fc:?} frame")
                })?;
            }
            SearchOutcome::Proved(p) => {
                proved += 1;
                proofs.push((p, fc));
            }
            SearchOutcome::Unknown(_) => unknown += 1,
        }
    }
    check(refuted > 0, || "corpus produced no refutations".into())?;
    Ok(format!(
        "{refuted} refuted, all verified; {proved} proved, {unknown} unknown"
    ))
}

fn checker_round_trip(mut proofs: Vec<(Proof, FrameClass)>) -> Result<String, String> {
    let v = Vocabulary::new(&["p", "q"], &[]);
    for seed in 0..TAUTOLOGY_INSTANCES as u64 {
        let f = random::formula(&mut random::rng(30_000 + seed), (seed as usize) % 4, &v);
        let g = Formula::global(Formula::or(f.clone(), Formula::not(f)));
        let s = Sequent::new(vec![], vec![LabeledFormula::labeled("i", g)]);
        match prove(&s, FrameClass::Pnl, Budget::default()) {
            SearchOutcome::Proved(p) => proofs.push((p, FrameClass::Pnl)),
            other => return Err(format!("{s}: {other:?}")),
        }
    }
    let extra = [
        (parse_labeled("i: <+> q").unwrap(), Side::Left),
        (parse_labeled("n0: p").unwrap(), Side::Right),
        (LabeledFormula::rel(Sign::Minus, "i", "n1"), Side::Left),
    ];
    let mut weakened = 0;
    for (p, fc) in &proofs {
        check_proof(p, *fc).map_err(|e| format!("{}: {e}", p.conclusion))?;
        for (f, side) in &extra {
            let w = admissible_weakening(p, f, *side);
            check_proof(&w, *fc).map_err(|e| format!("weakened {}: {e}", p.conclusion))?;
            check(w.conclusion == p.conclusion.with(*side, f.clone()), || {
                "weakened root is wrong".into()
            })?;
            weakened += 1;
        }
    }
    Ok(format!(
        "{} proofs and {weakened} weakenings pass the checker",
        proofs.len()
    ))
}

fn rs(src: &str) -> RelationalSequent {
    parse_relational_sequent(src).expect("well-formed relational sequent")
}

fn node(
    rule: DRule,
    conclusion: RelationalSequent,
    atom: RelAtom,
    premise: RelationalSequent,
) -> DProof {
    let principal = conclusion.delta.first().cloned();
    let leaf = DProof {
        rule: DRule::Init,
        conclusion: premise,
        principal: None,
        nominal: None,
        atoms: vec![],
        premises: vec![],
    };
    DProof {
        rule,
        conclusion,
        principal,
        nominal: None,
        atoms: vec![atom],
        premises: vec![leaf],
    }
}

fn root_violation(p: &DProof) -> bool {
    matches!(check_dproof(p), Err(v) if v.path.is_empty())
}

fn dynamic_sanity() -> Result<String, String> {
    let budget = Budget::default();
    let add = rs("[] ; . => i: (++) (p | ~p)");
    let DSearchOutcome::Proved(p) = prove_dds(&add, budget).map_err(|e| e.to_string())? else {
        return Err("add-link example not proved".into());
    };
    check_dproof(&p).map_err(|e| e.to_string())?;
    check(p.count(|r| r == DRule::RAdd(LinkKind::Plus)) == 1, || {
        "no add-link step".into()
    })?;

    let flip = rs("[R-(i,j)] ; . => i: (+) (p | ~p)");
    let DSearchOutcome::Proved(p) = prove_dds(&flip, budget).map_err(|e| e.to_string())? else {
        return Err("flip example not proved".into());
    };
    check_dproof(&p).map_err(|e| e.to_string())?;
    let flip_node = p.count(|r| r == DRule::RFlip(Sign::Plus));
    check(flip_node == 1, || "no flip step".into())?;

    let plus_ij = RelAtom::new(Sign::Plus, "i", "j");
    let minus_ij = RelAtom::new(Sign::Minus, "i", "j");
    let blocked = node(
        DRule::RAdd(LinkKind::Minus),
        rs("[R+(i,j)] ; . => i: (--) p"),
        minus_ij.clone(),
        RelationalSequent::new(
            [plus_ij.clone(), minus_ij.clone()],
            vec![],
            vec![parse_labeled("i: p").unwrap()],
        ),
    );
    check(root_violation(&blocked), || {
        "negative add over a positive link accepted".into()
    })?;
    let blocked = node(
        DRule::RAdd(LinkKind::Plus),
        rs("[R-(i,j)] ; . => i: (++) p"),
        plus_ij.clone(),
        RelationalSequent::new(
            [plus_ij.clone(), minus_ij.clone()],
            vec![],
            vec![parse_labeled("i: p").unwrap()],
        ),
    );
    check(root_violation(&blocked), || {
        "positive add over a negative link accepted".into()
    })?;
    let lacking = node(
        DRule::RFlip(Sign::Plus),
        rs("[] ; . => i: (+) p"),
        plus_ij.clone(),
        rs("[R+(i,j)] ; . => i: p"),
    );
    check(root_violation(&lacking), || {
        "flip without a negative link accepted".into()
    })?;

    match prove_dds(&rs("[] ; . => i: (-) (p | ~p)"), budget).map_err(|e| e.to_string())? {
        DSearchOutcome::Unknown(_) => {}
        DSearchOutcome::Proved(p) => {
            check(p.count(|r| r == DRule::RFlip(Sign::Minus)) == 0, || {
                "negative flip fired on an empty context".into()
            })?;
        }
    }

    let v = Vocabulary::new(&["p"], &["i"]).dynamic(true);
    let names: BTreeSet<_> = ["i", "z"].into_iter().map(Into::into).collect();
    let props: BTreeSet<_> = ["p".into()].into_iter().collect();
    let models: Vec<NetworkModel> = enumerate_models(2, &props, &names, FrameClass::Pnl).collect();
    let mut roots: Vec<RelationalSequent> = vec![
        add,
        rs("[] ; i: (+-) (p & ~p) => ."),
        rs("[] ; i: [A] p => i: (++) <+> p"),
    ];
    for seed in 0..DYNAMIC_FORMULAS as u64 {
        let f = random::formula(&mut random::rng(40_000 + seed), 1 + (seed as usize) % 3, &v);
        let tautology = Formula::or(f.clone(), Formula::not(f.clone()));
        let body = if seed % 2 == 0 { tautology } else { f };
        roots.push(RelationalSequent::new(
            [],
            vec![],
            vec![LabeledFormula::labeled("i", body)],
        ));
    }
    let mut proved = 0;
    for s in &roots {
        if let DSearchOutcome::Proved(p) = prove_dds(s, budget).map_err(|e| e.to_string())? {
            proved += 1;
            check_dproof(&p).map_err(|e| format!("{s}: {e}"))?;
            check(s.context.is_empty(), || "root context not empty".into())?;
            if let Some(m) = models.iter().find(|m| s.falsified_by(m)) {
                return Err(format!("{s} proved but falsified by\n{m}"));
            }
        }
    }
    check(models.iter().any(|m| m.len() == 2), || {
        "no two-agent models enumerated".into()
    })?;
    Ok(format!(
        "examples behave as specified; {proved}/{} proved roots valid on {} models up to 2 agents",
        roots.len(),
        models.len()
    ))
}

fn main() {
    let mut report = Report { failures: 0 };
    report.line(1, "golden game traces", golden());
    report.line(2, "game adequacy against Kripke evaluation", adequacy());
    report.line(3, "agent and nominal games agree", mode_equivalence());
    let mut proofs = Vec::new();
    report.line(
        4,
        "elementary winning conditions equal brute-force validity",
        elementary_oracle(&mut proofs),
    );
    report.line(
        5,
        "connectedness formula: cc proof and PNL countermodel",
        connectedness(&mut proofs),
    );
    report.line(
        6,
        "every refutation re-verifies",
        refutation_soundness(&mut proofs),
    );
    report.line(
        7,
        "proof checker round trip and weakening",
        checker_round_trip(proofs),
    );
    report.line(8, "dDS examples and two-agent soundness", dynamic_sanity());
    if report.failures > 0 {
        println!("{} criteria failed", report.failures);
        std::process::exit(1);
    }
}
