use super::{LabeledFormula, Proof, Rule, Sequent, Side};
use crate::model::FrameClass;
use crate::syntax::{Formula, FreshNominals, Nominal, Sign};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofViolation {
    /// Premise indices from the root to the offending node.
    pub path: Vec<usize>,
    pub rule: Rule,
    pub reason: String,
}

impl fmt::Display for ProofViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|k| k.to_string()).collect();
        write!(f, "at /{} ({}): {}", path.join("/"), self.rule, self.reason)
    }
}

/// Validates every node of `p` against its rule schema.
pub fn check_proof(p: &Proof, fc: FrameClass) -> Result<(), ProofViolation> {
    let mut path = Vec::new();
    walk(p, fc, &mut path)
}

fn walk(p: &Proof, fc: FrameClass, path: &mut Vec<usize>) -> Result<(), ProofViolation> {
    check_node(p, fc).map_err(|reason| ProofViolation {
        path: path.clone(),
        rule: p.rule,
        reason,
    })?;
    for (k, q) in p.premises.iter().enumerate() {
        path.push(k);
        walk(q, fc, path)?;
        path.pop();
    }
    Ok(())
}

fn ensure(ok: bool, reason: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(reason())
    }
}

fn arity(rule: Rule) -> usize {
    match rule {
        Rule::Init | Rule::RefPlus | Rule::RefMinus | Rule::Cc | Rule::Cut => 0,
        Rule::LOr | Rule::RAnd | Rule::RDiamond(_) | Rule::No => 2,
        _ => 1,
    }
}

/// The principal split into label and body, if it is labeled.
fn labeled(f: &LabeledFormula) -> Result<(&Nominal, &Formula), String> {
    match f {
        LabeledFormula::Labeled { label, body } => Ok((label, body)),
        LabeledFormula::Rel(..) => Err(format!("principal {f} is a relational atom")),
    }
}

fn check_node(p: &Proof, fc: FrameClass) -> Result<(), String> {
    let rule = p.rule;
    if rule == Rule::Cut {
        return Err("cut is not a rule of the calculus".into());
    }
    ensure(p.premises.len() == arity(rule), || {
        format!(
            "expected {} premise(s), found {}",
            arity(rule),
            p.premises.len()
        )
    })?;
    let c = &p.conclusion;
    let f = p.principal.as_ref().ok_or("missing principal formula")?;
    let side = match rule {
        Rule::Rc
        | Rule::RNot
        | Rule::ROr1
        | Rule::ROr2
        | Rule::RAnd
        | Rule::RDiamond(_)
        | Rule::RGlobal => Side::Right,
        Rule::Sym | Rule::RefPlus | Rule::Cc | Rule::No => Side::Right,
        _ => Side::Left,
    };
    if !matches!(rule, Rule::No) {
        ensure(c.contains(side, f), || {
            format!("principal {f} is not in the conclusion")
        })?;
    }
    let rest = || c.without(side, f).expect("checked above");
    let j = || {
        p.nominal
            .clone()
            .ok_or_else(|| "missing instantiation nominal".to_string())
    };
    let expected: Vec<Sequent> = match rule {
        Rule::Init => {
            ensure(f.is_elementary(), || format!("init on non-elementary {f}"))?;
            ensure(c.contains(Side::Right, f), || {
                format!("{f} is not on both sides")
            })?;
            vec![]
        }
        Rule::Lc | Rule::Rc => vec![c.with(side, f.clone())],
        Rule::LNot | Rule::RNot => {
            let (i, body) = labeled(f)?;
            let Formula::Not(a) = body else {
                return Err(format!("{f} is not a negation"));
            };
            let other = if side == Side::Left {
                Side::Right
            } else {
                Side::Left
            };
            vec![rest().with(other, LabeledFormula::labeled(i.clone(), (**a).clone()))]
        }
        Rule::LOr | Rule::ROr1 | Rule::ROr2 | Rule::LAnd1 | Rule::LAnd2 | Rule::RAnd => {
            let (i, body) = labeled(f)?;
            let (a, b) = match (rule, body) {
                (Rule::LOr | Rule::ROr1 | Rule::ROr2, Formula::Or(a, b)) => (a, b),
                (Rule::LAnd1 | Rule::LAnd2 | Rule::RAnd, Formula::And(a, b)) => (a, b),
                _ => return Err(format!("{f} does not match the connective of {rule}")),
            };
            let part =
                |g: &Formula| rest().with(side, LabeledFormula::labeled(i.clone(), g.clone()));
            match rule {
                Rule::ROr1 | Rule::LAnd1 => vec![part(a)],
                Rule::ROr2 | Rule::LAnd2 => vec![part(b)],
                _ => vec![part(a), part(b)],
            }
        }
        Rule::LDiamond1(s) | Rule::LDiamond2(s) | Rule::LDiamond(s) | Rule::RDiamond(s) => {
            let (i, body) = labeled(f)?;
            let Formula::Diamond(t, a) = body else {
                return Err(format!("{f} is not a diamond"));
            };
            ensure(*t == s, || format!("{f} has the wrong polarity for {rule}"))?;
            let j = j()?;
            let atom = LabeledFormula::rel(s, i.clone(), j.clone());
            let inner = LabeledFormula::labeled(j.clone(), (**a).clone());
            match rule {
                Rule::LDiamond1(_) => vec![rest().with(side, atom)],
                Rule::LDiamond2(_) => vec![rest().with(side, inner)],
                Rule::LDiamond(_) => vec![rest().with(side, atom).with(side, inner)],
                _ => {
                    ensure(s == Sign::Plus || *i != j, || {
                        format!("{rule} needs distinct nominals, got {i}")
                    })?;
                    vec![rest().with(side, atom), rest().with(side, inner)]
                }
            }
        }
        Rule::LGlobal | Rule::RGlobal => {
            let (_, body) = labeled(f)?;
            let Formula::Global(a) = body else {
                return Err(format!("{f} is not a global box"));
            };
            vec![rest().with(side, LabeledFormula::labeled(j()?, (**a).clone()))]
        }
        Rule::Sym => {
            let LabeledFormula::Rel(s, i, k) = f else {
                return Err(format!("{f} is not a relational atom"));
            };
            vec![rest().with(side, LabeledFormula::rel(*s, k.clone(), i.clone()))]
        }
        Rule::RefPlus | Rule::RefMinus => {
            let want = if rule == Rule::RefPlus {
                Sign::Plus
            } else {
                Sign::Minus
            };
            ensure(
                matches!(f, LabeledFormula::Rel(s, i, k) if *s == want && i == k),
                || format!("{rule} needs R{}(i,i), got {f}", want.symbol()),
            )?;
            vec![]
        }
        Rule::No => {
            let LabeledFormula::Rel(_, i, k) = f else {
                return Err(format!("{f} is not a relational atom"));
            };
            let atom = |s| LabeledFormula::rel(s, i.clone(), k.clone());
            vec![
                c.with(Side::Right, atom(Sign::Plus)),
                c.with(Side::Right, atom(Sign::Minus)),
            ]
        }
        Rule::Cc => {
            ensure(fc == FrameClass::CollectivelyConnected, || {
                "cc is only available for connected frames".into()
            })?;
            let LabeledFormula::Rel(_, i, k) = f else {
                return Err(format!("{f} is not a relational atom"));
            };
            for s in [Sign::Plus, Sign::Minus] {
                let atom = LabeledFormula::rel(s, i.clone(), k.clone());
                ensure(c.contains(Side::Right, &atom), || {
                    format!("{atom} is not on the right")
                })?;
            }
            vec![]
        }
        Rule::Cut => unreachable!(),
    };
    if rule.needs_fresh() {
        let j = j()?;
        ensure(!c.nominals().contains(&j), || {
            format!("nominal {j} is not fresh")
        })?;
    }
    for (k, (want, got)) in expected.iter().zip(&p.premises).enumerate() {
        ensure(*want == got.conclusion, || {
            format!(
                "premise {k} should be `{}`, found `{}`",
                want.ascii(),
                got.conclusion.ascii()
            )
        })?;
    }
    Ok(())
}

/// Adds `extra` to every sequent of `p` on `side`. Fresh nominals that clash
/// with `extra` are renamed first, so the result is again a proof.
pub fn admissible_weakening(p: &Proof, extra: &LabeledFormula, side: Side) -> Proof {
    let mut gen = FreshNominals::avoiding(&p.nominals());
    for n in extra.nominals() {
        gen.reserve(&n);
    }
    weaken(p, extra, side, &mut gen)
}

fn weaken(p: &Proof, extra: &LabeledFormula, side: Side, gen: &mut FreshNominals) -> Proof {
    let mut p = p.clone();
    if p.rule.needs_fresh() {
        if let Some(j) = p.nominal.clone().filter(|j| extra.nominals().contains(j)) {
            let k = gen.fresh();
            p.premises = p
                .premises
                .iter()
                .map(|q| q.rename_nominal(&j, &k))
                .collect();
            p.nominal = Some(k);
        }
    }
    Proof {
        rule: p.rule,
        conclusion: p.conclusion.with(side, extra.clone()),
        principal: p.principal,
        nominal: p.nominal,
        premises: p
            .premises
            .iter()
            .map(|q| weaken(q, extra, side, gen))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequent::{parse_labeled, parse_sequent};

    fn lf(s: &str) -> LabeledFormula {
        parse_labeled(s).unwrap()
    }

    fn init(s: &str, f: &str) -> Proof {
        Proof::leaf(Rule::Init, parse_sequent(s).unwrap(), lf(f))
    }

    #[test]
    fn init_on_elementary_only() {
        assert!(check_proof(&init("i: p => i: p", "i: p"), FrameClass::Pnl).is_ok());
        let bad = init("i: ~p => i: ~p", "i: ~p");
        assert!(check_proof(&bad, FrameClass::Pnl)
            .unwrap_err()
            .reason
            .contains("non-elementary"));
    }

    #[test]
    fn right_global_needs_fresh_nominal() {
        let build = |j: &str| Proof {
            rule: Rule::RGlobal,
            conclusion: parse_sequent(&format!("{j}: p => i: [A] p")).unwrap(),
            principal: Some(lf("i: [A] p")),
            nominal: Some(Nominal::new(j)),
            premises: vec![init(&format!("{j}: p => {j}: p"), &format!("{j}: p"))],
        };
        let err = check_proof(&build("i"), FrameClass::Pnl).unwrap_err();
        assert!(err.reason.contains("not fresh"), "{err}");
        // with a clashing left member the rule is blocked; a clean conclusion passes
        let ok = Proof {
            rule: Rule::RGlobal,
            conclusion: parse_sequent("i: [A] p => i: [A] p").unwrap(),
            principal: Some(lf("i: [A] p")),
            nominal: Some(Nominal::new("j")),
            premises: vec![Proof {
                rule: Rule::LGlobal,
                conclusion: parse_sequent("i: [A] p => j: p").unwrap(),
                principal: Some(lf("i: [A] p")),
                nominal: Some(Nominal::new("j")),
                premises: vec![init("j: p => j: p", "j: p")],
            }],
        };
        assert!(check_proof(&ok, FrameClass::Pnl).is_ok());
    }

    #[test]
    fn cc_only_for_connected_frames() {
        let p = Proof::leaf(
            Rule::Cc,
            parse_sequent(". => R+(i,j), R-(i,j)").unwrap(),
            lf("R+(i,j)"),
        );
        assert!(check_proof(&p, FrameClass::CollectivelyConnected).is_ok());
        assert!(check_proof(&p, FrameClass::Pnl).is_err());
    }

    #[test]
    fn negative_diamond_proviso() {
        let p = Proof {
            rule: Rule::RDiamond(Sign::Minus),
            conclusion: parse_sequent(". => i: <-> p").unwrap(),
            principal: Some(lf("i: <-> p")),
            nominal: Some(Nominal::new("i")),
            premises: vec![
                Proof::leaf(
                    Rule::RefPlus,
                    parse_sequent(". => R-(i,i)").unwrap(),
                    lf("R-(i,i)"),
                ),
                init(". => i: p", "i: p"),
            ],
        };
        assert!(check_proof(&p, FrameClass::Pnl)
            .unwrap_err()
            .reason
            .contains("distinct"));
    }

    #[test]
    fn cut_is_rejected() {
        let p = Proof::leaf(Rule::Cut, Sequent::default(), lf("i: p"));
        assert!(check_proof(&p, FrameClass::Pnl).is_err());
    }

    #[test]
    fn violation_path() {
        let p = Proof {
            rule: Rule::LNot,
            conclusion: parse_sequent("i: ~p => .").unwrap(),
            principal: Some(lf("i: ~p")),
            nominal: None,
            premises: vec![init(". => i: p", "i: p")],
        };
        let v = check_proof(&p, FrameClass::Pnl).unwrap_err();
        assert_eq!((v.path, v.rule), (vec![0], Rule::Init));
    }

    #[test]
    fn weakening_threads_through() {
        let p = init("i: p => i: p", "i: p");
        let w = admissible_weakening(&p, &lf("j: q"), Side::Left);
        assert_eq!(w.conclusion, parse_sequent("j: q, i: p => i: p").unwrap());
        assert!(check_proof(&w, FrameClass::Pnl).is_ok());
        let w = admissible_weakening(&p, &lf("R-(i,k)"), Side::Right);
        assert!(check_proof(&w, FrameClass::Pnl).is_ok());
    }

    #[test]
    fn weakening_renames_clashing_fresh_nominals() {
        let p = Proof {
            rule: Rule::RGlobal,
            conclusion: parse_sequent("i: [A] p => i: [A] p").unwrap(),
            principal: Some(lf("i: [A] p")),
            nominal: Some(Nominal::new("j")),
            premises: vec![Proof {
                rule: Rule::LGlobal,
                conclusion: parse_sequent("i: [A] p => j: p").unwrap(),
                principal: Some(lf("i: [A] p")),
                nominal: Some(Nominal::new("j")),
                premises: vec![init("j: p => j: p", "j: p")],
            }],
        };
        let w = admissible_weakening(&p, &lf("j: q"), Side::Right);
        assert!(check_proof(&w, FrameClass::Pnl).is_ok(), "{w}");
        assert_ne!(w.nominal, Some(Nominal::new("j")));
    }
}
