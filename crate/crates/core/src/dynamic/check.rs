use super::{DProof, DRule, RelAtom, RelationalSequent};
use crate::sequent::LabeledFormula;
use crate::syntax::{Formula, Nominal, Sign};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DProofViolation {
    pub path: Vec<usize>,
    pub rule: DRule,
    pub reason: String,
}

impl fmt::Display for DProofViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|k| k.to_string()).collect();
        write!(f, "at /{} ({}): {}", path.join("/"), self.rule, self.reason)
    }
}

/// Validates every node of a dDS derivation against its rule schema and the
/// side conditions on the relational context.
///
/// Left flips and the right flip to a negative link are accepted when they
/// match their schema, but search never produces them.
pub fn check_dproof(p: &DProof) -> Result<(), DProofViolation> {
    let mut path = Vec::new();
    walk(p, &mut path)
}

fn walk(p: &DProof, path: &mut Vec<usize>) -> Result<(), DProofViolation> {
    check_node(p).map_err(|reason| DProofViolation {
        path: path.clone(),
        rule: p.rule,
        reason,
    })?;
    for (k, q) in p.premises.iter().enumerate() {
        path.push(k);
        walk(q, path)?;
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

fn lab(i: &Nominal, f: &Formula) -> LabeledFormula {
    LabeledFormula::labeled(i.clone(), f.clone())
}

fn is_left(rule: DRule) -> bool {
    matches!(
        rule,
        DRule::Init
            | DRule::Lc
            | DRule::Lw
            | DRule::LNot
            | DRule::LOr
            | DRule::LAnd1
            | DRule::LAnd2
            | DRule::LDiamond(_)
            | DRule::LGlobal
            | DRule::LAdd(_)
            | DRule::LFlip(_)
    )
}

fn premises_match(p: &DProof, expected: Vec<RelationalSequent>) -> Result<(), String> {
    ensure(p.premises.len() == expected.len(), || {
        format!(
            "expected {} premise(s), found {}",
            expected.len(),
            p.premises.len()
        )
    })?;
    for (k, (q, e)) in p.premises.iter().zip(&expected).enumerate() {
        ensure(q.conclusion == *e, || {
            format!("premise {k} should be {e}, found {}", q.conclusion)
        })?;
    }
    Ok(())
}

fn fresh(c: &RelationalSequent, j: &Nominal) -> Result<(), String> {
    ensure(!c.nominals().contains(j), || format!("{j} is not fresh"))
}

fn check_node(p: &DProof) -> Result<(), String> {
    let c = &p.conclusion;
    c.validate().map_err(|e| e.to_string())?;
    let rule = p.rule;
    let f = p.principal.as_ref().ok_or("missing principal formula")?;
    let (i, body) = match f {
        LabeledFormula::Labeled { label, body } => (label, body),
        LabeledFormula::Rel(..) => return Err(format!("principal {f} is a relational atom")),
    };
    let left = is_left(rule);
    let rest = c
        .edit(left, Some(f), &[])
        .ok_or_else(|| format!("principal {f} is not in the conclusion"))?;
    let add = |s: &RelationalSequent, to_left: bool, g: LabeledFormula| {
        s.edit(to_left, None, &[g]).expect("no removal")
    };
    let nominal = || {
        p.nominal
            .clone()
            .ok_or_else(|| "missing nominal".to_string())
    };
    let wrong = || Err(format!("{rule} does not apply to {f}"));
    let only_principal = || {
        ensure(rest.gamma.is_empty() && rest.delta.is_empty(), || {
            format!("{rule} needs every other formula weakened away")
        })
    };
    let expected = match (rule, body) {
        (DRule::Init, _) => {
            ensure(c.delta.contains(f), || format!("{f} is not on both sides"))?;
            vec![]
        }
        (DRule::Lc | DRule::Rc, _) => vec![add(c, left, f.clone())],
        (DRule::Lw | DRule::Rw, _) => vec![rest],
        (DRule::LNot | DRule::RNot, Formula::Not(a)) => vec![add(&rest, !left, lab(i, a))],
        (DRule::LOr, Formula::Or(a, b)) | (DRule::RAnd, Formula::And(a, b)) => {
            vec![add(&rest, left, lab(i, a)), add(&rest, left, lab(i, b))]
        }
        (DRule::ROr1, Formula::Or(a, _)) | (DRule::LAnd1, Formula::And(a, _)) => {
            vec![add(&rest, left, lab(i, a))]
        }
        (DRule::ROr2, Formula::Or(_, b)) | (DRule::LAnd2, Formula::And(_, b)) => {
            vec![add(&rest, left, lab(i, b))]
        }
        (DRule::LDiamond(s), Formula::Diamond(t, a)) if s == *t => {
            let j = nominal()?;
            fresh(c, &j)?;
            let mut e = add(&rest, true, lab(&j, a));
            e.context.insert(RelAtom::new(s, i.clone(), j));
            vec![e]
        }
        (DRule::RDiamond(s), Formula::Diamond(t, a)) if s == *t => {
            let j = nominal()?;
            let linked = (s == Sign::Plus && *i == j)
                || c.context.contains(&RelAtom::new(s, i.clone(), j.clone()));
            ensure(linked, || {
                format!("no {} link between {i} and {j} in the context", s.symbol())
            })?;
            vec![add(&rest, false, lab(&j, a))]
        }
        (DRule::LGlobal, Formula::Global(a)) => vec![add(&rest, true, lab(&nominal()?, a))],
        (DRule::RGlobal, Formula::Global(a)) => {
            let j = nominal()?;
            fresh(c, &j)?;
            vec![add(&rest, false, lab(&j, a))]
        }
        (DRule::RAdd(k), Formula::AddLink(kind, a)) if k == *kind => {
            let [atom] = &p.atoms[..] else {
                return Err("expected exactly one link".into());
            };
            ensure(k.signs().contains(&atom.sign), || {
                format!("{atom} is not a {k:?} link")
            })?;
            let present = c.context.contains(atom) || (atom.sign == Sign::Plus && atom.is_loop());
            ensure(present, || format!("{atom} is not already in the context"))?;
            let mut e = add(&rest, false, lab(i, a));
            e.context.insert(atom.clone());
            vec![e]
        }
        (DRule::LAdd(k), Formula::AddLink(kind, a)) if k == *kind => {
            only_principal()?;
            ensure(p.atoms.len() == k.signs().len(), || {
                format!("expected {} link(s)", k.signs().len())
            })?;
            let mut out = Vec::new();
            for (atom, sign) in p.atoms.iter().zip(k.signs()) {
                ensure(
                    atom.sign == *sign && atom.i == p.atoms[0].i && atom.j == p.atoms[0].j,
                    || format!("{atom} does not match the link kind"),
                )?;
                ensure(!atom.is_loop(), || {
                    format!("{atom} must name two fresh nominals")
                })?;
                fresh(c, &atom.i)?;
                fresh(c, &atom.j)?;
                let mut e = RelationalSequent {
                    gamma: vec![lab(i, a)],
                    ..rest.clone()
                };
                e.context.insert(atom.clone());
                out.push(e);
            }
            out
        }
        (DRule::LFlip(s) | DRule::RFlip(s), Formula::Flip(t, a)) if s == *t => {
            only_principal()?;
            let [atom] = &p.atoms[..] else {
                return Err("expected exactly one link".into());
            };
            let from = atom.flipped();
            ensure(atom.sign == s, || {
                format!("{atom} is not a {} link", s.symbol())
            })?;
            ensure(atom.touches(i), || format!("{atom} does not touch {i}"))?;
            ensure(!atom.is_loop(), || format!("{atom} is a loop"))?;
            ensure(c.context.contains(&from), || {
                format!("{from} is not in the context")
            })?;
            let others = c
                .context
                .iter()
                .any(|b| *b != from && b.sign == from.sign && !b.is_loop());
            ensure(!others, || {
                format!(
                    "another {} link could denote the flipped pair",
                    from.sign.symbol()
                )
            })?;
            let mut e = RelationalSequent {
                gamma: vec![],
                delta: vec![],
                ..rest.clone()
            };
            e.side_mut(left).push(lab(i, a));
            e.context.remove(&from);
            e.context.insert(atom.clone());
            vec![e]
        }
        _ => return wrong(),
    };
    premises_match(p, expected)
}

impl RelationalSequent {
    fn side_mut(&mut self, left: bool) -> &mut Vec<LabeledFormula> {
        if left {
            &mut self.gamma
        } else {
            &mut self.delta
        }
    }
}
