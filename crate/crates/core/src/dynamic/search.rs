use super::{DProof, DRule, DynError, RelAtom, RelationalSequent};
use crate::exec::Exec;
use crate::sequent::{Budget, BudgetReport, LabeledFormula};
use crate::syntax::{Formula, FreshNominals, LinkKind, Nominal, Sign};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};

/// dDS search never refutes: there is no canonical model to check against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DSearchOutcome {
    Proved(DProof),
    Unknown(BudgetReport),
}

impl DSearchOutcome {
    pub fn proof(&self) -> Option<&DProof> {
        match self {
            DSearchOutcome::Proved(p) => Some(p),
            DSearchOutcome::Unknown(_) => None,
        }
    }
}

const ROUNDS: usize = 4;
const ROUND_NODES: usize = 50_000;

pub fn prove_dds(s: &RelationalSequent, budget: Budget) -> Result<DSearchOutcome, DynError> {
    prove_dds_with(s, budget, Exec::default())
}

/// Iterative deepening on the number of non-invertible choices per branch.
/// Alternatives at the root are tried concurrently under a parallel policy;
/// the first success in choice order wins, so the result does not depend on
/// scheduling.
pub fn prove_dds_with(
    s: &RelationalSequent,
    budget: Budget,
    exec: Exec,
) -> Result<DSearchOutcome, DynError> {
    s.validate()?;
    let root = Branch {
        seq: s.clone(),
        fresh: FreshNominals::avoiding(&s.nominals()),
        fresh_used: 0,
        depth: 0,
        choices: 0,
        done: BTreeSet::new(),
        contractions: BTreeMap::new(),
    };
    let mut report = BudgetReport::default();
    for limit in 0..=ROUNDS {
        let search = Search {
            budget,
            limit,
            exec,
            nodes: AtomicUsize::new(0),
            report: Default::default(),
        };
        let found = search.expand(root.clone());
        report.nodes += search.nodes.load(Ordering::Relaxed);
        let flags = search
            .report
            .into_inner()
            .expect("no panics while searching");
        report.fresh_exhausted |= flags.fresh_exhausted;
        report.contractions_exhausted |= flags.contractions_exhausted;
        report.depth_exhausted |= flags.depth_exhausted;
        if let Some(p) = found {
            return Ok(DSearchOutcome::Proved(p));
        }
    }
    Ok(DSearchOutcome::Unknown(report))
}

#[derive(Clone)]
struct Branch {
    seq: RelationalSequent,
    fresh: FreshNominals,
    fresh_used: usize,
    depth: usize,
    choices: usize,
    done: BTreeSet<(bool, LabeledFormula, Nominal)>,
    contractions: BTreeMap<(bool, LabeledFormula), usize>,
}

impl Branch {
    fn step(&self, seq: RelationalSequent) -> Branch {
        Branch {
            seq,
            depth: self.depth + 1,
            ..self.clone()
        }
    }
}

#[derive(Clone)]
enum Choice {
    /// Contract and instantiate a universal principal at a nominal.
    Instantiate(bool, LabeledFormula, Nominal),
    /// Contract and add a link that is already present.
    NoOpAdd(LabeledFormula, LinkKind, RelAtom),
    /// Weaken to a left link-adding principal and name the new link.
    AddWitness(LabeledFormula),
    /// Weaken to a right flip principal and flip a context link.
    Flip(LabeledFormula, Sign, RelAtom),
}

struct Search {
    budget: Budget,
    limit: usize,
    exec: Exec,
    nodes: AtomicUsize,
    report: std::sync::Mutex<BudgetReport>,
}

fn split(f: &LabeledFormula) -> (&Nominal, &Formula) {
    match f {
        LabeledFormula::Labeled { label, body } => (label, body),
        LabeledFormula::Rel(..) => unreachable!("relational sequents keep atoms in the context"),
    }
}

fn lab(i: &Nominal, f: &Formula) -> LabeledFormula {
    LabeledFormula::labeled(i.clone(), f.clone())
}

fn node(
    rule: DRule,
    conclusion: &RelationalSequent,
    principal: &LabeledFormula,
    premises: Vec<DProof>,
) -> DProof {
    DProof {
        rule,
        conclusion: conclusion.clone(),
        principal: Some(principal.clone()),
        nominal: None,
        atoms: Vec::new(),
        premises,
    }
}

impl Search {
    fn flag(&self, f: impl FnOnce(&mut BudgetReport)) {
        f(&mut self.report.lock().expect("no panics while searching"));
    }

    fn expand(&self, b: Branch) -> Option<DProof> {
        let seen = self.nodes.fetch_add(1, Ordering::Relaxed);
        let s = &b.seq;
        if let Some(f) = s
            .gamma
            .iter()
            .find(|f| f.is_elementary() && s.delta.contains(f))
        {
            return Some(node(DRule::Init, s, f, vec![]));
        }
        if seen > ROUND_NODES {
            return None;
        }
        if b.depth >= self.budget.max_depth {
            self.flag(|r| r.depth_exhausted = true);
            return None;
        }
        for left in [true, false] {
            for f in s.side(left) {
                if matches!(
                    split(f).1,
                    Formula::Not(_) | Formula::Or(..) | Formula::And(..)
                ) {
                    return self.propositional(&b, left, f.clone());
                }
            }
        }
        let existential = s
            .gamma
            .iter()
            .find(|f| matches!(split(f).1, Formula::Diamond(..)))
            .map(|f| (true, f))
            .or_else(|| {
                s.delta
                    .iter()
                    .find(|f| matches!(split(f).1, Formula::Global(_)))
                    .map(|f| (false, f))
            });
        if let Some((left, f)) = existential {
            if b.fresh_used >= self.budget.max_fresh_nominals {
                self.flag(|r| r.fresh_exhausted = true);
                return None;
            }
            return self.fresh(b.clone(), left, f.clone());
        }
        if b.choices >= self.limit {
            return None;
        }
        let choices = self.choices(&b);
        if b.depth == 0 && self.exec.is_parallel() {
            return self
                .exec
                .find_map_first(&choices, |c| self.choose(b.clone(), c.clone()));
        }
        choices.into_iter().find_map(|c| self.choose(b.clone(), c))
    }

    fn one(
        &self,
        b: &Branch,
        premise: RelationalSequent,
        build: impl FnOnce(DProof) -> DProof,
    ) -> Option<DProof> {
        self.expand(b.step(premise)).map(build)
    }

    fn propositional(&self, b: &Branch, left: bool, f: LabeledFormula) -> Option<DProof> {
        let s = &b.seq;
        let (i, body) = split(&f);
        let rest = s.edit(left, Some(&f), &[]).expect("member");
        match (left, body) {
            (_, Formula::Not(a)) => {
                let rule = if left { DRule::LNot } else { DRule::RNot };
                let premise = rest.edit(!left, None, &[lab(i, a)]).expect("no removal");
                self.one(b, premise, |p| node(rule, s, &f, vec![p]))
            }
            (true, Formula::Or(x, y)) | (false, Formula::And(x, y)) => {
                let rule = if left { DRule::LOr } else { DRule::RAnd };
                let p =
                    self.expand(b.step(rest.edit(left, None, &[lab(i, x)]).expect("no removal")))?;
                let q =
                    self.expand(b.step(rest.edit(left, None, &[lab(i, y)]).expect("no removal")))?;
                Some(node(rule, s, &f, vec![p, q]))
            }
            (_, Formula::Or(x, y) | Formula::And(x, y)) => {
                let (c, r1, r2) = if left {
                    (DRule::Lc, DRule::LAnd1, DRule::LAnd2)
                } else {
                    (DRule::Rc, DRule::ROr1, DRule::ROr2)
                };
                let doubled = s
                    .edit(left, None, std::slice::from_ref(&f))
                    .expect("no removal");
                let after_first = s.edit(left, None, &[lab(i, x)]).expect("no removal");
                let after_both = rest
                    .edit(left, None, &[lab(i, x), lab(i, y)])
                    .expect("no removal");
                self.one(b, after_both, |p| {
                    let second = node(r2, &after_first, &f, vec![p]);
                    let first = node(r1, &doubled, &f, vec![second]);
                    node(c, s, &f, vec![first])
                })
            }
            _ => unreachable!("only propositional principals are passed here"),
        }
    }

    fn fresh(&self, mut b: Branch, left: bool, f: LabeledFormula) -> Option<DProof> {
        let s = b.seq.clone();
        let (i, body) = split(&f);
        let j = b.fresh.fresh();
        b.fresh_used += 1;
        let mut premise = s.edit(left, Some(&f), &[]).expect("member");
        let (rule, inner) = match body {
            Formula::Diamond(sign, a) => {
                premise
                    .context
                    .insert(RelAtom::new(*sign, i.clone(), j.clone()));
                (DRule::LDiamond(*sign), a)
            }
            Formula::Global(a) => (DRule::RGlobal, a),
            _ => unreachable!("only diamonds and global boxes take fresh nominals"),
        };
        let premise = premise
            .edit(left, None, &[lab(&j, inner)])
            .expect("no removal");
        self.one(&b, premise, |p| DProof {
            nominal: Some(j.clone()),
            ..node(rule, &s, &f, vec![p])
        })
    }

    fn choices(&self, b: &Branch) -> Vec<Choice> {
        let s = &b.seq;
        let names = s.nominals();
        let mut out = Vec::new();
        let mut weakening = Vec::new();
        let mut seen = BTreeSet::new();
        for left in [true, false] {
            for f in s.side(left) {
                if !seen.insert((left, f.clone())) {
                    continue;
                }
                let (i, body) = split(f);
                let contracted = b.contractions.get(&(left, f.clone())).copied().unwrap_or(0);
                let pending = |j: &Nominal| !b.done.contains(&(left, f.clone(), j.clone()));
                let universal = |targets: Vec<Nominal>, out: &mut Vec<Choice>| {
                    if targets.is_empty() {
                        return;
                    }
                    if contracted >= self.budget.max_contractions_per_formula {
                        self.flag(|r| r.contractions_exhausted = true);
                        return;
                    }
                    out.extend(
                        targets
                            .into_iter()
                            .map(|j| Choice::Instantiate(left, f.clone(), j)),
                    );
                };
                match (left, body) {
                    (true, Formula::Global(_)) => universal(
                        names.iter().filter(|j| pending(j)).cloned().collect(),
                        &mut out,
                    ),
                    (false, Formula::Diamond(sign, _)) => {
                        let linked = |j: &Nominal| {
                            (*sign == Sign::Plus && i == j)
                                || s.context
                                    .contains(&RelAtom::new(*sign, i.clone(), j.clone()))
                        };
                        universal(
                            names
                                .iter()
                                .filter(|j| pending(j) && linked(j))
                                .cloned()
                                .collect(),
                            &mut out,
                        )
                    }
                    (false, Formula::AddLink(kind, _)) if pending(i) => {
                        let atom = match kind {
                            LinkKind::Plus | LinkKind::Either => {
                                Some(RelAtom::new(Sign::Plus, i.clone(), i.clone()))
                            }
                            LinkKind::Minus => {
                                s.context.iter().find(|a| a.sign == Sign::Minus).cloned()
                            }
                        };
                        if let Some(atom) = atom {
                            if contracted < self.budget.max_contractions_per_formula {
                                out.push(Choice::NoOpAdd(f.clone(), *kind, atom));
                            } else {
                                self.flag(|r| r.contractions_exhausted = true);
                            }
                        }
                    }
                    (true, Formula::AddLink(..)) => weakening.push(Choice::AddWitness(f.clone())),
                    (false, Formula::Flip(Sign::Plus, _)) => {
                        let negatives: Vec<&RelAtom> =
                            s.context.iter().filter(|a| a.sign == Sign::Minus).collect();
                        if let [only] = negatives[..] {
                            if only.touches(i) {
                                weakening.push(Choice::Flip(f.clone(), Sign::Plus, only.flipped()));
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        out.extend(weakening);
        out
    }

    fn choose(&self, mut b: Branch, c: Choice) -> Option<DProof> {
        b.choices += 1;
        let s = b.seq.clone();
        match c {
            Choice::Instantiate(left, f, j) => {
                b.done.insert((left, f.clone(), j.clone()));
                *b.contractions.entry((left, f.clone())).or_default() += 1;
                let (_, body) = split(&f);
                let doubled = s
                    .edit(left, None, std::slice::from_ref(&f))
                    .expect("no removal");
                let (rule, inner) = match body {
                    Formula::Global(a) => (DRule::LGlobal, a),
                    Formula::Diamond(sign, a) => (DRule::RDiamond(*sign), a),
                    _ => unreachable!("only universal principals are instantiated"),
                };
                let premise = s.edit(left, None, &[lab(&j, inner)]).expect("no removal");
                let contraction = if left { DRule::Lc } else { DRule::Rc };
                self.one(&b, premise, |p| {
                    let inst = DProof {
                        nominal: Some(j.clone()),
                        ..node(rule, &doubled, &f, vec![p])
                    };
                    node(contraction, &s, &f, vec![inst])
                })
            }
            Choice::NoOpAdd(f, kind, atom) => {
                let (i, body) = split(&f);
                b.done.insert((false, f.clone(), i.clone()));
                *b.contractions.entry((false, f.clone())).or_default() += 1;
                let Formula::AddLink(_, a) = body else {
                    unreachable!()
                };
                let doubled = s
                    .edit(false, None, std::slice::from_ref(&f))
                    .expect("no removal");
                let mut premise = s.edit(false, None, &[lab(i, a)]).expect("no removal");
                premise.context.insert(atom.clone());
                self.one(&b, premise, |p| {
                    let add = DProof {
                        atoms: vec![atom.clone()],
                        ..node(DRule::RAdd(kind), &doubled, &f, vec![p])
                    };
                    node(DRule::Rc, &s, &f, vec![add])
                })
            }
            Choice::AddWitness(f) => {
                let (i, body) = split(&f);
                let Formula::AddLink(kind, a) = body else {
                    unreachable!()
                };
                if b.fresh_used + 2 > self.budget.max_fresh_nominals {
                    self.flag(|r| r.fresh_exhausted = true);
                    return None;
                }
                let (x, y) = (b.fresh.fresh(), b.fresh.fresh());
                b.fresh_used += 2;
                let (chain, weak) = weaken_to(&s, true, &f);
                let atoms: Vec<RelAtom> = kind
                    .signs()
                    .iter()
                    .map(|&sg| RelAtom::new(sg, x.clone(), y.clone()))
                    .collect();
                let mut premises = Vec::new();
                for atom in &atoms {
                    let mut premise = RelationalSequent {
                        gamma: vec![lab(i, a)],
                        ..weak.clone()
                    };
                    premise.context.insert(atom.clone());
                    premises.push(self.expand(b.step(premise))?);
                }
                let add = DProof {
                    atoms,
                    ..node(DRule::LAdd(*kind), &weak, &f, premises)
                };
                Some(wrap(chain, add))
            }
            Choice::Flip(f, to, atom) => {
                let (i, body) = split(&f);
                let Formula::Flip(_, a) = body else {
                    unreachable!()
                };
                let (chain, weak) = weaken_to(&s, false, &f);
                let mut premise = RelationalSequent {
                    delta: vec![lab(i, a)],
                    ..weak.clone()
                };
                premise.context.remove(&atom.flipped());
                premise.context.insert(atom.clone());
                let p = self.expand(b.step(premise))?;
                let flip = DProof {
                    atoms: vec![atom],
                    ..node(DRule::RFlip(to), &weak, &f, vec![p])
                };
                Some(wrap(chain, flip))
            }
        }
    }
}

/// Weakening steps that remove everything but one occurrence of `keep`.
fn weaken_to(
    s: &RelationalSequent,
    left: bool,
    keep: &LabeledFormula,
) -> (
    Vec<(DRule, RelationalSequent, LabeledFormula)>,
    RelationalSequent,
) {
    let mut chain = Vec::new();
    let mut cur = s.clone();
    let mut kept = false;
    for side in [true, false] {
        for f in s.side(side) {
            if side == left && f == keep && !kept {
                kept = true;
                continue;
            }
            let next = cur.edit(side, Some(f), &[]).expect("member");
            chain.push((if side { DRule::Lw } else { DRule::Rw }, cur, f.clone()));
            cur = next;
        }
    }
    (chain, cur)
}

fn wrap(chain: Vec<(DRule, RelationalSequent, LabeledFormula)>, inner: DProof) -> DProof {
    chain
        .into_iter()
        .rev()
        .fold(inner, |p, (rule, conclusion, f)| {
            node(rule, &conclusion, &f, vec![p])
        })
}
