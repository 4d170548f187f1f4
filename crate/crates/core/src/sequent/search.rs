use super::elementary::{canonical_model, find_witness};
use super::{LabeledFormula, Proof, Rule, Sequent, Side};
use crate::exec::Exec;
use crate::model::{check_frame, FrameClass, NetworkModel};
use crate::syntax::{Agent, Formula, FreshNominals, Nominal, Sign};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Budget {
    pub max_fresh_nominals: usize,
    /// Each instantiation of a universal formula keeps it by contraction,
    /// so this also caps how many nominals it is instantiated with.
    pub max_contractions_per_formula: usize,
    /// Longest branch, not counting contractions.
    pub max_depth: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_fresh_nominals: 4,
            max_contractions_per_formula: 8,
            max_depth: 64,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct BudgetReport {
    pub fresh_exhausted: bool,
    pub contractions_exhausted: bool,
    pub depth_exhausted: bool,
    /// Open branches whose canonical model was tried and did not falsify the root.
    pub rejected_models: usize,
    pub nodes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Evidence {
    pub side: Side,
    pub formula: LabeledFormula,
    pub agent: Agent,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Proved(Proof),
    /// A model of the frame class making every left member true and every
    /// right member false.
    Refuted {
        model: NetworkModel,
        evidence: Vec<Evidence>,
    },
    Unknown(BudgetReport),
}

impl SearchOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, SearchOutcome::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, SearchOutcome::Refuted { .. })
    }

    pub fn proof(&self) -> Option<&Proof> {
        match self {
            SearchOutcome::Proved(p) => Some(p),
            _ => None,
        }
    }
}

/// Bounded-instantiation rounds tried before the saturating pass.
const FOCUSED_ROUNDS: usize = 3;
/// Node cap for one focused round.
const FOCUSED_NODES: usize = 50_000;
/// Two-premise rules below this depth may search both premises concurrently.
const PARALLEL_DEPTH: usize = 6;
const MAX_OPEN_BRANCHES: usize = 16;

pub fn prove(s: &Sequent, fc: FrameClass, budget: Budget) -> SearchOutcome {
    prove_with(s, fc, budget, Exec::default())
}

/// Searches for a proof, first with few instantiations per branch (which
/// finds small proofs), then by saturating every branch. An open branch is
/// reported as a countermodel only after its canonical model has been
/// checked against `s` itself.
pub fn prove_with(s: &Sequent, fc: FrameClass, budget: Budget, exec: Exec) -> SearchOutcome {
    let root = Branch::root(s);
    let mut nodes = 0;
    for limit in 0..=FOCUSED_ROUNDS {
        let search = Search::new(fc, budget, Exec::Sequential, Mode::Focused { limit });
        let attempt = search.expand(root.clone());
        nodes += search.nodes.load(Ordering::Relaxed);
        match attempt {
            Attempt::Closed(p) => return SearchOutcome::Proved(p),
            Attempt::Open(_) if search.nodes.load(Ordering::Relaxed) > FOCUSED_NODES => break,
            Attempt::Open(_) => {}
        }
    }
    let search = Search::new(fc, budget, exec, Mode::Saturate);
    let attempt = search.expand(root);
    nodes += search.nodes.load(Ordering::Relaxed);
    let branches = match attempt {
        Attempt::Closed(p) => return SearchOutcome::Proved(p),
        Attempt::Open(b) => b,
    };
    let mut report = BudgetReport {
        nodes,
        ..Default::default()
    };
    let root_nominals = s.nominals();
    for b in &branches {
        report.fresh_exhausted |= b.fresh_exhausted;
        report.contractions_exhausted |= b.contractions_exhausted;
        report.depth_exhausted |= b.depth_exhausted;
    }
    for b in branches {
        let mut names = b.seq.nominals();
        names.extend(root_nominals.iter().cloned());
        let model = canonical_model(&b.seq.elementary_part(), &names, fc);
        if s.falsified_by(&model) && check_frame(&model, fc).is_empty() {
            let evidence = evidence(s, &model);
            return SearchOutcome::Refuted { model, evidence };
        }
        report.rejected_models += 1;
    }
    SearchOutcome::Unknown(report)
}

fn evidence(s: &Sequent, m: &NetworkModel) -> Vec<Evidence> {
    let mut out = Vec::new();
    for side in [Side::Left, Side::Right] {
        for f in s.side(side) {
            let label = match f {
                LabeledFormula::Labeled { label, .. } | LabeledFormula::Rel(_, label, _) => label,
            };
            let agent = m
                .agent(m.denote(label).expect("root nominals are denoted"))
                .clone();
            out.push(Evidence {
                side,
                formula: f.clone(),
                agent,
                holds: f.holds(m).unwrap_or(false),
            });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Mode {
    /// At most `limit` instantiations per branch, trying every choice.
    Focused { limit: usize },
    /// Fair expansion without backtracking.
    Saturate,
}

#[derive(Clone)]
struct Branch {
    seq: Sequent,
    fresh: FreshNominals,
    fresh_used: usize,
    depth: usize,
    instantiations: usize,
    done: BTreeSet<(Side, LabeledFormula, Nominal)>,
    contractions: BTreeMap<(Side, LabeledFormula), usize>,
}

impl Branch {
    fn root(s: &Sequent) -> Branch {
        Branch {
            seq: s.clone(),
            fresh: FreshNominals::avoiding(&s.nominals()),
            fresh_used: 0,
            depth: 0,
            instantiations: 0,
            done: BTreeSet::new(),
            contractions: BTreeMap::new(),
        }
    }

    fn step(&self, seq: Sequent) -> Branch {
        Branch {
            seq,
            depth: self.depth + 1,
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug)]
struct OpenBranch {
    seq: Sequent,
    fresh_exhausted: bool,
    contractions_exhausted: bool,
    depth_exhausted: bool,
}

impl OpenBranch {
    fn new(seq: &Sequent) -> OpenBranch {
        OpenBranch {
            seq: seq.clone(),
            fresh_exhausted: false,
            contractions_exhausted: false,
            depth_exhausted: false,
        }
    }
}

enum Attempt {
    Closed(Proof),
    Open(Vec<OpenBranch>),
}

struct Search {
    fc: FrameClass,
    budget: Budget,
    exec: Exec,
    mode: Mode,
    nodes: AtomicUsize,
}

fn node(
    rule: Rule,
    conclusion: &Sequent,
    principal: &LabeledFormula,
    nominal: Option<Nominal>,
    premises: Vec<Proof>,
) -> Proof {
    Proof {
        rule,
        conclusion: conclusion.clone(),
        principal: Some(principal.clone()),
        nominal,
        premises,
    }
}

fn split(f: &LabeledFormula) -> Option<(&Nominal, &Formula)> {
    match f {
        LabeledFormula::Labeled { label, body } => Some((label, body)),
        LabeledFormula::Rel(..) => None,
    }
}

fn lab(i: &Nominal, f: &Formula) -> LabeledFormula {
    LabeledFormula::labeled(i.clone(), f.clone())
}

impl Search {
    fn new(fc: FrameClass, budget: Budget, exec: Exec, mode: Mode) -> Search {
        Search {
            fc,
            budget,
            exec,
            mode,
            nodes: AtomicUsize::new(0),
        }
    }

    fn expand(&self, b: Branch) -> Attempt {
        let seen = self.nodes.fetch_add(1, Ordering::Relaxed);
        if let Some(w) = find_witness(&b.seq, self.fc) {
            return Attempt::Closed(w.close(&b.seq));
        }
        if matches!(self.mode, Mode::Focused { .. }) && seen > FOCUSED_NODES {
            return Attempt::Open(vec![OpenBranch::new(&b.seq)]);
        }
        if b.depth >= self.budget.max_depth {
            return Attempt::Open(vec![OpenBranch {
                depth_exhausted: true,
                ..OpenBranch::new(&b.seq)
            }]);
        }
        if let Some((side, f)) = self.invertible(&b.seq) {
            return self.propositional(b, side, f);
        }
        if let Some((side, f)) = self.existential(&b.seq) {
            if b.fresh_used >= self.budget.max_fresh_nominals {
                return Attempt::Open(vec![OpenBranch {
                    fresh_exhausted: true,
                    ..OpenBranch::new(&b.seq)
                }]);
            }
            return self.fresh(b, side, f);
        }
        let (candidates, blocked) = self.candidates(&b);
        let open = || {
            Attempt::Open(vec![OpenBranch {
                contractions_exhausted: blocked,
                ..OpenBranch::new(&b.seq)
            }])
        };
        if candidates.is_empty() {
            return open();
        }
        match self.mode {
            Mode::Saturate => {
                let (side, f, j) = candidates.into_iter().next().expect("non-empty");
                self.instantiate(b, side, f, j)
            }
            Mode::Focused { limit } => {
                if b.instantiations >= limit {
                    return open();
                }
                for (side, f, j) in candidates {
                    if let Attempt::Closed(p) = self.instantiate(b.clone(), side, f, j) {
                        return Attempt::Closed(p);
                    }
                }
                open()
            }
        }
    }

    /// Negations, left disjunctions and conjunctions, right conjunctions and disjunctions.
    fn invertible(&self, s: &Sequent) -> Option<(Side, LabeledFormula)> {
        for side in [Side::Left, Side::Right] {
            for f in s.side(side) {
                if let Some((_, body)) = split(f) {
                    if matches!(body, Formula::Not(_) | Formula::Or(..) | Formula::And(..)) {
                        return Some((side, f.clone()));
                    }
                }
            }
        }
        None
    }

    /// Left diamonds and right global boxes, which take a fresh nominal.
    fn existential(&self, s: &Sequent) -> Option<(Side, LabeledFormula)> {
        let left = s
            .gamma
            .iter()
            .find(|f| matches!(split(f), Some((_, Formula::Diamond(..)))));
        let right = s
            .delta
            .iter()
            .find(|f| matches!(split(f), Some((_, Formula::Global(_)))));
        left.map(|f| (Side::Left, f.clone()))
            .or_else(|| right.map(|f| (Side::Right, f.clone())))
    }

    fn two(
        &self,
        b: &Branch,
        first: Sequent,
        second: Sequent,
    ) -> Result<(Proof, Proof), Vec<OpenBranch>> {
        let (l, r) = (b.step(first), b.step(second));
        let (a, c) =
            if self.mode == Mode::Saturate && b.depth < PARALLEL_DEPTH && self.exec.is_parallel() {
                self.exec.join(|| self.expand(l), || self.expand(r))
            } else {
                let a = self.expand(l);
                if let (Attempt::Open(_), Mode::Focused { .. }) = (&a, self.mode) {
                    return Err(match a {
                        Attempt::Open(o) => o,
                        Attempt::Closed(_) => unreachable!(),
                    });
                }
                (a, self.expand(r))
            };
        match (a, c) {
            (Attempt::Closed(p), Attempt::Closed(q)) => Ok((p, q)),
            (Attempt::Open(mut o), Attempt::Open(more)) => {
                o.extend(more);
                o.truncate(MAX_OPEN_BRANCHES);
                Err(o)
            }
            (Attempt::Open(o), _) | (_, Attempt::Open(o)) => Err(o),
        }
    }

    fn one(&self, b: &Branch, premise: Sequent, build: impl FnOnce(Proof) -> Proof) -> Attempt {
        match self.expand(b.step(premise)) {
            Attempt::Closed(p) => Attempt::Closed(build(p)),
            open => open,
        }
    }

    fn propositional(&self, b: Branch, side: Side, f: LabeledFormula) -> Attempt {
        let s = &b.seq;
        let (i, body) = split(&f).expect("labeled");
        let rest = s.without(side, &f).expect("member");
        match (side, body) {
            (_, Formula::Not(a)) => {
                let other = if side == Side::Left {
                    Side::Right
                } else {
                    Side::Left
                };
                let rule = if side == Side::Left {
                    Rule::LNot
                } else {
                    Rule::RNot
                };
                self.one(&b, rest.with(other, lab(i, a)), |p| {
                    node(rule, s, &f, None, vec![p])
                })
            }
            (Side::Left, Formula::Or(x, y)) | (Side::Right, Formula::And(x, y)) => {
                let rule = if side == Side::Left {
                    Rule::LOr
                } else {
                    Rule::RAnd
                };
                match self.two(&b, rest.with(side, lab(i, x)), rest.with(side, lab(i, y))) {
                    Ok((p, q)) => Attempt::Closed(node(rule, s, &f, None, vec![p, q])),
                    Err(o) => Attempt::Open(o),
                }
            }
            (_, Formula::Or(x, y) | Formula::And(x, y)) => {
                // contract, then take each half from one copy
                let (c, r1, r2) = match side {
                    Side::Right => (Rule::Rc, Rule::ROr1, Rule::ROr2),
                    Side::Left => (Rule::Lc, Rule::LAnd1, Rule::LAnd2),
                };
                let doubled = s.with(side, f.clone());
                let after_first = s.with(side, lab(i, x));
                let after_both = rest.with(side, lab(i, x)).with(side, lab(i, y));
                self.one(&b, after_both, |p| {
                    let second = node(r2, &after_first, &f, None, vec![p]);
                    let first = node(r1, &doubled, &f, None, vec![second]);
                    node(c, s, &f, None, vec![first])
                })
            }
            _ => unreachable!("only propositional principals are passed here"),
        }
    }

    fn fresh(&self, mut b: Branch, side: Side, f: LabeledFormula) -> Attempt {
        let s = b.seq.clone();
        let (i, body) = split(&f).expect("labeled");
        let j = b.fresh.fresh();
        b.fresh_used += 1;
        let rest = s.without(side, &f).expect("member");
        let (rule, premise) = match body {
            Formula::Diamond(sign, a) => (
                Rule::LDiamond(*sign),
                rest.with(side, LabeledFormula::rel(*sign, i.clone(), j.clone()))
                    .with(side, lab(&j, a)),
            ),
            Formula::Global(a) => (Rule::RGlobal, rest.with(side, lab(&j, a))),
            _ => unreachable!("only diamonds and global boxes take fresh nominals"),
        };
        self.one(&b, premise, |p| node(rule, &s, &f, Some(j), vec![p]))
    }

    /// Whether the canonical model could link `i` to `j` by `sign`, i.e.
    /// whether instantiating a right diamond at `j` is needed.
    fn may_link(&self, s: &Sequent, sign: Sign, i: &Nominal, j: &Nominal) -> bool {
        let has = |side, sg| s.contains(side, &LabeledFormula::rel(sg, i.clone(), j.clone()));
        let cc = self.fc == FrameClass::CollectivelyConnected;
        match sign {
            Sign::Plus => {
                i == j
                    || has(Side::Left, Sign::Plus)
                    || cc
                        && (has(Side::Right, Sign::Minus)
                            || ![Side::Left, Side::Right]
                                .iter()
                                .any(|&sd| has(sd, Sign::Plus) || has(sd, Sign::Minus)))
            }
            Sign::Minus => {
                i != j && (has(Side::Left, Sign::Minus) || cc && has(Side::Right, Sign::Plus))
            }
        }
    }

    /// Pending instantiations, and whether some were held back by the contraction budget.
    fn candidates(&self, b: &Branch) -> (Vec<(Side, LabeledFormula, Nominal)>, bool) {
        let s = &b.seq;
        let names = s.nominals();
        let mut out = Vec::new();
        let mut seen = BTreeSet::new();
        let mut blocked = false;
        for side in [Side::Left, Side::Right] {
            for f in s.side(side) {
                let Some((i, body)) = split(f) else { continue };
                let targets: Vec<&Nominal> = match (side, body) {
                    (Side::Left, Formula::Global(_)) => names.iter().collect(),
                    (Side::Right, Formula::Diamond(sign, _)) => names
                        .iter()
                        .filter(|j| self.may_link(s, *sign, i, j))
                        .collect(),
                    _ => continue,
                };
                if !seen.insert((side, f.clone())) {
                    continue;
                }
                let pending: Vec<&Nominal> = targets
                    .into_iter()
                    .filter(|j| !b.done.contains(&(side, f.clone(), (*j).clone())))
                    .collect();
                if pending.is_empty() {
                    continue;
                }
                if b.contractions.get(&(side, f.clone())).copied().unwrap_or(0)
                    >= self.budget.max_contractions_per_formula
                {
                    blocked = true;
                    continue;
                }
                out.extend(pending.into_iter().map(|j| (side, f.clone(), j.clone())));
            }
        }
        (out, blocked)
    }

    /// Contracts `f` and instantiates one copy at `j`.
    fn instantiate(&self, mut b: Branch, side: Side, f: LabeledFormula, j: Nominal) -> Attempt {
        let s = b.seq.clone();
        b.done.insert((side, f.clone(), j.clone()));
        *b.contractions.entry((side, f.clone())).or_default() += 1;
        b.instantiations += 1;
        let doubled = s.with(side, f.clone());
        let (i, body) = split(&f).expect("labeled");
        let contraction = if side == Side::Left {
            Rule::Lc
        } else {
            Rule::Rc
        };
        let wrap = |inner: Proof| node(contraction, &s, &f, None, vec![inner]);
        match body {
            Formula::Global(a) => self.one(&b, s.with(side, lab(&j, a)), |p| {
                wrap(node(Rule::LGlobal, &doubled, &f, Some(j.clone()), vec![p]))
            }),
            Formula::Diamond(sign, a) => {
                let atom = LabeledFormula::rel(*sign, i.clone(), j.clone());
                match self.two(&b, s.with(side, atom), s.with(side, lab(&j, a))) {
                    Ok((p, q)) => Attempt::Closed(wrap(node(
                        Rule::RDiamond(*sign),
                        &doubled,
                        &f,
                        Some(j.clone()),
                        vec![p, q],
                    ))),
                    Err(o) => Attempt::Open(o),
                }
            }
            _ => unreachable!("only universal principals are instantiated"),
        }
    }
}
