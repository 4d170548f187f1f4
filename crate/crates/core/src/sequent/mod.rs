//! Labeled sequent calculi DS and DS^cc.
//!
//! A sequent `Γ ⇒ Δ` holds of a model when some member of Γ is false or some
//! member of Δ is true. Proof search is a bounded backward search whose open
//! branches yield canonical countermodels.

mod check;
mod elementary;
mod search;
pub(crate) mod text;

pub use check::{admissible_weakening, check_proof, ProofViolation};
pub use elementary::{elementary_winning, extract_countermodel, Condition, Witness};
pub use search::{prove, prove_with, Budget, BudgetReport, SearchOutcome};
pub use text::{parse_labeled, parse_sequent};

use crate::game::Role;
use crate::model::{eval_at, ModelError, NetworkModel};
use crate::syntax::{Formula, Nominal, ParseError, Sign};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// `i:φ`, or a relational atom with its nominals in ascending order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LabeledFormula {
    Labeled { label: Nominal, body: Formula },
    Rel(Sign, Nominal, Nominal),
}

impl LabeledFormula {
    /// `i:φ`. A relational body does not depend on the label, so `i:R±(j,k)`
    /// becomes the atom `R±(j,k)`.
    pub fn labeled(label: impl Into<Nominal>, body: Formula) -> Self {
        match body {
            Formula::Rel(s, i, j) => LabeledFormula::rel(s, i, j),
            body => LabeledFormula::Labeled {
                label: label.into(),
                body,
            },
        }
    }

    pub fn rel(sign: Sign, i: impl Into<Nominal>, j: impl Into<Nominal>) -> Self {
        let (i, j) = (i.into(), j.into());
        if i <= j {
            LabeledFormula::Rel(sign, i, j)
        } else {
            LabeledFormula::Rel(sign, j, i)
        }
    }

    pub fn is_elementary(&self) -> bool {
        match self {
            LabeledFormula::Labeled { body, .. } => body.is_elementary(),
            LabeledFormula::Rel(..) => true,
        }
    }

    pub fn nominals(&self) -> BTreeSet<Nominal> {
        match self {
            LabeledFormula::Labeled { label, body } => {
                let mut out = body.nominals();
                out.insert(label.clone());
                out
            }
            LabeledFormula::Rel(_, i, j) => [i.clone(), j.clone()].into(),
        }
    }

    pub fn rename_nominal(&self, from: &Nominal, to: &Nominal) -> Self {
        let swap = |n: &Nominal| if n == from { to.clone() } else { n.clone() };
        match self {
            LabeledFormula::Labeled { label, body } => {
                LabeledFormula::labeled(swap(label), body.rename_nominal(from, to))
            }
            LabeledFormula::Rel(s, i, j) => LabeledFormula::rel(*s, swap(i), swap(j)),
        }
    }

    /// Truth in `m`, with labels read through the model's denotation.
    pub fn holds(&self, m: &NetworkModel) -> Result<bool, ModelError> {
        let at = |i: &Nominal| {
            m.denote(i)
                .ok_or_else(|| ModelError::UnknownNominal(i.clone()))
        };
        match self {
            LabeledFormula::Labeled { label, body } => eval_at(m, at(label)?, body),
            LabeledFormula::Rel(s, i, j) => Ok(m.related(*s, at(i)?, at(j)?)),
        }
    }

    pub fn ascii(&self) -> String {
        match self {
            LabeledFormula::Labeled { label, body } => {
                format!("{label}: {}", crate::syntax::render::ascii(body))
            }
            LabeledFormula::Rel(s, i, j) => format!("R{}({i},{j})", s.symbol()),
        }
    }
}

impl fmt::Display for LabeledFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabeledFormula::Labeled { label, body } => {
                if body.is_elementary()
                    || matches!(
                        body,
                        Formula::Not(_) | Formula::Diamond(..) | Formula::Global(_)
                    )
                {
                    write!(f, "{label}:{body}")
                } else {
                    write!(f, "{label}:({body})")
                }
            }
            LabeledFormula::Rel(s, i, j) => write!(f, "R{}({i},{j})", s.symbol()),
        }
    }
}

impl fmt::Debug for LabeledFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.ascii())
    }
}

impl serde::Serialize for LabeledFormula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.ascii())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Side {
    Left,
    Right,
}

/// `Γ ⇒ Δ` over multisets. Equality ignores the order of members but not
/// their multiplicity.
#[derive(Clone, Default, serde::Serialize)]
pub struct Sequent {
    pub gamma: Vec<LabeledFormula>,
    pub delta: Vec<LabeledFormula>,
}

impl Sequent {
    pub fn new(gamma: Vec<LabeledFormula>, delta: Vec<LabeledFormula>) -> Self {
        Sequent { gamma, delta }
    }

    /// Opponent states go to the left, proponent states to the right.
    pub fn from_disjunctive_state<'a, I>(states: I) -> Self
    where
        I: IntoIterator<Item = &'a (Role, Nominal, Formula)>,
    {
        let mut s = Sequent::default();
        for (role, i, f) in states {
            let lf = LabeledFormula::labeled(i.clone(), f.clone());
            match role {
                Role::O => s.gamma.push(lf),
                Role::P => s.delta.push(lf),
            }
        }
        s
    }

    pub fn side(&self, side: Side) -> &[LabeledFormula] {
        match side {
            Side::Left => &self.gamma,
            Side::Right => &self.delta,
        }
    }

    fn side_mut(&mut self, side: Side) -> &mut Vec<LabeledFormula> {
        match side {
            Side::Left => &mut self.gamma,
            Side::Right => &mut self.delta,
        }
    }

    pub fn members(&self) -> impl Iterator<Item = &LabeledFormula> {
        self.gamma.iter().chain(&self.delta)
    }

    pub fn is_elementary(&self) -> bool {
        self.members().all(LabeledFormula::is_elementary)
    }

    /// The sequent restricted to its elementary members.
    pub fn elementary_part(&self) -> Sequent {
        let keep = |v: &[LabeledFormula]| v.iter().filter(|f| f.is_elementary()).cloned().collect();
        Sequent {
            gamma: keep(&self.gamma),
            delta: keep(&self.delta),
        }
    }

    pub fn nominals(&self) -> BTreeSet<Nominal> {
        self.members().flat_map(LabeledFormula::nominals).collect()
    }

    pub fn contains(&self, side: Side, f: &LabeledFormula) -> bool {
        self.side(side).contains(f)
    }

    /// Copy with `f` added on `side`.
    pub fn with(&self, side: Side, f: LabeledFormula) -> Sequent {
        let mut s = self.clone();
        s.side_mut(side).push(f);
        s
    }

    /// Copy with one occurrence of `f` removed from `side`, if there is one.
    pub fn without(&self, side: Side, f: &LabeledFormula) -> Option<Sequent> {
        let mut s = self.clone();
        let v = s.side_mut(side);
        let k = v.iter().position(|g| g == f)?;
        v.remove(k);
        Some(s)
    }

    pub fn rename_nominal(&self, from: &Nominal, to: &Nominal) -> Sequent {
        let r = |v: &[LabeledFormula]| v.iter().map(|f| f.rename_nominal(from, to)).collect();
        Sequent {
            gamma: r(&self.gamma),
            delta: r(&self.delta),
        }
    }

    /// True when every left member holds and every right member fails in `m`.
    /// Members naming nominals that `m` does not denote make this false.
    pub fn falsified_by(&self, m: &NetworkModel) -> bool {
        self.gamma.iter().all(|f| f.holds(m) == Ok(true))
            && self.delta.iter().all(|f| f.holds(m) == Ok(false))
    }

    /// ASCII form accepted by [`parse_sequent`].
    pub fn ascii(&self) -> String {
        let side = |v: &[LabeledFormula]| {
            if v.is_empty() {
                ".".to_string()
            } else {
                v.iter()
                    .map(LabeledFormula::ascii)
                    .collect::<Vec<_>>()
                    .join(", ")
            }
        };
        format!("{} => {}", side(&self.gamma), side(&self.delta))
    }

    fn sorted(&self) -> (Vec<&LabeledFormula>, Vec<&LabeledFormula>) {
        let mut g: Vec<_> = self.gamma.iter().collect();
        let mut d: Vec<_> = self.delta.iter().collect();
        g.sort();
        d.sort();
        (g, d)
    }
}

impl PartialEq for Sequent {
    fn eq(&self, other: &Self) -> bool {
        self.sorted() == other.sorted()
    }
}

impl Eq for Sequent {}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[LabeledFormula]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        match (self.gamma.is_empty(), self.delta.is_empty()) {
            (true, true) => f.write_str("⇒"),
            (true, false) => write!(f, "⇒ {}", join(&self.delta)),
            (false, true) => write!(f, "{} ⇒", join(&self.gamma)),
            (false, false) => write!(f, "{} ⇒ {}", join(&self.gamma), join(&self.delta)),
        }
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.ascii())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Init,
    Lc,
    Rc,
    LNot,
    RNot,
    LOr,
    ROr1,
    ROr2,
    LAnd1,
    LAnd2,
    RAnd,
    /// Left diamond keeping only the relational atom.
    LDiamond1(Sign),
    /// Left diamond keeping only the body.
    LDiamond2(Sign),
    /// Left diamond keeping both, with one shared fresh nominal.
    LDiamond(Sign),
    RDiamond(Sign),
    LGlobal,
    RGlobal,
    Sym,
    RefPlus,
    RefMinus,
    No,
    Cc,
    /// Never valid; present so that checking can reject it by name.
    Cut,
}

impl Rule {
    pub fn name(self) -> String {
        let s = |s: Sign| s.symbol();
        match self {
            Rule::Init => "init".into(),
            Rule::Lc => "Lc".into(),
            Rule::Rc => "Rc".into(),
            Rule::LNot => "L¬".into(),
            Rule::RNot => "R¬".into(),
            Rule::LOr => "L∨".into(),
            Rule::ROr1 => "R∨1".into(),
            Rule::ROr2 => "R∨2".into(),
            Rule::LAnd1 => "L∧1".into(),
            Rule::LAnd2 => "L∧2".into(),
            Rule::RAnd => "R∧".into(),
            Rule::LDiamond1(x) => format!("(L◇{})1", s(x)),
            Rule::LDiamond2(x) => format!("(L◇{})2", s(x)),
            Rule::LDiamond(x) => format!("L◇{}", s(x)),
            Rule::RDiamond(x) => format!("R◇{}", s(x)),
            Rule::LGlobal => "L[A]".into(),
            Rule::RGlobal => "R[A]".into(),
            Rule::Sym => "sym".into(),
            Rule::RefPlus => "ref+".into(),
            Rule::RefMinus => "ref-".into(),
            Rule::No => "no".into(),
            Rule::Cc => "cc".into(),
            Rule::Cut => "cut".into(),
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        ALL_RULES.iter().copied().find(|r| r.name() == name)
    }

    /// Rules that introduce a nominal which must not occur in the conclusion.
    pub fn needs_fresh(self) -> bool {
        matches!(
            self,
            Rule::LDiamond1(_) | Rule::LDiamond2(_) | Rule::LDiamond(_) | Rule::RGlobal
        )
    }
}

const ALL_RULES: &[Rule] = &[
    Rule::Init,
    Rule::Lc,
    Rule::Rc,
    Rule::LNot,
    Rule::RNot,
    Rule::LOr,
    Rule::ROr1,
    Rule::ROr2,
    Rule::LAnd1,
    Rule::LAnd2,
    Rule::RAnd,
    Rule::LDiamond1(Sign::Plus),
    Rule::LDiamond1(Sign::Minus),
    Rule::LDiamond2(Sign::Plus),
    Rule::LDiamond2(Sign::Minus),
    Rule::LDiamond(Sign::Plus),
    Rule::LDiamond(Sign::Minus),
    Rule::RDiamond(Sign::Plus),
    Rule::RDiamond(Sign::Minus),
    Rule::LGlobal,
    Rule::RGlobal,
    Rule::Sym,
    Rule::RefPlus,
    Rule::RefMinus,
    Rule::No,
    Rule::Cc,
    Rule::Cut,
];

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl serde::Serialize for Rule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

/// A derivation tree. `principal` is the formula the rule acts on (for `no`
/// and `cc`, an atom naming the pair); `nominal` is the instantiated or
/// fresh nominal of modal rules.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Proof {
    pub rule: Rule,
    pub conclusion: Sequent,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub principal: Option<LabeledFormula>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nominal: Option<Nominal>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<Proof>,
}

impl Proof {
    pub fn leaf(rule: Rule, conclusion: Sequent, principal: LabeledFormula) -> Proof {
        Proof {
            rule,
            conclusion,
            principal: Some(principal),
            nominal: None,
            premises: Vec::new(),
        }
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Proof::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Proof::height).max().unwrap_or(0)
    }

    pub fn count(&self, rule: Rule) -> usize {
        usize::from(self.rule == rule) + self.premises.iter().map(|p| p.count(rule)).sum::<usize>()
    }

    pub fn rename_nominal(&self, from: &Nominal, to: &Nominal) -> Proof {
        let swap = |n: &Nominal| if n == from { to.clone() } else { n.clone() };
        Proof {
            rule: self.rule,
            conclusion: self.conclusion.rename_nominal(from, to),
            principal: self.principal.as_ref().map(|f| f.rename_nominal(from, to)),
            nominal: self.nominal.as_ref().map(swap),
            premises: self
                .premises
                .iter()
                .map(|p| p.rename_nominal(from, to))
                .collect(),
        }
    }

    /// Every nominal mentioned anywhere in the tree.
    pub fn nominals(&self) -> BTreeSet<Nominal> {
        let mut out = self.conclusion.nominals();
        out.extend(self.nominal.iter().cloned());
        for p in &self.premises {
            out.extend(p.nominals());
        }
        out
    }

    /// One node per line, `rule  conclusion`, premises indented below.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut String) {
        use std::fmt::Write;
        let _ = writeln!(
            out,
            "{}{}  {}",
            "  ".repeat(depth),
            self.rule,
            self.conclusion
        );
        for p in &self.premises {
            p.render_into(depth + 1, out);
        }
    }
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SequentError {
    #[error("in the item text starting at offset {offset}: {source}")]
    Parse { offset: usize, source: ParseError },
    #[error("{0}")]
    Syntax(String),
    #[error("`{0}` is not elementary")]
    NotElementary(String),
    #[error("the sequent is an axiom ({0:?}); it has no countermodel")]
    Winning(Condition),
}
