//! The relational-context calculus dDS for link-changing modalities.
//!
//! A relational sequent `R ; Γ ⇒ Δ` keeps its relational atoms in a set `R`
//! that rules may update, since link changes make earlier relational facts
//! stale. Γ and Δ hold labeled formulas without relational atoms.
//!
//! Rules whose premise is read in an updated model only keep the principal
//! formula: every other member is weakened away first, because its truth
//! value refers to the model before the update.

mod check;
mod search;

pub use check::{check_dproof, DProofViolation};
pub use search::{prove_dds, prove_dds_with, DSearchOutcome};

use crate::model::NetworkModel;
use crate::sequent::text::split_top_level;
use crate::sequent::{LabeledFormula, SequentError};
use crate::syntax::{parse_formula, Formula, LinkKind, Nominal, Sign};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// `R±(i,j)` with `i <= j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelAtom {
    pub sign: Sign,
    pub i: Nominal,
    pub j: Nominal,
}

impl RelAtom {
    pub fn new(sign: Sign, i: impl Into<Nominal>, j: impl Into<Nominal>) -> Self {
        let (i, j) = (i.into(), j.into());
        if i <= j {
            RelAtom { sign, i, j }
        } else {
            RelAtom { sign, i: j, j: i }
        }
    }

    pub fn flipped(&self) -> RelAtom {
        RelAtom {
            sign: self.sign.opposite(),
            ..self.clone()
        }
    }

    pub fn touches(&self, k: &Nominal) -> bool {
        self.i == *k || self.j == *k
    }

    pub fn is_loop(&self) -> bool {
        self.i == self.j
    }
}

impl fmt::Display for RelAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}({},{})", self.sign.symbol(), self.i, self.j)
    }
}

impl fmt::Debug for RelAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl serde::Serialize for RelAtom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `R ; Γ ⇒ Δ`. Equality treats Γ and Δ as multisets.
#[derive(Clone, Default, serde::Serialize)]
pub struct RelationalSequent {
    pub context: BTreeSet<RelAtom>,
    pub gamma: Vec<LabeledFormula>,
    pub delta: Vec<LabeledFormula>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynError {
    #[error(transparent)]
    Parse(#[from] SequentError),
    #[error("invalid relational sequent: {0}")]
    InvalidInput(String),
}

impl RelationalSequent {
    pub fn new(
        context: impl IntoIterator<Item = RelAtom>,
        gamma: Vec<LabeledFormula>,
        delta: Vec<LabeledFormula>,
    ) -> Self {
        RelationalSequent {
            context: context.into_iter().collect(),
            gamma,
            delta,
        }
    }

    /// Checks that the context is consistent and that Γ, Δ carry no
    /// relational atoms.
    pub fn validate(&self) -> Result<(), DynError> {
        for a in &self.context {
            if a.sign == Sign::Minus && a.is_loop() {
                return Err(DynError::InvalidInput(format!(
                    "{a} is irreflexively false"
                )));
            }
            if self.context.contains(&a.flipped()) {
                return Err(DynError::InvalidInput(format!(
                    "{a} and {} overlap",
                    a.flipped()
                )));
            }
        }
        for f in self.gamma.iter().chain(&self.delta) {
            match f {
                LabeledFormula::Labeled { body, .. } if !body.has_relational_atoms() => {}
                _ => {
                    return Err(DynError::InvalidInput(format!(
                        "{f} contains a relational atom"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn side(&self, left: bool) -> &[LabeledFormula] {
        if left {
            &self.gamma
        } else {
            &self.delta
        }
    }

    pub fn nominals(&self) -> BTreeSet<Nominal> {
        let mut out: BTreeSet<Nominal> = self
            .gamma
            .iter()
            .chain(&self.delta)
            .flat_map(LabeledFormula::nominals)
            .collect();
        for a in &self.context {
            out.insert(a.i.clone());
            out.insert(a.j.clone());
        }
        out
    }

    /// True when `m` satisfies the context and every member of Γ, and no
    /// member of Δ.
    pub fn falsified_by(&self, m: &NetworkModel) -> bool {
        let linked = |a: &RelAtom| match (m.denote(&a.i), m.denote(&a.j)) {
            (Some(x), Some(y)) => m.related(a.sign, x, y),
            _ => false,
        };
        self.context.iter().all(linked)
            && self.gamma.iter().all(|f| f.holds(m) == Ok(true))
            && self.delta.iter().all(|f| f.holds(m) == Ok(false))
    }

    pub(crate) fn edit(
        &self,
        left: bool,
        remove: Option<&LabeledFormula>,
        add: &[LabeledFormula],
    ) -> Option<Self> {
        let mut s = self.clone();
        let v = if left { &mut s.gamma } else { &mut s.delta };
        if let Some(f) = remove {
            let k = v.iter().position(|g| g == f)?;
            v.remove(k);
        }
        v.extend(add.iter().cloned());
        Some(s)
    }

    pub fn ascii(&self) -> String {
        let ctx: Vec<String> = self.context.iter().map(|a| a.to_string()).collect();
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
        format!(
            "[{}] ; {} => {}",
            ctx.join(", "),
            side(&self.gamma),
            side(&self.delta)
        )
    }

    fn sorted(
        &self,
    ) -> (
        &BTreeSet<RelAtom>,
        Vec<&LabeledFormula>,
        Vec<&LabeledFormula>,
    ) {
        let mut g: Vec<_> = self.gamma.iter().collect();
        let mut d: Vec<_> = self.delta.iter().collect();
        g.sort();
        d.sort();
        (&self.context, g, d)
    }
}

impl PartialEq for RelationalSequent {
    fn eq(&self, other: &Self) -> bool {
        self.sorted() == other.sorted()
    }
}

impl Eq for RelationalSequent {}

impl fmt::Display for RelationalSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ctx: Vec<String> = self.context.iter().map(|a| a.to_string()).collect();
        let join = |v: &[LabeledFormula]| {
            v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let ctx = if ctx.is_empty() {
            "∅".to_string()
        } else {
            ctx.join(", ")
        };
        write!(f, "{ctx} ; {} ⇒ {}", join(&self.gamma), join(&self.delta))
    }
}

impl fmt::Debug for RelationalSequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", self.ascii())
    }
}

/// Parses `[R+(i,j), R-(k,l)] ; G => D`. The bracketed context may be
/// omitted, in which case it is empty.
pub fn parse_relational_sequent(src: &str) -> Result<RelationalSequent, DynError> {
    let trimmed = src.trim_start();
    let (context, rest) = if trimmed.starts_with('[')
        && !trimmed.starts_with("[A]")
        && !trimmed.starts_with("[+]")
        && !trimmed.starts_with("[-]")
    {
        let close = trimmed
            .find(']')
            .ok_or_else(|| DynError::InvalidInput("unclosed `[`".into()))?;
        let after = trimmed[close + 1..].trim_start();
        let rest = after.strip_prefix(';').ok_or_else(|| {
            DynError::InvalidInput("expected `;` after the relational context".into())
        })?;
        let inner = &trimmed[1..close];
        let mut ctx = BTreeSet::new();
        if !inner.trim().is_empty() {
            for (_, item) in split_top_level(inner) {
                match parse_formula(item)
                    .map_err(|source| SequentError::Parse { offset: 0, source })?
                {
                    Formula::Rel(s, i, j) => {
                        ctx.insert(RelAtom::new(s, i, j));
                    }
                    _ => {
                        return Err(DynError::InvalidInput(format!(
                            "`{}` is not a relational atom",
                            item.trim()
                        )))
                    }
                }
            }
        }
        (ctx, rest)
    } else {
        (BTreeSet::new(), src)
    };
    let s = crate::sequent::parse_sequent(rest)?;
    let rs = RelationalSequent {
        context,
        gamma: s.gamma,
        delta: s.delta,
    };
    rs.validate()?;
    Ok(rs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DRule {
    Init,
    Lc,
    Rc,
    Lw,
    Rw,
    LNot,
    RNot,
    LOr,
    ROr1,
    ROr2,
    LAnd1,
    LAnd2,
    RAnd,
    LDiamond(Sign),
    RDiamond(Sign),
    LGlobal,
    RGlobal,
    LAdd(LinkKind),
    RAdd(LinkKind),
    LFlip(Sign),
    RFlip(Sign),
}

impl DRule {
    pub fn name(self) -> String {
        let kind = |k: LinkKind| match k {
            LinkKind::Plus => "⊞+",
            LinkKind::Minus => "⊞-",
            LinkKind::Either => "⊞±",
        };
        let flip = |s: Sign| if s == Sign::Plus { "⊕" } else { "⊖" };
        match self {
            DRule::Init => "init".into(),
            DRule::Lc => "Lc".into(),
            DRule::Rc => "Rc".into(),
            DRule::Lw => "Lw".into(),
            DRule::Rw => "Rw".into(),
            DRule::LNot => "L¬".into(),
            DRule::RNot => "R¬".into(),
            DRule::LOr => "L∨".into(),
            DRule::ROr1 => "R∨1".into(),
            DRule::ROr2 => "R∨2".into(),
            DRule::LAnd1 => "L∧1".into(),
            DRule::LAnd2 => "L∧2".into(),
            DRule::RAnd => "R∧".into(),
            DRule::LDiamond(s) => format!("L◇{}", s.symbol()),
            DRule::RDiamond(s) => format!("R◇{}", s.symbol()),
            DRule::LGlobal => "L[A]".into(),
            DRule::RGlobal => "R[A]".into(),
            DRule::LAdd(k) => format!("L⟨{}⟩", kind(k)),
            DRule::RAdd(k) => format!("R⟨{}⟩", kind(k)),
            DRule::LFlip(s) => format!("L⟨{}⟩", flip(s)),
            DRule::RFlip(s) => format!("R⟨{}⟩", flip(s)),
        }
    }
}

impl fmt::Display for DRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl serde::Serialize for DRule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

/// A dDS derivation. `nominal` is the fresh or instantiated nominal of modal
/// rules; `atom` is the relational atom a rule adds to, or flips in, the context.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct DProof {
    pub rule: DRule,
    pub conclusion: RelationalSequent,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub principal: Option<LabeledFormula>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nominal: Option<Nominal>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<RelAtom>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub premises: Vec<DProof>,
}

impl DProof {
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(DProof::size).sum::<usize>()
    }

    pub fn count(&self, pred: impl Fn(DRule) -> bool + Copy) -> usize {
        usize::from(pred(self.rule)) + self.premises.iter().map(|p| p.count(pred)).sum::<usize>()
    }

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

impl fmt::Display for DProof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
