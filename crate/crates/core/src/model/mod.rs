//! Finite signed network models.
//!
//! Links are stored as a symmetric matrix of `Option<Sign>`, so a pair can
//! never be both positive and negative. The agent list, valuation and
//! nominal denotation are shared behind `Arc`; link updates only copy the
//! matrix.

mod enumerate;
mod eval;
mod file;
mod frame;

pub use enumerate::enumerate_models;
pub use eval::{eval_at, eval_nominal, kripke_eval};
pub use file::load_model;
pub use frame::{check_frame, FrameClass, Violation};

use crate::syntax::{Agent, Nominal, PropVar, Sign};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("unknown agent `{0}`")]
    UnknownAgent(String),
    #[error("agent `{0}` declared twice")]
    DuplicateAgent(String),
    #[error("a model needs at least one agent")]
    NoAgents,
    #[error("edge {{{0},{1}}} declared both positive and negative")]
    Overlap(Agent, Agent),
    #[error("nominal `{0}` does not denote any agent")]
    UnknownNominal(Nominal),
    #[error("nominal `{0}` declared twice")]
    DuplicateNominal(Nominal),
    #[error("cannot add {sign:?} link {{{a},{b}}}: it would overlap an existing link")]
    WouldOverlap { a: Agent, b: Agent, sign: Sign },
    #[error("cannot flip {{{a},{b}}} to {to:?}: no such link to flip")]
    NotFlippable { a: Agent, b: Agent, to: Sign },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NetworkModel {
    agents: Arc<Vec<Agent>>,
    links: Vec<Option<Sign>>,
    valuation: Arc<BTreeMap<PropVar, BTreeSet<usize>>>,
    denote: Arc<BTreeMap<Nominal, usize>>,
    anonymous: Arc<BTreeSet<usize>>,
}

impl NetworkModel {
    pub fn builder<I, S>(agents: I) -> ModelBuilder
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        ModelBuilder {
            agents: agents.into_iter().map(|s| s.as_ref().to_string()).collect(),
            positive: Vec::new(),
            negative: Vec::new(),
            valuation: BTreeMap::new(),
            nominals: Vec::new(),
            reflexive: true,
        }
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    /// Agents in lexicographic order; indices into this slice identify agents.
    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn agent(&self, idx: usize) -> &Agent {
        &self.agents[idx]
    }

    pub fn agent_index(&self, a: &Agent) -> Option<usize> {
        self.agents.binary_search(a).ok()
    }

    pub fn link(&self, a: usize, b: usize) -> Option<Sign> {
        self.links[a * self.len() + b]
    }

    pub fn related(&self, sign: Sign, a: usize, b: usize) -> bool {
        self.link(a, b) == Some(sign)
    }

    /// Agents related to `a` by `sign`, in agent order.
    pub fn successors(&self, sign: Sign, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&b| self.related(sign, a, b))
    }

    pub fn holds(&self, p: &PropVar, a: usize) -> bool {
        self.valuation.get(p).is_some_and(|s| s.contains(&a))
    }

    pub fn props(&self) -> impl Iterator<Item = &PropVar> {
        self.valuation.keys()
    }

    pub fn denote(&self, i: &Nominal) -> Option<usize> {
        self.denote.get(i).copied()
    }

    /// All nominals with their denotations, in nominal order.
    pub fn nominals(&self) -> impl Iterator<Item = (&Nominal, usize)> {
        self.denote.iter().map(|(n, &a)| (n, a))
    }

    pub fn is_named(&self) -> bool {
        let hit: BTreeSet<usize> = self.denote.values().copied().collect();
        hit.len() == self.len()
    }

    /// True for agents that had no nominal in the source and were auto-named.
    pub fn is_anonymous(&self, idx: usize) -> bool {
        self.anonymous.contains(&idx)
    }

    /// Unordered pairs `(a, b)` with `a <= b` carrying `sign`.
    pub fn edges(&self, sign: Sign) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|a| (a..n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.related(sign, a, b))
            .collect()
    }

    /// The link matrix, which is all that dynamic updates ever change.
    pub fn fingerprint(&self) -> &[Option<Sign>] {
        &self.links
    }

    fn with_link(&self, a: usize, b: usize, value: Option<Sign>) -> NetworkModel {
        let n = self.len();
        let mut m = self.clone();
        m.links[a * n + b] = value;
        m.links[b * n + a] = value;
        m
    }

    /// Adds the symmetric `sign` link between `a` and `b`, by index.
    pub fn add_link_at(&self, a: usize, b: usize, sign: Sign) -> Result<NetworkModel, ModelError> {
        if self.link(a, b) == Some(sign.opposite()) {
            return Err(ModelError::WouldOverlap {
                a: self.agent(a).clone(),
                b: self.agent(b).clone(),
                sign,
            });
        }
        Ok(self.with_link(a, b, Some(sign)))
    }

    /// Moves the pair `a, b` into the `to` relation, by index.
    pub fn flip_link_at(&self, a: usize, b: usize, to: Sign) -> Result<NetworkModel, ModelError> {
        let legal = self.link(a, b) == Some(to.opposite()) && (to == Sign::Plus || a != b);
        if !legal {
            return Err(ModelError::NotFlippable {
                a: self.agent(a).clone(),
                b: self.agent(b).clone(),
                to,
            });
        }
        Ok(self.with_link(a, b, Some(to)))
    }

    pub fn add_link(&self, a: &Agent, b: &Agent, sign: Sign) -> Result<NetworkModel, ModelError> {
        self.add_link_at(self.index(a)?, self.index(b)?, sign)
    }

    pub fn flip_link(&self, a: &Agent, b: &Agent, to: Sign) -> Result<NetworkModel, ModelError> {
        self.flip_link_at(self.index(a)?, self.index(b)?, to)
    }

    pub fn index(&self, a: &Agent) -> Result<usize, ModelError> {
        self.agent_index(a)
            .ok_or_else(|| ModelError::UnknownAgent(a.to_string()))
    }
}

impl fmt::Debug for NetworkModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&file::write_model(self))
    }
}

impl fmt::Display for NetworkModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&file::write_model(self))
    }
}

/// Collects agents, links, valuation and nominals, then validates them all at once.
#[derive(Clone, Debug)]
pub struct ModelBuilder {
    agents: Vec<String>,
    positive: Vec<(String, String)>,
    negative: Vec<(String, String)>,
    valuation: BTreeMap<String, Vec<String>>,
    nominals: Vec<(String, String)>,
    reflexive: bool,
}

impl ModelBuilder {
    pub fn agent(mut self, a: impl AsRef<str>) -> Self {
        self.agents.push(a.as_ref().into());
        self
    }

    pub fn positive(mut self, a: impl AsRef<str>, b: impl AsRef<str>) -> Self {
        self.positive.push((a.as_ref().into(), b.as_ref().into()));
        self
    }

    pub fn negative(mut self, a: impl AsRef<str>, b: impl AsRef<str>) -> Self {
        self.negative.push((a.as_ref().into(), b.as_ref().into()));
        self
    }

    pub fn link(self, sign: Sign, a: impl AsRef<str>, b: impl AsRef<str>) -> Self {
        match sign {
            Sign::Plus => self.positive(a, b),
            Sign::Minus => self.negative(a, b),
        }
    }

    /// Declares `p` (possibly true nowhere) and makes it true at `agents`.
    pub fn valuation<I, S>(mut self, p: impl AsRef<str>, agents: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        self.valuation
            .entry(p.as_ref().into())
            .or_default()
            .extend(agents.into_iter().map(|s| s.as_ref().to_string()));
        self
    }

    pub fn nominal(mut self, i: impl AsRef<str>, a: impl AsRef<str>) -> Self {
        self.nominals.push((i.as_ref().into(), a.as_ref().into()));
        self
    }

    /// Skips adding self-loops to the positive relation. Only useful for
    /// exercising the frame checker.
    pub fn without_reflexive_closure(mut self) -> Self {
        self.reflexive = false;
        self
    }

    pub fn build(self) -> Result<NetworkModel, ModelError> {
        if self.agents.is_empty() {
            return Err(ModelError::NoAgents);
        }
        let mut agents: Vec<Agent> = self.agents.iter().map(Agent::new).collect();
        agents.sort();
        if let Some(w) = agents.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateAgent(w[0].to_string()));
        }
        let n = agents.len();
        let idx = |s: &str| {
            agents
                .binary_search(&Agent::new(s))
                .map_err(|_| ModelError::UnknownAgent(s.to_string()))
        };
        let mut links = vec![None; n * n];
        if self.reflexive {
            for a in 0..n {
                links[a * n + a] = Some(Sign::Plus);
            }
        }
        for (sign, pairs) in [(Sign::Plus, &self.positive), (Sign::Minus, &self.negative)] {
            for (a, b) in pairs {
                let (x, y) = (idx(a)?, idx(b)?);
                match links[x * n + y] {
                    Some(s) if s != sign => {
                        let (lo, hi) = if agents[x] <= agents[y] {
                            (x, y)
                        } else {
                            (y, x)
                        };
                        return Err(ModelError::Overlap(agents[lo].clone(), agents[hi].clone()));
                    }
                    _ => {
                        links[x * n + y] = Some(sign);
                        links[y * n + x] = Some(sign);
                    }
                }
            }
        }
        let mut valuation = BTreeMap::new();
        for (p, holders) in &self.valuation {
            let set: Result<BTreeSet<usize>, _> = holders.iter().map(|a| idx(a)).collect();
            valuation.insert(PropVar::new(p), set?);
        }
        let mut denote = BTreeMap::new();
        for (i, a) in &self.nominals {
            let nominal = Nominal::new(i);
            let target = idx(a)?;
            if denote
                .insert(nominal.clone(), target)
                .is_some_and(|old| old != target)
            {
                return Err(ModelError::DuplicateNominal(nominal));
            }
        }
        let named: BTreeSet<usize> = denote.values().copied().collect();
        let mut anonymous = BTreeSet::new();
        for a in (0..n).filter(|a| !named.contains(a)) {
            let mut name = Nominal::new(format!("_a{a}"));
            let mut k = 0;
            while denote.contains_key(&name) {
                name = Nominal::new(format!("_a{a}_{k}"));
                k += 1;
            }
            denote.insert(name, a);
            anonymous.insert(a);
        }
        Ok(NetworkModel {
            agents: Arc::new(agents),
            links,
            valuation: Arc::new(valuation),
            denote: Arc::new(denote),
            anonymous: Arc::new(anonymous),
        })
    }
}

/// The two three-agent models used throughout the examples.
pub mod fixtures {
    use super::NetworkModel;

    /// `a` and `b` are friends, both are enemies of `c`; `p` holds at `b`.
    pub fn m1() -> NetworkModel {
        NetworkModel::builder(["a", "b", "c"])
            .positive("a", "b")
            .negative("a", "c")
            .negative("b", "c")
            .valuation("p", ["b"])
            .build()
            .expect("fixture is well formed")
    }

    /// `a` is a friend of both `b` and `c`, who are enemies; `p` holds at `b`.
    pub fn m2() -> NetworkModel {
        NetworkModel::builder(["a", "b", "c"])
            .positive("a", "b")
            .positive("a", "c")
            .negative("b", "c")
            .valuation("p", ["b"])
            .build()
            .expect("fixture is well formed")
    }
}
