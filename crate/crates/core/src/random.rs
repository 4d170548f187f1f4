//! Random instances.
//!
//! Every generator takes a [`ChaCha8Rng`] so that batches are reproducible
//! from a seed.

use crate::model::{FrameClass, NetworkModel};
use crate::sequent::{LabeledFormula, Sequent};
use crate::syntax::{Formula, LinkKind, Nominal, PropVar, Sign};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Which operators and atoms a generator may use.
#[derive(Clone, Debug)]
pub struct Vocabulary {
    pub props: Vec<PropVar>,
    pub nominals: Vec<Nominal>,
    /// Allow `R±(i,j)` atoms.
    pub relational: bool,
    /// Allow link-changing modalities.
    pub dynamic: bool,
    pub global: bool,
}

impl Vocabulary {
    pub fn new(props: &[&str], nominals: &[&str]) -> Self {
        Vocabulary {
            props: props.iter().map(PropVar::new).collect(),
            nominals: nominals.iter().map(Nominal::new).collect(),
            relational: false,
            dynamic: false,
            global: true,
        }
    }

    pub fn relational(mut self, yes: bool) -> Self {
        self.relational = yes;
        self
    }

    pub fn dynamic(mut self, yes: bool) -> Self {
        self.dynamic = yes;
        self
    }

    pub fn global(mut self, yes: bool) -> Self {
        self.global = yes;
        self
    }

    fn nominal(&self, rng: &mut ChaCha8Rng) -> Nominal {
        self.nominals
            .choose(rng)
            .cloned()
            .expect("vocabulary has nominals")
    }
}

fn sign(rng: &mut ChaCha8Rng) -> Sign {
    if rng.gen() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn atom(rng: &mut ChaCha8Rng, v: &Vocabulary) -> Formula {
    if v.relational && !v.nominals.is_empty() && rng.gen_ratio(1, 3) {
        let (i, j) = (v.nominal(rng), v.nominal(rng));
        return Formula::Rel(sign(rng), i, j);
    }
    Formula::Prop(
        v.props
            .choose(rng)
            .cloned()
            .expect("vocabulary has variables"),
    )
}

/// A formula of exactly the given degree.
pub fn formula(rng: &mut ChaCha8Rng, degree: usize, v: &Vocabulary) -> Formula {
    if degree == 0 {
        return atom(rng, v);
    }
    let sub = |rng: &mut ChaCha8Rng| formula(rng, degree - 1, v);
    let mut ops = 5;
    if v.global {
        ops += 1;
    }
    if v.dynamic {
        ops += 2;
    }
    let pick = rng.gen_range(0..ops);
    let pick = if !v.global && pick >= 5 {
        pick + 1
    } else {
        pick
    };
    match pick {
        0 => Formula::not(sub(rng)),
        1 | 2 => {
            let (a, b) = (sub(rng), rng.gen_range(0..degree));
            let b = formula(rng, b, v);
            let (a, b) = if rng.gen() { (a, b) } else { (b, a) };
            if pick == 1 {
                Formula::and(a, b)
            } else {
                Formula::or(a, b)
            }
        }
        3 | 4 => Formula::diamond(sign(rng), sub(rng)),
        5 => Formula::global(sub(rng)),
        6 => {
            let kind = *[LinkKind::Plus, LinkKind::Minus, LinkKind::Either]
                .choose(rng)
                .expect("nonempty");
            Formula::add_link(kind, sub(rng))
        }
        _ => Formula::flip(sign(rng), sub(rng)),
    }
}

/// A model with between one and `max_agents` agents in which every nominal of
/// the vocabulary names some agent and every variable has a valuation.
pub fn model(
    rng: &mut ChaCha8Rng,
    max_agents: usize,
    v: &Vocabulary,
    fc: FrameClass,
) -> NetworkModel {
    let k = rng.gen_range(1..=max_agents.max(1));
    let names: Vec<String> = (0..k).map(|a| format!("a{a}")).collect();
    let mut b = NetworkModel::builder(&names);
    for x in 0..k {
        for y in x + 1..k {
            let choice = match fc {
                FrameClass::Pnl => rng.gen_range(0..3),
                FrameClass::CollectivelyConnected => rng.gen_range(1..3),
            };
            match choice {
                1 => b = b.positive(&names[x], &names[y]),
                2 => b = b.negative(&names[x], &names[y]),
                _ => {}
            }
        }
    }
    for p in &v.props {
        let holders: Vec<&String> = names.iter().filter(|_| rng.gen()).collect();
        b = b.valuation(p.as_str(), holders);
    }
    for i in &v.nominals {
        b = b.nominal(i.as_str(), names.choose(rng).expect("nonempty"));
    }
    b.build()
        .expect("random links respect the frame conditions")
}

/// An elementary sequent with up to `size` members on each side.
pub fn elementary_sequent(rng: &mut ChaCha8Rng, size: usize, v: &Vocabulary) -> Sequent {
    let member = |rng: &mut ChaCha8Rng| {
        let i = v.nominal(rng);
        if rng.gen() {
            LabeledFormula::rel(sign(rng), i, v.nominal(rng))
        } else {
            LabeledFormula::labeled(
                i,
                Formula::Prop(v.props.choose(rng).cloned().expect("nonempty")),
            )
        }
    };
    let gamma = (0..rng.gen_range(0..=size)).map(|_| member(rng)).collect();
    let delta = (0..rng.gen_range(0..=size)).map(|_| member(rng)).collect();
    Sequent::new(gamma, delta)
}
