use super::NetworkModel;
use crate::syntax::{Agent, Sign};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, serde::Serialize)]
pub enum FrameClass {
    #[default]
    Pnl,
    /// Every pair of agents is related one way or the other.
    CollectivelyConnected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotReflexive(Agent),
    NotConnected(Agent, Agent),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotReflexive(a) => {
                write!(f, "reflexivity: {a} is not positively related to itself")
            }
            Violation::NotConnected(a, b) => {
                write!(f, "collective connectedness: {{{a},{b}}} is unrelated")
            }
        }
    }
}

/// Symmetry and non-overlap hold by construction, so only reflexivity and
/// (for the connected class) totality can fail.
pub fn check_frame(m: &NetworkModel, fc: FrameClass) -> Vec<Violation> {
    let n = m.len();
    let mut out: Vec<Violation> = (0..n)
        .filter(|&a| m.link(a, a) != Some(Sign::Plus))
        .map(|a| Violation::NotReflexive(m.agent(a).clone()))
        .collect();
    if fc == FrameClass::CollectivelyConnected {
        for a in 0..n {
            for b in a + 1..n {
                if m.link(a, b).is_none() {
                    out.push(Violation::NotConnected(
                        m.agent(a).clone(),
                        m.agent(b).clone(),
                    ));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{m1, m2};

    #[test]
    fn fixtures_conform() {
        assert!(check_frame(&m1(), FrameClass::CollectivelyConnected).is_empty());
        assert!(check_frame(&m2(), FrameClass::CollectivelyConnected).is_empty());
    }

    #[test]
    fn disconnected_pair() {
        let m = NetworkModel::builder(["a", "b"]).build().unwrap();
        assert!(check_frame(&m, FrameClass::Pnl).is_empty());
        assert_eq!(
            check_frame(&m, FrameClass::CollectivelyConnected),
            vec![Violation::NotConnected(Agent::new("a"), Agent::new("b"))]
        );
    }

    #[test]
    fn missing_self_loop() {
        let m = NetworkModel::builder(["a", "b"])
            .positive("b", "b")
            .without_reflexive_closure()
            .build()
            .unwrap();
        assert_eq!(
            check_frame(&m, FrameClass::Pnl),
            vec![Violation::NotReflexive(Agent::new("a"))]
        );
    }
}
