//! Evaluation games between Me (verifying as proponent) and You.
//!
//! A node records whose turn it is (`mover`); leaves record who won. Solving
//! annotates every node with its winner by backward induction.

mod build;
mod play;
mod render;
mod solve;

pub use build::{build_game_tree, build_game_tree_with};
pub use play::{play_interactive, PlayError, PlayOutcome};
pub use render::render_tree;
pub use solve::{solve, solve_with, Solved, Strategy, StrategyError};

use crate::model::{ModelError, NetworkModel};
use crate::syntax::{Agent, Formula, Nominal};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Role {
    P,
    O,
}

impl Role {
    pub fn swap(self) -> Role {
        match self {
            Role::P => Role::O,
            Role::O => Role::P,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::P => "P",
            Role::O => "O",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Player {
    #[serde(rename = "I")]
    Me,
    #[serde(rename = "Y")]
    You,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Me => Player::You,
            Player::You => Player::Me,
        }
    }

    /// The player who makes existential choices for `role`.
    fn chooser(role: Role) -> Player {
        match role {
            Role::P => Player::Me,
            Role::O => Player::You,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Me => "I",
            Player::You => "Y",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    /// Positions are agents and modalities move along links.
    #[default]
    Agent,
    /// Positions are nominals; modalities pick a nominal and test the link.
    Nominal,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(untagged)]
pub enum Locus {
    Agent(Agent),
    Nominal(Nominal),
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Agent(a) => a.fmt(f),
            Locus::Nominal(n) => n.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct GameState {
    pub role: Role,
    pub locus: Locus,
    pub formula: Formula,
    /// The current model in games with link-changing modalities.
    #[serde(skip)]
    pub snapshot: Option<Arc<NetworkModel>>,
}

impl GameState {
    pub fn new(role: Role, locus: Locus, formula: Formula) -> Self {
        GameState {
            role,
            locus,
            formula,
            snapshot: None,
        }
    }

    pub fn at_agent(role: Role, a: impl AsRef<str>, formula: Formula) -> Self {
        GameState::new(role, Locus::Agent(Agent::new(a)), formula)
    }

    pub fn at_nominal(role: Role, i: impl AsRef<str>, formula: Formula) -> Self {
        GameState::new(role, Locus::Nominal(Nominal::new(i)), formula)
    }

    /// Attaches `model` as the snapshot that link updates will modify.
    pub fn with_snapshot(mut self, model: NetworkModel) -> Self {
        self.snapshot = Some(Arc::new(model));
        self
    }

    pub fn is_elementary(&self) -> bool {
        self.formula.is_elementary()
    }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GameTree {
    #[serde(flatten)]
    pub state: GameState,
    pub mover: Player,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winner: Option<Player>,
    #[serde(skip)]
    pub terminal_winner: Option<Player>,
    #[serde(serialize_with = "render::serialize_children")]
    pub children: Vec<(String, GameTree)>,
}

impl GameTree {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        1 + self
            .children
            .iter()
            .map(|(_, c)| c.height())
            .max()
            .unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(|(_, c)| c.size()).sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GameError {
    #[error("locus `{0}` does not match the {1:?} addressing mode")]
    ModeMismatch(Locus, Mode),
    #[error("nominal `{0}` is not denoted in the model")]
    UnknownNominal(Nominal),
    #[error("link-changing modalities need a game state with a model snapshot")]
    MissingSnapshot,
    #[error(transparent)]
    Model(#[from] ModelError),
}
