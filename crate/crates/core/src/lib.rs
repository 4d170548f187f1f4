//! Model checking and proof search for the logic of positive and negative
//! agent relations (PNL) and its link-changing extension (dPNL).
//!
//! * [`syntax`]: formulas, parser, renderers.
//! * [`model`]: signed network models, Kripke evaluation, link updates.
//! * [`game`]: evaluation games, solving, strategies, interactive play.
//! * [`sequent`]: the labeled calculi DS and DS^cc with proof search.
//! * [`dynamic`]: the relational-context calculus dDS.

pub mod dynamic;
pub mod exec;
pub mod game;
pub mod model;
pub mod random;
pub mod sequent;
pub mod syntax;

pub use syntax::{parse_formula, Agent, Formula, Nominal, PropVar, Sign};
