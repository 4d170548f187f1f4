//! Formulas: representation, parsing and rendering.

mod formula;
mod parse;
pub mod render;

pub use formula::{Agent, Formula, LinkKind, Nominal, PropVar, Sign, TRUTH_VAR};
pub use parse::{parse_formula, parse_ident, ParseError};
pub use render::Style;

/// Generates nominals `n0, n1, ...` that avoid every name it has been told about.
#[derive(Clone, Debug, Default)]
pub struct FreshNominals {
    next: usize,
    taken: std::collections::BTreeSet<Nominal>,
}

impl FreshNominals {
    pub fn avoiding<'a>(names: impl IntoIterator<Item = &'a Nominal>) -> Self {
        FreshNominals {
            next: 0,
            taken: names.into_iter().cloned().collect(),
        }
    }

    pub fn reserve(&mut self, n: &Nominal) {
        self.taken.insert(n.clone());
    }

    pub fn fresh(&mut self) -> Nominal {
        loop {
            let candidate = Nominal::new(format!("n{}", self.next));
            self.next += 1;
            if self.taken.insert(candidate.clone()) {
                return candidate;
            }
        }
    }
}
