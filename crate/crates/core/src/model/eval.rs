use super::{ModelError, NetworkModel};
use crate::syntax::{Agent, Formula, Nominal, Sign};

pub fn kripke_eval(m: &NetworkModel, a: &Agent, f: &Formula) -> Result<bool, ModelError> {
    eval_at(m, m.index(a)?, f)
}

fn denoted(m: &NetworkModel, i: &Nominal) -> Result<usize, ModelError> {
    m.denote(i)
        .ok_or_else(|| ModelError::UnknownNominal(i.clone()))
}

fn relation_holds(m: &NetworkModel, s: Sign, i: &Nominal, j: &Nominal) -> Result<bool, ModelError> {
    Ok(m.related(s, denoted(m, i)?, denoted(m, j)?))
}

/// Every model reachable by one application of a link-changing modality at `a`.
pub(crate) fn updates(m: &NetworkModel, a: usize, f: &Formula) -> Vec<NetworkModel> {
    let n = m.len();
    match f {
        Formula::AddLink(kind, _) => kind
            .signs()
            .iter()
            .flat_map(|&s| {
                (0..n)
                    .flat_map(move |b| (b..n).map(move |c| (b, c)))
                    .filter_map(move |(b, c)| m.add_link_at(b, c, s).ok())
            })
            .collect(),
        Formula::Flip(to, _) => (0..n)
            .filter_map(|b| m.flip_link_at(a, b, *to).ok())
            .collect(),
        _ => Vec::new(),
    }
}

/// Truth of `f` at the agent with index `a`.
pub fn eval_at(m: &NetworkModel, a: usize, f: &Formula) -> Result<bool, ModelError> {
    Ok(match f {
        Formula::Prop(p) => m.holds(p, a),
        Formula::Rel(s, i, j) => relation_holds(m, *s, i, j)?,
        Formula::Not(g) => !eval_at(m, a, g)?,
        Formula::And(g, h) => eval_at(m, a, g)? && eval_at(m, a, h)?,
        Formula::Or(g, h) => eval_at(m, a, g)? || eval_at(m, a, h)?,
        Formula::Diamond(s, g) => {
            for b in m.successors(*s, a) {
                if eval_at(m, b, g)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Global(g) => {
            for b in 0..m.len() {
                if !eval_at(m, b, g)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::AddLink(_, g) | Formula::Flip(_, g) => {
            for next in updates(m, a, f) {
                if eval_at(&next, a, g)? {
                    return Ok(true);
                }
            }
            false
        }
    })
}

/// Evaluation at a nominal in which the modalities quantify over nominals
/// rather than agents. Agrees with [`eval_at`] on named models.
pub fn eval_nominal(m: &NetworkModel, i: &Nominal, f: &Formula) -> Result<bool, ModelError> {
    let a = denoted(m, i)?;
    let names: Vec<Nominal> = m.nominals().map(|(n, _)| n.clone()).collect();
    Ok(match f {
        Formula::Prop(_) | Formula::Rel(..) => eval_at(m, a, f)?,
        Formula::Not(g) => !eval_nominal(m, i, g)?,
        Formula::And(g, h) => eval_nominal(m, i, g)? && eval_nominal(m, i, h)?,
        Formula::Or(g, h) => eval_nominal(m, i, g)? || eval_nominal(m, i, h)?,
        Formula::Diamond(s, g) => {
            for j in &names {
                if relation_holds(m, *s, i, j)? && eval_nominal(m, j, g)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Global(g) => {
            for j in &names {
                if !eval_nominal(m, j, g)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::AddLink(_, g) | Formula::Flip(_, g) => {
            for next in updates(m, a, f) {
                if eval_nominal(&next, i, g)? {
                    return Ok(true);
                }
            }
            false
        }
    })
}
