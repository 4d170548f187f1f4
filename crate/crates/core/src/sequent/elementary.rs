use super::{LabeledFormula, Proof, Rule, Sequent, SequentError, Side};
use crate::model::{FrameClass, NetworkModel};
use crate::syntax::{Formula, Nominal, Sign};
use std::collections::BTreeSet;
use std::fmt;

/// Which of the four closing conditions for elementary sequents applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
pub enum Condition {
    /// `R-(i,i)` on the left or `R+(i,i)` on the right.
    I,
    /// `R+(i,j)` and `R-(i,j)` both on the left.
    II,
    /// A shared member.
    III,
    /// `R+(i,j)` and `R-(i,j)` both on the right (connected frames only).
    IV,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::I => "i",
            Condition::II => "ii",
            Condition::III => "iii",
            Condition::IV => "iv",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    RefPlus(Nominal),
    RefMinus(Nominal),
    No(Nominal, Nominal),
    Init(LabeledFormula),
    Cc(Nominal, Nominal),
}

impl Witness {
    pub fn condition(&self) -> Condition {
        match self {
            Witness::RefPlus(_) | Witness::RefMinus(_) => Condition::I,
            Witness::No(..) => Condition::II,
            Witness::Init(_) => Condition::III,
            Witness::Cc(..) => Condition::IV,
        }
    }

    /// The closing derivation of `s`, which must contain the witness.
    pub fn close(&self, s: &Sequent) -> Proof {
        let rel = |sign, i: &Nominal, j: &Nominal| LabeledFormula::rel(sign, i.clone(), j.clone());
        match self {
            Witness::Init(f) => Proof::leaf(Rule::Init, s.clone(), f.clone()),
            Witness::RefPlus(i) => Proof::leaf(Rule::RefPlus, s.clone(), rel(Sign::Plus, i, i)),
            Witness::RefMinus(i) => Proof::leaf(Rule::RefMinus, s.clone(), rel(Sign::Minus, i, i)),
            Witness::Cc(i, j) => Proof::leaf(Rule::Cc, s.clone(), rel(Sign::Plus, i, j)),
            Witness::No(i, j) => {
                let premise = |sign| {
                    let a = rel(sign, i, j);
                    Proof::leaf(Rule::Init, s.with(Side::Right, a.clone()), a)
                };
                Proof {
                    rule: Rule::No,
                    conclusion: s.clone(),
                    principal: Some(rel(Sign::Plus, i, j)),
                    nominal: None,
                    premises: vec![premise(Sign::Plus), premise(Sign::Minus)],
                }
            }
        }
    }
}

/// Looks for a closing condition among the elementary members of `s`,
/// ignoring everything else.
pub(crate) fn find_witness(s: &Sequent, fc: FrameClass) -> Option<Witness> {
    let left: BTreeSet<&LabeledFormula> = s.gamma.iter().filter(|f| f.is_elementary()).collect();
    let right: BTreeSet<&LabeledFormula> = s.delta.iter().filter(|f| f.is_elementary()).collect();
    if let Some(f) = left.intersection(&right).next() {
        return Some(Witness::Init((*f).clone()));
    }
    for f in &left {
        if let LabeledFormula::Rel(Sign::Minus, i, j) = f {
            if i == j {
                return Some(Witness::RefMinus(i.clone()));
            }
        }
    }
    for f in &right {
        if let LabeledFormula::Rel(Sign::Plus, i, j) = f {
            if i == j {
                return Some(Witness::RefPlus(i.clone()));
            }
        }
    }
    let both = |side: &BTreeSet<&LabeledFormula>| {
        side.iter().find_map(|f| match f {
            LabeledFormula::Rel(Sign::Plus, i, j)
                if i != j
                    && side.contains(&LabeledFormula::rel(Sign::Minus, i.clone(), j.clone())) =>
            {
                Some((i.clone(), j.clone()))
            }
            _ => None,
        })
    };
    if fc == FrameClass::CollectivelyConnected {
        if let Some((i, j)) = both(&right) {
            return Some(Witness::Cc(i, j));
        }
    }
    both(&left).map(|(i, j)| Witness::No(i, j))
}

/// Decides whether an elementary sequent is an axiom of the frame class.
pub fn elementary_winning(s: &Sequent, fc: FrameClass) -> Result<Option<Witness>, SequentError> {
    if let Some(f) = s.members().find(|f| !f.is_elementary()) {
        return Err(SequentError::NotElementary(f.ascii()));
    }
    Ok(find_witness(s, fc))
}

/// The canonical model of a non-winning elementary sequent: one agent per
/// nominal, left members true, right members false.
pub fn extract_countermodel(s: &Sequent, fc: FrameClass) -> Result<NetworkModel, SequentError> {
    if let Some(w) = elementary_winning(s, fc)? {
        return Err(SequentError::Winning(w.condition()));
    }
    Ok(canonical_model(s, &s.nominals(), fc))
}

pub(crate) fn agent_name(i: &Nominal) -> String {
    format!("a_{i}")
}

/// Builds the canonical model from the elementary members of `s` over the
/// given nominals. Callers make sure no closing condition holds.
pub(crate) fn canonical_model(
    s: &Sequent,
    nominals: &BTreeSet<Nominal>,
    fc: FrameClass,
) -> NetworkModel {
    let mut names: BTreeSet<Nominal> = nominals.clone();
    names.extend(s.elementary_part().nominals());
    let agents: Vec<String> = if names.is_empty() {
        vec!["a".into()]
    } else {
        names.iter().map(agent_name).collect()
    };
    let mut b = NetworkModel::builder(&agents);
    for i in &names {
        b = b.nominal(i.as_str(), agent_name(i));
    }
    let atoms = |side: &[LabeledFormula], sign: Sign| -> BTreeSet<(Nominal, Nominal)> {
        side.iter()
            .filter_map(|f| match f {
                LabeledFormula::Rel(s, i, j) if *s == sign => Some((i.clone(), j.clone())),
                _ => None,
            })
            .collect()
    };
    let mut plus = atoms(&s.gamma, Sign::Plus);
    let mut minus = atoms(&s.gamma, Sign::Minus);
    if fc == FrameClass::CollectivelyConnected {
        let right_plus = atoms(&s.delta, Sign::Plus);
        let right_minus = atoms(&s.delta, Sign::Minus);
        let constrained: BTreeSet<(Nominal, Nominal)> = plus
            .iter()
            .chain(&minus)
            .chain(&right_plus)
            .chain(&right_minus)
            .cloned()
            .collect();
        for i in &names {
            for j in names.range(i..) {
                if i != j && !constrained.contains(&(i.clone(), j.clone())) {
                    plus.insert((i.clone(), j.clone()));
                }
            }
        }
        plus.extend(right_minus);
        minus.extend(right_plus.into_iter().filter(|(i, j)| i != j));
    }
    for (i, j) in &plus {
        b = b.positive(agent_name(i), agent_name(j));
    }
    for (i, j) in &minus {
        b = b.negative(agent_name(i), agent_name(j));
    }
    let mut props = BTreeSet::new();
    for f in s.members() {
        if let LabeledFormula::Labeled { body, .. } = f {
            props.extend(body.props());
        }
    }
    for p in props {
        let holders: Vec<String> = s
            .gamma
            .iter()
            .filter_map(|f| match f {
                LabeledFormula::Labeled {
                    label,
                    body: Formula::Prop(q),
                } if *q == p => Some(agent_name(label)),
                _ => None,
            })
            .collect();
        b = b.valuation(p.as_str(), holders);
    }
    b.build()
        .expect("canonical model of a non-winning sequent is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::check_frame;
    use crate::sequent::parse_sequent;

    fn seq(src: &str) -> Sequent {
        parse_sequent(src).unwrap()
    }

    fn tag(src: &str, fc: FrameClass) -> Option<Condition> {
        elementary_winning(&seq(src), fc)
            .unwrap()
            .map(|w| w.condition())
    }

    #[test]
    fn the_four_conditions() {
        assert_eq!(tag("R-(i,i) => .", FrameClass::Pnl), Some(Condition::I));
        assert_eq!(tag(". => R+(i,i)", FrameClass::Pnl), Some(Condition::I));
        assert_eq!(
            tag("R+(i,j), R-(i,j) => .", FrameClass::Pnl),
            Some(Condition::II)
        );
        assert_eq!(tag("i: p => i: p", FrameClass::Pnl), Some(Condition::III));
        assert_eq!(
            tag("R+(j,i) => R+(i,j)", FrameClass::Pnl),
            Some(Condition::III)
        );
        assert_eq!(tag(". => R+(i,j), R-(i,j)", FrameClass::Pnl), None);
        assert_eq!(
            tag(". => R+(i,j), R-(i,j)", FrameClass::CollectivelyConnected),
            Some(Condition::IV)
        );
        assert_eq!(tag("i: p => j: p", FrameClass::Pnl), None);
    }

    #[test]
    fn non_elementary_rejected() {
        assert!(matches!(
            elementary_winning(&seq("i: ~p => ."), FrameClass::Pnl),
            Err(SequentError::NotElementary(_))
        ));
    }

    fn assert_countermodel(s: &Sequent, fc: FrameClass) -> NetworkModel {
        let m = extract_countermodel(s, fc).unwrap();
        assert!(s.falsified_by(&m), "{m}");
        assert!(check_frame(&m, fc).is_empty());
        m
    }

    #[test]
    fn negative_pair() {
        let m = assert_countermodel(&seq("R-(i,j) => ."), FrameClass::Pnl);
        assert_eq!(m.len(), 2);
        assert_eq!(m.edges(Sign::Minus), vec![(0, 1)]);
        assert_eq!(m.edges(Sign::Plus), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn single_agent() {
        let m = assert_countermodel(&seq(". => i: p"), FrameClass::Pnl);
        assert_eq!(m.len(), 1);
        assert!(!m.holds(&"p".into(), 0));
    }

    #[test]
    fn connected_variant_puts_missing_links_on_the_other_side() {
        let m = assert_countermodel(&seq(". => R+(i,j)"), FrameClass::CollectivelyConnected);
        assert_eq!(m.edges(Sign::Minus), vec![(0, 1)]);
        let m = assert_countermodel(
            &seq("R+(i,k) => R-(j,k), i: p"),
            FrameClass::CollectivelyConnected,
        );
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn empty_sequent() {
        let m = assert_countermodel(&Sequent::default(), FrameClass::Pnl);
        assert_eq!(m.len(), 1);
    }

    #[test]
    fn winning_has_no_countermodel() {
        assert_eq!(
            extract_countermodel(&seq("i: p => i: p"), FrameClass::Pnl).unwrap_err(),
            SequentError::Winning(Condition::III)
        );
    }

    #[test]
    fn no_closes_with_two_inits() {
        let s = seq("R+(i,j), R-(i,j) => .");
        let p = find_witness(&s, FrameClass::Pnl).unwrap().close(&s);
        assert_eq!(p.rule, Rule::No);
        assert_eq!(p.count(Rule::Init), 2);
    }
}
