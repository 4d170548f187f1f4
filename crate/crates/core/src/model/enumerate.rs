use super::{FrameClass, NetworkModel};
use crate::syntax::{Nominal, PropVar, Sign};
use std::collections::BTreeSet;

/// Surjections from `n` items onto `0..k`, as restricted growth strings.
/// Listing blocks by first occurrence makes each partition appear once.
fn partitions(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, k: usize, used: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            if used == k {
                out.push(prefix.clone());
            }
            return;
        }
        if k - used > n - prefix.len() {
            return;
        }
        for b in 0..=used.min(k - 1) {
            prefix.push(b);
            go(prefix, n, k, used.max(b + 1), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), n, k, 0, &mut out);
    out
}

/// Every named model with at most `max_agents` agents over the given
/// nominals and variables. Agents are `a0, a1, ...`; since every agent carries
/// at least one nominal and blocks are ordered by their first nominal, no two
/// yielded models are isomorphic.
pub fn enumerate_models(
    max_agents: usize,
    props: &BTreeSet<PropVar>,
    nominals: &BTreeSet<Nominal>,
    fc: FrameClass,
) -> impl Iterator<Item = NetworkModel> {
    let props: Vec<PropVar> = props.iter().cloned().collect();
    let nominals: Vec<Nominal> = nominals.iter().cloned().collect();
    let top = max_agents.min(nominals.len());
    (1..=top).flat_map(move |k| {
        let props = props.clone();
        let nominals = nominals.clone();
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .collect();
        let choices: &'static [Option<Sign>] = match fc {
            FrameClass::Pnl => &[None, Some(Sign::Plus), Some(Sign::Minus)],
            FrameClass::CollectivelyConnected => &[Some(Sign::Plus), Some(Sign::Minus)],
        };
        let edge_configs = choices.len().pow(pairs.len() as u32);
        let valuations = 1usize << (props.len() * k);
        partitions(nominals.len(), k)
            .into_iter()
            .flat_map(move |blocks| {
                let props = props.clone();
                let nominals = nominals.clone();
                let pairs = pairs.clone();
                (0..edge_configs).flat_map(move |mut code| {
                    let names: Vec<String> = (0..k).map(|a| format!("a{a}")).collect();
                    let mut b = NetworkModel::builder(&names);
                    for &(x, y) in &pairs {
                        if let Some(sign) = choices[code % choices.len()] {
                            b = b.link(sign, &names[x], &names[y]);
                        }
                        code /= choices.len();
                    }
                    for (i, &block) in nominals.iter().zip(&blocks) {
                        b = b.nominal(i.as_str(), &names[block]);
                    }
                    let props = props.clone();
                    (0..valuations).map(move |bits| {
                        let mut bv = b.clone();
                        for (pi, p) in props.iter().enumerate() {
                            let holders = (0..k)
                                .filter(|a| bits >> (pi * k + a) & 1 == 1)
                                .map(|a| names[a].as_str());
                            bv = bv.valuation(p.as_str(), holders);
                        }
                        bv.build().expect("enumerated models are well formed")
                    })
                })
            })
    })
}
