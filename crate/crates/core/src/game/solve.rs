use super::{GameTree, Player};
use crate::exec::Exec;
use thiserror::Error;

const PARALLEL_DEPTH: usize = 3;

/// A solved game: every node annotated, plus the winner's strategy.
#[derive(Clone, Debug)]
pub struct Solved {
    pub tree: GameTree,
    pub strategy: Strategy,
}

impl Solved {
    pub fn winner(&self) -> Player {
        self.strategy.owner
    }
}

/// A subtree keeping one child where the owner moves and all children elsewhere.
#[derive(Clone, Debug)]
pub struct Strategy {
    pub owner: Player,
    pub tree: GameTree,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("strategy node {path:?}: {reason}")]
pub struct StrategyError {
    pub path: Vec<usize>,
    pub reason: String,
}

pub fn solve(t: GameTree) -> Solved {
    solve_with(t, Exec::default())
}

pub fn solve_with(mut t: GameTree, exec: Exec) -> Solved {
    let winner = annotate(&mut t, exec, 0);
    let strategy = Strategy::extract(&t, winner);
    Solved { tree: t, strategy }
}

fn annotate(t: &mut GameTree, exec: Exec, depth: usize) -> Player {
    let winner = if t.is_leaf() {
        t.terminal_winner.expect("leaves carry a terminal winner")
    } else {
        if depth < PARALLEL_DEPTH {
            exec.for_each_mut(&mut t.children, |(_, c)| {
                annotate(c, exec, depth + 1);
            });
        } else {
            for (_, c) in &mut t.children {
                annotate(c, Exec::Sequential, depth + 1);
            }
        }
        if t.children.iter().any(|(_, c)| c.winner == Some(t.mover)) {
            t.mover
        } else {
            t.mover.other()
        }
    };
    t.winner = Some(winner);
    winner
}

impl Strategy {
    /// Prunes a solved tree to `owner`'s strategy, taking the first winning
    /// child at the owner's nodes.
    pub fn extract(t: &GameTree, owner: Player) -> Strategy {
        Strategy {
            owner,
            tree: prune(t, owner),
        }
    }

    pub fn is_winning(&self) -> bool {
        fn leaves_won(t: &GameTree, owner: Player) -> bool {
            if t.is_leaf() {
                t.terminal_winner == Some(owner)
            } else {
                t.children.iter().all(|(_, c)| leaves_won(c, owner))
            }
        }
        leaves_won(&self.tree, self.owner)
    }

    /// Checks that this is a well-formed strategy inside `full`.
    pub fn check(&self, full: &GameTree) -> Result<(), StrategyError> {
        check_node(&self.tree, full, self.owner, &mut Vec::new())
    }
}

fn prune(t: &GameTree, owner: Player) -> GameTree {
    let children = if t.mover == owner {
        let pick = t
            .children
            .iter()
            .find(|(_, c)| c.winner == Some(owner))
            .or(t.children.first());
        pick.map(|(d, c)| vec![(d.clone(), prune(c, owner))])
            .unwrap_or_default()
    } else {
        t.children
            .iter()
            .map(|(d, c)| (d.clone(), prune(c, owner)))
            .collect()
    };
    GameTree {
        children,
        ..shallow(t)
    }
}

fn shallow(t: &GameTree) -> GameTree {
    GameTree {
        state: t.state.clone(),
        mover: t.mover,
        winner: t.winner,
        terminal_winner: t.terminal_winner,
        children: Vec::new(),
    }
}

fn check_node(
    s: &GameTree,
    full: &GameTree,
    owner: Player,
    path: &mut Vec<usize>,
) -> Result<(), StrategyError> {
    let fail = |path: &Vec<usize>, reason: &str| {
        Err(StrategyError {
            path: path.clone(),
            reason: reason.to_string(),
        })
    };
    if s.state != full.state || s.mover != full.mover {
        return fail(path, "state differs from the game tree");
    }
    let expected = if full.is_leaf() {
        0
    } else if full.mover == owner {
        1
    } else {
        full.children.len()
    };
    if s.children.len() != expected {
        return fail(
            path,
            &format!("has {} children, expected {expected}", s.children.len()),
        );
    }
    for (k, (d, c)) in s.children.iter().enumerate() {
        let Some((_, fc)) = full
            .children
            .iter()
            .find(|(fd, fc)| fd == d && fc.state == c.state)
        else {
            path.push(k);
            return fail(path, "move is not legal here");
        };
        path.push(k);
        check_node(c, fc, owner, path)?;
        path.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{build_game_tree, GameState, Mode, Role};
    use crate::model::fixtures::{m1, m2};
    use crate::syntax::parse_formula;

    fn solved(m: &crate::model::NetworkModel, src: &str) -> Solved {
        let f = parse_formula(src).unwrap();
        let g = if f.is_dynamic() {
            GameState::at_agent(Role::P, "a", f).with_snapshot(m.clone())
        } else {
            GameState::at_agent(Role::P, "a", f)
        };
        solve(build_game_tree(m, &g, Mode::Agent).unwrap())
    }

    #[test]
    fn local_balance_winners() {
        let s = solved(&m1(), "lb(p)");
        assert_eq!(s.winner(), Player::Me);
        // first conjunct: I pick the right disjunct and then agent b
        let first = &s.strategy.tree.children[0].1;
        assert_eq!(first.children.len(), 1);
        assert_eq!(first.children[0].0, "right: ◆ p");
        assert_eq!(first.children[0].1.children[0].0, "move to b");
        assert_eq!(solved(&m2(), "lb(p)").winner(), Player::You);
    }

    #[test]
    fn dynamic_winners() {
        let s = solved(&m2(), "(-) lb(p)");
        assert_eq!(s.winner(), Player::Me);
        assert_eq!(s.strategy.tree.children[0].0, "flip {a,b} to R-");
        assert_eq!(solved(&m2(), "~ ((-) (-) lb(p))").winner(), Player::Me);
    }

    #[test]
    fn strategies_are_valid_and_winning() {
        for (m, src) in [
            (m1(), "lb(p)"),
            (m2(), "lb(p)"),
            (m2(), "~ lb(p)"),
            (m2(), "<+> (+) [A] [-] F"),
        ] {
            let s = solved(&m, src);
            s.strategy.check(&s.tree).unwrap();
            assert!(s.strategy.is_winning());
            let loser = Strategy::extract(&s.tree, s.winner().other());
            loser.check(&s.tree).unwrap();
            assert!(!loser.is_winning());
        }
    }

    #[test]
    fn tampered_strategy_rejected() {
        let s = solved(&m1(), "lb(p)");
        let mut bad = s.strategy.clone();
        bad.tree.children.pop();
        assert!(bad.check(&s.tree).is_err());
    }

    #[test]
    fn every_node_has_one_winner() {
        fn all(t: &GameTree) -> bool {
            t.winner.is_some() && t.children.iter().all(|(_, c)| all(c))
        }
        assert!(all(&solved(&m2(), "~ ((-) (-) lb(p))").tree));
    }
}
