use super::{GameError, GameState, GameTree, Locus, Mode, Player, Role};
use crate::exec::Exec;
use crate::model::{eval_at, NetworkModel};
use crate::syntax::Formula;
use std::sync::Arc;

/// Subtrees below this depth are built on the calling thread.
const PARALLEL_DEPTH: usize = 3;

pub fn build_game_tree(m: &NetworkModel, g: &GameState, mode: Mode) -> Result<GameTree, GameError> {
    build_game_tree_with(m, g, mode, Exec::default())
}

pub fn build_game_tree_with(
    m: &NetworkModel,
    g: &GameState,
    mode: Mode,
    exec: Exec,
) -> Result<GameTree, GameError> {
    if g.formula.is_dynamic() && g.snapshot.is_none() {
        return Err(GameError::MissingSnapshot);
    }
    let b = Builder {
        base: m,
        mode,
        exec,
    };
    b.position(g)?;
    b.expand(g.clone(), 0)
}

struct Builder<'m> {
    base: &'m NetworkModel,
    mode: Mode,
    exec: Exec,
}

type Moves = Vec<(String, GameState)>;

impl Builder<'_> {
    fn model<'a>(&'a self, g: &'a GameState) -> &'a NetworkModel {
        g.snapshot.as_deref().unwrap_or(self.base)
    }

    fn position(&self, g: &GameState) -> Result<usize, GameError> {
        let m = self.model(g);
        match (&g.locus, self.mode) {
            (Locus::Agent(a), Mode::Agent) => Ok(m.index(a)?),
            (Locus::Nominal(i), Mode::Nominal) => m
                .denote(i)
                .ok_or_else(|| GameError::UnknownNominal(i.clone())),
            (locus, mode) => Err(GameError::ModeMismatch(locus.clone(), mode)),
        }
    }

    /// Targets a modality may move to: agents, or nominals in nominal mode.
    fn targets(&self, m: &NetworkModel) -> Vec<(Locus, usize)> {
        match self.mode {
            Mode::Agent => m
                .agents()
                .iter()
                .enumerate()
                .map(|(i, a)| (Locus::Agent(a.clone()), i))
                .collect(),
            Mode::Nominal => m
                .nominals()
                .map(|(n, a)| (Locus::Nominal(n.clone()), a))
                .collect(),
        }
    }

    fn expand(&self, g: GameState, depth: usize) -> Result<GameTree, GameError> {
        let at = self.position(&g)?;
        let chooser = Player::chooser(g.role);
        let (mover, moves) = if g.formula.is_elementary() {
            let truth = eval_at(self.model(&g), at, &g.formula)?;
            let winner = if truth == (g.role == Role::P) {
                Player::Me
            } else {
                Player::You
            };
            return Ok(leaf(g, chooser, winner));
        } else {
            self.moves(&g, at, chooser)?
        };
        if moves.is_empty() {
            // nobody can move: the player who had to choose loses
            return Ok(leaf(g, mover, mover.other()));
        }
        let children: Result<Vec<_>, GameError> =
            if depth < PARALLEL_DEPTH && self.exec.is_parallel() {
                self.exec
                    .map(&moves, |(d, s)| {
                        Ok((d.clone(), self.expand(s.clone(), depth + 1)?))
                    })
                    .into_iter()
                    .collect()
            } else {
                moves
                    .into_iter()
                    .map(|(d, s)| Ok((d, self.expand(s, depth + 1)?)))
                    .collect()
            };
        Ok(GameTree {
            state: g,
            mover,
            winner: None,
            terminal_winner: None,
            children: children?,
        })
    }

    fn moves(
        &self,
        g: &GameState,
        at: usize,
        chooser: Player,
    ) -> Result<(Player, Moves), GameError> {
        let m = self.model(g);
        let next = |f: &Formula| GameState {
            formula: f.clone(),
            ..g.clone()
        };
        let moved = |locus: Locus, f: &Formula| GameState {
            locus,
            formula: f.clone(),
            ..g.clone()
        };
        let updated = |model: NetworkModel, f: &Formula| GameState {
            formula: f.clone(),
            snapshot: Some(Arc::new(model)),
            ..g.clone()
        };
        Ok(match &g.formula {
            Formula::Prop(_) | Formula::Rel(..) => unreachable!("elementary states are leaves"),
            Formula::Not(a) => {
                let swapped = GameState {
                    role: g.role.swap(),
                    formula: (**a).clone(),
                    ..g.clone()
                };
                (Player::Me, vec![("switch roles".to_string(), swapped)])
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let mover = if matches!(g.formula, Formula::Or(..)) {
                    chooser
                } else {
                    chooser.other()
                };
                (
                    mover,
                    vec![
                        (format!("left: {a}"), next(a)),
                        (format!("right: {b}"), next(b)),
                    ],
                )
            }
            Formula::Diamond(s, a) => {
                let moves = match (self.mode, &g.locus) {
                    (Mode::Nominal, Locus::Nominal(i)) => self
                        .targets(m)
                        .into_iter()
                        .map(|(j, _)| {
                            let Locus::Nominal(jn) = &j else {
                                unreachable!()
                            };
                            let test = Formula::and(
                                Formula::Rel(*s, i.clone(), jn.clone()),
                                (**a).clone(),
                            );
                            (format!("choose {j}"), moved(j, &test))
                        })
                        .collect(),
                    _ => m
                        .successors(*s, at)
                        .map(|b| {
                            let locus = Locus::Agent(m.agent(b).clone());
                            (format!("move to {locus}"), moved(locus, a))
                        })
                        .collect(),
                };
                (chooser, moves)
            }
            Formula::Global(a) => {
                let moves = self
                    .targets(m)
                    .into_iter()
                    .map(|(l, _)| (format!("move to {l}"), moved(l, a)))
                    .collect();
                (chooser.other(), moves)
            }
            Formula::AddLink(kind, a) => {
                let targets = self.targets(m);
                let mut moves = Vec::new();
                for &s in kind.signs() {
                    for (x, (lx, ax)) in targets.iter().enumerate() {
                        for (ly, ay) in &targets[x..] {
                            if let Ok(next_model) = m.add_link_at(*ax, *ay, s) {
                                moves.push((
                                    format!("add R{}({lx},{ly})", s.symbol()),
                                    updated(next_model, a),
                                ));
                            }
                        }
                    }
                }
                (chooser, moves)
            }
            Formula::Flip(to, a) => {
                let moves = self
                    .targets(m)
                    .into_iter()
                    .filter_map(|(l, b)| {
                        let next_model = m.flip_link_at(at, b, *to).ok()?;
                        let desc = format!("flip {{{},{l}}} to R{}", g.locus, to.symbol());
                        Some((desc, updated(next_model, a)))
                    })
                    .collect();
                (chooser, moves)
            }
        })
    }
}

fn leaf(state: GameState, mover: Player, winner: Player) -> GameTree {
    GameTree {
        state,
        mover,
        winner: None,
        terminal_winner: Some(winner),
        children: Vec::new(),
    }
}
