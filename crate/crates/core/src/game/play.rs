use super::{build_game_tree, solve, GameError, GameState, GameTree, Mode, Player};
use crate::model::NetworkModel;
use crate::syntax::Style;
use std::io::{BufRead, Write};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlayError {
    #[error("input closed before the game ended")]
    InputClosed,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Game(#[from] GameError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlayOutcome {
    /// Visited positions and the moves taken, one entry per line.
    pub transcript: Vec<String>,
    pub winner: Player,
}

/// Plays the game with a human controlling the nodes whose mover is `human`.
/// The machine follows its solved strategy: a winning move when it has one,
/// otherwise the first legal move. Positions with a single legal move are
/// taken without asking.
pub fn play_interactive<R: BufRead, W: Write>(
    m: &NetworkModel,
    g: &GameState,
    mode: Mode,
    human: Player,
    mut input: R,
    mut output: W,
) -> Result<PlayOutcome, PlayError> {
    let solved = solve(build_game_tree(m, g, mode)?);
    let mut node: &GameTree = &solved.tree;
    let mut transcript = Vec::new();
    loop {
        let s = &node.state;
        let here = format!(
            "{} @ {} : {}",
            s.role,
            s.locus,
            crate::syntax::render::render(&s.formula, Style::Unicode)
        );
        writeln!(output, "{here}")?;
        transcript.push(here);
        if node.is_leaf() {
            let winner = node.terminal_winner.expect("leaf");
            let verdict = format!("winner: {winner}");
            writeln!(output, "{verdict}")?;
            transcript.push(verdict);
            return Ok(PlayOutcome { transcript, winner });
        }
        let n = node.children.len();
        let pick = if n == 1 {
            0
        } else if node.mover == human {
            for (k, (d, _)) in node.children.iter().enumerate() {
                writeln!(output, "move {} of {n}: {d}", k + 1)?;
            }
            read_choice(&mut input, &mut output, n)?
        } else {
            node.children
                .iter()
                .position(|(_, c)| c.winner == Some(node.mover))
                .unwrap_or(0)
        };
        let (desc, child) = &node.children[pick];
        let step = format!("{} chose {}: {desc}", node.mover, pick + 1);
        writeln!(output, "{step}")?;
        transcript.push(step);
        node = child;
    }
}

fn read_choice<R: BufRead, W: Write>(
    input: &mut R,
    output: &mut W,
    n: usize,
) -> Result<usize, PlayError> {
    loop {
        write!(output, "select 1-{n}: ")?;
        output.flush()?;
        let mut line = String::new();
        if input.read_line(&mut line)? == 0 {
            return Err(PlayError::InputClosed);
        }
        match line.trim().parse::<usize>() {
            Ok(k) if (1..=n).contains(&k) => return Ok(k - 1),
            _ => writeln!(output, "invalid selection `{}`", line.trim())?,
        }
    }
}
