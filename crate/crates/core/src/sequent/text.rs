use super::{LabeledFormula, Sequent, SequentError};
use crate::syntax::{parse_formula, parse_ident, Formula, Nominal};

/// Splits `src` at commas outside parentheses, keeping byte offsets.
pub(crate) fn split_top_level(src: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (k, c) in src.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push((start, &src[start..k]));
                start = k + 1;
            }
            _ => {}
        }
    }
    out.push((start, &src[start..]));
    out
}

/// `i: φ` or a bare `R+(i,j)` / `R-(i,j)`.
pub fn parse_labeled(src: &str) -> Result<LabeledFormula, SequentError> {
    parse_item(src, 0)
}

fn parse_item(src: &str, offset: usize) -> Result<LabeledFormula, SequentError> {
    let at = |o: usize| {
        move |source| SequentError::Parse {
            offset: offset + o,
            source,
        }
    };
    if let Some(colon) = src.find(':') {
        let label = parse_ident(&src[..colon]).map_err(at(0))?;
        let body = parse_formula(&src[colon + 1..]).map_err(at(colon + 1))?;
        return Ok(LabeledFormula::labeled(Nominal::new(label), body));
    }
    match parse_formula(src).map_err(at(0))? {
        Formula::Rel(s, i, j) => Ok(LabeledFormula::rel(s, i, j)),
        _ => Err(SequentError::Syntax(format!(
            "`{}` at offset {offset} needs a label, as in `i: ...`",
            src.trim()
        ))),
    }
}

fn parse_side(src: &str, offset: usize) -> Result<Vec<LabeledFormula>, SequentError> {
    let t = src.trim();
    if t == "." || t.is_empty() {
        return Ok(Vec::new());
    }
    split_top_level(src)
        .into_iter()
        .map(|(o, item)| parse_item(item, offset + o))
        .collect()
}

/// Parses `G1, G2, ... => D1, D2, ...`, with `.` for an empty side.
pub fn parse_sequent(src: &str) -> Result<Sequent, SequentError> {
    let arrow = src
        .find("=>")
        .ok_or_else(|| SequentError::Syntax("expected `=>` between the two sides".into()))?;
    let gamma = parse_side(&src[..arrow], 0)?;
    let delta = parse_side(&src[arrow + 2..], arrow + 2)?;
    Ok(Sequent { gamma, delta })
}
