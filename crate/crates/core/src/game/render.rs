use super::{GameTree, Player};
use crate::syntax::render::render;
use crate::syntax::Style;
use serde::ser::SerializeSeq;

struct Glyphs {
    won: &'static str,
    lost: &'static str,
    branch: &'static str,
    last: &'static str,
    pipe: &'static str,
    blank: &'static str,
}

const UNICODE: Glyphs = Glyphs {
    won: "✔",
    lost: "❌",
    branch: "├── ",
    last: "└── ",
    pipe: "│   ",
    blank: "    ",
};
const ASCII: Glyphs = Glyphs {
    won: "v",
    lost: "x",
    branch: "|-- ",
    last: "`-- ",
    pipe: "|   ",
    blank: "    ",
};

/// One line per node, `[✔,I] : P @ a : φ`, where the mark says whether the
/// node is won by Me. Children whose subgame You win are listed first.
pub fn render_tree(t: &GameTree, style: Style) -> String {
    let glyphs = match style {
        Style::Unicode => &UNICODE,
        Style::Ascii => &ASCII,
    };
    let mut out = String::new();
    write_node(t, style, glyphs, "", "", &mut out);
    out
}

fn line(t: &GameTree, style: Style, g: &Glyphs) -> String {
    let mark = match t.winner.or(t.terminal_winner) {
        Some(Player::Me) => g.won,
        Some(Player::You) => g.lost,
        None => "?",
    };
    let s = &t.state;
    format!(
        "[{mark},{}] : {} @ {} : {}",
        t.mover,
        s.role,
        s.locus,
        render(&s.formula, style)
    )
}

fn write_node(t: &GameTree, style: Style, g: &Glyphs, lead: &str, rest: &str, out: &mut String) {
    out.push_str(lead);
    out.push_str(&line(t, style, g));
    out.push('\n');
    let mut kids: Vec<&GameTree> = t.children.iter().map(|(_, c)| c).collect();
    kids.sort_by_key(|c| c.winner != Some(Player::You));
    for (k, c) in kids.iter().enumerate() {
        let last = k + 1 == kids.len();
        let (branch, cont) = if last {
            (g.last, g.blank)
        } else {
            (g.branch, g.pipe)
        };
        write_node(
            c,
            style,
            g,
            &format!("{rest}{branch}"),
            &format!("{rest}{cont}"),
            out,
        );
    }
}

pub(super) fn serialize_children<S: serde::Serializer>(
    children: &[(String, GameTree)],
    s: S,
) -> Result<S::Ok, S::Error> {
    #[derive(serde::Serialize)]
    struct Child<'a> {
        #[serde(rename = "move")]
        description: &'a str,
        #[serde(flatten)]
        node: &'a GameTree,
    }
    let mut seq = s.serialize_seq(Some(children.len()))?;
    for (d, c) in children {
        seq.serialize_element(&Child {
            description: d,
            node: c,
        })?;
    }
    seq.end()
}
