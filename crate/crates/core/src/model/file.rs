//! Line-oriented model files.
//!
//! ```text
//! agents: a b c
//! nominals: i=a j=b
//! R+: a b, a c
//! R-: b c
//! V(p): b
//! ```

use super::{ModelError, NetworkModel};
use crate::syntax::{parse_ident, Sign};
use std::fmt::Write;

fn syntax(line: usize, message: impl Into<String>) -> ModelError {
    ModelError::Syntax {
        line,
        message: message.into(),
    }
}

fn ident(line: usize, s: &str) -> Result<String, ModelError> {
    parse_ident(s).map_err(|e| syntax(line, format!("bad identifier `{}`: {e}", s.trim())))
}

fn idents(line: usize, s: &str) -> Result<Vec<String>, ModelError> {
    s.split_whitespace().map(|w| ident(line, w)).collect()
}

pub fn load_model(text: &str) -> Result<NetworkModel, ModelError> {
    let mut b = NetworkModel::builder(Vec::<String>::new());

    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once(':')
            .ok_or_else(|| syntax(line, "expected `key: value`"))?;
        let key = key.trim();
        match key {
            "agents" => {
                for a in idents(line, value)? {
                    b = b.agent(a);
                }
            }
            "nominals" => {
                for binding in value.split_whitespace() {
                    let (i, a) = binding.split_once('=').ok_or_else(|| {
                        syntax(line, format!("expected `nominal=agent`, found `{binding}`"))
                    })?;
                    b = b.nominal(ident(line, i)?, ident(line, a)?);
                }
            }
            "R+" | "R-" => {
                let sign = if key == "R+" { Sign::Plus } else { Sign::Minus };
                for pair in value.split(',').filter(|p| !p.trim().is_empty()) {
                    let ends = idents(line, pair)?;
                    let [x, y] = <[String; 2]>::try_from(ends).map_err(|_| {
                        syntax(line, format!("expected two agents in `{}`", pair.trim()))
                    })?;
                    b = b.link(sign, x, y);
                }
            }
            _ if key.starts_with("V(") && key.ends_with(')') => {
                let p = ident(line, &key[2..key.len() - 1])?;
                let holders = idents(line, value)?;
                b = b.valuation(p, holders);
            }
            _ => return Err(syntax(line, format!("unknown key `{key}`"))),
        }
    }
    b.build()
}

pub(super) fn write_model(m: &NetworkModel) -> String {
    let name = |a: usize| m.agent(a).as_str();
    let mut out = String::new();
    let agents: Vec<&str> = (0..m.len()).map(name).collect();
    let _ = writeln!(out, "agents: {}", agents.join(" "));
    let named: Vec<String> = m
        .nominals()
        .filter(|(_, a)| !m.is_anonymous(*a))
        .map(|(i, a)| format!("{i}={}", name(a)))
        .collect();
    if !named.is_empty() {
        let _ = writeln!(out, "nominals: {}", named.join(" "));
    }
    for (label, sign) in [("R+", Sign::Plus), ("R-", Sign::Minus)] {
        let pairs: Vec<String> = m
            .edges(sign)
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| format!("{} {}", name(a), name(b)))
            .collect();
        let _ = writeln!(out, "{label}: {}", pairs.join(", "));
    }
    for p in m.props() {
        let holders: Vec<&str> = (0..m.len()).filter(|&a| m.holds(p, a)).map(name).collect();
        let _ = writeln!(out, "V({p}): {}", holders.join(" "));
    }
    out
}
