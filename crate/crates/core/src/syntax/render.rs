//! Two renderers: a Unicode one for display and an ASCII one that parses back.

use super::formula::{Formula, LinkKind, Sign, TRUTH_VAR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Style {
    #[default]
    Unicode,
    Ascii,
}

pub fn render(f: &Formula, style: Style) -> String {
    match style {
        Style::Unicode => unicode(f),
        Style::Ascii => ascii(f),
    }
}

pub fn unicode(f: &Formula) -> String {
    let mut out = String::new();
    write_unicode(f, &mut out);
    out
}

pub fn ascii(f: &Formula) -> String {
    let mut out = String::new();
    write_ascii(f, &mut out);
    out
}

enum Constant {
    Top,
    Bottom,
}

fn constant(f: &Formula) -> Option<Constant> {
    let is_t = |g: &Formula| matches!(g, Formula::Prop(p) if p.as_str() == TRUTH_VAR);
    let is_not_t = |g: &Formula| matches!(g, Formula::Not(h) if is_t(h));
    match f {
        Formula::Or(a, b) if is_t(a) && is_not_t(b) => Some(Constant::Top),
        Formula::And(a, b) if is_t(a) && is_not_t(b) => Some(Constant::Bottom),
        _ => None,
    }
}

fn unicode_prec(f: &Formula) -> u8 {
    if constant(f).is_some() {
        return 0;
    }
    match f {
        Formula::Prop(_) | Formula::Rel(..) => 0,
        Formula::Not(_) => 1,
        Formula::Diamond(..) | Formula::Global(_) | Formula::AddLink(..) | Formula::Flip(..) => 2,
        Formula::And(..) | Formula::Or(..) => 3,
    }
}

fn unicode_token(f: &Formula) -> &'static str {
    match f {
        Formula::Not(_) => "¬ ",
        Formula::Diamond(Sign::Plus, _) => "◆ ",
        Formula::Diamond(Sign::Minus, _) => "◇ ",
        Formula::Global(_) => "[A]",
        Formula::AddLink(LinkKind::Plus, _) => "⟨⊞+⟩",
        Formula::AddLink(LinkKind::Minus, _) => "⟨⊞-⟩",
        Formula::AddLink(LinkKind::Either, _) => "⟨⊞±⟩",
        Formula::Flip(Sign::Plus, _) => "(+)",
        Formula::Flip(Sign::Minus, _) => "(-)",
        _ => unreachable!("not a unary connective"),
    }
}

fn write_atom(f: &Formula, out: &mut String) {
    match f {
        Formula::Prop(p) => out.push_str(p.as_str()),
        Formula::Rel(s, i, j) => {
            out.push('R');
            out.push(s.symbol());
            out.push('(');
            out.push_str(i.as_str());
            out.push(',');
            out.push_str(j.as_str());
            out.push(')');
        }
        _ => unreachable!(),
    }
}

fn write_unicode(f: &Formula, out: &mut String) {
    let wrapped = |g: &Formula, paren: bool, out: &mut String| {
        if paren {
            out.push('(');
            write_unicode(g, out);
            out.push(')');
        } else {
            write_unicode(g, out);
        }
    };
    match constant(f) {
        Some(Constant::Top) => return out.push('⊤'),
        Some(Constant::Bottom) => return out.push('⊥'),
        None => {}
    }
    match f {
        Formula::Prop(_) | Formula::Rel(..) => write_atom(f, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let op = if matches!(f, Formula::And(..)) {
                " ∧ "
            } else {
                " ∨ "
            };
            wrapped(a, unicode_prec(a) >= 3, out);
            out.push_str(op);
            wrapped(b, unicode_prec(b) > 3, out);
        }
        Formula::Not(a)
        | Formula::Diamond(_, a)
        | Formula::Global(a)
        | Formula::AddLink(_, a)
        | Formula::Flip(_, a) => {
            out.push_str(unicode_token(f));
            wrapped(a, unicode_prec(a) > unicode_prec(f), out);
        }
    }
}

fn ascii_prec(f: &Formula) -> u8 {
    if constant(f).is_some() {
        return 0;
    }
    match f {
        Formula::Prop(_) | Formula::Rel(..) => 0,
        Formula::And(..) => 2,
        Formula::Or(..) => 3,
        _ => 1,
    }
}

fn ascii_token(f: &Formula) -> &'static str {
    match f {
        Formula::Not(_) => "~ ",
        Formula::Diamond(Sign::Plus, _) => "<+> ",
        Formula::Diamond(Sign::Minus, _) => "<-> ",
        Formula::Global(_) => "[A] ",
        Formula::AddLink(LinkKind::Plus, _) => "(++) ",
        Formula::AddLink(LinkKind::Minus, _) => "(--) ",
        Formula::AddLink(LinkKind::Either, _) => "(+-) ",
        Formula::Flip(Sign::Plus, _) => "(+) ",
        Formula::Flip(Sign::Minus, _) => "(-) ",
        _ => unreachable!("not a unary connective"),
    }
}

fn write_ascii(f: &Formula, out: &mut String) {
    let wrapped = |g: &Formula, paren: bool, out: &mut String| {
        if paren {
            out.push('(');
            write_ascii(g, out);
            out.push(')');
        } else {
            write_ascii(g, out);
        }
    };
    match constant(f) {
        Some(Constant::Top) => return out.push('T'),
        Some(Constant::Bottom) => return out.push('F'),
        None => {}
    }
    match f {
        Formula::Prop(_) | Formula::Rel(..) => write_atom(f, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let (p, op) = if matches!(f, Formula::And(..)) {
                (2, " & ")
            } else {
                (3, " | ")
            };
            wrapped(a, ascii_prec(a) > p, out);
            out.push_str(op);
            wrapped(b, ascii_prec(b) >= p, out);
        }
        _ => {
            let a = f.children()[0];
            out.push_str(ascii_token(f));
            wrapped(a, ascii_prec(a) > 1, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::prop("p")
    }

    #[test]
    fn unicode_local_balance() {
        assert_eq!(
            unicode(&Formula::local_balance(p())),
            "(¬ (◆ ◆ p ∨ ◇ ◇ p) ∨ ◆ p) ∧ ¬ (◆ ◇ p ∨ ◇ ◆ p) ∨ ◇ p"
        );
    }

    #[test]
    fn unicode_flip_parenthesises_binary_only() {
        let f = Formula::flip(
            Sign::Minus,
            Formula::flip(Sign::Minus, Formula::local_balance(p())),
        );
        assert!(unicode(&f).starts_with("(-)(-)((¬ (◆"));
        assert_eq!(
            unicode(&Formula::not(f.clone()))
                .chars()
                .take(5)
                .collect::<String>(),
            "¬ ((-"
        );
    }

    #[test]
    fn constants() {
        assert_eq!(unicode(&Formula::top()), "⊤");
        assert_eq!(ascii(&Formula::bottom()), "F");
        assert_eq!(
            unicode(&Formula::boxed(Sign::Minus, Formula::bottom())),
            "¬ (◇ ¬ ⊥)"
        );
    }

    #[test]
    fn ascii_respects_grammar_precedence() {
        let q = Formula::prop("q");
        let r = Formula::prop("r");
        assert_eq!(
            ascii(&Formula::and(Formula::or(p(), q.clone()), r.clone())),
            "(p | q) & r"
        );
        assert_eq!(
            ascii(&Formula::or(Formula::and(p(), q.clone()), r.clone())),
            "p & q | r"
        );
        assert_eq!(
            ascii(&Formula::or(p(), Formula::or(q.clone(), r.clone()))),
            "p | (q | r)"
        );
        assert_eq!(ascii(&Formula::not(Formula::and(p(), q))), "~ (p & q)");
        assert_eq!(ascii(&Formula::rel(Sign::Minus, "i", "j")), "R-(i,j)");
    }
}
