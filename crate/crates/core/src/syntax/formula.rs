use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

macro_rules! symbol {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(id: impl AsRef<str>) -> Self {
                $name(Arc::from(id.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}({:?})", stringify!($name), &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name::new(s)
            }
        }

        impl serde::Serialize for $name {
            fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.0)
            }
        }
    };
}

symbol!(
    /// Name of a single agent.
    Nominal
);
symbol!(PropVar);
symbol!(Agent);

/// Reserved variable used by the `T` and `F` constants.
pub const TRUTH_VAR: &str = "__t";

/// Polarity of a relation, modality or link operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// Which links a global add-link modality may introduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum LinkKind {
    Plus,
    Minus,
    Either,
}

impl LinkKind {
    pub fn signs(self) -> &'static [Sign] {
        match self {
            LinkKind::Plus => &[Sign::Plus],
            LinkKind::Minus => &[Sign::Minus],
            LinkKind::Either => &[Sign::Plus, Sign::Minus],
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Prop(PropVar),
    Rel(Sign, Nominal, Nominal),
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    /// `Diamond(Plus, _)` is the positive diamond, `Diamond(Minus, _)` the negative one.
    Diamond(Sign, Arc<Formula>),
    Global(Arc<Formula>),
    AddLink(LinkKind, Arc<Formula>),
    /// `Flip(Plus, _)` turns a negative link into a positive one.
    Flip(Sign, Arc<Formula>),
}

impl Formula {
    pub fn prop(p: impl AsRef<str>) -> Formula {
        Formula::Prop(PropVar::new(p))
    }

    pub fn rel(sign: Sign, i: impl AsRef<str>, j: impl AsRef<str>) -> Formula {
        Formula::Rel(sign, Nominal::new(i), Nominal::new(j))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Arc::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Arc::new(a), Arc::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Arc::new(a), Arc::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    pub fn diamond(sign: Sign, f: Formula) -> Formula {
        Formula::Diamond(sign, Arc::new(f))
    }

    /// `[+]f` / `[-]f`, i.e. the dual of the diamond.
    pub fn boxed(sign: Sign, f: Formula) -> Formula {
        Formula::not(Formula::diamond(sign, Formula::not(f)))
    }

    pub fn global(f: Formula) -> Formula {
        Formula::Global(Arc::new(f))
    }

    pub fn add_link(kind: LinkKind, f: Formula) -> Formula {
        Formula::AddLink(kind, Arc::new(f))
    }

    pub fn flip(sign: Sign, f: Formula) -> Formula {
        Formula::Flip(sign, Arc::new(f))
    }

    pub fn top() -> Formula {
        let t = Formula::prop(TRUTH_VAR);
        Formula::or(t.clone(), Formula::not(t))
    }

    pub fn bottom() -> Formula {
        let t = Formula::prop(TRUTH_VAR);
        Formula::and(t.clone(), Formula::not(t))
    }

    /// Local balance for `f`: `((◆◆f ∨ ◇◇f) → ◆f) ∧ ((◆◇f ∨ ◇◆f) → ◇f)`.
    pub fn local_balance(f: Formula) -> Formula {
        let d = |s, g| Formula::diamond(s, g);
        let (p, m) = (Sign::Plus, Sign::Minus);
        let friends = Formula::implies(
            Formula::or(d(p, d(p, f.clone())), d(m, d(m, f.clone()))),
            d(p, f.clone()),
        );
        let enemies = Formula::implies(
            Formula::or(d(p, d(m, f.clone())), d(m, d(p, f.clone()))),
            d(m, f),
        );
        Formula::and(friends, enemies)
    }

    pub fn is_elementary(&self) -> bool {
        matches!(self, Formula::Prop(_) | Formula::Rel(..))
    }

    /// True when a link-changing modality occurs anywhere in the formula.
    pub fn is_dynamic(&self) -> bool {
        match self {
            Formula::Prop(_) | Formula::Rel(..) => false,
            Formula::AddLink(..) | Formula::Flip(..) => true,
            Formula::And(a, b) | Formula::Or(a, b) => a.is_dynamic() || b.is_dynamic(),
            Formula::Not(a) | Formula::Diamond(_, a) | Formula::Global(a) => a.is_dynamic(),
        }
    }

    pub fn has_relational_atoms(&self) -> bool {
        self.children().iter().any(|c| c.has_relational_atoms()) || matches!(self, Formula::Rel(..))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Prop(_) | Formula::Rel(..) => vec![],
            Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
            Formula::Not(a)
            | Formula::Diamond(_, a)
            | Formula::Global(a)
            | Formula::AddLink(_, a)
            | Formula::Flip(_, a) => vec![a],
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::Rel(..) => 0,
            Formula::And(a, b) | Formula::Or(a, b) => a.degree().max(b.degree()) + 1,
            Formula::Not(a)
            | Formula::Diamond(_, a)
            | Formula::Global(a)
            | Formula::AddLink(_, a)
            | Formula::Flip(_, a) => a.degree() + 1,
        }
    }

    /// Preorder enumeration, the formula itself first.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            out.push(f);
            stack.extend(f.children().into_iter().rev());
        }
        out
    }

    pub fn rename_nominal(&self, from: &Nominal, to: &Nominal) -> Formula {
        let swap = |n: &Nominal| if n == from { to.clone() } else { n.clone() };
        self.map_atoms(&|f| match f {
            Formula::Rel(s, i, j) => Formula::Rel(*s, swap(i), swap(j)),
            other => other.clone(),
        })
    }

    fn map_atoms(&self, g: &dyn Fn(&Formula) -> Formula) -> Formula {
        let r = |a: &Arc<Formula>| Arc::new(a.map_atoms(g));
        match self {
            Formula::Prop(_) | Formula::Rel(..) => g(self),
            Formula::Not(a) => Formula::Not(r(a)),
            Formula::And(a, b) => Formula::And(r(a), r(b)),
            Formula::Or(a, b) => Formula::Or(r(a), r(b)),
            Formula::Diamond(s, a) => Formula::Diamond(*s, r(a)),
            Formula::Global(a) => Formula::Global(r(a)),
            Formula::AddLink(k, a) => Formula::AddLink(*k, r(a)),
            Formula::Flip(s, a) => Formula::Flip(*s, r(a)),
        }
    }

    pub fn nominals(&self) -> BTreeSet<Nominal> {
        let mut out = BTreeSet::new();
        for f in self.subformulas() {
            if let Formula::Rel(_, i, j) = f {
                out.insert(i.clone());
                out.insert(j.clone());
            }
        }
        out
    }

    pub fn props(&self) -> BTreeSet<PropVar> {
        self.subformulas()
            .into_iter()
            .filter_map(|f| match f {
                Formula::Prop(p) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::render::unicode(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{}`", super::render::ascii(self))
    }
}

impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::render::ascii(self))
    }
}
