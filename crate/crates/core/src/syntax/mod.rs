//! The formula language: names, propositional variables, formulas,
//! signatures, the concrete grammar and a size-ordered enumerator.
//!
//! Concrete syntax:
//!
//! ```text
//! formula := implies
//! implies := or ("->" implies)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | ("R" | "D" | "@") "[" name "]" unary | atom
//! atom    := "true" | "false" | prop | "(" formula ")"
//! ```
//!
//! `R`, `D`, `true` and `false` are reserved and cannot be used as
//! identifiers.

mod enumerate;
mod parser;
mod print;
mod signature;

use std::fmt;
use std::sync::Arc;

pub use enumerate::{enumerate_formulas, FormulaEnumerator};
pub use parser::{parse_formula, SyntaxError};
pub use print::print_formula;
pub use signature::{Connective, Signature, SignatureError};

/// Words that may not be used as a name or a propositional variable.
pub const RESERVED: [&str; 4] = ["true", "false", "R", "D"];

/// The name constant that always denotes the evaluating agent in
/// agent-specific models.
pub const SELF_NAME: &str = "se";

fn check_identifier(text: &str) -> Result<(), SyntaxError> {
    let mut chars = text.chars();
    match chars.next() {
        None => return Err(SyntaxError::EmptyIdentifier { offset: 0 }),
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        Some(c) => return Err(SyntaxError::InvalidChar { offset: 0, ch: c }),
    }
    if let Some((i, c)) = text
        .char_indices()
        .skip(1)
        .find(|(_, c)| !(c.is_ascii_alphanumeric() || *c == '_'))
    {
        return Err(SyntaxError::InvalidChar { offset: i, ch: c });
    }
    if RESERVED.contains(&text) {
        return Err(SyntaxError::Reserved {
            offset: 0,
            word: text.to_string(),
        });
    }
    Ok(())
}

macro_rules! symbol_type {
    ($(#[$meta:meta])* $ty:ident) => {
        $(#[$meta])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $ty(Arc<str>);

        impl $ty {
            pub fn new(text: &str) -> Result<Self, SyntaxError> {
                check_identifier(text)?;
                Ok($ty(Arc::from(text)))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl TryFrom<&str> for $ty {
            type Error = SyntaxError;

            fn try_from(text: &str) -> Result<Self, SyntaxError> {
                $ty::new(text)
            }
        }
    };
}

symbol_type!(
    /// A (possibly nonrigid) name of an agent.
    Name
);
symbol_type!(
    /// A propositional variable.
    Prop
);

impl Name {
    pub fn is_self(&self) -> bool {
        self.as_str() == SELF_NAME
    }
}

/// A formula of the language.
///
/// `And` and `Implies` are kept as surface forms so that printing
/// preserves what was written; they abbreviate `!(!a | !b)` and `!a | b`
/// respectively, and [`Formula::size`] counts their expansion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Prop(Prop),
    Not(Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `@[n] φ`: φ holds of the current referent of `n`.
    At(Name, Box<Formula>),
    /// `R[n] φ`: de re knowledge about the agent currently named `n`.
    DeRe(Name, Box<Formula>),
    /// `D[n] φ`: de dicto knowledge about whoever bears the name `n`.
    DeDicto(Name, Box<Formula>),
}

impl Formula {
    pub fn prop(p: Prop) -> Self {
        Formula::Prop(p)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn at(n: Name, f: Formula) -> Self {
        Formula::At(n, Box::new(f))
    }

    pub fn de_re(n: Name, f: Formula) -> Self {
        Formula::DeRe(n, Box::new(f))
    }

    pub fn de_dicto(n: Name, f: Formula) -> Self {
        Formula::DeDicto(n, Box::new(f))
    }

    /// Applies a unary connective, or builds a disjunction when `conn` is
    /// [`Connective::Or`] and `second` is given.
    pub fn apply(conn: &Connective, first: Formula, second: Option<Formula>) -> Self {
        match conn {
            Connective::Not => Formula::not(first),
            Connective::Or => Formula::or(first, second.expect("disjunction needs two operands")),
            Connective::At(n) => Formula::at(n.clone(), first),
            Connective::DeRe(n) => Formula::de_re(n.clone(), first),
            Connective::DeDicto(n) => Formula::de_dicto(n.clone(), first),
        }
    }

    /// Number of AST nodes once `And` and `Implies` are expanded.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => 1,
            Formula::Not(f) | Formula::At(_, f) | Formula::DeRe(_, f) | Formula::DeDicto(_, f) => {
                1 + f.size()
            }
            Formula::Or(a, b) => 1 + a.size() + b.size(),
            Formula::And(a, b) => 4 + a.size() + b.size(),
            Formula::Implies(a, b) => 2 + a.size() + b.size(),
        }
    }

    /// Rewrites `And` and `Implies` into negation and disjunction.
    pub fn expand(&self) -> Formula {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => self.clone(),
            Formula::Not(f) => Formula::not(f.expand()),
            Formula::Or(a, b) => Formula::or(a.expand(), b.expand()),
            Formula::And(a, b) => Formula::not(Formula::or(
                Formula::not(a.expand()),
                Formula::not(b.expand()),
            )),
            Formula::Implies(a, b) => Formula::or(Formula::not(a.expand()), b.expand()),
            Formula::At(n, f) => Formula::at(n.clone(), f.expand()),
            Formula::DeRe(n, f) => Formula::de_re(n.clone(), f.expand()),
            Formula::DeDicto(n, f) => Formula::de_dicto(n.clone(), f.expand()),
        }
    }

    /// Visits every subformula, children before parents.
    pub fn visit_post_order<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        match self {
            Formula::True | Formula::False | Formula::Prop(_) => {}
            Formula::Not(f) | Formula::At(_, f) | Formula::DeRe(_, f) | Formula::DeDicto(_, f) => {
                f.visit_post_order(visit)
            }
            Formula::Or(a, b) | Formula::And(a, b) | Formula::Implies(a, b) => {
                a.visit_post_order(visit);
                b.visit_post_order(visit);
            }
        }
        visit(self);
    }

    pub fn names(&self) -> Vec<&Name> {
        let mut out = Vec::new();
        self.visit_post_order(&mut |f| {
            if let Formula::At(n, _) | Formula::DeRe(n, _) | Formula::DeDicto(n, _) = f {
                if !out.contains(&n) {
                    out.push(n);
                }
            }
        });
        out
    }

    pub fn props(&self) -> Vec<&Prop> {
        let mut out = Vec::new();
        self.visit_post_order(&mut |f| {
            if let Formula::Prop(p) = f {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        });
        out
    }

    /// True if every connective, constant and variable of the expanded
    /// formula is permitted by `sig`.
    pub fn within(&self, sig: &Signature) -> bool {
        match self {
            Formula::True => sig.allow_true,
            Formula::False => sig.allow_false,
            Formula::Prop(p) => sig.props.contains(p),
            Formula::Not(f) => sig.allow_not && f.within(sig),
            Formula::Or(a, b) => sig.allow_or && a.within(sig) && b.within(sig),
            Formula::And(a, b) | Formula::Implies(a, b) => {
                sig.allow_not && sig.allow_or && a.within(sig) && b.within(sig)
            }
            Formula::At(n, f) => sig.at_names.contains(n) && f.within(sig),
            Formula::DeRe(n, f) => sig.dere_names.contains(n) && f.within(sig),
            Formula::DeDicto(n, f) => sig.dedicto_names.contains(n) && f.within(sig),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn identifiers_reject_reserved_words() {
        assert!(Name::new("Ann").is_ok());
        assert!(Name::new("_x9").is_ok());
        assert!(matches!(Name::new(""), Err(SyntaxError::EmptyIdentifier { .. })));
        assert!(matches!(Prop::new("true"), Err(SyntaxError::Reserved { .. })));
        assert!(matches!(Name::new("D"), Err(SyntaxError::Reserved { .. })));
        assert!(matches!(Prop::new("9p"), Err(SyntaxError::InvalidChar { .. })));
        assert!(matches!(Prop::new("p-q"), Err(SyntaxError::InvalidChar { offset: 1, .. })));
    }

    #[test]
    fn size_counts_expanded_nodes() {
        assert_eq!(f("p").size(), 1);
        assert_eq!(f("!p").size(), 2);
        assert_eq!(f("p & q").size(), f("!(!p | !q)").size());
        assert_eq!(f("p -> q").size(), f("!p | q").size());
        assert_eq!(f("R[Ann] @[Ann] p").size(), 3);
    }

    #[test]
    fn expand_removes_derived_forms() {
        assert_eq!(f("p & q").expand(), f("!(!p | !q)"));
        assert_eq!(f("D[a] (p -> q)").expand(), f("D[a] (!p | q)"));
    }

    #[test]
    fn names_and_props_are_collected_once() {
        let g = f("R[Mya] @[Zoe] (logician | @[Mya] logician)");
        let names: Vec<_> = g.names().iter().map(|n| n.as_str()).collect();
        assert_eq!(names, ["Mya", "Zoe"]);
        assert_eq!(g.props().len(), 1);
    }

    #[test]
    fn within_respects_signature() {
        let sig: Signature = "p;not,or;R[Ann]".parse().unwrap();
        assert!(f("!R[Ann] p | p").within(&sig));
        assert!(f("p & p").within(&sig));
        assert!(!f("D[Ann] p").within(&sig));
        assert!(!f("R[Bob] p").within(&sig));
        assert!(!f("true").within(&sig));
    }
}
