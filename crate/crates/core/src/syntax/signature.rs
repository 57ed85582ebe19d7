use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use super::{Name, Prop, SyntaxError};

/// A single connective instance; modalities are instantiated per name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Not,
    Or,
    At(Name),
    DeRe(Name),
    DeDicto(Name),
}

impl Connective {
    pub fn arity(&self) -> usize {
        match self {
            Connective::Or => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Connective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Connective::Not => f.write_str("not"),
            Connective::Or => f.write_str("or"),
            Connective::At(n) => write!(f, "@[{n}]"),
            Connective::DeRe(n) => write!(f, "R[{n}]"),
            Connective::DeDicto(n) => write!(f, "D[{n}]"),
        }
    }
}

/// The seeds and connectives allowed when closing or enumerating.
///
/// The textual form is `props;booleans;modalities`, each a comma list:
/// `p,q,true;not,or;R[Ann],@[Ann]`. `true` and `false` in the first
/// section enable the constants as seeds. Trailing sections may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub props: BTreeSet<Prop>,
    pub allow_true: bool,
    pub allow_false: bool,
    pub allow_not: bool,
    pub allow_or: bool,
    pub at_names: BTreeSet<Name>,
    pub dere_names: BTreeSet<Name>,
    pub dedicto_names: BTreeSet<Name>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("signature has more than three `;`-separated sections")]
    TooManySections,
    #[error("unknown boolean connective `{0}` (expected `not` or `or`)")]
    UnknownBoolean(String),
    #[error("malformed modality `{0}` (expected R[name], D[name] or @[name])")]
    BadModality(String),
    #[error("bad identifier `{text}`: {source}")]
    Identifier { text: String, source: SyntaxError },
}

impl Signature {
    pub fn is_empty(&self) -> bool {
        self.props.is_empty() && !self.allow_true && !self.allow_false
    }

    /// Unary connectives in a fixed order: negation, then `@`, `R`, `D`
    /// instances by name.
    pub fn unary_connectives(&self) -> Vec<Connective> {
        let mut out = Vec::new();
        if self.allow_not {
            out.push(Connective::Not);
        }
        out.extend(self.at_names.iter().cloned().map(Connective::At));
        out.extend(self.dere_names.iter().cloned().map(Connective::DeRe));
        out.extend(self.dedicto_names.iter().cloned().map(Connective::DeDicto));
        out
    }

    pub fn names(&self) -> BTreeSet<&Name> {
        self.at_names
            .iter()
            .chain(&self.dere_names)
            .chain(&self.dedicto_names)
            .collect()
    }
}

fn ident<T>(text: &str, make: fn(&str) -> Result<T, SyntaxError>) -> Result<T, SignatureError> {
    make(text).map_err(|source| SignatureError::Identifier {
        text: text.to_string(),
        source,
    })
}

impl FromStr for Signature {
    type Err = SignatureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let sections: Vec<&str> = s.split(';').collect();
        if sections.len() > 3 {
            return Err(SignatureError::TooManySections);
        }
        let items = |i: usize| -> Vec<&str> {
            sections
                .get(i)
                .map(|sec| sec.split(',').map(str::trim).filter(|t| !t.is_empty()).collect())
                .unwrap_or_default()
        };
        let mut sig = Signature::default();
        for tok in items(0) {
            match tok {
                "true" => sig.allow_true = true,
                "false" => sig.allow_false = true,
                _ => {
                    sig.props.insert(ident(tok, Prop::new)?);
                }
            }
        }
        for tok in items(1) {
            match tok {
                "not" | "!" => sig.allow_not = true,
                "or" | "|" => sig.allow_or = true,
                _ => return Err(SignatureError::UnknownBoolean(tok.to_string())),
            }
        }
        for tok in items(2) {
            let bad = || SignatureError::BadModality(tok.to_string());
            let (op, rest) = tok.split_at(tok.char_indices().nth(1).map_or(tok.len(), |(i, _)| i));
            let inner = rest
                .trim_start()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(bad)?
                .trim();
            let name = ident(inner, Name::new)?;
            match op {
                "R" => sig.dere_names.insert(name),
                "D" => sig.dedicto_names.insert(name),
                "@" => sig.at_names.insert(name),
                _ => return Err(bad()),
            };
        }
        Ok(sig)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seeds: Vec<String> = self.props.iter().map(|p| p.to_string()).collect();
        if self.allow_true {
            seeds.push("true".into());
        }
        if self.allow_false {
            seeds.push("false".into());
        }
        let mut bools = Vec::new();
        if self.allow_not {
            bools.push("not");
        }
        if self.allow_or {
            bools.push("or");
        }
        let mods: Vec<String> = self
            .unary_connectives()
            .iter()
            .filter(|c| **c != Connective::Not)
            .map(|c| c.to_string())
            .collect();
        write!(f, "{};{};{}", seeds.join(","), bools.join(","), mods.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_mini_syntax() {
        let sig: Signature = "p;not,or;R[Ann],@[Ann]".parse().unwrap();
        assert_eq!(sig.props.len(), 1);
        assert!(sig.allow_not && sig.allow_or);
        assert!(sig.dere_names.contains(&Name::new("Ann").unwrap()));
        assert!(sig.at_names.contains(&Name::new("Ann").unwrap()));
        assert!(sig.dedicto_names.is_empty());
        assert_eq!(sig.to_string(), "p;not,or;@[Ann],R[Ann]");
        assert_eq!(sig.to_string().parse::<Signature>().unwrap(), sig);
    }

    #[test]
    fn omitted_sections_are_empty() {
        let sig: Signature = "p,true".parse().unwrap();
        assert!(sig.allow_true && !sig.allow_false && !sig.allow_not);
        assert!(sig.unary_connectives().is_empty());
        assert!(Signature::default().is_empty());
    }

    #[test]
    fn rejects_malformed_parts() {
        assert!(matches!("p;and".parse::<Signature>(), Err(SignatureError::UnknownBoolean(_))));
        assert!(matches!("p;;K[a]".parse::<Signature>(), Err(SignatureError::BadModality(_))));
        assert!(matches!("p;;R[]".parse::<Signature>(), Err(SignatureError::Identifier { .. })));
        assert!(matches!("p;;R(a)".parse::<Signature>(), Err(SignatureError::BadModality(_))));
        assert!(matches!("a;b;c;d".parse::<Signature>(), Err(SignatureError::TooManySections)));
    }
}
