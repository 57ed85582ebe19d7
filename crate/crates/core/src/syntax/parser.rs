use thiserror::Error;

use super::{Formula, Name, Prop, RESERVED};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Unexpected {
        offset: usize,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("at byte {offset}: empty name")]
    EmptyName { offset: usize },
    #[error("at byte {offset}: empty identifier")]
    EmptyIdentifier { offset: usize },
    #[error("at byte {offset}: unexpected character {ch:?}")]
    InvalidChar { offset: usize, ch: char },
    #[error("at byte {offset}: `{word}` is reserved")]
    Reserved { offset: usize, word: String },
}

impl SyntaxError {
    pub fn offset(&self) -> usize {
        match self {
            SyntaxError::Unexpected { offset, .. }
            | SyntaxError::EmptyName { offset }
            | SyntaxError::EmptyIdentifier { offset }
            | SyntaxError::InvalidChar { offset, .. }
            | SyntaxError::Reserved { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    True,
    False,
    OpR,
    OpD,
    OpAt,
    Bang,
    Pipe,
    Amp,
    Arrow,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Eof,
}

impl Tok<'_> {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::True => "`true`".into(),
            Tok::False => "`false`".into(),
            Tok::OpR => "`R`".into(),
            Tok::OpD => "`D`".into(),
            Tok::OpAt => "`@`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Pipe => "`|`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(usize, Tok<'_>)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'!' => Tok::Bang,
            b'|' => Tok::Pipe,
            b'&' => Tok::Amp,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'@' => Tok::OpAt,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                match &src[start..=i] {
                    "true" => Tok::True,
                    "false" => Tok::False,
                    "R" => Tok::OpR,
                    "D" => Tok::OpD,
                    word => Tok::Ident(word),
                }
            }
            _ => {
                let ch = src[i..].chars().next().unwrap_or('\u{fffd}');
                return Err(SyntaxError::InvalidChar { offset: i, ch });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((src.len(), Tok::Eof));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok<'a> {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok<'a> {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> SyntaxError {
        SyntaxError::Unexpected {
            offset: self.offset(),
            found: self.peek().describe(),
            expected,
        }
    }

    fn expect(&mut self, tok: Tok<'static>, label: &'static str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(vec![label]))
        }
    }

    fn implies(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.or()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.and()?;
        while *self.peek() == Tok::Pipe {
            self.bump();
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, SyntaxError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::OpR | Tok::OpD | Tok::OpAt => {
                let op = self.bump();
                let name = self.bracketed_name()?;
                let body = self.unary()?;
                Ok(match op {
                    Tok::OpR => Formula::de_re(name, body),
                    Tok::OpD => Formula::de_dicto(name, body),
                    _ => Formula::at(name, body),
                })
            }
            _ => self.atom(),
        }
    }

    fn bracketed_name(&mut self) -> Result<Name, SyntaxError> {
        self.expect(Tok::LBracket, "`[`")?;
        let offset = self.offset();
        let name = match self.peek().clone() {
            Tok::RBracket => return Err(SyntaxError::EmptyName { offset }),
            Tok::Ident(s) => {
                self.bump();
                Name::new(s).map_err(|e| shift(e, offset))?
            }
            tok @ (Tok::True | Tok::False | Tok::OpR | Tok::OpD) => {
                let word = match tok {
                    Tok::True => RESERVED[0],
                    Tok::False => RESERVED[1],
                    Tok::OpR => RESERVED[2],
                    _ => RESERVED[3],
                };
                return Err(SyntaxError::Reserved {
                    offset,
                    word: word.to_string(),
                });
            }
            _ => return Err(self.unexpected(vec!["name"])),
        };
        self.expect(Tok::RBracket, "`]`")?;
        Ok(name)
    }

    fn atom(&mut self) -> Result<Formula, SyntaxError> {
        let offset = self.offset();
        match self.peek().clone() {
            Tok::True => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::False => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Formula::Prop(Prop::new(s).map_err(|e| shift(e, offset))?))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implies()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(self.unexpected(vec![
                "`!`", "`R[`", "`D[`", "`@[`", "`true`", "`false`", "proposition", "`(`",
            ])),
        }
    }
}

fn shift(err: SyntaxError, base: usize) -> SyntaxError {
    match err {
        SyntaxError::EmptyIdentifier { offset } => SyntaxError::EmptyIdentifier { offset: base + offset },
        SyntaxError::InvalidChar { offset, ch } => SyntaxError::InvalidChar { offset: base + offset, ch },
        SyntaxError::Reserved { offset, word } => SyntaxError::Reserved { offset: base + offset, word },
        other => other,
    }
}

/// Parses a formula from its concrete syntax.
pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.implies()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected(vec!["`->`", "`|`", "`&`", "end of input"]));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        Formula::Prop(Prop::new(s).unwrap())
    }

    fn n(s: &str) -> Name {
        Name::new(s).unwrap()
    }

    #[test]
    fn parses_de_dicto() {
        assert_eq!(parse_formula("D[Ann] p").unwrap(), Formula::de_dicto(n("Ann"), p("p")));
    }

    #[test]
    fn parses_nested_modalities() {
        assert_eq!(
            parse_formula("R[Mya] @[Zoe] logician").unwrap(),
            Formula::de_re(n("Mya"), Formula::at(n("Zoe"), p("logician")))
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(
            parse_formula("!(p | q) -> p").unwrap(),
            Formula::implies(Formula::not(Formula::or(p("p"), p("q"))), p("p"))
        );
        assert_eq!(
            parse_formula("p -> q -> r").unwrap(),
            Formula::implies(p("p"), Formula::implies(p("q"), p("r")))
        );
        assert_eq!(
            parse_formula("p | q & r").unwrap(),
            Formula::or(p("p"), Formula::and(p("q"), p("r")))
        );
        assert_eq!(
            parse_formula("p | q | r").unwrap(),
            Formula::or(Formula::or(p("p"), p("q")), p("r"))
        );
        assert_eq!(
            parse_formula("!R[a] p & q").unwrap(),
            Formula::and(Formula::not(Formula::de_re(n("a"), p("p"))), p("q"))
        );
        assert_eq!(
            parse_formula("true|false").unwrap(),
            Formula::or(Formula::True, Formula::False)
        );
    }

    #[test]
    fn empty_name_is_rejected() {
        assert_eq!(parse_formula("R[] p"), Err(SyntaxError::EmptyName { offset: 2 }));
    }

    #[test]
    fn reports_offset_and_expected_tokens() {
        match parse_formula("p | ") {
            Err(SyntaxError::Unexpected { offset, expected, .. }) => {
                assert_eq!(offset, 4);
                assert!(expected.contains(&"proposition"));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_formula("(p | q") {
            Err(SyntaxError::Unexpected { offset: 6, expected, .. }) => assert_eq!(expected, ["`)`"]),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_formula("p q"), Err(SyntaxError::Unexpected { offset: 2, .. })));
        assert!(matches!(parse_formula("R p"), Err(SyntaxError::Unexpected { offset: 2, .. })));
    }

    #[test]
    fn rejects_bad_characters_and_reserved_names() {
        assert_eq!(parse_formula("p ∧ q"), Err(SyntaxError::InvalidChar { offset: 2, ch: '∧' }));
        assert!(matches!(parse_formula("p - q"), Err(SyntaxError::InvalidChar { offset: 2, .. })));
        assert!(matches!(parse_formula("R[true] p"), Err(SyntaxError::Reserved { offset: 2, .. })));
        assert!(matches!(parse_formula("D[R] p"), Err(SyntaxError::Reserved { offset: 2, .. })));
        assert!(parse_formula("").is_err());
    }
}
