use super::Formula;

// Binding strength, loosest first.
const IMPLIES: u8 = 0;
const OR: u8 = 1;
const AND: u8 = 2;
const UNARY: u8 = 3;

/// Renders a formula in the concrete syntax with the fewest parentheses
/// that still parse back to the same tree.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write(f, IMPLIES, &mut out);
    out
}

fn write(f: &Formula, ctx: u8, out: &mut String) {
    let (level, wrap) = match f {
        Formula::Implies(..) => (IMPLIES, ctx > IMPLIES),
        Formula::Or(..) => (OR, ctx > OR),
        Formula::And(..) => (AND, ctx > AND),
        _ => (UNARY, false),
    };
    if wrap {
        out.push('(');
    }
    match f {
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Prop(p) => out.push_str(p.as_str()),
        Formula::Not(g) => {
            out.push('!');
            write(g, UNARY, out);
        }
        Formula::At(n, g) | Formula::DeRe(n, g) | Formula::DeDicto(n, g) => {
            out.push(match f {
                Formula::At(..) => '@',
                Formula::DeRe(..) => 'R',
                _ => 'D',
            });
            out.push('[');
            out.push_str(n.as_str());
            out.push_str("] ");
            write(g, UNARY, out);
        }
        Formula::Implies(a, b) => {
            write(a, level + 1, out);
            out.push_str(" -> ");
            write(b, level, out);
        }
        Formula::Or(a, b) | Formula::And(a, b) => {
            write(a, level, out);
            out.push_str(if level == OR { " | " } else { " & " });
            write(b, level + 1, out);
        }
    }
    if wrap {
        out.push(')');
    }
}

#[cfg(test)]
mod tests {
    use super::super::parse_formula;
    use super::*;
    use crate::syntax::{Name, Prop};

    fn p(s: &str) -> Formula {
        Formula::Prop(Prop::new(s).unwrap())
    }

    #[test]
    fn prints_examples() {
        let ann = Name::new("Ann").unwrap();
        assert_eq!(print_formula(&Formula::de_dicto(ann, p("p"))), "D[Ann] p");
        assert_eq!(print_formula(&Formula::or(Formula::not(p("p")), p("q"))), "!p | q");
        assert_eq!(
            print_formula(&Formula::at(Name::new("Lia").unwrap(), p("logician"))),
            "@[Lia] logician"
        );
    }

    #[test]
    fn parenthesizes_only_where_needed() {
        for src in [
            "(p -> q) -> r",
            "p -> q -> r",
            "p | (q | r)",
            "p | q | r",
            "(p | q) & r",
            "!(p & q)",
            "R[a] (p | q)",
            "p & (q -> r)",
            "!!R[a] D[b] @[c] !p",
        ] {
            let f = parse_formula(src).unwrap();
            assert_eq!(print_formula(&f), src);
        }
    }
}
