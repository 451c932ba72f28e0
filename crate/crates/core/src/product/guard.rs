//! Boolean guard expressions over atomic propositions.
//!
//! ```text
//! expr   := term ('|' term)*
//! term   := factor ('&' factor)*
//! factor := '!' factor | '(' expr ')' | 'true' | 'false' | ident
//! ```
//!
//! Binary operators associate to the left.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GuardExpr {
    True,
    False,
    Atom(String),
    Not(Box<GuardExpr>),
    And(Box<GuardExpr>, Box<GuardExpr>),
    Or(Box<GuardExpr>, Box<GuardExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("guard syntax error at offset {pos}: {msg}")]
pub struct GuardError {
    /// Byte offset into the guard text.
    pub pos: usize,
    pub msg: String,
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && s != "true"
        && s != "false"
}

impl GuardExpr {
    pub fn atom(name: &str) -> Self {
        GuardExpr::Atom(name.to_string())
    }

    pub fn negate(e: GuardExpr) -> Self {
        GuardExpr::Not(Box::new(e))
    }

    pub fn and(l: GuardExpr, r: GuardExpr) -> Self {
        GuardExpr::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: GuardExpr, r: GuardExpr) -> Self {
        GuardExpr::Or(Box::new(l), Box::new(r))
    }

    /// Atoms are true iff `holds` says so.
    pub fn eval_with(&self, holds: &impl Fn(&str) -> bool) -> bool {
        match self {
            GuardExpr::True => true,
            GuardExpr::False => false,
            GuardExpr::Atom(p) => holds(p),
            GuardExpr::Not(e) => !e.eval_with(holds),
            GuardExpr::And(l, r) => l.eval_with(holds) && r.eval_with(holds),
            GuardExpr::Or(l, r) => l.eval_with(holds) || r.eval_with(holds),
        }
    }

    pub fn eval(&self, props: &BTreeSet<String>) -> bool {
        self.eval_with(&|p| props.contains(p))
    }

    pub fn atoms(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            GuardExpr::Atom(p) => {
                out.insert(p);
            }
            GuardExpr::Not(e) => e.collect_atoms(out),
            GuardExpr::And(l, r) | GuardExpr::Or(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
            GuardExpr::True | GuardExpr::False => {}
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            GuardExpr::Or(..) => 1,
            GuardExpr::And(..) => 2,
            _ => 3,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, context: u8) -> fmt::Result {
        let parens = self.precedence() < context;
        if parens {
            f.write_str("(")?;
        }
        match self {
            GuardExpr::True => f.write_str("true")?,
            GuardExpr::False => f.write_str("false")?,
            GuardExpr::Atom(p) => f.write_str(p)?,
            GuardExpr::Not(e) => {
                f.write_str("!")?;
                e.write(f, 3)?;
            }
            GuardExpr::And(l, r) => {
                l.write(f, 2)?;
                f.write_str(" & ")?;
                r.write(f, 3)?;
            }
            GuardExpr::Or(l, r) => {
                l.write(f, 1)?;
                f.write_str(" | ")?;
                r.write(f, 2)?;
            }
        }
        if parens {
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// Prints with the fewest parentheses that re-parse to the same tree.
impl fmt::Display for GuardExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

impl std::str::FromStr for GuardExpr {
    type Err = GuardError;

    fn from_str(s: &str) -> Result<Self, GuardError> {
        parse_guard(s)
    }
}

pub fn eval_guard(g: &GuardExpr, props: &BTreeSet<String>) -> bool {
    g.eval(props)
}

#[derive(Clone, Debug, PartialEq)]
enum Token<'a> {
    Or,
    And,
    Not,
    Open,
    Close,
    Ident(&'a str),
}

struct Parser<'a> {
    tokens: Vec<(usize, Token<'a>)>,
    pos: usize,
    end: usize,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token<'_>)>, GuardError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let tok = match c {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'|' => Token::Or,
            b'&' => Token::And,
            b'!' => Token::Not,
            b'(' => Token::Open,
            b')' => Token::Close,
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Token::Ident(&text[start..i])));
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(GuardError {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((i, tok));
        i += 1;
    }
    Ok(out)
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, msg: impl Into<String>) -> GuardError {
        GuardError {
            pos: self.offset(),
            msg: msg.into(),
        }
    }

    fn expr(&mut self) -> Result<GuardExpr, GuardError> {
        let mut lhs = self.term()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            lhs = GuardExpr::or(lhs, self.term()?);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<GuardExpr, GuardError> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            lhs = GuardExpr::and(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<GuardExpr, GuardError> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(GuardExpr::negate(self.factor()?))
            }
            Some(Token::Open) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Token::Close) {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Token::Ident(word)) => {
                self.pos += 1;
                Ok(match word {
                    "true" => GuardExpr::True,
                    "false" => GuardExpr::False,
                    name => GuardExpr::atom(name),
                })
            }
            Some(_) => Err(self.error("expected `!`, `(`, a constant, or a proposition")),
            None => Err(self.error("unexpected end of guard")),
        }
    }
}

pub fn parse_guard(text: &str) -> Result<GuardExpr, GuardError> {
    let mut parser = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        end: text.len(),
    };
    let e = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use GuardExpr as G;

    fn props(names: &[&str]) -> BTreeSet<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn constants() {
        assert_eq!(parse_guard("true").unwrap(), G::True);
        assert_eq!(parse_guard(" false ").unwrap(), G::False);
    }

    #[test]
    fn precedence_shape() {
        assert_eq!(
            parse_guard("!p & (q | r)").unwrap(),
            G::and(G::negate(G::atom("p")), G::or(G::atom("q"), G::atom("r")))
        );
        assert_eq!(
            parse_guard("a | b & c").unwrap(),
            G::or(G::atom("a"), G::and(G::atom("b"), G::atom("c")))
        );
        assert_eq!(
            parse_guard("a & b & c").unwrap(),
            G::and(G::and(G::atom("a"), G::atom("b")), G::atom("c"))
        );
        assert_eq!(parse_guard("!!x").unwrap(), G::negate(G::negate(G::atom("x"))));
    }

    #[test]
    fn errors_carry_offsets() {
        assert_eq!(parse_guard("p &").unwrap_err().pos, 3);
        assert_eq!(parse_guard("(p | q").unwrap_err().pos, 6);
        assert_eq!(parse_guard("p q").unwrap_err().pos, 2);
        assert_eq!(parse_guard("p $ q").unwrap_err().pos, 2);
        assert_eq!(parse_guard("").unwrap_err().pos, 0);
        assert_eq!(parse_guard("p & )").unwrap_err().pos, 4);
    }

    #[test]
    fn evaluation() {
        let p = parse_guard("p").unwrap();
        assert!(p.eval(&props(&["p"])));
        assert!(!p.eval(&props(&[])));
        assert!(parse_guard("!p & q").unwrap().eval(&props(&["q"])));
        assert!(!parse_guard("!p & q").unwrap().eval(&props(&["p", "q"])));
    }

    #[test]
    fn printing() {
        for src in ["a & (b | c)", "(a | b) & c", "a | b & c", "!(a & b)", "a & (b & c)", "a | (b | c)", "!!a"] {
            let e = parse_guard(src).unwrap();
            assert_eq!(e.to_string(), src);
        }
        assert_eq!(parse_guard("((a))").unwrap().to_string(), "a");
    }

    #[test]
    fn identifiers() {
        assert!(is_identifier("p_1"));
        assert!(is_identifier("_x"));
        assert!(!is_identifier("1p"));
        assert!(!is_identifier("true"));
        assert!(!is_identifier(""));
    }
}
