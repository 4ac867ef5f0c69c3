//! Relator expressions and the plain-text relator language.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term ( '*'? term )*
//! term   := factor ( '^' INT | '^' '(' expr ')' )*
//! factor := 'r0' | 'r1' | 'r2' | '(' expr ')' | '[' expr ',' expr ']'
//! ```
//!
//! `x^k` is the k-th power (k ≥ 1), `x^(w)` is the conjugate `w⁻¹ x w`, and
//! `[x,y]` is the commutator `x⁻¹ y⁻¹ x y`.

use std::fmt;

use crate::error::ParseError;
use crate::word::{Generator, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelatorExpr {
    Gen(Generator),
    Product(Vec<RelatorExpr>),
    Power(Box<RelatorExpr>, u64),
    Commutator(Box<RelatorExpr>, Box<RelatorExpr>),
    Conjugate(Box<RelatorExpr>, Box<RelatorExpr>),
}

impl RelatorExpr {
    pub fn gen(i: u8) -> RelatorExpr {
        RelatorExpr::Gen(Generator::new(i).expect("generator index out of range"))
    }

    pub fn product(parts: Vec<RelatorExpr>) -> RelatorExpr {
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            RelatorExpr::Product(parts)
        }
    }

    pub fn pow(self, k: u64) -> RelatorExpr {
        RelatorExpr::Power(Box::new(self), k)
    }

    pub fn commutator(x: RelatorExpr, y: RelatorExpr) -> RelatorExpr {
        RelatorExpr::Commutator(Box::new(x), Box::new(y))
    }

    pub fn conjugate(self, by: RelatorExpr) -> RelatorExpr {
        RelatorExpr::Conjugate(Box::new(self), Box::new(by))
    }

    /// Expands the expression into a (not yet reduced) word.
    pub fn flatten(&self) -> Word {
        match self {
            RelatorExpr::Gen(g) => Word::from(*g),
            RelatorExpr::Product(parts) => parts
                .iter()
                .fold(Word::empty(), |acc, p| acc.concat(&p.flatten())),
            RelatorExpr::Power(x, k) => x.flatten().pow(*k as usize),
            RelatorExpr::Commutator(x, y) => Word::commutator(&x.flatten(), &y.flatten()),
            RelatorExpr::Conjugate(x, by) => x.flatten().conjugate(&by.flatten()),
        }
    }

    /// If the expression is a top-level power `x^k`, returns `(x, k)`.
    pub fn as_power(&self) -> Option<(&RelatorExpr, u64)> {
        match self {
            RelatorExpr::Power(x, k) => Some((x, *k)),
            _ => None,
        }
    }

    fn is_atomic(&self) -> bool {
        matches!(
            self,
            RelatorExpr::Gen(_) | RelatorExpr::Commutator(..)
        )
    }
}

impl fmt::Display for RelatorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn base(f: &mut fmt::Formatter<'_>, x: &RelatorExpr) -> fmt::Result {
            if x.is_atomic() {
                write!(f, "{x}")
            } else {
                write!(f, "({x})")
            }
        }
        match self {
            RelatorExpr::Gen(g) => write!(f, "{g}"),
            RelatorExpr::Product(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    match p {
                        RelatorExpr::Product(_) => write!(f, "({p})")?,
                        _ => write!(f, "{p}")?,
                    }
                }
                Ok(())
            }
            RelatorExpr::Power(x, k) => {
                base(f, x)?;
                write!(f, "^{k}")
            }
            RelatorExpr::Commutator(x, y) => write!(f, "[{x}, {y}]"),
            RelatorExpr::Conjugate(x, by) => {
                base(f, x)?;
                write!(f, "^({by})")
            }
        }
    }
}

impl std::str::FromStr for RelatorExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_relator(s)
    }
}

/// Parses one relator in the text language described in the module docs.
pub fn parse_relator(text: &str) -> Result<RelatorExpr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(p.error("empty relator"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ParseError {
        ParseError::Syntax {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(b'r' | b'(' | b'['))
    }

    fn expr(&mut self) -> Result<RelatorExpr, ParseError> {
        let mut parts = vec![self.term()?];
        loop {
            if self.peek() == Some(b'*') {
                self.pos += 1;
                parts.push(self.term()?);
            } else if self.starts_factor() {
                parts.push(self.term()?);
            } else {
                break;
            }
        }
        Ok(RelatorExpr::product(parts))
    }

    fn term(&mut self) -> Result<RelatorExpr, ParseError> {
        let mut x = self.factor()?;
        while self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let by = self.expr()?;
                    self.expect(b')')?;
                    x = x.conjugate(by);
                }
                Some(b'-') => return Err(self.error("exponent must be at least 1")),
                Some(c) if c.is_ascii_digit() => {
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let k: u64 = digits.parse().map_err(|_| ParseError::Syntax {
                        position: start,
                        message: "exponent too large".into(),
                    })?;
                    if k < 1 {
                        return Err(ParseError::Syntax {
                            position: start,
                            message: "exponent must be at least 1".into(),
                        });
                    }
                    x = x.pow(k);
                }
                _ => return Err(self.error("expected exponent or '(' after '^'")),
            }
        }
        Ok(x)
    }

    fn factor(&mut self) -> Result<RelatorExpr, ParseError> {
        match self.peek() {
            Some(b'r') => {
                self.pos += 1;
                match self.src.get(self.pos) {
                    Some(d @ b'0'..=b'2') => {
                        self.pos += 1;
                        Ok(RelatorExpr::gen(d - b'0'))
                    }
                    _ => Err(self.error("expected generator r0, r1 or r2")),
                }
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(b',')?;
                let y = self.expr()?;
                self.expect(b']')?;
                Ok(RelatorExpr::commutator(x, y))
            }
            Some(_) => Err(self.error("expected generator, '(' or '['")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn word(s: &str) -> Word {
        parse_relator(s).unwrap().flatten().free_reduce()
    }

    fn w(ix: &[u8]) -> Word {
        Word::from_indices(ix)
    }

    #[test]
    fn power_expands() {
        assert_eq!(parse_relator("r0^2").unwrap().flatten(), w(&[0, 0]));
        assert_eq!(word("(r0 r2)^2"), w(&[0, 2, 0, 2]));
    }

    #[test]
    fn commutator_expands_with_involutory_inverses() {
        // [(ρ0ρ1)², ρ2] = ρ1ρ0ρ1ρ0 · ρ2 · ρ0ρ1ρ0ρ1 · ρ2
        assert_eq!(
            word("[(r0 r1)^2, r2]"),
            w(&[1, 0, 1, 0, 2, 0, 1, 0, 1, 2])
        );
    }

    #[test]
    fn conjugation_and_star() {
        assert_eq!(word("r0^(r1*r2)"), w(&[2, 1, 0, 1, 2]));
        assert_eq!(word(" r0 * r1 "), w(&[0, 1]));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_relator("r0 r3") {
            Err(ParseError::Syntax { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_relator("r0^0").is_err());
        assert!(parse_relator("r0^-1").is_err());
        assert!(parse_relator("(r0 r1").is_err());
        assert!(parse_relator("[r0 r1]").is_err());
        assert!(parse_relator("").is_err());
    }

    fn arb_expr() -> impl Strategy<Value = RelatorExpr> {
        let leaf = (0u8..3).prop_map(RelatorExpr::gen);
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                proptest::collection::vec(inner.clone(), 2..4).prop_map(RelatorExpr::Product),
                (inner.clone(), 1u64..4).prop_map(|(x, k)| x.pow(k)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| RelatorExpr::commutator(x, y)),
                (inner.clone(), inner).prop_map(|(x, y)| x.conjugate(y)),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips_through_parser(e in arb_expr()) {
            let text = e.to_string();
            let back = parse_relator(&text).unwrap();
            prop_assert_eq!(back.flatten().free_reduce(), e.flatten().free_reduce());
        }
    }
}
