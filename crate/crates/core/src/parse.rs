//! The small expression grammar of the command line:
//!
//! ```text
//! space   := factor | space "x" factor        factor := ("CP"|"RP") "(" nat ")"
//! bundle  := term ("+" term)*                 term   := [nat "*"] "L" nat
//! op      := "sq" | "psi:" int
//! element := ["-"] eterm (("+"|"-") eterm)*   eterm  := nat ["*" powers] | powers
//! powers  := power ("*" power)*               power  := ident ["^" nat]
//! ```
//!
//! Whitespace-insensitive; factor and generator names case-sensitive.
//! Errors carry the 1-based column of the offending character.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ops::OpKind;
use crate::ring::{GradedElement, Monomial, RingSpec};
use crate::thom::{Factor, FactorKind};

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            column: self.pos + 1,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{}`", c as char)))
        }
    }

    fn nat(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .expect("digits")
            .parse()
            .map_err(|_| self.error("number too large"))
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.text.len() && self.text[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
            while self.pos < self.text.len()
                && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
            {
                self.pos += 1;
            }
        }
        if self.pos == start {
            return Err(self.error("expected an identifier"));
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos])
            .expect("identifier")
            .to_string())
    }

    fn done(&mut self) -> Result<()> {
        if let Some(c) = self.peek() {
            Err(self.error(format!("unexpected `{}`", c as char)))
        } else {
            Ok(())
        }
    }
}

/// Parses a space expression like `CP(3)` or `RP(2) x RP(2)` into its
/// factor list. The theory comes from the operation flag, not the text.
pub fn parse_space(text: &str) -> Result<Vec<Factor>> {
    let mut cur = Cursor::new(text);
    let mut factors = vec![parse_factor(&mut cur)?];
    while cur.eat(b'x') {
        factors.push(parse_factor(&mut cur)?);
    }
    cur.done()?;
    Ok(factors)
}

fn parse_factor(cur: &mut Cursor) -> Result<Factor> {
    let name = cur.ident()?;
    let kind = match name.as_str() {
        "CP" => FactorKind::CP,
        "RP" => FactorKind::RP,
        _ => return Err(cur.error(format!("unknown factor `{name}`; use CP or RP"))),
    };
    cur.expect(b'(')?;
    let n = cur.nat()?;
    if n > u32::MAX as u64 {
        return Err(cur.error("factor dimension too large"));
    }
    cur.expect(b')')?;
    Ok(Factor::new(kind, n as u32))
}

/// Parses a bundle expression like `L1 + L2` or `2*L1` into the expanded
/// summand list (0-based factor indices, order preserved).
pub fn parse_bundle(text: &str) -> Result<Vec<usize>> {
    let mut cur = Cursor::new(text);
    let mut summands = Vec::new();
    loop {
        parse_bundle_term(&mut cur, &mut summands)?;
        if !cur.eat(b'+') {
            break;
        }
    }
    cur.done()?;
    Ok(summands)
}

fn parse_bundle_term(cur: &mut Cursor, out: &mut Vec<usize>) -> Result<()> {
    let mut count = 1u64;
    if cur.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
        count = cur.nat()?;
        cur.expect(b'*')?;
        if count == 0 {
            return Err(cur.error("summand multiplicity must be at least 1"));
        }
        if count > 64 {
            return Err(cur.error("summand multiplicity too large"));
        }
    }
    let name = cur.ident()?;
    if name != "L" {
        return Err(cur.error(format!("expected a line bundle `L<n>`, got `{name}`")));
    }
    let index = cur.nat()?;
    if index == 0 {
        return Err(cur.error("line bundles are numbered from L1"));
    }
    for _ in 0..count {
        out.push((index - 1) as usize);
    }
    Ok(())
}

/// Parses an operation identifier: `sq` or `psi:K`.
pub fn parse_op(text: &str) -> Result<OpKind> {
    let mut cur = Cursor::new(text);
    let name = cur.ident()?;
    let kind = match name.as_str() {
        "sq" => OpKind::Sq,
        "psi" => {
            cur.expect(b':')?;
            let negative = cur.eat(b'-');
            let k = cur.nat()?;
            if k > i64::MAX as u64 {
                return Err(cur.error("Adams parameter too large"));
            }
            let k = k as i64;
            OpKind::Psi(if negative { -k } else { k })
        }
        _ => return Err(cur.error(format!("unknown operation `{name}`; use sq or psi:K"))),
    };
    cur.done()?;
    Ok(kind)
}

/// Parses an element in the canonical text rendering against a ring's
/// generator names, e.g. `1 + a + b + a*b` or `2 + 3*x^2`.
pub fn parse_element(text: &str, ring: &Arc<RingSpec>) -> Result<GradedElement> {
    let mut cur = Cursor::new(text);
    let mut terms: Vec<(Monomial, BigInt)> = Vec::new();
    let mut negative = cur.eat(b'-');
    loop {
        let (m, c) = parse_element_term(&mut cur, ring)?;
        terms.push((m, if negative { -c } else { c }));
        match cur.peek() {
            Some(b'+') => {
                cur.bump();
                negative = false;
            }
            Some(b'-') => {
                cur.bump();
                negative = true;
            }
            _ => break,
        }
    }
    cur.done()?;
    GradedElement::from_terms(ring, terms)
}

fn parse_element_term(cur: &mut Cursor, ring: &Arc<RingSpec>) -> Result<(Monomial, BigInt)> {
    let mut coeff = BigInt::from(1);
    let mut exps = vec![0u32; ring.generators().len()];
    let mut saw_factor = false;

    if cur.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
        coeff = BigInt::from(cur.nat()?);
        saw_factor = true;
        if !cur.eat(b'*') {
            return Ok((Monomial::from_exponents(exps), coeff));
        }
        saw_factor = false;
    }

    loop {
        let column = {
            cur.skip_ws();
            cur.pos + 1
        };
        let name = cur.ident()?;
        let idx = ring.generator_index(&name).ok_or(Error::Parse {
            column,
            message: format!("unknown generator `{name}`"),
        })?;
        let exp = if cur.eat(b'^') {
            let e = cur.nat()?;
            if e > u32::MAX as u64 {
                return Err(cur.error("exponent too large"));
            }
            e as u32
        } else {
            1
        };
        exps[idx] += exp;
        saw_factor = true;
        if !cur.eat(b'*') {
            break;
        }
    }
    if !saw_factor {
        return Err(cur.error("expected a term"));
    }
    Ok((Monomial::from_exponents(exps), coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Coefficients, GeneratorSpec};
    use crate::thom::{SpaceModel, Theory};

    #[test]
    fn space_grammar() {
        assert_eq!(parse_space("CP(3)").unwrap(), vec![Factor::new(FactorKind::CP, 3)]);
        assert_eq!(
            parse_space(" RP(2)xRP(2) ").unwrap(),
            vec![Factor::new(FactorKind::RP, 2), Factor::new(FactorKind::RP, 2)]
        );
        assert!(matches!(parse_space("CP(-1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_space("cp(1)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_space("CP(1) y CP(1)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn bundle_grammar() {
        assert_eq!(parse_bundle("L1 + L2").unwrap(), vec![0, 1]);
        assert_eq!(parse_bundle("2*L1").unwrap(), vec![0, 0]);
        assert_eq!(parse_bundle("2*L1 + L2").unwrap(), vec![0, 0, 1]);
        assert!(matches!(parse_bundle("L0"), Err(Error::Parse { .. })));
        assert!(matches!(parse_bundle("M1"), Err(Error::Parse { .. })));
        assert!(matches!(parse_bundle("0*L1"), Err(Error::Parse { .. })));
    }

    #[test]
    fn op_grammar() {
        assert_eq!(parse_op("sq").unwrap(), OpKind::Sq);
        assert_eq!(parse_op("psi:3").unwrap(), OpKind::Psi(3));
        assert_eq!(parse_op(" psi:12 ").unwrap(), OpKind::Psi(12));
        assert_eq!(parse_op("psi:-1").unwrap(), OpKind::Psi(-1));
        assert!(matches!(parse_op("Sq"), Err(Error::Parse { .. })));
        assert!(matches!(parse_op("psi"), Err(Error::Parse { .. })));
    }

    #[test]
    fn element_grammar_round_trip() {
        let ring = RingSpec::new(
            Coefficients::Integer,
            vec![GeneratorSpec::polynomial("x", 0, 3)],
        )
        .unwrap();
        for text in ["0", "2 + x", "3 + 3*x + x^2", "-2 - x", "x^3", "1 - 2*x^2"] {
            let e = parse_element(text, &ring).unwrap();
            assert_eq!(e.to_string(), text);
        }
        // out-of-window monomials are zero in the quotient
        assert!(parse_element("x^4", &ring).unwrap().is_zero());
        assert!(matches!(parse_element("1 + y", &ring), Err(Error::Parse { .. })));
        assert!(matches!(parse_element("1 +", &ring), Err(Error::Parse { .. })));

        let space = SpaceModel::new(
            vec![Factor::new(FactorKind::RP, 2), Factor::new(FactorKind::RP, 2)],
            Theory::Mod2,
        )
        .unwrap();
        let e = parse_element("1 + a + b + a*b", space.ring()).unwrap();
        assert_eq!(e.to_string(), "1 + a + b + a*b");
    }

    #[test]
    fn parse_error_columns() {
        match parse_space("CP(-1)") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 4),
            other => panic!("unexpected {other:?}"),
        }
        match parse_bundle("L1 ++ L2") {
            Err(Error::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
    }
}
