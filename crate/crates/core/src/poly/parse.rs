use num_bigint::BigInt;
use num_traits::Zero;

use super::{BiPoly, PolyError};
use crate::field::Field;

/// Parse a polynomial expression.
///
/// ```text
/// expr   := ('+'|'-')? term (('+'|'-') term)*
/// term   := factor ('*'? factor)*
/// factor := base ('^' nat)?
/// base   := 'x' | 'y' | 'g' | int ('/' int)? | '(' expr ')'
/// ```
///
/// `g` is the generator of an extension field; `a/b` is accepted wherever
/// `b` is invertible in the field. Integers are reduced only after being
/// read in full, so there is no overflow.
pub fn parse_poly<F: Field>(text: &str, k: &F) -> Result<BiPoly<F::Elem>, PolyError> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, k };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

struct Parser<'a, F> {
    s: &'a [u8],
    pos: usize,
    k: &'a F,
}

impl<F: Field> Parser<'_, F> {
    fn err(&self, msg: &str) -> PolyError {
        PolyError::Syntax { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<BiPoly<F::Elem>, PolyError> {
        let k = self.k;
        let mut negate = false;
        match self.peek() {
            Some(b'-') => {
                negate = true;
                self.pos += 1;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { first.neg(k) } else { first };
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc.add(&t, k) } else { acc.sub(&t, k) };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BiPoly<F::Elem>, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                }
                Some(c) if c == b'(' || c == b'x' || c == b'y' || c == b'g' || c.is_ascii_digit() => {}
                _ => break,
            }
            let f = self.factor()?;
            acc = acc.mul(&f, self.k);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<BiPoly<F::Elem>, PolyError> {
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            let n = self.integer()?;
            let e = u32::try_from(n).map_err(|_| PolyError::Syntax {
                pos: start,
                msg: "exponent too large".to_string(),
            })?;
            return Ok(base.pow(e, self.k));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<BiPoly<F::Elem>, PolyError> {
        let k = self.k;
        match self.peek() {
            Some(b'x') => {
                self.pos += 1;
                Ok(BiPoly::x(k))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(BiPoly::y(k))
            }
            Some(b'g') => match k.generator() {
                Some(g) => {
                    self.pos += 1;
                    Ok(BiPoly::constant(k, g))
                }
                None => Err(self.err("generator 'g' requires an extension field (-k > 1)")),
            },
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.big_integer()?;
                let mut c = k.from_int(&n);
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    self.skip_ws();
                    let at = self.pos;
                    let d = self.big_integer()?;
                    let inv = if d.is_zero() { None } else { k.inv(&k.from_int(&d)).ok() };
                    let inv = inv.ok_or(PolyError::Syntax {
                        pos: at,
                        msg: "denominator is zero in this field".to_string(),
                    })?;
                    c = k.mul(&c, &inv);
                }
                Ok(BiPoly::constant(k, c))
            }
            Some(_) => Err(self.err("expected 'x', 'y', a number or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn digits(&mut self) -> Result<&str, PolyError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).unwrap())
    }

    fn big_integer(&mut self) -> Result<BigInt, PolyError> {
        Ok(self.digits()?.parse().unwrap())
    }

    fn integer(&mut self) -> Result<u64, PolyError> {
        let start = self.pos;
        self.digits()?
            .parse()
            .map_err(|_| PolyError::Syntax { pos: start, msg: "exponent too large".to_string() })
    }
}
