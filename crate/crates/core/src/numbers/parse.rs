//! Text syntax for exact scalars.
//!
//! Accepted everywhere a frequency appears: `p/q`, `sqrt(d)`,
//! `(a+b*sqrt(d))/c`, and small arithmetic combinations thereof such as
//! `sqrt(2)-1` or `(sqrt(5)-1)/2`. Decimal literals are read as exact
//! rationals (`0.3` is 3/10). The canonical `Display` form round-trips
//! bit-exactly.

use super::{ExactScalar, NumberError, Rational, Result};

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

pub fn parse_exact(input: &str) -> Result<ExactScalar> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(NumberError::Parse(format!(
            "trailing input at byte {} of {input:?}",
            p.pos
        )));
    }
    Ok(v)
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<()> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(NumberError::Parse(format!(
                "expected '{}' at byte {}",
                b as char, self.pos
            )))
        }
    }

    fn expr(&mut self) -> Result<ExactScalar> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<ExactScalar> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.factor()?)?;
            } else if self.eat(b'/') {
                acc = acc.div(&self.factor()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<ExactScalar> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.factor()?.neg())
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            Some(b's') => {
                self.keyword("sqrt")?;
                self.expect(b'(')?;
                let v = self.expr()?;
                self.expect(b')')?;
                match v {
                    ExactScalar::Rational(r) if r.is_integer() => ExactScalar::sqrt_int(r.num()),
                    _ => Err(NumberError::Parse(
                        "sqrt(...) takes a nonnegative integer".into(),
                    )),
                }
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            _ => Err(NumberError::Parse(format!(
                "unexpected input at byte {}",
                self.pos
            ))),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        self.skip_ws();
        if self.bytes[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            Ok(())
        } else {
            Err(NumberError::Parse(format!(
                "expected '{kw}' at byte {}",
                self.pos
            )))
        }
    }

    fn digits(&mut self) -> Result<i128> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(NumberError::Parse(format!("expected digits at byte {start}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<i128>()
            .map_err(|_| NumberError::Overflow)
    }

    fn number(&mut self) -> Result<ExactScalar> {
        let int = self.digits()?;
        // a decimal literal like 0.3 becomes the exact rational 3/10
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'.' {
            self.pos += 1;
            let start = self.pos;
            let frac = self.digits()?;
            let places = (self.pos - start) as u32;
            let den = 10i128
                .checked_pow(places)
                .ok_or(NumberError::Overflow)?;
            let num = int
                .checked_mul(den)
                .and_then(|v| v.checked_add(frac))
                .ok_or(NumberError::Overflow)?;
            return Ok(ExactScalar::Rational(Rational::new(num, den)?));
        }
        Ok(ExactScalar::integer(int))
    }
}
