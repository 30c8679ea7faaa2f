//! Text grammar:
//!
//! ```text
//! poly   := ["+"|"-"] term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := number ["/" number] | var ["^" int] | "(" poly ")" ["^" uint]
//! int    := ["-"] digits | "(" ["-"] digits ")"
//! ```
//!
//! Only `pi` may take a negative exponent. Parentheses are accepted on input
//! but never produced by rendering.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{CoeffRing, Monomial, Poly, Var};
use crate::error::{Error, Result};

pub(super) fn parse_poly(text: &str, ring: CoeffRing) -> Result<Poly> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let poly = parser.poly()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(Error::parse(parser.pos, "unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: CoeffRing,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn poly(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.ring);
        let mut negative = false;
        if self.eat(b'-') {
            negative = true;
        } else {
            self.eat(b'+');
        }
        loop {
            let term = self.term()?;
            acc = if negative { acc - term } else { acc + term };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc * self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.poly()?;
                if !self.eat(b')') {
                    return Err(Error::parse(self.pos, "expected `)`"));
                }
                if self.eat(b'^') {
                    let at = self.pos;
                    let e = self.int()?;
                    if e < 0 {
                        return Err(Error::parse(
                            at,
                            "negative power of a parenthesized expression",
                        ));
                    }
                    Ok(inner.pow(e as u64))
                } else {
                    Ok(inner)
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let num = self.digits()?;
                let den = if self.eat(b'/') {
                    self.digits()?
                } else {
                    BigInt::from(1)
                };
                self.coefficient(BigRational::new(num, den), at)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let at = self.pos;
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let var = Var::new(name)
                    .map_err(|_| Error::parse(at, format!("bad variable `{name}`")))?;
                let e = if self.eat(b'^') { self.int()? } else { 1 };
                let mono = Monomial::from_exponents([(var, e)])
                    .map_err(|_| Error::parse(at, format!("negative exponent on `{name}`")))?;
                Ok(Poly::monomial(
                    self.ring,
                    mono,
                    BigRational::from_integer(1.into()),
                ))
            }
            Some(c) => Err(Error::parse(
                self.pos,
                format!("unexpected `{}`", c as char),
            )),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }

    fn coefficient(&self, c: BigRational, at: usize) -> Result<Poly> {
        match self.ring {
            CoeffRing::Int if !c.is_integer() => Err(Error::parse(
                at,
                format!("fractional coefficient {c} over INT"),
            )),
            CoeffRing::ModP(p) if (c.denom() % p).is_zero() => Err(Error::parse(
                at,
                format!("denominator of {c} is not invertible mod {p}"),
            )),
            _ => Ok(Poly::from_rational(self.ring, c)),
        }
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected digits"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn int(&mut self) -> Result<i64> {
        let paren = self.eat(b'(');
        let negative = self.eat(b'-');
        let at = self.pos;
        let d = self.digits()?;
        let v: i64 = d
            .try_into()
            .map_err(|_| Error::parse(at, "exponent out of range"))?;
        if paren && !self.eat(b')') {
            return Err(Error::parse(self.pos, "expected `)`"));
        }
        Ok(if negative { -v } else { v })
    }
}
