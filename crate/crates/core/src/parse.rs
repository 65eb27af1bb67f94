//! The textual grammars shared by the library and the command line:
//! fractions `p/q`, slopes (`p/q`, `inf`, `empty`), slope pairs `(a,b)`,
//! and continued fractions as comma-separated nonzero integers.
//!
//! Errors carry the byte position of the offending token.

use num::bigint::BigInt;

use crate::error::{Error, Result};
use crate::rational::{ExtendedSlope, Fraction};
use crate::slope_table::SlopePair;

struct Cursor<'a> {
    input: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(input: &'a str) -> Self {
        Cursor { input, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.input[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.input.len() - trimmed.len();
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            input: self.input.to_string(),
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn eat(&mut self, ch: char) -> Result<()> {
        self.skip_ws();
        if self.rest().starts_with(ch) {
            self.pos += ch.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected '{ch}'")))
        }
    }

    fn eat_keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        if let Some(rest) = self.rest().strip_prefix(word) {
            // Keywords must not run into an identifier tail.
            if rest.chars().next().is_none_or(|c| !c.is_ascii_alphanumeric()) {
                self.pos += word.len();
                return true;
            }
        }
        false
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let rest = self.rest();
        let mut len = 0;
        let bytes = rest.as_bytes();
        if len < bytes.len() && (bytes[len] == b'+' || bytes[len] == b'-') {
            len += 1;
        }
        let digits_start = len;
        while len < bytes.len() && bytes[len].is_ascii_digit() {
            len += 1;
        }
        if len == digits_start {
            return Err(self.error("expected an integer"));
        }
        let value: BigInt = rest[..len].parse().expect("digit scan is a valid integer");
        self.pos += len;
        Ok(value)
    }

    fn expect_end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.error("unexpected trailing input"))
        }
    }
}

/// `p/q` with `q != 0`, or a bare integer `n` meaning `n/1`.
pub fn fraction(input: &str) -> Result<Fraction> {
    let mut cur = Cursor::new(input);
    let f = fraction_inner(&mut cur)?;
    cur.expect_end()?;
    Ok(f)
}

fn fraction_inner(cur: &mut Cursor) -> Result<Fraction> {
    let pos = cur.pos;
    let num = cur.integer()?;
    cur.skip_ws();
    let den = if cur.rest().starts_with('/') {
        cur.pos += 1;
        cur.integer()?
    } else {
        BigInt::from(1)
    };
    Fraction::new(num, den).map_err(|e| {
        let c = Cursor { input: cur.input, pos };
        c.error(e.to_string())
    })
}

/// A slope: `inf`, `empty`, or a fraction (`1/0` also normalizes to `inf`).
pub fn slope(input: &str) -> Result<ExtendedSlope> {
    let mut cur = Cursor::new(input);
    let s = slope_inner(&mut cur)?;
    cur.expect_end()?;
    Ok(s)
}

fn slope_inner(cur: &mut Cursor) -> Result<ExtendedSlope> {
    if cur.eat_keyword("inf") {
        return Ok(ExtendedSlope::Infinity);
    }
    if cur.eat_keyword("empty") {
        return Ok(ExtendedSlope::Empty);
    }
    let pos = cur.pos;
    let num = cur.integer()?;
    cur.skip_ws();
    let den = if cur.rest().starts_with('/') {
        cur.pos += 1;
        cur.integer()?
    } else {
        BigInt::from(1)
    };
    ExtendedSlope::from_ratio(num, den).map_err(|e| {
        let c = Cursor { input: cur.input, pos };
        c.error(e.to_string())
    })
}

/// A slope pair `(a, b)`.
pub fn slope_pair(input: &str) -> Result<SlopePair> {
    let mut cur = Cursor::new(input);
    cur.eat('(')?;
    let first = slope_inner(&mut cur)?;
    cur.eat(',')?;
    let second = slope_inner(&mut cur)?;
    cur.eat(')')?;
    cur.expect_end()?;
    SlopePair::new(first, second)
}

/// Continued-fraction terms: comma-separated integers, e.g. `2,4,-2`.
/// Zero terms are rejected here so every parsed sequence is a valid
/// continued fraction.
pub fn cf_terms(input: &str) -> Result<Vec<BigInt>> {
    let mut cur = Cursor::new(input);
    let mut terms = Vec::new();
    loop {
        cur.skip_ws();
        let pos = cur.pos;
        let term = cur.integer()?;
        if term == BigInt::from(0) {
            let c = Cursor { input: cur.input, pos };
            return Err(c.error("continued-fraction terms must be nonzero"));
        }
        terms.push(term);
        cur.skip_ws();
        if cur.rest().starts_with(',') {
            cur.pos += 1;
        } else {
            break;
        }
    }
    cur.expect_end()?;
    Ok(terms)
}
