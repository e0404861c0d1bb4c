//! Input and output forms: rationals as `p/q` strings and
//! `{"num", "den"}` JSON objects, pair supports from JSON or the
//! hand-typeable text form `x0^2 + x0*x1 ; x0 + x1`.

use num::{BigInt, Zero};
use serde::Deserialize;

use crate::monomial::Monomial;
use crate::stability::PairSupport;
use crate::{invalid, Error, Rational, Result};

/// Parses `p/q` or a plain integer.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| invalid(format!("bad rational numerator {num:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| invalid(format!("bad rational denominator {den:?}")))?;
    if den.is_zero() {
        return Err(invalid("rational denominator must be nonzero"));
    }
    Ok(Rational::new(num, den))
}

/// Renders in the CLI text form: `p/q`, or just `p` for integers.
pub fn rational_text(value: &Rational) -> String {
    if value.denom() == &BigInt::from(1) {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// JSON object form `{"num": "...", "den": "..."}`.
pub fn rational_json(value: &Rational) -> serde_json::Value {
    serde_json::json!({
        "num": value.numer().to_string(),
        "den": value.denom().to_string(),
    })
}

#[derive(Deserialize)]
struct PairJson {
    n: u32,
    d: u32,
    #[serde(rename = "X")]
    x: Vec<Vec<u32>>,
    #[serde(rename = "H")]
    h: Vec<usize>,
}

/// Reads a pair support from either accepted format, dispatching on the
/// leading character: `{` selects JSON, anything else the text form.
pub fn parse_pair(input: &str, n: u32, d: u32) -> Result<PairSupport> {
    if input.trim_start().starts_with('{') {
        let parsed: PairJson = serde_json::from_str(input)?;
        if parsed.n != n || parsed.d != d {
            return Err(invalid(format!(
                "pair declares (n, d) = ({}, {}) but ({n}, {d}) was requested",
                parsed.n, parsed.d
            )));
        }
        PairSupport::from_exponents(n, d, &parsed.x, &parsed.h)
    } else {
        parse_pair_text(input, n, d)
    }
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Self {
            text: text.as_bytes(),
            pos: 0,
            line: 1,
            column: 1,
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b' ' | b'\t' | b'\r' | b'\n')) {
            self.bump();
        }
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            return true;
        }
        false
    }

    fn number(&mut self) -> Result<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.bump();
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .expect("digits")
            .parse()
            .map_err(|_| self.error("number out of range"))
    }
}

/// Grammar: `poly ';' poly` where a poly is `term (+ term)*` and a term is
/// `factor (* factor)*` with factors `x<i>` or `x<i>^<e>`. Coefficients are
/// not written: only the support matters.
fn parse_pair_text(input: &str, n: u32, d: u32) -> Result<PairSupport> {
    let vars = (n + 2) as usize;
    let mut cur = Cursor::new(input);

    let x_set = parse_poly(&mut cur, vars)?;
    cur.skip_ws();
    if !cur.eat(b';') {
        return Err(cur.error("expected ';' between hypersurface and hyperplane"));
    }
    let h_set = parse_poly(&mut cur, vars)?;
    cur.skip_ws();
    if cur.peek().is_some() {
        return Err(cur.error("trailing input after the hyperplane"));
    }

    for m in &x_set {
        if m.degree() != d {
            return Err(cur.error(format!("hypersurface monomial {m} does not have degree {d}")));
        }
    }
    for m in &h_set {
        if m.degree() != 1 {
            return Err(cur.error(format!("hyperplane term {m} is not a variable")));
        }
    }
    PairSupport::new(n, d, x_set, h_set)
}

fn parse_poly(cur: &mut Cursor<'_>, vars: usize) -> Result<Vec<Monomial>> {
    let mut monomials = vec![parse_term(cur, vars)?];
    loop {
        cur.skip_ws();
        if cur.eat(b'+') {
            monomials.push(parse_term(cur, vars)?);
        } else {
            return Ok(monomials);
        }
    }
}

fn parse_term(cur: &mut Cursor<'_>, vars: usize) -> Result<Monomial> {
    let mut exponents = vec![0u32; vars];
    loop {
        cur.skip_ws();
        if !cur.eat(b'x') {
            return Err(cur.error("expected a variable like x0"));
        }
        let index = cur.number()? as usize;
        if index >= vars {
            return Err(cur.error(format!(
                "variable index {index} out of range (ambient has {vars} variables)"
            )));
        }
        let exponent = if cur.eat(b'^') { cur.number()? } else { 1 };
        exponents[index] += exponent;
        cur.skip_ws();
        if !cur.eat(b'*') {
            return Ok(Monomial::new(exponents));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_round_trip() {
        for text in ["0", "2", "-3", "1/2", "22/7", "-5/3"] {
            let r = parse_rational(text).unwrap();
            assert_eq!(rational_text(&r), text);
        }
        // Normalization on input.
        assert_eq!(rational_text(&parse_rational("2/4").unwrap()), "1/2");
        assert_eq!(rational_text(&parse_rational("3/-6").unwrap()), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn parse_text_pair() {
        let p = parse_pair("x0^2 + x0*x1 ; x1", 0, 2).unwrap();
        assert_eq!(p.x_set().len(), 2);
        assert_eq!(p.h_set().len(), 1);
        assert_eq!(p.pivot_index(), 1);
    }

    #[test]
    fn parse_text_multi_hyperplane() {
        let p = parse_pair("x0*x1 + x1*x2 ; x0 + x1", 1, 2).unwrap();
        assert_eq!(p.h_set().len(), 2);
        assert_eq!(p.pivot_index(), 1);
    }

    #[test]
    fn parse_repeated_factor_accumulates() {
        let p = parse_pair("x0*x0 ; x1", 0, 2).unwrap();
        assert_eq!(p.x_set()[0], Monomial::new(vec![2, 0]));
    }

    #[test]
    fn parse_json_pair() {
        let p = parse_pair(r#"{"n":0,"d":2,"X":[[1,1]],"H":[0]}"#, 0, 2).unwrap();
        assert_eq!(p.x_set().len(), 1);
        assert_eq!(p.h_set()[0], Monomial::variable(0, 2));
        assert!(parse_pair(r#"{"n":1,"d":2,"X":[[1,1]],"H":[0]}"#, 0, 2).is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_pair("x0^2 + y ; x1", 0, 2).unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert_eq!(line, 1);
                assert!(column > 1);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        let err = parse_pair("x0^2 ; x0\nbogus", 0, 2).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn degree_mismatch_rejected() {
        assert!(parse_pair("x0 ; x1", 0, 2).is_err());
        assert!(parse_pair("x0^2 ; x0*x1", 0, 2).is_err());
    }
}
