//! Polynomials over Q in named variables, with a small expression parser.

use std::collections::BTreeMap;

use crate::error::{JetError, Result};
use crate::exactcore::Rational;

/// Exponent vector -> coefficient; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    pub nvars: usize,
    pub terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Poly::zero(nvars);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let v = out.terms.get(e).cloned().unwrap_or_default() + c;
            if v.is_zero() {
                out.terms.remove(e);
            } else {
                out.terms.insert(e.clone(), v);
            }
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let v = out.terms.get(&e).cloned().unwrap_or_default() + c1 * c2;
                if v.is_zero() {
                    out.terms.remove(&e);
                } else {
                    out.terms.insert(e, v);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(self.nvars, Rational::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Total degrees occurring in the polynomial.
    pub fn degrees(&self) -> Vec<u32> {
        let mut d: Vec<u32> = self.terms.keys().map(|e| e.iter().sum()).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degrees().len() <= 1
    }

    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        // highest degree first, then lexicographically largest exponent first
        let mut items: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        items.sort_by(|a, b| {
            let da: u32 = a.0.iter().sum();
            let db: u32 = b.0.iter().sum();
            db.cmp(&da).then(b.0.cmp(a.0))
        });
        for (e, c) in items {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            let body = if mono.is_empty() {
                c.abs().to_string()
            } else if c.abs().is_one() {
                mono.join("*")
            } else {
                format!("{}*{}", c.abs(), mono.join("*"))
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() { format!("-{body}") } else { body });
            } else {
                parts.push(if c.is_negative() { format!("- {body}") } else { format!("+ {body}") });
            }
        }
        parts.join(" ")
    }
}

/// Parses a polynomial expression such as `x^2 + 3/2*x*y - (x - y)^2`.
///
/// `line` and `col0` locate the expression in its source file for error reporting.
pub fn parse_poly(src: &str, names: &[String], line: usize, col0: usize) -> Result<Poly> {
    let mut p = Parser { chars: src.chars().collect(), pos: 0, names, line, col0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected character {:?}", p.chars[p.pos])));
    }
    Ok(out)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    names: &'a [String],
    line: usize,
    col0: usize,
}

impl Parser<'_> {
    fn error(&self, message: String) -> JetError {
        JetError::ParseError { line: self.line, column: self.col0 + self.pos + 1, message }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly> {
        let n = self.names.len();
        let mut acc = match self.peek() {
            Some('-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some('+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => break,
            }
        }
        debug_assert_eq!(acc.nvars, n);
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.power()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            acc = acc.mul(&self.power()?);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected exponent".into()));
            }
            let e: String = self.chars[start..self.pos].iter().collect();
            let e: u32 = e.parse().map_err(|_| self.error("exponent too large".into()))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let n = self.names.len();
        match self.peek() {
            Some('-') => {
                self.pos += 1;
                Ok(self.power()?.neg())
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.chars.len() && (self.chars[self.pos].is_ascii_digit() || self.chars[self.pos] == '/') {
                    self.pos += 1;
                }
                let lit: String = self.chars[start..self.pos].iter().collect();
                let r: Rational = lit.parse().map_err(|_| self.error(format!("bad number {lit:?}")))?;
                Ok(Poly::constant(n, r))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.pos < self.chars.len() && (self.chars[self.pos].is_alphanumeric() || self.chars[self.pos] == '_') {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                match self.names.iter().position(|v| *v == name) {
                    Some(i) => Ok(Poly::var(n, i)),
                    None => {
                        self.pos = start;
                        Err(self.error(format!("unknown generator {name:?}")))
                    }
                }
            }
            Some(c) => Err(self.error(format!("unexpected character {c:?}"))),
            None => Err(self.error("unexpected end of expression".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn parses_sums_products_and_powers() {
        let p = parse_poly("x^2 + y^2", &names(), 1, 0).unwrap();
        assert_eq!(p.terms.len(), 2);
        assert!(p.is_homogeneous());
        let q = parse_poly("(x - y)^2 - x^2 - y^2 + 2*x*y", &names(), 1, 0).unwrap();
        assert!(q.is_zero());
        let r = parse_poly("3/2*x*y - 1", &names(), 1, 0).unwrap();
        assert_eq!(parse_poly("x + -2*y", &names(), 1, 0).unwrap(), parse_poly("x - 2*y", &names(), 1, 0).unwrap());
        assert!(!r.is_homogeneous());
    }

    #[test]
    fn reports_columns() {
        match parse_poly("x + z", &names(), 4, 10) {
            Err(JetError::ParseError { line, column, .. }) => {
                assert_eq!(line, 4);
                assert_eq!(column, 15);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn display_roundtrip() {
        let p = parse_poly("x^2 - 2*x*y + y^2", &names(), 1, 0).unwrap();
        let s = p.to_string_with(&names());
        assert_eq!(parse_poly(&s, &names(), 1, 0).unwrap(), p);
    }
}
