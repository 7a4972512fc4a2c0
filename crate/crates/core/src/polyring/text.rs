//! Text formats for polynomials.
//!
//! Two input syntaxes are accepted by [`parse_polynomial`]:
//!
//! * a JSON list of records `{"exponents": [..], "re": .., "im": ..}`
//!   (the interchange format, also produced by [`Polynomial::to_records`]);
//! * an arithmetic expression such as `1 + 2.5*z1^2 - (0.5+1i)*z1z2` or
//!   `(z1 + z2)^3`, with implicit multiplication between factors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{MultiIndex, Polynomial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub exponents: Vec<u32>,
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl Polynomial {
    /// Records in graded order.
    pub fn to_records(&self) -> Vec<PolyRecord> {
        self.terms()
            .map(|(a, c)| PolyRecord {
                exponents: a.exponents().to_vec(),
                re: c.re,
                im: c.im,
            })
            .collect()
    }

    pub fn from_records(dim: usize, records: &[PolyRecord]) -> Result<Polynomial> {
        Polynomial::from_terms(
            dim,
            records
                .iter()
                .map(|r| {
                    MultiIndex::new(r.exponents.clone()).map(|a| (a, Complex64::new(r.re, r.im)))
                })
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

/// Parse either syntax. Errors carry 1-based line and column.
pub fn parse_polynomial(input: &str, dim: usize) -> Result<Polynomial> {
    if dim == 0 {
        return Err(Error::DimensionTooSmall { min: 1, found: 0 });
    }
    if input.trim_start().starts_with('[') {
        let records: Vec<PolyRecord> = serde_json::from_str(input).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        return Polynomial::from_records(dim, &records);
    }
    let mut parser = ExprParser {
        src: input.chars().collect(),
        pos: 0,
        dim,
    };
    let p = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.src.len() {
        return Err(parser.error("unexpected character"));
    }
    Ok(p)
}

struct ExprParser {
    src: Vec<char>,
    pos: usize,
    dim: usize,
}

impl ExprParser {
    fn error(&self, message: &str) -> Error {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.src[..self.pos.min(self.src.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        let found = self
            .src
            .get(self.pos)
            .map(|c| format!("`{c}`"))
            .unwrap_or_else(|| "end of input".into());
        Error::Parse {
            line,
            column,
            message: format!("{message} (found {found})"),
        }
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expr(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        let mut sign = 1.0;
        if let Some(c @ ('+' | '-')) = self.peek() {
            self.pos += 1;
            if c == '-' {
                sign = -1.0;
            }
        }
        let mut acc = self.term()?.scale_real(sign);
        loop {
            self.skip_ws();
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.checked_add(&self.term()?)?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = acc.checked_sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_factor(c: char) -> bool {
        c.is_ascii_digit() || c == '.' || c == 'z' || c == 'i' || c == '('
    }

    fn term(&mut self) -> Result<Polynomial> {
        self.skip_ws();
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    self.skip_ws();
                    acc = acc.checked_mul(&self.factor()?)?;
                }
                Some(c) if Self::starts_factor(c) => {
                    acc = acc.checked_mul(&self.factor()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Polynomial> {
        let base = match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                inner
            }
            Some('z') => {
                self.pos += 1;
                let start = self.pos;
                let k = self.integer()?;
                if k == 0 || k as usize > self.dim {
                    self.pos = start;
                    return Err(self.error(&format!("variable index must be in 1..={}", self.dim)));
                }
                Polynomial::coordinate(self.dim, k as usize - 1)
            }
            Some('i') => {
                self.pos += 1;
                Polynomial::constant(self.dim, Complex64::new(0.0, 1.0))
            }
            Some(c) if c.is_ascii_digit() || c == '.' => {
                let x = self.number()?;
                if self.peek() == Some('i') {
                    self.pos += 1;
                    Polynomial::constant(self.dim, Complex64::new(0.0, x))
                } else {
                    Polynomial::constant(self.dim, Complex64::new(x, 0.0))
                }
            }
            _ => return Err(self.error("expected a number, `i`, `z<k>` or `(`")),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let e = self.integer()?;
            let mut out = Polynomial::one(self.dim);
            for _ in 0..e {
                out = out.checked_mul(&base)?;
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u32> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.src[start..self.pos].iter().collect();
        s.parse().map_err(|_| {
            self.pos = start;
            self.error("integer out of range")
        })
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.pos += 1;
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some('+' | '-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = save;
            }
        }
        let s: String = self.src[start..self.pos].iter().collect();
        s.parse().map_err(|_| {
            self.pos = start;
            self.error("malformed number")
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: &[u32], re: f64, im: f64) -> Polynomial {
        Polynomial::monomial(MultiIndex::new(e.to_vec()).unwrap(), Complex64::new(re, im))
    }

    #[test]
    fn expression_syntax() {
        assert_eq!(
            parse_polynomial("z1z2", 2).unwrap(),
            mono(&[1, 1], 1.0, 0.0)
        );
        assert!(parse_polynomial("0", 3).unwrap().is_zero());
        let p = parse_polynomial("1 - 2.5*z1^2 + 3i z2", 2).unwrap();
        assert_eq!(p.coeff(&MultiIndex::new(vec![0, 0]).unwrap()).re, 1.0);
        assert_eq!(p.coeff(&MultiIndex::new(vec![2, 0]).unwrap()).re, -2.5);
        assert_eq!(
            p.coeff(&MultiIndex::new(vec![0, 1]).unwrap()),
            Complex64::new(0.0, 3.0)
        );
        let q = parse_polynomial("(z1 + z2)^2", 2).unwrap();
        assert_eq!(q.coeff(&MultiIndex::new(vec![1, 1]).unwrap()).re, 2.0);
        let r = parse_polynomial("(0.5+1i)*z1", 1).unwrap();
        assert_eq!(r, mono(&[1], 0.5, 1.0));
        assert_eq!(
            parse_polynomial("1e-3 z1", 1).unwrap(),
            mono(&[1], 1e-3, 0.0)
        );
    }

    #[test]
    fn parse_errors_locate() {
        match parse_polynomial("z1 + *z2", 2) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 6)),
            other => panic!("{other:?}"),
        }
        match parse_polynomial("z1 +\n z3", 2) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(parse_polynomial("(z1", 2).is_err());
        assert!(parse_polynomial("z1 )", 2).is_err());
        assert!(parse_polynomial("[{\"exponents\": [1,0], \"re\": }]", 2).is_err());
    }

    #[test]
    fn json_records() {
        let p = parse_polynomial(
            r#"[{"exponents":[0,2],"re":1.0},{"exponents":[1,0],"re":0.5,"im":-1.0}]"#,
            2,
        )
        .unwrap();
        let recs = p.to_records();
        // graded order: z1 before z2^2
        assert_eq!(recs[0].exponents, vec![1, 0]);
        assert_eq!(recs[1].exponents, vec![0, 2]);
        let back = Polynomial::from_records(2, &recs).unwrap();
        assert_eq!(back, p);
        assert!(parse_polynomial(r#"[{"exponents":[1],"re":1.0}]"#, 2).is_err());
    }
}
