//! Canonical text rendering and parsing of polynomials and fractions.
//!
//! Terms are printed in descending grlex order with explicit signs, `*`
//! between factors, `^` for powers and variables `X1..Xn`. The parser
//! accepts the same syntax plus parentheses and `/` between any factors.

use super::monomial::ExpVec;
use super::rat::Rat;
use super::ratfun::RatFun;
use super::ring::Field;
use super::sparse::SparsePoly;
use super::upoly::UniPoly;
use crate::error::{Error, Result};

pub fn x_names(nvars: usize) -> Vec<String> {
    (1..=nvars).map(|i| format!("X{i}")).collect()
}

fn render_monomial(e: &ExpVec, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (v, &k) in e.as_slice().iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(names[v].clone()),
            _ => parts.push(format!("{}^{}", names[v], k)),
        }
    }
    parts.join("*")
}

pub fn render_poly_with(p: &SparsePoly, names: &[String]) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in p.terms().rev().enumerate() {
        let neg = c.is_negative();
        let a = c.abs();
        if neg {
            out.push('-');
        } else if i > 0 {
            out.push('+');
        }
        let m = render_monomial(e, names);
        if m.is_empty() {
            out.push_str(&a.to_string());
        } else if a.is_one() {
            out.push_str(&m);
        } else {
            out.push_str(&format!("{a}*{m}"));
        }
    }
    out
}

pub fn render_poly(p: &SparsePoly) -> String {
    render_poly_with(p, &x_names(p.nvars()))
}

/// `num` when the denominator is one, `(num)/(den)` otherwise.
pub fn render_ratfun_with(r: &RatFun, names: &[String]) -> String {
    if r.den().is_one() {
        render_poly_with(r.num(), names)
    } else {
        format!(
            "({})/({})",
            render_poly_with(r.num(), names),
            render_poly_with(r.den(), names)
        )
    }
}

pub fn render_ratfun(r: &RatFun) -> String {
    render_ratfun_with(r, &x_names(r.nvars()))
}

/// Renders a polynomial in `Y` with rational-function coefficients as a
/// single expression, highest degree first.
pub fn render_upoly_ratfun(q: &UniPoly<RatFun>) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let mut parts: Vec<String> = Vec::new();
    for (k, c) in q.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let y = match k {
            0 => String::new(),
            1 => "Y".to_string(),
            _ => format!("Y^{k}"),
        };
        let cs = render_ratfun(c);
        let term = if y.is_empty() {
            cs
        } else if c.is_one() {
            y
        } else if c.is_constant() && c.as_constant().is_some_and(|v| (-v).is_one()) {
            format!("-{y}")
        } else if c.is_polynomial() && c.num().is_monomial() {
            format!("{cs}*{y}")
        } else {
            format!("({cs})*{y}")
        };
        parts.push(term);
    }
    let mut out = String::new();
    for (i, t) in parts.iter().enumerate() {
        if i > 0 && !t.starts_with('-') {
            out.push('+');
        }
        out.push_str(t);
    }
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [String],
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::parse(0, self.pos + 1, msg)
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

    fn expr(&mut self) -> Result<RatFun> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<RatFun> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.factor()?;
                    acc = acc
                        .div(&d)
                        .map_err(|_| Error::parse(0, at + 1, "division by zero"))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<RatFun> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let k = self.uint()?;
            let k = u32::try_from(k).map_err(|_| self.err("exponent too large"))?;
            let mut acc = base.one_like();
            for _ in 0..k {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn uint(&mut self) -> Result<num_bigint::BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn atom(&mut self) -> Result<RatFun> {
        match self.peek() {
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
                let n = self.uint()?;
                Ok(RatFun::constant(self.nvars, Rat::from_bigint(n)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.names.iter().position(|n| n == name) {
                    Some(v) => Ok(RatFun::var(self.nvars, v)),
                    None => {
                        self.pos = start;
                        Err(self.err(format!("unknown variable {name}")))
                    }
                }
            }
            Some(c) => Err(self.err(format!("unexpected character {:?}", c as char))),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

/// Parses an expression in the given variable names into a rational
/// function. Reported columns are 1-based; the line is left as 0.
pub fn parse_ratfun_with(s: &str, names: &[String]) -> Result<RatFun> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
        names,
        nvars: names.len(),
    };
    let e = p.expr()?;
    if p.peek().is_some() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

pub fn parse_ratfun(s: &str, nvars: usize) -> Result<RatFun> {
    parse_ratfun_with(s, &x_names(nvars))
}

pub fn parse_poly_with(s: &str, names: &[String]) -> Result<SparsePoly> {
    let r = parse_ratfun_with(s, names)?;
    if !r.is_polynomial() {
        return Err(Error::parse(0, 1, "expected a polynomial"));
    }
    Ok(r.into_parts().0)
}

pub fn parse_poly(s: &str, nvars: usize) -> Result<SparsePoly> {
    parse_poly_with(s, &x_names(nvars))
}

/// Parses a polynomial in `Y` whose coefficients are rational functions
/// of `X1..Xn`.
pub fn parse_upoly_ratfun(s: &str, nvars: usize) -> Result<UniPoly<RatFun>> {
    let mut names = x_names(nvars);
    names.push("Y".to_string());
    let r = parse_ratfun_with(s, &names)?;
    let y = nvars;
    if r.den().degree_in(y).unwrap_or(0) > 0 {
        return Err(Error::parse(0, 1, "Y in a denominator"));
    }
    let drop_y = |p: &SparsePoly| {
        SparsePoly::from_terms(
            nvars,
            p.terms()
                .map(|(e, c)| (ExpVec::new(e.as_slice()[..nvars].to_vec()), c.clone())),
        )
    };
    let den = drop_y(r.den());
    let coeffs = r
        .num()
        .to_univariate(y)
        .iter()
        .map(|c| RatFun::new(drop_y(c), den.clone()))
        .collect::<Result<Vec<_>>>()?;
    if coeffs.is_empty() {
        return Ok(UniPoly::zero());
    }
    Ok(UniPoly::new(coeffs))
}

/// Parses a polynomial in `Y` with rational coefficients.
pub fn parse_upoly_rat(s: &str) -> Result<UniPoly<Rat>> {
    let q = parse_upoly_ratfun(s, 0)?;
    Ok(q.map(|c| c.as_constant().expect("no free variables")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_roundtrip() {
        for s in [
            "-X1^2-1/2*X1+1/4",
            "3+2*X1*X2*X3",
            "X1^2*X4^4*X5^2-5",
            "0",
            "-7/3",
        ] {
            let p = parse_poly(s, 5).unwrap();
            assert_eq!(parse_poly(&render_poly(&p), 5).unwrap(), p);
        }
        assert_eq!(
            render_poly(&parse_poly("1/4-X1^2-1/2*X1", 1).unwrap()),
            "-X1^2-1/2*X1+1/4"
        );
    }

    #[test]
    fn ratfun_rendering() {
        let r = parse_ratfun("(-9*X1^2+8)/(4*X1^2+2*X1-1)", 1).unwrap();
        assert_eq!(render_ratfun(&r), "(-9*X1^2+8)/(4*X1^2+2*X1-1)");
    }

    #[test]
    fn parse_errors_report_columns() {
        match parse_poly("X1+*2", 2) {
            Err(Error::Parse { col, .. }) => assert_eq!(col, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_poly("X3", 2).is_err());
        assert!(parse_poly("1/X1", 1).is_err());
        assert!(parse_poly("X1/0", 1).is_err());
    }

    #[test]
    fn upoly_parse() {
        let q = parse_upoly_rat("Y^2-12/5*Y-1/5").unwrap();
        assert_eq!(
            q.coeffs(),
            &[
                "-1/5".parse::<Rat>().unwrap(),
                "-12/5".parse().unwrap(),
                Rat::one()
            ]
        );
        let q = parse_upoly_ratfun(
            "Y^2+(-12*X1^3-6*X1^2+6*X1)/(4*X1^2+2*X1-1)*Y+(-9*X1^2+8)/(4*X1^2+2*X1-1)",
            1,
        )
        .unwrap();
        assert_eq!(q.degree(), Some(2));
        assert_eq!(
            render_ratfun(&q.coeffs()[1]),
            "(-12*X1^3-6*X1^2+6*X1)/(4*X1^2+2*X1-1)"
        );
        assert_eq!(
            render_upoly_ratfun(&q),
            "Y^2+((-12*X1^3-6*X1^2+6*X1)/(4*X1^2+2*X1-1))*Y+(-9*X1^2+8)/(4*X1^2+2*X1-1)"
        );
    }
}
