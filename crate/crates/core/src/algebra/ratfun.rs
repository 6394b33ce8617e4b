//! Reduced rational functions in canonical form.

use std::fmt;

use super::mgcd::gcd;
use super::rat::Rat;
use super::ring::Field;
use super::sparse::SparsePoly;
use crate::error::{Error, Result};

/// A fraction `num / den` of polynomials in the free variables.
///
/// Canonical form: numerator and denominator are coprime, the denominator
/// has coprime integer coefficients and a positive leading coefficient in
/// grlex order. Equal fractions therefore have identical representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: SparsePoly,
    den: SparsePoly,
}

/// Normalizes `num / den` to canonical form.
pub fn ratfun_normalize(num: SparsePoly, den: SparsePoly) -> Result<RatFun> {
    RatFun::new(num, den)
}

impl RatFun {
    pub fn new(num: SparsePoly, den: SparsePoly) -> Result<Self> {
        if num.nvars() != den.nvars() {
            return Err(Error::DimensionMismatch(
                "numerator and denominator ambients differ".into(),
            ));
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        let n = num.nvars();
        if num.is_zero() {
            return Ok(RatFun::zero(n));
        }
        if den.is_constant() {
            let c = den.constant_term().inv()?;
            return Ok(RatFun {
                num: num.scale(&c),
                den: SparsePoly::one(n),
            });
        }
        let (num, den) = if den.is_monomial() {
            let m = num
                .monomial_gcd()
                .meet(den.leading_term().expect("nonzero").0);
            if m.is_zero() {
                (num, den)
            } else {
                let strip = |p: &SparsePoly| {
                    SparsePoly::from_terms(
                        n,
                        p.terms()
                            .map(|(e, c)| (e.checked_sub(&m).expect("divides"), c.clone())),
                    )
                };
                (strip(&num), strip(&den))
            }
        } else {
            let g = gcd(&num, &den);
            if g.is_constant() {
                (num, den)
            } else {
                let q = |p: &SparsePoly| p.div_exact(&g).ok().flatten().expect("gcd divides");
                (q(&num), q(&den))
            }
        };
        Ok(RatFun::from_coprime(num, den))
    }

    /// Builds from a coprime pair, fixing only the scalar normalization.
    fn from_coprime(num: SparsePoly, den: SparsePoly) -> Self {
        let c = den.content_signed();
        if c.is_one() {
            return RatFun { num, den };
        }
        let ci = c.inv().expect("nonzero denominator");
        RatFun {
            num: num.scale(&ci),
            den: den.scale(&ci),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        RatFun {
            num: SparsePoly::zero(nvars),
            den: SparsePoly::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        RatFun::constant(nvars, Rat::one())
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        RatFun {
            num: SparsePoly::constant(nvars, c),
            den: SparsePoly::one(nvars),
        }
    }

    pub fn from_poly(p: SparsePoly) -> Self {
        let n = p.nvars();
        RatFun {
            num: p,
            den: SparsePoly::one(n),
        }
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        RatFun::from_poly(SparsePoly::var(nvars, var))
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn den(&self) -> &SparsePoly {
        &self.den
    }

    pub fn into_parts(self) -> (SparsePoly, SparsePoly) {
        (self.num, self.den)
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.is_constant()
    }

    /// The value as a rational constant, if constant.
    pub fn as_constant(&self) -> Option<Rat> {
        self.is_constant().then(|| self.num.constant_term())
    }

    /// Evaluates at a full point; fails where the denominator vanishes.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval(point) / d)
    }

    /// Moves into a ring with `nvars` variables, old variable `i` becoming
    /// `map[i]`.
    pub fn reindex(&self, nvars: usize, map: &[usize]) -> RatFun {
        RatFun::new(self.num.reindex(nvars, map), self.den.reindex(nvars, map))
            .expect("nonzero denominator")
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        if c.is_zero() {
            return RatFun::zero(self.nvars());
        }
        RatFun {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &SparsePoly) -> RatFun {
        self.mul(&RatFun::from_poly(p.clone()))
    }
}

fn div_by(p: &SparsePoly, g: &SparsePoly) -> SparsePoly {
    if g.is_one() {
        return p.clone();
    }
    p.div_exact(g).ok().flatten().expect("gcd divides")
}

fn gcd_fast(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    if a.is_constant() || b.is_constant() {
        SparsePoly::one(a.nvars())
    } else {
        gcd(a, b)
    }
}

impl Field for RatFun {
    fn zero_like(&self) -> Self {
        RatFun::zero(self.nvars())
    }

    fn one_like(&self) -> Self {
        RatFun::one(self.nvars())
    }

    fn rat_like(&self, c: &Rat) -> Self {
        RatFun::constant(self.nvars(), c.clone())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    fn add(&self, other: &Self) -> Self {
        if self.num.is_zero() {
            return other.clone();
        }
        if other.num.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFun::from_poly(&self.num + &other.num);
        }
        if self.den == other.den {
            return RatFun::new(&self.num + &other.num, self.den.clone())
                .expect("nonzero denominator");
        }
        let g = gcd_fast(&self.den, &other.den);
        let b1 = div_by(&self.den, &g);
        let d1 = div_by(&other.den, &g);
        let num = &(&self.num * &d1) + &(&other.num * &b1);
        let den = &self.den * &d1;
        if g.is_one() {
            // num and den are coprime when the denominators are.
            if num.is_zero() {
                return RatFun::zero(self.nvars());
            }
            return RatFun::from_coprime(num, den);
        }
        RatFun::new(num, den).expect("nonzero denominator")
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.num.is_zero() || other.num.is_zero() {
            return RatFun::zero(self.nvars());
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFun::from_poly(&self.num * &other.num);
        }
        let g1 = gcd_fast(&self.num, &other.den);
        let g2 = gcd_fast(&other.num, &self.den);
        let num = &div_by(&self.num, &g1) * &div_by(&other.num, &g2);
        let den = &div_by(&self.den, &g2) * &div_by(&other.den, &g1);
        if den.is_constant() {
            let c = den.constant_term().inv().expect("nonzero denominator");
            return RatFun::from_poly(num.scale(&c));
        }
        RatFun::from_coprime(num, den)
    }

    fn neg(&self) -> Self {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        Ok(RatFun::from_coprime_any(self.den.clone(), self.num.clone()))
    }

    fn scale_rat(&self, c: &Rat) -> Self {
        self.scale(c)
    }
}

impl RatFun {
    fn from_coprime_any(num: SparsePoly, den: SparsePoly) -> Self {
        if den.is_constant() {
            let c = den.constant_term().inv().expect("nonzero denominator");
            return RatFun::from_poly(num.scale(&c));
        }
        RatFun::from_coprime(num, den)
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::text::render_ratfun(self))
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
