//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::ExpVec;
use super::rat::Rat;
use crate::error::{Error, Result};

/// Multivariate polynomial in `X1..Xn` stored as a map from exponent
/// vectors to nonzero rational coefficients (grlex-sorted, leading term
/// last).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<ExpVec, Rat>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut p = SparsePoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(ExpVec::zero(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        SparsePoly::constant(nvars, Rat::one())
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        SparsePoly::monomial(nvars, ExpVec::unit(nvars, var), Rat::one())
    }

    pub fn monomial(nvars: usize, exps: ExpVec, c: Rat) -> Self {
        assert_eq!(
            exps.len(),
            nvars,
            "exponent vector length must equal ambient variable count"
        );
        let mut p = SparsePoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, merging
    /// repeated monomials and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (ExpVec, Rat)>,
    {
        let mut p = SparsePoly::zero(nvars);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpVec, &Rat)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (ExpVec, Rat)> {
        self.terms.into_iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(ExpVec::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff(&self, e: &ExpVec) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(&ExpVec::zero(self.nvars))
    }

    /// Leading term in grlex order.
    pub fn leading_term(&self) -> Option<(&ExpVec, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rat {
        self.leading_term()
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rat::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(ExpVec::degree).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e.get(var)).max()
    }

    /// Indices of variables that occur with positive exponent.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.nvars)
            .filter(|&v| self.terms.keys().any(|e| e.get(v) > 0))
            .collect()
    }

    pub fn add_term(&mut self, e: ExpVec, c: &Rat) {
        assert_eq!(
            e.len(),
            self.nvars,
            "exponent vector length must equal ambient variable count"
        );
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &ExpVec, c: &Rat) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.add(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> SparsePoly {
        let mut acc = SparsePoly::one(self.nvars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self, var: usize) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e.get(var);
            if k > 0 {
                let mut d = e.clone();
                d.set(var, k - 1);
                out.add_term(d, &(c * &Rat::from_int(k as i64)));
            }
        }
        out
    }

    /// Substitutes the bound variables by rational values. The ambient
    /// variable count is kept; bound slots simply stop occurring.
    pub fn eval_partial(&self, bindings: &BTreeMap<usize, Rat>) -> SparsePoly {
        for &v in bindings.keys() {
            assert!(v < self.nvars, "binding index {v} out of range");
        }
        let mut out = SparsePoly::zero(self.nvars);
        let mut powers: BTreeMap<(usize, u32), Rat> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = e.clone();
            for (&v, val) in bindings {
                let k = e.get(v);
                if k > 0 {
                    let pw = powers.entry((v, k)).or_insert_with(|| val.pow(k));
                    coeff *= pw;
                    rest.set(v, 0);
                }
            }
            out.add_term(rest, &coeff);
        }
        out
    }

    /// Evaluates at a full point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.nvars);
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.as_slice().iter().enumerate() {
                if k > 0 {
                    t *= &point[v].pow(k);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Replaces each variable `Xi` by `images[i]` (all in a common ambient
    /// ring).
    pub fn compose(&self, images: &[SparsePoly]) -> SparsePoly {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: BTreeMap<(usize, u32), SparsePoly> = BTreeMap::new();
        let mut out = SparsePoly::zero(target);
        for (e, c) in &self.terms {
            let mut t = SparsePoly::constant(target, c.clone());
            for (v, &k) in e.as_slice().iter().enumerate() {
                if k > 0 {
                    let pw = cache.entry((v, k)).or_insert_with(|| images[v].pow(k));
                    t = &t * &*pw;
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Moves coefficients into a ring with `nvars` variables using `map[i]`
    /// as the new index of old variable `i`.
    pub fn reindex(&self, nvars: usize, map: &[usize]) -> SparsePoly {
        assert_eq!(map.len(), self.nvars);
        let mut out = SparsePoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; nvars];
            for (old, &k) in e.as_slice().iter().enumerate() {
                if k > 0 {
                    ne[map[old]] += k;
                }
            }
            out.add_term(ExpVec::new(ne), c);
        }
        out
    }

    /// View as a univariate polynomial in `var`: entry `k` is the
    /// coefficient of `var^k` (not involving `var`).
    pub fn to_univariate(&self, var: usize) -> Vec<SparsePoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut out = vec![SparsePoly::zero(self.nvars); if self.is_zero() { 0 } else { deg + 1 }];
        for (e, c) in &self.terms {
            let k = e.get(var) as usize;
            let mut r = e.clone();
            r.set(var, 0);
            out[k].terms.insert(r, c.clone());
        }
        out
    }

    pub fn from_univariate(nvars: usize, var: usize, coeffs: &[SparsePoly]) -> SparsePoly {
        let mut out = SparsePoly::zero(nvars);
        for (k, c) in coeffs.iter().enumerate() {
            for (e, a) in &c.terms {
                let mut ne = e.clone();
                ne.set(var, ne.get(var) + k as u32);
                out.add_term(ne, a);
            }
        }
        out
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &SparsePoly) -> Result<Option<SparsePoly>> {
        let (lm, lc) = match divisor.leading_term() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::ZeroDivisor),
        };
        if divisor.is_monomial() {
            let mut q = SparsePoly::zero(self.nvars);
            let inv = lc.inv()?;
            for (e, c) in &self.terms {
                match e.checked_sub(&lm) {
                    Some(d) => {
                        q.terms.insert(d, c * &inv);
                    }
                    None => return Ok(None),
                }
            }
            return Ok(Some(q));
        }
        let inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = SparsePoly::zero(self.nvars);
        while let Some((m, c)) = rem.leading_term() {
            let d = match m.checked_sub(&lm) {
                Some(d) => d,
                None => return Ok(None),
            };
            let f = c * &inv;
            rem = &rem - &divisor.mul_monomial(&d, &f);
            quot.add_term(d, &f);
        }
        Ok(Some(quot))
    }

    /// Positive rational `c` with `self / c` integer-primitive, signed so that
    /// the quotient has a positive leading coefficient. Zero for zero.
    pub fn content_signed(&self) -> Rat {
        if self.is_zero() {
            return Rat::zero();
        }
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        let c = Rat::from_big(g, l).expect("nonzero lcm");
        if self.leading_coeff().is_negative() {
            -c
        } else {
            c
        }
    }

    /// Integer-primitive associate with positive leading coefficient.
    pub fn primitive(&self) -> SparsePoly {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content_signed();
        self.scale(&c.inv().expect("nonzero content"))
    }

    /// Componentwise minimum exponent over all terms (the largest monomial
    /// dividing the polynomial).
    pub fn monomial_gcd(&self) -> ExpVec {
        let mut it = self.terms.keys();
        match it.next() {
            None => ExpVec::zero(self.nvars),
            Some(first) => it.fold(first.clone(), |acc, e| acc.meet(e)),
        }
    }

    /// Substitutes `Xi -> Xi + shift_i` for the listed variables.
    pub fn translate(&self, vars: &[usize], shift: &[Rat]) -> SparsePoly {
        let images: Vec<SparsePoly> = (0..self.nvars)
            .map(|v| {
                let x = SparsePoly::var(self.nvars, v);
                match vars.iter().position(|&w| w == v) {
                    Some(i) => &x + &SparsePoly::constant(self.nvars, shift[i].clone()),
                    None => x,
                }
            })
            .collect();
        self.compose(&images)
    }

    /// Groups terms by their exponents in `vars`: `self = Σ c_b · X_vars^b`
    /// where no `c_b` involves `vars`. Sorted by `b`.
    pub fn split_by(&self, vars: &[usize]) -> Vec<(Vec<u32>, SparsePoly)> {
        let mut groups: BTreeMap<Vec<u32>, SparsePoly> = BTreeMap::new();
        for (e, c) in self.terms() {
            let b: Vec<u32> = vars.iter().map(|&v| e.get(v)).collect();
            let mut rest = e.as_slice().to_vec();
            for &v in vars {
                rest[v] = 0;
            }
            groups
                .entry(b)
                .or_insert_with(|| SparsePoly::zero(self.nvars))
                .add_term(ExpVec::new(rest), c);
        }
        groups.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(Rat::is_integer)
    }

    pub fn max_abs_coeff_bits(&self) -> u64 {
        self.terms
            .values()
            .map(|c| c.numer().abs().bits() + c.denom().bits())
            .max()
            .unwrap_or(0)
    }
}

impl std::fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", super::text::render_poly(self))
    }
}

impl std::fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", super::text::render_poly(self))
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "ambient mismatch");
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(e.clone(), c);
        }
        big
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "ambient mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), &-c);
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        assert_eq!(self.nvars, rhs.nvars, "ambient mismatch");
        if self.is_zero() || rhs.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        let mut acc: BTreeMap<ExpVec, Rat> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = ea.add(eb);
                let p = ca * cb;
                match acc.entry(e) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(p);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() += &p;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        SparsePoly {
            nvars: self.nvars,
            terms: acc,
        }
    }
}

macro_rules! owned_ops {
    ($trait:ident, $method:ident) => {
        impl $trait for SparsePoly {
            type Output = SparsePoly;
            fn $method(self, rhs: SparsePoly) -> SparsePoly {
                (&self).$method(&rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_poly;

    fn p(s: &str, n: usize) -> SparsePoly {
        parse_poly(s, n).unwrap()
    }

    #[test]
    fn eval_partial_specializes_worked_system() {
        let f1 = p("3+2*X1*X2*X3-X1^2*X4^4*X5^2+5*X4^8*X5^4", 5);
        let mut b = BTreeMap::new();
        b.insert(3usize, Rat::one());
        let g = f1.eval_partial(&b);
        assert_eq!(g, p("3+2*X1*X2*X3-X1^2*X5^2+5*X5^4", 5));
        assert_eq!(g.nvars(), 5);
    }

    #[test]
    fn eval_partial_trivial_cases() {
        let c = p("7/3", 2);
        let mut b = BTreeMap::new();
        b.insert(0usize, Rat::from_int(5));
        assert_eq!(c.eval_partial(&b), c);
        let mut z = BTreeMap::new();
        z.insert(0usize, Rat::zero());
        assert!(p("X1*X2", 2).eval_partial(&z).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = p("X1^2-1", 1);
        let b = p("X1-1", 1);
        assert_eq!(a.div_exact(&b).unwrap().unwrap(), p("X1+1", 1));
        assert_eq!(p("X1^2+1", 1).div_exact(&b).unwrap(), None);
        assert!(a.div_exact(&SparsePoly::zero(1)).is_err());
    }

    #[test]
    fn primitive_part() {
        let a = p("-4*X1^2-2*X1+1", 1);
        assert_eq!(a.primitive(), p("4*X1^2+2*X1-1", 1));
        assert_eq!(p("1/2*X1+3/4", 1).primitive(), p("2*X1+3", 1));
    }

    #[test]
    fn translate_and_back() {
        let a = p("X1^2*X2-3*X2+1/2", 2);
        let s = [Rat::from_int(2), Rat::new(-1, 3).unwrap()];
        let t = a.translate(&[0, 1], &s);
        let back = t.translate(&[0, 1], &[-&s[0], -&s[1]]);
        assert_eq!(back, a);
    }
}
