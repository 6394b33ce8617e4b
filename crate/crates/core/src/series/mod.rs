//! Truncated multivariate power series around a shift point and the
//! symbolic Newton–Hensel lifting built on them.

mod index;
pub mod lift;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::{ExpVec, Rat, SparsePoly};
use crate::error::{Error, Result};
pub use index::MonomialIndex;
pub use lift::{newton_hensel_lift, LiftedResolution};
pub use poly::SeriesPoly;

/// Shared description of a series ring: which ambient variables are the
/// series variables, the shift point, and the largest precision in use.
#[derive(Debug, PartialEq, Eq)]
pub struct SeriesCtx {
    nvars: usize,
    vars: Vec<usize>,
    shift: Vec<Rat>,
    index: MonomialIndex,
}

impl SeriesCtx {
    /// Series in `Z_i = X_{vars[i]} − shift[i]` up to total degree
    /// `max_precision`, inside an ambient ring of `nvars` variables.
    pub fn new(
        nvars: usize,
        vars: Vec<usize>,
        shift: Vec<Rat>,
        max_precision: u32,
    ) -> Result<Arc<Self>> {
        if vars.len() != shift.len() {
            return Err(Error::DimensionMismatch(
                "one shift coordinate per series variable".into(),
            ));
        }
        if vars.iter().any(|&v| v >= nvars) {
            return Err(Error::InvalidArgument(
                "series variable out of range".into(),
            ));
        }
        let index = MonomialIndex::new(vars.len(), max_precision);
        Ok(Arc::new(SeriesCtx {
            nvars,
            vars,
            shift,
            index,
        }))
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn shift(&self) -> &[Rat] {
        &self.shift
    }

    pub fn max_precision(&self) -> u32 {
        self.index.max_degree()
    }

    pub fn index(&self) -> &MonomialIndex {
        &self.index
    }
}

/// Truncated power series `Σ c_a Z^a` over monomials of total degree at
/// most `precision`.
///
/// Coefficients are stored densely in graded order as integer numerators
/// over one positive common denominator, with no common factor shared by
/// all of them; multiplication is then an integer convolution.
#[derive(Clone)]
pub struct TruncSeries {
    ctx: Arc<SeriesCtx>,
    precision: u32,
    den: BigInt,
    nums: Vec<BigInt>,
}

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        same_ctx(&self.ctx, &other.ctx)
            && self.precision == other.precision
            && self.den == other.den
            && self.nums == other.nums
    }
}

impl Eq for TruncSeries {}

fn same_ctx(a: &Arc<SeriesCtx>, b: &Arc<SeriesCtx>) -> bool {
    Arc::ptr_eq(a, b) || a.vars == b.vars && a.shift == b.shift && a.nvars == b.nvars
}

impl TruncSeries {
    pub fn zero(ctx: &Arc<SeriesCtx>, precision: u32) -> Self {
        let len = ctx.index.count(precision);
        TruncSeries {
            ctx: ctx.clone(),
            precision,
            den: BigInt::one(),
            nums: vec![BigInt::zero(); len],
        }
    }

    pub fn constant(ctx: &Arc<SeriesCtx>, precision: u32, c: &Rat) -> Self {
        let mut s = TruncSeries::zero(ctx, precision);
        s.nums[0] = c.numer().clone();
        s.den = c.denom().clone();
        s
    }

    pub fn one(ctx: &Arc<SeriesCtx>, precision: u32) -> Self {
        TruncSeries::constant(ctx, precision, &Rat::one())
    }

    /// The series variable `Z_i`.
    pub fn z(ctx: &Arc<SeriesCtx>, precision: u32, i: usize) -> Self {
        let mut s = TruncSeries::zero(ctx, precision);
        if precision >= 1 {
            let mut e = vec![0u32; ctx.vars.len()];
            e[i] = 1;
            let k = ctx.index.position(&e).expect("degree one monomial");
            s.nums[k] = BigInt::one();
        }
        s
    }

    /// Builds a series from rational coefficients in graded order.
    pub fn from_coeffs(ctx: &Arc<SeriesCtx>, precision: u32, coeffs: &[Rat]) -> Result<Self> {
        let len = ctx.index.count(precision);
        if coeffs.len() != len {
            return Err(Error::SeriesMismatch(format!(
                "expected {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        let mut den = BigInt::one();
        for c in coeffs {
            den = den.lcm(c.denom());
        }
        let nums = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut s = TruncSeries {
            ctx: ctx.clone(),
            precision,
            den,
            nums,
        };
        s.normalize();
        Ok(s)
    }

    /// Taylor expansion of a polynomial around the shift point. Variables
    /// other than the series variables must not occur.
    pub fn from_poly(ctx: &Arc<SeriesCtx>, precision: u32, p: &SparsePoly) -> Result<Self> {
        if let Some(v) = p.variables().into_iter().find(|v| !ctx.vars.contains(v)) {
            return Err(Error::SeriesMismatch(format!(
                "X{} is not a series variable",
                v + 1
            )));
        }
        let shifted = p.translate(&ctx.vars, &ctx.shift);
        let mut coeffs = vec![Rat::zero(); ctx.index.count(precision)];
        for (e, c) in shifted.terms() {
            let local: Vec<u32> = ctx.vars.iter().map(|&v| e.get(v)).collect();
            if let Some(k) = ctx
                .index
                .position(&local)
                .filter(|_| local.iter().sum::<u32>() <= precision)
            {
                coeffs[k] = c.clone();
            }
        }
        TruncSeries::from_coeffs(ctx, precision, &coeffs)
    }

    pub fn ctx(&self) -> &Arc<SeriesCtx> {
        &self.ctx
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn len(&self) -> usize {
        self.nums.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nums.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(Zero::is_zero)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        Rat::from_big(self.nums[k].clone(), self.den.clone()).expect("positive denominator")
    }

    pub fn coeffs(&self) -> Vec<Rat> {
        (0..self.nums.len()).map(|k| self.coeff(k)).collect()
    }

    pub fn constant_term(&self) -> Rat {
        self.coeff(0)
    }

    /// Coefficient of `Z^e`.
    pub fn coeff_of(&self, e: &[u32]) -> Rat {
        match self.ctx.index.position(e) {
            Some(k) if k < self.nums.len() => self.coeff(k),
            _ => Rat::zero(),
        }
    }

    /// Lowest degree with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<u32> {
        self.nums
            .iter()
            .position(|c| !c.is_zero())
            .map(|k| self.ctx.index.degree_of(k))
    }

    /// Homogeneous components of degrees `0..=precision`, as polynomials in
    /// the ambient ring where `X_{vars[i]}` stands for `Z_i`.
    pub fn components(&self) -> Vec<SparsePoly> {
        let n = self.ctx.nvars;
        let mut out = vec![SparsePoly::zero(n); self.precision as usize + 1];
        for (k, c) in self.nums.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let local = self.ctx.index.exps(k);
            let mut e = vec![0u32; n];
            for (i, &v) in self.ctx.vars.iter().enumerate() {
                e[v] = local[i];
            }
            let d = self.ctx.index.degree_of(k) as usize;
            out[d].add_term(
                ExpVec::new(e),
                &Rat::from_big(c.clone(), self.den.clone()).expect("positive"),
            );
        }
        out
    }

    /// Truncates or zero-pads to a new precision.
    pub fn with_precision(&self, precision: u32) -> Self {
        let len = self.ctx.index.count(precision);
        let mut nums = self.nums.clone();
        nums.resize(len, BigInt::zero());
        let mut s = TruncSeries {
            ctx: self.ctx.clone(),
            precision,
            den: self.den.clone(),
            nums,
        };
        if len < self.nums.len() {
            s.normalize();
        }
        s
    }

    fn normalize(&mut self) {
        let mut g = self.den.clone();
        for c in &self.nums {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if self.nums.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return;
        }
        if !g.is_one() {
            self.den /= &g;
            for c in self.nums.iter_mut() {
                if !c.is_zero() {
                    *c /= &g;
                }
            }
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if !same_ctx(&self.ctx, &other.ctx) {
            return Err(Error::SeriesMismatch(
                "different series variables or shift".into(),
            ));
        }
        if self.precision != other.precision {
            return Err(Error::SeriesMismatch(format!(
                "precisions {} and {}",
                self.precision, other.precision
            )));
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: bool) -> Self {
        let prec = self.precision.min(other.precision);
        let len = self.ctx.index.count(prec);
        let g = self.den.gcd(&other.den);
        let fa = &other.den / &g;
        let fb = &self.den / &g;
        let den = &self.den * &fa;
        let nums = (0..len)
            .map(|k| {
                let a = &self.nums[k];
                let b = &other.nums[k];
                match (a.is_zero(), b.is_zero()) {
                    (true, true) => BigInt::zero(),
                    (false, true) => a * &fa,
                    (true, false) => {
                        if sign {
                            -(b * &fb)
                        } else {
                            b * &fb
                        }
                    }
                    (false, false) => {
                        if sign {
                            a * &fa - b * &fb
                        } else {
                            a * &fa + b * &fb
                        }
                    }
                }
            })
            .collect();
        let mut s = TruncSeries {
            ctx: self.ctx.clone(),
            precision: prec,
            den,
            nums,
        };
        s.normalize();
        s
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    pub fn neg(&self) -> Self {
        TruncSeries {
            ctx: self.ctx.clone(),
            precision: self.precision,
            den: self.den.clone(),
            nums: self.nums.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return TruncSeries::zero(&self.ctx, self.precision);
        }
        let mut s = TruncSeries {
            ctx: self.ctx.clone(),
            precision: self.precision,
            den: &self.den * c.denom(),
            nums: self.nums.iter().map(|x| x * c.numer()).collect(),
        };
        s.normalize();
        s
    }

    /// Product truncated at `precision` (at most the smaller input precision).
    pub fn mul_trunc(&self, other: &Self, precision: u32) -> Self {
        let prec = precision.min(self.precision).min(other.precision);
        let idx = &self.ctx.index;
        let len = idx.count(prec);
        let a_nz: Vec<usize> = (0..idx.count(prec))
            .filter(|&k| !self.nums[k].is_zero())
            .collect();
        if a_nz.is_empty() {
            return TruncSeries::zero(&self.ctx, prec);
        }
        let b_nz: Vec<usize> = (0..idx.count(prec))
            .filter(|&k| !other.nums[k].is_zero())
            .collect();
        if b_nz.is_empty() {
            return TruncSeries::zero(&self.ctx, prec);
        }
        let bits_a = a_nz.iter().map(|&k| self.nums[k].bits()).max().unwrap_or(0);
        let bits_b = b_nz
            .iter()
            .map(|&k| other.nums[k].bits())
            .max()
            .unwrap_or(0);
        let terms = (a_nz.len() as u64).saturating_mul(b_nz.len() as u64);
        let log_terms = 64 - terms.leading_zeros() as u64;
        let nums = if bits_a + bits_b + log_terms <= 126 {
            let a: Vec<i128> = (0..len)
                .map(|k| i128::try_from(&self.nums[k]).expect("fits"))
                .collect();
            let b: Vec<i128> = (0..len)
                .map(|k| i128::try_from(&other.nums[k]).expect("fits"))
                .collect();
            let mut acc = vec![0i128; len];
            for &i in &a_nz {
                let da = idx.degree_of(i);
                let ca = idx.code(i);
                let end = idx.count(prec - da);
                for &j in b_nz.iter().take_while(|&&j| j < end) {
                    acc[idx.lookup(ca + idx.code(j))] += a[i] * b[j];
                }
            }
            acc.into_iter().map(BigInt::from).collect()
        } else {
            let mut acc = vec![BigInt::zero(); len];
            for &i in &a_nz {
                let da = idx.degree_of(i);
                let ca = idx.code(i);
                let end = idx.count(prec - da);
                let ai = &self.nums[i];
                for &j in b_nz.iter().take_while(|&&j| j < end) {
                    acc[idx.lookup(ca + idx.code(j))] += ai * &other.nums[j];
                }
            }
            acc
        };
        let mut s = TruncSeries {
            ctx: self.ctx.clone(),
            precision: prec,
            den: &self.den * &other.den,
            nums,
        };
        s.normalize();
        s
    }

    /// Inverse of a unit by Newton iteration `u ← u(2 − a·u)`, doubling the
    /// precision each round.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NonUnitSeries);
        }
        let mut u = TruncSeries::constant(&self.ctx, 0, &c0.inv()?);
        let mut p = 0u32;
        while p < self.precision {
            p = (2 * p + 1).min(self.precision);
            let u_p = u.with_precision(p);
            let a_p = self.with_precision(p);
            let e = TruncSeries::one(&self.ctx, p).sub(&a_p.mul_trunc(&u_p, p));
            u = u_p.add(&u_p.mul_trunc(&e, p));
        }
        Ok(u)
    }

    /// Rewrites the series as a polynomial in the original variables
    /// (substituting `Z_i = X_i − ξ_i`).
    pub fn to_poly(&self) -> SparsePoly {
        let mut z = SparsePoly::zero(self.ctx.nvars);
        for c in self.components() {
            z = &z + &c;
        }
        let back: Vec<Rat> = self.ctx.shift.iter().map(|s| -s).collect();
        z.translate(&self.ctx.vars, &back)
    }
}

/// `a · b`, both at the same precision and around the same point.
pub fn series_mul(a: &TruncSeries, b: &TruncSeries) -> Result<TruncSeries> {
    a.check(b)?;
    Ok(a.mul_trunc(b, a.precision))
}

/// Multiplicative inverse of a series with nonzero constant term.
pub fn series_inv(a: &TruncSeries) -> Result<TruncSeries> {
    a.inv()
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let comps = self.components();
        let parts: Vec<String> = comps
            .iter()
            .filter(|c| !c.is_zero())
            .map(|c| format!("[{c}]"))
            .collect();
        write!(
            f,
            "{} + O({})",
            if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            },
            self.precision + 1
        )
    }
}
