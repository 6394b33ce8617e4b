use std::sync::Arc;

use crate::algebra::{Rat, UniPoly};
use crate::error::{Error, Result};

use super::{SeriesCtx, TruncSeries};

/// Polynomial in `Y` with truncated power series coefficients, lowest
/// degree first. All coefficients share one context and precision.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeriesPoly {
    ctx: Arc<SeriesCtx>,
    precision: u32,
    coeffs: Vec<TruncSeries>,
}

impl SeriesPoly {
    pub fn zero(ctx: &Arc<SeriesCtx>, precision: u32) -> Self {
        SeriesPoly {
            ctx: ctx.clone(),
            precision,
            coeffs: Vec::new(),
        }
    }

    pub fn new(ctx: &Arc<SeriesCtx>, precision: u32, coeffs: Vec<TruncSeries>) -> Result<Self> {
        if coeffs
            .iter()
            .any(|c| c.precision() != precision || !super::same_ctx(c.ctx(), ctx))
        {
            return Err(Error::SeriesMismatch(
                "coefficient precision or context differs".into(),
            ));
        }
        let mut p = SeriesPoly {
            ctx: ctx.clone(),
            precision,
            coeffs,
        };
        p.trim();
        Ok(p)
    }

    /// Embeds a polynomial with rational coefficients as constant series.
    pub fn from_rat(ctx: &Arc<SeriesCtx>, precision: u32, p: &UniPoly<Rat>) -> Self {
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| TruncSeries::constant(ctx, precision, c))
            .collect();
        SeriesPoly {
            ctx: ctx.clone(),
            precision,
            coeffs,
        }
    }

    /// `Y^k`.
    pub fn y_pow(ctx: &Arc<SeriesCtx>, precision: u32, k: usize) -> Self {
        let mut coeffs = vec![TruncSeries::zero(ctx, precision); k];
        coeffs.push(TruncSeries::one(ctx, precision));
        SeriesPoly {
            ctx: ctx.clone(),
            precision,
            coeffs,
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(TruncSeries::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn ctx(&self) -> &Arc<SeriesCtx> {
        &self.ctx
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn coeffs(&self) -> &[TruncSeries] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> TruncSeries {
        self.coeffs
            .get(k)
            .cloned()
            .unwrap_or_else(|| TruncSeries::zero(&self.ctx, self.precision))
    }

    pub fn with_precision(&self, precision: u32) -> Self {
        let mut p = SeriesPoly {
            ctx: self.ctx.clone(),
            precision,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.with_precision(precision))
                .collect(),
        };
        p.trim();
        p
    }

    /// Constant terms of the coefficients, i.e. the specialization at the
    /// shift point.
    pub fn specialize(&self) -> UniPoly<Rat> {
        UniPoly::new(self.coeffs.iter().map(TruncSeries::constant_term).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.sub(b))
    }

    fn zip(&self, o: &Self, f: impl Fn(&TruncSeries, &TruncSeries) -> TruncSeries) -> Self {
        let prec = self.precision.min(o.precision);
        let n = self.coeffs.len().max(o.coeffs.len());
        let zero = TruncSeries::zero(&self.ctx, prec);
        let coeffs = (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).unwrap_or(&zero);
                let b = o.coeffs.get(k).unwrap_or(&zero);
                f(a, b)
            })
            .collect();
        let mut p = SeriesPoly {
            ctx: self.ctx.clone(),
            precision: prec,
            coeffs,
        };
        p.trim();
        p
    }

    pub fn scale(&self, c: &TruncSeries) -> Self {
        let prec = self.precision.min(c.precision());
        let mut p = SeriesPoly {
            ctx: self.ctx.clone(),
            precision: prec,
            coeffs: self.coeffs.iter().map(|a| a.mul_trunc(c, prec)).collect(),
        };
        p.trim();
        p
    }

    pub fn scale_rat(&self, c: &Rat) -> Self {
        let mut p = SeriesPoly {
            ctx: self.ctx.clone(),
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        };
        p.trim();
        p
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&Rat::from_int(k as i64)))
            .collect();
        let mut p = SeriesPoly {
            ctx: self.ctx.clone(),
            precision: self.precision,
            coeffs,
        };
        p.trim();
        p
    }

    /// Full product truncated at `precision`.
    pub fn mul_trunc(&self, o: &Self, precision: u32) -> Self {
        let prec = precision.min(self.precision).min(o.precision);
        if self.is_zero() || o.is_zero() {
            return SeriesPoly::zero(&self.ctx, prec);
        }
        let mut coeffs =
            vec![TruncSeries::zero(&self.ctx, prec); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul_trunc(b, prec));
            }
        }
        let mut p = SeriesPoly {
            ctx: self.ctx.clone(),
            precision: prec,
            coeffs,
        };
        p.trim();
        p
    }

    /// Remainder modulo a monic polynomial.
    pub fn rem_monic(&self, q: &SeriesPoly) -> Self {
        let d = q.degree().expect("nonzero modulus");
        let prec = self.precision.min(q.precision);
        let mut r: Vec<TruncSeries> = self.coeffs.iter().map(|c| c.with_precision(prec)).collect();
        let qc: Vec<TruncSeries> = q.coeffs.iter().map(|c| c.with_precision(prec)).collect();
        while r.len() > d {
            let lead = r.pop().expect("nonempty");
            if lead.is_zero() {
                continue;
            }
            let base = r.len() - d;
            for (i, qi) in qc.iter().take(d).enumerate() {
                if !qi.is_zero() {
                    r[base + i] = r[base + i].sub(&lead.mul_trunc(qi, prec));
                }
            }
        }
        let mut p = SeriesPoly {
            ctx: self.ctx.clone(),
            precision: prec,
            coeffs: r,
        };
        p.trim();
        p
    }

    pub fn mul_mod(&self, o: &Self, q: &SeriesPoly, precision: u32) -> Self {
        self.mul_trunc(o, precision).rem_monic(q)
    }
}
