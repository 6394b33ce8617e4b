//! Rational reconstruction of truncated power series (Padé approximation).

use crate::algebra::linalg::{nullspace, Matrix};
use crate::algebra::{ExpVec, Rat, RatFun, SparsePoly, UniPoly};
use crate::error::{Error, Result};
use crate::series::TruncSeries;

fn check_precision(s: &TruncSeries, d: u32) -> Result<()> {
    if s.precision() < 2 * d {
        return Err(Error::InvalidArgument(format!(
            "precision {} is below twice the degree bound {d}",
            s.precision()
        )));
    }
    Ok(())
}

/// Turns polynomials in the shifted variables back into a normalized
/// rational function of the original ones.
fn unshift(s: &TruncSeries, num: SparsePoly, den: SparsePoly) -> Result<RatFun> {
    let ctx = s.ctx();
    let back: Vec<Rat> = ctx.shift().iter().map(|x| -x).collect();
    RatFun::new(
        num.translate(ctx.vars(), &back),
        den.translate(ctx.vars(), &back),
    )
}

/// Univariate Padé approximant `p/q` with `deg p, deg q ≤ d` and
/// `q(shift) ≠ 0`, by the extended Euclidean algorithm on `Z^{2d+1}` and
/// the truncated series, stopped at the first remainder of degree `≤ d`.
pub fn pade_univariate(s: &TruncSeries, d: u32) -> Result<RatFun> {
    if s.ctx().vars().len() != 1 {
        return Err(Error::InvalidArgument(
            "univariate reconstruction needs one series variable".into(),
        ));
    }
    check_precision(s, d)?;
    let n = 2 * d as usize + 1;
    let series = UniPoly::new((0..n as u32).map(|k| s.coeff_of(&[k])).collect());
    let modulus = UniPoly::monomial(Rat::one(), n);
    // Invariant: r_i ≡ t_i · s (mod Z^n).
    let (mut r0, mut r1) = (modulus.clone(), series.clone());
    let (mut t0, mut t1) = (UniPoly::<Rat>::zero(), UniPoly::constant(Rat::one()));
    while r1.degree().is_some_and(|k| k > d as usize) {
        let (quot, rem) = r0.divrem(&r1)?;
        let t2 = t0.sub(&quot.mul(&t1));
        r0 = std::mem::replace(&mut r1, rem);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let (mut p, mut q) = (r1, t1);
    // A common power of Z may be cancelled.
    while q.coeff(0).is_none_or(Rat::is_zero) && p.coeff(0).is_none_or(Rat::is_zero) && !q.is_zero()
    {
        p = UniPoly::new(p.coeffs().iter().skip(1).cloned().collect());
        q = UniPoly::new(q.coeffs().iter().skip(1).cloned().collect());
    }
    if q.coeff(0).is_none_or(Rat::is_zero) || q.degree().is_some_and(|k| k > d as usize) {
        return Err(Error::NoValidApproximant);
    }
    if !q
        .mul(&series)
        .sub(&p)
        .coeffs()
        .iter()
        .take(n)
        .all(Rat::is_zero)
    {
        return Err(Error::NoValidApproximant);
    }
    let ctx = s.ctx();
    let var = ctx.vars()[0];
    let nv = ctx.nvars();
    let lift = |u: &UniPoly<Rat>| {
        SparsePoly::from_univariate(
            nv,
            var,
            &u.coeffs()
                .iter()
                .map(|c| SparsePoly::constant(nv, c.clone()))
                .collect::<Vec<_>>(),
        )
    };
    unshift(s, lift(&p), lift(&q))
}

/// Multivariate Padé approximant: `p/q` with total degrees `≤ d`,
/// `q(shift) ≠ 0` and `p − q·s` vanishing through total degree `2d`.
///
/// The coefficients of `q` solve a homogeneous linear system (the
/// components of `q·s` of degrees `d+1..2d` must vanish); the degree of `q`
/// is raised until a solution with nonzero constant term exists.
pub fn pade_multivariate(s: &TruncSeries, d: u32) -> Result<RatFun> {
    check_precision(s, d)?;
    let ctx = s.ctx();
    let idx = ctx.index();
    let t = ctx.vars().len();
    let coeffs = s.coeffs();
    let rows_lo = idx.count(d);
    let rows_hi = idx.count(2 * d);
    for dq in 0..=d {
        let cols = idx.count(dq);
        let mut m: Matrix<Rat> = Vec::with_capacity(rows_hi - rows_lo);
        for g in rows_lo..rows_hi {
            let gamma = idx.exps(g);
            let row: Vec<Rat> = (0..cols)
                .map(|b| {
                    let beta = idx.exps(b);
                    if beta.iter().zip(gamma).all(|(x, y)| x <= y) {
                        let diff: Vec<u32> = gamma.iter().zip(beta).map(|(y, x)| y - x).collect();
                        coeffs[idx.position(&diff).expect("in range")].clone()
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            if row.iter().any(|x| !x.is_zero()) {
                m.push(row);
            }
        }
        let basis = nullspace(&m, cols, &Rat::one())?;
        let Some(qv) = basis.into_iter().find(|v| !v[0].is_zero()) else {
            continue;
        };
        // p = q·s truncated at degree d.
        let mut p = vec![Rat::zero(); rows_lo];
        for (b, qb) in qv.iter().enumerate() {
            if qb.is_zero() {
                continue;
            }
            let beta = idx.exps(b);
            for (a, sa) in coeffs
                .iter()
                .enumerate()
                .take(idx.count(d - idx.degree_of(b).min(d)))
            {
                if sa.is_zero() {
                    continue;
                }
                let sum: Vec<u32> = beta.iter().zip(idx.exps(a)).map(|(x, y)| x + y).collect();
                let k = idx.position(&sum).expect("in range");
                p[k] += &(qb * sa);
            }
        }
        let to_poly = |v: &[Rat]| {
            let mut out = SparsePoly::zero(ctx.nvars());
            for (k, c) in v.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let local = idx.exps(k);
                let mut e = vec![0u32; ctx.nvars()];
                for i in 0..t {
                    e[ctx.vars()[i]] = local[i];
                }
                out.add_term(ExpVec::new(e), c);
            }
            out
        };
        return unshift(s, to_poly(&p), to_poly(&qv));
    }
    Err(Error::NoValidApproximant)
}

/// Reconstruction through the univariate algorithm when there is one
/// series variable and the linear-system method otherwise.
pub fn pade(s: &TruncSeries, d: u32) -> Result<RatFun> {
    if s.ctx().vars().len() == 1 {
        pade_univariate(s, d)
    } else {
        pade_multivariate(s, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::{parse_poly, parse_ratfun};
    use crate::series::SeriesCtx;
    use std::sync::Arc;

    fn ctx(t: usize, shift: &[i64], k: u32) -> Arc<SeriesCtx> {
        SeriesCtx::new(
            t,
            (0..t).collect(),
            shift.iter().map(|&x| Rat::from_int(x)).collect(),
            k,
        )
        .unwrap()
    }

    /// Expands `f` around the context point by multiplying the numerator
    /// series with the inverse of the denominator series.
    fn expand(c: &Arc<SeriesCtx>, k: u32, f: &RatFun) -> TruncSeries {
        let n = TruncSeries::from_poly(c, k, f.num()).unwrap();
        let d = TruncSeries::from_poly(c, k, f.den()).unwrap();
        n.mul_trunc(&d.inv().unwrap(), k)
    }

    #[test]
    fn geometric_series() {
        let c = ctx(1, &[0], 6);
        let s = TruncSeries::from_poly(
            &c,
            6,
            &parse_poly("1+X1+X1^2+X1^3+X1^4+X1^5+X1^6", 1).unwrap(),
        )
        .unwrap();
        let want = parse_ratfun("1/(1-X1)", 1).unwrap();
        assert_eq!(pade_univariate(&s, 3).unwrap(), want);
        assert_eq!(pade_multivariate(&s, 3).unwrap(), want);
    }

    #[test]
    fn polynomial_series() {
        let c = ctx(1, &[2], 6);
        let f = parse_poly("X1^3-X1+5", 1).unwrap();
        let s = TruncSeries::from_poly(&c, 6, &f).unwrap();
        assert_eq!(
            pade_univariate(&s, 3).unwrap(),
            RatFun::from_poly(f.clone())
        );
        assert_eq!(pade_multivariate(&s, 3).unwrap(), RatFun::from_poly(f));
    }

    #[test]
    fn worked_coefficient() {
        let c = ctx(1, &[1], 12);
        let f = parse_ratfun("(-12*X1^3-6*X1^2+6*X1)/(4*X1^2+2*X1-1)", 1).unwrap();
        let s = expand(&c, 12, &f);
        assert_eq!(pade_univariate(&s, 6).unwrap(), f);
        assert_eq!(pade_multivariate(&s, 6).unwrap(), f);
    }

    #[test]
    fn two_variables() {
        let c = ctx(2, &[0, 0], 4);
        let f = parse_ratfun("1/(1-X1-X2)", 2).unwrap();
        assert_eq!(pade_multivariate(&expand(&c, 4, &f), 2).unwrap(), f);
        let c = ctx(2, &[3, -2], 8);
        let f = parse_ratfun("-5/(2*X1*X2)", 2).unwrap();
        assert_eq!(pade_multivariate(&expand(&c, 8, &f), 4).unwrap(), f);
        let k = TruncSeries::constant(&c, 8, &Rat::new(7, 3).unwrap());
        assert_eq!(
            pade_multivariate(&k, 4).unwrap(),
            RatFun::constant(2, Rat::new(7, 3).unwrap())
        );
    }

    #[test]
    fn insufficient_precision() {
        let c = ctx(1, &[0], 4);
        let s = TruncSeries::one(&c, 4);
        assert!(matches!(
            pade_univariate(&s, 3),
            Err(Error::InvalidArgument(_))
        ));
    }
}
