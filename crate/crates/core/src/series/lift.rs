//! Global Newton–Hensel lifting of a geometric resolution at a parameter
//! point into one with truncated power series coefficients.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{Rat, SparsePoly, UniPoly};
use crate::error::{Error, Result};
use crate::resolution::GeometricResolution;

use super::{SeriesCtx, SeriesPoly, TruncSeries};

/// Geometric resolution whose coefficients are truncated power series in
/// the free variables around the shift point.
#[derive(Clone, Debug)]
pub struct LiftedResolution {
    pub lambda: Vec<i64>,
    pub free_vars: Vec<usize>,
    pub dependent_vars: Vec<usize>,
    /// Monic in `Y`.
    pub q: SeriesPoly,
    pub params: Vec<SeriesPoly>,
    pub precision: u32,
    det_inv: SeriesPoly,
    det_inv_precision: u32,
}

impl LiftedResolution {
    pub fn ctx(&self) -> &Arc<SeriesCtx> {
        self.q.ctx()
    }

    pub fn degree(&self) -> usize {
        self.q.degree().unwrap_or(0)
    }

    pub fn param(&self, var: usize) -> Option<&SeriesPoly> {
        self.dependent_vars
            .iter()
            .position(|&v| v == var)
            .map(|k| &self.params[k])
    }
}

/// A system polynomial split by its exponent in the dependent variables:
/// `f = Σ c_b(X_free) · X_dep^b`.
struct Split {
    parts: Vec<(Vec<u32>, SparsePoly)>,
}

impl Split {
    fn new(f: &SparsePoly, dependent: &[usize]) -> Split {
        Split {
            parts: f.split_by(dependent),
        }
    }
}

/// Products of the current parametrizations modulo `q`, memoized by
/// exponent vector.
struct Powers<'a> {
    params: &'a [SeriesPoly],
    q: &'a SeriesPoly,
    precision: u32,
    cache: HashMap<Vec<u32>, SeriesPoly>,
}

impl<'a> Powers<'a> {
    fn new(params: &'a [SeriesPoly], q: &'a SeriesPoly, precision: u32) -> Self {
        Powers {
            params,
            q,
            precision,
            cache: HashMap::new(),
        }
    }

    fn get(&mut self, e: &[u32]) -> SeriesPoly {
        if let Some(p) = self.cache.get(e) {
            return p.clone();
        }
        let ctx = self.q.ctx().clone();
        let value = match e.iter().position(|&x| x > 0) {
            None => SeriesPoly::y_pow(&ctx, self.precision, 0),
            Some(j) => {
                // Split the largest exponent in half for pure powers to keep
                // the recursion shallow.
                let mut a = e.to_vec();
                let total: u32 = e.iter().sum();
                if total > 1 && e.iter().filter(|&&x| x > 0).count() == 1 {
                    a[j] = e[j] / 2;
                    let mut b = e.to_vec();
                    b[j] = e[j] - a[j];
                    let pa = self.get(&a);
                    let pb = self.get(&b);
                    pa.mul_mod(&pb, self.q, self.precision)
                } else if total == 1 {
                    self.params[j].rem_monic(self.q)
                } else {
                    a[j] = 0;
                    let mut b = vec![0u32; e.len()];
                    b[j] = e[j];
                    let pa = self.get(&a);
                    let pb = self.get(&b);
                    pa.mul_mod(&pb, self.q, self.precision)
                }
            }
        };
        self.cache.insert(e.to_vec(), value.clone());
        value
    }

    /// `f(ξ + Z, params)` modulo `q`, truncated at `precision`.
    fn eval(&mut self, f: &Split, precision: u32) -> Result<SeriesPoly> {
        let ctx = self.q.ctx().clone();
        let mut acc = SeriesPoly::zero(&ctx, precision);
        for (dep, c) in &f.parts {
            let cs = TruncSeries::from_poly(&ctx, precision, c)?;
            let m = self.get(dep).with_precision(precision);
            acc = acc.add(&m.scale(&cs));
        }
        Ok(acc)
    }
}

fn determinant(m: &[Vec<SeriesPoly>], q: &SeriesPoly, prec: u32) -> SeriesPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let ctx = q.ctx();
    let mut acc = SeriesPoly::zero(ctx, prec);
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let minor = minor(m, 0, c);
        let term = m[0][c].mul_mod(&determinant(&minor, q, prec), q, prec);
        acc = if c % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

fn minor(m: &[Vec<SeriesPoly>], row: usize, col: usize) -> Vec<Vec<SeriesPoly>> {
    m.iter()
        .enumerate()
        .filter(|(i, _)| *i != row)
        .map(|(_, r)| {
            r.iter()
                .enumerate()
                .filter(|(j, _)| *j != col)
                .map(|(_, x)| x.clone())
                .collect()
        })
        .collect()
}

/// `adj[j][k]`, so that `adj · m = det · I`.
fn adjugate(m: &[Vec<SeriesPoly>], q: &SeriesPoly, prec: u32) -> Vec<Vec<SeriesPoly>> {
    let n = m.len();
    let ctx = q.ctx();
    if n == 1 {
        return vec![vec![SeriesPoly::y_pow(ctx, prec, 0)]];
    }
    (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    let d = determinant(&minor(m, k, j), q, prec);
                    if (j + k) % 2 == 0 {
                        d
                    } else {
                        SeriesPoly::zero(ctx, prec).sub(&d)
                    }
                })
                .collect()
        })
        .collect()
}

struct Lifter {
    system: Vec<Split>,
    jacobian: Vec<Vec<Split>>,
}

impl Lifter {
    fn new(system: &[SparsePoly], dependent: &[usize]) -> Self {
        let split = system.iter().map(|f| Split::new(f, dependent)).collect();
        let jacobian = system
            .iter()
            .map(|f| {
                dependent
                    .iter()
                    .map(|&v| Split::new(&f.derivative(v), dependent))
                    .collect()
            })
            .collect();
        Lifter {
            system: split,
            jacobian,
        }
    }

    fn check_residual(&self, powers: &mut Powers, upto: u32, prec: u32) -> Result<Vec<SeriesPoly>> {
        let mut out = Vec::with_capacity(self.system.len());
        for (k, f) in self.system.iter().enumerate() {
            let r = powers.eval(f, prec)?;
            for c in r.coeffs() {
                if c.valuation().is_some_and(|v| v <= upto) {
                    return Err(Error::Residual(format!(
                        "equation {} does not vanish through degree {upto}",
                        k + 1
                    )));
                }
            }
            out.push(r);
        }
        Ok(out)
    }

    /// One Newton step from precision `lr.precision` to `target`
    /// (at most `2p + 1`).
    fn step(&self, lr: &mut LiftedResolution, target: u32) -> Result<()> {
        let p = lr.precision;
        debug_assert!(target <= 2 * p + 1 && target > p);
        let q = lr.q.with_precision(target);
        let params: Vec<SeriesPoly> = lr.params.iter().map(|v| v.with_precision(target)).collect();
        let mut powers = Powers::new(&params, &q, target);
        let residual = self.check_residual(&mut powers, p, target)?;

        let q_low = q.with_precision(p);
        let jac: Vec<Vec<SeriesPoly>> = self
            .jacobian
            .iter()
            .map(|row| {
                row.iter()
                    .map(|f| powers.eval(f, p))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let det = determinant(&jac, &q_low, p);

        // Refine the inverse of the determinant to precision p.
        let one = SeriesPoly::y_pow(q.ctx(), p, 0);
        while lr.det_inv_precision < p {
            let np = (2 * lr.det_inv_precision + 1).min(p);
            let u = lr.det_inv.with_precision(np);
            let qn = q.with_precision(np);
            let e = one
                .with_precision(np)
                .sub(&det.with_precision(np).mul_mod(&u, &qn, np));
            lr.det_inv = u.add(&u.mul_mod(&e, &qn, np));
            lr.det_inv_precision = np;
        }
        let adj = adjugate(&jac, &q_low, p);
        let u = lr.det_inv.with_precision(target);

        let m = params.len();
        let mut updated = Vec::with_capacity(m);
        for j in 0..m {
            let mut w = SeriesPoly::zero(q.ctx(), target);
            for (k, r) in residual.iter().enumerate() {
                if !r.is_zero() && !adj[j][k].is_zero() {
                    w = w.add(&adj[j][k].with_precision(target).mul_mod(r, &q, target));
                }
            }
            let w = u.mul_mod(&w, &q, target);
            updated.push(params[j].sub(&w));
        }

        // Restore λ(params) = Y by moving the roots of q.
        let mut delta = SeriesPoly::y_pow(q.ctx(), target, 1);
        delta = SeriesPoly::zero(q.ctx(), target).sub(&delta);
        for (j, v) in updated.iter().enumerate() {
            delta = delta.add(&v.scale_rat(&Rat::from_int(lr.lambda[j])));
        }
        let new_q = q.sub(&delta.mul_mod(&q.derivative(), &q, target));
        let new_params: Vec<SeriesPoly> = updated
            .iter()
            .map(|v| v.sub(&delta.mul_mod(&v.derivative(), &q, target)))
            .collect();

        let d = lr.degree();
        if new_q.degree() != Some(d) || !is_one(&new_q.coeff(d)) {
            return Err(Error::Residual(
                "lifted minimal polynomial lost monicity".into(),
            ));
        }
        lr.q = new_q;
        lr.params = new_params;
        lr.precision = target;
        Ok(())
    }
}

fn is_one(s: &TruncSeries) -> bool {
    s.constant_term().is_one()
        && s.valuation() == Some(0)
        && s.coeffs().iter().skip(1).all(Rat::is_zero)
}

/// Lifts a resolution of `system` specialized at `X_free = xi` to a
/// resolution over power series in `X_free − xi` of precision `kappa`.
///
/// `base` must have rational coefficients. Every system polynomial is
/// checked to vanish modulo `q` through the current precision before each
/// step and once more at the end.
pub fn newton_hensel_lift(
    system: &[SparsePoly],
    base: &GeometricResolution,
    free_vars: &[usize],
    xi: &[Rat],
    kappa: u32,
) -> Result<LiftedResolution> {
    newton_hensel_lift_with_capacity(system, base, free_vars, xi, kappa, kappa)
}

/// As [`newton_hensel_lift`], with room to extend the lift later up to
/// precision `capacity` through [`extend_lift`].
pub fn newton_hensel_lift_with_capacity(
    system: &[SparsePoly],
    base: &GeometricResolution,
    free_vars: &[usize],
    xi: &[Rat],
    kappa: u32,
    capacity: u32,
) -> Result<LiftedResolution> {
    let nvars = base.nvars;
    if system.iter().any(|f| f.nvars() != nvars) {
        return Err(Error::DimensionMismatch(
            "system and resolution use different rings".into(),
        ));
    }
    if system.len() != base.dependent_vars.len() {
        return Err(Error::SquareFamilyRequired);
    }
    if free_vars.iter().any(|v| base.dependent_vars.contains(v)) {
        return Err(Error::InvalidArgument(
            "a variable is both free and dependent".into(),
        ));
    }
    let to_rat = |p: &UniPoly<crate::algebra::RatFun>| -> Result<UniPoly<Rat>> {
        let coeffs = p
            .coeffs()
            .iter()
            .map(|c| {
                c.as_constant().ok_or_else(|| {
                    Error::InvalidArgument("base resolution must have rational coefficients".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(UniPoly::new(coeffs))
    };
    let q0 = to_rat(&base.q)?;
    let params0: Vec<UniPoly<Rat>> = base.params.iter().map(to_rat).collect::<Result<_>>()?;

    let ctx = SeriesCtx::new(nvars, free_vars.to_vec(), xi.to_vec(), capacity.max(kappa))?;
    let lifter = Lifter::new(system, &base.dependent_vars);
    let q = SeriesPoly::from_rat(&ctx, 0, &q0);
    let params: Vec<SeriesPoly> = params0
        .iter()
        .map(|v| SeriesPoly::from_rat(&ctx, 0, v))
        .collect();

    // Inverse of the Jacobian determinant at the base point.
    let mut powers = Powers::new(&params, &q, 0);
    let jac: Vec<Vec<SeriesPoly>> = lifter
        .jacobian
        .iter()
        .map(|row| {
            row.iter()
                .map(|f| powers.eval(f, 0))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let det0 = determinant(&jac, &q, 0).specialize();
    let inv0 = if q0.degree() == Some(0) {
        UniPoly::zero()
    } else {
        det0.inv_mod(&q0)?.ok_or(Error::SingularJacobian)?
    };
    let det_inv = SeriesPoly::from_rat(&ctx, 0, &inv0);

    let mut lr = LiftedResolution {
        lambda: base.lambda.clone(),
        free_vars: free_vars.to_vec(),
        dependent_vars: base.dependent_vars.clone(),
        q,
        params,
        precision: 0,
        det_inv,
        det_inv_precision: 0,
    };
    continue_lift(system, &mut lr, kappa, &lifter)?;
    Ok(lr)
}

/// Raises the precision of an existing lift to `kappa`.
pub fn extend_lift(system: &[SparsePoly], lr: &mut LiftedResolution, kappa: u32) -> Result<()> {
    if kappa > lr.ctx().max_precision() {
        return Err(Error::InvalidArgument(format!(
            "precision {kappa} exceeds the series context limit {}",
            lr.ctx().max_precision()
        )));
    }
    let lifter = Lifter::new(system, &lr.dependent_vars);
    continue_lift(system, lr, kappa, &lifter)
}

fn continue_lift(
    _system: &[SparsePoly],
    lr: &mut LiftedResolution,
    kappa: u32,
    lifter: &Lifter,
) -> Result<()> {
    if lr.degree() == 0 {
        // No roots: nothing to lift.
        lr.q = lr.q.with_precision(kappa);
        lr.params = lr.params.iter().map(|v| v.with_precision(kappa)).collect();
        lr.precision = kappa;
        return Ok(());
    }
    while lr.precision < kappa {
        let target = (2 * lr.precision + 1).min(kappa);
        lifter.step(lr, target)?;
    }
    let mut powers = Powers::new(&lr.params, &lr.q, kappa);
    lifter.check_residual(&mut powers, kappa, kappa)?;
    Ok(())
}
