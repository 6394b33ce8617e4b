//! Parametric resolutions, their projections, and the end-to-end
//! projection driver.

mod driver;
mod verify;

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::linalg::{solve, Matrix};
use crate::algebra::{Field, Rat, RatFun, SparsePoly, UniPoly};
use crate::error::{Error, Result};
use crate::pade::pade;
use crate::polytope::mixed_volume;
use crate::resolution::GeometricResolution;
use crate::series::lift::{extend_lift, newton_hensel_lift_with_capacity};
use crate::series::LiftedResolution;
use crate::supports::supports_of;
use crate::zerodim::{count_toric_roots, solve_toric_0d};

pub use driver::{
    q_projection, verify_result, Pins, ProjectionOutput, ProjectionProblem, ProjectionResult,
    Provenance,
};
pub use verify::{verify_parametric, verify_projected, VerificationReport};

/// What a resolution is checked against.
pub enum VerifyContext<'a> {
    /// The toric system it resolves.
    System(&'a [SparsePoly]),
    /// The resolution it was projected from.
    Parent(&'a GeometricResolution),
}

pub fn verify_resolution(res: &GeometricResolution, ctx: VerifyContext<'_>) -> VerificationReport {
    match ctx {
        VerifyContext::System(sys) => verify_parametric(sys, res),
        VerifyContext::Parent(parent) => verify_projected(parent, res),
    }
}

/// Tuning for the lift-and-reconstruct stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricConfig {
    pub seed: u64,
    /// Shift coordinates are drawn from `1..=bound`.
    pub bound: u32,
    /// Number of fresh shift points tried before giving up.
    pub retries: u32,
    /// Series precision; defaults to `2 · MV(S, Δ^(t))`.
    pub precision: Option<u32>,
    /// Padé degree bound; defaults to `MV(S, Δ^(t))`.
    pub degree_bound: Option<u32>,
    /// Attempt reconstruction after every Newton step and accept the first
    /// candidate that passes exact verification, instead of reconstructing
    /// once at the full precision.
    pub early_stop: bool,
}

impl Default for ParametricConfig {
    fn default() -> Self {
        ParametricConfig {
            seed: 0,
            bound: 100,
            retries: 5,
            precision: None,
            degree_bound: None,
            early_stop: false,
        }
    }
}

/// Details of the successful parametric attempt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricTrace {
    pub xi: Vec<Rat>,
    /// Precision at which the accepted reconstruction was made.
    pub precision_used: u32,
    pub precision_limit: u32,
    pub degree_bound: u32,
}

/// `MV(S, Δ^(t))` for the system restricted to the free and dependent
/// variables (free ones first).
pub fn parametric_degree_bound(
    system: &[SparsePoly],
    free_vars: &[usize],
    dependent_vars: &[usize],
) -> Result<u64> {
    let keep: Vec<usize> = free_vars.iter().chain(dependent_vars).copied().collect();
    let fam = supports_of(system)?
        .project(&keep)
        .with_simplices(free_vars.len());
    mixed_volume(&fam)
}

/// Geometric resolution of `V*(system)` over `Q(X_free)` associated to
/// the linear form `lambda` on the dependent variables.
///
/// A random shift point `ξ` is drawn, the specialized system is solved,
/// the solution is lifted to power series around `ξ` and its coefficients
/// are recovered by Padé approximation. Failures tied to `ξ` trigger a new
/// draw, up to `config.retries` times.
pub fn parametric_toric_geomres(
    system: &[SparsePoly],
    free_vars: &[usize],
    dependent_vars: &[usize],
    lambda: &[i64],
    config: &ParametricConfig,
) -> Result<(GeometricResolution, ParametricTrace)> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut last = None;
    for _ in 0..=config.retries {
        let xi = draw_point(&mut rng, free_vars.len(), config.bound);
        match parametric_attempt(
            system,
            free_vars,
            dependent_vars,
            lambda,
            &xi,
            config,
            &mut rng,
        ) {
            Ok(out) => return Ok(out),
            Err(e) if is_shift_failure(&e) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(Error::GenericityFailure {
        attempts: config.retries as usize + 1,
        last: last.map(|e| e.to_string()).unwrap_or_default(),
    })
}

/// Point with coordinates drawn from `1..=bound`.
pub fn draw_point(rng: &mut ChaCha8Rng, len: usize, bound: u32) -> Vec<Rat> {
    (0..len)
        .map(|_| Rat::from_int(rng.gen_range(1..=bound.max(1) as i64)))
        .collect()
}

/// Linear form with coefficients drawn from `-bound..=bound` without zero.
pub fn draw_form(rng: &mut ChaCha8Rng, len: usize, bound: u32) -> Vec<i64> {
    let b = bound.max(1) as i64;
    (0..len)
        .map(|_| loop {
            let x = rng.gen_range(-b..=b);
            if x != 0 {
                break x;
            }
        })
        .collect()
}

/// Errors that a different shift point may cure.
pub(crate) fn is_shift_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::SingularJacobian
            | Error::NoValidApproximant
            | Error::NonGenericInput(_)
            | Error::Verification(_)
    )
}

/// One attempt at a fixed shift point `xi`.
pub(crate) fn parametric_attempt(
    system: &[SparsePoly],
    free_vars: &[usize],
    dependent_vars: &[usize],
    lambda: &[i64],
    xi: &[Rat],
    config: &ParametricConfig,
    rng: &mut ChaCha8Rng,
) -> Result<(GeometricResolution, ParametricTrace)> {
    let n = system.first().map_or(0, SparsePoly::nvars);
    if free_vars.is_empty() {
        let res = solve_toric_0d(system, dependent_vars, lambda)?;
        let trace = ParametricTrace {
            xi: Vec::new(),
            precision_used: 0,
            precision_limit: 0,
            degree_bound: 0,
        };
        return Ok((res, trace));
    }
    let mv = parametric_degree_bound(system, free_vars, dependent_vars)?;
    let d_full = config
        .degree_bound
        .unwrap_or(u32::try_from(mv).map_err(|_| Error::Overflow("degree bound"))?);
    let kappa = config.precision.unwrap_or(2 * d_full);
    if kappa < 2 * d_full {
        return Err(Error::InvalidArgument(format!(
            "precision {kappa} is below twice the degree bound {d_full}"
        )));
    }

    let specialize = |point: &[Rat]| -> Vec<SparsePoly> {
        let bind: BTreeMap<usize, Rat> = free_vars
            .iter()
            .copied()
            .zip(point.iter().cloned())
            .collect();
        system.iter().map(|f| f.eval_partial(&bind)).collect()
    };
    let base = solve_toric_0d(&specialize(xi), dependent_vars, lambda)?;
    if base.multiplicity_warning {
        return Err(Error::NonGenericInput(
            "specialized system has multiple roots".into(),
        ));
    }
    // A second point detects shifts where some roots escaped the torus.
    let probe = draw_point(rng, free_vars.len(), config.bound);
    if count_toric_roots(&specialize(&probe), dependent_vars)? > base.degree() {
        return Err(Error::NonGenericInput(
            "shift point loses toric roots".into(),
        ));
    }
    let mut base = base;
    base.free_vars = Vec::new();

    let mut lifted = newton_hensel_lift_with_capacity(system, &base, free_vars, xi, 0, kappa)?;
    loop {
        let p = lifted.precision;
        let at_limit = p == kappa;
        if at_limit || (config.early_stop && p >= 3) {
            let d = if at_limit { d_full } else { d_full.min(p / 2) };
            match reconstruct(&lifted, d, n, free_vars, dependent_vars) {
                Ok(candidate) => {
                    if quick_check(system, &candidate, rng, config.bound)
                        && verify_parametric(system, &candidate).passed()
                    {
                        let trace = ParametricTrace {
                            xi: xi.to_vec(),
                            precision_used: p,
                            precision_limit: kappa,
                            degree_bound: d_full,
                        };
                        return Ok((candidate, trace));
                    }
                    if at_limit {
                        return Err(Error::Verification(
                            "reconstructed resolution fails the membership check".into(),
                        ));
                    }
                }
                Err(e) if at_limit => return Err(e),
                Err(Error::NoValidApproximant) => {}
                Err(e) => return Err(e),
            }
        }
        extend_lift(system, &mut lifted, (2 * p + 1).min(kappa))?;
    }
}

fn reconstruct(
    lifted: &LiftedResolution,
    d: u32,
    n: usize,
    free_vars: &[usize],
    dependent_vars: &[usize],
) -> Result<GeometricResolution> {
    let prec = 2 * d;
    let deg = lifted.degree();
    let convert = |p: &crate::series::SeriesPoly, len: usize| -> Result<UniPoly<RatFun>> {
        let coeffs = (0..len)
            .map(|k| pade(&p.coeff(k).with_precision(prec), d))
            .collect::<Result<Vec<_>>>()?;
        Ok(UniPoly::new(coeffs))
    };
    let mut q = convert(&lifted.q, deg)?;
    q = q.add(&UniPoly::monomial(RatFun::one(n), deg));
    let params = lifted
        .params
        .iter()
        .map(|v| convert(v, deg))
        .collect::<Result<Vec<_>>>()?;
    Ok(GeometricResolution {
        nvars: n,
        free_vars: free_vars.to_vec(),
        dependent_vars: dependent_vars.to_vec(),
        lambda: lifted.lambda.clone(),
        q,
        params,
        multiplicity_warning: false,
    })
}

/// Cheap necessary condition: the identities hold at a random rational
/// specialization of the free variables.
fn quick_check(
    system: &[SparsePoly],
    res: &GeometricResolution,
    rng: &mut ChaCha8Rng,
    bound: u32,
) -> bool {
    let point_free = draw_point(rng, res.free_vars.len(), bound.max(2) * 7 + 3);
    let mut point = vec![Rat::zero(); res.nvars];
    for (&v, x) in res.free_vars.iter().zip(&point_free) {
        point[v] = x.clone();
    }
    let at = |u: &UniPoly<RatFun>| -> Option<UniPoly<Rat>> {
        u.coeffs()
            .iter()
            .map(|c| c.eval(&point).ok())
            .collect::<Option<Vec<_>>>()
            .map(UniPoly::new)
    };
    let (Some(q), Some(params)) = (
        at(&res.q),
        res.params.iter().map(at).collect::<Option<Vec<_>>>(),
    ) else {
        // A pole at the sample point says nothing either way.
        return true;
    };
    if q.degree() != res.q.degree() {
        return true;
    }
    let bind: BTreeMap<usize, Rat> = res
        .free_vars
        .iter()
        .map(|&v| (v, point[v].clone()))
        .collect();
    system.iter().all(|f| {
        let g = f.eval_partial(&bind);
        let mut acc = UniPoly::zero();
        for (b, c) in g.split_by(&res.dependent_vars) {
            let mut term = UniPoly::constant(c.constant_term());
            for (j, &e) in b.iter().enumerate() {
                for _ in 0..e {
                    term = term.mul_mod(&params[j], &q).expect("nonzero modulus");
                }
            }
            acc = acc.add(&term);
        }
        acc.rem(&q).is_ok_and(|r| r.is_zero())
    })
}

/// Projects a resolution onto the dependent variables `keep`, using the
/// linear form `mu` on them.
///
/// With `p_μ = Σ μ_j w_j`, the degree `δ` of the projected minimal
/// polynomial is the rank of the powers `p_μ^k mod q`; the new `q_μ` and
/// parametrizations are read off exact linear systems in those powers.
pub fn geom_res_proj(
    res: &GeometricResolution,
    keep: &[usize],
    mu: &[i64],
) -> Result<GeometricResolution> {
    if keep.len() != mu.len() {
        return Err(Error::DimensionMismatch(
            "one coefficient of mu per projected variable".into(),
        ));
    }
    if keep.is_empty() {
        return Err(Error::InvalidArgument("nothing to project onto".into()));
    }
    let n = res.nvars;
    let one = RatFun::one(n);
    let mut p_mu = UniPoly::zero();
    let mut targets = Vec::with_capacity(keep.len());
    for (&v, &c) in keep.iter().zip(mu) {
        let w = res.param(v).ok_or_else(|| {
            Error::InvalidArgument(format!("X{} is not a dependent variable", v + 1))
        })?;
        p_mu = p_mu.add(&w.scale(&RatFun::constant(n, Rat::from_int(c))));
        targets.push(w.clone());
    }
    let d = res.degree();
    if d == 0 {
        return Ok(GeometricResolution {
            nvars: n,
            free_vars: res.free_vars.clone(),
            dependent_vars: keep.to_vec(),
            lambda: mu.to_vec(),
            q: UniPoly::constant(one),
            params: vec![UniPoly::zero(); keep.len()],
            multiplicity_warning: res.multiplicity_warning,
        });
    }
    let column = |u: &UniPoly<RatFun>| -> Vec<RatFun> {
        (0..d)
            .map(|k| u.coeff(k).cloned().unwrap_or_else(|| one.zero_like()))
            .collect()
    };
    let mut powers = vec![UniPoly::constant(one.clone())];
    let mut delta_solution = None;
    for k in 1..=d {
        let next = powers[k - 1].mul_mod(&p_mu, &res.q)?;
        let m: Matrix<RatFun> = (0..d)
            .map(|row| powers.iter().map(|p| column(p)[row].clone()).collect())
            .collect();
        if let Some(a) = solve(&m, &column(&next))? {
            delta_solution = Some(a);
            break;
        }
        powers.push(next);
    }
    let a = delta_solution.ok_or_else(|| {
        Error::Verification("powers of the projected form never became dependent".into())
    })?;
    let delta = powers.len();
    let mut qc: Vec<RatFun> = a.iter().map(|x| x.neg()).collect();
    qc.push(one.clone());
    let q_mu = UniPoly::new(qc);

    let m: Matrix<RatFun> = (0..d)
        .map(|row| powers.iter().map(|p| column(p)[row].clone()).collect())
        .collect();
    let mut params = Vec::with_capacity(keep.len());
    for w in &targets {
        let c = solve(&m, &column(w))?.ok_or(Error::MuNotPrimitive)?;
        params.push(UniPoly::new(c));
    }
    debug_assert_eq!(q_mu.degree(), Some(delta));
    Ok(GeometricResolution {
        nvars: n,
        free_vars: res.free_vars.clone(),
        dependent_vars: keep.to_vec(),
        lambda: mu.to_vec(),
        q: q_mu,
        params,
        multiplicity_warning: res.multiplicity_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::{parse_poly, parse_upoly_ratfun};

    fn worked_system() -> Vec<SparsePoly> {
        vec![
            parse_poly("2+3*X1*X2-X2*X3", 3).unwrap(),
            parse_poly("-1+2*X1^2*X2*X3+2*X2^2+X1*X2*X3", 3).unwrap(),
        ]
    }

    #[test]
    fn worked_parametric_resolution() {
        for early_stop in [false, true] {
            let cfg = ParametricConfig {
                early_stop,
                ..ParametricConfig::default()
            };
            let (res, trace) =
                parametric_toric_geomres(&worked_system(), &[0], &[1, 2], &[0, 1], &cfg).unwrap();
            assert_eq!(
                res.q,
                parse_upoly_ratfun(
                    "Y^2+((-12*X1^3-6*X1^2+6*X1)/(4*X1^2+2*X1-1))*Y+(-9*X1^2+8)/(4*X1^2+2*X1-1)",
                    3
                )
                .unwrap()
            );
            assert_eq!(
                res.params[0],
                parse_upoly_ratfun("(-X1^2-1/2*X1+1/4)*Y-3/4*X1", 3).unwrap()
            );
            assert_eq!(res.params[1], parse_upoly_ratfun("Y", 3).unwrap());
            assert_eq!(trace.precision_limit, 12);
            if !early_stop {
                assert_eq!(trace.precision_used, 12);
            }
        }
    }

    #[test]
    fn projection_with_constant_form() {
        let n = 3;
        let res = GeometricResolution {
            nvars: n,
            free_vars: vec![0],
            dependent_vars: vec![1, 2],
            lambda: vec![1, 0],
            q: parse_upoly_ratfun("Y^2-X1", n).unwrap(),
            params: vec![
                parse_upoly_ratfun("Y", n).unwrap(),
                parse_upoly_ratfun("X1", n).unwrap(),
            ],
            multiplicity_warning: false,
        };
        let proj = geom_res_proj(&res, &[2], &[1]).unwrap();
        assert_eq!(proj.q, parse_upoly_ratfun("Y-X1", n).unwrap());
        // Y and X1 agree modulo Y - X1.
        assert_eq!(
            proj.params[0].rem(&proj.q).unwrap(),
            parse_upoly_ratfun("Y", n).unwrap().rem(&proj.q).unwrap()
        );
        assert!(verify_projected(&res, &proj).passed());
    }

    #[test]
    fn identity_projection() {
        let (res, _) = parametric_toric_geomres(
            &worked_system(),
            &[0],
            &[1, 2],
            &[0, 1],
            &ParametricConfig::default(),
        )
        .unwrap();
        let proj = geom_res_proj(&res, &[1, 2], &[0, 1]).unwrap();
        assert_eq!(proj.q, res.q);
        assert_eq!(proj.params, res.params);
    }

    #[test]
    fn zero_free_variables_delegate() {
        let sys = vec![parse_poly("X1^2-2", 1).unwrap()];
        let (res, _) =
            parametric_toric_geomres(&sys, &[], &[0], &[1], &ParametricConfig::default()).unwrap();
        assert_eq!(res.q, parse_upoly_ratfun("Y^2-2", 1).unwrap());
    }
}
