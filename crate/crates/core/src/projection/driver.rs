use std::collections::BTreeMap;

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Rat, SparsePoly};
use crate::error::{Error, Result};
use crate::polytope::{mixed_volume, SupportFamily};
use crate::resolution::GeometricResolution;
use crate::supports::{supports_of, trans_basis};

use super::{
    draw_form, draw_point, geom_res_proj, is_shift_failure, parametric_attempt, verify_parametric,
    verify_projected, ParametricConfig, VerificationReport,
};

/// Random choices fixed by the caller instead of drawn.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Pins {
    /// Values of the specialized variables, in increasing variable order.
    pub b: Option<Vec<i64>>,
    /// Linear form on the dependent variables, one coefficient per ambient
    /// variable.
    pub lambda: Option<Vec<i64>>,
    /// Linear form on the projected dependent variables, one coefficient
    /// per ambient variable.
    pub mu: Option<Vec<i64>>,
    /// Shift point, one coordinate per free variable.
    pub xi: Option<Vec<Rat>>,
}

/// Input of the projection driver.
#[derive(Clone, Debug)]
pub struct ProjectionProblem {
    pub system: Vec<SparsePoly>,
    pub family: SupportFamily,
    /// Project onto `X_1..X_ell`.
    pub ell: usize,
    pub seed: u64,
    pub bound: u32,
    pub retry_limit: u32,
    pub precision: Option<u32>,
    pub degree_bound: Option<u32>,
    pub early_stop: bool,
    pub pins: Pins,
}

impl ProjectionProblem {
    /// Problem with the system's own supports and default settings.
    pub fn new(system: Vec<SparsePoly>, ell: usize) -> Result<Self> {
        let family = supports_of(&system)?;
        Ok(ProjectionProblem {
            system,
            family,
            ell,
            seed: 0,
            bound: 100,
            retry_limit: 5,
            precision: None,
            degree_bound: None,
            early_stop: false,
            pins: Pins::default(),
        })
    }
}

/// Record of every choice behind a result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub seed: u64,
    /// Variables ordered as free, projected dependent, specialized, other
    /// dependent (0-based original indices).
    pub order: Vec<usize>,
    pub b: Vec<i64>,
    pub xi: Vec<Rat>,
    /// Over the dependent variables.
    pub lambda: Vec<i64>,
    /// Over the projected variables.
    pub mu: Vec<i64>,
    /// Number of failed attempts before success.
    pub retries: u32,
    pub precision_used: u32,
    pub precision_limit: u32,
    pub degree_bound: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectionOutput {
    Resolution(GeometricResolution),
    /// The projection is dense: every free variable is projected.
    DenseImage,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionResult {
    pub free_vars: Vec<usize>,
    pub projected_vars: Vec<usize>,
    pub dependent_vars: Vec<usize>,
    pub specialized_vars: Vec<usize>,
    pub output: ProjectionOutput,
    /// The parametric resolution the projection was computed from.
    pub parametric: Option<GeometricResolution>,
    /// `MV(A, Δ^(n−r))`, an upper bound for the projected degree.
    pub mv_bound: u64,
    pub provenance: Provenance,
}

impl ProjectionResult {
    pub fn resolution(&self) -> Option<&GeometricResolution> {
        match &self.output {
            ProjectionOutput::Resolution(r) => Some(r),
            ProjectionOutput::DenseImage => None,
        }
    }
}

fn restrict(form: &[i64], vars: &[usize], n: usize, what: &str) -> Result<Vec<i64>> {
    if form.len() != n {
        return Err(Error::InvalidArgument(format!(
            "{what} needs one coefficient per variable"
        )));
    }
    if form
        .iter()
        .enumerate()
        .any(|(v, &c)| c != 0 && !vars.contains(&v))
    {
        return Err(Error::InvalidArgument(format!(
            "{what} involves variables outside its range"
        )));
    }
    Ok(vars.iter().map(|&v| form[v]).collect())
}

fn validate(problem: &ProjectionProblem) -> Result<(usize, usize)> {
    let r = problem.system.len();
    let n = problem.family.ambient_dim();
    if problem.system.iter().any(|f| f.nvars() != n) {
        return Err(Error::DimensionMismatch(
            "system and support family use different rings".into(),
        ));
    }
    if problem.family.len() != r {
        return Err(Error::DimensionMismatch("one support per equation".into()));
    }
    if r > n || problem.ell == 0 || problem.ell >= n {
        return Err(Error::InvalidArgument(format!(
            "need r <= n and 1 <= ell < n (r={r}, n={n}, ell={})",
            problem.ell
        )));
    }
    for (f, s) in problem.system.iter().zip(problem.family.members()) {
        for (e, _) in f.terms() {
            let p: Vec<i64> = e.as_slice().iter().map(|&x| x as i64).collect();
            if !s.contains(&p) {
                return Err(Error::InvalidArgument(
                    "a monomial lies outside its support".into(),
                ));
            }
        }
    }
    Ok((n, r))
}

/// End-to-end projection: chooses free variables, specializes the
/// remaining parameters, computes a parametric resolution and projects it
/// onto `X_1..X_ell`. Every failure that a new random choice may cure
/// triggers a fresh draw of the offending vector, at most
/// `retry_limit` times in total.
pub fn q_projection(problem: &ProjectionProblem) -> Result<ProjectionResult> {
    let (n, r) = validate(problem)?;
    let ell = problem.ell;
    let basis = trans_basis(&problem.family)?.indices;
    let free_vars: Vec<usize> = basis.iter().copied().filter(|&v| v < ell).collect();
    let specialized_vars: Vec<usize> = basis.iter().copied().filter(|&v| v >= ell).collect();
    let dependent_vars: Vec<usize> = (0..n).filter(|v| !basis.contains(v)).collect();
    let projected_vars: Vec<usize> = dependent_vars
        .iter()
        .copied()
        .filter(|&v| v < ell)
        .collect();
    let mut order = free_vars.clone();
    order.extend(&projected_vars);
    order.extend(&specialized_vars);
    order.extend(dependent_vars.iter().filter(|&&v| v >= ell));

    let mv_bound = mixed_volume(&problem.family.clone().with_simplices(n - r))?;
    let mut rng = ChaCha8Rng::seed_from_u64(problem.seed);
    let bound = problem.bound;
    let pins = &problem.pins;

    let mut b: Vec<i64> = match &pins.b {
        Some(b) if b.len() != specialized_vars.len() => {
            return Err(Error::InvalidArgument(format!(
                "expected {} specialization values",
                specialized_vars.len()
            )))
        }
        Some(b) => b.clone(),
        None => draw_int_point(&mut rng, specialized_vars.len(), bound),
    };
    if b.contains(&0) {
        return Err(Error::InvalidArgument(
            "specialization values must be nonzero".into(),
        ));
    }
    let mut lambda = match &pins.lambda {
        Some(l) => restrict(l, &dependent_vars, n, "lambda")?,
        None => draw_form(&mut rng, dependent_vars.len(), bound),
    };
    let mut mu = match &pins.mu {
        Some(m) => restrict(m, &projected_vars, n, "mu")?,
        None => draw_form(&mut rng, projected_vars.len(), bound),
    };
    let mut xi = match &pins.xi {
        Some(x) if x.len() != free_vars.len() => {
            return Err(Error::InvalidArgument(format!(
                "expected {} shift coordinates",
                free_vars.len()
            )))
        }
        Some(x) => x.clone(),
        None => draw_point(&mut rng, free_vars.len(), bound),
    };

    let mut provenance = Provenance {
        seed: problem.seed,
        order,
        b: b.clone(),
        xi: Vec::new(),
        lambda: Vec::new(),
        mu: Vec::new(),
        retries: 0,
        precision_used: 0,
        precision_limit: 0,
        degree_bound: 0,
    };
    if projected_vars.is_empty() {
        return Ok(ProjectionResult {
            free_vars,
            projected_vars,
            dependent_vars,
            specialized_vars,
            output: ProjectionOutput::DenseImage,
            parametric: None,
            mv_bound,
            provenance,
        });
    }

    let config = ParametricConfig {
        seed: problem.seed,
        bound,
        retries: 0,
        precision: problem.precision,
        degree_bound: problem.degree_bound,
        early_stop: problem.early_stop,
    };
    let mut failures = 0u32;
    let fail = |e: Error, failures: &mut u32| -> Result<()> {
        *failures += 1;
        if *failures > problem.retry_limit {
            return Err(Error::GenericityFailure {
                attempts: *failures as usize,
                last: e.to_string(),
            });
        }
        Ok(())
    };
    loop {
        let bind: BTreeMap<usize, Rat> = specialized_vars
            .iter()
            .zip(&b)
            .map(|(&v, &x)| (v, Rat::from_int(x)))
            .collect();
        let system: Vec<SparsePoly> = problem
            .system
            .iter()
            .map(|f| f.eval_partial(&bind))
            .collect();
        let (parametric, trace) = match parametric_attempt(
            &system,
            &free_vars,
            &dependent_vars,
            &lambda,
            &xi,
            &config,
            &mut rng,
        ) {
            Ok(out) => out,
            Err(Error::LambdaNotSeparating) => {
                if pins.lambda.is_some() {
                    return Err(Error::LambdaNotSeparating);
                }
                fail(Error::LambdaNotSeparating, &mut failures)?;
                lambda = draw_form(&mut rng, dependent_vars.len(), bound);
                continue;
            }
            Err(e) if is_shift_failure(&e) => {
                if pins.xi.is_none() {
                    xi = draw_point(&mut rng, free_vars.len(), bound);
                } else if pins.b.is_none() {
                    b = draw_int_point(&mut rng, specialized_vars.len(), bound);
                } else {
                    return Err(e);
                }
                fail(e, &mut failures)?;
                continue;
            }
            Err(e) => return Err(e),
        };
        let projected = loop {
            match geom_res_proj(&parametric, &projected_vars, &mu) {
                Ok(p) => break p,
                Err(Error::MuNotPrimitive) if pins.mu.is_none() => {
                    fail(Error::MuNotPrimitive, &mut failures)?;
                    mu = draw_form(&mut rng, projected_vars.len(), bound);
                }
                Err(e) => return Err(e),
            }
        };
        let report = verify_projected(&parametric, &projected);
        if !report.passed() {
            return Err(Error::Verification(format!(
                "projected identities failed: {}",
                report.failures().join(", ")
            )));
        }
        if projected.degree() as u64 > mv_bound {
            return Err(Error::Verification(format!(
                "projected degree {} exceeds the mixed volume bound {mv_bound}",
                projected.degree()
            )));
        }
        provenance.b = b;
        provenance.xi = trace.xi;
        provenance.lambda = lambda;
        provenance.mu = mu;
        provenance.retries = failures;
        provenance.precision_used = trace.precision_used;
        provenance.precision_limit = trace.precision_limit;
        provenance.degree_bound = trace.degree_bound;
        return Ok(ProjectionResult {
            free_vars,
            projected_vars,
            dependent_vars,
            specialized_vars,
            output: ProjectionOutput::Resolution(projected),
            parametric: Some(parametric),
            mv_bound,
            provenance,
        });
    }
}

/// Audits a stored result against the system it was computed from: the
/// mixed volume bound, the parametric resolution against the specialized
/// system and the projected resolution against the parametric one.
pub fn verify_result(
    system: &[SparsePoly],
    family: &SupportFamily,
    stored: &ProjectionResult,
) -> Result<VerificationReport> {
    let n = family.ambient_dim();
    if stored.provenance.order.len() != n {
        return Err(Error::InvalidArgument(
            "the result and the system have different variable counts".into(),
        ));
    }
    if stored.specialized_vars.len() != stored.provenance.b.len() {
        return Err(Error::InvalidArgument(
            "specialized variables and values disagree".into(),
        ));
    }
    let mut checks: Vec<(String, bool)> = Vec::new();
    let mv = mixed_volume(
        &family
            .clone()
            .with_simplices(n.saturating_sub(system.len())),
    )?;
    checks.push(("mv_bound".into(), mv == stored.mv_bound));
    if let Some(parametric) = &stored.parametric {
        let bind: BTreeMap<usize, Rat> = stored
            .specialized_vars
            .iter()
            .zip(&stored.provenance.b)
            .map(|(&v, &x)| (v, Rat::from_int(x)))
            .collect();
        let specialized: Vec<SparsePoly> = system.iter().map(|f| f.eval_partial(&bind)).collect();
        let report = verify_parametric(&specialized, parametric);
        checks.extend(
            report
                .checks
                .into_iter()
                .map(|(name, ok)| (format!("parametric {name}"), ok)),
        );
    }
    match (&stored.output, &stored.parametric) {
        (ProjectionOutput::Resolution(res), Some(parametric)) => {
            let report = verify_projected(parametric, res);
            checks.extend(
                report
                    .checks
                    .into_iter()
                    .map(|(name, ok)| (format!("result {name}"), ok)),
            );
            checks.push(("result degree_bound".into(), res.degree() as u64 <= mv));
        }
        (ProjectionOutput::Resolution(_), None) => {
            return Err(Error::InvalidArgument(
                "a projected result needs its parametric resolution".into(),
            ));
        }
        (ProjectionOutput::DenseImage, _) => {}
    }
    Ok(VerificationReport { checks })
}

fn draw_int_point(rng: &mut ChaCha8Rng, len: usize, bound: u32) -> Vec<i64> {
    draw_point(rng, len, bound)
        .iter()
        .map(|x| x.to_i64().expect("small integer"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_poly;

    #[test]
    fn parabola_projects_densely() {
        let p = ProjectionProblem::new(vec![parse_poly("X2-X1^2", 2).unwrap()], 1).unwrap();
        let out = q_projection(&p).unwrap();
        assert_eq!(out.output, ProjectionOutput::DenseImage);
        assert_eq!(out.free_vars, vec![0]);
    }

    #[test]
    fn finitely_many_points() {
        let sys = vec![
            parse_poly("X1^2-2", 2).unwrap(),
            parse_poly("X2-X1-1", 2).unwrap(),
        ];
        let out = q_projection(&ProjectionProblem::new(sys, 1).unwrap()).unwrap();
        let res = out.resolution().unwrap();
        assert_eq!(res.degree(), 2);
        assert!(out.free_vars.is_empty());
    }

    #[test]
    fn determinism() {
        let sys = vec![
            parse_poly("2+3*X1*X2-X2*X3", 3).unwrap(),
            parse_poly("-1+2*X1^2*X2*X3+2*X2^2+X1*X2*X3", 3).unwrap(),
        ];
        let mut p = ProjectionProblem::new(sys, 2).unwrap();
        p.seed = 7;
        let a = q_projection(&p).unwrap();
        let b = q_projection(&p).unwrap();
        assert_eq!(a, b);
    }
}
