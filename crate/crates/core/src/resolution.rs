//! Geometric resolutions: a separating linear form, its minimal polynomial
//! and a parametrization of every dependent coordinate.

use crate::algebra::{Field, Rat, RatFun, UniPoly};
use crate::error::{Error, Result};

/// Geometric resolution over the field of rational functions in the free
/// variables.
///
/// All coefficients live in the ambient ring `Q(X1..Xn)` (with `n =
/// nvars`), but only the free variables occur in them. With no free
/// variables every coefficient is a rational constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometricResolution {
    pub nvars: usize,
    pub free_vars: Vec<usize>,
    pub dependent_vars: Vec<usize>,
    /// Coefficients of the linear form over `dependent_vars`.
    pub lambda: Vec<i64>,
    /// Monic, squarefree minimal polynomial of the linear form.
    pub q: UniPoly<RatFun>,
    /// `params[k]` parametrizes `dependent_vars[k]`, with degree below
    /// `deg q`.
    pub params: Vec<UniPoly<RatFun>>,
    /// Set when the input ideal was not radical and was replaced by its
    /// radical before solving.
    pub multiplicity_warning: bool,
}

impl GeometricResolution {
    pub fn degree(&self) -> usize {
        self.q.degree().unwrap_or(0)
    }

    pub fn param(&self, var: usize) -> Option<&UniPoly<RatFun>> {
        self.dependent_vars
            .iter()
            .position(|&v| v == var)
            .map(|k| &self.params[k])
    }

    /// Checks the structural invariants: `q` monic and squarefree, and every
    /// parametrization of degree below `deg q`.
    pub fn check_invariants(&self) -> Result<()> {
        if self.lambda.len() != self.dependent_vars.len()
            || self.params.len() != self.dependent_vars.len()
        {
            return Err(Error::DimensionMismatch(
                "resolution field lengths disagree".into(),
            ));
        }
        match self.q.leading_coeff() {
            Some(lc) if lc.is_one() => {}
            _ => {
                return Err(Error::Verification(
                    "minimal polynomial is not monic".into(),
                ))
            }
        }
        let d = self.degree();
        if self
            .params
            .iter()
            .any(|v| v.degree().is_some_and(|k| k >= d))
        {
            return Err(Error::Verification(
                "parametrization degree not below deg q".into(),
            ));
        }
        if d > 0 && !self.squarefree()? {
            return Err(Error::Verification(
                "minimal polynomial is not squarefree".into(),
            ));
        }
        Ok(())
    }

    /// A specialization of the free variables that keeps the degree and is
    /// squarefree proves `q` squarefree; the gcd over the function field is
    /// only computed when a few such points are inconclusive.
    fn squarefree(&self) -> Result<bool> {
        let d = self.degree();
        for k in 0..4usize {
            let mut point = vec![Rat::zero(); self.nvars];
            for (i, &v) in self.free_vars.iter().enumerate() {
                point[v] = Rat::from_int(PROBES[(i + 3 * k) % PROBES.len()] + k as i64);
            }
            let Some(coeffs) = self
                .q
                .coeffs()
                .iter()
                .map(|c| c.eval(&point).ok())
                .collect::<Option<Vec<_>>>()
            else {
                continue;
            };
            let qs = UniPoly::new(coeffs);
            if qs.degree() == Some(d) && qs.gcd(&qs.derivative())?.degree() == Some(0) {
                return Ok(true);
            }
        }
        Ok(self.q.gcd(&self.q.derivative())?.degree() == Some(0))
    }
}

const PROBES: [i64; 7] = [7, 11, 13, 17, 19, 23, 29];

pub(crate) fn lift_rat(p: &UniPoly<Rat>, nvars: usize) -> UniPoly<RatFun> {
    p.map(|c| RatFun::constant(nvars, c.clone()))
}
