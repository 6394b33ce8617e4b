//! Exact solving of square systems at their toric zeros.
//!
//! The ideal is saturated by the product of the unknowns through an extra
//! variable `T` with `T·X1···Xm − 1`, a Gröbner basis gives the quotient
//! algebra, and the minimal polynomial of the linear form acting on it
//! yields the resolution.

pub mod groebner;

use std::collections::HashMap;

use crate::algebra::linalg::{self, Matrix};
use crate::algebra::{Rat, SparsePoly, UniPoly};
use crate::error::{Error, Result};
use crate::resolution::{lift_rat, GeometricResolution};
use groebner::{groebner, normal_form, DPoly, Mon};

/// The finite-dimensional algebra `Q[X, T] / (f, T·ΠX − 1)`, made reduced.
pub struct ToricQuotient {
    basis: Vec<Mon>,
    /// `mult[i][r][c]`: coefficient of `basis[r]` in `x_i · basis[c]`; the
    /// last entry is for `T`.
    mult: Vec<Matrix<Rat>>,
    one: usize,
    /// True when the saturated ideal had to be replaced by its radical.
    pub radicalized: bool,
}

impl ToricQuotient {
    /// Number of distinct toric roots.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn apply(m: &Matrix<Rat>, v: &[Rat]) -> Vec<Rat> {
        m.iter()
            .map(|row| {
                let mut s = Rat::zero();
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        s += &(a * b);
                    }
                }
                s
            })
            .collect()
    }

    fn unit(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); self.dim()];
        v[self.one] = Rat::one();
        v
    }

    /// Matrix of multiplication by `Σ λ_j X_j`.
    fn linear_form(&self, lambda: &[i64]) -> Matrix<Rat> {
        let n = self.dim();
        let mut m = vec![vec![Rat::zero(); n]; n];
        for (j, &l) in lambda.iter().enumerate() {
            if l == 0 {
                continue;
            }
            let c = Rat::from_int(l);
            for (r, row) in self.mult[j].iter().enumerate() {
                for (k, a) in row.iter().enumerate() {
                    if !a.is_zero() {
                        m[r][k] += &(a * &c);
                    }
                }
            }
        }
        m
    }

    /// Powers `1, u, u², …` of the element acting as `m`, as coordinate
    /// vectors, until the first linear dependency; returns the monic
    /// minimal polynomial and the independent powers.
    fn krylov(&self, m: &Matrix<Rat>) -> Result<(UniPoly<Rat>, Vec<Vec<Rat>>)> {
        let mut powers: Vec<Vec<Rat>> = vec![self.unit()];
        loop {
            let next = Self::apply(m, powers.last().expect("nonempty"));
            let cols: Matrix<Rat> = (0..self.dim())
                .map(|r| powers.iter().map(|p| p[r].clone()).collect())
                .collect();
            if let Some(c) = linalg::solve(&cols, &next)? {
                let mut coeffs: Vec<Rat> = c.iter().map(|x| -x).collect();
                coeffs.push(Rat::one());
                return Ok((UniPoly::new(coeffs), powers));
            }
            powers.push(next);
        }
    }
}

fn pure_power_var(m: &Mon) -> Option<usize> {
    let nz: Vec<usize> = (0..m.0.len()).filter(|&i| m.0[i] > 0).collect();
    (nz.len() == 1).then(|| nz[0])
}

fn standard_monomials(gb: &[DPoly], n: usize) -> Vec<Mon> {
    let mut out = vec![Mon::one(n)];
    let mut frontier = vec![Mon::one(n)];
    let mut seen: std::collections::HashSet<Mon> = out.iter().cloned().collect();
    while let Some(m) = frontier.pop() {
        for i in 0..n {
            let next = m.mul(&Mon::var(n, i));
            if seen.contains(&next) || gb.iter().any(|g| g.lm().divides(&next)) {
                continue;
            }
            seen.insert(next.clone());
            out.push(next.clone());
            frontier.push(next);
        }
    }
    out.sort();
    out
}

/// Builds the reduced toric quotient of a square system in the unknowns
/// `vars` (0-based ambient indices; other variables must not occur).
pub fn toric_quotient(system: &[SparsePoly], vars: &[usize]) -> Result<ToricQuotient> {
    if system.len() != vars.len() {
        return Err(Error::SquareFamilyRequired);
    }
    for p in system {
        if let Some(v) = p.variables().into_iter().find(|v| !vars.contains(v)) {
            return Err(Error::InvalidArgument(format!(
                "X{} is not an unknown of the system",
                v + 1
            )));
        }
    }
    let m = vars.len();
    let n = m + 1;
    let mut gens: Vec<DPoly> = system
        .iter()
        .map(|p| DPoly::from_sparse(p, vars, 1))
        .collect();
    let mut sat = vec![(Mon(vec![1; n]), Rat::one()), (Mon::one(n), -Rat::one())];
    sat.sort_by(|a, b| b.0.cmp(&a.0));
    gens.push(DPoly { terms: sat });

    let mut radicalized = false;
    loop {
        let gb = groebner(&gens);
        if gb.len() == 1 && gb[0].lm().degree() == 0 {
            return Ok(ToricQuotient {
                basis: Vec::new(),
                mult: vec![Vec::new(); n],
                one: 0,
                radicalized,
            });
        }
        for i in 0..n {
            if !gb.iter().any(|g| pure_power_var(g.lm()) == Some(i)) {
                return Err(Error::NonGenericInput(
                    "the toric solution set is not zero-dimensional".into(),
                ));
            }
        }
        let basis = standard_monomials(&gb, n);
        let index: HashMap<Mon, usize> = basis
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, b)| (b, i))
            .collect();
        let dim = basis.len();
        let mut mult = Vec::with_capacity(n);
        for i in 0..n {
            let xi = Mon::var(n, i);
            let mut mat = vec![vec![Rat::zero(); dim]; dim];
            for (c, b) in basis.iter().enumerate() {
                let prod = DPoly {
                    terms: vec![(b.mul(&xi), Rat::one())],
                };
                for (mon, coef) in normal_form(&prod, &gb).terms {
                    mat[index[&mon]][c] = coef;
                }
            }
            mult.push(mat);
        }
        let tq = ToricQuotient {
            basis,
            mult,
            one: 0,
            radicalized,
        };

        // Seidenberg: the ideal is radical once every variable has a
        // squarefree univariate member; otherwise add the squarefree parts.
        let mut added = false;
        for i in 0..n {
            let (mp, _) = tq.krylov(&tq.mult[i])?;
            let sf = mp.squarefree_part()?;
            if sf.degree() != mp.degree() {
                let terms: Vec<(Mon, Rat)> = sf
                    .coeffs()
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| {
                        let mut e = vec![0u32; n];
                        e[i] = k as u32;
                        (Mon(e), c.clone())
                    })
                    .collect();
                gens.push(DPoly { terms });
                added = true;
            }
        }
        if !added {
            return Ok(tq);
        }
        radicalized = true;
    }
}

/// Univariate resolution with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatResolution {
    pub q: UniPoly<Rat>,
    pub params: Vec<UniPoly<Rat>>,
    pub multiplicity_warning: bool,
}

/// Resolution of the toric zeros of a square system with respect to the
/// linear form `Σ lambda[k]·X_{vars[k]}`.
pub fn solve_toric_0d_rat(
    system: &[SparsePoly],
    vars: &[usize],
    lambda: &[i64],
) -> Result<RatResolution> {
    if lambda.len() != vars.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} form coefficients for {} unknowns",
            lambda.len(),
            vars.len()
        )));
    }
    let tq = toric_quotient(system, vars)?;
    let dim = tq.dim();
    if dim == 0 {
        return Ok(RatResolution {
            q: UniPoly::constant(Rat::one()),
            params: vec![UniPoly::zero(); vars.len()],
            multiplicity_warning: tq.radicalized,
        });
    }
    let ml = tq.linear_form(lambda);
    let (q, powers) = tq.krylov(&ml)?;
    if powers.len() < dim {
        return Err(Error::LambdaNotSeparating);
    }
    let cols: Matrix<Rat> = (0..dim)
        .map(|r| powers.iter().map(|p| p[r].clone()).collect())
        .collect();
    let mut params = Vec::with_capacity(vars.len());
    for j in 0..vars.len() {
        let xj = ToricQuotient::apply(&tq.mult[j], &tq.unit());
        let c = linalg::solve(&cols, &xj)?.ok_or(Error::LambdaNotSeparating)?;
        params.push(UniPoly::new(c));
    }
    Ok(RatResolution {
        q,
        params,
        multiplicity_warning: tq.radicalized,
    })
}

/// [`solve_toric_0d_rat`] packaged as a resolution with no free variables.
pub fn solve_toric_0d(
    system: &[SparsePoly],
    vars: &[usize],
    lambda: &[i64],
) -> Result<GeometricResolution> {
    let nvars = system.first().map_or(0, SparsePoly::nvars);
    let r = solve_toric_0d_rat(system, vars, lambda)?;
    Ok(GeometricResolution {
        nvars,
        free_vars: Vec::new(),
        dependent_vars: vars.to_vec(),
        lambda: lambda.to_vec(),
        q: lift_rat(&r.q, nvars),
        params: r.params.iter().map(|p| lift_rat(p, nvars)).collect(),
        multiplicity_warning: r.multiplicity_warning,
    })
}

/// Number of distinct zeros of the square system with all coordinates
/// nonzero.
pub fn count_toric_roots(system: &[SparsePoly], vars: &[usize]) -> Result<usize> {
    Ok(toric_quotient(system, vars)?.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::{parse_poly, parse_upoly_rat};

    fn sys(polys: &[&str], n: usize) -> Vec<SparsePoly> {
        polys.iter().map(|s| parse_poly(s, n).unwrap()).collect()
    }

    #[test]
    fn specialized_worked_system() {
        // Unknowns X2, X3 after fixing X1 = 1.
        let s = sys(&["2+3*X2-X2*X3", "-1+3*X2*X3+2*X2^2"], 3);
        let r = solve_toric_0d_rat(&s, &[1, 2], &[0, 1]).unwrap();
        assert_eq!(r.q, parse_upoly_rat("Y^2-12/5*Y-1/5").unwrap());
        assert_eq!(r.params[0], parse_upoly_rat("-5/4*Y-3/4").unwrap());
        assert_eq!(r.params[1], parse_upoly_rat("Y").unwrap());
        assert!(!r.multiplicity_warning);
        assert_eq!(count_toric_roots(&s, &[1, 2]).unwrap(), 2);
    }

    #[test]
    fn single_point() {
        let r = solve_toric_0d_rat(&sys(&["X1-2"], 1), &[0], &[1]).unwrap();
        assert_eq!(r.q, parse_upoly_rat("Y-2").unwrap());
        // X1 = Y reduced below deg q.
        assert_eq!(
            r.params[0],
            parse_upoly_rat("Y").unwrap().rem(&r.q).unwrap()
        );
        assert_eq!(r.params[0], parse_upoly_rat("2").unwrap());
    }

    #[test]
    fn two_toric_roots() {
        let r = solve_toric_0d_rat(&sys(&["X1^2-1"], 1), &[0], &[1]).unwrap();
        assert_eq!(r.q, parse_upoly_rat("Y^2-1").unwrap());
        assert_eq!(r.params[0], parse_upoly_rat("Y").unwrap());
    }

    #[test]
    fn root_at_origin_is_discarded() {
        let r = solve_toric_0d_rat(&sys(&["X1^2-X1"], 1), &[0], &[1]).unwrap();
        assert_eq!(r.q, parse_upoly_rat("Y-1").unwrap());
    }

    #[test]
    fn non_separating_form() {
        // Roots (1,2) and (2,1) collide under X1 + X2.
        let s = sys(&["X1+X2-3", "X1*X2-2"], 2);
        assert_eq!(
            solve_toric_0d_rat(&s, &[0, 1], &[1, 1]),
            Err(Error::LambdaNotSeparating)
        );
        assert!(solve_toric_0d_rat(&s, &[0, 1], &[1, 2]).is_ok());
    }

    #[test]
    fn double_root_sets_warning() {
        let r = solve_toric_0d_rat(&sys(&["X1^2-2*X1+1"], 1), &[0], &[1]).unwrap();
        assert_eq!(r.q, parse_upoly_rat("Y-1").unwrap());
        assert!(r.multiplicity_warning);
    }

    #[test]
    fn positive_dimensional_rejected() {
        let s = sys(&["X1-X2", "2*X1-2*X2"], 2);
        assert!(matches!(
            solve_toric_0d_rat(&s, &[0, 1], &[1, 2]),
            Err(Error::NonGenericInput(_))
        ));
    }

    #[test]
    fn no_toric_roots() {
        let r = solve_toric_0d_rat(&sys(&["X1"], 1), &[0], &[1]).unwrap();
        assert_eq!(r.q.degree(), Some(0));
    }
}
