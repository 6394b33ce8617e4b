//! Exact membership checks for geometric resolutions.
//!
//! Identities over `Q(X_free)[Y]/q(Y)` are tested without rational function
//! arithmetic: with `c` a common denominator of the coefficients of `q`,
//! the substitution `Y = Y'/c` turns `c^D q(Y'/c)` into a monic polynomial
//! with polynomial coefficients, and every other polynomial in `Y` becomes
//! a polynomial in `Y'` over `Q[X]` after scaling by a nonzero factor.

use std::collections::HashMap;
use std::fmt;

use crate::algebra::mgcd::gcd;
use crate::algebra::{Field, Rat, RatFun, SparsePoly, UniPoly};
use crate::error::{Error, Result};
use crate::resolution::GeometricResolution;

type YPoly = Vec<SparsePoly>;

fn lcm(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    if b.is_constant() {
        return a.clone();
    }
    if a.is_constant() {
        return b.clone();
    }
    let g = gcd(a, b);
    (a * &b
        .div_exact(&g)
        .expect("exact division")
        .expect("gcd divides"))
        .primitive()
}

fn trim(mut p: YPoly) -> YPoly {
    while p.last().is_some_and(SparsePoly::is_zero) {
        p.pop();
    }
    p
}

/// Monic modulus `c^D q(Y'/c)` with polynomial coefficients.
pub(crate) struct Modulus {
    nvars: usize,
    c: SparsePoly,
    degree: usize,
    q: YPoly,
}

impl Modulus {
    pub(crate) fn new(q: &UniPoly<RatFun>, nvars: usize) -> Result<Self> {
        let d = q
            .degree()
            .ok_or_else(|| Error::Verification("zero minimal polynomial".into()))?;
        if !q.leading_coeff().is_some_and(|c| c.is_one()) {
            return Err(Error::Verification(
                "minimal polynomial is not monic".into(),
            ));
        }
        let mut c = SparsePoly::one(nvars);
        for k in 0..d {
            c = lcm(&c, q.coeffs()[k].den());
        }
        let qt = (0..=d)
            .map(|k| {
                if k == d {
                    return SparsePoly::one(nvars);
                }
                let r = &q.coeffs()[k];
                let scale = c.div_exact(r.den()).expect("exact").expect("lcm multiple");
                &(r.num() * &scale) * &c.pow((d - k - 1) as u32)
            })
            .collect();
        Ok(Modulus {
            nvars,
            c,
            degree: d,
            q: qt,
        })
    }

    /// `(U, e)` with `U(Y') = e · u(Y'/c)` polynomial and `e ≠ 0`.
    pub(crate) fn transform(&self, u: &UniPoly<RatFun>) -> (YPoly, SparsePoly) {
        let mut l = SparsePoly::one(self.nvars);
        for r in u.coeffs() {
            l = lcm(&l, r.den());
        }
        let m = u.degree().unwrap_or(0).max(self.degree.saturating_sub(1));
        let coeffs = u
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, r)| {
                if r.is_zero() {
                    return SparsePoly::zero(self.nvars);
                }
                let scale = l.div_exact(r.den()).expect("exact").expect("lcm multiple");
                &(r.num() * &scale) * &self.c.pow((m - k) as u32)
            })
            .collect();
        (trim(coeffs), &l * &self.c.pow(m as u32))
    }

    fn rem(&self, mut p: YPoly) -> YPoly {
        let d = self.degree;
        while p.len() > d {
            let lead = p.pop().expect("nonempty");
            if lead.is_zero() {
                continue;
            }
            let base = p.len() - d;
            for i in 0..d {
                if !self.q[i].is_zero() {
                    p[base + i] = &p[base + i] - &(&lead * &self.q[i]);
                }
            }
        }
        trim(p)
    }

    fn mul(&self, a: &YPoly, b: &YPoly) -> YPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![SparsePoly::zero(self.nvars); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    out[i + j] = &out[i + j] + &(x * y);
                }
            }
        }
        self.rem(out)
    }

    /// Whether `Σ_b coeff_b · Π subs_j^{b_j}` vanishes modulo `q`, where the
    /// coefficients lie in `Q[X]`.
    pub(crate) fn vanishes(
        &self,
        terms: &[(Vec<u32>, SparsePoly)],
        subs: &[UniPoly<RatFun>],
    ) -> bool {
        let transformed: Vec<(YPoly, SparsePoly)> =
            subs.iter().map(|u| self.transform(u)).collect();
        let m = subs.len();
        let top: Vec<u32> = (0..m)
            .map(|j| terms.iter().map(|(b, _)| b[j]).max().unwrap_or(0))
            .collect();
        let mut powers: HashMap<(usize, u32), YPoly> = HashMap::new();
        let mut power = |j: usize, k: u32| -> YPoly {
            if let Some(p) = powers.get(&(j, k)) {
                return p.clone();
            }
            let mut acc = vec![SparsePoly::one(self.nvars)];
            for _ in 0..k {
                acc = self.mul(&acc, &transformed[j].0);
            }
            powers.insert((j, k), acc.clone());
            acc
        };
        let mut total: YPoly = Vec::new();
        for (b, coeff) in terms {
            let mut scalar = coeff.clone();
            for ((t, (_, e)), &k) in top.iter().zip(&transformed).zip(b) {
                scalar = &scalar * &e.pow(t - k);
            }
            let mut acc = vec![scalar];
            for (j, &k) in b.iter().enumerate() {
                if k > 0 {
                    acc = self.mul(&acc, &power(j, k));
                }
            }
            let n = total.len().max(acc.len());
            total.resize(n, SparsePoly::zero(self.nvars));
            for (k, c) in acc.into_iter().enumerate() {
                total[k] = &total[k] + &c;
            }
        }
        self.rem(total).is_empty()
    }
}

/// [`Modulus::vanishes`] over `Q` when `q`, the substitutions and the term
/// coefficients are all constant; `None` otherwise. Reducing in `Q[Y]/q`
/// keeps coefficients small where the scaling by `c` would not.
fn vanishes_constant(
    q: &UniPoly<RatFun>,
    terms: &[(Vec<u32>, SparsePoly)],
    subs: &[UniPoly<RatFun>],
) -> Option<bool> {
    let constant = |u: &UniPoly<RatFun>| -> Option<UniPoly<Rat>> {
        u.coeffs()
            .iter()
            .map(RatFun::as_constant)
            .collect::<Option<Vec<_>>>()
            .map(UniPoly::new)
    };
    let q = constant(q)?;
    let subs: Vec<UniPoly<Rat>> = subs.iter().map(constant).collect::<Option<_>>()?;
    if terms.iter().any(|(_, c)| !c.is_constant()) {
        return None;
    }
    let constants: Vec<Rat> = terms.iter().map(|(_, c)| c.constant_term()).collect();
    if witnesses_nonzero(&q, terms, &constants, &subs) {
        return Some(false);
    }
    let mut powers: HashMap<(usize, u32), UniPoly<Rat>> = HashMap::new();
    let mut total = UniPoly::<Rat>::zero();
    for (b, coeff) in terms {
        let mut acc = UniPoly::constant(coeff.constant_term());
        for (j, &k) in b.iter().enumerate() {
            if k == 0 {
                continue;
            }
            for e in 1..=k {
                if !powers.contains_key(&(j, e)) {
                    let prev = if e == 1 {
                        UniPoly::constant(Rat::one())
                    } else {
                        powers[&(j, e - 1)].clone()
                    };
                    powers.insert((j, e), prev.mul_mod(&subs[j], &q).ok()?);
                }
            }
            acc = acc.mul_mod(&powers[&(j, k)], &q).ok()?;
        }
        total = total.add(&acc);
    }
    Some(total.rem(&q).ok()?.is_zero())
}

/// Reduction modulo a prime `p` not dividing any denominator commutes with
/// remainders by the monic `q`, so a nonzero image mod `p` proves the sum
/// nonzero over `Q`. A zero image proves nothing.
fn witnesses_nonzero(
    q: &UniPoly<Rat>,
    terms: &[(Vec<u32>, SparsePoly)],
    constants: &[Rat],
    subs: &[UniPoly<Rat>],
) -> bool {
    const PRIMES: [u64; 2] = [2_305_843_009_213_693_951, 4_611_686_018_427_387_847];
    PRIMES.iter().any(|&p| {
        let field = ModP(p);
        let reduce = |u: &UniPoly<Rat>| -> Option<Vec<u64>> {
            u.coeffs().iter().map(|c| field.of(c)).collect()
        };
        let (Some(q), Some(subs), Some(consts)) = (
            reduce(q),
            subs.iter().map(reduce).collect::<Option<Vec<_>>>(),
            constants
                .iter()
                .map(|c| field.of(c))
                .collect::<Option<Vec<_>>>(),
        ) else {
            return false;
        };
        let mut powers: HashMap<(usize, u32), Vec<u64>> = HashMap::new();
        let mut total = vec![0u64; q.len() - 1];
        for ((b, _), c) in terms.iter().zip(consts) {
            let mut acc = vec![c];
            for (j, &k) in b.iter().enumerate() {
                for e in 1..=k {
                    if !powers.contains_key(&(j, e)) {
                        let prev = if e == 1 {
                            vec![1]
                        } else {
                            powers[&(j, e - 1)].clone()
                        };
                        powers.insert((j, e), field.mul_mod(&prev, &subs[j], &q));
                    }
                }
                if k > 0 {
                    acc = field.mul_mod(&acc, &powers[&(j, k)], &q);
                }
            }
            for (t, a) in total.iter_mut().zip(field.rem(acc, &q)) {
                *t = field.add(*t, a);
            }
        }
        total.iter().any(|&t| t != 0)
    })
}

#[derive(Clone, Copy)]
struct ModP(u64);

impl ModP {
    fn of(self, r: &Rat) -> Option<u64> {
        let p = num_bigint::BigInt::from(self.0);
        let residue = |x: &num_bigint::BigInt| -> u64 {
            let m = x % &p;
            let m = if m.sign() == num_bigint::Sign::Minus {
                m + &p
            } else {
                m
            };
            u64::try_from(m).expect("reduced below p")
        };
        let den = residue(r.denom());
        (den != 0).then(|| self.mul(residue(r.numer()), self.pow(den, self.0 - 2)))
    }

    fn add(self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.0 as u128) as u64
    }

    fn mul(self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.0 as u128) as u64
    }

    fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Remainder by the monic `q` (coefficients in ascending order).
    fn rem(self, mut a: Vec<u64>, q: &[u64]) -> Vec<u64> {
        let d = q.len() - 1;
        while a.len() > d {
            let lead = a.pop().expect("nonempty");
            let shift = a.len() - d;
            for (i, &qi) in q[..d].iter().enumerate() {
                a[shift + i] = self.add(a[shift + i], self.0 - self.mul(lead, qi) % self.0);
            }
        }
        a.resize(d, 0);
        a
    }

    fn mul_mod(self, a: &[u64], b: &[u64], q: &[u64]) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut prod = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = self.add(prod[i + j], self.mul(x, y));
            }
        }
        self.rem(prod, q)
    }
}

/// Outcome of each identity checked by a verification.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<(String, bool)>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }

    pub fn failures(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|(_, ok)| !ok)
            .map(|(n, _)| n.as_str())
            .collect()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, ok) in &self.checks {
            writeln!(f, "{name}: {}", if *ok { "pass" } else { "FAIL" })?;
        }
        Ok(())
    }
}

/// Polynomial form of `den · u(Z)`, where `Z` stands for substitution slot
/// `slot` out of `slots`.
fn outer_terms(
    u: &UniPoly<RatFun>,
    nvars: usize,
    slot: usize,
    slots: usize,
) -> Vec<(Vec<u32>, SparsePoly)> {
    let mut l = SparsePoly::one(nvars);
    for r in u.coeffs() {
        l = lcm(&l, r.den());
    }
    u.coeffs()
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.is_zero())
        .map(|(k, r)| {
            let mut b = vec![0u32; slots];
            b[slot] = k as u32;
            (
                b,
                r.num() * &l.div_exact(r.den()).expect("exact").expect("lcm multiple"),
            )
        })
        .collect()
}

fn structural(res: &GeometricResolution, checks: &mut Vec<(String, bool)>) -> bool {
    let ok = res.check_invariants().is_ok();
    checks.push(("invariants".into(), ok));
    ok
}

/// Checks that every system polynomial vanishes on the parametrization
/// modulo `q`, that the linear form maps to `Y`, and the structural
/// invariants.
pub fn verify_parametric(system: &[SparsePoly], res: &GeometricResolution) -> VerificationReport {
    let mut checks = Vec::new();
    if !structural(res, &mut checks) {
        return VerificationReport { checks };
    }
    let n = res.nvars;
    let Ok(modulus) = Modulus::new(&res.q, n) else {
        checks.push(("modulus".into(), false));
        return VerificationReport { checks };
    };
    // λ(params) = Y exactly.
    let mut form = UniPoly::zero();
    for (l, v) in res.lambda.iter().zip(&res.params) {
        form = form.add(&v.scale(&RatFun::constant(n, crate::algebra::Rat::from_int(*l))));
    }
    let lambda_ok = form
        .sub(&UniPoly::var_like(&RatFun::one(n)))
        .rem(&res.q)
        .is_ok_and(|r| r.is_zero());
    checks.push(("linear form".into(), lambda_ok));
    for (k, f) in system.iter().enumerate() {
        let terms = f.split_by(&res.dependent_vars);
        let ok = vanishes_constant(&res.q, &terms, &res.params)
            .unwrap_or_else(|| modulus.vanishes(&terms, &res.params));
        checks.push((format!("f{}", k + 1), ok));
    }
    VerificationReport { checks }
}

/// Checks a projected resolution against its parent: `q_μ(p_μ(Y)) ≡ 0`
/// and `v_j(p_μ(Y)) ≡ w_j(Y)` modulo the parent's `q`, where `p_μ` is the
/// image of the projected linear form.
pub fn verify_projected(
    parent: &GeometricResolution,
    projected: &GeometricResolution,
) -> VerificationReport {
    let mut checks = Vec::new();
    if !structural(projected, &mut checks) {
        return VerificationReport { checks };
    }
    let n = parent.nvars;
    let Ok(modulus) = Modulus::new(&parent.q, n) else {
        checks.push(("modulus".into(), false));
        return VerificationReport { checks };
    };
    let mut p_mu = UniPoly::zero();
    let mut ok_vars = true;
    for (&v, &c) in projected.dependent_vars.iter().zip(&projected.lambda) {
        match parent.param(v) {
            Some(w) => {
                p_mu = p_mu.add(&w.scale(&RatFun::constant(n, crate::algebra::Rat::from_int(c))))
            }
            None => ok_vars = false,
        }
    }
    checks.push(("projected variables".into(), ok_vars));
    if !ok_vars {
        return VerificationReport { checks };
    }
    let q_terms = outer_terms(&projected.q, n, 0, 1);
    checks.push((
        "q_mu(p_mu)".into(),
        vanishes_constant(&parent.q, &q_terms, std::slice::from_ref(&p_mu))
            .unwrap_or_else(|| modulus.vanishes(&q_terms, std::slice::from_ref(&p_mu))),
    ));
    for (k, &v) in projected.dependent_vars.iter().enumerate() {
        let w = parent.param(v).expect("checked above");
        let mut terms = outer_terms(&projected.params[k], n, 0, 2);
        // Subtract den · Z_2, with Z_2 standing for w.
        let mut den = SparsePoly::one(n);
        for r in projected.params[k].coeffs() {
            den = lcm(&den, r.den());
        }
        terms.push((vec![0, 1], -&den));
        let subs = [p_mu.clone(), w.clone()];
        let ok = vanishes_constant(&parent.q, &terms, &subs)
            .unwrap_or_else(|| modulus.vanishes(&terms, &subs));
        checks.push((format!("X{}", v + 1), ok));
    }
    VerificationReport { checks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::{parse_poly, parse_upoly_ratfun};

    pub(crate) fn worked_resolution() -> (Vec<SparsePoly>, GeometricResolution) {
        let sys = vec![
            parse_poly("2+3*X1*X2-X2*X3", 3).unwrap(),
            parse_poly("-1+2*X1^2*X2*X3+2*X2^2+X1*X2*X3", 3).unwrap(),
        ];
        let res = GeometricResolution {
            nvars: 3,
            free_vars: vec![0],
            dependent_vars: vec![1, 2],
            lambda: vec![0, 1],
            q: parse_upoly_ratfun(
                "Y^2+((-12*X1^3-6*X1^2+6*X1)/(4*X1^2+2*X1-1))*Y+(-9*X1^2+8)/(4*X1^2+2*X1-1)",
                3,
            )
            .unwrap(),
            params: vec![
                parse_upoly_ratfun("(-X1^2-1/2*X1+1/4)*Y-3/4*X1", 3).unwrap(),
                parse_upoly_ratfun("Y", 3).unwrap(),
            ],
            multiplicity_warning: false,
        };
        (sys, res)
    }

    #[test]
    fn worked_resolution_passes() {
        let (sys, res) = worked_resolution();
        let report = verify_parametric(&sys, &res);
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn perturbed_coefficient_fails() {
        let (sys, mut res) = worked_resolution();
        res.q = parse_upoly_ratfun(
            "Y^2+((-12*X1^3-6*X1^2+6*X1)/(4*X1^2+2*X1-1))*Y+(-9*X1^2+9)/(4*X1^2+2*X1-1)",
            3,
        )
        .unwrap();
        let report = verify_parametric(&sys, &res);
        assert!(!report.passed());
        assert!(report.failures().contains(&"f1") || report.failures().contains(&"f2"));
    }

    #[test]
    fn identity_projection_passes() {
        let (_, res) = worked_resolution();
        let mut proj = res.clone();
        proj.dependent_vars = vec![2];
        proj.lambda = vec![1];
        proj.params = vec![res.params[1].clone()];
        assert!(verify_projected(&res, &proj).passed());
    }

    #[test]
    fn constant_resolutions_use_modular_filter() {
        let q = UniPoly::new(vec![Rat::new(-2, 9).unwrap(), Rat::zero(), Rat::one()]);
        let x = UniPoly::new(vec![Rat::zero(), Rat::from_int(3)]);
        let lift = |u: &UniPoly<Rat>| u.map(|c| RatFun::constant(1, c.clone()));
        let terms = |text: &str| parse_poly(text, 1).unwrap().split_by(&[0]);
        let zero = terms("X1^4-4");
        let nonzero = terms("X1^2-3");
        let consts = |t: &[(Vec<u32>, SparsePoly)]| -> Vec<Rat> {
            t.iter().map(|(_, c)| c.constant_term()).collect()
        };
        assert!(!witnesses_nonzero(
            &q,
            &zero,
            &consts(&zero),
            std::slice::from_ref(&x)
        ));
        assert!(witnesses_nonzero(
            &q,
            &nonzero,
            &consts(&nonzero),
            std::slice::from_ref(&x)
        ));
        assert_eq!(vanishes_constant(&lift(&q), &zero, &[lift(&x)]), Some(true));
        assert_eq!(
            vanishes_constant(&lift(&q), &nonzero, &[lift(&x)]),
            Some(false)
        );
    }
}
