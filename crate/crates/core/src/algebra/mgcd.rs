//! Multivariate polynomial gcd by content/primitive-part recursion.

use super::monomial::ExpVec;
use super::rat::Rat;
use super::sparse::SparsePoly;

/// Greatest common divisor over the rationals, returned integer-primitive
/// with positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    assert_eq!(a.nvars(), b.nvars(), "ambient mismatch");
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    let ma = a.monomial_gcd();
    let mb = b.monomial_gcd();
    let m = ma.meet(&mb);
    let a = strip_monomial(a, &ma);
    let b = strip_monomial(b, &mb);
    let core = gcd_monomial_free(&a, &b);
    core.mul_monomial(&m, &Rat::one()).primitive()
}

fn strip_monomial(p: &SparsePoly, m: &ExpVec) -> SparsePoly {
    if m.is_zero() {
        p.primitive()
    } else {
        SparsePoly::from_terms(
            p.nvars(),
            p.terms()
                .map(|(e, c)| (e.checked_sub(m).expect("monomial gcd divides"), c.clone())),
        )
        .primitive()
    }
}

/// Gcd of two nonzero, integer-primitive polynomials without monomial
/// factors.
fn gcd_monomial_free(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    let n = a.nvars();
    if a.is_constant() || b.is_constant() {
        return SparsePoly::one(n);
    }
    if a == b {
        return a.clone();
    }
    let (small, big) = if a.num_terms() <= b.num_terms() {
        (a, b)
    } else {
        (b, a)
    };
    if let Ok(Some(_)) = big.div_exact(small) {
        return small.clone();
    }
    let va = a.variables();
    let vb = b.variables();
    let v = *va.iter().chain(&vb).min().expect("nonconstant");
    let a_has = va.contains(&v);
    let b_has = vb.contains(&v);
    if !a_has {
        return gcd(a, &content_in(b, v));
    }
    if !b_has {
        return gcd(&content_in(a, v), b);
    }
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let pa = a.div_exact(&ca).ok().flatten().expect("content divides");
    let pb = b.div_exact(&cb).ok().flatten().expect("content divides");
    let c = gcd(&ca, &cb);
    let g = primitive_prs(&pa, &pb, v);
    (&c * &g).primitive()
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `var`.
pub fn content_in(p: &SparsePoly, var: usize) -> SparsePoly {
    let coeffs = p.to_univariate(var);
    let mut g = SparsePoly::zero(p.nvars());
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c);
        if g.is_constant() {
            return SparsePoly::one(p.nvars());
        }
    }
    g
}

fn primitive_part_in(p: &SparsePoly, var: usize) -> SparsePoly {
    let c = content_in(p, var);
    if c.is_constant() {
        p.primitive()
    } else {
        p.div_exact(&c)
            .ok()
            .flatten()
            .expect("content divides")
            .primitive()
    }
}

/// Pseudo-remainder of `a` by `b` in `var`, up to a nonzero factor free of
/// `var`.
fn pseudo_rem(a: &SparsePoly, b: &SparsePoly, var: usize) -> SparsePoly {
    let db = b.degree_in(var).unwrap_or(0);
    let bu = b.to_univariate(var);
    let lcb = bu[db as usize].clone();
    let mut r = a.clone();
    while let Some(dr) = r.degree_in(var).filter(|_| !r.is_zero()) {
        if dr < db {
            break;
        }
        let lcr = r.to_univariate(var).swap_remove(dr as usize);
        let mut shift = ExpVec::zero(a.nvars());
        shift.set(var, dr - db);
        let lhs = &lcb * &r;
        let rhs = (&lcr * b).mul_monomial(&shift, &Rat::one());
        r = (&lhs - &rhs).primitive();
    }
    r
}

fn primitive_prs(a: &SparsePoly, b: &SparsePoly, var: usize) -> SparsePoly {
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        let r = pseudo_rem(&a, &b, var);
        if r.is_zero() {
            return primitive_part_in(&b, var);
        }
        if r.degree_in(var).unwrap_or(0) == 0 {
            return SparsePoly::one(a.nvars());
        }
        a = b;
        b = primitive_part_in(&r, var);
    }
}
