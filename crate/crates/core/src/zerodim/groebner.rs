//! Buchberger's algorithm with the sugar selection strategy, in graded
//! reverse lexicographic order over the rationals.

use std::cmp::Ordering;

use crate::algebra::{Rat, SparsePoly};

/// Exponent vector compared in grevlex order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mon(pub Vec<u32>);

impl Mon {
    pub fn one(n: usize) -> Self {
        Mon(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Mon(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Mon) -> Mon {
        Mon(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Mon) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a <= b)
    }

    pub fn div(&self, o: &Mon) -> Mon {
        Mon(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, o: &Mon) -> Mon {
        Mon(self.0.iter().zip(&o.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, o: &Mon) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Mon {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            for (a, b) in self.0.iter().zip(&other.0).rev() {
                if a != b {
                    return b.cmp(a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Mon {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Distributed polynomial, terms sorted by decreasing monomial.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DPoly {
    pub terms: Vec<(Mon, Rat)>,
}

impl DPoly {
    pub fn from_sparse(p: &SparsePoly, vars: &[usize], extra: usize) -> DPoly {
        let n = vars.len() + extra;
        let mut terms: Vec<(Mon, Rat)> = p
            .terms()
            .map(|(e, c)| {
                let mut m = vec![0u32; n];
                for (k, &v) in vars.iter().enumerate() {
                    m[k] = e.get(v);
                }
                (Mon(m), c.clone())
            })
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        DPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Mon {
        &self.terms[0].0
    }

    pub fn degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(m, _)| m.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn monic(mut self) -> DPoly {
        if let Some((_, lc)) = self.terms.first() {
            if !lc.is_one() {
                let inv = lc.inv().expect("nonzero leading coefficient");
                for (_, c) in self.terms.iter_mut() {
                    *c *= &inv;
                }
            }
        }
        self
    }

    /// `self - c * m * other`.
    pub fn sub_mul(&self, c: &Rat, m: &Mon, other: &DPoly) -> DPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let mut i = 0;
        let mut j = 0;
        let shifted: Vec<(Mon, Rat)> = other
            .terms
            .iter()
            .map(|(om, oc)| (om.mul(m), oc * c))
            .collect();
        while i < self.terms.len() || j < shifted.len() {
            let ord = match (self.terms.get(i), shifted.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Greater,
                (None, Some(_)) => Ordering::Less,
                (None, None) => unreachable!(),
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push((shifted[j].0.clone(), -&shifted[j].1));
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &self.terms[i].1 - &shifted[j].1;
                    if !v.is_zero() {
                        out.push((self.terms[i].0.clone(), v));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        DPoly { terms: out }
    }
}

/// Full reduction of `p` modulo the monic polynomials `g`.
pub fn normal_form(p: &DPoly, g: &[DPoly]) -> DPoly {
    let mut rest = p.clone();
    let mut done: Vec<(Mon, Rat)> = Vec::new();
    while let Some((m, c)) = rest.terms.first().cloned() {
        match g.iter().find(|q| q.lm().divides(&m)) {
            Some(q) => rest = rest.sub_mul(&c, &m.div(q.lm()), q),
            None => {
                done.push((m, c));
                rest.terms.remove(0);
            }
        }
    }
    DPoly { terms: done }
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mon,
    sugar: u32,
}

fn spoly(a: &DPoly, b: &DPoly, lcm: &Mon) -> DPoly {
    let zero = DPoly { terms: Vec::new() };
    zero.sub_mul(&-Rat::one(), &lcm.div(a.lm()), a)
        .sub_mul(&Rat::one(), &lcm.div(b.lm()), b)
}

/// Reduced Gröbner basis (monic, sorted by increasing leading monomial) of
/// the ideal generated by `input`.
pub fn groebner(input: &[DPoly]) -> Vec<DPoly> {
    let mut basis: Vec<DPoly> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();

    fn add(
        h: DPoly,
        sugar: u32,
        basis: &mut Vec<DPoly>,
        sugars: &mut Vec<u32>,
        pairs: &mut Vec<Pair>,
    ) {
        let k = basis.len();
        for i in 0..k {
            let lcm = basis[i].lm().lcm(h.lm());
            let si = sugars[i] + lcm.degree() - basis[i].lm().degree();
            let sk = sugar + lcm.degree() - h.lm().degree();
            pairs.push(Pair {
                i,
                j: k,
                lcm,
                sugar: si.max(sk),
            });
        }
        basis.push(h);
        sugars.push(sugar);
    }

    for f in input {
        let h = normal_form(f, &basis);
        if !h.is_zero() {
            let h = h.monic();
            if h.lm().degree() == 0 {
                return vec![h];
            }
            add(h, f.degree(), &mut basis, &mut sugars, &mut pairs);
        }
    }

    while !pairs.is_empty() {
        let idx = (0..pairs.len())
            .min_by(|&a, &b| {
                pairs[a]
                    .sugar
                    .cmp(&pairs[b].sugar)
                    .then_with(|| pairs[a].lcm.cmp(&pairs[b].lcm))
            })
            .expect("nonempty");
        let Pair { i, j, lcm, sugar } = pairs.swap_remove(idx);
        if basis[i].lm().coprime(basis[j].lm()) {
            continue;
        }
        // Chain criterion, restricted to strictly smaller lcms so that
        // discarded pairs never justify each other.
        let pending = |a: usize, b: usize| pairs.iter().any(|p| p.i == a.min(b) && p.j == a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].lm().divides(&lcm)
                && basis[i].lm().lcm(basis[k].lm()) != lcm
                && basis[j].lm().lcm(basis[k].lm()) != lcm
                && !pending(i, k)
                && !pending(j, k)
        });
        if chain {
            continue;
        }
        let h = normal_form(&spoly(&basis[i], &basis[j], &lcm), &basis);
        if h.is_zero() {
            continue;
        }
        let h = h.monic();
        if h.lm().degree() == 0 {
            return vec![h];
        }
        add(h, sugar, &mut basis, &mut sugars, &mut pairs);
    }
    reduce_basis(basis)
}

fn reduce_basis(mut g: Vec<DPoly>) -> Vec<DPoly> {
    // Minimal: drop elements whose leading monomial is divisible by another.
    g.sort_by(|a, b| a.lm().cmp(b.lm()));
    let mut minimal: Vec<DPoly> = Vec::new();
    for p in g {
        if !minimal.iter().any(|q| q.lm().divides(p.lm())) {
            minimal.push(p);
        }
    }
    let mut out = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<DPoly> = minimal
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, p)| p.clone())
            .collect();
        let head = DPoly {
            terms: vec![minimal[k].terms[0].clone()],
        };
        let tail = DPoly {
            terms: minimal[k].terms[1..].to_vec(),
        };
        let mut r = head;
        r.terms.extend(normal_form(&tail, &others).terms);
        out.push(r.monic());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::text::parse_poly;

    fn dp(s: &str, n: usize) -> DPoly {
        DPoly::from_sparse(&parse_poly(s, n).unwrap(), &(0..n).collect::<Vec<_>>(), 0)
    }

    #[test]
    fn grevlex_order() {
        // X1*X3 < X2^2 in grevlex.
        assert!(Mon(vec![1, 0, 1]) < Mon(vec![0, 2, 0]));
        assert!(Mon(vec![1, 0, 0]) > Mon(vec![0, 1, 0]));
    }

    #[test]
    fn basis_of_points() {
        // Two points (1,2) and (2,1) on X1 + X2 = 3.
        let g = groebner(&[dp("X1+X2-3", 2), dp("X1*X2-2", 2)]);
        assert_eq!(g.len(), 2);
        for p in [dp("X1+X2-3", 2), dp("X1*X2-2", 2), dp("X2^2-3*X2+2", 2)] {
            assert!(normal_form(&p, &g).is_zero());
        }
    }

    #[test]
    fn inconsistent_system() {
        let g = groebner(&[dp("X1-1", 1), dp("X1-2", 1)]);
        assert_eq!(g.len(), 1);
        assert_eq!(g[0].lm().degree(), 0);
    }
}
