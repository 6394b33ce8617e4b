//! Combinatorics on support families: transcendence bases and the
//! decomposition of the affine variety into toric pieces.

use crate::algebra::SparsePoly;
use crate::error::{Error, Result};
use crate::polytope::{affine_dim, mixed_volume, Support, SupportFamily};

/// Default bound on the ambient dimension for [`gamma_decomposition`].
pub const GAMMA_DIM_CAP: usize = 20;

/// Indices (0-based, increasing) of a transcendence basis among the
/// variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransBasisResult {
    pub indices: Vec<usize>,
    /// Every candidate examined, in order, with the test outcome.
    pub trace: Vec<(usize, bool)>,
}

/// Affine dimension of the Minkowski sum of the given supports.
fn sum_dim(members: &[&Support], n: usize) -> usize {
    let mut pts = vec![vec![0i64; n]];
    for s in members {
        let p0 = &s.points()[0];
        for p in &s.points()[1..] {
            pts.push(p.iter().zip(p0).map(|(a, b)| a - b).collect());
        }
    }
    affine_dim(&pts)
}

/// `dim(Σ_{j∈J} A_j) ≥ #J` for every subset `J`.
pub fn standing_hypothesis(a: &SupportFamily) -> bool {
    let r = a.len();
    let n = a.ambient_dim();
    (1u64..(1u64 << r)).all(|mask| {
        let sel: Vec<&Support> = (0..r)
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| &a.members()[j])
            .collect();
        sum_dim(&sel, n) >= sel.len()
    })
}

/// Greedy transcendence basis: scans `k = 1..n` and keeps `k` when the
/// variables chosen so far plus `X_k` stay algebraically independent.
///
/// Independence is tested as positivity of the mixed volume of
/// `(A, {0,e_i} for i in TB ∪ {k}, Δ^(n−r−#TB−1))`, evaluated after
/// projecting away the segment directions, which leaves a square family in
/// `n − #TB − 1` variables.
pub fn trans_basis(a: &SupportFamily) -> Result<TransBasisResult> {
    let n = a.ambient_dim();
    let r = a.len();
    if r > n || !standing_hypothesis(a) {
        return Err(Error::DegenerateSupports);
    }
    let mut tb: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    for k in 0..n {
        if tb.len() == n - r {
            break;
        }
        let keep: Vec<usize> = (0..n).filter(|i| *i != k && !tb.contains(i)).collect();
        let fam = a.project(&keep).with_simplices(n - r - tb.len() - 1);
        let ok = mixed_volume(&fam)? > 0;
        trace.push((k, ok));
        if ok {
            tb.push(k);
        }
    }
    if tb.len() != n - r {
        return Err(Error::DegenerateSupports);
    }
    Ok(TransBasisResult { indices: tb, trace })
}

/// One toric piece `I` of the decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaComponent {
    /// Coordinates set to zero (0-based, increasing).
    pub zero_vars: Vec<usize>,
    /// Equations that survive (`J_I`, 0-based).
    pub equations: Vec<usize>,
    /// Surviving supports `A_j^I` in the remaining `n − #I` variables.
    pub family: SupportFamily,
}

fn restricted(a: &SupportFamily, zero_vars: &[usize]) -> Vec<(usize, Option<Support>)> {
    let n = a.ambient_dim();
    let keep: Vec<usize> = (0..n).filter(|i| !zero_vars.contains(i)).collect();
    a.members()
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let pts: Vec<Vec<i64>> = s
                .points()
                .iter()
                .filter(|p| zero_vars.iter().all(|&i| p[i] == 0))
                .map(|p| keep.iter().map(|&i| p[i]).collect())
                .collect();
            (j, Support::new(keep.len(), pts).ok())
        })
        .collect()
}

fn surviving(a: &SupportFamily, zero_vars: &[usize]) -> usize {
    restricted(a, zero_vars)
        .iter()
        .filter(|(_, s)| s.is_some())
        .count()
}

fn subsets(items: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0u64..(1u64 << items.len())).map(move |mask| {
        items
            .iter()
            .enumerate()
            .filter(|(b, _)| mask >> b & 1 == 1)
            .map(|(_, &x)| x)
            .collect()
    })
}

/// All subsets `I` of the variables whose coordinate subspace meets the
/// variety in a toric piece of the expected dimension.
///
/// `I` qualifies when every subfamily `J ⊆ J_I` has
/// `dim(Σ_{j∈J} A_j^I) ≥ #J`, and every `Ĩ ⊆ I` (including `∅` and `I`)
/// has `#J_Ĩ + #Ĩ ≥ #J_I + #I`.
pub fn gamma_decomposition(a: &SupportFamily) -> Result<Vec<GammaComponent>> {
    let n = a.ambient_dim();
    if n > GAMMA_DIM_CAP {
        return Err(Error::DimensionCap {
            dim: n,
            cap: GAMMA_DIM_CAP,
        });
    }
    let all: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    for zero_vars in subsets(&all) {
        let parts = restricted(a, &zero_vars);
        let alive: Vec<(usize, Support)> = parts
            .into_iter()
            .filter_map(|(j, s)| s.map(|s| (j, s)))
            .collect();
        let m = n - zero_vars.len();
        let dims_ok = (1u64..(1u64 << alive.len())).all(|mask| {
            let sel: Vec<&Support> = alive
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, (_, s))| s)
                .collect();
            sum_dim(&sel, m) >= sel.len()
        });
        if !dims_ok {
            continue;
        }
        let lhs_fixed = alive.len() + zero_vars.len();
        let counts_ok = subsets(&zero_vars).all(|sub| surviving(a, &sub) + sub.len() >= lhs_fixed);
        if !counts_ok {
            continue;
        }
        let equations = alive.iter().map(|(j, _)| *j).collect();
        let family = SupportFamily::new(m, alive.into_iter().map(|(_, s)| s).collect())?;
        out.push(GammaComponent {
            zero_vars,
            equations,
            family,
        });
    }
    Ok(out)
}

/// Drops the coordinates outside `keep` (0-based), merging duplicates.
pub fn project_supports(a: &SupportFamily, keep: &[usize]) -> Result<SupportFamily> {
    if keep.is_empty() {
        return Err(Error::InvalidArgument(
            "projection must keep at least one coordinate".into(),
        ));
    }
    if let Some(&k) = keep.iter().find(|&&k| k >= a.ambient_dim()) {
        return Err(Error::InvalidArgument(format!(
            "coordinate {} out of range",
            k + 1
        )));
    }
    Ok(a.project(keep))
}

/// Supports of a list of polynomials.
pub fn supports_of(polys: &[SparsePoly]) -> Result<SupportFamily> {
    let n = polys.first().map_or(0, SparsePoly::nvars);
    let members = polys
        .iter()
        .map(|p| Support::from_exps(n, p.terms().map(|(e, _)| e)))
        .collect::<Result<Vec<_>>>()?;
    SupportFamily::new(n, members)
}

/// A renaming of variables: `order[new] = old`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarPermutation {
    order: Vec<usize>,
}

impl VarPermutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &o in &order {
            if o >= order.len() || seen[o] {
                return Err(Error::InvalidArgument("not a permutation".into()));
            }
            seen[o] = true;
        }
        Ok(VarPermutation { order })
    }

    pub fn identity(n: usize) -> Self {
        VarPermutation {
            order: (0..n).collect(),
        }
    }

    /// Old index of new variable `new`.
    pub fn old(&self, new: usize) -> usize {
        self.order[new]
    }

    /// New index of old variable `old`.
    pub fn new_index(&self, old: usize) -> usize {
        self.order.iter().position(|&o| o == old).expect("in range")
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Rewrites a polynomial in old variables into new variables.
    pub fn apply(&self, p: &SparsePoly) -> SparsePoly {
        let map: Vec<usize> = (0..self.order.len())
            .map(|old| self.new_index(old))
            .collect();
        p.reindex(self.order.len(), &map)
    }

    /// Rewrites a polynomial in new variables back into old variables.
    pub fn unapply(&self, p: &SparsePoly) -> SparsePoly {
        p.reindex(self.order.len(), &self.order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sup(n: usize, pts: &[&[i64]]) -> Support {
        Support::new(n, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    pub(crate) fn section_family() -> SupportFamily {
        let a1 = sup(
            5,
            &[
                &[0, 0, 0, 0, 0],
                &[1, 1, 1, 0, 0],
                &[2, 0, 0, 4, 2],
                &[0, 0, 0, 8, 4],
            ],
        );
        let a2 = sup(5, &[&[1, 0, 1, 1, 2], &[0, 1, 2, 5, 4], &[1, 3, 0, 5, 4]]);
        SupportFamily::new(5, vec![a1, a2]).unwrap()
    }

    #[test]
    fn trans_basis_of_worked_family() {
        let tb = trans_basis(&section_family()).unwrap();
        assert_eq!(tb.indices, vec![0, 1, 3]);
        assert_eq!(tb.trace, vec![(0, true), (1, true), (2, false), (3, true)]);
    }

    #[test]
    fn mv_positive_witnesses() {
        let a = section_family();
        let with = |k: usize| {
            let mut f = a.clone();
            for i in [0, 1, k] {
                f.push(Support::segment(5, i)).unwrap();
            }
            crate::polytope::mv_positive(&f).unwrap()
        };
        assert!(with(3));
        assert!(!with(2));
    }

    #[test]
    fn trans_basis_trivial_cases() {
        let f = SupportFamily::new(1, vec![sup(1, &[&[0], &[1]])]).unwrap();
        assert!(trans_basis(&f).unwrap().indices.is_empty());
        let f = SupportFamily::new(2, vec![sup(2, &[&[0, 0], &[1, 1]])]).unwrap();
        assert_eq!(trans_basis(&f).unwrap().indices, vec![0]);
    }

    #[test]
    fn trans_basis_rejects_degenerate() {
        let f =
            SupportFamily::new(2, vec![sup(2, &[&[1, 1]]), sup(2, &[&[0, 0], &[1, 0]])]).unwrap();
        assert_eq!(trans_basis(&f), Err(Error::DegenerateSupports));
    }

    #[test]
    fn gamma_examples() {
        let f = SupportFamily::new(1, vec![sup(1, &[&[1], &[2]])]).unwrap();
        let g: Vec<Vec<usize>> = gamma_decomposition(&f)
            .unwrap()
            .into_iter()
            .map(|c| c.zero_vars)
            .collect();
        assert_eq!(g, vec![vec![], vec![0]]);

        let f = SupportFamily::new(2, vec![sup(2, &[&[1, 0], &[0, 1]])]).unwrap();
        let g: Vec<Vec<usize>> = gamma_decomposition(&f)
            .unwrap()
            .into_iter()
            .map(|c| c.zero_vars)
            .collect();
        assert_eq!(g, vec![Vec::<usize>::new()]);

        let f = SupportFamily::new(2, vec![sup(2, &[&[0, 0], &[1, 0], &[0, 2]])]).unwrap();
        let g = gamma_decomposition(&f).unwrap();
        assert_eq!(g[0].zero_vars, Vec::<usize>::new());
    }

    #[test]
    fn projection_examples() {
        let a = section_family();
        let p = project_supports(&a, &[0, 1, 2, 4]).unwrap();
        assert_eq!(
            p.members()[0],
            sup(
                4,
                &[&[0, 0, 0, 0], &[1, 1, 1, 0], &[2, 0, 0, 2], &[0, 0, 0, 4]]
            )
        );
        assert_eq!(project_supports(&a, &[0, 1, 2, 3, 4]).unwrap(), a);
        let d = SupportFamily::new(3, vec![Support::simplex(3)]).unwrap();
        assert_eq!(
            project_supports(&d, &[0]).unwrap().members()[0],
            sup(1, &[&[0], &[1]])
        );
        assert!(project_supports(&a, &[]).is_err());
    }

    #[test]
    fn permutation_roundtrip() {
        let p = crate::algebra::text::parse_poly("X1*X2^2+3*X3", 3).unwrap();
        let perm = VarPermutation::new(vec![2, 0, 1]).unwrap();
        let q = perm.apply(&p);
        assert_eq!(
            q,
            crate::algebra::text::parse_poly("X2*X3^2+3*X1", 3).unwrap()
        );
        assert_eq!(perm.unapply(&q), p);
    }
}
