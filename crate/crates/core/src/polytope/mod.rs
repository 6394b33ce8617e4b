//! Lattice polytopes: supports, hull volumes, Minkowski sums and
//! normalized mixed volumes.

pub mod hull;

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::algebra::{ExpVec, Rat};
use crate::error::{Error, Result};

pub use hull::affine_dim;

/// Largest ambient dimension accepted by [`mixed_volume`] by default.
pub const DEFAULT_DIM_CAP: usize = 12;

/// A nonempty finite set of lattice points in `Z^n`, kept sorted and free
/// of duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Support {
    ambient_dim: usize,
    points: Vec<Vec<i64>>,
}

impl Support {
    pub fn new(ambient_dim: usize, points: Vec<Vec<i64>>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::EmptySupport);
        }
        if let Some(p) = points.iter().find(|p| p.len() != ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "point of length {} in ambient dimension {ambient_dim}",
                p.len()
            )));
        }
        let set: BTreeSet<Vec<i64>> = points.into_iter().collect();
        Ok(Support {
            ambient_dim,
            points: set.into_iter().collect(),
        })
    }

    pub fn from_exps<'a, I: IntoIterator<Item = &'a ExpVec>>(
        ambient_dim: usize,
        exps: I,
    ) -> Result<Self> {
        Support::new(
            ambient_dim,
            exps.into_iter()
                .map(|e| e.as_slice().iter().map(|&x| x as i64).collect())
                .collect(),
        )
    }

    /// Vertex set `{0, e1, ..., en}` of the standard simplex.
    pub fn simplex(n: usize) -> Self {
        let mut pts = vec![vec![0; n]];
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 1;
            pts.push(e);
        }
        Support::new(n, pts).expect("nonempty")
    }

    /// `{0, e_i}`.
    pub fn segment(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Support::new(n, vec![vec![0; n], e]).expect("nonempty")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &[i64]) -> bool {
        self.points
            .binary_search_by(|q| q.as_slice().cmp(p))
            .is_ok()
    }

    pub fn translate(&self, v: &[i64]) -> Support {
        Support::new(
            self.ambient_dim,
            self.points
                .iter()
                .map(|p| p.iter().zip(v).map(|(a, b)| a + b).collect())
                .collect(),
        )
        .expect("nonempty")
    }

    /// Keeps the listed coordinates (in the given order), merging duplicates.
    pub fn project(&self, keep: &[usize]) -> Support {
        Support::new(
            keep.len(),
            self.points
                .iter()
                .map(|p| keep.iter().map(|&i| p[i]).collect())
                .collect(),
        )
        .expect("nonempty")
    }

    pub fn affine_dim(&self) -> usize {
        hull::affine_dim(&self.points)
    }

    /// Points on the hull boundary (all points when not full-dimensional).
    pub fn reduced(&self) -> Result<Support> {
        match hull::hull(&self.points)? {
            Some(h) => Ok(Support {
                ambient_dim: self.ambient_dim,
                points: h
                    .boundary_points
                    .into_iter()
                    .map(|i| self.points[i].clone())
                    .collect(),
            }),
            None => Ok(self.clone()),
        }
    }
}

/// An ordered family of supports in a common ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportFamily {
    ambient_dim: usize,
    members: Vec<Support>,
}

impl SupportFamily {
    pub fn new(ambient_dim: usize, members: Vec<Support>) -> Result<Self> {
        if let Some(s) = members.iter().find(|s| s.ambient_dim != ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "support in dimension {} inside a family in dimension {ambient_dim}",
                s.ambient_dim
            )));
        }
        Ok(SupportFamily {
            ambient_dim,
            members,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn members(&self) -> &[Support] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn push(&mut self, s: Support) -> Result<()> {
        if s.ambient_dim != self.ambient_dim {
            return Err(Error::DimensionMismatch(
                "appended support has the wrong dimension".into(),
            ));
        }
        self.members.push(s);
        Ok(())
    }

    /// Appends `k` copies of the standard simplex.
    pub fn with_simplices(mut self, k: usize) -> Self {
        for _ in 0..k {
            self.members.push(Support::simplex(self.ambient_dim));
        }
        self
    }

    pub fn project(&self, keep: &[usize]) -> SupportFamily {
        SupportFamily {
            ambient_dim: keep.len(),
            members: self.members.iter().map(|s| s.project(keep)).collect(),
        }
    }
}

/// Exact Euclidean volume of the convex hull; zero when lower-dimensional.
pub fn hull_volume(s: &Support) -> Result<Rat> {
    let nvol = hull::normalized_volume(&s.points)?;
    let mut fact = BigInt::from(1);
    for k in 2..=s.ambient_dim {
        fact *= k;
    }
    Rat::from_big(BigInt::from(nvol), fact)
}

/// Pointwise sum set `{p + q}`.
pub fn minkowski_sum(a: &Support, b: &Support) -> Result<Support> {
    if a.ambient_dim != b.ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "Minkowski sum of supports in dimensions {} and {}",
            a.ambient_dim, b.ambient_dim
        )));
    }
    let mut set = BTreeSet::new();
    for p in &a.points {
        for q in &b.points {
            set.insert(p.iter().zip(q).map(|(x, y)| x + y).collect::<Vec<i64>>());
        }
    }
    Ok(Support {
        ambient_dim: a.ambient_dim,
        points: set.into_iter().collect(),
    })
}

fn binomial(n: usize, k: usize) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// Normalized mixed volume (`MV(Δ, ..., Δ) = 1`) with the default
/// dimension cap.
pub fn mixed_volume(f: &SupportFamily) -> Result<u64> {
    mixed_volume_capped(f, DEFAULT_DIM_CAP)
}

/// Normalized mixed volume by inclusion-exclusion over Minkowski sums.
///
/// Equal members are grouped so that sums only depend on how many copies of
/// each distinct support are taken.
pub fn mixed_volume_capped(f: &SupportFamily, cap: usize) -> Result<u64> {
    let n = f.ambient_dim;
    if f.members.len() != n {
        return Err(Error::SquareFamilyRequired);
    }
    if n > cap {
        return Err(Error::DimensionCap { dim: n, cap });
    }
    if n == 0 {
        return Ok(1);
    }
    let mut groups: Vec<(Support, usize)> = Vec::new();
    for s in &f.members {
        let r = s.reduced()?;
        match groups.iter_mut().find(|(g, _)| *g == r) {
            Some((_, m)) => *m += 1,
            None => groups.push((r, 1)),
        }
    }
    // Partial sums k * S for each group, reused across count vectors.
    let mut multiples: Vec<Vec<Support>> = Vec::new();
    for (s, m) in &groups {
        let origin = Support::new(n, vec![vec![0; n]]).expect("nonempty");
        let mut row = vec![origin];
        for k in 1..=*m {
            let next = minkowski_sum(&row[k - 1], s)?.reduced()?;
            row.push(next);
        }
        multiples.push(row);
    }
    let mut total: i128 = 0;
    let mut counts = vec![0usize; groups.len()];
    loop {
        // Advance the mixed-radix counter.
        let mut i = 0;
        while i < counts.len() && counts[i] == groups[i].1 {
            counts[i] = 0;
            i += 1;
        }
        if i == counts.len() {
            break;
        }
        counts[i] += 1;

        let taken: usize = counts.iter().sum();
        let mut sum = Support::new(n, vec![vec![0; n]]).expect("nonempty");
        let mut weight: i128 = 1;
        for (g, &c) in counts.iter().enumerate() {
            if c > 0 {
                sum = minkowski_sum(&sum, &multiples[g][c])?.reduced()?;
                weight *= binomial(groups[g].1, c);
            }
        }
        let vol = hull::normalized_volume(&sum.points)?;
        let term = weight
            .checked_mul(vol)
            .ok_or(Error::Overflow("mixed volume"))?;
        if (n - taken).is_multiple_of(2) {
            total = total
                .checked_add(term)
                .ok_or(Error::Overflow("mixed volume"))?;
        } else {
            total = total
                .checked_sub(term)
                .ok_or(Error::Overflow("mixed volume"))?;
        }
    }
    // Each sum contributed n! times its Euclidean volume.
    let fact: i128 = (2..=n as i128).product();
    debug_assert_eq!(total % fact, 0);
    u64::try_from(total / fact).map_err(|_| Error::Overflow("mixed volume"))
}

/// `mixed_volume(f) > 0`.
pub fn mv_positive(f: &SupportFamily) -> Result<bool> {
    Ok(mixed_volume(f)? > 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sup(n: usize, pts: &[&[i64]]) -> Support {
        Support::new(n, pts.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    #[test]
    fn hull_volume_examples() {
        assert_eq!(
            hull_volume(&Support::simplex(2)).unwrap(),
            Rat::new(1, 2).unwrap()
        );
        assert_eq!(
            hull_volume(&sup(2, &[&[0, 0], &[1, 1]])).unwrap(),
            Rat::zero()
        );
        assert_eq!(
            hull_volume(&sup(2, &[&[0, 0], &[2, 0], &[1, 1]])).unwrap(),
            Rat::one()
        );
    }

    #[test]
    fn minkowski_examples() {
        let a = sup(2, &[&[0, 0], &[1, 0]]);
        let b = sup(2, &[&[0, 0], &[0, 1]]);
        assert_eq!(minkowski_sum(&a, &sup(2, &[&[0, 0]])).unwrap(), a);
        assert_eq!(
            minkowski_sum(&a, &b).unwrap(),
            sup(2, &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]])
        );
        let d = Support::simplex(2);
        assert_eq!(
            minkowski_sum(&d, &d).unwrap(),
            sup(2, &[&[0, 0], &[1, 0], &[0, 1], &[2, 0], &[1, 1], &[0, 2]])
        );
        assert!(minkowski_sum(&a, &Support::simplex(3)).is_err());
    }

    #[test]
    fn mixed_volume_examples() {
        let s1 = sup(3, &[&[0, 0, 0], &[1, 1, 0], &[0, 1, 1]]);
        let s2 = sup(3, &[&[0, 0, 0], &[2, 1, 1], &[0, 2, 0], &[1, 1, 1]]);
        let f = SupportFamily::new(3, vec![s1, s2, Support::simplex(3)]).unwrap();
        assert_eq!(mixed_volume(&f).unwrap(), 6);

        let f = SupportFamily::new(2, vec![Support::simplex(2), Support::simplex(2)]).unwrap();
        assert_eq!(mixed_volume(&f).unwrap(), 1);

        let p1 = sup(2, &[&[0, 0], &[1, 0], &[1, 1]]);
        let p2 = sup(2, &[&[0, 0], &[1, 1], &[2, 0]]);
        let f = SupportFamily::new(2, vec![p1, p2]).unwrap();
        assert_eq!(mixed_volume(&f).unwrap(), 2);
    }

    #[test]
    fn mixed_volume_errors() {
        let f = SupportFamily::new(2, vec![Support::simplex(2)]).unwrap();
        assert_eq!(mixed_volume(&f), Err(Error::SquareFamilyRequired));
        let f = SupportFamily::new(13, vec![Support::simplex(13); 13]).unwrap();
        assert_eq!(
            mixed_volume(&f),
            Err(Error::DimensionCap { dim: 13, cap: 12 })
        );
    }

    #[test]
    fn single_point_is_not_positive() {
        let f = SupportFamily::new(1, vec![sup(1, &[&[2]])]).unwrap();
        assert!(!mv_positive(&f).unwrap());
    }
}
