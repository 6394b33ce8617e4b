//! Exact convex hulls of lattice point sets by beneath-beyond placement.
//!
//! The boundary is kept as a simplicial complex; every time a point is
//! placed, the cones from it over the facets it sees are exactly the new
//! part of the hull. Summing those simplices gives the normalized volume
//! `n! * vol` as an integer.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

const OVERFLOW: Error = Error::Overflow("convex hull arithmetic");

/// Determinant by fraction-free elimination; `None` on i128 overflow.
fn det_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(p) => m.swap(k, p),
                None => return Some(0),
            }
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    m[n - 1][n - 1].checked_mul(sign)
}

fn det_big(m: &[Vec<i128>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut neg = false;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    neg = !neg;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if neg {
        -d
    } else {
        d
    }
}

/// Exact determinant as i128, falling back to big integers when the
/// intermediate values overflow.
pub fn det(m: &[Vec<i128>]) -> Result<i128> {
    match det_i128(m.to_vec()) {
        Some(d) => Ok(d),
        None => det_big(m).to_i128().ok_or(OVERFLOW),
    }
}

/// Affine dimension of a point set (rank of the difference vectors).
pub fn affine_dim(points: &[Vec<i64>]) -> usize {
    affine_basis(points).len().saturating_sub(1)
}

/// Indices of a maximal affinely independent subset, first point included.
fn affine_basis(points: &[Vec<i64>]) -> Vec<usize> {
    let Some(p0) = points.first() else {
        return Vec::new();
    };
    let n = p0.len();
    // Echelon rows over the rationals kept as (pivot column, row) with
    // integer entries; reduction uses cross-multiplication.
    let mut rows: Vec<(usize, Vec<BigInt>)> = Vec::new();
    let mut chosen = vec![0];
    for (idx, p) in points.iter().enumerate().skip(1) {
        if rows.len() == n {
            break;
        }
        let mut v: Vec<BigInt> = p.iter().zip(p0).map(|(a, b)| BigInt::from(a - b)).collect();
        for (pc, r) in &rows {
            if !v[*pc].is_zero() {
                let f = v[*pc].clone();
                let g = r[*pc].clone();
                for (x, y) in v.iter_mut().zip(r) {
                    *x = &*x * &g - y * &f;
                }
            }
        }
        if let Some(pc) = v.iter().position(|x| !x.is_zero()) {
            rows.push((pc, v));
            chosen.push(idx);
        }
    }
    chosen
}

struct Facet {
    verts: Vec<usize>,
    normal: Vec<i128>,
    offset: i128,
}

fn dot(a: &[i128], b: &[i64]) -> Result<i128> {
    let mut s: i128 = 0;
    for (x, &y) in a.iter().zip(b) {
        s = s
            .checked_add(x.checked_mul(y as i128).ok_or(OVERFLOW)?)
            .ok_or(OVERFLOW)?;
    }
    Ok(s)
}

/// Outward hyperplane through the given `n` points; `interior` is `scale`
/// times a strictly interior point.
fn facet_through(
    pts: &[Vec<i64>],
    verts: Vec<usize>,
    interior: &[i128],
    scale: i128,
) -> Result<Facet> {
    let n = pts[verts[0]].len();
    let base = &pts[verts[0]];
    let diffs: Vec<Vec<i128>> = verts[1..]
        .iter()
        .map(|&v| {
            pts[v]
                .iter()
                .zip(base)
                .map(|(a, b)| (*a - *b) as i128)
                .collect()
        })
        .collect();
    let mut normal = Vec::with_capacity(n);
    for col in 0..n {
        let minor: Vec<Vec<i128>> = diffs
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, x)| *x)
                    .collect()
            })
            .collect();
        let d = det(&minor)?;
        normal.push(if col % 2 == 0 { d } else { -d });
    }
    let mut offset = dot(&normal, base)?;
    let mut inside: i128 = 0;
    for (a, b) in normal.iter().zip(interior) {
        inside = inside
            .checked_add(a.checked_mul(*b).ok_or(OVERFLOW)?)
            .ok_or(OVERFLOW)?;
    }
    let scaled_offset = offset.checked_mul(scale).ok_or(OVERFLOW)?;
    if inside > scaled_offset {
        for x in normal.iter_mut() {
            *x = -*x;
        }
        offset = -offset;
    }
    Ok(Facet {
        verts,
        normal,
        offset,
    })
}

fn simplex_nvol(pts: &[Vec<i64>], verts: &[usize], apex: usize) -> Result<i128> {
    let a = &pts[apex];
    let m: Vec<Vec<i128>> = verts
        .iter()
        .map(|&v| {
            pts[v]
                .iter()
                .zip(a)
                .map(|(x, y)| (*x - *y) as i128)
                .collect()
        })
        .collect();
    Ok(det(&m)?.abs())
}

/// Result of a full-dimensional hull computation.
pub struct Hull {
    /// `n! * vol(conv(points))`.
    pub normalized_volume: i128,
    /// Indices of points lying on the boundary complex (a superset of the
    /// vertex set).
    pub boundary_points: Vec<usize>,
}

/// Hull of `points` in `R^n`; `None` when the set is not full-dimensional.
pub fn hull(points: &[Vec<i64>]) -> Result<Option<Hull>> {
    let Some(first) = points.first() else {
        return Ok(None);
    };
    let n = first.len();
    let basis = affine_basis(points);
    if basis.len() != n + 1 {
        return Ok(None);
    }
    let scale = (n + 1) as i128;
    let interior: Vec<i128> = (0..n)
        .map(|c| basis.iter().map(|&i| points[i][c] as i128).sum())
        .collect();

    let mut facets: Vec<Facet> = Vec::new();
    for skip in 0..=n {
        let verts: Vec<usize> = basis
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != skip)
            .map(|(_, &i)| i)
            .collect();
        facets.push(facet_through(points, verts, &interior, scale)?);
    }
    let mut volume = simplex_nvol(points, &basis[1..], basis[0])?;

    let mut placed = vec![false; points.len()];
    for &b in &basis {
        placed[b] = true;
    }
    for p in 0..points.len() {
        if placed[p] {
            continue;
        }
        placed[p] = true;
        let mut visible = Vec::new();
        for (fi, f) in facets.iter().enumerate() {
            if dot(&f.normal, &points[p])? > f.offset {
                visible.push(fi);
            }
        }
        if visible.is_empty() {
            continue;
        }
        let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
        for &fi in &visible {
            let f = &facets[fi];
            volume = volume
                .checked_add(simplex_nvol(points, &f.verts, p)?)
                .ok_or(OVERFLOW)?;
            for skip in 0..f.verts.len() {
                let mut ridge = f.verts.clone();
                ridge.remove(skip);
                *ridge_count.entry(ridge).or_insert(0) += 1;
            }
        }
        let mut keep_mask = vec![true; facets.len()];
        for &fi in &visible {
            keep_mask[fi] = false;
        }
        let mut next: Vec<Facet> = facets
            .into_iter()
            .zip(keep_mask)
            .filter_map(|(f, k)| k.then_some(f))
            .collect();
        for (ridge, count) in ridge_count {
            if count == 1 {
                let mut verts = ridge;
                verts.push(p);
                verts.sort_unstable();
                next.push(facet_through(points, verts, &interior, scale)?);
            }
        }
        facets = next;
    }
    let mut on_boundary = vec![false; points.len()];
    for f in &facets {
        for &v in &f.verts {
            on_boundary[v] = true;
        }
    }
    Ok(Some(Hull {
        normalized_volume: volume,
        boundary_points: (0..points.len()).filter(|&i| on_boundary[i]).collect(),
    }))
}

/// `n! * vol(conv(points))`, zero for lower-dimensional sets.
pub fn normalized_volume(points: &[Vec<i64>]) -> Result<i128> {
    Ok(hull(points)?.map_or(0, |h| h.normalized_volume))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinants() {
        assert_eq!(det(&[vec![2, 1], vec![1, 3]]).unwrap(), 5);
        assert_eq!(det(&[vec![0, 1], vec![1, 0]]).unwrap(), -1);
        assert_eq!(det(&[vec![1, 2], vec![2, 4]]).unwrap(), 0);
        assert_eq!(det(&[]).unwrap(), 1);
    }

    #[test]
    fn unit_cube() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(vec![x, y, z]);
                }
            }
        }
        pts.push(vec![0, 0, 1]);
        assert_eq!(normalized_volume(&pts).unwrap(), 6);
    }

    #[test]
    fn interval() {
        assert_eq!(
            normalized_volume(&[vec![3], vec![1], vec![7], vec![2]]).unwrap(),
            6
        );
        assert_eq!(normalized_volume(&[vec![3]]).unwrap(), 0);
    }

    #[test]
    fn coplanar_extension() {
        // Square with extra points on its edges and an in-plane extension.
        let pts = vec![
            vec![0, 0],
            vec![1, 0],
            vec![0, 1],
            vec![2, 0],
            vec![2, 2],
            vec![0, 2],
            vec![1, 2],
        ];
        assert_eq!(normalized_volume(&pts).unwrap(), 8);
    }

    #[test]
    fn affine_dimension() {
        assert_eq!(affine_dim(&[vec![0, 0], vec![1, 1], vec![2, 2]]), 1);
        assert_eq!(affine_dim(&[vec![5, 5]]), 0);
        assert_eq!(
            affine_dim(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0]]),
            2
        );
    }
}
