//! Dense Gaussian elimination over an arbitrary field.

use super::ring::Field;
use crate::error::{Error, Result};

/// Row-major dense matrix.
pub type Matrix<F> = Vec<Vec<F>>;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Result<Vec<usize>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv()?;
        if !inv.is_one() {
            for x in m[r].iter_mut().skip(c) {
                *x = x.mul(&inv);
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *x = x.sub(&f.mul(pv));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

pub fn rank<F: Field>(m: &Matrix<F>) -> Result<usize> {
    let mut a = m.clone();
    Ok(rref(&mut a)?.len())
}

/// Solves `m x = rhs`. Returns `None` when inconsistent; free unknowns are
/// set to zero.
pub fn solve<F: Field>(m: &Matrix<F>, rhs: &[F]) -> Result<Option<Vec<F>>> {
    if m.len() != rhs.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows vs {} right-hand sides",
            m.len(),
            rhs.len()
        )));
    }
    let Some(sample) = rhs.first() else {
        return Ok(Some(Vec::new()));
    };
    let cols = m.first().map_or(0, Vec::len);
    let mut aug: Matrix<F> = m
        .iter()
        .zip(rhs)
        .map(|(row, b)| {
            let mut r = row.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug)?;
    if pivots.last() == Some(&cols) {
        return Ok(None);
    }
    let mut x = vec![sample.zero_like(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug[i][cols].clone();
    }
    Ok(Some(x))
}

/// Basis of the right nullspace `{x : m x = 0}`.
pub fn nullspace<F: Field>(m: &Matrix<F>, cols: usize, like: &F) -> Result<Vec<Vec<F>>> {
    let mut a = m.clone();
    let pivots = rref(&mut a)?;
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![like.zero_like(); cols];
        v[free] = like.one_like();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = a[i][free].neg();
        }
        basis.push(v);
    }
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::Rat;

    fn m(rows: &[&[i64]]) -> Matrix<Rat> {
        rows.iter()
            .map(|r| r.iter().map(|&x| Rat::from_int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_and_solve() {
        let a = m(&[&[1, 2], &[2, 4]]);
        assert_eq!(rank(&a).unwrap(), 1);
        let b = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&b, &[Rat::from_int(3), Rat::from_int(5)])
            .unwrap()
            .unwrap();
        assert_eq!(x, vec![Rat::new(4, 5).unwrap(), Rat::new(7, 5).unwrap()]);
        assert_eq!(solve(&a, &[Rat::one(), Rat::one()]).unwrap(), None);
    }

    #[test]
    fn nullspace_basis() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&a, 3, &Rat::zero()).unwrap();
        assert_eq!(ns.len(), 2);
        for v in ns {
            for row in &a {
                let s = row
                    .iter()
                    .zip(&v)
                    .fold(Rat::zero(), |acc, (x, y)| acc + x * y);
                assert!(s.is_zero());
            }
        }
    }
}
