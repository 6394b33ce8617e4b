use std::collections::HashMap;

/// Graded enumeration of the monomials in `t` variables of total degree at
/// most `max_degree`.
///
/// Each monomial also has an additive Kronecker code (base `max_degree+1`),
/// so the code of a product is the sum of the codes as long as the product
/// stays within the degree bound.
#[derive(Debug, PartialEq, Eq)]
pub struct MonomialIndex {
    t: usize,
    max_degree: u32,
    exps: Vec<Vec<u32>>,
    degrees: Vec<u32>,
    codes: Vec<u64>,
    block_end: Vec<usize>,
    table: Lookup,
}

#[derive(Debug, PartialEq, Eq)]
enum Lookup {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

const DENSE_LIMIT: u64 = 1 << 24;

impl MonomialIndex {
    pub fn new(t: usize, max_degree: u32) -> Self {
        let base = max_degree as u64 + 1;
        let mut exps = Vec::new();
        let mut block_end = Vec::with_capacity(max_degree as usize + 1);
        for d in 0..=max_degree {
            let mut cur = vec![0u32; t];
            push_degree(&mut exps, &mut cur, 0, d);
            block_end.push(exps.len());
        }
        let degrees = exps.iter().map(|e| e.iter().sum()).collect();
        let codes: Vec<u64> = exps
            .iter()
            .map(|e| e.iter().rev().fold(0u64, |acc, &x| acc * base + x as u64))
            .collect();
        let span = base.checked_pow(t as u32).unwrap_or(u64::MAX);
        let table = if span <= DENSE_LIMIT {
            let mut v = vec![u32::MAX; span as usize];
            for (k, &c) in codes.iter().enumerate() {
                v[c as usize] = k as u32;
            }
            Lookup::Dense(v)
        } else {
            Lookup::Sparse(
                codes
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| (c, k as u32))
                    .collect(),
            )
        };
        MonomialIndex {
            t,
            max_degree,
            exps,
            degrees,
            codes,
            block_end,
            table,
        }
    }

    pub fn nvars(&self) -> usize {
        self.t
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Number of monomials of degree at most `degree`.
    pub fn count(&self, degree: u32) -> usize {
        self.block_end[degree.min(self.max_degree) as usize]
    }

    pub fn exps(&self, k: usize) -> &[u32] {
        &self.exps[k]
    }

    pub fn degree_of(&self, k: usize) -> u32 {
        self.degrees[k]
    }

    pub fn code(&self, k: usize) -> u64 {
        self.codes[k]
    }

    /// Position of the monomial with the given code.
    pub fn lookup(&self, code: u64) -> usize {
        match &self.table {
            Lookup::Dense(v) => v[code as usize] as usize,
            Lookup::Sparse(m) => m[&code] as usize,
        }
    }

    pub fn position(&self, e: &[u32]) -> Option<usize> {
        if e.len() != self.t || e.iter().sum::<u32>() > self.max_degree {
            return None;
        }
        let base = self.max_degree as u64 + 1;
        let code = e.iter().rev().fold(0u64, |acc, &x| acc * base + x as u64);
        Some(self.lookup(code))
    }
}

fn push_degree(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, i: usize, left: u32) {
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    if i + 1 == cur.len() {
        cur[i] = left;
        out.push(cur.clone());
        cur[i] = 0;
        return;
    }
    for a in (0..=left).rev() {
        cur[i] = a;
        push_degree(out, cur, i + 1, left - a);
    }
    cur[i] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_positions() {
        let idx = MonomialIndex::new(2, 4);
        assert_eq!(idx.count(0), 1);
        assert_eq!(idx.count(1), 3);
        assert_eq!(idx.count(4), 15);
        for k in 0..idx.count(4) {
            assert_eq!(idx.position(idx.exps(k)), Some(k));
        }
        let a = idx.position(&[1, 0]).unwrap();
        let b = idx.position(&[1, 2]).unwrap();
        assert_eq!(
            idx.lookup(idx.code(a) + idx.code(b)),
            idx.position(&[2, 2]).unwrap()
        );
    }

    #[test]
    fn no_variables() {
        let idx = MonomialIndex::new(0, 5);
        assert_eq!(idx.count(5), 1);
        assert_eq!(idx.position(&[]), Some(0));
    }
}
