//! Dense bit vectors and linear algebra over Z/2.

use alloc::vec;
use alloc::vec::Vec;

use super::SparseMatrix;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for k in ones {
            v.toggle(k);
        }
        v
    }

    pub fn unit(len: usize, k: usize) -> Self {
        Self::from_indices(len, [k])
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, k: usize) -> bool {
        debug_assert!(k < self.len);
        self.words[k / 64] >> (k % 64) & 1 == 1
    }

    pub fn set(&mut self, k: usize, on: bool) {
        if self.get(k) != on {
            self.toggle(k);
        }
    }

    pub fn toggle(&mut self, k: usize) {
        assert!(k < self.len, "bit {k} out of range {}", self.len);
        self.words[k / 64] ^= 1 << (k % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    k * 64 + b
                })
            })
        })
    }

    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }
}

/// Row-reduced set of vectors with distinct leading positions, used to test
/// membership in a span and to reduce vectors modulo it.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    dim: usize,
    /// Sorted by pivot; each row's pivot is its first one.
    rows: Vec<(usize, BitVec)>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.iter().map(|r| r.0)
    }

    /// The reduced rows as `(pivot, row)`.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &BitVec)> + '_ {
        self.rows.iter().map(|(p, r)| (*p, r))
    }

    /// Clears every pivot position of `v`.
    pub fn reduce(&self, v: &mut BitVec) {
        for (p, row) in &self.rows {
            if v.get(*p) {
                v.xor_assign(row);
            }
        }
    }

    /// Inserts `v`, returning false if it was already in the span. Keeps the
    /// rows fully reduced.
    pub fn insert(&mut self, mut v: BitVec) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.first_one() else {
            return false;
        };
        for (_, row) in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&v);
            }
        }
        let at = self.rows.partition_point(|r| r.0 < p);
        self.rows.insert(at, (p, v));
        true
    }

    pub fn contains(&self, v: &BitVec) -> bool {
        let mut v = v.clone();
        self.reduce(&mut v);
        v.is_zero()
    }
}

/// Null space of `m` over Z/2, as a list of basis vectors.
pub fn kernel_mod2(m: &SparseMatrix) -> Vec<BitVec> {
    let (rows, cols) = m.shape();
    // column echelon with tracking: reduce columns against each other
    let mut pivots: Vec<Option<usize>> = vec![None; rows];
    let mut reduced: Vec<(BitVec, BitVec)> = Vec::new();
    let mut kernel = Vec::new();
    for c in 0..cols {
        let mut v = BitVec::zeros(rows);
        for &(r, a) in m.column(c) {
            if a & 1 == 1 {
                v.toggle(r as usize);
            }
        }
        let mut tag = BitVec::unit(cols, c);
        while let Some(p) = v.first_one() {
            match pivots[p] {
                Some(k) => {
                    v.xor_assign(&reduced[k].0);
                    tag.xor_assign(&reduced[k].1);
                }
                None => break,
            }
        }
        match v.first_one() {
            Some(p) => {
                pivots[p] = Some(reduced.len());
                reduced.push((v, tag));
            }
            None => kernel.push(tag),
        }
    }
    kernel
}

/// Some `x` with `m x = b` over Z/2, if one exists.
pub fn solve_mod2(m: &SparseMatrix, b: &BitVec) -> Option<BitVec> {
    let (rows, cols) = m.shape();
    assert_eq!(b.len(), rows);
    let mut pivots: Vec<Option<usize>> = vec![None; rows];
    let mut reduced: Vec<(BitVec, BitVec)> = Vec::new();
    for c in 0..cols {
        let mut v = BitVec::zeros(rows);
        for &(r, a) in m.column(c) {
            if a & 1 == 1 {
                v.toggle(r as usize);
            }
        }
        let mut tag = BitVec::unit(cols, c);
        while let Some(p) = v.first_one() {
            let Some(k) = pivots[p] else { break };
            v.xor_assign(&reduced[k].0);
            tag.xor_assign(&reduced[k].1);
        }
        if let Some(p) = v.first_one() {
            pivots[p] = Some(reduced.len());
            reduced.push((v, tag));
        }
    }
    let mut v = b.clone();
    let mut x = BitVec::zeros(cols);
    while let Some(p) = v.first_one() {
        let k = pivots[p]?;
        v.xor_assign(&reduced[k].0);
        x.xor_assign(&reduced[k].1);
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitvec_ops() {
        let mut v = BitVec::from_indices(130, [0, 64, 129]);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 64, 129]);
        assert_eq!(v.count_ones(), 3);
        v.toggle(0);
        assert_eq!(v.first_one(), Some(64));
        assert!(v.dot(&BitVec::unit(130, 129)));
    }

    #[test]
    fn solve_and_kernel() {
        let m = SparseMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1]]);
        let b = BitVec::from_indices(2, [0]);
        let x = solve_mod2(&m, &b).unwrap();
        assert_eq!(m.apply_mod2(&x), b);
        let k = kernel_mod2(&m);
        assert_eq!(k.len(), 1);
        assert!(m.apply_mod2(&k[0]).is_zero());
        let z = SparseMatrix::from_dense(&[vec![2, 0]]);
        assert!(solve_mod2(&z, &BitVec::unit(1, 0)).is_none());
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new(4);
        assert!(e.insert(BitVec::from_indices(4, [0, 1])));
        assert!(e.insert(BitVec::from_indices(4, [1, 2])));
        assert!(!e.insert(BitVec::from_indices(4, [0, 2])));
        assert!(e.contains(&BitVec::from_indices(4, [0, 2])));
        assert!(!e.contains(&BitVec::unit(4, 3)));
        assert_eq!(e.rank(), 2);
    }
}
