//! Exact sparse linear algebra over Z, Q, Z/2 and Z/2^r.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::ring::Ring;

pub mod gf2;
mod int;
pub mod rank;
pub mod reduce;
pub mod snf;
pub mod zmod;

pub use gf2::{solve_mod2, BitVec};
pub use rank::rank_over_field;
pub use snf::{smith_normal_form, smith_normal_form_dense, SmithDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("d_out * d_in is not zero")]
    NotAComplex,
    #[error("matrix shapes do not compose: {0:?} then {1:?}")]
    Shape((usize, usize), (usize, usize)),
}

/// Column-compressed integer matrix. Columns hold `(row, value)` pairs sorted
/// by row, with no zeros and no duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<Vec<(u32, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: (0..n).map(|k| vec![(k as u32, 1)]).collect(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, i64)>,
    ) -> Self {
        let mut out = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r}, {c}) outside {rows}x{cols}");
            out[c].push((r as u32, v));
        }
        let cols = out.into_iter().map(normalize_column).collect();
        SparseMatrix { rows, cols }
    }

    pub fn from_dense(m: &[Vec<i64>]) -> Self {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        Self::from_triplets(
            rows,
            cols,
            m.iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, v))),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols.len())
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &[(u32, i64)] {
        &self.cols[c]
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        let col = &self.cols[c];
        col.binary_search_by_key(&(r as u32), |e| e.0)
            .map_or(0, |k| col[k].1)
    }

    /// `(row, col, value)` in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |&(r, v)| (r as usize, c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.cols()]; self.rows];
        for (r, c, v) in self.triplets() {
            m[r][c] = v;
        }
        m
    }

    pub fn transpose(&self) -> SparseMatrix {
        Self::from_triplets(self.cols(), self.rows, self.triplets().map(|(r, c, v)| (c, r, v)))
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.cols() != rhs.rows {
            return Err(LinalgError::Shape(self.shape(), rhs.shape()));
        }
        let mut acc = vec![0i64; self.rows];
        let mut touched = Vec::new();
        let cols = rhs
            .cols
            .iter()
            .map(|rcol| {
                for &(k, b) in rcol {
                    for &(r, a) in &self.cols[k as usize] {
                        if acc[r as usize] == 0 {
                            touched.push(r);
                        }
                        acc[r as usize] += a * b;
                    }
                }
                touched.sort_unstable();
                let col: Vec<(u32, i64)> = touched
                    .drain(..)
                    .filter_map(|r| {
                        let v = core::mem::take(&mut acc[r as usize]);
                        (v != 0).then_some((r, v))
                    })
                    .collect();
                col
            })
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols,
        })
    }

    pub fn add(&self, other: &SparseMatrix) -> Result<SparseMatrix, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::Shape(self.shape(), other.shape()));
        }
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| normalize_column(a.iter().chain(b).copied().collect()))
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols,
        })
    }

    pub fn scale(&self, k: i64) -> SparseMatrix {
        Self::from_triplets(self.rows, self.cols(), self.triplets().map(|(r, c, v)| (r, c, v * k)))
    }

    /// Entries reduced into `0..m`, zeros dropped.
    pub fn reduce_mod(&self, m: i64) -> SparseMatrix {
        let cols = self
            .cols
            .iter()
            .map(|col| {
                col.iter()
                    .filter_map(|&(r, v)| {
                        let v = v.rem_euclid(m);
                        (v != 0).then_some((r, v))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols,
        }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.cols());
        let mut out = vec![0; self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            if v[c] != 0 {
                for &(r, a) in col {
                    out[r as usize] += a * v[c];
                }
            }
        }
        out
    }

    /// Product with a mod-2 vector, reduced mod 2.
    pub fn apply_mod2(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows);
        for c in v.ones() {
            for &(r, a) in &self.cols[c] {
                if a & 1 == 1 {
                    out.toggle(r as usize);
                }
            }
        }
        out
    }
}

fn normalize_column(mut col: Vec<(u32, i64)>) -> Vec<(u32, i64)> {
    col.sort_unstable_by_key(|e| e.0);
    let mut out: Vec<(u32, i64)> = Vec::with_capacity(col.len());
    for (r, v) in col {
        match out.last_mut() {
            Some(last) if last.0 == r => last.1 += v,
            _ => out.push((r, v)),
        }
    }
    out.retain(|e| e.1 != 0);
    out
}

/// A finitely generated abelian group (or module over `Z/2^r`): a free part
/// and cyclic torsion summands.
///
/// Over Z the torsion orders are prime powers. Over `Z/2^r`, `free_rank`
/// counts `Z/2^r` summands and `torsion` lists the smaller cyclic orders.
/// Over a field only `free_rank` is used.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GroupDescription {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl GroupDescription {
    pub fn new(free_rank: usize, mut torsion: Vec<u64>) -> Self {
        torsion.retain(|&t| t > 1);
        torsion.sort_unstable();
        GroupDescription { free_rank, torsion }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Number of torsion summands of the given order.
    pub fn count(&self, order: u64) -> usize {
        self.torsion.iter().filter(|&&t| t == order).count()
    }
}

impl fmt::Display for GroupDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            let s = if first { "" } else { " + " };
            first = false;
            f.write_str(s)
        };
        if self.free_rank > 0 {
            sep(f)?;
            match self.free_rank {
                1 => f.write_str("Z")?,
                k => write!(f, "Z^{k}")?,
            }
        }
        let mut k = 0;
        while k < self.torsion.len() {
            let t = self.torsion[k];
            let run = self.torsion[k..].iter().take_while(|&&u| u == t).count();
            sep(f)?;
            match run {
                1 => write!(f, "Z{t}")?,
                m => write!(f, "Z{t}^{m}")?,
            }
            k += run;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Homology at the middle of `C_in --d_in--> C --d_out--> C_out`.
///
/// Over Z: free rank `dim ker d_out - rank d_in`, torsion from the invariant
/// factors of `d_in` split into prime powers. Over a field: dimension only.
/// Over `Z/2^r`: cyclic decomposition computed directly in `Z/2^r`.
pub fn homology_group(
    d_in: &SparseMatrix,
    d_out: &SparseMatrix,
    ring: Ring,
) -> Result<GroupDescription, LinalgError> {
    if d_in.rows() != d_out.cols() {
        return Err(LinalgError::Shape(d_in.shape(), d_out.shape()));
    }
    let comp = d_out.mul(d_in)?;
    let vanishes = match ring {
        Ring::Z | Ring::Q => comp.is_zero(),
        _ => comp.reduce_mod(ring.characteristic() as i64).is_zero(),
    };
    if !vanishes {
        return Err(LinalgError::NotAComplex);
    }
    let n = d_in.rows();
    Ok(match ring {
        Ring::Z => {
            let s_in = smith_normal_form(d_in);
            let r_out = smith_normal_form(d_out).rank();
            let mut torsion = Vec::new();
            for f in s_in.invariant_factors_u64() {
                torsion.extend(prime_power_split(f));
            }
            GroupDescription::new(n - r_out - s_in.rank(), torsion)
        }
        Ring::Q | Ring::Z2 => {
            let ch = ring.characteristic() as u32;
            GroupDescription::new(
                n - rank_over_field(d_in, ch) - rank_over_field(d_out, ch),
                Vec::new(),
            )
        }
        Ring::Z2Pow(r) => zmod::homology(d_in, d_out, r),
    })
}

/// Splits `n` into its prime-power factors (ascending).
pub fn prime_power_split(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn product_and_sum() {
        let a = SparseMatrix::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = SparseMatrix::from_dense(&[vec![1, -2], vec![0, 1]]);
        assert_eq!(a.mul(&b).unwrap(), SparseMatrix::identity(2));
        assert_eq!(a.add(&b).unwrap().to_dense(), vec![vec![2, 0], vec![0, 2]]);
        assert!(a.mul(&SparseMatrix::zeros(3, 1)).is_err());
        let t = SparseMatrix::from_triplets(2, 2, [(0, 0, 1), (0, 0, -1), (1, 0, 3)]);
        assert_eq!(t.nnz(), 1);
        assert_eq!(t.get(1, 0), 3);
    }

    #[test]
    fn homology_examples() {
        let h = homology_group(&SparseMatrix::zeros(2, 0), &SparseMatrix::zeros(0, 2), Ring::Z).unwrap();
        assert_eq!(h, GroupDescription::new(2, vec![]));
        let two = SparseMatrix::from_dense(&[vec![2]]);
        let four = SparseMatrix::from_dense(&[vec![4]]);
        let out = SparseMatrix::zeros(0, 1);
        assert_eq!(homology_group(&two, &out, Ring::Z).unwrap(), GroupDescription::new(0, vec![2]));
        assert_eq!(homology_group(&four, &out, Ring::Z).unwrap(), GroupDescription::new(0, vec![4]));
        assert_eq!(homology_group(&two, &out, Ring::Q).unwrap(), GroupDescription::new(0, vec![]));
        assert_eq!(homology_group(&two, &out, Ring::Z2).unwrap(), GroupDescription::new(1, vec![]));
        assert_eq!(homology_group(&two, &out, Ring::Z2Pow(2)).unwrap(), GroupDescription::new(0, vec![2]));
        assert_eq!(homology_group(&four, &out, Ring::Z2Pow(2)).unwrap(), GroupDescription::new(1, vec![]));
        let six = SparseMatrix::from_dense(&[vec![6]]);
        assert_eq!(homology_group(&six, &out, Ring::Z).unwrap().torsion, vec![2, 3]);
    }

    #[test]
    fn non_complex_rejected() {
        let id = SparseMatrix::identity(1);
        assert_eq!(homology_group(&id, &id, Ring::Z), Err(LinalgError::NotAComplex));
    }

    #[test]
    fn group_display() {
        assert_eq!(GroupDescription::new(2, vec![2, 4, 2]).to_string(), "Z^2 + Z2^2 + Z4");
        assert_eq!(GroupDescription::default().to_string(), "0");
        assert_eq!(prime_power_split(360), vec![8, 9, 5]);
    }
}
