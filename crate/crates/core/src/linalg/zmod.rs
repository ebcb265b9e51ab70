//! Arithmetic and homology over `Z/2^r`.

use alloc::vec;
use alloc::vec::Vec;

use super::{GroupDescription, SparseMatrix};

/// The ring `Z/2^r` for `1 <= r <= 63`, elements stored in `0..2^r`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Zmod2k {
    r: u32,
    mask: u64,
}

impl Zmod2k {
    pub fn new(r: u32) -> Self {
        assert!((1..=63).contains(&r), "exponent {r} out of range");
        Zmod2k {
            r,
            mask: (1u64 << r) - 1,
        }
    }

    pub fn exponent(self) -> u32 {
        self.r
    }

    pub fn reduce(self, v: i64) -> u64 {
        (v as u64) & self.mask
    }

    pub fn add(self, a: u64, b: u64) -> u64 {
        a.wrapping_add(b) & self.mask
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        a.wrapping_sub(b) & self.mask
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a.wrapping_mul(b) & self.mask
    }

    pub fn is_unit(self, a: u64) -> bool {
        a & 1 == 1
    }

    /// 2-adic valuation, `r` for zero.
    pub fn valuation(self, a: u64) -> u32 {
        if a == 0 {
            self.r
        } else {
            a.trailing_zeros()
        }
    }

    pub fn inverse(self, u: u64) -> u64 {
        assert!(self.is_unit(u), "{u} is not a unit");
        // Newton iteration doubles the number of correct bits each step
        let mut x = u;
        for _ in 0..6 {
            x = x.wrapping_mul(2u64.wrapping_sub(u.wrapping_mul(x)));
        }
        x & self.mask
    }

    /// Signed representative in `(-2^(r-1), 2^(r-1)]`.
    pub fn lift(self, a: u64) -> i64 {
        let half = 1u64 << (self.r - 1);
        if a > half {
            -((self.mask - a + 1) as i64)
        } else {
            a as i64
        }
    }
}

/// Column-side reduction of a dense matrix to diagonal form. Returns the
/// pivot valuations and the column transform `q` with its inverse.
fn diagonalize(a: &mut [Vec<u64>], cols: usize, z: Zmod2k) -> (Vec<u32>, Vec<Vec<u64>>, Vec<Vec<u64>>) {
    let rows = a.len();
    let mut q: Vec<Vec<u64>> = (0..cols)
        .map(|r| (0..cols).map(|c| u64::from(r == c)).collect())
        .collect();
    let mut qinv = q.clone();
    let mut vals = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (r, row) in a.iter().enumerate().skip(t) {
            for (c, &v) in row.iter().enumerate().skip(t) {
                if v != 0 && best.map_or(true, |b| z.valuation(v) < b.0) {
                    best = Some((z.valuation(v), r, c));
                }
            }
        }
        let Some((k, pr, pc)) = best else { break };
        a.swap(t, pr);
        if pc != t {
            for row in a.iter_mut() {
                row.swap(t, pc);
            }
            for row in q.iter_mut() {
                row.swap(t, pc);
            }
            qinv.swap(t, pc);
        }
        let unit_inv = z.inverse(a[t][t] >> k);
        for v in a[t].iter_mut() {
            *v = z.mul(*v, unit_inv);
        }
        for r in t + 1..rows {
            let e = a[r][t];
            if e != 0 {
                let f = e >> k;
                for c in t..cols {
                    let s = z.mul(f, a[t][c]);
                    a[r][c] = z.sub(a[r][c], s);
                }
            }
        }
        for c in t + 1..cols {
            let e = a[t][c];
            if e != 0 {
                let f = e >> k;
                // column c -= f * column t; only row t is nonzero in column t
                a[t][c] = 0;
                for row in q.iter_mut() {
                    let s = z.mul(f, row[t]);
                    row[c] = z.sub(row[c], s);
                }
                // inverse: row t of qinv += f * row c
                let (lo, hi) = qinv.split_at_mut(c);
                let (rt, rc) = (&mut lo[t], &hi[0]);
                for (x, y) in rt.iter_mut().zip(rc) {
                    *x = z.add(*x, z.mul(f, *y));
                }
            }
        }
        vals.push(k);
        t += 1;
    }
    (vals, q, qinv)
}

fn dense_mod(m: &SparseMatrix, z: Zmod2k) -> Vec<Vec<u64>> {
    let mut a = vec![vec![0u64; m.cols()]; m.rows()];
    for (r, c, v) in m.triplets() {
        a[r][c] = z.reduce(v);
    }
    a
}

/// Cyclic orders of a finitely presented `Z/2^r`-module `R^n / rowspace(rel)`.
fn cokernel(rel: Vec<Vec<u64>>, n: usize, z: Zmod2k) -> GroupDescription {
    let mut rel = rel;
    let (vals, _, _) = diagonalize(&mut rel, n, z);
    let mut free = n - vals.len();
    let mut torsion = Vec::new();
    for k in vals {
        if k >= z.r {
            free += 1;
        } else if k > 0 {
            torsion.push(1u64 << k);
        }
    }
    GroupDescription::new(free, torsion)
}

/// Homology of `d_out . d_in = 0` over `Z/2^r`. `free_rank` counts summands of
/// order `2^r`; `torsion` lists the smaller cyclic orders.
pub fn homology(d_in: &SparseMatrix, d_out: &SparseMatrix, r: u32) -> GroupDescription {
    let z = Zmod2k::new(r);
    let n = d_out.cols();
    let mut a = dense_mod(d_out, z);
    let (vals, _q, qinv) = diagonalize(&mut a, n, z);
    // kernel generators: index t < rank with valuation k >= 1 has order 2^k,
    // index t >= rank has order 2^r
    let mut gens: Vec<(usize, u32)> = Vec::new();
    for (t, &k) in vals.iter().enumerate() {
        if k >= 1 && k < r {
            gens.push((t, k));
        } else if k >= r {
            gens.push((t, r));
        }
    }
    for t in vals.len()..n {
        gens.push((t, r));
    }
    let m = gens.len();
    let mut rel: Vec<Vec<u64>> = Vec::new();
    for (g, &(_, k)) in gens.iter().enumerate() {
        if k < r {
            let mut row = vec![0; m];
            row[g] = 1 << k;
            rel.push(row);
        }
    }
    let rank_out = vals.len();
    for c in 0..d_in.cols() {
        let mut b = vec![0u64; n];
        for &(row, v) in d_in.column(c) {
            b[row as usize] = z.reduce(v);
        }
        // y = qinv * b
        let y: Vec<u64> = qinv
            .iter()
            .map(|qr| qr.iter().zip(&b).fold(0, |acc, (x, y)| z.add(acc, z.mul(*x, *y))))
            .collect();
        let mut row = vec![0u64; m];
        let mut g = 0;
        for (t, &yt) in y.iter().enumerate() {
            if t < rank_out {
                let k = vals[t].min(r);
                let shift = r - k;
                debug_assert_eq!(yt & ((1u64 << shift) - 1), 0, "boundary outside kernel");
                if g < m && gens[g].0 == t {
                    row[g] = yt >> shift;
                    g += 1;
                } else {
                    debug_assert_eq!(yt, 0);
                }
            } else {
                row[g] = yt;
                g += 1;
            }
        }
        rel.push(row);
    }
    cokernel(rel, m, z)
}
