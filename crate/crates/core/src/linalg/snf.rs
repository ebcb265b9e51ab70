//! Smith normal form over Z.
//!
//! The sparse path eliminates unit pivots first (cheapest fill-in first, in
//! passes) and finishes the small residue densely. Arithmetic runs in `i64`
//! with overflow checks and restarts in `BigInt` if anything overflows.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use super::int::{Int, Overflow};
use super::SparseMatrix;

/// `left * M * right = diag(diagonal)`, with `diagonal` positive and each
/// entry dividing the next. Transforms are kept only by
/// [`smith_normal_form_dense`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub rows: usize,
    pub cols: usize,
    pub diagonal: Vec<BigUint>,
    pub left: Option<Vec<Vec<BigInt>>>,
    pub right: Option<Vec<Vec<BigInt>>>,
}

impl SmithDecomposition {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Invariant factors greater than one.
    ///
    /// Panics if one does not fit in a `u64`; Khovanov differentials never
    /// get near that.
    pub fn invariant_factors_u64(&self) -> Vec<u64> {
        self.diagonal
            .iter()
            .filter(|d| !d.is_one())
            .map(|d| d.to_u64().expect("invariant factor exceeds u64"))
            .collect()
    }
}

/// Smith normal form without transforms.
pub fn smith_normal_form(m: &SparseMatrix) -> SmithDecomposition {
    let diagonal = match sparse_snf::<i64>(m) {
        Ok(d) => d,
        Err(Overflow) => sparse_snf::<BigInt>(m).expect("BigInt arithmetic cannot overflow"),
    };
    SmithDecomposition {
        rows: m.rows(),
        cols: m.cols(),
        diagonal,
        left: None,
        right: None,
    }
}

/// Dense Smith normal form in `BigInt`, keeping both unimodular transforms.
pub fn smith_normal_form_dense(m: &SparseMatrix) -> SmithDecomposition {
    let mut a: Vec<Vec<BigInt>> = m
        .to_dense()
        .into_iter()
        .map(|r| r.into_iter().map(BigInt::from).collect())
        .collect();
    let (rows, cols) = m.shape();
    let mut t = Transforms {
        left: identity(rows),
        right: identity(cols),
    };
    let d = dense_snf(&mut a, rows, cols, Some(&mut t)).expect("BigInt arithmetic cannot overflow");
    SmithDecomposition {
        rows,
        cols,
        diagonal: d.iter().map(|v| v.to_biguint_abs()).collect(),
        left: Some(t.left),
        right: Some(t.right),
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|r| {
            (0..n)
                .map(|c| if r == c { BigInt::one() } else { BigInt::from(0) })
                .collect()
        })
        .collect()
}

struct Transforms<T> {
    left: Vec<Vec<T>>,
    right: Vec<Vec<T>>,
}

fn sparse_snf<T: Int>(m: &SparseMatrix) -> Result<Vec<BigUint>, Overflow> {
    let mut rows: Vec<Vec<(u32, T)>> = vec![Vec::new(); m.rows()];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m.cols()];
    for (r, c, v) in m.triplets() {
        rows[r].push((c as u32, T::from_i64(v)));
        col_rows[c].push(r as u32);
    }
    for row in &mut rows {
        row.sort_unstable_by_key(|e| e.0);
    }
    let mut row_alive = vec![true; m.rows()];
    let mut col_alive = vec![true; m.cols()];
    let mut units = 0usize;

    loop {
        let mut cands: Vec<(u64, u32, u32)> = Vec::new();
        for (r, row) in rows.iter().enumerate() {
            if !row_alive[r] {
                continue;
            }
            let best = row
                .iter()
                .filter(|(_, v)| v.is_unit())
                .map(|&(c, _)| {
                    let cc = col_rows[c as usize].len() as u64;
                    ((row.len() as u64 - 1) * cc.saturating_sub(1), c)
                })
                .min();
            if let Some((cost, c)) = best {
                cands.push((cost, r as u32, c));
            }
        }
        if cands.is_empty() {
            break;
        }
        cands.sort_unstable();
        let mut progressed = false;
        for (_, r, c) in cands {
            let (r, c) = (r as usize, c as usize);
            if !row_alive[r] || !col_alive[c] {
                continue;
            }
            let Some(pv) = lookup(&rows[r], c as u32).filter(|v| v.is_unit()) else {
                continue;
            };
            let pivot_row = core::mem::take(&mut rows[r]);
            let others = core::mem::take(&mut col_rows[c]);
            for r2 in others {
                let r2 = r2 as usize;
                if r2 == r || !row_alive[r2] {
                    continue;
                }
                let Some(a) = lookup(&rows[r2], c as u32) else {
                    continue;
                };
                // pivot is +-1, so its inverse is itself
                let factor = a.mul(&pv)?;
                let merged = axpy(&rows[r2], &pivot_row, &factor, |col| {
                    col_rows[col as usize].push(r2 as u32)
                })?;
                rows[r2] = merged;
            }
            rows[r] = pivot_row;
            row_alive[r] = false;
            col_alive[c] = false;
            units += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }

    // dense residue on the surviving rows and columns
    let live_rows: Vec<usize> = (0..m.rows())
        .filter(|&r| row_alive[r] && !rows[r].is_empty())
        .collect();
    let mut col_index = vec![u32::MAX; m.cols()];
    let mut ncols = 0usize;
    for &r in &live_rows {
        for &(c, _) in &rows[r] {
            debug_assert!(col_alive[c as usize]);
            if col_index[c as usize] == u32::MAX {
                col_index[c as usize] = ncols as u32;
                ncols += 1;
            }
        }
    }
    let mut dense = vec![vec![T::zero(); ncols]; live_rows.len()];
    for (k, &r) in live_rows.iter().enumerate() {
        for (c, v) in &rows[r] {
            dense[k][col_index[*c as usize] as usize] = v.clone();
        }
    }
    let nrows = live_rows.len();
    let tail = dense_snf::<T>(&mut dense, nrows, ncols, None)?;
    let mut diagonal = vec![BigUint::one(); units];
    diagonal.extend(tail.iter().map(|v| v.to_biguint_abs()));
    Ok(diagonal)
}

fn lookup<T: Int>(row: &[(u32, T)], c: u32) -> Option<T> {
    row.binary_search_by_key(&c, |e| e.0)
        .ok()
        .map(|k| row[k].1.clone())
}

/// `dst - factor * src` on sorted sparse rows. `on_new` sees columns that
/// appear in the result but not in `dst`.
fn axpy<T: Int>(
    dst: &[(u32, T)],
    src: &[(u32, T)],
    factor: &T,
    mut on_new: impl FnMut(u32),
) -> Result<Vec<(u32, T)>, Overflow> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let ci = dst.get(i).map_or(u32::MAX, |e| e.0);
        let cj = src.get(j).map_or(u32::MAX, |e| e.0);
        if ci < cj {
            out.push(dst[i].clone());
            i += 1;
        } else if cj < ci {
            let v = factor.mul(&src[j].1)?.neg()?;
            on_new(cj);
            out.push((cj, v));
            j += 1;
        } else {
            let v = dst[i].1.sub(&factor.mul(&src[j].1)?)?;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    Ok(out)
}

/// In-place dense SNF of an `rows x cols` matrix. Returns the nonzero
/// diagonal entries (absolute values) in divisibility order.
fn dense_snf<T: Int>(
    a: &mut [Vec<T>],
    rows: usize,
    cols: usize,
    mut tr: Option<&mut Transforms<T>>,
) -> Result<Vec<T>, Overflow> {
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = min_entry(a, t, rows, cols, |_, _| true) else {
            break;
        };
        swap_rows(a, t, pr, tr.as_deref_mut());
        swap_cols(a, t, pc, tr.as_deref_mut());
        loop {
            let mut clean = true;
            for r in t + 1..rows {
                if !a[r][t].is_zero() {
                    let q = a[r][t].div_floor(&a[t][t]);
                    row_axpy(a, r, t, &q, tr.as_deref_mut())?;
                    clean &= a[r][t].is_zero();
                }
            }
            for c in t + 1..cols {
                if !a[t][c].is_zero() {
                    let q = a[t][c].div_floor(&a[t][t]);
                    col_axpy(a, c, t, &q, tr.as_deref_mut())?;
                    clean &= a[t][c].is_zero();
                }
            }
            if !clean {
                let (pr, pc) = min_entry(a, t, rows, cols, |r, c| r == t || c == t)
                    .expect("pivot line still has entries");
                swap_rows(a, t, pr, tr.as_deref_mut());
                swap_cols(a, t, pc, tr.as_deref_mut());
                continue;
            }
            let bad = (t + 1..rows).find(|&r| (t + 1..cols).any(|c| !a[t][t].divides(&a[r][c])));
            match bad {
                Some(r) => {
                    let minus_one = T::from_i64(-1);
                    row_axpy(a, t, r, &minus_one, tr.as_deref_mut())?;
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for v in a[t].iter_mut() {
                *v = v.neg()?;
            }
            if let Some(tr) = tr.as_deref_mut() {
                for v in tr.left[t].iter_mut() {
                    *v = v.neg()?;
                }
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    Ok(diag)
}

fn min_entry<T: Int>(
    a: &[Vec<T>],
    t: usize,
    rows: usize,
    cols: usize,
    keep: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize)> {
    let mut best: Option<(u64, usize, usize)> = None;
    for r in t..rows {
        for c in t..cols {
            if !a[r][c].is_zero() && keep(r, c) {
                let m = a[r][c].magnitude();
                if best.map_or(true, |b| m < b.0) {
                    best = Some((m, r, c));
                }
            }
        }
    }
    best.map(|b| (b.1, b.2))
}

fn swap_rows<T: Int>(a: &mut [Vec<T>], i: usize, j: usize, tr: Option<&mut Transforms<T>>) {
    if i != j {
        a.swap(i, j);
        if let Some(tr) = tr {
            tr.left.swap(i, j);
        }
    }
}

fn swap_cols<T: Int>(a: &mut [Vec<T>], i: usize, j: usize, tr: Option<&mut Transforms<T>>) {
    if i != j {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        if let Some(tr) = tr {
            for row in tr.right.iter_mut() {
                row.swap(i, j);
            }
        }
    }
}

/// row `dst` -= q * row `src`
fn row_axpy<T: Int>(
    a: &mut [Vec<T>],
    dst: usize,
    src: usize,
    q: &T,
    tr: Option<&mut Transforms<T>>,
) -> Result<(), Overflow> {
    fn go<T: Int>(m: &mut [Vec<T>], dst: usize, src: usize, q: &T) -> Result<(), Overflow> {
        for c in 0..m[dst].len() {
            if !m[src][c].is_zero() {
                m[dst][c] = m[dst][c].sub(&q.mul(&m[src][c])?)?;
            }
        }
        Ok(())
    }
    go(a, dst, src, q)?;
    if let Some(tr) = tr {
        go(&mut tr.left, dst, src, q)?;
    }
    Ok(())
}

/// column `dst` -= q * column `src`
fn col_axpy<T: Int>(
    a: &mut [Vec<T>],
    dst: usize,
    src: usize,
    q: &T,
    tr: Option<&mut Transforms<T>>,
) -> Result<(), Overflow> {
    fn go<T: Int>(m: &mut [Vec<T>], dst: usize, src: usize, q: &T) -> Result<(), Overflow> {
        for row in m.iter_mut() {
            if !row[src].is_zero() {
                row[dst] = row[dst].sub(&q.mul(&row[src])?)?;
            }
        }
        Ok(())
    }
    go(a, dst, src, q)?;
    if let Some(tr) = tr {
        go(&mut tr.right, dst, src, q)?;
    }
    Ok(())
}
