//! Ranks over Q and Z/2.
//!
//! The Q rank uses fraction-free elimination with row contents divided out;
//! it is kept separate from the Smith form so the two can check each other.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use super::int::{Int, Overflow};
use super::SparseMatrix;

/// Rank over Q (`characteristic == 0`) or over Z/p for p = 2.
pub fn rank_over_field(m: &SparseMatrix, characteristic: u32) -> usize {
    match characteristic {
        0 => match rank_q::<i64>(m) {
            Ok(r) => r,
            Err(Overflow) => rank_q::<BigInt>(m).expect("BigInt arithmetic cannot overflow"),
        },
        2 => rank_mod2(m),
        p => panic!("unsupported characteristic {p}"),
    }
}

fn rank_q<T: Int>(m: &SparseMatrix) -> Result<usize, Overflow> {
    let mut rows: Vec<Vec<(u32, T)>> = vec![Vec::new(); m.rows()];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); m.cols()];
    for (r, c, v) in m.triplets() {
        rows[r].push((c as u32, T::from_i64(v)));
        col_rows[c].push(r as u32);
    }
    for row in &mut rows {
        row.sort_unstable_by_key(|e| e.0);
    }
    let mut order: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let mut rank = 0;
    while !order.is_empty() {
        // shortest remaining row, smallest entry within it
        order.retain(|&r| !rows[r].is_empty());
        let Some(k) = (0..order.len()).min_by_key(|&k| rows[order[k]].len()) else {
            break;
        };
        let p = order.swap_remove(k);
        let prow = core::mem::take(&mut rows[p]);
        let (pc, pv) = prow
            .iter()
            .min_by_key(|(c, v)| (v.magnitude(), col_rows[*c as usize].len()))
            .cloned()
            .expect("non-empty row");
        rank += 1;
        let others = core::mem::take(&mut col_rows[pc as usize]);
        for r2 in others {
            let r2 = r2 as usize;
            if r2 == p || rows[r2].is_empty() {
                continue;
            }
            let Some(a) = rows[r2]
                .binary_search_by_key(&pc, |e| e.0)
                .ok()
                .map(|i| rows[r2][i].1.clone())
            else {
                continue;
            };
            let g = pv.gcd(&a);
            let sp = pv.div_floor(&g);
            let sa = a.div_floor(&g);
            let merged = combine(&rows[r2], &sp, &prow, &sa, |c| col_rows[c as usize].push(r2 as u32))?;
            rows[r2] = primitive(merged);
        }
    }
    Ok(rank)
}

/// `sp * dst - sa * src`.
fn combine<T: Int>(
    dst: &[(u32, T)],
    sp: &T,
    src: &[(u32, T)],
    sa: &T,
    mut on_new: impl FnMut(u32),
) -> Result<Vec<(u32, T)>, Overflow> {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let (mut i, mut j) = (0, 0);
    while i < dst.len() || j < src.len() {
        let ci = dst.get(i).map_or(u32::MAX, |e| e.0);
        let cj = src.get(j).map_or(u32::MAX, |e| e.0);
        let v = if ci < cj {
            i += 1;
            (ci, sp.mul(&dst[i - 1].1)?)
        } else if cj < ci {
            j += 1;
            on_new(cj);
            (cj, sa.mul(&src[j - 1].1)?.neg()?)
        } else {
            i += 1;
            j += 1;
            (ci, sp.mul(&dst[i - 1].1)?.sub(&sa.mul(&src[j - 1].1)?)?)
        };
        if !v.1.is_zero() {
            out.push(v);
        }
    }
    Ok(out)
}

fn primitive<T: Int>(mut row: Vec<(u32, T)>) -> Vec<(u32, T)> {
    let Some(first) = row.first() else {
        return row;
    };
    let mut g = first.1.clone();
    for (_, v) in &row[1..] {
        g = g.gcd(v);
        if g.is_unit() {
            return row;
        }
    }
    if !g.is_unit() {
        for e in &mut row {
            e.1 = e.1.div_floor(&g);
        }
    }
    row
}

/// Rank over Z/2 by sparse XOR elimination.
pub fn rank_mod2(m: &SparseMatrix) -> usize {
    let mut rows: Vec<Vec<u32>> = vec![Vec::new(); m.rows()];
    for (r, c, v) in m.triplets() {
        if v & 1 == 1 {
            rows[r].push(c as u32);
        }
    }
    for r in &mut rows {
        r.sort_unstable();
    }
    rank_mod2_rows(rows, m.cols())
}

/// Rank over Z/2 of the matrix whose rows are the given sorted column lists.
pub fn rank_mod2_rows(mut rows: Vec<Vec<u32>>, ncols: usize) -> usize {
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for (r, row) in rows.iter().enumerate() {
        for &c in row {
            col_rows[c as usize].push(r as u32);
        }
    }
    let mut live: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let mut rank = 0;
    let mut buf = Vec::new();
    loop {
        live.retain(|&r| !rows[r].is_empty());
        let Some(k) = (0..live.len()).min_by_key(|&k| rows[live[k]].len()) else {
            break;
        };
        let p = live.swap_remove(k);
        let prow = core::mem::take(&mut rows[p]);
        let pc = *prow
            .iter()
            .min_by_key(|&&c| col_rows[c as usize].len())
            .expect("non-empty row");
        rank += 1;
        for r2 in core::mem::take(&mut col_rows[pc as usize]) {
            let r2 = r2 as usize;
            if r2 == p || rows[r2].binary_search(&pc).is_err() {
                continue;
            }
            xor_into(&rows[r2], &prow, &mut buf, |c| col_rows[c as usize].push(r2 as u32));
            core::mem::swap(&mut rows[r2], &mut buf);
        }
    }
    rank
}

fn xor_into(a: &[u32], b: &[u32], out: &mut Vec<u32>, mut on_new: impl FnMut(u32)) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let x = a.get(i).copied().unwrap_or(u32::MAX);
        let y = b.get(j).copied().unwrap_or(u32::MAX);
        if x < y {
            out.push(x);
            i += 1;
        } else if y < x {
            on_new(y);
            out.push(y);
            j += 1;
        } else {
            i += 1;
            j += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        let m = SparseMatrix::from_dense(&[vec![1, 1, 0], vec![1, -1, 0], vec![2, 0, 0]]);
        assert_eq!(rank_over_field(&m, 0), 2);
        assert_eq!(rank_over_field(&m, 2), 1);
        let z = SparseMatrix::zeros(3, 4);
        assert_eq!(rank_over_field(&z, 0), 0);
        assert_eq!(rank_over_field(&SparseMatrix::identity(5), 2), 5);
    }

    #[test]
    fn q_rank_survives_large_entries() {
        let b = i64::MAX / 3;
        let m = SparseMatrix::from_dense(&[vec![b, b - 1], vec![b - 2, b - 3], vec![3, 5]]);
        assert_eq!(rank_over_field(&m, 0), 2);
    }
}
