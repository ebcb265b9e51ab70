//! Gaussian elimination of chain complexes over `Z/2^r`.
//!
//! Cancelling a unit entry `x -> y` of the differential removes both
//! generators and replaces every other entry `s -> t` by
//! `D(t,s) - D(t,x) D(y,x)^-1 D(y,s)`. The result is chain homotopy
//! equivalent to the original. Each generator carries a filtration level; if
//! only entries with a fixed level shift are cancelled, in increasing order
//! of shift, the survivors after the shift-`k` stage span the page `E_(k+1)`
//! of the filtration spectral sequence.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::zmod::Zmod2k;
use super::SparseMatrix;

#[derive(Clone, Debug)]
pub struct CancellationComplex {
    ring: Zmod2k,
    degree: Vec<i32>,
    level: Vec<i32>,
    alive: Vec<bool>,
    /// out[x][y] = D(y, x)
    out: Vec<BTreeMap<u32, u64>>,
    /// inc[y][x] = D(y, x)
    inc: Vec<BTreeMap<u32, u64>>,
}

impl CancellationComplex {
    /// Generators with `(homological degree, filtration level)`.
    pub fn new(exponent: u32, generators: impl IntoIterator<Item = (i32, i32)>) -> Self {
        let (degree, level): (Vec<i32>, Vec<i32>) = generators.into_iter().unzip();
        let n = degree.len();
        CancellationComplex {
            ring: Zmod2k::new(exponent),
            degree,
            level,
            alive: vec![true; n],
            out: vec![BTreeMap::new(); n],
            inc: vec![BTreeMap::new(); n],
        }
    }

    pub fn len(&self) -> usize {
        self.degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degree.is_empty()
    }

    /// Adds `v` to `D(dst, src)`.
    pub fn add_entry(&mut self, src: usize, dst: usize, v: i64) {
        debug_assert_eq!(self.degree[dst], self.degree[src] + 1);
        let v = self.ring.reduce(v);
        self.bump(src as u32, dst as u32, v);
    }

    fn bump(&mut self, src: u32, dst: u32, v: u64) {
        if v == 0 {
            return;
        }
        let z = self.ring;
        let e = self.out[src as usize].entry(dst).or_insert(0);
        *e = z.add(*e, v);
        let new = *e;
        if new == 0 {
            self.out[src as usize].remove(&dst);
            self.inc[dst as usize].remove(&src);
        } else {
            self.inc[dst as usize].insert(src, new);
        }
    }

    pub fn alive(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(|&k| self.alive[k])
    }

    pub fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    pub fn degree(&self, k: usize) -> i32 {
        self.degree[k]
    }

    pub fn level(&self, k: usize) -> i32 {
        self.level[k]
    }

    /// Current value of `D(dst, src)`.
    pub fn entry(&self, src: usize, dst: usize) -> u64 {
        self.out[src].get(&(dst as u32)).copied().unwrap_or(0)
    }

    /// Surviving generators `x` and their images, as `(target, value)`.
    pub fn targets(&self, src: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.out[src].iter().map(|(&t, &v)| (t as usize, v))
    }

    /// Cancels unit entries whose level shift is exactly `shift` until none
    /// remain. Returns the number of cancelled pairs.
    pub fn cancel_shift(&mut self, shift: i32) -> usize {
        let mut pairs = 0;
        loop {
            let mut progressed = false;
            for x in 0..self.len() {
                if !self.alive[x] {
                    continue;
                }
                let lx = self.level[x];
                let best = self.out[x]
                    .iter()
                    .filter(|(&y, &v)| self.ring.is_unit(v) && self.level[y as usize] - lx == shift)
                    .map(|(&y, _)| (self.inc[y as usize].len(), y))
                    .min();
                if let Some((_, y)) = best {
                    self.cancel(x, y as usize);
                    pairs += 1;
                    progressed = true;
                }
            }
            if !progressed {
                return pairs;
            }
        }
    }

    /// Cancels every unit entry regardless of level.
    pub fn cancel_all(&mut self) -> usize {
        let mut pairs = 0;
        loop {
            let mut progressed = false;
            for x in 0..self.len() {
                if !self.alive[x] {
                    continue;
                }
                let best = self.out[x]
                    .iter()
                    .filter(|(_, &v)| self.ring.is_unit(v))
                    .map(|(&y, _)| (self.inc[y as usize].len(), y))
                    .min();
                if let Some((_, y)) = best {
                    self.cancel(x, y as usize);
                    pairs += 1;
                    progressed = true;
                }
            }
            if !progressed {
                return pairs;
            }
        }
    }

    fn cancel(&mut self, x: usize, y: usize) {
        let z = self.ring;
        let u = self.out[x][&(y as u32)];
        let uinv = z.inverse(u);
        let gammas: Vec<(u32, u64)> = self.out[x]
            .iter()
            .filter(|e| *e.0 as usize != y)
            .map(|(&k, &v)| (k, v))
            .collect();
        let deltas: Vec<(u32, u64)> = self.inc[y]
            .iter()
            .filter(|e| *e.0 as usize != x)
            .map(|(&k, &v)| (k, z.mul(uinv, v)))
            .collect();
        for &(t, g) in &gammas {
            for &(s, d) in &deltas {
                let corr = z.mul(g, d);
                self.bump(s, t, z.sub(0, corr));
            }
        }
        for k in [x, y] {
            let outs: Vec<u32> = self.out[k].keys().copied().collect();
            for t in outs {
                self.inc[t as usize].remove(&(k as u32));
            }
            let ins: Vec<u32> = self.inc[k].keys().copied().collect();
            for s in ins {
                self.out[s as usize].remove(&(k as u32));
            }
            self.out[k].clear();
            self.inc[k].clear();
            self.alive[k] = false;
        }
    }

    /// Smallest level shift among surviving entries.
    pub fn min_shift(&self) -> Option<i32> {
        self.alive()
            .flat_map(|x| self.out[x].keys().map(move |&y| self.level[y as usize] - self.level[x]))
            .min()
    }

    /// The block of the differential from `src` generators to `dst`
    /// generators, with entries lifted to `i64`.
    pub fn block(&self, src: &[usize], dst: &[usize]) -> SparseMatrix {
        let mut index = BTreeMap::new();
        for (k, &d) in dst.iter().enumerate() {
            index.insert(d as u32, k);
        }
        let triplets = src.iter().enumerate().flat_map(|(c, &s)| {
            let index = &index;
            self.out[s]
                .iter()
                .filter_map(move |(t, &v)| index.get(t).map(|&r| (r, c, v as i64)))
        });
        SparseMatrix::from_triplets(dst.len(), src.len(), triplets)
    }

    /// True when `D . D = 0` over the ring.
    pub fn is_complex(&self) -> bool {
        let z = self.ring;
        self.alive().all(|x| {
            let mut acc: BTreeMap<u32, u64> = BTreeMap::new();
            for (&y, &a) in &self.out[x] {
                for (&w, &b) in &self.out[y as usize] {
                    let e = acc.entry(w).or_insert(0);
                    *e = z.add(*e, z.mul(a, b));
                }
            }
            acc.values().all(|&v| v == 0)
        })
    }
}
