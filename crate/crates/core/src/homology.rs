//! Khovanov homology tables and thinness.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{build_complex, BigradedComplex, ComplexError};
use crate::diagram::PlanarDiagram;
use crate::linalg::rank::{rank_mod2, rank_over_field};
use crate::linalg::reduce::CancellationComplex;
use crate::linalg::{prime_power_split, smith_normal_form, zmod, GroupDescription};
use crate::ring::Ring;
use crate::Bigrade;

/// Homology groups by bigrade; trivial groups are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyTable {
    pub ring: Ring,
    pub writhe: i32,
    pub crossings: usize,
    entries: BTreeMap<Bigrade, GroupDescription>,
}

impl HomologyTable {
    pub fn new(
        ring: Ring,
        writhe: i32,
        crossings: usize,
        entries: impl IntoIterator<Item = (Bigrade, GroupDescription)>,
    ) -> Self {
        HomologyTable {
            ring,
            writhe,
            crossings,
            entries: entries.into_iter().filter(|(_, g)| !g.is_trivial()).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (Bigrade, &GroupDescription)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    pub fn get(&self, b: Bigrade) -> Option<&GroupDescription> {
        self.entries.get(&b)
    }

    pub fn free_rank(&self, b: Bigrade) -> usize {
        self.get(b).map_or(0, |g| g.free_rank)
    }

    pub fn total_rank(&self) -> usize {
        self.entries.values().map(|g| g.free_rank).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Values of `2i - j` over all nonzero entries.
    pub fn support_diagonals(&self) -> BTreeSet<i32> {
        self.entries.keys().map(|&(i, j)| 2 * i - j).collect()
    }

    pub fn i_range(&self) -> Option<(i32, i32)> {
        let is = self.entries.keys().map(|b| b.0);
        Some((is.clone().min()?, is.max()?))
    }

    pub fn j_range(&self) -> Option<(i32, i32)> {
        let js = self.entries.keys().map(|b| b.1);
        Some((js.clone().min()?, js.max()?))
    }
}

/// Khovanov homology of a diagram over `ring`.
pub fn khovanov_homology(d: &PlanarDiagram, ring: Ring) -> Result<HomologyTable, ComplexError> {
    let c = build_complex(d, ring)?;
    Ok(homology_of(&c))
}

/// Homology of an already built complex over the complex's ring.
pub fn homology_of(c: &BigradedComplex) -> HomologyTable {
    let d = c.diagram();
    let entries: Vec<(Bigrade, GroupDescription)> = match c.ring() {
        Ring::Z => integral(c),
        Ring::Q => over_field(c, 0),
        Ring::Z2 => over_field(c, 2),
        Ring::Z2Pow(r) => over_z2k(c, r),
    };
    HomologyTable::new(c.ring(), d.writhe(), d.crossing_count(), entries)
}

fn integral(c: &BigradedComplex) -> Vec<(Bigrade, GroupDescription)> {
    let snf: BTreeMap<Bigrade, (usize, Vec<u64>)> = c
        .d()
        .blocks()
        .map(|(b, m)| {
            let s = smith_normal_form(m);
            (b, (s.rank(), s.invariant_factors_u64()))
        })
        .collect();
    c.bigrades()
        .map(|b| {
            let out = snf.get(&b).map_or(0, |s| s.0);
            let (inr, factors) = snf.get(&(b.0 - 1, b.1)).map_or((0, &[][..]), |s| (s.0, &s.1[..]));
            let torsion = factors.iter().flat_map(|&f| prime_power_split(f)).collect();
            (b, GroupDescription::new(c.dim(b) - out - inr, torsion))
        })
        .collect()
}

fn over_field(c: &BigradedComplex, ch: u32) -> Vec<(Bigrade, GroupDescription)> {
    let ranks: BTreeMap<Bigrade, usize> = c
        .d()
        .blocks()
        .map(|(b, m)| (b, if ch == 2 { rank_mod2(m) } else { rank_over_field(m, ch) }))
        .collect();
    c.bigrades()
        .map(|b| {
            let out = ranks.get(&b).copied().unwrap_or(0);
            let inr = ranks.get(&(b.0 - 1, b.1)).copied().unwrap_or(0);
            (b, GroupDescription::new(c.dim(b) - out - inr, vec![]))
        })
        .collect()
}

/// Over `Z/2^r`: cancel unit entries first, then decompose each cell of the
/// (much smaller) reduced complex.
fn over_z2k(c: &BigradedComplex, r: u32) -> Vec<(Bigrade, GroupDescription)> {
    let red = reduced_complex(c, r);
    let mut by_cell: BTreeMap<Bigrade, Vec<usize>> = BTreeMap::new();
    for k in red.complex.alive() {
        by_cell.entry(red.bigrades[k]).or_default().push(k);
    }
    by_cell
        .iter()
        .map(|(&b, gens)| {
            let none = Vec::new();
            let prev = by_cell.get(&(b.0 - 1, b.1)).unwrap_or(&none);
            let next = by_cell.get(&(b.0 + 1, b.1)).unwrap_or(&none);
            let d_in = red.complex.block(prev, gens);
            let d_out = red.complex.block(gens, next);
            (b, zmod::homology(&d_in, &d_out, r))
        })
        .collect()
}

/// A complex over `Z/2^r` after cancelling every unit entry of `d`.
pub struct ReducedComplex {
    pub complex: CancellationComplex,
    /// Bigrade of every original generator, by global index.
    pub bigrades: Vec<Bigrade>,
}

/// Loads `d` of `c` into a cancellation complex over `Z/2^r` (levels are the
/// internal degree) and cancels all unit entries.
pub fn reduced_complex(c: &BigradedComplex, r: u32) -> ReducedComplex {
    let (cc, bigrades, _) = load(c, r, &[c.d()]);
    let mut cc = cc;
    cc.cancel_all();
    ReducedComplex {
        complex: cc,
        bigrades,
    }
}

/// Global indexing of generators: cells in bigrade order, generators in cell
/// order. Returns the cancellation complex holding the sum of `maps`, the
/// bigrade of every generator, and each cell's starting offset.
pub(crate) fn load(
    c: &BigradedComplex,
    r: u32,
    maps: &[&crate::complex::GradedMap],
) -> (CancellationComplex, Vec<Bigrade>, BTreeMap<Bigrade, usize>) {
    let mut offsets = BTreeMap::new();
    let mut bigrades = Vec::new();
    for (b, cell) in c.cells() {
        offsets.insert(b, bigrades.len());
        bigrades.extend(core::iter::repeat(b).take(cell.len()));
    }
    let mut cc = CancellationComplex::new(r, bigrades.iter().map(|&(i, j)| (i, j)));
    for m in maps {
        for (src, block) in m.blocks() {
            let Some(&tgt_off) = offsets.get(&m.target(src)) else {
                continue;
            };
            let src_off = offsets[&src];
            for (row, col, v) in block.triplets() {
                cc.add_entry(src_off + col, tgt_off + row, v);
            }
        }
    }
    (cc, bigrades, offsets)
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("expected a table over {expected}, got one over {got}")]
    WrongRing { expected: Ring, got: Ring },
}

/// Thinness of a link's homology over Q, Z and Z/2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinnessReport {
    pub q_thin: bool,
    pub z_thin: bool,
    pub z2_thin: bool,
    pub h_slim: bool,
    pub diagonals_q: BTreeSet<i32>,
    pub diagonals_z: BTreeSet<i32>,
    pub diagonals_z2: BTreeSet<i32>,
}

/// True when the diagonals fit in `{delta, delta + 2}` for some `delta`.
pub fn on_two_adjacent_diagonals(diagonals: &BTreeSet<i32>) -> bool {
    match (diagonals.first(), diagonals.last()) {
        (Some(lo), Some(hi)) => hi - lo <= 2 && diagonals.iter().all(|d| (d - lo) % 2 == 0),
        _ => true,
    }
}

pub fn classify_thinness(
    q: &HomologyTable,
    z: &HomologyTable,
    z2: &HomologyTable,
) -> Result<ThinnessReport, HomologyError> {
    for (t, want) in [(q, Ring::Q), (z, Ring::Z), (z2, Ring::Z2)] {
        if t.ring != want {
            return Err(HomologyError::WrongRing {
                expected: want,
                got: t.ring,
            });
        }
    }
    let diagonals_q = q.support_diagonals();
    let diagonals_z = z.support_diagonals();
    let diagonals_z2 = z2.support_diagonals();
    let z_thin = on_two_adjacent_diagonals(&diagonals_z);
    // the upper diagonal is the one with smaller 2i - j; some choice of a
    // pair {delta, delta + 2} must leave delta torsion-free
    let h_slim = z_thin && {
        let lo = diagonals_z.first().copied().unwrap_or(0);
        let hi = diagonals_z.last().copied().unwrap_or(0);
        let torsion_free = |delta: i32| {
            z.entries()
                .filter(|((i, j), _)| 2 * i - j == delta)
                .all(|(_, g)| g.torsion.is_empty())
        };
        // a single diagonal can be taken as the lower one
        lo == hi || torsion_free(lo)
    };
    Ok(ThinnessReport {
        q_thin: on_two_adjacent_diagonals(&diagonals_q),
        z_thin,
        z2_thin: on_two_adjacent_diagonals(&diagonals_z2),
        h_slim,
        diagonals_q,
        diagonals_z,
        diagonals_z2,
    })
}

/// Every torsion order in the table, with multiplicity, ascending.
pub fn torsion_summary(z: &HomologyTable) -> Vec<u64> {
    let mut t: Vec<u64> = z.entries().flat_map(|(_, g)| g.torsion.iter().copied()).collect();
    t.sort_unstable();
    t
}
