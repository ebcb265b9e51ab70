//! Maps induced on mod-2 Khovanov homology (`nu*`, `d_T*`, the Bockstein
//! `beta`), the Turner and Bockstein spectral sequence pages, and the checks
//! relating them.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{build_complex, nu_map, turner_map, BigradedComplex, ComplexError, GradedMap};
use crate::diagram::PlanarDiagram;
use crate::homology::{homology_of, load, on_two_adjacent_diagonals, reduced_complex, torsion_summary, HomologyTable};
use crate::linalg::gf2::{kernel_mod2, Echelon};
use crate::linalg::rank::{rank_mod2, rank_over_field};
use crate::linalg::{zmod, BitVec, SparseMatrix};
use crate::ring::Ring;
use crate::Bigrade;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiffopsError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("expected a complex over {expected}, got {got}")]
    WrongRing { expected: Ring, got: Ring },
    #[error("map of bidegree {0:?} does not commute with d mod 2")]
    NotAChainMap(Bigrade),
    #[error("vector at {0:?} is not a cocycle mod 2")]
    NotACocycle(Bigrade),
    #[error("d of a lifted cocycle at {0:?} has an odd entry")]
    OddEntry(Bigrade),
    #[error("map of bidegree {0:?} sends a boundary at {1:?} outside the boundaries")]
    IllDefined(Bigrade, Bigrade),
}

/// Reduced echelon rows tagged with coordinates in the homology basis.
#[derive(Clone, Debug)]
struct TaggedEchelon {
    rows: Vec<(usize, BitVec, BitVec)>,
}

impl TaggedEchelon {
    fn reduce(&self, v: &mut BitVec, tag: &mut BitVec) {
        for (p, row, t) in &self.rows {
            if v.get(*p) {
                v.xor_assign(row);
                tag.xor_assign(t);
            }
        }
    }

    fn insert(&mut self, mut v: BitVec, mut tag: BitVec) {
        self.reduce(&mut v, &mut tag);
        let p = v.first_one().expect("inserted vectors are independent");
        for (_, row, t) in &mut self.rows {
            if row.get(p) {
                row.xor_assign(&v);
                t.xor_assign(&tag);
            }
        }
        let at = self.rows.partition_point(|r| r.0 < p);
        self.rows.insert(at, (p, v, tag));
    }
}

#[derive(Clone, Debug)]
struct CellBasis {
    dim: usize,
    boundaries: Echelon,
    reps: Vec<BitVec>,
    proj: TaggedEchelon,
}

/// A basis of `H(C; Z/2)` in every bigrade: cocycle representatives, fully
/// reduced against the boundaries and each other, plus the data to project
/// any cocycle onto its class.
#[derive(Clone, Debug)]
pub struct HomologyBasisMod2 {
    cells: BTreeMap<Bigrade, CellBasis>,
}

fn column_mod2(m: &SparseMatrix, c: usize) -> BitVec {
    let mut v = BitVec::zeros(m.rows());
    for &(r, a) in m.column(c) {
        if a & 1 == 1 {
            v.toggle(r as usize);
        }
    }
    v
}

impl HomologyBasisMod2 {
    pub fn new(c: &BigradedComplex) -> Result<Self, DiffopsError> {
        if c.ring() != Ring::Z2 {
            return Err(DiffopsError::WrongRing {
                expected: Ring::Z2,
                got: c.ring(),
            });
        }
        let mut cells = BTreeMap::new();
        for (b, gens) in c.cells() {
            let dim = gens.len();
            let mut boundaries = Echelon::new(dim);
            if let Some(d_in) = c.d().block((b.0 - 1, b.1)) {
                for k in 0..d_in.cols() {
                    boundaries.insert(column_mod2(d_in, k));
                }
            }
            let cocycles = match c.d().block(b) {
                Some(d_out) => kernel_mod2(d_out),
                None => (0..dim).map(|k| BitVec::unit(dim, k)).collect(),
            };
            // reduce cocycles against the boundaries; what is left spans a
            // complement with pivots disjoint from the boundary pivots
            let mut rest = Echelon::new(dim);
            for mut z in cocycles {
                boundaries.reduce(&mut z);
                rest.insert(z);
            }
            let reps: Vec<BitVec> = rest.rows().map(|r| r.1.clone()).collect();
            let m = reps.len();
            let mut proj = TaggedEchelon { rows: Vec::new() };
            for (_, row) in boundaries.rows() {
                proj.insert(row.clone(), BitVec::zeros(m));
            }
            for (k, r) in reps.iter().enumerate() {
                proj.insert(r.clone(), BitVec::unit(m, k));
            }
            cells.insert(
                b,
                CellBasis {
                    dim,
                    boundaries,
                    reps,
                    proj,
                },
            );
        }
        Ok(HomologyBasisMod2 { cells })
    }

    pub fn dim(&self, b: Bigrade) -> usize {
        self.cells.get(&b).map_or(0, |c| c.reps.len())
    }

    pub fn total_dim(&self) -> usize {
        self.cells.values().map(|c| c.reps.len()).sum()
    }

    pub fn bigrades(&self) -> impl Iterator<Item = Bigrade> + '_ {
        self.cells.iter().filter(|(_, c)| !c.reps.is_empty()).map(|(&b, _)| b)
    }

    pub fn dims(&self) -> BTreeMap<Bigrade, usize> {
        self.cells
            .iter()
            .filter(|(_, c)| !c.reps.is_empty())
            .map(|(&b, c)| (b, c.reps.len()))
            .collect()
    }

    pub fn representatives(&self, b: Bigrade) -> &[BitVec] {
        self.cells.get(&b).map_or(&[], |c| c.reps.as_slice())
    }

    pub fn is_boundary(&self, b: Bigrade, v: &BitVec) -> bool {
        v.is_zero() || self.cells.get(&b).is_some_and(|c| c.boundaries.contains(v))
    }

    /// Basis vectors of the boundary space at `b`.
    pub fn boundary_basis(&self, b: Bigrade) -> Vec<BitVec> {
        self.cells
            .get(&b)
            .map(|c| c.boundaries.rows().map(|r| r.1.clone()).collect())
            .unwrap_or_default()
    }

    /// Coordinates of the class of a cocycle.
    pub fn project(&self, b: Bigrade, v: &BitVec) -> Result<BitVec, DiffopsError> {
        let Some(cell) = self.cells.get(&b) else {
            return if v.is_zero() {
                Ok(BitVec::zeros(0))
            } else {
                Err(DiffopsError::NotACocycle(b))
            };
        };
        debug_assert_eq!(v.len(), cell.dim);
        let mut v = v.clone();
        let mut tag = BitVec::zeros(cell.reps.len());
        cell.proj.reduce(&mut v, &mut tag);
        if v.is_zero() {
            Ok(tag)
        } else {
            Err(DiffopsError::NotACocycle(b))
        }
    }
}

/// A dense mod-2 matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Block {
    rows: usize,
    cols: Vec<BitVec>,
}

impl Gf2Block {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Block {
            rows,
            cols: vec![BitVec::zeros(rows); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, k: usize) -> &BitVec {
        &self.cols[k]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.cols[c].get(r)
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.rows);
        self.cols.iter().filter(|c| e.insert((*c).clone())).count()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BitVec::is_zero)
    }

    pub fn apply(&self, v: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.rows);
        for k in v.ones() {
            out.xor_assign(&self.cols[k]);
        }
        out
    }

    /// `self * first`.
    pub fn mul(&self, first: &Gf2Block) -> Gf2Block {
        Gf2Block {
            rows: self.rows,
            cols: first.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &Gf2Block) -> Gf2Block {
        let mut out = self.clone();
        for (a, b) in out.cols.iter_mut().zip(&other.cols) {
            a.xor_assign(b);
        }
        out
    }
}

/// A map on mod-2 homology in the basis of a [`HomologyBasisMod2`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedMap {
    bidegree: Bigrade,
    dims: BTreeMap<Bigrade, usize>,
    blocks: BTreeMap<Bigrade, Gf2Block>,
}

impl InducedMap {
    pub fn bidegree(&self) -> Bigrade {
        self.bidegree
    }

    fn target(&self, b: Bigrade) -> Bigrade {
        (b.0 + self.bidegree.0, b.1 + self.bidegree.1)
    }

    fn dim(&self, b: Bigrade) -> usize {
        self.dims.get(&b).copied().unwrap_or(0)
    }

    /// Block from `src` to `src + bidegree`; zero if either side is trivial.
    pub fn block(&self, src: Bigrade) -> Gf2Block {
        self.blocks
            .get(&src)
            .cloned()
            .unwrap_or_else(|| Gf2Block::zeros(self.dim(self.target(src)), self.dim(src)))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Bigrade, &Gf2Block)> {
        self.blocks.iter().map(|(&b, m)| (b, m))
    }

    pub fn rank(&self) -> usize {
        self.blocks.values().map(Gf2Block::rank).sum()
    }

    pub fn rank_at(&self, src: Bigrade) -> usize {
        self.blocks.get(&src).map_or(0, Gf2Block::rank)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(Gf2Block::is_zero)
    }

    /// `self . first`.
    pub fn after(&self, first: &InducedMap) -> InducedMap {
        let bidegree = (
            self.bidegree.0 + first.bidegree.0,
            self.bidegree.1 + first.bidegree.1,
        );
        let blocks = first
            .blocks
            .iter()
            .map(|(&b, f)| {
                let g = self.block(first.target(b));
                (b, g.mul(f))
            })
            .collect();
        InducedMap {
            bidegree,
            dims: self.dims.clone(),
            blocks,
        }
    }

    pub fn add(&self, other: &InducedMap) -> InducedMap {
        assert_eq!(self.bidegree, other.bidegree);
        let mut blocks = self.blocks.clone();
        for (&b, m) in &other.blocks {
            let sum = match blocks.get(&b) {
                Some(a) => a.add(m),
                None => m.clone(),
            };
            blocks.insert(b, sum);
        }
        InducedMap {
            bidegree: self.bidegree,
            dims: self.dims.clone(),
            blocks,
        }
    }

    /// Source bigrades where the two maps differ.
    pub fn differences(&self, other: &InducedMap) -> Vec<Bigrade> {
        let mut keys: Vec<Bigrade> = self.blocks.keys().chain(other.blocks.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .filter(|&b| self.block(b) != other.block(b))
            .collect()
    }
}

fn apply_mod2(f: &GradedMap, src: Bigrade, v: &BitVec) -> Option<BitVec> {
    f.block(src).map(|m| m.apply_mod2(v))
}

/// The map on mod-2 homology induced by a chain map `f` of `c` (over Z/2).
pub fn induced_map(
    basis: &HomologyBasisMod2,
    c: &BigradedComplex,
    f: &GradedMap,
) -> Result<InducedMap, DiffopsError> {
    let fd = f.after(c.d(), c).map_err(ComplexError::from)?;
    let df = c.d().after(f, c).map_err(ComplexError::from)?;
    let comm = fd.add(&df).map_err(ComplexError::from)?.reduce_mod(2);
    if comm.blocks().any(|(_, m)| !m.is_zero()) {
        return Err(DiffopsError::NotAChainMap(f.bidegree()));
    }
    let mut blocks = BTreeMap::new();
    for (&b, cell) in &basis.cells {
        let tgt = f.target(b);
        for (_, z) in cell.boundaries.rows() {
            if let Some(img) = apply_mod2(f, b, z) {
                if !basis.is_boundary(tgt, &img) {
                    return Err(DiffopsError::IllDefined(f.bidegree(), b));
                }
            }
        }
        if cell.reps.is_empty() || basis.dim(tgt) == 0 {
            continue;
        }
        let cols = cell
            .reps
            .iter()
            .map(|r| {
                let img = apply_mod2(f, b, r).expect("source cell has a block");
                basis.project(tgt, &img)
            })
            .collect::<Result<Vec<_>, _>>()?;
        blocks.insert(
            b,
            Gf2Block {
                rows: basis.dim(tgt),
                cols,
            },
        );
    }
    Ok(InducedMap {
        bidegree: f.bidegree(),
        dims: basis.dims(),
        blocks,
    })
}

/// Lifts a mod-2 vector to `{0, 1}`, applies the integral `d`, checks every
/// entry is even and returns half of it mod 2.
pub fn half_d_mod2(cz: &BigradedComplex, b: Bigrade, v: &BitVec) -> Result<Option<BitVec>, DiffopsError> {
    let Some(m) = cz.d().block(b) else {
        return Ok(None);
    };
    let lift: Vec<i64> = (0..v.len()).map(|k| i64::from(v.get(k))).collect();
    let img = m.apply(&lift);
    let mut out = BitVec::zeros(img.len());
    for (k, &e) in img.iter().enumerate() {
        if e % 2 != 0 {
            return Err(DiffopsError::OddEntry(b));
        }
        if (e / 2) % 2 != 0 {
            out.toggle(k);
        }
    }
    Ok(Some(out))
}

/// The Bockstein homomorphism `beta[c] = [d(c~)/2]` with the `{0, 1}` lift.
pub fn bockstein(basis: &HomologyBasisMod2, cz: &BigradedComplex) -> Result<InducedMap, DiffopsError> {
    if cz.ring() != Ring::Z {
        return Err(DiffopsError::WrongRing {
            expected: Ring::Z,
            got: cz.ring(),
        });
    }
    let mut blocks = BTreeMap::new();
    for (&b, cell) in &basis.cells {
        let tgt = (b.0 + 1, b.1);
        if cell.reps.is_empty() || basis.dim(tgt) == 0 {
            continue;
        }
        let mut cols = Vec::new();
        for r in &cell.reps {
            let half = half_d_mod2(cz, b, r)?.expect("target cell exists");
            cols.push(basis.project(tgt, &half)?);
        }
        blocks.insert(
            b,
            Gf2Block {
                rows: basis.dim(tgt),
                cols,
            },
        );
    }
    Ok(InducedMap {
        bidegree: (1, 0),
        dims: basis.dims(),
        blocks,
    })
}

/// Everything needed to compare the induced maps of one diagram.
pub struct InducedMaps {
    pub basis: HomologyBasisMod2,
    pub nu: InducedMap,
    pub turner: InducedMap,
    pub beta: InducedMap,
}

pub fn induced_maps(d: &PlanarDiagram) -> Result<InducedMaps, DiffopsError> {
    let cz = build_complex(d, Ring::Z)?;
    induced_maps_of(&cz)
}

pub fn induced_maps_of(cz: &BigradedComplex) -> Result<InducedMaps, DiffopsError> {
    let c2 = cz.with_ring(Ring::Z2);
    let basis = HomologyBasisMod2::new(&c2)?;
    let nu = induced_map(&basis, &c2, &nu_map(&c2))?;
    let turner = induced_map(&basis, &c2, &turner_map(&c2)?)?;
    let beta = bockstein(&basis, cz)?;
    Ok(InducedMaps {
        basis,
        nu,
        turner,
        beta,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub holds: bool,
    /// Source bigrades where `d_T*` and `beta nu* + nu* beta` differ.
    pub discrepancies: Vec<Bigrade>,
    pub rank_turner: usize,
    pub rank_beta: usize,
    pub rank_nu: usize,
}

/// Compares `d_T*` with `beta nu* + nu* beta` block by block.
pub fn verify_turner_lemma(d: &PlanarDiagram) -> Result<LemmaReport, DiffopsError> {
    Ok(turner_lemma(&induced_maps(d)?))
}

pub fn turner_lemma(m: &InducedMaps) -> LemmaReport {
    let rhs = m.beta.after(&m.nu).add(&m.nu.after(&m.beta));
    let discrepancies = m.turner.differences(&rhs);
    LemmaReport {
        holds: discrepancies.is_empty(),
        discrepancies,
        rank_turner: m.turner.rank(),
        rank_beta: m.beta.rank(),
        rank_nu: m.nu.rank(),
    }
}

/// Checks `delta(c)/2 = d_T(c)` mod 2 coefficientwise for a mod-2 cocycle
/// `c` at `b`, lifted to `{0, 1}`. `delta` is over Z, `turner` over Z/2.
pub fn chain_identity_check(
    cz: &BigradedComplex,
    delta: &GradedMap,
    turner: &GradedMap,
    b: Bigrade,
    c: &BitVec,
) -> Result<bool, DiffopsError> {
    if let Some(m) = cz.d().block(b) {
        if !m.apply_mod2(c).is_zero() {
            return Err(DiffopsError::NotACocycle(b));
        }
    }
    let lift: Vec<i64> = (0..c.len()).map(|k| i64::from(c.get(k))).collect();
    // a missing block is a zero map
    let img = delta.block(b).map(|m| m.apply(&lift)).unwrap_or_default();
    let want = turner.block(b).map(|m| m.apply_mod2(c));
    if img.iter().any(|e| e % 2 != 0) {
        return Ok(false);
    }
    let half: Vec<usize> = img.iter().enumerate().filter(|(_, e)| (*e / 2) % 2 != 0).map(|(k, _)| k).collect();
    let want: Vec<usize> = want.map(|w| w.ones().collect()).unwrap_or_default();
    Ok(half == want)
}

/// One page of a spectral sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageReport {
    pub page: usize,
    pub dims: BTreeMap<Bigrade, usize>,
    pub total: usize,
    /// Every later differential vanishes.
    pub collapsed: bool,
    /// Rank of the differential leaving this page.
    pub differential_rank: usize,
}

fn page(page: usize, dims: BTreeMap<Bigrade, usize>, collapsed: bool, differential_rank: usize) -> PageReport {
    let dims: BTreeMap<Bigrade, usize> = dims.into_iter().filter(|e| e.1 > 0).collect();
    PageReport {
        page,
        total: dims.values().sum(),
        dims,
        collapsed,
        differential_rank,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TurnerPages {
    /// `E_1, ..., E_rmax`.
    pub pages: Vec<PageReport>,
    pub infinity: PageReport,
}

/// Pages of the Turner spectral sequence of `C(D; Z/2)` filtered by the
/// internal degree. Computed by cancelling entries of `d + d_T` in
/// increasing order of their filtration shift: after the shift-`2(r-1)`
/// stage the surviving generators span `E_r`, and the pairs cancelled at the
/// next stage count the rank of `d_r`.
pub fn turner_pages(c2: &BigradedComplex, r_max: usize) -> Result<TurnerPages, DiffopsError> {
    assert!(r_max >= 1, "r_max must be at least 1");
    let dt = turner_map(c2)?;
    let (mut cc, bigrades, _) = load(c2, 1, &[c2.d(), &dt]);
    let dims_now = |cc: &crate::linalg::reduce::CancellationComplex| {
        let mut m: BTreeMap<Bigrade, usize> = BTreeMap::new();
        for k in cc.alive() {
            *m.entry(bigrades[k]).or_default() += 1;
        }
        m
    };
    cc.cancel_shift(0);
    let mut raw: Vec<(BTreeMap<Bigrade, usize>, usize)> = Vec::new();
    let mut shift = 2;
    loop {
        let dims = dims_now(&cc);
        let pairs = cc.cancel_shift(shift);
        raw.push((dims, pairs));
        shift += 2;
        if cc.min_shift().is_none() && raw.len() >= r_max {
            break;
        }
    }
    let inf_dims = dims_now(&cc);
    let inf_total: usize = inf_dims.values().sum();
    let pages = raw
        .iter()
        .take(r_max)
        .enumerate()
        .map(|(k, (dims, pairs))| {
            let total: usize = dims.values().sum();
            page(k + 1, dims.clone(), total == inf_total, *pairs)
        })
        .collect();
    Ok(TurnerPages {
        pages,
        infinity: page(usize::MAX, inf_dims, true, 0),
    })
}

/// `dim B_r` per bigrade from the integral table:
/// free rank plus the `2^k` summands with `k >= r` at `(i, j)` and `(i+1, j)`.
pub fn bockstein_page_dims(z: &HomologyTable, r: u32) -> PageReport {
    assert!(r >= 1);
    let big = |b: Bigrade, r: u32| {
        z.get(b)
            .map_or(0, |g| g.torsion.iter().filter(|&&t| t.is_power_of_two() && t >= 1 << r).count())
    };
    let dims_at = |r: u32| {
        let mut dims = BTreeMap::new();
        for ((i, j), _) in z.entries() {
            for b in [(i, j), (i - 1, j)] {
                let v = z.free_rank(b) + big(b, r) + big((b.0 + 1, b.1), r);
                if v > 0 {
                    dims.insert(b, v);
                }
            }
        }
        dims
    };
    let dims = dims_at(r);
    let next: usize = dims_at(r + 1).values().sum();
    let total: usize = dims.values().sum();
    let collapsed = !z.entries().any(|(_, g)| g.torsion.iter().any(|&t| t.is_power_of_two() && t >= 1 << r));
    page(r as usize, dims, collapsed, (total - next) / 2)
}

/// `dim B_r` per bigrade computed from `H(C; Z/2^r)` directly: the image of
/// multiplication by `2^(r-1)` has one `Z/2` for every `Z/2^r` summand.
pub fn bockstein_page_direct(cz: &BigradedComplex, r: u32) -> Result<PageReport, DiffopsError> {
    let dims = z2k_top_summands(cz, r)?;
    let next: usize = z2k_top_summands(cz, r + 1)?.values().sum();
    let total: usize = dims.values().sum();
    let q_rank: usize = cz
        .bigrades()
        .map(|b| {
            let out = cz.d().block(b).map_or(0, |m| rank_over_field(m, 0));
            let inr = cz.d().block((b.0 - 1, b.1)).map_or(0, |m| rank_over_field(m, 0));
            cz.dim(b) - out - inr
        })
        .sum();
    Ok(page(r as usize, dims, total == q_rank, (total - next) / 2))
}

fn z2k_top_summands(cz: &BigradedComplex, r: u32) -> Result<BTreeMap<Bigrade, usize>, DiffopsError> {
    if cz.ring() != Ring::Z {
        return Err(DiffopsError::WrongRing {
            expected: Ring::Z,
            got: cz.ring(),
        });
    }
    let red = reduced_complex(cz, r);
    let mut by_cell: BTreeMap<Bigrade, Vec<usize>> = BTreeMap::new();
    for k in red.complex.alive() {
        by_cell.entry(red.bigrades[k]).or_default().push(k);
    }
    let none = Vec::new();
    Ok(by_cell
        .iter()
        .map(|(&b, gens)| {
            let prev = by_cell.get(&(b.0 - 1, b.1)).unwrap_or(&none);
            let next = by_cell.get(&(b.0 + 1, b.1)).unwrap_or(&none);
            let g = zmod::homology(&red.complex.block(prev, gens), &red.complex.block(gens, next), r);
            (b, g.free_rank)
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MainTheoremReport {
    pub verdict: Verdict,
    pub z2_thin: bool,
    pub torsion_only_order_two: bool,
    pub rank_identity: bool,
    pub nu_lower_isomorphism: bool,
    pub beta_vanishes_on_lower: bool,
    pub rank_turner: usize,
    pub rank_beta: usize,
    pub rank_nu: usize,
}

/// Checks the torsion statement for a mod-2 thin diagram and the rank
/// bookkeeping behind it. A thick diagram yields `NotApplicable`.
pub fn verify_main_theorem(d: &PlanarDiagram) -> Result<MainTheoremReport, DiffopsError> {
    let cz = build_complex(d, Ring::Z)?;
    let z = homology_of(&cz);
    let maps = induced_maps_of(&cz)?;
    Ok(main_theorem(&z, &maps))
}

/// The lower diagonal, as the larger value of `2i - j`, when the mod-2
/// homology lies on two adjacent diagonals.
pub fn lower_diagonal(basis: &HomologyBasisMod2) -> Option<i32> {
    let diags: alloc::collections::BTreeSet<i32> = basis.bigrades().map(|(i, j)| 2 * i - j).collect();
    if !on_two_adjacent_diagonals(&diags) {
        return None;
    }
    let lo = *diags.first()?;
    Some(lo + 2)
}

pub fn main_theorem(z: &HomologyTable, m: &InducedMaps) -> MainTheoremReport {
    let rank_turner = m.turner.rank();
    let rank_beta = m.beta.rank();
    let rank_nu = m.nu.rank();
    let lower = lower_diagonal(&m.basis);
    let torsion_only_order_two = torsion_summary(z).iter().all(|&t| t == 2);
    let rank_identity = rank_turner == 2 * rank_beta;
    let on_lower = |b: &Bigrade| Some(2 * b.0 - b.1) == lower;
    let lower_dim: usize = m.basis.bigrades().filter(on_lower).map(|b| m.basis.dim(b)).sum();
    let upper_dim: usize = m.basis.bigrades().filter(|b| !on_lower(b)).map(|b| m.basis.dim(b)).sum();
    let nu_rank_lower: usize = m.basis.bigrades().filter(on_lower).map(|b| m.nu.rank_at(b)).sum();
    let nu_lower_isomorphism = lower.is_some() && lower_dim == upper_dim && nu_rank_lower == lower_dim;
    let beta_vanishes_on_lower = m.basis.bigrades().filter(on_lower).all(|b| m.beta.rank_at(b) == 0);
    let z2_thin = lower.is_some();
    let verdict = if !z2_thin {
        Verdict::NotApplicable
    } else {
        Verdict::from_bool(torsion_only_order_two && rank_identity && nu_lower_isomorphism && beta_vanishes_on_lower)
    };
    MainTheoremReport {
        verdict,
        z2_thin,
        torsion_only_order_two,
        rank_identity,
        nu_lower_isomorphism,
        beta_vanishes_on_lower,
        rank_turner,
        rank_beta,
        rank_nu,
    }
}

/// `dim H(C, nu)` summed over all cells: zero when `nu` is acyclic mod 2.
pub fn nu_homology_dim(c2: &BigradedComplex) -> usize {
    let nu = nu_map(c2);
    let ranks: BTreeMap<Bigrade, usize> = nu.blocks().map(|(b, m)| (b, rank_mod2(m))).collect();
    c2.bigrades()
        .map(|b| {
            let out = ranks.get(&b).copied().unwrap_or(0);
            let inr = ranks.get(&(b.0, b.1 - 2)).copied().unwrap_or(0);
            c2.dim(b) - out - inr
        })
        .sum()
}

/// `dim H(H(C; Z/2), nu*)`: zero when `nu*` is acyclic.
pub fn nu_star_homology_dim(m: &InducedMaps) -> usize {
    m.basis
        .bigrades()
        .map(|b| m.basis.dim(b) - m.nu.rank_at(b) - m.nu.rank_at((b.0, b.1 - 2)))
        .sum()
}

/// Which of the chain-level identities between `d`, `nu` and `d_T` hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructuralReport {
    /// `d^2 = 0` over Z.
    pub d_squared: bool,
    /// The remaining identities are over Z/2.
    pub nu_squared: bool,
    pub d_nu_commute: bool,
    pub turner_squared: bool,
    pub d_turner_commute: bool,
}

impl StructuralReport {
    pub fn all_hold(&self) -> bool {
        self.d_squared && self.nu_squared && self.d_nu_commute && self.turner_squared && self.d_turner_commute
    }
}

pub fn structural_identities(cz: &BigradedComplex) -> Result<StructuralReport, DiffopsError> {
    if cz.ring() != Ring::Z {
        return Err(DiffopsError::WrongRing {
            expected: Ring::Z,
            got: cz.ring(),
        });
    }
    let c2 = cz.with_ring(Ring::Z2);
    let zero = |m: GradedMap, p: i64| m.reduce_mod(p).is_zero();
    let compose = |a: &GradedMap, b: &GradedMap, c: &BigradedComplex| b.after(a, c).map_err(ComplexError::from);
    let commutator = |a: &GradedMap, b: &GradedMap| -> Result<bool, DiffopsError> {
        let s = compose(a, b, &c2)?.add(&compose(b, a, &c2)?).map_err(ComplexError::from)?;
        Ok(zero(s, 2))
    };
    let d = c2.d();
    let nu = nu_map(&c2);
    let dt = turner_map(&c2)?;
    Ok(StructuralReport {
        d_squared: compose(cz.d(), cz.d(), cz)?.is_zero(),
        nu_squared: zero(compose(&nu, &nu, &c2)?, 2),
        d_nu_commute: commutator(d, &nu)?,
        turner_squared: zero(compose(&dt, &dt, &c2)?, 2),
        d_turner_commute: commutator(d, &dt)?,
    })
}
