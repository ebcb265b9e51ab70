//! The bigraded Khovanov chain complex and the maps `nu`, `d_T`, `delta`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::diagram::PlanarDiagram;
use crate::jones::LaurentPolynomial;
use crate::linalg::{LinalgError, SparseMatrix};
use crate::ring::Ring;
use crate::statecube::{CubeEdge, CubeError, CubeLimits, EdgeCircles, KauffmanState, StateCube};
use crate::Bigrade;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error(transparent)]
    Cube(#[from] CubeError),
    #[error("{op} is only defined over {needs}, not over {ring}")]
    WrongRing {
        op: &'static str,
        needs: Ring,
        ring: Ring,
    },
    #[error("states {0:#b} and {1:#b} are not joined by a cube edge")]
    NotAdjacent(u64, u64),
    #[error("generator is not part of the complex")]
    UnknownGenerator,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A basis element of the complex: a state and one label per circle
/// (bit `k` set means `X` on circle `k`, clear means `1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    pub state: KauffmanState,
    pub labels: u64,
    pub qdeg: i32,
}

impl Generator {
    pub fn x_count(&self) -> u32 {
        self.labels.count_ones()
    }
}

/// A map of the complex with a fixed bidegree, stored as one sparse block
/// per source cell. Rows index the target cell (empty if it does not exist).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMap {
    bidegree: Bigrade,
    blocks: BTreeMap<Bigrade, SparseMatrix>,
}

impl GradedMap {
    pub fn bidegree(&self) -> Bigrade {
        self.bidegree
    }

    pub fn block(&self, src: Bigrade) -> Option<&SparseMatrix> {
        self.blocks.get(&src)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Bigrade, &SparseMatrix)> {
        self.blocks.iter().map(|(&k, v)| (k, v))
    }

    pub fn target(&self, src: Bigrade) -> Bigrade {
        (src.0 + self.bidegree.0, src.1 + self.bidegree.1)
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.values().all(SparseMatrix::is_zero)
    }

    pub fn nnz(&self) -> usize {
        self.blocks.values().map(SparseMatrix::nnz).sum()
    }

    pub fn reduce_mod(&self, m: i64) -> GradedMap {
        GradedMap {
            bidegree: self.bidegree,
            blocks: self.blocks.iter().map(|(&k, b)| (k, b.reduce_mod(m))).collect(),
        }
    }

    pub fn scale(&self, k: i64) -> GradedMap {
        GradedMap {
            bidegree: self.bidegree,
            blocks: self.blocks.iter().map(|(&s, b)| (s, b.scale(k))).collect(),
        }
    }

    /// `self . first`, with blocks for every cell of `c`.
    pub fn after(&self, first: &GradedMap, c: &BigradedComplex) -> Result<GradedMap, LinalgError> {
        let bidegree = (
            self.bidegree.0 + first.bidegree.0,
            self.bidegree.1 + first.bidegree.1,
        );
        let mut blocks = BTreeMap::new();
        for (&src, f) in &first.blocks {
            let mid = first.target(src);
            let tgt = (src.0 + bidegree.0, src.1 + bidegree.1);
            let m = match self.blocks.get(&mid) {
                Some(g) => g.mul(f)?,
                None => SparseMatrix::zeros(c.dim(tgt), f.cols()),
            };
            blocks.insert(src, m);
        }
        Ok(GradedMap { bidegree, blocks })
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap, LinalgError> {
        assert_eq!(self.bidegree, other.bidegree, "adding maps of different bidegree");
        let mut blocks = self.blocks.clone();
        for (&k, b) in &other.blocks {
            let sum = match blocks.get(&k) {
                Some(a) => a.add(b)?,
                None => b.clone(),
            };
            blocks.insert(k, sum);
        }
        Ok(GradedMap {
            bidegree: self.bidegree,
            blocks,
        })
    }
}

/// Khovanov chain complex of a diagram: generators grouped into cells
/// `(i, j)`, sorted by `(state, labels)` inside each cell, and the
/// differential `d` of bidegree `(1, 0)`.
#[derive(Clone, Debug)]
pub struct BigradedComplex {
    ring: Ring,
    cube: StateCube,
    cells: BTreeMap<Bigrade, Vec<Generator>>,
    d: GradedMap,
}

impl BigradedComplex {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn diagram(&self) -> &PlanarDiagram {
        self.cube.diagram()
    }

    pub fn cube(&self) -> &StateCube {
        &self.cube
    }

    pub fn cells(&self) -> impl Iterator<Item = (Bigrade, &[Generator])> {
        self.cells.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub fn bigrades(&self) -> impl Iterator<Item = Bigrade> + '_ {
        self.cells.keys().copied()
    }

    pub fn cell(&self, b: Bigrade) -> &[Generator] {
        self.cells.get(&b).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, b: Bigrade) -> usize {
        self.cell(b).len()
    }

    pub fn total_dim(&self) -> usize {
        self.cells.values().map(Vec::len).sum()
    }

    pub fn d(&self) -> &GradedMap {
        &self.d
    }

    pub fn bigrade_of(&self, g: &Generator) -> Bigrade {
        (self.cube.state(g.state).i, g.qdeg)
    }

    /// Index of `g` inside its cell.
    pub fn index_of(&self, g: &Generator) -> Option<usize> {
        let cell = self.cells.get(&self.bigrade_of(g))?;
        cell.binary_search_by_key(&(g.state, g.labels), |h| (h.state, h.labels))
            .ok()
    }

    pub fn generator(&self, state: KauffmanState, labels: u64) -> Generator {
        let r = self.cube.state(state);
        Generator {
            state,
            labels,
            qdeg: qdeg(r.j, r.circle_count, labels),
        }
    }

    /// The same complex with coefficients in another ring.
    pub fn with_ring(&self, ring: Ring) -> BigradedComplex {
        BigradedComplex {
            ring,
            cube: self.cube.clone(),
            cells: self.cells.clone(),
            d: reduce_for(&self.d, ring),
        }
    }

    /// `sum (-1)^i q^j` over all generators.
    pub fn euler_characteristic(&self) -> LaurentPolynomial {
        let mut p = LaurentPolynomial::zero();
        for (&(i, j), cell) in &self.cells {
            let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
            p.add_term(j, sign * cell.len() as i64);
        }
        p
    }

    /// Builds a map of bidegree `bidegree` from a per-generator rule that
    /// pushes `(target state, target labels, coefficient)`.
    fn assemble(
        &self,
        bidegree: Bigrade,
        mut image: impl FnMut(&Generator, &mut Vec<(KauffmanState, u64, i64)>),
    ) -> GradedMap {
        let mut blocks = BTreeMap::new();
        let mut buf = Vec::new();
        for (&src, cell) in &self.cells {
            let tgt = (src.0 + bidegree.0, src.1 + bidegree.1);
            let tcell = self.cell(tgt);
            let mut trip = Vec::new();
            for (col, x) in cell.iter().enumerate() {
                buf.clear();
                image(x, &mut buf);
                for &(s, labels, v) in &buf {
                    let row = tcell
                        .binary_search_by_key(&(s, labels), |h| (h.state, h.labels))
                        .expect("image generator lies in the target cell");
                    trip.push((row, col, v));
                }
            }
            blocks.insert(src, SparseMatrix::from_triplets(tcell.len(), cell.len(), trip));
        }
        GradedMap { bidegree, blocks }
    }
}

fn qdeg(j: i32, circles: usize, labels: u64) -> i32 {
    j + circles as i32 - 2 * labels.count_ones() as i32
}

fn reduce_for(m: &GradedMap, ring: Ring) -> GradedMap {
    match ring {
        Ring::Z | Ring::Q => m.clone(),
        r => m.reduce_mod(r.characteristic() as i64),
    }
}

/// Edges leaving every state, with their circle correspondences.
fn edge_table(cube: &StateCube) -> Vec<Vec<(CubeEdge, EdgeCircles)>> {
    cube.states()
        .map(|(s, _)| {
            (0..cube.crossing_count())
                .filter(|&c| !s.is_negative(c))
                .map(|c| (cube.edge(s, c), cube.edge_circles(s, c)))
                .collect()
        })
        .collect()
}

/// Khovanov complex of `d` over `ring`.
pub fn build_complex(d: &PlanarDiagram, ring: Ring) -> Result<BigradedComplex, ComplexError> {
    build_complex_with(d, ring, CubeLimits::default())
}

pub fn build_complex_with(
    d: &PlanarDiagram,
    ring: Ring,
    limits: CubeLimits,
) -> Result<BigradedComplex, ComplexError> {
    let cube = StateCube::new(d, limits)?;
    let mut cells: BTreeMap<Bigrade, Vec<Generator>> = BTreeMap::new();
    for (s, r) in cube.states() {
        for labels in 0..1u64 << r.circle_count {
            let g = Generator {
                state: s,
                labels,
                qdeg: qdeg(r.j, r.circle_count, labels),
            };
            cells.entry((r.i, g.qdeg)).or_default().push(g);
        }
    }
    let mut c = BigradedComplex {
        ring,
        cube,
        cells,
        d: GradedMap {
            bidegree: (1, 0),
            blocks: BTreeMap::new(),
        },
    };
    let edges = edge_table(&c.cube);
    let mut targets = Vec::new();
    let d_z = c.assemble((1, 0), |x, out| {
        for (edge, ec) in &edges[x.state.0 as usize] {
            targets.clear();
            ec.khovanov(x.labels, &mut targets);
            for &t in &targets {
                out.push((edge.to, t, i64::from(edge.sign)));
            }
        }
    });
    c.d = reduce_for(&d_z, ring);
    Ok(c)
}

/// `nu`: every `X` label replaced by `1`, one at a time, summed.
pub fn nu_map(c: &BigradedComplex) -> GradedMap {
    let m = c.assemble((0, 2), |x, out| {
        let mut bits = x.labels;
        while bits != 0 {
            let b = bits.trailing_zeros();
            bits &= bits - 1;
            out.push((x.state, x.labels ^ 1 << b, 1));
        }
    });
    reduce_for(&m, c.ring)
}

/// The Turner differential, defined over Z/2 only.
pub fn turner_map(c: &BigradedComplex) -> Result<GradedMap, ComplexError> {
    if c.ring != Ring::Z2 {
        return Err(ComplexError::WrongRing {
            op: "the Turner differential",
            needs: Ring::Z2,
            ring: c.ring,
        });
    }
    let edges = edge_table(&c.cube);
    Ok(c.assemble((1, 2), |x, out| {
        for (edge, ec) in &edges[x.state.0 as usize] {
            if let Some(t) = ec.turner(x.labels) {
                out.push((edge.to, t, 1));
            }
        }
    }))
}

/// `delta = d nu + nu d` over Z.
pub fn delta_map(c: &BigradedComplex) -> Result<GradedMap, ComplexError> {
    if c.ring != Ring::Z {
        return Err(ComplexError::WrongRing {
            op: "delta",
            needs: Ring::Z,
            ring: c.ring,
        });
    }
    let nu = nu_map(c);
    let a = c.d.after(&nu, c)?;
    let b = nu.after(&c.d, c)?;
    Ok(a.add(&b)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairType {
    A,
    B,
    CMerge,
    CSplit,
}

impl PairType {
    pub fn name(self) -> &'static str {
        match self {
            PairType::A => "A",
            PairType::B => "B",
            PairType::CMerge => "C_m",
            PairType::CSplit => "C_Delta",
        }
    }
}

/// One zig-zag `x -> y -> z` through a middle generator `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ZigZag {
    pub via: Generator,
    /// The circle whose `X` becomes `1` passes through the edge's crossing.
    pub hat: bool,
}

/// Zig-zags from `x` to `z`: `lower` goes through `d` then `nu`, `upper`
/// through `nu` then `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClassification {
    pub kind: PairType,
    pub edge: CubeEdge,
    pub lower: Vec<ZigZag>,
    pub upper: Vec<ZigZag>,
}

impl PairClassification {
    pub fn lower_hat(&self) -> impl Iterator<Item = &ZigZag> {
        self.lower.iter().filter(|z| z.hat)
    }

    pub fn upper_hat(&self) -> impl Iterator<Item = &ZigZag> {
        self.upper.iter().filter(|z| z.hat)
    }

    pub fn lower_tilde(&self) -> impl Iterator<Item = &ZigZag> {
        self.lower.iter().filter(|z| !z.hat)
    }

    pub fn upper_tilde(&self) -> impl Iterator<Item = &ZigZag> {
        self.upper.iter().filter(|z| !z.hat)
    }
}

/// Enumerates the zig-zags between generators of adjacent states and
/// classifies the pair by the number of hatted ones on each side.
pub fn classify_pair(
    cube: &StateCube,
    x: &Generator,
    z: &Generator,
) -> Result<PairClassification, ComplexError> {
    let diff = x.state.0 ^ z.state.0;
    if diff.count_ones() != 1 || x.state.0 & diff != 0 {
        return Err(ComplexError::NotAdjacent(x.state.0, z.state.0));
    }
    let c = diff.trailing_zeros() as usize;
    let edge = cube.edge(x.state, c);
    let ec = cube.edge_circles(x.state, c);
    let src = cube.state(x.state);
    let dst = cube.state(z.state);
    let make = |state: KauffmanState, labels: u64, r: &crate::statecube::ResolvedState| Generator {
        state,
        labels,
        qdeg: qdeg(r.j, r.circle_count, labels),
    };

    let mut lower = Vec::new();
    let mut ys = Vec::new();
    ec.khovanov(x.labels, &mut ys);
    for &y in &ys {
        let flip = y ^ z.labels;
        if flip.count_ones() == 1 && y & flip != 0 {
            let k = flip.trailing_zeros();
            lower.push(ZigZag {
                via: make(z.state, y, dst),
                hat: k == ec.to.0 || k == ec.to.1,
            });
        }
    }

    let mut upper = Vec::new();
    let mut bits = x.labels;
    while bits != 0 {
        let k = bits.trailing_zeros();
        bits &= bits - 1;
        let y = x.labels ^ 1 << k;
        ys.clear();
        ec.khovanov(y, &mut ys);
        if ys.contains(&z.labels) {
            upper.push(ZigZag {
                via: make(x.state, y, src),
                hat: k == ec.from.0 || k == ec.from.1,
            });
        }
    }

    let counts = (
        lower.iter().filter(|z| z.hat).count(),
        upper.iter().filter(|z| z.hat).count(),
    );
    let kind = match counts {
        (0, 0) => PairType::A,
        (1, 1) => PairType::B,
        (0, 2) => PairType::CMerge,
        (2, 0) => PairType::CSplit,
        other => unreachable!("hat counts {other:?} outside the four pair types"),
    };
    Ok(PairClassification {
        kind,
        edge,
        lower,
        upper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_pd;
    use crate::statecube::EdgeKind;
    use alloc::vec;

    fn trefoil() -> PlanarDiagram {
        parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]").unwrap()
    }

    fn all_maps_compose_to_zero(a: &GradedMap, b: &GradedMap, c: &BigradedComplex, m: i64) -> bool {
        let p = b.after(a, c).unwrap();
        if m == 0 {
            p.is_zero()
        } else {
            p.reduce_mod(m).is_zero()
        }
    }

    #[test]
    fn unknot_single_cell_pair() {
        let c = build_complex(&PlanarDiagram::unlink(1).unwrap(), Ring::Z).unwrap();
        let cells: Vec<_> = c.cells().map(|(b, g)| (b, g.len())).collect();
        assert_eq!(cells, vec![((0, -1), 1), ((0, 1), 1)]);
        assert!(c.d().is_zero());
        assert!(delta_map(&c).unwrap().is_zero());
    }

    #[test]
    fn trefoil_complex_is_a_complex() {
        let c = build_complex(&trefoil(), Ring::Z).unwrap();
        assert!(all_maps_compose_to_zero(c.d(), c.d(), &c, 0));
        assert_eq!(c.euler_characteristic(), LaurentPolynomial::from_terms([(1, 1), (3, 1), (5, 1), (9, -1)]));
        let c2 = c.with_ring(Ring::Z2);
        let nu = nu_map(&c2);
        let dt = turner_map(&c2).unwrap();
        assert!(all_maps_compose_to_zero(&nu, &nu, &c2, 2));
        assert!(all_maps_compose_to_zero(&dt, &dt, &c2, 2));
        let dnu = c2.d().after(&nu, &c2).unwrap().add(&nu.after(c2.d(), &c2).unwrap()).unwrap();
        assert!(dnu.reduce_mod(2).is_zero());
        let ddt = c2.d().after(&dt, &c2).unwrap().add(&dt.after(c2.d(), &c2).unwrap()).unwrap();
        assert!(ddt.reduce_mod(2).is_zero());
        let delta = delta_map(&c).unwrap();
        assert!(delta.blocks().all(|(_, b)| b.triplets().all(|t| t.2 % 2 == 0)));
        assert!(matches!(turner_map(&c), Err(ComplexError::WrongRing { .. })));
    }

    #[test]
    fn nu_examples() {
        // three circles in the all-negative state of the trefoil? use a 2-unlink plus one
        let c = build_complex(&PlanarDiagram::unlink(3).unwrap(), Ring::Z).unwrap();
        let nu = nu_map(&c);
        let s = KauffmanState(0);
        // X X 1 -> 1 X 1 + X 1 1
        let x = c.generator(s, 0b011);
        let src = c.bigrade_of(&x);
        let block = nu.block(src).unwrap();
        let col = c.index_of(&x).unwrap();
        let tgt = c.cell(nu.target(src));
        let mut img: Vec<u64> = block.column(col).iter().map(|&(r, _)| tgt[r as usize].labels).collect();
        img.sort();
        assert_eq!(img, vec![0b001, 0b010]);
        let one = c.generator(s, 0);
        assert!(nu.block(c.bigrade_of(&one)).unwrap().column(c.index_of(&one).unwrap()).is_empty());
        let y = c.generator(s, 0b010);
        let col = nu.block(c.bigrade_of(&y)).unwrap().column(c.index_of(&y).unwrap());
        assert_eq!(col.len(), 1);
        assert_eq!(c.cell(nu.target(c.bigrade_of(&y)))[col[0].0 as usize].labels, 0);
    }

    /// Local labels of the two touched circles, written as in the pair table.
    fn local(labels: u64, circles: (u32, u32), merged: bool) -> &'static str {
        let bit = |k: u32| labels >> k & 1 == 1;
        if merged {
            if bit(circles.0) { "X" } else { "1" }
        } else {
            match (bit(circles.0), bit(circles.1)) {
                (false, false) => "1⊗1",
                (false, true) => "1⊗X",
                (true, false) => "X⊗1",
                (true, true) => "X⊗X",
            }
        }
    }

    /// The local pair table: (x, z, type, |L hat|, |U hat|).
    const TABLE: [(&str, &str, PairType, usize, usize); 16] = [
        ("1⊗1", "1", PairType::A, 0, 0),
        ("1⊗1", "X", PairType::A, 0, 0),
        ("1⊗X", "1", PairType::B, 1, 1),
        ("1⊗X", "X", PairType::A, 0, 0),
        ("X⊗1", "1", PairType::B, 1, 1),
        ("X⊗1", "X", PairType::A, 0, 0),
        ("X⊗X", "1", PairType::A, 0, 0),
        ("X⊗X", "X", PairType::CMerge, 0, 2),
        ("1", "1⊗1", PairType::CSplit, 2, 0),
        ("1", "1⊗X", PairType::A, 0, 0),
        ("1", "X⊗1", PairType::A, 0, 0),
        ("1", "X⊗X", PairType::A, 0, 0),
        ("X", "1⊗1", PairType::A, 0, 0),
        ("X", "1⊗X", PairType::B, 1, 1),
        ("X", "X⊗1", PairType::B, 1, 1),
        ("X", "X⊗X", PairType::A, 0, 0),
    ];

    #[test]
    fn pair_table_matches_on_every_trefoil_edge() {
        let d = trefoil();
        let cube = StateCube::new(&d, CubeLimits::default()).unwrap();
        let mut seen = BTreeMap::new();
        for e in cube.edges() {
            let ec = cube.edge_circles(e.from, e.crossing);
            let ns = cube.state(e.from).circle_count;
            let nt = cube.state(e.to).circle_count;
            for xl in 0..1u64 << ns {
                for zl in 0..1u64 << nt {
                    if ec.carry(xl) != zl & !(1 << ec.to.0 | 1 << ec.to.1) {
                        continue;
                    }
                    let x = Generator { state: e.from, labels: xl, qdeg: 0 };
                    let z = Generator { state: e.to, labels: zl, qdeg: 0 };
                    let p = classify_pair(&cube, &x, &z).unwrap();
                    let merged = ec.kind == EdgeKind::Merge;
                    let key = (local(xl, ec.from, !merged), local(zl, ec.to, merged));
                    let row = TABLE.iter().find(|r| (r.0, r.1) == key).expect("row in table");
                    assert_eq!(p.kind, row.2, "{key:?}");
                    assert_eq!(p.lower_hat().count(), row.3);
                    assert_eq!(p.upper_hat().count(), row.4);
                    assert_eq!(p.lower_tilde().count(), p.upper_tilde().count());
                    seen.insert(key, ());
                }
            }
        }
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn classify_rejects_non_adjacent() {
        let cube = StateCube::new(&trefoil(), CubeLimits::default()).unwrap();
        let x = Generator { state: KauffmanState(0), labels: 0, qdeg: 0 };
        let z = Generator { state: KauffmanState(0b11), labels: 0, qdeg: 0 };
        assert!(matches!(classify_pair(&cube, &x, &z), Err(ComplexError::NotAdjacent(..))));
        assert!(matches!(classify_pair(&cube, &z, &x), Err(ComplexError::NotAdjacent(..))));
    }
}
