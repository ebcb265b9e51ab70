//! Kauffman states, their circle resolutions, and the edges of the state cube.
//!
//! A state is an `n`-bit word; bit `c` set means a negative marker at
//! crossing `c`. At `X(a,b,c,d)` the positive marker joins arcs `(a,d)` and
//! `(b,c)`, the negative marker joins `(a,b)` and `(c,d)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::diagram::PlanarDiagram;
use crate::unionfind::UnionFind;

/// Marker choice at every crossing; bit `c` = 1 is a negative marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct KauffmanState(pub u64);

impl KauffmanState {
    pub fn is_negative(self, c: usize) -> bool {
        self.0 >> c & 1 == 1
    }

    pub fn negatives(self) -> u32 {
        self.0.count_ones()
    }

    /// `sigma(s)`: positive markers minus negative markers.
    pub fn sigma(self, n: usize) -> i32 {
        n as i32 - 2 * self.negatives() as i32
    }

    pub fn flip(self, c: usize) -> KauffmanState {
        KauffmanState(self.0 ^ (1 << c))
    }
}

/// Upper bound on the crossing count accepted by cube-sized computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubeLimits {
    pub max_crossings: usize,
}

impl Default for CubeLimits {
    fn default() -> Self {
        CubeLimits { max_crossings: 24 }
    }
}

impl CubeLimits {
    pub fn check(&self, d: &PlanarDiagram) -> Result<(), CubeError> {
        let n = d.crossing_count();
        if n > self.max_crossings || n > 62 {
            return Err(CubeError::TooManyCrossings {
                crossings: n,
                cap: self.max_crossings.min(62),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CubeError {
    #[error("diagram has {crossings} crossings, above the cap of {cap}")]
    TooManyCrossings { crossings: usize, cap: usize },
    #[error("a resolution has more than 64 circles")]
    TooManyCircles,
}

/// The circles of one resolution together with the state's gradings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedState {
    pub circle_count: usize,
    /// Circle index of every arc (indexed by `arc - 1`). Circles are numbered
    /// by ascending minimal arc; free unknot circles come last.
    pub arc_to_circle: Vec<u32>,
    pub sigma: i32,
    pub i: i32,
    pub j: i32,
}

/// `(i(s), j(s)) = ((w - sigma)/2, (3w - sigma)/2)`.
pub fn gradings(d: &PlanarDiagram, s: KauffmanState) -> (i32, i32) {
    let w = d.writhe();
    let sigma = s.sigma(d.crossing_count());
    ((w - sigma) / 2, (3 * w - sigma) / 2)
}

pub fn resolve(d: &PlanarDiagram, s: KauffmanState) -> ResolvedState {
    let arcs = d.arc_count();
    let mut uf = UnionFind::new(arcs);
    for (c, &[a, b, cc, dd]) in d.crossings().iter().enumerate() {
        let (a, b, cc, dd) = (a - 1, b - 1, cc - 1, dd - 1);
        if s.is_negative(c) {
            uf.union(a, b);
            uf.union(cc, dd);
        } else {
            uf.union(a, dd);
            uf.union(b, cc);
        }
    }
    let mut root_index = vec![u32::MAX; arcs];
    let mut arc_to_circle = vec![0u32; arcs];
    let mut next = 0u32;
    for arc in 0..arcs {
        let r = uf.find(arc as u32) as usize;
        if root_index[r] == u32::MAX {
            root_index[r] = next;
            next += 1;
        }
        arc_to_circle[arc] = root_index[r];
    }
    let (i, j) = gradings(d, s);
    ResolvedState {
        circle_count: next as usize + d.unknots() as usize,
        arc_to_circle,
        sigma: s.sigma(d.crossing_count()),
        i,
        j,
    }
}

/// Sign of the cube edge leaving `s_plus` through crossing `c`:
/// `(-1)^(number of negative markers of s_plus below c)`.
pub fn edge_sign(s_plus: KauffmanState, c: usize) -> i8 {
    debug_assert!(!s_plus.is_negative(c));
    let below = s_plus.0 & ((1u64 << c) - 1);
    if below.count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeKind {
    Merge,
    Split,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubeEdge {
    pub from: KauffmanState,
    pub to: KauffmanState,
    pub crossing: usize,
    pub sign: i8,
    pub kind: EdgeKind,
}

/// How the circles of `from` correspond to the circles of `to` across one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCircles {
    pub kind: EdgeKind,
    /// Circles of the source touching the crossing (equal for a split).
    pub from: (u32, u32),
    /// Circles of the target touching the crossing (equal for a merge).
    pub to: (u32, u32),
    /// `(source circle, target circle)` for circles away from the crossing.
    pub untouched: Vec<(u32, u32)>,
}

impl EdgeCircles {
    /// Transports the labels of untouched circles; touched bits are left 0.
    pub fn carry(&self, labels: u64) -> u64 {
        self.untouched
            .iter()
            .fold(0, |acc, &(a, b)| acc | ((labels >> a & 1) << b))
    }

    /// Image of a generator's labels under the Khovanov edge map
    /// (`m` on merges, `Delta` on splits), without the edge sign.
    pub fn khovanov(&self, labels: u64, out: &mut Vec<u64>) {
        let base = self.carry(labels);
        match self.kind {
            EdgeKind::Merge => {
                let (p, q) = self.from;
                let (xp, xq) = (labels >> p & 1, labels >> q & 1);
                if xp & xq == 0 {
                    out.push(base | ((xp | xq) << self.to.0));
                }
            }
            EdgeKind::Split => {
                let (r1, r2) = self.to;
                if labels >> self.from.0 & 1 == 0 {
                    out.push(base | 1 << r2);
                    out.push(base | 1 << r1);
                } else {
                    out.push(base | 1 << r1 | 1 << r2);
                }
            }
        }
    }

    /// Image under the Turner edge map: `m_T(X*X) = X`, `Delta_T(1) = 1*1`,
    /// every other basis element goes to zero.
    pub fn turner(&self, labels: u64) -> Option<u64> {
        let base = self.carry(labels);
        match self.kind {
            EdgeKind::Merge => {
                let (p, q) = self.from;
                (labels >> p & 1 == 1 && labels >> q & 1 == 1).then(|| base | 1 << self.to.0)
            }
            EdgeKind::Split => (labels >> self.from.0 & 1 == 0).then_some(base),
        }
    }
}

/// All states of a diagram, resolved once.
#[derive(Clone, Debug)]
pub struct StateCube {
    diagram: PlanarDiagram,
    states: Vec<ResolvedState>,
}

impl StateCube {
    pub fn new(d: &PlanarDiagram, limits: CubeLimits) -> Result<Self, CubeError> {
        limits.check(d)?;
        let states: Vec<ResolvedState> = (0..1u64 << d.crossing_count())
            .map(|s| resolve(d, KauffmanState(s)))
            .collect();
        if states.iter().any(|r| r.circle_count > 64) {
            return Err(CubeError::TooManyCircles);
        }
        Ok(StateCube {
            diagram: d.clone(),
            states,
        })
    }

    pub fn diagram(&self) -> &PlanarDiagram {
        &self.diagram
    }

    pub fn crossing_count(&self) -> usize {
        self.diagram.crossing_count()
    }

    pub fn state(&self, s: KauffmanState) -> &ResolvedState {
        &self.states[s.0 as usize]
    }

    pub fn states(&self) -> impl Iterator<Item = (KauffmanState, &ResolvedState)> {
        self.states
            .iter()
            .enumerate()
            .map(|(k, r)| (KauffmanState(k as u64), r))
    }

    /// Circle correspondence along the edge leaving `s` at crossing `c`.
    /// `s` must carry a positive marker at `c`.
    pub fn edge_circles(&self, s: KauffmanState, c: usize) -> EdgeCircles {
        debug_assert!(!s.is_negative(c));
        let src = self.state(s);
        let dst = self.state(s.flip(c));
        let [a, b, cc, _] = self.diagram.crossings()[c];
        let from = (src.arc_to_circle[a as usize - 1], src.arc_to_circle[b as usize - 1]);
        let to = (dst.arc_to_circle[a as usize - 1], dst.arc_to_circle[cc as usize - 1]);
        let kind = if from.0 == from.1 {
            EdgeKind::Split
        } else {
            EdgeKind::Merge
        };
        let arc_circles = src.circle_count - self.diagram.unknots() as usize;
        let mut seen = vec![false; arc_circles];
        let mut untouched = Vec::with_capacity(src.circle_count);
        for (arc, &k) in src.arc_to_circle.iter().enumerate() {
            if !seen[k as usize] {
                seen[k as usize] = true;
                if k != from.0 && k != from.1 {
                    untouched.push((k, dst.arc_to_circle[arc]));
                }
            }
        }
        let dst_arc_circles = dst.circle_count - self.diagram.unknots() as usize;
        for u in 0..self.diagram.unknots() {
            untouched.push((arc_circles as u32 + u, dst_arc_circles as u32 + u));
        }
        EdgeCircles {
            kind,
            from,
            to,
            untouched,
        }
    }

    pub fn edge(&self, s: KauffmanState, c: usize) -> CubeEdge {
        let kind = if self.state(s).circle_count > self.state(s.flip(c)).circle_count {
            EdgeKind::Merge
        } else {
            EdgeKind::Split
        };
        CubeEdge {
            from: s,
            to: s.flip(c),
            crossing: c,
            sign: edge_sign(s, c),
            kind,
        }
    }

    /// All `n * 2^(n-1)` edges, ordered by source state then crossing.
    pub fn edges(&self) -> Vec<CubeEdge> {
        let n = self.crossing_count();
        let mut out = Vec::with_capacity(n << n.saturating_sub(1));
        for s in 0..1u64 << n {
            let s = KauffmanState(s);
            for c in (0..n).filter(|&c| !s.is_negative(c)) {
                out.push(self.edge(s, c));
            }
        }
        out
    }
}

pub fn cube_edges(d: &PlanarDiagram, limits: CubeLimits) -> Result<Vec<CubeEdge>, CubeError> {
    Ok(StateCube::new(d, limits)?.edges())
}
