//! Oriented link diagrams given as PD codes.
//!
//! A crossing `X(a,b,c,d)` lists its four arcs starting from the incoming
//! under-strand and going around the crossing. The under-strand runs `a -> c`;
//! the over-strand joins `b` and `d`, and its direction is recovered from the
//! requirement that every arc enters exactly one crossing slot and leaves
//! exactly one. A crossing is positive when the over-strand runs `b -> d`.
//!
//! Crossingless circles cannot be written as crossings, so a diagram also
//! carries a count of free unknotted components (`;unknots=k` in text form).

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("malformed PD code at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("arc {arc} occurs {count} times (expected exactly 2)")]
    ArcMultiplicity { arc: u32, count: usize },
    #[error("arc identifiers must be positive integers")]
    ZeroArc,
    #[error("no consistent orientation: {0}")]
    Orientation(String),
    #[error("a diagram without crossings needs at least one unknot component")]
    Empty,
}

/// A validated PD code with arcs relabelled to `1..=2n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlanarDiagram {
    crossings: Vec<[u32; 4]>,
    signs: Vec<i8>,
    unknots: u32,
    n_components: u32,
}

impl PlanarDiagram {
    /// Validates and orients a list of crossings. Arc identifiers may be any
    /// positive integers; they are relabelled to `1..=2n` preserving order.
    pub fn new(crossings: Vec<[u32; 4]>, unknots: u32) -> Result<Self, DiagramError> {
        if crossings.is_empty() {
            if unknots == 0 {
                return Err(DiagramError::Empty);
            }
            return Ok(PlanarDiagram {
                crossings,
                signs: Vec::new(),
                unknots,
                n_components: unknots,
            });
        }
        let crossings = normalize(crossings)?;
        let incoming = orient(&crossings)?;
        let signs = (0..crossings.len())
            .map(|c| if incoming[4 * c + 1] { 1 } else { -1 })
            .collect();
        let mut d = PlanarDiagram {
            crossings,
            signs,
            unknots,
            n_components: 0,
        };
        d.n_components = d.count_cycles() + unknots;
        Ok(d)
    }

    /// `k` disjoint crossingless circles.
    pub fn unlink(k: u32) -> Result<Self, DiagramError> {
        Self::new(Vec::new(), k)
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        2 * self.crossings.len()
    }

    pub fn unknots(&self) -> u32 {
        self.unknots
    }

    pub fn n_components(&self) -> u32 {
        self.n_components
    }

    /// Crossing signs, `+1` or `-1`, in crossing order.
    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn writhe(&self) -> i32 {
        self.signs.iter().map(|&s| s as i32).sum()
    }

    /// Successor of every arc along the orientation, indexed by `arc - 1`.
    pub fn successors(&self) -> Vec<u32> {
        let mut succ = vec![0u32; self.arc_count()];
        for (x, &s) in self.crossings.iter().zip(&self.signs) {
            let [a, b, c, d] = *x;
            succ[a as usize - 1] = c;
            if s > 0 {
                succ[b as usize - 1] = d;
            } else {
                succ[d as usize - 1] = b;
            }
        }
        succ
    }

    /// Switches every crossing. Reflecting the plane reverses the cyclic
    /// order at each crossing, so `X(a,b,c,d)` becomes `X(a,d,c,b)`.
    pub fn mirror(&self) -> PlanarDiagram {
        PlanarDiagram {
            crossings: self.crossings.iter().map(|&[a, b, c, d]| [a, d, c, b]).collect(),
            signs: self.signs.iter().map(|s| -s).collect(),
            unknots: self.unknots,
            n_components: self.n_components,
        }
    }

    /// Whether the diagram is connected as a planar graph (with free unknot
    /// circles counted as separate pieces). A disconnected diagram is split.
    pub fn is_connected(&self) -> bool {
        if self.crossings.is_empty() {
            return self.unknots == 1;
        }
        if self.unknots > 0 {
            return false;
        }
        let n = self.crossings.len();
        let mut owner = vec![u32::MAX; self.arc_count()];
        let mut uf = UnionFind::new(n);
        for (ci, x) in self.crossings.iter().enumerate() {
            for &a in x {
                let slot = &mut owner[a as usize - 1];
                if *slot == u32::MAX {
                    *slot = ci as u32;
                } else {
                    uf.union(*slot, ci as u32);
                }
            }
        }
        let root = uf.find(0);
        (1..n as u32).all(|c| uf.find(c) == root)
    }

    fn count_cycles(&self) -> u32 {
        let succ = self.successors();
        let mut seen = vec![false; succ.len()];
        let mut cycles = 0;
        for start in 0..succ.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                a = succ[a] as usize - 1;
            }
        }
        cycles
    }
}

impl fmt::Display for PlanarDiagram {
    /// Canonical text form, accepted back by [`parse_pd`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PD[")?;
        for (k, [a, b, c, d]) in self.crossings.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "X({a},{b},{c},{d})")?;
        }
        f.write_str("]")?;
        let default_unknots = if self.crossings.is_empty() { 1 } else { 0 };
        if self.unknots != default_unknots {
            write!(f, ";unknots={}", self.unknots)?;
        }
        Ok(())
    }
}

/// Parses `PD[X(a,b,c,d),...]` with an optional `;unknots=k` suffix.
/// Whitespace is ignored. `PD[]` alone denotes the unknot.
pub fn parse_pd(text: &str) -> Result<PlanarDiagram, DiagramError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    p.expect("PD[")?;
    let mut crossings = Vec::new();
    if !p.eat("]") {
        loop {
            p.expect("X(")?;
            let mut x = [0u32; 4];
            for (k, slot) in x.iter_mut().enumerate() {
                if k > 0 {
                    p.expect(",")?;
                }
                *slot = p.number()?;
            }
            p.expect(")")?;
            crossings.push(x);
            if p.eat("]") {
                break;
            }
            p.expect(",")?;
        }
    }
    let unknots = if p.eat(";") {
        p.expect("unknots=")?;
        p.number()?
    } else if crossings.is_empty() {
        1
    } else {
        0
    };
    if p.pos != p.s.len() {
        return Err(p.error("trailing input"));
    }
    PlanarDiagram::new(crossings, unknots)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> DiagramError {
        DiagramError::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.s[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), DiagramError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&alloc::format!("expected `{tok}`")))
        }
    }

    fn number(&mut self) -> Result<u32, DiagramError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        core::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| self.error("number out of range"))
    }
}

fn normalize(mut crossings: Vec<[u32; 4]>) -> Result<Vec<[u32; 4]>, DiagramError> {
    let mut ids: Vec<u32> = crossings.iter().flatten().copied().collect();
    if ids.contains(&0) {
        return Err(DiagramError::ZeroArc);
    }
    ids.sort_unstable();
    let mut k = 0;
    while k < ids.len() {
        let run = ids[k..].iter().take_while(|&&a| a == ids[k]).count();
        if run != 2 {
            return Err(DiagramError::ArcMultiplicity { arc: ids[k], count: run });
        }
        k += run;
    }
    ids.dedup();
    for x in crossings.iter_mut() {
        for a in x.iter_mut() {
            *a = ids.binary_search(a).unwrap() as u32 + 1;
        }
    }
    Ok(crossings)
}

/// For every slot `4 * crossing + position`, whether the arc there ends at
/// this crossing (is incoming).
fn orient(crossings: &[[u32; 4]]) -> Result<Vec<bool>, DiagramError> {
    let n = crossings.len();
    let mut slots = vec![[usize::MAX; 2]; 2 * n];
    for (ci, x) in crossings.iter().enumerate() {
        for (p, &a) in x.iter().enumerate() {
            let e = &mut slots[a as usize - 1];
            let k = if e[0] == usize::MAX { 0 } else { 1 };
            e[k] = 4 * ci + p;
        }
    }
    let mut partner = vec![0usize; 4 * n];
    for e in &slots {
        partner[e[0]] = e[1];
        partner[e[1]] = e[0];
    }
    let mut state: Vec<Option<bool>> = vec![None; 4 * n];
    let mut stack = Vec::new();
    let assign = |state: &mut Vec<Option<bool>>,
                      stack: &mut Vec<usize>,
                      slot: usize,
                      v: bool|
     -> Result<(), DiagramError> {
        match state[slot] {
            Some(old) if old != v => Err(DiagramError::Orientation(alloc::format!(
                "crossing {} position {} must be both incoming and outgoing",
                slot / 4,
                slot % 4
            ))),
            Some(_) => Ok(()),
            None => {
                state[slot] = Some(v);
                stack.push(slot);
                Ok(())
            }
        }
    };
    for ci in 0..n {
        assign(&mut state, &mut stack, 4 * ci, true)?;
        assign(&mut state, &mut stack, 4 * ci + 2, false)?;
    }
    let mut next_free = 0;
    loop {
        while let Some(slot) = stack.pop() {
            let v = state[slot].unwrap();
            assign(&mut state, &mut stack, partner[slot], !v)?;
            let opposite = slot ^ 2;
            assign(&mut state, &mut stack, opposite, !v)?;
        }
        // Components that never pass under are unconstrained; orient them so
        // the first undetermined over-strand runs b -> d.
        while next_free < n && state[4 * next_free + 1].is_some() {
            next_free += 1;
        }
        if next_free == n {
            break;
        }
        assign(&mut state, &mut stack, 4 * next_free + 1, true)?;
    }
    Ok(state.into_iter().map(|v| v.unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    const TREFOIL: &str = "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]";

    #[test]
    fn empty_pd_is_unknot() {
        let d = parse_pd("PD[]").unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.n_components(), 1);
        assert_eq!(d.writhe(), 0);
        assert_eq!(d.mirror(), d);
        let u2 = parse_pd("PD[];unknots=2").unwrap();
        assert_eq!(u2.n_components(), 2);
        assert!(!u2.is_connected());
        assert_eq!(parse_pd("PD[];unknots=0"), Err(DiagramError::Empty));
    }

    #[test]
    fn trefoil() {
        let d = parse_pd(TREFOIL).unwrap();
        assert_eq!(d.crossing_count(), 3);
        assert_eq!(d.arc_count(), 6);
        assert_eq!(d.n_components(), 1);
        assert_eq!(d.writhe(), 3);
        assert_eq!(d.mirror().writhe(), -3);
        assert_eq!(d.mirror().mirror(), d);
        assert!(d.is_connected());
        // successor permutation traced by hand: 1->2->3->4->5->6->1
        assert_eq!(d.successors(), vec![2, 3, 4, 5, 6, 1]);
    }

    #[test]
    fn missing_arcs_rejected() {
        let err = parse_pd("PD[X(1,4,2,5),X(3,6,4,1)]").unwrap_err();
        assert!(matches!(err, DiagramError::ArcMultiplicity { count: 1, .. }));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "PD[", "PD[X(1,2,3)]", "PD[X(1,1,2,2)", "X(1,1,2,2)", "PD[X(1,1,2,2)];unknots=", "PD[X(1,1,2,2)]x"] {
            assert!(matches!(parse_pd(bad), Err(DiagramError::Syntax { .. })), "{bad}");
        }
        assert_eq!(parse_pd("PD[X(0,0,1,1)]"), Err(DiagramError::ZeroArc));
    }

    #[test]
    fn whitespace_and_relabelling() {
        let d = parse_pd(" PD[ X(10, 40,20,50), X(30,60,40,10),\nX(50,20,60,30) ] ").unwrap();
        assert_eq!(d, parse_pd(TREFOIL).unwrap());
    }

    #[test]
    fn inconsistent_orientation() {
        // Arc 1 enters both of its slots.
        let err = parse_pd("PD[X(1,3,2,4),X(1,4,2,3)]").unwrap_err();
        assert!(matches!(err, DiagramError::Orientation(_)), "{err:?}");
    }

    #[test]
    fn kink_and_hopf() {
        let kink = parse_pd("PD[X(1,1,2,2)]").unwrap();
        assert_eq!(kink.n_components(), 1);
        assert_eq!(kink.writhe().abs(), 1);
        let hopf = parse_pd("PD[X(4,1,3,2),X(2,3,1,4)]").unwrap();
        assert_eq!(hopf.n_components(), 2);
        assert_eq!(hopf.writhe(), 2);
    }

    #[test]
    fn render_round_trip() {
        for text in [TREFOIL, "PD[]", "PD[];unknots=3", "PD[X(1,1,2,2)];unknots=1"] {
            let d = parse_pd(text).unwrap();
            assert_eq!(d.to_string(), text);
            assert_eq!(parse_pd(&d.to_string()).unwrap(), d);
        }
    }
}
