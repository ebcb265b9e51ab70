//! Plain-text rendering of homology tables: columns are `i`, rows are `j`
//! (largest on top), and a cell `a,b₂,c₄` stands for `R^a ⊕ Z₂^b ⊕ Z₄^c`.

use std::fmt::Write;

use khtorsion_core::homology::{HomologyTable, ThinnessReport};
use khtorsion_core::linalg::GroupDescription;
use khtorsion_core::Ring;

fn subscript(n: u64) -> String {
    n.to_string()
        .chars()
        .map(|c| char::from_u32(0x2080 + c.to_digit(10).unwrap()).unwrap())
        .collect()
}

/// `a,b₂,c₄`, omitting zero parts.
pub fn cell(g: &GroupDescription) -> String {
    let mut parts = Vec::new();
    if g.free_rank > 0 {
        parts.push(g.free_rank.to_string());
    }
    let mut t = g.torsion.clone();
    t.dedup();
    for order in t {
        parts.push(format!("{}{}", g.count(order), subscript(order)));
    }
    parts.join(",")
}

fn ring_symbol(r: Ring) -> String {
    match r {
        Ring::Z => "Z".into(),
        Ring::Q => "Q".into(),
        Ring::Z2 => "Z₂".into(),
        Ring::Z2Pow(k) => format!("Z{}", subscript(1 << k)),
    }
}

fn width(s: &str) -> usize {
    s.chars().count()
}

pub fn table(t: &HomologyTable, title: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(title) = title {
        let _ = writeln!(out, "{title}  ({} coefficients)", t.ring);
    }
    let (Some((i0, i1)), Some((j0, j1))) = (t.i_range(), t.j_range()) else {
        out.push_str("(trivial)\n");
        return out;
    };
    let mut grid: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["j\\i".to_owned()];
    header.extend((i0..=i1).map(|i| i.to_string()));
    grid.push(header);
    for j in (j0..=j1).rev().step_by(2) {
        let mut row = vec![j.to_string()];
        row.extend((i0..=i1).map(|i| t.get((i, j)).map(cell).unwrap_or_default()));
        grid.push(row);
    }
    let widths: Vec<usize> = (0..grid[0].len())
        .map(|c| grid.iter().map(|r| width(&r[c])).max().unwrap_or(0))
        .collect();
    for row in &grid {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(s, &w)| format!("{}{s}", " ".repeat(w - width(s))))
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
    }
    let r = ring_symbol(t.ring);
    let legend = match t.ring {
        Ring::Z => "a,b₂,c₄ = Z^a ⊕ Z₂^b ⊕ Z₄^c".to_owned(),
        Ring::Q | Ring::Z2 => format!("a = {r}^a"),
        Ring::Z2Pow(_) => format!("a,b₂ = {r}^a ⊕ Z₂^b"),
    };
    let _ = writeln!(out, "{legend}");
    out
}

pub fn thinness(r: &ThinnessReport, title: Option<&str>) -> String {
    let mut out = String::new();
    if let Some(title) = title {
        let _ = writeln!(out, "{title}");
    }
    let tag = |thin: bool, ring: &str| format!("{ring}H-{}", if thin { "thin" } else { "thick" });
    let _ = writeln!(
        out,
        "{}, {}, {}, {}",
        tag(r.q_thin, "Q"),
        tag(r.z_thin, "Z"),
        tag(r.z2_thin, "Z2"),
        if r.h_slim { "H-slim" } else { "not H-slim" }
    );
    let show = |s: &std::collections::BTreeSet<i32>| s.iter().map(i32::to_string).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "diagonals 2i-j: Q {{{}}}  Z {{{}}}  Z2 {{{}}}", show(&r.diagonals_q), show(&r.diagonals_z), show(&r.diagonals_z2));
    out
}
