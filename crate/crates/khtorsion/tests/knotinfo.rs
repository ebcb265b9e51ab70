//! Integral tables for the bundled knots against KnotInfo's published
//! Khovanov homology (`fixtures/knotinfo_khovanov.jsonl`).

use std::collections::BTreeMap;

use khtorsion::Catalog;
use khtorsion_core::{khovanov_homology, Ring};
use serde::Deserialize;

#[derive(Deserialize)]
struct Row {
    name: String,
    /// `[torsion order (0 = free), multiplicity, i, j]`
    groups: Vec<[i64; 4]>,
}

type Table = BTreeMap<(i32, i32), (usize, Vec<u64>)>;

fn expected(row: &Row) -> Table {
    let mut t = Table::new();
    for &[order, mult, i, j] in &row.groups {
        let e = t.entry((i as i32, j as i32)).or_default();
        if order == 0 {
            e.0 += mult as usize;
        } else {
            e.1.extend(std::iter::repeat(order as u64).take(mult as usize));
        }
    }
    for e in t.values_mut() {
        e.1.sort_unstable();
    }
    t
}

#[test]
fn integral_tables_match_knotinfo() {
    let cat = Catalog::bundled();
    let rows: Vec<Row> = include_str!("fixtures/knotinfo_khovanov.jsonl")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(rows.len() >= 84);
    let mut bad = Vec::new();
    for row in &rows {
        let (_, d) = cat.get(&row.name).unwrap();
        let h = khovanov_homology(d, Ring::Z).unwrap();
        let got: Table = h.entries().map(|(b, g)| (b, (g.free_rank, g.torsion.clone()))).collect();
        if got != expected(row) {
            bad.push(row.name.clone());
        }
    }
    assert!(bad.is_empty(), "tables differ for {bad:?}");
}
