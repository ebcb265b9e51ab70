//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Every comparison is exact; the only
//! tolerances are the wall-clock budgets below.
//!
//! Criterion 12 (a 16-crossing knot, multi-hour budget) is not part of the
//! default run. Set `KHTORSION_STRETCH=1` to run it; it then needs
//! `KHTORSION_STRETCH_CATALOG` pointing at a JSONL catalog that contains
//! `16n_197566`.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use khtorsion::json::{GroupJson, TableJson};
use khtorsion::verify::Subject;
use khtorsion::{Catalog, CatalogEntry};
use khtorsion_core::complex::{delta_map, turner_map};
use khtorsion_core::diffops::{
    bockstein_page_dims, bockstein_page_direct, chain_identity_check, main_theorem, nu_homology_dim,
    nu_star_homology_dim, structural_identities, turner_pages, verify_turner_lemma, Verdict,
};
use khtorsion_core::homology::torsion_summary;
use khtorsion_core::jones::{graded_euler, reduced_eval_at_i, state_sum_jones};
use khtorsion_core::linalg::BitVec;
use khtorsion_core::{CubeLimits, PlanarDiagram, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STRUCTURAL_BUDGET: Duration = Duration::from_secs(5 * 60);
const LEMMA_BUDGET: Duration = Duration::from_secs(30 * 60);
const RANDOM_COCYCLES: usize = 100;
const SEED: u64 = 0x6b68_746f_7273;

struct Knot<'a> {
    entry: &'a CatalogEntry,
    diagram: &'a PlanarDiagram,
    s: Subject<'a>,
}

impl Knot<'_> {
    fn crossings(&self) -> usize {
        self.diagram.crossing_count()
    }

    fn is_knot(&self) -> bool {
        self.entry.components == 1
    }
}

#[derive(serde::Deserialize)]
struct OracleTable {
    pd: String,
    writhe: i32,
    groups: Vec<GroupJson>,
}

struct Outcome {
    pass: bool,
    summary: String,
    failures: Vec<String>,
}

impl Outcome {
    fn new(summary: impl Into<String>, failures: Vec<String>) -> Self {
        Outcome {
            pass: failures.is_empty(),
            summary: summary.into(),
            failures,
        }
    }
}

type Criterion = fn(&[Knot]) -> Outcome;

fn up_to<'k, 'a>(knots: &'k [Knot<'a>], n: usize) -> impl Iterator<Item = &'k Knot<'a>> {
    knots.iter().filter(move |k| k.crossings() <= n)
}

fn budget(name: &str, start: Instant, limit: Duration, failures: &mut Vec<String>) -> String {
    let t = start.elapsed();
    if t > limit {
        failures.push(format!("{name} took {t:.1?}, budget {limit:?}"));
    }
    format!("{t:.1?} (budget {limit:?})")
}

fn c1_structural(knots: &[Knot]) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut n = 0;
    for k in up_to(knots, 9) {
        n += 1;
        match k.s.complex().map_err(|e| e.to_string()).and_then(|c| structural_identities(c).map_err(|e| e.to_string())) {
            Ok(r) if r.all_hold() => {}
            Ok(r) => failures.push(format!("{}: {r:?}", k.entry.name)),
            Err(e) => failures.push(format!("{}: {e}", k.entry.name)),
        }
    }
    let t = budget("structural", start, STRUCTURAL_BUDGET, &mut failures);
    Outcome::new(format!("d^2, nu^2, [d,nu], d_T^2, [d,d_T] vanish on {n} diagrams <= 9 crossings in {t}"), failures)
}

fn c2_euler(knots: &[Knot]) -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for k in up_to(knots, 9) {
        n += 1;
        let chi = graded_euler(k.s.table(Ring::Q).unwrap());
        let j = state_sum_jones(k.diagram, CubeLimits::default()).unwrap();
        if chi != j {
            failures.push(format!("{}: chi = {chi}, J = {j}", k.entry.name));
        }
    }
    Outcome::new(format!("graded Euler characteristic = state-sum Jones on {n} diagrams"), failures)
}

fn c3_trefoil(knots: &[Knot]) -> Outcome {
    let mut failures = Vec::new();
    let k = knots.iter().find(|k| k.entry.name == "3_1").unwrap();
    let z = k.s.table(Ring::Z).unwrap();
    let got: Vec<((i32, i32), usize, Vec<u64>)> = z.entries().map(|(b, g)| (b, g.free_rank, g.torsion.clone())).collect();
    let golden = vec![
        ((0, 1), 1, vec![]),
        ((0, 3), 1, vec![]),
        ((2, 5), 1, vec![]),
        ((3, 7), 0, vec![2]),
        ((3, 9), 1, vec![]),
    ];
    if got != golden {
        failures.push(format!("trefoil table {got:?}"));
    }
    // independent dense SNF oracle (scripts/khovanov_oracle.py)
    let oracle: BTreeMap<String, OracleTable> = serde_json::from_str(include_str!("fixtures/dense_snf_oracle.json")).unwrap();
    for (name, want) in &oracle {
        let d = khtorsion_core::parse_pd(&want.pd).unwrap();
        let t = khtorsion_core::khovanov_homology(&d, Ring::Z).unwrap();
        let mine = TableJson::new(None, &want.pd, &t);
        if mine.groups != want.groups || t.writhe != want.writhe {
            failures.push(format!("{name}: differs from the dense SNF oracle"));
        }
    }
    Outcome::new(
        format!("trefoil Z table = Z(0,1) Z(0,3) Z(2,5) Z2(3,7) Z(3,9); {} oracle tables agree", oracle.len()),
        failures,
    )
}

fn c4_nu_acyclic(knots: &[Knot]) -> Outcome {
    let mut failures = Vec::new();
    let (mut n, mut thin) = (0, 0);
    for k in up_to(knots, 8).filter(|k| k.is_knot()) {
        n += 1;
        let cz = k.s.complex().unwrap();
        let m = k.s.maps().unwrap();
        if nu_homology_dim(&cz.with_ring(Ring::Z2)) != 0 {
            failures.push(format!("{}: H(C, nu) != 0", k.entry.name));
        }
        if nu_star_homology_dim(m) != 0 {
            failures.push(format!("{}: H(H, nu*) != 0", k.entry.name));
        }
        let r = main_theorem(k.s.table(Ring::Z).unwrap(), m);
        if r.z2_thin {
            thin += 1;
            if !r.nu_lower_isomorphism {
                failures.push(format!("{}: nu* not an isomorphism between diagonals", k.entry.name));
            }
        }
    }
    Outcome::new(
        format!("nu and nu* acyclic on {n} knots <= 8 crossings; nu* lower -> upper iso on {thin} Z2-thin ones"),
        failures,
    )
}

fn c5_lemma(knots: &[Knot]) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let (mut n, mut nonalt) = (0, 0);
    for k in up_to(knots, 8).filter(|k| k.is_knot()) {
        n += 1;
        nonalt += usize::from(!k.entry.alternating);
        // rebuilt from the diagram so the budget covers the whole computation
        let r = verify_turner_lemma(k.diagram).unwrap();
        if !r.holds {
            failures.push(format!("{}: differs at {:?}", k.entry.name, r.discrepancies));
        }
    }
    let t = budget("lemma", start, LEMMA_BUDGET, &mut failures);
    Outcome::new(
        format!("d_T* = beta nu* + nu* beta on {n} knots <= 8 crossings ({nonalt} non-alternating) in {t}"),
        failures,
    )
}

fn c6_chain_identity(knots: &[Knot]) -> Outcome {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut n, mut checked) = (0, 0);
    for k in up_to(knots, 7).filter(|k| k.is_knot()) {
        n += 1;
        let cz = k.s.complex().unwrap();
        let c2 = cz.with_ring(Ring::Z2);
        let delta = delta_map(cz).unwrap();
        let dt = turner_map(&c2).unwrap();
        let basis = &k.s.maps().unwrap().basis;
        let mut check = |b, v: &BitVec| {
            checked += 1;
            match chain_identity_check(cz, &delta, &dt, b, v) {
                Ok(true) => None,
                Ok(false) => Some(format!("{}: identity fails at {b:?}", k.entry.name)),
                Err(e) => Some(format!("{}: {e}", k.entry.name)),
            }
        };
        for b in basis.bigrades() {
            for r in basis.representatives(b) {
                failures.extend(check(b, r));
            }
        }
        // random cocycles: random sums of representatives and boundaries
        let cells: Vec<_> = cz
            .bigrades()
            .map(|b| {
                let mut span: Vec<BitVec> = basis.representatives(b).to_vec();
                span.extend(basis.boundary_basis(b));
                (b, span)
            })
            .filter(|(_, span)| !span.is_empty())
            .collect();
        for _ in 0..RANDOM_COCYCLES {
            let (b, span) = &cells[rng.gen_range(0..cells.len())];
            let mut v = BitVec::zeros(cz.dim(*b));
            for s in span {
                if rng.gen_bool(0.5) {
                    v.xor_assign(s);
                }
            }
            failures.extend(check(*b, &v));
        }
    }
    Outcome::new(
        format!("delta(c)/2 = d_T(c) mod 2 on {checked} cocycles ({RANDOM_COCYCLES} random per knot) over {n} knots <= 7 crossings"),
        failures,
    )
}

fn c7_turner(knots: &[Knot]) -> Outcome {
    let mut failures = Vec::new();
    let (mut n, mut thin) = (0, 0);
    for k in up_to(knots, 8) {
        n += 1;
        let c2 = k.s.complex().unwrap().with_ring(Ring::Z2);
        let p = turner_pages(&c2, 2).unwrap();
        let want = 1usize << k.diagram.n_components();
        if p.infinity.total != want {
            failures.push(format!("{}: E_inf dim {} != {want}", k.entry.name, p.infinity.total));
        }
        if k.s.thinness().unwrap().z2_thin {
            thin += 1;
            if p.pages[1].total != p.infinity.total {
                failures.push(format!("{}: Z2-thin but E_2 dim {} != E_inf dim", k.entry.name, p.pages[1].total));
            }
        }
    }
    Outcome::new(format!("E_inf dim = 2^c on {n} diagrams <= 8 crossings; E_2 = E_inf on {thin} Z2-thin ones"), failures)
}

fn c8_ranks(knots: &[Knot]) -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for k in up_to(knots, 9).filter(|k| k.is_knot() && k.entry.alternating) {
        n += 1;
        let j = state_sum_jones(k.diagram, CubeLimits::default()).unwrap();
        let det = reduced_eval_at_i(&j, 1).unwrap() as usize;
        let q = k.s.table(Ring::Q).unwrap().total_rank();
        let z2 = k.s.table(Ring::Z2).unwrap().total_rank();
        let odd = torsion_summary(k.s.table(Ring::Z).unwrap()).iter().any(|t| t % 2 == 1);
        if q != det + 1 || z2 != 2 * det || odd {
            failures.push(format!("{}: det {det}, rank Q {q}, dim Z2 {z2}, odd torsion {odd}", k.entry.name));
        }
    }
    Outcome::new(format!("rank Q = det + 1, dim Z2 = 2 det, no odd torsion on {n} alternating knots <= 9 crossings"), failures)
}

fn c9_diagonals(knots: &[Knot]) -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for k in knots.iter().filter(|k| k.entry.alternating && k.diagram.is_connected()) {
        n += 1;
        let got = k.s.table(Ring::Z).unwrap().support_diagonals();
        let want = [k.entry.signature - 1, k.entry.signature + 1].into_iter().collect();
        if got != want {
            failures.push(format!("{}: diagonals {got:?}, sigma {}", k.entry.name, k.entry.signature));
        }
    }
    Outcome::new(format!("support on 2i-j = sigma +- 1 for {n} alternating non-split diagrams"), failures)
}

fn c10_torsion(knots: &[Knot]) -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for k in up_to(knots, 9).filter(|k| k.is_knot()) {
        if !k.s.thinness().unwrap().z2_thin {
            continue;
        }
        n += 1;
        let z = k.s.table(Ring::Z).unwrap();
        let q = k.s.table(Ring::Q).unwrap().total_rank();
        let orders = torsion_summary(z);
        let b2_snf = bockstein_page_dims(z, 2).total;
        let b2_z4 = bockstein_page_direct(k.s.complex().unwrap(), 2).unwrap().total;
        if orders.iter().any(|&t| t != 2) || b2_snf != q || b2_z4 != q {
            failures.push(format!("{}: torsion {orders:?}, B_2 {b2_snf} (SNF) {b2_z4} (Z4), rank Q {q}", k.entry.name));
        }
        let r = main_theorem(z, k.s.maps().unwrap());
        if r.verdict != Verdict::Pass {
            failures.push(format!("{}: {r:?}", k.entry.name));
        }
    }
    Outcome::new(format!("torsion orders in {{2}} and dim B_2 = rank Q (SNF and Z4 routes) on {n} Z2-thin knots <= 9 crossings"), failures)
}

fn c11_bockstein(knots: &[Knot]) -> Outcome {
    let mut failures = Vec::new();
    let mut n = 0;
    for k in up_to(knots, 7).filter(|k| k.is_knot()) {
        n += 1;
        for r in 1..=3 {
            let a = bockstein_page_dims(k.s.table(Ring::Z).unwrap(), r);
            let b = bockstein_page_direct(k.s.complex().unwrap(), r).unwrap();
            if a.dims != b.dims {
                failures.push(format!("{}: B_{r} differs: {:?} vs {:?}", k.entry.name, a.dims, b.dims));
            }
        }
    }
    Outcome::new(format!("B_r from the integral table = B_r from Z/2^r coefficients, r = 1..3, {n} knots <= 7 crossings"), failures)
}

fn c12_stretch() -> Outcome {
    let name = "16n_197566";
    let Some(path) = std::env::var_os("KHTORSION_STRETCH_CATALOG") else {
        return Outcome::new(
            format!("{name}: PD code unavailable (not bundled; set KHTORSION_STRETCH_CATALOG)"),
            vec!["no PD code for the stretch knot".into()],
        );
    };
    let cat = match Catalog::load(std::path::Path::new(&path)) {
        Ok(c) => c,
        Err(e) => return Outcome::new(format!("{name}: {e}"), vec![e.to_string()]),
    };
    let Ok((entry, d)) = cat.get(name) else {
        return Outcome::new(format!("{name}: not in {}", path.to_string_lossy()), vec!["missing entry".into()]);
    };
    let limits = CubeLimits { max_crossings: 24 };
    let mut failures = Vec::new();
    let s = Subject::new(name, d, Some(entry), limits);
    let r = s.thinness().unwrap();
    let z4 = s.table(Ring::Z).unwrap().entries().any(|(_, g)| g.torsion.contains(&4));
    if !(r.q_thin && !r.z_thin && !r.z2_thin && z4) {
        failures.push(format!("{name}: {r:?}, Z4 summand {z4}"));
    }
    let m = d.mirror();
    let s = Subject::new("mirror", &m, None, limits);
    let r = s.thinness().unwrap();
    if !(r.z_thin && !r.z2_thin && !r.h_slim) {
        failures.push(format!("mirror: {r:?}"));
    }
    Outcome::new(format!("{name} QH-thin, ZH-thick, Z2H-thick with Z4; mirror ZH-thin, Z2H-thick, not H-slim"), failures)
}

fn main() -> ExitCode {
    let cat = Catalog::bundled();
    let knots: Vec<Knot> = cat
        .up_to(9)
        .map(|(entry, diagram)| Knot {
            entry,
            diagram,
            s: Subject::new(&entry.name, diagram, Some(entry), CubeLimits::default()),
        })
        .collect();
    let criteria: [(u32, &str, Criterion); 11] = [
        (1, "structural differentials", c1_structural),
        (2, "Euler characteristic = Jones", c2_euler),
        (3, "trefoil golden table", c3_trefoil),
        (4, "nu and nu* acyclic", c4_nu_acyclic),
        (5, "d_T* = beta nu* + nu* beta", c5_lemma),
        (6, "chain-level delta/2 = d_T", c6_chain_identity),
        (7, "Turner spectral sequence", c7_turner),
        (8, "rank formulas", c8_ranks),
        (9, "alternating diagonals", c9_diagonals),
        (10, "torsion of order two only", c10_torsion),
        (11, "Bockstein page consistency", c11_bockstein),
    ];
    let mut ok = true;
    let report = |id: u32, title: &str, o: Outcome| {
        println!("{} [{id}] {title}: {}", if o.pass { "PASS" } else { "FAIL" }, o.summary);
        for f in o.failures.iter().take(20) {
            println!("       {f}");
        }
        o.pass
    };
    for (id, title, run) in criteria {
        ok &= report(id, title, run(&knots));
    }
    if std::env::var_os("KHTORSION_STRETCH").is_some() {
        ok &= report(12, "16-crossing stretch knot", c12_stretch());
    } else {
        println!("SKIP [12] 16-crossing stretch knot: not in the default suite (set KHTORSION_STRETCH=1)");
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
