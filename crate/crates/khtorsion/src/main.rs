use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Mutex;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use khtorsion::cache::Cache;
use khtorsion::json::{TableJson, ThinnessJson, VerifyJson};
use khtorsion::verify::{parse_checks, Check, CheckOutcome, Status, Subject};
use khtorsion::{render, Catalog, CatalogEntry, ENGINE_VERSION, STRETCH_THRESHOLD};
use khtorsion_core::homology::homology_of;
use khtorsion_core::jones::{reduced_eval_at_i, state_sum_jones};
use khtorsion_core::complex::build_complex_with;
use khtorsion_core::{parse_pd, CubeLimits, PlanarDiagram, Ring};

#[derive(Parser)]
#[command(name = "khtorsion", version, about = "Exact Khovanov homology, torsion and spectral sequence checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Homology tables over the requested rings.
    Compute {
        #[command(flatten)]
        sel: Selector,
        /// Coefficient rings: Z, Q, Z2, Z4, Z8, ...
        #[arg(long, value_delimiter = ',', default_value = "Z")]
        coeffs: Vec<String>,
        /// Directory for cached tables.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// Run verification checks; exits with status 1 if any applicable check fails.
    Verify {
        #[command(flatten)]
        sel: Selector,
        /// Comma-separated: structural, euler, lemma19, theorem7, pages, ranks, diagonals, all.
        #[arg(long, default_value = "all")]
        checks: String,
    },
    /// Thinness over Q, Z and Z2, and whether the link is H-slim.
    Classify {
        #[command(flatten)]
        sel: Selector,
    },
    /// Jones polynomial and |J~(sqrt(-1))|.
    Jones {
        #[command(flatten)]
        sel: Selector,
    },
    /// Inspect the bundled catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// List entries with their metadata.
    List {
        #[arg(long)]
        max_crossings: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Extra JSONL catalog merged into the bundled one.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Selector {
    /// Catalog name, e.g. 3_1, 8_19, hopf, L4a1{0}.
    #[arg(long, conflicts_with = "pd")]
    knot: Option<String>,
    /// Inline PD code, e.g. "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]".
    #[arg(long)]
    pd: Option<String>,
    /// With --knot or --pd, the largest crossing number accepted; otherwise
    /// selects every catalog entry with at most this many crossings.
    #[arg(long)]
    max_crossings: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Allow diagrams above 13 crossings (hours of computation).
    #[arg(long)]
    stretch: bool,
    /// Extra JSONL catalog merged into the bundled one.
    #[arg(long)]
    catalog: Option<PathBuf>,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

struct Item {
    name: String,
    diagram: PlanarDiagram,
    entry: Option<CatalogEntry>,
}

fn catalog(extra: &Option<PathBuf>) -> Result<Catalog, Usage> {
    let mut cat = Catalog::bundled().clone();
    if let Some(p) = extra {
        cat.extend(Catalog::load(p)?)?;
    }
    Ok(cat)
}

impl Selector {
    fn cap(&self) -> usize {
        let hard = CubeLimits::default().max_crossings;
        let soft = if self.stretch { hard } else { STRETCH_THRESHOLD };
        self.max_crossings.unwrap_or(soft).min(soft)
    }

    fn limits(&self) -> CubeLimits {
        CubeLimits {
            max_crossings: self.cap(),
        }
    }

    fn items(&self) -> Result<Vec<Item>, Usage> {
        if self.max_crossings == Some(0) {
            return Err(Usage("--max-crossings must be at least 1".into()));
        }
        let cat = catalog(&self.catalog)?;
        let items = match (&self.knot, &self.pd) {
            (Some(name), _) => {
                let (e, d) = cat.get(name)?;
                vec![Item {
                    name: name.clone(),
                    diagram: d.clone(),
                    entry: Some(e.clone()),
                }]
            }
            (None, Some(pd)) => vec![Item {
                name: "pd".into(),
                diagram: parse_pd(pd)?,
                entry: None,
            }],
            (None, None) => {
                let Some(n) = self.max_crossings else {
                    return Err(Usage("give --knot, --pd or --max-crossings".into()));
                };
                cat.up_to(n)
                    .map(|(e, d)| Item {
                        name: e.name.clone(),
                        diagram: d.clone(),
                        entry: Some(e.clone()),
                    })
                    .collect()
            }
        };
        let cap = self.cap();
        for it in &items {
            let n = it.diagram.crossing_count();
            if n > cap {
                let hint = if n > STRETCH_THRESHOLD && !self.stretch { " (use --stretch)" } else { "" };
                return Err(Usage(format!("{} has {n} crossings, above the cap of {cap}{hint}", it.name)));
            }
        }
        Ok(items)
    }

    fn pool(&self) -> Result<rayon::ThreadPool, Usage> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(j) = self.jobs {
            if j == 0 {
                return Err(Usage("--jobs must be at least 1".into()));
            }
            b = b.num_threads(j);
        }
        Ok(b.build()?)
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn compute(sel: &Selector, coeffs: &[String], cache: &Option<PathBuf>) -> Result<ExitCode, Usage> {
    let rings = coeffs
        .iter()
        .map(|c| c.trim().parse::<Ring>().map_err(|e| Usage(format!("{c}: {e}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if rings.is_empty() {
        return Err(Usage("select at least one ring with --coeffs".into()));
    }
    let items = sel.items()?;
    let cache = match cache {
        Some(dir) => match Cache::open(dir) {
            Ok(c) => Some(c),
            Err(e) => {
                eprintln!("warning: cache {} unavailable: {e}", dir.display());
                None
            }
        },
        None => None,
    };
    let write_lock = Mutex::new(());
    let limits = sel.limits();
    let results: Vec<Result<Vec<TableJson>, String>> = sel.pool()?.install(|| {
        items
            .par_iter()
            .map(|it| {
                let mut cz = None;
                let mut out = Vec::new();
                for &ring in &rings {
                    let cached = cache.as_ref().and_then(|c| c.get(&it.diagram, ring));
                    let table = match cached {
                        Some(t) => t,
                        None => {
                            if cz.is_none() {
                                cz = Some(build_complex_with(&it.diagram, Ring::Z, limits).map_err(|e| e.to_string())?);
                            }
                            let cz = cz.as_ref().unwrap();
                            let t = if ring == Ring::Z { homology_of(cz) } else { homology_of(&cz.with_ring(ring)) };
                            if let Some(c) = &cache {
                                let _guard = write_lock.lock().unwrap();
                                if let Err(e) = c.put(Some(&it.name), &it.diagram, &t) {
                                    eprintln!("warning: cache write failed: {e}");
                                }
                            }
                            t
                        }
                    };
                    out.push(TableJson::new(Some(&it.name), &it.diagram.to_string(), &table));
                }
                Ok(out)
            })
            .collect()
    });
    let mut tables = Vec::new();
    for r in results {
        tables.extend(r.map_err(Usage)?);
    }
    match sel.format {
        Format::Json => println!("{}", json(&tables)),
        Format::Text => {
            for t in &tables {
                let table = t.to_table().expect("just built");
                print!("{}", render::table(&table, t.name.as_deref()));
                println!();
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(sel: &Selector, checks: &str) -> Result<ExitCode, Usage> {
    let checks: Vec<Check> = parse_checks(checks)?;
    if checks.is_empty() {
        return Err(Usage("--checks selects nothing".into()));
    }
    let items = sel.items()?;
    let limits = sel.limits();
    let outcomes: Vec<CheckOutcome> = sel.pool()?.install(|| {
        items
            .par_iter()
            .flat_map_iter(|it| {
                let s = Subject::new(&it.name, &it.diagram, it.entry.as_ref(), limits);
                checks.iter().map(|&c| s.run(c)).collect::<Vec<_>>()
            })
            .collect()
    });
    let count = |st: Status| outcomes.iter().filter(|o| o.status == st).count();
    let report = VerifyJson {
        engine: ENGINE_VERSION.to_owned(),
        passed: count(Status::Pass),
        failed: count(Status::Fail),
        not_applicable: count(Status::NotApplicable),
        outcomes,
    };
    match sel.format {
        Format::Json => println!("{}", json(&report)),
        Format::Text => {
            for o in &report.outcomes {
                println!("{o}");
            }
            println!(
                "{} passed, {} failed, {} not applicable",
                report.passed, report.failed, report.not_applicable
            );
        }
    }
    Ok(if report.failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn classify(sel: &Selector) -> Result<ExitCode, Usage> {
    let items = sel.items()?;
    let limits = sel.limits();
    let reports: Vec<Result<ThinnessJson, String>> = sel.pool()?.install(|| {
        items
            .par_iter()
            .map(|it| {
                let s = Subject::new(&it.name, &it.diagram, it.entry.as_ref(), limits);
                s.thinness().map(|r| ThinnessJson::new(Some(&it.name), &r)).map_err(|e| e.to_string())
            })
            .collect()
    });
    let reports = reports.into_iter().collect::<Result<Vec<_>, _>>().map_err(Usage)?;
    match sel.format {
        Format::Json => println!("{}", json(&reports)),
        Format::Text => {
            for r in &reports {
                let tag = |t: bool, ring: &str| format!("{ring}H-{}", if t { "thin" } else { "thick" });
                println!(
                    "{}: {}, {}, {}, {}",
                    r.name.as_deref().unwrap_or("pd"),
                    tag(r.q_thin, "Q"),
                    tag(r.z_thin, "Z"),
                    tag(r.z2_thin, "Z2"),
                    if r.h_slim { "H-slim" } else { "not H-slim" }
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(serde::Serialize)]
struct JonesJson {
    name: String,
    /// `[exponent, coefficient]` pairs in ascending exponent order.
    jones: Vec<(i32, i64)>,
    text: String,
    reduced_at_i: u64,
}

fn jones(sel: &Selector) -> Result<ExitCode, Usage> {
    let items = sel.items()?;
    let limits = sel.limits();
    let mut out = Vec::new();
    for it in &items {
        let j = state_sum_jones(&it.diagram, limits)?;
        let det = reduced_eval_at_i(&j, it.diagram.n_components())?;
        out.push(JonesJson {
            name: it.name.clone(),
            jones: j.terms().collect(),
            text: j.to_string(),
            reduced_at_i: det,
        });
    }
    match sel.format {
        Format::Json => println!("{}", json(&out)),
        Format::Text => {
            for j in &out {
                println!("{}: J = {}, |J~(i)| = {}", j.name, j.text, j.reduced_at_i);
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn catalog_list(max: Option<usize>, format: Format, extra: &Option<PathBuf>) -> Result<ExitCode, Usage> {
    let cat = catalog(extra)?;
    let entries: Vec<&CatalogEntry> = cat.up_to(max.unwrap_or(usize::MAX)).map(|(e, _)| e).collect();
    match format {
        Format::Json => println!("{}", json(&entries)),
        Format::Text => {
            for e in entries {
                let d = cat.get(&e.name)?.1;
                println!(
                    "{:<12} crossings {:>2}  components {}  signature {:>3}  {}",
                    e.name,
                    d.crossing_count(),
                    e.components,
                    e.signature,
                    if e.alternating { "alternating" } else { "non-alternating" }
                );
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Compute { sel, coeffs, cache } => compute(sel, coeffs, cache),
        Command::Verify { sel, checks } => verify(sel, checks),
        Command::Classify { sel } => classify(sel),
        Command::Jones { sel } => jones(sel),
        Command::Catalog {
            action: CatalogAction::List {
                max_crossings,
                format,
                catalog,
            },
        } => catalog_list(*max_crossings, *format, catalog),
    };
    match result {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
