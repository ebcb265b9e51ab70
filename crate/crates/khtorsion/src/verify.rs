//! Per-diagram verification checks and their outcomes.

use std::cell::OnceCell;
use std::fmt;
use std::str::FromStr;

use khtorsion_core::complex::{build_complex_with, BigradedComplex, ComplexError};
use khtorsion_core::diffops::{
    bockstein_page_dims, bockstein_page_direct, induced_maps_of, main_theorem, structural_identities, turner_lemma,
    turner_pages, DiffopsError, InducedMaps, Verdict,
};
use khtorsion_core::homology::{classify_thinness, homology_of, torsion_summary, HomologyTable, ThinnessReport};
use khtorsion_core::jones::{graded_euler, reduced_eval_at_i, state_sum_jones, JonesError};
use khtorsion_core::{CubeLimits, PlanarDiagram, Ring};
use serde::{Deserialize, Serialize};

use crate::catalog::CatalogEntry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    /// `d^2 = 0`, `nu^2 = 0`, `d nu = nu d`, `d_T^2 = 0`, `d d_T = d_T d`.
    Structural,
    /// Graded Euler characteristic equals the state-sum Jones polynomial.
    Euler,
    /// `d_T* = beta nu* + nu* beta` on mod-2 homology.
    Lemma19,
    /// Mod-2 thin implies torsion of order 2 only, with the rank bookkeeping.
    Theorem7,
    /// Turner and Bockstein spectral sequence pages.
    Pages,
    /// Rank formulas for H-slim links in terms of the determinant.
    Ranks,
    /// Support on `2i - j = sigma +- 1` for alternating non-split links.
    Diagonals,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::Structural,
        Check::Euler,
        Check::Lemma19,
        Check::Theorem7,
        Check::Pages,
        Check::Ranks,
        Check::Diagonals,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Structural => "structural",
            Check::Euler => "euler",
            Check::Lemma19 => "lemma19",
            Check::Theorem7 => "theorem7",
            Check::Pages => "pages",
            Check::Ranks => "ranks",
            Check::Diagonals => "diagonals",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown check {0:?}; expected one of structural, euler, lemma19, theorem7, pages, ranks, diagonals, all")]
pub struct UnknownCheck(pub String);

impl FromStr for Check {
    type Err = UnknownCheck;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| UnknownCheck(s.to_owned()))
    }
}

/// Parses a comma-separated list; `all` selects every check.
pub fn parse_checks(list: &str) -> Result<Vec<Check>, UnknownCheck> {
    let mut out = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Check::ALL);
        } else {
            out.push(part.parse()?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    #[serde(rename = "pass")]
    Pass,
    #[serde(rename = "fail")]
    Fail,
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl Status {
    fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "n/a",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub knot: String,
    pub check: String,
    pub status: Status,
    pub detail: String,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<12} {:<10} {:<4} {}", self.knot, self.check, self.status.as_str(), self.detail)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Diffops(#[from] DiffopsError),
    #[error(transparent)]
    Jones(#[from] JonesError),
}

/// A diagram with the results of every check computed on demand and shared.
pub struct Subject<'a> {
    pub name: String,
    pub diagram: &'a PlanarDiagram,
    pub entry: Option<&'a CatalogEntry>,
    limits: CubeLimits,
    cz: OnceCell<BigradedComplex>,
    z: OnceCell<HomologyTable>,
    q: OnceCell<HomologyTable>,
    z2: OnceCell<HomologyTable>,
    maps: OnceCell<InducedMaps>,
}

impl<'a> Subject<'a> {
    pub fn new(name: &str, diagram: &'a PlanarDiagram, entry: Option<&'a CatalogEntry>, limits: CubeLimits) -> Self {
        Subject {
            name: name.to_owned(),
            diagram,
            entry,
            limits,
            cz: OnceCell::new(),
            z: OnceCell::new(),
            q: OnceCell::new(),
            z2: OnceCell::new(),
            maps: OnceCell::new(),
        }
    }

    pub fn complex(&self) -> Result<&BigradedComplex, VerifyError> {
        if let Some(c) = self.cz.get() {
            return Ok(c);
        }
        let c = build_complex_with(self.diagram, Ring::Z, self.limits)?;
        Ok(self.cz.get_or_init(|| c))
    }

    pub fn table(&self, ring: Ring) -> Result<&HomologyTable, VerifyError> {
        let cell = match ring {
            Ring::Z => &self.z,
            Ring::Q => &self.q,
            Ring::Z2 => &self.z2,
            Ring::Z2Pow(_) => unreachable!("only Z, Q and Z2 tables are cached per subject"),
        };
        if let Some(t) = cell.get() {
            return Ok(t);
        }
        let cz = self.complex()?;
        let t = if ring == Ring::Z {
            homology_of(cz)
        } else {
            homology_of(&cz.with_ring(ring))
        };
        Ok(cell.get_or_init(|| t))
    }

    pub fn maps(&self) -> Result<&InducedMaps, VerifyError> {
        if let Some(m) = self.maps.get() {
            return Ok(m);
        }
        let m = induced_maps_of(self.complex()?)?;
        Ok(self.maps.get_or_init(|| m))
    }

    pub fn thinness(&self) -> Result<ThinnessReport, VerifyError> {
        Ok(classify_thinness(self.table(Ring::Q)?, self.table(Ring::Z)?, self.table(Ring::Z2)?)
            .expect("tables carry the requested rings"))
    }

    pub fn run(&self, check: Check) -> CheckOutcome {
        let (status, detail) = match self.evaluate(check) {
            Ok(r) => r,
            Err(e) => (Status::Fail, format!("error: {e}")),
        };
        CheckOutcome {
            knot: self.name.clone(),
            check: check.name().to_owned(),
            status,
            detail,
        }
    }

    fn evaluate(&self, check: Check) -> Result<(Status, String), VerifyError> {
        match check {
            Check::Structural => {
                let r = structural_identities(self.complex()?)?;
                let failed: Vec<&str> = [
                    (r.d_squared, "d^2"),
                    (r.nu_squared, "nu^2"),
                    (r.d_nu_commute, "[d,nu]"),
                    (r.turner_squared, "d_T^2"),
                    (r.d_turner_commute, "[d,d_T]"),
                ]
                .into_iter()
                .filter(|e| !e.0)
                .map(|e| e.1)
                .collect();
                let detail = if failed.is_empty() {
                    "all identities hold".to_owned()
                } else {
                    format!("nonzero: {}", failed.join(" "))
                };
                Ok((Status::from_bool(failed.is_empty()), detail))
            }
            Check::Euler => {
                let chi = graded_euler(self.table(Ring::Q)?);
                let j = state_sum_jones(self.diagram, self.limits).map_err(ComplexError::from)?;
                let ok = chi == j;
                let detail = if ok { format!("J = {j}") } else { format!("chi = {chi}, J = {j}") };
                Ok((Status::from_bool(ok), detail))
            }
            Check::Lemma19 => {
                let r = turner_lemma(self.maps()?);
                let detail = if r.holds {
                    format!("rank d_T* = {}, rank beta = {}, rank nu* = {}", r.rank_turner, r.rank_beta, r.rank_nu)
                } else {
                    format!("differs at {:?}", r.discrepancies)
                };
                Ok((Status::from_bool(r.holds), detail))
            }
            Check::Theorem7 => {
                let z = self.table(Ring::Z)?;
                let r = main_theorem(z, self.maps()?);
                if r.verdict == Verdict::NotApplicable {
                    return Ok((Status::NotApplicable, "Z2H-thick".to_owned()));
                }
                let via_snf = bockstein_page_dims(z, 2).collapsed;
                let via_z4 = bockstein_page_direct(self.complex()?, 2)?.collapsed;
                let ok = r.verdict == Verdict::Pass && via_snf && via_z4;
                let detail = format!(
                    "torsion {:?}; rank d_T* = {} = 2 rank beta = 2*{}; nu* iso {}, beta|lower = 0 {}; B_2 collapsed (SNF {}, Z4 {})",
                    torsion_summary(z),
                    r.rank_turner,
                    r.rank_beta,
                    r.nu_lower_isomorphism,
                    r.beta_vanishes_on_lower,
                    via_snf,
                    via_z4
                );
                Ok((Status::from_bool(ok), detail))
            }
            Check::Pages => {
                let cz = self.complex()?;
                let c2 = cz.with_ring(Ring::Z2);
                let tp = turner_pages(&c2, 3)?;
                let want = 1usize << self.diagram.n_components();
                let mut ok = tp.infinity.total == want;
                let thin = self.thinness()?.z2_thin;
                if thin {
                    ok &= tp.pages[1].total == tp.infinity.total;
                }
                let z = self.table(Ring::Z)?;
                let mut collapse = None;
                for r in 1..=3 {
                    let a = bockstein_page_dims(z, r);
                    let b = bockstein_page_direct(cz, r)?;
                    ok &= a.dims == b.dims && a.collapsed == b.collapsed;
                    if collapse.is_none() && a.collapsed {
                        collapse = Some(r);
                    }
                }
                let collapse = match collapse {
                    Some(r) => format!("B collapsed at page {r}"),
                    None => "B not collapsed by page 3".to_owned(),
                };
                let detail = format!(
                    "E_1 dim {}, E_2 dim {}, E_inf dim {} (2^c = {want}), {collapse}",
                    tp.pages[0].total, tp.pages[1].total, tp.infinity.total
                );
                Ok((Status::from_bool(ok), detail))
            }
            Check::Ranks => {
                if !self.thinness()?.h_slim {
                    return Ok((Status::NotApplicable, "not H-slim".to_owned()));
                }
                let c = self.diagram.n_components();
                let j = state_sum_jones(self.diagram, self.limits).map_err(ComplexError::from)?;
                let det = reduced_eval_at_i(&j, c)? as usize;
                let q = self.table(Ring::Q)?.total_rank();
                let z2 = self.table(Ring::Z2)?.total_rank();
                let odd: Vec<u64> = torsion_summary(self.table(Ring::Z)?)
                    .into_iter()
                    .filter(|t| t % 2 == 1)
                    .collect();
                let ok = q == det + (1 << (c - 1)) && z2 == 2 * det && odd.is_empty();
                let detail = format!("|J~(i)| = {det}, rank Q = {q}, dim Z2 = {z2}, odd torsion {odd:?}");
                Ok((Status::from_bool(ok), detail))
            }
            Check::Diagonals => {
                let Some(e) = self.entry else {
                    return Ok((Status::NotApplicable, "no catalog signature".to_owned()));
                };
                if !e.alternating || !self.diagram.is_connected() {
                    return Ok((Status::NotApplicable, "not alternating and non-split".to_owned()));
                }
                let got = self.table(Ring::Z)?.support_diagonals();
                let want = [e.signature - 1, e.signature + 1].into_iter().collect();
                let detail = format!("2i-j in {got:?}, sigma = {}", e.signature);
                Ok((Status::from_bool(got == want), detail))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    fn outcomes(name: &str) -> Vec<CheckOutcome> {
        let (e, d) = Catalog::bundled().get(name).unwrap();
        let s = Subject::new(name, d, Some(e), CubeLimits::default());
        Check::ALL.iter().map(|&c| s.run(c)).collect()
    }

    #[test]
    fn parse_lists() {
        assert_eq!(parse_checks("lemma19, euler").unwrap(), vec![Check::Euler, Check::Lemma19]);
        assert_eq!(parse_checks("all").unwrap().len(), 7);
        assert!(parse_checks("lemma20").is_err());
    }

    #[test]
    fn unknot_and_trefoil_pass() {
        for name in ["unknot", "3_1", "4_1", "hopf"] {
            for o in outcomes(name) {
                assert_ne!(o.status, Status::Fail, "{o}");
            }
        }
        let u = outcomes("unknot");
        let pages = u.iter().find(|o| o.check == "pages").unwrap();
        assert!(pages.detail.contains("E_inf dim 2"), "{}", pages.detail);
        assert!(pages.detail.contains("B collapsed at page 1"), "{}", pages.detail);
    }
}
