//! JSON shapes for homology tables, thinness reports and verification runs.
//! Maps are ordered, so serializing the same result twice gives identical bytes.

use std::collections::BTreeMap;

use khtorsion_core::homology::{HomologyTable, ThinnessReport};
use khtorsion_core::linalg::GroupDescription;
use khtorsion_core::Ring;
use serde::{Deserialize, Serialize};

use crate::verify::CheckOutcome;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupJson {
    pub i: i32,
    pub j: i32,
    pub free: usize,
    /// Orders of cyclic torsion summands, ascending.
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableJson {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub name: Option<String>,
    pub pd: String,
    pub ring: String,
    pub crossings: usize,
    pub writhe: i32,
    pub engine: String,
    pub groups: Vec<GroupJson>,
}

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("unknown ring {0:?}")]
    Ring(String),
    #[error(transparent)]
    Serde(#[from] serde_json::Error),
}

impl TableJson {
    pub fn new(name: Option<&str>, pd: &str, table: &HomologyTable) -> Self {
        TableJson {
            name: name.map(str::to_owned),
            pd: pd.to_owned(),
            ring: table.ring.to_string(),
            crossings: table.crossings,
            writhe: table.writhe,
            engine: crate::ENGINE_VERSION.to_owned(),
            groups: table
                .entries()
                .map(|((i, j), g)| GroupJson {
                    i,
                    j,
                    free: g.free_rank,
                    torsion: g.torsion.clone(),
                })
                .collect(),
        }
    }

    pub fn to_table(&self) -> Result<HomologyTable, JsonError> {
        let ring: Ring = self.ring.parse().map_err(|_| JsonError::Ring(self.ring.clone()))?;
        Ok(HomologyTable::new(
            ring,
            self.writhe,
            self.crossings,
            self.groups
                .iter()
                .map(|g| ((g.i, g.j), GroupDescription::new(g.free, g.torsion.clone()))),
        ))
    }

    pub fn to_string_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables serialize")
    }

    pub fn parse(text: &str) -> Result<Self, JsonError> {
        Ok(serde_json::from_str(text)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinnessJson {
    pub name: Option<String>,
    pub q_thin: bool,
    pub z_thin: bool,
    pub z2_thin: bool,
    pub h_slim: bool,
    pub diagonals: BTreeMap<String, Vec<i32>>,
}

impl ThinnessJson {
    pub fn new(name: Option<&str>, r: &ThinnessReport) -> Self {
        let diagonals = [
            ("Q", &r.diagonals_q),
            ("Z", &r.diagonals_z),
            ("Z2", &r.diagonals_z2),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_owned(), v.iter().copied().collect()))
        .collect();
        ThinnessJson {
            name: name.map(str::to_owned),
            q_thin: r.q_thin,
            z_thin: r.z_thin,
            z2_thin: r.z2_thin,
            h_slim: r.h_slim,
            diagonals,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub engine: String,
    pub passed: usize,
    pub failed: usize,
    pub not_applicable: usize,
    pub outcomes: Vec<CheckOutcome>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use khtorsion_core::{khovanov_homology, parse_pd};

    #[test]
    fn table_round_trip() {
        let pd = "PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]";
        let t = khovanov_homology(&parse_pd(pd).unwrap(), Ring::Z).unwrap();
        let j = TableJson::new(Some("3_1"), pd, &t);
        let text = j.to_string_pretty();
        let back = TableJson::parse(&text).unwrap();
        assert_eq!(back, j);
        assert_eq!(back.to_table().unwrap(), t);
        assert_eq!(text, TableJson::new(Some("3_1"), pd, &t).to_string_pretty());
        assert!(text.contains("\"torsion\": [\n        2\n      ]"));
    }
}
