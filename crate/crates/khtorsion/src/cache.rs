//! On-disk cache of homology tables, one JSON file per
//! (normalized PD, ring, engine version).

use std::io;
use std::path::{Path, PathBuf};

use khtorsion_core::homology::HomologyTable;
use khtorsion_core::{PlanarDiagram, Ring};
use sha2::{Digest, Sha256};

use crate::json::TableJson;

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: impl Into<PathBuf>) -> io::Result<Cache> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(d: &PlanarDiagram, ring: Ring) -> String {
        let mut h = Sha256::new();
        h.update(d.to_string());
        h.update([0]);
        h.update(ring.to_string());
        h.update([0]);
        h.update(crate::ENGINE_VERSION);
        hex::encode(h.finalize())
    }

    fn path(&self, d: &PlanarDiagram, ring: Ring) -> PathBuf {
        self.dir.join(format!("{}.json", Cache::key(d, ring)))
    }

    /// A cached table, or `None` if absent, unreadable or for another input.
    pub fn get(&self, d: &PlanarDiagram, ring: Ring) -> Option<HomologyTable> {
        let text = std::fs::read_to_string(self.path(d, ring)).ok()?;
        let j = TableJson::parse(&text).ok()?;
        if j.pd != d.to_string() || j.engine != crate::ENGINE_VERSION {
            return None;
        }
        j.to_table().ok().filter(|t| t.ring == ring)
    }

    /// Writes through a temporary file so readers never see a partial table.
    pub fn put(&self, name: Option<&str>, d: &PlanarDiagram, table: &HomologyTable) -> io::Result<()> {
        let path = self.path(d, table.ring);
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let body = TableJson::new(name, &d.to_string(), table).to_string_pretty();
        std::fs::write(&tmp, body)?;
        std::fs::rename(&tmp, &path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use khtorsion_core::{khovanov_homology, parse_pd};

    #[test]
    fn round_trip_and_keys() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path().join("c")).unwrap();
        let d = parse_pd("PD[X(1,4,2,5),X(3,6,4,1),X(5,2,6,3)]").unwrap();
        assert!(cache.get(&d, Ring::Z).is_none());
        let t = khovanov_homology(&d, Ring::Z).unwrap();
        cache.put(Some("3_1"), &d, &t).unwrap();
        assert_eq!(cache.get(&d, Ring::Z), Some(t));
        assert!(cache.get(&d, Ring::Q).is_none());
        assert!(cache.get(&d.mirror(), Ring::Z).is_none());
        assert_ne!(Cache::key(&d, Ring::Z), Cache::key(&d, Ring::Z2));
        // relabelled input normalizes to the same key
        let d2 = parse_pd("PD[X(10,40,20,50),X(30,60,40,10),X(50,20,60,30)]").unwrap();
        assert_eq!(Cache::key(&d, Ring::Z), Cache::key(&d2, Ring::Z));
    }

    #[test]
    fn corrupt_file_is_a_miss() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::open(dir.path()).unwrap();
        let d = parse_pd("PD[]").unwrap();
        std::fs::write(dir.path().join(format!("{}.json", Cache::key(&d, Ring::Q))), "{not json").unwrap();
        assert!(cache.get(&d, Ring::Q).is_none());
    }
}
