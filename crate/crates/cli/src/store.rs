//! Disk-backed height tables and the threaded table builder.
//!
//! Tables persist as JSON lines under a cache directory, one file per arity
//! pair; reruns hit the memoized file instead of searching again.

use std::fs;
use std::path::{Path, PathBuf};

use hbrauer_core::diagram::all_pair_partitions;
use hbrauer_core::height::{
    enumerate_by_height, partition_height, tighten_by_composition, HeightCache, HeightTable,
    SearchBudget,
};

use crate::formats::{table_from_jsonl, table_to_jsonl};

pub const CACHE_ENV: &str = "HBRAUER_CACHE_DIR";

pub struct TableStore {
    dir: Option<PathBuf>,
    pub jobs: usize,
}

impl TableStore {
    pub fn new(dir: Option<PathBuf>, jobs: usize) -> Self {
        TableStore {
            dir,
            jobs: jobs.max(1),
        }
    }

    pub fn from_env(flag: Option<PathBuf>, jobs: usize) -> Self {
        let dir = flag.or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
        TableStore::new(dir, jobs)
    }

    fn path_for(&self, n: usize, m: usize) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("heights-{n}x{m}.jsonl")))
    }

    fn load(&self, n: usize, m: usize) -> Option<HeightTable> {
        let path = self.path_for(n, m)?;
        let text = fs::read_to_string(path).ok()?;
        let table = table_from_jsonl(n, m, &text).ok()?;
        // A stale or truncated file is rebuilt rather than trusted.
        let expected = all_pair_partitions(n, m).len();
        (table.entries.len() == expected).then_some(table)
    }

    fn save(&self, table: &HeightTable) {
        let Some(path) = self.path_for(table.n, table.m) else {
            return;
        };
        if let Some(parent) = path.parent() {
            let _ = fs::create_dir_all(parent);
        }
        let tmp = path.with_extension("jsonl.tmp");
        if fs::write(&tmp, table_to_jsonl(table)).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
    }

    /// Get the table for `(n, m)`, from disk if cached, otherwise by
    /// building it (across `jobs` threads) and persisting it.
    pub fn table(&self, n: usize, m: usize) -> HeightTable {
        if let Some(t) = self.load(n, m) {
            return t;
        }
        let table = build_table(n, m, self.jobs);
        self.save(&table);
        table
    }

    /// Preload a core cache with the tables a computation will need.
    pub fn fill_cache(&self, cache: &mut HeightCache, arities: &[(usize, usize)]) {
        for &(n, m) in arities {
            if !cache.contains(n, m) {
                cache.insert(self.table(n, m));
            }
        }
    }
}

/// Build a table, splitting the per-diagram searches across threads.
pub fn build_table(n: usize, m: usize, jobs: usize) -> HeightTable {
    let budget = SearchBudget::for_arity(n, m);
    if jobs <= 1 {
        return enumerate_by_height(n, m, &budget).expect("desk-scale arity");
    }
    let diagrams = all_pair_partitions(n, m);
    let chunk = diagrams.len().div_ceil(jobs);
    let mut entries = std::collections::BTreeMap::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for part in diagrams.chunks(chunk.max(1)) {
            handles.push(scope.spawn(move || {
                part.iter()
                    .map(|p| (p.clone(), partition_height(p, &budget)))
                    .collect::<Vec<_>>()
            }));
        }
        for h in handles {
            for (p, r) in h.join().expect("height worker") {
                entries.insert(p, r);
            }
        }
    });
    let mut table = HeightTable { n, m, entries };
    if n == m && n > 0 {
        tighten_by_composition(&mut table);
    }
    table
}

/// Is the cache file for `(n, m)` present?
pub fn cached_at(dir: &Path, n: usize, m: usize) -> bool {
    dir.join(format!("heights-{n}x{m}.jsonl")).exists()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_disk() {
        let dir = std::env::temp_dir().join(format!("hbrauer-store-{}", std::process::id()));
        let store = TableStore::new(Some(dir.clone()), 1);
        let t1 = store.table(3, 3);
        assert!(cached_at(&dir, 3, 3));
        let t2 = store.table(3, 3);
        assert_eq!(t1.entries.len(), t2.entries.len());
        for (p, r) in &t1.entries {
            assert_eq!(t2.entries[p].value, r.value);
        }
        let _ = std::fs::remove_dir_all(dir);
    }

    #[test]
    fn threaded_build_matches_serial() {
        let serial = build_table(3, 3, 1);
        let threaded = build_table(3, 3, 3);
        assert_eq!(serial.entries.len(), threaded.entries.len());
        for (p, r) in &serial.entries {
            assert_eq!(threaded.entries[p].value, r.value, "{p:?}");
        }
    }
}
