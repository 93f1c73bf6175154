//! Ring construction with an optional on-disk cache of the lattice and the
//! structure constants.

use std::fs;
use std::path::{Path, PathBuf};

use fbr_core::fiber::{parse_fiber_spec, FiniteAbelianGroup};
use fbr_core::group::{catalog::parse_group_spec, FiniteGroup, LatticeData, ResourceCaps, SubgroupLattice};
use fbr_core::ring::FiberedRing;
use fbr_core::{Exec, FbrError, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct SessionConfig {
    pub group_spec: String,
    pub fiber_spec: String,
    pub cache_dir: Option<PathBuf>,
    pub caps: ResourceCaps,
    pub exec: Exec,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CacheEntry {
    format_version: u32,
    key: String,
    group_spec: String,
    fiber_spec: String,
    lattice: LatticeData,
    basis: Vec<String>,
    constants: Vec<Option<Vec<(usize, i64)>>>,
}

#[derive(Serialize)]
struct KeyMaterial<'a> {
    format_version: u32,
    degree: usize,
    elements: Vec<&'a [u32]>,
    fiber: &'a [u64],
}

/// Digest of the canonical serialization of the sorted element list and the
/// fiber's invariant factors.
pub fn cache_key(group: &FiniteGroup, fiber: &FiniteAbelianGroup) -> String {
    let material = KeyMaterial {
        format_version: FORMAT_VERSION,
        degree: group.degree(),
        elements: group.elements().iter().map(|p| p.images()).collect(),
        fiber: fiber.invariant_factors(),
    };
    let bytes = serde_json::to_vec(&material).expect("key material serializes");
    hex::encode(Sha256::digest(&bytes))
}

pub struct Session {
    pub config: SessionConfig,
    pub ring: FiberedRing,
    path: Option<PathBuf>,
}

impl Session {
    pub fn open(config: SessionConfig) -> Result<Self> {
        let group = parse_group_spec(&config.group_spec, config.caps.max_group_order)?;
        let fiber = parse_fiber_spec(&config.fiber_spec)?;
        let key = cache_key(&group, &fiber);
        let path = config.cache_dir.as_ref().map(|d| d.join(format!("{key}.json")));
        let cached = path.as_deref().and_then(|p| match load(p, &key, &group, &fiber, &config) {
            Ok(ring) => ring,
            Err(reason) => {
                eprintln!("notice: cache entry {} rejected ({reason}); recomputing", p.display());
                None
            }
        });
        let ring = match cached {
            Some(r) => r,
            None => FiberedRing::new(group, fiber, config.caps, config.exec)?,
        };
        Ok(Session { config, ring, path })
    }

    /// Writes the lattice and every structure constant computed so far.
    pub fn save(&self) -> Result<()> {
        let Some(path) = &self.path else {
            return Ok(());
        };
        let r = &self.ring;
        let entry = CacheEntry {
            format_version: FORMAT_VERSION,
            key: cache_key(r.group(), r.fiber()),
            group_spec: self.config.group_spec.clone(),
            fiber_spec: self.config.fiber_spec.clone(),
            lattice: r.lattice().to_data(),
            basis: basis_keys(r),
            constants: r.constants_snapshot(),
        };
        let io = |e: std::io::Error| FbrError::input(format!("cache write to {}: {e}", path.display()));
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(io)?;
        }
        let json = serde_json::to_vec(&entry).map_err(|e| FbrError::invariant(e.to_string()))?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, json).map_err(io)?;
        fs::rename(&tmp, path).map_err(io)
    }
}

fn basis_keys(r: &FiberedRing) -> Vec<String> {
    r.basis().orbits().iter().map(|o| o.key.to_string()).collect()
}

/// `Ok(None)` when there is no entry; `Err` with a reason when the entry
/// exists but cannot be used.
fn load(
    path: &Path,
    key: &str,
    group: &FiniteGroup,
    fiber: &FiniteAbelianGroup,
    config: &SessionConfig,
) -> std::result::Result<Option<FiberedRing>, String> {
    let Ok(bytes) = fs::read(path) else {
        return Ok(None);
    };
    let entry: CacheEntry = serde_json::from_slice(&bytes).map_err(|e| format!("unreadable payload: {e}"))?;
    if entry.format_version != FORMAT_VERSION {
        return Err(format!("format version {}", entry.format_version));
    }
    if entry.key != key {
        return Err("digest mismatch".into());
    }
    let lattice = SubgroupLattice::from_data(group, entry.lattice).map_err(|e| e.to_string())?;
    let ring = FiberedRing::from_parts(group.clone(), lattice, fiber.clone(), config.caps, config.exec)
        .map_err(|e| e.to_string())?;
    if basis_keys(&ring) != entry.basis {
        return Err("basis ordering differs".into());
    }
    ring.preload_constants(entry.constants).map_err(|e| e.to_string())?;
    Ok(Some(ring))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(group: &str, fiber: &str, dir: &Path) -> SessionConfig {
        SessionConfig {
            group_spec: group.into(),
            fiber_spec: fiber.into(),
            cache_dir: Some(dir.to_path_buf()),
            caps: ResourceCaps::default(),
            exec: Exec::default(),
        }
    }

    fn entry_path(dir: &Path) -> PathBuf {
        fs::read_dir(dir)
            .unwrap()
            .map(|e| e.unwrap().path())
            .find(|p| p.extension().is_some_and(|x| x == "json"))
            .unwrap()
    }

    #[test]
    fn save_then_load_reproduces_the_ring() {
        let dir = tempfile::tempdir().unwrap();
        let first = Session::open(config("S3", "2", dir.path())).unwrap();
        first.ring.precompute_constants();
        first.save().unwrap();
        let second = Session::open(config("S3", "2", dir.path())).unwrap();
        assert_eq!(basis_keys(&second.ring), basis_keys(&first.ring));
        let snapshot = second.ring.constants_snapshot();
        assert!(snapshot.iter().all(Option::is_some));
        assert_eq!(snapshot, first.ring.constants_snapshot());
    }

    #[test]
    fn bad_entries_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let s = Session::open(config("S3", "2", dir.path())).unwrap();
        s.save().unwrap();
        let path = entry_path(dir.path());

        fs::write(&path, b"{ not json").unwrap();
        let again = Session::open(config("S3", "2", dir.path())).unwrap();
        assert_eq!(again.ring.rank(), 6);

        again.save().unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let bumped = text.replacen("\"formatVersion\":1", "\"formatVersion\":99", 1);
        assert_ne!(text, bumped);
        fs::write(&path, bumped).unwrap();
        let key = cache_key(again.ring.group(), again.ring.fiber());
        let group = again.ring.group().clone();
        let fiber = again.ring.fiber().clone();
        assert!(load(&path, &key, &group, &fiber, &again.config).is_err());
        assert_eq!(Session::open(config("S3", "2", dir.path())).unwrap().ring.rank(), 6);
    }

    #[test]
    fn distinct_specs_have_distinct_keys() {
        let specs = [("S3", "2"), ("S3", "1"), ("S3", "6"), ("C6", "2"), ("D4", "2"), ("Q8", "2"), ("C2", "2x2")];
        let keys: std::collections::HashSet<String> = specs
            .iter()
            .map(|(g, a)| {
                cache_key(
                    &parse_group_spec(g, 10_000).unwrap(),
                    &parse_fiber_spec(a).unwrap(),
                )
            })
            .collect();
        assert_eq!(keys.len(), specs.len());
        // equal groups given by different specs share a key
        let c3 = parse_group_spec("S3", 100).unwrap();
        let perm = parse_group_spec("perm:3:(1 2);(1 2 3)", 100).unwrap();
        let a = parse_fiber_spec("2").unwrap();
        assert_eq!(cache_key(&c3, &a), cache_key(&perm, &a));
    }
}
