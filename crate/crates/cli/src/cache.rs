//! On-disk cache of distance tables and thinness memos, keyed by content
//! hash.
//!
//! Distance files (`CSDC1`): magic, vertex count as `u64` LE, then the
//! row-major table as `u32` LE with `0xFFFFFFFF` for unreachable pairs.
//! Memo files (`CSRM1`): magic, then `(p, q, midpoint code, doubled radius
//! << 1 | thin)` records as four `u32` LE, then a SHA-256 of the records.
//!
//! A file that fails to parse or verify is reported and ignored; the caller
//! recomputes.

use std::fs;
use std::path::{Path, PathBuf};

use contraction_core::contraction::{ContractionGauge, Mode};
use contraction_core::metric::{DistanceMatrix, MetricGraph};
use log::warn;
use sha2::{Digest, Sha256};

pub const CACHE_ENV: &str = "CONTRACTION_CACHE_DIR";

const DIST_MAGIC: &[u8; 5] = b"CSDC1";
const MEMO_MAGIC: &[u8; 5] = b"CSRM1";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The cache named by the environment, if any.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Cache::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn distance_path(&self, g: &MetricGraph) -> PathBuf {
        self.dir.join(format!("{}.csdc", graph_key(g)))
    }

    pub fn memo_path(&self, g: &MetricGraph, gauge: &ContractionGauge, mode: Mode) -> PathBuf {
        let mut h = Sha256::new();
        h.update(graph_key(g));
        h.update(format!(" {gauge} {mode}"));
        self.dir.join(format!("{}.csrm", hex::encode(h.finalize())))
    }

    /// Cached distances of `g`. A hit is checked against `g` before use.
    pub fn load_distances(&self, g: &MetricGraph) -> Option<DistanceMatrix> {
        let path = self.distance_path(g);
        let bytes = fs::read(&path).ok()?;
        match decode_distances(&bytes) {
            Ok(d) if d.is_exact_for(g) => Some(d),
            Ok(_) => {
                warn!("{}: distances do not match the graph, recomputing", path.display());
                None
            }
            Err(e) => {
                warn!("{}: {e}, recomputing", path.display());
                None
            }
        }
    }

    pub fn store_distances(&self, g: &MetricGraph, d: &DistanceMatrix) {
        self.write(&self.distance_path(g), &encode_distances(d));
    }

    pub fn load_memo(&self, g: &MetricGraph, gauge: &ContractionGauge, mode: Mode) -> Option<Vec<[u32; 4]>> {
        let path = self.memo_path(g, gauge, mode);
        let bytes = fs::read(&path).ok()?;
        match decode_memo(&bytes) {
            Ok(r) => Some(r),
            Err(e) => {
                warn!("{}: {e}, recomputing", path.display());
                None
            }
        }
    }

    pub fn store_memo(&self, g: &MetricGraph, gauge: &ContractionGauge, mode: Mode, records: &[[u32; 4]]) {
        self.write(&self.memo_path(g, gauge, mode), &encode_memo(records));
    }

    fn write(&self, path: &Path, bytes: &[u8]) {
        // written aside and renamed so readers never see a partial file
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        let res = fs::create_dir_all(&self.dir)
            .and_then(|_| fs::write(&tmp, bytes))
            .and_then(|_| fs::rename(&tmp, path));
        if let Err(e) = res {
            warn!("cannot write cache file {}: {e}", path.display());
            let _ = fs::remove_file(&tmp);
        }
    }
}

/// Hex SHA-256 of the graph's text form.
pub fn graph_key(g: &MetricGraph) -> String {
    hex::encode(Sha256::digest(g.to_text().as_bytes()))
}

pub fn encode_distances(d: &DistanceMatrix) -> Vec<u8> {
    let n = d.dimension();
    let mut out = Vec::with_capacity(13 + 4 * n * n);
    out.extend_from_slice(DIST_MAGIC);
    out.extend_from_slice(&(n as u64).to_le_bytes());
    for v in d.to_flat() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode_distances(bytes: &[u8]) -> Result<DistanceMatrix, String> {
    let rest = bytes.strip_prefix(DIST_MAGIC).ok_or("bad magic")?;
    if rest.len() < 8 {
        return Err("truncated header".into());
    }
    let (head, body) = rest.split_at(8);
    let n = u64::from_le_bytes(head.try_into().unwrap());
    let n = usize::try_from(n).map_err(|_| "vertex count too large")?;
    let want = n.checked_mul(n).and_then(|c| c.checked_mul(4)).ok_or("vertex count too large")?;
    if body.len() != want {
        return Err(format!("expected {want} bytes of distances, found {}", body.len()));
    }
    let flat: Vec<u32> = body
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    DistanceMatrix::from_flat(n, &flat).map_err(|e| e.to_string())
}

pub fn encode_memo(records: &[[u32; 4]]) -> Vec<u8> {
    let mut out = Vec::with_capacity(5 + 16 * records.len() + 32);
    out.extend_from_slice(MEMO_MAGIC);
    for r in records {
        for v in r {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    let sum = Sha256::digest(&out[MEMO_MAGIC.len()..]);
    out.extend_from_slice(&sum);
    out
}

pub fn decode_memo(bytes: &[u8]) -> Result<Vec<[u32; 4]>, String> {
    let rest = bytes.strip_prefix(MEMO_MAGIC).ok_or("bad magic")?;
    if rest.len() < 32 || (rest.len() - 32) % 16 != 0 {
        return Err("truncated memo file".into());
    }
    let (body, sum) = rest.split_at(rest.len() - 32);
    if Sha256::digest(body).as_slice() != sum {
        return Err("memo checksum mismatch".into());
    }
    Ok(body
        .chunks_exact(16)
        .map(|c| std::array::from_fn(|i| u32::from_le_bytes(c[4 * i..4 * i + 4].try_into().unwrap())))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use contraction_core::metric::all_pairs_distances;
    use contraction_core::spaces::{make_cycle, make_grid};

    #[test]
    fn distances_round_trip() {
        let g = make_grid(4, 3).unwrap().graph;
        let d = all_pairs_distances(&g).unwrap();
        let bytes = encode_distances(&d);
        assert_eq!(&bytes[..5], b"CSDC1");
        assert_eq!(u64::from_le_bytes(bytes[5..13].try_into().unwrap()), 12);
        assert_eq!(decode_distances(&bytes).unwrap(), d);
        assert!(decode_distances(&bytes[..bytes.len() - 1]).is_err());
        assert!(decode_distances(b"CSDC2").is_err());
    }

    #[test]
    fn memo_round_trip() {
        let recs = vec![[0, 1, 2, 3], [4, 5, 6, 7]];
        let bytes = encode_memo(&recs);
        assert_eq!(decode_memo(&bytes).unwrap(), recs);
        let mut bad = bytes.clone();
        bad[7] ^= 1;
        assert!(decode_memo(&bad).is_err());
        assert!(decode_memo(&bytes[..bytes.len() - 3]).is_err());
    }

    #[test]
    fn store_load_and_misses() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let g = make_grid(3, 3).unwrap().graph;
        let d = all_pairs_distances(&g).unwrap();
        assert!(cache.load_distances(&g).is_none());
        cache.store_distances(&g, &d);
        assert_eq!(cache.load_distances(&g).unwrap(), d);
        // another graph has another key
        let c = make_cycle(9).unwrap().graph;
        assert!(cache.load_distances(&c).is_none());
        // a corrupted table is rejected, not trusted
        let path = cache.distance_path(&g);
        let mut bytes = fs::read(&path).unwrap();
        bytes[13] ^= 1;
        fs::write(&path, &bytes).unwrap();
        assert!(cache.load_distances(&g).is_none());
        fs::write(&path, &bytes[..20]).unwrap();
        assert!(cache.load_distances(&g).is_none());
    }
}
