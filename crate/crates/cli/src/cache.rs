//! Binary coset-list cache.
//!
//! Layout, little endian: magic `BCOS`, format version (u32), then the key
//! `D` (i64) and the bit patterns of `x`, `y`, `λ`, `X` (u64 each), the row
//! count (u64), and one `(c.x, c.y, d.x, d.y)` i64 quadruple per row. `Ω` is
//! recomputed on load from the exact rows, which reproduces the enumerated
//! values bit for bit.

use std::fs;
use std::io;
use std::path::Path;

use bianchi_core::bianchi_cosets::{enumerate_coset_rows, CosetRow};
use bianchi_core::hyperbolic3::{omega_factor, PointH3};
use bianchi_core::number_field::{QuadInt, RingSpec};
use serde::Serialize;

use crate::CliError;

const MAGIC: &[u8; 4] = b"BCOS";
const VERSION: u32 = 1;
const HEADER: usize = 4 + 4 + 8 * 6;

/// What happened to the cache, recorded in the output metadata.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct CacheReport {
    /// Cache file.
    pub path: String,
    /// The stored list matched the key and was used.
    pub hit: bool,
    /// Rows in the list.
    pub rows: usize,
}

fn key(ring: &RingSpec, p: &PointH3, bound: f64) -> [u64; 5] {
    [ring.d() as u64, p.z.re.to_bits(), p.z.im.to_bits(), p.lambda.to_bits(), bound.to_bits()]
}

fn encode(k: &[u64; 5], rows: &[CosetRow]) -> Vec<u8> {
    let mut out = Vec::with_capacity(HEADER + 32 * rows.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for v in k {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&(rows.len() as u64).to_le_bytes());
    for r in rows {
        for v in [r.c.x, r.c.y, r.d.x, r.d.y] {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

fn word(bytes: &[u8], at: usize) -> u64 {
    u64::from_le_bytes(bytes[at..at + 8].try_into().expect("8-byte slice"))
}

/// Rows stored under `k`, or `None` for a missing, foreign or stale file.
fn decode(bytes: &[u8], k: &[u64; 5], ring: &RingSpec, p: &PointH3) -> Option<Vec<CosetRow>> {
    if bytes.len() < HEADER || &bytes[..4] != MAGIC || bytes[4..8] != VERSION.to_le_bytes() {
        return None;
    }
    if (0..5).any(|i| word(bytes, 8 + 8 * i) != k[i]) {
        return None;
    }
    let n = word(bytes, 48) as usize;
    if bytes.len() != HEADER + 32 * n {
        return None;
    }
    let rows = (0..n)
        .map(|i| {
            let at = HEADER + 32 * i;
            let v: [i64; 4] = std::array::from_fn(|j| word(bytes, at + 8 * j) as i64);
            let (c, d) = (QuadInt::new(v[0], v[1]), QuadInt::new(v[2], v[3]));
            CosetRow { c, d, omega: omega_factor(ring.embed(c), ring.embed(d), p) }
        })
        .collect();
    Some(rows)
}

/// The coset list at `(p, bound)`, from `path` when it holds that key and
/// freshly enumerated (and written back) otherwise.
pub fn load_or_enumerate(path: &Path, ring: &RingSpec, p: &PointH3, bound: f64) -> Result<(Vec<CosetRow>, CacheReport), CliError> {
    let k = key(ring, p, bound);
    let cached = match fs::read(path) {
        Ok(bytes) => decode(&bytes, &k, ring, p),
        Err(e) if e.kind() == io::ErrorKind::NotFound => None,
        Err(e) => return Err(CliError::Io(format!("reading cache {}: {e}", path.display()))),
    };
    let report = |hit, rows| CacheReport { path: path.display().to_string(), hit, rows };
    if let Some(rows) = cached {
        let r = report(true, rows.len());
        return Ok((rows, r));
    }
    let rows = enumerate_coset_rows(ring, p, bound)?;
    fs::write(path, encode(&k, &rows)).map_err(|e| CliError::Io(format!("writing cache {}: {e}", path.display())))?;
    let r = report(false, rows.len());
    Ok((rows, r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bianchi_core::Complex64;

    #[test]
    fn round_trip_is_exact() {
        let ring = RingSpec::new(7).unwrap();
        let p = PointH3::new(Complex64::new(0.3, -0.2), 0.7).unwrap();
        let rows = enumerate_coset_rows(&ring, &p, 40.0).unwrap();
        let k = key(&ring, &p, 40.0);
        let back = decode(&encode(&k, &rows), &k, &ring, &p).unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn foreign_key_and_truncation_are_misses() {
        let ring = RingSpec::new(1).unwrap();
        let p = PointH3::J;
        let rows = enumerate_coset_rows(&ring, &p, 10.0).unwrap();
        let bytes = encode(&key(&ring, &p, 10.0), &rows);
        assert!(decode(&bytes, &key(&ring, &p, 11.0), &ring, &p).is_none());
        assert!(decode(&bytes[..bytes.len() - 1], &key(&ring, &p, 10.0), &ring, &p).is_none());
        assert!(decode(b"nope", &key(&ring, &p, 10.0), &ring, &p).is_none());
    }
}
