//! Binary snapshot format for aggregation runs.
//!
//! Layout, all little-endian:
//!
//! ```text
//! magic "RRL1"
//! u32  dimension
//! u64  particles placed
//! u64  total steps
//! u32  descriptor length, then that many UTF-8 bytes (rotor policy)
//! u64  site count, then sites in arrival order as d x i32
//! u64  counter count, then (site as d x i32, u64 reads) sorted by site
//! u32  CRC32 (IEEE) of every preceding byte
//! ```
//!
//! Sites are stored in adjunction order, so reloading reconstructs the
//! arrival indices; rotor cursors are pure functions of the visit counters
//! and need no extra state.

use crate::engine::{AggState, EngineError};
use crate::lattice::Point;
use std::collections::BTreeMap;
use std::io::{self, Read, Write};
use std::path::Path;
use thiserror::Error;

const MAGIC: &[u8; 4] = b"RRL1";

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("i/o: {0}")]
    Io(#[from] io::Error),
    #[error("not a snapshot file (bad magic)")]
    BadMagic,
    #[error("snapshot truncated")]
    Truncated,
    #[error("snapshot checksum mismatch: stored {stored:#010x}, computed {computed:#010x}")]
    ChecksumMismatch { stored: u32, computed: u32 },
    #[error("snapshot dimension {0} out of range 1..=4")]
    BadDimension(u32),
    #[error("snapshot descriptor is not UTF-8")]
    BadDescriptor,
    #[error("snapshot state rejected: {0}")]
    BadState(#[from] EngineError),
}

/// Serializes a state to its canonical snapshot bytes.
pub fn snapshot_bytes(agg: &AggState) -> Vec<u8> {
    let d = agg.dim();
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(d as u32).to_le_bytes());
    buf.extend_from_slice(&agg.particles_placed().to_le_bytes());
    buf.extend_from_slice(&agg.total_steps().to_le_bytes());
    let desc = agg.policy_descriptor().as_bytes();
    buf.extend_from_slice(&(desc.len() as u32).to_le_bytes());
    buf.extend_from_slice(desc);

    let sites = agg.sites_in_arrival_order();
    buf.extend_from_slice(&(sites.len() as u64).to_le_bytes());
    for p in &sites {
        for i in 0..d {
            buf.extend_from_slice(&p.coord(i).to_le_bytes());
        }
    }
    let counters = agg.rotor().counts();
    buf.extend_from_slice(&(counters.len() as u64).to_le_bytes());
    for (p, &m) in counters {
        for i in 0..d {
            buf.extend_from_slice(&p.coord(i).to_le_bytes());
        }
        buf.extend_from_slice(&m.to_le_bytes());
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    buf
}

pub fn write_snapshot(w: &mut impl Write, agg: &AggState) -> Result<(), SnapshotError> {
    w.write_all(&snapshot_bytes(agg))?;
    Ok(())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    at: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8], SnapshotError> {
        if self.at + n > self.bytes.len() {
            return Err(SnapshotError::Truncated);
        }
        let s = &self.bytes[self.at..self.at + n];
        self.at += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32, SnapshotError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, SnapshotError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn i32(&mut self) -> Result<i32, SnapshotError> {
        Ok(i32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn point(&mut self, d: usize) -> Result<Point, SnapshotError> {
        let mut c = [0i32; crate::lattice::MAX_DIM];
        for slot in c.iter_mut().take(d) {
            *slot = self.i32()?;
        }
        Ok(Point::new(&c[..d]))
    }
}

/// Parses snapshot bytes, verifying the checksum and the state invariants.
pub fn parse_snapshot(bytes: &[u8]) -> Result<AggState, SnapshotError> {
    if bytes.len() < MAGIC.len() + 4 {
        return Err(SnapshotError::Truncated);
    }
    let (body, trailer) = bytes.split_at(bytes.len() - 4);
    let stored = u32::from_le_bytes(trailer.try_into().unwrap());
    let computed = crc32fast::hash(body);
    if stored != computed {
        return Err(SnapshotError::ChecksumMismatch { stored, computed });
    }

    let mut cur = Cursor { bytes: body, at: 0 };
    if cur.take(4)? != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let d = cur.u32()?;
    if !(1..=crate::lattice::MAX_DIM as u32).contains(&d) {
        return Err(SnapshotError::BadDimension(d));
    }
    let d = d as usize;
    let n = cur.u64()?;
    let total_steps = cur.u64()?;
    let desc_len = cur.u32()? as usize;
    let descriptor = std::str::from_utf8(cur.take(desc_len)?)
        .map_err(|_| SnapshotError::BadDescriptor)?
        .to_string();

    let site_count = cur.u64()?;
    if site_count != n {
        return Err(SnapshotError::BadState(EngineError::InconsistentState(format!(
            "header says {n} particles but {site_count} sites are stored"
        ))));
    }
    let mut sites = Vec::with_capacity(site_count as usize);
    for _ in 0..site_count {
        sites.push(cur.point(d)?);
    }
    let counter_count = cur.u64()?;
    let mut visits = BTreeMap::new();
    for _ in 0..counter_count {
        let p = cur.point(d)?;
        let m = cur.u64()?;
        visits.insert(p, m);
    }
    if cur.at != body.len() {
        return Err(SnapshotError::Truncated);
    }
    Ok(AggState::from_parts(sites, visits, total_steps, descriptor)?)
}

pub fn read_snapshot(r: &mut impl Read) -> Result<AggState, SnapshotError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    parse_snapshot(&bytes)
}

pub fn save_to_path(path: impl AsRef<Path>, agg: &AggState) -> Result<(), SnapshotError> {
    let mut f = std::fs::File::create(path)?;
    write_snapshot(&mut f, agg)
}

pub fn load_from_path(path: impl AsRef<Path>) -> Result<AggState, SnapshotError> {
    let bytes = std::fs::read(path)?;
    parse_snapshot(&bytes)
}
