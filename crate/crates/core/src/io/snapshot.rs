//! Raw field snapshots.
//!
//! Layout: a 64-byte little-endian header
//!
//! | bytes  | content                         |
//! |--------|---------------------------------|
//! | 0..4   | magic `VDWE`                    |
//! | 4..8   | format version (`u32`)          |
//! | 8..12  | dimension `d` (`u32`)           |
//! | 12..16 | number of components (`u32`)    |
//! | 16..32 | cells per axis (`2 x u64`, 1 for unused axes) |
//! | 32..40 | time (`f64`)                    |
//! | 40..48 | lower box corner (`f64`)        |
//! | 48..56 | box length (`f64`)              |
//! | 56..64 | reserved, zero                  |
//!
//! followed by each component as little-endian `f64`, `x` varying fastest.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::solver::{FieldSet, Grid};

pub const MAGIC: &[u8; 4] = b"VDWE";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 64;

/// Decoded snapshot header.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotHeader {
    pub version: u32,
    pub dim: usize,
    pub components: usize,
    pub cells: [usize; 2],
    pub time: f64,
    pub lower: f64,
    pub length: f64,
}

pub fn encode(fields: &FieldSet) -> Vec<u8> {
    let g = fields.grid;
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * g.len() * fields.components.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.dim() as u32).to_le_bytes());
    out.extend_from_slice(&(fields.components.len() as u32).to_le_bytes());
    for axis in 0..2 {
        let n = if axis < g.dim() { g.cells() } else { 1 };
        out.extend_from_slice(&(n as u64).to_le_bytes());
    }
    for x in [fields.time, g.lower(), g.length()] {
        out.extend_from_slice(&x.to_le_bytes());
    }
    out.extend_from_slice(&[0u8; 8]);
    for c in &fields.components {
        for x in c {
            out.extend_from_slice(&x.to_le_bytes());
        }
    }
    out
}

fn word<const N: usize>(bytes: &[u8], at: usize) -> [u8; N] {
    bytes[at..at + N].try_into().expect("slice length checked by caller")
}

pub fn decode_header(bytes: &[u8]) -> Result<SnapshotHeader> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!("snapshot has {} bytes, header needs {HEADER_LEN}", bytes.len())));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::Format("bad snapshot magic".into()));
    }
    let version = u32::from_le_bytes(word(bytes, 4));
    if version != VERSION {
        return Err(Error::Format(format!("unsupported snapshot version {version}")));
    }
    Ok(SnapshotHeader {
        version,
        dim: u32::from_le_bytes(word(bytes, 8)) as usize,
        components: u32::from_le_bytes(word(bytes, 12)) as usize,
        cells: [u64::from_le_bytes(word(bytes, 16)) as usize, u64::from_le_bytes(word(bytes, 24)) as usize],
        time: f64::from_le_bytes(word(bytes, 32)),
        lower: f64::from_le_bytes(word(bytes, 40)),
        length: f64::from_le_bytes(word(bytes, 48)),
    })
}

pub fn decode(bytes: &[u8]) -> Result<FieldSet> {
    let h = decode_header(bytes)?;
    let grid = Grid::new(h.dim, h.cells[0], h.lower, h.length)?;
    let n = grid.len();
    let expected = HEADER_LEN + 8 * n * h.components;
    if bytes.len() != expected {
        return Err(Error::Format(format!("snapshot has {} bytes, expected {expected}", bytes.len())));
    }
    let components = (0..h.components)
        .map(|c| {
            let start = HEADER_LEN + 8 * n * c;
            (0..n).map(|i| f64::from_le_bytes(word(bytes, start + 8 * i))).collect()
        })
        .collect();
    Ok(FieldSet { grid, time: h.time, components })
}

pub fn write(path: &Path, fields: &FieldSet) -> Result<()> {
    fs::write(path, encode(fields)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read(path: &Path) -> Result<FieldSet> {
    decode(&fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let grid = Grid::centered(2, 16, 3.0).unwrap();
        let mut f = FieldSet::zeros(grid, true);
        f.time = 1.25;
        for (c, comp) in f.components.iter_mut().enumerate() {
            for (i, x) in comp.iter_mut().enumerate() {
                *x = (i as f64 * 0.37 + c as f64).sin();
            }
        }
        let bytes = encode(&f);
        assert_eq!(&bytes[..4], b"VDWE");
        let h = decode_header(&bytes).unwrap();
        assert_eq!((h.dim, h.components, h.cells, h.time), (2, 4, [16, 16], 1.25));
        assert_eq!(decode(&bytes).unwrap(), f);
    }

    #[test]
    fn truncated_data_is_rejected() {
        let grid = Grid::centered(1, 16, 3.0).unwrap();
        let bytes = encode(&FieldSet::zeros(grid, false));
        assert!(decode(&bytes[..bytes.len() - 8]).is_err());
        assert!(decode(&bytes[..10]).is_err());
    }
}
