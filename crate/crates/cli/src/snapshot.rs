//! Binary snapshot format, bit-exact round trip.
//!
//! Layout: ASCII magic "SNLS", format version (u32 LE), n (u32 LE), then
//! half_width, b, t as f64 LE, then n^2 complex samples as interleaved
//! (re, im) f64 LE pairs, row-major. Header is 36 bytes.

use num_complex::Complex64;
use snls_core::field::Field;
use snls_core::grid::GridSpec;

use crate::error::{CliError, Result};

pub const MAGIC: &[u8; 4] = b"SNLS";
pub const VERSION: u32 = 1;
pub const HEADER_LEN: usize = 36;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnapshotMeta {
    pub b: f64,
    pub t: f64,
}

pub fn write_snapshot(u: &Field, meta: SnapshotMeta) -> Vec<u8> {
    let grid = u.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * grid.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(grid.n() as u32).to_le_bytes());
    out.extend_from_slice(&grid.half_width().to_le_bytes());
    out.extend_from_slice(&meta.b.to_le_bytes());
    out.extend_from_slice(&meta.t.to_le_bytes());
    for z in u.values() {
        out.extend_from_slice(&z.re.to_le_bytes());
        out.extend_from_slice(&z.im.to_le_bytes());
    }
    out
}

fn read_f64(bytes: &[u8], offset: usize) -> f64 {
    f64::from_le_bytes(bytes[offset..offset + 8].try_into().unwrap())
}

pub fn read_snapshot(bytes: &[u8]) -> Result<(Field, SnapshotMeta)> {
    if bytes.len() >= 4 && &bytes[0..4] != MAGIC {
        return Err(CliError::Runtime("bad magic".into()));
    }
    if bytes.len() < HEADER_LEN {
        return Err(CliError::Runtime("truncated payload".into()));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().unwrap());
    if version != VERSION {
        return Err(CliError::Runtime(format!(
            "version mismatch: found {version}, expected {VERSION}"
        )));
    }
    let n = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let half_width = read_f64(bytes, 12);
    let b = read_f64(bytes, 20);
    let t = read_f64(bytes, 28);
    let expected = HEADER_LEN + 16 * n * n;
    if bytes.len() < expected {
        return Err(CliError::Runtime("truncated payload".into()));
    }
    let grid = GridSpec::new(n, half_width)
        .map_err(|e| CliError::Runtime(format!("snapshot header: {e}")))?;
    let mut values = Vec::with_capacity(n * n);
    for idx in 0..n * n {
        let off = HEADER_LEN + 16 * idx;
        values.push(Complex64::new(
            read_f64(bytes, off),
            read_f64(bytes, off + 8),
        ));
    }
    let field = Field::new(grid, values).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok((field, SnapshotMeta { b, t }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use snls_core::rng::Rng;

    fn random_field() -> Field {
        let grid = GridSpec::new(8, 4.0).unwrap();
        let mut rng = Rng::new(3);
        Field::new(
            grid,
            (0..grid.len())
                .map(|_| Complex64::new(rng.normal(), rng.normal()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn round_trip_is_bitwise_exact() {
        let u = random_field();
        let meta = SnapshotMeta { b: 0.5, t: 0.25 };
        let bytes = write_snapshot(&u, meta);
        let (v, m) = read_snapshot(&bytes).unwrap();
        assert_eq!(m, meta);
        assert_eq!(u.grid(), v.grid());
        for (a, b) in u.values().iter().zip(v.values().iter()) {
            assert_eq!(a.re.to_bits(), b.re.to_bits());
            assert_eq!(a.im.to_bits(), b.im.to_bits());
        }
        // writing again is byte-identical
        assert_eq!(bytes, write_snapshot(&v, m));
    }

    #[test]
    fn header_is_36_bytes() {
        let u = random_field();
        let bytes = write_snapshot(&u, SnapshotMeta { b: 0.5, t: 0.0 });
        assert_eq!(bytes.len(), HEADER_LEN + 16 * 64);
        assert_eq!(&bytes[0..4], b"SNLS");
    }

    #[test]
    fn error_paths_are_distinct() {
        let u = random_field();
        let bytes = write_snapshot(&u, SnapshotMeta { b: 0.5, t: 0.0 });

        let mut bad_magic = bytes.clone();
        bad_magic[0] = b'X';
        let err = read_snapshot(&bad_magic).unwrap_err().to_string();
        assert!(err.contains("bad magic"), "{err}");

        let mut bad_version = bytes.clone();
        bad_version[4..8].copy_from_slice(&7u32.to_le_bytes());
        let err = read_snapshot(&bad_version).unwrap_err().to_string();
        assert!(err.contains("version mismatch"), "{err}");

        let truncated = &bytes[..bytes.len() - 3];
        let err = read_snapshot(truncated).unwrap_err().to_string();
        assert!(err.contains("truncated payload"), "{err}");

        let err = read_snapshot(&bytes[..10]).unwrap_err().to_string();
        assert!(err.contains("truncated payload"), "{err}");
    }
}
