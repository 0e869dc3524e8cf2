//! Binary field files and CSV export.
//!
//! Layout (all little-endian):
//!
//! ```text
//! magic    4 bytes   "HQF1" (quaternion, 2 axes) or "HMF4" (Cl(3,1), 4 axes)
//! version  u32       1
//! counts   u32 × d   samples per axis
//! spacing  f64 × d   grid spacing per axis
//! payload  f64 × ... row-major samples, 4 or 16 coefficients each
//! ```
//!
//! The same layout stores spatial fields and spectra; the grid spec is the
//! spatial grid in both cases.

use std::fs;
use std::path::Path;

use super::{Axis, Domain, Field2, Field4, Grid2Spec, Grid4Spec, MVField4, QField2};
use crate::error::{Error, Result};
use crate::hypercomplex::{Multivector31, Quaternion, BLADE_COUNT, BLADE_NAMES};

pub const MAGIC_Q2: [u8; 4] = *b"HQF1";
pub const MAGIC_MV4: [u8; 4] = *b"HMF4";
pub const FORMAT_VERSION: u32 = 1;

/// A field file of either kind, as identified by its magic.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyField {
    Quaternion2(QField2),
    Multivector4(MVField4),
}

struct Header {
    counts: Vec<usize>,
    spacings: Vec<f64>,
    payload_offset: usize,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl<'a> Cursor<'a> {
    fn take<const N: usize>(&mut self, what: &str) -> Result<[u8; N]> {
        let end = self.pos + N;
        let chunk = self
            .bytes
            .get(self.pos..end)
            .ok_or_else(|| Error::format(self.path, format!("truncated while reading {what}")))?;
        self.pos = end;
        Ok(chunk.try_into().expect("slice length"))
    }
}

fn encode_header(magic: [u8; 4], axes: &[Axis], payload_len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + axes.len() * 12 + payload_len * 8);
    out.extend_from_slice(&magic);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    for a in axes {
        out.extend_from_slice(&(a.n as u32).to_le_bytes());
    }
    for a in axes {
        out.extend_from_slice(&a.h.to_le_bytes());
    }
    out
}

fn decode_header(bytes: &[u8], path: &Path, magic: [u8; 4], dims: usize) -> Result<Header> {
    let mut cur = Cursor { bytes, pos: 0, path };
    let found = cur.take::<4>("magic")?;
    if found != magic {
        return Err(Error::format(
            path,
            format!("bad magic {:?}, expected {:?}", String::from_utf8_lossy(&found), String::from_utf8_lossy(&magic)),
        ));
    }
    let version = u32::from_le_bytes(cur.take::<4>("version")?);
    if version != FORMAT_VERSION {
        return Err(Error::format(path, format!("unsupported version {version}")));
    }
    let mut counts = Vec::with_capacity(dims);
    for _ in 0..dims {
        counts.push(u32::from_le_bytes(cur.take::<4>("axis count")?) as usize);
    }
    let mut spacings = Vec::with_capacity(dims);
    for _ in 0..dims {
        spacings.push(f64::from_le_bytes(cur.take::<8>("spacing")?));
    }
    Ok(Header { counts, spacings, payload_offset: cur.pos })
}

fn decode_payload(bytes: &[u8], path: &Path, expected_values: usize) -> Result<Vec<f64>> {
    if bytes.len() != expected_values * 8 {
        let reason =
            if bytes.len() < expected_values * 8 { "truncated payload" } else { "trailing bytes after payload" };
        return Err(Error::format(
            path,
            format!("{reason}: header implies {} bytes, found {}", expected_values * 8, bytes.len()),
        ));
    }
    let values: Vec<f64> =
        bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8"))).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::format(path, "payload contains non-finite values"));
    }
    Ok(values)
}

fn axes_from_header(h: &Header, path: &Path) -> Result<Vec<Axis>> {
    h.counts
        .iter()
        .zip(&h.spacings)
        .map(|(&n, &s)| Axis::new(n, s).map_err(|e| Error::format(path, e.to_string())))
        .collect()
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::io(path, e))
}

pub fn write_field2<D: Domain>(path: impl AsRef<Path>, field: &Field2<D>) -> Result<()> {
    let mut out = encode_header(MAGIC_Q2, &field.spec().axes, field.samples().len() * 4);
    for q in field.samples() {
        for c in q.to_array() {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    write_bytes(path.as_ref(), &out)
}

fn parse_field2<D: Domain>(bytes: &[u8], path: &Path) -> Result<Field2<D>> {
    let header = decode_header(bytes, path, MAGIC_Q2, 2)?;
    let axes = axes_from_header(&header, path)?;
    let spec = Grid2Spec { axes: [axes[0], axes[1]] };
    let values = decode_payload(&bytes[header.payload_offset..], path, spec.len() * 4)?;
    let samples = values.chunks_exact(4).map(|c| Quaternion::new(c[0], c[1], c[2], c[3])).collect();
    Ok(Field2::from_parts(spec, samples))
}

pub fn read_field2<D: Domain>(path: impl AsRef<Path>) -> Result<Field2<D>> {
    let path = path.as_ref();
    parse_field2(&read_bytes(path)?, path)
}

pub fn write_field4<D: Domain>(path: impl AsRef<Path>, field: &Field4<D>) -> Result<()> {
    let mut out = encode_header(MAGIC_MV4, &field.spec().axes, field.samples().len() * BLADE_COUNT);
    for m in field.samples() {
        for c in m.coeffs {
            out.extend_from_slice(&c.to_le_bytes());
        }
    }
    write_bytes(path.as_ref(), &out)
}

fn parse_field4<D: Domain>(bytes: &[u8], path: &Path) -> Result<Field4<D>> {
    let header = decode_header(bytes, path, MAGIC_MV4, 4)?;
    let axes = axes_from_header(&header, path)?;
    let spec = Grid4Spec { axes: [axes[0], axes[1], axes[2], axes[3]] };
    let values = decode_payload(&bytes[header.payload_offset..], path, spec.len() * BLADE_COUNT)?;
    let samples =
        values.chunks_exact(BLADE_COUNT).map(|c| Multivector31::new(c.try_into().expect("chunk of 16"))).collect();
    Ok(Field4::from_parts(spec, samples))
}

pub fn read_field4<D: Domain>(path: impl AsRef<Path>) -> Result<Field4<D>> {
    let path = path.as_ref();
    parse_field4(&read_bytes(path)?, path)
}

/// Reads a spatial field of whichever kind the magic announces.
pub fn read_any_field(path: impl AsRef<Path>) -> Result<AnyField> {
    let path = path.as_ref();
    let bytes = read_bytes(path)?;
    match bytes.get(..4) {
        Some(m) if m == MAGIC_Q2 => parse_field2(&bytes, path).map(AnyField::Quaternion2),
        Some(m) if m == MAGIC_MV4 => parse_field4(&bytes, path).map(AnyField::Multivector4),
        Some(_) => Err(Error::format(path, "unknown magic")),
        None => Err(Error::format(path, "truncated while reading magic")),
    }
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::format(path, format!("{other:?}")),
    }
}

/// One sample per row: node coordinates, then the four coefficients.
pub fn write_csv2<D: Domain>(path: impl AsRef<Path>, field: &Field2<D>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    let coords = if D::NAME == "space" { ["x1", "x2"] } else { ["w1", "w2"] };
    let header = coords.iter().copied().chain(["r", "i", "j", "k"]);
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for ((u1, u2), q) in field.nodes().zip(field.samples()) {
        let row = [u1, u2, q.r, q.i, q.j, q.k].map(|v| v.to_string());
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// One sample per row: `(t, x, y, z)` node coordinates, then the 16 blade coefficients.
pub fn write_csv4<D: Domain>(path: impl AsRef<Path>, field: &Field4<D>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_err(path, e))?;
    let coords = if D::NAME == "space" { ["t", "x", "y", "z"] } else { ["wt", "w1", "w2", "w3"] };
    let header: Vec<&str> = coords.iter().copied().chain(BLADE_NAMES).collect();
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for (flat, m) in field.samples().iter().enumerate() {
        let row: Vec<String> = field.node(flat).iter().chain(&m.coeffs).map(|v| v.to_string()).collect();
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{random_packets2, random_packets4, Frequency, PacketConfig, Space, Spectrum2};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample2() -> QField2 {
        let spec = Grid2Spec::new(16, 16, 0.5, 0.25).unwrap();
        random_packets2(&spec, &PacketConfig::default(), &mut ChaCha8Rng::seed_from_u64(1))
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.hqf");
        let f = sample2();
        write_field2(&path, &f).unwrap();
        let first = fs::read(&path).unwrap();
        assert_eq!(first.len(), 8 + 2 * 4 + 2 * 8 + 256 * 32);
        let back: QField2 = read_field2(&path).unwrap();
        assert_eq!(back, f);
        write_field2(&path, &back).unwrap();
        assert_eq!(fs::read(&path).unwrap(), first);
    }

    #[test]
    fn round_trip_4d() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.hmf");
        let spec = Grid4Spec::cube(8, 0.9).unwrap();
        let f = random_packets4(&spec, &PacketConfig::coarse(), &mut ChaCha8Rng::seed_from_u64(2));
        write_field4(&path, &f).unwrap();
        match read_any_field(&path).unwrap() {
            AnyField::Multivector4(g) => assert_eq!(g, f),
            other => panic!("wrong kind {other:?}"),
        }
    }

    #[test]
    fn truncated_file_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.hqf");
        write_field2(&path, &sample2()).unwrap();
        let bytes = fs::read(&path).unwrap();
        for cut in [2, 6, 20, bytes.len() - 3] {
            fs::write(&path, &bytes[..cut]).unwrap();
            let err = read_field2::<Space>(&path).unwrap_err();
            assert!(matches!(err, Error::Format { .. }), "cut {cut}: {err}");
        }
    }

    #[test]
    fn shape_mismatch_is_a_format_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.hqf");
        write_field2(&path, &sample2()).unwrap();
        let mut bytes = fs::read(&path).unwrap();
        // claim 32 rows instead of 16
        bytes[8..12].copy_from_slice(&32u32.to_le_bytes());
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_field2::<Space>(&path), Err(Error::Format { .. })));

        let mut bytes = fs::read(&path).unwrap();
        bytes[8..12].copy_from_slice(&16u32.to_le_bytes());
        bytes.extend_from_slice(&[0u8; 8]);
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_field2::<Frequency>(&path), Err(Error::Format { .. })));
    }

    #[test]
    fn bad_magic_and_version() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.hqf");
        write_field2(&path, &sample2()).unwrap();
        let good = fs::read(&path).unwrap();

        let mut bytes = good.clone();
        bytes[..4].copy_from_slice(b"HMF4");
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_field2::<Space>(&path), Err(Error::Format { .. })));

        let mut bytes = good;
        bytes[4..8].copy_from_slice(&7u32.to_le_bytes());
        fs::write(&path, &bytes).unwrap();
        assert!(matches!(read_field2::<Space>(&path), Err(Error::Format { .. })));
    }

    #[test]
    fn missing_file_is_an_io_error() {
        assert!(matches!(read_field2::<Space>("/nonexistent/x.hqf"), Err(Error::Io { .. })));
    }

    #[test]
    fn csv_has_one_row_per_sample() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        let f = sample2();
        write_csv2(&path, &f).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x1,x2,r,i,j,k"));
        assert_eq!(lines.count(), 256);
        let spectrum: Spectrum2 = Field2::from_parts(*f.spec(), f.samples().to_vec());
        write_csv2(&path, &spectrum).unwrap();
        assert!(fs::read_to_string(&path).unwrap().starts_with("w1,w2,"));
    }
}
