//! Binary state snapshots.
//!
//! Layout (little endian): magic `ODHL`, format version `u32`, model tag
//! `u8` (0 = oldroyd, 1 = hallmhd), `n: u32`, `L: f64`, `t: f64`,
//! `gamma: f64`, `b: f64`, field count `u8`, then each field's full complex
//! coefficient array as interleaved `(re, im)` `f64` pairs in row-major
//! order, fields in canonical order.

use std::io::{Read, Write};
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{SpectralField, SymTensorField, VectorField};
use crate::grid::Grid;
use crate::hallmhd::{HallMhdParams, HallMhdState};
use crate::model::{ModelKind, ModelState};
use crate::oldroyd::{OldroydParams, OldroydState};

pub const MAGIC: [u8; 4] = *b"ODHL";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_snapshot(path: &Path, state: &ModelState, t: f64) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    let grid = state.grid();
    let (tag, gamma, b): (u8, f64, f64) = match state {
        ModelState::Oldroyd(s) => (0, s.params.gamma, s.params.b),
        ModelState::HallMhd(s) => (1, s.params.gamma, if s.params.hall { 1.0 } else { 0.0 }),
    };
    let fields = state.fields();
    (|| -> std::io::Result<()> {
        w.write_all(&MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&[tag])?;
        w.write_all(&(grid.n() as u32).to_le_bytes())?;
        w.write_all(&grid.box_length().to_le_bytes())?;
        w.write_all(&t.to_le_bytes())?;
        w.write_all(&gamma.to_le_bytes())?;
        w.write_all(&b.to_le_bytes())?;
        w.write_all(&[fields.len() as u8])?;
        for f in &fields {
            for c in f.coeffs().iter() {
                w.write_all(&c.re.to_le_bytes())?;
                w.write_all(&c.im.to_le_bytes())?;
            }
        }
        w.flush()
    })()
    .map_err(|e| Error::io(path, e))
}

pub struct Snapshot {
    pub state: ModelState,
    pub t: f64,
}

pub fn read_snapshot(path: &Path) -> Result<Snapshot> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = std::io::BufReader::new(file);

    let mut magic = [0u8; 4];
    r.read_exact(&mut magic)
        .map_err(|_| Error::Snapshot("file too short for the magic header".into()))?;
    if magic != MAGIC {
        return Err(Error::Snapshot(format!(
            "bad magic {magic:?}, expected {MAGIC:?}"
        )));
    }
    let version = read_u32(&mut r)?;
    if version != FORMAT_VERSION {
        return Err(Error::Snapshot(format!(
            "unsupported format version {version}, this build reads {FORMAT_VERSION}"
        )));
    }
    let tag = read_u8(&mut r)?;
    let n = read_u32(&mut r)? as usize;
    let l = read_f64(&mut r)?;
    let t = read_f64(&mut r)?;
    let gamma = read_f64(&mut r)?;
    let b = read_f64(&mut r)?;
    let field_count = read_u8(&mut r)? as usize;

    let kind = match tag {
        0 => ModelKind::Oldroyd,
        1 => ModelKind::HallMhd,
        other => return Err(Error::Snapshot(format!("unknown model tag {other}"))),
    };
    if field_count != kind.component_count() {
        return Err(Error::Snapshot(format!(
            "field count {field_count} does not match model {}",
            kind.name()
        )));
    }
    let grid = Grid::new(n, l).map_err(|e| Error::Snapshot(e.to_string()))?;

    let mut fields = Vec::with_capacity(field_count);
    let mut payload = vec![0u8; n * n * 16];
    for c in 0..field_count {
        r.read_exact(&mut payload).map_err(|_| {
            Error::Snapshot(format!(
                "payload truncated in field {c}: expected {} bytes per field",
                n * n * 16
            ))
        })?;
        let mut coeffs = Array2::<Complex64>::zeros((n, n));
        let flat = coeffs.as_slice_mut().expect("contiguous");
        for (m, chunk) in payload.chunks_exact(16).enumerate() {
            let re = f64::from_le_bytes(chunk[..8].try_into().unwrap());
            let im = f64::from_le_bytes(chunk[8..].try_into().unwrap());
            flat[m] = Complex64::new(re, im);
        }
        fields.push(SpectralField::from_coeffs(grid, coeffs)?);
    }
    let mut trailing = [0u8; 1];
    if r.read(&mut trailing).map_err(|e| Error::io(path, e))? != 0 {
        return Err(Error::Snapshot("trailing bytes after the payload".into()));
    }

    let state = match kind {
        ModelKind::Oldroyd => {
            let mut it = fields.into_iter();
            ModelState::Oldroyd(OldroydState {
                rho: it.next().unwrap(),
                u: VectorField {
                    comps: [it.next().unwrap(), it.next().unwrap()],
                },
                tau: SymTensorField {
                    comps: [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()],
                },
                params: OldroydParams { gamma, b },
            })
        }
        ModelKind::HallMhd => {
            let mut it = fields.into_iter();
            ModelState::HallMhd(HallMhdState {
                rho: it.next().unwrap(),
                u: VectorField {
                    comps: [it.next().unwrap(), it.next().unwrap()],
                },
                b: VectorField {
                    comps: [it.next().unwrap(), it.next().unwrap()],
                },
                params: HallMhdParams {
                    gamma,
                    hall: b != 0.0,
                },
            })
        }
    };
    Ok(Snapshot { state, t })
}

fn read_u8(r: &mut impl Read) -> Result<u8> {
    let mut b = [0u8; 1];
    r.read_exact(&mut b)
        .map_err(|_| Error::Snapshot("header truncated".into()))?;
    Ok(b[0])
}

fn read_u32(r: &mut impl Read) -> Result<u32> {
    let mut b = [0u8; 4];
    r.read_exact(&mut b)
        .map_err(|_| Error::Snapshot("header truncated".into()))?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64(r: &mut impl Read) -> Result<f64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b)
        .map_err(|_| Error::Snapshot("header truncated".into()))?;
    Ok(f64::from_le_bytes(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial_data::{generate, IcSpec};

    fn sample_state() -> ModelState {
        let grid = Grid::new(16, 12.0).unwrap();
        generate(&IcSpec::default(), grid, ModelKind::Oldroyd, 1.4, 0.3, true).unwrap()
    }

    #[test]
    fn roundtrip_is_bitwise() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.odhl");
        let state = sample_state();
        write_snapshot(&path, &state, 2.5).unwrap();
        let back = read_snapshot(&path).unwrap();
        assert_eq!(back.t, 2.5);
        for (a, b) in state.fields().iter().zip(back.state.fields()) {
            assert_eq!(a.coeffs(), b.coeffs());
        }
        match back.state {
            ModelState::Oldroyd(s) => {
                assert_eq!(s.params.gamma, 1.4);
                assert_eq!(s.params.b, 0.3);
            }
            _ => panic!("model tag lost"),
        }
    }

    #[test]
    fn truncated_payload_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.odhl");
        write_snapshot(&path, &sample_state(), 0.0).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        std::fs::write(&path, &bytes[..bytes.len() - 7]).unwrap();
        match read_snapshot(&path) {
            Err(Error::Snapshot(msg)) => assert!(msg.contains("truncated"), "{msg}"),
            other => panic!("expected snapshot error, got {:?}", other.map(|s| s.t)),
        }
    }

    #[test]
    fn wrong_magic_and_version_detected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.odhl");
        write_snapshot(&path, &sample_state(), 0.0).unwrap();
        let mut bytes = std::fs::read(&path).unwrap();
        let mut wrong = bytes.clone();
        wrong[0] = b'X';
        std::fs::write(&path, &wrong).unwrap();
        assert!(matches!(read_snapshot(&path), Err(Error::Snapshot(_))));

        bytes[4] = 99; // version
        std::fs::write(&path, &bytes).unwrap();
        match read_snapshot(&path) {
            Err(Error::Snapshot(msg)) => assert!(msg.contains("version"), "{msg}"),
            _ => panic!("expected version refusal"),
        }
    }
}
