//! `GSQG1` binary checkpoints.
//!
//! Layout, all integers and floats little-endian:
//!
//! | field              | type              |
//! |--------------------|-------------------|
//! | magic              | `b"GSQG1"`        |
//! | version            | `u16` (= 1)       |
//! | n                  | `u32`             |
//! | length, shift, t   | `f64` ×3          |
//! | step, seed         | `u64` ×2          |
//! | descriptor length  | `u32`             |
//! | model descriptor   | UTF-8 JSON        |
//! | coefficients       | `n × (n/2 + 1)` pairs of `f64` (re, im) |
//!
//! Coefficient rows follow the first wavenumber in FFT order; each row holds
//! second wavenumbers `0..=n/2`. The other half follows by Hermitian symmetry.

use std::path::Path;

use rustfft::num_complex::Complex;

use crate::dynamics::ModelSpec;
use crate::error::{Error, Result};
use crate::spectral::{Grid, SpectralField};

pub const CHECKPOINT_MAGIC: &[u8; 5] = b"GSQG1";
pub const CHECKPOINT_VERSION: u16 = 1;

#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub t: f64,
    pub step: u64,
    pub seed: u64,
    pub model: ModelSpec<f64>,
    pub theta: SpectralField<f64>,
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        let grid = self.theta.grid();
        let n = grid.n();
        let descriptor = serde_json::to_vec(&self.model).map_err(|e| Error::Checkpoint(e.to_string()))?;
        let mut out = Vec::with_capacity(64 + descriptor.len() + 16 * n * (n / 2 + 1));
        out.extend_from_slice(CHECKPOINT_MAGIC);
        out.extend_from_slice(&CHECKPOINT_VERSION.to_le_bytes());
        out.extend_from_slice(&(n as u32).to_le_bytes());
        for v in [grid.length(), grid.shift(), self.t] {
            out.extend_from_slice(&v.to_le_bytes());
        }
        out.extend_from_slice(&self.step.to_le_bytes());
        out.extend_from_slice(&self.seed.to_le_bytes());
        out.extend_from_slice(&(descriptor.len() as u32).to_le_bytes());
        out.extend_from_slice(&descriptor);
        let coeffs = self.theta.coeffs();
        for row in 0..n {
            for c in &coeffs[row * n..=row * n + n / 2] {
                out.extend_from_slice(&c.re.to_le_bytes());
                out.extend_from_slice(&c.im.to_le_bytes());
            }
        }
        Ok(out)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes, pos: 0 };
        if r.take(5)? != CHECKPOINT_MAGIC {
            return Err(Error::Checkpoint("bad magic tag, not a GSQG1 checkpoint".into()));
        }
        let version = u16::from_le_bytes(r.array()?);
        if version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!("unsupported version {version}")));
        }
        let n = u32::from_le_bytes(r.array()?) as usize;
        let length = r.f64()?;
        let shift = r.f64()?;
        let t = r.f64()?;
        let step = u64::from_le_bytes(r.array()?);
        let seed = u64::from_le_bytes(r.array()?);
        let dlen = u32::from_le_bytes(r.array()?) as usize;
        let model: ModelSpec<f64> =
            serde_json::from_slice(r.take(dlen)?).map_err(|e| Error::Checkpoint(format!("model descriptor: {e}")))?;
        let grid = Grid::new(n, length, shift)?;
        let zero = Complex::new(0.0, 0.0);
        let mut coeffs = vec![zero; n * n];
        for row in 0..n {
            for col in 0..=n / 2 {
                coeffs[row * n + col] = Complex::new(r.f64()?, r.f64()?);
            }
        }
        if r.pos != bytes.len() {
            return Err(Error::Checkpoint(format!("{} trailing bytes", bytes.len() - r.pos)));
        }
        for idx in 0..n * n {
            if idx % n > n / 2 {
                coeffs[idx] = coeffs[grid.conjugate_index(idx)].conj();
            }
        }
        let theta = SpectralField::from_coeffs(&grid, coeffs)?;
        Ok(Checkpoint { t, step, seed, model, theta })
    }
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len()).ok_or_else(|| {
            Error::Checkpoint(format!("truncated: needed {len} bytes at offset {}", self.pos))
        })?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn array<const N: usize>(&mut self) -> Result<[u8; N]> {
        Ok(self.take(N)?.try_into().expect("slice length checked"))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.array()?))
    }
}

pub fn write_checkpoint(checkpoint: &Checkpoint, path: &Path) -> Result<()> {
    std::fs::write(path, checkpoint.to_bytes()?)?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint> {
    Checkpoint::from_bytes(&std::fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ic;

    fn sample() -> Checkpoint {
        let g = Grid::periodic(16).unwrap();
        Checkpoint {
            t: 0.125,
            step: 7,
            seed: 42,
            model: ModelSpec::delta_sqg(0.3, 10.0),
            theta: ic::random_band(&g, 1.0, 5.0, 42).unwrap(),
        }
    }

    #[test]
    fn round_trip_is_bit_exact() {
        let c = sample();
        let back = Checkpoint::from_bytes(&c.to_bytes().unwrap()).unwrap();
        assert_eq!(back.theta.coeffs(), c.theta.coeffs());
        assert_eq!((back.t, back.step, back.seed), (0.125, 7, 42));
        assert_eq!(back.model, c.model);
        assert!(back.theta.grid().same_as(c.theta.grid()));
    }

    #[test]
    fn payload_is_half_spectrum() {
        let c = sample();
        let bytes = c.to_bytes().unwrap();
        let descriptor = serde_json::to_vec(&c.model).unwrap().len();
        assert_eq!(bytes.len(), 5 + 2 + 4 + 24 + 16 + 4 + descriptor + 16 * 16 * 9);
    }

    #[test]
    fn rejects_corruption() {
        let bytes = sample().to_bytes().unwrap();
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(Checkpoint::from_bytes(&bad), Err(Error::Checkpoint(m)) if m.contains("magic")));
        let mut bad = bytes.clone();
        bad[5] = 2;
        assert!(matches!(Checkpoint::from_bytes(&bad), Err(Error::Checkpoint(m)) if m.contains("version")));
        assert!(matches!(Checkpoint::from_bytes(&bytes[..bytes.len() - 3]), Err(Error::Checkpoint(m)) if m.contains("truncated")));
        let mut long = bytes.clone();
        long.push(0);
        assert!(Checkpoint::from_bytes(&long).is_err());
    }
}
