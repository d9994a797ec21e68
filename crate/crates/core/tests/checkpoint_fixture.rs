//! Reads a committed checkpoint so that format drift breaks the build.

use std::path::PathBuf;

use gsqg_core::io::{read_checkpoint, write_checkpoint, Checkpoint};
use gsqg_core::{Grid, ModelSpec, SpectralField, Symbol};
use rustfft::num_complex::Complex;

fn fixture_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/n8_dissipative.gsqg")
}

fn expected() -> Checkpoint {
    let grid = Grid::periodic(8).unwrap();
    let mut theta = SpectralField::zeros(&grid);
    theta.set_mode(1, 0, Complex::new(0.5, 0.0));
    theta.set_mode(2, -1, Complex::new(0.25, -0.125));
    theta.set_mode(0, 2, Complex::new(-1.0 / 3.0, 0.0));
    Checkpoint {
        t: 0.75,
        step: 75,
        seed: 42,
        model: ModelSpec::dissipative_delta_sqg(0.3, 2.0, Symbol::log10(), 10.0),
        theta,
    }
}

#[test]
fn committed_fixture_decodes() {
    if std::env::var_os("GSQG_REGEN_FIXTURES").is_some() {
        write_checkpoint(&expected(), &fixture_path()).unwrap();
    }
    let got = read_checkpoint(&fixture_path()).unwrap();
    let want = expected();
    assert_eq!((got.t, got.step, got.seed), (0.75, 75, 42));
    assert_eq!(got.model, want.model);
    assert_eq!(got.theta.grid().n(), 8);
    assert_eq!(got.theta.coeffs(), want.theta.coeffs());
    assert_eq!(got.theta.at(-2, 1), Complex::new(0.25, 0.125));
}

#[test]
fn fixture_header_layout() {
    let bytes = std::fs::read(fixture_path()).unwrap();
    assert_eq!(&bytes[..5], b"GSQG1");
    assert_eq!(u16::from_le_bytes([bytes[5], bytes[6]]), 1);
    assert_eq!(u32::from_le_bytes(bytes[7..11].try_into().unwrap()), 8);
    let payload = 8 * 5 * 16;
    let json_len = u32::from_le_bytes(bytes[51..55].try_into().unwrap()) as usize;
    assert_eq!(bytes.len(), 55 + json_len + payload);
    assert_eq!(expected().to_bytes().unwrap(), bytes);
}
