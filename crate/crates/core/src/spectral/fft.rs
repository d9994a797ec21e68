//! Unnormalized 2-D complex FFTs on square grids (rows, transpose, rows, transpose).

use rustfft::num_complex::Complex;

use super::Grid;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Direction {
    Forward,
    Inverse,
}

/// Reusable scratch for repeated transforms.
#[derive(Debug, Default)]
pub(crate) struct FftScratch<T> {
    buf: Vec<Complex<T>>,
}

impl<T: Scalar> FftScratch<T> {
    pub(crate) fn new() -> Self {
        Self { buf: Vec::new() }
    }
}

fn transpose_square<T: Copy>(data: &mut [T], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}

/// In-place 2-D DFT without normalization.
pub(crate) fn fft2<T: Scalar>(
    grid: &Grid<T>,
    data: &mut [Complex<T>],
    dir: Direction,
    scratch: &mut FftScratch<T>,
) {
    let n = grid.n();
    debug_assert_eq!(data.len(), n * n);
    let plan = match dir {
        Direction::Forward => grid.forward_plan(),
        Direction::Inverse => grid.inverse_plan(),
    };
    let need = plan.get_inplace_scratch_len();
    if scratch.buf.len() < need {
        scratch.buf.resize(need, Complex::new(T::zero(), T::zero()));
    }
    let s = &mut scratch.buf[..need];
    plan.process_with_scratch(data, s);
    transpose_square(data, n);
    plan.process_with_scratch(data, s);
    transpose_square(data, n);
}
