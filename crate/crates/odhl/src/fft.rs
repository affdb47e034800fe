use ndarray::Array2;
use ndrustfft::{ndfft, ndfft_r2c, ndifft, ndifft_r2c, FftHandler, R2cFftHandler};
use num_complex::Complex64;

use crate::grid::Grid;

/// Per-worker 2-D FFT workspace. Holds the plans and scratch buffers for one
/// grid size; never shared between threads (clone one per worker instead).
///
/// Real-data transforms run through the half-spectrum real-to-complex path
/// and mirror into the full `n x n` coefficient array, which both halves the
/// flop count and keeps conjugate symmetry exact.
pub struct Fft2 {
    n: usize,
    c2c: FftHandler<f64>,
    r2c: R2cFftHandler<f64>,
    scratch: Array2<Complex64>,
    half_a: Array2<Complex64>,
    half_b: Array2<Complex64>,
}

impl Fft2 {
    pub fn new(grid: &Grid) -> Self {
        let n = grid.n();
        Fft2 {
            n,
            c2c: FftHandler::new(n),
            r2c: R2cFftHandler::new(n),
            scratch: Array2::zeros((n, n)),
            half_a: Array2::zeros((n, n / 2 + 1)),
            half_b: Array2::zeros((n, n / 2 + 1)),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Unnormalized forward DFT along both axes of a complex array.
    pub fn forward(&mut self, data: &mut Array2<Complex64>) {
        ndfft(data, &mut self.scratch, &mut self.c2c, 0);
        ndfft(&self.scratch, data, &mut self.c2c, 1);
    }

    /// Inverse DFT along both axes, normalized by `1/n^2` overall.
    pub fn backward(&mut self, data: &mut Array2<Complex64>) {
        ndifft(data, &mut self.scratch, &mut self.c2c, 0);
        ndifft(&self.scratch, data, &mut self.c2c, 1);
    }

    /// Unnormalized forward DFT of real samples into the full coefficient
    /// array, conjugate-symmetric by construction. `scale` is folded into
    /// the spectrum assembly.
    pub fn forward_real_scaled(&mut self, phys: &Array2<f64>, scale: f64) -> Array2<Complex64> {
        let n = self.n;
        let nh = n / 2;
        ndfft_r2c(phys, &mut self.half_a, &mut self.r2c, 1);
        ndfft(&self.half_a, &mut self.half_b, &mut self.c2c, 0);
        let mut full = Array2::<Complex64>::zeros((n, n));
        for i in 0..n {
            // Lower columns straight from the half spectrum, upper columns
            // mirrored from the conjugate row, which is still intact in the
            // half buffer.
            let src = self.half_b.row(i);
            let src = src.as_slice().expect("contiguous half row");
            let mirror = self.half_b.row((n - i) % n);
            let mirror = mirror.as_slice().expect("contiguous half row");
            let dst = full.row_mut(i).into_slice().expect("contiguous row");
            for j in 0..=nh {
                dst[j] = src[j] * scale;
            }
            for j in nh + 1..n {
                dst[j] = mirror[n - j].conj() * scale;
            }
        }
        full
    }

    pub fn forward_real(&mut self, phys: &Array2<f64>) -> Array2<Complex64> {
        self.forward_real_scaled(phys, 1.0)
    }

    /// Inverse of [`Fft2::forward_real`], normalized by `1/n^2`; reads the
    /// canonical half-spectrum of `coeffs` through `weight`, which can mask,
    /// scale, or differentiate modes while they are gathered.
    pub fn backward_real_with(
        &mut self,
        coeffs: &Array2<Complex64>,
        mut weight: impl FnMut(usize, usize) -> Complex64,
    ) -> Array2<f64> {
        let n = self.n;
        let nh = n / 2;
        for i in 0..n {
            let src = coeffs.row(i);
            let src = src.as_slice().expect("contiguous row");
            let dst = self.half_a.row_mut(i).into_slice().expect("contiguous half row");
            for j in 0..=nh {
                dst[j] = src[j] * weight(i, j);
            }
        }
        ndifft(&self.half_a, &mut self.half_b, &mut self.c2c, 0);
        let mut out = Array2::<f64>::zeros((n, n));
        ndifft_r2c(&self.half_b, &mut out, &mut self.r2c, 1);
        out
    }

    pub fn backward_real(&mut self, coeffs: &Array2<Complex64>) -> Array2<f64> {
        self.backward_real_with(coeffs, |_, _| Complex64::new(1.0, 0.0))
    }
}

impl Clone for Fft2 {
    fn clone(&self) -> Self {
        Fft2 {
            n: self.n,
            c2c: FftHandler::new(self.n),
            r2c: R2cFftHandler::new(self.n),
            scratch: Array2::zeros((self.n, self.n)),
            half_a: Array2::zeros((self.n, self.n / 2 + 1)),
            half_b: Array2::zeros((self.n, self.n / 2 + 1)),
        }
    }
}

impl std::fmt::Debug for Fft2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Fft2").field("n", &self.n).finish()
    }
}
