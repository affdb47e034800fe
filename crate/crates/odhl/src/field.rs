//! Spectral representation of real scalar fields on the periodic grid,
//! with the transforms, derivative operators, dealiased products and
//! Sobolev norms everything else is built from.
//!
//! Normalization is unitary in `L^2`: with `f(x) = (1/L) * sum_k fhat_k
//! exp(i xi_k . x)` the physical `L^2` norm (trapezoidal quadrature, exact
//! for band-limited fields) equals `sqrt(sum_k |fhat_k|^2)`, so Parseval
//! is an equality.

use ndarray::{Array2, Zip};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Fft2;
use crate::grid::Grid;

/// Complex Fourier coefficients of a real scalar field.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Array2<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: Grid) -> Self {
        let n = grid.n();
        SpectralField {
            grid,
            coeffs: Array2::zeros((n, n)),
        }
    }

    pub fn from_coeffs(grid: Grid, coeffs: Array2<Complex64>) -> Result<Self> {
        let n = grid.n();
        if coeffs.dim() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: n,
                got: coeffs.dim(),
            });
        }
        Ok(SpectralField { grid, coeffs })
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &Array2<Complex64> {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.coeffs
    }

    /// Mean value of the represented field (DC coefficient over `L`).
    pub fn mean(&self) -> f64 {
        self.coeffs[[0, 0]].re / self.grid.box_length()
    }

    /// Forward transform of real physical samples.
    pub fn transform(grid: Grid, phys: &Array2<f64>, fft: &mut Fft2) -> Result<Self> {
        let n = grid.n();
        if phys.dim() != (n, n) {
            return Err(Error::ShapeMismatch {
                expected: n,
                got: phys.dim(),
            });
        }
        let scale = grid.box_length() / (n * n) as f64;
        let buf = fft.forward_real_scaled(phys, scale);
        Ok(SpectralField { grid, coeffs: buf })
    }

    /// Inverse transform to real physical samples, reading the canonical
    /// half-spectrum; any conjugate-asymmetric residue is discarded, which
    /// keeps every roundtrip exactly real.
    pub fn to_physical(&self, fft: &mut Fft2) -> Array2<f64> {
        let n = self.grid.n();
        let scale = Complex64::new((n * n) as f64 / self.grid.box_length(), 0.0);
        fft.backward_real_with(&self.coeffs, |_, _| scale)
    }

    /// Physical samples of the 2/3-truncated field, optionally of its
    /// partial derivative: the mask, the `i xi` multiplier and the inverse
    /// normalization are applied while the half-spectrum is gathered, so
    /// evaluating right-hand sides costs one pass per transform.
    pub fn phys_dealiased(&self, deriv_axis: Option<usize>, fft: &mut Fft2) -> Array2<f64> {
        let grid = self.grid;
        let n = grid.n();
        let scale = (n * n) as f64 / grid.box_length();
        fft.backward_real_with(&self.coeffs, |i, j| {
            if !grid.dealias_keep(i, j) {
                return Complex64::new(0.0, 0.0);
            }
            match deriv_axis {
                None => Complex64::new(scale, 0.0),
                Some(a) => Complex64::new(0.0, scale * grid.xi_derivative(if a == 0 { i } else { j })),
            }
        })
    }

    /// `Lambda^s f`: multiply each coefficient by `|xi|^s`. For `s < 0` the
    /// field must be mean-zero; for `s > 0` the zero mode is annihilated and
    /// for `s = 0` it is preserved.
    pub fn fractional_derivative(&self, s: f64) -> Result<Self> {
        if s == 0.0 {
            return Ok(self.clone());
        }
        if s < 0.0 {
            let dc = self.coeffs[[0, 0]].norm();
            if dc != 0.0 {
                return Err(Error::MeanMode(dc));
            }
        }
        let mut out = self.clone();
        let grid = self.grid;
        for ((i, j), c) in out.coeffs.indexed_iter_mut() {
            if i == 0 && j == 0 {
                *c = Complex64::new(0.0, 0.0);
            } else {
                *c *= grid.xi_sq(i, j).powf(s / 2.0);
            }
        }
        Ok(out)
    }

    /// Partial derivative along axis 0 or 1 (multiplication by `i xi_a`,
    /// with the Nyquist line annihilated; see [`Grid::xi_derivative`]).
    pub fn derivative(&self, axis: usize) -> Self {
        assert!(axis < 2);
        let mut out = self.clone();
        let grid = self.grid;
        for ((i, j), c) in out.coeffs.indexed_iter_mut() {
            let xi = grid.xi_derivative(if axis == 0 { i } else { j });
            *c *= Complex64::new(0.0, xi);
        }
        out
    }

    pub fn gradient(&self) -> VectorField {
        VectorField {
            comps: [self.derivative(0), self.derivative(1)],
        }
    }

    pub fn laplacian(&self) -> Self {
        let mut out = self.clone();
        let grid = self.grid;
        for ((i, j), c) in out.coeffs.indexed_iter_mut() {
            *c *= -grid.xi_sq(i, j);
        }
        out
    }

    /// Zero every mode outside the 2/3-rule square.
    pub fn dealias(&mut self) {
        let grid = self.grid;
        let n = grid.n();
        let cut = ((n - 1) / 3) as usize;
        let zero = Complex64::new(0.0, 0.0);
        for i in 0..n {
            let row = self.coeffs.row_mut(i).into_slice().expect("contiguous row");
            if grid.mode(i).unsigned_abs() as usize > cut {
                row.fill(zero);
            } else {
                row[cut + 1..n - cut].fill(zero);
            }
        }
    }

    pub fn dealiased(&self) -> Self {
        let mut out = self.clone();
        out.dealias();
        out
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `||f||_{H^s}^2 = sum (1+|xi|^2)^s |fhat|^2`, defined here for `s >= 0`.
    pub fn sobolev_norm_sq(&self, s: f64) -> f64 {
        assert!(s >= 0.0, "H^s norms are provided for s >= 0");
        let grid = self.grid;
        self.coeffs
            .indexed_iter()
            .map(|((i, j), c)| (1.0 + grid.xi_sq(i, j)).powf(s) * c.norm_sqr())
            .sum()
    }

    pub fn sobolev_norm(&self, s: f64) -> f64 {
        self.sobolev_norm_sq(s).sqrt()
    }

    /// Largest deviation from conjugate symmetry, `max |fhat(xi) - conj(fhat(-xi))|`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n();
        let mut worst = 0.0f64;
        for ((i, j), c) in self.coeffs.indexed_iter() {
            let im = (n - i) % n;
            let jm = (n - j) % n;
            let d = (c - self.coeffs[[im, jm]].conj()).norm();
            worst = worst.max(d);
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn scale(&mut self, a: f64) {
        self.coeffs.mapv_inplace(|c| c * a);
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    pub fn add_assign_field(&mut self, other: &Self) {
        Zip::from(&mut self.coeffs)
            .and(&other.coeffs)
            .for_each(|a, b| *a += b);
    }

    pub fn sub_assign_field(&mut self, other: &Self) {
        Zip::from(&mut self.coeffs)
            .and(&other.coeffs)
            .for_each(|a, b| *a -= b);
    }

    pub fn added(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_field(other);
        out
    }

    pub fn subbed(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign_field(other);
        out
    }
}

/// Pseudo-spectral product with the 2/3 rule applied to both inputs and to
/// the output, so the result is the exact truncated convolution of the
/// truncated inputs.
pub fn dealiased_product(f: &SpectralField, g: &SpectralField, fft: &mut Fft2) -> Result<SpectralField> {
    f.grid.same_grid(&g.grid)?;
    let fp = f.dealiased().to_physical(fft);
    let gp = g.dealiased().to_physical(fft);
    let prod = &fp * &gp;
    let mut out = SpectralField::transform(f.grid, &prod, fft)?;
    out.dealias();
    Ok(out)
}

/// Two-component vector field (velocity, magnetic field).
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub comps: [SpectralField; 2],
}

impl VectorField {
    pub fn zeros(grid: Grid) -> Self {
        VectorField {
            comps: [SpectralField::zeros(grid), SpectralField::zeros(grid)],
        }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.comps[0].grid()
    }

    pub fn x(&self) -> &SpectralField {
        &self.comps[0]
    }

    pub fn y(&self) -> &SpectralField {
        &self.comps[1]
    }

    pub fn divergence(&self) -> SpectralField {
        self.comps[0].derivative(0).added(&self.comps[1].derivative(1))
    }

    /// Scalar 2-D curl `d1 v2 - d2 v1`.
    pub fn curl2d(&self) -> SpectralField {
        self.comps[1].derivative(0).subbed(&self.comps[0].derivative(1))
    }

    pub fn l2_norm_sq(&self) -> f64 {
        self.comps[0].l2_norm_sq() + self.comps[1].l2_norm_sq()
    }

    pub fn dealias(&mut self) {
        self.comps[0].dealias();
        self.comps[1].dealias();
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.is_finite())
    }

    pub fn scaled(&self, a: f64) -> Self {
        VectorField {
            comps: [self.comps[0].scaled(a), self.comps[1].scaled(a)],
        }
    }

    /// Leray projection onto divergence-free fields:
    /// `vhat - xi (xi . vhat)/|xi|^2` with the derivative-convention
    /// frequencies, so "divergence-free" means exactly what
    /// [`VectorField::divergence`] measures. Modes where that frequency
    /// vector vanishes (the zero mode and the Nyquist corner) pass through.
    pub fn project_divfree(&self) -> Self {
        let grid = self.grid();
        let mut out = self.clone();
        let n = grid.n();
        for i in 0..n {
            for j in 0..n {
                let x1 = grid.xi_derivative(i);
                let x2 = grid.xi_derivative(j);
                let q = x1 * x1 + x2 * x2;
                if q == 0.0 {
                    continue;
                }
                let v1 = self.comps[0].coeffs()[[i, j]];
                let v2 = self.comps[1].coeffs()[[i, j]];
                let dot = (v1 * x1 + v2 * x2) / q;
                out.comps[0].coeffs_mut()[[i, j]] = v1 - dot * x1;
                out.comps[1].coeffs_mut()[[i, j]] = v2 - dot * x2;
            }
        }
        out
    }
}

/// Vector field from a scalar: `(d2 w, -d1 w)`, the planar curl of `w zhat`.
pub fn perp_curl2d(w: &SpectralField) -> VectorField {
    VectorField {
        comps: [w.derivative(1), w.derivative(0).scaled(-1.0)],
    }
}

/// Symmetric 2x2 tensor field stored as the three independent components
/// `(t11, t12, t22)`; the `t21 = t12` identification is structural.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensorField {
    pub comps: [SpectralField; 3],
}

impl SymTensorField {
    pub fn zeros(grid: Grid) -> Self {
        SymTensorField {
            comps: [
                SpectralField::zeros(grid),
                SpectralField::zeros(grid),
                SpectralField::zeros(grid),
            ],
        }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.comps[0].grid()
    }

    pub fn xx(&self) -> &SpectralField {
        &self.comps[0]
    }

    pub fn xy(&self) -> &SpectralField {
        &self.comps[1]
    }

    pub fn yy(&self) -> &SpectralField {
        &self.comps[2]
    }

    /// `(div tau)_j = d_k tau^{jk}` using the symmetric storage.
    pub fn divergence(&self) -> VectorField {
        let d1 = self.comps[0].derivative(0).added(&self.comps[1].derivative(1));
        let d2 = self.comps[1].derivative(0).added(&self.comps[2].derivative(1));
        VectorField { comps: [d1, d2] }
    }

    /// Frobenius `L^2` norm squared; the off-diagonal counts twice since it
    /// represents both `t12` and `t21`.
    pub fn l2_norm_sq(&self) -> f64 {
        self.comps[0].l2_norm_sq() + 2.0 * self.comps[1].l2_norm_sq() + self.comps[2].l2_norm_sq()
    }

    pub fn dealias(&mut self) {
        for c in &mut self.comps {
            c.dealias();
        }
    }

    pub fn is_finite(&self) -> bool {
        self.comps.iter().all(|c| c.is_finite())
    }

    pub fn scaled(&self, a: f64) -> Self {
        SymTensorField {
            comps: [
                self.comps[0].scaled(a),
                self.comps[1].scaled(a),
                self.comps[2].scaled(a),
            ],
        }
    }
}
