use crate::error::{Error, Result};

/// Uniform periodic grid on `[0, L)^2` with `n` modes per dimension.
///
/// Mode index `i in 0..n` maps to the signed integer wavenumber
/// `k = i` for `i < n/2` and `k = i - n` otherwise, so `k` ranges over
/// `{-n/2, ..., n/2 - 1}`. The physical frequency is `xi = (2*pi/L) * k`
/// componentwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    box_length: f64,
}

impl Grid {
    pub fn new(n: usize, box_length: f64) -> Result<Self> {
        if n == 0 || n % 2 != 0 {
            return Err(Error::InvalidGridSize(n));
        }
        if !(box_length > 0.0) || !box_length.is_finite() {
            return Err(Error::InvalidBoxLength(box_length));
        }
        Ok(Grid { n, box_length })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    /// Signed integer wavenumber of a mode index.
    #[inline]
    pub fn mode(&self, i: usize) -> i64 {
        debug_assert!(i < self.n);
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Physical frequency of a mode index along one axis.
    #[inline]
    pub fn xi_axis(&self, i: usize) -> f64 {
        (2.0 * std::f64::consts::PI / self.box_length) * self.mode(i) as f64
    }

    /// Frequency used by odd (first-derivative) multipliers: the Nyquist
    /// mode maps to zero since `-n/2` has no positive partner on an even
    /// grid and an odd symbol there cannot respect conjugate symmetry.
    #[inline]
    pub fn xi_derivative(&self, i: usize) -> f64 {
        let k = self.mode(i);
        if k == -(self.n as i64) / 2 {
            0.0
        } else {
            (2.0 * std::f64::consts::PI / self.box_length) * k as f64
        }
    }

    /// Frequency vector `(xi_1, xi_2)` of the mode at `(i, j)`.
    #[inline]
    pub fn xi(&self, i: usize, j: usize) -> (f64, f64) {
        (self.xi_axis(i), self.xi_axis(j))
    }

    #[inline]
    pub fn xi_sq(&self, i: usize, j: usize) -> f64 {
        let (x, y) = self.xi(i, j);
        x * x + y * y
    }

    /// Smallest nonzero frequency magnitude, `2*pi/L`.
    pub fn xi_min(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.box_length
    }

    /// Largest frequency magnitude on the grid (corner mode).
    pub fn xi_max(&self) -> f64 {
        let k = self.n as f64 / 2.0;
        self.xi_min() * (2.0 * k * k).sqrt()
    }

    /// 2/3-rule mask: `true` when the mode survives dealiasing. Retained
    /// modes satisfy `3 max(|k1|, |k2|) < n` strictly; when 3 divides n the
    /// boundary mode `|k| = n/3` is dropped too, because its quadratic image
    /// at `2n/3` wraps exactly onto `-n/3` and products would alias.
    #[inline]
    pub fn dealias_keep(&self, i: usize, j: usize) -> bool {
        let cut = ((self.n - 1) / 3) as i64;
        self.mode(i).abs() <= cut && self.mode(j).abs() <= cut
    }

    /// Time scale at which the lowest resolved frequency caps algebraic decay.
    pub fn saturation_time(&self) -> f64 {
        let l = self.box_length / (2.0 * std::f64::consts::PI);
        l * l
    }

    pub fn same_grid(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(
                self.n,
                self.box_length,
                other.n,
                other.box_length,
            ))
        }
    }
}
