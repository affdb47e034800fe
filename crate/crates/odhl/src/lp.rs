//! Dyadic frequency decomposition and the homogeneous Besov seminorms
//! built on it.
//!
//! The radial bump is `phi(r) = psi(r) / sum_j psi(2^-j r)` with `psi` a
//! smooth compactly supported bump on the annulus `(3/4, 8/3)`, so the
//! dyadic partition of unity holds identically by construction: away from
//! the zero frequency, `sum_j phi(2^-j |xi|) = 1`, blocks two or more
//! octaves apart have disjoint supports, and `1/2 <= sum_j phi^2 <= 1`.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;

const ANNULUS_LO: f64 = 0.75;
const ANNULUS_HI: f64 = 8.0 / 3.0;

/// Smooth bump supported exactly on `(3/4, 8/3)`.
fn psi(r: f64) -> f64 {
    if r <= ANNULUS_LO || r >= ANNULUS_HI {
        0.0
    } else {
        (-1.0 / (r - ANNULUS_LO)).exp() * (-1.0 / (ANNULUS_HI - r)).exp()
    }
}

/// Normalizing sum `sum_{j in Z} psi(2^-j r)`, dyadically periodic in `r`.
fn psi_sum(r: f64) -> f64 {
    debug_assert!(r > 0.0);
    let base = r.log2().floor() as i32;
    let mut s = 0.0;
    for j in (base - 3)..=(base + 3) {
        s += psi(r / 2f64.powi(j));
    }
    s
}

/// Radial dyadic multiplier profile, valued in `[0, 1]`.
pub fn bump(r: f64) -> f64 {
    if r <= ANNULUS_LO || r >= ANNULUS_HI {
        0.0
    } else {
        psi(r) / psi_sum(r)
    }
}

/// Precomputed dyadic multipliers `phi(2^-j xi)` on a grid.
#[derive(Debug, Clone)]
pub struct FilterBank {
    grid: Grid,
    j_min: i32,
    j_max: i32,
    multipliers: Vec<Array2<f64>>,
    /// Per mode, the (at most two) blocks touching it: `(j - j_min, phi)`.
    touching: Vec<[(i32, f64); 2]>,
}

impl FilterBank {
    /// Build the bank with the dyadic range covering every grid frequency.
    pub fn build(grid: Grid) -> Self {
        let j_min = (grid.xi_min() * 3.0 / 8.0).log2().floor() as i32;
        let j_max = (grid.xi_max() * 4.0 / 3.0).log2().ceil() as i32;
        let n = grid.n();
        let count = (j_max - j_min + 1) as usize;
        let mut multipliers = Vec::with_capacity(count);
        for j in j_min..=j_max {
            let scale = 2f64.powi(j);
            let m = Array2::from_shape_fn((n, n), |(i, k)| {
                let r = grid.xi_sq(i, k).sqrt();
                if r == 0.0 {
                    0.0
                } else {
                    bump(r / scale)
                }
            });
            multipliers.push(m);
        }
        let mut touching = vec![[(-1, 0.0); 2]; n * n];
        for (bj, m) in multipliers.iter().enumerate() {
            for ((i, k), &v) in m.indexed_iter() {
                if v != 0.0 {
                    let slot = &mut touching[i * n + k];
                    if slot[0].0 < 0 {
                        slot[0] = (bj as i32, v);
                    } else {
                        debug_assert!(slot[1].0 < 0, "more than two blocks touch one mode");
                        slot[1] = (bj as i32, v);
                    }
                }
            }
        }
        FilterBank {
            grid,
            j_min,
            j_max,
            multipliers,
            touching,
        }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    #[inline]
    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn j_range(&self) -> impl Iterator<Item = i32> {
        self.j_min..=self.j_max
    }

    pub fn multiplier(&self, j: i32) -> Result<&Array2<f64>> {
        self.check_j(j)?;
        Ok(&self.multipliers[(j - self.j_min) as usize])
    }

    fn check_j(&self, j: i32) -> Result<()> {
        if j < self.j_min || j > self.j_max {
            Err(Error::BlockOutOfRange {
                j,
                j_min: self.j_min,
                j_max: self.j_max,
            })
        } else {
            Ok(())
        }
    }

    /// Dyadic block: coefficients multiplied by `phi(2^-j xi)`, zero mode dropped.
    pub fn dyadic_block(&self, f: &SpectralField, j: i32) -> Result<SpectralField> {
        self.grid.same_grid(&f.grid())?;
        self.check_j(j)?;
        let m = &self.multipliers[(j - self.j_min) as usize];
        let mut out = f.clone();
        for (c, &w) in out.coeffs_mut().iter_mut().zip(m.iter()) {
            *c *= w;
        }
        Ok(out)
    }

    /// `L^2` norms of every dyadic block in one pass over the spectrum.
    pub fn block_norms(&self, f: &SpectralField) -> Result<Vec<f64>> {
        self.grid.same_grid(&f.grid())?;
        let mut acc = vec![0.0f64; self.multipliers.len()];
        for (c, t) in f.coeffs().iter().zip(self.touching.iter()) {
            let e = c.norm_sqr();
            if e == 0.0 {
                continue;
            }
            for &(bj, w) in t {
                if bj >= 0 {
                    acc[bj as usize] += w * w * e;
                }
            }
        }
        Ok(acc.into_iter().map(f64::sqrt).collect())
    }

    /// Homogeneous Besov seminorm `max_j 2^{js} ||block_j||_{L^2}`.
    pub fn besov_norm(&self, f: &SpectralField, s: f64) -> Result<f64> {
        let norms = self.block_norms(f)?;
        Ok(self
            .j_range()
            .zip(norms)
            .map(|(j, b)| 2f64.powi(j).powf(s) * b)
            .fold(0.0, f64::max))
    }

    /// `sup_{j <= j_cut} 2^{-j} ||block_j||_{L^2}`.
    pub fn low_block_seminorm(&self, f: &SpectralField, j_cut: i32) -> Result<f64> {
        self.check_j(j_cut)?;
        let norms = self.block_norms(f)?;
        Ok(self
            .j_range()
            .zip(norms)
            .filter(|(j, _)| *j <= j_cut)
            .map(|(j, b)| 2f64.powi(-j) * b)
            .fold(0.0, f64::max))
    }

    /// Besov seminorm of a multi-field state: max over the component fields.
    pub fn besov_norm_multi<'a>(
        &self,
        fields: impl IntoIterator<Item = &'a SpectralField>,
        s: f64,
    ) -> Result<f64> {
        let mut worst = 0.0f64;
        for f in fields {
            worst = worst.max(self.besov_norm(f, s)?);
        }
        Ok(worst)
    }
}

/// Interpolation exponent `theta` of the Gagliardo-Nirenberg inequality
/// `||Lambda^s f||_{L^p} <= C ||Lambda^{s1} f||^{1-theta} ||Lambda^{s2} f||^theta`
/// in two dimensions, from the scaling identity
/// `s + 2(1/2 - 1/p) = s1 (1-theta) + theta s2`.
pub fn gagliardo_nirenberg_theta(s: f64, s1: f64, s2: f64, p: f64) -> f64 {
    assert!(p >= 2.0 && s2 > s1, "unsupported exponent combination");
    let theta = (s + 1.0 - 2.0 / p - s1) / (s2 - s1);
    // The identity must land in the admissible range.
    assert!(
        (-1e-12..=1.0 + 1e-12).contains(&theta),
        "scaling identity produced theta = {theta}"
    );
    let lhs = s + 2.0 * (0.5 - 1.0 / p);
    let rhs = s1 * (1.0 - theta) + theta * s2;
    assert!((lhs - rhs).abs() < 1e-12);
    theta.clamp(0.0, 1.0)
}

/// Quadrature `L^p` norm of physical samples; `p = infinity` is the max norm.
pub fn lp_norm(phys: &Array2<f64>, grid: &Grid, p: f64) -> f64 {
    if p.is_infinite() {
        return phys.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    }
    let cell = (grid.box_length() / grid.n() as f64).powi(2);
    (phys.iter().map(|v| v.abs().powf(p)).sum::<f64>() * cell).powf(1.0 / p)
}
