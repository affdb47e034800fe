//! Per-wavenumber propagator tables: the exact linear solution operator
//! `exp(dt A(xi))` for every grid mode, plus the `dt*phi1` / `dt*phi2`
//! quadrature matrices used by the exponential two-stage step.
//!
//! Conjugate frequencies carry conjugate symbols, so only a canonical half
//! of the modes is exponentiated; the rest are mirrored.

use nalgebra::{DMatrix, SMatrix, SVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::expm::{expm, phi_matrices};
use crate::grid::Grid;
use crate::model::ModelKind;
use crate::{hallmhd, oldroyd};

#[derive(Debug, Clone)]
pub struct PhiPair<const N: usize> {
    pub phi1: SMatrix<Complex64, N, N>,
    pub phi2: SMatrix<Complex64, N, N>,
}

/// Propagators for one (grid, dt, symbol) combination.
#[derive(Debug, Clone)]
pub struct PropagatorTable<const N: usize> {
    grid: Grid,
    dt: f64,
    exp: Vec<SMatrix<Complex64, N, N>>,
    phi: Option<Vec<PhiPair<N>>>,
}

fn to_small<const N: usize>(m: &DMatrix<Complex64>) -> SMatrix<Complex64, N, N> {
    SMatrix::from_fn(|i, j| m[(i, j)])
}

fn conj_small<const N: usize>(m: &SMatrix<Complex64, N, N>) -> SMatrix<Complex64, N, N> {
    m.map(|v| v.conj())
}

impl<const N: usize> PropagatorTable<N> {
    /// Exponentiate `dt * A(xi)` over the whole grid. `with_phi` additionally
    /// tabulates `dt*phi1` and `dt*phi2` for nonlinear stepping.
    pub fn build(
        grid: Grid,
        dt: f64,
        symbol: impl Fn((f64, f64)) -> SMatrix<Complex64, N, N> + Sync,
        with_phi: bool,
    ) -> Self {
        assert!(dt >= 0.0 && dt.is_finite());
        let n = grid.n();

        // Canonical representative of each conjugate pair.
        let canonical: Vec<usize> = (0..n * n)
            .filter(|&m| {
                let (i, j) = (m / n, m % n);
                let mirror = ((n - i) % n) * n + (n - j) % n;
                m <= mirror
            })
            .collect();

        let computed: Vec<(usize, SMatrix<Complex64, N, N>, Option<PhiPair<N>>)> = canonical
            .par_iter()
            .map(|&m| {
                let (i, j) = (m / n, m % n);
                let a = symbol(grid.xi(i, j));
                let scaled = DMatrix::from_fn(N, N, |r, c| a[(r, c)] * dt);
                if with_phi {
                    let (e, p1, p2) = phi_matrices(&scaled);
                    let pair = PhiPair {
                        phi1: to_small::<N>(&p1) * Complex64::new(dt, 0.0),
                        phi2: to_small::<N>(&p2) * Complex64::new(dt, 0.0),
                    };
                    (m, to_small::<N>(&e), Some(pair))
                } else {
                    (m, to_small::<N>(&expm(&scaled)), None)
                }
            })
            .collect();

        let zero = SMatrix::<Complex64, N, N>::zeros();
        let mut exp = vec![zero; n * n];
        let mut phi = if with_phi {
            Some(vec![
                PhiPair {
                    phi1: zero,
                    phi2: zero,
                };
                n * n
            ])
        } else {
            None
        };
        for (m, e, pair) in computed {
            let (i, j) = (m / n, m % n);
            let mirror = ((n - i) % n) * n + (n - j) % n;
            exp[m] = e;
            exp[mirror] = conj_small(&e);
            if let (Some(tab), Some(p)) = (phi.as_mut(), pair) {
                tab[mirror] = PhiPair {
                    phi1: conj_small(&p.phi1),
                    phi2: conj_small(&p.phi2),
                };
                tab[m] = p;
            }
        }
        PropagatorTable { grid, dt, exp, phi }
    }

    pub fn grid(&self) -> Grid {
        self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn has_phi(&self) -> bool {
        self.phi.is_some()
    }

    pub fn exp_at(&self, mode: usize) -> &SMatrix<Complex64, N, N> {
        &self.exp[mode]
    }

    pub fn phi_at(&self, mode: usize) -> &PhiPair<N> {
        &self.phi.as_ref().expect("table built without phi matrices")[mode]
    }

    /// `modes <- exp(dt A) modes`.
    pub fn apply_exp(&self, modes: &mut [SVector<Complex64, N>]) {
        modes
            .par_iter_mut()
            .zip(self.exp.par_iter())
            .for_each(|(m, e)| *m = e * *m);
    }

    /// First exponential stage: `a* = exp(dt A) a + dt phi1(dt A) N(a)`.
    pub fn stage_predict(
        &self,
        state: &mut [SVector<Complex64, N>],
        rhs: &[SVector<Complex64, N>],
    ) {
        let phi = self.phi.as_ref().expect("table built without phi matrices");
        state
            .par_iter_mut()
            .zip(self.exp.par_iter())
            .zip(phi.par_iter())
            .zip(rhs.par_iter())
            .for_each(|(((a, e), p), na)| {
                *a = e * *a + p.phi1 * *na;
            });
    }

    /// Corrector: `a+ = a* + dt phi2(dt A) (N(a*) - N(a))`.
    pub fn stage_correct(
        &self,
        state: &mut [SVector<Complex64, N>],
        rhs_new: &[SVector<Complex64, N>],
        rhs_old: &[SVector<Complex64, N>],
    ) {
        let phi = self.phi.as_ref().expect("table built without phi matrices");
        state
            .par_iter_mut()
            .zip(phi.par_iter())
            .zip(rhs_new.par_iter())
            .zip(rhs_old.par_iter())
            .for_each(|(((a, p), nn), no)| {
                *a += p.phi2 * (*nn - *no);
            });
    }
}

/// Tables for whichever model a run advances.
#[derive(Debug, Clone)]
pub enum Propagators {
    Oldroyd(PropagatorTable<6>),
    HallMhd(PropagatorTable<5>),
}

impl Propagators {
    pub fn build(grid: Grid, dt: f64, kind: ModelKind, gamma: f64, with_phi: bool) -> Self {
        match kind {
            ModelKind::Oldroyd => Propagators::Oldroyd(PropagatorTable::build(
                grid,
                dt,
                |xi| oldroyd::linear_symbol(xi, gamma),
                with_phi,
            )),
            ModelKind::HallMhd => Propagators::HallMhd(PropagatorTable::build(
                grid,
                dt,
                |xi| hallmhd::linear_symbol(xi, gamma),
                with_phi,
            )),
        }
    }

    pub fn grid(&self) -> Grid {
        match self {
            Propagators::Oldroyd(t) => t.grid(),
            Propagators::HallMhd(t) => t.grid(),
        }
    }

    pub fn dt(&self) -> f64 {
        match self {
            Propagators::Oldroyd(t) => t.dt(),
            Propagators::HallMhd(t) => t.dt(),
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            Propagators::Oldroyd(_) => ModelKind::Oldroyd,
            Propagators::HallMhd(_) => ModelKind::HallMhd,
        }
    }
}
