//! Tagged union over the two simulated systems plus the canonical
//! component ordering used by the per-mode integrator and the snapshot
//! format: `(rho, u1, u2, t11, t12, t22)` or `(rho, u1, u2, B1, B2)`.

use nalgebra::SVector;
use num_complex::Complex64;

use crate::error::Result;
use crate::fft::Fft2;
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::hallmhd::{self, HallMhdState};
use crate::oldroyd::{self, OldroydState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Oldroyd,
    HallMhd,
}

impl ModelKind {
    pub fn component_count(&self) -> usize {
        match self {
            ModelKind::Oldroyd => 6,
            ModelKind::HallMhd => 5,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::Oldroyd => "oldroyd",
            ModelKind::HallMhd => "hallmhd",
        }
    }
}

#[derive(Debug, Clone)]
pub enum ModelState {
    Oldroyd(OldroydState),
    HallMhd(HallMhdState),
}

impl ModelState {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelState::Oldroyd(_) => ModelKind::Oldroyd,
            ModelState::HallMhd(_) => ModelKind::HallMhd,
        }
    }

    pub fn grid(&self) -> Grid {
        match self {
            ModelState::Oldroyd(s) => s.grid(),
            ModelState::HallMhd(s) => s.grid(),
        }
    }

    pub fn gamma(&self) -> f64 {
        match self {
            ModelState::Oldroyd(s) => s.params.gamma,
            ModelState::HallMhd(s) => s.params.gamma,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            ModelState::Oldroyd(s) => s.is_finite(),
            ModelState::HallMhd(s) => s.is_finite(),
        }
    }

    /// Component fields in canonical order.
    pub fn fields(&self) -> Vec<&SpectralField> {
        match self {
            ModelState::Oldroyd(s) => vec![
                &s.rho,
                &s.u.comps[0],
                &s.u.comps[1],
                &s.tau.comps[0],
                &s.tau.comps[1],
                &s.tau.comps[2],
            ],
            ModelState::HallMhd(s) => vec![
                &s.rho,
                &s.u.comps[0],
                &s.u.comps[1],
                &s.b.comps[0],
                &s.b.comps[1],
            ],
        }
    }

    pub fn fields_mut(&mut self) -> Vec<&mut SpectralField> {
        match self {
            ModelState::Oldroyd(s) => {
                let [u1, u2] = &mut s.u.comps;
                let [t11, t12, t22] = &mut s.tau.comps;
                vec![&mut s.rho, u1, u2, t11, t12, t22]
            }
            ModelState::HallMhd(s) => {
                let [u1, u2] = &mut s.u.comps;
                let [b1, b2] = &mut s.b.comps;
                vec![&mut s.rho, u1, u2, b1, b2]
            }
        }
    }
}

/// Move a state (or right-hand side) between field form and the per-mode
/// component vectors the propagator tables act on.
pub trait Packed<const N: usize>: Sized {
    fn pack(&self) -> Vec<SVector<Complex64, N>>;
    fn unpack_into(&mut self, modes: &[SVector<Complex64, N>]);
    /// Nonlinear right-hand side in packed, canonically ordered form.
    fn rhs_packed(&self, fft: &mut Fft2) -> Result<Vec<SVector<Complex64, N>>>;
}

fn pack_fields<const N: usize>(fields: &[&SpectralField]) -> Vec<SVector<Complex64, N>> {
    debug_assert_eq!(fields.len(), N);
    let len = fields[0].coeffs().len();
    let views: Vec<&[Complex64]> = fields
        .iter()
        .map(|f| f.coeffs().as_slice().expect("contiguous coefficients"))
        .collect();
    (0..len)
        .map(|m| SVector::<Complex64, N>::from_fn(|c, _| views[c][m]))
        .collect()
}

fn unpack_fields<const N: usize>(fields: &mut [&mut SpectralField], modes: &[SVector<Complex64, N>]) {
    debug_assert_eq!(fields.len(), N);
    for (c, f) in fields.iter_mut().enumerate() {
        let data = f.coeffs_mut().as_slice_mut().expect("contiguous coefficients");
        for (m, v) in modes.iter().enumerate() {
            data[m] = v[c];
        }
    }
}

impl Packed<6> for OldroydState {
    fn pack(&self) -> Vec<SVector<Complex64, 6>> {
        pack_fields(&[
            &self.rho,
            &self.u.comps[0],
            &self.u.comps[1],
            &self.tau.comps[0],
            &self.tau.comps[1],
            &self.tau.comps[2],
        ])
    }

    fn unpack_into(&mut self, modes: &[SVector<Complex64, 6>]) {
        let [u1, u2] = &mut self.u.comps;
        let [t11, t12, t22] = &mut self.tau.comps;
        let mut fields = [&mut self.rho, u1, u2, t11, t12, t22];
        unpack_fields(&mut fields, modes);
    }

    fn rhs_packed(&self, fft: &mut Fft2) -> Result<Vec<SVector<Complex64, 6>>> {
        let rhs = oldroyd::nonlinear_rhs(self, fft)?;
        Ok(pack_fields(&[
            &rhs.f,
            &rhs.g.comps[0],
            &rhs.g.comps[1],
            &rhs.h.comps[0],
            &rhs.h.comps[1],
            &rhs.h.comps[2],
        ]))
    }
}

impl Packed<5> for HallMhdState {
    fn pack(&self) -> Vec<SVector<Complex64, 5>> {
        pack_fields(&[
            &self.rho,
            &self.u.comps[0],
            &self.u.comps[1],
            &self.b.comps[0],
            &self.b.comps[1],
        ])
    }

    fn unpack_into(&mut self, modes: &[SVector<Complex64, 5>]) {
        let [u1, u2] = &mut self.u.comps;
        let [b1, b2] = &mut self.b.comps;
        let mut fields = [&mut self.rho, u1, u2, b1, b2];
        unpack_fields(&mut fields, modes);
    }

    fn rhs_packed(&self, fft: &mut Fft2) -> Result<Vec<SVector<Complex64, 5>>> {
        let rhs = hallmhd::nonlinear_rhs(self, fft)?;
        Ok(pack_fields(&[
            &rhs.f1,
            &rhs.g1.comps[0],
            &rhs.g1.comps[1],
            &rhs.h1.comps[0],
            &rhs.h1.comps[1],
        ]))
    }
}
