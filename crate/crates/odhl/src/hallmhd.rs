//! 2-D compressible Hall-MHD in perturbation form around (density, velocity,
//! magnetic field) = (1, 0, B0) with B0 = 0, unit viscosity and resistivity:
//!
//! ```text
//! rho_t + div u                         = F1 = -div(rho u)
//! u_t - (Lap + grad div) u + gamma grad rho = G1
//! B_t - Lap B                           = H1
//! ```
//!
//! with `G1 = -u.grad u - I(rho)(Lap + grad div)u - (curl B) x B /(1+rho)
//! + k(rho) grad rho` and `H1 = curl(u x B) - curl[(curl B) x B/(1+rho)]`.
//!
//! Planar reduction of the 3-D curl identities: `curl` of a vector is the
//! scalar `d1 v2 - d2 v1`, `curl` of a scalar `h` is `(d2 h, -d1 h)`, and
//! `(w zhat) x B = w (-B2, B1)`. These are the unique embeddings consistent
//! with the 3-D identities on planar fields.

use nalgebra::SMatrix;
use num_complex::Complex64;

use crate::error::Result;
use crate::fft::Fft2;
use crate::field::{perp_curl2d, SpectralField, VectorField};
use crate::grid::Grid;
use crate::oldroyd::{material_coeffs, truncate_pointwise, vacuum_check};

#[derive(Debug, Clone, Copy)]
pub struct HallMhdParams {
    /// Pressure exponent, `>= 1`.
    pub gamma: f64,
    /// Disable to recover standard compressible MHD.
    pub hall: bool,
}

impl Default for HallMhdParams {
    fn default() -> Self {
        HallMhdParams {
            gamma: 1.5,
            hall: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct HallMhdState {
    pub rho: SpectralField,
    pub u: VectorField,
    pub b: VectorField,
    pub params: HallMhdParams,
}

impl HallMhdState {
    pub fn zeros(grid: Grid, params: HallMhdParams) -> Self {
        HallMhdState {
            rho: SpectralField::zeros(grid),
            u: VectorField::zeros(grid),
            b: VectorField::zeros(grid),
            params,
        }
    }

    pub fn grid(&self) -> Grid {
        self.rho.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.u.is_finite() && self.b.is_finite()
    }

    /// `max |div B|`-style defect, relative to `||grad B||`.
    pub fn div_b_defect(&self) -> f64 {
        let div = self.b.divergence().l2_norm();
        let grad = (self.b.comps[0].gradient().l2_norm_sq()
            + self.b.comps[1].gradient().l2_norm_sq())
        .sqrt();
        if grad == 0.0 {
            div
        } else {
            div / grad
        }
    }
}

#[derive(Debug, Clone)]
pub struct HallMhdRhs {
    pub f1: SpectralField,
    pub g1: VectorField,
    pub h1: VectorField,
}

/// `(curl B) x B` evaluated as `w (-B2, B1)` with the scalar `w = curl B`,
/// all factors 2/3-truncated.
pub fn lorentz_term(b: &VectorField, fft: &mut Fft2) -> Result<VectorField> {
    let grid = b.grid();
    let b0 = b.comps[0].dealiased();
    let b1 = b.comps[1].dealiased();
    let w = VectorField {
        comps: [b0.clone(), b1.clone()],
    }
    .curl2d();
    let w_p = w.dealiased().to_physical(fft);
    let b0_p = b0.to_physical(fft);
    let b1_p = b1.to_physical(fft);
    let mut c0 = SpectralField::transform(grid, &(-(&w_p * &b1_p)), fft)?;
    let mut c1 = SpectralField::transform(grid, &(&w_p * &b0_p), fft)?;
    c0.dealias();
    c1.dealias();
    Ok(VectorField { comps: [c0, c1] })
}

/// Hall term `curl[(curl B) x B / (1 + rho)]` as a planar vector field.
pub fn hall_term(b: &VectorField, rho: &SpectralField, fft: &mut Fft2) -> Result<VectorField> {
    let scaled = lorentz_over_density(b, rho, fft)?;
    let h = scaled.curl2d();
    Ok(perp_curl2d(&h))
}

/// `(curl B) x B / (1 + rho)` with the reciprocal density truncated like any
/// other product factor.
fn lorentz_over_density(
    b: &VectorField,
    rho: &SpectralField,
    fft: &mut Fft2,
) -> Result<VectorField> {
    let grid = b.grid();
    let lor = lorentz_term(b, fft)?;
    let rho_p = rho.dealiased().to_physical(fft);
    vacuum_check(&rho_p)?;
    let inv = rho_p.mapv(|r| 1.0 / (1.0 + r));
    let inv_c = truncate_pointwise(grid, &inv, fft)?;
    let l0 = lor.comps[0].to_physical(fft);
    let l1 = lor.comps[1].to_physical(fft);
    let mut c0 = SpectralField::transform(grid, &(&inv_c * &l0), fft)?;
    let mut c1 = SpectralField::transform(grid, &(&inv_c * &l1), fft)?;
    c0.dealias();
    c1.dealias();
    Ok(VectorField { comps: [c0, c1] })
}

/// `curl(u x B)` via the transport identity
/// `u (div B) - (u.grad) B + (B.grad) u - B (div u)`, the `div B` term kept.
pub fn induction_transport(u: &VectorField, b: &VectorField, fft: &mut Fft2) -> Result<VectorField> {
    let grid = u.grid();
    grid.same_grid(&b.grid())?;
    let us = [u.comps[0].dealiased(), u.comps[1].dealiased()];
    let bs = [b.comps[0].dealiased(), b.comps[1].dealiased()];

    let u_p = [us[0].to_physical(fft), us[1].to_physical(fft)];
    let b_p = [bs[0].to_physical(fft), bs[1].to_physical(fft)];
    let du = [
        [us[0].derivative(0), us[0].derivative(1)],
        [us[1].derivative(0), us[1].derivative(1)],
    ];
    let db = [
        [bs[0].derivative(0), bs[0].derivative(1)],
        [bs[1].derivative(0), bs[1].derivative(1)],
    ];
    let div_u = du[0][0].added(&du[1][1]).to_physical(fft);
    let div_b = db[0][0].added(&db[1][1]).to_physical(fft);
    let du_p = [
        [du[0][0].to_physical(fft), du[0][1].to_physical(fft)],
        [du[1][0].to_physical(fft), du[1][1].to_physical(fft)],
    ];
    let db_p = [
        [db[0][0].to_physical(fft), db[0][1].to_physical(fft)],
        [db[1][0].to_physical(fft), db[1][1].to_physical(fft)],
    ];

    let mut comps = Vec::with_capacity(2);
    for j in 0..2 {
        let term = &(&u_p[j] * &div_b) - &(&u_p[0] * &db_p[j][0]) - &(&u_p[1] * &db_p[j][1])
            + &(&b_p[0] * &du_p[j][0])
            + &(&b_p[1] * &du_p[j][1])
            - &(&b_p[j] * &div_u);
        let mut s = SpectralField::transform(grid, &term, fft)?;
        s.dealias();
        comps.push(s);
    }
    Ok(VectorField {
        comps: [comps.remove(0), comps.remove(0)],
    })
}

/// Full nonlinear right-hand side `(F1, G1, H1)`; `H1` is re-projected
/// divergence-free because dealiasing and the `1/(1+rho)` product introduce
/// numerical divergence even though it is analytically a curl.
pub fn nonlinear_rhs(state: &HallMhdState, fft: &mut Fft2) -> Result<HallMhdRhs> {
    let grid = state.grid();
    let gamma = state.params.gamma;

    let rho_s = state.rho.dealiased();
    let u_s = [state.u.comps[0].dealiased(), state.u.comps[1].dealiased()];

    let rho_p = rho_s.to_physical(fft);
    let u_p = [u_s[0].to_physical(fft), u_s[1].to_physical(fft)];
    let du = [
        [
            u_s[0].derivative(0).to_physical(fft),
            u_s[0].derivative(1).to_physical(fft),
        ],
        [
            u_s[1].derivative(0).to_physical(fft),
            u_s[1].derivative(1).to_physical(fft),
        ],
    ];
    let grad_rho = [
        rho_s.derivative(0).to_physical(fft),
        rho_s.derivative(1).to_physical(fft),
    ];
    let div_u = u_s[0].derivative(0).added(&u_s[1].derivative(1));
    let visc = [
        u_s[0].laplacian().added(&div_u.derivative(0)).to_physical(fft),
        u_s[1].laplacian().added(&div_u.derivative(1)).to_physical(fft),
    ];

    let (i_raw, k_raw) = material_coeffs(&rho_p, gamma)?;
    let i_c = truncate_pointwise(grid, &i_raw, fft)?;
    let k_c = truncate_pointwise(grid, &k_raw, fft)?;

    // F1 = -div(rho u).
    let ru = [
        SpectralField::transform(grid, &(&rho_p * &u_p[0]), fft)?,
        SpectralField::transform(grid, &(&rho_p * &u_p[1]), fft)?,
    ];
    let mut f1 = ru[0].derivative(0).added(&ru[1].derivative(1));
    f1.scale(-1.0);
    f1.dealias();

    // Lorentz force scaled by the reciprocal density, shared by G1 and H1.
    let lor_scaled = lorentz_over_density(&state.b, &state.rho, fft)?;

    // G1 = -u.grad u - I visc - lor_scaled + k grad rho.
    let mut g_comps = Vec::with_capacity(2);
    for j in 0..2 {
        let adv = &(&u_p[0] * &du[j][0]) + &(&u_p[1] * &du[j][1]);
        let gp = -adv - &(&i_c * &visc[j]) + &(&k_c * &grad_rho[j]);
        let mut gs = SpectralField::transform(grid, &gp, fft)?;
        gs.sub_assign_field(&lor_scaled.comps[j]);
        gs.dealias();
        g_comps.push(gs);
    }

    // H1 = curl(u x B) - curl(lor_scaled), projected divergence-free.
    let mut h1 = induction_transport(&state.u, &state.b, fft)?;
    if state.params.hall {
        let hall = perp_curl2d(&lor_scaled.curl2d());
        h1.comps[0].sub_assign_field(&hall.comps[0]);
        h1.comps[1].sub_assign_field(&hall.comps[1]);
    }
    let h1 = h1.project_divfree();

    Ok(HallMhdRhs {
        f1,
        g1: VectorField {
            comps: [g_comps.remove(0), g_comps.remove(0)],
        },
        h1,
    })
}

/// Linear evolution matrix at one frequency for `(rho, u1, u2, B1, B2)`:
///
/// ```text
/// rho' = -i xi_k u^k
/// u^j' = -|xi|^2 u^j - xi_j xi_k u^k - i xi_j gamma rho
/// B^k' = -|xi|^2 B^k
/// ```
pub fn linear_symbol(xi: (f64, f64), gamma: f64) -> SMatrix<Complex64, 5, 5> {
    let (x1, x2) = xi;
    let q = x1 * x1 + x2 * x2;
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let re = Complex64::new;

    let mut a = SMatrix::<Complex64, 5, 5>::from_element(z);
    a[(0, 1)] = -i * x1;
    a[(0, 2)] = -i * x2;
    a[(1, 0)] = -i * x1 * gamma;
    a[(1, 1)] = re(-q - x1 * x1, 0.0);
    a[(1, 2)] = re(-x1 * x2, 0.0);
    a[(2, 0)] = -i * x2 * gamma;
    a[(2, 1)] = re(-x1 * x2, 0.0);
    a[(2, 2)] = re(-q - x2 * x2, 0.0);
    a[(3, 3)] = re(-q, 0.0);
    a[(4, 4)] = re(-q, 0.0);
    a
}
