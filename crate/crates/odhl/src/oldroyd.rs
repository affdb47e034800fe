//! 2-D compressible Oldroyd-B system in perturbation form around the rest
//! state (density, velocity, stress) = (1, 0, 0), with relaxation rate 1 and
//! coupling 1/2:
//!
//! ```text
//! rho_t + div u                                = F  = -div(rho u)
//! u_t - (1/2)(Lap + grad div) u + gamma grad rho - div tau = G
//! tau_t + tau - D(u)                           = H  = -u.grad tau - g_b(tau, grad u)
//! ```
//!
//! with `G = -u.grad u - (1/2) I(rho) (Lap + grad div) u - I(rho) div tau
//! + k(rho) grad rho`, `I(rho) = rho/(1+rho)` and
//! `k(rho) = gamma I(rho) + (gamma - P'(1+rho))/(1+rho)` for the pressure
//! law `P(r) = r^gamma`.

use nalgebra::SMatrix;
use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::Fft2;
use crate::field::{SpectralField, SymTensorField, VectorField};
use crate::grid::Grid;

/// Lowest admissible pointwise total density `1 + rho`.
pub const RHO_FLOOR: f64 = 0.5;

#[derive(Debug, Clone, Copy)]
pub struct OldroydParams {
    /// Pressure exponent, `>= 1`.
    pub gamma: f64,
    /// Slip parameter of the objective derivative, in `[-1, 1]`.
    pub b: f64,
}

impl Default for OldroydParams {
    fn default() -> Self {
        OldroydParams { gamma: 1.5, b: 0.0 }
    }
}

#[derive(Debug, Clone)]
pub struct OldroydState {
    pub rho: SpectralField,
    pub u: VectorField,
    pub tau: SymTensorField,
    pub params: OldroydParams,
}

impl OldroydState {
    pub fn zeros(grid: Grid, params: OldroydParams) -> Self {
        OldroydState {
            rho: SpectralField::zeros(grid),
            u: VectorField::zeros(grid),
            tau: SymTensorField::zeros(grid),
            params,
        }
    }

    pub fn grid(&self) -> Grid {
        self.rho.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.rho.is_finite() && self.u.is_finite() && self.tau.is_finite()
    }
}

#[derive(Debug, Clone)]
pub struct OldroydRhs {
    pub f: SpectralField,
    pub g: VectorField,
    pub h: SymTensorField,
}

/// Check the vacuum floor and return `min(1 + rho)` over the grid.
pub fn vacuum_check(rho_phys: &Array2<f64>) -> Result<f64> {
    let min_density = rho_phys.iter().fold(f64::INFINITY, |m, &r| m.min(1.0 + r));
    if min_density < RHO_FLOOR {
        Err(Error::VacuumProximity {
            min_density,
            floor: RHO_FLOOR,
        })
    } else {
        Ok(min_density)
    }
}

/// Pointwise material coefficients `I(rho)` and `k(rho)`.
///
/// `k` is written so that `P'(1) = gamma` cancels exactly at `rho = 0`, and
/// `gamma = 2` makes `k` vanish identically.
pub fn material_coeffs(rho_phys: &Array2<f64>, gamma: f64) -> Result<(Array2<f64>, Array2<f64>)> {
    vacuum_check(rho_phys)?;
    let i = rho_phys.mapv(|r| r / (1.0 + r));
    let k = rho_phys.mapv(|r| {
        let d = 1.0 + r;
        gamma * r / d + (gamma - gamma * d.powf(gamma - 1.0)) / d
    });
    Ok((i, k))
}

/// `g_b(tau, grad u) = tau W - W tau + b (D tau + tau D)` for one point,
/// with `D = (grad u + grad u^T)/2`, `W = (grad u - grad u^T)/2`.
/// `grad_u = (g11, g12, g21, g22)` holds the Jacobian entries `d u_j / d x_k`.
/// Returns the three independent components of the symmetric result.
#[inline]
pub fn g_b_point(tau: (f64, f64, f64), grad_u: (f64, f64, f64, f64), b: f64) -> (f64, f64, f64) {
    let (a, c, d) = tau;
    let (g11, g12, g21, g22) = grad_u;
    let w = 0.5 * (g12 - g21); // W = [[0, w], [-w, 0]]
    let d11 = g11;
    let d12 = 0.5 * (g12 + g21);
    let d22 = g22;
    let r11 = -2.0 * c * w + b * 2.0 * (a * d11 + c * d12);
    let r12 = (a - d) * w + b * (d12 * (a + d) + c * (d11 + d22));
    let r22 = 2.0 * c * w + b * 2.0 * (c * d12 + d * d22);
    (r11, r12, r22)
}

/// Re-truncate a pointwise coefficient field so that subsequent products
/// stay within the dealiased convolution algebra.
pub(crate) fn truncate_pointwise(grid: Grid, samples: &Array2<f64>, fft: &mut Fft2) -> Result<Array2<f64>> {
    let f = SpectralField::transform(grid, samples, fft)?;
    Ok(f.phys_dealiased(None, fft))
}

/// Full nonlinear right-hand side `(F, G, H)`.
///
/// Every quadratic term is a pointwise product of 2/3-truncated factors and
/// every output is truncated again, so each term equals the exact truncated
/// convolution of its operands.
pub fn nonlinear_rhs(state: &OldroydState, fft: &mut Fft2) -> Result<OldroydRhs> {
    let grid = state.grid();
    let gamma = state.params.gamma;
    let b = state.params.b;

    let rho_p = state.rho.phys_dealiased(None, fft);
    let u_p = [
        state.u.comps[0].phys_dealiased(None, fft),
        state.u.comps[1].phys_dealiased(None, fft),
    ];
    let tau_p = [
        state.tau.comps[0].phys_dealiased(None, fft),
        state.tau.comps[1].phys_dealiased(None, fft),
        state.tau.comps[2].phys_dealiased(None, fft),
    ];

    // Jacobian of u and the other spectral derivatives, sampled in space;
    // the 2/3 mask rides along with every gather.
    let du = [
        [
            state.u.comps[0].phys_dealiased(Some(0), fft),
            state.u.comps[0].phys_dealiased(Some(1), fft),
        ],
        [
            state.u.comps[1].phys_dealiased(Some(0), fft),
            state.u.comps[1].phys_dealiased(Some(1), fft),
        ],
    ];
    let grad_rho = [
        state.rho.phys_dealiased(Some(0), fft),
        state.rho.phys_dealiased(Some(1), fft),
    ];
    let div_tau_s = state.tau.divergence();
    let div_tau = [
        div_tau_s.comps[0].phys_dealiased(None, fft),
        div_tau_s.comps[1].phys_dealiased(None, fft),
    ];
    let div_u = state.u.divergence();
    let visc = [
        state.u.comps[0]
            .laplacian()
            .added(&div_u.derivative(0))
            .phys_dealiased(None, fft),
        state.u.comps[1]
            .laplacian()
            .added(&div_u.derivative(1))
            .phys_dealiased(None, fft),
    ];
    let dtau: Vec<[Array2<f64>; 2]> = state
        .tau
        .comps
        .iter()
        .map(|t| [t.phys_dealiased(Some(0), fft), t.phys_dealiased(Some(1), fft)])
        .collect();

    let (i_raw, k_raw) = material_coeffs(&rho_p, gamma)?;
    let i_c = truncate_pointwise(grid, &i_raw, fft)?;
    let k_c = truncate_pointwise(grid, &k_raw, fft)?;

    // F = -div(rho u): transform the products, differentiate spectrally.
    let ru = [
        SpectralField::transform(grid, &(&rho_p * &u_p[0]), fft)?,
        SpectralField::transform(grid, &(&rho_p * &u_p[1]), fft)?,
    ];
    let mut f = ru[0].derivative(0).added(&ru[1].derivative(1));
    f.scale(-1.0);
    f.dealias();

    // G_j = -(u.grad u)_j - (1/2) I visc_j - I (div tau)_j + k (grad rho)_j.
    let mut g_comps = Vec::with_capacity(2);
    for j in 0..2 {
        let adv = &(&u_p[0] * &du[j][0]) + &(&u_p[1] * &du[j][1]);
        let gp = -adv - &(&i_c * &visc[j]) * 0.5 - &(&i_c * &div_tau[j]) + &(&k_c * &grad_rho[j]);
        let mut gs = SpectralField::transform(grid, &gp, fft)?;
        gs.dealias();
        g_comps.push(gs);
    }

    // H = -u.grad tau - g_b(tau, grad u), assembled pointwise.
    let n = grid.n();
    let mut h_p = [
        Array2::<f64>::zeros((n, n)),
        Array2::<f64>::zeros((n, n)),
        Array2::<f64>::zeros((n, n)),
    ];
    for idx in 0..n * n {
        let ij = (idx / n, idx % n);
        let t = (tau_p[0][ij], tau_p[1][ij], tau_p[2][ij]);
        let gu = (du[0][0][ij], du[0][1][ij], du[1][0][ij], du[1][1][ij]);
        let gb = g_b_point(t, gu, b);
        let advect = |m: usize| u_p[0][ij] * dtau[m][0][ij] + u_p[1][ij] * dtau[m][1][ij];
        h_p[0][ij] = -advect(0) - gb.0;
        h_p[1][ij] = -advect(1) - gb.1;
        h_p[2][ij] = -advect(2) - gb.2;
    }
    let mut h_comps = Vec::with_capacity(3);
    for hp in &h_p {
        let mut hs = SpectralField::transform(grid, hp, fft)?;
        hs.dealias();
        h_comps.push(hs);
    }

    Ok(OldroydRhs {
        f,
        g: VectorField {
            comps: [g_comps.remove(0), g_comps.remove(0)],
        },
        h: SymTensorField {
            comps: [h_comps.remove(0), h_comps.remove(0), h_comps.remove(0)],
        },
    })
}

/// Linear evolution matrix at one frequency, acting on the component vector
/// `(rho, u1, u2, t11, t12, t22)`:
///
/// ```text
/// rho'  = -i xi_k u^k
/// u^j'  = -(1/2)|xi|^2 u^j - (1/2) xi_j xi_k u^k - i xi_j gamma rho + i xi_k t^{jk}
/// t^{jk}' = -t^{jk} + (i/2)(xi_k u^j + xi_j u^k)
/// ```
pub fn linear_symbol(xi: (f64, f64), gamma: f64) -> SMatrix<Complex64, 6, 6> {
    let (x1, x2) = xi;
    let q = x1 * x1 + x2 * x2;
    let z = Complex64::new(0.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let re = Complex64::new;

    let mut a = SMatrix::<Complex64, 6, 6>::from_element(z);
    // rho row
    a[(0, 1)] = -i * x1;
    a[(0, 2)] = -i * x2;
    // u rows
    a[(1, 0)] = -i * x1 * gamma;
    a[(1, 1)] = re(-0.5 * q - 0.5 * x1 * x1, 0.0);
    a[(1, 2)] = re(-0.5 * x1 * x2, 0.0);
    a[(1, 3)] = i * x1;
    a[(1, 4)] = i * x2;
    a[(2, 0)] = -i * x2 * gamma;
    a[(2, 1)] = re(-0.5 * x1 * x2, 0.0);
    a[(2, 2)] = re(-0.5 * q - 0.5 * x2 * x2, 0.0);
    a[(2, 4)] = i * x1;
    a[(2, 5)] = i * x2;
    // tau rows
    a[(3, 1)] = i * x1;
    a[(3, 3)] = re(-1.0, 0.0);
    a[(4, 1)] = i * (0.5 * x2);
    a[(4, 2)] = i * (0.5 * x1);
    a[(4, 4)] = re(-1.0, 0.0);
    a[(5, 2)] = i * x2;
    a[(5, 5)] = re(-1.0, 0.0);
    a
}
