//! Independent reference implementations used as test oracles: direct
//! O(n^4) transforms and truncated convolutions, a Taylor-series matrix
//! exponential, and right-hand sides assembled term by term from direct
//! convolutions. None of this shares code with the production spectral
//! path beyond the grid index conventions.

#![allow(dead_code)]

use nalgebra::DMatrix;
use ndarray::Array2;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use odhl::field::SpectralField;
use odhl::Grid;

pub type C = Complex64;

pub fn idx(n: usize, k: i64) -> usize {
    k.rem_euclid(n as i64) as usize
}

/// Direct unfactored DFT with the production normalization `L/n^2`.
pub fn naive_dft(grid: Grid, phys: &Array2<f64>) -> Array2<C> {
    let n = grid.n();
    let scale = grid.box_length() / (n * n) as f64;
    let mut out = Array2::<C>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let mut acc = C::new(0.0, 0.0);
            for a in 0..n {
                for b in 0..n {
                    let phase =
                        -2.0 * std::f64::consts::PI * ((i * a + j * b) as f64) / n as f64;
                    acc += phys[[a, b]] * C::from_polar(1.0, phase);
                }
            }
            out[[i, j]] = acc * scale;
        }
    }
    out
}

/// Direct inverse DFT back to physical samples.
pub fn naive_idft(grid: Grid, coeffs: &Array2<C>) -> Array2<f64> {
    let n = grid.n();
    let scale = 1.0 / grid.box_length();
    let mut out = Array2::<f64>::zeros((n, n));
    for a in 0..n {
        for b in 0..n {
            let mut acc = C::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    let phase =
                        2.0 * std::f64::consts::PI * ((i * a + j * b) as f64) / n as f64;
                    acc += coeffs[[i, j]] * C::from_polar(1.0, phase);
                }
            }
            out[[a, b]] = acc.re * scale;
        }
    }
    out
}

/// 2/3-truncation of a coefficient array.
pub fn truncate(grid: Grid, coeffs: &Array2<C>) -> Array2<C> {
    let n = grid.n();
    let cut = ((n - 1) / 3) as i64;
    Array2::from_shape_fn((n, n), |(i, j)| {
        if grid.mode(i).abs() <= cut && grid.mode(j).abs() <= cut {
            coeffs[[i, j]]
        } else {
            C::new(0.0, 0.0)
        }
    })
}

/// Exact truncated convolution `(1/L) sum f(k') g(k - k')` by direct
/// summation over the retained square of modes.
pub fn conv_trunc(grid: Grid, f: &Array2<C>, g: &Array2<C>) -> Array2<C> {
    let n = grid.n();
    let cut = ((n - 1) / 3) as i64;
    let inv_l = 1.0 / grid.box_length();
    let f = truncate(grid, f);
    let g = truncate(grid, g);
    let mut out = Array2::<C>::zeros((n, n));
    for k1 in -cut..=cut {
        for k2 in -cut..=cut {
            let mut acc = C::new(0.0, 0.0);
            for p1 in -cut..=cut {
                for p2 in -cut..=cut {
                    let (q1, q2) = (k1 - p1, k2 - p2);
                    if q1.abs() > cut || q2.abs() > cut {
                        continue;
                    }
                    acc += f[[idx(n, p1), idx(n, p2)]] * g[[idx(n, q1), idx(n, q2)]];
                }
            }
            out[[idx(n, k1), idx(n, k2)]] = acc * inv_l;
        }
    }
    out
}

/// `i xi_axis` multiplier, axis 0 or 1.
pub fn spectral_derivative(grid: Grid, coeffs: &Array2<C>, axis: usize) -> Array2<C> {
    let n = grid.n();
    Array2::from_shape_fn((n, n), |(i, j)| {
        let xi = if axis == 0 {
            grid.xi_axis(i)
        } else {
            grid.xi_axis(j)
        };
        coeffs[[i, j]] * C::new(0.0, xi)
    })
}

pub fn scale(coeffs: &Array2<C>, a: f64) -> Array2<C> {
    coeffs.mapv(|c| c * a)
}

pub fn add(a: &Array2<C>, b: &Array2<C>) -> Array2<C> {
    a + b
}

pub fn sub(a: &Array2<C>, b: &Array2<C>) -> Array2<C> {
    a - b
}

/// Relative L2 deviation between a production spectral field and an oracle
/// coefficient array.
pub fn rel_err(field: &SpectralField, oracle: &Array2<C>) -> f64 {
    let num: f64 = field
        .coeffs()
        .iter()
        .zip(oracle.iter())
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    let den: f64 = oracle.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// Pointwise map of a truncated spectrum through a scalar function and back,
/// via the direct transforms: the oracle analogue of sampling a coefficient
/// field like `I(rho)` on the grid.
pub fn pointwise_from(grid: Grid, coeffs: &Array2<C>, f: impl Fn(f64) -> f64) -> Array2<C> {
    let phys = naive_idft(grid, &truncate(grid, coeffs));
    let mapped = phys.mapv(f);
    truncate(grid, &naive_dft(grid, &mapped))
}

// ---------------------------------------------------------------------------
// Direct-convolution right-hand sides.
// ---------------------------------------------------------------------------

pub struct OldroydOracleRhs {
    pub f: Array2<C>,
    pub g: [Array2<C>; 2],
    pub h: [Array2<C>; 3],
}

/// `(F, G, H)` for the viscoelastic system assembled from direct truncated
/// convolutions of the truncated inputs.
pub fn oracle_oldroyd_rhs(
    grid: Grid,
    rho: &Array2<C>,
    u: [&Array2<C>; 2],
    tau: [&Array2<C>; 3],
    gamma: f64,
    b: f64,
) -> OldroydOracleRhs {
    let rho_t = truncate(grid, rho);
    let u_t = [truncate(grid, u[0]), truncate(grid, u[1])];
    let tau_t = [
        truncate(grid, tau[0]),
        truncate(grid, tau[1]),
        truncate(grid, tau[2]),
    ];

    let d = |c: &Array2<C>, ax: usize| spectral_derivative(grid, c, ax);

    // F = -div(rho u).
    let f = scale(
        &add(
            &d(&conv_trunc(grid, &rho_t, &u_t[0]), 0),
            &d(&conv_trunc(grid, &rho_t, &u_t[1]), 1),
        ),
        -1.0,
    );

    // Material coefficient spectra.
    let i_c = pointwise_from(grid, rho, |r| r / (1.0 + r));
    let k_c = pointwise_from(grid, rho, |r| {
        let dd = 1.0 + r;
        gamma * r / dd + (gamma - gamma * dd.powf(gamma - 1.0)) / dd
    });

    // (Lap + grad div) u and div tau.
    let div_u = add(&d(&u_t[0], 0), &d(&u_t[1], 1));
    let visc = [
        add(&add(&d(&d(&u_t[0], 0), 0), &d(&d(&u_t[0], 1), 1)), &d(&div_u, 0)),
        add(&add(&d(&d(&u_t[1], 0), 0), &d(&d(&u_t[1], 1), 1)), &d(&div_u, 1)),
    ];
    let div_tau = [
        add(&d(&tau_t[0], 0), &d(&tau_t[1], 1)),
        add(&d(&tau_t[1], 0), &d(&tau_t[2], 1)),
    ];
    let grad_rho = [d(&rho_t, 0), d(&rho_t, 1)];

    let mut g = Vec::new();
    for j in 0..2 {
        let adv = add(
            &conv_trunc(grid, &u_t[0], &d(&u_t[j], 0)),
            &conv_trunc(grid, &u_t[1], &d(&u_t[j], 1)),
        );
        let term = sub(
            &sub(
                &sub(
                    &conv_trunc(grid, &k_c, &grad_rho[j]),
                    &scale(&conv_trunc(grid, &i_c, &visc[j]), 0.5),
                ),
                &conv_trunc(grid, &i_c, &div_tau[j]),
            ),
            &adv,
        );
        g.push(term);
    }

    // Jacobian entries d u_j / d x_k.
    let du = [
        [d(&u_t[0], 0), d(&u_t[0], 1)],
        [d(&u_t[1], 0), d(&u_t[1], 1)],
    ];
    // W12 = (du1/dx2 - du2/dx1)/2; D entries from the symmetric part.
    let w12 = scale(&sub(&du[0][1], &du[1][0]), 0.5);
    let d11 = du[0][0].clone();
    let d12 = scale(&add(&du[0][1], &du[1][0]), 0.5);
    let d22 = du[1][1].clone();

    let cv = |a: &Array2<C>, bb: &Array2<C>| conv_trunc(grid, a, bb);
    let (t11, t12, t22) = (&tau_t[0], &tau_t[1], &tau_t[2]);

    // g_b components mirrored from the pointwise formula:
    // r11 = -2 t12 w + 2 b (t11 d11 + t12 d12)
    let gb11 = add(
        &scale(&cv(t12, &w12), -2.0),
        &scale(&add(&cv(t11, &d11), &cv(t12, &d12)), 2.0 * b),
    );
    // r12 = (t11 - t22) w + b (d12 (t11 + t22) + t12 (d11 + d22))
    let gb12 = add(
        &cv(&sub(t11, t22), &w12),
        &scale(
            &add(&cv(&d12, &add(t11, t22)), &cv(t12, &add(&d11, &d22))),
            b,
        ),
    );
    // r22 = 2 t12 w + 2 b (t12 d12 + t22 d22)
    let gb22 = add(
        &scale(&cv(t12, &w12), 2.0),
        &scale(&add(&cv(t12, &d12), &cv(t22, &d22)), 2.0 * b),
    );

    let mut h = Vec::new();
    for (m, gb) in [gb11, gb12, gb22].into_iter().enumerate() {
        let t = &tau_t[m];
        let adv = add(
            &conv_trunc(grid, &u_t[0], &d(t, 0)),
            &conv_trunc(grid, &u_t[1], &d(t, 1)),
        );
        h.push(scale(&add(&adv, &gb), -1.0));
    }

    OldroydOracleRhs {
        f,
        g: [g.remove(0), g.remove(0)],
        h: [h.remove(0), h.remove(0), h.remove(0)],
    }
}

pub struct HallMhdOracleRhs {
    pub f1: Array2<C>,
    pub g1: [Array2<C>; 2],
    pub h1: [Array2<C>; 2],
}

/// `(F1, G1, H1)` for Hall-MHD from direct truncated convolutions,
/// including the Leray projection of `H1`.
pub fn oracle_hallmhd_rhs(
    grid: Grid,
    rho: &Array2<C>,
    u: [&Array2<C>; 2],
    bfield: [&Array2<C>; 2],
    gamma: f64,
    hall: bool,
) -> HallMhdOracleRhs {
    let rho_t = truncate(grid, rho);
    let u_t = [truncate(grid, u[0]), truncate(grid, u[1])];
    let b_t = [truncate(grid, bfield[0]), truncate(grid, bfield[1])];

    let d = |c: &Array2<C>, ax: usize| spectral_derivative(grid, c, ax);

    let f1 = scale(
        &add(
            &d(&conv_trunc(grid, &rho_t, &u_t[0]), 0),
            &d(&conv_trunc(grid, &rho_t, &u_t[1]), 1),
        ),
        -1.0,
    );

    let i_c = pointwise_from(grid, rho, |r| r / (1.0 + r));
    let k_c = pointwise_from(grid, rho, |r| {
        let dd = 1.0 + r;
        gamma * r / dd + (gamma - gamma * dd.powf(gamma - 1.0)) / dd
    });
    let inv_c = pointwise_from(grid, rho, |r| 1.0 / (1.0 + r));

    let div_u = add(&d(&u_t[0], 0), &d(&u_t[1], 1));
    let visc = [
        add(&add(&d(&d(&u_t[0], 0), 0), &d(&d(&u_t[0], 1), 1)), &d(&div_u, 0)),
        add(&add(&d(&d(&u_t[1], 0), 0), &d(&d(&u_t[1], 1), 1)), &d(&div_u, 1)),
    ];
    let grad_rho = [d(&rho_t, 0), d(&rho_t, 1)];

    // Lorentz force w (-B2, B1) with w = curl B, then scaled by 1/(1+rho).
    let w = sub(&d(&b_t[1], 0), &d(&b_t[0], 1));
    let lor = [
        scale(&conv_trunc(grid, &w, &b_t[1]), -1.0),
        conv_trunc(grid, &w, &b_t[0]),
    ];
    let lor_scaled = [
        conv_trunc(grid, &inv_c, &lor[0]),
        conv_trunc(grid, &inv_c, &lor[1]),
    ];

    let mut g1 = Vec::new();
    for j in 0..2 {
        let adv = add(
            &conv_trunc(grid, &u_t[0], &d(&u_t[j], 0)),
            &conv_trunc(grid, &u_t[1], &d(&u_t[j], 1)),
        );
        let term = sub(
            &sub(
                &sub(
                    &conv_trunc(grid, &k_c, &grad_rho[j]),
                    &conv_trunc(grid, &i_c, &visc[j]),
                ),
                &lor_scaled[j],
            ),
            &adv,
        );
        g1.push(term);
    }

    // Induction transport u(div B) - (u.grad)B + (B.grad)u - B(div u).
    let div_b = add(&d(&b_t[0], 0), &d(&b_t[1], 1));
    let mut h1 = Vec::new();
    for j in 0..2 {
        let term = add(
            &sub(
                &sub(
                    &conv_trunc(grid, &u_t[j], &div_b),
                    &add(
                        &conv_trunc(grid, &u_t[0], &d(&b_t[j], 0)),
                        &conv_trunc(grid, &u_t[1], &d(&b_t[j], 1)),
                    ),
                ),
                &conv_trunc(grid, &b_t[j], &div_u),
            ),
            &add(
                &conv_trunc(grid, &b_t[0], &d(&u_t[j], 0)),
                &conv_trunc(grid, &b_t[1], &d(&u_t[j], 1)),
            ),
        );
        h1.push(term);
    }
    if hall {
        // curl of the scaled Lorentz force, then the planar curl back.
        let hsc = sub(&d(&lor_scaled[1], 0), &d(&lor_scaled[0], 1));
        h1[0] = sub(&h1[0], &d(&hsc, 1));
        h1[1] = add(&h1[1], &d(&hsc, 0));
    }

    // Leray projection of H1.
    let n = grid.n();
    let (mut p0, mut p1) = (h1[0].clone(), h1[1].clone());
    for i in 0..n {
        for j in 0..n {
            if i == 0 && j == 0 {
                continue;
            }
            let (x1, x2) = grid.xi(i, j);
            let q = x1 * x1 + x2 * x2;
            let dot = (h1[0][[i, j]] * x1 + h1[1][[i, j]] * x2) / q;
            p0[[i, j]] = h1[0][[i, j]] - dot * x1;
            p1[[i, j]] = h1[1][[i, j]] - dot * x2;
        }
    }

    HallMhdOracleRhs {
        f1,
        g1: [g1.remove(0), g1.remove(0)],
        h1: [p0, p1],
    }
}

// ---------------------------------------------------------------------------
// Series matrix exponential.
// ---------------------------------------------------------------------------

/// Taylor-series matrix exponential with scaling and squaring: scale so the
/// norm is at most 1/2, sum 60 terms, square back up.
pub fn expm_series(a: &DMatrix<C>) -> DMatrix<C> {
    let n = a.nrows();
    let norm: f64 = a.iter().map(|c| c.norm()).sum();
    let s = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let b = a.map(|c| c * 2f64.powi(-s));
    let mut term = DMatrix::<C>::identity(n, n);
    let mut sum = DMatrix::<C>::identity(n, n);
    for k in 1..=60u64 {
        term = (&term * &b).map(|c| c / k as f64);
        sum += &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// Seeded random coefficient array with conjugate symmetry and zero mean,
/// built directly in spectral space.
pub fn random_hermitian_coeffs(grid: Grid, seed: u64, amp: f64) -> Array2<C> {
    let n = grid.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Array2::<C>::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            let (k1, k2) = (grid.mode(i), grid.mode(j));
            if (k1 == 0 && k2 == 0) || k1 == -(n as i64) / 2 || k2 == -(n as i64) / 2 {
                continue;
            }
            if !(k1 > 0 || (k1 == 0 && k2 > 0)) {
                continue;
            }
            let c = C::from_polar(amp * rng.random::<f64>(), rng.random::<f64>() * std::f64::consts::TAU);
            out[[i, j]] = c;
            out[[idx(n, -k1), idx(n, -k2)]] = c.conj();
        }
    }
    out
}
