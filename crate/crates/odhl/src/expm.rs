//! Dense matrix exponential and the first two exponential quadrature
//! functions for small complex matrices.
//!
//! `expm` is the degree-13 Pade approximant with scaling and squaring
//! (Higham 2005). `phi_matrices` reads `phi1` and `phi2` off the exponential
//! of the block-augmented matrix
//!
//! ```text
//!     [ A  I  0 ]            [ e^A  phi1(A)  phi2(A) ]
//! exp [ 0  0  I ]  =  [ ... with top row ... ]
//!     [ 0  0  0 ]
//! ```
//!
//! where `phi1(z) = (e^z - 1)/z` and `phi2(z) = (e^z - 1 - z)/z^2`.

use nalgebra::DMatrix;
use num_complex::Complex64;

type CMat = DMatrix<Complex64>;

const PADE13_THETA: f64 = 5.371920351148152;

const PADE13_B: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

fn l1_norm(a: &CMat) -> f64 {
    let mut worst = 0.0f64;
    for c in 0..a.ncols() {
        let s: f64 = a.column(c).iter().map(|v| v.norm()).sum();
        worst = worst.max(s);
    }
    worst
}

/// Matrix exponential of a square complex matrix.
pub fn expm(a: &CMat) -> CMat {
    let n = a.nrows();
    assert_eq!(n, a.ncols());
    let norm = l1_norm(a);
    let squarings = if norm > PADE13_THETA {
        (norm / PADE13_THETA).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.map(|v| v * 2f64.powi(-(squarings as i32)));

    let b: Vec<Complex64> = PADE13_B.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let ident = CMat::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9])
        + &a6 * b[7]
        + &a4 * b[5]
        + &a2 * b[3]
        + &ident * b[1];
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8])
        + &a6 * b[6]
        + &a4 * b[4]
        + &a2 * b[2]
        + &ident * b[0];

    let numer = &v + &u;
    let denom = &v - &u;
    let mut result = denom
        .lu()
        .solve(&numer)
        .expect("Pade denominator is singular");
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// `(e^A, phi1(A), phi2(A))` via one exponential of the augmented matrix.
pub fn phi_matrices(a: &CMat) -> (CMat, CMat, CMat) {
    let n = a.nrows();
    let mut aug = CMat::zeros(3 * n, 3 * n);
    aug.view_mut((0, 0), (n, n)).copy_from(a);
    for i in 0..n {
        aug[(i, n + i)] = Complex64::new(1.0, 0.0);
        aug[(n + i, 2 * n + i)] = Complex64::new(1.0, 0.0);
    }
    let e = expm(&aug);
    (
        e.view((0, 0), (n, n)).into_owned(),
        e.view((0, n), (n, n)).into_owned(),
        e.view((0, 2 * n), (n, n)).into_owned(),
    )
}
