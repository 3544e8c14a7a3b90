//! Coefficient algebra of (*)-extensions with one-dimensional imaginary part.
//!
//! Operators are never built. Everything is expressed through 2x2 coefficient
//! matrices and the coefficient pair of the channel vector in the abstract
//! `(phi, psi)` basis. `kappa` must be real; a complex `kappa` is first rotated
//! to a real one and the `psi` coefficient is then moved with [`to_delta_basis`].

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];

const I: Complex64 = Complex64::new(0.0, 1.0);
const UNIMODULAR_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StarExtensionData {
    #[serde(rename = "H")]
    pub h: Complex64,
    #[serde(rename = "S_A")]
    pub s_a: Mat2,
    #[serde(rename = "S_Astar")]
    pub s_astar: Mat2,
    pub c_phi: Complex64,
    pub c_psi: Complex64,
}

/// Which half-plane the impedance value was sampled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfPlane {
    Plus,
    Minus,
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

pub fn mat_sub(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [x[0][0] - y[0][0], x[0][1] - y[0][1]],
        [x[1][0] - y[1][0], x[1][1] - y[1][1]],
    ]
}

pub fn mat_add(x: &Mat2, y: &Mat2) -> Mat2 {
    [
        [x[0][0] + y[0][0], x[0][1] + y[0][1]],
        [x[1][0] + y[1][0], x[1][1] + y[1][1]],
    ]
}

pub fn mat_scale(x: &Mat2, s: Complex64) -> Mat2 {
    [[x[0][0] * s, x[0][1] * s], [x[1][0] * s, x[1][1] * s]]
}

pub fn det(x: &Mat2) -> Complex64 {
    x[0][0] * x[1][1] - x[0][1] * x[1][0]
}

/// Largest entry-wise modulus of `x - y`.
pub fn max_abs_diff(x: &Mat2, y: &Mat2) -> f64 {
    mat_sub(x, y)
        .iter()
        .flatten()
        .map(|e| e.norm())
        .fold(0.0, f64::max)
}

fn check_kappa(kappa: f64) -> Result<f64> {
    check_finite("kappa", kappa)?;
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::domain("kappa", kappa, "[0, 1)"));
    }
    Ok(kappa)
}

fn check_unimodular(what: &'static str, u: Complex64) -> Result<Complex64> {
    check_finite(what, u.re)?;
    check_finite(what, u.im)?;
    let m = u.norm();
    if (m - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::domain(what, m, "unimodular values (|U| = 1)"));
    }
    Ok(u)
}

/// `H = i/(1 - k^2) ((k + conj U)/(1 + k conj U) + k)`
pub fn parameter_h(kappa: f64, u: Complex64) -> Result<Complex64> {
    check_kappa(kappa)?;
    check_unimodular("U", u)?;
    let ub = u.conj();
    let den = 1.0 + kappa * ub;
    if den.norm() < 1e-14 {
        return Err(Error::Pole {
            what: "parameter H",
            magnitude: den.norm(),
        });
    }
    Ok(I / (1.0 - kappa * kappa) * ((kappa + ub) / den + kappa))
}

fn matrices(kappa: f64, h: Complex64) -> (Mat2, Mat2) {
    let k2 = kappa * kappa;
    let hb = h.conj();
    let s_a = [[h * kappa, h], [k2 * h + I * kappa, I + kappa * h]];
    let s_astar = [[kappa * hb - I, k2 * hb - I * kappa], [hb, hb * kappa]];
    (s_a, s_astar)
}

/// Scalar `sqrt(2) |1 + kU| sqrt(1 - k^2)` shared by both channel coefficients.
fn channel_scale(kappa: f64, u: Complex64) -> f64 {
    2f64.sqrt() * (1.0 + kappa * u).norm() * (1.0 - kappa * kappa).sqrt()
}

pub fn channel_coefficients(kappa: f64, u: Complex64) -> Result<(Complex64, Complex64)> {
    check_kappa(kappa)?;
    check_unimodular("U", u)?;
    let k2 = kappa * kappa;
    let s = channel_scale(kappa, u);
    Ok((
        (k2 + 1.0 + 2.0 * kappa * u) / s,
        (k2 * u + 2.0 * kappa + u) / s,
    ))
}

pub fn bi_extension_matrices(kappa: f64, u: Complex64) -> Result<StarExtensionData> {
    let h = parameter_h(kappa, u)?;
    let (s_a, s_astar) = matrices(kappa, h);
    let (c_phi, c_psi) = channel_coefficients(kappa, u)?;
    Ok(StarExtensionData {
        h,
        s_a,
        s_astar,
        c_phi,
        c_psi,
    })
}

impl StarExtensionData {
    /// `(S_A - S_A*) / (2i)`
    pub fn imaginary_part(&self) -> Mat2 {
        mat_scale(&mat_sub(&self.s_a, &self.s_astar), 1.0 / (2.0 * I))
    }

    /// `(S_A + S_A*) / 2`
    pub fn real_part(&self) -> Mat2 {
        mat_scale(&mat_add(&self.s_a, &self.s_astar), Complex64::new(0.5, 0.0))
    }

    /// Coefficient matrix of `(., chi) chi`: entry `(j, k)` is `c_j conj(c_k)`.
    pub fn channel_outer(&self) -> Mat2 {
        let c = [self.c_phi, self.c_psi];
        [
            [c[0] * c[0].conj(), c[0] * c[1].conj()],
            [c[1] * c[0].conj(), c[1] * c[1].conj()],
        ]
    }
}

/// `Delta = 1/(k^2 - 1) [[k^2 + 1, 2k], [-2k, -k^2 - 1]]`, an involution.
pub fn involution_delta(kappa: f64) -> Result<Mat2> {
    check_finite("kappa", kappa)?;
    if !(0.0..1.0).contains(&kappa) {
        return Err(Error::domain("kappa", kappa, "[0, 1)"));
    }
    let k2 = kappa * kappa;
    let s = 1.0 / (k2 - 1.0);
    let c = |x: f64| Complex64::new(x * s, 0.0);
    Ok([[c(k2 + 1.0), c(2.0 * kappa)], [c(-2.0 * kappa), c(-k2 - 1.0)]])
}

/// Moves the `psi` coefficient into the fixed basis by the unimodular basis phase.
pub fn to_delta_basis(
    c_phi: Complex64,
    c_psi: Complex64,
    phase: Complex64,
) -> Result<(Complex64, Complex64)> {
    check_unimodular("phase", phase)?;
    Ok((c_phi, c_psi * phase))
}

/// Coefficient matrix of the system for the von Neumann
/// coordinates `(a, b)` of `(Re A - z)^{-1} chi`; the right-hand side is `(V(z), 1)`.
pub fn impedance_system(kappa: f64, u: Complex64) -> Result<Mat2> {
    let (c_phi, c_psi) = channel_coefficients(kappa, u)?;
    let m = (1.0 - kappa * kappa).sqrt() / (2f64.sqrt() * (1.0 + kappa * u).norm());
    Ok([[c_phi.conj(), c_psi.conj()], [-I * m, I * m * u.conj()]])
}

/// Solves for `(a(z), b(z))` given the impedance value `V(z)`.
///
/// The system itself is valid in both half-planes. `z_tag` is used only to reject
/// values with the wrong sign of `Im V`, which cannot come from an impedance function.
pub fn solve_impedance_system(
    kappa: f64,
    u: Complex64,
    v_value: Complex64,
    z_tag: HalfPlane,
) -> Result<(Complex64, Complex64)> {
    check_finite("V", v_value.re)?;
    check_finite("V", v_value.im)?;
    match z_tag {
        HalfPlane::Plus if v_value.im < 0.0 => {
            return Err(Error::domain("Im V", v_value.im, "[0, inf) for z in the upper half-plane"))
        }
        HalfPlane::Minus if v_value.im > 0.0 => {
            return Err(Error::domain("Im V", v_value.im, "(-inf, 0] for z in the lower half-plane"))
        }
        _ => {}
    }
    let m = impedance_system(kappa, u)?;
    let d = det(&m);
    if d.norm() < 1e-14 {
        return Err(Error::Singular {
            what: "impedance system",
        });
    }
    let one = Complex64::new(1.0, 0.0);
    let a = (v_value * m[1][1] - m[0][1] * one) / d;
    let b = (m[0][0] * one - m[1][0] * v_value) / d;
    Ok((a, b))
}
