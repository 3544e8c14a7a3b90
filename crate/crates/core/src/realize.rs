//! Von Neumann parameters `(kappa, U)` of realizing L-systems.
//!
//! A function `V(z) = Q + a V0(z)` with `V0` in the Donoghue class is realized
//! with a parameter set that depends only on `(Q, a)`:
//!
//! | normalization | realization                        |
//! |---------------|------------------------------------|
//! | `a = 1`       | [`params_class_m`]                 |
//! | `a < 1`       | [`params_class_mk`]                |
//! | `a > 1`       | [`params_class_mk_inv`]            |
//! | any           | [`params_universal`] (complex kappa) |
//!
//! `kappa` is even in `Q` and `U(-Q) = conj(U(Q))` in every case.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::herglotz::{class_of_normalization, Family, PerturbedHerglotz};
use crate::moebius::{self, Branch};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassParams {
    pub q: f64,
    pub a: f64,
    /// `Q^2 + a^2 - 1`
    pub b: f64,
}

impl ClassParams {
    pub fn new(q: f64, a: f64) -> Result<Self> {
        check_finite("Q", q)?;
        check_finite("a", a)?;
        if a <= 0.0 {
            return Err(Error::domain("a", a, "(0, inf)"));
        }
        Ok(ClassParams {
            q,
            a,
            b: q * q + a * a - 1.0,
        })
    }

    /// `sqrt(b^2 + 4 Q^2)`
    pub fn root(&self) -> f64 {
        (self.b * self.b + 4.0 * self.q * self.q).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    Hyp1,
    Hyp2,
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealizationParams {
    pub kappa: Complex64,
    #[serde(rename = "U")]
    pub u: Complex64,
    /// Multiplier applied to `g_-` to reach the basis the parameters refer to;
    /// `1` means the original basis.
    pub basis_phase: Complex64,
    pub hypothesis: Hypothesis,
}

impl RealizationParams {
    fn real(kappa: f64, u: Complex64, basis_phase: Complex64, hypothesis: Hypothesis) -> Self {
        RealizationParams {
            kappa: Complex64::new(kappa, 0.0),
            u,
            basis_phase,
            hypothesis,
        }
    }
}

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const MINUS_ONE: Complex64 = Complex64::new(-1.0, 0.0);

fn sgn(q: f64) -> f64 {
    if q < 0.0 {
        -1.0
    } else {
        1.0
    }
}

fn require_nonzero_q(q: f64) -> Result<()> {
    check_finite("Q", q)?;
    if q == 0.0 {
        return Err(Error::domain("Q", q, "nonzero reals"));
    }
    Ok(())
}

/// `U = ((a + iQ)(1 - k^2) - 1 - k^2) / (2k)`
fn u_from_kappa(q: f64, a: f64, kappa: f64) -> Complex64 {
    let k2 = kappa * kappa;
    (Complex64::new(a, q) * (1.0 - k2) - (1.0 + k2)) / (2.0 * kappa)
}

/// Class `a = 1`. At `Q = 0` this is the unperturbed system `kappa = 0`, `U = -1`.
pub fn params_class_m(q: f64) -> Result<RealizationParams> {
    check_finite("Q", q)?;
    if q == 0.0 {
        return Ok(RealizationParams::real(0.0, MINUS_ONE, ONE, Hypothesis::Hyp1));
    }
    let r = (q * q + 4.0).sqrt();
    Ok(RealizationParams::real(
        q.abs() / r,
        sgn(q) * Complex64::new(-q, 2.0) / r,
        Complex64::new(q, -2.0) / r,
        Hypothesis::Mixed,
    ))
}

/// Class `a = 1` expressed in the original deficiency basis; `kappa` is complex.
pub fn params_class_m_original_basis(q: f64) -> Result<RealizationParams> {
    require_nonzero_q(q)?;
    let d = q * q + 4.0;
    Ok(RealizationParams {
        kappa: q.abs() * Complex64::new(q, -2.0) / d,
        u: sgn(q) * Complex64::new(4.0 - q * q, 4.0 * q) / d,
        basis_phase: ONE,
        hypothesis: Hypothesis::Mixed,
    })
}

/// `b - s` and `b + s` with `s = sqrt(b^2 + 4Q^2)`, each without cancellation.
/// Uses `(b - s)(b + s) = -4Q^2`.
fn root_pair(b: f64, s: f64, q2: f64) -> (f64, f64) {
    if b > 0.0 {
        (-4.0 * q2 / (b + s), b + s)
    } else if b < 0.0 {
        (b - s, -4.0 * q2 / (b - s))
    } else {
        (-s, s)
    }
}

/// `kappa(Q, a)` for `0 < a < 1`, evaluated through `b` and `sqrt(b^2 + 4Q^2)`.
pub fn kappa_mk(q: f64, a: f64) -> Result<f64> {
    let p = ClassParams::new(q, a)?;
    if a >= 1.0 {
        return Err(Error::domain("a", a, "(0, 1)"));
    }
    let (b, s, q2) = (p.b, p.root(), q * q);
    let (u, _) = root_pair(b, s, q2);
    // b - 2Q^2 = a^2 - 1 - Q^2 < 0 here, so this difference has no cancellation
    let t = b - 2.0 * q2 - s;
    Ok(
        (t * t - a * u * u + 4.0 * q2 * a * (a - 1.0))
            / (t * t + a * u * u + 4.0 * q2 * a * (a + 1.0)),
    )
}

/// `kappa(Q, a)` for `a > 1`.
pub fn kappa_mk_inv(q: f64, a: f64) -> Result<f64> {
    let p = ClassParams::new(q, a)?;
    if a <= 1.0 {
        return Err(Error::domain("a", a, "(1, inf)"));
    }
    let (b, s, q2) = (p.b, p.root(), q * q);
    let (_, u) = root_pair(b, s, q2);
    let c = b - 2.0 * q2;
    // (c + s)(s - c) = 4 a^2 Q^2
    let t = if c < 0.0 { 4.0 * a * a * q2 / (s - c) } else { c + s };
    Ok(
        (a * u * u - t * t - 4.0 * q2 * a * (a - 1.0))
            / (t * t + a * u * u + 4.0 * q2 * a * (a + 1.0)),
    )
}

/// Class `0 < a < 1`. The parameters refer to the basis rotated by the
/// minus-branch angle, whose rotated normalization is below 1.
pub fn params_class_mk(q: f64, a: f64) -> Result<RealizationParams> {
    let kappa = kappa_mk(q, a)?;
    if q == 0.0 {
        return Ok(RealizationParams::real(
            (1.0 - a) / (1.0 + a),
            MINUS_ONE,
            ONE,
            Hypothesis::Hyp1,
        ));
    }
    let phase = moebius::rotation_angle(q, a, Branch::Minus)?.unimodular_factor();
    Ok(RealizationParams::real(
        kappa,
        u_from_kappa(q, a, kappa),
        phase,
        Hypothesis::Mixed,
    ))
}

/// Class `a > 1`. The parameters refer to the basis rotated by the plus-branch
/// angle, whose rotated normalization is above 1.
pub fn params_class_mk_inv(q: f64, a: f64) -> Result<RealizationParams> {
    let kappa = kappa_mk_inv(q, a)?;
    if q == 0.0 {
        return Ok(RealizationParams::real(
            (a - 1.0) / (a + 1.0),
            ONE,
            ONE,
            Hypothesis::Hyp2,
        ));
    }
    let phase = moebius::rotation_angle(q, a, Branch::Plus)?.unimodular_factor();
    Ok(RealizationParams::real(
        kappa,
        u_from_kappa(q, a, kappa),
        phase,
        Hypothesis::Mixed,
    ))
}

/// Parameters of the universal model, whose state space does not depend on `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniversalParams {
    pub kappa_tilde: f64,
    pub u_tilde: Complex64,
    pub phase: Complex64,
    /// Main-operator parameter in the rotated basis.
    pub kappa_complex: Complex64,
    pub kappa_modulus: f64,
    /// Main-operator parameter in the original basis.
    pub kappa_original_basis: Complex64,
    pub u_original_basis: Complex64,
}

/// `(a - 1 - Qi)(Q - 2ai) / ((a - 1)Q - (Q^2 + 2a^2 + 2a)i)`, the parameter of the
/// dissipative main operator in the original basis. Defined for `Q = 0` as well,
/// where it equals `(a - 1)/(a + 1)`.
pub fn universal_main_parameter(q: f64, a: f64) -> Result<Complex64> {
    ClassParams::new(q, a)?;
    let numerator = Complex64::new(a - 1.0, -q) * Complex64::new(q, -2.0 * a);
    let denominator = Complex64::new((a - 1.0) * q, -(q * q + 2.0 * a * a + 2.0 * a));
    Ok(numerator / denominator)
}

pub fn params_universal(q: f64, a: f64) -> Result<UniversalParams> {
    require_nonzero_q(q)?;
    ClassParams::new(q, a)?;
    let r = (q * q + 4.0 * a * a).sqrt();
    let phase = Complex64::new(q, -2.0 * a) / r;
    let numerator = Complex64::new(a - 1.0, -q);
    let denominator = Complex64::new((a - 1.0) * q, -(q * q + 2.0 * a * a + 2.0 * a));
    let kappa_complex = numerator * r / denominator;
    Ok(UniversalParams {
        kappa_tilde: q.abs() / r,
        u_tilde: sgn(q) * Complex64::new(-q, 2.0 * a) / r,
        phase,
        kappa_complex,
        kappa_modulus: kappa_complex.norm(),
        kappa_original_basis: universal_main_parameter(q, a)?,
        u_original_basis: sgn(q) * Complex64::new(4.0 * a * a - q * q, 4.0 * a * q)
            / (q * q + 4.0 * a * a),
    })
}

/// The class-`a = 1` perturbation `Q0 = 2k / sqrt(1 - k^2)` with the same `kappa`.
pub fn matching_q0(kappa: f64) -> Result<f64> {
    check_finite("kappa", kappa)?;
    if !(kappa > 0.0 && kappa < 1.0) {
        return Err(Error::domain("kappa", kappa, "(0, 1)"));
    }
    Ok(2.0 * kappa / (1.0 - kappa * kappa).sqrt())
}

/// Unimodular factor relating the realizations of `Q + aV0` and `-Q + aV0`.
pub fn sign_flip_factor(q: f64, a: f64) -> Result<Complex64> {
    require_nonzero_q(q)?;
    ClassParams::new(q, a)?;
    let re = 1.0 - a * a - q * q;
    Ok(Complex64::new(re, -2.0 * q) / Complex64::new(re, 2.0 * q))
}

const ROOT_TOL: f64 = 1e-10;
const MAX_BRACKET_END: f64 = 1024.0;

/// Difference between the class-`a > 1` and class-`a = 1` kappa curves.
pub fn kappa_gap(q: f64, a: f64) -> Result<f64> {
    Ok(kappa_mk_inv(q, a)? - q / (q * q + 4.0).sqrt())
}

/// A perturbation `Q > 0` at which the class-`a > 1` curve meets the class-`a = 1`
/// curve. Whether such a point exists for every `a > 1` is not known, so the
/// search is bounded: the bracket starts at `[1, 3]` and its right end doubles
/// up to 1024. Returns `None` when no sign change is found.
pub fn special_q_root(a: f64) -> Result<Option<f64>> {
    check_finite("a", a)?;
    if a <= 1.0 {
        return Err(Error::domain("a", a, "(1, inf)"));
    }
    let f = |q: f64| kappa_gap(q, a);
    let mut lo = 1.0;
    let mut hi = 3.0;
    let mut f_lo = f(lo)?;
    if f_lo == 0.0 {
        return Ok(Some(lo));
    }
    while f(hi)?.signum() == f_lo.signum() {
        hi *= 2.0;
        if hi > MAX_BRACKET_END {
            return Ok(None);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(Some(mid));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    Ok((f(root)?.abs() < ROOT_TOL).then_some(root))
}

/// Dispatches on the normalization `a`. `Q = 0` yields the unperturbed limits.
pub fn realize_params(q: f64, a: f64) -> Result<RealizationParams> {
    ClassParams::new(q, a)?;
    match class_of_normalization(a).0 {
        Family::M => params_class_m(q),
        Family::MKappa => params_class_mk(q, a),
        Family::MKappaInv => params_class_mk_inv(q, a),
    }
}

pub fn classify_and_realize(f: &PerturbedHerglotz) -> RealizationParams {
    realize_params(f.q(), f.normalization())
        .expect("a validated function has finite Q and positive normalization")
}

/// Real `kappa` of the class dispatch.
pub fn dispatch_kappa(q: f64, a: f64) -> Result<f64> {
    Ok(realize_params(q, a)?.kappa.re)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    #[serde(rename = "Q")]
    pub q: f64,
    pub kappa: f64,
    #[serde(rename = "U")]
    pub u: Complex64,
}

/// `kappa(Q)` and `U(Q)` on `steps` equally spaced points of `[q_lo, q_hi]`.
/// A range symmetric about 0 yields a grid that is exactly symmetric.
pub fn kappa_curve(a: f64, q_lo: f64, q_hi: f64, steps: usize) -> Result<Vec<CurvePoint>> {
    check_finite("Q range start", q_lo)?;
    check_finite("Q range end", q_hi)?;
    if q_lo >= q_hi {
        return Err(Error::domain("Q range end", q_hi, "values above the range start"));
    }
    if steps < 2 {
        return Err(Error::domain("steps", steps as f64, "[2, inf)"));
    }
    let n = (steps - 1) as f64;
    let symmetric = q_lo == -q_hi;
    (0..steps)
        .map(|i| {
            let q = if symmetric {
                q_hi * (2.0 * i as f64 - n) / n
            } else {
                q_lo + (q_hi - q_lo) * i as f64 / n
            };
            let p = realize_params(q, a)?;
            Ok(CurvePoint {
                q,
                kappa: p.kappa.re,
                u: p.u,
            })
        })
        .collect()
}
