//! Scalar fractional-linear maps.
//!
//! Impedance values `V` and transfer values `W` are related by the Cayley-type
//! pair `W = (1 - iV)/(1 + iV)`, `V = i(W - 1)/(W + 1)`. An angle `alpha` acts on
//! impedance values by
//!
//! ```text
//! V_alpha = (cos a + sin a * V) / (sin a - cos a * V)
//! ```
//!
//! which multiplies the transfer value by `-exp(2 i alpha)`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};

/// Smallest admissible magnitude of a fractional-linear denominator.
pub const POLE_GUARD: f64 = 1e-12;

fn guarded_div(num: Complex64, den: Complex64, what: &'static str) -> Result<Complex64> {
    let magnitude = den.norm();
    if magnitude <= POLE_GUARD || !magnitude.is_finite() {
        return Err(Error::Pole { what, magnitude });
    }
    Ok(num / den)
}

/// An angle in `[0, pi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct RotationAngle {
    alpha: f64,
}

impl TryFrom<f64> for RotationAngle {
    type Error = Error;

    fn try_from(alpha: f64) -> Result<Self> {
        RotationAngle::new(alpha)
    }
}

impl From<RotationAngle> for f64 {
    fn from(r: RotationAngle) -> f64 {
        r.alpha
    }
}

impl RotationAngle {
    /// Reduces `alpha` modulo `pi`. An input of exactly `pi` maps to `0`.
    pub fn new(alpha: f64) -> Result<Self> {
        check_finite("rotation angle", alpha)?;
        let mut reduced = alpha.rem_euclid(PI);
        if reduced >= PI {
            reduced = 0.0;
        }
        Ok(RotationAngle { alpha: reduced })
    }

    /// The angle in `[0, pi)` whose tangent is `t`.
    pub fn from_tan(t: f64) -> Result<Self> {
        check_finite("tangent", t)?;
        let alpha = t.atan();
        RotationAngle::new(if alpha < 0.0 { alpha + PI } else { alpha })
    }

    pub fn alpha(self) -> f64 {
        self.alpha
    }

    /// `-exp(2 i alpha)`.
    pub fn unimodular_factor(self) -> Complex64 {
        -Complex64::from_polar(1.0, 2.0 * self.alpha)
    }

    /// The angle acting as "rotate by `self`, then by `other`".
    pub fn then(self, other: RotationAngle) -> RotationAngle {
        RotationAngle::new(self.alpha + other.alpha - FRAC_PI_2)
            .expect("sum of finite angles is finite")
    }

    pub fn is_identity(self) -> bool {
        self.alpha == FRAC_PI_2
    }
}

pub fn impedance_to_transfer(v: Complex64) -> Result<Complex64> {
    let iv = Complex64::i() * v;
    guarded_div(1.0 - iv, 1.0 + iv, "impedance_to_transfer")
}

pub fn transfer_to_impedance(w: Complex64) -> Result<Complex64> {
    guarded_div(Complex64::i() * (w - 1.0), w + 1.0, "transfer_to_impedance")
}

pub fn rotate(v: Complex64, r: RotationAngle) -> Result<Complex64> {
    let (s, c) = r.alpha.sin_cos();
    guarded_div(c + s * v, s - c * v, "rotate")
}

/// Sign choice in `tan a = (b +/- sqrt(b^2 + 4Q^2)) / (2Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub fn sign(self) -> f64 {
        match self {
            Branch::Plus => 1.0,
            Branch::Minus => -1.0,
        }
    }

    pub fn other(self) -> Branch {
        match self {
            Branch::Plus => Branch::Minus,
            Branch::Minus => Branch::Plus,
        }
    }
}

/// `b = Q^2 + a^2 - 1` and `sqrt(b^2 + 4 Q^2)`.
fn b_and_root(q: f64, a: f64) -> (f64, f64) {
    let b = q * q + a * a - 1.0;
    (b, (b * b + 4.0 * q * q).sqrt())
}

fn check_rotation_inputs(q: f64, a: f64) -> Result<()> {
    check_finite("Q", q)?;
    check_finite("a", a)?;
    if q == 0.0 {
        return Err(Error::domain("Q", q, "nonzero reals"));
    }
    if a <= 0.0 {
        return Err(Error::domain("a", a, "(0, inf)"));
    }
    Ok(())
}

/// Tangent of the angle that removes the real constant from `Q + ia`.
pub fn rotation_tangent(q: f64, a: f64, branch: Branch) -> Result<f64> {
    check_rotation_inputs(q, a)?;
    let (b, root) = b_and_root(q, a);
    Ok((b + branch.sign() * root) / (2.0 * q))
}

pub fn rotation_angle(q: f64, a: f64, branch: Branch) -> Result<RotationAngle> {
    RotationAngle::from_tan(rotation_tangent(q, a, branch)?)
}

/// Both angles with `Q_alpha = 0`, as `(plus branch, minus branch)`.
///
/// For `Q > 0` the plus branch lies in `[0, pi/2)` and the minus branch in
/// `(pi/2, pi)`; for `Q < 0` the roles swap. The two angles differ by `pi/2`.
pub fn solve_rotation_angles(q: f64, a: f64) -> Result<(RotationAngle, RotationAngle)> {
    Ok((
        rotation_angle(q, a, Branch::Plus)?,
        rotation_angle(q, a, Branch::Minus)?,
    ))
}

/// `(Q_alpha, a_alpha)` such that `rotate(Q + ia, r) = Q_alpha + i a_alpha`.
pub fn rotated_parameters(q: f64, a: f64, r: RotationAngle) -> Result<(f64, f64)> {
    check_finite("Q", q)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain("a", a, "(0, inf)"));
    }
    let (s, c) = r.alpha.sin_cos();
    let den = (s - q * c).powi(2) + a * a * c * c;
    if den <= POLE_GUARD {
        return Err(Error::Pole {
            what: "rotated_parameters",
            magnitude: den,
        });
    }
    let two = 2.0 * r.alpha;
    let q_alpha = (0.5 * (1.0 - q * q - a * a) * two.sin() - q * two.cos()) / den;
    Ok((q_alpha, a / den))
}

/// Normalization of the rotated function for the given branch:
///
/// ```text
/// [a (b +/- s)^2 + 4 a Q^2] / [(b +/- s - 2 Q^2)^2 + 4 a^2 Q^2],   s = sqrt(b^2 + 4 Q^2)
/// ```
///
/// The minus branch is below 1 for `a < 1`, the plus branch above 1 for `a > 1`,
/// and the two branches multiply to 1.
pub fn branch_normalization(a: f64, q: f64, branch: Branch) -> Result<f64> {
    check_rotation_inputs(q, a)?;
    let (b, root) = b_and_root(q, a);
    let t = b + branch.sign() * root;
    let q2 = q * q;
    Ok((a * t * t + 4.0 * a * q2) / ((t - 2.0 * q2).powi(2) + 4.0 * a * a * q2))
}

/// The auxiliary function of `z = Q^2 > 0` whose lower bound controls the
/// branch inequalities:
///
/// * `a < 1`: `((1 - a) d^2 - 4 z d + 4 z^2) / z`, `d = z + a^2 - 1 - sqrt((z + a^2 - 1)^2 + 4z)`
/// * `a > 1`: `((a - 1) d^2 + 4 z d - 4 z^2) / z`, `d = z + a^2 - 1 + sqrt((z + a^2 - 1)^2 + 4z)`
pub fn branch_bound_objective(a: f64, z: f64) -> Result<f64> {
    check_extremum_input(a)?;
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain("z", z, "(0, inf)"));
    }
    let b = z + a * a - 1.0;
    let root = (b * b + 4.0 * z).sqrt();
    Ok(if a < 1.0 {
        let d = b - root;
        ((1.0 - a) * d * d - 4.0 * z * d + 4.0 * z * z) / z
    } else {
        let d = b + root;
        ((a - 1.0) * d * d + 4.0 * z * d - 4.0 * z * z) / z
    })
}

/// Closed-form stationary point `z0 = a^2 + a + 1` and the value
/// `(16 - 16a) z0` for `a < 1`, `(8a - 8) z0` for `a > 1`.
///
/// These closed forms do not coincide with the numerical minimum of
/// [`branch_bound_objective`]; the branch inequalities themselves hold regardless.
pub fn branch_bound_extremum(a: f64) -> Result<(f64, f64)> {
    check_extremum_input(a)?;
    let z0 = a * a + a + 1.0;
    let value = if a < 1.0 {
        (16.0 - 16.0 * a) * z0
    } else {
        (8.0 * a - 8.0) * z0
    };
    Ok((z0, value))
}

fn check_extremum_input(a: f64) -> Result<()> {
    check_finite("a", a)?;
    if a <= 0.0 || a == 1.0 {
        return Err(Error::domain("a", a, "(0, 1) or (1, inf)"));
    }
    Ok(())
}

/// `(1 + V) / (1 - V)`, the impedance of the limit system as `Q -> 0-`.
pub fn limit_minus(v: Complex64) -> Result<Complex64> {
    guarded_div(1.0 + v, 1.0 - v, "limit_minus")
}

/// `-(1 - V) / (1 + V)`, the impedance of the limit system as `Q -> 0+`.
pub fn limit_plus(v: Complex64) -> Result<Complex64> {
    guarded_div(-(1.0 - v), 1.0 + v, "limit_plus")
}

/// `w / w_ref`, the unimodular factor relating two transfer values.
pub fn transfer_ratio(w: Complex64, w_ref: Complex64) -> Result<Complex64> {
    guarded_div(w, w_ref, "transfer_ratio")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
        (x - y).norm() <= tol
    }

    #[test]
    fn cayley_examples() {
        assert!(close(impedance_to_transfer(c(0.0, 0.5)).unwrap(), c(3.0, 0.0), 1e-15));
        assert!(close(
            impedance_to_transfer(c(1.0, 0.5)).unwrap(),
            c(-0.2, -1.6),
            1e-15
        ));
        assert_eq!(impedance_to_transfer(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));

        assert!(close(transfer_to_impedance(c(3.0, 0.0)).unwrap(), c(0.0, 0.5), 1e-15));
        assert_eq!(transfer_to_impedance(c(1.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!(close(
            transfer_to_impedance(c(-0.2, -1.6)).unwrap(),
            c(1.0, 0.5),
            1e-15
        ));
    }

    #[test]
    fn cayley_poles() {
        match impedance_to_transfer(Complex64::i()) {
            Err(Error::Pole { magnitude, .. }) => assert_eq!(magnitude, 0.0),
            other => panic!("expected pole, got {other:?}"),
        }
        assert!(matches!(
            transfer_to_impedance(c(-1.0, 0.0)),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn angle_normalization() {
        assert_eq!(RotationAngle::new(PI).unwrap().alpha(), 0.0);
        assert_eq!(RotationAngle::new(0.0).unwrap().alpha(), 0.0);
        assert!((RotationAngle::new(-FRAC_PI_4).unwrap().alpha() - 3.0 * FRAC_PI_4).abs() < 1e-15);
        assert!((RotationAngle::new(PI + 0.25).unwrap().alpha() - 0.25).abs() < 1e-15);
        assert!(RotationAngle::new(f64::NAN).is_err());

        let r = RotationAngle::new(0.3).unwrap();
        assert!((r.unimodular_factor().norm() - 1.0).abs() < 1e-15);
        assert!(close(
            RotationAngle::new(FRAC_PI_2).unwrap().unimodular_factor(),
            c(1.0, 0.0),
            1e-15
        ));
    }

    #[test]
    fn rotation_examples() {
        let v = c(0.3, 1.7);
        let half = RotationAngle::new(FRAC_PI_2).unwrap();
        assert!(close(rotate(v, half).unwrap(), v, 1e-15));

        let quarter = RotationAngle::new(FRAC_PI_4).unwrap();
        assert!(close(rotate(v, quarter).unwrap(), (1.0 + v) / (1.0 - v), 1e-14));

        let r = RotationAngle::new(0.4).unwrap();
        let r2 = RotationAngle::new(0.4 + FRAC_PI_2).unwrap();
        let prod = rotate(v, r).unwrap() * rotate(v, r2).unwrap();
        assert!(close(prod, c(-1.0, 0.0), 1e-14));
    }

    #[test]
    fn rotation_pole_reports_magnitude() {
        // sin a - cos a * V = 0 at V = tan a
        let r = RotationAngle::new(0.7).unwrap();
        let v = c(0.7f64.tan(), 0.0);
        match rotate(v, r) {
            Err(Error::Pole { magnitude, .. }) => assert!(magnitude <= POLE_GUARD),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn solved_angles_unit_normalization() {
        let (plus, minus) = solve_rotation_angles(1.0, 1.0).unwrap();
        let sqrt5 = 5f64.sqrt();
        assert!((plus.alpha().tan() - (1.0 + sqrt5) / 2.0).abs() < 1e-14);
        assert!((minus.alpha().tan() - (1.0 - sqrt5) / 2.0).abs() < 1e-14);
        assert!(plus.alpha() < FRAC_PI_2 && minus.alpha() > FRAC_PI_2);

        for r in [plus, minus] {
            // tan 2a = -2/Q at a = 1
            assert!(((2.0 * r.alpha()).tan() + 2.0).abs() < 1e-12);
        }
        assert!((plus.alpha().tan() * minus.alpha().tan() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn solved_angles_half_normalization() {
        let (plus, minus) = solve_rotation_angles(1.0, 0.5).unwrap();
        let s65 = 65f64.sqrt();
        assert!((plus.alpha().tan() - (1.0 + s65) / 8.0).abs() < 1e-14);
        assert!((minus.alpha().tan() - (1.0 - s65) / 8.0).abs() < 1e-14);
        for r in [plus, minus] {
            assert!(((2.0 * r.alpha()).tan() + 8.0).abs() < 1e-11);
        }
        assert!((plus.alpha().tan() * minus.alpha().tan() + 1.0).abs() < 1e-14);
    }

    #[test]
    fn branch_ordering_swaps_with_sign_of_q() {
        let (plus, minus) = solve_rotation_angles(-2.0, 0.7).unwrap();
        assert!(plus.alpha() > FRAC_PI_2);
        assert!(minus.alpha() < FRAC_PI_2);
        assert!(solve_rotation_angles(0.0, 1.0).is_err());
    }

    #[test]
    fn rotated_parameters_unit_normalization() {
        let minus = rotation_angle(1.0, 1.0, Branch::Minus).unwrap();
        let plus = rotation_angle(1.0, 1.0, Branch::Plus).unwrap();
        let (q1, a1) = rotated_parameters(1.0, 1.0, minus).unwrap();
        let (q2, a2) = rotated_parameters(1.0, 1.0, plus).unwrap();
        assert!(q1.abs() < 1e-14 && q2.abs() < 1e-14);
        assert!((a1 - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-14);
        assert!((a1 * a2 - 1.0).abs() < 1e-14);
        assert!((minus.alpha().tan().powi(2) - a1).abs() < 1e-14);
        assert!((plus.alpha().tan().powi(2) - a2).abs() < 1e-13);
    }

    #[test]
    fn rotated_parameters_match_rotate() {
        let r = RotationAngle::new(1.1).unwrap();
        let (qa, aa) = rotated_parameters(0.7, 2.3, r).unwrap();
        let w = rotate(c(0.7, 2.3), r).unwrap();
        assert!(close(w, c(qa, aa), 1e-14));
    }

    #[test]
    fn branch_normalization_examples() {
        let minus = branch_normalization(0.5, 1.0, Branch::Minus).unwrap();
        let plus = branch_normalization(0.5, 1.0, Branch::Plus).unwrap();
        assert!(minus < 1.0);
        assert!((minus * plus - 1.0).abs() < 1e-14);
        let near = branch_normalization(0.5, 1e-6, Branch::Minus).unwrap();
        assert!((near - 0.5).abs() < 1e-9);
        assert!(branch_normalization(0.5, 0.0, Branch::Minus).is_err());
    }

    #[test]
    fn closed_form_extremum() {
        assert_eq!(branch_bound_extremum(0.5).unwrap(), (1.75, 14.0));
        assert_eq!(branch_bound_extremum(2.0).unwrap(), (7.0, 56.0));
        assert!(branch_bound_extremum(1.0).is_err());
        assert!(branch_bound_extremum(0.0).is_err());
    }

    #[test]
    fn limits() {
        let i = Complex64::i();
        assert!(close(limit_minus(i).unwrap(), i, 1e-15));
        assert!(close(limit_plus(i).unwrap(), i, 1e-15));
        assert_eq!(limit_minus(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        assert_eq!(limit_plus(c(0.0, 0.0)).unwrap(), c(-1.0, 0.0));
        assert!(limit_minus(c(1.0, 0.0)).is_err());
        assert!(limit_plus(c(-1.0, 0.0)).is_err());
    }

    #[test]
    fn ratio_of_transfer_values() {
        let s10 = 10f64.sqrt();
        let w = -c(5.0, 2.0 * s10) / 5.0;
        let w_ref = -c(1.0, 8.0) / 5.0;
        let r = transfer_ratio(w, w_ref).unwrap();
        assert!(close(r, c(5.0, 2.0 * s10) / c(1.0, 8.0), 1e-15));
        assert!((r.norm() - 1.0).abs() < 1e-15);
    }
}
