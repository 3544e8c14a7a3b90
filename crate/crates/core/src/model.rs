//! Finite model systems over a discrete measure.
//!
//! The state space is `C^n` with the weighted inner product
//! `<u, v> = sum w_i u_i conj(v_i)`. The self-adjoint operator is multiplication
//! by the atom positions and the deficiency vectors are `g_z(l) = 1/(l - z)`.
//! The symmetric restriction is never built; the constant vector and a rank-one
//! correction carry all the information the finite model needs.
//!
//! The model measure is rescaled to normalization 1 on construction, so
//! [`ModelSystem::weyl_function`] is always in the Donoghue class and the
//! original normalization survives only through `kappa` (or the resolvent
//! parameter).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::measure::DiscreteMeasure;
use crate::moebius;
use crate::realize::Hypothesis;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Minimum distance to the spectrum before a pole error is raised.
pub const SPECTRUM_GUARD: f64 = 1e-10;
const REAL_KAPPA_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSystem {
    measure: DiscreteMeasure,
    original_normalization: f64,
    kappa: Complex64,
    u: Complex64,
    c: f64,
}

/// Outcome of [`ModelSystem::livsic_vanishing_test`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VanishingReport {
    pub vanishes: bool,
    /// Set for a one-atom measure, where the Livšic function is not informative.
    pub degenerate: bool,
    pub max_abs: f64,
}

fn check_complex(what: &'static str, z: Complex64) -> Result<Complex64> {
    check_finite(what, z.re)?;
    check_finite(what, z.im)?;
    Ok(z)
}

fn off_axis(z: Complex64) -> Result<Complex64> {
    check_complex("z", z)?;
    if z.im == 0.0 {
        return Err(Error::Pole {
            what: "deficiency vector at real z",
            magnitude: 0.0,
        });
    }
    Ok(z)
}

fn upper(z: Complex64) -> Result<Complex64> {
    check_complex("z", z)?;
    if z.im <= 0.0 {
        return Err(Error::domain("Im z", z.im, "(0, inf)"));
    }
    Ok(z)
}

fn guarded_div(num: Complex64, den: Complex64, what: &'static str) -> Result<Complex64> {
    if den.norm() < SPECTRUM_GUARD {
        return Err(Error::Pole {
            what,
            magnitude: den.norm(),
        });
    }
    Ok(num / den)
}

impl ModelSystem {
    pub fn new(measure: &DiscreteMeasure, kappa: Complex64, u: Complex64) -> Result<Self> {
        check_complex("kappa", kappa)?;
        check_complex("U", u)?;
        if kappa.norm() >= 1.0 {
            return Err(Error::domain("|kappa|", kappa.norm(), "[0, 1)"));
        }
        if (u.norm() - 1.0).abs() > 1e-10 {
            return Err(Error::domain("|U|", u.norm(), "{1}"));
        }
        let original_normalization = measure.normalization();
        let measure = measure.rescale_to(1.0)?;
        let c = measure.real_part_constant();
        Ok(ModelSystem {
            measure,
            original_normalization,
            kappa,
            u,
            c,
        })
    }

    /// `kappa = 0`, `U = -1`.
    pub fn unperturbed(measure: &DiscreteMeasure) -> Result<Self> {
        Self::new(measure, Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0))
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn len(&self) -> usize {
        self.measure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measure.is_empty()
    }

    pub fn original_normalization(&self) -> f64 {
        self.original_normalization
    }

    pub fn kappa(&self) -> Complex64 {
        self.kappa
    }

    pub fn u(&self) -> Complex64 {
        self.u
    }

    pub fn real_part_constant(&self) -> f64 {
        self.c
    }

    /// Diagonal of the multiplication operator.
    pub fn b_diagonal(&self) -> Vec<f64> {
        self.measure.positions().collect()
    }

    pub fn b_matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_diagonal(&DVector::from_iterator(
            self.len(),
            self.measure.positions().map(|l| Complex64::new(l, 0.0)),
        ))
    }

    pub fn weights(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.measure.weights())
    }

    /// `<u, v> = sum w_i u_i conj(v_i)`
    pub fn inner(&self, u: &DVector<Complex64>, v: &DVector<Complex64>) -> Complex64 {
        self.measure
            .weights()
            .zip(u.iter().zip(v.iter()))
            .map(|(w, (x, y))| w * x * y.conj())
            .sum()
    }

    pub fn deficiency_vector(&self, z: Complex64) -> Result<DVector<Complex64>> {
        off_axis(z)?;
        let entries = self
            .measure
            .positions()
            .map(|l| guarded_div(Complex64::new(1.0, 0.0), l - z, "deficiency vector"))
            .collect::<Result<Vec<_>>>()?;
        Ok(DVector::from_vec(entries))
    }

    /// `sum w (1/(l - z) - l/(1 + l^2))` for any non-real `z`.
    fn weyl_integral(&self, z: Complex64) -> Result<Complex64> {
        off_axis(z)?;
        self.measure
            .atoms()
            .iter()
            .map(|atom| {
                let l = atom.position;
                Ok(atom.weight
                    * (guarded_div(Complex64::new(1.0, 0.0), l - z, "Weyl function")?
                        - l / (1.0 + l * l)))
            })
            .sum()
    }

    pub fn weyl_function(&self, z: Complex64) -> Result<Complex64> {
        upper(z)?;
        self.weyl_integral(z)
    }

    /// `((Bz + I)(B - z)^{-1} g_+, g_+) / |g_+|^2`, evaluated as a sesquilinear form.
    pub fn weyl_function_form(&self, z: Complex64) -> Result<Complex64> {
        upper(z)?;
        let gp = self.deficiency_vector(I)?;
        let gz = self.deficiency_vector(z)?;
        let image = DVector::from_iterator(
            self.len(),
            self.measure
                .positions()
                .zip(gz.iter().zip(gp.iter()))
                .map(|(l, (r, g))| (l * z + 1.0) * r * g),
        );
        Ok(self.inner(&image, &gp) / self.inner(&gp, &gp))
    }

    /// `s(z) = (z - i)/(z + i) <g_z, g_-> / <g_z, g_+>`
    pub fn livsic_function(&self, z: Complex64) -> Result<Complex64> {
        upper(z)?;
        let gz = self.deficiency_vector(z)?;
        let gp = self.deficiency_vector(I)?;
        let gm = self.deficiency_vector(-I)?;
        let ratio = guarded_div(self.inner(&gz, &gm), self.inner(&gz, &gp), "Livšic function")?;
        Ok((z - I) / (z + I) * ratio)
    }

    /// `S(z) = (s - kappa) / (conj(kappa) s - 1)`
    pub fn characteristic_function(&self, z: Complex64) -> Result<Complex64> {
        self.characteristic_with(self.kappa, z)
    }

    fn characteristic_with(&self, kappa: Complex64, z: Complex64) -> Result<Complex64> {
        let s = self.livsic_function(z)?;
        guarded_div(s - kappa, kappa.conj() * s - 1.0, "characteristic function")
    }

    fn real_kappa(&self) -> Result<f64> {
        if self.kappa.im.abs() > REAL_KAPPA_TOL {
            return Err(Error::domain(
                "Im kappa",
                self.kappa.im,
                "{0}; rotate the basis first",
            ));
        }
        Ok(self.kappa.re)
    }

    /// Transfer and impedance functions through `s -> S -> W = 1/S -> V`.
    /// The second hypothesis flips the sign of `kappa` in `S`.
    pub fn transfer_and_impedance(
        &self,
        z: Complex64,
        hypothesis: Hypothesis,
    ) -> Result<(Complex64, Complex64)> {
        let k = self.real_kappa()?;
        let k = match hypothesis {
            Hypothesis::Hyp1 => k,
            Hypothesis::Hyp2 => -k,
            Hypothesis::Mixed => {
                return Err(Error::domain(
                    "hypothesis",
                    f64::NAN,
                    "{Hyp1, Hyp2} for the transfer chain",
                ))
            }
        };
        let s_char = self.characteristic_with(Complex64::new(k, 0.0), z)?;
        let w = guarded_div(Complex64::new(1.0, 0.0), s_char, "transfer function")?;
        let v = moebius::transfer_to_impedance(w)?;
        Ok((w, v))
    }

    /// `((1 - k)/(1 + k)) M` under the first hypothesis and `((1 + k)/(1 - k)) M`
    /// under the second.
    pub fn scaled_weyl(&self, z: Complex64, hypothesis: Hypothesis) -> Result<Complex64> {
        let k = self.real_kappa()?;
        let m = self.weyl_function(z)?;
        match hypothesis {
            Hypothesis::Hyp1 => Ok((1.0 - k) / (1.0 + k) * m),
            Hypothesis::Hyp2 => Ok((1.0 + k) / (1.0 - k) * m),
            Hypothesis::Mixed => Err(Error::domain(
                "hypothesis",
                f64::NAN,
                "{Hyp1, Hyp2} for the scaled Weyl function",
            )),
        }
    }

    /// `i (k + 1)/(k - 1)`
    fn boundary_term(k_param: Complex64) -> Result<Complex64> {
        check_complex("k_param", k_param)?;
        if k_param.norm() >= 1.0 {
            return Err(Error::domain("|k_param|", k_param.norm(), "[0, 1)"));
        }
        Ok(I * (k_param + 1.0) / (k_param - 1.0))
    }

    /// `p(z) = 1 / (M(z) + i (k + 1)/(k - 1))`
    pub fn resolvent_coefficient(&self, k_param: Complex64, z: Complex64) -> Result<Complex64> {
        let m = self.weyl_integral(z)?;
        guarded_div(
            Complex64::new(1.0, 0.0),
            m + Self::boundary_term(k_param)?,
            "resolvent: z is an eigenvalue of the main operator",
        )
    }

    /// `(B - z)^{-1} - p(z) (., g_{conj z}) g_z` as a matrix acting on coefficient vectors.
    pub fn dissipative_resolvent(
        &self,
        k_param: Complex64,
        z: Complex64,
    ) -> Result<DMatrix<Complex64>> {
        let gz = self.deficiency_vector(z)?;
        let p = self.resolvent_coefficient(k_param, z)?;
        let w = self.weights();
        let n = self.len();
        Ok(DMatrix::from_fn(n, n, |i, j| {
            let diag = if i == j { gz[i] } else { Complex64::new(0.0, 0.0) };
            diag - p * gz[i] * w[j] * gz[j]
        }))
    }

    /// `d = -C + i (k + 1)/(k - 1)`
    pub fn coupling_denominator(&self, k_param: Complex64) -> Result<Complex64> {
        Ok(-self.c + Self::boundary_term(k_param)?)
    }

    /// `T = B + (1/d) (., 1) 1`, the operator whose resolvent is [`Self::dissipative_resolvent`].
    pub fn recover_main_operator(&self, k_param: Complex64) -> Result<DMatrix<Complex64>> {
        let d = self.coupling_denominator(k_param)?;
        if d.norm() < SPECTRUM_GUARD {
            return Err(Error::Singular {
                what: "main operator coupling (d = 0)",
            });
        }
        let w = self.weights();
        let b = self.b_diagonal();
        let n = self.len();
        Ok(DMatrix::from_fn(n, n, |i, j| {
            let diag = if i == j { b[i] } else { 0.0 };
            Complex64::new(diag, 0.0) + w[j] / d
        }))
    }

    /// Smallest eigenvalue of the imaginary part of `T` in the weighted inner product.
    /// Non-negative exactly when `T` is dissipative.
    pub fn dissipativity_margin(&self, t: &DMatrix<Complex64>) -> f64 {
        let sw: Vec<f64> = self.measure.weights().map(f64::sqrt).collect();
        let n = self.len();
        let similar = DMatrix::from_fn(n, n, |i, j| t[(i, j)] * sw[i] / sw[j]);
        let im_part = (&similar - similar.adjoint()) * Complex64::new(0.0, -0.5);
        nalgebra::SymmetricEigen::new(im_part)
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether `|s|` stays below `tol` on the whole grid.
    pub fn livsic_vanishing_test(&self, grid: &[Complex64], tol: f64) -> Result<VanishingReport> {
        if grid.is_empty() {
            return Err(Error::domain("grid length", 0.0, "[1, inf)"));
        }
        if self.len() == 1 {
            return Ok(VanishingReport {
                vanishes: true,
                degenerate: true,
                max_abs: f64::NAN,
            });
        }
        let mut max_abs: f64 = 0.0;
        for &z in grid {
            max_abs = max_abs.max(self.livsic_function(z)?.norm());
        }
        Ok(VanishingReport {
            vanishes: max_abs < tol,
            degenerate: false,
            max_abs,
        })
    }
}

/// Ten points in the upper half-plane, away from `i` where `s` vanishes.
pub fn default_grid() -> Vec<Complex64> {
    (0..10)
        .map(|k| Complex64::new(-2.0 + 0.45 * k as f64, 0.5 + 0.3 * k as f64))
        .collect()
}
