use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};
use crate::measure::DiscreteMeasure;

/// Relative tolerance used to decide `a == 1`.
pub const UNIT_NORMALIZATION_TOL: f64 = 1e-12;

/// `V(z) = Q + sum w (1/(l - z) - l/(1 + l^2))` over a discrete measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawFunction", into = "RawFunction")]
pub struct PerturbedHerglotz {
    q: f64,
    measure: DiscreteMeasure,
    a: f64,
}

#[derive(Serialize, Deserialize)]
struct RawFunction {
    #[serde(rename = "Q")]
    q: f64,
    measure: DiscreteMeasure,
}

impl TryFrom<RawFunction> for PerturbedHerglotz {
    type Error = Error;

    fn try_from(raw: RawFunction) -> Result<Self> {
        PerturbedHerglotz::new(raw.q, raw.measure)
    }
}

impl From<PerturbedHerglotz> for RawFunction {
    fn from(f: PerturbedHerglotz) -> Self {
        RawFunction {
            q: f.q,
            measure: f.measure,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "M")]
    M,
    #[serde(rename = "M_kappa")]
    MKappa,
    #[serde(rename = "M_kappa_inv")]
    MKappaInv,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassTag {
    pub family: Family,
    pub kappa0: f64,
    pub perturbed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    #[serde(flatten)]
    pub tag: ClassTag,
    #[serde(rename = "Q")]
    pub q: f64,
    pub a: f64,
}

/// Family and `kappa0` determined by the normalization `a` alone.
pub fn class_of_normalization(a: f64) -> (Family, f64) {
    if is_unit_normalization(a) {
        (Family::M, 0.0)
    } else if a < 1.0 {
        (Family::MKappa, (1.0 - a) / (1.0 + a))
    } else {
        (Family::MKappaInv, (a - 1.0) / (1.0 + a))
    }
}

pub fn is_unit_normalization(a: f64) -> bool {
    (a - 1.0).abs() <= UNIT_NORMALIZATION_TOL
}

impl PerturbedHerglotz {
    pub fn new(q: f64, measure: DiscreteMeasure) -> Result<Self> {
        check_finite("Q", q)?;
        let a = measure.normalization();
        Ok(PerturbedHerglotz { q, measure, a })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn normalization(&self) -> f64 {
        self.a
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if z.im == 0.0 {
            return Err(Error::Pole {
                what: "Herglotz function on the real axis",
                magnitude: 0.0,
            });
        }
        let sum: Complex64 = self
            .measure
            .atoms()
            .iter()
            .map(|atom| {
                let l = atom.position;
                // 1/(l - z) - l/(1 + l^2) written over a common denominator
                atom.weight * (1.0 + l * z) / ((l - z) * (1.0 + l * l))
            })
            .sum();
        Ok(self.q + sum)
    }

    pub fn perturb(&self, dq: f64) -> Self {
        PerturbedHerglotz {
            q: self.q + dq,
            measure: self.measure.clone(),
            a: self.a,
        }
    }

    pub fn classify(&self) -> Classification {
        let (family, kappa0) = class_of_normalization(self.a);
        Classification {
            tag: ClassTag {
                family,
                kappa0,
                perturbed: self.q != 0.0,
            },
            q: self.q,
            a: self.a,
        }
    }

    /// `eta * Im V(i eta)` for each `eta`; tends to the total mass as `eta` grows.
    pub fn mass_growth_diagnostic(&self, etas: &[f64]) -> Result<Vec<f64>> {
        etas.iter()
            .map(|&eta| {
                if !(eta > 0.0 && eta.is_finite()) {
                    return Err(Error::domain("eta", eta, "(0, inf)"));
                }
                Ok(eta * self.evaluate(Complex64::new(0.0, eta))?.im)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit_atom() -> DiscreteMeasure {
        DiscreteMeasure::new([(0.0, 1.0)]).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let f = PerturbedHerglotz::new(1.0, unit_atom()).unwrap();
        assert!((f.evaluate(Complex64::i()).unwrap() - c(1.0, 1.0)).norm() < 1e-15);

        let half = DiscreteMeasure::new([(-1.0, 0.5), (1.0, 0.5)]).unwrap();
        let f = PerturbedHerglotz::new(1.0, half).unwrap();
        assert!((f.evaluate(Complex64::i()).unwrap() - c(1.0, 0.5)).norm() < 1e-15);

        let f = PerturbedHerglotz::new(0.0, unit_atom()).unwrap();
        assert!((f.evaluate(c(0.0, 2.0)).unwrap() - c(0.0, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn evaluate_refuses_real_axis() {
        let f = PerturbedHerglotz::new(0.0, unit_atom()).unwrap();
        assert!(matches!(f.evaluate(c(0.0, 0.0)), Err(Error::Pole { .. })));
        assert!(matches!(f.evaluate(c(3.0, 0.0)), Err(Error::Pole { .. })));
    }

    #[test]
    fn perturbation() {
        let f = PerturbedHerglotz::new(0.0, unit_atom()).unwrap();
        assert_eq!(f.perturb(1.0).q(), 1.0);
        assert_eq!(f.perturb(1.0).perturb(-1.0).q(), 0.0);
        let g = PerturbedHerglotz::new(2.0, unit_atom()).unwrap();
        assert_eq!(g.perturb(0.0), g);
    }

    #[test]
    fn classification_examples() {
        let f = PerturbedHerglotz::new(0.0, unit_atom()).unwrap();
        let cls = f.classify();
        assert_eq!(cls.tag.family, Family::M);
        assert_eq!(cls.tag.kappa0, 0.0);
        assert!(!cls.tag.perturbed);

        let half = unit_atom().rescale_to(0.5).unwrap();
        let cls = PerturbedHerglotz::new(1.0, half).unwrap().classify();
        assert_eq!(cls.tag.family, Family::MKappa);
        assert!((cls.tag.kappa0 - 1.0 / 3.0).abs() < 1e-15);
        assert!(cls.tag.perturbed);

        let two = unit_atom().rescale_to(2.0).unwrap();
        let cls = PerturbedHerglotz::new(0.0, two).unwrap().classify();
        assert_eq!(cls.tag.family, Family::MKappaInv);
        assert!((cls.tag.kappa0 - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn unit_detection_is_relative() {
        assert!(is_unit_normalization(1.0 + 5e-13));
        assert!(!is_unit_normalization(1.0 + 5e-12));
    }

    #[test]
    fn mass_diagnostic() {
        // 10 * Im(1 / (0 - 10i)) = 10 * 0.1
        let f = PerturbedHerglotz::new(0.0, unit_atom()).unwrap();
        let d = f.mass_growth_diagnostic(&[10.0]).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-15);

        let sym = DiscreteMeasure::new([(-1.0, 1.0), (1.0, 1.0)]).unwrap();
        let f = PerturbedHerglotz::new(0.0, sym).unwrap();
        let d = f
            .mass_growth_diagnostic(&[1.0, 10.0, 100.0, 1e6])
            .unwrap();
        assert!(d.windows(2).all(|w| w[1] >= w[0] - 1e-9));
        assert!((d[3] - 2.0).abs() < 1e-9);

        assert!(f.mass_growth_diagnostic(&[0.0]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"Q":1.5,"measure":{"atoms":[{"lambda":0.0,"weight":1.0}]}}"#;
        let f: PerturbedHerglotz = serde_json::from_str(text).unwrap();
        assert_eq!(f.q(), 1.5);
        assert_eq!(f.normalization(), 1.0);
        assert_eq!(serde_json::to_string(&f).unwrap(), text);
    }
}
