//! Golden values of the three worked examples.

use donoghue_core::moebius::{impedance_to_transfer, transfer_ratio};
use donoghue_core::realize::{matching_q0, params_class_m, params_class_mk, params_universal};
use donoghue_core::starext::{channel_coefficients, to_delta_basis};
use donoghue_core::{Complex64, Result};
use serde::Serialize;

pub const GOLDEN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

struct Collector(Vec<Check>);

impl Collector {
    fn complex(&mut self, name: &'static str, got: Result<Complex64>, want: Complex64) {
        let deviation = got.map(|g| (g - want).norm()).unwrap_or(f64::INFINITY);
        self.0.push(Check {
            name,
            deviation,
            tolerance: GOLDEN_TOL,
        });
    }

    fn real(&mut self, name: &'static str, got: Result<f64>, want: f64) {
        self.complex(name, got.map(|g| c(g, 0.0)), c(want, 0.0));
    }
}

pub fn run_checks() -> Vec<Check> {
    let s2 = 2f64.sqrt();
    let s5 = 5f64.sqrt();
    let s10 = 10f64.sqrt();
    let s13 = 13f64.sqrt();
    let s65 = 65f64.sqrt();
    let mut out = Collector(Vec::new());

    // Q = 1, a = 1
    let ex1 = params_class_m(1.0);
    out.complex("ex1 kappa", ex1.map(|p| p.kappa), c(1.0 / s5, 0.0));
    out.complex("ex1 U", ex1.map(|p| p.u), c(-1.0, 2.0) / s5);
    out.complex("ex1 basis phase", ex1.map(|p| p.basis_phase), c(1.0, -2.0) / s5);
    let chi1 = ex1.and_then(|p| {
        let (phi, psi) = channel_coefficients(p.kappa.re, p.u)?;
        to_delta_basis(phi, psi, p.basis_phase)
    });
    out.complex("ex1 chi phi", chi1.map(|x| x.0), c(1.0, 1.0) / s2);
    out.complex("ex1 chi psi", chi1.map(|x| x.1), c(7.0, 1.0) / (5.0 * s2));

    // Q = 1, a = 1/2
    let uni = params_universal(1.0, 0.5);
    out.real("ex2 kappa tilde", uni.map(|u| u.kappa_tilde), 1.0 / s2);
    out.complex("ex2 U tilde", uni.map(|u| u.u_tilde), c(-1.0, 1.0) / s2);
    out.complex("ex2 complex kappa", uni.map(|u| u.kappa_complex), s2 * c(11.0, -3.0) / 26.0);
    out.real("ex2 |kappa|", uni.map(|u| u.kappa_modulus), s65 / 13.0);
    let ex2 = params_class_mk(1.0, 0.5);
    out.complex("ex2 real kappa", ex2.map(|p| p.kappa), c(s65 / 13.0, 0.0));
    out.complex("ex2 U", ex2.map(|p| p.u), c(-7.0, 4.0) / s65);
    let chi2 = ex2.and_then(|p| channel_coefficients(p.kappa.re, p.u));
    out.complex("ex2 chi phi", chi2.map(|x| x.0), c(1.0, 2.0) / 2.0);
    out.complex("ex2 chi psi", chi2.map(|x| x.1), c(1.0, 18.0) / (2.0 * s65));
    let w_ref = impedance_to_transfer(c(1.0, 0.5));
    out.complex("ex2 W", w_ref, -c(1.0, 8.0) / 5.0);

    // kappa = sqrt(65)/13 reached inside the unit class
    let q0 = matching_q0(s65 / 13.0);
    out.real("ex3 Q0", q0, 2.5f64.sqrt());
    let ex3 = q0.and_then(params_class_m);
    out.complex("ex3 U", ex3.map(|p| p.u), c(-s5, 2.0 * s2) / s13);
    let chi3 = ex3.and_then(|p| channel_coefficients(s65 / 13.0, p.u));
    out.complex("ex3 chi phi", chi3.map(|x| x.0), c(26f64.sqrt(), s65) / (2.0 * s13));
    out.complex("ex3 chi psi", chi3.map(|x| x.1), c(s10, 9.0) / (2.0 * s13));
    let factor = q0
        .and_then(|q| impedance_to_transfer(c(q, 1.0)))
        .and_then(|w| transfer_ratio(w, w_ref?));
    out.complex("ex3 unimodular factor", factor, c(5.0, 2.0 * s10) / c(1.0, 8.0));
    out.real("ex3 |factor|", factor.map(|f| f.norm()), 1.0);

    out.0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_golden_values_reproduce() {
        let checks = run_checks();
        assert_eq!(checks.len(), 20);
        for ch in checks {
            assert!(ch.passed(), "{} deviates by {:e}", ch.name, ch.deviation);
        }
    }
}
