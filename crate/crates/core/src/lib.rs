//! Numerics for perturbed Herglotz-Nevanlinna functions of Donoghue type and the
//! von Neumann parameters of the L-systems that realize them.
//!
//! The crate is organised bottom-up:
//!
//! * [`measure`] holds finite atomic measures and their moment sums.
//! * [`herglotz`] evaluates `V(z) = Q + sum w (1/(l - z) - l/(1 + l^2))` and classifies it.
//! * [`moebius`] collects the scalar fractional-linear maps (Cayley transform, rotations).
//! * [`realize`] computes `kappa`, `U` and the deficiency-basis phase for each class.
//! * [`starext`] covers the 2x2 coefficient algebra of (*)-extensions.
//! * [`model`] builds finite model systems over a discrete measure and their resolvents.

pub mod error;
pub mod herglotz;
pub mod measure;
pub mod model;
pub mod moebius;
pub mod realize;
pub mod starext;

pub use error::{Error, Result};
pub use herglotz::{ClassTag, Classification, Family, PerturbedHerglotz};
pub use measure::{Atom, DiscreteMeasure};
pub use model::ModelSystem;
pub use moebius::{Branch, RotationAngle};
pub use realize::{ClassParams, Hypothesis, RealizationParams};
pub use starext::StarExtensionData;

pub use num_complex::Complex64;
