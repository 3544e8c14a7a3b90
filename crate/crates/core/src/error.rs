use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum Error {
    #[error("measure must contain at least one atom")]
    EmptyMeasure,

    #[error("atom weight must be positive, got {weight}")]
    InvalidWeight { weight: f64 },

    #[error("non-finite {what}: {value}")]
    NonFinite { what: &'static str, value: f64 },

    #[error("{param} = {value} is outside {expected}")]
    OutOfDomain {
        param: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("pole in {what}: denominator magnitude {magnitude:e}")]
    Pole { what: &'static str, magnitude: f64 },

    #[error("singular {what}")]
    Singular { what: &'static str },
}

impl Error {
    /// Numerical guard violations, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Pole { .. } | Error::Singular { .. })
    }

    pub(crate) fn domain(param: &'static str, value: f64, expected: &'static str) -> Self {
        Error::OutOfDomain {
            param,
            value,
            expected,
        }
    }
}

pub(crate) fn check_finite(what: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { what, value })
    }
}
