//! Finite atomic measures on the real line.
//!
//! A [`DiscreteMeasure`] stands in for the representing measure of a
//! Herglotz-Nevanlinna function. Only finitely many atoms are stored, so the
//! total mass is always finite; growth towards infinite mass is probed
//! separately by [`crate::herglotz::PerturbedHerglotz::mass_growth_diagnostic`].

use serde::{Deserialize, Serialize};

use crate::error::{check_finite, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(rename = "lambda")]
    pub position: f64,
    pub weight: f64,
}

/// Atoms sorted by strictly increasing position, all weights positive, never empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct DiscreteMeasure {
    atoms: Vec<Atom>,
}

#[derive(Deserialize)]
struct RawMeasure {
    atoms: Vec<Atom>,
}

impl TryFrom<RawMeasure> for DiscreteMeasure {
    type Error = Error;

    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure::from_atoms(raw.atoms)
    }
}

impl DiscreteMeasure {
    /// Builds a measure from `(position, weight)` pairs. Positions are sorted and
    /// atoms sharing a position are merged by adding their weights.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64)>,
    {
        Self::from_atoms(
            pairs
                .into_iter()
                .map(|(position, weight)| Atom { position, weight }),
        )
    }

    pub fn from_atoms<I>(atoms: I) -> Result<Self>
    where
        I: IntoIterator<Item = Atom>,
    {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        if atoms.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        for atom in &atoms {
            check_finite("atom position", atom.position)?;
            check_finite("atom weight", atom.weight)?;
            if atom.weight <= 0.0 {
                return Err(Error::InvalidWeight {
                    weight: atom.weight,
                });
            }
        }
        atoms.sort_by(|x, y| x.position.total_cmp(&y.position));

        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for atom in atoms {
            match merged.last_mut() {
                Some(last) if last.position == atom.position => last.weight += atom.weight,
                _ => merged.push(atom),
            }
        }
        Ok(DiscreteMeasure { atoms: merged })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.position)
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.weight)
    }

    /// `a = sum w / (1 + l^2)`.
    pub fn normalization(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.weight / (1.0 + a.position * a.position))
            .sum()
    }

    /// `C = sum w l / (1 + l^2)`.
    pub fn real_part_constant(&self) -> f64 {
        self.atoms
            .iter()
            .map(|a| a.weight * a.position / (1.0 + a.position * a.position))
            .sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.weights().sum()
    }

    /// Scales every weight so that the normalization becomes `a_target`.
    pub fn rescale_to(&self, a_target: f64) -> Result<Self> {
        check_finite("target normalization", a_target)?;
        if a_target <= 0.0 {
            return Err(Error::domain("a_target", a_target, "(0, inf)"));
        }
        let factor = a_target / self.normalization();
        Ok(DiscreteMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    position: a.position,
                    weight: a.weight * factor,
                })
                .collect(),
        })
    }

    /// Multiplies all weights by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::domain("factor", factor, "(0, inf)"));
        }
        Ok(DiscreteMeasure {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    position: a.position,
                    weight: a.weight * factor,
                })
                .collect(),
        })
    }
}
