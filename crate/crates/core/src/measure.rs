//! Finite atomic probability measures on `[-1, 1]` and ensembles of them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[cfg(test)]
const MASS_TOL: f64 = 1e-12;

/// Atom of a [`PointMeasure`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub value: f64,
    pub mass: f64,
}

/// Finite atomic probability measure on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointMeasure {
    atoms: Vec<Atom>,
}

impl PointMeasure {
    /// Builds a measure from `(value, mass)` pairs, normalizing total mass to 1.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Domain("point measure needs at least one atom".into()));
        }
        let mut total = 0.0;
        for a in &atoms {
            if !a.value.is_finite() || !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&a.value) {
                return Err(Error::Domain(format!("atom value {} outside [-1, 1]", a.value)));
            }
            if !(a.mass > 0.0 && a.mass.is_finite()) {
                return Err(Error::Domain(format!("atom mass {} is not positive", a.mass)));
            }
            total += a.mass;
        }
        let atoms = atoms
            .into_iter()
            .map(|a| Atom {
                value: a.value.clamp(-1.0, 1.0),
                mass: a.mass / total,
            })
            .collect();
        Ok(PointMeasure { atoms })
    }

    /// Uniform measure with one atom of mass `1/n` at each value.
    pub fn uniform(values: &[f64]) -> Result<Self> {
        let mass = 1.0 / values.len().max(1) as f64;
        Self::new(values.iter().map(|&value| Atom { value, mass }).collect())
    }

    pub fn dirac(value: f64) -> Result<Self> {
        Self::new(vec![Atom { value, mass: 1.0 }])
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

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.value)
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass * a.value).sum()
    }

    /// `∫ x^p dμ`.
    pub fn moment(&self, p: u32) -> f64 {
        self.atoms.iter().map(|a| a.mass * a.value.powi(p as i32)).sum()
    }

    /// Sorts atoms by value and merges coincident ones.
    pub fn merged(&self) -> PointMeasure {
        let mut atoms = self.atoms.clone();
        atoms.sort_by(|a, b| a.value.total_cmp(&b.value));
        let mut out: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match out.last_mut() {
                Some(last) if last.value == a.value => last.mass += a.mass,
                _ => out.push(a),
            }
        }
        PointMeasure { atoms: out }
    }

    #[cfg(test)]
    pub(crate) fn check_normalized(&self) -> Result<()> {
        let total = self.total_mass();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::Invariant {
                context: "point measure".into(),
                detail: format!("total mass {total}"),
            });
        }
        Ok(())
    }
}

/// Empirical measure over point measures, each member of mass `1/n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureEnsemble {
    members: Vec<PointMeasure>,
}

impl MeasureEnsemble {
    pub fn new(members: Vec<PointMeasure>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Domain("measure ensemble needs at least one member".into()));
        }
        Ok(MeasureEnsemble { members })
    }

    pub fn members(&self) -> &[PointMeasure] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}
