//! Binding-energy estimates: noninteracting electrons in Bohr shells, the TF leading
//! term, the Scott correction for strongly bound electrons, and the quantum and
//! exchange corrections.
//!
//! Every term is stored as a contribution to the energy E (negative for bound atoms);
//! the scaled binding energy is `-E / (Z^2/2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tf::TfSolution;
use crate::units::tf_length_constant;

/// Number of electrons that fill the first `n_s` Bohr shells, `sum 2 n^2`.
pub fn nie_shell_count(n_s: u32) -> u64 {
    let n = n_s as u64;
    n * (n + 1) * (2 * n + 1) / 3
}

/// Asymptotic inverse of [`nie_shell_count`]:
/// `n_s = (3N/2)^(1/3) - 1/2 + (1/12)(3N/2)^(-1/3)`.
pub fn nie_inverse_asymptotic(n: f64) -> f64 {
    let c = (1.5 * n).cbrt();
    c - 0.5 + 1.0 / (12.0 * c)
}

/// Shell count, electron number and energy of a neutral noninteracting-electron atom.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NieResult {
    pub n: f64,
    pub n_s: f64,
    /// Total energy with `Z = N`: every filled shell contributes `-Z^2`.
    pub energy: f64,
}

impl NieResult {
    /// Exactly `n_s` filled shells.
    pub fn exact(n_s: u32) -> Self {
        let n = nie_shell_count(n_s) as f64;
        Self {
            n,
            n_s: n_s as f64,
            energy: -n * n * n_s as f64,
        }
    }

    /// Neutral atom with `n` electrons, shell count from the asymptotic inverse.
    pub fn asymptotic(n: f64) -> Self {
        let n_s = nie_inverse_asymptotic(n);
        Self {
            n,
            n_s,
            energy: -n * n * n_s,
        }
    }
}

/// Leading coefficient `2 (3/2)^(1/3)` of the scaled noninteracting energy.
pub fn nie_leading_coefficient() -> f64 {
    2.0 * 1.5f64.cbrt()
}

/// Coefficient `(1/6)(3/2)^(-1/3)` of the `Z^(-1/3)` term of the scaled noninteracting energy.
pub fn nie_third_coefficient() -> f64 {
    1.0 / (6.0 * 1.5f64.cbrt())
}

/// `-E / (Z^2/2)` of a neutral noninteracting-electron atom, to order `Z^(-1/3)`.
pub fn nie_neutral_scaled_energy(z: f64) -> f64 {
    let c = z.cbrt();
    nie_leading_coefficient() * c - 1.0 + nie_third_coefficient() / c
}

/// `(6/7) B / a`, the coefficient of `Z^(1/3)` in the scaled TF energy.
pub fn tf_scaled_coefficient(b: f64) -> f64 {
    6.0 / 7.0 * b / tf_length_constant()
}

/// `I2 / (16 a^2)`, the magnitude of the quantum correction in units of `Z^(5/3)`.
pub fn quantum_coefficient(i2: f64) -> f64 {
    let a = tf_length_constant();
    i2 / (16.0 * a * a)
}

/// Coefficient of `Z^(-1/3)` in the scaled statistical energy: quantum plus exchange,
/// `(1 + 9/2) I2/(16 a^2)` doubled by the scaling.
pub fn statistical_third_coefficient(i2: f64) -> f64 {
    11.0 * quantum_coefficient(i2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    Leading,
    Scott,
    Quantum,
    Exchange,
}

impl TermKind {
    pub fn label(self) -> &'static str {
        match self {
            TermKind::Leading => "leading",
            TermKind::Scott => "scott",
            TermKind::Quantum => "quantum",
            TermKind::Exchange => "exchange",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyTerm {
    pub kind: TermKind,
    pub value: f64,
}

/// Per-term ladder of an energy estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnergyBreakdown {
    pub z: f64,
    pub terms: Vec<EnergyTerm>,
    pub total: f64,
    pub scaled: f64,
}

impl EnergyBreakdown {
    pub fn from_terms(z: f64, terms: Vec<EnergyTerm>) -> Self {
        let total = terms.iter().map(|t| t.value).sum::<f64>();
        Self {
            z,
            terms,
            total,
            scaled: -2.0 * total / (z * z),
        }
    }

    /// Value of a term, zero when the breakdown does not include it.
    pub fn term(&self, kind: TermKind) -> f64 {
        self.terms
            .iter()
            .filter(|t| t.kind == kind)
            .map(|t| t.value)
            .sum()
    }

    /// Binding energy `-E`.
    pub fn binding(&self) -> f64 {
        -self.total
    }
}

fn leading_term(z: f64, b: f64) -> EnergyTerm {
    EnergyTerm {
        kind: TermKind::Leading,
        value: -3.0 / 7.0 * b / tf_length_constant() * z.powf(7.0 / 3.0),
    }
}

/// TF energy `E = -(3/7)(B/a) Z^(7/3)`.
pub fn tf_energy(z: f64, b: f64) -> EnergyBreakdown {
    EnergyBreakdown::from_terms(z, vec![leading_term(z, b)])
}

/// Scott correction as a contribution to E: `+Z^2/2` (the binding energy drops by `Z^2/2`).
pub fn scott_correction(z: f64) -> EnergyTerm {
    EnergyTerm {
        kind: TermKind::Scott,
        value: 0.5 * z * z,
    }
}

/// `(Delta E_qu, Delta E_ex)` for a neutral solution, with `Delta E_ex = (9/2) Delta E_qu`.
pub fn quantum_exchange_corrections(sol: &TfSolution, z: f64) -> Result<(f64, f64)> {
    if !sol.is_neutral() {
        return Err(Error::Unsupported(
            "quantum and exchange corrections are evaluated for neutral atoms only".into(),
        ));
    }
    let i2 = sol.f_squared_integral()?;
    Ok(corrections_from_integral(z, i2))
}

fn corrections_from_integral(z: f64, i2: f64) -> (f64, f64) {
    let qu = -z.powf(5.0 / 3.0) * quantum_coefficient(i2);
    (qu, 4.5 * qu)
}

/// TF leading term plus Scott, quantum and exchange corrections.
pub fn statistical_energy(z: f64, b: f64, i2: f64) -> EnergyBreakdown {
    let (qu, ex) = corrections_from_integral(z, i2);
    EnergyBreakdown::from_terms(
        z,
        vec![
            leading_term(z, b),
            scott_correction(z),
            EnergyTerm {
                kind: TermKind::Quantum,
                value: qu,
            },
            EnergyTerm {
                kind: TermKind::Exchange,
                value: ex,
            },
        ],
    )
}

/// TF energy with the Scott correction.
pub fn tf_scott_energy(z: f64, b: f64) -> EnergyBreakdown {
    EnergyBreakdown::from_terms(z, vec![leading_term(z, b), scott_correction(z)])
}

/// The solution-derived constants every statistical energy model needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelConstants {
    pub b: f64,
    pub i2: f64,
}

impl ModelConstants {
    pub fn from_solution(sol: &TfSolution) -> Result<Self> {
        Ok(Self {
            b: sol.b(),
            i2: sol.f_squared_integral()?,
        })
    }
}

/// Which binding-energy formula to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnergyModel {
    Tf,
    TfScott,
    Statistical,
}

impl EnergyModel {
    pub fn name(self) -> &'static str {
        match self {
            EnergyModel::Tf => "tf",
            EnergyModel::TfScott => "tf-scott",
            EnergyModel::Statistical => "statistical",
        }
    }

    pub fn breakdown(self, z: f64, c: &ModelConstants) -> EnergyBreakdown {
        match self {
            EnergyModel::Tf => tf_energy(z, c.b),
            EnergyModel::TfScott => tf_scott_energy(z, c.b),
            EnergyModel::Statistical => statistical_energy(z, c.b, c.i2),
        }
    }
}

impl std::str::FromStr for EnergyModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tf" => Ok(EnergyModel::Tf),
            "tf-scott" => Ok(EnergyModel::TfScott),
            "statistical" => Ok(EnergyModel::Statistical),
            other => Err(Error::domain(format!(
                "unknown energy model '{other}' (expected tf, tf-scott or statistical)"
            ))),
        }
    }
}
