//! Potential, density and validity diagnostics derived from a solved F.

use std::f64::consts::PI;

use serde::Serialize;

use super::TfSolution;
use crate::error::{Error, Result};
use crate::units::ScaledUnits;

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("radius must be positive, got {r}")))
    }
}

fn edge_radius(sol: &TfSolution, units: &ScaledUnits) -> f64 {
    units.r_of_x(sol.x0())
}

/// Electrostatic potential energy of an electron at radius `r` (atomic units).
///
/// Inside the edge `V = -(Z/r) F(x) - zeta` with `zeta = q Z / r0`; outside an ion
/// the potential is that of the net charge, `-q Z / r`.
pub fn potential(sol: &TfSolution, z: f64, r: f64) -> Result<f64> {
    check_radius(r)?;
    let units = ScaledUnits::new(z);
    let x = units.x_of_r(r);
    if sol.is_neutral() {
        return Ok(-z / r * sol.value(x));
    }
    let r0 = edge_radius(sol, &units);
    if r >= r0 {
        Ok(-sol.q() * z / r)
    } else {
        Ok(-z / r * sol.value(x) - sol.q() * z / r0)
    }
}

/// Particle density `n` and radial density `D = 4 pi r^2 n` at radius `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Density {
    pub n: f64,
    pub radial: f64,
}

/// `n = (1/3pi^2) [-2(V + zeta)]^(3/2)`, zero beyond the edge of an ion.
pub fn density(sol: &TfSolution, z: f64, r: f64) -> Result<Density> {
    check_radius(r)?;
    let units = ScaledUnits::new(z);
    // V + zeta = -(Z/r) F inside the edge; F vanishes outside
    let f = sol.value(units.x_of_r(r));
    let n = (2.0 * z * f / r).powf(1.5) / (3.0 * PI * PI);
    Ok(Density {
        n,
        radial: 4.0 * PI * r * r * n,
    })
}

/// `Z^(1/3) sqrt(x F(x))`; the statistical description needs this to be large.
pub fn validity_parameter(sol: &TfSolution, z: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(format!("TF variable must be positive, got {x}")));
    }
    Ok(z.cbrt() * (x * sol.value(x)).sqrt())
}
