//! Thomas-Fermi scaled units.
//!
//! Lengths are measured by the TF variable `x = Z^(1/3) r / a`, which removes all
//! numerical factors from the TF differential equation.

use std::f64::consts::PI;

/// The length constant `a = (1/2) (3 pi / 4)^(2/3)` (about 0.8853).
pub fn tf_length_constant() -> f64 {
    0.5 * (3.0 * PI / 4.0).powf(2.0 / 3.0)
}

/// Conversion between physical radius (Bohr radii) and the TF variable for a given nuclear charge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledUnits {
    pub a: f64,
    pub z: f64,
}

impl ScaledUnits {
    pub fn new(z: f64) -> Self {
        Self {
            a: tf_length_constant(),
            z,
        }
    }

    /// Radius scale `a / Z^(1/3)`, i.e. the physical length of one TF unit.
    pub fn length_scale(&self) -> f64 {
        self.a / self.z.cbrt()
    }

    pub fn x_of_r(&self, r: f64) -> f64 {
        r / self.length_scale()
    }

    pub fn r_of_x(&self, x: f64) -> f64 {
        x * self.length_scale()
    }
}
