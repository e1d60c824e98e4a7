//! Statistical (Thomas-Fermi) theory of atoms: the TF boundary-value problem,
//! statistical binding energies with their corrections, semiclassical quantization in
//! the TF potential, shell oscillations, and comparison against reference tables.

pub mod comparison;
pub mod energy;
pub mod error;
pub mod format;
pub mod ode;
pub mod quad;
pub mod roots;
pub mod semiclassics;
pub mod tf;
pub mod units;

pub use error::{Error, Result};
pub use units::{tf_length_constant, ScaledUnits};
