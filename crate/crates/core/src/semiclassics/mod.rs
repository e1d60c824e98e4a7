//! Semiclassical quantization in a central potential:
//! `nu = (1/pi) int dr/r [2 r^2 (E - V) - lambda^2]^(1/2)` over the classically allowed
//! region, with `nu = n_r + 1/2` and `lambda = l + 1/2`.

mod oscillation;

pub use oscillation::{
    lambda0_coefficient, ltf_oscillation_closed, ltf_oscillation_fourier, ltf_oscillation_integral,
    ltf_oscillation_integral_terms, oscillation_series, poisson_shell_count, poisson_shell_count_resummed,
    stationary_phase_amplitude, OscillationMode, OscillationParams, OscillationSeries,
    LAMBDA0_COEFFICIENT_ROUNDED, OSCILLATION_AMPLITUDE,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{self, QuadTolerance};
use crate::roots::{brent, golden_max};
use crate::tf::TfSolution;
use crate::units::ScaledUnits;

/// A spherically symmetric potential energy, described through `-r V(r)`.
pub trait CentralPotential: Sync {
    /// `-r V(r)`, positive for an attractive potential.
    fn r_times_minus_v(&self, r: f64) -> f64;

    /// A radius typical of the bound region, used to scan for the centrifugal peak.
    fn length_scale(&self) -> f64;
}

/// The neutral TF potential `V = -(Z/r) F(Z^(1/3) r / a)`.
#[derive(Debug, Clone, Copy)]
pub struct TfPotential<'a> {
    sol: &'a TfSolution,
    units: ScaledUnits,
}

impl<'a> TfPotential<'a> {
    pub fn new(sol: &'a TfSolution, z: f64) -> Result<Self> {
        if !sol.is_neutral() {
            return Err(Error::Unsupported(
                "semiclassical quantization uses the neutral TF potential".into(),
            ));
        }
        if !(z > 0.0) {
            return Err(Error::domain(format!("nuclear charge must be positive, got {z}")));
        }
        Ok(Self {
            sol,
            units: ScaledUnits::new(z),
        })
    }
}

impl CentralPotential for TfPotential<'_> {
    fn r_times_minus_v(&self, r: f64) -> f64 {
        self.units.z * self.sol.value(self.units.x_of_r(r))
    }

    fn length_scale(&self) -> f64 {
        self.units.length_scale()
    }
}

/// The bare Coulomb potential `V = -Z/r`.
#[derive(Debug, Clone, Copy)]
pub struct CoulombPotential {
    pub z: f64,
}

impl CentralPotential for CoulombPotential {
    fn r_times_minus_v(&self, _r: f64) -> f64 {
        self.z
    }

    fn length_scale(&self) -> f64 {
        1.0 / self.z
    }
}

/// `2 r^2 (E - V)`, whose square root bounds lambda at radius r.
fn bracket<P: CentralPotential + ?Sized>(pot: &P, e: f64, r: f64) -> f64 {
    2.0 * r * r * e + 2.0 * r * pot.r_times_minus_v(r)
}

/// Radius and value of the maximum of `2 r^2 (E - V)`.
fn peak<P: CentralPotential + ?Sized>(pot: &P, e: f64) -> Result<(f64, f64)> {
    let l = pot.length_scale();
    let (lo, hi) = ((1e-9 * l).ln(), (1e5 * l).ln());
    let n = 700;
    let u = |i: usize| lo + (hi - lo) * i as f64 / n as f64;
    let (mut best, mut best_val) = (0, f64::NEG_INFINITY);
    for i in 0..=n {
        let v = bracket(pot, e, u(i).exp());
        if v > best_val {
            best = i;
            best_val = v;
        }
    }
    if best == n {
        return Err(Error::domain(format!(
            "2 r^2 (E - V) keeps growing at large r for E = {e}; the motion is unbounded"
        )));
    }
    let (a, b) = (u(best.saturating_sub(1)), u(best + 1));
    let (um, vm) = golden_max(|u| bracket(pot, e, u.exp()), a, b, 1e-12);
    Ok((um.exp(), vm))
}

/// Largest lambda with a classically allowed region at energy `e`.
pub fn lambda_max_in<P: CentralPotential + ?Sized>(pot: &P, e: f64) -> Result<f64> {
    Ok(peak(pot, e)?.1.max(0.0).sqrt())
}

/// Result of an action integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionIntegral {
    pub nu: f64,
    /// False when lambda exceeds its maximum at this energy; `nu` is then 0.
    pub allowed: bool,
}

fn quad_tol() -> QuadTolerance {
    QuadTolerance {
        abs: 1e-13,
        rel: 1e-12,
        max_intervals: 50_000,
    }
}

/// Action integral in an arbitrary central potential.
pub fn action_integral<P: CentralPotential + ?Sized>(pot: &P, e: f64, lambda: f64) -> Result<ActionIntegral> {
    if !(lambda >= 0.0) {
        return Err(Error::domain(format!("lambda must be nonnegative, got {lambda}")));
    }
    if e > 0.0 {
        return Err(Error::domain(format!("energy must not be positive, got {e}")));
    }
    let (r_peak, h_peak) = peak(pot, e)?;
    let l2 = lambda * lambda;
    if l2 >= h_peak {
        return Ok(ActionIntegral {
            nu: 0.0,
            allowed: false,
        });
    }
    let g = |r: f64| bracket(pot, e, r) - l2;
    let integrand = |r: f64| g(r).max(0.0).sqrt() / r;
    let tol = quad_tol();

    // outer turning point, or none when the bracket stays above lambda^2 for ever
    let mut r_out = r_peak;
    let mut outer = None;
    for _ in 0..200 {
        r_out *= 2.0;
        if g(r_out) <= 0.0 {
            outer = Some(brent(g, 0.5 * r_out, r_out, 1e-15 * r_out, 300)?);
            break;
        }
        if r_out > 1e12 * pot.length_scale() {
            break;
        }
    }

    let inner = if lambda == 0.0 {
        0.0
    } else {
        // the bracket vanishes at r = 0
        brent(g, 0.0, r_peak, 1e-15 * r_peak, 300)?
    };

    let total = match outer {
        Some(r2) => {
            quad::sqrt_endpoints(integrand, inner, r_peak, &tol)?.value
                + quad::sqrt_endpoints(integrand, r_peak, r2, &tol)?.value
        }
        None => {
            if e < 0.0 {
                return Err(Error::NonConvergence {
                    iterations: 200,
                    message: format!("no outer turning point found for E = {e}, lambda = {lambda}"),
                });
            }
            quad::sqrt_endpoints(integrand, inner, r_peak, &tol)?.value
                + quad::semi_infinite(integrand, r_peak, &tol)?.value
        }
    };
    Ok(ActionIntegral {
        nu: total / std::f64::consts::PI,
        allowed: true,
    })
}

/// `nu(E, lambda)` in the neutral TF potential of nuclear charge `z`.
pub fn nu_of(sol: &TfSolution, z: f64, e: f64, lambda: f64) -> Result<ActionIntegral> {
    action_integral(&TfPotential::new(sol, z)?, e, lambda)
}

/// `max_r [2 r^2 (E - V)]^(1/2)` in the neutral TF potential.
pub fn lambda_max(sol: &TfSolution, z: f64, e: f64) -> Result<f64> {
    lambda_max_in(&TfPotential::new(sol, z)?, e)
}

/// Sampled `nu`-versus-`lambda` curve at fixed energy.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuantCurve {
    pub z: f64,
    pub e: f64,
    /// `(lambda, nu)` pairs, ending with `(lambda_max, 0)`.
    pub samples: Vec<(f64, f64)>,
    pub lambda_max: f64,
}

/// `nu(E, lambda)` at the grid values below `lambda_max`, closed by the point `(lambda_max, 0)`.
pub fn degeneracy_curve(sol: &TfSolution, z: f64, e: f64, lambda_grid: &[f64]) -> Result<QuantCurve> {
    let pot = TfPotential::new(sol, z)?;
    let lmax = lambda_max_in(&pot, e)?;
    let mut samples = Vec::with_capacity(lambda_grid.len() + 1);
    for &lambda in lambda_grid.iter().filter(|&&l| l < lmax) {
        samples.push((lambda, action_integral(&pot, e, lambda)?.nu));
    }
    samples.push((lmax, 0.0));
    Ok(QuantCurve {
        z,
        e,
        samples,
        lambda_max: lmax,
    })
}

/// An orbital labelled by angular and radial quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct QuantState {
    pub l: u32,
    pub nr: u32,
}

impl QuantState {
    pub fn lambda(&self) -> f64 {
        self.l as f64 + 0.5
    }

    pub fn nu(&self) -> f64 {
        self.nr as f64 + 0.5
    }

    /// Principal quantum number `n = n_r + l + 1`.
    pub fn principal(&self) -> u32 {
        self.nr + self.l + 1
    }

    /// Spectroscopic label such as `4f`.
    pub fn label(&self) -> String {
        const LETTERS: &[u8] = b"spdfghiklmnoqrtuv";
        let letter = LETTERS.get(self.l as usize).map(|&c| c as char).unwrap_or('?');
        format!("{}{}", self.principal(), letter)
    }
}

/// States below the zero-energy curve: every `(l, n_r)` with `n_r + 1/2 < nu(0, l + 1/2)`.
pub fn predict_occupied(sol: &TfSolution, z: f64) -> Result<Vec<QuantState>> {
    let pot = TfPotential::new(sol, z)?;
    let mut states = Vec::new();
    for l in 0.. {
        let ai = action_integral(&pot, 0.0, l as f64 + 0.5)?;
        if !ai.allowed {
            break;
        }
        let mut nr = 0;
        while nr as f64 + 0.5 < ai.nu {
            states.push(QuantState { l, nr });
            nr += 1;
        }
        if nr == 0 {
            break;
        }
    }
    Ok(states)
}
