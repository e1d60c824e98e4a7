//! Leading shell oscillation of the binding energy from angular-momentum quantization.
//!
//! All values here are oscillations of the binding energy `-E`:
//! `E_osc = -A Z^(4/3) sum_k (-1)^k sin(2 pi k lambda0) / (pi k)^3`, with
//! `lambda0 = max_r [2 r^2 (-V)]^(1/2)` proportional to `Z^(1/3)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quad::{self, QuadTolerance};
use crate::roots::golden_max;
use crate::tf::TfSolution;
use crate::units::tf_length_constant;

/// Amplitude constant of the stationary-phase result, `E_osc ~ A Z^(4/3)`.
pub const OSCILLATION_AMPLITUDE: f64 = 0.4805;

/// Rounded value of `lambda0 / Z^(1/3)`, for reproducing the published curve exactly.
pub const LAMBDA0_COEFFICIENT_ROUNDED: f64 = 0.928;

/// Position and value of the maximum of `g(x) = x F(x)`.
fn g_peak(sol: &TfSolution) -> (f64, f64) {
    golden_max(|x| x * sol.value(x), 0.5, 10.0, 1e-12)
}

/// `lambda0 / Z^(1/3) = sqrt(2 a max_x x F(x))`.
pub fn lambda0_coefficient(sol: &TfSolution) -> Result<f64> {
    if !sol.is_neutral() {
        return Err(Error::Unsupported("lambda0 is defined for the neutral atom".into()));
    }
    let (_, gm) = g_peak(sol);
    Ok((2.0 * tf_length_constant() * gm).sqrt())
}

/// Stationary-phase amplitude `A` computed from the solved F, for comparison with
/// [`OSCILLATION_AMPLITUDE`].
///
/// With `g = x F`, `g'' = 2 F' + sqrt(x) F^(3/2)` at the maximum `x_m`:
/// `A = a^-2 (2a)^(5/4) x_m^-3 g_m^(5/4) [2 sqrt(g_m) / (sqrt(2a) |g''|)]^(1/2)`.
pub fn stationary_phase_amplitude(sol: &TfSolution) -> Result<f64> {
    if !sol.is_neutral() {
        return Err(Error::Unsupported("the amplitude is defined for the neutral atom".into()));
    }
    let a = tf_length_constant();
    let (xm, gm) = g_peak(sol);
    let ev = sol.eval_unchecked(xm);
    let g2 = (2.0 * ev.fp + xm.sqrt() * ev.f * ev.f.sqrt()).abs();
    Ok((2.0 * a).powf(1.25) / (a * a) * xm.powi(-3) * gm.powf(1.25)
        * (2.0 * gm.sqrt() / ((2.0 * a).sqrt() * g2)).sqrt())
}

/// Amplitude and `lambda0` coefficient used by the fast evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OscillationParams {
    pub amplitude: f64,
    pub lambda0_coeff: f64,
}

impl OscillationParams {
    /// Rounded published constants.
    pub fn pinned() -> Self {
        Self {
            amplitude: OSCILLATION_AMPLITUDE,
            lambda0_coeff: LAMBDA0_COEFFICIENT_ROUNDED,
        }
    }

    /// `lambda0` from the solved F; amplitude from [`OSCILLATION_AMPLITUDE`].
    pub fn from_solution(sol: &TfSolution) -> Result<Self> {
        Ok(Self {
            amplitude: OSCILLATION_AMPLITUDE,
            lambda0_coeff: lambda0_coefficient(sol)?,
        })
    }

    pub fn lambda0(&self, z: f64) -> f64 {
        self.lambda0_coeff * z.cbrt()
    }
}

/// Fourier series truncated after `k_max` terms.
pub fn ltf_oscillation_fourier(z: f64, k_max: u32, params: &OscillationParams) -> f64 {
    let l0 = params.lambda0(z);
    // reduce lambda0 first so large k does not lose the phase
    let u = l0 - l0.round();
    let sum: f64 = (1..=k_max)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let k = k as f64;
            sign * (2.0 * PI * k * u).sin() / (PI * k).powi(3)
        })
        .sum();
    -params.amplitude * z.powf(4.0 / 3.0) * sum
}

/// Exact resummation: `sum_k (-1)^k sin(k theta)/k^3 = theta (theta^2 - pi^2)/12` on
/// `[-pi, pi]`, so the oscillation is a periodically repeated cubic in `lambda0`.
pub fn ltf_oscillation_closed(z: f64, params: &OscillationParams) -> f64 {
    let l0 = params.lambda0(z);
    let theta = 2.0 * PI * (l0 - l0.round());
    -params.amplitude * z.powf(4.0 / 3.0) / PI.powi(3) * theta * (theta * theta - PI * PI) / 12.0
}

/// Smooth step: 0 at `s <= 0`, 1 at `s >= 1`, infinitely differentiable.
fn smooth_step(s: f64) -> f64 {
    let phi = |t: f64| if t <= 0.0 { 0.0 } else { (-1.0 / t).exp() };
    let (p, q) = (phi(s), phi(1.0 - s));
    p / (p + q)
}

/// Window in `ln(x / x_m)`: 1 within a factor 4 of the peak, 0 beyond a factor 8.
fn window(t: f64) -> f64 {
    let (t1, t2) = (4f64.ln(), 8f64.ln());
    smooth_step((t2 - t.abs()) / (t2 - t1))
}

/// Individual `k` terms of the oscillation integral (binding-energy convention).
///
/// Each term is
/// `(1/pi^3) (-1)^(k-1) k^(-5/2) int dr/r^3 [2r^2(-V)]^(5/4) cos(2 pi k [2r^2(-V)]^(1/2) - pi/4)`,
/// restricted by a smooth window to a neighbourhood of the stationary point. The large-z
/// form of the angular integral it is built on fails near the nucleus, where the
/// unwindowed radial integral diverges like `r^(-7/4)`.
pub fn ltf_oscillation_integral_terms(sol: &TfSolution, z: f64, k_max: u32) -> Result<Vec<f64>> {
    if !sol.is_neutral() {
        return Err(Error::Unsupported("the oscillation integral uses the neutral TF potential".into()));
    }
    if k_max == 0 {
        return Err(Error::domain("at least one Fourier term is required"));
    }
    let a = tf_length_constant();
    let (xm, _) = g_peak(sol);
    let z23 = z.powf(2.0 / 3.0);
    let scale = z.powf(4.0 / 3.0);
    let tol = QuadTolerance {
        abs: 1e-12 * scale,
        rel: 1e-10,
        max_intervals: 200_000,
    };
    let (t_lo, t_hi) = (-8f64.ln(), 8f64.ln());
    let breaks: Vec<f64> = (0..=64).map(|i| t_lo + (t_hi - t_lo) * i as f64 / 64.0).collect();
    let mut terms = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let kf = k as f64;
        let integral = quad::adaptive_panels(
            |t| {
                let x = xm * t.exp();
                let w = 2.0 * a * z23 * x * sol.value(x);
                // dr / r^3 = (Z^(2/3) / a^2) dx / x^3 and dx = x dt
                w.powf(1.25) * (2.0 * PI * kf * w.sqrt() - 0.25 * PI).cos() * window(t) / (x * x)
            },
            &breaks,
            &tol,
        )?
        .value
            * z23
            / (a * a);
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        terms.push(sign * kf.powf(-2.5) * integral / PI.powi(3));
    }
    Ok(terms)
}

/// Sum of [`ltf_oscillation_integral_terms`].
pub fn ltf_oscillation_integral(sol: &TfSolution, z: f64, k_max: u32) -> Result<f64> {
    Ok(ltf_oscillation_integral_terms(sol, z, k_max)?.iter().sum())
}

/// How a series is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OscillationMode {
    Closed,
    Fourier(u32),
}

/// Oscillation values on a grid of `Z^(1/3)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OscillationSeries {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub mode: OscillationMode,
    pub lambda0_coeff: f64,
    pub amplitude: f64,
}

impl OscillationSeries {
    /// Values divided by `Z^(4/3)`.
    pub fn scaled_values(&self) -> Vec<f64> {
        self.grid
            .iter()
            .zip(&self.values)
            .map(|(c, v)| v / c.powi(4))
            .collect()
    }

    /// Linear interpolation of the scaled values at `zcube`; `None` outside the grid.
    pub fn scaled_at(&self, zcube: f64) -> Option<f64> {
        let i = self.grid.partition_point(|&g| g <= zcube);
        if i == 0 || (i == self.grid.len() && zcube > self.grid[i - 1]) {
            return None;
        }
        let i = i.min(self.grid.len() - 1);
        let (g0, g1) = (self.grid[i - 1], self.grid[i]);
        let s = |j: usize| self.values[j] / self.grid[j].powi(4);
        if g1 == g0 {
            return Some(s(i));
        }
        let w = (zcube - g0) / (g1 - g0);
        Some(s(i - 1) * (1.0 - w) + s(i) * w)
    }
}

/// Evaluates the oscillation at each `Z^(1/3)` in `grid`.
pub fn oscillation_series(grid: &[f64], params: &OscillationParams, mode: OscillationMode) -> OscillationSeries {
    let values = grid
        .iter()
        .map(|&c| {
            let z = c * c * c;
            match mode {
                OscillationMode::Closed => ltf_oscillation_closed(z, params),
                OscillationMode::Fourier(k) => ltf_oscillation_fourier(z, k, params),
            }
        })
        .collect();
    OscillationSeries {
        grid: grid.to_vec(),
        values,
        mode,
        lambda0_coeff: params.lambda0_coeff,
        amplitude: params.amplitude,
    }
}

/// `sum_{l + 1/2 < cut} 2(2l + 1)` written as a Poisson sum over `k`, truncated at `k_max`:
/// `2 cut^2 + 8 sum_k (-1)^k [cut sin(2 pi k cut)/(2 pi k) + (cos(2 pi k cut) - 1)/(2 pi k)^2]`.
pub fn poisson_shell_count(cut: f64, k_max: u32) -> f64 {
    let osc: f64 = (1..=k_max)
        .map(|k| {
            let w = 2.0 * PI * k as f64;
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * (cut * (w * cut).sin() / w + ((w * cut).cos() - 1.0) / (w * w))
        })
        .sum();
    2.0 * cut * cut + 8.0 * osc
}

/// The Poisson sum of [`poisson_shell_count`] with the `k` series summed in closed form.
pub fn poisson_shell_count_resummed(cut: f64) -> f64 {
    let u = cut - cut.round();
    let theta = 2.0 * PI * u;
    // sum (-1)^k sin(k theta)/k = -theta/2, sum (-1)^k (cos(k theta) - 1)/k^2 = theta^2/4
    let s1 = -0.5 * theta;
    let s2 = 0.25 * theta * theta;
    2.0 * cut * cut + 8.0 * (cut * s1 / (2.0 * PI) + s2 / (4.0 * PI * PI))
}
