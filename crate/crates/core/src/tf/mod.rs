//! The scaled Thomas-Fermi boundary-value problem
//! `F'' = F^(3/2) / sqrt(x)`, `F(0) = 1`, solved by shooting on the initial slope.
//!
//! Integration runs in `t = sqrt(x)`, where the system
//! `dF/dt = 2 t P`, `dP/dt = 2 F^(3/2)` (with `P = F'`) is regular at the origin,
//! so no series start is needed.

mod fields;
mod solution;

pub use fields::{density, potential, validity_parameter, Density};
pub use solution::{tail_correction_exponent, Evaluation, TfSolution, TAIL_COEFFICIENT};

use crate::error::{Error, Result};
use crate::ode::{self, Control, Dopri5Options};
use crate::roots::brent;

/// Ionization degree and shooting tolerance of a solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TfBoundarySpec {
    pub q: f64,
    pub tol: f64,
}

impl TfBoundarySpec {
    pub fn new(q: f64, tol: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::domain(format!("ionization degree must lie in [0, 1], got {q}")));
        }
        if !(tol > 0.0) {
            return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
        }
        Ok(Self { q, tol })
    }
}

/// Numerical knobs of the shooting solver.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    /// End of the stored neutral grid; beyond it the asymptotic tail is used.
    pub x_max: f64,
    /// How far a trial trajectory is followed before it is declared undecided.
    pub x_decide: f64,
    /// Initial bracket for the neutral slope.
    pub bracket: (f64, f64),
    /// Bracket width at which bisection stops even when `tol` is looser. Slopes
    /// that close to the separatrix keep the trajectory valid out to `x_max`.
    pub resolution: f64,
    pub max_iterations: usize,
    /// Largest node spacing of the stored grid, in `t = sqrt(x)`.
    pub h_max: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            x_max: 50.0,
            x_decide: 1000.0,
            bracket: (1.5, 1.7),
            resolution: 1e-13,
            max_iterations: 200,
            h_max: 0.1,
            rtol: 1e-12,
            atol: 1e-14,
        }
    }
}

impl SolverConfig {
    fn ode_options(&self, h_max: f64) -> Dopri5Options {
        Dopri5Options {
            rtol: self.rtol,
            atol: self.atol,
            // a first node too close to the origin amplifies rounding in the residual
            h_init: 0.02f64.min(h_max),
            h_max,
            ..Default::default()
        }
    }
}

/// Fate of a trial trajectory `F(0) = 1, F'(0) = -b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShotOutcome {
    /// Slope too steep: F reaches zero at `x` with slope `fp` there.
    CrossesZero { x: f64, fp: f64 },
    /// Slope too shallow: F' turns positive at `x` and F grows without bound.
    TurnsUp { x: f64 },
    /// Neither happened before `x_decide`.
    Undecided,
}

fn rhs(t: f64, y: &[f64; 2]) -> [f64; 2] {
    let f = y[0].max(0.0);
    [2.0 * t * y[1], 2.0 * f * f.sqrt()]
}

/// Follows a trial slope until it is classified.
pub fn shoot(b: f64, config: &SolverConfig) -> Result<ShotOutcome> {
    let opts = config.ode_options(f64::INFINITY);
    let traj = ode::integrate(&rhs, 0.0, [1.0, -b], config.x_decide.sqrt(), &opts, |_, y| {
        if y[0] < 0.0 || y[1] > 0.0 {
            Control::Stop
        } else {
            Control::Continue
        }
    })?;
    if !traj.stopped {
        return Ok(ShotOutcome::Undecided);
    }
    let n = traj.t.len();
    let (t1, y1) = traj.last();
    if y1[0] < 0.0 {
        let (t0, y0) = (traj.t[n - 2], traj.y[n - 2]);
        let (t, y) = locate_zero(t0, y0, t1 - t0)?;
        Ok(ShotOutcome::CrossesZero { x: t * t, fp: y[1] })
    } else {
        Ok(ShotOutcome::TurnsUp { x: t1 * t1 })
    }
}

/// Finds where F vanishes within one step from `(t0, y0)` of length `h`.
fn locate_zero(t0: f64, y0: [f64; 2], h: f64) -> Result<(f64, [f64; 2])> {
    let step = |s: f64| ode::dopri_step(&rhs, t0, &y0, s).0;
    let s = brent(|s| step(s)[0], 0.0, h, 1e-15 * (t0 + h), 200)?;
    let mut y = step(s);
    y[0] = 0.0;
    Ok((t0 + s, y))
}

/// Bisects the neutral initial slope until the bracket is narrower than `width`.
fn bracket_neutral_slope(width: f64, config: &SolverConfig) -> Result<(f64, f64)> {
    let (mut lo, mut hi) = config.bracket;
    let mut iterations = 0;
    for _ in 0..20 {
        let lo_ok = !matches!(shoot(lo, config)?, ShotOutcome::CrossesZero { .. });
        let hi_ok = !matches!(shoot(hi, config)?, ShotOutcome::TurnsUp { .. });
        iterations += 2;
        if lo_ok && hi_ok {
            break;
        }
        let w = hi - lo;
        if !lo_ok {
            lo -= w;
        }
        if !hi_ok {
            hi += w;
        }
    }
    while hi - lo > width {
        if iterations >= config.max_iterations {
            return Err(Error::NonConvergence {
                iterations,
                message: format!("initial slope still bracketed by [{lo:.17}, {hi:.17}]"),
            });
        }
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match shoot(mid, config)? {
            ShotOutcome::CrossesZero { .. } => hi = mid,
            ShotOutcome::TurnsUp { .. } => lo = mid,
            ShotOutcome::Undecided => return Ok((mid, mid)),
        }
    }
    Ok((lo, hi))
}

/// Integrates a trial slope to `t_end`, storing nodes no further apart than `config.h_max`.
fn trajectory(b: f64, t_end: f64, config: &SolverConfig) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let traj = ode::integrate(&rhs, 0.0, [1.0, -b], t_end, &config.ode_options(config.h_max), |_, _| {
        Control::Continue
    })?;
    let f = traj.y.iter().map(|y| y[0]).collect();
    let fp = traj.y.iter().map(|y| y[1]).collect();
    Ok((traj.t, f, fp))
}

/// Recomputes node values by integrating node to node, so that neighbouring nodes are
/// consistent to rounding even on very short intervals.
fn integrate_through(t: &[f64], y0: [f64; 2], config: &SolverConfig) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut f = Vec::with_capacity(t.len());
    let mut fp = Vec::with_capacity(t.len());
    let mut y = y0;
    f.push(y[0]);
    fp.push(y[1]);
    for w in t.windows(2) {
        let opts = config.ode_options(w[1] - w[0]);
        y = ode::integrate(&rhs, w[0], y, w[1], &opts, |_, _| Control::Continue)?.last().1;
        f.push(y[0]);
        fp.push(y[1]);
    }
    Ok((f, fp))
}

/// Splits grid intervals whose midpoint residual exceeds `10 tol` and re-integrates.
/// Near the edge of an ion F^(3/2) is not smooth, so several levels of local
/// refinement are needed there.
fn refine(sol: TfSolution, tol: f64, config: &SolverConfig) -> Result<TfSolution> {
    let target = 10.0 * tol;
    let (b, q, x0) = (sol.b(), sol.q(), sol.x0());
    let mut sol = sol;
    for _ in 0..60 {
        let res = sol.interval_residuals();
        if res.iter().all(|&r| r <= target) {
            break;
        }
        let t = sol.into_nodes().0;
        let mut nt = Vec::with_capacity(t.len() * 2);
        let mut split = false;
        for i in 0..t.len() {
            nt.push(t[i]);
            if i + 1 < t.len() && res[i] > target {
                let h = 0.5 * (t[i + 1] - t[i]);
                // below this width rounding, not truncation, dominates the residual
                if h > 1e-9 * t[i + 1] {
                    nt.push(t[i] + h);
                    split = true;
                }
            }
        }
        let (mut f, fp) = integrate_through(&nt, [1.0, -b], config)?;
        if q != 0.0 {
            let last = f.len() - 1;
            f[last] = 0.0;
        }
        sol = TfSolution::from_nodes(nt, f, fp, b, q, x0);
        if !split {
            break;
        }
    }
    Ok(sol)
}

/// Solves the neutral atom with the default configuration.
pub fn solve_neutral(tol: f64) -> Result<TfSolution> {
    solve_neutral_with(tol, &SolverConfig::default())
}

pub fn solve_neutral_with(tol: f64, config: &SolverConfig) -> Result<TfSolution> {
    if !(tol > 0.0 && tol <= 1e-3) {
        return Err(Error::domain(format!("tolerance must lie in (0, 1e-3], got {tol}")));
    }
    if !(config.x_max > 0.0 && config.x_max < config.x_decide) {
        return Err(Error::domain(format!(
            "x_max must be positive and below the classification distance {}, got {}",
            config.x_decide, config.x_max
        )));
    }
    let (lo, hi) = bracket_neutral_slope(tol.min(config.resolution), config)?;
    let b = 0.5 * (lo + hi);
    let (t, f, fp) = trajectory(b, config.x_max.sqrt(), config)?;
    if let Some(i) = (0..t.len()).find(|&i| f[i] <= 0.0 || fp[i] >= 0.0) {
        return Err(Error::NonConvergence {
            iterations: config.max_iterations,
            message: format!(
                "slope {b:.17} leaves the decaying branch at x = {}; lower x_max",
                t[i] * t[i]
            ),
        });
    }
    refine(TfSolution::from_nodes(t, f, fp, b, 0.0, f64::INFINITY), tol, config)
}

/// Solves a positive ion (or the neutral atom when `q = 0`).
pub fn solve_ion(spec: TfBoundarySpec) -> Result<TfSolution> {
    solve_ion_with(spec, &SolverConfig::default())
}

pub fn solve_ion_with(spec: TfBoundarySpec, config: &SolverConfig) -> Result<TfSolution> {
    let TfBoundarySpec { q, tol } = TfBoundarySpec::new(spec.q, spec.tol)?;
    if q == 0.0 {
        return solve_neutral_with(tol, config);
    }
    if q == 1.0 {
        return Err(Error::domain(
            "q = 1 is a bare nucleus: there is no electron cloud and the edge radius collapses to 0",
        ));
    }
    let (b_neutral, _) = bracket_neutral_slope(config.resolution, config)?;
    let charge = |b: f64| -> Result<(f64, f64)> {
        match shoot(b, config)? {
            ShotOutcome::CrossesZero { x, fp } => Ok((-x * fp, x)),
            _ => Ok((0.0, f64::INFINITY)),
        }
    };
    let mut delta = 0.05;
    let mut hi = b_neutral + delta;
    let mut iterations = 0;
    while charge(hi)?.0 < q {
        iterations += 1;
        if iterations > 60 {
            return Err(Error::NonConvergence {
                iterations,
                message: format!("no slope above {b_neutral} reaches charge {q}"),
            });
        }
        delta *= 2.0;
        hi = b_neutral + delta;
    }
    let mut failure = None;
    let b = brent(
        |b| match charge(b) {
            Ok((qb, _)) => qb - q,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        b_neutral,
        hi,
        1e-15,
        config.max_iterations,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    let (q_b, x0) = charge(b)?;
    // for weak ionization q(B) is so steep that neighbouring doubles straddle the target
    let db = 4.0 * f64::EPSILON * b;
    let resolved = (q_b - q).abs() <= tol || (charge(b - db)?.0 - q) * (charge(b + db)?.0 - q) <= 0.0;
    if !resolved {
        return Err(Error::NonConvergence {
            iterations: config.max_iterations,
            message: format!("charge condition off by {:e} at slope {b:.17}", q_b - q),
        });
    }
    let (t, mut f, fp) = trajectory(b, x0.sqrt(), config)?;
    let last = f.len() - 1;
    f[last] = 0.0;
    refine(TfSolution::from_nodes(t, f, fp, b, q, x0), tol, config)
}
