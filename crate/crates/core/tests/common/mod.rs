//! Independent reference integrators for the TF equation.
//!
//! Both work in `u = ln x` with `y = (F, x F')`, start from the small-x series at
//! `x = 1e-6`, and share no code with the library solver.

#![allow(dead_code)]

pub const X_START: f64 = 1e-6;

/// `F = 1 - Bx + (4/3) x^(3/2) - (2B/5) x^(5/2) + x^3/3` and `x F'`.
pub fn series_start(b: f64) -> [f64; 2] {
    let x = X_START;
    let s = x.sqrt();
    let f = 1.0 - b * x + 4.0 / 3.0 * x * s - 0.4 * b * x * x * s + x * x * x / 3.0;
    let fp = -b + 2.0 * s - b * x * s + x * x;
    [f, x * fp]
}

fn rhs(u: f64, y: [f64; 2]) -> [f64; 2] {
    let f = y[0].max(0.0);
    [y[1], y[1] + (1.5 * u).exp() * f * f.sqrt()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shot {
    /// F reached zero: slope too steep.
    Crosses,
    /// F' turned positive: slope too shallow.
    TurnsUp,
    Undecided,
}

/// Classical fixed-step RK4 shot up to `x_end`.
pub fn rk4_shot(b: f64, h: f64, x_end: f64) -> Shot {
    let mut u = X_START.ln();
    let u_end = x_end.ln();
    let mut y = series_start(b);
    while u < u_end {
        let k1 = rhs(u, y);
        let k2 = rhs(u + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs(u + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs(u + h, [y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        u += h;
        if y[0] < 0.0 {
            return Shot::Crosses;
        }
        if y[1] > 0.0 {
            return Shot::TurnsUp;
        }
    }
    Shot::Undecided
}

/// Bisection on the initial slope with RK4 shots of step `h`.
pub fn rk4_slope(h: f64, x_end: f64) -> f64 {
    let (mut lo, mut hi) = (1.5, 1.7);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match rk4_shot(mid, h, x_end) {
            Shot::Crosses => hi = mid,
            Shot::TurnsUp => lo = mid,
            Shot::Undecided => return mid,
        }
    }
    0.5 * (lo + hi)
}

/// RK4 slopes at `h` and `h/2`, combined by Richardson extrapolation (order 4).
pub fn reference_slope() -> f64 {
    let h = 0.004;
    let coarse = rk4_slope(h, 200.0);
    let fine = rk4_slope(0.5 * h, 200.0);
    (16.0 * fine - coarse) / 15.0
}

/// One implicit-midpoint step, the stage solved by Newton's method.
fn midpoint_step(u: f64, y: [f64; 2], h: f64) -> [f64; 2] {
    let um = u + 0.5 * h;
    let w = (1.5 * um).exp();
    let mut z = y;
    for _ in 0..50 {
        let m = [0.5 * (y[0] + z[0]), 0.5 * (y[1] + z[1])];
        let f = m[0].max(0.0);
        let g = [
            z[0] - y[0] - h * m[1],
            z[1] - y[1] - h * (m[1] + w * f * f.sqrt()),
        ];
        // Jacobian of g with respect to z
        let j = [
            [1.0, -0.5 * h],
            [-0.75 * h * w * f.sqrt(), 1.0 - 0.5 * h],
        ];
        let det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        let dz = [
            (g[0] * j[1][1] - g[1] * j[0][1]) / det,
            (g[1] * j[0][0] - g[0] * j[1][0]) / det,
        ];
        z = [z[0] - dz[0], z[1] - dz[1]];
        if dz[0].abs() + dz[1].abs() < 1e-15 {
            break;
        }
    }
    z
}

/// Edge `x0` and charge `q = -x0 F'(x0)` for slope `b`, by implicit midpoint steps
/// and a cubic Hermite interpolant at the sign change of F.
pub fn midpoint_edge(b: f64, h: f64) -> Option<(f64, f64)> {
    let mut u = X_START.ln();
    let mut y = series_start(b);
    while u < 200f64.ln() {
        let z = midpoint_step(u, y, h);
        if z[0] <= 0.0 {
            // Hermite cubic in s in [0, 1] for F, with dF/du = y[1]
            let p = |s: f64| {
                let (h00, h10, h01, h11) = (
                    2.0 * s.powi(3) - 3.0 * s * s + 1.0,
                    s.powi(3) - 2.0 * s * s + s,
                    -2.0 * s.powi(3) + 3.0 * s * s,
                    s.powi(3) - s * s,
                );
                h00 * y[0] + h10 * h * y[1] + h01 * z[0] + h11 * h * z[1]
            };
            let (mut lo, mut hi) = (0.0, 1.0);
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if p(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let s = 0.5 * (lo + hi);
            let x0 = (u + s * h).exp();
            let y2 = y[1] + s * (z[1] - y[1]);
            return Some((x0, -y2));
        }
        if z[1] > 0.0 {
            return None;
        }
        u += h;
        y = z;
    }
    None
}

/// Edge of the ion with charge fraction `q`, by bisection on the slope.
pub fn midpoint_ion_edge(q: f64, h: f64) -> f64 {
    let (mut lo, mut hi) = (1.58, 3.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match midpoint_edge(mid, h) {
            Some((_, qm)) if qm > q => hi = mid,
            _ => lo = mid,
        }
    }
    midpoint_edge(0.5 * (lo + hi), h).expect("edge").0
}

/// Implicit-midpoint edges at `h` and `h/2`, Richardson-extrapolated (order 2).
pub fn reference_ion_edge(q: f64) -> f64 {
    let h = 0.002;
    let coarse = midpoint_ion_edge(q, h);
    let fine = midpoint_ion_edge(q, 0.5 * h);
    (4.0 * fine - coarse) / 3.0
}
