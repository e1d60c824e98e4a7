//! Quadrature rules: fixed Gauss-Legendre, globally adaptive Gauss-Kronrod, and
//! substitutions for square-root endpoints and semi-infinite ranges.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// A fixed Gauss-Legendre rule, reusable across many intervals.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let (nodes, weights) = gauss_legendre(n);
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights for the odd Kronrod nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(mid - dx) + f(mid + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

/// Tolerances for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadTolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for QuadTolerance {
    fn default() -> Self {
        Self {
            abs: 1e-14,
            rel: 1e-12,
            max_intervals: 20_000,
        }
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

/// Globally adaptive G7K15 integration over the consecutive panels given by `breaks`.
pub fn adaptive_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    breaks: &[f64],
    tol: &QuadTolerance,
) -> Result<Integral> {
    assert!(breaks.len() >= 2);
    let mut intervals: Vec<(f64, f64, f64, f64)> = breaks
        .windows(2)
        .filter(|w| w[1] != w[0])
        .map(|w| {
            let (v, e) = gk15(&mut f, w[0], w[1]);
            (w[0], w[1], v, e)
        })
        .collect();
    let span = (breaks[breaks.len() - 1] - breaks[0]).abs();
    loop {
        let value: f64 = intervals.iter().map(|iv| iv.2).sum();
        let error: f64 = intervals.iter().map(|iv| iv.3).sum();
        if error <= tol.abs.max(tol.rel * value.abs()) {
            return Ok(Integral { value, error });
        }
        if intervals.len() >= tol.max_intervals {
            return Err(Error::NonConvergence {
                iterations: intervals.len(),
                message: format!("adaptive quadrature: error estimate {error:e} for value {value:e}"),
            });
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .filter(|(_, iv)| (iv.1 - iv.0).abs() > 1e-15 * span)
            .fold((usize::MAX, -1.0), |best, (i, iv)| {
                if iv.3 > best.1 {
                    (i, iv.3)
                } else {
                    best
                }
            });
        if worst == usize::MAX {
            // nothing left to split at this resolution
            return Ok(Integral { value, error });
        }
        let (a, b, _, _) = intervals.swap_remove(worst);
        let m = 0.5 * (a + b);
        let (v1, e1) = gk15(&mut f, a, m);
        let (v2, e2) = gk15(&mut f, m, b);
        intervals.push((a, m, v1, e1));
        intervals.push((m, b, v2, e2));
    }
}

pub fn adaptive<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, tol: &QuadTolerance) -> Result<Integral> {
    adaptive_panels(f, &[a, b], tol)
}

/// Integrates `f` over `[a, b]` when `f` behaves like `sqrt` (or `1/sqrt`) at the endpoints.
///
/// Uses `r = a + (b - a) sin^2(theta/2)`, `theta` in `[0, pi]`; the Jacobian
/// `(b - a) sin(theta/2) cos(theta/2)` absorbs the square-root behaviour at both ends.
pub fn sqrt_endpoints<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: &QuadTolerance,
) -> Result<Integral> {
    let len = b - a;
    adaptive(
        |theta| {
            let (s, c) = (0.5 * theta).sin_cos();
            let jac = len * s * c;
            if jac == 0.0 {
                return 0.0;
            }
            f(a + len * s * s) * jac
        },
        0.0,
        PI,
        tol,
    )
}

/// Integrates `f` over `[a, inf)` with `r = a / u`; `f` must decay at least like `1/r^2`.
pub fn semi_infinite<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: &QuadTolerance) -> Result<Integral> {
    assert!(a > 0.0);
    adaptive(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            let r = a / u;
            f(r) * a / (u * u)
        },
        0.0,
        1.0,
        tol,
    )
}
