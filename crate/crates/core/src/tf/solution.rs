use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::format::{fmt_sig, SIGNIFICANT_DIGITS};
use crate::quad::{self, GaussLegendre, QuadTolerance};

/// Coefficient of the exact large-x solution `F = C / x^3` (12 C = C^(3/2)).
pub const TAIL_COEFFICIENT: f64 = 144.0;

/// Exponent of the leading correction to the power-law tail:
/// `F = 144/x^3 (1 - c x^(-kappa) + ...)` with `kappa = (sqrt(73) - 7)/2`.
pub fn tail_correction_exponent() -> f64 {
    (73f64.sqrt() - 7.0) / 2.0
}

/// Large-x continuation of a neutral solution, matched to the last grid node.
///
/// Uses `F(x) = 144/x^3 (1 + (s/x)^kappa)^(-3/kappa)`, which has the exact asymptote
/// and the exact exponent of the leading correction. When the match value already
/// exceeds the asymptote a bare `C/x^3` is used instead.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Tail {
    Sommerfeld { s: f64, kappa: f64 },
    Power { c: f64 },
}

impl Tail {
    fn matched(x: f64, f: f64) -> Self {
        let kappa = tail_correction_exponent();
        let ratio = TAIL_COEFFICIENT / (x * x * x * f);
        if ratio > 1.0 && f > 0.0 {
            let s = x * (ratio.powf(kappa / 3.0) - 1.0).powf(1.0 / kappa);
            Tail::Sommerfeld { s, kappa }
        } else {
            Tail::Power { c: x * x * x * f }
        }
    }

    fn value(&self, x: f64) -> (f64, f64) {
        match *self {
            Tail::Sommerfeld { s, kappa } => {
                let g = (s / x).powf(kappa);
                let f = TAIL_COEFFICIENT / (x * x * x) * (1.0 + g).powf(-3.0 / kappa);
                (f, -3.0 * f / (x * (1.0 + g)))
            }
            Tail::Power { c } => {
                let f = c / (x * x * x);
                (f, -3.0 * f / x)
            }
        }
    }
}

/// F(x) and F'(x) at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub f: f64,
    pub fp: f64,
    /// False beyond the edge of an ion, where the returned slope is the one at the edge.
    pub in_support: bool,
}

/// A solved scaled Thomas-Fermi function on a grid `0 = x_0 < x_1 < ...`.
///
/// For a neutral atom the grid ends at the configured cutoff and values beyond it come
/// from a matched asymptotic tail; for an ion the last node is the edge `x0` where F = 0.
#[derive(Debug, Clone, PartialEq)]
pub struct TfSolution {
    grid: Vec<f64>,
    t: Vec<f64>,
    f: Vec<f64>,
    fp: Vec<f64>,
    b: f64,
    x0: f64,
    q: f64,
    err: f64,
    tail: Option<Tail>,
}

fn node_f_derivs(t: f64, f: f64, p: f64) -> [f64; 3] {
    let fp = f.max(0.0);
    [f, 2.0 * t * p, 2.0 * p + 4.0 * t * fp * fp.sqrt()]
}

fn node_p_derivs(t: f64, f: f64, p: f64) -> [f64; 3] {
    let fp = f.max(0.0);
    [p, 2.0 * fp * fp.sqrt(), 6.0 * t * fp.sqrt() * p]
}

/// Quintic Hermite interpolation on one interval; returns value and d/dt.
fn hermite5(s: f64, h: f64, y0: [f64; 3], y1: [f64; 3]) -> (f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    let s4 = s3 * s;
    let s5 = s4 * s;
    let h1 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    let h2 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    let h3 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    let h4 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    let h5 = 0.5 * (s3 - 2.0 * s4 + s5);
    let d1 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    let d2 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
    let d3 = 30.0 * s2 - 60.0 * s3 + 30.0 * s4;
    let d4 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    let d5 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);
    // h0 = 1 - h3 and d0 = -d3: using the node difference avoids cancellation on short intervals
    let dy = y1[0] - y0[0];
    let v = y0[0] + dy * h3 + h * (y0[1] * h1 + y1[1] * h4) + h * h * (y0[2] * h2 + y1[2] * h5);
    let dv = dy * d3 / h + y0[1] * d1 + y1[1] * d4 + h * (y0[2] * d2 + y1[2] * d5);
    (v, dv)
}

impl TfSolution {
    /// Builds a solution from integrator nodes in `t = sqrt(x)`.
    pub(crate) fn from_nodes(t: Vec<f64>, f: Vec<f64>, fp: Vec<f64>, b: f64, q: f64, x0: f64) -> Self {
        let grid = t.iter().map(|ti| ti * ti).collect::<Vec<_>>();
        let mut sol = Self {
            grid,
            t,
            f,
            fp,
            b,
            x0,
            q,
            err: 0.0,
            tail: None,
        };
        if q == 0.0 {
            let n = sol.grid.len() - 1;
            sol.tail = Some(Tail::matched(sol.grid[n], sol.f[n]));
        }
        sol.err = sol.midpoint_residual();
        sol
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    /// F at the grid nodes.
    pub fn values(&self) -> &[f64] {
        &self.f
    }

    /// F' at the grid nodes.
    pub fn slopes(&self) -> &[f64] {
        &self.fp
    }

    /// Initial slope B = -F'(0).
    pub fn b(&self) -> f64 {
        self.b
    }

    /// Scaled edge radius; infinite for a neutral atom.
    pub fn x0(&self) -> f64 {
        self.x0
    }

    /// Ionization degree (Z - N)/Z.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Largest ODE residual of the interpolant sampled at interval midpoints.
    pub fn err(&self) -> f64 {
        self.err
    }

    pub fn is_neutral(&self) -> bool {
        self.q == 0.0
    }

    pub fn x_last(&self) -> f64 {
        self.grid[self.grid.len() - 1]
    }

    fn interval(&self, t: f64) -> usize {
        let i = self.t.partition_point(|&ti| ti <= t);
        i.clamp(1, self.t.len() - 1) - 1
    }

    fn interpolate(&self, i: usize, t: f64) -> (f64, f64, f64, f64) {
        let (ta, tb) = (self.t[i], self.t[i + 1]);
        let h = tb - ta;
        let s = (t - ta) / h;
        let (f, f_t) = hermite5(
            s,
            h,
            node_f_derivs(ta, self.f[i], self.fp[i]),
            node_f_derivs(tb, self.f[i + 1], self.fp[i + 1]),
        );
        let (p, p_t) = hermite5(
            s,
            h,
            node_p_derivs(ta, self.f[i], self.fp[i]),
            node_p_derivs(tb, self.f[i + 1], self.fp[i + 1]),
        );
        (f, f_t, p, p_t)
    }

    /// F and F' at `x >= 0`.
    pub fn evaluate(&self, x: f64) -> Result<Evaluation> {
        if !(x >= 0.0) {
            return Err(Error::domain(format!("TF variable must be nonnegative, got {x}")));
        }
        Ok(self.eval_unchecked(x))
    }

    pub(crate) fn eval_unchecked(&self, x: f64) -> Evaluation {
        let last = self.grid.len() - 1;
        if x > self.grid[last] {
            return match self.tail {
                Some(tail) => {
                    let (f, fp) = tail.value(x);
                    Evaluation { f, fp, in_support: true }
                }
                None => Evaluation {
                    f: 0.0,
                    fp: self.fp[last],
                    in_support: false,
                },
            };
        }
        if x == self.grid[last] {
            return Evaluation {
                f: self.f[last],
                fp: self.fp[last],
                in_support: true,
            };
        }
        let t = x.sqrt();
        let i = self.interval(t);
        let (f, _, p, _) = self.interpolate(i, t);
        Evaluation {
            f,
            fp: p,
            in_support: true,
        }
    }

    /// F(x), clamped at zero outside the support.
    pub fn value(&self, x: f64) -> f64 {
        self.eval_unchecked(x).f.max(0.0)
    }

    /// ODE residual at the midpoint (in t) of every grid interval.
    pub(crate) fn interval_residuals(&self) -> Vec<f64> {
        (0..self.t.len() - 1)
            .map(|i| {
                let tm = 0.5 * (self.t[i] + self.t[i + 1]);
                let (f, _, _, p_t) = self.interpolate(i, tm);
                let f = f.max(0.0);
                // F'' = dP/dx = P_t / (2t); ODE right side F^(3/2) / t
                ((p_t - 2.0 * f * f.sqrt()) / (2.0 * tm)).abs()
            })
            .collect()
    }

    fn midpoint_residual(&self) -> f64 {
        self.interval_residuals().into_iter().fold(0.0, f64::max)
    }

    pub(crate) fn into_nodes(self) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
        (self.t, self.f, self.fp)
    }

    /// ODE residual `|F'' - F^(3/2)/sqrt(x)|` of the interpolant at an interior point.
    pub fn residual_at(&self, x: f64) -> f64 {
        let t = x.sqrt();
        let i = self.interval(t);
        let (f, _, _, p_t) = self.interpolate(i, t);
        let f = f.max(0.0);
        ((p_t - 2.0 * f * f.sqrt()) / (2.0 * t)).abs()
    }

    /// `int_0^{x_last} g(x, F(x)) dx` by a composite Gauss rule on the grid intervals.
    pub fn integrate_on_grid<G: Fn(f64, f64) -> f64>(&self, g: G) -> f64 {
        let rule = GaussLegendre::new(8);
        (0..self.t.len() - 1)
            .map(|i| {
                rule.integrate(
                    |t| {
                        let (f, _, _, _) = self.interpolate(i, t);
                        g(t * t, f.max(0.0)) * 2.0 * t
                    },
                    self.t[i],
                    self.t[i + 1],
                )
            })
            .sum()
    }

    fn tail_integral<G: Fn(f64, f64) -> f64>(&self, g: G) -> Result<f64> {
        match self.tail {
            Some(tail) => {
                let tol = QuadTolerance {
                    abs: 1e-16,
                    rel: 1e-12,
                    ..Default::default()
                };
                Ok(quad::semi_infinite(|x| g(x, tail.value(x).0), self.x_last(), &tol)?.value)
            }
            None => Ok(0.0),
        }
    }

    /// Scaled electron number `int_0^x0 sqrt(x) F^(3/2) dx`, equal to `N/Z = 1 - q`.
    pub fn electron_fraction(&self) -> Result<f64> {
        let g = |x: f64, f: f64| x.sqrt() * f * f.sqrt();
        Ok(self.integrate_on_grid(g) + self.tail_integral(g)?)
    }

    /// `int_0^inf F(x)^2 dx` for a neutral solution.
    pub fn f_squared_integral(&self) -> Result<f64> {
        if !self.is_neutral() {
            return Err(Error::Unsupported(
                "the F^2 integral is only defined for the neutral atom".into(),
            ));
        }
        let g = |_x: f64, f: f64| f * f;
        Ok(self.integrate_on_grid(g) + self.tail_integral(g)?)
    }

    /// Writes a `# B=...,q=...,x0=...,err=...` line, an `x,F,Fp` header and one row per node.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let d = SIGNIFICANT_DIGITS;
        writeln!(
            w,
            "# B={},q={},x0={},err={}",
            fmt_sig(self.b, d),
            fmt_sig(self.q, d),
            fmt_sig(self.x0, d),
            fmt_sig(self.err, d)
        )?;
        writeln!(w, "x,F,Fp")?;
        for i in 0..self.grid.len() {
            writeln!(
                w,
                "{},{},{}",
                fmt_sig(self.grid[i], d),
                fmt_sig(self.f[i], d),
                fmt_sig(self.fp[i], d)
            )?;
        }
        Ok(())
    }

    /// Reads the format produced by [`TfSolution::write_csv`]. Free-text `#` lines before the
    /// metadata line are skipped.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let meta = loop {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format("missing metadata line".into()))??;
            match line.strip_prefix("# ") {
                Some(m) if m.starts_with("B=") => break m.to_string(),
                Some(_) => continue,
                None => return Err(Error::Format("missing metadata line".into())),
            }
        };
        let mut b = None;
        let mut q = None;
        let mut x0 = None;
        for kv in meta.split(',') {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Format(format!("bad metadata field '{kv}'")))?;
            let v: f64 = v
                .parse()
                .map_err(|_| Error::Format(format!("bad number '{v}'")))?;
            match k {
                "B" => b = Some(v),
                "q" => q = Some(v),
                "x0" => x0 = Some(v),
                "err" => {}
                _ => return Err(Error::Format(format!("unknown metadata key '{k}'"))),
            }
        }
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("missing column header".into()))??;
        if header.trim() != "x,F,Fp" {
            return Err(Error::Format(format!("unexpected column header '{header}'")));
        }
        let (mut t, mut f, mut fp) = (Vec::new(), Vec::new(), Vec::new());
        for (n, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<f64> = line
                .split(',')
                .map(|c| c.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Format(format!("bad row {}: '{line}'", n + 3)))?;
            if cols.len() != 3 {
                return Err(Error::Format(format!("row {} has {} columns", n + 3, cols.len())));
            }
            t.push(cols[0].sqrt());
            f.push(cols[1]);
            fp.push(cols[2]);
        }
        if t.len() < 2 || t[0] != 0.0 || t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Format("grid must start at 0 and increase strictly".into()));
        }
        let b = b.ok_or_else(|| Error::Format("missing B".into()))?;
        let q = q.ok_or_else(|| Error::Format("missing q".into()))?;
        let x0 = x0.ok_or_else(|| Error::Format("missing x0".into()))?;
        Ok(Self::from_nodes(t, f, fp, b, q, x0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_reproduces_quintic() {
        let p = |t: f64| 1.0 - 2.0 * t + 0.5 * t.powi(3) - t.powi(5);
        let dp = |t: f64| -2.0 + 1.5 * t * t - 5.0 * t.powi(4);
        let ddp = |t: f64| 3.0 * t - 20.0 * t.powi(3);
        let (a, b) = (0.3, 0.9);
        for s in [0.0, 0.25, 0.5, 0.8, 1.0] {
            let t = a + s * (b - a);
            let (v, dv) = hermite5(s, b - a, [p(a), dp(a), ddp(a)], [p(b), dp(b), ddp(b)]);
            assert!((v - p(t)).abs() < 1e-14);
            assert!((dv - dp(t)).abs() < 1e-13);
        }
    }

    #[test]
    fn tail_matches_and_approaches_asymptote() {
        let tail = Tail::matched(50.0, 6.3226706e-4);
        let (f, _) = tail.value(50.0);
        assert!((f - 6.3226706e-4).abs() < 1e-15);
        let mut prev = 0.0;
        for x in [60.0, 100.0, 300.0, 1e4, 1e8] {
            let scaled = x * x * x * tail.value(x).0;
            assert!(scaled > prev && scaled < TAIL_COEFFICIENT);
            prev = scaled;
        }
        assert!(prev > 143.9);
    }

    #[test]
    fn tail_slope_is_consistent() {
        let tail = Tail::matched(40.0, 1.1e-3);
        let x = 73.0;
        let h = 1e-4;
        let fd = (tail.value(x + h).0 - tail.value(x - h).0) / (2.0 * h);
        assert!((fd - tail.value(x).1).abs() < 1e-9 * fd.abs());
    }

    #[test]
    fn correction_exponent_solves_linearized_equation() {
        // perturbation x^k of F = 144/x^3 obeys k(k-1) = 18 with k = -3 - kappa
        let k = -3.0 - tail_correction_exponent();
        assert!((k * (k - 1.0) - 18.0).abs() < 1e-12);
    }
}
