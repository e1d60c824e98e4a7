use std::collections::BTreeSet;
use std::sync::OnceLock;

use proptest::prelude::*;
use statatom::semiclassics::*;
use statatom::tf::{solve_ion, solve_neutral, TfBoundarySpec, TfSolution};

fn sol() -> &'static TfSolution {
    static SOL: OnceLock<TfSolution> = OnceLock::new();
    SOL.get_or_init(|| solve_neutral(1e-10).unwrap())
}

fn ra_configuration() -> BTreeSet<(u32, u32)> {
    let mut set = BTreeSet::new();
    for (l, max_nr) in [(0, 6), (1, 4), (2, 2), (3, 0)] {
        for nr in 0..=max_nr {
            set.insert((l, nr));
        }
    }
    set
}

fn occupied(z: f64) -> BTreeSet<(u32, u32)> {
    predict_occupied(sol(), z).unwrap().iter().map(|s| (s.l, s.nr)).collect()
}

#[test]
fn coulomb_levels_are_exact() {
    for z in [1.0, 26.0, 92.0] {
        let pot = CoulombPotential { z };
        for n in 1..=5u32 {
            let e = -z * z / (2.0 * (n * n) as f64);
            for l in 0..n {
                let lambda = l as f64 + 0.5;
                let nu = action_integral(&pot, e, lambda).unwrap().nu;
                let exact = z / (-2.0 * e).sqrt();
                assert!((nu + lambda - exact).abs() < 1e-8, "Z={z} n={n} l={l}: {}", nu + lambda);
            }
        }
    }
}

#[test]
fn zero_energy_maxima() {
    for z in [10.0f64, 88.0, 120.0] {
        let c = z.cbrt();
        let nu0 = nu_of(sol(), z, 0.0, 0.0).unwrap().nu / c;
        let l0 = lambda_max(sol(), z, 0.0).unwrap() / c;
        assert!((nu0 - 1.659).abs() < 3e-3, "Z={z}: {nu0}");
        assert!((l0 - 0.928).abs() < 2e-3, "Z={z}: {l0}");
        assert!((nu0 / l0 - 1.79).abs() < 1e-2);
    }
}

#[test]
fn lambda0_from_peak_of_x_f() {
    let coeff = lambda0_coefficient(sol()).unwrap();
    let z = 64.0;
    assert!((lambda_max(sol(), z, 0.0).unwrap() / (coeff * 4.0) - 1.0).abs() < 1e-9);
    // x F(x) is stationary where lambda reaches lambda0
    let xs: Vec<f64> = (0..20000).map(|i| 0.5 + i as f64 * 5e-4).collect();
    let xm = xs
        .iter()
        .copied()
        .max_by(|a, b| (a * sol().value(*a)).total_cmp(&(b * sol().value(*b))))
        .unwrap();
    let slope = |x: f64| {
        let e = sol().evaluate(x).unwrap();
        e.f + x * e.fp
    };
    assert!(slope(xm).abs() < 1e-4 * slope(1.2 * xm).abs());
    assert!(matches!(
        lambda0_coefficient(&solve_ion(TfBoundarySpec::new(0.2, 1e-8).unwrap()).unwrap()),
        Err(statatom::Error::Unsupported(_))
    ));
}

#[test]
fn scaling_collapse_of_action() {
    for s in [0.0, 0.2, 0.5, 0.8] {
        let g = |z: f64| nu_of(sol(), z, 0.0, s * z.cbrt()).unwrap().nu / z.cbrt();
        let (a, b, c) = (g(10.0), g(88.0), g(120.0));
        assert!((a - b).abs() < 1e-6 && (a - c).abs() < 1e-6, "{s}: {a} {b} {c}");
    }
}

#[test]
fn action_above_lambda_max_is_zero() {
    let lmax = lambda_max(sol(), 50.0, -1.0).unwrap();
    let ai = nu_of(sol(), 50.0, -1.0, lmax * 1.01).unwrap();
    assert!(!ai.allowed);
    assert_eq!(ai.nu, 0.0);
    assert!(nu_of(sol(), 50.0, 1.0, 0.5).is_err());
    assert!(nu_of(sol(), 50.0, -1.0, -0.5).is_err());
}

#[test]
fn degeneracy_curve_shape() {
    let z = 88.0;
    let grid: Vec<f64> = (0..60).map(|i| i as f64 * 0.1).collect();
    let curve = degeneracy_curve(sol(), z, 0.0, &grid).unwrap();
    let s = &curve.samples;
    assert_eq!(*s.last().unwrap(), (curve.lambda_max, 0.0));
    for w in s.windows(2) {
        assert!(w[1].0 > w[0].0 && w[1].1 < w[0].1);
        assert!(w[1].1 >= 0.0);
    }
    // the curve bends down: its descent steepens towards lambda_max
    let slopes: Vec<f64> = s[..s.len() - 1]
        .windows(2)
        .map(|w| (w[0].1 - w[1].1) / (w[1].0 - w[0].0))
        .collect();
    for w in slopes.windows(2) {
        assert!(w[1] > w[0]);
    }
}

#[test]
fn deep_energies_follow_coulomb_line() {
    // at E = -Z^2/(2n^2) the Coulomb line is nu + lambda = n
    let sum = |z: f64, n: f64, frac: f64| {
        let lambda = frac * n;
        (nu_of(sol(), z, -z * z / (2.0 * n * n), lambda).unwrap().nu + lambda) / n
    };
    let z = 88.0;
    let deviation: Vec<f64> = [4.0, 2.0, 1.0].iter().map(|&n| 1.0 - sum(z, n, 0.1)).collect();
    assert!(deviation[0] > deviation[1] && deviation[1] > deviation[2] && deviation[2] > 0.0);
    // the deepest curve is already a straight line of slope -1
    let along: Vec<f64> = [0.1, 0.5, 0.9].iter().map(|&f| sum(z, 1.0, f)).collect();
    assert!((along[0] - along[2]).abs() < 5e-3, "{along:?}");
    assert!((1.0 - sum(1e4, 1.0, 0.5)).abs() < 5e-3);
}

#[test]
fn radium_configuration() {
    assert_eq!(occupied(88.0), ra_configuration());
    let labels: Vec<String> = predict_occupied(sol(), 88.0).unwrap().iter().map(|s| s.label()).collect();
    assert!(labels.contains(&"7s".to_string()) && labels.contains(&"4f".to_string()));
}

#[test]
fn hydrogen_has_only_inner_states() {
    let set = occupied(1.0);
    assert!(!set.is_empty());
    assert!(set.iter().all(|s| [(0, 0), (0, 1), (1, 0)].contains(s)), "{set:?}");
}

#[test]
fn occupation_grows_with_charge() {
    let mut prev = BTreeSet::new();
    for z in (1..=120).step_by(7) {
        let set = occupied(z as f64);
        assert!(prev.is_subset(&set), "Z={z}");
        prev = set;
    }
}

#[test]
fn fourier_matches_closed_form() {
    let p = OscillationParams::from_solution(sol()).unwrap();
    for i in 0..500 {
        let z = 1.0 + 119.0 * i as f64 / 499.0;
        let scale = p.amplitude * z.powf(4.0 / 3.0);
        let d = (ltf_oscillation_closed(z, &p) - ltf_oscillation_fourier(z, 1000, &p)).abs() / scale;
        assert!(d < 1.5e-8, "Z={z}: {d}");
    }
    // convergence in K
    let z = 37.3;
    let c = ltf_oscillation_closed(z, &p);
    let errs: Vec<f64> = [10, 100, 1000].iter().map(|&k| (ltf_oscillation_fourier(z, k, &p) - c).abs()).collect();
    assert!(errs[2] < errs[1] && errs[1] < errs[0]);
}

#[test]
fn closed_form_zeros_and_period() {
    let p = OscillationParams::from_solution(sol()).unwrap();
    // vanishes where lambda0 is an integer or a half-integer
    for m in [3.0, 3.5, 7.0] {
        let z = (m / p.lambda0_coeff).powi(3);
        assert!(ltf_oscillation_closed(z, &p).abs() < 1e-9 * z.powf(4.0 / 3.0));
    }
    let zeros = zero_crossings(&p, 1.0, 12.0);
    let period = 2.0 * (zeros[zeros.len() - 1] - zeros[0]) / (zeros.len() - 1) as f64;
    assert!((period - 1.078).abs() < 1e-2, "{period}");
    // shifting lambda0 by one leaves the scaled oscillation unchanged
    let scaled = |c: f64| ltf_oscillation_closed(c * c * c, &p) / c.powi(4);
    for c in [1.3, 2.7, 4.1] {
        assert!((scaled(c) - scaled(c + 1.0 / p.lambda0_coeff)).abs() < 1e-12);
    }
}

fn zero_crossings(p: &OscillationParams, from: f64, to: f64) -> Vec<f64> {
    let n = 200_000;
    let c = |i: usize| from + (to - from) * i as f64 / n as f64;
    let f = |c: f64| ltf_oscillation_closed(c * c * c, p);
    (0..n)
        .filter(|&i| f(c(i)) * f(c(i + 1)) < 0.0)
        .map(|i| 0.5 * (c(i) + c(i + 1)))
        .collect()
}

#[test]
fn pinned_amplitude_envelope() {
    let p = OscillationParams::pinned();
    let mut peaks = Vec::new();
    let n = 100_000;
    let g = |i: usize| {
        let c = 1.0 + 9.0 * i as f64 / n as f64;
        (ltf_oscillation_closed(c * c * c, &p) / c.powi(4)).abs() * 18.0 * 3f64.sqrt()
    };
    for i in 1..n {
        if g(i) > g(i - 1) && g(i) >= g(i + 1) {
            peaks.push(g(i));
        }
    }
    assert!(peaks.len() > 10);
    for a in peaks {
        assert!((a / OSCILLATION_AMPLITUDE - 1.0).abs() < 1e-2, "{a}");
    }
}

#[test]
fn computed_amplitude_agrees_with_constant() {
    let a = stationary_phase_amplitude(sol()).unwrap();
    assert!((a / OSCILLATION_AMPLITUDE - 1.0).abs() < 2e-3, "{a}");
}

#[test]
fn integral_matches_closed_form_at_large_z() {
    let p = OscillationParams::from_solution(sol()).unwrap();
    let z = 1e6;
    let terms = ltf_oscillation_integral_terms(sol(), z, 3).unwrap();
    for w in terms.windows(2) {
        assert!(w[1].abs() < w[0].abs());
    }
    let total = ltf_oscillation_integral(sol(), z, 3).unwrap();
    let closed = ltf_oscillation_closed(z, &p);
    assert!((total / closed - 1.0).abs() < 0.05, "{total} vs {closed}");
}

#[test]
fn series_on_grid() {
    let p = OscillationParams::pinned();
    let grid: Vec<f64> = (0..=100).map(|i| 1.0 + i as f64 * 0.04).collect();
    let series = oscillation_series(&grid, &p, OscillationMode::Closed);
    let scaled = series.scaled_values();
    assert_eq!(series.scaled_at(grid[17]).unwrap(), scaled[17]);
    let mid = series.scaled_at(0.5 * (grid[3] + grid[4])).unwrap();
    assert!((mid - 0.5 * (scaled[3] + scaled[4])).abs() < 1e-15);
    assert!(series.scaled_at(0.5).is_none());
    assert!(series.scaled_at(6.0).is_none());
    let fourier = oscillation_series(&grid, &p, OscillationMode::Fourier(1000));
    for (a, b) in fourier.values.iter().zip(&series.values) {
        assert!((a - b).abs() < 1e-7 * grid[100].powi(4));
    }
}

#[test]
fn poisson_toy_counts_shells() {
    for l in 1..=20u32 {
        for d in [-0.3, 0.1, 0.25, 0.4] {
            let cut = l as f64 + d;
            let exact: f64 = (0..l).map(|j| 2.0 * (2 * j + 1) as f64).sum();
            assert_eq!(exact, 2.0 * (l * l) as f64);
            let resummed = poisson_shell_count_resummed(cut);
            assert!((resummed - exact).abs() < 1e-9 * exact, "cut={cut}");
            let truncated = poisson_shell_count(cut, 10_000);
            assert!((truncated - exact).abs() < 1e-3 * exact, "cut={cut}: {truncated}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn lambda_max_grows_with_energy(e1 in -3.0f64..0.0, e2 in -3.0f64..0.0) {
        let z: f64 = 40.0;
        let scale = z.powf(4.0 / 3.0);
        let (lo, hi) = if e1 < e2 { (e1, e2) } else { (e2, e1) };
        let l_lo = lambda_max(sol(), z, lo * scale).unwrap();
        let l_hi = lambda_max(sol(), z, hi * scale).unwrap();
        prop_assert!(l_lo <= l_hi * (1.0 + 1e-12));
    }

    #[test]
    fn action_decreases_in_lambda(e in -2.0f64..0.0, s1 in 0.0f64..1.0, s2 in 0.0f64..1.0) {
        let z: f64 = 60.0;
        let e = e * z.powf(4.0 / 3.0);
        let lmax = lambda_max(sol(), z, e).unwrap();
        let (a, b) = if s1 < s2 { (s1, s2) } else { (s2, s1) };
        prop_assume!(b - a > 1e-3);
        let nu_a = nu_of(sol(), z, e, a * lmax).unwrap().nu;
        let nu_b = nu_of(sol(), z, e, b * lmax).unwrap().nu;
        prop_assert!(nu_b < nu_a);
    }

    #[test]
    fn fourier_truncation_bound(zcube in 1.0f64..5.0, k in 50u32..2000) {
        let p = OscillationParams::pinned();
        let z = zcube.powi(3);
        let d = (ltf_oscillation_closed(z, &p) - ltf_oscillation_fourier(z, k, &p)).abs();
        // tail of sum k^-3 / pi^3
        let bound = p.amplitude * z.powf(4.0 / 3.0) / (2.0 * std::f64::consts::PI.powi(3) * (k as f64).powi(2));
        prop_assert!(d <= bound * 1.01, "{d} > {bound}");
    }
}
