use rayon::prelude::*;
use statatom::comparison::{self, deviation_series, inert_gas_markers, oscillation_overlay, COMPARISON_COLUMNS};
use statatom::energy::{
    nie_inverse_asymptotic, nie_neutral_scaled_energy, EnergyModel, ModelConstants, TermKind,
};
use statatom::semiclassics::{
    self, degeneracy_curve, oscillation_series, predict_occupied, OscillationMode, OscillationParams,
};
use statatom::tf::{self, SolverConfig, TfBoundarySpec, TfSolution};
use statatom::ScaledUnits;

use crate::args::{Command, Common, Model, ZRange};
use crate::table::{Cell, Table};
use crate::AppError;

const MAX_Z: f64 = 200.0;

fn usage(msg: impl Into<String>) -> AppError {
    AppError::Usage(msg.into())
}

fn solver_config(common: &Common) -> Result<SolverConfig, AppError> {
    let mut config = SolverConfig::default();
    if let Ok(v) = std::env::var("STATATOM_XMAX") {
        config.x_max = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("STATATOM_XMAX must be a number, got '{v}'")))?;
    }
    if let Some(x) = common.x_max {
        config.x_max = x;
    }
    Ok(config)
}

fn neutral(common: &Common) -> Result<TfSolution, AppError> {
    Ok(tf::solve_neutral_with(common.tol, &solver_config(common)?)?)
}

fn check_z(z: f64) -> Result<(), AppError> {
    if (1.0..=MAX_Z).contains(&z) {
        Ok(())
    } else {
        Err(usage(format!("Z must lie in [1, {MAX_Z}], got {z}")))
    }
}

/// Evenly spaced values from `lo` to `hi` inclusive (up to rounding of the last step).
fn steps(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>, AppError> {
    if !(step > 0.0) {
        return Err(usage(format!("step must be positive, got {step}")));
    }
    if !(lo <= hi) {
        return Err(usage(format!("range is empty: {lo} > {hi}")));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| lo + step * i as f64).collect())
}

fn z_values(range: &ZRange) -> Result<Vec<f64>, AppError> {
    check_z(range.z_min)?;
    check_z(range.z_max)?;
    steps(range.z_min, range.z_max, range.z_step)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>, AppError> {
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(usage(format!("need 0 < min < max and at least 2 points, got [{lo}, {hi}] with {n}")));
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect())
}

fn energy_model(m: Model) -> EnergyModel {
    match m {
        Model::Tf => EnergyModel::Tf,
        Model::TfScott => EnergyModel::TfScott,
        Model::Statistical => EnergyModel::Statistical,
    }
}

fn solution_table(sol: &TfSolution, comment: &str) -> Table {
    let mut t = Table::new(comment, &["x", "F", "Fp"]);
    t.meta("B", sol.b());
    t.meta("q", sol.q());
    t.meta("x0", sol.x0());
    t.meta("err", sol.err());
    for ((x, f), fp) in sol.grid().iter().zip(sol.values()).zip(sol.slopes()) {
        t.push(vec![Cell::from(*x), Cell::from(*f), Cell::from(*fp)]);
    }
    t
}

fn oscillation_params(sol: &TfSolution, pin: bool) -> Result<OscillationParams, AppError> {
    if pin {
        Ok(OscillationParams::pinned())
    } else {
        Ok(OscillationParams::from_solution(sol)?)
    }
}

pub fn run(cmd: &Command) -> Result<Table, AppError> {
    match cmd {
        Command::Solve { common } => {
            let sol = neutral(common)?;
            Ok(solution_table(
                &sol,
                "Scaled Thomas-Fermi function F(x) and slope F'(x) of the neutral atom",
            ))
        }

        Command::Ion { common, q } => {
            let spec = TfBoundarySpec::new(*q, common.tol)?;
            let sol = tf::solve_ion_with(spec, &solver_config(common)?)?;
            Ok(solution_table(
                &sol,
                "Scaled Thomas-Fermi function F(x) and slope F'(x) of a positive ion, ending at the edge x0",
            ))
        }

        Command::Energy { common, range, model } => {
            let zs = z_values(range)?;
            let sol = neutral(common)?;
            let constants = ModelConstants::from_solution(&sol)?;
            let model = energy_model(*model);
            let mut t = Table::new(
                format!(
                    "Binding energy ladder of the {} model versus Z; terms are contributions to E, scaled = -E/(Z^2/2)",
                    model.name()
                ),
                &["Z", "leading", "scott", "quantum", "exchange", "total", "scaled"],
            );
            t.meta("B", constants.b);
            t.meta("I2", constants.i2);
            let rows: Vec<Vec<Cell>> = zs
                .par_iter()
                .map(|&z| {
                    let e = model.breakdown(z, &constants);
                    vec![
                        Cell::from(z),
                        Cell::from(e.term(TermKind::Leading)),
                        Cell::from(e.term(TermKind::Scott)),
                        Cell::from(e.term(TermKind::Quantum)),
                        Cell::from(e.term(TermKind::Exchange)),
                        Cell::from(e.total),
                        Cell::from(e.scaled),
                    ]
                })
                .collect();
            rows.into_iter().for_each(|r| t.push(r));
            Ok(t)
        }

        Command::Nie { range, .. } => {
            let zs = z_values(range)?;
            let mut t = Table::new(
                "Neutral atoms of noninteracting electrons: asymptotic shell count, binding energy Z^2 n_s and scaled energy",
                &["Z", "n_s", "minus_e", "scaled", "scaled_series"],
            );
            let rows: Vec<Vec<Cell>> = zs
                .par_iter()
                .map(|&z| {
                    let n_s = nie_inverse_asymptotic(z);
                    vec![
                        Cell::from(z),
                        Cell::from(n_s),
                        Cell::from(z * z * n_s),
                        Cell::from(2.0 * n_s),
                        Cell::from(nie_neutral_scaled_energy(z)),
                    ]
                })
                .collect();
            rows.into_iter().for_each(|r| t.push(r));
            Ok(t)
        }

        Command::Density {
            common,
            z,
            q,
            r_min,
            r_max,
            points,
        } => {
            check_z(*z)?;
            let spec = TfBoundarySpec::new(*q, common.tol)?;
            let sol = tf::solve_ion_with(spec, &solver_config(common)?)?;
            let units = ScaledUnits::new(*z);
            let mut t = Table::new(
                "Potential V(r), density n(r) and radial density D(r) = 4 pi r^2 n in atomic units",
                &["r", "x", "V", "n", "D"],
            );
            t.meta("Z", *z);
            t.meta("q", *q);
            t.meta("B", sol.b());
            for r in log_grid(*r_min, *r_max, *points)? {
                let d = tf::density(&sol, *z, r)?;
                t.push(vec![
                    Cell::from(r),
                    Cell::from(units.x_of_r(r)),
                    Cell::from(tf::potential(&sol, *z, r)?),
                    Cell::from(d.n),
                    Cell::from(d.radial),
                ]);
            }
            Ok(t)
        }

        Command::Validity {
            common,
            z,
            x_min,
            x_end,
            points,
        } => {
            let sol = neutral(common)?;
            let xs = log_grid(*x_min, *x_end, *points)?;
            let mut t = Table::new(
                "Validity parameter Z^(1/3) sqrt(x F(x)); the statistical description needs it to be large",
                &["Z", "x", "value"],
            );
            for &zv in z {
                if !(zv > 0.0) {
                    return Err(usage(format!("Z must be positive, got {zv}")));
                }
                for &x in &xs {
                    t.push(vec![
                        Cell::from(zv),
                        Cell::from(x),
                        Cell::from(tf::validity_parameter(&sol, zv, x)?),
                    ]);
                }
            }
            Ok(t)
        }

        Command::Degeneracy {
            common,
            z,
            scaled_energies,
            points,
        } => {
            check_z(*z)?;
            if *points < 2 {
                return Err(usage("need at least 2 lambda points"));
            }
            if scaled_energies.iter().any(|&e| e > 0.0) {
                return Err(usage("energies must not be positive"));
            }
            let sol = neutral(common)?;
            let c = z.cbrt();
            let curves = scaled_energies
                .par_iter()
                .map(|&es| {
                    let e = es * z.powf(4.0 / 3.0);
                    let lmax = semiclassics::lambda_max(&sol, *z, e)?;
                    let grid: Vec<f64> = (0..*points).map(|i| lmax * i as f64 / *points as f64).collect();
                    degeneracy_curve(&sol, *z, e, &grid).map(|curve| (es, curve))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let mut t = Table::new(
                "Degeneracy curves nu(E, lambda) in the TF potential at fixed energies (energies in units of Z^(4/3))",
                &["E_scaled", "E", "lambda", "nu", "lambda_scaled", "nu_scaled"],
            );
            t.meta("Z", *z);
            for (es, curve) in curves {
                for (lambda, nu) in curve.samples {
                    t.push(vec![
                        Cell::from(es),
                        Cell::from(curve.e),
                        Cell::from(lambda),
                        Cell::from(nu),
                        Cell::from(lambda / c),
                        Cell::from(nu / c),
                    ]);
                }
            }
            Ok(t)
        }

        Command::Occupied { common, z } => {
            check_z(*z)?;
            let sol = neutral(common)?;
            let states = predict_occupied(&sol, *z)?;
            let mut t = Table::new(
                "Orbitals (l, n_r) below the zero-energy degeneracy curve of the TF potential",
                &["l", "nr", "lambda", "nu", "nu_limit", "label"],
            );
            t.meta("Z", *z);
            t.meta("count", states.len() as u32);
            for s in states {
                let limit = semiclassics::nu_of(&sol, *z, 0.0, s.lambda())?.nu;
                t.push(vec![
                    Cell::from(s.l),
                    Cell::from(s.nr),
                    Cell::from(s.lambda()),
                    Cell::from(s.nu()),
                    Cell::from(limit),
                    Cell::from(s.label()),
                ]);
            }
            Ok(t)
        }

        Command::Oscillation {
            common,
            z_min,
            z_max,
            grid_zcube,
            k,
            pin_lambda0,
        } => {
            check_z(*z_min)?;
            check_z(*z_max)?;
            let sol = neutral(common)?;
            let params = oscillation_params(&sol, *pin_lambda0)?;
            let mode = match k {
                Some(0) => return Err(usage("--k must be at least 1")),
                Some(k) => OscillationMode::Fourier(*k),
                None => OscillationMode::Closed,
            };
            let grid = steps(z_min.cbrt(), z_max.cbrt(), *grid_zcube)?;
            let chunks: Vec<_> = grid
                .par_chunks(64)
                .map(|g| oscillation_series(g, &params, mode))
                .collect();
            let mut t = Table::new(
                "Leading l-quantized TF oscillation of the binding energy versus Z^(1/3); osc_scaled = osc / Z^(4/3)",
                &["zcube", "Z", "lambda0", "osc", "osc_scaled"],
            );
            t.meta("lambda0_coeff", params.lambda0_coeff);
            t.meta("amplitude", params.amplitude);
            t.meta("period_zcube", 1.0 / params.lambda0_coeff);
            t.meta(
                "terms",
                match mode {
                    OscillationMode::Closed => Cell::Text("closed".into()),
                    OscillationMode::Fourier(k) => Cell::from(k),
                },
            );
            let markers: Vec<String> = inert_gas_markers().iter().map(|z| z.to_string()).collect();
            t.comments.push(format!("inert gases at Z = {}", markers.join(" ")));
            for s in chunks {
                for (c, v) in s.grid.iter().zip(&s.values) {
                    t.push(vec![
                        Cell::from(*c),
                        Cell::from(c * c * c),
                        Cell::from(params.lambda0(c * c * c)),
                        Cell::from(*v),
                        Cell::from(v / c.powi(4)),
                    ]);
                }
            }
            Ok(t)
        }

        Command::Compare {
            common,
            reference,
            model,
            overlay,
            fit_offset,
            pin_lambda0,
        } => {
            let ds = comparison::load_reference(reference)?;
            for w in &ds.warnings {
                eprintln!("warning: {}: {w}", ds.source);
            }
            let sol = neutral(common)?;
            let constants = ModelConstants::from_solution(&sol)?;
            let model = energy_model(*model);
            let records = deviation_series(&ds, model, &constants);
            if !*overlay {
                if *fit_offset {
                    return Err(usage("--fit-offset requires --overlay"));
                }
                let mut t = Table::new(
                    format!(
                        "Deviation of reference binding energies from the {} model: rel_dev_pct = 100 (ref - model)/ref, scaled_dev = (ref - model)/Z^(4/3)",
                        model.name()
                    ),
                    &COMPARISON_COLUMNS,
                );
                t.meta("source", Cell::Text(ds.source.clone()));
                for r in records {
                    t.push(vec![
                        Cell::from(r.z),
                        Cell::from(r.zcube),
                        Cell::from(r.reference),
                        Cell::from(r.model),
                        Cell::from(r.rel_dev_pct),
                        Cell::from(r.scaled_dev),
                    ]);
                }
                return Ok(t);
            }
            if model != EnergyModel::Statistical {
                return Err(usage("--overlay compares deviations from the statistical model"));
            }
            let params = oscillation_params(&sol, *pin_lambda0)?;
            let grid: Vec<f64> = records.iter().map(|r| r.zcube).collect();
            let series = oscillation_series(&grid, &params, OscillationMode::Closed);
            let ov = oscillation_overlay(&records, &series, *fit_offset);
            let mut t = Table::new(
                "Scaled deviation from the statistical energy against the leading l-quantized TF oscillation, both divided by Z^(4/3)",
                &["Z", "zcube", "ref_scaled", "osc_scaled", "residual"],
            );
            t.meta("source", Cell::Text(ds.source.clone()));
            t.meta("offset", ov.offset);
            t.meta("rms", ov.rms);
            for r in ov.rows {
                t.push(vec![
                    Cell::from(r.z),
                    Cell::from(r.zcube),
                    Cell::from(r.reference_scaled),
                    Cell::from(r.oscillation_scaled),
                    Cell::from(r.residual),
                ]);
            }
            Ok(t)
        }
    }
}
