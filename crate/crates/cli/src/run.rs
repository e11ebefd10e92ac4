//! Command execution. Independent points run on the worker pool; rows are
//! collected in input order so output is reproducible.

use combcas::oracle;
use combcas::spectrum::{BandStructure, ROOT_TOL};
use combcas::thermal::{self, ThermoPoint};
use combcas::vacuum::casimir_energy;
use rayon::prelude::*;

use crate::config::{Command, ModelPoint, Resolved};
use crate::error::CliError;
use crate::output::{Cell, Table};

pub fn run(cfg: &Resolved) -> Result<(), CliError> {
    let table = match cfg.command {
        Command::Bands => bands(cfg)?,
        Command::Casimir => casimir(cfg)?,
        Command::FreeEnergy | Command::Entropy | Command::Pressure => thermal_scan(cfg)?,
        Command::Sweep => sweep(cfg)?,
        Command::Verify => return verify(cfg),
    };
    table.emit(cfg)
}

fn location(p: &ModelPoint, t: Option<f64>) -> String {
    let mut s = format!("a = {}", p.a);
    if let Some(t) = t {
        s = format!("T = {t}, {s}");
    }
    s
}

fn bands(cfg: &Resolved) -> Result<Table, CliError> {
    let mut table = Table::new(vec!["theta", "band_index", "k", "E", "error_estimate"]);
    for p in &cfg.points {
        let model = p.model()?;
        let structure =
            BandStructure::compute(&model, cfg.n_bands, cfg.theta_nodes).map_err(CliError::numerical(location(p, None)))?;
        for band in &structure.bands {
            for point in &band.points {
                table.push(vec![
                    Cell::Num(point.theta),
                    Cell::Int(band.index),
                    Cell::Num(point.k),
                    Cell::Num(point.energy),
                    Cell::Num(ROOT_TOL),
                ]);
            }
        }
    }
    Ok(table)
}

fn casimir(cfg: &Resolved) -> Result<Table, CliError> {
    let results: Vec<_> = cfg
        .points
        .par_iter()
        .map(|p| -> Result<_, CliError> {
            let model = p.model()?;
            let at = CliError::numerical(location(p, None));
            let r = cfg.contour(&model).and_then(|spec| casimir_energy(&model, &spec)).map_err(at)?;
            Ok((p.a, r))
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(vec![
        "a",
        "E0_per_area",
        "bound_part",
        "contour_part",
        "im_residue",
        "error_estimate",
    ]);
    for (a, r) in results {
        table.push(vec![
            Cell::Num(a),
            Cell::Num(r.e0_per_area),
            Cell::Num(r.bound_part),
            Cell::Num(r.contour_part),
            Cell::Num(r.im_residue),
            Cell::Num(r.error_estimate),
        ]);
    }
    Ok(table)
}

fn thermal_scan(cfg: &Resolved) -> Result<Table, CliError> {
    let jobs: Vec<(ModelPoint, f64)> = cfg
        .points
        .iter()
        .flat_map(|p| cfg.temperatures.iter().map(move |&t| (*p, t)))
        .collect();
    let rows: Vec<(f64, f64, f64)> = jobs
        .par_iter()
        .map(|(p, t)| -> Result<_, CliError> {
            let model = p.model()?;
            let at = CliError::numerical(location(p, Some(*t)));
            let value = cfg
                .contour(&model)
                .and_then(|spec| match cfg.command {
                    Command::FreeEnergy => thermal::delta_f(&model, *t, &spec).map(|r| (r.value, r.error_estimate)),
                    Command::Entropy => thermal::entropy(&model, *t, &spec).map(|d| (d.value, d.error)),
                    _ => thermal::pressure(&model, *t, &spec, cfg.include_vacuum).map(|d| (d.value, d.error)),
                })
                .map_err(at)?;
            Ok((*t, value.0, value.1))
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(vec!["T", "value", "error_estimate"]);
    for (t, v, e) in rows {
        table.push(vec![Cell::Num(t), Cell::Num(v), Cell::Num(e)]);
    }
    Ok(table)
}

fn sweep(cfg: &Resolved) -> Result<Table, CliError> {
    let jobs: Vec<(ModelPoint, f64)> = cfg
        .points
        .iter()
        .flat_map(|p| cfg.temperatures.iter().map(move |&t| (*p, t)))
        .collect();
    let rows: Vec<(ModelPoint, ThermoPoint)> = jobs
        .par_iter()
        .map(|(p, t)| -> Result<_, CliError> {
            let model = p.model()?;
            let at = CliError::numerical(location(p, Some(*t)));
            let point = cfg
                .contour(&model)
                .and_then(|spec| ThermoPoint::compute(&model, *t, &spec, cfg.include_vacuum))
                .map_err(at)?;
            Ok((*p, point))
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(vec![
        "T",
        "a",
        "w0",
        "w1",
        "eps",
        "delta_f_per_area",
        "entropy_per_area",
        "pressure",
        "error_estimate",
        "entropy_error",
        "pressure_error",
    ]);
    for (p, r) in rows {
        table.push(vec![
            Cell::Num(r.temperature),
            Cell::Num(p.a),
            Cell::Num(p.w0),
            Cell::Num(p.w1),
            Cell::Num(p.eps),
            Cell::Num(r.delta_f_per_area),
            Cell::Num(r.entropy_per_area),
            Cell::Num(r.pressure),
            Cell::Num(r.diagnostics.delta_f_error),
            Cell::Num(r.diagnostics.entropy_error),
            Cell::Num(r.diagnostics.pressure_error),
        ]);
    }
    Ok(table)
}

fn verify(cfg: &Resolved) -> Result<(), CliError> {
    let mut table = Table::new(vec!["a", "check", "residual", "threshold", "passed"]);
    let mut failed = 0;
    for p in &cfg.points {
        let model = p.model()?;
        let rows = oracle::verify(&model).map_err(CliError::numerical(location(p, None)))?;
        for row in rows {
            failed += usize::from(!row.passed);
            table.push(vec![
                Cell::Num(p.a),
                Cell::Text(row.check),
                Cell::Num(row.residual),
                Cell::Num(row.threshold),
                Cell::Bool(row.passed),
            ]);
        }
    }
    table.emit(cfg)?;
    if failed > 0 {
        return Err(CliError::Verification(failed));
    }
    Ok(())
}
