//! Parameter sweeps over well width and field, with CSV and gnuplot output.

mod config;
mod figures;
mod gnuplot;
mod table;

pub use config::{GeometryConfig, Grid, MaterialConfig, OutputConfig, SweepConfig};
pub use figures::{Figure, SweepAxis};
pub use gnuplot::{emit_gnuplot, gnuplot_script};
pub use table::{emit_csv, format_sig, read_csv, write_csv, CSV_HEADER};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fem::Problem;
use crate::material::{valley_pair_constants, MaterialSystem};
use crate::potential::WellGeometry;
use crate::valley::{bulk_estimate_for_field, coupled_levels, valley_splitting};

pub const THREADS_ENV: &str = "VALLEYSPLIT_THREADS";

/// One subband at one (W, F) point. Energies are in meV; NaN when `error` is set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRow {
    pub material: String,
    pub well_nm: f64,
    pub field_v_per_m: f64,
    pub n: usize,
    pub energy_mev: f64,
    pub delta_mev: f64,
    pub lower_mev: f64,
    pub upper_mev: f64,
    pub cv_mev: f64,
    pub cf_mev: f64,
    pub cdelta_mev: f64,
    pub bulk_mev: f64,
    pub error: Option<String>,
}

impl ResultRow {
    fn failed(material: &str, well: f64, field: f64, n: usize, err: &Error) -> Self {
        ResultRow {
            material: material.to_string(),
            well_nm: well,
            field_v_per_m: field,
            n,
            energy_mev: f64::NAN,
            delta_mev: f64::NAN,
            lower_mev: f64::NAN,
            upper_mev: f64::NAN,
            cv_mev: f64::NAN,
            cf_mev: f64::NAN,
            cdelta_mev: f64::NAN,
            bulk_mev: bulk_estimate_for_field(field),
            error: Some(err.to_string()),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

/// Worker count from `VALLEYSPLIT_THREADS`; `None` lets rayon decide.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::Config(format!("{THREADS_ENV} must be a positive integer, got `{s}`"))),
        },
    }
}

/// All subband rows at a single (W, F). Failures become error rows.
pub fn solve_point(config: &SweepConfig, material: &MaterialSystem, well: f64, field: f64) -> Vec<ResultRow> {
    let name = config.material.preset.name();
    match point_rows(config, material, well, field) {
        Ok(rows) => rows,
        Err(e) => (0..config.subbands)
            .map(|n| ResultRow::failed(name, well, field, n, &e))
            .collect(),
    }
}

fn point_rows(config: &SweepConfig, material: &MaterialSystem, well: f64, field: f64) -> Result<Vec<ResultRow>> {
    let geometry = WellGeometry::new(well, config.geometry.barrier_nm)?;
    let problem = Problem::quantum_well(&geometry, material, field)?;
    let solution = problem.solve(config.mesh_h_nm, config.subbands)?;
    let constants = valley_pair_constants(material, config.constants_mode);
    let bulk = bulk_estimate_for_field(field);
    (0..config.subbands)
        .map(|n| {
            let r = valley_splitting(&solution, n, &problem.profile, &constants, config.integration_domain)?;
            let energy = solution.energy(n)?;
            let levels = coupled_levels(energy, &r, true);
            Ok(ResultRow {
                material: config.material.preset.name().to_string(),
                well_nm: well,
                field_v_per_m: field,
                n,
                energy_mev: energy * 1e3,
                delta_mev: r.delta * 1e3,
                lower_mev: levels.lower * 1e3,
                upper_mev: levels.upper * 1e3,
                cv_mev: r.c_v.norm() * 1e3,
                cf_mev: r.c_f.norm() * 1e3,
                cdelta_mev: r.c_delta.norm() * 1e3,
                bulk_mev: bulk,
                error: None,
            })
        })
        .collect()
}

fn run_points(config: &SweepConfig, points: Vec<(f64, f64)>, threads: Option<usize>) -> Result<Vec<ResultRow>> {
    config.validate()?;
    let material = config.material_system();
    let work = || -> Vec<ResultRow> {
        points
            .par_iter()
            .map(|&(w, f)| solve_point(config, &material, w, f))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    };
    match threads {
        None => Ok(work()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
    }
}

/// Rows ordered by (W, F, n).
pub fn run_width_sweep(config: &SweepConfig, threads: Option<usize>) -> Result<Vec<ResultRow>> {
    let (widths, fields) = (config.widths()?, config.fields()?);
    let points = widths
        .iter()
        .flat_map(|&w| fields.iter().map(move |&f| (w, f)))
        .collect();
    run_points(config, points, threads)
}

/// Rows ordered by (F, W, n).
pub fn run_field_sweep(config: &SweepConfig, threads: Option<usize>) -> Result<Vec<ResultRow>> {
    let (widths, fields) = (config.widths()?, config.fields()?);
    let points = fields
        .iter()
        .flat_map(|&f| widths.iter().map(move |&w| (w, f)))
        .collect();
    run_points(config, points, threads)
}

pub fn run_sweep(config: &SweepConfig, axis: SweepAxis, threads: Option<usize>) -> Result<Vec<ResultRow>> {
    match axis {
        SweepAxis::Width => run_width_sweep(config, threads),
        SweepAxis::Field => run_field_sweep(config, threads),
    }
}
