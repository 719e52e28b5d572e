//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so every line is printed whether the
//! criterion passes or not; the process exits nonzero if any criterion fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};

use valleysplit::fem::{convergence_study, hard_wall_level};
use valleysplit::material::valley_pair_constants;
use valleysplit::oracles::{quadrature_cases, quadrature_deviation};
use valleysplit::sweep::{run_field_sweep, run_width_sweep, Grid, MaterialConfig, SweepConfig};
use valleysplit::valley::{bulk_estimate_for_field, IntegrationDomain};
use valleysplit::{ConstantsMode, MaterialSystem, Preset, Problem, WellGeometry};

struct Outcome {
    passed: bool,
    detail: String,
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn sio2() -> MaterialSystem {
    MaterialSystem::preset(Preset::Sio2Si)
}

fn sweep_config(preset: Preset, well: Grid, field: Grid) -> SweepConfig {
    let mut cfg = SweepConfig {
        material: MaterialConfig::preset(preset),
        field_v_per_m: field,
        subbands: 1,
        ..SweepConfig::default()
    };
    cfg.geometry.well_nm = well;
    cfg
}

fn eigensolver_oracle() -> Outcome {
    let m = sio2();
    let p = Problem::hard_wall(6.0, &m).unwrap();
    let sol = p.solve(0.05, 4).unwrap();
    let e1 = sol.energies()[0];
    let rel = (e1 * 1e3 - 11.40).abs() / 11.40;
    let worst_ratio = (1..=4)
        .map(|n| (sol.energies()[n - 1] / e1 / (n * n) as f64 - 1.0).abs())
        .fold(0.0, f64::max);
    let exact = hard_wall_level(6.0, m.m_z_well, 1);
    let study = convergence_study(|h| Ok(p.solve(h, 1)?.energies()[0]), &[0.2, 0.1, 0.05], Some(exact)).unwrap();
    let order = study.observed_order;
    outcome(
        rel <= 5e-3 && worst_ratio <= 5e-3 && (1.8..=2.2).contains(&order),
        format!(
            "E1 = {:.4} meV (rel {:.1e} vs 11.40), worst n^2 ratio error {:.1e}, order {:.3}",
            e1 * 1e3,
            rel,
            worst_ratio,
            order
        ),
    )
}

fn quadrature_oracle() -> Outcome {
    let m = sio2();
    let mut worst: f64 = 0.0;
    let cases = quadrature_cases();
    for &(w, f, n) in &cases {
        let g = WellGeometry::new(w, 6.0).unwrap();
        let d = quadrature_deviation(&m, &g, f, n, 0.05, ConstantsMode::PaperCanonical, IntegrationDomain::Full).unwrap();
        worst = worst.max(d);
    }
    outcome(
        cases.len() == 20 && worst <= 1.0,
        format!("{} cases, worst deviation {:.3} of the 1e-6 relative tolerance", cases.len(), worst),
    )
}

fn constants_reproduction() -> Outcome {
    let k = valley_pair_constants(&sio2(), ConstantsMode::PaperCanonical);
    let p_d_m = k.p_d * 1e-9;
    let vs_quoted = p_d_m / 4.42e-11 - 1.0;
    outcome(
        (k.i56, k.c_j, k.p_v) == (-0.217, 0.414, 1.045) && (p_d_m / 4.21e-11 - 1.0).abs() < 5e-3 && vs_quoted.abs() <= 0.06 && p_d_m < 7.2e-11,
        format!(
            "(I56, c_J, p_V) = ({}, {}, {}), p_D = {:.3e} m ({:+.1}% vs 4.42e-11 m)",
            k.i56,
            k.c_j,
            k.p_v,
            p_d_m,
            vs_quoted * 100.0
        ),
    )
}

fn ground_splitting(well: f64, field: f64) -> f64 {
    let cfg = sweep_config(Preset::Sio2Si, Grid::Single(well), Grid::Single(field));
    run_width_sweep(&cfg, None).unwrap()[0].delta_mev
}

fn anchor() -> Outcome {
    let delta = ground_splitting(8.0, 1e8);
    outcome(
        (10.0..=35.0).contains(&delta),
        format!("Delta_0(8 nm, 1e8 V/m) = {delta:.3} meV, required [10, 35] meV"),
    )
}

fn bulk_ratio() -> Outcome {
    let cfg = sweep_config(
        Preset::Sio2Si,
        Grid::Single(8.0),
        Grid::Range { start: 5e7, stop: 1.5e8, step: 1e7 },
    );
    let rows = run_field_sweep(&cfg, None).unwrap();
    let ratios: Vec<f64> = rows
        .iter()
        .map(|r| r.delta_mev / bulk_estimate_for_field(r.field_v_per_m))
        .collect();
    let (lo, hi) = ratios.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    outcome(
        lo >= 1.5 && hi <= 4.0,
        format!("Delta_0 / bulk over {} fields in [{lo:.3}, {hi:.3}], required [1.5, 4]", ratios.len()),
    )
}

fn oscillation() -> Outcome {
    let cfg = sweep_config(
        Preset::Sige30Si,
        Grid::Range { start: 3.0, stop: 8.0, step: 0.02 },
        Grid::Single(0.0),
    );
    let rows = run_width_sweep(&cfg, None).unwrap();
    let w: Vec<f64> = rows.iter().map(|r| r.well_nm).collect();
    let d: Vec<f64> = rows.iter().map(|r| r.delta_mev).collect();
    let maxima: Vec<f64> = (1..d.len() - 1)
        .filter(|&i| d[i] > d[i - 1] && d[i] >= d[i + 1])
        .map(|i| w[i])
        .collect();
    let k0 = MaterialSystem::preset(Preset::Sige30Si).k0();
    let period = PI / k0;
    let spacing = if maxima.len() >= 2 {
        (maxima[maxima.len() - 1] - maxima[0]) / (maxima.len() - 1) as f64
    } else {
        f64::NAN
    };
    let envelope = |lo: f64, hi: f64| {
        w.iter()
            .zip(&d)
            .filter(|(x, _)| **x >= lo && **x <= hi)
            .map(|(_, y)| y.abs())
            .fold(0.0, f64::max)
    };
    let (start, end) = (envelope(3.0, 3.0 + period), envelope(8.0 - period, 8.0));
    outcome(
        (spacing / period - 1.0).abs() <= 0.2 && end < start,
        format!(
            "{} maxima, mean spacing {:.4} nm vs pi/K0 = {:.4} nm, envelope {:.3} meV at 3 nm -> {:.3} meV at 8 nm",
            maxima.len(),
            spacing,
            period,
            start,
            end
        ),
    )
}

fn field_monotonicity() -> Outcome {
    let cfg = sweep_config(
        Preset::Sio2Si,
        Grid::Single(6.0),
        Grid::Range { start: 2e7, stop: 1.5e8, step: 2.5e6 },
    );
    let rows = run_field_sweep(&cfg, None).unwrap();
    let worst_drop = rows
        .windows(2)
        .map(|p| p[0].delta_mev - p[1].delta_mev)
        .fold(f64::NEG_INFINITY, f64::max);
    let at_zero = ground_splitting(6.0, 0.0);
    let mut flat = sweep_config(Preset::Sio2Si, Grid::Single(6.0), Grid::Single(0.0));
    flat.material.delta_ec_ev = Some(0.0);
    let flat_delta = run_width_sweep(&flat, None).unwrap()[0].delta_mev;
    outcome(
        worst_drop <= 0.0 && at_zero > 0.0 && flat_delta == 0.0,
        format!(
            "{} fields, largest decrease {:.2e} meV; Delta_0(F = 0) = {:.3} meV, with zero band offset {:.1e} meV",
            rows.len(),
            worst_drop.max(0.0),
            at_zero,
            flat_delta
        ),
    )
}

fn determinism_and_invariants() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_valleysplit");
    let dir = tempfile::tempdir().unwrap();
    let run_sweep = |name: &str| {
        let path = dir.path().join(name);
        let status = Command::new(exe)
            .args(["sweep-width", "--well-nm", "4:6:0.1", "--field", "0,5e7", "--out"])
            .arg(&path)
            .status()
            .unwrap();
        (status.success(), std::fs::read(&path).unwrap_or_default())
    };
    let (ok_a, a) = run_sweep("a.csv");
    let (ok_b, b) = run_sweep("b.csv");
    let identical = ok_a && ok_b && !a.is_empty() && a == b;
    let oracles = Command::new(exe).arg("oracles").output().unwrap();
    let report = String::from_utf8_lossy(&oracles.stdout);
    let suites = ["gauge shift", "mirror symmetry", "normalization", "M-orthogonality", "triangle inequality"];
    let missing: Vec<&str> = suites
        .iter()
        .copied()
        .filter(|s| !report.lines().any(|l| l.starts_with("PASS") && l.contains(s)))
        .collect();
    let code = oracles.status.code();
    outcome(
        identical && code == Some(0) && missing.is_empty(),
        format!(
            "CSV byte-identical: {identical} ({} bytes); oracles exit {:?}; invariant suites not passing: {:?}",
            a.len(),
            code,
            missing
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 eigensolver oracle", Some(Duration::from_secs(1)), eigensolver_oracle),
        ("2 quadrature oracle", Some(Duration::from_secs(30)), quadrature_oracle),
        ("3 constants reproduction", None, constants_reproduction),
        ("4 anchor splitting at 8 nm, 1e8 V/m", Some(Duration::from_secs(5)), anchor),
        ("5 ratio to bulk inversion layer", None, bulk_ratio),
        ("6 oscillation with width", None, oscillation),
        ("7 field monotonicity", None, field_monotonicity),
        ("8 determinism and invariant suites", Some(Duration::from_secs(120)), determinism_and_invariants),
    ];
    let mut failed = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let out = check();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let passed = out.passed && in_time;
        if !passed {
            failed += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(" (limit {:.0} s)", l.as_secs_f64()));
        println!(
            "{} criterion {name}: {}; {:.3} s{budget}",
            if passed { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
