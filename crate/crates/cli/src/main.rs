use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use valleysplit::oracles::run_oracles;
use valleysplit::sweep::{
    emit_csv, emit_gnuplot, run_sweep, threads_from_env, write_csv, Figure, Grid, ResultRow, SweepAxis, SweepConfig,
};
use valleysplit::{ConstantsMode, Error, Preset};

const EXIT_USAGE: u8 = 1;
const EXIT_ORACLE: u8 = 2;
const EXIT_IO: u8 = 3;

const BUNDLED: [(Figure, &str); 4] = [
    (Figure::Fig1, include_str!("../configs/fig1.json")),
    (Figure::Fig2, include_str!("../configs/fig2.json")),
    (Figure::Fig3, include_str!("../configs/fig3.json")),
    (Figure::Fig4, include_str!("../configs/fig4.json")),
];

#[derive(Debug, Parser)]
#[command(name = "valleysplit", version, about = "Valley splitting of Si quantum wells by 1D finite elements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sweep the well width (rows ordered by W, F, n).
    SweepWidth(Overrides),
    /// Sweep the applied field (rows ordered by F, W, n).
    SweepField(Overrides),
    /// Run a bundled figure preset and write <fig>.csv and <fig>.gp into --out.
    Figure {
        /// fig1 | fig2 | fig3 | fig4
        figure: String,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run the oracle and invariant suites.
    Oracles(Overrides),
    /// Print the effective configuration as JSON.
    PrintConfig(Overrides),
}

#[derive(Debug, Args)]
struct Overrides {
    /// JSON config file; flags take precedence over its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Well width grid in nm: `6`, `4,6,8` or `start:stop:step`.
    #[arg(long)]
    well_nm: Option<String>,
    /// Field grid in V/m, same forms as --well-nm.
    #[arg(long)]
    field: Option<String>,
    /// sio2_si | sige30_si
    #[arg(long)]
    material: Option<String>,
    #[arg(long)]
    subbands: Option<usize>,
    /// Target mesh spacing in nm.
    #[arg(long)]
    mesh_h: Option<f64>,
    /// paper-canonical | analytic
    #[arg(long)]
    constants_mode: Option<String>,
    /// Output file (sweeps) or directory (figure).
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Io(String),
    Oracle,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) | Error::Csv(_) => Failure::Io(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl Overrides {
    fn resolve(&self, base: Option<SweepConfig>) -> Result<SweepConfig, Failure> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                SweepConfig::from_json(&text)?
            }
            None => base.unwrap_or_default(),
        };
        if let Some(w) = &self.well_nm {
            cfg.geometry.well_nm = Grid::parse(w)?;
        }
        if let Some(f) = &self.field {
            cfg.field_v_per_m = Grid::parse(f)?;
        }
        if let Some(m) = &self.material {
            cfg.material.preset = m.parse::<Preset>()?;
        }
        if let Some(n) = self.subbands {
            cfg.subbands = n;
        }
        if let Some(h) = self.mesh_h {
            cfg.mesh_h_nm = h;
        }
        if let Some(mode) = &self.constants_mode {
            cfg.constants_mode = mode.parse::<ConstantsMode>()?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn bundled(figure: Figure) -> SweepConfig {
    let text = BUNDLED.iter().find(|(f, _)| *f == figure).expect("every figure is bundled").1;
    SweepConfig::from_json(text).expect("bundled configs are valid")
}

fn sweep(overrides: &Overrides, axis: SweepAxis) -> Result<(), Failure> {
    let cfg = overrides.resolve(None)?;
    let rows = run_sweep(&cfg, axis, threads_from_env()?)?;
    let out = overrides.out.clone().or_else(|| cfg.output.csv.clone());
    match out {
        Some(path) => emit_csv(&rows, &path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => {
            let stdout = std::io::stdout();
            write_csv(&rows, stdout.lock())?;
        }
    }
    report_errors(&rows);
    Ok(())
}

fn report_errors(rows: &[ResultRow]) {
    let failed = rows.iter().filter(|r| !r.is_ok()).count();
    if failed > 0 {
        eprintln!("warning: {failed} of {} rows failed; see the error column", rows.len());
    }
}

fn figure(name: &str, overrides: &Overrides) -> Result<(), Failure> {
    let figure: Figure = name.parse()?;
    let cfg = overrides.resolve(Some(bundled(figure)))?;
    let dir = overrides.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| Failure::Io(format!("{}: {e}", dir.display())))?;
    let rows = run_sweep(&cfg, figure.axis(), threads_from_env()?)?;
    let csv = dir.join(format!("{figure}.csv"));
    let script = dir.join(format!("{figure}.gp"));
    emit_csv(&rows, &csv).map_err(|e| io_at(&csv, e))?;
    emit_gnuplot(&rows, figure, &csv, &script).map_err(|e| match e {
        Error::Io(_) => io_at(&script, e),
        other => other.into(),
    })?;
    report_errors(&rows);
    println!("{}", csv.display());
    println!("{}", script.display());
    Ok(())
}

fn io_at(path: &Path, e: Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn oracles(overrides: &Overrides) -> Result<(), Failure> {
    let cfg = overrides.resolve(None)?;
    let report = run_oracles(&cfg)?;
    let text = format!("{report}\n");
    match &overrides.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Oracle)
    }
}

fn print_config(overrides: &Overrides) -> Result<(), Failure> {
    let cfg = overrides.resolve(None)?;
    let json = cfg.effective().to_json() + "\n";
    match &overrides.out {
        Some(path) => std::fs::write(path, json).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(json.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let outcome = match &cli.command {
        Command::SweepWidth(o) => sweep(o, SweepAxis::Width),
        Command::SweepField(o) => sweep(o, SweepAxis::Field),
        Command::Figure { figure: name, overrides } => figure(name, overrides),
        Command::Oracles(o) => oracles(o),
        Command::PrintConfig(o) => print_config(o),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("I/O error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Oracle) => {
            eprintln!("oracle failure");
            ExitCode::from(EXIT_ORACLE)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_configs_match_the_presets() {
        for figure in Figure::ALL {
            assert_eq!(bundled(figure), figure.config(), "{figure}");
        }
    }
}
