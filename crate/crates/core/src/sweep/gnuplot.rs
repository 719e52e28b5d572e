use std::fmt::Write as _;
use std::path::Path;

use super::figures::Figure;
use super::table::format_sig;
use super::ResultRow;
use crate::error::{Error, Result};

fn distinct(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn distinct_n(rows: &[ResultRow]) -> Vec<usize> {
    let mut v: Vec<usize> = rows.iter().map(|r| r.n).collect();
    v.sort_unstable();
    v.dedup();
    v
}

fn mismatch(figure: Figure, reason: impl Into<String>) -> Error {
    Error::FigureMismatch {
        figure: figure.name().to_string(),
        reason: reason.into(),
    }
}

fn check_rows(rows: &[ResultRow], figure: Figure) -> Result<()> {
    if rows.is_empty() {
        return Err(mismatch(figure, "no rows"));
    }
    let fields = distinct(rows.iter().map(|r| r.field_v_per_m));
    let widths = distinct(rows.iter().map(|r| r.well_nm));
    match figure {
        Figure::Fig1 | Figure::Fig2 if fields.len() != 1 => {
            Err(mismatch(figure, format!("expected a single field, found {}", fields.len())))
        }
        Figure::Fig1 if !distinct_n(rows).contains(&0) => Err(mismatch(figure, "ground subband missing")),
        Figure::Fig3 if widths.len() != 1 => {
            Err(mismatch(figure, format!("expected a single width, found {}", widths.len())))
        }
        _ => Ok(()),
    }
}

/// Script text plotting `csv_name` (a path relative to the script's directory).
pub fn gnuplot_script(rows: &[ResultRow], figure: Figure, csv_name: &str) -> Result<String> {
    check_rows(rows, figure)?;
    let mut s = String::new();
    let name = figure.name();
    let material = &rows[0].material;
    writeln!(s, "# {name}: {material}, {} rows", rows.len()).unwrap();
    writeln!(s, "set datafile separator ','").unwrap();
    writeln!(s, "set datafile missing 'nan'").unwrap();
    writeln!(s, "data = '{csv_name}'").unwrap();
    writeln!(s, "set terminal pngcairo size 900,{} enhanced", if figure == Figure::Fig2 { 1000 } else { 600 }).unwrap();
    writeln!(s, "set output '{name}.png'").unwrap();
    writeln!(s, "set grid").unwrap();
    writeln!(s, "set key outside right").unwrap();
    let subbands = distinct_n(rows);
    match figure {
        Figure::Fig1 => {
            writeln!(s, "set xlabel 'Well width W (Å)'").unwrap();
            writeln!(s, "set ylabel 'Valley splitting Δ_0 (meV)'").unwrap();
            writeln!(s, "plot data every ::1 using ($2*10):($4==0 ? $6 : 1/0) with lines lw 2 title 'n = 0'").unwrap();
        }
        Figure::Fig2 => {
            writeln!(s, "set multiplot layout 2,1").unwrap();
            writeln!(s, "set xlabel 'Well width W (nm)'").unwrap();
            writeln!(s, "set ylabel 'Energy (meV)'").unwrap();
            writeln!(s, "set title '(a) without intervalley coupling'").unwrap();
            let a: Vec<String> = subbands
                .iter()
                .map(|n| format!("data every ::1 using 2:($4=={n} ? $5 : 1/0) with lines title 'E_{n}'"))
                .collect();
            writeln!(s, "plot {}", a.join(", \\\n     ")).unwrap();
            writeln!(s, "set title '(b) with intervalley coupling'").unwrap();
            let b: Vec<String> = subbands
                .iter()
                .flat_map(|n| {
                    [
                        format!("data every ::1 using 2:($4=={n} ? $7 : 1/0) with lines title 'E_{n} - Δ_{n}/2'"),
                        format!("data every ::1 using 2:($4=={n} ? $8 : 1/0) with lines dt 2 title 'E_{n} + Δ_{n}/2'"),
                    ]
                })
                .collect();
            writeln!(s, "plot {}", b.join(", \\\n     ")).unwrap();
            writeln!(s, "unset multiplot").unwrap();
        }
        Figure::Fig3 => {
            writeln!(s, "set xlabel 'Electric field F (V/m)'").unwrap();
            writeln!(s, "set ylabel 'Energy (meV)'").unwrap();
            writeln!(s, "set format x '%.1te%T'").unwrap();
            let p: Vec<String> = subbands
                .iter()
                .flat_map(|n| {
                    [
                        format!("data every ::1 using 3:($4=={n} ? $7 : 1/0) with lines title 'E_{n} - Δ_{n}/2'"),
                        format!("data every ::1 using 3:($4=={n} ? $8 : 1/0) with lines title 'E_{n} + Δ_{n}/2'"),
                    ]
                })
                .collect();
            writeln!(s, "plot {}", p.join(", \\\n     ")).unwrap();
        }
        Figure::Fig4 => {
            writeln!(s, "set xlabel 'Well width W (Å)'").unwrap();
            writeln!(s, "set ylabel 'Valley splitting Δ_n (meV)'").unwrap();
            let fields = distinct(rows.iter().map(|r| r.field_v_per_m));
            let p: Vec<String> = fields
                .iter()
                .flat_map(|f| {
                    let fs = format_sig(*f, 9);
                    subbands.iter().map(move |n| {
                        format!(
                            "data every ::1 using ($2*10):($3=={fs} && $4=={n} ? $6 : 1/0) with lines title 'F = {fs} V/m, n = {n}'"
                        )
                    })
                })
                .collect();
            writeln!(s, "plot {}", p.join(", \\\n     ")).unwrap();
        }
    }
    Ok(s)
}

/// Writes the script to `path`; the CSV is referenced by its file name.
pub fn emit_gnuplot(rows: &[ResultRow], figure: Figure, csv_path: &Path, path: &Path) -> Result<()> {
    let csv_name = csv_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| csv_path.display().to_string());
    let script = gnuplot_script(rows, figure, &csv_name)?;
    std::fs::write(path, script)?;
    Ok(())
}
