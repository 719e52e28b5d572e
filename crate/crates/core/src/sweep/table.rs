use std::io::{Read, Write};
use std::path::Path;

use super::ResultRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 13] = [
    "material",
    "W_nm",
    "F_V_per_m",
    "n",
    "E_meV",
    "delta_meV",
    "lower_meV",
    "upper_meV",
    "CV_meV",
    "CF_meV",
    "Cdelta_meV",
    "bulk_meV",
    "error",
];

/// `%.{digits}g`: shortest of fixed or exponent form, trailing zeros removed.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{}{:02}", trim_zeros(mantissa), sign, exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn record(row: &ResultRow) -> Vec<String> {
    let g = |x: f64| format_sig(x, 9);
    vec![
        row.material.clone(),
        g(row.well_nm),
        g(row.field_v_per_m),
        row.n.to_string(),
        g(row.energy_mev),
        g(row.delta_mev),
        g(row.lower_mev),
        g(row.upper_mev),
        g(row.cv_mev),
        g(row.cf_mev),
        g(row.cdelta_mev),
        g(row.bulk_mev),
        row.error.clone().unwrap_or_default(),
    ]
}

pub fn write_csv<W: Write>(rows: &[ResultRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(record(row))?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_csv(rows, std::io::BufWriter::new(file))
}

pub fn read_csv<R: Read>(reader: R) -> Result<Vec<ResultRow>> {
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::Config(format!("unexpected CSV header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse()
                .map_err(|_| Error::Config(format!("column {} is not a number: `{}`", CSV_HEADER[i], &rec[i])))
        };
        rows.push(ResultRow {
            material: rec[0].to_string(),
            well_nm: num(1)?,
            field_v_per_m: num(2)?,
            n: rec[3]
                .parse()
                .map_err(|_| Error::Config(format!("bad subband index `{}`", &rec[3])))?,
            energy_mev: num(4)?,
            delta_mev: num(5)?,
            lower_mev: num(6)?,
            upper_mev: num(7)?,
            cv_mev: num(8)?,
            cf_mev: num(9)?,
            cdelta_mev: num(10)?,
            bulk_mev: num(11)?,
            error: (!rec[12].is_empty()).then(|| rec[12].to_string()),
        });
    }
    Ok(rows)
}
