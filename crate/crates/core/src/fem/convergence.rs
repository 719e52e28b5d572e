use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub h: f64,
    pub energy: f64,
    /// Richardson extrapolation (order 2) from this and the previous, coarser row.
    pub extrapolated: Option<f64>,
    /// Energy minus the reference value.
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceStudy {
    pub rows: Vec<ConvergenceRow>,
    /// Exact value when supplied, otherwise the finest extrapolation.
    pub reference: f64,
    pub reference_is_exact: bool,
    /// Order measured on the two finest meshes.
    pub observed_order: f64,
}

/// Ground-state energy on a sequence of meshes.
///
/// `solve` maps a target spacing to E₁. `exact`, when known, is used for the
/// per-row errors and the order; otherwise the order comes from three
/// successive energies.
pub fn convergence_study<F>(mut solve: F, h_sequence: &[f64], exact: Option<f64>) -> Result<ConvergenceStudy>
where
    F: FnMut(f64) -> Result<f64>,
{
    if h_sequence.len() < 3 {
        return Err(Error::invalid("h_sequence", "need at least 3 mesh sizes"));
    }
    let ratio = h_sequence[0] / h_sequence[1];
    let geometric = h_sequence
        .windows(2)
        .all(|w| w[1] > 0.0 && ((w[0] / w[1]) / ratio - 1.0).abs() < 1e-9);
    if !(ratio > 1.0 && geometric) {
        return Err(Error::invalid("h_sequence", "must be a decreasing geometric progression"));
    }
    let energies = h_sequence.iter().map(|&h| solve(h)).collect::<Result<Vec<f64>>>()?;
    let r2 = ratio * ratio;
    let extrapolated: Vec<Option<f64>> = (0..energies.len())
        .map(|i| (i > 0).then(|| energies[i] + (energies[i] - energies[i - 1]) / (r2 - 1.0)))
        .collect();
    let n = energies.len();
    let (reference, observed_order) = match exact {
        Some(e) => {
            let (e1, e2) = (energies[n - 2] - e, energies[n - 1] - e);
            (e, (e1 / e2).abs().ln() / ratio.ln())
        }
        None => {
            let (a, b, c) = (energies[n - 3], energies[n - 2], energies[n - 1]);
            (extrapolated[n - 1].unwrap(), ((a - b) / (b - c)).abs().ln() / ratio.ln())
        }
    };
    let rows = h_sequence
        .iter()
        .zip(&energies)
        .zip(&extrapolated)
        .map(|((&h, &energy), &extrapolated)| ConvergenceRow {
            h,
            energy,
            extrapolated,
            error: energy - reference,
        })
        .collect();
    Ok(ConvergenceStudy {
        rows,
        reference,
        reference_is_exact: exact.is_some(),
        observed_order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn recovers_synthetic_second_order() {
        let f = |h: f64| Ok(1.0 + 0.3 * h * h + 0.01 * h.powi(4));
        let s = convergence_study(f, &[0.4, 0.2, 0.1], None).unwrap();
        assert!((s.observed_order - 2.0).abs() < 0.02);
        let s = convergence_study(f, &[0.4, 0.2, 0.1], Some(1.0)).unwrap();
        assert!((s.observed_order - 2.0).abs() < 0.02);
        assert_relative_eq!(s.rows[2].extrapolated.unwrap(), 1.0, max_relative = 1e-4);
    }

    #[test]
    fn rejects_bad_sequences() {
        let f = |h: f64| Ok(h);
        assert!(convergence_study(f, &[0.2, 0.1], None).is_err());
        assert!(convergence_study(f, &[0.2, 0.1, 0.07], None).is_err());
        assert!(convergence_study(f, &[0.1, 0.2, 0.4], None).is_err());
    }
}
