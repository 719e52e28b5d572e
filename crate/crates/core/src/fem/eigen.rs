//! Lowest eigenpairs of the symmetric-definite tridiagonal pencil H c = E M c.
//!
//! Eigenvalues come from bisection on the inertia of H − λM (Sylvester's law
//! applies because M is positive definite, so the number of negative LDLᵀ
//! pivots equals the number of generalized eigenvalues below λ). Eigenvectors
//! come from inverse iteration with a pivoted tridiagonal LU, M-orthogonalised
//! against the lower states.

use crate::error::{Error, Result};
use crate::fem::assembly::SymTridiagonal;

const MAX_BISECTION: usize = 400;
const MAX_INVERSE: usize = 30;
const RESIDUAL_TOL: f64 = 1e-11;

/// Number of eigenvalues of (H, M) strictly below `lambda`.
pub fn sturm_count(h: &SymTridiagonal, m: &SymTridiagonal, lambda: f64) -> usize {
    let n = h.dim();
    let pivmin = f64::MIN_POSITIVE.sqrt() * (1.0 + h.norm_inf() + lambda.abs() * m.norm_inf());
    let mut count = 0;
    let mut d = 0.0;
    for i in 0..n {
        let a = h.diag[i] - lambda * m.diag[i];
        d = if i == 0 {
            a
        } else {
            let b = h.off[i - 1] - lambda * m.off[i - 1];
            a - b * b / d
        };
        if d.abs() < pivmin {
            d = -pivmin;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// LDLᵀ pivots of M; all must be positive.
pub fn check_positive_definite(m: &SymTridiagonal) -> Result<()> {
    let mut d = 0.0;
    for i in 0..m.dim() {
        d = if i == 0 {
            m.diag[0]
        } else {
            m.diag[i] - m.off[i - 1] * m.off[i - 1] / d
        };
        if !(d > 0.0) {
            return Err(Error::OverlapNotPositiveDefinite { row: i, pivot: d });
        }
    }
    Ok(())
}

/// Pivoted LU of a general tridiagonal matrix (the layout of LAPACK `gttrf`).
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(mut dl: Vec<f64>, mut d: Vec<f64>, mut du: Vec<f64>, tiny: f64) -> Self {
        let n = d.len();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let f = dl[i] / d[i];
                dl[i] = f;
                d[i + 1] -= f * du[i];
            } else {
                let f = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = f;
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - f * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -f;
                }
                swapped[i] = true;
            }
        }
        if n > 0 && d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for x in d.iter_mut() {
            if x.abs() < tiny {
                *x = tiny.copysign(*x);
            }
        }
        TridiagLu {
            dl,
            d,
            du,
            du2,
            swapped,
        }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.dl[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.du[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.du2[i] * b[i + 2];
            }
            b[i] = s / self.d[i];
        }
    }
}

fn m_dot(m: &SymTridiagonal, x: &[f64], y: &[f64]) -> f64 {
    m.quad_form(x, y)
}

/// Raw eigenpairs: ascending energies and M-orthonormal vectors.
pub(crate) struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

fn bracket(h: &SymTridiagonal, m: &SymTridiagonal, n_states: usize) -> (f64, f64) {
    let scale = 1.0 + h.norm_inf();
    let mut lo = -scale;
    while sturm_count(h, m, lo) > 0 {
        lo *= 2.0;
    }
    let mut hi = scale;
    while sturm_count(h, m, hi) < n_states {
        hi *= 2.0;
    }
    (lo, hi)
}

fn bisect(h: &SymTridiagonal, m: &SymTridiagonal, k: usize, mut lo: f64, mut hi: f64) -> Result<f64> {
    // invariant: count(lo) <= k < count(hi)
    for _ in 0..MAX_BISECTION {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            return Ok(mid.clamp(lo, hi));
        }
        if sturm_count(h, m, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Err(Error::NoConvergence {
        state: k,
        iterations: MAX_BISECTION,
    })
}

fn inverse_iteration(
    h: &SymTridiagonal,
    m: &SymTridiagonal,
    lambda: f64,
    lower: &[Vec<f64>],
    state: usize,
) -> Result<Vec<f64>> {
    let n = h.dim();
    let tiny = f64::EPSILON * (h.norm_inf() + lambda.abs() * m.norm_inf()).max(f64::MIN_POSITIVE);
    let lu = TridiagLu::factor(
        (0..n.saturating_sub(1)).map(|i| h.off[i] - lambda * m.off[i]).collect(),
        (0..n).map(|i| h.diag[i] - lambda * m.diag[i]).collect(),
        (0..n.saturating_sub(1)).map(|i| h.off[i] - lambda * m.off[i]).collect(),
        tiny,
    );
    // Deterministic start with components in every eigendirection.
    let mut x: Vec<f64> = (0..n)
        .map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).fract())
        .collect();
    let hnorm = h.norm_inf() + lambda.abs() * m.norm_inf();
    for _ in 0..MAX_INVERSE {
        let mut y = m.mul_vec(&x);
        lu.solve(&mut y);
        for v in lower {
            let c = m_dot(m, v, &y);
            y.iter_mut().zip(v).for_each(|(a, b)| *a -= c * b);
        }
        let norm = m_dot(m, &y, &y).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            break;
        }
        y.iter_mut().for_each(|a| *a /= norm);
        x = y;
        let hx = h.mul_vec(&x);
        let mx = m.mul_vec(&x);
        let res = hx
            .iter()
            .zip(&mx)
            .map(|(a, b)| (a - lambda * b).abs())
            .fold(0.0, f64::max);
        let xmax = x.iter().map(|v| v.abs()).fold(0.0, f64::max);
        if res <= RESIDUAL_TOL * hnorm * xmax {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence {
        state,
        iterations: MAX_INVERSE,
    })
}

/// Orients `v` so its first non-negligible entry is positive.
pub(crate) fn fix_sign(v: &mut [f64]) {
    let vmax = v.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12 * vmax) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

pub(crate) fn lowest_eigenpairs(h: &SymTridiagonal, m: &SymTridiagonal, n_states: usize) -> Result<Eigenpairs> {
    let dim = h.dim();
    if n_states == 0 || n_states >= dim {
        return Err(Error::TooManyStates {
            requested: n_states,
            available: dim,
        });
    }
    check_positive_definite(m)?;
    let (lo, hi) = bracket(h, m, n_states);
    let mut values = Vec::with_capacity(n_states);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n_states);
    for k in 0..n_states {
        let lambda = bisect(h, m, k, lo, hi)?;
        let mut v = inverse_iteration(h, m, lambda, &vectors, k)?;
        fix_sign(&mut v);
        values.push(lambda);
        vectors.push(v);
    }
    Ok(Eigenpairs { values, vectors })
}
