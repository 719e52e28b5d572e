//! Closed-form integrals of e^{a t} times a cubic polynomial.
//!
//! The moments μ_k = ∫₀ʰ t^k e^{a t} dt are evaluated by their power series
//! when |a h| is small (the integration-by-parts recurrence cancels there) and
//! by the recurrence μ_k = (h^k e^{a h} − k μ_{k−1}) / a otherwise.

use num_complex::Complex64;

const SERIES_LIMIT: f64 = 2.0;

/// μ_0 … μ_3 for ∫₀ʰ t^k e^{a t} dt.
pub fn exp_moments(a: Complex64, h: f64) -> [Complex64; 4] {
    if (a * h).norm() < SERIES_LIMIT {
        series_moments(a, h)
    } else {
        recurrence_moments(a, h)
    }
}

/// μ_k = h^{k+1} Σ_j (a h)^j / (j! (k + j + 1))
fn series_moments(a: Complex64, h: f64) -> [Complex64; 4] {
    let ah = a * h;
    let mut mu = [Complex64::new(0.0, 0.0); 4];
    for (k, m) in mu.iter_mut().enumerate() {
        let mut term = Complex64::new(1.0, 0.0); // (ah)^j / j!
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..80 {
            let contrib = term / (k + j + 1) as f64;
            sum += contrib;
            if contrib.norm() < 1e-18 * sum.norm() {
                break;
            }
            term = term * ah / (j + 1) as f64;
        }
        *m = sum * h.powi(k as i32 + 1);
    }
    mu
}

fn recurrence_moments(a: Complex64, h: f64) -> [Complex64; 4] {
    let e = (a * h).exp();
    let mut mu = [Complex64::new(0.0, 0.0); 4];
    mu[0] = (e - 1.0) / a;
    let mut hk = 1.0;
    for k in 1..4 {
        hk *= h;
        mu[k] = (e * hk - mu[k - 1] * k as f64) / a;
    }
    mu
}

/// ∫_{z0}^{z0+h} e^{a z} P(z − z0) dz with P(t) = Σ coeffs[k] t^k.
pub fn integrate_exp_cubic(a: Complex64, z0: f64, h: f64, coeffs: [f64; 4]) -> Complex64 {
    let mu = exp_moments(a, h);
    let poly: Complex64 = coeffs.iter().zip(&mu).map(|(c, m)| m * *c).sum();
    (a * z0).exp() * poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Composite Gauss–Legendre (5 points, 200 panels); independent of the moments.
    fn gauss(a: Complex64, z0: f64, h: f64, c: [f64; 4]) -> Complex64 {
        let x = [0.0, -0.538_469_310_105_683_1, 0.538_469_310_105_683_1, -0.906_179_845_938_664, 0.906_179_845_938_664];
        let w = [0.568_888_888_888_888_9, 0.478_628_670_499_366_5, 0.478_628_670_499_366_5, 0.236_926_885_056_189_1, 0.236_926_885_056_189_1];
        let panels = 200;
        let ph = h / panels as f64;
        let mut s = Complex64::new(0.0, 0.0);
        for p in 0..panels {
            let mid = (p as f64 + 0.5) * ph;
            for (xi, wi) in x.iter().zip(&w) {
                let t = mid + 0.5 * ph * xi;
                let poly = c[0] + t * (c[1] + t * (c[2] + t * c[3]));
                s += (a * (z0 + t)).exp() * poly * (0.5 * ph * wi);
            }
        }
        s
    }

    #[test]
    fn zero_frequency_reduces_to_polynomial_integral() {
        let mu = exp_moments(Complex64::new(0.0, 0.0), 0.5);
        for (k, m) in mu.iter().enumerate() {
            let exact = 0.5f64.powi(k as i32 + 1) / (k + 1) as f64;
            assert!((m.re - exact).abs() < 1e-16 && m.im == 0.0);
        }
    }

    #[test]
    fn both_branches_agree_at_the_switch() {
        let h = 0.1;
        for scale in [0.5, 1.0, 3.0] {
            let a = Complex64::new(0.0, -SERIES_LIMIT * scale / h);
            let (s, r) = (series_moments(a, h), recurrence_moments(a, h));
            for k in 0..4 {
                assert!((s[k] - r[k]).norm() < 1e-13 * s[k].norm(), "k = {k}, |ah| = {}", 2.0 * scale);
            }
        }
    }

    proptest! {
        #[test]
        fn matches_gauss_legendre(
            k in 0.0f64..40.0, h in 0.001f64..1.5, z0 in -10.0f64..10.0,
            c0 in -3.0f64..3.0, c1 in -3.0f64..3.0, c2 in -3.0f64..3.0, c3 in -3.0f64..3.0,
        ) {
            let a = Complex64::new(0.0, -k);
            let c = [c0, c1, c2, c3];
            let got = integrate_exp_cubic(a, z0, h, c);
            let want = gauss(a, z0, h, c);
            let scale: f64 = c.iter().map(|x| x.abs()).sum::<f64>() * h.max(h.powi(4));
            prop_assert!((got - want).norm() <= 1e-11 * scale.max(1e-300), "{got} vs {want}");
        }
    }
}
