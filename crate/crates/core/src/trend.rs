//! Parametric trend fitting and seasonal differencing.
//!
//! A polynomial trend in rescaled time t = i/n is fitted by least squares
//! and the constancy test is re-run on the residuals: acceptance there means
//! the polynomial is an adequate description of the mean. Seasonal
//! differencing removes an additive periodic component before testing.

use crate::error::{Error, Result};
use crate::mean_test::{test_mean_constancy, TestConfig, TestOutcome};
use crate::series::TimeSeries;

/// Least-squares polynomial fit in rescaled time, with the constancy test
/// re-run on the residuals.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TrendFit {
    pub degree: usize,
    /// Coefficients of 1, t, t^2, ... with t = i/n.
    pub coefficients: Vec<f64>,
    /// Fitted values, one per observation.
    pub fitted: Vec<f64>,
    /// Constancy test applied to x - fitted.
    pub residual_test: TestOutcome,
}

/// Fits sum_d c_d (i/n)^d by least squares (Householder QR; the monomial
/// basis is well conditioned enough for the permitted degrees) and tests the
/// residuals for a constant mean. Degrees above 10 are rejected, as is a
/// system with more coefficients than observations.
pub fn fit_polynomial_trend(x: &TimeSeries, degree: usize, cfg: &TestConfig) -> Result<TrendFit> {
    if degree > 10 {
        return Err(Error::Config(format!(
            "polynomial degree must be at most 10, got {degree}"
        )));
    }
    let n = x.len();
    if degree + 1 > n {
        return Err(Error::Input(format!(
            "cannot fit {} coefficients to {n} observations",
            degree + 1
        )));
    }

    let grid: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
    let mut cols: Vec<Vec<f64>> = (0..=degree)
        .map(|d| grid.iter().map(|t| t.powi(d as i32)).collect())
        .collect();
    let mut rhs = x.values().to_vec();
    let coefficients = qr_least_squares(&mut cols, &mut rhs);

    let fitted: Vec<f64> = grid
        .iter()
        .map(|&t| {
            // Horner evaluation of the fitted polynomial at t.
            coefficients.iter().rev().fold(0.0, |acc, &c| acc * t + c)
        })
        .collect();
    let residuals: Vec<f64> = x
        .values()
        .iter()
        .zip(&fitted)
        .map(|(xi, fi)| xi - fi)
        .collect();
    let residual_test = test_mean_constancy(&TimeSeries::new(residuals)?, cfg)?;

    Ok(TrendFit {
        degree,
        coefficients,
        fitted,
        residual_test,
    })
}

/// Solves min ||y - A c|| for the matrix given by columns `cols`, in place,
/// by Householder QR with back substitution. Requires cols.len() <= y.len()
/// and full column rank (guaranteed for distinct-node monomials).
fn qr_least_squares(cols: &mut [Vec<f64>], y: &mut [f64]) -> Vec<f64> {
    let p = cols.len();
    for k in 0..p {
        let norm = cols[k][k..].iter().map(|&v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let alpha = if cols[k][k] >= 0.0 { -norm } else { norm };
        let mut v = cols[k][k..].to_vec();
        v[0] -= alpha;
        let vtv: f64 = v.iter().map(|&w| w * w).sum();

        for col in cols[k + 1..].iter_mut() {
            reflect(&v, vtv, &mut col[k..]);
        }
        reflect(&v, vtv, &mut y[k..]);
        cols[k][k] = alpha;
    }

    let mut c = vec![0.0; p];
    for i in (0..p).rev() {
        let mut s = y[i];
        for j in i + 1..p {
            s -= cols[j][i] * c[j];
        }
        c[i] = s / cols[i][i];
    }
    c
}

/// Applies the Householder reflector I - 2 v v^T / (v^T v) to `target`.
fn reflect(v: &[f64], vtv: f64, target: &mut [f64]) {
    let dot: f64 = v.iter().zip(target.iter()).map(|(a, b)| a * b).sum();
    let f = 2.0 * dot / vtv;
    for (vi, ti) in v.iter().zip(target.iter_mut()) {
        *ti -= f * vi;
    }
}

/// Differences at the given lag: entry i of the output is
/// x[i + lag] - x[i], so a component with exact period `lag` cancels. The
/// output is `lag` observations shorter.
pub fn seasonal_difference(x: &TimeSeries, lag: usize) -> Result<TimeSeries> {
    if lag < 1 {
        return Err(Error::Config("differencing lag must be at least 1".into()));
    }
    if x.len() <= lag {
        return Err(Error::Input(format!(
            "cannot difference {} observations at lag {lag}",
            x.len()
        )));
    }
    let v = x.values();
    TimeSeries::new((0..v.len() - lag).map(|i| v[i + lag] - v[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn cfg() -> TestConfig {
        TestConfig {
            psi_mc_reps: 300,
            ..TestConfig::default()
        }
    }

    fn noisy_poly(n: usize, coeffs: &[f64], sd: f64, seed: u64) -> TimeSeries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let v: Vec<f64> = (1..=n)
            .map(|i| {
                let t = i as f64 / n as f64;
                let mean = coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c);
                let z: f64 = StandardNormal.sample(&mut rng);
                mean + sd * z
            })
            .collect();
        TimeSeries::new(v).unwrap()
    }

    #[test]
    fn exactly_linear_data_recovers_coefficients() {
        let x = noisy_poly(200, &[2.0, 3.0], 0.0, 0);
        let fit = fit_polynomial_trend(&x, 1, &cfg()).unwrap();
        assert!((fit.coefficients[0] - 2.0).abs() < 1e-8);
        assert!((fit.coefficients[1] - 3.0).abs() < 1e-8);
    }

    #[test]
    fn degree_zero_fits_the_sample_mean() {
        let x = noisy_poly(300, &[1.5], 1.0, 3);
        let mean = x.values().iter().sum::<f64>() / 300.0;
        let fit = fit_polynomial_trend(&x, 0, &cfg()).unwrap();
        assert!((fit.coefficients[0] - mean).abs() < 1e-10);
        assert!(fit.fitted.iter().all(|&f| (f - mean).abs() < 1e-10));
    }

    #[test]
    fn residuals_are_orthogonal_to_basis() {
        let x = noisy_poly(400, &[1.0, -2.0, 0.5, 4.0], 0.5, 4);
        let fit = fit_polynomial_trend(&x, 3, &cfg()).unwrap();
        let n = x.len();
        let resid: Vec<f64> = x
            .values()
            .iter()
            .zip(&fit.fitted)
            .map(|(a, b)| a - b)
            .collect();
        let scale: f64 = x.values().iter().map(|v| v.abs()).sum::<f64>();
        for d in 0..=3 {
            let dot: f64 = resid
                .iter()
                .enumerate()
                .map(|(i, r)| r * ((i + 1) as f64 / n as f64).powi(d))
                .sum();
            assert!(dot.abs() <= 1e-6 * scale, "degree {d}: {dot}");
        }
    }

    #[test]
    fn residual_test_accepts_when_model_is_right() {
        // Cubic trend fitted with a cubic: residuals have constant mean.
        let x = noisy_poly(500, &[8.67, 3.7, -9.2, 7.2], 0.3, 5);
        let fit = fit_polynomial_trend(&x, 3, &cfg()).unwrap();
        assert!(!fit.residual_test.reject);
    }

    #[test]
    fn residual_test_rejects_when_model_is_wrong() {
        // A strong step is not explained by a linear trend.
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let v: Vec<f64> = (0..500)
            .map(|i| {
                let z: f64 = StandardNormal.sample(&mut rng);
                if i >= 250 {
                    4.0 + 0.3 * z
                } else {
                    0.3 * z
                }
            })
            .collect();
        let x = TimeSeries::new(v).unwrap();
        let fit = fit_polynomial_trend(&x, 1, &cfg()).unwrap();
        assert!(fit.residual_test.reject);
    }

    #[test]
    fn rejects_excessive_degree() {
        let x = noisy_poly(100, &[1.0], 1.0, 7);
        assert!(fit_polynomial_trend(&x, 11, &cfg()).is_err());
        let short = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(fit_polynomial_trend(&short, 5, &cfg()).is_err());
    }

    #[test]
    fn seasonal_difference_hand_values() {
        let x = TimeSeries::new(vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(
            seasonal_difference(&x, 2).unwrap().values(),
            &[2.0, 2.0]
        );
        let period: Vec<f64> = (0..48).map(|i| ((i % 12) as f64).sin()).collect();
        let x = TimeSeries::new(period).unwrap();
        let d = seasonal_difference(&x, 12).unwrap();
        assert!(d.values().iter().all(|&v| v == 0.0));
        assert_eq!(d.len(), 36);
    }

    #[test]
    fn seasonal_difference_rejects_bad_lags() {
        let x = TimeSeries::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(seasonal_difference(&x, 0).is_err());
        assert!(seasonal_difference(&x, 3).is_err());
    }
}
