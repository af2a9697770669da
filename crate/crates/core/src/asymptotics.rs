//! Small-lambda behaviour of I(lambda) = int_1^inf e^{(i pi - lambda) x} dpsi(x):
//! closed-form main terms, Laplace tail values for the error-envelope
//! estimates, a log-log exponent fit for the measured error magnitude, and
//! a dyadic convergence probe for the power-law comparison integral.

use crate::chebyshev::ChebyshevAccumulator;
use crate::error::{Error, Result};
use crate::fitting::log_log_fit;
use crate::kahan::KahanSum;
use crate::quad::adaptive_simpson;
use crate::special::{gamma, upper_incomplete_gamma};
use crate::stieltjes::{split_main_error, truncation_bound, Damping, TestFunction};
use num_complex::Complex64;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::f64::consts::PI;

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::Domain(format!(
            "lambda must be a positive finite number, got {lambda}"
        )));
    }
    Ok(())
}

/// int_1^inf e^{(i pi - lambda) x} dx = -e^{-lambda} / (lambda - i pi).
pub fn main_term_i1(lambda: f64) -> Result<Complex64> {
    check_lambda(lambda)?;
    Ok(-(-lambda).exp() / Complex64::new(lambda, -PI))
}

/// The same main term after one integration by parts:
/// -e^{-lambda} / (lambda - i pi)^2.
pub fn main_term_after_parts(lambda: f64) -> Result<Complex64> {
    check_lambda(lambda)?;
    let d = Complex64::new(lambda, -PI);
    Ok(-(-lambda).exp() / (d * d))
}

/// Exact and asymptotic values of the Laplace tail
/// int_1^inf x^theta e^{-lambda x} dx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceTail {
    /// Gamma(theta+1, lambda) / lambda^{theta+1}, the tail itself.
    pub exact: f64,
    /// Gamma(theta+1) / lambda^{theta+1}, the full-axis surrogate the tail
    /// approaches as lambda -> 0.
    pub asymptotic: f64,
    /// exact / asymptotic, a value in (0, 1) that increases toward 1 as
    /// lambda shrinks.
    pub ratio: f64,
}

pub fn laplace_tail(theta: f64, lambda: f64) -> Result<LaplaceTail> {
    if !(theta.is_finite() && theta >= 0.0) {
        return Err(Error::Domain(format!(
            "theta must be a nonnegative finite number, got {theta}"
        )));
    }
    check_lambda(lambda)?;
    let scale = lambda.powf(theta + 1.0);
    let exact = upper_incomplete_gamma(theta + 1.0, lambda)? / scale;
    let asymptotic = gamma(theta + 1.0) / scale;
    Ok(LaplaceTail {
        exact,
        asymptotic,
        ratio: exact / asymptotic,
    })
}

/// Least-squares exponent of a magnitude curve against 1/lambda.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentFit {
    pub lambda_grid: Vec<f64>,
    pub magnitudes: Vec<f64>,
    /// Slope of log(magnitude) vs log(1/lambda).
    pub fitted_slope: f64,
    /// RMS residual of the fit in log space.
    pub residual: f64,
}

fn check_grid(lambda_grid: &[f64]) -> Result<()> {
    if lambda_grid.len() < 6 {
        return Err(Error::Domain(format!(
            "lambda grid needs at least 6 points, got {}",
            lambda_grid.len()
        )));
    }
    for pair in lambda_grid.windows(2) {
        // partial_cmp so that a NaN entry fails validation too
        if pair[1].partial_cmp(&pair[0]) != Some(Ordering::Less) {
            return Err(Error::Domain(
                "lambda grid must be strictly decreasing".into(),
            ));
        }
    }
    for &l in lambda_grid {
        if !(l.is_finite() && l > 0.0 && l <= 3.0) {
            return Err(Error::Domain(format!(
                "lambda grid entries must lie in (0, 3], got {l}"
            )));
        }
    }
    Ok(())
}

/// Fits log(magnitude) against log(1/lambda) by ordinary least squares.
/// The grid must be strictly decreasing with at least 6 points in (0, 3].
pub fn fit_exponent(lambda_grid: &[f64], magnitudes: &[f64]) -> Result<ExponentFit> {
    check_grid(lambda_grid)?;
    if magnitudes.len() != lambda_grid.len() {
        return Err(Error::Domain(format!(
            "{} magnitudes for {} grid points",
            magnitudes.len(),
            lambda_grid.len()
        )));
    }
    let inv: Vec<f64> = lambda_grid.iter().map(|l| 1.0 / l).collect();
    let fit = log_log_fit(&inv, magnitudes)?;
    Ok(ExponentFit {
        lambda_grid: lambda_grid.to_vec(),
        magnitudes: magnitudes.to_vec(),
        fitted_slope: fit.slope,
        residual: fit.rms_residual,
    })
}

/// Measures |I_2(lambda)| = |I(lambda) - main term| over a lambda grid at
/// truncation height X and fits its growth exponent as lambda -> 0.
///
/// The smallest grid lambda is the precision-critical one: X must be large
/// enough there that the truncation bound is under 1% of the measured
/// error magnitude, otherwise the fit would be reading truncation noise.
pub fn fit_error_exponent(
    acc: &ChebyshevAccumulator,
    lambda_grid: &[f64],
    x_upper: f64,
) -> Result<ExponentFit> {
    check_grid(lambda_grid)?;
    let magnitudes = lambda_grid
        .par_iter()
        .map(|&lambda| {
            let g = TestFunction::new(lambda, Damping::Exponential)?;
            let report = split_main_error(acc, &g, x_upper)?;
            Ok(report.error_term.norm())
        })
        .collect::<Result<Vec<f64>>>()?;
    let smallest = *lambda_grid.last().unwrap();
    let g = TestFunction::new(smallest, Damping::Exponential)?;
    let bound = truncation_bound(&g, x_upper)?;
    let signal = *magnitudes.last().unwrap();
    // partial_cmp so that a NaN bound fails the gate
    if bound.partial_cmp(&(0.01 * signal)) != Some(Ordering::Less) {
        return Err(Error::Precision(format!(
            "truncation bound {bound:.3e} is not below 1% of the error \
             magnitude {signal:.3e} at lambda = {smallest}; raise X"
        )));
    }
    fit_exponent(lambda_grid, &magnitudes)
}

/// One row of the power-law convergence probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdProbeRow {
    pub lambda: f64,
    pub converged: bool,
    /// Extrapolated value of the integral when convergent, NaN otherwise.
    pub value: f64,
}

// Dyadic doublings examined by the probe; the segment ratio of the pure
// power integrand is constant, so a moderate horizon suffices.
const PROBE_DOUBLINGS: usize = 32;
// A segment ratio at or above this is treated as non-contracting.
const PROBE_RATIO_CEILING: f64 = 0.9999;

/// Classifies int_1^inf lambda x^{theta - lambda - 1} dx for each grid
/// lambda by a Cauchy test on dyadic segments [2^j, 2^{j+1}]: segment
/// integrals of the comparison power law shrink by the constant factor
/// 2^{theta - lambda}, so contraction of observed segments certifies
/// convergence and the geometric tail can be added in closed form.
/// Non-finite or nonpositive lambda entries produce divergent rows with a
/// NaN value rather than an error.
pub fn power_law_threshold_probe(
    theta: f64,
    lambda_grid: &[f64],
) -> Result<Vec<ThresholdProbeRow>> {
    if !(theta.is_finite() && theta >= 0.0) {
        return Err(Error::Domain(format!(
            "theta must be a nonnegative finite number, got {theta}"
        )));
    }
    Ok(lambda_grid
        .par_iter()
        .map(|&lambda| probe_one(theta, lambda))
        .collect())
}

fn probe_one(theta: f64, lambda: f64) -> ThresholdProbeRow {
    if !(lambda.is_finite() && lambda > 0.0) {
        return ThresholdProbeRow {
            lambda,
            converged: false,
            value: f64::NAN,
        };
    }
    let f = |x: f64| lambda * x.powf(theta - lambda - 1.0);
    let mut partial = KahanSum::new();
    let mut prev = f64::NAN;
    let mut last = f64::NAN;
    let mut lo = 1.0f64;
    for _ in 0..PROBE_DOUBLINGS {
        let hi = 2.0 * lo;
        let seg = adaptive_simpson(&f, lo, hi, 1e-12);
        if seg == 0.0 {
            // Underflow of a strictly decaying segment: the remaining tail
            // is below representable range, no extrapolation needed.
            return ThresholdProbeRow {
                lambda,
                converged: true,
                value: partial.value(),
            };
        }
        partial.add(seg);
        prev = last;
        last = seg;
        lo = hi;
    }
    let ratio = last / prev;
    if !(0.0..PROBE_RATIO_CEILING).contains(&ratio) {
        return ThresholdProbeRow {
            lambda,
            converged: false,
            value: f64::NAN,
        };
    }
    ThresholdProbeRow {
        lambda,
        converged: true,
        value: partial.value() + last * ratio / (1.0 - ratio),
    }
}

/// Smallest grid lambda the probe still classifies as convergent.
pub fn empirical_threshold(rows: &[ThresholdProbeRow]) -> Option<f64> {
    rows.iter()
        .filter(|r| r.converged)
        .map(|r| r.lambda)
        .fold(None, |best, l| match best {
            Some(b) if b <= l => Some(b),
            _ => Some(l),
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss_panels;

    #[test]
    fn i1_closed_form_at_one() {
        let v = main_term_i1(1.0).unwrap();
        // -e^{-1}(1 + i pi)/(1 + pi^2), written out.
        let scale = (-1.0f64).exp() / (1.0 + PI * PI);
        assert!((v.re + scale).abs() < 1e-15);
        assert!((v.im + scale * PI).abs() < 1e-15);
        // Documented decimals are looser.
        assert!((v.re - (-0.033846)).abs() < 1e-4);
        assert!((v.im - (-0.106329)).abs() < 1e-4);
    }

    #[test]
    fn i1_matches_truncated_quadrature() {
        for &lambda in &[0.2, 0.5, 1.0, 2.0] {
            let t = 50.0 / lambda;
            let s = Complex64::new(-lambda, PI);
            let quad = gauss_panels(&|x| (s * x).exp(), 1.0, t, 1.0);
            let closed = main_term_i1(lambda).unwrap();
            let allowance = (-lambda * t).exp() / Complex64::new(lambda, -PI).norm() + 1e-8;
            assert!(
                (closed - quad).norm() < allowance,
                "lambda={lambda}: closed {closed} quad {quad}"
            );
        }
    }

    #[test]
    fn i1_small_lambda_limit_is_minus_i_over_pi() {
        let v = main_term_i1(1e-9).unwrap();
        assert!(v.re.abs() < 1e-8);
        assert!((v.im + 1.0 / PI).abs() < 1e-8);
        assert!((v.norm() - 1.0 / PI).abs() < 1e-8);
    }

    #[test]
    fn i1_algebraic_inverse() {
        for &lambda in &[0.05, 0.3, 1.0, 2.7] {
            let v = main_term_i1(lambda).unwrap();
            let recovered = v * -(Complex64::new(lambda, -PI)) * lambda.exp();
            assert!((recovered - 1.0).norm() < 1e-14, "lambda={lambda}");
        }
    }

    #[test]
    fn after_parts_matches_shifted_quadrature() {
        // int_1^inf (x-1) e^{sx} dx = e^s / s^2 = -e^{-lambda}/(lambda-i pi)^2,
        // an independent route to the same closed form.
        for &lambda in &[0.5, 1.0, 2.0] {
            let t = 60.0 / lambda;
            let s = Complex64::new(-lambda, PI);
            let quad = gauss_panels(&|x| (x - 1.0) * (s * x).exp(), 1.0, t, 1.0);
            let closed = main_term_after_parts(lambda).unwrap();
            assert!(
                (closed - quad).norm() < 1e-8 * (1.0 + closed.norm()),
                "lambda={lambda}: closed {closed} quad {quad}"
            );
        }
    }

    #[test]
    fn after_parts_magnitude_decreases_in_lambda() {
        let a = main_term_after_parts(1.0).unwrap().norm();
        let b = main_term_after_parts(2.0).unwrap().norm();
        assert!(b < a);
    }

    #[test]
    fn complex_magnitude_identity() {
        for &lambda in &[0.01, 0.5, 1.0, 3.0] {
            let d = Complex64::new(lambda, -PI);
            assert!((d.norm_sqr() - (lambda * lambda + PI * PI)).abs() < 1e-12);
        }
    }

    #[test]
    fn domain_errors_on_bad_lambda() {
        assert!(matches!(main_term_i1(0.0), Err(Error::Domain(_))));
        assert!(matches!(main_term_i1(-1.0), Err(Error::Domain(_))));
        assert!(matches!(
            main_term_after_parts(f64::NAN),
            Err(Error::Domain(_))
        ));
        assert!(matches!(laplace_tail(-0.5, 1.0), Err(Error::Domain(_))));
        assert!(matches!(laplace_tail(0.5, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn laplace_tail_closed_cases() {
        let t = laplace_tail(0.0, 1.0).unwrap();
        assert!((t.exact - (-1.0f64).exp()).abs() < 1e-12);
        assert!((t.asymptotic - 1.0).abs() < 1e-12);

        let t = laplace_tail(1.0, 1.0).unwrap();
        assert!((t.exact - 2.0 * (-1.0f64).exp()).abs() < 1e-12);

        let t = laplace_tail(0.5, 0.5).unwrap();
        // Asymptotic numerator is Gamma(3/2) = sqrt(pi)/2.
        let expected = 0.5f64 * PI.sqrt() / 0.5f64.powf(1.5);
        assert!((t.asymptotic - expected).abs() < 1e-10);
    }

    #[test]
    fn laplace_tail_matches_quadrature() {
        for &(theta, lambda) in &[(0.5, 0.5), (2.0, 1.0), (0.0, 0.25), (1.5, 2.0)] {
            let t = laplace_tail(theta, lambda).unwrap();
            let horizon = 60.0 / lambda;
            let quad = adaptive_simpson(
                &|x: f64| x.powf(theta) * (-lambda * x).exp(),
                1.0,
                horizon,
                1e-12,
            );
            assert!(
                (t.exact - quad).abs() < 1e-9 * (1.0 + quad.abs()),
                "theta={theta} lambda={lambda}: {} vs {quad}",
                t.exact
            );
        }
    }

    #[test]
    fn laplace_ratio_near_one_for_small_lambda_and_monotone() {
        let t = laplace_tail(0.5, 0.01).unwrap();
        assert!(t.ratio >= 0.99 && t.ratio <= 1.0, "ratio {}", t.ratio);
        let mut prev = f64::INFINITY;
        for i in 0..10 {
            let lambda = 0.01 * 1.7f64.powi(i);
            let r = laplace_tail(0.5, lambda).unwrap().ratio;
            assert!(r < prev, "ratio not decreasing at lambda={lambda}");
            assert!(r > 0.0 && r <= 1.0);
            prev = r;
        }
    }

    fn geometric_grid(hi: f64, lo: f64, n: usize) -> Vec<f64> {
        let step = (lo / hi).powf(1.0 / (n as f64 - 1.0));
        (0..n).map(|i| hi * step.powi(i as i32)).collect()
    }

    #[test]
    fn fit_recovers_planted_envelope_exponents() {
        // Envelope magnitude of int_1^inf e^{-lambda x} d(x^theta):
        // theta Gamma(theta, lambda) / lambda^theta, slope theta as
        // lambda -> 0.
        let grid = geometric_grid(0.01, 0.001, 8);
        for &theta in &[0.5, 1.0] {
            let mags: Vec<f64> = grid
                .iter()
                .map(|&l| theta * upper_incomplete_gamma(theta, l).unwrap() / l.powf(theta))
                .collect();
            let fit = fit_exponent(&grid, &mags).unwrap();
            assert!(
                (fit.fitted_slope - theta).abs() < 0.1,
                "theta={theta}: slope {}",
                fit.fitted_slope
            );
            assert!(fit.residual >= 0.0 && fit.residual < 0.05);
        }
    }

    #[test]
    fn fit_recovers_after_parts_envelope_slope() {
        // |lambda - i pi| Gamma(theta+1, lambda) / lambda^{theta+1} with
        // theta = 1/2: the bound that motivates the 3/2 exponent.
        let grid = geometric_grid(0.01, 0.001, 8);
        let mags: Vec<f64> = grid
            .iter()
            .map(|&l| {
                (l * l + PI * PI).sqrt() * upper_incomplete_gamma(1.5, l).unwrap() / l.powf(1.5)
            })
            .collect();
        let fit = fit_exponent(&grid, &mags).unwrap();
        assert!(
            (fit.fitted_slope - 1.5).abs() < 0.1,
            "slope {}",
            fit.fitted_slope
        );
    }

    #[test]
    fn fit_recovers_linear_remainder_slope() {
        // R(x) = x: the envelope integral is e^{-lambda}/lambda, slope 1.
        let grid = geometric_grid(0.01, 0.001, 8);
        let mags: Vec<f64> = grid.iter().map(|&l| (-l).exp() / l).collect();
        let fit = fit_exponent(&grid, &mags).unwrap();
        assert!((fit.fitted_slope - 1.0).abs() < 0.01, "slope {}", fit.fitted_slope);
    }

    #[test]
    fn fit_grid_validation() {
        let mags = [1.0; 8];
        assert!(matches!(
            fit_exponent(&[0.5, 0.4, 0.3, 0.2, 0.1], &mags[..5]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            fit_exponent(&[0.5, 0.5, 0.4, 0.3, 0.2, 0.1], &mags[..6]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            fit_exponent(&[3.5, 3.0, 2.0, 1.0, 0.5, 0.1], &mags[..6]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            fit_exponent(&[0.6, 0.5, 0.4, 0.3, 0.2, 0.1], &mags[..7]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn measured_exponent_runs_on_real_data() {
        let acc = ChebyshevAccumulator::new(100_000).unwrap();
        let grid = geometric_grid(1.0, 0.3, 6);
        let fit = fit_error_exponent(&acc, &grid, 100_000.0).unwrap();
        assert!(fit.fitted_slope.is_finite());
        assert!(fit.residual.is_finite() && fit.residual >= 0.0);
        assert_eq!(fit.magnitudes.len(), 6);
        assert!(fit.magnitudes.iter().all(|&m| m > 0.0));
    }

    #[test]
    fn measured_exponent_rejects_truncation_noise() {
        // At X = 1000 and lambda = 0.005 the discarded tail bound dwarfs
        // the signal; the fit must refuse rather than report a slope.
        let acc = ChebyshevAccumulator::new(1_000).unwrap();
        let grid = geometric_grid(0.01, 0.005, 6);
        assert!(matches!(
            fit_error_exponent(&acc, &grid, 1_000.0),
            Err(Error::Precision(_))
        ));
    }

    #[test]
    fn probe_closed_form_and_classification() {
        let rows = power_law_threshold_probe(0.5, &[2.0, 0.6, 0.5, 0.4]).unwrap();
        assert!(rows[0].converged);
        assert!((rows[0].value - 4.0 / 3.0).abs() < 1e-6);
        assert!(rows[1].converged);
        assert!((rows[1].value - 6.0).abs() < 1e-4);
        // lambda = theta sits exactly on the threshold: segments do not
        // contract, so it must classify as divergent.
        assert!(!rows[2].converged);
        assert!(rows[2].value.is_nan());
        assert!(!rows[3].converged);
        assert!(rows[3].value.is_nan());
    }

    #[test]
    fn probe_handles_degenerate_lambdas() {
        let rows = power_law_threshold_probe(0.5, &[0.0, -1.0, f64::NAN]).unwrap();
        for r in &rows {
            assert!(!r.converged);
            assert!(r.value.is_nan());
        }
        assert!(matches!(
            power_law_threshold_probe(f64::NAN, &[1.0]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn probe_theta_zero_is_exactly_one() {
        let rows = power_law_threshold_probe(0.0, &[0.3, 1.0, 2.5]).unwrap();
        for r in &rows {
            assert!(r.converged, "lambda={}", r.lambda);
            assert!((r.value - 1.0).abs() < 1e-8, "lambda={}", r.lambda);
        }
    }

    #[test]
    fn empirical_threshold_picks_smallest_convergent() {
        let rows = power_law_threshold_probe(0.5, &[2.0, 1.0, 0.6, 0.45, 0.4]).unwrap();
        assert_eq!(empirical_threshold(&rows), Some(0.6));
        let none = power_law_threshold_probe(0.5, &[0.1, 0.2]).unwrap();
        assert_eq!(empirical_threshold(&none), None);
    }
}
