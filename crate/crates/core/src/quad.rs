//! Numerical quadrature helpers: adaptive Simpson for smooth real
//! integrands and fixed Gauss-Legendre panels for oscillatory complex ones.

use crate::kahan::KahanComplex;
use num_complex::Complex64;

const MAX_DEPTH: u32 = 60;

/// Adaptive Simpson quadrature with the usual Richardson acceptance test.
/// `rel_tol` is applied against the running local estimate with a small
/// absolute floor, so integrals that are genuinely tiny terminate as well.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol, MAX_DEPTH)
}

#[inline]
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    rel_tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let refined = left + right;
    let err = refined - whole;
    let tol = 15.0 * (rel_tol * refined.abs()).max(1e-300).max(rel_tol * 1e-10);
    if depth == 0 || err.abs() <= tol {
        return refined + err / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, rel_tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, rel_tol, depth - 1)
}

// Gauss-Legendre 8-point nodes/weights on [-1, 1]. Digits kept as
// published even where f64 rounds them.
#[allow(clippy::excessive_precision)]
const GL8_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329_0,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
#[allow(clippy::excessive_precision)]
const GL8_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362_0,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Integrate a complex-valued function by splitting `[a, b]` into panels of
/// width at most `max_panel`, with GL-8 on each panel. For integrands of the
/// form (smooth) * exp(i*pi*x) a unit panel resolves half an oscillation
/// period, which puts the per-panel error near machine precision.
pub fn gauss_panels<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64, max_panel: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let span = b - a;
    let n = (span / max_panel).ceil().max(1.0) as usize;
    let h = span / n as f64;
    let mut acc = KahanComplex::new();
    for k in 0..n {
        let lo = a + h * k as f64;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        for j in 0..4 {
            let dx = half * GL8_NODES[j];
            let w = half * GL8_WEIGHTS[j];
            acc.add(f(mid - dx) * w);
            acc.add(f(mid + dx) * w);
        }
    }
    acc.value()
}
