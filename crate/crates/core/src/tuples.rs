//! Prime-tuple counting against the singular-series prediction: both sides
//! of the quantitative Hardy-Littlewood comparison
//! sum_{n <= x} prod_i 1_P(n + h_i)  vs  S(H) int_2^x dy / log^k y,
//! together with the log-log discrepancy exponent.

use crate::error::{Error, Result};
use crate::fitting::log_log_fit;
use crate::kahan::KahanSum;
use crate::primes::{is_prime, PrimeTable};
use crate::quad::adaptive_simpson;
use rayon::prelude::*;

/// Offset pattern H = {h_1 < ... < h_k}, nonnegative and strictly
/// increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleSpec {
    offsets: Vec<u64>,
}

impl TupleSpec {
    pub fn new(offsets: Vec<u64>) -> Result<Self> {
        if offsets.is_empty() {
            return Err(Error::Domain("offset list must be nonempty".into()));
        }
        for pair in offsets.windows(2) {
            if pair[1] <= pair[0] {
                return Err(Error::Domain(
                    "offsets must be strictly increasing".into(),
                ));
            }
        }
        Ok(TupleSpec { offsets })
    }

    pub fn offsets(&self) -> &[u64] {
        &self.offsets
    }

    pub fn k(&self) -> usize {
        self.offsets.len()
    }

    pub fn max_offset(&self) -> u64 {
        *self.offsets.last().unwrap()
    }

    /// True when no prime p has the offsets covering every residue class
    /// mod p. Only p <= k can be covered, so the check is finite.
    pub fn admissible(&self) -> Result<bool> {
        let mut p = 2u64;
        while p as usize <= self.k() {
            if is_prime(p) && nu(self, p)? as u64 == p {
                return Ok(false);
            }
            p += 1;
        }
        Ok(true)
    }
}

/// nu_H(p): the number of distinct residue classes of H modulo p.
pub fn nu(h: &TupleSpec, p: u64) -> Result<usize> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    let spread = h.max_offset() - h.offsets()[0];
    if p > spread {
        // Distinct offsets stay distinct mod p once p exceeds the spread.
        return Ok(h.k());
    }
    let mut residues: Vec<u64> = h.offsets().iter().map(|&o| o % p).collect();
    residues.sort_unstable();
    residues.dedup();
    Ok(residues.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularForm {
    /// prod_p (1 - nu/p) (1 - 1/p)^{-k}: the normalized product, which
    /// converges as the cutoff grows.
    Standard,
    /// prod_p (1 - nu/p)^k, without the normalizing (1 - 1/p)^{-k}
    /// factor: kept for comparison; its truncations decay toward 0 with
    /// the cutoff.
    Unnormalized,
}

impl SingularForm {
    pub fn label(self) -> &'static str {
        match self {
            SingularForm::Standard => "standard",
            SingularForm::Unnormalized => "unnormalized",
        }
    }
}

/// Truncated singular series over primes p <= cutoff.
///
/// The product is carried in log space with compensated accumulation:
/// k = 1 in standard form yields exactly 1.0 because every log term
/// cancels to exactly 0, and a vanishing factor short-circuits to exactly
/// 0.0.
pub fn singular_series(h: &TupleSpec, prime_cutoff: u64, form: SingularForm) -> Result<f64> {
    if prime_cutoff < 2 {
        return Err(Error::Domain(format!(
            "cutoff must be at least 2, got {prime_cutoff}"
        )));
    }
    let table = PrimeTable::sieve(prime_cutoff)?;
    let k = h.k() as f64;
    let mut log_sum = KahanSum::new();
    for &p in table.primes() {
        let v = nu(h, p)? as f64;
        let pf = p as f64;
        if v == pf {
            return Ok(0.0);
        }
        let log_main = (-v / pf).ln_1p();
        match form {
            SingularForm::Standard => {
                log_sum.add(log_main - k * (-1.0 / pf).ln_1p());
            }
            SingularForm::Unnormalized => {
                log_sum.add(k * log_main);
            }
        }
    }
    Ok(log_sum.value().exp())
}

// Bit-per-integer primality view over the table.
struct PrimeBitset {
    words: Vec<u64>,
    limit: u64,
}

impl PrimeBitset {
    fn build(table: &PrimeTable) -> PrimeBitset {
        let limit = table.limit();
        let mut words = vec![0u64; (limit / 64 + 1) as usize];
        for &p in table.primes() {
            words[(p / 64) as usize] |= 1 << (p % 64);
        }
        PrimeBitset { words, limit }
    }

    #[inline]
    fn contains(&self, n: u64) -> bool {
        n <= self.limit && self.words[(n / 64) as usize] >> (n % 64) & 1 == 1
    }
}

/// Number of n <= x with n + h_i prime for every offset.
pub fn tuple_count(table: &PrimeTable, h: &TupleSpec, x: u64) -> Result<u64> {
    check_count_capacity(table, h, x)?;
    let bits = PrimeBitset::build(table);
    Ok(count_upto(&bits, h, 1, x))
}

fn check_count_capacity(table: &PrimeTable, h: &TupleSpec, x: u64) -> Result<()> {
    if x < 1 {
        return Err(Error::Domain("x must be at least 1".into()));
    }
    let needed = x.checked_add(h.max_offset());
    match needed {
        Some(n) if n <= table.limit() => Ok(()),
        _ => Err(Error::Capacity(format!(
            "counting to x = {x} with max offset {} needs primes past the \
             table limit {}",
            h.max_offset(),
            table.limit()
        ))),
    }
}

fn count_upto(bits: &PrimeBitset, h: &TupleSpec, lo: u64, hi: u64) -> u64 {
    if hi < lo {
        return 0;
    }
    const CHUNK: u64 = 1 << 16;
    (0..=(hi - lo) / CHUNK)
        .into_par_iter()
        .map(|c| {
            let a = lo + c * CHUNK;
            let b = (a + CHUNK - 1).min(hi);
            let mut n_count = 0u64;
            for n in a..=b {
                if h.offsets().iter().all(|&o| bits.contains(n + o)) {
                    n_count += 1;
                }
            }
            n_count
        })
        .sum()
}

/// int_2^x dy / log^k y by adaptive quadrature at relative tolerance
/// 1e-10.
pub fn log_power_integral(x: f64, k: u32) -> Result<f64> {
    if !(x.is_finite() && x > 2.0) {
        return Err(Error::Domain(format!("x must exceed 2, got {x}")));
    }
    if k < 1 {
        return Err(Error::Domain("k must be at least 1".into()));
    }
    let ki = k as i32;
    Ok(adaptive_simpson(
        &|y: f64| y.ln().powi(-ki),
        2.0,
        x,
        1e-10,
    ))
}

/// One comparison point of the count against the predicted main term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscrepancyRecord {
    pub x: u64,
    pub lhs_count: u64,
    pub singular_series: f64,
    pub integral_term: f64,
    /// lhs_count - singular_series * integral_term.
    pub discrepancy: f64,
    /// k <= (log log x)^5 at this x.
    pub regime_k_ok: bool,
    /// max offset <= log^2 x at this x.
    pub regime_offsets_ok: bool,
}

/// Scan output: per-threshold records plus the fitted growth exponent of
/// |discrepancy| in x.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyScan {
    pub records: Vec<DiscrepancyRecord>,
    /// OLS slope of log |discrepancy| against log x; None when fewer than
    /// two nonzero discrepancies remain.
    pub fitted_slope: Option<f64>,
    /// Number of exactly-zero discrepancies excluded from the fit.
    pub excluded_zeros: usize,
}

/// Prime cutoff used for the singular series inside scans.
pub const SINGULAR_CUTOFF: u64 = 1_000_000;

pub fn discrepancy_scan(
    table: &PrimeTable,
    h: &TupleSpec,
    x_grid: &[u64],
) -> Result<DiscrepancyScan> {
    discrepancy_scan_with_cutoff(table, h, x_grid, SINGULAR_CUTOFF)
}

pub fn discrepancy_scan_with_cutoff(
    table: &PrimeTable,
    h: &TupleSpec,
    x_grid: &[u64],
    singular_cutoff: u64,
) -> Result<DiscrepancyScan> {
    if x_grid.is_empty() {
        return Err(Error::Domain("x grid must be nonempty".into()));
    }
    for pair in x_grid.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::Domain("x grid must be strictly increasing".into()));
        }
    }
    if x_grid[0] < 3 {
        return Err(Error::Domain(
            "grid points must exceed 2 for the comparison integral".into(),
        ));
    }
    let x_max = *x_grid.last().unwrap();
    check_count_capacity(table, h, x_max)?;

    let series = singular_series(h, singular_cutoff, SingularForm::Standard)?;
    let bits = PrimeBitset::build(table);
    let integrals = x_grid
        .par_iter()
        .map(|&x| log_power_integral(x as f64, h.k() as u32))
        .collect::<Result<Vec<f64>>>()?;

    // One cumulative counting pass across the grid thresholds.
    let mut records = Vec::with_capacity(x_grid.len());
    let mut running = 0u64;
    let mut lo = 1u64;
    for (&x, &integral_term) in x_grid.iter().zip(&integrals) {
        running += count_upto(&bits, h, lo, x);
        lo = x + 1;
        let xf = x as f64;
        let loglog = xf.ln().ln();
        records.push(DiscrepancyRecord {
            x,
            lhs_count: running,
            singular_series: series,
            integral_term,
            discrepancy: running as f64 - series * integral_term,
            regime_k_ok: h.k() as f64 <= loglog.powi(5),
            regime_offsets_ok: h.max_offset() as f64 <= xf.ln().powi(2),
        });
    }

    let mut xs = Vec::new();
    let mut ds = Vec::new();
    let mut excluded = 0usize;
    for r in &records {
        if r.discrepancy == 0.0 {
            excluded += 1;
        } else {
            xs.push(r.x as f64);
            ds.push(r.discrepancy.abs());
        }
    }
    let fitted_slope = if xs.len() >= 2 {
        Some(log_log_fit(&xs, &ds)?.slope)
    } else {
        None
    };
    Ok(DiscrepancyScan {
        records,
        fitted_slope,
        excluded_zeros: excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(offsets: &[u64]) -> TupleSpec {
        TupleSpec::new(offsets.to_vec()).unwrap()
    }

    #[test]
    fn tuple_spec_validation() {
        assert!(matches!(TupleSpec::new(vec![]), Err(Error::Domain(_))));
        assert!(matches!(
            TupleSpec::new(vec![2, 2]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            TupleSpec::new(vec![3, 1]),
            Err(Error::Domain(_))
        ));
        let h = spec(&[0, 2, 6]);
        assert_eq!(h.k(), 3);
        assert_eq!(h.max_offset(), 6);
    }

    #[test]
    fn nu_known_values() {
        let twin = spec(&[0, 2]);
        assert_eq!(nu(&twin, 3).unwrap(), 2);
        assert_eq!(nu(&twin, 2).unwrap(), 1);
        let triple = spec(&[0, 2, 4]);
        assert_eq!(nu(&triple, 3).unwrap(), 3);
        assert!(matches!(nu(&twin, 4), Err(Error::Domain(_))));
        // Past the spread every offset is its own class.
        assert_eq!(nu(&triple, 101).unwrap(), 3);
        assert_eq!(nu(&triple, 5).unwrap(), 3);
    }

    #[test]
    fn admissibility() {
        assert!(spec(&[0]).admissible().unwrap());
        assert!(spec(&[0, 2]).admissible().unwrap());
        assert!(!spec(&[0, 2, 4]).admissible().unwrap());
        assert!(spec(&[0, 2, 6]).admissible().unwrap());
    }

    #[test]
    fn singular_series_single_offset_is_exactly_one() {
        for cutoff in [10, 1_000, 100_000] {
            let v = singular_series(&spec(&[0]), cutoff, SingularForm::Standard).unwrap();
            assert_eq!(v, 1.0, "cutoff {cutoff}");
        }
    }

    #[test]
    fn singular_series_vanishes_exactly_when_covered() {
        let h = spec(&[0, 2, 4]);
        assert_eq!(
            singular_series(&h, 1_000, SingularForm::Standard).unwrap(),
            0.0
        );
        assert_eq!(singular_series(&h, 1_000, SingularForm::Unnormalized).unwrap(), 0.0);
    }

    #[test]
    fn twin_constant_matches_literature() {
        // 2 C_2 = 1.3203236316... ; truncation at 1e6 sits within ~1e-7.
        let v = singular_series(&spec(&[0, 2]), 1_000_000, SingularForm::Standard).unwrap();
        assert!((v - 1.3203236).abs() < 1e-5, "got {v}");
    }

    #[test]
    fn standard_truncations_are_cauchy() {
        let h = spec(&[0, 2]);
        let s = |c: u64| singular_series(&h, c, SingularForm::Standard).unwrap();
        let d1 = (s(200) - s(100)).abs();
        let d2 = (s(400) - s(200)).abs();
        let d3 = (s(800) - s(400)).abs();
        assert!(d1 > d2 && d2 > d3, "{d1} {d2} {d3}");
    }

    #[test]
    fn unnormalized_form_decays_with_cutoff() {
        let h = spec(&[0, 2]);
        let a = singular_series(&h, 100, SingularForm::Unnormalized).unwrap();
        let b = singular_series(&h, 10_000, SingularForm::Unnormalized).unwrap();
        let c = singular_series(&h, 1_000_000, SingularForm::Unnormalized).unwrap();
        assert!(a > b && b > c && c > 0.0, "{a} {b} {c}");
        assert_eq!(SingularForm::Unnormalized.label(), "unnormalized");
    }

    #[test]
    fn counts_small_cases() {
        let table = PrimeTable::sieve(100).unwrap();
        assert_eq!(tuple_count(&table, &spec(&[0]), 10).unwrap(), 4);
        assert_eq!(tuple_count(&table, &spec(&[0, 2]), 10).unwrap(), 2);
        // Monotone in x and bounded by pi(x + max offset).
        let mut prev = 0;
        for x in [10, 20, 40, 80] {
            let c = tuple_count(&table, &spec(&[0, 2]), x).unwrap();
            assert!(c >= prev);
            prev = c;
        }
        assert!(matches!(
            tuple_count(&table, &spec(&[0, 2]), 99),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn count_matches_trial_division() {
        let table = PrimeTable::sieve(2_000).unwrap();
        for offsets in [vec![0], vec![0, 2], vec![0, 4], vec![0, 2, 6], vec![0, 6, 12]] {
            let h = TupleSpec::new(offsets).unwrap();
            let x = 1_900 - h.max_offset();
            let fast = tuple_count(&table, &h, x).unwrap();
            let mut slow = 0;
            for n in 1..=x {
                if h.offsets().iter().all(|&o| is_prime(n + o)) {
                    slow += 1;
                }
            }
            assert_eq!(fast, slow, "H={:?}", h.offsets());
        }
    }

    #[test]
    fn log_power_integral_properties() {
        assert!(matches!(log_power_integral(2.0, 1), Err(Error::Domain(_))));
        assert!(matches!(log_power_integral(10.0, 0), Err(Error::Domain(_))));
        // Shrinks to zero at the left endpoint.
        let tiny = log_power_integral(2.0 + 1e-12, 1).unwrap();
        assert!(tiny.abs() < 1e-11);
        // Heavier log power means a smaller integral.
        let k1 = log_power_integral(1e6, 1).unwrap();
        let k2 = log_power_integral(1e6, 2).unwrap();
        assert!(k2 > 0.0 && k2 < k1);
        // Offset logarithmic integral li(1e6) - li(2) = 78626.504...
        assert!((k1 - 78626.504).abs() < 0.01, "got {k1}");
    }

    #[test]
    fn log_power_integral_matches_trapezoid_refinement() {
        let x = (2.0f64).exp().powi(2); // e^2
        let v = log_power_integral(x, 1).unwrap();
        let n = 2_000_000usize;
        let mut acc = KahanSum::new();
        let step = (x - 2.0) / n as f64;
        for i in 0..=n {
            let y = 2.0 + i as f64 * step;
            let w = if i == 0 || i == n { 0.5 } else { 1.0 };
            acc.add(w * step / y.ln());
        }
        assert!((v - acc.value()).abs() < 1e-6, "{v} vs {}", acc.value());
    }

    #[test]
    fn single_offset_scan_is_prime_counting() {
        let table = PrimeTable::sieve(100_000).unwrap();
        let h = spec(&[0]);
        let scan = discrepancy_scan(&table, &h, &[1_000, 10_000, 100_000]).unwrap();
        for r in &scan.records {
            assert_eq!(r.singular_series, 1.0);
            // k = 1: the discrepancy is exactly count - integral.
            assert_eq!(
                r.discrepancy,
                r.lhs_count as f64 - r.integral_term
            );
            assert!(r.regime_k_ok);
            assert!(r.regime_offsets_ok);
        }
        assert_eq!(scan.records[2].lhs_count, 9_592); // pi(1e5)
        assert_eq!(scan.excluded_zeros, 0);
        let slope = scan.fitted_slope.unwrap();
        assert!(slope < 1.0 && slope > 0.0, "slope {slope}");
    }

    #[test]
    fn inadmissible_tuple_scan() {
        let table = PrimeTable::sieve(10_000).unwrap();
        let h = spec(&[0, 2, 4]);
        let scan = discrepancy_scan(&table, &h, &[10, 100, 1_000]).unwrap();
        for r in &scan.records {
            assert_eq!(r.singular_series, 0.0);
            // Only n = 3 gives three primes 3, 5, 7.
            assert_eq!(r.lhs_count, 1);
            assert_eq!(r.discrepancy, 1.0);
        }
    }

    #[test]
    fn twin_scan_tracks_prediction() {
        let table = PrimeTable::sieve(100_002).unwrap();
        let h = spec(&[0, 2]);
        let scan =
            discrepancy_scan_with_cutoff(&table, &h, &[10_000, 50_000, 100_000], 100_000)
                .unwrap();
        let last = scan.records.last().unwrap();
        assert_eq!(last.lhs_count, 1_224); // twin pairs to 1e5
        let predicted = last.singular_series * last.integral_term;
        let rel = (last.lhs_count as f64 - predicted).abs() / last.lhs_count as f64;
        assert!(rel < 0.1, "prediction off by {rel}");
    }

    #[test]
    fn scan_validation() {
        let table = PrimeTable::sieve(1_000).unwrap();
        let h = spec(&[0, 2]);
        assert!(matches!(
            discrepancy_scan(&table, &h, &[]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            discrepancy_scan(&table, &h, &[100, 100]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            discrepancy_scan(&table, &h, &[2, 100]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            discrepancy_scan(&table, &h, &[100, 2_000]),
            Err(Error::Capacity(_))
        ));
    }
}
