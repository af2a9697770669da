//! The Chebyshev step function psi(x) = sum over prime powers p^k <= x of
//! log p, held as an explicit jump table so it can serve both point
//! queries and exact Stieltjes jump sums. A variant restricted to first
//! powers (the theta function) is available for comparison; every report
//! downstream states which variant produced it.

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::primes::PrimeTable;

/// Which jump set the accumulator carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiVariant {
    /// All prime powers p^k <= limit, each with weight log p (psi).
    PrimePowers,
    /// First powers only (theta).
    PrimesOnly,
}

impl PsiVariant {
    pub fn label(self) -> &'static str {
        match self {
            PsiVariant::PrimePowers => "prime-power",
            PsiVariant::PrimesOnly => "prime-only",
        }
    }
}

/// Jump table of the Chebyshev function up to `limit`.
///
/// `locations` is strictly increasing; `cumulative[i]` is the compensated
/// prefix sum of `weights[..=i]`, so `psi(x)` is a binary search away.
#[derive(Debug, Clone)]
pub struct ChebyshevAccumulator {
    limit: u64,
    variant: PsiVariant,
    locations: Vec<u64>,
    weights: Vec<f64>,
    cumulative: Vec<f64>,
}

impl ChebyshevAccumulator {
    /// Sieve primes internally and build the prime-power accumulator.
    pub fn new(limit: u64) -> Result<Self> {
        let table = PrimeTable::sieve(limit)?;
        Ok(Self::from_table(&table, PsiVariant::PrimePowers))
    }

    pub fn with_variant(limit: u64, variant: PsiVariant) -> Result<Self> {
        let table = PrimeTable::sieve(limit)?;
        Ok(Self::from_table(&table, variant))
    }

    /// Build from an existing prime table; the accumulator inherits the
    /// table's limit. Weights are `log p` computed once per prime and
    /// shared by all powers of that prime.
    pub fn from_table(table: &PrimeTable, variant: PsiVariant) -> Self {
        let limit = table.limit();
        let mut jumps: Vec<(u64, f64)> = Vec::with_capacity(table.len() + 64);
        for &p in table.primes() {
            let w = (p as f64).ln();
            jumps.push((p, w));
            if variant == PsiVariant::PrimePowers {
                let mut q = p.checked_mul(p);
                while let Some(v) = q {
                    if v > limit {
                        break;
                    }
                    jumps.push((v, w));
                    q = v.checked_mul(p);
                }
            }
        }
        jumps.sort_unstable_by_key(|&(loc, _)| loc);

        let mut locations = Vec::with_capacity(jumps.len());
        let mut weights = Vec::with_capacity(jumps.len());
        let mut cumulative = Vec::with_capacity(jumps.len());
        let mut acc = KahanSum::new();
        for (loc, w) in jumps {
            locations.push(loc);
            weights.push(w);
            acc.add(w);
            cumulative.push(acc.value());
        }
        ChebyshevAccumulator {
            limit,
            variant,
            locations,
            weights,
            cumulative,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn variant(&self) -> PsiVariant {
        self.variant
    }

    /// Number of jumps.
    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn locations(&self) -> &[u64] {
        &self.locations
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Prefix sums aligned with `locations`.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn jumps(&self) -> impl Iterator<Item = (u64, f64)> + '_ {
        self.locations
            .iter()
            .copied()
            .zip(self.weights.iter().copied())
    }

    /// Number of jumps at locations <= x (x nonnegative, within 2^53).
    fn jump_count_at(&self, x: f64) -> usize {
        let bound = x.floor() as u64;
        self.locations.partition_point(|&loc| loc <= bound)
    }

    /// psi(x) with the right-continuous convention: the jump at x itself
    /// is included. Requires 0 <= x <= limit.
    pub fn psi(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Range(format!(
                "psi: argument must be a finite nonnegative real, got {x}"
            )));
        }
        if x > self.limit as f64 {
            return Err(Error::Range(format!(
                "psi: x={x} exceeds accumulator limit {}",
                self.limit
            )));
        }
        let idx = self.jump_count_at(x);
        Ok(if idx == 0 { 0.0 } else { self.cumulative[idx - 1] })
    }

    /// The remainder R(x) = psi(x) - x.
    pub fn remainder(&self, x: f64) -> Result<f64> {
        Ok(self.psi(x)? - x)
    }
}

/// Von Mangoldt function: log p when n = p^k, zero otherwise. Direct
/// factor probe; no table required.
pub fn von_mangoldt(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut m = n;
            while m.is_multiple_of(d) {
                m /= d;
            }
            return if m == 1 { (d as f64).ln() } else { 0.0 };
        }
        d += 1;
    }
    (n as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    const LN2: f64 = std::f64::consts::LN_2;

    fn acc(limit: u64) -> ChebyshevAccumulator {
        ChebyshevAccumulator::new(limit).unwrap()
    }

    #[test]
    fn von_mangoldt_cases() {
        assert_eq!(von_mangoldt(1), 0.0);
        assert_eq!(von_mangoldt(6), 0.0);
        assert_eq!(von_mangoldt(12), 0.0);
        assert!((von_mangoldt(2) - LN2).abs() < 1e-15);
        assert!((von_mangoldt(8) - LN2).abs() < 1e-15);
        assert!((von_mangoldt(9) - 3f64.ln()).abs() < 1e-15);
        assert!((von_mangoldt(97) - 97f64.ln()).abs() < 1e-15);
        assert_eq!(von_mangoldt(0), 0.0);
    }

    #[test]
    fn psi_point_values() {
        let a = acc(16);
        assert_eq!(a.psi(1.5).unwrap(), 0.0);
        assert!((a.psi(2.0).unwrap() - LN2).abs() < 1e-15);
        let want10 = 3.0 * LN2 + 2.0 * 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((a.psi(10.0).unwrap() - want10).abs() < 1e-12);
        assert!((a.remainder(10.0).unwrap() - (want10 - 10.0)).abs() < 1e-12);
        assert!((a.remainder(2.0).unwrap() - (LN2 - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn psi_rejects_out_of_range() {
        let a = acc(100);
        assert!(matches!(a.psi(101.0), Err(Error::Range(_))));
        assert!(matches!(a.psi(-1.0), Err(Error::Range(_))));
        assert!(matches!(a.psi(f64::NAN), Err(Error::Range(_))));
        assert!(a.psi(100.0).is_ok());
    }

    #[test]
    fn jump_locations_strictly_increasing_and_within_limit() {
        let a = acc(10_000);
        assert!(a.locations().windows(2).all(|w| w[0] < w[1]));
        assert!(a.locations().iter().all(|&l| (2..=10_000).contains(&l)));
        // Every location is a prime power: weight must equal von Mangoldt.
        for (loc, w) in a.jumps().take(2000) {
            assert!((w - von_mangoldt(loc)).abs() < 1e-14, "at {loc}");
        }
    }

    #[test]
    fn psi_matches_von_mangoldt_prefix() {
        let a = acc(5000);
        let mut running = KahanSum::new();
        for n in 1..=5000u64 {
            running.add(von_mangoldt(n));
            let got = a.psi(n as f64).unwrap();
            assert!(
                (got - running.value()).abs() <= 1e-10 * running.value().max(1.0),
                "psi({n})"
            );
        }
    }

    #[test]
    fn psi_is_nondecreasing_and_near_x() {
        let a = acc(100_000);
        let mut prev = 0.0;
        for x in (0..=1000).map(|k| k as f64 * 100.0) {
            let v = a.psi(x).unwrap();
            assert!(v >= prev);
            prev = v;
        }
        let ratio = a.psi(100_000.0).unwrap() / 100_000.0;
        assert!((0.9..=1.1).contains(&ratio), "psi(1e5)/1e5 = {ratio}");
    }

    #[test]
    fn prime_only_variant_drops_higher_powers() {
        let table = PrimeTable::sieve(100).unwrap();
        let psi = ChebyshevAccumulator::from_table(&table, PsiVariant::PrimePowers);
        let theta = ChebyshevAccumulator::from_table(&table, PsiVariant::PrimesOnly);
        assert_eq!(theta.len(), 25);
        assert!(psi.len() > theta.len());
        let want = LN2 + 3f64.ln() + 5f64.ln() + 7f64.ln();
        assert!((theta.psi(10.0).unwrap() - want).abs() < 1e-12);
        assert_eq!(theta.variant().label(), "prime-only");
    }
}
