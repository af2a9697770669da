//! Prime generation. A segmented sieve of Eratosthenes produces the full
//! list of primes up to a limit; the segment size bounds working memory so
//! limits in the 10^8..10^9 range stay desktop-friendly. Tables can be
//! written to and reloaded from a plain-text cache file.

use crate::error::{Error, Result};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

/// Default sieve segment: one MiB of odd-number flags (2 MiB of integers
/// per segment).
pub const DEFAULT_SEGMENT_BYTES: usize = 1 << 20;

/// All primes up to and including `limit`, in increasing order.
///
/// Invariants: `primes` is strictly increasing, starts at 2, and contains
/// exactly the primes `<= limit`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    /// Sieve with the default memory budget.
    pub fn sieve(limit: u64) -> Result<Self> {
        Self::sieve_with_segment_bytes(limit, DEFAULT_SEGMENT_BYTES)
    }

    /// Segmented sieve of Eratosthenes. `segment_bytes` is the number of
    /// odd-integer flags held in memory at once (>= 1024 enforced).
    pub fn sieve_with_segment_bytes(limit: u64, segment_bytes: usize) -> Result<Self> {
        if limit < 2 {
            return Err(Error::Domain(format!(
                "sieve: limit must be at least 2, got {limit}"
            )));
        }
        let seg_len = segment_bytes.max(1024);
        let root = isqrt(limit);

        // Base sieve over the odd numbers up to sqrt(limit).
        let base_len = (root / 2) as usize + 1; // index i <-> odd number 2i+1
        let mut base_composite = vec![false; base_len];
        let mut base_primes: Vec<u64> = Vec::new();
        let mut i = 1usize; // start at 3
        while 2 * i < root as usize {
            if !base_composite[i] {
                let p = (2 * i + 1) as u64;
                base_primes.push(p);
                let mut j = (p * p) / 2;
                while j < base_len as u64 {
                    base_composite[j as usize] = true;
                    j += p;
                }
            }
            i += 1;
        }

        let mut primes: Vec<u64> = Vec::with_capacity(estimate_prime_count(limit));
        primes.push(2);
        for &p in &base_primes {
            if p <= limit {
                primes.push(p);
            }
        }

        // Segments cover the odd numbers in (root, limit].
        let mut low = root + 1;
        if low.is_multiple_of(2) {
            low += 1;
        }
        let mut flags = vec![false; seg_len];
        while low <= limit {
            let span = 2 * seg_len as u64; // integers covered by this segment
            let high = low.saturating_add(span).min(limit + 1); // exclusive
            let used = ((high - low) / 2 + (high - low) % 2) as usize;
            flags[..used].fill(false);
            for &p in &base_primes {
                let p2 = p * p;
                if p2 >= high {
                    break;
                }
                let mut m = p2.max(low.div_ceil(p) * p);
                if m % 2 == 0 {
                    m += p;
                }
                while m < high {
                    flags[((m - low) / 2) as usize] = true;
                    m += 2 * p;
                }
            }
            for (idx, &composite) in flags[..used].iter().enumerate() {
                if !composite {
                    primes.push(low + 2 * idx as u64);
                }
            }
            // First odd number at or beyond the exclusive segment end.
            low = if high % 2 == 1 { high } else { high + 1 };
        }

        Ok(PrimeTable { limit, primes })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// 1-indexed: `nth_prime(1) = 2`.
    pub fn nth_prime(&self, n: usize) -> Result<u64> {
        if n == 0 {
            return Err(Error::Index("nth_prime: index is 1-based".into()));
        }
        self.primes.get(n - 1).copied().ok_or_else(|| {
            Error::Index(format!(
                "nth_prime: n={n} exceeds table of {} primes (limit {})",
                self.primes.len(),
                self.limit
            ))
        })
    }

    /// Write the table as newline-delimited decimals, first line = limit.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut w = BufWriter::new(file);
        writeln!(w, "{}", self.limit)?;
        for &p in &self.primes {
            writeln!(w, "{p}")?;
        }
        w.flush()?;
        Ok(())
    }

    /// Load a cached table if its header limit covers `requested_limit`;
    /// primes beyond the request are dropped so the invariant "exactly the
    /// primes <= limit" holds for the returned table. Returns `Ok(None)`
    /// when the cache exists but is too small to serve the request.
    pub fn load(path: &Path, requested_limit: u64) -> Result<Option<Self>> {
        if requested_limit < 2 {
            return Err(Error::Domain(format!(
                "load: requested limit must be at least 2, got {requested_limit}"
            )));
        }
        let file = std::fs::File::open(path)?;
        let mut lines = BufReader::new(file).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("prime cache: empty file".into()))??;
        let file_limit: u64 = header
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("prime cache: bad header limit {header:?}")))?;
        if file_limit < requested_limit {
            return Ok(None);
        }
        let mut primes = Vec::with_capacity(estimate_prime_count(requested_limit));
        let mut last = 0u64;
        for line in lines {
            let line = line?;
            let value: u64 = line
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("prime cache: bad entry {line:?}")))?;
            if value <= last {
                return Err(Error::Parse(
                    "prime cache: entries must be strictly increasing".into(),
                ));
            }
            last = value;
            if value > requested_limit {
                break;
            }
            primes.push(value);
        }
        if primes.first() != Some(&2) {
            return Err(Error::Parse("prime cache: table must start at 2".into()));
        }
        Ok(Some(PrimeTable {
            limit: requested_limit,
            primes,
        }))
    }
}

fn estimate_prime_count(limit: u64) -> usize {
    if limit < 10 {
        return 8;
    }
    let x = limit as f64;
    (x / x.ln() * 1.15) as usize + 16
}

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r > 0 && r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// Deterministic trial-division primality test. Fine for arguments up to
/// around 10^12; the tuple module uses it to validate small moduli.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    if n.is_multiple_of(3) {
        return n == 3;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n.is_multiple_of(d) || n.is_multiple_of(d + 2) {
            return false;
        }
        d += 6;
    }
    true
}
