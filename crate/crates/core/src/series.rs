//! Partial sums of the alternating series sum_{n>=1} (-1)^n n/p_n and the
//! companion gap series sum (-1)^n / (n^theta (p_{n+1} - p_n)), plus
//! repeated-averaging convergence acceleration.
//!
//! Summation is block-structured: terms are accumulated in fixed blocks of
//! `SUM_BLOCK` indices with a compensated sum per block, and block totals
//! are merged in index order. Block boundaries depend only on the term
//! index, so a partial sum S_k is a pure function of k: recomputing with a
//! larger N reproduces earlier partial sums bit for bit, and the block map
//! can be farmed out to any number of workers without changing the result.

use crate::error::{Error, Result};
use crate::kahan::KahanSum;
use crate::primes::PrimeTable;
use rayon::prelude::*;

/// Terms per summation block. Fixed: changing it changes rounding at the
/// last-ulp level, so it is part of the numeric contract.
pub const SUM_BLOCK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AccelMethod {
    /// No acceleration: report the raw partial sum.
    None,
    /// One round of adjacent pair averaging.
    PairAverage,
    /// `rounds` rounds of adjacent pair averaging.
    IteratedAverage,
}

impl AccelMethod {
    pub fn label(self) -> &'static str {
        match self {
            AccelMethod::None => "none",
            AccelMethod::PairAverage => "pair-average",
            AccelMethod::IteratedAverage => "iterated-average",
        }
    }
}

/// Outcome of a partial-sum evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub terms_used: usize,
    pub raw_partial_sum: f64,
    pub accelerated_value: f64,
    pub method: AccelMethod,
    /// Distance between the last two averaging iterates; a heuristic
    /// stability indicator, not a rigorous bound.
    pub estimated_uncertainty: f64,
}

#[inline]
fn erdos_term(primes: &[u64], n: usize) -> f64 {
    // n is 1-based; sign (-1)^n.
    let t = n as f64 / primes[n - 1] as f64;
    if n.is_multiple_of(2) {
        t
    } else {
        -t
    }
}

#[inline]
fn gap_term(primes: &[u64], theta: f64, n: usize) -> f64 {
    let gap = (primes[n] - primes[n - 1]) as f64;
    let t = 1.0 / ((n as f64).powf(theta) * gap);
    if n.is_multiple_of(2) {
        t
    } else {
        -t
    }
}

// Sum of one complete or partial block [lo, hi] of 1-based indices.
fn block_sum<F: Fn(usize) -> f64 + Sync>(term: &F, lo: usize, hi: usize) -> f64 {
    let mut acc = KahanSum::new();
    for n in lo..=hi {
        acc.add(term(n));
    }
    acc.value()
}

// Merge complete-block sums for blocks covering [1, k], then the partial
// block tail, all in index order.
fn partial_sum_blocked<F: Fn(usize) -> f64 + Sync>(term: &F, k: usize) -> f64 {
    let full_blocks = k / SUM_BLOCK;
    let sums: Vec<f64> = (0..full_blocks)
        .into_par_iter()
        .map(|b| block_sum(term, b * SUM_BLOCK + 1, (b + 1) * SUM_BLOCK))
        .collect();
    let mut merged = KahanSum::new();
    for s in sums {
        merged.add(s);
    }
    if !k.is_multiple_of(SUM_BLOCK) {
        merged.add(block_sum(term, full_blocks * SUM_BLOCK + 1, k));
    }
    merged.value()
}

// Partial sums S_k for k in [n - window + 1, n], each the same pure
// function of k that `partial_sum_blocked` computes.
fn window_partial_sums<F: Fn(usize) -> f64 + Sync>(term: &F, n: usize, window: usize) -> Vec<f64> {
    let window = window.min(n);
    let start = n - window + 1; // first k reported
    let lead_blocks = (start - 1) / SUM_BLOCK;
    let sums: Vec<f64> = (0..lead_blocks)
        .into_par_iter()
        .map(|b| block_sum(term, b * SUM_BLOCK + 1, (b + 1) * SUM_BLOCK))
        .collect();
    let mut merged = KahanSum::new();
    for s in sums {
        merged.add(s);
    }

    let mut out = Vec::with_capacity(window);
    let mut partial = KahanSum::new();
    // Replay the current (incomplete) block up to start - 1.
    for k in lead_blocks * SUM_BLOCK + 1..start {
        partial.add(term(k));
    }
    for k in start..=n {
        if k > start && (k - 1) % SUM_BLOCK == 0 {
            // k opens a new block: fold the completed one into the merge.
            // At k == start a block-aligned window begins a fresh block and
            // there is nothing to fold (lead blocks are already merged).
            merged.add(partial.value());
            partial = KahanSum::new();
        }
        partial.add(term(k));
        let mut snapshot = merged;
        snapshot.add(partial.value());
        out.push(snapshot.value());
    }
    out
}

fn check_capacity(available: usize, needed: usize, what: &str) -> Result<()> {
    if needed == 0 {
        return Err(Error::Domain(format!("{what}: need at least one term")));
    }
    if needed > available {
        return Err(Error::Capacity(format!(
            "{what}: {needed} terms requested but table holds {available} primes"
        )));
    }
    Ok(())
}

/// S_N = sum_{n=1}^{N} (-1)^n n / p_n.
pub fn erdos_partial_sum(table: &PrimeTable, n: usize) -> Result<f64> {
    check_capacity(table.len(), n, "erdos_partial_sum")?;
    let primes = table.primes();
    Ok(partial_sum_blocked(&|k| erdos_term(primes, k), n))
}

/// The trailing `window` partial sums S_{N-window+1} ..= S_N.
pub fn erdos_partial_sums_window(table: &PrimeTable, n: usize, window: usize) -> Result<Vec<f64>> {
    check_capacity(table.len(), n, "erdos_partial_sums_window")?;
    if window == 0 {
        return Err(Error::Domain("window must be positive".into()));
    }
    let primes = table.primes();
    Ok(window_partial_sums(&|k| erdos_term(primes, k), n, window))
}

/// Partial sum of the prime-gap series sum (-1)^n / (n^theta (p_{n+1}-p_n)).
/// Needs N + 1 primes.
pub fn gap_series_partial(table: &PrimeTable, theta: f64, n: usize) -> Result<f64> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::Domain(format!(
            "gap_series_partial: theta must be positive, got {theta}"
        )));
    }
    check_capacity(table.len().saturating_sub(1), n, "gap_series_partial")?;
    let primes = table.primes();
    Ok(partial_sum_blocked(&|k| gap_term(primes, theta, k), n))
}

/// Trailing window of gap-series partial sums.
pub fn gap_series_window(
    table: &PrimeTable,
    theta: f64,
    n: usize,
    window: usize,
) -> Result<Vec<f64>> {
    if !(theta.is_finite() && theta > 0.0) {
        return Err(Error::Domain(format!(
            "gap_series_window: theta must be positive, got {theta}"
        )));
    }
    check_capacity(table.len().saturating_sub(1), n, "gap_series_window")?;
    if window == 0 {
        return Err(Error::Domain("window must be positive".into()));
    }
    let primes = table.primes();
    Ok(window_partial_sums(
        &|k| gap_term(primes, theta, k),
        n,
        window,
    ))
}

/// Repeated adjacent averaging of a partial-sum sequence.
///
/// One round replaces s_i by (s_i + s_{i+1})/2, shortening the sequence by
/// one. `PairAverage` applies exactly one round; `IteratedAverage` applies
/// `rounds`. The reported value is the tail of the final sequence, and the
/// uncertainty is the distance between the tails of the last two rounds
/// (for `None`, between the last two raw partial sums).
pub fn accelerate(partial_sums: &[f64], method: AccelMethod, rounds: usize) -> Result<SeriesResult> {
    if partial_sums.len() < 2 {
        return Err(Error::Domain(
            "accelerate: need at least two partial sums".into(),
        ));
    }
    if rounds == 0 {
        return Err(Error::Domain("accelerate: rounds must be >= 1".into()));
    }
    let raw = *partial_sums.last().unwrap();
    let effective_rounds = match method {
        AccelMethod::None => 0,
        AccelMethod::PairAverage => 1,
        AccelMethod::IteratedAverage => rounds,
    };
    if partial_sums.len() < effective_rounds + 1 {
        return Err(Error::Domain(format!(
            "accelerate: sequence of {} is shorter than rounds+1 = {}",
            partial_sums.len(),
            effective_rounds + 1
        )));
    }

    if effective_rounds == 0 {
        let prev = partial_sums[partial_sums.len() - 2];
        return Ok(SeriesResult {
            terms_used: partial_sums.len(),
            raw_partial_sum: raw,
            accelerated_value: raw,
            method,
            estimated_uncertainty: (raw - prev).abs(),
        });
    }

    let mut buf = partial_sums.to_vec();
    let mut prev_iterate = raw;
    let mut iterate = raw;
    for _ in 0..effective_rounds {
        for i in 0..buf.len() - 1 {
            buf[i] = 0.5 * (buf[i] + buf[i + 1]);
        }
        buf.pop();
        prev_iterate = iterate;
        iterate = *buf.last().unwrap();
    }
    Ok(SeriesResult {
        terms_used: partial_sums.len(),
        raw_partial_sum: raw,
        accelerated_value: iterate,
        method,
        estimated_uncertainty: (iterate - prev_iterate).abs(),
    })
}

/// End-to-end estimate: trailing-window partial sums, then acceleration.
/// `terms_used` reflects the full N, not the window length.
pub fn erdos_series(
    table: &PrimeTable,
    n: usize,
    method: AccelMethod,
    rounds: usize,
    window: usize,
) -> Result<SeriesResult> {
    let sums = erdos_partial_sums_window(table, n, window.max(2))?;
    let mut result = accelerate(&sums, method, rounds)?;
    result.terms_used = n;
    Ok(result)
}

/// End-to-end gap-series estimate over a trailing window.
pub fn gap_series(
    table: &PrimeTable,
    theta: f64,
    n: usize,
    method: AccelMethod,
    rounds: usize,
    window: usize,
) -> Result<SeriesResult> {
    let sums = gap_series_window(table, theta, n, window.max(2))?;
    let mut result = accelerate(&sums, method, rounds)?;
    result.terms_used = n;
    Ok(result)
}
