//! Numerical study of the alternating prime series
//! S = sum_{n >= 1} (-1)^n n / p_n and its Stieltjes-integral counterpart
//! I(lambda) = int_1^inf e^{(i pi - lambda) x} dpsi(x) against the
//! Chebyshev function, together with the secondary observables the two
//! objects drag in: remainder regularity, small-lambda asymptotics, and
//! prime-tuple discrepancies.
//!
//! Everything is deterministic: summations use fixed-block compensated
//! accumulation whose result is independent of thread count, and all
//! parallel reductions are order-fixed.

#![forbid(unsafe_code)]

pub mod asymptotics;
pub mod chebyshev;
pub mod error;
pub mod fitting;
pub mod kahan;
pub mod primes;
pub mod quad;
pub mod regularity;
pub mod series;
pub mod special;
pub mod stieltjes;
pub mod tuples;

pub use asymptotics::{
    empirical_threshold, fit_error_exponent, fit_exponent, laplace_tail, main_term_after_parts,
    main_term_i1, power_law_threshold_probe, ExponentFit, LaplaceTail, ThresholdProbeRow,
};
pub use chebyshev::{von_mangoldt, ChebyshevAccumulator, PsiVariant};
pub use error::{Error, Result};
pub use primes::{is_prime, PrimeTable};
pub use regularity::{
    holder_constant, holder_constant_of, scaling_profile, scaling_profile_of, HolderEstimate,
    ScalingRow,
};
pub use series::{
    accelerate, erdos_partial_sum, erdos_partial_sums_window, erdos_series, gap_series,
    gap_series_partial, gap_series_window, AccelMethod, SeriesResult,
};
pub use stieltjes::{
    integral_by_parts, main_term_integral, p_variation, split_main_error, stieltjes_integral,
    truncation_bound, young_criterion, Damping, IntegralReport, TestFunction, YoungCheck,
};
pub use tuples::{
    discrepancy_scan, discrepancy_scan_with_cutoff, log_power_integral, nu, singular_series,
    tuple_count, DiscrepancyRecord, DiscrepancyScan, SingularForm, TupleSpec,
};
