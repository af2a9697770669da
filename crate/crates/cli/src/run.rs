//! Subcommand execution: parameter validation (usage failures), prime-table
//! acquisition with optional cache, library calls, payload emission.

use crate::args::*;
use crate::emit;
use erdos_core::asymptotics::{empirical_threshold, fit_error_exponent, power_law_threshold_probe};
use erdos_core::chebyshev::{ChebyshevAccumulator, PsiVariant};
use erdos_core::fitting::log_log_fit;
use erdos_core::primes::PrimeTable;
use erdos_core::regularity::{holder_constant, scaling_profile};
use erdos_core::series::{erdos_series, gap_series, AccelMethod, SeriesResult};
use erdos_core::stieltjes::{
    integral_by_parts, split_main_error, Damping, IntegralReport, TestFunction,
};
use erdos_core::tuples::{
    discrepancy_scan_with_cutoff, singular_series, DiscrepancyScan, SingularForm, TupleSpec,
};
use serde_json::{Map, Value};
use std::path::PathBuf;

pub(crate) enum Failure {
    /// Bad parameters: exit 2.
    Usage(String),
    /// The computation itself refused or failed: exit 1.
    Runtime(String),
}

impl From<erdos_core::Error> for Failure {
    fn from(e: erdos_core::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn require(cond: bool, msg: impl Into<String>) -> Result<(), Failure> {
    if cond {
        Ok(())
    } else {
        Err(usage(msg))
    }
}

pub(crate) fn dispatch(cli: Cli) -> Result<(), Failure> {
    let common = match &cli.command {
        Command::Sum(a) => &a.common,
        Command::GapSeries(a) => &a.common,
        Command::Integral(a) => &a.common,
        Command::AsymptoticFit(a) => &a.common,
        Command::Holder(a) => &a.common,
        Command::Tuples(a) => &a.common,
        Command::Report(a) => &a.common,
    };
    setup_threads(common)?;
    let (payload, output) = match cli.command {
        Command::Sum(a) => (run_sum(&a)?, a.common.output),
        Command::GapSeries(a) => (run_gap_series(&a)?, a.common.output),
        Command::Integral(a) => (run_integral(&a)?, a.common.output),
        Command::AsymptoticFit(a) => (run_fit(&a)?, a.common.output),
        Command::Holder(a) => (run_holder(&a)?, a.common.output),
        Command::Tuples(a) => (run_tuples(&a)?, a.common.output),
        Command::Report(a) => (run_report(&a)?, a.common.output),
    };
    deliver(&payload, &output)
}

fn setup_threads(common: &CommonArgs) -> Result<(), Failure> {
    if let Some(n) = common.threads {
        require(n >= 1, "threads must be at least 1")?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Runtime(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn deliver(payload: &str, output: &Option<PathBuf>) -> Result<(), Failure> {
    match output {
        Some(path) => std::fs::write(path, payload)
            .map_err(|e| Failure::Runtime(format!("write {}: {e}", path.display()))),
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

/// Cache file: explicit flag first, then $ERDOS_CACHE_DIR/primes.txt.
fn cache_file(common: &CommonArgs) -> Option<PathBuf> {
    if let Some(p) = &common.cache {
        return Some(p.clone());
    }
    std::env::var_os("ERDOS_CACHE_DIR").map(|d| PathBuf::from(d).join("primes.txt"))
}

/// Load the cached table when it covers `limit`, otherwise sieve and
/// (when a cache location is configured) overwrite the cache.
fn obtain_table(limit: u64, common: &CommonArgs) -> Result<PrimeTable, Failure> {
    match cache_file(common) {
        Some(path) => {
            if path.exists() {
                if let Some(t) = PrimeTable::load(&path, limit)? {
                    return Ok(t);
                }
            }
            let t = PrimeTable::sieve(limit)?;
            t.save(&path)?;
            Ok(t)
        }
        None => Ok(PrimeTable::sieve(limit)?),
    }
}

/// Sieve bound covering the first n primes: Rosser's p_n < n(ln n + ln ln n)
/// for n >= 6, a fixed floor below that.
fn sieve_limit_for_terms(n: usize) -> u64 {
    if n < 6 {
        return 15;
    }
    let nf = n as f64;
    (nf * (nf.ln() + nf.ln().ln())).ceil() as u64 + 64
}

fn accel_config(a: AccelArg, rounds: usize) -> (AccelMethod, usize) {
    match a {
        AccelArg::None => (AccelMethod::None, rounds),
        AccelArg::Pair => (AccelMethod::PairAverage, 1),
        AccelArg::Iterated => (AccelMethod::IteratedAverage, rounds),
    }
}

fn effective_rounds(method: AccelMethod, rounds: usize) -> usize {
    match method {
        AccelMethod::None => 0,
        AccelMethod::PairAverage => 1,
        AccelMethod::IteratedAverage => rounds,
    }
}

fn validate_series(terms: usize, method: AccelMethod, rounds: usize, window: usize) -> Result<(), Failure> {
    require(terms >= 1, "terms must be at least 1")?;
    require(rounds >= 1, "rounds must be at least 1")?;
    require(window >= 2, "window must be at least 2")?;
    let usable = window.min(terms.max(2));
    require(
        usable > effective_rounds(method, rounds),
        format!(
            "window of {usable} usable partial sums cannot support {} averaging rounds",
            effective_rounds(method, rounds)
        ),
    )
}

fn series_payload(
    r: &SeriesResult,
    rounds: usize,
    window: usize,
    theta: Option<f64>,
    format: FormatArg,
) -> String {
    match format {
        FormatArg::Json => {
            let mut m = Map::new();
            emit::put_u64(&mut m, "terms_used", r.terms_used as u64);
            emit::put_f64(&mut m, "raw_partial_sum", r.raw_partial_sum);
            emit::put_f64(&mut m, "accelerated_value", r.accelerated_value);
            emit::put_f64(&mut m, "estimated_uncertainty", r.estimated_uncertainty);
            emit::put_str(&mut m, "method", r.method.label());
            emit::put_u64(&mut m, "rounds", rounds as u64);
            emit::put_u64(&mut m, "window", window as u64);
            if let Some(t) = theta {
                emit::put_f64(&mut m, "theta", t);
            }
            emit::to_json(m)
        }
        FormatArg::Csv => {
            let row = vec![
                r.terms_used.to_string(),
                emit::decimal(r.raw_partial_sum),
                emit::decimal(r.accelerated_value),
                emit::decimal(r.estimated_uncertainty),
            ];
            emit::to_csv("N,raw_partial_sum,accelerated_value,uncertainty", &[row])
        }
    }
}

fn run_sum(a: &SumArgs) -> Result<String, Failure> {
    let (method, rounds) = accel_config(a.accelerate, a.rounds);
    validate_series(a.terms, method, rounds, a.window)?;
    let table = obtain_table(sieve_limit_for_terms(a.terms), &a.common)?;
    let r = erdos_series(&table, a.terms, method, rounds, a.window)?;
    Ok(series_payload(&r, rounds, a.window, None, a.common.format))
}

fn run_gap_series(a: &GapSeriesArgs) -> Result<String, Failure> {
    let (method, rounds) = accel_config(a.accelerate, a.rounds);
    validate_series(a.terms, method, rounds, a.window)?;
    require(
        a.theta.is_finite() && a.theta > 0.0,
        format!("theta must be positive and finite, got {}", a.theta),
    )?;
    // The n-th gap consumes the (n+1)-st prime.
    let table = obtain_table(sieve_limit_for_terms(a.terms + 1), &a.common)?;
    let r = gap_series(&table, a.theta, a.terms, method, rounds, a.window)?;
    Ok(series_payload(&r, rounds, a.window, Some(a.theta), a.common.format))
}

fn damping_of(a: DampingArg) -> Damping {
    match a {
        DampingArg::Exponential => Damping::Exponential,
        DampingArg::PowerLaw => Damping::PowerLaw,
    }
}

fn variant_of(a: PsiVariantArg) -> PsiVariant {
    match a {
        PsiVariantArg::PrimePower => PsiVariant::PrimePowers,
        PsiVariantArg::PrimeOnly => PsiVariant::PrimesOnly,
    }
}

fn accumulator(
    x_needed: f64,
    variant: PsiVariant,
    common: &CommonArgs,
) -> Result<ChebyshevAccumulator, Failure> {
    let limit = (x_needed.ceil() as u64).max(2);
    let table = obtain_table(limit, common)?;
    Ok(ChebyshevAccumulator::from_table(&table, variant))
}

fn check_lambda(lambda: f64) -> Result<(), Failure> {
    require(
        lambda.is_finite() && lambda > 0.0,
        format!("lambda must be positive and finite, got {lambda}"),
    )
}

fn check_x_upper(x: f64) -> Result<(), Failure> {
    require(
        x.is_finite() && x >= 1.0,
        format!("X must be finite and at least 1, got {x}"),
    )
}

fn put_report_fields(m: &mut Map<String, Value>, report: &IntegralReport) {
    emit::put_complex(m, "total", report.total);
    emit::put_complex(m, "main", report.main_term);
    emit::put_complex(m, "error", report.error_term);
    emit::put_f64(m, "truncation_bound", report.truncation_bound);
}

fn run_integral(a: &IntegralArgs) -> Result<String, Failure> {
    check_lambda(a.lambda)?;
    check_x_upper(a.x_upper)?;
    let acc = accumulator(a.x_upper, variant_of(a.psi_variant), &a.common)?;
    let g = TestFunction::new(a.lambda, damping_of(a.damping))?;
    let report = split_main_error(&acc, &g, a.x_upper)?;
    match a.common.format {
        FormatArg::Json => {
            let mut m = Map::new();
            emit::put_f64(&mut m, "lambda", a.lambda);
            emit::put_str(&mut m, "damping", g.damping().label());
            emit::put_f64(&mut m, "X", a.x_upper);
            emit::put_str(&mut m, "psi_variant", acc.variant().label());
            put_report_fields(&mut m, &report);
            Ok(emit::to_json(m))
        }
        FormatArg::Csv => {
            let row = vec![
                emit::decimal(a.lambda),
                emit::decimal(a.x_upper),
                emit::decimal(report.total.re),
                emit::decimal(report.total.im),
                emit::decimal(report.main_term.re),
                emit::decimal(report.main_term.im),
                emit::decimal(report.error_term.re),
                emit::decimal(report.error_term.im),
                emit::decimal(report.truncation_bound),
            ];
            Ok(emit::to_csv(
                "lambda,X,total_re,total_im,main_re,main_im,error_re,error_im,truncation_bound",
                &[row],
            ))
        }
    }
}

fn uniform_grid(max: f64, min: f64, points: usize) -> Vec<f64> {
    let step = (max - min) / (points as f64 - 1.0);
    (0..points).map(|i| max - step * i as f64).collect()
}

fn validate_explicit_grid(grid: &[f64]) -> Result<(), Failure> {
    require(grid.len() >= 6, "lambda grid needs at least 6 points")?;
    for pair in grid.windows(2) {
        require(pair[1] < pair[0], "lambda grid must be strictly decreasing")?;
    }
    for &l in grid {
        require(
            l.is_finite() && l > 0.0 && l <= 3.0,
            format!("lambda grid entries must lie in (0, 3], got {l}"),
        )?;
    }
    Ok(())
}

fn run_fit(a: &AsymptoticFitArgs) -> Result<String, Failure> {
    check_x_upper(a.x_upper)?;
    let grid = match &a.grid {
        Some(g) => {
            validate_explicit_grid(g)?;
            g.clone()
        }
        None => {
            require(a.grid_points >= 6, "grid needs at least 6 points")?;
            require(
                a.grid_min.is_finite()
                    && a.grid_max.is_finite()
                    && a.grid_min > 0.0
                    && a.grid_min < a.grid_max
                    && a.grid_max <= 3.0,
                format!(
                    "uniform grid bounds must satisfy 0 < min < max <= 3, got [{}, {}]",
                    a.grid_min, a.grid_max
                ),
            )?;
            uniform_grid(a.grid_max, a.grid_min, a.grid_points)
        }
    };
    if let Some(theta) = a.probe_theta {
        require(
            theta.is_finite() && theta >= 0.0,
            format!("probe theta must be nonnegative and finite, got {theta}"),
        )?;
    }

    let acc = accumulator(a.x_upper, variant_of(a.psi_variant), &a.common)?;
    let fit = fit_error_exponent(&acc, &grid, a.x_upper)?;
    let reports = grid
        .iter()
        .map(|&l| {
            let g = TestFunction::new(l, Damping::Exponential)?;
            split_main_error(&acc, &g, a.x_upper)
        })
        .collect::<erdos_core::Result<Vec<IntegralReport>>>()?;

    match a.common.format {
        FormatArg::Json => {
            let mut m = Map::new();
            emit::put_f64(&mut m, "X", a.x_upper);
            emit::put_str(&mut m, "psi_variant", acc.variant().label());

            let mut fit_map = Map::new();
            emit::put_f64(&mut fit_map, "slope", fit.fitted_slope);
            emit::put_f64(&mut fit_map, "residual", fit.residual);
            emit::put_f64_list(&mut fit_map, "grid", &fit.lambda_grid);
            m.insert("fit".into(), Value::Object(fit_map));

            let rows: Vec<Value> = grid
                .iter()
                .zip(&reports)
                .map(|(&l, r)| {
                    let mut row = Map::new();
                    emit::put_f64(&mut row, "lambda", l);
                    put_report_fields(&mut row, r);
                    emit::put_f64(&mut row, "total_abs", r.total.norm());
                    emit::put_f64(&mut row, "main_abs", r.main_term.norm());
                    emit::put_f64(&mut row, "error_abs", r.error_term.norm());
                    Value::Object(row)
                })
                .collect();
            m.insert("rows".into(), Value::Array(rows));

            if let Some(theta) = a.probe_theta {
                let probe_rows = power_law_threshold_probe(theta, &grid)?;
                let mut probe = Map::new();
                emit::put_f64(&mut probe, "theta", theta);
                match empirical_threshold(&probe_rows) {
                    Some(t) => emit::put_f64(&mut probe, "empirical_threshold", t),
                    None => {
                        probe.insert("empirical_threshold".into(), Value::Null);
                    }
                }
                let rows: Vec<Value> = probe_rows
                    .iter()
                    .map(|r| {
                        let mut row = Map::new();
                        emit::put_f64(&mut row, "lambda", r.lambda);
                        emit::put_bool(&mut row, "converged", r.converged);
                        emit::put_f64(&mut row, "value", r.value);
                        Value::Object(row)
                    })
                    .collect();
                probe.insert("rows".into(), Value::Array(rows));
                m.insert("probe".into(), Value::Object(probe));
            }
            Ok(emit::to_json(m))
        }
        FormatArg::Csv => {
            let rows: Vec<Vec<String>> = grid
                .iter()
                .zip(&reports)
                .map(|(&l, r)| {
                    vec![
                        emit::decimal(l),
                        emit::decimal(r.total.norm()),
                        emit::decimal(r.main_term.norm()),
                        emit::decimal(r.error_term.norm()),
                        emit::decimal(r.total.re),
                        emit::decimal(r.total.im),
                        emit::decimal(r.main_term.re),
                        emit::decimal(r.main_term.im),
                        emit::decimal(r.error_term.re),
                        emit::decimal(r.error_term.im),
                    ]
                })
                .collect();
            Ok(emit::to_csv(
                "lambda,total_abs,main_abs,error_abs,total_re,total_im,main_re,main_im,error_re,error_im",
                &rows,
            ))
        }
    }
}

/// Window ladder for increment profiles: powers of two up to half the
/// profile height.
fn profile_ladder(x_max: u64) -> Vec<u64> {
    let mut ladder = Vec::new();
    let mut h = 1u64;
    while h <= x_max / 2 {
        ladder.push(h);
        h *= 2;
    }
    ladder
}

fn profile_slope(rows: &[erdos_core::ScalingRow]) -> Option<f64> {
    let hs: Vec<f64> = rows.iter().map(|r| r.h as f64).collect();
    let incs: Vec<f64> = rows.iter().map(|r| r.max_increment).collect();
    log_log_fit(&hs, &incs).ok().map(|f| f.slope)
}

fn run_holder(a: &HolderArgs) -> Result<String, Failure> {
    require(
        a.beta.is_finite() && a.beta > 0.0 && a.beta <= 1.0,
        format!("beta must lie in (0, 1], got {}", a.beta),
    )?;
    let (lo, hi) = a.range;
    require(
        lo.is_finite() && hi.is_finite() && 0.0 <= lo && lo < hi,
        format!("range must satisfy 0 <= lo < hi, got {lo}:{hi}"),
    )?;
    require(
        a.grid_step.is_finite() && a.grid_step > 0.0,
        format!("grid step must be positive, got {}", a.grid_step),
    )?;
    require(
        a.min_separation.is_finite() && a.min_separation >= 1.0,
        format!("min separation must be at least 1, got {}", a.min_separation),
    )?;
    let x_max = a.x_max.unwrap_or(hi as u64);
    require(
        x_max >= 4,
        format!("profile height must be at least 4, got {x_max}"),
    )?;

    let acc = accumulator(
        hi.max(x_max as f64),
        variant_of(a.psi_variant),
        &a.common,
    )?;
    let estimate = holder_constant(&acc, a.beta, a.range, a.grid_step, a.min_separation)?;
    let ladder = profile_ladder(x_max);
    let rows = scaling_profile(&acc, x_max, &ladder)?;

    match a.common.format {
        FormatArg::Json => {
            let mut m = Map::new();
            emit::put_f64(&mut m, "beta", estimate.beta);
            emit::put_f64(&mut m, "constant", estimate.best_constant);
            emit::put_f64_list(
                &mut m,
                "argmax_pair",
                &[estimate.argmax_pair.0, estimate.argmax_pair.1],
            );
            emit::put_f64(&mut m, "min_separation", estimate.min_separation);
            emit::put_u64(&mut m, "sample_count", estimate.sample_count as u64);
            emit::put_f64(&mut m, "grid_step", a.grid_step);
            emit::put_f64_list(&mut m, "range", &[lo, hi]);
            emit::put_u64(&mut m, "x_max", x_max);
            emit::put_str(&mut m, "psi_variant", acc.variant().label());
            match profile_slope(&rows) {
                Some(s) => emit::put_f64(&mut m, "profile_slope", s),
                None => {
                    m.insert("profile_slope".into(), Value::Null);
                }
            }
            Ok(emit::to_json(m))
        }
        FormatArg::Csv => {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| vec![r.h.to_string(), emit::decimal(r.max_increment)])
                .collect();
            Ok(emit::to_csv("h,max_increment", &rows))
        }
    }
}

fn form_of(a: FormArg) -> SingularForm {
    match a {
        FormArg::Standard => SingularForm::Standard,
        FormArg::Unnormalized => SingularForm::Unnormalized,
    }
}

fn run_tuples(a: &TuplesArgs) -> Result<String, Failure> {
    require(!a.offsets.is_empty(), "offsets must be nonempty")?;
    for pair in a.offsets.windows(2) {
        require(pair[1] > pair[0], "offsets must be strictly increasing")?;
    }
    require(!a.x_grid.is_empty(), "x grid must be nonempty")?;
    for pair in a.x_grid.windows(2) {
        require(pair[1] > pair[0], "x grid must be strictly increasing")?;
    }
    require(a.x_grid[0] >= 3, "x grid entries must be at least 3")?;
    require(a.cutoff >= 2, "singular-series cutoff must be at least 2")?;

    let spec = TupleSpec::new(a.offsets.clone())?;
    let x_max = *a.x_grid.last().unwrap();
    let table = obtain_table(x_max + spec.max_offset() + 1, &a.common)?;
    let scan = discrepancy_scan_with_cutoff(&table, &spec, &a.x_grid, a.cutoff)?;
    let form = form_of(a.form);
    let series = singular_series(&spec, a.cutoff, form)?;
    let admissible = spec.admissible()?;

    match a.common.format {
        FormatArg::Json => {
            let mut m = Map::new();
            m.insert(
                "offsets".into(),
                Value::Array(a.offsets.iter().map(|&o| Value::Number(o.into())).collect()),
            );
            m.insert(
                "x_grid".into(),
                Value::Array(a.x_grid.iter().map(|&x| Value::Number(x.into())).collect()),
            );
            emit::put_u64(&mut m, "cutoff", a.cutoff);
            emit::put_str(&mut m, "form", form.label());
            emit::put_f64(&mut m, "singular_series", series);
            emit::put_bool(&mut m, "admissible", admissible);
            put_scan_fields(&mut m, &scan);
            Ok(emit::to_json(m))
        }
        FormatArg::Csv => Ok(scan_csv(&scan)),
    }
}

fn put_scan_fields(m: &mut Map<String, Value>, scan: &DiscrepancyScan) {
    match scan.fitted_slope {
        Some(s) => emit::put_f64(m, "fitted_slope", s),
        None => {
            m.insert("fitted_slope".into(), Value::Null);
        }
    }
    emit::put_u64(m, "excluded_zeros", scan.excluded_zeros as u64);
    let records: Vec<Value> = scan
        .records
        .iter()
        .map(|r| {
            let mut row = Map::new();
            emit::put_u64(&mut row, "x", r.x);
            emit::put_u64(&mut row, "lhs_count", r.lhs_count);
            emit::put_f64(&mut row, "singular_series", r.singular_series);
            emit::put_f64(&mut row, "integral_term", r.integral_term);
            emit::put_f64(&mut row, "discrepancy", r.discrepancy);
            emit::put_bool(&mut row, "regime_k_ok", r.regime_k_ok);
            emit::put_bool(&mut row, "regime_offsets_ok", r.regime_offsets_ok);
            Value::Object(row)
        })
        .collect();
    m.insert("records".into(), Value::Array(records));
}

fn scan_csv(scan: &DiscrepancyScan) -> String {
    let rows: Vec<Vec<String>> = scan
        .records
        .iter()
        .map(|r| {
            vec![
                r.x.to_string(),
                r.lhs_count.to_string(),
                emit::decimal(r.singular_series),
                emit::decimal(r.integral_term),
                emit::decimal(r.discrepancy),
            ]
        })
        .collect();
    emit::to_csv(
        "x,lhs_count,singular_series,integral_term,discrepancy",
        &rows,
    )
}

// Desk-scale defaults of the combined report.
const REPORT_TERMS: usize = 1_000_000;
const REPORT_WINDOW: usize = 4096;
const REPORT_FIT_X: f64 = 1_000_000.0;
const REPORT_HOLDER_RANGE: (f64, f64) = (100.0, 1_000_000.0);
const REPORT_TUPLE_GRID: [u64; 3] = [10_000, 100_000, 1_000_000];

fn run_report(a: &ReportArgs) -> Result<String, Failure> {
    if a.common.format == FormatArg::Csv {
        return Err(usage("report emits JSON only; drop --format csv"));
    }
    let skip = |s: SectionArg| a.skip.contains(&s);

    let mut doc = Map::new();
    emit::put_u64(&mut doc, "timestamp", unix_now());

    // One shared prime table: the series section needs primes past 1.5e7,
    // every other section stays far below that limit.
    let table = obtain_table(sieve_limit_for_terms(REPORT_TERMS + 1), &a.common)?;

    if !skip(SectionArg::Series) {
        doc.insert("series".into(), report_series(&table)?);
    }
    let needs_acc = !skip(SectionArg::IntegralIdentity)
        || !skip(SectionArg::ExponentFit)
        || !skip(SectionArg::HolderProfile);
    if needs_acc {
        let acc = ChebyshevAccumulator::from_table(&table, PsiVariant::PrimePowers);
        if !skip(SectionArg::IntegralIdentity) {
            doc.insert("integral_identity".into(), report_integral(&acc)?);
        }
        if !skip(SectionArg::ExponentFit) {
            doc.insert("exponent_fit".into(), report_fit(&acc)?);
        }
        if !skip(SectionArg::HolderProfile) {
            doc.insert("holder_profile".into(), report_holder(&acc)?);
        }
    }
    if !skip(SectionArg::Tuples) {
        doc.insert("tuples".into(), report_tuples(&table)?);
    }
    Ok(emit::to_json(doc))
}

fn unix_now() -> u64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

fn series_value(r: &SeriesResult) -> Value {
    let mut m = Map::new();
    emit::put_f64(&mut m, "raw_partial_sum", r.raw_partial_sum);
    emit::put_f64(&mut m, "accelerated_value", r.accelerated_value);
    emit::put_f64(&mut m, "estimated_uncertainty", r.estimated_uncertainty);
    emit::put_str(&mut m, "method", r.method.label());
    Value::Object(m)
}

fn report_series(table: &PrimeTable) -> Result<Value, Failure> {
    let pair = erdos_series(table, REPORT_TERMS, AccelMethod::PairAverage, 1, REPORT_WINDOW)?;
    let iterated = erdos_series(
        table,
        REPORT_TERMS,
        AccelMethod::IteratedAverage,
        10,
        REPORT_WINDOW,
    )?;
    let mut m = Map::new();
    emit::put_u64(&mut m, "terms_used", REPORT_TERMS as u64);
    emit::put_u64(&mut m, "window", REPORT_WINDOW as u64);
    m.insert("pair_average".into(), series_value(&pair));
    m.insert("iterated".into(), series_value(&iterated));
    Ok(Value::Object(m))
}

fn report_integral(acc: &ChebyshevAccumulator) -> Result<Value, Failure> {
    let mut cases = Vec::new();
    let mut worst = 0.0f64;
    for &lambda in &[0.2, 1.0, 2.5] {
        for &x in &[1e3, 1e5] {
            let g = TestFunction::new(lambda, Damping::Exponential)?;
            let report = split_main_error(acc, &g, x)?;
            let parts = integral_by_parts(acc, &g, x)?;
            let rel = (report.total - parts).norm() / (1.0 + report.total.norm());
            worst = worst.max(rel);
            let mut m = Map::new();
            emit::put_f64(&mut m, "lambda", lambda);
            emit::put_f64(&mut m, "X", x);
            put_report_fields(&mut m, &report);
            emit::put_f64(&mut m, "parts_rel_gap", rel);
            cases.push(Value::Object(m));
        }
    }
    let mut m = Map::new();
    m.insert("cases".into(), Value::Array(cases));
    emit::put_f64(&mut m, "worst_rel_gap", worst);
    Ok(Value::Object(m))
}

fn report_fit(acc: &ChebyshevAccumulator) -> Result<Value, Failure> {
    let grid = uniform_grid(1.0, 0.05, 12);
    let fit = fit_error_exponent(acc, &grid, REPORT_FIT_X)?;
    let mut m = Map::new();
    emit::put_f64(&mut m, "X", REPORT_FIT_X);
    emit::put_f64_list(&mut m, "grid", &fit.lambda_grid);
    emit::put_f64_list(&mut m, "error_magnitudes", &fit.magnitudes);
    emit::put_f64(&mut m, "slope", fit.fitted_slope);
    emit::put_f64(&mut m, "residual", fit.residual);
    Ok(Value::Object(m))
}

fn report_holder(acc: &ChebyshevAccumulator) -> Result<Value, Failure> {
    let estimate = holder_constant(acc, 0.5, REPORT_HOLDER_RANGE, 2.0, 1.0)?;
    let x_max = REPORT_HOLDER_RANGE.1 as u64;
    let rows = scaling_profile(acc, x_max, &profile_ladder(x_max))?;
    let mut m = Map::new();
    emit::put_f64(&mut m, "beta", estimate.beta);
    emit::put_f64(&mut m, "constant", estimate.best_constant);
    emit::put_f64_list(
        &mut m,
        "argmax_pair",
        &[estimate.argmax_pair.0, estimate.argmax_pair.1],
    );
    emit::put_f64(&mut m, "min_separation", estimate.min_separation);
    emit::put_f64(&mut m, "grid_step", 2.0);
    emit::put_u64(&mut m, "x_max", x_max);
    match profile_slope(&rows) {
        Some(s) => emit::put_f64(&mut m, "profile_slope", s),
        None => {
            m.insert("profile_slope".into(), Value::Null);
        }
    }
    Ok(Value::Object(m))
}

fn report_tuples(table: &PrimeTable) -> Result<Value, Failure> {
    let spec = TupleSpec::new(vec![0, 2]).unwrap();
    let scan = discrepancy_scan_with_cutoff(
        table,
        &spec,
        &REPORT_TUPLE_GRID,
        erdos_core::tuples::SINGULAR_CUTOFF,
    )?;
    let mut m = Map::new();
    m.insert(
        "offsets".into(),
        Value::Array(vec![Value::Number(0.into()), Value::Number(2.into())]),
    );
    m.insert(
        "x_grid".into(),
        Value::Array(
            REPORT_TUPLE_GRID
                .iter()
                .map(|&x| Value::Number(x.into()))
                .collect(),
        ),
    );
    emit::put_u64(&mut m, "cutoff", erdos_core::tuples::SINGULAR_CUTOFF);
    put_scan_fields(&mut m, &scan);
    Ok(Value::Object(m))
}
