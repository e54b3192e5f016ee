//! Operation-count sweeps.
//!
//! Each point runs one criterion on a dense random state (no zero rows or
//! columns, so nothing gets pruned) in exhaustive mode, counting complex
//! multiplications, additions and comparisons. The determinant criterion is
//! measured on the dense LU path, whose cost is governed by the row count
//! r = d / d_k of the unfolding.
//!
//! Two one-dimensional fits separate the n and d dependence of a cost model
//! c * n * x^p (x = d, or r for the determinant):
//!
//! * [`sweep_local_dim`] fixes n and grows the local dimension; the log-log
//!   slope of the count against x estimates p.
//! * [`sweep_parties`] fixes d_k and grows n; since x grows with n too, the
//!   count is divided by x^p before fitting its slope against n, which should
//!   then be close to one.

use std::ops::RangeInclusive;
use std::time::Instant;

use serde::Serialize;

use crate::counters::{NoTally, OpCounters, OpTally};
use crate::criteria::{
    det_report, minor_report, proportionality_report, Criterion, DetPath, ScanMode,
};
use crate::error::{Result, SepError};
use crate::generators::random_state;
use crate::state::{DimensionProfile, PureState};
use crate::tolerance::ToleranceConfig;

/// Largest unfolding row count the dense determinant path is benchmarked on.
pub const DET_DENSE_MAX_ROWS: usize = 64;
pub const DEFAULT_MAX_BYTES: u64 = 1 << 30;

const AMPLITUDE_BYTES: u64 = 16;

/// Exponent p in the cost model, and whether it applies to d or to r.
pub fn cost_model(criterion: Criterion) -> Result<(f64, Axis)> {
    match criterion {
        Criterion::Prop => Ok((1.0, Axis::Dim)),
        Criterion::Minors => Ok((2.0, Axis::Dim)),
        Criterion::Det => Ok((3.0, Axis::Rows)),
        Criterion::Rank => Err(SepError::Argument(
            "the rank criterion has no operation-count model to benchmark".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    /// total dimension d
    Dim,
    /// rows r = d / d_k of the unfolding with the smallest d_k
    Rows,
    /// party count n
    Parties,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchPoint {
    pub criterion: Criterion,
    pub dims: Vec<usize>,
    pub n: usize,
    pub d: usize,
    pub r: usize,
    pub counters: OpCounters,
    /// Mean wall time of one run, in seconds.
    pub seconds: f64,
}

impl BenchPoint {
    fn coordinate(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Dim => self.d as f64,
            Axis::Rows => self.r as f64,
            Axis::Parties => self.n as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub criterion: Criterion,
    /// What the fitted slope is taken against.
    pub axis: Axis,
    pub points: Vec<BenchPoint>,
    pub slope: f64,
}

/// Rough peak memory of one run: state, unfolding and pruned copy, plus the
/// shifted Gram matrix and its LU copy on the determinant path.
pub fn estimate_bytes(criterion: Criterion, profile: &DimensionProfile) -> u64 {
    let d = profile.total() as u64;
    let mut bytes = 3 * d * AMPLITUDE_BYTES;
    if criterion == Criterion::Det {
        let r = rows_of(profile) as u64;
        bytes += 2 * r * r * AMPLITUDE_BYTES;
    }
    bytes
}

fn rows_of(profile: &DimensionProfile) -> usize {
    let smallest = profile.dims().iter().copied().min().unwrap_or(1);
    profile.total() / smallest
}

/// Fails if the point exceeds the memory bound or the determinant row cap.
pub fn check_point(criterion: Criterion, profile: &DimensionProfile, max_bytes: u64) -> Result<()> {
    cost_model(criterion)?;
    let bytes = estimate_bytes(criterion, profile);
    if bytes > max_bytes {
        return Err(SepError::Argument(format!(
            "{criterion} on dims {:?} needs about {bytes} bytes, above the bound of {max_bytes}",
            profile.dims()
        )));
    }
    if criterion == Criterion::Det && rows_of(profile) > DET_DENSE_MAX_ROWS {
        return Err(SepError::Argument(format!(
            "dense determinant path limited to r <= {DET_DENSE_MAX_ROWS}, dims {:?} give r = {}",
            profile.dims(),
            rows_of(profile)
        )));
    }
    Ok(())
}

fn run_once<T: OpTally>(criterion: Criterion, state: &PureState, tally: &mut T) -> Result<()> {
    let tol = ToleranceConfig::default();
    match criterion {
        Criterion::Det => det_report(state, &tol, DetPath::Dense, tally)?,
        Criterion::Minors => minor_report(state, &tol, ScanMode::Exhaustive, tally)?,
        Criterion::Prop => proportionality_report(state, &tol, ScanMode::Exhaustive, tally)?,
        Criterion::Rank => return Err(cost_model(criterion).unwrap_err()),
    };
    Ok(())
}

/// Counts one run and times `reps` more.
pub fn measure(
    criterion: Criterion,
    profile: &DimensionProfile,
    reps: usize,
    seed: u64,
    max_bytes: u64,
) -> Result<BenchPoint> {
    check_point(criterion, profile, max_bytes)?;
    let state = random_state(profile, seed)?;
    let mut counters = OpCounters::default();
    run_once(criterion, &state, &mut counters)?;
    let reps = reps.max(1);
    let start = Instant::now();
    for _ in 0..reps {
        run_once(criterion, &state, &mut NoTally)?;
    }
    let seconds = start.elapsed().as_secs_f64() / reps as f64;
    log::debug!(
        "{criterion} {:?}: {} ops, {seconds:.3e} s",
        profile.dims(),
        counters.total()
    );
    Ok(BenchPoint {
        criterion,
        dims: profile.dims().to_vec(),
        n: profile.parties(),
        d: profile.total(),
        r: rows_of(profile),
        counters,
        seconds,
    })
}

/// Least-squares slope of log y against log x.
pub fn fit_loglog(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(SepError::Argument(
            "log-log fit needs positive samples".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(SepError::Argument(
            "log-log fit needs at least two distinct sizes".into(),
        ));
    }
    Ok(sxy / sxx)
}

fn run_sweep(
    criterion: Criterion,
    profiles: &[DimensionProfile],
    reps: usize,
    seed: u64,
    max_bytes: u64,
) -> Result<Vec<BenchPoint>> {
    // validate every point before allocating any state
    for p in profiles {
        check_point(criterion, p, max_bytes)?;
    }
    profiles
        .iter()
        .map(|p| measure(criterion, p, reps, seed, max_bytes))
        .collect()
}

/// Fixed n, local dimension q over `levels`; slope of the count against d
/// (against r for the determinant).
pub fn sweep_local_dim(
    criterion: Criterion,
    n: usize,
    levels: RangeInclusive<usize>,
    reps: usize,
    seed: u64,
    max_bytes: u64,
) -> Result<Sweep> {
    let (_, axis) = cost_model(criterion)?;
    let profiles = levels
        .map(|q| DimensionProfile::uniform(n, q))
        .collect::<Result<Vec<_>>>()?;
    let points = run_sweep(criterion, &profiles, reps, seed, max_bytes)?;
    let samples: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.coordinate(axis), p.counters.total() as f64))
        .collect();
    let slope = fit_loglog(&samples)?;
    Ok(Sweep {
        criterion,
        axis,
        points,
        slope,
    })
}

/// Fixed local dimension q, n over `parties`; slope against n of the count
/// divided by x^p.
pub fn sweep_parties(
    criterion: Criterion,
    level: usize,
    parties: RangeInclusive<usize>,
    reps: usize,
    seed: u64,
    max_bytes: u64,
) -> Result<Sweep> {
    let (power, axis) = cost_model(criterion)?;
    let profiles = parties
        .map(|n| DimensionProfile::uniform(n, level))
        .collect::<Result<Vec<_>>>()?;
    let points = run_sweep(criterion, &profiles, reps, seed, max_bytes)?;
    let samples: Vec<(f64, f64)> = points
        .iter()
        .map(|p| {
            (
                p.n as f64,
                p.counters.total() as f64 / p.coordinate(axis).powf(power),
            )
        })
        .collect();
    let slope = fit_loglog(&samples)?;
    Ok(Sweep {
        criterion,
        axis: Axis::Parties,
        points,
        slope,
    })
}
