//! Families of cold-started simulations backing the bifurcation, spectral,
//! entropy and initial-condition diagrams.
//!
//! Every row starts from the specified uniform initial condition; nothing is
//! carried over between axis values. Rows are distributed over worker
//! threads by a static strided partition and gathered back in axis order,
//! so the result does not depend on the worker count.

use std::fmt;
use std::str::FromStr;

use crate::analysis::{
    amplitude_spectrum, classify_orbit, shannon_entropy, EntropyResult, OrbitClass, Spectrum, DEFAULT_BINS,
    DEFAULT_MAX_PERIOD, DEFAULT_REL_TOL,
};
use crate::error::{Error, Result};
use crate::integrator::{simulate, RunSchedule, StroboSeries};
use crate::reactor::{GridSpec, ModelParams};

/// Environment variable holding the worker count.
pub const WORKERS_ENV: &str = "RFR_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    TauR,
    Da,
}

impl SweepAxis {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::TauR => "tau_r",
            SweepAxis::Da => "da",
        }
    }

    fn apply(&self, base: &ModelParams, value: f64) -> ModelParams {
        let mut p = *base;
        match self {
            SweepAxis::TauR => p.tau_r = value,
            SweepAxis::Da => p.da = value,
        }
        p
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "tau_r" => Ok(SweepAxis::TauR),
            "da" => Ok(SweepAxis::Da),
            other => Err(format!("unknown axis `{other}` (expected tau_r or da)")),
        }
    }
}

/// `n` evenly spaced values `start + j (stop - start) / (n - 1)`.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![start];
    }
    let step = (stop - start) / (n - 1) as f64;
    (0..n).map(|j| start + j as f64 * step).collect()
}

/// Classification settings shared by all rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub rel_tol: f64,
    pub max_period: usize,
    pub n_bins: usize,
}

impl Default for Diagnostics {
    fn default() -> Self {
        Self {
            rel_tol: DEFAULT_REL_TOL,
            max_period: DEFAULT_MAX_PERIOD,
            n_bins: DEFAULT_BINS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub n_points: usize,
    pub base: ModelParams,
    pub ic: (f64, f64),
    pub grid: GridSpec,
    /// `dt_target` is an upper bound; each row also respects the stable
    /// step of its own parameters.
    pub schedule: RunSchedule,
    pub diagnostics: Diagnostics,
}

impl SweepSpec {
    /// Sweep with default resolution: 400 points over
    /// `tau_r in [3, 14]` or 300 points over `Da in [0.05, 0.2]`.
    pub fn new(axis: SweepAxis, base: ModelParams) -> Self {
        let (start, stop, n_points) = match axis {
            SweepAxis::TauR => (3.0, 14.0, 400),
            SweepAxis::Da => (0.05, 0.2, 300),
        };
        let grid = GridSpec::default();
        Self {
            axis,
            start,
            stop,
            n_points,
            base,
            ic: (0.9, 0.2),
            grid,
            schedule: RunSchedule::for_model(&base, &grid),
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) {
            return Err(Error::InvalidParam {
                name: "start",
                reason: format!("need start < stop, got [{}, {}]", self.start, self.stop),
            });
        }
        if self.n_points < 2 {
            return Err(Error::InvalidParam {
                name: "n_points",
                reason: "need at least 2 points".into(),
            });
        }
        self.base.validate()?;
        self.schedule.validate()
    }

    pub fn axis_values(&self) -> Vec<f64> {
        linspace(self.start, self.stop, self.n_points)
    }

    pub fn params_at(&self, value: f64) -> ModelParams {
        self.axis.apply(&self.base, value)
    }
}

/// Everything computed from one stroboscopic series.
#[derive(Debug, Clone, PartialEq)]
pub struct RowData {
    pub series: StroboSeries,
    pub class: OrbitClass,
    pub entropy: EntropyResult,
    pub spectrum: Spectrum,
}

impl RowData {
    pub fn from_series(series: StroboSeries, diag: &Diagnostics) -> Result<Self> {
        let class = classify_orbit(&series.alpha_out, diag.rel_tol, diag.max_period)?;
        let entropy = shannon_entropy(&series.alpha_out, diag.n_bins)?;
        let spectrum = amplitude_spectrum(&series.alpha_out)?;
        Ok(Self {
            series,
            class,
            entropy,
            spectrum,
        })
    }
}

/// Why a row produced no data.
#[derive(Debug, Clone, PartialEq)]
pub struct RowFailure {
    /// Switching cycle in which the integration aborted, when known.
    pub cycle: Option<usize>,
    pub message: String,
}

impl From<Error> for RowFailure {
    fn from(e: Error) -> Self {
        let cycle = match &e {
            Error::Cycle { cycle, .. } => Some(*cycle),
            _ => None,
        };
        Self {
            cycle,
            message: e.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub param: f64,
    pub outcome: std::result::Result<RowData, RowFailure>,
}

impl SweepRow {
    pub fn data(&self) -> Option<&RowData> {
        self.outcome.as_ref().ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// `(param, alpha_out)` for every recorded sample of every good row.
    pub fn bifurcation_points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.rows
            .iter()
            .filter_map(|r| r.data().map(|d| (r.param, d)))
            .flat_map(|(p, d)| d.series.alpha_out.iter().map(move |&a| (p, a)))
    }

    /// `(param, entropy)` for every good row.
    pub fn entropies(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.rows
            .iter()
            .filter_map(|r| r.data().map(|d| (r.param, d.entropy.entropy)))
    }

    pub fn failed(&self) -> impl Iterator<Item = &SweepRow> + '_ {
        self.rows.iter().filter(|r| r.outcome.is_err())
    }
}

/// Worker count from [`WORKERS_ENV`], defaulting to the available
/// parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&w| w > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Evaluate `f` on every item, worker `w` taking items `w, w + W, ...`.
/// Output order matches input order.
pub fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let f = &f;
    let mut parts: Vec<Vec<(usize, R)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..items.len())
                        .step_by(workers)
                        .map(|i| (i, f(&items[i])))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });
    let mut slots: Vec<Option<R>> = (0..items.len()).map(|_| None).collect();
    for part in parts.drain(..) {
        for (i, r) in part {
            slots[i] = Some(r);
        }
    }
    slots.into_iter().map(|r| r.expect("every index computed")).collect()
}

fn row_schedule(sched: &RunSchedule, p: &ModelParams, g: &GridSpec) -> RunSchedule {
    RunSchedule {
        dt_target: sched.dt_target.min(p.stable_dt(g)),
        ..*sched
    }
}

fn run_row(spec: &SweepSpec, value: f64) -> SweepRow {
    let p = spec.params_at(value);
    let sched = row_schedule(&spec.schedule, &p, &spec.grid);
    let outcome = simulate(spec.ic.0, spec.ic.1, &p, &spec.grid, &sched)
        .and_then(|s| RowData::from_series(s, &spec.diagnostics))
        .map_err(RowFailure::from);
    SweepRow { param: value, outcome }
}

/// Simulate every axis value once and attach class, entropy and spectrum.
/// The bifurcation, spectral and entropy diagrams are all views of this.
pub fn run_sweep(spec: &SweepSpec, workers: usize) -> Result<SweepResult> {
    spec.validate()?;
    let values = spec.axis_values();
    let rows = par_map(&values, workers, |&v| run_row(spec, v));
    Ok(SweepResult { axis: spec.axis, rows })
}

/// All recorded `alpha_out` samples (and the orbit class) per axis value.
pub fn bifurcation_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep(spec, default_workers())
}

/// Amplitude spectrum of `alpha_out` per axis value.
pub fn spectral_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep(spec, default_workers())
}

/// Entropy of `alpha_out` per axis value.
pub fn entropy_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    run_sweep(spec, default_workers())
}

/// Grid of uniform initial conditions at fixed parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct IcMapSpec {
    pub alpha0_range: (f64, f64),
    pub theta0_range: (f64, f64),
    pub n_alpha: usize,
    pub n_theta: usize,
    pub base: ModelParams,
    pub grid: GridSpec,
    pub schedule: RunSchedule,
    pub diagnostics: Diagnostics,
}

impl IcMapSpec {
    /// 51 x 51 grid over `alpha0 in [0, 1]`, `theta0 in [0, 0.5]`.
    pub fn new(base: ModelParams) -> Self {
        let grid = GridSpec::default();
        Self {
            alpha0_range: (0.0, 1.0),
            theta0_range: (0.0, 0.5),
            n_alpha: 51,
            n_theta: 51,
            base,
            grid,
            schedule: RunSchedule::for_model(&base, &grid),
            diagnostics: Diagnostics::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, (lo, hi), n) in [
            ("alpha0_range", self.alpha0_range, self.n_alpha),
            ("theta0_range", self.theta0_range, self.n_theta),
        ] {
            if n == 0 || !(lo.is_finite() && hi.is_finite()) || (n > 1 && lo >= hi) || (n == 1 && lo > hi) {
                return Err(Error::InvalidParam {
                    name,
                    reason: format!("invalid range [{lo}, {hi}] with {n} points"),
                });
            }
        }
        self.base.validate()?;
        self.schedule.validate()
    }

    /// Grid points, `alpha0` varying slowest.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let a = linspace(self.alpha0_range.0, self.alpha0_range.1, self.n_alpha);
        let t = linspace(self.theta0_range.0, self.theta0_range.1, self.n_theta);
        a.iter().flat_map(|&x| t.iter().map(move |&y| (x, y))).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcMapRow {
    pub alpha0: f64,
    pub theta0: f64,
    pub outcome: std::result::Result<(OrbitClass, EntropyResult), RowFailure>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcMapResult {
    pub rows: Vec<IcMapRow>,
}

/// Orbit class and entropy for each initial condition of the grid.
pub fn ic_map(spec: &IcMapSpec, workers: usize) -> Result<IcMapResult> {
    spec.validate()?;
    let sched = row_schedule(&spec.schedule, &spec.base, &spec.grid);
    let rows = par_map(&spec.points(), workers, |&(a0, t0)| {
        let outcome = simulate(a0, t0, &spec.base, &spec.grid, &sched)
            .and_then(|s| {
                let c = classify_orbit(&s.alpha_out, spec.diagnostics.rel_tol, spec.diagnostics.max_period)?;
                let e = shannon_entropy(&s.alpha_out, spec.diagnostics.n_bins)?;
                Ok((c, e))
            })
            .map_err(RowFailure::from);
        IcMapRow {
            alpha0: a0,
            theta0: t0,
            outcome,
        }
    });
    Ok(IcMapResult { rows })
}
