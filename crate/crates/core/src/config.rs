//! Run configuration: flat `key = value` files plus command-line overrides.
//!
//! Every key has a default taken from the reference parameter set, so an
//! empty configuration reproduces a reference scenario for each command.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::integrator::RunSchedule;
use crate::reactor::{GridSpec, ModelParams};
use crate::sweep::{Diagnostics, IcMapSpec, SweepAxis, SweepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Simulate,
    Bifurcate,
    Spectrum,
    Entropy,
    Icmap,
    Poincare,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Command::Simulate,
        Command::Bifurcate,
        Command::Spectrum,
        Command::Entropy,
        Command::Icmap,
        Command::Poincare,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Bifurcate => "bifurcate",
            Command::Spectrum => "spectrum",
            Command::Entropy => "entropy",
            Command::Icmap => "icmap",
            Command::Poincare => "poincare",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::Config {
                key: "command".into(),
                reason: format!("unknown command `{s}`"),
            })
    }
}

/// Every recognised key.
pub const KEYS: &[&str] = &[
    "gamma",
    "beta",
    "m",
    "delta",
    "theta_h",
    "pe_m",
    "pe_h",
    "le",
    "da",
    "tau_r",
    "n_nodes",
    "n_transient",
    "n_record",
    "dt_target",
    "alpha0",
    "theta0",
    "axis",
    "start",
    "stop",
    "n_points",
    "sweep",
    "alpha0_min",
    "alpha0_max",
    "theta0_min",
    "theta0_max",
    "n_alpha",
    "n_theta",
    "rel_tol",
    "max_period",
    "n_bins",
    "output_dir",
    "emit_plots",
];

/// Fully resolved configuration of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub model: ModelParams,
    pub grid: GridSpec,
    pub schedule: RunSchedule,
    /// Uniform initial condition `(alpha0, theta0)` for single runs and sweeps.
    pub ic: (f64, f64),
    pub diagnostics: Diagnostics,
    /// Present for `bifurcate`, `entropy` and `spectrum` with `sweep = true`.
    pub sweep: Option<SweepSpec>,
    pub icmap: Option<IcMapSpec>,
    pub output_dir: PathBuf,
    pub emit_plots: bool,
}

/// Parse the body of a `key = value` file. `#` starts a comment.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Config {
            key: format!("line {}", lineno + 1),
            reason: format!("expected `key = value`, got `{line}`"),
        })?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Split a `key=value` command-line override.
pub fn parse_override(s: &str) -> Result<(String, String)> {
    let (k, v) = s.split_once('=').ok_or_else(|| Error::Config {
        key: s.to_string(),
        reason: "expected KEY=VALUE".into(),
    })?;
    Ok((k.trim().to_string(), v.trim().to_string()))
}

struct Values(BTreeMap<String, String>);

impl Values {
    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| Error::Config {
                key: key.into(),
                reason: format!("cannot parse `{raw}`"),
            }),
        }
    }

    fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn bool_or(&self, key: &str, default: bool) -> Result<bool> {
        match self.0.get(key).map(String::as_str) {
            None => Ok(default),
            Some("true" | "1" | "yes") => Ok(true),
            Some("false" | "0" | "no") => Ok(false),
            Some(raw) => Err(Error::Config {
                key: key.into(),
                reason: format!("expected a boolean, got `{raw}`"),
            }),
        }
    }
}

fn config_err(e: Error) -> Error {
    match e {
        Error::InvalidParam { name, reason } => Error::Config {
            key: name.to_string(),
            reason,
        },
        other => other,
    }
}

fn check(key: &str, ok: bool, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config {
            key: key.into(),
            reason: reason.into(),
        })
    }
}

/// Build a validated configuration from file entries followed by
/// overrides; later entries win, so flags given after the file take
/// precedence.
pub fn parse_config(command: Command, file: &[(String, String)], flags: &[(String, String)]) -> Result<RunConfig> {
    let mut map = BTreeMap::new();
    for (k, v) in file.iter().chain(flags) {
        if !KEYS.contains(&k.as_str()) {
            return Err(Error::Config {
                key: k.clone(),
                reason: "unknown key".into(),
            });
        }
        map.insert(k.clone(), v.clone());
    }
    let v = Values(map);

    let wants_sweep = match command {
        Command::Bifurcate | Command::Entropy => true,
        Command::Spectrum => v.bool_or("sweep", false)?,
        _ => false,
    };
    let axis: SweepAxis = match v.0.get("axis") {
        None => SweepAxis::TauR,
        Some(raw) => raw.parse().map_err(|reason| Error::Config {
            key: "axis".into(),
            reason,
        })?,
    };
    let default_tau_r = match command {
        Command::Icmap => 6.5,
        _ => 5.5,
    };

    let d = ModelParams::default();
    let model = ModelParams {
        gamma: v.or("gamma", d.gamma)?,
        beta: v.or("beta", d.beta)?,
        m: v.or("m", d.m)?,
        delta: v.or("delta", d.delta)?,
        theta_h: v.or("theta_h", d.theta_h)?,
        pe_m: v.or("pe_m", d.pe_m)?,
        pe_h: v.or("pe_h", d.pe_h)?,
        le: v.or("le", d.le)?,
        da: v.or("da", d.da)?,
        tau_r: v.or("tau_r", default_tau_r)?,
    };
    model.validate().map_err(config_err)?;

    let grid = GridSpec::new(v.or("n_nodes", GridSpec::DEFAULT_NODES)?).map_err(config_err)?;
    let ds = RunSchedule::default();
    let schedule = RunSchedule {
        n_transient: v.or("n_transient", ds.n_transient)?,
        n_record: v.or("n_record", ds.n_record)?,
        dt_target: v.or("dt_target", model.stable_dt(&grid))?,
    };
    schedule.validate().map_err(config_err)?;

    let ic: (f64, f64) = (v.or("alpha0", 0.9)?, v.or("theta0", 0.2)?);
    check("alpha0", ic.0.is_finite(), "must be finite")?;
    check(
        "theta0",
        ic.1.is_finite() && 1.0 + model.beta * ic.1 > 0.0,
        "must be finite with 1 + beta*theta0 > 0",
    )?;

    let dd = Diagnostics::default();
    let diagnostics = Diagnostics {
        rel_tol: v.or("rel_tol", dd.rel_tol)?,
        max_period: v.or("max_period", dd.max_period)?,
        n_bins: v.or("n_bins", dd.n_bins)?,
    };
    check(
        "rel_tol",
        diagnostics.rel_tol > 0.0 && diagnostics.rel_tol.is_finite(),
        "must be > 0",
    )?;
    check("max_period", diagnostics.max_period >= 1, "must be >= 1")?;
    check("n_bins", diagnostics.n_bins >= 1, "must be >= 1")?;

    let sweep = if wants_sweep {
        let defaults = SweepSpec::new(axis, model);
        let spec = SweepSpec {
            start: v.or("start", defaults.start)?,
            stop: v.or("stop", defaults.stop)?,
            n_points: v.or("n_points", defaults.n_points)?,
            ic,
            grid,
            schedule,
            diagnostics,
            ..defaults
        };
        spec.validate().map_err(config_err)?;
        check(
            "start",
            match axis {
                SweepAxis::TauR => spec.start > 0.0,
                SweepAxis::Da => spec.start >= 0.0,
            },
            "axis range leaves the valid parameter domain",
        )?;
        Some(spec)
    } else {
        None
    };

    let icmap = if command == Command::Icmap {
        let defaults = IcMapSpec::new(model);
        let spec = IcMapSpec {
            alpha0_range: (
                v.or("alpha0_min", defaults.alpha0_range.0)?,
                v.or("alpha0_max", defaults.alpha0_range.1)?,
            ),
            theta0_range: (
                v.or("theta0_min", defaults.theta0_range.0)?,
                v.or("theta0_max", defaults.theta0_range.1)?,
            ),
            n_alpha: v.or("n_alpha", defaults.n_alpha)?,
            n_theta: v.or("n_theta", defaults.n_theta)?,
            grid,
            schedule,
            diagnostics,
            ..defaults
        };
        spec.validate().map_err(config_err)?;
        check(
            "theta0_min",
            1.0 + model.beta * spec.theta0_range.0 > 0.0,
            "initial temperature leaves the Arrhenius domain",
        )?;
        Some(spec)
    } else {
        None
    };

    Ok(RunConfig {
        command,
        model,
        grid,
        schedule,
        ic,
        diagnostics,
        sweep,
        icmap,
        output_dir: PathBuf::from(v.or("output_dir", "out".to_string())?),
        emit_plots: v.bool_or("emit_plots", false)?,
    })
}

impl RunConfig {
    /// Every effective setting as a `key = value` file that parses back to
    /// the same configuration.
    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        let m = &self.model;
        put("gamma", m.gamma.to_string());
        put("beta", m.beta.to_string());
        put("m", m.m.to_string());
        put("delta", m.delta.to_string());
        put("theta_h", m.theta_h.to_string());
        put("pe_m", m.pe_m.to_string());
        put("pe_h", m.pe_h.to_string());
        put("le", m.le.to_string());
        put("da", m.da.to_string());
        put("tau_r", m.tau_r.to_string());
        put("n_nodes", self.grid.n_nodes().to_string());
        put("n_transient", self.schedule.n_transient.to_string());
        put("n_record", self.schedule.n_record.to_string());
        put("dt_target", self.schedule.dt_target.to_string());
        put("alpha0", self.ic.0.to_string());
        put("theta0", self.ic.1.to_string());
        put("rel_tol", self.diagnostics.rel_tol.to_string());
        put("max_period", self.diagnostics.max_period.to_string());
        put("n_bins", self.diagnostics.n_bins.to_string());
        if let Some(sw) = &self.sweep {
            put("axis", sw.axis.to_string());
            put("start", sw.start.to_string());
            put("stop", sw.stop.to_string());
            put("n_points", sw.n_points.to_string());
            if self.command == Command::Spectrum {
                put("sweep", "true".into());
            }
        }
        if let Some(ic) = &self.icmap {
            put("alpha0_min", ic.alpha0_range.0.to_string());
            put("alpha0_max", ic.alpha0_range.1.to_string());
            put("theta0_min", ic.theta0_range.0.to_string());
            put("theta0_max", ic.theta0_range.1.to_string());
            put("n_alpha", ic.n_alpha.to_string());
            put("n_theta", ic.n_theta.to_string());
        }
        put("output_dir", self.output_dir.display().to_string());
        put("emit_plots", self.emit_plots.to_string());
        s
    }
}
