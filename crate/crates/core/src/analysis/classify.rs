use super::check_finite;
use crate::error::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-4;
pub const DEFAULT_MAX_PERIOD: usize = 32;

/// Tolerance used when the observed range is (nearly) zero.
const ABS_TOL_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrbitKind {
    Stationary,
    Periodic,
    /// Chaotic or quasiperiodic; the two are not told apart.
    Aperiodic,
}

impl OrbitKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            OrbitKind::Stationary => "stationary",
            OrbitKind::Periodic => "periodic",
            OrbitKind::Aperiodic => "aperiodic",
        }
    }
}

impl std::fmt::Display for OrbitKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrbitClass {
    pub kind: OrbitKind,
    /// 1 for stationary, `M` for periodic, 0 for aperiodic.
    pub period: usize,
    pub distinct_values: usize,
}

fn tolerance(range: f64, rel_tol: f64) -> f64 {
    (rel_tol * range).max(ABS_TOL_FLOOR)
}

/// Label each sample with the index of its cluster. Clusters are runs of
/// sorted values whose consecutive gaps do not exceed `tol`.
fn cluster_labels(x: &[f64], tol: f64) -> (Vec<usize>, usize) {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut labels = vec![0; x.len()];
    let mut k = 0;
    for w in 0..order.len() {
        if w > 0 && x[order[w]] - x[order[w - 1]] > tol {
            k += 1;
        }
        labels[order[w]] = k;
    }
    (labels, if x.is_empty() { 0 } else { k + 1 })
}

/// Classify a stroboscopic series as stationary, periodic of period `M`, or
/// aperiodic.
///
/// Values closer than `rel_tol` times the observed range (floored at 1e-9)
/// are merged. One cluster is stationary; `2 ..= max_period` clusters whose
/// label sequence repeats with that period is periodic; anything else is
/// aperiodic.
pub fn classify_orbit(x: &[f64], rel_tol: f64, max_period: usize) -> Result<OrbitClass> {
    check_finite(x)?;
    if x.is_empty() {
        return Err(Error::InvalidParam {
            name: "x",
            reason: "empty series".into(),
        });
    }
    if !(rel_tol > 0.0 && rel_tol.is_finite()) {
        return Err(Error::InvalidParam {
            name: "rel_tol",
            reason: format!("must be > 0, got {rel_tol}"),
        });
    }
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let (labels, k) = cluster_labels(x, tolerance(hi - lo, rel_tol));
    let kind = if k == 1 {
        OrbitKind::Stationary
    } else if k <= max_period && labels.iter().zip(labels.iter().skip(k)).all(|(a, b)| a == b) {
        OrbitKind::Periodic
    } else {
        OrbitKind::Aperiodic
    };
    let period = match kind {
        OrbitKind::Stationary => 1,
        OrbitKind::Periodic => k,
        OrbitKind::Aperiodic => 0,
    };
    Ok(OrbitClass {
        kind,
        period,
        distinct_values: k,
    })
}

/// Number of tolerance-distinct points of a planar point set, clustering each
/// coordinate with [`classify_orbit`]'s rule and counting distinct label pairs.
pub fn count_distinct_points(points: &[(f64, f64)], rel_tol: f64) -> usize {
    if points.is_empty() {
        return 0;
    }
    let labels_of = |v: Vec<f64>| {
        let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        });
        cluster_labels(&v, tolerance(hi - lo, rel_tol)).0
    };
    let la = labels_of(points.iter().map(|p| p.0).collect());
    let lb = labels_of(points.iter().map(|p| p.1).collect());
    let mut pairs: Vec<(usize, usize)> = la.into_iter().zip(lb).collect();
    pairs.sort_unstable();
    pairs.dedup();
    pairs.len()
}
