use super::check_finite;
use crate::error::{Error, Result};

pub const DEFAULT_BINS: usize = 100;

/// Observed ranges at or below this width count as degenerate, so round-off
/// jitter of a converged stationary series does not register as information.
pub const DEGENERATE_RANGE: f64 = 1e-9;

/// Histogram entropy of a series in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyResult {
    pub entropy: f64,
    pub n_bins: usize,
    pub occupied_bins: usize,
}

/// Shannon entropy `-sum p_i log2 p_i` over `n_bins` equal sub-intervals of
/// the observed range `[min(x), max(x)]`. A degenerate range (width at most
/// [`DEGENERATE_RANGE`]) puts every sample in one bin.
pub fn shannon_entropy(x: &[f64], n_bins: usize) -> Result<EntropyResult> {
    check_finite(x)?;
    if x.is_empty() {
        return Err(Error::InvalidParam {
            name: "x",
            reason: "empty series".into(),
        });
    }
    if n_bins == 0 {
        return Err(Error::InvalidParam {
            name: "n_bins",
            reason: "must be >= 1".into(),
        });
    }
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
        (lo.min(v), hi.max(v))
    });
    let mut counts = vec![0usize; n_bins];
    let range = hi - lo;
    for &v in x {
        let idx = if range > DEGENERATE_RANGE {
            (((v - lo) / range * n_bins as f64) as usize).min(n_bins - 1)
        } else {
            0
        };
        counts[idx] += 1;
    }
    let n = x.len() as f64;
    let mut entropy = 0.0;
    let mut occupied = 0;
    for &c in &counts {
        if c > 0 {
            occupied += 1;
            let p = c as f64 / n;
            entropy -= p * p.log2();
        }
    }
    Ok(EntropyResult {
        entropy: entropy.max(0.0),
        n_bins,
        occupied_bins: occupied,
    })
}

/// Entropy of an orbit visiting `m` values equally often: `log2(m)`.
pub fn expected_entropy(m: usize) -> f64 {
    assert!(m >= 1, "period must be >= 1");
    (m as f64).log2()
}
