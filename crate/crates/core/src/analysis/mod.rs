//! Diagnostics of stroboscopic series: amplitude spectrum, histogram
//! entropy, orbit classification and the Poincare section.

mod classify;
mod entropy;
mod fft;
mod spectrum;

pub use classify::{classify_orbit, count_distinct_points, OrbitClass, OrbitKind, DEFAULT_MAX_PERIOD, DEFAULT_REL_TOL};
pub use entropy::{expected_entropy, shannon_entropy, EntropyResult, DEFAULT_BINS, DEGENERATE_RANGE};
pub use spectrum::{amplitude_spectrum, Spectrum};

use crate::error::{Error, Result};
use crate::integrator::StroboSeries;

/// Paired `(alpha_out, theta_out)` samples in recording order.
pub fn poincare_points(s: &StroboSeries) -> Vec<(f64, f64)> {
    s.alpha_out.iter().copied().zip(s.theta_out.iter().copied()).collect()
}

pub(crate) fn check_finite(x: &[f64]) -> Result<()> {
    match x.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reactor::ModelParams;

    fn series(a: Vec<f64>, t: Vec<f64>) -> StroboSeries {
        StroboSeries {
            tau: (0..a.len()).map(|i| i as f64).collect(),
            alpha_out: a,
            theta_out: t,
            params: ModelParams::default(),
            ic: (0.9, 0.2),
        }
    }

    #[test]
    fn stationary_series_has_one_point() {
        let s = series(vec![0.4; 20], vec![0.1; 20]);
        let pts = poincare_points(&s);
        assert_eq!(pts.len(), 20);
        assert_eq!(count_distinct_points(&pts, DEFAULT_REL_TOL), 1);
    }

    #[test]
    fn periodic_series_has_m_points() {
        let a: Vec<f64> = (0..60).map(|i| [0.2, 0.5, 0.9][i % 3]).collect();
        let t: Vec<f64> = (0..60).map(|i| [0.05, 0.1, 0.3][i % 3]).collect();
        let s = series(a.clone(), t);
        let c = classify_orbit(&a, DEFAULT_REL_TOL, DEFAULT_MAX_PERIOD).unwrap();
        assert_eq!(c.kind, OrbitKind::Periodic);
        assert_eq!(count_distinct_points(&poincare_points(&s), DEFAULT_REL_TOL), c.period);
        assert_eq!(poincare_points(&s)[1], (0.5, 0.1));
    }

    #[test]
    fn rejects_non_finite() {
        assert_eq!(check_finite(&[1.0, f64::NAN]), Err(Error::NonFinite { index: 1 }));
    }
}
