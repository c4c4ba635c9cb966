use super::{check_finite, fft};
use crate::error::Result;

/// Magnitudes of `X[k] = (1/N) sum_n x_n exp(-2 pi i k n / N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub amplitudes: Vec<f64>,
    pub n_samples: usize,
}

impl Spectrum {
    /// Largest amplitude over the non-DC harmonics `1 ..= N/2`.
    pub fn max_harmonic(&self) -> f64 {
        self.amplitudes
            .iter()
            .take(self.n_samples / 2 + 1)
            .skip(1)
            .copied()
            .fold(0.0, f64::max)
    }

    /// Number of distinct harmonics `k in 1 ..= N/2` whose amplitude exceeds
    /// `frac` times [`Self::max_harmonic`]. A broadband spectrum has many.
    pub fn harmonics_above(&self, frac: f64) -> usize {
        let max = self.max_harmonic();
        if max == 0.0 {
            return 0;
        }
        self.amplitudes
            .iter()
            .take(self.n_samples / 2 + 1)
            .skip(1)
            .filter(|&&a| a > frac * max)
            .count()
    }
}

/// Amplitude spectrum with the `1/N` normalization.
pub fn amplitude_spectrum(x: &[f64]) -> Result<Spectrum> {
    check_finite(x)?;
    let n = x.len();
    if n == 0 {
        return Err(crate::error::Error::InvalidParam {
            name: "x",
            reason: "empty series".into(),
        });
    }
    let scale = 1.0 / n as f64;
    let amplitudes = fft::dft(x).into_iter().map(|c| c.abs() * scale).collect();
    Ok(Spectrum {
        amplitudes,
        n_samples: n,
    })
}
