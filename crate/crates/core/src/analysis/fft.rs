//! Discrete Fourier transform of a real series: iterative radix-2 FFT for
//! power-of-two lengths, direct summation otherwise.

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub(crate) struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

/// `exp(-2 pi i j / n)` for `j = 0 .. n`, each evaluated directly.
fn twiddles(n: usize) -> Vec<Complex> {
    (0..n)
        .map(|j| {
            let ang = -2.0 * PI * j as f64 / n as f64;
            Complex::new(ang.cos(), ang.sin())
        })
        .collect()
}

/// Unnormalized forward DFT, `sum_n x_n exp(-2 pi i k n / N)`.
pub(crate) fn dft(x: &[f64]) -> Vec<Complex> {
    let n = x.len();
    if n.is_power_of_two() {
        fft_radix2(x)
    } else {
        dft_direct(x)
    }
}

fn dft_direct(x: &[f64]) -> Vec<Complex> {
    let n = x.len();
    let w = twiddles(n);
    (0..n)
        .map(|k| {
            let mut acc = Complex::default();
            for (j, &v) in x.iter().enumerate() {
                // k*j mod n keeps the twiddle lookup exact.
                let t = w[(k * j) % n];
                acc.re += v * t.re;
                acc.im += v * t.im;
            }
            acc
        })
        .collect()
}

fn fft_radix2(x: &[f64]) -> Vec<Complex> {
    let n = x.len();
    let bits = n.trailing_zeros();
    let mut a: Vec<Complex> = vec![Complex::default(); n];
    for (i, &v) in x.iter().enumerate() {
        let r = if bits == 0 {
            0
        } else {
            i.reverse_bits() >> (usize::BITS - bits)
        };
        a[r] = Complex::new(v, 0.0);
    }
    let w = twiddles(n);
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for j in 0..half {
                let t = w[j * stride].mul(a[start + j + half]);
                let u = a[start + j];
                a[start + j] = Complex::new(u.re + t.re, u.im + t.im);
                a[start + j + half] = Complex::new(u.re - t.re, u.im - t.im);
            }
        }
        len <<= 1;
    }
    a
}
