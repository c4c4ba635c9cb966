#![allow(dead_code)]

use rfr_core::ModelParams;

/// Reference integrator working in the fixed physical frame. Flow reversal
/// flips the sign of the convective term and swaps the boundary conditions
/// between the two ends; no reflection of the profiles is involved.
pub struct PhysicalFrame {
    pub p: ModelParams,
    pub n: usize,
    pub dx: f64,
}

impl PhysicalFrame {
    pub fn new(p: ModelParams, n: usize) -> Self {
        Self {
            p,
            n,
            dx: 1.0 / (n - 1) as f64,
        }
    }

    fn apply_bc(&self, u: &mut [f64], pe: f64, forward: bool) {
        let n = self.n;
        let k = 2.0 * pe * self.dx + 3.0;
        if n == 3 {
            let v = 8.0 * u[1] / (3.0 * k - 1.0);
            let w = (4.0 * u[1] - v) / 3.0;
            if forward {
                u[0] = v;
                u[2] = w;
            } else {
                u[2] = v;
                u[0] = w;
            }
            return;
        }
        if forward {
            u[0] = (4.0 * u[1] - u[2]) / k;
            u[n - 1] = (4.0 * u[n - 2] - u[n - 3]) / 3.0;
        } else {
            u[n - 1] = (4.0 * u[n - 2] - u[n - 3]) / k;
            u[0] = (4.0 * u[1] - u[2]) / 3.0;
        }
    }

    fn rhs(&self, a: &mut [f64], t: &mut [f64], forward: bool, da: &mut [f64], dt: &mut [f64]) {
        let p = &self.p;
        self.apply_bc(a, p.pe_m, forward);
        self.apply_bc(t, p.pe_h, forward);
        let dx = self.dx;
        for i in 1..self.n - 1 {
            let conv = |u: &[f64]| {
                if forward {
                    -(u[i] - u[i - 1]) / dx
                } else {
                    (u[i + 1] - u[i]) / dx
                }
            };
            let lap = |u: &[f64]| (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (dx * dx);
            let base = (1.0 - a[i]).max(0.0);
            let r = p.da * base.powf(p.m) * (p.gamma * p.beta * t[i] / (1.0 + p.beta * t[i])).exp();
            da[i] = conv(a) + lap(a) / p.pe_m + r;
            dt[i] = (conv(t) + lap(t) / p.pe_h + r + p.delta * (p.theta_h - t[i])) / p.le;
        }
        da[0] = 0.0;
        dt[0] = 0.0;
        da[self.n - 1] = 0.0;
        dt[self.n - 1] = 0.0;
    }

    pub fn rk4(&self, a: &mut [f64], t: &mut [f64], forward: bool, h: f64) {
        let n = self.n;
        let mut ka = vec![vec![0.0; n]; 4];
        let mut kt = vec![vec![0.0; n]; 4];
        let (mut sa, mut st) = (a.to_vec(), t.to_vec());
        for stage in 0..4 {
            let c = [0.0, 0.5, 0.5, 1.0][stage];
            if stage > 0 {
                for i in 0..n {
                    sa[i] = a[i] + c * h * ka[stage - 1][i];
                    st[i] = t[i] + c * h * kt[stage - 1][i];
                }
            } else {
                sa.copy_from_slice(a);
                st.copy_from_slice(t);
            }
            let (mut da, mut dt) = (vec![0.0; n], vec![0.0; n]);
            self.rhs(&mut sa, &mut st, forward, &mut da, &mut dt);
            ka[stage] = da;
            kt[stage] = dt;
        }
        for i in 1..n - 1 {
            a[i] += h / 6.0 * (ka[0][i] + 2.0 * ka[1][i] + 2.0 * ka[2][i] + ka[3][i]);
            t[i] += h / 6.0 * (kt[0][i] + 2.0 * kt[1][i] + 2.0 * kt[2][i] + kt[3][i]);
        }
        self.apply_bc(a, self.p.pe_m, forward);
        self.apply_bc(t, self.p.pe_h, forward);
    }

    /// Outlet conversion after each of `cycles` switching intervals, starting
    /// from uniform profiles with the feed entering at `xi = 0`.
    pub fn outlet_series(&self, alpha0: f64, theta0: f64, cycles: usize, steps: usize) -> Vec<f64> {
        let h = self.p.tau_r / steps as f64;
        let mut a = vec![alpha0; self.n];
        let mut t = vec![theta0; self.n];
        self.apply_bc(&mut a, self.p.pe_m, true);
        self.apply_bc(&mut t, self.p.pe_h, true);
        let mut forward = true;
        let mut out = Vec::with_capacity(cycles);
        for _ in 0..cycles {
            for _ in 0..steps {
                self.rk4(&mut a, &mut t, forward, h);
            }
            out.push(if forward { a[self.n - 1] } else { a[0] });
            forward = !forward;
        }
        out
    }
}

/// Brute-force amplitude spectrum `|sum_j x_j exp(-2 pi i j k / N)| / N`.
pub fn brute_force_amplitudes(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|k| {
            let (mut re, mut im) = (0.0f64, 0.0f64);
            for (j, &v) in x.iter().enumerate() {
                let ang = -2.0 * std::f64::consts::PI * ((j * k) % n) as f64 / n as f64;
                re += v * ang.cos();
                im += v * ang.sin();
            }
            re.hypot(im) / n as f64
        })
        .collect()
}

/// `(max relative deviation from the oracle, Parseval relative residual)`.
/// Deviations are relative to the largest oracle amplitude.
pub fn dft_errors(x: &[f64], amps: &[f64]) -> (f64, f64) {
    let oracle = brute_force_amplitudes(x);
    let scale = oracle.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let dev = amps.iter().zip(&oracle).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / scale;
    let energy: f64 = x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64;
    let spec: f64 = amps.iter().map(|a| a * a).sum();
    (dev, (spec - energy).abs() / energy.max(f64::MIN_POSITIVE))
}

/// `M`-periodic series of `len` samples cycling through well-separated
/// levels in a scrambled order.
pub fn periodic_series(m: usize, len: usize) -> Vec<f64> {
    let levels: Vec<f64> = (0..m)
        .map(|i| 0.2 + 0.6 * ((i * 5) % m.max(1)) as f64 / m as f64)
        .collect();
    (0..len).map(|j| levels[j % m]).collect()
}

/// `u(xi) = cos(pi xi) + pe (xi - xi^2 / 2)`, which satisfies
/// `u'(0) = pe u(0)` and `u'(1) = 0`. Returns `(u, u', u'')`.
pub fn manufactured(xi: f64, pe: f64) -> (f64, f64, f64) {
    use std::f64::consts::PI;
    (
        (PI * xi).cos() + pe * (xi - 0.5 * xi * xi),
        -PI * (PI * xi).sin() + pe * (1.0 - xi),
        -PI * PI * (PI * xi).cos() - pe,
    )
}
