//! Time integration across switching intervals and the stroboscopic
//! sampling of the outlet.

use crate::error::{Error, Result};
use crate::reactor::{mirror_in_place, rhs_into, GridSpec, ModelParams, ReactorState};

/// How many switching cycles to discard and record, and the target step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSchedule {
    pub n_transient: usize,
    pub n_record: usize,
    pub dt_target: f64,
}

impl Default for RunSchedule {
    fn default() -> Self {
        Self {
            n_transient: 500,
            n_record: 512,
            dt_target: 0.002,
        }
    }
}

impl RunSchedule {
    /// Default cycle counts with the stable step for the given model and grid.
    pub fn for_model(p: &ModelParams, g: &GridSpec) -> Self {
        Self {
            dt_target: p.stable_dt(g),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_record < 1 {
            return Err(Error::InvalidParam {
                name: "n_record",
                reason: "must be >= 1".into(),
            });
        }
        if !(self.dt_target.is_finite() && self.dt_target > 0.0) {
            return Err(Error::InvalidParam {
                name: "dt_target",
                reason: format!("must be finite and > 0, got {}", self.dt_target),
            });
        }
        Ok(())
    }

    /// Number of steps per switching interval, `ceil(tau_r / dt_target)`.
    pub fn steps_per_cycle(&self, tau_r: f64) -> usize {
        let ratio = tau_r / self.dt_target;
        // Guard against 2750.0000000000005-style rounding of exact ratios.
        let n = (ratio - 1e-9 * ratio.max(1.0)).ceil();
        (n as usize).max(1)
    }

    /// Actual step: `tau_r / steps_per_cycle`, never above `dt_target`.
    pub fn step_size(&self, tau_r: f64) -> f64 {
        tau_r / self.steps_per_cycle(tau_r) as f64
    }
}

/// Outlet samples taken once per switching interval.
#[derive(Debug, Clone, PartialEq)]
pub struct StroboSeries {
    pub alpha_out: Vec<f64>,
    pub theta_out: Vec<f64>,
    /// Time of each sample (end of the corresponding interval).
    pub tau: Vec<f64>,
    pub params: ModelParams,
    /// Uniform initial profiles `(alpha0, theta0)`.
    pub ic: (f64, f64),
}

impl StroboSeries {
    pub fn len(&self) -> usize {
        self.alpha_out.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha_out.is_empty()
    }
}

/// Reusable RK4 work buffers for one grid size.
#[derive(Debug, Clone)]
pub struct Stepper {
    p: ModelParams,
    dx: f64,
    ka: [Vec<f64>; 4],
    kt: [Vec<f64>; 4],
    stage_a: Vec<f64>,
    stage_t: Vec<f64>,
}

impl Stepper {
    pub fn new(p: &ModelParams, g: &GridSpec) -> Self {
        let n = g.n_nodes();
        let z = || vec![0.0; n];
        Self {
            p: *p,
            dx: g.dxi(),
            ka: [z(), z(), z(), z()],
            kt: [z(), z(), z(), z()],
            stage_a: z(),
            stage_t: z(),
        }
    }

    /// Advance `s` by one classical RK4 step in place.
    pub fn step(&mut self, s: &mut ReactorState, dt: f64) -> Result<()> {
        let n = s.alpha.len();
        let p = self.p;
        let dx = self.dx;
        let tau = s.tau;
        let with_tau = |e: Error| match e {
            Error::Numerical { reason, .. } => Error::Numerical { tau, reason },
            other => other,
        };

        let [ka1, ka2, ka3, ka4] = &mut self.ka;
        let [kt1, kt2, kt3, kt4] = &mut self.kt;
        let (sa, st) = (&mut self.stage_a, &mut self.stage_t);

        rhs_into(&mut s.alpha, &mut s.theta, &p, dx, ka1, kt1).map_err(with_tau)?;

        for i in 0..n {
            sa[i] = s.alpha[i] + 0.5 * dt * ka1[i];
            st[i] = s.theta[i] + 0.5 * dt * kt1[i];
        }
        rhs_into(sa, st, &p, dx, ka2, kt2).map_err(with_tau)?;

        for i in 0..n {
            sa[i] = s.alpha[i] + 0.5 * dt * ka2[i];
            st[i] = s.theta[i] + 0.5 * dt * kt2[i];
        }
        rhs_into(sa, st, &p, dx, ka3, kt3).map_err(with_tau)?;

        for i in 0..n {
            sa[i] = s.alpha[i] + dt * ka3[i];
            st[i] = s.theta[i] + dt * kt3[i];
        }
        rhs_into(sa, st, &p, dx, ka4, kt4).map_err(with_tau)?;

        let w = dt / 6.0;
        for i in 1..n - 1 {
            s.alpha[i] += w * (ka1[i] + 2.0 * ka2[i] + 2.0 * ka3[i] + ka4[i]);
            s.theta[i] += w * (kt1[i] + 2.0 * kt2[i] + 2.0 * kt3[i] + kt4[i]);
        }
        s.tau += dt;
        crate::reactor::set_boundaries(&mut s.alpha, p.pe_m, dx);
        crate::reactor::set_boundaries(&mut s.theta, p.pe_h, dx);
        s.check(p.beta)
    }

    /// Integrate one full switching interval of `steps` steps, sample the
    /// outlet, then reverse the flow. Returns `(alpha_out, theta_out)`.
    pub fn cycle(&mut self, s: &mut ReactorState, steps: usize, dt: f64) -> Result<(f64, f64)> {
        let tau0 = s.tau;
        for j in 0..steps {
            self.step(s, dt)?;
            // Keep tau free of accumulated rounding.
            s.tau = tau0 + (j + 1) as f64 * dt;
        }
        let sample = s.outlet();
        mirror_in_place(s);
        Ok(sample)
    }
}

/// One RK4 step of size `dt`.
pub fn step(s: &ReactorState, dt: f64, p: &ModelParams, g: &GridSpec) -> Result<ReactorState> {
    check_dt(dt)?;
    check_len(s, g)?;
    let mut out = s.clone();
    Stepper::new(p, g).step(&mut out, dt)?;
    Ok(out)
}

fn check_dt(dt: f64) -> Result<()> {
    if dt.is_finite() && dt > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            name: "dt",
            reason: format!("must be finite and > 0, got {dt}"),
        })
    }
}

fn check_len(s: &ReactorState, g: &GridSpec) -> Result<()> {
    if s.alpha.len() == g.n_nodes() && s.theta.len() == g.n_nodes() {
        Ok(())
    } else {
        Err(Error::InvalidParam {
            name: "state",
            reason: format!("profile length does not match grid of {} nodes", g.n_nodes()),
        })
    }
}

/// Number of whole steps of size `dt` in one switching interval, or an
/// error when `tau_r / dt` is not an integer.
pub fn exact_steps(tau_r: f64, dt: f64) -> Result<usize> {
    check_dt(dt)?;
    let ratio = tau_r / dt;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > 1e-9 * n {
        return Err(Error::InvalidParam {
            name: "dt",
            reason: format!("tau_r / dt = {ratio} is not an integer"),
        });
    }
    Ok(n as usize)
}

/// One point of the stroboscopic map: integrate `tau_r`, sample the outlet,
/// reverse the flow.
pub fn run_cycle(s: &ReactorState, p: &ModelParams, g: &GridSpec, dt: f64) -> Result<(ReactorState, f64, f64)> {
    check_len(s, g)?;
    let steps = exact_steps(p.tau_r, dt)?;
    let mut out = s.clone();
    let (a, t) = Stepper::new(p, g).cycle(&mut out, steps, dt)?;
    out.tau = s.tau + p.tau_r;
    Ok((out, a, t))
}

/// Run from uniform initial profiles and record the stroboscopic series.
pub fn simulate(alpha0: f64, theta0: f64, p: &ModelParams, g: &GridSpec, sched: &RunSchedule) -> Result<StroboSeries> {
    simulate_with_state(alpha0, theta0, p, g, sched).map(|(series, _)| series)
}

/// Like [`simulate`], also returning the final (already reversed) state.
pub fn simulate_with_state(
    alpha0: f64,
    theta0: f64,
    p: &ModelParams,
    g: &GridSpec,
    sched: &RunSchedule,
) -> Result<(StroboSeries, ReactorState)> {
    p.validate()?;
    sched.validate()?;
    if !(alpha0.is_finite() && theta0.is_finite()) {
        return Err(Error::InvalidParam {
            name: "ic",
            reason: "initial values must be finite".into(),
        });
    }
    let steps = sched.steps_per_cycle(p.tau_r);
    let dt = p.tau_r / steps as f64;
    let mut s = ReactorState::uniform(alpha0, theta0, g, p);
    s.check(p.beta).map_err(|e| Error::Cycle {
        cycle: 0,
        source: Box::new(e),
    })?;
    let mut stepper = Stepper::new(p, g);

    let total = sched.n_transient + sched.n_record;
    let mut alpha_out = Vec::with_capacity(sched.n_record);
    let mut theta_out = Vec::with_capacity(sched.n_record);
    let mut tau = Vec::with_capacity(sched.n_record);
    for cycle in 0..total {
        s.tau = cycle as f64 * p.tau_r;
        let (a, t) = stepper.cycle(&mut s, steps, dt).map_err(|e| Error::Cycle {
            cycle,
            source: Box::new(e),
        })?;
        s.tau = (cycle + 1) as f64 * p.tau_r;
        if cycle >= sched.n_transient {
            alpha_out.push(a);
            theta_out.push(t);
            tau.push(s.tau);
        }
    }
    Ok((
        StroboSeries {
            alpha_out,
            theta_out,
            tau,
            params: *p,
            ic: (alpha0, theta0),
        },
        s,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reactor::spatial_rhs;

    fn bump(g: &GridSpec, p: &ModelParams) -> ReactorState {
        let mut s = ReactorState::uniform(0.0, 0.0, g, p);
        for i in 0..g.n_nodes() {
            let x = g.xi(i);
            s.alpha[i] = 0.1 + 0.4 * (-((x - 0.5) / 0.15).powi(2)).exp();
            s.theta[i] = 0.05 + 0.1 * (-((x - 0.4) / 0.2).powi(2)).exp();
        }
        s.enforce_boundaries(p, g);
        s
    }

    #[test]
    fn schedule_steps_land_on_switching_instants() {
        let sched = RunSchedule::default();
        for &tau_r in &[4.0, 5.5, 6.5, 13.5, 3.0 + 11.0 / 399.0 * 17.0] {
            let n = sched.steps_per_cycle(tau_r);
            let dt = sched.step_size(tau_r);
            assert!(dt <= sched.dt_target * (1.0 + 1e-12));
            assert_eq!(exact_steps(tau_r, dt).unwrap(), n);
        }
        assert_eq!(sched.steps_per_cycle(5.5), 2750);
        assert_eq!(sched.steps_per_cycle(4.0), 2000);
    }

    #[test]
    fn zero_state_is_fixed_point_without_reaction() {
        let g = GridSpec::new(21).unwrap();
        let p = ModelParams {
            da: 0.0,
            tau_r: 0.5,
            ..Default::default()
        };
        let s = ReactorState::uniform(0.0, 0.0, &g, &p);
        let next = step(&s, 0.01, &p, &g).unwrap();
        assert_eq!(next.alpha, s.alpha);
        assert_eq!(next.theta, s.theta);
        assert!((next.tau - 0.01).abs() < 1e-15);

        let (after, a, t) = run_cycle(&s, &p, &g, 0.01).unwrap();
        assert_eq!((a, t), (0.0, 0.0));
        assert!(after.alpha.iter().all(|&v| v == 0.0));
        assert_eq!(after.io, 1);
    }

    #[test]
    fn run_cycle_flips_io_and_requires_integer_steps() {
        let g = GridSpec::new(21).unwrap();
        let p = ModelParams {
            tau_r: 0.5,
            da: 0.02,
            ..Default::default()
        };
        let s = bump(&g, &p);
        let (out, _, _) = run_cycle(&s, &p, &g, 0.005).unwrap();
        assert_ne!(out.io, s.io);
        assert!((out.tau - 0.5).abs() < 1e-15);
        assert!(run_cycle(&s, &p, &g, 0.003).is_err());
    }

    #[test]
    fn sampled_value_is_physical_outlet() {
        // io = 0: outlet is xi = 1; after the reversal the same physical
        // node sits at computational index 0.
        let g = GridSpec::new(21).unwrap();
        let p = ModelParams {
            tau_r: 0.2,
            da: 0.02,
            ..Default::default()
        };
        let s = bump(&g, &p);
        let mut pre = s.clone();
        let mut st = Stepper::new(&p, &g);
        for _ in 0..40 {
            st.step(&mut pre, 0.005).unwrap();
        }
        let (post, a, t) = run_cycle(&s, &p, &g, 0.005).unwrap();
        assert_eq!(a, pre.alpha[20]);
        assert_eq!(t, pre.theta[20]);
        assert_eq!(post.alpha[0], a);
    }

    #[test]
    fn rk4_temporal_order() {
        // Richardson estimate on a smooth problem with reaction.
        let g = GridSpec::new(21).unwrap();
        let p = ModelParams {
            tau_r: 0.4,
            da: 0.02,
            ..Default::default()
        };
        let s0 = bump(&g, &p);
        let run = |steps: usize| {
            let dt = 0.4 / steps as f64;
            let mut s = s0.clone();
            let mut st = Stepper::new(&p, &g);
            for _ in 0..steps {
                st.step(&mut s, dt).unwrap();
            }
            s
        };
        let (a, b, c) = (run(40), run(80), run(160));
        let diff = |x: &ReactorState, y: &ReactorState| {
            x.alpha
                .iter()
                .zip(&y.alpha)
                .chain(x.theta.iter().zip(&y.theta))
                .map(|(u, v)| (u - v).abs())
                .fold(0.0, f64::max)
        };
        let order = (diff(&a, &b) / diff(&b, &c)).log2();
        assert!(order > 3.8, "order {order}");
    }

    #[test]
    fn advection_diffusion_decays_toward_zero_feed() {
        let g = GridSpec::new(41).unwrap();
        let p = ModelParams {
            da: 0.0,
            delta: 0.0,
            tau_r: 0.5,
            ..Default::default()
        };
        let mut s = bump(&g, &p);
        let dt = p.tau_r / 50.0;
        let energy = |s: &ReactorState| s.alpha.iter().map(|a| a * a).sum::<f64>();
        let mut last = energy(&s);
        for _ in 0..6 {
            let (next, _, _) = run_cycle(&s, &p, &g, dt).unwrap();
            let e = energy(&next);
            assert!(e < last, "{e} !< {last}");
            last = e;
            s = next;
        }
    }

    #[test]
    fn simulate_reports_failing_cycle() {
        let g = GridSpec::new(21).unwrap();
        let p = ModelParams {
            tau_r: 0.5,
            ..Default::default()
        };
        // dt far above the explicit stability limit blows up.
        let sched = RunSchedule {
            n_transient: 0,
            n_record: 50,
            dt_target: 0.25,
        };
        match simulate(0.5, 0.1, &p, &g, &sched) {
            Err(Error::Cycle { .. }) => {}
            other => panic!("expected cycle failure, got {other:?}"),
        }
    }

    #[test]
    fn simulate_is_deterministic_and_sized() {
        let g = GridSpec::new(41).unwrap();
        let p = ModelParams {
            tau_r: 2.0,
            ..Default::default()
        };
        let sched = RunSchedule {
            n_transient: 3,
            n_record: 5,
            dt_target: p.stable_dt(&g),
        };
        let a = simulate(0.9, 0.2, &p, &g, &sched).unwrap();
        let b = simulate(0.9, 0.2, &p, &g, &sched).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
        assert_eq!(a.tau[0], 4.0 * 2.0);
        assert_eq!(a.ic, (0.9, 0.2));
    }

    #[test]
    fn rhs_of_uniform_state_matches_step_direction() {
        let g = GridSpec::new(11).unwrap();
        let p = ModelParams::default();
        let s = ReactorState::uniform(0.0, 0.0, &g, &p);
        let (da, _) = spatial_rhs(&s, &p, &g).unwrap();
        let next = step(&s, 1e-4, &p, &g).unwrap();
        assert!(((next.alpha[5] - s.alpha[5]) / 1e-4 - da[5]).abs() < 1e-3);
    }
}
