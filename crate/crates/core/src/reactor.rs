//! Dimensionless model of a non-adiabatic tubular reactor with axial
//! dispersion: source terms, the method-of-lines right-hand side with
//! Danckwerts boundary conditions, and the flow-reversal reflection.
//!
//! The balance equations are always evaluated for flow in the +xi
//! direction. A reversal of the feed direction is represented by reflecting
//! the profiles end-to-end (see [`mirror`]), so the inlet is always node 0
//! and the outlet always the last node of the computational frame.

use crate::error::{Error, Result};

/// Largest excursion of the conversion outside `[0, 1]` tolerated during a
/// valid run.
pub const ALPHA_RANGE_EPS: f64 = 1e-6;

const REACTION_DT_SCALE: f64 = 6.0;

/// All dimensionless constants of the model plus the switching time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub gamma: f64,
    pub beta: f64,
    /// Reaction order.
    pub m: f64,
    pub delta: f64,
    pub theta_h: f64,
    pub pe_m: f64,
    pub pe_h: f64,
    pub le: f64,
    pub da: f64,
    pub tau_r: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            gamma: 15.0,
            beta: 2.0,
            m: 1.5,
            delta: 3.0,
            theta_h: 0.0,
            pe_m: 50.0,
            pe_h: 50.0,
            le: 1.0,
            da: 0.13,
            tau_r: 5.5,
        }
    }
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    name,
                    reason: format!("must be finite and > 0, got {v}"),
                })
            }
        }
        fn non_negative(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    name,
                    reason: format!("must be finite and >= 0, got {v}"),
                })
            }
        }
        fn finite(name: &'static str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParam {
                    name,
                    reason: format!("must be finite, got {v}"),
                })
            }
        }
        finite("gamma", self.gamma)?;
        finite("beta", self.beta)?;
        non_negative("m", self.m)?;
        finite("delta", self.delta)?;
        finite("theta_h", self.theta_h)?;
        positive("pe_m", self.pe_m)?;
        positive("pe_h", self.pe_h)?;
        positive("le", self.le)?;
        non_negative("da", self.da)?;
        positive("tau_r", self.tau_r)?;
        Ok(())
    }

    /// Explicit RK4 step limit from transport: `0.8 * min(dxi, pe_min * dxi^2 / 2)`.
    ///
    /// The heat balance is divided by `le`, so its dispersion coefficient is
    /// `1 / (pe_h * le)` and its transport speed `1 / le`; `pe_min` is
    /// `min(pe_m, pe_h * le)` and the convective limit is `dxi * min(1, le)`.
    pub fn transport_dt(&self, grid: &GridSpec) -> f64 {
        let pe_min = self.pe_m.min(self.pe_h * self.le);
        let dx = grid.dxi();
        0.8 * (dx * self.le.min(1.0)).min(pe_min * dx * dx / 2.0)
    }

    /// Step limit from the reaction rate at the adiabatic temperature rise
    /// (`theta = 1`): `6 / (Da exp(gamma beta / (1 + beta)))`. Above it the
    /// ignition front makes RK4 overshoot full conversion.
    pub fn reaction_dt(&self) -> f64 {
        let k = self.da * (self.gamma * self.beta / (1.0 + self.beta)).exp();
        if k > 0.0 {
            REACTION_DT_SCALE / k
        } else {
            f64::INFINITY
        }
    }

    /// Largest step used by default: the smaller of [`Self::transport_dt`]
    /// and [`Self::reaction_dt`].
    pub fn stable_dt(&self, grid: &GridSpec) -> f64 {
        self.transport_dt(grid).min(self.reaction_dt())
    }
}

/// Uniform grid over `xi in [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSpec {
    n_nodes: usize,
}

impl GridSpec {
    pub const DEFAULT_NODES: usize = 101;

    pub fn new(n_nodes: usize) -> Result<Self> {
        if n_nodes < 3 {
            return Err(Error::InvalidParam {
                name: "n_nodes",
                reason: format!("need at least 3 nodes, got {n_nodes}"),
            });
        }
        Ok(Self { n_nodes })
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn dxi(&self) -> f64 {
        1.0 / (self.n_nodes - 1) as f64
    }

    /// Position of node `i`. The last node sits at exactly 1.
    pub fn xi(&self, i: usize) -> f64 {
        if i + 1 == self.n_nodes {
            1.0
        } else {
            i as f64 * self.dxi()
        }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            n_nodes: Self::DEFAULT_NODES,
        }
    }
}

/// Discretized conversion and temperature profiles.
///
/// `io` is the physical flow-direction index: with `io = 0` the physical
/// outlet is `xi = 1`, with `io = 1` it is `xi = 0`. Profiles are stored in
/// the computational frame, in which the outlet is always the last node.
#[derive(Debug, Clone, PartialEq)]
pub struct ReactorState {
    pub alpha: Vec<f64>,
    pub theta: Vec<f64>,
    pub io: u8,
    pub tau: f64,
}

impl ReactorState {
    /// Uniform profiles at `tau = 0`, `io = 0`, with boundary nodes made
    /// consistent with the boundary conditions.
    pub fn uniform(alpha0: f64, theta0: f64, grid: &GridSpec, p: &ModelParams) -> Self {
        let n = grid.n_nodes();
        let mut s = Self {
            alpha: vec![alpha0; n],
            theta: vec![theta0; n],
            io: 0,
            tau: 0.0,
        };
        s.enforce_boundaries(p, grid);
        s
    }

    /// Overwrite the two boundary nodes of each profile with the values the
    /// Danckwerts conditions imply for the current interior.
    pub fn enforce_boundaries(&mut self, p: &ModelParams, grid: &GridSpec) {
        let dx = grid.dxi();
        set_boundaries(&mut self.alpha, p.pe_m, dx);
        set_boundaries(&mut self.theta, p.pe_h, dx);
    }

    /// Outlet sample in the computational frame (last node).
    pub fn outlet(&self) -> (f64, f64) {
        (
            *self.alpha.last().expect("non-empty profile"),
            *self.theta.last().expect("non-empty profile"),
        )
    }

    /// Check finiteness, the Arrhenius domain and the physical conversion
    /// range. The inlet node holds the algebraic Danckwerts extrapolation
    /// and is exempt from the conversion range.
    pub fn check(&self, beta: f64) -> Result<()> {
        for (i, (&a, &t)) in self.alpha.iter().zip(&self.theta).enumerate() {
            if !a.is_finite() || !t.is_finite() {
                return Err(Error::Numerical {
                    tau: self.tau,
                    reason: format!("non-finite value at node {i}"),
                });
            }
            if i > 0 && !(-ALPHA_RANGE_EPS..=1.0 + ALPHA_RANGE_EPS).contains(&a) {
                return Err(Error::Numerical {
                    tau: self.tau,
                    reason: format!("conversion {a} out of range at node {i}"),
                });
            }
            if 1.0 + beta * t <= 0.0 {
                return Err(Error::Numerical {
                    tau: self.tau,
                    reason: format!("temperature {t} at node {i} leaves the Arrhenius domain"),
                });
            }
        }
        Ok(())
    }
}

/// Danckwerts inlet value from the two next nodes: solves
/// `u0 = (1/pe) * (-3 u0 + 4 u1 - u2) / (2 dx)` for `u0`.
#[inline]
fn inlet_value(u1: f64, u2: f64, pe: f64, dx: f64) -> f64 {
    (4.0 * u1 - u2) / (2.0 * pe * dx + 3.0)
}

/// Zero-gradient outlet value: `(3 uN - 4 uN-1 + uN-2) / (2 dx) = 0`.
#[inline]
fn outlet_value(u_nm1: f64, u_nm2: f64) -> f64 {
    (4.0 * u_nm1 - u_nm2) / 3.0
}

/// Set `u[0]` and `u[n-1]` from the interior according to the boundary
/// conditions.
pub(crate) fn set_boundaries(u: &mut [f64], pe: f64, dx: f64) {
    let n = u.len();
    if n == 3 {
        // Both relations involve the single interior node and each other.
        let k = 2.0 * pe * dx + 3.0;
        u[0] = 8.0 * u[1] / (3.0 * k - 1.0);
        u[2] = (4.0 * u[1] - u[0]) / 3.0;
    } else {
        u[0] = inlet_value(u[1], u[2], pe, dx);
        u[n - 1] = outlet_value(u[n - 2], u[n - 3]);
    }
}

/// Arrhenius exponent `gamma * beta*theta / (1 + beta*theta)`, or `None`
/// outside the domain.
#[inline]
fn arrhenius_exponent(theta: f64, p: &ModelParams) -> Option<f64> {
    let denom = 1.0 + p.beta * theta;
    if denom > 0.0 {
        Some(p.gamma * p.beta * theta / denom)
    } else {
        None
    }
}

#[inline]
fn rate_unchecked(alpha: f64, exponent: f64, p: &ModelParams) -> f64 {
    let base = (1.0 - alpha).max(0.0);
    let order_term = if p.m == 1.5 {
        base * base.sqrt()
    } else if p.m == 1.0 {
        base
    } else {
        base.powf(p.m)
    };
    p.da * order_term * exponent.exp()
}

/// Reaction source term `Da (1 - alpha)^m exp(gamma beta theta / (1 + beta theta))`.
///
/// The base `1 - alpha` is clamped at zero so a transient overshoot of the
/// conversion past 1 yields a zero rate instead of NaN.
pub fn phi1(alpha: f64, theta: f64, p: &ModelParams) -> Result<f64> {
    let e = arrhenius_exponent(theta, p).ok_or(Error::Domain {
        theta,
        denom: 1.0 + p.beta * theta,
    })?;
    Ok(rate_unchecked(alpha, e, p))
}

/// Heat source: reaction heat plus exchange with the coolant.
pub fn phi2(alpha: f64, theta: f64, p: &ModelParams) -> Result<f64> {
    Ok(phi1(alpha, theta, p)? + p.delta * (p.theta_h - theta))
}

/// First-order upwind convection `-du/dxi` for +xi flow at interior nodes.
/// Boundary entries of `out` are left untouched.
pub fn convection_term(u: &[f64], dx: f64, out: &mut [f64]) {
    let inv = 1.0 / dx;
    for i in 1..u.len() - 1 {
        out[i] = -(u[i] - u[i - 1]) * inv;
    }
}

/// Central second difference `(1/pe) d2u/dxi2` at interior nodes.
/// Boundary entries of `out` are left untouched.
pub fn dispersion_term(u: &[f64], pe: f64, dx: f64, out: &mut [f64]) {
    let c = 1.0 / (pe * dx * dx);
    for i in 1..u.len() - 1 {
        out[i] = (u[i - 1] - 2.0 * u[i] + u[i + 1]) * c;
    }
}

/// Allocation-free right-hand side. `alpha`/`theta` boundary nodes are
/// recomputed from the interior in place; the returned rates at the two
/// boundary nodes are zero since those nodes are algebraic.
pub(crate) fn rhs_into(
    alpha: &mut [f64],
    theta: &mut [f64],
    p: &ModelParams,
    dx: f64,
    dalpha: &mut [f64],
    dtheta: &mut [f64],
) -> Result<()> {
    let n = alpha.len();
    set_boundaries(alpha, p.pe_m, dx);
    set_boundaries(theta, p.pe_h, dx);

    let inv_dx = 1.0 / dx;
    let cm = 1.0 / (p.pe_m * dx * dx);
    let ch = 1.0 / (p.pe_h * dx * dx);
    let inv_le = 1.0 / p.le;
    let mut ok = true;
    for i in 1..n - 1 {
        let (a, t) = (alpha[i], theta[i]);
        let denom = 1.0 + p.beta * t;
        ok &= denom > 0.0;
        let r = rate_unchecked(a, p.gamma * p.beta * t / denom, p);
        dalpha[i] = -(a - alpha[i - 1]) * inv_dx + (alpha[i - 1] - 2.0 * a + alpha[i + 1]) * cm + r;
        dtheta[i] = (-(t - theta[i - 1]) * inv_dx
            + (theta[i - 1] - 2.0 * t + theta[i + 1]) * ch
            + r
            + p.delta * (p.theta_h - t))
            * inv_le;
        ok &= dalpha[i].is_finite() && dtheta[i].is_finite();
    }
    dalpha[0] = 0.0;
    dalpha[n - 1] = 0.0;
    dtheta[0] = 0.0;
    dtheta[n - 1] = 0.0;
    if ok {
        Ok(())
    } else {
        Err(locate_failure(alpha, theta, dalpha, dtheta, p))
    }
}

#[cold]
fn locate_failure(alpha: &[f64], theta: &[f64], da: &[f64], dt: &[f64], p: &ModelParams) -> Error {
    for i in 1..alpha.len() - 1 {
        let denom = 1.0 + p.beta * theta[i];
        if denom <= 0.0 || !theta[i].is_finite() {
            return Error::Domain { theta: theta[i], denom };
        }
        if !da[i].is_finite() || !dt[i].is_finite() || !alpha[i].is_finite() {
            return Error::Numerical {
                tau: f64::NAN,
                reason: format!("non-finite derivative at node {i}"),
            };
        }
    }
    Error::Numerical {
        tau: f64::NAN,
        reason: "non-finite derivative".into(),
    }
}

/// Time derivatives of both profiles for +xi flow.
///
/// Interior nodes: upwind convection, central dispersion, source terms; the
/// heat balance is divided by `Le`. The boundary nodes are algebraic
/// (Danckwerts inlet at `xi = 0`, zero gradient at `xi = 1`, both with
/// three-point one-sided differences) and carry a zero rate. The stored
/// boundary values of `s` are ignored and recomputed from the interior.
pub fn spatial_rhs(s: &ReactorState, p: &ModelParams, g: &GridSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = g.n_nodes();
    if s.alpha.len() != n || s.theta.len() != n {
        return Err(Error::InvalidParam {
            name: "state",
            reason: format!(
                "profile lengths {}/{} do not match grid of {n} nodes",
                s.alpha.len(),
                s.theta.len()
            ),
        });
    }
    let mut alpha = s.alpha.clone();
    let mut theta = s.theta.clone();
    let mut da = vec![0.0; n];
    let mut dt = vec![0.0; n];
    rhs_into(&mut alpha, &mut theta, p, g.dxi(), &mut da, &mut dt).map_err(|e| match e {
        Error::Numerical { reason, .. } => Error::Numerical { tau: s.tau, reason },
        other => other,
    })?;
    Ok((da, dt))
}

/// Reflect the profiles end-to-end and flip the flow-direction index.
pub fn mirror(s: &ReactorState) -> ReactorState {
    let mut out = s.clone();
    mirror_in_place(&mut out);
    out
}

pub(crate) fn mirror_in_place(s: &mut ReactorState) {
    s.alpha.reverse();
    s.theta.reverse();
    s.io ^= 1;
}
