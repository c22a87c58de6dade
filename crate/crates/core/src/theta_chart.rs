//! Reduced formulation in the `j`-referenced local basis.
//!
//! The local basis attached to the tangent is `k' = (T × j)/|T × j|`,
//! `j' = k' × T`, and the osculating plane is located by the rotation angle
//! `θ` with `N = j' cos θ + k' sin θ`. Writing the tangent as
//! `T = (cos δ cos β, sin δ, cos δ sin β)` reduces the Frenet–Serret system to
//!
//! ```text
//! dδ/ds = κ cos θ
//! dβ/ds = κ sin θ / cos δ
//! τ     = dθ/ds − κ tan δ sin θ
//! ```
//!
//! The chart is singular at `T = ±j` (`δ = ±π/2`).

use crate::error::{ChartId, Error, Result};
use crate::scalar::Scalar;
use crate::vector::{Frame, Vector3};

/// Smallest `cos δ` (or `1 − T_j²` under a root) the chart divides by.
pub const COS_FLOOR: f64 = 1e-8;

/// Default `|T_j|` limit above which a θ-chart state is not initialised.
pub const CHART_LIMIT: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaState<T> {
    pub s: T,
    /// `T_j = sin δ`
    pub delta: T,
    /// Azimuth of `T` in the i–k plane.
    pub beta: T,
    /// Osculating-plane rotation angle; kept unwrapped.
    pub theta: T,
}

/// What drives the chart angle during integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleDrive<T> {
    /// The angle's derivative is prescribed directly.
    Rate(T),
    /// Torsion is prescribed; the angle follows from the torsion relation.
    Torsion(T),
}

impl<T: Scalar> ThetaState<T> {
    pub fn new(s: T, delta: T, beta: T, theta: T) -> Self {
        Self {
            s,
            delta,
            beta,
            theta,
        }
    }

    pub fn to_array(self) -> [T; 3] {
        [self.delta, self.beta, self.theta]
    }

    pub fn from_array(s: T, y: [T; 3]) -> Self {
        Self::new(s, y[0], y[1], y[2])
    }

    pub fn tangent(&self) -> Vector3<T> {
        tangent_from_state(self)
    }

    pub fn frame(&self) -> Frame<T> {
        Frame::new(
            tangent_from_state(self),
            normal_from_state(self),
            binormal_from_state(self),
        )
    }
}

/// Initialises the reduced state from a unit tangent, rejecting tangents with
/// `|T_j| ≥ CHART_LIMIT`.
pub fn init_theta_state<T: Scalar>(t0: Vector3<T>, theta0: T, s0: T) -> Result<ThetaState<T>> {
    init_theta_state_with_limit(t0, theta0, s0, T::lit(CHART_LIMIT))
}

pub fn init_theta_state_with_limit<T: Scalar>(
    t0: Vector3<T>,
    theta0: T,
    s0: T,
    limit: T,
) -> Result<ThetaState<T>> {
    let t0 = t0.ensure_unit(T::lit(1e-9))?;
    if t0.j.abs() >= limit {
        return Err(Error::ChartSingular {
            chart: ChartId::Theta,
            s: s0.as_f64(),
            component: t0.j.abs().as_f64(),
        });
    }
    let delta = t0.j.atan2(t0.i.hypot(t0.k));
    let beta = t0.k.atan2(t0.i);
    Ok(ThetaState::new(s0, delta, beta, theta0))
}

fn checked_cos_delta<T: Scalar>(state: &ThetaState<T>) -> Result<T> {
    let c = state.delta.cos();
    if c < T::lit(COS_FLOOR) {
        return Err(Error::ChartSingular {
            chart: ChartId::Theta,
            s: state.s.as_f64(),
            component: state.delta.sin().abs().as_f64(),
        });
    }
    Ok(c)
}

/// Right-hand side `(dδ/ds, dβ/ds, dθ/ds)` of the reduced system.
pub fn theta_rhs<T: Scalar>(
    state: &ThetaState<T>,
    kappa: T,
    drive: AngleDrive<T>,
) -> Result<[T; 3]> {
    let cos_delta = checked_cos_delta(state)?;
    let (sin_theta, cos_theta) = state.theta.sin_cos();
    let d_delta = kappa * cos_theta;
    let d_beta = kappa * sin_theta / cos_delta;
    let d_theta = match drive {
        AngleDrive::Rate(rate) => rate,
        AngleDrive::Torsion(tau) => tau + kappa * state.delta.tan() * sin_theta,
    };
    Ok([d_delta, d_beta, d_theta])
}

pub fn tangent_from_state<T: Scalar>(state: &ThetaState<T>) -> Vector3<T> {
    let (sd, cd) = state.delta.sin_cos();
    let (sb, cb) = state.beta.sin_cos();
    Vector3::new(cd * cb, sd, cd * sb)
}

pub fn normal_from_state<T: Scalar>(state: &ThetaState<T>) -> Vector3<T> {
    let (sd, cd) = state.delta.sin_cos();
    let (sb, cb) = state.beta.sin_cos();
    let (st, ct) = state.theta.sin_cos();
    Vector3::new(-ct * sd * cb - sb * st, ct * cd, -ct * sd * sb + cb * st)
}

pub fn binormal_from_state<T: Scalar>(state: &ThetaState<T>) -> Vector3<T> {
    let (sd, cd) = state.delta.sin_cos();
    let (sb, cb) = state.beta.sin_cos();
    let (st, ct) = state.theta.sin_cos();
    Vector3::new(sd * st * cb - ct * sb, -cd * st, sd * st * sb + ct * cb)
}

/// Signed torsion `dθ/ds − κ tan δ sin θ` from the reduced state.
pub fn torsion_from_theta_state<T: Scalar>(
    state: &ThetaState<T>,
    kappa: T,
    dtheta_ds: T,
) -> Result<T> {
    checked_cos_delta(state)?;
    Ok(dtheta_ds - kappa * state.delta.tan() * state.theta.sin())
}

/// The same torsion from frame components: `dθ/ds + κ T_j B_j / (1 − T_j²)`.
pub fn torsion_from_theta_frame<T: Scalar>(
    tangent: Vector3<T>,
    binormal: Vector3<T>,
    kappa: T,
    dtheta_ds: T,
) -> Result<T> {
    let denom = T::one() - tangent.j * tangent.j;
    if denom < T::lit(COS_FLOOR) * T::lit(COS_FLOOR) {
        return Err(Error::ChartSingular {
            chart: ChartId::Theta,
            s: f64::NAN,
            component: tangent.j.abs().as_f64(),
        });
    }
    Ok(dtheta_ds + kappa * tangent.j * binormal.j / denom)
}

/// Rotation angle of the osculating plane read off a frame, `atan2(−B_j, N_j)`.
pub fn theta_from_frame<T: Scalar>(
    tangent: Vector3<T>,
    normal: Vector3<T>,
    binormal: Vector3<T>,
) -> Result<T> {
    if T::one() - tangent.j * tangent.j < T::lit(COS_FLOOR) * T::lit(COS_FLOOR) {
        return Err(Error::ChartSingular {
            chart: ChartId::Theta,
            s: f64::NAN,
            component: tangent.j.abs().as_f64(),
        });
    }
    Ok((-binormal.j).atan2(normal.j))
}
