//! Reduced formulation in the `i`-referenced local basis.
//!
//! Here `k' = (i × T)/|i × T|`, `j' = k' × T`, `N = j' cos φ + k' sin φ` and
//! `T = (sin γ, cos γ cos α, cos γ sin α)`. The reduced system is
//!
//! ```text
//! dγ/ds = −κ cos φ
//! dα/ds =  κ sin φ / cos γ
//! τ     =  dφ/ds + κ tan γ sin φ
//! ```
//!
//! The binormal is `B = T × N = k' cos φ − j' sin φ`, whose `j` component is
//! `−(sin γ cos α sin φ + sin α cos φ)`. The chart is singular at `T = ±i`.

use crate::error::{ChartId, Error, Result};
use crate::scalar::Scalar;
use crate::theta_chart::{AngleDrive, CHART_LIMIT, COS_FLOOR};
use crate::vector::{Frame, Vector3};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiState<T> {
    pub s: T,
    /// `T_i = sin γ`
    pub gamma: T,
    /// Azimuth of `T` in the j–k plane.
    pub alpha: T,
    /// Osculating-plane rotation angle in this chart; kept unwrapped.
    pub phi: T,
}

impl<T: Scalar> PhiState<T> {
    pub fn new(s: T, gamma: T, alpha: T, phi: T) -> Self {
        Self {
            s,
            gamma,
            alpha,
            phi,
        }
    }

    pub fn to_array(self) -> [T; 3] {
        [self.gamma, self.alpha, self.phi]
    }

    pub fn from_array(s: T, y: [T; 3]) -> Self {
        Self::new(s, y[0], y[1], y[2])
    }

    pub fn tangent(&self) -> Vector3<T> {
        let (sg, cg) = self.gamma.sin_cos();
        let (sa, ca) = self.alpha.sin_cos();
        Vector3::new(sg, cg * ca, cg * sa)
    }

    pub fn frame(&self) -> Frame<T> {
        frame_from_phi_state(self)
    }
}

pub fn init_phi_state<T: Scalar>(t0: Vector3<T>, phi0: T, s0: T) -> Result<PhiState<T>> {
    init_phi_state_with_limit(t0, phi0, s0, T::lit(CHART_LIMIT))
}

pub fn init_phi_state_with_limit<T: Scalar>(
    t0: Vector3<T>,
    phi0: T,
    s0: T,
    limit: T,
) -> Result<PhiState<T>> {
    let t0 = t0.ensure_unit(T::lit(1e-9))?;
    if t0.i.abs() >= limit {
        return Err(Error::ChartSingular {
            chart: ChartId::Phi,
            s: s0.as_f64(),
            component: t0.i.abs().as_f64(),
        });
    }
    let gamma = t0.i.atan2(t0.j.hypot(t0.k));
    let alpha = t0.k.atan2(t0.j);
    Ok(PhiState::new(s0, gamma, alpha, phi0))
}

fn checked_cos_gamma<T: Scalar>(state: &PhiState<T>) -> Result<T> {
    let c = state.gamma.cos();
    if c < T::lit(COS_FLOOR) {
        return Err(Error::ChartSingular {
            chart: ChartId::Phi,
            s: state.s.as_f64(),
            component: state.gamma.sin().abs().as_f64(),
        });
    }
    Ok(c)
}

/// Right-hand side `(dγ/ds, dα/ds, dφ/ds)`. Note the negative sign on `dγ/ds`.
pub fn phi_rhs<T: Scalar>(state: &PhiState<T>, kappa: T, drive: AngleDrive<T>) -> Result<[T; 3]> {
    let cos_gamma = checked_cos_gamma(state)?;
    let (sin_phi, cos_phi) = state.phi.sin_cos();
    let d_gamma = -kappa * cos_phi;
    let d_alpha = kappa * sin_phi / cos_gamma;
    let d_phi = match drive {
        AngleDrive::Rate(rate) => rate,
        AngleDrive::Torsion(tau) => tau - kappa * state.gamma.tan() * sin_phi,
    };
    Ok([d_gamma, d_alpha, d_phi])
}

pub fn frame_from_phi_state<T: Scalar>(state: &PhiState<T>) -> Frame<T> {
    let (sg, cg) = state.gamma.sin_cos();
    let (sa, ca) = state.alpha.sin_cos();
    let (sp, cp) = state.phi.sin_cos();
    let tangent = Vector3::new(sg, cg * ca, cg * sa);
    let normal = Vector3::new(-cg * cp, sg * ca * cp - sa * sp, sg * sa * cp + ca * sp);
    let binormal = Vector3::new(cg * sp, -(sg * ca * sp + sa * cp), -sg * sa * sp + ca * cp);
    Frame::new(tangent, normal, binormal)
}

/// Signed torsion `dφ/ds + κ tan γ sin φ`.
pub fn torsion_from_phi_state<T: Scalar>(state: &PhiState<T>, kappa: T, dphi_ds: T) -> Result<T> {
    checked_cos_gamma(state)?;
    Ok(dphi_ds + kappa * state.gamma.tan() * state.phi.sin())
}

/// The same torsion from frame components: `dφ/ds + κ B_i T_i / (1 − T_i²)`.
pub fn torsion_from_phi_frame<T: Scalar>(
    tangent: Vector3<T>,
    binormal: Vector3<T>,
    kappa: T,
    dphi_ds: T,
) -> Result<T> {
    let denom = T::one() - tangent.i * tangent.i;
    if denom < T::lit(COS_FLOOR) * T::lit(COS_FLOOR) {
        return Err(Error::ChartSingular {
            chart: ChartId::Phi,
            s: f64::NAN,
            component: tangent.i.abs().as_f64(),
        });
    }
    Ok(dphi_ds + kappa * binormal.i * tangent.i / denom)
}

/// Rotation angle of the osculating plane in this chart, `atan2(B_i, −N_i)`.
pub fn phi_from_frame<T: Scalar>(
    tangent: Vector3<T>,
    normal: Vector3<T>,
    binormal: Vector3<T>,
) -> Result<T> {
    if T::one() - tangent.i * tangent.i < T::lit(COS_FLOOR) * T::lit(COS_FLOOR) {
        return Err(Error::ChartSingular {
            chart: ChartId::Phi,
            s: f64::NAN,
            component: tangent.i.abs().as_f64(),
        });
    }
    Ok(binormal.i.atan2(-normal.i))
}
