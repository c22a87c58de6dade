//! Explicit solutions of the reduced equations for a tangent starting at
//! `(1, 0, 0)` with `δ(0) = β(0) = 0`.
//!
//! With `θ ≡ θ₀` the tangent latitude is `δ = cos θ₀ ∫κ` and the azimuth
//! `β = 2 tan θ₀ artanh(tan(δ/2))`. These stop making sense once `|δ|`
//! reaches `π/2`; evaluations there fail with [`Error::OutOfValidity`].

use crate::chart_manager::integrate_position;
use crate::error::{Error, Result};
use crate::profiles::ScalarProfile;
use crate::quadrature::{adaptive_simpson, erf};
use crate::scalar::Scalar;
use crate::theta_chart::ThetaState;
use crate::trace::{ChartState, CurveTrace, FrameSample, Grid};
use crate::vector::Vector3;

/// Absolute tolerance of the numerically evaluated integrals.
pub const QUADRATURE_TOL: f64 = 1e-11;

/// One family of explicit solutions with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormCase<T> {
    /// Arbitrary curvature, constant rotation angle.
    ConstantTheta { kappa: ScalarProfile<T>, theta0: T },
    /// `κ = κ₀ e^{−s²}`, constant rotation angle.
    GaussianKappa { kappa0: T, theta0: T },
    /// `κ ≡ κ₀`, `θ = κ₀ s`.
    ConstantKappaLinearTheta { kappa0: T },
    /// `κ ≡ κ₀`, `θ ≡ θ₀`.
    ConstantKappaTheta { kappa0: T, theta0: T },
}

/// Closed-form state at one arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormPoint<T> {
    pub s: T,
    pub delta: T,
    pub beta: T,
    pub theta: T,
    pub tangent: Vector3<T>,
    pub tau: T,
}

impl<T: Scalar> ClosedFormPoint<T> {
    pub fn state(&self) -> ThetaState<T> {
        ThetaState::new(self.s, self.delta, self.beta, self.theta)
    }
}

impl<T: Scalar> ClosedFormCase<T> {
    pub fn name(&self) -> &'static str {
        match self {
            ClosedFormCase::ConstantTheta { .. } => "constant_theta",
            ClosedFormCase::GaussianKappa { .. } => "gaussian_kappa",
            ClosedFormCase::ConstantKappaLinearTheta { .. } => "constant_kappa_linear_theta",
            ClosedFormCase::ConstantKappaTheta { .. } => "constant_kappa_theta",
        }
    }

    /// Curvature profile the case assumes.
    pub fn kappa_profile(&self) -> ScalarProfile<T> {
        match self {
            ClosedFormCase::ConstantTheta { kappa, .. } => kappa.clone(),
            ClosedFormCase::GaussianKappa { kappa0, .. } => ScalarProfile::gaussian(*kappa0),
            ClosedFormCase::ConstantKappaLinearTheta { kappa0 }
            | ClosedFormCase::ConstantKappaTheta { kappa0, .. } => ScalarProfile::constant(*kappa0),
        }
    }

    /// Rotation-angle profile the case assumes.
    pub fn theta_profile(&self) -> ScalarProfile<T> {
        match self {
            ClosedFormCase::ConstantTheta { theta0, .. }
            | ClosedFormCase::GaussianKappa { theta0, .. }
            | ClosedFormCase::ConstantKappaTheta { theta0, .. } => ScalarProfile::constant(*theta0),
            ClosedFormCase::ConstantKappaLinearTheta { kappa0 } => {
                ScalarProfile::linear(*kappa0, T::zero())
            }
        }
    }

    pub fn evaluate(&self, s: T) -> Result<ClosedFormPoint<T>> {
        match self {
            ClosedFormCase::ConstantTheta { kappa, theta0 } => {
                let integral = adaptive_simpson(|x| kappa.eval_curvature(x), T::zero(), s, T::lit(QUADRATURE_TOL))?;
                let rate = kappa.eval_curvature(s)?;
                constant_theta_point(s, *theta0, integral, rate)
            }
            ClosedFormCase::GaussianKappa { kappa0, theta0 } => gaussian_point(*kappa0, *theta0, s),
            ClosedFormCase::ConstantKappaLinearTheta { kappa0 } => {
                let beta = linear_theta_beta(*kappa0, T::zero(), s)?;
                linear_theta_point(*kappa0, s, beta)
            }
            ClosedFormCase::ConstantKappaTheta { kappa0, theta0 } => {
                constant_theta_point(s, *theta0, *kappa0 * s, *kappa0)
            }
        }
    }

    /// Samples the case on `grid` and integrates positions from `r0`.
    pub fn trace(&self, grid: &Grid<T>, r0: Vector3<T>) -> Result<CurveTrace<T>> {
        let points = grid.points();
        let kappa = self.kappa_profile();
        let theta = self.theta_profile();
        let mut evaluated = Vec::with_capacity(points.len());
        match self {
            // accumulate β interval by interval
            ClosedFormCase::ConstantKappaLinearTheta { kappa0 } => {
                let mut beta = linear_theta_beta(*kappa0, T::zero(), points[0])?;
                for (n, &s) in points.iter().enumerate() {
                    if n > 0 {
                        beta = beta + linear_theta_beta(*kappa0, points[n - 1], s)?;
                    }
                    evaluated.push(linear_theta_point(*kappa0, s, beta)?);
                }
            }
            _ => {
                for &s in &points {
                    evaluated.push(self.evaluate(s)?);
                }
            }
        }
        let tangents: Vec<_> = evaluated.iter().map(|p| p.tangent).collect();
        let positions = integrate_position(&points, &tangents, r0);
        let samples = evaluated
            .iter()
            .zip(positions)
            .map(|(p, position)| {
                let state = p.state();
                let frame = state.frame();
                let k = kappa.eval_curvature(p.s)?;
                Ok(FrameSample {
                    s: p.s,
                    position,
                    tangent: frame.tangent,
                    normal: frame.normal,
                    binormal: frame.binormal,
                    kappa: k,
                    tau: p.tau,
                    state: ChartState::Theta(state),
                    angle_rate: theta.derivative(p.s)?,
                    degenerate_kappa: k == T::zero(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CurveTrace {
            samples,
            grid: *grid,
            switch_log: Vec::new(),
        })
    }
}

fn tangent_of<T: Scalar>(delta: T, beta: T) -> Vector3<T> {
    let cd = delta.cos();
    Vector3::new(cd * beta.cos(), delta.sin(), cd * beta.sin())
}

fn check_window<T: Scalar>(s: T, delta: T) -> Result<()> {
    if !delta.is_finite() || delta.abs() >= T::FRAC_PI_2() {
        return Err(Error::OutOfValidity {
            s: s.as_f64(),
            reason: format!("|delta| = {} is not below pi/2", delta.abs()),
        });
    }
    Ok(())
}

/// `β` as a function of `δ` for constant `θ₀`: `2 tan θ₀ artanh(tan(δ/2))`.
pub fn beta_from_delta<T: Scalar>(theta0: T, delta: T) -> T {
    T::two() * theta0.tan() * (delta * T::half()).tan().atanh()
}

fn near_right_angle<T: Scalar>(theta0: T) -> bool {
    theta0.cos().abs() <= T::lit(4.0) * T::epsilon()
}

/// Constant-θ point from `∫κ` and `κ(s)`.
fn constant_theta_point<T: Scalar>(s: T, theta0: T, kappa_integral: T, kappa: T) -> Result<ClosedFormPoint<T>> {
    if near_right_angle(theta0) {
        // cos θ₀ = 0 leaves δ ≡ 0 and turns β into the plain curvature integral.
        let beta = theta0.sin() * kappa_integral;
        return Ok(ClosedFormPoint {
            s,
            delta: T::zero(),
            beta,
            theta: theta0,
            tangent: tangent_of(T::zero(), beta),
            tau: T::zero(),
        });
    }
    let delta = theta0.cos() * kappa_integral;
    check_window(s, delta)?;
    let beta = beta_from_delta(theta0, delta);
    let tau = -kappa * theta0.sin() * delta.tan();
    Ok(ClosedFormPoint {
        s,
        delta,
        beta,
        theta: theta0,
        tangent: tangent_of(delta, beta),
        tau,
    })
}

fn gaussian_point<T: Scalar>(kappa0: T, theta0: T, s: T) -> Result<ClosedFormPoint<T>> {
    let integral = kappa0 * T::PI().sqrt() * T::half() * erf(s);
    let kappa = kappa0 * (-s * s).exp();
    constant_theta_point(s, theta0, integral, kappa)
}

fn linear_theta_beta<T: Scalar>(kappa0: T, a: T, b: T) -> Result<T> {
    adaptive_simpson(
        |x: T| {
            let u = (kappa0 * x).sin();
            Ok(kappa0 * u / u.cos())
        },
        a,
        b,
        T::lit(QUADRATURE_TOL),
    )
}

fn linear_theta_point<T: Scalar>(kappa0: T, s: T, beta: T) -> Result<ClosedFormPoint<T>> {
    let theta = kappa0 * s;
    let delta = theta.sin();
    let tau = kappa0 - kappa0 * delta.tan() * delta;
    Ok(ClosedFormPoint {
        s,
        delta,
        beta,
        theta,
        tangent: tangent_of(delta, beta),
        tau,
    })
}

/// Tangent at `s` for curvature `kappa` and constant rotation angle `theta0`.
pub fn constant_theta_tangent<T: Scalar>(kappa: &ScalarProfile<T>, theta0: T, s: T) -> Result<Vector3<T>> {
    ClosedFormCase::ConstantTheta {
        kappa: kappa.clone(),
        theta0,
    }
    .evaluate(s)
    .map(|p| p.tangent)
}

/// Tangent and torsion at `s` for `κ = κ₀ e^{−s²}` and constant `θ₀`.
pub fn gaussian_case<T: Scalar>(kappa0: T, theta0: T, s: T) -> Result<(Vector3<T>, T)> {
    gaussian_point(kappa0, theta0, s).map(|p| (p.tangent, p.tau))
}

/// Tangent and torsion at `s` for constant `κ₀` and `θ = κ₀ s`.
pub fn constant_kappa_linear_theta<T: Scalar>(kappa0: T, s: T) -> Result<(Vector3<T>, T)> {
    ClosedFormCase::ConstantKappaLinearTheta { kappa0 }
        .evaluate(s)
        .map(|p| (p.tangent, p.tau))
}

/// Tangent and torsion at `s` for constant `κ₀` and `θ₀`.
pub fn constant_kappa_theta<T: Scalar>(kappa0: T, theta0: T, s: T) -> Result<(Vector3<T>, T)> {
    constant_theta_point(s, theta0, kappa0 * s, kappa0).map(|p| (p.tangent, p.tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart_manager::synthesize_from_kappa_theta;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

    fn close(a: Vector3<f64>, b: [f64; 3], tol: f64) -> bool {
        (a - Vector3::from_array(b)).norm() <= tol
    }

    #[test]
    fn constant_theta_examples() {
        let k = ScalarProfile::constant(1.0);
        // θ₀ = 0: β ≡ 0
        let t = constant_theta_tangent(&k, 0.0, FRAC_PI_6).unwrap();
        assert!(close(t, [FRAC_PI_6.cos(), 0.5, 0.0], 1e-12));
        assert_eq!(constant_theta_tangent(&k, 0.3, 0.0).unwrap(), Vector3::unit_i());

        let p = ClosedFormCase::ConstantTheta { kappa: k.clone(), theta0: FRAC_PI_4 }
            .evaluate(FRAC_PI_4)
            .unwrap();
        assert!((p.delta - 0.5553603672697958).abs() < 1e-14);
        assert!((p.beta - 0.5863280180443619).abs() < 1e-13);
        assert!(close(p.tangent, [0.7077901633254721, 0.5272495422822986, 0.4701499812430158], 1e-13));
    }

    #[test]
    fn linear_kappa_integral_is_exact() {
        let k = ScalarProfile::linear(0.5, 0.2);
        let s = 1.3;
        let t = constant_theta_tangent(&k, 0.4, s).unwrap();
        let delta = 0.4f64.cos() * (0.25 * s * s + 0.2 * s);
        assert!((t.j - delta.sin()).abs() < 1e-14);
    }

    #[test]
    fn outside_window_is_reported() {
        let k = ScalarProfile::constant(1.0);
        let r = constant_theta_tangent(&k, 0.0, 2.0);
        assert!(matches!(r, Err(Error::OutOfValidity { .. })));
        assert!(matches!(constant_kappa_theta(1.0, FRAC_PI_3, 3.2), Err(Error::OutOfValidity { .. })));
        // κ₀ √π/2 · cos θ₀ with κ₀ = 2 reaches √π > π/2 for large s
        assert!(matches!(gaussian_case(2.0, 0.0, 3.0), Err(Error::OutOfValidity { .. })));
    }

    #[test]
    fn gaussian_examples() {
        let (t, tau) = gaussian_case(1.0, 0.7, 0.0).unwrap();
        assert_eq!(t, Vector3::unit_i());
        assert_eq!(tau, 0.0);
        let k0 = 2.0 / PI.sqrt();
        let (t, tau) = gaussian_case(k0, 0.0, 6.0).unwrap();
        assert!((t.j - 0.8414709848078965).abs() < 1e-12);
        assert_eq!(tau, 0.0);
        for s in [0.5f64, 1.0, 2.5, 4.0] {
            let (t, _) = gaussian_case(1.0, 0.0, s).unwrap();
            assert!(t.k.abs() < 1e-12);
        }
    }

    #[test]
    fn linear_theta_examples() {
        let (t, tau) = constant_kappa_linear_theta(1.0, 0.0).unwrap();
        assert_eq!(t, Vector3::unit_i());
        assert_eq!(tau, 1.0);
        let (t, _) = constant_kappa_linear_theta(1.0, PI).unwrap();
        assert!(t.j.abs() < 1e-15);
        let (_, tau) = constant_kappa_linear_theta(1.0, FRAC_PI_2).unwrap();
        assert!((tau - -0.5574077246549023).abs() < 1e-12);
    }

    #[test]
    fn constant_kappa_theta_examples() {
        for s in [0.3, 1.0, 1.5] {
            let (t, tau) = constant_kappa_theta(1.0, 0.0, s).unwrap();
            assert!(close(t, [s.cos(), s.sin(), 0.0], 1e-15));
            assert_eq!(tau, 0.0);
        }
        for s in [0.0, 1.0, 10.0, 100.0] {
            let (t, tau) = constant_kappa_theta(1.7, FRAC_PI_2, s).unwrap();
            assert_eq!(tau, 0.0);
            assert!(t.j.abs() < 1e-15);
            assert!((t.norm() - 1.0).abs() < 1e-15);
        }
        let (_, tau) = constant_kappa_theta(1.0, FRAC_PI_3, FRAC_PI_2).unwrap();
        assert!((tau - -0.8660254037844385).abs() < 1e-12);
    }

    #[test]
    fn gudermannian_identity() {
        let theta0 = FRAC_PI_4;
        for delta in [0.1, 0.7, 1.2, 1.4] {
            let s = delta / theta0.cos();
            let quad = adaptive_simpson(
                |x: f64| Ok(theta0.sin() / (x * theta0.cos()).cos()),
                0.0,
                s,
                1e-13,
            )
            .unwrap();
            assert!((beta_from_delta(theta0, delta) - quad).abs() < 1e-10);
        }
    }

    #[test]
    fn trace_matches_pointwise_evaluation() {
        let case = ClosedFormCase::ConstantKappaLinearTheta { kappa0: 1.0 };
        let tr = case.trace(&Grid::new(0.0, PI, 1e-2).unwrap(), Vector3::zero()).unwrap();
        let direct = case.evaluate(PI).unwrap();
        assert!((tr.last().tangent - direct.tangent).norm() < 1e-10);
        assert!(tr.samples.iter().all(|p| p.frame().orthonormality_defect() < 1e-14));
    }

    #[test]
    fn pipeline_agreement_constant_kappa_theta() {
        let case = ClosedFormCase::ConstantKappaTheta { kappa0: 1.0, theta0: FRAC_PI_3 };
        let grid = Grid::new(0.0, 2.0, 1e-3).unwrap();
        let tr = synthesize_from_kappa_theta(
            &case.kappa_profile(),
            &case.theta_profile(),
            Vector3::unit_i(),
            Vector3::zero(),
            &grid,
        )
        .unwrap();
        for p in &tr.samples {
            let c = case.evaluate(p.s).unwrap();
            assert!((p.tangent - c.tangent).norm() < 1e-9);
            assert!((p.tau - c.tau).abs() < 1e-7);
        }
    }

    #[test]
    fn f32_evaluation() {
        let (t, tau) = constant_kappa_theta(1.0f32, std::f32::consts::FRAC_PI_3, 1.0).unwrap();
        assert!((t.norm() - 1.0).abs() < 1e-6);
        assert!(tau < 0.0);
    }

    proptest! {
        #[test]
        fn unit_tangent(kappa0 in 0.1f64..2.0, theta0 in -1.5f64..1.5, frac in 0.0f64..0.95) {
            let s = frac * FRAC_PI_2 / (kappa0 * theta0.cos());
            let (t, _) = constant_kappa_theta(kappa0, theta0, s).unwrap();
            prop_assert!((t.norm() - 1.0).abs() < 1e-12);
            let (t, _) = gaussian_case(kappa0, theta0, s.min(5.0)).unwrap();
            prop_assert!((t.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn torsion_sign(kappa0 in 0.1f64..2.0, theta0 in -1.5f64..1.5, frac in 0.01f64..0.99) {
            let s = frac * FRAC_PI_2 / (kappa0 * theta0.cos());
            let (_, tau) = constant_kappa_theta(kappa0, theta0, s).unwrap();
            prop_assert!(tau * theta0.sin() <= 0.0);
        }

        #[test]
        fn linear_theta_tangent_latitude(kappa0 in 0.2f64..2.0, s in 0.0f64..3.0) {
            let (t, _) = constant_kappa_linear_theta(kappa0, s).unwrap();
            prop_assert!((t.j - (kappa0 * s).sin().sin()).abs() < 1e-12);
        }
    }
}
