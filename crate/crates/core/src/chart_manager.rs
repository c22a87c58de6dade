//! End-to-end curve synthesis on an arc-length grid.
//!
//! The reduced state is advanced with fixed-step RK4 in whichever chart is
//! active. A chart is left when the tangent component it divides by grows
//! past [`EXIT_THRESHOLD`]; the θ-chart is re-entered from the φ-chart once
//! `|T_j|` falls below [`REENTRY_THRESHOLD`]. Positions are integrated from the
//! sampled tangents afterwards.

use crate::error::{ChartId, Error, Result};
use crate::integrator::rk4_step;
use crate::phi_chart::{init_phi_state_with_limit, phi_from_frame, phi_rhs, PhiState};
use crate::profiles::ScalarProfile;
use crate::scalar::{unwrap_near, Scalar};
use crate::theta_chart::{
    self, init_theta_state_with_limit, theta_from_frame, theta_rhs, AngleDrive, ThetaState,
    COS_FLOOR,
};
use crate::trace::{ChartState, CurveTrace, FrameSample, Grid, SwitchEvent};
use crate::vector::{Frame, Vector3};

pub const EXIT_THRESHOLD: f64 = 0.95;
pub const REENTRY_THRESHOLD: f64 = 0.90;

/// When to change charts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartPolicy<T> {
    /// Leave a chart past `exit`; return to the θ-chart below `reentry`.
    Switching { exit: T, reentry: T },
    /// Stay in one chart for the whole run; fails if it becomes singular.
    Pinned(ChartId),
}

impl<T: Scalar> Default for ChartPolicy<T> {
    fn default() -> Self {
        ChartPolicy::Switching {
            exit: T::lit(EXIT_THRESHOLD),
            reentry: T::lit(REENTRY_THRESHOLD),
        }
    }
}

/// What the caller prescribes alongside curvature.
#[derive(Debug, Clone, Copy)]
pub enum Prescription<'a, T> {
    /// Osculating-plane rotation angle `θ(s)` of the θ-chart.
    Theta(&'a ScalarProfile<T>),
    /// Torsion `τ(s)`.
    Torsion(&'a ScalarProfile<T>),
}

impl<T> Prescription<'_, T> {
    fn profile(&self) -> &ScalarProfile<T> {
        match self {
            Prescription::Theta(p) | Prescription::Torsion(p) => p,
        }
    }
}

/// Starting point of a synthesis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialConditions<T> {
    pub tangent: Vector3<T>,
    /// Required when torsion is prescribed; ignored for a θ prescription.
    pub normal: Option<Vector3<T>>,
    pub position: Vector3<T>,
}

struct Rates<T> {
    d: [T; 3],
    kappa: T,
    tau: T,
}

/// Configured synthesis run.
#[derive(Debug, Clone, Copy)]
pub struct Synthesizer<'a, T> {
    kappa: &'a ScalarProfile<T>,
    prescription: Prescription<'a, T>,
    policy: ChartPolicy<T>,
}

impl<'a, T: Scalar> Synthesizer<'a, T> {
    pub fn new(kappa: &'a ScalarProfile<T>, prescription: Prescription<'a, T>) -> Self {
        Self {
            kappa,
            prescription,
            policy: ChartPolicy::default(),
        }
    }

    pub fn with_policy(mut self, policy: ChartPolicy<T>) -> Self {
        self.policy = policy;
        self
    }

    pub fn run(&self, init: &InitialConditions<T>, grid: &Grid<T>) -> Result<CurveTrace<T>> {
        self.check_coverage(grid)?;
        let points = grid.points();
        let s0 = points[0];
        let mut state = self.initial_state(init, s0)?;
        let mut last_theta = None;
        let mut last_phi = None;
        remember(&state, &mut last_theta, &mut last_phi);

        let mut samples = Vec::with_capacity(points.len());
        let mut switch_log = Vec::new();
        samples.push(self.sample(&state)?);

        for w in points.windows(2) {
            let (sa, sb) = (w[0], w[1]);
            let chart = state.chart();
            let y = rk4_step(
                |s, y: &[T; 3]| self.rates(chart, s, *y).map(|r| r.d),
                sa,
                &state.to_array(),
                sb - sa,
            )?;
            if y.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { s: sb.as_f64() });
            }
            state = state.with_array(sb, y);

            if let Some(target) = self.wants_switch(&state)? {
                let before = state.frame();
                let mut next = reexpress(&before, sb, target)?;
                self.unwrap_angles(&mut next, last_theta.as_ref(), last_phi.as_ref())?;
                switch_log.push(SwitchEvent {
                    s: sb,
                    from: state.chart(),
                    to: target,
                    frame_jump: before.max_deviation(&next.frame()),
                });
                state = next;
            }
            remember(&state, &mut last_theta, &mut last_phi);
            samples.push(self.sample(&state)?);
        }

        let s_values: Vec<T> = samples.iter().map(|p| p.s).collect();
        let tangents: Vec<Vector3<T>> = samples.iter().map(|p| p.tangent).collect();
        let positions = integrate_position(&s_values, &tangents, init.position);
        for (sample, r) in samples.iter_mut().zip(positions) {
            sample.position = r;
        }
        Ok(CurveTrace {
            samples,
            grid: *grid,
            switch_log,
        })
    }

    fn check_coverage(&self, grid: &Grid<T>) -> Result<()> {
        for profile in [self.kappa, self.prescription.profile()] {
            if !profile.covers(grid.s0, grid.s_end) {
                let (lo, hi) = profile.domain();
                let s = if grid.s0 < lo { grid.s0 } else { grid.s_end };
                return Err(Error::Domain {
                    s: s.as_f64(),
                    lo: lo.as_f64(),
                    hi: hi.as_f64(),
                });
            }
        }
        Ok(())
    }

    fn initial_state(&self, init: &InitialConditions<T>, s0: T) -> Result<ChartState<T>> {
        let tangent = init.tangent.ensure_unit(T::lit(1e-9))?;
        let frame = match self.prescription {
            Prescription::Theta(theta) => {
                let theta0 = theta.eval(s0)?;
                init_theta_state_with_limit(tangent, theta0, s0, floor_limit())?.frame()
            }
            Prescription::Torsion(_) => {
                let normal = init
                    .normal
                    .ok_or_else(|| Error::InvalidProfile("torsion mode needs an initial normal".into()))?;
                let frame = Frame::from_tangent_normal(tangent, normal);
                let defect = frame.orthonormality_defect();
                if defect > T::lit(1e-9) {
                    return Err(Error::NotOrthonormal {
                        defect: defect.as_f64(),
                    });
                }
                frame
            }
        };
        let chart = match self.policy {
            ChartPolicy::Pinned(chart) => chart,
            ChartPolicy::Switching { exit, .. } => {
                if tangent.j.abs() >= exit {
                    if tangent.i.abs() >= exit {
                        return Err(Error::BothChartsSingular { s: s0.as_f64() });
                    }
                    ChartId::Phi
                } else {
                    ChartId::Theta
                }
            }
        };
        let mut state = reexpress(&frame, s0, chart)?;
        if let (ChartState::Theta(st), Prescription::Theta(theta)) = (&mut state, self.prescription) {
            st.theta = unwrap_near(st.theta, theta.eval(s0)?);
        }
        Ok(state)
    }

    fn wants_switch(&self, state: &ChartState<T>) -> Result<Option<ChartId>> {
        let ChartPolicy::Switching { exit, reentry } = self.policy else {
            return Ok(None);
        };
        let t = state.tangent();
        let target = match state.chart() {
            ChartId::Theta if t.j.abs() > exit => Some(ChartId::Phi),
            ChartId::Phi if t.i.abs() > exit || t.j.abs() < reentry => Some(ChartId::Theta),
            _ => None,
        };
        if let Some(target) = target {
            let blocking = match target {
                ChartId::Theta => t.j.abs(),
                ChartId::Phi => t.i.abs(),
            };
            if blocking > exit {
                return Err(Error::BothChartsSingular {
                    s: state.s().as_f64(),
                });
            }
        }
        Ok(target)
    }

    /// Chooses the 2π branch of the freshly computed angles closest to the
    /// prescription (θ mode) or to the chart's previous values.
    fn unwrap_angles(
        &self,
        state: &mut ChartState<T>,
        last_theta: Option<&ThetaState<T>>,
        last_phi: Option<&PhiState<T>>,
    ) -> Result<()> {
        match state {
            ChartState::Theta(st) => {
                if let Some(prev) = last_theta {
                    st.beta = unwrap_near(st.beta, prev.beta);
                    st.theta = unwrap_near(st.theta, prev.theta);
                }
                if let Prescription::Theta(theta) = self.prescription {
                    st.theta = unwrap_near(st.theta, theta.eval(st.s)?);
                }
            }
            ChartState::Phi(st) => {
                if let Some(prev) = last_phi {
                    st.alpha = unwrap_near(st.alpha, prev.alpha);
                    st.phi = unwrap_near(st.phi, prev.phi);
                }
            }
        }
        Ok(())
    }

    fn rates(&self, chart: ChartId, s: T, y: [T; 3]) -> Result<Rates<T>> {
        let kappa = self.kappa.eval_curvature(s)?;
        match chart {
            ChartId::Theta => {
                let state = ThetaState::from_array(s, y);
                match self.prescription {
                    Prescription::Theta(theta) => {
                        let rate = theta.derivative(s)?;
                        let d = theta_rhs(&state, kappa, AngleDrive::Rate(rate))?;
                        let tau = theta_chart::torsion_from_theta_state(&state, kappa, rate)?;
                        Ok(Rates { d, kappa, tau })
                    }
                    Prescription::Torsion(tau) => {
                        let tau = tau.eval(s)?;
                        let d = theta_rhs(&state, kappa, AngleDrive::Torsion(tau))?;
                        Ok(Rates { d, kappa, tau })
                    }
                }
            }
            ChartId::Phi => {
                let state = PhiState::from_array(s, y);
                let tau = match self.prescription {
                    Prescription::Torsion(tau) => tau.eval(s)?,
                    Prescription::Theta(theta) => {
                        let (theta_s, rate) = theta.eval_with_derivative(s)?;
                        torsion_from_theta_prescription(&state, kappa, theta_s, rate)?
                    }
                };
                let d = phi_rhs(&state, kappa, AngleDrive::Torsion(tau))?;
                Ok(Rates { d, kappa, tau })
            }
        }
    }

    fn sample(&self, state: &ChartState<T>) -> Result<FrameSample<T>> {
        let s = state.s();
        let r = self.rates(state.chart(), s, state.to_array())?;
        let frame = state.frame();
        Ok(FrameSample {
            s,
            position: Vector3::zero(),
            tangent: frame.tangent,
            normal: frame.normal,
            binormal: frame.binormal,
            kappa: r.kappa,
            tau: r.tau,
            state: *state,
            angle_rate: r.d[2],
            degenerate_kappa: r.kappa == T::zero(),
        })
    }
}

fn remember<T: Scalar>(
    state: &ChartState<T>,
    last_theta: &mut Option<ThetaState<T>>,
    last_phi: &mut Option<PhiState<T>>,
) {
    match state {
        ChartState::Theta(st) => *last_theta = Some(*st),
        ChartState::Phi(st) => *last_phi = Some(*st),
    }
}

/// `|component| < sqrt(1 − floor²)`, i.e. the chart's `cos` stays above the floor.
fn floor_limit<T: Scalar>() -> T {
    let f = T::lit(COS_FLOOR);
    (T::one() - f * f).sqrt()
}

/// Torsion implied by a θ-chart angle prescription while the φ-chart is
/// active: `τ = θ' − κ tan δ sin θ` with `sin δ = T_j` read from the state.
fn torsion_from_theta_prescription<T: Scalar>(
    state: &PhiState<T>,
    kappa: T,
    theta: T,
    rate: T,
) -> Result<T> {
    let sin_theta = theta.sin();
    if kappa == T::zero() || sin_theta == T::zero() {
        return Ok(rate);
    }
    let tj = state.gamma.cos() * state.alpha.cos();
    let c2 = T::one() - tj * tj;
    let floor = T::lit(COS_FLOOR);
    if c2 < floor * floor {
        return Err(Error::ChartSingular {
            chart: ChartId::Theta,
            s: state.s.as_f64(),
            component: tj.abs().as_f64(),
        });
    }
    Ok(rate - kappa * sin_theta * tj / c2.sqrt())
}

/// Expresses a frame in the target chart; the angle is read from the frame.
pub(crate) fn reexpress<T: Scalar>(frame: &Frame<T>, s: T, target: ChartId) -> Result<ChartState<T>> {
    let tangent = frame.tangent.normalized().ok_or(Error::NotUnit { norm: 0.0 })?;
    match target {
        ChartId::Theta => {
            let theta = theta_from_frame(tangent, frame.normal, frame.binormal)?;
            init_theta_state_with_limit(tangent, theta, s, floor_limit()).map(ChartState::Theta)
        }
        ChartId::Phi => {
            let phi = phi_from_frame(tangent, frame.normal, frame.binormal)?;
            init_phi_state_with_limit(tangent, phi, s, floor_limit()).map(ChartState::Phi)
        }
    }
}

/// Re-expresses a sample's frame in `target`'s reduced variables. Angles are
/// principal values computed from the frame.
pub fn switch_chart<T: Scalar>(sample: &FrameSample<T>, target: ChartId) -> Result<ChartState<T>> {
    reexpress(&sample.frame(), sample.s, target)
}

/// Synthesises a curve from curvature and the θ-chart rotation angle.
pub fn synthesize_from_kappa_theta<T: Scalar>(
    kappa: &ScalarProfile<T>,
    theta: &ScalarProfile<T>,
    t0: Vector3<T>,
    r0: Vector3<T>,
    grid: &Grid<T>,
) -> Result<CurveTrace<T>> {
    Synthesizer::new(kappa, Prescription::Theta(theta)).run(
        &InitialConditions {
            tangent: t0,
            normal: None,
            position: r0,
        },
        grid,
    )
}

/// Synthesises a curve from curvature and torsion; the chart angle follows
/// from the torsion relation of the active chart.
pub fn synthesize_from_kappa_tau<T: Scalar>(
    kappa: &ScalarProfile<T>,
    tau: &ScalarProfile<T>,
    t0: Vector3<T>,
    n0: Vector3<T>,
    r0: Vector3<T>,
    grid: &Grid<T>,
) -> Result<CurveTrace<T>> {
    Synthesizer::new(kappa, Prescription::Torsion(tau)).run(
        &InitialConditions {
            tangent: t0,
            normal: Some(n0),
            position: r0,
        },
        grid,
    )
}

/// Integrates `dR/ds = T` over sampled tangents.
///
/// Each interval is integrated with the quadratic through three neighbouring
/// samples, pairing intervals so that positions at even indices equal the
/// composite Simpson sums. Uneven spacing (a short final interval) is
/// handled exactly by the quadratic weights.
pub fn integrate_position<T: Scalar>(
    s: &[T],
    tangents: &[Vector3<T>],
    r0: Vector3<T>,
) -> Vec<Vector3<T>> {
    assert_eq!(s.len(), tangents.len(), "one tangent per arc-length sample");
    let n = s.len();
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(r0);
    if n == 2 {
        let h = s[1] - s[0];
        out.push(r0 + (tangents[0] + tangents[1]) * (h * T::half()));
        return out;
    }
    for i in 1..n {
        // interval [s[i-1], s[i]]; choose the triple it belongs to
        let base = if (i - 1) % 2 == 0 {
            if i + 1 < n {
                i - 1
            } else {
                i - 2
            }
        } else {
            i - 2
        };
        let xs = [s[base], s[base + 1], s[base + 2]];
        let w = quadratic_weights(xs, s[i - 1], s[i]);
        let inc = tangents[base] * w[0] + tangents[base + 1] * w[1] + tangents[base + 2] * w[2];
        let prev = out[i - 1];
        out.push(prev + inc);
    }
    out
}

/// Weights `w` with `∫_a^b p(x) dx = Σ w_k f_k` for the quadratic `p`
/// interpolating `f` at `xs`.
fn quadratic_weights<T: Scalar>(xs: [T; 3], a: T, b: T) -> [T; 3] {
    let origin = xs[0];
    let x = [T::zero(), xs[1] - origin, xs[2] - origin];
    let (a, b) = (a - origin, b - origin);
    // ∫ (t − p)(t − q) dt
    let prim = |t: T, p: T, q: T| {
        t * t * t / T::lit(3.0) - (p + q) * t * t * T::half() + p * q * t
    };
    let int = |p: T, q: T| prim(b, p, q) - prim(a, p, q);
    [
        int(x[1], x[2]) / ((x[0] - x[1]) * (x[0] - x[2])),
        int(x[0], x[2]) / ((x[1] - x[0]) * (x[1] - x[2])),
        int(x[0], x[1]) / ((x[2] - x[0]) * (x[2] - x[1])),
    ]
}
