//! Independent check on the reduced formulation: direct RK4 integration of
//! the classical Frenet–Serret system plus finite-difference validators.
//!
//! Nothing here advances a reduced chart state. Chart angles in oracle traces
//! are read off the integrated frames only so traces can be compared column
//! for column.

use crate::chart_manager::{reexpress, EXIT_THRESHOLD};
use crate::error::{ChartId, Error, Result};
use crate::integrator::rk4_step;
use crate::profiles::ScalarProfile;
use crate::scalar::{wrapped_difference, Scalar};
use crate::trace::{derivative_3pt, ChartState, CurveTrace, FrameSample, Grid};
use crate::vector::{Frame, Vector3};

/// Position and frame at one arc length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetState<T> {
    pub s: T,
    pub position: Vector3<T>,
    pub tangent: Vector3<T>,
    pub normal: Vector3<T>,
    pub binormal: Vector3<T>,
}

impl<T: Scalar> FrenetState<T> {
    /// Builds a state with `B = T × N`.
    pub fn new(s: T, position: Vector3<T>, tangent: Vector3<T>, normal: Vector3<T>) -> Self {
        Self {
            s,
            position,
            tangent,
            normal,
            binormal: tangent.cross(normal),
        }
    }

    pub fn frame(&self) -> Frame<T> {
        Frame::new(self.tangent, self.normal, self.binormal)
    }

    fn to_array(self) -> [T; 12] {
        let mut y = [T::zero(); 12];
        for (n, v) in [self.tangent, self.normal, self.binormal, self.position]
            .into_iter()
            .enumerate()
        {
            y[3 * n..3 * n + 3].copy_from_slice(&v.to_array());
        }
        y
    }

    fn from_array(s: T, y: &[T; 12]) -> Self {
        let v = |n: usize| Vector3::new(y[3 * n], y[3 * n + 1], y[3 * n + 2]);
        Self {
            s,
            tangent: v(0),
            normal: v(1),
            binormal: v(2),
            position: v(3),
        }
    }
}

/// Modified Gram–Schmidt: normalise `T`, orthogonalise and normalise `N`
/// against it, then `B = T × N`.
pub fn reorthonormalize<T: Scalar>(frame: &Frame<T>) -> Frame<T> {
    let t = frame.tangent.normalized().unwrap_or(frame.tangent);
    let n = frame.normal - t * t.dot(frame.normal);
    let n = n.normalized().unwrap_or(n);
    Frame::new(t, n, t.cross(n))
}

/// One RK4 step of the 12-component system. Returns the new state after
/// re-orthonormalisation and the frame defect accumulated by the step.
pub fn frenet_step<T: Scalar>(
    kappa: &ScalarProfile<T>,
    tau: &ScalarProfile<T>,
    state: &FrenetState<T>,
    h: T,
) -> Result<(FrenetState<T>, T)> {
    let y = rk4_step(
        |s, y: &[T; 12]| {
            let k = kappa.eval_curvature(s)?;
            let t = tau.eval(s)?;
            let mut d = [T::zero(); 12];
            for c in 0..3 {
                let (tc, nc, bc) = (y[c], y[3 + c], y[6 + c]);
                d[c] = k * nc;
                d[3 + c] = -k * tc + t * bc;
                d[6 + c] = -t * nc;
                d[9 + c] = tc;
            }
            Ok(d)
        },
        state.s,
        &state.to_array(),
        h,
    )?;
    let raw = FrenetState::from_array(state.s + h, &y);
    let defect = raw.frame().orthonormality_defect();
    let frame = reorthonormalize(&raw.frame());
    Ok((
        FrenetState {
            tangent: frame.tangent,
            normal: frame.normal,
            binormal: frame.binormal,
            ..raw
        },
        defect,
    ))
}

/// Integrates the classical system `T' = κN`, `N' = −κT + τB`, `B' = −τN`,
/// `R' = T` on `grid`, starting from `initial` (whose `s` is replaced by the
/// grid start).
pub fn frenet_integrate<T: Scalar>(
    kappa: &ScalarProfile<T>,
    tau: &ScalarProfile<T>,
    initial: &FrenetState<T>,
    grid: &Grid<T>,
) -> Result<CurveTrace<T>> {
    let defect = initial.frame().orthonormality_defect();
    if defect > T::lit(1e-9) {
        return Err(Error::NotOrthonormal {
            defect: defect.as_f64(),
        });
    }
    for profile in [kappa, tau] {
        if !profile.covers(grid.s0, grid.s_end) {
            let (lo, hi) = profile.domain();
            return Err(Error::Domain {
                s: if grid.s0 < lo { grid.s0 } else { grid.s_end }.as_f64(),
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
    }
    let points = grid.points();
    let mut state = FrenetState {
        s: points[0],
        ..*initial
    };
    let mut samples = Vec::with_capacity(points.len());
    samples.push(oracle_sample(&state, kappa, tau)?);
    for w in points.windows(2) {
        let (next, _) = frenet_step(kappa, tau, &state, w[1] - w[0])?;
        state = FrenetState { s: w[1], ..next };
        if !state.position.is_finite() || !state.tangent.is_finite() {
            return Err(Error::NonFinite { s: w[1].as_f64() });
        }
        samples.push(oracle_sample(&state, kappa, tau)?);
    }
    Ok(CurveTrace {
        samples,
        grid: *grid,
        switch_log: Vec::new(),
    })
}

fn oracle_sample<T: Scalar>(
    state: &FrenetState<T>,
    kappa: &ScalarProfile<T>,
    tau: &ScalarProfile<T>,
) -> Result<FrameSample<T>> {
    let k = kappa.eval_curvature(state.s)?;
    let t = tau.eval(state.s)?;
    let frame = state.frame();
    let chart = if frame.tangent.j.abs() < T::lit(EXIT_THRESHOLD) {
        ChartId::Theta
    } else {
        ChartId::Phi
    };
    let reduced = reexpress(&frame, state.s, chart)?;
    let angle_rate = match reduced {
        ChartState::Theta(st) => t + k * st.delta.tan() * st.theta.sin(),
        ChartState::Phi(st) => t - k * st.gamma.tan() * st.phi.sin(),
    };
    Ok(FrameSample {
        s: state.s,
        position: state.position,
        tangent: frame.tangent,
        normal: frame.normal,
        binormal: frame.binormal,
        kappa: k,
        tau: t,
        state: reduced,
        angle_rate,
        degenerate_kappa: k == T::zero(),
    })
}

fn stencil<T: Scalar>(trace: &CurveTrace<T>, idx: usize) -> ([usize; 3], usize) {
    let n = trace.len();
    if idx == 0 {
        ([0, 1, 2], 0)
    } else if idx == n - 1 {
        ([n - 3, n - 2, n - 1], 2)
    } else {
        ([idx - 1, idx, idx + 1], 1)
    }
}

fn diff_column<T: Scalar>(
    trace: &CurveTrace<T>,
    column: impl Fn(&FrameSample<T>) -> Vector3<T>,
) -> Result<Vec<Vector3<T>>> {
    if trace.len() < 3 {
        return Err(Error::TooShort { len: trace.len() });
    }
    Ok((0..trace.len())
        .map(|idx| {
            let (ix, at) = stencil(trace, idx);
            let p = ix.map(|k| &trace.samples[k]);
            derivative_3pt([p[0].s, p[1].s, p[2].s], p.map(&column), at)
        })
        .collect())
}

/// `|dT/ds|` per sample by second-order differences (centred inside, one-sided
/// three-point at the ends).
pub fn finite_diff_curvature<T: Scalar>(trace: &CurveTrace<T>) -> Result<Vec<T>> {
    Ok(diff_column(trace, |p| p.tangent)?
        .into_iter()
        .map(|d| d.norm())
        .collect())
}

/// Residuals of the three frame equations at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residuals<T> {
    /// `|dT/ds − κN|`
    pub r1: T,
    /// `|dN/ds + κT − τB|`
    pub r2: T,
    /// `|dB/ds + τN|`
    pub r3: T,
}

pub fn frenet_residuals<T: Scalar>(trace: &CurveTrace<T>) -> Result<Vec<Residuals<T>>> {
    let dt = diff_column(trace, |p| p.tangent)?;
    let dn = diff_column(trace, |p| p.normal)?;
    let db = diff_column(trace, |p| p.binormal)?;
    Ok(trace
        .samples
        .iter()
        .enumerate()
        .map(|(idx, p)| Residuals {
            r1: (dt[idx] - p.normal * p.kappa).norm(),
            r2: (dn[idx] + p.tangent * p.kappa - p.binormal * p.tau).norm(),
            r3: (db[idx] + p.normal * p.tau).norm(),
        })
        .collect())
}

/// Deviations between two traces sampled on the same grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport<T> {
    pub samples: usize,
    pub grid: Grid<T>,
    pub position_dev: Vec<T>,
    pub tangent_dev: Vec<T>,
    pub torsion_dev: Vec<T>,
    /// Wrapped angle difference where both samples use the same chart.
    pub chart_angle_dev: Vec<Option<T>>,
    pub max_position_dev: T,
    pub max_tangent_dev: T,
    pub max_torsion_dev: T,
    pub max_chart_angle_dev: Option<T>,
    pub mean_position_dev: T,
    pub mean_tangent_dev: T,
    pub mean_torsion_dev: T,
}

pub fn compare_traces<T: Scalar>(a: &CurveTrace<T>, b: &CurveTrace<T>) -> Result<ComparisonReport<T>> {
    if a.len() != b.len() {
        return Err(Error::GridMismatch(format!(
            "{} samples vs {} samples",
            a.len(),
            b.len()
        )));
    }
    for (p, q) in a.samples.iter().zip(&b.samples) {
        let scale = T::one().max(p.s.abs());
        if (p.s - q.s).abs() > T::lit(1e-9) * scale {
            return Err(Error::GridMismatch(format!(
                "arc length {} vs {}",
                p.s, q.s
            )));
        }
    }
    let pairs = || a.samples.iter().zip(&b.samples);
    let position_dev: Vec<T> = pairs().map(|(p, q)| p.position.distance(q.position)).collect();
    let tangent_dev: Vec<T> = pairs().map(|(p, q)| p.tangent.distance(q.tangent)).collect();
    let torsion_dev: Vec<T> = pairs().map(|(p, q)| (p.tau - q.tau).abs()).collect();
    let chart_angle_dev: Vec<Option<T>> = pairs()
        .map(|(p, q)| {
            (p.chart() == q.chart())
                .then(|| wrapped_difference(p.chart_angle(), q.chart_angle()).abs())
        })
        .collect();
    let max = |v: &[T]| v.iter().copied().fold(T::zero(), T::max);
    let mean = |v: &[T]| v.iter().copied().sum::<T>() / T::from_usize_lossy(v.len());
    let max_chart_angle_dev = chart_angle_dev
        .iter()
        .flatten()
        .copied()
        .reduce(T::max);
    Ok(ComparisonReport {
        samples: a.len(),
        grid: a.grid,
        max_position_dev: max(&position_dev),
        max_tangent_dev: max(&tangent_dev),
        max_torsion_dev: max(&torsion_dev),
        mean_position_dev: mean(&position_dev),
        mean_tangent_dev: mean(&tangent_dev),
        mean_torsion_dev: mean(&torsion_dev),
        max_chart_angle_dev,
        position_dev,
        tangent_dev,
        torsion_dev,
        chart_angle_dev,
    })
}
