//! Sampled curves: arc-length grids, per-sample frames and the switch log.

use crate::error::{ChartId, Error, Result};
use crate::phi_chart::PhiState;
use crate::scalar::Scalar;
use crate::theta_chart::ThetaState;
use crate::vector::{Frame, Vector3};

/// Uniform arc-length grid on `[s0, s_end]` with step `h`; the final interval
/// is shortened to land exactly on `s_end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid<T> {
    pub s0: T,
    pub s_end: T,
    pub h: T,
}

impl<T: Scalar> Grid<T> {
    pub fn new(s0: T, s_end: T, h: T) -> Result<Self> {
        if !(s0.is_finite() && s_end.is_finite() && h.is_finite()) {
            return Err(Error::InvalidGrid("grid values must be finite".into()));
        }
        if h <= T::zero() {
            return Err(Error::InvalidGrid(format!("step h = {h} must be positive")));
        }
        if s_end <= s0 {
            return Err(Error::InvalidGrid(format!(
                "s_end = {s_end} must exceed s0 = {s0}"
            )));
        }
        Ok(Self { s0, s_end, h })
    }

    pub fn points(&self) -> Vec<T> {
        let span = self.s_end - self.s0;
        let full = (span / self.h).floor().to_usize().unwrap_or(0);
        let mut pts: Vec<T> = (0..=full)
            .map(|i| self.s0 + T::from_usize_lossy(i) * self.h)
            .collect();
        let slack = self.h * T::lit(1e-9);
        let last = *pts.last().expect("non-empty");
        if (self.s_end - last).abs() <= slack {
            *pts.last_mut().expect("non-empty") = self.s_end;
        } else if last < self.s_end {
            pts.push(self.s_end);
        }
        pts
    }

    pub fn sample_count(&self) -> usize {
        self.points().len()
    }
}

/// Reduced state of whichever chart is active.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChartState<T> {
    Theta(ThetaState<T>),
    Phi(PhiState<T>),
}

impl<T: Scalar> ChartState<T> {
    pub fn chart(&self) -> ChartId {
        match self {
            ChartState::Theta(_) => ChartId::Theta,
            ChartState::Phi(_) => ChartId::Phi,
        }
    }

    /// `θ` in the θ-chart, `φ` in the φ-chart.
    pub fn angle(&self) -> T {
        match self {
            ChartState::Theta(st) => st.theta,
            ChartState::Phi(st) => st.phi,
        }
    }

    pub fn s(&self) -> T {
        match self {
            ChartState::Theta(st) => st.s,
            ChartState::Phi(st) => st.s,
        }
    }

    pub fn frame(&self) -> Frame<T> {
        match self {
            ChartState::Theta(st) => st.frame(),
            ChartState::Phi(st) => st.frame(),
        }
    }

    pub fn tangent(&self) -> Vector3<T> {
        match self {
            ChartState::Theta(st) => st.tangent(),
            ChartState::Phi(st) => st.tangent(),
        }
    }

    pub fn to_array(&self) -> [T; 3] {
        match self {
            ChartState::Theta(st) => st.to_array(),
            ChartState::Phi(st) => st.to_array(),
        }
    }

    /// Same chart, new values.
    pub fn with_array(&self, s: T, y: [T; 3]) -> Self {
        match self {
            ChartState::Theta(_) => ChartState::Theta(ThetaState::from_array(s, y)),
            ChartState::Phi(_) => ChartState::Phi(PhiState::from_array(s, y)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameSample<T> {
    pub s: T,
    pub position: Vector3<T>,
    pub tangent: Vector3<T>,
    pub normal: Vector3<T>,
    pub binormal: Vector3<T>,
    pub kappa: T,
    pub tau: T,
    /// Reduced state of the chart the sample is expressed in.
    pub state: ChartState<T>,
    /// Derivative of the chart angle at this sample.
    pub angle_rate: T,
    /// Set where `κ = 0` and the osculating plane is undefined.
    pub degenerate_kappa: bool,
}

impl<T: Scalar> FrameSample<T> {
    pub fn frame(&self) -> Frame<T> {
        Frame::new(self.tangent, self.normal, self.binormal)
    }

    pub fn chart(&self) -> ChartId {
        self.state.chart()
    }

    pub fn chart_angle(&self) -> T {
        self.state.angle()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwitchEvent<T> {
    pub s: T,
    pub from: ChartId,
    pub to: ChartId,
    /// Largest change in `T`, `N` or `B` caused by re-expressing the state.
    pub frame_jump: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveTrace<T> {
    pub samples: Vec<FrameSample<T>>,
    pub grid: Grid<T>,
    pub switch_log: Vec<SwitchEvent<T>>,
}

impl<T: Scalar> CurveTrace<T> {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn arc_lengths(&self) -> Vec<T> {
        self.samples.iter().map(|p| p.s).collect()
    }

    pub fn last(&self) -> &FrameSample<T> {
        self.samples.last().expect("trace is never empty")
    }

    /// Position at an arbitrary `s` inside the trace, by cubic Hermite
    /// interpolation using `dR/ds = T` at the bracketing samples.
    pub fn position_at(&self, s: T) -> Result<Vector3<T>> {
        let first = self.samples[0].s;
        let last = self.last().s;
        if s < first || s > last {
            return Err(Error::Domain {
                s: s.as_f64(),
                lo: first.as_f64(),
                hi: last.as_f64(),
            });
        }
        let k = self
            .samples
            .partition_point(|p| p.s <= s)
            .clamp(1, self.samples.len() - 1);
        let (a, b) = (&self.samples[k - 1], &self.samples[k]);
        let h = b.s - a.s;
        let t = (s - a.s) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let two = T::two();
        let three = T::lit(3.0);
        let h00 = two * t3 - three * t2 + T::one();
        let h10 = t3 - two * t2 + t;
        let h01 = -two * t3 + three * t2;
        let h11 = t3 - t2;
        Ok(a.position * h00 + a.tangent * (h10 * h) + b.position * h01 + b.tangent * (h11 * h))
    }
}

/// Second-order derivative estimate at the middle of three possibly
/// unevenly spaced points.
pub(crate) fn derivative_3pt<T: Scalar>(
    s: [T; 3],
    f: [Vector3<T>; 3],
    at: usize,
) -> Vector3<T> {
    let h1 = s[1] - s[0];
    let h2 = s[2] - s[1];
    match at {
        0 => {
            let w0 = -(T::two() * h1 + h2) / (h1 * (h1 + h2));
            let w1 = (h1 + h2) / (h1 * h2);
            let w2 = -h1 / (h2 * (h1 + h2));
            f[0] * w0 + f[1] * w1 + f[2] * w2
        }
        1 => {
            let w0 = -h2 / (h1 * (h1 + h2));
            let w1 = (h2 - h1) / (h1 * h2);
            let w2 = h1 / (h2 * (h1 + h2));
            f[0] * w0 + f[1] * w1 + f[2] * w2
        }
        _ => {
            let w0 = h2 / (h1 * (h1 + h2));
            let w1 = -(h1 + h2) / (h1 * h2);
            let w2 = (h1 + T::two() * h2) / (h2 * (h1 + h2));
            f[0] * w0 + f[1] * w1 + f[2] * w2
        }
    }
}
