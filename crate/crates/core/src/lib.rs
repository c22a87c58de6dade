//! Space curves from curvature and osculating-plane rotation.
//!
//! The tangent is carried in one of two angle charts: the θ-chart, singular
//! where the tangent is `±j`, and the φ-chart, singular at `±i`. The
//! [`chart_manager`] switches between them so a synthesis never stalls at a
//! pole. [`oracle`] integrates the classical Frenet–Serret equations directly
//! and is the yardstick for everything else; [`closed_forms`] holds the
//! explicitly solvable cases.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`.

pub mod chart_manager;
pub mod cli;
pub mod closed_forms;
pub mod error;
pub mod integrator;
pub mod oracle;
pub mod phi_chart;
pub mod profiles;
pub mod quadrature;
pub mod scalar;
pub mod theta_chart;
pub mod trace;
pub mod vector;

pub use chart_manager::{
    switch_chart, synthesize_from_kappa_tau, synthesize_from_kappa_theta, ChartPolicy,
    InitialConditions, Prescription, Synthesizer,
};
pub use error::{ChartId, Error, Result};
pub use oracle::{compare_traces, frenet_integrate, ComparisonReport, FrenetState};
pub use profiles::ScalarProfile;
pub use scalar::Scalar;
pub use trace::{ChartState, CurveTrace, FrameSample, Grid, SwitchEvent};
pub use vector::{Frame, Vector3};

pub type Vector3d = Vector3<f64>;
pub type Vector3f = Vector3<f32>;
pub type Profile = ScalarProfile<f64>;
pub type Trace = CurveTrace<f64>;
pub type Sample = FrameSample<f64>;
pub type GridF64 = Grid<f64>;
