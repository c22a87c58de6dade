//! Acceptance criteria A1–A9. Each test writes one `PASS`/`FAIL` line to
//! stderr (uncaptured) and then asserts.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};
use std::io::Write;
use std::time::{Duration, Instant};

use curvesynth::closed_forms::{beta_from_delta, ClosedFormCase};
use curvesynth::oracle::{finite_diff_curvature, frenet_residuals};
use curvesynth::phi_chart::{torsion_from_phi_frame, torsion_from_phi_state};
use curvesynth::quadrature::adaptive_simpson;
use curvesynth::theta_chart::{torsion_from_theta_frame, torsion_from_theta_state};
use curvesynth::{
    compare_traces, frenet_integrate, synthesize_from_kappa_tau, synthesize_from_kappa_theta,
    ChartState, FrenetState, Grid, Profile, Trace, Vector3d,
};

const H: f64 = 1e-3;

fn report(id: &str, title: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let line = format!("{id} {verdict} {title}: {detail}\n");
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "{id} {title}: {detail}");
}

fn grid(s_end: f64) -> Grid<f64> {
    Grid::new(0.0, s_end, H).unwrap()
}

fn max_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0, f64::max)
}

fn max_component_dev(a: Vector3d, b: Vector3d) -> f64 {
    max_of((a - b).to_array().into_iter().map(f64::abs))
}

fn pipeline_for(case: &ClosedFormCase<f64>, s_end: f64) -> Trace {
    synthesize_from_kappa_theta(
        &case.kappa_profile(),
        &case.theta_profile(),
        Vector3d::unit_i(),
        Vector3d::zero(),
        &grid(s_end),
    )
    .unwrap()
}

/// Largest tangent-component and torsion deviations from the closed form.
fn closed_form_devs(case: &ClosedFormCase<f64>, trace: &Trace) -> (f64, f64) {
    let mut dt: f64 = 0.0;
    let mut dtau: f64 = 0.0;
    for p in &trace.samples {
        let c = case.evaluate(p.s).unwrap();
        dt = dt.max(max_component_dev(p.tangent, c.tangent));
        dtau = dtau.max((p.tau - c.tau).abs());
    }
    (dt, dtau)
}

fn a1_window(theta0: f64) -> f64 {
    0.9 * FRAC_PI_2 / theta0.cos()
}

fn a1_traces() -> Vec<(f64, Trace)> {
    [FRAC_PI_6, FRAC_PI_3]
        .into_iter()
        .map(|theta0| {
            let case = ClosedFormCase::ConstantKappaTheta { kappa0: 1.0, theta0 };
            (theta0, pipeline_for(&case, a1_window(theta0)))
        })
        .collect()
}

fn a2_case() -> ClosedFormCase<f64> {
    ClosedFormCase::GaussianKappa {
        kappa0: 1.0,
        theta0: FRAC_PI_6,
    }
}

fn helix_start() -> FrenetState<f64> {
    FrenetState::new(
        0.0,
        Vector3d::new(1.0, 0.0, 0.0),
        Vector3d::new(0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2),
        Vector3d::new(-1.0, 0.0, 0.0),
    )
}

fn circle_start() -> FrenetState<f64> {
    FrenetState::new(0.0, Vector3d::zero(), Vector3d::unit_i(), Vector3d::unit_j())
}

/// `(name, κ, τ, start)` for the oracle comparisons.
fn a3_cases() -> Vec<(&'static str, f64, f64, FrenetState<f64>)> {
    vec![
        ("helix", 0.5, 0.5, helix_start()),
        ("circle", 1.0, 0.0, circle_start()),
    ]
}

fn a3_pair(kappa: f64, tau: f64, start: &FrenetState<f64>) -> (Trace, Trace) {
    let k = Profile::constant(kappa);
    let t = Profile::constant(tau);
    let g = grid(10.0);
    let synth =
        synthesize_from_kappa_tau(&k, &t, start.tangent, start.normal, start.position, &g).unwrap();
    let oracle = frenet_integrate(&k, &t, start, &g).unwrap();
    (synth, oracle)
}

fn a4_window() -> f64 {
    0.9 * FRAC_PI_2 / FRAC_PI_4.cos()
}

fn a4_pair() -> (Trace, Trace) {
    let kappa = Profile::constant(1.0);
    let theta = Profile::constant(FRAC_PI_4);
    let g = grid(a4_window());
    let forward =
        synthesize_from_kappa_theta(&kappa, &theta, Vector3d::unit_i(), Vector3d::zero(), &g).unwrap();
    let table: Vec<(f64, f64)> = forward.samples.iter().map(|p| (p.s, p.tau)).collect();
    let tau = Profile::tabulated(&table).unwrap();
    let first = &forward.samples[0];
    let back =
        synthesize_from_kappa_tau(&kappa, &tau, first.tangent, first.normal, first.position, &g).unwrap();
    (forward, back)
}

fn a5_trace() -> Trace {
    synthesize_from_kappa_theta(
        &Profile::constant(1.0),
        &Profile::constant(0.0),
        Vector3d::unit_i(),
        Vector3d::zero(),
        &grid(4.0 * PI),
    )
    .unwrap()
}

fn a6_traces() -> Vec<(Vector3d, Vector3d, Trace)> {
    let r0 = Vector3d::new(1.0, -2.0, 0.5);
    [Vector3d::unit_i(), Vector3d::new(0.6, 0.0, 0.8)]
        .into_iter()
        .map(|t0| {
            let tr = synthesize_from_kappa_theta(
                &Profile::constant(1.0),
                &Profile::constant(FRAC_PI_2),
                t0,
                r0,
                &grid(4.0 * PI),
            )
            .unwrap();
            (t0, r0, tr)
        })
        .collect()
}

#[test]
fn a1_constant_kappa_theta_reproduction() {
    let mut worst_t: f64 = 0.0;
    let mut worst_tau: f64 = 0.0;
    for (theta0, trace) in a1_traces() {
        let case = ClosedFormCase::ConstantKappaTheta { kappa0: 1.0, theta0 };
        assert!((trace.last().s - a1_window(theta0)).abs() < 1e-12);
        let (dt, dtau) = closed_form_devs(&case, &trace);
        worst_t = worst_t.max(dt);
        worst_tau = worst_tau.max(dtau);
    }
    report(
        "A1",
        "constant κ and θ closed form",
        worst_t <= 1e-8 && worst_tau <= 1e-7,
        format!("max |ΔT_c| = {worst_t:.3e} (≤ 1e-8), max |Δτ| = {worst_tau:.3e} (≤ 1e-7)"),
    );
}

#[test]
fn a2_gaussian_curvature() {
    let case = a2_case();
    let trace = pipeline_for(&case, 4.0);
    let (dt, dtau) = closed_form_devs(&case, &trace);
    report(
        "A2",
        "Gaussian curvature closed form",
        dt <= 1e-8 && dtau <= 1e-7,
        format!("max |ΔT_c| = {dt:.3e} (≤ 1e-8), max |Δτ| = {dtau:.3e} (≤ 1e-7)"),
    );
}

#[test]
fn a3_oracle_equivalence() {
    let started = Instant::now();
    let mut details = Vec::new();
    let mut pass = true;
    for (name, kappa, tau, start) in a3_cases() {
        let (synth, oracle) = a3_pair(kappa, tau, &start);
        let rep = compare_traces(&synth, &oracle).unwrap();
        pass &= rep.max_position_dev <= 1e-6 && rep.max_tangent_dev <= 1e-6;
        details.push(format!(
            "{name} |ΔR| = {:.3e}, |ΔT| = {:.3e}",
            rep.max_position_dev, rep.max_tangent_dev
        ));
    }
    let elapsed = started.elapsed();
    pass &= elapsed < Duration::from_secs(5);
    report(
        "A3",
        "reduced synthesis vs direct integration",
        pass,
        format!("{} (≤ 1e-6); {:.2} s (< 5 s)", details.join("; "), elapsed.as_secs_f64()),
    );
}

#[test]
fn a4_torsion_round_trip() {
    let (forward, back) = a4_pair();
    let rep = compare_traces(&forward, &back).unwrap();
    report(
        "A4",
        "θ → τ → curve round trip",
        rep.max_position_dev <= 1e-6,
        format!("max |ΔR| = {:.3e} (≤ 1e-6) over s ∈ [0, {:.4}]", rep.max_position_dev, a4_window()),
    );
}

#[test]
fn a5_chart_switching() {
    let trace = a5_trace();
    let two_pi = 2.0 * PI;
    let first = trace.switch_log.iter().filter(|e| e.s < two_pi).count();
    let second = trace.switch_log.iter().filter(|e| e.s >= two_pi).count();
    let closure = trace.position_at(two_pi).unwrap().distance(trace.samples[0].position);
    let jump = max_of(trace.switch_log.iter().map(|e| e.frame_jump));
    report(
        "A5",
        "chart switching on the planar circle",
        first == 4 && second == 4 && closure <= 1e-6 && jump <= 1e-10,
        format!(
            "switches per 2π = [{first}, {second}] (= 4), |R(2π) − R(0)| = {closure:.3e} (≤ 1e-6), max frame jump = {jump:.3e} (≤ 1e-10)"
        ),
    );
}

#[test]
fn a6_planarity() {
    let mut worst_tau: f64 = 0.0;
    let mut worst_plane: f64 = 0.0;
    for (_, r0, trace) in a6_traces() {
        let b0 = trace.samples[0].binormal;
        worst_tau = worst_tau.max(max_of(trace.samples.iter().map(|p| p.tau.abs())));
        worst_plane = worst_plane.max(max_of(trace.samples.iter().map(|p| (p.position - r0).dot(b0).abs())));
    }
    report(
        "A6",
        "θ ≡ π/2 gives a plane curve",
        worst_tau <= 1e-10 && worst_plane <= 1e-8,
        format!("max |τ| = {worst_tau:.3e} (≤ 1e-10), max distance from plane = {worst_plane:.3e} (≤ 1e-8)"),
    );
}

#[derive(Default)]
struct InvariantTotals {
    orthonormality: f64,
    curvature: f64,
    r2: f64,
    torsion_forms: f64,
}

fn check_invariants(trace: &Trace, acc: &mut InvariantTotals) {
    for p in &trace.samples {
        acc.orthonormality = acc.orthonormality.max(p.frame().orthonormality_defect());
        let (state_form, frame_form) = match p.state {
            ChartState::Theta(st) => (
                torsion_from_theta_state(&st, p.kappa, p.angle_rate).unwrap(),
                torsion_from_theta_frame(p.tangent, p.binormal, p.kappa, p.angle_rate).unwrap(),
            ),
            ChartState::Phi(st) => (
                torsion_from_phi_state(&st, p.kappa, p.angle_rate).unwrap(),
                torsion_from_phi_frame(p.tangent, p.binormal, p.kappa, p.angle_rate).unwrap(),
            ),
        };
        acc.torsion_forms = acc.torsion_forms.max((state_form - frame_form).abs());
    }
    let n = trace.len();
    let kfd = finite_diff_curvature(trace).unwrap();
    let res = frenet_residuals(trace).unwrap();
    for idx in 1..n - 1 {
        let k = trace.samples[idx].kappa;
        acc.curvature = acc.curvature.max((kfd[idx] - k).abs() / k.max(1.0));
        acc.r2 = acc.r2.max(res[idx].r2);
    }
}

#[test]
fn a7_invariant_suite() {
    let mut traces: Vec<Trace> = Vec::new();
    traces.extend(a1_traces().into_iter().map(|(_, t)| t));
    traces.push(pipeline_for(&a2_case(), 4.0));
    for (_, kappa, tau, start) in a3_cases() {
        let (synth, oracle) = a3_pair(kappa, tau, &start);
        traces.push(synth);
        traces.push(oracle);
    }
    let (forward, back) = a4_pair();
    traces.push(forward);
    traces.push(back);
    traces.push(a5_trace());
    traces.extend(a6_traces().into_iter().map(|(_, _, t)| t));

    let mut acc = InvariantTotals::default();
    for t in &traces {
        check_invariants(t, &mut acc);
    }
    report(
        "A7",
        "frame invariants across all traces",
        acc.orthonormality <= 1e-9 && acc.curvature <= 1e-5 && acc.r2 <= 1e-4 && acc.torsion_forms <= 1e-12,
        format!(
            "{} traces; orthonormality {:.3e} (≤ 1e-9), curvature recovery {:.3e} (≤ 1e-5), r2 {:.3e} (≤ 1e-4), torsion forms {:.3e} (≤ 1e-12)",
            traces.len(),
            acc.orthonormality,
            acc.curvature,
            acc.r2,
            acc.torsion_forms
        ),
    );
}

#[test]
fn a8_beta_identity() {
    let theta0 = FRAC_PI_4;
    let case = ClosedFormCase::ConstantTheta {
        kappa: Profile::constant(1.0),
        theta0,
    };
    let mut worst: f64 = 0.0;
    for n in 0..=140 {
        let delta = n as f64 * 0.01;
        let s = delta / theta0.cos();
        let quad = adaptive_simpson(
            |x: f64| Ok(theta0.sin() / (x * theta0.cos()).cos()),
            0.0,
            s,
            1e-13,
        )
        .unwrap();
        let closed = case.evaluate(s).unwrap().beta;
        worst = worst.max((closed - quad).abs());
        worst = worst.max((beta_from_delta(theta0, delta) - quad).abs());
    }
    report(
        "A8",
        "closed-form β vs quadrature",
        worst <= 1e-10,
        format!("max |Δβ| = {worst:.3e} (≤ 1e-10) for δ ∈ [0, 1.4]"),
    );
}

#[test]
fn a9_constant_kappa_linear_theta() {
    let case = ClosedFormCase::ConstantKappaLinearTheta { kappa0: 1.0 };
    let closed = case.trace(&grid(PI), Vector3d::zero()).unwrap();
    let tj = max_of(closed.samples.iter().map(|p| (p.tangent.j - p.s.sin().sin()).abs()));
    let tau_mid = case.evaluate(FRAC_PI_2).unwrap().tau;
    let tau_dev = (tau_mid - -0.5574077247).abs();
    let pipeline = pipeline_for(&case, PI);
    let mut dt: f64 = 0.0;
    let mut dtau: f64 = 0.0;
    for (p, c) in pipeline.samples.iter().zip(&closed.samples) {
        dt = dt.max(max_component_dev(p.tangent, c.tangent));
        dtau = dtau.max((p.tau - c.tau).abs());
    }
    report(
        "A9",
        "constant κ with θ = κ₀s",
        tj <= 1e-12 && tau_dev <= 1e-9 && dt <= 1e-7 && dtau <= 1e-7,
        format!(
            "max |T_j − sin(sin s)| = {tj:.3e} (≤ 1e-12), τ(π/2) = {tau_mid:.10} (within {tau_dev:.1e} ≤ 1e-9), pipeline |ΔT_c| = {dt:.3e}, |Δτ| = {dtau:.3e} (≤ 1e-7)"
        ),
    );
}
