//! Run configuration, trace CSV and comparison report formats used by the
//! `curvesynth` binary.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chart_manager::{reexpress, InitialConditions, Prescription, Synthesizer};
use crate::closed_forms::ClosedFormCase;
use crate::error::{ChartId, Error, Result};
use crate::oracle::{compare_traces, frenet_integrate, ComparisonReport, FrenetState};
use crate::profiles::ScalarProfile;
use crate::trace::{ChartState, CurveTrace, FrameSample, Grid};
use crate::vector::{Frame, Vector3};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

pub const CSV_COLUMNS: [&str; 18] = [
    "s", "Rx", "Ry", "Rz", "Tx", "Ty", "Tz", "Nx", "Ny", "Nz", "Bx", "By", "Bz", "kappa", "tau",
    "chart_angle", "chart", "degenerate_kappa",
];

const UNIT_TOL: f64 = 1e-9;

pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical() {
        EXIT_NUMERICAL
    } else {
        EXIT_CONFIG
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    KappaTheta,
    KappaTau,
    Oracle,
    ClosedForm,
    Compare,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::KappaTheta => "kappa-theta",
            Mode::KappaTau => "kappa-tau",
            Mode::Oracle => "oracle",
            Mode::ClosedForm => "closed-form",
            Mode::Compare => "compare",
        }
    }
}

/// Profile as written in a config file, e.g. `{"kind": "constant", "value": 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ProfileSpec {
    Constant {
        value: f64,
        #[serde(default)]
        domain: Option<[f64; 2]>,
    },
    Linear {
        slope: f64,
        intercept: f64,
        #[serde(default)]
        domain: Option<[f64; 2]>,
    },
    Gaussian {
        kappa0: f64,
        #[serde(default)]
        domain: Option<[f64; 2]>,
    },
    /// `[[s, value], ...]`; the domain is the knot span.
    Tabulated { samples: Vec<[f64; 2]> },
}

impl ProfileSpec {
    pub fn build(&self) -> Result<ScalarProfile<f64>> {
        let (profile, domain) = match self {
            ProfileSpec::Constant { value, domain } => (ScalarProfile::constant(*value), domain),
            ProfileSpec::Linear { slope, intercept, domain } => {
                (ScalarProfile::linear(*slope, *intercept), domain)
            }
            ProfileSpec::Gaussian { kappa0, domain } => (ScalarProfile::gaussian(*kappa0), domain),
            ProfileSpec::Tabulated { samples } => {
                let knots: Vec<(f64, f64)> = samples.iter().map(|p| (p[0], p[1])).collect();
                return ScalarProfile::tabulated(&knots);
            }
        };
        let params_finite = match self {
            ProfileSpec::Constant { value, .. } => value.is_finite(),
            ProfileSpec::Linear { slope, intercept, .. } => slope.is_finite() && intercept.is_finite(),
            ProfileSpec::Gaussian { kappa0, .. } => kappa0.is_finite(),
            ProfileSpec::Tabulated { .. } => true,
        };
        if !params_finite {
            return Err(Error::InvalidProfile("parameters must be finite".into()));
        }
        match domain {
            Some([lo, hi]) => profile.with_domain(*lo, *hi),
            None => Ok(profile),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub s0: f64,
    pub s_end: f64,
    pub h: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    #[serde(default)]
    pub tangent: Option<[f64; 3]>,
    #[serde(default)]
    pub normal: Option<[f64; 3]>,
    #[serde(default)]
    pub position: Option<[f64; 3]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClosedFormSpec {
    /// Curvature comes from the config's `kappa` profile.
    ConstantTheta { theta0: f64 },
    GaussianKappa { kappa0: f64, theta0: f64 },
    ConstantKappaLinearTheta { kappa0: f64 },
    ConstantKappaTheta { kappa0: f64, theta0: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    #[serde(default)]
    pub kappa: Option<ProfileSpec>,
    #[serde(default)]
    pub theta: Option<ProfileSpec>,
    #[serde(default)]
    pub tau: Option<ProfileSpec>,
    #[serde(default)]
    pub initial: Option<InitialSpec>,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub closed_form: Option<ClosedFormSpec>,
    /// Trace files for `compare` mode.
    #[serde(default)]
    pub a: Option<String>,
    #[serde(default)]
    pub b: Option<String>,
    /// Output path; standard output when absent. `--out` takes precedence.
    #[serde(default)]
    pub output: Option<String>,
    /// `csv` for traces, `json` for compare reports.
    #[serde(default)]
    pub format: Option<String>,
}

fn required<'a, X>(field: &'a Option<X>, name: &str, mode: Mode) -> Result<&'a X> {
    field
        .as_ref()
        .ok_or_else(|| Error::Parse(format!("mode {} requires field `{name}`", mode.as_str())))
}

fn forbidden<X>(field: &Option<X>, name: &str, mode: Mode) -> Result<()> {
    match field {
        Some(_) => Err(Error::Parse(format!(
            "field `{name}` is not used by mode {}",
            mode.as_str()
        ))),
        None => Ok(()),
    }
}

fn vector(v: [f64; 3], name: &str) -> Result<Vector3<f64>> {
    let v = Vector3::from_array(v);
    if !v.is_finite() {
        return Err(Error::Parse(format!("`{name}` must be finite")));
    }
    Ok(v)
}

fn unit(v: [f64; 3], name: &str) -> Result<Vector3<f64>> {
    vector(v, name)?
        .ensure_unit(UNIT_TOL)
        .map_err(|e| Error::Parse(format!("`{name}`: {e}")))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks that exactly the fields the mode needs are present.
    pub fn validate(&self) -> Result<()> {
        let m = self.mode;
        let needs = |kappa, theta, tau, grid, cf, files| -> Result<()> {
            let checks: [(bool, bool, &str); 7] = [
                (kappa, self.kappa.is_some(), "kappa"),
                (theta, self.theta.is_some(), "theta"),
                (tau, self.tau.is_some(), "tau"),
                (grid, self.grid.is_some(), "grid"),
                (cf, self.closed_form.is_some(), "closed_form"),
                (files, self.a.is_some(), "a"),
                (files, self.b.is_some(), "b"),
            ];
            for (want, have, name) in checks {
                if want && !have {
                    return Err(Error::Parse(format!("mode {} requires field `{name}`", m.as_str())));
                }
                if !want && have {
                    return Err(Error::Parse(format!("field `{name}` is not used by mode {}", m.as_str())));
                }
            }
            Ok(())
        };
        match m {
            Mode::KappaTheta => needs(true, true, false, true, false, false)?,
            Mode::KappaTau | Mode::Oracle => needs(true, false, true, true, false, false)?,
            Mode::ClosedForm => {
                let wants_kappa = matches!(self.closed_form, Some(ClosedFormSpec::ConstantTheta { .. }));
                needs(wants_kappa, false, false, true, true, false)?
            }
            Mode::Compare => {
                needs(false, false, false, false, false, true)?;
                forbidden(&self.initial, "initial", m)?;
            }
        }
        let init = self.initial.clone().unwrap_or_default();
        match m {
            Mode::KappaTheta => {
                required(&init.tangent, "initial.tangent", m)?;
                forbidden(&init.normal, "initial.normal", m)?;
            }
            Mode::KappaTau | Mode::Oracle => {
                required(&init.tangent, "initial.tangent", m)?;
                required(&init.normal, "initial.normal", m)?;
            }
            Mode::ClosedForm => {
                forbidden(&init.tangent, "initial.tangent", m)?;
                forbidden(&init.normal, "initial.normal", m)?;
            }
            Mode::Compare => {}
        }
        if let Some(g) = &self.grid {
            Grid::new(g.s0, g.s_end, g.h)?;
        }
        if let Some(fmt) = &self.format {
            let expected = if m == Mode::Compare { "json" } else { "csv" };
            if fmt != expected {
                return Err(Error::Parse(format!(
                    "format `{fmt}` not supported by mode {}; use `{expected}`",
                    m.as_str()
                )));
            }
        }
        Ok(())
    }

    fn grid(&self) -> Result<Grid<f64>> {
        let g = required(&self.grid, "grid", self.mode)?;
        Grid::new(g.s0, g.s_end, g.h)
    }

    fn profile(&self, spec: &Option<ProfileSpec>, name: &str) -> Result<ScalarProfile<f64>> {
        required(spec, name, self.mode)?
            .build()
            .map_err(|e| Error::Parse(format!("`{name}`: {e}")))
    }

    fn position(&self) -> Result<Vector3<f64>> {
        match self.initial.as_ref().and_then(|i| i.position) {
            Some(p) => vector(p, "initial.position"),
            None => Ok(Vector3::zero()),
        }
    }

    fn closed_form_case(&self) -> Result<ClosedFormCase<f64>> {
        Ok(match required(&self.closed_form, "closed_form", self.mode)? {
            ClosedFormSpec::ConstantTheta { theta0 } => ClosedFormCase::ConstantTheta {
                kappa: self.profile(&self.kappa, "kappa")?,
                theta0: *theta0,
            },
            ClosedFormSpec::GaussianKappa { kappa0, theta0 } => ClosedFormCase::GaussianKappa {
                kappa0: *kappa0,
                theta0: *theta0,
            },
            ClosedFormSpec::ConstantKappaLinearTheta { kappa0 } => {
                ClosedFormCase::ConstantKappaLinearTheta { kappa0: *kappa0 }
            }
            ClosedFormSpec::ConstantKappaTheta { kappa0, theta0 } => {
                ClosedFormCase::ConstantKappaTheta {
                    kappa0: *kappa0,
                    theta0: *theta0,
                }
            }
        })
    }

    /// Label written to the trace header.
    pub fn label(&self) -> String {
        match (&self.mode, &self.closed_form) {
            (Mode::ClosedForm, Some(cf)) => {
                let case = serde_json::to_value(cf)
                    .ok()
                    .and_then(|v| v.get("case").and_then(|c| c.as_str()).map(str::to_owned))
                    .unwrap_or_default();
                format!("closed-form {case}")
            }
            (m, _) => m.as_str().to_owned(),
        }
    }

    /// Produces the trace for a trace-producing mode.
    pub fn execute(&self) -> Result<CurveTrace<f64>> {
        let grid = self.grid()?;
        let init = self.initial.clone().unwrap_or_default();
        let r0 = self.position()?;
        match self.mode {
            Mode::KappaTheta => {
                let kappa = self.profile(&self.kappa, "kappa")?;
                let theta = self.profile(&self.theta, "theta")?;
                let t0 = unit(*required(&init.tangent, "initial.tangent", self.mode)?, "initial.tangent")?;
                Synthesizer::new(&kappa, Prescription::Theta(&theta)).run(
                    &InitialConditions {
                        tangent: t0,
                        normal: None,
                        position: r0,
                    },
                    &grid,
                )
            }
            Mode::KappaTau | Mode::Oracle => {
                let kappa = self.profile(&self.kappa, "kappa")?;
                let tau = self.profile(&self.tau, "tau")?;
                let t0 = unit(*required(&init.tangent, "initial.tangent", self.mode)?, "initial.tangent")?;
                let n0 = unit(*required(&init.normal, "initial.normal", self.mode)?, "initial.normal")?;
                if self.mode == Mode::Oracle {
                    frenet_integrate(&kappa, &tau, &FrenetState::new(grid.s0, r0, t0, n0), &grid)
                } else {
                    Synthesizer::new(&kappa, Prescription::Torsion(&tau)).run(
                        &InitialConditions {
                            tangent: t0,
                            normal: Some(n0),
                            position: r0,
                        },
                        &grid,
                    )
                }
            }
            Mode::ClosedForm => self.closed_form_case()?.trace(&grid, r0),
            Mode::Compare => Err(Error::Parse("mode compare produces a report, not a trace".into())),
        }
    }
}

/// Formats with 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trace_csv(trace: &CurveTrace<f64>, label: &str) -> String {
    let mut out = String::new();
    let g = &trace.grid;
    let _ = writeln!(out, "# mode: {label}");
    let _ = writeln!(
        out,
        "# grid: s0={} s_end={} h={} samples={}",
        num(g.s0),
        num(g.s_end),
        num(g.h),
        trace.len()
    );
    let _ = writeln!(out, "# switches: {}", trace.switch_log.len());
    for ev in &trace.switch_log {
        let _ = writeln!(
            out,
            "# switch: s={} from={} to={} frame_jump={}",
            num(ev.s),
            ev.from,
            ev.to,
            num(ev.frame_jump)
        );
    }
    let _ = writeln!(
        out,
        "# chart_angle: theta where chart=theta, phi where chart=phi; the meaning changes at each switch"
    );
    out.push_str(&CSV_COLUMNS.join(","));
    out.push('\n');
    for p in &trace.samples {
        let mut fields: Vec<String> = Vec::with_capacity(CSV_COLUMNS.len());
        fields.push(num(p.s));
        for v in [p.position, p.tangent, p.normal, p.binormal] {
            fields.extend(v.to_array().into_iter().map(num));
        }
        fields.push(num(p.kappa));
        fields.push(num(p.tau));
        fields.push(num(p.chart_angle()));
        fields.push(p.chart().as_str().to_owned());
        fields.push(if p.degenerate_kappa { "1" } else { "0" }.to_owned());
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

fn parse_grid_comment(line: &str) -> Option<Grid<f64>> {
    let rest = line.trim_start_matches('#').trim().strip_prefix("grid:")?;
    let mut s0 = None;
    let mut s_end = None;
    let mut h = None;
    for kv in rest.split_whitespace() {
        let (k, v) = kv.split_once('=')?;
        let v: f64 = v.parse().ok()?;
        match k {
            "s0" => s0 = Some(v),
            "s_end" => s_end = Some(v),
            "h" => h = Some(v),
            _ => {}
        }
    }
    Grid::new(s0?, s_end?, h?).ok()
}

/// Reads a trace written by [`write_trace_csv`]. The switch log and the
/// chart-angle rates are not stored and come back empty and zero.
pub fn read_trace_csv(text: &str) -> Result<CurveTrace<f64>> {
    let grid_comment = text
        .lines()
        .filter(|l| l.starts_with('#'))
        .find_map(parse_grid_comment);
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse(format!("trace header: {e}")))?
        .clone();
    if headers.iter().ne(CSV_COLUMNS.iter().copied()) {
        return Err(Error::Parse(format!(
            "trace header must be `{}`",
            CSV_COLUMNS.join(",")
        )));
    }
    let mut samples = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(format!("trace row {}: {e}", row + 1)))?;
        let field = |n: usize| -> Result<f64> {
            record[n].parse::<f64>().map_err(|_| {
                Error::Parse(format!(
                    "trace row {}: column {} is not a number",
                    row + 1,
                    CSV_COLUMNS[n]
                ))
            })
        };
        let vec_at = |n: usize| -> Result<Vector3<f64>> {
            Ok(Vector3::new(field(n)?, field(n + 1)?, field(n + 2)?))
        };
        let s = field(0)?;
        let frame = Frame::new(vec_at(4)?, vec_at(7)?, vec_at(10)?);
        let chart: ChartId = record[16].parse()?;
        let degenerate_kappa = match &record[17] {
            "1" | "true" => true,
            "0" | "false" => false,
            other => {
                return Err(Error::Parse(format!(
                    "trace row {}: degenerate_kappa `{other}` is not 0 or 1",
                    row + 1
                )))
            }
        };
        let angle = field(15)?;
        let state = match reexpress(&frame, s, chart)? {
            ChartState::Theta(mut st) => {
                st.theta = angle;
                ChartState::Theta(st)
            }
            ChartState::Phi(mut st) => {
                st.phi = angle;
                ChartState::Phi(st)
            }
        };
        samples.push(FrameSample {
            s,
            position: vec_at(1)?,
            tangent: frame.tangent,
            normal: frame.normal,
            binormal: frame.binormal,
            kappa: field(13)?,
            tau: field(14)?,
            state,
            angle_rate: 0.0,
            degenerate_kappa,
        });
    }
    if samples.is_empty() {
        return Err(Error::Parse("trace has no data rows".into()));
    }
    let grid = match grid_comment {
        Some(g) => g,
        None => {
            let s0 = samples[0].s;
            let s_end = samples[samples.len() - 1].s;
            let h = if samples.len() > 1 { samples[1].s - s0 } else { 0.0 };
            Grid::new(s0, s_end, h)?
        }
    };
    Ok(CurveTrace {
        samples,
        grid,
        switch_log: Vec::new(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub s0: f64,
    pub s_end: f64,
    pub h: f64,
}

/// JSON form of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub samples: usize,
    pub grid: GridReport,
    pub max_position_dev: f64,
    pub max_tangent_dev: f64,
    pub max_torsion_dev: f64,
    pub max_chart_angle_dev: Option<f64>,
    pub mean_position_dev: f64,
    pub mean_tangent_dev: f64,
    pub mean_torsion_dev: f64,
}

impl From<&ComparisonReport<f64>> for CompareReport {
    fn from(r: &ComparisonReport<f64>) -> Self {
        Self {
            samples: r.samples,
            grid: GridReport {
                s0: r.grid.s0,
                s_end: r.grid.s_end,
                h: r.grid.h,
            },
            max_position_dev: r.max_position_dev,
            max_tangent_dev: r.max_tangent_dev,
            max_torsion_dev: r.max_torsion_dev,
            max_chart_angle_dev: r.max_chart_angle_dev,
            mean_position_dev: r.mean_position_dev,
            mean_tangent_dev: r.mean_tangent_dev,
            mean_torsion_dev: r.mean_torsion_dev,
        }
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))
}

/// Compares two trace files and renders the JSON report.
pub fn compare_files(a: &Path, b: &Path) -> Result<String> {
    let ta = read_trace_csv(&read_file(a)?).map_err(|e| Error::Parse(format!("{}: {e}", a.display())))?;
    let tb = read_trace_csv(&read_file(b)?).map_err(|e| Error::Parse(format!("{}: {e}", b.display())))?;
    let report = compare_traces(&ta, &tb)?;
    render_report(&CompareReport::from(&report))
}

pub fn render_report(report: &CompareReport) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| Error::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

/// Runs a parsed config and returns the text to write.
pub fn run_config(cfg: &RunConfig) -> Result<String> {
    match cfg.mode {
        Mode::Compare => {
            let a = required(&cfg.a, "a", cfg.mode)?;
            let b = required(&cfg.b, "b", cfg.mode)?;
            compare_files(Path::new(a), Path::new(b))
        }
        _ => Ok(write_trace_csv(&cfg.execute()?, &cfg.label())),
    }
}
