//! Command layer of the `nullbundle` binary.
//!
//! Every command is a plain function so that tests can drive it without
//! spawning a process. Exit codes: 0 when all checks pass, 1 when a law or
//! verification check fails, 2 for bad input or domain errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use nullbundle::bundle::{by_name, global_triv, schwarzschild, schwarzschild_outgoing_radial, GlobalFrame, SPACETIMES};
use nullbundle::csvio::{fmt_f64, read_curve, write_bundle_curve, write_curve};
use nullbundle::distribution::{integrate_explicit, prolong, theta_on_kernel, ExplicitNullODE};
use nullbundle::laws::{run_suite, LawConfig, LawReport};
use nullbundle::tolerance;
use nullbundle::{CausalClass, ConePoint, Orientation, Spacetime};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] nullbundle::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("invalid JSON input: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid configuration: {0}")]
    Config(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        EXIT_INPUT
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

fn io_at(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_owned(), source }
}

#[derive(Debug, Parser)]
#[command(name = "nullbundle", version, about = "Null tangent bundle toolkit")]
pub struct Cli {
    /// Tolerance override; each command has its own default.
    #[arg(long, global = true, env = "NULLBUNDLE_TOL")]
    pub tol: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Causal class and time orientation of coordinate vectors at an event.
    Classify(ClassifyArgs),
    /// Run the randomized law suites and emit a JSON report.
    VerifyLaws(VerifyArgs),
    /// Schwarzschild vierbein table, trivialization samples and a radial null trajectory.
    SchwarzschildDemo(DemoArgs),
    /// Lift a null curve into the bundle and evaluate the canonical one-form on the kernel.
    Prolong(ProlongArgs),
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// JSON file `{"event": [x0,x1,x2,x3], "vectors": [[..], ..]}`; `-` reads stdin.
    pub input: PathBuf,
    #[arg(long, default_value = "minkowski")]
    pub spacetime: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// A spacetime name, or `all`.
    #[arg(long, default_value = "minkowski")]
    pub spacetime: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Flip the sign of every bracket output (harness self-check).
    #[arg(long, hide = true)]
    pub corrupt_ternary: bool,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, default_value_t = 1.1)]
    pub r_min: f64,
    #[arg(long, default_value_t = 10.0)]
    pub r_max: f64,
    #[arg(long, default_value_t = 20)]
    pub grid: usize,
    /// RK4 step for the trajectory.
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Initial radius of the trajectory.
    #[arg(long, default_value_t = 2.0)]
    pub r0: f64,
    #[arg(long, default_value_t = 5.0)]
    pub t_end: f64,
    /// Output directory.
    #[arg(long, default_value = "schwarzschild-demo")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ProlongArgs {
    /// Curve CSV `t,x0..x3[,dx0..dx3]`; `-` reads stdin.
    pub input: PathBuf,
    #[arg(long, default_value = "minkowski")]
    pub spacetime: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Validated settings shared by the commands.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub spacetime: String,
    pub seed: u64,
    pub trials: usize,
    pub tol: f64,
    pub step: f64,
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            spacetime: "minkowski".into(),
            seed: 42,
            trials: 1000,
            tol: tolerance::LAW_RESIDUAL,
            step: 1e-3,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(CliError::Config("trials must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(CliError::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(CliError::Config(format!("step must be positive, got {}", self.step)));
        }
        Ok(())
    }

    fn spacetimes(&self) -> Result<Vec<Spacetime>> {
        if self.spacetime == "all" {
            return SPACETIMES.iter().map(|n| by_name(n).map_err(Into::into)).collect();
        }
        Ok(vec![by_name(&self.spacetime)?])
    }
}

// ---------------------------------------------------------------- classify

#[derive(Clone, Debug, Deserialize)]
pub struct ClassifyInput {
    pub event: [f64; 4],
    pub vectors: Vec<[f64; 4]>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification {
    pub vector: [f64; 4],
    pub class: String,
    pub orientation: Option<String>,
    /// `"<class>, <orientation>"`, with `—` for spacelike vectors.
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub spacetime: String,
    pub event: [f64; 4],
    pub results: Vec<Classification>,
}

pub fn cmd_classify(input: &ClassifyInput, spacetime: &str, tol: f64) -> Result<ClassifyReport> {
    let st = by_name(spacetime)?;
    let p = st.event(input.event)?;
    let results = input
        .vectors
        .iter()
        .map(|v| {
            let (class, orientation) = st.causal_character(&p, v, tol)?;
            Ok(classification(*v, class, orientation))
        })
        .collect::<Result<_>>()?;
    Ok(ClassifyReport { spacetime: st.name().to_owned(), event: input.event, results })
}

fn classification(vector: [f64; 4], class: CausalClass, orientation: Option<Orientation>) -> Classification {
    let orientation = orientation.map(|o| o.to_string());
    let label = format!("{class}, {}", orientation.as_deref().unwrap_or("—"));
    Classification { vector, class: class.to_string(), orientation, label }
}

// ------------------------------------------------------------- verify-laws

/// All reports plus whether every law passed.
pub fn cmd_verify_laws(cfg: &RunConfig, corrupt_ternary: bool) -> Result<(Vec<LawReport>, bool)> {
    cfg.validate()?;
    let law_cfg =
        LawConfig { seed: cfg.seed, trials: cfg.trials, tol: cfg.tol, corrupt_ternary, ..LawConfig::default() };
    let mut reports = Vec::new();
    for st in cfg.spacetimes()? {
        reports.extend(run_suite(&st, &law_cfg)?);
    }
    let pass = reports.iter().all(|r| r.pass);
    Ok((reports, pass))
}

pub fn reports_json(reports: &[LawReport]) -> String {
    let mut s = serde_json::to_string_pretty(reports).expect("reports serialize");
    s.push('\n');
    s
}

// ------------------------------------------------------ schwarzschild-demo

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DemoSummary {
    pub radii: Vec<f64>,
    pub max_orthonormality_defect: f64,
    pub max_phi_null_residual: f64,
    pub phi_orientation_ok: bool,
    pub r0: f64,
    pub step: f64,
    pub t_end: f64,
    /// `t - r - ln(r - 1)` at the start of the trajectory.
    pub invariant: f64,
    pub max_invariant_error: f64,
    pub pass: bool,
}

pub const VIERBEIN_HEADER: [&str; 7] =
    ["r", "theta", "e_t_t", "e_r_r", "e_theta_theta", "e_phi_phi", "orthonormality_defect"];
pub const PHI_HEADER: [&str; 11] = ["r", "theta", "sigma", "v1", "v2", "v3", "w0", "w1", "w2", "w3", "g_ww"];

/// Fibre points pushed through the trivialization at every grid radius.
const PHI_FIBRES: [(Orientation, [f64; 3]); 4] = [
    (Orientation::Future, [1.0, 0.0, 0.0]),
    (Orientation::Future, [0.3, -0.4, 1.2]),
    (Orientation::Past, [0.0, 2.0, 0.0]),
    (Orientation::Past, [-0.5, 0.5, 0.5]),
];

fn csv_line(fields: impl IntoIterator<Item = String>) -> String {
    let mut s = fields.into_iter().collect::<Vec<_>>().join(",");
    s.push('\n');
    s
}

pub fn radial_grid(r_min: f64, r_max: f64, n: usize) -> Result<Vec<f64>> {
    if n < 1 || !(r_max >= r_min) {
        return Err(CliError::Config(format!("empty radial grid [{r_min}, {r_max}] x {n}")));
    }
    if n == 1 {
        return Ok(vec![r_min]);
    }
    Ok((0..n).map(|i| r_min + (r_max - r_min) * i as f64 / (n - 1) as f64).collect())
}

pub fn cmd_schwarzschild_demo(args: &DemoArgs, tol: f64) -> Result<DemoSummary> {
    let st = schwarzschild();
    let radii = radial_grid(args.r_min, args.r_max, args.grid)?;
    let events = radii.iter().map(|&r| st.event([0.0, r, FRAC_PI_2, 0.0])).collect::<Result<Vec<_>, _>>()?;
    let frames = GlobalFrame::of(&st)?;

    let mut vierbein = csv_line(VIERBEIN_HEADER.map(str::to_owned));
    let mut phi = csv_line(PHI_HEADER.map(str::to_owned));
    let (mut max_defect, mut max_null, mut oriented) = (0.0_f64, 0.0_f64, true);
    for p in &events {
        let x = *p.coords();
        let frame = frames.at(p)?;
        let defect = frame.reconstruction_defect(&st.metric().eval(p));
        max_defect = max_defect.max(defect);
        let e = frame.vectors();
        vierbein.push_str(&csv_line([x[1], x[2], e[(0, 0)], e[(1, 1)], e[(2, 2)], e[(3, 3)], defect].map(fmt_f64)));

        for (sigma, v) in PHI_FIBRES {
            let c = ConePoint::new(sigma, v)?;
            let w = global_triv(&frames, p, &c)?;
            let gww = st.metric().pair(p, &w, &w);
            let scale: f64 = frame.frame_components(&w).norm_sq();
            max_null = max_null.max(gww.abs() / scale);
            let (_, o) = st.causal_character(p, &w, tol)?;
            oriented &= o == Some(sigma);
            let mut row = vec![fmt_f64(x[1]), fmt_f64(x[2]), nullbundle::csvio::sigma_str(sigma).to_owned()];
            row.extend(v.iter().chain(&w).chain([&gww]).copied().map(fmt_f64));
            phi.push_str(&csv_line(row));
        }
    }

    let ode = ExplicitNullODE::new(st.clone(), schwarzschild_outgoing_radial())?;
    let p0 = st.event([0.0, args.r0, FRAC_PI_2, 0.0])?;
    let curve = integrate_explicit(&ode, &p0, args.t_end, args.step)?;
    let invariant = |x: &[f64; 4]| x[0] - x[1] - (x[1] - 1.0).ln();
    let c0 = invariant(p0.coords());
    let max_invariant_error = curve.samples().iter().map(|s| (invariant(&s.x) - c0).abs()).fold(0.0, f64::max);

    fs::create_dir_all(&args.out).map_err(io_at(&args.out))?;
    let write = |name: &str, body: &[u8]| -> Result<()> {
        let path = args.out.join(name);
        fs::write(&path, body).map_err(io_at(&path))
    };
    write("vierbein.csv", vierbein.as_bytes())?;
    write("phi.csv", phi.as_bytes())?;
    let mut traj = Vec::new();
    write_curve(&mut traj, &curve)?;
    write("trajectory.csv", &traj)?;

    let pass =
        max_defect <= tolerance::FRAME && max_null <= tolerance::FRAME && oriented && max_invariant_error <= 1e-6;
    let summary = DemoSummary {
        radii,
        max_orthonormality_defect: max_defect,
        max_phi_null_residual: max_null,
        phi_orientation_ok: oriented,
        r0: args.r0,
        step: args.step,
        t_end: args.t_end,
        invariant: c0,
        max_invariant_error,
        pass,
    };
    let mut json = serde_json::to_string_pretty(&summary)?;
    json.push('\n');
    write("summary.json", json.as_bytes())?;
    Ok(summary)
}

// ----------------------------------------------------------------- prolong

/// Bound on the one-form over the kernel basis for a prolonged curve.
pub const THETA_KERNEL_TOL: f64 = 1e-10;

/// Writes the prolonged curve with a `theta_on_kernel` column and returns
/// the largest value in that column.
pub fn cmd_prolong<R: Read, W: Write>(input: R, out: W, spacetime: &str, tol: f64) -> Result<f64> {
    let st = by_name(spacetime)?;
    let curve = read_curve(input)?;
    let lifted = prolong(&curve, &st, tol)?;
    let theta = lifted.iter().map(|s| theta_on_kernel(&s.point.cone)).collect::<Result<Vec<_>, _>>()?;
    write_bundle_curve(out, &lifted, &["theta_on_kernel"], |i, _| vec![theta[i]])?;
    Ok(theta.into_iter().fold(0.0, f64::max))
}

// ------------------------------------------------------------------ driver

fn open_input(path: &Path) -> Result<Box<dyn Read>> {
    if path == Path::new("-") {
        return Ok(Box::new(io::stdin()));
    }
    Ok(Box::new(fs::File::open(path).map_err(io_at(path))?))
}

fn emit(out: Option<&Path>, body: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => fs::write(path, body).map_err(io_at(path)),
        None => stdout.write_all(body).map_err(io_at(Path::new("<stdout>"))),
    }
}

fn exit_for(pass: bool) -> u8 {
    if pass {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

/// Run a parsed command line; returns the process exit code. Diagnostics go
/// to `stderr`, data to `stdout` unless `--out` is given.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8 {
    match dispatch(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<u8> {
    let tol = cli.tol;
    if let Some(t) = tol {
        if !(t > 0.0) {
            return Err(CliError::Config(format!("tol must be positive, got {t}")));
        }
    }
    match cli.command {
        Command::Classify(a) => {
            let input: ClassifyInput = serde_json::from_reader(open_input(&a.input)?)?;
            let report = cmd_classify(&input, &a.spacetime, tol.unwrap_or(tolerance::CLASSIFY))?;
            let mut body = serde_json::to_string_pretty(&report)?;
            body.push('\n');
            emit(a.out.as_deref(), body.as_bytes(), stdout)?;
            Ok(EXIT_OK)
        }
        Command::VerifyLaws(a) => {
            let cfg = RunConfig {
                spacetime: a.spacetime,
                seed: a.seed,
                trials: a.trials,
                tol: tol.unwrap_or(tolerance::LAW_RESIDUAL),
                out: a.out,
                ..RunConfig::default()
            };
            let (reports, pass) = cmd_verify_laws(&cfg, a.corrupt_ternary)?;
            for r in &reports {
                let verdict = if r.pass { "ok" } else { "FAIL" };
                let _ = writeln!(
                    stderr,
                    "{verdict:4} {:14} {:34} failures {}/{} max residual {:.3e}",
                    r.spacetime, r.law, r.failures, r.trials, r.max_residual
                );
            }
            emit(cfg.out.as_deref(), reports_json(&reports).as_bytes(), stdout)?;
            Ok(exit_for(pass))
        }
        Command::SchwarzschildDemo(a) => {
            RunConfig { step: a.step, ..RunConfig::default() }.validate()?;
            let s = cmd_schwarzschild_demo(&a, tol.unwrap_or(tolerance::CLASSIFY))?;
            let _ = writeln!(
                stderr,
                "orthonormality {:.3e}, phi null residual {:.3e}, phi orientation {}, trajectory invariant error {:.3e}",
                s.max_orthonormality_defect,
                s.max_phi_null_residual,
                if s.phi_orientation_ok { "ok" } else { "wrong" },
                s.max_invariant_error
            );
            let _ = writeln!(stderr, "wrote {}", a.out.display());
            Ok(exit_for(s.pass))
        }
        Command::Prolong(a) => {
            let mut body = Vec::new();
            let worst =
                cmd_prolong(open_input(&a.input)?, &mut body, &a.spacetime, tol.unwrap_or(tolerance::CLASSIFY))?;
            emit(a.out.as_deref(), &body, stdout)?;
            let _ = writeln!(stderr, "max |theta| on kernel {worst:.3e}");
            Ok(exit_for(worst <= THETA_KERNEL_TOL))
        }
    }
}
