//! The `linentropy` command line.
//!
//! Exit codes: 0 success, 1 a bound was violated, 2 invalid input, 3 numerical failure.
//! Every flag can also be given in a TOML file passed with `--config`, using the flag's long
//! name as key; flags on the command line take precedence.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bounds::{dssa_g, inverted_lower_f, isa_h, purity_f, renyi_f, sharp_f, DimPair};
use crate::density::{DensityMatrix, Tolerances};
use crate::error::{Error, Result};
use crate::extremal::{ExtremalParams, Family};
use crate::report::{evaluate_all, BoundReport, EntropyPoint};
use crate::state_io::{read_state, write_state};
use crate::verify::{identity_suite, run_campaign, Ensemble, SamplerConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "linentropy",
    version,
    about = "Linear-entropy bounds for bipartite quantum states"
)]
pub struct Cli {
    /// TOML file with default values for any flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a state file and report every bound on it.
    Check(StateArgs),
    /// Report whether a state shows nonclassical correlations (a marginal more mixed than the whole).
    Witness(StateArgs),
    /// Run a random-state verification campaign.
    Sample(SampleArgs),
    /// Emit a bound surface on a grid as CSV or JSON.
    Surface(SurfaceArgs),
    /// Build an extremal state, check it against its bound and optionally export it.
    Extremal(ExtremalArgs),
    /// Run the deterministic identity checks.
    Identities(IdentitiesArgs),
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// State file: {"dims": [dA, dB], "matrix": [[[re, im], ...], ...]}.
    pub state: PathBuf,
    #[command(flatten)]
    pub tol: TolArgs,
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TolArgs {
    #[arg(long)]
    pub tol_herm: Option<f64>,
    #[arg(long)]
    pub tol_psd: Option<f64>,
    #[arg(long)]
    pub tol_trace: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// NxM, or NxMxK for a tripartite campaign.
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// hs, pure or rank-K.
    #[arg(long)]
    pub ensemble: Option<String>,
    /// Worker threads (0 = all cores). Does not change the output.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Boundary states for random targets appended to the ensemble samples.
    #[arg(long)]
    pub inject: Option<u64>,
    /// Also check the Schatten-norm and correlation-tensor lemmas on every sample.
    #[arg(long)]
    pub structural: bool,
    /// Directory for samples.jsonl and summary.json.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub dims: Option<String>,
    /// Grid step as a fraction of each axis range.
    #[arg(long)]
    pub grid: Option<f64>,
    #[arg(long)]
    pub form: Option<Form>,
    #[arg(long)]
    pub format: Option<Format>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub family: Option<FamilyArg>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Instead of one state, sweep the family parameters with this step and emit
    /// "alpha,beta,x,y,z,slack" CSV.
    #[arg(long)]
    pub sweep: Option<f64>,
    #[arg(long)]
    pub format: Option<Format>,
    /// State file (single state) or CSV/JSON file (sweep).
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IdentitiesArgs {
    /// Comma-separated dimension pairs, e.g. 2x2,2x3.
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Linear,
    Renyi,
    Purity,
    Inverted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Isa,
    Dssa,
    Mix,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Isa => Family::Isa,
            FamilyArg::Dssa => Family::Dssa,
            FamilyArg::Mix => Family::Mix,
        }
    }
}

/// Contents of a `--config` file.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub dims: Option<String>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub ensemble: Option<String>,
    pub workers: Option<usize>,
    pub inject: Option<u64>,
    pub structural: Option<bool>,
    pub grid: Option<f64>,
    pub form: Option<Form>,
    pub family: Option<FamilyArg>,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub sweep: Option<f64>,
    pub tol_herm: Option<f64>,
    pub tol_psd: Option<f64>,
    pub tol_trace: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        toml::from_str(&fs::read_to_string(path)?)
            .map_err(|e| Error::parameter(format!("config file {}: {e}", path.display())))
    }
}

/// Parses `NxM` or `NxMxK`.
pub fn parse_dims(s: &str) -> Result<Vec<usize>> {
    let dims: Vec<usize> = s
        .split(['x', 'X'])
        .map(|p| p.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::parameter(format!("dims `{s}` must look like NxM or NxMxK")))?;
    if !(2..=3).contains(&dims.len()) || dims.iter().any(|&d| d < 2) {
        return Err(Error::parameter(format!(
            "dims `{s}` must be NxM or NxMxK with every factor >= 2"
        )));
    }
    Ok(dims)
}

fn parse_pair(s: &str) -> Result<DimPair> {
    let dims = parse_dims(s)?;
    if dims.len() != 2 {
        return Err(Error::parameter(format!(
            "expected a dimension pair NxM, got `{s}`"
        )));
    }
    DimPair::new(dims[0], dims[1])
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::parameter(format!("missing --{flag}")))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical(_) => EXIT_NUMERICAL,
        Error::CampaignAborted { .. } => EXIT_VIOLATION,
        _ => EXIT_INVALID,
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{text}")
            } else {
                write!(out, "{text}")
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        // the reader went away, e.g. `| head`
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::InvalidState(report) = &e {
                for line in report.rejections() {
                    let _ = writeln!(err, "  rejected: {line}");
                }
            }
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    match &cli.command {
        Command::Check(a) => check(a, &cfg, out),
        Command::Witness(a) => witness(a, &cfg, out),
        Command::Sample(a) => sample(a, &cfg, out),
        Command::Surface(a) => surface(a, &cfg, out),
        Command::Extremal(a) => extremal(a, &cfg, out),
        Command::Identities(a) => identities(a, &cfg, out),
    }
}

fn tolerances(t: &TolArgs, cfg: &ConfigFile) -> Tolerances {
    let d = Tolerances::default();
    Tolerances {
        herm: t.tol_herm.or(cfg.tol_herm).unwrap_or(d.herm),
        psd: t.tol_psd.or(cfg.tol_psd).unwrap_or(d.psd),
        trace: t.tol_trace.or(cfg.tol_trace).unwrap_or(d.trace),
    }
}

/// Writes `text` to `path` if given, otherwise to `out`.
fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn report_csv(r: &BoundReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["name", "kind", "value", "branch", "slack", "satisfied"])?;
    for b in &r.bounds {
        let kind = serde_json::to_value(b.kind)?;
        w.write_record([
            b.name.clone(),
            kind.as_str().unwrap_or_default().to_string(),
            b.value.map(|v| v.to_string()).unwrap_or_default(),
            b.branch.clone().unwrap_or_default(),
            b.slack.map(|v| v.to_string()).unwrap_or_default(),
            b.satisfied.to_string(),
        ])?;
    }
    csv_string(w)
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

fn load_state(a: &StateArgs, cfg: &ConfigFile) -> Result<DensityMatrix> {
    read_state(&a.state, &tolerances(&a.tol, cfg))
}

fn check(a: &StateArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<i32> {
    let rho = load_state(a, cfg)?;
    let report = evaluate_all(&rho)?;
    let text = match a.format.or(cfg.format) {
        Some(Format::Json) => serde_json::to_string_pretty(&report)? + "\n",
        Some(Format::Csv) => report_csv(&report)?,
        None => format!("{report}\n"),
    };
    emit(&text, a.output.as_deref().or(cfg.output.as_deref()), out)?;
    Ok(if report.all_satisfied() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

#[derive(Serialize)]
struct WitnessVerdict {
    x: f64,
    y: f64,
    z: f64,
    nonclassical: bool,
}

fn witness(a: &StateArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<i32> {
    let rho = load_state(a, cfg)?;
    let p = EntropyPoint::of_state(&rho)?;
    let verdict = WitnessVerdict {
        x: p.x,
        y: p.y,
        z: p.z,
        nonclassical: p.witness(),
    };
    let text = match a.format.or(cfg.format) {
        Some(Format::Json) => serde_json::to_string_pretty(&verdict)? + "\n",
        Some(Format::Csv) => format!(
            "x,y,z,nonclassical\n{},{},{},{}\n",
            p.x, p.y, p.z, verdict.nonclassical
        ),
        None if verdict.nonclassical => format!(
            "nonclassical correlations: S_L(A) = {:.12}, S_L(B) = {:.12} vs S_L(AB) = {:.12}\n",
            p.x, p.y, p.z
        ),
        None => format!(
            "no witness: S_L(A) = {:.12}, S_L(B) = {:.12} <= S_L(AB) = {:.12}\n",
            p.x, p.y, p.z
        ),
    };
    emit(&text, a.output.as_deref().or(cfg.output.as_deref()), out)?;
    Ok(EXIT_OK)
}

fn sample(a: &SampleArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<i32> {
    let dims = parse_dims(&required(a.dims.clone().or(cfg.dims.clone()), "dims")?)?;
    let ensemble: Ensemble = a
        .ensemble
        .as_deref()
        .or(cfg.ensemble.as_deref())
        .unwrap_or("hs")
        .parse()?;
    let config = SamplerConfig {
        dims,
        ensemble,
        samples: required(a.samples.or(cfg.samples), "samples")?,
        seed: a.seed.or(cfg.seed).unwrap_or(0),
        workers: a.workers.or(cfg.workers).unwrap_or(0),
        extremal_injections: a.inject.or(cfg.inject).unwrap_or(0),
        structural: a.structural || cfg.structural.unwrap_or(false),
    };
    let dir = a.output.as_deref().or(cfg.output.as_deref());
    let report = run_campaign(&config, dir)?;
    writeln!(
        out,
        "{} samples ({} injected), dims {:?}, ensemble {}, seed {}: {} violations, {} witnesses, {:.2}s",
        report.samples + report.extremal_injections,
        report.extremal_injections,
        report.dims,
        report.ensemble,
        report.seed,
        report.violation_count,
        report.witness_count,
        report.wall_time.as_secs_f64()
    )?;
    for (name, s) in &report.bounds {
        if let Some(m) = s.min_slack {
            writeln!(
                out,
                "  {name:<24} min slack {m:+.3e}  violations {}",
                s.violations
            )?;
        }
    }
    if let Some(d) = dir {
        writeln!(out, "wrote {}", d.display())?;
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

/// `k/n` of each axis range with `n = round(1/step)`.
fn grid_points(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::parameter(format!(
            "--grid must lie in (0, 1], got {step}"
        )));
    }
    let n = (1.0 / step).round().max(1.0) as usize;
    Ok((0..=n)
        .map(|k| lo + (hi - lo) * k as f64 / n as f64)
        .collect())
}

#[derive(Serialize)]
struct SurfaceRow {
    x: f64,
    y: f64,
    bound: f64,
    branch: String,
}

fn surface(a: &SurfaceArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<i32> {
    let dims = parse_pair(&required(a.dims.clone().or(cfg.dims.clone()), "dims")?)?;
    let step = required(a.grid.or(cfg.grid), "grid")?;
    let form = a.form.or(cfg.form).unwrap_or(Form::Linear);
    let ((xlo, xhi), (ylo, yhi)) = match form {
        Form::Linear | Form::Inverted => ((0.0, dims.max_a()), (0.0, dims.max_b())),
        Form::Renyi => ((0.0, dims.da().log2()), (0.0, dims.db().log2())),
        Form::Purity => ((1.0 / dims.da(), 1.0), (1.0 / dims.db(), 1.0)),
    };
    let xs = grid_points(xlo, xhi, step)?;
    let ys = grid_points(ylo, yhi, step)?;
    let mut rows = Vec::with_capacity(xs.len() * ys.len());
    for &x in &xs {
        for &y in &ys {
            let (bound, branch) = match form {
                Form::Linear => {
                    let (v, b) = sharp_f(x, y, dims)?;
                    (v, b.to_string())
                }
                Form::Renyi => {
                    let (v, b) = renyi_f(x, y, dims)?;
                    (v, b.to_string())
                }
                Form::Purity => {
                    let (v, b) = purity_f(x, y, dims)?;
                    (v, b.to_string())
                }
                Form::Inverted => {
                    let inv = inverted_lower_f(x, y, dims)?;
                    (inv.value, inv.method.label())
                }
            };
            rows.push(SurfaceRow {
                x,
                y,
                bound,
                branch,
            });
        }
    }
    let text = match a.format.or(cfg.format).unwrap_or(Format::Csv) {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            csv_string(w)?
        }
    };
    emit(&text, a.output.as_deref().or(cfg.output.as_deref()), out)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct SweepRow {
    alpha: f64,
    beta: f64,
    x: f64,
    y: f64,
    z: f64,
    slack: f64,
}

/// Measured point and its slack against the surface the family is meant to saturate.
fn family_slack(
    params: &ExtremalParams,
    dims: DimPair,
) -> Result<(DensityMatrix, EntropyPoint, f64)> {
    let rho = params.build(dims)?;
    let p = EntropyPoint::of_state(&rho)?;
    let bound = match params.family {
        Family::Dssa => dssa_g(p.x, p.y, dims)?,
        Family::Isa | Family::Mix => isa_h(p.x, p.y, dims)?,
    };
    Ok((rho, p, bound - p.z))
}

fn extremal(a: &ExtremalArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<i32> {
    let dims = parse_pair(&required(a.dims.clone().or(cfg.dims.clone()), "dims")?)?;
    let family: Family = required(a.family.or(cfg.family), "family")?.into();
    let output = a.output.as_deref().or(cfg.output.as_deref());

    if let Some(step) = a.sweep.or(cfg.sweep) {
        let grid = grid_points(0.0, 1.0, step)?;
        let fixed_beta = a.beta.or(cfg.beta).unwrap_or(0.0);
        let mut rows = Vec::new();
        for &alpha in &grid {
            let betas: Vec<f64> = match family {
                Family::Dssa => grid
                    .iter()
                    .copied()
                    .filter(|b| alpha + b <= 1.0 + 1e-12)
                    .collect(),
                Family::Isa | Family::Mix => vec![fixed_beta],
            };
            for beta in betas {
                let params = ExtremalParams {
                    family,
                    alpha,
                    beta: beta.min(1.0 - alpha).max(0.0),
                };
                let (_, p, slack) = family_slack(&params, dims)?;
                rows.push(SweepRow {
                    alpha,
                    beta: params.beta,
                    x: p.x,
                    y: p.y,
                    z: p.z,
                    slack,
                });
            }
        }
        let text = match a.format.or(cfg.format).unwrap_or(Format::Csv) {
            Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for r in &rows {
                    w.serialize(r)?;
                }
                csv_string(w)?
            }
        };
        emit(&text, output, out)?;
        let ok = rows
            .iter()
            .all(|r| r.slack >= -crate::report::VIOLATION_TOL);
        return Ok(if ok { EXIT_OK } else { EXIT_VIOLATION });
    }

    let params = ExtremalParams {
        family,
        alpha: required(a.alpha.or(cfg.alpha), "alpha")?,
        beta: a.beta.or(cfg.beta).unwrap_or(0.0),
    };
    let (rho, p, slack) = family_slack(&params, dims)?;
    let (f, branch) = sharp_f(p.x, p.y, dims)?;
    match a.format.or(cfg.format) {
        Some(Format::Json) => {
            let v = serde_json::json!({
                "family": params.family, "alpha": params.alpha, "beta": params.beta,
                "x": p.x, "y": p.y, "z": p.z, "slack": slack,
                "sharp": f, "branch": branch,
            });
            writeln!(out, "{}", serde_json::to_string_pretty(&v)?)?;
        }
        Some(Format::Csv) => {
            writeln!(out, "alpha,beta,x,y,z,slack")?;
            writeln!(out, "{},{},{},{},{},{}", params.alpha, params.beta, p.x, p.y, p.z, slack)?;
        }
        None => writeln!(
            out,
            "{:?} family (alpha = {}, beta = {}) on {dims}: x = {:.12}, y = {:.12}, z = {:.12}\n  slack against its surface {slack:+.3e}; sharp bound {f:.12} [{branch}]",
            params.family, params.alpha, params.beta, p.x, p.y, p.z
        )?,
    }
    if let Some(path) = output {
        write_state(path, &rho)?;
    }
    Ok(if slack >= -crate::report::VIOLATION_TOL {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

fn identities(a: &IdentitiesArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<i32> {
    let spec = a
        .dims
        .clone()
        .or(cfg.dims.clone())
        .unwrap_or_else(|| "2x2,2x3,3x3,2x4".into());
    let dims: Vec<DimPair> = spec.split(',').map(parse_pair).collect::<Result<_>>()?;
    let report = identity_suite(&dims)?;
    match a.format.or(cfg.format) {
        Some(Format::Json) => writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?,
        _ => {
            for c in &report.checks {
                writeln!(out, "{c}")?;
            }
        }
    }
    Ok(if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}
