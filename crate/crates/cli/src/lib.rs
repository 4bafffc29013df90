//! Command-line front end for `sessile-core`.
//!
//! Every command renders its document into memory first; [`write_document`]
//! then sends it to stdout or atomically to a file. Warnings go to stderr.
//! Exit codes: 0 success, 1 computation or validation failure, 2 usage error.

pub mod fit;
pub mod svg;
pub mod sweep;

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sessile_core::capillary::{bond_number, solve_sphere, spherical_profile};
use sessile_core::oracle::{shoot_for_volume, OracleConfig};
use sessile_core::perturbation::perturbed_profile;
use sessile_core::report::{self, ReportFormat};
use sessile_core::validation::{
    builtin_dataset, compare_all, reproduction_checks, CellKind, ObservableMap,
};
use sessile_core::{DropObservables, DropSpec, Error, FluidParams, Observable, ProfileSamples};

/// Environment variable naming the directory that relative `--output`
/// paths are resolved against.
pub const OUTPUT_DIR_ENV: &str = "SESSILE_OUTPUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } | Error::Usage(_) => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "sessile", version, about = "Sessile drop shapes under gravity")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Drop profile as CSV, JSON or SVG.
    Profile(ProfileArgs),
    /// Recompute the bundled water and mercury comparison tables.
    Validate(ValidateArgs),
    /// First-order error against the integrated profile over gravity scales.
    Sweep(SweepArgs),
    /// Surface tension from measured drop dimensions.
    Fit(FitArgs),
}

#[derive(Debug, Clone, Args)]
pub struct DropArgs {
    /// Drop volume in cm^3.
    #[arg(long)]
    pub volume: f64,
    /// Contact angle in degrees.
    #[arg(long)]
    pub angle: f64,
    /// Liquid density in g/cm^3.
    #[arg(long)]
    pub density: f64,
    /// Gravitational acceleration in cm/s^2 (980.7 standard, 0 for weightless).
    #[arg(long = "g", allow_negative_numbers = true)]
    pub gravity: f64,
}

impl DropArgs {
    fn spec(&self) -> Result<DropSpec, CliError> {
        Ok(DropSpec::from_degrees(self.volume, self.angle)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileMethod {
    Sphere,
    Perturbative,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileFormat {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DocFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub drop: DropArgs,
    /// Surface tension in dyn/cm.
    #[arg(long)]
    pub gamma: f64,
    #[arg(long, value_enum, default_value_t = ProfileMethod::Perturbative)]
    pub method: ProfileMethod,
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = ProfileFormat::Csv)]
    pub format: ProfileFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableSelector {
    #[value(name = "1")]
    Water,
    #[value(name = "2")]
    Mercury,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = TableSelector::All)]
    pub table: TableSelector,
    #[arg(long, value_enum, default_value_t = DocFormat::Table)]
    pub format: DocFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub drop: DropArgs,
    #[arg(long)]
    pub gamma: f64,
    /// Comma-separated multipliers applied to g.
    #[arg(long, value_delimiter = ',', default_value = "1,0.5,0.25")]
    pub scales: Vec<f64>,
    #[arg(long, value_enum, default_value_t = DocFormat::Table)]
    pub format: DocFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub drop: DropArgs,
    /// Measured contact radius (cm).
    #[arg(long)]
    pub rho0: Option<f64>,
    /// Measured equatorial radius (cm), obtuse angles only.
    #[arg(long)]
    pub rho1: Option<f64>,
    /// Measured apex height (cm).
    #[arg(long)]
    pub height: Option<f64>,
    /// Measured apex-to-equator height (cm), obtuse angles only.
    #[arg(long)]
    pub apex_to_equator: Option<f64>,
    #[arg(long, default_value_t = fit::DEFAULT_BRACKET.0)]
    pub gamma_min: f64,
    #[arg(long, default_value_t = fit::DEFAULT_BRACKET.1)]
    pub gamma_max: f64,
    #[arg(long, value_enum, default_value_t = DocFormat::Table)]
    pub format: DocFormat,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// A rendered document plus diagnostics for stderr.
#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub document: String,
    pub warnings: Vec<String>,
    /// Set when the command ran but a check failed (exit code 1).
    pub failed: bool,
}

fn bond_warning(bond: f64, what: &str) -> Option<String> {
    (bond > 1.0).then(|| {
        format!("warning: {what}: Bond number {bond:.3} exceeds 1, first-order results are outside their range of validity")
    })
}

// ---------------------------------------------------------------- profile

#[derive(Serialize)]
struct ProfileDocument<'a> {
    method: ProfileMethod,
    volume_cm3: f64,
    contact_angle_deg: f64,
    density: f64,
    surface_tension: f64,
    gravity: f64,
    bond: f64,
    parameter: &'static str,
    observables: &'a DropObservables,
    #[serde(skip_serializing_if = "Option::is_none")]
    apex_curvature: Option<f64>,
    points: Vec<[f64; 3]>,
}

pub fn profile_samples(
    method: ProfileMethod,
    spec: &DropSpec,
    fluid: &FluidParams,
    samples: usize,
) -> Result<(ProfileSamples, Option<f64>), CliError> {
    Ok(match method {
        ProfileMethod::Sphere => (spherical_profile(&solve_sphere(spec)?, samples)?, None),
        ProfileMethod::Perturbative => (perturbed_profile(spec, fluid, samples)?, None),
        ProfileMethod::Oracle => {
            if samples < 2 {
                return Err(Error::TooFewSamples {
                    got: samples,
                    min: 2,
                }
                .into());
            }
            let sol = shoot_for_volume(spec, fluid, &OracleConfig::default())?;
            (
                sol.profile.resample_arc_length(samples),
                Some(sol.apex_curvature),
            )
        }
    })
}

pub fn run_profile(args: &ProfileArgs) -> Result<Outcome, CliError> {
    let spec = args.drop.spec()?;
    let fluid = FluidParams::new(args.drop.density, args.gamma, args.drop.gravity)?;
    let bond = bond_number(&spec, &fluid);
    let (profile, apex_curvature) = profile_samples(args.method, &spec, &fluid, args.samples)?;
    let mut out = Outcome::default();
    out.warnings.extend(bond_warning(bond, "profile"));

    out.document = match args.format {
        ProfileFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Compute(format!("csv: {e}"));
            w.write_record(["theta_or_s", "rho", "z"]).map_err(io)?;
            for p in &profile.points {
                w.write_record([
                    p.parameter.to_string(),
                    p.radial.to_string(),
                    p.height.to_string(),
                ])
                .map_err(io)?;
            }
            let bytes = w
                .into_inner()
                .map_err(|e| CliError::Compute(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Compute(e.to_string()))?
        }
        ProfileFormat::Json => {
            let doc = ProfileDocument {
                method: args.method,
                volume_cm3: spec.volume(),
                contact_angle_deg: args.drop.angle,
                density: fluid.density(),
                surface_tension: fluid.surface_tension(),
                gravity: fluid.gravity(),
                bond,
                parameter: match args.method {
                    ProfileMethod::Oracle => "arc_length",
                    _ => "polar_angle",
                },
                observables: &profile.observables,
                apex_curvature,
                points: profile
                    .points
                    .iter()
                    .map(|p| [p.parameter, p.radial, p.height])
                    .collect(),
            };
            let mut s =
                serde_json::to_string_pretty(&doc).map_err(|e| CliError::Compute(e.to_string()))?;
            s.push('\n');
            s
        }
        ProfileFormat::Svg => {
            let sphere = spherical_profile(&solve_sphere(&spec)?, args.samples.max(2))?;
            let title = format!(
                "V = {} cm^3, angle = {} deg, g = {} cm/s^2, bond = {:.3}",
                spec.volume(),
                args.drop.angle,
                fluid.gravity(),
                bond
            );
            let mut curves = vec![svg::Curve {
                label: "sphere",
                profile: &sphere,
                stroke: svg::Stroke::Dashed,
                color: "#555555",
            }];
            let label = match args.method {
                ProfileMethod::Sphere => None,
                ProfileMethod::Perturbative => Some("perturbative"),
                ProfileMethod::Oracle => Some("oracle"),
            };
            if let Some(label) = label {
                curves.push(svg::Curve {
                    label,
                    profile: &profile,
                    stroke: svg::Stroke::Solid,
                    color: "#1f5fbf",
                });
            }
            svg::render(&title, &curves)
        }
    };
    Ok(out)
}

// ---------------------------------------------------------------- validate

pub fn run_validate(args: &ValidateArgs) -> Result<Outcome, CliError> {
    let records: Vec<_> = builtin_dataset()
        .into_iter()
        .filter(|r| match args.table {
            TableSelector::Water => r.table == 1,
            TableSelector::Mercury => r.table == 2,
            TableSelector::All => true,
        })
        .collect();
    let rows = compare_all(&records)?;
    let format = match args.format {
        DocFormat::Table => ReportFormat::Table,
        DocFormat::Json => ReportFormat::Json,
        DocFormat::Csv => ReportFormat::Csv,
    };
    let mut out = Outcome {
        document: report::render(&rows, format)?,
        ..Outcome::default()
    };
    for row in &rows {
        out.warnings
            .extend(bond_warning(row.bond, &row.record.label));
        if row.anomaly {
            out.warnings.push(format!(
                "note: {}: measurement lies on the wrong side of the weightless cap",
                row.record.label
            ));
        }
    }
    for check in reproduction_checks(&rows).iter().filter(|c| !c.passes()) {
        out.failed = true;
        let unit = match check.kind {
            CellKind::Value => "cm",
            CellKind::PercentError => "pp",
        };
        out.warnings.push(format!(
            "mismatch: {} {:?} {} {:?}: computed {:.4}, tabulated {}, off by {:.4} {unit} (tolerance {})",
            check.label,
            check.method,
            check.observable.symbol(),
            check.kind,
            check.computed,
            check.published,
            check.deviation(),
            check.tolerance
        ));
    }
    Ok(out)
}

// ---------------------------------------------------------------- sweep

pub fn run_sweep(args: &SweepArgs) -> Result<Outcome, CliError> {
    let spec = args.drop.spec()?;
    let fluid = FluidParams::new(args.drop.density, args.gamma, args.drop.gravity)?;
    if args.scales.is_empty() {
        return Err(CliError::Usage(
            "at least one gravity scale is required".into(),
        ));
    }
    let report = sweep::run(&spec, &fluid, &args.scales, &OracleConfig::default());
    let mut out = Outcome {
        failed: report.failures() > 0,
        ..Outcome::default()
    };
    for row in &report.rows {
        if let Some(msg) = &row.failure {
            out.warnings
                .push(format!("error: scale {}: {msg}", row.gravity_scale));
        }
        if let Some(b) = row.bond {
            out.warnings
                .extend(bond_warning(b, &format!("scale {}", row.gravity_scale)));
        }
    }
    let observables: Vec<Observable> = report.orders.iter().map(|o| o.0).collect();
    out.document = match args.format {
        DocFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Compute(e.to_string()))?;
            s.push('\n');
            s
        }
        DocFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Compute(format!("csv: {e}"));
            let mut header = vec!["gravity_scale".to_string(), "bond".to_string()];
            header.extend(observables.iter().map(|o| format!("rel_err_{}", o.key())));
            header.push("failure".into());
            w.write_record(&header).map_err(io)?;
            for row in &report.rows {
                let mut line = vec![
                    row.gravity_scale.to_string(),
                    row.bond.map(|b| b.to_string()).unwrap_or_default(),
                ];
                for o in &observables {
                    let e = row.errors.iter().find(|(q, _)| q == o).map(|e| e.1);
                    line.push(e.map(|e| e.to_string()).unwrap_or_default());
                }
                line.push(row.failure.clone().unwrap_or_default());
                w.write_record(&line).map_err(io)?;
            }
            let mut order = vec!["order".to_string(), String::new()];
            for (_, fitted) in &report.orders {
                order.push(fitted.map(|v| v.to_string()).unwrap_or_default());
            }
            order.push(String::new());
            w.write_record(&order).map_err(io)?;
            let bytes = w
                .into_inner()
                .map_err(|e| CliError::Compute(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Compute(e.to_string()))?
        }
        DocFormat::Table => {
            let mut s = format!("{:>8} {:>8}", "g scale", "bond");
            for o in &observables {
                let _ = write!(s, " {:>12}", format!("err {}", o.symbol()));
            }
            s.push('\n');
            for row in &report.rows {
                let bond = row.bond.map_or("--".into(), |b| format!("{b:.4}"));
                let _ = write!(s, "{:>8} {bond:>8}", row.gravity_scale);
                if row.failure.is_some() {
                    s.push_str("  failed\n");
                    continue;
                }
                for o in &observables {
                    let e = row.errors.iter().find(|(q, _)| q == o).map(|e| e.1);
                    let _ = write!(s, " {:>12}", e.map_or("--".into(), |e| format!("{e:.3e}")));
                }
                s.push('\n');
            }
            let _ = write!(s, "{:>8} {:>8}", "order", "");
            for (_, fitted) in &report.orders {
                let _ = write!(
                    s,
                    " {:>12}",
                    fitted.map_or("--".into(), |v| format!("{v:.3}"))
                );
            }
            s.push('\n');
            s
        }
    };
    Ok(out)
}

// ---------------------------------------------------------------- fit

pub fn fit_request(args: &FitArgs) -> Result<fit::FitRequest, CliError> {
    let mut measured = ObservableMap::new();
    for (o, v) in [
        (Observable::ContactRadius, args.rho0),
        (Observable::EquatorialRadius, args.rho1),
        (Observable::ApexHeight, args.height),
        (Observable::ApexToEquator, args.apex_to_equator),
    ] {
        if let Some(v) = v {
            measured.insert(o, v);
        }
    }
    Ok(fit::FitRequest {
        spec: args.drop.spec()?,
        density: args.drop.density,
        gravity: args.drop.gravity,
        measured,
        bracket: (args.gamma_min, args.gamma_max),
        config: OracleConfig::default(),
    })
}

pub fn run_fit(args: &FitArgs) -> Result<Outcome, CliError> {
    let req = fit_request(args)?;
    let result = fit::fit_surface_tension(&req)?;
    let mut out = Outcome::default();
    out.warnings.extend(bond_warning(result.bond, "fit"));
    out.document = match args.format {
        DocFormat::Json => {
            let mut s = serde_json::to_string_pretty(&result)
                .map_err(|e| CliError::Compute(e.to_string()))?;
            s.push('\n');
            s
        }
        DocFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::Compute(format!("csv: {e}"));
            w.write_record([
                "surface_tension",
                "residual",
                "bond",
                "perturbative_estimate",
                "perturbative_residual",
                "sphere_residual",
                "oracle_evaluations",
            ])
            .map_err(io)?;
            w.write_record([
                result.surface_tension.to_string(),
                result.residual.to_string(),
                result.bond.to_string(),
                result.perturbative_estimate.to_string(),
                result.perturbative_residual.to_string(),
                result.sphere_residual.to_string(),
                result.oracle_evaluations.to_string(),
            ])
            .map_err(io)?;
            let bytes = w
                .into_inner()
                .map_err(|e| CliError::Compute(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Compute(e.to_string()))?
        }
        DocFormat::Table => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "surface tension       {:.4} dyn/cm",
                result.surface_tension
            );
            let _ = writeln!(s, "residual              {:.6e}", result.residual);
            let _ = writeln!(s, "bond number           {:.4}", result.bond);
            let _ = writeln!(
                s,
                "first-order estimate  {:.4} dyn/cm",
                result.perturbative_estimate
            );
            let _ = writeln!(
                s,
                "first-order residual  {:.6e}",
                result.perturbative_residual
            );
            let _ = writeln!(s, "sphere residual       {:.6e}", result.sphere_residual);
            let _ = writeln!(s, "oracle evaluations    {}", result.oracle_evaluations);
            for (o, v) in result.predicted.present() {
                if let Some(m) = req.measured.get(&o) {
                    let _ = writeln!(s, "  {:<4} measured {m:.4}  fitted {v:.4}", o.symbol());
                }
            }
            s
        }
    };
    Ok(out)
}

// ---------------------------------------------------------------- output

pub fn run(cli: &Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    match &cli.command {
        Command::Profile(a) => Ok((run_profile(a)?, a.output.clone())),
        Command::Validate(a) => Ok((run_validate(a)?, a.output.clone())),
        Command::Sweep(a) => Ok((run_sweep(a)?, a.output.clone())),
        Command::Fit(a) => Ok((run_fit(a)?, a.output.clone())),
    }
}

/// Resolves relative output paths against `$SESSILE_OUTPUT_DIR` when set.
pub fn resolve_output(path: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(path),
        _ => path.to_path_buf(),
    }
}

/// Writes `contents` to `path` through a temporary file in the same
/// directory followed by a rename.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn write_document(outcome: &Outcome, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => write_atomic(&resolve_output(p), &outcome.document)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(outcome.document.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = run(&cli).and_then(|(outcome, path)| {
        write_document(&outcome, path.as_deref())?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("{w}");
            }
            if outcome.failed {
                EXIT_FAILURE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
