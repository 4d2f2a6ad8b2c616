use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nleg::config::RunConfig;
use nleg::error::{SuiteError, SuiteResult};
use nleg::report;
use nleg::suite::{self, ResidualReport};
use nleg_core::frame::{group_frame, sample_points};
use nleg_core::lagrangian::{evaluate_model, profile, weitzenbock_invariants};
use nleg_core::lie::{catalog, describe, is_semisimple, killing_form, CATALOG_NAMES, SEMISIMPLE_TOL};
use nleg_core::teleparallel::{dirac_einstein_metric, frame_torsion, killing_tensor};
use nleg_core::tensor::DEFAULT_ZERO_TOL;
use nleg_core::BilinearForm;

/// Vacuum solutions of GL(n,R)-invariant n-leg field theories.
///
/// Exit status: 0 pass, 1 verification failure, 2 usage or configuration
/// error.
#[derive(Debug, Parser)]
#[command(name = "nleg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List catalogued Lie algebras with dimension, semisimplicity and
    /// Killing-form signature.
    Catalog { name: Option<String> },
    /// Run a theorem suite and write a JSON report (plus a per-point CSV).
    Verify {
        theorem: Theorem,
        #[command(flatten)]
        run: RunArgs,
    },
    /// CSV of J1, J2, J3, model density and signature of γ at sample points
    /// of a group frame. J's use the Killing form as internal metric, or the
    /// identity when the algebra is not semisimple.
    Invariants {
        #[command(flatten)]
        run: RunArgs,
    },
    /// CSV of the static Born-Infeld radial profile f(r) on [0, r-max].
    Profile {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 1.0)]
        b: f64,
        #[arg(long = "r-max", default_value_t = 5.0)]
        r_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Theorem {
    /// Semisimple group frames.
    Theorem1,
    /// Deformed central extensions R x G.
    Theorem2,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Flat JSON file with the same keys as the flags (fd_step for
    /// --fd-step); flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    algebra: Option<String>,
    /// gl, quadratic or hilbert.
    #[arg(long)]
    family: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c2: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    c3: Option<f64>,
    /// η_00 for the Dirac-Einstein metric of deformed frames.
    #[arg(long, allow_negative_numbers = true)]
    beta: Option<f64>,
    /// exp (e^τ), exp2 (e^{2τ}) or affine (1 + τ/2 on τ ∈ [0, 1]).
    #[arg(long)]
    rho: Option<String>,
    /// e or e-prime.
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long = "fd-step")]
    fd_step: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(self) -> SuiteResult<RunConfig> {
        let file = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            algebra: self.algebra,
            family: self.family,
            lambda: self.lambda,
            mu: self.mu,
            nu: self.nu,
            c1: self.c1,
            c2: self.c2,
            c3: self.c3,
            beta: self.beta,
            rho: self.rho,
            variant: self.variant,
            points: self.points,
            seed: self.seed,
            radius: self.radius,
            fd_step: self.fd_step,
            tol: self.tol,
            out: self.out,
        };
        Ok(file.overlay(flags))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> SuiteResult<ExitCode> {
    match command {
        Command::Catalog { name } => cmd_catalog(name.as_deref()),
        Command::Verify { theorem, run } => cmd_verify(theorem, run.resolve()?),
        Command::Invariants { run } => cmd_invariants(run.resolve()?),
        Command::Profile {
            a,
            b,
            r_max,
            steps,
            out,
        } => cmd_profile(a, b, r_max, steps, out),
    }
}

fn cmd_catalog(name: Option<&str>) -> SuiteResult<ExitCode> {
    let names: Vec<&str> = match name {
        Some(n) => vec![n],
        None => CATALOG_NAMES.to_vec(),
    };
    let mut rows = Vec::new();
    for n in names {
        let (dim, semisimple, sig) = describe(n)?;
        rows.push(format!(
            "{n:<22}{dim:>4}  {:<11}{sig}",
            if semisimple { "semisimple" } else { "-" }
        ));
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "{:<22}{:>4}  {:<11}killing", "name", "dim", "type")?;
    for r in rows {
        writeln!(out, "{r}")?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(theorem: Theorem, cfg: RunConfig) -> SuiteResult<ExitCode> {
    let algebra = cfg.algebra()?.to_string();
    let sampling = cfg.sampling()?;
    let sc = catalog(&algebra)?;
    let report = match theorem {
        Theorem::Theorem1 => {
            let spec = cfg.model(|| killing_form(&sc))?;
            suite::verify_theorem1(&algebra, &spec, &sampling)?
        }
        Theorem::Theorem2 => {
            let spec = cfg.model(|| BilinearForm::time_plus_spatial(cfg.beta(), &killing_form(&sc)))?;
            suite::verify_theorem2(&algebra, &cfg.rho()?, cfg.variant()?, &spec, &sampling)?
        }
    };
    match &cfg.out {
        Some(path) => {
            if path.extension().is_some_and(|e| e == "csv") {
                return Err(SuiteError::Config(
                    "--out names the JSON report; the CSV is written beside it".into(),
                ));
            }
            let csv = report::write_report(&report, path)?;
            eprintln!("wrote {} and {}", path.display(), csv.display());
        }
        None => print!("{}", report::to_json(&report)?),
    }
    eprintln!("{}", summary(&report));
    Ok(if report.overall().passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn summary(r: &ResidualReport) -> String {
    let max = r.max_residual().map_or("n/a".to_string(), |m| format!("{m:.3e}"));
    let sig = r
        .signature
        .iter()
        .flatten()
        .next()
        .map_or("n/a".to_string(), |s| format!("({},{},{})", s[0], s[1], s[2]));
    format!(
        "{}: {:?} (max residual {max} over {} points, {} degenerate, tolerance {:e}, signature {sig})",
        r.frame,
        r.overall(),
        r.points.len(),
        r.degenerate_count(),
        r.metadata.tolerance
    )
}

fn output(path: &Option<PathBuf>) -> SuiteResult<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::io::BufWriter::new(std::fs::File::create(p)?)),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn cmd_invariants(cfg: RunConfig) -> SuiteResult<ExitCode> {
    let algebra = cfg.algebra()?;
    let sampling = cfg.sampling()?;
    let sc = catalog(algebra)?;
    let eta = if is_semisimple(&sc, SEMISIMPLE_TOL) {
        killing_form(&sc)
    } else {
        BilinearForm::identity(sc.dim())
    };
    let spec = cfg.model(|| eta.clone())?;
    let frame = group_frame(&sc, sampling.radius)?.with_fd_step(sampling.fd_step);
    let mut w = report::csv_writer(output(&cfg.out)?);
    let n = sc.dim();
    let mut header: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    header.extend(["j1", "j2", "j3", "density", "signature"].map(String::from));
    w.write_record(&header)?;
    for x in sample_points(frame.chart(), sampling.count, sampling.seed) {
        let (fp, _, tp) = frame_torsion(&frame, &x)?;
        let h = dirac_einstein_metric(&fp, &eta)?;
        let j = weitzenbock_invariants(&tp, &h)?;
        let density = evaluate_model(&spec, &tp, &fp)?.density;
        let sig = killing_tensor(&tp).g.signature(DEFAULT_ZERO_TOL)?;
        let mut row: Vec<String> = x.iter().map(|c| c.to_string()).collect();
        row.extend(j.iter().map(|v| format!("{v:e}")));
        row.push(format!("{density:e}"));
        row.push(format!("{};{};{}", sig.plus, sig.minus, sig.zero));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_profile(a: f64, b: f64, r_max: f64, steps: usize, out: Option<PathBuf>) -> SuiteResult<ExitCode> {
    if steps == 0 || !(r_max > 0.0 && r_max.is_finite()) {
        return Err(SuiteError::Config("profile needs steps > 0 and r-max > 0".into()));
    }
    let mut w = report::csv_writer(output(&out)?);
    w.write_record(["r", "f"])?;
    for k in 0..=steps {
        let r = r_max * k as f64 / steps as f64;
        let f = profile::radial_profile(a, b, r)?;
        w.write_record([r.to_string(), format!("{f:.15e}")])?;
    }
    w.flush()?;
    Ok(ExitCode::SUCCESS)
}
