//! Command-line front end: evaluation, verification suites and sweeps.
//!
//! Exit codes: 0 when everything requested succeeded and every gated check
//! passed, 1 when a gated check or an evaluation failed, 2 for usage and
//! configuration errors.

pub mod report;
pub mod settings;
pub mod sweep;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::circle::{spectrum, Prepotential};
use crate::series::{phi_direct, RealOrder};
use report::{Cell, Format, Report};
use settings::Settings;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "bessel-ladder",
    version,
    about = "Reduced Bessel functions, their ladder and order deformation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate φ_ν(z) = J_ν(z)/z^ν.
    Phi,
    /// Deform integer orders n by λ and compare with φ_(n+λ).
    Deform,
    /// Run a verification suite.
    Verify {
        /// ladder, unify, gen-eigen, alternating-sum, gen-deform, d-lambda,
        /// weights, circle or all
        #[arg(default_value = "all")]
        suite: String,
    },
    /// Evaluate a grid and emit one row per point.
    Sweep {
        /// deform, spectrum or d-lambda
        target: String,
    },
    /// Eigenvalues of the perturbed winding operator.
    Spectrum,
}

/// Shared flags. List-valued flags take comma-separated values.
#[derive(Debug, Default, Args)]
pub struct Options {
    /// Orders ν for `phi`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub order: Option<String>,
    /// Integer orders n.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub n: Option<String>,
    /// Deformation parameters λ.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Arguments z.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Angles θ (t = e^(iθ)).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Deformation window W (also the m-cut of the Taylor route).
    #[arg(long, global = true)]
    pub window: Option<String>,
    /// Taylor order P.
    #[arg(long = "taylor-order", global = true)]
    pub taylor_order: Option<String>,
    /// fourier-weights or taylor-operator.
    #[arg(long, global = true)]
    pub strategy: Option<String>,
    /// Fourier mode cutoffs M.
    #[arg(long, global = true)]
    pub modes: Option<String>,
    /// partial, abel or cesaro.
    #[arg(long, global = true)]
    pub summation: Option<String>,
    /// Abel parameter r in (0, 1).
    #[arg(long = "abel-r", global = true)]
    pub abel_r: Option<String>,
    /// Override every gated tolerance.
    #[arg(long, global = true)]
    pub tolerance: Option<String>,
    /// csv, json or plain.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// key=value file; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// Prepotential: bessel, smooth or cosine.
    #[arg(long, global = true)]
    pub rho: Option<String>,
}

impl Options {
    fn settings(&self) -> Result<Settings, CliError> {
        let mut s = match &self.config {
            Some(path) => Settings::load(path)?,
            None => Settings::default(),
        };
        let flags = [
            ("order", &self.order),
            ("n", &self.n),
            ("lambda", &self.lambda),
            ("z", &self.z),
            ("theta", &self.theta),
            ("window", &self.window),
            ("taylor-order", &self.taylor_order),
            ("strategy", &self.strategy),
            ("modes", &self.modes),
            ("summation", &self.summation),
            ("abel-r", &self.abel_r),
            ("tolerance", &self.tolerance),
            ("format", &self.format),
            ("out", &self.out),
            ("rho", &self.rho),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                s.set(k, v.clone());
            }
        }
        Ok(s)
    }
}

/// Prepotential constructor selected by `--rho`.
pub fn prepotential_kind(settings: &Settings) -> Result<fn(usize) -> Prepotential, CliError> {
    match settings.raw("rho").unwrap_or("bessel") {
        "bessel" => Ok(Prepotential::bessel),
        "smooth" => Ok(Prepotential::smooth),
        "cosine" => Ok(Prepotential::cosine),
        other => Err(CliError::Usage(format!(
            "unknown prepotential '{other}' (bessel, smooth, cosine)"
        ))),
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn meta(rep: &mut Report, command: &str, settings: &Settings) {
    let mut m = vec![("command".to_string(), Cell::from(command))];
    m.extend(
        settings
            .iter()
            .filter(|(k, _)| k.as_str() != "out" && k.as_str() != "format")
            .map(|(k, v)| (k.clone(), Cell::from(v.clone()))),
    );
    // verify sets its own command/suite entries first
    for (k, v) in m {
        if !rep.meta.iter().any(|(x, _)| *x == k) {
            rep.meta.push((k, v));
        }
    }
}

/// Build the report for a parsed command line; the bool is false when a
/// gated check or an evaluation failed.
pub fn execute(cli: &Cli) -> Result<(Report, Format, Option<String>, bool), CliError> {
    let settings = cli.options.settings()?;
    let format: Format = settings.parsed("format", Format::Csv)?;
    let out = settings.raw("out").map(str::to_string);
    let (mut rep, ok, name) = match &cli.command {
        Command::Phi => {
            let orders = settings.reals("order", &[0.0])?;
            let zs = settings.reals("z", &[1.0])?;
            let mut rep = Report::new(&["order", "z", "phi"]);
            for &nu in &orders {
                let order = RealOrder::new(nu).map_err(usage)?;
                for &z in &zs {
                    let v = phi_direct(order, z).map_err(usage)?;
                    rep.push(vec![nu.into(), z.into(), v.into()]);
                }
            }
            (rep, true, "phi")
        }
        Command::Deform => {
            let (rep, ok) = sweep::deform_rows(&settings, &[0.5])?;
            (rep, ok, "deform")
        }
        Command::Spectrum => {
            let ls = settings.reals("lambda", &[0.0])?;
            let ms = settings.integers("modes", &[4])?;
            let rho = prepotential_kind(&settings)?;
            let mut rep = Report::new(&["lambda", "modes", "index", "eigenvalue"]);
            for &l in &ls {
                for &m in &ms {
                    if m < 0 {
                        return Err(CliError::Usage("--modes must be non-negative".into()));
                    }
                    let m = m as usize;
                    let eig = spectrum(&rho(m), l, m).map_err(usage)?;
                    for (i, e) in eig.into_iter().enumerate() {
                        rep.push(vec![l.into(), m.into(), i.into(), e.into()]);
                    }
                }
            }
            (rep, true, "spectrum")
        }
        Command::Verify { suite } => {
            let suite: verify::Suite = suite.parse().map_err(CliError::Usage)?;
            let cases = verify::run_suite(suite, &settings)?;
            (
                verify::report(suite, &cases),
                verify::all_passed(&cases),
                "verify",
            )
        }
        Command::Sweep { target } => {
            let target: sweep::Target = target.parse().map_err(CliError::Usage)?;
            match target {
                sweep::Target::Deform => {
                    let (rep, ok) = sweep::deform_rows(&settings, &[0.0, 0.5, 1.0])?;
                    (rep, ok, "sweep")
                }
                sweep::Target::Spectrum => (sweep::spectrum_wide(&settings)?, true, "sweep"),
                sweep::Target::DLambda => (sweep::d_lambda_rows(&settings)?, true, "sweep"),
            }
        }
    };
    meta(&mut rep, name, &settings);
    Ok((rep, format, out, ok))
}

/// Parse `args`, run, write the report, and return the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(stderr, "{e}")
            } else {
                write!(stdout, "{e}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
        Ok((rep, format, out, ok)) => {
            let text = rep.render(format);
            let written = match out {
                Some(path) => std::fs::write(&path, text),
                None => stdout.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                return 2;
            }
            if ok {
                0
            } else {
                1
            }
        }
    }
}
