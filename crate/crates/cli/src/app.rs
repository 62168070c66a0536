//! Command definitions and execution.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qpt_core::{
    constraint_report, diagnose_leakage, fit, hadamard_chi, leakage_chi, linear_inversion, perturb, polarizer_chi,
    FitMode, FitOptions, FitStatus, Hermitian, LeakageModelParams, NoiseSpec, ProcessMatrix,
};

use crate::document::{read_pairs, read_process_input, DocumentError, Kind, MatrixDocument};
use crate::report::{text_summary, DiagnosisJson, FitJson, ReportJson};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONSTRAINT: i32 = 3;
pub const EXIT_NOT_CONVERGED: i32 = 4;
pub const EXIT_RANK_DEFICIENT: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "qpt",
    version,
    about = "Single-qubit process matrices: generate, check, perturb, fit, diagnose, reconstruct"
)]
pub struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Tolerance for physicality and constraint checks.
    #[arg(long, global = true, default_value_t = qpt_core::DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for commands that draw random numbers.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Emit the exact χ of a canonical channel.
    Gen {
        #[command(subcommand)]
        channel: Channel,
    },
    /// Report constraint values; exit 3 unless PSD and the general bounds hold.
    Check(InputArg),
    /// Add seeded Hermitian Gaussian noise (requires --seed).
    Noise {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        scale: f64,
    },
    /// Project onto the nearest physical χ in Frobenius norm.
    Fit {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(long, default_value_t = FitOptions::default().max_iterations)]
        max_iterations: usize,
        #[arg(long, default_value_t = FitOptions::default().convergence_tol)]
        convergence_tol: f64,
    },
    /// Classify a loss process and estimate its parameters.
    Diagnose(InputArg),
    /// Linear inversion from four probe input/output pairs.
    Reconstruct {
        /// JSON array of four {input, output} density documents.
        pairs: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// Input document; stdin when omitted or `-`.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Channel {
    Hadamard,
    Polarizer {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
    },
    Leakage {
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        /// x, y, z or a direction `nx,ny,nz` (normalized).
        #[arg(long, default_value = "z", value_parser = parse_axis, allow_negative_numbers = true)]
        axis: [f64; 3],
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Tp,
    General,
}

fn parse_axis(s: &str) -> Result<[f64; 3], String> {
    let v = match s {
        "x" => [1.0, 0.0, 0.0],
        "y" => [0.0, 1.0, 0.0],
        "z" => [0.0, 0.0, 1.0],
        _ => {
            let parts: Vec<f64> = s
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
                .collect::<Result<_, _>>()?;
            <[f64; 3]>::try_from(parts).map_err(|_| "expected x, y, z or nx,ny,nz".to_owned())?
        }
    };
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return Err("axis must be a finite nonzero vector".into());
    }
    Ok(v.map(|x| x / norm))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write output: {0}")]
    Write(#[from] std::io::Error),
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error(transparent)]
    Core(#[from] qpt_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(qpt_core::Error::RankDeficient { .. })
            | CliError::Document(DocumentError::Core(qpt_core::Error::RankDeficient { .. })) => EXIT_RANK_DEFICIENT,
            _ => EXIT_USAGE,
        }
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
    out: Option<&'a Path>,
}

impl Io<'_> {
    fn read(&mut self, path: Option<&Path>) -> Result<String, CliError> {
        let mut text = String::new();
        match path {
            None => self.stdin.read_to_string(&mut text).map(|_| ()),
            Some(p) if p == Path::new("-") => self.stdin.read_to_string(&mut text).map(|_| ()),
            Some(p) => std::fs::read_to_string(p).map(|t| text = t),
        }
        .map_err(|source| CliError::Read { path: path.map_or("stdin".into(), |p| p.display().to_string()), source })?;
        Ok(text)
    }

    fn emit(&mut self, json: &str) -> Result<(), CliError> {
        match self.out {
            Some(path) => std::fs::write(path, format!("{json}\n"))?,
            None => writeln!(self.stdout, "{json}")?,
        }
        Ok(())
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports always serialize")
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return e.exit_code();
        }
    };
    let mut io = Io { stdin, stdout, stderr, out: cli.out.as_deref() };
    match execute(&cli, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli, io: &mut Io<'_>) -> Result<i32, CliError> {
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive and finite".into()));
    }
    match &cli.command {
        Command::Gen { channel } => {
            io.emit(&generate(channel)?.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Check(input) => {
            let (_, m) = read_process_input(&io.read(input.input.as_deref())?)?;
            let report = constraint_report(&m, cli.tol);
            io.emit(&to_json(&ReportJson::new(&report)))?;
            write!(io.stderr, "{}", text_summary(&report))?;
            Ok(if report.physical() { EXIT_OK } else { EXIT_CONSTRAINT })
        }
        Command::Noise { input, scale } => {
            let seed = cli.seed.ok_or_else(|| CliError::Usage("noise requires --seed".into()))?;
            let spec = NoiseSpec::new(seed, *scale).map_err(|e| CliError::Usage(e.to_string()))?;
            let (doc, m) = read_process_input(&io.read(input.input.as_deref())?)?;
            let noisy = perturb(&Hermitian::new(m)?, &spec);
            let mut out = MatrixDocument::from_matrix(doc.kind, noisy.matrix());
            out.metadata = doc.metadata;
            let out = out.with_meta("seed", seed).with_meta("scale", scale);
            io.emit(&out.to_json())?;
            Ok(EXIT_OK)
        }
        Command::Fit { input, mode, max_iterations, convergence_tol } => {
            let (doc, m) = read_process_input(&io.read(input.input.as_deref())?)?;
            let opts = FitOptions {
                max_iterations: *max_iterations,
                convergence_tol: *convergence_tol,
                constraint_tol: cli.tol,
            };
            let (mode, mode_name) = match mode {
                ModeArg::Tp => (FitMode::TracePreserving, "tp"),
                ModeArg::General => (FitMode::General, "general"),
            };
            let result = fit(&m, mode, &opts).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut chi_fit = MatrixDocument::from_matrix(Kind::Chi, result.chi_fit.matrix());
            chi_fit.metadata = doc.metadata;
            let chi_fit = chi_fit.with_meta("source", "fit").with_meta("mode", mode_name);
            io.emit(&to_json(&FitJson::new(&result, chi_fit)))?;
            if result.status == FitStatus::MaxIterations {
                writeln!(io.stderr, "fit did not converge in {} iterations", result.iterations)?;
                return Ok(EXIT_NOT_CONVERGED);
            }
            Ok(EXIT_OK)
        }
        Command::Diagnose(input) => {
            let (_, m) = read_process_input(&io.read(input.input.as_deref())?)?;
            let chi = ProcessMatrix::new(Hermitian::from_symmetrized(&m)?);
            let d = diagnose_leakage(&chi, cli.tol);
            io.emit(&to_json(&DiagnosisJson::from(&d)))?;
            Ok(EXIT_OK)
        }
        Command::Reconstruct { pairs } => {
            let pairs = read_pairs(&io.read(Some(pairs))?)?;
            let inv = linear_inversion(&pairs)?;
            let report = constraint_report(inv.chi.matrix(), cli.tol);
            let doc = MatrixDocument::from_matrix(Kind::Chi, inv.chi.matrix())
                .with_meta("source", "reconstruct")
                .with_meta("trace", inv.chi.trace())
                .with_meta("asymmetry", inv.asymmetry)
                .with_meta("pivot_ratio", inv.pivot_ratio)
                .with_meta("unphysical", !report.physical());
            if !report.physical() {
                writeln!(io.stderr, "warning: reconstructed chi is not physical at tol {:e}", cli.tol)?;
            }
            io.emit(&doc.to_json())?;
            Ok(EXIT_OK)
        }
    }
}

fn generate(channel: &Channel) -> Result<MatrixDocument, CliError> {
    let usage = |e: qpt_core::Error| CliError::Usage(e.to_string());
    let doc = match channel {
        Channel::Hadamard => {
            MatrixDocument::from_matrix(Kind::Chi, hadamard_chi().matrix()).with_meta("channel", "hadamard")
        }
        Channel::Polarizer { theta } => {
            if !theta.is_finite() {
                return Err(CliError::Usage("--theta must be finite".into()));
            }
            MatrixDocument::from_matrix(Kind::Chi, polarizer_chi(*theta).matrix())
                .with_meta("channel", "polarizer")
                .with_meta("theta", theta)
        }
        Channel::Leakage { p, epsilon, axis } => {
            let params = LeakageModelParams::new(*p, *epsilon, *axis).map_err(usage)?;
            let chi = leakage_chi(&params).map_err(usage)?;
            MatrixDocument::from_matrix(Kind::Chi, chi.matrix())
                .with_meta("channel", "leakage")
                .with_meta("p", p)
                .with_meta("epsilon", epsilon)
                .with_meta("axis", format!("{},{},{}", axis[0], axis[1], axis[2]))
        }
    };
    Ok(doc.with_meta("source", "gen"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_parsing() {
        assert_eq!(parse_axis("y").unwrap(), [0.0, 1.0, 0.0]);
        let a = parse_axis("3,0,-4").unwrap();
        assert!((a[0] - 0.6).abs() < 1e-15 && (a[2] + 0.8).abs() < 1e-15);
        assert!(parse_axis("0,0,0").is_err());
        assert!(parse_axis("1,2").is_err());
        assert!(parse_axis("w").is_err());
    }
}
