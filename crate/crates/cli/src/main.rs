use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use afe_core::afe::{afe_sharp, afe_smoothed, default_smoothing_order, AfeOptions, AfeResult};
use afe_core::chi::{chi_derivatives, chi_log_ratios};
use afe_core::oracle::{calibrate, residual_suite, scan, SuiteConfig};
use afe_core::{AfeError, Descriptor, SelbergDatum, SmoothingFunction};

#[derive(Parser)]
#[command(name = "afe", version, about = "Approximate functional equations for F^(m)(s)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate F^(m)(s) by the sharp or smoothed equation.
    Eval(EvalArgs),
    /// χ_F^(r)(s) and (χ^(r)/χ)(s) for r = 0..=r.
    Chi(ChiArgs),
    /// Run the verification suite, or measure the budget constants.
    Verify(VerifyArgs),
    /// Residual and budget terms along a range of t.
    Scan(ScanArgs),
    /// Print the Dirichlet coefficients a(1..=n_max).
    Coeffs(CoeffsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Sharp,
    Smoothed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(clap::Args)]
struct EvalArgs {
    /// Built-in label (zeta, delta, rankin_selberg_delta) or descriptor path.
    #[arg(long, default_value = "zeta")]
    datum: String,
    #[arg(long, default_value_t = 0)]
    m: u32,
    #[arg(long, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, value_enum, default_value = "sharp")]
    mode: Mode,
    /// Smoothing order; defaults to floor(M_F) + 1.
    #[arg(long)]
    l: Option<usize>,
    /// Narrow the cutoff to φ_α with transition width |t|^{-α}.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    y_split: f64,
    #[arg(long, value_enum, default_value = "csv")]
    output: Format,
}

#[derive(clap::Args)]
struct ChiArgs {
    #[arg(long, default_value = "zeta")]
    datum: String,
    #[arg(long, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, value_enum, default_value = "csv")]
    output: Format,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, default_value = "zeta")]
    datum: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report file (or calibration file with --calibrate); stdout if absent.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    calibrate: bool,
    #[arg(long, hide = true)]
    corrupt_chi: bool,
}

#[derive(clap::Args)]
struct ScanArgs {
    #[arg(long, default_value = "zeta")]
    datum: String,
    #[arg(long, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, default_value_t = 0)]
    m: u32,
    /// Comma-separated t values (at least 4).
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "50,100,200,400,800")]
    t: Vec<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    output: Format,
}

#[derive(clap::Args)]
struct CoeffsArgs {
    #[arg(long, default_value = "zeta")]
    datum: String,
    #[arg(long, default_value_t = 20)]
    n_max: usize,
    #[arg(long, value_enum, default_value = "csv")]
    output: Format,
}

#[derive(Serialize)]
struct EvalRow {
    label: String,
    sigma: f64,
    t: f64,
    m: u32,
    mode: &'static str,
    value_re: f64,
    value_im: f64,
    main_sum_1_re: f64,
    main_sum_1_im: f64,
    main_sum_2_re: f64,
    main_sum_2_im: f64,
    correction_re: f64,
    correction_im: f64,
    error_estimate: f64,
    quadrature_error: f64,
    y1: f64,
    y2: f64,
}

impl EvalRow {
    fn new(label: &str, s: Complex64, m: u32, r: &AfeResult) -> Self {
        Self {
            label: label.to_string(),
            sigma: s.re,
            t: s.im,
            m,
            mode: r.mode.name(),
            value_re: r.value.re,
            value_im: r.value.im,
            main_sum_1_re: r.main_sum_1.re,
            main_sum_1_im: r.main_sum_1.im,
            main_sum_2_re: r.main_sum_2.re,
            main_sum_2_im: r.main_sum_2.im,
            correction_re: r.correction.re,
            correction_im: r.correction.im,
            error_estimate: r.error_estimate,
            quadrature_error: r.quadrature_error,
            y1: r.cutoffs.0,
            y2: r.cutoffs.1,
        }
    }
}

#[derive(Serialize)]
struct ChiRow {
    label: String,
    sigma: f64,
    t: f64,
    r: usize,
    value_re: f64,
    value_im: f64,
    log_ratio_re: f64,
    log_ratio_im: f64,
}

#[derive(Serialize)]
struct CoeffRow {
    n: usize,
    re: f64,
    im: f64,
}

enum Failure {
    Afe(AfeError),
    Usage(String),
    VerifyFailed,
}

impl From<AfeError> for Failure {
    fn from(e: AfeError) -> Self {
        Failure::Afe(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Afe(AfeError::Io(e))
    }
}

fn load_datum(reference: &str) -> Result<SelbergDatum, AfeError> {
    if let Some(d) = SelbergDatum::builtin(reference) {
        return Ok(d);
    }
    let path = Path::new(reference);
    if path.exists() {
        return Descriptor::load(path);
    }
    Err(AfeError::Argument(format!(
        "unknown datum `{reference}`: not a built-in label ({}) or an existing descriptor file",
        SelbergDatum::BUILTIN_LABELS.join(", ")
    )))
}

fn emit<T: Serialize, W: Write>(rows: &[T], format: Format, mut out: W) -> Result<(), Failure> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for row in rows {
                w.serialize(row).map_err(csv_failure)?;
            }
            w.flush()?;
        }
        Format::Json => {
            serde_json::to_writer(&mut out, rows).map_err(|e| Failure::Afe(AfeError::Io(e.into())))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn csv_failure(e: csv::Error) -> Failure {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Failure::Afe(AfeError::Io(io)),
        other => Failure::Afe(AfeError::Parse(format!("{other:?}"))),
    }
}

fn stdout() -> BufWriter<io::StdoutLock<'static>> {
    BufWriter::new(io::stdout().lock())
}

fn cmd_eval(a: EvalArgs) -> Result<(), Failure> {
    let datum = load_datum(&a.datum)?;
    let s = Complex64::new(a.sigma, a.t);
    let opts = AfeOptions::default().with_split(a.y_split);
    let result = match a.mode {
        Mode::Sharp => {
            if a.l.is_some() || a.alpha.is_some() {
                return Err(Failure::Usage("--l and --alpha apply to --mode smoothed only".into()));
            }
            afe_sharp(&datum, s, a.m, &opts)?
        }
        Mode::Smoothed => {
            let base = SmoothingFunction::base_bump();
            let phi = match a.alpha {
                Some(alpha) => base.phi_alpha(alpha, a.t)?,
                None => base,
            };
            let l = a.l.unwrap_or_else(|| default_smoothing_order(&datum, a.m));
            afe_smoothed(&datum, s, a.m, &phi, l, &opts)?
        }
    };
    emit(&[EvalRow::new(datum.label(), s, a.m, &result)], a.output, stdout())
}

fn cmd_chi(a: ChiArgs) -> Result<(), Failure> {
    let datum = load_datum(&a.datum)?;
    let s = Complex64::new(a.sigma, a.t);
    let values = chi_derivatives(&datum, s, a.r)?;
    let ratios = chi_log_ratios(&datum, s, a.r)?;
    let rows: Vec<ChiRow> = values
        .iter()
        .zip(&ratios)
        .enumerate()
        .map(|(r, (v, q))| ChiRow {
            label: datum.label().to_string(),
            sigma: a.sigma,
            t: a.t,
            r,
            value_re: v.re,
            value_im: v.im,
            log_ratio_re: q.re,
            log_ratio_im: q.im,
        })
        .collect();
    emit(&rows, a.output, stdout())
}

fn cmd_verify(a: VerifyArgs) -> Result<(), Failure> {
    if a.calibrate {
        let cal = calibrate(AfeOptions::default().calibration.epsilon)?;
        let text = cal.to_toml();
        match &a.output {
            Some(path) => std::fs::write(path, text)?,
            None => stdout().write_all(text.as_bytes())?,
        }
        return Ok(());
    }
    let datum = load_datum(&a.datum)?;
    let mut cfg = SuiteConfig { seed: a.seed, ..SuiteConfig::default() };
    if a.corrupt_chi {
        cfg.options.chi_scale = 2.0;
    }
    let report = residual_suite(&datum, &cfg);
    match &a.output {
        Some(path) => {
            let file = BufWriter::new(File::create(path)?);
            emit(&report.rows, a.format, file)?;
        }
        None => emit(&report.rows, a.format, stdout())?,
    }
    if report.all_pass() {
        Ok(())
    } else {
        Err(Failure::VerifyFailed)
    }
}

fn cmd_scan(a: ScanArgs) -> Result<(), Failure> {
    let datum = load_datum(&a.datum)?;
    let rows = scan(&datum, a.sigma, a.m, &a.t, &AfeOptions::default())?;
    emit(&rows, a.output, stdout())
}

fn cmd_coeffs(a: CoeffsArgs) -> Result<(), Failure> {
    let datum = load_datum(&a.datum)?;
    if a.n_max == 0 {
        return Err(Failure::Usage("--n-max must be at least 1".into()));
    }
    let rows: Vec<CoeffRow> = datum
        .coefficients(a.n_max)?
        .iter()
        .enumerate()
        .map(|(i, v)| CoeffRow { n: i + 1, re: v.re, im: v.im })
        .collect();
    emit(&rows, a.output, stdout())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("AFE_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("AFE_THREADS must be a positive integer, got `{value}`")))?;
    if n == 0 {
        return Err(Failure::Usage("AFE_THREADS must be a positive integer, got `0`".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn report_error(kind: &str, message: &str) {
    let obj = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{obj}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            report_error("usage", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Chi(a) => cmd_chi(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Coeffs(a) => cmd_coeffs(a),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::VerifyFailed) => {
            report_error("verify_failed", "one or more report rows failed");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            report_error("usage", &msg);
            ExitCode::from(2)
        }
        Err(Failure::Afe(e)) => {
            report_error(e.kind(), &e.to_string().replace('\n', " "));
            match e {
                AfeError::Io(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
