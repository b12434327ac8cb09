//! Command-line front end: marking verification, limit-set rendering,
//! certificates, word checks, and the exhaustive combinatorial proofs.
//!
//! Exit codes: 0 = pass, 1 = fail, 2 = malformed input or bad parameters.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use schottky_lab::certificates::{
    cusp_gap_certificate, enumerate_cusps, non_concyclic_certificate, slope_certificate,
    Certificate,
};
use schottky_lab::combinatorics::{
    admissible_genus3_graphs, cube_labeling_search, genus3_impossibility, superstrand_bound_oracle,
};
use schottky_lab::render::{render_limit_set, RenderFormat, RenderOptions};
use schottky_lab::schottky::SchottkyMarking;
use schottky_lab::shoebox::{detect_translation_case, vertical_projection_points};
use schottky_lab::words::{
    genus3_pinchable_words, pinchable_algebraic_check, pinchable_family, Word,
};
use schottky_lab::{ExtendedComplex, DEFAULT_TOLERANCE};

#[derive(Parser)]
#[command(
    name = "schottky-lab",
    version,
    about = "Schottky circle-marking toolkit"
)]
struct Cli {
    /// Tolerance for all geometric comparisons.
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,

    /// Write the result to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify a marking file against the classical or noded conditions.
    Verify(VerifyArgs),
    /// Enumerate and render the nested-disc limit set of a classical marking.
    Limitset(LimitsetArgs),
    /// Emit a quantitative certificate.
    #[command(subcommand)]
    Certify(CertifyCommand),
    /// Replay one of the exhaustive combinatorial proofs.
    Prove(ProveArgs),
    /// Word utilities: families, the explicit genus-3 triple, pinchability.
    #[command(subcommand)]
    Words(WordsCommand),
    /// Enumerate cusps of the normalized thrice-punctured sphere group.
    Cusps(CuspsArgs),
    /// Project sorted intersection abscissas to evenly spaced box points.
    Project(ProjectArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Marking file (JSON).
    marking: PathBuf,
    #[arg(long, value_enum)]
    mode: VerifyMode,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    format: ReportFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    Classical,
    Noded,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Json,
    Text,
}

#[derive(Args)]
struct LimitsetArgs {
    /// Marking file (JSON).
    marking: PathBuf,
    /// Nesting depth of the enumeration.
    #[arg(long, default_value_t = 6)]
    depth: usize,
    #[arg(long, value_enum, default_value_t = ImageFormat::Svg)]
    format: ImageFormat,
    /// Raster width (ppm only).
    #[arg(long, default_value_t = 800)]
    width: usize,
    /// Raster height (ppm only).
    #[arg(long, default_value_t = 800)]
    height: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImageFormat {
    Svg,
    Ppm,
    /// The raw sample as JSON instead of an image.
    Json,
}

#[derive(Subcommand)]
enum CertifyCommand {
    /// Lower bound |y1 - y2| >= alpha/4 for cusps of disjoint simple geodesics.
    CuspGap {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        y1: f64,
        #[arg(long)]
        y2: f64,
    },
    /// Disjointness of the ray arg z = theta from its comparison-map image.
    Slope {
        /// Angle in radians, 0 < |theta| <= pi/2.
        #[arg(long)]
        theta: f64,
    },
    /// |Im| of a cross-ratio against a non-circularity threshold.
    Crossratio {
        /// Four points, comma separated; "inf" for infinity, e.g. "0,inf,3+4i,-i".
        #[arg(long)]
        points: String,
        /// Threshold, as a decimal or fraction such as 1/8, 1/16, 1/32.
        #[arg(long, default_value = "1/8")]
        threshold: String,
    },
}

#[derive(Args)]
struct ProveArgs {
    #[arg(value_enum)]
    target: ProveTarget,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProveTarget {
    /// Both searches combined: the genus-3 impossibility trace.
    Genus3,
    /// The superstrand counting bound (maximum 10).
    Superstrand,
    /// Uniqueness of the 4-regular graph on six vertices.
    Octahedron,
    /// Emptiness of the cube-labeling search.
    Cube,
}

#[derive(Subcommand)]
enum WordsCommand {
    /// The rank-2 word (b1 b2)^n (b2 b1)^-n of length 4n.
    Family { n: usize },
    /// The explicit genus-3 pinchable triple.
    Genus3,
    /// Pinchability report for a word file {"rank": p, "words": [[...]]}.
    Check { file: PathBuf },
}

#[derive(Args)]
struct CuspsArgs {
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long, default_value_t = 8)]
    max_word_len: usize,
}

#[derive(Args)]
struct ProjectArgs {
    /// Sorted abscissas as a JSON array, e.g. "[0, 0.4, 1.0]".
    #[arg(long)]
    abscissas: String,
    /// Height of the box boundary lines.
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(CliError::Malformed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Failed(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
    }
}

#[derive(Debug)]
enum CliError {
    /// Bad file, JSON, or parameters: exit 2.
    Malformed(String),
    /// Well-formed input that fails its check: exit 1.
    Failed(String),
}

impl From<schottky_lab::Error> for CliError {
    fn from(e: schottky_lab::Error) -> Self {
        CliError::Malformed(e.to_string())
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    if cli.tol <= 0.0 || cli.tol.is_nan() {
        return Err(CliError::Malformed("tolerance must be positive".into()));
    }
    match &cli.command {
        Command::Verify(args) => cmd_verify(cli, args),
        Command::Limitset(args) => cmd_limitset(cli, args),
        Command::Certify(args) => cmd_certify(cli, args),
        Command::Prove(args) => cmd_prove(cli, args),
        Command::Words(args) => cmd_words(cli, args),
        Command::Cusps(args) => cmd_cusps(cli, args),
        Command::Project(args) => cmd_project(cli, args),
    }
}

fn read_marking(path: &Path, tol: f64) -> Result<SchottkyMarking, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    let marking: SchottkyMarking = serde_json::from_str(&text)
        .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))?;
    // The file's tolerance wins when it is stricter than the flag.
    let tolerance = marking.tolerance().min(tol);
    SchottkyMarking::new(marking.pairs().to_vec(), tolerance)
        .map_err(|e| CliError::Malformed(e.to_string()))
}

/// Writes to the requested path via a temporary file and rename, or to
/// stdout when no path was given.
fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match output {
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Malformed(e.to_string()))
        }
        Some(path) => {
            let dir = path.parent().unwrap_or_else(|| Path::new("."));
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "out".into());
            let tmp = dir.join(format!(".{name}.tmp-{}", std::process::id()));
            std::fs::write(&tmp, bytes)
                .and_then(|()| std::fs::rename(&tmp, path))
                .map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
        }
    }
}

fn emit_json<T: serde::Serialize>(output: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut text =
        serde_json::to_string_pretty(value).map_err(|e| CliError::Malformed(e.to_string()))?;
    text.push('\n');
    emit(output, text.as_bytes())
}

fn pass_code(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<ExitCode, CliError> {
    let marking = read_marking(&args.marking, cli.tol)?;
    let (pass, json, summary) = match args.mode {
        VerifyMode::Classical => {
            let report = marking.verify_classical();
            let summary = verdict_line("classical marking", report.pass, &report.violations);
            let json =
                serde_json::to_value(&report).map_err(|e| CliError::Malformed(e.to_string()))?;
            (report.pass, json, summary)
        }
        VerifyMode::Noded => match marking.verify_noded() {
            Ok(report) => {
                let summary = verdict_line("noded marking", report.pass, &report.violations);
                let json = serde_json::to_value(&report)
                    .map_err(|e| CliError::Malformed(e.to_string()))?;
                (report.pass, json, summary)
            }
            Err(e @ schottky_lab::Error::CrossingCircles)
            | Err(e @ schottky_lab::Error::NestedCircles) => {
                let json = serde_json::json!({ "pass": false, "error": e.to_string() });
                (false, json, format!("noded marking: FAIL ({e})"))
            }
            Err(e) => return Err(CliError::Malformed(e.to_string())),
        },
    };
    match args.format {
        ReportFormat::Json => emit_json(cli.output.as_deref(), &json)?,
        ReportFormat::Text => emit(cli.output.as_deref(), format!("{summary}\n").as_bytes())?,
    }
    Ok(pass_code(pass))
}

fn verdict_line(what: &str, pass: bool, violations: &[String]) -> String {
    if pass {
        format!("{what}: PASS")
    } else if violations.is_empty() {
        format!("{what}: FAIL")
    } else {
        format!("{what}: FAIL ({})", violations.join("; "))
    }
}

fn cmd_limitset(cli: &Cli, args: &LimitsetArgs) -> Result<ExitCode, CliError> {
    let marking = read_marking(&args.marking, cli.tol)?;
    let sample = match marking.limit_set(args.depth) {
        Ok(sample) => sample,
        Err(e @ schottky_lab::Error::NotClassicalMarking) => {
            return Err(CliError::Failed(format!("error: {e}")))
        }
        Err(e) => return Err(CliError::Malformed(e.to_string())),
    };
    match args.format {
        ImageFormat::Json => emit_json(cli.output.as_deref(), &sample)?,
        ImageFormat::Svg | ImageFormat::Ppm => {
            let format = match args.format {
                ImageFormat::Svg => RenderFormat::Svg,
                _ => RenderFormat::Ppm,
            };
            let options = RenderOptions {
                width: args.width,
                height: args.height,
                threads: worker_cap(),
            };
            let bytes = render_limit_set(&sample, format, &options)
                .map_err(|e| CliError::Malformed(e.to_string()))?;
            emit(cli.output.as_deref(), &bytes)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Worker count for rasterization: available parallelism, capped by the
/// SCHOTTKY_LAB_THREADS environment variable when set.
fn worker_cap() -> usize {
    let available = std::thread::available_parallelism().map_or(1, |n| n.get());
    match std::env::var("SCHOTTKY_LAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => available.min(n),
            _ => 1,
        },
        Err(_) => available,
    }
}

fn cmd_certify(cli: &Cli, args: &CertifyCommand) -> Result<ExitCode, CliError> {
    let certificate: Certificate = match args {
        CertifyCommand::CuspGap { alpha, y1, y2 } => {
            cusp_gap_certificate(*alpha, *y1, *y2, cli.tol)?
        }
        CertifyCommand::Slope { theta } => slope_certificate(*theta)?,
        CertifyCommand::Crossratio { points, threshold } => {
            let points = parse_points(points)?;
            let threshold = parse_threshold(threshold)?;
            non_concyclic_certificate(points, threshold, cli.tol)?
        }
    };
    emit_json(cli.output.as_deref(), &certificate)?;
    let kind = match certificate.kind {
        schottky_lab::certificates::CertificateKind::CuspGap => "cusp-gap",
        schottky_lab::certificates::CertificateKind::Slope => "slope",
        schottky_lab::certificates::CertificateKind::CrossRatio => "cross-ratio",
    };
    eprintln!(
        "{kind}: value {:.9} vs bound {:.9} -> {}",
        certificate.value,
        certificate.bound,
        if certificate.verdict { "PASS" } else { "FAIL" }
    );
    Ok(pass_code(certificate.verdict))
}

fn parse_points(text: &str) -> Result<[ExtendedComplex; 4], CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Malformed(format!(
            "expected 4 comma-separated points, got {}",
            parts.len()
        )));
    }
    let mut points = [ExtendedComplex::Infinity; 4];
    for (slot, part) in points.iter_mut().zip(&parts) {
        *slot = parse_extended_complex(part)
            .ok_or_else(|| CliError::Malformed(format!("cannot parse point {part:?}")))?;
    }
    Ok(points)
}

/// Accepts "inf", real numbers, and a+bi forms such as "3+4i", "-i", "2i".
fn parse_extended_complex(text: &str) -> Option<ExtendedComplex> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Some(ExtendedComplex::Infinity);
    }
    if let Ok(re) = s.parse::<f64>() {
        return Some(ExtendedComplex::new(re, 0.0));
    }
    let body = s.strip_suffix(['i', 'I'])?;
    // Split the imaginary coefficient from a leading real part at the last
    // sign that is not an exponent sign.
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx] as char;
        if (c == '+' || c == '-') && !matches!(bytes[idx - 1] as char, 'e' | 'E') {
            split = Some(idx);
            break;
        }
    }
    let (re_part, im_part) = match split {
        Some(idx) => (&body[..idx], &body[idx..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() {
        0.0
    } else {
        re_part.parse::<f64>().ok()?
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().ok()?,
    };
    Some(ExtendedComplex::from(Complex64::new(re, im)))
}

fn parse_threshold(text: &str) -> Result<f64, CliError> {
    let s = text.trim();
    if let Some((num, den)) = s.split_once('/') {
        let num: f64 = num
            .trim()
            .parse()
            .map_err(|_| CliError::Malformed(format!("bad threshold {s:?}")))?;
        let den: f64 = den
            .trim()
            .parse()
            .map_err(|_| CliError::Malformed(format!("bad threshold {s:?}")))?;
        if den == 0.0 {
            return Err(CliError::Malformed("threshold denominator is zero".into()));
        }
        return Ok(num / den);
    }
    s.parse()
        .map_err(|_| CliError::Malformed(format!("bad threshold {s:?}")))
}

fn cmd_prove(cli: &Cli, args: &ProveArgs) -> Result<ExitCode, CliError> {
    let (json, pass) = match args.target {
        ProveTarget::Genus3 => {
            let trace = genus3_impossibility();
            let pass = trace.impossible;
            (serde_json::to_value(&trace), pass)
        }
        ProveTarget::Superstrand => {
            let bound = superstrand_bound_oracle();
            let pass = bound.max_total == 10;
            (serde_json::to_value(&bound), pass)
        }
        ProveTarget::Octahedron => {
            let census = admissible_genus3_graphs();
            let pass = census.labeled_count == 15
                && census.iso_classes == 1
                && census.representative_edges.len() == 12
                && census.all_matching_complements;
            (serde_json::to_value(&census), pass)
        }
        ProveTarget::Cube => {
            let search = cube_labeling_search();
            let pass = search.valid_count == 0 && search.relaxed_count >= 1;
            (serde_json::to_value(&search), pass)
        }
    };
    let json = json.map_err(|e| CliError::Malformed(e.to_string()))?;
    emit_json(cli.output.as_deref(), &json)?;
    Ok(pass_code(pass))
}

fn cmd_words(cli: &Cli, args: &WordsCommand) -> Result<ExitCode, CliError> {
    match args {
        WordsCommand::Family { n } => {
            let word = pinchable_family(*n)?;
            emit_json(
                cli.output.as_deref(),
                &serde_json::json!({
                    "rank": word.rank(),
                    "word": word.letters(),
                    "length": word.len(),
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        WordsCommand::Genus3 => {
            let [r1, r2, r3] = genus3_pinchable_words();
            let report = pinchable_algebraic_check(&[r1.clone(), r2.clone(), r3.clone()])?;
            emit_json(
                cli.output.as_deref(),
                &serde_json::json!({
                    "rank": 3,
                    "words": [r1.letters(), r2.letters(), r3.letters()],
                    "pinchable": report.pass,
                }),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        WordsCommand::Check { file } => {
            let text = std::fs::read_to_string(file)
                .map_err(|e| CliError::Malformed(format!("{}: {e}", file.display())))?;
            #[derive(serde::Deserialize)]
            struct WordFile {
                rank: usize,
                words: Vec<Vec<i32>>,
            }
            let parsed: WordFile = serde_json::from_str(&text)
                .map_err(|e| CliError::Malformed(format!("{}: {e}", file.display())))?;
            let words: Vec<Word> = parsed
                .words
                .iter()
                .map(|letters| Word::new(parsed.rank, letters))
                .collect::<schottky_lab::Result<_>>()?;
            let report = pinchable_algebraic_check(&words)?;
            let pass = report.pass;
            emit_json(cli.output.as_deref(), &report)?;
            Ok(pass_code(pass))
        }
    }
}

fn cmd_cusps(cli: &Cli, args: &CuspsArgs) -> Result<ExitCode, CliError> {
    let cusps = enumerate_cusps(args.alpha, args.max_word_len, cli.tol)?;
    emit_json(
        cli.output.as_deref(),
        &serde_json::json!({
            "alpha": args.alpha,
            "max_word_len": args.max_word_len,
            "bound_alpha_over_4": args.alpha / 4.0,
            "cusps": cusps,
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_project(cli: &Cli, args: &ProjectArgs) -> Result<ExitCode, CliError> {
    let abscissas: Vec<f64> = serde_json::from_str(&args.abscissas)
        .map_err(|e| CliError::Malformed(format!("abscissas: {e}")))?;
    let case = detect_translation_case(&abscissas, cli.tol)?;
    let (upper, lower) = vertical_projection_points(abscissas.len(), case, args.alpha)?;
    let as_pairs =
        |points: &[Complex64]| -> Vec<[f64; 2]> { points.iter().map(|z| [z.re, z.im]).collect() };
    emit_json(
        cli.output.as_deref(),
        &serde_json::json!({
            "case": case,
            "alpha": args.alpha,
            "upper": as_pairs(&upper),
            "lower": as_pairs(&lower),
        }),
    )?;
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use schottky_lab::certificates::THRESHOLD_EIGHTH;

    #[test]
    fn complex_parsing() {
        assert!(parse_extended_complex("inf").unwrap().is_infinity());
        let z = parse_extended_complex("3+4i").unwrap().finite().unwrap();
        assert_eq!((z.re, z.im), (3.0, 4.0));
        let z = parse_extended_complex("-i").unwrap().finite().unwrap();
        assert_eq!((z.re, z.im), (0.0, -1.0));
        let z = parse_extended_complex("2.5").unwrap().finite().unwrap();
        assert_eq!((z.re, z.im), (2.5, 0.0));
        let z = parse_extended_complex("1e-3-2i").unwrap().finite().unwrap();
        assert_eq!((z.re, z.im), (1e-3, -2.0));
        let z = parse_extended_complex("i").unwrap().finite().unwrap();
        assert_eq!((z.re, z.im), (0.0, 1.0));
        assert!(parse_extended_complex("xyz").is_none());
    }

    #[test]
    fn threshold_parsing() {
        assert_eq!(parse_threshold("1/8").unwrap(), THRESHOLD_EIGHTH);
        assert_eq!(parse_threshold("0.0625").unwrap(), 0.0625);
        assert!(parse_threshold("1/0").is_err());
        assert!(parse_threshold("x").is_err());
    }
}
