//! Command-line front end: compute invariants of diagram files, compare a
//! long knot against its reverse, and fuzz invariance under random moves.
//!
//! Exit codes: 0 success, 2 unreadable or invalid input, 3 a precondition of
//! the requested operation failed, 4 the fuzzer found an invariance violation.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::alexander::{alexander_s, invertibility_certificate_alex};
use crate::bracket::{invertibility_certificate_v, jones_vs, singular_bracket};
use crate::diagram::{parse_diagram, Diagram, DiagramError};
use crate::moves::{fuzz_invariance, FuzzReport};
use crate::poly::LaurentPoly;
use crate::{BMode, Certificate};

#[derive(Parser)]
#[command(
    name = "singular-knots",
    version,
    about = "State-sum invariants of long singular knot diagrams"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an invariant of one diagram file.
    Compute(ComputeArgs),
    /// Run both non-invertibility certificates on a long diagram.
    Invertible(InvertibleArgs),
    /// Apply seeded random moves, checking every invariant after each one.
    Fuzz(FuzzArgs),
}

#[derive(Args)]
struct ComputeArgs {
    /// Diagram file.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Invariant::Jones)]
    invariant: Invariant,
    #[arg(long, value_enum, default_value_t = Mode::SingleB)]
    mode: Mode,
    /// Collapse B_1..B_d to a single B after computing.
    #[arg(long = "identify-B")]
    identify_b: bool,
    /// Substitute an integer for a variable, e.g. --at B1=2. Repeatable.
    #[arg(long = "at", value_name = "Bi=k", value_parser = parse_substitution)]
    at: Vec<(usize, i64)>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for state enumeration; 0 picks the machine default.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct InvertibleArgs {
    /// Long diagram file.
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Args)]
struct FuzzArgs {
    /// Diagram file.
    input: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    steps: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Invariant {
    /// Unnormalized bracket state sum.
    Bracket,
    /// Writhe-normalized bracket.
    Jones,
    /// Region state sum.
    Alexander,
}

impl Invariant {
    fn name(self) -> &'static str {
        match self {
            Invariant::Bracket => "bracket",
            Invariant::Jones => "jones",
            Invariant::Alexander => "alexander",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    /// One shared B variable; works on closed diagrams too.
    #[value(name = "singleB")]
    SingleB,
    /// B_i per double point, indexed by first passage along the long strand.
    #[value(name = "indexedB")]
    IndexedB,
}

impl Mode {
    fn bmode(self) -> BMode {
        match self {
            Mode::SingleB => BMode::Single,
            Mode::IndexedB => BMode::Indexed,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Mode::SingleB => "singleB",
            Mode::IndexedB => "indexedB",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// Human-readable lines, with timing.
    Text,
    /// Canonical JSON, byte-identical across runs and worker counts.
    Structured,
}

fn parse_substitution(s: &str) -> Result<(usize, i64), String> {
    let (var, val) = s
        .split_once('=')
        .ok_or_else(|| format!("expected Bi=k, got `{s}`"))?;
    let i = var
        .strip_prefix('B')
        .and_then(|t| t.parse::<usize>().ok())
        .filter(|&i| i >= 1)
        .ok_or_else(|| format!("expected a variable like B1, got `{var}`"))?;
    let k = val
        .parse::<i64>()
        .map_err(|_| format!("expected an integer value, got `{val}`"))?;
    Ok((i, k))
}

enum CliError {
    /// The input could not be read or does not describe a diagram.
    Input(String),
    /// The diagram or the request violates a precondition of the operation.
    Precondition(String),
}

impl CliError {
    fn exit(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Precondition(m) => m,
        }
    }
}

/// Parse the command line, run the subcommand, print its report.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.cmd {
        Cmd::Compute(a) => cmd_compute(a),
        Cmd::Invertible(a) => cmd_invertible(a),
        Cmd::Fuzz(a) => cmd_fuzz(a),
    };
    match code {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit())
        }
    }
}

fn configure_jobs(jobs: usize) {
    if jobs > 0 {
        // A second global build attempt is rejected; first caller wins.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
}

fn load(path: &Path) -> Result<Diagram, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_diagram(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn precondition(path: &Path, e: DiagramError) -> CliError {
    CliError::Precondition(format!("{}: {e}", path.display()))
}

#[derive(Serialize)]
struct DiagramStats {
    crossings: usize,
    double_points: usize,
    writhe: i32,
    faces: usize,
    long: bool,
}

impl DiagramStats {
    fn new(d: &Diagram) -> DiagramStats {
        DiagramStats {
            crossings: d.crossing_count(),
            double_points: d.double_point_count(),
            writhe: d.writhe(),
            faces: d.face_data().faces.len(),
            long: d.is_long(),
        }
    }

    fn line(&self) -> String {
        format!(
            "crossings {}, double points {}, writhe {}, faces {}, {}",
            self.crossings,
            self.double_points,
            self.writhe,
            self.faces,
            if self.long { "long" } else { "closed" }
        )
    }
}

#[derive(Serialize)]
struct PolyRecord {
    arity: usize,
    rendered: String,
    /// (coefficient, A exponent, B exponents) per term, canonical order.
    terms: Vec<(String, i32, Vec<i32>)>,
}

impl PolyRecord {
    fn new(p: &LaurentPoly) -> PolyRecord {
        PolyRecord {
            arity: p.arity(),
            rendered: p.to_string(),
            terms: p.to_triples(),
        }
    }
}

#[derive(Serialize)]
struct ComputeReport {
    command: &'static str,
    input: String,
    invariant: &'static str,
    mode: &'static str,
    identify_b: bool,
    substitutions: Vec<(String, i64)>,
    diagram: DiagramStats,
    polynomial: PolyRecord,
}

fn emit<T: Serialize>(report: &T, format: Format, text: String) {
    match format {
        Format::Text => print!("{text}"),
        Format::Structured => {
            println!(
                "{}",
                serde_json::to_string_pretty(report).expect("reports serialize")
            )
        }
    }
}

fn cmd_compute(a: ComputeArgs) -> Result<u8, CliError> {
    configure_jobs(a.jobs);
    let started = Instant::now();
    let d = load(&a.input)?;
    let mode = a.mode.bmode();
    let mut p = match a.invariant {
        Invariant::Bracket => singular_bracket(&d, mode),
        Invariant::Jones => jones_vs(&d, mode),
        Invariant::Alexander => alexander_s(&d, mode),
    }
    .map_err(|e| precondition(&a.input, e))?;
    if a.identify_b {
        p = p.identify_b_variables();
    }
    for &(i, k) in &a.at {
        if i > p.arity() {
            return Err(CliError::Precondition(format!(
                "B{i} is not a variable here (arity {})",
                p.arity()
            )));
        }
        p = p
            .substitute_b(i, k)
            .map_err(|e| CliError::Precondition(e.to_string()))?;
    }
    let report = ComputeReport {
        command: "compute",
        input: a.input.display().to_string(),
        invariant: a.invariant.name(),
        mode: a.mode.name(),
        identify_b: a.identify_b,
        substitutions: a.at.iter().map(|&(i, k)| (format!("B{i}"), k)).collect(),
        diagram: DiagramStats::new(&d),
        polynomial: PolyRecord::new(&p),
    };
    let mut text = String::new();
    text.push_str(&fmt_line("input", &report.input));
    text.push_str(&fmt_line(
        "invariant",
        format!(
            "{}, {}{}",
            report.invariant,
            report.mode,
            if report.identify_b {
                ", identified B"
            } else {
                ""
            }
        ),
    ));
    for (v, k) in &report.substitutions {
        text.push_str(&fmt_line("at", format!("{v} = {k}")));
    }
    text.push_str(&fmt_line("diagram", report.diagram.line()));
    text.push_str(&fmt_line("result", &report.polynomial.rendered));
    text.push_str(&fmt_line("elapsed", format!("{:.1?}", started.elapsed())));
    emit(&report, a.format, text);
    Ok(0)
}

#[derive(Serialize)]
struct WitnessRecord {
    /// B-exponent pattern on which the two sides disagree.
    pattern: Vec<i32>,
    forward: PolyRecord,
    inverse: PolyRecord,
}

#[derive(Serialize)]
struct CertificateRecord {
    invariant: &'static str,
    verdict: &'static str,
    witness: Option<WitnessRecord>,
}

impl CertificateRecord {
    fn new(invariant: &'static str, c: Certificate) -> CertificateRecord {
        match c {
            Certificate::Inconclusive => CertificateRecord {
                invariant,
                verdict: "Inconclusive",
                witness: None,
            },
            Certificate::NotInvertible(w) => CertificateRecord {
                invariant,
                verdict: "NotInvertible",
                witness: Some(WitnessRecord {
                    pattern: w.pattern,
                    forward: PolyRecord::new(&w.forward),
                    inverse: PolyRecord::new(&w.inverse),
                }),
            },
        }
    }

    fn line(&self) -> String {
        match &self.witness {
            None => fmt_line(self.invariant, self.verdict),
            Some(w) => fmt_line(
                self.invariant,
                format!(
                    "{} at pattern {}: forward {}, inverse {}",
                    self.verdict,
                    pattern_label(&w.pattern),
                    w.forward.rendered,
                    w.inverse.rendered
                ),
            ),
        }
    }
}

fn fmt_line(label: &str, value: impl std::fmt::Display) -> String {
    format!("{:<11} {}\n", format!("{label}:"), value)
}

fn pattern_label(pattern: &[i32]) -> String {
    let factors: Vec<String> = pattern
        .iter()
        .enumerate()
        .filter(|(_, &k)| k != 0)
        .map(|(i, k)| format!("B{}^{}", i + 1, k))
        .collect();
    if factors.is_empty() {
        "1".to_string()
    } else {
        factors.join("*")
    }
}

#[derive(Serialize)]
struct InvertibleReport {
    command: &'static str,
    input: String,
    diagram: DiagramStats,
    certificates: Vec<CertificateRecord>,
}

fn cmd_invertible(a: InvertibleArgs) -> Result<u8, CliError> {
    configure_jobs(a.jobs);
    let started = Instant::now();
    let d = load(&a.input)?;
    let jones = invertibility_certificate_v(&d).map_err(|e| precondition(&a.input, e))?;
    let alex = invertibility_certificate_alex(&d).map_err(|e| precondition(&a.input, e))?;
    let report = InvertibleReport {
        command: "invertible",
        input: a.input.display().to_string(),
        diagram: DiagramStats::new(&d),
        certificates: vec![
            CertificateRecord::new("jones", jones),
            CertificateRecord::new("alexander", alex),
        ],
    };
    let mut text = String::new();
    text.push_str(&fmt_line("input", &report.input));
    text.push_str(&fmt_line("diagram", report.diagram.line()));
    for c in &report.certificates {
        text.push_str(&c.line());
    }
    text.push_str(&fmt_line("elapsed", format!("{:.1?}", started.elapsed())));
    emit(&report, a.format, text);
    Ok(0)
}

#[derive(Serialize)]
struct FuzzRunReport {
    command: &'static str,
    input: String,
    diagram: DiagramStats,
    /// Invariant values the campaign holds every rewrite against.
    baseline: Vec<(&'static str, String)>,
    report: FuzzReport,
}

fn cmd_fuzz(a: FuzzArgs) -> Result<u8, CliError> {
    configure_jobs(a.jobs);
    let started = Instant::now();
    let d = load(&a.input)?;
    let mut baseline = vec![(
        "jones",
        jones_vs(
            &d,
            if d.is_long() {
                BMode::Indexed
            } else {
                BMode::Single
            },
        )
        .map_err(|e| precondition(&a.input, e))?
        .to_string(),
    )];
    if d.is_long() {
        baseline.push((
            "alexander",
            alexander_s(&d, BMode::Indexed)
                .map_err(|e| precondition(&a.input, e))?
                .to_string(),
        ));
    }
    let report = FuzzRunReport {
        command: "fuzz",
        input: a.input.display().to_string(),
        diagram: DiagramStats::new(&d),
        baseline,
        report: fuzz_invariance(&d, a.steps, a.seed),
    };
    let mut text = String::new();
    text.push_str(&fmt_line("input", &report.input));
    text.push_str(&fmt_line("diagram", report.diagram.line()));
    for (name, value) in &report.baseline {
        text.push_str(&fmt_line("baseline", format!("{name} = {value}")));
    }
    text.push_str(&fmt_line(
        "steps",
        format!(
            "{} applied of {} requested (seed {}), final vertex count {}",
            report.report.steps_applied,
            report.report.steps_requested,
            report.report.seed,
            report.report.final_vertices
        ),
    ));
    for (kind, count) in &report.report.kind_counts {
        text.push_str(&fmt_line("moves", format!("{kind} x{count}")));
    }
    let code = match &report.report.violation {
        None => {
            text.push_str(&fmt_line("verdict", "every move preserved every invariant"));
            0
        }
        Some(v) => {
            text.push_str(&fmt_line(
                "verdict",
                format!(
                    "VIOLATION at step {} ({} at {}): {} expected {}, got {}",
                    v.step, v.kind, v.site, v.invariant, v.expected, v.got
                ),
            ));
            4
        }
    };
    text.push_str(&fmt_line("elapsed", format!("{:.1?}", started.elapsed())));
    emit(&report, a.format, text);
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn substitution_syntax() {
        assert_eq!(parse_substitution("B1=2"), Ok((1, 2)));
        assert_eq!(parse_substitution("B12=-3"), Ok((12, -3)));
        assert!(parse_substitution("B0=1").is_err());
        assert!(parse_substitution("A=1").is_err());
        assert!(parse_substitution("B1").is_err());
        assert!(parse_substitution("B1=x").is_err());
    }

    #[test]
    fn command_line_shape() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
