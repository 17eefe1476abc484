use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quditstab::clifford::{conjugate_presentation, format_gate_file};
use quditstab::oracle::{self, DenseOperator, BOUND_ENV, DEFAULT_BOUND, GROUP_LIMIT, MAX_BOUND};
use quditstab::standard_form::{standardize, transcript, StandardForm};
use quditstab::textfmt::{line_col, parse_stabilizer_file};
use quditstab::{Error, PauliProduct, StabilizerPresentation};

const EXIT_PARSE: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_ORACLE: u8 = 3;

#[derive(Parser)]
#[command(name = "quditstab", version, about = "Qudit stabilizer groups over Z_D")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the check matrix, group order, code dimension and validity.
    Info { file: PathBuf },
    /// Reduce to standard form and print the derivation.
    Standardize {
        file: PathBuf,
        /// Write the gate sequence, one gate per line.
        #[arg(long, value_name = "PATH")]
        emit_gates: Option<PathBuf>,
        /// Write the standard form as JSON.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Check the group order and code dimension against dense matrices.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// Decide whether a Pauli product lies in the group.
    Member { file: PathBuf, pauli: String },
}

#[derive(Args)]
struct OracleArgs {
    /// Cross-check the result with dense matrices.
    #[arg(long)]
    oracle: bool,
    /// Largest D^n the dense check will build (default 256, max 1024).
    #[arg(long, value_name = "N", env = BOUND_ENV)]
    oracle_bound: Option<usize>,
}

impl OracleArgs {
    fn bound(&self) -> Result<usize, Failure> {
        let bound = self.oracle_bound.unwrap_or(DEFAULT_BOUND);
        if bound == 0 || bound > MAX_BOUND {
            return Err(Failure::new(
                EXIT_PARSE,
                format!("oracle bound must be between 1 and {MAX_BOUND}, got {bound}"),
            ));
        }
        Ok(bound)
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("quditstab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Info { file } => {
            let s = load(&file)?;
            require_valid(&s)?;
            info(&s)
        }
        Command::Standardize { file, emit_gates, json, oracle } => {
            let bound = oracle.bound()?;
            let s = load(&file)?;
            require_valid(&s)?;
            let sf = standardize(&s).map_err(|e| Failure::new(EXIT_ORACLE, e.to_string()))?;
            let mut out = transcript(&sf);
            if oracle.oracle {
                out.push_str(&oracle_line(check_standard_form(&sf, bound))?);
            }
            // Files are written only once every check has passed.
            if let Some(path) = emit_gates {
                write_file(&path, &format_gate_file(&sf.gates))?;
            }
            if let Some(path) = json {
                write_file(&path, &sf.to_json())?;
            }
            Ok(out)
        }
        Command::Verify { file, oracle } => {
            let bound = oracle.bound()?;
            let s = load(&file)?;
            require_valid(&s)?;
            let mut out = info(&s)?;
            out.push_str(&oracle_line(check_presentation(&s, bound))?);
            Ok(out)
        }
        Command::Member { file, pauli } => {
            let s = load(&file)?;
            require_valid(&s)?;
            let p = PauliProduct::parse(&pauli, s.modulus(), s.num_qudits())
                .map_err(|e| Failure::new(EXIT_PARSE, format!("{pauli:?}: {e}")))?;
            let inside = s.contains(&p).map_err(|e| Failure::new(EXIT_PARSE, e.to_string()))?;
            Ok(format!("{}\n", if inside { "yes" } else { "no" }))
        }
    }
}

fn load(path: &Path) -> Result<StabilizerPresentation, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    parse_stabilizer_file(&text).map_err(|e| {
        let message = match &e {
            Error::Syntax { position, message } => {
                let (line, col) = line_col(&text, *position);
                format!("{}:{line}:{col}: {message}", path.display())
            }
            other => format!("{}: {other}", path.display()),
        };
        Failure::new(EXIT_PARSE, message)
    })
}

fn require_valid(s: &StabilizerPresentation) -> Result<(), Failure> {
    let report = s.validity();
    if report.is_valid() {
        Ok(())
    } else {
        Err(Failure::new(EXIT_INVALID, format!("invalid stabilizer: {report}")))
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn info(s: &StabilizerPresentation) -> Result<String, Failure> {
    let internal = |e: Error| Failure::new(EXIT_ORACLE, e.to_string());
    let n = s.num_qudits();
    let mut out = String::new();
    let _ = writeln!(out, "D = {}", s.modulus());
    let _ = writeln!(out, "n = {n}");
    let _ = writeln!(out, "k = {}", s.num_generators());
    let _ = writeln!(out, "generators:");
    for g in s.to_generators() {
        let _ = writeln!(out, "  {g}");
    }
    let _ = writeln!(out, "check matrix [X | Z]:");
    let rows = s.matrix().to_rows();
    let width = rows.iter().flatten().map(|v| v.to_string().len()).max().unwrap_or(1);
    for row in &rows {
        let cell = |v: &u64| format!("{v:>width$}");
        let x: Vec<String> = row[..n].iter().map(cell).collect();
        let z: Vec<String> = row[n..].iter().map(cell).collect();
        let _ = writeln!(out, "  [{} | {}]", x.join(" "), z.join(" "));
    }
    let _ = writeln!(out, "phases = {:?}", s.phases());
    let _ = writeln!(
        out,
        "  (phases are tracked: generators differing only by a power of w give different codes)"
    );
    let _ = writeln!(out, "|S| = {}", s.group_order().map_err(internal)?);
    let _ = writeln!(out, "K = {}", s.code_dimension().map_err(internal)?);
    let _ = writeln!(out, "validity: {}", s.validity());
    Ok(out)
}

enum OracleOutcome {
    Pass(String),
    Skipped(String),
    Fail(Vec<String>),
}

fn oracle_line(outcome: Result<OracleOutcome, Error>) -> Result<String, Failure> {
    match outcome {
        Ok(OracleOutcome::Pass(detail)) => Ok(format!("oracle: PASS ({detail})\n")),
        Ok(OracleOutcome::Skipped(why)) => Ok(format!("oracle: SKIPPED ({why})\n")),
        Ok(OracleOutcome::Fail(problems)) => {
            Err(Failure::new(EXIT_ORACLE, format!("oracle: FAIL: {}", problems.join("; "))))
        }
        Err(e) => Err(Failure::new(EXIT_ORACLE, format!("oracle: FAIL: {e}"))),
    }
}

fn dense_size(s: &StabilizerPresentation, bound: usize) -> Option<String> {
    match oracle::dense_dim(s.modulus(), s.num_qudits(), bound) {
        Ok(_) => None,
        Err(e) => Some(e.to_string()),
    }
}

/// Dense checks on one presentation: closure size against the SNF order,
/// and the projector's trace against K.
fn check_presentation(s: &StabilizerPresentation, bound: usize) -> Result<OracleOutcome, Error> {
    if let Some(why) = dense_size(s, bound) {
        return Ok(OracleOutcome::Skipped(why));
    }
    let mut problems = Vec::new();
    let order = s.group_order()?;
    let closure = oracle::enumerate_group(s, GROUP_LIMIT)?.len();
    if order.to_string() != closure.to_string() {
        problems.push(format!("|S| = {order} but closure has {closure} elements"));
    }
    let p = oracle::projector(s, bound)?;
    let k: f64 = s.code_dimension()?.to_string().parse().unwrap_or(f64::NAN);
    let trace = p.trace();
    if (trace.re - k).abs() > 1e-6 || trace.im.abs() > 1e-6 {
        problems.push(format!("Tr P = {trace:.9} but K = {k}"));
    }
    if p.mul(&p).distance(&p) > oracle::TOLERANCE {
        problems.push("projector is not idempotent".to_string());
    }
    if problems.is_empty() {
        Ok(OracleOutcome::Pass(format!("|S| = {closure}, Tr P = {:.6}", trace.re)))
    } else {
        Ok(OracleOutcome::Fail(problems))
    }
}

/// Dense checks on a standardization: the gates map the original
/// projector onto the result projector, and both satisfy the size checks.
fn check_standard_form(sf: &StandardForm, bound: usize) -> Result<OracleOutcome, Error> {
    let (orig, result) = (&sf.original, &sf.result);
    if let Some(why) = dense_size(orig, bound) {
        return Ok(OracleOutcome::Skipped(why));
    }
    let mut problems = Vec::new();
    for (label, s) in [("input", orig), ("result", result)] {
        if let OracleOutcome::Fail(p) = check_presentation(s, bound)? {
            problems.extend(p.into_iter().map(|msg| format!("{label}: {msg}")));
        }
    }
    if sf.replay()? != *result {
        problems.push("replaying gates and row operations does not reproduce the result".to_string());
    }
    if !conjugate_presentation(&sf.gates, orig)?.group_equal(result)? {
        problems.push("conjugated input and result generate different groups".to_string());
    }
    let (m, n) = (orig.modulus(), orig.num_qudits());
    let mut u = DenseOperator::identity(oracle::dense_dim(m, n, bound)?);
    for g in &sf.gates {
        u = oracle::gate_unitary(g, m, n, bound)?.mul(&u);
    }
    let before = oracle::projector(orig, bound)?;
    let after = oracle::projector(result, bound)?;
    let residual = u.conjugate(&before).distance(&after);
    if residual > oracle::TOLERANCE {
        problems.push(format!("U P U^dag differs from the result projector by {residual:.3e}"));
    }
    if problems.is_empty() {
        Ok(OracleOutcome::Pass(format!(
            "{} gates, U P U^dag residual {residual:.1e}, Tr P = {:.6}",
            sf.gates.len(),
            after.trace().re
        )))
    } else {
        Ok(OracleOutcome::Fail(problems))
    }
}
