//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::compiler::SourceCircuit;
use crate::error::{Error, Result};
use crate::identities::all_identities;
use crate::keytrack::InputClass;
use crate::protocol::{run_scheme1, Mode, RunConfig, RunReport};
use crate::qcore::StateVector;
use crate::subproto::SubprotoChoice;
use crate::tomo::{self, Figure, NoiseModel, SettingsChoice, Shots, TomoConfig};

/// Runs with fidelity at or above this exit 0.
pub const FIDELITY_THRESHOLD: f64 = 1.0 - 1e-6;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILED: i32 = 2;

const INPUT_STREAM: u64 = 3;

#[derive(Debug, Parser)]
#[command(name = "qhelab", version, about = "Interactive quantum homomorphic encryption laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the protocol and write a report.
    Run(RunArgs),
    /// Run the protocol and print the transcript.
    Transcript(RunArgs),
    /// Run the protocol and print the leakage counts.
    Privacy(RunArgs),
    /// Simulated tomography, one CSV per figure.
    Tomo(TomoArgs),
    /// Check the algebraic identities the protocol relies on.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Qhe,
    Bqc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassArg {
    General,
    Real,
    Classical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SubprotoArg {
    Class1,
    Ott,
    Ahe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SettingsArg {
    Pauli6,
    Four,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Circuit file, one gate per line.
    #[arg(long)]
    pub circuit: PathBuf,
    /// Register width; defaults to the widest qubit index used.
    #[arg(long)]
    pub qubits: Option<usize>,
    /// `zero`, `plus`, `random-real`, `random`, or a file of `index re im` lines.
    #[arg(long, default_value = "zero")]
    pub input: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Qhe)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = ClassArg::General)]
    pub input_class: ClassArg,
    #[arg(long, value_enum, default_value_t = SubprotoArg::Class1)]
    pub subproto: SubprotoArg,
    /// Variables revealed by the class-1 subprotocol.
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, env = "QHELAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Also write the transcript here.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct TomoArgs {
    /// Output directory for the CSV files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long, env = "QHELAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Perfect visibilities; exact frequencies unless `--shots` is given.
    #[arg(long)]
    pub noiseless: bool,
    /// Photons per setting group [default: 100000].
    #[arg(long, conflicts_with = "exact")]
    pub shots: Option<u64>,
    /// Use exact outcome frequencies instead of sampled counts.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 5)]
    pub batches: usize,
    #[arg(long, value_enum, default_value_t = SettingsArg::Pauli6)]
    pub settings: SettingsArg,
    #[arg(long, default_value_t = 0.9983)]
    pub visibility_upper: f64,
    #[arg(long, default_value_t = 0.9973)]
    pub visibility_lower: f64,
}

impl RunArgs {
    fn input_class(&self) -> InputClass {
        match self.input_class {
            ClassArg::General => InputClass::General,
            ClassArg::Real => InputClass::RealProduct,
            ClassArg::Classical => InputClass::Classical,
        }
    }

    fn subproto(&self) -> SubprotoChoice {
        match self.subproto {
            SubprotoArg::Class1 => SubprotoChoice::Class1 { k: self.k },
            SubprotoArg::Ott => SubprotoChoice::Ott,
            SubprotoArg::Ahe => SubprotoChoice::Ahe,
        }
    }

    fn mode(&self) -> Mode {
        match self.mode {
            ModeArg::Qhe => Mode::Qhe,
            ModeArg::Bqc => Mode::Bqc,
        }
    }
}

/// Reads a circuit file; errors carry the path.
pub fn load_circuit(path: &Path, qubits: Option<usize>) -> Result<SourceCircuit> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    SourceCircuit::parse(&text, qubits)
}

/// Plain-text state file: `index re im` per line, unlisted amplitudes zero.
pub fn parse_state(text: &str, n_qubits: usize) -> Result<StateVector> {
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(err(format!("expected `index re im`, got {} fields", toks.len())));
        }
        let idx: usize = toks[0].parse().map_err(|_| err(format!("bad index `{}`", toks[0])))?;
        let re: f64 = toks[1].parse().map_err(|_| err(format!("bad number `{}`", toks[1])))?;
        let im: f64 = toks[2].parse().map_err(|_| err(format!("bad number `{}`", toks[2])))?;
        if idx >= amps.len() {
            return Err(err(format!("index {idx} out of range for {n_qubits} qubits")));
        }
        amps[idx] = Complex64::new(re, im);
    }
    StateVector::from_amplitudes(amps)
}

/// Resolves a preset name or reads a state file.
pub fn input_state(name: &str, n_qubits: usize, seed: u64) -> Result<StateVector> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(INPUT_STREAM);
    match name {
        "zero" => Ok(StateVector::zero(n_qubits)),
        "plus" => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let plus = StateVector::qubit(Complex64::new(h, 0.0), Complex64::new(h, 0.0))?;
            StateVector::product(&vec![plus; n_qubits])
        }
        "random-real" => Ok(StateVector::random_real_product(n_qubits, &mut rng)),
        "random" => Ok(StateVector::random(n_qubits, &mut rng)),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            parse_state(&text, n_qubits)
        }
    }
}

/// Report text for a finished run.
pub fn report_text(args: &RunArgs, report: &RunReport) -> String {
    format!(
        "seed {}\nqubits {}\nk {}\nfidelity {:.12}\nmessages {}\nbob_held_state {}\nalice_holds_output {}\n{}",
        args.seed,
        report.output_state.n_qubits(),
        args.k,
        report.fidelity_vs_direct,
        report.transcript.len(),
        report.bob_held_state,
        report.alice_holds_output,
        report.privacy.to_text(),
    )
}

fn write_or_print(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(Error::from),
    }
}

enum Failure {
    Usage(Error),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e)
    }
}

fn cmd_protocol(cmd: &Command, args: &RunArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let circuit = load_circuit(&args.circuit, args.qubits)?;
    let class = args.input_class();
    let m = class.n_vars(circuit.n_qubits());
    if args.subproto == SubprotoArg::Class1 && args.k > m {
        return Err(Error::InvalidArgument(format!("--k {} exceeds the {m} variables of this run", args.k)).into());
    }
    let input = input_state(&args.input, circuit.n_qubits(), args.seed)?;
    let config = RunConfig::new(args.mode(), class, args.subproto(), args.seed);
    let report = match run_scheme1(&circuit, &input, &config) {
        Ok(r) => r,
        Err(aborted) => {
            if let Some(p) = &args.transcript {
                write_or_print(Some(p), &aborted.transcript.to_text(), out)?;
            }
            return Err(Failure::Run(aborted.to_string()));
        }
    };
    match cmd {
        Command::Transcript(_) => write_or_print(args.report.as_deref(), &report.transcript.to_text(), out)?,
        Command::Privacy(_) => write_or_print(args.report.as_deref(), &report.privacy.to_text(), out)?,
        _ => write_or_print(args.report.as_deref(), &report_text(args, &report), out)?,
    }
    if let (Some(p), Command::Run(_) | Command::Privacy(_)) = (&args.transcript, cmd) {
        write_or_print(Some(p), &report.transcript.to_text(), out)?;
    }
    if report.fidelity_vs_direct < FIDELITY_THRESHOLD {
        return Err(Failure::Run(format!("fidelity {:.12} below threshold", report.fidelity_vs_direct)));
    }
    Ok(())
}

fn tomo_config(args: &TomoArgs) -> Result<TomoConfig> {
    let noise = if args.noiseless {
        NoiseModel::ideal()
    } else {
        NoiseModel::new(args.visibility_upper, args.visibility_lower)?
    };
    let shots = match args.shots {
        _ if args.exact => Shots::Exact,
        None if args.noiseless => Shots::Exact,
        None => Shots::Sampled(100_000),
        Some(0) => return Err(Error::InvalidArgument("--shots must be at least 1".into())),
        Some(n) => Shots::Sampled(n),
    };
    Ok(TomoConfig {
        noise,
        shots,
        settings: match args.settings {
            SettingsArg::Pauli6 => SettingsChoice::Pauli6,
            SettingsArg::Four => SettingsChoice::Four,
        },
        batches: args.batches,
        seed: args.seed,
    })
}

fn cmd_tomo(args: &TomoArgs, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let config = tomo_config(args)?;
    let tables = Figure::ALL
        .iter()
        .map(|&f| tomo::run_figure(f, &config))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Failure::Run(e.to_string()))?;
    let paths = tomo::write_csvs(&args.out, &tables).map_err(|e| Failure::Run(e.to_string()))?;
    for (t, p) in tables.iter().zip(&paths) {
        let lo = t.rows.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
        let hi = t.rows.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
        let unconverged = t.rows.iter().filter(|r| !r.converged).count();
        writeln!(
            out,
            "{} rows {} min {:.6} max {:.6} unconverged {} -> {}",
            t.figure.name(),
            t.rows.len(),
            lo,
            hi,
            unconverged,
            p.display()
        )
        .map_err(Error::from)?;
    }
    Ok(())
}

fn cmd_selftest(out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let checks = all_identities();
    for c in &checks {
        writeln!(out, "{c}").map_err(Error::from)?;
    }
    let failed = checks.iter().filter(|c| !c.passed()).count();
    writeln!(out, "{} identities, {failed} failed", checks.len()).map_err(Error::from)?;
    if failed > 0 {
        return Err(Failure::Run(format!("{failed} identities failed")));
    }
    Ok(())
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run(a) | Command::Transcript(a) | Command::Privacy(a) => cmd_protocol(&cli.command, a, out),
        Command::Tomo(a) => cmd_tomo(a, out),
        Command::Selftest => cmd_selftest(out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Run(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILED
        }
    }
}
