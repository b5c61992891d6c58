//! Command-line front end: overhead reports, figure sweeps and Monte-Carlo
//! runs, all emitted as CSV with a version/config-hash header comment.

mod sweep;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qem_core::basis::BasisSet;
use qem_core::bounds::bound_pair;
use qem_core::channel::ggep;
use qem_core::coded::{
    best_scheme, critical_point, qedc_gate_analysis, ConcatModel, QedcConfig, QedcGateSpec,
};
use qem_core::descriptor::{ChannelDescriptor, CircuitDescriptor};
use qem_core::qp::{quasi_probability, reduced_pauli_qp, sof};
use qem_core::sim::{empirical_sof, run_exact, run_plain_monte_carlo, run_qem_monte_carlo};
use qem_core::twirl::{clifford_twirl, imperfect_twirl, pauli_twirl, TwirlConfig, TwirlKind};
use qem_core::QemError;
use sha2::{Digest, Sha256};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "qem", version, about = "Sampling-overhead analysis for quasi-probability error mitigation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quasi-probability overhead of a single channel.
    Sof(SofArgs),
    /// Grid sweeps behind the report figures, as long-format CSV.
    Sweep(sweep::SweepArgs),
    /// Monte-Carlo run of a circuit with mitigated noise layers.
    Simulate(SimulateArgs),
    /// Overhead of a channel before and after twirling.
    Twirl(TwirlArgs),
    /// Concatenated-code trade-off table or error-detection gate analysis.
    Coded(CodedArgs),
}

#[derive(clap::Args)]
struct SofArgs {
    /// Channel descriptor JSON file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Inline channel kind instead of a config file.
    #[arg(long, value_enum, conflicts_with = "config")]
    kind: Option<InlineKind>,
    /// Qubit count for inline kinds that take one.
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Error parameter for the inline kind.
    #[arg(long, default_value_t = 0.0)]
    param: f64,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum InlineKind {
    Depolarizing,
    BitFlip,
    PhaseFlip,
    AmplitudeDamping,
    OverRotation,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Circuit descriptor JSON file.
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    shots: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Fail (exit 4) unless the circuit yields exactly this many sampling plans.
    #[arg(long)]
    expect_plans: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TwirlArgs {
    /// Channel descriptor JSON file.
    #[arg(long)]
    config: PathBuf,
    /// Gate-error probability of the imperfect twirl layers.
    #[arg(long, default_value_t = 0.0)]
    gate_noise: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct CodedArgs {
    /// Physical gate error probability.
    #[arg(long, default_value_t = 1e-4)]
    eps: f64,
    /// Mitigated gate count of the circuit.
    #[arg(long, default_value_t = 1e6)]
    gates: f64,
    /// Deepest concatenation stage to consider.
    #[arg(long, default_value_t = 4)]
    max_stage: usize,
    /// Analyze one detection-code gate instead of the concatenation table.
    #[arg(long, value_enum)]
    qedc: Option<QedcGate>,
    /// Single-qubit gate error for the detection-code analysis.
    #[arg(long)]
    eps1: Option<f64>,
    /// Two-qubit gate error for the detection-code analysis.
    #[arg(long, default_value_t = 1e-2)]
    eps2: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum QedcGate {
    Cnot,
    Cz,
    SwapH2,
}

/// Errors with the exit code they map to.
pub enum CliError {
    /// Unreadable or unparsable input: exit 2.
    Config(String),
    /// Library failure; singular channels exit 3, plan mismatches exit 4.
    Qem(QemError),
    Io(std::io::Error),
}

impl From<QemError> for CliError {
    fn from(e: QemError) -> CliError {
        CliError::Qem(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::Io(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Qem(QemError::SingularChannel) => 3,
            CliError::Qem(QemError::IllConditioned(_)) => 3,
            CliError::Qem(QemError::InvalidPlan(_)) => 4,
            CliError::Qem(_) | CliError::Io(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(m) => m.clone(),
            CliError::Qem(e) => e.to_string(),
            CliError::Io(e) => e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sof(args) => cmd_sof(args),
        Command::Sweep(args) => sweep::cmd_sweep(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Twirl(args) => cmd_twirl(args),
        Command::Coded(args) => cmd_coded(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

/// Fixed-width scientific notation so outputs are byte-stable.
pub fn fmt(v: f64) -> String {
    format!("{v:.12e}")
}

/// First 16 hex chars of the SHA-256 of the canonical settings string.
pub fn config_hash(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

pub fn open_out(out: &Option<PathBuf>) -> Result<Box<dyn std::io::Write>, CliError> {
    match out {
        Some(path) => Ok(Box::new(fs::File::create(path)?)),
        None => Ok(Box::new(std::io::stdout())),
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn inline_descriptor(args: &SofArgs) -> Result<ChannelDescriptor, CliError> {
    let kind = args
        .kind
        .ok_or_else(|| CliError::Config("need either --config or --kind".into()))?;
    Ok(match kind {
        InlineKind::Depolarizing => ChannelDescriptor::Depolarizing {
            n: args.n,
            eps: args.param,
        },
        InlineKind::BitFlip => ChannelDescriptor::BitFlip { p: args.param },
        InlineKind::PhaseFlip => ChannelDescriptor::PhaseFlip { p: args.param },
        InlineKind::AmplitudeDamping => ChannelDescriptor::AmplitudeDamping { delta: args.param },
        InlineKind::OverRotation => ChannelDescriptor::OverRotation { phi: args.param },
    })
}

fn cmd_sof(args: SofArgs) -> Result<(), CliError> {
    let descriptor = match &args.config {
        Some(path) => read_json::<ChannelDescriptor>(path)?,
        None => inline_descriptor(&args)?,
    };
    let canonical = serde_json::to_string(&descriptor)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let channel = descriptor.build()?;
    let basis = BasisSet::standard(channel.n())?;
    let mu = quasi_probability(&channel, &basis)?;
    let gamma = sof(&mu).gamma;
    let eps = ggep(&channel);
    let (lb, ub) = match bound_pair(eps) {
        Ok(b) => (b.lower, b.upper),
        Err(_) => (f64::NAN, f64::NAN),
    };
    let mut w = open_out(&args.out)?;
    writeln!(w, "# qem {VERSION} cmd=sof config_hash={}", config_hash(&canonical))?;
    writeln!(w, "gamma,one_norm,ggep,lower_bound,upper_bound,basis_condition")?;
    writeln!(
        w,
        "{},{},{},{},{},{}",
        fmt(gamma),
        fmt(mu.one_norm),
        fmt(eps),
        fmt(lb),
        fmt(ub),
        fmt(basis.condition_number())
    )?;
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let descriptor: CircuitDescriptor = read_json(&args.config)?;
    let canonical = serde_json::to_string(&descriptor)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let basis = BasisSet::standard(descriptor.n)?;
    let (circuit, obs, plans) = descriptor.build(&basis)?;
    if let Some(expect) = args.expect_plans {
        if plans.len() != expect {
            return Err(QemError::InvalidPlan(format!(
                "expected {expect} sampling plans, circuit has {}",
                plans.len()
            ))
            .into());
        }
    }
    let exact = run_exact(&circuit.ideal(), &obs)?;
    let qem = run_qem_monte_carlo(&circuit, &plans, Some(&basis), &obs, args.shots, args.seed)?;
    let plain = run_plain_monte_carlo(&circuit, &obs, args.shots, args.seed)?;
    let ratio = qem.sample_variance / plain.sample_variance;
    let mut w = open_out(&args.out)?;
    writeln!(
        w,
        "# qem {VERSION} cmd=simulate config_hash={} shots={} seed={}",
        config_hash(&canonical),
        args.shots,
        args.seed
    )?;
    writeln!(
        w,
        "mean,std_error,sample_variance,mean_abs_weight,exact_ideal,plain_variance,variance_ratio,empirical_sof,shots,seed"
    )?;
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{},{}",
        fmt(qem.mean),
        fmt(qem.std_error),
        fmt(qem.sample_variance),
        fmt(qem.mean_abs_weight),
        fmt(exact),
        fmt(plain.sample_variance),
        fmt(ratio),
        fmt(empirical_sof(&qem, &plain)),
        args.shots,
        args.seed
    )?;
    Ok(())
}

fn cmd_twirl(args: TwirlArgs) -> Result<(), CliError> {
    let descriptor: ChannelDescriptor = read_json(&args.config)?;
    let canonical = serde_json::to_string(&descriptor)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let channel = descriptor.build()?;
    let basis = BasisSet::standard(channel.n())?;
    let gamma_untwirled = sof(&quasi_probability(&channel, &basis)?).gamma;
    let reduced_gamma = |c: &qem_core::channel::PTMChannel| -> Result<f64, CliError> {
        Ok(sof(&reduced_pauli_qp(&c.to_eta()?)?).gamma)
    };
    let gamma_pauli = reduced_gamma(&pauli_twirl(&channel)?)?;
    let gamma_clifford = reduced_gamma(&clifford_twirl(&channel)?)?;
    let cfg = TwirlConfig {
        kind: TwirlKind::Pauli,
        gate_noise_ggep: args.gate_noise,
    };
    let gamma_imperfect = reduced_gamma(&imperfect_twirl(&channel, &cfg)?)?;
    let mut w = open_out(&args.out)?;
    writeln!(
        w,
        "# qem {VERSION} cmd=twirl config_hash={} gate_noise={}",
        config_hash(&canonical),
        fmt(args.gate_noise)
    )?;
    writeln!(
        w,
        "ggep,gamma_untwirled,gamma_pauli_twirl,gamma_clifford_twirl,gamma_imperfect_twirl"
    )?;
    writeln!(
        w,
        "{},{},{},{},{}",
        fmt(ggep(&channel)),
        fmt(gamma_untwirled),
        fmt(gamma_pauli),
        fmt(gamma_clifford),
        fmt(gamma_imperfect)
    )?;
    Ok(())
}

fn cmd_coded(args: CodedArgs) -> Result<(), CliError> {
    let mut w = open_out(&args.out)?;
    if let Some(gate) = args.qedc {
        let spec = match gate {
            QedcGate::Cnot => QedcGateSpec::transversal_cnot(),
            QedcGate::Cz => QedcGateSpec::cz(),
            QedcGate::SwapH2 => QedcGateSpec::swap_hadamards(),
        };
        let eps1 = args.eps1.unwrap_or(args.eps2 / 10.0);
        let a = qedc_gate_analysis(&spec, eps1, args.eps2, &QedcConfig::default())?;
        let canonical = format!("qedc:{}:{eps1}:{}", spec.name, args.eps2);
        writeln!(w, "# qem {VERSION} cmd=coded config_hash={}", config_hash(&canonical))?;
        writeln!(
            w,
            "gate,eps1,eps2,p_detect,gamma_qedc,gamma_qem_post,gamma_total,gamma_pure_qem"
        )?;
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            spec.name,
            fmt(eps1),
            fmt(args.eps2),
            fmt(a.p_detect),
            fmt(a.gamma_qedc),
            fmt(a.gamma_qem_post),
            fmt(a.gamma_total),
            fmt(a.gamma_pure_qem)
        )?;
        return Ok(());
    }
    let model = ConcatModel::steane();
    let best = best_scheme(&model, args.eps, args.gates, args.max_stage);
    let canonical = format!("concat:{}:{}:{}", args.eps, args.gates, args.max_stage);
    writeln!(w, "# qem {VERSION} cmd=coded config_hash={}", config_hash(&canonical))?;
    writeln!(
        w,
        "stage,is_best,critical_point_exact,critical_point_maclaurin,log_overhead"
    )?;
    for l in 0..=args.max_stage {
        let (exact, maclaurin) = match critical_point(&model, args.eps, l) {
            Ok(c) => (c.exact, c.maclaurin),
            Err(_) => (f64::NAN, f64::NAN),
        };
        writeln!(
            w,
            "{},{},{},{},{}",
            l,
            (l == best.stage) as u8,
            fmt(exact),
            fmt(maclaurin),
            fmt(best.log_overheads[l])
        )?;
    }
    Ok(())
}
