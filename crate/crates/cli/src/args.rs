use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qlimits_core::units::Duration;

#[derive(Debug, Parser)]
#[command(name = "qlimits", version, about = "Work and time limits of exhaustive key search")]
pub struct Cli {
    /// JSON file whose keys mirror the long flags; flags on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write the result here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output format; CSV is available for traces and key-length tables.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate the two-level search dynamics and emit a trace.
    Simulate(SimulateArgs),
    /// Evaluate or invert a work bound.
    Bound(BoundArgs),
    /// Key lengths matching an adversary budget.
    Keylength(KeylengthArgs),
    /// Collision search with stored classical samples.
    Bht(BhtArgs),
    /// Mass-energy inside the cosmic event horizon.
    Cosmic(CosmicArgs),
    /// Built-in adversary scenarios.
    #[command(subcommand)]
    Scenario(ScenarioCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Ballistic,
    Grover,
    Adiabatic,
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdiabaticKindArg {
    Linear,
    Local,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Control protocol; `custom` reads --schedule-file.
    #[arg(long, value_enum)]
    pub protocol: Protocol,

    /// Register size in qubits.
    #[arg(long)]
    pub n: u32,

    /// Energy scale in joules.
    #[arg(long, conflicts_with = "work_radps")]
    pub work: Option<f64>,

    /// Energy scale in units of ħ (rad/s).
    #[arg(long = "work-radps")]
    pub work_radps: Option<f64>,

    /// Stop the ballistic run at this time instead of at t_F.
    #[arg(long)]
    pub time: Option<Duration>,

    /// Phase of each oracle and diffusion pulse, radians.
    #[arg(long = "pulse-phase", default_value_t = std::f64::consts::PI)]
    pub pulse_phase: f64,

    /// Grover iterations; defaults to round(π·2^(n/2)/4).
    #[arg(long)]
    pub iterations: Option<u32>,

    /// Adiabatic error budget ε.
    #[arg(long = "error-budget", default_value_t = 0.1)]
    pub error_budget: f64,

    /// Adiabatic pacing: uniform in c or gap-adapted.
    #[arg(long = "adiabatic-kind", value_enum, default_value = "local")]
    pub adiabatic_kind: AdiabaticKindArg,

    /// Adiabatic schedule segments.
    #[arg(long, default_value_t = 256)]
    pub segments: usize,

    /// JSON segment list for the custom protocol.
    #[arg(long = "schedule-file")]
    pub schedule_file: Option<PathBuf>,

    /// Also write the schedule that was simulated.
    #[arg(long = "schedule-out")]
    pub schedule_out: Option<PathBuf>,

    /// Sample step; defaults to a thousandth of the run.
    #[arg(long)]
    pub dt: Option<Duration>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKindArg {
    Classical,
    Quantum,
    Gate,
    Ballistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolveFor {
    Work,
    Time,
    Psuccess,
    N,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(value_enum)]
    pub kind: BoundKindArg,

    /// Key size in bits.
    #[arg(long)]
    pub n: Option<f64>,

    /// Duration, e.g. `1s`, `5a`, `5Ga`, `100Ta`.
    #[arg(long)]
    pub time: Option<Duration>,

    /// Work budget in joules.
    #[arg(long, conflicts_with = "power")]
    pub work: Option<f64>,

    /// Power in watts; with a time it stands for work = power·time.
    #[arg(long)]
    pub power: Option<f64>,

    /// Bath temperature in kelvin.
    #[arg(long)]
    pub temp: Option<f64>,

    /// Acceptable success probability in (0, 1].
    #[arg(long)]
    pub psuccess: Option<f64>,

    /// Quantity to solve for; the other inputs must all be given.
    #[arg(long, value_enum, default_value = "work")]
    pub solve: SolveFor,

    /// Errors corrected per run, each adding one Landauer erasure to the gate bound.
    #[arg(long = "corrected-errors")]
    pub corrected_errors: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KeylengthMode {
    Quantum,
    Classical,
    Deterministic,
    Recoverable,
    Table,
}

#[derive(Debug, Args)]
pub struct KeylengthArgs {
    /// Registry scenario, or `all` for every one.
    #[arg(long, conflicts_with_all = ["work", "power", "solar_budget", "time", "psuccess"])]
    pub scenario: Option<String>,

    /// Work budget in joules.
    #[arg(long, conflicts_with_all = ["power", "solar_budget"])]
    pub work: Option<f64>,

    /// Power in watts; with a time it stands for work = power·time.
    #[arg(long, conflicts_with = "solar_budget")]
    pub power: Option<f64>,

    /// Use the solar luminosity times the duration as the work budget.
    #[arg(long = "solar-budget")]
    pub solar_budget: bool,

    /// Duration, e.g. `1s`, `5a`, `5Ga`, `100Ta`.
    #[arg(long)]
    pub time: Option<Duration>,

    /// Acceptable success probability in (0, 1].
    #[arg(long)]
    pub psuccess: Option<f64>,

    /// Bath temperature for the classical bound.
    #[arg(long)]
    pub temp: Option<f64>,

    /// Which length to report; `table` gives the classical and quantum columns.
    #[arg(long, value_enum, default_value = "table")]
    pub mode: KeylengthMode,
}

#[derive(Debug, Args)]
pub struct BhtArgs {
    /// Registry scenario supplying budget, time, temperature and success probability.
    #[arg(long)]
    pub scenario: Option<String>,

    /// Image size in bits.
    #[arg(long)]
    pub n: Option<u32>,

    /// Total time of both stages.
    #[arg(long)]
    pub time: Option<Duration>,

    /// Bath temperature in kelvin.
    #[arg(long)]
    pub temp: Option<f64>,

    /// Acceptable success probability in (0, 1].
    #[arg(long)]
    pub psuccess: Option<f64>,

    /// Evaluate at this sample count instead of the optimum.
    #[arg(long)]
    pub samples: Option<f64>,

    /// Solve for the smallest image size the budget cannot cover.
    #[arg(long)]
    pub invert: bool,

    /// Work budget in joules.
    #[arg(long, conflicts_with = "power")]
    pub work: Option<f64>,

    /// Power in watts; with a time it stands for work = power·time.
    #[arg(long)]
    pub power: Option<f64>,

    /// Image sizes for all registry scenarios next to the reference values.
    #[arg(long, conflicts_with_all = ["invert", "n", "samples", "scenario"])]
    pub report: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CosmicFormArg {
    #[value(name = "fromOmega")]
    FromOmega,
    #[value(name = "fromDensity")]
    FromDensity,
}

#[derive(Debug, Args)]
pub struct CosmicArgs {
    /// Hubble constant in km/s/Mpc.
    #[arg(long, default_value_t = 67.36)]
    pub h0: f64,

    /// Dark-energy density parameter.
    #[arg(long = "omega-lambda", default_value_t = 0.6847)]
    pub omega_lambda: f64,

    /// Matter density in kg/m³.
    #[arg(long = "rho-m", default_value_t = 2.69e-27)]
    pub rho_m: f64,

    #[arg(long, value_enum, default_value = "fromOmega")]
    pub form: CosmicFormArg,

    /// Also report the key lengths this energy breaks within the given time.
    #[arg(long)]
    pub time: Option<Duration>,

    /// Success probability for the recoverable and secure lengths (default 1).
    #[arg(long, requires = "time")]
    pub psuccess: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum ScenarioCommand {
    /// All built-in scenarios.
    List,
    /// One scenario by name.
    Show { name: String },
}
