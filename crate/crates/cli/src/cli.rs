use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::Format;

/// Simulations of interferometers, Bell tests, gravitationally induced
/// entanglement and indefinite causal order.
#[derive(Debug, Parser)]
#[command(name = "qgrav", version)]
pub struct Cli {
    /// Plain-text `key = value` file supplying defaults for any long flag.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Master seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; `-` for standard output. Relative paths are resolved
    /// against `QGRAV_OUTPUT_DIR` when it is set.
    #[arg(long, short, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,
    /// Newton's constant override.
    #[arg(long = "G", global = true, value_name = "G")]
    pub g: Option<f64>,
    /// Reduced Planck constant override.
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Speed of light override.
    #[arg(long = "c", global = true, value_name = "C")]
    pub c: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mach-Zehnder detection probabilities over a phase grid.
    Mz(MzArgs),
    /// Sequential Stern-Gerlach measurements.
    Sg(SgArgs),
    /// CHSH values: classical optimum, quantum strategy or a hidden-variable file.
    Chsh(ChshArgs),
    /// Compose a circuit and apply it to a basis state.
    Circuit(CircuitArgs),
    /// Entanglement generated by the gravitational phase.
    Gie(GieArgs),
    /// Causal-inequality game.
    CausalGame(CausalGameArgs),
    /// Quantum switch with post-selection of the control.
    Qswitch(QswitchArgs),
    /// Switch driven by a mass in a superposition of positions.
    GravSwitch(GravSwitchArgs),
    /// Two gravitational switches sharing one mass.
    TemporalBell(TemporalBellArgs),
}

#[derive(Debug, Args)]
pub struct MzArgs {
    #[arg(
        long,
        default_value = "0:2pi:64",
        value_name = "START:END:COUNT",
        allow_hyphen_values = true
    )]
    pub phi_grid: String,
    /// Monte Carlo shots per phase; exact probabilities only when omitted.
    #[arg(long)]
    pub shots: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SgArgs {
    /// Comma-separated measurement axes, `z` or `x`.
    #[arg(long, default_value = "z,x,z")]
    pub axes: String,
    #[arg(long, default_value_t = 100_000)]
    pub shots: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChshMode {
    /// Exhaustive search over deterministic strategies.
    ClassicalMax,
    /// A shared two-qubit state with spin observables.
    Quantum,
    /// A hidden-variable model read from `--file`.
    Lhv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SharedState {
    #[value(name = "phi+")]
    PhiPlus,
    #[value(name = "phi-")]
    PhiMinus,
    #[value(name = "psi+")]
    PsiPlus,
    #[value(name = "psi-")]
    PsiMinus,
    /// `|00⟩`.
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Settings {
    /// `A₀ = σ_z, A₁ = σ_x, B = (σ_z ± σ_x)/√2`.
    Standard,
    /// Best settings for the chosen state.
    Optimal,
}

#[derive(Debug, Args)]
pub struct ChshArgs {
    #[arg(value_enum)]
    pub mode: ChshMode,
    #[arg(long, value_enum, default_value_t = SharedState::PhiPlus)]
    pub state: SharedState,
    #[arg(long, value_enum, default_value_t = Settings::Standard)]
    pub settings: Settings,
    /// JSON hidden-variable model (see the README for the schema).
    #[arg(long, value_name = "FILE")]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CircuitArgs {
    /// Circuit text file.
    #[arg(long, value_name = "FILE", conflicts_with = "text")]
    pub file: Option<PathBuf>,
    /// Circuit given inline; `;` separates lines.
    #[arg(long)]
    pub text: Option<String>,
    /// Input basis state as a bit string; all zeros by default.
    #[arg(long)]
    pub input: Option<String>,
    /// Emit the composed unitary instead of the output state.
    #[arg(long)]
    pub matrix: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Path,
    Spin,
}

#[derive(Debug, Args)]
pub struct GieArgs {
    #[arg(long, value_enum, default_value_t = Variant::Path)]
    pub variant: Variant,
    /// Sweep the phase directly.
    #[arg(
        long,
        value_name = "START:END:COUNT",
        conflicts_with = "t_grid",
        allow_hyphen_values = true
    )]
    pub phi_grid: Option<String>,
    /// Sweep the interaction time (s) at fixed mass and separation.
    #[arg(long, value_name = "START:END:COUNT", allow_hyphen_values = true)]
    pub t_grid: Option<String>,
    /// Particle mass, kg.
    #[arg(long, default_value_t = 1e-14)]
    pub m: f64,
    /// Separation of the interacting branches, m.
    #[arg(long, default_value_t = 2.5e-4)]
    pub d2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GameMode {
    /// Exhaustive search over deterministic strategies.
    Max,
    /// Monte Carlo rounds of a named strategy.
    Simulate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GameStrategy {
    /// Alice first, sends `a`; Bob reads it.
    Optimal,
    /// Bob first, sends `b`; Alice reads it.
    OptimalBobFirst,
    /// No communication, fair-coin guesses.
    RandomGuess,
    /// Tables drawn from the seed.
    Random,
}

#[derive(Debug, Args)]
pub struct CausalGameArgs {
    #[arg(value_enum)]
    pub mode: GameMode,
    /// Message alphabet size, 1 to 4.
    #[arg(long, default_value_t = 2)]
    pub alphabet: usize,
    #[arg(long, value_enum, default_value_t = GameStrategy::Optimal)]
    pub strategy: GameStrategy,
    #[arg(long, default_value_t = 100_000)]
    pub rounds: u64,
}

/// Operations `I, X, Y, Z, H` and states `0, 1, +, -, +i, -i`.
#[derive(Debug, Args)]
pub struct SwitchOps {
    #[arg(long, default_value = "H")]
    pub op_a: String,
    #[arg(long, default_value = "Z")]
    pub op_b: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub target: String,
}

#[derive(Debug, Args)]
pub struct QswitchArgs {
    #[command(flatten)]
    pub ops: SwitchOps,
    #[arg(long, default_value = "+", allow_hyphen_values = true)]
    pub control: String,
    /// Alice's operation after the clock threshold; enables the clock-dependent map.
    #[arg(long)]
    pub a_late: Option<String>,
    /// Bob's operation after the clock threshold; enables the clock-dependent map.
    #[arg(long)]
    pub b_late: Option<String>,
    /// Clock threshold recorded with the clock-dependent map, s.
    #[arg(long, default_value_t = 1.0)]
    pub t_star: f64,
}

#[derive(Debug, Args)]
pub struct GravSwitchArgs {
    #[command(flatten)]
    pub ops: SwitchOps,
    /// Mass, kg.
    #[arg(long, default_value_t = 5.972e24)]
    pub mass: f64,
    /// Alice's radius, m.
    #[arg(long, default_value_t = 4.2164e7)]
    pub r_a: f64,
    /// Bob's radius, m.
    #[arg(long, default_value_t = 6.371e6)]
    pub r_b: f64,
    /// Light travel time between the agents, s; `|R_A − R_B|/c` by default.
    #[arg(long)]
    pub t_c: Option<f64>,
    /// Sending proper time, s; twice the ordering threshold by default.
    #[arg(long)]
    pub tau_star: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TemporalBellArgs {
    #[arg(long, default_value = "H")]
    pub op_a: String,
    #[arg(long, default_value = "Z")]
    pub op_b: String,
    /// Two-qubit computational basis state.
    #[arg(long, default_value = "00")]
    pub init: String,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Mz(_) => "mz",
            Command::Sg(_) => "sg",
            Command::Chsh(_) => "chsh",
            Command::Circuit(_) => "circuit",
            Command::Gie(_) => "gie",
            Command::CausalGame(_) => "causal-game",
            Command::Qswitch(_) => "qswitch",
            Command::GravSwitch(_) => "grav-switch",
            Command::TemporalBell(_) => "temporal-bell",
        }
    }
}
