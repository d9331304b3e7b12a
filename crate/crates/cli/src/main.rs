use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use serde::Serialize;

use ctxrep_core::io::{parse_counts, parse_joint_counts, parse_phases, phases_for_basis, phases_for_family};
use ctxrep_core::joint::DEFAULT_FLOAT_TOLERANCE;
use ctxrep_core::report::{
    ComplexContextJson, EntanglementJson, JointVectorsJson, MonteCarloJson, ProbabilityJson, RealContextJson,
    TableJson,
};
use ctxrep_core::{
    animal_acts_tables, build_complex_context, build_joint_vectors, build_real_context, is_product_with,
    monte_carlo_measurement, probabilities_from_counts, simulate_vessels, vessels_joint_table, Arithmetic,
    BlockSpectralFamily, ContextId, Error, JointTable, PhaseAssignment, VesselsConfig, VesselsMode,
    VesselsOutcomeCounts,
};

const EXIT_PARSE: u8 = 2;
const EXIT_SEMANTIC: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "ctxrep", version, about = "Contextual representations and entanglement checks")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
#[command(group(ArgGroup::new("arith").args(["exact", "float"])))]
struct ConfigArgs {
    /// Product-test tolerance (defaults: 0 exact, 1e-9 float)
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Decide with rational arithmetic (default)
    #[arg(long, global = true)]
    exact: bool,
    /// Decide with floating-point arithmetic
    #[arg(long, global = true)]
    float: bool,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100_000)]
    trials: u64,
    /// JSON map from basis label to phase in radians
    #[arg(long, global = true)]
    phases: Option<PathBuf>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Real and complex representations of one measurement context
    Represent {
        input: PathBuf,
        #[command(flatten)]
        context: ContextArgs,
        /// Block sizes of the spectral family, e.g. `2,2` (default: all 1)
        #[arg(long, value_delimiter = ',')]
        block_sizes: Option<Vec<usize>>,
    },
    /// Monte-Carlo run of the hidden-variable micro-dynamics
    Simulate {
        input: PathBuf,
        #[command(flatten)]
        context: ContextArgs,
    },
    /// Product/entangled decision for a joint count table
    Entanglement { input: PathBuf },
    /// Built-in case studies
    #[command(subcommand)]
    Scenario(Scenario),
}

#[derive(Args, Debug)]
struct ContextArgs {
    /// Entity label (default: input file stem)
    #[arg(long)]
    entity: Option<String>,
    #[arg(long, default_value = "p")]
    state: String,
    #[arg(long, default_value = "e")]
    measurement: String,
}

#[derive(Subcommand, Debug)]
enum Scenario {
    /// Horse/Bear × Growls/Whinnies survey data
    AnimalActs,
    /// Two vessels of water emptied by siphons
    Vessels {
        #[arg(long, value_parser = parse_mode)]
        mode: VesselsMode,
        #[arg(long, default_value_t = 20.0)]
        capacity: f64,
        #[arg(long, default_value_t = 10.0)]
        threshold: f64,
    },
}

fn parse_mode(s: &str) -> Result<VesselsMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Clone, Serialize)]
struct RunConfig {
    tolerance: f64,
    arithmetic: Arithmetic,
    seed: u64,
    trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    phases: Option<String>,
}

impl RunConfig {
    fn from_args(args: &ConfigArgs) -> Result<Self, Error> {
        let arithmetic = if args.float { Arithmetic::Float } else { Arithmetic::Exact };
        let tolerance = args.tolerance.unwrap_or(match arithmetic {
            Arithmetic::Exact => 0.0,
            Arithmetic::Float => DEFAULT_FLOAT_TOLERANCE,
        });
        if !(tolerance >= 0.0) || !tolerance.is_finite() {
            return Err(Error::InvalidConfig(format!("tolerance {tolerance} must be finite and nonnegative")));
        }
        if args.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".into()));
        }
        Ok(Self {
            tolerance,
            arithmetic,
            seed: args.seed,
            trials: args.trials,
            phases: args.phases.as_ref().map(|p| p.display().to_string()),
        })
    }
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, io::Error),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_parse() => EXIT_PARSE,
            CliError::Core(_) => EXIT_SEMANTIC,
            CliError::Io(..) => EXIT_PARSE,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

fn with_path(path: &Path, e: Error) -> CliError {
    match e {
        Error::Parse { line, column, message } => CliError::Core(Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        }),
        other => CliError::Core(other),
    }
}

fn load_phases(cfg: &ConfigArgs) -> Result<Vec<(String, f64)>, CliError> {
    match &cfg.phases {
        Some(path) => parse_phases(&read(path)?).map_err(|e| with_path(path, e)),
        None => Ok(Vec::new()),
    }
}

fn context_for(input: &Path, args: &ContextArgs) -> Result<ContextId, Error> {
    let entity = args.entity.clone().unwrap_or_else(|| {
        input
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .filter(|s| !s.is_empty())
            .unwrap_or_else(|| "entity".into())
    });
    ContextId::new(entity, args.state.clone(), args.measurement.clone())
}

#[derive(Serialize)]
struct RepresentReport {
    config: RunConfig,
    counts: Vec<u64>,
    probabilities: ProbabilityJson,
    real: RealContextJson,
    complex: ComplexContextJson,
    born_probabilities: Vec<f64>,
}

#[derive(Serialize)]
struct SimulateReport {
    config: RunConfig,
    probabilities: ProbabilityJson,
    #[serde(flatten)]
    monte_carlo: MonteCarloJson,
}

#[derive(Serialize)]
struct EntanglementReportJson {
    config: RunConfig,
    table: TableJson,
    #[serde(flatten)]
    report: EntanglementJson,
    joint_vectors: JointVectorsJson,
}

#[derive(Serialize)]
struct AnimalActsReport {
    config: RunConfig,
    scenario: &'static str,
    animal: ProbabilityJson,
    acts: ProbabilityJson,
    animal_complex_moduli: Vec<f64>,
    acts_complex_moduli: Vec<f64>,
    joint: EntanglementReportJson,
}

#[derive(Serialize)]
struct VesselsReport {
    config: RunConfig,
    scenario: &'static str,
    vessels: VesselsConfig,
    counts: VesselsOutcomeCounts,
    joint: EntanglementReportJson,
}

fn entanglement_json(
    t: &JointTable,
    cfg: &RunConfig,
    phase_entries: &[(String, f64)],
) -> Result<EntanglementReportJson, CliError> {
    let report = is_product_with(t, cfg.tolerance, cfg.arithmetic)?;
    let phases = phases_for_basis(&t.basis_labels(), phase_entries)?;
    let (v, w) = build_joint_vectors(t, &phases)?;
    Ok(EntanglementReportJson {
        config: cfg.clone(),
        table: t.into(),
        report: EntanglementJson::new(t, &report),
        joint_vectors: JointVectorsJson::new(&v, &w),
    })
}

fn run(cli: &Cli) -> Result<serde_json::Value, CliError> {
    let cfg = RunConfig::from_args(&cli.config)?;
    let phase_entries = load_phases(&cli.config)?;
    let value = match &cli.command {
        Command::Represent {
            input,
            context,
            block_sizes,
        } => {
            let counts = parse_counts(&read(input)?).map_err(|e| with_path(input, e))?;
            let p = probabilities_from_counts(&counts);
            let ctx = context_for(input, context)?;
            let family = match block_sizes {
                Some(sizes) => BlockSpectralFamily::contiguous(sizes)?,
                None => BlockSpectralFamily::rank_one(p.len())?,
            };
            let phases = phases_for_family(p.outcomes(), &family, &phase_entries)?;
            let v = build_real_context(&p, ctx.clone());
            let w = build_complex_context(&p, family, phases, ctx)?;
            serde_json::to_value(RepresentReport {
                config: cfg,
                counts: counts.counts().to_vec(),
                probabilities: (&p).into(),
                real: (&v).into(),
                born_probabilities: w.probabilities(),
                complex: (&w).into(),
            })
        }
        Command::Simulate { input, context } => {
            let counts = parse_counts(&read(input)?).map_err(|e| with_path(input, e))?;
            let p = probabilities_from_counts(&counts);
            let v = build_real_context(&p, context_for(input, context)?);
            let mc = monte_carlo_measurement(&v, cfg.trials, cfg.seed)?;
            serde_json::to_value(SimulateReport {
                config: cfg,
                probabilities: (&p).into(),
                monte_carlo: MonteCarloJson::new(&v, &mc),
            })
        }
        Command::Entanglement { input } => {
            let t = parse_joint_counts(&read(input)?).map_err(|e| with_path(input, e))?;
            serde_json::to_value(entanglement_json(&t, &cfg, &phase_entries)?)
        }
        Command::Scenario(Scenario::AnimalActs) => {
            let (e, f, g) = animal_acts_tables();
            let moduli = |p: &ctxrep_core::ProbabilityVector| -> Result<Vec<f64>, Error> {
                let ctx = ContextId::new("Animal Acts", "ground", "survey")?;
                let family = BlockSpectralFamily::rank_one(p.len())?;
                Ok(build_complex_context(p, family, PhaseAssignment::zeros(p.len()), ctx)?.moduli())
            };
            serde_json::to_value(AnimalActsReport {
                scenario: "animal-acts",
                animal: (&e).into(),
                acts: (&f).into(),
                animal_complex_moduli: moduli(&e)?,
                acts_complex_moduli: moduli(&f)?,
                joint: entanglement_json(&g, &cfg, &phase_entries)?,
                config: cfg,
            })
        }
        Command::Scenario(Scenario::Vessels {
            mode,
            capacity,
            threshold,
        }) => {
            let vessels = VesselsConfig {
                capacity: *capacity,
                threshold: *threshold,
                mode: *mode,
                trials: cfg.trials,
                seed: cfg.seed,
            };
            let counts = simulate_vessels(&vessels)?;
            let t = vessels_joint_table(&counts)?;
            serde_json::to_value(VesselsReport {
                scenario: "vessels",
                joint: entanglement_json(&t, &cfg, &phase_entries)?,
                vessels,
                counts,
                config: cfg,
            })
        }
    };
    Ok(value.expect("report types serialize"))
}

fn emit(value: &serde_json::Value, output: Option<&Path>) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(value) => match emit(&value, cli.config.output.as_deref()) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: failed to write report: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
