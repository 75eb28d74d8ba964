use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use vdcut_core::Result;
use vdcut_harness::{
    cut_check, emit, fit_exponent, optimize_parameters, overhead_sweep, parse_methods, parse_range, run_experiment,
    write_csv, write_parameters, ExperimentConfig, MapSpec, ProblemConfig,
};
use vdcut_noise::Preset;

#[derive(Parser)]
#[command(name = "vdcut", version, about = "Virtual distillation with circuit cutting: MaxCut VQE experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the method × noise matrix from a config file.
    Run(RunArgs),
    /// Find ansatz parameters with the noiseless optimizer and write them one per line.
    Optimize(OptimizeArgs),
    /// Routed CNOT counts of original versus two-copy circuits.
    OverheadSweep(SweepArgs),
    /// Exact wire-cutting identity self-test.
    CutCheck(CutCheckArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output file stem (overrides the config); writes STEM.csv and STEM.json.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    shots: Option<u64>,
    /// Single noise preset: basic, basic+gct, basic+gct+rct or noiseless.
    #[arg(long)]
    noise: Option<Preset>,
    /// Comma-separated subset of none,vd,vd+zne,vd+cut.
    #[arg(long)]
    methods: Option<String>,
}

#[derive(Args)]
struct OptimizeArgs {
    /// Config file naming the problem and ansatz; `--ring` is an alternative.
    #[arg(long, conflicts_with = "ring")]
    config: Option<PathBuf>,
    /// Ring graph size when no config is given.
    #[arg(long)]
    ring: Option<usize>,
    #[arg(long, default_value_t = 2)]
    reps: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "full")]
    map: MapSpec,
    /// Qubit counts, `a..b` inclusive or a comma list.
    #[arg(long, default_value = "4..12")]
    qubits: String,
    /// Entangling layer counts, `a..b` inclusive or a comma list.
    #[arg(long, default_value = "2,4,8")]
    layers: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CutCheckArgs {
    #[arg(long, default_value_t = 200)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn run(args: RunArgs) -> Result<ExitCode> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if let Some(out) = args.out {
        config.output = out;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(shots) = args.shots {
        config.shots = shots;
    }
    if let Some(preset) = args.noise {
        config.presets = vec![preset];
    }
    if let Some(methods) = args.methods {
        config.methods = parse_methods(&methods)?;
    }
    config.validate()?;
    let result = run_experiment(&config)?;
    emit(&result, &config.output)?;
    println!("ideal {:.6}", result.ideal);
    for cell in &result.cells {
        match (&cell.error, cell.expectation, cell.abs_error) {
            (Some(e), _, _) => println!("{:<24} error: {e}", cell.label()),
            (None, Some(value), Some(error)) => println!("{:<24} {value:>10.6}  error {error:.6}", cell.label()),
            _ => unreachable!("successful cells carry values"),
        }
    }
    println!("wrote {} and {}", config.csv_path().display(), config.json_path().display());
    Ok(if result.failed_cells() > 0 { ExitCode::from(2) } else { ExitCode::SUCCESS })
}

fn optimize(args: OptimizeArgs) -> Result<ExitCode> {
    let mut config = match (&args.config, args.ring) {
        (Some(path), _) => ExperimentConfig::load(path)?,
        (None, Some(n)) => {
            let mut config = ExperimentConfig::new(ProblemConfig::ring(n));
            config.reps = args.reps;
            config
        }
        (None, None) => return Err(vdcut_core::Error::Invalid("optimize needs --config or --ring".into())),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let problem = config.problem.build()?;
    let ansatz = config.ansatz(problem.vertices())?;
    let params = optimize_parameters(&problem, &ansatz, config.seed)?;
    let energy = vdcut_harness::noiseless_energy(&problem, &ansatz, &params)?;
    write_parameters(&args.out, &params)?;
    println!("noiseless <H> = {energy:.10} (max cut {})", problem.max_cut().0);
    Ok(ExitCode::SUCCESS)
}

fn sweep(args: SweepArgs) -> Result<ExitCode> {
    let qubits = parse_range(&args.qubits)?;
    let layers = parse_range(&args.layers)?;
    let rows = overhead_sweep(&qubits, &layers, &args.map)?;
    write_csv(&args.out, &rows)?;
    for &l in &layers {
        if let Ok(exponent) = fit_exponent(&rows, l) {
            println!("layers {l}: extra-CNOT exponent {exponent:.3}");
        }
    }
    println!("wrote {}", args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn check(args: CutCheckArgs) -> Result<ExitCode> {
    let problem = vdcut_harness::MaxCutProblem::ring(4)?;
    let ansatz = vdcut_core::RealAmplitudes::new(4, 2, vdcut_core::Entanglement::Circular)?;
    let benchmark = ansatz.bind(&optimize_parameters(&problem, &ansatz, args.seed)?)?;
    let report = cut_check(args.trials, args.seed, &benchmark)?;
    let pass = report.random_max_tv < 1e-10 && report.pipeline_max_tv < 1e-9;
    println!(
        "{} random cuts: max TV {:.3e}; {} pairwise pipelines: max TV {:.3e}; {}",
        report.random_trials,
        report.random_max_tv,
        report.pipelines,
        report.pipeline_max_tv,
        if pass { "ok" } else { "FAILED" }
    );
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => run(args),
        Command::Optimize(args) => optimize(args),
        Command::OverheadSweep(args) => sweep(args),
        Command::CutCheck(args) => check(args),
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(1)
    })
}
