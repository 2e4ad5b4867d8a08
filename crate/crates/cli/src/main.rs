use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use smoothopt::adversary::{AnchorMode, SmoothedAdversaryConfig, ValueMode};
use smoothopt::experiment::{
    records_to_csv, run_experiment, run_repetition, Environment, ExperimentConfig, LearnerKind, RepetitionLog,
};
use smoothopt::heuristics::{payoff_curve, KMeansInstance, KnapsackInstance, MwisInstance};

/// Online learning over [0,1) against smoothed adversaries and greedy
/// heuristic payoffs.
#[derive(Parser, Debug)]
#[command(name = "smoothopt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Smoothed adversary with k pieces and density bound sigma.
    Smoothed {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        sigma: Option<f64>,
        #[arg(long, value_enum)]
        anchors: Option<Anchors>,
        #[arg(long, value_enum)]
        values: Option<Values>,
        /// Key-value adversary config (k, sigma, anchors, values, seed);
        /// flags override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Adaptive adversary that forces linear regret.
    Worstcase {
        #[command(flatten)]
        run: RunArgs,
    },
    /// Greedy knapsack with items ordered by v / s^rho.
    Knapsack {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        capacity: f64,
    },
    /// Greedy maximum weight independent set scored by w / deg^rho.
    Mwis {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long = "edge-prob", default_value_t = 0.3)]
        edge_prob: f64,
    },
    /// Adaptive greedy weighted k-means.
    Kmeans {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Number of gaussian clusters the points are drawn from.
        #[arg(long, default_value_t = 3)]
        centers: usize,
    },
    /// Print the exact payoff curve of an instance file.
    Curve {
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Horizon.
    #[arg(long = "T", default_value_t = 1000)]
    horizon: usize,
    /// Independent repetitions.
    #[arg(long, default_value_t = 20)]
    rounds: usize,
    #[arg(long, value_enum, default_value_t = Learner::Fullinfo)]
    learner: Learner,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Regret CSV; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Reuse one random instance per repetition.
    #[arg(long = "fixed-instance")]
    fixed_instance: bool,
    /// Per-round CSV of repetition 0.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Payoff functions of repetition 0, two lines per round.
    #[arg(long = "payoff-log")]
    payoff_log: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Learner {
    Fullinfo,
    Bandit,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Anchors {
    Fixed,
    Random,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Values {
    Biased,
    Uniform,
    Alternating,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Problem {
    Knapsack,
    Mwis,
    Kmeans,
}

enum Failure {
    Config(String),
    Io(String),
}

impl From<smoothopt::Error> for Failure {
    fn from(e: smoothopt::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn threads() -> Result<usize, Failure> {
    match std::env::var("SMOOTHOPT_THREADS") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Config(format!("SMOOTHOPT_THREADS must be a count, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

fn experiment(env: Environment, run: &RunArgs) -> Result<(), Failure> {
    let learner = match run.learner {
        Learner::Fullinfo => LearnerKind::FullInfo,
        Learner::Bandit => LearnerKind::Bandit,
    };
    let mut cfg = ExperimentConfig::new(env, learner, run.horizon, run.rounds);
    cfg.eta = run.eta;
    cfg.mu = run.mu;
    cfg.gamma = run.gamma;
    cfg.seed = run.seed;
    cfg.fixed_instance = run.fixed_instance;
    cfg.threads = threads()?;
    let records = run_experiment(&cfg)?;
    write(run.out.as_deref(), &records_to_csv(&records)?)?;

    if run.trace.is_some() || run.payoff_log.is_some() {
        let mut log = RepetitionLog {
            keep_payoffs: run.payoff_log.is_some(),
            ..Default::default()
        };
        run_repetition(&cfg, 0, Some(&mut log))?;
        if let Some(p) = &run.trace {
            let mut text = String::from(RepetitionLog::TRACE_HEADER);
            text.push('\n');
            for row in &log.trace {
                text.push_str(row);
                text.push('\n');
            }
            write(Some(p), &text)?;
        }
        if let Some(p) = &run.payoff_log {
            let text: String = log.payoffs.iter().map(|f| f.to_text()).collect();
            write(Some(p), &text)?;
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Smoothed {
            run,
            k,
            sigma,
            anchors,
            values,
            config,
        } => {
            let mut cfg = match &config {
                Some(p) => SmoothedAdversaryConfig::from_text(&read(p)?)?,
                None => SmoothedAdversaryConfig::default(),
            };
            if let Some(k) = k {
                cfg.k = k;
            }
            if let Some(s) = sigma {
                cfg.sigma = s;
            }
            if let Some(a) = anchors {
                cfg.anchors = match a {
                    Anchors::Fixed => AnchorMode::Fixed,
                    Anchors::Random => AnchorMode::Random,
                };
            }
            if let Some(v) = values {
                cfg.values = match v {
                    Values::Biased => ValueMode::Biased,
                    Values::Uniform => ValueMode::Uniform,
                    Values::Alternating => ValueMode::Alternating,
                };
            }
            experiment(Environment::Smoothed(cfg), &run)
        }
        Command::Worstcase { run } => experiment(Environment::WorstCase, &run),
        Command::Knapsack { run, n, capacity } => experiment(Environment::Knapsack { n, capacity }, &run),
        Command::Mwis { run, n, edge_prob } => experiment(Environment::Mwis { n, edge_prob }, &run),
        Command::Kmeans { run, n, k, centers } => experiment(
            Environment::KMeans {
                n,
                k,
                gaussians: centers,
            },
            &run,
        ),
        Command::Curve { problem, instance, out } => {
            let text = read(&instance)?;
            let curve = match problem {
                Problem::Knapsack => payoff_curve(&KnapsackInstance::from_text(&text)?),
                Problem::Mwis => payoff_curve(&MwisInstance::from_text(&text)?),
                Problem::Kmeans => payoff_curve(&KMeansInstance::from_text(&text)?),
            };
            write(out.as_deref(), &curve.to_text())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
