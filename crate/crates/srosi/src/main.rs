//! Command-line front end of the `srosi` library.

use clap::{Args, Parser, Subcommand};
use srosi::harness::{
    gen_inventory, gen_newsvendor, gen_portfolio, gen_shipment, run_concentration, run_convergence, run_experiment,
    write_csv, ExperimentConfig, GeneratorKind, KnnRule, StudyConfig, WeightSpec,
};
use srosi::lp::Backend;
use srosi::singleperiod::{solve_cvar_portfolio, PortfolioProblem};
use srosi::srolp::{newsvendor_problem, solve_sro_with, DynamicProblem, SroOptions, Support, UncertaintySpec};
use srosi::weights::{Dataset, ForestParams, KernelKind};
use srosi::{Error, Norm};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "srosi", version, about = "Sample robust optimization with side information")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a synthetic dataset (and its decision problem) from a generator.
    Generate {
        /// newsvendor, inventory, portfolio or shipment.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Dataset CSV with columns g1.., x1...
        #[arg(long)]
        out: PathBuf,
        /// Where to write the problem JSON of multi-stage generators.
        #[arg(long)]
        problem_out: Option<PathBuf>,
    },
    /// Solve a multi-stage problem at one query point and print the policy as JSON.
    Solve {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[command(flatten)]
        weights: WeightArgs,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value = "linf")]
        norm: Norm,
        /// orthant or free.
        #[arg(long, default_value = "orthant")]
        support: String,
        /// One recourse rule for every sample.
        #[arg(long)]
        shared_recourse: bool,
        /// auto, simplex or interior.
        #[arg(long, default_value = "auto")]
        backend: String,
    },
    /// Solve the mean-cVaR portfolio at one query point and print the allocation as JSON.
    Portfolio {
        #[arg(long)]
        data: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value = "l1")]
        norm: Norm,
        #[command(flatten)]
        weights: WeightArgs,
    },
    /// Run an experiment described by a JSON config and write result CSV.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Result CSV; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wasserstein distance of the weighted empirical conditional law to the truth.
    Concentration {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal value of the weighted robust newsvendor against its oracle.
    Convergence {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Weight function and query point shared by `solve` and `portfolio`.
#[derive(Args)]
struct WeightArgs {
    /// uniform, knn, kernel, cart or rf.
    #[arg(long, default_value = "uniform")]
    weights: String,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value = "gaussian")]
    kernel: KernelKind,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, default_value_t = srosi::weights::DEFAULT_MIN_LEAF)]
    min_leaf: usize,
    #[arg(long, default_value_t = srosi::weights::DEFAULT_MAX_DEPTH)]
    max_depth: usize,
    #[arg(long, default_value_t = 100)]
    trees: usize,
    #[arg(long, default_value_t = 0)]
    forest_seed: u64,
    /// Comma-separated side information; the mean feature vector when omitted.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    query: Option<Vec<f64>>,
}

/// A failure and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

fn config_error(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidParameter(_)
            | Error::UnsupportedNorm(_)
            | Error::TooLarge(_)
            | Error::Io(_)
            | Error::Parse(_)
            | Error::InvalidModel(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| config_error(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(bytes).map_err(|e| config_error(e.to_string())),
    }
}

fn csv_bytes<T: serde::Serialize>(rows: &[T]) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    Ok(buf)
}

fn parse_enum<T: serde::de::DeserializeOwned>(what: &str, s: &str) -> Result<T, Failure> {
    serde_json::from_value(serde_json::Value::String(s.to_ascii_lowercase()))
        .map_err(|_| config_error(format!("unknown {what} {s:?}")))
}

/// Reads a dataset whose responses form a single stage when `stage_dims` is `None`.
fn read_dataset(path: &Path, stage_dims: Option<Vec<usize>>) -> Result<Dataset, Failure> {
    let text = read(path)?;
    let dims = match stage_dims {
        Some(d) => d,
        None => {
            let header = text.lines().next().unwrap_or_default();
            vec![header.split(',').filter(|c| c.trim().starts_with('x')).count()]
        }
    };
    Ok(Dataset::read_csv(text.as_bytes(), dims)?)
}

fn weight_spec(args: &WeightArgs, d_gamma: usize) -> Result<WeightSpec, Failure> {
    Ok(match args.weights.to_ascii_lowercase().as_str() {
        "uniform" => WeightSpec::Uniform,
        "knn" => WeightSpec::Knn { k: KnnRule::Fixed(args.k.ok_or_else(|| config_error("--weights knn needs --k"))?) },
        "kernel" => WeightSpec::Kernel {
            kernel: args.kernel,
            h: args.h.ok_or_else(|| config_error("--weights kernel needs --h"))?,
        },
        "cart" => WeightSpec::Cart { min_leaf: args.min_leaf, max_depth: args.max_depth },
        "rf" => WeightSpec::Rf {
            params: ForestParams {
                n_trees: args.trees,
                min_leaf: args.min_leaf,
                max_depth: args.max_depth,
                ..ForestParams::defaults(d_gamma)
            },
            seed: args.forest_seed,
        },
        other => return Err(config_error(format!("unknown weight method {other:?}"))),
    })
}

fn query_weights(args: &WeightArgs, data: &Dataset) -> Result<(Vec<f64>, srosi::weights::WeightVector), Failure> {
    let query = match &args.query {
        Some(q) => q.clone(),
        None => {
            (0..data.d_gamma()).map(|k| data.gammas.iter().map(|g| g[k]).sum::<f64>() / data.len() as f64).collect()
        }
    };
    let w = weight_spec(args, data.d_gamma())?.fit(data)?.weights(&query)?;
    Ok((query, w))
}

fn print_json(value: &serde_json::Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| config_error(e.to_string()))?;
    write_output(None, format!("{text}\n").as_bytes())
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Generate { kind, n, seed, out, problem_out } => {
            if n == 0 {
                return Err(config_error("--n must be positive"));
            }
            let (data, prob) = match parse_enum::<GeneratorKind>("generator", &kind)? {
                GeneratorKind::Newsvendor => (gen_newsvendor(n, seed), Some(newsvendor_problem(1.0, 1.0)?)),
                GeneratorKind::Inventory => {
                    let (d, p) = gen_inventory(n, seed)?;
                    (d, Some(p))
                }
                GeneratorKind::Shipment => {
                    let (d, p) = gen_shipment(n, seed)?;
                    (d, Some(p))
                }
                GeneratorKind::Portfolio => (gen_portfolio(n, seed), None),
            };
            let mut buf = Vec::new();
            data.write_csv(&mut buf)?;
            write_output(Some(&out), &buf)?;
            match (problem_out, prob) {
                (Some(path), Some(p)) => write_output(Some(&path), p.to_json()?.as_bytes()),
                (Some(_), None) => Err(config_error("the portfolio generator has no multi-stage problem")),
                _ => Ok(()),
            }
        }
        Command::Solve { problem, data, weights, eps, norm, support, shared_recourse, backend } => {
            let prob = DynamicProblem::from_json(&read(&problem)?)?;
            let data = read_dataset(&data, Some(prob.xi_dims.clone()))?;
            let support = match support.to_ascii_lowercase().as_str() {
                "orthant" | "nonnegorthant" => Support::NonnegOrthant,
                "free" => Support::Free,
                other => return Err(config_error(format!("unknown support {other:?}"))),
            };
            let backend: Backend = parse_enum("backend", &backend)?;
            let u = UncertaintySpec::new(eps, norm, support)?;
            let (query, w) = query_weights(&weights, &data)?;
            let opts = SroOptions { shared_recourse, backend, ..SroOptions::default() };
            let sol = solve_sro_with(&prob, &data, &w, &u, &opts)?;
            print_json(&serde_json::json!({
                "objective": sol.objective,
                "query": query,
                "weights": w.as_slice(),
                "policy": sol.policy.primary,
                "contributions": sol.contributions,
            }))
        }
        Command::Portfolio { data, alpha, lambda, eps, norm, weights } => {
            let data = read_dataset(&data, None)?;
            let prob = PortfolioProblem::new(data.d_xi(), alpha, lambda)?;
            let (query, w) = query_weights(&weights, &data)?;
            let sol = solve_cvar_portfolio(&prob, &data, &w, eps, norm)?;
            print_json(&serde_json::json!({
                "value": sol.value,
                "query": query,
                "x": sol.x,
                "beta": sol.beta,
            }))
        }
        Command::Experiment { config, out } => {
            let cfg = ExperimentConfig::from_json(&read(&config)?)?;
            let rows = run_experiment(&cfg)?;
            write_output(out.as_deref(), &csv_bytes(&rows)?)?;
            let failed = rows.iter().filter(|r| !r.is_ok()).count();
            if failed > 0 {
                return Err(Failure { code: 2, message: format!("{failed} of {} rows failed", rows.len()) });
            }
            Ok(())
        }
        Command::Concentration { config, out } => {
            let cfg = StudyConfig::from_json(&read(&config)?)?;
            let rows = run_concentration(&cfg.n_grid, cfg.reps, cfg.schedule, cfg.seed)?;
            write_output(out.as_deref(), &csv_bytes(&rows)?)
        }
        Command::Convergence { config, out } => {
            let cfg = StudyConfig::from_json(&read(&config)?)?;
            let rows = run_convergence(&cfg.n_grid, cfg.reps, cfg.schedule, cfg.seed)?;
            write_output(out.as_deref(), &csv_bytes(&rows)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
