use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use hopdist::ablation::run_ablation;
use hopdist::bounds::{
    distance3_pair_bound, lower_bound_from_caps, walk_count_bound, BoundInput, BoundResult,
};
use hopdist::chains::{chains_to_json, chains_to_tsv, load_chains, ChainStats};
use hopdist::nf::{exact_nf, hll_nf, nf_to_tsv};
use hopdist::{evaluate_graph, DegreeSequence, Graph, HllParams, Mode, Parallelism};

const EXIT_INFEASIBLE: u8 = 6;

const EXIT_HELP: &str = "Exit codes:
  0  success
  2  usage error
  3  I/O failure
  4  malformed input file
  5  domain error (out-of-range value, violated precondition, size guard,
     statistic undefined for the input)
  6  requested bound is infeasible for the given inputs";

#[derive(Parser)]
#[command(
    name = "hopdist",
    version,
    about = "Distance-distribution analytics for unweighted graphs",
    after_help = EXIT_HELP
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closeness metrics: average distance with its confidence, harmonic
    /// diameter, median distance, reachable pairs.
    Stats {
        /// Edge-list file (two whitespace-separated node ids per line).
        graph: PathBuf,
        /// Treat arcs as one-way instead of symmetrizing.
        #[arg(long)]
        directed: bool,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        threads: ThreadArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Neighborhood-function table: one TSV row per step with N(t) and its
    /// raw increment.
    Nf {
        graph: PathBuf,
        #[arg(long)]
        directed: bool,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        threads: ThreadArgs,
    },
    /// Lower bounds on the average distance from aggregate quantities.
    Bounds {
        #[command(subcommand)]
        source: BoundsCmd,
    },
    /// Remove nodes in decreasing in-degree order until target arc
    /// fractions are gone, re-measuring the metrics at each stop.
    Ablate {
        graph: PathBuf,
        /// Comma-separated arc fractions in (0, 1], strictly increasing.
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<f64>,
        #[arg(long)]
        directed: bool,
        #[command(flatten)]
        engine: EngineArgs,
        #[command(flatten)]
        threads: ThreadArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Statistics over hop-count chain files (integer per line, `*` for a
    /// broken chain, `group:` headers to split datasets).
    Chains {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Bound from the four scalars everyone publishes: nodes, arcs, max
    /// degree, reachable pairs.
    Scalars {
        #[arg(long)]
        n: f64,
        #[arg(long)]
        m: f64,
        #[arg(long)]
        max_degree: f64,
        #[arg(long)]
        r: f64,
        /// Deepest distance class given its own cap.
        #[arg(long, default_value_t = 3)]
        max_ell: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Bound from an undirected degree-sequence file (one degree per line):
    /// caps at distance 1, 2, 3 are the arc count, the sum of squared
    /// degrees, and the distance-3 degree bound.
    Degrees {
        file: PathBuf,
        /// Reachable ordered pairs (self pairs included).
        #[arg(long)]
        r: f64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Bound a graph file directly and compare with its exact average.
    Graph {
        file: PathBuf,
        #[arg(long)]
        directed: bool,
        #[arg(long, default_value_t = 3)]
        max_ell: usize,
        #[command(flatten)]
        threads: ThreadArgs,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Args)]
struct EngineArgs {
    /// Estimate with HyperLogLog diffusion instead of exact BFS sweeps.
    #[arg(long)]
    hll: bool,
    /// log2 of the registers per sketch (HLL mode).
    #[arg(short = 'b', long, default_value_t = 8, value_parser = clap::value_parser!(u8).range(4..=16))]
    register_exp: u8,
    /// Sketch hash seed (HLL mode).
    #[arg(long, env = "HOPDIST_SEED", default_value_t = 0)]
    seed: u64,
    /// Relative-change stopping threshold (HLL mode).
    #[arg(long, default_value_t = 1e-4)]
    eps: f64,
    /// Iteration cap (HLL mode).
    #[arg(long, default_value_t = 128)]
    max_t: usize,
}

impl EngineArgs {
    fn mode(&self) -> Mode {
        if self.hll {
            Mode::Estimated
        } else {
            Mode::Exact
        }
    }

    fn params(&self) -> HllParams {
        HllParams {
            register_exp: self.register_exp,
            seed: self.seed,
            eps: self.eps,
            max_t: self.max_t,
        }
    }
}

#[derive(Args)]
struct ThreadArgs {
    /// Worker threads for graph sweeps; 0 means one per core. The output
    /// bytes do not depend on this.
    #[arg(long, env = "HOPDIST_THREADS", default_value_t = 0)]
    threads: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Tsv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("hopdist: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &hopdist::Error) -> u8 {
    use hopdist::Error;
    match err {
        Error::Io(_) => 3,
        Error::Parse { .. } => 4,
        Error::Range(_) | Error::Contract(_) | Error::UndefinedInput(_) | Error::Guard(_) => 5,
    }
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool construction cannot fail for a positive count")
        .install(f)
}

fn run(command: Command) -> hopdist::Result<ExitCode> {
    match command {
        Command::Stats {
            graph,
            directed,
            engine,
            threads,
            format,
        } => {
            let g = Graph::load_edge_list(&graph, directed)?;
            let params = engine.params();
            let report = with_pool(threads.threads, || {
                evaluate_graph(&g, engine.mode(), &params, Parallelism::Parallel)
            })?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Tsv => print!("{}", report.to_tsv()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Nf {
            graph,
            directed,
            engine,
            threads,
        } => {
            let g = Graph::load_edge_list(&graph, directed)?;
            let params = engine.params();
            let nf = with_pool(threads.threads, || match engine.mode() {
                Mode::Exact => Ok(exact_nf(&g, None, Parallelism::Parallel)),
                Mode::Estimated => hll_nf(&g, &params, Parallelism::Parallel),
            })?;
            print!("{}", nf_to_tsv(&nf));
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { source } => run_bounds(source),
        Command::Ablate {
            graph,
            targets,
            directed,
            engine,
            threads,
            format,
        } => {
            let g = Graph::load_edge_list(&graph, directed)?;
            let params = engine.params();
            let report = with_pool(threads.threads, || {
                run_ablation(&g, &targets, engine.mode(), &params, Parallelism::Parallel)
            })?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Tsv => print!("{}", report.to_tsv()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Chains { files, format } => {
            let mut all = Vec::new();
            for file in &files {
                let label = file
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| file.display().to_string());
                for ds in load_chains(file, &label)? {
                    all.push(ChainStats::compute(&ds)?);
                }
            }
            match format {
                Format::Json => println!("{}", chains_to_json(&all)),
                Format::Tsv => print!("{}", chains_to_tsv(&all)),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn run_bounds(source: BoundsCmd) -> hopdist::Result<ExitCode> {
    match source {
        BoundsCmd::Scalars {
            n,
            m,
            max_degree,
            r,
            max_ell,
            format,
        } => {
            let result = walk_count_bound(n, m, max_degree, r, max_ell)?;
            let payload = serde_json::json!({
                "kind": "scalars",
                "n": n,
                "m": m,
                "max_degree": max_degree,
                "r": r,
                "max_ell": max_ell,
                "result": result,
            });
            print_bound(&payload, &result, format)
        }
        BoundsCmd::Degrees { file, r, format } => {
            let seq = DegreeSequence::load(&file)?;
            let caps = vec![
                seq.total() as f64,
                seq.sum_of_squares() as f64,
                distance3_pair_bound(&seq)?,
            ];
            let input = BoundInput {
                r,
                n: seq.len() as f64,
                bounds: caps.clone(),
            };
            let result = lower_bound_from_caps(&input)?;
            let payload = serde_json::json!({
                "kind": "degrees",
                "n": seq.len() as f64,
                "r": r,
                "caps": caps,
                "result": result,
            });
            print_bound(&payload, &result, format)
        }
        BoundsCmd::Graph {
            file,
            directed,
            max_ell,
            threads,
            format,
        } => {
            let g = Graph::load_edge_list(&file, directed)?;
            let (report, result, degree_result) = with_pool(threads.threads, || {
                let report = evaluate_graph(
                    &g,
                    Mode::Exact,
                    &HllParams::default(),
                    Parallelism::Parallel,
                )?;
                let r = report.reachable_pairs;
                let n = g.num_nodes() as f64;
                let result = walk_count_bound(
                    n,
                    g.num_arcs() as f64,
                    g.max_out_degree() as f64,
                    r,
                    max_ell,
                )?;
                // The distance-2 and distance-3 degree caps assume in-degree
                // equals out-degree, so they only apply undirected.
                let degree_result = if directed {
                    None
                } else {
                    let seq = g.degree_sequence();
                    let caps = vec![
                        seq.total() as f64,
                        seq.sum_of_squares() as f64,
                        distance3_pair_bound(&seq)?,
                    ];
                    Some(lower_bound_from_caps(&BoundInput { r, n, bounds: caps })?)
                };
                Ok::<_, hopdist::Error>((report, result, degree_result))
            })?;
            let payload = serde_json::json!({
                "kind": "graph",
                "n": g.num_nodes(),
                "m": g.num_arcs(),
                "max_degree": g.max_out_degree(),
                "r": report.reachable_pairs,
                "exact_avg_distance": report.avg_distance,
                "scalars": result,
                "degrees": degree_result,
            });
            // Degree caps can be infeasible on dense graphs; the scalar
            // bound never is. Only the former decides the exit code.
            let gate = degree_result.unwrap_or_else(|| result.clone());
            print_bound(&payload, &gate, format)
        }
    }
}

fn print_bound(
    payload: &serde_json::Value,
    result: &BoundResult,
    format: Format,
) -> hopdist::Result<ExitCode> {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(payload).expect("bound serialization cannot fail")
        ),
        Format::Tsv => {
            println!("avg_lower_bound\tell_used\tfeasible\tfeasible_prefix");
            println!(
                "{}\t{}\t{}\t{}",
                result.avg_lower_bound,
                result.ell_used,
                result.feasible,
                result
                    .feasible_prefix
                    .map_or("-".to_string(), |p| p.to_string())
            );
        }
    }
    if !result.feasible {
        eprintln!(
            "hopdist: caps are infeasible for the given r and n; longest usable prefix: {} entries",
            result.feasible_prefix.unwrap_or(0)
        );
        return Ok(ExitCode::from(EXIT_INFEASIBLE));
    }
    Ok(ExitCode::SUCCESS)
}
