use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qrnet::compare;
use qrnet::config::{OutputFormat, RunConfig, DEFAULT_FORMATS};
use qrnet::error::{CliError, EXIT_NOT_CONVERGED, EXIT_OK};
use qrnet::fetch::fetch_dump;
use qrnet::pipeline::run_analyze;
use qrnet_core::analytics::StdEstimator;
use qrnet_core::qr::{TimeUnit, DEFAULT_EPSILON};

#[derive(Parser)]
#[command(
    name = "qrnet",
    version,
    about = "Questioner-responder network analysis of Stack Exchange dumps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum UnitArg {
    Hours,
    Minutes,
    Seconds,
}

impl From<UnitArg> for TimeUnit {
    fn from(u: UnitArg) -> Self {
        match u {
            UnitArg::Hours => TimeUnit::Hours,
            UnitArg::Minutes => TimeUnit::Minutes,
            UnitArg::Seconds => TimeUnit::Seconds,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
    Edgelist,
    Dot,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Edgelist => OutputFormat::Edgelist,
            FormatArg::Dot => OutputFormat::Dot,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Download `<slug>.7z` from the dump archive.
    Fetch {
        /// Site slug, e.g. `genai.stackexchange.com`.
        slug: String,
        #[arg(long, default_value = ".")]
        dest: PathBuf,
    },
    /// Build the QR network from a Posts.xml file and compute centralities.
    Analyze {
        #[arg(long)]
        posts: PathBuf,
        /// Label stored in the report (default: input file stem).
        #[arg(long)]
        site: Option<String>,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, value_enum, default_value = "hours")]
        time_unit: UnitArg,
        #[arg(long, default_value_t = 0.85)]
        damping: f64,
        /// Use edge weights in betweenness, closeness, PageRank and eigenvector.
        #[arg(long)]
        weighted: bool,
        #[arg(long)]
        undirected: bool,
        /// Point edges from responder to questioner.
        #[arg(long)]
        reverse_edges: bool,
        /// Divide by n instead of n-1 in the standard deviation.
        #[arg(long)]
        population_std: bool,
        /// Worker threads (default: all cores).
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',')]
        format: Vec<FormatArg>,
    },
    /// Tabulate two or more report.json files.
    Compare {
        #[arg(required = true)]
        reports: Vec<PathBuf>,
        /// Also write the table as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Fetch { slug, dest } => {
            let fetched = fetch_dump(&slug, &dest)?;
            println!(
                "wrote {} ({} bytes)",
                fetched.path.display(),
                fetched.content_length
            );
            Ok(EXIT_OK)
        }
        Command::Analyze {
            posts,
            site,
            epsilon,
            time_unit,
            damping,
            weighted,
            undirected,
            reverse_edges,
            population_std,
            threads,
            out,
            format,
        } => {
            let mut formats: Vec<OutputFormat> = if format.is_empty() {
                DEFAULT_FORMATS.to_vec()
            } else {
                format.into_iter().map(Into::into).collect()
            };
            formats.sort();
            formats.dedup();
            let config = RunConfig {
                posts,
                site,
                epsilon,
                time_unit: time_unit.into(),
                damping,
                weighted,
                undirected,
                reverse_edges,
                std_estimator: if population_std {
                    StdEstimator::Population
                } else {
                    StdEstimator::Sample
                },
                out_dir: out,
                formats,
            };
            config.validate()?;
            if threads == Some(0) {
                return Err(CliError::Config("--threads must be at least 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| CliError::Analysis(e.to_string()))?;
            let analysis = pool.install(|| run_analyze(&config))?;
            let r = &analysis.report;
            println!(
                "{}: {} nodes, {} edges, {} interactions",
                r.site, r.graph.nodes, r.graph.edges, r.graph.interactions
            );
            match r.roles.qr_ratio {
                Some(q) => println!(
                    "roles: {} questioners only, {} responders only, {} both, QR ratio {q:.2}",
                    r.roles.questioners_only, r.roles.responders_only, r.roles.both
                ),
                None => println!("roles: no responders, QR ratio undefined"),
            }
            println!("outputs written to {}", config.out_dir.display());
            if !r.complete {
                eprintln!(
                    "warning: PageRank did not converge after {} iterations (residual {:e}); results are marked incomplete",
                    r.convergence.pagerank_iterations, r.convergence.pagerank_residual
                );
                return Ok(EXIT_NOT_CONVERGED);
            }
            Ok(EXIT_OK)
        }
        Command::Compare { reports, csv } => {
            let comparison = compare::load(&reports)?;
            print!("{}", comparison.to_table());
            if let Some(path) = csv {
                comparison.write_csv(&path)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
