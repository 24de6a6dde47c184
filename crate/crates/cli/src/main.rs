//! `rtsmicro`: run evolution, Monte Carlo and generalization experiments and write their
//! artifacts.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::{error, info};

use rtsmicro::artifacts;
use rtsmicro::runner;
use rtsmicro::{ExperimentConfig, Genome, Profile, RunManifest};

#[derive(Parser)]
#[command(name = "rtsmicro", version, about = "Evolve potential-field micro for RTS skirmishes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Built-in profile: desk or paper.
    #[arg(long, default_value = "desk")]
    profile: String,
    /// TOML experiment file; overrides --profile.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Run a single seed instead of the configured list.
    #[arg(long, conflicts_with = "seeds")]
    seed: Option<u64>,
    /// Comma-separated seeds instead of the configured list.
    #[arg(long, value_delimiter = ',')]
    seeds: Option<Vec<u64>>,
}

impl ExperimentArgs {
    fn manifest(&self) -> Result<RunManifest> {
        let cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path).with_context(|| format!("loading {}", path.display()))?,
            None => self.profile.parse::<Profile>()?.config(),
        };
        let manifest = RunManifest::new(cfg)?;
        let seeds = match (&self.seed, &self.seeds) {
            (Some(s), _) => vec![*s],
            (None, Some(list)) => list.clone(),
            (None, None) => return Ok(manifest),
        };
        Ok(manifest.with_seeds(seeds)?)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run NSGA-II for every seed and write fronts, populations, plots and the manifest.
    Evolve {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long)]
        out: PathBuf,
        /// Also record per-tick traces of each run's champion on the training scenarios.
        #[arg(long)]
        trace: bool,
    },
    /// Evaluate random genomes on the training and random scenario sets.
    Montecarlo {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long)]
        out: PathBuf,
        /// Number of random genomes; defaults to the configured batch size.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Replay the first and last fronts of an evolve output on unseen random scenarios.
    Generalize {
        /// Output directory of a previous `evolve`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Union the per-run fronts of an evolve output at the given generations.
    Pareto {
        #[arg(long)]
        out: PathBuf,
        /// Generations to combine; defaults to the first and the last.
        #[arg(long, value_delimiter = ',')]
        generation: Option<Vec<usize>>,
    },
    /// Write the per-tick trace of one genome on one training scenario as JSON lines.
    ReplayExport {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// 226-character bit string. Without it, the champion of `--from` is replayed.
        #[arg(long, conflicts_with = "from")]
        genome: Option<String>,
        /// Output directory of a previous `evolve`.
        #[arg(long)]
        from: Option<PathBuf>,
        /// Training scenario index (0, 1 or 2).
        #[arg(long, default_value_t = 0)]
        scenario: usize,
        /// Destination `.jsonl` file.
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Evolve { exp, out, trace } => {
            let manifest = exp.manifest()?;
            let runs = runner::run_evolution(&manifest, &out, trace)?;
            for run in &runs {
                let front = run.history.last().map_or(0, |r| r.front().count());
                info!("seed {}: final front has {front} points", run.seed);
            }
            println!("manifest {} -> {}", manifest.short_hash(), out.display());
        }
        Command::Montecarlo { exp, out, n } => {
            let manifest = exp.manifest()?;
            let n = n.unwrap_or(manifest.config.random_genomes);
            let mut rows = Vec::new();
            for &seed in &manifest.config.seeds {
                rows.extend(runner::run_monte_carlo(&manifest, seed, n)?.rows);
            }
            runner::write_monte_carlo(&out, &manifest, &rows)?;
            for r in &rows {
                println!("{} {}: mean ({:.4}, {:.4}) std ({:.4}, {:.4})", r.scope, r.set, r.mean_o1, r.mean_o2, r.std_o1, r.std_o2);
            }
        }
        Command::Generalize { out } => {
            let report = runner::run_generalization(&out)?;
            for r in &report.summary {
                println!("{} {}: mean ({:.4}, {:.4}) over {} genomes", r.scope, r.set, r.mean_o1, r.mean_o2, r.n);
            }
        }
        Command::Pareto { out, generation } => {
            let manifest = RunManifest::read(&out)?;
            let gens = generation.unwrap_or_else(|| vec![0, manifest.config.ea.generations]);
            for g in gens {
                let (union, front) = runner::combine_fronts(&out, g)?;
                println!("generation {g}: |U| = {}, |P| = {}", union.len(), front.len());
            }
        }
        Command::ReplayExport { exp, genome, from, scenario, out } => {
            let manifest = match &from {
                Some(dir) => RunManifest::read(dir)?,
                None => exp.manifest()?,
            };
            let seed = exp.seed.unwrap_or(manifest.config.seeds[0]);
            let genome: Genome = match (genome, &from) {
                (Some(bits), _) => bits.parse()?,
                (None, Some(dir)) => {
                    let last = manifest.config.ea.generations;
                    let (_, rows) = artifacts::read_csv::<artifacts::FrontRow>(&artifacts::front_path(dir, seed, last))?;
                    let best = rows
                        .iter()
                        .min_by(|a, b| b.o1.total_cmp(&a.o1).then(b.o2.total_cmp(&a.o2)))
                        .context("final front is empty")?;
                    best.genome()?
                }
                (None, None) => bail!("pass --genome or --from"),
            };
            let eval = manifest.eval_for(seed);
            let Some(sc) = eval.scenarios.get(scenario) else {
                bail!("scenario {scenario} out of range (0..{})", eval.scenarios.len());
            };
            let result = runner::export_trace(&genome.decode(), sc, &eval, &out)?;
            println!(
                "{}: {} ticks, objectives {:?} -> {}",
                sc.label,
                result.ticks_elapsed,
                rtsmicro::evaluator::objectives(&result),
                out.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error!("{e:#}");
            ExitCode::FAILURE
        }
    }
}
