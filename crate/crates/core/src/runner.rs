//! The experiment operations behind the command-line tool: evolution runs, Monte Carlo
//! baselines, generalization to unseen scenarios, front algebra and replay export.

use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::artifacts::{self, Table};
use crate::error::{Error, Result};
use crate::evaluator::{evaluate, evaluate_each, mean_objectives, play, EvalConfig};
use crate::experiment::RunManifest;
use crate::fields::MicroParams;
use crate::genome::Genome;
use crate::nsga2::{evolve, GenerationRecord, History, Individual, ObjectiveVector};
use crate::pareto::{hypervolume, objective_stats, pareto_front, ObjectiveStats, ParetoSet};
use crate::plot::{self, Series};
use crate::rng::{stream_rng, Stream};
use crate::scenario::{random_scenarios, Scenario};
use crate::sim::{write_trace_jsonl, SkirmishResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypervolumeRow {
    pub generation: usize,
    pub hypervolume: f64,
}

impl Table for HypervolumeRow {
    const HEADER: &'static [&'static str] = &["generation", "hypervolume"];
}

/// Mean and standard deviation of a set of objective vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    /// `seed{n}` or `all`.
    pub scope: String,
    pub set: String,
    pub n: usize,
    pub mean_o1: f64,
    pub std_o1: f64,
    pub mean_o2: f64,
    pub std_o2: f64,
}

impl Table for SummaryRow {
    const HEADER: &'static [&'static str] = &["scope", "set", "n", "mean_o1", "std_o1", "mean_o2", "std_o2"];
}

impl SummaryRow {
    pub fn new(scope: impl Into<String>, set: impl Into<String>, stats: ObjectiveStats) -> Self {
        Self {
            scope: scope.into(),
            set: set.into(),
            n: stats.n,
            mean_o1: stats.mean.o1,
            std_o1: stats.std.o1,
            mean_o2: stats.mean.o2,
            std_o2: stats.std.o2,
        }
    }

    pub fn mean(&self) -> ObjectiveVector {
        ObjectiveVector::new(self.mean_o1, self.mean_o2)
    }

    pub fn stats(&self) -> ObjectiveStats {
        ObjectiveStats {
            n: self.n,
            mean: self.mean(),
            std: ObjectiveVector::new(self.std_o1, self.std_o2),
        }
    }
}

/// One genome's performance across a scenario set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenomeRow {
    pub scope: String,
    pub set: String,
    pub individual_index: usize,
    pub n_scenarios: usize,
    pub mean_o1: f64,
    pub std_o1: f64,
    pub mean_o2: f64,
    pub std_o2: f64,
    pub genome_bits: String,
}

impl Table for GenomeRow {
    const HEADER: &'static [&'static str] =
        &["scope", "set", "individual_index", "n_scenarios", "mean_o1", "std_o1", "mean_o2", "std_o2", "genome_bits"];
}

impl GenomeRow {
    pub fn mean(&self) -> ObjectiveVector {
        ObjectiveVector::new(self.mean_o1, self.mean_o2)
    }
}

pub struct EvolutionRun {
    pub seed: u64,
    pub history: History,
}

fn seed_scope(seed: u64) -> String {
    format!("seed{seed}")
}

fn write_svg(path: &Path, title: &str, series: &[Series]) -> Result<()> {
    std::fs::write(path, plot::render(title, series))?;
    Ok(())
}

fn prepare_out(manifest: &RunManifest, out: &Path) -> Result<()> {
    if let Ok(existing) = RunManifest::read(out) {
        if existing.hash != manifest.hash {
            warn!("overwriting artifacts of manifest {} in {}", existing.short_hash(), out.display());
        }
    }
    manifest.write(out)
}

/// Evaluates genomes in parallel; results are in input order.
pub fn evaluate_genomes(genomes: &[Genome], cfg: &EvalConfig) -> Result<Vec<ObjectiveVector>> {
    genomes.par_iter().map(|g| evaluate(g, cfg)).collect()
}

/// The final-front individual dealing the most damage; ties go to less damage taken, then to
/// the lower population index.
pub fn champion(record: &GenerationRecord) -> Option<(usize, &Individual)> {
    record.front().min_by(|(ia, a), (ib, b)| {
        let (oa, ob) = (a.fitness(), b.fitness());
        ob.o1.total_cmp(&oa.o1).then(ob.o2.total_cmp(&oa.o2)).then(ia.cmp(ib))
    })
}

/// Plays `params` on `scenario` and writes the per-tick trace as JSON lines.
pub fn export_trace(params: &MicroParams<f64>, scenario: &Scenario, cfg: &EvalConfig, path: &Path) -> Result<SkirmishResult<f64>> {
    let result = play(params, scenario, cfg, true);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let trace = result.trace.as_deref().unwrap_or_default();
    write_trace_jsonl(BufWriter::new(File::create(path)?), trace)?;
    Ok(result)
}

/// Front-0 hypervolume against (0, 0) for every generation of a run.
pub fn hypervolume_series(history: &History) -> Vec<HypervolumeRow> {
    history
        .generations
        .iter()
        .map(|r| {
            let front: Vec<_> = r.front().map(|(_, i)| i.fitness()).collect();
            HypervolumeRow { generation: r.generation, hypervolume: hypervolume(&front, ObjectiveVector::new(0.0, 0.0)) }
        })
        .collect()
}

fn plotted_generations(last: usize, interval: usize) -> Vec<usize> {
    let mut gens: Vec<usize> = (0..=last).step_by(interval).collect();
    if gens.last() != Some(&last) {
        gens.push(last);
    }
    gens
}

fn write_run(out: &Path, manifest: &RunManifest, seed: u64, history: &History, eval: &EvalConfig, trace: bool) -> Result<()> {
    let dir = artifacts::run_dir(out, seed);
    std::fs::create_dir_all(&dir)?;
    let hash = &manifest.hash;

    let scenarios: String = eval.scenarios.iter().map(Scenario::to_text).collect::<Vec<_>>().join("\n");
    std::fs::write(dir.join("scenarios.txt"), scenarios)?;

    for record in &history.generations {
        artifacts::write_csv(&artifacts::front_path(out, seed, record.generation), hash, &artifacts::front_rows(record))?;
        artifacts::write_csv(
            &artifacts::population_path(out, seed, record.generation),
            hash,
            &artifacts::population_rows(record),
        )?;
    }
    let last = history.last().ok_or_else(|| Error::Evaluation("empty history".into()))?;
    artifacts::write_csv(&dir.join("final_genomes.csv"), hash, &artifacts::population_rows(last))?;
    artifacts::write_csv(&dir.join("hypervolume.csv"), hash, &hypervolume_series(history))?;

    let series: Vec<Series> = plotted_generations(last.generation, manifest.config.plot_interval)
        .into_iter()
        .filter_map(|g| history.get(g))
        .map(|r| Series::points(format!("gen {}", r.generation), r.front().map(|(_, i)| i.fitness()).collect()))
        .collect();
    write_svg(&dir.join("fronts.svg"), &format!("seed {seed}: front 0 by generation"), &series)?;

    if trace {
        if let Some((idx, best)) = champion(last) {
            let params = best.genome.decode::<f64>();
            for (k, scenario) in eval.scenarios.iter().enumerate() {
                export_trace(&params, scenario, eval, &dir.join(format!("trace_scenario{k}.jsonl")))?;
            }
            info!("seed {seed}: traced champion #{idx} {:?}", best.fitness());
        }
    }
    Ok(())
}

/// Runs NSGA-II once per manifest seed and writes per-generation fronts and populations,
/// hypervolume series, plots, optional champion traces, and the combined first/last fronts.
pub fn run_evolution(manifest: &RunManifest, out: &Path, trace: bool) -> Result<Vec<EvolutionRun>> {
    prepare_out(manifest, out)?;
    let cfg = &manifest.config;
    let runs = cfg
        .seeds
        .par_iter()
        .map(|&seed| {
            let eval = manifest.eval_for(seed);
            eval.validate()?;
            info!("seed {seed}: evolving {} x {} generations", cfg.ea.pop_size, cfg.ea.generations + 1);
            let history = evolve(&cfg.ea_for(seed), |g| evaluate(g, &eval))?;
            write_run(out, manifest, seed, &history, &eval, trace)?;
            Ok(EvolutionRun { seed, history })
        })
        .collect::<Result<Vec<_>>>()?;

    let last = cfg.ea.generations;
    let mut series = Vec::new();
    for g in [0, last] {
        let (union, front) = combine_fronts(out, g)?;
        series.push(Series::points(format!("U{g} ({})", union.len()), union.objectives()));
        series.push(Series::points(format!("P{g} ({})", front.len()), front.objectives()));
        if last == 0 {
            break;
        }
    }
    write_svg(&artifacts::combined_dir(out).join("fronts.svg"), "combined fronts over all seeds", &series)?;
    Ok(runs)
}

/// Unions every run's front 0 at `generation` from the CSVs under `out`, writes the union and
/// its Pareto front to `combined/`, and returns both.
pub fn combine_fronts(out: &Path, generation: usize) -> Result<(ParetoSet, ParetoSet)> {
    let manifest = RunManifest::read(out)?;
    let union = artifacts::union_fronts_from_csv(out, &manifest.config.seeds, generation)?;
    let front = pareto_front(&union.points);
    let dir = artifacts::combined_dir(out);
    artifacts::write_csv(&dir.join(format!("gen{generation}_union.csv")), &manifest.hash, &artifacts::combined_rows(&union))?;
    artifacts::write_csv(&dir.join(format!("gen{generation}_pareto.csv")), &manifest.hash, &artifacts::combined_rows(&front))?;
    info!("generation {generation}: union of {} front points, {} non-dominated", union.len(), front.len());
    Ok((union, front))
}

/// `n` random genomes, the i-th drawn from its own stream of `seed`.
pub fn random_genomes(seed: u64, n: usize) -> Vec<Genome> {
    (0..n)
        .map(|i| Genome::random(&mut stream_rng(seed, Stream::RandomGenome(i as u32))))
        .collect()
}

pub struct MonteCarloReport {
    pub training: Vec<ObjectiveVector>,
    pub random: Vec<ObjectiveVector>,
    /// One row per scenario set: the training trio, then the random set.
    pub rows: Vec<SummaryRow>,
}

/// Evaluates `n` random genomes on `seed`'s training trio and on its random scenario set.
pub fn run_monte_carlo(manifest: &RunManifest, seed: u64, n: usize) -> Result<MonteCarloReport> {
    let cfg = &manifest.config;
    let genomes = random_genomes(seed, n);
    let training_cfg = manifest.eval_for(seed);
    let random_cfg = EvalConfig { scenarios: random_scenarios(seed, cfg.random_scenarios, &cfg.layout), ..training_cfg.clone() };
    info!("seed {seed}: {n} random genomes on {} + {} scenarios", training_cfg.scenarios.len(), random_cfg.scenarios.len());
    let training = evaluate_genomes(&genomes, &training_cfg)?;
    let random = evaluate_genomes(&genomes, &random_cfg)?;
    let scope = seed_scope(seed);
    let rows = vec![
        SummaryRow::new(&scope, "training", objective_stats(&training)),
        SummaryRow::new(&scope, format!("random{}", cfg.random_scenarios), objective_stats(&random)),
    ];
    Ok(MonteCarloReport { training, random, rows })
}

/// Writes summary rows (from one or more seeds) as `montecarlo.csv` and `montecarlo.svg`.
pub fn write_monte_carlo(out: &Path, manifest: &RunManifest, rows: &[SummaryRow]) -> Result<()> {
    std::fs::create_dir_all(out)?;
    if !out.join(crate::experiment::MANIFEST_FILE).exists() {
        manifest.write(out)?;
    }
    artifacts::write_csv(&out.join("montecarlo.csv"), &manifest.hash, rows)?;
    let series: Vec<Series> = rows.iter().map(|r| Series::cross(format!("{} {}", r.scope, r.set), r.stats())).collect();
    write_svg(&out.join("montecarlo.svg"), "random genomes: mean and one standard deviation", &series)
}

/// Per-genome statistics over every scenario in `cfg`.
pub fn generalize(genomes: &[Genome], cfg: &EvalConfig) -> Result<Vec<ObjectiveStats>> {
    genomes
        .par_iter()
        .map(|g| {
            let per = evaluate_each(&g.decode(), cfg)?;
            let mut stats = objective_stats(&per);
            // Same summation order as the fitness average.
            stats.mean = mean_objectives(&per);
            Ok(stats)
        })
        .collect()
}

fn front_bits(p: &crate::pareto::ParetoPoint) -> String {
    p.genome.as_ref().map(Genome::to_string).unwrap_or_default()
}

pub struct GeneralizationReport {
    pub genomes: Vec<GenomeRow>,
    /// Per seed then over all seeds, initial set before final set.
    pub summary: Vec<SummaryRow>,
}

impl GeneralizationReport {
    pub fn summary_for(&self, scope: &str, set: &str) -> Option<&SummaryRow> {
        self.summary.iter().find(|r| r.scope == scope && r.set == set)
    }
}

/// Replays the first- and last-generation Pareto sets (front 0 without duplicates) of every run under `out` on that
/// seed's random scenario set and summarizes per genome and per set.
pub fn run_generalization(out: &Path) -> Result<GeneralizationReport> {
    let manifest = RunManifest::read(out)?;
    let cfg = &manifest.config;
    let sets = [0, cfg.ea.generations];
    let mut genomes = Vec::new();
    let mut summary = Vec::new();
    let mut all: Vec<Vec<ObjectiveVector>> = vec![Vec::new(); sets.len()];

    for &seed in &cfg.seeds {
        let eval = EvalConfig { scenarios: random_scenarios(seed, cfg.random_scenarios, &cfg.layout), ..manifest.eval_for(seed) };
        for (k, &g) in sets.iter().enumerate() {
            // The run's P set: front 0 with repeated objective vectors collapsed.
            let points = pareto_front(&artifacts::read_front(out, seed, g)?).points;
            let front: Vec<Genome> = points.iter().filter_map(|p| p.genome.clone()).collect();
            info!("seed {seed}: {} gen-{g} front genomes on {} scenarios", front.len(), eval.scenarios.len());
            let stats = generalize(&front, &eval)?;
            let set = format!("gen{g}");
            for (p, st) in points.iter().zip(&stats) {
                genomes.push(GenomeRow {
                    scope: seed_scope(seed),
                    set: set.clone(),
                    individual_index: p.genome_id,
                    n_scenarios: eval.scenarios.len(),
                    mean_o1: st.mean.o1,
                    std_o1: st.std.o1,
                    mean_o2: st.mean.o2,
                    std_o2: st.std.o2,
                    genome_bits: front_bits(p),
                });
            }
            let means: Vec<ObjectiveVector> = stats.iter().map(|s| s.mean).collect();
            summary.push(SummaryRow::new(seed_scope(seed), &set, objective_stats(&means)));
            all[k].extend(means);
        }
    }
    for (k, &g) in sets.iter().enumerate() {
        summary.push(SummaryRow::new("all", format!("gen{g}"), objective_stats(&all[k])));
    }

    artifacts::write_csv(&out.join("generalization.csv"), &manifest.hash, &genomes)?;
    artifacts::write_csv(&out.join("generalization_summary.csv"), &manifest.hash, &summary)?;
    let mut series = Vec::new();
    for &g in &sets {
        let set = format!("gen{g}");
        let pts = genomes.iter().filter(|r| r.set == set).map(GenomeRow::mean).collect();
        series.push(Series::points(format!("R{g}"), pts));
        if let Some(r) = summary.iter().find(|r| r.scope == "all" && r.set == set) {
            series.push(Series::cross(format!("R{g} mean"), r.stats()));
        }
    }
    write_svg(&out.join("generalization.svg"), "front genomes on random scenarios", &series)?;
    Ok(GeneralizationReport { genomes, summary })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plotted_generations_include_last() {
        assert_eq!(plotted_generations(12, 5), vec![0, 5, 10, 12]);
        assert_eq!(plotted_generations(10, 5), vec![0, 5, 10]);
        assert_eq!(plotted_generations(0, 5), vec![0]);
    }

    #[test]
    fn random_genomes_are_per_index_streams() {
        let a = random_genomes(9, 5);
        let b = random_genomes(9, 3);
        assert_eq!(&a[..3], &b[..]);
        assert_ne!(a[0], a[1]);
    }

    #[test]
    fn champion_prefers_damage_then_safety() {
        let mk = |o1, o2, rank| Individual {
            genome: Genome::zeros(),
            objectives: Some(ObjectiveVector::new(o1, o2)),
            rank,
            crowding: 0.0,
        };
        let record = GenerationRecord {
            generation: 0,
            population: vec![mk(0.5, 0.5, 0), mk(0.9, 0.1, 0), mk(0.9, 0.2, 0), mk(1.0, 0.0, 1)],
        };
        assert_eq!(champion(&record).unwrap().0, 2);
    }
}
