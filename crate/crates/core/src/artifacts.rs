//! On-disk layout and CSV schemas of run artifacts.
//!
//! ```text
//! <out>/manifest.json
//! <out>/run{seed}/gen{g}_front.csv        generation,individual_index,o1,o2,genome_bits
//! <out>/run{seed}/gen{g}_population.csv   generation,individual_index,rank,crowding,o1,o2,genome_bits
//! <out>/combined/gen{g}_{union,pareto}.csv run,generation,individual_index,o1,o2,genome_bits
//! ```
//!
//! Every CSV starts with a `# manifest=<hash>` line naming the manifest it belongs to.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::nsga2::{GenerationRecord, ObjectiveVector};
use crate::pareto::{ParetoPoint, ParetoSet};

const MANIFEST_PREFIX: &str = "# manifest=";

/// A CSV row type with a fixed column list.
pub trait Table: Serialize {
    const HEADER: &'static [&'static str];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontRow {
    pub generation: usize,
    pub individual_index: usize,
    pub o1: f64,
    pub o2: f64,
    pub genome_bits: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PopulationRow {
    pub generation: usize,
    pub individual_index: usize,
    pub rank: usize,
    pub crowding: f64,
    pub o1: f64,
    pub o2: f64,
    pub genome_bits: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedRow {
    pub run: u64,
    pub generation: usize,
    pub individual_index: usize,
    pub o1: f64,
    pub o2: f64,
    pub genome_bits: String,
}

impl Table for FrontRow {
    const HEADER: &'static [&'static str] = &["generation", "individual_index", "o1", "o2", "genome_bits"];
}

impl Table for PopulationRow {
    const HEADER: &'static [&'static str] =
        &["generation", "individual_index", "rank", "crowding", "o1", "o2", "genome_bits"];
}

impl Table for CombinedRow {
    const HEADER: &'static [&'static str] = &["run", "generation", "individual_index", "o1", "o2", "genome_bits"];
}

impl FrontRow {
    pub fn objectives(&self) -> ObjectiveVector {
        ObjectiveVector::new(self.o1, self.o2)
    }

    pub fn genome(&self) -> Result<Genome> {
        self.genome_bits.parse()
    }

    pub fn into_point(self, run: u64) -> Result<ParetoPoint> {
        Ok(ParetoPoint {
            objectives: self.objectives(),
            genome_id: self.individual_index,
            run,
            generation: self.generation,
            genome: Some(self.genome()?),
        })
    }
}

pub fn run_dir(out: &Path, seed: u64) -> PathBuf {
    out.join(format!("run{seed}"))
}

pub fn combined_dir(out: &Path) -> PathBuf {
    out.join("combined")
}

pub fn front_path(out: &Path, seed: u64, generation: usize) -> PathBuf {
    run_dir(out, seed).join(format!("gen{generation}_front.csv"))
}

pub fn population_path(out: &Path, seed: u64, generation: usize) -> PathBuf {
    run_dir(out, seed).join(format!("gen{generation}_population.csv"))
}

pub fn write_csv<R: Table>(path: &Path, manifest_hash: &str, rows: &[R]) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let mut out = BufWriter::new(File::create(path)?);
    writeln!(out, "{MANIFEST_PREFIX}{manifest_hash}")?;
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    // An empty table still gets its header.
    if rows.is_empty() {
        w.write_record(R::HEADER)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a CSV written by [`write_csv`], returning the manifest hash and the rows.
pub fn read_csv<R: DeserializeOwned>(path: &Path) -> Result<(String, Vec<R>)> {
    let artifact = |reason: String| Error::Artifact { path: path.display().to_string(), reason };
    let file = File::open(path).map_err(|e| artifact(e.to_string()))?;
    let mut reader = BufReader::new(file);
    let mut first = String::new();
    reader.read_line(&mut first)?;
    let hash = first
        .trim_end()
        .strip_prefix(MANIFEST_PREFIX)
        .ok_or_else(|| artifact("missing manifest line".into()))?
        .to_string();
    let rows = csv::Reader::from_reader(reader)
        .into_deserialize()
        .collect::<std::result::Result<Vec<R>, _>>()?;
    Ok((hash, rows))
}

pub fn front_rows(record: &GenerationRecord) -> Vec<FrontRow> {
    record
        .front()
        .map(|(i, ind)| {
            let o = ind.fitness();
            FrontRow {
                generation: record.generation,
                individual_index: i,
                o1: o.o1,
                o2: o.o2,
                genome_bits: ind.genome.to_string(),
            }
        })
        .collect()
}

pub fn population_rows(record: &GenerationRecord) -> Vec<PopulationRow> {
    record
        .population
        .iter()
        .enumerate()
        .map(|(i, ind)| {
            let o = ind.fitness();
            PopulationRow {
                generation: record.generation,
                individual_index: i,
                rank: ind.rank,
                crowding: ind.crowding,
                o1: o.o1,
                o2: o.o2,
                genome_bits: ind.genome.to_string(),
            }
        })
        .collect()
}

pub fn combined_rows(set: &ParetoSet) -> Vec<CombinedRow> {
    set.points
        .iter()
        .map(|p| CombinedRow {
            run: p.run,
            generation: p.generation,
            individual_index: p.genome_id,
            o1: p.objectives.o1,
            o2: p.objectives.o2,
            genome_bits: p.genome.as_ref().map(Genome::to_string).unwrap_or_default(),
        })
        .collect()
}

/// Front 0 of one run at one generation, read back from its CSV.
pub fn read_front(out: &Path, seed: u64, generation: usize) -> Result<Vec<ParetoPoint>> {
    let path = front_path(out, seed, generation);
    if !path.exists() {
        return Err(Error::MissingGeneration { run: seed, generation });
    }
    let (_, rows) = read_csv::<FrontRow>(&path)?;
    rows.into_iter().map(|r| r.into_point(seed)).collect()
}

/// Generations with a front file in the run directory, ascending.
pub fn recorded_generations(out: &Path, seed: u64) -> Result<Vec<usize>> {
    let mut gens = Vec::new();
    for entry in std::fs::read_dir(run_dir(out, seed))? {
        let name = entry?.file_name();
        let name = name.to_string_lossy();
        if let Some(g) = name.strip_prefix("gen").and_then(|s| s.strip_suffix("_front.csv")) {
            if let Ok(g) = g.parse() {
                gens.push(g);
            }
        }
    }
    gens.sort_unstable();
    Ok(gens)
}

/// The file-based twin of [`crate::pareto::union_fronts`].
pub fn union_fronts_from_csv(out: &Path, seeds: &[u64], generation: usize) -> Result<ParetoSet> {
    let mut points = Vec::new();
    for &seed in seeds {
        points.extend(read_front(out, seed, generation)?);
    }
    Ok(ParetoSet { points })
}
