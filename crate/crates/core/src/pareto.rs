//! Pareto-set algebra over recorded runs, and the 2D hypervolume indicator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::Genome;
use crate::nsga2::{dominates, History, ObjectiveVector};

/// An objective vector together with where it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoPoint {
    pub objectives: ObjectiveVector,
    /// Index of the individual within its generation's population.
    pub genome_id: usize,
    pub run: u64,
    pub generation: usize,
    pub genome: Option<Genome>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ParetoSet {
    pub points: Vec<ParetoPoint>,
}

impl ParetoSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn objectives(&self) -> Vec<ObjectiveVector> {
        self.points.iter().map(|p| p.objectives).collect()
    }
}

/// The non-dominated subset of `points`. Equal objective vectors collapse to their first
/// occurrence; input order is otherwise preserved.
pub fn pareto_front(points: &[ParetoPoint]) -> ParetoSet {
    let mut keep: Vec<ParetoPoint> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        let dominated = points.iter().any(|q| dominates(&q.objectives, &p.objectives));
        let duplicate = points[..i].iter().any(|q| q.objectives == p.objectives);
        if !dominated && !duplicate {
            keep.push(p.clone());
        }
    }
    ParetoSet { points: keep }
}

/// Concatenation of each run's front 0 at `generation`, without filtering.
pub fn union_fronts<'a>(runs: impl IntoIterator<Item = (u64, &'a History)>, generation: usize) -> Result<ParetoSet> {
    let mut points = Vec::new();
    for (run, history) in runs {
        let record = history
            .get(generation)
            .ok_or(Error::MissingGeneration { run, generation })?;
        for (idx, ind) in record.front() {
            points.push(ParetoPoint {
                objectives: ind.fitness(),
                genome_id: idx,
                run,
                generation,
                genome: Some(ind.genome.clone()),
            });
        }
    }
    Ok(ParetoSet { points })
}

/// Area weakly dominated by `points` and dominating `reference`, both objectives maximized.
pub fn hypervolume(points: &[ObjectiveVector], reference: ObjectiveVector) -> f64 {
    let mut pts: Vec<ObjectiveVector> = points
        .iter()
        .copied()
        .filter(|p| p.o1 > reference.o1 && p.o2 > reference.o2)
        .collect();
    pts.sort_by(|a, b| b.o1.total_cmp(&a.o1).then(b.o2.total_cmp(&a.o2)));
    let mut area = 0.0;
    let mut ceiling = reference.o2;
    for p in pts {
        if p.o2 > ceiling {
            area += (p.o1 - reference.o1) * (p.o2 - ceiling);
            ceiling = p.o2;
        }
    }
    area
}

/// Summary statistics of a set of objective vectors, as plotted with error bars.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ObjectiveStats {
    pub n: usize,
    pub mean: ObjectiveVector,
    /// Population standard deviation per objective.
    pub std: ObjectiveVector,
}

pub fn objective_stats(values: &[ObjectiveVector]) -> ObjectiveStats {
    let n = values.len();
    if n == 0 {
        return ObjectiveStats::default();
    }
    let nf = n as f64;
    let m1 = values.iter().map(|v| v.o1).sum::<f64>() / nf;
    let m2 = values.iter().map(|v| v.o2).sum::<f64>() / nf;
    let v1 = values.iter().map(|v| (v.o1 - m1).powi(2)).sum::<f64>() / nf;
    let v2 = values.iter().map(|v| (v.o2 - m2).powi(2)).sum::<f64>() / nf;
    ObjectiveStats { n, mean: ObjectiveVector::new(m1, m2), std: ObjectiveVector::new(v1.sqrt(), v2.sqrt()) }
}
