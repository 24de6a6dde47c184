//! Elitist two-objective NSGA-II over binary genomes.
//!
//! Both objectives are maximized. Each generation: binary crowded tournaments pick parents,
//! two-point crossover and per-bit flip mutation produce `N` children, parents and children are
//! merged, and the best `N` by (front rank, crowding distance) survive.

use std::cmp::Ordering;

use log::debug;
use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genome::{Genome, GENOME_BITS};
use crate::rng::{stream_rng, Stream};

/// (damage-done fraction, one minus damage-taken fraction); both in [0, 1], both maximized.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ObjectiveVector {
    pub o1: f64,
    pub o2: f64,
}

impl ObjectiveVector {
    pub const fn new(o1: f64, o2: f64) -> Self {
        Self { o1, o2 }
    }

    pub fn get(&self, i: usize) -> f64 {
        match i {
            0 => self.o1,
            1 => self.o2,
            _ => panic!("objective index {i} out of range"),
        }
    }

    pub fn dominates(&self, other: &ObjectiveVector) -> bool {
        dominates(self, other)
    }
}

pub const N_OBJECTIVES: usize = 2;

/// `a` is at least as good everywhere and strictly better somewhere.
pub fn dominates(a: &ObjectiveVector, b: &ObjectiveVector) -> bool {
    a.o1 >= b.o1 && a.o2 >= b.o2 && (a.o1 > b.o1 || a.o2 > b.o2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    pub objectives: Option<ObjectiveVector>,
    /// Front index, 0 for the non-dominated set.
    pub rank: usize,
    pub crowding: f64,
}

impl Individual {
    pub fn new(genome: Genome) -> Self {
        Self { genome, objectives: None, rank: usize::MAX, crowding: 0.0 }
    }

    pub fn evaluated(genome: Genome, objectives: ObjectiveVector) -> Self {
        Self { objectives: Some(objectives), ..Self::new(genome) }
    }

    /// Objectives of an evaluated individual.
    pub fn fitness(&self) -> ObjectiveVector {
        self.objectives.expect("individual not evaluated")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EAConfig {
    pub pop_size: usize,
    /// Offspring generations after the initial population; the last is numbered `generations`.
    pub generations: usize,
    pub p_crossover: f64,
    /// Per-bit flip probability.
    pub p_mutation: f64,
    pub seed: u64,
}

impl Default for EAConfig {
    fn default() -> Self {
        Self { pop_size: 50, generations: 74, p_crossover: 0.9, p_mutation: 0.05, seed: 0 }
    }
}

impl EAConfig {
    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 4 || !self.pop_size.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!("pop_size {} must be even and >= 4", self.pop_size)));
        }
        for (name, p) in [("p_crossover", self.p_crossover), ("p_mutation", self.p_mutation)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidConfig(format!("{name} = {p} is not a probability")));
            }
        }
        Ok(())
    }
}

/// Partitions `pop` into fronts of indices, assigning each individual's `rank`.
pub fn fast_nondominated_sort(pop: &mut [Individual]) -> Result<Vec<Vec<usize>>> {
    let objs = pop
        .iter()
        .enumerate()
        .map(|(i, ind)| ind.objectives.ok_or(Error::Unevaluated(i)))
        .collect::<Result<Vec<_>>>()?;
    let n = objs.len();
    let mut dominated_by: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut domination_count = vec![0usize; n];
    let mut fronts: Vec<Vec<usize>> = vec![Vec::new()];
    for p in 0..n {
        for q in (p + 1)..n {
            if dominates(&objs[p], &objs[q]) {
                dominated_by[p].push(q);
                domination_count[q] += 1;
            } else if dominates(&objs[q], &objs[p]) {
                dominated_by[q].push(p);
                domination_count[p] += 1;
            }
        }
    }
    fronts[0].extend((0..n).filter(|&p| domination_count[p] == 0));
    let mut k = 0;
    while !fronts[k].is_empty() {
        let mut next = Vec::new();
        for &p in &fronts[k] {
            pop[p].rank = k;
            for &q in &dominated_by[p] {
                domination_count[q] -= 1;
                if domination_count[q] == 0 {
                    next.push(q);
                }
            }
        }
        next.sort_unstable();
        fronts.push(next);
        k += 1;
    }
    fronts.pop();
    Ok(fronts)
}

/// Crowding distance of each point of one front, in input order.
///
/// Per objective the front is sorted; the two extremes get `+inf` and interior points add the
/// gap between their neighbours divided by the objective's range. Zero ranges add nothing.
pub fn crowding_distance(front: &[ObjectiveVector]) -> Vec<f64> {
    let n = front.len();
    let mut dist = vec![0.0; n];
    if n <= 2 {
        return vec![f64::INFINITY; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    for m in 0..N_OBJECTIVES {
        order.sort_by(|&a, &b| front[a].get(m).total_cmp(&front[b].get(m)).then(a.cmp(&b)));
        let lo = front[order[0]].get(m);
        let hi = front[order[n - 1]].get(m);
        dist[order[0]] = f64::INFINITY;
        dist[order[n - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..n - 1 {
            let i = order[w];
            if dist[i].is_finite() {
                dist[i] += (front[order[w + 1]].get(m) - front[order[w - 1]].get(m)) / range;
            }
        }
    }
    dist
}

/// Ranks `pop` and fills in crowding distances. Returns the fronts.
pub fn rank_and_crowd(pop: &mut [Individual]) -> Result<Vec<Vec<usize>>> {
    let fronts = fast_nondominated_sort(pop)?;
    for front in &fronts {
        let objs: Vec<ObjectiveVector> = front.iter().map(|&i| pop[i].fitness()).collect();
        for (&i, d) in front.iter().zip(crowding_distance(&objs)) {
            pop[i].crowding = d;
        }
    }
    Ok(fronts)
}

/// Crowded-comparison order: lower rank first, then larger crowding distance.
pub fn crowded_cmp(a: &Individual, b: &Individual) -> Ordering {
    a.rank.cmp(&b.rank).then_with(|| b.crowding.total_cmp(&a.crowding))
}

/// Index of the winner of a binary tournament between `a` and `b`; full ties are a coin flip.
pub fn crowded_tournament<R: Rng + ?Sized>(pop: &[Individual], a: usize, b: usize, rng: &mut R) -> usize {
    match crowded_cmp(&pop[a], &pop[b]) {
        Ordering::Less => a,
        Ordering::Greater => b,
        Ordering::Equal => {
            if rng.random::<bool>() {
                a
            } else {
                b
            }
        }
    }
}

/// Exchanges bits `[from, to)` between two genomes.
pub fn swap_segment(a: &mut Genome, b: &mut Genome, from: usize, to: usize) {
    for i in from..to {
        std::mem::swap(&mut a.bits_mut()[i], &mut b.bits_mut()[i]);
    }
}

/// With probability `p`, swaps the segment between two uniformly chosen distinct cut points.
pub fn two_point_crossover<R: Rng + ?Sized>(a: &Genome, b: &Genome, p: f64, rng: &mut R) -> (Genome, Genome) {
    assert_eq!(a.bits().len(), b.bits().len(), "crossover of unequal genomes");
    let (mut c1, mut c2) = (a.clone(), b.clone());
    if rng.random_bool(p) {
        let len = a.bits().len();
        let i = rng.random_range(0..=len);
        let j = loop {
            let j = rng.random_range(0..=len);
            if j != i {
                break j;
            }
        };
        swap_segment(&mut c1, &mut c2, i.min(j), i.max(j));
    }
    (c1, c2)
}

/// Flips every bit independently with probability `p`.
pub fn bit_flip_mutation<R: Rng + ?Sized>(g: &Genome, p: f64, rng: &mut R) -> Genome {
    let mut out = g.clone();
    for b in out.bits_mut() {
        if rng.random_bool(p) {
            *b = !*b;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    /// Ranked and crowded.
    pub population: Vec<Individual>,
}

impl GenerationRecord {
    pub fn front(&self) -> impl Iterator<Item = (usize, &Individual)> {
        self.population.iter().enumerate().filter(|(_, ind)| ind.rank == 0)
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct History {
    pub generations: Vec<GenerationRecord>,
}

impl History {
    pub fn last(&self) -> Option<&GenerationRecord> {
        self.generations.last()
    }

    pub fn get(&self, generation: usize) -> Option<&GenerationRecord> {
        self.generations.get(generation)
    }
}

fn evaluate_all<F>(genomes: Vec<Genome>, eval: &F) -> Result<Vec<Individual>>
where
    F: Fn(&Genome) -> Result<ObjectiveVector> + Sync,
{
    genomes
        .into_par_iter()
        .map(|g| eval(&g).map(|o| Individual::evaluated(g, o)))
        .collect()
}

/// Runs NSGA-II. Evaluations within a generation run in parallel; since `eval` is a pure
/// function of the genome the history does not depend on scheduling.
pub fn evolve<F>(cfg: &EAConfig, eval: F) -> Result<History>
where
    F: Fn(&Genome) -> Result<ObjectiveVector> + Sync,
{
    cfg.validate()?;
    let n = cfg.pop_size;
    let mut rng = stream_rng(cfg.seed, Stream::Evolution);

    let initial: Vec<Genome> = (0..n).map(|_| Genome::random(&mut rng)).collect();
    let mut pop = evaluate_all(initial, &eval)?;
    rank_and_crowd(&mut pop)?;
    let mut history = History { generations: vec![GenerationRecord { generation: 0, population: pop.clone() }] };

    for generation in 1..=cfg.generations {
        let mut children = Vec::with_capacity(n);
        let indices: Vec<usize> = (0..n).collect();
        while children.len() < n {
            let pick = |rng: &mut crate::rng::Rng| {
                let pair: Vec<usize> = indices.choose_multiple(rng, 2).copied().collect();
                crowded_tournament(&pop, pair[0], pair[1], rng)
            };
            let pa = pick(&mut rng);
            let pb = pick(&mut rng);
            let (c1, c2) = two_point_crossover(&pop[pa].genome, &pop[pb].genome, cfg.p_crossover, &mut rng);
            children.push(bit_flip_mutation(&c1, cfg.p_mutation, &mut rng));
            children.push(bit_flip_mutation(&c2, cfg.p_mutation, &mut rng));
        }
        let offspring = evaluate_all(children, &eval)?;

        let mut merged = pop;
        merged.extend(offspring);
        let fronts = rank_and_crowd(&mut merged)?;
        let mut next = Vec::with_capacity(n);
        for front in fronts {
            if next.len() + front.len() <= n {
                next.extend(front);
            } else {
                let mut last = front;
                last.sort_by(|&a, &b| crowded_cmp(&merged[a], &merged[b]).then(a.cmp(&b)));
                last.truncate(n - next.len());
                next.extend(last);
            }
            if next.len() == n {
                break;
            }
        }
        next.sort_unstable();
        pop = next.into_iter().map(|i| merged[i].clone()).collect();
        rank_and_crowd(&mut pop)?;
        debug!(
            "generation {generation}: front size {}",
            pop.iter().filter(|i| i.rank == 0).count()
        );
        history.generations.push(GenerationRecord { generation, population: pop.clone() });
    }
    Ok(history)
}

/// Expected number of flipped bits per genome at mutation rate `p`.
pub fn expected_flips(p: f64) -> f64 {
    GENOME_BITS as f64 * p
}
