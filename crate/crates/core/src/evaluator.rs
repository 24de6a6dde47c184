//! Two-objective fitness of a controller against the baseline opponent.

use serde::{Deserialize, Serialize};

use crate::controller::FieldController;
use crate::error::{Error, Result};
use crate::fields::MicroParams;
use crate::genome::Genome;
use crate::nsga2::ObjectiveVector;
use crate::scenario::Scenario;
use crate::sim::{run_skirmish, SimConfig, SkirmishResult};

const BASELINE_TOML: &str = include_str!("../config/baseline.toml");

/// The opponent's hand-tuned controller: head for the nearest enemy and fire when in range.
pub fn baseline_opponent() -> MicroParams<f64> {
    toml::from_str(BASELINE_TOML).expect("bundled baseline config parses")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub scenarios: Vec<Scenario>,
    pub opponent: MicroParams<f64>,
    pub sim: SimConfig,
}

impl EvalConfig {
    pub fn new(scenarios: Vec<Scenario>, sim: SimConfig) -> Self {
        Self { scenarios, opponent: baseline_opponent(), sim }
    }

    pub fn validate(&self) -> Result<()> {
        if self.scenarios.is_empty() {
            return Err(Error::InvalidConfig("evaluation needs at least one scenario".into()));
        }
        for s in &self.scenarios {
            s.validate()?;
        }
        self.opponent.validate()?;
        self.sim.validate()
    }
}

/// `(damage dealt / enemy starting HP, 1 - damage taken / friendly starting HP)`, clamped to
/// [0, 1]. A side with no hitpoints at all counts as untouched.
pub fn objectives(result: &SkirmishResult<f64>) -> ObjectiveVector {
    let frac = |dmg: f64, total: f64| if total > 0.0 { (dmg / total).clamp(0.0, 1.0) } else { 0.0 };
    ObjectiveVector::new(
        frac(result.damage_to_enemies, result.enemy_start_hitpoints),
        1.0 - frac(result.damage_to_friends, result.friend_start_hitpoints),
    )
}

/// Arithmetic mean, summed in a canonical order so that input order cannot change the bits.
pub fn mean_objectives(values: &[ObjectiveVector]) -> ObjectiveVector {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.o1.total_cmp(&b.o1).then(a.o2.total_cmp(&b.o2)));
    let n = v.len().max(1) as f64;
    let (s1, s2) = v.iter().fold((0.0, 0.0), |(a, b), o| (a + o.o1, b + o.o2));
    ObjectiveVector::new(s1 / n, s2 / n)
}

/// Plays one scenario with `params` on the friendly side.
pub fn play(params: &MicroParams<f64>, scenario: &Scenario, cfg: &EvalConfig, record_trace: bool) -> SkirmishResult<f64> {
    let mut friend = FieldController::new(*params, &cfg.sim);
    let mut enemy = FieldController::new(cfg.opponent, &cfg.sim);
    run_skirmish(scenario, &mut friend, &mut enemy, &cfg.sim, record_trace)
}

/// Per-scenario objective vectors for `params`, in scenario order.
pub fn evaluate_each(params: &MicroParams<f64>, cfg: &EvalConfig) -> Result<Vec<ObjectiveVector>> {
    params.validate()?;
    Ok(cfg.scenarios.iter().map(|s| objectives(&play(params, s, cfg, false))).collect())
}

pub fn evaluate_params(params: &MicroParams<f64>, cfg: &EvalConfig) -> Result<ObjectiveVector> {
    Ok(mean_objectives(&evaluate_each(params, cfg)?))
}

/// Fitness of `genome`: mean objectives over every scenario of `cfg`.
pub fn evaluate(genome: &Genome, cfg: &EvalConfig) -> Result<ObjectiveVector> {
    evaluate_params(&genome.decode(), cfg)
}
