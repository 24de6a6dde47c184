//! Headless 3D RTS skirmish simulation and multi-objective evolution of squad micro.
//!
//! A small squad of fast, ranged flying units is steered by thirteen potential fields and an
//! influence-map attack target. The parameters live in a 226-bit genome which NSGA-II evolves
//! against a larger, baseline-controlled squad, trading damage dealt against damage taken.
//!
//! The geometry, simulation and field code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix it to `f64`, which is what the evaluator and experiments use.

// `!(x >= y)` is used on purpose: it is also true when `x` is NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod artifacts;
pub mod controller;
pub mod evaluator;
pub mod error;
pub mod experiment;
pub mod fields;
pub mod genome;
pub mod influence;
pub mod nsga2;
pub mod pareto;
pub mod plot;
pub mod rng;
pub mod runner;
pub mod scalar;
pub mod scenario;
pub mod sim;
pub mod vec3;

pub use error::{Error, Result};
pub use genome::Genome;
pub use scalar::Scalar;
pub use scenario::{Scenario, ScenarioLayout};
pub use sim::{Side, SimConfig, UnitKind};

pub type Vec3 = vec3::Vec3<f64>;
pub type UnitState = sim::UnitState<f64>;
pub type UnitTypeSpec = sim::UnitTypeSpec<f64>;
pub type World = sim::World<f64>;
pub type SteeringCommand = sim::SteeringCommand<f64>;
pub type SkirmishResult = sim::SkirmishResult<f64>;
pub type IMParams = influence::IMParams<f64>;
pub type IMGrid = influence::IMGrid<f64>;
pub type GridSpec = influence::GridSpec<f64>;
pub type PFTerm = fields::PFTerm<f64>;
pub type MicroParams = fields::MicroParams<f64>;
pub type FieldController = controller::FieldController<f64>;

pub use evaluator::{baseline_opponent, evaluate, EvalConfig};
pub use experiment::{ExperimentConfig, Profile, RunManifest};
pub use nsga2::{EAConfig, Individual, ObjectiveVector};
