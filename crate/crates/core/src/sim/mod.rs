//! Deterministic fixed-timestep 3D skirmish simulation.
//!
//! A [`World`] advances one tick at a time. Each living unit, in ascending id order, asks its
//! side's [`Controller`] for a [`SteeringCommand`], integrates its kinematics, cools its weapon
//! down and fires at the nearest enemy in range. Damage lands immediately, so a unit killed
//! earlier in a tick neither acts nor gets targeted later in that tick.

mod combat;
mod config;
mod physics;
mod trace;
mod unit;
mod world;

pub use combat::{acquire_target, fire, DamageEvent};
pub use config::SimConfig;
pub use physics::apply_steering;
pub use trace::{read_trace_jsonl, write_trace_jsonl, TraceRecord};
pub use unit::{Side, SteeringCommand, UnitKind, UnitState, UnitTypeSpec};
pub use world::{run_skirmish, step, Controller, HoldController, SkirmishResult, TickReport, World};
