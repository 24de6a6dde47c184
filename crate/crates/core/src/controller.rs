use crate::fields::{total_field, MicroParams};
use crate::influence::{compute_im, select_target_cell, GridSpec};
use crate::scalar::Scalar;
use crate::sim::{Controller, Side, SimConfig, SteeringCommand, UnitState, World};
use crate::vec3::Vec3;

/// Steers a side with potential fields towards the minimum cell of an influence map built from
/// the opposing side. The map is rebuilt every `cadence` ticks.
#[derive(Debug, Clone)]
pub struct FieldController<T> {
    params: MicroParams<T>,
    cell_size: T,
    cadence: u64,
    target: Option<Vec3<T>>,
}

impl<T: Scalar> FieldController<T> {
    pub fn new(params: MicroParams<T>, cfg: &SimConfig) -> Self {
        Self {
            params,
            cell_size: T::lit(cfg.cell_size),
            cadence: cfg.im_cadence.max(1),
            target: None,
        }
    }

    pub fn params(&self) -> &MicroParams<T> {
        &self.params
    }

    /// Attack location chosen at the last rebuild.
    pub fn target(&self) -> Option<Vec3<T>> {
        self.target
    }

    fn rebuild_target(&mut self, world: &World<T>, side: Side) {
        // With a zero target coefficient the attack location cannot affect steering.
        if self.params.target().c == T::zero() {
            self.target = None;
            return;
        }
        let Some(centroid) = world.centroid(side) else {
            self.target = None;
            return;
        };
        let living = world.units.iter().filter(|u| u.alive).map(|u| u.position);
        let Some(spec) = GridSpec::covering(living, self.params.im.r, self.cell_size) else {
            self.target = None;
            return;
        };
        let grid = compute_im(world.living(side.opponent()), &self.params.im, &spec);
        self.target = Some(select_target_cell(&grid, centroid));
    }
}

impl<T: Scalar> Controller<T> for FieldController<T> {
    fn prepare(&mut self, snapshot: &World<T>, side: Side) {
        if self.target.is_none() || snapshot.tick.is_multiple_of(self.cadence) {
            self.rebuild_target(snapshot, side);
        }
    }

    fn steer(&self, unit: &UnitState<T>, snapshot: &World<T>) -> SteeringCommand<T> {
        total_field(unit, &snapshot.units, self.target, &self.params)
    }
}
