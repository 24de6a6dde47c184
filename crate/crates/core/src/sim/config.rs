use serde::{Deserialize, Serialize};

/// Tunable constants of the simulator. Stored as `f64` and converted to the scalar type in use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Seconds per tick.
    pub dt: f64,
    pub max_ticks: u64,
    /// Radians per second, all unit types.
    pub max_turn_rate: f64,
    /// Acceleration bound as a multiple of the unit's max speed, per second.
    pub accel_factor: f64,
    pub climb_rate: f64,
    /// Vertical speed cap is `climb_rate * climb_scale` world units per second.
    pub climb_scale: f64,
    pub min_altitude: f64,
    pub max_altitude: f64,
    /// Influence-map edge length in world units.
    pub cell_size: f64,
    /// Ticks between influence-map rebuilds.
    pub im_cadence: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            dt: 0.05,
            max_ticks: 2400,
            max_turn_rate: std::f64::consts::PI,
            accel_factor: 2.0,
            climb_rate: 2.0,
            climb_scale: 20.0,
            min_altitude: 0.0,
            max_altitude: 1000.0,
            cell_size: 64.0,
            im_cadence: 8,
        }
    }
}

impl SimConfig {
    pub fn max_climb_speed(&self) -> f64 {
        self.climb_rate * self.climb_scale
    }

    pub fn validate(&self) -> crate::Result<()> {
        let ok = self.dt > 0.0
            && self.max_turn_rate > 0.0
            && self.accel_factor > 0.0
            && self.climb_rate > 0.0
            && self.climb_scale > 0.0
            && self.min_altitude < self.max_altitude
            && self.cell_size > 0.0
            && self.im_cadence > 0;
        if ok {
            Ok(())
        } else {
            Err(crate::Error::InvalidConfig(format!("simulation constants out of range: {self:?}")))
        }
    }
}
