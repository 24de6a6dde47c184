use crate::scalar::Scalar;
use crate::vec3::Vec3;

use super::{SimConfig, SteeringCommand, UnitState};

const DIRECTION_EPS: f64 = 1e-9;

/// Advances one unit's kinematics by `dt` seconds under `cmd`.
///
/// Speed tracks `desired_speed * max(0, cos θ)`, θ being the angle between the current and the
/// desired heading, so a unit slows down while it turns. Turning is limited to
/// `cfg.max_turn_rate`, acceleration to `cfg.accel_factor * max_speed`, and the vertical
/// velocity component to `cfg.max_climb_speed()`. Altitude is clamped to the configured band.
pub fn apply_steering<T: Scalar>(unit: &mut UnitState<T>, cmd: &SteeringCommand<T>, dt: T, cfg: &SimConfig) {
    assert!(unit.alive, "apply_steering on dead unit {}", unit.id);
    assert!(dt > T::zero(), "dt must be positive");

    let eps = T::lit(DIRECTION_EPS);
    let desired = cmd.desired_heading.normalized_or_zero(eps);
    let max_speed = unit.spec.max_speed;

    let target_speed = if desired == Vec3::zero() {
        T::zero()
    } else {
        let cos_theta = unit.heading.dot(desired).max(-T::one()).min(T::one());
        let speed = cmd.desired_speed.max(T::zero()).min(max_speed);
        unit.heading = rotate_towards(unit.heading, desired, T::lit(cfg.max_turn_rate) * dt);
        speed * cos_theta.max(T::zero())
    };

    let max_delta = T::lit(cfg.accel_factor) * max_speed * dt;
    let delta = (target_speed - unit.speed).max(-max_delta).min(max_delta);
    unit.speed = (unit.speed + delta).max(T::zero()).min(max_speed);

    unit.heading = limit_climb(unit.heading, unit.speed, T::lit(cfg.max_climb_speed()));

    let mut position = unit.position + unit.heading * (unit.speed * dt);
    position.z = position.z.max(T::lit(cfg.min_altitude)).min(T::lit(cfg.max_altitude));
    unit.position = position;
}

/// Rotates unit vector `from` towards unit vector `to` by at most `max_angle` radians.
pub(crate) fn rotate_towards<T: Scalar>(from: Vec3<T>, to: Vec3<T>, max_angle: T) -> Vec3<T> {
    let cos_theta = from.dot(to).max(-T::one()).min(T::one());
    let theta = cos_theta.acos();
    if theta <= max_angle {
        return to;
    }
    let eps = T::lit(DIRECTION_EPS);
    let mut axis = from.cross(to).normalized_or_zero(eps);
    if axis == Vec3::zero() {
        // Antiparallel: any axis perpendicular to `from` works; pick one deterministically.
        axis = from.cross(Vec3::unit_z()).normalized_or_zero(eps);
        if axis == Vec3::zero() {
            axis = from.cross(Vec3::unit_x()).normalized_or_zero(eps);
        }
    }
    let rotated = from * max_angle.cos() + axis.cross(from) * max_angle.sin();
    rotated.normalized_or_zero(eps)
}

/// Flattens `heading` so that its vertical velocity at `speed` stays within `max_climb`.
fn limit_climb<T: Scalar>(heading: Vec3<T>, speed: T, max_climb: T) -> Vec3<T> {
    if speed <= T::zero() || heading.z.abs() * speed <= max_climb {
        return heading;
    }
    let z = (max_climb / speed).copysign(heading.z);
    let horizontal = Vec3::new(heading.x, heading.y, T::zero()).normalized_or_zero(T::lit(DIRECTION_EPS));
    let horizontal = if horizontal == Vec3::zero() {
        Vec3::unit_x()
    } else {
        horizontal
    };
    let h = (T::one() - z * z).max(T::zero()).sqrt();
    Vec3::new(horizontal.x * h, horizontal.y * h, z)
}
