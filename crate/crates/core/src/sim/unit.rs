use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vec3::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Friend,
    Enemy,
}

impl Side {
    pub fn opponent(self) -> Side {
        match self {
            Side::Friend => Side::Enemy,
            Side::Enemy => Side::Friend,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Friend => "friend",
            Side::Enemy => "enemy",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Immutable combat and movement stats of a unit type.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitTypeSpec<T> {
    pub name: &'static str,
    pub max_hitpoints: T,
    /// World units per second.
    pub max_speed: T,
    pub max_damage_per_shot: T,
    pub shots_per_attack: u32,
    pub weapon_range: T,
    /// Seconds between firings.
    pub weapon_cooldown: T,
}

impl<T: Scalar> UnitTypeSpec<T> {
    pub fn new(
        name: &'static str,
        max_hitpoints: T,
        max_speed: T,
        max_damage_per_shot: T,
        shots_per_attack: u32,
        weapon_range: T,
        weapon_cooldown: T,
    ) -> Result<Self> {
        let positive = [max_hitpoints, max_speed, max_damage_per_shot, weapon_range, weapon_cooldown]
            .iter()
            .all(|v| *v > T::zero() && v.is_finite());
        if !positive || shots_per_attack == 0 {
            return Err(Error::InvalidUnitType(name.to_string()));
        }
        Ok(Self {
            name,
            max_hitpoints,
            max_speed,
            max_damage_per_shot,
            shots_per_attack,
            weapon_range,
            weapon_cooldown,
        })
    }

    /// Damage delivered by one fire event: every shot of the volley lands in the same packet.
    pub fn volley_damage(&self) -> T {
        self.max_damage_per_shot * T::lit(f64::from(self.shots_per_attack))
    }
}

/// The two built-in flying unit types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitKind {
    FVulture,
    FZealot,
}

impl UnitKind {
    pub fn spec<T: Scalar>(self) -> UnitTypeSpec<T> {
        let (name, hp, speed, dmg, shots, range, cooldown) = match self {
            UnitKind::FVulture => ("fvulture", 80.0, 64.0, 20.0, 1, 256.0, 1.1),
            UnitKind::FZealot => ("fzealot", 160.0, 40.0, 16.0, 2, 224.0, 1.24),
        };
        UnitTypeSpec::new(
            name,
            T::lit(hp),
            T::lit(speed),
            T::lit(dmg),
            shots,
            T::lit(range),
            T::lit(cooldown),
        )
        .expect("built-in unit types are valid")
    }

    pub fn as_str(self) -> &'static str {
        match self {
            UnitKind::FVulture => "fvulture",
            UnitKind::FZealot => "fzealot",
        }
    }
}

impl fmt::Display for UnitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Mutable state of one entity during a skirmish.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitState<T> {
    pub id: usize,
    pub kind: UnitKind,
    pub spec: UnitTypeSpec<T>,
    pub side: Side,
    pub position: Vec3<T>,
    /// Unit length.
    pub heading: Vec3<T>,
    pub speed: T,
    pub hitpoints: T,
    pub cooldown_remaining: T,
    pub alive: bool,
}

impl<T: Scalar> UnitState<T> {
    /// Full health, weapon ready, at rest.
    pub fn spawn(id: usize, kind: UnitKind, side: Side, position: Vec3<T>, heading: Vec3<T>) -> Self {
        let spec = kind.spec::<T>();
        let heading = match heading.normalized_or_zero(T::lit(1e-9)) {
            h if h == Vec3::zero() => Vec3::unit_x(),
            h => h,
        };
        Self {
            id,
            kind,
            spec,
            side,
            position,
            heading,
            speed: T::zero(),
            hitpoints: spec.max_hitpoints,
            cooldown_remaining: T::zero(),
            alive: true,
        }
    }

    /// Health fraction in [0, 1].
    pub fn health_fraction(&self) -> T {
        (self.hitpoints / self.spec.max_hitpoints).max(T::zero()).min(T::one())
    }

    /// Fraction of the weapon cooldown still to run, in [0, 1].
    pub fn cooldown_fraction(&self) -> T {
        (self.cooldown_remaining / self.spec.weapon_cooldown)
            .max(T::zero())
            .min(T::one())
    }

    pub fn ready_to_fire(&self) -> bool {
        self.alive && self.cooldown_remaining <= T::zero()
    }
}

/// What a controller asks of one unit for the coming tick.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeringCommand<T> {
    /// Unit vector, or zero to hold the current heading and slow down.
    pub desired_heading: Vec3<T>,
    pub desired_speed: T,
}

impl<T: Scalar> SteeringCommand<T> {
    pub fn hold() -> Self {
        Self {
            desired_heading: Vec3::zero(),
            desired_speed: T::zero(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_specs_match_unit_table() {
        let v = UnitKind::FVulture.spec::<f64>();
        assert_eq!(
            (v.max_hitpoints, v.max_speed, v.max_damage_per_shot, v.shots_per_attack, v.weapon_range, v.weapon_cooldown),
            (80.0, 64.0, 20.0, 1, 256.0, 1.1)
        );
        let z = UnitKind::FZealot.spec::<f64>();
        assert_eq!(
            (z.max_hitpoints, z.max_speed, z.max_damage_per_shot, z.shots_per_attack, z.weapon_range, z.weapon_cooldown),
            (160.0, 40.0, 16.0, 2, 224.0, 1.24)
        );
        assert_eq!(z.volley_damage(), 32.0);
    }

    #[test]
    fn rejects_non_positive_stats() {
        assert!(UnitTypeSpec::new("bad", 0.0_f64, 1.0, 1.0, 1, 1.0, 1.0).is_err());
        assert!(UnitTypeSpec::new("bad", 1.0_f64, 1.0, 1.0, 0, 1.0, 1.0).is_err());
        assert!(UnitTypeSpec::new("bad", 1.0_f64, 1.0, 1.0, 1, 1.0, -1.0).is_err());
    }
}
