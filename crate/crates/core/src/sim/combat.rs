use crate::scalar::Scalar;

use super::UnitState;

/// One landed volley.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DamageEvent<T> {
    pub attacker: usize,
    pub target: usize,
    /// Hitpoints actually removed, never more than the target had left.
    pub damage: T,
    pub killed: bool,
}

/// Nearest living enemy within weapon range, ties to the lowest id. Firing is omnidirectional.
pub fn acquire_target<T: Scalar>(unit: &UnitState<T>, units: &[UnitState<T>]) -> Option<usize> {
    let range_sq = unit.spec.weapon_range * unit.spec.weapon_range;
    let mut best: Option<(T, usize)> = None;
    for other in units {
        if !other.alive || other.side == unit.side {
            continue;
        }
        let d2 = (other.position - unit.position).norm_squared();
        if d2 > range_sq {
            continue;
        }
        match best {
            Some((bd, bid)) if d2 > bd || (d2 == bd && other.id > bid) => {}
            _ => best = Some((d2, other.id)),
        }
    }
    best.map(|(_, id)| id)
}

/// Applies one volley from `attacker` to `target` and starts the attacker's cooldown.
///
/// Panics if the attacker is dead or still cooling down, or the target is dead or out of range.
pub fn fire<T: Scalar>(attacker: &mut UnitState<T>, target: &mut UnitState<T>) -> DamageEvent<T> {
    assert!(attacker.ready_to_fire(), "unit {} cannot fire", attacker.id);
    assert!(target.alive, "target {} already dead", target.id);
    assert!(
        attacker.position.distance(target.position) <= attacker.spec.weapon_range,
        "target {} out of range of {}",
        target.id,
        attacker.id
    );
    let damage = attacker.spec.volley_damage().min(target.hitpoints);
    target.hitpoints = target.hitpoints - damage;
    if target.hitpoints <= T::zero() {
        target.hitpoints = T::zero();
        target.alive = false;
    }
    attacker.cooldown_remaining = attacker.spec.weapon_cooldown;
    DamageEvent {
        attacker: attacker.id,
        target: target.id,
        damage,
        killed: !target.alive,
    }
}
