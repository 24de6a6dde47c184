use crate::scalar::Scalar;
use crate::scenario::Scenario;
use crate::vec3::Vec3;

use super::{acquire_target, apply_steering, fire, DamageEvent, Side, SimConfig, SteeringCommand, TraceRecord, UnitState};

/// Decides steering for the units of one side.
pub trait Controller<T: Scalar> {
    /// Called once per tick, before any unit of `side` steers, with the pre-tick snapshot.
    fn prepare(&mut self, _snapshot: &World<T>, _side: Side) {}

    /// Steering for `unit`, computed from the frozen pre-tick `snapshot`.
    fn steer(&self, unit: &UnitState<T>, snapshot: &World<T>) -> SteeringCommand<T>;
}

/// Never moves: every command holds heading and brakes.
#[derive(Debug, Clone, Copy, Default)]
pub struct HoldController;

impl<T: Scalar> Controller<T> for HoldController {
    fn steer(&self, _unit: &UnitState<T>, _snapshot: &World<T>) -> SteeringCommand<T> {
        SteeringCommand::hold()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct World<T> {
    /// Indexed by unit id.
    pub units: Vec<UnitState<T>>,
    pub tick: u64,
}

impl<T: Scalar> World<T> {
    pub fn new(mut units: Vec<UnitState<T>>) -> Self {
        for (i, u) in units.iter_mut().enumerate() {
            u.id = i;
        }
        Self { units, tick: 0 }
    }

    pub fn from_scenario(scenario: &Scenario) -> Self {
        let units = scenario
            .placements
            .iter()
            .enumerate()
            .map(|(id, p)| UnitState::spawn(id, p.kind, p.side, p.position.cast(), p.heading.cast()))
            .collect();
        Self { units, tick: 0 }
    }

    pub fn living(&self, side: Side) -> impl Iterator<Item = &UnitState<T>> {
        self.units.iter().filter(move |u| u.alive && u.side == side)
    }

    pub fn living_count(&self, side: Side) -> usize {
        self.living(side).count()
    }

    pub fn total_hitpoints(&self, side: Side) -> T {
        self.units
            .iter()
            .filter(|u| u.side == side)
            .fold(T::zero(), |acc, u| acc + u.hitpoints)
    }

    pub fn centroid(&self, side: Side) -> Option<Vec3<T>> {
        let (sum, n) = self
            .living(side)
            .fold((Vec3::zero(), 0usize), |(s, n), u| (s + u.position, n + 1));
        (n > 0).then(|| sum / T::lit(n as f64))
    }

    pub fn trace_records(&self) -> impl Iterator<Item = TraceRecord> + '_ {
        self.units.iter().map(move |u| TraceRecord::from_unit(self.tick, u))
    }
}

/// Damage landed during one tick.
#[derive(Debug, Clone, PartialEq)]
pub struct TickReport<T> {
    pub events: Vec<DamageEvent<T>>,
    pub damage_to_friends: T,
    pub damage_to_enemies: T,
}

/// Advances `world` by one tick of `cfg.dt` seconds.
pub fn step<T: Scalar>(
    world: &mut World<T>,
    friend: &mut dyn Controller<T>,
    enemy: &mut dyn Controller<T>,
    cfg: &SimConfig,
) -> TickReport<T> {
    let dt = T::lit(cfg.dt);
    let snap_eps = dt * T::lit(1e-6);
    let snapshot = world.clone();
    friend.prepare(&snapshot, Side::Friend);
    enemy.prepare(&snapshot, Side::Enemy);

    let mut report = TickReport {
        events: Vec::new(),
        damage_to_friends: T::zero(),
        damage_to_enemies: T::zero(),
    };

    for id in 0..world.units.len() {
        if !world.units[id].alive {
            continue;
        }
        let controller: &dyn Controller<T> = match world.units[id].side {
            Side::Friend => &*friend,
            Side::Enemy => &*enemy,
        };
        let cmd = controller.steer(&snapshot.units[id], &snapshot);

        let unit = &mut world.units[id];
        apply_steering(unit, &cmd, dt, cfg);
        unit.cooldown_remaining = unit.cooldown_remaining - dt;
        if unit.cooldown_remaining <= snap_eps {
            unit.cooldown_remaining = T::zero();
        }
        if !unit.ready_to_fire() {
            continue;
        }

        if let Some(target) = acquire_target(&world.units[id], &world.units) {
            let (attacker, victim) = pair_mut(&mut world.units, id, target);
            let ev = fire(attacker, victim);
            match victim.side {
                Side::Friend => report.damage_to_friends = report.damage_to_friends + ev.damage,
                Side::Enemy => report.damage_to_enemies = report.damage_to_enemies + ev.damage,
            }
            report.events.push(ev);
        }
    }
    world.tick += 1;
    report
}

fn pair_mut<U>(v: &mut [U], a: usize, b: usize) -> (&mut U, &mut U) {
    assert_ne!(a, b);
    if a < b {
        let (lo, hi) = v.split_at_mut(b);
        (&mut lo[a], &mut hi[0])
    } else {
        let (lo, hi) = v.split_at_mut(a);
        (&mut hi[0], &mut lo[b])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkirmishResult<T> {
    pub damage_to_enemies: T,
    pub damage_to_friends: T,
    pub friend_start_hitpoints: T,
    pub enemy_start_hitpoints: T,
    pub ticks_elapsed: u64,
    pub survivors_friend: usize,
    pub survivors_enemy: usize,
    /// Per-tick snapshots, tick 0 included, when requested.
    pub trace: Option<Vec<TraceRecord>>,
}

/// Plays `scenario` until one side is wiped out or `cfg.max_ticks` ticks have elapsed.
pub fn run_skirmish<T: Scalar>(
    scenario: &Scenario,
    friend: &mut dyn Controller<T>,
    enemy: &mut dyn Controller<T>,
    cfg: &SimConfig,
    record_trace: bool,
) -> SkirmishResult<T> {
    let mut world = World::<T>::from_scenario(scenario);
    let friend_start = world.total_hitpoints(Side::Friend);
    let enemy_start = world.total_hitpoints(Side::Enemy);
    let mut trace = record_trace.then(|| world.trace_records().collect::<Vec<_>>());

    let mut to_friends = T::zero();
    let mut to_enemies = T::zero();
    while world.tick < cfg.max_ticks
        && world.living_count(Side::Friend) > 0
        && world.living_count(Side::Enemy) > 0
    {
        let report = step(&mut world, friend, enemy, cfg);
        to_friends = to_friends + report.damage_to_friends;
        to_enemies = to_enemies + report.damage_to_enemies;
        if let Some(t) = trace.as_mut() {
            t.extend(world.trace_records());
        }
    }

    SkirmishResult {
        damage_to_enemies: to_enemies,
        damage_to_friends: to_friends,
        friend_start_hitpoints: friend_start,
        enemy_start_hitpoints: enemy_start,
        ticks_elapsed: world.tick,
        survivors_friend: world.living_count(Side::Friend),
        survivors_enemy: world.living_count(Side::Enemy),
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::UnitKind;

    /// Steers every unit straight along +x at full speed.
    struct Forward;

    impl Controller<f64> for Forward {
        fn steer(&self, unit: &UnitState<f64>, _: &World<f64>) -> SteeringCommand<f64> {
            SteeringCommand {
                desired_heading: Vec3::unit_x(),
                desired_speed: unit.spec.max_speed,
            }
        }
    }

    fn lone_vulture() -> World<f64> {
        World::new(vec![UnitState::spawn(0, UnitKind::FVulture, Side::Friend, Vec3::from_f64(0.0, 0.0, 500.0), Vec3::unit_x())])
    }

    #[test]
    fn displacement_bounded_by_max_speed() {
        let cfg = SimConfig::default();
        let mut w = lone_vulture();
        let start = w.units[0].position;
        for k in 1..=100u32 {
            step(&mut w, &mut Forward, &mut HoldController, &cfg);
            let moved = start.distance(w.units[0].position);
            assert!(moved <= 64.0 * f64::from(k) * cfg.dt + 1e-9);
        }
        assert_eq!(w.tick, 100);
    }

    #[test]
    fn combat_noop_when_one_side_empty() {
        let cfg = SimConfig::default();
        let mut w = lone_vulture();
        let r = step(&mut w, &mut Forward, &mut HoldController, &cfg);
        assert!(r.events.is_empty());
        assert!(w.units[0].position.x > 0.0);
    }

    #[test]
    fn cooldown_period_is_whole_ticks() {
        // A stationary vulture next to a stationary zealot fires every 22 ticks (1.1 s at 20 Hz).
        let cfg = SimConfig::default();
        let mut w = World::<f64>::new(vec![
            UnitState::spawn(0, UnitKind::FVulture, Side::Friend, Vec3::from_f64(0.0, 0.0, 500.0), Vec3::unit_x()),
            UnitState::spawn(1, UnitKind::FZealot, Side::Enemy, Vec3::from_f64(250.0, 0.0, 500.0), Vec3::unit_x()),
        ]);
        let mut fire_ticks = Vec::new();
        for _ in 0..50 {
            let r = step(&mut w, &mut HoldController, &mut HoldController, &cfg);
            if !r.events.is_empty() {
                fire_ticks.push(w.tick - 1);
            }
        }
        assert_eq!(fire_ticks, vec![0, 22, 44]);
    }

    #[test]
    fn second_shot_after_one_second_is_rejected() {
        let cfg = SimConfig::default();
        let mut w = World::<f64>::new(vec![
            UnitState::spawn(0, UnitKind::FVulture, Side::Friend, Vec3::from_f64(0.0, 0.0, 500.0), Vec3::unit_x()),
            UnitState::spawn(1, UnitKind::FZealot, Side::Enemy, Vec3::from_f64(250.0, 0.0, 500.0), Vec3::unit_x()),
        ]);
        step(&mut w, &mut HoldController, &mut HoldController, &cfg);
        for _ in 0..19 {
            step(&mut w, &mut HoldController, &mut HoldController, &cfg);
        }
        // 20 ticks = 1.0 s after the first shot
        assert!(!w.units[0].ready_to_fire());
        assert!(w.units[0].cooldown_remaining > 0.0);
    }

    #[test]
    fn zero_enemies_ends_immediately() {
        let scenario = Scenario::from_units(
            "solo",
            0,
            (0..3).map(|i| (UnitKind::FVulture, Side::Friend, Vec3::from_f64(i as f64 * 10.0, 0.0, 500.0))),
        );
        let r: SkirmishResult<f64> =
            run_skirmish(&scenario, &mut HoldController, &mut HoldController, &SimConfig::default(), false);
        assert_eq!((r.damage_to_enemies, r.damage_to_friends), (0.0, 0.0));
        assert_eq!((r.survivors_friend, r.survivors_enemy), (3, 0));
        assert_eq!(r.ticks_elapsed, 0);
    }

    #[test]
    fn zero_max_ticks_returns_empty_result() {
        let scenario = Scenario::from_units(
            "duel",
            0,
            [
                (UnitKind::FVulture, Side::Friend, Vec3::from_f64(0.0, 0.0, 500.0)),
                (UnitKind::FZealot, Side::Enemy, Vec3::from_f64(10.0, 0.0, 500.0)),
            ],
        );
        let cfg = SimConfig { max_ticks: 0, ..SimConfig::default() };
        let r: SkirmishResult<f64> = run_skirmish(&scenario, &mut HoldController, &mut HoldController, &cfg, true);
        assert_eq!(r.ticks_elapsed, 0);
        assert_eq!(r.damage_to_enemies + r.damage_to_friends, 0.0);
        assert_eq!(r.trace.unwrap().len(), 2);
    }
}
