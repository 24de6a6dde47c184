use rtsmicro::evaluator::{self, evaluate_params, EvalConfig};
use rtsmicro::fields::{term_index, Factor, Relation};
use rtsmicro::scenario::training_scenarios;
use rtsmicro::sim::{run_skirmish, HoldController};
use rtsmicro::{
    baseline_opponent, genome, FieldController, MicroParams, PFTerm, Scenario, ScenarioLayout, Side, SimConfig, UnitKind, Vec3,
};

fn desk_layout() -> ScenarioLayout {
    ScenarioLayout { n_friends: 3, n_enemies: 10, ..Default::default() }
}

fn duel() -> Scenario {
    Scenario::from_units(
        "duel",
        0,
        [
            (UnitKind::FVulture, Side::Friend, Vec3::new(0.0, 0.0, 500.0)),
            (UnitKind::FZealot, Side::Enemy, Vec3::new(200.0, 0.0, 500.0)),
        ],
    )
}

/// Ticks at which a unit standing in range fires: immediately, then every
/// `ceil(cooldown / dt)` ticks.
fn firing_ticks(cooldown: f64, dt: f64, until: u64) -> Vec<u64> {
    let period = (cooldown / dt - 1e-9).ceil() as u64;
    (0..=until).step_by(period as usize).collect()
}

#[test]
fn stationary_duel_matches_cooldown_timeline() {
    let cfg = SimConfig::default();
    let zealot_shots = firing_ticks(1.24, cfg.dt, 1000);
    // 32 damage per volley against 80 hitpoints: the third volley kills.
    let death = zealot_shots[2];
    let vulture_hits = firing_ticks(1.1, cfg.dt, death - 1).len();
    assert_eq!((death, vulture_hits), (50, 3));

    let r = run_skirmish::<f64>(&duel(), &mut HoldController, &mut HoldController, &cfg, false);
    assert_eq!(r.ticks_elapsed, death + 1);
    assert_eq!((r.survivors_friend, r.survivors_enemy), (0, 1));
    assert_eq!(r.damage_to_enemies, 20.0 * vulture_hits as f64);
    assert_eq!(r.damage_to_friends, 80.0);
    let o = evaluator::objectives(&r);
    assert_eq!((o.o1, o.o2), (60.0 / 160.0, 0.0));

    // The single-precision simulator agrees on this timeline.
    let r32 = run_skirmish::<f32>(&duel(), &mut HoldController, &mut HoldController, &cfg, false);
    assert_eq!(r32.ticks_elapsed, r.ticks_elapsed);
    assert_eq!(r32.damage_to_enemies, 60.0);
}

#[test]
fn trace_conserves_damage_and_respects_bounds() {
    let cfg = SimConfig { max_ticks: 1200, ..Default::default() };
    let [_, s2, _] = training_scenarios(7, &desk_layout());
    let mut friend = FieldController::new(genome::Genome::zeros().decode(), &cfg);
    let mut enemy = FieldController::new(baseline_opponent(), &cfg);
    let r = run_skirmish(&s2, &mut friend, &mut enemy, &cfg, true);
    let trace = r.trace.as_ref().unwrap();
    let n = s2.placements.len();
    assert_eq!(trace.len(), n * (r.ticks_elapsed as usize + 1));

    let frames: Vec<_> = trace.chunks(n).collect();
    let hp = |frame: &[rtsmicro::sim::TraceRecord], side: Side| frame.iter().filter(|t| t.side == side).map(|t| t.hp).sum::<f64>();
    let (first, last) = (frames[0], frames[frames.len() - 1]);
    assert!((hp(first, Side::Friend) - hp(last, Side::Friend) - r.damage_to_friends).abs() < 1e-9);
    assert!((hp(first, Side::Enemy) - hp(last, Side::Enemy) - r.damage_to_enemies).abs() < 1e-9);

    let step_limit = 64.0 * cfg.dt + 1e-9;
    for w in frames.windows(2) {
        for (a, b) in w[0].iter().zip(w[1]) {
            assert_eq!((a.id, a.tick + 1), (b.id, b.tick));
            assert!(b.hp <= a.hp && b.hp >= 0.0);
            if a.hp == 0.0 {
                assert_eq!((a.x, a.y, a.z), (b.x, b.y, b.z), "dead units stay put");
            }
            let moved = ((b.x - a.x).powi(2) + (b.y - a.y).powi(2) + (b.z - a.z).powi(2)).sqrt();
            assert!(moved <= step_limit);
            assert!((0.0..=1000.0).contains(&b.z));
        }
    }
}

#[test]
fn baseline_closes_on_a_stationary_vulture() {
    let cfg = SimConfig::default();
    let sc = Scenario::from_units(
        "approach",
        0,
        [
            (UnitKind::FVulture, Side::Friend, Vec3::new(0.0, 0.0, 500.0)),
            (UnitKind::FZealot, Side::Enemy, Vec3::new(1000.0, 300.0, 600.0)),
        ],
    );
    let mut enemy = FieldController::new(baseline_opponent(), &cfg);
    let r = run_skirmish(&sc, &mut HoldController, &mut enemy, &cfg, true);
    // The zealot must cover ~820 units at 40 u/s before it can fire; the vulture fires back.
    assert_eq!(r.survivors_friend, 0);
    assert!(r.damage_to_enemies > 0.0);
    assert!(r.ticks_elapsed > (820.0 / 40.0 / cfg.dt) as u64);
}

fn flee() -> MicroParams {
    let mut p = MicroParams::inert();
    p.pf[term_index(Factor::Distance, Relation::EnemyRepel)] = PFTerm::new(10_000.0, -2);
    p
}

#[test]
fn fleeing_from_a_distant_clump_takes_no_damage() {
    let cfg = EvalConfig::new(vec![training_scenarios(3, &desk_layout())[0].clone()], SimConfig::default());
    // Not via a genome: zero has no exact code, and the nearest one (+2.44 with e = 0) is a
    // constant pull that swamps the repulsion at long range.
    let o = evaluate_params(&flee(), &cfg).unwrap();
    assert_eq!(o.o2, 1.0);
    assert_eq!(o.o1, 0.0);
}

#[test]
fn scenario_order_does_not_change_fitness() {
    let trio = training_scenarios(11, &desk_layout()).to_vec();
    let sim = SimConfig { max_ticks: 600, ..Default::default() };
    let g = genome::Genome::random(&mut rtsmicro::rng::stream_rng(5, rtsmicro::rng::Stream::Evolution));
    let forward = rtsmicro::evaluate(&g, &EvalConfig::new(trio.clone(), sim.clone())).unwrap();
    for perm in [[2, 1, 0], [1, 2, 0], [0, 2, 1]] {
        let shuffled = perm.iter().map(|&i| trio[i].clone()).collect();
        let o = rtsmicro::evaluate(&g, &EvalConfig::new(shuffled, sim.clone())).unwrap();
        assert_eq!(o.o1.to_bits(), forward.o1.to_bits());
        assert_eq!(o.o2.to_bits(), forward.o2.to_bits());
    }
}

#[test]
fn no_enemies_scores_zero_one() {
    let sc = Scenario::from_units("alone", 0, [(UnitKind::FVulture, Side::Friend, Vec3::new(0.0, 0.0, 500.0))]);
    let cfg = EvalConfig::new(vec![sc], SimConfig::default());
    let o = evaluate_params(&baseline_opponent(), &cfg).unwrap();
    assert_eq!((o.o1, o.o2), (0.0, 1.0));
}
