//! Initial unit placements: clumps, clouds, the three training maps and random test maps.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, UnitSphere};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{stream_rng, Stream};
use crate::sim::{Side, UnitKind};
use crate::vec3::Vec3;

pub const MIN_ALTITUDE: f64 = 0.0;
pub const MAX_ALTITUDE: f64 = 1000.0;
/// Half-width of a cloud's shell.
pub const CLOUD_SHELL: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub kind: UnitKind,
    pub side: Side,
    pub position: Vec3<f64>,
    pub heading: Vec3<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub label: String,
    pub seed: u64,
    /// Unit ids follow placement order.
    pub placements: Vec<Placement>,
}

impl Scenario {
    /// Units at rest facing +x.
    pub fn from_units(
        label: &str,
        seed: u64,
        units: impl IntoIterator<Item = (UnitKind, Side, Vec3<f64>)>,
    ) -> Self {
        let placements = units
            .into_iter()
            .map(|(kind, side, position)| Placement { kind, side, position, heading: Vec3::unit_x() })
            .collect();
        Self { label: label.to_string(), seed, placements }
    }

    pub fn count(&self, side: Side) -> usize {
        self.placements.iter().filter(|p| p.side == side).count()
    }

    pub fn validate(&self) -> Result<()> {
        if self.count(Side::Friend) == 0 {
            return Err(Error::InvalidScenario(format!("{}: no friendly units", self.label)));
        }
        for (i, p) in self.placements.iter().enumerate() {
            if !p.position.is_finite() || !(MIN_ALTITUDE..=MAX_ALTITUDE).contains(&p.position.z) {
                return Err(Error::InvalidScenario(format!("{}: placement {i} outside altitude band", self.label)));
            }
        }
        Ok(())
    }

    /// Line format: a `# label <label> seed <seed>` header, then one
    /// `<type> <side> <x> <y> <z> <hx> <hy> <hz>` line per placement.
    pub fn to_text(&self) -> String {
        let mut s = format!("# label {} seed {}\n", self.label, self.seed);
        for p in &self.placements {
            let _ = writeln!(
                s,
                "{} {} {} {} {} {} {} {}",
                p.kind, p.side, p.position.x, p.position.y, p.position.z, p.heading.x, p.heading.y, p.heading.z
            );
        }
        s
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |msg: String| Error::InvalidScenario(msg);
        let mut label = String::from("unnamed");
        let mut seed = 0;
        let mut placements = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('#') {
                let toks: Vec<&str> = header.split_whitespace().collect();
                if let [ "label", l, "seed", s ] = toks.as_slice() {
                    label = (*l).to_string();
                    seed = s.parse().map_err(|_| bad(format!("line {}: bad seed", lineno + 1)))?;
                }
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [kind, side, rest @ ..] = toks.as_slice() else {
                return Err(bad(format!("line {}: too few fields", lineno + 1)));
            };
            let nums = rest
                .iter()
                .map(|t| t.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| bad(format!("line {}: {e}", lineno + 1)))?;
            let [x, y, z, hx, hy, hz] = nums.as_slice() else {
                return Err(bad(format!("line {}: expected 6 numbers", lineno + 1)));
            };
            let kind = match *kind {
                "fvulture" => UnitKind::FVulture,
                "fzealot" => UnitKind::FZealot,
                other => return Err(bad(format!("line {}: unknown unit type {other}", lineno + 1))),
            };
            let side = match *side {
                "friend" => Side::Friend,
                "enemy" => Side::Enemy,
                other => return Err(bad(format!("line {}: unknown side {other}", lineno + 1))),
            };
            placements.push(Placement {
                kind,
                side,
                position: Vec3::new(*x, *y, *z),
                heading: Vec3::new(*hx, *hy, *hz),
            });
        }
        let s = Scenario { label, seed, placements };
        s.validate()?;
        Ok(s)
    }
}

/// Sizes and geometry of generated scenarios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioLayout {
    pub n_friends: usize,
    pub n_enemies: usize,
    pub clump_radius: f64,
    pub cloud_radius: f64,
    /// Distance between the two clump centres in the first training map, along x.
    pub separation: f64,
    pub center_altitude: f64,
    /// Radius of the single clump holding every unit of a random scenario.
    pub random_radius: f64,
}

impl Default for ScenarioLayout {
    fn default() -> Self {
        Self {
            n_friends: 3,
            n_enemies: 30,
            clump_radius: 400.0,
            cloud_radius: 400.0,
            separation: 1200.0,
            center_altitude: 500.0,
            random_radius: 500.0,
        }
    }
}

fn random_heading<R: Rng + ?Sized>(rng: &mut R) -> Vec3<f64> {
    let [x, y, z]: [f64; 3] = UnitSphere.sample(rng);
    Vec3::new(x, y, z)
}

fn clamp_altitude(mut p: Vec3<f64>) -> Vec3<f64> {
    p.z = p.z.clamp(MIN_ALTITUDE, MAX_ALTITUDE);
    p
}

/// `n` units uniform inside the ball of `radius` around `center`, by rejection from the cube.
pub fn clump<R: Rng + ?Sized>(
    center: Vec3<f64>,
    radius: f64,
    n: usize,
    kind: UnitKind,
    side: Side,
    rng: &mut R,
) -> Vec<Placement> {
    assert!(radius > 0.0, "clump radius must be positive");
    (0..n)
        .map(|_| {
            let offset = loop {
                let v = Vec3::new(
                    rng.random_range(-1.0..=1.0),
                    rng.random_range(-1.0..=1.0),
                    rng.random_range(-1.0..=1.0),
                );
                if v.norm_squared() <= 1.0 {
                    break v * radius;
                }
            };
            let heading = random_heading(rng);
            Placement { kind, side, position: clamp_altitude(center + offset), heading }
        })
        .collect()
}

/// `n` units in the shell `radius ± 10` around `center`, radius uniform, direction uniform.
pub fn cloud<R: Rng + ?Sized>(
    center: Vec3<f64>,
    radius: f64,
    n: usize,
    kind: UnitKind,
    side: Side,
    rng: &mut R,
) -> Vec<Placement> {
    assert!(radius > CLOUD_SHELL, "cloud radius must exceed the shell half-width");
    (0..n)
        .map(|_| {
            let dir = random_heading(rng);
            let rho = rng.random_range((radius - CLOUD_SHELL)..=(radius + CLOUD_SHELL));
            let heading = random_heading(rng);
            Placement { kind, side, position: clamp_altitude(center + dir * rho), heading }
        })
        .collect()
}

fn centroid(ps: &[Placement]) -> Vec3<f64> {
    let sum = ps.iter().fold(Vec3::zero(), |acc, p| acc + p.position);
    sum / ps.len().max(1) as f64
}

/// The three training maps: clump vs clump, friend clump inside an enemy cloud, enemy clump
/// inside a friend cloud. Friends always come first in id order.
pub fn training_scenarios(seed: u64, layout: &ScenarioLayout) -> [Scenario; 3] {
    let mut rng = stream_rng(seed, Stream::TrainingScenarios);
    let alt = layout.center_altitude;
    let half = layout.separation / 2.0;
    let (nf, ne) = (layout.n_friends, layout.n_enemies);
    let (vulture, zealot) = (UnitKind::FVulture, UnitKind::FZealot);

    let mut p1 = clump(Vec3::new(-half, 0.0, alt), layout.clump_radius, nf, vulture, Side::Friend, &mut rng);
    p1.extend(clump(Vec3::new(half, 0.0, alt), layout.clump_radius, ne, zealot, Side::Enemy, &mut rng));

    let mut p2 = clump(Vec3::new(0.0, 0.0, alt), layout.clump_radius, nf, vulture, Side::Friend, &mut rng);
    let around = centroid(&p2);
    p2.extend(cloud(around, layout.cloud_radius, ne, zealot, Side::Enemy, &mut rng));

    let enemies = clump(Vec3::new(0.0, 0.0, alt), layout.clump_radius, ne, zealot, Side::Enemy, &mut rng);
    let around = centroid(&enemies);
    let mut p3 = cloud(around, layout.cloud_radius, nf, vulture, Side::Friend, &mut rng);
    p3.extend(enemies);

    let mk = |label: &str, placements| Scenario { label: label.to_string(), seed, placements };
    [mk("clump-vs-clump", p1), mk("friends-in-cloud", p2), mk("enemies-in-cloud", p3)]
}

/// Every unit somewhere in one ball of `layout.random_radius`.
pub fn random_scenario<R: Rng + ?Sized>(rng: &mut R, seed: u64, index: usize, layout: &ScenarioLayout) -> Scenario {
    let center = Vec3::new(0.0, 0.0, layout.center_altitude);
    let mut placements = clump(center, layout.random_radius, layout.n_friends, UnitKind::FVulture, Side::Friend, rng);
    placements.extend(clump(center, layout.random_radius, layout.n_enemies, UnitKind::FZealot, Side::Enemy, rng));
    Scenario { label: format!("random-{index}"), seed, placements }
}

/// The `n` random test scenarios for `seed`, each from its own stream.
pub fn random_scenarios(seed: u64, n: usize, layout: &ScenarioLayout) -> Vec<Scenario> {
    (0..n)
        .map(|i| random_scenario(&mut stream_rng(seed, Stream::RandomScenario(i as u32)), seed, i, layout))
        .collect()
}
