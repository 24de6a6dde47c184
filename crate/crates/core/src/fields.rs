//! Potential fields steering the controlled squad.
//!
//! Every other living unit exerts, per factor (distance, health, weapon cooldown), an attractive
//! and a repulsive field of the form `c * x^e` along the unit vector pointing at it. Friends and
//! enemies use separate terms. A thirteenth term attracts (or repels) towards the
//! influence-map target. The unit heads along the normalized sum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::influence::IMParams;
use crate::scalar::Scalar;
use crate::sim::{SteeringCommand, UnitState};
use crate::vec3::Vec3;

pub const N_TERMS: usize = 13;
pub const TARGET_TERM: usize = 12;
pub const C_LIMIT: f64 = 10_000.0;
pub const E_MIN: i32 = -7;
pub const E_MAX: i32 = 8;
/// Floor for health and cooldown fractions raised to negative exponents.
pub const FRACTION_FLOOR: f64 = 1.0 / 256.0;
const DIRECTION_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    Distance,
    Health,
    Weapon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    FriendAttract,
    FriendRepel,
    EnemyAttract,
    EnemyRepel,
}

/// Position of a term in [`MicroParams::pf`]: four terms per factor, in relation order.
pub const fn term_index(factor: Factor, relation: Relation) -> usize {
    let base = match factor {
        Factor::Distance => 0,
        Factor::Health => 4,
        Factor::Weapon => 8,
    };
    base + match relation {
        Relation::FriendAttract => 0,
        Relation::FriendRepel => 1,
        Relation::EnemyAttract => 2,
        Relation::EnemyRepel => 3,
    }
}

/// One `c * x^e` field.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PFTerm<T> {
    pub c: T,
    pub e: i32,
}

impl<T: Scalar> PFTerm<T> {
    pub fn new(c: T, e: i32) -> Self {
        Self { c, e }
    }

    /// `c * x^e` for an already clamped `x`.
    #[inline]
    fn eval(&self, x: T) -> T {
        if self.c == T::zero() {
            return T::zero();
        }
        self.c * x.powi(self.e)
    }
}

/// A complete controller: thirteen potential-field terms plus influence-map parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MicroParams<T> {
    pub pf: [PFTerm<T>; N_TERMS],
    pub im: IMParams<T>,
}

impl<T: Scalar> MicroParams<T> {
    /// All coefficients zero; units drift to a halt.
    pub fn inert() -> Self {
        Self {
            pf: [PFTerm::new(T::zero(), 0); N_TERMS],
            im: IMParams { r: 0, i_f: T::zero(), w1: T::zero(), w2: T::zero(), w3: T::zero() },
        }
    }

    pub fn term(&self, factor: Factor, relation: Relation) -> &PFTerm<T> {
        &self.pf[term_index(factor, relation)]
    }

    pub fn term_mut(&mut self, factor: Factor, relation: Relation) -> &mut PFTerm<T> {
        &mut self.pf[term_index(factor, relation)]
    }

    pub fn target(&self) -> &PFTerm<T> {
        &self.pf[TARGET_TERM]
    }

    pub fn validate(&self) -> Result<()> {
        for (i, t) in self.pf.iter().enumerate() {
            if !(t.c.abs() <= T::lit(C_LIMIT)) {
                return Err(Error::InvalidParams(format!("c{} = {} outside [-10000, 10000]", i + 1, t.c)));
            }
            if !(E_MIN..=E_MAX).contains(&t.e) {
                return Err(Error::InvalidParams(format!("e{} = {} outside [-7, 8]", i + 1, t.e)));
            }
        }
        self.im.validate()
    }

    pub fn cast<U: Scalar>(&self) -> MicroParams<U> {
        let c = |v: T| U::lit(v.to_f64_lossy());
        MicroParams {
            pf: self.pf.map(|t| PFTerm::new(c(t.c), t.e)),
            im: IMParams { r: self.im.r, i_f: c(self.im.i_f), w1: c(self.im.w1), w2: c(self.im.w2), w3: c(self.im.w3) },
        }
    }
}

/// Field strength `c * max(d, 1)^e`.
pub fn pf_magnitude<T: Scalar>(term: &PFTerm<T>, d: T) -> T {
    term.eval(d.max(T::one()))
}

/// Unit vector from `p` towards `u`, or zero when they coincide.
pub fn direction<T: Scalar>(p: Vec3<T>, u: Vec3<T>) -> Vec3<T> {
    let delta = u - p;
    let len = delta.norm();
    if !(len >= T::lit(DIRECTION_EPS)) {
        return Vec3::zero();
    }
    delta / len
}

/// Sum over the other living units of `n * (c_att * x^e_att - c_rep * x^e_rep)` for each factor,
/// where `x` is the clamped per-unit quantity and the attract/repel pair depends on allegiance.
/// Returns the distance, health and weapon fields in that order.
fn factor_fields<T: Scalar>(me: &UnitState<T>, others: &[UnitState<T>], params: &MicroParams<T>, factors: &[Factor]) -> [Vec3<T>; 3] {
    let floor = T::lit(FRACTION_FLOOR);
    let mut acc = [Vec3::zero(); 3];
    for o in others.iter().filter(|o| o.alive && o.id != me.id) {
        let delta = o.position - me.position;
        let d = delta.norm();
        if !(d >= T::lit(DIRECTION_EPS)) {
            continue;
        }
        let n = delta / d;
        let (att, rep) = if o.side == me.side {
            (Relation::FriendAttract, Relation::FriendRepel)
        } else {
            (Relation::EnemyAttract, Relation::EnemyRepel)
        };
        for &factor in factors {
            let (slot, x) = match factor {
                Factor::Distance => (0, d.max(T::one())),
                Factor::Health => (1, o.health_fraction().max(floor)),
                Factor::Weapon => (2, o.cooldown_fraction().max(floor)),
            };
            let s = params.term(factor, att).eval(x) - params.term(factor, rep).eval(x);
            acc[slot] += n * s;
        }
    }
    acc
}

fn factor_field<T: Scalar>(me: &UnitState<T>, others: &[UnitState<T>], params: &MicroParams<T>, factor: Factor) -> Vec3<T> {
    let slot = match factor {
        Factor::Distance => 0,
        Factor::Health => 1,
        Factor::Weapon => 2,
    };
    factor_fields(me, others, params, &[factor])[slot]
}

pub fn distance_field<T: Scalar>(me: &UnitState<T>, others: &[UnitState<T>], params: &MicroParams<T>) -> Vec3<T> {
    factor_field(me, others, params, Factor::Distance)
}

pub fn health_field<T: Scalar>(me: &UnitState<T>, others: &[UnitState<T>], params: &MicroParams<T>) -> Vec3<T> {
    factor_field(me, others, params, Factor::Health)
}

pub fn weapon_field<T: Scalar>(me: &UnitState<T>, others: &[UnitState<T>], params: &MicroParams<T>) -> Vec3<T> {
    factor_field(me, others, params, Factor::Weapon)
}

pub fn target_field<T: Scalar>(me: &UnitState<T>, target: Vec3<T>, params: &MicroParams<T>) -> Vec3<T> {
    let m = direction(me.position, target);
    if m == Vec3::zero() {
        return m;
    }
    m * pf_magnitude(params.target(), me.position.distance(target))
}

/// Sum of the four fields.
pub fn net_field<T: Scalar>(
    me: &UnitState<T>,
    others: &[UnitState<T>],
    target: Option<Vec3<T>>,
    params: &MicroParams<T>,
) -> Vec3<T> {
    let t = target.map_or_else(Vec3::zero, |t| target_field(me, t, params));
    let [d, h, w] = factor_fields(me, others, params, &[Factor::Distance, Factor::Health, Factor::Weapon]);
    t + d + h + w
}

/// Steering along the net field at the unit's top speed. Alignment scaling happens in the
/// physics step.
pub fn total_field<T: Scalar>(
    me: &UnitState<T>,
    others: &[UnitState<T>],
    target: Option<Vec3<T>>,
    params: &MicroParams<T>,
) -> SteeringCommand<T> {
    let f = net_field(me, others, target, params);
    SteeringCommand {
        desired_heading: f.normalized_or_zero(T::lit(DIRECTION_EPS)),
        desired_speed: me.spec.max_speed,
    }
}
