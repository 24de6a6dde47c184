//! 3D influence maps built from unit health and weapon state.
//!
//! Each unit spreads a starting influence `I_s = w1 * health + w2 * cooldown + w3` over every
//! cell within `r` cells of its own (Chebyshev distance, so all 26 neighbours are at distance
//! one), decreasing by `I_s * i_f` per cell of distance. Cell values are plain sums and may go
//! negative. The squad moves towards the minimum cell.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::sim::UnitState;
use crate::vec3::Vec3;

pub const MAX_RANGE: u32 = 8;
pub const MAX_BIAS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IMParams<T> {
    /// Influence range in cells, `0..=8`.
    pub r: u32,
    /// Influence lost per cell of distance, as a fraction of the starting influence.
    pub i_f: T,
    /// Health weight.
    pub w1: T,
    /// Cooldown weight.
    pub w2: T,
    /// Constant bias, `[0, 8]`.
    pub w3: T,
}

impl<T: Scalar> IMParams<T> {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: T| v >= T::zero() && v <= T::one();
        if self.r > MAX_RANGE {
            return Err(Error::InvalidParams(format!("im range r = {} exceeds {MAX_RANGE}", self.r)));
        }
        if !unit(self.i_f) || !unit(self.w1) || !unit(self.w2) {
            return Err(Error::InvalidParams(format!(
                "im weights must lie in [0, 1]: i_f={} w1={} w2={}",
                self.i_f, self.w1, self.w2
            )));
        }
        if !(self.w3 >= T::zero() && self.w3 <= T::lit(MAX_BIAS)) {
            return Err(Error::InvalidParams(format!("im bias w3 = {} outside [0, 8]", self.w3)));
        }
        Ok(())
    }
}

/// Starting influence of a living unit.
pub fn starting_influence<T: Scalar>(unit: &UnitState<T>, p: &IMParams<T>) -> T {
    p.w1 * unit.health_fraction() + p.w2 * unit.cooldown_fraction() + p.w3
}

pub type CellIndex = [i64; 3];

/// Placement of a dense cell grid in world space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub dims: [usize; 3],
    pub cell_size: T,
    /// World position of the minimum corner of cell (0, 0, 0).
    pub origin: Vec3<T>,
}

impl<T: Scalar> GridSpec<T> {
    pub fn new(dims: [usize; 3], cell_size: T, origin: Vec3<T>) -> Result<Self> {
        if dims.contains(&0) || !(cell_size > T::zero()) || !origin.is_finite() {
            return Err(Error::InvalidParams(format!("bad grid: dims {dims:?}, cell size {cell_size}")));
        }
        Ok(Self { dims, cell_size, origin })
    }

    /// Cell-aligned box around `positions`, padded by `r + 1` cells on every side.
    pub fn covering(positions: impl IntoIterator<Item = Vec3<T>>, r: u32, cell_size: T) -> Option<Self> {
        let mut lo = [i64::MAX; 3];
        let mut hi = [i64::MIN; 3];
        let mut any = false;
        for p in positions {
            any = true;
            for (axis, v) in [p.x, p.y, p.z].into_iter().enumerate() {
                let c = world_to_cell(v, T::zero(), cell_size);
                lo[axis] = lo[axis].min(c);
                hi[axis] = hi[axis].max(c);
            }
        }
        if !any {
            return None;
        }
        let pad = i64::from(r) + 1;
        let origin_cell = lo.map(|c| c - pad);
        let dims = [0, 1, 2].map(|a| (hi[a] - lo[a] + 2 * pad + 1) as usize);
        let origin = Vec3::new(
            T::lit(origin_cell[0] as f64) * cell_size,
            T::lit(origin_cell[1] as f64) * cell_size,
            T::lit(origin_cell[2] as f64) * cell_size,
        );
        Some(Self { dims, cell_size, origin })
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Grid coordinates of the cell containing `p`; may lie outside the grid.
    pub fn cell_of(&self, p: Vec3<T>) -> CellIndex {
        [
            world_to_cell(p.x, self.origin.x, self.cell_size),
            world_to_cell(p.y, self.origin.y, self.cell_size),
            world_to_cell(p.z, self.origin.z, self.cell_size),
        ]
    }

    pub fn contains(&self, c: CellIndex) -> bool {
        (0..3).all(|a| c[a] >= 0 && (c[a] as usize) < self.dims[a])
    }

    /// x varies fastest, then y, then z.
    pub fn linear_index(&self, c: [usize; 3]) -> usize {
        (c[2] * self.dims[1] + c[1]) * self.dims[0] + c[0]
    }

    pub fn cell_coords(&self, linear: usize) -> [usize; 3] {
        let x = linear % self.dims[0];
        let rest = linear / self.dims[0];
        [x, rest % self.dims[1], rest / self.dims[1]]
    }

    pub fn cell_center(&self, c: [usize; 3]) -> Vec3<T> {
        let half = T::lit(0.5);
        let at = |i: usize, o: T| o + (T::lit(i as f64) + half) * self.cell_size;
        Vec3::new(at(c[0], self.origin.x), at(c[1], self.origin.y), at(c[2], self.origin.z))
    }
}

fn world_to_cell<T: Scalar>(v: T, origin: T, cell_size: T) -> i64 {
    ((v - origin) / cell_size).floor().to_i64().unwrap_or(0)
}

pub fn chebyshev(a: CellIndex, b: CellIndex) -> i64 {
    (0..3).map(|i| (a[i] - b[i]).abs()).max().unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct IMGrid<T> {
    pub spec: GridSpec<T>,
    /// Dense, indexed by [`GridSpec::linear_index`].
    pub values: Vec<T>,
}

impl<T: Scalar> IMGrid<T> {
    pub fn zeros(spec: GridSpec<T>) -> Self {
        Self { values: vec![T::zero(); spec.len()], spec }
    }

    pub fn get(&self, c: [usize; 3]) -> T {
        self.values[self.spec.linear_index(c)]
    }
}

/// Influence map of `units` (dead ones are skipped) over the grid `spec`.
pub fn compute_im<'a, T: Scalar>(
    units: impl IntoIterator<Item = &'a UnitState<T>>,
    p: &IMParams<T>,
    spec: &GridSpec<T>,
) -> IMGrid<T> {
    let mut grid = IMGrid::zeros(*spec);
    let r = i64::from(p.r);
    for u in units.into_iter().filter(|u| u.alive) {
        let start = starting_influence(u, p);
        let decay = start * p.i_f;
        let home = spec.cell_of(u.position);
        let lo = [0, 1, 2].map(|a| (home[a] - r).max(0));
        let hi = [0, 1, 2].map(|a| (home[a] + r).min(spec.dims[a] as i64 - 1));
        if (0..3).any(|a| lo[a] > hi[a]) {
            continue;
        }
        for z in lo[2]..=hi[2] {
            for y in lo[1]..=hi[1] {
                let row = spec.linear_index([0, y as usize, z as usize]);
                for x in lo[0]..=hi[0] {
                    let d = chebyshev(home, [x, y, z]);
                    let v = &mut grid.values[row + x as usize];
                    *v = *v + (start - T::lit(d as f64) * decay);
                }
            }
        }
    }
    grid
}

/// World-space centre of the minimum cell. Ties go to the cell nearest `squad_centroid`, then to
/// the lowest linear index.
pub fn select_target_cell<T: Scalar>(grid: &IMGrid<T>, squad_centroid: Vec3<T>) -> Vec3<T> {
    assert!(!grid.values.is_empty(), "empty influence grid");
    let spec = &grid.spec;
    let min = grid.values.iter().copied().fold(T::infinity(), T::min);

    // Squared centre-to-centroid distance separates per axis.
    let axis_d2 = |axis: usize, o: T, c: T| -> Vec<T> {
        (0..spec.dims[axis])
            .map(|i| {
                let d = o + (T::lit(i as f64) + T::lit(0.5)) * spec.cell_size - c;
                d * d
            })
            .collect()
    };
    let dx = axis_d2(0, spec.origin.x, squad_centroid.x);
    let dy = axis_d2(1, spec.origin.y, squad_centroid.y);
    let dz = axis_d2(2, spec.origin.z, squad_centroid.z);

    let mut best: Option<(T, usize)> = None;
    let mut i = 0;
    for &dzz in &dz {
        for &dyy in &dy {
            let dyz = dyy + dzz;
            for &dxx in &dx {
                if grid.values[i] == min {
                    let d2 = dxx + dyz;
                    if best.is_none_or(|(b, _)| d2 < b) {
                        best = Some((d2, i));
                    }
                }
                i += 1;
            }
        }
    }
    let (_, best) = best.expect("grid has a minimum");
    spec.cell_center(spec.cell_coords(best))
}
