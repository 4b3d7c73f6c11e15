use serde::{Deserialize, Serialize};

use super::carved::{find_by_axis, Carving, CarvedLattice, LatticeBox};
use crate::error::{Error, Result};
use crate::space::{Budget, SubsetRegion, VertexId};

/// An integer sequence indexed by the level `n ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthMap {
    /// `n`
    Linear,
    /// `2^n`
    Pow2,
    /// `2^{n^2}`
    Pow2Square,
    /// `2^{2^n}`
    DoublePow2,
    /// Explicit values for `n = 1, 2, …`.
    Table(Vec<u64>),
}

impl GrowthMap {
    pub fn at(&self, n: u32) -> Result<u64> {
        let too_big = || Error::InvalidScaling(format!("value at n = {n} overflows"));
        match self {
            GrowthMap::Linear => Ok(n as u64),
            GrowthMap::Pow2 => 1u64.checked_shl(n).ok_or_else(too_big),
            GrowthMap::Pow2Square => n
                .checked_mul(n)
                .filter(|e| *e < 64)
                .map(|e| 1u64 << e)
                .ok_or_else(too_big),
            GrowthMap::DoublePow2 => 1u32
                .checked_shl(n)
                .filter(|e| *e < 64)
                .map(|e| 1u64 << e)
                .ok_or_else(too_big),
            GrowthMap::Table(v) => v
                .get(n as usize - 1)
                .copied()
                .ok_or_else(|| Error::InvalidScaling(format!("table has no entry for n = {n}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleFn {
    /// Cube sides `2^{2^n}` and face volumes `2^{n^2}`.
    Exact,
    Substituted { side: GrowthMap, face: GrowthMap },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeChainParams {
    pub d: usize,
    pub n_max: u32,
    pub scale_fn: ScaleFn,
}

/// Sizes of level `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Level {
    pub n: u32,
    pub side: u64,
    /// Side of the `(d-1)`-cube door on the `+e_1` face.
    pub face_side: u64,
    /// `face_side^{d-1}`.
    pub face: u64,
    /// Requested face volume before capping to a full face.
    pub face_requested: u64,
    /// `N_n = n · side^d`.
    pub n_volume: u64,
}

/// Level `n` holds `n` cubes `C_n^m` of side `side(n)` centered on the first
/// axis, translated by `n · side(n)` from one another; level `n + 1` starts
/// `(n + 1) · side(n + 1)` after the end of level `n`. A cube keeps only the
/// crossing edges leaving its door `c_n^m`, a centered `(d-1)`-cube on its
/// `+e_1` face.
#[derive(Clone, Debug)]
pub struct CubeChain {
    d: usize,
    levels: Vec<Level>,
    cubes: Vec<(u32, LatticeBox)>,
    doors: Vec<LatticeBox>,
    ranges: Vec<(i64, i64)>,
}

pub type CubeChainSpace = CarvedLattice<CubeChain>;

fn int_root(v: u64, k: u32) -> u64 {
    if k == 1 {
        return v;
    }
    let mut r = (v as f64).powf(1.0 / k as f64).round() as u64;
    while r > 0 && r.checked_pow(k).is_none_or(|p| p > v) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|p| p <= v) {
        r += 1;
    }
    r
}

fn centered(side: u64) -> (i64, i64) {
    let lo = -(side as i64 / 2);
    (lo, lo + side as i64 - 1)
}

impl CubeChain {
    pub fn new(params: &CubeChainParams, budget: Budget) -> Result<Self> {
        let d = params.d;
        if !(2..=4).contains(&d) || params.n_max == 0 {
            return Err(Error::invalid("cube chain needs 2 ≤ d ≤ 4 and n_max ≥ 1"));
        }
        let (side_map, face_map) = match &params.scale_fn {
            ScaleFn::Exact => (GrowthMap::DoublePow2, GrowthMap::Pow2Square),
            ScaleFn::Substituted { side, face } => (side.clone(), face.clone()),
        };
        let mut levels = Vec::new();
        let mut total = 0u128;
        for n in 1..=params.n_max {
            let side = side_map.at(n)?;
            let full_face = side
                .checked_pow(d as u32 - 1)
                .ok_or_else(|| Error::InvalidScaling(format!("face of level {n} overflows")))?;
            let requested = face_map.at(n)?;
            if requested == 0 || side == 0 {
                return Err(Error::InvalidScaling(format!("empty cube or face at level {n}")));
            }
            let capped = requested.min(full_face);
            let face_side = int_root(capped, d as u32 - 1);
            let cube = (side as u128).pow(d as u32);
            total += n as u128 * cube;
            levels.push(Level {
                n,
                side,
                face_side,
                face: face_side.pow(d as u32 - 1),
                face_requested: requested,
                n_volume: u64::try_from(n as u128 * cube)
                    .map_err(|_| Error::InvalidScaling("N_n overflows".into()))?,
            });
        }
        if matches!(params.scale_fn, ScaleFn::Substituted { .. }) {
            check_separation(&levels, d)?;
        }
        if total > budget.max_vertices as u128 {
            return Err(Error::BudgetExceeded {
                limit: budget.max_vertices,
            });
        }

        let mut cubes = Vec::new();
        let mut doors = Vec::new();
        let mut start = 0i64;
        for (i, level) in levels.iter().enumerate() {
            let side = level.side as i64;
            if i > 0 {
                start += side * level.n as i64;
            }
            let (lo, hi) = centered(level.side);
            let (flo, fhi) = centered(level.face_side);
            for m in 0..level.n as i64 {
                let x0 = start + m * level.n as i64 * side;
                let mut b = LatticeBox {
                    lo: [0; 4],
                    hi: [0; 4],
                    dim: d,
                };
                b.lo[0] = x0;
                b.hi[0] = x0 + side - 1;
                for j in 1..d {
                    b.lo[j] = lo;
                    b.hi[j] = hi;
                }
                let mut door = b;
                door.lo[0] = b.hi[0];
                for j in 1..d {
                    door.lo[j] = flo;
                    door.hi[j] = fhi;
                }
                cubes.push((level.n, b));
                doors.push(door);
            }
            start = cubes.last().expect("levels are nonempty").1.hi[0];
        }
        let ranges = cubes.iter().map(|(_, b)| (b.lo[0], b.hi[0])).collect();
        Ok(CubeChain {
            d,
            levels,
            cubes,
            doors,
            ranges,
        })
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, n: u32) -> Result<&Level> {
        self.levels
            .iter()
            .find(|l| l.n == n)
            .ok_or_else(|| Error::invalid(format!("level {n} was not generated")))
    }

    /// The cube `C_n^m`.
    pub fn cube(&self, n: u32, m: u32) -> Result<&LatticeBox> {
        self.cubes
            .iter()
            .filter(|c| c.0 == n)
            .nth(m as usize)
            .map(|c| &c.1)
            .ok_or_else(|| Error::invalid(format!("no cube C_{n}^{m}")))
    }

    /// The door `c_n^m`.
    pub fn door(&self, n: u32, m: u32) -> Result<&LatticeBox> {
        let i = self
            .cubes
            .iter()
            .enumerate()
            .filter(|c| c.1 .0 == n)
            .nth(m as usize)
            .map(|c| c.0)
            .ok_or_else(|| Error::invalid(format!("no cube C_{n}^{m}")))?;
        Ok(&self.doors[i])
    }

    /// `∪_m C_n^m`.
    pub fn level_union(&self, n: u32) -> Result<SubsetRegion> {
        self.level(n)?;
        Ok(SubsetRegion::counted(
            self.cubes
                .iter()
                .filter(|c| c.0 == n)
                .flat_map(|c| c.1.points()),
        ))
    }
}

/// The face must fit in a cube face and shrink relative to it.
fn check_separation(levels: &[Level], d: usize) -> Result<()> {
    let full = |l: &Level| (l.side as u128).pow(d as u32 - 1);
    for l in levels {
        if l.face_requested as u128 > full(l) {
            return Err(Error::InvalidScaling(format!(
                "face {} exceeds the cube face {} at level {}",
                l.face_requested,
                full(l),
                l.n
            )));
        }
    }
    for w in levels.windows(2) {
        // face(n+1) / full(n+1) ≤ face(n) / full(n)
        if w[1].face_requested as u128 * full(&w[0]) > w[0].face_requested as u128 * full(&w[1]) {
            return Err(Error::InvalidScaling(format!(
                "face ratio grows from level {} to {}",
                w[0].n, w[1].n
            )));
        }
    }
    if let (Some(a), Some(b)) = (levels.first(), levels.last()) {
        if levels.len() > 1 && b.face_requested as u128 * full(a) >= a.face_requested as u128 * full(b)
        {
            return Err(Error::InvalidScaling("face ratio does not decrease".into()));
        }
    }
    Ok(())
}

impl Carving for CubeChain {
    fn dim(&self) -> usize {
        self.d
    }

    fn region_of(&self, x: &VertexId) -> Option<usize> {
        if x.dim() != self.d {
            return None;
        }
        let i = find_by_axis(&self.ranges, x.coords()[0])?;
        self.cubes[i].1.contains(x).then_some(i)
    }

    fn keeps(&self, region: usize, inside: &VertexId, _: &VertexId) -> bool {
        self.doors[region].contains(inside)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::h_boundary;

    fn exact() -> CubeChain {
        let p = CubeChainParams {
            d: 2,
            n_max: 2,
            scale_fn: ScaleFn::Exact,
        };
        CubeChain::new(&p, Budget::default()).unwrap()
    }

    #[test]
    fn exact_sizes() {
        let c = exact();
        let l2 = c.level(2).unwrap();
        assert_eq!((l2.side, l2.face, l2.n_volume), (16, 16, 512));
        let l1 = c.level(1).unwrap();
        assert_eq!((l1.side, l1.face), (4, 2));
        // level 2 starts 2·16 after the single level-1 cube ends at x = 3
        assert_eq!(c.cube(2, 0).unwrap().lo[0], 35);
        assert_eq!(c.cube(2, 1).unwrap().lo[0], 35 + 32);
    }

    #[test]
    fn boundary_counts_doors() {
        let c = exact();
        let s = CubeChainSpace::new(c.clone());
        for n in 1..=2 {
            let u = c.level_union(n).unwrap();
            let b = h_boundary(&s, &u, 1, Budget::default()).unwrap();
            let per_cube: usize = c
                .door(n, 0)
                .unwrap()
                .points()
                .iter()
                .map(|v| 1 + s.crossing_edges(v).len())
                .sum();
            assert_eq!(b.measure(), n as u64 * per_cube as u64);
        }
    }

    #[test]
    fn substitution_constraints() {
        let ok = CubeChainParams {
            d: 2,
            n_max: 5,
            scale_fn: ScaleFn::Substituted {
                side: GrowthMap::Pow2,
                face: GrowthMap::Linear,
            },
        };
        assert!(CubeChain::new(&ok, Budget::default()).is_ok());
        let bad = CubeChainParams {
            scale_fn: ScaleFn::Substituted {
                side: GrowthMap::Linear,
                face: GrowthMap::Pow2,
            },
            ..ok.clone()
        };
        assert!(matches!(
            CubeChain::new(&bad, Budget::default()),
            Err(Error::InvalidScaling(_))
        ));
        let flat = CubeChainParams {
            scale_fn: ScaleFn::Substituted {
                side: GrowthMap::Pow2,
                face: GrowthMap::Pow2,
            },
            ..ok
        };
        assert!(matches!(
            CubeChain::new(&flat, Budget::default()),
            Err(Error::InvalidScaling(_))
        ));
    }
}
