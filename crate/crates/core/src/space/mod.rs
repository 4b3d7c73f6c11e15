//! Metric measure graphs given by neighbor oracles.
//!
//! Every length is an integer number of *scaled units*: a space with scale `S`
//! stores a true length `ℓ` as `ℓ·S`. Shortest paths are therefore exact, and
//! radii such as `1/100` or `1/2` are representable by choosing `S = 100` or
//! `S = 2`. Balls are closed: `B(x, r) = {y : d(x, y) ≤ r}`.
//!
//! Infinite spaces are never materialized. Every exploration takes a
//! [`Budget`] and fails with [`Error::BudgetExceeded`](crate::Error) instead of
//! silently truncating.

mod checks;
mod finite;
mod lattice;
mod search;

use std::fmt;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use checks::{
    b_distance, check_doubling, check_property_m, check_uniform_b_connected, growth_curve,
    is_connected, BConnectivity, Connectivity, DoublingReport,
};
pub use finite::{FiniteSpace, FiniteSpaceDoc};
pub use lattice::Lattice;
pub use search::{
    annulus, ball, distance, distance_to_complement, distance_to_set, distances_from,
    h_boundary, neighborhood, sphere,
};

/// A length in scaled units.
pub type Length = u64;

/// Largest lattice dimension a [`VertexId`] can carry.
pub const MAX_DIM: usize = 4;

/// A vertex: integer coordinates plus a small tag that tells apart copies or
/// subdivision vertices sharing the same coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId {
    dim: u8,
    coords: [i64; MAX_DIM],
    tag: u32,
}

impl VertexId {
    pub fn new(coords: &[i64], tag: u32) -> Self {
        assert!(
            coords.len() <= MAX_DIM,
            "at most {MAX_DIM} coordinates are supported"
        );
        let mut c = [0; MAX_DIM];
        c[..coords.len()].copy_from_slice(coords);
        VertexId {
            dim: coords.len() as u8,
            coords: c,
            tag,
        }
    }

    pub fn point(coords: &[i64]) -> Self {
        Self::new(coords, 0)
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords[..self.dim as usize]
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn tag(&self) -> u32 {
        self.tag
    }

    pub fn with_tag(mut self, tag: u32) -> Self {
        self.tag = tag;
        self
    }

    /// Returns a copy with coordinate `axis` shifted by `delta`.
    pub fn shifted(mut self, axis: usize, delta: i64) -> Self {
        debug_assert!(axis < self.dim());
        self.coords[axis] += delta;
        self
    }

    /// L1 distance between the coordinate vectors (tags ignored).
    pub fn l1(&self, other: &VertexId) -> u64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| a.abs_diff(*b))
            .sum()
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")?;
        if self.tag != 0 {
            write!(f, "#{}", self.tag)?;
        }
        Ok(())
    }
}

/// Parses `1,2`, `(1,2)` or `(1,2)#3`.
impl std::str::FromStr for VertexId {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        let bad = || crate::error::Error::invalid(format!("cannot parse vertex {s:?}"));
        let (body, tag) = match s.trim().split_once('#') {
            Some((b, t)) => (b, t.trim().parse::<u32>().map_err(|_| bad())?),
            None => (s.trim(), 0),
        };
        let body = body.trim().trim_start_matches('(').trim_end_matches(')');
        let coords = body
            .split(',')
            .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<crate::error::Result<Vec<i64>>>()?;
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(bad());
        }
        Ok(VertexId::new(&coords, tag))
    }
}

// Wire form: `[c_0, ..., c_{d-1}, tag]`.
impl Serialize for VertexId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut v: Vec<i64> = self.coords().to_vec();
        v.push(self.tag as i64);
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for VertexId {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<i64>::deserialize(d)?;
        let Some((&tag, coords)) = v.split_last() else {
            return Err(serde::de::Error::custom("vertex needs at least a tag"));
        };
        if coords.len() > MAX_DIM {
            return Err(serde::de::Error::custom("too many coordinates"));
        }
        let tag = u32::try_from(tag).map_err(serde::de::Error::custom)?;
        Ok(VertexId::new(coords, tag))
    }
}

/// An implicit metric measure graph.
///
/// Implementations must be symmetric: `y` with length `L` is reported among
/// the neighbors of `x` iff `x` with length `L` is reported among those of `y`.
/// Lengths are at least one scaled unit and measures at least one.
pub trait Space: Send + Sync {
    /// Number of scaled units per unit of true length.
    fn scale(&self) -> Length;

    fn contains(&self, v: VertexId) -> bool;

    /// Appends the neighbors of `v` and the edge lengths to `out`.
    fn neighbors(&self, v: VertexId, out: &mut Vec<(VertexId, Length)>);

    fn measure(&self, _v: VertexId) -> u64 {
        1
    }

    /// The full vertex list, for finite spaces.
    fn finite_vertices(&self) -> Option<&[VertexId]> {
        None
    }
}

impl<S: Space + ?Sized> Space for &S {
    fn scale(&self) -> Length {
        (**self).scale()
    }
    fn contains(&self, v: VertexId) -> bool {
        (**self).contains(v)
    }
    fn neighbors(&self, v: VertexId, out: &mut Vec<(VertexId, Length)>) {
        (**self).neighbors(v, out)
    }
    fn measure(&self, v: VertexId) -> u64 {
        (**self).measure(v)
    }
    fn finite_vertices(&self) -> Option<&[VertexId]> {
        (**self).finite_vertices()
    }
}

impl<S: Space + ?Sized> Space for Box<S> {
    fn scale(&self) -> Length {
        (**self).scale()
    }
    fn contains(&self, v: VertexId) -> bool {
        (**self).contains(v)
    }
    fn neighbors(&self, v: VertexId, out: &mut Vec<(VertexId, Length)>) {
        (**self).neighbors(v, out)
    }
    fn measure(&self, v: VertexId) -> u64 {
        (**self).measure(v)
    }
    fn finite_vertices(&self) -> Option<&[VertexId]> {
        (**self).finite_vertices()
    }
}

/// Cap on the number of vertices a single exploration may discover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_vertices: usize,
}

impl Budget {
    pub const fn new(max_vertices: usize) -> Self {
        Budget { max_vertices }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(4_000_000)
    }
}

/// A finite vertex set with its cached total measure.
#[derive(Clone, Debug, Default)]
pub struct SubsetRegion {
    vertices: FxHashSet<VertexId>,
    measure: u64,
}

impl SubsetRegion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_vertices<S: Space + ?Sized>(
        space: &S,
        vertices: impl IntoIterator<Item = VertexId>,
    ) -> Self {
        let vertices: FxHashSet<VertexId> = vertices.into_iter().collect();
        let measure = vertices.iter().map(|v| space.measure(*v)).sum();
        SubsetRegion { vertices, measure }
    }

    /// Builds a region for a counting-measure space.
    pub fn counted(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let vertices: FxHashSet<VertexId> = vertices.into_iter().collect();
        let measure = vertices.len() as u64;
        SubsetRegion { vertices, measure }
    }

    pub fn measure(&self) -> u64 {
        self.measure
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.vertices.contains(v)
    }

    pub fn iter(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter()
    }

    pub fn as_set(&self) -> &FxHashSet<VertexId> {
        &self.vertices
    }

    /// Vertices in ascending order.
    pub fn sorted(&self) -> Vec<VertexId> {
        let mut v: Vec<_> = self.vertices.iter().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn recompute_measure<S: Space + ?Sized>(&self, space: &S) -> u64 {
        self.vertices.iter().map(|v| space.measure(*v)).sum()
    }

    pub fn is_subset(&self, other: &SubsetRegion) -> bool {
        self.vertices.is_subset(&other.vertices)
    }

    pub fn union<S: Space + ?Sized>(&self, space: &S, other: &SubsetRegion) -> SubsetRegion {
        SubsetRegion::from_vertices(space, self.vertices.union(&other.vertices).copied())
    }

    pub fn intersection<S: Space + ?Sized>(
        &self,
        space: &S,
        other: &SubsetRegion,
    ) -> SubsetRegion {
        SubsetRegion::from_vertices(space, self.vertices.intersection(&other.vertices).copied())
    }

    pub fn difference<S: Space + ?Sized>(&self, space: &S, other: &SubsetRegion) -> SubsetRegion {
        SubsetRegion::from_vertices(space, self.vertices.difference(&other.vertices).copied())
    }
}

impl PartialEq for SubsetRegion {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for SubsetRegion {}

#[derive(Serialize, Deserialize)]
struct RegionDoc {
    measure: u64,
    vertices: Vec<VertexId>,
}

impl Serialize for SubsetRegion {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RegionDoc {
            measure: self.measure,
            vertices: self.sorted(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SubsetRegion {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = RegionDoc::deserialize(d)?;
        Ok(SubsetRegion {
            vertices: doc.vertices.into_iter().collect(),
            measure: doc.measure,
        })
    }
}

/// Exact distances to a source set, complete up to `cap`.
#[derive(Clone, Debug)]
pub struct DistanceMap {
    pub cap: Length,
    pub dist: rustc_hash::FxHashMap<VertexId, Length>,
}

impl DistanceMap {
    pub fn get(&self, v: &VertexId) -> Option<Length> {
        self.dist.get(v).copied()
    }

    /// The closed ball of radius `r ≤ cap` around the sources.
    pub fn within<S: Space + ?Sized>(&self, space: &S, r: Length) -> SubsetRegion {
        debug_assert!(r <= self.cap);
        SubsetRegion::from_vertices(
            space,
            self.dist
                .iter()
                .filter(|(_, d)| **d <= r)
                .map(|(v, _)| *v),
        )
    }

    /// Total measure within distance `r`.
    pub fn measure_within<S: Space + ?Sized>(&self, space: &S, r: Length) -> u64 {
        self.dist
            .iter()
            .filter(|(_, d)| **d <= r)
            .map(|(v, _)| space.measure(*v))
            .sum()
    }
}

/// Ball volumes `V(r)` around a fixed center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthCurve {
    pub center: VertexId,
    pub scale: Length,
    /// `(radius in scaled units, volume)`, radii ascending.
    pub points: Vec<(Length, u64)>,
}

impl GrowthCurve {
    pub fn max_volume(&self) -> u64 {
        self.points.iter().map(|p| p.1).max().unwrap_or(0)
    }
}
