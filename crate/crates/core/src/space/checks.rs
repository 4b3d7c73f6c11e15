//! Regularity checks: chains, property (M), doubling, growth, metric connectivity.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use num_rational::Ratio;
use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use super::search::{distance_to_set, distances_from};
use super::{Budget, GrowthCurve, Length, Space, SubsetRegion, VertexId};
use crate::error::{Error, Result};

/// Minimal number of steps of a b-chain from `x` to `y`, searching at most
/// `max_steps` steps. Consecutive chain points are at distance `≤ b`.
pub fn b_distance<S: Space + ?Sized>(
    space: &S,
    x: VertexId,
    y: VertexId,
    b: Length,
    max_steps: u32,
    budget: Budget,
) -> Result<Option<u32>> {
    if b == 0 {
        return Err(Error::invalid("b must be at least one scaled unit"));
    }
    if x == y {
        return Ok(Some(0));
    }
    let mut seen: FxHashSet<VertexId> = FxHashSet::default();
    seen.insert(x);
    let mut frontier = vec![x];
    for step in 1..=max_steps {
        let mut next = Vec::new();
        for v in frontier {
            let map = distances_from(space, [v], b, budget)?;
            let mut reach: Vec<VertexId> = map.dist.into_keys().collect();
            reach.sort_unstable();
            for u in reach {
                if u == y {
                    return Ok(Some(step));
                }
                if seen.insert(u) {
                    next.push(u);
                }
            }
            if seen.len() > budget.max_vertices {
                return Err(Error::BudgetExceeded {
                    limit: budget.max_vertices,
                });
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BConnectivity {
    /// Every sampled pair is joined by a b-chain inside `B(x, e2)`.
    Connected { e2: Length },
    /// No b-chain inside `B(x, search_cap)` joins this pair.
    Counterexample { x: VertexId, y: VertexId },
}

/// Finds the least `E2 ≥ E1` such that every sampled pair `(x, y)` is joined
/// by a b-chain staying in `B(x, E2)`. Chains are searched inside
/// `B(x, search_cap)`.
///
/// For each pair this is a bottleneck search: the cost of a chain is the
/// largest distance from `x` among its points.
pub fn check_uniform_b_connected<S: Space + ?Sized>(
    space: &S,
    b: Length,
    e1: Length,
    samples: &[(VertexId, VertexId)],
    search_cap: Length,
    budget: Budget,
) -> Result<BConnectivity> {
    if samples.is_empty() {
        return Err(Error::invalid("at least one sample pair is required"));
    }
    if b == 0 || search_cap < e1 {
        return Err(Error::invalid("need b ≥ 1 and search_cap ≥ E1"));
    }
    let mut e2 = e1;
    for &(x, y) in samples {
        let from_x = distances_from(space, [x], search_cap, budget)?;
        match from_x.get(&y) {
            Some(d) if d <= e1 => {}
            _ => {
                return Err(Error::invalid(format!(
                    "sample pair {x}, {y} is not within E1 = {e1}"
                )))
            }
        }
        let mut best: FxHashMap<VertexId, Length> = FxHashMap::default();
        let mut heap = BinaryHeap::new();
        best.insert(x, 0);
        heap.push(Reverse((0, x)));
        let mut found = None;
        while let Some(Reverse((k, v))) = heap.pop() {
            if best.get(&v).is_some_and(|&bk| bk < k) {
                continue;
            }
            if v == y {
                found = Some(k);
                break;
            }
            let step = distances_from(space, [v], b, budget)?;
            for u in step.dist.keys() {
                let Some(du) = from_x.get(u) else { continue };
                let nk = k.max(du);
                if best.get(u).is_none_or(|&old| nk < old) {
                    best.insert(*u, nk);
                    heap.push(Reverse((nk, *u)));
                }
            }
        }
        match found {
            Some(k) => e2 = e2.max(k),
            None => return Ok(BConnectivity::Counterexample { x, y }),
        }
    }
    Ok(BConnectivity::Connected { e2 })
}

/// Largest `d(y, B(x, r))` over samples `(x, r, y)` with `y ∈ B(x, r + S)`:
/// the empirical constant of property (M).
pub fn check_property_m<S: Space + ?Sized>(
    space: &S,
    samples: &[(VertexId, Length, VertexId)],
    budget: Budget,
) -> Result<Length> {
    let unit = space.scale();
    let mut worst = 0;
    for &(x, r, y) in samples {
        let map = distances_from(space, [x], r + unit, budget)?;
        if map.get(&y).is_none() {
            return Err(Error::invalid(format!(
                "{y} is not in B({x}, r + 1) for r = {r}"
            )));
        }
        let inner = map.within(space, r);
        if inner.contains(&y) {
            continue;
        }
        let d = distance_to_set(space, y, &inner, r + unit, budget)?
            .expect("y lies within r + S of the center");
        worst = worst.max(d);
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoublingReport {
    /// Worst `μ(B(x, 2r)) / μ(B(x, r))` per sampled radius: the (DV)_loc constants.
    pub per_radius: Vec<(Length, Ratio<u64>)>,
    /// Maximum over all radii: the empirical (DV) constant.
    pub global: Ratio<u64>,
}

pub fn check_doubling<S: Space + ?Sized>(
    space: &S,
    samples: &[(VertexId, Length)],
    budget: Budget,
) -> Result<DoublingReport> {
    let ratios: Vec<(Length, Ratio<u64>)> = samples
        .par_iter()
        .map(|&(x, r)| {
            if r == 0 {
                return Err(Error::invalid("doubling radii must be positive"));
            }
            let map = distances_from(space, [x], 2 * r, budget)?;
            let small = map.measure_within(space, r);
            let big = map.measure_within(space, 2 * r);
            Ok((r, Ratio::new(big, small)))
        })
        .collect::<Result<_>>()?;
    let mut per: BTreeMap<Length, Ratio<u64>> = BTreeMap::new();
    for (r, q) in ratios {
        let e = per.entry(r).or_insert(q);
        if q > *e {
            *e = q;
        }
    }
    let global = per.values().copied().max().unwrap_or(Ratio::from_integer(1));
    Ok(DoublingReport {
        per_radius: per.into_iter().collect(),
        global,
    })
}

/// Exact ball volumes `V(r) = μ(B(x, r))` at the given ascending radii.
pub fn growth_curve<S: Space + ?Sized>(
    space: &S,
    x: VertexId,
    radii: &[Length],
    budget: Budget,
) -> Result<GrowthCurve> {
    if radii.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::invalid("radii must be sorted ascending"));
    }
    let cap = radii.last().copied().unwrap_or(0);
    let map = distances_from(space, [x], cap, budget)?;
    let mut by_dist: Vec<(Length, u64)> = map
        .dist
        .iter()
        .map(|(v, d)| (*d, space.measure(*v)))
        .collect();
    by_dist.sort_unstable();
    let mut points = Vec::with_capacity(radii.len());
    let mut acc = 0;
    let mut i = 0;
    for &r in radii {
        while i < by_dist.len() && by_dist[i].0 <= r {
            acc += by_dist[i].1;
            i += 1;
        }
        points.push((r, acc));
    }
    Ok(GrowthCurve {
        center: x,
        scale: space.scale(),
        points,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Connectivity {
    Connected,
    /// A nontrivial split whose parts are at distance `≥ gap`.
    Partition(SubsetRegion, SubsetRegion),
}

impl Connectivity {
    pub fn is_connected(&self) -> bool {
        matches!(self, Connectivity::Connected)
    }
}

/// Metric connectivity: `A` is connected iff it admits no partition into
/// nonempty parts at mutual distance `≥ gap`. Equivalently, the graph on `A`
/// joining vertices at distance `< gap` is connected.
pub fn is_connected<S: Space + ?Sized>(
    space: &S,
    set: &SubsetRegion,
    gap: Length,
    budget: Budget,
) -> Result<Connectivity> {
    if gap == 0 {
        return Err(Error::invalid("gap must be positive"));
    }
    let members = set.sorted();
    if members.len() <= 1 {
        return Ok(Connectivity::Connected);
    }
    let index: FxHashMap<VertexId, usize> =
        members.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let close: Vec<Vec<usize>> = members
        .par_iter()
        .map(|&v| {
            let map = distances_from(space, [v], gap - 1, budget)?;
            Ok(map.dist.keys().filter_map(|u| index.get(u).copied()).collect())
        })
        .collect::<Result<_>>()?;
    let mut parent: Vec<usize> = (0..members.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for (i, nbrs) in close.iter().enumerate() {
        for &j in nbrs {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let root = find(&mut parent, 0);
    let (first, rest): (Vec<_>, Vec<_>) =
        (0..members.len()).partition(|&i| find(&mut parent, i) == root);
    if rest.is_empty() {
        return Ok(Connectivity::Connected);
    }
    Ok(Connectivity::Partition(
        SubsetRegion::from_vertices(space, first.into_iter().map(|i| members[i])),
        SubsetRegion::from_vertices(space, rest.into_iter().map(|i| members[i])),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{ball, FiniteSpace, Lattice};

    const B: Budget = Budget::new(1_000_000);

    fn p(x: i64, y: i64) -> VertexId {
        VertexId::point(&[x, y])
    }

    #[test]
    fn b_chains_on_the_lattice() {
        let s = Lattice::new(2, 1);
        assert_eq!(b_distance(&s, p(0, 0), p(0, 0), 1, 10, B).unwrap(), Some(0));
        assert_eq!(b_distance(&s, p(0, 0), p(5, 0), 1, 100, B).unwrap(), Some(5));
        assert_eq!(b_distance(&s, p(0, 0), p(5, 0), 2, 100, B).unwrap(), Some(3));
        assert_eq!(b_distance(&s, p(0, 0), p(5, 0), 1, 4, B).unwrap(), None);
    }

    #[test]
    fn geodesic_lattice_is_uniformly_connected() {
        let s = Lattice::new(2, 1);
        let pairs = [(p(0, 0), p(3, 7)), (p(1, 1), p(-4, 2)), (p(0, 0), p(10, 0))];
        let res = check_uniform_b_connected(&s, 1, 10, &pairs, 20, B).unwrap();
        assert_eq!(res, BConnectivity::Connected { e2: 10 });
    }

    /// Two lines at height 0 and 5 whose only link is a single edge of length 5.
    fn two_lines() -> FiniteSpace {
        let mut vertices = Vec::new();
        for y in [0, 5] {
            for x in -30..=30 {
                vertices.push(p(x, y));
            }
        }
        let mut edges = Vec::new();
        for row in 0..2 {
            for i in 0..60 {
                edges.push((row * 61 + i, row * 61 + i + 1, 1));
            }
        }
        edges.push((30, 61 + 30, 5));
        FiniteSpace::from_edges(1, vertices, &edges, None).unwrap()
    }

    #[test]
    fn long_rung_breaks_b_connectivity() {
        let s = two_lines();
        let res = check_uniform_b_connected(&s, 1, 20, &[(p(0, 0), p(0, 5))], 40, B).unwrap();
        assert_eq!(
            res,
            BConnectivity::Counterexample {
                x: p(0, 0),
                y: p(0, 5)
            }
        );
    }

    #[test]
    fn property_m_on_the_lattice() {
        let s = Lattice::new(2, 1);
        let samples = [(p(0, 0), 3, p(4, 0)), (p(0, 0), 3, p(1, 1)), (p(2, 2), 5, p(2, 8))];
        assert_eq!(check_property_m(&s, &samples, B).unwrap(), 1);
        assert_eq!(check_property_m(&s, &[(p(0, 0), 3, p(1, 1))], B).unwrap(), 0);
        assert!(check_property_m(&s, &[(p(0, 0), 1, p(3, 0))], B).is_err());
    }

    #[test]
    fn doubling_constants() {
        let line = Lattice::new(1, 1);
        let rep = check_doubling(&line, &[(VertexId::point(&[0]), 1000)], B).unwrap();
        assert_eq!(rep.global, Ratio::new(4001, 2001));
        let z2 = Lattice::new(2, 1);
        let samples: Vec<_> = (1..=20).map(|r| (p(0, 0), r)).collect();
        let rep = check_doubling(&z2, &samples, B).unwrap();
        assert!(rep.global < Ratio::from_integer(4));
        let tiny = FiniteSpace::path(2, 1);
        let rep = check_doubling(&tiny, &[(tiny.vertex(0), 5)], B).unwrap();
        assert_eq!(rep.global, Ratio::from_integer(1));
    }

    #[test]
    fn growth_of_the_plane() {
        let s = Lattice::new(2, 1);
        let g = growth_curve(&s, p(0, 0), &[1, 2, 3], B).unwrap();
        assert_eq!(g.points, vec![(1, 5), (2, 13), (3, 25)]);
        assert_eq!(growth_curve(&s, p(0, 0), &[0], B).unwrap().points, vec![(0, 1)]);
        assert!(growth_curve(&s, p(0, 0), &[2, 1], B).is_err());
    }

    #[test]
    fn metric_connectivity() {
        let s = Lattice::new(2, 1);
        let b = ball(&s, p(0, 0), 4, B).unwrap();
        assert!(is_connected(&s, &b, 10, B).unwrap().is_connected());
        let far = SubsetRegion::counted([p(0, 0), p(100, 0)]);
        match is_connected(&s, &far, 10, B).unwrap() {
            Connectivity::Partition(a, b) => {
                assert_eq!(a.sorted(), vec![p(0, 0)]);
                assert_eq!(b.sorted(), vec![p(100, 0)]);
            }
            Connectivity::Connected => panic!("two far points are not connected"),
        }
        let near = SubsetRegion::counted([p(0, 0), p(9, 0)]);
        assert!(is_connected(&s, &near, 10, B).unwrap().is_connected());
    }
}
