use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use super::{Budget, DistanceMap, Length, Space, SubsetRegion, VertexId};
use crate::error::{Error, Result};

type Settled = (FxHashMap<VertexId, Length>, Option<(VertexId, Length)>);

/// Capped multi-source Dijkstra. `stop` is called on every settled vertex in
/// order of distance; returning `true` ends the search and reports that vertex.
fn dijkstra<S, F>(
    space: &S,
    sources: impl IntoIterator<Item = VertexId>,
    cap: Length,
    budget: Budget,
    mut stop: F,
) -> Result<Settled>
where
    S: Space + ?Sized,
    F: FnMut(VertexId, Length) -> bool,
{
    let mut dist: FxHashMap<VertexId, Length> = FxHashMap::default();
    let mut heap = BinaryHeap::new();
    for s in sources {
        if dist.insert(s, 0).is_none() {
            heap.push(Reverse((0, s)));
        }
    }
    if dist.len() > budget.max_vertices {
        return Err(Error::BudgetExceeded {
            limit: budget.max_vertices,
        });
    }
    let mut nbrs = Vec::with_capacity(8);
    while let Some(Reverse((d, v))) = heap.pop() {
        if dist.get(&v).is_some_and(|&best| best < d) {
            continue;
        }
        if stop(v, d) {
            return Ok((dist, Some((v, d))));
        }
        nbrs.clear();
        space.neighbors(v, &mut nbrs);
        for &(u, len) in &nbrs {
            let nd = d + len;
            if nd > cap {
                continue;
            }
            match dist.get_mut(&u) {
                Some(old) if *old <= nd => {}
                Some(old) => {
                    *old = nd;
                    heap.push(Reverse((nd, u)));
                }
                None => {
                    dist.insert(u, nd);
                    if dist.len() > budget.max_vertices {
                        return Err(Error::BudgetExceeded {
                            limit: budget.max_vertices,
                        });
                    }
                    heap.push(Reverse((nd, u)));
                }
            }
        }
    }
    Ok((dist, None))
}

/// Exact distances from `sources` for every vertex within `cap`.
pub fn distances_from<S: Space + ?Sized>(
    space: &S,
    sources: impl IntoIterator<Item = VertexId>,
    cap: Length,
    budget: Budget,
) -> Result<DistanceMap> {
    let (dist, _) = dijkstra(space, sources, cap, budget, |_, _| false)?;
    Ok(DistanceMap { cap, dist })
}

/// `d(x, y)` if it is at most `cap`, `None` otherwise.
pub fn distance<S: Space + ?Sized>(
    space: &S,
    x: VertexId,
    y: VertexId,
    cap: Length,
    budget: Budget,
) -> Result<Option<Length>> {
    let (_, hit) = dijkstra(space, [x], cap, budget, |v, _| v == y)?;
    Ok(hit.map(|(_, d)| d))
}

/// `d(x, A)` if it is at most `cap`.
pub fn distance_to_set<S: Space + ?Sized>(
    space: &S,
    x: VertexId,
    set: &SubsetRegion,
    cap: Length,
    budget: Budget,
) -> Result<Option<Length>> {
    let (_, hit) = dijkstra(space, [x], cap, budget, |v, _| set.contains(&v))?;
    Ok(hit.map(|(_, d)| d))
}

/// `d(x, Aᶜ)` if it is at most `cap`. The search stops at the first settled
/// vertex outside `A`, so the complement is never built.
pub fn distance_to_complement<S: Space + ?Sized>(
    space: &S,
    set: &SubsetRegion,
    x: VertexId,
    cap: Length,
    budget: Budget,
) -> Result<Option<Length>> {
    let (_, hit) = dijkstra(space, [x], cap, budget, |v, _| !set.contains(&v))?;
    Ok(hit.map(|(_, d)| d))
}

/// The closed ball `{y : d(x, y) ≤ r}`.
pub fn ball<S: Space + ?Sized>(
    space: &S,
    x: VertexId,
    r: Length,
    budget: Budget,
) -> Result<SubsetRegion> {
    Ok(distances_from(space, [x], r, budget)?.within(space, r))
}

/// `B(x, r2) \ B(x, r)`, i.e. `{y : r < d(x, y) ≤ r2}`.
pub fn annulus<S: Space + ?Sized>(
    space: &S,
    x: VertexId,
    r: Length,
    r2: Length,
    budget: Budget,
) -> Result<SubsetRegion> {
    if r >= r2 {
        return Err(Error::invalid(format!(
            "annulus needs r < r2, got {r} and {r2}"
        )));
    }
    let map = distances_from(space, [x], r2, budget)?;
    Ok(SubsetRegion::from_vertices(
        space,
        map.dist.iter().filter(|(_, d)| **d > r).map(|(v, _)| *v),
    ))
}

/// The half-open shell `{y : r ≤ d(x, y) < r + width}`.
///
/// With closed balls this is `B(x, r + width − 1) \ B(x, r − 1)`, the
/// integer form of an open-ball sphere `B°(x, r + width) \ B°(x, r)`.
pub fn sphere<S: Space + ?Sized>(
    space: &S,
    x: VertexId,
    r: Length,
    width: Length,
    budget: Budget,
) -> Result<SubsetRegion> {
    if width == 0 {
        return Ok(SubsetRegion::empty());
    }
    let map = distances_from(space, [x], r + width - 1, budget)?;
    Ok(SubsetRegion::from_vertices(
        space,
        map.dist.iter().filter(|(_, d)| **d >= r).map(|(v, _)| *v),
    ))
}

/// `A_h = {x : d(x, A) ≤ h}`.
pub fn neighborhood<S: Space + ?Sized>(
    space: &S,
    set: &SubsetRegion,
    h: Length,
    budget: Budget,
) -> Result<SubsetRegion> {
    if h == 0 {
        return Ok(set.clone());
    }
    let map = distances_from(space, set.iter().copied(), h, budget)?;
    Ok(map.within(space, h))
}

/// The h-boundary `∂_h A = A_h ∩ (Aᶜ)_h`.
///
/// Vertices of `A_h \ A` are in the boundary outright. For each vertex of `A`
/// a capped search looks for the first exit from `A` within `h`.
pub fn h_boundary<S: Space + ?Sized>(
    space: &S,
    set: &SubsetRegion,
    h: Length,
    budget: Budget,
) -> Result<SubsetRegion> {
    if set.is_empty() {
        return Ok(SubsetRegion::empty());
    }
    let thick = neighborhood(space, set, h, budget)?;
    let mut members: Vec<VertexId> = set.iter().copied().collect();
    members.sort_unstable();
    let inner: Vec<Option<VertexId>> = members
        .par_iter()
        .map(|&x| {
            distance_to_complement(space, set, x, h, budget).map(|d| d.map(|_| x))
        })
        .collect::<Result<_>>()?;
    let outer = thick.iter().filter(|v| !set.contains(v)).copied();
    Ok(SubsetRegion::from_vertices(
        space,
        outer.chain(inner.into_iter().flatten()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{FiniteSpace, Lattice};

    fn z2() -> Lattice {
        Lattice::new(2, 1)
    }

    fn p(x: i64, y: i64) -> VertexId {
        VertexId::point(&[x, y])
    }

    fn square(lo: i64, side: i64) -> SubsetRegion {
        SubsetRegion::counted(
            (lo..lo + side).flat_map(|x| (lo..lo + side).map(move |y| p(x, y))),
        )
    }

    const B: Budget = Budget::new(1_000_000);

    #[test]
    fn lattice_distances() {
        let s = z2();
        assert_eq!(distance(&s, p(0, 0), p(0, 0), 5, B).unwrap(), Some(0));
        assert_eq!(distance(&s, p(0, 0), p(3, 4), 100, B).unwrap(), Some(7));
        assert_eq!(distance(&s, p(0, 0), p(3, 4), 6, B).unwrap(), None);
    }

    #[test]
    fn lattice_balls_and_annuli() {
        let s = z2();
        let b1 = ball(&s, p(0, 0), 1, B).unwrap();
        assert_eq!((b1.len(), b1.measure()), (5, 5));
        assert_eq!(ball(&s, p(0, 0), 2, B).unwrap().len(), 13);
        assert_eq!(annulus(&s, p(0, 0), 0, 1, B).unwrap().len(), 4);
        assert_eq!(annulus(&s, p(0, 0), 1, 2, B).unwrap().len(), 8);
        assert!(annulus(&s, p(0, 0), 2, 2, B).is_err());
    }

    #[test]
    fn annulus_between_equal_balls_is_empty() {
        let s = FiniteSpace::path(3, 1);
        let x = s.vertex(0);
        let a = annulus(&s, x, 2, 5, B).unwrap();
        assert!(a.is_empty());
    }

    #[test]
    fn neighborhoods() {
        let s = z2();
        let a = square(0, 2);
        assert_eq!(neighborhood(&s, &a, 0, B).unwrap(), a);
        let single = SubsetRegion::counted([p(0, 0)]);
        assert_eq!(neighborhood(&s, &single, 1, B).unwrap().len(), 5);
        assert_eq!(neighborhood(&s, &a, 1, B).unwrap().len(), 12);
    }

    #[test]
    fn boundaries_on_the_lattice() {
        let s = z2();
        let single = SubsetRegion::counted([p(0, 0)]);
        assert_eq!(h_boundary(&s, &single, 1, B).unwrap().len(), 5);
        let sq = square(0, 3);
        assert_eq!(h_boundary(&s, &sq, 1, B).unwrap().len(), 20);
    }

    #[test]
    fn whole_finite_space_has_empty_boundary() {
        let s = FiniteSpace::cycle(6, 1);
        let all = SubsetRegion::from_vertices(&s, s.finite_vertices().unwrap().iter().copied());
        assert!(h_boundary(&s, &all, 3, B).unwrap().is_empty());
    }

    #[test]
    fn spheres_are_half_open_shells() {
        let s = z2();
        // distances exactly 2
        assert_eq!(sphere(&s, p(0, 0), 2, 1, B).unwrap().len(), 8);
        // distances 1 and 2
        assert_eq!(sphere(&s, p(0, 0), 1, 2, B).unwrap().len(), 12);
    }

    #[test]
    fn budget_is_enforced() {
        let s = z2();
        let err = ball(&s, p(0, 0), 50, Budget::new(100)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { limit: 100 }));
    }
}
