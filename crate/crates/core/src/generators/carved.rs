use std::ops::Deref;

use crate::space::{Length, Space, VertexId};

/// A lattice surgery: finitely many disjoint carved regions, each cut off
/// from its complement except through the edges it keeps.
pub trait Carving: Send + Sync {
    fn dim(&self) -> usize;

    /// Index of the carved region containing `x`, if any.
    fn region_of(&self, x: &VertexId) -> Option<usize>;

    /// Whether the edge leaving `region` from `inside` to `outside` survives.
    fn keeps(&self, region: usize, inside: &VertexId, outside: &VertexId) -> bool;
}

/// `Z^d` with unit edges minus the crossing edges a [`Carving`] removes.
#[derive(Clone, Debug)]
pub struct CarvedLattice<C> {
    carving: C,
}

impl<C: Carving> CarvedLattice<C> {
    pub fn new(carving: C) -> Self {
        CarvedLattice { carving }
    }

    pub fn carving(&self) -> &C {
        &self.carving
    }

    /// Whether the lattice edge `{u, v}` is present.
    pub fn edge_present(&self, u: &VertexId, v: &VertexId) -> bool {
        let ru = self.carving.region_of(u);
        let rv = self.carving.region_of(v);
        if ru == rv {
            return true;
        }
        ru.is_none_or(|r| self.carving.keeps(r, u, v))
            && rv.is_none_or(|r| self.carving.keeps(r, v, u))
    }

    /// Surviving edges from `inside` to points outside its region.
    pub fn crossing_edges(&self, inside: &VertexId) -> Vec<VertexId> {
        let own = self.carving.region_of(inside);
        let mut out = Vec::new();
        for axis in 0..self.carving.dim() {
            for delta in [-1, 1] {
                let u = inside.shifted(axis, delta);
                if self.carving.region_of(&u) != own && self.edge_present(inside, &u) {
                    out.push(u);
                }
            }
        }
        out
    }
}

impl<C> Deref for CarvedLattice<C> {
    type Target = C;

    fn deref(&self) -> &C {
        &self.carving
    }
}

impl<C: Carving> Space for CarvedLattice<C> {
    fn scale(&self) -> Length {
        1
    }

    fn contains(&self, v: VertexId) -> bool {
        v.dim() == self.carving.dim() && v.tag() == 0
    }

    fn neighbors(&self, v: VertexId, out: &mut Vec<(VertexId, Length)>) {
        for axis in 0..self.carving.dim() {
            for delta in [-1, 1] {
                let u = v.shifted(axis, delta);
                if self.edge_present(&v, &u) {
                    out.push((u, 1));
                }
            }
        }
    }
}

/// An axis-aligned integer box `lo ≤ x ≤ hi` (inclusive).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeBox {
    pub lo: [i64; 4],
    pub hi: [i64; 4],
    pub dim: usize,
}

impl LatticeBox {
    pub fn contains(&self, x: &VertexId) -> bool {
        x.coords()
            .iter()
            .enumerate()
            .all(|(i, c)| self.lo[i] <= *c && *c <= self.hi[i])
    }

    pub fn volume(&self) -> u64 {
        (0..self.dim)
            .map(|i| (self.hi[i] - self.lo[i] + 1) as u64)
            .product()
    }

    /// All points in lexicographic order.
    pub fn points(&self) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.volume() as usize);
        let mut cur: Vec<i64> = self.lo[..self.dim].to_vec();
        loop {
            out.push(VertexId::point(&cur));
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < self.hi[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = self.lo[i];
            }
        }
    }
}

/// Position of the region whose `e1`-range `[lo, hi]` contains `x1`, for
/// ranges sorted and disjoint.
pub(crate) fn find_by_axis(ranges: &[(i64, i64)], x1: i64) -> Option<usize> {
    let i = ranges.partition_point(|r| r.1 < x1);
    (i < ranges.len() && ranges[i].0 <= x1).then_some(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Square;

    impl Carving for Square {
        fn dim(&self) -> usize {
            2
        }
        fn region_of(&self, x: &VertexId) -> Option<usize> {
            let b = LatticeBox {
                lo: [0, 0, 0, 0],
                hi: [2, 2, 0, 0],
                dim: 2,
            };
            b.contains(x).then_some(0)
        }
        fn keeps(&self, _: usize, inside: &VertexId, outside: &VertexId) -> bool {
            inside.coords() == [2, 1] && outside.coords() == [3, 1]
        }
    }

    #[test]
    fn carving_keeps_only_chosen_edges() {
        let s = CarvedLattice::new(Square);
        let p = |x, y| VertexId::point(&[x, y]);
        assert!(s.edge_present(&p(2, 1), &p(3, 1)));
        assert!(!s.edge_present(&p(2, 0), &p(3, 0)));
        assert!(s.edge_present(&p(0, 0), &p(1, 0)));
        assert!(s.edge_present(&p(5, 5), &p(5, 6)));
        assert_eq!(s.crossing_edges(&p(2, 1)), vec![p(3, 1)]);
        let mut out = Vec::new();
        s.neighbors(p(3, 0), &mut out);
        assert_eq!(out.len(), 3);
    }

    #[test]
    fn boxes_and_axis_lookup() {
        let b = LatticeBox {
            lo: [0, -1, 0, 0],
            hi: [1, 1, 0, 0],
            dim: 2,
        };
        assert_eq!(b.volume(), 6);
        assert_eq!(b.points().len(), 6);
        let ranges = [(0, 3), (10, 12)];
        assert_eq!(find_by_axis(&ranges, 2), Some(0));
        assert_eq!(find_by_axis(&ranges, 11), Some(1));
        assert_eq!(find_by_axis(&ranges, 5), None);
        assert_eq!(find_by_axis(&ranges, 13), None);
    }
}
