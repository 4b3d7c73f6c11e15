use rustc_hash::FxHashSet;

use super::carved::{find_by_axis, Carving, CarvedLattice, LatticeBox};
use super::LatticeFamilyParams;
use crate::error::{Error, Result};
use crate::space::{Budget, SubsetRegion, VertexId};

/// Integer square root.
pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Boxes `A_n = I_n × [-⌊n/2⌋, -⌊n/2⌋ + n - 1]^{d-1}` along the first axis,
/// where `I_n` has `⌊√n⌋` points and consecutive intervals are `2^n` apart.
/// Each face of `A_n` is tiled by cells of side `⌊√n⌋` and only the edge
/// leaving the center of each cell survives.
#[derive(Clone, Debug)]
pub struct Perforated {
    d: usize,
    ns: Vec<u32>,
    boxes: Vec<LatticeBox>,
    ranges: Vec<(i64, i64)>,
    /// Surviving crossing edges `(inside, outside)` of each box.
    doors: Vec<FxHashSet<(VertexId, VertexId)>>,
}

pub type PerforatedSpace = CarvedLattice<Perforated>;

/// Floor midpoints of the cells tiling `[lo, hi]` with the given side, the
/// remainder merged into the last cell.
fn cell_centers(lo: i64, hi: i64, side: i64) -> Vec<i64> {
    let cells = ((hi - lo + 1) / side).max(1);
    (0..cells)
        .map(|t| {
            let a = lo + t * side;
            let b = if t == cells - 1 { hi } else { a + side - 1 };
            a + (b - a).div_euclid(2)
        })
        .collect()
}

impl Perforated {
    pub fn new(params: &LatticeFamilyParams, budget: Budget) -> Result<Self> {
        let d = params.d;
        let ns = params.sorted_ns()?;
        let top = *ns.last().expect("nonempty");
        if top > 48 {
            return Err(Error::invalid("perforated boxes need n ≤ 48"));
        }
        let mut total = 0u64;
        let mut start = 0i64;
        let mut boxes = Vec::new();
        for n in 1..=top {
            let width = isqrt(n as u64) as i64;
            if n > 1 {
                start += 1i64 << n;
            }
            let mut b = LatticeBox {
                lo: [0; 4],
                hi: [0; 4],
                dim: d,
            };
            b.lo[0] = start;
            b.hi[0] = start + width - 1;
            for i in 1..d {
                b.lo[i] = -(n as i64 / 2);
                b.hi[i] = b.lo[i] + n as i64 - 1;
            }
            start = b.hi[0];
            if ns.contains(&n) {
                total += b.volume();
                boxes.push(b);
            }
        }
        if total > budget.max_vertices as u64 {
            return Err(Error::BudgetExceeded {
                limit: budget.max_vertices,
            });
        }
        let doors = boxes
            .iter()
            .zip(&ns)
            .map(|(b, &n)| doors_of(b, isqrt(n as u64) as i64))
            .collect();
        let ranges = boxes.iter().map(|b| (b.lo[0], b.hi[0])).collect();
        Ok(Perforated {
            d,
            ns,
            boxes,
            ranges,
            doors,
        })
    }

    pub fn ns(&self) -> &[u32] {
        &self.ns
    }

    fn index(&self, n: u32) -> Result<usize> {
        self.ns
            .iter()
            .position(|m| *m == n)
            .ok_or_else(|| Error::invalid(format!("n = {n} was not generated")))
    }

    pub fn block(&self, n: u32) -> Result<&LatticeBox> {
        Ok(&self.boxes[self.index(n)?])
    }

    pub fn set(&self, n: u32) -> Result<SubsetRegion> {
        Ok(SubsetRegion::counted(self.block(n)?.points()))
    }

    /// `|∂A_n|` at `h = 1`: the endpoints of the surviving crossing edges.
    pub fn boundary_count(&self, n: u32) -> Result<u64> {
        let doors = &self.doors[self.index(n)?];
        let ends: FxHashSet<VertexId> = doors.iter().flat_map(|(a, b)| [*a, *b]).collect();
        Ok(ends.len() as u64)
    }

    pub fn doors(&self, n: u32) -> Result<Vec<(VertexId, VertexId)>> {
        let mut v: Vec<_> = self.doors[self.index(n)?].iter().copied().collect();
        v.sort();
        Ok(v)
    }
}

fn doors_of(b: &LatticeBox, side: i64) -> FxHashSet<(VertexId, VertexId)> {
    let d = b.dim;
    let mut doors = FxHashSet::default();
    for axis in 0..d {
        let others: Vec<usize> = (0..d).filter(|i| *i != axis).collect();
        let centers: Vec<Vec<i64>> = others
            .iter()
            .map(|&i| cell_centers(b.lo[i], b.hi[i], side))
            .collect();
        let mut choice = vec![0usize; others.len()];
        loop {
            for (wall, delta) in [(b.lo[axis], -1), (b.hi[axis], 1)] {
                let mut c = vec![0i64; d];
                c[axis] = wall;
                for (slot, &i) in others.iter().enumerate() {
                    c[i] = centers[slot][choice[slot]];
                }
                let inside = VertexId::point(&c);
                doors.insert((inside, inside.shifted(axis, delta)));
            }
            let mut slot = 0;
            while slot < choice.len() {
                choice[slot] += 1;
                if choice[slot] < centers[slot].len() {
                    break;
                }
                choice[slot] = 0;
                slot += 1;
            }
            if slot == choice.len() {
                break;
            }
        }
    }
    doors
}

impl Carving for Perforated {
    fn dim(&self) -> usize {
        self.d
    }

    fn region_of(&self, x: &VertexId) -> Option<usize> {
        if x.dim() != self.d {
            return None;
        }
        let i = find_by_axis(&self.ranges, x.coords()[0])?;
        self.boxes[i].contains(x).then_some(i)
    }

    fn keeps(&self, region: usize, inside: &VertexId, outside: &VertexId) -> bool {
        self.doors[region].contains(&(*inside, *outside))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{h_boundary, Budget};

    #[test]
    fn tiling_centers() {
        assert_eq!(cell_centers(0, 8, 3), vec![1, 4, 7]);
        assert_eq!(cell_centers(0, 9, 3), vec![1, 4, 7]);
        assert_eq!(cell_centers(-2, 1, 2), vec![-2, 0]);
        assert_eq!(cell_centers(0, 1, 5), vec![0]);
    }

    #[test]
    fn plane_counts() {
        let params = LatticeFamilyParams {
            d: 2,
            n_list: vec![4, 9, 16, 25],
        };
        let s = PerforatedSpace::new(Perforated::new(&params, Budget::default()).unwrap());
        let vols: Vec<u64> = [4, 9, 16, 25].iter().map(|n| s.block(*n).unwrap().volume()).collect();
        assert_eq!(vols, vec![8, 27, 64, 125]);
        let bd: Vec<u64> = [4, 9, 16, 25].iter().map(|n| s.boundary_count(*n).unwrap()).collect();
        // two doors of A_4 share the corner vertex of the lower-left cell
        assert_eq!(bd, vec![11, 16, 20, 24]);
        let a9 = s.set(9).unwrap();
        let measured = h_boundary(&s, &a9, 1, Budget::default()).unwrap();
        assert_eq!(measured.measure(), 16);
    }
}
