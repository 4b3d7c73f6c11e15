use super::carved::{find_by_axis, Carving, CarvedLattice};
use super::LatticeFamilyParams;
use crate::error::{Error, Result};
use crate::space::{Budget, SubsetRegion, VertexId};

/// Pairs of lattice balls `C_n = B(x_n, n) ∪ B(x'_n, n)` with
/// `x_n = (2^{n+1}, n - ⌈log₂ n⌉, 0, …)` and `x'_n` its mirror image across
/// the first axis. Each `C_n` meets its complement only along that axis.
#[derive(Clone, Debug)]
pub struct Constricted {
    d: usize,
    ns: Vec<u32>,
    ranges: Vec<(i64, i64)>,
}

pub type ConstrictedSpace = CarvedLattice<Constricted>;

pub(crate) fn ceil_log2(n: u32) -> u32 {
    32 - (n.max(1) - 1).leading_zeros()
}

fn on_axis(x: &VertexId) -> bool {
    x.coords()[1..].iter().all(|c| *c == 0)
}

impl Constricted {
    pub fn new(params: &LatticeFamilyParams, budget: Budget) -> Result<Self> {
        let ns = params.sorted_ns()?;
        if *ns.last().expect("nonempty") > 60 {
            return Err(Error::invalid("constricted balls need n ≤ 60"));
        }
        let c = Constricted {
            d: params.d,
            ranges: ns
                .iter()
                .map(|&n| {
                    let c = 1i64 << (n + 1);
                    (c - n as i64, c + n as i64)
                })
                .collect(),
            ns,
        };
        let size: u64 = c.ns.iter().map(|&n| 2 * c.ball_volume(n)).sum();
        if size > budget.max_vertices as u64 {
            return Err(Error::BudgetExceeded {
                limit: budget.max_vertices,
            });
        }
        Ok(c)
    }

    /// Lattice points of an `L1` ball of radius `n` in dimension `d`.
    fn ball_volume(&self, n: u32) -> u64 {
        // |B_d(n)| = sum_k 2^k C(d,k) C(n,k)
        let mut total = 0u64;
        for k in 0..=self.d.min(n as usize) {
            let mut c = 1u64;
            for j in 0..k as u64 {
                c = c * (self.d as u64 - j) / (j + 1);
            }
            let mut m = 1u64;
            for j in 0..k as u64 {
                m = m * (n as u64 - j) / (j + 1);
            }
            total += (1 << k) * c * m;
        }
        total
    }

    pub fn ns(&self) -> &[u32] {
        &self.ns
    }

    /// The centers `x_n` and `x'_n`.
    pub fn centers(&self, n: u32) -> (VertexId, VertexId) {
        let off = n as i64 - ceil_log2(n) as i64;
        let mut a = vec![0i64; self.d];
        a[0] = 1 << (n + 1);
        a[1] = off;
        let top = VertexId::point(&a);
        a[1] = -off;
        (top, VertexId::point(&a))
    }

    /// The two points of `C_n` farthest from the axis.
    pub fn poles(&self, n: u32) -> (VertexId, VertexId) {
        let (a, b) = self.centers(n);
        (a.shifted(1, n as i64), b.shifted(1, -(n as i64)))
    }

    fn index(&self, n: u32) -> Result<usize> {
        self.ns
            .iter()
            .position(|m| *m == n)
            .ok_or_else(|| Error::invalid(format!("n = {n} was not generated")))
    }

    fn member(&self, n: u32, x: &VertexId) -> bool {
        let (a, b) = self.centers(n);
        x.l1(&a) <= n as u64 || x.l1(&b) <= n as u64
    }

    pub fn set(&self, n: u32) -> Result<SubsetRegion> {
        let i = self.index(n)?;
        let (lo, hi) = self.ranges[i];
        let reach = 2 * n as i64;
        let mut pts = Vec::new();
        let mut cur = vec![0i64; self.d];
        cur[0] = lo;
        cur[1..].fill(-reach);
        'outer: loop {
            let v = VertexId::point(&cur);
            if self.member(n, &v) {
                pts.push(v);
            }
            let mut axis = self.d;
            loop {
                if axis == 0 {
                    break 'outer;
                }
                axis -= 1;
                let top = if axis == 0 { hi } else { reach };
                if cur[axis] < top {
                    cur[axis] += 1;
                    break;
                }
                cur[axis] = if axis == 0 { lo } else { -reach };
            }
        }
        Ok(SubsetRegion::counted(pts))
    }

    /// Points of `C_n` on the hyperplane `x_2 = 0`.
    pub fn equator(&self, n: u32) -> Result<Vec<VertexId>> {
        let mut v: Vec<VertexId> = self.set(n)?.iter().filter(|x| x.coords()[1] == 0).copied().collect();
        v.sort();
        Ok(v)
    }
}

impl Carving for Constricted {
    fn dim(&self) -> usize {
        self.d
    }

    fn region_of(&self, x: &VertexId) -> Option<usize> {
        if x.dim() != self.d {
            return None;
        }
        let i = find_by_axis(&self.ranges, x.coords()[0])?;
        self.member(self.ns[i], x).then_some(i)
    }

    fn keeps(&self, _: usize, inside: &VertexId, outside: &VertexId) -> bool {
        on_axis(inside) && on_axis(outside)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shape_of_c8() {
        let params = LatticeFamilyParams {
            d: 2,
            n_list: vec![8],
        };
        let c = Constricted::new(&params, Budget::default()).unwrap();
        assert_eq!(ceil_log2(8), 3);
        assert_eq!(ceil_log2(9), 4);
        assert_eq!(c.centers(8).0, VertexId::point(&[512, 5]));
        // two radius-8 diamonds of 145 points overlapping in a radius-3
        // diamond's worth of rows: 2·145 - overlap
        let set = c.set(8).unwrap();
        let overlap = (-3i64..=3).map(|y| 2 * (3 - y.abs()) + 1).sum::<i64>() as usize;
        assert_eq!(set.len(), 2 * 145 - overlap);
        assert_eq!(c.equator(8).unwrap().len(), 7);
        let s = ConstrictedSpace::new(c);
        let e = VertexId::point(&[515, 0]);
        assert_eq!(s.crossing_edges(&e), vec![VertexId::point(&[516, 0])]);
        assert!(s.crossing_edges(&VertexId::point(&[512, 13])).is_empty());
    }
}
