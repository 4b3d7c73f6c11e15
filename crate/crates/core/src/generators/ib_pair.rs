use super::carved::{find_by_axis, Carving, CarvedLattice};
use super::LatticeFamilyParams;
use crate::error::{Error, Result};
use crate::space::{Budget, Length, Space, SubsetRegion, VertexId};

/// Transverse dilation factor between the two spaces of the pair.
pub const RATIO: i64 = 4;

/// `L1` balls `A_n` of radius `n` centered on the first axis, consecutive
/// balls `2^n` apart, cut off from their complement except along the axis.
#[derive(Clone, Debug)]
pub struct IbBalls {
    d: usize,
    ns: Vec<u32>,
    centers: Vec<i64>,
    ranges: Vec<(i64, i64)>,
}

fn on_axis(x: &VertexId) -> bool {
    x.coords()[1..].iter().all(|c| *c == 0)
}

impl IbBalls {
    fn new(params: &LatticeFamilyParams) -> Result<Self> {
        let ns = params.sorted_ns()?;
        let top = *ns.last().expect("nonempty");
        if top > 48 {
            return Err(Error::invalid("ball pair needs n ≤ 48"));
        }
        let mut centers = Vec::new();
        let mut ranges = Vec::new();
        let mut c = 0i64;
        for n in 1..=top {
            if n > 1 {
                c += (n as i64 - 1) + (1i64 << (n - 1)) + n as i64;
            }
            if ns.contains(&n) {
                centers.push(c);
                ranges.push((c - n as i64, c + n as i64));
            }
        }
        Ok(IbBalls {
            d: params.d,
            ns,
            centers,
            ranges,
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

    pub fn center(&self, n: u32) -> Result<VertexId> {
        let mut c = vec![0i64; self.d];
        c[0] = self.centers[self.index(n)?];
        Ok(VertexId::point(&c))
    }

    /// Points of `A_n`.
    pub fn set(&self, n: u32) -> Result<SubsetRegion> {
        let center = self.center(n)?;
        let n = n as i64;
        let mut pts = Vec::new();
        let mut off = vec![-n; self.d];
        loop {
            if off.iter().map(|c| c.abs()).sum::<i64>() <= n {
                let mut v = center;
                for (i, o) in off.iter().enumerate() {
                    v = v.shifted(i, *o);
                }
                pts.push(v);
            }
            let mut i = 0;
            while i < self.d {
                if off[i] < n {
                    off[i] += 1;
                    break;
                }
                off[i] = -n;
                i += 1;
            }
            if i == self.d {
                break;
            }
        }
        Ok(SubsetRegion::counted(pts))
    }
}

impl Carving for IbBalls {
    fn dim(&self) -> usize {
        self.d
    }

    fn region_of(&self, x: &VertexId) -> Option<usize> {
        if x.dim() != self.d {
            return None;
        }
        let i = find_by_axis(&self.ranges, x.coords()[0])?;
        let mut c = vec![0i64; self.d];
        c[0] = self.centers[i];
        (x.l1(&VertexId::point(&c)) <= self.ns[i] as u64).then_some(i)
    }

    fn keeps(&self, _: usize, inside: &VertexId, outside: &VertexId) -> bool {
        on_axis(inside) && on_axis(outside)
    }
}

/// Where a vertex of the dilated space sits relative to the original graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preimage {
    /// The image of a vertex.
    Vertex(VertexId),
    /// Interior point `step ∈ 1..RATIO` of the subdivided edge from `base`
    /// to `base + e_axis`.
    Interior { base: VertexId, axis: usize, step: i64 },
}

/// The dilated copy `X'`: every edge orthogonal to the first axis becomes a
/// path of [`RATIO`] unit edges, realized inside `Z^d` via `p ↦ (p_1, 4p_2, …)`.
#[derive(Clone, Debug)]
pub struct Dilated {
    base: CarvedLattice<IbBalls>,
}

impl Dilated {
    pub fn base(&self) -> &CarvedLattice<IbBalls> {
        &self.base
    }

    pub fn classify(&self, q: &VertexId) -> Option<Preimage> {
        let d = self.base.dim();
        if q.dim() != d || q.tag() != 0 {
            return None;
        }
        let c = q.coords();
        let off: Vec<usize> = (1..d).filter(|i| c[*i].rem_euclid(RATIO) != 0).collect();
        let mut p: Vec<i64> = c.to_vec();
        match off.as_slice() {
            [] => {
                for x in &mut p[1..] {
                    *x /= RATIO;
                }
                Some(Preimage::Vertex(VertexId::point(&p)))
            }
            [axis] => {
                let step = c[*axis].rem_euclid(RATIO);
                for (i, x) in p.iter_mut().enumerate().skip(1) {
                    *x = if i == *axis {
                        (*x - step) / RATIO
                    } else {
                        *x / RATIO
                    };
                }
                let base = VertexId::point(&p);
                self.base
                    .edge_present(&base, &base.shifted(*axis, 1))
                    .then_some(Preimage::Interior {
                        base,
                        axis: *axis,
                        step,
                    })
            }
            _ => None,
        }
    }
}

impl Space for Dilated {
    fn scale(&self) -> Length {
        1
    }

    fn contains(&self, v: VertexId) -> bool {
        self.classify(&v).is_some()
    }

    fn neighbors(&self, q: VertexId, out: &mut Vec<(VertexId, Length)>) {
        match self.classify(&q) {
            Some(Preimage::Vertex(p)) => {
                for axis in 0..self.base.dim() {
                    for delta in [-1, 1] {
                        if self.base.edge_present(&p, &p.shifted(axis, delta)) {
                            out.push((q.shifted(axis, delta), 1));
                        }
                    }
                }
            }
            Some(Preimage::Interior { axis, .. }) => {
                out.push((q.shifted(axis, -1), 1));
                out.push((q.shifted(axis, 1), 1));
            }
            None => {}
        }
    }
}

/// The pair `(X, X')` with the dilation map between them.
#[derive(Clone, Debug)]
pub struct IbPair {
    pub x: CarvedLattice<IbBalls>,
    pub x_prime: Dilated,
}

impl IbPair {
    pub fn new(params: &LatticeFamilyParams, budget: Budget) -> Result<Self> {
        let balls = IbBalls::new(params)?;
        let size: u64 = balls.ns.iter().map(|n| (2 * *n as u64 + 1).pow(params.d as u32)).sum();
        if size * RATIO as u64 > budget.max_vertices as u64 {
            return Err(Error::BudgetExceeded {
                limit: budget.max_vertices,
            });
        }
        let x = CarvedLattice::new(balls);
        Ok(IbPair {
            x_prime: Dilated { base: x.clone() },
            x,
        })
    }

    pub fn forward(&self, p: VertexId) -> VertexId {
        let mut q = p;
        for i in 1..p.dim() {
            q = q.shifted(i, (RATIO - 1) * p.coords()[i]);
        }
        q
    }

    /// The nearest preimage of a vertex of `X'`, ties broken towards the
    /// lexicographically smaller vertex.
    pub fn nearest_preimage(&self, q: VertexId) -> Option<VertexId> {
        match self.x_prime.classify(&q)? {
            Preimage::Vertex(p) => Some(p),
            Preimage::Interior { base, axis, step } => Some(if 2 * step <= RATIO {
                base
            } else {
                base.shifted(axis, 1)
            }),
        }
    }

    /// `A'_n`: the images of `A_n` and the subdivision points of its edges.
    pub fn image_set(&self, n: u32) -> Result<SubsetRegion> {
        let a = self.x.set(n)?;
        let mut pts: Vec<VertexId> = a.iter().map(|p| self.forward(*p)).collect();
        for p in a.iter() {
            for axis in 1..p.dim() {
                let next = p.shifted(axis, 1);
                if a.contains(&next) {
                    let q = self.forward(*p);
                    pts.extend((1..RATIO).map(|s| q.shifted(axis, s)));
                }
            }
        }
        Ok(SubsetRegion::counted(pts))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{distance, h_boundary};

    fn pair() -> IbPair {
        let params = LatticeFamilyParams {
            d: 2,
            n_list: (1..=6).collect(),
        };
        IbPair::new(&params, Budget::default()).unwrap()
    }

    #[test]
    fn balls_have_four_boundary_points() {
        let p = pair();
        for n in 2..=6 {
            let a = p.x.set(n).unwrap();
            assert_eq!(a.len() as u64, 2 * (n as u64).pow(2) + 2 * n as u64 + 1);
            let b = h_boundary(&p.x, &a, 1, Budget::default()).unwrap();
            assert_eq!(b.measure(), 4);
        }
    }

    #[test]
    fn dilation_preserves_axis_and_stretches_transverse() {
        let p = pair();
        let b = Budget::default();
        let u = VertexId::point(&[20, 1]);
        let v = VertexId::point(&[20, -1]);
        let dx = distance(&p.x, u, v, 100, b).unwrap();
        let dy = distance(&p.x_prime, p.forward(u), p.forward(v), 100, b).unwrap();
        assert_eq!((dx, dy), (Some(2), Some(8)));
        let q = VertexId::point(&[3, 6]);
        assert_eq!(p.nearest_preimage(q), Some(VertexId::point(&[3, 1])));
        assert_eq!(p.nearest_preimage(VertexId::point(&[3, 7])), Some(VertexId::point(&[3, 2])));
        assert_eq!(p.nearest_preimage(VertexId::point(&[3, 5])), Some(VertexId::point(&[3, 1])));
        // A_1 is cut off from (0, 2) - (0, 1) is removed, so (0, 6) is absent
        assert!(p.nearest_preimage(VertexId::point(&[0, 6])).is_none());
    }

    #[test]
    fn image_boundary_is_small() {
        let p = pair();
        let a = p.image_set(5).unwrap();
        assert_eq!(a.len(), 61 + 3 * 50);
        let b = h_boundary(&p.x_prime, &a, 1, Budget::default()).unwrap();
        assert_eq!(b.measure(), 4);
    }
}
