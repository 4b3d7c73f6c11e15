//! The plane `Z^2` with lattice edges of length one true unit, except for the
//! edges of a sequence of dyadic trees `A_k` rooted at `a_k = (4^k, 0)`,
//! which are 100 times shorter.
//!
//! Tree points are `a_k + 2^k ε_0 + 2^{k-1} ε_1 + … + r ε`, a non-backtracking
//! sequence of unit steps with halving lengths, truncated anywhere. Lengths
//! are in scaled units with `S = 100`, so tree edges have length 1.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Budget, Length, Space, SubsetRegion, VertexId};

pub const SCALE: Length = 100;

/// Largest supported tree index.
pub const K_MAX: u32 = 7;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VonKochParams {
    pub k_max: u32,
}

/// A unit step in the plane.
pub type Step = (i64, i64);

const STEPS: [Step; 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// The position of a point of `A_k` relative to its root.
///
/// `eps[j]` for `j < full` are complete segments of length `2^{k-j}`; when
/// `r > 0` the last entry of `eps` is a partial segment of length `r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AkDecomposition {
    pub k: u32,
    pub eps: Vec<Step>,
    pub r: u64,
}

impl AkDecomposition {
    /// Number of complete segments.
    pub fn full(&self) -> usize {
        self.eps.len() - usize::from(self.r > 0)
    }

    /// The index `i` of the last complete segment, absent at the root and on
    /// the first segment.
    pub fn i(&self) -> Option<usize> {
        self.full().checked_sub(1)
    }

    /// Intrinsic tree distance to the root, in scaled units.
    pub fn depth(&self) -> Length {
        let full: u64 = (0..self.full()).map(|j| 1u64 << (self.k as usize - j)).sum();
        full + self.r
    }

    pub fn recompose(&self) -> VertexId {
        let (mut x, mut y) = (1i64 << (2 * self.k), 0i64);
        for (j, e) in self.eps.iter().enumerate() {
            let len = if j < self.full() {
                1i64 << (self.k as usize - j)
            } else {
                self.r as i64
            };
            x += len * e.0;
            y += len * e.1;
        }
        VertexId::point(&[x, y])
    }
}

/// The root `a_k = (4^k, 0)`.
pub fn root(k: u32) -> VertexId {
    VertexId::point(&[1 << (2 * k), 0])
}

/// `r_k = 2^{k+1} - 1` in scaled units: the intrinsic depth of the tree.
pub fn r_k(k: u32) -> Length {
    (1 << (k + 1)) - 1
}

/// Decomposes `x` as a point of `A_k`, scanning scales from the largest.
pub fn decompose_ak(x: VertexId, k: u32) -> Option<AkDecomposition> {
    if x.dim() != 2 || k == 0 || k > 30 {
        return None;
    }
    let c = x.coords();
    let y = (c[0] - (1i64 << (2 * k)), c[1]);
    let mut eps = Vec::new();
    let r = descend(y, k, 0, None, &mut eps)?;
    Some(AkDecomposition { k, eps, r })
}

/// Residual `y` remains after `j` complete segments; returns the partial
/// length on success, leaving the steps in `eps`.
fn descend(y: Step, k: u32, j: u32, prev: Option<Step>, eps: &mut Vec<Step>) -> Option<u64> {
    if y == (0, 0) {
        return Some(0);
    }
    if j > k {
        return None;
    }
    let len = 1i64 << (k - j);
    let allowed = |e: Step| prev.is_none_or(|p| e != (-p.0, -p.1));
    if y.0 == 0 || y.1 == 0 {
        let r = y.0.abs() + y.1.abs();
        let e = (y.0.signum(), y.1.signum());
        if r < len && allowed(e) {
            eps.push(e);
            return Some(r as u64);
        }
    }
    for e in STEPS {
        if !allowed(e) {
            continue;
        }
        let rest = (y.0 - len * e.0, y.1 - len * e.1);
        // the remaining segments reach at most 2^{k-j} - 1
        if rest.0.abs() + rest.1.abs() > len - 1 {
            continue;
        }
        eps.push(e);
        if let Some(r) = descend(rest, k, j + 1, Some(e), eps) {
            return Some(r);
        }
        eps.pop();
    }
    None
}

/// The weighted plane with trees `A_1, …, A_{k_max}`.
#[derive(Clone, Debug)]
pub struct VonKoch {
    k_max: u32,
    /// Tree membership: point to (tree index, depth).
    members: FxHashMap<VertexId, (u32, Length)>,
}

impl VonKoch {
    pub fn new(params: &VonKochParams, budget: Budget) -> Result<Self> {
        let k_max = params.k_max;
        if k_max == 0 || k_max > K_MAX {
            return Err(Error::invalid(format!("k_max must lie in 1..={K_MAX}")));
        }
        let window: usize = (1..=k_max).map(|k| (1usize << (k + 2)).pow(2)).sum();
        if window > budget.max_vertices {
            return Err(Error::BudgetExceeded {
                limit: budget.max_vertices,
            });
        }
        let mut members = FxHashMap::default();
        for k in 1..=k_max {
            let a = root(k).coords()[0];
            let reach = r_k(k) as i64;
            for x in a - reach..=a + reach {
                for y in -reach..=reach {
                    let p = VertexId::point(&[x, y]);
                    if let Some(d) = decompose_ak(p, k) {
                        members.insert(p, (k, d.depth()));
                    }
                }
            }
        }
        Ok(VonKoch { k_max, members })
    }

    pub fn k_max(&self) -> u32 {
        self.k_max
    }

    /// Tree index and intrinsic depth of `x`, if it lies on a tree.
    pub fn tree_position(&self, x: &VertexId) -> Option<(u32, Length)> {
        self.members.get(x).copied()
    }

    pub fn tree(&self, k: u32) -> SubsetRegion {
        SubsetRegion::counted(
            self.members
                .iter()
                .filter(|(_, m)| m.0 == k)
                .map(|(v, _)| *v),
        )
    }

    /// `S_k`: tree points at intrinsic depth `r_k`.
    pub fn tree_sphere(&self, k: u32) -> SubsetRegion {
        let depth = r_k(k);
        SubsetRegion::counted(
            self.members
                .iter()
                .filter(|(_, m)| **m == (k, depth))
                .map(|(v, _)| *v),
        )
    }

    fn edge_length(&self, u: &VertexId, v: &VertexId) -> Length {
        match (self.members.get(u), self.members.get(v)) {
            (Some(a), Some(b)) if a.0 == b.0 => 1,
            _ => SCALE,
        }
    }
}

impl Space for VonKoch {
    fn scale(&self) -> Length {
        SCALE
    }

    fn contains(&self, v: VertexId) -> bool {
        v.dim() == 2 && v.tag() == 0
    }

    fn neighbors(&self, v: VertexId, out: &mut Vec<(VertexId, Length)>) {
        for axis in 0..2 {
            for delta in [-1, 1] {
                let u = v.shifted(axis, delta);
                out.push((u, self.edge_length(&v, &u)));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> VertexId {
        VertexId::point(&[x, y])
    }

    #[test]
    fn root_and_first_levels() {
        assert_eq!(root(3), p(64, 0));
        let d = decompose_ak(p(64, 0), 3).unwrap();
        assert!(d.eps.is_empty() && d.r == 0 && d.i().is_none());
        let d = decompose_ak(p(72, 0), 3).unwrap();
        assert_eq!((d.eps.clone(), d.r, d.i()), (vec![(1, 0)], 0, Some(0)));
        let d = decompose_ak(p(76, 0), 3).unwrap();
        assert_eq!((d.eps.clone(), d.r), (vec![(1, 0), (1, 0)], 0));
        let d = decompose_ak(p(72, 3), 3).unwrap();
        assert_eq!((d.eps.clone(), d.r, d.depth()), (vec![(1, 0), (0, 1)], 3, 11));
        assert_eq!(d.recompose(), p(72, 3));
        assert!(decompose_ak(p(65, 1), 3).is_none());
        assert!(decompose_ak(p(80, 0), 3).is_none());
    }

    #[test]
    fn tree_sizes() {
        let y = VonKoch::new(&VonKochParams { k_max: 4 }, Budget::default()).unwrap();
        let sizes: Vec<usize> = (1..=4).map(|k| y.tree(k).len()).collect();
        assert_eq!(sizes, vec![21, 77, 261, 845]);
        for k in 1..=4 {
            assert_eq!(y.tree_sphere(k).len(), 4 * 3usize.pow(k));
        }
    }

    #[test]
    fn edge_lengths() {
        let y = VonKoch::new(&VonKochParams { k_max: 2 }, Budget::default()).unwrap();
        let mut out = Vec::new();
        y.neighbors(p(16, 0), &mut out);
        assert!(out.iter().all(|e| e.1 == 1));
        out.clear();
        y.neighbors(p(0, 0), &mut out);
        assert!(out.iter().all(|e| e.1 == SCALE));
    }
}
