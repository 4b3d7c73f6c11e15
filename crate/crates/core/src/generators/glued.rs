use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{Budget, FiniteSpace, Length, VertexId};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GluedTreesParams {
    pub n_max: u32,
    /// Length of a single subdivided edge, in scaled units.
    #[serde(default = "one")]
    pub scale: Length,
}

fn one() -> Length {
    1
}

/// Chained pairs of stretched binary trees.
///
/// `G_n` is the binary tree of depth `n` whose edges from generation `k - 1`
/// to `k` are paths of `2^{2^{n-k}}` edges. `G'_n` is two copies of `G_n`
/// sharing their last generation, and the copies are chained by identifying
/// the root `r'_n` of the second copy with the root `r_{n+1}` of the next.
///
/// Vertices are `(n, copy, node, step)` where `node` is a heap index (root 1)
/// and `step > 0` numbers the interior points of the path from the parent.
#[derive(Clone, Debug)]
pub struct GluedTrees {
    n_max: u32,
    space: FiniteSpace,
}

impl GluedTrees {
    /// Vertex count of the chain, computed without building it.
    pub fn vertex_count(n_max: u32) -> u128 {
        let mut total = 0u128;
        for n in 1..=n_max {
            let mut one_copy = (1u128 << (n + 1)) - 1;
            for k in 1..=n {
                let len = 1u128.checked_shl(1 << (n - k)).unwrap_or(u128::MAX);
                one_copy = one_copy.saturating_add((1u128 << k).saturating_mul(len - 1));
            }
            total = total.saturating_add(2 * one_copy - (1u128 << n));
        }
        total - u128::from(n_max.saturating_sub(1))
    }

    pub fn new(params: &GluedTreesParams, budget: Budget) -> Result<Self> {
        let n_max = params.n_max;
        if n_max == 0 || params.scale == 0 {
            return Err(Error::invalid("n_max and scale must be positive"));
        }
        if n_max > 6 || Self::vertex_count(n_max) > budget.max_vertices as u128 {
            return Err(Error::BudgetExceeded {
                limit: budget.max_vertices,
            });
        }
        let node = |n: u32, copy: i64, heap: i64| -> VertexId {
            if heap >= 1 << n {
                VertexId::point(&[n as i64, 0, heap, 0])
            } else if heap == 1 && copy == 1 && n < n_max {
                VertexId::point(&[n as i64 + 1, 0, 1, 0])
            } else {
                VertexId::point(&[n as i64, copy, heap, 0])
            }
        };
        let mut vertices = Vec::new();
        let mut index = rustc_hash::FxHashMap::default();
        let mut id = |v: VertexId, vertices: &mut Vec<VertexId>| -> usize {
            *index.entry(v).or_insert_with(|| {
                vertices.push(v);
                vertices.len() - 1
            })
        };
        let mut edges = Vec::new();
        for n in 1..=n_max {
            for copy in 0..2 {
                for heap in 2i64..1 << (n + 1) {
                    let generation = 63 - heap.leading_zeros();
                    let len = 1i64 << (1 << (n - generation));
                    let mut prev = id(node(n, copy, heap / 2), &mut vertices);
                    for step in 1..len {
                        let v = VertexId::point(&[n as i64, copy, heap, step]);
                        let cur = id(v, &mut vertices);
                        edges.push((prev, cur, params.scale));
                        prev = cur;
                    }
                    let end = id(node(n, copy, heap), &mut vertices);
                    edges.push((prev, end, params.scale));
                }
            }
        }
        let space = FiniteSpace::from_edges(params.scale, vertices, &edges, None)?;
        Ok(GluedTrees { n_max, space })
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    /// The root `r_n` of the first copy of `G_n`.
    pub fn root(&self, n: u32) -> VertexId {
        VertexId::point(&[n as i64, 0, 1, 0])
    }

    /// The root `r'_n` of the second copy, which is `r_{n+1}` below the top.
    pub fn root_prime(&self, n: u32) -> VertexId {
        if n < self.n_max {
            self.root(n + 1)
        } else {
            VertexId::point(&[n as i64, 1, 1, 0])
        }
    }

    /// Branching vertices of generation `k` in both copies of `G_n`.
    pub fn generation(&self, n: u32, k: u32) -> Vec<VertexId> {
        let mut out = Vec::new();
        for copy in 0..2i64 {
            if k == n && copy == 1 {
                break;
            }
            for heap in 1i64 << k..1 << (k + 1) {
                let v = if k == 0 && copy == 1 {
                    self.root_prime(n)
                } else {
                    VertexId::point(&[n as i64, copy, heap, 0])
                };
                out.push(v);
            }
        }
        out
    }
}
