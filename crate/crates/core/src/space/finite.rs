use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{Length, Space, VertexId};
use crate::error::{Error, Result};

/// A finite weighted graph stored as adjacency lists.
#[derive(Clone, Debug)]
pub struct FiniteSpace {
    scale: Length,
    vertices: Vec<VertexId>,
    index: FxHashMap<VertexId, usize>,
    adjacency: Vec<Vec<(usize, Length)>>,
    measures: Vec<u64>,
}

/// JSON form: `{"scale": S, "vertices": [[c.., tag], ..], "edges": [[i, j, len], ..]}`
/// with an optional `"measures"` array (counting measure when absent).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSpaceDoc {
    pub scale: Length,
    pub vertices: Vec<VertexId>,
    pub edges: Vec<(usize, usize, Length)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measures: Option<Vec<u64>>,
}

impl FiniteSpace {
    pub fn from_edges(
        scale: Length,
        vertices: Vec<VertexId>,
        edges: &[(usize, usize, Length)],
        measures: Option<Vec<u64>>,
    ) -> Result<Self> {
        if scale == 0 {
            return Err(Error::invalid("scale must be positive"));
        }
        let mut index = FxHashMap::default();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(*v, i).is_some() {
                return Err(Error::invalid(format!("duplicate vertex {v}")));
            }
        }
        let n = vertices.len();
        let mut adjacency = vec![Vec::new(); n];
        for &(i, j, len) in edges {
            if i >= n || j >= n {
                return Err(Error::invalid(format!("edge ({i}, {j}) out of range")));
            }
            if i == j {
                return Err(Error::invalid(format!("self-loop at vertex {i}")));
            }
            if len == 0 {
                return Err(Error::invalid("edge lengths must be at least 1"));
            }
            adjacency[i].push((j, len));
            adjacency[j].push((i, len));
        }
        let measures = match measures {
            Some(m) if m.len() != n => {
                return Err(Error::invalid("one measure per vertex is required"))
            }
            Some(m) if m.contains(&0) => {
                return Err(Error::invalid("vertex measures must be at least 1"))
            }
            Some(m) => m,
            None => vec![1; n],
        };
        Ok(FiniteSpace {
            scale,
            vertices,
            index,
            adjacency,
            measures,
        })
    }

    pub fn from_doc(doc: FiniteSpaceDoc) -> Result<Self> {
        Self::from_edges(doc.scale, doc.vertices, &doc.edges, doc.measures)
    }

    pub fn to_doc(&self) -> FiniteSpaceDoc {
        let mut edges = Vec::new();
        for (i, adj) in self.adjacency.iter().enumerate() {
            for &(j, len) in adj {
                if i < j {
                    edges.push((i, j, len));
                }
            }
        }
        edges.sort_unstable();
        let measures = self
            .measures
            .iter()
            .any(|&m| m != 1)
            .then(|| self.measures.clone());
        FiniteSpaceDoc {
            scale: self.scale,
            vertices: self.vertices.clone(),
            edges,
            measures,
        }
    }

    /// The path `0 - 1 - ... - (n-1)` with unit edges.
    pub fn path(n: usize, scale: Length) -> Self {
        let vertices = (0..n as i64).map(|i| VertexId::point(&[i])).collect();
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, scale)).collect();
        Self::from_edges(scale, vertices, &edges, None).expect("valid path")
    }

    pub fn cycle(n: usize, scale: Length) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let vertices = (0..n as i64).map(|i| VertexId::point(&[i])).collect();
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n, scale)).collect();
        Self::from_edges(scale, vertices, &edges, None).expect("valid cycle")
    }

    /// The `w × h` grid graph with unit edges.
    pub fn grid(w: usize, h: usize, scale: Length) -> Self {
        let mut vertices = Vec::with_capacity(w * h);
        for x in 0..w as i64 {
            for y in 0..h as i64 {
                vertices.push(VertexId::point(&[x, y]));
            }
        }
        let id = |x: usize, y: usize| x * h + y;
        let mut edges = Vec::new();
        for x in 0..w {
            for y in 0..h {
                if x + 1 < w {
                    edges.push((id(x, y), id(x + 1, y), scale));
                }
                if y + 1 < h {
                    edges.push((id(x, y), id(x, y + 1), scale));
                }
            }
        }
        Self::from_edges(scale, vertices, &edges, None).expect("valid grid")
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertex(&self, i: usize) -> VertexId {
        self.vertices[i]
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn adjacency(&self, i: usize) -> &[(usize, Length)] {
        &self.adjacency[i]
    }

    pub fn measure_at(&self, i: usize) -> u64 {
        self.measures[i]
    }

    pub fn total_measure(&self) -> u64 {
        self.measures.iter().sum()
    }
}

impl Space for FiniteSpace {
    fn scale(&self) -> Length {
        self.scale
    }

    fn contains(&self, v: VertexId) -> bool {
        self.index.contains_key(&v)
    }

    fn neighbors(&self, v: VertexId, out: &mut Vec<(VertexId, Length)>) {
        if let Some(&i) = self.index.get(&v) {
            out.extend(
                self.adjacency[i]
                    .iter()
                    .map(|&(j, len)| (self.vertices[j], len)),
            );
        }
    }

    fn measure(&self, v: VertexId) -> u64 {
        self.index.get(&v).map_or(0, |&i| self.measures[i])
    }

    fn finite_vertices(&self) -> Option<&[VertexId]> {
        Some(&self.vertices)
    }
}
