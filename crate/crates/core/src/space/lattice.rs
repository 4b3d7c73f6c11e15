use super::{Length, Space, VertexId, MAX_DIM};

/// The integer lattice `Z^d` with every edge of length `scale`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    scale: Length,
}

impl Lattice {
    pub fn new(dim: usize, scale: Length) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "unsupported dimension {dim}");
        assert!(scale > 0, "scale must be positive");
        Lattice { dim, scale }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

impl Space for Lattice {
    fn scale(&self) -> Length {
        self.scale
    }

    fn contains(&self, v: VertexId) -> bool {
        v.dim() == self.dim && v.tag() == 0
    }

    fn neighbors(&self, v: VertexId, out: &mut Vec<(VertexId, Length)>) {
        for axis in 0..self.dim {
            out.push((v.shifted(axis, 1), self.scale));
            out.push((v.shifted(axis, -1), self.scale));
        }
    }
}
