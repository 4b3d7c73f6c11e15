use rayon::prelude::*;

use super::{ProfileCurve, ProfileKind};
use crate::error::{Error, Result};
use crate::space::{distances_from, Budget, Length, Space};

/// Largest vertex count accepted by [`exact_profile`].
pub const ENUMERATION_BOUND: usize = 22;

/// Number of leading vertices whose membership is fixed per parallel chunk.
const CHUNK_BITS: usize = 6;

/// Static data shared by every enumeration chunk.
struct Tables {
    /// `balls[i]`: indices within distance `h` of vertex `i` (including `i`).
    balls: Vec<Vec<usize>>,
    /// `close[i]`: bitmask of vertices at distance `< gap` from `i`.
    close: Vec<u32>,
    mu: Vec<u64>,
    half: u64,
    connected_only: bool,
}

/// Walks all subsets of a finite space and records, for each measure
/// `m ≤ μ(X)/2`, the least `μ(∂_h A)` with `μ(A) = m`.
///
/// Membership counts `cnt[x] = |B(x, h) ∩ A|` are kept incrementally while
/// subsets are visited in Gray-code order, so that `x ∈ ∂_h A` iff
/// `0 < cnt[x] < |B(x, h)|`.
struct Walker<'a> {
    t: &'a Tables,
    cnt: Vec<u32>,
    mask: u32,
    measure: u64,
    boundary: u64,
    best: Vec<u64>,
}

impl<'a> Walker<'a> {
    fn new(t: &'a Tables, mask: u32) -> Self {
        let n = t.mu.len();
        let mut w = Walker {
            t,
            cnt: vec![0; n],
            mask: 0,
            measure: 0,
            boundary: 0,
            best: vec![u64::MAX; t.half as usize + 1],
        };
        for v in 0..n {
            if mask & (1 << v) != 0 {
                w.flip(v);
            }
        }
        w
    }

    fn in_boundary(&self, x: usize, c: u32) -> bool {
        c > 0 && (c as usize) < self.t.balls[x].len()
    }

    fn flip(&mut self, v: usize) {
        let adding = self.mask & (1 << v) == 0;
        self.mask ^= 1 << v;
        if adding {
            self.measure += self.t.mu[v];
        } else {
            self.measure -= self.t.mu[v];
        }
        for &x in &self.t.balls[v] {
            let old = self.cnt[x];
            let new = if adding { old + 1 } else { old - 1 };
            self.cnt[x] = new;
            match (self.in_boundary(x, old), self.in_boundary(x, new)) {
                (false, true) => self.boundary += self.t.mu[x],
                (true, false) => self.boundary -= self.t.mu[x],
                _ => {}
            }
        }
    }

    fn record(&mut self) {
        let m = self.measure;
        if m == 0 || m > self.t.half {
            return;
        }
        let m = m as usize;
        if self.boundary < self.best[m] && (!self.t.connected_only || self.connected()) {
            self.best[m] = self.boundary;
        }
    }

    fn connected(&self) -> bool {
        let mask = self.mask;
        let mut seen = mask & mask.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let mut grow = 0;
            let mut f = frontier;
            while f != 0 {
                let i = f.trailing_zeros() as usize;
                f &= f - 1;
                grow |= self.t.close[i];
            }
            frontier = grow & mask & !seen;
            seen |= frontier;
        }
        seen == mask
    }
}

/// The exact h-profile of a finite space by enumeration of all subsets.
///
/// For every `t` in `1..=⌊μ(X)/2⌋` the value is the least `μ(∂_h A)` over
/// subsets with `t ≤ μ(A) ≤ μ(X)/2`, restricted to metrically connected
/// subsets (parts at distance `≥ gap` are disconnected) when
/// `connected_only` is set. Values of `t` with no admissible subset are
/// omitted.
pub fn exact_profile<S: Space + ?Sized>(
    space: &S,
    h: Length,
    connected_only: bool,
    gap: Length,
) -> Result<ProfileCurve> {
    let vertices = space
        .finite_vertices()
        .ok_or_else(|| Error::invalid("the exact profile needs a finite space"))?;
    let n = vertices.len();
    if n > ENUMERATION_BOUND {
        return Err(Error::TooLarge {
            vertices: n,
            bound: ENUMERATION_BOUND,
        });
    }
    if n == 0 || h == 0 || gap == 0 {
        return Err(Error::invalid("need a nonempty space, h ≥ 1 and gap ≥ 1"));
    }
    let budget = Budget::new(n);
    let reach = h.max(gap - 1);
    let mut balls = vec![Vec::new(); n];
    let mut close = vec![0u32; n];
    for (i, v) in vertices.iter().enumerate() {
        let map = distances_from(space, [*v], reach, budget)?;
        for (j, u) in vertices.iter().enumerate() {
            if let Some(d) = map.get(u) {
                if d <= h {
                    balls[i].push(j);
                }
                if d < gap {
                    close[i] |= 1 << j;
                }
            }
        }
    }
    let mu: Vec<u64> = vertices.iter().map(|v| space.measure(*v)).collect();
    let half = mu.iter().sum::<u64>() / 2;
    let tables = Tables {
        balls,
        close,
        mu,
        half,
        connected_only,
    };

    let high = n.min(CHUNK_BITS);
    let low = n - high;
    let best = (0u32..1 << high)
        .into_par_iter()
        .map(|chunk| {
            let mut w = Walker::new(&tables, chunk << low);
            w.record();
            for step in 1u32..1 << low {
                w.flip(step.trailing_zeros() as usize);
                w.record();
            }
            w.best
        })
        .reduce(
            || vec![u64::MAX; half as usize + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = (*x).min(y);
                }
                a
            },
        );

    let mut points = Vec::new();
    let mut running = u64::MAX;
    for t in (1..=half).rev() {
        running = running.min(best[t as usize]);
        if running != u64::MAX {
            points.push((t, running));
        }
    }
    points.reverse();
    let (kind, provenance) = if connected_only {
        (
            ProfileKind::ExactConnected,
            format!("metrically connected subsets, gap {gap}"),
        )
    } else {
        (ProfileKind::Exact, "all subsets".to_string())
    };
    Ok(ProfileCurve {
        kind,
        h,
        provenance,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{FiniteSpace, Lattice};

    #[test]
    fn eight_cycle() {
        let c = FiniteSpace::cycle(8, 1);
        let p = exact_profile(&c, 1, false, 10).unwrap();
        assert_eq!(p.points, vec![(1, 3), (2, 4), (3, 4), (4, 4)]);
    }

    #[test]
    fn two_point_space() {
        let k2 = FiniteSpace::path(2, 1);
        assert_eq!(exact_profile(&k2, 1, false, 10).unwrap().points, vec![(1, 2)]);
    }

    #[test]
    fn connected_restriction_dominates() {
        let p6 = FiniteSpace::path(6, 1);
        let all = exact_profile(&p6, 1, false, 10).unwrap();
        let conn = exact_profile(&p6, 1, true, 10).unwrap();
        assert_eq!(all.points.len(), conn.points.len());
        for (a, c) in all.points.iter().zip(&conn.points) {
            assert!(c.1 >= a.1);
        }
        // gap 1 makes only singletons connected
        let strict = exact_profile(&FiniteSpace::path(4, 1), 1, true, 1).unwrap();
        assert_eq!(strict.points, vec![(1, 2)]);
    }

    #[test]
    fn rejects_large_or_infinite_spaces() {
        let big = FiniteSpace::path(23, 1);
        assert!(matches!(
            exact_profile(&big, 1, false, 10),
            Err(Error::TooLarge { vertices: 23, .. })
        ));
        assert!(exact_profile(&Lattice::new(2, 1), 1, false, 10).is_err());
    }

    #[test]
    fn weighted_vertices() {
        let s = FiniteSpace::from_edges(
            1,
            FiniteSpace::path(3, 1).finite_vertices().unwrap().to_vec(),
            &[(0, 1, 1), (1, 2, 1)],
            Some(vec![1, 1, 4]),
        )
        .unwrap();
        // total 6, half 3; {0}: boundary {0,1} = 2; {0,1}: boundary {1,2} = 5;
        // no subset has measure 3, so t = 3 is not sampled
        let p = exact_profile(&s, 1, false, 10).unwrap();
        assert_eq!(p.points, vec![(1, 2), (2, 5)]);
    }
}
