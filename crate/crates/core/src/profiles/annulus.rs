use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{ball, distances_from, h_boundary, Budget, Length, Space, VertexId};

/// The radius `r'` minimizing a shell measure, with the normalized ratio
/// `shell · (r / S) / μ(B(x, r))`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnulusWitness {
    pub r: Length,
    pub r_prime: Length,
    pub shell_measure: u64,
    pub ball_measure: u64,
    pub ratio: f64,
}

fn witness(r: Length, scale: Length, r_prime: Length, shell: u64, ball: u64) -> AnnulusWitness {
    AnnulusWitness {
        r,
        r_prime,
        shell_measure: shell,
        ball_measure: ball,
        ratio: shell as f64 * (r as f64 / scale as f64) / ball as f64,
    }
}

/// `inf_{r ≤ r' ≤ 2r} μ(C_{r'−S, r'}(x))`, swept over every integer `r'`.
pub fn annulus_inf_check<S: Space + ?Sized>(
    space: &S,
    x: VertexId,
    r: Length,
    budget: Budget,
) -> Result<AnnulusWitness> {
    let unit = space.scale();
    if r < unit {
        return Err(Error::invalid("r must be at least one true unit"));
    }
    let map = distances_from(space, [x], 2 * r, budget)?;
    let mut by_dist: Vec<(Length, u64)> = map
        .dist
        .iter()
        .map(|(v, d)| (*d, space.measure(*v)))
        .collect();
    by_dist.sort_unstable();
    let volume = |rho: Length| -> u64 {
        let end = by_dist.partition_point(|p| p.0 <= rho);
        by_dist[..end].iter().map(|p| p.1).sum()
    };
    let ball_measure = volume(r);
    let mut best: Option<(Length, u64)> = None;
    for rp in r..=2 * r {
        let shell = volume(rp) - volume(rp - unit);
        if best.is_none_or(|b| shell < b.1) {
            best = Some((rp, shell));
        }
    }
    let (rp, shell) = best.expect("the sweep is nonempty");
    Ok(witness(r, unit, rp, shell, ball_measure))
}

/// `inf μ(∂_S B(x, r'))` over `r' = r, r + step, … ≤ r_max`.
pub fn boundary_inf_check<S: Space + ?Sized>(
    space: &S,
    x: VertexId,
    r: Length,
    r_max: Length,
    step: Length,
    budget: Budget,
) -> Result<AnnulusWitness> {
    let unit = space.scale();
    if r < unit || step == 0 || r_max < r {
        return Err(Error::invalid("need S ≤ r ≤ r_max and a positive step"));
    }
    let ball_measure = ball(space, x, r, budget)?.measure();
    let mut best: Option<(Length, u64)> = None;
    let mut rp = r;
    while rp <= r_max {
        let b = ball(space, x, rp, budget)?;
        let shell = h_boundary(space, &b, unit, budget)?.measure();
        if best.is_none_or(|bst| shell < bst.1) {
            best = Some((rp, shell));
        }
        rp += step;
    }
    let (rp, shell) = best.expect("the sweep is nonempty");
    Ok(witness(r, unit, rp, shell, ball_measure))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Lattice;

    const B: Budget = Budget::new(1_000_000);

    #[test]
    fn line_annuli_have_two_points() {
        let s = Lattice::new(1, 1);
        let w = annulus_inf_check(&s, VertexId::point(&[0]), 10, B).unwrap();
        assert_eq!((w.r_prime, w.shell_measure, w.ball_measure), (10, 2, 21));
        assert!(w.ratio <= 1.0);
    }

    #[test]
    fn plane_ratio_is_bounded() {
        let s = Lattice::new(2, 1);
        let w = annulus_inf_check(&s, VertexId::point(&[0, 0]), 8, B).unwrap();
        // |C_{7,8}| = 32 and |B(8)| = 145
        assert_eq!((w.r_prime, w.shell_measure, w.ball_measure), (8, 32, 145));
        assert!(w.ratio < 2.0);
        let c = boundary_inf_check(&s, VertexId::point(&[0, 0]), 8, 16, 1, B).unwrap();
        assert_eq!((c.r_prime, c.shell_measure), (8, 68));
    }
}
