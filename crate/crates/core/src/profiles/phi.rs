use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{GrowthCurve, Length};

/// The right inverse `φ(t) = inf{r : V(r) ≥ t}` of a sampled growth curve,
/// tabulated at the sampled volumes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhiCurve {
    pub scale: Length,
    /// `(t, φ(t))` with `t` ranging over the distinct sampled volumes.
    pub points: Vec<(u64, Length)>,
}

fn check_monotone(growth: &GrowthCurve) -> Result<()> {
    if growth.points.is_empty() {
        return Err(Error::EmptyCurve);
    }
    if growth.points.windows(2).any(|w| w[0].0 > w[1].0 || w[0].1 > w[1].1) {
        return Err(Error::invalid("growth curve must be nondecreasing"));
    }
    Ok(())
}

/// Least sampled radius whose volume reaches `t`.
pub fn phi_at(growth: &GrowthCurve, t: u64) -> Result<Length> {
    check_monotone(growth)?;
    let i = growth.points.partition_point(|p| p.1 < t);
    growth
        .points
        .get(i)
        .map(|p| p.0)
        .ok_or(Error::OutOfRange {
            t,
            max: growth.max_volume(),
        })
}

pub fn phi_from_growth(growth: &GrowthCurve) -> Result<PhiCurve> {
    check_monotone(growth)?;
    let mut points: Vec<(u64, Length)> = Vec::new();
    for &(r, v) in &growth.points {
        if points.last().is_none_or(|last| last.0 < v) {
            points.push((v, r));
        }
    }
    Ok(PhiCurve {
        scale: growth.scale,
        points,
    })
}

impl PhiCurve {
    pub fn at(&self, t: u64) -> Result<Length> {
        let i = self.points.partition_point(|p| p.0 < t);
        self.points.get(i).map(|p| p.1).ok_or(Error::OutOfRange {
            t,
            max: self.points.last().map_or(0, |p| p.0),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::VertexId;

    fn curve(scale: Length, points: Vec<(Length, u64)>) -> GrowthCurve {
        GrowthCurve {
            center: VertexId::point(&[0]),
            scale,
            points,
        }
    }

    #[test]
    fn identity_growth() {
        let g = curve(1, (1..=20).map(|r| (r, r)).collect());
        for t in 1..=20 {
            assert_eq!(phi_at(&g, t).unwrap(), t);
        }
        assert!(matches!(
            phi_at(&g, 21),
            Err(Error::OutOfRange { t: 21, max: 20 })
        ));
    }

    #[test]
    fn plane_growth() {
        let g = curve(1, vec![(1, 5), (2, 13), (3, 25)]);
        assert_eq!(phi_at(&g, 6).unwrap(), 2);
        assert_eq!(phi_at(&g, 5).unwrap(), 1);
        let phi = phi_from_growth(&g).unwrap();
        assert_eq!(phi.points, vec![(5, 1), (13, 2), (25, 3)]);
        assert_eq!(phi.at(14).unwrap(), 3);
    }

    #[test]
    fn step_growth() {
        let g = curve(1, vec![(0, 1), (1, 1), (2, 1), (3, 10), (4, 10)]);
        let phi = phi_from_growth(&g).unwrap();
        assert_eq!(phi.points, vec![(1, 0), (10, 3)]);
        assert_eq!(phi.at(2).unwrap(), 3);
        assert_eq!(phi.at(1).unwrap(), 0);
        assert!(phi_from_growth(&curve(1, vec![(1, 5), (2, 4)])).is_err());
    }
}
