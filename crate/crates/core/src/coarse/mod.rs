//! Coarse maps between spaces: quasi-isometry constants, image thickening
//! and transport of boundary and volume along a map.

use std::io::Write;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::{FamilySpec, Grid};
use crate::space::{
    ball, distance, h_boundary, neighborhood, Budget, Length, Space, SubsetRegion, VertexId,
};

/// A vertex-to-vertex function.
pub trait VertexMap: Send + Sync {
    fn apply(&self, v: VertexId) -> VertexId;
}

impl<F: Fn(VertexId) -> VertexId + Send + Sync> VertexMap for F {
    fn apply(&self, v: VertexId) -> VertexId {
        self(v)
    }
}

/// A map between two spaces together with its constants.
///
/// `c1` is additive, in codomain scaled units. `c2` and `c3` are the
/// distance and unit-ball measure distortions.
pub struct CoarseMap<'a> {
    pub domain: &'a dyn Space,
    pub codomain: &'a dyn Space,
    pub forward: Box<dyn VertexMap + 'a>,
    /// Approximate inverse, used for the net constant and the reverse transport.
    pub inverse: Option<Box<dyn VertexMap + 'a>>,
    pub c1: Length,
    pub c2: Ratio<u64>,
    pub c3: Ratio<u64>,
}

impl<'a> CoarseMap<'a> {
    pub fn new(
        domain: &'a dyn Space,
        codomain: &'a dyn Space,
        forward: impl VertexMap + 'a,
    ) -> Self {
        CoarseMap {
            domain,
            codomain,
            forward: Box::new(forward),
            inverse: None,
            c1: 0,
            c2: Ratio::from_integer(1),
            c3: Ratio::from_integer(1),
        }
    }

    pub fn identity(space: &'a dyn Space) -> Self {
        Self::new(space, space, |v| v).with_inverse(|v| v)
    }

    /// The identity on vertices between two spaces on the same vertex set,
    /// such as a reweighted lattice.
    pub fn forgetful(domain: &'a dyn Space, codomain: &'a dyn Space) -> Self {
        Self::new(domain, codomain, |v| v).with_inverse(|v| v)
    }

    pub fn constant(domain: &'a dyn Space, codomain: &'a dyn Space, target: VertexId) -> Self {
        Self::new(domain, codomain, move |_| target)
    }

    pub fn with_inverse(mut self, inverse: impl VertexMap + 'a) -> Self {
        self.inverse = Some(Box::new(inverse));
        self
    }

    pub fn with_constants(mut self, c1: Length, c2: Ratio<u64>, c3: Ratio<u64>) -> Self {
        self.c1 = c1;
        self.c2 = c2;
        self.c3 = c3;
        self
    }

    pub fn apply(&self, v: VertexId) -> VertexId {
        self.forward.apply(v)
    }

    pub fn image(&self, set: &SubsetRegion) -> SubsetRegion {
        SubsetRegion::from_vertices(self.codomain, set.iter().map(|v| self.apply(*v)))
    }

    /// The reverse map, when an inverse is attached.
    pub fn reversed(&self) -> Option<CoarseMap<'_>> {
        let inv = self.inverse.as_ref()?;
        Some(CoarseMap {
            domain: self.codomain,
            codomain: self.domain,
            forward: Box::new(|v| inv.apply(v)),
            inverse: Some(Box::new(|v| self.forward.apply(v))),
            c1: self.c1,
            c2: self.c2,
            c3: self.c3,
        })
    }
}

/// `[f(A)]_a`: the codomain neighborhood of radius `a` of the image of `A`.
pub fn thicken_image(map: &CoarseMap, set: &SubsetRegion, a: Length, budget: Budget) -> Result<SubsetRegion> {
    if set.is_empty() {
        return Ok(SubsetRegion::empty());
    }
    neighborhood(map.codomain, &map.image(set), a, budget)
}

/// Search caps for the constant estimation, in scaled units of each side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub domain: Length,
    pub codomain: Length,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum QiEstimate {
    Constants {
        /// Net constant: largest `d'(y, f(g(y)))` over the codomain sample,
        /// `None` when the map has no inverse.
        c1: Option<Length>,
        c2: u64,
        /// Largest unit-ball measure ratio, as `(numerator, denominator)`.
        c3: (u64, u64),
    },
    Violation {
        x: VertexId,
        y: VertexId,
        d: Length,
        d_image: Option<Length>,
    },
}

/// Whether `c⁻¹ d/S − c ≤ d'/S' ≤ c d/S + c` in true units.
fn qi_holds(c: u64, d: Length, s: Length, dp: Length, sp: Length) -> bool {
    let (c, d, s, dp, sp) = (c as u128, d as u128, s as u128, dp as u128, sp as u128);
    let upper = c * dp * s <= c * c * d * sp + c * c * s * sp;
    let lower = d * sp <= c * c * s * sp + c * dp * s;
    upper && lower
}

/// Smallest grid constants making `f` a quasi-isometry on the sampled pairs,
/// with the net and measure constants on the given samples.
pub fn estimate_qi_constants(
    map: &CoarseMap,
    pairs: &[(VertexId, VertexId)],
    net_sample: &[VertexId],
    caps: Caps,
    grid: Grid,
    budget: Budget,
) -> Result<QiEstimate> {
    let (s, sp) = (map.domain.scale(), map.codomain.scale());
    let measured: Vec<(VertexId, VertexId, Length, Option<Length>)> = pairs
        .par_iter()
        .map(|&(x, y)| {
            let d = distance(map.domain, x, y, caps.domain, budget)?.ok_or_else(|| {
                Error::invalid(format!("pair ({x}, {y}) lies beyond the domain cap"))
            })?;
            let dp = distance(map.codomain, map.apply(x), map.apply(y), caps.codomain, budget)?;
            Ok((x, y, d, dp))
        })
        .collect::<Result<_>>()?;
    let mut c2 = 1u64;
    for &(x, y, d, dp) in &measured {
        let fits = |c: u64| dp.is_some_and(|dp| qi_holds(c, d, s, dp, sp));
        while c2 <= grid.max_constant() && !fits(c2) {
            c2 *= 2;
        }
        if c2 > grid.max_constant() {
            return Ok(QiEstimate::Violation {
                x,
                y,
                d,
                d_image: dp,
            });
        }
    }
    let c1 = match &map.inverse {
        None => None,
        Some(inv) => {
            let mut worst = 0;
            for &y in net_sample {
                let back = map.apply(inv.apply(y));
                let d = distance(map.codomain, y, back, caps.codomain, budget)?
                    .ok_or_else(|| Error::invalid(format!("{y} is far from the image")))?;
                worst = worst.max(d);
            }
            Some(worst)
        }
    };
    let mut c3 = Ratio::from_integer(1u64);
    let mut seen: Vec<VertexId> = pairs.iter().flat_map(|p| [p.0, p.1]).collect();
    seen.sort_unstable();
    seen.dedup();
    for x in seen {
        let m = ball(map.domain, x, s, budget)?.measure();
        let mp = ball(map.codomain, map.apply(x), sp, budget)?.measure();
        let r = Ratio::new(m.max(mp), m.min(mp));
        c3 = c3.max(r);
    }
    Ok(QiEstimate::Constants {
        c1,
        c2,
        c3: (*c3.numer(), *c3.denom()),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportRow {
    #[serde(rename = "set-name")]
    pub set_name: String,
    pub mu_boundary_src: u64,
    pub mu_boundary_img: u64,
    pub ratio: f64,
}

/// Boundary measures of each family member and of its thickened image.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransportReport {
    pub h: Length,
    pub h_image: Length,
    pub thickening: Length,
    pub rows: Vec<TransportRow>,
    /// Largest `img / src` ratio, infinite when a null boundary maps to a
    /// nonnull one.
    pub k: f64,
    /// The same measurement pulled back through the inverse, starting from
    /// the thickened images.
    pub reverse_rows: Vec<TransportRow>,
    pub reverse_k: Option<f64>,
}

fn ratio(src: u64, img: u64) -> f64 {
    match (src, img) {
        (0, 0) => 0.0,
        (0, _) => f64::INFINITY,
        _ => img as f64 / src as f64,
    }
}

fn transport_rows(
    map: &CoarseMap,
    members: &[(String, SubsetRegion)],
    h: Length,
    h_image: Length,
    a: Length,
    budget: Budget,
) -> Result<Vec<(TransportRow, SubsetRegion)>> {
    members
        .par_iter()
        .map(|(name, set)| {
            let src = h_boundary(map.domain, set, h, budget)?.measure();
            let thick = thicken_image(map, set, a, budget)?;
            let img = h_boundary(map.codomain, &thick, h_image, budget)?.measure();
            Ok((
                TransportRow {
                    set_name: name.clone(),
                    mu_boundary_src: src,
                    mu_boundary_img: img,
                    ratio: ratio(src, img),
                },
                thick,
            ))
        })
        .collect()
}

fn max_ratio(rows: &[TransportRow]) -> f64 {
    rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
}

/// Compares `μ(∂_h A)` with `μ'(∂_{h'} [f(A)]_{c1})` over a family, then
/// repeats the comparison backwards from the thickened images.
pub fn verify_boundary_transport(
    map: &CoarseMap,
    family: &FamilySpec,
    h: Length,
    h_image: Length,
    budget: Budget,
) -> Result<TransportReport> {
    let a = map.c1;
    let forward = transport_rows(map, &family.members, h, h_image, a, budget)?;
    let rows: Vec<TransportRow> = forward.iter().map(|r| r.0.clone()).collect();
    let (reverse_rows, reverse_k) = match map.reversed() {
        Some(back) => {
            let images: Vec<(String, SubsetRegion)> = forward
                .into_iter()
                .map(|(row, thick)| (format!("{}'", row.set_name), thick))
                .collect();
            let rev: Vec<TransportRow> = transport_rows(&back, &images, h_image, h, a, budget)?
                .into_iter()
                .map(|r| r.0)
                .collect();
            let k = max_ratio(&rev);
            (rev, Some(k))
        }
        None => (Vec::new(), None),
    };
    Ok(TransportReport {
        h,
        h_image,
        thickening: a,
        k: max_ratio(&rows),
        rows,
        reverse_rows,
        reverse_k,
    })
}

impl TransportReport {
    /// CSV with columns `set-name, mu_boundary_src, mu_boundary_img, ratio`,
    /// forward rows first.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.rows.iter().chain(&self.reverse_rows) {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum MeasureComparison {
    Constant { c: u64, worst_ratio: f64 },
    Violation { set_name: String, ratio: f64 },
}

/// Smallest grid `C` with `μ(A) ≤ C μ'([f(A)]_{c1})` over the family.
pub fn verify_measure_comparison(
    map: &CoarseMap,
    family: &FamilySpec,
    grid: Grid,
    budget: Budget,
) -> Result<MeasureComparison> {
    let rows: Vec<(String, u64, u64)> = family
        .members
        .par_iter()
        .map(|(name, set)| {
            let thick = thicken_image(map, set, map.c1, budget)?;
            Ok((name.clone(), set.measure(), thick.measure()))
        })
        .collect::<Result<_>>()?;
    let mut c = 1u64;
    let mut worst = 0.0f64;
    for (name, m, mp) in rows {
        let r = m as f64 / mp.max(1) as f64;
        worst = worst.max(r);
        while c <= grid.max_constant() && m as u128 > c as u128 * mp as u128 {
            c *= 2;
        }
        if c > grid.max_constant() {
            return Ok(MeasureComparison::Violation { set_name: name, ratio: r });
        }
    }
    Ok(MeasureComparison::Constant { c, worst_ratio: worst })
}

/// Checks `B(f(x), r/C2 − C1) ⊆ [f(B(x, r))]_{C1} ⊆ B(f(x), C2 r + C1)`,
/// with `r` in domain scaled units and the radii converted to the codomain.
pub fn ball_sandwich(map: &CoarseMap, x: VertexId, r: Length, budget: Budget) -> Result<bool> {
    let (s, sp) = (map.domain.scale() as u128, map.codomain.scale() as u128);
    let (cn, cd) = (*map.c2.numer() as u128, *map.c2.denom() as u128);
    let r = r as u128;
    // r / C2 in codomain units, rounded down; C2 r rounded up
    let inner = (r * sp * cd / (s * cn)).saturating_sub(map.c1 as u128);
    let outer = (r * sp * cn).div_ceil(s * cd) + map.c1 as u128;
    let fx = map.apply(x);
    let thick = thicken_image(map, &ball(map.domain, x, r as Length, budget)?, map.c1, budget)?;
    let small = ball(map.codomain, fx, inner as Length, budget)?;
    let big = ball(map.codomain, fx, outer as Length, budget)?;
    Ok(small.is_subset(&thick) && thick.is_subset(&big))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::Lattice;

    const B: Budget = Budget::new(1_000_000);

    fn p(c: &[i64]) -> VertexId {
        VertexId::point(c)
    }

    #[test]
    fn identity_is_an_isometry() {
        let z2 = Lattice::new(2, 1);
        let id = CoarseMap::identity(&z2);
        let a = SubsetRegion::counted([p(&[0, 0]), p(&[1, 0])]);
        assert_eq!(thicken_image(&id, &a, 0, B).unwrap().sorted(), a.sorted());
        assert!(thicken_image(&id, &SubsetRegion::empty(), 3, B).unwrap().is_empty());
        let pairs = [(p(&[0, 0]), p(&[3, 4])), (p(&[1, 1]), p(&[-2, 0]))];
        let caps = Caps { domain: 20, codomain: 20 };
        let est = estimate_qi_constants(&id, &pairs, &[p(&[5, 5])], caps, Grid::default(), B).unwrap();
        assert_eq!(est, QiEstimate::Constants { c1: Some(0), c2: 1, c3: (1, 1) });
        let fam = FamilySpec::new("pair").with("a", a.clone()).with("b", ball(&z2, p(&[0, 0]), 3, B).unwrap());
        let t = verify_boundary_transport(&id, &fam, 1, 1, B).unwrap();
        assert_eq!(t.k, 1.0);
        assert_eq!(
            verify_measure_comparison(&id, &fam, Grid::default(), B).unwrap(),
            MeasureComparison::Constant { c: 1, worst_ratio: 1.0 }
        );
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with("set-name,mu_boundary_src,mu_boundary_img,ratio\na,"));
        assert!(ball_sandwich(&id, p(&[0, 0]), 4, B).unwrap());
    }

    #[test]
    fn constant_map_is_refuted() {
        let z = Lattice::new(1, 1);
        let map = CoarseMap::constant(&z, &z, p(&[0]));
        let pairs = [(p(&[0]), p(&[1])), (p(&[0]), p(&[100]))];
        let caps = Caps { domain: 200, codomain: 200 };
        let est = estimate_qi_constants(&map, &pairs, &[], caps, Grid { max_exp: 3 }, B).unwrap();
        assert!(matches!(est, QiEstimate::Violation { d: 100, .. }));
        let fam = FamilySpec::new("big").with("seg", ball(&z, p(&[0]), 500, B).unwrap());
        assert!(matches!(
            verify_measure_comparison(&map, &fam, Grid { max_exp: 8 }, B).unwrap(),
            MeasureComparison::Violation { .. }
        ));
    }

    #[test]
    fn reweighting_changes_units_only() {
        let fine = Lattice::new(2, 1);
        let coarse = Lattice::new(2, 100);
        let map = CoarseMap::forgetful(&fine, &coarse);
        let pairs = [(p(&[0, 0]), p(&[7, -2]))];
        let caps = Caps { domain: 50, codomain: 5000 };
        let est = estimate_qi_constants(&map, &pairs, &[p(&[1, 1])], caps, Grid::default(), B).unwrap();
        assert!(matches!(est, QiEstimate::Constants { c2: 1, .. }));
        let map = map.with_constants(0, Ratio::from_integer(1), Ratio::from_integer(1));
        assert!(ball_sandwich(&map, p(&[0, 0]), 3, B).unwrap());
    }
}
