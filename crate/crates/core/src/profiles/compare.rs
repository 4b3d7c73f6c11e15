//! The domination preorder `f ⪯ g ⟺ ∃ C1, C2: f(t) ≤ C1·g(C2·t)` on sampled
//! curves, decided over a finite grid of constants.

use serde::{Deserialize, Serialize};

use super::phi::phi_from_growth;
use super::{ProfileCurve, ProfileKind};
use crate::error::{Error, Result};
use crate::space::GrowthCurve;

/// How a sampled curve is read between its sample points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lookup {
    /// Value at the next sample `≥ t`, as for an infimum over `μ(A) ≥ t`.
    Ceil,
    /// Value at the previous sample `≤ t`, as for growth or a supremum.
    Floor,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveShape {
    /// Points sorted by `t`.
    Sampled(Vec<(f64, f64)>),
    /// `coeff · t^exponent` on `[t_min, t_max]`.
    Power {
        coeff: f64,
        exponent: f64,
        t_min: f64,
        t_max: f64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub label: String,
    pub shape: CurveShape,
    pub lookup: Lookup,
}

/// Sample count used when neither curve carries its own sample points.
const ANALYTIC_SAMPLES: usize = 64;

impl Curve {
    pub fn sampled(label: impl Into<String>, mut points: Vec<(f64, f64)>, lookup: Lookup) -> Self {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        Curve {
            label: label.into(),
            shape: CurveShape::Sampled(points),
            lookup,
        }
    }

    pub fn power(label: impl Into<String>, coeff: f64, exponent: f64, t_min: f64, t_max: f64) -> Self {
        Curve {
            label: label.into(),
            shape: CurveShape::Power {
                coeff,
                exponent,
                t_min,
                t_max,
            },
            lookup: Lookup::Floor,
        }
    }

    pub fn from_profile(p: &ProfileCurve) -> Self {
        let lookup = match p.kind {
            ProfileKind::FamilyUpper => Lookup::Floor,
            _ => Lookup::Ceil,
        };
        let points = p.points.iter().map(|&(t, v)| (t as f64, v as f64)).collect();
        Curve::sampled(format!("{:?} h={}", p.kind, p.h), points, lookup)
    }

    /// `r ↦ V(r)` with radii in true length units.
    pub fn from_growth(g: &GrowthCurve) -> Self {
        let s = g.scale as f64;
        let points = g
            .points
            .iter()
            .map(|&(r, v)| (r as f64 / s, v as f64))
            .collect();
        Curve::sampled(format!("V around {}", g.center), points, Lookup::Floor)
    }

    pub fn range(&self) -> Option<(f64, f64)> {
        match &self.shape {
            CurveShape::Sampled(p) => Some((p.first()?.0, p.last()?.0)),
            CurveShape::Power { t_min, t_max, .. } => Some((*t_min, *t_max)),
        }
    }

    fn sample_ts(&self) -> Option<Vec<f64>> {
        match &self.shape {
            CurveShape::Sampled(p) => Some(p.iter().map(|q| q.0).collect()),
            CurveShape::Power { .. } => None,
        }
    }

    /// Value at `t`, holding the end values outside the sampled range.
    pub fn eval(&self, t: f64) -> f64 {
        match &self.shape {
            CurveShape::Power {
                coeff,
                exponent,
                t_min,
                t_max,
            } => coeff * t.clamp(*t_min, *t_max).powf(*exponent),
            CurveShape::Sampled(p) => {
                let i = p.partition_point(|q| q.0 < t);
                let exact = i < p.len() && p[i].0 == t;
                let j = match self.lookup {
                    Lookup::Ceil => i.min(p.len() - 1),
                    Lookup::Floor if exact => i,
                    Lookup::Floor => i.saturating_sub(1),
                };
                p[j].1
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    /// Constants range over `2^0, …, 2^max_exp`.
    pub max_exp: u32,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { max_exp: 10 }
    }
}

impl Grid {
    pub fn max_constant(&self) -> u64 {
        1 << self.max_exp
    }

    /// Constant pairs ordered by total exponent, then by the first exponent.
    fn pairs(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let m = self.max_exp;
        (0..=2 * m).flat_map(move |s| {
            (s.saturating_sub(m)..=s.min(m)).map(move |k1| (1u64 << k1, 1u64 << (s - k1)))
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Dominates,
    Equivalent,
    Refuted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonWitness {
    pub relation: Relation,
    /// `[C1, C2]` for domination, `[C1, C2, C3, C4]` for equivalence, the
    /// grid maxima for a refutation.
    #[serde(rename = "C")]
    pub constants: Vec<u64>,
    pub range: (f64, f64),
    pub counterexample: Option<f64>,
    pub grid_max: u64,
}

fn common_range(f: &Curve, g: &Curve) -> Result<(f64, f64)> {
    let (a, b) = f.range().ok_or(Error::EmptyCurve)?;
    let (c, d) = g.range().ok_or(Error::EmptyCurve)?;
    let (lo, hi) = (a.max(c), b.min(d));
    if lo > hi {
        return Err(Error::invalid(format!(
            "curves {} and {} do not overlap",
            f.label, g.label
        )));
    }
    Ok((lo, hi))
}

fn check_points(f: &Curve, g: &Curve, range: (f64, f64)) -> Vec<f64> {
    let ts = f.sample_ts().or_else(|| g.sample_ts()).unwrap_or_else(|| {
        let (lo, hi) = (range.0.max(f64::MIN_POSITIVE), range.1);
        let n = ANALYTIC_SAMPLES;
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64))
            .collect()
    });
    ts.into_iter()
        .filter(|t| *t >= range.0 && *t <= range.1)
        .collect()
}

/// The sampled `t` with the worst ratio `f(t) / (c1·g(c2·t))` among those
/// violating `f(t) ≤ c1·g(c2·t)`, or `None` if the inequality holds on the
/// common range.
pub fn check_pair(f: &Curve, g: &Curve, c1: u64, c2: u64) -> Result<Option<f64>> {
    let range = common_range(f, g)?;
    Ok(worst_violation(f, g, c1, c2, &check_points(f, g, range)))
}

fn worst_violation(f: &Curve, g: &Curve, c1: u64, c2: u64, ts: &[f64]) -> Option<f64> {
    let mut worst: Option<(f64, f64)> = None;
    for &t in ts {
        let lhs = f.eval(t);
        let rhs = c1 as f64 * g.eval(c2 as f64 * t);
        if lhs <= rhs {
            continue;
        }
        let ratio = if rhs > 0.0 { lhs / rhs } else { f64::INFINITY };
        if worst.is_none_or(|(_, r)| ratio > r) {
            worst = Some((t, ratio));
        }
    }
    worst.map(|w| w.0)
}

/// Decides `f ⪯ g` over the grid: the first constant pair (by total
/// exponent) that works, or a refutation at the grid's maximal constants.
pub fn compare(f: &Curve, g: &Curve, grid: Grid) -> Result<ComparisonWitness> {
    let range = common_range(f, g)?;
    let ts = check_points(f, g, range);
    for (c1, c2) in grid.pairs() {
        if worst_violation(f, g, c1, c2, &ts).is_none() {
            return Ok(ComparisonWitness {
                relation: Relation::Dominates,
                constants: vec![c1, c2],
                range,
                counterexample: None,
                grid_max: grid.max_constant(),
            });
        }
    }
    let m = grid.max_constant();
    Ok(ComparisonWitness {
        relation: Relation::Refuted,
        constants: vec![m, m],
        range,
        counterexample: worst_violation(f, g, m, m, &ts),
        grid_max: m,
    })
}

/// Decides `f ≈ g`, i.e. `f ⪯ g` and `g ⪯ f`.
pub fn compare_equivalent(f: &Curve, g: &Curve, grid: Grid) -> Result<ComparisonWitness> {
    let fwd = compare(f, g, grid)?;
    let back = compare(g, f, grid)?;
    let m = grid.max_constant();
    for w in [&fwd, &back] {
        if w.relation == Relation::Refuted {
            return Ok(ComparisonWitness {
                relation: Relation::Refuted,
                constants: vec![m, m, m, m],
                range: fwd.range,
                counterexample: w.counterexample,
                grid_max: m,
            });
        }
    }
    let mut constants = fwd.constants;
    constants.extend(back.constants);
    Ok(ComparisonWitness {
        relation: Relation::Equivalent,
        constants,
        range: fwd.range,
        counterexample: None,
        grid_max: m,
    })
}

/// Tests the strong isoperimetric inequality `I ⪰ id/φ`, i.e.
/// `t/φ(t) ⪯ I(t)`, with `φ` measured in true length units.
///
/// Only `t` sampled by the profile and reachable by the growth curve are
/// used; `t` with `φ(t) = 0` are skipped. For a family profile this
/// certifies the family side only.
pub fn strong_profile_check(
    profile: &ProfileCurve,
    growth: &GrowthCurve,
    grid: Grid,
) -> Result<ComparisonWitness> {
    let phi = phi_from_growth(growth)?;
    let s = growth.scale as f64;
    let mut points = Vec::new();
    for &(t, _) in &profile.points {
        match phi.at(t) {
            Ok(0) => {}
            Ok(r) => points.push((t as f64, t as f64 * s / r as f64)),
            Err(Error::OutOfRange { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    if points.is_empty() {
        return Err(Error::invalid(
            "no profile sample lies within the growth curve's range",
        ));
    }
    let f = Curve::sampled("t/phi(t)", points, Lookup::Floor);
    compare(&f, &Curve::from_profile(profile), grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(label: &str, slope: f64, n: u64) -> Curve {
        Curve::sampled(
            label,
            (1..=n).map(|t| (t as f64, slope * t as f64)).collect(),
            Lookup::Ceil,
        )
    }

    #[test]
    fn reflexive() {
        let f = lin("f", 1.0, 50);
        let w = compare(&f, &f, Grid::default()).unwrap();
        assert_eq!(w.relation, Relation::Dominates);
        assert_eq!(w.constants, vec![1, 1]);
        let e = compare_equivalent(&f, &f, Grid::default()).unwrap();
        assert_eq!(e.constants, vec![1, 1, 1, 1]);
    }

    #[test]
    fn pointwise_bound() {
        let w = compare(&lin("t", 1.0, 50), &lin("2t", 2.0, 50), Grid::default()).unwrap();
        assert_eq!((w.relation, w.constants), (Relation::Dominates, vec![1, 1]));
        let back = compare(&lin("2t", 2.0, 50), &lin("t", 1.0, 50), Grid::default()).unwrap();
        // holding the end value of t at 50 forces C1 = 2
        assert_eq!(back.constants, vec![2, 1]);
    }

    #[test]
    fn linear_versus_square_root() {
        let ts: Vec<f64> = (0..=60)
            .map(|i| (4.0f64 * (1e6f64 / 4.0).powf(i as f64 / 60.0)).round())
            .collect();
        let f = Curve::sampled("t", ts.iter().map(|&t| (t, t)).collect(), Lookup::Floor);
        let g = Curve::sampled("sqrt", ts.iter().map(|&t| (t, t.sqrt())).collect(), Lookup::Floor);
        // holding g at its end value, f(t) ≤ C1·g(C2·t) needs C1 ≥ 1000 at t = 10^6
        let w = compare(&f, &g, Grid { max_exp: 9 }).unwrap();
        assert_eq!(w.relation, Relation::Refuted);
        assert_eq!(w.counterexample, Some(1e6));
        let w = compare(&f, &g, Grid::default()).unwrap();
        assert_eq!((w.relation, w.constants), (Relation::Dominates, vec![1024, 1]));
    }

    #[test]
    fn power_curves() {
        let f = Curve::power("t", 1.0, 1.0, 1.0, 1e4);
        let g = Curve::power("t^2", 1.0, 2.0, 1.0, 1e4);
        assert_eq!(compare(&f, &g, Grid::default()).unwrap().constants, vec![1, 1]);
        assert_eq!(
            compare(&g, &f, Grid::default()).unwrap().relation,
            Relation::Refuted
        );
    }

    #[test]
    fn lookups() {
        let c = Curve::sampled("c", vec![(2.0, 5.0), (4.0, 7.0)], Lookup::Ceil);
        assert_eq!(c.eval(3.0), 7.0);
        assert_eq!(c.eval(1.0), 5.0);
        assert_eq!(c.eval(9.0), 7.0);
        let f = Curve { lookup: Lookup::Floor, ..c };
        assert_eq!(f.eval(3.0), 5.0);
        assert_eq!(f.eval(4.0), 7.0);
        assert_eq!(f.eval(1.0), 5.0);
    }

    #[test]
    fn disjoint_ranges_are_rejected() {
        let f = Curve::sampled("a", vec![(1.0, 1.0)], Lookup::Ceil);
        let g = Curve::sampled("b", vec![(5.0, 1.0)], Lookup::Ceil);
        assert!(compare(&f, &g, Grid::default()).is_err());
    }
}
