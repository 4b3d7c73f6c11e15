use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::plot::PlotCurve;
use super::report::{Report, Rule, Table};
use crate::coarse::{
    estimate_qi_constants, verify_boundary_transport, verify_measure_comparison, Caps, CoarseMap,
    MeasureComparison, QiEstimate,
};
use crate::error::{Error, Result};
use crate::generators::weighted_plane::{r_k, root, SCALE};
use crate::generators::{
    Constricted, ConstrictedSpace, CubeChain, CubeChainParams, CubeChainSpace, GluedTrees,
    GluedTreesParams, GrowthMap, IbPair, LatticeBox, LatticeFamilyParams, Perforated,
    PerforatedSpace, ScaleFn, VonKoch, VonKochParams, RATIO,
};
use crate::profiles::{
    annulus_inf_check, compare_equivalent, exact_profile, family_profile, strong_profile_check,
    Curve, FamilySpec, Grid, Mode, ProfileCurve, Relation,
};
use crate::space::{
    ball, distance_to_complement, distances_from, growth_curve, h_boundary, is_connected,
    sphere, Budget, FiniteSpace, Lattice, Length, Space, SubsetRegion, VertexId,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentName {
    TreeLinearGrowth,
    VonkochSpheres,
    VonkochGeodesics,
    PerforatedNonstrong,
    ConstrictedShape,
    IbPairContrast,
    CubeChainConnected,
    OracleHIndependence,
    AnnulusBound,
    TransportTh1,
    ConnectedEqualityPoints,
}

impl ExperimentName {
    pub const ALL: [ExperimentName; 11] = [
        ExperimentName::TreeLinearGrowth,
        ExperimentName::VonkochSpheres,
        ExperimentName::VonkochGeodesics,
        ExperimentName::PerforatedNonstrong,
        ExperimentName::ConstrictedShape,
        ExperimentName::IbPairContrast,
        ExperimentName::CubeChainConnected,
        ExperimentName::OracleHIndependence,
        ExperimentName::AnnulusBound,
        ExperimentName::TransportTh1,
        ExperimentName::ConnectedEqualityPoints,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExperimentName::TreeLinearGrowth => "tree_linear_growth",
            ExperimentName::VonkochSpheres => "vonkoch_spheres",
            ExperimentName::VonkochGeodesics => "vonkoch_geodesics",
            ExperimentName::PerforatedNonstrong => "perforated_nonstrong",
            ExperimentName::ConstrictedShape => "constricted_shape",
            ExperimentName::IbPairContrast => "ib_pair_contrast",
            ExperimentName::CubeChainConnected => "cube_chain_connected",
            ExperimentName::OracleHIndependence => "oracle_h_independence",
            ExperimentName::AnnulusBound => "annulus_bound",
            ExperimentName::TransportTh1 => "transport_th1",
            ExperimentName::ConnectedEqualityPoints => "connected_equality_points",
        }
    }

    /// The statement the experiment checks.
    pub fn claim(&self) -> &'static str {
        match self {
            ExperimentName::TreeLinearGrowth => {
                "chained glued trees grow linearly with |B(x,r)| <= 8r, yet boundaries of balls at the roots are unbounded"
            }
            ExperimentName::VonkochSpheres => {
                "in the weighted plane mu(S(a_k,r_k)) >= 3^(k-1) >= r_k^(log 3/log 2)"
            }
            ExperimentName::VonkochGeodesics => {
                "tree geodesics from a_k are geodesics of the weighted plane, and |u-v| >= (d_A(u,a_k) - d_A(v,a_k))/50 on A_k"
            }
            ExperimentName::PerforatedNonstrong => {
                "u_n = |A_n|/|dA_n|^(d/(d-1)) tends to infinity, so the perforated lattice has no strong profile"
            }
            ExperimentName::ConstrictedShape => {
                "equator points of C_n lie within 2 log n of the complement, poles at distance >= n/2, and C_n is metrically connected"
            }
            ExperimentName::IbPairContrast => {
                "the balls A_n of X have bounded boundary while the ball profile of X' is equivalent to t^((d-1)/d)"
            }
            ExperimentName::CubeChainConnected => {
                "at t = N_n the union of level-n cubes has a smaller boundary than connected sets of that volume, by a growing factor"
            }
            ExperimentName::OracleHIndependence => "the profiles at h = 2S and h = 4S are equivalent",
            ExperimentName::AnnulusBound => {
                "inf over r <= r' <= 2r of mu(C_{r'-1,r'}(x)) <= C mu(B(x,r))/r"
            }
            ExperimentName::TransportTh1 => {
                "a large-scale equivalence satisfies mu'(d[f(A)]_C) <= K mu(dA) and mu(A) <= C mu'([f(A)]_C)"
            }
            ExperimentName::ConnectedEqualityPoints => {
                "on a space with sublinear profile the connected profile equals the profile at some t"
            }
        }
    }
}

impl std::fmt::Display for ExperimentName {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ExperimentName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| Error::invalid(format!("unknown experiment {s}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentBudget {
    pub max_vertices: usize,
    /// Checked once the run returns; an overrun marks the report failed.
    pub wall_clock_secs: Option<u64>,
}

impl Default for ExperimentBudget {
    fn default() -> Self {
        ExperimentBudget {
            max_vertices: Budget::default().max_vertices,
            wall_clock_secs: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub name: ExperimentName,
    #[serde(default = "empty_object")]
    pub params: Value,
    #[serde(default)]
    pub budget: ExperimentBudget,
}

fn empty_object() -> Value {
    json!({})
}

impl ExperimentSpec {
    pub fn new(name: ExperimentName) -> Self {
        ExperimentSpec {
            name,
            params: empty_object(),
            budget: ExperimentBudget::default(),
        }
    }

    pub fn with_params(mut self, params: Value) -> Self {
        self.params = params;
        self
    }
}

/// Runs a named experiment.
///
/// Invalid parameters are errors. Running out of budget is not: the report
/// comes back failed with the reason recorded.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Report> {
    let started = std::time::Instant::now();
    let budget = Budget::new(spec.budget.max_vertices);
    let params = if spec.params.is_null() {
        empty_object()
    } else {
        spec.params.clone()
    };
    let outcome = match spec.name {
        ExperimentName::TreeLinearGrowth => tree_linear_growth(parse(params)?, budget),
        ExperimentName::VonkochSpheres => vonkoch_spheres(parse(params)?, budget),
        ExperimentName::VonkochGeodesics => vonkoch_geodesics(parse(params)?, budget),
        ExperimentName::PerforatedNonstrong => perforated_nonstrong(parse(params)?, budget),
        ExperimentName::ConstrictedShape => constricted_shape(parse(params)?, budget),
        ExperimentName::IbPairContrast => ib_pair_contrast(parse(params)?, budget),
        ExperimentName::CubeChainConnected => cube_chain_connected(parse(params)?, budget),
        ExperimentName::OracleHIndependence => oracle_h_independence(parse(params)?),
        ExperimentName::AnnulusBound => annulus_bound(parse(params)?, budget),
        ExperimentName::TransportTh1 => transport_th1(parse(params)?, budget),
        ExperimentName::ConnectedEqualityPoints => connected_equality_points(parse(params)?),
    };
    let mut report = match outcome {
        Ok(r) => r,
        Err(Error::BudgetExceeded { limit }) => {
            let mut r = Report::new(spec.name.as_str(), spec.name.claim(), spec.params.clone());
            r.failure = Some(format!("budget exceeded: more than {limit} vertices explored"));
            r.budget_exceeded = true;
            r.finish()?
        }
        Err(e) => return Err(e),
    };
    report.runtime = started.elapsed();
    if let Some(cap) = spec.budget.wall_clock_secs {
        if report.runtime.as_secs_f64() > cap as f64 && report.failure.is_none() {
            report.failure = Some(format!("wall-clock budget of {cap} s exceeded"));
            report.budget_exceeded = true;
            report.passed = false;
        }
    }
    Ok(report)
}

fn parse<P: DeserializeOwned>(params: Value) -> Result<P> {
    serde_json::from_value(params).map_err(|e| Error::invalid(format!("bad params: {e}")))
}

fn start<P: Serialize>(name: ExperimentName, params: &P) -> Result<Report> {
    Ok(Report::new(name.as_str(), name.claim(), serde_json::to_value(params)?))
}

fn rule_lt(table: &str, lhs: &str, rhs: &str) -> Rule {
    Rule::Lt { table: table.into(), lhs: lhs.into(), rhs: rhs.into() }
}

fn rule_le(table: &str, lhs: &str, rhs: &str) -> Rule {
    Rule::Le { table: table.into(), lhs: lhs.into(), rhs: rhs.into() }
}

fn rule_eq(table: &str, lhs: &str, rhs: &str) -> Rule {
    Rule::Eq { table: table.into(), lhs: lhs.into(), rhs: rhs.into() }
}

fn rule_at_most(table: &str, column: &str, max: Value) -> Rule {
    Rule::AtMost { table: table.into(), column: column.into(), max }
}

fn rule_at_least(table: &str, column: &str, min: Value) -> Rule {
    Rule::AtLeast { table: table.into(), column: column.into(), min }
}

fn rule_equals(table: &str, column: &str, value: Value) -> Rule {
    Rule::Equals { table: table.into(), column: column.into(), value }
}

fn rule_all_true(table: &str, column: &str) -> Rule {
    Rule::AllTrue { table: table.into(), column: column.into() }
}

fn rule_increasing(table: &str, column: &str) -> Rule {
    Rule::StrictlyIncreasing { table: table.into(), column: column.into() }
}

fn relation_name(r: Relation) -> &'static str {
    match r {
        Relation::Dominates => "dominates",
        Relation::Equivalent => "equivalent",
        Relation::Refuted => "refuted",
    }
}

fn point(coords: &[i64]) -> VertexId {
    VertexId::point(coords)
}

// ---------------------------------------------------------------------------
// glued trees

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TreeGrowthParams {
    pub n_max: u32,
    pub ladder: u32,
    pub constant: u64,
}

impl Default for TreeGrowthParams {
    fn default() -> Self {
        TreeGrowthParams { n_max: 4, ladder: 50, constant: 8 }
    }
}

/// `max(i, round(diam^{i/steps}))` for `i = 1..=steps`, deduplicated.
pub fn radius_ladder(diam: Length, steps: u32) -> Vec<Length> {
    let mut out: Vec<Length> = (1..=steps as u64)
        .map(|i| {
            let geo = (diam as f64).powf(i as f64 / steps as f64).round() as u64;
            i.max(geo).min(diam)
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Radius from `r_n` that stops one step short of the last generation.
pub fn root_radius(n: u32) -> Length {
    (1..=n).map(|k| 1u64 << (1u64 << (n - k))).sum::<u64>() - 1
}

fn tree_linear_growth(p: TreeGrowthParams, budget: Budget) -> Result<Report> {
    let mut report = start(ExperimentName::TreeLinearGrowth, &p)?;
    let g = GluedTrees::new(&GluedTreesParams { n_max: p.n_max, scale: 1 }, budget)?;
    let space = g.space();
    let s = space.scale();
    let vertices = space.finite_vertices().expect("finite").to_vec();
    use rayon::prelude::*;
    let sorted: Vec<(VertexId, Vec<Length>)> = vertices
        .par_iter()
        .map(|&x| {
            let map = distances_from(space, [x], Length::MAX / 4, budget)?;
            let mut d: Vec<Length> = map.dist.values().copied().collect();
            d.sort_unstable();
            Ok((x, d))
        })
        .collect::<Result<_>>()?;
    let diam = sorted.iter().map(|(_, d)| *d.last().unwrap()).max().unwrap_or(0);
    let ladder = radius_ladder(diam, p.ladder);
    let mut balls = Table::new("balls", &["r", "worst_center", "max_volume_times_s", "bound"]);
    for &r in &ladder {
        let (x, vol) = sorted
            .iter()
            .map(|(x, d)| (*x, d.partition_point(|v| *v <= r) as u64))
            .max_by_key(|(x, v)| (*v, std::cmp::Reverse(*x)))
            .expect("nonempty");
        balls.push(vec![json!(r), json!(x.to_string()), json!(vol * s), json!(p.constant * r)]);
    }
    let mut roots = Table::new("root_balls", &["n", "radius", "ball_measure", "boundary"]);
    let mut series = Vec::new();
    for n in 1..=p.n_max {
        let rho = root_radius(n) * s;
        let b = ball(space, g.root(n), rho, budget)?;
        let bd = h_boundary(space, &b, s, budget)?.measure();
        roots.push(vec![json!(n), json!(rho), json!(b.measure()), json!(bd)]);
        series.push((n as f64, bd as f64));
    }
    report.constants.insert("vertices".into(), json!(vertices.len()));
    report.constants.insert("diameter".into(), json!(diam));
    report.series.push(PlotCurve::new(
        "max |B(x,r)|",
        balls
            .rows
            .iter()
            .map(|r| (r[0].as_f64().unwrap(), r[2].as_f64().unwrap() / s as f64))
            .collect(),
    ));
    report.series.push(PlotCurve::new("boundary of root balls", series));
    report.tables.push(balls);
    report.tables.push(roots);
    report.assert("balls are at most linear", rule_le("balls", "max_volume_times_s", "bound"));
    report.assert("root ball boundaries grow", rule_increasing("root_balls", "boundary"));
    report.finish()
}

// ---------------------------------------------------------------------------
// weighted plane

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpheresParams {
    pub k_list: Vec<u32>,
}

impl Default for SpheresParams {
    fn default() -> Self {
        SpheresParams { k_list: vec![3, 4, 5, 6] }
    }
}

/// Decides `mu ≥ (p/scale)^{log2 3}` with integers only.
///
/// Below one true unit the right side is below 1. Otherwise it is enough
/// that `mu^5 · scale^8 ≥ p^8`, since `8/5 > log2 3`. A `false` means the
/// certificate failed, which is conservative.
pub fn exceeds_log3_power(mu: u64, p: Length, scale: Length) -> bool {
    if p < scale {
        return mu >= 1;
    }
    let lhs = (mu as u128)
        .checked_pow(5)
        .and_then(|m| m.checked_mul((scale as u128).pow(8)));
    match (lhs, (p as u128).checked_pow(8)) {
        (_, None) => false,
        (None, Some(_)) => true,
        (Some(l), Some(r)) => l >= r,
    }
}

fn vonkoch_spheres(p: SpheresParams, budget: Budget) -> Result<Report> {
    let mut report = start(ExperimentName::VonkochSpheres, &p)?;
    let k_max = p.k_list.iter().copied().max().ok_or_else(|| Error::invalid("k_list is empty"))?;
    let y = VonKoch::new(&VonKochParams { k_max }, budget)?;
    let mut t = Table::new(
        "spheres",
        &["k", "r_k", "sphere_measure", "three_power", "tree_sphere", "tree_sphere_inside", "power_bound", "power_ok"],
    );
    for &k in &p.k_list {
        if k < 1 {
            return Err(Error::invalid("k must be at least 1"));
        }
        let rk = r_k(k);
        let shell = sphere(&y, root(k), rk, SCALE, budget)?;
        let tree_sphere = y.tree_sphere(k);
        let mu = shell.measure();
        t.push(vec![
            json!(k),
            json!(rk),
            json!(mu),
            json!(3u64.pow(k - 1)),
            json!(tree_sphere.len()),
            json!(tree_sphere.is_subset(&shell)),
            json!((rk as f64 / SCALE as f64).powf(3f64.log2())),
            json!(exceeds_log3_power(mu, rk, SCALE)),
        ]);
    }
    report.series.push(PlotCurve::new(
        "mu(S(a_k, r_k))",
        t.rows.iter().map(|r| (r[1].as_f64().unwrap() / SCALE as f64, r[2].as_f64().unwrap())).collect(),
    ));
    report.tables.push(t);
    report.assert("S_k lies in the sphere", rule_all_true("spheres", "tree_sphere_inside"));
    report.assert("sphere measure is at least 3^(k-1)", rule_le("spheres", "three_power", "sphere_measure"));
    report.assert("sphere measure is at least r_k^(log2 3)", rule_all_true("spheres", "power_ok"));
    report.finish()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeodesicsParams {
    pub k_max: u32,
    pub pairs: u32,
    pub seed: u64,
}

impl Default for GeodesicsParams {
    fn default() -> Self {
        GeodesicsParams { k_max: 5, pairs: 10_000, seed: 0x5eed }
    }
}

fn vonkoch_geodesics(p: GeodesicsParams, budget: Budget) -> Result<Report> {
    let mut report = start(ExperimentName::VonkochGeodesics, &p)?;
    report.seed = Some(p.seed);
    let y = VonKoch::new(&VonKochParams { k_max: p.k_max }, budget)?;
    let mut geo = Table::new("geodesics", &["k", "tree_size", "mismatches", "max_depth"]);
    let mut trees = Vec::new();
    for k in 1..=p.k_max {
        let tree = y.tree(k).sorted();
        let map = distances_from(&y, [root(k)], r_k(k), budget)?;
        let mut mismatches = 0u64;
        let mut max_depth = 0;
        for x in &tree {
            let depth = y.tree_position(x).expect("tree point").1;
            max_depth = max_depth.max(depth);
            if map.get(x) != Some(depth) {
                mismatches += 1;
            }
        }
        geo.push(vec![json!(k), json!(tree.len()), json!(mismatches), json!(max_depth)]);
        trees.push(tree);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let mut lemma = BTreeMap::<u32, (u64, u64, i64)>::new();
    for _ in 0..p.pairs {
        let k = rng.gen_range(1..=p.k_max);
        let tree = &trees[k as usize - 1];
        let u = tree[rng.gen_range(0..tree.len())];
        let v = tree[rng.gen_range(0..tree.len())];
        let du = y.tree_position(&u).expect("tree point").1 as i64;
        let dv = y.tree_position(&v).expect("tree point").1 as i64;
        let slack = 50 * u.l1(&v) as i64 - (du - dv);
        let e = lemma.entry(k).or_insert((0, 0, i64::MAX));
        e.0 += 1;
        e.1 += u64::from(slack < 0);
        e.2 = e.2.min(slack);
    }
    let mut lt = Table::new("lemma", &["k", "pairs", "violations", "min_slack"]);
    for (k, (n, bad, slack)) in lemma {
        lt.push(vec![json!(k), json!(n), json!(bad), json!(slack)]);
    }
    report.tables.push(geo);
    report.tables.push(lt);
    report.assert("tree distance equals plane distance", rule_equals("geodesics", "mismatches", json!(0)));
    report.assert("the /50 inequality holds on samples", rule_equals("lemma", "violations", json!(0)));
    report.finish()
}

// ---------------------------------------------------------------------------
// perforated boxes

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerforatedParams {
    pub d: usize,
    pub n_list: Vec<u32>,
    pub grid_max_exp: u32,
}

impl Default for PerforatedParams {
    fn default() -> Self {
        PerforatedParams { d: 2, n_list: vec![4, 9, 16, 25], grid_max_exp: 10 }
    }
}

/// Smallest `r` whose `L1` ball in `Z^d` holds at least `target` points.
pub fn l1_radius_for(d: usize, target: u64) -> Length {
    let mut r = 0;
    while l1_ball_volume(d, r) < target {
        r += 1;
    }
    r
}

/// Lattice points of an `L1` ball of radius `r` in `Z^d`.
pub fn l1_ball_volume(d: usize, r: u64) -> u64 {
    // sum over k of 2^k C(d,k) C(r,k)
    let mut total = 0u64;
    for k in 0..=d.min(r as usize) as u64 {
        let mut cd = 1u64;
        let mut cr = 1u64;
        for j in 0..k {
            cd = cd * (d as u64 - j) / (j + 1);
            cr = cr * (r - j) / (j + 1);
        }
        total += (1 << k) * cd * cr;
    }
    total
}

fn perforated_nonstrong(p: PerforatedParams, budget: Budget) -> Result<Report> {
    let mut report = start(ExperimentName::PerforatedNonstrong, &p)?;
    let fam = LatticeFamilyParams { d: p.d, n_list: p.n_list.clone() };
    let space = PerforatedSpace::new(Perforated::new(&fam, budget)?);
    let mut t = Table::new("boxes", &["n", "volume", "boundary", "boundary_generator", "u"]);
    let mut family = FamilySpec::new("A_n");
    let exponent = p.d as f64 / (p.d as f64 - 1.0);
    for &n in space.ns() {
        let a = space.set(n)?;
        let bd = h_boundary(&space, &a, 1, budget)?.measure();
        let u = a.measure() as f64 / (bd as f64).powf(exponent);
        t.push(vec![json!(n), json!(a.measure()), json!(bd), json!(space.boundary_count(n)?), json!(u)]);
        family.push(format!("A_{n}"), a);
    }
    let profile = family_profile(&space, &family, 1, Mode::Lower, budget)?;
    let t_max = profile.points.last().map(|q| q.0).unwrap_or(1);
    let far = {
        let mut c = vec![0i64; p.d];
        c[0] = -(1i64 << 20);
        point(&c)
    };
    let radii: Vec<Length> = (0..=l1_radius_for(p.d, 2 * t_max)).collect();
    let growth = growth_curve(&space, far, &radii, budget)?;
    let w = strong_profile_check(&profile, &growth, Grid { max_exp: p.grid_max_exp })?;
    let mut sc = Table::new("strong_check", &["relation", "c1", "c2", "grid_max", "counterexample"]);
    sc.push(vec![
        json!(relation_name(w.relation)),
        json!(w.constants[0]),
        json!(w.constants[1]),
        json!(w.grid_max),
        json!(w.counterexample),
    ]);
    report.series.push(PlotCurve::new(
        "u_n",
        t.rows.iter().map(|r| (r[0].as_f64().unwrap(), r[4].as_f64().unwrap())).collect(),
    ));
    report.tables.push(t);
    report.tables.push(sc);
    report.assert("u_n strictly increases", rule_increasing("boxes", "u"));
    report.assert("measured boundary matches the construction", rule_eq("boxes", "boundary", "boundary_generator"));
    report.assert("the strong profile check is refuted", rule_equals("strong_check", "relation", json!("refuted")));
    report.finish()
}

// ---------------------------------------------------------------------------
// constricted balls

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstrictedParams {
    pub d: usize,
    pub n_list: Vec<u32>,
    pub gap: Length,
}

impl Default for ConstrictedParams {
    fn default() -> Self {
        ConstrictedParams { d: 2, n_list: vec![8, 16, 32], gap: 10 }
    }
}

/// `⌊2 log₂ n⌋ + 4`, computed as the bit length of `n²`.
pub fn equator_bound(n: u32) -> u64 {
    let sq = (n as u64) * (n as u64);
    (63 - sq.leading_zeros() as u64) + 4
}

fn constricted_shape(p: ConstrictedParams, budget: Budget) -> Result<Report> {
    let mut report = start(ExperimentName::ConstrictedShape, &p)?;
    let fam = LatticeFamilyParams { d: p.d, n_list: p.n_list.clone() };
    let space = ConstrictedSpace::new(Constricted::new(&fam, budget)?);
    let mut eq = Table::new("equator", &["n", "points", "max_distance", "bound"]);
    let mut poles = Table::new("poles", &["n", "pole", "distance", "twice_distance"]);
    let mut conn = Table::new("connectivity", &["n", "measure", "connected"]);
    for &n in space.ns() {
        let c = space.set(n)?;
        let bound = equator_bound(n);
        let equator = space.equator(n)?;
        let mut worst: Option<Length> = Some(0);
        for x in &equator {
            let d = distance_to_complement(&space, &c, *x, bound, budget)?;
            worst = match (worst, d) {
                (Some(w), Some(d)) => Some(w.max(d)),
                _ => None,
            };
        }
        eq.push(vec![json!(n), json!(equator.len()), json!(worst), json!(bound)]);
        let (top, bottom) = space.poles(n);
        for (name, x) in [("top", top), ("bottom", bottom)] {
            let d = distance_to_complement(&space, &c, x, 8 * n as Length, budget)?;
            poles.push(vec![json!(n), json!(name), json!(d), json!(d.map(|d| 2 * d))]);
        }
        let connected = is_connected(&space, &c, p.gap, budget)?.is_connected();
        conn.push(vec![json!(n), json!(c.measure()), json!(connected)]);
    }
    report.tables.push(eq);
    report.tables.push(poles);
    report.tables.push(conn);
    report.assert("equator is close to the complement", rule_le("equator", "max_distance", "bound"));
    report.assert("poles are at distance at least n/2", rule_le("poles", "n", "twice_distance"));
    report.assert("C_n is metrically connected", rule_all_true("connectivity", "connected"));
    report.finish()
}

// ---------------------------------------------------------------------------
// the ball pair

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IbContrastParams {
    pub d: usize,
    pub n_list: Vec<u32>,
    pub grid_max_exp: u32,
    /// Balls of `X'` are sampled at radii `0..=max_radius`.
    pub max_radius: Length,
}

impl Default for IbContrastParams {
    fn default() -> Self {
        IbContrastParams { d: 2, n_list: (4..=9).collect(), grid_max_exp: 6, max_radius: 48 }
    }
}

fn ib_pair_contrast(p: IbContrastParams, budget: Budget) -> Result<Report> {
    let mut report = start(ExperimentName::IbPairContrast, &p)?;
    let fam = LatticeFamilyParams { d: p.d, n_list: p.n_list.clone() };
    let pair = IbPair::new(&fam, budget)?;
    let ns = pair.x.ns().to_vec();
    let mut xb = Table::new("x_boundaries", &["n", "measure", "boundary"]);
    for &n in &ns {
        let a = pair.x.set(n)?;
        let bd = h_boundary(&pair.x, &a, 1, budget)?.measure();
        xb.push(vec![json!(n), json!(a.measure()), json!(bd)]);
    }
    let mut centers: Vec<(String, VertexId)> = ns
        .iter()
        .map(|&n| Ok((format!("f(c_{n})"), pair.forward(pair.x.center(n)?))))
        .collect::<Result<_>>()?;
    let top = *ns.last().expect("nonempty");
    let mut free = pair.x.center(top)?.coords().to_vec();
    free[1] = 1 << 12;
    centers.push(("free".into(), pair.forward(point(&free))));
    let mut family = FamilySpec::new("balls of X'");
    for (label, c) in &centers {
        for r in 0..=p.max_radius {
            family.push(format!("B({label},{r})"), ball(&pair.x_prime, *c, r, budget)?);
        }
    }
    let profile = family_profile(&pair.x_prime, &family, 1, Mode::Lower, budget)?;
    let (t0, t1) = (profile.points[0].0 as f64, profile.points.last().unwrap().0 as f64);
    let exponent = (p.d as f64 - 1.0) / p.d as f64;
    let power = Curve::power("t^((d-1)/d)", 1.0, exponent, t0, t1);
    let w = compare_equivalent(&Curve::from_profile(&profile), &power, Grid { max_exp: p.grid_max_exp })?;
    let mut cmp = Table::new("comparison", &["relation", "c1", "c2", "c3", "c4", "max_constant"]);
    let c = &w.constants;
    cmp.push(vec![
        json!(relation_name(w.relation)),
        json!(c[0]),
        json!(c[1]),
        json!(c[2]),
        json!(c[3]),
        json!(c.iter().max()),
    ]);
    report.series.push(PlotCurve::from_profile("ball profile of X'", &profile));
    report.series.push(PlotCurve::new(
        "t^((d-1)/d)",
        profile.points.iter().map(|q| (q.0 as f64, (q.0 as f64).powf(exponent))).collect(),
    ));
    report.tables.push(xb);
    report.tables.push(profile_table("x_prime_profile", &profile));
    report.tables.push(cmp);
    report.assert("boundaries of A_n in X are constant", Rule::AllEqual {
        table: "x_boundaries".into(),
        column: "boundary".into(),
    });
    report.assert("the ball profile of X' is a power", rule_equals("comparison", "relation", json!("equivalent")));
    report.assert(
        "equivalence constants are within the grid",
        rule_at_most("comparison", "max_constant", json!(1u64 << p.grid_max_exp)),
    );
    report.finish()
}

fn profile_table(name: &str, p: &ProfileCurve) -> Table {
    let mut t = Table::new(name, &["t", "value"]);
    for &(x, v) in &p.points {
        t.push(vec![json!(x), json!(v)]);
    }
    t
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TransportParams {
    pub d: usize,
    pub n_list: Vec<u32>,
    /// Radii of the balls around the center of the largest `A_n`.
    pub radii: Vec<Length>,
    pub h: Length,
    pub h_image: Length,
    pub grid_max_exp: u32,
    pub pairs: u32,
    pub net_samples: u32,
    pub seed: u64,
}

impl Default for TransportParams {
    fn default() -> Self {
        TransportParams {
            d: 2,
            n_list: vec![4, 5, 6, 7],
            radii: vec![3, 7, 15],
            h: 1,
            h_image: 1,
            grid_max_exp: 8,
            pairs: 300,
            net_samples: 200,
            seed: 0x5eed,
        }
    }
}

fn transport_th1(p: TransportParams, budget: Budget) -> Result<Report> {
    let mut report = start(ExperimentName::TransportTh1, &p)?;
    report.seed = Some(p.seed);
    let fam = LatticeFamilyParams { d: p.d, n_list: p.n_list.clone() };
    let pair = IbPair::new(&fam, budget)?;
    let ns = pair.x.ns().to_vec();
    let top = *ns.last().expect("nonempty");
    let mut family = FamilySpec::new("A_n and balls");
    for &n in &ns {
        family.push(format!("A_{n}"), pair.x.set(n)?);
    }
    let center = pair.x.center(top)?;
    for &r in &p.radii {
        family.push(format!("B(c_{top},{r})"), ball(&pair.x, center, r, budget)?);
    }

    let map = CoarseMap::new(&pair.x, &pair.x_prime, |v| pair.forward(v))
        .with_inverse(|q| pair.nearest_preimage(q).unwrap_or(q));
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let members: Vec<Vec<VertexId>> = family.members.iter().map(|m| m.1.sorted()).collect();
    let pairs: Vec<(VertexId, VertexId)> = (0..p.pairs)
        .map(|_| {
            let m = &members[rng.gen_range(0..members.len())];
            (m[rng.gen_range(0..m.len())], m[rng.gen_range(0..m.len())])
        })
        .collect();
    let reach = RATIO as Length * (top as Length + p.radii.iter().copied().max().unwrap_or(0));
    let near = ball(&pair.x_prime, pair.forward(center), reach, budget)?.sorted();
    let net: Vec<VertexId> = (0..p.net_samples).map(|_| near[rng.gen_range(0..near.len())]).collect();
    let caps = Caps { domain: 8 * reach, codomain: 32 * reach };
    let grid = Grid { max_exp: p.grid_max_exp };
    let estimate = estimate_qi_constants(&map, &pairs, &net, caps, grid, budget)?;
    let mut qi = Table::new("qi", &["outcome", "c1", "c2", "c3"]);
    let (c1, c2, c3) = match &estimate {
        QiEstimate::Constants { c1, c2, c3 } => {
            qi.push(vec![json!("constants"), json!(c1), json!(c2), json!(format!("{}/{}", c3.0, c3.1))]);
            (c1.unwrap_or(0), *c2, *c3)
        }
        QiEstimate::Violation { x, y, d, d_image } => {
            qi.push(vec![json!("violation"), json!(null), json!(format!("{x} {y} {d} {d_image:?}")), json!(null)]);
            report.tables.push(qi);
            report.assert("the map is a quasi-isometry", rule_equals("qi", "outcome", json!("constants")));
            return report.finish();
        }
    };
    let map = map.with_constants(c1, Ratio::from_integer(c2), Ratio::new(c3.0, c3.1));
    let tr = verify_boundary_transport(&map, &family, p.h, p.h_image, budget)?;
    let mut rows = Table::new("transport", &["direction", "set", "mu_boundary_src", "mu_boundary_img", "ratio"]);
    for (dir, list) in [("forward", &tr.rows), ("reverse", &tr.reverse_rows)] {
        for r in list.iter() {
            rows.push(vec![
                json!(dir),
                json!(r.set_name),
                json!(r.mu_boundary_src),
                json!(r.mu_boundary_img),
                json!(r.ratio),
            ]);
        }
    }
    let mc = verify_measure_comparison(&map, &family, grid, budget)?;
    let measure_c = match mc {
        MeasureComparison::Constant { c, .. } => json!(c),
        MeasureComparison::Violation { .. } => json!(null),
    };
    let mut summary = Table::new("summary", &["thickening", "k", "reverse_k", "measure_c"]);
    summary.push(vec![json!(tr.thickening), json!(tr.k), json!(tr.reverse_k), measure_c]);
    report.constants.insert("c1".into(), json!(c1));
    report.constants.insert("c2".into(), json!(c2));
    report.tables.push(qi);
    report.tables.push(rows);
    report.tables.push(summary);
    let bound = json!(grid.max_constant());
    report.assert("the map is a quasi-isometry", rule_equals("qi", "outcome", json!("constants")));
    report.assert("forward transport constant K is bounded", rule_at_most("summary", "k", bound.clone()));
    report.assert("reverse transport constant is bounded", rule_at_most("summary", "reverse_k", bound.clone()));
    report.assert("measure comparison constant is bounded", rule_at_most("summary", "measure_c", bound));
    report.finish()
}

// ---------------------------------------------------------------------------
// cube chain

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CubeChainRunParams {
    pub d: usize,
    pub exact_n_max: u32,
    pub substituted: Option<SubstitutedRun>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubstitutedRun {
    pub side: GrowthMap,
    pub face: GrowthMap,
    pub n_max: u32,
    /// The ratio trend is asserted from this level on.
    pub trend_from: u32,
}

impl Default for CubeChainRunParams {
    fn default() -> Self {
        CubeChainRunParams {
            d: 2,
            exact_n_max: 3,
            substituted: Some(SubstitutedRun {
                side: GrowthMap::Pow2,
                face: GrowthMap::Linear,
                n_max: 7,
                trend_from: 2,
            }),
        }
    }
}

/// Boundary of the union of level-`n` cubes against the smallest boundary
/// among a ball and a free cube of at least `N_n` points, both placed at
/// negative first coordinate away from the chain.
fn cube_levels(chain: &CubeChain, d: usize, budget: Budget) -> Result<Vec<Vec<Value>>> {
    let space = CubeChainSpace::new(chain.clone());
    let mut rows = Vec::new();
    for level in chain.levels() {
        let n = level.n;
        let target = level.n_volume;
        let union = chain.level_union(n)?;
        let disconnected = h_boundary(&space, &union, 1, budget)?.measure();

        let r = l1_radius_for(d, target);
        let mut c = vec![0i64; d];
        c[0] = -(r as i64) - 3;
        let b = ball(&space, point(&c), r, budget)?;
        let ball_bd = h_boundary(&space, &b, 1, budget)?.measure();

        let mut s = 1u64;
        while s.pow(d as u32) < target {
            s += 1;
        }
        let mut bx = LatticeBox { lo: [0; 4], hi: [0; 4], dim: d };
        bx.lo[0] = -(s as i64) - 3;
        bx.hi[0] = -4;
        for i in 1..d {
            bx.lo[i] = -(s as i64 / 2);
            bx.hi[i] = bx.lo[i] + s as i64 - 1;
        }
        let cube = SubsetRegion::from_vertices(&space, bx.points());
        let cube_bd = h_boundary(&space, &cube, 1, budget)?.measure();

        let best = ball_bd.min(cube_bd);
        rows.push(vec![
            json!(n),
            json!(target),
            json!(disconnected),
            json!(b.measure()),
            json!(ball_bd),
            json!(cube.measure()),
            json!(cube_bd),
            json!(best),
            json!(best as f64 / disconnected.max(1) as f64),
        ]);
    }
    Ok(rows)
}

const CUBE_COLUMNS: [&str; 9] = [
    "n",
    "n_volume",
    "disconnected",
    "ball_measure",
    "ball_boundary",
    "cube_measure",
    "cube_boundary",
    "connected_min",
    "ratio",
];

fn cube_chain_connected(p: CubeChainRunParams, budget: Budget) -> Result<Report> {
    let mut report = start(ExperimentName::CubeChainConnected, &p)?;
    let exact = CubeChain::new(
        &CubeChainParams { d: p.d, n_max: p.exact_n_max, scale_fn: ScaleFn::Exact },
        budget,
    )?;
    let mut t = Table::new("exact", &CUBE_COLUMNS);
    for row in cube_levels(&exact, p.d, budget)? {
        t.push(row);
    }
    report.series.push(PlotCurve::new(
        "exact ratio",
        t.rows.iter().map(|r| (r[0].as_f64().unwrap(), r[8].as_f64().unwrap())).collect(),
    ));
    report.tables.push(t);
    report.assert("exact: disconnected beats connected", rule_lt("exact", "disconnected", "connected_min"));
    if let Some(sub) = &p.substituted {
        let chain = CubeChain::new(
            &CubeChainParams {
                d: p.d,
                n_max: sub.n_max,
                scale_fn: ScaleFn::Substituted { side: sub.side.clone(), face: sub.face.clone() },
            },
            budget,
        )?;
        let mut t = Table::new("substituted", &CUBE_COLUMNS);
        let mut trend = Table::new("substituted_trend", &["n", "ratio"]);
        for row in cube_levels(&chain, p.d, budget)? {
            if row[0].as_u64().unwrap() >= sub.trend_from as u64 {
                trend.push(vec![row[0].clone(), row[8].clone()]);
            }
            t.push(row);
        }
        report.series.push(PlotCurve::new(
            "substituted ratio",
            t.rows.iter().map(|r| (r[0].as_f64().unwrap(), r[8].as_f64().unwrap())).collect(),
        ));
        report.tables.push(t);
        report.tables.push(trend);
        report.assert(
            "substituted: disconnected beats connected",
            rule_lt("substituted", "disconnected", "connected_min"),
        );
        report.assert("substituted: the advantage grows with n", rule_increasing("substituted_trend", "ratio"));
    }
    report.finish()
}

// ---------------------------------------------------------------------------
// finite test spaces

/// A small finite space named by its shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestSpace {
    Path { n: usize },
    Cycle { n: usize },
    Grid { w: usize, h: usize },
}

impl TestSpace {
    pub fn build(&self) -> Result<FiniteSpace> {
        match *self {
            TestSpace::Path { n } if n >= 2 => Ok(FiniteSpace::path(n, 1)),
            TestSpace::Cycle { n } if n >= 3 => Ok(FiniteSpace::cycle(n, 1)),
            TestSpace::Grid { w, h } if w * h >= 2 => Ok(FiniteSpace::grid(w, h, 1)),
            _ => Err(Error::invalid(format!("degenerate test space {self:?}"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            TestSpace::Path { n } => format!("path_{n}"),
            TestSpace::Cycle { n } => format!("cycle_{n}"),
            TestSpace::Grid { w, h } => format!("grid_{w}x{h}"),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HIndependenceParams {
    pub spaces: Vec<TestSpace>,
    pub h: Length,
    pub h_prime: Length,
    pub grid_max_exp: u32,
}

impl Default for HIndependenceParams {
    fn default() -> Self {
        HIndependenceParams {
            spaces: vec![TestSpace::Cycle { n: 18 }, TestSpace::Grid { w: 3, h: 6 }],
            h: 2,
            h_prime: 4,
            grid_max_exp: 4,
        }
    }
}

fn oracle_h_independence(p: HIndependenceParams) -> Result<Report> {
    let mut report = start(ExperimentName::OracleHIndependence, &p)?;
    let mut t = Table::new("comparisons", &["space", "vertices", "relation", "c1", "c2", "c3", "c4", "max_constant"]);
    for ts in &p.spaces {
        let space = ts.build()?;
        let a = exact_profile(&space, p.h, false, 1)?;
        let b = exact_profile(&space, p.h_prime, false, 1)?;
        let w = compare_equivalent(&Curve::from_profile(&a), &Curve::from_profile(&b), Grid { max_exp: p.grid_max_exp })?;
        let c = &w.constants;
        t.push(vec![
            json!(ts.label()),
            json!(space.len()),
            json!(relation_name(w.relation)),
            json!(c[0]),
            json!(c[1]),
            json!(c[2]),
            json!(c[3]),
            json!(c.iter().max()),
        ]);
        report.series.push(PlotCurve::from_profile(format!("{} h={}", ts.label(), p.h), &a));
        report.series.push(PlotCurve::from_profile(format!("{} h={}", ts.label(), p.h_prime), &b));
        report.tables.push(profile_table(&format!("{}_h{}", ts.label(), p.h), &a));
        report.tables.push(profile_table(&format!("{}_h{}", ts.label(), p.h_prime), &b));
    }
    report.tables.insert(0, t);
    report.assert("profiles are equivalent", rule_equals("comparisons", "relation", json!("equivalent")));
    report.assert(
        "constants are within the grid",
        rule_at_most("comparisons", "max_constant", json!(1u64 << p.grid_max_exp)),
    );
    report.finish()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EqualityParams {
    pub spaces: Vec<TestSpace>,
    pub h: Length,
    pub gap: Length,
}

impl Default for EqualityParams {
    fn default() -> Self {
        EqualityParams {
            spaces: vec![TestSpace::Path { n: 20 }, TestSpace::Cycle { n: 20 }],
            h: 1,
            gap: 10,
        }
    }
}

fn connected_equality_points(p: EqualityParams) -> Result<Report> {
    let mut report = start(ExperimentName::ConnectedEqualityPoints, &p)?;
    let mut summary = Table::new("summary", &["space", "sublinear", "dominated", "equality_points"]);
    for ts in &p.spaces {
        let space = ts.build()?;
        let plain = exact_profile(&space, p.h, false, p.gap)?;
        let conn = exact_profile(&space, p.h, true, p.gap)?;
        let mut t = Table::new(ts.label(), &["t", "exact", "connected", "equal"]);
        let mut equal = 0u64;
        let mut dominated = true;
        for &(x, v) in &plain.points {
            let c = conn.get(x);
            let eq = c == Some(v);
            equal += u64::from(eq);
            dominated &= c.is_none_or(|c| c >= v);
            t.push(vec![json!(x), json!(v), json!(c), json!(eq)]);
        }
        let (first, last) = (plain.points[0], *plain.points.last().unwrap());
        // I(t)/t decreases across the range
        let sublinear = (last.1 as u128) * (first.0 as u128) < (first.1 as u128) * (last.0 as u128);
        summary.push(vec![json!(ts.label()), json!(sublinear), json!(dominated), json!(equal)]);
        report.series.push(PlotCurve::from_profile(format!("{} exact", ts.label()), &plain));
        report.series.push(PlotCurve::from_profile(format!("{} connected", ts.label()), &conn));
        report.tables.push(t);
    }
    report.tables.insert(0, summary);
    report.assert("test spaces have sublinear profiles", rule_all_true("summary", "sublinear"));
    report.assert("the connected profile dominates", rule_all_true("summary", "dominated"));
    report.assert("an equality point exists", rule_at_least("summary", "equality_points", json!(1)));
    report.finish()
}

// ---------------------------------------------------------------------------
// annuli

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnnulusParams {
    pub z2_radii: Vec<Length>,
    pub vonkoch_k: Vec<u32>,
    pub constant: u64,
}

impl Default for AnnulusParams {
    fn default() -> Self {
        AnnulusParams { z2_radii: vec![8, 16, 32], vonkoch_k: vec![6, 7], constant: 16 }
    }
}

fn annulus_row<S: Space + ?Sized>(space: &S, label: &str, x: VertexId, r: Length, budget: Budget) -> Result<Vec<Value>> {
    let w = annulus_inf_check(space, x, r, budget)?;
    let unit = space.scale();
    let map = distances_from(space, [x], 2 * r, budget)?;
    let mut ds: Vec<Length> = map.dist.values().copied().collect();
    ds.sort_unstable();
    let count = |rho: Length| ds.partition_point(|d| *d <= rho) as u64;
    let largest = (r..=2 * r).map(|rp| count(rp) - count(rp - unit)).max().unwrap_or(0);
    Ok(vec![
        json!(label),
        json!(r),
        json!(w.r_prime),
        json!(w.shell_measure),
        json!(largest),
        json!(w.ball_measure),
        json!(w.ratio),
    ])
}

fn annulus_bound(p: AnnulusParams, budget: Budget) -> Result<Report> {
    let mut report = start(ExperimentName::AnnulusBound, &p)?;
    let mut t = Table::new(
        "annuli",
        &["space", "r", "r_prime", "shell_min", "shell_max", "ball_measure", "ratio"],
    );
    let z2 = Lattice::new(2, 1);
    for &r in &p.z2_radii {
        t.push(annulus_row(&z2, "Z2", point(&[0, 0]), r, budget)?);
    }
    if let Some(&k_max) = p.vonkoch_k.iter().max() {
        let y = VonKoch::new(&VonKochParams { k_max }, budget)?;
        for &k in &p.vonkoch_k {
            t.push(annulus_row(&y, &format!("weighted_plane_a{k}"), root(k), r_k(k), budget)?);
        }
    }
    report.tables.push(t);
    report.assert("the normalized inf is bounded", rule_at_most("annuli", "ratio", json!(p.constant)));
    report.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for n in ExperimentName::ALL {
            assert_eq!(n.as_str().parse::<ExperimentName>().unwrap(), n);
            assert_eq!(serde_json::to_value(n).unwrap(), json!(n.as_str()));
        }
        assert!("nope".parse::<ExperimentName>().is_err());
    }

    #[test]
    fn small_helpers() {
        assert_eq!(l1_ball_volume(2, 3), 25);
        assert_eq!(l1_ball_volume(3, 1), 7);
        assert_eq!(l1_radius_for(2, 512), 16);
        assert_eq!(equator_bound(8), 10);
        assert_eq!(equator_bound(10), 10);
        assert_eq!(root_radius(2), 4 + 2 - 1);
        assert!(exceeds_log3_power(1, 63, 100));
        assert!(exceeds_log3_power(243, 127, 100));
        assert!(!exceeds_log3_power(1, 300, 100));
        assert!(exceeds_log3_power(u64::MAX, 1000, 100));
        assert!(!exceeds_log3_power(u64::MAX, u64::MAX, 1));
        let ladder = radius_ladder(100, 50);
        assert_eq!(ladder.first(), Some(&1));
        assert_eq!(ladder.last(), Some(&100));
    }

    #[test]
    fn unknown_params_are_rejected() {
        let spec = ExperimentSpec::new(ExperimentName::AnnulusBound).with_params(json!({"bogus": 1}));
        assert!(matches!(run_experiment(&spec), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn budget_overrun_is_a_failed_report() {
        let mut spec = ExperimentSpec::new(ExperimentName::TreeLinearGrowth);
        spec.budget.max_vertices = 100;
        let r = run_experiment(&spec).unwrap();
        assert!(!r.passed && r.budget_exceeded);
        assert!(r.failure.unwrap().contains("budget"));
    }

    #[test]
    fn h_independence_small() {
        let spec = ExperimentSpec::new(ExperimentName::OracleHIndependence)
            .with_params(json!({"spaces": [{"kind": "cycle", "n": 10}]}));
        let r = run_experiment(&spec).unwrap();
        assert!(r.passed, "{r:?}");
        assert_eq!(r.recheck().unwrap(), vec![true, true]);
    }
}
