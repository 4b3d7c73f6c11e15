//! The counterexample spaces, built as implicit graphs with their
//! distinguished subsets.
//!
//! Every generator is driven by a JSON config such as
//! `{"generator": "vonkoch", "k_max": 6}` (the params may also be nested
//! under a `"params"` key) and answers [`Generated::describe`] with the exact
//! sizes of its named subsets.

mod carved;
mod constricted;
mod cube_chain;
mod glued;
mod ib_pair;
mod perforated;
mod vonkoch;

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::space::{Budget, FiniteSpace, FiniteSpaceDoc, Space, SubsetRegion};

pub use carved::{Carving, CarvedLattice, LatticeBox};
pub use constricted::{Constricted, ConstrictedSpace};
pub use cube_chain::{CubeChain, CubeChainParams, CubeChainSpace, GrowthMap, Level, ScaleFn};
pub use glued::{GluedTrees, GluedTreesParams};
pub use ib_pair::{Dilated, IbBalls, IbPair, Preimage, RATIO};
pub use perforated::{Perforated, PerforatedSpace};
pub use vonkoch::{decompose_ak, AkDecomposition, Step, VonKoch, VonKochParams};

/// Root `a_k`, depth `r_k` and scale of the weighted plane.
pub mod weighted_plane {
    pub use super::vonkoch::{r_k, root, K_MAX, SCALE};
}

/// Dimension and carved indices shared by the lattice families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeFamilyParams {
    pub d: usize,
    pub n_list: Vec<u32>,
}

impl LatticeFamilyParams {
    pub(crate) fn sorted_ns(&self) -> Result<Vec<u32>> {
        if !(2..=4).contains(&self.d) {
            return Err(Error::invalid("lattice families need 2 ≤ d ≤ 4"));
        }
        let mut ns = self.n_list.clone();
        ns.sort_unstable();
        ns.dedup();
        if ns.is_empty() || ns[0] == 0 {
            return Err(Error::invalid("n_list must be nonempty and positive"));
        }
        Ok(ns)
    }
}

/// Which space of the ball pair a config denotes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IbView {
    #[default]
    X,
    XPrime,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IbPairParams {
    pub d: usize,
    pub n_list: Vec<u32>,
    #[serde(default)]
    pub view: IbView,
}

impl IbPairParams {
    pub fn family(&self) -> LatticeFamilyParams {
        LatticeFamilyParams {
            d: self.d,
            n_list: self.n_list.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case")]
pub enum GeneratorConfig {
    GluedTrees(GluedTreesParams),
    Vonkoch(VonKochParams),
    Perforated(LatticeFamilyParams),
    Constricted(LatticeFamilyParams),
    IbPair(IbPairParams),
    CubeChain(CubeChainParams),
}

impl GeneratorConfig {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorConfig::GluedTrees(_) => "glued_trees",
            GeneratorConfig::Vonkoch(_) => "vonkoch",
            GeneratorConfig::Perforated(_) => "perforated",
            GeneratorConfig::Constricted(_) => "constricted",
            GeneratorConfig::IbPair(_) => "ib_pair",
            GeneratorConfig::CubeChain(_) => "cube_chain",
        }
    }

    /// Parses either the flat form or `{"generator": .., "params": {..}}`.
    pub fn from_json(value: Value) -> Result<Self> {
        let Value::Object(mut obj) = value else {
            return Err(Error::invalid("generator config must be a JSON object"));
        };
        if let Some(params) = obj.remove("params") {
            let Value::Object(params) = params else {
                return Err(Error::invalid("\"params\" must be an object"));
            };
            obj.extend(params);
        }
        Ok(serde_json::from_value(Value::Object(obj))?)
    }

    /// Builds the config for `name` from a params object.
    pub fn from_params(name: &str, params: Value) -> Result<Self> {
        let mut obj = match params {
            Value::Object(m) => m,
            Value::Null => Map::new(),
            _ => return Err(Error::invalid("params must be a JSON object")),
        };
        obj.insert("generator".into(), Value::String(name.into()));
        Self::from_json(Value::Object(obj))
    }

    /// The nested form `{"generator": name, "params": {..}}`.
    pub fn to_json(&self) -> Value {
        let Value::Object(mut obj) = serde_json::to_value(self).expect("configs serialize") else {
            unreachable!("tagged enums serialize to objects")
        };
        let name = obj.remove("generator").expect("tag present");
        json!({ "generator": name, "params": Value::Object(obj) })
    }

    pub fn build(&self, budget: Budget) -> Result<Generated> {
        Ok(match self {
            GeneratorConfig::GluedTrees(p) => Generated::GluedTrees(GluedTrees::new(p, budget)?),
            GeneratorConfig::Vonkoch(p) => Generated::VonKoch(VonKoch::new(p, budget)?),
            GeneratorConfig::Perforated(p) => {
                Generated::Perforated(CarvedLattice::new(Perforated::new(p, budget)?))
            }
            GeneratorConfig::Constricted(p) => {
                Generated::Constricted(CarvedLattice::new(Constricted::new(p, budget)?))
            }
            GeneratorConfig::IbPair(p) => Generated::IbPair(IbPair::new(&p.family(), budget)?, p.view),
            GeneratorConfig::CubeChain(p) => {
                Generated::CubeChain(CarvedLattice::new(CubeChain::new(p, budget)?))
            }
        })
    }
}

/// A built generator.
#[derive(Clone, Debug)]
pub enum Generated {
    GluedTrees(GluedTrees),
    VonKoch(VonKoch),
    Perforated(PerforatedSpace),
    Constricted(ConstrictedSpace),
    IbPair(IbPair, IbView),
    CubeChain(CubeChainSpace),
}

fn ids<'a>(v: impl IntoIterator<Item = &'a crate::space::VertexId>) -> Value {
    serde_json::to_value(v.into_iter().collect::<Vec<_>>()).expect("vertices serialize")
}

impl Generated {
    pub fn space(&self) -> &dyn Space {
        match self {
            Generated::GluedTrees(g) => g.space(),
            Generated::VonKoch(y) => y,
            Generated::Perforated(s) => s,
            Generated::Constricted(s) => s,
            Generated::IbPair(p, IbView::X) => &p.x,
            Generated::IbPair(p, IbView::XPrime) => &p.x_prime,
            Generated::CubeChain(s) => s,
        }
    }

    /// Named subsets, labelled like `A_9` or `C_2^1`.
    pub fn named_sets(&self) -> Result<Vec<(String, SubsetRegion)>> {
        let mut out = Vec::new();
        match self {
            Generated::GluedTrees(_) => {}
            Generated::VonKoch(y) => {
                for k in 1..=y.k_max() {
                    out.push((format!("A_{k}"), y.tree(k)));
                    out.push((format!("S_{k}"), y.tree_sphere(k)));
                }
            }
            Generated::Perforated(s) => {
                for &n in s.ns() {
                    out.push((format!("A_{n}"), s.set(n)?));
                }
            }
            Generated::Constricted(s) => {
                for &n in s.ns() {
                    out.push((format!("C_{n}"), s.set(n)?));
                }
            }
            Generated::IbPair(p, view) => {
                for &n in p.x.ns() {
                    match view {
                        IbView::X => out.push((format!("A_{n}"), p.x.set(n)?)),
                        IbView::XPrime => out.push((format!("A'_{n}"), p.image_set(n)?)),
                    }
                }
            }
            Generated::CubeChain(s) => {
                for l in s.levels() {
                    out.push((format!("C_{}", l.n), s.level_union(l.n)?));
                    for m in 0..l.n {
                        let cube = SubsetRegion::counted(s.cube(l.n, m)?.points());
                        out.push((format!("C_{}^{m}", l.n), cube));
                        let door = SubsetRegion::counted(s.door(l.n, m)?.points());
                        out.push((format!("c_{}^{m}", l.n), door));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Named vertices and subsets with their exact sizes.
    pub fn describe(&self) -> Result<Value> {
        let mut doc = Map::new();
        doc.insert("scale".into(), json!(self.space().scale()));
        match self {
            Generated::GluedTrees(g) => {
                doc.insert("generator".into(), json!("glued_trees"));
                doc.insert("vertices".into(), json!(g.space().len()));
                let roots: Vec<Value> = (1..=g.n_max())
                    .map(|n| json!({"n": n, "r": g.root(n), "r_prime": g.root_prime(n)}))
                    .collect();
                doc.insert("roots".into(), Value::Array(roots));
                let gens: Vec<Value> = (1..=g.n_max())
                    .flat_map(|n| (0..=n).map(move |k| (n, k)))
                    .map(|(n, k)| json!({"n": n, "k": k, "vertices": ids(&g.generation(n, k))}))
                    .collect();
                doc.insert("generations".into(), Value::Array(gens));
            }
            Generated::VonKoch(y) => {
                doc.insert("generator".into(), json!("vonkoch"));
                let trees: Vec<Value> = (1..=y.k_max())
                    .map(|k| {
                        json!({
                            "k": k,
                            "root": weighted_plane::root(k),
                            "r_k": weighted_plane::r_k(k),
                            "tree_size": y.tree(k).len(),
                            "sphere_size": y.tree_sphere(k).len(),
                        })
                    })
                    .collect();
                doc.insert("trees".into(), Value::Array(trees));
            }
            Generated::Perforated(s) => {
                doc.insert("generator".into(), json!("perforated"));
                let mut rows = Vec::new();
                for &n in s.ns() {
                    let b = s.block(n)?;
                    rows.push(json!({
                        "n": n,
                        "lo": &b.lo[..b.dim],
                        "hi": &b.hi[..b.dim],
                        "volume": b.volume(),
                        "boundary": s.boundary_count(n)?,
                    }));
                }
                doc.insert("sets".into(), Value::Array(rows));
            }
            Generated::Constricted(s) => {
                doc.insert("generator".into(), json!("constricted"));
                let mut rows = Vec::new();
                for &n in s.ns() {
                    let (a, b) = s.centers(n);
                    rows.push(json!({
                        "n": n,
                        "centers": [a, b],
                        "poles": [s.poles(n).0, s.poles(n).1],
                        "volume": s.set(n)?.len(),
                        "equator_size": s.equator(n)?.len(),
                    }));
                }
                doc.insert("sets".into(), Value::Array(rows));
            }
            Generated::IbPair(p, view) => {
                doc.insert("generator".into(), json!("ib_pair"));
                doc.insert("view".into(), serde_json::to_value(view)?);
                doc.insert("ratio".into(), json!(RATIO));
                let mut rows = Vec::new();
                for &n in p.x.ns() {
                    rows.push(json!({
                        "n": n,
                        "center": p.x.center(n)?,
                        "volume": p.x.set(n)?.len(),
                        "image_volume": p.image_set(n)?.len(),
                    }));
                }
                doc.insert("sets".into(), Value::Array(rows));
            }
            Generated::CubeChain(s) => {
                doc.insert("generator".into(), json!("cube_chain"));
                doc.insert("levels".into(), serde_json::to_value(s.levels())?);
            }
        }
        Ok(Value::Object(doc))
    }
}

/// A space read from disk: an explicit finite graph or a generator config.
#[derive(Clone, Debug)]
pub enum LoadedSpace {
    Finite(FiniteSpace),
    Generated(Box<Generated>),
}

impl LoadedSpace {
    /// Accepts a finite graph document or a generator config; a
    /// `describe` entry written by the generator is ignored.
    pub fn from_json(mut value: Value, budget: Budget) -> Result<Self> {
        if let Value::Object(obj) = &mut value {
            obj.remove("describe");
        }
        if value.get("generator").is_some() {
            let config = GeneratorConfig::from_json(value)?;
            Ok(LoadedSpace::Generated(Box::new(config.build(budget)?)))
        } else {
            let doc: FiniteSpaceDoc = serde_json::from_value(value)?;
            Ok(LoadedSpace::Finite(FiniteSpace::from_doc(doc)?))
        }
    }

    pub fn load(path: &Path, budget: Budget) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(serde_json::from_str(&text)?, budget)
    }

    pub fn space(&self) -> &dyn Space {
        match self {
            LoadedSpace::Finite(f) => f,
            LoadedSpace::Generated(g) => g.space(),
        }
    }

    pub fn named_sets(&self) -> Result<Vec<(String, SubsetRegion)>> {
        match self {
            LoadedSpace::Finite(_) => Ok(Vec::new()),
            LoadedSpace::Generated(g) => g.named_sets(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_forms_agree() {
        let flat = GeneratorConfig::from_json(json!({"generator": "vonkoch", "k_max": 6})).unwrap();
        assert_eq!(flat, GeneratorConfig::Vonkoch(VonKochParams { k_max: 6 }));
        let nested = flat.to_json();
        assert_eq!(nested, json!({"generator": "vonkoch", "params": {"k_max": 6}}));
        assert_eq!(GeneratorConfig::from_json(nested).unwrap(), flat);
        let chain = GeneratorConfig::from_params(
            "cube_chain",
            json!({"d": 2, "n_max": 3, "scale_fn": {"substituted": {"side": "pow2", "face": "linear"}}}),
        )
        .unwrap();
        assert_eq!(chain.name(), "cube_chain");
        assert!(GeneratorConfig::from_json(json!({"generator": "nope"})).is_err());
        assert!(GeneratorConfig::from_json(json!({"generator": "vonkoch", "k": 1})).is_err());
    }

    #[test]
    fn describe_reports_counts() {
        let g = GeneratorConfig::from_json(json!({"generator": "perforated", "d": 2, "n_list": [9]}))
            .unwrap()
            .build(Budget::default())
            .unwrap();
        let d = g.describe().unwrap();
        assert_eq!(d["sets"][0]["volume"], 27);
        assert_eq!(d["sets"][0]["boundary"], 16);
        let t = GeneratorConfig::GluedTrees(GluedTreesParams { n_max: 2, scale: 1 })
            .build(Budget::default())
            .unwrap();
        assert_eq!(t.describe().unwrap()["vertices"], 37);
        let loaded = LoadedSpace::from_json(
            json!({"generator": "ib_pair", "params": {"d": 2, "n_list": [3], "view": "x_prime"}}),
            Budget::default(),
        )
        .unwrap();
        assert_eq!(loaded.named_sets().unwrap()[0].0, "A'_3");
    }
}
