//! Isoperimetric profiles and their comparison.
//!
//! A profile is always *sampled*: it stores `(t, I(t))` only at measures that
//! some set actually realizes, and never interpolates between them.

mod annulus;
mod compare;
mod exact;
mod family;
mod phi;

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::space::{Length, SubsetRegion};

pub use annulus::{annulus_inf_check, boundary_inf_check, AnnulusWitness};
pub use compare::{
    check_pair, compare, compare_equivalent, strong_profile_check, ComparisonWitness, Curve,
    CurveShape, Grid, Lookup, Relation,
};
pub use exact::{exact_profile, ENUMERATION_BOUND};
pub use family::{family_profile, family_profile_at, measure_family, FamilyRow, Mode};
pub use phi::{phi_at, phi_from_growth, PhiCurve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProfileKind {
    Exact,
    ExactConnected,
    FamilyLower,
    FamilyUpper,
}

/// A sampled profile `t ↦ I(t)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileCurve {
    pub kind: ProfileKind,
    pub h: Length,
    pub provenance: String,
    pub points: Vec<(u64, u64)>,
}

impl ProfileCurve {
    /// Value at a sampled `t`, if `t` was sampled.
    pub fn get(&self, t: u64) -> Option<u64> {
        self.points
            .binary_search_by_key(&t, |p| p.0)
            .ok()
            .map(|i| self.points[i].1)
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[0].1 <= w[1].1)
    }

    /// Writes `t,value` rows with a header.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "value"])?;
        for &(t, v) in &self.points {
            w.serialize((t, v))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

/// A named finite family of sets (balls, generated sets, user sets).
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub name: String,
    pub members: Vec<(String, SubsetRegion)>,
}

impl FamilySpec {
    pub fn new(name: impl Into<String>) -> Self {
        FamilySpec {
            name: name.into(),
            members: Vec::new(),
        }
    }

    pub fn with(mut self, label: impl Into<String>, set: SubsetRegion) -> Self {
        self.members.push((label.into(), set));
        self
    }

    pub fn push(&mut self, label: impl Into<String>, set: SubsetRegion) {
        self.members.push((label.into(), set));
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_and_csv_forms() {
        let c = ProfileCurve {
            kind: ProfileKind::ExactConnected,
            h: 2,
            provenance: "all subsets".into(),
            points: vec![(1, 3), (2, 4)],
        };
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"kind\":\"exact-connected\""));
        assert!(json.contains("\"points\":[[1,3],[2,4]]"));
        assert_eq!(c.to_csv_string().unwrap(), "t,value\n1,3\n2,4\n");
        assert_eq!(c.get(2), Some(4));
        assert_eq!(c.get(5), None);
    }
}
