use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{FamilySpec, ProfileCurve, ProfileKind};
use crate::error::{Error, Result};
use crate::space::{h_boundary, Budget, Length, Space};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// `inf μ(∂_h A)` over members with `μ(A) ≥ t`.
    Lower,
    /// `sup μ(∂_h A)` over members with `μ(A) ≤ t`.
    Upper,
}

/// Measure and boundary measure of one family member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub label: String,
    pub measure: u64,
    pub boundary: u64,
}

pub fn measure_family<S: Space + ?Sized>(
    space: &S,
    family: &FamilySpec,
    h: Length,
    budget: Budget,
) -> Result<Vec<FamilyRow>> {
    family
        .members
        .par_iter()
        .map(|(label, set)| {
            let b = h_boundary(space, set, h, budget)?;
            Ok(FamilyRow {
                label: label.clone(),
                measure: set.measure(),
                boundary: b.measure(),
            })
        })
        .collect()
}

fn value_at(rows: &[FamilyRow], mode: Mode, t: u64) -> Option<u64> {
    match mode {
        Mode::Lower => rows
            .iter()
            .filter(|r| r.measure >= t)
            .map(|r| r.boundary)
            .min(),
        Mode::Upper => rows
            .iter()
            .filter(|r| r.measure <= t)
            .map(|r| r.boundary)
            .max(),
    }
}

/// The family-restricted profile, sampled at every distinct member measure.
pub fn family_profile<S: Space + ?Sized>(
    space: &S,
    family: &FamilySpec,
    h: Length,
    mode: Mode,
    budget: Budget,
) -> Result<ProfileCurve> {
    if family.is_empty() {
        return Err(Error::invalid("the family has no members"));
    }
    let rows = measure_family(space, family, h, budget)?;
    let ts: BTreeSet<u64> = rows.iter().map(|r| r.measure).collect();
    let points = ts
        .into_iter()
        .filter_map(|t| value_at(&rows, mode, t).map(|v| (t, v)))
        .collect();
    Ok(ProfileCurve {
        kind: match mode {
            Mode::Lower => ProfileKind::FamilyLower,
            Mode::Upper => ProfileKind::FamilyUpper,
        },
        h,
        provenance: family.name.clone(),
        points,
    })
}

/// The restricted profile at an arbitrary `t`, from measured rows.
pub fn family_profile_at(rows: &[FamilyRow], mode: Mode, t: u64) -> Result<u64> {
    value_at(rows, mode, t).ok_or(Error::EmptyAtT { t })
}
