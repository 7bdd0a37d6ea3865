//! Hand-derived family facts, each with the derivation it rests on.

use serde::Serialize;

use crate::dimension::Dimension;
use crate::element::Element;

/// A known basis: an explicit finite set, or the direction schema of a
/// point-set hyperspace (`{a, a+v}` classes indexed by lines through 0).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KnownBasis {
    Finite(Vec<Element>),
    Directions { dim: usize, through_zero: bool },
    None,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyOracle {
    pub basis: KnownBasis,
    pub dimension: Dimension,
    pub has_basis: bool,
    pub q_description: String,
    pub l_rule: String,
    pub provenance: String,
}
