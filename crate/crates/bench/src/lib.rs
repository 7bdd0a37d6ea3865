//! Fixtures shared by the benchmarks.

use evs_core::families::{make_family, FamilySpec};
use evs_core::{FiniteEvs, Grid, Instance};

/// Builds an instance from a family document such as `{"tag":"ray_product","n":3}`.
pub fn fixture(json: &str) -> Instance {
    let spec: FamilySpec = serde_json::from_str(json).expect("bench fixture parses");
    make_family(&spec, Grid::new(4, 4).expect("grid")).expect("bench fixture builds")
}

/// Like [`fixture`], for families that tabulate.
pub fn finite(json: &str) -> FiniteEvs {
    fixture(json).as_finite().expect("finite fixture").clone()
}
