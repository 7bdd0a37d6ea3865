//! Constructors for the standard evs families, each with its oracle.

mod counterexample;
mod dictionary;
mod extension;
mod hyperspace;
mod lattice;
mod product;
mod ray;
pub mod vectors;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use counterexample::{counterexample_h, CounterexampleH};
pub use dictionary::Dictionary;
pub use extension::VectorExtension;
pub use hyperspace::Hyperspace;
pub use lattice::SubspaceLattice;
pub use product::Product;
pub use ray::RayProduct;

use crate::dimension::Dimension;
use crate::document;
use crate::element::Element;
use crate::error::{EvsError, Result};
use crate::finite::{FiniteEvs, Tables};
use crate::oracle::{FamilyOracle, KnownBasis};
use crate::scalar::{Field, Grid};
use crate::structure::{Evs, Instance};

/// Largest point count of a GF(p) hyperspace ambient space (the carrier has
/// `2^points - 1` elements).
pub const MAX_HYPERSPACE_POINTS: u64 = 10;
/// Largest vector count of a GF(p) subspace lattice ambient space.
pub const MAX_LATTICE_VECTORS: u64 = 125;

fn rational() -> Field {
    Field::Rational
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilySpec {
    Trivial {
        #[serde(default)]
        field: Option<Field>,
    },
    Ray,
    RayProduct {
        n: usize,
    },
    ConeTimesVector {
        m: usize,
    },
    EvsTimesVector {
        base: Box<FamilySpec>,
        m: usize,
    },
    Hyperspace {
        #[serde(default = "rational")]
        field: Field,
        #[serde(default = "one")]
        dim: usize,
        #[serde(default)]
        bound: Option<usize>,
    },
    HyperspaceWithTheta {
        #[serde(default = "rational")]
        field: Field,
        #[serde(default = "one")]
        dim: usize,
        #[serde(default)]
        bound: Option<usize>,
    },
    SubspaceLattice {
        p: u64,
        n: usize,
    },
    DictionaryPower {
        n: usize,
    },
    DictionaryOmega,
    Product {
        components: Vec<FamilySpec>,
    },
    FiniteTable {
        document: serde_json::Value,
    },
}

fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(EvsError::Input(msg()))
    }
}

/// Default sampling cardinality for point sets over ℚ.
const DEFAULT_SET_BOUND: usize = 3;

pub fn make_family(spec: &FamilySpec, grid: Grid) -> Result<Instance> {
    Ok(match spec {
        FamilySpec::Trivial { field } => Arc::new(trivial(field.unwrap_or(Field::Gf { p: 2 }).validate()?)),
        FamilySpec::Ray => Arc::new(RayProduct { n: 1, grid }),
        FamilySpec::RayProduct { n } => {
            need(*n >= 1, || "ray_product needs n >= 1".into())?;
            Arc::new(RayProduct { n: *n, grid })
        }
        FamilySpec::ConeTimesVector { m } => Arc::new(VectorExtension {
            base: Arc::new(RayProduct { n: 1, grid }),
            m: *m,
            grid,
            label: format!("cone_times_vector({m})"),
        }),
        FamilySpec::EvsTimesVector { base, m } => {
            let base = make_family(base, grid)?;
            let ext = VectorExtension {
                label: format!("evs_times_vector({}, {m})", base.name()),
                base,
                m: *m,
                grid,
            };
            match ext.enumerate() {
                Some(carrier) => {
                    let scalars = ext.field().elements().expect("finite field");
                    Arc::new(FiniteEvs::tabulate(&ext, carrier, scalars)?)
                }
                None => Arc::new(ext),
            }
        }
        FamilySpec::Hyperspace { field, dim, bound } => hyperspace(*field, *dim, *bound, false, grid)?,
        FamilySpec::HyperspaceWithTheta { field, dim, bound } => hyperspace(*field, *dim, *bound, true, grid)?,
        FamilySpec::SubspaceLattice { p, n } => {
            let field = Field::gf(*p)?;
            need(*n >= 1, || "subspace_lattice needs n >= 1".into())?;
            need(p.checked_pow(*n as u32).is_some_and(|v| v <= MAX_LATTICE_VECTORS), || {
                format!("subspace_lattice({p},{n}) is beyond desk scale ({MAX_LATTICE_VECTORS} vectors)")
            })?;
            let lat = SubspaceLattice { field, n: *n };
            let carrier = lat.enumerate();
            Arc::new(FiniteEvs::tabulate(&lat, carrier, field.elements().expect("finite field"))?)
        }
        FamilySpec::DictionaryPower { n } => {
            need(*n >= 1, || "dictionary_power needs n >= 1".into())?;
            Arc::new(Dictionary { n: Some(*n), grid })
        }
        FamilySpec::DictionaryOmega => Arc::new(Dictionary { n: None, grid }),
        FamilySpec::Product { components } => {
            let parts = components
                .iter()
                .map(|c| make_family(c, grid))
                .collect::<Result<Vec<_>>>()?;
            product(parts)?
        }
        FamilySpec::FiniteTable { document } => Arc::new(document::load_table(document, "document")?),
    })
}

fn hyperspace(field: Field, dim: usize, bound: Option<usize>, with_theta: bool, grid: Grid) -> Result<Instance> {
    let field = field.validate()?;
    need(dim >= 1, || "hyperspace needs dim >= 1".into())?;
    match field.modulus() {
        None => {
            let bound = bound.unwrap_or(DEFAULT_SET_BOUND);
            need(bound >= 1, || "hyperspace needs a cardinality bound >= 1".into())?;
            Ok(Arc::new(Hyperspace { field, dim, bound, with_theta, grid }))
        }
        Some(p) => {
            let points = p.checked_pow(dim as u32).filter(|&v| v <= MAX_HYPERSPACE_POINTS);
            let points = points.ok_or_else(|| {
                EvsError::Input(format!(
                    "hyperspace over {field}^{dim} is beyond desk scale ({MAX_HYPERSPACE_POINTS} points)"
                ))
            })? as usize;
            if let Some(b) = bound {
                need(b >= points, || {
                    format!(
                        "cardinality bound {b} does not cover {field}^{dim}: Minkowski sums of \
                         point sets reach {points} points, so the carrier would not be closed"
                    )
                })?;
            }
            let h = Hyperspace { field, dim, bound: points, with_theta, grid };
            let carrier = h.enumerate();
            Ok(Arc::new(FiniteEvs::tabulate(&h, carrier, field.elements().expect("finite field"))?))
        }
    }
}

/// The product of `parts`; tabulated when every part is finite. The empty
/// product is the trivial evs over GF(2).
pub fn product(parts: Vec<Instance>) -> Result<Instance> {
    let Some(first) = parts.first() else {
        return Ok(Arc::new(trivial(Field::Gf { p: 2 })));
    };
    let field = first.field();
    if let Some(bad) = parts.iter().find(|c| c.field() != field) {
        return Err(EvsError::Input(format!(
            "product components mix {field} and {}",
            bad.field()
        )));
    }
    let prod = Product { components: parts };
    match (prod.enumerate(), field.elements()) {
        (Some(carrier), Some(scalars)) => Ok(Arc::new(FiniteEvs::tabulate(&prod, carrier, scalars)?)),
        _ => Ok(Arc::new(prod)),
    }
}

/// The one-element evs `{θ}`.
pub fn trivial(field: Field) -> FiniteEvs {
    let scalars = field
        .elements()
        .unwrap_or_else(|| vec![field.from_i64(-1), field.zero(), field.one()]);
    let tables = Tables {
        field,
        elements: vec![Element::Tuple(Vec::new())],
        zero: 0,
        add: vec![vec![0]],
        scale: vec![vec![0]; scalars.len()],
        scalars,
        leq: vec![vec![true]],
    };
    FiniteEvs::from_tables("trivial", tables)
        .expect("trivial tables are well formed")
        .with_oracle(FamilyOracle {
            basis: KnownBasis::Finite(Vec::new()),
            dimension: Dimension::finite(0, 0),
            has_basis: true,
            q_description: "empty".into(),
            l_rule: "no testing sets: X∖X₀ is empty".into(),
            provenance: "single element; the empty set is vacuously an orderly independent generator".into(),
        })
}

/// Looks up the oracle of a family, failing explicitly when none is recorded.
pub fn family_oracle(spec: &FamilySpec, grid: Grid) -> Result<FamilyOracle> {
    let inst = make_family(spec, grid)?;
    inst.oracle()
        .ok_or_else(|| EvsError::Undecided(format!("no oracle is recorded for {}", inst.name())))
}

fn hyp(p: u64, dim: usize, with_theta: bool) -> FamilySpec {
    let field = Field::Gf { p };
    if with_theta {
        FamilySpec::HyperspaceWithTheta { field, dim, bound: None }
    } else {
        FamilySpec::Hyperspace { field, dim, bound: None }
    }
}

fn lat(p: u64, n: usize) -> FamilySpec {
    FamilySpec::SubspaceLattice { p, n }
}

/// The finite families used for exhaustive checks, each with at most 200
/// elements.
pub fn finite_catalog() -> Vec<FamilySpec> {
    vec![
        FamilySpec::Trivial { field: None },
        hyp(2, 1, false),
        hyp(3, 1, false),
        hyp(5, 1, false),
        hyp(7, 1, false),
        hyp(2, 2, false),
        hyp(2, 1, true),
        hyp(3, 1, true),
        hyp(5, 1, true),
        hyp(2, 2, true),
        lat(2, 1),
        lat(2, 2),
        lat(3, 2),
        lat(5, 2),
        lat(2, 3),
        lat(3, 3),
        FamilySpec::Product { components: vec![lat(2, 1), lat(2, 1)] },
        FamilySpec::Product { components: vec![hyp(2, 1, false), hyp(2, 1, false)] },
        FamilySpec::Product { components: vec![hyp(2, 1, false), lat(2, 2)] },
        FamilySpec::EvsTimesVector { base: Box::new(hyp(2, 1, false)), m: 1 },
        FamilySpec::EvsTimesVector { base: Box::new(lat(2, 2)), m: 1 },
        FamilySpec::EvsTimesVector { base: Box::new(hyp(3, 1, true)), m: 1 },
    ]
}

/// The rational families used for sampled checks.
pub fn symbolic_catalog() -> Vec<FamilySpec> {
    let mut out = vec![FamilySpec::Ray];
    out.extend((1..=4).map(|n| FamilySpec::RayProduct { n }));
    out.extend((1..=3).map(|m| FamilySpec::ConeTimesVector { m }));
    out.extend((1..=4).map(|n| FamilySpec::DictionaryPower { n }));
    out.push(FamilySpec::DictionaryOmega);
    out.push(FamilySpec::Hyperspace { field: Field::Rational, dim: 1, bound: None });
    out.push(FamilySpec::Hyperspace { field: Field::Rational, dim: 2, bound: None });
    out.push(FamilySpec::HyperspaceWithTheta { field: Field::Rational, dim: 1, bound: None });
    out.push(FamilySpec::EvsTimesVector { base: Box::new(FamilySpec::RayProduct { n: 3 }), m: 2 });
    out.push(FamilySpec::Product { components: vec![FamilySpec::Ray, FamilySpec::ConeTimesVector { m: 1 }] });
    out
}
