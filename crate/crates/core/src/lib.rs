//! Exponential vector spaces over exact scalar fields.

pub mod axioms;
pub mod basis;
pub mod dimension;
pub mod document;
pub mod element;
pub mod error;
pub mod families;
pub mod finite;
pub mod linalg;
pub mod morphisms;
pub mod oracle;
pub mod primitive;
pub mod scalar;
pub mod structure;
pub mod testing;

pub use dimension::{Cardinal, Dimension};
pub use element::Element;
pub use error::{EvsError, Result};
pub use finite::{FiniteEvs, Tables};
pub use oracle::{FamilyOracle, KnownBasis};
pub use scalar::{Field, Grid, Scalar};
pub use structure::{seeded, Evs, Feasibility, Instance, Membership, SampleRng, TestingWitness};
