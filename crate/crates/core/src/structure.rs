//! The evs interface shared by explicit tables and symbolic families.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::element::Element;
use crate::finite::FiniteEvs;
use crate::oracle::FamilyOracle;
use crate::scalar::{Field, Scalar};

/// The single random source used by every sampled check.
pub type SampleRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SampleRng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shared handle to an evs instance.
pub type Instance = Arc<dyn Evs>;

/// Evidence that `alpha * x + primitive <= z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestingWitness {
    pub alpha: Scalar,
    pub primitive: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Member(TestingWitness),
    NonMember,
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

/// Answer to `x ∈ Q(X)`; an infeasible answer names a non-primitive `y <= x`
/// with `y ∉ L(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible { below: Element },
}

/// An exponential vector space over `field()`.
///
/// Symbolic families implement the element-level operations directly; finite
/// tables additionally expose themselves through [`Evs::as_finite`] so
/// algorithms can switch to exhaustive index-based evaluation.
pub trait Evs: fmt::Debug + Send + Sync {
    fn name(&self) -> String;
    fn field(&self) -> Field;
    fn zero(&self) -> Element;
    fn contains(&self, x: &Element) -> bool;
    fn add(&self, x: &Element, y: &Element) -> Element;
    fn scale(&self, alpha: &Scalar, x: &Element) -> Element;
    fn leq(&self, x: &Element, y: &Element) -> bool;
    /// Minimality test: `x ∈ X₀`.
    fn is_primitive(&self, x: &Element) -> bool;
    /// All primitives below `x`.
    fn primitives_of(&self, x: &Element) -> Vec<Element>;

    /// Draws an arbitrary element.
    fn sample(&self, rng: &mut SampleRng) -> Element;
    /// Draws a primitive element.
    fn sample_primitive(&self, rng: &mut SampleRng) -> Element;
    /// Draws an element `y <= x`.
    fn sample_below(&self, x: &Element, rng: &mut SampleRng) -> Element;
    /// Draws a scalar from the documented sampling distribution.
    fn sample_scalar(&self, rng: &mut SampleRng) -> Scalar;

    /// Draws an element `w >= x` as `x + (v + (-1)v)`, which dominates `x`
    /// in every evs.
    fn sample_above(&self, x: &Element, rng: &mut SampleRng) -> Element {
        let v = self.sample(rng);
        let minus_one = self.field().from_i64(-1);
        let spread = self.add(&v, &self.scale(&minus_one, &v));
        self.add(x, &spread)
    }

    fn sample_nonzero_scalar(&self, rng: &mut SampleRng) -> Scalar {
        loop {
            let s = self.sample_scalar(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    /// Draws a non-primitive element, or `None` when none turned up.
    fn sample_nonprimitive(&self, rng: &mut SampleRng) -> Option<Element> {
        (0..64)
            .map(|_| self.sample(rng))
            .find(|x| !self.is_primitive(x))
    }

    /// The finite table behind this instance, when the carrier is finite.
    fn as_finite(&self) -> Option<&FiniteEvs> {
        None
    }

    /// Closed-form decision of `z ∈ L(x)` for `x ∉ X₀`.
    fn testing_rule(&self, _x: &Element, _z: &Element) -> Option<Membership> {
        None
    }

    /// Closed-form decision of `x ∈ Q(X)` for `x ∉ X₀`.
    fn feasible_rule(&self, _x: &Element) -> Option<Feasibility> {
        None
    }

    /// A vector-space basis of X₀ under the induced operations.
    fn primitive_basis(&self) -> Option<Vec<Element>> {
        None
    }

    /// Coordinates of a primitive with respect to [`Evs::primitive_basis`].
    fn primitive_coordinates(&self, _p: &Element) -> Option<Vec<Scalar>> {
        None
    }

    /// Hand-derived facts about the family.
    fn oracle(&self) -> Option<FamilyOracle> {
        None
    }
}

/// Uniform choice from a non-empty slice.
pub fn pick<'a, T>(items: &'a [T], rng: &mut SampleRng) -> &'a T {
    items.choose(rng).expect("non-empty choice")
}

/// Uniform index below `n`.
pub fn pick_index(n: usize, rng: &mut SampleRng) -> usize {
    rng.gen_range(0..n)
}
