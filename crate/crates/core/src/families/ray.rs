//! `[0,∞)^n` over ℚ with coordinatewise order and the action `α·x = |α|x`.

use rand::Rng;

use super::vectors;
use crate::dimension::Dimension;
use crate::element::Element;
use crate::oracle::{FamilyOracle, KnownBasis};
use crate::scalar::{Field, Grid, Scalar};
use crate::structure::{Evs, Feasibility, Membership, SampleRng, TestingWitness};

#[derive(Clone, Debug)]
pub struct RayProduct {
    pub n: usize,
    pub grid: Grid,
}

impl RayProduct {
    fn coords<'a>(&self, x: &'a Element) -> &'a [Scalar] {
        x.as_vector()
    }

    fn support(x: &[Scalar]) -> Vec<usize> {
        (0..x.len()).filter(|&i| !x[i].is_zero()).collect()
    }
}

/// Draws a nonnegative grid value, zero about a third of the time so that
/// samples cover every support pattern.
pub(crate) fn sample_nonnegative(grid: &Grid, rng: &mut SampleRng) -> Scalar {
    if rng.gen_range(0..3) == 0 {
        Field::Rational.zero()
    } else {
        grid.sample_positive(rng)
    }
}

/// Draws `t ∈ [0,1]` on the grid's denominator scale.
pub(crate) fn sample_fraction(grid: &Grid, rng: &mut SampleRng) -> Scalar {
    let d = grid.max_den.max(1);
    Field::Rational.from_ratio(rng.gen_range(0..=d), d)
}

impl Evs for RayProduct {
    fn name(&self) -> String {
        if self.n == 1 {
            "ray".into()
        } else {
            format!("ray_product({})", self.n)
        }
    }

    fn field(&self) -> Field {
        Field::Rational
    }

    fn zero(&self) -> Element {
        Element::Vector(vectors::zeros(Field::Rational, self.n))
    }

    fn contains(&self, x: &Element) -> bool {
        matches!(x, Element::Vector(v) if v.len() == self.n
            && v.iter().all(|c| c.field() == Field::Rational && !c.is_negative()))
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        Element::Vector(vectors::add(self.coords(x), self.coords(y)))
    }

    fn scale(&self, alpha: &Scalar, x: &Element) -> Element {
        Element::Vector(vectors::scale(&alpha.abs(), self.coords(x)))
    }

    fn leq(&self, x: &Element, y: &Element) -> bool {
        self.coords(x).iter().zip(self.coords(y)).all(|(a, b)| a <= b)
    }

    fn is_primitive(&self, x: &Element) -> bool {
        vectors::is_zero(self.coords(x))
    }

    fn primitives_of(&self, _x: &Element) -> Vec<Element> {
        vec![self.zero()]
    }

    fn sample(&self, rng: &mut SampleRng) -> Element {
        Element::Vector((0..self.n).map(|_| sample_nonnegative(&self.grid, rng)).collect())
    }

    fn sample_primitive(&self, _rng: &mut SampleRng) -> Element {
        self.zero()
    }

    fn sample_below(&self, x: &Element, rng: &mut SampleRng) -> Element {
        Element::Vector(
            self.coords(x)
                .iter()
                .map(|c| sample_fraction(&self.grid, rng).mul(c))
                .collect(),
        )
    }

    fn sample_scalar(&self, rng: &mut SampleRng) -> Scalar {
        self.grid.sample(rng)
    }

    // z ≥ αx for some α > 0 exactly when supp(x) ⊆ supp(z); the largest
    // admissible α is min z_i/x_i over supp(x).
    fn testing_rule(&self, x: &Element, z: &Element) -> Option<Membership> {
        let (x, z) = (self.coords(x), self.coords(z));
        let supp = Self::support(x);
        if supp.iter().any(|&i| z[i].is_zero()) {
            return Some(Membership::NonMember);
        }
        let alpha = supp
            .iter()
            .map(|&i| z[i].div(&x[i]).expect("nonzero"))
            .min()
            .expect("non-primitive x has support");
        Some(Membership::Member(TestingWitness { alpha, primitive: self.zero() }))
    }

    // With two support coordinates, x_i e_i lies below x but misses a
    // coordinate of supp(x); with one, every nonzero y <= x is a multiple.
    fn feasible_rule(&self, x: &Element) -> Option<Feasibility> {
        let c = self.coords(x);
        let supp = Self::support(c);
        if supp.len() == 1 {
            return Some(Feasibility::Feasible);
        }
        let i = supp[0];
        let mut y = vectors::zeros(Field::Rational, self.n);
        y[i] = c[i].clone();
        Some(Feasibility::Infeasible { below: Element::Vector(y) })
    }

    fn primitive_basis(&self) -> Option<Vec<Element>> {
        Some(Vec::new())
    }

    fn primitive_coordinates(&self, _p: &Element) -> Option<Vec<Scalar>> {
        Some(Vec::new())
    }

    fn oracle(&self) -> Option<FamilyOracle> {
        let basis = (0..self.n)
            .map(|i| Element::Vector(vectors::unit(Field::Rational, self.n, i)))
            .collect();
        Some(FamilyOracle {
            basis: KnownBasis::Finite(basis),
            dimension: Dimension::finite(self.n, 0),
            has_basis: true,
            q_description: "nonzero points with exactly one positive coordinate".into(),
            l_rule: "z ∈ L(x) iff z_i > 0 for every i with x_i > 0".into(),
            provenance: "coordinatewise order and the positive part of the scalar action: \
                         z >= αx has a solution α > 0 iff supp(x) ⊆ supp(z); X₀ = {0}"
                .into(),
        })
    }
}
