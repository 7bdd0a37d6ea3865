//! `X × V`: an evs paired with a vector space, ordered by
//! `(x, v) <= (y, w)` iff `x <= y` and `v = w`.

use rand::Rng;

use super::vectors;
use crate::basis;
use crate::dimension::{Cardinal, Dimension};
use crate::element::Element;
use crate::oracle::{FamilyOracle, KnownBasis};
use crate::scalar::{Field, Grid, Scalar};
use crate::structure::{Evs, Feasibility, Instance, Membership, SampleRng, TestingWitness};
use crate::testing;

#[derive(Clone, Debug)]
pub struct VectorExtension {
    pub base: Instance,
    pub m: usize,
    pub grid: Grid,
    pub label: String,
}

fn split(x: &Element) -> (&Element, &[Scalar]) {
    let parts = x.as_tuple();
    (&parts[0], parts[1].as_vector())
}

fn join(b: Element, v: Vec<Scalar>) -> Element {
    Element::Tuple(vec![b, Element::Vector(v)])
}

impl VectorExtension {
    fn vector(&self, rng: &mut SampleRng) -> Vec<Scalar> {
        let field = self.base.field();
        (0..self.m)
            .map(|_| match field {
                Field::Rational => self.grid.sample(rng),
                Field::Gf { p } => field.from_i64(rng.gen_range(0..p) as i64),
            })
            .collect()
    }

    /// Every element, when the base is finite and the field is GF(p).
    pub fn enumerate(&self) -> Option<Vec<Element>> {
        let fin = self.base.as_finite()?;
        self.base.field().modulus()?;
        let vs = vectors::all_vectors(self.base.field(), self.m);
        let mut out: Vec<Element> = fin
            .elements()
            .iter()
            .flat_map(|b| vs.iter().map(move |v| join(b.clone(), v.clone())))
            .collect();
        out.sort();
        Some(out)
    }
}

impl Evs for VectorExtension {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn field(&self) -> Field {
        self.base.field()
    }

    fn zero(&self) -> Element {
        join(self.base.zero(), vectors::zeros(self.field(), self.m))
    }

    fn contains(&self, x: &Element) -> bool {
        let Element::Tuple(parts) = x else { return false };
        parts.len() == 2
            && self.base.contains(&parts[0])
            && matches!(&parts[1], Element::Vector(v) if v.len() == self.m
                && v.iter().all(|c| c.field() == self.field()))
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        let ((a, v), (b, w)) = (split(x), split(y));
        join(self.base.add(a, b), vectors::add(v, w))
    }

    fn scale(&self, alpha: &Scalar, x: &Element) -> Element {
        let (a, v) = split(x);
        join(self.base.scale(alpha, a), vectors::scale(alpha, v))
    }

    fn leq(&self, x: &Element, y: &Element) -> bool {
        let ((a, v), (b, w)) = (split(x), split(y));
        v == w && self.base.leq(a, b)
    }

    fn is_primitive(&self, x: &Element) -> bool {
        self.base.is_primitive(split(x).0)
    }

    fn primitives_of(&self, x: &Element) -> Vec<Element> {
        let (a, v) = split(x);
        self.base
            .primitives_of(a)
            .into_iter()
            .map(|p| join(p, v.to_vec()))
            .collect()
    }

    fn sample(&self, rng: &mut SampleRng) -> Element {
        join(self.base.sample(rng), self.vector(rng))
    }

    fn sample_primitive(&self, rng: &mut SampleRng) -> Element {
        join(self.base.sample_primitive(rng), self.vector(rng))
    }

    fn sample_below(&self, x: &Element, rng: &mut SampleRng) -> Element {
        let (a, v) = split(x);
        join(self.base.sample_below(a, rng), v.to_vec())
    }

    fn sample_scalar(&self, rng: &mut SampleRng) -> Scalar {
        self.base.sample_scalar(rng)
    }

    // α(b, v) + (p, u) <= (c, w) forces u = w - αv and leaves αb + p <= c,
    // so membership is the base membership with the vector part absorbed.
    fn testing_rule(&self, x: &Element, z: &Element) -> Option<Membership> {
        let ((b, v), (c, w)) = (split(x), split(z));
        match testing::membership(&*self.base, b, c).ok()? {
            Membership::Member(t) => {
                let u = vectors::sub(w, &vectors::scale(&t.alpha, v));
                Some(Membership::Member(TestingWitness {
                    primitive: join(t.primitive, u),
                    alpha: t.alpha,
                }))
            }
            Membership::NonMember => Some(Membership::NonMember),
        }
    }

    fn feasible_rule(&self, x: &Element) -> Option<Feasibility> {
        let (b, v) = split(x);
        match basis::feasibility(&*self.base, b).ok()? {
            Feasibility::Feasible => Some(Feasibility::Feasible),
            Feasibility::Infeasible { below } => Some(Feasibility::Infeasible { below: join(below, v.to_vec()) }),
        }
    }

    fn primitive_basis(&self) -> Option<Vec<Element>> {
        let field = self.field();
        let zero_v = vectors::zeros(field, self.m);
        let mut out: Vec<Element> = self
            .base
            .primitive_basis()?
            .into_iter()
            .map(|p| join(p, zero_v.clone()))
            .collect();
        out.extend((0..self.m).map(|i| join(self.base.zero(), vectors::unit(field, self.m, i))));
        Some(out)
    }

    fn primitive_coordinates(&self, p: &Element) -> Option<Vec<Scalar>> {
        let (b, v) = split(p);
        let mut out = self.base.primitive_coordinates(b)?;
        out.extend_from_slice(v);
        Some(out)
    }

    fn oracle(&self) -> Option<FamilyOracle> {
        let base = self.base.oracle()?;
        let zero_v = vectors::zeros(self.field(), self.m);
        let basis = match base.basis {
            KnownBasis::Finite(b) => KnownBasis::Finite(b.into_iter().map(|e| join(e, zero_v.clone())).collect()),
            _ => KnownBasis::None,
        };
        let dimension = match base.dimension {
            Dimension::Known { evs, primitive } => Dimension::Known {
                evs,
                primitive: match primitive {
                    Cardinal::Finite(k) => Cardinal::Finite(k + self.m),
                    other => other,
                },
            },
            Dimension::NoBasis => Dimension::NoBasis,
        };
        Some(FamilyOracle {
            basis,
            dimension,
            has_basis: base.has_basis,
            q_description: format!("Q(base) × V with Q(base): {}", base.q_description),
            l_rule: format!("(c, w) ∈ L((b, v)) iff c ∈ L(b) in the base, where {}", base.l_rule),
            provenance: format!(
                "the vector part of a witness is free, so testing sets, feasibility and bases \
                 come from the base; X₀ = X₀(base) × V adds dim V. Base: {}",
                base.provenance
            ),
        })
    }
}
