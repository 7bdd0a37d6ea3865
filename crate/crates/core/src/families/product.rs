//! Finite products with componentwise operations and order.

use crate::dimension::Dimension;
use crate::element::Element;
use crate::oracle::{FamilyOracle, KnownBasis};
use crate::scalar::{Field, Scalar};
use crate::structure::{Evs, Feasibility, Instance, Membership, SampleRng, TestingWitness};
use crate::{basis, testing};

#[derive(Clone, Debug)]
pub struct Product {
    pub components: Vec<Instance>,
}

impl Product {
    fn zip<'a>(&'a self, x: &'a Element) -> impl Iterator<Item = (&'a Instance, &'a Element)> {
        self.components.iter().zip(x.as_tuple())
    }

    /// `e` in slot `k`, zero elsewhere.
    fn embed(&self, k: usize, e: Element) -> Element {
        let mut parts: Vec<Element> = self.components.iter().map(|c| c.zero()).collect();
        parts[k] = e;
        Element::Tuple(parts)
    }

    /// Slots holding a non-primitive coordinate.
    fn nonprimitive_slots(&self, x: &Element) -> Vec<usize> {
        self.zip(x)
            .enumerate()
            .filter(|(_, (c, a))| !c.is_primitive(a))
            .map(|(k, _)| k)
            .collect()
    }

    /// Every element, when all components are finite.
    pub fn enumerate(&self) -> Option<Vec<Element>> {
        let mut out = vec![Vec::new()];
        for c in &self.components {
            let fin = c.as_finite()?;
            let mut next = Vec::new();
            for prefix in &out {
                for e in fin.elements() {
                    let mut t: Vec<Element> = prefix.clone();
                    t.push(e.clone());
                    next.push(t);
                }
            }
            out = next;
        }
        let mut elems: Vec<Element> = out.into_iter().map(Element::Tuple).collect();
        elems.sort();
        Some(elems)
    }
}

impl Evs for Product {
    fn name(&self) -> String {
        let names: Vec<String> = self.components.iter().map(|c| c.name()).collect();
        format!("product({})", names.join(", "))
    }

    fn field(&self) -> Field {
        self.components[0].field()
    }

    fn zero(&self) -> Element {
        Element::Tuple(self.components.iter().map(|c| c.zero()).collect())
    }

    fn contains(&self, x: &Element) -> bool {
        matches!(x, Element::Tuple(parts) if parts.len() == self.components.len()
            && self.components.iter().zip(parts).all(|(c, e)| c.contains(e)))
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        Element::Tuple(
            self.zip(x)
                .zip(y.as_tuple())
                .map(|((c, a), b)| c.add(a, b))
                .collect(),
        )
    }

    fn scale(&self, alpha: &Scalar, x: &Element) -> Element {
        Element::Tuple(self.zip(x).map(|(c, a)| c.scale(alpha, a)).collect())
    }

    fn leq(&self, x: &Element, y: &Element) -> bool {
        self.zip(x).zip(y.as_tuple()).all(|((c, a), b)| c.leq(a, b))
    }

    fn is_primitive(&self, x: &Element) -> bool {
        self.zip(x).all(|(c, a)| c.is_primitive(a))
    }

    fn primitives_of(&self, x: &Element) -> Vec<Element> {
        let mut out = vec![Vec::new()];
        for (c, a) in self.zip(x) {
            let ps = c.primitives_of(a);
            let mut next = Vec::with_capacity(out.len() * ps.len());
            for prefix in &out {
                for p in &ps {
                    let mut t: Vec<Element> = prefix.clone();
                    t.push(p.clone());
                    next.push(t);
                }
            }
            out = next;
        }
        out.into_iter().map(Element::Tuple).collect()
    }

    fn sample(&self, rng: &mut SampleRng) -> Element {
        Element::Tuple(self.components.iter().map(|c| c.sample(rng)).collect())
    }

    fn sample_primitive(&self, rng: &mut SampleRng) -> Element {
        Element::Tuple(self.components.iter().map(|c| c.sample_primitive(rng)).collect())
    }

    fn sample_below(&self, x: &Element, rng: &mut SampleRng) -> Element {
        Element::Tuple(self.zip(x).map(|(c, a)| c.sample_below(a, rng)).collect())
    }

    fn sample_scalar(&self, rng: &mut SampleRng) -> Scalar {
        self.components[0].sample_scalar(rng)
    }

    fn primitive_basis(&self) -> Option<Vec<Element>> {
        let mut out = Vec::new();
        for (k, c) in self.components.iter().enumerate() {
            for p in c.primitive_basis()? {
                out.push(self.embed(k, p));
            }
        }
        Some(out)
    }

    fn primitive_coordinates(&self, p: &Element) -> Option<Vec<Scalar>> {
        let mut out = Vec::new();
        for (c, a) in self.zip(p) {
            out.extend(c.primitive_coordinates(a)?);
        }
        Some(out)
    }

    /// With one non-primitive slot `k`, `z ∈ L(x)` iff `z_k ∈ L(x_k)`: the
    /// other slots absorb `αx_j` into a primitive below `z_j`. With several,
    /// only the case of a primitive `z_j` under a non-primitive `x_j` is
    /// decided (never a member).
    fn testing_rule(&self, x: &Element, z: &Element) -> Option<Membership> {
        let slots = self.nonprimitive_slots(x);
        let parts = z.as_tuple();
        if let [k] = slots[..] {
            let c = &self.components[k];
            let Membership::Member(w) = testing::membership(&**c, &x.as_tuple()[k], &parts[k]).ok()? else {
                return Some(Membership::NonMember);
            };
            let minus = w.alpha.neg();
            let mut primitive = Vec::with_capacity(parts.len());
            for (j, (cj, xj)) in self.zip(x).enumerate() {
                if j == k {
                    primitive.push(w.primitive.clone());
                } else {
                    let q = cj.primitives_of(&parts[j]).into_iter().next()?;
                    primitive.push(cj.add(&q, &cj.scale(&minus, xj)));
                }
            }
            return Some(Membership::Member(TestingWitness { alpha: w.alpha, primitive: Element::Tuple(primitive) }));
        }
        let blocked = slots.iter().any(|&j| self.components[j].is_primitive(&parts[j]));
        blocked.then_some(Membership::NonMember)
    }

    /// `Q(X × Y) = Q(X) × Y₀ ∪ X₀ × Q(Y)`: a second non-primitive slot can be
    /// pushed down to a primitive, leaving an element outside `L(x)`.
    fn feasible_rule(&self, x: &Element) -> Option<Feasibility> {
        let slots = self.nonprimitive_slots(x);
        let mut parts = x.as_tuple().to_vec();
        match slots[..] {
            [] => None,
            [k] => match basis::feasibility(&*self.components[k], &parts[k]).ok()? {
                Feasibility::Feasible => Some(Feasibility::Feasible),
                Feasibility::Infeasible { below } => {
                    parts[k] = below;
                    Some(Feasibility::Infeasible { below: Element::Tuple(parts) })
                }
            },
            [_, j, ..] => {
                parts[j] = self.components[j].primitives_of(&parts[j]).into_iter().next()?;
                Some(Feasibility::Infeasible { below: Element::Tuple(parts) })
            }
        }
    }

    fn oracle(&self) -> Option<FamilyOracle> {
        let mut basis = Vec::new();
        let mut dimension = Dimension::finite(0, 0);
        for (k, c) in self.components.iter().enumerate() {
            let o = c.oracle()?;
            let KnownBasis::Finite(b) = o.basis else { return None };
            basis.extend(b.into_iter().map(|e| self.embed(k, e)));
            dimension = dimension.sum(o.dimension)?;
        }
        Some(FamilyOracle {
            basis: KnownBasis::Finite(basis),
            dimension,
            has_basis: true,
            q_description: "Q of one component, primitive in every other".into(),
            l_rule: "z ∈ L(x) iff z_k ∈ L(x_k) for the single non-primitive slot k of x".into(),
            provenance: "union of the component bases, each embedded with θ in the other slots; \
                         dimensions add componentwise"
                .into(),
        })
    }
}
