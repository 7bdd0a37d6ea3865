//! Finite point sets under Minkowski sum, dilation and inclusion, optionally
//! restricted to sets containing the origin.

use rand::Rng;

use super::vectors;
use crate::dimension::{Cardinal, Dimension};
use crate::element::Element;
use crate::oracle::{FamilyOracle, KnownBasis};
use crate::scalar::{Field, Grid, Scalar};
use crate::structure::{Evs, Feasibility, Membership, SampleRng, TestingWitness};

#[derive(Clone, Debug)]
pub struct Hyperspace {
    pub field: Field,
    pub dim: usize,
    /// Largest cardinality drawn by the samplers.
    pub bound: usize,
    /// Restrict to sets containing the origin (primitive space `{{0}}`).
    pub with_theta: bool,
    pub grid: Grid,
}

impl Hyperspace {
    fn origin(&self) -> Vec<Scalar> {
        vectors::zeros(self.field, self.dim)
    }

    fn point(&self, rng: &mut SampleRng) -> Vec<Scalar> {
        (0..self.dim)
            .map(|_| match self.field {
                Field::Rational => self.grid.sample(rng),
                Field::Gf { p } => self.field.from_i64(rng.gen_range(0..p) as i64),
            })
            .collect()
    }

    fn subset_below(&self, points: &[Vec<Scalar>], rng: &mut SampleRng) -> Element {
        let origin = self.origin();
        let mut keep: Vec<Vec<Scalar>> = points
            .iter()
            .filter(|p| (self.with_theta && **p == origin) || rng.gen_bool(0.5))
            .cloned()
            .collect();
        if keep.is_empty() {
            keep.push(points[rng.gen_range(0..points.len())].clone());
        }
        Element::set(keep)
    }

    /// Every carrier element over a finite field.
    pub fn enumerate(&self) -> Vec<Element> {
        let points = vectors::all_vectors(self.field, self.dim);
        let origin = self.origin();
        let free: Vec<&Vec<Scalar>> = points.iter().filter(|p| !self.with_theta || **p != origin).collect();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << free.len()) {
            let mut set: Vec<Vec<Scalar>> = (0..free.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| free[i].clone())
                .collect();
            if self.with_theta {
                set.push(origin.clone());
            }
            if !set.is_empty() {
                out.push(Element::set(set));
            }
        }
        out.sort();
        out
    }

    /// `{0, v}` for one normalized direction `v` per line through the origin.
    fn direction_basis(&self) -> Option<Vec<Element>> {
        self.field.elements()?;
        let origin = self.origin();
        let mut out: Vec<Element> = vectors::all_vectors(self.field, self.dim)
            .into_iter()
            .filter(|v| !vectors::is_zero(v) && vectors::normalize(v) == *v)
            .map(|v| Element::set(vec![origin.clone(), v]))
            .collect();
        out.sort();
        Some(out)
    }

    /// The basis element `{0, v}` whose testing set contains the
    /// non-primitive `z`.
    pub fn covering_direction(&self, z: &Element) -> Element {
        let pts = z.as_set();
        let origin = self.origin();
        let dir = if self.with_theta {
            pts.iter().find(|p| **p != origin).expect("non-primitive").clone()
        } else {
            vectors::sub(&pts[1], &pts[0])
        };
        Element::set(vec![origin, vectors::normalize(&dir)])
    }
}

impl Evs for Hyperspace {
    fn name(&self) -> String {
        let tag = if self.with_theta { "hyperspace_with_theta" } else { "hyperspace" };
        format!("{tag}({},{})", self.field, self.dim)
    }

    fn field(&self) -> Field {
        self.field
    }

    fn zero(&self) -> Element {
        Element::set(vec![self.origin()])
    }

    fn contains(&self, x: &Element) -> bool {
        let Element::Set(pts) = x else { return false };
        !pts.is_empty()
            && pts
                .iter()
                .all(|p| p.len() == self.dim && p.iter().all(|c| c.field() == self.field))
            && pts.windows(2).all(|w| w[0] < w[1])
            && (!self.with_theta || pts.contains(&self.origin()))
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        let mut out = Vec::with_capacity(x.as_set().len() * y.as_set().len());
        for a in x.as_set() {
            for b in y.as_set() {
                out.push(vectors::add(a, b));
            }
        }
        Element::set(out)
    }

    fn scale(&self, alpha: &Scalar, x: &Element) -> Element {
        if alpha.is_zero() {
            return self.zero();
        }
        Element::set(x.as_set().iter().map(|a| vectors::scale(alpha, a)).collect())
    }

    fn leq(&self, x: &Element, y: &Element) -> bool {
        let ys = y.as_set();
        x.as_set().iter().all(|a| ys.binary_search(a).is_ok())
    }

    fn is_primitive(&self, x: &Element) -> bool {
        x.as_set().len() == 1
    }

    fn primitives_of(&self, x: &Element) -> Vec<Element> {
        if self.with_theta {
            vec![self.zero()]
        } else {
            x.as_set().iter().map(|a| Element::set(vec![a.clone()])).collect()
        }
    }

    fn sample(&self, rng: &mut SampleRng) -> Element {
        let k = rng.gen_range(1..=self.bound.max(1));
        let mut pts: Vec<Vec<Scalar>> = (0..k).map(|_| self.point(rng)).collect();
        if self.with_theta {
            pts.push(self.origin());
        }
        Element::set(pts)
    }

    fn sample_primitive(&self, rng: &mut SampleRng) -> Element {
        if self.with_theta {
            self.zero()
        } else {
            Element::set(vec![self.point(rng)])
        }
    }

    fn sample_below(&self, x: &Element, rng: &mut SampleRng) -> Element {
        self.subset_below(x.as_set(), rng)
    }

    fn sample_scalar(&self, rng: &mut SampleRng) -> Scalar {
        match self.field {
            Field::Rational => self.grid.sample(rng),
            Field::Gf { p } => self.field.from_i64(rng.gen_range(0..p) as i64),
        }
    }

    // αx + {c} ⊆ z sends two distinct points of x to two distinct points of
    // z, which pins down α and c; every such choice is tried.
    fn testing_rule(&self, x: &Element, z: &Element) -> Option<Membership> {
        let xs = x.as_set();
        let zs = z.as_set();
        let origin = self.origin();
        let (x0, x1) = if self.with_theta {
            (&origin, xs.iter().find(|p| **p != origin)?)
        } else {
            (&xs[0], &xs[1])
        };
        let step = vectors::sub(x1, x0);
        let anchors: Vec<&Vec<Scalar>> = if self.with_theta { vec![&origin] } else { zs.iter().collect() };
        for zi in anchors {
            for zj in zs {
                if zi == zj {
                    continue;
                }
                let Some(alpha) = vectors::ratio(&vectors::sub(zj, zi), &step) else {
                    continue;
                };
                let c = vectors::sub(zi, &vectors::scale(&alpha, x0));
                let fits = xs
                    .iter()
                    .all(|a| zs.binary_search(&vectors::add(&vectors::scale(&alpha, a), &c)).is_ok());
                if fits {
                    return Some(Membership::Member(TestingWitness {
                        alpha,
                        primitive: Element::set(vec![c]),
                    }));
                }
            }
        }
        Some(Membership::NonMember)
    }

    // Every set in L(x) has at least |x| points, so a two-point subset of a
    // larger x escapes L(x); two-point sets have no other non-primitive
    // subsets.
    fn feasible_rule(&self, x: &Element) -> Option<Feasibility> {
        let xs = x.as_set();
        if xs.len() == 2 {
            return Some(Feasibility::Feasible);
        }
        let below = if self.with_theta {
            let origin = self.origin();
            let other = xs.iter().find(|p| **p != origin).expect("non-primitive").clone();
            Element::set(vec![origin, other])
        } else {
            Element::set(vec![xs[0].clone(), xs[1].clone()])
        };
        Some(Feasibility::Infeasible { below })
    }

    fn primitive_basis(&self) -> Option<Vec<Element>> {
        if self.with_theta {
            return Some(Vec::new());
        }
        Some(
            (0..self.dim)
                .map(|i| Element::set(vec![vectors::unit(self.field, self.dim, i)]))
                .collect(),
        )
    }

    fn primitive_coordinates(&self, p: &Element) -> Option<Vec<Scalar>> {
        if self.with_theta {
            Some(Vec::new())
        } else {
            Some(p.as_set()[0].clone())
        }
    }

    fn oracle(&self) -> Option<FamilyOracle> {
        let primitive = if self.with_theta { 0 } else { self.dim };
        let (basis, evs) = match self.direction_basis() {
            Some(b) => {
                let k = b.len();
                (KnownBasis::Finite(b), Cardinal::Finite(k))
            }
            None if self.dim == 1 => {
                let b = vec![Element::set(vec![vec![self.field.zero()], vec![self.field.one()]])];
                (KnownBasis::Finite(b), Cardinal::Finite(1))
            }
            None => (
                KnownBasis::Directions { dim: self.dim, through_zero: true },
                Cardinal::Countable,
            ),
        };
        let q_description = if self.with_theta {
            "two-point sets {0, a}".to_string()
        } else {
            "two-point sets".to_string()
        };
        Some(FamilyOracle {
            basis,
            dimension: Dimension::Known { evs, primitive: Cardinal::Finite(primitive) },
            has_basis: true,
            q_description,
            l_rule: "z ∈ L(x) iff αx + {c} ⊆ z for some α ≠ 0 and primitive {c}".into(),
            provenance: "Minkowski sum and dilation preserve cardinality under nonzero scaling, so \
                         members of L(x) have at least |x| points; {a, b} is covered by \
                         {0, normalize(b - a)}, and {0, u}, {0, v} are independent unless u, v \
                         are parallel"
                .into(),
        })
    }
}
