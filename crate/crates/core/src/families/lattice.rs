//! Linear subspaces of GF(p)^n under span-of-union, the trivial scalar
//! action and inclusion.

use std::collections::BTreeSet;

use rand::Rng;

use super::vectors;
use crate::dimension::Dimension;
use crate::element::Element;
use crate::linalg;
use crate::oracle::{FamilyOracle, KnownBasis};
use crate::scalar::{Field, Scalar};
use crate::structure::{Evs, Feasibility, Membership, SampleRng, TestingWitness};

#[derive(Clone, Debug)]
pub struct SubspaceLattice {
    pub field: Field,
    pub n: usize,
}

impl SubspaceLattice {
    fn rows<'a>(&self, x: &'a Element) -> &'a [Vec<Scalar>] {
        match x {
            Element::Subspace(r) => r,
            other => panic!("expected a subspace, found {other}"),
        }
    }

    /// Every subspace, closing `{0}` under joins with single vectors.
    pub fn enumerate(&self) -> Vec<Element> {
        let vecs = vectors::all_vectors(self.field, self.n);
        let mut seen: BTreeSet<Element> = BTreeSet::new();
        let mut frontier = vec![Element::Subspace(Vec::new())];
        seen.insert(frontier[0].clone());
        while let Some(s) = frontier.pop() {
            for v in &vecs {
                let mut gens = self.rows(&s).to_vec();
                gens.push(v.clone());
                let t = Element::span(self.field, &gens);
                if seen.insert(t.clone()) {
                    frontier.push(t);
                }
            }
        }
        seen.into_iter().collect()
    }

    fn lines(&self) -> Vec<Element> {
        let mut out: Vec<Element> = vectors::all_vectors(self.field, self.n)
            .into_iter()
            .filter(|v| !vectors::is_zero(v))
            .map(|v| Element::span(self.field, &[v]))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        out.sort();
        out
    }
}

impl Evs for SubspaceLattice {
    fn name(&self) -> String {
        format!("subspace_lattice({},{})", self.field.modulus().unwrap_or(0), self.n)
    }

    fn field(&self) -> Field {
        self.field
    }

    fn zero(&self) -> Element {
        Element::Subspace(Vec::new())
    }

    fn contains(&self, x: &Element) -> bool {
        matches!(x, Element::Subspace(r) if r.iter().all(|row| row.len() == self.n)
            && x.check_canonical(self.field).is_ok())
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        let mut gens = self.rows(x).to_vec();
        gens.extend_from_slice(self.rows(y));
        Element::span(self.field, &gens)
    }

    fn scale(&self, alpha: &Scalar, x: &Element) -> Element {
        if alpha.is_zero() {
            self.zero()
        } else {
            x.clone()
        }
    }

    fn leq(&self, x: &Element, y: &Element) -> bool {
        let ys = self.rows(y);
        self.rows(x).iter().all(|r| linalg::in_span(self.field, ys, r))
    }

    fn is_primitive(&self, x: &Element) -> bool {
        self.rows(x).is_empty()
    }

    fn primitives_of(&self, _x: &Element) -> Vec<Element> {
        vec![self.zero()]
    }

    fn sample(&self, rng: &mut SampleRng) -> Element {
        let all = self.enumerate();
        all[rng.gen_range(0..all.len())].clone()
    }

    fn sample_primitive(&self, _rng: &mut SampleRng) -> Element {
        self.zero()
    }

    fn sample_below(&self, x: &Element, rng: &mut SampleRng) -> Element {
        let below: Vec<Element> = self.enumerate().into_iter().filter(|s| self.leq(s, x)).collect();
        below[rng.gen_range(0..below.len())].clone()
    }

    fn sample_scalar(&self, rng: &mut SampleRng) -> Scalar {
        let p = self.field.modulus().expect("finite field");
        self.field.from_i64(rng.gen_range(0..p) as i64)
    }

    // αx = x for α ≠ 0 and X₀ = {0}, so L(x) is the set of subspaces
    // containing x.
    fn testing_rule(&self, x: &Element, z: &Element) -> Option<Membership> {
        Some(if self.leq(x, z) {
            Membership::Member(TestingWitness { alpha: self.field.one(), primitive: self.zero() })
        } else {
            Membership::NonMember
        })
    }

    fn feasible_rule(&self, x: &Element) -> Option<Feasibility> {
        let rows = self.rows(x);
        if rows.len() == 1 {
            Some(Feasibility::Feasible)
        } else {
            Some(Feasibility::Infeasible { below: Element::span(self.field, &rows[..1]) })
        }
    }

    fn primitive_basis(&self) -> Option<Vec<Element>> {
        Some(Vec::new())
    }

    fn primitive_coordinates(&self, _p: &Element) -> Option<Vec<Scalar>> {
        Some(Vec::new())
    }

    fn oracle(&self) -> Option<FamilyOracle> {
        let lines = self.lines();
        Some(FamilyOracle {
            dimension: Dimension::finite(lines.len(), 0),
            basis: KnownBasis::Finite(lines),
            has_basis: true,
            q_description: "one-dimensional subspaces".into(),
            l_rule: "z ∈ L(x) iff x ⊆ z".into(),
            provenance: "nonzero scalars fix every subspace and X₀ = {0}, so L(x) = ↑x; a subspace \
                         of dimension >= 2 contains a line outside ↑x, and every nonzero subspace \
                         contains a line"
                .into(),
        })
    }
}
