//! A maximal orderly independent set that does not generate: one
//! representative per scaling class of three-point sets `{0, a, b}` on a
//! rational grid, inside the hyperspace of sets containing 0.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use super::hyperspace::Hyperspace;
use crate::element::Element;
use crate::error::{EvsError, Result};
use crate::scalar::{Field, Grid, Scalar};
use crate::structure::{seeded, TestingWitness};
use crate::testing::{self, Dependence};

#[derive(Clone, Debug, Serialize)]
pub struct CounterexampleH {
    pub grid: Grid,
    /// Class representatives, least in canonical order within each class.
    pub members: Vec<Element>,
    /// First dependent pair inside the collection, if any.
    pub internal_dependence: Option<Dependence>,
    /// Candidates on the grid that were shown dependent on some member.
    pub candidates_checked: usize,
    /// A candidate independent of every member, which would refute
    /// maximality at grid scale.
    pub extension: Option<Element>,
    /// The two-point set shown to lie in no member's testing set.
    pub uncovered: Element,
    /// A member whose testing set contains `uncovered`, if any.
    pub covering_member: Option<Element>,
}

impl CounterexampleH {
    pub fn independent(&self) -> bool {
        self.internal_dependence.is_none()
    }

    pub fn maximal_at_grid_scale(&self) -> bool {
        self.extension.is_none()
    }

    pub fn generates(&self) -> bool {
        self.covering_member.is_some()
    }

    /// The ambient evs: finite subsets of ℚ containing 0.
    pub fn ambient(grid: Grid) -> Hyperspace {
        Hyperspace {
            field: Field::Rational,
            dim: 1,
            bound: 4,
            with_theta: true,
            grid,
        }
    }

    /// A member `A` with `z ∈ L(A)`, with its witness.
    pub fn covering(&self, z: &Element) -> Result<Option<(Element, TestingWitness)>> {
        let evs = Self::ambient(self.grid);
        for a in &self.members {
            if let crate::structure::Membership::Member(w) = testing::membership(&evs, a, z)? {
                return Ok(Some((a.clone(), w)));
            }
        }
        Ok(None)
    }
}

fn three(a: &Scalar, b: &Scalar) -> Element {
    let q = Field::Rational;
    Element::set(vec![vec![q.zero()], vec![a.clone()], vec![b.clone()]])
}

/// Scaling-class key of `{0, a, b}`: the smaller of the two rescalings that
/// put 1 into the set.
fn class_key(a: &Scalar, b: &Scalar) -> Element {
    let one = Field::Rational.one();
    let k1 = three(&one, &b.div(a).expect("nonzero"));
    let k2 = three(&a.div(b).expect("nonzero"), &one);
    k1.min(k2)
}

fn nonzero_points(x: &Element) -> Vec<Scalar> {
    x.as_set().iter().map(|p| p[0].clone()).filter(|s| !s.is_zero()).collect()
}

/// Builds the collection on `grid`, checks its independence, checks that
/// every grid candidate (all two- and three-point sets containing 0, plus
/// `samples` seeded larger sets) is dependent on a member, and confirms that
/// `{0,1}` is covered by no member.
pub fn counterexample_h(grid: Grid, seed: u64, samples: usize) -> Result<CounterexampleH> {
    let values: Vec<Scalar> = grid.values().into_iter().filter(|s| !s.is_zero()).collect();
    if values.len() < 2 {
        return Err(EvsError::Input("grid is too small to hold a three-point set".into()));
    }
    let evs = CounterexampleH::ambient(grid);

    let mut classes: BTreeMap<Element, Element> = BTreeMap::new();
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            let set = three(a, b);
            classes
                .entry(class_key(a, b))
                .and_modify(|rep| {
                    if set < *rep {
                        *rep = set.clone();
                    }
                })
                .or_insert(set);
        }
    }
    let mut members: Vec<Element> = classes.values().cloned().collect();
    members.sort();

    let mut internal_dependence = None;
    'outer: for i in 0..members.len() {
        for j in i + 1..members.len() {
            if let Some(d) = testing::orderly_dependence(&evs, &members[i], &members[j])? {
                internal_dependence = Some(d);
                break 'outer;
            }
        }
    }

    // Candidates of size 2 are dependent on every member; candidates with
    // three or more points contain some {0, a, b} whose class has a member.
    let mut candidates: Vec<Element> = Vec::new();
    let q = Field::Rational;
    for (i, a) in values.iter().enumerate() {
        candidates.push(Element::set(vec![vec![q.zero()], vec![a.clone()]]));
        for b in &values[i + 1..] {
            candidates.push(three(a, b));
        }
    }
    let mut rng = seeded(seed);
    for _ in 0..samples {
        let k = rng.gen_range(3..=5);
        let mut pts = vec![vec![q.zero()]];
        for _ in 0..k {
            pts.push(vec![values[rng.gen_range(0..values.len())].clone()]);
        }
        candidates.push(Element::set(pts));
    }
    let mut extension = None;
    let mut checked = 0;
    for c in &candidates {
        if members.binary_search(c).is_ok() {
            continue;
        }
        let pts = nonzero_points(c);
        let partner = if pts.len() == 1 {
            members.first().cloned()
        } else {
            classes.get(&class_key(&pts[0], &pts[1])).cloned()
        };
        let dependent = match &partner {
            Some(a) => testing::orderly_dependent(&evs, a, c)?,
            None => false,
        };
        if !dependent {
            extension = Some(c.clone());
            break;
        }
        checked += 1;
    }

    let uncovered = Element::set(vec![vec![q.zero()], vec![q.one()]]);
    let mut out = CounterexampleH {
        grid,
        members,
        internal_dependence,
        candidates_checked: checked,
        extension,
        uncovered: uncovered.clone(),
        covering_member: None,
    };
    out.covering_member = out.covering(&uncovered)?.map(|(a, _)| a);
    Ok(out)
}
