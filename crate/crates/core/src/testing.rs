//! Testing sets `L(x) = ↑(K*x + X₀)`, orderly independence and generators.

use std::fmt;

use serde::Serialize;

use crate::axioms::{CheckMode, Outcome, Witness};
use crate::element::Element;
use crate::error::{EvsError, Result};
use crate::finite::FiniteEvs;
use crate::structure::{seeded, Evs, Membership, SampleRng, TestingWitness};

fn require_member(evs: &dyn Evs, x: &Element) -> Result<()> {
    if evs.contains(x) {
        Ok(())
    } else {
        Err(EvsError::Input(format!("{x} is not an element of {}", evs.name())))
    }
}

fn require_nonprimitive(evs: &dyn Evs, x: &Element) -> Result<()> {
    require_member(evs, x)?;
    if evs.is_primitive(x) {
        Err(EvsError::Domain(format!("L({x}) is undefined: {x} is primitive")))
    } else {
        Ok(())
    }
}

/// Exhaustive search for `(α, p)` with `αx + p <= z`, scanning nonzero
/// scalars and then primitives in canonical order.
pub fn finite_witness(fin: &FiniteEvs, x: usize, z: usize) -> Option<(usize, usize)> {
    let prims = fin.minimal_indices();
    for s in fin.nonzero_scalar_indices() {
        let ax = fin.times(s, x);
        for &p in &prims {
            if fin.le(fin.sum(ax, p), z) {
                return Some((s, p));
            }
        }
    }
    None
}

/// Decides `z ∈ L(x)`: exhaustively on finite carriers, by the family's
/// closed-form rule otherwise. Member answers from rules are re-verified.
pub fn membership(evs: &dyn Evs, x: &Element, z: &Element) -> Result<Membership> {
    require_nonprimitive(evs, x)?;
    require_member(evs, z)?;
    if let Some(fin) = evs.as_finite() {
        let found = finite_witness(fin, fin.idx(x), fin.idx(z));
        return Ok(match found {
            Some((s, p)) => Membership::Member(TestingWitness {
                alpha: fin.scalar(s).clone(),
                primitive: fin.element(p).clone(),
            }),
            None => Membership::NonMember,
        });
    }
    match evs.testing_rule(x, z) {
        Some(Membership::Member(w)) => {
            let lhs = evs.add(&evs.scale(&w.alpha, x), &w.primitive);
            if w.alpha.is_zero() || !evs.is_primitive(&w.primitive) || !evs.leq(&lhs, z) {
                return Err(EvsError::Internal(format!(
                    "membership rule of {} produced a bad witness for {z} ∈ L({x})",
                    evs.name()
                )));
            }
            Ok(Membership::Member(w))
        }
        Some(Membership::NonMember) => Ok(Membership::NonMember),
        None => Err(EvsError::Undecided(format!(
            "{} has no closed-form testing-set rule",
            evs.name()
        ))),
    }
}

pub fn is_member(evs: &dyn Evs, x: &Element, z: &Element) -> Result<bool> {
    membership(evs, x, z).map(|m| m.is_member())
}

/// Explicit testing sets of every non-primitive element of a finite carrier.
#[derive(Clone, Debug)]
pub struct TestingTable {
    sets: Vec<Option<Vec<bool>>>,
}

impl TestingTable {
    pub fn new(fin: &FiniteEvs) -> Self {
        let n = fin.len();
        let prims = fin.minimal_indices();
        let scalars = fin.nonzero_scalar_indices();
        let sets = (0..n)
            .map(|x| {
                if fin.is_minimal(x) {
                    return None;
                }
                let mut member = vec![false; n];
                for &s in &scalars {
                    let ax = fin.times(s, x);
                    for &p in &prims {
                        let base = fin.sum(ax, p);
                        if member[base] {
                            continue;
                        }
                        for (w, m) in member.iter_mut().enumerate() {
                            if fin.le(base, w) {
                                *m = true;
                            }
                        }
                    }
                }
                Some(member)
            })
            .collect();
        TestingTable { sets }
    }

    /// `z ∈ L(x)`; `x` must be non-primitive.
    pub fn contains(&self, x: usize, z: usize) -> bool {
        self.sets[x].as_ref().expect("L(x) is defined off X₀")[z]
    }

    pub fn set(&self, x: usize) -> Option<&[bool]> {
        self.sets[x].as_deref()
    }

    pub fn members(&self, x: usize) -> Vec<usize> {
        self.set(x)
            .map(|s| (0..s.len()).filter(|&z| s[z]).collect())
            .unwrap_or_default()
    }

    pub fn same(&self, x: usize, y: usize) -> bool {
        self.sets[x] == self.sets[y]
    }

    pub fn dependent(&self, x: usize, y: usize) -> bool {
        self.contains(x, y) || self.contains(y, x)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestingSetRepr {
    Explicit { members: Vec<Element> },
    Predicate { rule: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestingSet {
    pub base: Element,
    pub scope: String,
    #[serde(flatten)]
    pub repr: TestingSetRepr,
}

/// `L(x)` materialized on finite carriers, as a rule wrapper otherwise. The
/// scope is the instance itself, so passing a subevs gives `L_Y`.
pub fn testing_set(evs: &dyn Evs, x: &Element) -> Result<TestingSet> {
    require_nonprimitive(evs, x)?;
    let repr = match evs.as_finite() {
        Some(fin) => {
            let table = TestingTable::new(fin);
            let members = table
                .members(fin.idx(x))
                .into_iter()
                .map(|i| fin.element(i).clone())
                .collect();
            TestingSetRepr::Explicit { members }
        }
        None => {
            let oracle = evs.oracle().ok_or_else(|| {
                EvsError::Undecided(format!("{} has no closed-form testing-set rule", evs.name()))
            })?;
            if evs.testing_rule(x, x).is_none() {
                return Err(EvsError::Undecided(format!(
                    "{} has no closed-form testing-set rule",
                    evs.name()
                )));
            }
            TestingSetRepr::Predicate { rule: oracle.l_rule }
        }
    };
    Ok(TestingSet {
        base: x.clone(),
        scope: evs.name(),
        repr,
    })
}

/// Which way an orderly dependence goes: `member ∈ L(of)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Dependence {
    pub member: Element,
    pub of: Element,
    pub witness: TestingWitness,
}

impl fmt::Display for Dependence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ∈ L({}) (α={}, p={})",
            self.member, self.of, self.witness.alpha, self.witness.primitive
        )
    }
}

/// `Some` when `x` and `y` are orderly dependent, checking `y ∈ L(x)` first.
pub fn orderly_dependence(evs: &dyn Evs, x: &Element, y: &Element) -> Result<Option<Dependence>> {
    require_nonprimitive(evs, y)?;
    if let Membership::Member(w) = membership(evs, x, y)? {
        return Ok(Some(Dependence { member: y.clone(), of: x.clone(), witness: w }));
    }
    if let Membership::Member(w) = membership(evs, y, x)? {
        return Ok(Some(Dependence { member: x.clone(), of: y.clone(), witness: w }));
    }
    Ok(None)
}

pub fn orderly_dependent(evs: &dyn Evs, x: &Element, y: &Element) -> Result<bool> {
    orderly_dependence(evs, x, y).map(|d| d.is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    pub independent: bool,
    pub dependence: Option<Dependence>,
    pub checked: Vec<Element>,
}

/// Checks every unordered pair of `set` in the given order and reports the
/// first dependent pair.
pub fn independence(evs: &dyn Evs, set: &[Element]) -> Result<IndependenceReport> {
    for x in set {
        require_nonprimitive(evs, x)?;
    }
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            if set[i] == set[j] {
                continue;
            }
            if let Some(d) = orderly_dependence(evs, &set[i], &set[j])? {
                return Ok(IndependenceReport {
                    independent: false,
                    dependence: Some(d),
                    checked: set.to_vec(),
                });
            }
        }
    }
    Ok(IndependenceReport {
        independent: true,
        dependence: None,
        checked: set.to_vec(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneratorReport {
    pub generates: bool,
    pub uncovered: Option<Element>,
    pub mode: CheckMode,
}

/// `X∖X₀ = ⋃_{s∈S} L(s)`: exhaustive on finite carriers, otherwise checked
/// on `trials` seeded non-primitive samples.
pub fn generator(evs: &dyn Evs, set: &[Element], seed: u64, trials: usize) -> Result<GeneratorReport> {
    for x in set {
        require_nonprimitive(evs, x)?;
    }
    if let Some(fin) = evs.as_finite() {
        let table = TestingTable::new(fin);
        let idx: Vec<usize> = set.iter().map(|s| fin.idx(s)).collect();
        let uncovered = fin
            .nonminimal_indices()
            .into_iter()
            .find(|&z| !idx.iter().any(|&s| table.contains(s, z)));
        return Ok(GeneratorReport {
            generates: uncovered.is_none(),
            uncovered: uncovered.map(|z| fin.element(z).clone()),
            mode: CheckMode::Exhaustive,
        });
    }
    let mut rng = seeded(seed);
    for _ in 0..trials {
        let Some(z) = evs.sample_nonprimitive(&mut rng) else {
            continue;
        };
        let mut covered = false;
        for s in set {
            if is_member(evs, s, &z)? {
                covered = true;
                break;
            }
        }
        if !covered {
            return Ok(GeneratorReport {
                generates: false,
                uncovered: Some(z),
                mode: CheckMode::Sampled { seed, trials },
            });
        }
    }
    Ok(GeneratorReport {
        generates: true,
        uncovered: None,
        mode: CheckMode::Sampled { seed, trials },
    })
}

/// The six structural properties of testing sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LProperty {
    SelfMember,
    Antitone,
    Invariant,
    Disjoint,
    Transitive,
    Overlap,
}

impl LProperty {
    pub const ALL: [LProperty; 6] = [
        LProperty::SelfMember,
        LProperty::Antitone,
        LProperty::Invariant,
        LProperty::Disjoint,
        LProperty::Transitive,
        LProperty::Overlap,
    ];

    pub fn label(self) -> &'static str {
        match self {
            LProperty::SelfMember => "L.i",
            LProperty::Antitone => "L.ii",
            LProperty::Invariant => "L.iii",
            LProperty::Disjoint => "L.iv",
            LProperty::Transitive => "L.v",
            LProperty::Overlap => "L.vi",
        }
    }

    pub fn statement(self) -> &'static str {
        match self {
            LProperty::SelfMember => "x ∈ L(x) and L(x) is up-closed",
            LProperty::Antitone => "x <= y implies L(y) ⊆ L(x)",
            LProperty::Invariant => "L(αx+p) = L(x)",
            LProperty::Disjoint => "L(x) ∩ X₀ = ∅",
            LProperty::Transitive => "a ∈ L(b) implies L(a) ⊆ L(b)",
            LProperty::Overlap => "x+y ∈ L(x) ∩ L(y)",
        }
    }
}

impl Serialize for LProperty {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyVerdict {
    pub property: LProperty,
    #[serde(flatten)]
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub mode: CheckMode,
    pub verdicts: Vec<PropertyVerdict>,
}

impl PropertyReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.outcome.passed())
    }
}

fn fail(elements: Vec<Element>) -> Outcome {
    Outcome::Fail {
        witness: Witness { elements, scalars: vec![] },
    }
}

/// Verifies the six testing-set properties: exhaustively on finite carriers,
/// on `trials` constructed samples per property otherwise.
pub fn check_l_properties(evs: &dyn Evs, seed: u64, trials: usize) -> Result<PropertyReport> {
    if let Some(fin) = evs.as_finite() {
        return Ok(exhaustive_properties(fin));
    }
    let mut verdicts = Vec::new();
    for (k, prop) in LProperty::ALL.into_iter().enumerate() {
        let mut rng = seeded(seed.wrapping_mul(0x2545_F491_4F6C_DD1D).wrapping_add(k as u64));
        let mut outcome = Outcome::SampledPass { seed, trials };
        for _ in 0..trials {
            if let Some(w) = sampled_property(evs, prop, &mut rng)? {
                outcome = fail(w);
                break;
            }
        }
        verdicts.push(PropertyVerdict { property: prop, outcome });
    }
    Ok(PropertyReport {
        mode: CheckMode::Sampled { seed, trials },
        verdicts,
    })
}

/// One sampled instance of `prop`; `Some(witness)` on a violation.
fn sampled_property(evs: &dyn Evs, prop: LProperty, rng: &mut SampleRng) -> Result<Option<Vec<Element>>> {
    let Some(x) = evs.sample_nonprimitive(rng) else {
        return Ok(None);
    };
    let member = |a: &Element, z: &Element| is_member(evs, a, z);
    // An element of L(x) built from the definition: ↑(αx+p).
    let in_l = |x: &Element, rng: &mut SampleRng| {
        let a = evs.sample_nonzero_scalar(rng);
        let p = evs.sample_primitive(rng);
        let base = evs.add(&evs.scale(&a, x), &p);
        evs.sample_above(&base, rng)
    };
    Ok(match prop {
        LProperty::SelfMember => {
            if !member(&x, &x)? {
                Some(vec![x])
            } else {
                let z = in_l(&x, rng);
                let w = evs.sample_above(&z, rng);
                if !member(&x, &z)? || !member(&x, &w)? {
                    Some(vec![x, z, w])
                } else {
                    None
                }
            }
        }
        LProperty::Antitone => {
            let y = evs.sample_above(&x, rng);
            if evs.is_primitive(&y) {
                Some(vec![x, y])
            } else {
                let z = if rng_flip(rng) { in_l(&y, rng) } else { evs.sample(rng) };
                if !evs.is_primitive(&z) && member(&y, &z)? && !member(&x, &z)? {
                    Some(vec![x, y, z])
                } else {
                    None
                }
            }
        }
        LProperty::Invariant => {
            let a = evs.sample_nonzero_scalar(rng);
            let p = evs.sample_primitive(rng);
            let y = evs.add(&evs.scale(&a, &x), &p);
            if evs.is_primitive(&y) {
                Some(vec![x, p, y])
            } else {
                let z = match rng_pick3(rng) {
                    0 => in_l(&x, rng),
                    1 => in_l(&y, rng),
                    _ => evs.sample(rng),
                };
                if !evs.is_primitive(&z) && member(&x, &z)? != member(&y, &z)? {
                    Some(vec![x, p, y, z])
                } else {
                    None
                }
            }
        }
        LProperty::Disjoint => {
            let p = evs.sample_primitive(rng);
            if member(&x, &p)? {
                Some(vec![x, p])
            } else {
                None
            }
        }
        LProperty::Transitive => {
            let a = in_l(&x, rng);
            let z = if rng_flip(rng) { in_l(&a, rng) } else { evs.sample(rng) };
            if !evs.is_primitive(&z) && member(&x, &a)? && member(&a, &z)? && !member(&x, &z)? {
                Some(vec![x, a, z])
            } else {
                None
            }
        }
        LProperty::Overlap => match evs.sample_nonprimitive(rng) {
            Some(y) => {
                let s = evs.add(&x, &y);
                if !member(&x, &s)? || !member(&y, &s)? {
                    Some(vec![x, y])
                } else {
                    None
                }
            }
            None => None,
        },
    })
}

fn rng_flip(rng: &mut SampleRng) -> bool {
    use rand::Rng;
    rng.gen_bool(0.5)
}

fn rng_pick3(rng: &mut SampleRng) -> u8 {
    use rand::Rng;
    rng.gen_range(0..3)
}

fn exhaustive_properties(fin: &FiniteEvs) -> PropertyReport {
    let table = TestingTable::new(fin);
    let n = fin.len();
    let non = fin.nonminimal_indices();
    let prims = fin.minimal_indices();
    let el = |ix: &[usize]| ix.iter().map(|&i| fin.element(i).clone()).collect::<Vec<_>>();
    let mut verdicts = Vec::new();
    let mut push = |property, found: Option<Vec<Element>>| {
        let outcome = found.map(fail).unwrap_or(Outcome::Pass);
        verdicts.push(PropertyVerdict { property, outcome });
    };

    let self_member = non.iter().find_map(|&x| {
        if !table.contains(x, x) {
            return Some(el(&[x]));
        }
        for z in table.members(x) {
            for w in fin.up_set(z) {
                if !table.contains(x, w) {
                    return Some(el(&[x, z, w]));
                }
            }
        }
        None
    });
    push(LProperty::SelfMember, self_member);

    let antitone = non.iter().find_map(|&x| {
        for &y in &non {
            if !fin.le(x, y) {
                continue;
            }
            for z in 0..n {
                if table.contains(y, z) && !table.contains(x, z) {
                    return Some(el(&[x, y, z]));
                }
            }
        }
        None
    });
    push(LProperty::Antitone, antitone);

    let invariant = non.iter().find_map(|&x| {
        for s in fin.nonzero_scalar_indices() {
            for &p in &prims {
                let y = fin.sum(fin.times(s, x), p);
                if fin.is_minimal(y) || !table.same(x, y) {
                    return Some(el(&[x, p, y]));
                }
            }
        }
        None
    });
    push(LProperty::Invariant, invariant);

    let disjoint = non
        .iter()
        .find_map(|&x| prims.iter().find(|&&p| table.contains(x, p)).map(|&p| el(&[x, p])));
    push(LProperty::Disjoint, disjoint);

    let transitive = non.iter().find_map(|&b| {
        for a in table.members(b) {
            for z in table.members(a) {
                if !table.contains(b, z) {
                    return Some(el(&[b, a, z]));
                }
            }
        }
        None
    });
    push(LProperty::Transitive, transitive);

    let overlap = non.iter().find_map(|&x| {
        non.iter().find_map(|&y| {
            let s = fin.sum(x, y);
            (!table.contains(x, s) || !table.contains(y, s)).then(|| el(&[x, y]))
        })
    });
    push(LProperty::Overlap, overlap);

    PropertyReport {
        mode: CheckMode::Exhaustive,
        verdicts,
    }
}
