//! Feasible sets, bases, dimension, replacement and transforms, and the
//! subevs constructions `B(x)` and `G(D)`.

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::{CheckMode, Outcome, Witness};
use crate::dimension::{Cardinal, Dimension};
use crate::element::Element;
use crate::error::{EvsError, Result};
use crate::families::vectors;
use crate::finite::FiniteEvs;
use crate::linalg;
use crate::oracle::KnownBasis;
use crate::primitive::{self, SubevsReport};
use crate::scalar::Scalar;
use crate::structure::{pick_index, seeded, Evs, Feasibility, Membership};
use crate::testing::{self, finite_witness, GeneratorReport, IndependenceReport, TestingTable};

fn require_nonprimitive(evs: &dyn Evs, x: &Element) -> Result<()> {
    if !evs.contains(x) {
        return Err(EvsError::Input(format!("{x} is not an element of {}", evs.name())));
    }
    if evs.is_primitive(x) {
        return Err(EvsError::Domain(format!("{x} is primitive")));
    }
    Ok(())
}

/// Decides `x ∈ Q(X)`, i.e. `↓x∖X₀ ⊆ L(x)`. An infeasible answer carries a
/// non-primitive `y <= x` outside `L(x)`; rule answers are re-verified.
pub fn feasibility(evs: &dyn Evs, x: &Element) -> Result<Feasibility> {
    require_nonprimitive(evs, x)?;
    if let Some(fin) = evs.as_finite() {
        let xi = fin.idx(x);
        let below = fin
            .down_set(xi)
            .into_iter()
            .find(|&y| !fin.is_minimal(y) && finite_witness(fin, xi, y).is_none());
        return Ok(match below {
            Some(y) => Feasibility::Infeasible { below: fin.element(y).clone() },
            None => Feasibility::Feasible,
        });
    }
    match evs.feasible_rule(x) {
        Some(Feasibility::Infeasible { below }) => {
            let sound = evs.contains(&below)
                && evs.leq(&below, x)
                && !evs.is_primitive(&below)
                && matches!(testing::membership(evs, x, &below)?, Membership::NonMember);
            if !sound {
                return Err(EvsError::Internal(format!(
                    "feasibility rule of {} gave a bad witness {below} for {x}",
                    evs.name()
                )));
            }
            Ok(Feasibility::Infeasible { below })
        }
        Some(Feasibility::Feasible) => Ok(Feasibility::Feasible),
        None => Err(EvsError::Undecided(format!("{} has no closed-form description of Q", evs.name()))),
    }
}

pub fn is_feasible(evs: &dyn Evs, x: &Element) -> Result<bool> {
    feasibility(evs, x).map(|f| f == Feasibility::Feasible)
}

fn feasible_indices(fin: &FiniteEvs, table: &TestingTable) -> Vec<usize> {
    fin.nonminimal_indices()
        .into_iter()
        .filter(|&x| {
            fin.down_set(x)
                .into_iter()
                .all(|y| fin.is_minimal(y) || table.contains(x, y))
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FeasibleRepr {
    Explicit { members: Vec<Element> },
    Predicate { description: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FeasibleSet {
    pub owner: String,
    #[serde(flatten)]
    pub repr: FeasibleRepr,
}

impl FeasibleSet {
    pub fn members(&self) -> Option<&[Element]> {
        match &self.repr {
            FeasibleRepr::Explicit { members } => Some(members),
            FeasibleRepr::Predicate { .. } => None,
        }
    }
}

/// `Q(X)`, enumerated on finite carriers and described by the family rule
/// otherwise.
pub fn feasible_set(evs: &dyn Evs) -> Result<FeasibleSet> {
    let repr = match evs.as_finite() {
        Some(fin) => {
            let table = TestingTable::new(fin);
            let members = feasible_indices(fin, &table)
                .into_iter()
                .map(|i| fin.element(i).clone())
                .collect();
            FeasibleRepr::Explicit { members }
        }
        None => {
            let oracle = evs
                .oracle()
                .ok_or_else(|| EvsError::Undecided(format!("{} has no closed-form description of Q", evs.name())))?;
            FeasibleRepr::Predicate { description: oracle.q_description }
        }
    };
    Ok(FeasibleSet { owner: evs.name(), repr })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QLaws {
    /// `x ∈ Q ⇒ αx + p ∈ Q` for `α ≠ 0`, `p ∈ X₀`.
    pub dilation_translation: Outcome,
    /// `x ∈ Q ⇒ ↓x∖X₀ ⊆ Q`.
    pub down_closed: Outcome,
    /// `y ∈ ↓x∖X₀ ⇒ L(y) = L(x)` for `x ∈ Q`.
    pub equal_testing_sets: Outcome,
}

impl QLaws {
    pub fn all_pass(&self) -> bool {
        self.dilation_translation.passed() && self.down_closed.passed() && self.equal_testing_sets.passed()
    }
}

/// Checks the closure laws of `Q(X)` exhaustively on a finite carrier.
pub fn check_q_laws(fin: &FiniteEvs) -> QLaws {
    let table = TestingTable::new(fin);
    let q = feasible_indices(fin, &table);
    let mut in_q = vec![false; fin.len()];
    for &x in &q {
        in_q[x] = true;
    }
    let el = |i: usize| fin.element(i).clone();
    let fail = |elements: Vec<Element>, scalars: Vec<Scalar>| Outcome::Fail { witness: Witness { elements, scalars } };

    let mut dilation = Outcome::Pass;
    'd: for &x in &q {
        for s in fin.nonzero_scalar_indices() {
            for p in fin.minimal_indices() {
                let y = fin.sum(fin.times(s, x), p);
                if !in_q[y] {
                    dilation = fail(vec![el(x), el(p)], vec![fin.scalar(s).clone()]);
                    break 'd;
                }
            }
        }
    }
    let mut down = Outcome::Pass;
    let mut equal = Outcome::Pass;
    for &x in &q {
        for y in fin.down_set(x) {
            if fin.is_minimal(y) {
                continue;
            }
            if down.passed() && !in_q[y] {
                down = fail(vec![el(x), el(y)], vec![]);
            }
            if equal.passed() && !table.same(x, y) {
                equal = fail(vec![el(x), el(y)], vec![]);
            }
        }
    }
    QLaws { dilation_translation: dilation, down_closed: down, equal_testing_sets: equal }
}

/// How coverage of `X∖X₀` by a basis was established.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Coverage {
    /// Every non-primitive element with a basis element whose testing set
    /// contains it.
    Exhaustive { covers: Vec<Cover> },
    Sampled { seed: u64, trials: usize, covered: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cover {
    pub element: Element,
    pub by: Element,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisCertificate {
    /// The basis, in canonical order. For a schema basis this lists the
    /// members met while checking coverage.
    pub basis: Vec<Element>,
    /// Set when the basis is infinite and described by a schema.
    pub schema: Option<String>,
    pub independence: IndependenceReport,
    pub coverage: Coverage,
    pub primitive_dimension: usize,
    pub dimension: Dimension,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoBasisEvidence {
    /// An element of `X∖X₀` outside every testing set of `Q(X)`.
    Uncovered { element: Element, feasible: usize },
    /// Every sampled non-primitive element was shown infeasible.
    QEmptyAtSamples { seed: u64, trials: usize, witnesses: Vec<Cover> },
}

impl NoBasisEvidence {
    pub fn summary(&self) -> String {
        match self {
            NoBasisEvidence::Uncovered { element, .. } => format!("Q does not generate: {element} is uncovered"),
            NoBasisEvidence::QEmptyAtSamples { .. } => "Q empty at all samples".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum BasisOutcome {
    Found(BasisCertificate),
    NoBasis(NoBasisEvidence),
}

impl BasisOutcome {
    pub fn dimension(&self) -> Dimension {
        match self {
            BasisOutcome::Found(c) => c.dimension,
            BasisOutcome::NoBasis(_) => Dimension::NoBasis,
        }
    }

    pub fn certificate(&self) -> Option<&BasisCertificate> {
        match self {
            BasisOutcome::Found(c) => Some(c),
            BasisOutcome::NoBasis(_) => None,
        }
    }
}

fn primitive_dimension(evs: &dyn Evs) -> Result<usize> {
    if evs.as_finite().is_some() {
        return primitive::primitive_dimension(evs);
    }
    evs.primitive_basis()
        .map(|b| b.len())
        .ok_or_else(|| EvsError::Undecided(format!("{} has no closed-form primitive basis", evs.name())))
}

/// Result of checking a candidate basis without assuming any theorem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisCheck {
    pub independence: IndependenceReport,
    /// A member outside `Q(X)` with its infeasibility witness.
    pub outside_q: Option<Cover>,
    pub generator: GeneratorReport,
}

impl BasisCheck {
    pub fn is_basis(&self) -> bool {
        self.independence.independent && self.outside_q.is_none() && self.generator.generates
    }
}

/// Independence, membership in `Q(X)` and generation of `set`; generation is
/// exhaustive on finite carriers and sampled otherwise.
pub fn verify_basis(evs: &dyn Evs, set: &[Element], seed: u64, trials: usize) -> Result<BasisCheck> {
    let mut sorted = set.to_vec();
    sorted.sort();
    sorted.dedup();
    let independence = testing::independence(evs, &sorted)?;
    let mut outside_q = None;
    for b in &sorted {
        if let Feasibility::Infeasible { below } = feasibility(evs, b)? {
            outside_q = Some(Cover { element: b.clone(), by: below });
            break;
        }
    }
    let generator = testing::generator(evs, &sorted, seed, trials)?;
    Ok(BasisCheck { independence, outside_q, generator })
}

fn covers(evs: &dyn Evs, set: &[Element]) -> Result<Vec<Cover>> {
    let fin = evs.as_finite().expect("finite carrier");
    let table = TestingTable::new(fin);
    let idx: Vec<usize> = set.iter().map(|b| fin.idx(b)).collect();
    let mut out = Vec::new();
    for z in fin.nonminimal_indices() {
        let by = idx
            .iter()
            .find(|&&b| table.contains(b, z))
            .ok_or_else(|| EvsError::Internal(format!("{} is uncovered", fin.element(z))))?;
        out.push(Cover { element: fin.element(z).clone(), by: fin.element(*by).clone() });
    }
    Ok(out)
}

/// Builds a certificate for `set`, or returns the failed check.
pub fn certify(
    evs: &dyn Evs,
    set: &[Element],
    seed: u64,
    trials: usize,
) -> Result<std::result::Result<BasisCertificate, BasisCheck>> {
    let check = verify_basis(evs, set, seed, trials)?;
    if !check.is_basis() {
        return Ok(Err(check));
    }
    let basis = check.independence.checked.clone();
    let coverage = if evs.as_finite().is_some() {
        Coverage::Exhaustive { covers: covers(evs, &basis)? }
    } else {
        Coverage::Sampled { seed, trials, covered: trials }
    };
    let primitive_dimension = primitive_dimension(evs)?;
    Ok(Ok(BasisCertificate {
        dimension: Dimension::finite(basis.len(), primitive_dimension),
        basis,
        schema: None,
        independence: check.independence,
        coverage,
        primitive_dimension,
    }))
}

/// `X` has a basis iff `Q(X)` generates `X∖X₀`. Families answer from an
/// oracle-certified description of `Q`; without one the answer is undecided.
pub fn has_basis(evs: &dyn Evs) -> Result<bool> {
    if let Some(fin) = evs.as_finite() {
        let table = TestingTable::new(fin);
        let q = feasible_indices(fin, &table);
        return Ok(fin
            .nonminimal_indices()
            .into_iter()
            .all(|z| q.iter().any(|&x| table.contains(x, z))));
    }
    let oracle = evs
        .oracle()
        .ok_or_else(|| EvsError::Undecided(format!("{} has no certified description of Q", evs.name())))?;
    Ok(oracle.has_basis)
}

/// Finite carriers: one canonical representative per `L`-class of `Q(X)`,
/// then full verification. Families: the oracle basis, verified pairwise
/// for independence and on `trials` samples for coverage.
pub fn find_basis(evs: &dyn Evs, seed: u64, trials: usize) -> Result<BasisOutcome> {
    if let Some(fin) = evs.as_finite() {
        let table = TestingTable::new(fin);
        let q = feasible_indices(fin, &table);
        let mut reps: Vec<usize> = Vec::new();
        for &x in &q {
            if !reps.iter().any(|&r| table.same(r, x)) {
                reps.push(x);
            }
        }
        if let Some(z) = fin
            .nonminimal_indices()
            .into_iter()
            .find(|&z| !reps.iter().any(|&r| table.contains(r, z)))
        {
            return Ok(BasisOutcome::NoBasis(NoBasisEvidence::Uncovered {
                element: fin.element(z).clone(),
                feasible: q.len(),
            }));
        }
        let set: Vec<Element> = reps.iter().map(|&r| fin.element(r).clone()).collect();
        return match certify(evs, &set, seed, trials)? {
            Ok(cert) => Ok(BasisOutcome::Found(cert)),
            Err(check) => Err(EvsError::Internal(format!(
                "class representatives of Q failed verification: {}",
                serde_json::to_string(&check).unwrap_or_default()
            ))),
        };
    }

    let oracle = evs
        .oracle()
        .ok_or_else(|| EvsError::Undecided(format!("{} has no certified description of Q", evs.name())))?;
    if !oracle.has_basis {
        return no_basis_by_sampling(evs, seed, trials).map(BasisOutcome::NoBasis);
    }
    match oracle.basis {
        KnownBasis::Finite(set) => match certify(evs, &set, seed, trials)? {
            Ok(cert) => Ok(BasisOutcome::Found(cert)),
            Err(check) => Err(EvsError::Internal(format!(
                "oracle basis of {} failed verification: {}",
                evs.name(),
                serde_json::to_string(&check).unwrap_or_default()
            ))),
        },
        KnownBasis::Directions { dim, .. } => directions_certificate(evs, dim, oracle.dimension, seed, trials)
            .map(BasisOutcome::Found),
        KnownBasis::None => Err(EvsError::Undecided(format!("the oracle of {} names no basis", evs.name()))),
    }
}

fn no_basis_by_sampling(evs: &dyn Evs, seed: u64, trials: usize) -> Result<NoBasisEvidence> {
    let mut rng = seeded(seed);
    let mut witnesses = Vec::new();
    for _ in 0..trials {
        let Some(x) = evs.sample_nonprimitive(&mut rng) else { continue };
        match feasibility(evs, &x)? {
            Feasibility::Infeasible { below } => witnesses.push(Cover { element: x, by: below }),
            Feasibility::Feasible => {
                return Err(EvsError::Internal(format!(
                    "{} is recorded without a basis, yet {x} is feasible",
                    evs.name()
                )))
            }
        }
    }
    Ok(NoBasisEvidence::QEmptyAtSamples { seed, trials, witnesses })
}

/// The basis element `{0, v}` covering a point set, found among the
/// directions between its points.
fn direction_cover(evs: &dyn Evs, z: &Element) -> Result<Option<Element>> {
    let pts = z.as_set();
    let origin = vectors::zeros(evs.field(), pts[0].len());
    for a in pts {
        for b in pts {
            if a == b {
                continue;
            }
            let cand = Element::set(vec![origin.clone(), vectors::normalize(&vectors::sub(b, a))]);
            if evs.contains(&cand) && testing::is_member(evs, &cand, z)? {
                return Ok(Some(cand));
            }
        }
    }
    Ok(None)
}

fn directions_certificate(
    evs: &dyn Evs,
    dim: usize,
    dimension: Dimension,
    seed: u64,
    trials: usize,
) -> Result<BasisCertificate> {
    let mut rng = seeded(seed);
    let mut met: Vec<Element> = Vec::new();
    let mut covered = 0;
    for _ in 0..trials {
        let Some(z) = evs.sample_nonprimitive(&mut rng) else { continue };
        let by = direction_cover(evs, &z)?
            .ok_or_else(|| EvsError::Internal(format!("no direction of {} covers {z}", evs.name())))?;
        if !is_feasible(evs, &by)? {
            return Err(EvsError::Internal(format!("direction {by} is outside Q")));
        }
        covered += 1;
        if !met.contains(&by) {
            met.push(by);
        }
    }
    met.sort();
    let independence = testing::independence(evs, &met)?;
    if !independence.independent {
        return Err(EvsError::Internal(format!(
            "distinct directions are dependent: {}",
            independence.dependence.as_ref().map(|d| d.to_string()).unwrap_or_default()
        )));
    }
    let primitive_dimension = primitive_dimension(evs)?;
    Ok(BasisCertificate {
        basis: met,
        schema: Some(format!("{{0, v}} for one normalized v per line through 0 in dimension {dim}")),
        independence,
        coverage: Coverage::Sampled { seed, trials, covered },
        primitive_dimension,
        dimension,
    })
}

/// `[|B| : dim X₀]` from a verified basis, or the no-basis marker.
pub fn dimension(evs: &dyn Evs, seed: u64, trials: usize) -> Result<Dimension> {
    find_basis(evs, seed, trials).map(|b| b.dimension())
}

/// Bitset of the non-primitive elements of `L(x)`.
fn coverage_bits(table: &TestingTable, x: usize, slots: &[Option<usize>]) -> Vec<u64> {
    let words = slots.iter().flatten().count().div_ceil(64);
    let mut bits = vec![0u64; words];
    for z in table.members(x) {
        if let Some(k) = slots[z] {
            bits[k / 64] |= 1 << (k % 64);
        }
    }
    bits
}

struct Search<'a> {
    q: &'a [usize],
    table: &'a TestingTable,
    bits: &'a [Vec<u64>],
    full: &'a [u64],
    limit: usize,
    found: &'a AtomicUsize,
}

impl Search<'_> {
    fn extend(&self, chosen: &mut Vec<usize>, acc: &[u64], from: usize, out: &mut Vec<Vec<usize>>) {
        if self.found.load(Ordering::Relaxed) >= self.limit {
            return;
        }
        if acc == self.full {
            out.push(chosen.iter().map(|&k| self.q[k]).collect());
            self.found.fetch_add(1, Ordering::Relaxed);
        }
        for k in from..self.q.len() {
            let x = self.q[k];
            if chosen.iter().any(|&c| self.table.dependent(self.q[c], x)) {
                continue;
            }
            let next: Vec<u64> = acc.iter().zip(&self.bits[k]).map(|(a, b)| a | b).collect();
            chosen.push(k);
            self.extend(chosen, &next, k + 1, out);
            chosen.pop();
        }
    }
}

/// Every orderly independent generating subset of `Q(X)`, up to `limit`,
/// in canonical order. The empty list means there is no basis.
pub fn enumerate_bases(fin: &FiniteEvs, limit: usize) -> Vec<Vec<Element>> {
    let table = TestingTable::new(fin);
    let q = feasible_indices(fin, &table);
    let mut slots = vec![None; fin.len()];
    for (k, z) in fin.nonminimal_indices().into_iter().enumerate() {
        slots[z] = Some(k);
    }
    let targets = slots.iter().flatten().count();
    let mut full = vec![0u64; targets.div_ceil(64)];
    for k in 0..targets {
        full[k / 64] |= 1 << (k % 64);
    }
    if targets == 0 {
        return if limit > 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let bits: Vec<Vec<u64>> = q.iter().map(|&x| coverage_bits(&table, x, &slots)).collect();
    let found = AtomicUsize::new(0);
    let search = Search { q: &q, table: &table, bits: &bits, full: &full, limit, found: &found };
    let mut per_root: Vec<Vec<Vec<usize>>> = (0..q.len())
        .into_par_iter()
        .map(|k| {
            let mut out = Vec::new();
            let mut chosen = vec![k];
            search.extend(&mut chosen, &bits[k], k + 1, &mut out);
            out
        })
        .collect();
    let mut all: Vec<Vec<Element>> = per_root
        .iter_mut()
        .flat_map(|v| v.drain(..))
        .map(|set| set.into_iter().map(|i| fin.element(i).clone()).collect())
        .collect();
    all.sort();
    all.truncate(limit);
    all
}

/// `S` generates `X∖X₀` and no proper subset does. Generation is monotone
/// in `S`, so dropping single elements suffices.
pub fn minimal_generator_check(fin: &FiniteEvs, set: &[Element]) -> Result<bool> {
    let mut idx = Vec::with_capacity(set.len());
    for s in set {
        let i = fin
            .index_of(s)
            .ok_or_else(|| EvsError::Input(format!("{s} is not an element of {}", fin.name())))?;
        if fin.is_minimal(i) {
            return Err(EvsError::Domain(format!("{s} is primitive")));
        }
        idx.push(i);
    }
    idx.sort_unstable();
    idx.dedup();
    let table = TestingTable::new(fin);
    let targets = fin.nonminimal_indices();
    let generates = |skip: Option<usize>| {
        targets.iter().all(|&z| {
            idx.iter()
                .enumerate()
                .any(|(k, &s)| Some(k) != skip && table.contains(s, z))
        })
    };
    Ok(generates(None) && (0..idx.len()).all(|k| !generates(Some(k))))
}

/// `(B∖{x}) ∪ {y}` for `y ∈ ↓x∖X₀`, freshly verified.
pub fn replace_basis_element(
    evs: &dyn Evs,
    basis: &[Element],
    x: &Element,
    y: &Element,
    seed: u64,
    trials: usize,
) -> Result<BasisCertificate> {
    if !basis.contains(x) {
        return Err(EvsError::Domain(format!("{x} is not in the basis")));
    }
    require_nonprimitive(evs, y)?;
    if !evs.leq(y, x) {
        return Err(EvsError::Domain(format!("{y} is not below {x}")));
    }
    let mut next: Vec<Element> = basis.iter().filter(|b| *b != x).cloned().collect();
    next.push(y.clone());
    verified(evs, &next, seed, trials, "replacement")
}

fn verified(evs: &dyn Evs, set: &[Element], seed: u64, trials: usize, what: &str) -> Result<BasisCertificate> {
    match certify(evs, set, seed, trials)? {
        Ok(cert) => Ok(cert),
        Err(check) => Err(EvsError::Internal(format!(
            "{what} did not yield a basis: {}",
            serde_json::to_string(&check).unwrap_or_default()
        ))),
    }
}

/// `{αb + p : b ∈ B}` for `α ≠ 0`, `p ∈ X₀`, freshly verified.
pub fn transform_basis(
    evs: &dyn Evs,
    basis: &[Element],
    alpha: &Scalar,
    p: &Element,
    seed: u64,
    trials: usize,
) -> Result<BasisCertificate> {
    if alpha.is_zero() {
        return Err(EvsError::Domain("the dilation factor must be nonzero".into()));
    }
    if !evs.contains(p) || !evs.is_primitive(p) {
        return Err(EvsError::Domain(format!("{p} is not primitive")));
    }
    if !verify_basis(evs, basis, seed, trials)?.is_basis() {
        return Err(EvsError::Domain("the input set is not a basis".into()));
    }
    let next: Vec<Element> = basis.iter().map(|b| evs.add(&evs.scale(alpha, b), p)).collect();
    verified(evs, &next, seed, trials, "transform")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalIndependent {
    pub set: Vec<Element>,
    pub generates: bool,
    pub certificate: Option<BasisCertificate>,
}

/// Greedy maximal orderly independent subset of `Q(X)` in canonical order,
/// verified as a basis when it generates.
pub fn maximal_oi_in_q(fin: &FiniteEvs) -> Result<MaximalIndependent> {
    let table = TestingTable::new(fin);
    let mut chosen: Vec<usize> = Vec::new();
    for x in feasible_indices(fin, &table) {
        if !chosen.iter().any(|&c| table.dependent(c, x)) {
            chosen.push(x);
        }
    }
    let set: Vec<Element> = chosen.iter().map(|&i| fin.element(i).clone()).collect();
    let generates = fin
        .nonminimal_indices()
        .into_iter()
        .all(|z| chosen.iter().any(|&c| table.contains(c, z)));
    let certificate = if generates { Some(verified(fin, &set, 0, 0, "maximal independent subset of Q")?) } else { None };
    Ok(MaximalIndependent { set, generates, certificate })
}

/// A subevs `G(D) = {Σ αᵢdᵢ + p : p ∈ W}` with its certificate.
#[derive(Clone, Debug, Serialize)]
pub struct SubEvsView {
    pub ambient: String,
    /// The generating set `D`.
    pub generators: Vec<Element>,
    /// A primitive `q_d <= d` in `W` for each generator.
    pub anchors: Vec<Element>,
    /// A vector-space basis of `W`.
    pub primitive_span: Vec<Element>,
    /// The materialized carrier, on finite ambients.
    pub carrier: Option<Vec<Element>>,
    pub report: SubevsReport,
    pub basis: Vec<Element>,
    pub dimension: Dimension,
    #[serde(skip)]
    pub instance: Option<FiniteEvs>,
}

/// The subevs `B(x)` generated by one element `x > θ`, of dimension `[1:0]`.
pub fn construct_bx_subevs(evs: &dyn Evs, x: &Element, seed: u64, trials: usize) -> Result<SubEvsView> {
    if !evs.contains(x) {
        return Err(EvsError::Input(format!("{x} is not an element of {}", evs.name())));
    }
    let zero = evs.zero();
    if *x == zero || !evs.leq(&zero, x) {
        return Err(EvsError::Domain(format!("{x} is not in ↑θ∖{{θ}}")));
    }
    let view = generated(evs, vec![x.clone()], vec![zero], Vec::new(), seed, trials)?;
    expect_dimension(view, 1, 0)
}

fn expect_dimension(view: SubEvsView, gamma: usize, delta: usize) -> Result<SubEvsView> {
    if view.dimension != Dimension::finite(gamma, delta) || !view.report.passed() {
        return Err(EvsError::Internal(format!(
            "constructed subevs has dimension {} (expected [{gamma}:{delta}]), subevs checks {}",
            view.dimension,
            if view.report.passed() { "passed" } else { "failed" }
        )));
    }
    Ok(view)
}

/// A subevs of dimension `[γ:δ]` inside an evs with basis `B`, following
/// the two cases of the construction: for `δ < γ` the generators beyond the
/// first `δ` are shifted by `-p_c` so that they sit over `θ`, otherwise the
/// first `γ` basis elements are used as they are.
pub fn construct_graded_subevs(
    evs: &dyn Evs,
    basis: &[Element],
    gamma: usize,
    delta: usize,
    seed: u64,
    trials: usize,
) -> Result<SubEvsView> {
    let primitive_dim = primitive_dimension(evs)?;
    if gamma > basis.len() || delta > primitive_dim {
        return Err(EvsError::Domain(format!(
            "[{gamma}:{delta}] exceeds [{}:{primitive_dim}]",
            basis.len()
        )));
    }
    let mut c = basis.to_vec();
    c.sort();
    c.truncate(gamma);
    let minus_one = evs.field().from_i64(-1);
    let mut generators = Vec::with_capacity(gamma);
    let mut anchors = Vec::with_capacity(gamma);
    for (k, d) in c.iter().enumerate() {
        let p = primitive::primitives_of(evs, d)?
            .into_iter()
            .min()
            .expect("non-empty primitive set");
        if delta < gamma && k >= delta {
            generators.push(evs.add(d, &evs.scale(&minus_one, &p)));
            anchors.push(evs.zero());
        } else {
            generators.push(d.clone());
            anchors.push(p);
        }
    }
    let span = primitive_span(evs, &anchors, primitive_dim, delta)?;
    let view = generated(evs, generators, anchors, span, seed, trials)?;
    expect_dimension(view, gamma, delta)
}

/// A basis of a `target`-dimensional subspace of `X₀` containing `anchors`.
fn primitive_span(evs: &dyn Evs, anchors: &[Element], ambient: usize, target: usize) -> Result<Vec<Element>> {
    let field = evs.field();
    let prim_basis = evs
        .primitive_basis()
        .ok_or_else(|| EvsError::Undecided(format!("{} has no closed-form primitive basis", evs.name())))?;
    let mut coords = Vec::with_capacity(anchors.len());
    for a in anchors {
        coords.push(
            evs.primitive_coordinates(a)
                .ok_or_else(|| EvsError::Internal(format!("no coordinates for the primitive {a}")))?,
        );
    }
    let rows = linalg::extend_to_dimension(field, ambient, &coords, target)
        .ok_or_else(|| EvsError::Domain(format!("the anchors span more than {target} dimensions")))?;
    Ok(rows
        .iter()
        .map(|row| {
            row.iter()
                .zip(&prim_basis)
                .fold(evs.zero(), |acc, (c, b)| evs.add(&acc, &evs.scale(c, b)))
        })
        .collect())
}

fn generated(
    evs: &dyn Evs,
    generators: Vec<Element>,
    anchors: Vec<Element>,
    span: Vec<Element>,
    seed: u64,
    trials: usize,
) -> Result<SubEvsView> {
    for (d, q) in generators.iter().zip(&anchors) {
        if !evs.is_primitive(q) || !evs.leq(q, d) {
            return Err(EvsError::Internal(format!("{q} is not a primitive below {d}")));
        }
    }
    if let Some(fin) = evs.as_finite() {
        let mut seed_idx = vec![fin.zero_index()];
        seed_idx.extend(generators.iter().chain(&span).map(|e| fin.idx(e)));
        let members = fin.closure(&seed_idx);
        let carrier: Vec<Element> = members.iter().map(|&i| fin.element(i).clone()).collect();
        let report = primitive::validate_subevs(fin, &primitive::Subset::Finite(carrier.clone()), seed, trials)?;
        let sub = fin.restrict(format!("G(D) in {}", fin.name()), &members)?;
        let outcome = find_basis(&sub, seed, trials)?;
        let (basis, dimension) = match &outcome {
            BasisOutcome::Found(c) => (c.basis.clone(), c.dimension),
            BasisOutcome::NoBasis(_) => (Vec::new(), Dimension::NoBasis),
        };
        return Ok(SubEvsView {
            ambient: evs.name(),
            generators,
            anchors,
            primitive_span: span,
            carrier: Some(carrier),
            report,
            basis,
            dimension,
            instance: Some(sub),
        });
    }
    symbolic_generated(evs, generators, anchors, span, seed, trials)
}

/// Sampled certificate of `G(D)` on an infinite ambient. Each sample
/// `y = Σ αₖ d_{iₖ} + p` comes with `Σ αₖ q_{iₖ} + p`, a primitive of the
/// subevs below `y` (strictly below unless `y` is primitive), and with
/// `αⱼ dⱼ + (Σ_{k≠j} αₖ q_{iₖ} + p) <= y`, placing `y` in `L_Y(dⱼ)`.
fn symbolic_generated(
    evs: &dyn Evs,
    generators: Vec<Element>,
    anchors: Vec<Element>,
    span: Vec<Element>,
    seed: u64,
    trials: usize,
) -> Result<SubEvsView> {
    let independence = testing::independence(evs, &generators)?;
    let mut rng = seeded(seed);
    let fail = |elements: Vec<Element>| Outcome::Fail { witness: Witness { elements, scalars: vec![] } };
    let mut below = Outcome::SampledPass { seed, trials };
    let mut primitives = Outcome::SampledPass { seed, trials };
    let mut coverage_failed = None;
    for _ in 0..trials {
        let mut p = evs.zero();
        for w in &span {
            p = evs.add(&p, &evs.scale(&evs.sample_scalar(&mut rng), w));
        }
        let terms: Vec<(usize, Scalar)> = if generators.is_empty() {
            Vec::new()
        } else {
            (0..rng.gen_range(1..=3))
                .map(|_| (pick_index(generators.len(), &mut rng), evs.sample_scalar(&mut rng)))
                .collect()
        };
        let y = terms
            .iter()
            .fold(p.clone(), |acc, (i, a)| evs.add(&acc, &evs.scale(a, &generators[*i])));
        let floor = terms
            .iter()
            .fold(p.clone(), |acc, (i, a)| evs.add(&acc, &evs.scale(a, &anchors[*i])));
        if !evs.is_primitive(&floor) || !evs.leq(&floor, &y) {
            below = fail(vec![y.clone(), floor.clone()]);
        }
        if evs.is_primitive(&y) {
            if y != floor {
                primitives = fail(vec![y.clone(), floor.clone()]);
            }
            continue;
        }
        let Some(j) = terms.iter().position(|(_, a)| !a.is_zero()) else {
            primitives = fail(vec![y.clone()]);
            continue;
        };
        let rest = terms
            .iter()
            .enumerate()
            .filter(|(k, _)| *k != j)
            .fold(p.clone(), |acc, (_, (i, a))| evs.add(&acc, &evs.scale(a, &anchors[*i])));
        let (gj, aj) = (&generators[terms[j].0], &terms[j].1);
        let lhs = evs.add(&evs.scale(aj, gj), &rest);
        if !evs.leq(&lhs, &y) && coverage_failed.is_none() {
            coverage_failed = Some(y.clone());
        }
    }
    let report = SubevsReport {
        closure: Outcome::SampledPass { seed, trials },
        primitives,
        below,
        y0: None,
        mode: CheckMode::Sampled { seed, trials },
    };
    let dimension = if independence.independent && coverage_failed.is_none() {
        Dimension::Known { evs: Cardinal::Finite(generators.len()), primitive: Cardinal::Finite(span.len()) }
    } else {
        Dimension::NoBasis
    };
    let mut basis = generators.clone();
    basis.sort();
    Ok(SubEvsView {
        ambient: evs.name(),
        generators,
        anchors,
        primitive_span: span,
        carrier: None,
        report,
        basis,
        dimension,
        instance: None,
    })
}
