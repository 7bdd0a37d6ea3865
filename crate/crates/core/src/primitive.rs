//! The primitive space X₀, primitive sets P_x, subevs checks, idempotents
//! and structural classification.

use serde::Serialize;

use crate::axioms::{CheckMode, Outcome, Witness};
use crate::element::Element;
use crate::error::{EvsError, Result};
use crate::structure::{pick, seeded, Evs, SampleRng};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimitiveSpace {
    /// The minimal elements, listed when the carrier is finite.
    pub elements: Option<Vec<Element>>,
    /// A vector-space basis of X₀.
    pub basis: Vec<Element>,
    pub dimension: usize,
    pub mode: CheckMode,
}

fn not_vector_space(msg: String) -> EvsError {
    EvsError::InvalidInstance(format!("the minimal elements do not form a vector space: {msg}"))
}

/// Extracts X₀ and checks it is a vector space under the induced
/// operations. Finite carriers are checked exhaustively and the dimension
/// is `log_p |X₀|`; families are sampled and report their closed-form basis.
pub fn primitive_space(evs: &dyn Evs, seed: u64, trials: usize) -> Result<PrimitiveSpace> {
    let field = evs.field();
    let minus_one = field.from_i64(-1);
    if let Some(fin) = evs.as_finite() {
        let mins = fin.minimal_indices();
        let is_min = |i: usize| fin.is_minimal(i);
        if !is_min(fin.zero_index()) {
            return Err(not_vector_space(format!("θ = {} is not minimal", fin.zero())));
        }
        let m1 = fin.scalar_index(&minus_one).expect("-1 is tabulated");
        for &a in &mins {
            if fin.sum(a, fin.times(m1, a)) != fin.zero_index() {
                return Err(not_vector_space(format!("{} has no additive inverse", fin.element(a))));
            }
            for &b in &mins {
                if !is_min(fin.sum(a, b)) {
                    return Err(not_vector_space(format!(
                        "{} + {} is not minimal",
                        fin.element(a),
                        fin.element(b)
                    )));
                }
            }
            for s in 0..fin.scalars().len() {
                if !is_min(fin.times(s, a)) {
                    return Err(not_vector_space(format!("{} · {} is not minimal", fin.scalar(s), fin.element(a))));
                }
                for t in 0..fin.scalars().len() {
                    if let Some(st) = fin.scalar_index(&fin.scalar(s).add(fin.scalar(t))) {
                        if fin.times(st, a) != fin.sum(fin.times(s, a), fin.times(t, a)) {
                            return Err(not_vector_space(format!(
                                "({} + {}) · {} differs from the sum of the multiples",
                                fin.scalar(s),
                                fin.scalar(t),
                                fin.element(a)
                            )));
                        }
                    }
                }
            }
        }
        let dimension = match field.modulus() {
            Some(p) => {
                let mut size = 1usize;
                let mut k = 0;
                while size < mins.len() {
                    size *= p as usize;
                    k += 1;
                }
                if size != mins.len() {
                    return Err(not_vector_space(format!("|X₀| = {} is not a power of {p}", mins.len())));
                }
                k
            }
            None if mins.len() == 1 => 0,
            None => return Err(not_vector_space("a finite rational vector space must be {θ}".into())),
        };
        let basis = evs.primitive_basis().unwrap_or_default();
        if basis.len() != dimension {
            return Err(not_vector_space(format!(
                "a spanning set of X₀ has {} elements, expected {dimension}",
                basis.len()
            )));
        }
        return Ok(PrimitiveSpace {
            elements: Some(mins.iter().map(|&i| fin.element(i).clone()).collect()),
            basis,
            dimension,
            mode: CheckMode::Exhaustive,
        });
    }

    let basis = evs
        .primitive_basis()
        .ok_or_else(|| EvsError::Undecided(format!("{} has no closed-form primitive basis", evs.name())))?;
    let mut rng = seeded(seed);
    for _ in 0..trials {
        let p = evs.sample_primitive(&mut rng);
        let q = evs.sample_primitive(&mut rng);
        let a = evs.sample_scalar(&mut rng);
        let b = evs.sample_scalar(&mut rng);
        if !evs.is_primitive(&p) {
            return Err(not_vector_space(format!("sampled primitive {p} is not minimal")));
        }
        if !evs.is_primitive(&evs.add(&p, &q)) || !evs.is_primitive(&evs.scale(&a, &p)) {
            return Err(not_vector_space(format!("{p}, {q} leave X₀ under the operations")));
        }
        if evs.add(&p, &evs.scale(&minus_one, &p)) != evs.zero() {
            return Err(not_vector_space(format!("{p} has no additive inverse")));
        }
        let lhs = evs.scale(&a.add(&b), &p);
        let rhs = evs.add(&evs.scale(&a, &p), &evs.scale(&b, &p));
        if lhs != rhs {
            return Err(not_vector_space(format!("({a} + {b}) · {p} differs from the sum of the multiples")));
        }
    }
    Ok(PrimitiveSpace {
        elements: None,
        dimension: basis.len(),
        basis,
        mode: CheckMode::Sampled { seed, trials },
    })
}

/// Dimension of X₀ without the sampled vector-space checks.
pub fn primitive_dimension(evs: &dyn Evs) -> Result<usize> {
    primitive_space(evs, 0, 0).map(|s| s.dimension)
}

/// `P_x`: all primitives below `x`. An empty answer means A6 fails.
pub fn primitives_of(evs: &dyn Evs, x: &Element) -> Result<Vec<Element>> {
    if !evs.contains(x) {
        return Err(EvsError::Input(format!("{x} is not an element of {}", evs.name())));
    }
    let ps = evs.primitives_of(x);
    if ps.is_empty() {
        return Err(EvsError::InvalidInstance(format!("no primitive lies below {x}")));
    }
    Ok(ps)
}

/// A subset of a symbolic carrier, given by membership and a sampler.
pub struct SubsetPredicate<'a> {
    pub name: String,
    pub contains: Box<dyn Fn(&Element) -> bool + 'a>,
    pub sample: Box<dyn Fn(&mut SampleRng) -> Element + 'a>,
}

pub enum Subset<'a> {
    Finite(Vec<Element>),
    Predicate(SubsetPredicate<'a>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubevsReport {
    /// `αx + y ∈ Y` for all `α`, `x, y ∈ Y`.
    pub closure: Outcome,
    /// Every minimal element of `Y` is minimal in `X`.
    pub primitives: Outcome,
    /// Every `y ∈ Y` dominates a primitive of `Y`.
    pub below: Outcome,
    /// `Y₀ = X₀ ∩ Y` when the subset is finite and all checks pass.
    pub y0: Option<Vec<Element>>,
    pub mode: CheckMode,
}

impl SubevsReport {
    pub fn passed(&self) -> bool {
        self.closure.passed() && self.primitives.passed() && self.below.passed()
    }
}

fn fail_with(elements: Vec<Element>, scalars: Vec<crate::scalar::Scalar>) -> Outcome {
    Outcome::Fail { witness: Witness { elements, scalars } }
}

pub fn validate_subevs(evs: &dyn Evs, y: &Subset<'_>, seed: u64, trials: usize) -> Result<SubevsReport> {
    match y {
        Subset::Finite(members) => validate_finite_subset(evs, members),
        Subset::Predicate(pred) => Ok(validate_predicate(evs, pred, seed, trials)),
    }
}

fn validate_finite_subset(evs: &dyn Evs, members: &[Element]) -> Result<SubevsReport> {
    let fin = evs
        .as_finite()
        .ok_or_else(|| EvsError::Input("finite subsets need a finite carrier".into()))?;
    let mut idx = Vec::with_capacity(members.len());
    for m in members {
        idx.push(
            fin.index_of(m)
                .ok_or_else(|| EvsError::Input(format!("{m} is not an element of {}", fin.name())))?,
        );
    }
    idx.sort_unstable();
    idx.dedup();
    let inside = |i: usize| idx.binary_search(&i).is_ok();
    let el = |i: usize| fin.element(i).clone();

    let mut closure = Outcome::Pass;
    'c: for &x in &idx {
        for &z in &idx {
            for s in 0..fin.scalars().len() {
                if !inside(fin.sum(fin.times(s, x), z)) {
                    closure = fail_with(vec![el(x), el(z)], vec![fin.scalar(s).clone()]);
                    break 'c;
                }
            }
        }
    }
    let y_minimal = |i: usize| idx.iter().all(|&j| j == i || !fin.le(j, i));
    let primitives = match idx.iter().find(|&&i| y_minimal(i) && !fin.is_minimal(i)) {
        Some(&i) => fail_with(vec![el(i)], vec![]),
        None => Outcome::Pass,
    };
    let below = match idx
        .iter()
        .find(|&&i| !idx.iter().any(|&p| y_minimal(p) && fin.le(p, i)))
    {
        Some(&i) => fail_with(vec![el(i)], vec![]),
        None => Outcome::Pass,
    };
    let mut report = SubevsReport {
        closure,
        primitives,
        below,
        y0: None,
        mode: CheckMode::Exhaustive,
    };
    if report.passed() {
        report.y0 = Some(idx.iter().filter(|&&i| fin.is_minimal(i)).map(|&i| el(i)).collect());
    }
    Ok(report)
}

fn validate_predicate(evs: &dyn Evs, pred: &SubsetPredicate<'_>, seed: u64, trials: usize) -> SubevsReport {
    let mut rng = seeded(seed);
    let mut closure = Outcome::SampledPass { seed, trials };
    let mut primitives = Outcome::SampledPass { seed, trials };
    let mut below = Outcome::SampledPass { seed, trials };
    for _ in 0..trials {
        let x = (pred.sample)(&mut rng);
        let z = (pred.sample)(&mut rng);
        let a = evs.sample_scalar(&mut rng);
        if closure.passed() && !(pred.contains)(&evs.add(&evs.scale(&a, &x), &z)) {
            closure = fail_with(vec![x.clone(), z.clone()], vec![a]);
        }
        // A primitive of X inside Y below x shows x is not minimal in Y
        // unless it is primitive itself, and supplies the Y-primitive below x.
        let inside: Vec<Element> = evs
            .primitives_of(&x)
            .into_iter()
            .filter(|p| (pred.contains)(p))
            .collect();
        if inside.is_empty() {
            if primitives.passed() && !evs.is_primitive(&x) {
                primitives = fail_with(vec![x.clone()], vec![]);
            }
            if below.passed() {
                below = fail_with(vec![x.clone()], vec![]);
            }
        }
    }
    SubevsReport {
        closure,
        primitives,
        below,
        y0: None,
        mode: CheckMode::Sampled { seed, trials },
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Idempotents {
    pub elements: Vec<Element>,
    pub mode: CheckMode,
}

impl Idempotents {
    /// A non-θ idempotent rules out any compatible Hausdorff topology.
    pub fn non_topologizable(&self) -> bool {
        !self.elements.is_empty()
    }
}

/// All `x ≠ θ` with `x + x = x`; sampled on infinite carriers.
pub fn detect_idempotents(evs: &dyn Evs, seed: u64, trials: usize) -> Idempotents {
    let zero = evs.zero();
    if let Some(fin) = evs.as_finite() {
        let elements = (0..fin.len())
            .filter(|&i| i != fin.zero_index() && fin.sum(i, i) == i)
            .map(|i| fin.element(i).clone())
            .collect();
        return Idempotents { elements, mode: CheckMode::Exhaustive };
    }
    let mut rng = seeded(seed);
    let mut found: Vec<Element> = Vec::new();
    for _ in 0..trials {
        let x = evs.sample(&mut rng);
        if x != zero && evs.add(&x, &x) == x && !found.contains(&x) {
            found.push(x);
        }
    }
    found.sort();
    Idempotents { elements: found, mode: CheckMode::Sampled { seed, trials } }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub single_primitive: bool,
    pub comparable: bool,
    pub has_idempotent: bool,
    /// An element with several primitives, when not single-primitive.
    pub multi_primitive_witness: Option<Element>,
    /// Two incomparable elements with the same primitive set.
    pub incomparable_witness: Option<(Element, Element)>,
    pub mode: CheckMode,
}

pub fn classify(evs: &dyn Evs, seed: u64, trials: usize) -> Classification {
    let idem = detect_idempotents(evs, seed, trials);
    if let Some(fin) = evs.as_finite() {
        let n = fin.len();
        let prims: Vec<Vec<usize>> = (0..n)
            .map(|x| (0..n).filter(|&p| fin.is_minimal(p) && fin.le(p, x)).collect())
            .collect();
        let multi = (0..n).find(|&x| prims[x].len() != 1);
        let mut incomparable = None;
        'o: for x in 0..n {
            for y in x + 1..n {
                if prims[x] == prims[y] && !fin.le(x, y) && !fin.le(y, x) {
                    incomparable = Some((fin.element(x).clone(), fin.element(y).clone()));
                    break 'o;
                }
            }
        }
        return Classification {
            single_primitive: multi.is_none(),
            comparable: incomparable.is_none(),
            has_idempotent: idem.non_topologizable(),
            multi_primitive_witness: multi.map(|x| fin.element(x).clone()),
            incomparable_witness: incomparable,
            mode: CheckMode::Exhaustive,
        };
    }
    let mut rng = seeded(seed);
    let mut multi = None;
    let mut incomparable = None;
    for _ in 0..trials {
        let x = evs.sample(&mut rng);
        let px = evs.primitives_of(&x);
        if multi.is_none() && px.len() != 1 {
            multi = Some(x.clone());
        }
        let y = evs.sample(&mut rng);
        let py = evs.primitives_of(&y);
        let partner = if px.is_empty() || py.is_empty() {
            y
        } else {
            // Moves y onto x's primitive: y + p_x - p_y.
            let minus_one = evs.field().from_i64(-1);
            let shift = evs.add(pick(&px, &mut rng), &evs.scale(&minus_one, pick(&py, &mut rng)));
            evs.add(&y, &shift)
        };
        let mut pa = evs.primitives_of(&partner);
        let mut pxs = px.clone();
        pa.sort();
        pxs.sort();
        if incomparable.is_none() && pa == pxs && !evs.leq(&x, &partner) && !evs.leq(&partner, &x) {
            incomparable = Some((x, partner));
        }
    }
    Classification {
        single_primitive: multi.is_none(),
        comparable: incomparable.is_none(),
        has_idempotent: idem.non_topologizable(),
        multi_primitive_witness: multi,
        incomparable_witness: incomparable,
        mode: CheckMode::Sampled { seed, trials },
    }
}
