//! The A1–A6 axiom validator.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::element::Element;
use crate::error::{EvsError, Result};
use crate::finite::FiniteEvs;
use crate::scalar::Scalar;
use crate::structure::{pick, seeded, Evs, SampleRng};

/// One checkable clause of the axiom list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AxiomId {
    Associative,
    Commutative,
    Identity,
    AddMonotone,
    ScaleMonotone,
    Distributive,
    ScalarCompatible,
    Subadditive,
    Unit,
    ZeroProduct,
    Primitive,
    PrimitiveBelow,
}

impl AxiomId {
    pub const ALL: [AxiomId; 12] = [
        AxiomId::Associative,
        AxiomId::Commutative,
        AxiomId::Identity,
        AxiomId::AddMonotone,
        AxiomId::ScaleMonotone,
        AxiomId::Distributive,
        AxiomId::ScalarCompatible,
        AxiomId::Subadditive,
        AxiomId::Unit,
        AxiomId::ZeroProduct,
        AxiomId::Primitive,
        AxiomId::PrimitiveBelow,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AxiomId::Associative => "A1.assoc",
            AxiomId::Commutative => "A1.comm",
            AxiomId::Identity => "A1.identity",
            AxiomId::AddMonotone => "A2.add",
            AxiomId::ScaleMonotone => "A2.scale",
            AxiomId::Distributive => "A3.i",
            AxiomId::ScalarCompatible => "A3.ii",
            AxiomId::Subadditive => "A3.iii",
            AxiomId::Unit => "A3.iv",
            AxiomId::ZeroProduct => "A4",
            AxiomId::Primitive => "A5",
            AxiomId::PrimitiveBelow => "A6",
        }
    }

    /// The axiom group (`A1` … `A6`).
    pub fn group(self) -> &'static str {
        &self.label()[..2]
    }

    pub fn statement(self) -> &'static str {
        match self {
            AxiomId::Associative => "(x+y)+z = x+(y+z)",
            AxiomId::Commutative => "x+y = y+x",
            AxiomId::Identity => "θ+x = x",
            AxiomId::AddMonotone => "x<=y implies x+z <= y+z",
            AxiomId::ScaleMonotone => "x<=y implies αx <= αy",
            AxiomId::Distributive => "α(x+y) = αx+αy",
            AxiomId::ScalarCompatible => "α(βx) = (αβ)x",
            AxiomId::Subadditive => "(α+β)x <= αx+βx",
            AxiomId::Unit => "1x = x",
            AxiomId::ZeroProduct => "αx = θ iff α=0 or x=θ",
            AxiomId::Primitive => "x+(-1)x = θ iff x is minimal",
            AxiomId::PrimitiveBelow => "some minimal p satisfies p <= x",
        }
    }

    pub fn parse(label: &str) -> Option<AxiomId> {
        AxiomId::ALL.into_iter().find(|a| a.label() == label)
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl Serialize for AxiomId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(self.label())
    }
}

/// The elements and scalars of a violating instance, in the order the
/// axiom statement names them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub elements: Vec<Element>,
    pub scalars: Vec<Scalar>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["x", "y", "z"];
        let mut parts: Vec<String> = self
            .elements
            .iter()
            .zip(names)
            .map(|(e, n)| format!("{n}={e}"))
            .collect();
        parts.extend(self.scalars.iter().zip(["α", "β"]).map(|(s, n)| format!("{n}={s}")));
        f.write_str(&parts.join(", "))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CheckMode {
    Exhaustive,
    Sampled { seed: u64, trials: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    SampledPass { seed: u64, trials: usize },
    Fail { witness: Witness },
}

impl Outcome {
    pub fn passed(&self) -> bool {
        !matches!(self, Outcome::Fail { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomVerdict {
    pub axiom: AxiomId,
    #[serde(flatten)]
    pub outcome: Outcome,
    /// Scalar combinations left out because the scalar test set does not
    /// contain their sum or product.
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub mode: CheckMode,
    pub verdicts: Vec<AxiomVerdict>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.outcome.passed())
    }

    pub fn failed(&self) -> Vec<AxiomId> {
        self.verdicts
            .iter()
            .filter(|v| !v.outcome.passed())
            .map(|v| v.axiom)
            .collect()
    }

    pub fn verdict(&self, axiom: AxiomId) -> &AxiomVerdict {
        self.verdicts.iter().find(|v| v.axiom == axiom).expect("every axiom has a verdict")
    }
}

/// Re-evaluates a witness: true when it really violates `axiom` in `evs`.
pub fn violates(evs: &dyn Evs, axiom: AxiomId, w: &Witness) -> bool {
    let e = &w.elements;
    let s = &w.scalars;
    let field = evs.field();
    match axiom {
        AxiomId::Associative => evs.add(&evs.add(&e[0], &e[1]), &e[2]) != evs.add(&e[0], &evs.add(&e[1], &e[2])),
        AxiomId::Commutative => evs.add(&e[0], &e[1]) != evs.add(&e[1], &e[0]),
        AxiomId::Identity => evs.add(&evs.zero(), &e[0]) != e[0],
        AxiomId::AddMonotone => evs.leq(&e[0], &e[1]) && !evs.leq(&evs.add(&e[0], &e[2]), &evs.add(&e[1], &e[2])),
        AxiomId::ScaleMonotone => evs.leq(&e[0], &e[1]) && !evs.leq(&evs.scale(&s[0], &e[0]), &evs.scale(&s[0], &e[1])),
        AxiomId::Distributive => {
            evs.scale(&s[0], &evs.add(&e[0], &e[1])) != evs.add(&evs.scale(&s[0], &e[0]), &evs.scale(&s[0], &e[1]))
        }
        AxiomId::ScalarCompatible => evs.scale(&s[0], &evs.scale(&s[1], &e[0])) != evs.scale(&s[0].mul(&s[1]), &e[0]),
        AxiomId::Subadditive => !evs.leq(
            &evs.scale(&s[0].add(&s[1]), &e[0]),
            &evs.add(&evs.scale(&s[0], &e[0]), &evs.scale(&s[1], &e[0])),
        ),
        AxiomId::Unit => evs.scale(&field.one(), &e[0]) != e[0],
        AxiomId::ZeroProduct => {
            let z = evs.zero();
            (evs.scale(&s[0], &e[0]) == z) != (s[0].is_zero() || e[0] == z)
        }
        AxiomId::Primitive => {
            let cancels = evs.add(&e[0], &evs.scale(&field.from_i64(-1), &e[0])) == evs.zero();
            cancels != evs.is_primitive(&e[0])
        }
        AxiomId::PrimitiveBelow => !evs
            .primitives_of(&e[0])
            .iter()
            .any(|p| evs.is_primitive(p) && evs.leq(p, &e[0])),
    }
}

pub fn validate_axioms(evs: &dyn Evs, mode: CheckMode) -> Result<AxiomReport> {
    match mode {
        CheckMode::Exhaustive => {
            let fin = evs
                .as_finite()
                .ok_or_else(|| EvsError::Input("exhaustive mode requires a finite carrier".into()))?;
            Ok(exhaustive(fin))
        }
        CheckMode::Sampled { seed, trials } => Ok(sampled(evs, seed, trials)),
    }
}

fn witness(fin: &FiniteEvs, elems: &[usize], scalars: &[usize]) -> Witness {
    Witness {
        elements: elems.iter().map(|&i| fin.element(i).clone()).collect(),
        scalars: scalars.iter().map(|&s| fin.scalar(s).clone()).collect(),
    }
}

/// First `(i, rest)` in lexicographic order for which `bad` holds; the outer
/// index is searched in parallel but the result is the least one.
fn first_violation<F>(n: usize, bad: F) -> Option<(usize, Vec<usize>)>
where
    F: Fn(usize) -> Option<Vec<usize>> + Sync,
{
    (0..n).into_par_iter().find_map_first(|i| bad(i).map(|rest| (i, rest)))
}

fn exhaustive(fin: &FiniteEvs) -> AxiomReport {
    let n = fin.len();
    let ns = fin.scalars().len();
    let zero = fin.zero_index();
    let field = fin.field();
    let one = fin.scalar_index(&field.one()).expect("1 is tabulated");
    let minus_one = fin.scalar_index(&field.from_i64(-1)).expect("-1 is tabulated");
    let mut verdicts = Vec::new();
    let mut push = |axiom: AxiomId, found: Option<Witness>, skipped: usize| {
        let outcome = match found {
            Some(witness) => Outcome::Fail { witness },
            None => Outcome::Pass,
        };
        verdicts.push(AxiomVerdict { axiom, outcome, skipped });
    };

    let assoc = first_violation(n, |x| {
        for y in 0..n {
            for z in 0..n {
                if fin.sum(fin.sum(x, y), z) != fin.sum(x, fin.sum(y, z)) {
                    return Some(vec![y, z]);
                }
            }
        }
        None
    });
    push(AxiomId::Associative, assoc.map(|(x, r)| witness(fin, &[x, r[0], r[1]], &[])), 0);

    let comm = first_violation(n, |x| (0..n).find(|&y| fin.sum(x, y) != fin.sum(y, x)).map(|y| vec![y]));
    push(AxiomId::Commutative, comm.map(|(x, r)| witness(fin, &[x, r[0]], &[])), 0);

    let ident = (0..n).find(|&x| fin.sum(zero, x) != x);
    push(AxiomId::Identity, ident.map(|x| witness(fin, &[x], &[])), 0);

    let add_mono = first_violation(n, |x| {
        for y in 0..n {
            if !fin.le(x, y) {
                continue;
            }
            for z in 0..n {
                if !fin.le(fin.sum(x, z), fin.sum(y, z)) {
                    return Some(vec![y, z]);
                }
            }
        }
        None
    });
    push(AxiomId::AddMonotone, add_mono.map(|(x, r)| witness(fin, &[x, r[0], r[1]], &[])), 0);

    let scale_mono = first_violation(n, |x| {
        for y in 0..n {
            if !fin.le(x, y) {
                continue;
            }
            for s in 0..ns {
                if !fin.le(fin.times(s, x), fin.times(s, y)) {
                    return Some(vec![y, s]);
                }
            }
        }
        None
    });
    push(AxiomId::ScaleMonotone, scale_mono.map(|(x, r)| witness(fin, &[x, r[0]], &[r[1]])), 0);

    let distrib = first_violation(n, |x| {
        for y in 0..n {
            for s in 0..ns {
                if fin.times(s, fin.sum(x, y)) != fin.sum(fin.times(s, x), fin.times(s, y)) {
                    return Some(vec![y, s]);
                }
            }
        }
        None
    });
    push(AxiomId::Distributive, distrib.map(|(x, r)| witness(fin, &[x, r[0]], &[r[1]])), 0);

    let products: Vec<Vec<Option<usize>>> = (0..ns)
        .map(|a| (0..ns).map(|b| fin.scalar_index(&fin.scalar(a).mul(fin.scalar(b)))).collect())
        .collect();
    let sums: Vec<Vec<Option<usize>>> = (0..ns)
        .map(|a| (0..ns).map(|b| fin.scalar_index(&fin.scalar(a).add(fin.scalar(b)))).collect())
        .collect();
    let skipped_products = products.iter().flatten().filter(|p| p.is_none()).count() * n;
    let skipped_sums = sums.iter().flatten().filter(|p| p.is_none()).count() * n;

    let compat = first_violation(n, |x| {
        for a in 0..ns {
            for b in 0..ns {
                if let Some(ab) = products[a][b] {
                    if fin.times(a, fin.times(b, x)) != fin.times(ab, x) {
                        return Some(vec![a, b]);
                    }
                }
            }
        }
        None
    });
    push(AxiomId::ScalarCompatible, compat.map(|(x, r)| witness(fin, &[x], &r)), skipped_products);

    let subadd = first_violation(n, |x| {
        for a in 0..ns {
            for b in 0..ns {
                if let Some(ab) = sums[a][b] {
                    if !fin.le(fin.times(ab, x), fin.sum(fin.times(a, x), fin.times(b, x))) {
                        return Some(vec![a, b]);
                    }
                }
            }
        }
        None
    });
    push(AxiomId::Subadditive, subadd.map(|(x, r)| witness(fin, &[x], &r)), skipped_sums);

    let unit = (0..n).find(|&x| fin.times(one, x) != x);
    push(AxiomId::Unit, unit.map(|x| witness(fin, &[x], &[])), 0);

    let zero_prod = first_violation(n, |x| {
        (0..ns)
            .find(|&s| (fin.times(s, x) == zero) != (fin.scalar(s).is_zero() || x == zero))
            .map(|s| vec![s])
    });
    push(AxiomId::ZeroProduct, zero_prod.map(|(x, r)| witness(fin, &[x], &r)), 0);

    let prim = (0..n).find(|&x| (fin.sum(x, fin.times(minus_one, x)) == zero) != fin.is_minimal(x));
    push(AxiomId::Primitive, prim.map(|x| witness(fin, &[x], &[])), 0);

    let below = (0..n).find(|&x| !(0..n).any(|p| fin.is_minimal(p) && fin.le(p, x)));
    push(AxiomId::PrimitiveBelow, below.map(|x| witness(fin, &[x], &[])), 0);

    AxiomReport {
        mode: CheckMode::Exhaustive,
        verdicts,
    }
}

/// A comparable pair `x <= y` built from the instance's own samplers.
fn comparable_pair(evs: &dyn Evs, rng: &mut SampleRng, round: usize) -> (Element, Element) {
    let x = evs.sample(rng);
    match round % 3 {
        0 => {
            let ps = evs.primitives_of(&x);
            if ps.is_empty() {
                (x.clone(), x)
            } else {
                (pick(&ps, rng).clone(), x)
            }
        }
        1 => {
            let y = evs.sample_above(&x, rng);
            (x, y)
        }
        _ => {
            let y = evs.sample_below(&x, rng);
            (y, x)
        }
    }
}

fn sampled(evs: &dyn Evs, seed: u64, trials: usize) -> AxiomReport {
    let mut verdicts = Vec::new();
    for (k, axiom) in AxiomId::ALL.into_iter().enumerate() {
        // Each axiom gets its own stream so reports do not depend on the
        // order clauses are evaluated in.
        let mut rng = seeded(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k as u64));
        let mut found = None;
        for round in 0..trials {
            let w = draw(evs, axiom, &mut rng, round);
            if violates(evs, axiom, &w) {
                found = Some(w);
                break;
            }
        }
        let outcome = match found {
            Some(witness) => Outcome::Fail { witness },
            None => Outcome::SampledPass { seed, trials },
        };
        verdicts.push(AxiomVerdict { axiom, outcome, skipped: 0 });
    }
    AxiomReport {
        mode: CheckMode::Sampled { seed, trials },
        verdicts,
    }
}

fn draw(evs: &dyn Evs, axiom: AxiomId, rng: &mut SampleRng, round: usize) -> Witness {
    let el = |k: usize, rng: &mut SampleRng| -> Vec<Element> { (0..k).map(|_| evs.sample(rng)).collect() };
    match axiom {
        AxiomId::Associative | AxiomId::Commutative | AxiomId::Identity | AxiomId::Unit => {
            let k = match axiom {
                AxiomId::Associative => 3,
                AxiomId::Commutative => 2,
                _ => 1,
            };
            Witness { elements: el(k, rng), scalars: vec![] }
        }
        AxiomId::AddMonotone => {
            let (x, y) = comparable_pair(evs, rng, round);
            let z = evs.sample(rng);
            Witness { elements: vec![x, y, z], scalars: vec![] }
        }
        AxiomId::ScaleMonotone => {
            let (x, y) = comparable_pair(evs, rng, round);
            let a = evs.sample_scalar(rng);
            Witness { elements: vec![x, y], scalars: vec![a] }
        }
        AxiomId::Distributive => {
            let elements = el(2, rng);
            Witness { elements, scalars: vec![evs.sample_scalar(rng)] }
        }
        AxiomId::ScalarCompatible | AxiomId::Subadditive => {
            let elements = el(1, rng);
            let scalars = vec![evs.sample_scalar(rng), evs.sample_scalar(rng)];
            Witness { elements, scalars }
        }
        AxiomId::ZeroProduct => {
            // Exercise both sides of the equivalence: zero scalars, the zero
            // element and generic pairs.
            let x = match round % 4 {
                0 => evs.zero(),
                _ => evs.sample(rng),
            };
            let a = match round % 4 {
                1 => evs.field().zero(),
                _ => evs.sample_scalar(rng),
            };
            Witness { elements: vec![x], scalars: vec![a] }
        }
        AxiomId::Primitive | AxiomId::PrimitiveBelow => {
            let x = if round.is_multiple_of(2) { evs.sample(rng) } else { evs.sample_primitive(rng) };
            Witness { elements: vec![x], scalars: vec![] }
        }
    }
}
