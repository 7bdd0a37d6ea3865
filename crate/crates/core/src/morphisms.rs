//! Order-morphisms: verification, isomorphism search, and transport of
//! bases and feasible sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::axioms::{CheckMode, Outcome, Witness};
use crate::basis::{self, BasisCertificate};
use crate::dimension::Dimension;
use crate::document;
use crate::element::Element;
use crate::error::{EvsError, Result};
use crate::finite::{FiniteEvs, Tables};
use crate::scalar::{Grid, Scalar};
use crate::structure::{seeded, Evs, Instance};
use crate::testing::TestingTable;

pub type ElementMap = Arc<dyn Fn(&Element) -> Element + Send + Sync>;

#[derive(Clone)]
pub enum MapRule {
    Table(BTreeMap<Element, Element>),
    Rule { name: String, forward: ElementMap, inverse: Option<ElementMap> },
}

impl fmt::Debug for MapRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapRule::Table(t) => write!(f, "Table({} pairs)", t.len()),
            MapRule::Rule { name, .. } => write!(f, "Rule({name})"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MorphismKind {
    Morphism,
    Monomorphism,
    Epimorphism,
    Isomorphism,
}

#[derive(Clone, Debug)]
pub struct MorphismSpec {
    pub source: Instance,
    pub target: Instance,
    pub map: MapRule,
    pub claimed: MorphismKind,
}

impl MorphismSpec {
    pub fn name(&self) -> String {
        match &self.map {
            MapRule::Table(_) => format!("table {} -> {}", self.source.name(), self.target.name()),
            MapRule::Rule { name, .. } => name.clone(),
        }
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        let y = match &self.map {
            MapRule::Table(t) => t
                .get(x)
                .cloned()
                .ok_or_else(|| EvsError::Input(format!("the map is not defined at {x}")))?,
            MapRule::Rule { forward, .. } => forward(x),
        };
        if !self.target.contains(&y) {
            return Err(EvsError::Input(format!("the image {y} of {x} is not in {}", self.target.name())));
        }
        Ok(y)
    }

    fn preimage(&self, y: &Element) -> Option<Element> {
        match &self.map {
            MapRule::Table(t) => t.iter().find(|(_, v)| *v == y).map(|(k, _)| k.clone()),
            MapRule::Rule { inverse, .. } => inverse.as_ref().map(|inv| inv(y)),
        }
    }

    pub fn identity(evs: Instance) -> Self {
        let id: ElementMap = Arc::new(|x: &Element| x.clone());
        MorphismSpec {
            source: evs.clone(),
            target: evs,
            map: MapRule::Rule { name: "identity".into(), forward: id.clone(), inverse: Some(id) },
            claimed: MorphismKind::Isomorphism,
        }
    }

    /// `x ↦ αx` on a single evs, with inverse `x ↦ α⁻¹x`.
    pub fn scaling(evs: Instance, alpha: Scalar) -> Result<Self> {
        let inv = alpha
            .inverse()
            .ok_or_else(|| EvsError::Domain("scaling by 0 is not invertible".into()))?;
        let (fwd_evs, inv_evs) = (evs.clone(), evs.clone());
        let name = format!("scale by {alpha}");
        let a = alpha.clone();
        Ok(MorphismSpec {
            source: evs.clone(),
            target: evs,
            map: MapRule::Rule {
                name,
                forward: Arc::new(move |x: &Element| fwd_evs.scale(&a, x)),
                inverse: Some(Arc::new(move |x: &Element| inv_evs.scale(&inv, x))),
            },
            claimed: MorphismKind::Isomorphism,
        })
    }

    /// Coordinate permutation `y_i = x_{perm[i]}` on vector elements.
    pub fn permutation(evs: Instance, perm: Vec<usize>) -> Result<Self> {
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted != (0..perm.len()).collect::<Vec<_>>() {
            return Err(EvsError::Input(format!("{perm:?} is not a permutation")));
        }
        let mut back = vec![0; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            back[p] = i;
        }
        let permute = |order: Vec<usize>| -> ElementMap {
            Arc::new(move |x: &Element| match x {
                Element::Vector(v) if v.len() == order.len() => Element::Vector(order.iter().map(|&k| v[k].clone()).collect()),
                other => other.clone(),
            })
        };
        Ok(MorphismSpec {
            source: evs.clone(),
            target: evs,
            map: MapRule::Rule {
                name: format!("permute coordinates {perm:?}"),
                forward: permute(perm),
                inverse: Some(permute(back)),
            },
            claimed: MorphismKind::Isomorphism,
        })
    }

    /// Renames the elements of a finite evs to atoms, `element(k) ↦ #labels[k]`,
    /// returning the relabeled evs inside the map.
    pub fn relabel(fin: &FiniteEvs, labels: &[u32]) -> Result<Self> {
        let distinct: BTreeSet<u32> = labels.iter().copied().collect();
        if labels.len() != fin.len() || distinct.len() != labels.len() {
            return Err(EvsError::Input("relabeling needs one distinct label per element".into()));
        }
        let t = fin.tables();
        let target = FiniteEvs::from_tables(
            format!("relabeled {}", fin.name()),
            Tables {
                elements: labels.iter().map(|&l| Element::Atom(l)).collect(),
                ..t
            },
        )?;
        let table = (0..fin.len())
            .map(|k| (fin.element(k).clone(), Element::Atom(labels[k])))
            .collect();
        Ok(MorphismSpec {
            source: Arc::new(fin.clone()),
            target: Arc::new(target),
            map: MapRule::Table(table),
            claimed: MorphismKind::Isomorphism,
        })
    }

    /// The explicit table of the map over a finite source.
    pub fn tabulate(&self) -> Result<BTreeMap<Element, Element>> {
        let fin = self
            .source
            .as_finite()
            .ok_or_else(|| EvsError::Input("tabulation needs a finite source".into()))?;
        fin.elements().iter().map(|x| Ok((x.clone(), self.apply(x)?))).collect()
    }

    pub fn inverse(&self) -> Result<Self> {
        let map = match &self.map {
            MapRule::Table(t) => {
                let inv: BTreeMap<Element, Element> = t.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
                if inv.len() != t.len() {
                    return Err(EvsError::Domain("the map is not injective".into()));
                }
                MapRule::Table(inv)
            }
            MapRule::Rule { name, forward, inverse } => MapRule::Rule {
                name: format!("inverse of {name}"),
                forward: inverse
                    .clone()
                    .ok_or_else(|| EvsError::Domain(format!("{name} has no recorded inverse")))?,
                inverse: Some(forward.clone()),
            },
        };
        Ok(MorphismSpec {
            source: self.target.clone(),
            target: self.source.clone(),
            map,
            claimed: self.claimed,
        })
    }

    /// `then ∘ self`.
    pub fn compose(&self, then: &MorphismSpec) -> Result<Self> {
        if self.source.as_finite().is_some() {
            let table = self
                .tabulate()?
                .into_iter()
                .map(|(k, v)| Ok((k, then.apply(&v)?)))
                .collect::<Result<_>>()?;
            return Ok(MorphismSpec {
                source: self.source.clone(),
                target: then.target.clone(),
                map: MapRule::Table(table),
                claimed: self.claimed,
            });
        }
        let (MapRule::Rule { name: n1, forward: f1, inverse: i1 }, MapRule::Rule { name: n2, forward: f2, inverse: i2 }) =
            (&self.map, &then.map)
        else {
            return Err(EvsError::Input("symbolic composition needs rule maps".into()));
        };
        let (f1, f2) = (f1.clone(), f2.clone());
        let inverse: Option<ElementMap> = match (i1.clone(), i2.clone()) {
            (Some(a), Some(b)) => Some(Arc::new(move |y: &Element| a(&b(y)))),
            _ => None,
        };
        Ok(MorphismSpec {
            source: self.source.clone(),
            target: then.target.clone(),
            map: MapRule::Rule {
                name: format!("{n2} after {n1}"),
                forward: Arc::new(move |x: &Element| f2(&f1(x))),
                inverse,
            },
            claimed: self.claimed,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub map: String,
    pub claimed: MorphismKind,
    pub mode: CheckMode,
    /// (i) `f(x + y) = f(x) + f(y)`.
    pub additive: Outcome,
    /// (ii) `f(αx) = αf(x)`.
    pub homogeneous: Outcome,
    /// (iii) `x <= y ⇒ f(x) <= f(y)`.
    pub monotone: Outcome,
    /// (iv) for `p <= q` in the image, `f⁻¹(p) ⊆ ↓f⁻¹(q)` and `f⁻¹(q) ⊆ ↑f⁻¹(p)`.
    pub preimage: Outcome,
    pub injective: Outcome,
    pub surjective: Outcome,
    /// The strongest kind that holds, if the map is a morphism at all.
    pub kind: Option<MorphismKind>,
    pub holds: bool,
}

impl MorphismReport {
    pub fn is_isomorphism(&self) -> bool {
        self.kind == Some(MorphismKind::Isomorphism)
    }

    fn finish(mut self) -> Self {
        let morphism = [&self.additive, &self.homogeneous, &self.monotone, &self.preimage]
            .iter()
            .all(|o| o.passed());
        let (inj, sur) = (self.injective.passed(), self.surjective.passed());
        self.kind = morphism.then_some(match (inj, sur) {
            (true, true) => MorphismKind::Isomorphism,
            (true, false) => MorphismKind::Monomorphism,
            (false, true) => MorphismKind::Epimorphism,
            (false, false) => MorphismKind::Morphism,
        });
        self.holds = morphism
            && match self.claimed {
                MorphismKind::Morphism => true,
                MorphismKind::Monomorphism => inj,
                MorphismKind::Epimorphism => sur,
                MorphismKind::Isomorphism => inj && sur,
            };
        self
    }
}

fn fail(elements: Vec<Element>, scalars: Vec<Scalar>) -> Outcome {
    Outcome::Fail { witness: Witness { elements, scalars } }
}

/// Checks conditions (i)-(iv) and bijectivity: exhaustively when both
/// carriers are finite, on `trials` seeded samples otherwise.
pub fn verify_order_morphism(m: &MorphismSpec, seed: u64, trials: usize) -> Result<MorphismReport> {
    if m.source.field() != m.target.field() {
        return Err(EvsError::Input(format!(
            "source is over {} but target is over {}",
            m.source.field(),
            m.target.field()
        )));
    }
    let report = match (m.source.as_finite(), m.target.as_finite()) {
        (Some(x), Some(y)) => verify_finite(m, x, y)?,
        _ => verify_sampled(m, seed, trials)?,
    };
    Ok(report.finish())
}

fn verify_finite(m: &MorphismSpec, x: &FiniteEvs, y: &FiniteEvs) -> Result<MorphismReport> {
    let n = x.len();
    let mut f = Vec::with_capacity(n);
    for e in x.elements() {
        f.push(y.idx(&m.apply(e)?));
    }
    let ex = |i: usize| x.element(i).clone();
    let ey = |j: usize| y.element(j).clone();

    let mut additive = Outcome::Pass;
    'a: for i in 0..n {
        for j in 0..n {
            if f[x.sum(i, j)] != y.sum(f[i], f[j]) {
                additive = fail(vec![ex(i), ex(j)], vec![]);
                break 'a;
            }
        }
    }
    let mut homogeneous = Outcome::Pass;
    'h: for s in 0..x.scalars().len() {
        let Some(t) = y.scalar_index(x.scalar(s)) else { continue };
        for i in 0..n {
            if f[x.times(s, i)] != y.times(t, f[i]) {
                homogeneous = fail(vec![ex(i)], vec![x.scalar(s).clone()]);
                break 'h;
            }
        }
    }
    let mut monotone = Outcome::Pass;
    'm: for i in 0..n {
        for j in 0..n {
            if x.le(i, j) && !y.le(f[i], f[j]) {
                monotone = fail(vec![ex(i), ex(j)], vec![]);
                break 'm;
            }
        }
    }
    let mut fibres: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &fi) in f.iter().enumerate() {
        fibres.entry(fi).or_default().push(i);
    }
    let mut preimage = Outcome::Pass;
    'p: for (&p, ps) in &fibres {
        for (&q, qs) in &fibres {
            if !y.le(p, q) {
                continue;
            }
            let down = ps.iter().find(|&&a| !qs.iter().any(|&b| x.le(a, b)));
            let up = qs.iter().find(|&&b| !ps.iter().any(|&a| x.le(a, b)));
            if let Some(&a) = down.or(up) {
                preimage = fail(vec![ey(p), ey(q), ex(a)], vec![]);
                break 'p;
            }
        }
    }
    let injective = match fibres.values().find(|v| v.len() > 1) {
        Some(v) => fail(vec![ex(v[0]), ex(v[1])], vec![]),
        None => Outcome::Pass,
    };
    let surjective = match (0..y.len()).find(|j| !fibres.contains_key(j)) {
        Some(j) => fail(vec![ey(j)], vec![]),
        None => Outcome::Pass,
    };
    Ok(MorphismReport {
        map: m.name(),
        claimed: m.claimed,
        mode: CheckMode::Exhaustive,
        additive,
        homogeneous,
        monotone,
        preimage,
        injective,
        surjective,
        kind: None,
        holds: false,
    })
}

fn verify_sampled(m: &MorphismSpec, seed: u64, trials: usize) -> Result<MorphismReport> {
    let (src, tgt) = (&*m.source, &*m.target);
    let pass = Outcome::SampledPass { seed, trials };
    let mut r = MorphismReport {
        map: m.name(),
        claimed: m.claimed,
        mode: CheckMode::Sampled { seed, trials },
        additive: pass.clone(),
        homogeneous: pass.clone(),
        monotone: pass.clone(),
        preimage: pass.clone(),
        injective: pass.clone(),
        surjective: pass.clone(),
        kind: None,
        holds: false,
    };
    if m.preimage(&tgt.zero()).is_none() {
        return Err(EvsError::Undecided(
            "sampled checks of (iv) and bijectivity need a recorded inverse".into(),
        ));
    }
    let mut rng = seeded(seed);
    for _ in 0..trials {
        let a = src.sample(&mut rng);
        let b = src.sample(&mut rng);
        let alpha = src.sample_scalar(&mut rng);
        let (fa, fb) = (m.apply(&a)?, m.apply(&b)?);
        if r.additive.passed() && m.apply(&src.add(&a, &b))? != tgt.add(&fa, &fb) {
            r.additive = fail(vec![a.clone(), b.clone()], vec![]);
        }
        if r.homogeneous.passed() && m.apply(&src.scale(&alpha, &a))? != tgt.scale(&alpha, &fa) {
            r.homogeneous = fail(vec![a.clone()], vec![alpha.clone()]);
        }
        let above = src.sample_above(&a, &mut rng);
        let below = src.sample_below(&a, &mut rng);
        let (fu, fl) = (m.apply(&above)?, m.apply(&below)?);
        if r.monotone.passed() && !(tgt.leq(&fl, &fa) && tgt.leq(&fa, &fu)) {
            r.monotone = fail(vec![below.clone(), a.clone(), above.clone()], vec![]);
        }
        if r.injective.passed() && m.preimage(&fa).as_ref() != Some(&a) {
            r.injective = fail(vec![a.clone()], vec![]);
        }
        // With an inverse the fibres are singletons, so (iv) asks that
        // p <= q in the image pulls back to f⁻¹(p) <= f⁻¹(q).
        let (pa, pu) = (m.preimage(&fa), m.preimage(&fu));
        if r.preimage.passed() && !matches!((&pa, &pu), (Some(p), Some(q)) if src.leq(p, q)) {
            r.preimage = fail(vec![fa.clone(), fu.clone()], vec![]);
        }
        let t = tgt.sample(&mut rng);
        let back = m.preimage(&t);
        let hit = match &back {
            Some(s) => src.contains(s) && m.apply(s)? == t,
            None => false,
        };
        if r.surjective.passed() && !hit {
            r.surjective = fail(vec![t], vec![]);
        }
    }
    Ok(r)
}

/// Outcome of a bijection search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum IsoSearch {
    Found { pairs: Vec<(Element, Element)>, nodes: usize },
    /// No isomorphism exists; the reason is an invariant mismatch or an
    /// exhausted search.
    ProvenNone { reason: String, nodes: usize },
}

type Signature = (bool, bool, usize, usize, usize, usize);

fn signatures(fin: &FiniteEvs) -> Vec<Signature> {
    (0..fin.len())
        .map(|i| {
            let absorbs = (0..fin.len()).filter(|&j| fin.sum(i, j) == i).count();
            let orbit: BTreeSet<usize> = (0..fin.scalars().len()).map(|s| fin.times(s, i)).collect();
            (
                fin.is_minimal(i),
                fin.sum(i, i) == i,
                fin.down_set(i).len(),
                fin.up_set(i).len(),
                absorbs,
                orbit.len(),
            )
        })
        .collect()
}

struct IsoState<'a> {
    x: &'a FiniteEvs,
    y: &'a FiniteEvs,
    candidates: Vec<Vec<usize>>,
    order: Vec<usize>,
    scalar_map: Vec<usize>,
    f: Vec<Option<usize>>,
    used: Vec<bool>,
    nodes: usize,
    budget: usize,
}

impl IsoState<'_> {
    fn consistent(&self, a: usize, b: usize) -> bool {
        let (x, y) = (self.x, self.y);
        if x.le(a, a) != y.le(b, b) {
            return false;
        }
        for (c, fc) in self.f.iter().enumerate() {
            let Some(d) = *fc else { continue };
            if x.le(a, c) != y.le(b, d) || x.le(c, a) != y.le(d, b) {
                return false;
            }
            if let Some(s) = self.f[x.sum(a, c)] {
                if s != y.sum(b, d) {
                    return false;
                }
            }
        }
        if let Some(s) = self.f[x.sum(a, a)] {
            if s != y.sum(b, b) {
                return false;
            }
        }
        if (x.sum(a, a) == a) != (y.sum(b, b) == b) {
            return false;
        }
        for (s, &t) in self.scalar_map.iter().enumerate() {
            let img = x.times(s, a);
            if (img == a) != (y.times(t, b) == b) {
                return false;
            }
            if let Some(fi) = self.f[img] {
                if fi != y.times(t, b) {
                    return false;
                }
            }
        }
        true
    }

    fn search(&mut self, depth: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let a = self.order[depth];
        for k in 0..self.candidates[a].len() {
            let b = self.candidates[a][k];
            if self.used[b] || !self.consistent(a, b) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.f[a] = Some(b);
            self.used[b] = true;
            match self.search(depth + 1) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.f[a] = None;
            self.used[b] = false;
        }
        Some(false)
    }
}

/// Searches for an order-isomorphism `x → y`. Invariants (size, field,
/// element signatures) are compared first; the bijection search then
/// assigns elements with the fewest candidates first and checks the
/// operations and order on every assigned pair. Running out of `budget`
/// search nodes is reported as undecided.
pub fn find_order_isomorphism(x: &FiniteEvs, y: &FiniteEvs, budget: usize) -> Result<IsoSearch> {
    let none = |reason: String| Ok(IsoSearch::ProvenNone { reason, nodes: 0 });
    if x.field() != y.field() {
        return none(format!("fields differ: {} vs {}", x.field(), y.field()));
    }
    if x.len() != y.len() {
        return none(format!("carrier sizes differ: {} vs {}", x.len(), y.len()));
    }
    let (mx, my) = (x.minimal_indices().len(), y.minimal_indices().len());
    if mx != my {
        return none(format!("primitive spaces differ in size: {mx} vs {my}"));
    }
    let (sx, sy) = (signatures(x), signatures(y));
    let idem = |s: &[Signature]| s.iter().filter(|t| t.1).count();
    if idem(&sx) != idem(&sy) {
        return none(format!("idempotent counts differ: {} vs {}", idem(&sx), idem(&sy)));
    }
    let (mut ms, mut mt) = (sx.clone(), sy.clone());
    ms.sort();
    mt.sort();
    if ms != mt {
        return none("element signatures (order degrees, absorption, scalar orbits) differ".into());
    }
    let mut scalar_map = Vec::with_capacity(x.scalars().len());
    for s in x.scalars() {
        match y.scalar_index(s) {
            Some(t) => scalar_map.push(t),
            None => return none(format!("scalar {s} is tabulated on one side only")),
        }
    }
    let candidates: Vec<Vec<usize>> = sx
        .iter()
        .enumerate()
        .map(|(a, sig)| {
            if a == x.zero_index() {
                vec![y.zero_index()]
            } else {
                (0..y.len()).filter(|&b| sy[b] == *sig && b != y.zero_index()).collect()
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by_key(|&a| (candidates[a].len(), a));
    let mut st = IsoState {
        x,
        y,
        candidates,
        order,
        scalar_map,
        f: vec![None; x.len()],
        used: vec![false; y.len()],
        nodes: 0,
        budget,
    };
    match st.search(0) {
        Some(true) => {
            let pairs = (0..x.len())
                .map(|a| (x.element(a).clone(), y.element(st.f[a].expect("complete")).clone()))
                .collect();
            Ok(IsoSearch::Found { pairs, nodes: st.nodes })
        }
        Some(false) => Ok(IsoSearch::ProvenNone {
            reason: "exhaustive bijection search found no isomorphism".into(),
            nodes: st.nodes,
        }),
        None => Err(EvsError::Undecided(format!("isomorphism search exceeded its budget of {budget} nodes"))),
    }
}

/// Wraps a search result as a verified isomorphism spec.
pub fn isomorphism_spec(x: Instance, y: Instance, pairs: &[(Element, Element)]) -> MorphismSpec {
    MorphismSpec {
        source: x,
        target: y,
        map: MapRule::Table(pairs.iter().cloned().collect()),
        claimed: MorphismKind::Isomorphism,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Transport {
    pub image: Vec<Element>,
    pub source_dimension: Dimension,
    pub target_dimension: Dimension,
    pub certificate: BasisCertificate,
}

fn require_isomorphism(m: &MorphismSpec, seed: u64, trials: usize) -> Result<()> {
    let report = verify_order_morphism(m, seed, trials)?;
    if report.is_isomorphism() {
        Ok(())
    } else {
        Err(EvsError::Domain(format!("{} is not an order-isomorphism", m.name())))
    }
}

/// `φ(B)` for a verified isomorphism `φ` and basis `B`, re-verified as a
/// basis of the target with equal dimension.
pub fn transport_basis(m: &MorphismSpec, basis: &[Element], seed: u64, trials: usize) -> Result<Transport> {
    require_isomorphism(m, seed, trials)?;
    let source = basis::certify(&*m.source, basis, seed, trials)?
        .map_err(|_| EvsError::Domain("the given set is not a basis of the source".into()))?;
    let image = basis.iter().map(|b| m.apply(b)).collect::<Result<Vec<_>>>()?;
    let certificate = basis::certify(&*m.target, &image, seed, trials)?.map_err(|check| {
        EvsError::Internal(format!(
            "the image of a basis under an isomorphism is not a basis: {}",
            serde_json::to_string(&check).unwrap_or_default()
        ))
    })?;
    if source.dimension != certificate.dimension {
        return Err(EvsError::Internal(format!(
            "isomorphic evs with dimensions {} and {}",
            source.dimension, certificate.dimension
        )));
    }
    Ok(Transport {
        image,
        source_dimension: source.dimension,
        target_dimension: certificate.dimension,
        certificate,
    })
}

/// `φ(Q(X)) = Q(Y)` for a verified isomorphism between finite evs.
pub fn compare_feasible_sets(m: &MorphismSpec) -> Result<bool> {
    if m.source.as_finite().is_none() || m.target.as_finite().is_none() {
        return Err(EvsError::Domain("feasible sets are compared on finite carriers".into()));
    }
    require_isomorphism(m, 0, 0)?;
    let q = |evs: &dyn Evs| -> Result<Vec<Element>> {
        Ok(basis::feasible_set(evs)?.members().expect("finite").to_vec())
    };
    let image: BTreeSet<Element> = q(&*m.source)?.iter().map(|x| m.apply(x)).collect::<Result<_>>()?;
    let target: BTreeSet<Element> = q(&*m.target)?.into_iter().collect();
    Ok(image == target)
}

/// For a finite isomorphism: orderly dependence and primitivity are
/// preserved in both directions.
pub fn check_invariance(m: &MorphismSpec) -> Result<(Outcome, Outcome)> {
    let (Some(x), Some(y)) = (m.source.as_finite(), m.target.as_finite()) else {
        return Err(EvsError::Domain("invariance is checked on finite carriers".into()));
    };
    require_isomorphism(m, 0, 0)?;
    let f: Vec<usize> = x.elements().iter().map(|e| Ok(y.idx(&m.apply(e)?))).collect::<Result<_>>()?;
    let primitives = match (0..x.len()).find(|&i| x.is_minimal(i) != y.is_minimal(f[i])) {
        Some(i) => fail(vec![x.element(i).clone()], vec![]),
        None => Outcome::Pass,
    };
    let (tx, ty) = (TestingTable::new(x), TestingTable::new(y));
    let mut dependence = Outcome::Pass;
    let non = x.nonminimal_indices();
    'd: for &a in &non {
        for &b in &non {
            if tx.contains(a, b) != ty.contains(f[a], f[b]) {
                dependence = fail(vec![x.element(a).clone(), x.element(b).clone()], vec![]);
                break 'd;
            }
        }
    }
    Ok((dependence, primitives))
}

/// Loads `{"morphism": {"source", "target", "pairs": [[x, y], ...], "claimed"}}`.
pub fn load_morphism(v: &Value, grid: Grid) -> Result<MorphismSpec> {
    let m = v
        .get("morphism")
        .and_then(Value::as_object)
        .ok_or_else(|| EvsError::doc("$", "missing object `morphism`"))?;
    let get = |k: &str| m.get(k).ok_or_else(|| EvsError::doc("$.morphism", format!("missing field `{k}`")));
    let source = document::load_instance_at(get("source")?, grid, "$.morphism.source")?;
    let target = document::load_instance_at(get("target")?, grid, "$.morphism.target")?;
    let claimed: MorphismKind = match m.get("claimed") {
        Some(c) => serde_json::from_value(c.clone()).map_err(|e| EvsError::doc("$.morphism.claimed", e.to_string()))?,
        None => MorphismKind::Isomorphism,
    };
    let pairs = get("pairs")?
        .as_array()
        .ok_or_else(|| EvsError::doc("$.morphism.pairs", "expected an array"))?;
    let mut table = BTreeMap::new();
    for (k, pair) in pairs.iter().enumerate() {
        let path = format!("$.morphism.pairs[{k}]");
        let [a, b] = pair.as_array().map(|p| p.as_slice()).unwrap_or_default() else {
            return Err(EvsError::doc(path, "expected a [source, target] pair"));
        };
        let a = Element::from_json(a, source.field(), &format!("{path}[0]"))?;
        let b = Element::from_json(b, target.field(), &format!("{path}[1]"))?;
        if !source.contains(&a) {
            return Err(EvsError::doc(format!("{path}[0]"), format!("{a} is not in the source")));
        }
        if !target.contains(&b) {
            return Err(EvsError::doc(format!("{path}[1]"), format!("{b} is not in the target")));
        }
        if table.insert(a.clone(), b).is_some() {
            return Err(EvsError::doc(path, format!("{a} is mapped twice")));
        }
    }
    if let Some(fin) = source.as_finite() {
        if let Some(missing) = fin.elements().iter().find(|e| !table.contains_key(*e)) {
            return Err(EvsError::doc("$.morphism.pairs", format!("the map is not total: {missing} has no image")));
        }
    }
    Ok(MorphismSpec { source, target, map: MapRule::Table(table), claimed })
}
