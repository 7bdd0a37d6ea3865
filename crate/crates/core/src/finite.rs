//! Explicit finite carriers with operation tables.

use std::collections::HashMap;

use rand::Rng;

use crate::element::Element;
use crate::error::{EvsError, Result};
use crate::oracle::FamilyOracle;
use crate::scalar::{Field, Scalar};
use crate::structure::{pick, Evs, SampleRng};

/// Raw tables of a finite evs, indexed by position in `elements`.
#[derive(Clone, Debug)]
pub struct Tables {
    pub field: Field,
    pub elements: Vec<Element>,
    pub zero: usize,
    pub add: Vec<Vec<usize>>,
    /// Scalars the action is tabulated for; all of GF(p), or a finite test
    /// set containing 0, 1, -1 over ℚ.
    pub scalars: Vec<Scalar>,
    /// `scale[s][i]` is `scalars[s] · elements[i]`.
    pub scale: Vec<Vec<usize>>,
    pub leq: Vec<Vec<bool>>,
}

/// A finite evs stored as tables over canonically sorted elements, so index
/// order coincides with the canonical payload order.
#[derive(Clone, Debug)]
pub struct FiniteEvs {
    name: String,
    field: Field,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    zero: usize,
    add: Vec<Vec<usize>>,
    scalars: Vec<Scalar>,
    scale: Vec<Vec<usize>>,
    leq: Vec<Vec<bool>>,
    minimal: Vec<bool>,
    oracle: Option<FamilyOracle>,
}

fn input(msg: String) -> EvsError {
    EvsError::Input(msg)
}

impl FiniteEvs {
    /// Checks table shapes, canonical payloads, the scalar set and the partial
    /// order, then stores everything in canonical element order. Axioms are
    /// not checked here.
    pub fn from_tables(name: impl Into<String>, t: Tables) -> Result<Self> {
        let n = t.elements.len();
        if n == 0 {
            return Err(input("carrier is empty".into()));
        }
        let mut index = HashMap::with_capacity(n);
        for (i, e) in t.elements.iter().enumerate() {
            e.check_canonical(t.field)
                .map_err(|m| input(format!("element {i} ({e}): {m}")))?;
            if let Some(j) = index.insert(e.clone(), i) {
                return Err(input(format!("elements {j} and {i} are both {e}")));
            }
        }
        if t.zero >= n {
            return Err(input(format!("zero index {} out of range", t.zero)));
        }
        check_square("add", &t.add, n)?;
        if t.scale.len() != t.scalars.len() {
            return Err(input(format!(
                "scalar table has {} rows for {} scalars",
                t.scale.len(),
                t.scalars.len()
            )));
        }
        for (s, row) in t.scale.iter().enumerate() {
            if row.len() != n {
                return Err(input(format!("scalar row for {} has {} entries, expected {n}", t.scalars[s], row.len())));
            }
            if let Some(bad) = row.iter().find(|&&v| v >= n) {
                return Err(input(format!("scalar row for {} references element {bad}", t.scalars[s])));
            }
        }
        check_scalars(t.field, &t.scalars)?;
        check_order(&t.elements, &t.leq)?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| t.elements[a].cmp(&t.elements[b]));
        let mut new_of = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            new_of[old] = new;
        }
        let elements: Vec<Element> = order.iter().map(|&o| t.elements[o].clone()).collect();
        let add = order
            .iter()
            .map(|&a| order.iter().map(|&b| new_of[t.add[a][b]]).collect())
            .collect();
        let mut sorder: Vec<usize> = (0..t.scalars.len()).collect();
        sorder.sort_by(|&a, &b| t.scalars[a].cmp(&t.scalars[b]));
        let scalars = sorder.iter().map(|&s| t.scalars[s].clone()).collect();
        let scale = sorder
            .iter()
            .map(|&s| order.iter().map(|&i| new_of[t.scale[s][i]]).collect())
            .collect();
        let leq: Vec<Vec<bool>> = order
            .iter()
            .map(|&a| order.iter().map(|&b| t.leq[a][b]).collect())
            .collect();
        let minimal = (0..n).map(|i| (0..n).all(|j| j == i || !leq[j][i])).collect();
        let index = elements.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok(FiniteEvs {
            name: name.into(),
            field: t.field,
            elements,
            index,
            zero: new_of[t.zero],
            add,
            scalars,
            scale,
            leq,
            minimal,
            oracle: None,
        })
    }

    /// Evaluates a symbolic evs on a finite carrier that must be closed under
    /// its operations.
    pub fn tabulate(evs: &dyn Evs, carrier: Vec<Element>, scalars: Vec<Scalar>) -> Result<Self> {
        let index: HashMap<&Element, usize> = carrier.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let find = |e: &Element, what: &dyn Fn() -> String| -> Result<usize> {
            index
                .get(e)
                .copied()
                .ok_or_else(|| input(format!("carrier is not closed: {} = {e} is outside", what())))
        };
        let zero = find(&evs.zero(), &|| "zero".into())?;
        let mut add = Vec::with_capacity(carrier.len());
        for x in &carrier {
            let mut row = Vec::with_capacity(carrier.len());
            for y in &carrier {
                row.push(find(&evs.add(x, y), &|| format!("{x} + {y}"))?);
            }
            add.push(row);
        }
        let mut scale = Vec::with_capacity(scalars.len());
        for a in &scalars {
            let mut row = Vec::with_capacity(carrier.len());
            for x in &carrier {
                row.push(find(&evs.scale(a, x), &|| format!("{a} · {x}"))?);
            }
            scale.push(row);
        }
        let leq = carrier
            .iter()
            .map(|x| carrier.iter().map(|y| evs.leq(x, y)).collect())
            .collect();
        let tables = Tables {
            field: evs.field(),
            elements: carrier.clone(),
            zero,
            add,
            scalars,
            scale,
            leq,
        };
        let mut out = FiniteEvs::from_tables(evs.name(), tables)?;
        out.oracle = evs.oracle();
        Ok(out)
    }

    /// The sub-table on `subset`, which must be closed under `+` and the
    /// scalar action.
    pub fn restrict(&self, name: impl Into<String>, subset: &[usize]) -> Result<Self> {
        let mut members: Vec<usize> = subset.to_vec();
        members.sort_unstable();
        members.dedup();
        let pos: HashMap<usize, usize> = members.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let find = |i: usize, what: &dyn Fn() -> String| -> Result<usize> {
            pos.get(&i)
                .copied()
                .ok_or_else(|| input(format!("subset is not closed: {} = {} is outside", what(), self.elements[i])))
        };
        let zero = find(self.zero, &|| "zero".into())?;
        let mut add = Vec::new();
        for &a in &members {
            let mut row = Vec::new();
            for &b in &members {
                row.push(find(self.add[a][b], &|| format!("{} + {}", self.elements[a], self.elements[b]))?);
            }
            add.push(row);
        }
        let mut scale = Vec::new();
        for (s, a) in self.scalars.iter().enumerate() {
            let mut row = Vec::new();
            for &i in &members {
                row.push(find(self.scale[s][i], &|| format!("{a} · {}", self.elements[i]))?);
            }
            scale.push(row);
        }
        let leq = members
            .iter()
            .map(|&a| members.iter().map(|&b| self.leq[a][b]).collect())
            .collect();
        FiniteEvs::from_tables(
            name,
            Tables {
                field: self.field,
                elements: members.iter().map(|&i| self.elements[i].clone()).collect(),
                zero,
                add,
                scalars: self.scalars.clone(),
                scale,
                leq,
            },
        )
    }

    pub fn with_oracle(mut self, oracle: FamilyOracle) -> Self {
        self.oracle = Some(oracle);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The stored tables, in canonical element order.
    pub fn tables(&self) -> Tables {
        Tables {
            field: self.field,
            elements: self.elements.clone(),
            zero: self.zero,
            add: self.add.clone(),
            scalars: self.scalars.clone(),
            scale: self.scale.clone(),
            leq: self.leq.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn index_of(&self, e: &Element) -> Option<usize> {
        self.index.get(e).copied()
    }

    /// Index lookup for elements already known to be in the carrier.
    pub fn idx(&self, e: &Element) -> usize {
        self.index_of(e)
            .unwrap_or_else(|| panic!("{e} is not in the carrier of {}", self.name))
    }

    pub fn zero_index(&self) -> usize {
        self.zero
    }

    pub fn sum(&self, i: usize, j: usize) -> usize {
        self.add[i][j]
    }

    pub fn times(&self, s: usize, i: usize) -> usize {
        self.scale[s][i]
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn is_minimal(&self, i: usize) -> bool {
        self.minimal[i]
    }

    /// Indices of X₀ in canonical order.
    pub fn minimal_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.minimal[i]).collect()
    }

    pub fn nonminimal_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.minimal[i]).collect()
    }

    pub fn scalars(&self) -> &[Scalar] {
        &self.scalars
    }

    pub fn scalar(&self, s: usize) -> &Scalar {
        &self.scalars[s]
    }

    pub fn scalar_index(&self, a: &Scalar) -> Option<usize> {
        self.scalars.binary_search(a).ok()
    }

    /// Indices of the nonzero tabulated scalars, in scalar order.
    pub fn nonzero_scalar_indices(&self) -> Vec<usize> {
        (0..self.scalars.len()).filter(|&s| !self.scalars[s].is_zero()).collect()
    }

    pub fn down_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq[j][i]).collect()
    }

    pub fn up_set(&self, i: usize) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.leq[i][j]).collect()
    }

    /// Smallest subset containing `seed` that is closed under `+` and every
    /// tabulated scalar.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.len()];
        let mut members = Vec::new();
        for &i in seed {
            if !inside[i] {
                inside[i] = true;
                members.push(i);
            }
        }
        let mut k = 0;
        while k < members.len() {
            let i = members[k];
            let mut fresh = Vec::new();
            for s in 0..self.scalars.len() {
                fresh.push(self.scale[s][i]);
            }
            for &j in &members[..=k] {
                fresh.push(self.add[i][j]);
            }
            for f in fresh {
                if !inside[f] {
                    inside[f] = true;
                    members.push(f);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        members
    }
}

fn check_square(what: &str, table: &[Vec<usize>], n: usize) -> Result<()> {
    if table.len() != n {
        return Err(input(format!("{what} table has {} rows, expected {n}", table.len())));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(input(format!("{what} row {i} has {} entries, expected {n}", row.len())));
        }
        if let Some(bad) = row.iter().find(|&&v| v >= n) {
            return Err(input(format!("{what} row {i} references element {bad}")));
        }
    }
    Ok(())
}

fn check_scalars(field: Field, scalars: &[Scalar]) -> Result<()> {
    let mut sorted = scalars.to_vec();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(input("scalar list repeats a scalar".into()));
    }
    if let Some(s) = scalars.iter().find(|s| s.field() != field) {
        return Err(input(format!("scalar {s} is not in {field}")));
    }
    match field.elements() {
        Some(all) => {
            if sorted != all {
                return Err(input(format!("the scalar action over {field} must list every scalar")));
            }
        }
        None => {
            for need in [0, 1, -1] {
                if !scalars.contains(&field.from_i64(need)) {
                    return Err(input(format!("the scalar test set must contain {need}")));
                }
            }
        }
    }
    Ok(())
}

fn check_order(elements: &[Element], leq: &[Vec<bool>]) -> Result<()> {
    let n = elements.len();
    if leq.len() != n || leq.iter().any(|r| r.len() != n) {
        return Err(input("order relation has the wrong shape".into()));
    }
    for i in 0..n {
        if !leq[i][i] {
            return Err(input(format!("order is not reflexive at {}", elements[i])));
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && leq[i][j] && leq[j][i] {
                return Err(input(format!(
                    "order is not antisymmetric: {} <= {} and {} <= {}",
                    elements[i], elements[j], elements[j], elements[i]
                )));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if !leq[i][j] {
                continue;
            }
            for k in 0..n {
                if leq[j][k] && !leq[i][k] {
                    return Err(input(format!(
                        "order is not transitive: {} <= {} <= {} but not {} <= {}",
                        elements[i], elements[j], elements[k], elements[i], elements[k]
                    )));
                }
            }
        }
    }
    Ok(())
}

impl Evs for FiniteEvs {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn field(&self) -> Field {
        self.field
    }

    fn zero(&self) -> Element {
        self.elements[self.zero].clone()
    }

    fn contains(&self, x: &Element) -> bool {
        self.index.contains_key(x)
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        self.elements[self.sum(self.idx(x), self.idx(y))].clone()
    }

    fn scale(&self, alpha: &Scalar, x: &Element) -> Element {
        let s = self
            .scalar_index(alpha)
            .unwrap_or_else(|| panic!("scalar {alpha} is not tabulated for {}", self.name));
        self.elements[self.times(s, self.idx(x))].clone()
    }

    fn leq(&self, x: &Element, y: &Element) -> bool {
        self.le(self.idx(x), self.idx(y))
    }

    fn is_primitive(&self, x: &Element) -> bool {
        self.minimal[self.idx(x)]
    }

    fn primitives_of(&self, x: &Element) -> Vec<Element> {
        let i = self.idx(x);
        (0..self.len())
            .filter(|&j| self.minimal[j] && self.leq[j][i])
            .map(|j| self.elements[j].clone())
            .collect()
    }

    fn sample(&self, rng: &mut SampleRng) -> Element {
        pick(&self.elements, rng).clone()
    }

    fn sample_primitive(&self, rng: &mut SampleRng) -> Element {
        let mins = self.minimal_indices();
        if mins.is_empty() {
            return self.zero();
        }
        self.elements[*pick(&mins, rng)].clone()
    }

    fn sample_below(&self, x: &Element, rng: &mut SampleRng) -> Element {
        let below = self.down_set(self.idx(x));
        self.elements[*pick(&below, rng)].clone()
    }

    fn sample_scalar(&self, rng: &mut SampleRng) -> Scalar {
        self.scalars[rng.gen_range(0..self.scalars.len())].clone()
    }

    fn as_finite(&self) -> Option<&FiniteEvs> {
        Some(self)
    }

    fn primitive_basis(&self) -> Option<Vec<Element>> {
        let mut span = self.closure(&[self.zero]);
        let mut basis = Vec::new();
        for m in self.minimal_indices() {
            if span.binary_search(&m).is_err() {
                basis.push(m);
                let mut seed = span.clone();
                seed.push(m);
                span = self.closure(&seed);
            }
        }
        Some(basis.into_iter().map(|i| self.elements[i].clone()).collect())
    }

    /// Brute force over all coefficient vectors; X₀ is tiny at desk scale.
    fn primitive_coordinates(&self, p: &Element) -> Option<Vec<Scalar>> {
        let basis = self.primitive_basis()?;
        let scalars = self.field.elements()?;
        let target = self.index_of(p)?;
        let mut coeffs = vec![0usize; basis.len()];
        loop {
            let mut acc = self.zero;
            for (b, &c) in basis.iter().zip(&coeffs) {
                let s = self.scalar_index(&scalars[c])?;
                acc = self.sum(acc, self.times(s, self.idx(b)));
            }
            if acc == target {
                return Some(coeffs.iter().map(|&c| scalars[c].clone()).collect());
            }
            let mut k = 0;
            loop {
                if k == coeffs.len() {
                    return None;
                }
                coeffs[k] += 1;
                if coeffs[k] < scalars.len() {
                    break;
                }
                coeffs[k] = 0;
                k += 1;
            }
        }
    }

    fn oracle(&self) -> Option<FamilyOracle> {
        self.oracle.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The two-element chain `θ < a` with `a + a = a` over GF(2).
    pub(crate) fn chain() -> Tables {
        Tables {
            field: Field::Gf { p: 2 },
            elements: vec![Element::Atom(0), Element::Atom(1)],
            zero: 0,
            add: vec![vec![0, 1], vec![1, 1]],
            scalars: Field::Gf { p: 2 }.elements().unwrap(),
            scale: vec![vec![0, 0], vec![0, 1]],
            leq: vec![vec![true, true], vec![false, true]],
        }
    }

    #[test]
    fn loads_and_sorts() {
        let mut t = chain();
        t.elements = vec![Element::Atom(5), Element::Atom(2)];
        let x = FiniteEvs::from_tables("chain", t).unwrap();
        assert_eq!(x.element(0), &Element::Atom(2));
        assert_eq!(x.zero(), Element::Atom(5));
        assert_eq!(x.sum(0, 0), 0);
        assert!(x.le(1, 0));
        assert_eq!(x.minimal_indices(), vec![1]);
    }

    #[test]
    fn rejects_broken_orders() {
        let mut t = chain();
        t.leq[1][0] = true;
        let err = FiniteEvs::from_tables("chain", t).unwrap_err().to_string();
        assert!(err.contains("antisymmetric") && err.contains("#0") && err.contains("#1"), "{err}");
        let mut t = chain();
        t.leq[0][0] = false;
        assert!(FiniteEvs::from_tables("chain", t).is_err());
    }

    #[test]
    fn rejects_incomplete_scalars() {
        let mut t = chain();
        t.scalars.pop();
        t.scale.pop();
        assert!(FiniteEvs::from_tables("chain", t).is_err());
    }

    #[test]
    fn closure_and_restrict() {
        let x = FiniteEvs::from_tables("chain", chain()).unwrap();
        assert_eq!(x.closure(&[1]), vec![0, 1]);
        assert!(x.restrict("top", &[1]).is_err());
        assert_eq!(x.restrict("zero", &[0]).unwrap().len(), 1);
    }
}
