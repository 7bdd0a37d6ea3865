//! Dictionary-ordered products of `[0,∞)`: `n` coordinates, or finitely
//! supported sequences indexed by ℕ.

use std::cmp::Ordering;

use rand::Rng;

use super::ray::{sample_fraction, sample_nonnegative};
use super::vectors;
use crate::dimension::Dimension;
use crate::element::Element;
use crate::oracle::{FamilyOracle, KnownBasis};
use crate::scalar::{Field, Grid, Scalar};
use crate::structure::{Evs, Feasibility, Membership, SampleRng, TestingWitness};

/// Longest support drawn for sequence samples.
const SEQUENCE_SAMPLE_LEN: usize = 6;

#[derive(Clone, Debug)]
pub struct Dictionary {
    /// `Some(n)` for `n` coordinates, `None` for finitely supported sequences.
    pub n: Option<usize>,
    pub grid: Grid,
}

fn coord(v: &[Scalar], i: usize) -> Scalar {
    v.get(i).cloned().unwrap_or_else(|| Field::Rational.zero())
}

fn lex(a: &[Scalar], b: &[Scalar]) -> Ordering {
    let len = a.len().max(b.len());
    for i in 0..len {
        match coord(a, i).cmp(&coord(b, i)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

impl Dictionary {
    fn coords<'a>(&self, x: &'a Element) -> &'a [Scalar] {
        x.as_vector()
    }

    fn finish(&self, mut v: Vec<Scalar>) -> Element {
        match self.n {
            Some(n) => v.resize(n, Field::Rational.zero()),
            None => {
                while v.last().is_some_and(Scalar::is_zero) {
                    v.pop();
                }
            }
        }
        Element::Vector(v)
    }

    fn width(&self, a: &[Scalar], b: &[Scalar]) -> usize {
        self.n.unwrap_or(a.len().max(b.len()))
    }
}

impl Evs for Dictionary {
    fn name(&self) -> String {
        match self.n {
            Some(n) => format!("dictionary_power({n})"),
            None => "dictionary_omega".into(),
        }
    }

    fn field(&self) -> Field {
        Field::Rational
    }

    fn zero(&self) -> Element {
        self.finish(Vec::new())
    }

    fn contains(&self, x: &Element) -> bool {
        let Element::Vector(v) = x else { return false };
        let shape = match self.n {
            Some(n) => v.len() == n,
            None => v.last().is_none_or(|c| !c.is_zero()),
        };
        shape && v.iter().all(|c| c.field() == Field::Rational && !c.is_negative())
    }

    fn add(&self, x: &Element, y: &Element) -> Element {
        let (a, b) = (self.coords(x), self.coords(y));
        let w = self.width(a, b);
        self.finish((0..w).map(|i| coord(a, i).add(&coord(b, i))).collect())
    }

    fn scale(&self, alpha: &Scalar, x: &Element) -> Element {
        self.finish(vectors::scale(&alpha.abs(), self.coords(x)))
    }

    fn leq(&self, x: &Element, y: &Element) -> bool {
        lex(self.coords(x), self.coords(y)) != Ordering::Greater
    }

    fn is_primitive(&self, x: &Element) -> bool {
        vectors::is_zero(self.coords(x))
    }

    fn primitives_of(&self, _x: &Element) -> Vec<Element> {
        vec![self.zero()]
    }

    fn sample(&self, rng: &mut SampleRng) -> Element {
        let len = self.n.unwrap_or_else(|| rng.gen_range(0..=SEQUENCE_SAMPLE_LEN));
        self.finish((0..len).map(|_| sample_nonnegative(&self.grid, rng)).collect())
    }

    fn sample_primitive(&self, _rng: &mut SampleRng) -> Element {
        self.zero()
    }

    /// Either shrinks `x` by a factor in `[0,1]`, or keeps a prefix, lowers
    /// the next coordinate and fills the tail arbitrarily.
    fn sample_below(&self, x: &Element, rng: &mut SampleRng) -> Element {
        let c = self.coords(x);
        let lowerable: Vec<usize> = (0..c.len()).filter(|&i| !c[i].is_zero()).collect();
        if lowerable.is_empty() || rng.gen_bool(0.3) {
            let t = sample_fraction(&self.grid, rng);
            return self.finish(vectors::scale(&t, c));
        }
        let k = lowerable[rng.gen_range(0..lowerable.len())];
        let mut y: Vec<Scalar> = c[..k].to_vec();
        y.push(sample_fraction(&self.grid, rng).mul(&c[k]));
        if y[k] == c[k] {
            y[k] = Field::Rational.zero();
        }
        let tail = match self.n {
            Some(n) => n - k - 1,
            None => rng.gen_range(0..=SEQUENCE_SAMPLE_LEN),
        };
        y.extend((0..tail).map(|_| sample_nonnegative(&self.grid, rng)));
        self.finish(y)
    }

    fn sample_scalar(&self, rng: &mut SampleRng) -> Scalar {
        self.grid.sample(rng)
    }

    // αx has zeros before i = first nonzero of x, so z ≥lex αx for some α > 0
    // iff z ≠ 0 and z's first nonzero comes no later than i.
    fn testing_rule(&self, x: &Element, z: &Element) -> Option<Membership> {
        let (x, z) = (self.coords(x), self.coords(z));
        let i = vectors::first_nonzero(x).expect("non-primitive x");
        let Some(j) = vectors::first_nonzero(z) else {
            return Some(Membership::NonMember);
        };
        let alpha = match j.cmp(&i) {
            Ordering::Less => Field::Rational.one(),
            Ordering::Equal => z[i].div(&x[i].add(&x[i])).expect("nonzero"),
            Ordering::Greater => return Some(Membership::NonMember),
        };
        Some(Membership::Member(TestingWitness { alpha, primitive: self.zero() }))
    }

    // For x with first nonzero p before the last index, y = x with y_p = 0,
    // y_{p+1} = 1 lies below x and starts later, so y ∉ L(x).
    fn feasible_rule(&self, x: &Element) -> Option<Feasibility> {
        let c = self.coords(x);
        let p = vectors::first_nonzero(c).expect("non-primitive x");
        if self.n == Some(p + 1) {
            return Some(Feasibility::Feasible);
        }
        Some(Feasibility::Infeasible { below: self.infeasibility_witness(x) })
    }

    fn primitive_basis(&self) -> Option<Vec<Element>> {
        Some(Vec::new())
    }

    fn primitive_coordinates(&self, _p: &Element) -> Option<Vec<Scalar>> {
        Some(Vec::new())
    }

    fn oracle(&self) -> Option<FamilyOracle> {
        let l_rule = "z ∈ L(x) iff z ≠ 0 and the first nonzero index of z is at most that of x".to_string();
        Some(match self.n {
            Some(n) => {
                let mut e = vectors::zeros(Field::Rational, n);
                e[n - 1] = Field::Rational.one();
                FamilyOracle {
                    basis: KnownBasis::Finite(vec![Element::Vector(e)]),
                    dimension: Dimension::finite(1, 0),
                    has_basis: true,
                    q_description: "nonzero points supported on the last coordinate only".into(),
                    l_rule,
                    provenance: "lexicographic order: αx has zeros before the first nonzero index of x; \
                                 (0,…,0,1) lies below every nonzero point up to scaling"
                        .into(),
                }
            }
            None => FamilyOracle {
                basis: KnownBasis::None,
                dimension: Dimension::NoBasis,
                has_basis: false,
                q_description: "empty: y = x with y_p = 0, y_(p+1) = 1 at the first nonzero p \
                                is below x and outside L(x)"
                    .into(),
                l_rule,
                provenance: "lexicographic order on finitely supported sequences; no last index \
                             exists, so every nonzero point admits the shifted witness"
                    .into(),
            },
        })
    }
}

impl Dictionary {
    /// The shifted element below `x` that escapes `L(x)`.
    pub fn infeasibility_witness(&self, x: &Element) -> Element {
        let mut y = self.coords(x).to_vec();
        let p = vectors::first_nonzero(&y).expect("non-primitive x");
        y[p] = Field::Rational.zero();
        if y.len() == p + 1 {
            y.push(Field::Rational.one());
        } else {
            y[p + 1] = Field::Rational.one();
        }
        self.finish(y)
    }
}
