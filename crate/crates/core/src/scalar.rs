//! Exact scalar fields: arbitrary-precision rationals and prime fields.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::EvsError;

/// The scalar field an evs is defined over.
///
/// Serialized as `"Q"` or `"GF(p)"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Gf { p: u64 },
}

impl Field {
    pub fn gf(p: u64) -> Result<Self, EvsError> {
        if is_prime(p) {
            Ok(Field::Gf { p })
        } else {
            Err(EvsError::Input(format!("GF({p}) is not a field: {p} is not prime")))
        }
    }

    /// Rejects deserialized descriptors with a composite modulus.
    pub fn validate(self) -> Result<Self, EvsError> {
        match self {
            Field::Gf { p } => Field::gf(p),
            Field::Rational => Ok(self),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Gf { p } => Scalar::Modular {
                residue: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    pub fn from_ratio(&self, num: i64, den: i64) -> Scalar {
        assert!(den != 0, "zero denominator");
        match *self {
            Field::Rational => Scalar::Rational(BigRational::new(num.into(), den.into())),
            Field::Gf { .. } => self.from_i64(num).mul(&self.from_i64(den).inverse().expect("den invertible mod p")),
        }
    }

    /// Every element of a finite field, in residue order.
    pub fn elements(&self) -> Option<Vec<Scalar>> {
        match *self {
            Field::Rational => None,
            Field::Gf { p } => Some((0..p).map(|r| Scalar::Modular { residue: r, p }).collect()),
        }
    }

    pub fn modulus(&self) -> Option<u64> {
        match *self {
            Field::Rational => None,
            Field::Gf { p } => Some(p),
        }
    }

    /// Parses a canonical scalar literal: `n` or `n/d` (reduced, d > 1) over ℚ,
    /// a residue `0 <= r < p` over GF(p).
    pub fn parse_canonical(&self, text: &str) -> Result<Scalar, String> {
        let s = self.parse(text)?;
        if s.to_string() != text.trim() {
            return Err(format!("non-canonical scalar {text:?} (expected {s})"));
        }
        Ok(s)
    }

    /// Lenient parse: accepts unreduced fractions and any integer residue.
    pub fn parse(&self, text: &str) -> Result<Scalar, String> {
        let t = text.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (t, None),
        };
        let num: BigInt = num.parse().map_err(|_| format!("bad scalar literal {text:?}"))?;
        let den: BigInt = match den {
            Some(d) => d.parse().map_err(|_| format!("bad scalar literal {text:?}"))?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(format!("zero denominator in {text:?}"));
        }
        match *self {
            Field::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            Field::Gf { p } => {
                let m = BigInt::from(p);
                let n = ((num % &m) + &m) % &m;
                let d = ((den % &m) + &m) % &m;
                let n = Scalar::Modular { residue: n.to_u64().unwrap(), p };
                let d = Scalar::Modular { residue: d.to_u64().unwrap(), p };
                let inv = d.inverse().ok_or_else(|| format!("denominator of {text:?} vanishes mod {p}"))?;
                Ok(n.mul(&inv))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Gf { p } => write!(f, "GF({p})"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = EvsError;

    fn from_str(text: &str) -> Result<Self, EvsError> {
        let t = text.trim();
        if t == "Q" {
            return Ok(Field::Rational);
        }
        let p = t
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|r| r.trim().parse::<u64>().ok())
            .ok_or_else(|| EvsError::Input(format!("unknown field {text:?}: expected \"Q\" or \"GF(p)\"")))?;
        Field::gf(p)
    }
}

impl Serialize for Field {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Field {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals are kept reduced with positive denominator
/// by `BigRational`; residues satisfy `0 <= residue < p`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    Rational(BigRational),
    Modular { residue: u64, p: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Modular { p, .. } => Field::Gf { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Modular { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Modular { residue, .. } => *residue == 1,
        }
    }

    pub fn inverse(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Modular { residue, p } => Scalar::Modular {
                residue: pow_mod(*residue, p - 2, *p),
                p: *p,
            },
        })
    }

    /// Ordinary absolute value over ℚ. Only families over ℚ use `|α|`.
    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(r.abs()),
            Scalar::Modular { .. } => panic!("absolute value is not defined over a prime field"),
        }
    }

    pub fn as_rational(&self) -> &BigRational {
        match self {
            Scalar::Rational(r) => r,
            Scalar::Modular { .. } => panic!("expected a rational scalar"),
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_negative())
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Scalar::Rational(r) if r.is_positive())
    }

    fn same_field(&self, other: &Scalar) {
        assert_eq!(self.field(), other.field(), "mixed scalar fields");
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.same_field(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Modular { residue: a, p }, Scalar::Modular { residue: b, .. }) => Scalar::Modular {
                residue: (a + b) % p,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.same_field(other);
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Modular { residue: a, p }, Scalar::Modular { residue: b, .. }) => Scalar::Modular {
                residue: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => unreachable!(),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Modular { residue, p } => Scalar::Modular {
                residue: (p - residue) % p,
                p: *p,
            },
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        other.inverse().map(|inv| self.mul(&inv))
    }
}

fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc: u128 = 1;
    let mut b = base as u128 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

// Rationals compare numerically, residues by representative. Mixed kinds never
// meet inside one instance; rationals sort first.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => a.cmp(b),
            (Scalar::Modular { residue: a, p: pa }, Scalar::Modular { residue: b, p: pb }) => {
                pa.cmp(pb).then(a.cmp(b))
            }
            (Scalar::Rational(_), Scalar::Modular { .. }) => Ordering::Less,
            (Scalar::Modular { .. }, Scalar::Rational(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Modular { residue, .. } => write!(f, "{residue}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: Self) -> Scalar {
        Scalar::add(self, rhs)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Self) -> Scalar {
        Scalar::sub(self, rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Self) -> Scalar {
        Scalar::mul(self, rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

/// A bounded rational grid `{n/d : 1 <= d <= max_den, |n/d| <= bound}` used to
/// draw sample coordinates and scalars over ℚ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub bound: i64,
    pub max_den: i64,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { bound: 4, max_den: 4 }
    }
}

impl Grid {
    pub fn new(bound: i64, max_den: i64) -> Result<Self, EvsError> {
        if bound < 1 || max_den < 1 {
            return Err(EvsError::Input(format!(
                "grid needs bound >= 1 and max denominator >= 1 (got {bound}, {max_den})"
            )));
        }
        Ok(Grid { bound, max_den })
    }

    /// All grid values in increasing order.
    pub fn values(&self) -> Vec<Scalar> {
        let mut out: Vec<BigRational> = Vec::new();
        for d in 1..=self.max_den {
            for n in -self.bound * d..=self.bound * d {
                out.push(BigRational::new(n.into(), d.into()));
            }
        }
        out.sort();
        out.dedup();
        out.into_iter().map(Scalar::Rational).collect()
    }

    pub fn nonnegative(&self) -> Vec<Scalar> {
        self.values().into_iter().filter(|s| !s.is_negative()).collect()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        let d = rng.gen_range(1..=self.max_den);
        let n = rng.gen_range(-self.bound * d..=self.bound * d);
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn sample_positive<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        let d = rng.gen_range(1..=self.max_den);
        let n = rng.gen_range(1..=self.bound * d);
        Scalar::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Scalar {
        let s = self.sample_positive(rng);
        if rng.gen_bool(0.5) {
            s.neg()
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Scalar {
        Field::Rational.from_ratio(n, d)
    }

    #[test]
    fn prime_check() {
        assert!(Field::gf(2).is_ok());
        assert!(Field::gf(5).is_ok());
        assert!(Field::gf(4).is_err());
        assert!(Field::gf(1).is_err());
    }

    #[test]
    fn canonical_parsing() {
        assert_eq!(Field::Rational.parse_canonical("-3/4").unwrap(), q(-3, 4));
        assert!(Field::Rational.parse_canonical("2/4").is_err());
        assert!(Field::Rational.parse_canonical("3/1").is_err());
        let gf3 = Field::gf(3).unwrap();
        assert_eq!(gf3.parse_canonical("2").unwrap(), gf3.from_i64(-1));
        assert!(gf3.parse_canonical("3").is_err());
        assert_eq!(gf3.parse("1/2").unwrap(), gf3.from_i64(2));
    }

    #[test]
    fn modular_inverse() {
        let gf5 = Field::gf(5).unwrap();
        for s in gf5.elements().unwrap().iter().skip(1) {
            assert!(s.mul(&s.inverse().unwrap()).is_one());
        }
        assert!(gf5.zero().inverse().is_none());
    }

    #[test]
    fn grid_values_are_sorted_and_bounded() {
        let g = Grid::new(2, 2).unwrap();
        let v = g.values();
        assert_eq!(v.first(), Some(&q(-2, 1)));
        assert_eq!(v.last(), Some(&q(2, 1)));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(v.len(), 9);
    }

    fn any_rational() -> impl Strategy<Value = Scalar> {
        (-50i64..50, 1i64..12).prop_map(|(n, d)| q(n, d))
    }

    fn any_gf7() -> impl Strategy<Value = Scalar> {
        (0i64..7).prop_map(|n| Field::Gf { p: 7 }.from_i64(n))
    }

    macro_rules! field_axioms {
        ($name:ident, $strat:expr) => {
            proptest! {
                #[test]
                fn $name(a in $strat, b in $strat, c in $strat) {
                    prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
                    prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
                    prop_assert_eq!(a.add(&b), b.add(&a));
                    prop_assert_eq!(a.mul(&b), b.mul(&a));
                    prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
                    prop_assert!(a.add(&a.neg()).is_zero());
                    if let Some(inv) = a.inverse() {
                        prop_assert!(a.mul(&inv).is_one());
                    }
                }
            }
        };
    }

    field_axioms!(rational_field_axioms, any_rational());
    field_axioms!(prime_field_axioms, any_gf7());

    proptest! {
        #[test]
        fn display_parse_roundtrip(a in any_rational()) {
            prop_assert_eq!(Field::Rational.parse_canonical(&a.to_string()).unwrap(), a);
        }
    }
}
