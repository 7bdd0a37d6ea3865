//! Coordinate helpers shared by the families.

use crate::scalar::{Field, Scalar};

pub fn add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn scale(alpha: &Scalar, a: &[Scalar]) -> Vec<Scalar> {
    a.iter().map(|x| alpha.mul(x)).collect()
}

pub fn zeros(field: Field, n: usize) -> Vec<Scalar> {
    vec![field.zero(); n]
}

pub fn unit(field: Field, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = zeros(field, n);
    v[i] = field.one();
    v
}

pub fn is_zero(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

pub fn first_nonzero(a: &[Scalar]) -> Option<usize> {
    a.iter().position(|x| !x.is_zero())
}

/// Scales `a` so its first nonzero coordinate is 1.
pub fn normalize(a: &[Scalar]) -> Vec<Scalar> {
    let lead = &a[first_nonzero(a).expect("nonzero vector")];
    let inv = lead.inverse().expect("nonzero lead");
    scale(&inv, a)
}

/// `Some(α)` with `a = α·b`, for nonzero `b`.
pub fn ratio(a: &[Scalar], b: &[Scalar]) -> Option<Scalar> {
    let k = first_nonzero(b)?;
    let alpha = a[k].div(&b[k])?;
    (scale(&alpha, b) == a).then_some(alpha)
}

/// Every vector of GF(p)^n in lexicographic residue order.
pub fn all_vectors(field: Field, n: usize) -> Vec<Vec<Scalar>> {
    let scalars = field.elements().expect("finite field");
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * scalars.len());
        for v in &out {
            for s in &scalars {
                let mut w = v.clone();
                w.push(s.clone());
                next.push(w);
            }
        }
        out = next;
    }
    out
}
