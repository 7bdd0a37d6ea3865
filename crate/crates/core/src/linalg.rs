//! Row reduction over an exact field.

use crate::scalar::{Field, Scalar};

/// Reduced row echelon form of the row space spanned by `rows`; zero rows are
/// dropped, pivots are 1 and pivot columns are otherwise zero.
pub fn rref(_field: Field, rows: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..cols {
        let Some(found) = (pivot_row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(pivot_row, found);
        let inv = m[pivot_row][col].inverse().unwrap();
        for c in 0..cols {
            m[pivot_row][c] = m[pivot_row][c].mul(&inv);
        }
        for r in 0..m.len() {
            if r != pivot_row && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..cols {
                    let delta = factor.mul(&m[pivot_row][c]);
                    m[r][c] = m[r][c].sub(&delta);
                }
            }
        }
        pivot_row += 1;
        if pivot_row == m.len() {
            break;
        }
    }
    m.truncate(pivot_row);
    m
}

pub fn rank(field: Field, rows: &[Vec<Scalar>]) -> usize {
    rref(field, rows).len()
}

/// Whether `rows` already is the canonical reduced echelon basis of its span.
pub fn is_rref(field: Field, rows: &[Vec<Scalar>]) -> bool {
    rref(field, rows) == rows
}

pub fn in_span(field: Field, rows: &[Vec<Scalar>], v: &[Scalar]) -> bool {
    let mut extended = rows.to_vec();
    extended.push(v.to_vec());
    rank(field, &extended) == rank(field, rows)
}

/// Extends the span of `vectors` by unit vectors until it reaches `target`
/// dimension; returns a basis of the result, or `None` if `target` is out of range.
pub fn extend_to_dimension(
    field: Field,
    ambient: usize,
    vectors: &[Vec<Scalar>],
    target: usize,
) -> Option<Vec<Vec<Scalar>>> {
    if target > ambient {
        return None;
    }
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    for v in vectors {
        if basis.len() < target && !in_span(field, &basis, v) {
            basis.push(v.clone());
        }
    }
    if rank(field, &basis) > target || rank(field, vectors) > target {
        return None;
    }
    for i in 0..ambient {
        if basis.len() == target {
            break;
        }
        let unit: Vec<Scalar> = (0..ambient)
            .map(|j| if i == j { field.one() } else { field.zero() })
            .collect();
        if !in_span(field, &basis, &unit) {
            basis.push(unit);
        }
    }
    (basis.len() == target).then_some(basis)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(field: Field, xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| field.from_i64(x)).collect()
    }

    #[test]
    fn rref_over_gf3() {
        let f = Field::gf(3).unwrap();
        let r = rref(f, &[v(f, &[2, 1]), v(f, &[1, 2])]);
        assert_eq!(r, vec![v(f, &[1, 2])]);
        assert!(is_rref(f, &r));
    }

    #[test]
    fn rref_over_q() {
        let f = Field::Rational;
        let r = rref(f, &[v(f, &[0, 2, 4]), v(f, &[1, 1, 1]), v(f, &[1, 3, 5])]);
        assert_eq!(r, vec![v(f, &[1, 0, -1]), v(f, &[0, 1, 2])]);
    }

    #[test]
    fn extension_reaches_target() {
        let f = Field::gf(2).unwrap();
        let b = extend_to_dimension(f, 3, &[v(f, &[1, 1, 0])], 2).unwrap();
        assert_eq!(rank(f, &b), 2);
        assert!(in_span(f, &b, &v(f, &[1, 1, 0])));
        assert!(extend_to_dimension(f, 3, &[v(f, &[1, 0, 0]), v(f, &[0, 1, 0])], 1).is_none());
    }
}
