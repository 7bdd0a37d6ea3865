//! Canonical element payloads shared by every carrier kind.

use std::fmt;

use serde::ser::{SerializeMap, SerializeSeq};
use serde::Serialize;
use serde_json::Value;

use crate::error::EvsError;
use crate::linalg;
use crate::scalar::{Field, Scalar};

/// A point of an evs carrier. Equality is structural, so every constructor
/// below produces the unique canonical form of its payload.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Element {
    /// Abstract label of an explicit table carrier.
    Atom(u32),
    /// Coordinate tuple (rays, dictionary tuples, vector-space parts).
    Vector(Vec<Scalar>),
    /// Non-empty finite point set, sorted and duplicate free.
    Set(Vec<Vec<Scalar>>),
    /// Linear subspace, stored as its reduced row echelon basis.
    Subspace(Vec<Vec<Scalar>>),
    /// Product and extension coordinates.
    Tuple(Vec<Element>),
}

impl Element {
    pub fn vector(coords: Vec<Scalar>) -> Self {
        Element::Vector(coords)
    }

    /// Point set from arbitrary points; sorts and removes duplicates.
    pub fn set(mut points: Vec<Vec<Scalar>>) -> Self {
        assert!(!points.is_empty(), "point sets are non-empty");
        points.sort();
        points.dedup();
        Element::Set(points)
    }

    pub fn span(field: Field, generators: &[Vec<Scalar>]) -> Self {
        Element::Subspace(linalg::rref(field, generators))
    }

    pub fn tuple(parts: Vec<Element>) -> Self {
        Element::Tuple(parts)
    }

    pub fn as_vector(&self) -> &[Scalar] {
        match self {
            Element::Vector(v) => v,
            other => panic!("expected a vector payload, found {other}"),
        }
    }

    pub fn as_set(&self) -> &[Vec<Scalar>] {
        match self {
            Element::Set(s) => s,
            other => panic!("expected a point-set payload, found {other}"),
        }
    }

    pub fn as_tuple(&self) -> &[Element] {
        match self {
            Element::Tuple(t) => t,
            other => panic!("expected a tuple payload, found {other}"),
        }
    }

    /// Checks the canonical-form invariants; returns the first violation.
    pub fn check_canonical(&self, field: Field) -> Result<(), String> {
        let check_scalar = |s: &Scalar| -> Result<(), String> {
            if s.field() != field {
                return Err(format!("scalar {s} is not in {field}"));
            }
            Ok(())
        };
        match self {
            Element::Atom(_) => Ok(()),
            Element::Vector(v) => v.iter().try_for_each(check_scalar),
            Element::Set(points) => {
                if points.is_empty() {
                    return Err("point set is empty".into());
                }
                let width = points[0].len();
                for p in points {
                    if p.len() != width {
                        return Err("points of different dimension".into());
                    }
                    p.iter().try_for_each(check_scalar)?;
                }
                if !points.windows(2).all(|w| w[0] < w[1]) {
                    return Err("point set is not sorted and duplicate free".into());
                }
                Ok(())
            }
            Element::Subspace(rows) => {
                for r in rows {
                    r.iter().try_for_each(check_scalar)?;
                }
                if !linalg::is_rref(field, rows) {
                    return Err("subspace basis is not in reduced row echelon form".into());
                }
                Ok(())
            }
            Element::Tuple(parts) => parts.iter().try_for_each(|p| p.check_canonical(field)),
        }
    }

    /// Reads the JSON payload form, rejecting non-canonical payloads with the
    /// JSON path of the offending value.
    pub fn from_json(value: &Value, field: Field, path: &str) -> Result<Element, EvsError> {
        let obj = value
            .as_object()
            .filter(|o| o.len() == 1)
            .ok_or_else(|| EvsError::doc(path, "expected an object with a single payload key"))?;
        let (key, inner) = obj.iter().next().unwrap();
        let inner_path = format!("{path}.{key}");
        let elem = match key.as_str() {
            "atom" => {
                let n = inner
                    .as_u64()
                    .filter(|n| *n <= u32::MAX as u64)
                    .ok_or_else(|| EvsError::doc(&inner_path, "atom label must be a small non-negative integer"))?;
                Element::Atom(n as u32)
            }
            "vec" => Element::Vector(scalars_from_json(inner, field, &inner_path)?),
            "set" => {
                let arr = inner
                    .as_array()
                    .ok_or_else(|| EvsError::doc(&inner_path, "expected an array of points"))?;
                let pts = arr
                    .iter()
                    .enumerate()
                    .map(|(i, p)| scalars_from_json(p, field, &format!("{inner_path}[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                Element::Set(pts)
            }
            "span" => {
                let arr = inner
                    .as_array()
                    .ok_or_else(|| EvsError::doc(&inner_path, "expected an array of basis rows"))?;
                let rows = arr
                    .iter()
                    .enumerate()
                    .map(|(i, p)| scalars_from_json(p, field, &format!("{inner_path}[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                Element::Subspace(rows)
            }
            "tuple" => {
                let arr = inner
                    .as_array()
                    .ok_or_else(|| EvsError::doc(&inner_path, "expected an array of elements"))?;
                let parts = arr
                    .iter()
                    .enumerate()
                    .map(|(i, p)| Element::from_json(p, field, &format!("{inner_path}[{i}]")))
                    .collect::<Result<Vec<_>, _>>()?;
                Element::Tuple(parts)
            }
            other => return Err(EvsError::doc(path, format!("unknown payload kind {other:?}"))),
        };
        elem.check_canonical(field)
            .map_err(|m| EvsError::doc(path, format!("non-canonical payload: {m}")))?;
        Ok(elem)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("elements serialize")
    }
}

fn scalars_from_json(value: &Value, field: Field, path: &str) -> Result<Vec<Scalar>, EvsError> {
    let arr = value
        .as_array()
        .ok_or_else(|| EvsError::doc(path, "expected an array of scalars"))?;
    arr.iter()
        .enumerate()
        .map(|(i, s)| {
            let p = format!("{path}[{i}]");
            let text = match s {
                Value::String(t) => t.clone(),
                Value::Number(n) => n.to_string(),
                _ => return Err(EvsError::doc(&p, "expected a scalar literal")),
            };
            field.parse_canonical(&text).map_err(|m| EvsError::doc(&p, m))
        })
        .collect()
}

struct Scalars<'a>(&'a [Scalar]);

impl Serialize for Scalars<'_> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for s in self.0 {
            seq.serialize_element(s)?;
        }
        seq.end()
    }
}

struct Rows<'a>(&'a [Vec<Scalar>]);

impl Serialize for Rows<'_> {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for r in self.0 {
            seq.serialize_element(&Scalars(r))?;
        }
        seq.end()
    }
}

impl Serialize for Element {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(1))?;
        match self {
            Element::Atom(n) => map.serialize_entry("atom", n)?,
            Element::Vector(v) => map.serialize_entry("vec", &Scalars(v))?,
            Element::Set(s) => map.serialize_entry("set", &Rows(s))?,
            Element::Subspace(s) => map.serialize_entry("span", &Rows(s))?,
            Element::Tuple(t) => map.serialize_entry("tuple", t)?,
        }
        map.end()
    }
}

fn write_point(f: &mut fmt::Formatter<'_>, p: &[Scalar]) -> fmt::Result {
    if p.len() == 1 {
        write!(f, "{}", p[0])
    } else {
        write_tuple(f, p)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, p: &[Scalar]) -> fmt::Result {
    write!(f, "(")?;
    for (i, s) in p.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{s}")?;
    }
    write!(f, ")")
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Atom(n) => write!(f, "#{n}"),
            Element::Vector(v) => write_tuple(f, v),
            Element::Set(points) => {
                write!(f, "{{")?;
                for (i, p) in points.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write_point(f, p)?;
                }
                write!(f, "}}")
            }
            Element::Subspace(rows) => {
                write!(f, "<")?;
                for (i, r) in rows.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write_tuple(f, r)?;
                }
                write!(f, ">")
            }
            Element::Tuple(parts) => {
                write!(f, "[")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, "]")
            }
        }
    }
}

/// Renders a collection of elements as `{e1,e2,...}`.
pub fn format_set(elems: &[Element]) -> String {
    let inner: Vec<String> = elems.iter().map(ToString::to_string).collect();
    format!("{{{}}}", inner.join(","))
}

/// Parser for the textual element syntax printed by `Display`:
/// `#3`, `(1,1/2)`, `{0,2,5}`, `{(0,1),(1,0)}`, `<(1,0)>`, `[x,y]`.
/// Point sets and spans are canonicalized while parsing.
pub struct TextParser<'a> {
    src: &'a str,
    pos: usize,
    field: Field,
}

impl<'a> TextParser<'a> {
    pub fn new(src: &'a str, field: Field) -> Self {
        TextParser { src, pos: 0, field }
    }

    fn err(&self, msg: &str) -> EvsError {
        EvsError::Input(format!("{msg} at offset {} in {:?}", self.pos, self.src))
    }

    fn skip_ws(&mut self) {
        while self.src[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), EvsError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(&format!("expected {c:?}")))
        }
    }

    fn scalar(&mut self) -> Result<Scalar, EvsError> {
        self.skip_ws();
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_ascii_digit() || c == '-' || c == '/' || c == '+' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if start == self.pos {
            return Err(self.err("expected a scalar"));
        }
        self.field
            .parse(&self.src[start..self.pos])
            .map_err(|m| self.err(&m))
    }

    fn scalar_tuple(&mut self) -> Result<Vec<Scalar>, EvsError> {
        self.expect('(')?;
        let mut out = Vec::new();
        if self.peek() == Some(')') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.scalar()?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected ',' or ')'")),
            }
        }
    }

    fn point(&mut self) -> Result<Vec<Scalar>, EvsError> {
        if self.peek() == Some('(') {
            self.scalar_tuple()
        } else {
            Ok(vec![self.scalar()?])
        }
    }

    pub fn element(&mut self) -> Result<Element, EvsError> {
        match self.peek() {
            Some('#') => {
                self.pos += 1;
                let start = self.pos;
                while self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                self.src[start..self.pos]
                    .parse()
                    .map(Element::Atom)
                    .map_err(|_| self.err("bad atom label"))
            }
            Some('(') => Ok(Element::Vector(self.scalar_tuple()?)),
            Some('{') => {
                self.pos += 1;
                let mut pts = Vec::new();
                loop {
                    pts.push(self.point()?);
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some('}') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected ',' or '}'")),
                    }
                }
                Ok(Element::set(pts))
            }
            Some('<') => {
                self.pos += 1;
                let mut rows = Vec::new();
                if self.peek() != Some('>') {
                    loop {
                        rows.push(self.scalar_tuple()?);
                        match self.peek() {
                            Some(',') => self.pos += 1,
                            Some('>') => break,
                            _ => return Err(self.err("expected ',' or '>'")),
                        }
                    }
                }
                self.expect('>')?;
                Ok(Element::span(self.field, &rows))
            }
            Some('[') => {
                self.pos += 1;
                let mut parts = Vec::new();
                loop {
                    parts.push(self.element()?);
                    match self.peek() {
                        Some(',') => self.pos += 1,
                        Some(']') => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected ',' or ']'")),
                    }
                }
                Ok(Element::Tuple(parts))
            }
            _ => Err(self.err("expected an element")),
        }
    }

    /// A brace-delimited list of elements: `{e1,e2}`; `{}` is the empty list.
    pub fn element_list(&mut self) -> Result<Vec<Element>, EvsError> {
        self.expect('{')?;
        let mut out = Vec::new();
        if self.peek() == Some('}') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.element()?);
            match self.peek() {
                Some(',') => self.pos += 1,
                Some('}') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err("expected ',' or '}'")),
            }
        }
    }

    pub fn finish(&mut self) -> Result<(), EvsError> {
        if self.peek().is_some() {
            Err(self.err("trailing input"))
        } else {
            Ok(())
        }
    }
}

pub fn parse_element(text: &str, field: Field) -> Result<Element, EvsError> {
    let mut p = TextParser::new(text, field);
    let e = p.element()?;
    p.finish()?;
    Ok(e)
}

pub fn parse_element_list(text: &str, field: Field) -> Result<Vec<Element>, EvsError> {
    let mut p = TextParser::new(text, field);
    let e = p.element_list()?;
    p.finish()?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Scalar {
        Field::Rational.from_i64(n)
    }

    #[test]
    fn set_canonicalization() {
        let a = Element::set(vec![vec![q(5)], vec![q(0)], vec![q(2)], vec![q(0)]]);
        assert_eq!(a.to_string(), "{0,2,5}");
        assert!(a.check_canonical(Field::Rational).is_ok());
        let bad = Element::Set(vec![vec![q(2)], vec![q(0)]]);
        assert!(bad.check_canonical(Field::Rational).is_err());
    }

    #[test]
    fn json_rejects_noncanonical_with_path() {
        let v: Value = serde_json::json!({"set": [["0"], ["2/4"]]});
        let err = Element::from_json(&v, Field::Rational, "elements[3]").unwrap_err();
        assert!(err.to_string().contains("elements[3].set[1][0]"), "{err}");
        let v: Value = serde_json::json!({"span": [["0", "1"], ["1", "0"]]});
        let f = Field::gf(2).unwrap();
        let err = Element::from_json(&v, f, "zero").unwrap_err();
        assert!(err.to_string().contains("reduced row echelon"), "{err}");
    }

    #[test]
    fn text_syntax() {
        let f = Field::gf(3).unwrap();
        assert_eq!(parse_element("{2,0}", f).unwrap().to_string(), "{0,2}");
        assert_eq!(parse_element("<(2,1)>", f).unwrap().to_string(), "<(1,2)>");
        let list = parse_element_list("{{0,1}}", f).unwrap();
        assert_eq!(list.len(), 1);
        assert_eq!(
            parse_element("[(1,0),#2]", Field::Rational).unwrap(),
            Element::Tuple(vec![Element::Vector(vec![q(1), q(0)]), Element::Atom(2)])
        );
        assert!(parse_element("{0,1", f).is_err());
    }

    fn any_element() -> impl Strategy<Value = Element> {
        let scalar = (-6i64..6, 1i64..4).prop_map(|(n, d)| Field::Rational.from_ratio(n, d));
        let leaf = prop_oneof![
            (0u32..5).prop_map(Element::Atom),
            prop::collection::vec(scalar.clone(), 1..4).prop_map(Element::Vector),
            prop::collection::vec(prop::collection::vec(scalar, 2..3), 1..4).prop_map(Element::set),
        ];
        leaf.prop_recursive(2, 8, 3, |inner| prop::collection::vec(inner, 1..3).prop_map(Element::Tuple))
    }

    proptest! {
        #[test]
        fn json_and_text_roundtrip(e in any_element()) {
            let back = Element::from_json(&e.to_json(), Field::Rational, "$").unwrap();
            prop_assert_eq!(&back, &e);
            prop_assert_eq!(parse_element(&e.to_string(), Field::Rational).unwrap(), e);
        }
    }
}
