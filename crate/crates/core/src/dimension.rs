//! Dimension descriptors `[α:β]`.

use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// A cardinal as reported by this toolkit: a finite count, or the countably
/// infinite token used by symbolic family oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Cardinal {
    Finite(usize),
    Countable,
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Countable => write!(f, "aleph0"),
        }
    }
}

impl Serialize for Cardinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Cardinal::Finite(n) => serializer.serialize_u64(*n as u64),
            Cardinal::Countable => serializer.serialize_str("aleph0"),
        }
    }
}

/// `[dim(X∖X₀) : dim X₀]`, or the marker for an evs without a basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dimension {
    NoBasis,
    Known { evs: Cardinal, primitive: Cardinal },
}

impl Dimension {
    pub fn finite(evs: usize, primitive: usize) -> Self {
        Dimension::Known {
            evs: Cardinal::Finite(evs),
            primitive: Cardinal::Finite(primitive),
        }
    }

    /// Componentwise sum, as for products; `None` when either side has no basis.
    pub fn sum(self, other: Dimension) -> Option<Dimension> {
        match (self, other) {
            (
                Dimension::Known { evs: a, primitive: b },
                Dimension::Known { evs: c, primitive: d },
            ) => Some(Dimension::Known {
                evs: add_cardinals(a, c),
                primitive: add_cardinals(b, d),
            }),
            _ => None,
        }
    }
}

fn add_cardinals(a: Cardinal, b: Cardinal) -> Cardinal {
    match (a, b) {
        (Cardinal::Finite(x), Cardinal::Finite(y)) => Cardinal::Finite(x + y),
        _ => Cardinal::Countable,
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::NoBasis => write!(f, "no-basis"),
            Dimension::Known { evs, primitive } => write!(f, "[{evs}:{primitive}]"),
        }
    }
}

impl Serialize for Dimension {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Dimension::NoBasis => serializer.serialize_str("no-basis"),
            Dimension::Known { evs, primitive } => {
                let mut map = serializer.serialize_map(Some(2))?;
                map.serialize_entry("evs", evs)?;
                map.serialize_entry("primitive", primitive)?;
                map.end()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        assert_eq!(Dimension::finite(3, 0).to_string(), "[3:0]");
        assert_eq!(Dimension::NoBasis.to_string(), "no-basis");
        assert_eq!(
            serde_json::to_string(&Dimension::finite(3, 0)).unwrap(),
            r#"{"evs":3,"primitive":0}"#
        );
        assert_eq!(serde_json::to_string(&Dimension::NoBasis).unwrap(), r#""no-basis""#);
        let d = Dimension::Known { evs: Cardinal::Countable, primitive: Cardinal::Finite(2) };
        assert_eq!(d.to_string(), "[aleph0:2]");
    }

    #[test]
    fn sums() {
        let s = Dimension::finite(1, 1).sum(Dimension::finite(3, 0)).unwrap();
        assert_eq!(s, Dimension::finite(4, 1));
        assert_eq!(Dimension::NoBasis.sum(Dimension::finite(1, 0)), None);
    }
}
