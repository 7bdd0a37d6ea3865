//! The JSON instance document: an explicit table, or a `family` key.

use serde_json::{json, Map, Value};

use crate::element::Element;
use crate::error::{EvsError, Result};
use crate::families::{make_family, FamilySpec};
use crate::finite::{FiniteEvs, Tables};
use crate::scalar::{Field, Grid};
use crate::structure::Instance;

fn obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| EvsError::doc(path, "expected an object"))
}

fn field_of<'a>(o: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    o.get(key)
        .ok_or_else(|| EvsError::doc(path, format!("missing field `{key}`")))
}

fn index(v: &Value, n: usize, path: &str) -> Result<usize> {
    let i = v
        .as_u64()
        .ok_or_else(|| EvsError::doc(path, "expected an element index"))? as usize;
    if i >= n {
        return Err(EvsError::doc(path, format!("element index {i} out of range (carrier has {n})")));
    }
    Ok(i)
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| EvsError::doc(path, "expected an array"))
}

/// Loads any instance document.
pub fn load_instance(v: &Value, grid: Grid) -> Result<Instance> {
    load_instance_at(v, grid, "$")
}

/// Loads an instance document nested at `path`.
pub fn load_instance_at(v: &Value, grid: Grid, path: &str) -> Result<Instance> {
    let o = obj(v, path)?;
    if let Some(spec) = o.get("family") {
        let spec: FamilySpec = serde_json::from_value(spec.clone())
            .map_err(|e| EvsError::doc(format!("{path}.family"), e.to_string()))?;
        return make_family(&spec, grid);
    }
    Ok(std::sync::Arc::new(load_table(v, path)?))
}

/// Loads an explicit table document, reporting the JSON path of the first
/// problem.
pub fn load_table(v: &Value, path: &str) -> Result<FiniteEvs> {
    let o = obj(v, path)?;
    let field: Field = serde_json::from_value(field_of(o, "field", path)?.clone())
        .map_err(|e| EvsError::doc(format!("{path}.field"), e.to_string()))?;
    let field = field
        .validate()
        .map_err(|e| EvsError::doc(format!("{path}.field"), e.to_string()))?;
    let name = match o.get("name") {
        Some(Value::String(s)) => s.clone(),
        Some(_) => return Err(EvsError::doc(format!("{path}.name"), "expected a string")),
        None => "table".to_string(),
    };

    let elems_path = format!("{path}.elements");
    let elements = array(field_of(o, "elements", path)?, &elems_path)?
        .iter()
        .enumerate()
        .map(|(i, e)| Element::from_json(e, field, &format!("{elems_path}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let n = elements.len();
    if n == 0 {
        return Err(EvsError::doc(elems_path, "carrier is empty"));
    }
    for i in 0..n {
        for j in 0..i {
            if elements[i] == elements[j] {
                return Err(EvsError::doc(
                    format!("{elems_path}[{i}]"),
                    format!("duplicates element {j} ({})", elements[j]),
                ));
            }
        }
    }

    let zero = index(field_of(o, "zero", path)?, n, &format!("{path}.zero"))?;

    let add_path = format!("{path}.add");
    let add_rows = array(field_of(o, "add", path)?, &add_path)?;
    if add_rows.len() != n {
        return Err(EvsError::doc(&add_path, format!("expected {n} rows, found {}", add_rows.len())));
    }
    let mut add = Vec::with_capacity(n);
    for (i, row) in add_rows.iter().enumerate() {
        let rp = format!("{add_path}[{i}]");
        let row = array(row, &rp)?;
        if row.len() != n {
            return Err(EvsError::doc(&rp, format!("expected {n} entries, found {}", row.len())));
        }
        add.push(
            row.iter()
                .enumerate()
                .map(|(j, v)| index(v, n, &format!("{rp}[{j}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }

    let sc_path = format!("{path}.scalar");
    let mut scalars: Vec<crate::scalar::Scalar> = Vec::new();
    let mut scale: Vec<Vec<Option<usize>>> = Vec::new();
    for (k, entry) in array(field_of(o, "scalar", path)?, &sc_path)?.iter().enumerate() {
        let ep = format!("{sc_path}[{k}]");
        let triple = array(entry, &ep)?;
        if triple.len() != 3 {
            return Err(EvsError::doc(&ep, "expected [scalar, element, image]"));
        }
        let text = match &triple[0] {
            Value::String(s) => s.clone(),
            Value::Number(x) => x.to_string(),
            _ => return Err(EvsError::doc(format!("{ep}[0]"), "expected a scalar literal")),
        };
        let s = field
            .parse_canonical(&text)
            .map_err(|m| EvsError::doc(format!("{ep}[0]"), m))?;
        let x = index(&triple[1], n, &format!("{ep}[1]"))?;
        let y = index(&triple[2], n, &format!("{ep}[2]"))?;
        let row = match scalars.iter().position(|t| *t == s) {
            Some(r) => r,
            None => {
                scalars.push(s);
                scale.push(vec![None; n]);
                scalars.len() - 1
            }
        };
        if scale[row][x].replace(y).is_some() {
            return Err(EvsError::doc(&ep, format!("repeats the entry for {} · {}", scalars[row], elements[x])));
        }
    }
    let scale = scale
        .into_iter()
        .zip(&scalars)
        .map(|(row, s)| {
            row.iter()
                .enumerate()
                .map(|(i, v)| {
                    v.ok_or_else(|| EvsError::doc(&sc_path, format!("missing entry for {s} · {}", elements[i])))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let leq_path = format!("{path}.leq");
    let mut leq = vec![vec![false; n]; n];
    for (k, pair) in array(field_of(o, "leq", path)?, &leq_path)?.iter().enumerate() {
        let pp = format!("{leq_path}[{k}]");
        let pair = array(pair, &pp)?;
        if pair.len() != 2 {
            return Err(EvsError::doc(&pp, "expected [lower, upper]"));
        }
        let a = index(&pair[0], n, &format!("{pp}[0]"))?;
        let b = index(&pair[1], n, &format!("{pp}[1]"))?;
        leq[a][b] = true;
    }

    let tables = Tables { field, elements, zero, add, scalars, scale, leq };
    FiniteEvs::from_tables(name, tables).map_err(|e| match e {
        EvsError::Input(m) => EvsError::doc(path, m),
        other => other,
    })
}

/// Serializes a finite evs to the table document format.
pub fn export_table(fin: &FiniteEvs) -> Value {
    let t = fin.tables();
    let mut scalar = Vec::new();
    for (s, a) in t.scalars.iter().enumerate() {
        for (i, &img) in t.scale[s].iter().enumerate() {
            scalar.push(json!([a.to_string(), i, img]));
        }
    }
    let mut leq = Vec::new();
    for (i, row) in t.leq.iter().enumerate() {
        for (j, &b) in row.iter().enumerate() {
            if b {
                leq.push(json!([i, j]));
            }
        }
    }
    json!({
        "name": crate::structure::Evs::name(fin),
        "field": t.field,
        "elements": t.elements,
        "zero": t.zero,
        "add": t.add,
        "scalar": scalar,
        "leq": leq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain_doc() -> Value {
        json!({
            "field": "GF(2)",
            "elements": [{"atom": 0}, {"atom": 1}],
            "zero": 0,
            "add": [[0, 1], [1, 1]],
            "scalar": [["0", 0, 0], ["0", 1, 0], ["1", 0, 0], ["1", 1, 1]],
            "leq": [[0, 0], [1, 1], [0, 1]]
        })
    }

    #[test]
    fn loads_table() {
        let x = load_table(&chain_doc(), "$").unwrap();
        assert_eq!(x.len(), 2);
        assert_eq!(x.minimal_indices(), vec![0]);
    }

    #[test]
    fn export_roundtrip() {
        let x = load_table(&chain_doc(), "$").unwrap();
        let y = load_table(&export_table(&x), "$").unwrap();
        assert_eq!(x.elements(), y.elements());
        assert_eq!(x.tables().add, y.tables().add);
        assert_eq!(x.tables().leq, y.tables().leq);
    }

    #[test]
    fn errors_are_located() {
        let mut d = chain_doc();
        d["add"][1][0] = json!(7);
        let e = load_table(&d, "$").unwrap_err().to_string();
        assert!(e.starts_with("$.add[1][0]"), "{e}");

        let mut d = chain_doc();
        d["leq"].as_array_mut().unwrap().push(json!([1, 0]));
        let e = load_table(&d, "$").unwrap_err().to_string();
        assert!(e.contains("antisymmetric") && e.contains("#1 <= #0"), "{e}");

        let mut d = chain_doc();
        d["elements"][1] = json!({"vec": ["3"]});
        let e = load_table(&d, "$").unwrap_err().to_string();
        assert!(e.starts_with("$.elements[1].vec[0]"), "{e}");

        let mut d = chain_doc();
        d["scalar"].as_array_mut().unwrap().pop();
        let e = load_table(&d, "$").unwrap_err().to_string();
        assert!(e.contains("missing entry"), "{e}");
    }

    #[test]
    fn family_key() {
        let x = load_instance(&json!({"family": {"tag": "ray_product", "n": 3}}), Grid::default()).unwrap();
        assert_eq!(x.name(), "ray_product(3)");
        assert!(load_instance(&json!({"family": {"tag": "nope"}}), Grid::default()).is_err());
    }
}
