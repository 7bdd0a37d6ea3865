use std::sync::Arc;

use evs_core::basis::{self, find_basis};
use evs_core::element::parse_element_list;
use evs_core::families::{make_family, FamilySpec};
use evs_core::morphisms::{
    check_invariance, compare_feasible_sets, find_order_isomorphism, isomorphism_spec, load_morphism,
    transport_basis, verify_order_morphism, IsoSearch, MapRule, MorphismKind, MorphismSpec,
};
use evs_core::primitive::detect_idempotents;
use evs_core::{Dimension, Element, EvsError, Field, FiniteEvs, Grid, Instance, Tables};

fn fam(json: &str) -> Instance {
    let spec: FamilySpec = serde_json::from_str(json).unwrap();
    make_family(&spec, Grid::default()).unwrap()
}

fn chain() -> FiniteEvs {
    let f = Field::Gf { p: 2 };
    FiniteEvs::from_tables(
        "chain",
        Tables {
            field: f,
            elements: vec![Element::Atom(0), Element::Atom(1)],
            zero: 0,
            add: vec![vec![0, 1], vec![1, 1]],
            scalars: f.elements().unwrap(),
            scale: vec![vec![0, 0], vec![0, 1]],
            leq: vec![vec![true, true], vec![false, true]],
        },
    )
    .unwrap()
}

#[test]
fn scaling_and_swap_are_isomorphisms() {
    let r = fam(r#"{"tag":"ray_product","n":2}"#);
    let b = parse_element_list("{(1,0),(0,1)}", r.field()).unwrap();
    let s = MorphismSpec::scaling(r.clone(), Field::Rational.from_i64(2)).unwrap();
    let rep = verify_order_morphism(&s, 1, 300).unwrap();
    assert!(rep.is_isomorphism() && rep.holds, "{rep:?}");
    let t = transport_basis(&s, &b, 1, 200).unwrap();
    assert_eq!(t.image, parse_element_list("{(2,0),(0,2)}", r.field()).unwrap());
    assert_eq!(t.source_dimension, t.target_dimension);

    let w = MorphismSpec::permutation(r.clone(), vec![1, 0]).unwrap();
    assert!(verify_order_morphism(&w, 1, 300).unwrap().is_isomorphism());
    let t = transport_basis(&w, &b, 1, 200).unwrap();
    assert_eq!(t.certificate.basis, {
        let mut s = b.clone();
        s.sort();
        s
    });
    let id = MorphismSpec::identity(r.clone());
    assert_eq!(transport_basis(&id, &b, 1, 100).unwrap().image, b);
}

#[test]
fn constant_map_is_not_an_isomorphism() {
    let h = fam(r#"{"tag":"hyperspace","field":"GF(2)","dim":1}"#);
    let fin = h.as_finite().unwrap();
    let table = fin.elements().iter().map(|e| (e.clone(), fin.element(fin.zero_index()).clone())).collect();
    let m = MorphismSpec { source: h.clone(), target: h.clone(), map: MapRule::Table(table), claimed: MorphismKind::Isomorphism };
    let rep = verify_order_morphism(&m, 1, 0).unwrap();
    assert!(!rep.holds);
    assert!(!rep.injective.passed() && !rep.surjective.passed());
    assert_eq!(rep.kind, Some(MorphismKind::Morphism));
    assert!(matches!(compare_feasible_sets(&m), Err(EvsError::Domain(_))));
}

#[test]
fn isomorphism_search() {
    let h = fam(r#"{"tag":"hyperspace","field":"GF(2)","dim":1}"#);
    let hf = h.as_finite().unwrap();
    match find_order_isomorphism(hf, hf, 10_000).unwrap() {
        IsoSearch::Found { pairs, .. } => assert!(pairs.iter().all(|(a, b)| a == b)),
        other => panic!("{other:?}"),
    }
    let lat1 = fam(r#"{"tag":"subspace_lattice","p":2,"n":1}"#);
    let c: Instance = Arc::new(chain());
    let IsoSearch::Found { pairs, .. } = find_order_isomorphism(lat1.as_finite().unwrap(), c.as_finite().unwrap(), 1000).unwrap() else {
        panic!("expected an isomorphism");
    };
    let m = isomorphism_spec(lat1.clone(), c.clone(), &pairs);
    assert!(verify_order_morphism(&m, 1, 0).unwrap().is_isomorphism());
    assert!(compare_feasible_sets(&m).unwrap());

    let lat2 = fam(r#"{"tag":"subspace_lattice","p":2,"n":2}"#);
    assert!(matches!(
        find_order_isomorphism(lat2.as_finite().unwrap(), hf, 1000).unwrap(),
        IsoSearch::ProvenNone { .. }
    ));
}

#[test]
fn relabeling_transports_everything() {
    let lat = fam(r#"{"tag":"subspace_lattice","p":3,"n":2}"#);
    let fin = lat.as_finite().unwrap();
    let labels: Vec<u32> = (0..fin.len() as u32).rev().collect();
    let m = MorphismSpec::relabel(fin, &labels).unwrap();
    let b = find_basis(&*lat, 1, 0).unwrap().certificate().unwrap().basis.clone();
    let t = transport_basis(&m, &b, 1, 0).unwrap();
    assert_eq!(t.target_dimension, Dimension::finite(4, 0));
    assert!(compare_feasible_sets(&m).unwrap());
    let (dep, prim) = check_invariance(&m).unwrap();
    assert!(dep.passed() && prim.passed());
    let back = m.inverse().unwrap();
    assert!(verify_order_morphism(&back, 1, 0).unwrap().is_isomorphism());
    let round = m.compose(&back).unwrap();
    assert!(verify_order_morphism(&round, 1, 0).unwrap().is_isomorphism());
}

#[test]
fn lattice_and_ray_share_dimension_but_not_idempotents() {
    let lat = fam(r#"{"tag":"subspace_lattice","p":2,"n":1}"#);
    let ray = fam(r#"{"tag":"ray"}"#);
    assert_eq!(basis::dimension(&*lat, 1, 0).unwrap(), Dimension::finite(1, 0));
    assert_eq!(basis::dimension(&*ray, 1, 500).unwrap(), Dimension::finite(1, 0));
    assert!(detect_idempotents(&*lat, 1, 0).non_topologizable());
    assert!(!detect_idempotents(&*ray, 1, 500).non_topologizable());
}

#[test]
fn morphism_documents() {
    let doc = serde_json::json!({"morphism": {
        "source": {"family": {"tag": "hyperspace", "field": "GF(2)", "dim": 1}},
        "target": {"family": {"tag": "hyperspace", "field": "GF(2)", "dim": 1}},
        "pairs": [[{"set": [[0]]}, {"set": [[0]]}], [{"set": [[1]]}, {"set": [[1]]}], [{"set": [[0], [1]]}, {"set": [[0], [1]]}]],
        "claimed": "isomorphism"
    }});
    let m = load_morphism(&doc, Grid::default()).unwrap();
    assert!(verify_order_morphism(&m, 1, 0).unwrap().holds);
    let mut partial = doc.clone();
    partial["morphism"]["pairs"].as_array_mut().unwrap().pop();
    let err = load_morphism(&partial, Grid::default()).unwrap_err().to_string();
    assert!(err.contains("not total"), "{err}");
}
