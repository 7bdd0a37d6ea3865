use evs_core::basis::feasibility;
use evs_core::families::{make_family, FamilySpec, Product};
use evs_core::testing::membership;
use evs_core::{Evs, Feasibility, Grid, Instance, Membership};

fn fam(json: &str) -> Instance {
    let spec: FamilySpec = serde_json::from_str(json).unwrap();
    make_family(&spec, Grid::default()).unwrap()
}

/// The closed-form product rules agree with exhaustive evaluation on the
/// tabulated product wherever they answer, and answer on all of Q.
#[test]
fn product_rules_match_tables() {
    let pairs = [
        (r#"{"tag":"hyperspace","field":"GF(2)","dim":1}"#, r#"{"tag":"subspace_lattice","p":2,"n":2}"#),
        (r#"{"tag":"subspace_lattice","p":2,"n":1}"#, r#"{"tag":"subspace_lattice","p":2,"n":1}"#),
        (r#"{"tag":"hyperspace_with_theta","field":"GF(3)","dim":1}"#, r#"{"tag":"hyperspace","field":"GF(3)","dim":1}"#),
    ];
    for (a, b) in pairs {
        let rule = Product { components: vec![fam(a), fam(b)] };
        let table = fam(&format!(r#"{{"tag":"product","components":[{a},{b}]}}"#));
        let fin = table.as_finite().unwrap();
        for x in fin.elements() {
            if fin.is_minimal(fin.idx(x)) {
                continue;
            }
            let want = feasibility(&*table, x).unwrap();
            let got = rule.feasible_rule(x).expect("feasibility is always decided");
            assert_eq!(got == Feasibility::Feasible, want == Feasibility::Feasible, "{x}");
            if let Feasibility::Infeasible { below } = &got {
                assert!(rule.leq(below, x) && !rule.is_primitive(below));
                assert!(!membership(&*table, x, below).unwrap().is_member());
            }
            for z in fin.elements() {
                let truth = membership(&*table, x, z).unwrap().is_member();
                match rule.testing_rule(x, z) {
                    Some(Membership::Member(w)) => {
                        assert!(truth, "{z} ∈ L({x})");
                        assert!(rule.leq(&rule.add(&rule.scale(&w.alpha, x), &w.primitive), z));
                        assert!(rule.is_primitive(&w.primitive));
                    }
                    Some(Membership::NonMember) => assert!(!truth, "{z} ∉ L({x})"),
                    None => assert!(want != Feasibility::Feasible, "undecided on feasible {x}"),
                }
            }
        }
    }
}
