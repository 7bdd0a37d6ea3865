use evs_core::axioms::{validate_axioms, CheckMode};
use evs_core::basis::{self, check_q_laws, enumerate_bases, find_basis, minimal_generator_check, BasisOutcome};
use evs_core::families::{finite_catalog, make_family, symbolic_catalog};
use evs_core::{Grid, KnownBasis};

#[test]
fn finite_catalog_is_desk_scale_and_valid() {
    for spec in finite_catalog() {
        let x = make_family(&spec, Grid::default()).unwrap();
        let fin = x.as_finite().unwrap_or_else(|| panic!("{} is not tabulated", x.name()));
        assert!(fin.len() <= 200, "{} has {} elements", x.name(), fin.len());
        let report = validate_axioms(&*x, CheckMode::Exhaustive).unwrap();
        assert!(report.all_pass(), "{}: {:?}", x.name(), report.failed());
        println!("{} {}", x.name(), fin.len());
    }
}

#[test]
fn symbolic_catalog_passes_sampled_axioms() {
    for spec in symbolic_catalog() {
        let x = make_family(&spec, Grid::default()).unwrap();
        let report = validate_axioms(&*x, CheckMode::Sampled { seed: 1, trials: 1000 }).unwrap();
        assert!(report.all_pass(), "{}: {:?}", x.name(), report.failed());
    }
}

#[test]
fn oracles_agree_with_search_on_finite_catalog() {
    for spec in finite_catalog() {
        let x = make_family(&spec, Grid::default()).unwrap();
        let fin = x.as_finite().unwrap();
        let found = find_basis(&*x, 1, 0).unwrap();
        let all = enumerate_bases(fin, 10_000);
        assert_eq!(found.certificate().is_some(), !all.is_empty(), "{}", x.name());
        if let BasisOutcome::Found(cert) = &found {
            assert!(all.iter().all(|b| b.len() == cert.basis.len()), "{}", x.name());
            assert!(minimal_generator_check(fin, &cert.basis).unwrap());
            if let Some(o) = x.oracle() {
                assert_eq!(o.dimension, cert.dimension, "{}", x.name());
                if let KnownBasis::Finite(b) = o.basis {
                    assert!(basis::verify_basis(&*x, &b, 1, 0).unwrap().is_basis(), "{}", x.name());
                }
            }
        }
        for b in &all {
            assert!(minimal_generator_check(fin, b).unwrap(), "{}", x.name());
        }
        assert!(check_q_laws(fin).all_pass(), "{}", x.name());
        println!("{} {} bases={}", x.name(), found.dimension(), all.len());
    }
}

#[test]
fn basis_theorems_hold_on_finite_catalog() {
    use evs_core::testing::TestingTable;
    for spec in finite_catalog() {
        let x = make_family(&spec, Grid::default()).unwrap();
        let fin = x.as_finite().unwrap();
        let table = TestingTable::new(fin);
        let all = enumerate_bases(fin, 200);
        let idx = |b: &[evs_core::Element]| b.iter().map(|e| fin.idx(e)).collect::<Vec<_>>();
        for a in &all {
            for b in &all {
                for &i in &idx(a) {
                    let matches = idx(b).into_iter().filter(|&j| table.same(i, j)).count();
                    assert_eq!(matches, 1, "{}: unique correspondent", x.name());
                }
            }
            // A basis is a maximal orderly independent subset of X∖X₀.
            let ai = idx(a);
            for z in fin.nonminimal_indices() {
                if !ai.contains(&z) {
                    assert!(ai.iter().any(|&b| table.dependent(b, z)), "{}: maximality", x.name());
                }
            }
        }
        let Some(b) = all.first() else { continue };
        for xb in b {
            for y in fin.down_set(fin.idx(xb)) {
                if fin.is_minimal(y) {
                    continue;
                }
                basis::replace_basis_element(&*x, b, xb, fin.element(y), 1, 0).unwrap();
            }
        }
        for s in fin.nonzero_scalar_indices() {
            for p in fin.minimal_indices() {
                basis::transform_basis(&*x, b, fin.scalar(s), fin.element(p), 1, 0).unwrap();
            }
        }
    }
}
