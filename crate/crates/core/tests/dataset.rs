use arrlink_core::braid::WiringDiagram;
use arrlink_core::combinatorics::{comb_automorphisms, comb_from_arrangement};
use arrlink_core::dataset::{self, emit_arrangement, parse_arrangement};
use arrlink_core::union::{maclane, Sign};

#[test]
fn every_family_member_has_the_listed_combinatorics() {
    for name in dataset::family_names() {
        let fam = dataset::family(name).unwrap();
        let c = fam.combinatorics().unwrap();
        assert_eq!(fam.members.len(), fam.doc.members.len(), "{name}");
        for (i, a) in &fam.members {
            assert_eq!(comb_from_arrangement(a), c, "{}", fam.member_name(*i));
        }
    }
}

#[test]
fn every_family_has_the_listed_automorphism_group() {
    for name in dataset::family_names() {
        let fam = dataset::family(name).unwrap();
        let c = fam.combinatorics().unwrap();
        let g = comb_automorphisms(&c);
        assert_eq!(g.order(), fam.doc.aut_order, "{name}");
        assert!(fam.expected_aut(c.n()).unwrap().same_group(&g), "{name}");
    }
}

#[test]
fn members_round_trip_through_json() {
    for name in ["M", "N", "NN", "B01", "B29"] {
        for (_, a) in dataset::family(name).unwrap().members {
            assert_eq!(parse_arrangement(&emit_arrangement(&a)).unwrap(), a);
        }
    }
}

#[test]
fn arrangements_load_by_name() {
    for name in dataset::arrangement_names().unwrap().iter().filter(|n| !n.starts_with('B')) {
        assert_eq!(dataset::arrangement(name).unwrap().name(), name);
    }
    assert_eq!(dataset::arrangement("B05-2").unwrap().name(), "B05-2");
    assert!(dataset::arrangement("M9").is_err());
    assert!(dataset::arrangement("B05").is_err());
}

#[test]
fn committed_maclane_files_match_the_construction() {
    assert_eq!(dataset::arrangement("ML+").unwrap().lines(), maclane(Sign::Plus).unwrap().lines());
    assert_eq!(dataset::arrangement("ML-").unwrap().lines(), maclane(Sign::Minus).unwrap().lines());
}

#[test]
fn wiring_diagrams_match_their_arrangements() {
    for name in dataset::wiring_names() {
        let w = WiringDiagram::from_doc(&dataset::wiring(name).unwrap()).unwrap();
        let a = dataset::arrangement(name).unwrap();
        w.check_against(&comb_from_arrangement(&a)).unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn appendix_families_are_eleven_lines_over_the_fifth_cyclotomic_field() {
    let names = dataset::appendix_family_names();
    assert_eq!(names.len(), 29);
    for name in names {
        let doc = dataset::family_doc(name).unwrap();
        assert_eq!(doc.lines.len(), 11, "{name}");
        assert_eq!(doc.root_of_unity, 5);
        assert_eq!(doc.members, vec![1, 2, 3, 4]);
        assert_eq!(doc.modulus, 5);
    }
}
