use arrlink_core::arrangement::{galois_conjugate, Arrangement};
use arrlink_core::braid::{ulk_all, MeridianSum, OverStrand, WiringDiagram, POSITIVE_OVER};
use arrlink_core::combinatorics::{comb_automorphisms, comb_from_arrangement, edges_of};
use arrlink_core::dataset::{self, cyclotomic_automorphism};
use arrlink_core::linking::{compare, lln, lln_orbit, Method, Verdict};
use arrlink_core::tlg::{edge_key, non_integral_part, tlg_compute, tlg_integral, Tensor};

fn member(family: &str, i: u32) -> Arrangement {
    dataset::family(family).unwrap().member(i).unwrap().clone()
}

fn wiring(name: &str) -> WiringDiagram {
    WiringDiagram::from_doc(&dataset::wiring(name).unwrap()).unwrap()
}

fn lambda0(a: &Arrangement) -> Tensor {
    Tensor::from_doc(&comb_from_arrangement(a), &dataset::lambda0_fixture()).unwrap()
}

/// A generator of the eleven-line group modulo 7 that does not lift to an integral tensor.
fn seventh_generator(a: &Arrangement) -> Tensor {
    let c = comb_from_arrangement(a);
    let tlg = tlg_compute(&c, 7);
    non_integral_part(&c, &tlg, &tlg_integral(&c)).remove(0)
}

#[test]
fn wiring_method_reproduces_the_tabulated_ulk_values() {
    let a = member("M", 1);
    let c = comb_from_arrangement(&a);
    let fixture = dataset::ulk_fixture();
    let computed = ulk_all(&wiring("M1"), &c, POSITIVE_OVER).unwrap();
    let edges = edges_of(&c);
    assert_eq!(fixture.edges.len(), edges.len());
    for (e, u) in edges.iter().zip(&computed) {
        let key = edge_key(&c, e);
        assert_eq!(u, &MeridianSum(fixture.edges[&key].clone()), "{key}");
    }
    assert!(!fixture.reduced_by_relation.is_empty());
}

#[test]
fn the_other_crossing_convention_disagrees_with_the_table() {
    let c = comb_from_arrangement(&member("M", 1));
    let fixture = dataset::ulk_fixture();
    let computed = ulk_all(&wiring("M1"), &c, OverStrand::Lower).unwrap();
    let agree = edges_of(&c)
        .iter()
        .zip(&computed)
        .filter(|(e, u)| **u == MeridianSum(fixture.edges[&edge_key(&c, e)].clone()))
        .count();
    assert!(agree < computed.len());
}

#[test]
fn both_methods_give_two_on_the_first_ten_line_arrangement() {
    let a = member("M", 1);
    let t = lambda0(&a);
    assert_eq!(lln(&a, &t, &Method::Wiring(&wiring("M1"))).unwrap(), 2);
    assert_eq!(lln(&a, &t, &Method::Cov { seed: 0 }).unwrap(), 2);
}

#[test]
fn both_methods_agree_on_the_third_ten_line_arrangement() {
    let a = member("M", 3);
    let t = lambda0(&a);
    let w = lln(&a, &t, &Method::Wiring(&wiring("M3"))).unwrap();
    assert_eq!(w, 1);
    assert_eq!(lln(&a, &t, &Method::Cov { seed: 0 }).unwrap(), w);
}

#[test]
fn ten_line_values_pair_up_under_complex_conjugation() {
    let values: Vec<u64> = (1..=4).map(|i| {
        let a = member("M", i);
        lln(&a, &lambda0(&a), &Method::Cov { seed: 0 }).unwrap()
    }).collect();
    assert!(values.iter().all(|&v| v != 0));
    for i in 0..4 {
        assert_eq!((values[i] + values[3 - i]) % 5, 0);
        for j in 0..i {
            assert_ne!(values[i], values[j]);
        }
    }
}

#[test]
fn values_do_not_depend_on_the_projection_frame() {
    let m1 = member("M", 1);
    let n1 = member("N", 1);
    let tm = lambda0(&m1);
    let tn = seventh_generator(&n1);
    let m_ref = lln(&m1, &tm, &Method::Cov { seed: 0 }).unwrap();
    let n_ref = lln(&n1, &tn, &Method::Cov { seed: 0 }).unwrap();
    assert_ne!(n_ref, 0);
    for seed in [1, 7, 2024] {
        assert_eq!(lln(&m1, &tm, &Method::Cov { seed }).unwrap(), m_ref, "seed {seed}");
        assert_eq!(lln(&n1, &tn, &Method::Cov { seed }).unwrap(), n_ref, "seed {seed}");
    }
}

#[test]
fn galois_conjugation_multiplies_the_value() {
    for (family, root, generator) in [("M", 5u32, lambda0 as fn(&Arrangement) -> Tensor), ("N", 7, seventh_generator)] {
        let a = member(family, 1);
        let t = generator(&a);
        let n = t.modulus();
        let base = lln(&a, &t, &Method::Cov { seed: 0 }).unwrap();
        for k in 2..root {
            let sigma = cyclotomic_automorphism(a.field(), root, k).unwrap();
            let conj = galois_conjugate(&sigma, &a).unwrap();
            assert_eq!(comb_from_arrangement(&conj), comb_from_arrangement(&a));
            let v = lln(&conj, &t, &Method::Cov { seed: 0 }).unwrap();
            assert_eq!(v, u64::from(k) * base % n, "{family} k={k}");
        }
    }
}

#[test]
fn orbit_values_match_recomputation_on_relabeled_arrangements() {
    for (a, t) in [(member("M", 1), lambda0(&member("M", 1))), (member("N", 2), seventh_generator(&member("N", 2)))] {
        let g = comb_automorphisms(&comb_from_arrangement(&a));
        let method = Method::Cov { seed: 0 };
        for (sigma, v) in lln_orbit(&a, &t, &g, &method).unwrap() {
            let relabeled = a.permuted(&sigma).unwrap();
            assert_eq!(lln(&relabeled, &t, &method).unwrap(), v, "{sigma}");
        }
    }
}

#[test]
fn conjugate_ten_line_arrangements_are_told_apart_only_as_ordered_oriented_pairs() {
    let r = compare(&member("M", 1), &member("M", 2), 5, 0).unwrap();
    assert!(r.combinatorics_isomorphic);
    assert_eq!(r.verdict, Verdict::OrderedOrientedDistinct);
}

#[test]
fn eleven_line_pairs_follow_the_sum_rule() {
    let r = compare(&member("MM", 1), &member("MM", 2), 5, 0).unwrap();
    assert_eq!(r.verdict, Verdict::NonHomeomorphicComplements);
    let r = compare(&member("MM", 1), &member("MM", 4), 5, 0).unwrap();
    assert_eq!(r.verdict, Verdict::OrderedOrientedDistinct);
}
