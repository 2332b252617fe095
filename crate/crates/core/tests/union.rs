use arrlink_core::arrangement::{apply_projectivity, Arrangement, Mat3};
use arrlink_core::combinatorics::{comb_automorphisms, comb_from_arrangement, comb_isomorphism};
use arrlink_core::dataset;
use arrlink_core::linking::{compare, full_lln, Method, Verdict};
use arrlink_core::tlg::{tensor_validate, tlg_compute, Tensor};
use arrlink_core::union::{
    maclane, maclane_lambda0, multiplicativity_check, ordered_union, rybnikov_like_check, rybnikov_pair,
    rybnikov_tensor, tensor_oplus, OrderedUnion, Sign,
};
use arrlink_core::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn member(i: u32) -> Arrangement {
    dataset::family("M").unwrap().member(i).unwrap().clone()
}

/// A projective image of `a` under a random integer matrix.
fn random_image(a: &Arrangement, rng: &mut ChaCha8Rng) -> Arrangement {
    loop {
        let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-4..=4)));
        let mat = Mat3::from_int(a.field(), m);
        if mat.inverse().is_ok() {
            if let Ok(b) = apply_projectivity(&mat, a) {
                return b.with_name("image");
            }
        }
    }
}

/// A union of `a1` with a projective image of `a2` sharing no line, where the lines of
/// different factors meet only in double points.
fn generic_union(a1: &Arrangement, a2: &Arrangement, rng: &mut ChaCha8Rng) -> OrderedUnion {
    loop {
        let image = random_image(a2, rng);
        let Ok(u) = ordered_union(a1, &image, Some(0)) else { continue };
        let (c1, c2, c) = (comb_from_arrangement(a1), comb_from_arrangement(&image), comb_from_arrangement(&u.result));
        if c.supports().len() == c1.supports().len() + c2.supports().len() + a1.len() * a2.len() {
            return u;
        }
    }
}

fn ten_line_union(rng: &mut ChaCha8Rng) -> OrderedUnion {
    generic_union(&member(rng.gen_range(1..=4)), &member(rng.gen_range(1..=4)), rng)
}

fn maclane_union(rng: &mut ChaCha8Rng) -> OrderedUnion {
    let pick = |rng: &mut ChaCha8Rng| maclane(if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus }).unwrap();
    let a1 = pick(rng);
    let a2 = pick(rng);
    generic_union(&a1, &a2, rng)
}

/// A random element of the tensor linking group modulo `n` of `a`.
fn random_tensor(a: &Arrangement, n: u64, rng: &mut ChaCha8Rng) -> Tensor {
    let c = comb_from_arrangement(a);
    let mut t = Tensor::zero(&c, n);
    for b in tlg_compute(&c, n).basis {
        t = t.add(&b.scaled(rng.gen_range(0..n))).unwrap();
    }
    t
}

#[test]
fn multiplicativity_on_twenty_random_unions() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..20 {
        let u = maclane_union(&mut rng);
        let t1 = random_tensor(&u.a1, 3, &mut rng);
        let t2 = random_tensor(&u.a2, 3, &mut rng);
        let report = multiplicativity_check(&u, &t1, &t2, k).unwrap();
        assert!(report.equal, "union {k}: {report:?}");
    }
}

#[test]
fn shared_prefix_is_detected() {
    let pair = rybnikov_pair(0).unwrap();
    let (a, b) = (&pair.plus.a1, &pair.plus.a2);
    let u = ordered_union(a, b, None).unwrap();
    assert_eq!(u.r, pair.plus.r);
    assert!(u.r > 0);
    assert_eq!(u.result.len(), a.len() + b.len() - u.r);
    assert_eq!(u.second_map()[..u.r], (0..u.r).collect::<Vec<_>>()[..]);
    assert_eq!(u.result.lines(), pair.plus.result.lines());
}

#[test]
fn conjugates_sharing_a_later_line_are_rejected() {
    assert!(matches!(ordered_union(&member(1), &member(2), None), Err(Error::SharedLineOutsidePrefix(4))));
}

#[test]
fn prefix_longer_than_the_common_one_is_rejected() {
    let a = member(1);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let b = random_image(&a, &mut rng);
    assert!(matches!(ordered_union(&a, &b, Some(2)), Err(Error::PrefixMismatch(1))));
}

#[test]
fn oplus_rejects_tensors_of_other_combinatorics() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let u = ten_line_union(&mut rng);
    let ml = maclane_lambda0().unwrap();
    let t = random_tensor(&u.a1, 3, &mut rng);
    assert!(tensor_oplus(&t, &ml, &u).is_err());
}

#[test]
fn maclane_values_are_one_and_two() {
    let l0 = maclane_lambda0().unwrap();
    let method = Method::Cov { seed: 0 };
    let plus = maclane(Sign::Plus).unwrap();
    let minus = maclane(Sign::Minus).unwrap();
    let lm = Tensor::from_doc(&comb_from_arrangement(&minus), &l0.to_doc()).unwrap();
    assert_eq!(arrlink_core::linking::lln(&plus, &l0, &method).unwrap(), 1);
    assert_eq!(arrlink_core::linking::lln(&minus, &lm, &method).unwrap(), 2);
    assert!(comb_isomorphism(&comb_from_arrangement(&plus), &comb_from_arrangement(&minus)).is_some());
}

#[test]
fn rybnikov_pair_has_distinct_complements() {
    let pair = rybnikov_pair(0).unwrap();
    let l0 = maclane_lambda0().unwrap();
    let method = Method::Cov { seed: 0 };
    let mut lhs = Vec::new();
    let mut full = Vec::new();
    for sign in [Sign::Plus, Sign::Minus] {
        let u = pair.get(sign);
        let second = Tensor::from_doc(&comb_from_arrangement(&u.a2), &l0.to_doc()).unwrap();
        let report = multiplicativity_check(u, &l0, &second, 0).unwrap();
        assert!(report.equal, "{report:?}");
        lhs.push(report.lhs);
        let t = rybnikov_tensor(u).unwrap();
        assert!(tensor_validate(&comb_from_arrangement(&u.result), &t).is_empty());
        full.push(full_lln(&u.result, &t, &method).unwrap());
    }
    assert_eq!(lhs, vec![2, 0]);
    assert_eq!(full[0].iter().copied().collect::<Vec<_>>(), vec![1, 2]);
    assert_eq!(full[1].iter().copied().collect::<Vec<_>>(), vec![0]);
    let c = compare(&pair.plus.result, &pair.minus.result, 3, 0).unwrap();
    assert!(c.combinatorics_isomorphic);
    assert_eq!(c.verdict, Verdict::NonHomeomorphicComplements);
    let aut = comb_automorphisms(&comb_from_arrangement(&pair.plus.result));
    assert_eq!(aut.order(), 12);
    let like = rybnikov_like_check(&maclane(Sign::Plus).unwrap(), &l0, &pair.psi_plus, &pair.psi_minus, 0).unwrap();
    assert!(like.condition_i && like.condition_ii);
    assert_eq!(like.predicted, Verdict::NonHomeomorphicComplements);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oplus_of_group_elements_is_a_group_element(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = if rng.gen_bool(0.5) { ten_line_union(&mut rng) } else { maclane_union(&mut rng) };
        let n = if u.a1.len() == 10 { 5 } else { 3 };
        let t1 = random_tensor(&u.a1, n, &mut rng);
        let t2 = random_tensor(&u.a2, n, &mut rng);
        let sum = tensor_oplus(&t1, &t2, &u).unwrap();
        prop_assert!(tensor_validate(&comb_from_arrangement(&u.result), &sum).is_empty());
    }
}
