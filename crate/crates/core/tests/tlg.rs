use std::collections::BTreeSet;

use arrlink_core::combinatorics::{comb_from_arrangement, Combinatorics};
use arrlink_core::dataset;
use arrlink_core::tlg::{
    kernel_group_mod, kernel_mod, lifts_to_integral, non_integral_part, tensor_validate, tlg_compute, tlg_integral,
    ModMatrix, Tensor,
};
use arrlink_core::union::{maclane, maclane_lambda0, Sign};
use proptest::prelude::*;

fn family_comb(name: &str) -> Combinatorics {
    dataset::family(name).unwrap().combinatorics().unwrap()
}

#[test]
fn ten_line_group_mod_5_is_one_dimensional_modulo_integral_tensors() {
    let c = family_comb("M");
    let tlg = tlg_compute(&c, 5);
    let integral = tlg_integral(&c);
    assert_eq!(tlg.dimension(), integral.rank + 1);
    assert_eq!(non_integral_part(&c, &tlg, &integral).len(), 1);
}

#[test]
fn tabulated_lambda0_is_a_non_integral_generator() {
    let c = family_comb("M");
    let lam = Tensor::from_doc(&c, &dataset::lambda0_fixture()).unwrap();
    assert!(tensor_validate(&c, &lam).is_empty());
    assert!(!lam.is_zero());
    let integral = tlg_integral(&c);
    for k in 1..5 {
        assert!(!lifts_to_integral(&c, &integral, &lam.scaled(k)));
    }
    // together with the reductions of integral tensors it spans the whole group
    let tlg = tlg_compute(&c, 5);
    let mut with_lambda = integral.basis.iter().map(|b| b.reduce(&c, 5)).collect::<Vec<_>>();
    with_lambda.push(lam);
    assert_eq!(span_size(&with_lambda, 5), 5u64.pow(tlg.dimension() as u32));
    for t in &tlg.basis {
        assert!(in_span(&with_lambda, t));
    }
}

#[test]
fn eleven_line_group_mod_7_is_one_dimensional_modulo_integral_tensors() {
    let c = family_comb("N");
    let tlg = tlg_compute(&c, 7);
    assert_eq!(non_integral_part(&c, &tlg, &tlg_integral(&c)).len(), 1);
}

#[test]
fn maclane_group_mod_3() {
    let c = comb_from_arrangement(&maclane(Sign::Plus).unwrap());
    let tlg = tlg_compute(&c, 3);
    let integral = tlg_integral(&c);
    assert_eq!(tlg.dimension(), 4);
    assert_eq!(integral.rank, 3);
    assert_eq!(non_integral_part(&c, &tlg, &integral).len(), 1);
    let lam = maclane_lambda0().unwrap();
    assert!(tensor_validate(&c, &lam).is_empty());
    assert!(!lifts_to_integral(&c, &integral, &lam));
}

#[test]
fn generic_primes_see_only_integral_tensors() {
    let c = family_comb("M");
    let integral = tlg_integral(&c);
    for p in [11, 13] {
        let tlg = tlg_compute(&c, p);
        assert_eq!(tlg.dimension(), integral.rank);
        assert!(non_integral_part(&c, &tlg, &integral).is_empty());
    }
}

#[test]
fn every_basis_tensor_validates() {
    for (name, n) in [("M", 5), ("N", 7), ("MM", 5)] {
        let c = family_comb(name);
        for t in tlg_compute(&c, n).basis {
            assert!(tensor_validate(&c, &t).is_empty(), "{name}");
        }
    }
}

fn flats(ts: &[Tensor]) -> Vec<Vec<u64>> {
    ts.iter().map(Tensor::flat).collect()
}

fn span_size(ts: &[Tensor], p: u64) -> u64 {
    all_combinations(&flats(ts), ts[0].flat().len(), p).len() as u64
}

fn in_span(ts: &[Tensor], t: &Tensor) -> bool {
    all_combinations(&flats(ts), t.flat().len(), t.modulus()).contains(&t.flat())
}

/// Every linear combination of `vs` with coefficients in `Z/n`.
fn all_combinations(vs: &[Vec<u64>], len: usize, n: u64) -> BTreeSet<Vec<u64>> {
    let mut acc: BTreeSet<Vec<u64>> = BTreeSet::from([vec![0; len]]);
    for v in vs {
        let mut next = BTreeSet::new();
        for w in &acc {
            for k in 0..n {
                next.insert(w.iter().zip(v).map(|(a, b)| (a + k * b) % n).collect());
            }
        }
        acc = next;
    }
    acc
}

/// Kernel of `rows` modulo `n` by trying every vector.
fn brute_kernel(rows: &[Vec<i64>], ncols: usize, n: u64) -> BTreeSet<Vec<u64>> {
    let total = n.pow(ncols as u32);
    (0..total)
        .map(|mut code| {
            (0..ncols)
                .map(|_| {
                    let d = code % n;
                    code /= n;
                    d
                })
                .collect::<Vec<u64>>()
        })
        .filter(|v| {
            rows.iter().all(|r| {
                let s: i128 = r.iter().zip(v).map(|(&a, &x)| i128::from(a) * i128::from(x)).sum();
                s.rem_euclid(i128::from(n)) == 0
            })
        })
        .collect()
}

/// Random systems whose unknown count keeps the candidate space at most `7^6`.
fn system() -> impl Strategy<Value = (u64, Vec<Vec<i64>>, usize)> {
    prop::sample::select(vec![(2u64, 12usize), (3, 8), (4, 6), (5, 6), (6, 6), (7, 6)])
        .prop_flat_map(|(n, max_cols)| {
            (1..=max_cols).prop_flat_map(move |cols| {
                (Just(n), prop::collection::vec(prop::collection::vec(-6i64..=6, cols), 1..=cols + 1), Just(cols))
            })
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn kernel_matches_exhaustive_enumeration((n, rows, cols) in system()) {
        let m = ModMatrix::from_dense(n, &rows);
        let expected = brute_kernel(&rows, cols, n);
        let spanned = if arrlink_core::is_prime(n) {
            let basis = kernel_mod(&m, n);
            prop_assert_eq!(n.pow(basis.len() as u32), expected.len() as u64);
            all_combinations(&basis, cols, n)
        } else {
            let group = kernel_group_mod(&m, n);
            let order: u64 = group.iter().map(|(_, o)| *o).product();
            prop_assert_eq!(order, expected.len() as u64);
            all_combinations(&group.into_iter().map(|(v, _)| v).collect::<Vec<_>>(), cols, n)
        };
        prop_assert_eq!(spanned, expected);
    }
}
