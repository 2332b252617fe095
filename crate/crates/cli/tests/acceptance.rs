//! Acceptance run: one PASS/FAIL line per criterion, with the elapsed time against its budget.
//! Criterion 9 is a probe whose outcome is reported without affecting the verdict.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use arrlink::{batch, check_family, probe_integral, rybnikov_report};
use arrlink_core::arrangement::{apply_projectivity, galois_conjugate, Arrangement, Mat3};
use arrlink_core::braid::{ulk_all, MeridianSum, WiringDiagram, POSITIVE_OVER};
use arrlink_core::combinatorics::{comb_automorphisms, comb_from_arrangement, edges_of, Combinatorics};
use arrlink_core::dataset::{self, cyclotomic_automorphism};
use arrlink_core::linking::{lln, Method, Verdict};
use arrlink_core::tlg::{
    edge_key, kernel_group_mod, kernel_mod, lifts_to_integral, non_integral_part, tensor_validate, tlg_compute,
    tlg_integral, ModMatrix, Tensor,
};
use arrlink_core::union::{maclane, multiplicativity_check, ordered_union, tensor_oplus, OrderedUnion, Sign};
use arrlink_core::{is_prime, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into() }
    }
}

fn member(family: &str, i: u32) -> Arrangement {
    dataset::family(family).unwrap().member(i).unwrap().clone()
}

fn wiring(name: &str) -> WiringDiagram {
    WiringDiagram::from_doc(&dataset::wiring(name).unwrap()).unwrap()
}

fn family_comb(name: &str) -> Combinatorics {
    dataset::family(name).unwrap().combinatorics().unwrap()
}

fn lambda0(c: &Combinatorics) -> Tensor {
    Tensor::from_doc(c, &dataset::lambda0_fixture()).unwrap()
}

/// First generator modulo `n` that does not lift to an integral tensor.
fn non_integral_generator(c: &Combinatorics, n: u64) -> Tensor {
    non_integral_part(c, &tlg_compute(c, n), &tlg_integral(c)).remove(0)
}

fn cov(seed: u64) -> Method<'static> {
    Method::Cov { seed }
}

fn criterion_1() -> Result<Outcome> {
    let c = family_comb("M");
    let tlg = tlg_compute(&c, 5);
    let integral = tlg_integral(&c);
    let quotient = non_integral_part(&c, &tlg, &integral);
    let lam = lambda0(&c);
    let valid = tensor_validate(&c, &lam).is_empty() && !lam.is_zero();
    let lam_lifts = lifts_to_integral(&c, &integral, &lam);
    // the computed generator is a nonzero multiple of the tabulated one modulo integral tensors
    let scalar = quotient.first().and_then(|g| {
        (1..5).find(|&k| lifts_to_integral(&c, &integral, &g.add(&lam.scaled(5 - k)).unwrap()))
    });
    let ok = quotient.len() == 1 && valid && !lam_lifts && scalar.is_some();
    Ok(Outcome::new(
        ok,
        format!(
            "dimension {} modulo integral tensors (kernel {}, integral rank {}); generator = {}·Λ0 modulo integral tensors; tabulated Λ0 valid {}",
            quotient.len(),
            tlg.dimension(),
            integral.rank,
            scalar.map_or("?".into(), |k| k.to_string()),
            valid,
        ),
    ))
}

fn criterion_2() -> Result<Outcome> {
    let c = comb_from_arrangement(&member("M", 1));
    let fixture = dataset::ulk_fixture();
    let computed = ulk_all(&wiring("M1"), &c, POSITIVE_OVER)?;
    let edges = edges_of(&c);
    let mismatched: Vec<String> = edges
        .iter()
        .zip(&computed)
        .map(|(e, u)| (edge_key(&c, e), u))
        .filter(|(k, u)| fixture.edges.get(k).map(|v| MeridianSum(v.clone())) != Some((*u).clone()))
        .map(|(k, _)| k)
        .collect();
    let ok = mismatched.is_empty() && fixture.edges.len() == edges.len();
    Ok(Outcome::new(
        ok,
        format!(
            "{} of {} entries reproduced ({} simplified by the relation); mismatched {:?}",
            edges.len() - mismatched.len(),
            fixture.edges.len(),
            fixture.reduced_by_relation.len(),
            mismatched
        ),
    ))
}

fn criterion_3() -> Result<Outcome> {
    let lam = lambda0(&family_comb("M"));
    let m1 = member("M", 1);
    let wiring_m1 = lln(&m1, &lam, &Method::Wiring(&wiring("M1")))?;
    let values: Vec<u64> = (1..=4).map(|i| lln(&member("M", i), &lam, &cov(SEED))).collect::<Result<_>>()?;
    let wiring_m3 = lln(&member("M", 3), &lam, &Method::Wiring(&wiring("M3")))?;
    let nonzero = values.iter().all(|&v| v != 0);
    let distinct = values.iter().collect::<BTreeSet<_>>().len() == 4;
    let conjugate_pairs = (0..4).all(|i| (values[i] + values[3 - i]).is_multiple_of(5));
    let ok = wiring_m1 == 2 && values[0] == 2 && wiring_m3 == values[2] && nonzero && distinct && conjugate_pairs;
    Ok(Outcome::new(
        ok,
        format!("L(M1) = {wiring_m1} by wiring, {} by cov; L(M1..M4) = {values:?}; L(M3) by wiring = {wiring_m3}", values[0]),
    ))
}

fn criterion_4() -> Result<Outcome> {
    let m = dataset::family("M")?;
    let c = m.combinatorics()?;
    let aut_c = comb_automorphisms(&c);
    let aut_c_ok = aut_c.order() == 4 && m.expected_aut(c.n())?.same_group(&aut_c);
    let aut_e = comb_automorphisms(&family_comb("MM"));
    let n = dataset::family("N")?;
    let d = n.combinatorics()?;
    let aut_d = comb_automorphisms(&d);
    let aut_d_ok = n.expected_aut(d.n())?.same_group(&aut_d);
    let mm = check_family("MM", SEED)?;
    let pairs_ok = mm.pairs.len() == 6 && mm.pairs.iter().all(|p| p.ok);
    let split: Vec<String> = mm
        .pairs
        .iter()
        .map(|p| format!("({},{}) {}", p.i, p.j, if p.verdict == Verdict::NonHomeomorphicComplements { "NH" } else { "OO" }))
        .collect();
    let ok = aut_c_ok && aut_e.is_trivial() && aut_d_ok && pairs_ok;
    Ok(Outcome::new(
        ok,
        format!(
            "|Aut(C)| = {}, |Aut(E)| = {}, |Aut(D)| = {} equal to the generated group {}; pairs {}",
            aut_c.order(),
            aut_e.order(),
            aut_d.order(),
            aut_d_ok,
            split.join(" ")
        ),
    ))
}

fn criterion_5() -> Result<Outcome> {
    let n = check_family("N", SEED)?;
    let nn = check_family("NN", SEED)?;
    // the twelve-line diagrams send L1 to infinity, so they are checked against the affine
    // singular points only
    let c = family_comb("NN");
    let diagrams: Vec<bool> = (1..=3).map(|i| wiring(&format!("NN{i}")).check_against(&c).is_ok()).collect();
    let ok = n.non_integral_dim == 1
        && n.lln.len() == 6
        && n.lln.values().all(|&v| v != 0)
        && n.galois_equivariant
        && nn.ok
        && diagrams.iter().all(|&d| d);
    Ok(Outcome::new(
        ok,
        format!(
            "dimension {} modulo integral tensors; L(N1..N6) = {:?} by cov; twelve-line pairs as expected {}; diagrams NN1..NN3 match the affine points {:?}",
            n.non_integral_dim,
            n.lln.values().collect::<Vec<_>>(),
            nn.ok,
            diagrams
        ),
    ))
}

fn criterion_6() -> Result<Outcome> {
    let r = rybnikov_report(SEED)?;
    let maclane_values: BTreeSet<u64> = [r.lln_maclane_plus, r.lln_maclane_minus].into();
    let ok = r.maclane_non_integral_dim == 1
        && maclane_values == BTreeSet::from([1, 2])
        && r.multiplicativity_plus.equal
        && r.multiplicativity_minus.equal
        && r.multiplicativity_plus.lhs == 2
        && r.multiplicativity_minus.lhs == 0
        && r.full_set_plus == BTreeSet::from([1, 2])
        && r.full_set_minus == BTreeSet::from([0])
        && r.compare_verdict == Verdict::NonHomeomorphicComplements;
    Ok(Outcome::new(
        ok,
        format!(
            "MacLane dimension {} modulo integral tensors (kernel {}); L(ML+) = {}, L(ML-) = {}; L(R+) = {}, L(R-) = {}; full sets {:?} {:?}; {}",
            r.maclane_non_integral_dim,
            r.maclane_tlg_dim,
            r.lln_maclane_plus,
            r.lln_maclane_minus,
            r.multiplicativity_plus.lhs,
            r.multiplicativity_minus.lhs,
            r.full_set_plus,
            r.full_set_minus,
            r.compare_verdict
        ),
    ))
}

fn random_image(a: &Arrangement, rng: &mut ChaCha8Rng) -> Arrangement {
    loop {
        let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| rng.gen_range(-4..=4)));
        if let Ok(b) = apply_projectivity(&Mat3::from_int(a.field(), m), a) {
            return b;
        }
    }
}

/// Union of two MacLane arrangements, the second moved by a random projectivity until the two
/// factors meet only in double points.
fn random_union(rng: &mut ChaCha8Rng) -> OrderedUnion {
    let pick = |rng: &mut ChaCha8Rng| maclane(if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus }).unwrap();
    let a1 = pick(rng);
    let a2 = pick(rng);
    loop {
        let image = random_image(&a2, rng);
        let Ok(u) = ordered_union(&a1, &image, Some(0)) else { continue };
        let expected = comb_from_arrangement(&a1).supports().len() + comb_from_arrangement(&image).supports().len() + 64;
        if comb_from_arrangement(&u.result).supports().len() == expected {
            return u;
        }
    }
}

fn random_tensor(a: &Arrangement, n: u64, rng: &mut ChaCha8Rng) -> Tensor {
    let c = comb_from_arrangement(a);
    tlg_compute(&c, n).basis.iter().fold(Tensor::zero(&c, n), |t, b| t.add(&b.scaled(rng.gen_range(0..n))).unwrap())
}

/// Compares the kernel routines with enumeration on random systems of at most `7^6` candidates.
fn kernels_match(rng: &mut ChaCha8Rng, systems: usize) -> usize {
    let shapes = [(2u64, 12usize), (3, 8), (4, 6), (5, 6), (6, 6), (7, 6)];
    (0..systems)
        .filter(|_| {
            let (n, max_cols) = shapes[rng.gen_range(0..shapes.len())];
            let cols = rng.gen_range(1..=max_cols);
            let rows: Vec<Vec<i64>> =
                (0..rng.gen_range(1..=cols + 1)).map(|_| (0..cols).map(|_| rng.gen_range(-6..=6)).collect()).collect();
            let m = ModMatrix::from_dense(n, &rows);
            let mut brute = BTreeSet::new();
            for code in 0..n.pow(cols as u32) {
                let v: Vec<u64> = (0..cols).map(|j| code / n.pow(j as u32) % n).collect();
                let zero = rows.iter().all(|r| r.iter().zip(&v).map(|(&a, &x)| a * x as i64).sum::<i64>().rem_euclid(n as i64) == 0);
                if zero {
                    brute.insert(v);
                }
            }
            let gens: Vec<Vec<u64>> = if is_prime(n) {
                kernel_mod(&m, n)
            } else {
                kernel_group_mod(&m, n).into_iter().map(|(v, _)| v).collect()
            };
            let mut spanned = BTreeSet::from([vec![0u64; cols]]);
            for g in &gens {
                spanned = spanned
                    .iter()
                    .flat_map(|w| (0..n).map(move |k| w.iter().zip(g).map(|(a, b)| (a + k * b) % n).collect::<Vec<_>>()))
                    .collect();
            }
            spanned != brute
        })
        .count()
}

fn criterion_7() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    // (a) frame independence
    let m1 = member("M", 1);
    let n1 = member("N", 1);
    let tm = lambda0(&comb_from_arrangement(&m1));
    let tn = non_integral_generator(&comb_from_arrangement(&n1), 7);
    let seeds = [0u64, 1, 2];
    let vm: BTreeSet<u64> = seeds.iter().map(|&s| lln(&m1, &tm, &cov(s))).collect::<Result<_>>()?;
    let vn: BTreeSet<u64> = seeds.iter().map(|&s| lln(&n1, &tn, &cov(s))).collect::<Result<_>>()?;
    let frames_ok = vm.len() == 1 && vn.len() == 1;
    // (b) multiplicativity and (c) validity of the sum
    let mut mult_failures = 0;
    let mut invalid_sums = 0;
    for k in 0..20 {
        let u = random_union(&mut rng);
        let t1 = random_tensor(&u.a1, 3, &mut rng);
        let t2 = random_tensor(&u.a2, 3, &mut rng);
        if !tensor_validate(&comb_from_arrangement(&u.result), &tensor_oplus(&t1, &t2, &u)?).is_empty() {
            invalid_sums += 1;
        }
        if !multiplicativity_check(&u, &t1, &t2, k)?.equal {
            mult_failures += 1;
        }
    }
    // (d) kernels against enumeration
    let kernel_failures = kernels_match(&mut rng, 200);
    // (e) Galois equivariance
    let mut equivariance_failures = Vec::new();
    for (a, t, root) in [(&m1, &tm, 5u32), (&n1, &tn, 7)] {
        let base = lln(a, t, &cov(SEED))?;
        for k in 2..root {
            let conj = galois_conjugate(&cyclotomic_automorphism(a.field(), root, k)?, a)?;
            if lln(&conj, t, &cov(SEED))? != u64::from(k) * base % t.modulus() {
                equivariance_failures.push(format!("{} k={k}", a.name()));
            }
        }
    }
    let ok = frames_ok && mult_failures == 0 && invalid_sums == 0 && kernel_failures == 0 && equivariance_failures.is_empty();
    Ok(Outcome::new(
        ok,
        format!(
            "(a) seeds {seeds:?}: M1 {vm:?}, N1 {vn:?}; (b) multiplicativity failures {mult_failures}/20; (c) invalid sums {invalid_sums}/20; (d) kernel mismatches {kernel_failures}/200; (e) equivariance failures {equivariance_failures:?}"
        ),
    ))
}

fn criterion_8() -> Result<Outcome> {
    let names = dataset::appendix_family_names();
    let report = batch(&names, SEED)?;
    let last = report.families.last().map(|f| (f.family.clone(), f.rule));
    Ok(Outcome::new(
        report.failed.is_empty(),
        format!("{} of {} families pass; failed {:?}; last family {:?}", report.passed, names.len(), report.failed, last),
    ))
}

fn criterion_9() -> Result<Outcome> {
    let mut parts = Vec::new();
    let mut all_zero = true;
    for a in [member("M", 1), member("N", 1), maclane(Sign::Plus)?] {
        let p = probe_integral(&a, SEED)?;
        all_zero &= p.all_zero;
        parts.push(format!("{}: rank {} values {:?}", p.name, p.integral_rank, p.values));
    }
    let note = if all_zero { "all zero" } else { "NOTABLE: a nonzero value" };
    Ok(Outcome::new(all_zero, format!("{note}; {}", parts.join("; "))))
}

#[test]
fn acceptance() {
    type Check = fn() -> Result<Outcome>;
    let criteria: [(u32, Check, u64); 9] = [
        (1, criterion_1, 1),
        (2, criterion_2, 1),
        (3, criterion_3, 10),
        (4, criterion_4, 30),
        (5, criterion_5, 60),
        (6, criterion_6, 60),
        (7, criterion_7, 300),
        (8, criterion_8, 600),
        (9, criterion_9, 60),
    ];
    let mut failed = Vec::new();
    for (k, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check().unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")));
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(budget);
        let pass = outcome.ok && in_time;
        let label = match (k, pass) {
            (_, true) => "PASS",
            (9, false) => "FAIL (reported only)",
            (_, false) => "FAIL",
        };
        println!(
            "criterion {k}: {label} [{:.1} s of {budget} s] {}",
            elapsed.as_secs_f64(),
            outcome.detail
        );
        if k != 9 && !pass {
            failed.push(k);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
