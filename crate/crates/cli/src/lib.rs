//! Reports produced by the `arrlink` command line: invariants of one arrangement, pairwise
//! comparison, ordered unions, the Rybnikov construction, family checks and the integral probe.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use arrlink_core::arrangement::Arrangement;
use arrlink_core::braid::{WiringDiagram, WiringDoc};
use arrlink_core::combinatorics::{blowup_stable, comb_automorphisms, comb_from_arrangement, Combinatorics};
use arrlink_core::dataset::{self, arrangement_to_doc, member_name, ArrangementDoc, VerdictRule};
use arrlink_core::linking::{
    compare, linking_profile, pair_total_integral, ulk_edges, verdict, CompareReport, Method, Verdict,
};
use arrlink_core::perm::Perm;
use arrlink_core::tlg::{lifts_to_integral, non_integral_part, tlg_compute, tlg_integral, Tensor};
use arrlink_core::union::{
    maclane, maclane_lambda0, multiplicativity_check, ordered_union, rybnikov_like_check, rybnikov_pair,
    rybnikov_tensor, MultiplicativityReport, RybnikovLikeReport, Sign, MACLANE_MODULUS,
};
use arrlink_core::{is_prime, Error, Result};
use serde::Serialize;

/// Loads an arrangement from a JSON file, or from the committed dataset when no such file
/// exists.
pub fn load_arrangement(spec: &str) -> Result<Arrangement> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Schema(format!("{spec}: {e}")))?;
        return dataset::parse_arrangement(&text);
    }
    dataset::arrangement(spec)
}

/// Loads a wiring diagram from a JSON file or from the committed dataset.
pub fn load_wiring(spec: &str) -> Result<WiringDiagram> {
    let doc: WiringDoc = if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| Error::Schema(format!("{spec}: {e}")))?;
        serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{spec}: {e}")))?
    } else {
        dataset::wiring(spec).ok_or_else(|| Error::Schema(format!("unknown wiring diagram '{spec}'")))?
    };
    WiringDiagram::from_doc(&doc)
}

/// Family and index of a committed family member.
pub fn family_member(name: &str) -> Option<(&'static str, u32)> {
    dataset::family_names().into_iter().find_map(|fam| {
        let doc = dataset::family_doc(fam).ok()?;
        doc.members.iter().find(|&&i| member_name(fam, i) == name).map(|&i| (fam, i))
    })
}

fn one_based(c: &Combinatorics) -> Vec<Vec<usize>> {
    c.supports().iter().map(|s| s.iter().map(|x| x + 1).collect()).collect()
}

/// One expectation from the dataset and whether it held.
#[derive(Clone, Debug, Serialize)]
pub struct Expectation {
    pub what: String,
    pub expected: String,
    pub found: String,
    pub ok: bool,
}

impl Expectation {
    fn new(what: &str, expected: impl ToString, found: impl ToString) -> Self {
        let (expected, found) = (expected.to_string(), found.to_string());
        Expectation { what: what.into(), ok: expected == found, expected, found }
    }
}

/// Loop linking number of one tensor.
#[derive(Clone, Debug, Serialize)]
pub struct GeneratorReport {
    pub name: String,
    pub lln: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lln_wiring: Option<u64>,
    pub full_set: BTreeSet<u64>,
    /// Whether the tensor is the reduction of an integral one (prime moduli only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lifts_to_integral: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantsReport {
    pub name: String,
    pub lines: usize,
    /// Supports of the singular points of multiplicity at least 3 (1-based).
    pub multiple_points: Vec<Vec<usize>>,
    pub double_points: usize,
    pub aut_order: u128,
    pub aut_generators: Vec<String>,
    pub stable: bool,
    pub modulus: u64,
    pub tlg_dim: usize,
    pub tlg_orders: Vec<u64>,
    /// Dimension of the quotient by reductions of integral tensors (prime moduli only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub non_integral_dim: Option<usize>,
    pub method: String,
    pub seed: u64,
    pub generators: Vec<GeneratorReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<GeneratorReport>,
    pub expectations: Vec<Expectation>,
}

impl InvariantsReport {
    pub fn ok(&self) -> bool {
        self.expectations.iter().all(|e| e.ok)
    }
}

/// Method selection for [`invariants`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodChoice {
    Cov,
    Wiring,
}

/// Combinatorics, automorphisms, stability, tensor linking group and loop linking numbers of
/// an arrangement. When the arrangement is a committed family member its listed expectations
/// are checked.
pub fn invariants(
    a: &Arrangement,
    n: u64,
    wiring: Option<&WiringDiagram>,
    choice: MethodChoice,
    seed: u64,
) -> Result<InvariantsReport> {
    let c = comb_from_arrangement(a);
    let g = comb_automorphisms(&c);
    let tlg = tlg_compute(&c, n);
    let cov = Method::Cov { seed };
    let primary = match (choice, wiring) {
        (MethodChoice::Cov, _) => cov.clone(),
        (MethodChoice::Wiring, Some(w)) => Method::Wiring(w),
        (MethodChoice::Wiring, None) => return Err(Error::Schema("the wiring method needs a wiring diagram".into())),
    };
    let mut report = InvariantsReport {
        name: a.name().to_string(),
        lines: a.len(),
        multiple_points: one_based(&c).into_iter().filter(|s| s.len() >= 3).collect(),
        double_points: c.supports().iter().filter(|s| s.len() == 2).count(),
        aut_order: g.order(),
        aut_generators: g.generators().iter().map(Perm::to_cycles).collect(),
        stable: blowup_stable(&c).stable,
        modulus: n,
        tlg_dim: tlg.dimension(),
        tlg_orders: tlg.orders.clone(),
        non_integral_dim: None,
        method: match primary {
            Method::Cov { .. } => "cov".into(),
            Method::Wiring(_) => "wiring".into(),
        },
        seed,
        generators: Vec::new(),
        reference: None,
        expectations: Vec::new(),
    };
    let reference = dataset::reference_tensor(&c, n);
    let integral = is_prime(n).then(|| tlg_integral(&c));
    report.non_integral_dim = integral.as_ref().map(|i| non_integral_part(&c, &tlg, i).len());
    if tlg.dimension() > 0 {
        let elements = g.elements();
        let ulk = ulk_edges(a, &primary)?;
        let ulk_wiring = match wiring {
            Some(w) => Some(ulk_edges(a, &Method::Wiring(w))?),
            None => None,
        };
        let describe = |name: String, t: &Tensor| -> Result<GeneratorReport> {
            let p = linking_profile(&c, std::slice::from_ref(t), &ulk, &elements)?;
            let lln_wiring = match &ulk_wiring {
                Some(u) => Some(linking_profile(&c, std::slice::from_ref(t), u, &[])?.values[0]),
                None => None,
            };
            Ok(GeneratorReport {
                name,
                lln: p.values[0],
                lln_wiring,
                full_set: p.full_sets[0].clone(),
                lifts_to_integral: integral.as_ref().map(|i| lifts_to_integral(&c, i, t)),
            })
        };
        for (k, t) in tlg.basis.iter().enumerate() {
            report.generators.push(describe(format!("g{}", k + 1), t)?);
        }
        if let Some((name, t)) = &reference {
            report.reference = Some(describe(name.clone(), t)?);
        }
    }
    for gen in report.generators.iter().chain(&report.reference) {
        if let Some(w) = gen.lln_wiring {
            report.expectations.push(Expectation::new(&format!("{} by both methods", gen.name), gen.lln, w));
        }
    }
    if let Some((fam, i)) = family_member(a.name()) {
        let doc = dataset::family_doc(fam)?;
        if doc.modulus == n {
            let dim = report.non_integral_dim.unwrap_or(report.tlg_dim);
            report.expectations.push(Expectation::new("non-integral tlg dimension", doc.tlg_dim, dim));
            let expected = dataset::family(fam)?.expected_aut(a.len())?;
            report.expectations.push(Expectation::new("aut order", doc.aut_order, g.order()));
            report.expectations.push(Expectation::new("aut group matches", true, expected.same_group(&g)));
            let main = report
                .reference
                .as_ref()
                .or_else(|| report.generators.iter().find(|g| g.lifts_to_integral != Some(true)));
            if let (Some(gen), true) = (main, doc.lln_nonzero) {
                report.expectations.push(Expectation::new("lln nonzero", true, gen.lln != 0));
            }
            if let (Some(gen), Some(v)) = (&report.reference, doc.lln.get(&i)) {
                report.expectations.push(Expectation::new("lln", v, gen.lln));
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedCompareReport {
    pub first: String,
    pub second: String,
    #[serde(flatten)]
    pub report: CompareReport,
}

pub fn compare_report(a1: &Arrangement, a2: &Arrangement, n: u64, seed: u64) -> Result<NamedCompareReport> {
    Ok(NamedCompareReport { first: a1.name().into(), second: a2.name().into(), report: compare(a1, a2, n, seed)? })
}

#[derive(Clone, Debug, Serialize)]
pub struct UnionReport {
    pub r: usize,
    pub lines: usize,
    pub arrangement: ArrangementDoc,
    /// Multiplicativity for every pair of generators of the two factors.
    pub multiplicativity: Vec<MultiplicativityReport>,
}

impl UnionReport {
    pub fn ok(&self) -> bool {
        self.multiplicativity.iter().all(|m| m.equal)
    }
}

/// The ordered union and, when a modulus is given, multiplicativity for the generators of
/// both factors.
pub fn union_report(a1: &Arrangement, a2: &Arrangement, r: Option<usize>, n: Option<u64>, seed: u64) -> Result<UnionReport> {
    let u = ordered_union(a1, a2, r)?;
    let mut multiplicativity = Vec::new();
    if let Some(n) = n {
        let b1 = tlg_compute(&comb_from_arrangement(a1), n).basis;
        let b2 = tlg_compute(&comb_from_arrangement(a2), n).basis;
        for t1 in &b1 {
            for t2 in &b2 {
                multiplicativity.push(multiplicativity_check(&u, t1, t2, seed)?);
            }
        }
    }
    Ok(UnionReport { r: u.r, lines: u.result.len(), arrangement: arrangement_to_doc(&u.result), multiplicativity })
}

/// MacLane and Rybnikov facts.
#[derive(Clone, Debug, Serialize)]
pub struct RybnikovReport {
    /// Dimension of the tensor linking group of the MacLane combinatorics modulo 3.
    pub maclane_tlg_dim: usize,
    /// Rank of its integral group.
    pub maclane_integral_rank: usize,
    /// Dimension of the quotient by reductions of integral tensors.
    pub maclane_non_integral_dim: usize,
    pub lln_maclane_plus: u64,
    pub lln_maclane_minus: u64,
    pub attempt: usize,
    pub r: usize,
    pub lines: usize,
    pub aut_order_plus: u128,
    pub aut_order_minus: u128,
    pub combinatorics_isomorphic: bool,
    pub multiplicativity_plus: MultiplicativityReport,
    pub multiplicativity_minus: MultiplicativityReport,
    pub full_set_plus: BTreeSet<u64>,
    pub full_set_minus: BTreeSet<u64>,
    pub compare_verdict: Verdict,
    pub rybnikov_like: RybnikovLikeReport,
    pub plus: ArrangementDoc,
    pub minus: ArrangementDoc,
}

pub fn rybnikov_report(seed: u64) -> Result<RybnikovReport> {
    let plus = maclane(Sign::Plus)?;
    let minus = maclane(Sign::Minus)?;
    let c = comb_from_arrangement(&plus);
    let l0 = maclane_lambda0()?;
    let cov = Method::Cov { seed };
    let tlg = tlg_compute(&c, MACLANE_MODULUS);
    let integral = tlg_integral(&c);
    let lm = Tensor::from_doc(&comb_from_arrangement(&minus), &l0.to_doc())?;
    let pair = rybnikov_pair(seed)?;
    let mult = |u| -> Result<MultiplicativityReport> {
        let second = Tensor::from_doc(&comb_from_arrangement(&pair.get(u).a2), &l0.to_doc())?;
        multiplicativity_check(pair.get(u), &l0, &second, seed)
    };
    let full = |u| -> Result<BTreeSet<u64>> {
        let r = &pair.get(u).result;
        arrlink_core::linking::full_lln(r, &rybnikov_tensor(pair.get(u))?, &cov)
    };
    let cmp = compare(&pair.plus.result, &pair.minus.result, MACLANE_MODULUS, seed)?;
    Ok(RybnikovReport {
        maclane_tlg_dim: tlg.dimension(),
        maclane_integral_rank: integral.rank,
        maclane_non_integral_dim: non_integral_part(&c, &tlg, &integral).len(),
        lln_maclane_plus: arrlink_core::linking::lln(&plus, &l0, &cov)?,
        lln_maclane_minus: arrlink_core::linking::lln(&minus, &lm, &cov)?,
        attempt: pair.attempt,
        r: pair.plus.r,
        lines: pair.plus.result.len(),
        aut_order_plus: cmp.aut_order_1,
        aut_order_minus: cmp.aut_order_2,
        combinatorics_isomorphic: cmp.combinatorics_isomorphic,
        multiplicativity_plus: mult(Sign::Plus)?,
        multiplicativity_minus: mult(Sign::Minus)?,
        full_set_plus: full(Sign::Plus)?,
        full_set_minus: full(Sign::Minus)?,
        compare_verdict: cmp.verdict,
        rybnikov_like: rybnikov_like_check(&plus, &l0, &pair.psi_plus, &pair.psi_minus, seed)?,
        plus: arrangement_to_doc(&pair.plus.result),
        minus: arrangement_to_doc(&pair.minus.result),
    })
}

/// Verdict for one pair of family members.
#[derive(Clone, Debug, Serialize)]
pub struct PairVerdict {
    pub i: u32,
    pub j: u32,
    pub verdict: Verdict,
    pub expected: Verdict,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub family: String,
    pub description: String,
    pub lines: usize,
    pub modulus: u64,
    pub tlg_dim: usize,
    pub non_integral_dim: usize,
    pub aut_order: u128,
    pub aut_matches: bool,
    pub stable: bool,
    /// `lambda0` when the committed generator applies, `g1` for a computed tensor that does not
    /// lift to an integral one.
    pub generator: String,
    pub lln: BTreeMap<u32, u64>,
    pub full_sets: BTreeMap<u32, BTreeSet<u64>>,
    /// `L(σ_i·A_1) = i·L(A_1)` for every member.
    pub galois_equivariant: bool,
    pub rule: VerdictRule,
    pub pairs: Vec<PairVerdict>,
    pub expectations: Vec<Expectation>,
    pub ok: bool,
}

/// Expected verdict for members `i ≠ j` of a family over the `root`-th cyclotomic field.
pub fn expected_verdict(rule: VerdictRule, root: u32, i: u32, j: u32) -> Verdict {
    match rule {
        VerdictRule::Pairs if !(i + j).is_multiple_of(root) => Verdict::NonHomeomorphicComplements,
        _ => Verdict::OrderedOrientedDistinct,
    }
}

/// Checks a committed family: tensor linking group, automorphisms, loop linking numbers of
/// all members, Galois equivariance and the verdict of every pair of members.
pub fn check_family(name: &str, seed: u64) -> Result<FamilyReport> {
    let fam = dataset::family(name)?;
    let doc = &fam.doc;
    let c = fam.combinatorics()?;
    let g = comb_automorphisms(&c);
    let expected_aut = fam.expected_aut(c.n())?;
    let stable = blowup_stable(&c).stable;
    let tlg = tlg_compute(&c, doc.modulus);
    let non_integral = non_integral_part(&c, &tlg, &tlg_integral(&c));
    let mut expectations = vec![
        Expectation::new("non-integral tlg dimension", doc.tlg_dim, non_integral.len()),
        Expectation::new("aut order", doc.aut_order, g.order()),
        Expectation::new("aut group matches", true, expected_aut.same_group(&g)),
    ];
    for (i, a) in &fam.members {
        expectations.push(Expectation::new(&format!("{} combinatorics", fam.member_name(*i)), true, comb_from_arrangement(a) == c));
    }
    let (generator, tensor) = match (dataset::reference_tensor(&c, doc.modulus), non_integral.first()) {
        (Some((name, t)), _) => (name, Some(t)),
        (None, Some(t)) => ("g1".to_string(), Some(t.clone())),
        (None, None) => ("none".to_string(), None),
    };
    let mut lln = BTreeMap::new();
    let mut full_sets = BTreeMap::new();
    let mut profiles = BTreeMap::new();
    if let Some(t) = &tensor {
        let elements = g.elements();
        for (i, a) in fam.members.iter().filter(|(_, a)| comb_from_arrangement(a) == c) {
            let p = linking_profile(&c, std::slice::from_ref(t), &ulk_edges(a, &Method::Cov { seed })?, &elements)?;
            lln.insert(*i, p.values[0]);
            full_sets.insert(*i, p.full_sets[0].clone());
            profiles.insert(*i, p);
        }
    }
    let n = doc.modulus;
    let root = doc.root_of_unity;
    let first = lln.get(&1).copied().unwrap_or(0);
    let galois_equivariant = lln.iter().all(|(&i, &v)| v == (u64::from(i) * first) % n);
    expectations.push(Expectation::new("galois equivariance", true, galois_equivariant));
    if doc.lln_nonzero {
        expectations.push(Expectation::new("lln nonzero for every member", true, lln.values().all(|&v| v != 0)));
    }
    for (i, v) in &doc.lln {
        if generator == "lambda0" {
            expectations.push(Expectation::new(&format!("lln of {}", fam.member_name(*i)), v, lln.get(i).copied().unwrap_or(0)));
        }
    }
    let mut pairs = Vec::new();
    for (&i, pi) in &profiles {
        for (&j, pj) in profiles.range(i + 1..) {
            let v = verdict(pi, pj, g.is_trivial(), stable);
            let expected = expected_verdict(doc.verdict_rule, root, i, j);
            pairs.push(PairVerdict { i, j, verdict: v, expected, ok: v == expected });
        }
    }
    let ok = expectations.iter().all(|e| e.ok) && pairs.iter().all(|p| p.ok);
    Ok(FamilyReport {
        family: doc.name.clone(),
        description: doc.description.clone(),
        lines: c.n(),
        modulus: n,
        tlg_dim: tlg.dimension(),
        non_integral_dim: non_integral.len(),
        aut_order: g.order(),
        aut_matches: expected_aut.same_group(&g),
        stable,
        generator,
        lln,
        full_sets,
        galois_equivariant,
        rule: doc.verdict_rule,
        pairs,
        expectations,
        ok,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BatchReport {
    pub families: Vec<FamilyReport>,
    pub passed: usize,
    pub failed: Vec<String>,
}

pub fn batch(names: &[&str], seed: u64) -> Result<BatchReport> {
    let families = names.iter().map(|n| check_family(n, seed)).collect::<Result<Vec<_>>>()?;
    let failed: Vec<String> = families.iter().filter(|f| !f.ok).map(|f| f.family.clone()).collect();
    Ok(BatchReport { passed: families.len() - failed.len(), failed, families })
}

/// Loop linking numbers of the integral tensors of an arrangement.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeReport {
    pub name: String,
    pub integral_rank: usize,
    /// Invariant factors above 1 of the constraint system.
    pub torsion: Vec<String>,
    /// Loop linking number over the integers of each basis tensor.
    pub values: Vec<String>,
    pub all_zero: bool,
}

pub fn probe_integral(a: &Arrangement, seed: u64) -> Result<ProbeReport> {
    let c = comb_from_arrangement(a);
    let integral = tlg_integral(&c);
    let values = if integral.rank == 0 {
        Vec::new()
    } else {
        let ulk = ulk_edges(a, &Method::Cov { seed })?;
        integral.basis.iter().map(|t| pair_total_integral(t, &ulk)).collect()
    };
    let torsion = integral
        .invariant_factors
        .iter()
        .flatten()
        .filter(|&&d| d > 1)
        .map(|d| d.to_string())
        .collect();
    Ok(ProbeReport {
        name: a.name().into(),
        integral_rank: integral.rank,
        torsion,
        all_zero: values.iter().all(|v| v == &0.into()),
        values: values.iter().map(|v| v.to_string()).collect(),
    })
}
