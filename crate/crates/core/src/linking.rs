//! Upper-linking numbers by a linear change of variables, the loop linking number, its values
//! along the automorphism orbit, the full loop linking number, and pairwise comparison.
//!
//! Frame. A projection center `P0` off every line, a line `F0` through `P0`, and a line `F∞`
//! through `P0` are fixed once per arrangement. In coordinates where `P0 = [0:1:0]`,
//! `F0 = {x = 0}` and `F∞ = {z = 0}`, the lines through `P0` are parametrized by `X = x/z` and
//! each line `L` of the arrangement is the graph `y/z = s_L X + i_L`. For an edge `P → L` the
//! path is the segment `X = t·X_P`, `t ∈ [0, 1]`, and the fiber coordinate is measured
//! relative to `L`, so that `L` becomes `y = 0` exactly as after the change of variables
//! sending `F0`, `F_P`, `L` to `x = 0`, `x = z`, `y = 0`. A line `L'` then traces the segment
//! from `q = i_{L'} - i_L` (at `t = 0`) to `p = (s_{L'} - s_L) X_P + q` (at `t = 1`).
//!
//! The frame is certified when no singular point other than `P` lies over the segment of any
//! edge, which reduces to `X_Q / X_P ∉ [0, 1]` for all pairs of singular points, and no strand
//! has the real part of `L` at either end of a segment.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrangement::{apply_covector, Arrangement, Mat3, ProjPoint};
use crate::braid::{ulk_all, MeridianSum, WiringDiagram, POSITIVE_OVER};
use crate::combinatorics::{blowup_stable, comb_automorphisms, comb_from_arrangement, comb_isomorphism, edges_of, Combinatorics};
use crate::error::{Error, Result};
use crate::numberfield::{FieldElement, NumberField, Part};
use crate::perm::{Perm, PermGroup};
use crate::tlg::{tensor_validate, tlg_compute, IntegralTensor, Tensor};

/// Attempts made by [`choose_frame`] before giving up.
pub const FRAME_ATTEMPTS: usize = 256;

/// Default seed for frame selection.
pub const DEFAULT_SEED: u64 = 0;

/// A certified projection frame with the per-line and per-point data it induces.
#[derive(Clone, Debug)]
pub struct ProjectionFrame {
    /// Columns: a point of `F∞`, the center `P0`, a point of `F0`.
    pub matrix: Mat3,
    /// Slope and intercept of every line.
    pub slopes: Vec<FieldElement>,
    pub intercepts: Vec<FieldElement>,
    /// Pencil parameter of every singular point (in singular-point order).
    pub params: Vec<FieldElement>,
    /// Seed and attempt that produced the frame.
    pub seed: u64,
    pub attempt: usize,
}

impl ProjectionFrame {
    pub fn center(&self) -> [FieldElement; 3] {
        let m = &self.matrix.0;
        [m[0][1].clone(), m[1][1].clone(), m[2][1].clone()]
    }
}

fn random_element<R: Rng>(field: &NumberField, rng: &mut R) -> FieldElement {
    let coeffs = (0..field.degree())
        .map(|_| num_rational::BigRational::from_integer(BigInt::from(rng.gen_range(-4i64..=4))))
        .collect();
    field.element(coeffs)
}

/// Tries one candidate frame; `None` when a genericity condition fails.
fn try_frame(a: &Arrangement, points: &[ProjPoint], matrix: Mat3) -> Option<(Vec<FieldElement>, Vec<FieldElement>, Vec<FieldElement>)> {
    let inv = matrix.inverse().ok()?;
    let mut slopes = Vec::with_capacity(a.len());
    let mut intercepts = Vec::with_capacity(a.len());
    for l in a.lines() {
        let img = apply_covector(&matrix, l).ok()?;
        let [x, y, z] = img.covector();
        if y.is_zero() {
            return None;
        }
        let binv = y.inv().ok()?;
        slopes.push(-(x * &binv));
        intercepts.push(-(z * &binv));
    }
    let mut params = Vec::with_capacity(points.len());
    for p in points {
        let w = inv.apply_point(p).ok()?;
        let [x, _, z] = w.coords();
        if z.is_zero() || x.is_zero() {
            return None;
        }
        params.push(x.checked_div(z).ok()?);
    }
    // no singular point over the segment [0, X_P] other than P itself
    for (i, xp) in params.iter().enumerate() {
        let conj_p = xp.conj();
        let norm_p = xp * &conj_p;
        for (j, xq) in params.iter().enumerate() {
            if i == j {
                continue;
            }
            // X_Q / X_P ∈ [0, 1] ⇔ X_Q·conj(X_P) ∈ [0, |X_P|²]
            let r = xq * &conj_p;
            if r.sign(Part::Imag) == 0 && r.sign(Part::Real) >= 0 && (&norm_p - &r).sign(Part::Real) >= 0 {
                return None;
            }
        }
    }
    Some((slopes, intercepts, params))
}

/// Chooses a certified frame from random candidates with small integer coefficients in the
/// power basis. Deterministic given the seed.
pub fn choose_frame(a: &Arrangement, seed: u64) -> Result<ProjectionFrame> {
    let field = a.field();
    if field.degree() == 1 {
        // a certified frame needs non-real centers; over Q every candidate is real
        return Err(Error::FrameSearchExhausted(0));
    }
    let points: Vec<ProjPoint> = a.singular_points().into_iter().map(|p| p.point).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..FRAME_ATTEMPTS {
        let cols: [[FieldElement; 3]; 3] =
            std::array::from_fn(|_| std::array::from_fn(|_| random_element(field, &mut rng)));
        let matrix = Mat3(std::array::from_fn(|i| std::array::from_fn(|j| cols[j][i].clone())));
        if let Some((slopes, intercepts, params)) = try_frame(a, &points, matrix.clone()) {
            let frame = ProjectionFrame { matrix, slopes, intercepts, params, seed, attempt };
            if segments_nondegenerate(a, &frame) {
                return Ok(frame);
            }
        }
    }
    Err(Error::FrameSearchExhausted(FRAME_ATTEMPTS))
}

fn segments_nondegenerate(a: &Arrangement, frame: &ProjectionFrame) -> bool {
    let c = comb_from_arrangement(a);
    edges_of(&c).iter().all(|e| {
        let support = &c.supports()[e.point];
        (0..a.len())
            .filter(|l| !support.contains(l))
            .all(|l2| !matches!(phi(frame, e.point, e.line, l2, PhiRule::PINNED), Err(Error::DegenerateSegment)))
    })
}

/// Formula for the real crossing parameter of a segment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CrossingFormula {
    /// `t = q₁ / (q₁ - p₁)`, the root of `q₁(1 - t) + p₁ t = 0`.
    Interpolation,
    /// `t = q₁ / (p₁ + q₁)`.
    SumDenominator,
}

/// Side of the fiber on which a crossing strand counts as passing over `L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OverSide {
    PositiveImaginary,
    NegativeImaginary,
}

/// The convention used by [`phi`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PhiRule {
    pub crossing: CrossingFormula,
    pub over: OverSide,
}

impl PhiRule {
    /// Convention agreeing with the wiring-diagram method and the tabulated values.
    pub const PINNED: PhiRule = PhiRule { crossing: CrossingFormula::Interpolation, over: OverSide::PositiveImaginary };

    pub const ALL: [PhiRule; 4] = [
        PhiRule { crossing: CrossingFormula::Interpolation, over: OverSide::PositiveImaginary },
        PhiRule { crossing: CrossingFormula::Interpolation, over: OverSide::NegativeImaginary },
        PhiRule { crossing: CrossingFormula::SumDenominator, over: OverSide::PositiveImaginary },
        PhiRule { crossing: CrossingFormula::SumDenominator, over: OverSide::NegativeImaginary },
    ];
}

/// Endpoints `(q, p)` of the segment traced by line `l2` over the path of point `point`,
/// relative to line `l`.
fn endpoints(frame: &ProjectionFrame, point: usize, l: usize, l2: usize) -> (FieldElement, FieldElement) {
    let q = &frame.intercepts[l2] - &frame.intercepts[l];
    let p = &(&(&frame.slopes[l2] - &frame.slopes[l]) * &frame.params[point]) + &q;
    (q, p)
}

/// `Φ_{P→L}(L')` for the singular point with index `point`, the line `l` through it, and a line
/// `l2` not through it.
pub fn phi(frame: &ProjectionFrame, point: usize, l: usize, l2: usize, rule: PhiRule) -> Result<i8> {
    let (q, p) = endpoints(frame, point, l, l2);
    let q1 = q.sign(Part::Real);
    let p1 = p.sign(Part::Real);
    // a strand level with `L` in the real projection at either end of the path
    if q1 == 0 || p1 == 0 {
        return Err(Error::DegenerateSegment);
    }
    // the crossing parameter lies strictly inside (0, 1) and the imaginary part there has the
    // sign of `im_num` times the sign of the denominator
    let (interior, im_num, denom_sign) = match rule.crossing {
        CrossingFormula::Interpolation => {
            // Im at t = q₁/(q₁ - p₁) is (q₁p₂ - q₂p₁)/(q₁ - p₁)
            (q1 * p1 < 0, (&p * &q.conj()).sign(Part::Imag), q1)
        }
        CrossingFormula::SumDenominator => {
            // Im at t = q₁/(p₁ + q₁) is (q₁p₂ + q₂p₁)/(p₁ + q₁)
            (q1 * p1 > 0, (&p * &q).sign(Part::Imag), q1)
        }
    };
    if !interior {
        return Ok(0);
    }
    let im = im_num * denom_sign;
    let side = match rule.over {
        OverSide::PositiveImaginary => im,
        OverSide::NegativeImaginary => -im,
    };
    Ok(match side {
        0 if q1 > 0 => 1,
        s if s > 0 => q1,
        _ => 0,
    })
}

/// `ulk_L(B_{P→L}) = Σ_{L' ∉ A_P} Φ_{P→L}(L') m_{L'}` for the singular point with index `point`.
pub fn ulk_cov(c: &Combinatorics, frame: &ProjectionFrame, point: usize, l: usize, rule: PhiRule) -> Result<MeridianSum> {
    let support = &c.supports()[point];
    let mut sum = MeridianSum::zero(c.n());
    for l2 in (0..c.n()).filter(|x| !support.contains(x)) {
        sum.0[l2] = phi(frame, point, l, l2, rule)? as i64;
    }
    Ok(sum)
}

/// Method for upper-linking numbers.
#[derive(Clone, Debug)]
pub enum Method<'a> {
    /// Change of variables with a frame chosen from this seed.
    Cov { seed: u64 },
    /// Braided wiring diagram.
    Wiring(&'a WiringDiagram),
}

/// Upper-linking numbers of all edges, in edge order.
pub fn ulk_edges(a: &Arrangement, method: &Method<'_>) -> Result<Vec<MeridianSum>> {
    let c = comb_from_arrangement(a);
    match method {
        Method::Cov { seed } => {
            let frame = choose_frame(a, *seed)?;
            edges_of(&c).iter().map(|e| ulk_cov(&c, &frame, e.point, e.line, PhiRule::PINNED)).collect()
        }
        Method::Wiring(w) => ulk_all(w, &c, POSITIVE_OVER),
    }
}

/// `Σ_{P→L} λ_{P→L}(ulk_L(B_{P→L}))` modulo the tensor's modulus.
pub fn pair_total(t: &Tensor, ulk: &[MeridianSum]) -> u64 {
    let n = t.modulus();
    ulk.iter().enumerate().map(|(e, u)| u.pair(t.character(e), n)).fold(0, |acc, v| (acc + v) % n)
}

/// Integral pairing of an integral tensor with upper-linking numbers.
pub fn pair_total_integral(t: &IntegralTensor, ulk: &[MeridianSum]) -> BigInt {
    ulk.iter()
        .zip(&t.values)
        .map(|(u, ch)| u.0.iter().zip(ch).map(|(&c, v)| BigInt::from(c) * v).sum::<BigInt>())
        .sum()
}

/// Loop linking number `L(A, Λ)`.
pub fn lln(a: &Arrangement, t: &Tensor, method: &Method<'_>) -> Result<u64> {
    let c = comb_from_arrangement(a);
    if t.combinatorics() != &c {
        return Err(Error::InvalidTensor("tensor is indexed by other combinatorics".into()));
    }
    if let Some(v) = tensor_validate(&c, t).first() {
        return Err(Error::InvalidTensor(format!("{:?} violated at {}", v.label.kind, v.location)));
    }
    if t.is_zero() {
        return Ok(0);
    }
    Ok(pair_total(t, &ulk_edges(a, method)?))
}

/// Upper-linking numbers of `σ·A` obtained by relabeling those of `A`: the edge `S → l` of
/// `σ·A` is the edge `σ(S) → σ(l)` of `A`, and its meridian `m_j` is `m_{σ(j)}`.
pub fn relabel_ulk(c: &Combinatorics, ulk: &[MeridianSum], sigma: &Perm) -> Result<Vec<MeridianSum>> {
    if !c.is_automorphism(sigma) {
        return Err(Error::NotAnAutomorphism);
    }
    let edges = edges_of(c);
    let index = |point: usize, line: usize| edges.iter().position(|e| e.point == point && e.line == line);
    edges
        .iter()
        .map(|e| {
            let image: Vec<usize> = {
                let mut s: Vec<usize> = c.supports()[e.point].iter().map(|&x| sigma.image(x)).collect();
                s.sort_unstable();
                s
            };
            let p = c.supports().iter().position(|s| *s == image).expect("automorphism maps supports");
            let k = index(p, sigma.image(e.line)).expect("automorphism maps edges");
            Ok(MeridianSum((0..c.n()).map(|j| ulk[k].0[sigma.image(j)]).collect()))
        })
        .collect()
}

/// Values `L(σ·A, Λ)` for every `σ` in `g`, in the group's enumeration order (identity first).
pub fn lln_orbit(a: &Arrangement, t: &Tensor, g: &PermGroup, method: &Method<'_>) -> Result<Vec<(Perm, u64)>> {
    let c = comb_from_arrangement(a);
    if g.generators().iter().any(|s| !c.is_automorphism(s)) {
        return Err(Error::NotAnAutomorphism);
    }
    if t.is_zero() {
        return Ok(g.elements().into_iter().map(|s| (s, 0)).collect());
    }
    let ulk = ulk_edges(a, method)?;
    g.elements()
        .into_iter()
        .map(|s| {
            let u = relabel_ulk(&c, &ulk, &s)?;
            Ok((s, pair_total(t, &u)))
        })
        .collect()
}

/// Full loop linking number: orbit values under `Aut(comb(A))` closed under negation.
pub fn full_lln(a: &Arrangement, t: &Tensor, method: &Method<'_>) -> Result<BTreeSet<u64>> {
    let g = comb_automorphisms(&comb_from_arrangement(a));
    full_from_orbit(&lln_orbit(a, t, &g, method)?, t.modulus())
}

fn full_from_orbit(orbit: &[(Perm, u64)], n: u64) -> Result<BTreeSet<u64>> {
    Ok(orbit.iter().flat_map(|(_, v)| [*v, (n - v) % n]).collect())
}

/// Strongest conclusion drawn by [`compare`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    /// The complements are not homeomorphic.
    #[serde(rename = "non-homeomorphic complements")]
    NonHomeomorphicComplements,
    /// No homeomorphism of the ordered, oriented arrangements exists.
    #[serde(rename = "ordered-oriented distinct")]
    OrderedOrientedDistinct,
    #[serde(rename = "inconclusive")]
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::NonHomeomorphicComplements => "non-homeomorphic complements",
            Verdict::OrderedOrientedDistinct => "ordered-oriented distinct",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// Comparison report of two arrangements.
#[derive(Clone, Debug, Serialize)]
pub struct CompareReport {
    pub combinatorics_isomorphic: bool,
    /// Isomorphism used to align the second arrangement (1-based cycles), when one exists.
    pub isomorphism: Option<String>,
    pub aut_order_1: u128,
    pub aut_order_2: u128,
    pub stable_1: bool,
    pub stable_2: bool,
    pub modulus: u64,
    pub tlg_dim: usize,
    /// Loop linking number per generator.
    pub values_1: Vec<u64>,
    pub values_2: Vec<u64>,
    /// Full loop linking number per generator.
    pub full_set_1: Vec<BTreeSet<u64>>,
    pub full_set_2: Vec<BTreeSet<u64>>,
    pub verdict: Verdict,
}

/// Compares two arrangements through their loop linking numbers modulo `n` (prime).
///
/// The second arrangement is relabeled along a combinatorial isomorphism so both share the
/// generators of the tensor linking group. Distinct values for some generator separate the
/// ordered, oriented topologies. Complements are declared non-homeomorphic when, for some
/// generator, the full loop linking numbers differ and both arrangements are combinatorially
/// stable or have trivial automorphism group.
pub fn compare(a1: &Arrangement, a2: &Arrangement, n: u64, seed: u64) -> Result<CompareReport> {
    let c1 = comb_from_arrangement(a1);
    let c2 = comb_from_arrangement(a2);
    let g1 = comb_automorphisms(&c1);
    let g2 = comb_automorphisms(&c2);
    let stable_1 = blowup_stable(&c1).stable;
    let stable_2 = blowup_stable(&c2).stable;
    let iso = comb_isomorphism(&c1, &c2);
    let mut report = CompareReport {
        combinatorics_isomorphic: iso.is_some(),
        isomorphism: iso.as_ref().map(|p| p.to_cycles()),
        aut_order_1: g1.order(),
        aut_order_2: g2.order(),
        stable_1,
        stable_2,
        modulus: n,
        tlg_dim: 0,
        values_1: Vec::new(),
        values_2: Vec::new(),
        full_set_1: Vec::new(),
        full_set_2: Vec::new(),
        verdict: Verdict::Inconclusive,
    };
    let Some(phi) = iso else { return Ok(report) };
    let a2 = a2.permuted(&phi)?;
    let tlg = tlg_compute(&c1, n);
    report.tlg_dim = tlg.dimension();
    if tlg.dimension() == 0 {
        return Ok(report);
    }
    let method = Method::Cov { seed };
    let elements = g1.elements();
    let p1 = linking_profile(&c1, &tlg.basis, &ulk_edges(a1, &method)?, &elements)?;
    let p2 = linking_profile(&c1, &tlg.basis, &ulk_edges(&a2, &method)?, &elements)?;
    report.verdict = verdict(&p1, &p2, g1.is_trivial(), stable_1 && stable_2);
    report.values_1 = p1.values;
    report.values_2 = p2.values;
    report.full_set_1 = p1.full_sets;
    report.full_set_2 = p2.full_sets;
    Ok(report)
}

/// Loop linking numbers of one arrangement for a list of tensors, with their full sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinkingProfile {
    pub values: Vec<u64>,
    pub full_sets: Vec<BTreeSet<u64>>,
}

/// Profile of an arrangement with upper-linking numbers `ulk` on `c`, where `elements` lists
/// the automorphism group of `c`.
pub fn linking_profile(
    c: &Combinatorics,
    tensors: &[Tensor],
    ulk: &[MeridianSum],
    elements: &[Perm],
) -> Result<LinkingProfile> {
    let relabeled: Vec<Vec<MeridianSum>> = elements.iter().map(|s| relabel_ulk(c, ulk, s)).collect::<Result<_>>()?;
    let mut profile = LinkingProfile { values: Vec::new(), full_sets: Vec::new() };
    for t in tensors {
        let n = t.modulus();
        profile.values.push(pair_total(t, ulk));
        profile
            .full_sets
            .push(relabeled.iter().map(|u| pair_total(t, u)).flat_map(|v| [v, (n - v) % n]).collect());
    }
    Ok(profile)
}

/// Verdict for two aligned profiles on the same combinatorics.
pub fn verdict(p1: &LinkingProfile, p2: &LinkingProfile, trivial_aut: bool, both_stable: bool) -> Verdict {
    let full_differs = p1.full_sets.iter().zip(&p2.full_sets).any(|(x, y)| x != y);
    if full_differs && (trivial_aut || both_stable) {
        Verdict::NonHomeomorphicComplements
    } else if p1.values != p2.values {
        Verdict::OrderedOrientedDistinct
    } else {
        Verdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numberfield::NumberField;

    fn generic_lines() -> Arrangement {
        let f = NumberField::cyclotomic5();
        let e = |v: &[i64]| f.element_int(v);
        Arrangement::from_coeffs(
            "g",
            &f,
            vec![
                [e(&[1]), e(&[0]), e(&[0])],
                [e(&[0]), e(&[1]), e(&[0])],
                [e(&[0]), e(&[0]), e(&[1])],
            ],
        )
        .unwrap()
    }

    #[test]
    fn three_lines_ulk_supported_on_remaining_line() {
        let a = generic_lines();
        let c = comb_from_arrangement(&a);
        let frame = choose_frame(&a, 3).unwrap();
        for e in edges_of(&c) {
            let u = ulk_cov(&c, &frame, e.point, e.line, PhiRule::PINNED).unwrap();
            let other: Vec<usize> = (0..3).filter(|l| !c.supports()[e.point].contains(l)).collect();
            assert_eq!(other.len(), 1);
            assert!(u.0.iter().enumerate().all(|(j, &x)| x == 0 || j == other[0]));
        }
    }

    #[test]
    fn rational_field_has_no_frame() {
        let f = NumberField::rationals();
        let e = |v: i64| f.from_int(v);
        let a = Arrangement::from_coeffs(
            "q",
            &f,
            vec![[e(1), e(0), e(0)], [e(0), e(1), e(0)], [e(0), e(0), e(1)]],
        )
        .unwrap();
        assert!(matches!(choose_frame(&a, 0), Err(Error::FrameSearchExhausted(_))));
    }
}
