//! Exact arithmetic in a number field `Q(α)` with a designated complex embedding.
//!
//! Elements are rational coefficient vectors in the power basis `1, α, …, α^{d-1}`.
//! The field must be Galois over `Q`; its automorphisms (in particular complex
//! conjugation) are discovered numerically and verified exactly at creation. Signs of real
//! and imaginary parts are certified: exact zero tests go through conjugation and nonzero
//! signs are resolved by rational disk arithmetic around the designated root.

mod poly;
mod roots;
mod sign;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use poly::Q;
use sign::DiskLevel;

const MAX_DEGREE: usize = 16;
const MAX_DENOMINATOR: i64 = 1_000_000;

/// Which part of the embedded complex value a sign refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    Real,
    Imag,
}

/// Field description as stored in arrangement files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub min_poly: Vec<i64>,
    pub root_hint: RootHint,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootHint {
    pub re: String,
    pub im: String,
}

/// A Galois number field `Q(α)` with a designated complex root.
#[derive(Clone)]
pub struct NumberField(Arc<FieldData>);

struct FieldData {
    spec: FieldSpec,
    min_poly: Vec<BigInt>,
    min_poly_q: Vec<Q>,
    degree: usize,
    /// Numeric roots; index 0 is the designated root.
    roots: Vec<Complex64>,
    /// `automorphisms[k]` sends `α` to the root `roots[k]`; index 0 is the identity.
    automorphisms: Vec<AutData>,
    conjugation: usize,
    levels: Vec<DiskLevel>,
    isolation: sign::Isolation,
}

struct AutData {
    /// Column `k` holds the coefficients of `σ(α)^k`.
    matrix: Vec<Vec<Q>>,
}

/// An element of a number field.
#[derive(Clone)]
pub struct FieldElement {
    field: NumberField,
    coeffs: Vec<Q>,
}

/// A field automorphism, identified by the image of `α`.
#[derive(Clone)]
pub struct GaloisAutomorphism {
    field: NumberField,
    index: usize,
}

impl NumberField {
    /// Creates the field defined by the monic irreducible `min_poly` (low-to-high), with the
    /// designated root being the unique root within `10^-3` of `root_hint`.
    pub fn new(min_poly: &[i64], root_hint: (&str, &str)) -> Result<Self> {
        let spec = FieldSpec {
            min_poly: min_poly.to_vec(),
            root_hint: RootHint { re: root_hint.0.to_string(), im: root_hint.1.to_string() },
        };
        Self::from_spec(&spec)
    }

    /// The rational field `Q` presented as `Q(α)` with `α = 0`.
    pub fn rationals() -> Self {
        Self::new(&[0, 1], ("0", "0")).expect("Q is a valid field")
    }

    /// The cyclotomic field `Q(ζ_5)` with `ζ_5 = e^{2πi/5}`.
    pub fn cyclotomic5() -> Self {
        Self::new(&[1, 1, 1, 1, 1], ("0.309017", "0.951057")).expect("valid field")
    }

    /// The cyclotomic field `Q(ζ_7)` with `ζ_7 = e^{2πi/7}`.
    pub fn cyclotomic7() -> Self {
        Self::new(&[1, 1, 1, 1, 1, 1, 1], ("0.623490", "0.781831")).expect("valid field")
    }

    /// The Eisenstein field `Q(ω)` with `ω = e^{2πi/3}`.
    pub fn eisenstein() -> Self {
        Self::new(&[1, 1, 1], ("-0.5", "0.866025")).expect("valid field")
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        let min_poly: Vec<BigInt> = spec.min_poly.iter().map(|&c| BigInt::from(c)).collect();
        let degree = min_poly.len().saturating_sub(1);
        if degree == 0 {
            return Err(Error::InvalidMinPoly("degree must be at least 1".into()));
        }
        if degree > MAX_DEGREE {
            return Err(Error::InvalidMinPoly(format!("degree {degree} exceeds {MAX_DEGREE}")));
        }
        if !min_poly[degree].is_one() {
            return Err(Error::InvalidMinPoly("polynomial must be monic".into()));
        }
        let hint = parse_hint(&spec.root_hint)?;
        let mut roots = roots::complex_roots(&min_poly);
        let near: Vec<usize> =
            (0..roots.len()).filter(|&k| (roots[k] - hint).norm() < 1e-3).collect();
        if near.len() != 1 {
            return Err(Error::AmbiguousRootHint { found: near.len() });
        }
        roots.swap(0, near[0]);
        let min_poly_q: Vec<Q> = min_poly.iter().map(|c| Q::from_integer(c.clone())).collect();
        if let Some(factor) = find_factor(&min_poly_q, &roots) {
            return Err(Error::ReducibleMinPoly { factor });
        }
        let isolation = sign::Isolation::new(&min_poly_q, &roots)?;
        let mut data = FieldData {
            spec: spec.clone(),
            min_poly,
            min_poly_q,
            degree,
            roots,
            automorphisms: Vec::new(),
            conjugation: 0,
            levels: Vec::new(),
            isolation,
        };
        data.levels = sign::precompute_levels(&data.min_poly_q, &data.isolation);
        let mut field = NumberField(Arc::new(data));
        let images = discover_conjugates(&field)?;
        let conj_target = field.0.roots[0].conj();
        let conjugation = (0..degree)
            .min_by(|&a, &b| {
                (field.0.roots[a] - conj_target)
                    .norm()
                    .total_cmp(&(field.0.roots[b] - conj_target).norm())
            })
            .expect("nonempty root list");
        let automorphisms: Vec<AutData> =
            images.iter().map(|img| AutData { matrix: power_matrix(&field, img) }).collect();
        drop(images);
        {
            let data = Arc::get_mut(&mut field.0).expect("unique during construction");
            data.automorphisms = automorphisms;
            data.conjugation = conjugation;
        }
        let conj = field.conjugation();
        if conj.apply(&conj.apply(&field.alpha())?)? != field.alpha() {
            return Err(Error::NotGaloisExtension);
        }
        Ok(field)
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0.spec
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.0.min_poly
    }

    /// Numeric value of the designated root.
    pub fn designated_root(&self) -> Complex64 {
        self.0.roots[0]
    }

    /// Numeric values of all roots; index 0 is the designated root and index `k` is the
    /// image of `α` under `automorphisms()[k]`.
    pub fn roots(&self) -> &[Complex64] {
        &self.0.roots
    }

    pub fn zero(&self) -> FieldElement {
        self.element(Vec::new())
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        self.element(vec![poly::q_int(v)])
    }

    pub fn from_rational(&self, v: Q) -> FieldElement {
        self.element(vec![v])
    }

    /// The generator `α`.
    pub fn alpha(&self) -> FieldElement {
        if self.0.degree == 1 {
            let root = -Q::from_integer(self.0.min_poly[0].clone());
            return self.from_rational(root);
        }
        self.element(vec![Q::zero(), Q::one()])
    }

    /// Builds an element from power-basis coefficients, reducing modulo the minimal polynomial.
    pub fn element(&self, coeffs: Vec<Q>) -> FieldElement {
        FieldElement { field: self.clone(), coeffs: reduce(&self.0.min_poly_q, coeffs) }
    }

    /// Builds an element from integer power-basis coefficients.
    pub fn element_int(&self, coeffs: &[i64]) -> FieldElement {
        self.element(coeffs.iter().map(|&c| poly::q_int(c)).collect())
    }

    /// All `d` automorphisms; the identity comes first.
    pub fn automorphisms(&self) -> Vec<GaloisAutomorphism> {
        (0..self.0.degree).map(|index| GaloisAutomorphism { field: self.clone(), index }).collect()
    }

    pub fn identity(&self) -> GaloisAutomorphism {
        GaloisAutomorphism { field: self.clone(), index: 0 }
    }

    /// The automorphism realizing complex conjugation at the designated embedding.
    pub fn conjugation(&self) -> GaloisAutomorphism {
        GaloisAutomorphism { field: self.clone(), index: self.0.conjugation }
    }

    /// The automorphism `σ` with `σ(a) = b`, if one exists.
    pub fn automorphism_mapping(
        &self,
        a: &FieldElement,
        b: &FieldElement,
    ) -> Result<Option<GaloisAutomorphism>> {
        for sigma in self.automorphisms() {
            if &sigma.apply(a)? == b {
                return Ok(Some(sigma));
            }
        }
        Ok(None)
    }

    /// The roots of the rational polynomial `f` (low-to-high) that lie in this field.
    pub fn roots_in_field(&self, f: &[Q]) -> Vec<FieldElement> {
        find_roots_in_field(self, f)
    }

    /// The primitive `n`-th root of unity in this field closest to `e^{2πi/n}` at the
    /// designated embedding, if the field contains one.
    pub fn primitive_root_of_unity(&self, n: u32) -> Option<FieldElement> {
        let target = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / n as f64);
        let alpha = self.alpha();
        let primitive = |x: &FieldElement| x.pow(n) == self.one() && (1..n).all(|k| !n.is_multiple_of(k) || x.pow(k) != self.one());
        let found = if primitive(&alpha) {
            (1..n).filter(|&k| num_integer::gcd(k, n) == 1).map(|k| alpha.pow(k)).collect()
        } else {
            self.roots_in_field(&cyclotomic_poly(n))
        };
        found.into_iter().min_by(|a, b| {
            (a.to_complex() - target).norm().total_cmp(&(b.to_complex() - target).norm())
        })
    }

    fn same(&self, other: &NumberField) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self == other
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.min_poly == other.0.min_poly
                && (self.0.roots[0] - other.0.roots[0]).norm() < 1e-9)
    }
}

impl Eq for NumberField {}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NumberField(min_poly={:?}, root≈{})", self.0.spec.min_poly, self.0.roots[0])
    }
}

fn parse_hint(hint: &RootHint) -> Result<Complex64> {
    let re: f64 = hint.re.trim().parse().map_err(|_| Error::Schema(format!("bad re '{}'", hint.re)))?;
    let im: f64 = hint.im.trim().parse().map_err(|_| Error::Schema(format!("bad im '{}'", hint.im)))?;
    Ok(Complex64::new(re, im))
}

/// Reduces a coefficient vector modulo the monic polynomial `m` into a vector of length `deg m`.
fn reduce(m: &[Q], mut v: Vec<Q>) -> Vec<Q> {
    let d = m.len() - 1;
    while v.len() > d {
        let top = v.pop().expect("nonempty");
        if top.is_zero() {
            continue;
        }
        let shift = v.len() - d;
        for (i, mc) in m.iter().enumerate().take(d) {
            if !mc.is_zero() {
                v[shift + i] -= &top * mc;
            }
        }
    }
    v.resize(d, Q::zero());
    v
}

/// Searches for a monic integer factor of degree at most `d/2` among products of root
/// subsets, verifying every candidate by exact division.
fn find_factor(m: &[Q], roots: &[Complex64]) -> Option<Vec<i64>> {
    let d = roots.len();
    for size in 1..=d / 2 {
        let mut subset: Vec<usize> = (0..size).collect();
        loop {
            let mut prod = vec![Complex64::new(1.0, 0.0)];
            for &k in &subset {
                let mut next = vec![Complex64::new(0.0, 0.0); prod.len() + 1];
                for (i, c) in prod.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * roots[k];
                }
                prod = next;
            }
            let rounded: Option<Vec<i64>> = prod
                .iter()
                .map(|c| {
                    let r = c.re.round();
                    ((c.re - r).abs() < 1e-6 && c.im.abs() < 1e-6 && r.abs() < 1e15).then_some(r as i64)
                })
                .collect();
            if let Some(coeffs) = rounded {
                let f: Vec<Q> = coeffs.iter().map(|&c| poly::q_int(c)).collect();
                let (_, r) = poly::divrem(m, &f);
                if poly::degree(&r).is_none() {
                    return Some(coeffs);
                }
            }
            if !next_subset(&mut subset, d) {
                break;
            }
        }
    }
    None
}

fn next_subset(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for i in (0..k).rev() {
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Inverse of the Vandermonde matrix of the numeric roots, so that the power-basis
/// coefficients of an element are `V^{-1}` applied to its values under all embeddings.
fn vandermonde_solver(roots: &[Complex64]) -> impl Fn(&[Complex64]) -> Option<Vec<Complex64>> + '_ {
    let d = roots.len();
    let v: Vec<Vec<Complex64>> =
        roots.iter().map(|r| (0..d).map(|i| r.powu(i as u32)).collect()).collect();
    move |values: &[Complex64]| roots::solve_complex(&v, values)
}

/// Converts numeric coefficients into an exact element when they are all close to
/// rationals of bounded denominator.
fn recognize(field: &NumberField, coeffs: &[Complex64]) -> Option<FieldElement> {
    let mut exact = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        let tol = 1e-7 * c.re.abs().max(1.0);
        if c.im.abs() > tol {
            return None;
        }
        exact.push(poly::rationalize(c.re, MAX_DENOMINATOR, tol)?);
    }
    Some(field.element(exact))
}

/// Expresses every root of the minimal polynomial as a polynomial in `α`.
fn discover_conjugates(field: &NumberField) -> Result<Vec<FieldElement>> {
    let d = field.degree();
    let roots = &field.0.roots;
    let solve = vandermonde_solver(roots);
    let mut images = Vec::with_capacity(d);
    images.push(field.alpha());
    for j in 1..d {
        // σ_j(α) takes the value roots[π(k)] under the k-th embedding for some permutation π
        // with π(0) = j; search over π and verify each candidate exactly.
        let rest: Vec<usize> = (0..d).filter(|&k| k != j).collect();
        let mut found = None;
        for_each_permutation(&rest, &mut |perm| {
            let mut values = Vec::with_capacity(d);
            values.push(roots[j]);
            values.extend(perm.iter().map(|&k| roots[k]));
            let Some(coeffs) = solve(&values) else { return false };
            let Some(candidate) = recognize(field, &coeffs) else { return false };
            if eval_min_poly(field, &candidate).is_zero() {
                found = Some(candidate);
                return true;
            }
            false
        });
        match found {
            Some(img) => images.push(img),
            None => return Err(Error::NotGaloisExtension),
        }
    }
    Ok(images)
}

fn for_each_permutation(items: &[usize], visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn rec(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if k == items.len() {
            return visit(items);
        }
        for i in k..items.len() {
            items.swap(k, i);
            if rec(items, k + 1, visit) {
                return true;
            }
            items.swap(k, i);
        }
        false
    }
    let mut v = items.to_vec();
    rec(&mut v, 0, visit)
}

fn eval_min_poly(field: &NumberField, x: &FieldElement) -> FieldElement {
    let mut acc = field.zero();
    for c in field.0.min_poly_q.iter().rev() {
        acc = &(&acc * x) + &field.from_rational(c.clone());
    }
    acc
}

fn power_matrix(field: &NumberField, image: &FieldElement) -> Vec<Vec<Q>> {
    let d = field.degree();
    let mut cols = Vec::with_capacity(d);
    let mut p = field.one();
    for _ in 0..d {
        cols.push(p.coeffs.clone());
        p = &p * image;
    }
    cols
}

fn find_roots_in_field(field: &NumberField, f: &[Q]) -> Vec<FieldElement> {
    let mut f = f.to_vec();
    poly::trim(&mut f);
    let Some(m) = poly::degree(&f) else { return Vec::new() };
    if m == 0 {
        return Vec::new();
    }
    let lead = f[m].clone();
    let scaled: Vec<Q> = f.iter().map(|c| c / &lead).collect();
    let denom_lcm = scaled.iter().fold(BigInt::one(), |acc, c| num_integer::lcm(acc, c.denom().clone()));
    let int_poly: Vec<BigInt> =
        scaled.iter().map(|c| (c * Q::from_integer(denom_lcm.clone())).to_integer()).collect();
    let f_roots = roots::complex_roots(&int_poly);
    let d = field.degree();
    let roots = &field.0.roots;
    let solve = vandermonde_solver(roots);
    let mut found: Vec<FieldElement> = Vec::new();
    let total = (f_roots.len() as u64).checked_pow(d as u32).unwrap_or(u64::MAX);
    if total > 5_000_000 {
        return found;
    }
    let mut choice = vec![0usize; d];
    'outer: loop {
        let values: Vec<Complex64> = choice.iter().map(|&k| f_roots[k]).collect();
        if let Some(coeffs) = solve(&values) {
            if let Some(cand) = recognize(field, &coeffs) {
                let mut acc = field.zero();
                for c in f.iter().rev() {
                    acc = &(&acc * &cand) + &field.from_rational(c.clone());
                }
                if acc.is_zero() && !found.contains(&cand) {
                    found.push(cand);
                }
            }
        }
        for slot in choice.iter_mut() {
            *slot += 1;
            if *slot < f_roots.len() {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    let _ = roots;
    found
}

/// The `n`-th cyclotomic polynomial over `Q`.
pub fn cyclotomic_poly(n: u32) -> Vec<Q> {
    // x^n - 1 divided by Φ_k for every proper divisor k of n.
    let mut p = vec![Q::zero(); n as usize + 1];
    p[0] = -Q::one();
    p[n as usize] = Q::one();
    for k in 1..n {
        if n.is_multiple_of(k) {
            let (q, _) = poly::divrem(&p, &cyclotomic_poly(k));
            p = q;
        }
    }
    p
}

impl FieldElement {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    /// Power-basis coefficients (length `d`).
    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// True when the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s) = poly::gcd_ext(&self.coeffs, &self.field.0.min_poly_q);
        debug_assert_eq!(poly::degree(&g), Some(0));
        Ok(self.field.element(s))
    }

    pub fn checked_div(&self, other: &FieldElement) -> Result<FieldElement> {
        check_same(self, other)?;
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u32) -> FieldElement {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn scale(&self, q: &Q) -> FieldElement {
        FieldElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Certified sign of the real or imaginary part at the designated embedding.
    pub fn sign(&self, part: Part) -> i8 {
        sign::certified_sign(self, part)
    }

    /// Sign decided at a fixed working precision, or `None` when that precision does not
    /// separate the value from zero.
    pub fn sign_at_precision(&self, part: Part, bits: u32) -> Option<i8> {
        sign::sign_at_precision(self, part, bits)
    }

    /// Floating-point value at the designated embedding.
    pub fn to_complex(&self) -> Complex64 {
        self.to_complex_at(0)
    }

    /// Floating-point value under the embedding `α ↦ roots()[k]`.
    pub fn to_complex_at(&self, k: usize) -> Complex64 {
        let z = self.field.0.roots[k];
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_f64().unwrap_or(0.0))
    }

    /// Complex conjugate at the designated embedding, as a field element.
    pub fn conj(&self) -> FieldElement {
        self.field.conjugation().apply_unchecked(self)
    }

    /// Coefficients rendered as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        let mut v: Vec<Q> = self.coeffs.clone();
        poly::trim(&mut v);
        v.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings(field: &NumberField, coeffs: &[String]) -> Result<FieldElement> {
        let mut v = Vec::with_capacity(coeffs.len());
        for s in coeffs {
            v.push(parse_rational(s)?);
        }
        Ok(field.element(v))
    }
}

/// Parses `"p"` or `"p/q"` into a rational.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Schema(format!("invalid rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(p, q))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn check_same(a: &FieldElement, b: &FieldElement) -> Result<()> {
    if a.field.same(&b.field) {
        Ok(())
    } else {
        Err(Error::FieldMismatch)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs && self.field.same(&other.field)
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => "α".to_string(),
                _ => format!("α^{k}"),
            };
            let coef = if k > 0 && c.is_one() {
                String::new()
            } else if k > 0 && (-c).is_one() {
                "-".to_string()
            } else if k > 0 {
                format!("({c})")
            } else {
                c.to_string()
            };
            terms.push(format!("{coef}{mono}"));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                assert!(self.field.same(&rhs.field), "operands belong to different fields");
                let f: fn(&FieldElement, &FieldElement) -> Vec<Q> = $body;
                FieldElement { field: self.field.clone(), coeffs: f(self, rhs) }
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, |a, b| a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect());
binop!(Sub, sub, |a, b| a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect());
binop!(Mul, mul, |a, b| reduce(&a.field.0.min_poly_q, poly_mul_dense(&a.coeffs, &b.coeffs)));

fn poly_mul_dense(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

/// Arithmetic operation selector for [`fe_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact field arithmetic with explicit error reporting.
pub fn fe_arith(a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement> {
    check_same(a, b)?;
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl GaloisAutomorphism {
    pub fn field(&self) -> &NumberField {
        &self.field
    }

    /// The image `σ(α)`.
    pub fn image_of_alpha(&self) -> FieldElement {
        self.apply_unchecked(&self.field.alpha())
    }

    /// Numeric value of `σ(α)` at the designated embedding.
    pub fn image_root(&self) -> Complex64 {
        self.field.0.roots[self.index]
    }

    pub fn is_identity(&self) -> bool {
        self.index == 0
    }

    pub fn apply(&self, a: &FieldElement) -> Result<FieldElement> {
        if !self.field.same(&a.field) {
            return Err(Error::FieldMismatch);
        }
        Ok(self.apply_unchecked(a))
    }

    fn apply_unchecked(&self, a: &FieldElement) -> FieldElement {
        if self.index == 0 {
            return a.clone();
        }
        let m = &self.field.0.automorphisms[self.index].matrix;
        let d = self.field.degree();
        let mut out = vec![Q::zero(); d];
        for (k, ak) in a.coeffs.iter().enumerate() {
            if ak.is_zero() {
                continue;
            }
            for (i, mik) in m[k].iter().enumerate() {
                if !mik.is_zero() {
                    out[i] += ak * mik;
                }
            }
        }
        FieldElement { field: self.field.clone(), coeffs: out }
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &GaloisAutomorphism) -> Result<GaloisAutomorphism> {
        let img = self.apply(&other.image_of_alpha())?;
        self.field.automorphism_mapping(&self.field.alpha(), &img)?.ok_or(Error::NotGaloisExtension)
    }
}

impl PartialEq for GaloisAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.index == other.index && self.field.same(&other.field)
    }
}

impl fmt::Debug for GaloisAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "α ↦ {}", self.image_of_alpha())
    }
}

/// `σ(a)`, failing when `σ` and `a` live in different fields.
pub fn fe_apply(sigma: &GaloisAutomorphism, a: &FieldElement) -> Result<FieldElement> {
    sigma.apply(a)
}

/// All automorphisms of a field (identity first).
pub fn nf_automorphisms(field: &NumberField) -> Vec<GaloisAutomorphism> {
    field.automorphisms()
}


#[cfg(test)]
mod tests {
    use super::*;

    fn zeta() -> (NumberField, FieldElement) {
        let f = NumberField::cyclotomic5();
        let z = f.alpha();
        (f, z)
    }

    #[test]
    fn cyclotomic_relations() {
        let (f, z) = zeta();
        assert!((&z * &z.pow(4)).is_one());
        let s = &(&(&(&z.pow(4) + &z.pow(3)) + &z.pow(2)) + &z) + &f.one();
        assert!(s.is_zero());
    }

    #[test]
    fn inverse_of_one_plus_zeta() {
        let (f, z) = zeta();
        let a = &f.one() + &z;
        let e = fe_arith(&f.one(), &a, ArithOp::Div).unwrap();
        assert!((&a * &e).is_one());
        assert!(matches!(fe_arith(&f.one(), &f.zero(), ArithOp::Div), Err(Error::DivisionByZero)));
    }

    #[test]
    fn conjugation_is_zeta_to_the_fourth() {
        let (f, z) = zeta();
        assert_eq!(f.conjugation().image_of_alpha(), z.pow(4));
        assert_eq!(f.automorphisms().len(), 4);
    }

    #[test]
    fn rational_field() {
        let q = NumberField::rationals();
        assert_eq!(q.degree(), 1);
        assert!(q.conjugation().is_identity());
        assert_eq!(q.automorphisms().len(), 1);
        assert_eq!(q.from_int(3).sign(Part::Real), 1);
        assert_eq!(q.from_int(3).sign(Part::Imag), 0);
    }

    #[test]
    fn signs_at_zeta() {
        let (_, z) = zeta();
        assert_eq!(z.sign(Part::Real), 1);
        assert_eq!(z.sign(Part::Imag), 1);
        assert_eq!((&z + &z.pow(4)).sign(Part::Imag), 0);
        assert_eq!(z.pow(2).sign(Part::Real), -1);
    }

    #[test]
    fn apply_square_map() {
        let (f, z) = zeta();
        let sq = f.automorphism_mapping(&z, &z.pow(2)).unwrap().unwrap();
        assert_eq!(sq.apply(&z).unwrap(), z.pow(2));
        let a = &z.pow(3) + &f.one();
        assert_eq!(sq.apply(&a).unwrap(), &z + &f.one());
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(matches!(
            NumberField::new(&[-1, 0, 1], ("1", "0")),
            Err(Error::ReducibleMinPoly { .. })
        ));
        assert!(matches!(
            NumberField::new(&[1, 1, 1, 1, 1], ("0", "0")),
            Err(Error::AmbiguousRootHint { found: 0 })
        ));
        assert!(matches!(NumberField::new(&[-2, 0, 0, 1], ("1.26", "0")), Err(Error::NotGaloisExtension)));
    }

    #[test]
    fn appendix_style_field_is_galois() {
        let f = NumberField::new(&[1, 2, 4, 3, 1], ("-0.190983", "0.587785")).unwrap();
        let auts = f.automorphisms();
        assert_eq!(auts.len(), 4);
        let conj = f.conjugation();
        assert_eq!(conj.apply(&conj.image_of_alpha()).unwrap(), f.alpha());
        assert!(f.primitive_root_of_unity(5).is_some());
    }

    #[test]
    fn cyclotomic_polynomials() {
        assert_eq!(cyclotomic_poly(5).len(), 5);
        assert_eq!(cyclotomic_poly(10), [1, -1, 1, -1, 1].iter().map(|&c| poly::q_int(c)).collect::<Vec<_>>());
    }
}
