//! Certified sign determination at the designated embedding.
//!
//! The designated root `α` is enclosed in a disk `D(c, R)` with a dyadic rational centre
//! and a rigorous rational radius. For a polynomial `a(z) = Σ a_k z^k` the deviation
//! `|a(α) - a(c)|` is at most `Σ |a_k| ((|c| + R)^k - |c|^k)`, so the sign of a real or
//! imaginary part is certified once the exact value at `c` exceeds that bound. Exact zeros
//! are detected beforehand through complex conjugation, which makes the procedure terminate.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use super::poly::{self, Q};
use super::{FieldElement, Part};
use crate::error::{Error, Result};

/// Precision levels (fractional bits of the disk centre) computed at field creation.
const PRECOMPUTED_BITS: [u32; 3] = [64, 128, 256];
/// Upper limit for on-demand refinement; reaching it signals a broken invariant.
const MAX_BITS: u32 = 1 << 16;

#[derive(Clone, Debug)]
pub(crate) struct CQ {
    pub re: Q,
    pub im: Q,
}

impl CQ {
    fn zero() -> Self {
        CQ { re: Q::zero(), im: Q::zero() }
    }

    fn one() -> Self {
        CQ { re: Q::one(), im: Q::zero() }
    }

    fn from_c64(z: Complex64) -> Self {
        CQ { re: poly::q_from_f64(z.re), im: poly::q_from_f64(z.im) }
    }

    fn add(&self, o: &CQ) -> CQ {
        CQ { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn sub(&self, o: &CQ) -> CQ {
        CQ { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn mul(&self, o: &CQ) -> CQ {
        CQ { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }

    fn norm_sqr(&self) -> Q {
        &self.re * &self.re + &self.im * &self.im
    }

    fn div(&self, o: &CQ) -> CQ {
        let n = o.norm_sqr();
        let conj = CQ { re: o.re.clone(), im: -&o.im };
        let p = self.mul(&conj);
        CQ { re: p.re / &n, im: p.im / n }
    }

    fn round(&self, bits: u32) -> CQ {
        CQ { re: poly::round_dyadic(&self.re, bits), im: poly::round_dyadic(&self.im, bits) }
    }
}

/// Value and derivative of a rational polynomial at a complex rational point.
fn eval_pd(p: &[Q], z: &CQ) -> (CQ, CQ) {
    let mut v = CQ::zero();
    let mut dv = CQ::zero();
    for c in p.iter().rev() {
        dv = dv.mul(z).add(&v);
        v = v.mul(z);
        v.re += c;
    }
    (v, dv)
}

/// Squared Newton inclusion radius `(d |p(c)| / |p'(c)|)^2`: some root lies within it.
fn inclusion_radius_sqr(p: &[Q], c: &CQ) -> Option<Q> {
    let d = Q::from_integer(BigInt::from(p.len() - 1));
    let (v, dv) = eval_pd(p, c);
    let dn = dv.norm_sqr();
    if dn.is_zero() {
        return None;
    }
    Some(&d * &d * v.norm_sqr() / dn)
}

/// Smallest power of two (possibly negative exponent) whose square bounds `r2` from above.
fn dyadic_sqrt_upper(r2: &Q) -> Q {
    if r2.is_zero() {
        return Q::zero();
    }
    let num_bits = r2.numer().bits() as i64;
    let den_bits = r2.denom().bits() as i64;
    // r2 < 2^(num_bits - den_bits + 1); choose e with 2e >= num_bits - den_bits + 1.
    let mut e = (num_bits - den_bits + 2).div_euclid(2);
    let pow = |e: i64| -> Q {
        if e >= 0 {
            Q::from_integer(BigInt::one() << e as usize)
        } else {
            Q::new(BigInt::one(), BigInt::one() << (-e) as usize)
        }
    };
    while &(pow(e - 1) * pow(e - 1)) >= r2 {
        e -= 1;
    }
    pow(e)
}

/// Certified isolating disks for all roots (index 0 is the designated root).
pub(crate) struct Isolation {
    centers: Vec<CQ>,
    radii_sqr: Vec<Q>,
}

impl Isolation {
    pub fn new(p: &[Q], roots: &[Complex64]) -> Result<Self> {
        let mut centers: Vec<CQ> = roots.iter().map(|&z| CQ::from_c64(z)).collect();
        for attempt in 0..4 {
            let radii: Option<Vec<Q>> = centers.iter().map(|c| inclusion_radius_sqr(p, c)).collect();
            if let Some(radii_sqr) = radii {
                let iso = Isolation { centers: centers.clone(), radii_sqr };
                if iso.disjoint() {
                    return Ok(iso);
                }
            }
            let bits = 64 << attempt;
            centers = centers.iter().map(|c| newton(p, c, bits, 2)).collect();
        }
        Err(Error::InvalidMinPoly("roots could not be isolated".into()))
    }

    fn disjoint(&self) -> bool {
        let two = Q::from_integer(BigInt::from(2));
        for i in 0..self.centers.len() {
            for j in i + 1..self.centers.len() {
                let gap = self.centers[i].sub(&self.centers[j]).norm_sqr();
                if gap <= &two * (&self.radii_sqr[i] + &self.radii_sqr[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// True when the disk `D(c, sqrt(r2))` avoids every non-designated isolating disk, so the
    /// root it contains is the designated one.
    fn separates(&self, c: &CQ, r2: &Q) -> bool {
        let two = Q::from_integer(BigInt::from(2));
        (1..self.centers.len()).all(|j| {
            let gap = c.sub(&self.centers[j]).norm_sqr();
            gap > &two * (r2 + &self.radii_sqr[j])
        })
    }
}

fn newton(p: &[Q], c: &CQ, bits: u32, steps: usize) -> CQ {
    let mut z = c.clone();
    for _ in 0..steps {
        let (v, dv) = eval_pd(p, &z);
        if dv.norm_sqr().is_zero() || v.norm_sqr().is_zero() {
            break;
        }
        z = z.sub(&v.div(&dv)).round(bits + 8);
    }
    z
}

/// Evaluation data for one precision level of the designated root.
#[derive(Clone, Debug)]
pub(crate) struct DiskLevel {
    bits: u32,
    pow_re: Vec<Q>,
    pow_im: Vec<Q>,
    /// `(M + R)^k - M^k` with `M ≥ |c|` and `R` the disk radius.
    growth: Vec<Q>,
}

fn build_level(p: &[Q], iso: &Isolation, bits: u32) -> Option<DiskLevel> {
    let d = p.len() - 1;
    let mut c = iso.centers[0].clone();
    let target = Q::new(BigInt::one(), BigInt::one() << (2 * bits as usize));
    let mut r2 = inclusion_radius_sqr(p, &c)?;
    let mut rounds = 0;
    while r2 > target {
        c = newton(p, &c, bits, 1);
        r2 = inclusion_radius_sqr(p, &c)?;
        rounds += 1;
        if rounds > 64 {
            return None;
        }
    }
    if !iso.separates(&c, &r2) {
        return None;
    }
    let radius = dyadic_sqrt_upper(&r2);
    let mag = c.re.abs() + c.im.abs();
    let mut pow_re = Vec::with_capacity(d);
    let mut pow_im = Vec::with_capacity(d);
    let mut growth = Vec::with_capacity(d);
    let mut z = CQ::one();
    let big = &mag + &radius;
    let (mut bk, mut mk) = (Q::one(), Q::one());
    for _ in 0..d {
        pow_re.push(z.re.clone());
        pow_im.push(z.im.clone());
        growth.push(&bk - &mk);
        z = z.mul(&c);
        bk = &bk * &big;
        mk = &mk * &mag;
    }
    Some(DiskLevel { bits, pow_re, pow_im, growth })
}

pub(crate) fn precompute_levels(p: &[Q], iso: &Isolation) -> Vec<DiskLevel> {
    if p.len() == 2 {
        return vec![exact_rational_level(p)];
    }
    PRECOMPUTED_BITS.iter().filter_map(|&b| build_level(p, iso, b)).collect()
}

/// Degree one: the root is rational and evaluation is exact.
fn exact_rational_level(p: &[Q]) -> DiskLevel {
    debug_assert_eq!(p.len(), 2);
    DiskLevel { bits: u32::MAX, pow_re: vec![Q::one()], pow_im: vec![Q::zero()], growth: vec![Q::zero()] }
}

fn decide(a: &FieldElement, part: Part, level: &DiskLevel) -> Option<i8> {
    let pows = match part {
        Part::Real => &level.pow_re,
        Part::Imag => &level.pow_im,
    };
    let mut value = Q::zero();
    let mut err = Q::zero();
    for (k, ak) in a.coeffs.iter().enumerate() {
        if ak.is_zero() {
            continue;
        }
        value += ak * &pows[k];
        if !level.growth[k].is_zero() {
            err += ak.abs() * &level.growth[k];
        }
    }
    if value.abs() > err {
        Some(if value.is_positive() { 1 } else { -1 })
    } else if err.is_zero() && value.is_zero() {
        Some(0)
    } else {
        None
    }
}

fn exact_zero(a: &FieldElement, part: Part) -> bool {
    let c = a.conj();
    match part {
        Part::Real => (a + &c).is_zero(),
        Part::Imag => (a - &c).is_zero(),
    }
}

pub(crate) fn certified_sign(a: &FieldElement, part: Part) -> i8 {
    if let Some(q) = a.as_rational() {
        return match part {
            Part::Real => sign_of(q),
            Part::Imag => 0,
        };
    }
    if exact_zero(a, part) {
        return 0;
    }
    let data = &a.field.0;
    for level in &data.levels {
        if let Some(s) = decide(a, part, level) {
            return s;
        }
    }
    let mut bits = data.levels.last().map_or(256, |l| l.bits).saturating_mul(2);
    while bits <= MAX_BITS {
        if let Some(level) = build_level(&data.min_poly_q, &data.isolation, bits) {
            if let Some(s) = decide(a, part, &level) {
                return s;
            }
        }
        bits *= 2;
    }
    panic!("sign of a nonzero algebraic number not resolved at {MAX_BITS} bits");
}

pub(crate) fn sign_at_precision(a: &FieldElement, part: Part, bits: u32) -> Option<i8> {
    let data = &a.field.0;
    if data.degree == 1 {
        return Some(certified_sign(a, part));
    }
    let level = build_level(&data.min_poly_q, &data.isolation, bits)?;
    decide(a, part, &level)
}

fn sign_of(q: &Q) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_upper_bound() {
        for r2 in [Q::new(1.into(), 3.into()), Q::new(50.into(), 1.into()), Q::new(1.into(), 1_000_000.into())] {
            let r = dyadic_sqrt_upper(&r2);
            assert!(&r * &r >= r2);
            let half = &r / Q::from_integer(2.into());
            assert!(&half * &half < r2);
        }
    }
}
