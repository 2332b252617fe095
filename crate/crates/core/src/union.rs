//! Ordered unions of arrangements, the sum of tensors living on the two factors, and the
//! MacLane and Rybnikov arrangements built from them.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arrangement::{apply_projectivity, galois_conjugate, Arrangement, Mat3};
use crate::combinatorics::{comb_automorphisms, comb_from_arrangement, comb_isomorphism, edges_of, Combinatorics};
use crate::dataset;
use crate::linking::{lln, pair_total, relabel_ulk, ulk_edges, Method, Verdict, DEFAULT_SEED};
use crate::perm::Perm;
use crate::tlg::{non_integral_part, tlg_compute, tlg_integral, Tensor};
use crate::{Error, Result};

/// `A1 ⊍ A2`: the lines of `A1` in order, followed by the lines of `A2` beyond the first `r`,
/// where the first `r` lines of both arrangements coincide.
#[derive(Clone, Debug)]
pub struct OrderedUnion {
    pub a1: Arrangement,
    pub a2: Arrangement,
    pub r: usize,
    pub result: Arrangement,
}

impl OrderedUnion {
    /// Index in the union of line `i` of the first factor.
    pub fn first_map(&self) -> Vec<usize> {
        (0..self.a1.len()).collect()
    }

    /// Index in the union of line `j` of the second factor.
    pub fn second_map(&self) -> Vec<usize> {
        let n = self.a1.len();
        (0..self.a2.len()).map(|j| if j < self.r { j } else { n + j - self.r }).collect()
    }
}

/// Builds `A1 ⊍ A2`. The shared prefix length is the longest common prefix of the two line
/// lists unless `r` is given, in which case the first `r` lines must agree.
pub fn ordered_union(a1: &Arrangement, a2: &Arrangement, r: Option<usize>) -> Result<OrderedUnion> {
    if a1.field() != a2.field() {
        return Err(Error::FieldMismatch);
    }
    let common = a1.lines().iter().zip(a2.lines()).take_while(|(x, y)| x == y).count();
    let r = match r {
        None => common,
        Some(r) if r <= common => r,
        Some(_) => return Err(Error::PrefixMismatch(common + 1)),
    };
    if r == a1.len() && r == a2.len() {
        return Err(Error::DegenerateUnion);
    }
    if let Some(i) = (r..a1.len()).find(|&i| a2.lines().contains(a1.line(i))) {
        return Err(Error::SharedLineOutsidePrefix(i + 1));
    }
    if let Some(j) = (r..a2.len()).find(|&j| a1.lines().contains(a2.line(j))) {
        return Err(Error::SharedLineOutsidePrefix(a1.len() + j - r + 1));
    }
    let lines = a1.lines().iter().chain(&a2.lines()[r..]).cloned().collect();
    let name = format!("{} ⊍ {}", a1.name(), a2.name());
    let result = Arrangement::new(name, a1.field().clone(), lines)?;
    Ok(OrderedUnion { a1: a1.clone(), a2: a2.clone(), r, result })
}

/// Pushes a tensor on `source` forward to `target` along an injective line map: each edge
/// `P → L` goes to the edge of `target` through the image lines, and each character is
/// extended by zero on the meridians of lines outside the image.
pub fn embed_tensor(t: &Tensor, line_map: &[usize], target: &Combinatorics) -> Result<Tensor> {
    let source = t.combinatorics();
    if line_map.len() != source.n() || line_map.iter().any(|&l| l >= target.n()) {
        return Err(Error::DegreeMismatch { expected: source.n(), got: line_map.len() });
    }
    let target_edges = edges_of(target);
    let mut values = vec![vec![0u64; target.n()]; target_edges.len()];
    for (k, e) in edges_of(source).iter().enumerate() {
        let s = &source.supports()[e.point];
        let p = target.support_of_pair(line_map[s[0]], line_map[s[1]]);
        let image: Vec<usize> = s.iter().map(|&x| line_map[x]).collect();
        if image.iter().any(|x| !target.supports()[p].contains(x)) {
            return Err(Error::InvalidCombinatorics("line map does not preserve incidences".into()));
        }
        let edge = target_edges
            .iter()
            .position(|f| f.point == p && f.line == line_map[e.line])
            .expect("image line passes through the image point");
        for (l, &v) in t.character(k).iter().enumerate() {
            values[edge][line_map[l]] = v;
        }
    }
    Tensor::from_values(target, t.modulus(), values)
}

/// `Λ1 ⊕ Λ2` on the combinatorics of the union.
pub fn tensor_oplus(t1: &Tensor, t2: &Tensor, u: &OrderedUnion) -> Result<Tensor> {
    if t1.modulus() != t2.modulus() {
        return Err(Error::ModulusMismatch(t1.modulus(), t2.modulus()));
    }
    if t1.combinatorics() != &comb_from_arrangement(&u.a1) || t2.combinatorics() != &comb_from_arrangement(&u.a2) {
        return Err(Error::InvalidTensor("tensor is indexed by other combinatorics".into()));
    }
    let target = comb_from_arrangement(&u.result);
    embed_tensor(t1, &u.first_map(), &target)?.add(&embed_tensor(t2, &u.second_map(), &target)?)
}

/// Both sides of `L(A1 ⊍ A2, Λ1 ⊕ Λ2) = L(A1, Λ1) + L(A2, Λ2)`, computed independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplicativityReport {
    pub modulus: u64,
    pub lhs: u64,
    pub lln_1: u64,
    pub lln_2: u64,
    pub rhs: u64,
    pub equal: bool,
}

pub fn multiplicativity_check(u: &OrderedUnion, t1: &Tensor, t2: &Tensor, seed: u64) -> Result<MultiplicativityReport> {
    let method = Method::Cov { seed };
    let sum = tensor_oplus(t1, t2, u)?;
    let lhs = lln(&u.result, &sum, &method)?;
    let lln_1 = lln(&u.a1, t1, &method)?;
    let lln_2 = lln(&u.a2, t2, &method)?;
    let n = t1.modulus();
    let rhs = (lln_1 + lln_2) % n;
    Ok(MultiplicativityReport { modulus: n, lhs, lln_1, lln_2, rhs, equal: lhs == rhs })
}

/// Sign of a MacLane realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// The MacLane arrangement over `Q(ω)`; the negative one is the complex conjugate.
pub fn maclane(sign: Sign) -> Result<Arrangement> {
    dataset::arrangement(match sign {
        Sign::Plus => "ML+",
        Sign::Minus => "ML-",
    })
}

/// Modulus of the tensor linking group used with the MacLane arrangements.
pub const MACLANE_MODULUS: u64 = 3;

/// The tensor `Λ0` on the MacLane combinatorics modulo 3, normalized by `L(ML+, Λ0) = 1`.
///
/// The group modulo 3 has dimension 4: the reductions of the rank-3 integral group plus one
/// class that does not lift. `Λ0` is a representative of that class.
pub fn maclane_lambda0() -> Result<Tensor> {
    let a = maclane(Sign::Plus)?;
    let c = comb_from_arrangement(&a);
    let tlg = tlg_compute(&c, MACLANE_MODULUS);
    let part = non_integral_part(&c, &tlg, &tlg_integral(&c));
    let generator = match part.as_slice() {
        [g] => g.clone(),
        other => {
            return Err(Error::InvalidTensor(format!(
                "expected one non-integral class modulo 3, found {}",
                other.len()
            )))
        }
    };
    match lln(&a, &generator, &Method::Cov { seed: DEFAULT_SEED })? {
        1 => Ok(generator),
        2 => Ok(generator.scaled(2)),
        _ => Err(Error::InvalidTensor("the generator has zero loop linking number".into())),
    }
}

/// Number of random homologies tried before giving up on genericity.
pub const GENERICITY_ATTEMPTS: usize = 64;

/// The point shared by the three concurrent lines `ℓ0, ℓ1, ℓ2` of both MacLane realizations.
const MACLANE_CENTER: [i64; 3] = [1, 1, 1];

/// The homology `v ↦ v + (c·v) P` with center `P = (1,1,1)`: it fixes every line through `P`.
pub fn homology(field: &crate::numberfield::NumberField, c: [i64; 3]) -> Result<Mat3> {
    let p = MACLANE_CENTER;
    let m = Mat3::from_int(field, std::array::from_fn(|i| std::array::from_fn(|j| i64::from(i == j) + p[i] * c[j])));
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(m)
}

/// The two Rybnikov arrangements `R+ = ML+ ⊍ ψ+(ML+)` and `R- = ML+ ⊍ ψ-(ML-)`, aligned on the
/// prefix `ℓ0, ℓ1, ℓ2` (so `r = 3` and each has 13 lines).
#[derive(Clone, Debug)]
pub struct RybnikovPair {
    pub plus: OrderedUnion,
    pub minus: OrderedUnion,
    pub psi_plus: Mat3,
    pub psi_minus: Mat3,
    /// Attempt (0-based) at which the homologies were certified generic.
    pub attempt: usize,
}

impl RybnikovPair {
    pub fn get(&self, sign: Sign) -> &OrderedUnion {
        match sign {
            Sign::Plus => &self.plus,
            Sign::Minus => &self.minus,
        }
    }
}

/// Number of triple points of a Rybnikov arrangement: eight per MacLane factor, one shared.
pub const RYBNIKOV_TRIPLE_POINTS: usize = 15;

fn generic_union(u: &OrderedUnion) -> bool {
    let c = comb_from_arrangement(&u.result);
    let dense: Vec<usize> = c.dense_supports();
    u.r == 3 && dense.len() == RYBNIKOV_TRIPLE_POINTS && dense.iter().all(|&p| c.supports()[p].len() == 3)
}

/// Draws random homologies fixing `ℓ0, ℓ1, ℓ2` until both unions have exactly the expected
/// triple points and isomorphic combinatorics.
pub fn rybnikov_pair(seed: u64) -> Result<RybnikovPair> {
    let plus = maclane(Sign::Plus)?;
    let minus = maclane(Sign::Minus)?;
    let field = plus.field().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> [i64; 3] { std::array::from_fn(|_| rng.gen_range(-3..=3)) };
    for attempt in 0..GENERICITY_ATTEMPTS {
        let (cp, cm) = (draw(&mut rng), draw(&mut rng));
        let (Ok(psi_plus), Ok(psi_minus)) = (homology(&field, cp), homology(&field, cm)) else { continue };
        let built = (|| -> Result<(OrderedUnion, OrderedUnion)> {
            let p = ordered_union(&plus, &apply_projectivity(&psi_plus, &plus)?.with_name("ψ+(ML+)"), None)?;
            let m = ordered_union(&plus, &apply_projectivity(&psi_minus, &minus)?.with_name("ψ-(ML-)"), None)?;
            Ok((p, m))
        })();
        let Ok((mut p, mut m)) = built else { continue };
        if !generic_union(&p) || !generic_union(&m) {
            continue;
        }
        if comb_isomorphism(&comb_from_arrangement(&p.result), &comb_from_arrangement(&m.result)).is_none() {
            continue;
        }
        p.result = p.result.with_name("R+");
        m.result = m.result.with_name("R-");
        return Ok(RybnikovPair { plus: p, minus: m, psi_plus, psi_minus, attempt });
    }
    Err(Error::GenericityExhausted(GENERICITY_ATTEMPTS))
}

/// One Rybnikov arrangement.
pub fn rybnikov(sign: Sign, seed: u64) -> Result<Arrangement> {
    Ok(rybnikov_pair(seed)?.get(sign).result.clone())
}

/// `Λ0 ⊕ Λ0` on a Rybnikov arrangement.
pub fn rybnikov_tensor(u: &OrderedUnion) -> Result<Tensor> {
    let l0 = maclane_lambda0()?;
    let second = Tensor::from_doc(&comb_from_arrangement(&u.a2), &l0.to_doc())?;
    tensor_oplus(&l0, &second, u)
}

/// Mechanical check of the hypotheses of the Rybnikov-like criterion for `A ⊍ ψ+(A)` and
/// `A ⊍ ψ-(Ā)` with a tensor `Λ0` on `A`.
#[derive(Clone, Debug, Serialize)]
pub struct RybnikovLikeReport {
    pub aut_order_plus: u128,
    pub aut_order_minus: u128,
    /// Every automorphism of each union fixes or exchanges the two factors, and exchanging
    /// automorphisms exist (so the group is `H × Z/2`).
    pub condition_i: bool,
    /// Orders of `H+` and `H-`.
    pub h_orders: (usize, usize),
    /// `2·L(h·A, Λ0)` for every `h` in `H+ ∪ H-`, as `(h in 1-based cycles, value)`.
    pub doubled_values: Vec<(String, u64)>,
    pub condition_ii: bool,
    pub predicted: Verdict,
}

fn factor_split(u: &OrderedUnion) -> Option<BTreeSet<Perm>> {
    let n = u.a1.len();
    let first: BTreeSet<usize> = u.first_map().into_iter().collect();
    let second: BTreeSet<usize> = u.second_map().into_iter().collect();
    let g = comb_automorphisms(&comb_from_arrangement(&u.result));
    let mut h = BTreeSet::new();
    let mut exchanges = 0usize;
    for s in g.elements() {
        let image: BTreeSet<usize> = first.iter().map(|&i| s.image(i)).collect();
        if image == first {
            h.insert(s.restrict(n)?);
        } else if image == second {
            exchanges += 1;
        } else {
            return None;
        }
    }
    (exchanges > 0).then_some(h)
}

pub fn rybnikov_like_check(
    a: &Arrangement,
    lambda0: &Tensor,
    psi_plus: &Mat3,
    psi_minus: &Mat3,
    seed: u64,
) -> Result<RybnikovLikeReport> {
    let abar = galois_conjugate(&a.field().conjugation(), a)?;
    let plus = ordered_union(a, &apply_projectivity(psi_plus, a)?, None)?;
    let minus = ordered_union(a, &apply_projectivity(psi_minus, &abar)?, None)?;
    let aut_order_plus = comb_automorphisms(&comb_from_arrangement(&plus.result)).order();
    let aut_order_minus = comb_automorphisms(&comb_from_arrangement(&minus.result)).order();
    let (hp, hm) = (factor_split(&plus), factor_split(&minus));
    let condition_i = hp.is_some() && hm.is_some();
    let h_orders = (hp.as_ref().map_or(0, |h| h.len()), hm.as_ref().map_or(0, |h| h.len()));
    let mut doubled_values = Vec::new();
    let mut condition_ii = false;
    if let (Some(hp), Some(hm)) = (hp, hm) {
        let c = comb_from_arrangement(a);
        let ulk = ulk_edges(a, &Method::Cov { seed })?;
        let n = lambda0.modulus();
        for h in hp.union(&hm) {
            let v = pair_total(lambda0, &relabel_ulk(&c, &ulk, h)?);
            doubled_values.push((h.to_cycles(), (2 * v) % n));
        }
        condition_ii = doubled_values.iter().all(|(_, v)| *v != 0);
    }
    let predicted =
        if condition_i && condition_ii { Verdict::NonHomeomorphicComplements } else { Verdict::Inconclusive };
    Ok(RybnikovLikeReport {
        aut_order_plus,
        aut_order_minus,
        condition_i,
        h_orders,
        doubled_values,
        condition_ii,
        predicted,
    })
}
