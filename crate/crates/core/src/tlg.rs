//! The tensor linking group: its linear constraint system over `Z/nZ`, kernel computation,
//! tensor validation, and the integral variant.
//!
//! Unknowns are indexed by `(edge, meridian)` with edges ordered lexicographically by
//! `(support, line)`; the unknown `λ_{P→L}(m_{L'})` has column `edge * n + L'`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{edges_of, Combinatorics, Edge};
use crate::error::{Error, Result};
use crate::modlin;

/// Kind of a linear constraint on the edge characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ConstraintKind {
    /// The character kills `m_{L_1} + ⋯ + m_{L_n}`.
    SumZero,
    /// Boundary at a point-vertex.
    PointBoundary,
    /// Boundary at a line-vertex.
    LineBoundary,
    /// Vanishing on the meridians of the lines through the edge's point.
    ConditionI,
    /// Vanishing on the sum of meridians through another point of the edge's line.
    ConditionII,
}

/// What a constraint row refers to (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RowLabel {
    pub kind: ConstraintKind,
    /// Edge index for per-edge constraints, support index for point boundaries, line index
    /// for line boundaries.
    pub subject: usize,
    /// Meridian for boundary and condition I rows, support index for condition II rows, and
    /// unused (0) for sum-zero rows.
    pub detail: usize,
}

/// The constraint system: sparse integer rows over `ncols` unknowns, read modulo `modulus`
/// (`0` for the integral system).
#[derive(Clone, Debug)]
pub struct ModMatrix {
    pub modulus: u64,
    pub ncols: usize,
    pub rows: Vec<Vec<(usize, i64)>>,
    pub labels: Vec<RowLabel>,
}

impl ModMatrix {
    pub fn from_dense(modulus: u64, dense: &[Vec<i64>]) -> Self {
        let ncols = dense.first().map_or(0, |r| r.len());
        let rows: Vec<Vec<(usize, i64)>> = dense
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, &x)| (j, x)).collect())
            .collect();
        let labels = (0..rows.len())
            .map(|k| RowLabel { kind: ConstraintKind::SumZero, subject: k, detail: 0 })
            .collect();
        ModMatrix { modulus, ncols, rows, labels }
    }

    pub fn dense(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| {
                let mut v = vec![0i64; self.ncols];
                for &(j, x) in r {
                    v[j] += x;
                }
                v
            })
            .collect()
    }

    fn dense_mod(&self, n: u64) -> Vec<Vec<u64>> {
        self.dense().iter().map(|r| r.iter().map(|&x| modlin::reduce(x, n)).collect()).collect()
    }

    /// `M·v` reduced modulo `n`.
    pub fn apply_mod(&self, v: &[u64], n: u64) -> Vec<u64> {
        self.rows
            .iter()
            .map(|r| {
                r.iter().fold(0u64, |acc, &(j, x)| (acc + modlin::mul_mod(modlin::reduce(x, n), v[j], n)) % n)
            })
            .collect()
    }
}

/// Builds the constraint system of the tensor linking group of `c` with coefficients read
/// modulo `n`.
pub fn tlg_matrix(c: &Combinatorics, n: u64) -> ModMatrix {
    let edges = edges_of(c);
    let nl = c.n();
    let col = |e: usize, l: usize| e * nl + l;
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut push = |row: Vec<(usize, i64)>, label: RowLabel| {
        rows.push(row);
        labels.push(label);
    };
    for e in 0..edges.len() {
        push(
            (0..nl).map(|l| (col(e, l), 1)).collect(),
            RowLabel { kind: ConstraintKind::SumZero, subject: e, detail: 0 },
        );
    }
    for p in 0..c.supports().len() {
        let at_p: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].point == p).collect();
        for m in 0..nl {
            push(
                at_p.iter().map(|&e| (col(e, m), -1)).collect(),
                RowLabel { kind: ConstraintKind::PointBoundary, subject: p, detail: m },
            );
        }
    }
    for l in 0..nl {
        let at_l: Vec<usize> = (0..edges.len()).filter(|&e| edges[e].line == l).collect();
        for m in 0..nl {
            push(
                at_l.iter().map(|&e| (col(e, m), 1)).collect(),
                RowLabel { kind: ConstraintKind::LineBoundary, subject: l, detail: m },
            );
        }
    }
    for (e, edge) in edges.iter().enumerate() {
        for &m in &c.supports()[edge.point] {
            push(vec![(col(e, m), 1)], RowLabel { kind: ConstraintKind::ConditionI, subject: e, detail: m });
        }
        for q in c.supports_on_line(edge.line) {
            if q == edge.point {
                continue;
            }
            push(
                c.supports()[q].iter().map(|&m| (col(e, m), 1)).collect(),
                RowLabel { kind: ConstraintKind::ConditionII, subject: e, detail: q },
            );
        }
    }
    ModMatrix { modulus: n, ncols: edges.len() * nl, rows, labels }
}

/// Basis of the right kernel of `m` modulo `n`. For prime `n` this is a vector-space basis in
/// reduced form with each vector's first nonzero coordinate equal to 1; for composite `n` it
/// is a generating set of the kernel group (see [`kernel_group_mod`] for the orders).
pub fn kernel_mod(m: &ModMatrix, n: u64) -> Vec<Vec<u64>> {
    if modlin::is_prime(n) {
        modlin::kernel_prime(&m.dense_mod(n), m.ncols, n)
    } else {
        kernel_group_mod(m, n).into_iter().map(|(v, _)| v).collect()
    }
}

/// Kernel of `m` modulo any `n ≥ 2` as a direct sum of cyclic groups: generators and orders.
pub fn kernel_group_mod(m: &ModMatrix, n: u64) -> Vec<(Vec<u64>, u64)> {
    modlin::kernel_group(&m.dense_mod(n), m.ncols, n)
}

/// A tensor: one character `λ_{P→L}` (values on the meridians) per edge of the incidence graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    modulus: u64,
    comb: Combinatorics,
    values: Vec<Vec<u64>>,
}

/// Serialized tensor: edge keys such as `"P{1,3,9}->L1"` mapped to value vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TensorDoc {
    pub modulus: u64,
    pub edges: BTreeMap<String, Vec<u64>>,
}

/// Key of an edge, 1-based: `P{1,3,9}->L1`.
pub fn edge_key(c: &Combinatorics, e: &Edge) -> String {
    let s: Vec<String> = c.supports()[e.point].iter().map(|x| (x + 1).to_string()).collect();
    format!("P{{{}}}->L{}", s.join(","), e.line + 1)
}

/// Parses an edge key into (0-based support, 0-based line).
pub fn parse_edge_key(key: &str) -> Result<(Vec<usize>, usize)> {
    let bad = || Error::Schema(format!("invalid edge key '{key}'"));
    let rest = key.strip_prefix("P{").ok_or_else(bad)?;
    let close = rest.find('}').ok_or_else(bad)?;
    let support = rest[..close]
        .split(',')
        .map(|s| s.trim().parse::<usize>().ok().filter(|&x| x > 0).map(|x| x - 1).ok_or_else(bad))
        .collect::<Result<Vec<_>>>()?;
    let line = rest[close + 1..]
        .strip_prefix("->L")
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|&x| x > 0)
        .ok_or_else(bad)?;
    Ok((support, line - 1))
}

impl Tensor {
    pub fn zero(c: &Combinatorics, modulus: u64) -> Self {
        let values = vec![vec![0u64; c.n()]; c.edge_count()];
        Tensor { modulus, comb: c.clone(), values }
    }

    /// Builds a tensor from a flat unknown vector (column `edge * n + line`).
    pub fn from_flat(c: &Combinatorics, modulus: u64, flat: &[u64]) -> Self {
        let n = c.n();
        let values = flat.chunks(n).map(|ch| ch.iter().map(|&x| x % modulus).collect()).collect();
        Tensor { modulus, comb: c.clone(), values }
    }

    /// Builds a tensor from per-edge values given in edge order.
    pub fn from_values(c: &Combinatorics, modulus: u64, values: Vec<Vec<u64>>) -> Result<Self> {
        if values.len() != c.edge_count() || values.iter().any(|v| v.len() != c.n()) {
            return Err(Error::InvalidTensor("value table does not match the incidence graph".into()));
        }
        let values = values.into_iter().map(|v| v.into_iter().map(|x| x % modulus).collect()).collect();
        Ok(Tensor { modulus, comb: c.clone(), values })
    }

    pub fn flat(&self) -> Vec<u64> {
        self.values.concat()
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn combinatorics(&self) -> &Combinatorics {
        &self.comb
    }

    pub fn edges(&self) -> Vec<Edge> {
        edges_of(&self.comb)
    }

    /// Character of edge number `e`.
    pub fn character(&self, e: usize) -> &[u64] {
        &self.values[e]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    pub fn scaled(&self, k: u64) -> Tensor {
        let n = self.modulus;
        let values =
            self.values.iter().map(|v| v.iter().map(|&x| modlin::mul_mod(x, k % n, n)).collect()).collect();
        Tensor { modulus: n, comb: self.comb.clone(), values }
    }

    pub fn add(&self, other: &Tensor) -> Result<Tensor> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        if self.comb != other.comb {
            return Err(Error::InvalidTensor("tensors live on different combinatorics".into()));
        }
        let n = self.modulus;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| (x + y) % n).collect())
            .collect();
        Ok(Tensor { modulus: n, comb: self.comb.clone(), values })
    }

    pub fn to_doc(&self) -> TensorDoc {
        let edges = self
            .edges()
            .iter()
            .zip(&self.values)
            .map(|(e, v)| (edge_key(&self.comb, e), v.clone()))
            .collect();
        TensorDoc { modulus: self.modulus, edges }
    }

    /// Reads a tensor on `c`; edges absent from the document are zero.
    pub fn from_doc(c: &Combinatorics, doc: &TensorDoc) -> Result<Self> {
        let mut t = Tensor::zero(c, doc.modulus);
        let edges = edges_of(c);
        for (key, v) in &doc.edges {
            let (mut support, line) = parse_edge_key(key)?;
            support.sort_unstable();
            let p = c
                .supports()
                .iter()
                .position(|s| *s == support)
                .ok_or_else(|| Error::InvalidTensor(format!("{key} is not an edge")))?;
            let e = edges
                .iter()
                .position(|e| e.point == p && e.line == line)
                .ok_or_else(|| Error::InvalidTensor(format!("{key} is not an edge")))?;
            if v.len() != c.n() {
                return Err(Error::InvalidTensor(format!("{key} has {} values, expected {}", v.len(), c.n())));
            }
            t.values[e] = v.iter().map(|&x| x % doc.modulus).collect();
        }
        Ok(t)
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tensor").field("modulus", &self.modulus).field("edges", &self.to_doc().edges).finish()
    }
}

/// A violated constraint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub label: RowLabel,
    /// Human-readable location (1-based).
    pub location: String,
    /// Value of the constraint's linear form.
    pub value: u64,
}

/// Checks all constraint families; an empty list means the tensor lies in the group.
pub fn tensor_validate(c: &Combinatorics, t: &Tensor) -> Vec<Violation> {
    if &t.comb != c {
        let label = RowLabel { kind: ConstraintKind::SumZero, subject: 0, detail: 0 };
        return vec![Violation { label, location: "tensor indexed by other combinatorics".into(), value: 0 }];
    }
    let n = t.modulus;
    let m = tlg_matrix(c, n);
    let values = m.apply_mod(&t.flat(), n);
    let edges = edges_of(c);
    m.labels
        .iter()
        .zip(values)
        .filter(|(_, v)| *v != 0)
        .map(|(label, value)| {
            let location = match label.kind {
                ConstraintKind::SumZero => edge_key(c, &edges[label.subject]),
                ConstraintKind::PointBoundary => {
                    format!("point {:?}, meridian m{}", one_based(&c.supports()[label.subject]), label.detail + 1)
                }
                ConstraintKind::LineBoundary => {
                    format!("line L{}, meridian m{}", label.subject + 1, label.detail + 1)
                }
                ConstraintKind::ConditionI => {
                    format!("{}, meridian m{}", edge_key(c, &edges[label.subject]), label.detail + 1)
                }
                ConstraintKind::ConditionII => format!(
                    "{}, point {:?}",
                    edge_key(c, &edges[label.subject]),
                    one_based(&c.supports()[label.detail])
                ),
            };
            Violation { label: *label, location, value }
        })
        .collect()
}

fn one_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|x| x + 1).collect()
}

/// The tensor linking group modulo `n`.
#[derive(Clone, Debug)]
pub struct TlgResult {
    pub modulus: u64,
    /// Generators; for a prime modulus a basis in reduced form.
    pub basis: Vec<Tensor>,
    /// Additive order of each generator (all equal to `modulus` when it is prime).
    pub orders: Vec<u64>,
}

impl TlgResult {
    /// Number of cyclic factors.
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Computes generators of `TLG(c, Z/nZ)`.
pub fn tlg_compute(c: &Combinatorics, n: u64) -> TlgResult {
    let m = tlg_matrix(c, n);
    if modlin::is_prime(n) {
        let basis: Vec<Tensor> = kernel_mod(&m, n).iter().map(|v| Tensor::from_flat(c, n, v)).collect();
        let orders = vec![n; basis.len()];
        TlgResult { modulus: n, basis, orders }
    } else {
        let group = kernel_group_mod(&m, n);
        let orders = group.iter().map(|(_, o)| *o).collect();
        let basis = group.iter().map(|(v, _)| Tensor::from_flat(c, n, v)).collect();
        TlgResult { modulus: n, basis, orders }
    }
}

/// An integral tensor: per-edge integer characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralTensor {
    pub values: Vec<Vec<BigInt>>,
}

impl IntegralTensor {
    /// Reduction modulo `n`.
    pub fn reduce(&self, c: &Combinatorics, n: u64) -> Tensor {
        let nb = BigInt::from(n);
        let values = self
            .values
            .iter()
            .map(|v| {
                v.iter()
                    .map(|x| {
                        let r = ((x % &nb) + &nb) % &nb;
                        r.to_u64().expect("reduced value fits")
                    })
                    .collect()
            })
            .collect();
        Tensor { modulus: n, comb: c.clone(), values }
    }
}

/// Integral tensor linking group.
#[derive(Clone, Debug)]
pub struct IntegralTlg {
    pub rank: usize,
    /// Basis of the integral kernel.
    pub basis: Vec<IntegralTensor>,
    /// Invariant factors of the constraint matrix, when they fit in 128-bit arithmetic.
    pub invariant_factors: Option<Vec<u128>>,
}

/// Integral kernel of the constraint system (a saturated lattice) and the invariant factors of
/// the system.
pub fn tlg_integral(c: &Combinatorics) -> IntegralTlg {
    let m = tlg_matrix(c, 0);
    let dense = m.dense();
    let (_, rational) = modlin::rational_kernel(&dense, m.ncols);
    let r = rational.len();
    let d = modlin::denominator_lcm(&rational);
    // coordinates c ∈ Z^r give the integer vector Σ c_k v_k exactly when d·Σ c_k v_k ≡ 0 mod d
    let coords: Vec<Vec<BigInt>> = if d.is_one() {
        (0..r).map(|i| (0..r).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
    } else {
        let du = d.to_u64().expect("denominator fits in 64 bits");
        let a: Vec<Vec<i64>> = (0..m.ncols)
            .map(|j| {
                (0..r)
                    .map(|k| {
                        let x = &rational[k][j] * BigRational::from_integer(d.clone());
                        let v = x.to_integer() % &d;
                        v.to_i64().expect("fits")
                    })
                    .collect()
            })
            .collect();
        modlin::congruence_lattice(&a, r, du)
    };
    let basis = coords
        .iter()
        .map(|cv| {
            let flat: Vec<BigInt> = (0..m.ncols)
                .map(|j| {
                    let mut s = BigRational::zero();
                    for (k, ck) in cv.iter().enumerate() {
                        if !ck.is_zero() {
                            s += &rational[k][j] * BigRational::from_integer(ck.clone());
                        }
                    }
                    debug_assert!(s.is_integer());
                    s.to_integer()
                })
                .collect();
            IntegralTensor { values: flat.chunks(c.n()).map(|ch| ch.to_vec()).collect() }
        })
        .collect();
    let invariant_factors = modlin::smith_invariants(&dense, m.ncols).ok();
    IntegralTlg { rank: r, basis, invariant_factors }
}

/// True when `t` (prime modulus) is the reduction of an integral tensor in the group.
pub fn lifts_to_integral(c: &Combinatorics, integral: &IntegralTlg, t: &Tensor) -> bool {
    let p = t.modulus;
    let reduced: Vec<Vec<u64>> = integral.basis.iter().map(|b| b.reduce(c, p).flat()).collect();
    if t.is_zero() {
        return true;
    }
    if reduced.is_empty() {
        return false;
    }
    modlin::in_span_prime(&reduced, &t.flat(), p)
}

/// Elements of the modular basis (prime modulus) that complete the reductions of the
/// integral group to a basis: they represent the quotient of the tensor linking group by the
/// tensors that lift to integral ones.
pub fn non_integral_part(c: &Combinatorics, tlg: &TlgResult, integral: &IntegralTlg) -> Vec<Tensor> {
    let p = tlg.modulus;
    let mut span: Vec<Vec<u64>> = integral.basis.iter().map(|b| b.reduce(c, p).flat()).collect();
    let mut out = Vec::new();
    for t in &tlg.basis {
        let v = t.flat();
        if span.is_empty() || !modlin::in_span_prime(&span, &v, p) {
            span.push(v);
            out.push(t.clone());
        }
    }
    out
}

/// Largest absolute entry of an integral tensor.
pub fn max_abs(t: &IntegralTensor) -> BigInt {
    t.values.iter().flatten().map(|x| x.abs()).max().unwrap_or_default()
}
