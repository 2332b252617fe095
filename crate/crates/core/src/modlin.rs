//! Linear algebra over `Z/nZ` and exact integer helpers used by the tensor linking group.

#![allow(clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut a: u64, mut e: u64, n: u64) -> u64 {
    let mut r = 1 % n;
    a %= n;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, n);
        }
        a = mul_mod(a, a, n);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Inverse of `a` modulo the prime `p`.
pub fn inv_mod_prime(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn reduce(v: i64, n: u64) -> u64 {
    v.rem_euclid(n as i64) as u64
}

/// Reduces `rows` (length `ncols` each) to reduced row echelon form over `F_p`; returns the
/// pivot columns. Zero rows are removed.
pub fn rref_prime(rows: &mut Vec<Vec<u64>>, ncols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let inv = inv_mod_prime(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                if y != 0 {
                    *x = (*x + p - mul_mod(f, y, p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of the right kernel over `F_p`, one vector per free column, each scaled so that its
/// first nonzero coordinate is 1.
pub fn kernel_prime(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = rows.to_vec();
    let pivots = rref_prime(&mut m, ncols, p);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u64; ncols];
        v[f] = 1;
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = (p - row[f]) % p;
        }
        normalize_prime(&mut v, p);
        basis.push(v);
    }
    basis
}

/// Scales `v` so that its first nonzero coordinate is 1.
pub fn normalize_prime(v: &mut [u64], p: u64) {
    if let Some(&lead) = v.iter().find(|&&x| x != 0) {
        let inv = inv_mod_prime(lead, p);
        for x in v.iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
    }
}

/// Rank over `F_p`.
pub fn rank_prime(rows: &[Vec<u64>], ncols: usize, p: u64) -> usize {
    let mut m = rows.to_vec();
    rref_prime(&mut m, ncols, p).len()
}

/// Solves `Σ c_i basis_i = target` over `F_p`.
pub fn in_span_prime(basis: &[Vec<u64>], target: &[u64], p: u64) -> bool {
    let ncols = target.len();
    let mut rows: Vec<Vec<u64>> = basis.to_vec();
    let r0 = rank_prime(&rows, ncols, p);
    rows.push(target.to_vec());
    rank_prime(&rows, ncols, p) == r0
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Bézout data for eliminating `y` against the pivot `x`, keeping the pivot row fixed when
/// `x` already divides `y`.
fn pivot_gcd(x: i128, y: i128) -> (i128, i128, i128) {
    if y % x == 0 {
        (x, 1, 0)
    } else {
        ext_gcd(x, y)
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Kernel of `rows · x ≡ 0 (mod n)` as a list of generators with their additive orders, obtained
/// from a Smith diagonalization over `Z/nZ` with tracked column operations. The kernel is the
/// direct sum of the cyclic groups generated by the returned vectors.
pub fn kernel_group(rows: &[Vec<u64>], ncols: usize, n: u64) -> Vec<(Vec<u64>, u64)> {
    let nn = n as i128;
    let md = |x: i128| x.rem_euclid(nn);
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| md(x as i128)).collect()).collect();
    let nrows = a.len();
    // v[j] is column j of the accumulated column transform
    let mut v: Vec<Vec<i128>> = (0..ncols).map(|j| (0..ncols).map(|i| i128::from(i == j)).collect()).collect();
    let mut diag: Vec<i128> = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // pivot: entry in the remaining block with the smallest gcd with n
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if a[i][j] != 0 {
                    let g = gcd_u64(a[i][j] as u64, n);
                    if best.is_none_or(|(bg, _, _)| g < bg) {
                        best = Some((g, i, j));
                    }
                    if g == 1 {
                        break;
                    }
                }
            }
            if best.is_some_and(|(g, _, _)| g == 1) {
                break;
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        v.swap(t, pj);
        loop {
            let mut changed = false;
            // clear column t below the pivot
            for i in t + 1..nrows {
                if a[i][t] == 0 {
                    continue;
                }
                let (x, y) = (a[t][t], a[i][t]);
                let (g, s, u) = pivot_gcd(x, y);
                let (xg, yg) = (x / g, y / g);
                for j in t..ncols {
                    let (p, q) = (a[t][j], a[i][j]);
                    a[t][j] = md(s * p + u * q);
                    a[i][j] = md(-yg * p + xg * q);
                }
                changed = true;
            }
            // clear row t right of the pivot
            for j in t + 1..ncols {
                if a[t][j] == 0 {
                    continue;
                }
                let (x, y) = (a[t][t], a[t][j]);
                let (g, s, u) = pivot_gcd(x, y);
                let (xg, yg) = (x / g, y / g);
                for row in a.iter_mut().skip(t) {
                    let (p, q) = (row[t], row[j]);
                    row[t] = md(s * p + u * q);
                    row[j] = md(-yg * p + xg * q);
                }
                let (ct, cj) = (v[t].clone(), v[j].clone());
                for k in 0..ncols {
                    v[t][k] = md(s * ct[k] + u * cj[k]);
                    v[j][k] = md(-yg * ct[k] + xg * cj[k]);
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }
        if a[t][t] == 0 {
            // the pivot vanished modulo n; the block may still hold entries
            if (t..nrows).all(|i| (t..ncols).all(|j| a[i][j] == 0)) {
                break;
            }
            continue;
        }
        diag.push(a[t][t]);
        t += 1;
    }
    let mut out = Vec::new();
    for (j, col) in v.iter().enumerate() {
        let d = diag.get(j).copied().unwrap_or(0);
        let order = gcd_u64(d as u64, n);
        if order == 1 {
            continue;
        }
        let scale = (n / order) as i128;
        let gen: Vec<u64> = col.iter().map(|&x| md(x * scale) as u64).collect();
        out.push((gen, order));
    }
    out
}

/// Invariant factors (nonzero diagonal of the Smith form) of an integer matrix, computed with
/// checked 128-bit arithmetic.
pub fn smith_invariants(rows: &[Vec<i64>], ncols: usize) -> Result<Vec<u128>> {
    let mut a: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let nrows = a.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        let mut best: Option<(i128, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                    best = Some((x.abs(), i, j));
                }
            }
            if best.is_some_and(|(b, _, _)| b == 1) {
                break;
            }
        }
        let Some((_, pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut changed = false;
            for i in t + 1..nrows {
                if a[i][t] == 0 {
                    continue;
                }
                let (x, y) = (a[t][t], a[i][t]);
                let (g, s, u) = pivot_gcd(x, y);
                let (xg, yg) = (x / g, y / g);
                for j in t..ncols {
                    let (p, q) = (a[t][j], a[i][j]);
                    a[t][j] = lin(s, p, u, q)?;
                    a[i][j] = lin(-yg, p, xg, q)?;
                }
                changed = true;
            }
            for j in t + 1..ncols {
                if a[t][j] == 0 {
                    continue;
                }
                let (x, y) = (a[t][t], a[t][j]);
                let (g, s, u) = pivot_gcd(x, y);
                let (xg, yg) = (x / g, y / g);
                for row in a.iter_mut().skip(t) {
                    let (p, q) = (row[t], row[j]);
                    row[t] = lin(s, p, u, q)?;
                    row[j] = lin(-yg, p, xg, q)?;
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }
        diag.push(a[t][t].unsigned_abs());
        t += 1;
    }
    // turn the diagonal into a divisibility chain
    let k = diag.len();
    for i in 0..k {
        for j in i + 1..k {
            let (x, y) = (diag[i], diag[j]);
            let g = x.gcd(&y);
            let l = x.checked_div(g).and_then(|q| q.checked_mul(y)).ok_or(Error::Overflow)?;
            diag[i] = g;
            diag[j] = l;
        }
    }
    Ok(diag)
}

fn lin(a: i128, x: i128, b: i128, y: i128) -> Result<i128> {
    let p = a.checked_mul(x).ok_or(Error::Overflow)?;
    let q = b.checked_mul(y).ok_or(Error::Overflow)?;
    p.checked_add(q).ok_or(Error::Overflow)
}

/// Largest primes below `2^62`, used for modular reconstruction.
pub fn large_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut c = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// Rational reconstruction of `r mod m` with numerator and denominator below `sqrt(m/2)`.
pub fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Exact basis of the rational right kernel of an integer matrix, in reduced form: vector `k`
/// has coordinate 1 at free column `free[k]` and 0 at the other free columns. Computed modulo
/// large primes, reconstructed, and verified exactly.
pub fn rational_kernel(rows: &[Vec<i64>], ncols: usize) -> (Vec<usize>, Vec<Vec<BigRational>>) {
    // free columns, and the kernel basis modulo each prime that produced them
    type Residues = (Vec<usize>, Vec<(u64, Vec<Vec<u64>>)>);
    let primes = large_primes(12);
    let mut best: Option<Residues> = None;
    for &p in &primes {
        let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| reduce(x, p)).collect()).collect();
        let pivots = rref_prime(&mut m, ncols, p);
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        let basis: Vec<Vec<u64>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![0u64; ncols];
                v[f] = 1;
                for (row, &pc) in m.iter().zip(&pivots) {
                    v[pc] = (p - row[f]) % p;
                }
                v
            })
            .collect();
        match &mut best {
            Some((bf, list)) if *bf == free => list.push((p, basis)),
            Some((bf, _)) if bf.len() <= free.len() => continue,
            _ => best = Some((free.clone(), vec![(p, basis)])),
        }
        let (free, list) = best.as_ref().expect("set above");
        if let Some(vecs) = reconstruct(list, ncols) {
            if vecs.iter().all(|v| in_integer_kernel(rows, v)) {
                return (free.clone(), vecs);
            }
        }
    }
    panic!("rational kernel reconstruction did not stabilize");
}

fn reconstruct(list: &[(u64, Vec<Vec<u64>>)], ncols: usize) -> Option<Vec<Vec<BigRational>>> {
    let dim = list[0].1.len();
    let mut modulus = BigInt::one();
    let mut acc: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); ncols]; dim];
    for (p, basis) in list {
        let pb = BigInt::from(*p);
        let inv = modinv_big(&modulus, &pb);
        for (k, v) in basis.iter().enumerate() {
            for (c, &x) in v.iter().enumerate() {
                // CRT: find y ≡ acc (mod modulus), y ≡ x (mod p)
                let cur = &acc[k][c];
                let diff = (BigInt::from(x) - cur).mod_floor(&pb);
                let t = (diff * &inv).mod_floor(&pb);
                acc[k][c] = cur + &modulus * t;
            }
        }
        modulus *= pb;
    }
    acc.iter()
        .map(|v| v.iter().map(|x| rational_reconstruct(x, &modulus)).collect::<Option<Vec<_>>>())
        .collect()
}

fn modinv_big(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    e.x.mod_floor(m)
}

fn in_integer_kernel(rows: &[Vec<i64>], v: &[BigRational]) -> bool {
    rows.iter().all(|r| {
        let mut s = BigRational::zero();
        for (&a, x) in r.iter().zip(v) {
            if a != 0 && !x.is_zero() {
                s += x * BigRational::from_integer(BigInt::from(a));
            }
        }
        s.is_zero()
    })
}

/// Basis of the lattice `{c ∈ Z^r : A c ≡ 0 (mod d)}` (columns of `A` indexed by `c`), as
/// integer vectors in Hermite form.
pub fn congruence_lattice(a: &[Vec<i64>], r: usize, d: u64) -> Vec<Vec<BigInt>> {
    let mut gens: Vec<Vec<BigInt>> = (0..r)
        .map(|i| (0..r).map(|j| if i == j { BigInt::from(d) } else { BigInt::zero() }).collect())
        .collect();
    if d > 1 {
        let rows: Vec<Vec<u64>> = a.iter().map(|row| row.iter().map(|&x| reduce(x, d)).collect()).collect();
        for (g, _) in kernel_group(&rows, r, d) {
            gens.push(g.iter().map(|&x| BigInt::from(x)).collect());
        }
    }
    hermite_basis(gens, r)
}

/// Row-style Hermite basis of the lattice spanned by full-rank generators in `Z^r`.
fn hermite_basis(mut gens: Vec<Vec<BigInt>>, r: usize) -> Vec<Vec<BigInt>> {
    let mut basis = Vec::new();
    for c in 0..r {
        loop {
            let nz: Vec<usize> = (0..gens.len()).filter(|&i| !gens[i][c].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let k = *nz.iter().min_by_key(|&&i| gens[i][c].abs()).expect("nonempty");
            let piv = gens[k].clone();
            for &i in &nz {
                if i != k {
                    let q = gens[i][c].div_floor(&piv[c]);
                    for j in 0..r {
                        let t = &q * &piv[j];
                        gens[i][j] -= t;
                    }
                }
            }
        }
        if let Some(k) = (0..gens.len()).find(|&i| !gens[i][c].is_zero()) {
            let mut row = gens.remove(k);
            if row[c].is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
            basis.push(row);
        }
        gens.retain(|g| g.iter().any(|x| !x.is_zero()));
    }
    basis
}

/// Least common multiple of the denominators of `v`.
pub fn denominator_lcm(vs: &[Vec<BigRational>]) -> BigInt {
    let mut l = BigInt::one();
    for v in vs {
        for x in v {
            l = l.lcm(x.denom());
        }
    }
    l
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(5) && is_prime(7) && is_prime((1 << 61) - 1));
        assert!(!is_prime(1) && !is_prime(91));
    }

    #[test]
    fn group_kernel_composite() {
        // 2x ≡ 0 (mod 4) has kernel {0, 2}
        let k = kernel_group(&[vec![2]], 1, 4);
        assert_eq!(k, vec![(vec![2], 2)]);
        // no constraints: the whole group
        let k = kernel_group(&[vec![0, 0]], 2, 6);
        assert_eq!(k.len(), 2);
        assert!(k.iter().all(|(_, o)| *o == 6));
    }

    #[test]
    fn smith_of_small_matrix() {
        let d = smith_invariants(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], 3).unwrap();
        assert_eq!(d, vec![2, 6, 12]);
    }

    #[test]
    fn reconstruction() {
        let m = BigInt::from(1_000_003u64);
        // 1/3 mod m
        let inv3 = modinv_big(&BigInt::from(3), &m);
        assert_eq!(rational_reconstruct(&inv3, &m), Some(BigRational::new(1.into(), 3.into())));
    }
}
