//! Projective lines and points over a number field, singular points of an arrangement,
//! projectivities and Galois conjugation.
//!
//! Line indices are 0-based in the API; files and reports use 1-based labels.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::numberfield::{FieldElement, GaloisAutomorphism, NumberField};
use crate::perm::Perm;

/// A homogeneous triple normalized so that its first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Triple([FieldElement; 3]);

impl Triple {
    pub fn new(coords: [FieldElement; 3]) -> Result<Self> {
        let lead = coords.iter().find(|c| !c.is_zero()).ok_or(Error::ZeroVector)?;
        let inv = lead.inv()?;
        let [a, b, c] = coords;
        Ok(Triple([&a * &inv, &b * &inv, &c * &inv]))
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.0
    }

    pub fn field(&self) -> &NumberField {
        self.0[0].field()
    }

    fn cross(&self, other: &Triple) -> [FieldElement; 3] {
        let [a, b, c] = &self.0;
        let [x, y, z] = &other.0;
        [&(b * z) - &(c * y), &(c * x) - &(a * z), &(a * y) - &(b * x)]
    }

    pub fn dot(&self, other: &Triple) -> FieldElement {
        let [a, b, c] = &self.0;
        let [x, y, z] = &other.0;
        &(&(a * x) + &(b * y)) + &(c * z)
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} : {} : {}]", self.0[0], self.0[1], self.0[2])
    }
}

/// The line `a x + b y + c z = 0`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjLine(pub Triple);

/// The point `[x : y : z]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjPoint(pub Triple);

impl ProjLine {
    pub fn new(a: FieldElement, b: FieldElement, c: FieldElement) -> Result<Self> {
        Ok(ProjLine(Triple::new([a, b, c])?))
    }

    pub fn covector(&self) -> &[FieldElement; 3] {
        self.0.coords()
    }

    pub fn contains(&self, p: &ProjPoint) -> bool {
        self.0.dot(&p.0).is_zero()
    }
}

impl ProjPoint {
    pub fn new(x: FieldElement, y: FieldElement, z: FieldElement) -> Result<Self> {
        Ok(ProjPoint(Triple::new([x, y, z])?))
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        self.0.coords()
    }
}

/// Intersection point of two distinct lines.
pub fn intersect(l1: &ProjLine, l2: &ProjLine) -> Result<ProjPoint> {
    if l1 == l2 {
        return Err(Error::IdenticalLines);
    }
    Ok(ProjPoint(Triple::new(l1.0.cross(&l2.0))?))
}

/// The line through two distinct points.
pub fn line_through(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine> {
    if p == q {
        return Err(Error::IdenticalPoints);
    }
    Ok(ProjLine(Triple::new(p.0.cross(&q.0))?))
}

/// A singular point together with the sorted indices of the lines through it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoint {
    pub point: ProjPoint,
    pub support: Vec<usize>,
}

/// An ordered list of pairwise distinct lines, not all concurrent, at least three of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    name: String,
    field: NumberField,
    lines: Vec<ProjLine>,
}

impl Arrangement {
    pub fn new(name: impl Into<String>, field: NumberField, lines: Vec<ProjLine>) -> Result<Self> {
        if lines.len() < 3 {
            return Err(Error::TooFewLines(lines.len()));
        }
        for l in &lines {
            if l.0.field() != &field {
                return Err(Error::FieldMismatch);
            }
        }
        let mut seen: HashMap<&ProjLine, usize> = HashMap::new();
        for (i, l) in lines.iter().enumerate() {
            if let Some(&j) = seen.get(l) {
                return Err(Error::DuplicateLine(j + 1, i + 1));
            }
            seen.insert(l, i);
        }
        let a = Arrangement { name: name.into(), field, lines };
        let p = intersect(&a.lines[0], &a.lines[1])?;
        if a.lines.iter().all(|l| l.contains(&p)) {
            return Err(Error::PencilRejected);
        }
        Ok(a)
    }

    /// Builds an arrangement from integer-or-field coefficient triples.
    pub fn from_coeffs(
        name: impl Into<String>,
        field: &NumberField,
        coeffs: Vec<[FieldElement; 3]>,
    ) -> Result<Self> {
        let lines = coeffs
            .into_iter()
            .map(|[a, b, c]| ProjLine::new(a, b, c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(name, field.clone(), lines)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn lines(&self) -> &[ProjLine] {
        &self.lines
    }

    pub fn line(&self, i: usize) -> &ProjLine {
        &self.lines[i]
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// Singular points with their supports, ordered lexicographically by support.
    pub fn singular_points(&self) -> Vec<SingularPoint> {
        let n = self.lines.len();
        let mut index: HashMap<ProjPoint, usize> = HashMap::new();
        let mut points: Vec<(ProjPoint, Vec<usize>)> = Vec::new();
        let mut assigned = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                if assigned[i][j] {
                    continue;
                }
                let p = intersect(&self.lines[i], &self.lines[j]).expect("distinct lines");
                let k = *index.entry(p.clone()).or_insert_with(|| {
                    let support: Vec<usize> = (0..n).filter(|&l| self.lines[l].contains(&p)).collect();
                    points.push((p, support));
                    points.len() - 1
                });
                let support = &points[k].1;
                for (a, &x) in support.iter().enumerate() {
                    for &y in &support[a + 1..] {
                        assigned[x][y] = true;
                    }
                }
            }
        }
        let mut out: Vec<SingularPoint> =
            points.into_iter().map(|(point, support)| SingularPoint { point, support }).collect();
        out.sort_by(|a, b| a.support.cmp(&b.support));
        out
    }

    /// `σ·A`: the `i`-th line of the result is line `σ(i)` of `A`.
    pub fn permuted(&self, sigma: &Perm) -> Result<Arrangement> {
        if sigma.degree() != self.len() {
            return Err(Error::DegreeMismatch { expected: self.len(), got: sigma.degree() });
        }
        let lines = (0..self.len()).map(|i| self.lines[sigma.image(i)].clone()).collect();
        Ok(Arrangement { name: self.name.clone(), field: self.field.clone(), lines })
    }
}

/// A 3×3 matrix over a number field acting on points by `p ↦ M p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat3(pub [[FieldElement; 3]; 3]);

impl Mat3 {
    pub fn identity(field: &NumberField) -> Self {
        let e = |i: usize, j: usize| if i == j { field.one() } else { field.zero() };
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| e(i, j))))
    }

    pub fn from_int(field: &NumberField, m: [[i64; 3]; 3]) -> Self {
        Mat3(std::array::from_fn(|i| std::array::from_fn(|j| field.from_int(m[i][j]))))
    }

    pub fn det(&self) -> FieldElement {
        let m = &self.0;
        let minor = |r1: usize, r2: usize, c1: usize, c2: usize| &(&m[r1][c1] * &m[r2][c2]) - &(&m[r1][c2] * &m[r2][c1]);
        let t0 = &m[0][0] * &minor(1, 2, 1, 2);
        let t1 = &m[0][1] * &minor(1, 2, 0, 2);
        let t2 = &m[0][2] * &minor(1, 2, 0, 1);
        &(&t0 - &t1) + &t2
    }

    pub fn inverse(&self) -> Result<Mat3> {
        let d = self.det();
        if d.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let dinv = d.inv()?;
        let m = &self.0;
        let cof = |i: usize, j: usize| {
            let r: Vec<usize> = (0..3).filter(|&k| k != i).collect();
            let c: Vec<usize> = (0..3).filter(|&k| k != j).collect();
            let v = &(&m[r[0]][c[0]] * &m[r[1]][c[1]]) - &(&m[r[0]][c[1]] * &m[r[1]][c[0]]);
            if (i + j).is_multiple_of(2) {
                v
            } else {
                -v
            }
        };
        // inverse = adjugate / det, adjugate[i][j] = cofactor[j][i]
        Ok(Mat3(std::array::from_fn(|i| std::array::from_fn(|j| &cof(j, i) * &dinv))))
    }

    pub fn mul(&self, other: &Mat3) -> Mat3 {
        let a = &self.0;
        let b = &other.0;
        Mat3(std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let mut s = &a[i][0] * &b[0][j];
                s = &s + &(&a[i][1] * &b[1][j]);
                &s + &(&a[i][2] * &b[2][j])
            })
        }))
    }

    pub fn apply_point(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let v = p.coords();
        let m = &self.0;
        let img: [FieldElement; 3] = std::array::from_fn(|i| {
            &(&(&m[i][0] * &v[0]) + &(&m[i][1] * &v[1])) + &(&m[i][2] * &v[2])
        });
        ProjPoint::new(img[0].clone(), img[1].clone(), img[2].clone())
    }

    /// Image of a line under the point map `M`: the covector `ℓ M^{-1}`.
    pub fn apply_line(&self, l: &ProjLine) -> Result<ProjLine> {
        let inv = self.inverse()?;
        apply_covector(&inv, l)
    }
}

/// Covector `ℓ ↦ ℓ N` (row vector times matrix).
pub fn apply_covector(n: &Mat3, l: &ProjLine) -> Result<ProjLine> {
    let v = l.covector();
    let m = &n.0;
    let img: [FieldElement; 3] =
        std::array::from_fn(|j| &(&(&v[0] * &m[0][j]) + &(&v[1] * &m[1][j])) + &(&v[2] * &m[2][j]));
    let [a, b, c] = img;
    ProjLine::new(a, b, c)
}

/// Image of an arrangement under the projectivity `p ↦ M p`.
pub fn apply_projectivity(m: &Mat3, a: &Arrangement) -> Result<Arrangement> {
    let inv = m.inverse()?;
    let lines = a.lines.iter().map(|l| apply_covector(&inv, l)).collect::<Result<Vec<_>>>()?;
    Arrangement::new(a.name.clone(), a.field.clone(), lines)
}

/// Coefficient-wise image of an arrangement under a Galois automorphism.
pub fn galois_conjugate(sigma: &GaloisAutomorphism, a: &Arrangement) -> Result<Arrangement> {
    if sigma.field() != &a.field {
        return Err(Error::FieldMismatch);
    }
    let lines = a
        .lines
        .iter()
        .map(|l| {
            let [x, y, z] = l.covector();
            ProjLine::new(sigma.apply(x)?, sigma.apply(y)?, sigma.apply(z)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Arrangement::new(a.name.clone(), a.field.clone(), lines)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> NumberField {
        NumberField::rationals()
    }

    fn line(f: &NumberField, a: i64, b: i64, c: i64) -> ProjLine {
        ProjLine::new(f.from_int(a), f.from_int(b), f.from_int(c)).unwrap()
    }

    fn point(f: &NumberField, a: i64, b: i64, c: i64) -> ProjPoint {
        ProjPoint::new(f.from_int(a), f.from_int(b), f.from_int(c)).unwrap()
    }

    #[test]
    fn axes_intersections() {
        let f = q();
        assert_eq!(intersect(&line(&f, 1, 0, 0), &line(&f, 0, 1, 0)).unwrap(), point(&f, 0, 0, 1));
        assert_eq!(intersect(&line(&f, 0, 0, 1), &line(&f, 1, 0, 0)).unwrap(), point(&f, 0, 1, 0));
        assert_eq!(intersect(&line(&f, 1, 0, 0), &line(&f, 2, 0, 0)), Err(Error::IdenticalLines));
    }

    #[test]
    fn lines_through_points() {
        let f = q();
        assert_eq!(line_through(&point(&f, 0, 0, 1), &point(&f, 0, 1, 0)).unwrap(), line(&f, 1, 0, 0));
        assert_eq!(line_through(&point(&f, 1, 0, 0), &point(&f, 0, 1, 0)).unwrap(), line(&f, 0, 0, 1));
        let p = point(&f, 3, -1, 2);
        let r = point(&f, 1, 5, 7);
        let l = line_through(&p, &r).unwrap();
        assert!(l.contains(&p) && l.contains(&r));
    }

    #[test]
    fn triangle_and_validation() {
        let f = q();
        let tri = Arrangement::new("t", f.clone(), vec![line(&f, 1, 0, 0), line(&f, 0, 1, 0), line(&f, 0, 0, 1)]).unwrap();
        let sp = tri.singular_points();
        assert_eq!(sp.iter().map(|s| s.support.clone()).collect::<Vec<_>>(), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        let dup = Arrangement::new("d", f.clone(), vec![line(&f, 1, 0, 0), line(&f, 0, 1, 0), line(&f, 2, 0, 0)]);
        assert_eq!(dup, Err(Error::DuplicateLine(1, 3)));
        let pencil = Arrangement::new(
            "p",
            f.clone(),
            vec![line(&f, 1, 0, 0), line(&f, 0, 1, 0), line(&f, 1, 1, 0), line(&f, 1, -1, 0)],
        );
        assert_eq!(pencil, Err(Error::PencilRejected));
    }

    #[test]
    fn projectivity_inverse_and_identity() {
        let f = q();
        let m = Mat3::from_int(&f, [[1, 2, 0], [0, 1, 3], [1, 0, 1]]);
        assert_eq!(m.mul(&m.inverse().unwrap()), Mat3::identity(&f));
        let tri = Arrangement::new("t", f.clone(), vec![line(&f, 1, 0, 0), line(&f, 0, 1, 0), line(&f, 0, 0, 1)]).unwrap();
        assert_eq!(apply_projectivity(&Mat3::identity(&f), &tri).unwrap(), tri);
        let img = apply_projectivity(&m, &tri).unwrap();
        for sp in tri.singular_points() {
            let p = m.apply_point(&sp.point).unwrap();
            for &l in &sp.support {
                assert!(img.line(l).contains(&p));
            }
        }
        let sing = Mat3::from_int(&f, [[1, 2, 3], [2, 4, 6], [0, 0, 1]]);
        assert_eq!(sing.inverse(), Err(Error::SingularMatrix));
    }
}
