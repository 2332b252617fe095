//! Arrangement files and the registry of committed arrangement families, fixtures, and
//! wiring diagrams.
//!
//! Arrangement file schema:
//! `{"name": str, "field": {"min_poly": [..], "root_hint": {"re": "..", "im": ".."}},
//!   "lines": [[[a-coeffs], [b-coeffs], [c-coeffs]], ..]}` where each coefficient list holds
//! rational strings in the power basis of `α`, lowest degree first.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arrangement::{galois_conjugate, line_through, Arrangement, ProjLine, ProjPoint};
use crate::braid::WiringDoc;
use crate::combinatorics::{comb_from_arrangement, Combinatorics, CombinatoricsDoc};
use crate::error::{Error, Result};
use crate::numberfield::{FieldElement, FieldSpec, GaloisAutomorphism, NumberField};
use crate::perm::{Perm, PermGroup};
use crate::tlg::{tensor_validate, Tensor, TensorDoc};
use crate::union::{embed_tensor, maclane, maclane_lambda0, Sign};

/// Serialized arrangement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrangementDoc {
    pub name: String,
    pub field: FieldSpec,
    pub lines: Vec<[Vec<String>; 3]>,
}

/// Parses an arrangement document.
pub fn parse_arrangement(text: &str) -> Result<Arrangement> {
    let doc: ArrangementDoc = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    arrangement_from_doc(&doc)
}

pub fn arrangement_from_doc(doc: &ArrangementDoc) -> Result<Arrangement> {
    let field = NumberField::from_spec(&doc.field)?;
    let coeffs = doc
        .lines
        .iter()
        .map(|[a, b, c]| {
            Ok([
                FieldElement::from_strings(&field, a)?,
                FieldElement::from_strings(&field, b)?,
                FieldElement::from_strings(&field, c)?,
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Arrangement::from_coeffs(doc.name.clone(), &field, coeffs)
}

pub fn arrangement_to_doc(a: &Arrangement) -> ArrangementDoc {
    ArrangementDoc {
        name: a.name().to_string(),
        field: a.field().spec().clone(),
        lines: a.lines().iter().map(|l| l.covector().clone().map(|x| x.to_strings())).collect(),
    }
}

/// Pretty-printed arrangement document.
pub fn emit_arrangement(a: &Arrangement) -> String {
    serde_json::to_string_pretty(&arrangement_to_doc(a)).expect("documents serialize")
}

/// How the members of a family are obtained from the first one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Substitution {
    /// `α` is a root of unity and member `i` substitutes `α^i`.
    Power,
    /// Member `i` is the image of member 1 under the automorphism `ε ↦ ε^i` of a primitive
    /// root of unity `ε`.
    Galois,
}

/// Which pairs of members are expected to be told apart.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictRule {
    /// Members `i ≠ j` with `i + j ≢ 0` have non-homeomorphic complements.
    Pairs,
    /// Only the ordered and oriented topology is distinguished.
    OrderedOnly,
}

/// A family of Galois-conjugate arrangements with its expected invariants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDoc {
    pub name: String,
    pub description: String,
    pub field: FieldSpec,
    pub root_of_unity: u32,
    pub members: Vec<u32>,
    pub substitution: Substitution,
    /// Line equations of member 1 as polynomials in `α`.
    pub lines: Vec<[Vec<String>; 3]>,
    /// Extra line through two singular points of the listed lines, given by their supports
    /// (1-based).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extra_line_through: Option<[Vec<usize>; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub combinatorics: Option<CombinatoricsDoc>,
    pub aut_generators: Vec<String>,
    pub aut_order: u128,
    pub modulus: u64,
    pub tlg_dim: usize,
    /// Known values of the loop linking number for the normalized generator, by member.
    #[serde(default)]
    pub lln: BTreeMap<u32, u64>,
    pub lln_nonzero: bool,
    pub verdict_rule: VerdictRule,
}

/// A loaded family.
#[derive(Clone, Debug)]
pub struct Family {
    pub doc: FamilyDoc,
    pub field: NumberField,
    /// Members in the order of `doc.members`.
    pub members: Vec<(u32, Arrangement)>,
}

impl Family {
    pub fn name(&self) -> &str {
        &self.doc.name
    }

    pub fn member(&self, i: u32) -> Option<&Arrangement> {
        self.members.iter().find(|(k, _)| *k == i).map(|(_, a)| a)
    }

    /// Expected combinatorics: the listed one, or that of member 1 when none is listed.
    pub fn combinatorics(&self) -> Result<Combinatorics> {
        match &self.doc.combinatorics {
            Some(doc) => Combinatorics::from_doc(doc),
            None => Ok(comb_from_arrangement(&self.members[0].1)),
        }
    }

    pub fn expected_aut(&self, n: usize) -> Result<PermGroup> {
        let gens = self.doc.aut_generators.iter().map(|g| Perm::from_cycles(n, g)).collect::<Result<Vec<_>>>()?;
        Ok(PermGroup::generated_by(n, gens))
    }

    /// Name of member `i`.
    pub fn member_name(&self, i: u32) -> String {
        member_name(&self.doc.name, i)
    }
}

/// Name of member `i` of a family: `M1`, or `B05-2` when the family name ends with a digit.
pub fn member_name(family: &str, i: u32) -> String {
    if family.ends_with(|c: char| c.is_ascii_digit()) {
        format!("{family}-{i}")
    } else {
        format!("{family}{i}")
    }
}

/// The automorphism sending the primitive `n`-th root of unity closest to `e^{2πi/n}` to its
/// `k`-th power.
pub fn cyclotomic_automorphism(field: &NumberField, n: u32, k: u32) -> Result<GaloisAutomorphism> {
    power_automorphism(field, &primitive_root(field, n)?, k)
}

fn primitive_root(field: &NumberField, n: u32) -> Result<FieldElement> {
    field
        .primitive_root_of_unity(n)
        .ok_or_else(|| Error::Schema(format!("field has no primitive {n}-th root of unity")))
}

fn power_automorphism(field: &NumberField, eps: &FieldElement, k: u32) -> Result<GaloisAutomorphism> {
    field
        .automorphism_mapping(eps, &eps.pow(k))?
        .ok_or_else(|| Error::Schema(format!("no automorphism raising roots of unity to the power {k}")))
}

fn template_member(field: &NumberField, name: &str, lines: &[[Vec<String>; 3]], alpha: &FieldElement) -> Result<Arrangement> {
    let eval = |coeffs: &Vec<String>| -> Result<FieldElement> {
        let mut acc = field.zero();
        let mut power = field.one();
        for c in coeffs {
            let q = crate::numberfield::parse_rational(c)?;
            acc = &acc + &power.scale(&q);
            power = &power * alpha;
        }
        Ok(acc)
    };
    let coeffs = lines
        .iter()
        .map(|[a, b, c]| Ok([eval(a)?, eval(b)?, eval(c)?]))
        .collect::<Result<Vec<_>>>()?;
    Arrangement::from_coeffs(name, field, coeffs)
}

fn with_extra_line(a: &Arrangement, through: &[Vec<usize>; 2]) -> Result<Arrangement> {
    let find = |support: &Vec<usize>| {
        point_with_support(a, support)
            .ok_or_else(|| Error::Schema(format!("no singular point with support {support:?}")))
    };
    let line: ProjLine = line_through(&find(&through[0])?, &find(&through[1])?)?;
    let mut lines = a.lines().to_vec();
    lines.push(line);
    Arrangement::new(a.name(), a.field().clone(), lines)
}

/// Builds all members of a family. For `power` substitution each conjugate is cross-checked
/// against the literal substitution `α ↦ α^i`.
pub fn load_family(doc: &FamilyDoc) -> Result<Family> {
    let field = NumberField::from_spec(&doc.field)?;
    let first = template_member(&field, &member_name(&doc.name, 1), &doc.lines, &field.alpha())?;
    let eps = primitive_root(&field, doc.root_of_unity)?;
    let mut members = Vec::new();
    for &i in &doc.members {
        let sigma = power_automorphism(&field, &eps, i)?;
        let mut a = galois_conjugate(&sigma, &first)?.with_name(member_name(&doc.name, i));
        if doc.substitution == Substitution::Power {
            let literal = template_member(&field, a.name(), &doc.lines, &field.alpha().pow(i))?;
            if literal != a {
                return Err(Error::Schema(format!("{}: conjugate differs from literal substitution", a.name())));
            }
        }
        if let Some(through) = &doc.extra_line_through {
            a = with_extra_line(&a, through)?;
        }
        members.push((i, a));
    }
    Ok(Family { doc: doc.clone(), field, members })
}

macro_rules! data {
    ($path:literal) => {
        include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/data/", $path))
    };
}

const FAMILIES: &[(&str, &str)] = &[
    ("M", data!("families/M.json")),
    ("MM", data!("families/MM.json")),
    ("N", data!("families/N.json")),
    ("NN", data!("families/NN.json")),
    ("B01", data!("families/B01.json")),
    ("B02", data!("families/B02.json")),
    ("B03", data!("families/B03.json")),
    ("B04", data!("families/B04.json")),
    ("B05", data!("families/B05.json")),
    ("B06", data!("families/B06.json")),
    ("B07", data!("families/B07.json")),
    ("B08", data!("families/B08.json")),
    ("B09", data!("families/B09.json")),
    ("B10", data!("families/B10.json")),
    ("B11", data!("families/B11.json")),
    ("B12", data!("families/B12.json")),
    ("B13", data!("families/B13.json")),
    ("B14", data!("families/B14.json")),
    ("B15", data!("families/B15.json")),
    ("B16", data!("families/B16.json")),
    ("B17", data!("families/B17.json")),
    ("B18", data!("families/B18.json")),
    ("B19", data!("families/B19.json")),
    ("B20", data!("families/B20.json")),
    ("B21", data!("families/B21.json")),
    ("B22", data!("families/B22.json")),
    ("B23", data!("families/B23.json")),
    ("B24", data!("families/B24.json")),
    ("B25", data!("families/B25.json")),
    ("B26", data!("families/B26.json")),
    ("B27", data!("families/B27.json")),
    ("B28", data!("families/B28.json")),
    ("B29", data!("families/B29.json")),
];

const WIRINGS: &[(&str, &str)] = &[
    ("M1", data!("wiring/M1.json")),
    ("M3", data!("wiring/M3.json")),
    ("NN1", data!("wiring/NN1.json")),
    ("NN2", data!("wiring/NN2.json")),
    ("NN3", data!("wiring/NN3.json")),
];

const ARRANGEMENTS: &[(&str, &str)] = &[
    ("ML+", data!("arrangements/ML+.json")),
    ("ML-", data!("arrangements/ML-.json")),
];

/// Names of all committed families.
pub fn family_names() -> Vec<&'static str> {
    FAMILIES.iter().map(|(n, _)| *n).collect()
}

/// Names of the appendix families.
pub fn appendix_family_names() -> Vec<&'static str> {
    FAMILIES.iter().map(|(n, _)| *n).filter(|n| n.starts_with('B')).collect()
}

pub fn family_doc(name: &str) -> Result<FamilyDoc> {
    let text = FAMILIES
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| *t)
        .ok_or_else(|| Error::Schema(format!("unknown family '{name}'")))?;
    serde_json::from_str(text).map_err(|e| Error::Schema(format!("{name}: {e}")))
}

pub fn family(name: &str) -> Result<Family> {
    load_family(&family_doc(name)?)
}

/// Names of every committed arrangement: family members and standalone files.
pub fn arrangement_names() -> Result<Vec<String>> {
    let mut out = Vec::new();
    for name in family_names() {
        let doc = family_doc(name)?;
        out.extend(doc.members.iter().map(|&i| member_name(name, i)));
    }
    out.extend(ARRANGEMENTS.iter().map(|(n, _)| n.to_string()));
    Ok(out)
}

/// Loads a committed arrangement by name (family member such as `M1`, `NN3`, `B05-2`, or a
/// standalone name such as `ML+`).
pub fn arrangement(name: &str) -> Result<Arrangement> {
    if let Some((_, text)) = ARRANGEMENTS.iter().find(|(n, _)| *n == name) {
        return parse_arrangement(text);
    }
    for fam in family_names() {
        let Some(rest) = name.strip_prefix(fam) else { continue };
        let rest = rest.strip_prefix('-').unwrap_or(rest);
        let Ok(i) = rest.parse::<u32>() else { continue };
        let doc = family_doc(fam)?;
        if member_name(fam, i) != name || !doc.members.contains(&i) {
            continue;
        }
        let f = load_family(&doc)?;
        return Ok(f.member(i).expect("member listed").clone());
    }
    Err(Error::Schema(format!("unknown arrangement '{name}'")))
}

/// Committed wiring diagram for an arrangement, if any.
pub fn wiring(name: &str) -> Option<WiringDoc> {
    WIRINGS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, t)| serde_json::from_str(t).expect("committed wiring files parse"))
}

pub fn wiring_names() -> Vec<&'static str> {
    WIRINGS.iter().map(|(n, _)| *n).collect()
}

/// The generator of the tensor linking group of the ten-line combinatorics modulo 5, as
/// tabulated edge by edge.
pub fn lambda0_fixture() -> TensorDoc {
    serde_json::from_str(data!("fixtures/lambda0_C.json")).expect("fixture parses")
}

/// Tabulated upper-linking numbers of the ten-line arrangement, per edge.
#[derive(Clone, Debug, Deserialize)]
pub struct UlkFixture {
    pub edges: BTreeMap<String, Vec<i64>>,
    /// Edges whose tabulated value was simplified with the relation `Σ m_L = 0`.
    pub reduced_by_relation: Vec<String>,
}

pub fn ulk_fixture() -> UlkFixture {
    serde_json::from_str(data!("fixtures/ulk_M1.json")).expect("fixture parses")
}

/// Singular point of `a` with the given 1-based support.
pub fn point_with_support(a: &Arrangement, support: &[usize]) -> Option<ProjPoint> {
    let zero: Vec<usize> = support.iter().map(|x| x - 1).collect();
    a.singular_points().into_iter().find(|p| p.support == zero).map(|p| p.point)
}

/// A committed generator that applies to `c` modulo `n`, with its name: the tabulated
/// ten-line generator (pushed forward along the first ten lines when `c` has more lines) or
/// the normalized MacLane tensor.
pub fn reference_tensor(c: &Combinatorics, n: u64) -> Option<(String, Tensor)> {
    match n {
        5 if c.n() >= 10 => {
            let base = family("M").ok()?.combinatorics().ok()?;
            let t = Tensor::from_doc(&base, &lambda0_fixture()).ok()?;
            let map: Vec<usize> = (0..base.n()).collect();
            let e = embed_tensor(&t, &map, c).ok()?;
            (!e.is_zero() && tensor_validate(c, &e).is_empty()).then(|| ("lambda0".to_string(), e))
        }
        3 => {
            let ml = comb_from_arrangement(&maclane(Sign::Plus).ok()?);
            if &ml != c {
                return None;
            }
            Some(("lambda0".to_string(), maclane_lambda0().ok()?))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let a = arrangement("M1").unwrap();
        let b = parse_arrangement(&emit_arrangement(&a)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_bad_files() {
        let dup = r#"{"name":"d","field":{"min_poly":[0,1],"root_hint":{"re":"0","im":"0"}},
            "lines":[[["1"],[],[]],[[],["1"],[]],[["2"],[],[]]]}"#;
        assert!(matches!(parse_arrangement(dup), Err(Error::DuplicateLine(1, 3))));
        let pencil = r#"{"name":"p","field":{"min_poly":[0,1],"root_hint":{"re":"0","im":"0"}},
            "lines":[[["1"],[],[]],[[],["1"],[]],[["1"],["1"],[]],[["1"],["2"],[]]]}"#;
        assert!(matches!(parse_arrangement(pencil), Err(Error::PencilRejected)));
        assert!(matches!(parse_arrangement("{"), Err(Error::Schema(_))));
    }
}
