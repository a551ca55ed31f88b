//! Subspaces `V` of `Q[x]` cut out by finitely many linear conditions, each
//! supported at a single rational point. A subspace determines the right
//! ideal `M_V = { u in A : u Q[x] ⊆ V }` of the Weyl algebra.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{factorial, fmt_rat, parse_rat, Poly, QMatrix, Rat};

/// `f ↦ Σ coeff_e f^{(e)}(point)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Functional {
    pub point: Rat,
    pub terms: BTreeMap<u32, Rat>,
}

impl Functional {
    /// Zero coefficients are dropped; errors if nothing remains.
    pub fn new(point: Rat, terms: impl IntoIterator<Item = (u32, Rat)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert_with(Rat::zero) += c;
        }
        map.retain(|_, c: &mut Rat| !c.is_zero());
        if map.is_empty() {
            return Err(Error::InvalidSpec(format!(
                "empty functional at point {}",
                fmt_rat(&point)
            )));
        }
        Ok(Functional { point, terms: map })
    }

    pub fn max_order(&self) -> u32 {
        *self.terms.keys().next_back().expect("nonempty functional")
    }

    pub fn apply(&self, f: &Poly) -> Rat {
        let taylor = f.taylor(&self.point);
        self.terms
            .iter()
            .filter_map(|(&e, c)| {
                let t = taylor.get(e as usize)?;
                Some(c * t * Rat::from_integer(factorial(e)))
            })
            .sum()
    }
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("{}*f^({e})({})", fmt_rat(c), fmt_rat(&self.point)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The independent functionals supported at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointConditions {
    pub point: Rat,
    pub functionals: Vec<Functional>,
}

impl PointConditions {
    pub fn max_order(&self) -> u32 {
        self.functionals
            .iter()
            .map(Functional::max_order)
            .max()
            .unwrap_or(0)
    }
}

/// Input document, as read from and written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpecDoc {
    Monomial(MonomialDoc),
    Conditions(ConditionsDoc),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonomialDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub gaps: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub points: Vec<PointDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointDoc {
    pub c: String,
    pub functionals: Vec<Vec<TermDoc>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub order: u32,
    pub coeff: String,
}

/// A validated subspace with its conductor and a basis of `V / gQ[x]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceSpec {
    name: String,
    points: Vec<PointConditions>,
    conductor: Poly,
    low_basis: Vec<Poly>,
    warnings: Vec<String>,
    doc: SpecDoc,
}

impl SubspaceSpec {
    /// `V = Q[x]`, presenting `M = A`.
    pub fn trivial() -> Self {
        Self::from_doc(SpecDoc::Monomial(MonomialDoc {
            name: Some("trivial".into()),
            gaps: Vec::new(),
        }))
        .expect("trivial spec is valid")
    }

    /// `V = span{x^s : s not in gaps}`, i.e. conditions `f^{(γ)}(0) = 0`.
    pub fn monomial(name: Option<&str>, gaps: &[u32]) -> Result<Self> {
        Self::from_doc(SpecDoc::Monomial(MonomialDoc {
            name: name.map(str::to_owned),
            gaps: gaps.to_vec(),
        }))
    }

    pub fn parse(json: &str) -> Result<Self> {
        let doc: SpecDoc =
            serde_json::from_str(json).map_err(|e| Error::Parse(format!("spec document: {e}")))?;
        Self::from_doc(doc)
    }

    pub fn from_doc(doc: SpecDoc) -> Result<Self> {
        let mut warnings = Vec::new();
        let (name, raw): (String, Vec<Functional>) = match &doc {
            SpecDoc::Monomial(m) => {
                let gaps: BTreeSet<u32> = m.gaps.iter().copied().collect();
                if gaps.contains(&0) {
                    warnings.push("0 is a gap: V does not contain the constants".to_string());
                }
                if let Some((s, t)) = semigroup_violation(&gaps) {
                    warnings.push(format!(
                        "complement of the gap set is not closed under addition ({s} + {t} is a gap)"
                    ));
                }
                let name = m.name.clone().unwrap_or_else(|| {
                    let g: Vec<String> = gaps.iter().map(u32::to_string).collect();
                    format!("gaps{{{}}}", g.join(","))
                });
                let fs = gaps
                    .iter()
                    .map(|&g| Functional::new(Rat::zero(), [(g, Rat::one())]))
                    .collect::<Result<_>>()?;
                (name, fs)
            }
            SpecDoc::Conditions(c) => {
                let mut fs = Vec::new();
                for p in &c.points {
                    let point = parse_rat(&p.c)?;
                    for f in &p.functionals {
                        let terms = f
                            .iter()
                            .map(|t| Ok((t.order, parse_rat(&t.coeff)?)))
                            .collect::<Result<Vec<_>>>()?;
                        fs.push(Functional::new(point.clone(), terms)?);
                    }
                }
                (c.name.clone().unwrap_or_else(|| "conditions".into()), fs)
            }
        };

        let requested = raw.len();
        let points = group_independent(raw);
        let kept: usize = points.iter().map(|p| p.functionals.len()).sum();
        if kept < requested {
            warnings.push(format!(
                "{} linearly dependent condition(s) dropped",
                requested - kept
            ));
        }
        let mut conductor = Poly::one();
        for p in &points {
            conductor = &conductor * &Poly::linear_power(&p.point, p.max_order() + 1);
        }
        let mut spec = SubspaceSpec {
            name,
            points,
            conductor,
            low_basis: Vec::new(),
            warnings,
            doc,
        };
        spec.low_basis = spec.compute_low_basis();
        Ok(spec)
    }

    fn compute_low_basis(&self) -> Vec<Poly> {
        let m = self.conductor.degree().unwrap_or(0);
        let rows: Vec<Vec<Rat>> = self
            .functionals()
            .map(|f| {
                (0..m)
                    .map(|i| f.apply(&Poly::monomial(Rat::one(), i)))
                    .collect()
            })
            .collect();
        QMatrix::from_rows(m, rows)
            .nullspace()
            .into_iter()
            .map(Poly::from_coeffs)
            .collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = name.to_owned();
        match &mut self.doc {
            SpecDoc::Monomial(m) => m.name = Some(name.to_owned()),
            SpecDoc::Conditions(c) => c.name = Some(name.to_owned()),
        }
        self
    }

    pub fn points(&self) -> &[PointConditions] {
        &self.points
    }

    pub fn functionals(&self) -> impl Iterator<Item = &Functional> {
        self.points.iter().flat_map(|p| p.functionals.iter())
    }

    pub fn num_conditions(&self) -> usize {
        self.points.iter().map(|p| p.functionals.len()).sum()
    }

    /// `g = Π (x - c_j)^{d_j + 1}`; satisfies `g Q[x] ⊆ V`.
    pub fn conductor(&self) -> &Poly {
        &self.conductor
    }

    pub fn conductor_degree(&self) -> usize {
        self.conductor.degree().unwrap_or(0)
    }

    /// Product of the distinct `(x - c_j)`.
    pub fn radical(&self) -> Poly {
        self.points.iter().fold(Poly::one(), |acc, p| {
            &acc * &Poly::linear_power(&p.point, 1)
        })
    }

    /// Basis of `V / gQ[x]` by polynomials of degree below `deg g`.
    pub fn low_basis(&self) -> &[Poly] {
        &self.low_basis
    }

    pub fn is_trivial(&self) -> bool {
        self.points.is_empty()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn doc(&self) -> &SpecDoc {
        &self.doc
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.functionals().all(|l| l.apply(f).is_zero())
    }
}

/// Merges functionals by point (in first-seen order) and keeps a maximal
/// independent subset at each point, preserving input order.
fn group_independent(raw: Vec<Functional>) -> Vec<PointConditions> {
    let mut groups: Vec<PointConditions> = Vec::new();
    for f in raw {
        match groups.iter_mut().find(|g| g.point == f.point) {
            Some(g) => g.functionals.push(f),
            None => groups.push(PointConditions {
                point: f.point.clone(),
                functionals: vec![f],
            }),
        }
    }
    for g in &mut groups {
        let width = g.max_order() as usize + 1;
        let mut kept: Vec<Functional> = Vec::new();
        let mut rows: Vec<Vec<Rat>> = Vec::new();
        for f in std::mem::take(&mut g.functionals) {
            let mut row = vec![Rat::zero(); width];
            for (&e, c) in &f.terms {
                row[e as usize] = c.clone();
            }
            rows.push(row);
            if QMatrix::from_rows(width, rows.clone()).rank() == rows.len() {
                kept.push(f);
            } else {
                rows.pop();
            }
        }
        g.functionals = kept;
    }
    groups
}

fn semigroup_violation(gaps: &BTreeSet<u32>) -> Option<(u32, u32)> {
    let top = *gaps.iter().next_back()?;
    for s in (0..=top).filter(|s| !gaps.contains(s)) {
        for t in (s..=top).filter(|t| !gaps.contains(t)) {
            if gaps.contains(&(s + t)) {
                return Some((s, t));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn cusp() -> SubspaceSpec {
        SubspaceSpec::parse(r#"{"kind":"monomial","gaps":[1]}"#).unwrap()
    }

    #[test]
    fn cusp_spec() {
        let v = cusp();
        assert_eq!(v.num_conditions(), 1);
        assert_eq!(v.conductor(), &Poly::from_ints(&[0, 0, 1]));
        assert_eq!(v.low_basis(), &[Poly::one()]);
        assert_eq!(v.name(), "gaps{1}");
        assert!(v.warnings().is_empty());
    }

    #[test]
    fn trivial_spec() {
        let v = SubspaceSpec::parse(r#"{"kind":"monomial","gaps":[]}"#).unwrap();
        assert!(v.is_trivial());
        assert_eq!(v.conductor(), &Poly::one());
        assert!(v.low_basis().is_empty());
        for f in [Poly::zero(), Poly::x(), Poly::from_ints(&[5, -2, 0, 7])] {
            assert!(v.contains(&f));
        }
    }

    #[test]
    fn two_point_conductor() {
        let v = SubspaceSpec::parse(
            r#"{"kind":"conditions","points":[
                {"c":"0","functionals":[[{"order":1,"coeff":"1"}]]},
                {"c":"1","functionals":[[{"order":1,"coeff":"1"}]]}]}"#,
        )
        .unwrap();
        // x^2 (x-1)^2
        assert_eq!(v.conductor(), &Poly::from_ints(&[0, 0, 1, -2, 1]));
        assert_eq!(v.low_basis().len(), 2);
    }

    #[test]
    fn gaps_conductor() {
        let v = SubspaceSpec::monomial(None, &[1, 3]).unwrap();
        assert_eq!(v.conductor(), &Poly::monomial(Rat::one(), 4));
        assert_eq!(v.low_basis().len(), 2);
    }

    #[test]
    fn membership() {
        let v = cusp();
        assert!(v.contains(&Poly::from_ints(&[0, 0, 1])));
        assert!(!v.contains(&Poly::x()));
        assert!(v.contains(&Poly::zero()));
    }

    #[test]
    fn functional_application() {
        let d0 = Functional::new(rat(0), [(1, rat(1))]).unwrap();
        assert_eq!(d0.apply(&Poly::from_ints(&[0, 3, 1])), rat(3));
        assert_eq!(d0.apply(&Poly::from_ints(&[0, 0, 1])), rat(0));
        let l = Functional::new(rat(1), [(0, rat(1)), (1, rat(1))]).unwrap();
        assert_eq!(l.apply(&Poly::x()), rat(2));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(SubspaceSpec::parse(r#"{"kind":"monomial","gaps":[1],"extra":1}"#).is_err());
        assert!(SubspaceSpec::parse(r#"{"kind":"other"}"#).is_err());
        assert!(SubspaceSpec::parse("not json").is_err());
        let empty = r#"{"kind":"conditions","points":[{"c":"0","functionals":[[]]}]}"#;
        assert!(matches!(
            SubspaceSpec::parse(empty),
            Err(Error::InvalidSpec(_))
        ));
        let zero = r#"{"kind":"conditions","points":[{"c":"0","functionals":[[{"order":2,"coeff":"0"}]]}]}"#;
        assert!(matches!(
            SubspaceSpec::parse(zero),
            Err(Error::InvalidSpec(_))
        ));
        let bad_rat = r#"{"kind":"conditions","points":[{"c":"1/0","functionals":[[{"order":1,"coeff":"1"}]]}]}"#;
        assert!(SubspaceSpec::parse(bad_rat).is_err());
    }

    #[test]
    fn merges_points_and_drops_dependent_functionals() {
        let v = SubspaceSpec::parse(
            r#"{"kind":"conditions","points":[
                {"c":"1/2","functionals":[[{"order":1,"coeff":"1"}],[{"order":1,"coeff":"-3"}]]},
                {"c":"2/4","functionals":[[{"order":0,"coeff":"1"}]]}]}"#,
        )
        .unwrap();
        assert_eq!(v.points().len(), 1);
        assert_eq!(v.num_conditions(), 2);
        assert_eq!(v.conductor_degree(), 2);
        assert!(v.low_basis().is_empty());
    }

    #[test]
    fn dependent_conditions_warn() {
        let v = SubspaceSpec::parse(
            r#"{"kind":"conditions","points":[{"c":"2","functionals":[
                [{"order":1,"coeff":"1"}],[{"order":1,"coeff":"-3"}]]}]}"#,
        )
        .unwrap();
        assert_eq!(v.num_conditions(), 1);
        assert_eq!(v.warnings().len(), 1);
    }

    #[test]
    fn semigroup_warning() {
        assert!(SubspaceSpec::monomial(None, &[1, 2])
            .unwrap()
            .warnings()
            .is_empty());
        assert!(!SubspaceSpec::monomial(None, &[2])
            .unwrap()
            .warnings()
            .is_empty());
        assert!(!SubspaceSpec::monomial(None, &[0])
            .unwrap()
            .warnings()
            .is_empty());
    }

    #[test]
    fn conductor_multiples_lie_in_v() {
        let specs = [
            cusp(),
            SubspaceSpec::monomial(None, &[1, 2, 3]).unwrap(),
            SubspaceSpec::parse(
                r#"{"kind":"conditions","points":[
                    {"c":"0","functionals":[[{"order":2,"coeff":"1"},{"order":1,"coeff":"1"}]]},
                    {"c":"1","functionals":[[{"order":1,"coeff":"1"}]]}]}"#,
            )
            .unwrap(),
        ];
        for v in &specs {
            let g = v.conductor();
            let m = v.conductor_degree();
            for s in 0..=2 * m + 5 {
                assert!(v.contains(&g.shift(s)));
            }
            for b in v.low_basis() {
                assert!(v.contains(b));
                assert!(b.degree().unwrap_or(0) < m);
            }
            // independent modulo g: low_basis has degree < deg g, so plain rank suffices
            let rows: Vec<Vec<Rat>> = v
                .low_basis()
                .iter()
                .map(|b| (0..m).map(|i| b.coeff(i)).collect())
                .collect();
            let n = rows.len();
            assert_eq!(QMatrix::from_rows(m, rows).rank(), n);
            assert_eq!(n + v.num_conditions(), m);
        }
    }
}
