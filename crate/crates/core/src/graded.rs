//! Filtered pieces of `M_V` and of hom spaces `{ p in Q : p V1 ⊆ V2 }`, and
//! their images in the associated graded ring.
//!
//! A hom-space element is written `p = u ∘ g⁻¹` with `g` the conductor of the
//! source subspace and `u` in the Weyl algebra. Then `p (g f) = u f`, so
//! `p V1 ⊆ V2` splits into
//!
//! * `u Q[x] ⊆ V2`, and
//! * `u (v / g) ∈ V2` (in particular a polynomial) for each `v` in the low
//!   basis of `V1`.
//!
//! Both families are linear in the coefficients of `u` over a monomial basis
//! and only finitely many of them are independent, so each piece is the
//! nullspace of an exact rational matrix.

use std::fmt;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{binomial, factorial, falling, Poly, QMatrix, Rat, RatFunc};
use crate::subspace::SubspaceSpec;
use crate::weyl::{monomial_basis, SymbolPoly, Weight, WeylEl};

/// `u ∘ g⁻¹` in the quotient division ring, acting by `f ↦ u (f / g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QFraction {
    pub u: WeylEl,
    pub g: Poly,
}

impl QFraction {
    pub fn wdegree(&self, w: Weight) -> Option<i64> {
        let g = self.g.degree().unwrap_or(0) as i64;
        self.u.wdegree(w).map(|d| d - w.w1 as i64 * g)
    }

    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let over_g = RatFunc::new(f.numer().clone(), f.denom() * &self.g).expect("g is nonzero");
        self.u.apply_ratfunc(&over_g)
    }
}

impl fmt::Display for QFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) o ({})^-1", self.u, self.g)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    Module,
    Hom,
}

#[derive(Clone, Debug, PartialEq)]
pub enum PieceBasis {
    Module(Vec<WeylEl>),
    Hom(Vec<QFraction>),
}

/// Basis of a filtered piece of weighted degree `<= k`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedPiece {
    pub kind: PieceKind,
    pub k: i64,
    pub weight: Weight,
    /// Names of the source and target subspaces (the source is `None` for module pieces).
    pub source: Option<String>,
    pub target: String,
    pub basis: PieceBasis,
}

impl GradedPiece {
    pub fn dim(&self) -> usize {
        match &self.basis {
            PieceBasis::Module(b) => b.len(),
            PieceBasis::Hom(b) => b.len(),
        }
    }

    /// Numerators `u` and the common conductor degree.
    fn numerators(&self) -> (Vec<&WeylEl>, usize) {
        match &self.basis {
            PieceBasis::Module(b) => (b.iter().collect(), 0),
            PieceBasis::Hom(b) => (
                b.iter().map(|q| &q.u).collect(),
                b.first().map_or(0, |q| q.g.degree().unwrap_or(0)),
            ),
        }
    }

    pub fn to_report(&self) -> PieceReport {
        let basis = match &self.basis {
            PieceBasis::Module(b) => b
                .iter()
                .map(|u| BasisEntry::Module(u.to_string()))
                .collect(),
            PieceBasis::Hom(b) => b
                .iter()
                .map(|q| BasisEntry::Hom {
                    u: q.u.to_string(),
                    g: q.g.to_string(),
                })
                .collect(),
        };
        PieceReport {
            kind: self.kind,
            k: self.k,
            weight: [self.weight.w1, self.weight.w2],
            dim: self.dim(),
            basis,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PieceReport {
    pub kind: PieceKind,
    pub k: i64,
    pub weight: [u32; 2],
    pub dim: usize,
    pub basis: Vec<BasisEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum BasisEntry {
    Module(String),
    Hom { u: String, g: String },
}

/// Linear system whose nullspace is a filtered piece.
struct ConditionSystem {
    monomials: Vec<(u32, u32)>,
    matrix: QMatrix,
}

impl ConditionSystem {
    /// Unknowns: coefficients of `u` with `wdegree(u) <= bound`.
    fn build(source: Option<&SubspaceSpec>, target: &SubspaceSpec, w: Weight, bound: i64) -> Self {
        let monomials = monomial_basis(w, bound);
        let b_max = monomials.iter().map(|&(_, b)| b).max().unwrap_or(0);
        let mut rows = target_rows(target, &monomials, b_max);
        if let Some(src) = source {
            rows.extend(pole_rows(src, target, &monomials, b_max));
        }
        let matrix = QMatrix::from_rows(monomials.len(), rows);
        ConditionSystem { monomials, matrix }
    }

    fn solutions(&self) -> Vec<WeylEl> {
        self.matrix
            .nullspace()
            .iter()
            .map(|v| WeylEl::from_coords(&self.monomials, v))
            .collect()
    }

    fn solution_dim(&self) -> usize {
        self.monomials.len() - self.matrix.rank()
    }
}

/// Rows for `u Q[x] ⊆ V`. For a functional of order `<= d` at `c` only the
/// inputs `(x-c)^s` with `s <= d + b_max` matter: for larger `s`, every term
/// of `u (x-c)^s` is divisible by `(x-c)^{d+1}`.
fn target_rows(target: &SubspaceSpec, monomials: &[(u32, u32)], b_max: u32) -> Vec<Vec<Rat>> {
    let max_a = monomials.iter().map(|&(a, _)| a).max().unwrap_or(0);
    let mut rows = Vec::new();
    for pc in target.points() {
        let d = pc.max_order();
        let c_pows: Vec<Rat> = std::iter::successors(Some(Rat::one()), |p| Some(p * &pc.point))
            .take(max_a as usize + 1)
            .collect();
        for s in 0..=d + b_max {
            for l in &pc.functionals {
                rows.push(
                    monomials
                        .iter()
                        .map(|&(a, b)| functional_on_shifted(l, &c_pows, a, b, s))
                        .collect(),
                );
            }
        }
    }
    rows
}

/// `ℓ(x^a d^b (x-c)^s)` via the Taylor expansion of `x^a` at `c`.
fn functional_on_shifted(
    l: &crate::subspace::Functional,
    c_pows: &[Rat],
    a: u32,
    b: u32,
    s: u32,
) -> Rat {
    if b > s {
        return Rat::zero();
    }
    let t = s - b;
    let mut acc = Rat::zero();
    for (&e, coeff) in &l.terms {
        if e < t || e - t > a {
            continue;
        }
        let i = e - t;
        let v = binomial(a, i) * factorial(e);
        acc += coeff * &c_pows[(a - i) as usize] * Rat::from_integer(v);
    }
    if acc.is_zero() {
        return acc;
    }
    acc * Rat::from_integer(falling(s, b))
}

/// Rows for `u (v/g)` being a polynomial in the target, for each low-basis
/// vector `v` of the source.
///
/// With `h` the product of the distinct linear factors of `g`, the `b`-th
/// derivative of `v/g` is `N_b / (g h^b)` where `N_0 = v` and
/// `N_{b+1} = h N_b' - N_b L_b`, `L_b = (g h^b)' h / (g h^b)`. All columns are
/// put over the common denominator `G = g h^{b_max}`; the remainders modulo
/// `G` must vanish and the target functionals must vanish on the quotients.
fn pole_rows(
    source: &SubspaceSpec,
    target: &SubspaceSpec,
    monomials: &[(u32, u32)],
    b_max: u32,
) -> Vec<Vec<Rat>> {
    if source.low_basis().is_empty() {
        return Vec::new();
    }
    let g = source.conductor();
    let h = source.radical();
    let denom = g * &h.pow(b_max);
    let deg_denom = denom.degree().unwrap_or(0);
    let log_terms: Vec<(u32, Poly)> = source
        .points()
        .iter()
        .enumerate()
        .map(|(j, pc)| {
            let others = source
                .points()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .fold(Poly::one(), |acc, (_, q)| {
                    &acc * &Poly::linear_power(&q.point, 1)
                });
            (pc.max_order() + 1, others)
        })
        .collect();
    let target_fs: Vec<_> = target.functionals().collect();

    let mut rows = Vec::new();
    for v in source.low_basis() {
        // numerators[b] = N_b h^{b_max - b}
        let mut numerators = Vec::with_capacity(b_max as usize + 1);
        let mut n_b = v.clone();
        for b in 0..=b_max {
            numerators.push(&n_b * &h.pow(b_max - b));
            let l_b = log_terms.iter().fold(Poly::zero(), |acc, (e, others)| {
                &acc + &others.scale(&Rat::from_integer((e + b).into()))
            });
            n_b = &(&h * &n_b.derivative()) - &(&n_b * &l_b);
        }
        let columns: Vec<(Poly, Poly)> = monomials
            .par_iter()
            .map(|&(a, b)| {
                numerators[b as usize]
                    .shift(a as usize)
                    .divmod(&denom)
                    .expect("nonzero denominator")
            })
            .collect();
        for r in 0..deg_denom {
            rows.push(columns.iter().map(|(_, rem)| rem.coeff(r)).collect());
        }
        for l in &target_fs {
            rows.push(columns.iter().map(|(q, _)| l.apply(q)).collect());
        }
    }
    rows
}

/// Basis of `{ u in A : wdegree(u) <= k, u Q[x] ⊆ V }`.
pub fn module_piece(v: &SubspaceSpec, w: Weight, k: i64) -> GradedPiece {
    let basis = if k < 0 {
        Vec::new()
    } else {
        ConditionSystem::build(None, v, w, k).solutions()
    };
    GradedPiece {
        kind: PieceKind::Module,
        k,
        weight: w,
        source: None,
        target: v.name().to_owned(),
        basis: PieceBasis::Module(basis),
    }
}

pub fn module_piece_dim(v: &SubspaceSpec, w: Weight, k: i64) -> usize {
    if k < 0 {
        return 0;
    }
    ConditionSystem::build(None, v, w, k).solution_dim()
}

fn hom_bound(v1: &SubspaceSpec, w: Weight, k: i64) -> i64 {
    k + w.w1 as i64 * v1.conductor_degree() as i64
}

/// Basis of `{ p in Q : wdegree(p) <= k, p V1 ⊆ V2 }` as fractions `u ∘ g⁻¹`
/// with `g` the conductor of `V1`.
pub fn hom_piece(v1: &SubspaceSpec, v2: &SubspaceSpec, w: Weight, k: i64) -> GradedPiece {
    let bound = hom_bound(v1, w, k);
    let basis = if bound < 0 {
        Vec::new()
    } else {
        ConditionSystem::build(Some(v1), v2, w, bound)
            .solutions()
            .into_iter()
            .map(|u| QFraction {
                u,
                g: v1.conductor().clone(),
            })
            .collect()
    };
    GradedPiece {
        kind: PieceKind::Hom,
        k,
        weight: w,
        source: Some(v1.name().to_owned()),
        target: v2.name().to_owned(),
        basis: PieceBasis::Hom(basis),
    }
}

pub fn hom_piece_dim(v1: &SubspaceSpec, v2: &SubspaceSpec, w: Weight, k: i64) -> usize {
    let bound = hom_bound(v1, w, k);
    if bound < 0 {
        return 0;
    }
    ConditionSystem::build(Some(v1), v2, w, bound).solution_dim()
}

/// Endomorphism piece `D_k` of `End(M_V)`.
pub fn endo_piece(v: &SubspaceSpec, w: Weight, k: i64) -> GradedPiece {
    hom_piece(v, v, w, k)
}

/// Basis of the image of piece `k` in the `k`-th graded component, as numerator
/// forms `top(u)` of weighted degree `k + w1 deg g` (the symbol is
/// `top(u) / X^{deg g}`). Checks that its dimension is `dim_k - dim_{k-1}`.
pub fn gr_symbol_space(piece: &GradedPiece, below: &GradedPiece) -> Result<Vec<SymbolPoly>> {
    if piece.weight != below.weight
        || piece.kind != below.kind
        || piece.source != below.source
        || piece.target != below.target
        || below.k != piece.k - 1
    {
        return Err(Error::Mismatch(format!(
            "pieces at k={} and k={} do not belong to one filtration",
            piece.k, below.k
        )));
    }
    let w = piece.weight;
    let (nums, g_deg) = piece.numerators();
    let top_deg = piece.k + w.w1 as i64 * g_deg as i64;
    let tops = nums
        .iter()
        .map(|u| u.top_component(w, top_deg))
        .collect::<Result<Vec<_>>>()?;
    let mut keys: Vec<(u32, u32)> = tops
        .iter()
        .flat_map(|t| t.terms().keys().copied())
        .collect();
    keys.sort_unstable();
    keys.dedup();
    let rows: Vec<Vec<Rat>> = tops
        .iter()
        .map(|t| {
            keys.iter()
                .map(|k| t.terms().get(k).cloned().unwrap_or_else(Rat::zero))
                .collect()
        })
        .collect();
    let rref = QMatrix::from_rows(keys.len(), rows).rref();
    let expected = piece.dim() - below.dim();
    if rref.rank() != expected {
        return Err(Error::Mismatch(format!(
            "graded component at k={} has dimension {} but dim_k - dim_(k-1) = {}",
            piece.k,
            rref.rank(),
            expected
        )));
    }
    Ok(rref
        .rows
        .into_iter()
        .map(|row| SymbolPoly::from_terms(keys.iter().copied().zip(row)))
        .collect())
}

/// Whether every symbol of `D_k` lies in `gr A`, i.e. each numerator form is
/// divisible by `X^{deg g}`.
pub fn gr_inclusion_check(v: &SubspaceSpec, w: Weight, k: i64) -> Result<bool> {
    let (piece, below) = rayon::join(|| endo_piece(v, w, k), || endo_piece(v, w, k - 1));
    symbols_in_gr_a(&piece, &below)
}

pub(crate) fn symbols_in_gr_a(piece: &GradedPiece, below: &GradedPiece) -> Result<bool> {
    let g_deg = piece.numerators().1 as u32;
    Ok(gr_symbol_space(piece, below)?
        .iter()
        .all(|s| s.divisible_by_x_power(g_deg)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use crate::weyl::dim_a;

    fn cusp() -> SubspaceSpec {
        SubspaceSpec::monomial(Some("cusp"), &[1]).unwrap()
    }

    fn el(s: &str) -> WeylEl {
        WeylEl::parse(s).unwrap()
    }

    #[test]
    fn cusp_module_pieces() {
        let w = Weight::STANDARD;
        let p2 = module_piece(&cusp(), w, 2);
        assert_eq!(p2.basis, PieceBasis::Module(vec![el("x^2"), el("x*d - 1")]));
        assert_eq!(module_piece(&cusp(), w, 3).dim(), 5);
        assert_eq!(module_piece_dim(&cusp(), w, 3), 5);
        assert_eq!(module_piece_dim(&cusp(), w, -1), 0);
    }

    #[test]
    fn trivial_pieces_are_filtered_a() {
        let t = SubspaceSpec::trivial();
        for (w1, w2) in [(1, 1), (2, 3)] {
            let w = Weight::new(w1, w2).unwrap();
            for k in 0..6 {
                assert_eq!(module_piece_dim(&t, w, k), dim_a(w, k));
                assert_eq!(hom_piece_dim(&t, &t, w, k), dim_a(w, k));
            }
        }
    }

    #[test]
    fn cusp_endomorphism_pieces() {
        let w = Weight::STANDARD;
        let v = cusp();
        let d1 = endo_piece(&v, w, 1);
        assert_eq!(d1.dim(), 1);
        let d2 = endo_piece(&v, w, 2);
        assert_eq!(d2.dim(), 4);
        let target = QFraction {
            u: el("x^2*d^2 + 2*x*d - 2"),
            g: Poly::from_ints(&[0, 0, 1]),
        };
        let PieceBasis::Hom(b) = &d2.basis else {
            panic!()
        };
        assert!(b.contains(&target));
        assert_eq!(target.wdegree(w), Some(2));
    }

    #[test]
    fn negative_and_zero_degree_endomorphisms() {
        for gaps in [&[1][..], &[1, 2], &[1, 3]] {
            let v = SubspaceSpec::monomial(None, gaps).unwrap();
            for (w1, w2) in [(1, 1), (2, 1), (2, 3)] {
                let w = Weight::new(w1, w2).unwrap();
                assert_eq!(hom_piece_dim(&v, &v, w, -1), 0);
                assert_eq!(hom_piece_dim(&v, &v, w, 0), 1);
            }
        }
    }

    #[test]
    fn symbol_spaces() {
        let w = Weight::STANDARD;
        let v = cusp();
        let s2 = gr_symbol_space(&endo_piece(&v, w, 2), &endo_piece(&v, w, 1)).unwrap();
        assert_eq!(s2.len(), 3);
        for s in &s2 {
            assert_eq!(s.homogeneous_degree(w), Some(4));
            assert!(s.divisible_by_x_power(2));
        }
        let x2y2 = SymbolPoly::from_terms([((2, 2), rat(1))]);
        let rows: Vec<Vec<Rat>> = s2
            .iter()
            .chain(std::iter::once(&x2y2))
            .map(|s| {
                [(4, 0), (3, 1), (2, 2)]
                    .iter()
                    .map(|k| s.terms().get(k).cloned().unwrap_or_else(Rat::zero))
                    .collect()
            })
            .collect();
        assert_eq!(
            QMatrix::from_rows(3, rows).rank(),
            3,
            "X^2 Y^2 lies in the symbol span"
        );

        let t = SubspaceSpec::trivial();
        let s1 = gr_symbol_space(&endo_piece(&t, w, 1), &endo_piece(&t, w, 0)).unwrap();
        assert_eq!(s1.len(), 2);

        let s0 = gr_symbol_space(&endo_piece(&v, w, 0), &endo_piece(&v, w, -1)).unwrap();
        assert_eq!(s0, vec![SymbolPoly::from_terms([((2, 0), rat(1))])]);
    }

    #[test]
    fn symbol_space_rejects_mismatched_pieces() {
        let w = Weight::STANDARD;
        let v = cusp();
        let t = SubspaceSpec::trivial();
        assert!(gr_symbol_space(&endo_piece(&v, w, 2), &endo_piece(&t, w, 1)).is_err());
        assert!(gr_symbol_space(
            &endo_piece(&v, w, 2),
            &endo_piece(&v, Weight::new(1, 2).unwrap(), 1)
        )
        .is_err());
        assert!(gr_symbol_space(&endo_piece(&v, w, 3), &endo_piece(&v, w, 1)).is_err());
    }

    #[test]
    fn gr_inclusion_examples() {
        assert!(gr_inclusion_check(&cusp(), Weight::STANDARD, 2).unwrap());
        assert!(gr_inclusion_check(&cusp(), Weight::new(1, 2).unwrap(), 3).unwrap());
        let t = SubspaceSpec::trivial();
        assert!(gr_inclusion_check(&t, Weight::new(2, 3).unwrap(), 4).unwrap());
    }

    #[test]
    fn weight_rescaling() {
        let v = cusp();
        let w1 = Weight::STANDARD;
        let w2 = Weight::new(2, 2).unwrap();
        for k in 0..5 {
            assert_eq!(
                hom_piece_dim(&v, &v, w1, k),
                hom_piece_dim(&v, &v, w2, 2 * k)
            );
            assert_eq!(module_piece_dim(&v, w1, k), module_piece_dim(&v, w2, 2 * k));
        }
    }
}
