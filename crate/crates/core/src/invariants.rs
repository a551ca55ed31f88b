//! Hilbert sequences, shift-normalized quadratic fits, and the invariants built
//! from them: the LM-invariant `p_D`, the second Chern class `n`, the relative
//! invariant `p_12`, and the identity checks relating them.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graded::{endo_piece, gr_symbol_space, hom_piece_dim, module_piece_dim, GradedPiece};
use crate::subspace::SubspaceSpec;
use crate::weyl::{dim_a, monomial_basis, Weight};

/// Weights used by `verify` when none are given.
pub const DEFAULT_WEIGHTS: [Weight; 4] = [
    Weight { w1: 1, w2: 1 },
    Weight { w1: 1, w2: 2 },
    Weight { w1: 2, w2: 1 },
    Weight { w1: 2, w2: 3 },
];

/// Number of trailing entries that must agree before a sequence counts as stable.
pub const STABLE_RUN: usize = 3;

#[derive(Clone, Copy, Debug)]
pub enum Source<'a> {
    A,
    Module(&'a SubspaceSpec),
    Hom(&'a SubspaceSpec, &'a SubspaceSpec),
}

impl Source<'_> {
    fn describe(&self) -> SourceDesc {
        match self {
            Source::A => SourceDesc::A,
            Source::Module(v) => SourceDesc::Module {
                spec: v.name().to_owned(),
            },
            Source::Hom(v1, v2) => SourceDesc::Hom {
                source: v1.name().to_owned(),
                target: v2.name().to_owned(),
            },
        }
    }

    fn dim(&self, w: Weight, k: i64) -> usize {
        match self {
            Source::A => dim_a(w, k),
            Source::Module(v) => module_piece_dim(v, w, k),
            Source::Hom(v1, v2) => hom_piece_dim(v1, v2, w, k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SourceDesc {
    A,
    Module { spec: String },
    Hom { source: String, target: String },
}

impl fmt::Display for SourceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SourceDesc::A => write!(f, "A"),
            SourceDesc::Module { spec } => write!(f, "M({spec})"),
            SourceDesc::Hom { source, target } => write!(f, "Hom({source}, {target})"),
        }
    }
}

/// Dimensions of the filtered pieces for `k_min <= k <= k_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertSeq {
    pub weight: Weight,
    pub k_min: i64,
    pub k_max: i64,
    pub values: Vec<usize>,
    pub source: SourceDesc,
}

impl HilbertSeq {
    pub fn from_values(source: SourceDesc, weight: Weight, k_min: i64, values: Vec<usize>) -> Self {
        HilbertSeq {
            weight,
            k_min,
            k_max: k_min + values.len() as i64 - 1,
            values,
            source,
        }
    }

    pub fn at(&self, k: i64) -> Option<usize> {
        let i = k.checked_sub(self.k_min)?;
        usize::try_from(i)
            .ok()
            .and_then(|i| self.values.get(i).copied())
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.values.windows(2).all(|p| p[0] <= p[1])
    }
}

pub fn hilbert_seq(source: Source<'_>, w: Weight, k_min: i64, k_max: i64) -> Result<HilbertSeq> {
    if k_min > k_max {
        return Err(Error::Precondition(format!(
            "empty degree range {k_min}..={k_max}"
        )));
    }
    let values = (k_min..=k_max)
        .into_par_iter()
        .map(|k| source.dim(w, k))
        .collect();
    Ok(HilbertSeq::from_values(source.describe(), w, k_min, values))
}

/// `(k + a + 1)(k + a + 2)/2 - constant`.
pub fn shifted_quadratic(k: i64, shift: i64, constant: i64) -> i64 {
    let t = k + shift;
    (t + 1) * (t + 2) / 2 - constant
}

/// A fit `h(k) = (k + shift + 1)(k + shift + 2)/2 - constant`, exact on `window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitResult {
    pub shift: i64,
    pub constant: i64,
    pub window: [i64; 2],
    pub exact: bool,
}

impl FitResult {
    pub fn window_len(&self) -> i64 {
        self.window[1] - self.window[0] + 1
    }
}

/// Solves for the shift from the last difference and the constant from the last
/// value, then extends the window backwards while the formula stays exact.
pub fn fit_euler(h: &HilbertSeq) -> Result<FitResult> {
    let what = h.source.to_string();
    let not_stable = || Error::NotStabilized {
        what: what.clone(),
        k_max: h.k_max,
    };
    if h.values.len() < 5 {
        return Err(not_stable());
    }
    let val = |k: i64| h.at(k).expect("in range") as i64;
    let top = h.k_max;
    let shift = val(top) - val(top - 1) - top - 1;
    let constant = shifted_quadratic(top, shift, 0) - val(top);
    let mut start = top;
    while start > h.k_min && shifted_quadratic(start - 1, shift, constant) == val(start - 1) {
        start -= 1;
    }
    let fit = FitResult {
        shift,
        constant,
        window: [start, top],
        exact: top - start + 1 >= STABLE_RUN as i64,
    };
    if fit.exact {
        return Ok(fit);
    }
    let second_diff = val(top) - 2 * val(top - 1) + val(top - 2);
    if second_diff <= 0 {
        Err(Error::NonPolynomial { what })
    } else {
        Err(not_stable())
    }
}

/// `p(k) = dim A_k - dim D_k` at one weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LmResult {
    pub weight: Weight,
    pub p_d: i64,
    /// First degree of the final constant run of `p_sequence`.
    pub stable_from: i64,
    pub p_sequence: Vec<i64>,
    pub hilbert_d: HilbertSeq,
}

pub fn codimension_sequence(d: &HilbertSeq) -> Vec<i64> {
    (d.k_min..=d.k_max)
        .zip(&d.values)
        .map(|(k, &v)| dim_a(d.weight, k) as i64 - v as i64)
        .collect()
}

fn lm_from_sequence(d: HilbertSeq, what: &str) -> Result<LmResult> {
    let p = codimension_sequence(&d);
    let last = *p.last().expect("nonempty");
    let run = p.iter().rev().take_while(|&&v| v == last).count();
    if run < STABLE_RUN {
        return Err(Error::NotStabilized {
            what: format!("{what}: p(k) at weight ({})", d.weight),
            k_max: d.k_max,
        });
    }
    Ok(LmResult {
        weight: d.weight,
        p_d: last,
        stable_from: d.k_max - run as i64 + 1,
        p_sequence: p,
        hilbert_d: d,
    })
}

pub fn lm_invariant(v: &SubspaceSpec, w: Weight, k_max: i64) -> Result<LmResult> {
    require_kmax(k_max)?;
    let d = hilbert_seq(Source::Hom(v, v), w, 0, k_max)?;
    lm_from_sequence(d, v.name())
}

fn require_kmax(k_max: i64) -> Result<()> {
    if k_max < 4 {
        return Err(Error::Precondition(format!(
            "kmax must be at least 4, got {k_max}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernResult {
    pub n: i64,
    pub shift: i64,
    pub fit: FitResult,
    pub hilbert_m: HilbertSeq,
}

fn chern_from_sequence(m: HilbertSeq) -> Result<ChernResult> {
    let fit = fit_euler(&m)?;
    if fit.constant < 0 {
        return Err(Error::NegativeChern {
            what: m.source.to_string(),
            constant: fit.constant,
        });
    }
    Ok(ChernResult {
        n: fit.constant,
        shift: fit.shift,
        fit,
        hilbert_m: m,
    })
}

/// Second Chern class from the Hilbert function of `M_V` at weight (1,1).
pub fn chern_n(v: &SubspaceSpec, k_max: i64) -> Result<ChernResult> {
    require_kmax(k_max)?;
    chern_from_sequence(hilbert_seq(Source::Module(v), Weight::STANDARD, 0, k_max)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeResult {
    pub source: String,
    pub target: String,
    pub k_max: i64,
    pub p_12: i64,
    pub shift: i64,
    pub n_1: i64,
    pub n_2: i64,
    pub verdict: bool,
    pub fit: FitResult,
    pub hilbert_hom: HilbertSeq,
}

/// Codimension `p_12` of the graded hom space, read off the shift-normalized
/// fit of `Hom(M_1, M_2)`, compared against `n_1 + n_2`.
pub fn relative_invariant(
    v1: &SubspaceSpec,
    v2: &SubspaceSpec,
    k_max: i64,
) -> Result<RelativeResult> {
    require_kmax(k_max)?;
    let w = Weight::STANDARD;
    let ((hom, c1), c2) = rayon::join(
        || {
            rayon::join(
                || hilbert_seq(Source::Hom(v1, v2), w, 0, k_max),
                || chern_n(v1, k_max),
            )
        },
        || chern_n(v2, k_max),
    );
    let (hom, c1, c2) = (hom?, c1?, c2?);
    let fit = fit_euler(&hom)?;
    Ok(RelativeResult {
        source: v1.name().to_owned(),
        target: v2.name().to_owned(),
        k_max,
        p_12: fit.constant,
        shift: fit.shift,
        n_1: c1.n,
        n_2: c2.n,
        verdict: fit.constant == c1.n + c2.n,
        fit,
        hilbert_hom: hom,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualResult {
    pub constant: i64,
    pub shift: i64,
    pub n: i64,
    pub verdict: bool,
    pub hilbert_dual: HilbertSeq,
}

/// Compares the fitted constant of `Hom(M_V, A)` with `n`.
pub fn dual_check(v: &SubspaceSpec, k_max: i64) -> Result<DualResult> {
    require_kmax(k_max)?;
    let trivial = SubspaceSpec::trivial();
    let (dual, chern) = rayon::join(
        || hilbert_seq(Source::Hom(v, &trivial), Weight::STANDARD, 0, k_max),
        || chern_n(v, k_max),
    );
    dual_from_parts(dual?, chern?.n)
}

fn dual_from_parts(dual: HilbertSeq, n: i64) -> Result<DualResult> {
    let fit = fit_euler(&dual)?;
    Ok(DualResult {
        constant: fit.constant,
        shift: fit.shift,
        n,
        verdict: fit.constant == n,
        hilbert_dual: dual,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightIndependence {
    pub per_weight: Vec<LmResult>,
    pub verdict: bool,
}

pub fn weight_independence(
    v: &SubspaceSpec,
    weights: &[Weight],
    k_max: i64,
) -> Result<WeightIndependence> {
    if weights.len() < 2 {
        return Err(Error::Precondition(
            "weight independence needs at least two weights".into(),
        ));
    }
    let per_weight = weights
        .par_iter()
        .map(|&w| lm_invariant(v, w, k_max))
        .collect::<Result<Vec<_>>>()?;
    let verdict = per_weight.windows(2).all(|p| p[0].p_d == p[1].p_d);
    Ok(WeightIndependence {
        per_weight,
        verdict,
    })
}

/// Monomials of weighted degree exactly `k`, counted directly.
fn gr_a_dim(w: Weight, k: i64) -> usize {
    monomial_basis(w, k)
        .into_iter()
        .filter(|&(a, b)| w.of(a, b) == k)
        .count()
}

/// Endomorphism pieces `D_{-1}, ..., D_{k_max}` with their bases, from which
/// the graded components are read off.
pub struct EndoTower {
    pub weight: Weight,
    pub k_max: i64,
    pieces: Vec<GradedPiece>,
}

impl EndoTower {
    pub fn compute(v: &SubspaceSpec, w: Weight, k_max: i64) -> Self {
        let pieces = (-1..=k_max)
            .into_par_iter()
            .map(|k| endo_piece(v, w, k))
            .collect();
        EndoTower {
            weight: w,
            k_max,
            pieces,
        }
    }

    fn piece(&self, k: i64) -> &GradedPiece {
        &self.pieces[(k + 1) as usize]
    }

    pub fn hilbert(&self, name: &str) -> HilbertSeq {
        HilbertSeq::from_values(
            SourceDesc::Hom {
                source: name.to_owned(),
                target: name.to_owned(),
            },
            self.weight,
            0,
            (0..=self.k_max).map(|k| self.piece(k).dim()).collect(),
        )
    }

    /// Dimension of the graded component `D_k / D_{k-1}` and whether its
    /// symbols all lie in `gr A`, for `0 <= k <= k_max`.
    pub fn graded(&self) -> Result<Vec<(usize, bool)>> {
        (0..=self.k_max)
            .into_par_iter()
            .map(|k| {
                let piece = self.piece(k);
                let syms = gr_symbol_space(piece, self.piece(k - 1))?;
                let g_deg = match &piece.basis {
                    crate::graded::PieceBasis::Hom(b) => {
                        b.first().map_or(0, |q| q.g.degree().unwrap_or(0)) as u32
                    }
                    crate::graded::PieceBasis::Module(_) => 0,
                };
                Ok((
                    syms.len(),
                    syms.iter().all(|s| s.divisible_by_x_power(g_deg)),
                ))
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TelescopeResult {
    pub weight: Weight,
    /// `Σ_{i<=k} (dim gr_i A - dim gr_i D)` from the graded components.
    pub lhs: Vec<i64>,
    /// `dim A_k - dim D_k` from the filtered pieces.
    pub rhs: Vec<i64>,
    pub verdict: bool,
}

fn telescope(w: Weight, gr_d: &[usize], d: &HilbertSeq) -> TelescopeResult {
    let mut lhs = Vec::with_capacity(gr_d.len());
    let mut acc = 0i64;
    for (k, &g) in (0i64..).zip(gr_d) {
        acc += gr_a_dim(w, k) as i64 - g as i64;
        lhs.push(acc);
    }
    let rhs = codimension_sequence(d);
    TelescopeResult {
        weight: w,
        verdict: lhs == rhs,
        lhs,
        rhs,
    }
}

pub fn telescoping_check(v: &SubspaceSpec, w: Weight, k_max: i64) -> Result<TelescopeResult> {
    let tower = EndoTower::compute(v, w, k_max);
    let gr: Vec<usize> = tower.graded()?.into_iter().map(|(d, _)| d).collect();
    Ok(telescope(w, &gr, &tower.hilbert(v.name())))
}

/// Per-weight section of a [`Report`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightReport {
    pub weight: [u32; 2],
    pub hilbert_d: Vec<usize>,
    pub p_sequence: Vec<i64>,
    #[serde(rename = "p_D")]
    pub p_d: i64,
    pub gr_dims: Vec<usize>,
    pub gr_inclusion_failures: Vec<i64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    /// `p_D = 2n`.
    pub t2: bool,
    /// The `D` sequence fits with shift 0 and constant `p_D`.
    pub d_fit: bool,
    pub dual: bool,
    pub weights: bool,
    pub gr_inclusion: bool,
    pub telescoping: bool,
    pub monotone: bool,
}

impl Verdicts {
    pub fn all(&self) -> bool {
        self.t2
            && self.d_fit
            && self.dual
            && self.weights
            && self.gr_inclusion
            && self.telescoping
            && self.monotone
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub weight: [u32; 2],
    pub kmax: i64,
    #[serde(rename = "hilbert_M")]
    pub hilbert_m: Vec<usize>,
    #[serde(rename = "hilbert_D")]
    pub hilbert_d: Vec<usize>,
    pub shift_a: i64,
    pub n: i64,
    #[serde(rename = "p_D")]
    pub p_d: i64,
    #[serde(rename = "p_12", skip_serializing_if = "Option::is_none", default)]
    pub p_12: Option<i64>,
    pub hilbert_dual: Vec<usize>,
    pub dual_shift: i64,
    pub dual_constant: i64,
    pub weights: Vec<WeightReport>,
    pub verdicts: Verdicts,
    pub ok: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_ms: Option<u64>,
}

impl Report {
    /// Recomputes every verdict from the sequences embedded in the report.
    pub fn recompute_verdicts(&self) -> Result<Verdicts> {
        let std_w = Weight::STANDARD;
        let m = HilbertSeq::from_values(
            SourceDesc::Module {
                spec: self.name.clone(),
            },
            std_w,
            0,
            self.hilbert_m.clone(),
        );
        let chern = chern_from_sequence(m)?;
        let d_seq = |values: &Vec<usize>, w: Weight| {
            HilbertSeq::from_values(
                SourceDesc::Hom {
                    source: self.name.clone(),
                    target: self.name.clone(),
                },
                w,
                0,
                values.clone(),
            )
        };
        let d = d_seq(&self.hilbert_d, std_w);
        let lm = lm_from_sequence(d.clone(), &self.name)?;
        let d_fit = fit_euler(&d)?;
        let dual = dual_from_parts(
            HilbertSeq::from_values(
                SourceDesc::Hom {
                    source: self.name.clone(),
                    target: "trivial".into(),
                },
                std_w,
                0,
                self.hilbert_dual.clone(),
            ),
            chern.n,
        )?;
        let mut p_values = vec![lm.p_d];
        let mut telescoping = true;
        let mut monotone = lm.p_sequence.windows(2).all(|p| p[0] <= p[1]);
        let mut gr_inclusion = true;
        for wr in &self.weights {
            let w = Weight::new(wr.weight[0], wr.weight[1])?;
            let d = d_seq(&wr.hilbert_d, w);
            let lm_w = lm_from_sequence(d.clone(), &self.name)?;
            p_values.push(lm_w.p_d);
            monotone &= lm_w.p_sequence.windows(2).all(|p| p[0] <= p[1]);
            telescoping &= telescope(w, &wr.gr_dims, &d).verdict;
            gr_inclusion &= wr.gr_inclusion_failures.is_empty();
        }
        Ok(Verdicts {
            t2: lm.p_d == 2 * chern.n,
            d_fit: d_fit.shift == 0 && d_fit.constant == lm.p_d,
            dual: dual.verdict,
            weights: p_values.windows(2).all(|p| p[0] == p[1]),
            gr_inclusion,
            telescoping,
            monotone,
        })
    }
}

/// Full verification of one subspace: `p_D = 2n` at weight (1,1), the fit of
/// the `D` sequence, duality, and per-weight LM-invariants with graded
/// inclusion, telescoping and monotonicity.
pub fn verify(v: &SubspaceSpec, k_max: i64, weights: &[Weight]) -> Result<Report> {
    require_kmax(k_max)?;
    let started = Instant::now();
    let std_w = Weight::STANDARD;
    let mut weights: Vec<Weight> = weights.to_vec();
    if !weights.contains(&std_w) {
        weights.insert(0, std_w);
    }

    let (chern, dual) = rayon::join(|| chern_n(v, k_max), || dual_check(v, k_max));
    let (chern, dual) = (chern?, dual?);

    let sections = weights
        .par_iter()
        .map(|&w| -> Result<(WeightReport, LmResult, bool)> {
            let tower = EndoTower::compute(v, w, k_max);
            let graded = tower.graded()?;
            let lm = lm_from_sequence(tower.hilbert(v.name()), v.name())?;
            let gr_dims: Vec<usize> = graded.iter().map(|&(d, _)| d).collect();
            let failures = (0i64..)
                .zip(&graded)
                .filter(|(_, (_, ok))| !ok)
                .map(|(k, _)| k)
                .collect();
            let tel = telescope(w, &gr_dims, &lm.hilbert_d);
            Ok((
                WeightReport {
                    weight: [w.w1, w.w2],
                    hilbert_d: lm.hilbert_d.values.clone(),
                    p_sequence: lm.p_sequence.clone(),
                    p_d: lm.p_d,
                    gr_dims,
                    gr_inclusion_failures: failures,
                },
                lm,
                tel.verdict,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let std_lm = &sections
        .iter()
        .find(|(_, lm, _)| lm.weight == std_w)
        .expect("standard weight present")
        .1;
    let d_fit = fit_euler(&std_lm.hilbert_d)?;
    let verdicts = Verdicts {
        t2: std_lm.p_d == 2 * chern.n,
        d_fit: d_fit.shift == 0 && d_fit.constant == std_lm.p_d,
        dual: dual.verdict,
        weights: sections.windows(2).all(|p| p[0].1.p_d == p[1].1.p_d),
        gr_inclusion: sections
            .iter()
            .all(|(r, _, _)| r.gr_inclusion_failures.is_empty()),
        telescoping: sections.iter().all(|(_, _, t)| *t),
        monotone: sections
            .iter()
            .all(|(_, lm, _)| lm.p_sequence.windows(2).all(|p| p[0] <= p[1])),
    };
    let hilbert_d = std_lm.hilbert_d.values.clone();
    let p_d = std_lm.p_d;
    let weights = sections
        .into_iter()
        .filter(|(_, lm, _)| lm.weight != std_w)
        .map(|(r, _, _)| r)
        .collect();
    Ok(Report {
        name: v.name().to_owned(),
        weight: [1, 1],
        kmax: k_max,
        hilbert_m: chern.hilbert_m.values,
        hilbert_d,
        shift_a: chern.shift,
        n: chern.n,
        p_d,
        p_12: None,
        hilbert_dual: dual.hilbert_dual.values,
        dual_shift: dual.shift,
        dual_constant: dual.constant,
        weights,
        ok: verdicts.all(),
        verdicts,
        elapsed_ms: Some(started.elapsed().as_millis() as u64),
    })
}

/// `p_D = 2n` at weight (1,1) only.
pub fn verify_t2(v: &SubspaceSpec, k_max: i64) -> Result<Report> {
    verify(v, k_max, &[Weight::STANDARD])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(values: &[usize]) -> HilbertSeq {
        HilbertSeq::from_values(SourceDesc::A, Weight::STANDARD, 0, values.to_vec())
    }

    fn cusp() -> SubspaceSpec {
        SubspaceSpec::monomial(Some("cusp"), &[1]).unwrap()
    }

    #[test]
    fn hilbert_sequences() {
        let a = hilbert_seq(Source::A, Weight::STANDARD, 0, 4).unwrap();
        assert_eq!(a.values, vec![1, 3, 6, 10, 15]);
        let v = cusp();
        let m = hilbert_seq(Source::Module(&v), Weight::STANDARD, 0, 3).unwrap();
        assert_eq!(m.values, vec![0, 0, 2, 5]);
        let d = hilbert_seq(Source::Hom(&v, &v), Weight::STANDARD, 0, 2).unwrap();
        assert_eq!(d.values, vec![1, 1, 4]);
        assert!(hilbert_seq(Source::A, Weight::STANDARD, 3, 2).is_err());
    }

    #[test]
    fn fits() {
        let fit = fit_euler(&seq(&[1, 3, 6, 10, 15])).unwrap();
        assert_eq!((fit.shift, fit.constant, fit.window), (0, 0, [0, 4]));
        let fit = fit_euler(&seq(&[0, 0, 2, 5, 9, 14])).unwrap();
        assert_eq!((fit.shift, fit.constant, fit.window), (-1, 1, [1, 5]));
        assert!(fit.exact);
        assert!(matches!(
            fit_euler(&seq(&[1, 1, 4, 8])),
            Err(Error::NotStabilized { .. })
        ));
        assert!(matches!(
            fit_euler(&seq(&[0, 0, 2, 5, 12])),
            Err(Error::NotStabilized { .. })
        ));
        assert!(matches!(
            fit_euler(&seq(&[1, 2, 3, 4, 5])),
            Err(Error::NonPolynomial { .. })
        ));
    }

    #[test]
    fn lm_examples() {
        assert_eq!(
            lm_invariant(&SubspaceSpec::trivial(), Weight::STANDARD, 8)
                .unwrap()
                .p_d,
            0
        );
        let lm = lm_invariant(&cusp(), Weight::STANDARD, 8).unwrap();
        assert_eq!(lm.p_d, 2);
        assert_eq!(lm.p_sequence, vec![0, 2, 2, 2, 2, 2, 2, 2, 2]);
        assert_eq!(lm.stable_from, 1);
        assert_eq!(
            lm_invariant(&cusp(), Weight::new(1, 2).unwrap(), 10)
                .unwrap()
                .p_d,
            2
        );
        assert!(lm_invariant(&cusp(), Weight::STANDARD, 3).is_err());
    }

    #[test]
    fn chern_examples() {
        let c = chern_n(&SubspaceSpec::trivial(), 8).unwrap();
        assert_eq!((c.n, c.shift), (0, 0));
        let c = chern_n(&cusp(), 8).unwrap();
        assert_eq!((c.n, c.shift), (1, -1));
        let g12 = SubspaceSpec::monomial(None, &[1, 2]).unwrap();
        let c = chern_n(&g12, 10).unwrap();
        assert_eq!((c.n, c.shift), (2, -2));
    }

    #[test]
    fn t2_examples() {
        for (v, n) in [
            (SubspaceSpec::trivial(), 0),
            (cusp(), 1),
            (SubspaceSpec::monomial(None, &[1, 2]).unwrap(), 2),
        ] {
            let r = verify_t2(&v, 10).unwrap();
            assert_eq!((r.n, r.p_d), (n, 2 * n));
            assert!(r.ok, "{:?}", r.verdicts);
            assert_eq!(r.recompute_verdicts().unwrap(), r.verdicts);
        }
    }

    #[test]
    fn relative_examples() {
        let t = SubspaceSpec::trivial();
        let c = cusp();
        let r = relative_invariant(&t, &t, 8).unwrap();
        assert!(r.verdict && r.p_12 == 0);
        let r = relative_invariant(&c, &c, 8).unwrap();
        assert_eq!((r.p_12, r.shift), (2, 0));
        assert!(r.verdict);
        let r = relative_invariant(&c, &t, 8).unwrap();
        assert_eq!(r.p_12, 1);
        assert!(r.verdict);
    }

    #[test]
    fn dual_examples() {
        assert!(dual_check(&SubspaceSpec::trivial(), 8).unwrap().verdict);
        let d = dual_check(&cusp(), 8).unwrap();
        assert_eq!(d.constant, 1);
        assert!(d.verdict);
    }

    #[test]
    fn weight_independence_examples() {
        let ws = [Weight::STANDARD, Weight::new(2, 3).unwrap()];
        let r = weight_independence(&SubspaceSpec::trivial(), &ws, 10).unwrap();
        assert!(r.verdict && r.per_weight.iter().all(|l| l.p_d == 0));
        let ws = [
            Weight::STANDARD,
            Weight::new(1, 2).unwrap(),
            Weight::new(2, 1).unwrap(),
        ];
        let r = weight_independence(&cusp(), &ws, 12).unwrap();
        assert!(r.verdict && r.per_weight.iter().all(|l| l.p_d == 2));
        assert!(weight_independence(&cusp(), &ws[..1], 12).is_err());
    }

    #[test]
    fn telescoping_examples() {
        assert!(
            telescoping_check(&SubspaceSpec::trivial(), Weight::STANDARD, 6)
                .unwrap()
                .verdict
        );
        let t = telescoping_check(&cusp(), Weight::STANDARD, 6).unwrap();
        assert!(t.verdict);
        assert_eq!(t.rhs, vec![0, 2, 2, 2, 2, 2, 2]);
        assert!(
            telescoping_check(&cusp(), Weight::new(2, 1).unwrap(), 6)
                .unwrap()
                .verdict
        );
    }

    #[test]
    fn shifted_quadratic_values() {
        assert_eq!(shifted_quadratic(0, 0, 0), 1);
        assert_eq!(shifted_quadratic(4, -1, 1), 9);
        assert_eq!(shifted_quadratic(-2, 0, 0), 0);
        assert_eq!(shifted_quadratic(-3, 0, 0), 1);
    }
}
