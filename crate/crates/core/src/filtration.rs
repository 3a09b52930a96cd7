//! The AF levels `F_k`, their orthogonal complements `W_k = F_k - F_{k-1}`
//! and, on the Cuntz algebra, the shifted spaces
//! `V1(k, r) = Sp{S_mu x : |mu| = r, x in W_k}` and
//! `V2(k, r) = Sp{y S_gamma^* : |gamma| = r, y in W_k}`.
//!
//! Components carry orthogonal spanning sets produced by modified
//! Gram-Schmidt against the state's inner product. In exact mode the vectors
//! stay unnormalized (norms are generally irrational) and their squared norms
//! are recorded instead.

use std::fmt;

use num::complex::Complex64;
use serde::Serialize;

use crate::algebra::{paths_of_length, words_of_bidegree, Element, Word};
use crate::error::KmsError;
use crate::functional::{close, KmsState};
use crate::linalg::FLOAT_PIVOT_TOL;
use crate::scalar::Scalar;
use crate::spectral::TOL;

/// Identifies a filtration component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    W(usize),
    V1(usize, usize),
    V2(usize, usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::W(k) => write!(f, "W({k})"),
            Label::V1(k, r) => write!(f, "V1({k},{r})"),
            Label::V2(k, r) => write!(f, "V2({k},{r})"),
        }
    }
}

impl Serialize for Label {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> Result<Ser::Ok, Ser::Error> {
        s.collect_str(self)
    }
}

/// Which side the shift `S_mu` (resp. `S_gamma^*`) multiplies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `S_mu x`
    Left,
    /// `y S_gamma^*`
    Right,
}

/// The balanced words `S_mu S_nu^*` with `|mu| = |nu| = k` and matching targets.
#[derive(Debug, Clone, PartialEq)]
pub struct BalancedLevel {
    pub k: usize,
    pub basis: Vec<Word>,
}

/// A labeled finite-dimensional subspace with an orthogonal spanning set.
#[derive(Debug, Clone)]
pub struct FiltrationComponent<S: Scalar> {
    pub label: Label,
    pub spanning_set: Vec<Element<S>>,
    pub norms_sq: Vec<S>,
    pub orthonormal: bool,
}

impl<S: Scalar> FiltrationComponent<S> {
    pub fn dimension(&self) -> usize {
        self.spanning_set.len()
    }

    /// Orthogonal projection of `x` onto this component.
    pub fn project(&self, state: &KmsState<S>, x: &Element<S>) -> Result<Element<S>, KmsError> {
        let mut acc = Element::zero(state.graph());
        for (u, n) in self.spanning_set.iter().zip(&self.norms_sq) {
            let c = state.inner_product(u, x)? / n.clone();
            acc = acc.try_add(&u.scale(c))?;
        }
        Ok(acc)
    }

    /// Matrix of the projection in the coordinates of `basis`: column `j` is
    /// the projection of `basis[j]` written at normal-form level `level`.
    pub fn projector(
        &self,
        state: &KmsState<S>,
        basis: &[Word],
        level: usize,
    ) -> Result<Vec<Vec<S>>, KmsError> {
        let g = state.graph();
        let columns: Vec<Element<S>> = basis
            .iter()
            .map(|w| {
                self.project(state, &Element::from_word(g, w.clone()))
                    .and_then(|p| Ok(p.normal_form(level.max(p.min_level()))?))
            })
            .collect::<Result<_, _>>()?;
        Ok(basis
            .iter()
            .map(|row| {
                columns
                    .iter()
                    .map(|col| col.coefficient(row).cloned().unwrap_or_else(S::zero))
                    .collect()
            })
            .collect())
    }
}

/// Modified Gram-Schmidt of `candidates` against `fixed` (already orthogonal)
/// and against each other; returns the accepted new vectors with squared norms.
fn orthogonalize<S: Scalar>(
    state: &KmsState<S>,
    fixed: &[(Element<S>, S)],
    candidates: Vec<Element<S>>,
) -> Result<Vec<(Element<S>, S)>, KmsError> {
    let mut accepted: Vec<(Element<S>, S)> = Vec::new();
    for mut v in candidates {
        let original = state.inner_product(&v, &v)?.real();
        for (u, n) in fixed.iter().chain(accepted.iter()) {
            let c = state.inner_product(u, &v)?;
            if !c.is_negligible() {
                v = v.try_sub(&u.scale(c / n.clone()))?;
            }
        }
        let norm = state.inner_product(&v, &v)?;
        let dependent = if S::EXACT {
            norm.is_negligible()
        } else {
            norm.real() <= FLOAT_PIVOT_TOL * original.max(1.0)
        };
        if dependent {
            continue;
        }
        if norm.real() < 0.0 {
            return Err(KmsError::NotPositive);
        }
        accepted.push((v, norm));
    }
    Ok(accepted)
}

fn finish<S: Scalar>(
    state: &KmsState<S>,
    label: Label,
    level: usize,
    vectors: Vec<(Element<S>, S)>,
) -> Result<FiltrationComponent<S>, KmsError> {
    let mut spanning_set = Vec::with_capacity(vectors.len());
    let mut norms_sq = Vec::with_capacity(vectors.len());
    for (v, n) in vectors {
        let v = v.normal_form(level.max(v.min_level()))?;
        if S::EXACT {
            spanning_set.push(v);
            norms_sq.push(n);
        } else {
            let inv = S::from_f64(1.0 / n.real().sqrt()).ok_or(KmsError::NotPositive)?;
            spanning_set.push(v.scale(inv));
            norms_sq.push(S::one());
        }
    }
    let _ = state;
    Ok(FiltrationComponent {
        label,
        spanning_set,
        norms_sq,
        orthonormal: !S::EXACT,
    })
}

/// Enumerates the balanced words of length `k`.
pub fn build_f<S: Scalar>(state: &KmsState<S>, k: usize) -> BalancedLevel {
    BalancedLevel {
        k,
        basis: words_of_bidegree(state.graph(), k, k),
    }
}

/// `W_0 = C 1` and `W_k = F_k - F_{k-1}` for `k >= 1`.
pub fn build_w<S: Scalar>(state: &KmsState<S>, k: usize) -> Result<FiltrationComponent<S>, KmsError> {
    Ok(build_w_levels_with(state, k, |_| {})?.pop().expect("k + 1 levels"))
}

/// `W_0, ..., W_k`, reordering each enumerated `F_j` basis with `reorder`
/// before orthogonalization.
pub fn build_w_levels_with<S: Scalar>(
    state: &KmsState<S>,
    k: usize,
    mut reorder: impl FnMut(&mut Vec<Word>),
) -> Result<Vec<FiltrationComponent<S>>, KmsError> {
    let g = state.graph();
    let unit = Element::unit(g);
    let unit_norm = state.inner_product(&unit, &unit)?;
    let mut fixed: Vec<(Element<S>, S)> = vec![(unit.clone(), unit_norm.clone())];
    let mut levels = vec![finish(state, Label::W(0), 0, vec![(unit, unit_norm)])?];
    for j in 1..=k {
        let mut words = build_f(state, j).basis;
        reorder(&mut words);
        let candidates = words
            .into_iter()
            .map(|w| Element::from_word(g, w))
            .collect();
        let accepted = orthogonalize(state, &fixed, candidates)?;
        fixed.extend(accepted.iter().cloned());
        levels.push(finish(state, Label::W(j), j, accepted)?);
    }
    Ok(levels)
}

/// Shifted component `V1(k, r)` (left, `S_mu x`) or `V2(k, r)` (right, `y S_gamma^*`).
pub fn build_v<S: Scalar>(
    state: &KmsState<S>,
    side: Side,
    w_k: &FiltrationComponent<S>,
    r: usize,
) -> Result<FiltrationComponent<S>, KmsError> {
    if !state.graph().is_cuntz() {
        return Err(KmsError::NotCuntz);
    }
    if r == 0 {
        return Err(KmsError::ZeroShift);
    }
    let Label::W(k) = w_k.label else {
        return Err(KmsError::MissingComponent(w_k.label.to_string()));
    };
    let g = state.graph();
    let mut candidates = Vec::new();
    for mu in paths_of_length(g, r) {
        for x in &w_k.spanning_set {
            let product = match side {
                Side::Left => Element::from_word(g, Word::creation(mu.clone())).try_mul(x)?,
                Side::Right => x.try_mul(&Element::from_word(g, Word::annihilation(mu.clone())))?,
            };
            candidates.push(product);
        }
    }
    let accepted = orthogonalize(state, &[], candidates)?;
    let label = match side {
        Side::Left => Label::V1(k, r),
        Side::Right => Label::V2(k, r),
    };
    finish(state, label, k, accepted)
}

/// The raw products `S_mu x` / `y S_gamma^*` before orthogonalization.
pub fn shifted_products<S: Scalar>(
    state: &KmsState<S>,
    side: Side,
    w_k: &FiltrationComponent<S>,
    r: usize,
) -> Result<Vec<Element<S>>, KmsError> {
    let g = state.graph();
    let mut out = Vec::new();
    for mu in paths_of_length(g, r) {
        for x in &w_k.spanning_set {
            out.push(match side {
                Side::Left => Element::from_word(g, Word::creation(mu.clone())).try_mul(x)?,
                Side::Right => x.try_mul(&Element::from_word(g, Word::annihilation(mu.clone())))?,
            });
        }
    }
    Ok(out)
}

/// All components of a truncated filtration.
#[derive(Debug, Clone)]
pub struct Filtration<S: Scalar> {
    pub components: Vec<FiltrationComponent<S>>,
}

impl<S: Scalar> Filtration<S> {
    /// `W_k` for `k <= max_k`; on the Cuntz algebra also `V1(k, r)`, `V2(k, r)`
    /// for `k <= max_k`, `1 <= r <= max_r`, `k + r <= max(max_k, max_r)`.
    pub fn build(state: &KmsState<S>, max_k: usize, max_r: usize) -> Result<Self, KmsError> {
        let ws = build_w_levels_with(state, max_k, |_| {})?;
        let mut components = ws.clone();
        if state.graph().is_cuntz() {
            let bound = max_k.max(max_r);
            for side in [Side::Left, Side::Right] {
                for w in &ws {
                    let Label::W(k) = w.label else { unreachable!() };
                    for r in 1..=max_r {
                        if k + r <= bound {
                            components.push(build_v(state, side, w, r)?);
                        }
                    }
                }
            }
        }
        components.sort_by_key(|c| c.label);
        Ok(Filtration { components })
    }

    pub fn get(&self, label: Label) -> Option<&FiltrationComponent<S>> {
        self.components.iter().find(|c| c.label == label)
    }
}

/// Max absolute inner product between two components.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairCheck {
    pub pair: (Label, Label),
    pub max_abs_inner: f64,
    /// Every entry exactly zero (exact mode) or within tolerance (float mode).
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct OrthogonalityReport {
    pub pairs: Vec<PairCheck>,
    /// Largest off-diagonal inner product inside each component.
    pub within: Vec<PairCheck>,
    pub passed: bool,
}

fn max_abs<S: Scalar>(m: &[Vec<S>], skip_diagonal: bool) -> (f64, bool) {
    let mut worst = 0.0f64;
    let mut ok = true;
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if skip_diagonal && i == j {
                continue;
            }
            worst = worst.max(x.modulus());
            ok &= close(x, &S::zero());
        }
    }
    (worst, ok)
}

/// Cross-Gram blocks between every pair of components, plus the
/// within-component off-diagonals.
pub fn verify_orthogonality<S: Scalar>(
    state: &KmsState<S>,
    components: &[FiltrationComponent<S>],
) -> Result<OrthogonalityReport, KmsError> {
    let mut pairs = Vec::new();
    let mut within = Vec::new();
    for (i, a) in components.iter().enumerate() {
        let (worst, ok) = max_abs(&state.gram(&a.spanning_set)?, true);
        within.push(PairCheck {
            pair: (a.label, a.label),
            max_abs_inner: worst,
            passed: ok,
        });
        for b in &components[i + 1..] {
            let block = state.cross_gram(&a.spanning_set, &b.spanning_set)?;
            let (worst, ok) = max_abs(&block, false);
            pairs.push(PairCheck {
                pair: (a.label, b.label),
                max_abs_inner: worst,
                passed: ok,
            });
        }
    }
    let passed = pairs.iter().chain(&within).all(|p| p.passed);
    Ok(OrthogonalityReport {
        pairs,
        within,
        passed,
    })
}

/// Outcome of the bidegree orthogonality check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase", tag = "status")]
pub enum BidegreeCheck {
    /// `r + s' == r' + s`: the orthogonality criterion says nothing.
    Skipped,
    Passed { pairs: usize },
    Failed { pairs: usize, max_abs_inner: f64 },
    /// A length exceeds the enumeration cap.
    TooLarge,
}

/// Exhaustive check that `B_{r,s}` and `B_{r',s'}` basis words are orthogonal
/// whenever `r + s' != r' + s`.
pub fn check_bidegree_orthogonality<S: Scalar>(
    state: &KmsState<S>,
    (r, s): (usize, usize),
    (r2, s2): (usize, usize),
    max_enum: usize,
) -> Result<BidegreeCheck, KmsError> {
    if [r, s, r2, s2].iter().any(|&l| l > max_enum) {
        return Ok(BidegreeCheck::TooLarge);
    }
    if r + s2 == r2 + s {
        return Ok(BidegreeCheck::Skipped);
    }
    let g = state.graph();
    let left = words_of_bidegree(g, r, s);
    let right = words_of_bidegree(g, r2, s2);
    let mut worst = 0.0f64;
    let mut ok = true;
    for a in &left {
        let a_star = a.adjoint();
        for b in &right {
            if let Some(w) = a_star.multiply(b) {
                let v = state.phi_word(&w);
                worst = worst.max(v.modulus());
                ok &= close(&v, &S::zero());
            }
        }
    }
    let pairs = left.len() * right.len();
    Ok(if ok {
        BidegreeCheck::Passed { pairs }
    } else {
        BidegreeCheck::Failed {
            pairs,
            max_abs_inner: worst,
        }
    })
}

/// Orthogonal projection of a word onto a family of components.
#[derive(Debug, Clone)]
pub struct Decomposition<S: Scalar> {
    pub coefficients: Vec<(Label, Vec<S>)>,
    pub residual: Element<S>,
    pub residual_norm_sq: S,
}

impl<S: Scalar> Decomposition<S> {
    pub fn residual_norm(&self) -> f64 {
        self.residual_norm_sq.real().max(0.0).sqrt()
    }

    /// Zero residual: exactly in exact mode, within tolerance otherwise.
    pub fn is_complete(&self) -> bool {
        if S::EXACT {
            self.residual_norm_sq.is_negligible() && self.residual.equals(&Element::zero(self.residual.graph()))
        } else {
            self.residual_norm() <= TOL
        }
    }
}

/// Labels needed to span `S_mu S_nu^*`.
pub fn required_labels(w: &Word) -> Vec<Label> {
    let (a, b) = (w.mu().len(), w.nu().len());
    use std::cmp::Ordering::*;
    match a.cmp(&b) {
        Equal => (0..=a).map(Label::W).collect(),
        Greater => (0..=b).map(|k| Label::V1(k, a - b)).collect(),
        Less => (0..=a).map(|k| Label::V2(k, b - a)).collect(),
    }
}

/// Projects `w` onto the span of `components`; fails if a label needed for
/// the word's bidegree is missing.
pub fn decompose_word<S: Scalar>(
    state: &KmsState<S>,
    w: &Word,
    components: &[FiltrationComponent<S>],
) -> Result<Decomposition<S>, KmsError> {
    for label in required_labels(w) {
        if !components.iter().any(|c| c.label == label) {
            return Err(KmsError::MissingComponent(label.to_string()));
        }
    }
    let g = state.graph();
    let x = Element::from_word(g, w.clone());
    let mut residual = x.clone();
    let mut coefficients = Vec::with_capacity(components.len());
    for comp in components {
        let coeffs: Vec<S> = comp
            .spanning_set
            .iter()
            .zip(&comp.norms_sq)
            .map(|(u, n)| Ok(state.inner_product(u, &x)? / n.clone()))
            .collect::<Result<_, KmsError>>()?;
        for (u, c) in comp.spanning_set.iter().zip(&coeffs) {
            if !c.is_negligible() {
                residual = residual.try_sub(&u.scale(c.clone()))?;
            }
        }
        coefficients.push((comp.label, coeffs));
    }
    let residual_norm_sq = state.inner_product(&residual, &residual)?;
    Ok(Decomposition {
        coefficients,
        residual,
        residual_norm_sq,
    })
}

/// Float view of a component, for mixed-mode comparisons.
pub fn to_float_component(
    c: &FiltrationComponent<crate::scalar::Rational>,
) -> FiltrationComponent<Complex64> {
    FiltrationComponent {
        label: c.label,
        spanning_set: c.spanning_set.iter().map(Element::to_float).collect(),
        norms_sq: c.norms_sq.iter().map(Complex64::from_ratio).collect(),
        orthonormal: false,
    }
}
