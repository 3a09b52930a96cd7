use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num::complex::Complex64;

use super::path::Path;
use super::word::Word;
use crate::error::AlgebraError;
use crate::graph::Graph;
use crate::scalar::{Rational, Scalar};

/// A finite linear combination of words over a fixed graph.
///
/// `PartialEq` compares representations; use [`Element::equals`] for equality
/// in the graph algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct Element<S: Scalar = Rational> {
    graph: Arc<Graph>,
    terms: BTreeMap<Word, S>,
}

fn accumulate<S: Scalar>(terms: &mut BTreeMap<Word, S>, word: Word, coeff: S) {
    use std::collections::btree_map::Entry;
    match terms.entry(word) {
        Entry::Vacant(slot) => {
            if !coeff.is_negligible() {
                slot.insert(coeff);
            }
        }
        Entry::Occupied(mut slot) => {
            let sum = slot.get().clone() + coeff;
            if sum.is_negligible() {
                slot.remove();
            } else {
                *slot.get_mut() = sum;
            }
        }
    }
}

impl<S: Scalar> Element<S> {
    pub fn zero(graph: &Arc<Graph>) -> Self {
        Element {
            graph: Arc::clone(graph),
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(graph: &Arc<Graph>, word: Word, coeff: S) -> Self {
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, word, coeff);
        Element {
            graph: Arc::clone(graph),
            terms,
        }
    }

    pub fn from_word(graph: &Arc<Graph>, word: Word) -> Self {
        Self::monomial(graph, word, S::one())
    }

    pub fn from_terms(graph: &Arc<Graph>, terms: impl IntoIterator<Item = (Word, S)>) -> Self {
        let mut map = BTreeMap::new();
        for (w, c) in terms {
            accumulate(&mut map, w, c);
        }
        Element {
            graph: Arc::clone(graph),
            terms: map,
        }
    }

    /// `S_mu S_nu^*`, or zero when `t(mu) != t(nu)`.
    pub fn word(graph: &Arc<Graph>, mu: Path, nu: Path) -> Self {
        match Word::new(mu, nu) {
            Some(w) => Self::from_word(graph, w),
            None => Self::zero(graph),
        }
    }

    pub fn projection(graph: &Arc<Graph>, v: usize) -> Self {
        Self::from_word(graph, Word::projection(v))
    }

    /// `1 = sum_v p_v`.
    pub fn unit(graph: &Arc<Graph>) -> Self {
        Self::from_terms(
            graph,
            (0..graph.vertex_count()).map(|v| (Word::projection(v), S::one())),
        )
    }

    /// The partial isometry `S_e`.
    pub fn edge(graph: &Arc<Graph>, e: usize) -> Self {
        Self::from_word(graph, Word::creation(Path::edge(graph, e)))
    }

    /// `S_mu` for a composable edge sequence, zero otherwise.
    pub fn path(graph: &Arc<Graph>, edges: &[usize]) -> Self {
        match Path::new(graph, edges.to_vec()) {
            Some(p) => Self::from_word(graph, Word::creation(p)),
            None if edges.is_empty() => Self::unit(graph),
            None => Self::zero(graph),
        }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &S)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Option<&S> {
        self.terms.get(w)
    }

    /// Number of stored (nonzero) terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn same_graph(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.same_graph(other) {
            Ok(())
        } else {
            Err(AlgebraError::GraphMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            accumulate(&mut terms, w.clone(), c.clone());
        }
        Ok(Element {
            graph: Arc::clone(&self.graph),
            terms,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.try_add(&other.scale(-S::one()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        let mut terms = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some(w) = a.multiply(b) {
                    accumulate(&mut terms, w, ca.clone() * cb.clone());
                }
            }
        }
        Ok(Element {
            graph: Arc::clone(&self.graph),
            terms,
        })
    }

    pub fn scale(&self, c: S) -> Self {
        Self::from_terms(
            &self.graph,
            self.terms.iter().map(|(w, x)| (w.clone(), x.clone() * c.clone())),
        )
    }

    /// Conjugate-linear involution, `(S_mu S_nu^*)^* = S_nu S_mu^*`.
    pub fn adjoint(&self) -> Self {
        Self::from_terms(
            &self.graph,
            self.terms.iter().map(|(w, c)| (w.adjoint(), c.conj())),
        )
    }

    /// Largest `min(|mu|, |nu|)` over the terms (0 for the zero element).
    pub fn min_level(&self) -> usize {
        self.terms.keys().map(Word::min_len).max().unwrap_or(0)
    }

    /// Rewrites every term so that `min(|mu|, |nu|) = level`, expanding the
    /// shorter side with `p_v = sum_{s(e) = v} S_e S_e^*`.
    pub fn normal_form(&self, level: usize) -> Result<Self, AlgebraError> {
        let required = self.min_level();
        if level < required {
            return Err(AlgebraError::LevelTooLow { level, required });
        }
        let mut terms = BTreeMap::new();
        for (w, c) in &self.terms {
            for x in w.expand_to(&self.graph, level) {
                accumulate(&mut terms, x, c.clone());
            }
        }
        Ok(Element {
            graph: Arc::clone(&self.graph),
            terms,
        })
    }

    /// Equality in the graph algebra (different graphs are never equal).
    pub fn equals(&self, other: &Self) -> bool {
        let Ok(diff) = self.try_sub(other) else {
            return false;
        };
        let level = diff.min_level();
        diff.normal_form(level)
            .expect("level is the minimum")
            .is_zero()
    }

    /// Homogeneous components for the gauge grading `|mu| - |nu|`.
    pub fn degree_decompose(&self) -> BTreeMap<i64, Self> {
        let mut parts: BTreeMap<i64, Self> = BTreeMap::new();
        for (w, c) in &self.terms {
            parts
                .entry(w.degree())
                .or_insert_with(|| Self::zero(&self.graph))
                .terms
                .insert(w.clone(), c.clone());
        }
        parts
    }

    /// The common degree of all terms; `Some(0)` for zero.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut degrees = self.terms.keys().map(Word::degree);
        let first = degrees.next().unwrap_or(0);
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn map_scalar<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Element<T> {
        Element::from_terms(
            &self.graph,
            self.terms.iter().map(|(w, c)| (w.clone(), f(c))),
        )
    }

    /// Terms joined by `+`/`-`, in canonical order; `0` when empty.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let (negative, magnitude) = if S::EXACT && c.real() < 0.0 {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            if i > 0 {
                out.push_str(if negative { " - " } else { " + " });
            } else if negative {
                out.push('-');
            }
            if magnitude != S::one() {
                out.push_str(&magnitude.render());
                out.push('*');
            }
            out.push_str(&w.render(&self.graph));
        }
        out
    }
}

impl Element<Rational> {
    pub fn to_float(&self) -> Element<Complex64> {
        self.map_scalar(Complex64::from_ratio)
    }
}

impl Element<Complex64> {
    /// `gamma_z(S_mu S_nu^*) = z^{|mu| - |nu|} S_mu S_nu^*`.
    pub fn gauge_action(&self, z: Complex64) -> Self {
        Self::from_terms(
            &self.graph,
            self.terms
                .iter()
                .map(|(w, c)| (w.clone(), c * z.powi(w.degree() as i32))),
        )
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl<S: Scalar> $trait<&Element<S>> for &Element<S> {
            type Output = Element<S>;
            /// Panics if the operands come from different graphs.
            fn $method(self, rhs: &Element<S>) -> Element<S> {
                self.$try(rhs).expect("operands from different graphs")
            }
        }
        impl<S: Scalar> $trait for Element<S> {
            type Output = Element<S>;
            fn $method(self, rhs: Element<S>) -> Element<S> {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl<S: Scalar> Neg for &Element<S> {
    type Output = Element<S>;
    fn neg(self) -> Element<S> {
        self.scale(-S::one())
    }
}
