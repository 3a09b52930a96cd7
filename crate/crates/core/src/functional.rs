//! The critical KMS state `phi(S_mu S_nu^*) = delta_{mu,nu} rho^{-|mu|} w_{t(mu)}`,
//! its inner product `<a, b> = phi(a^* b)`, and the trace `tau` on single-edge words.

use std::sync::Arc;

use num::complex::Complex64;

use crate::algebra::{words_of_bidegree, Element, Path, Word};
use crate::error::KmsError;
use crate::graph::Graph;
use crate::linalg::{psd_rank, Matrix, PsdSummary};
use crate::scalar::{Rational, Scalar};
use crate::spectral::{is_row_regular, kms_verdict, KmsVerdict, TOL};

/// `|a - b| <= TOL`, or exact equality for rationals.
pub fn close<S: Scalar>(a: &S, b: &S) -> bool {
    if S::EXACT {
        a == b
    } else {
        (a.clone() - b.clone()).modulus() <= TOL
    }
}

/// The KMS state at inverse temperature `ln rho(D)` for a positive eigenvector `w`.
#[derive(Debug, Clone)]
pub struct KmsState<S: Scalar = Rational> {
    graph: Arc<Graph>,
    rho: S,
    inv_rho: S,
    weights: Vec<S>,
}

impl<S: Scalar> KmsState<S> {
    /// Validates `w > 0`, `sum w = 1` and `D w = rho w`.
    pub fn new(graph: Arc<Graph>, rho: S, weights: Vec<S>) -> Result<Self, KmsError> {
        let m = graph.vertex_count();
        if weights.len() != m || weights.iter().any(|w| w.real() <= 0.0) {
            return Err(KmsError::NoState);
        }
        let total = weights.iter().cloned().fold(S::zero(), |a, b| a + b);
        if !close(&total, &S::one()) {
            return Err(KmsError::NoState);
        }
        let d = graph.vertex_matrix();
        for (i, wi) in weights.iter().enumerate() {
            let dw = (0..m).fold(S::zero(), |acc, j| {
                acc + S::from_integer(d.get(i, j) as i64) * weights[j].clone()
            });
            if !close(&dw, &(rho.clone() * wi.clone())) {
                return Err(KmsError::NoState);
            }
        }
        let inv_rho = S::one() / rho.clone();
        Ok(KmsState {
            graph,
            rho,
            inv_rho,
            weights,
        })
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn rho(&self) -> &S {
        &self.rho
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    /// `rho^{-k}` for any integer `k`.
    pub fn rho_power(&self, k: i64) -> S {
        if k >= 0 {
            self.inv_rho.pow(k as u32)
        } else {
            self.rho.pow((-k) as u32)
        }
    }

    /// Value on a single word.
    pub fn phi_word(&self, w: &Word) -> S {
        if w.mu() == w.nu() {
            self.rho_power(w.mu().len() as i64) * self.weights[w.mu().target()].clone()
        } else {
            S::zero()
        }
    }

    /// Linear extension of the monomial formula.
    pub fn phi(&self, a: &Element<S>) -> S {
        a.terms().fold(S::zero(), |acc, (w, c)| {
            let v = self.phi_word(w);
            if v.is_negligible() {
                acc
            } else {
                acc + c.clone() * v
            }
        })
    }

    /// `<a, b> = phi(a^* b)`.
    pub fn inner_product(&self, a: &Element<S>, b: &Element<S>) -> Result<S, KmsError> {
        Ok(self.phi(&a.adjoint().try_mul(b)?))
    }

    /// Twisted-trace form of the KMS condition:
    /// `phi(a b) = rho^{-deg a} phi(b a)` for homogeneous `a`.
    pub fn check_kms_condition(&self, a: &Element<S>, b: &Element<S>) -> Result<bool, KmsError> {
        let d = a
            .homogeneous_degree()
            .ok_or(crate::error::AlgebraError::NotHomogeneous)?;
        let lhs = self.phi(&a.try_mul(b)?);
        let rhs = self.rho_power(d) * self.phi(&b.try_mul(a)?);
        Ok(close(&lhs, &rhs))
    }

    /// On the Cuntz algebra: `phi(S_mu a S_nu^*) = delta_{mu,nu} n^{-|mu|} phi(a)`
    /// for `|mu| = |nu|`.
    pub fn check_plug_lemma(&self, mu: &Path, nu: &Path, a: &Element<S>) -> Result<bool, KmsError> {
        if !self.graph.is_cuntz() {
            return Err(KmsError::NotCuntz);
        }
        if mu.len() != nu.len() {
            return Err(KmsError::LengthMismatch {
                mu: mu.len(),
                nu: nu.len(),
            });
        }
        let left = Element::from_word(&self.graph, Word::creation(mu.clone()));
        let right = Element::from_word(&self.graph, Word::annihilation(nu.clone()));
        let lhs = self.phi(&left.try_mul(a)?.try_mul(&right)?);
        let rhs = if mu == nu {
            self.rho_power(mu.len() as i64) * self.phi(a)
        } else {
            S::zero()
        };
        Ok(close(&lhs, &rhs))
    }

    /// Gram matrix `G_ij = <a_i, a_j>`.
    pub fn gram(&self, elems: &[Element<S>]) -> Result<Matrix<S>, KmsError> {
        elems
            .iter()
            .map(|a| {
                let a_star = a.adjoint();
                elems
                    .iter()
                    .map(|b| Ok(self.phi(&a_star.try_mul(b)?)))
                    .collect()
            })
            .collect()
    }

    /// Cross Gram block `G_ij = <a_i, b_j>`.
    pub fn cross_gram(&self, a: &[Element<S>], b: &[Element<S>]) -> Result<Matrix<S>, KmsError> {
        a.iter()
            .map(|x| {
                let x_star = x.adjoint();
                b.iter()
                    .map(|y| Ok(self.phi(&x_star.try_mul(y)?)))
                    .collect()
            })
            .collect()
    }

    /// Rank and smallest pivot of the Gram matrix; fails if it is not
    /// positive semidefinite within `-TOL`.
    pub fn gram_summary(&self, elems: &[Element<S>]) -> Result<PsdSummary, KmsError> {
        psd_rank(&self.gram(elems)?, TOL).ok_or(KmsError::NotPositive)
    }
}

fn verdict_for(graph: &Graph) -> Result<KmsVerdict, KmsError> {
    kms_verdict(graph).map_err(|_| KmsError::NoState)
}

impl KmsState<Rational> {
    /// The critical state in exact arithmetic; needs a rational `rho` and eigenvector.
    pub fn exact(graph: Arc<Graph>) -> Result<Self, KmsError> {
        let verdict = verdict_for(&graph)?;
        if !verdict.exists_on_graph_algebra {
            return Err(KmsError::NoState);
        }
        let rho = verdict.spectral.rho_exact.clone().ok_or(KmsError::NotExact)?;
        let w = verdict
            .spectral
            .eigenvector_exact
            .clone()
            .ok_or(KmsError::NotExact)?;
        KmsState::new(graph, rho, w)
    }

    pub fn to_float(&self) -> KmsState<Complex64> {
        KmsState {
            graph: Arc::clone(&self.graph),
            rho: Complex64::from_ratio(&self.rho),
            inv_rho: Complex64::from_ratio(&self.inv_rho),
            weights: self.weights.iter().map(Complex64::from_ratio).collect(),
        }
    }
}

impl KmsState<Complex64> {
    /// The critical state in floating point.
    pub fn float(graph: Arc<Graph>) -> Result<Self, KmsError> {
        let verdict = verdict_for(&graph)?;
        let w = verdict.state_vector.clone().ok_or(KmsError::NoState)?;
        KmsState::new(
            graph,
            Complex64::new(verdict.spectral.rho, 0.0),
            w.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        )
    }
}

/// The linear functional `tau(S_i S_j^*) = delta_{ij}` on single-edge words.
#[derive(Debug, Clone)]
pub struct TauFunctional {
    graph: Arc<Graph>,
}

impl TauFunctional {
    pub fn new(graph: Arc<Graph>) -> Self {
        TauFunctional { graph }
    }

    pub fn tau<S: Scalar>(&self, a: &Element<S>) -> Result<S, KmsError> {
        a.terms().try_fold(S::zero(), |acc, (w, c)| {
            if w.mu().len() != 1 || w.nu().len() != 1 {
                return Err(KmsError::OutsideTauDomain(w.render(&self.graph)));
            }
            Ok(if w.mu() == w.nu() {
                acc + c.clone()
            } else {
                acc
            })
        })
    }

    /// The constant `c = 1/(m rho)` with `phi = c tau` on single-edge words,
    /// checked on every basis word `S_i S_j^*`.
    pub fn compare_phi<S: Scalar>(&self, state: &KmsState<S>) -> Result<S, KmsError> {
        let g = &self.graph;
        if !is_row_regular(&g.vertex_matrix()) {
            return Err(KmsError::NotRowRegular);
        }
        let m = S::from_integer(g.vertex_count() as i64);
        let c = S::one() / (m * state.rho().clone());
        let mut worst = 0.0f64;
        for w in words_of_bidegree(g, 1, 1) {
            let e = Element::from_word(g, w);
            let expected = c.clone() * self.tau(&e)?;
            let got = state.phi(&e);
            if !close(&got, &expected) {
                worst = worst.max((got - expected).modulus());
            }
        }
        if worst > 0.0 {
            return Err(KmsError::NotProportional(worst));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    type E = Element<Rational>;

    fn state(g: Graph) -> KmsState {
        KmsState::exact(Arc::new(g)).unwrap()
    }

    #[test]
    fn cuntz_values() {
        let st = state(Graph::cuntz(2));
        let g = st.graph().clone();
        let s1 = E::edge(&g, 0);
        assert_eq!(st.phi(&(&s1 * &s1.adjoint())), ratio(1, 2));
        assert_eq!(st.phi(&E::unit(&g)), ratio(1, 1));
        assert_eq!(st.inner_product(&s1, &s1).unwrap(), ratio(1, 1));
        assert_eq!(st.inner_product(&s1, &E::edge(&g, 1)).unwrap(), ratio(0, 1));
        let proj = &s1 * &s1.adjoint();
        assert_eq!(st.inner_product(&proj, &proj).unwrap(), ratio(1, 2));
    }

    #[test]
    fn two_cycle_values() {
        let st = state(Graph::two_cycle());
        let g = st.graph().clone();
        let (s1, s2) = (E::edge(&g, 0), E::edge(&g, 1));
        assert_eq!(st.phi(&(&s1 * &s2.adjoint())), ratio(0, 1));
        assert_eq!(st.phi(&(&s1 * &s1.adjoint())), ratio(1, 2));
        let sum = &E::projection(&g, 0) + &E::projection(&g, 1);
        assert_eq!(st.phi(&sum), ratio(1, 1));
    }

    #[test]
    fn kms_condition_examples() {
        let st = state(Graph::cuntz(2));
        let g = st.graph().clone();
        let s1 = E::edge(&g, 0);
        assert!(st.check_kms_condition(&s1, &s1.adjoint()).unwrap());
        let s12 = E::path(&g, &[0, 1]);
        assert_eq!(st.phi(&(&s12 * &s12.adjoint())), ratio(1, 4));
        assert!(st.check_kms_condition(&s12, &s12.adjoint()).unwrap());
        let mixed = &s1 + &E::unit(&g);
        assert!(st.check_kms_condition(&mixed, &s1).is_err());
    }

    #[test]
    fn plug_lemma_examples() {
        let st = state(Graph::cuntz(2));
        let g = st.graph().clone();
        let e1 = Path::edge(&g, 0);
        let e2 = Path::edge(&g, 1);
        let s2 = E::edge(&g, 1);
        let a = &s2 * &s2.adjoint();
        assert!(st.check_plug_lemma(&e1, &e1, &a).unwrap());
        let lhs = &(&E::edge(&g, 0) * &a) * &E::edge(&g, 0).adjoint();
        assert_eq!(st.phi(&lhs), ratio(1, 4));
        assert!(st.check_plug_lemma(&e1, &e2, &E::unit(&g)).unwrap());
        assert!(st
            .check_plug_lemma(&Path::empty(0), &Path::empty(0), &a)
            .unwrap());
        assert_eq!(
            st.check_plug_lemma(&e1, &Path::empty(0), &a).unwrap_err(),
            KmsError::LengthMismatch { mu: 1, nu: 0 }
        );
        let other = state(Graph::two_cycle());
        assert_eq!(
            other
                .check_plug_lemma(&Path::empty(0), &Path::empty(0), &E::unit(other.graph()))
                .unwrap_err(),
            KmsError::NotCuntz
        );
    }

    #[test]
    fn tau_values() {
        let g = Arc::new(Graph::cuntz(2));
        let tau = TauFunctional::new(g.clone());
        let (s1, s2) = (E::edge(&g, 0), E::edge(&g, 1));
        let p11 = &s1 * &s1.adjoint();
        let p22 = &s2 * &s2.adjoint();
        assert_eq!(tau.tau(&p11).unwrap(), ratio(1, 1));
        assert_eq!(tau.tau(&(&s1 * &s2.adjoint())).unwrap(), ratio(0, 1));
        assert_eq!(tau.tau(&(&p11 + &p22.scale(ratio(3, 1)))).unwrap(), ratio(4, 1));
        assert!(tau.tau(&s1).is_err());
    }

    #[test]
    fn phi_tau_constants() {
        for n in 1..=4 {
            let st = state(Graph::cuntz(n));
            let tau = TauFunctional::new(st.graph().clone());
            assert_eq!(tau.compare_phi(&st).unwrap(), ratio(1, n as i64));
        }
        let st = state(Graph::two_cycle());
        let tau = TauFunctional::new(st.graph().clone());
        assert_eq!(tau.compare_phi(&st).unwrap(), ratio(1, 2));

        let g = Arc::new(
            Graph::from_json(
                r#"{"vertices": ["a", "b"], "edges": [
                {"id": "x", "src": "a", "dst": "b"}, {"id": "y", "src": "a", "dst": "b"},
                {"id": "z", "src": "b", "dst": "b"}, {"id": "u", "src": "b", "dst": "b"},
                {"id": "q", "src": "b", "dst": "a"}]}"#,
            )
            .unwrap(),
        );
        let st = KmsState::float(g.clone()).unwrap();
        assert_eq!(
            TauFunctional::new(g).compare_phi(&st).unwrap_err(),
            KmsError::NotRowRegular
        );
    }

    #[test]
    fn float_state_matches_exact() {
        let exact = state(Graph::cuntz(3));
        let float = exact.to_float();
        let g = exact.graph().clone();
        let a = &E::path(&g, &[0, 2]) * &E::path(&g, &[0, 2]).adjoint();
        let diff = float.phi(&a.to_float()) - Complex64::from_ratio(&exact.phi(&a));
        assert!(diff.norm() < 1e-15);
    }

    #[test]
    fn rejects_non_eigenvector() {
        let g = Arc::new(Graph::two_cycle());
        assert_eq!(
            KmsState::new(g, ratio(1, 1), vec![ratio(1, 3), ratio(2, 3)]).unwrap_err(),
            KmsError::NoState
        );
    }
}
