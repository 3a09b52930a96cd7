use std::cmp::Ordering;

use super::path::Path;
use crate::graph::Graph;

/// The monomial `S_mu S_nu^*` with `t(mu) = t(nu)`.
///
/// Both paths empty at `v` is the vertex projection `p_v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    mu: Path,
    nu: Path,
}

impl Word {
    /// `None` when the targets differ, i.e. the monomial vanishes.
    pub fn new(mu: Path, nu: Path) -> Option<Self> {
        (mu.target() == nu.target()).then_some(Word { mu, nu })
    }

    pub fn projection(v: usize) -> Self {
        Word {
            mu: Path::empty(v),
            nu: Path::empty(v),
        }
    }

    /// `S_mu` on its own, i.e. `S_mu p_{t(mu)}`.
    pub fn creation(mu: Path) -> Self {
        let nu = Path::empty(mu.target());
        Word { mu, nu }
    }

    /// `S_nu^*` on its own.
    pub fn annihilation(nu: Path) -> Self {
        let mu = Path::empty(nu.target());
        Word { mu, nu }
    }

    pub fn mu(&self) -> &Path {
        &self.mu
    }

    pub fn nu(&self) -> &Path {
        &self.nu
    }

    /// Gauge degree `|mu| - |nu|`.
    pub fn degree(&self) -> i64 {
        self.mu.len() as i64 - self.nu.len() as i64
    }

    pub fn min_len(&self) -> usize {
        self.mu.len().min(self.nu.len())
    }

    pub fn is_balanced(&self) -> bool {
        self.mu.len() == self.nu.len()
    }

    pub fn adjoint(&self) -> Word {
        Word {
            mu: self.nu.clone(),
            nu: self.mu.clone(),
        }
    }

    /// `(S_mu S_nu^*)(S_delta S_gamma^*)`: prefix cancellation or zero.
    pub fn multiply(&self, rhs: &Word) -> Option<Word> {
        if self.nu.is_prefix_of(&rhs.mu) {
            let rest = rhs.mu.strip_prefix(&self.nu);
            Some(Word {
                mu: self.mu.concat(&rest),
                nu: rhs.nu.clone(),
            })
        } else if rhs.mu.is_prefix_of(&self.nu) {
            let rest = self.nu.strip_prefix(&rhs.mu);
            Some(Word {
                mu: self.mu.clone(),
                nu: rhs.nu.concat(&rest),
            })
        } else {
            None
        }
    }

    /// `sum_{s(e) = t(mu)} S_{mu e} S_{nu e}^*`.
    pub fn expand_once(&self, g: &Graph) -> Vec<Word> {
        g.out_edges(self.mu.target())
            .iter()
            .map(|&e| Word {
                mu: self.mu.push(g, e),
                nu: self.nu.push(g, e),
            })
            .collect()
    }

    /// Expands until `min(|mu|, |nu|) = level`; requires `level >= self.min_len()`.
    pub fn expand_to(&self, g: &Graph, level: usize) -> Vec<Word> {
        let mut out = vec![self.clone()];
        for _ in self.min_len()..level {
            out = out.iter().flat_map(|w| w.expand_once(g)).collect();
        }
        out
    }

    /// `S[e1.e2]S*[e3]`, `S[e1]`, `S*[e2]` or `p[v]`.
    pub fn render(&self, g: &Graph) -> String {
        match (self.mu.is_empty(), self.nu.is_empty()) {
            (true, true) => format!("p[{}]", g.vertices()[self.mu.source()]),
            (false, true) => format!("S[{}]", self.mu.render(g)),
            (true, false) => format!("S*[{}]", self.nu.render(g)),
            (false, false) => format!("S[{}]S*[{}]", self.mu.render(g), self.nu.render(g)),
        }
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mu
            .len()
            .cmp(&other.mu.len())
            .then_with(|| self.nu.len().cmp(&other.nu.len()))
            .then_with(|| self.mu.cmp(&other.mu))
            .then_with(|| self.nu.cmp(&other.nu))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All words `S_mu S_nu^*` with `|mu| = r`, `|nu| = s`, in canonical order.
pub fn words_of_bidegree(g: &Graph, r: usize, s: usize) -> Vec<Word> {
    let left = super::path::paths_of_length(g, r);
    let right = super::path::paths_of_length(g, s);
    let mut out: Vec<Word> = left
        .iter()
        .flat_map(|mu| {
            right
                .iter()
                .filter_map(move |nu| Word::new(mu.clone(), nu.clone()))
        })
        .collect();
    out.sort();
    out
}

/// All words with `|mu|, |nu| <= max_len`.
pub fn words_up_to(g: &Graph, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for r in 0..=max_len {
        for s in 0..=max_len {
            out.extend(words_of_bidegree(g, r, s));
        }
    }
    out.sort();
    out
}
