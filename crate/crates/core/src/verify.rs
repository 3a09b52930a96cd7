//! Exhaustive property suites: the *-algebra axioms of the word calculus,
//! the KMS condition of the critical state, and the Cuntz-algebra lemmas
//! behind the filtration.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num::complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{paths_up_to, words_of_bidegree, words_up_to, Element, Word};
use crate::error::KmsError;
use crate::filtration::{check_bidegree_orthogonality, BidegreeCheck};
use crate::functional::{KmsState, TauFunctional};
use crate::graph::Graph;
use crate::linalg::{psd_rank, rank};
use crate::scalar::{ratio, Scalar};
use crate::spectral::is_row_regular;

/// Word lengths above this are not enumerated for pairwise checks.
const PAIR_CAP: usize = 3;
/// Word lengths above this are not enumerated for triple checks.
const TRIPLE_CAP: usize = 2;
const RANDOM_CASES: usize = 200;
const SEED: u64 = 0x6b6d_735f_7665_7269;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Kms,
    Lemmas,
    All,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "algebra" => Ok(Suite::Algebra),
            "kms" => Ok(Suite::Kms),
            "lemmas" => Ok(Suite::Lemmas),
            "all" => Ok(Suite::All),
            other => Err(format!(
                "unknown suite {other:?}; expected algebra, kms, lemmas or all"
            )),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Algebra => "algebra",
            Suite::Kms => "kms",
            Suite::Lemmas => "lemmas",
            Suite::All => "all",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub status: Status,
    pub cases: usize,
    pub failures: usize,
    /// Largest observed `|lhs - rhs|`; exactly 0 for a passing exact check.
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub notice: Option<String>,
}

impl CheckResult {
    fn skipped(suite: &'static str, name: &str, notice: &str) -> Self {
        CheckResult {
            suite,
            name: name.to_string(),
            status: Status::Skipped,
            cases: 0,
            failures: 0,
            max_deviation: 0.0,
            first_failure: None,
            notice: Some(notice.to_string()),
        }
    }

    /// One human-readable line, e.g. `PASS kms/twisted trace (2401 cases, max dev 0)`.
    pub fn line(&self, exact: bool, tol: f64) -> String {
        let tag = match self.status {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        };
        let mut out = format!("{tag} {}/{}", self.suite, self.name);
        match self.status {
            Status::Skipped => {
                if let Some(n) = &self.notice {
                    out.push_str(&format!(" ({n})"));
                }
            }
            _ => {
                let dev = if self.max_deviation == 0.0 {
                    "0".to_string()
                } else if exact {
                    format!("{:e}", self.max_deviation)
                } else if self.max_deviation <= tol {
                    format!("<= {tol:e}")
                } else {
                    format!("{:e}", self.max_deviation)
                };
                out.push_str(&format!(" ({} cases, max dev {dev})", self.cases));
                if let Some(f) = &self.first_failure {
                    out.push_str(&format!("; first failure: {f}"));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub suite: Suite,
    pub max_len: usize,
    pub tol: f64,
    pub exact: bool,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn lines(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| c.line(self.exact, self.tol))
            .collect()
    }
}

struct Tally {
    suite: &'static str,
    name: String,
    exact: bool,
    tol: f64,
    cases: usize,
    failures: usize,
    worst: f64,
    first: Option<String>,
}

impl Tally {
    fn new<S: Scalar>(suite: &'static str, name: &str, tol: f64) -> Self {
        Tally {
            suite,
            name: name.to_string(),
            exact: S::EXACT,
            tol,
            cases: 0,
            failures: 0,
            worst: 0.0,
            first: None,
        }
    }

    fn values<S: Scalar>(&mut self, lhs: &S, rhs: &S, ctx: impl FnOnce() -> String) {
        let dev = (lhs.clone() - rhs.clone()).modulus();
        let ok = if self.exact { lhs == rhs } else { dev <= self.tol };
        self.cases += 1;
        self.worst = self.worst.max(dev);
        if !ok {
            self.fail(ctx);
        }
    }

    fn truth(&mut self, ok: bool, ctx: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.worst = self.worst.max(1.0);
            self.fail(ctx);
        }
    }

    fn fail(&mut self, ctx: impl FnOnce() -> String) {
        self.failures += 1;
        if self.first.is_none() {
            self.first = Some(ctx());
        }
    }

    fn done(self) -> CheckResult {
        CheckResult {
            suite: self.suite,
            name: self.name,
            status: if self.failures == 0 {
                Status::Pass
            } else {
                Status::Fail
            },
            cases: self.cases,
            failures: self.failures,
            max_deviation: self.worst,
            first_failure: self.first,
            notice: None,
        }
    }
}

fn random_elements<S: Scalar>(
    g: &Arc<Graph>,
    pool: &[Word],
    count: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Element<S>> {
    (0..count)
        .map(|_| {
            let terms = rng.gen_range(1..=3);
            Element::from_terms(
                g,
                (0..terms).map(|_| {
                    let w = pool[rng.gen_range(0..pool.len())].clone();
                    let c = ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
                    (w, S::from_ratio(&c))
                }),
            )
        })
        .collect()
}

fn algebra_suite<S: Scalar>(state: &KmsState<S>, max_len: usize, tol: f64) -> Vec<CheckResult> {
    const SUITE: &str = "algebra";
    let g = state.graph();
    let words = words_up_to(g, max_len);
    let pairs = words_up_to(g, max_len.min(PAIR_CAP));
    let triples = words_up_to(g, max_len.min(TRIPLE_CAP));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let random: Vec<Element<S>> = random_elements(g, &words, 3 * RANDOM_CASES, &mut rng);
    let el = |w: &Word| Element::<S>::from_word(g, w.clone());
    let mut out = Vec::new();

    let mut t = Tally::new::<S>(SUITE, "associativity (words)", tol);
    for a in &triples {
        for b in &triples {
            let ab = a.multiply(b);
            for c in &triples {
                let left = ab.as_ref().and_then(|ab| ab.multiply(c));
                let right = b.multiply(c).and_then(|bc| a.multiply(&bc));
                t.truth(left == right, || {
                    format!("({})({})({})", a.render(g), b.render(g), c.render(g))
                });
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "associativity (elements)", tol);
    for abc in random.chunks(3) {
        let (a, b, c) = (&abc[0], &abc[1], &abc[2]);
        let left = &(a * b) * c;
        let right = a * &(b * c);
        t.truth(left.equals(&right), || {
            format!("({})({})({})", a.render(), b.render(), c.render())
        });
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "involution", tol);
    for w in &words {
        t.truth(w.adjoint().adjoint() == *w, || w.render(g));
    }
    for a in &random {
        t.truth(a.adjoint().adjoint() == *a, || a.render());
    }
    for a in &pairs {
        for b in &pairs {
            let lhs = a.multiply(b).map(|w| w.adjoint());
            let rhs = b.adjoint().multiply(&a.adjoint());
            t.truth(lhs == rhs, || format!("({})({})", a.render(g), b.render(g)));
        }
    }
    for ab in random.chunks(2) {
        let lhs = (&ab[0] * &ab[1]).adjoint();
        let rhs = &ab[1].adjoint() * &ab[0].adjoint();
        t.truth(lhs.equals(&rhs), || format!("({})({})", ab[0].render(), ab[1].render()));
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "unit", tol);
    let one = Element::<S>::unit(g);
    for a in words.iter().map(el).chain(random.iter().cloned()) {
        t.truth((&one * &a).equals(&a) && (&a * &one).equals(&a), || a.render());
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "Cuntz-Krieger relations", tol);
    for e in 0..g.edge_count() {
        let s = Element::<S>::edge(g, e);
        let lhs = &s.adjoint() * &s;
        t.truth(lhs == Element::projection(g, g.target(e)), || {
            format!("S*[{0}]S[{0}]", g.edge(e).id)
        });
    }
    for v in 0..g.vertex_count() {
        let mut sum = Element::<S>::zero(g);
        for &e in g.out_edges(v) {
            let s = Element::<S>::edge(g, e);
            sum = &sum + &(&s * &s.adjoint());
        }
        let diff = &Element::projection(g, v) - &sum;
        let zero = diff.normal_form(1).map(|d| d.is_zero()).unwrap_or(false);
        t.truth(zero, || format!("p[{}]", g.vertices()[v]));
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "matrix units", tol);
    for k in 0..=max_len.min(PAIR_CAP) {
        let basis = words_of_bidegree(g, k, k);
        for a in &basis {
            for b in &basis {
                let expected = (a.nu() == b.mu()).then(|| Word::new(a.mu().clone(), b.nu().clone()));
                let got = a.multiply(b);
                t.truth(got == expected.flatten(), || format!("({})({})", a.render(g), b.render(g)));
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "degree additivity", tol);
    for a in &pairs {
        for b in &pairs {
            if let Some(ab) = a.multiply(b) {
                t.truth(ab.degree() == a.degree() + b.degree(), || {
                    format!("({})({})", a.render(g), b.render(g))
                });
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "expand_once", tol);
    for w in &words {
        let expanded = w.expand_once(g);
        let raised = expanded.iter().all(|x| x.min_len() == w.min_len() + 1);
        let sum = Element::<S>::from_terms(g, expanded.into_iter().map(|x| (x, S::one())));
        t.truth(raised && sum.equals(&el(w)), || w.render(g));
    }
    out.push(t.done());
    out
}

fn kms_suite<S: Scalar>(state: &KmsState<S>, max_len: usize, tol: f64) -> Vec<CheckResult> {
    const SUITE: &str = "kms";
    let g = state.graph();
    let words = words_up_to(g, max_len);
    let pairs = words_up_to(g, max_len.min(PAIR_CAP));
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 1);
    let random: Vec<Element<S>> = random_elements(g, &words, RANDOM_CASES, &mut rng);
    let el = |w: &Word| Element::<S>::from_word(g, w.clone());
    let mut out = Vec::new();

    let mut t = Tally::new::<S>(SUITE, "normalization", tol);
    t.values(&state.phi(&Element::unit(g)), &S::one(), || "phi(1)".into());
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "twisted trace", tol);
    for a in &pairs {
        for b in &pairs {
            let ab = a.multiply(b).map(|w| state.phi_word(&w)).unwrap_or_else(S::zero);
            let ba = b.multiply(a).map(|w| state.phi_word(&w)).unwrap_or_else(S::zero);
            t.values(&ab, &(state.rho_power(a.degree()) * ba), || {
                format!("a = {}, b = {}", a.render(g), b.render(g))
            });
        }
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "gauge invariance", tol);
    let complex = KmsState::new(
        Arc::clone(g),
        state.rho().to_complex(),
        state.weights().iter().map(Scalar::to_complex).collect(),
    );
    match complex {
        Ok(cs) => {
            let angles = [0.3, 1.0, 2.0, std::f64::consts::PI];
            let mut ct = Tally::new::<Complex64>(SUITE, "", tol);
            for a in words.iter().map(el).chain(random.iter().cloned()) {
                let a = a.map_scalar(Scalar::to_complex);
                let base = cs.phi(&a);
                for &theta in &angles {
                    let z = Complex64::from_polar(1.0, theta);
                    ct.values(&cs.phi(&a.gauge_action(z)), &base, || {
                        format!("{} at angle {theta}", a.render())
                    });
                }
            }
            t.cases = ct.cases;
            t.failures = ct.failures;
            t.worst = ct.worst;
            t.first = ct.first;
        }
        Err(e) => t.truth(false, || e.to_string()),
    }
    let mut r = t.done();
    if S::EXACT {
        r.notice = Some("complex rotation evaluated in floating point".into());
    }
    out.push(r);

    let mut t = Tally::new::<S>(SUITE, "positivity phi(a*a) >= 0", tol);
    for a in &random {
        let v = state.phi(&(&a.adjoint() * a));
        let ok = if S::EXACT {
            v.real() >= 0.0
        } else {
            v.real() >= -tol && v.to_complex().im.abs() <= tol
        };
        t.truth(ok, || a.render());
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "Gram positive semidefinite", tol);
    let small: Vec<Element<S>> = words_up_to(g, max_len.min(2)).iter().map(el).collect();
    match state.gram(&small) {
        Ok(gram) => t.truth(psd_rank(&gram, tol).is_some(), || {
            format!("Gram of {} words up to length {}", small.len(), max_len.min(2))
        }),
        Err(e) => t.truth(false, || e.to_string()),
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "Gram positive definite on balanced levels", tol);
    for k in 0..=max_len.min(PAIR_CAP) {
        let basis: Vec<Element<S>> = words_of_bidegree(g, k, k).iter().map(el).collect();
        match state.gram(&basis) {
            Ok(gram) => {
                let pd = psd_rank(&gram, tol).is_some_and(|s| s.rank == basis.len())
                    && rank(&gram) == basis.len();
                t.truth(pd, || format!("level {k}"));
            }
            Err(e) => t.truth(false, || e.to_string()),
        }
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, "normal-form invariance", tol);
    for a in words.iter().map(el).chain(random.iter().cloned()) {
        let base = state.phi(&a);
        for level in a.min_level()..=max_len {
            match a.normal_form(level) {
                Ok(nf) => t.values(&state.phi(&nf), &base, || format!("{} at level {level}", a.render())),
                Err(e) => t.truth(false, || e.to_string()),
            }
        }
    }
    out.push(t.done());

    if is_row_regular(&g.vertex_matrix()) {
        let mut t = Tally::new::<S>(SUITE, "phi/tau proportionality", tol);
        let tau = TauFunctional::new(Arc::clone(g));
        let c = S::one() / (S::from_integer(g.vertex_count() as i64) * state.rho().clone());
        for w in words_of_bidegree(g, 1, 1) {
            let e = el(&w);
            match tau.tau(&e) {
                Ok(tv) => t.values(&state.phi(&e), &(c.clone() * tv), || w.render(g)),
                Err(err) => t.truth(false, || err.to_string()),
            }
        }
        out.push(t.done());
    } else {
        out.push(CheckResult::skipped(
            SUITE,
            "phi/tau proportionality",
            "vertex matrix is not row-regular",
        ));
    }
    out
}

fn lemma_suite<S: Scalar>(state: &KmsState<S>, max_len: usize, tol: f64) -> Vec<CheckResult> {
    const SUITE: &str = "lemmas";
    const PLUG: &str = "plug lemma phi(S_mu a S_nu*) = delta n^-|mu| phi(a)";
    const BIDEGREE: &str = "bidegree orthogonality of B(r,s) and B(r',s')";
    let g = state.graph();
    if !g.is_cuntz() {
        let notice = "Cuntz-only lemma; graph has more than one vertex";
        return vec![
            CheckResult::skipped(SUITE, PLUG, notice),
            CheckResult::skipped(SUITE, BIDEGREE, notice),
        ];
    }
    let short = max_len.min(TRIPLE_CAP);
    let mut out = Vec::new();

    let mut t = Tally::new::<S>(SUITE, PLUG, tol);
    let paths = paths_up_to(g, short);
    let plugs: Vec<Element<S>> = words_up_to(g, short)
        .into_iter()
        .map(|w| Element::from_word(g, w))
        .collect();
    for mu in &paths {
        for nu in paths.iter().filter(|nu| nu.len() == mu.len()) {
            let left = Element::<S>::from_word(g, Word::creation(mu.clone()));
            let right = Element::<S>::from_word(g, Word::annihilation(nu.clone()));
            for a in &plugs {
                let lhs = state.phi(&(&(&left * a) * &right));
                let rhs = if mu == nu {
                    state.rho_power(mu.len() as i64) * state.phi(a)
                } else {
                    S::zero()
                };
                t.values(&lhs, &rhs, || {
                    format!("mu = {}, nu = {}, a = {}", mu.render(g), nu.render(g), a.render())
                });
            }
        }
    }
    out.push(t.done());

    let mut t = Tally::new::<S>(SUITE, BIDEGREE, tol);
    let top = max_len.min(PAIR_CAP);
    for r in 0..=top {
        for s in 0..=top {
            for r2 in 0..=top {
                for s2 in 0..=top {
                    match check_bidegree_orthogonality(state, (r, s), (r2, s2), top) {
                        Ok(BidegreeCheck::Passed { pairs }) => t.cases += pairs,
                        Ok(BidegreeCheck::Failed { pairs, max_abs_inner }) => {
                            t.cases += pairs;
                            t.worst = t.worst.max(max_abs_inner);
                            t.fail(|| format!("B({r},{s}) vs B({r2},{s2})"));
                        }
                        Ok(_) => {}
                        Err(e) => t.truth(false, || e.to_string()),
                    }
                }
            }
        }
    }
    out.push(t.done());
    out
}

/// Runs `suite` exhaustively up to word length `max_len`.
pub fn run_suite<S: Scalar>(
    state: &KmsState<S>,
    suite: Suite,
    max_len: usize,
    tol: f64,
) -> Result<VerifyReport, KmsError> {
    let mut checks = Vec::new();
    if matches!(suite, Suite::Algebra | Suite::All) {
        checks.extend(algebra_suite(state, max_len, tol));
    }
    if matches!(suite, Suite::Kms | Suite::All) {
        checks.extend(kms_suite(state, max_len, tol));
    }
    if matches!(suite, Suite::Lemmas | Suite::All) {
        checks.extend(lemma_suite(state, max_len, tol));
    }
    let passed = checks.iter().all(|c| c.status != Status::Fail);
    Ok(VerifyReport {
        suite,
        max_len,
        tol,
        exact: S::EXACT,
        checks,
        passed,
    })
}
