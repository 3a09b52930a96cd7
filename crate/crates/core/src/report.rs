//! The command layer behind the `graphkms` binary: each command loads a
//! graph document, runs the analysis and returns a serializable [`Report`]
//! together with human-readable lines and an exit code.
//!
//! Exit codes: 0 success, 1 analysis or verification failure, 2 invalid input.

use std::fmt;
use std::path::Path as FsPath;
use std::sync::Arc;

use num::complex::Complex64;
use serde::Serialize;

use crate::algebra::{words_up_to, Element};
use crate::error::KmsError;
use crate::expr::parse_element;
use crate::filtration::{
    decompose_word, required_labels, verify_orthogonality, Filtration, Label, OrthogonalityReport,
};
use crate::functional::{KmsState, TauFunctional};
use crate::graph::Graph;
use crate::scalar::{Rational, Scalar};
use crate::spectral::{is_row_regular, kms_verdict, KmsVerdict};
use crate::verify::{run_suite, Suite, VerifyReport};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// A command that could not produce a report.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandError {
    pub code: i32,
    pub message: String,
}

impl CommandError {
    fn invalid(message: impl Into<String>) -> Self {
        CommandError {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn failure(message: impl Into<String>) -> Self {
        CommandError {
            code: EXIT_FAILURE,
            message: message.into(),
        }
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CommandError {}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeSummary {
    pub id: String,
    pub src: String,
    pub dst: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GraphSummary {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeSummary>,
    pub vertex_matrix: Vec<Vec<u64>>,
    pub no_sink: bool,
    /// Every vertex is the source or target of some edge (the weak incidence condition).
    pub connected: bool,
    pub weakly_connected: bool,
    pub strongly_connected: bool,
    pub row_regular: bool,
    pub cuntz: bool,
}

impl GraphSummary {
    pub fn of(g: &Graph) -> Self {
        let d = g.vertex_matrix();
        GraphSummary {
            vertices: g.vertices().to_vec(),
            edges: g
                .edges()
                .iter()
                .map(|e| EdgeSummary {
                    id: e.id.clone(),
                    src: g.vertices()[e.source].clone(),
                    dst: g.vertices()[e.target].clone(),
                })
                .collect(),
            vertex_matrix: d.rows().to_vec(),
            no_sink: g.has_no_sink(),
            connected: g.is_connected(),
            weakly_connected: g.is_weakly_connected(),
            strongly_connected: g.is_strongly_connected(),
            row_regular: is_row_regular(&d),
            cuntz: g.is_cuntz(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Arithmetic {
    Exact,
    Float,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Evaluation {
    pub expression: String,
    /// The parsed element in canonical term order.
    pub parsed: String,
    pub phi: String,
    pub phi_decimal: f64,
    /// `tau(a)` when every term is a single-edge word `S_i S_j^*`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentSummary {
    pub label: Label,
    pub dimension: usize,
    pub orthonormal: bool,
    pub orthogonal: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DensitySummary {
    /// Words `S_mu S_nu^*` whose bidegree is covered by the truncation.
    pub words: usize,
    pub complete: usize,
    pub max_residual_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_incomplete: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FiltrationSection {
    pub max_k: usize,
    pub max_r: usize,
    pub components: Vec<ComponentSummary>,
    pub verification: OrthogonalityReport,
    pub density: DensitySummary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Report {
    pub toolkit: &'static str,
    pub toolkit_version: &'static str,
    pub command: &'static str,
    pub arithmetic: Arithmetic,
    pub graph: GraphSummary,
    pub kms: KmsVerdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<Evaluation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filtration: Option<FiltrationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerifyReport>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// A finished command: the report, its text rendering and the exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub lines: Vec<String>,
    pub exit_code: i32,
}

enum State {
    Exact(KmsState<Rational>),
    Float(KmsState<Complex64>),
}

struct Loaded {
    graph: Arc<Graph>,
    verdict: KmsVerdict,
    state: Option<State>,
}

impl Loaded {
    fn arithmetic(&self) -> Arithmetic {
        match self.state {
            Some(State::Float(_)) => Arithmetic::Float,
            _ if self.verdict.spectral.is_exact => Arithmetic::Exact,
            _ => Arithmetic::Float,
        }
    }

    fn report(&self, command: &'static str) -> Report {
        Report {
            toolkit: "graphkms",
            toolkit_version: TOOLKIT_VERSION,
            command,
            arithmetic: self.arithmetic(),
            graph: GraphSummary::of(&self.graph),
            kms: self.verdict.clone(),
            evaluation: None,
            filtration: None,
            verification: None,
            warnings: Vec::new(),
        }
    }

    fn require_state(&self) -> Result<&State, CommandError> {
        self.state
            .as_ref()
            .ok_or_else(|| CommandError::failure(KmsError::NoState.to_string()))
    }
}

pub fn load_graph(path: &FsPath) -> Result<Graph, CommandError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CommandError::invalid(format!("cannot read {}: {e}", path.display())))?;
    Graph::from_json(&text).map_err(|e| CommandError::invalid(e.to_string()))
}

fn analyze_graph(graph: Graph) -> Result<Loaded, CommandError> {
    let verdict = kms_verdict(&graph).map_err(|e| match e {
        crate::error::SpectralError::Sink(_) => CommandError::invalid(e.to_string()),
        other => CommandError::failure(other.to_string()),
    })?;
    let graph = Arc::new(graph);
    let state = if !verdict.exists_on_graph_algebra {
        None
    } else if let Ok(s) = KmsState::exact(Arc::clone(&graph)) {
        Some(State::Exact(s))
    } else {
        let s = KmsState::float(Arc::clone(&graph)).map_err(|e| CommandError::failure(e.to_string()))?;
        Some(State::Float(s))
    };
    Ok(Loaded {
        graph,
        verdict,
        state,
    })
}

/// Decimal for ordinary magnitudes, scientific for tiny ones.
fn fmt_f64(x: f64) -> String {
    if x == 0.0 || x.abs() >= 1e-4 {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}

fn verdict_lines(l: &Loaded) -> Vec<String> {
    let s = GraphSummary::of(&l.graph);
    let v = &l.verdict;
    let mut out = vec![
        format!(
            "graph: {} vertices, {} edges",
            l.graph.vertex_count(),
            l.graph.edge_count()
        ),
        format!(
            "flags: no-sink={} connected={} weakly-connected={} strongly-connected={} row-regular={}",
            s.no_sink, s.connected, s.weakly_connected, s.strongly_connected, s.row_regular
        ),
    ];
    let rho = l
        .verdict
        .spectral
        .rho_exact
        .as_ref()
        .map(Scalar::render)
        .unwrap_or_else(|| format!("{}", v.spectral.rho));
    out.push(format!("rho(D) = {rho}, beta = ln rho = {}", v.beta_critical));
    if v.exists_on_graph_algebra {
        let w = match &v.state_vector_exact {
            Some(ws) => format!("({})", ws.join(", ")),
            None => fmt_vec(v.state_vector.as_deref().unwrap_or(&[])),
        };
        out.push(format!("verdict: exists, w = {w}"));
    } else {
        out.push("verdict: no faithful-on-F_k critical KMS state".to_string());
    }
    if v.non_unique {
        out.push(format!(
            "non-unique: eigenspace dimension {}",
            v.spectral.eigenspace_dim
        ));
    }
    out.push(format!("diagnostics: {}", v.diagnostics));
    out
}

pub fn cmd_analyze_graph(graph: Graph) -> Result<Outcome, CommandError> {
    let loaded = analyze_graph(graph)?;
    Ok(Outcome {
        report: loaded.report("analyze"),
        lines: verdict_lines(&loaded),
        exit_code: EXIT_OK,
    })
}

pub fn cmd_analyze(path: &FsPath) -> Result<Outcome, CommandError> {
    cmd_analyze_graph(load_graph(path)?)
}

fn evaluate<S: Scalar>(state: &KmsState<S>, a: &Element<Rational>) -> (S, Option<S>) {
    let a = a.map_scalar(S::from_ratio);
    let phi = state.phi(&a);
    let tau = TauFunctional::new(Arc::clone(state.graph())).tau(&a).ok();
    (phi, tau)
}

pub fn cmd_eval_graph(graph: Graph, expression: &str) -> Result<Outcome, CommandError> {
    let loaded = analyze_graph(graph)?;
    let element =
        parse_element(&loaded.graph, expression).map_err(|e| CommandError::invalid(e.to_string()))?;
    let evaluation = match loaded.require_state()? {
        State::Exact(s) => {
            let (phi, tau) = evaluate(s, &element);
            Evaluation {
                expression: expression.to_string(),
                parsed: element.render(),
                phi: phi.render(),
                phi_decimal: phi.real(),
                tau: tau.map(|t| t.render()),
            }
        }
        State::Float(s) => {
            let (phi, tau) = evaluate(s, &element);
            Evaluation {
                expression: expression.to_string(),
                parsed: element.render(),
                phi: phi.render(),
                phi_decimal: phi.re,
                tau: tau.map(|t| t.render()),
            }
        }
    };
    let mut lines = vec![
        format!("element: {}", evaluation.parsed),
        format!("phi = {}", evaluation.phi),
    ];
    if let Some(t) = &evaluation.tau {
        lines.push(format!("tau = {t}"));
    }
    let mut report = loaded.report("eval");
    report.evaluation = Some(evaluation);
    Ok(Outcome {
        report,
        lines,
        exit_code: EXIT_OK,
    })
}

pub fn cmd_eval(path: &FsPath, expression: &str) -> Result<Outcome, CommandError> {
    cmd_eval_graph(load_graph(path)?, expression)
}

fn build_filtration<S: Scalar>(
    state: &KmsState<S>,
    max_k: usize,
    max_r: usize,
) -> Result<FiltrationSection, KmsError> {
    let filt = Filtration::build(state, max_k, max_r)?;
    let verification = verify_orthogonality(state, &filt.components)?;
    let g = state.graph();
    let mut density = DensitySummary {
        words: 0,
        complete: 0,
        max_residual_norm: 0.0,
        first_incomplete: None,
        passed: true,
    };
    for w in words_up_to(g, max_k.max(max_r)) {
        if !required_labels(&w).iter().all(|l| filt.get(*l).is_some()) {
            continue;
        }
        let d = decompose_word(state, &w, &filt.components)?;
        density.words += 1;
        density.max_residual_norm = density.max_residual_norm.max(d.residual_norm());
        if d.is_complete() {
            density.complete += 1;
        } else if density.first_incomplete.is_none() {
            density.first_incomplete = Some(w.render(g));
        }
    }
    density.passed = density.complete == density.words;
    let components = filt
        .components
        .iter()
        .map(|c| {
            let orthogonal = verification
                .within
                .iter()
                .find(|p| p.pair.0 == c.label)
                .is_none_or(|p| p.passed);
            ComponentSummary {
                label: c.label,
                dimension: c.dimension(),
                orthonormal: c.orthonormal && orthogonal,
                orthogonal,
            }
        })
        .collect();
    Ok(FiltrationSection {
        max_k,
        max_r,
        components,
        verification,
        density,
    })
}

pub fn cmd_filtration_graph(graph: Graph, max_k: usize, max_r: usize) -> Result<Outcome, CommandError> {
    let loaded = analyze_graph(graph)?;
    let section = match loaded.require_state()? {
        State::Exact(s) => build_filtration(s, max_k, max_r),
        State::Float(s) => build_filtration(s, max_k, max_r),
    }
    .map_err(|e| CommandError::failure(e.to_string()))?;
    let mut report = loaded.report("filtration");
    if !loaded.graph.is_cuntz() && max_r > 0 {
        report.warnings.push(
            "V components are defined only on the Cuntz graph (one vertex); W-only output".into(),
        );
    }
    let mut lines: Vec<String> = report.warnings.iter().map(|w| format!("warning: {w}")).collect();
    for c in &section.components {
        lines.push(format!(
            "{} dim {} {}",
            c.label,
            c.dimension,
            if c.orthonormal {
                "orthonormal"
            } else if c.orthogonal {
                "orthogonal"
            } else {
                "NOT orthogonal"
            }
        ));
    }
    let worst = section
        .verification
        .pairs
        .iter()
        .map(|p| p.max_abs_inner)
        .fold(0.0, f64::max);
    lines.push(format!(
        "orthogonality: {} ({} pairs, max |<a,b>| = {})",
        if section.verification.passed { "PASS" } else { "FAIL" },
        section.verification.pairs.len(),
        fmt_f64(worst)
    ));
    lines.push(format!(
        "density: {} ({}/{} words, max residual norm {})",
        if section.density.passed { "PASS" } else { "FAIL" },
        section.density.complete,
        section.density.words,
        fmt_f64(section.density.max_residual_norm)
    ));
    let exit_code = if section.verification.passed && section.density.passed {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    report.filtration = Some(section);
    Ok(Outcome {
        report,
        lines,
        exit_code,
    })
}

pub fn cmd_filtration(path: &FsPath, max_k: usize, max_r: usize) -> Result<Outcome, CommandError> {
    cmd_filtration_graph(load_graph(path)?, max_k, max_r)
}

pub fn cmd_verify_graph(
    graph: Graph,
    suite: &str,
    max_len: usize,
    tol: f64,
) -> Result<Outcome, CommandError> {
    let suite: Suite = suite.parse().map_err(CommandError::invalid)?;
    if !(tol.is_finite() && tol >= 0.0) {
        return Err(CommandError::invalid(format!("invalid tolerance {tol}")));
    }
    let loaded = analyze_graph(graph)?;
    let verification = match loaded.require_state()? {
        State::Exact(s) => run_suite(s, suite, max_len, tol),
        State::Float(s) => run_suite(s, suite, max_len, tol),
    }
    .map_err(|e| CommandError::failure(e.to_string()))?;
    let mut lines = verification.lines();
    lines.push(format!(
        "{}: {} checks",
        if verification.passed { "ALL PASS" } else { "FAILED" },
        verification.checks.len()
    ));
    let exit_code = if verification.passed {
        EXIT_OK
    } else {
        EXIT_FAILURE
    };
    let mut report = loaded.report("verify");
    report.verification = Some(verification);
    Ok(Outcome {
        report,
        lines,
        exit_code,
    })
}

pub fn cmd_verify(path: &FsPath, suite: &str, max_len: usize, tol: f64) -> Result<Outcome, CommandError> {
    cmd_verify_graph(load_graph(path)?, suite, max_len, tol)
}
