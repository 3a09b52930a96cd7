//! Spectral radius, Perron eigenvectors and the critical KMS verdict.
//!
//! The radius is computed exactly for constant row sums and otherwise by
//! power iteration on `D_c + I` over each strongly connected block `D_c`
//! (the shift makes every irreducible block primitive, so the iteration
//! converges geometrically). A strictly positive eigenvector for `rho(D)`
//! exists iff the final classes of the condensation are exactly the classes
//! whose block radius equals `rho(D)`; when it exists it is assembled class by
//! class, sinks first.

use num::ToPrimitive;
use serde::Serialize;

use crate::error::SpectralError;
use crate::graph::{tarjan, Graph, VertexMatrix};
use crate::linalg::{null_space, rank, solve, Matrix};
use crate::scalar::{Rational, Scalar};

/// Absolute tolerance used for all real comparisons.
pub const TOL: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 100_000;
const POWER_TOL: f64 = 1e-14;

/// Result of a power iteration run.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerIteration {
    pub rho: f64,
    /// Normalized to sum 1.
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

/// Power iteration on `D + I` from the uniform vector.
pub fn power_iteration(d: &VertexMatrix) -> Result<PowerIteration, SpectralError> {
    let m = d.dim();
    let mut x = vec![1.0 / m as f64; m];
    let mut step = 0.0;
    for it in 1..=MAX_ITERATIONS {
        let mut y = d.apply(&x);
        for (yi, xi) in y.iter_mut().zip(&x) {
            *yi += xi;
        }
        let lambda: f64 = y.iter().sum();
        for yi in y.iter_mut() {
            *yi /= lambda;
        }
        step = y
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        x = y;
        if step <= POWER_TOL {
            let rho = lambda - 1.0;
            return Ok(PowerIteration {
                rho,
                residual: eigen_residual(d, rho, &x),
                vector: x,
                iterations: it,
            });
        }
    }
    Err(SpectralError::NoConvergence {
        iterations: MAX_ITERATIONS,
        residual: step,
    })
}

/// `max_i |(D w)_i - rho w_i|`.
pub fn eigen_residual(d: &VertexMatrix, rho: f64, w: &[f64]) -> f64 {
    d.apply(w)
        .iter()
        .zip(w)
        .map(|(dw, wi)| (dw - rho * wi).abs())
        .fold(0.0, f64::max)
}

/// Spectral data for a vertex matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SpectralData {
    pub rho: f64,
    /// Exact value of `rho` when it is a verified integer eigenvalue.
    #[serde(skip)]
    pub rho_exact: Option<Rational>,
    pub is_exact: bool,
    /// Positive eigenvector for `rho`, normalized to sum 1.
    pub eigenvector: Option<Vec<f64>>,
    #[serde(skip)]
    pub eigenvector_exact: Option<Vec<Rational>>,
    /// Dimension of the eigenspace of `rho`.
    pub eigenspace_dim: usize,
    pub non_unique: bool,
    pub residual: f64,
}

struct ClassInfo {
    members: Vec<usize>,
    rho: f64,
    perron: Option<Vec<f64>>,
    is_final: bool,
}

fn classes(d: &VertexMatrix) -> Result<Vec<ClassInfo>, SpectralError> {
    let m = d.dim();
    let adj: Vec<Vec<usize>> = (0..m)
        .map(|i| (0..m).filter(|&j| d.get(i, j) > 0).collect())
        .collect();
    let comps = tarjan(&adj);
    let mut class_of = vec![0; m];
    for (c, members) in comps.iter().enumerate() {
        for &v in members {
            class_of[v] = c;
        }
    }
    comps
        .into_iter()
        .enumerate()
        .map(|(c, members)| {
            let is_final = members
                .iter()
                .all(|&i| adj[i].iter().all(|&j| class_of[j] == c));
            let block = d.principal(&members);
            let (rho, perron) = if members.len() == 1 && block.get(0, 0) == 0 {
                (0.0, None)
            } else if let Some(r) = block.constant_row_sum() {
                (r as f64, Some(vec![1.0 / members.len() as f64; members.len()]))
            } else {
                let run = power_iteration(&block)?;
                (run.rho, Some(run.vector))
            };
            Ok(ClassInfo {
                members,
                rho,
                perron,
                is_final,
            })
        })
        .collect()
}

fn integer_matrix<S: Scalar>(d: &VertexMatrix, shift: &S) -> Matrix<S> {
    let m = d.dim();
    (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let x = S::from_integer(d.get(i, j) as i64);
                    if i == j {
                        x - shift.clone()
                    } else {
                        x
                    }
                })
                .collect()
        })
        .collect()
}

/// `rho(D)`: exact for constant row sums, power iteration per block otherwise.
pub fn spectral_radius(d: &VertexMatrix) -> Result<SpectralData, SpectralError> {
    let m = d.dim();
    if let Some(r) = d.constant_row_sum() {
        let rho = r as f64;
        return Ok(SpectralData {
            rho,
            rho_exact: Some(Rational::from_integer(r.into())),
            is_exact: true,
            eigenvector: None,
            eigenvector_exact: None,
            eigenspace_dim: m - rank(&integer_matrix(d, &Rational::from_integer(r.into()))),
            non_unique: false,
            residual: 0.0,
        });
    }
    let info = classes(d)?;
    let rho = info.iter().map(|c| c.rho).fold(0.0, f64::max);
    let nearest = rho.round();
    let mut rho_exact = None;
    let mut eigenspace_dim = 0;
    if (rho - nearest).abs() <= TOL {
        let p = Rational::from_integer((nearest as i64).into());
        let nullity = m - rank(&integer_matrix(d, &p));
        if nullity > 0 {
            rho_exact = Some(p);
            eigenspace_dim = nullity;
        }
    }
    if rho_exact.is_none() {
        let shifted = integer_matrix(d, &num::complex::Complex64::new(rho, 0.0));
        eigenspace_dim = m - float_rank(&shifted);
    }
    Ok(SpectralData {
        rho: rho_exact.as_ref().map_or(rho, |p| p.to_f64().unwrap_or(rho)),
        is_exact: rho_exact.is_some(),
        rho_exact,
        eigenvector: None,
        eigenvector_exact: None,
        eigenspace_dim: eigenspace_dim.max(1),
        non_unique: false,
        residual: 0.0,
    })
}

// Rank of `D - rho I` with a tolerance loose enough for an approximate rho.
fn float_rank(a: &Matrix<num::complex::Complex64>) -> usize {
    let n = a.len();
    let mut work: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
    let mut r = 0;
    for c in 0..n {
        let Some(best) = (r..n).max_by(|&i, &j| work[i][c].abs().total_cmp(&work[j][c].abs()))
        else {
            break;
        };
        if work[best][c].abs() <= 1e-7 {
            continue;
        }
        work.swap(r, best);
        for i in r + 1..n {
            let f = work[i][c] / work[r][c];
            let pivot_row = work[r].clone();
            for (x, p) in work[i][c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= f * p;
            }
        }
        r += 1;
    }
    r
}

/// Assembles a positive eigenvector from per-class Perron vectors,
/// solving `(rho I - D_cc) w_c = D_{c,rest} w_rest` for transient classes.
fn assemble<S: Scalar>(
    d: &VertexMatrix,
    rho: &S,
    info: &[ClassInfo],
    perron: impl Fn(&ClassInfo) -> Option<Vec<S>>,
) -> Option<Vec<S>> {
    let m = d.dim();
    let mut w: Vec<Option<S>> = vec![None; m];
    for class in info {
        let values = if class.is_final {
            perron(class)?
        } else {
            let a: Matrix<S> = class
                .members
                .iter()
                .map(|&i| {
                    class
                        .members
                        .iter()
                        .map(|&j| {
                            let dij = S::from_integer(d.get(i, j) as i64);
                            if i == j {
                                rho.clone() - dij
                            } else {
                                -dij
                            }
                        })
                        .collect()
                })
                .collect();
            let b: Vec<S> = class
                .members
                .iter()
                .map(|&i| {
                    (0..m)
                        .filter(|j| !class.members.contains(j))
                        .fold(S::zero(), |acc, j| match &w[j] {
                            Some(wj) => acc + S::from_integer(d.get(i, j) as i64) * wj.clone(),
                            None => acc,
                        })
                })
                .collect();
            solve(&a, &b)?
        };
        for (&v, x) in class.members.iter().zip(values) {
            w[v] = Some(x);
        }
    }
    let w: Vec<S> = w.into_iter().collect::<Option<_>>()?;
    let total = w.iter().cloned().fold(S::zero(), |a, b| a + b);
    Some(w.into_iter().map(|x| x / total.clone()).collect())
}

/// Spectral radius together with a normalized positive eigenvector, when one exists.
pub fn critical_eigenvector(d: &VertexMatrix) -> Result<SpectralData, SpectralError> {
    let mut data = spectral_radius(d)?;
    let m = d.dim();
    data.non_unique = data.eigenspace_dim > 1;

    if let Some(r) = d.constant_row_sum() {
        let uniform = Rational::new(1.into(), (m as i64).into());
        data.eigenvector = Some(vec![1.0 / m as f64; m]);
        data.eigenvector_exact = Some(vec![uniform; m]);
        data.residual = 0.0;
        debug_assert_eq!(data.rho, r as f64);
        return Ok(data);
    }

    let info = classes(d)?;
    let basic = |c: &ClassInfo| (c.rho - data.rho).abs() <= TOL;
    let admissible = info.iter().all(|c| c.is_final == basic(c));
    if !admissible {
        return Ok(data);
    }

    if let Some(p) = data.rho_exact.clone() {
        let exact = assemble(d, &p, &info, |class| {
            let block = d.principal(&class.members);
            let mut ns = null_space(&integer_matrix(&block, &p));
            if ns.len() != 1 {
                return None;
            }
            let v = ns.pop()?;
            let total = v.iter().cloned().fold(Rational::zero(), |a, b| a + b);
            Some(v.into_iter().map(|x| x / total.clone()).collect())
        });
        if let Some(w) = exact.filter(|w| w.iter().all(|x| x > &Rational::zero())) {
            data.eigenvector = Some(w.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect());
            data.eigenvector_exact = Some(w);
        }
    }
    if data.eigenvector.is_none() {
        let rho = num::complex::Complex64::new(data.rho, 0.0);
        let float = assemble(d, &rho, &info, |class| {
            class
                .perron
                .as_ref()
                .map(|v| v.iter().map(|&x| num::complex::Complex64::new(x, 0.0)).collect())
        });
        data.eigenvector = float
            .map(|w| w.into_iter().map(|z| z.re).collect::<Vec<f64>>())
            .filter(|w| w.iter().all(|&x| x > 0.0));
    }
    if let Some(w) = &data.eigenvector {
        data.residual = eigen_residual(d, data.rho, w);
        if data.residual > TOL {
            data.eigenvector = None;
            data.eigenvector_exact = None;
        }
    }
    Ok(data)
}

/// `(D N)_i <= e^beta N_i + TOL` for every vertex.
pub fn check_subinvariance(d: &VertexMatrix, n: &[f64], beta: f64) -> bool {
    let scale = beta.exp();
    d.apply(n)
        .iter()
        .zip(n)
        .all(|(dn, ni)| *dn <= scale * ni + TOL)
}

/// All row sums agree (their common value is then `rho(D)`).
pub fn is_row_regular(d: &VertexMatrix) -> bool {
    d.constant_row_sum().is_some()
}

/// Existence verdict for a KMS state at the critical inverse temperature.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KmsVerdict {
    pub beta_critical: f64,
    pub exists_on_graph_algebra: bool,
    pub state_vector: Option<Vec<f64>>,
    /// Exact probability vector when `rho` and the eigenvector are rational.
    pub state_vector_exact: Option<Vec<String>>,
    pub non_unique: bool,
    /// Strong connectivity, a sufficient condition for uniqueness.
    pub unique_by_strong_connectivity: bool,
    pub spectral: SpectralData,
    pub diagnostics: String,
}

/// Runs the spectral analysis on a sink-free graph and decides existence.
pub fn kms_verdict(g: &Graph) -> Result<KmsVerdict, SpectralError> {
    if let Some(&v) = g.sinks().first() {
        return Err(SpectralError::Sink(g.vertices()[v].clone()));
    }
    let d = g.vertex_matrix();
    let spectral = critical_eigenvector(&d)?;
    let exists = spectral.eigenvector.is_some();
    let diagnostics = if !exists {
        "no faithful-on-F_k critical KMS state: rho(D) has no strictly positive eigenvector"
            .to_string()
    } else if spectral.non_unique {
        format!(
            "eigenspace of rho(D) has dimension {}; the uniform-weight representative is reported",
            spectral.eigenspace_dim
        )
    } else if g.is_strongly_connected() {
        "strongly connected: the critical KMS state is unique".to_string()
    } else {
        "positive eigenvector found".to_string()
    };
    Ok(KmsVerdict {
        beta_critical: spectral.rho.ln(),
        exists_on_graph_algebra: exists,
        state_vector: spectral.eigenvector.clone(),
        state_vector_exact: spectral
            .eigenvector_exact
            .as_ref()
            .map(|w| w.iter().map(Scalar::render).collect()),
        non_unique: spectral.non_unique,
        unique_by_strong_connectivity: g.is_strongly_connected(),
        spectral,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;

    fn m(rows: &[&[u64]]) -> VertexMatrix {
        VertexMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
    }

    #[test]
    fn exact_radius_for_row_regular() {
        let d = m(&[&[0, 1], &[1, 0]]);
        let s = spectral_radius(&d).unwrap();
        assert_eq!(s.rho, 1.0);
        assert!(s.is_exact);
        assert_eq!(spectral_radius(&m(&[&[5]])).unwrap().rho, 5.0);
        let id = Graph::disjoint_leaves(3).vertex_matrix();
        let s = spectral_radius(&id).unwrap();
        assert_eq!(s.rho, 1.0);
        assert_eq!(s.eigenspace_dim, 3);
    }

    #[test]
    fn two_cycle_eigenvector() {
        let s = critical_eigenvector(&m(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(s.eigenvector, Some(vec![0.5, 0.5]));
        assert_eq!(s.eigenvector_exact, Some(vec![ratio(1, 2), ratio(1, 2)]));
        assert!(!s.non_unique);
    }

    #[test]
    fn identity_is_non_unique() {
        let s = critical_eigenvector(&Graph::disjoint_leaves(4).vertex_matrix()).unwrap();
        assert!(s.non_unique);
        assert_eq!(s.eigenvector_exact, Some(vec![ratio(1, 4); 4]));
    }

    #[test]
    fn jordan_block_has_no_positive_eigenvector() {
        let s = critical_eigenvector(&m(&[&[1, 1], &[0, 1]])).unwrap();
        assert_eq!(s.rho, 1.0);
        assert!(s.eigenvector.is_none());
        assert!(!is_row_regular(&m(&[&[1, 1], &[0, 1]])));
    }

    #[test]
    fn transient_class_is_solved_exactly() {
        // v1 -> v2 twice, v2 carries three loops: rho = 3, w proportional to (2, 3).
        let s = critical_eigenvector(&m(&[&[0, 2], &[0, 3]])).unwrap();
        assert!(s.is_exact);
        assert_eq!(s.rho, 3.0);
        assert_eq!(s.eigenvector_exact, Some(vec![ratio(2, 5), ratio(3, 5)]));
    }

    #[test]
    fn golden_ratio_graph_is_float() {
        let s = critical_eigenvector(&m(&[&[1, 1], &[1, 0]])).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((s.rho - phi).abs() < 1e-12);
        assert!(!s.is_exact);
        let w = s.eigenvector.unwrap();
        assert!((w[0] / w[1] - phi).abs() < 1e-9);
        assert!(s.eigenvector_exact.is_none());
    }

    #[test]
    fn subinvariance_examples() {
        let d = m(&[&[0, 1], &[1, 0]]);
        assert!(check_subinvariance(&d, &[0.5, 0.5], 0.0));
        let c = m(&[&[3]]);
        assert!(check_subinvariance(&c, &[1.0], 3f64.ln()));
        assert!(!check_subinvariance(&c, &[1.0], 3f64.ln() - 0.1));
    }

    #[test]
    fn verdicts() {
        let v = kms_verdict(&Graph::two_cycle()).unwrap();
        assert!(v.exists_on_graph_algebra);
        assert_eq!(v.beta_critical, 0.0);
        assert_eq!(v.state_vector_exact, Some(vec!["1/2".into(), "1/2".into()]));
        assert!(v.unique_by_strong_connectivity);

        let v = kms_verdict(&Graph::cuntz(3)).unwrap();
        assert!((v.beta_critical - 3f64.ln()).abs() < 1e-15);
        assert_eq!(v.state_vector, Some(vec![1.0]));

        let v = kms_verdict(&Graph::disjoint_leaves(2)).unwrap();
        assert!(v.exists_on_graph_algebra && v.non_unique);
        assert_eq!(v.state_vector, Some(vec![0.5, 0.5]));

        let sink = Graph::new(
            ["a", "b"],
            [("e".to_string(), "a".to_string(), "b".to_string())],
        )
        .unwrap();
        assert_eq!(
            kms_verdict(&sink).unwrap_err(),
            SpectralError::Sink("b".into())
        );
    }

    #[test]
    fn rows_2_0_1_1() {
        let d = m(&[&[2, 0], &[1, 1]]);
        let s = critical_eigenvector(&d).unwrap();
        assert_eq!(s.rho, 2.0);
        assert_eq!(s.eigenvector_exact, Some(vec![ratio(1, 2), ratio(1, 2)]));
    }
}
