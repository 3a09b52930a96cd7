//! Spectral radius and critical eigenvector against nalgebra's eigenvalues,
//! plus invariance under relabeling the vertices.

use graphkms::graph::VertexMatrix;
use graphkms::spectral::{critical_eigenvector, eigen_residual, spectral_radius};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// Max eigenvalue modulus over the diagonal blocks of mutually reachable
/// vertices. Taking blocks avoids the ill-conditioning of defective
/// eigenvalues (Jordan blocks) in the whole matrix; the irreducible blocks
/// are found by transitive closure, independently of the library.
fn oracle_rho(d: &VertexMatrix) -> f64 {
    let m = d.dim();
    let mut reach: Vec<Vec<bool>> = (0..m)
        .map(|i| (0..m).map(|j| i == j || d.get(i, j) > 0).collect())
        .collect();
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if reach[i][k] && reach[k][j] {
                    reach[i][j] = true;
                }
            }
        }
    }
    let mut seen = vec![false; m];
    let mut best = 0.0f64;
    for i in 0..m {
        if seen[i] {
            continue;
        }
        let class: Vec<usize> = (0..m).filter(|&j| reach[i][j] && reach[j][i]).collect();
        for &j in &class {
            seen[j] = true;
        }
        let n = class.len();
        let block = DMatrix::from_fn(n, n, |a, b| d.get(class[a], class[b]) as f64);
        let r = block
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        best = best.max(r);
    }
    best
}

/// Square matrices with entries in 0..3 and no zero row.
fn sink_free() -> impl Strategy<Value = VertexMatrix> {
    (1usize..5).prop_flat_map(|m| {
        proptest::collection::vec(proptest::collection::vec(0u64..3, m), m).prop_map(|mut rows| {
            for (i, row) in rows.iter_mut().enumerate() {
                if row.iter().all(|&x| x == 0) {
                    row[i] = 1;
                }
            }
            VertexMatrix::from_rows(rows)
        })
    })
}

proptest! {
    #[test]
    fn radius_matches_eigenvalues(d in sink_free()) {
        let got = spectral_radius(&d).unwrap().rho;
        let want = oracle_rho(&d);
        prop_assert!((got - want).abs() <= 1e-6 * want.max(1.0), "got {got}, oracle {want}");
    }

    #[test]
    fn eigenvector_is_positive_and_normalized(d in sink_free()) {
        let s = critical_eigenvector(&d).unwrap();
        if let Some(w) = &s.eigenvector {
            prop_assert!(w.iter().all(|&x| x > 0.0));
            prop_assert!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            prop_assert!(eigen_residual(&d, s.rho, w) <= 1e-8);
        }
        if let (Some(w), Some(exact)) = (&s.eigenvector, &s.eigenvector_exact) {
            use num::ToPrimitive;
            for (x, q) in w.iter().zip(exact) {
                prop_assert!((x - q.to_f64().unwrap()).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn relabeling_permutes_the_eigenvector(d in sink_free(), seed in any::<u64>()) {
        let m = d.dim();
        let mut perm: Vec<usize> = (0..m).collect();
        let mut state = seed;
        for i in (1..m).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let a = critical_eigenvector(&d).unwrap();
        let b = critical_eigenvector(&d.permuted(&perm)).unwrap();
        prop_assert!((a.rho - b.rho).abs() <= 1e-9 * a.rho.max(1.0));
        prop_assert_eq!(a.eigenspace_dim, b.eigenspace_dim);
        prop_assert_eq!(a.eigenvector.is_some(), b.eigenvector.is_some());
        if let (Some(wa), Some(wb)) = (&a.eigenvector, &b.eigenvector) {
            if !a.non_unique {
                for i in 0..m {
                    prop_assert!((wa[i] - wb[perm[i]]).abs() <= 1e-7);
                }
            }
        }
    }
}
