//! Enumeration-order independence of the filtration and path-count oracles
//! for the W dimensions on multi-vertex graphs.

use std::sync::Arc;

use graphkms::algebra::{paths_of_length, words_of_bidegree};
use graphkms::filtration::{build_w_levels_with, verify_orthogonality, Filtration, Label};
use graphkms::{Graph, KmsState, Rational};
use num::complex::Complex64;

/// `dim F_k = sum_v (number of length-k paths ending at v)^2`, with `F_0 = C 1`.
fn path_count_dims(g: &Graph, max_k: usize) -> Vec<usize> {
    let mut f = vec![1usize];
    for k in 1..=max_k {
        let mut ending = vec![0usize; g.vertex_count()];
        for p in paths_of_length(g, k) {
            ending[p.target()] += 1;
        }
        f.push(ending.iter().map(|c| c * c).sum());
    }
    let mut w = vec![1];
    for k in 1..=max_k {
        w.push(f[k] - f[k - 1]);
    }
    w
}

fn graphs() -> Vec<Graph> {
    vec![
        Graph::cuntz(2),
        Graph::cuntz(3),
        Graph::two_cycle(),
        Graph::new(
            ["a", "b"],
            [("x", "a", "a"), ("y", "a", "b"), ("z", "b", "a"), ("u", "b", "b")],
        )
        .unwrap(),
    ]
}

#[test]
fn w_dimensions_match_path_counts() {
    for g in graphs() {
        let oracle = path_count_dims(&g, 3);
        let phi = KmsState::exact(Arc::new(g)).unwrap();
        let got: Vec<usize> = build_w_levels_with(&phi, 3, |_| {})
            .unwrap()
            .iter()
            .map(|w| w.dimension())
            .collect();
        assert_eq!(got, oracle);
    }
}

#[test]
fn projectors_ignore_enumeration_order() {
    for g in graphs() {
        let phi = KmsState::exact(Arc::new(g)).unwrap();
        let forward = build_w_levels_with(&phi, 2, |_| {}).unwrap();
        let reversed = build_w_levels_with(&phi, 2, |ws| ws.reverse()).unwrap();
        let g = phi.graph();
        let basis = words_of_bidegree(g, 2, 2);
        for (a, b) in forward.iter().zip(&reversed) {
            assert_eq!(a.dimension(), b.dimension());
            let pa = a.projector(&phi, &basis, 2).unwrap();
            let pb = b.projector(&phi, &basis, 2).unwrap();
            assert_eq!(pa, pb, "{} differs", a.label);
        }
        let mixed = build_w_levels_with(&phi, 2, |ws| {
            let half = ws.len() / 2;
            ws.rotate_left(half);
        }).unwrap();
        let pa = forward[2].projector(&phi, &basis, 2).unwrap();
        let pm = mixed[2].projector(&phi, &basis, 2).unwrap();
        assert_eq!(pa, pm);
    }
}

#[test]
fn float_filtration_matches_exact_dimensions() {
    let g = Arc::new(Graph::cuntz(2));
    let exact = KmsState::exact(Arc::clone(&g)).unwrap();
    let float = exact.to_float();
    let a = Filtration::build(&exact, 2, 2).unwrap();
    let b = Filtration::build(&float, 2, 2).unwrap();
    let dims = |f: &Filtration<Rational>| -> Vec<(Label, usize)> {
        f.components.iter().map(|c| (c.label, c.dimension())).collect()
    };
    let dims_f = |f: &Filtration<Complex64>| -> Vec<(Label, usize)> {
        f.components.iter().map(|c| (c.label, c.dimension())).collect()
    };
    assert_eq!(dims(&a), dims_f(&b));
    let report = verify_orthogonality(&float, &b.components).unwrap();
    assert!(report.passed);
    assert!(report.pairs.iter().all(|p| p.max_abs_inner <= 1e-9));
}

#[test]
fn irrational_state_filtration_is_orthogonal() {
    let g = Graph::new(["a", "b"], [("x", "a", "a"), ("y", "a", "b"), ("z", "b", "a")]).unwrap();
    let phi = KmsState::float(Arc::new(g.clone())).unwrap();
    let filt = Filtration::build(&phi, 3, 0).unwrap();
    let dims: Vec<usize> = filt.components.iter().map(|c| c.dimension()).collect();
    assert_eq!(dims, path_count_dims(&g, 3));
    assert!(verify_orthogonality(&phi, &filt.components).unwrap().passed);
}
