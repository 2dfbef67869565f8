use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;
use spectriple::clifford::CliffordBasis;
use spectriple::geometry::{
    christoffel, halving_ratio, induced_metric_gk, metric_compatibility_residual, metric_from_trace, reflected_christoffel, riemannian_christoffel,
    spin_connection_decomposition, twisted_clifford_check, verify_christoffel_relation, ChristoffelData, DerivativeRoute, MetricField,
};
use spectriple::structural::StructuralSet;
use spectriple::Error;

const POINT: [f64; 4] = [0.3, 0.2, -0.1, 0.4];
const H: f64 = 1e-3;

/// Nonzero symbols of the warped metric with coefficients (0.1, 0.05) at
/// `POINT`, from a symbolic differentiation.
const PLAIN: [(usize, usize, usize, f64); 6] = [
    (0, 1, 1, 0.103),
    (1, 0, 1, 0.0970873786407767),
    (1, 1, 0, 0.0970873786407767),
    (1, 2, 2, -0.0476010934112546),
    (2, 1, 2, 0.04950495049504951),
    (2, 2, 1, 0.04950495049504951),
];
const RIEMANNIAN: [(usize, usize, usize, f64); 6] = [
    (0, 1, 1, -0.103),
    (1, 0, 1, 0.0970873786407767),
    (1, 1, 0, 0.0970873786407767),
    (1, 2, 2, -0.0476010934112546),
    (2, 1, 2, 0.04950495049504951),
    (2, 2, 1, 0.04950495049504951),
];
const REFLECTED: [(usize, usize, usize, f64); 6] = [
    (0, 1, 1, -0.103),
    (1, 0, 1, 0.0970873786407767),
    (1, 1, 0, -0.0970873786407767),
    (1, 2, 2, -0.0476010934112546),
    (2, 1, 2, 0.04950495049504951),
    (2, 2, 1, 0.04950495049504951),
];

fn assert_symbols(data: &ChristoffelData, expected: &[(usize, usize, usize, f64)], tol: f64) {
    for l in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                let want = expected.iter().find(|e| (e.0, e.1, e.2) == (l, m, n)).map_or(0.0, |e| e.3);
                let got = data.get(l, m, n);
                assert!((got - want).abs() < tol, "[{l}][{m}][{n}]: {got} vs {want}");
            }
        }
    }
}

fn diag(v: &[f64]) -> DMatrix<f64> {
    DMatrix::from_diagonal(&DVector::from_vec(v.to_vec()))
}

#[test]
fn flat_metrics_have_vanishing_symbols() {
    for g in [MetricField::flat(4, 1), MetricField::flat(4, 4)] {
        assert_eq!(christoffel(&g, &POINT, H).unwrap().max_abs(), 0.0);
        assert_eq!(reflected_christoffel(&g, &POINT, H).unwrap().max_abs(), 0.0);
        assert!(verify_christoffel_relation(&g, &POINT, H).unwrap() < 1e-12);
        let dec = spin_connection_decomposition(&g, &POINT, H).unwrap();
        assert_eq!(dec.gamma_tilde.max_abs(), 0.0);
        assert_eq!(dec.gamma_r.max_abs(), 0.0);
        assert_eq!(dec.k_term.max_abs(), 0.0);
    }
}

#[test]
fn warped_symbols_match_symbolic_values() {
    let g = MetricField::warped_diag(0.1, 0.05);
    assert_symbols(&christoffel(&g, &POINT, H).unwrap(), &PLAIN, 1e-9);
    assert_symbols(&riemannian_christoffel(&g, &POINT, H, DerivativeRoute::Covariant).unwrap(), &RIEMANNIAN, 1e-9);
    assert_symbols(&reflected_christoffel(&g, &POINT, H).unwrap(), &REFLECTED, 1e-9);
}

#[test]
fn one_warped_direction_closed_form() {
    // g = diag(1, −f², −1, −1), f = 1 + 0.1x⁰: Γ^1_{01} = f′/f.
    let g = MetricField::new("warp-one", 4, vec![1.0, -1.0, -1.0, -1.0], |x| {
        let f = 1.0 + 0.1 * x[0];
        diag(&[1.0, -f * f, -1.0, -1.0])
    })
    .unwrap();
    let c = christoffel(&g, &POINT, H).unwrap();
    assert!((c.get(1, 0, 1) - 0.1 / 1.03).abs() < 1e-10);
    assert!((c.get(0, 1, 1) - 0.1 * 1.03).abs() < 1e-10);
}

#[test]
fn contravariant_route_converges_to_the_same_symbols() {
    let g = MetricField::warped_diag(0.1, 0.05);
    let r = riemannian_christoffel(&g, &POINT, H, DerivativeRoute::Contravariant).unwrap();
    assert_symbols(&r, &RIEMANNIAN, 1e-6);
}

#[test]
fn warped_relation_and_halving() {
    let g = MetricField::warped_diag(0.1, 0.05);
    let res = verify_christoffel_relation(&g, &POINT, H).unwrap();
    assert!(res < 1e-5, "{res:e}");
    let (coarse, fine, ratio) = halving_ratio(&g, &POINT, H).unwrap();
    assert!(coarse > fine);
    assert!(ratio >= 3.5, "ratio {ratio}");
}

#[test]
fn warped_spin_connection_decomposition() {
    let g = MetricField::warped_diag(0.1, 0.05);
    let dec = spin_connection_decomposition(&g, &POINT, H).unwrap();
    assert!(dec.residual < 1e-5, "{:e}", dec.residual);
    assert!(dec.k_term.max_abs() > 0.1);
}

#[test]
fn conformal_flat_family_passes() {
    let g = MetricField::from_family("conformal-flat", &[0.2]).unwrap();
    assert!(verify_christoffel_relation(&g, &POINT, H).unwrap() < 1e-5);
    assert!(spin_connection_decomposition(&g, &POINT, H).unwrap().residual < 1e-5);
    assert!(metric_compatibility_residual(&g, &POINT, H).unwrap() < 1e-5);
}

#[test]
fn riemannian_input_has_no_k_term() {
    let g = MetricField::new("positive", 4, vec![1.0; 4], |x| diag(&[1.0 + 0.1 * x[0] * x[0], (1.0 + 0.2 * x[1]).powi(2), 1.0, 2.0 + x[3]])).unwrap();
    let dec = spin_connection_decomposition(&g, &POINT, H).unwrap();
    assert!(dec.k_term.max_abs() < 1e-12);
    assert!(dec.residual < 1e-6);
    let plain = christoffel(&g, &POINT, H).unwrap();
    assert!(plain.max_abs_diff(&reflected_christoffel(&g, &POINT, H).unwrap()) < 1e-15);
}

#[test]
fn metric_compatibility_and_symmetry() {
    let g = MetricField::warped_diag(0.1, 0.05);
    assert!(metric_compatibility_residual(&g, &POINT, H).unwrap() < 1e-9);
    assert!(christoffel(&g, &POINT, H).unwrap().torsion() < 1e-12);
}

#[test]
fn non_diagonal_metric_is_unsupported_for_the_decomposition() {
    let g = MetricField::new("tilted", 4, vec![1.0, -1.0, -1.0, -1.0], |x| {
        let mut m = diag(&[1.0, -1.0, -1.0, -1.0]);
        m[(0, 1)] = 0.1 * x[0];
        m[(1, 0)] = 0.1 * x[0];
        m
    })
    .unwrap();
    assert!(matches!(spin_connection_decomposition(&g, &POINT, H), Err(Error::UnsupportedMetric(_))));
    assert!(christoffel(&g, &POINT, H).is_ok());
}

#[test]
fn singular_metric_is_reported() {
    let g = MetricField::new("degenerate", 4, vec![1.0; 4], |_| diag(&[1.0, 1.0, 1.0, 0.0])).unwrap();
    assert!(matches!(christoffel(&g, &POINT, H), Err(Error::SingularMetric)));
}

#[test]
fn invalid_inputs() {
    assert!(matches!(MetricField::from_family("spherical", &[]), Err(Error::UnknownFamily(_))));
    assert!(MetricField::new("bad", 2, vec![1.0, 0.5], |_| DMatrix::identity(2, 2)).is_err());
    let g = MetricField::flat(4, 1);
    assert!(christoffel(&g, &[0.0, 0.0], H).is_err());
    assert!(christoffel(&g, &POINT, -1.0).is_err());
}

#[test]
fn reflected_metric_is_positive_definite() {
    let g = MetricField::warped_diag(0.1, 0.05);
    let gr = g.reflected(&POINT);
    assert!(gr.symmetric_eigenvalues().iter().all(|v| *v > 0.0));
}

#[test]
fn reflection_is_an_isometry() {
    let g = MetricField::warped_diag(0.1, 0.05);
    let (g0, gr, r) = (g.eval(&POINT), g.reflected(&POINT), g.r());
    let u = DVector::from_vec(vec![0.3, -1.0, 0.7, 0.2]);
    let v = DVector::from_vec(vec![1.1, 0.4, -0.5, 0.9]);
    let (ru, rv) = (&r * &u, &r * &v);
    assert!(((ru.transpose() * &g0 * &rv)[0] - (u.transpose() * &g0 * &v)[0]).abs() < 1e-14);
    assert!(((ru.transpose() * &gr * &rv)[0] - (u.transpose() * &gr * &v)[0]).abs() < 1e-14);
}

#[test]
fn twisted_clifford_relations() {
    for (m, n) in [(2, 1), (2, 3), (1, 1), (3, 2), (2, 4)] {
        let b = CliffordBasis::standard(m, n).unwrap();
        let s = StructuralSet::build(&b).unwrap();
        let t = twisted_clifford_check(&b, &s.k);
        assert!(t.res1 < 1e-12 && t.res2 < 1e-12 && t.res_s < 1e-12, "({m},{n}) {t:?}");
    }
}

#[test]
fn induced_metrics() {
    let b = CliffordBasis::standard(2, 1).unwrap();
    let s = StructuralSet::build(&b).unwrap();
    // Twisting the Lorentzian generators gives the reflected metric.
    assert_eq!(induced_metric_gk(&b.gammas, &s.k), DMatrix::identity(4, 4));
    // Twisting the Euclidean generators by K = γ̃^(0) gives back η.
    assert_eq!(induced_metric_gk(&b.euclid_gammas, &s.k), diag(&[1.0, -1.0, -1.0, -1.0]));
    let id = spectriple::ComplexMatrix::identity(4);
    assert_eq!(induced_metric_gk(&b.euclid_gammas, &id), metric_from_trace(&b.euclid_gammas));
}

proptest! {
    #[test]
    fn random_warped_metrics(c0 in -0.3f64..0.3, c1 in -0.3f64..0.3, x0 in -0.5f64..0.5, x1 in -0.5f64..0.5) {
        let g = MetricField::warped_diag(c0, c1);
        let x = [x0, x1, 0.1, -0.2];
        prop_assert!(christoffel(&g, &x, H).unwrap().torsion() < 1e-6);
        prop_assert!(riemannian_christoffel(&g, &x, H, DerivativeRoute::Covariant).unwrap().torsion() < 1e-6);
        prop_assert!(verify_christoffel_relation(&g, &x, H).unwrap() < 1e-5);
        prop_assert!(spin_connection_decomposition(&g, &x, H).unwrap().residual < 1e-5);
    }
}
