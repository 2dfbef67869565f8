use proptest::prelude::*;
use spectriple::acproduct::{build_finite_triple_ko6, build_product};
use spectriple::clifford::CliffordBasis;
use spectriple::kmorphism::{
    build_lattice_dirac, check_first_order, default_momentum, fluctuate_type1, fluctuate_type2, fluctuated_by_form, one_form_type1, one_form_type2,
    opposite, phi_k, twisted_commutator, InnerProduct, LatticeModel, SideKind, TripleSide,
};
use spectriple::matrix::{ComplexMatrix, C64};
use spectriple::random::{self, rng_for};
use spectriple::structural::StructuralSet;
use spectriple::Error;

fn setup(m: usize, n: usize) -> (CliffordBasis, StructuralSet) {
    let b = CliffordBasis::standard(m, n).unwrap();
    let s = StructuralSet::build(&b).unwrap();
    (b, s)
}

fn mode_side(m: usize, n: usize) -> TripleSide {
    let (b, s) = setup(m, n);
    TripleSide::mode(&b, &s, &default_momentum(b.len()))
}

fn lattice(m: usize, n: usize, sites: usize, dims: usize) -> LatticeModel {
    let (b, s) = setup(m, n);
    build_lattice_dirac(&b, &s, sites, dims, 1.0 / sites as f64).unwrap()
}

fn plane_wave(l: &LatticeModel, k: usize) -> Vec<C64> {
    (0..l.site_count())
        .map(|s| C64::from_polar(1.0, 2.0 * std::f64::consts::PI * (k * l.coords(s)[0]) as f64 / l.sites as f64))
        .collect()
}

fn spectral_norm(a: &ComplexMatrix) -> f64 {
    a.inner().clone().svd(false, false).singular_values.max()
}

fn sorted_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = h.inner().clone().symmetric_eigen().eigenvalues.iter().cloned().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ev
}

#[test]
fn mode_model_is_self_adjoint_for_every_signature() {
    for m in 1..=3 {
        for n in 0..=2 * m {
            let side = mode_side(m, n);
            assert!(side.adjointness_residual() < 1e-12, "({m},{n})");
            assert!(phi_k(&side).adjointness_residual() < 1e-12, "({m},{n})");
        }
    }
}

#[test]
fn twisted_side_requires_self_adjoint_dirac() {
    let (_, s) = setup(2, 1);
    let d = ComplexMatrix::from_fn(4, 4, |i, j| C64::new(i as f64, j as f64));
    let r = TripleSide::twisted(d, s.k.clone(), s.j.clone(), s.gamma.clone(), s.eps, s.eps_prime);
    assert!(matches!(r, Err(Error::InvalidInput(_))));
}

#[test]
fn phi_k_is_an_involution() {
    let side = mode_side(2, 1);
    let image = phi_k(&side);
    assert_eq!(image.kind, SideKind::Pseudo);
    assert_eq!(image.inner, InnerProduct::Krein);
    assert!(image.d.approx_eq(&side.dirac_k(), 1e-14));
    let back = phi_k(&image);
    assert_eq!(back.kind, SideKind::Twisted);
    assert_eq!(back.inner, InnerProduct::Standard);
    assert!(back.d.approx_eq(&side.d, 1e-14));
}

#[test]
fn twisted_commutator_checks_shapes() {
    let side = mode_side(2, 1);
    let a = ComplexMatrix::identity(3);
    assert!(matches!(twisted_commutator(&side.d, &a, &side.k), Err(Error::Dimension { .. })));
}

#[test]
fn bridge_on_lattice_functions() {
    let l = lattice(2, 1, 8, 1);
    let mut rng = rng_for(21, 0);
    for _ in 0..20 {
        let a = l.function_operator(&random::site_function(&mut rng, l.site_count()));
        let lhs = twisted_commutator(&l.side.dirac(), &a, &l.side.k).unwrap();
        let dk = l.side.dirac_k();
        let rhs = &l.side.k * &(&(&dk * &a) - &(&a * &dk));
        assert!(lhs.rel_diff(&rhs) < 1e-12);
    }
}

#[test]
fn bridge_holds_for_first_order_forms() {
    let side = mode_side(2, 1);
    let mut rng = rng_for(22, 0);
    for _ in 0..10 {
        let a = random::matrix(&mut rng, side.dim());
        let b = random::matrix(&mut rng, side.dim());
        let chk = check_first_order(&side, &a, &b, true);
        assert!(chk.bridge_residual < 1e-12);
    }
}

#[test]
fn lattice_dirac_is_self_adjoint_in_two_dimensions() {
    let l = lattice(2, 1, 4, 2);
    assert_eq!(l.dim(), 64);
    assert!(l.side.d.is_hermitian(1e-12));
    // γ^(1) is anti-Hermitian, so the untwisted operator is not.
    assert!(!l.side.dirac_k().is_hermitian(1e-6));
    assert!(phi_k(&l.side).adjointness_residual() < 1e-12);
}

#[test]
fn lattice_rejects_bad_sizes() {
    let (b, s) = setup(2, 1);
    assert!(matches!(build_lattice_dirac(&b, &s, 7, 1, 0.1), Err(Error::UnsupportedLattice(_))));
    assert!(matches!(build_lattice_dirac(&b, &s, 2, 1, 0.1), Err(Error::UnsupportedLattice(_))));
    assert!(matches!(build_lattice_dirac(&b, &s, 8, 3, 0.1), Err(Error::UnsupportedLattice(_))));
}

#[test]
fn lattice_commutator_norm_matches_dense_oracle() {
    // ‖[D, f]‖ for f = e^{2πikx/N}, N = 8, h = 1/8, from a dense SVD of the
    // scalar hopping matrix: k = 1 gives 4√2, k = 3 gives 8 + 4√2.
    let l = lattice(2, 1, 8, 1);
    for (k, expected) in [(1, 5.656854249492381), (3, 13.65685424949238)] {
        let f = l.function_operator(&plane_wave(&l, k));
        let c = &(&l.side.d * &f) - &(&f * &l.side.d);
        assert!((spectral_norm(&c) - expected).abs() < 1e-10, "k = {k}");
    }
}

#[test]
fn lattice_commutator_norm_closed_form() {
    for (sites, k) in [(8usize, 2usize), (12, 1), (16, 5)] {
        let l = lattice(2, 1, sites, 1);
        let h = 1.0 / sites as f64;
        let theta = 2.0 * std::f64::consts::PI * k as f64 / sites as f64;
        let peak = (0..sites)
            .map(|j| (std::f64::consts::PI * (2 * j + k) as f64 / sites as f64).cos().abs())
            .fold(0.0, f64::max);
        let closed = 2.0 * (theta / 2.0).sin().abs() * peak / h;
        let f = l.function_operator(&plane_wave(&l, k));
        let c = &(&l.side.d * &f) - &(&f * &l.side.d);
        assert!((spectral_norm(&c) - closed).abs() < 1e-9, "N = {sites}, k = {k}");
    }
}

#[test]
fn lattice_first_order_defect_is_first_order_in_h() {
    // With a = b = e^{2πix} the defect has entries of modulus
    // 4 sin²(πh)/(2h), which is 8 − 4√2 at h = 1/8.
    let mut peaks = Vec::new();
    for sites in [8usize, 16] {
        let l = lattice(2, 1, sites, 1);
        let a = l.function_operator(&plane_wave(&l, 1));
        let dk = l.side.dirac_k();
        let da = &(&dk * &a) - &(&a * &dk);
        let b_op = opposite(&l.side.j, &a);
        let defect = &(&da * &b_op) - &(&b_op * &da);
        peaks.push(defect.max_abs());
        let chk = check_first_order(&l.side, &a, &a, true);
        assert!(chk.bridge_residual < 1e-12);
    }
    assert!((peaks[0] - 2.343145750507619).abs() < 1e-12);
    let ratio = peaks[0] / peaks[1];
    assert!((ratio - 1.92).abs() < 0.01, "ratio {ratio}");
}

#[test]
fn lorentzian_lattice_spectrum_is_symmetric() {
    let l = lattice(2, 1, 4, 2);
    assert_eq!(l.side.j.commutation_sign(&l.side.d, 1e-10), Some(-1));
    let ev = sorted_eigenvalues(&l.side.d);
    for (x, y) in ev.iter().zip(ev.iter().rev()) {
        assert!((x + y).abs() < 1e-9);
    }
}

#[test]
fn euclidean_lattice_spectrum_is_symmetric() {
    let l = lattice(2, 4, 4, 2);
    let g = &l.side.gamma;
    assert!((&(g * &l.side.d) + &(&l.side.d * g)).max_abs() < 1e-12);
    let ev = sorted_eigenvalues(&l.side.d);
    for (x, y) in ev.iter().zip(ev.iter().rev()) {
        assert!((x + y).abs() < 1e-9);
    }
}

#[test]
fn evaluation_pairing_is_preserved() {
    let l = lattice(2, 1, 8, 1);
    let mut rng = rng_for(23, 0);
    for side in [mode_side(2, 1), l.side.clone()] {
        let psi = random::vector(&mut rng, side.dim());
        let phi = random::vector(&mut rng, side.dim());
        let a = side.evaluate(&psi, &phi);
        let b = phi_k(&side).evaluate(&psi, &phi);
        assert!((a - b).norm() < 1e-10 * a.norm().max(1.0));
    }
}

#[test]
fn fluctuations_land_in_the_one_form_family() {
    let side = mode_side(2, 1);
    let p = build_product(&side, &build_finite_triple_ko6(1.0).unwrap()).unwrap();
    let idm = ComplexMatrix::identity(side.dim());
    let u = idm.kron(&p.finite.element(C64::from_polar(1.0, 0.7), C64::from_polar(1.0, -1.9)));
    let d = &p.d_p;
    let t1 = fluctuate_type1(d, &u, &p.j_p, &p.k_p).unwrap();
    let e1 = fluctuated_by_form(d, &one_form_type1(d, &u, &p.k_p), &p.j_p, p.signs.eps1);
    assert!(t1.rel_diff(&e1) < 1e-9);
    let t2 = fluctuate_type2(d, &u, &p.j_p, &p.k_p).unwrap();
    let e2 = fluctuated_by_form(d, &one_form_type2(d, &u, &p.k_p), &p.j_p, p.signs.eps1);
    assert!(t2.rel_diff(&e2) < 1e-9);
    assert!(t1.is_hermitian(1e-10));
}

#[test]
fn trivial_gauge_leaves_dirac_unchanged() {
    let side = mode_side(2, 1);
    let id = ComplexMatrix::identity(side.dim());
    let d = fluctuate_type1(&side.d, &id, &side.j, &side.k).unwrap();
    assert!(d.approx_eq(&side.d, 1e-14));
    let d = fluctuate_type2(&side.d, &id, &side.j, &side.k).unwrap();
    assert!(d.approx_eq(&side.d, 1e-14));
}

#[test]
fn gauge_elements_are_validated() {
    let side = mode_side(2, 1);
    let not_unitary = ComplexMatrix::identity(side.dim()).scale_re(2.0);
    assert!(matches!(fluctuate_type1(&side.d, &not_unitary, &side.j, &side.k), Err(Error::InvalidGaugeElement(_))));
    assert!(matches!(fluctuate_type2(&side.d, &not_unitary, &side.j, &side.k), Err(Error::InvalidGaugeElement(_))));
}

proptest! {
    #[test]
    fn bridge_on_random_elements(seed in 0u64..10_000, m in 1usize..=3, n in 0usize..=6) {
        let n = n.min(2 * m);
        let side = mode_side(m, n);
        let mut rng = rng_for(seed, 0);
        let a = random::matrix(&mut rng, side.dim());
        let lhs = twisted_commutator(&side.dirac(), &a, &side.k).unwrap();
        let dk = side.dirac_k();
        let rhs = &side.k * &(&(&dk * &a) - &(&a * &dk));
        prop_assert!(lhs.rel_diff(&rhs) < 1e-10);
    }
}
