//! Verification suites shared by the command-line front end, the acceptance
//! target and the benches. Every suite returns a [`Report`].

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use serde_json::json;

use crate::acproduct::{build_finite_triple_ko6, build_product, evaluate_pairing, product_derivation, product_fluctuation, ProductTriple};
use crate::clifford::{verify_clifford, CliffordBasis, Signature, MAX_M};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::{
    halving_ratio, metric_compatibility_residual, spin_connection_decomposition, twisted_clifford_check, verify_christoffel_relation, MetricField, FD_TOL,
};
use crate::kmorphism::{
    build_lattice_dirac, default_momentum, fluctuate_type1, fluctuate_type2, fluctuated_by_form, one_form_type1, one_form_type2, phi_k, twisted_commutator,
    TripleSide,
};
use crate::matrix::{ComplexMatrix, C64, DEFAULT_TOL};
use crate::random::{self, rng_for};
use crate::report::Report;
use crate::sigsolver::{classify, compare_engines, dense_nullspace_solutions, uniqueness_of_time, SearchSpace};
use crate::structural::{
    epsilon_parameters, ko_dimension_row, random_unit_vector, spin_identity_check, structural_residuals, twisted_column, twisted_table_row, EpsilonRow, Sign,
    StructuralSet, KO_TABLE, TWISTED_TABLE,
};

/// Tolerance for fluctuation-family identities.
pub const FLUCTUATION_TOL: f64 = 1e-9;
/// Default finite-difference step.
pub const DEFAULT_H: f64 = 1e-3;
/// Default evaluation point for the Christoffel suite.
pub const DEFAULT_POINT: [f64; 4] = [0.3, 0.2, -0.1, 0.4];
/// Samples in the bridge and spin suites.
pub const BRIDGE_SAMPLES: usize = 200;
pub const SPIN_SAMPLES: usize = 500;
/// Lattice size used by the bridge suite.
pub const BRIDGE_LATTICE: usize = 8;

/// Human-readable form of the fundamental symmetry chosen for `(m, n)`.
pub fn k_label(m: usize, n: usize) -> String {
    let factors: Vec<usize> = if n % 2 == 1 { (0..n).collect() } else { (n..2 * m).collect() };
    if factors.is_empty() {
        return "I".into();
    }
    let k = factors.len() as i64;
    let power = (-(k * (k - 1) / 2)).rem_euclid(4) as usize;
    let body: String = factors.iter().map(|i| format!("gamma^({i})")).collect();
    format!("{}{body}", ["", "i", "-", "-i"][power])
}

#[derive(Serialize)]
struct SignatureSummary {
    m: usize,
    n: usize,
    k: String,
    eps0: Sign,
    eps1: Sign,
    eps2: Sign,
    eps: Sign,
    eps_prime: Sign,
    ko: u8,
    twisted_column: Option<&'static str>,
}

fn summary(basis: &CliffordBasis, set: &StructuralSet) -> SignatureSummary {
    let (m, n) = (basis.sig.m, basis.sig.n);
    let row = ko_dimension_row(n, m);
    SignatureSummary {
        m,
        n,
        k: k_label(m, n),
        eps0: set.eps0,
        eps1: set.eps1k,
        eps2: set.eps2,
        eps: set.eps,
        eps_prime: set.eps_prime,
        ko: row.ko,
        twisted_column: twisted_column(twisted_table_row(row, set.eps, set.eps_prime)),
    }
}

fn measured_row_matches(basis: &CliffordBasis, set: &StructuralSet) -> bool {
    let row = ko_dimension_row(basis.sig.n, basis.sig.m);
    (set.eps0, set.eps1k, set.eps2) == (row.eps0, row.eps1, row.eps2)
}

/// Clifford, structural and sign checks for one signature.
pub fn gamma(m: usize, n: usize, dump: bool) -> Result<Report> {
    let basis = CliffordBasis::standard(m, n)?;
    let set = StructuralSet::build(&basis)?;
    let mut r = Report::new("gamma");
    r.param("m", m).param("n", n);
    r.residual("Clifford relation", verify_clifford(&basis), DEFAULT_TOL);
    r.residual("(gamma^a)^dagger = g_a gamma^a", basis.adjoint_split_residual(), DEFAULT_TOL);
    r.residual("gammas unitary", basis.unitarity_residual(), DEFAULT_TOL);
    for (name, v) in structural_residuals(&basis, &set) {
        r.residual(name, v, DEFAULT_TOL);
    }
    r.boolean("(eps, eps') match prediction", epsilon_parameters(&basis, &set).is_ok());
    r.boolean("measured signs match KO row", measured_row_matches(&basis, &set));
    let tw = twisted_clifford_check(&basis, &set.k);
    r.residual("twisted Clifford relation", tw.res1.max(tw.res2).max(tw.res_s), DEFAULT_TOL);
    r.datum("structure", summary(&basis, &set));
    if dump {
        let pairs = |v: &[ComplexMatrix]| v.iter().map(|g| g.to_pairs()).collect::<Vec<_>>();
        r.datum(
            "matrices",
            json!({
                "gammas": pairs(&basis.gammas),
                "euclidean_gammas": pairs(&basis.euclid_gammas),
                "K": set.k.to_pairs(),
                "Gamma": set.gamma.to_pairs(),
                "C": set.c.to_pairs(),
            }),
        );
    }
    Ok(r)
}

/// Every `(m, n)` with `1 ≤ m ≤ 4`, `0 ≤ n ≤ 2m`.
pub fn all_signatures() -> Vec<(usize, usize)> {
    (1..=MAX_M).flat_map(|m| (0..=2 * m).map(move |n| (m, n))).collect()
}

/// [`gamma`] over every signature, aggregated into one report.
pub fn clifford_sweep(exec: Exec) -> Result<Report> {
    let sigs = all_signatures();
    let reports = exec.map(&sigs, |&(m, n)| gamma(m, n, false));
    let mut r = Report::new("clifford-sweep");
    let mut worst: BTreeMap<String, f64> = BTreeMap::new();
    let mut flags: BTreeMap<String, bool> = BTreeMap::new();
    let mut rows = Vec::new();
    for rep in reports {
        let rep = rep?;
        for c in &rep.checks {
            if let Some(v) = c.residual {
                let w = worst.entry(c.name.clone()).or_insert(0.0);
                *w = if v.is_nan() { f64::NAN } else { w.max(v) };
            }
            if let Some(b) = c.value {
                *flags.entry(c.name.clone()).or_insert(true) &= b;
            }
        }
        rows.push(rep.data["structure"].clone());
    }
    for (name, v) in worst {
        r.residual(format!("max {name}"), v, DEFAULT_TOL);
    }
    for (name, v) in flags {
        r.boolean(format!("all {name}"), v);
    }
    r.param("signatures", sigs.len());
    r.datum("signatures", rows);
    Ok(r)
}

/// Sign tables and their agreement with operators measured on every signature.
pub fn ko_table(exec: Exec) -> Result<Report> {
    let mut r = Report::new("ko-table");
    let expected = [(0, 1, 1, 1), (2, -1, 1, -1), (4, -1, 1, 1), (6, 1, 1, -1)];
    let table_ok = KO_TABLE.iter().zip(expected).all(|(row, e)| (row.ko, row.eps0, row.eps1, row.eps2) == e);
    r.boolean("KO table rows", table_ok);
    let by_ko = |ko: u8| KO_TABLE.iter().find(|row| row.ko == ko).copied();
    let standard_ok = KO_TABLE.iter().all(|row| twisted_column(twisted_table_row(*row, 1, 1)) == Some(row.ko.to_string().as_str()));
    r.boolean("twisted table standard columns", standard_ok);
    let col = |row: Option<EpsilonRow>| row.and_then(|row| twisted_column(twisted_table_row(row, -1, -1)));
    r.boolean("twisted table column (2) from KO 0", col(by_ko(0)) == Some("(2)"));
    r.boolean("twisted table column (4) from KO 6", col(by_ko(6)) == Some("(4)"));
    let sigs = all_signatures();
    let measured = exec.map(&sigs, |&(m, n)| -> Result<(SignatureSummary, bool)> {
        let basis = CliffordBasis::standard(m, n)?;
        let set = StructuralSet::build(&basis)?;
        Ok((summary(&basis, &set), measured_row_matches(&basis, &set)))
    });
    let mut all = true;
    let mut rows = Vec::new();
    for item in measured {
        let (s, ok) = item?;
        all &= ok;
        rows.push(s);
    }
    r.boolean("measured signs match KO table for every signature", all);
    r.datum("ko_table", KO_TABLE);
    r.datum("twisted_table", TWISTED_TABLE.iter().map(|(l, row)| json!({"column": l, "row": row})).collect::<Vec<_>>());
    r.datum("measured", rows);
    Ok(r)
}

/// Bridge, involution, pairing and fluctuation checks.
pub fn morphism(m: usize, n: usize, seed: u64, samples: usize, exec: Exec) -> Result<Report> {
    let basis = CliffordBasis::standard(m, n)?;
    let set = StructuralSet::build(&basis)?;
    let side = TripleSide::mode(&basis, &set, &default_momentum(basis.len()));
    let lattice = build_lattice_dirac(&basis, &set, BRIDGE_LATTICE, 1, 1.0 / BRIDGE_LATTICE as f64)?;
    let mut r = Report::new("morphism");
    r.param("m", m).param("n", n).param("seed", seed).param("samples", samples);

    let bridge = exec.map_range(samples, |i| -> f64 {
        let mut rng = rng_for(seed, i as u64);
        let (d, dk, k, a) = if i % 2 == 0 {
            let a = random::matrix(&mut rng, side.dim());
            (side.dirac(), side.dirac_k(), side.k.clone(), a)
        } else {
            let f = random::site_function(&mut rng, lattice.site_count());
            let a = lattice.function_operator(&f);
            (lattice.side.dirac(), lattice.side.dirac_k(), lattice.side.k.clone(), a)
        };
        let lhs = twisted_commutator(&d, &a, &k).expect("conformable");
        let rhs = &k * &(&(&dk * &a) - &(&a * &dk));
        lhs.rel_diff(&rhs)
    });
    r.residual("[D,a]_rho = K[D^K,a] (mode and lattice)", bridge.iter().cloned().fold(0.0, f64::max), DEFAULT_TOL);
    r.boolean("all bridge samples finite", bridge.iter().all(|v| v.is_finite()));

    let mut involution: f64 = 0.0;
    for s in [&side, &lattice.side] {
        let back = phi_k(&phi_k(s));
        involution = involution.max(back.d.rel_diff(&s.d));
        r.boolean(format!("phi_K o phi_K restores side ({} dims)", s.dim()), back.kind == s.kind && back.inner == s.inner);
        r.residual(format!("D^K is K-self-adjoint ({} dims)", s.dim()), phi_k(s).adjointness_residual(), DEFAULT_TOL);
    }
    r.residual("phi_K o phi_K = id", involution, DEFAULT_TOL);

    let pairing = exec.map_range(samples, |i| -> f64 {
        let mut rng = rng_for(seed ^ 0x9a1e, i as u64);
        let s = if i % 2 == 0 { &side } else { &lattice.side };
        let psi = random::vector(&mut rng, s.dim());
        let phi = random::vector(&mut rng, s.dim());
        let a = s.evaluate(&psi, &phi);
        let b = phi_k(s).evaluate(&psi, &phi);
        (a - b).norm() / a.norm().max(1.0)
    });
    r.residual("<psi,D psi'> = <psi,D^K psi'>_K", pairing.iter().cloned().fold(0.0, f64::max), DEFAULT_TOL);

    let finite = build_finite_triple_ko6(1.0)?;
    let product = build_product(&side, &finite)?;
    let (t1, t2) = fluctuation_family(&product, seed, samples.min(50), exec)?;
    r.residual("type-1 fluctuation in one-form family", t1, FLUCTUATION_TOL);
    r.residual("type-2 fluctuation in one-form family", t2, FLUCTUATION_TOL);
    Ok(r)
}

/// Largest residuals of `U D U^+ = D + A + ε₁JAJ⁻¹` for both fluctuation
/// types on a product triple with finite-algebra gauge elements.
pub fn fluctuation_family(p: &ProductTriple, seed: u64, samples: usize, exec: Exec) -> Result<(f64, f64)> {
    let idm = ComplexMatrix::identity(p.manifold.dim());
    let results = exec.map_range(samples, |i| -> Result<(f64, f64)> {
        let mut rng = rng_for(seed ^ 0xf1c7, i as u64);
        let (a, b): (f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let u = idm.kron(&p.finite.element(C64::from_polar(1.0, a), C64::from_polar(1.0, b)));
        let d = &p.d_p;
        let f1 = fluctuate_type1(d, &u, &p.j_p, &p.k_p)?;
        let e1 = fluctuated_by_form(d, &one_form_type1(d, &u, &p.k_p), &p.j_p, p.signs.eps1);
        let f2 = fluctuate_type2(d, &u, &p.j_p, &p.k_p)?;
        let e2 = fluctuated_by_form(d, &one_form_type2(d, &u, &p.k_p), &p.j_p, p.signs.eps1);
        Ok((f1.rel_diff(&e1), f2.rel_diff(&e2)))
    });
    let mut worst = (0.0f64, 0.0f64);
    for x in results {
        let (a, b) = x?;
        worst = (worst.0.max(a), worst.1.max(b));
    }
    Ok(worst)
}

/// Inverse identities on random products of unit vectors.
pub fn spin(m: usize, n: usize, seed: u64, samples: usize, exec: Exec) -> Result<Report> {
    let basis = CliffordBasis::standard(m, n)?;
    let set = StructuralSet::build(&basis)?;
    let checks = exec.map_range(samples, |i| {
        let mut rng = rng_for(seed ^ 0x5b1a, i as u64);
        let len = rng.gen_range(1..=6);
        let factors: Vec<_> = (0..len).map(|_| random_unit_vector(&basis, &mut rng)).collect();
        spin_identity_check(&basis, &set.k, &factors)
    });
    let mut r = Report::new("spin");
    r.param("m", m).param("n", n).param("seed", seed).param("samples", samples);
    let (mut sign_failures, mut spin_elements, mut non_unitary, mut worst) = (0usize, 0usize, 0usize, 0.0f64);
    for c in checks {
        let c = c?;
        worst = worst.max(c.residual);
        if !c.sign_ok {
            sign_failures += 1;
        }
        if let Some(ok) = c.k_unitary {
            spin_elements += 1;
            if !ok {
                non_unitary += 1;
            }
        }
    }
    r.residual("max x rho(x^dagger) - (-1)^q I", worst, DEFAULT_TOL);
    r.boolean("inverse sign predicted by parity of q", sign_failures == 0);
    r.boolean("even-q even-length products are K-unitary", non_unitary == 0);
    r.datum("sign_failures", sign_failures).datum("spin_elements", spin_elements).datum("non_k_unitary", non_unitary);
    Ok(r)
}

/// Reflected Christoffel relation, its convergence order and the
/// spin-connection decomposition.
pub fn christoffel(family: &str, params: &[f64], point: &[f64], h: f64) -> Result<Report> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("step h = {h} must be positive")));
    }
    let g = MetricField::from_family(family, params)?;
    if point.len() != g.dim {
        return Err(Error::InvalidInput(format!("point has {} coordinates, metric dimension is {}", point.len(), g.dim)));
    }
    let mut r = Report::new("christoffel");
    r.param("family", family).param("params", params).param("point", point).param("h", h);
    let relation = verify_christoffel_relation(&g, point, h)?;
    r.residual("reflected Christoffel relation", relation, FD_TOL);
    let (coarse, fine, ratio) = halving_ratio(&g, point, h)?;
    let resolved = coarse > 1e-12;
    r.boolean("halving h reduces the relation residual by >= 3.5", !resolved || ratio >= 3.5);
    r.datum("halving", json!({"coarse": coarse, "fine": fine, "ratio": if resolved { Some(ratio) } else { None }}));
    r.residual("metric compatibility", metric_compatibility_residual(&g, point, h)?, FD_TOL);
    match spin_connection_decomposition(&g, point, h) {
        Ok(dec) => {
            r.residual("spin connection = Gamma_R + K-term", dec.residual, FD_TOL);
            r.datum("k_term_max", dec.k_term.max_abs());
        }
        Err(Error::UnsupportedMetric(why)) => {
            r.datum("spin_connection_skipped", why);
        }
        Err(e) => return Err(e),
    }
    Ok(r)
}

/// Almost-commutative product over the plane-wave model, or over a 1D
/// lattice with `lattice` sites.
pub fn product(mass: f64, lattice: Option<usize>, seed: u64) -> Result<Report> {
    let basis = CliffordBasis::standard(2, 1)?;
    let set = StructuralSet::build(&basis)?;
    let (side, sites) = match lattice {
        Some(n) => (build_lattice_dirac(&basis, &set, n, 1, 1.0 / n as f64)?.side, Some(n)),
        None => (TripleSide::mode(&basis, &set, &default_momentum(basis.len())), None),
    };
    let finite = build_finite_triple_ko6(mass)?;
    let p = build_product(&side, &finite)?;
    let mut r = Report::new("product");
    r.param("mass", mass).param("lattice", sites).param("seed", seed);
    for (name, v) in finite.axiom_residuals() {
        r.residual(format!("finite {name}"), v, DEFAULT_TOL);
    }
    r.residual("D_p self-adjoint", p.d_p.rel_diff(&p.d_p.adjoint()), DEFAULT_TOL);
    r.residual("D_p = (K x I)(D^K x I + I x D_F)", p.factorization_residual(), DEFAULT_TOL);
    r.residual("D_p Gamma_p + rho_p(Gamma_p) D_p = 0", p.twisted_grading_residual(), DEFAULT_TOL);
    let s = p.signs;
    r.boolean("(eps0, eps1, eps2, eps3) = (1, eps, 1, -eps')", (s.eps0, s.eps1, s.eps2, s.eps3) == (1, side.eps, 1, -side.eps_prime));
    r.datum("signs", s);

    let mut rng = rng_for(seed, 0);
    let dm = side.dim();
    let a1 = match lattice {
        Some(_) => {
            let f = random::site_function(&mut rng, dm / basis.spinor_dim());
            ComplexMatrix::identity(basis.spinor_dim()).kron(&ComplexMatrix::from_diagonal(&f))
        }
        None => ComplexMatrix::identity(dm).scale(random::complex(&mut rng)),
    };
    let a2 = finite.element(random::complex(&mut rng), random::complex(&mut rng));
    let der = product_derivation(&p, &a1, &a2)?;
    r.residual("derivation decoupling", der.residual, DEFAULT_TOL);
    r.residual("derivation factored form", der.factored_residual, DEFAULT_TOL);

    let uk = boost(&basis, 0.37, dm)?;
    let alpha: f64 = rng.gen_range(-3.0..3.0);
    let beta: f64 = rng.gen_range(-3.0..3.0);
    let u = finite.element(C64::from_polar(1.0, alpha), C64::from_polar(1.0, beta));
    let fl = product_fluctuation(&p, &uk, &u)?;
    r.residual("fluctuation decomposition", fl.residual, DEFAULT_TOL);
    r.residual("K x D_F invariant under U_K x I", fl.finite_term_residual, DEFAULT_TOL);

    let psi1 = random::vector(&mut rng, dm);
    let psi1p = random::vector(&mut rng, dm);
    let psi2 = random::vector(&mut rng, finite.dim_f);
    let psi2p = random::vector(&mut rng, finite.dim_f);
    let (lhs, rhs) = evaluate_pairing(&p, &psi1, &psi2, &psi1p, &psi2p)?;
    r.residual("evaluation pairing", (lhs - rhs).norm() / lhs.norm().max(1.0), DEFAULT_TOL);
    Ok(r)
}

/// `exp(θ γ^(0)γ^(1) / 2) ⊗ I`, a K-unitary boost on a side of dimension `dim`.
pub fn boost(basis: &CliffordBasis, theta: f64, dim: usize) -> Result<ComplexMatrix> {
    let b = &basis.gammas[0] * &basis.gammas[1];
    let s = basis.spinor_dim();
    if !(&b * &b).approx_eq(&ComplexMatrix::identity(s), DEFAULT_TOL) {
        return Err(Error::InvalidInput("gamma^(0)gamma^(1) does not square to one".into()));
    }
    let spinor = &ComplexMatrix::identity(s).scale_re((theta / 2.0).cosh()) + &b.scale_re((theta / 2.0).sinh());
    Ok(spinor.kron(&ComplexMatrix::identity(dim / s)))
}

/// Exhaustive 4D classification for one or both values of `ε`, with the
/// dense-nullspace cross-check.
pub fn sigsolve(eps: Option<Sign>, exec: Exec) -> Result<Report> {
    let space = SearchSpace::euclidean(2, false)?;
    let mut r = Report::new("sigsolve");
    r.param("eps", eps);
    let values: Vec<Sign> = eps.map(|e| vec![e]).unwrap_or_else(|| vec![-1, 1]);
    for e in values {
        let report = classify(&space, e, -1, exec)?;
        let dense = dense_nullspace_solutions(&space, e, -1, exec)?;
        let agreement = compare_engines(&report, &dense);
        let expected_size = if e == -1 { 1 } else { 3 };
        let expected_phase = |p: u8| if e == -1 { p % 2 == 0 } else { p % 2 == 1 };
        let family_ok = report.solutions.len() == 8
            && report
                .solutions
                .iter()
                .all(|s| s.candidate.subset.len() == expected_size && expected_phase(s.candidate.phase_power));
        let closed = report.solutions.iter().all(|s| {
            let neg = -&s.candidate.matrix;
            report.solutions.iter().any(|t| t.candidate.matrix.approx_eq(&neg, DEFAULT_TOL))
        });
        r.boolean(format!("eps={e}: exactly the expected monomial family"), family_ok);
        r.boolean(format!("eps={e}: solution set closed under K -> -K"), closed);
        r.boolean(format!("eps={e}: time directions = {}", if e == -1 { 1 } else { 3 }), uniqueness_of_time(&report));
        r.boolean(format!("eps={e}: dense nullspace agrees"), agreement.agrees());
        r.datum(&format!("eps={e}"), json!({"report": report, "agreement": agreement}));
    }
    Ok(r)
}

/// Every suite at default settings.
pub fn full(seed: u64, exec: Exec) -> Result<Report> {
    let mut r = Report::new("suite");
    r.param("seed", seed);
    r.absorb(clifford_sweep(exec)?);
    r.absorb(ko_table(exec)?);
    r.absorb(morphism(2, 1, seed, BRIDGE_SAMPLES, exec)?);
    r.absorb(spin(2, 1, seed, SPIN_SAMPLES, exec)?);
    r.absorb(christoffel("warped-diag", &[0.1, 0.05], &DEFAULT_POINT, DEFAULT_H)?);
    r.absorb(product(1.0, None, seed)?);
    r.absorb(sigsolve(None, exec)?);
    Ok(r)
}

/// Validates a signature without building it.
pub fn check_signature(m: usize, n: usize) -> Result<()> {
    Signature::new(m, n).map(|_| ())
}
