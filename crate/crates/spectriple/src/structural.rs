//! Fundamental twist `K`, grading `Γ`, charge conjugation `C` and real
//! structures `J = C∘cc`, `Ĵ`, with the KO sign tables and Pin/Spin checks.

use nalgebra::DVector;
use serde::Serialize;

use crate::clifford::{is_plus_minus_real, CliffordBasis};
use crate::error::{Error, Result};
use crate::matrix::{i_pow, inner, product, sign_between, AntiUnitary, CVector, ComplexMatrix, C64, DEFAULT_TOL, IM};

/// Measured or tabulated sign `±1`.
pub type Sign = i8;

fn gamma_product(basis: &[ComplexMatrix], idx: impl IntoIterator<Item = usize>, n: usize) -> ComplexMatrix {
    let picked: Vec<&ComplexMatrix> = idx.into_iter().map(|i| &basis[i]).collect();
    product(n, picked)
}

/// Phase making a product of `k` pairwise anticommuting generators of equal
/// square Hermitian and involutive: `i^{−k(k−1)/2}`.
fn monomial_phase(k: usize) -> C64 {
    i_pow(-((k * k.saturating_sub(1) / 2) as i64))
}

/// `n` odd: `K = i^{−n(n−1)/2} γ^(1)…γ^(n)`; `n` even: product of the
/// negative-norm generators with the same phase rule, `K = I` when `n = 2m`.
pub fn build_k(basis: &CliffordBasis) -> ComplexMatrix {
    let (m, n) = (basis.sig.m, basis.sig.n);
    let d = basis.spinor_dim();
    if n % 2 == 1 {
        gamma_product(&basis.gammas, 0..n, d).scale(monomial_phase(n))
    } else {
        let k = 2 * m - n;
        gamma_product(&basis.gammas, n..2 * m, d).scale(monomial_phase(k))
    }
}

/// `Γ = i^{−m(2m−1)−n} γ^(1)…γ^(2m)`.
pub fn build_grading(basis: &CliffordBasis) -> ComplexMatrix {
    let (m, n) = (basis.sig.m as i64, basis.sig.n as i64);
    let d = basis.spinor_dim();
    gamma_product(&basis.gammas, 0..basis.len(), d).scale(i_pow(-(m * (2 * m - 1) + n)))
}

/// `C` from the product formula over an entrywise real-or-imaginary basis.
///
/// With `I` the imaginary generators, `C ∝ ∏_{I}` when `|I|` is odd and
/// `C ∝ ∏_{Ī}` otherwise. The phase is `1` when that product is real and `−i`
/// when it is imaginary, so `C` is always real.
pub fn charge_conjugation_matrix(gammas: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    if !is_plus_minus_real(gammas) {
        return Err(Error::NonRealizableBasis);
    }
    let d = gammas[0].rows();
    let imaginary: Vec<usize> = (0..gammas.len())
        .filter(|&i| gammas[i].conj_sign(1e-12) == Some(-1))
        .collect();
    let chosen: Vec<usize> = if imaginary.len() % 2 == 1 {
        imaginary
    } else {
        (0..gammas.len()).filter(|i| !imaginary.contains(i)).collect()
    };
    let p = gamma_product(gammas, chosen, d);
    Ok(if p.conj_sign(1e-12) == Some(1) { p } else { p.scale(-IM) })
}

/// Returns `(C, J, Ĵ)` with `J = C∘cc` and `Ĵ = K∘J`, so that `J = K∘Ĵ`.
pub fn build_charge_conjugation(basis: &CliffordBasis) -> Result<(ComplexMatrix, AntiUnitary, AntiUnitary)> {
    let c = charge_conjugation_matrix(&basis.gammas)?;
    let k = build_k(basis);
    let j = AntiUnitary::new(c.clone())?;
    let jhat = AntiUnitary::new(&k * &c)?;
    Ok((c, j, jhat))
}

/// Predicted `(ε, ε′)` in `KJ = εJK`, `KΓ = ε′ΓK` for the phases of [`build_k`].
pub fn predicted_epsilon(m: usize, n: usize) -> (Sign, Sign) {
    let parity = |e: usize| if e % 2 == 0 { 1 } else { -1 };
    if n % 2 == 1 {
        (parity(n * (3 * n - 1) / 2), -1)
    } else {
        let k = 2 * m - n;
        (parity(k * k.saturating_sub(1) / 2), 1)
    }
}

/// KO row of the untwisted pseudo-Riemannian triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EpsilonRow {
    pub ko: u8,
    pub eps0: Sign,
    pub eps1: Sign,
    pub eps2: Sign,
}

pub const KO_TABLE: [EpsilonRow; 4] = [
    EpsilonRow { ko: 0, eps0: 1, eps1: 1, eps2: 1 },
    EpsilonRow { ko: 2, eps0: -1, eps1: 1, eps2: -1 },
    EpsilonRow { ko: 4, eps0: -1, eps1: 1, eps2: 1 },
    EpsilonRow { ko: 6, eps0: 1, eps1: 1, eps2: -1 },
];

/// `ko = 2(n − m) mod 8`.
pub fn ko_dimension_row(n: usize, m: usize) -> EpsilonRow {
    let ko = (2 * (n as i64 - m as i64)).rem_euclid(8) as u8;
    assert!(ko % 2 == 0, "odd KO dimension in even dimension");
    KO_TABLE[(ko / 2) as usize]
}

/// Signs of a twisted triple, `ε₃` from `DΓ = ε₃ΓD` style conventions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedRow {
    pub eps0: Sign,
    pub eps1: Sign,
    pub eps2: Sign,
    pub eps3: Sign,
}

/// The six columns of the twisted table: standard KO 0, 2, 4, 6 then the two
/// extra columns labelled "(2)" and "(4)".
pub const TWISTED_TABLE: [(&str, TwistedRow); 6] = [
    ("0", TwistedRow { eps0: 1, eps1: 1, eps2: 1, eps3: -1 }),
    ("2", TwistedRow { eps0: -1, eps1: 1, eps2: -1, eps3: -1 }),
    ("4", TwistedRow { eps0: -1, eps1: 1, eps2: 1, eps3: -1 }),
    ("6", TwistedRow { eps0: 1, eps1: 1, eps2: -1, eps3: -1 }),
    ("(2)", TwistedRow { eps0: 1, eps1: -1, eps2: 1, eps3: 1 }),
    ("(4)", TwistedRow { eps0: 1, eps1: -1, eps2: -1, eps3: 1 }),
];

pub fn twisted_table_row(row: EpsilonRow, eps: Sign, eps_prime: Sign) -> TwistedRow {
    TwistedRow {
        eps0: row.eps0,
        eps1: eps * row.eps1,
        eps2: row.eps2,
        eps3: -eps_prime,
    }
}

/// Label of the twisted-table column matching `row`, if any.
pub fn twisted_column(row: TwistedRow) -> Option<&'static str> {
    TWISTED_TABLE.iter().find(|(_, r)| *r == row).map(|(l, _)| *l)
}

/// `K`, `Γ`, `C`, `J`, `Ĵ` with their measured signs.
#[derive(Clone, Debug)]
pub struct StructuralSet {
    pub k: ComplexMatrix,
    pub gamma: ComplexMatrix,
    pub c: ComplexMatrix,
    pub j: AntiUnitary,
    pub jhat: AntiUnitary,
    pub eps0: Sign,
    pub eps1k: Sign,
    pub eps2: Sign,
    pub eps: Sign,
    pub eps_prime: Sign,
}

impl StructuralSet {
    pub fn build(basis: &CliffordBasis) -> Result<Self> {
        let k = build_k(basis);
        let gamma = build_grading(basis);
        let (c, j, jhat) = build_charge_conjugation(basis)?;
        let tol = DEFAULT_TOL;
        let eps0 = j
            .square_sign(tol)
            .ok_or_else(|| Error::InconsistentStructure("J² is not ±I".into()))?;
        let eps2 = j
            .commutation_sign(&gamma, tol)
            .ok_or_else(|| Error::InconsistentStructure("J neither commutes nor anticommutes with Γ".into()))?;
        let eps = j
            .commutation_sign(&k, tol)
            .ok_or_else(|| Error::InconsistentStructure("K neither commutes nor anticommutes with J".into()))?;
        let eps_prime = sign_between(&(&k * &gamma), &(&gamma * &k), tol)
            .ok_or_else(|| Error::InconsistentStructure("K neither commutes nor anticommutes with Γ".into()))?;
        let eps1k = mode_dirac_sign(basis, &j);
        Ok(Self {
            k,
            gamma,
            c,
            j,
            jhat,
            eps0,
            eps1k,
            eps2,
            eps,
            eps_prime,
        })
    }

    pub fn dim(&self) -> usize {
        self.k.rows()
    }

    pub fn rho(&self, o: &ComplexMatrix) -> ComplexMatrix {
        twist_apply(&self.k, o)
    }
}

/// Sign of `J D^K = ε₁ D^K J` on the plane-wave model `D^K = i Σ k_μ γ^μ ⊗ A`.
fn mode_dirac_sign(basis: &CliffordBasis, j: &AntiUnitary) -> Sign {
    let dk = crate::kmorphism::mode_dirac_k(basis, &crate::kmorphism::default_momentum(basis.len()));
    let jm = j.tensor(&AntiUnitary::conjugation(2));
    jm.commutation_sign(&dk, DEFAULT_TOL).unwrap_or(0)
}

/// Measured `(ε, ε′)`, checked against [`predicted_epsilon`].
pub fn epsilon_parameters(basis: &CliffordBasis, set: &StructuralSet) -> Result<(Sign, Sign)> {
    let predicted = predicted_epsilon(basis.sig.m, basis.sig.n);
    let measured = (set.eps, set.eps_prime);
    if measured != predicted {
        return Err(Error::InconsistentStructure(format!(
            "measured (ε, ε′) = {measured:?}, predicted {predicted:?}"
        )));
    }
    Ok(measured)
}

/// `ρ(O) = K O K†`.
pub fn twist_apply(k: &ComplexMatrix, o: &ComplexMatrix) -> ComplexMatrix {
    &(k * o) * &k.adjoint()
}

/// `ρ⁻¹(O) = K† O K`.
pub fn twist_inverse(k: &ComplexMatrix, o: &ComplexMatrix) -> ComplexMatrix {
    &(&k.adjoint() * o) * k
}

/// Largest `‖ρ(a†) − (ρ⁻¹(a))†‖` over the given samples.
pub fn regularity_residual(k: &ComplexMatrix, samples: &[ComplexMatrix]) -> f64 {
    samples
        .iter()
        .map(|a| twist_apply(k, &a.adjoint()).rel_diff(&twist_inverse(k, a).adjoint()))
        .fold(0.0, f64::max)
}

pub fn check_regularity(k: &ComplexMatrix, samples: &[ComplexMatrix]) -> bool {
    regularity_residual(k, samples) <= DEFAULT_TOL
}

/// `⟨ψ, φ⟩_K = ⟨ψ, Kφ⟩`.
pub fn k_product(k: &ComplexMatrix, psi: &CVector, phi: &CVector) -> C64 {
    inner(psi, &k.apply(phi))
}

/// `O^{†K} = K O† K`.
pub fn k_adjoint(k: &ComplexMatrix, o: &ComplexMatrix) -> ComplexMatrix {
    &(k * &o.adjoint()) * k
}

pub fn is_k_unitary(k: &ComplexMatrix, u: &ComplexMatrix) -> bool {
    k_unitarity_residual(k, u) <= DEFAULT_TOL
}

pub fn k_unitarity_residual(k: &ComplexMatrix, u: &ComplexMatrix) -> f64 {
    let a = (&(u * k) * &u.adjoint()).rel_diff(k);
    let b = (&(&u.adjoint() * k) * u).rel_diff(k);
    a.max(b)
}

/// `ψ̄ = ψ† K` as a row of coefficients.
pub fn spinor_dual(k: &ComplexMatrix, psi: &CVector) -> CVector {
    k.transpose().apply(&psi.map(|z| z.conj()))
}

/// Evaluates a dual spinor on a vector.
pub fn apply_dual(dual: &CVector, phi: &CVector) -> C64 {
    dual.iter().zip(phi.iter()).map(|(a, b)| a * b).sum()
}

/// Result of a Pin/Spin inverse check for `x = c(v₁)…c(v_k)`.
#[derive(Clone, Debug, Serialize)]
pub struct SpinCheck {
    pub length: usize,
    /// Number of factors with negative norm.
    pub q: usize,
    /// Sign `s` with `x⁻¹ = s ρ(x†)`, `(−1)^q` expected.
    pub sign: Sign,
    /// `‖x ρ(x†) − (−1)^q I‖ / max(1, ‖x‖²)`.
    pub residual: f64,
    pub sign_ok: bool,
    /// Present for even-length, even-`q` products.
    pub k_unitary: Option<bool>,
}

pub fn spin_identity_check(basis: &CliffordBasis, k: &ComplexMatrix, factors: &[DVector<f64>]) -> Result<SpinCheck> {
    let d = basis.spinor_dim();
    let mut q = 0;
    let mut x = ComplexMatrix::identity(d);
    for (index, v) in factors.iter().enumerate() {
        let norm: f64 = v.iter().enumerate().map(|(a, x)| basis.metric_sign(a) * x * x).sum();
        if (norm.abs() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidFactor { index, norm });
        }
        if norm < 0.0 {
            q += 1;
        }
        x = &x * &basis.clifford_mul(v.as_slice());
    }
    let rho_adj = twist_apply(k, &x.adjoint());
    let expected: Sign = if q % 2 == 0 { 1 } else { -1 };
    let prod = &x * &rho_adj;
    let id = ComplexMatrix::identity(d);
    let scale = x.frobenius_norm().powi(2).max(1.0);
    let residual = (&prod - &id.scale_re(expected as f64)).frobenius_norm() / scale;
    let sign = if residual <= DEFAULT_TOL {
        expected
    } else {
        let flipped = (&prod + &id.scale_re(expected as f64)).frobenius_norm() / scale;
        if flipped <= DEFAULT_TOL { -expected } else { 0 }
    };
    let k_unitary = (factors.len() % 2 == 0 && q % 2 == 0).then(|| is_k_unitary(k, &x));
    Ok(SpinCheck {
        length: factors.len(),
        q,
        sign,
        residual,
        sign_ok: sign == expected && residual <= DEFAULT_TOL,
        k_unitary,
    })
}

/// Random unit vector for the signature of `basis`, `|g(v,v)| = 1`, with
/// `|g(v,v)|` at least a fifth of the Euclidean norm before scaling.
pub fn random_unit_vector(basis: &CliffordBasis, rng: &mut impl rand::Rng) -> DVector<f64> {
    loop {
        let v = crate::random::real_vector(rng, basis.len());
        let norm: f64 = v.iter().enumerate().map(|(a, x)| basis.metric_sign(a) * x * x).sum();
        if norm.abs() > 0.2 * v.norm_squared() {
            return v / norm.abs().sqrt();
        }
    }
}

/// Named residuals of every structural invariant, for reports and sweeps.
pub fn structural_residuals(basis: &CliffordBasis, set: &StructuralSet) -> Vec<(String, f64)> {
    let d = basis.spinor_dim();
    let id = ComplexMatrix::identity(d);
    let mut out = vec![
        ("K hermitian".to_string(), set.k.rel_diff(&set.k.adjoint())),
        ("K involutive".to_string(), (&set.k * &set.k).rel_diff(&id)),
        ("Gamma hermitian".to_string(), set.gamma.rel_diff(&set.gamma.adjoint())),
        ("Gamma involutive".to_string(), (&set.gamma * &set.gamma).rel_diff(&id)),
    ];
    let mut grading: f64 = 0.0;
    let mut real: f64 = 0.0;
    let mut twist: f64 = 0.0;
    for (a, g) in basis.gammas.iter().enumerate() {
        grading = grading.max((&(&set.gamma * g) + &(g * &set.gamma)).frobenius_norm());
        real = real.max(set.j.commutation_residual(g, -1));
        twist = twist.max(set.rho(g).rel_diff(&g.scale_re(basis.metric_sign(a))));
    }
    out.push(("Gamma anticommutes with gammas".into(), grading));
    out.push(("J anticommutes with gammas".into(), real));
    out.push(("rho(gamma^a) = g_a gamma^a".into(), twist));
    let jk = set.jhat.after(&set.k);
    out.push(("J = K o Jhat".into(), jk.linear_part().rel_diff(set.j.linear_part())));
    let hat = charge_conjugation_matrix(&basis.euclid_gammas).map(|c| phase_distance(&c, set.jhat.linear_part()));
    out.push(("Jhat matches Euclidean formula up to phase".into(), hat.unwrap_or(f64::INFINITY)));
    let mut hat_real: f64 = 0.0;
    for e in &basis.euclid_gammas {
        hat_real = hat_real.max(set.jhat.commutation_residual(e, -1));
    }
    out.push(("Jhat anticommutes with Euclidean gammas".into(), hat_real));
    out
}

/// `min_λ ‖a − λ b‖ / ‖a‖` over unit-modulus `λ`.
pub fn phase_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let overlap: C64 = b.inner().iter().zip(a.inner().iter()).map(|(x, y)| x.conj() * y).sum();
    if overlap.norm() == 0.0 {
        return f64::INFINITY;
    }
    let lambda = overlap / overlap.norm();
    a.rel_diff(&b.scale(lambda))
}
