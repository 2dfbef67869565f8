//! Almost-commutative products `D_p = D ⊗ I + K ⊗ D_F` of a twisted manifold
//! side with a finite triple of KO-dimension 6.

use serde::Serialize;

use crate::clifford::pauli;
use crate::error::{Error, Result};
use crate::kmorphism::{twisted_commutator, TripleSide};
use crate::matrix::{inner, sign_between, AntiUnitary, CVector, ComplexMatrix, C64, DEFAULT_TOL};
use crate::structural::{is_k_unitary, k_adjoint, k_product, twist_apply, EpsilonRow, Sign};

/// Finite triple on `C⁴ = span{L, R, L̄, R̄}`.
///
/// `A_F = C ⊕ C` acts as `diag(λ, μ, λ, λ)`, `D_F = I₂ ⊗ mσ₁`,
/// `Γ_F = σ₃ ⊗ σ₃`, `J_F = (σ₁ ⊗ I₂)∘cc`.
#[derive(Clone, Debug)]
pub struct FiniteTriple {
    pub dim_f: usize,
    pub mass: f64,
    pub algebra_generators: Vec<ComplexMatrix>,
    pub d_f: ComplexMatrix,
    pub j_f: AntiUnitary,
    pub gamma_f: ComplexMatrix,
    pub eps_row: EpsilonRow,
}

impl FiniteTriple {
    /// Representation of `(λ, μ) ∈ C ⊕ C`.
    pub fn element(&self, lambda: C64, mu: C64) -> ComplexMatrix {
        ComplexMatrix::from_diagonal(&[lambda, mu, lambda, lambda])
    }

    /// Named residuals of every axiom.
    pub fn axiom_residuals(&self) -> Vec<(&'static str, f64)> {
        let j = &self.j_f;
        let mut first_order: f64 = 0.0;
        let mut order_zero: f64 = 0.0;
        for a in &self.algebra_generators {
            for b in &self.algebra_generators {
                let b_op = j.conjugate(&b.adjoint());
                let da = &(&self.d_f * a) - &(a * &self.d_f);
                first_order = first_order.max((&(&da * &b_op) - &(&b_op * &da)).frobenius_norm());
                order_zero = order_zero.max((&(a * &b_op) - &(&b_op * a)).frobenius_norm());
            }
        }
        vec![
            ("J_F^2 = eps0", j.square().rel_diff(&ComplexMatrix::identity(self.dim_f).scale_re(self.eps_row.eps0 as f64))),
            ("J_F D_F = eps1 D_F J_F", j.commutation_residual(&self.d_f, self.eps_row.eps1)),
            ("J_F Gamma_F = eps2 Gamma_F J_F", j.commutation_residual(&self.gamma_f, self.eps_row.eps2)),
            ("Gamma_F D_F = -D_F Gamma_F", (&(&self.gamma_f * &self.d_f) + &(&self.d_f * &self.gamma_f)).frobenius_norm()),
            ("D_F self-adjoint", self.d_f.rel_diff(&self.d_f.adjoint())),
            ("order zero", order_zero),
            ("first order", first_order),
        ]
    }
}

pub fn build_finite_triple_ko6(mass: f64) -> Result<FiniteTriple> {
    if mass == 0.0 || !mass.is_finite() {
        return Err(Error::InvalidInput(format!("mass {mass} must be finite and nonzero")));
    }
    let id2 = pauli(0);
    let triple = FiniteTriple {
        dim_f: 4,
        mass,
        algebra_generators: vec![
            ComplexMatrix::from_diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 0.0)]),
            ComplexMatrix::from_diagonal(&[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]),
        ],
        d_f: id2.kron(&pauli(1)).scale_re(mass),
        j_f: AntiUnitary::new(pauli(1).kron(&id2))?,
        gamma_f: pauli(3).kron(&pauli(3)),
        eps_row: EpsilonRow { ko: 6, eps0: 1, eps1: 1, eps2: -1 },
    };
    for (name, r) in triple.axiom_residuals() {
        if r > DEFAULT_TOL {
            return Err(Error::Construction(format!("finite triple axiom `{name}` fails with residual {r:e}")));
        }
    }
    Ok(triple)
}

/// Indices of candidates with `O = O†`, `JO = εOJ`, `ΓO = ε′OΓ`.
pub fn solve_o_constraints(j: &AntiUnitary, gamma: &ComplexMatrix, eps: Sign, eps_prime: Sign, candidates: &[ComplexMatrix]) -> Result<Vec<usize>> {
    if candidates.is_empty() {
        return Err(Error::InvalidInput("empty candidate list".into()));
    }
    Ok(candidates
        .iter()
        .enumerate()
        .filter(|(_, o)| {
            o.is_hermitian(DEFAULT_TOL)
                && j.commutation_residual(o, eps) <= DEFAULT_TOL
                && (&(gamma * *o) - &(*o * gamma).scale_re(eps_prime as f64)).frobenius_norm() <= DEFAULT_TOL * o.frobenius_norm().max(1.0)
        })
        .map(|(i, _)| i)
        .collect())
}

/// Measured signs `(ε₀, ε₁, ε₂, ε₃)` of a product triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ProductSigns {
    pub eps0: Sign,
    pub eps1: Sign,
    pub eps2: Sign,
    pub eps3: Sign,
}

#[derive(Clone, Debug)]
pub struct ProductTriple {
    pub manifold: TripleSide,
    pub finite: FiniteTriple,
    pub d_p: ComplexMatrix,
    pub j_p: AntiUnitary,
    pub gamma_p: ComplexMatrix,
    /// `K ⊗ I_F`.
    pub k_p: ComplexMatrix,
    pub signs: ProductSigns,
}

impl ProductTriple {
    pub fn rho(&self, o: &ComplexMatrix) -> ComplexMatrix {
        twist_apply(&self.k_p, o)
    }

    /// Residual of the factorization `D_p = (K⊗I)(D^K⊗I + I⊗D_F)`.
    pub fn factorization_residual(&self) -> f64 {
        let idf = ComplexMatrix::identity(self.finite.dim_f);
        let idm = ComplexMatrix::identity(self.manifold.dim());
        let inner = &self.manifold.dirac_k().kron(&idf) + &idm.kron(&self.finite.d_f);
        self.d_p.rel_diff(&(&self.k_p * &inner))
    }

    /// Residual of `D_p Γ_p + ρ_p(Γ_p) D_p = 0`.
    pub fn twisted_grading_residual(&self) -> f64 {
        (&(&self.d_p * &self.gamma_p) + &(&self.rho(&self.gamma_p) * &self.d_p)).frobenius_norm() / self.d_p.frobenius_norm().max(1.0)
    }
}

pub fn build_product(manifold: &TripleSide, finite: &FiniteTriple) -> Result<ProductTriple> {
    let idf = ComplexMatrix::identity(finite.dim_f);
    let d = manifold.dirac();
    let d_p = &d.kron(&idf) + &manifold.k.kron(&finite.d_f);
    let j_p = manifold.j.tensor(&finite.j_f);
    let gamma_p = manifold.gamma.kron(&finite.gamma_f);
    let k_p = manifold.k.kron(&idf);
    if !d_p.is_hermitian(DEFAULT_TOL) {
        return Err(Error::InconsistentStructure("D_p is not self-adjoint".into()));
    }
    let missing = |what: &str| Error::InconsistentStructure(format!("{what} has no definite sign"));
    let eps0 = j_p.square_sign(DEFAULT_TOL).ok_or_else(|| missing("J_p^2"))?;
    let eps1 = j_p.commutation_sign(&d_p, DEFAULT_TOL).ok_or_else(|| missing("J_p D_p"))?;
    let eps2 = j_p.commutation_sign(&gamma_p, DEFAULT_TOL).ok_or_else(|| missing("J_p Gamma_p"))?;
    let eps3 = sign_between(&(&gamma_p * &d_p), &(&d_p * &gamma_p), DEFAULT_TOL).ok_or_else(|| missing("Gamma_p D_p"))?;
    let signs = ProductSigns { eps0, eps1, eps2, eps3 };
    if eps1 != manifold.eps || eps3 != -manifold.eps_prime {
        return Err(Error::InconsistentStructure(format!(
            "measured {signs:?}, expected eps1 = {} and eps3 = {}",
            manifold.eps, -manifold.eps_prime
        )));
    }
    Ok(ProductTriple {
        manifold: manifold.clone(),
        finite: finite.clone(),
        d_p,
        j_p,
        gamma_p,
        k_p,
        signs,
    })
}

#[derive(Clone, Debug)]
pub struct DerivationCheck {
    pub lhs: ComplexMatrix,
    pub rhs: ComplexMatrix,
    pub residual: f64,
    /// Residual against `K([D^K, a₁] ⊗ a₂ + a₁ ⊗ [D_F, a₂])`.
    pub factored_residual: f64,
}

/// `[D_p, a₁⊗a₂]_{ρ_p}` against `[D,a₁]_ρ ⊗ a₂ + K a₁ ⊗ [D_F, a₂]`.
pub fn product_derivation(p: &ProductTriple, a1: &ComplexMatrix, a2: &ComplexMatrix) -> Result<DerivationCheck> {
    if a1.shape() != p.manifold.d.shape() || a2.shape() != p.finite.d_f.shape() {
        return Err(Error::Dimension {
            op: "product_derivation",
            left: a1.shape(),
            right: a2.shape(),
        });
    }
    let k = &p.manifold.k;
    let a = a1.kron(a2);
    let lhs = twisted_commutator(&p.d_p, &a, &p.k_p)?;
    let d = p.manifold.dirac();
    let df_a2 = &(&p.finite.d_f * a2) - &(a2 * &p.finite.d_f);
    let rhs = &twisted_commutator(&d, a1, k)?.kron(a2) + &(k * a1).kron(&df_a2);
    let dk = p.manifold.dirac_k();
    let dk_a1 = &(&dk * a1) - &(a1 * &dk);
    let factored = &p.k_p * &(&dk_a1.kron(a2) + &a1.kron(&df_a2));
    let scale = lhs.frobenius_norm().max(1.0);
    Ok(DerivationCheck {
        residual: (&lhs - &rhs).frobenius_norm() / scale,
        factored_residual: (&lhs - &factored).frobenius_norm() / scale,
        lhs,
        rhs,
    })
}

#[derive(Clone, Debug)]
pub struct FluctuationCheck {
    pub fluctuated: ComplexMatrix,
    pub residual: f64,
    /// `‖(U_K ⊗ I)(K ⊗ D_F)(U_K† ⊗ I) − K ⊗ D_F‖`.
    pub finite_term_residual: f64,
}

/// `(U_K⊗U) D_p (U_K†⊗U†)` against `K(V_K D^K V_K^{†K} ⊗ I + I ⊗ U D_F U†)`
/// with `U_K = u_K J u_K J⁻¹`, `U = u J_F u J_F⁻¹`, `V_K = ρ(U_K)`.
pub fn product_fluctuation(p: &ProductTriple, uk: &ComplexMatrix, u: &ComplexMatrix) -> Result<FluctuationCheck> {
    let k = &p.manifold.k;
    if !is_k_unitary(k, uk) {
        return Err(Error::InvalidGaugeElement("K-unitary"));
    }
    if !u.is_unitary(DEFAULT_TOL) {
        return Err(Error::InvalidGaugeElement("unitary"));
    }
    let big_uk = uk * &p.manifold.j.conjugate(uk);
    let big_u = u * &p.finite.j_f.conjugate(u);
    let w = big_uk.kron(&big_u);
    let fluctuated = &(&w * &p.d_p) * &big_uk.adjoint().kron(&big_u.adjoint());
    let v_k = twist_apply(k, &big_uk);
    let dk_a = &(&v_k * &p.manifold.dirac_k()) * &k_adjoint(k, &v_k);
    let d_af = &(&big_u * &p.finite.d_f) * &big_u.adjoint();
    let idf = ComplexMatrix::identity(p.finite.dim_f);
    let idm = ComplexMatrix::identity(p.manifold.dim());
    let expected = &p.k_p * &(&dk_a.kron(&idf) + &idm.kron(&d_af));
    let kdf = k.kron(&p.finite.d_f);
    let w_k = big_uk.kron(&idf);
    let conj_kdf = &(&w_k * &kdf) * &w_k.adjoint();
    Ok(FluctuationCheck {
        residual: fluctuated.rel_diff(&expected),
        finite_term_residual: kdf.rel_diff(&conj_kdf),
        fluctuated,
    })
}

/// `⟨ψ₁⊗ψ₂, D_p ψ₁'⊗ψ₂'⟩` against
/// `⟨ψ₁, D^Kψ₁'⟩_K⟨ψ₂,ψ₂'⟩ + ⟨ψ₁,ψ₁'⟩_K⟨ψ₂, D_Fψ₂'⟩`.
pub fn evaluate_pairing(p: &ProductTriple, psi1: &CVector, psi2: &CVector, psi1p: &CVector, psi2p: &CVector) -> Result<(C64, C64)> {
    let (dm, df) = (p.manifold.dim(), p.finite.dim_f);
    if psi1.len() != dm || psi1p.len() != dm || psi2.len() != df || psi2p.len() != df {
        return Err(Error::Dimension {
            op: "evaluate_pairing",
            left: (dm, df),
            right: (psi1.len(), psi2.len()),
        });
    }
    let psi = psi1.kronecker(psi2);
    let psip = psi1p.kronecker(psi2p);
    let lhs = inner(&psi, &p.d_p.apply(&psip));
    let k = &p.manifold.k;
    let dk = p.manifold.dirac_k();
    let rhs = k_product(k, psi1, &dk.apply(psi1p)) * inner(psi2, psi2p) + k_product(k, psi1, psi1p) * inner(psi2, &p.finite.d_f.apply(psi2p));
    Ok((lhs, rhs))
}
