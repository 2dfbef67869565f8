//! The K-morphism between a twisted triple `(D, ⟨·,·⟩)` and its
//! pseudo-Riemannian image `(D^K = KD, ⟨·,·⟩_K)`, twisted derivations,
//! first-order conditions, fluctuations and two small Dirac models.

use serde::Serialize;

use crate::clifford::CliffordBasis;
use crate::error::{Error, Result};
use crate::matrix::{AntiUnitary, ComplexMatrix, C64, DEFAULT_TOL, IM, ONE, ZERO};
use crate::structural::{is_k_unitary, k_adjoint, twist_apply, Sign, StructuralSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SideKind {
    Twisted,
    Pseudo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InnerProduct {
    Standard,
    Krein,
}

/// One side of the K-morphism. `d` is `D` on the twisted side and `D^K` on
/// the pseudo side; `k`, `j`, `gamma` act on the full Hilbert space.
#[derive(Clone, Debug)]
pub struct TripleSide {
    pub kind: SideKind,
    pub d: ComplexMatrix,
    pub k: ComplexMatrix,
    pub j: AntiUnitary,
    pub gamma: ComplexMatrix,
    pub eps: Sign,
    pub eps_prime: Sign,
    pub inner: InnerProduct,
}

impl TripleSide {
    /// Twisted side from a self-adjoint `D`.
    pub fn twisted(d: ComplexMatrix, k: ComplexMatrix, j: AntiUnitary, gamma: ComplexMatrix, eps: Sign, eps_prime: Sign) -> Result<Self> {
        if !d.is_hermitian(DEFAULT_TOL) {
            return Err(Error::InvalidInput("twisted-side Dirac operator is not self-adjoint".into()));
        }
        Ok(Self {
            kind: SideKind::Twisted,
            d,
            k,
            j,
            gamma,
            eps,
            eps_prime,
            inner: InnerProduct::Standard,
        })
    }

    /// Twisted side of the plane-wave model for a structural set.
    pub fn mode(basis: &CliffordBasis, set: &StructuralSet, momentum: &[f64]) -> Self {
        let dk = mode_dirac_k(basis, momentum);
        let id2 = ComplexMatrix::identity(2);
        let k = set.k.kron(&id2);
        Self {
            kind: SideKind::Twisted,
            d: &k * &dk,
            k,
            j: set.j.tensor(&AntiUnitary::conjugation(2)),
            gamma: set.gamma.kron(&id2),
            eps: set.eps,
            eps_prime: set.eps_prime,
            inner: InnerProduct::Standard,
        }
    }

    pub fn dim(&self) -> usize {
        self.d.rows()
    }

    /// `D^K` regardless of which side this is.
    pub fn dirac_k(&self) -> ComplexMatrix {
        match self.kind {
            SideKind::Twisted => &self.k * &self.d,
            SideKind::Pseudo => self.d.clone(),
        }
    }

    /// `D` regardless of which side this is.
    pub fn dirac(&self) -> ComplexMatrix {
        match self.kind {
            SideKind::Twisted => self.d.clone(),
            SideKind::Pseudo => &self.k * &self.d,
        }
    }

    /// Self-adjointness on the twisted side, K-self-adjointness on the pseudo side.
    pub fn adjointness_residual(&self) -> f64 {
        match self.kind {
            SideKind::Twisted => self.d.rel_diff(&self.d.adjoint()),
            SideKind::Pseudo => self.d.rel_diff(&k_adjoint(&self.k, &self.d)),
        }
    }

    pub fn rho(&self, o: &ComplexMatrix) -> ComplexMatrix {
        twist_apply(&self.k, o)
    }

    /// `⟨ψ, Dψ'⟩` on the twisted side, `⟨ψ, D^Kψ'⟩_K` on the pseudo side.
    pub fn evaluate(&self, psi: &crate::matrix::CVector, phi: &crate::matrix::CVector) -> C64 {
        let dphi = self.d.apply(phi);
        match self.inner {
            InnerProduct::Standard => crate::matrix::inner(psi, &dphi),
            InnerProduct::Krein => crate::structural::k_product(&self.k, psi, &dphi),
        }
    }
}

/// Swaps sides: `D ↔ K D`, standard ↔ Krein product. Involutive.
pub fn phi_k(side: &TripleSide) -> TripleSide {
    let (kind, inner) = match side.kind {
        SideKind::Twisted => (SideKind::Pseudo, InnerProduct::Krein),
        SideKind::Pseudo => (SideKind::Twisted, InnerProduct::Standard),
    };
    TripleSide {
        kind,
        inner,
        d: &side.k * &side.d,
        ..side.clone()
    }
}

/// `[D, a]_ρ = D a − ρ(a) D`.
pub fn twisted_commutator(d: &ComplexMatrix, a: &ComplexMatrix, k: &ComplexMatrix) -> Result<ComplexMatrix> {
    if d.shape() != a.shape() || d.shape() != k.shape() {
        return Err(Error::Dimension {
            op: "twisted_commutator",
            left: d.shape(),
            right: a.shape(),
        });
    }
    Ok(&(d * a) - &(&twist_apply(k, a) * d))
}

/// `b° = J b† J⁻¹`.
pub fn opposite(j: &AntiUnitary, b: &ComplexMatrix) -> ComplexMatrix {
    j.conjugate(&b.adjoint())
}

/// `ρ°(b°) = (ρ⁻¹(b))° = J ρ(b)† J⁻¹` for Hermitian `K`.
pub fn twisted_opposite(j: &AntiUnitary, k: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    j.conjugate(&twist_apply(k, b).adjoint())
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FirstOrderCheck {
    /// `‖[[D,a]_ρ, b°]_{ρ°}‖` (twisted) or `‖[[D^K,a], b°]‖` (untwisted).
    pub residual: f64,
    /// `‖[[D,a]_ρ, b°]_{ρ°} − K[[D^K,a], b°]‖`.
    pub bridge_residual: f64,
}

/// First-order condition on either side of the morphism, with the bridge
/// between the two forms.
pub fn check_first_order(side: &TripleSide, a: &ComplexMatrix, b: &ComplexMatrix, twisted: bool) -> FirstOrderCheck {
    let d = side.dirac();
    let dk = side.dirac_k();
    let k = &side.k;
    let b_op = opposite(&side.j, b);
    let rho_b_op = twisted_opposite(&side.j, k, b);
    let da = twisted_commutator(&d, a, k).expect("shapes checked by side");
    let tw = &(&da * &b_op) - &(&rho_b_op * &da);
    let dka = &(&dk * a) - &(a * &dk);
    let plain = &(&dka * &b_op) - &(&b_op * &dka);
    let bridge = tw.rel_diff(&(k * &plain));
    FirstOrderCheck {
        residual: if twisted { tw.frobenius_norm() } else { plain.frobenius_norm() },
        bridge_residual: bridge,
    }
}

/// `U = u J u J⁻¹`.
pub fn gauge_lift(u: &ComplexMatrix, j: &AntiUnitary) -> ComplexMatrix {
    u * &j.conjugate(u)
}

/// `U D U^+` with `U = uJuJ⁻¹` and `U^+ = K U† K`.
pub fn fluctuate_type1(d: &ComplexMatrix, u: &ComplexMatrix, j: &AntiUnitary, k: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !u.is_unitary(DEFAULT_TOL) {
        return Err(Error::InvalidGaugeElement("unitary"));
    }
    let big_u = gauge_lift(u, j);
    Ok(&(&big_u * d) * &k_adjoint(k, &big_u))
}

/// `U_K D U_K†` with `U_K = u_K J u_K J⁻¹`.
pub fn fluctuate_type2(d: &ComplexMatrix, uk: &ComplexMatrix, j: &AntiUnitary, k: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !is_k_unitary(k, uk) {
        return Err(Error::InvalidGaugeElement("K-unitary"));
    }
    let big_u = gauge_lift(uk, j);
    Ok(&(&big_u * d) * &big_u.adjoint())
}

/// Single-term twisted one-form `ρ(a)[D, b]_ρ`.
pub fn one_form(d: &ComplexMatrix, a: &ComplexMatrix, b: &ComplexMatrix, k: &ComplexMatrix) -> ComplexMatrix {
    &twist_apply(k, a) * &twisted_commutator(d, b, k).expect("conformable")
}

/// One-form generated by a type-1 gauge element: `a = ρ(u)`, `b = ρ(u)†`.
pub fn one_form_type1(d: &ComplexMatrix, u: &ComplexMatrix, k: &ComplexMatrix) -> ComplexMatrix {
    let ru = twist_apply(k, u);
    one_form(d, &ru, &ru.adjoint(), k)
}

/// One-form generated by a type-2 gauge element: `a = ρ(u_K)`, `b = u_K†`.
pub fn one_form_type2(d: &ComplexMatrix, uk: &ComplexMatrix, k: &ComplexMatrix) -> ComplexMatrix {
    one_form(d, &twist_apply(k, uk), &uk.adjoint(), k)
}

/// `D + A + ε₁ J A J⁻¹`.
pub fn fluctuated_by_form(d: &ComplexMatrix, form: &ComplexMatrix, j: &AntiUnitary, eps1: Sign) -> ComplexMatrix {
    &(d + form) + &j.conjugate(form).scale_re(eps1 as f64)
}

/// `A = [[0, 1], [−1, 0]]`, the derivative on `span{cos, sin}` of a plane wave.
fn mode_derivative() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, 2, &[ZERO, ONE, -ONE, ZERO])
}

/// `D^K = i Σ_μ k_μ γ^μ ⊗ A` on `C^{2^m} ⊗ C^2`.
pub fn mode_dirac_k(basis: &CliffordBasis, momentum: &[f64]) -> ComplexMatrix {
    let n = basis.spinor_dim();
    let slash = momentum
        .iter()
        .zip(&basis.gammas)
        .fold(ComplexMatrix::zeros(n, n), |acc, (&p, g)| &acc + &g.scale_re(p));
    slash.kron(&mode_derivative()).scale(IM)
}

/// Fixed generic momentum used when none is given.
pub fn default_momentum(d: usize) -> Vec<f64> {
    const K: [f64; 8] = [0.7, -0.4, 0.3, 0.55, -0.25, 0.45, 0.6, -0.35];
    K[..d].to_vec()
}

/// Periodic lattice model with central differences.
#[derive(Clone, Debug)]
pub struct LatticeModel {
    pub sites: usize,
    pub dims_used: usize,
    pub spacing: f64,
    pub spinor_dim: usize,
    /// Twisted side; `side.dirac_k()` is `Σ γ^μ ⊗ P_μ`.
    pub side: TripleSide,
}

impl LatticeModel {
    pub fn site_count(&self) -> usize {
        self.sites.pow(self.dims_used as u32)
    }

    pub fn dim(&self) -> usize {
        self.spinor_dim * self.site_count()
    }

    /// Multiplication by a site function, `I_{2^m} ⊗ diag(f)`.
    pub fn function_operator(&self, f: &[C64]) -> ComplexMatrix {
        assert_eq!(f.len(), self.site_count(), "site function length");
        ComplexMatrix::identity(self.spinor_dim).kron(&ComplexMatrix::from_diagonal(f))
    }

    /// Site coordinates `(x⁰, x¹)` of a flat site index.
    pub fn coords(&self, site: usize) -> Vec<usize> {
        (0..self.dims_used).map(|mu| (site / self.sites.pow(mu as u32)) % self.sites).collect()
    }
}

/// `P = −i (T₊ − T₋) / 2h` along direction `mu` of an `N^dims` lattice.
fn difference_operator(sites: usize, dims: usize, mu: usize, h: f64) -> ComplexMatrix {
    let total = sites.pow(dims as u32);
    let stride = sites.pow(mu as u32);
    let mut p = ComplexMatrix::zeros(total, total);
    let w = C64::new(0.0, -1.0 / (2.0 * h));
    for s in 0..total {
        let x = (s / stride) % sites;
        let fwd = s - x * stride + ((x + 1) % sites) * stride;
        let bwd = s - x * stride + ((x + sites - 1) % sites) * stride;
        p.set(s, fwd, p.get(s, fwd) + w);
        p.set(s, bwd, p.get(s, bwd) - w);
    }
    p
}

pub fn build_lattice_dirac(basis: &CliffordBasis, set: &StructuralSet, sites: usize, dims_used: usize, spacing: f64) -> Result<LatticeModel> {
    if sites < 4 || sites % 2 == 1 {
        return Err(Error::UnsupportedLattice(format!("N = {sites} must be even and at least 4")));
    }
    if dims_used == 0 || dims_used > 2 || dims_used > basis.len() {
        return Err(Error::UnsupportedLattice(format!("dims_used = {dims_used} must be 1 or 2")));
    }
    let n = basis.spinor_dim();
    let total = sites.pow(dims_used as u32);
    let mut dk = ComplexMatrix::zeros(n * total, n * total);
    for mu in 0..dims_used {
        dk += &basis.gammas[mu].kron(&difference_operator(sites, dims_used, mu, spacing));
    }
    let id = ComplexMatrix::identity(total);
    let k = set.k.kron(&id);
    let side = TripleSide {
        kind: SideKind::Twisted,
        d: &k * &dk,
        k,
        j: set.j.tensor(&AntiUnitary::conjugation(total)),
        gamma: set.gamma.kron(&id),
        eps: set.eps,
        eps_prime: set.eps_prime,
        inner: InnerProduct::Standard,
    };
    Ok(LatticeModel {
        sites,
        dims_used,
        spacing,
        spinor_dim: n,
        side,
    })
}
