//! Gamma-matrix bases in even dimension `2m` and signature `(n, 2m − n)`.
//!
//! Indices are 0-based: directions `0..n` carry metric sign `+1`, the rest `−1`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{anticommutator, ComplexMatrix, C64, DEFAULT_TOL, IM, ONE, UNITARY_TOL, ZERO};

/// Largest supported half-dimension.
pub const MAX_M: usize = 4;

pub fn pauli(k: usize) -> ComplexMatrix {
    let (o, z) = (ONE, ZERO);
    match k {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_rows(2, 2, &[z, o, o, z]),
        2 => ComplexMatrix::from_rows(2, 2, &[z, -IM, IM, z]),
        3 => ComplexMatrix::from_rows(2, 2, &[o, z, z, -o]),
        _ => panic!("pauli index {k} out of range"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub m: usize,
    pub n: usize,
}

impl Signature {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || m > MAX_M {
            return Err(Error::UnsupportedDimension(m));
        }
        if n > 2 * m {
            return Err(Error::InvalidSignature { n, max: 2 * m });
        }
        Ok(Self { m, n })
    }

    pub fn dim(&self) -> usize {
        2 * self.m
    }

    pub fn spinor_dim(&self) -> usize {
        1 << self.m
    }

    /// `g_a` for 0-based direction `a`.
    pub fn metric_sign(&self, a: usize) -> f64 {
        if a < self.n {
            1.0
        } else {
            -1.0
        }
    }

    pub fn metric(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim(), self.dim(), |a, b| if a == b { self.metric_sign(a) } else { 0.0 })
    }

    pub fn is_riemannian(&self) -> bool {
        self.n == self.dim()
    }
}

#[derive(Clone, Debug)]
pub struct CliffordBasis {
    pub sig: Signature,
    pub gammas: Vec<ComplexMatrix>,
    pub euclid_gammas: Vec<ComplexMatrix>,
    /// Labelling convention only; storage is always 0-based.
    pub index_origin: u8,
}

impl CliffordBasis {
    /// Ladder basis Wick-rotated to signature `(n, 2m − n)`.
    pub fn standard(m: usize, n: usize) -> Result<Self> {
        let sig = Signature::new(m, n)?;
        wick_rotate(&build_euclidean_gammas(m)?, sig)
    }

    pub fn spinor_dim(&self) -> usize {
        self.sig.spinor_dim()
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn metric_sign(&self, a: usize) -> f64 {
        self.sig.metric_sign(a)
    }

    /// Clifford multiplication `c(v) = Σ v_a γ^a`.
    pub fn clifford_mul(&self, v: &[f64]) -> ComplexMatrix {
        let n = self.spinor_dim();
        v.iter()
            .zip(&self.gammas)
            .fold(ComplexMatrix::zeros(n, n), |acc, (&x, g)| &acc + &g.scale_re(x))
    }

    /// Largest residual of `(γ^a)† = g_a γ^a`.
    pub fn adjoint_split_residual(&self) -> f64 {
        self.gammas
            .iter()
            .enumerate()
            .map(|(a, g)| g.adjoint().rel_diff(&g.scale_re(self.metric_sign(a))))
            .fold(0.0, f64::max)
    }

    /// Largest unitarity residual over the basis.
    pub fn unitarity_residual(&self) -> f64 {
        let id = ComplexMatrix::identity(self.spinor_dim());
        self.gammas
            .iter()
            .map(|g| (g * &g.adjoint()).rel_diff(&id))
            .fold(0.0, f64::max)
    }
}

/// `2m` Hermitian, unitary, pairwise anticommuting matrices of size `2^m`.
///
/// Level `k` places `σ₁` or `σ₂` in slot `k` of a Kronecker chain with `σ₃`
/// before it and `I₂` after it.
pub fn build_euclidean_gammas(m: usize) -> Result<Vec<ComplexMatrix>> {
    if m == 0 || m > MAX_M {
        return Err(Error::UnsupportedDimension(m));
    }
    let mut out = Vec::with_capacity(2 * m);
    for k in 0..m {
        for s in [1, 2] {
            let mut g = ComplexMatrix::identity(1);
            for slot in 0..m {
                let f = if slot < k {
                    pauli(3)
                } else if slot == k {
                    pauli(s)
                } else {
                    pauli(0)
                };
                g = g.kron(&f);
            }
            out.push(g);
        }
    }
    Ok(out)
}

/// Largest `‖{e_a, e_b} − 2 g^{ab} I‖_F` for the given metric signs.
pub fn clifford_residual(gammas: &[ComplexMatrix], signs: &[f64]) -> f64 {
    let n = gammas.first().map_or(0, |g| g.rows());
    let id = ComplexMatrix::identity(n);
    let mut worst: f64 = 0.0;
    for (a, ga) in gammas.iter().enumerate() {
        for (b, gb) in gammas.iter().enumerate().skip(a) {
            let target = if a == b { id.scale_re(2.0 * signs[a]) } else { ComplexMatrix::zeros(n, n) };
            let ac = anticommutator(ga, gb).expect("square basis");
            worst = worst.max((&ac - &target).frobenius_norm());
        }
    }
    worst
}

/// `γ^a = ê_a` for `a < n`, `γ^a = −i ê_a` otherwise.
pub fn wick_rotate(euclid: &[ComplexMatrix], sig: Signature) -> Result<CliffordBasis> {
    if euclid.len() != sig.dim() {
        return Err(Error::InvalidInput(format!(
            "expected {} Euclidean generators, got {}",
            sig.dim(),
            euclid.len()
        )));
    }
    let res = clifford_residual(euclid, &vec![1.0; euclid.len()]);
    if res > DEFAULT_TOL {
        return Err(Error::InvalidBasis(res));
    }
    let gammas = euclid
        .iter()
        .enumerate()
        .map(|(a, e)| if a < sig.n { e.clone() } else { e.scale(-IM) })
        .collect();
    Ok(CliffordBasis {
        sig,
        gammas,
        euclid_gammas: euclid.to_vec(),
        index_origin: 1,
    })
}

/// The 4D chiral set `γ^a = [[0, σ^a], [σ̃^a, 0]]`, signature `(1, 3)`.
pub fn chiral_gammas_4d() -> CliffordBasis {
    let block = |upper: &ComplexMatrix, lower: &ComplexMatrix| {
        let mut g = ComplexMatrix::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                g.set(i, j + 2, upper.get(i, j));
                g.set(i + 2, j, lower.get(i, j));
            }
        }
        g
    };
    let gammas: Vec<ComplexMatrix> = (0..4)
        .map(|a| {
            let s = pauli(a);
            if a == 0 {
                block(&s, &s)
            } else {
                block(&-&s, &s)
            }
        })
        .collect();
    let euclid = gammas
        .iter()
        .enumerate()
        .map(|(a, g)| if a == 0 { g.clone() } else { g.scale(IM) })
        .collect();
    CliffordBasis {
        sig: Signature { m: 2, n: 1 },
        gammas,
        euclid_gammas: euclid,
        index_origin: 0,
    }
}

/// Largest `‖{γ^a, γ^b} − 2 g^{ab} I‖_F` over all pairs.
pub fn verify_clifford(basis: &CliffordBasis) -> f64 {
    let signs: Vec<f64> = (0..basis.len()).map(|a| basis.metric_sign(a)).collect();
    clifford_residual(&basis.gammas, &signs)
}

/// `γ^μ = e^μ_a γ^a` for a real vielbein matrix `e` (rows `μ`, columns `a`).
pub fn vielbein_apply(e: &DMatrix<f64>, basis: &CliffordBasis) -> Result<Vec<ComplexMatrix>> {
    let d = basis.len();
    if e.shape() != (d, d) {
        return Err(Error::InvalidInput(format!("vielbein must be {d}x{d}")));
    }
    let det = e.determinant();
    if !det.is_finite() || det.abs() < 1e-12 {
        return Err(Error::SingularVielbein);
    }
    Ok((0..d)
        .map(|mu| {
            let row: Vec<f64> = (0..d).map(|a| e[(mu, a)]).collect();
            basis.clifford_mul(&row)
        })
        .collect())
}

/// Dimension of the space of matrices commuting with every generator.
pub fn commutant_dimension(gammas: &[ComplexMatrix]) -> usize {
    let n = gammas[0].rows();
    let unknowns = n * n;
    let mut system = DMatrix::<C64>::zeros(gammas.len() * unknowns, unknowns);
    for col in 0..unknowns {
        let mut e = ComplexMatrix::zeros(n, n);
        e.set(col / n, col % n, ONE);
        for (k, g) in gammas.iter().enumerate() {
            let c = &(&e * g) - &(g * &e);
            for r in 0..unknowns {
                system[(k * unknowns + r, col)] = c.get(r / n, r % n);
            }
        }
    }
    nullity(&system, 1e-9)
}

/// Number of singular values below `tol` (relative to the largest).
pub(crate) fn nullity(system: &DMatrix<C64>, tol: f64) -> usize {
    let cols = system.ncols();
    let svd = system.clone().svd(false, false);
    let top = svd.singular_values.iter().cloned().fold(0.0, f64::max).max(1.0);
    let rank = svd.singular_values.iter().filter(|s| **s > tol * top).count();
    cols - rank
}

/// Entrywise reality check used by the charge-conjugation formula.
pub fn is_plus_minus_real(basis: &[ComplexMatrix]) -> bool {
    basis.iter().all(|g| g.conj_sign(UNITARY_TOL).is_some())
}
