//! Dense complex matrices, vectors and anti-unitary operators.
//!
//! All approximate equalities use the relative Frobenius test
//! `‖X − Y‖_F ≤ tol · max(1, ‖X‖_F)`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;

/// Default tolerance for algebraic identities.
pub const DEFAULT_TOL: f64 = 1e-10;
/// Tolerance for unitarity of basis elements and anti-unitary linear parts.
pub const UNITARY_TOL: f64 = 1e-12;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const IM: C64 = C64::new(0.0, 1.0);

/// `i^k` for any integer `k`, exact.
pub fn i_pow(k: i64) -> C64 {
    match k.rem_euclid(4) {
        0 => ONE,
        1 => IM,
        2 => -ONE,
        _ => -IM,
    }
}

/// Square complex (or rectangular, for vectors) dense matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ComplexMatrix{:?}", self.0)
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_rows(rows: usize, cols: usize, entries: &[C64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Self(DMatrix::from_row_slice(rows, cols, entries))
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { ZERO })
    }

    pub fn from_real(m: &DMatrix<f64>) -> Self {
        Self(m.map(|x| C64::new(x, 0.0)))
    }

    pub fn inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.0.shape()
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.0.is_square());
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.0[(i, j)] = v;
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scale(&self, s: C64) -> Self {
        Self(&self.0 * s)
    }

    pub fn scale_re(&self, s: f64) -> Self {
        Self(&self.0 * C64::new(s, 0.0))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    pub fn apply(&self, v: &CVector) -> CVector {
        &self.0 * v
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.0.is_square() {
            return Err(Error::Dimension {
                op: "inverse",
                left: self.shape(),
                right: self.shape(),
            });
        }
        self.0.clone().try_inverse().map(Self).ok_or(Error::Singular)
    }

    /// Estimate of the spectral norm by power iteration on `A†A`.
    pub fn op_2norm_estimate(&self) -> f64 {
        let n = self.cols();
        if n == 0 {
            return 0.0;
        }
        // deterministic start vector with no special alignment
        let mut v = CVector::from_fn(n, |i, _| {
            let t = i as f64;
            C64::new(1.0 + 0.37 * (1.3 * t).sin(), 0.21 * (0.7 * t).cos())
        });
        v /= C64::new(v.norm(), 0.0);
        let ah = self.0.adjoint();
        let mut est = 0.0;
        for _ in 0..20_000 {
            let w = &ah * (&self.0 * &v);
            let nrm = w.norm();
            if nrm == 0.0 {
                return 0.0;
            }
            let next = nrm.sqrt();
            v = w / C64::new(nrm, 0.0);
            if (next - est).abs() <= 1e-10 * next {
                return next;
            }
            est = next;
        }
        est
    }

    /// Relative Frobenius distance `‖self − other‖ / max(1, ‖self‖)`.
    pub fn rel_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "rel_diff shape");
        (&self.0 - &other.0).norm() / self.frobenius_norm().max(1.0)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.shape() == other.shape() && self.rel_diff(other) <= tol
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.frobenius_norm() <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.0.is_square() && (self * &self.adjoint()).approx_eq(&Self::identity(self.rows()), tol)
    }

    /// Returns `s` with `conj(self) = s · self` entrywise, if any.
    pub fn conj_sign(&self, tol: f64) -> Option<i8> {
        sign_between(&self.conj(), self, tol)
    }

    /// Row-major complex entries as `[re, im]` pairs, for serialization.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| [self.0[(i, j)].re, self.0[(i, j)].im]).collect())
            .collect()
    }
}

/// Returns `Some(s)` when `x ≈ s·y` for `s = ±1`.
pub fn sign_between(x: &ComplexMatrix, y: &ComplexMatrix, tol: f64) -> Option<i8> {
    if x.approx_eq(y, tol) {
        Some(1)
    } else if x.approx_eq(&-y, tol) {
        Some(-1)
    } else {
        None
    }
}

fn check_conformable(op: &'static str, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.cols() != b.rows() {
        return Err(Error::Dimension {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

fn check_same(op: &'static str, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension {
            op,
            left: a.shape(),
            right: b.shape(),
        });
    }
    Ok(())
}

pub fn mat_mul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_conformable("mat_mul", a, b)?;
    Ok(a * b)
}

pub fn mat_add(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same("mat_add", a, b)?;
    Ok(a + b)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// `[a, b] = ab − ba`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same("commutator", a, b)?;
    Ok(&(a * b) - &(b * a))
}

/// `{a, b} = ab + ba`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_same("anticommutator", a, b)?;
    Ok(&(a * b) + &(b * a))
}

/// Ordered product of a list of square matrices; identity of size `n` when empty.
pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(n), |acc, f| &acc * f)
}

/// Standard inner product `⟨ψ, φ⟩`, antilinear in the first slot.
pub fn inner(psi: &CVector, phi: &CVector) -> C64 {
    psi.dotc(phi)
}

impl<'a> Mul<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols(), rhs.rows(), "matrix product shape");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self * &rhs
    }
}

impl<'a> Add<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape");
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self + &rhs
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!(self.shape(), rhs.shape(), "matrix sum shape");
        self.0 += &rhs.0;
    }
}

impl<'a> Sub<&'a ComplexMatrix> for &'a ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &'a ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.shape(), rhs.shape(), "matrix difference shape");
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: ComplexMatrix) -> ComplexMatrix {
        &self - &rhs
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-&self.0)
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

impl From<DMatrix<C64>> for ComplexMatrix {
    fn from(m: DMatrix<C64>) -> Self {
        Self(m)
    }
}

/// Anti-unitary operator `J = L ∘ cc`: `J v = L · conj(v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AntiUnitary {
    linear: ComplexMatrix,
}

impl AntiUnitary {
    pub fn new(linear: ComplexMatrix) -> Result<Self> {
        if !linear.is_unitary(UNITARY_TOL) {
            let n = linear.rows();
            let res = (&linear * &linear.adjoint()).rel_diff(&ComplexMatrix::identity(n));
            return Err(Error::NotUnitary(res));
        }
        Ok(Self { linear })
    }

    /// Pure complex conjugation on `C^n`.
    pub fn conjugation(n: usize) -> Self {
        Self {
            linear: ComplexMatrix::identity(n),
        }
    }

    pub fn linear_part(&self) -> &ComplexMatrix {
        &self.linear
    }

    /// Always true; kept so reports can state the operator kind.
    pub fn conjugates(&self) -> bool {
        true
    }

    pub fn dim(&self) -> usize {
        self.linear.rows()
    }

    pub fn apply(&self, v: &CVector) -> Result<CVector> {
        if v.len() != self.dim() {
            return Err(Error::Dimension {
                op: "apply_antiunitary",
                left: self.linear.shape(),
                right: (v.len(), 1),
            });
        }
        Ok(self.linear.apply(&v.map(|z| z.conj())))
    }

    /// `J²` as a linear map: `L · conj(L)`.
    pub fn square(&self) -> ComplexMatrix {
        &self.linear * &self.linear.conj()
    }

    /// `J⁻¹ = Lᵀ ∘ cc`.
    pub fn inverse(&self) -> Self {
        Self {
            linear: self.linear.transpose(),
        }
    }

    /// `J X J⁻¹ = L · conj(X) · L†`, a linear map.
    pub fn conjugate(&self, x: &ComplexMatrix) -> ComplexMatrix {
        &(&self.linear * &x.conj()) * &self.linear.adjoint()
    }

    /// `X ∘ J`.
    pub fn after(&self, x: &ComplexMatrix) -> Self {
        Self {
            linear: x * &self.linear,
        }
    }

    /// `J ∘ X`.
    pub fn before(&self, x: &ComplexMatrix) -> Self {
        Self {
            linear: &self.linear * &x.conj(),
        }
    }

    /// `J ⊗ J'` acting on the tensor product.
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            linear: self.linear.kron(&other.linear),
        }
    }

    /// Sign `s` in `J X = s X J`, if `X` commutes or anticommutes with `J`.
    pub fn commutation_sign(&self, x: &ComplexMatrix, tol: f64) -> Option<i8> {
        sign_between(&(&self.linear * &x.conj()), &(x * &self.linear), tol)
    }

    /// Residual of `J X = s X J`.
    pub fn commutation_residual(&self, x: &ComplexMatrix, s: i8) -> f64 {
        let lhs = &self.linear * &x.conj();
        let rhs = (x * &self.linear).scale_re(s as f64);
        lhs.rel_diff(&rhs)
    }

    /// Sign of `J² = ±I`.
    pub fn square_sign(&self, tol: f64) -> Option<i8> {
        sign_between(&self.square(), &ComplexMatrix::identity(self.dim()), tol)
    }
}
