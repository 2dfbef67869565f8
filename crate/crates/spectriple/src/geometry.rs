//! Reflected geometry: trace metrics, twisted Clifford relations, Christoffel
//! symbols of `g` and of the reflected metric `gR = g r`, and the
//! spin-connection decomposition.
//!
//! Derivatives are central differences. Two routes are provided: the
//! covariant route differences `g` directly; the contravariant route
//! differences `g⁻¹` and uses `∂g = −g (∂g⁻¹) g`. They agree to `O(h²)`.

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::clifford::CliffordBasis;
use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, DEFAULT_TOL};
use crate::structural::twist_apply;

type MetricFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;

#[derive(Clone)]
pub struct MetricField {
    pub name: String,
    pub dim: usize,
    eval: Arc<MetricFn>,
    /// Diagonal of the constant reflection `r`.
    pub reflection: Vec<f64>,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("reflection", &self.reflection)
            .finish()
    }
}

impl MetricField {
    pub fn new(name: impl Into<String>, dim: usize, reflection: Vec<f64>, eval: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static) -> Result<Self> {
        if reflection.len() != dim || reflection.iter().any(|r| r.abs() != 1.0) {
            return Err(Error::InvalidInput("reflection must be a diagonal of ±1 entries".into()));
        }
        Ok(Self {
            name: name.into(),
            dim,
            eval: Arc::new(eval),
            reflection,
        })
    }

    /// Flat metric of signature `(n, dim − n)`, reflected to the identity.
    pub fn flat(dim: usize, n: usize) -> Self {
        let signs: Vec<f64> = (0..dim).map(|a| if a < n { 1.0 } else { -1.0 }).collect();
        let diag = DVector::from_vec(signs.clone());
        Self::new(format!("flat({n},{})", dim - n), dim, signs, move |_| DMatrix::from_diagonal(&diag)).expect("valid reflection")
    }

    /// `diag(1, −(1 + c₀x⁰)², −(1 + c₁x¹)², −1)` with `r = diag(1, −1, −1, −1)`.
    pub fn warped_diag(c0: f64, c1: f64) -> Self {
        Self::new("warped-diag", 4, vec![1.0, -1.0, -1.0, -1.0], move |x| {
            let f0 = 1.0 + c0 * x[0];
            let f1 = 1.0 + c1 * x[1];
            DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -f0 * f0, -f1 * f1, -1.0]))
        })
        .expect("valid reflection")
    }

    /// `e^{2c x⁰} η` with `η = diag(1, −1, −1, −1)`.
    pub fn conformal_flat(c: f64) -> Self {
        Self::new("conformal-flat", 4, vec![1.0, -1.0, -1.0, -1.0], move |x| {
            let w = (2.0 * c * x[0]).exp();
            DMatrix::from_diagonal(&DVector::from_vec(vec![w, -w, -w, -w]))
        })
        .expect("valid reflection")
    }

    /// Named family with real parameters, as accepted on the command line.
    pub fn from_family(family: &str, params: &[f64]) -> Result<Self> {
        let p = |i: usize, default: f64| params.get(i).copied().unwrap_or(default);
        match family {
            "flat" => Ok(Self::flat(4, 1)),
            "flat-euclidean" => Ok(Self::flat(4, 4)),
            "warped-diag" => Ok(Self::warped_diag(p(0, 0.1), p(1, 0.05))),
            "conformal-flat" => Ok(Self::conformal_flat(p(0, 0.1))),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }

    pub fn eval(&self, x: &[f64]) -> DMatrix<f64> {
        (self.eval)(x)
    }

    pub fn r(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&DVector::from_vec(self.reflection.clone()))
    }

    /// `gR = g r`.
    pub fn reflected(&self, x: &[f64]) -> DMatrix<f64> {
        self.eval(x) * self.r()
    }

    pub fn is_diagonal(&self, x: &[f64]) -> bool {
        let g = self.eval(x);
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || g[(i, j)] == 0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DerivativeRoute {
    Covariant,
    Contravariant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChristoffelVariant {
    Plain,
    Reflected,
    Riemannian,
}

/// Symbols `Γ^λ_{μν}` stored as `[λ][μ][ν]`.
#[derive(Clone, Debug, Serialize)]
pub struct ChristoffelData {
    pub point: Vec<f64>,
    pub dim: usize,
    pub symbols: Vec<f64>,
    pub variant: ChristoffelVariant,
}

impl ChristoffelData {
    fn zeros(point: &[f64], dim: usize, variant: ChristoffelVariant) -> Self {
        Self {
            point: point.to_vec(),
            dim,
            symbols: vec![0.0; dim * dim * dim],
            variant,
        }
    }

    pub fn get(&self, l: usize, m: usize, n: usize) -> f64 {
        self.symbols[(l * self.dim + m) * self.dim + n]
    }

    fn set(&mut self, l: usize, m: usize, n: usize, v: f64) {
        let d = self.dim;
        self.symbols[(l * d + m) * d + n] = v;
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.symbols.iter().zip(&other.symbols).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.symbols.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|Γ^λ_{μν} − Γ^λ_{νμ}|`.
    pub fn torsion(&self) -> f64 {
        let d = self.dim;
        let mut t: f64 = 0.0;
        for l in 0..d {
            for m in 0..d {
                for n in 0..d {
                    t = t.max((self.get(l, m, n) - self.get(l, n, m)).abs());
                }
            }
        }
        t
    }
}

fn invert(g: DMatrix<f64>) -> Result<DMatrix<f64>> {
    let det = g.determinant();
    if !det.is_finite() || det.abs() < 1e-14 {
        return Err(Error::SingularMetric);
    }
    g.try_inverse().ok_or(Error::SingularMetric)
}

fn check_point(g: &MetricField, x: &[f64], h: f64) -> Result<()> {
    if x.len() != g.dim {
        return Err(Error::InvalidInput(format!("point has {} coordinates, metric dimension is {}", x.len(), g.dim)));
    }
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("step h = {h} must be positive")));
    }
    Ok(())
}

/// `∂_σ g` for every `σ`, by central differences of step `h`.
pub fn metric_derivatives(g: &MetricField, x: &[f64], h: f64, route: DerivativeRoute) -> Result<Vec<DMatrix<f64>>> {
    check_point(g, x, h)?;
    let at = |sigma: usize, t: f64| {
        let mut y = x.to_vec();
        y[sigma] += t;
        g.eval(&y)
    };
    let g0 = g.eval(x);
    (0..g.dim)
        .map(|sigma| match route {
            DerivativeRoute::Covariant => Ok((at(sigma, h) - at(sigma, -h)) / (2.0 * h)),
            DerivativeRoute::Contravariant => {
                let dinv = (invert(at(sigma, h))? - invert(at(sigma, -h))?) / (2.0 * h);
                Ok(-(&g0 * dinv * &g0))
            }
        })
        .collect()
}

/// `Γ^λ_{μν} = ½ g^{λκ}(∂_μ g_{νκ} + ∂_ν g_{μκ} − ∂_κ g_{μν})` from given data.
fn christoffel_from(point: &[f64], ginv: &DMatrix<f64>, dg: &[DMatrix<f64>], variant: ChristoffelVariant) -> ChristoffelData {
    let d = ginv.nrows();
    let mut out = ChristoffelData::zeros(point, d, variant);
    for l in 0..d {
        for m in 0..d {
            for n in 0..d {
                let s: f64 = (0..d)
                    .map(|k| ginv[(l, k)] * (dg[m][(n, k)] + dg[n][(m, k)] - dg[k][(m, n)]))
                    .sum();
                out.set(l, m, n, 0.5 * s);
            }
        }
    }
    out
}

pub fn christoffel(g: &MetricField, x: &[f64], h: f64) -> Result<ChristoffelData> {
    christoffel_with(g, x, h, DerivativeRoute::Covariant)
}

pub fn christoffel_with(g: &MetricField, x: &[f64], h: f64, route: DerivativeRoute) -> Result<ChristoffelData> {
    let dg = metric_derivatives(g, x, h, route)?;
    let ginv = invert(g.eval(x))?;
    Ok(christoffel_from(x, &ginv, &dg, ChristoffelVariant::Plain))
}

/// Christoffel symbols of `gR = g r`.
pub fn riemannian_christoffel(g: &MetricField, x: &[f64], h: f64, route: DerivativeRoute) -> Result<ChristoffelData> {
    let r = g.r();
    let dgr: Vec<DMatrix<f64>> = metric_derivatives(g, x, h, route)?.into_iter().map(|d| d * &r).collect();
    let grinv = invert(g.reflected(x))?;
    Ok(christoffel_from(x, &grinv, &dgr, ChristoffelVariant::Riemannian))
}

/// Largest `|∂_ν g_{μκ} − g_{λκ}Γ^λ_{μν} − g_{μλ}Γ^λ_{κν}|`.
pub fn metric_compatibility_residual(g: &MetricField, x: &[f64], h: f64) -> Result<f64> {
    let dg = metric_derivatives(g, x, h, DerivativeRoute::Covariant)?;
    let gamma = christoffel(g, x, h)?;
    let g0 = g.eval(x);
    let d = g.dim;
    let mut worst: f64 = 0.0;
    for m in 0..d {
        for k in 0..d {
            for n in 0..d {
                let s: f64 = (0..d)
                    .map(|l| g0[(l, k)] * gamma.get(l, m, n) + g0[(m, l)] * gamma.get(l, k, n))
                    .sum();
                worst = worst.max((dg[n][(m, k)] - s).abs());
            }
        }
    }
    Ok(worst)
}

/// `Γ^{rλ}_{μ rν} = ½ g^{rλκ}(∂_μ g_{rν κ} + ∂_{rν} g_{μκ} − ∂_κ g_{μ rν})` with
/// `g^{rλκ} = r^λ_σ g^{σκ}`, `g_{rν κ} = r^σ_ν g_{σκ}`, `∂_{rν} = r^σ_ν ∂_σ`.
pub fn reflected_christoffel(g: &MetricField, x: &[f64], h: f64) -> Result<ChristoffelData> {
    reflected_christoffel_with(g, x, h, DerivativeRoute::Covariant)
}

pub fn reflected_christoffel_with(g: &MetricField, x: &[f64], h: f64, route: DerivativeRoute) -> Result<ChristoffelData> {
    let d = g.dim;
    let r = g.r();
    let dg = metric_derivatives(g, x, h, route)?;
    let ginv_r = &r * invert(g.eval(x))?;
    let mut out = ChristoffelData::zeros(x, d, ChristoffelVariant::Reflected);
    for l in 0..d {
        for m in 0..d {
            for n in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    let mut term = 0.0;
                    for sg in 0..d {
                        term += r[(sg, n)] * (dg[m][(sg, k)] + dg[sg][(m, k)] - dg[k][(m, sg)]);
                    }
                    s += ginv_r[(l, k)] * term;
                }
                out.set(l, m, n, 0.5 * s);
            }
        }
    }
    Ok(out)
}

/// `½ gR^{λκ}(∂_{rν} g_{μκ} − ∂_ν gR_{μκ})`.
pub fn reflection_correction(g: &MetricField, x: &[f64], h: f64, route: DerivativeRoute) -> Result<ChristoffelData> {
    let d = g.dim;
    let r = g.r();
    let dg = metric_derivatives(g, x, h, route)?;
    let grinv = invert(g.reflected(x))?;
    let mut out = ChristoffelData::zeros(x, d, ChristoffelVariant::Reflected);
    for l in 0..d {
        for m in 0..d {
            for n in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    let reflected: f64 = (0..d).map(|sg| r[(sg, n)] * dg[sg][(m, k)]).sum();
                    let dgr_nmk: f64 = (0..d).map(|sg| dg[n][(m, sg)] * r[(sg, k)]).sum();
                    s += grinv[(l, k)] * (reflected - dgr_nmk);
                }
                out.set(l, m, n, 0.5 * s);
            }
        }
    }
    Ok(out)
}

/// Largest component of `Γ^{rλ}_{μ rν} − Γ^λ_{R μν} − ½gR^{λκ}(∂_{rν}g_{μκ} − ∂_ν gR_{μκ})`.
///
/// The reflected symbols use the covariant route; the right-hand side uses
/// the contravariant route.
pub fn verify_christoffel_relation(g: &MetricField, x: &[f64], h: f64) -> Result<f64> {
    let lhs = reflected_christoffel_with(g, x, h, DerivativeRoute::Covariant)?;
    let gr = riemannian_christoffel(g, x, h, DerivativeRoute::Contravariant)?;
    let corr = reflection_correction(g, x, h, DerivativeRoute::Contravariant)?;
    let d = g.dim;
    let mut worst: f64 = 0.0;
    for l in 0..d {
        for m in 0..d {
            for n in 0..d {
                worst = worst.max((lhs.get(l, m, n) - gr.get(l, m, n) - corr.get(l, m, n)).abs());
            }
        }
    }
    Ok(worst)
}

/// Mixed-index connection data `[b][μ][a]`, stored like [`ChristoffelData`].
#[derive(Clone, Debug, Serialize)]
pub struct SpinDecomposition {
    pub gamma_tilde: ChristoffelData,
    pub gamma_r: ChristoffelData,
    pub k_term: ChristoffelData,
    pub residual: f64,
}

struct DiagonalFrame {
    /// `e^a_a = √|g_aa|`.
    e: Vec<f64>,
    /// `g_a = sign(g_aa)`.
    signs: Vec<f64>,
}

fn diagonal_frame(g0: &DMatrix<f64>) -> DiagonalFrame {
    let d = g0.nrows();
    DiagonalFrame {
        e: (0..d).map(|a| g0[(a, a)].abs().sqrt()).collect(),
        signs: (0..d).map(|a| g0[(a, a)].signum()).collect(),
    }
}

/// `Γ^b_{μa} = e_a^ν Γ^λ_{μν} e^b_λ − e_a^ν ∂_μ e^b_ν` for a diagonal frame;
/// `signs` are the diagonal signs of the metric that `dg` differentiates.
fn mixed_symbols(gamma: &ChristoffelData, frame: &DiagonalFrame, signs: &[f64], dg: &[DMatrix<f64>], variant: ChristoffelVariant) -> ChristoffelData {
    let d = gamma.dim;
    let mut out = ChristoffelData::zeros(&gamma.point, d, variant);
    for b in 0..d {
        for m in 0..d {
            for a in 0..d {
                let mut v = gamma.get(b, m, a) * frame.e[b] / frame.e[a];
                if a == b {
                    // ∂_μ √|g_aa| = sign(g_aa) ∂_μ g_aa / (2 √|g_aa|)
                    let de = signs[a] * dg[m][(a, a)] / (2.0 * frame.e[a]);
                    v -= de / frame.e[a];
                }
                out.set(b, m, a, v);
            }
        }
    }
    out
}

/// `Γ̃ = g^a g^b Γ` from `g` against `Γ_R` from `gR` plus the K-term.
///
/// `Γ̃` uses the covariant route; `Γ_R` and the K-term use the contravariant
/// route. The K-term is `g^b ½ g^{bκ}(∂_{ra} g_{μκ} − ∂_a gR_{μκ})`; the
/// `∂_μ g_a` piece vanishes for constant signs.
pub fn spin_connection_decomposition(g: &MetricField, x: &[f64], h: f64) -> Result<SpinDecomposition> {
    check_point(g, x, h)?;
    for sample in [x.to_vec(), x.iter().map(|v| v + h).collect(), x.iter().map(|v| v - h).collect()] {
        if !g.is_diagonal(&sample) {
            return Err(Error::UnsupportedMetric("spin-connection decomposition needs a diagonal metric".into()));
        }
    }
    let d = g.dim;
    let g0 = g.eval(x);
    let frame = diagonal_frame(&g0);
    if frame.signs.iter().zip(&g.reflection).any(|(s, r)| s != r) {
        return Err(Error::UnsupportedMetric("reflection must flip exactly the negative-norm directions".into()));
    }

    let dg_cov = metric_derivatives(g, x, h, DerivativeRoute::Covariant)?;
    let plain = christoffel_with(g, x, h, DerivativeRoute::Covariant)?;
    let mixed = mixed_symbols(&plain, &frame, &frame.signs, &dg_cov, ChristoffelVariant::Plain);
    let mut gamma_tilde = ChristoffelData::zeros(x, d, ChristoffelVariant::Plain);
    for b in 0..d {
        for m in 0..d {
            for a in 0..d {
                gamma_tilde.set(b, m, a, frame.signs[a] * frame.signs[b] * mixed.get(b, m, a));
            }
        }
    }

    let dg_con = metric_derivatives(g, x, h, DerivativeRoute::Contravariant)?;
    let r = g.r();
    let dgr_con: Vec<DMatrix<f64>> = dg_con.iter().map(|m| m * &r).collect();
    let riem = riemannian_christoffel(g, x, h, DerivativeRoute::Contravariant)?;
    let gamma_r = mixed_symbols(&riem, &frame, &vec![1.0; d], &dgr_con, ChristoffelVariant::Riemannian);

    let ginv = invert(g0)?;
    let mut k_term = ChristoffelData::zeros(x, d, ChristoffelVariant::Reflected);
    for b in 0..d {
        for m in 0..d {
            for a in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    // frame-index raising and derivatives: g^{bκ} = e^b_λ g^{λκ}, ∂_a = e_a^ν ∂_ν
                    let g_up = frame.e[b] * ginv[(b, k)];
                    let d_ra: f64 = (0..d).map(|sg| r[(sg, a)] * dg_con[sg][(m, k)]).sum::<f64>() / frame.e[a];
                    let d_a = dgr_con[a][(m, k)] / frame.e[a];
                    s += g_up * (d_ra - d_a);
                }
                k_term.set(b, m, a, frame.signs[b] * 0.5 * s);
            }
        }
    }

    let mut residual: f64 = 0.0;
    for i in 0..gamma_tilde.symbols.len() {
        residual = residual.max((gamma_tilde.symbols[i] - gamma_r.symbols[i] - k_term.symbols[i]).abs());
    }
    Ok(SpinDecomposition {
        gamma_tilde,
        gamma_r,
        k_term,
        residual,
    })
}

/// `g^{μν} = 2^{−m} Re Tr(γ^μ γ^ν)`.
pub fn metric_from_trace(gammas: &[ComplexMatrix]) -> DMatrix<f64> {
    let d = gammas.len();
    let n = gammas[0].rows() as f64;
    DMatrix::from_fn(d, d, |a, b| (&gammas[a] * &gammas[b]).trace().re / n)
}

/// `gK^{μν} = 2^{−m} Tr(γ_K^μ γ_K^ν)` with `γ_K = K γ̃`.
pub fn induced_metric_gk(gammas_tilde: &[ComplexMatrix], k: &ComplexMatrix) -> DMatrix<f64> {
    let gk: Vec<ComplexMatrix> = gammas_tilde.iter().map(|g| k * g).collect();
    metric_from_trace(&gk)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TwistedCliffordResiduals {
    /// `c(u)ρ(c(v)) + ρ(c(v))c(u) = 2gR(u,v)`.
    pub res1: f64,
    /// `γ̃^aγ̃^b + ρ(γ̃^bγ̃^a) = 2gR^{ab}`.
    pub res2: f64,
    /// `γ̃^aγ̃^b + s_{ab}γ̃^bγ̃^a = 2gR^{ab}`, `s_{ab} = g_a g_b`.
    pub res_s: f64,
}

/// Twisted Clifford relations for `γ̃^a = K γ^a`; `gR = diag(g_a g_a) = I`
/// in the orthonormal frame.
pub fn twisted_clifford_check(basis: &CliffordBasis, k: &ComplexMatrix) -> TwistedCliffordResiduals {
    let n = basis.spinor_dim();
    let id = ComplexMatrix::identity(n);
    let tilde: Vec<ComplexMatrix> = basis.gammas.iter().map(|g| k * g).collect();
    let (mut r1, mut r2, mut rs): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for a in 0..basis.len() {
        for b in 0..basis.len() {
            let target = if a == b { id.scale_re(2.0) } else { ComplexMatrix::zeros(n, n) };
            let cu = &basis.gammas[a];
            let rcv = twist_apply(k, &basis.gammas[b]);
            r1 = r1.max((&(&(cu * &rcv) + &(&rcv * cu)) - &target).frobenius_norm());
            let ab = &tilde[a] * &tilde[b];
            let ba = &tilde[b] * &tilde[a];
            r2 = r2.max((&(&ab + &twist_apply(k, &ba)) - &target).frobenius_norm());
            let s = basis.metric_sign(a) * basis.metric_sign(b);
            rs = rs.max((&(&ab + &ba.scale_re(s)) - &target).frobenius_norm());
        }
    }
    TwistedCliffordResiduals { res1: r1, res2: r2, res_s: rs }
}

/// Ratio of the relation residual at `h` to the residual at `h/2`.
pub fn halving_ratio(g: &MetricField, x: &[f64], h: f64) -> Result<(f64, f64, f64)> {
    let coarse = verify_christoffel_relation(g, x, h)?;
    let fine = verify_christoffel_relation(g, x, h / 2.0)?;
    Ok((coarse, fine, coarse / fine))
}

/// Default tolerance class for finite-difference relations at `h = 1e−3`.
pub const FD_TOL: f64 = 1e-5;

pub fn within_algebraic_tol(v: f64) -> bool {
    v <= DEFAULT_TOL
}
