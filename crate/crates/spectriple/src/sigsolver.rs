//! Exhaustive classification of fundamental symmetries `K` compatible with
//! the almost-commutative constraints, and the signatures they induce.
//!
//! The search runs on the Euclidean generators `γ̃^a` with the Euclidean
//! grading `Γ` and real structure `J`. Two independent engines are offered:
//! a filter over phased Clifford monomials and a dense nullspace solve over
//! all sign patterns `ρ(γ̃^a) = s(a) γ̃^a`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::clifford::CliffordBasis;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::geometry::induced_metric_gk;
use crate::matrix::{i_pow, product, sign_between, AntiUnitary, ComplexMatrix, C64, DEFAULT_TOL, ONE};
use crate::structural::{build_charge_conjugation, build_grading, Sign};

/// `phase · ∏_{i ∈ subset} γ̃^(i)` with `phase = i^phase_power`.
#[derive(Clone, Debug)]
pub struct KCandidate {
    pub subset: Vec<usize>,
    pub phase_power: u8,
    pub matrix: ComplexMatrix,
}

impl KCandidate {
    pub fn phase(&self) -> C64 {
        i_pow(self.phase_power as i64)
    }

    pub fn label(&self) -> String {
        let phase = ["", "i", "-", "-i"][self.phase_power as usize % 4];
        if self.subset.is_empty() {
            return if phase.is_empty() { "I".into() } else if phase == "-" { "-I".into() } else { format!("{phase}I") };
        }
        let body: Vec<String> = self.subset.iter().map(|i| format!("g{i}")).collect();
        format!("{phase}{}", body.join(""))
    }
}

impl Serialize for KCandidate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("KCandidate", 3)?;
        st.serialize_field("subset", &self.subset)?;
        st.serialize_field("phase", &["1", "i", "-1", "-i"][self.phase_power as usize % 4])?;
        st.serialize_field("label", &self.label())?;
        st.end()
    }
}

/// Euclidean search space for `2m` generators.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    pub basis: CliffordBasis,
    pub gamma: ComplexMatrix,
    pub j: AntiUnitary,
}

impl SearchSpace {
    /// Euclidean generators, `Γ` and `J` for `m` (`m = 2` unless `generic`).
    pub fn euclidean(m: usize, generic: bool) -> Result<Self> {
        if m != 2 && !generic {
            return Err(Error::UnsupportedDimension(m));
        }
        let basis = CliffordBasis::standard(m, 2 * m)?;
        let gamma = build_grading(&basis);
        let (_, j, _) = build_charge_conjugation(&basis)?;
        Ok(Self { basis, gamma, j })
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.basis.euclid_gammas
    }
}

/// All `2^{2m}` subsets times the four quarter phases.
pub fn enumerate_candidates(space: &SearchSpace) -> Vec<KCandidate> {
    let gens = space.generators();
    let d = space.basis.spinor_dim();
    let count = gens.len();
    let mut out = Vec::with_capacity((1 << count) * 4);
    for mask in 0usize..(1 << count) {
        let subset: Vec<usize> = (0..count).filter(|i| mask >> i & 1 == 1).collect();
        let base = product(d, subset.iter().map(|&i| &gens[i]));
        for p in 0..4u8 {
            out.push(KCandidate {
                subset: subset.clone(),
                phase_power: p,
                matrix: base.scale(i_pow(p as i64)),
            });
        }
    }
    out
}

/// Per-generator signs `s(a)` in `K γ̃^a K = s(a) γ̃^a`, if all exist.
pub fn twist_signs(k: &ComplexMatrix, gens: &[ComplexMatrix]) -> Option<Vec<Sign>> {
    gens.iter().map(|g| sign_between(&(&(k * g) * k), g, DEFAULT_TOL)).collect()
}

/// `K = K†`, `K² = I`, `KΓ = ε′ΓK`, `JK = εKJ` and `ρ(γ̃^a) = ±γ̃^a`.
pub fn admissible(k: &ComplexMatrix, space: &SearchSpace, eps: Sign, eps_prime: Sign) -> bool {
    let id = ComplexMatrix::identity(k.rows());
    k.is_hermitian(DEFAULT_TOL)
        && (k * k).approx_eq(&id, DEFAULT_TOL)
        && sign_between(&(k * &space.gamma), &(&space.gamma * k), DEFAULT_TOL) == Some(eps_prime)
        && space.j.commutation_sign(k, DEFAULT_TOL) == Some(eps)
        && twist_signs(k, space.generators()).is_some()
}

pub fn filter_candidates(cands: &[KCandidate], space: &SearchSpace, eps: Sign, eps_prime: Sign, exec: Exec) -> Vec<KCandidate> {
    let keep = exec.map(cands, |c| admissible(&c.matrix, space, eps, eps_prime));
    cands.iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| c.clone()).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Solution {
    pub candidate: KCandidate,
    pub signs: Vec<Sign>,
    pub time_directions: usize,
}

pub fn classify_signature(k: &KCandidate, space: &SearchSpace) -> Result<Solution> {
    let gens = space.generators();
    let signs = twist_signs(&k.matrix, gens)
        .ok_or_else(|| Error::InternalFilterBug(format!("rho does not preserve the generators for {}", k.label())))?;
    let gk = induced_metric_gk(gens, &k.matrix);
    let expected = DMatrix::from_fn(gens.len(), gens.len(), |a, b| if a == b { signs[a] as f64 } else { 0.0 });
    if (gk - expected).abs().max() > DEFAULT_TOL {
        return Err(Error::InternalFilterBug(format!("induced metric of {} is not diag(s)", k.label())));
    }
    let time_directions = signs.iter().filter(|s| **s == 1).count();
    Ok(Solution {
        candidate: k.clone(),
        signs,
        time_directions,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SignatureReport {
    pub eps: Sign,
    pub eps_prime: Sign,
    pub candidates: usize,
    pub solutions: Vec<Solution>,
}

impl SignatureReport {
    pub fn time_directions(&self) -> Vec<usize> {
        self.solutions.iter().map(|s| s.time_directions).collect()
    }
}

/// Monomial-mode classification for a given `(ε, ε′)`.
pub fn classify(space: &SearchSpace, eps: Sign, eps_prime: Sign, exec: Exec) -> Result<SignatureReport> {
    let cands = enumerate_candidates(space);
    let survivors = filter_candidates(&cands, space, eps, eps_prime, exec);
    let solutions = survivors.iter().map(|k| classify_signature(k, space)).collect::<Result<Vec<_>>>()?;
    Ok(SignatureReport {
        eps,
        eps_prime,
        candidates: cands.len(),
        solutions,
    })
}

/// `ε = −1`: every solution has one time direction; `ε = +1`: three.
pub fn uniqueness_of_time(report: &SignatureReport) -> bool {
    let expected = if report.eps == -1 { 1 } else { 3 };
    !report.solutions.is_empty() && report.solutions.iter().all(|s| s.time_directions == expected)
}

/// Dense-mode solution for one sign pattern.
#[derive(Clone, Debug)]
pub struct DenseSolution {
    pub signs: Vec<Sign>,
    pub matrix: ComplexMatrix,
}

/// Solves `KΓ = ε′ΓK`, `Kγ̃^a = s(a)γ̃^aK` for every pattern `s`, then imposes
/// `K = K†`, `K² = I` and `JK = εKJ` on the nullspace.
pub fn dense_nullspace_solutions(space: &SearchSpace, eps: Sign, eps_prime: Sign, exec: Exec) -> Result<Vec<DenseSolution>> {
    let gens = space.generators();
    let count = gens.len();
    let per_pattern = exec.map_range(1 << count, |mask| {
        let signs: Vec<Sign> = (0..count).map(|a| if mask >> a & 1 == 1 { 1 } else { -1 }).collect();
        dense_pattern(space, &signs, eps, eps_prime)
    });
    let mut out = Vec::new();
    for r in per_pattern {
        out.extend(r?);
    }
    Ok(out)
}

fn dense_pattern(space: &SearchSpace, signs: &[Sign], eps: Sign, eps_prime: Sign) -> Result<Vec<DenseSolution>> {
    let gens = space.generators();
    let d = space.basis.spinor_dim();
    let unknowns = d * d;
    let mut constraints: Vec<(&ComplexMatrix, f64)> = vec![(&space.gamma, eps_prime as f64)];
    constraints.extend(gens.iter().zip(signs).map(|(g, s)| (g, *s as f64)));
    let mut system = DMatrix::<C64>::zeros(constraints.len() * unknowns, unknowns);
    for col in 0..unknowns {
        let mut e = ComplexMatrix::zeros(d, d);
        e.set(col / d, col % d, ONE);
        for (block, (g, s)) in constraints.iter().enumerate() {
            let c = &(&e * *g) - &(*g * &e).scale_re(*s);
            for r in 0..unknowns {
                system[(block * unknowns + r, col)] = c.get(r / d, r % d);
            }
        }
    }
    let svd = system.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::Construction("SVD did not return right singular vectors".into()))?;
    let top = svd.singular_values.max().max(1.0);
    let null: Vec<usize> = (0..unknowns).filter(|&i| svd.singular_values[i] <= 1e-9 * top).collect();
    match null.len() {
        0 => Ok(Vec::new()),
        1 => {
            let row = v_t.row(null[0]);
            let b = ComplexMatrix::from_fn(d, d, |i, j| row[i * d + j].conj());
            let Some(h) = hermitian_involution(&b) else {
                return Ok(Vec::new());
            };
            Ok([h.clone(), -&h]
                .into_iter()
                .filter(|k| space.j.commutation_sign(k, DEFAULT_TOL) == Some(eps))
                .map(|matrix| DenseSolution {
                    signs: signs.to_vec(),
                    matrix,
                })
                .collect())
        }
        n => Err(Error::InternalFilterBug(format!("nullspace of dimension {n} for pattern {signs:?}"))),
    }
}

/// Rescales `B` to a Hermitian involution when `B` is a multiple of one.
fn hermitian_involution(b: &ComplexMatrix) -> Option<ComplexMatrix> {
    let norm2 = b.frobenius_norm().powi(2);
    let ratio = (b * b).trace() / norm2;
    if (ratio.norm() - 1.0).abs() > 1e-8 {
        return None;
    }
    let h = b.scale(ratio.sqrt().conj());
    let square = &h * &h;
    let c = square.trace().re / h.rows() as f64;
    if c <= 0.0 {
        return None;
    }
    let h = h.scale_re(1.0 / c.sqrt());
    let id = ComplexMatrix::identity(h.rows());
    (h.is_hermitian(1e-9) && (&h * &h).approx_eq(&id, 1e-9)).then_some(h)
}

/// Solution-for-solution agreement between the monomial and dense engines.
#[derive(Clone, Debug, Serialize)]
pub struct Agreement {
    pub monomial: usize,
    pub dense: usize,
    pub unmatched: usize,
}

impl Agreement {
    pub fn agrees(&self) -> bool {
        self.monomial == self.dense && self.unmatched == 0
    }
}

pub fn compare_engines(report: &SignatureReport, dense: &[DenseSolution]) -> Agreement {
    let matched = |m: &ComplexMatrix, s: &[Sign]| dense.iter().any(|x| x.signs == s && x.matrix.approx_eq(m, 1e-8));
    let unmatched = report
        .solutions
        .iter()
        .filter(|sol| !matched(&sol.candidate.matrix, &sol.signs))
        .count();
    Agreement {
        monomial: report.solutions.len(),
        dense: dense.len(),
        unmatched,
    }
}
