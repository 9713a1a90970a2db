//! Born-rule statistics for small quantum systems, enough to generate
//! empirical models that defeat the global-joint solver.
//!
//! Everything here is desk-scale by design: matrices are dense complex
//! binary64 with dimension at most [`MAX_DIM`], and eigenvalue bounds for
//! the positivity checks come from a cyclic Jacobi iteration rather than a
//! linear-algebra dependency. The flagship constructor is [`chsh_model`]:
//! singlet statistics for two measurement angles per party, which at the
//! Tsirelson angles (0, π/2; π/4, −π/4) violate the classical CHSH bound
//! |S| ≤ 2 and are therefore certified infeasible by the marginal solver.
//!
//! Convention: spin measurements lie in the x–z plane, A(θ) = cos θ σz +
//! sin θ σx, outcome "0" for the +1 eigenvalue. On the singlet this gives
//! correlations E(a, b) = −cos(a − b), so the canonical combination
//! E00 + E01 + E10 − E11 equals −2√2 at the Tsirelson angles; callers
//! interested in the violation magnitude should take |S|.

use num::complex::Complex64;

use crate::infotheory::{Dist, JointTable, Prob, Variable};
use crate::scenario::{EmpiricalModel, Scenario};
use crate::{Error, Result};

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 8;

/// Measurement angles (a0, a1, b0, b1) maximizing the CHSH violation on
/// the singlet: |S| = 2√2.
pub const TSIRELSON_ANGLES: [f64; 4] = [
    0.0,
    std::f64::consts::FRAC_PI_2,
    std::f64::consts::FRAC_PI_4,
    -std::f64::consts::FRAC_PI_4,
];

/// Entrywise tolerance for Hermiticity of POVM effects.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Eigenvalue floor for positive semidefiniteness checks.
pub const PSD_TOL: f64 = 1e-9;

/// Entrywise tolerance for POVM completeness and trace/normalization drift.
pub const COMPLETENESS_TOL: f64 = 1e-9;

/// Dense complex square matrix, row-major, dimension ≤ [`MAX_DIM`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Structural(format!(
                "matrix dimension must be between 1 and {MAX_DIM}, got {dim}"
            )));
        }
        Ok(ComplexMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        Ok(m)
    }

    /// Builds from rows of `(re, im)` pairs; all rows must have the same
    /// length as the row count.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Structural(format!(
                    "row {i} has {} entries in a {dim}-dimensional matrix",
                    row.len()
                )));
            }
            for (j, &(re, im)) in row.iter().enumerate() {
                m.set(i, j, Complex64::new(re, im));
            }
        }
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != other.dim {
            return Err(Error::Structural("dimension mismatch in matrix sum".into()));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        Ok(out)
    }

    pub fn scale(&self, factor: f64) -> ComplexMatrix {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a *= factor;
        }
        out
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != other.dim {
            return Err(Error::Structural(
                "dimension mismatch in matrix product".into(),
            ));
        }
        let d = self.dim;
        let mut out = ComplexMatrix::zeros(d)?;
        for i in 0..d {
            for k in 0..d {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    /// Kronecker (tensor) product; the combined dimension must still be
    /// within [`MAX_DIM`].
    pub fn kron(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        let d = self.dim * other.dim;
        let mut out = ComplexMatrix::zeros(d)?;
        for i1 in 0..self.dim {
            for j1 in 0..self.dim {
                let a = self.get(i1, j1);
                for i2 in 0..other.dim {
                    for j2 in 0..other.dim {
                        out.set(
                            i1 * other.dim + i2,
                            j1 * other.dim + j2,
                            a * other.get(i2, j2),
                        );
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise |self − other†... | deviation from Hermiticity.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    /// Largest entrywise distance to `other`.
    pub fn max_entry_distance(&self, other: &ComplexMatrix) -> f64 {
        debug_assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Eigenvalues of a (nearly) Hermitian matrix, ascending, via cyclic
    /// Jacobi rotations with a fixed sweep order. The matrix is first
    /// symmetrized as (A + A†)/2 to shed floating-point drift.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        if !self.is_hermitian(1e-6) {
            return Err(Error::InvalidModel(format!(
                "matrix is not Hermitian (defect {:.3e})",
                self.hermiticity_defect()
            )));
        }
        let d = self.dim;
        let mut a = self.add(&self.dagger())?.scale(0.5);

        let off = |m: &ComplexMatrix| -> f64 {
            let mut s = 0.0;
            for i in 0..d {
                for j in 0..d {
                    if i != j {
                        s += m.get(i, j).norm_sqr();
                    }
                }
            }
            s.sqrt()
        };
        let scale: f64 = a
            .entries
            .iter()
            .map(|v| v.norm_sqr())
            .sum::<f64>()
            .sqrt()
            .max(1.0);

        for _sweep in 0..60 {
            if off(&a) <= 1e-14 * scale {
                break;
            }
            for p in 0..d.saturating_sub(1) {
                for q in (p + 1)..d {
                    let apq = a.get(p, q);
                    if apq.norm() <= 1e-300 {
                        continue;
                    }
                    // Phase rotation makes the (p,q) entry real, then a
                    // classical symmetric Jacobi rotation annihilates it.
                    let phase = apq / apq.norm();
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let w = apq.norm();
                    let tau = (aqq - app) / (2.0 * w);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;

                    // U = I, except the (p,q) plane:
                    //   U[p][p] = c        U[p][q] = s
                    //   U[q][p] = -s·e^{-iφ}   U[q][q] = c·e^{-iφ}
                    let mut u = ComplexMatrix::identity(d)?;
                    u.set(p, p, Complex64::new(c, 0.0));
                    u.set(p, q, Complex64::new(s, 0.0));
                    u.set(q, p, -Complex64::new(s, 0.0) * phase.conj());
                    u.set(q, q, Complex64::new(c, 0.0) * phase.conj());
                    a = u.dagger().matmul(&a)?.matmul(&u)?;
                }
            }
        }
        if off(&a) > 1e-9 * scale {
            return Err(Error::InvalidModel(
                "Jacobi iteration failed to converge".into(),
            ));
        }
        let mut eigs: Vec<f64> = (0..d).map(|i| a.get(i, i).re).collect();
        eigs.sort_by(f64::total_cmp);
        Ok(eigs)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.hermitian_eigenvalues()?[0])
    }
}

/// A positive operator-valued measure: Hermitian PSD effects summing to
/// the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    effects: Vec<ComplexMatrix>,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>) -> Result<Self> {
        let first = effects.first().ok_or(Error::Empty("effect list"))?;
        let dim = first.dim();
        let mut sum = ComplexMatrix::zeros(dim)?;
        for (idx, effect) in effects.iter().enumerate() {
            if effect.dim() != dim {
                return Err(Error::Structural(format!(
                    "effect {idx} has dimension {} in a dimension-{dim} POVM",
                    effect.dim()
                )));
            }
            let defect = effect.hermiticity_defect();
            if defect > HERMITICITY_TOL {
                return Err(Error::InvalidModel(format!(
                    "effect {idx} is not Hermitian (defect {defect:.3e})"
                )));
            }
            let min_eig = effect.min_eigenvalue()?;
            if min_eig < -PSD_TOL {
                return Err(Error::InvalidModel(format!(
                    "effect {idx} is not positive semidefinite (min eigenvalue {min_eig:.3e})"
                )));
            }
            sum = sum.add(effect)?;
        }
        let completeness = sum.max_entry_distance(&ComplexMatrix::identity(dim)?);
        if completeness > COMPLETENESS_TOL {
            return Err(Error::InvalidModel(format!(
                "effects do not sum to the identity (entrywise defect {completeness:.3e})"
            )));
        }
        Ok(Povm { effects })
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn dim(&self) -> usize {
        self.effects[0].dim()
    }
}

/// Born rule p(o) = Tr(ρ·E_o) for every effect, as a float-mode
/// distribution over effect indices `"0"`, `"1"`, ….
///
/// ρ must be Hermitian, unit-trace, and PSD within [`COMPLETENESS_TOL`] /
/// [`PSD_TOL`]. Negative probabilities within −[`PSD_TOL`] are clamped to
/// zero and drift in the total within [`COMPLETENESS_TOL`] is renormalized
/// away; anything larger is an error naming the defect.
pub fn born_probabilities(rho: &ComplexMatrix, povm: &Povm) -> Result<Dist> {
    if rho.dim() != povm.dim() {
        return Err(Error::Structural(format!(
            "state has dimension {} but effects have dimension {}",
            rho.dim(),
            povm.dim()
        )));
    }
    let herm = rho.hermiticity_defect();
    if herm > COMPLETENESS_TOL {
        return Err(Error::InvalidModel(format!(
            "state is not Hermitian (defect {herm:.3e})"
        )));
    }
    let trace = rho.trace();
    if (trace.re - 1.0).abs() > COMPLETENESS_TOL || trace.im.abs() > COMPLETENESS_TOL {
        return Err(Error::InvalidModel(format!(
            "state trace is {trace} rather than 1"
        )));
    }
    let min_eig = rho.min_eigenvalue()?;
    if min_eig < -PSD_TOL {
        return Err(Error::InvalidModel(format!(
            "state is not positive semidefinite (min eigenvalue {min_eig:.3e})"
        )));
    }

    let mut probs = Vec::with_capacity(povm.effects().len());
    for (idx, effect) in povm.effects().iter().enumerate() {
        let p = rho.matmul(effect)?.trace().re;
        if p < -PSD_TOL {
            return Err(Error::InvalidModel(format!(
                "Born probability for effect {idx} is {p:.3e}"
            )));
        }
        probs.push(p.max(0.0));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > COMPLETENESS_TOL {
        return Err(Error::InvalidModel(format!(
            "Born probabilities sum to {total} rather than 1"
        )));
    }
    let labels = (0..probs.len()).map(|i| i.to_string()).collect();
    let mass = probs
        .into_iter()
        .map(|p| Prob::from_f64((p / total).min(1.0)))
        .collect::<Result<Vec<_>>>()?;
    Dist::new(labels, mass)
}

/// Projectors onto the ±1 eigenspaces of A(θ) = cos θ σz + sin θ σx,
/// index 0 for +1.
pub fn spin_projectors(theta: f64) -> [ComplexMatrix; 2] {
    let (sin, cos) = theta.sin_cos();
    let plus = ComplexMatrix::from_rows(&[
        vec![((1.0 + cos) / 2.0, 0.0), (sin / 2.0, 0.0)],
        vec![(sin / 2.0, 0.0), ((1.0 - cos) / 2.0, 0.0)],
    ])
    .expect("static 2x2");
    let minus = ComplexMatrix::from_rows(&[
        vec![((1.0 - cos) / 2.0, 0.0), (-sin / 2.0, 0.0)],
        vec![(-sin / 2.0, 0.0), ((1.0 + cos) / 2.0, 0.0)],
    ])
    .expect("static 2x2");
    [plus, minus]
}

/// The two-qubit singlet state |ψ−⟩⟨ψ−|, basis order 00, 01, 10, 11.
pub fn singlet() -> ComplexMatrix {
    let mut rho = ComplexMatrix::zeros(4).expect("static 4x4");
    rho.set(1, 1, Complex64::new(0.5, 0.0));
    rho.set(2, 2, Complex64::new(0.5, 0.0));
    rho.set(1, 2, Complex64::new(-0.5, 0.0));
    rho.set(2, 1, Complex64::new(-0.5, 0.0));
    rho
}

/// Singlet statistics for the four CHSH contexts.
///
/// `angles = [a0, a1, b0, b1]` are the measurement directions of Alice's
/// observables `A0`, `A1` and Bob's `B0`, `B1`. The scenario has the four
/// contexts {Ai, Bj} in the order (0,0), (0,1), (1,0), (1,1) with binary
/// outcomes; tables are float-mode Born probabilities.
pub fn chsh_model(angles: [f64; 4]) -> Result<EmpiricalModel> {
    let observables = vec![
        Variable::binary("A0"),
        Variable::binary("A1"),
        Variable::binary("B0"),
        Variable::binary("B1"),
    ];
    let contexts: Vec<Vec<String>> = [(0, 2), (0, 3), (1, 2), (1, 3)]
        .iter()
        .map(|&(a, b): &(usize, usize)| {
            vec![observables[a].name.clone(), observables[b].name.clone()]
        })
        .collect();
    let scenario = Scenario::new(observables, contexts)?;

    let rho = singlet();
    let alice = [spin_projectors(angles[0]), spin_projectors(angles[1])];
    let bob = [spin_projectors(angles[2]), spin_projectors(angles[3])];

    let mut tables = Vec::with_capacity(4);
    for &(ai, bj) in &[(0usize, 0usize), (0, 1), (1, 0), (1, 1)] {
        let effects = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)]
            .iter()
            .map(|&(oa, ob)| alice[ai][oa].kron(&bob[bj][ob]))
            .collect::<Result<Vec<_>>>()?;
        let dist = born_probabilities(&rho, &Povm::new(effects)?)?;
        let ctx_idx = tables.len();
        let cells = (0..4).map(|k| dist.mass(k).clone()).collect();
        tables.push(JointTable::new(scenario.context_variables(ctx_idx), cells)?);
    }
    EmpiricalModel::new(scenario, tables)
}

/// The canonical CHSH combination E00 + E01 + E10 − E11 of a four-context
/// binary model in chsh_model's context order, where each correlator is
/// E = Σ (−1)^{o_a ≠ o_b} p(o_a, o_b). On the singlet this is −2√2 at the
/// Tsirelson angles; |S| > 2 witnesses nonclassicality either way.
pub fn chsh_value(model: &EmpiricalModel) -> Result<f64> {
    if model.scenario().contexts().len() != 4 {
        return Err(Error::Structural(format!(
            "CHSH needs exactly 4 contexts, got {}",
            model.scenario().contexts().len()
        )));
    }
    let mut correlators = Vec::with_capacity(4);
    for table in model.tables() {
        if table.variables().len() != 2
            || table.variables().iter().any(|v| v.alphabet.len() != 2)
        {
            return Err(Error::Structural(
                "CHSH contexts must pair two binary observables".into(),
            ));
        }
        let mut e = 0.0;
        for (idx, p) in table.iter() {
            let sign = if idx[0] == idx[1] { 1.0 } else { -1.0 };
            e += sign * p.as_f64();
        }
        correlators.push(e);
    }
    Ok(correlators[0] + correlators[1] + correlators[2] - correlators[3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimension_cap_is_enforced() {
        assert!(ComplexMatrix::zeros(9).is_err());
        assert!(ComplexMatrix::zeros(0).is_err());
        let four = ComplexMatrix::identity(4).unwrap();
        // 4 ⊗ 4 = 16 exceeds the cap.
        assert!(four.kron(&four).is_err());
    }

    #[test]
    fn jacobi_matches_pauli_x_spectrum() {
        let sigma_x =
            ComplexMatrix::from_rows(&[vec![(0.0, 0.0), (1.0, 0.0)], vec![(1.0, 0.0), (0.0, 0.0)]])
                .unwrap();
        let eigs = sigma_x.hermitian_eigenvalues().unwrap();
        assert!((eigs[0] + 1.0).abs() < 1e-12);
        assert!((eigs[1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_matches_closed_form_complex_2x2() {
        // [[2, 1+i], [1-i, 0]] has eigenvalues 1 ± sqrt(3).
        let m = ComplexMatrix::from_rows(&[
            vec![(2.0, 0.0), (1.0, 1.0)],
            vec![(1.0, -1.0), (0.0, 0.0)],
        ])
        .unwrap();
        let eigs = m.hermitian_eigenvalues().unwrap();
        assert!((eigs[0] - (1.0 - 3.0f64.sqrt())).abs() < 1e-12);
        assert!((eigs[1] - (1.0 + 3.0f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn jacobi_preserves_trace_and_frobenius_norm() {
        // Fixed 4x4 Hermitian with mixed complex entries.
        let m = ComplexMatrix::from_rows(&[
            vec![(1.0, 0.0), (0.5, 0.25), (-0.75, 1.0), (0.0, -0.5)],
            vec![(0.5, -0.25), (-2.0, 0.0), (0.125, 0.0), (1.0, 0.125)],
            vec![(-0.75, -1.0), (0.125, 0.0), (0.5, 0.0), (-0.25, 0.75)],
            vec![(0.0, 0.5), (1.0, -0.125), (-0.25, -0.75), (3.0, 0.0)],
        ])
        .unwrap();
        assert!(m.is_hermitian(0.0));
        let eigs = m.hermitian_eigenvalues().unwrap();
        let trace: f64 = eigs.iter().sum();
        assert!((trace - m.trace().re).abs() < 1e-12);
        let frob_sq: f64 = m.entries.iter().map(|v| v.norm_sqr()).sum();
        let eig_sq: f64 = eigs.iter().map(|v| v * v).sum();
        assert!((frob_sq - eig_sq).abs() < 1e-10);
    }

    #[test]
    fn povm_rejects_negative_effect() {
        let bad = ComplexMatrix::from_rows(&[
            vec![(1.2, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (0.0, 0.0)],
        ])
        .unwrap();
        let complement = ComplexMatrix::from_rows(&[
            vec![(-0.2, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (1.0, 0.0)],
        ])
        .unwrap();
        let err = Povm::new(vec![bad, complement]).unwrap_err();
        assert!(matches!(err, Error::InvalidModel(_)));
    }

    #[test]
    fn povm_rejects_incomplete_effects() {
        let half = ComplexMatrix::identity(2).unwrap().scale(0.25);
        let err = Povm::new(vec![half.clone(), half]).unwrap_err();
        assert!(matches!(err, Error::InvalidModel(_)));
    }

    #[test]
    fn born_rule_on_eigenstate_and_superposition() {
        let z = spin_projectors(0.0);
        let povm = Povm::new(vec![z[0].clone(), z[1].clone()]).unwrap();

        // ρ = |0⟩⟨0|.
        let mut ket0 = ComplexMatrix::zeros(2).unwrap();
        ket0.set(0, 0, Complex64::new(1.0, 0.0));
        let d = born_probabilities(&ket0, &povm).unwrap();
        assert_eq!(d.mass(0).as_f64(), 1.0);
        assert_eq!(d.mass(1).as_f64(), 0.0);

        // ρ = |+⟩⟨+|.
        let plus = ComplexMatrix::from_rows(&[
            vec![(0.5, 0.0), (0.5, 0.0)],
            vec![(0.5, 0.0), (0.5, 0.0)],
        ])
        .unwrap();
        let d = born_probabilities(&plus, &povm).unwrap();
        assert!((d.mass(0).as_f64() - 0.5).abs() < 1e-15);
        assert!((d.mass(1).as_f64() - 0.5).abs() < 1e-15);
    }

    fn correlator(a: f64, b: f64) -> f64 {
        let pa = spin_projectors(a);
        let pb = spin_projectors(b);
        let rho = singlet();
        let mut e = 0.0;
        for (oa, ea) in pa.iter().enumerate() {
            for (ob, eb) in pb.iter().enumerate() {
                let effect = ea.kron(eb).unwrap();
                let p = rho.matmul(&effect).unwrap().trace().re;
                let sign = if oa == ob { 1.0 } else { -1.0 };
                e += sign * p;
            }
        }
        e
    }

    #[test]
    fn singlet_correlation_is_minus_cosine() {
        // Frozen: cos(pi/4) = 0.7071067811865476 = 1/sqrt(2).
        let e = correlator(0.0, std::f64::consts::FRAC_PI_4);
        assert!((e + std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12, "e = {e}");
        for &(a, b) in &[(0.3, 1.1), (2.0, -0.4), (0.0, 0.0)] {
            let e = correlator(a, b);
            assert!((e + (a - b).cos()).abs() < 1e-12);
        }
    }

    #[test]
    fn chsh_model_validates_and_hits_tsirelson() {
        let model = chsh_model(TSIRELSON_ANGLES).unwrap();
        let report = model.validate(1e-9).unwrap();
        assert!(report.is_consistent());
        let s = chsh_value(&model).unwrap();
        // Frozen 2*sqrt(2); the singlet convention lands on the negative side.
        assert!((s.abs() - 2.828_427_124_746_190_3).abs() < 1e-12, "s = {s}");
        assert!(s < 0.0);
    }

    #[test]
    fn chsh_value_matches_closed_form_on_generic_angles() {
        let angles = [0.17, 1.31, -0.55, 2.03];
        let model = chsh_model(angles).unwrap();
        let s = chsh_value(&model).unwrap();
        let [a0, a1, b0, b1] = angles;
        let closed =
            -((a0 - b0).cos() + (a0 - b1).cos() + (a1 - b0).cos() - (a1 - b1).cos());
        assert!((s - closed).abs() < 1e-12);
    }
}
