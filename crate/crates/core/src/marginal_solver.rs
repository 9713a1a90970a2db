//! Existence of a global joint distribution for an empirical model.
//!
//! A consistent empirical model is noncontextual precisely when some
//! distribution over *deterministic global assignments* (one outcome per
//! observable) marginalizes to every context table. That is a linear
//! feasibility problem: columns are global assignments, rows are the
//! total-mass constraint followed by one constraint per context cell, and
//! the variables are the assignment weights.
//!
//! The solve is exact. Float-mode tables are first *snapped* to rationals
//! (best approximation with denominator at most
//! [`SolverOptions::max_denominator`], via continued fractions) and the
//! largest per-cell snap distance is reported; exact-mode tables enter
//! verbatim. Feasible instances yield a witness distribution that
//! reproduces the snapped tables exactly; infeasible instances yield a
//! Farkas certificate `y` with `y^T A <= 0` on every assignment column and
//! `y^T b > 0`, checkable by [`check_certificate`] without re-running the
//! solver.
//!
//! Note the solver decides the linear system as given: a table that fails
//! validation (unnormalized or signalling) is simply an infeasible or
//! vacuous system, so callers interested in *contextuality* should validate
//! first.

use num::rational::BigRational;
use num::{BigInt, FromPrimitive, One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

use crate::infotheory::{Mode, Prob};
use crate::scenario::EmpiricalModel;
use crate::simplex;
use crate::{Error, Result, DEFAULT_ASSIGNMENT_CAP, DEFAULT_MAX_DENOMINATOR, DEFAULT_TOLERANCE};

/// One outcome per observable, in scenario observable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlobalAssignment {
    outcomes: Vec<String>,
}

impl GlobalAssignment {
    pub fn new(outcomes: Vec<String>) -> Self {
        GlobalAssignment { outcomes }
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    /// Canonical key: outcomes joined by commas.
    pub fn key(&self) -> String {
        self.outcomes.join(",")
    }
}

impl std::fmt::Display for GlobalAssignment {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.key())
    }
}

/// Verdict of the feasibility solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Feasibility {
    /// A global joint distribution exists (model is noncontextual).
    Feasible,
    /// No global joint distribution exists (model is contextual).
    Infeasible,
}

/// Farkas certificate of infeasibility: multipliers for the total-mass row
/// and for each context-cell row such that `y^T A <= 0` columnwise while
/// `y^T b > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    /// Multiplier of the total-mass (= 1) constraint.
    pub total: BigRational,
    /// Multiplier per cell constraint as `(context_key, tuple_key, y)`,
    /// in solver row order.
    pub cells: Vec<(String, String, BigRational)>,
}

/// Full solver output.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult {
    pub feasibility: Feasibility,
    /// Exact witness weights over global assignments (zeros omitted),
    /// present iff feasible. Reproduces the snapped tables exactly.
    pub witness: Option<Vec<(GlobalAssignment, Prob)>>,
    /// Farkas certificate, present iff infeasible.
    pub certificate: Option<Certificate>,
    /// Largest `|original - snapped|` over all cells; zero for exact input.
    pub snap_distance: f64,
    /// Number of global assignments (LP columns).
    pub assignments: u128,
    /// Simplex pivots performed.
    pub pivots: usize,
}

/// Knobs for the feasibility solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Refuse instances with more global assignments than this.
    pub assignment_cap: u64,
    /// Denominator bound when snapping float cells to rationals.
    pub max_denominator: u64,
    /// Tolerance for float-mode comparisons in witness verification.
    pub tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            assignment_cap: DEFAULT_ASSIGNMENT_CAP,
            max_denominator: DEFAULT_MAX_DENOMINATOR,
            tol: DEFAULT_TOLERANCE,
        }
    }
}

/// Result of re-checking a witness against an empirical model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessCheck {
    /// Largest deviation between a reproduced and a stated cell (or the
    /// normalization defect, whichever is worse).
    pub max_deviation: f64,
    pub ok: bool,
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by the continued-fraction convergent/semiconvergent construction.
pub fn snap_to_rational(x: f64, max_den: u64) -> Result<BigRational> {
    if !x.is_finite() {
        return Err(Error::InvalidProbability(x.to_string()));
    }
    if max_den == 0 {
        return Err(Error::Structural("max denominator must be positive".into()));
    }
    let exact = BigRational::from_f64(x).expect("finite float");
    let bound = BigInt::from(max_den);
    if exact.denom() <= &bound {
        return Ok(exact);
    }

    // Walk the continued-fraction expansion, tracking the last two
    // convergents p0/q0 and p1/q1 until the denominator bound is hit.
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut n = exact.numer().clone();
    let mut d = exact.denom().clone();
    loop {
        // Quantities stay nonnegative, so truncating division is floor.
        let a = &n / &d;
        let q2 = &q0 + &a * &q1;
        if q2 > bound {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            return Ok(BigRational::new(p1, q1));
        }
    }

    // Semiconvergent with the largest admissible final coefficient, versus
    // the last full convergent; keep whichever is closer to x.
    let k = (&bound - &q0) / &q1;
    let semi = BigRational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = BigRational::new(p1, q1);
    if (&semi - &exact).abs() < (&conv - &exact).abs() {
        Ok(semi)
    } else {
        Ok(conv)
    }
}

fn exact_cell(p: &Prob, max_den: u64) -> Result<(BigRational, f64)> {
    match p {
        Prob::Exact(r) => Ok((r.clone(), 0.0)),
        Prob::Float(v) => {
            let r = snap_to_rational(*v, max_den)?;
            let dist = (r.to_f64().unwrap_or(f64::NAN) - v).abs();
            Ok((r, dist))
        }
    }
}

struct LinearSystem {
    /// Row-major coefficients: row 0 is total mass, then context cells.
    a: Vec<Vec<BigRational>>,
    b: Vec<BigRational>,
    /// `(context_key, tuple_key)` per cell row, aligned with rows `1..`.
    row_labels: Vec<(String, String)>,
    assignments: Vec<GlobalAssignment>,
    snap_distance: f64,
}

fn enforce_cap(model: &EmpiricalModel, cap: u64) -> Result<u128> {
    let count = model.scenario().global_assignment_count();
    if count > cap as u128 {
        return Err(Error::CapacityExceeded { count, cap });
    }
    Ok(count)
}

/// Assembles the feasibility system. Columns enumerate global assignments
/// lexicographically with the last observable varying fastest; rows follow
/// context order with each table in its own row-major cell order.
fn build_system(model: &EmpiricalModel, opts: &SolverOptions) -> Result<LinearSystem> {
    let count = enforce_cap(model, opts.assignment_cap)? as usize;
    let scenario = model.scenario();
    let observables = scenario.observables();
    let shape: Vec<usize> = observables.iter().map(|v| v.alphabet.len()).collect();

    // Observable indices per context, and the row offset of each context.
    let ctx_obs: Vec<Vec<usize>> = scenario
        .contexts()
        .iter()
        .map(|ctx| {
            ctx.iter()
                .map(|name| {
                    observables
                        .iter()
                        .position(|v| &v.name == name)
                        .expect("validated context member")
                })
                .collect()
        })
        .collect();

    let mut b = vec![BigRational::one()];
    let mut row_labels = Vec::new();
    let mut snap_distance = 0.0f64;
    for (ci, table) in model.tables().iter().enumerate() {
        let key = scenario.context_key(ci);
        for (idx, p) in table.iter() {
            let (r, dist) = exact_cell(p, opts.max_denominator)?;
            snap_distance = snap_distance.max(dist);
            let tuple: Vec<&str> = table
                .variables()
                .iter()
                .zip(&idx)
                .map(|(v, &oi)| v.alphabet[oi].as_str())
                .collect();
            row_labels.push((key.clone(), tuple.join(",")));
            b.push(r);
        }
    }
    let rows = b.len();

    let mut a = vec![vec![BigRational::zero(); count]; rows];
    let mut assignments = Vec::with_capacity(count);
    let mut idx = vec![0usize; shape.len()];
    // Column construction touches several rows of `a` per column while
    // advancing the mixed-radix counter, so the index loop is the clear form.
    #[allow(clippy::needless_range_loop)]
    for col in 0..count {
        a[0][col] = BigRational::one();
        let mut row = 1usize;
        for (ci, obs_idx) in ctx_obs.iter().enumerate() {
            let table = model.table(ci);
            let mut lin = 0usize;
            for (k, &oi) in obs_idx.iter().enumerate() {
                lin = lin * table.variables()[k].alphabet.len() + idx[oi];
            }
            a[row + lin][col] = BigRational::one();
            row += table.num_cells();
        }
        assignments.push(GlobalAssignment::new(
            observables
                .iter()
                .zip(&idx)
                .map(|(v, &oi)| v.alphabet[oi].clone())
                .collect(),
        ));
        for i in (0..idx.len()).rev() {
            idx[i] += 1;
            if idx[i] < shape[i] {
                break;
            }
            idx[i] = 0;
        }
    }

    Ok(LinearSystem {
        a,
        b,
        row_labels,
        assignments,
        snap_distance,
    })
}

/// Decides whether a global joint distribution reproducing every context
/// table exists. Deterministic: identical inputs give identical results,
/// including the witness support order and certificate.
pub fn global_joint_exists(model: &EmpiricalModel, opts: &SolverOptions) -> Result<FeasibilityResult> {
    let system = build_system(model, opts)?;
    let outcome = simplex::phase1(&system.a, &system.b)?;
    let assignments = system.assignments.len() as u128;

    if let Some(x) = outcome.solution {
        let witness = system
            .assignments
            .into_iter()
            .zip(x)
            .filter(|(_, w)| !w.is_zero())
            .map(|(ga, w)| (ga, Prob::Exact(w)))
            .collect();
        Ok(FeasibilityResult {
            feasibility: Feasibility::Feasible,
            witness: Some(witness),
            certificate: None,
            snap_distance: system.snap_distance,
            assignments,
            pivots: outcome.pivots,
        })
    } else {
        let y = outcome.farkas.expect("infeasible outcome carries duals");
        let cells = system
            .row_labels
            .into_iter()
            .zip(y.iter().skip(1).cloned())
            .map(|((ctx, tuple), coeff)| (ctx, tuple, coeff))
            .collect();
        Ok(FeasibilityResult {
            feasibility: Feasibility::Infeasible,
            witness: None,
            certificate: Some(Certificate {
                total: y[0].clone(),
                cells,
            }),
            snap_distance: system.snap_distance,
            assignments,
            pivots: outcome.pivots,
        })
    }
}

/// Checks that `witness` is a distribution over valid global assignments
/// whose marginals reproduce every context table of `model`.
///
/// Exact-mode tables must be matched exactly; float-mode tables within
/// `tol`. The returned deviation is the worst cell (or normalization)
/// defect in float terms.
pub fn verify_witness(
    model: &EmpiricalModel,
    witness: &[(GlobalAssignment, Prob)],
    tol: f64,
) -> Result<WitnessCheck> {
    let scenario = model.scenario();
    let observables = scenario.observables();

    // Map each assignment to outcome indices, validating symbols.
    let mut index_vectors = Vec::with_capacity(witness.len());
    for (ga, w) in witness {
        if ga.outcomes().len() != observables.len() {
            return Err(Error::Structural(format!(
                "assignment '{}' has {} outcomes but the scenario has {} observables",
                ga.key(),
                ga.outcomes().len(),
                observables.len()
            )));
        }
        if w.as_f64() < 0.0 {
            return Err(Error::InvalidProbability(format!("{}", w.as_f64())));
        }
        let mut iv = Vec::with_capacity(observables.len());
        for (obs, sym) in observables.iter().zip(ga.outcomes()) {
            let oi = obs
                .alphabet
                .iter()
                .position(|a| a == sym)
                .ok_or_else(|| Error::UnknownSymbol {
                    what: obs.name.clone(),
                    symbol: sym.clone(),
                })?;
            iv.push(oi);
        }
        index_vectors.push(iv);
    }

    let exact_witness = witness.iter().all(|(_, w)| w.mode() == Mode::Exact);
    let mut max_deviation = 0.0f64;
    let mut ok = true;

    // Normalization of the witness itself.
    let mut total = Prob::zero(if exact_witness { Mode::Exact } else { Mode::Float });
    for (_, w) in witness {
        total = total.add(w);
    }
    let norm_dev = total.abs_diff(&Prob::one(total.mode()));
    max_deviation = max_deviation.max(norm_dev);
    ok &= total.matches(&Prob::one(total.mode()), tol);

    // Marginal reproduction, context by context, cell by cell.
    for (ci, table) in model.tables().iter().enumerate() {
        let obs_idx: Vec<usize> = scenario.contexts()[ci]
            .iter()
            .map(|name| {
                observables
                    .iter()
                    .position(|v| &v.name == name)
                    .expect("validated context member")
            })
            .collect();
        for (cell_idx, stated) in table.iter() {
            let mut mass = Prob::zero(total.mode());
            for ((_, w), iv) in witness.iter().zip(&index_vectors) {
                if obs_idx.iter().zip(&cell_idx).all(|(&oi, &want)| iv[oi] == want) {
                    mass = mass.add(w);
                }
            }
            max_deviation = max_deviation.max(mass.abs_diff(stated));
            ok &= mass.matches(stated, tol);
        }
    }

    Ok(WitnessCheck { max_deviation, ok })
}

/// Checks a Farkas certificate against the snapped system of `model`:
/// every assignment column must satisfy `y^T A <= 0` and the right-hand
/// side must give `y^T b > 0`. All arithmetic is exact.
pub fn check_certificate(
    model: &EmpiricalModel,
    certificate: &Certificate,
    opts: &SolverOptions,
) -> Result<bool> {
    let system = build_system(model, opts)?;
    if certificate.cells.len() != system.row_labels.len() {
        return Err(Error::Structural(format!(
            "certificate has {} cell multipliers but the model has {} cells",
            certificate.cells.len(),
            system.row_labels.len()
        )));
    }
    let by_row: BTreeMap<(&str, &str), &BigRational> = certificate
        .cells
        .iter()
        .map(|(c, t, y)| ((c.as_str(), t.as_str()), y))
        .collect();
    let mut y = vec![certificate.total.clone()];
    for (ctx, tuple) in &system.row_labels {
        let coeff = by_row
            .get(&(ctx.as_str(), tuple.as_str()))
            .ok_or_else(|| {
                Error::Structural(format!(
                    "certificate is missing a multiplier for cell '{ctx}' / '{tuple}'"
                ))
            })?;
        y.push((*coeff).clone());
    }

    for col in 0..system.assignments.len() {
        let mut dot = BigRational::zero();
        for (yi, row) in y.iter().zip(&system.a) {
            if !row[col].is_zero() {
                dot += yi * &row[col];
            }
        }
        if dot.is_positive() {
            return Ok(false);
        }
    }
    let mut rhs = BigRational::zero();
    for (yi, bi) in y.iter().zip(&system.b) {
        rhs += yi * bi;
    }
    Ok(rhs.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infotheory::{JointTable, Variable};
    use crate::scenario::Scenario;

    fn names(list: &[&str]) -> Vec<String> {
        list.iter().map(|s| s.to_string()).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn snap_recovers_simple_fractions() {
        assert_eq!(snap_to_rational(0.5, 1_000_000).unwrap(), q(1, 2));
        assert_eq!(snap_to_rational(1.0 / 3.0, 1_000_000).unwrap(), q(1, 3));
        assert_eq!(snap_to_rational(0.1, 1_000_000).unwrap(), q(1, 10));
        assert_eq!(snap_to_rational(0.0, 1_000_000).unwrap(), q(0, 1));
        assert_eq!(snap_to_rational(1.0, 1_000_000).unwrap(), q(1, 1));
    }

    #[test]
    fn snap_respects_denominator_bound() {
        // pi/4 = [0; 1, 3, 1, 1, 1, 15, ...]: best approximations are
        // 4/5 (den <= 5) and 11/14 (den <= 14).
        let x = std::f64::consts::FRAC_PI_4;
        assert_eq!(snap_to_rational(x, 5).unwrap(), q(4, 5));
        assert_eq!(snap_to_rational(x, 14).unwrap(), q(11, 14));
        let snapped = snap_to_rational(x, 1_000_000).unwrap();
        assert!(snapped.denom() <= &BigInt::from(1_000_000u64));
        assert!((snapped.to_f64().unwrap() - x).abs() < 1e-11);
    }

    #[test]
    fn triangle_is_infeasible_with_valid_certificate() {
        let model = EmpiricalModel::triangle_example();
        let opts = SolverOptions::default();
        let result = global_joint_exists(&model, &opts).unwrap();
        assert_eq!(result.feasibility, Feasibility::Infeasible);
        assert_eq!(result.assignments, 8);
        assert_eq!(result.snap_distance, 0.0);
        assert!(result.witness.is_none());
        let cert = result.certificate.expect("certificate");
        assert_eq!(cert.cells.len(), 12);
        assert!(check_certificate(&model, &cert, &opts).unwrap());
    }

    fn product_model() -> EmpiricalModel {
        // Contexts {A,B} and {B,C}; all observables i.i.d. fair bits.
        let scenario = Scenario::new(
            vec![
                Variable::binary("A"),
                Variable::binary("B"),
                Variable::binary("C"),
            ],
            vec![names(&["A", "B"]), names(&["B", "C"])],
        )
        .unwrap();
        let tables = (0..2)
            .map(|i| {
                JointTable::from_fn(scenario.context_variables(i), |_| Prob::exact(1, 4).unwrap())
                    .unwrap()
            })
            .collect();
        EmpiricalModel::new(scenario, tables).unwrap()
    }

    #[test]
    fn product_model_is_feasible_and_witness_verifies() {
        let model = product_model();
        let result = global_joint_exists(&model, &SolverOptions::default()).unwrap();
        assert_eq!(result.feasibility, Feasibility::Feasible);
        let witness = result.witness.expect("witness");
        let check = verify_witness(&model, &witness, 0.0).unwrap();
        assert!(check.ok, "max deviation {}", check.max_deviation);
        assert_eq!(check.max_deviation, 0.0);
    }

    #[test]
    fn witness_tampering_is_detected() {
        let model = product_model();
        let result = global_joint_exists(&model, &SolverOptions::default()).unwrap();
        let mut witness = result.witness.unwrap();
        // Move all mass of the first support point onto the second.
        let w0 = witness[0].1.clone();
        witness[1].1 = witness[1].1.add(&w0);
        witness[0].1 = Prob::zero(Mode::Exact);
        let check = verify_witness(&model, &witness, 1e-9).unwrap();
        assert!(!check.ok);
        assert!(check.max_deviation > 0.1);
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let model = EmpiricalModel::triangle_example();
        let opts = SolverOptions::default();
        let result = global_joint_exists(&model, &opts).unwrap();
        let mut cert = result.certificate.unwrap();
        // Flip the sign of every multiplier: y^T b goes negative.
        cert.total = -cert.total;
        for cell in &mut cert.cells {
            cell.2 = -cell.2.clone();
        }
        assert!(!check_certificate(&model, &cert, &opts).unwrap());
    }

    #[test]
    fn float_tables_are_snapped_before_solving() {
        // Same product model but with float 0.25 cells: snapping is exact,
        // so the result matches the exact run.
        let scenario = product_model().scenario().clone();
        let tables = (0..2)
            .map(|i| {
                JointTable::from_fn(scenario.context_variables(i), |_| {
                    Prob::from_f64(0.25).unwrap()
                })
                .unwrap()
            })
            .collect();
        let model = EmpiricalModel::new(scenario, tables).unwrap();
        let result = global_joint_exists(&model, &SolverOptions::default()).unwrap();
        assert_eq!(result.feasibility, Feasibility::Feasible);
        assert_eq!(result.snap_distance, 0.0);
        let check = verify_witness(&model, &result.witness.unwrap(), 1e-9).unwrap();
        assert!(check.ok);
    }

    #[test]
    fn assignment_cap_is_enforced() {
        let observables: Vec<Variable> =
            (0..21).map(|i| Variable::binary(format!("X{i}"))).collect();
        let contexts = vec![names(&["X0", "X1"])];
        let scenario = Scenario::new(observables, contexts).unwrap();
        let table = JointTable::from_fn(scenario.context_variables(0), |_| {
            Prob::exact(1, 4).unwrap()
        })
        .unwrap();
        let model = EmpiricalModel::new(scenario, vec![table]).unwrap();
        let err = global_joint_exists(&model, &SolverOptions::default()).unwrap_err();
        match err {
            Error::CapacityExceeded { count, cap } => {
                assert_eq!(count, 1 << 21);
                assert_eq!(cap, 1 << 20);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn solver_is_deterministic() {
        let model = EmpiricalModel::triangle_example();
        let opts = SolverOptions::default();
        let a = global_joint_exists(&model, &opts).unwrap();
        let b = global_joint_exists(&model, &opts).unwrap();
        assert_eq!(a, b);

        let feasible = product_model();
        let c = global_joint_exists(&feasible, &opts).unwrap();
        let d = global_joint_exists(&feasible, &opts).unwrap();
        assert_eq!(c, d);
    }
}
