//! Exact phase-1 simplex over arbitrary-precision rationals.
//!
//! Decides whether `A x = b` has a solution with `x >= 0` by minimizing the
//! sum of artificial variables. Bland's rule makes the pivot sequence finite
//! (no cycling) and deterministic, so identical inputs always produce the
//! identical outcome, witness, and certificate.
//!
//! When the optimum is positive the system is infeasible, and the phase-1
//! duals `y` (recovered from the reduced costs of the artificial columns as
//! `y_k = 1 - costrow[n + k]`) form a Farkas certificate:
//! `y^T A <= 0` componentwise while `y^T b > 0`.

use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::{Error, Result};

/// Result of a phase-1 run: exactly one of `solution` / `farkas` is set.
#[derive(Debug, Clone)]
pub(crate) struct Phase1Outcome {
    /// A nonnegative solution of `A x = b`, present iff feasible.
    pub solution: Option<Vec<BigRational>>,
    /// Farkas dual vector, present iff infeasible.
    pub farkas: Option<Vec<BigRational>>,
    /// Number of pivots performed.
    pub pivots: usize,
}

/// Runs phase-1 on `A x = b`, `x >= 0`. `a` is row-major, `m x n` with
/// `m = b.len()`; every row must have length `n`.
pub(crate) fn phase1(a: &[Vec<BigRational>], b: &[BigRational]) -> Result<Phase1Outcome> {
    let m = b.len();
    if m == 0 || a.len() != m {
        return Err(Error::Structural(format!(
            "constraint matrix has {} rows but {} right-hand sides",
            a.len(),
            m
        )));
    }
    let n = a[0].len();
    if n == 0 || a.iter().any(|row| row.len() != n) {
        return Err(Error::Structural("ragged or empty constraint matrix".into()));
    }

    // Tableau: m rows of [structural | artificial | rhs], then the reduced
    // cost row. Rows with negative rhs are negated first so that the
    // all-artificial basis is feasible for phase 1.
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    for i in 0..m {
        let flip = b[i].is_negative();
        let mut row = Vec::with_capacity(width);
        for v in &a[i] {
            row.push(if flip { -v } else { v.clone() });
        }
        for k in 0..m {
            row.push(if k == i {
                BigRational::one()
            } else {
                BigRational::zero()
            });
        }
        row.push(if flip { -&b[i] } else { b[i].clone() });
        t.push(row);
    }

    // Reduced costs for the artificial basis: cost 1 on artificials, 0 on
    // structurals, minus the sum of all rows. The rhs entry carries the
    // negated objective.
    let mut cost = vec![BigRational::zero(); width];
    for k in 0..m {
        cost[n + k] = BigRational::one();
    }
    for row in &t {
        for (c, v) in cost.iter_mut().zip(row.iter()) {
            *c -= v;
        }
    }

    let mut basis: Vec<usize> = (n..n + m).collect();
    let mut pivots = 0usize;

    // Bland entering rule: lowest column index with negative reduced cost;
    // no such column means the phase-1 objective is optimal.
    while let Some(entering) = (0..n + m).find(|&j| cost[j].is_negative()) {
        // Ratio test; ties broken by the lowest basis label (Bland).
        let mut leave: Option<usize> = None;
        let mut best: Option<BigRational> = None;
        for i in 0..m {
            if t[i][entering].is_positive() {
                let ratio = &t[i][width - 1] / &t[i][entering];
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        ratio < *cur
                            || (ratio == *cur && basis[i] < basis[leave.expect("set with best")])
                    }
                };
                if better {
                    best = Some(ratio);
                    leave = Some(i);
                }
            }
        }
        // Phase-1 objective is bounded below by zero, so an entering column
        // with no positive entry cannot occur.
        let leave = leave.ok_or_else(|| {
            Error::Structural("phase-1 simplex reported an unbounded objective".into())
        })?;

        // Pivot on (leave, entering).
        let pivot = t[leave][entering].clone();
        for v in t[leave].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = t[leave].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != leave && !row[entering].is_zero() {
                let factor = row[entering].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &factor * pv;
                }
            }
        }
        if !cost[entering].is_zero() {
            let factor = cost[entering].clone();
            for (v, pv) in cost.iter_mut().zip(&pivot_row) {
                *v -= &factor * pv;
            }
        }
        basis[leave] = entering;
        pivots += 1;
    }

    // cost[width-1] holds minus the objective; objective zero means feasible.
    let objective = -cost[width - 1].clone();
    if objective.is_zero() {
        let mut x = vec![BigRational::zero(); n];
        for i in 0..m {
            if basis[i] < n {
                x[basis[i]] = t[i][width - 1].clone();
            }
        }
        Ok(Phase1Outcome {
            solution: Some(x),
            farkas: None,
            pivots,
        })
    } else {
        // Duals with respect to the *possibly row-flipped* system; undo the
        // flips so the certificate refers to the caller's rows.
        let mut y = Vec::with_capacity(m);
        for k in 0..m {
            let yk = BigRational::one() - &cost[n + k];
            y.push(if b[k].is_negative() { -yk } else { yk });
        }
        Ok(Phase1Outcome {
            solution: None,
            farkas: Some(y),
            pivots,
        })
    }
}
