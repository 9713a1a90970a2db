//! Shared helpers for the integration suites: the seeded RNG, random exact
//! models with channels that mediate them by construction, and independent
//! oracles (basis-enumeration feasibility, direct-definition information
//! quantities) that the library's own code paths are checked against.

#![allow(dead_code)]
// The reference oracles below are written in plain index form to mirror the
// defining formulas; keeping them that way is the point of an oracle.
#![allow(clippy::needless_range_loop)]

use std::env;

use num::rational::BigRational;
use num::{BigInt, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use contextcost::context_cost::AuxChannel;
use contextcost::infotheory::{Dist, JointTable, Mode, Prob, Variable};
use contextcost::ontmodel::SingleStateModel;
use contextcost::scenario::{EmpiricalModel, Scenario};

pub const DEFAULT_SEED: u64 = 0x00c7e_9f00d;

/// Suite RNG, reproducible and overridable via `CONTEXTCOST_SEED`.
pub fn suite_rng() -> ChaCha8Rng {
    let seed = env::var("CONTEXTCOST_SEED")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(DEFAULT_SEED);
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn binary_labels() -> Vec<String> {
    vec!["0".to_string(), "1".to_string()]
}

/// Random exact distribution with small positive integer weights.
pub fn random_exact_dist(rng: &mut ChaCha8Rng, labels: Vec<String>) -> Dist {
    let weights: Vec<i64> = (0..labels.len()).map(|_| rng.gen_range(1..=9)).collect();
    random_dist_from_weights(labels, &weights)
}

/// Random exact distribution that may put zero mass on some symbols.
pub fn random_exact_dist_sparse(rng: &mut ChaCha8Rng, labels: Vec<String>) -> Dist {
    loop {
        let weights: Vec<i64> = (0..labels.len()).map(|_| rng.gen_range(0..=5)).collect();
        if weights.iter().any(|w| *w > 0) {
            return random_dist_from_weights(labels, &weights);
        }
    }
}

fn random_dist_from_weights(labels: Vec<String>, weights: &[i64]) -> Dist {
    let total: i64 = weights.iter().sum();
    let mass = weights
        .iter()
        .map(|w| Prob::from_ratio(q(*w, total)).expect("weight ratio in [0,1]"))
        .collect();
    Dist::new(labels, mass).expect("weights normalize")
}

pub struct MediatedPair {
    pub model: SingleStateModel,
    pub channel: AuxChannel,
}

/// Samples a model together with a channel that mediates it exactly, by
/// construction: draw p(m|c) and p(o|λ,m) first, then define the model's
/// responses as the composite ξ(o|c,λ) = Σ_m p(m|c)·p(o|λ,m).
pub fn random_mediated_pair(rng: &mut ChaCha8Rng) -> MediatedPair {
    let n_ctx = rng.gen_range(2..=4);
    let n_lambda = rng.gen_range(1..=4);
    let n_m = rng.gen_range(1..=3);
    let contexts = labels("c", n_ctx);
    let lambda = labels("l", n_lambda);
    let outcomes = binary_labels();
    let m_alphabet = labels("m", n_m);

    let prior = random_exact_dist(rng, contexts.clone());
    let mu = random_exact_dist(rng, lambda.clone());
    let context_to_m: Vec<Dist> = (0..n_ctx)
        .map(|_| random_exact_dist(rng, m_alphabet.clone()))
        .collect();
    let mediated: Vec<Vec<Dist>> = (0..n_lambda)
        .map(|_| {
            (0..n_m)
                .map(|_| random_exact_dist(rng, outcomes.clone()))
                .collect()
        })
        .collect();

    let mut responses = Vec::with_capacity(n_ctx);
    for c2m in &context_to_m {
        let mut family = Vec::with_capacity(n_lambda);
        for row in &mediated {
            let mass: Vec<Prob> = (0..outcomes.len())
                .map(|oi| {
                    let mut acc = Prob::zero(Mode::Exact);
                    for (mi, resp) in row.iter().enumerate() {
                        acc = acc.add(&c2m.mass(mi).mul(resp.mass(oi)));
                    }
                    acc
                })
                .collect();
            family.push(Dist::new(outcomes.clone(), mass).expect("composite normalizes"));
        }
        responses.push(family);
    }

    let model = SingleStateModel::new(lambda.clone(), mu, prior, outcomes.clone(), responses)
        .expect("composed model is well-formed");
    let channel = AuxChannel::new(contexts, lambda, outcomes, m_alphabet, context_to_m, mediated)
        .expect("sampled channel is well-formed");
    MediatedPair { model, channel }
}

// ---------------------------------------------------------------------------
// Seeded empirical-model suite (binary observables).
// ---------------------------------------------------------------------------

pub fn binary_scenario(names: &[&str], contexts: &[&[&str]]) -> Scenario {
    Scenario::new(
        names.iter().map(|n| Variable::binary(*n)).collect(),
        contexts
            .iter()
            .map(|ctx| ctx.iter().map(|s| s.to_string()).collect())
            .collect(),
    )
    .expect("well-formed scenario")
}

/// Every structurally distinct 2- and 3-observable binary scenario shape the
/// suite covers: disjoint, joint, nested, chain, cycle, and mixed overlaps.
pub fn scenario_shapes() -> Vec<Scenario> {
    vec![
        binary_scenario(&["A", "B"], &[&["A"], &["B"]]),
        binary_scenario(&["A", "B"], &[&["A", "B"]]),
        binary_scenario(&["A", "B"], &[&["A", "B"], &["A"], &["B"]]),
        binary_scenario(&["A", "B", "C"], &[&["A", "B"], &["B", "C"]]),
        binary_scenario(&["A", "B", "C"], &[&["A", "B"], &["B", "C"], &["A", "C"]]),
        binary_scenario(&["A", "B", "C"], &[&["A", "B", "C"]]),
        binary_scenario(&["A", "B", "C"], &[&["A", "B"], &["C"]]),
        binary_scenario(
            &["A", "B", "C"],
            &[&["A", "B"], &["B", "C"], &["A", "C"], &["A"], &["B"], &["C"]],
        ),
    ]
}

/// Consistent and feasible by construction: the marginals of a random exact
/// global joint distribution.
pub fn model_from_global(rng: &mut ChaCha8Rng, scenario: &Scenario) -> EmpiricalModel {
    let vars = scenario.observables().to_vec();
    let cells: usize = vars.iter().map(|v| v.alphabet.len()).product();
    let weights: Vec<i64> = loop {
        let w: Vec<i64> = (0..cells).map(|_| rng.gen_range(0..=4)).collect();
        if w.iter().any(|x| *x > 0) {
            break w;
        }
    };
    let total: i64 = weights.iter().sum();
    let flat: Vec<Prob> = weights
        .iter()
        .map(|w| Prob::from_ratio(q(*w, total)).expect("cell weight"))
        .collect();
    let joint = JointTable::new(vars, flat).expect("global joint");
    let tables = scenario
        .contexts()
        .iter()
        .map(|ctx| {
            let names: Vec<&str> = ctx.iter().map(String::as_str).collect();
            joint.marginalize(&names).expect("context marginal")
        })
        .collect();
    EmpiricalModel::new(scenario.clone(), tables).expect("marginal model")
}

/// Pairwise-consistent tables that need not extend to a global joint:
/// fixed per-observable marginals with a per-context coupling drawn inside
/// the Fréchet bounds. Cycles of near-extremal couplings are contextual, so
/// the family exercises both verdicts. Contexts must have ≤ 2 members.
pub fn coupled_model(rng: &mut ChaCha8Rng, scenario: &Scenario) -> EmpiricalModel {
    let marginal: Vec<BigRational> = scenario
        .observables()
        .iter()
        .map(|_| q(rng.gen_range(1..=7), 8))
        .collect();
    let obs_pos = |name: &str| {
        scenario
            .observables()
            .iter()
            .position(|v| v.name == name)
            .expect("known observable")
    };
    let mut tables = Vec::with_capacity(scenario.contexts().len());
    for (ci, ctx) in scenario.contexts().iter().enumerate() {
        let cells: Vec<BigRational> = match ctx.len() {
            1 => {
                let m = &marginal[obs_pos(&ctx[0])];
                vec![q(1, 1) - m, m.clone()]
            }
            2 => {
                let mx = marginal[obs_pos(&ctx[0])].clone();
                let my = marginal[obs_pos(&ctx[1])].clone();
                let lower = (&mx + &my - q(1, 1)).max(BigRational::zero());
                let upper = mx.clone().min(my.clone());
                let t = q(rng.gen_range(0..=4), 4);
                let p11 = &lower + (&upper - &lower) * t;
                vec![
                    q(1, 1) - &mx - &my + &p11,
                    &my - &p11,
                    &mx - &p11,
                    p11.clone(),
                ]
            }
            n => panic!("coupled_model supports contexts of size 1-2, got {n}"),
        };
        let flat: Vec<Prob> = cells
            .into_iter()
            .map(|c| Prob::from_ratio(c).expect("coupled cell in [0,1]"))
            .collect();
        tables.push(
            JointTable::new(scenario.context_variables(ci), flat).expect("coupled table"),
        );
    }
    EmpiricalModel::new(scenario.clone(), tables).expect("coupled model")
}

// ---------------------------------------------------------------------------
// Independent feasibility oracle.
// ---------------------------------------------------------------------------

/// Ground-truth global-joint feasibility by exhaustive basis enumeration,
/// fully independent of the simplex: {x ≥ 0 : Ax = b} is nonempty iff some
/// subset of linearly independent columns solves Ax = b with nonnegative
/// coefficients (the support of any basic feasible solution is such a
/// subset). Exact-mode models only; assignment count must be ≤ 20 columns.
pub fn oracle_feasible(model: &EmpiricalModel) -> bool {
    let (a, b) = oracle_system(model);
    let n_cols = a.first().map_or(0, Vec::len);
    assert!(n_cols <= 20, "oracle is exponential in columns");
    for subset in 0u32..(1u32 << n_cols) {
        let cols: Vec<usize> = (0..n_cols).filter(|j| subset >> j & 1 == 1).collect();
        if solves_nonnegative(&a, &b, &cols) {
            return true;
        }
    }
    false
}

/// Builds the constraint system with its own assignment enumeration: one
/// row forcing total mass 1, then one row per (context, outcome tuple).
fn oracle_system(model: &EmpiricalModel) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let scenario = model.scenario();
    let observables = scenario.observables();
    let shape: Vec<usize> = observables.iter().map(|v| v.alphabet.len()).collect();
    let count: usize = shape.iter().product();

    // Assignment j -> outcome index per observable, mixed-radix decode.
    let decode = |j: usize| -> Vec<usize> {
        let mut rest = j;
        let mut out = vec![0usize; shape.len()];
        for k in (0..shape.len()).rev() {
            out[k] = rest % shape[k];
            rest /= shape[k];
        }
        out
    };

    let mut a = vec![vec![BigRational::from(BigInt::from(1)); count]];
    let mut b = vec![BigRational::from(BigInt::from(1))];

    for (ci, table) in model.tables().iter().enumerate() {
        let member_idx: Vec<usize> = scenario.contexts()[ci]
            .iter()
            .map(|name| {
                observables
                    .iter()
                    .position(|v| &v.name == name)
                    .expect("context member exists")
            })
            .collect();
        for (cell_idx, p) in table.iter() {
            let mut row = vec![BigRational::zero(); count];
            for (j, slot) in row.iter_mut().enumerate() {
                let global = decode(j);
                let hits = member_idx
                    .iter()
                    .zip(&cell_idx)
                    .all(|(&obs, &oi)| global[obs] == oi);
                if hits {
                    *slot = BigRational::from(BigInt::from(1));
                }
            }
            a.push(row);
            b.push(p.as_ratio().expect("oracle needs exact cells").clone());
        }
    }
    (a, b)
}

/// Gauss-Jordan on the chosen columns: true iff they are linearly
/// independent, the system is consistent, and the unique solution is ≥ 0.
fn solves_nonnegative(a: &[Vec<BigRational>], b: &[BigRational], cols: &[usize]) -> bool {
    let rows = a.len();
    let k = cols.len();
    // Augmented matrix restricted to the subset.
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|&j| a[i][j].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();

    let mut rank = 0usize;
    for col in 0..k {
        let Some(pivot) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            return false; // dependent columns; a smaller subset covers this case
        };
        m.swap(rank, pivot);
        let p = m[rank][col].clone();
        for entry in &mut m[rank] {
            let scaled = entry.clone() / &p;
            *entry = scaled;
        }
        let pivot_row = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        rank += 1;
    }
    // Consistency of the eliminated rows.
    for row in m.iter().skip(rank) {
        if !row[k].is_zero() {
            return false;
        }
    }
    // Unique solution: row i of the reduced system gives x[col_i].
    (0..k).all(|i| !m[i][k].is_negative())
}

// ---------------------------------------------------------------------------
// Direct-definition information oracles.
// ---------------------------------------------------------------------------

fn h_term(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Direct-definition Shannon entropy (bits) of a probability vector.
pub fn entropy_oracle(probs: &[f64]) -> f64 {
    probs.iter().copied().map(h_term).sum()
}

/// Collects a named-variable marginal of `t` as a dense array indexed by
/// the requested variable order.
fn collect(t: &JointTable, names: &[&str]) -> (Vec<usize>, Vec<f64>) {
    let kept = t.marginalize(names).expect("marginalize for oracle");
    let pos: Vec<usize> = names
        .iter()
        .map(|n| kept.var_index(n).expect("kept variable"))
        .collect();
    let sizes: Vec<usize> = pos
        .iter()
        .map(|&i| kept.variables()[i].alphabet.len())
        .collect();
    let total: usize = sizes.iter().product();
    let mut dense = vec![0.0f64; total];
    for (idx, p) in kept.iter() {
        let mut flat = 0usize;
        for (k, &i) in pos.iter().enumerate() {
            flat = flat * sizes[k] + idx[i];
        }
        dense[flat] += p.as_f64();
    }
    (sizes, dense)
}

/// I(X;Y) from the definition Σ p(x,y) log p(x,y)/(p(x)p(y)).
pub fn mi_oracle(t: &JointTable, x: &str, y: &str) -> f64 {
    let (sizes, p) = collect(t, &[x, y]);
    let (nx, ny) = (sizes[0], sizes[1]);
    let mut px = vec![0.0; nx];
    let mut py = vec![0.0; ny];
    for xi in 0..nx {
        for yi in 0..ny {
            px[xi] += p[xi * ny + yi];
            py[yi] += p[xi * ny + yi];
        }
    }
    let mut total = 0.0;
    for xi in 0..nx {
        for yi in 0..ny {
            let pxy = p[xi * ny + yi];
            if pxy > 0.0 {
                total += pxy * (pxy / (px[xi] * py[yi])).log2();
            }
        }
    }
    total
}

/// I(X;Y|Z) by slicing: Σ_z p(z) · I(X;Y | Z = z).
pub fn cmi_oracle(t: &JointTable, x: &str, y: &str, z: &str) -> f64 {
    let (sizes, p) = collect(t, &[x, y, z]);
    let (nx, ny, nz) = (sizes[0], sizes[1], sizes[2]);
    let at = |xi: usize, yi: usize, zi: usize| p[(xi * ny + yi) * nz + zi];

    let mut total = 0.0;
    for zi in 0..nz {
        let mut pz = 0.0;
        for xi in 0..nx {
            for yi in 0..ny {
                pz += at(xi, yi, zi);
            }
        }
        if pz <= 0.0 {
            continue;
        }
        let mut px = vec![0.0; nx];
        let mut py = vec![0.0; ny];
        for xi in 0..nx {
            for yi in 0..ny {
                px[xi] += at(xi, yi, zi) / pz;
                py[yi] += at(xi, yi, zi) / pz;
            }
        }
        let mut slice = 0.0;
        for xi in 0..nx {
            for yi in 0..ny {
                let pxy = at(xi, yi, zi) / pz;
                if pxy > 0.0 {
                    slice += pxy * (pxy / (px[xi] * py[yi])).log2();
                }
            }
        }
        total += pz * slice;
    }
    total
}
