//! Measurement scenarios and the empirical models defined over them.
//!
//! A [`Scenario`] names a finite set of observables with fixed outcome
//! alphabets and lists the *contexts*: subsets of observables that are
//! jointly measurable. An [`EmpiricalModel`] attaches one joint outcome
//! table to each context. [`EmpiricalModel::validate`] checks that every
//! table is normalized and that overlapping contexts agree on their shared
//! marginals (no-disturbance); only models passing both checks are
//! meaningful inputs to the feasibility solver.

use crate::infotheory::{JointTable, Mode, Prob, Variable};
use crate::{Error, Result};

/// Canonical string key for a context: observable names joined by `|`.
pub fn context_key(names: &[String]) -> String {
    names.join("|")
}

/// Observables and contexts, without any probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    observables: Vec<Variable>,
    contexts: Vec<Vec<String>>,
}

impl Scenario {
    pub fn new(observables: Vec<Variable>, contexts: Vec<Vec<String>>) -> Result<Self> {
        if observables.is_empty() {
            return Err(Error::Empty("observable list"));
        }
        if contexts.is_empty() {
            return Err(Error::Empty("context list"));
        }
        let mut names = std::collections::BTreeSet::new();
        for obs in &observables {
            if !names.insert(obs.name.as_str()) {
                return Err(Error::DuplicateName(obs.name.clone()));
            }
        }
        let mut keys = std::collections::BTreeSet::new();
        for ctx in &contexts {
            if ctx.is_empty() {
                return Err(Error::Empty("context"));
            }
            let mut members = std::collections::BTreeSet::new();
            for name in ctx {
                if !names.contains(name.as_str()) {
                    return Err(Error::UnknownVariable(name.clone()));
                }
                if !members.insert(name.as_str()) {
                    return Err(Error::DuplicateName(name.clone()));
                }
            }
            if !keys.insert(context_key(ctx)) {
                return Err(Error::DuplicateName(context_key(ctx)));
            }
        }
        Ok(Scenario {
            observables,
            contexts,
        })
    }

    pub fn observables(&self) -> &[Variable] {
        &self.observables
    }

    pub fn contexts(&self) -> &[Vec<String>] {
        &self.contexts
    }

    pub fn observable(&self, name: &str) -> Option<&Variable> {
        self.observables.iter().find(|v| v.name == name)
    }

    pub fn context_key(&self, idx: usize) -> String {
        context_key(&self.contexts[idx])
    }

    /// Variables of one context, in context order, cloned from the scenario.
    pub fn context_variables(&self, idx: usize) -> Vec<Variable> {
        self.contexts[idx]
            .iter()
            .map(|name| self.observable(name).expect("validated name").clone())
            .collect()
    }

    /// Number of deterministic global assignments: the product of all
    /// alphabet sizes. Saturates at `u128::MAX`.
    pub fn global_assignment_count(&self) -> u128 {
        self.observables
            .iter()
            .fold(1u128, |acc, v| acc.saturating_mul(v.alphabet.len() as u128))
    }
}

/// Per-context normalization result.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationCheck {
    pub context: String,
    pub total: f64,
    pub ok: bool,
}

/// Shared-marginal agreement for one pair of overlapping contexts.
#[derive(Debug, Clone, PartialEq)]
pub struct DisturbanceCheck {
    pub context_a: String,
    pub context_b: String,
    pub shared: Vec<String>,
    pub max_deviation: f64,
    pub ok: bool,
}

/// Outcome of [`EmpiricalModel::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub normalization: Vec<NormalizationCheck>,
    pub disturbance: Vec<DisturbanceCheck>,
}

impl ValidationReport {
    pub fn is_consistent(&self) -> bool {
        self.normalization.iter().all(|c| c.ok) && self.disturbance.iter().all(|c| c.ok)
    }
}

/// A scenario with one joint outcome table per context.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalModel {
    scenario: Scenario,
    tables: Vec<JointTable>,
    mode: Mode,
}

impl EmpiricalModel {
    /// Tables must be listed in context order; each table's variables must
    /// match its context's observables in name, order, and alphabet, and
    /// every table must use the same arithmetic mode.
    pub fn new(scenario: Scenario, tables: Vec<JointTable>) -> Result<Self> {
        if tables.len() != scenario.contexts().len() {
            return Err(Error::Structural(format!(
                "scenario has {} contexts but {} tables were given",
                scenario.contexts().len(),
                tables.len()
            )));
        }
        for (idx, table) in tables.iter().enumerate() {
            let expected = scenario.context_variables(idx);
            if table.variables() != expected.as_slice() {
                return Err(Error::Structural(format!(
                    "table for context '{}' does not match the context's observables",
                    scenario.context_key(idx)
                )));
            }
        }
        let mode = tables.first().map(JointTable::mode).unwrap_or(Mode::Exact);
        if tables.iter().any(|t| t.mode() != mode) {
            return Err(Error::MixedMode("empirical model"));
        }
        Ok(EmpiricalModel {
            scenario,
            tables,
            mode,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn tables(&self) -> &[JointTable] {
        &self.tables
    }

    pub fn table(&self, ctx_idx: usize) -> &JointTable {
        &self.tables[ctx_idx]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Checks normalization of each context table and agreement of shared
    /// marginals for every overlapping pair of contexts.
    ///
    /// Exact tables must match exactly; float tables within `tol`. The
    /// report carries every check, passed or not, for display.
    pub fn validate(&self, tol: f64) -> Result<ValidationReport> {
        let mut normalization = Vec::new();
        for (idx, table) in self.tables.iter().enumerate() {
            normalization.push(NormalizationCheck {
                context: self.scenario.context_key(idx),
                total: table.total().as_f64(),
                ok: table.is_normalized(tol),
            });
        }

        let mut disturbance = Vec::new();
        let contexts = self.scenario.contexts();
        for i in 0..contexts.len() {
            for j in (i + 1)..contexts.len() {
                let shared: Vec<&Variable> = self
                    .scenario
                    .observables()
                    .iter()
                    .filter(|v| contexts[i].contains(&v.name) && contexts[j].contains(&v.name))
                    .collect();
                if shared.is_empty() {
                    continue;
                }
                let mut max_deviation = 0.0f64;
                let mut ok = true;
                let shape: Vec<usize> = shared.iter().map(|v| v.alphabet.len()).collect();
                let mut idx = vec![0usize; shared.len()];
                let tuples: usize = shape.iter().product();
                for _ in 0..tuples {
                    let assignment: Vec<(&str, &str)> = shared
                        .iter()
                        .zip(&idx)
                        .map(|(v, &oi)| (v.name.as_str(), v.alphabet[oi].as_str()))
                        .collect();
                    let pa = self.tables[i].partial_mass(&assignment)?;
                    let pb = self.tables[j].partial_mass(&assignment)?;
                    max_deviation = max_deviation.max(pa.abs_diff(&pb));
                    ok &= pa.matches(&pb, tol);
                    for k in (0..idx.len()).rev() {
                        idx[k] += 1;
                        if idx[k] < shape[k] {
                            break;
                        }
                        idx[k] = 0;
                    }
                }
                disturbance.push(DisturbanceCheck {
                    context_a: self.scenario.context_key(i),
                    context_b: self.scenario.context_key(j),
                    shared: shared.iter().map(|v| v.name.clone()).collect(),
                    max_deviation,
                    ok,
                });
            }
        }

        Ok(ValidationReport {
            normalization,
            disturbance,
        })
    }

    /// Returns a copy with every context table rescaled to total one.
    pub fn normalized(&self) -> Result<EmpiricalModel> {
        let tables = self
            .tables
            .iter()
            .map(JointTable::normalized)
            .collect::<Result<Vec<_>>>()?;
        EmpiricalModel::new(self.scenario.clone(), tables)
    }

    /// The perfect-anticorrelation triangle: three binary observables
    /// measured pairwise, each pair returning opposite outcomes with
    /// probability one (split evenly between `01` and `10`).
    ///
    /// Every context marginal is uniform, so the model passes validation,
    /// yet no global joint distribution reproduces all three pairwise
    /// tables: anticorrelation around an odd cycle is unsatisfiable. The
    /// standard minimal specimen of a contextual empirical model.
    pub fn triangle_example() -> EmpiricalModel {
        let observables = vec![
            Variable::binary("A"),
            Variable::binary("B"),
            Variable::binary("C"),
        ];
        let contexts = vec![
            vec!["A".to_string(), "B".to_string()],
            vec!["B".to_string(), "C".to_string()],
            vec!["A".to_string(), "C".to_string()],
        ];
        let scenario = Scenario::new(observables, contexts).expect("static scenario");
        let anticorrelated = |idx: &[usize]| {
            if idx[0] != idx[1] {
                Prob::exact(1, 2).expect("static probability")
            } else {
                Prob::zero(Mode::Exact)
            }
        };
        let tables = (0..3)
            .map(|i| {
                JointTable::from_fn(scenario.context_variables(i), anticorrelated)
                    .expect("static table")
            })
            .collect();
        EmpiricalModel::new(scenario, tables).expect("static model")
    }
}
