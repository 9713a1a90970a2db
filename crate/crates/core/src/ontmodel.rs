//! Finite single-state ontological models.
//!
//! A [`SingleStateModel`] carries one ontic space Λ shared by every context
//! (no per-context state refinement), a preparation μ(λ), an explicit
//! context prior p(C), and response functions ξ(o|c,λ) over one shared
//! outcome alphabet. The context and the ontic state are independent by
//! construction: the joint law is p(c)·μ(λ)·ξ(o|c,λ).
//!
//! Observable statistics arise by averaging over the ontic state,
//! p(o|c) = Σ_λ μ(λ)·ξ(o|c,λ), and the *contextual dependence* of a model
//! is I(C;O|λ) on its joint law — zero exactly when the responses don't
//! actually depend on the context.
//!
//! [`xor_example`] builds the canonical nontrivial specimen: uniform binary
//! λ and deterministic outcome O = λ ⊕ f(c) for an intervention bit f.
//! There I(C;O|λ) equals H(f(C)) for every prior: conditioning on λ peels
//! the mask off the XOR. With uniform λ the outcome is marginally
//! independent of the context (I(C;O) = 0), and when f(C) is itself
//! uniform — two contexts, bijective f, uniform prior — also I(λ;O) = 0,
//! so neither the context nor the ontic state alone predicts anything
//! while the pair determines the outcome.

use std::collections::BTreeMap;

use crate::infotheory::{
    conditional_mutual_information, Dist, JointTable, Mode, Prob, Variable,
};
use crate::{Error, Result, DEFAULT_TOLERANCE};

/// An intervention-dependent bit: a total map from context labels to {0,1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterventionBit {
    bits: BTreeMap<String, bool>,
}

impl InterventionBit {
    pub fn new(bits: BTreeMap<String, bool>) -> Self {
        InterventionBit { bits }
    }

    pub fn from_pairs(pairs: &[(&str, bool)]) -> Self {
        InterventionBit {
            bits: pairs.iter().map(|&(c, b)| (c.to_string(), b)).collect(),
        }
    }

    /// The same bit on every listed context.
    pub fn constant(contexts: &[String], value: bool) -> Self {
        InterventionBit {
            bits: contexts.iter().map(|c| (c.clone(), value)).collect(),
        }
    }

    pub fn get(&self, context: &str) -> Option<bool> {
        self.bits.get(context).copied()
    }
}

/// A single-state ontological model (Λ, μ, p(C), ξ).
#[derive(Debug, Clone, PartialEq)]
pub struct SingleStateModel {
    ontic_space: Vec<String>,
    preparation: Dist,
    contexts: Vec<String>,
    context_prior: Dist,
    outcome_alphabet: Vec<String>,
    /// Response distributions indexed `[context][lambda]`.
    responses: Vec<Vec<Dist>>,
    mode: Mode,
}

impl SingleStateModel {
    /// Builds and validates a model. The contexts are the prior's alphabet;
    /// `responses` must supply one normalized distribution over the outcome
    /// alphabet per `(context, λ)` pair, all in one arithmetic mode.
    pub fn new(
        ontic_space: Vec<String>,
        preparation: Dist,
        context_prior: Dist,
        outcome_alphabet: Vec<String>,
        responses: Vec<Vec<Dist>>,
    ) -> Result<Self> {
        if preparation.labels() != ontic_space.as_slice() {
            return Err(Error::Structural(
                "preparation is not a distribution over the ontic space".into(),
            ));
        }
        let contexts = context_prior.labels().to_vec();
        if responses.len() != contexts.len() {
            return Err(Error::Structural(format!(
                "{} contexts but {} response families",
                contexts.len(),
                responses.len()
            )));
        }
        let mode = preparation.mode();
        if context_prior.mode() != mode {
            return Err(Error::MixedMode("ontological model"));
        }
        for (ci, family) in responses.iter().enumerate() {
            if family.len() != ontic_space.len() {
                return Err(Error::Structural(format!(
                    "context '{}' has {} response distributions for {} ontic states",
                    contexts[ci],
                    family.len(),
                    ontic_space.len()
                )));
            }
            for (li, dist) in family.iter().enumerate() {
                if dist.labels() != outcome_alphabet.as_slice() {
                    return Err(Error::Structural(format!(
                        "response for ('{}', '{}') is not over the outcome alphabet",
                        contexts[ci], ontic_space[li]
                    )));
                }
                if dist.mode() != mode {
                    return Err(Error::MixedMode("ontological model"));
                }
                if !dist.is_normalized(DEFAULT_TOLERANCE) {
                    return Err(Error::NotNormalized {
                        what: format!("response for ('{}', '{}')", contexts[ci], ontic_space[li]),
                        sum: dist.total().as_f64(),
                    });
                }
            }
        }
        if !preparation.is_normalized(DEFAULT_TOLERANCE) {
            return Err(Error::NotNormalized {
                what: "preparation".into(),
                sum: preparation.total().as_f64(),
            });
        }
        if !context_prior.is_normalized(DEFAULT_TOLERANCE) {
            return Err(Error::NotNormalized {
                what: "context prior".into(),
                sum: context_prior.total().as_f64(),
            });
        }
        Ok(SingleStateModel {
            ontic_space,
            preparation,
            contexts,
            context_prior,
            outcome_alphabet,
            responses,
            mode,
        })
    }

    /// Builds a model from a `(context, λ) → Dist` map, reporting exactly
    /// which pair is missing if the map is incomplete.
    pub fn from_response_map(
        ontic_space: Vec<String>,
        preparation: Dist,
        context_prior: Dist,
        outcome_alphabet: Vec<String>,
        map: &BTreeMap<(String, String), Dist>,
    ) -> Result<Self> {
        let mut responses = Vec::with_capacity(context_prior.len());
        for context in context_prior.labels() {
            let mut family = Vec::with_capacity(ontic_space.len());
            for lambda in &ontic_space {
                let dist = map
                    .get(&(context.clone(), lambda.clone()))
                    .ok_or_else(|| Error::IncompleteResponses {
                        context: context.clone(),
                        lambda: lambda.clone(),
                    })?;
                family.push(dist.clone());
            }
            responses.push(family);
        }
        SingleStateModel::new(
            ontic_space,
            preparation,
            context_prior,
            outcome_alphabet,
            responses,
        )
    }

    pub fn ontic_space(&self) -> &[String] {
        &self.ontic_space
    }

    pub fn preparation(&self) -> &Dist {
        &self.preparation
    }

    pub fn contexts(&self) -> &[String] {
        &self.contexts
    }

    pub fn context_prior(&self) -> &Dist {
        &self.context_prior
    }

    pub fn outcome_alphabet(&self) -> &[String] {
        &self.outcome_alphabet
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Response ξ(·|c,λ) by indices into the context and ontic lists.
    pub fn response(&self, ctx_idx: usize, lambda_idx: usize) -> &Dist {
        &self.responses[ctx_idx][lambda_idx]
    }

    pub fn response_for(&self, context: &str, lambda: &str) -> Result<&Dist> {
        let ci = self
            .contexts
            .iter()
            .position(|c| c == context)
            .ok_or_else(|| Error::UnknownSymbol {
                what: "context".into(),
                symbol: context.into(),
            })?;
        let li = self
            .ontic_space
            .iter()
            .position(|l| l == lambda)
            .ok_or_else(|| Error::UnknownSymbol {
                what: "ontic state".into(),
                symbol: lambda.into(),
            })?;
        Ok(&self.responses[ci][li])
    }

    /// Same model with a different context prior (same contexts, same mode).
    pub fn with_prior(&self, prior: Dist) -> Result<SingleStateModel> {
        if prior.labels() != self.contexts.as_slice() {
            return Err(Error::Structural(
                "replacement prior is not over the model's contexts".into(),
            ));
        }
        SingleStateModel::new(
            self.ontic_space.clone(),
            self.preparation.clone(),
            prior,
            self.outcome_alphabet.clone(),
            self.responses.clone(),
        )
    }

    /// Observable statistics p(o|c) = Σ_λ μ(λ)·ξ(o|c,λ), per context.
    pub fn reproduce_statistics(&self) -> Result<Vec<(String, Dist)>> {
        self.contexts
            .iter()
            .enumerate()
            .map(|(ci, c)| Ok((c.clone(), self.statistics_for_index(ci)?)))
            .collect()
    }

    pub fn statistics_for(&self, context: &str) -> Result<Dist> {
        let ci = self
            .contexts
            .iter()
            .position(|c| c == context)
            .ok_or_else(|| Error::UnknownSymbol {
                what: "context".into(),
                symbol: context.into(),
            })?;
        self.statistics_for_index(ci)
    }

    fn statistics_for_index(&self, ci: usize) -> Result<Dist> {
        let mut mass = vec![Prob::zero(self.mode); self.outcome_alphabet.len()];
        for (li, _) in self.ontic_space.iter().enumerate() {
            let mu = self.preparation.mass(li);
            let xi = &self.responses[ci][li];
            for (oi, m) in mass.iter_mut().enumerate() {
                *m = m.add(&mu.mul(xi.mass(oi)));
            }
        }
        Dist::new(self.outcome_alphabet.clone(), mass)
    }

    /// The joint law p(c,λ,o) = p(c)·μ(λ)·ξ(o|c,λ) as a table over the
    /// variables `C`, `lambda`, `O`.
    pub fn joint_law(&self) -> Result<JointTable> {
        let vars = vec![
            Variable::new("C", self.contexts.clone())?,
            Variable::new("lambda", self.ontic_space.clone())?,
            Variable::new("O", self.outcome_alphabet.clone())?,
        ];
        JointTable::from_fn(vars, |idx| {
            let (ci, li, oi) = (idx[0], idx[1], idx[2]);
            self.context_prior
                .mass(ci)
                .mul(self.preparation.mass(li))
                .mul(self.responses[ci][li].mass(oi))
        })
    }

    /// I(C;O|λ) in bits on the model's joint law — the quantity the
    /// mediation bound H(M) ≥ I(C;O|λ) prices. Zero iff the outcome is
    /// conditionally independent of the context given the ontic state.
    pub fn contextual_dependence(&self) -> Result<f64> {
        conditional_mutual_information(&self.joint_law()?, "C", "O", "lambda")
    }

    /// True iff ξ(·|c,λ) is the same for every context at each λ — i.e.
    /// the model never actually uses the context. Exact comparison for
    /// exact mode, entrywise `tol` for float mode.
    pub fn is_response_noncontextual(&self, tol: f64) -> bool {
        for li in 0..self.ontic_space.len() {
            let reference = &self.responses[0][li];
            for family in &self.responses[1..] {
                if !family[li].matches(reference, tol) {
                    return false;
                }
            }
        }
        true
    }
}

/// The canonical XOR construction: Λ = {0,1} with uniform μ, outcome
/// O = λ ⊕ f(c) deterministically. The prior fixes the context set and
/// the arithmetic mode; `f` must be defined on every context.
pub fn xor_example(f: &InterventionBit, prior: &Dist) -> Result<SingleStateModel> {
    let mode = prior.mode();
    let bit_labels = vec!["0".to_string(), "1".to_string()];
    let mut responses = Vec::with_capacity(prior.len());
    for context in prior.labels() {
        let fc = f.get(context).ok_or_else(|| Error::UnknownSymbol {
            what: "intervention bit".into(),
            symbol: context.clone(),
        })?;
        let mut family = Vec::with_capacity(2);
        for lambda in 0..2usize {
            let o = lambda ^ usize::from(fc);
            family.push(Dist::point_mass(bit_labels.clone(), &o.to_string(), mode)?);
        }
        responses.push(family);
    }
    SingleStateModel::new(
        bit_labels.clone(),
        Dist::uniform(bit_labels.clone(), mode)?,
        prior.clone(),
        bit_labels,
        responses,
    )
}
