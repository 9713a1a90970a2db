//! The auxiliary contextual variable M and its information cost.
//!
//! An [`AuxChannel`] factors a model's responses through M: the context
//! first draws M via p(m|c), then the outcome is produced by a mediated
//! response p(o|λ,m) that *takes no context argument*. Mediation — the
//! condition p(o|λ,M,C) = p(o|λ,M) — therefore holds structurally; what
//! [`check_mediation`] verifies is that the composite
//! Σ_m p(m|c)·p(o|λ,m) reproduces the model's ξ(o|c,λ).
//!
//! For any mediating channel the chain C → (λ,M) → O gives
//! I(C;O|λ) ≤ I(C;M|λ) ≤ H(M), so H(M) — the *cost* of the channel — is
//! bounded below by the model's contextual dependence, and a channel is
//! *saturated* when the two meet. [`minimal_deterministic_cost`] finds the
//! cheapest deterministic channel by partitioning contexts into cells with
//! identical response families: merging two cells with different families
//! would need one mediated response to equal two distinct ones, so this
//! partition is the coarsest that mediates, and coarsening only ever
//! lowers partition entropy. Whether a *stochastic* M can do better is not
//! settled here; reports carry the lower bound I(C;O|λ) alongside H(M) so
//! the gap is visible.
//!
//! In float mode, response families are merged when entrywise within τ,
//! which can under-report the cost of models whose families differ by less
//! than τ; exact mode merges only on exact equality.

use crate::infotheory::{
    conditional_mutual_information, entropy, joint_entropy, Dist, JointTable, Mode, Prob,
    Variable,
};
use crate::ontmodel::SingleStateModel;
use crate::{Error, Result, DEFAULT_TOLERANCE};

/// Slack allowed when checking H(M) ≥ I(C;O|λ): both sides are float
/// entropies of exactly-represented distributions.
pub const BOUND_TOL: f64 = 1e-10;

/// Width of the saturation window |H(M) − I(C;O|λ)|.
pub const SATURATION_TOL: f64 = 1e-9;

/// A channel C → M together with a context-free mediated response.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxChannel {
    contexts: Vec<String>,
    ontic_space: Vec<String>,
    outcome_alphabet: Vec<String>,
    m_alphabet: Vec<String>,
    /// p(m|c), indexed by context.
    context_to_m: Vec<Dist>,
    /// p(o|λ,m), indexed `[lambda][m]`. No context index, by construction.
    mediated_response: Vec<Vec<Dist>>,
    mode: Mode,
}

impl AuxChannel {
    pub fn new(
        contexts: Vec<String>,
        ontic_space: Vec<String>,
        outcome_alphabet: Vec<String>,
        m_alphabet: Vec<String>,
        context_to_m: Vec<Dist>,
        mediated_response: Vec<Vec<Dist>>,
    ) -> Result<Self> {
        if m_alphabet.is_empty() {
            return Err(Error::Empty("M alphabet"));
        }
        if context_to_m.len() != contexts.len() {
            return Err(Error::Structural(format!(
                "{} contexts but {} context-to-M distributions",
                contexts.len(),
                context_to_m.len()
            )));
        }
        if mediated_response.len() != ontic_space.len() {
            return Err(Error::Structural(format!(
                "{} ontic states but {} mediated-response rows",
                ontic_space.len(),
                mediated_response.len()
            )));
        }
        let mode = context_to_m
            .first()
            .map(Dist::mode)
            .or_else(|| mediated_response.first().and_then(|r| r.first().map(Dist::mode)))
            .unwrap_or(Mode::Exact);
        for (ci, dist) in context_to_m.iter().enumerate() {
            if dist.labels() != m_alphabet.as_slice() {
                return Err(Error::Structural(format!(
                    "p(m|c) for context '{}' is not over the M alphabet",
                    contexts[ci]
                )));
            }
            if dist.mode() != mode {
                return Err(Error::MixedMode("auxiliary channel"));
            }
            if !dist.is_normalized(DEFAULT_TOLERANCE) {
                return Err(Error::NotNormalized {
                    what: format!("p(m|c) for context '{}'", contexts[ci]),
                    sum: dist.total().as_f64(),
                });
            }
        }
        for (li, row) in mediated_response.iter().enumerate() {
            if row.len() != m_alphabet.len() {
                return Err(Error::Structural(format!(
                    "ontic state '{}' has {} mediated responses for {} M symbols",
                    ontic_space[li],
                    row.len(),
                    m_alphabet.len()
                )));
            }
            for (mi, dist) in row.iter().enumerate() {
                if dist.labels() != outcome_alphabet.as_slice() {
                    return Err(Error::Structural(format!(
                        "p(o|λ,m) for ('{}', '{}') is not over the outcome alphabet",
                        ontic_space[li], m_alphabet[mi]
                    )));
                }
                if dist.mode() != mode {
                    return Err(Error::MixedMode("auxiliary channel"));
                }
                if !dist.is_normalized(DEFAULT_TOLERANCE) {
                    return Err(Error::NotNormalized {
                        what: format!("p(o|λ,m) for ('{}', '{}')", ontic_space[li], m_alphabet[mi]),
                        sum: dist.total().as_f64(),
                    });
                }
            }
        }
        Ok(AuxChannel {
            contexts,
            ontic_space,
            outcome_alphabet,
            m_alphabet,
            context_to_m,
            mediated_response,
            mode,
        })
    }

    /// The maximal channel M = C: every context gets its own symbol and
    /// the mediated response replays the model's own ξ. Always mediates,
    /// at cost H(C).
    pub fn identity_for(model: &SingleStateModel) -> Result<AuxChannel> {
        let contexts = model.contexts().to_vec();
        let mode = model.mode();
        let context_to_m = contexts
            .iter()
            .map(|c| Dist::point_mass(contexts.clone(), c, mode))
            .collect::<Result<Vec<_>>>()?;
        let mediated_response = (0..model.ontic_space().len())
            .map(|li| {
                (0..contexts.len())
                    .map(|ci| model.response(ci, li).clone())
                    .collect()
            })
            .collect();
        AuxChannel::new(
            contexts.clone(),
            model.ontic_space().to_vec(),
            model.outcome_alphabet().to_vec(),
            contexts,
            context_to_m,
            mediated_response,
        )
    }

    pub fn contexts(&self) -> &[String] {
        &self.contexts
    }

    pub fn ontic_space(&self) -> &[String] {
        &self.ontic_space
    }

    pub fn outcome_alphabet(&self) -> &[String] {
        &self.outcome_alphabet
    }

    pub fn m_alphabet(&self) -> &[String] {
        &self.m_alphabet
    }

    /// p(m|c) by context index.
    pub fn context_to_m(&self, ctx_idx: usize) -> &Dist {
        &self.context_to_m[ctx_idx]
    }

    /// p(o|λ,m) by ontic and M indices.
    pub fn mediated_response(&self, lambda_idx: usize, m_idx: usize) -> &Dist {
        &self.mediated_response[lambda_idx][m_idx]
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Marginal p(m) = Σ_c p(c)·p(m|c) under the given context prior.
    pub fn m_marginal(&self, prior: &Dist) -> Result<Dist> {
        if prior.labels() != self.contexts.as_slice() {
            return Err(Error::Structural(
                "prior is not over the channel's contexts".into(),
            ));
        }
        let mut mass = vec![Prob::zero(self.mode); self.m_alphabet.len()];
        for (ci, _) in self.contexts.iter().enumerate() {
            let pc = prior.mass(ci);
            for (mi, m) in mass.iter_mut().enumerate() {
                *m = m.add(&pc.mul(self.context_to_m[ci].mass(mi)));
            }
        }
        Dist::new(self.m_alphabet.clone(), mass)
    }

    /// Composite response Σ_m p(m|c)·p(o|λ,m) for one (context, λ) pair.
    fn composite_response(&self, ctx_idx: usize, lambda_idx: usize) -> Result<Dist> {
        let mut mass = vec![Prob::zero(self.mode); self.outcome_alphabet.len()];
        for (mi, _) in self.m_alphabet.iter().enumerate() {
            let pm = self.context_to_m[ctx_idx].mass(mi);
            let resp = &self.mediated_response[lambda_idx][mi];
            for (oi, m) in mass.iter_mut().enumerate() {
                *m = m.add(&pm.mul(resp.mass(oi)));
            }
        }
        Dist::new(self.outcome_alphabet.clone(), mass)
    }
}

fn ensure_compatible(model: &SingleStateModel, channel: &AuxChannel) -> Result<()> {
    if channel.contexts() != model.contexts() {
        return Err(Error::Structural(
            "channel and model disagree on the context list".into(),
        ));
    }
    if channel.ontic_space() != model.ontic_space() {
        return Err(Error::Structural(
            "channel and model disagree on the ontic space".into(),
        ));
    }
    if channel.outcome_alphabet() != model.outcome_alphabet() {
        return Err(Error::Structural(
            "channel and model disagree on the outcome alphabet".into(),
        ));
    }
    Ok(())
}

/// Outcome of a mediation check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediationReport {
    /// Worst |composite − ξ| over all (c, λ, o) cells.
    pub max_deviation: f64,
    pub ok: bool,
}

/// Verifies that the channel's composite response reproduces the model's
/// responses: Σ_m p(m|c)·p(o|λ,m) = ξ(o|c,λ) for every (c, λ, o).
/// Exact pairs must match exactly; float pairs within `tol`.
pub fn check_mediation(
    model: &SingleStateModel,
    channel: &AuxChannel,
    tol: f64,
) -> Result<MediationReport> {
    ensure_compatible(model, channel)?;
    let mut max_deviation = 0.0f64;
    let mut ok = true;
    for ci in 0..model.contexts().len() {
        for li in 0..model.ontic_space().len() {
            let composite = channel.composite_response(ci, li)?;
            let stated = model.response(ci, li);
            max_deviation = max_deviation.max(composite.max_deviation(stated));
            ok &= composite.matches(stated, tol);
        }
    }
    Ok(MediationReport { max_deviation, ok })
}

/// H(M) in bits under the model's context prior. Refuses (with the
/// measured deviation) if the channel does not mediate the model.
pub fn channel_cost(model: &SingleStateModel, channel: &AuxChannel, tol: f64) -> Result<f64> {
    let mediation = check_mediation(model, channel, tol)?;
    if !mediation.ok {
        return Err(Error::MediationFailed {
            max_deviation: mediation.max_deviation,
        });
    }
    entropy(&channel.m_marginal(model.context_prior())?)
}

/// The joint law p(c,λ,m,o) = p(c)·μ(λ)·p(m|c)·p(o|λ,m) of the mediated
/// process, over variables `C`, `lambda`, `M`, `O`.
pub fn extended_joint(model: &SingleStateModel, channel: &AuxChannel) -> Result<JointTable> {
    ensure_compatible(model, channel)?;
    let vars = vec![
        Variable::new("C", model.contexts().to_vec())?,
        Variable::new("lambda", model.ontic_space().to_vec())?,
        Variable::new("M", channel.m_alphabet().to_vec())?,
        Variable::new("O", model.outcome_alphabet().to_vec())?,
    ];
    JointTable::from_fn(vars, |idx| {
        let (ci, li, mi, oi) = (idx[0], idx[1], idx[2], idx[3]);
        model
            .context_prior()
            .mass(ci)
            .mul(model.preparation().mass(li))
            .mul(channel.context_to_m(ci).mass(mi))
            .mul(channel.mediated_response(li, mi).mass(oi))
    })
}

/// The quantities of the cost bound, all in bits.
#[derive(Debug, Clone, PartialEq)]
pub struct CostReport {
    /// I(C;O|λ) on the model's own joint law.
    pub i_c_o_given_lambda: f64,
    /// I(C;M|λ) on the extended joint (equals I(C;M) here, as λ ⊥ (C,M)).
    pub i_c_m_given_lambda: f64,
    /// H(M) under the model's context prior.
    pub h_m: f64,
    /// h_m ≥ i_c_o_given_lambda − BOUND_TOL.
    pub bound_satisfied: bool,
    /// |h_m − i_c_o_given_lambda| ≤ SATURATION_TOL.
    pub saturated: bool,
    /// Worst mediation deviation measured while checking the channel.
    pub reproduction_max_deviation: f64,
}

/// Computes I(C;O|λ) from the model, and I(C;M|λ) and H(M) from the
/// extended joint, then checks the bound and saturation. Refuses
/// non-mediating channels.
pub fn verify_bound(
    model: &SingleStateModel,
    channel: &AuxChannel,
    tol: f64,
) -> Result<CostReport> {
    let mediation = check_mediation(model, channel, tol)?;
    if !mediation.ok {
        return Err(Error::MediationFailed {
            max_deviation: mediation.max_deviation,
        });
    }
    let i_c_o_given_lambda = model.contextual_dependence()?;
    let ext = extended_joint(model, channel)?;
    let i_c_m_given_lambda = conditional_mutual_information(&ext, "C", "M", "lambda")?;
    let h_m = joint_entropy(&ext.marginalize(&["M"])?)?;
    Ok(CostReport {
        i_c_o_given_lambda,
        i_c_m_given_lambda,
        h_m,
        bound_satisfied: h_m >= i_c_o_given_lambda - BOUND_TOL,
        saturated: (h_m - i_c_o_given_lambda).abs() <= SATURATION_TOL,
        reproduction_max_deviation: mediation.max_deviation,
    })
}

/// Cheapest deterministic mediating channel: contexts are partitioned into
/// cells with identical response families ξ(·|c,·) (exact equality in
/// exact mode, entrywise `tol` in float mode), M is the cell index, and
/// each cell's shared family becomes the mediated response. Returns the
/// channel and its cost report.
pub fn minimal_deterministic_cost(
    model: &SingleStateModel,
    tol: f64,
) -> Result<(AuxChannel, CostReport)> {
    let contexts = model.contexts();
    let lambdas = model.ontic_space().len();

    // First-fit partition by response family; cell order follows first
    // appearance, so the result is deterministic.
    let mut representatives: Vec<usize> = Vec::new();
    let mut cell_of: Vec<usize> = Vec::with_capacity(contexts.len());
    for ci in 0..contexts.len() {
        let found = representatives.iter().position(|&rep| {
            (0..lambdas).all(|li| model.response(ci, li).matches(model.response(rep, li), tol))
        });
        match found {
            Some(cell) => cell_of.push(cell),
            None => {
                representatives.push(ci);
                cell_of.push(representatives.len() - 1);
            }
        }
    }

    let m_alphabet: Vec<String> = (0..representatives.len()).map(|i| i.to_string()).collect();
    let mode = model.mode();
    let context_to_m = cell_of
        .iter()
        .map(|&cell| Dist::point_mass(m_alphabet.clone(), &m_alphabet[cell], mode))
        .collect::<Result<Vec<_>>>()?;
    let mediated_response = (0..lambdas)
        .map(|li| {
            representatives
                .iter()
                .map(|&rep| model.response(rep, li).clone())
                .collect()
        })
        .collect();
    let channel = AuxChannel::new(
        contexts.to_vec(),
        model.ontic_space().to_vec(),
        model.outcome_alphabet().to_vec(),
        m_alphabet,
        context_to_m,
        mediated_response,
    )?;
    let report = verify_bound(model, &channel, tol)?;
    Ok((channel, report))
}
