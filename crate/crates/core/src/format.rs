//! JSON file formats for empirical models, ontological models, and
//! auxiliary channels, plus the probability-string conventions shared by
//! all of them.
//!
//! Probabilities are *strings*: either `"p/q"` rationals or plain decimals
//! like `"0.25"`, so exact values survive the text format. In exact mode
//! both forms parse to exact rationals (decimals become numerator over a
//! power of ten); in float mode both parse to binary64. Rendering is
//! canonical — reduced rationals, shortest round-trip decimals, sorted
//! object keys, dense cell maps — so serialize → parse → serialize is
//! byte-identical.
//!
//! Container keys follow the context-key/tuple-key convention: a context
//! is its observable names joined by `|`, an outcome tuple its outcomes
//! joined by `,`. Parse errors name the offending JSON path.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use serde_json::{Map, Value};

use crate::context_cost::AuxChannel;
use crate::infotheory::{Dist, JointTable, Mode, Prob, Variable};
use crate::ontmodel::SingleStateModel;
use crate::scenario::{EmpiricalModel, Scenario};
use crate::{Error, Result};

/// Canonical key for an outcome tuple: outcomes joined by `,`.
pub fn tuple_key<S: AsRef<str>>(outcomes: &[S]) -> String {
    outcomes
        .iter()
        .map(|s| s.as_ref())
        .collect::<Vec<_>>()
        .join(",")
}

fn parse_err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        path: if path.is_empty() { "$".to_string() } else { path.to_string() },
        message: message.into(),
    }
}

/// Parses a probability string — `"p/q"` or decimal — in the given mode.
pub fn parse_prob(text: &str, mode: Mode) -> Result<Prob> {
    let s = text.trim();
    if s.is_empty() {
        return Err(Error::InvalidProbability(text.to_string()));
    }
    if let Some((num, den)) = s.split_once('/') {
        let (num, den) = (num.trim(), den.trim());
        match mode {
            Mode::Exact => {
                let n: BigInt = num
                    .parse()
                    .map_err(|_| Error::InvalidProbability(text.to_string()))?;
                let d: BigInt = den
                    .parse()
                    .map_err(|_| Error::InvalidProbability(text.to_string()))?;
                if d.is_zero() {
                    return Err(Error::InvalidProbability(text.to_string()));
                }
                Prob::from_ratio(BigRational::new(n, d))
            }
            Mode::Float => {
                let n: f64 = num
                    .parse()
                    .map_err(|_| Error::InvalidProbability(text.to_string()))?;
                let d: f64 = den
                    .parse()
                    .map_err(|_| Error::InvalidProbability(text.to_string()))?;
                Prob::from_f64(n / d)
            }
        }
    } else {
        match mode {
            Mode::Exact => parse_exact_decimal(s).map_err(|_| Error::InvalidProbability(text.to_string())),
            Mode::Float => s
                .parse()
                .map_err(|_| Error::InvalidProbability(text.to_string()))
                .and_then(Prob::from_f64),
        }
    }
}

/// Decimal string to exact rational: digits over a power of ten.
fn parse_exact_decimal(s: &str) -> Result<Prob> {
    let (int_part, frac_part) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    let all_digits =
        |t: &str| !t.is_empty() && t.chars().all(|c| c.is_ascii_digit());
    let ok = match (int_part.is_empty(), frac_part.is_empty()) {
        (false, false) => all_digits(int_part) && all_digits(frac_part),
        (false, true) => all_digits(int_part),
        (true, false) => all_digits(frac_part),
        (true, true) => false,
    };
    if !ok {
        return Err(Error::InvalidProbability(s.to_string()));
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().expect("digit string");
    let denom = BigInt::from(10u8).pow(frac_part.len() as u32);
    Prob::from_ratio(BigRational::new(numer, denom))
}

/// Canonical probability string: reduced `"p/q"` (plain integer when the
/// denominator is 1) for exact values, shortest round-trip decimal for
/// floats.
pub fn render_prob(p: &Prob) -> String {
    match p {
        Prob::Exact(r) => {
            if r.denom().is_one() {
                r.numer().to_string()
            } else {
                format!("{}/{}", r.numer(), r.denom())
            }
        }
        Prob::Float(v) => format!("{v}"),
    }
}

/// A float rounded to 12 significant digits as a JSON number (reports pin
/// their numeric precision there so repeated runs are byte-identical).
pub fn sig12(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("rounded float");
    let rounded = if rounded == 0.0 { 0.0 } else { rounded };
    match serde_json::Number::from_f64(rounded) {
        Some(n) => Value::Number(n),
        None => Value::Null,
    }
}

fn as_obj<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(path, "expected an object"))
}

fn as_arr<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(path, "expected an array"))
}

fn as_string(v: &Value, path: &str) -> Result<String> {
    v.as_str()
        .map(str::to_string)
        .ok_or_else(|| parse_err(path, "expected a string"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| parse_err(&join(path, key), "missing field"))
}

fn join(path: &str, key: &str) -> String {
    if path.is_empty() {
        key.to_string()
    } else {
        format!("{path}.{key}")
    }
}

fn prob_field(v: &Value, path: &str, mode: Mode) -> Result<Prob> {
    let s = v.as_str().ok_or_else(|| {
        parse_err(path, "probabilities must be strings like \"1/4\" or \"0.25\"")
    })?;
    parse_prob(s, mode).map_err(|e| parse_err(path, e.to_string()))
}

fn parse_root(text: &str) -> Result<Map<String, Value>> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| parse_err("", format!("invalid JSON: {e}")))?;
    Ok(as_obj(&root, "")?.clone())
}

fn string_list(v: &Value, path: &str) -> Result<Vec<String>> {
    as_arr(v, path)?
        .iter()
        .enumerate()
        .map(|(i, s)| as_string(s, &format!("{path}[{i}]")))
        .collect()
}

fn scenario_from_obj(root: &Map<String, Value>) -> Result<Scenario> {
    let mut observables = Vec::new();
    for (i, item) in as_arr(field(root, "observables", "")?, "observables")?
        .iter()
        .enumerate()
    {
        let path = format!("observables[{i}]");
        let obj = as_obj(item, &path)?;
        let name = as_string(field(obj, "name", &path)?, &join(&path, "name"))?;
        let outcomes = string_list(field(obj, "outcomes", &path)?, &join(&path, "outcomes"))?;
        observables.push(Variable::new(name, outcomes)?);
    }
    let mut contexts = Vec::new();
    for (i, item) in as_arr(field(root, "contexts", "")?, "contexts")?
        .iter()
        .enumerate()
    {
        contexts.push(string_list(item, &format!("contexts[{i}]"))?);
    }
    Scenario::new(observables, contexts)
}

/// All outcome-tuple keys of one context, in row-major cell order.
fn context_tuples(scenario: &Scenario, ctx_idx: usize) -> Vec<String> {
    let vars = scenario.context_variables(ctx_idx);
    let shape: Vec<usize> = vars.iter().map(|v| v.alphabet.len()).collect();
    let count: usize = shape.iter().product();
    let mut idx = vec![0usize; shape.len()];
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let labels: Vec<&str> = vars
            .iter()
            .zip(&idx)
            .map(|(v, &oi)| v.alphabet[oi].as_str())
            .collect();
        out.push(tuple_key(&labels));
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < shape[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    out
}

fn tables_from_obj(
    root: &Map<String, Value>,
    scenario: &Scenario,
    mode: Mode,
) -> Result<Vec<JointTable>> {
    let tables = as_obj(field(root, "tables", "")?, "tables")?;
    let known: BTreeSet<String> = (0..scenario.contexts().len())
        .map(|ci| scenario.context_key(ci))
        .collect();
    for key in tables.keys() {
        if !known.contains(key) {
            return Err(parse_err(&format!("tables.{key}"), "no such context"));
        }
    }
    let mut out = Vec::with_capacity(scenario.contexts().len());
    for ci in 0..scenario.contexts().len() {
        let key = scenario.context_key(ci);
        let path = format!("tables.{key}");
        let cells = as_obj(
            tables
                .get(&key)
                .ok_or_else(|| parse_err(&path, "missing table for context"))?,
            &path,
        )?;
        let tuples = context_tuples(scenario, ci);
        let valid: BTreeSet<&str> = tuples.iter().map(String::as_str).collect();
        for cell_key in cells.keys() {
            if !valid.contains(cell_key.as_str()) {
                return Err(parse_err(
                    &format!("{path}.{cell_key}"),
                    "no such outcome tuple in this context",
                ));
            }
        }
        let mut parsed: BTreeMap<&str, Prob> = BTreeMap::new();
        for (cell_key, value) in cells {
            parsed.insert(
                cell_key.as_str(),
                prob_field(value, &format!("{path}.{cell_key}"), mode)?,
            );
        }
        let mut flat = Vec::with_capacity(tuples.len());
        for t in &tuples {
            flat.push(parsed.get(t.as_str()).cloned().unwrap_or(Prob::zero(mode)));
        }
        out.push(JointTable::new(scenario.context_variables(ci), flat)?);
    }
    Ok(out)
}

/// Parses an empirical-model file. Construction only; run
/// [`EmpiricalModel::validate`] separately.
pub fn parse_empirical(text: &str, mode: Mode) -> Result<EmpiricalModel> {
    let root = parse_root(text)?;
    let scenario = scenario_from_obj(&root)?;
    let tables = tables_from_obj(&root, &scenario, mode)?;
    EmpiricalModel::new(scenario, tables)
}

fn empirical_value(model: &EmpiricalModel) -> Value {
    let scenario = model.scenario();
    let observables: Vec<Value> = scenario
        .observables()
        .iter()
        .map(|v| {
            let mut obj = Map::new();
            obj.insert("name".into(), Value::String(v.name.clone()));
            obj.insert(
                "outcomes".into(),
                Value::Array(v.alphabet.iter().cloned().map(Value::String).collect()),
            );
            Value::Object(obj)
        })
        .collect();
    let contexts: Vec<Value> = scenario
        .contexts()
        .iter()
        .map(|ctx| Value::Array(ctx.iter().cloned().map(Value::String).collect()))
        .collect();
    let mut tables = Map::new();
    for (ci, table) in model.tables().iter().enumerate() {
        let mut cells = Map::new();
        for (idx, p) in table.iter() {
            let labels: Vec<&str> = table
                .variables()
                .iter()
                .zip(&idx)
                .map(|(v, &oi)| v.alphabet[oi].as_str())
                .collect();
            cells.insert(tuple_key(&labels), Value::String(render_prob(p)));
        }
        tables.insert(scenario.context_key(ci), Value::Object(cells));
    }
    let mut root = Map::new();
    root.insert("observables".into(), Value::Array(observables));
    root.insert("contexts".into(), Value::Array(contexts));
    root.insert("tables".into(), Value::Object(tables));
    Value::Object(root)
}

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report value serializes");
    s.push('\n');
    s
}

/// Canonical empirical-model file text.
pub fn render_empirical(model: &EmpiricalModel) -> String {
    to_text(&empirical_value(model))
}

fn dist_from_obj(
    value: &Value,
    path: &str,
    labels: &[String],
    mode: Mode,
) -> Result<Dist> {
    let obj = as_obj(value, path)?;
    let known: BTreeSet<&str> = labels.iter().map(String::as_str).collect();
    for key in obj.keys() {
        if !known.contains(key.as_str()) {
            return Err(parse_err(&join(path, key), "unknown symbol"));
        }
    }
    let mut mass = Vec::with_capacity(labels.len());
    for label in labels {
        mass.push(match obj.get(label) {
            Some(v) => prob_field(v, &join(path, label), mode)?,
            None => Prob::zero(mode),
        });
    }
    Dist::new(labels.to_vec(), mass)
}

fn dist_to_obj(d: &Dist) -> Value {
    let mut obj = Map::new();
    for (i, label) in d.labels().iter().enumerate() {
        obj.insert(label.clone(), Value::String(render_prob(d.mass(i))));
    }
    Value::Object(obj)
}

/// Shared outcome alphabet of a scenario-backed ontological model: every
/// context's tuple keys, in first-appearance order.
pub fn shared_outcome_alphabet(scenario: &Scenario) -> Vec<String> {
    let mut alphabet: Vec<String> = Vec::new();
    for ci in 0..scenario.contexts().len() {
        for t in context_tuples(scenario, ci) {
            if !alphabet.contains(&t) {
                alphabet.push(t);
            }
        }
    }
    alphabet
}

/// Parses an ontological-model file: the empirical layer plus
/// (Λ, μ, prior, ξ). The model's contexts are the context keys in file
/// order and its outcomes are the union of tuple keys
/// ([`shared_outcome_alphabet`]); a missing `prior` means uniform.
pub fn parse_ontological(text: &str, mode: Mode) -> Result<(EmpiricalModel, SingleStateModel)> {
    let root = parse_root(text)?;
    let scenario = scenario_from_obj(&root)?;
    let tables = tables_from_obj(&root, &scenario, mode)?;
    let empirical = EmpiricalModel::new(scenario, tables)?;
    let scenario = empirical.scenario();

    let lambda = string_list(field(&root, "lambda", "")?, "lambda")?;
    if lambda.is_empty() {
        return Err(parse_err("lambda", "ontic space must not be empty"));
    }
    let mu = dist_from_obj(field(&root, "mu", "")?, "mu", &lambda, mode)?;

    let ctx_keys: Vec<String> = (0..scenario.contexts().len())
        .map(|ci| scenario.context_key(ci))
        .collect();
    let prior = match root.get("prior") {
        Some(v) => dist_from_obj(v, "prior", &ctx_keys, mode)?,
        None => Dist::uniform(ctx_keys.clone(), mode)?,
    };

    let alphabet = shared_outcome_alphabet(scenario);
    let responses_obj = as_obj(field(&root, "responses", "")?, "responses")?;
    let known_ctx: BTreeSet<&str> = ctx_keys.iter().map(String::as_str).collect();
    for key in responses_obj.keys() {
        if !known_ctx.contains(key.as_str()) {
            return Err(parse_err(&format!("responses.{key}"), "no such context"));
        }
    }
    let known_lambda: BTreeSet<&str> = lambda.iter().map(String::as_str).collect();
    let mut map: BTreeMap<(String, String), Dist> = BTreeMap::new();
    for (ctx, block) in responses_obj {
        let path = format!("responses.{ctx}");
        let block = as_obj(block, &path)?;
        for key in block.keys() {
            if !known_lambda.contains(key.as_str()) {
                return Err(parse_err(&join(&path, key), "no such ontic state"));
            }
        }
        for (l, dist_val) in block {
            let dist = dist_from_obj(dist_val, &join(&path, l), &alphabet, mode)?;
            map.insert((ctx.clone(), l.clone()), dist);
        }
    }
    let model = SingleStateModel::from_response_map(lambda, mu, prior, alphabet, &map)?;
    Ok((empirical, model))
}

/// Canonical ontological-model file text. The model's contexts must be the
/// empirical model's context keys.
pub fn render_ontological(empirical: &EmpiricalModel, model: &SingleStateModel) -> String {
    let mut root = match empirical_value(empirical) {
        Value::Object(m) => m,
        _ => unreachable!("empirical_value returns an object"),
    };
    root.insert(
        "lambda".into(),
        Value::Array(
            model
                .ontic_space()
                .iter()
                .cloned()
                .map(Value::String)
                .collect(),
        ),
    );
    root.insert("mu".into(), dist_to_obj(model.preparation()));
    root.insert("prior".into(), dist_to_obj(model.context_prior()));
    let mut responses = Map::new();
    for (ci, ctx) in model.contexts().iter().enumerate() {
        let mut block = Map::new();
        for (li, l) in model.ontic_space().iter().enumerate() {
            block.insert(l.clone(), dist_to_obj(model.response(ci, li)));
        }
        responses.insert(ctx.clone(), Value::Object(block));
    }
    root.insert("responses".into(), Value::Object(responses));
    to_text(&Value::Object(root))
}

/// Parses a channel file against the model it is meant to mediate; the
/// context, ontic, and outcome alphabets come from the model.
pub fn parse_channel(text: &str, mode: Mode, model: &SingleStateModel) -> Result<AuxChannel> {
    let root = parse_root(text)?;
    let m_alphabet = string_list(field(&root, "m_alphabet", "")?, "m_alphabet")?;

    let pmc = as_obj(field(&root, "p_m_given_c", "")?, "p_m_given_c")?;
    let known_ctx: BTreeSet<&str> = model.contexts().iter().map(String::as_str).collect();
    for key in pmc.keys() {
        if !known_ctx.contains(key.as_str()) {
            return Err(parse_err(&format!("p_m_given_c.{key}"), "no such context"));
        }
    }
    let mut context_to_m = Vec::with_capacity(model.contexts().len());
    for ctx in model.contexts() {
        let path = format!("p_m_given_c.{ctx}");
        let value = pmc
            .get(ctx)
            .ok_or_else(|| parse_err(&path, "missing distribution for context"))?;
        context_to_m.push(dist_from_obj(value, &path, &m_alphabet, mode)?);
    }

    let resp = as_obj(field(&root, "response", "")?, "response")?;
    let known_lambda: BTreeSet<&str> = model.ontic_space().iter().map(String::as_str).collect();
    for key in resp.keys() {
        if !known_lambda.contains(key.as_str()) {
            return Err(parse_err(&format!("response.{key}"), "no such ontic state"));
        }
    }
    let outcome_alphabet = model.outcome_alphabet().to_vec();
    let mut mediated_response = Vec::with_capacity(model.ontic_space().len());
    for l in model.ontic_space() {
        let path = format!("response.{l}");
        let block = as_obj(
            resp.get(l)
                .ok_or_else(|| parse_err(&path, "missing responses for ontic state"))?,
            &path,
        )?;
        let known_m: BTreeSet<&str> = m_alphabet.iter().map(String::as_str).collect();
        for key in block.keys() {
            if !known_m.contains(key.as_str()) {
                return Err(parse_err(&join(&path, key), "no such M symbol"));
            }
        }
        let mut row = Vec::with_capacity(m_alphabet.len());
        for m in &m_alphabet {
            let mpath = join(&path, m);
            let value = block
                .get(m)
                .ok_or_else(|| parse_err(&mpath, "missing response for M symbol"))?;
            row.push(dist_from_obj(value, &mpath, &outcome_alphabet, mode)?);
        }
        mediated_response.push(row);
    }

    AuxChannel::new(
        model.contexts().to_vec(),
        model.ontic_space().to_vec(),
        outcome_alphabet,
        m_alphabet,
        context_to_m,
        mediated_response,
    )
}

/// Canonical channel file text.
pub fn render_channel(channel: &AuxChannel) -> String {
    to_text(&channel_value(channel))
}

/// JSON value form of a channel file (what [`render_channel`] prints).
pub fn channel_value(channel: &AuxChannel) -> Value {
    let mut root = Map::new();
    root.insert(
        "m_alphabet".into(),
        Value::Array(
            channel
                .m_alphabet()
                .iter()
                .cloned()
                .map(Value::String)
                .collect(),
        ),
    );
    let mut pmc = Map::new();
    for (ci, ctx) in channel.contexts().iter().enumerate() {
        pmc.insert(ctx.clone(), dist_to_obj(channel.context_to_m(ci)));
    }
    root.insert("p_m_given_c".into(), Value::Object(pmc));
    let mut resp = Map::new();
    for (li, l) in channel.ontic_space().iter().enumerate() {
        let mut block = Map::new();
        for (mi, m) in channel.m_alphabet().iter().enumerate() {
            block.insert(m.clone(), dist_to_obj(channel.mediated_response(li, mi)));
        }
        resp.insert(l.clone(), Value::Object(block));
    }
    root.insert("response".into(), Value::Object(resp));
    Value::Object(root)
}

/// Parses a prior-override file: an object mapping context keys to
/// probability strings (missing contexts get zero).
pub fn parse_prior(text: &str, contexts: &[String], mode: Mode) -> Result<Dist> {
    let root: Value = serde_json::from_str(text)
        .map_err(|e| parse_err("", format!("invalid JSON: {e}")))?;
    dist_from_obj(&root, "", contexts, mode)
}
