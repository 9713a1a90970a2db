//! `contextcost` — analyze contextuality of empirical models and the
//! information cost of mediating context dependence.
//!
//! Subcommands: `analyze` (global-joint feasibility with witness or
//! certificate), `cost` (minimal deterministic mediation cost), `verify`
//! (check a channel mediates a model and the H(M) bound), `examples`
//! (write canonical model files).
//!
//! Exit codes are a stable contract: 0 = success/feasible, 2 = invalid
//! input, 10 = contextual (no global joint), 11 = mediation failure.
//! Reports go to stdout, diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;
use num::One;
use serde_json::{Map, Value};

use contextcost::context_cost::{minimal_deterministic_cost, verify_bound, AuxChannel, CostReport};
use contextcost::format::{self, render_prob, sig12};
use contextcost::marginal_solver::{
    check_certificate, global_joint_exists, snap_to_rational, verify_witness, Certificate,
    Feasibility, FeasibilityResult, SolverOptions,
};
use contextcost::ontmodel::{xor_example, InterventionBit, SingleStateModel};
use contextcost::quantum_witness::{chsh_model, TSIRELSON_ANGLES};
use contextcost::scenario::{EmpiricalModel, Scenario, ValidationReport};
use contextcost::{Dist, Error, JointTable, Mode, Prob, Variable};

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 2;
const EXIT_CONTEXTUAL: u8 = 10;
const EXIT_MEDIATION: u8 = 11;

#[derive(Parser)]
#[command(
    name = "contextcost",
    version,
    about = "Contextuality analysis and the information cost of context dependence"
)]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// Arithmetic mode for probabilities in input files
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Exact)]
    mode: ModeArg,
    /// Tolerance for float comparisons and validation
    #[arg(long, global = true, default_value_t = contextcost::DEFAULT_TOLERANCE)]
    tol: f64,
    /// Logarithm base for entropies and mutual informations
    #[arg(long, global = true, default_value_t = 2.0)]
    base: f64,
    /// Context-prior override: "uniform" or a path to a JSON weight file
    #[arg(long, global = true)]
    prior: Option<String>,
    /// Cap on enumerated deterministic global assignments
    #[arg(long, global = true, default_value_t = contextcost::DEFAULT_ASSIGNMENT_CAP)]
    cap: u64,
    /// Report format
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Text)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an empirical model admits a global joint distribution
    Analyze {
        /// Empirical-model JSON file
        model: PathBuf,
    },
    /// Compute the minimal deterministic mediation cost of an ontological model
    Cost {
        /// Ontological-model JSON file
        model: PathBuf,
    },
    /// Check that a channel mediates a model and verify H(M) >= I(C;O|lambda)
    Verify {
        /// Ontological-model JSON file
        model: PathBuf,
        /// Channel JSON file
        channel: PathBuf,
    },
    /// Write a canonical example model file
    Examples {
        /// Example name: xor, triangle, or chsh
        name: String,
        /// Output path (default <name>.json)
        out: Option<PathBuf>,
    },
}

struct RunConfig {
    mode: Mode,
    tol: f64,
    base: f64,
    prior: Option<String>,
    cap: u64,
    format: FormatArg,
}

impl RunConfig {
    fn new(args: &ConfigArgs) -> contextcost::Result<Self> {
        // `is_finite` guards reject NaN (and infinities) explicitly.
        if !args.tol.is_finite() || args.tol <= 0.0 {
            return Err(Error::Structural(format!(
                "--tol must be positive, got {}",
                args.tol
            )));
        }
        if args.cap < 1 {
            return Err(Error::Structural("--cap must be at least 1".into()));
        }
        if !args.base.is_finite() || args.base <= 0.0 || args.base == 1.0 {
            return Err(Error::Structural(format!(
                "--base must be positive and different from 1, got {}",
                args.base
            )));
        }
        Ok(RunConfig {
            mode: match args.mode {
                ModeArg::Exact => Mode::Exact,
                ModeArg::Float => Mode::Float,
            },
            tol: args.tol,
            base: args.base,
            prior: args.prior.clone(),
            cap: args.cap,
            format: args.format,
        })
    }

    /// Converts a base-2 information quantity to the configured base.
    fn to_base(&self, bits: f64) -> f64 {
        if self.base == 2.0 {
            bits
        } else {
            bits / self.base.log2()
        }
    }

    fn unit(&self) -> String {
        if self.base == 2.0 {
            "bits".to_string()
        } else if (self.base - std::f64::consts::E).abs() < 1e-12 {
            "nats".to_string()
        } else {
            format!("log-{}-units", self.base)
        }
    }

    fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            assignment_cap: self.cap,
            max_denominator: contextcost::DEFAULT_MAX_DENOMINATOR,
            tol: self.tol,
        }
    }

    fn mode_name(&self) -> &'static str {
        match self.mode {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}

fn run(cli: Cli) -> contextcost::Result<u8> {
    let cfg = RunConfig::new(&cli.config)?;
    match &cli.command {
        Command::Analyze { model } => cmd_analyze(model, &cfg),
        Command::Cost { model } => cmd_cost(model, &cfg),
        Command::Verify { model, channel } => cmd_verify(model, channel, &cfg),
        Command::Examples { name, out } => cmd_examples(name, out.as_deref()),
    }
}

fn read_file(path: &Path) -> contextcost::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

fn fnum(x: f64) -> String {
    format!("{x:.12}")
}

fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Appends a formatted line to a report buffer (string writes cannot fail).
macro_rules! outln {
    ($buf:expr, $($arg:tt)*) => {{
        use std::fmt::Write as _;
        let _ = writeln!($buf, $($arg)*);
    }};
}

fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Writes a finished report to stdout. A broken pipe means the consumer
/// stopped reading; treat that as a truncated-but-successful write.
fn emit(report: &str) {
    use std::io::Write as _;
    let mut out = std::io::stdout().lock();
    let result = out.write_all(report.as_bytes()).and_then(|_| out.flush());
    if let Err(e) = result {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: failed to write report: {e}");
        }
    }
}

fn max_normalization_deviation(v: &ValidationReport) -> f64 {
    v.normalization
        .iter()
        .map(|n| (n.total - 1.0).abs())
        .fold(0.0, f64::max)
}

fn max_disturbance_deviation(v: &ValidationReport) -> f64 {
    v.disturbance
        .iter()
        .map(|d| d.max_deviation)
        .fold(0.0, f64::max)
}

fn report_validation_failure(validation: &ValidationReport) {
    eprintln!("error: empirical model failed validation");
    for n in &validation.normalization {
        if !n.ok {
            eprintln!("  context {}: total mass {}", n.context, n.total);
        }
    }
    for d in &validation.disturbance {
        if !d.ok {
            eprintln!(
                "  contexts {} / {} disagree on shared [{}]: max deviation {:.3e}",
                d.context_a,
                d.context_b,
                d.shared.join(","),
                d.max_deviation
            );
        }
    }
}

fn certificate_value(cert: &Certificate) -> Value {
    let mut cells: Map<String, Value> = Map::new();
    for (ctx, tuple, weight) in &cert.cells {
        let entry = cells
            .entry(ctx.clone())
            .or_insert_with(|| Value::Object(Map::new()));
        entry
            .as_object_mut()
            .expect("certificate cell group")
            .insert(tuple.clone(), Value::String(rational_string(weight)));
    }
    let mut obj = Map::new();
    obj.insert("total".into(), Value::String(rational_string(&cert.total)));
    obj.insert("cells".into(), Value::Object(cells));
    Value::Object(obj)
}

fn cmd_analyze(path: &Path, cfg: &RunConfig) -> contextcost::Result<u8> {
    let text = read_file(path)?;
    let model = format::parse_empirical(&text, cfg.mode)?;
    let validation = model.validate(cfg.tol)?;
    if !validation.is_consistent() {
        report_validation_failure(&validation);
        return Ok(EXIT_INVALID);
    }
    // Float tables may carry rounding drift below the tolerance; rescale so
    // normalization is exact before solving. No-op for exact tables.
    let model = model.normalized()?;
    let opts = cfg.solver_options();
    let result = global_joint_exists(&model, &opts)?;

    // Independently re-check whatever artifact we are about to print. The
    // witness reproduces the snapped tables exactly, so against the original
    // cells it can deviate by at most the snap distance.
    let witness_check = match (&result.feasibility, &result.witness) {
        (Feasibility::Feasible, Some(w)) => {
            Some(verify_witness(&model, w, cfg.tol + result.snap_distance)?)
        }
        _ => None,
    };
    let certificate_ok = match (&result.feasibility, &result.certificate) {
        (Feasibility::Infeasible, Some(cert)) => Some(check_certificate(&model, cert, &opts)?),
        _ => None,
    };

    let contextual = result.feasibility == Feasibility::Infeasible;
    let report = match cfg.format {
        FormatArg::Text => {
            analyze_text(&model, &validation, &result, &witness_check, &certificate_ok)
        }
        FormatArg::Json => json_text(&analyze_value(
            cfg,
            &validation,
            &result,
            &witness_check,
            &certificate_ok,
            if contextual { EXIT_CONTEXTUAL } else { EXIT_OK },
        )),
    };
    emit(&report);
    Ok(if contextual { EXIT_CONTEXTUAL } else { EXIT_OK })
}

fn analyze_text(
    model: &EmpiricalModel,
    validation: &ValidationReport,
    result: &FeasibilityResult,
    witness_check: &Option<contextcost::marginal_solver::WitnessCheck>,
    certificate_ok: &Option<bool>,
) -> String {
    let mut s = String::new();
    let scenario = model.scenario();
    outln!(
        s,
        "model: {} observables, {} contexts, {} global assignments",
        scenario.observables().len(),
        scenario.contexts().len(),
        result.assignments
    );
    outln!(
        s,
        "validation: consistent (normalization deviation {:.3e}, no-disturbance deviation {:.3e})",
        max_normalization_deviation(validation),
        max_disturbance_deviation(validation)
    );
    outln!(
        s,
        "solver: {} pivots, snap distance {:.3e}",
        result.pivots,
        result.snap_distance
    );
    match result.feasibility {
        Feasibility::Feasible => {
            outln!(s, "verdict: noncontextual — a global joint distribution exists");
            let names: Vec<&str> = scenario
                .observables()
                .iter()
                .map(|v| v.name.as_str())
                .collect();
            let witness = result.witness.as_ref().expect("feasible implies witness");
            outln!(
                s,
                "witness over ({}): {} assignments with positive weight",
                names.join(","),
                witness.len()
            );
            for (assignment, weight) in witness {
                outln!(s, "  {}  ->  {}", assignment.key(), render_prob(weight));
            }
            if let Some(check) = witness_check {
                outln!(
                    s,
                    "witness check: max deviation {:.3e} ({})",
                    check.max_deviation,
                    if check.ok { "ok" } else { "FAILED" }
                );
            }
        }
        Feasibility::Infeasible => {
            outln!(s, "verdict: contextual — no global joint distribution exists");
            let cert = result
                .certificate
                .as_ref()
                .expect("infeasible implies certificate");
            outln!(
                s,
                "certificate: Farkas multipliers (y . A <= 0 on every assignment column, y . b > 0)"
            );
            outln!(s, "  [total mass]  ->  {}", rational_string(&cert.total));
            for (ctx, tuple, weight) in &cert.cells {
                outln!(s, "  {ctx}  {tuple}  ->  {}", rational_string(weight));
            }
            if let Some(ok) = certificate_ok {
                outln!(
                    s,
                    "certificate check: {}",
                    if *ok { "verified" } else { "FAILED" }
                );
            }
        }
    }
    s
}

fn analyze_value(
    cfg: &RunConfig,
    validation: &ValidationReport,
    result: &FeasibilityResult,
    witness_check: &Option<contextcost::marginal_solver::WitnessCheck>,
    certificate_ok: &Option<bool>,
    exit_code: u8,
) -> Value {
    let mut obj = Map::new();
    obj.insert("command".into(), Value::String("analyze".into()));
    obj.insert("mode".into(), Value::String(cfg.mode_name().into()));
    obj.insert(
        "feasibility".into(),
        Value::String(
            match result.feasibility {
                Feasibility::Feasible => "feasible",
                Feasibility::Infeasible => "infeasible",
            }
            .into(),
        ),
    );
    obj.insert(
        "contextual".into(),
        Value::Bool(result.feasibility == Feasibility::Infeasible),
    );
    let mut val = Map::new();
    val.insert("consistent".into(), Value::Bool(validation.is_consistent()));
    val.insert(
        "max_normalization_deviation".into(),
        sig12(max_normalization_deviation(validation)),
    );
    val.insert(
        "max_disturbance_deviation".into(),
        sig12(max_disturbance_deviation(validation)),
    );
    obj.insert("validation".into(), Value::Object(val));
    obj.insert(
        "assignments".into(),
        Value::Number(u64::try_from(result.assignments).unwrap_or(u64::MAX).into()),
    );
    obj.insert("pivots".into(), Value::Number((result.pivots as u64).into()));
    obj.insert("snap_distance".into(), sig12(result.snap_distance));
    obj.insert(
        "witness".into(),
        match &result.witness {
            Some(w) => {
                let mut map = Map::new();
                for (assignment, weight) in w {
                    map.insert(assignment.key(), Value::String(render_prob(weight)));
                }
                Value::Object(map)
            }
            None => Value::Null,
        },
    );
    obj.insert(
        "witness_check".into(),
        match witness_check {
            Some(check) => {
                let mut map = Map::new();
                map.insert("max_deviation".into(), sig12(check.max_deviation));
                map.insert("ok".into(), Value::Bool(check.ok));
                Value::Object(map)
            }
            None => Value::Null,
        },
    );
    obj.insert(
        "certificate".into(),
        match &result.certificate {
            Some(cert) => certificate_value(cert),
            None => Value::Null,
        },
    );
    obj.insert(
        "certificate_verified".into(),
        match certificate_ok {
            Some(ok) => Value::Bool(*ok),
            None => Value::Null,
        },
    );
    obj.insert("exit_code".into(), Value::Number(exit_code.into()));
    Value::Object(obj)
}

/// Applies the `--prior` override, if any, to a parsed model.
fn apply_prior(model: SingleStateModel, cfg: &RunConfig) -> contextcost::Result<SingleStateModel> {
    match cfg.prior.as_deref() {
        None => Ok(model),
        Some("uniform") => {
            let uniform = Dist::uniform(model.contexts().to_vec(), model.mode())?;
            model.with_prior(uniform)
        }
        Some(path) => {
            let text = read_file(Path::new(path))?;
            let prior = format::parse_prior(&text, model.contexts(), cfg.mode)?;
            model.with_prior(prior)
        }
    }
}

/// Worst gap between the file's empirical tables and the statistics the
/// ontological model reproduces, over all contexts and outcome tuples.
fn reproduction_deviation(
    empirical: &EmpiricalModel,
    model: &SingleStateModel,
) -> contextcost::Result<f64> {
    let scenario = empirical.scenario();
    let alphabet = model.outcome_alphabet();
    let mut worst = 0.0f64;
    for (ci, table) in empirical.tables().iter().enumerate() {
        let key = scenario.context_key(ci);
        let actual = model.statistics_for(&key)?;
        let mut mass = vec![Prob::zero(model.mode()); alphabet.len()];
        for (idx, p) in table.iter() {
            let labels: Vec<&str> = table
                .variables()
                .iter()
                .zip(&idx)
                .map(|(v, &oi)| v.alphabet[oi].as_str())
                .collect();
            let tuple = labels.join(",");
            let pos = alphabet.iter().position(|a| a == &tuple).ok_or_else(|| {
                Error::Structural(format!(
                    "outcome tuple `{tuple}` of context `{key}` is missing from the model's outcome alphabet"
                ))
            })?;
            mass[pos] = p.clone();
        }
        let stated = Dist::new(alphabet.to_vec(), mass)?;
        worst = worst.max(stated.max_deviation(&actual));
    }
    Ok(worst)
}

fn cost_report_value(report: &CostReport, cfg: &RunConfig) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "i_c_o_given_lambda".into(),
        sig12(cfg.to_base(report.i_c_o_given_lambda)),
    );
    obj.insert(
        "i_c_m_given_lambda".into(),
        sig12(cfg.to_base(report.i_c_m_given_lambda)),
    );
    obj.insert("h_m".into(), sig12(cfg.to_base(report.h_m)));
    obj.insert("bound_satisfied".into(), Value::Bool(report.bound_satisfied));
    obj.insert("saturated".into(), Value::Bool(report.saturated));
    obj.insert(
        "reproduction_max_deviation".into(),
        sig12(report.reproduction_max_deviation),
    );
    Value::Object(obj)
}

fn cost_report_text(report: &CostReport, cfg: &RunConfig) -> String {
    let mut s = String::new();
    let unit = cfg.unit();
    outln!(
        s,
        "I(C;O|lambda) = {} {unit}",
        fnum(cfg.to_base(report.i_c_o_given_lambda))
    );
    outln!(
        s,
        "I(C;M|lambda) = {} {unit}",
        fnum(cfg.to_base(report.i_c_m_given_lambda))
    );
    outln!(s, "H(M)          = {} {unit}", fnum(cfg.to_base(report.h_m)));
    outln!(
        s,
        "bound H(M) >= I(C;O|lambda): {}",
        if report.bound_satisfied {
            "satisfied"
        } else {
            "VIOLATED"
        }
    );
    outln!(s, "saturated: {}", if report.saturated { "yes" } else { "no" });
    outln!(
        s,
        "mediation max deviation: {:.3e}",
        report.reproduction_max_deviation
    );
    s
}

/// The context → m map of a deterministic channel.
fn deterministic_assignment(channel: &AuxChannel) -> Vec<(String, String)> {
    channel
        .contexts()
        .iter()
        .enumerate()
        .map(|(ci, ctx)| {
            let d = channel.context_to_m(ci);
            let mut best = 0usize;
            for i in 1..d.len() {
                if d.mass(i).as_f64() > d.mass(best).as_f64() {
                    best = i;
                }
            }
            (ctx.clone(), d.labels()[best].clone())
        })
        .collect()
}

fn cmd_cost(path: &Path, cfg: &RunConfig) -> contextcost::Result<u8> {
    let text = read_file(path)?;
    let (empirical, model) = format::parse_ontological(&text, cfg.mode)?;
    let model = apply_prior(model, cfg)?;

    let validation = empirical.validate(cfg.tol)?;
    if !validation.is_consistent() {
        report_validation_failure(&validation);
        return Ok(EXIT_INVALID);
    }
    let deviation = reproduction_deviation(&empirical, &model)?;
    if deviation > cfg.tol {
        eprintln!(
            "error: ontological model does not reproduce its empirical tables: max deviation {deviation:.3e}"
        );
        return Ok(EXIT_INVALID);
    }

    let (channel, report) = minimal_deterministic_cost(&model, cfg.tol)?;
    let text = match cfg.format {
        FormatArg::Text => {
            let mut s = String::new();
            outln!(
                s,
                "model: {} contexts, {} ontic states, {} outcomes",
                model.contexts().len(),
                model.ontic_space().len(),
                model.outcome_alphabet().len()
            );
            s.push_str(&cost_report_text(&report, cfg));
            outln!(
                s,
                "minimal deterministic channel: {} message symbols",
                channel.m_alphabet().len()
            );
            for (ctx, m) in deterministic_assignment(&channel) {
                outln!(s, "  {ctx}  ->  m={m}");
            }
            s
        }
        FormatArg::Json => {
            let mut obj = Map::new();
            obj.insert("command".into(), Value::String("cost".into()));
            obj.insert("mode".into(), Value::String(cfg.mode_name().into()));
            obj.insert("unit".into(), Value::String(cfg.unit()));
            obj.insert("report".into(), cost_report_value(&report, cfg));
            obj.insert("channel".into(), format::channel_value(&channel));
            obj.insert("exit_code".into(), Value::Number(EXIT_OK.into()));
            json_text(&Value::Object(obj))
        }
    };
    emit(&text);
    Ok(EXIT_OK)
}

fn cmd_verify(model_path: &Path, channel_path: &Path, cfg: &RunConfig) -> contextcost::Result<u8> {
    let (_, model) = format::parse_ontological(&read_file(model_path)?, cfg.mode)?;
    let model = apply_prior(model, cfg)?;
    let channel = format::parse_channel(&read_file(channel_path)?, cfg.mode, &model)?;

    match verify_bound(&model, &channel, cfg.tol) {
        Ok(report) => {
            let text = match cfg.format {
                FormatArg::Text => {
                    let mut s = String::new();
                    outln!(
                        s,
                        "mediation: ok (max deviation {:.3e})",
                        report.reproduction_max_deviation
                    );
                    s.push_str(&cost_report_text(&report, cfg));
                    s
                }
                FormatArg::Json => {
                    let mut obj = Map::new();
                    obj.insert("command".into(), Value::String("verify".into()));
                    obj.insert("mode".into(), Value::String(cfg.mode_name().into()));
                    obj.insert("mediates".into(), Value::Bool(true));
                    obj.insert("unit".into(), Value::String(cfg.unit()));
                    obj.insert("report".into(), cost_report_value(&report, cfg));
                    let code = if report.bound_satisfied { EXIT_OK } else { 1 };
                    obj.insert("exit_code".into(), Value::Number(code.into()));
                    json_text(&Value::Object(obj))
                }
            };
            emit(&text);
            // The bound holds for every mediating channel; a violation
            // would mean a numerical or logic fault, so refuse to exit 0.
            Ok(if report.bound_satisfied { EXIT_OK } else { 1 })
        }
        Err(Error::MediationFailed { max_deviation }) => {
            let text = match cfg.format {
                FormatArg::Text => {
                    format!("mediation: FAILED (max deviation {max_deviation:.3e})\n")
                }
                FormatArg::Json => {
                    let mut obj = Map::new();
                    obj.insert("command".into(), Value::String("verify".into()));
                    obj.insert("mode".into(), Value::String(cfg.mode_name().into()));
                    obj.insert("mediates".into(), Value::Bool(false));
                    obj.insert("max_deviation".into(), sig12(max_deviation));
                    obj.insert("exit_code".into(), Value::Number(EXIT_MEDIATION.into()));
                    json_text(&Value::Object(obj))
                }
            };
            emit(&text);
            eprintln!("error: channel does not mediate the model (max deviation {max_deviation:.3e})");
            Ok(EXIT_MEDIATION)
        }
        Err(other) => Err(other),
    }
}

/// The canonical XOR example: two single-observable binary contexts with
/// uniform statistics, realized by O = lambda XOR f(C) with f(M0)=0,
/// f(M1)=1 and uniform ontic bit.
fn xor_example_text() -> contextcost::Result<String> {
    let scenario = Scenario::new(
        vec![Variable::binary("M0"), Variable::binary("M1")],
        vec![vec!["M0".to_string()], vec!["M1".to_string()]],
    )?;
    let half = Prob::exact(1, 2)?;
    let tables = (0..2)
        .map(|ci| JointTable::from_fn(scenario.context_variables(ci), |_| half.clone()))
        .collect::<contextcost::Result<Vec<_>>>()?;
    let empirical = EmpiricalModel::new(scenario, tables)?;
    let f = InterventionBit::from_pairs(&[("M0", false), ("M1", true)]);
    let prior = Dist::uniform(vec!["M0".to_string(), "M1".to_string()], Mode::Exact)?;
    let model = xor_example(&f, &prior)?;
    Ok(format::render_ontological(&empirical, &model))
}

/// The CHSH model at the Tsirelson angles with each Born cell snapped to an
/// exact rational. Each context table is [q, 1/2-q, 1/2-q, q], so the file
/// is exactly normalized and exactly non-disturbing while staying deep in
/// the infeasible region (|S| is within ~1e-6 of 2*sqrt(2)).
fn chsh_example_text() -> contextcost::Result<String> {
    let born = chsh_model(TSIRELSON_ANGLES)?;
    let half = BigRational::new(1.into(), 2.into());
    let mut tables = Vec::with_capacity(born.tables().len());
    for table in born.tables() {
        let q = snap_to_rational(
            table.cell(&[0, 0]).as_f64(),
            contextcost::DEFAULT_MAX_DENOMINATOR,
        )?;
        let off = &half - &q;
        let cells = vec![
            Prob::from_ratio(q.clone())?,
            Prob::from_ratio(off.clone())?,
            Prob::from_ratio(off)?,
            Prob::from_ratio(q)?,
        ];
        tables.push(JointTable::new(table.variables().to_vec(), cells)?);
    }
    let model = EmpiricalModel::new(born.scenario().clone(), tables)?;
    Ok(format::render_empirical(&model))
}

fn cmd_examples(name: &str, out: Option<&Path>) -> contextcost::Result<u8> {
    let (default_name, text) = match name {
        "xor" => ("xor.json", xor_example_text()?),
        "triangle" => (
            "triangle.json",
            format::render_empirical(&EmpiricalModel::triangle_example()),
        ),
        "chsh" => ("chsh.json", chsh_example_text()?),
        other => {
            eprintln!("error: unknown example `{other}`; valid names: xor, triangle, chsh");
            return Ok(EXIT_INVALID);
        }
    };
    let path = out
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from(default_name));
    fs::write(&path, &text).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    eprintln!("wrote {}", path.display());
    Ok(EXIT_OK)
}
