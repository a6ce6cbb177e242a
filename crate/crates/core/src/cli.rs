//! The `meq` command-line front-end.
//!
//! Every successful run writes one JSON record to standard output with the
//! keys `command`, `model_hash`, `method`, `results` and `timings`. Complex
//! numbers are `[re, im]` pairs and matrices are row-major nested arrays.
//! Failures write one line to standard error,
//! `error: code=N kind=K message="..."`, and exit with
//!
//! * 1 for usage errors,
//! * 2 for model parse, semantic and validation errors,
//! * 3 for numerical failures (degeneracy, non-convergence, capacity).

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::c64;
use crate::dynamics::evolve_trajectory;
use crate::error::MeqError;
use crate::hilbert::{basis_state, partial_trace, MultiIndex, Operator};
use crate::linalg::Storage;
use crate::measures::{displaced_mode_population, expectation, log_negativity, PopulationReport};
use crate::modelspec::{
    build_model_with_context, cascade_model, parse_model, render_cascade, CascadeOperators, CascadeParams, ModelContext,
};
use crate::steady::{
    spectrum, steady_dense, steady_dense_with_spectrum, steady_linsolve, steady_sparse, SteadyStateResult,
};
use crate::superspace::{build_liouvillian, SuperOperator, SPARSE_SUPEROPERATOR_THRESHOLD};

#[derive(Parser, Debug)]
#[command(name = "meq", version, about = "Lindblad master equations in superspace")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Steady state and observable expectations.
    Steady {
        model: PathBuf,
        #[command(flatten)]
        solve: SolveArgs,
        /// Comma-separated operator expressions in the model's namespace.
        #[arg(long)]
        observables: Vec<String>,
    },
    /// Liouvillian eigenvalues of largest real part.
    Spectrum {
        model: PathBuf,
        #[arg(short = 'k', default_value_t = 5)]
        k: usize,
    },
    /// Observables along a trajectory.
    Evolve {
        model: PathBuf,
        /// `ground`, `maximally-mixed`, or an operator expression (normalized by its trace).
        #[arg(long, default_value = "ground")]
        initial: String,
        #[arg(long, value_delimiter = ',', required = true)]
        times: Vec<f64>,
        #[arg(long)]
        observables: Vec<String>,
    },
    /// Logarithmic negativity of the steady state, optionally reduced first.
    Negativity {
        model: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        transpose: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        keep: Vec<String>,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Reduced steady-state density matrix.
    Ptrace {
        model: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<String>,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// The built-in cascade benchmark.
    Cascade(CascadeArgs),
}

#[derive(Args, Debug, Clone)]
struct SolveArgs {
    /// Default: sparse when d^2 > 4096, dense otherwise.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// 1-based level whose diagonal row is replaced by the trace condition.
    #[arg(long, default_value_t = 1)]
    row: usize,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Dense,
    Sparse,
    Solve,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Dense => "dense",
            MethodArg::Sparse => "sparse",
            MethodArg::Solve => "solve",
        }
    }
}

#[derive(Args, Debug, Clone)]
struct CascadeArgs {
    /// Print the canonical model file and exit.
    #[arg(long)]
    emit_model: bool,
    #[command(flatten)]
    solve: SolveArgs,
    /// Also report the top-K Liouvillian eigenvalues.
    #[arg(short = 'k')]
    k: Option<usize>,
    /// Report the four benchmark logarithmic negativities.
    #[arg(long)]
    negativity_all: bool,
    /// Rerun with both truncations raised by one and report the largest drift.
    #[arg(long)]
    check_truncation: bool,
    /// Populations along a trajectory from `--initial`.
    #[arg(long, value_delimiter = ',')]
    times: Vec<f64>,
    #[arg(long, default_value = "ground")]
    initial: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    delta_a: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    delta_b: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    ga: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    gb: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma12: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma23: f64,
    #[arg(long, default_value_t = 3.0)]
    gamma_a: f64,
    #[arg(long, default_value_t = 3.0)]
    gamma_b: f64,
    /// Real, or `re:im` for a complex drive.
    #[arg(long, default_value = "20", value_parser = parse_complex, allow_hyphen_values = true)]
    omega_a: c64,
    #[arg(long, default_value = "5", value_parser = parse_complex, allow_hyphen_values = true)]
    omega_b: c64,
    #[arg(long, default_value_t = 4)]
    na: usize,
    #[arg(long, default_value_t = 2)]
    nb: usize,
}

impl CascadeArgs {
    fn params(&self) -> CascadeParams {
        CascadeParams {
            delta_a: self.delta_a,
            delta_b: self.delta_b,
            g_a: self.ga,
            g_b: self.gb,
            gamma_12: self.gamma12,
            gamma_23: self.gamma23,
            gamma_a: self.gamma_a,
            gamma_b: self.gamma_b,
            omega_a: self.omega_a,
            omega_b: self.omega_b,
            n_a: self.na,
            n_b: self.nb,
        }
    }
}

fn parse_complex(s: &str) -> Result<c64, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("invalid number {t:?}: {e}"));
    match s.split_once(':') {
        Some((re, im)) => Ok(c64::new(num(re)?, num(im)?)),
        None => Ok(c64::new(num(s)?, 0.0)),
    }
}

/// Failure of a CLI run, classified by exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    kind: String,
    message: String,
}

impl Failure {
    fn usage(kind: &str, message: impl Into<String>) -> Self {
        Failure { code: 1, kind: kind.into(), message: message.into() }
    }
}

impl From<MeqError> for Failure {
    fn from(e: MeqError) -> Self {
        let code = match &e {
            MeqError::Index(_) | MeqError::Argument(_) | MeqError::Shape(_) => 1,
            MeqError::Parse(_) | MeqError::Validation(_) | MeqError::LayoutMismatch(_) => 2,
            MeqError::Capacity(_) | MeqError::Degeneracy(_) | MeqError::Convergence { .. } | MeqError::Numerical(_) => {
                3
            }
        };
        Failure { code, kind: e.kind().into(), message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Per-stage wall-clock seconds.
#[derive(Default)]
struct Timings {
    stages: Vec<(&'static str, f64)>,
}

impl Timings {
    fn time<T>(&mut self, stage: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.add(stage, start.elapsed().as_secs_f64());
        out
    }

    fn add(&mut self, stage: &'static str, secs: f64) {
        match self.stages.iter_mut().find(|(s, _)| *s == stage) {
            Some((_, t)) => *t += secs,
            None => self.stages.push((stage, secs)),
        }
    }

    fn to_json(&self) -> Value {
        let mut m = Map::new();
        for stage in ["build", "solve", "measure"] {
            let t = self.stages.iter().find(|(s, _)| *s == stage).map_or(0.0, |(_, t)| *t);
            m.insert(stage.into(), json!(t));
        }
        Value::Object(m)
    }
}

struct Record {
    command: &'static str,
    model_hash: String,
    method: String,
    results: Map<String, Value>,
    timings: Timings,
}

impl Record {
    fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "model_hash": self.model_hash,
            "method": self.method,
            "results": Value::Object(self.results.clone()),
            "timings": self.timings.to_json(),
        })
    }
}

fn complex(c: c64) -> Value {
    json!([c.re, c.im])
}

fn matrix(op: &Operator) -> Value {
    let d = op.dim();
    let dense = op.matrix().to_dense();
    Value::Array((0..d).map(|i| Value::Array((0..d).map(|j| complex(dense[(i, j)])).collect())).collect())
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn default_method(l: &SuperOperator) -> MethodArg {
    if l.super_dim() > SPARSE_SUPEROPERATOR_THRESHOLD {
        MethodArg::Sparse
    } else {
        MethodArg::Dense
    }
}

fn solve_steady(l: &SuperOperator, method: MethodArg, args: &SolveArgs) -> crate::Result<SteadyStateResult> {
    match method {
        MethodArg::Dense => steady_dense(l),
        MethodArg::Sparse => steady_sparse(l),
        MethodArg::Solve => steady_linsolve(l, args.row, args.gamma),
    }
}

fn steady_json(result: &SteadyStateResult) -> Value {
    json!({
        "residual": result.residual,
        "trace_before_normalization": complex(result.trace_before_normalization),
        "eigenvalue": result.eigenvalue.map(complex),
    })
}

/// A parsed and built model file.
struct Loaded {
    hash: String,
    ctx: ModelContext,
    l: SuperOperator,
}

fn load(path: &PathBuf, timings: &mut Timings) -> CliResult<Loaded> {
    let bytes =
        std::fs::read(path).map_err(|e| Failure::usage("io", format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure {
        code: 2,
        kind: "lexical".into(),
        message: format!("{} is not UTF-8", path.display()),
    })?;
    let (ctx, l) = timings.time("build", || -> crate::Result<_> {
        let doc = parse_model(&text)?;
        let (model, ctx) = build_model_with_context(&doc)?;
        Ok((ctx, build_liouvillian(&model)?))
    })?;
    Ok(Loaded { hash: sha256_hex(&bytes), ctx, l })
}

/// Splits on commas outside parentheses, so `trans(q,1,2)` stays whole.
fn split_expressions(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    for arg in args {
        let mut depth = 0i32;
        let mut current = String::new();
        for ch in arg.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                ',' if depth == 0 => {
                    out.push(current.trim().to_string());
                    current.clear();
                    continue;
                }
                _ => {}
            }
            current.push(ch);
        }
        out.push(current.trim().to_string());
    }
    out.retain(|s| !s.is_empty());
    out
}

fn observables_json(ctx: &ModelContext, names: &[String], rho: &Operator) -> crate::Result<Value> {
    let mut m = Map::new();
    for name in split_expressions(names) {
        let op = ctx.evaluate_str(&name)?;
        let value = complex(expectation(&op, rho)?);
        m.insert(name, value);
    }
    Ok(Value::Object(m))
}

fn initial_state(ctx: &ModelContext, spec: &str) -> crate::Result<Operator> {
    let layout = ctx.layout();
    match spec {
        "ground" => Ok(basis_state(layout, &MultiIndex::new(vec![1; layout.len()]))?.projector()),
        "maximally-mixed" => Ok(Operator::identity(layout).scale(c64::new(1.0 / layout.total_dim() as f64, 0.0))),
        expr => {
            let op = ctx.evaluate_str(expr)?;
            let tr = op.trace();
            if tr.norm() < 1e-12 {
                return Err(MeqError::Validation(format!("initial state {expr:?} has zero trace")));
            }
            let rho = op.scale(c64::new(1.0, 0.0) / tr);
            if !rho.is_hermitian(1e-10) {
                return Err(MeqError::Validation(format!("initial state {expr:?} is not Hermitian")));
            }
            Ok(rho)
        }
    }
}

fn reduce(rho: &Operator, keep: &[String]) -> crate::Result<Operator> {
    if keep.is_empty() {
        return Ok(rho.clone());
    }
    let layout = rho.layout();
    for k in keep {
        layout.position(k)?;
    }
    let traced: Vec<&str> = layout.names().into_iter().filter(|n| !keep.iter().any(|k| k == n)).collect();
    if traced.is_empty() {
        return Ok(rho.clone());
    }
    partial_trace(rho, &traced)
}

fn run_model_command(command: Command, timings: &mut Timings) -> CliResult<Record> {
    match command {
        Command::Steady { model, solve, observables } => {
            let loaded = load(&model, timings)?;
            let method = solve.method.unwrap_or_else(|| default_method(&loaded.l));
            let result = timings.time("solve", || solve_steady(&loaded.l, method, &solve))?;
            let mut results = Map::new();
            timings.time("measure", || -> crate::Result<()> {
                results.insert("steady".into(), steady_json(&result));
                results.insert("rho".into(), matrix(&result.rho));
                results.insert("observables".into(), observables_json(&loaded.ctx, &observables, &result.rho)?);
                Ok(())
            })?;
            Ok(Record {
                command: "steady",
                model_hash: loaded.hash,
                method: method.name().into(),
                results,
                timings: Timings::default(),
            })
        }
        Command::Spectrum { model, k } => {
            let loaded = load(&model, timings)?;
            let spec = timings.time("solve", || spectrum(&loaded.l, k))?;
            let mut results = Map::new();
            results.insert("eigenvalues".into(), Value::Array(spec.eigenvalues.iter().map(|&c| complex(c)).collect()));
            let method = match loaded.l.storage() {
                Storage::Dense => "dense",
                Storage::Sparse => "sparse",
            };
            Ok(Record {
                command: "spectrum",
                model_hash: loaded.hash,
                method: method.into(),
                results,
                timings: Timings::default(),
            })
        }
        Command::Evolve { model, initial, times, observables } => {
            let loaded = load(&model, timings)?;
            let rho0 = initial_state(&loaded.ctx, &initial)?;
            let traj = timings.time("solve", || evolve_trajectory(&loaded.l, &rho0, &times))?;
            let points = timings.time("measure", || -> crate::Result<Vec<Value>> {
                traj.times
                    .iter()
                    .zip(&traj.states)
                    .map(|(&t, rho)| {
                        let diag: Vec<f64> = (0..rho.dim()).map(|i| rho.get(i, i).re).collect();
                        Ok(json!({
                            "t": t,
                            "trace": complex(rho.trace()),
                            "populations": diag,
                            "observables": observables_json(&loaded.ctx, &observables, rho)?,
                        }))
                    })
                    .collect()
            })?;
            let mut results = Map::new();
            results.insert("initial".into(), json!(initial));
            results.insert("trajectory".into(), Value::Array(points));
            Ok(Record {
                command: "evolve",
                model_hash: loaded.hash,
                method: "propagate".into(),
                results,
                timings: Timings::default(),
            })
        }
        Command::Negativity { model, transpose, keep, solve } => {
            let loaded = load(&model, timings)?;
            let method = solve.method.unwrap_or_else(|| default_method(&loaded.l));
            let result = timings.time("solve", || solve_steady(&loaded.l, method, &solve))?;
            let value = timings.time("measure", || -> crate::Result<f64> {
                let reduced = reduce(&result.rho, &keep)?;
                let names: Vec<&str> = transpose.iter().map(String::as_str).collect();
                log_negativity(&reduced, &names)
            })?;
            let mut results = Map::new();
            results.insert("keep".into(), json!(keep));
            results.insert("transpose".into(), json!(transpose));
            results.insert("log_negativity".into(), json!(value));
            Ok(Record {
                command: "negativity",
                model_hash: loaded.hash,
                method: method.name().into(),
                results,
                timings: Timings::default(),
            })
        }
        Command::Ptrace { model, keep, solve } => {
            let loaded = load(&model, timings)?;
            let method = solve.method.unwrap_or_else(|| default_method(&loaded.l));
            let result = timings.time("solve", || solve_steady(&loaded.l, method, &solve))?;
            let reduced = timings.time("measure", || reduce(&result.rho, &keep))?;
            let mut results = Map::new();
            results.insert("keep".into(), json!(keep));
            results.insert("dims".into(), json!(reduced.layout().dims()));
            results.insert("rho".into(), matrix(&reduced));
            Ok(Record {
                command: "ptrace",
                model_hash: loaded.hash,
                method: method.name().into(),
                results,
                timings: Timings::default(),
            })
        }
        Command::Cascade(_) => unreachable!("handled by run_cascade"),
    }
}

/// Scalar observables of one cascade run, kept in report order.
struct CascadeOutcome {
    method: MethodArg,
    results: Map<String, Value>,
    scalars: Vec<(String, f64)>,
}

fn cascade_once(params: &CascadeParams, args: &CascadeArgs, timings: &mut Timings) -> crate::Result<CascadeOutcome> {
    let (l, ops) = timings.time("build", || -> crate::Result<_> {
        let model = cascade_model(params)?;
        Ok((build_liouvillian(&model)?, CascadeOperators::new(params)?))
    })?;
    let method = args.solve.method.unwrap_or_else(|| default_method(&l));
    let (steady, spec) = timings.time("solve", || -> crate::Result<_> {
        match (method, args.k) {
            (MethodArg::Dense, Some(k)) => {
                let (s, sp) = steady_dense_with_spectrum(&l, k)?;
                Ok((s, Some(sp)))
            }
            (_, Some(k)) => Ok((solve_steady(&l, method, &args.solve)?, Some(spectrum(&l, k)?))),
            (_, None) => Ok((solve_steady(&l, method, &args.solve)?, None)),
        }
    })?;

    let mut results = Map::new();
    let mut scalars = Vec::new();
    timings.time("measure", || -> crate::Result<()> {
        let rho = &steady.rho;
        let report = PopulationReport::new(rho, &ops.population_observables()?)?;
        for (label, v) in report.labels.iter().zip(&report.values) {
            scalars.push((label.clone(), *v));
        }
        results.insert(
            "populations".into(),
            json!({
                "labels": report.labels,
                "values": report.values,
                "imaginary_residuals": report.imaginary_residuals,
            }),
        );
        let popa = displaced_mode_population(rho, &ops.a, params.alpha()?)?;
        let popb = displaced_mode_population(rho, &ops.b, params.beta()?)?;
        scalars.push(("popa".into(), popa));
        scalars.push(("popb".into(), popb));
        results.insert("displaced_populations".into(), json!({ "popa": popa, "popb": popb }));
        results.insert("steady".into(), steady_json(&steady));

        if args.negativity_all {
            let full = log_negativity(rho, &["xi"])?;
            let ab = log_negativity(&partial_trace(rho, &["xi"])?, &["a"])?;
            let xi_a = log_negativity(&partial_trace(rho, &["b"])?, &["xi"])?;
            let xi_b = log_negativity(&partial_trace(rho, &["a"])?, &["xi"])?;
            let entries = [("xi|ab", full), ("a|b", ab), ("xi|a", xi_a), ("xi|b", xi_b)];
            let mut m = Map::new();
            for (name, v) in entries {
                m.insert(name.into(), json!(v));
                scalars.push((format!("log_negativity {name}"), v));
            }
            results.insert("log_negativities".into(), Value::Object(m));
        }
        if let Some(sp) = &spec {
            results.insert("eigenvalues".into(), Value::Array(sp.eigenvalues.iter().map(|&c| complex(c)).collect()));
        }
        Ok(())
    })?;

    if !args.times.is_empty() {
        let layout = l.layout().clone();
        let rho0 = match args.initial.as_str() {
            "ground" => basis_state(&layout, &MultiIndex::new(vec![1; layout.len()]))?.projector(),
            "maximally-mixed" => Operator::identity(&layout).scale(c64::new(1.0 / layout.total_dim() as f64, 0.0)),
            "steady" => steady.rho.clone(),
            other => {
                return Err(MeqError::Argument(format!(
                    "unknown cascade initial state {other:?}; use ground, maximally-mixed or steady"
                )))
            }
        };
        let traj = timings.time("solve", || evolve_trajectory(&l, &rho0, &args.times))?;
        let points = timings.time("measure", || -> crate::Result<Vec<Value>> {
            let obs = ops.population_observables()?;
            traj.times
                .iter()
                .zip(&traj.states)
                .map(|(&t, rho)| {
                    let report = PopulationReport::new(rho, &obs)?;
                    Ok(json!({ "t": t, "trace": complex(rho.trace()), "populations": report.values }))
                })
                .collect()
        })?;
        results.insert("trajectory".into(), Value::Array(points));
    }
    Ok(CascadeOutcome { method, results, scalars })
}

fn run_cascade(args: CascadeArgs, out: &mut dyn Write, timings: &mut Timings) -> CliResult<Option<Record>> {
    let params = args.params();
    let text = render_cascade(&params)?;
    if args.emit_model {
        out.write_all(text.as_bytes()).map_err(|e| Failure::usage("io", e.to_string()))?;
        return Ok(None);
    }
    let hash = sha256_hex(text.as_bytes());
    let mut outcome = if args.check_truncation {
        let larger = params.with_larger_truncation();
        let (base, big) = std::thread::scope(|s| {
            let big = s.spawn(|| {
                let mut t = Timings::default();
                cascade_once(&larger, &args, &mut t).map(|o| (o, t))
            });
            let mut t = Timings::default();
            let base = cascade_once(&params, &args, &mut t).map(|o| (o, t));
            (base, big.join().expect("truncation check thread panicked"))
        });
        let (mut base, t_base) = base?;
        let (big, t_big) = big?;
        for &(stage, secs) in t_base.stages.iter().chain(&t_big.stages) {
            timings.add(stage, secs);
        }
        let mut drifts = Map::new();
        let mut max_drift = 0.0f64;
        for ((name, a), (_, b)) in base.scalars.iter().zip(&big.scalars) {
            let d = (a - b).abs();
            max_drift = max_drift.max(d);
            drifts.insert(name.clone(), json!(d));
        }
        base.results.insert(
            "truncation_check".into(),
            json!({ "n_a": larger.n_a, "n_b": larger.n_b, "drift": drifts, "max_drift": max_drift }),
        );
        base
    } else {
        cascade_once(&params, &args, timings)?
    };
    outcome.results.insert("dimension".into(), json!(params.dim()));
    Ok(Some(Record {
        command: "cascade",
        model_hash: hash,
        method: outcome.method.name().into(),
        results: outcome.results,
        timings: Timings::default(),
    }))
}

fn configure_threads() -> CliResult<()> {
    match std::env::var("MEQ_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| Failure::usage("usage", format!("MEQ_THREADS must be a positive integer, got {v:?}")))?;
            let par = if n <= 1 { faer::Par::Seq } else { faer::Par::rayon(n) };
            faer::set_global_parallelism(par);
        }
        Err(_) => faer::set_global_parallelism(faer::Par::Seq),
    }
    Ok(())
}

fn execute(args: Vec<String>, out: &mut dyn Write) -> CliResult<()> {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                write!(out, "{e}").map_err(|e| Failure::usage("io", e.to_string()))?;
                return Ok(());
            }
            let first = e.to_string().lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            return Err(Failure::usage("usage", first));
        }
    };
    configure_threads()?;
    let mut timings = Timings::default();
    let record = match cli.command {
        Command::Cascade(args) => run_cascade(args, out, &mut timings)?,
        other => Some(run_model_command(other, &mut timings)?),
    };
    if let Some(mut record) = record {
        record.timings = timings;
        let text = serde_json::to_string_pretty(&record.to_json()).expect("record serializes");
        writeln!(out, "{text}").map_err(|e| Failure::usage("io", e.to_string()))?;
    }
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    match execute(args.into_iter().map(Into::into).collect(), out) {
        Ok(()) => 0,
        Err(f) => {
            let message = serde_json::to_string(&f.message).expect("string serializes");
            let _ = writeln!(err, "error: code={} kind={} message={}", f.code, f.kind, message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expression_lists_split_outside_parentheses() {
        let args = vec!["proj(q,2), trans(q,1,2)".to_string(), "(1,2)*a".to_string()];
        assert_eq!(split_expressions(&args), ["proj(q,2)", "trans(q,1,2)", "(1,2)*a"]);
    }
}
