//! Command-line front end: parses gate and channel expressions, runs the
//! distance/error-rate/budget computations, and emits JSON, CSV, or pretty
//! reports.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex;

use qw1::budget::{example_povm, example_scenario, Povm};
use qw1::cmatrix::MatrixJson;
use qw1::error::Error as QwError;
use qw1::expr::parse_gate_expr;
use qw1::json::{CertificateJson, ChannelJson, DistanceJson, ErrorRateJson, PovmJson, ScenarioJson};
use qw1::noise::{error_rate_ordering_check, w1_error_rate, NoiseChannel};
use qw1::operator::{DensityMatrix, UnitaryOperator};
use qw1::unitary::{catalog_distance, d_unitary, AscentOptions, GateId};
use qw1::w1::witness::{controlled_phase_difference, witness_controlled_phase};
use qw1::w1::{verify_certificate, w1_distance_states, SolverOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Parser)]
#[command(
    name = "qw1",
    about = "Quantum Wasserstein distance of order 1 between states and unitary operations",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Base seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Restarts of the numeric ascent.
    #[arg(long, global = true, default_value_t = 32)]
    restarts: usize,

    /// Solver tolerance.
    #[arg(long, global = true)]
    tolerance: Option<f64>,

    /// Iteration cap of the splitting solver.
    #[arg(long, global = true)]
    max_iterations: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// W1 distance between two density matrices stored as matrix JSON.
    W1State {
        #[arg(long)]
        rho: PathBuf,
        #[arg(long)]
        sigma: PathBuf,
        /// Re-check the certificate invariants independently.
        #[arg(long)]
        verify: bool,
    },
    /// Distance D(U, V) between two gate expressions.
    W1Unitary {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        /// Sweep `start:end:steps`, substituting each value for `@` in the
        /// gate expressions; emits one row per value.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// W1 error rate of a gate under a noise channel.
    ErrorRate {
        /// Ideal gate expression.
        #[arg(long)]
        u: String,
        /// `depolarizing:p`, `unitary:file.json`, `unitary-expr:EXPR`, or a
        /// channel JSON file path.
        #[arg(long)]
        channel: String,
        /// Also estimate the trace-norm rate and check e <= e1.
        #[arg(long)]
        ordering_check: bool,
        /// Sweep `start:end:steps` substituting `@` in the channel spec.
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Per-gate tolerance budget from a POVM.
    Budget {
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        t: Option<usize>,
        /// `example1` or a POVM JSON file path.
        #[arg(long, default_value = "example1")]
        povm: String,
        /// Noise angle; adds the admissibility verdict.
        #[arg(long)]
        theta: Option<f64>,
        /// Scenario config JSON {"alpha":..,"t":..,"theta":..}.
        #[arg(long)]
        scenario: Option<PathBuf>,
    },
    /// Analytic catalog: one gate or the whole table.
    Catalog {
        #[arg(long)]
        gate: Option<String>,
    },
    /// Feasible witness decomposition for the controlled-phase difference.
    Witness {
        #[arg(long)]
        theta: f64,
        /// Amplitudes a00,a01,a10,a11: four reals or eight re,im pairs.
        #[arg(long)]
        amplitudes: String,
        /// Cross-check the bound against the solver.
        #[arg(long)]
        verify: bool,
    },
    /// Recompute every analytic value and compare at pinned tolerances.
    ReproducePaper,
}

fn exit_code_for(err: &QwError) -> u8 {
    match err {
        QwError::Numeric { .. } => 2,
        _ => 1,
    }
}

fn load_density(path: &PathBuf) -> Result<DensityMatrix, QwError> {
    let text = std::fs::read_to_string(path).map_err(|e| QwError::Parse {
        field: path.display().to_string(),
        message: e.to_string(),
    })?;
    let json: MatrixJson = serde_json::from_str(&text).map_err(|e| QwError::Parse {
        field: path.display().to_string(),
        message: e.to_string(),
    })?;
    DensityMatrix::new(json.resolve_register()?, json.to_matrix()?)
}

/// Parses a gate expression, broadcasting a bare `I` to the partner's
/// register so `--u I --v CNOT` means the two-qubit identity.
fn parse_pair(u_src: &str, v_src: &str) -> Result<(UnitaryOperator, UnitaryOperator), QwError> {
    let u = parse_gate_expr(u_src)?;
    let v = parse_gate_expr(v_src)?;
    let (mut u_op, mut v_op) = (u.unitary, v.unitary);
    if u_op.register() != v_op.register() {
        if matches!(u.gate_id, Some(GateId::Identity)) {
            u_op = UnitaryOperator::identity(v_op.register());
        } else if matches!(v.gate_id, Some(GateId::Identity)) {
            v_op = UnitaryOperator::identity(u_op.register());
        }
    }
    Ok((u_op, v_op))
}

fn parse_channel(spec: &str, gate_register: qw1::QuditRegister) -> Result<NoiseChannel, QwError> {
    if let Some(p) = spec.strip_prefix("depolarizing:") {
        let p: f64 = p.parse().map_err(|_| QwError::Parse {
            field: "--channel".into(),
            message: format!("bad depolarizing parameter '{p}'"),
        })?;
        return NoiseChannel::depolarizing(gate_register, p);
    }
    if let Some(path) = spec.strip_prefix("unitary:") {
        let text = std::fs::read_to_string(path).map_err(|e| QwError::Parse {
            field: "--channel".into(),
            message: format!("{path}: {e}"),
        })?;
        let json: MatrixJson = serde_json::from_str(&text).map_err(|e| QwError::Parse {
            field: "--channel".into(),
            message: format!("{path}: {e}"),
        })?;
        let u = UnitaryOperator::new(json.resolve_register()?, json.to_matrix()?)?;
        return Ok(NoiseChannel::unitary(&u));
    }
    if let Some(expr) = spec.strip_prefix("unitary-expr:") {
        let parsed = parse_gate_expr(expr)?;
        return Ok(NoiseChannel::unitary(&parsed.unitary));
    }
    let text = std::fs::read_to_string(spec).map_err(|e| QwError::Parse {
        field: "--channel".into(),
        message: format!("{spec}: {e}"),
    })?;
    let json: ChannelJson = serde_json::from_str(&text).map_err(|e| QwError::Parse {
        field: "--channel".into(),
        message: format!("{spec}: {e}"),
    })?;
    json.to_channel()
}

fn load_povm(spec: &str) -> Result<Povm, QwError> {
    if spec == "example1" {
        return Ok(example_povm());
    }
    let text = std::fs::read_to_string(spec).map_err(|e| QwError::Parse {
        field: "--povm".into(),
        message: format!("{spec}: {e}"),
    })?;
    let json: PovmJson = serde_json::from_str(&text).map_err(|e| QwError::Parse {
        field: "--povm".into(),
        message: format!("{spec}: {e}"),
    })?;
    json.to_povm()
}

fn parse_sweep(spec: &str) -> Result<Vec<f64>, QwError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || QwError::Parse {
        field: "--sweep".into(),
        message: format!("expected start:end:steps, got '{spec}'"),
    };
    if parts.len() != 3 {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let end: f64 = parts[1].parse().map_err(|_| bad())?;
    let steps: usize = parts[2].parse().map_err(|_| bad())?;
    if steps < 2 {
        return Err(bad());
    }
    Ok((0..steps)
        .map(|i| start + (end - start) * i as f64 / (steps - 1) as f64)
        .collect())
}

fn parse_amplitudes(src: &str) -> Result<[Complex<f64>; 4], QwError> {
    let parts: Vec<f64> = src
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| QwError::Parse {
            field: "--amplitudes".into(),
            message: e.to_string(),
        })?;
    match parts.len() {
        4 => Ok([
            Complex::new(parts[0], 0.0),
            Complex::new(parts[1], 0.0),
            Complex::new(parts[2], 0.0),
            Complex::new(parts[3], 0.0),
        ]),
        8 => Ok([
            Complex::new(parts[0], parts[1]),
            Complex::new(parts[2], parts[3]),
            Complex::new(parts[4], parts[5]),
            Complex::new(parts[6], parts[7]),
        ]),
        other => Err(QwError::Parse {
            field: "--amplitudes".into(),
            message: format!("expected 4 reals or 8 re,im components, got {other}"),
        }),
    }
}

struct Ctx {
    format: Format,
    ascent: AscentOptions,
    solver: SolverOptions,
}

fn emit_json<T: serde::Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serialization")
    );
}

fn run_w1_state(ctx: &Ctx, rho: &PathBuf, sigma: &PathBuf, verify: bool) -> Result<u8, QwError> {
    let rho = load_density(rho)?;
    let sigma = load_density(sigma)?;
    let cert = w1_distance_states(&rho, &sigma, &ctx.solver)?;
    let x = rho.diff(&sigma)?;
    let json = CertificateJson::from_certificate(&cert, &x);
    match ctx.format {
        Format::Json => emit_json(&json),
        Format::Csv => {
            println!("value,lower_bound,upper_bound,converged,iterations");
            println!(
                "{},{},{},{},{}",
                cert.value, cert.lower_bound, cert.upper_bound, cert.converged, cert.iterations
            );
        }
        Format::Pretty => {
            println!("W1(rho, sigma) = {:.9}", cert.value);
            println!(
                "bracket [{:.9}, {:.9}], {} iterations, converged: {}",
                cert.lower_bound, cert.upper_bound, cert.iterations, cert.converged
            );
        }
    }
    if verify {
        let check = verify_certificate(&cert, &x, 1e-6);
        if ctx.format == Format::Pretty {
            println!(
                "verify: {} (reconstruction {:.2e}, marginals {:.2e})",
                if check.ok { "ok" } else { "FAILED" },
                check.reconstruction_residual,
                check.max_marginal_residual
            );
        }
        if !check.ok {
            return Ok(2);
        }
    }
    Ok(if cert.converged { 0 } else { 2 })
}

fn run_w1_unitary(
    ctx: &Ctx,
    u_src: &str,
    v_src: &str,
    sweep: &Option<String>,
) -> Result<u8, QwError> {
    let values = match sweep {
        Some(s) => parse_sweep(s)?,
        None => vec![f64::NAN],
    };
    let mut all_converged = true;
    let mut rows = Vec::new();
    for value in &values {
        let (u_txt, v_txt) = if sweep.is_some() {
            (
                u_src.replace('@', &format!("{value}")),
                v_src.replace('@', &format!("{value}")),
            )
        } else {
            (u_src.to_string(), v_src.to_string())
        };
        let (u, v) = parse_pair(&u_txt, &v_txt)?;
        let d = d_unitary(&u, &v, &ctx.ascent)?;
        all_converged &= d.converged;
        rows.push((*value, DistanceJson::from_estimate(&d)));
    }
    match (ctx.format, sweep.is_some()) {
        (Format::Json, _) => {
            if sweep.is_some() {
                emit_json(&rows);
            } else {
                emit_json(&rows[0].1);
            }
        }
        (Format::Csv, _) => {
            println!("param,value,lower_bound,upper_bound,method,converged");
            for (p, d) in &rows {
                println!(
                    "{},{},{},{},{:?},{}",
                    p, d.value, d.lower_bound, d.upper_bound, d.method, d.converged
                );
            }
        }
        (Format::Pretty, true) => {
            for (p, d) in &rows {
                println!("param {p:.6}: D = {:.9} ({:?})", d.value, d.method);
            }
        }
        (Format::Pretty, false) => {
            let d = &rows[0].1;
            println!("D(U, V) = {:.9}", d.value);
            println!(
                "method {:?}, bracket [{:.9}, {:.9}], restarts {}, converged {}",
                d.method, d.lower_bound, d.upper_bound, d.restarts_used, d.converged
            );
        }
    }
    Ok(if all_converged { 0 } else { 2 })
}

fn run_error_rate(
    ctx: &Ctx,
    u_src: &str,
    channel_src: &str,
    ordering: bool,
    sweep: &Option<String>,
) -> Result<u8, QwError> {
    let values = match sweep {
        Some(s) => parse_sweep(s)?,
        None => vec![f64::NAN],
    };
    let mut rows = Vec::new();
    for value in &values {
        let ch_txt = if sweep.is_some() {
            channel_src.replace('@', &format!("{value}"))
        } else {
            channel_src.to_string()
        };
        let parsed = parse_gate_expr(u_src)?;
        let u = parsed.unitary;
        let ch = parse_channel(&ch_txt, u.register())?;
        let report = w1_error_rate(&u, &ch, &ctx.ascent)?;
        let json = ErrorRateJson::from_report(&report, u.register().num_qudits());
        let ordering_report = if ordering {
            Some(error_rate_ordering_check(&u, &ch, &ctx.ascent)?)
        } else {
            None
        };
        rows.push((*value, json, ordering_report));
    }
    match ctx.format {
        Format::Json => {
            if sweep.is_some() {
                emit_json(&rows.iter().map(|(p, j, o)| (p, j, o)).collect::<Vec<_>>());
            } else {
                let (_, j, o) = &rows[0];
                if let Some(o) = o {
                    emit_json(&serde_json::json!({"rate": j, "ordering": o}));
                } else {
                    emit_json(j);
                }
            }
        }
        Format::Csv => {
            println!("param,exact,bracket_low,bracket_high,point_estimate,upper_bound_mixed,circuit_cost_lb,experiment_cost_lb");
            for (p, j, _) in &rows {
                println!(
                    "{},{},{},{},{},{},{},{}",
                    p,
                    j.exact.map(|v| v.to_string()).unwrap_or_default(),
                    j.bracket_low,
                    j.bracket_high,
                    j.point_estimate.map(|v| v.to_string()).unwrap_or_default(),
                    j.upper_bound_mixed.map(|v| v.to_string()).unwrap_or_default(),
                    j.circuit_cost_lb,
                    j.experiment_cost_lb
                );
            }
        }
        Format::Pretty => {
            for (p, j, o) in &rows {
                if sweep.is_some() {
                    print!("param {p:.6}: ");
                }
                match j.exact {
                    Some(e) => println!("e(U, V) = {e:.9} ({:?})", j.method),
                    None => println!(
                        "e(U, V) in [{:.9}, {:.9}], point {:?} ({:?})",
                        j.bracket_low, j.bracket_high, j.point_estimate, j.method
                    ),
                }
                if sweep.is_none() {
                    println!(
                        "cost bounds: circuit >= {:.9}, experiment >= {:.9}",
                        j.circuit_cost_lb, j.experiment_cost_lb
                    );
                    if let Some(ub) = j.upper_bound_mixed {
                        println!("mixed-unitary upper bound: {ub:.9}");
                    }
                }
                if let Some(o) = o {
                    println!(
                        "ordering: e = {:.6} <= e1 = {:.6} + {:.0e}: {}",
                        o.e_w1,
                        o.e_one,
                        o.slack,
                        if o.holds { "ok" } else { "VIOLATED" }
                    );
                }
            }
        }
    }
    Ok(0)
}

fn run_budget(
    ctx: &Ctx,
    alpha: Option<f64>,
    t: Option<usize>,
    povm_spec: &str,
    theta: Option<f64>,
    scenario: &Option<PathBuf>,
) -> Result<u8, QwError> {
    if let Some(path) = scenario {
        let text = std::fs::read_to_string(path).map_err(|e| QwError::Parse {
            field: path.display().to_string(),
            message: e.to_string(),
        })?;
        let cfg: ScenarioJson = serde_json::from_str(&text).map_err(|e| QwError::Parse {
            field: path.display().to_string(),
            message: e.to_string(),
        })?;
        let report = example_scenario(cfg.theta, cfg.alpha, cfg.t)?;
        match ctx.format {
            Format::Json => emit_json(&report),
            _ => print_scenario(&report),
        }
        return Ok(0);
    }

    let alpha = alpha.ok_or_else(|| QwError::Argument("budget needs --alpha".into()))?;
    let t = t.ok_or_else(|| QwError::Argument("budget needs --t".into()))?;
    let povm = load_povm(povm_spec)?;
    let threshold = qw1::budget::tolerance_budget(alpha, t, &povm)?;
    match theta {
        Some(theta) => {
            let per_gate = theta.sin().abs();
            let edge = threshold.clamp(0.0, 1.0).asin();
            let report = serde_json::json!({
                "threshold": threshold,
                "lambda_max": povm.max_eigenvalue(),
                "theta": theta,
                "per_gate_distance": per_gate,
                "admissible": per_gate <= threshold,
                "admissible_ranges": [[0.0, edge], [std::f64::consts::PI - edge, std::f64::consts::PI]],
            });
            match ctx.format {
                Format::Json => emit_json(&report),
                _ => {
                    println!(
                        "threshold G = {threshold:.9} (lambda_max {:.6})",
                        povm.max_eigenvalue()
                    );
                    println!(
                        "theta {theta:.6}: per-gate distance {per_gate:.9} -> {}",
                        if per_gate <= threshold {
                            "admissible"
                        } else {
                            "NOT admissible"
                        }
                    );
                    println!(
                        "admissible theta: [0, {edge:.9}] or [{:.9}, pi]",
                        std::f64::consts::PI - edge
                    );
                }
            }
        }
        None => match ctx.format {
            Format::Json => emit_json(&serde_json::json!({
                "threshold": threshold,
                "lambda_max": povm.max_eigenvalue(),
                "alpha": alpha,
                "t": t,
            })),
            _ => println!("threshold G = {threshold:.9}"),
        },
    }
    Ok(0)
}

fn print_scenario(report: &qw1::budget::ScenarioReport) {
    println!("threshold G = {:.9}", report.threshold);
    println!(
        "per-gate distance {:.9} -> {}",
        report.per_gate_distance,
        if report.admissible {
            "admissible"
        } else {
            "NOT admissible"
        }
    );
    println!(
        "admissible theta: [0, {:.9}] or [{:.9}, pi]",
        report.admissible_ranges[0].1, report.admissible_ranges[1].0
    );
    println!(
        "sequence bound {:.9}, probability bound {:.9}",
        report.sum_bound, report.probability_bound
    );
}

fn run_catalog(ctx: &Ctx, gate: &Option<String>) -> Result<u8, QwError> {
    let entries: Vec<(String, GateId)> = match gate {
        Some(src) => {
            let parsed = parse_gate_expr(src)?;
            let id = parsed
                .gate_id
                .unwrap_or(GateId::Custom(parsed.unitary.matrix().clone()));
            vec![(src.clone(), id)]
        }
        None => {
            let mut list: Vec<(String, GateId)> = vec![
                ("I".into(), GateId::Identity),
                ("X".into(), GateId::PauliX),
                ("H".into(), GateId::Hadamard),
                ("CNOT".into(), GateId::Cnot),
                ("CZ".into(), GateId::Cz),
                ("SWAP".into(), GateId::Swap),
                (
                    "CP(theta=pi/2,k=3)".into(),
                    GateId::ControlledPhase {
                        theta: std::f64::consts::FRAC_PI_2,
                        k: 3,
                    },
                ),
                ("XK(k=2,n=3)".into(), GateId::TensorPauliX { k: 2, n: 3 }),
            ];
            for i in 1..=24u8 {
                list.push((format!("PERM4({i})"), GateId::Permutation4(i)));
            }
            list
        }
    };
    let mut rows = Vec::new();
    for (name, id) in entries {
        let d = catalog_distance(&id)?;
        rows.push((name, d.value));
    }
    match ctx.format {
        Format::Json => emit_json(
            &rows
                .iter()
                .map(|(n, v)| serde_json::json!({"gate": n, "distance": v}))
                .collect::<Vec<_>>(),
        ),
        Format::Csv => {
            println!("gate,distance");
            for (n, v) in &rows {
                println!("\"{n}\",{v}");
            }
        }
        Format::Pretty => {
            for (n, v) in &rows {
                println!("{n:<22} {v:.12}");
            }
        }
    }
    Ok(0)
}

fn run_witness(ctx: &Ctx, theta: f64, amplitudes: &str, verify: bool) -> Result<u8, QwError> {
    let amps = parse_amplitudes(amplitudes)?;
    let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(QwError::Argument(format!(
            "amplitudes have squared norm {norm}, expected 1 (field --amplitudes)"
        )));
    }
    let w = witness_controlled_phase(theta, &amps)?;
    let x = controlled_phase_difference(theta, &amps)?;
    let residual = qw1::cmatrix::max_abs(&(w.reconstruction().matrix() - x.matrix()));
    let solver_value = if verify {
        Some(qw1::w1::w1_norm(&x, &ctx.solver)?.value)
    } else {
        None
    };
    match ctx.format {
        Format::Json => emit_json(&serde_json::json!({
            "theta": theta,
            "branch": format!("{:?}", w.branch),
            "c1": w.c1,
            "c2": w.c2,
            "bound": w.bound(),
            "expected_bound": std::f64::consts::SQRT_2 * (theta / 2.0).sin(),
            "reconstruction_residual": residual,
            "solver_value": solver_value,
            "f1": MatrixJson::from_matrix(w.f1.matrix()),
            "f2": MatrixJson::from_matrix(w.f2.matrix()),
        })),
        _ => {
            println!("branch {:?}", w.branch);
            println!(
                "c1 = {:.9}, c2 = {:.9}, c1+c2 = {:.9}",
                w.c1,
                w.c2,
                w.bound()
            );
            println!(
                "sqrt(2) sin(theta/2) = {:.9}",
                std::f64::consts::SQRT_2 * (theta / 2.0).sin()
            );
            println!("reconstruction residual {residual:.2e}");
            if let Some(v) = solver_value {
                println!(
                    "solver value {v:.9} <= bound {:.9}: {}",
                    w.bound(),
                    if v <= w.bound() + 1e-4 { "ok" } else { "VIOLATED" }
                );
            }
        }
    }
    if let Some(v) = solver_value {
        if v > w.bound() + 1e-4 {
            return Ok(2);
        }
    }
    Ok(0)
}

fn run_reproduce(ctx: &Ctx, seed: u64, restarts: usize) -> Result<u8, QwError> {
    let report = qw1::report::reproduce_paper(seed, restarts)?;
    match ctx.format {
        Format::Json => emit_json(&report),
        Format::Csv => print!("{}", report.to_csv()),
        Format::Pretty => print!("{}", report.to_pretty()),
    }
    Ok(if report.passed { 0 } else { 2 })
}

fn run(cli: Cli) -> Result<u8, QwError> {
    let mut solver = SolverOptions::default();
    if let Some(tol) = cli.tolerance {
        if !tol.is_finite() || tol <= 0.0 {
            return Err(QwError::Argument(format!(
                "--tolerance must be positive, got {tol}"
            )));
        }
        solver.tolerance = tol;
    }
    if let Some(cap) = cli.max_iterations {
        if cap < 1 {
            return Err(QwError::Argument(
                "--max-iterations must be at least 1".into(),
            ));
        }
        solver.max_iterations = cap;
    }
    let ascent = AscentOptions {
        seed: cli.seed,
        restarts: cli.restarts.max(1),
        solver: solver.clone(),
        ..AscentOptions::default()
    };
    let ctx = Ctx {
        format: cli.format,
        ascent,
        solver,
    };

    match &cli.command {
        Command::W1State { rho, sigma, verify } => run_w1_state(&ctx, rho, sigma, *verify),
        Command::W1Unitary { u, v, sweep } => run_w1_unitary(&ctx, u, v, sweep),
        Command::ErrorRate {
            u,
            channel,
            ordering_check,
            sweep,
        } => run_error_rate(&ctx, u, channel, *ordering_check, sweep),
        Command::Budget {
            alpha,
            t,
            povm,
            theta,
            scenario,
        } => run_budget(&ctx, *alpha, *t, povm, *theta, scenario),
        Command::Catalog { gate } => run_catalog(&ctx, gate),
        Command::Witness {
            theta,
            amplitudes,
            verify,
        } => run_witness(&ctx, *theta, amplitudes, *verify),
        Command::ReproducePaper => run_reproduce(&ctx, cli.seed, cli.restarts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
