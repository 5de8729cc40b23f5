use std::fs;
use std::io::Write;
use std::path::Path;

use qwstat_core::export::{self, write_atomic};
use qwstat_core::reduced::{self, type1_params, type2_params};
use qwstat_core::stationary::{
    closed_form_measure_type1, closed_form_measure_type2, detect_period, measure_of, type1_state, type2_state,
    type2_state_unchecked,
};
use qwstat_core::{
    coin, cpx, evolve, CoinMatrix, Error, Measure, ReducedParams, SeedSequence, Topology, WalkType, WaveState, C64,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{check_tol, Defaults};
use crate::parse::parse_complex;
use crate::{
    ClassifyArgs, CoinArgs, Family, Failure, StateArgs, StationaryArgs, SweepArgs, VerifyArgs, EXIT_CLASSIFICATION,
    EXIT_DRIFT, EXIT_INPUT,
};

type CmdResult = Result<u8, Failure>;

fn input(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INPUT, message: message.into() }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::NonUnitary { .. } => "NonUnitary",
        Error::Domain(_) => "Domain",
        Error::ZeroEntry { .. } => "ZeroEntry",
        Error::CentralReflection => "CentralReflection",
        Error::NonUnimodularLambda { .. } => "NonUnimodularLambda",
        Error::InconsistentLambda { .. } => "InconsistentLambda",
        Error::SquareConditionFailed { .. } => "SquareConditionFailed",
        Error::ReducedShape { .. } => "ReducedShape",
        Error::DegenerateSeeds => "DegenerateSeeds",
        Error::TypeMismatch { .. } => "TypeMismatch",
        Error::TanSingularity { .. } => "TanSingularity",
        Error::UnsupportedFamily(_) => "UnsupportedFamily",
        Error::WindowTooSmall { .. } => "WindowTooSmall",
        Error::InvalidTopology(_) => "InvalidTopology",
        Error::SeedCoverage(_) => "SeedCoverage",
        Error::Parse(_) => "Parse",
        Error::Json(_) => "Json",
        Error::Io(_) => "Io",
    }
}

/// Writes to stdout; a closed pipe ends the process quietly.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: cannot write to stdout: {e}");
        std::process::exit(EXIT_INPUT.into());
    }
}

fn fmt_c(z: C64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

fn build_coin(args: &CoinArgs) -> Result<CoinMatrix, Failure> {
    args.coin.build(args.eta, args.rho).map_err(|e| match e {
        // a coin that cannot be built is an input problem, whatever the cause
        e @ (Error::NonUnitary { .. } | Error::Domain(_) | Error::Parse(_) | Error::Json(_) | Error::Io(_)) => {
            input(e.to_string())
        }
        other => other.into(),
    })
}

fn classify_entry(result: &Result<ReducedParams, Error>) -> Value {
    match result {
        Ok(p) => {
            let mut v: Value = serde_json::to_value(p).expect("params serialize");
            v["ok"] = json!(true);
            v["left_factor"] = json!(cpx::to_pair(p.left_factor()));
            v["right_factor"] = json!(cpx::to_pair(p.right_factor()));
            v
        }
        Err(e) => json!({ "ok": false, "kind": error_kind(e), "message": e.to_string() }),
    }
}

pub fn classify(args: &ClassifyArgs) -> CmdResult {
    let coin = build_coin(&args.coin)?;
    let tol = check_tol(args.tol).map_err(input)?;
    let results = [type1_params(&coin, tol), type2_params(&coin, tol)];
    if args.json {
        let doc = json!({
            "schema": export::SCHEMA_VERSION,
            "coin": coin.family().to_string(),
            "tol": tol,
            "type1": classify_entry(&results[0]),
            "type2": classify_entry(&results[1]),
        });
        emit(&format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")));
    } else {
        let mut text = format!("coin: {}\n", coin.family());
        for (n, r) in results.iter().enumerate() {
            let line = match r {
                Ok(p) => format!(
                    "type {}: lambda = {}, a1 = {}, a2 = {}, residual = {:e}",
                    n + 1,
                    fmt_c(p.lambda),
                    fmt_c(p.a_tilde_1),
                    fmt_c(p.a_tilde_2),
                    p.consistency_residual
                ),
                Err(e) => format!("type {}: fails ({}): {e}", n + 1, error_kind(e)),
            };
            text.push_str(&line);
            text.push('\n');
        }
        emit(&text);
    }
    Ok(if results.iter().any(Result::is_ok) { 0 } else { EXIT_CLASSIFICATION })
}

/// Type-2 parameters even when the square condition fails.
fn forced_type2_params(coin: &CoinMatrix, tol: f64) -> Result<ReducedParams, Error> {
    match type2_params(coin, tol) {
        Err(Error::SquareConditionFailed { lambda, a1, a2, .. }) => {
            let m = coin.minors();
            Ok(ReducedParams {
                walk_type: WalkType::Type2,
                lambda,
                a_tilde_1: a1,
                a_tilde_2: a2,
                consistency_residual: cpx::dist(m.b / coin.a(1, 1), m.e / coin.a(3, 3)),
            })
        }
        other => other,
    }
}

fn read_seeds(path: &Path, topo: Topology) -> Result<SeedSequence, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("cannot read {}: {e}", path.display())))?;
    export::seeds_from_json(&text, topo).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn constant_seeds(topo: Topology, value: C64) -> Result<SeedSequence, Error> {
    match topo {
        Topology::Cycle(n) => SeedSequence::cycle(vec![value; n]),
        Topology::Window(w) => SeedSequence::new(-(w as i64) - 1, vec![value; 2 * w + 2]),
    }
}

fn random_seeds(topo: Topology, seed: u64) -> Result<SeedSequence, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |n: usize| -> Vec<C64> {
        (0..n).map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect()
    };
    match topo {
        Topology::Cycle(n) => SeedSequence::cycle(draw(n)),
        Topology::Window(w) => SeedSequence::new(-(w as i64) - 1, draw(2 * w + 2)),
    }
}

fn parse_seed(text: &str, flag: &str) -> Result<C64, Failure> {
    parse_complex(text).map_err(|e| input(format!("{flag}: {e}")))
}

/// The closed-form column, or `None` when the coin has no closed form.
fn closed_column(topo: Topology, f: impl Fn(i64) -> Result<f64, Error>) -> Result<Option<Vec<f64>>, Failure> {
    match topo.sites().map(f).collect::<Result<Vec<f64>, Error>>() {
        Ok(v) => Ok(Some(v)),
        Err(Error::UnsupportedFamily(_) | Error::TanSingularity { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

struct Built {
    coin: CoinMatrix,
    params: ReducedParams,
    state: WaveState,
    closed_form: Option<Vec<f64>>,
}

fn build_state(args: &StateArgs, topo: Topology, force: bool) -> Result<Built, Failure> {
    let coin = build_coin(&args.coin)?;
    let tol = check_tol(args.class_tol).map_err(input)?;
    let phi1 = parse_seed(&args.phi1, "--phi1")?;
    match args.walk_type {
        1 => {
            if args.seeds.is_some() {
                return Err(input("--seeds applies to --type 2 only"));
            }
            let phi3 = parse_seed(&args.phi3, "--phi3")?;
            let params = type1_params(&coin, tol)?;
            let state = type1_state(&coin, &params, phi1, phi3, topo)?;
            let closed_form = closed_column(topo, |x| closed_form_measure_type1(&coin, phi1, phi3, x))?;
            Ok(Built { coin, params, state, closed_form })
        }
        _ => {
            let seeds = match &args.seeds {
                Some(path) => read_seeds(path, topo)?,
                None => constant_seeds(topo, phi1)?,
            };
            let (params, state) = if force {
                let params = forced_type2_params(&coin, tol)?;
                let state = type2_state_unchecked(&coin, &params, &seeds, topo)?;
                (params, state)
            } else {
                let params = type2_params(&coin, tol)?;
                let state = type2_state(&coin, &params, &seeds, topo)?;
                (params, state)
            };
            let closed_form = closed_column(topo, |x| closed_form_measure_type2(&coin, &seeds, topo, x))?;
            Ok(Built { coin, params, state, closed_form })
        }
    }
}

fn is_json_path(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
}

fn io_failure(path: &Path, e: Error) -> Failure {
    input(format!("cannot write {}: {e}", path.display()))
}

pub fn stationary(args: &StationaryArgs, defaults: &Defaults) -> CmdResult {
    let topo = args.state.topology.unwrap_or(defaults.topology);
    let built = build_state(&args.state, topo, false)?;
    let measure = measure_of(&built.state);
    let period = detect_period(&measure, args.max_period);

    match &args.out {
        Some(path) if is_json_path(path) => {
            write_atomic(path, &export::measure_json(&measure, period)).map_err(|e| io_failure(path, e))?
        }
        Some(path) => {
            let csv = export::measure_csv(&measure, built.closed_form.as_deref())?;
            write_atomic(path, &csv).map_err(|e| io_failure(path, e))?
        }
        None => emit(&export::measure_csv(&measure, built.closed_form.as_deref())?),
    }
    if let Some(path) = &args.state_out {
        write_atomic(path, &export::state_json(&built.state)).map_err(|e| io_failure(path, e))?;
    }
    match period {
        Some(p) => eprintln!("period: {p}"),
        None => eprintln!("period: none up to {}", args.max_period),
    }
    Ok(0)
}

pub fn verify(args: &VerifyArgs, defaults: &Defaults) -> CmdResult {
    let topo = args.state.topology.unwrap_or(defaults.topology);
    let steps = args.steps.unwrap_or(defaults.steps);
    let tol = check_tol(args.tol.unwrap_or(defaults.tol)).map_err(input)?;
    if args.force && args.state.walk_type != 2 {
        return Err(input("--force applies to --type 2 only"));
    }
    let built = build_state(&args.state, topo, args.force)?;
    let report = evolve::verify_stationary(&built.coin, &built.state, steps, tol)?;
    let residual = evolve::eigen_residual(&built.coin, &built.state, built.params.lambda);
    let passed = report.passed && residual <= tol;

    let mut doc = serde_json::to_value(&report).expect("report serializes");
    doc["coin"] = json!(built.coin.family().to_string());
    doc["type"] = json!(built.params.walk_type.number());
    doc["lambda"] = json!(cpx::to_pair(built.params.lambda));
    doc["eigen_residual"] = json!(residual);
    doc["passed"] = json!(passed);
    emit(&format!("{}\n", serde_json::to_string_pretty(&doc).expect("json")));
    Ok(if passed { 0 } else { EXIT_DRIFT })
}

fn grid(from: f64, to: f64, points: usize) -> Result<Vec<f64>, Failure> {
    if points == 0 || !from.is_finite() || !to.is_finite() {
        return Err(input("sweep needs finite bounds and at least one point"));
    }
    if points == 1 {
        return Ok(vec![from]);
    }
    let span = to - from;
    Ok((0..points).map(|k| from + span * k as f64 / (points - 1) as f64).collect())
}

enum PointSeeds {
    Type1(C64, C64),
    Type2(SeedSequence),
}

#[derive(Debug)]
struct PointOutcome {
    param: f64,
    file: String,
    status: String,
    max_abs_diff: Option<f64>,
    max_rel_diff: Option<f64>,
    period: Option<usize>,
    max_dev_from_first: Option<f64>,
}

const SWEEP_MAX_PERIOD: usize = 12;
const TAN_SINGULAR_COS: f64 = 1e-12;

fn nan_max(acc: f64, d: f64) -> f64 {
    if d.is_nan() || acc.is_nan() {
        f64::NAN
    } else {
        acc.max(d)
    }
}

fn sweep_point(
    family: Family,
    index: usize,
    param: f64,
    seeds: &PointSeeds,
    topo: Topology,
    out_dir: &Path,
) -> Result<PointOutcome, Error> {
    let name = match family {
        Family::Eta => "eta",
        Family::Rho => "rho",
    };
    let mut outcome = PointOutcome {
        param,
        file: String::new(),
        status: "ok".into(),
        max_abs_diff: None,
        max_rel_diff: None,
        period: None,
        max_dev_from_first: None,
    };
    if family == Family::Eta && param.cos().abs() < TAN_SINGULAR_COS {
        outcome.status = "skipped:TanSingularity".into();
        return Ok(outcome);
    }
    let coin = match family {
        Family::Eta => coin::stefanak_eta(param)?,
        Family::Rho => coin::stefanak_rho(param)?,
    };
    let tol = reduced::DEFAULT_CONSISTENCY_TOL;
    let built = match seeds {
        PointSeeds::Type1(phi1, phi3) => type1_params(&coin, tol)
            .and_then(|p| type1_state(&coin, &p, *phi1, *phi3, topo))
            .map(|s| (s, topo.sites().map(|x| closed_form_measure_type1(&coin, *phi1, *phi3, x)).collect())),
        PointSeeds::Type2(seq) => type2_params(&coin, tol)
            .and_then(|p| type2_state(&coin, &p, seq, topo))
            .map(|s| (s, topo.sites().map(|x| closed_form_measure_type2(&coin, seq, topo, x)).collect())),
    };
    let (state, closed): (WaveState, Result<Vec<f64>, Error>) = match built {
        Ok(b) => b,
        Err(e) => {
            outcome.status = format!("failed:{}", error_kind(&e));
            return Ok(outcome);
        }
    };
    let closed = match closed {
        Ok(c) => c,
        Err(e @ Error::TanSingularity { .. }) => {
            outcome.status = format!("skipped:{}", error_kind(&e));
            return Ok(outcome);
        }
        Err(e) => return Err(e),
    };
    let measure: Measure = measure_of(&state);
    let diffs = || measure.values().iter().zip(&closed).map(|(a, b)| ((a - b).abs(), b.abs().max(1.0)));
    let diff = diffs().map(|(d, _)| d).fold(0.0, nan_max);
    let rel = diffs().map(|(d, scale)| d / scale).fold(0.0, nan_max);
    let first = measure.values()[0];
    let dev = measure.values().iter().map(|v| (v - first).abs()).fold(0.0, f64::max);

    outcome.file = format!("{name}_{index:03}.csv");
    write_atomic(&out_dir.join(&outcome.file), &export::measure_csv(&measure, Some(&closed))?)?;
    outcome.max_abs_diff = Some(diff);
    outcome.max_rel_diff = Some(rel);
    outcome.period = detect_period(&measure, SWEEP_MAX_PERIOD);
    outcome.max_dev_from_first = Some(dev);
    Ok(outcome)
}

fn opt_e(v: Option<f64>) -> String {
    v.map(|v| format!("{v:e}")).unwrap_or_default()
}

pub fn sweep(args: &SweepArgs, defaults: &Defaults) -> CmdResult {
    let topo = args.topology.unwrap_or(defaults.topology);
    let tol = check_tol(args.tol.unwrap_or(defaults.tol)).map_err(input)?;
    let (from, to, points) = match args.family {
        Family::Eta => (args.from.unwrap_or(0.0), args.to.unwrap_or(3.0), args.points.unwrap_or(16)),
        Family::Rho => (args.from.unwrap_or(0.1), args.to.unwrap_or(0.9), args.points.unwrap_or(9)),
    };
    let params = grid(from, to, points)?;

    let phi1 = parse_seed(&args.phi1, "--phi1")?;
    let seeds = match args.walk_type {
        1 => {
            if args.seeds.is_some() || args.random.is_some() {
                return Err(input("--seeds and --random apply to --type 2 only"));
            }
            let phi3 = match &args.phi3 {
                Some(text) => parse_seed(text, "--phi3")?,
                None => phi1,
            };
            if args.family == Family::Eta && phi3 != phi1 {
                return Err(input("the A1(eta) closed form needs --phi3 equal to --phi1"));
            }
            PointSeeds::Type1(phi1, phi3)
        }
        _ => PointSeeds::Type2(match (&args.seeds, args.random) {
            (Some(path), _) => read_seeds(path, topo)?,
            (None, Some(seed)) => random_seeds(topo, seed)?,
            (None, None) => constant_seeds(topo, phi1)?,
        }),
    };

    fs::create_dir_all(&args.out_dir)
        .map_err(|e| input(format!("cannot create {}: {e}", args.out_dir.display())))?;
    let outcomes = params
        .par_iter()
        .enumerate()
        .map(|(i, &p)| sweep_point(args.family, i, p, &seeds, topo, &args.out_dir))
        .collect::<Result<Vec<_>, Error>>()?;

    let mut summary = String::from("param,file,status,max_abs_diff,max_rel_diff,period,max_dev_from_first\n");
    for o in &outcomes {
        summary.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            o.param,
            o.file,
            o.status,
            opt_e(o.max_abs_diff),
            opt_e(o.max_rel_diff),
            o.period.map(|p| p.to_string()).unwrap_or_default(),
            opt_e(o.max_dev_from_first)
        ));
    }
    let summary_path = args.out_dir.join("summary.csv");
    write_atomic(&summary_path, &summary).map_err(|e| io_failure(&summary_path, e))?;

    let failed = outcomes.iter().filter(|o| o.status.starts_with("failed")).count();
    let skipped = outcomes.iter().filter(|o| o.status.starts_with("skipped")).count();
    let worst = outcomes.iter().filter_map(|o| o.max_rel_diff).fold(0.0, nan_max);
    eprintln!(
        "{} points, {skipped} skipped, {failed} failed, max |mu - closed form| / max(1, |closed form|) = {worst:e} (tol {tol:e}); summary in {}",
        outcomes.len(),
        summary_path.display()
    );
    Ok(if failed > 0 {
        EXIT_CLASSIFICATION
    } else if !(worst <= tol) {
        EXIT_DRIFT
    } else {
        0
    })
}
