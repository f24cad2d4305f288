use std::ops::RangeInclusive;

use angles::{angle_of_vectors, principal_sines};
use certified::Interval;
use construct::{BlockConstruction, LineConstruction, Mode, RecursiveConstruction};
use exactlin::{membership_by_wedge, saturate, wedge_residual_sq, Membership, Surd5};
use exponents::{g_func, mu_first_angle};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use search::{
    best_approx_scan, exponent_estimate, write_csv, ApproximationRecord, EstimateMode, ScanConfig, ScanResult,
    Strategy, Target,
};
use serde_json::{json, Value};
use spectrum::{rank_certify, FamilyKind, SpectrumTarget};

use crate::config::{Config, Frac, LineSection};
use crate::parse::{integer_rows, integer_vector, rational_rows};
use crate::{CliError, Globals, Output, EXIT_OK, EXIT_TOLERANCE};

const DEFAULT_TRANSCRIPT: usize = 4;

fn output(command: &str, config: Value, seed: Option<u64>, report: Value) -> Output {
    Output { command: command.into(), config, seed, report, csv: None, exit: EXIT_OK }
}

fn fracs(v: &[Frac]) -> Vec<BigRational> {
    v.iter().map(|f| f.0.clone()).collect()
}

fn interval_json(i: &Interval) -> Value {
    let (lo, hi) = i.to_decimal_pair(12);
    json!({ "lo": lo, "hi": hi })
}

/// Squared height, saturated basis and Plücker coordinates of the span of `basis`.
pub fn height(basis: &str) -> Result<Output, CliError> {
    let rows = integer_rows(basis)?;
    let b = saturate(&rows)?;
    let report = json!({ "heightSq": b.height_sq().to_string(), "subspace": b });
    Ok(output("height", json!({ "basis": basis }), None, report))
}

/// `Y ∈ B` by the integer wedge test.
pub fn member(y: &str, basis: &str) -> Result<Output, CliError> {
    let y = integer_vector(y)?;
    let b = saturate(&integer_rows(basis)?)?;
    let residual = wedge_residual_sq(&y, &b)?;
    let verdict = match membership_by_wedge(&y, &b)? {
        Membership::InB => "InB",
        Membership::Inconclusive => "Inconclusive",
    };
    let report = json!({ "verdict": verdict, "wedgeResidualSq": residual.to_string(), "heightSq": b.height_sq().to_string() });
    let cfg = json!({ "y": y.iter().map(|x| x.to_string()).collect::<Vec<_>>(), "basis": b.basis().iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>() });
    Ok(output("member", cfg, None, report))
}

/// Principal angles between the row spans of `a` and `b`.
pub fn angles(a: &str, b: &str, g: &Globals) -> Result<Output, CliError> {
    let (ra, rb) = (rational_rows(a)?, rational_rows(b)?);
    let rep = principal_sines(&ra, &rb, &g.precision()?)?;
    let mut report = serde_json::to_value(&rep).expect("angle report serializes");
    if ra.len() == 1 && rb.len() == 1 {
        report["sinSq"] = angle_of_vectors(&ra[0], &rb[0])?.to_string().into();
    }
    Ok(output("angles", json!({ "a": a, "b": b, "precisionBits": g.precision_bits }), None, report))
}

fn effective(g: &Globals, seed: Option<u64>, mode: Option<Mode>) -> (u64, Mode) {
    (g.seed.or(seed).unwrap_or(0), g.mode.or(mode).unwrap_or(Mode::Strict))
}

fn build_line(s: &LineSection, g: &Globals) -> Result<(LineConstruction, LineSection), CliError> {
    let (seed, mode) = effective(g, s.seed, s.mode);
    let theta = BigInt::from(s.theta);
    let gamma = fracs(&s.gamma);
    let lc = if s.complete_period {
        LineConstruction::paper_line(s.n, &gamma, theta, seed, mode)?
    } else {
        LineConstruction::build(s.n, gamma.into_iter().map(Surd5::rational).collect(), theta, seed, mode)?
    };
    let mut echo = s.clone();
    echo.seed = Some(seed);
    echo.mode = Some(mode);
    Ok((lc, echo))
}

pub fn construct_line(cfg: &Config, g: &Globals) -> Result<Output, CliError> {
    let s = Config::section(&cfg.line, "line")?;
    let (lc, echo) = build_line(s, g)?;
    let predictions = (1..s.n)
        .map(|e| Ok(json!({ "e": e, "j": 1, "mu": lc.predicted_mu(e)?.to_string() })))
        .collect::<Result<Vec<_>, CliError>>()?;
    let report = json!({
        "construction": lc.transcript(s.transcript.unwrap_or(DEFAULT_TRANSCRIPT))?,
        "predictions": predictions,
    });
    Ok(output("construct-line", json!({ "line": echo }), echo.seed, report))
}

pub fn construct_blocks(cfg: &Config, g: &Globals) -> Result<Output, CliError> {
    let s = Config::section(&cfg.blocks, "blocks")?;
    let (seed, mode) = effective(g, s.seed, s.mode);
    let beta: Vec<Vec<BigRational>> = s.beta.iter().map(|r| fracs(r)).collect();
    let c2 = match (&s.c2, mode) {
        (Some(c), _) => c.0.clone(),
        (None, Mode::Relaxed) => BigRational::one(),
        (None, Mode::Strict) => return Err(CliError::Validation("strict mode needs c2 in [blocks]".into())),
    };
    let bc = BlockConstruction::build(s.d, s.m, beta, BigInt::from(s.theta), seed, mode, &c2, &g.precision()?)?;
    let n = bc.n();
    let mut predictions = Vec::new();
    for e in 1..n {
        for k in 1 + g_func(s.d, e, n)..=s.d.min(e) {
            if e < k * (s.m + 1) {
                let mu = bc.predicted_mu(e, k)?;
                predictions.push(json!({ "e": e, "k": k, "j": k - g_func(s.d, e, n), "mu": mu.to_string() }));
            }
        }
    }
    let k = s.transcript.unwrap_or(DEFAULT_TRANSCRIPT);
    let blocks = (1..=s.d).map(|i| bc.line(i).transcript(k)).collect::<Result<Vec<_>, _>>()?;
    let rats = |rows: &[Vec<BigRational>]| -> Vec<Vec<String>> { rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect() };
    let report = json!({
        "d": s.d,
        "m": s.m,
        "n": n,
        "beta": rats(bc.beta()),
        "extendedBeta": rats(bc.extended_beta()),
        "hypotheses": bc.hypothesis_report(),
        "blocks": blocks,
        "predictions": predictions,
    });
    let mut echo = s.clone();
    echo.seed = Some(seed);
    echo.mode = Some(mode);
    Ok(output("construct-blocks", json!({ "blocks": echo }), Some(seed), report))
}

pub fn construct_recursive(cfg: &Config, g: &Globals) -> Result<Output, CliError> {
    let s = Config::section(&cfg.recursive, "recursive")?;
    let (seed, mode) = effective(g, s.seed, s.mode);
    let gamma = fracs(&s.gamma);
    let proxy = s.proxy.as_ref().map(|p| p.0.clone());
    let rc = RecursiveConstruction::build(s.n, s.d, &gamma, BigInt::from(s.theta), seed, mode, proxy)?;
    let predictions = (1..=s.n - s.d)
        .map(|e| Ok(json!({ "e": e, "j": 1, "mu": mu_first_angle(&gamma, e)?.to_string() })))
        .collect::<Result<Vec<_>, CliError>>()?;
    let k = s.transcript.unwrap_or(DEFAULT_TRANSCRIPT);
    let lines = (1..=s.d).map(|j| rc.line(j).transcript(k)).collect::<Result<Vec<_>, _>>()?;
    let report = json!({
        "n": s.n,
        "d": s.d,
        "ladder": rc.ladder().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "lines": lines,
        "predictions": predictions,
    });
    let mut echo = s.clone();
    echo.seed = Some(seed);
    echo.mode = Some(mode);
    Ok(output("construct-recursive", json!({ "recursive": echo }), Some(seed), report))
}

/// The target from `[target]`: an explicit basis, or the `[line]` construction.
fn build_target(cfg: &Config, g: &Globals, default_level: usize) -> Result<(Target, Option<LineConstruction>, Value), CliError> {
    let t = cfg.target.clone().unwrap_or(crate::config::TargetSection { basis: None, level: None });
    if let Some(basis) = &t.basis {
        let rows = integer_rows(basis)?;
        let b = saturate(&rows)?;
        return Ok((Target::Rational(b), None, json!({ "target": t })));
    }
    let s = Config::section(&cfg.line, "line")?;
    let (lc, echo) = build_line(s, g)?;
    let level = t.level.unwrap_or(default_level);
    let tt = lc.truncated_target(level)?;
    let echo_t = crate::config::TargetSection { basis: None, level: Some(level) };
    Ok((Target::Truncated(tt), Some(lc), json!({ "line": echo, "target": echo_t })))
}

fn run_scan(cfg: &Config, g: &Globals) -> Result<(ScanResult, ScanConfig, Value, Option<LineConstruction>), CliError> {
    let s = Config::section(&cfg.scan, "scan")?;
    let (target, lc, mut echo) = build_target(cfg, g, 4)?;
    let mut sc = ScanConfig::new(target.n(), s.e, s.j, s.height_sq_max, target);
    sc.strategy = s.strategy;
    sc.workers = g.workers;
    sc.seed = g.seed.unwrap_or(0);
    sc.precision = g.precision()?;
    if let Some(f) = &s.floor {
        sc.score_floor = f.0.clone();
    }
    let res = best_approx_scan(&sc)?;
    echo["scan"] = serde_json::to_value(s).expect("config serializes");
    echo["scan"]["strategy"] = serde_json::to_value(sc.strategy()).expect("strategy serializes");
    echo["scan"]["floor"] = sc.score_floor.to_string().into();
    Ok((res, sc, echo, lc))
}

fn csv_bytes(records: &[ApproximationRecord]) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_csv(records, &mut buf)?;
    Ok(buf)
}

pub fn scan(cfg: &Config, g: &Globals) -> Result<Output, CliError> {
    let (res, sc, echo, _) = run_scan(cfg, g)?;
    let frontier: Vec<&ApproximationRecord> = res.records.iter().filter(|r| r.on_frontier).collect();
    let best = exponent_estimate(&res.records, EstimateMode::FrontierMax, sc.precision.working_bits).ok();
    let report = json!({
        "strategy": res.strategy,
        "complete": res.complete,
        "examined": res.examined,
        "records": res.records.len(),
        "flagged": res.flagged,
        "frontierMax": best.as_ref().map(interval_json),
        "frontier": frontier,
    });
    let mut o = output("scan", echo, Some(sc.seed), report);
    o.csv = Some(csv_bytes(&res.records)?);
    Ok(o)
}

/// `lo ≥ p(1−t)` and `hi ≤ p(1+t)`, both certain.
pub fn within_tolerance(est: &Interval, prediction: &Surd5, tol: &BigRational) -> bool {
    let one = BigRational::one();
    let lower = prediction.scale(&(&one - tol));
    let upper = prediction.scale(&(&one + tol));
    Surd5::rational(est.lo().to_rational()) >= lower && Surd5::rational(est.hi().to_rational()) <= upper
}

pub fn estimate(cfg: &Config, g: &Globals, tolerance: Option<BigRational>) -> Result<Output, CliError> {
    let s = Config::section(&cfg.estimate, "estimate")?;
    let mode = s.mode.unwrap_or(EstimateMode::FamilySlope);
    let prec = g.precision()?;
    let (records, family_ns, mut echo, lc) = match mode {
        EstimateMode::FamilySlope => {
            let ls = Config::section(&cfg.line, "line")?;
            let (lc, line_echo) = build_line(ls, g)?;
            let range: RangeInclusive<usize> = s.n_min.unwrap_or(2)..=s.n_max.unwrap_or(6);
            let ns = lc.limsup_indices(s.e, range.clone())?;
            if ns.len() < 2 {
                return Err(CliError::Validation(format!(
                    "only {} index N in {range:?} attains the window maximum; widen the range",
                    ns.len()
                )));
            }
            let top = ns.iter().max().expect("nonempty") + s.e + 2;
            let target = Target::Truncated(lc.truncated_target(top)?);
            let mut sc = ScanConfig::new(lc.n(), s.e, 1, 0, target);
            sc.strategy = Some(Strategy::ConstructedFamily);
            sc.family = ns.iter().map(|&n| Ok((n, lc.b_approx(n, s.e)?))).collect::<Result<_, CliError>>()?;
            sc.precision = prec;
            let res = best_approx_scan(&sc)?;
            (res.records, Some(ns), json!({ "line": line_echo }), Some(lc))
        }
        EstimateMode::FrontierMax => {
            let (res, _, echo, lc) = run_scan(cfg, g)?;
            (res.records, None, echo, lc)
        }
    };
    let flagged = records.iter().filter(|r| r.psi.is_none()).count();
    let est = match exponent_estimate(&records, mode, prec.working_bits) {
        Ok(x) => x,
        Err(e) if flagged > 0 => {
            return Err(CliError::Precision(format!("{flagged} record(s) without a certified angle: {e}")))
        }
        Err(e) => return Err(e.into()),
    };
    let prediction = match (&s.prediction, &lc) {
        (Some(p), _) => Surd5::rational(p.0.clone()),
        (None, Some(lc)) => lc.predicted_mu(s.e)?,
        (None, None) => return Err(CliError::Validation("no prediction: give [estimate] prediction".into())),
    };
    let tol = tolerance.or_else(|| s.tolerance.as_ref().map(|t| t.0.clone())).unwrap_or_else(|| BigRational::new(1.into(), 10.into()));
    let pass = within_tolerance(&est, &prediction, &tol);
    let mut es = s.clone();
    es.mode = Some(mode);
    es.tolerance = Some(Frac(tol.clone()));
    echo["estimate"] = serde_json::to_value(&es).expect("config serializes");
    let report = json!({
        "mode": mode,
        "estimate": interval_json(&est),
        "prediction": prediction.to_string(),
        "tolerance": tol.to_string(),
        "pass": pass,
        "familyIndices": family_ns,
        "flagged": flagged,
        "records": records,
    });
    let mut o = output("estimate", echo, g.seed, report);
    o.csv = Some(csv_bytes(&records)?);
    if !pass {
        o.exit = EXIT_TOLERANCE;
    }
    Ok(o)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyFlag {
    MinAngle,
    LastAngleD,
    Custom,
}

pub fn spectrum_certify(
    family: FamilyFlag,
    n: usize,
    d: usize,
    u: Option<&str>,
    trials: usize,
    g: &Globals,
) -> Result<Output, CliError> {
    let t = match family {
        FamilyFlag::MinAngle => SpectrumTarget::family(FamilyKind::MinAngle, n, d)?,
        FamilyFlag::LastAngleD => SpectrumTarget::family(FamilyKind::LastAngleD, n, d)?,
        FamilyFlag::Custom => {
            let text = u.ok_or_else(|| CliError::Validation("custom family needs --u".into()))?;
            let rows = integer_rows(text)?;
            let pairs = rows
                .iter()
                .map(|r| match r.as_slice() {
                    [e, k] => Ok((usize::try_from(e).ok(), usize::try_from(k).ok())),
                    _ => Err(CliError::Validation("each member of U is a pair e,k".into())),
                })
                .map(|p| p.and_then(|p| match p {
                    (Some(e), Some(k)) => Ok((e, k)),
                    _ => Err(CliError::Validation("e and k must be nonnegative".into())),
                }))
                .collect::<Result<Vec<_>, _>>()?;
            SpectrumTarget::custom(n, d, pairs)?
        }
    };
    let seed = g.seed.unwrap_or(0);
    let cert = rank_certify(&t, trials, seed)?;
    let fam = match family {
        FamilyFlag::MinAngle => "min-angle",
        FamilyFlag::LastAngleD => "last-angle-d",
        FamilyFlag::Custom => "custom",
    };
    let cfg = json!({ "family": fam, "n": n, "d": d, "u": u, "trials": trials, "seed": seed.to_string() });
    Ok(output("spectrum-certify", cfg, Some(seed), serde_json::to_value(&cert).expect("certificate serializes")))
}
