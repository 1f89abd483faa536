//! Command implementations and error-to-exit-code mapping.

use serde::Serialize;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use uc_core::json;
use uc_core::{
    alignment_profile, brute_force_opt, check_alignment, evaluate_exact, outside_option_transform,
    partition_gadget, preprocess, price_grid, random_instance, run_ptas, tightness_instance,
    Configuration, Delta, Error as CoreError, Family, Generated, Instance, PreprocessParams,
    PriceSet, PtasDiagnostics, RandomSpec, SchemeParams, TieBreak,
};

use crate::{Cli, Command, SolveMethod, SourceKind};

pub enum CliError {
    /// Bad input: parse failures, invalid instances, out-of-range options.
    Validation(String),
    /// The request exceeds a configured capability limit.
    Capability(String),
    /// A consistency check that can only fail on a bug.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Capability(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Capability(m) | CliError::Internal(m) => {
                write!(f, "{m}")
            }
        }
    }
}

impl From<CoreError> for CliError {
    fn from(err: CoreError) -> Self {
        match err {
            CoreError::SearchSpaceTooLarge { .. } => CliError::Capability(err.to_string()),
            CoreError::InternalInvariant(_) => CliError::Internal(err.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn read_input(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))
}

/// Reads and validates an instance; on invariant violations, prints the
/// machine-readable violation list to stdout before failing with exit 2.
fn read_instance(path: &Path) -> CliResult<Instance> {
    let instance = json::instance_from_json_unvalidated(&read_input(path)?)?;
    let violations = uc_core::validate(&instance);
    if violations.is_empty() {
        return Ok(instance);
    }
    let listed: Vec<serde_json::Value> = violations
        .iter()
        .map(|v| serde_json::json!({ "path": v.path, "message": v.message }))
        .collect();
    println!("{}", serde_json::json!({ "violations": listed }));
    Err(CliError::Validation(format!(
        "{} invariant violation(s) in {}",
        violations.len(),
        path.display()
    )))
}

fn emit(out: &Option<PathBuf>, text: &str) -> CliResult {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_config(text: &str) -> CliResult<Configuration> {
    let choices = text
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Validation(format!("bad configuration index {part:?}")))
        })
        .collect::<CliResult<Vec<usize>>>()?;
    Ok(Configuration::new(choices))
}

#[derive(Serialize)]
#[serde(untagged)]
enum SolveDiagnostics {
    Ptas(PtasDiagnostics),
    Brute { configurations_evaluated: u64 },
}

#[derive(Serialize)]
struct SolveReport {
    method: &'static str,
    value: f64,
    configuration: Vec<usize>,
    diagnostics: SolveDiagnostics,
    wall_time_ms: u64,
}

pub fn dispatch(cli: Cli) -> CliResult {
    match cli.command {
        Command::Solve {
            input,
            method,
            bins,
            profile_cap,
            threads,
            out,
        } => cmd_solve(&input, method, bins, profile_cap, threads, &out),
        Command::Eval { input, config } => cmd_eval(&input, &config),
        Command::Align {
            input,
            config,
            method: _,
            f,
            out,
        } => cmd_align(&input, config.as_deref(), &f, &out),
        Command::Reduce {
            from,
            input,
            eps,
            umin,
            umax,
            out,
        } => cmd_reduce(from, &input, eps, umin, umax, &out),
        Command::Gen {
            kind,
            seed,
            n,
            m,
            k,
            range,
            grid,
            t,
            integers,
            delta,
            out,
        } => cmd_gen(
            &kind,
            seed,
            n,
            m,
            k,
            &range,
            grid,
            t,
            integers.as_deref(),
            delta,
            &out,
        ),
        Command::Grid {
            umin,
            umax,
            eps,
            out,
        } => {
            let prices = price_grid(umin, umax, eps)?;
            emit(&out, &serde_json::to_string_pretty(&prices).unwrap())
        }
        Command::Preprocess {
            input,
            bins,
            delta,
            out,
            sidecar,
        } => cmd_preprocess(&input, bins, delta, &out, &sidecar),
    }
}

fn cmd_solve(
    input: &Path,
    method: SolveMethod,
    bins: u32,
    profile_cap: Option<u64>,
    threads: usize,
    out: &Option<PathBuf>,
) -> CliResult {
    let instance = read_instance(input)?;
    let started = Instant::now();
    let report = match method {
        SolveMethod::Brute => {
            let res = brute_force_opt(&instance)?;
            SolveReport {
                method: "brute",
                value: res.value,
                configuration: res.configuration.choices,
                diagnostics: SolveDiagnostics::Brute {
                    configurations_evaluated: res.configurations_evaluated,
                },
                wall_time_ms: started.elapsed().as_millis() as u64,
            }
        }
        SolveMethod::Ptas => {
            let params = SchemeParams {
                bins,
                profile_cap,
                parallel: threads > 1,
                threads,
            };
            let res = run_ptas(&instance, &params)?;
            if res.value < 0.0 {
                return Err(CliError::Internal(format!(
                    "negative expected utility {} from a nonnegative instance",
                    res.value
                )));
            }
            SolveReport {
                method: "ptas",
                value: res.value,
                configuration: res.configuration.choices,
                diagnostics: SolveDiagnostics::Ptas(res.diagnostics),
                wall_time_ms: started.elapsed().as_millis() as u64,
            }
        }
    };
    emit(out, &serde_json::to_string_pretty(&report).unwrap())
}

fn cmd_eval(input: &Path, config: &str) -> CliResult {
    let instance = read_instance(input)?;
    let config = parse_config(config)?;
    let value = evaluate_exact(&instance, &config, TieBreak::PrincipalFavor)?;
    println!("{}", serde_json::json!({ "value": value }));
    Ok(())
}

/// Step function through sorted [q, f] breakpoints: the bound at `q` is the
/// value of the first breakpoint at or above `q`, or the last one.
fn bound_from_breakpoints(points: Vec<(f64, f64)>) -> CliResult<impl Fn(f64) -> f64> {
    if points.is_empty() {
        return Err(CliError::Validation("alignment bound file is empty".into()));
    }
    let mut sorted = points;
    sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(move |q: f64| {
        sorted
            .iter()
            .find(|(bq, _)| *bq >= q)
            .unwrap_or_else(|| sorted.last().unwrap())
            .1
    })
}

fn parse_bound(spec: &str) -> CliResult<Box<dyn Fn(f64) -> f64>> {
    match spec {
        "2" => Ok(Box::new(|_| 2.0)),
        "sqrt" => Ok(Box::new(|q: f64| (4.0 / q.sqrt()).max(4.0))),
        path => {
            let text = read_input(Path::new(path))?;
            let points: Vec<(f64, f64)> = serde_json::from_str(&text).map_err(|e| {
                CliError::Validation(format!("bad alignment bound file {path}: {e}"))
            })?;
            Ok(Box::new(bound_from_breakpoints(points)?))
        }
    }
}

fn cmd_align(
    input: &Path,
    config: Option<&str>,
    bound_spec: &str,
    out: &Option<PathBuf>,
) -> CliResult {
    let instance = read_instance(input)?;
    let config = match config {
        Some(text) => parse_config(text)?,
        None => brute_force_opt(&instance)?.configuration,
    };
    let bound = parse_bound(bound_spec)?;
    let profile = alignment_profile(&instance, &config, TieBreak::PrincipalFavor)?;
    let verdict = check_alignment(&profile, &bound);

    let mut csv = String::from("U,q,cond,ratio\n");
    for p in &profile.points {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            p.threshold,
            uc_core::rational::to_f64(&p.q),
            p.cond,
            p.ratio
        ));
    }
    let verdict_json = serde_json::json!({
        "holds": verdict.holds,
        "worst": verdict.worst.map(|(q, ratio, f)| {
            serde_json::json!({ "q": q, "ratio": ratio, "f": f })
        }),
        "base": profile.base,
        "configuration": config.choices,
    });
    match out {
        Some(path) => {
            fs::write(path, &csv).map_err(|e| {
                CliError::Validation(format!("cannot write {}: {e}", path.display()))
            })?;
            println!("{verdict_json}");
        }
        None => {
            print!("{csv}");
            eprintln!("{verdict_json}");
        }
    }
    Ok(())
}

fn cmd_reduce(
    from: SourceKind,
    input: &Path,
    eps: Option<f64>,
    umin: Option<f64>,
    umax: Option<f64>,
    out: &Option<PathBuf>,
) -> CliResult {
    let text = read_input(input)?;
    let instance: Instance = match from {
        SourceKind::Delegation => {
            let d = json::delegation_from_json(&text)?;
            if d.outside_bias.is_some() {
                outside_option_transform(&d)?
            } else {
                uc_core::delegation_to_uc(&d)?
            }
        }
        SourceKind::Pricing => {
            let mut pr = json::pricing_from_json(&text)?;
            if let Some(eps) = eps {
                let (lo, hi) = grid_range(&pr, umin, umax)?;
                for item in &mut pr.items {
                    item.prices = PriceSet::Grid {
                        u_min: lo,
                        u_max: hi,
                        eps,
                    };
                }
            }
            uc_core::pricing_to_uc(&pr)?
        }
        SourceKind::Assortment => {
            let a = json::assortment_from_json(&text)?;
            uc_core::assortment_to_uc(&a)?
        }
    };
    emit(out, &json::instance_to_json(&instance))
}

/// Grid range for pricing: explicit flags, else the positive support range
/// across all items.
fn grid_range(
    pr: &uc_core::PricingInstance,
    umin: Option<f64>,
    umax: Option<f64>,
) -> CliResult<(f64, f64)> {
    let positives: Vec<f64> = pr
        .items
        .iter()
        .flat_map(|i| i.values.support.iter())
        .map(|(v, _)| *v)
        .filter(|v| *v > 0.0)
        .collect();
    let lo = umin.or_else(|| positives.iter().copied().reduce(f64::min));
    let hi = umax.or_else(|| positives.iter().copied().reduce(f64::max));
    match (lo, hi) {
        (Some(lo), Some(hi)) => Ok((lo, hi)),
        _ => Err(CliError::Validation(
            "grid pricing needs positive values or explicit --umin/--umax".into(),
        )),
    }
}

fn parse_range(text: &str) -> CliResult<(f64, f64)> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Validation(format!(
            "bad range {text:?}, expected \"lo,hi\""
        )));
    }
    let lo = parts[0]
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Validation(format!("bad range bound {:?}", parts[0])))?;
    let hi = parts[1]
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::Validation(format!("bad range bound {:?}", parts[1])))?;
    Ok((lo, hi))
}

#[allow(clippy::too_many_arguments)]
fn cmd_gen(
    kind: &str,
    seed: u64,
    n: usize,
    m: usize,
    k: usize,
    range: &str,
    grid: u32,
    t: u32,
    integers: Option<&str>,
    delta: Option<f64>,
    out: &Option<PathBuf>,
) -> CliResult {
    let parse_integers = || -> CliResult<Vec<u64>> {
        let text = integers
            .ok_or_else(|| CliError::Validation("the partition gadget needs --integers".into()))?;
        text.split(',')
            .map(|p| {
                p.trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::Validation(format!("bad integer {p:?}")))
            })
            .collect()
    };

    let text = match kind {
        "tightness" => json::delegation_to_json(&tightness_instance(t)?),
        "partition" => {
            json::assortment_to_json(&partition_gadget(&parse_integers()?, delta)?.assortment)
        }
        "partition-delegation" => {
            json::delegation_to_json(&partition_gadget(&parse_integers()?, delta)?.delegation)
        }
        family => {
            let family = match family {
                "generic-uc" => Family::GenericUc,
                "delegation" => Family::Delegation,
                "delegation-random-bias" => Family::DelegationRandomBias,
                "delegation-outside" => Family::DelegationOutside,
                "pricing" => Family::Pricing,
                "assortment" => Family::Assortment,
                other => {
                    return Err(CliError::Validation(format!(
                        "unknown generator kind {other:?}"
                    )))
                }
            };
            let spec = RandomSpec {
                n,
                m,
                k,
                utility_range: parse_range(range)?,
                probability_grid: grid,
                family,
                seed,
            };
            match random_instance(&spec)? {
                Generated::Uc(inst) => json::instance_to_json(&inst),
                Generated::Delegation(d) => json::delegation_to_json(&d),
                Generated::Pricing(p) => json::pricing_to_json(&p),
                Generated::Assortment(a) => json::assortment_to_json(&a),
            }
        }
    };
    emit(out, &text)
}

#[derive(Serialize)]
struct SidecarPiece {
    action: usize,
    config: usize,
    atom: usize,
    pieces: Vec<usize>,
}

fn cmd_preprocess(
    input: &Path,
    bins: u32,
    delta: Option<f64>,
    out: &Option<PathBuf>,
    sidecar: &Option<PathBuf>,
) -> CliResult {
    let instance = read_instance(input)?;
    let params = PreprocessParams {
        bins,
        delta: delta.map_or(Delta::Auto, Delta::Fixed),
    };
    let result = preprocess(&instance, &params)?;
    if let Some(path) = sidecar {
        let pieces: Vec<SidecarPiece> = result
            .provenance
            .iter()
            .map(|p| SidecarPiece {
                action: p.action,
                config: p.config,
                atom: p.atom,
                pieces: p.pieces.clone(),
            })
            .collect();
        let doc = serde_json::json!({ "delta": result.delta, "provenance": pieces });
        fs::write(path, serde_json::to_string_pretty(&doc).unwrap())
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display())))?;
    }
    emit(out, &json::instance_to_json(&result.instance))
}
