//! The `jetinv` command line: scenario parsing, commands and reports.
//!
//! Exit codes: 0 when every check passes, 1 when a verification fails, 2 for
//! malformed input, 3 when the surface is degenerate for the request (a
//! vanishing invariant or a singular frame).

pub mod error;
pub mod report;
pub mod scenario;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use jetinv::decomp::{count_decompositions, decompose_target, scan_representable, Decomposition, Variant};
use jetinv::frame::{commutator_residuals, monomial_coefficient};
use jetinv::multiindex::enumerate;
use jetinv::random::Sampler;
use jetinv::rational::format_rational;
use jetinv::suite::{default_frame_choices, run_all, SuiteConfig, DEFAULT_SEED};
use jetinv::trials::Execution;
use jetinv::{
    build_frame, chain_blocks, equivariance_check, relative_invariant, closed_form_chain_row, weights, Matrix, Normalization,
    ReparamJet, RepresentationChoice, Weights,
};
use serde_json::{json, Map, Value};

pub use error::CliError;
pub use report::Outcome;
pub use scenario::Scenario;

#[derive(Debug, Parser)]
#[command(name = "jetinv", version, about = "Exact relative invariants, invariant frames and their checks")]
pub struct Cli {
    /// Emit the report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a scenario and print it in canonical form.
    Show { scenario: PathBuf },
    /// Print the relative invariant of the scenario surface.
    Invariant {
        scenario: PathBuf,
        /// Representation choice, e.g. `k=3,js=1:2,zero-row=false`.
        #[arg(long, value_parser = parse_choice)]
        choice: Option<RepresentationChoice>,
    },
    /// Check the transformation law under the scenario reparameterization
    /// and group element (identity where absent).
    Verify {
        scenario: PathBuf,
        #[arg(long, value_parser = parse_choice)]
        choice: Option<RepresentationChoice>,
    },
    /// Build the invariant frame and the commutators of its derivations.
    Frame {
        scenario: PathBuf,
        /// Order to which frame entries are computed (default: up to 2, as
        /// far as the surface order allows).
        #[arg(long)]
        order: Option<usize>,
        /// Seed for the random test function.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Compare the closed-form chain-rule blocks of the scenario
    /// reparameterization with the recursion and the monomial expansion.
    ChainCheck {
        scenario: PathBuf,
        /// Highest block row (default: min(order, 4)).
        #[arg(long)]
        power: Option<usize>,
    },
    /// List every decomposition of a target into distinct terms C(n−1+l, n−1).
    Decompose {
        #[arg(long)]
        n: usize,
        /// Explicit target; otherwise C(m+k, m) (minus one with --no-zero-row).
        #[arg(long, conflicts_with_all = ["m", "k"])]
        target: Option<u64>,
        #[arg(long, requires = "k")]
        m: Option<usize>,
        #[arg(long, requires = "m")]
        k: Option<usize>,
        #[arg(long)]
        no_zero_row: bool,
        /// Refuse to list more decompositions than this.
        #[arg(long, default_value_t = 10_000)]
        limit: u128,
    },
    /// Tabulate which targets C(m+k, m) are representable for k = 1..=kmax.
    Scan {
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        no_zero_row: bool,
    },
    /// Run the randomized verification suite.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Random trials per configuration.
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Also run the large-matrix transformation-law checks.
        #[arg(long)]
        extended: bool,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
    },
}

/// Parses `k=3,js=1:2,zero-row=false`; `zero-row` defaults to true.
pub fn parse_choice(text: &str) -> Result<RepresentationChoice, String> {
    let (mut k, mut js, mut zero_row) = (None, None, true);
    for part in text.split(',') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("expected key=value, found {part:?}"))?;
        match key.trim() {
            "k" => k = Some(value.trim().parse::<usize>().map_err(|e| format!("k: {e}"))?),
            "js" => {
                js = Some(
                    value
                        .split(':')
                        .map(|j| j.trim().parse::<usize>().map_err(|e| format!("js: {e}")))
                        .collect::<Result<Vec<_>, _>>()?,
                )
            }
            "zero-row" => zero_row = value.trim().parse::<bool>().map_err(|e| format!("zero-row: {e}"))?,
            other => return Err(format!("unknown key {other:?}")),
        }
    }
    let k = k.ok_or("missing k")?;
    let js = js.ok_or("missing js")?;
    RepresentationChoice::new(k, &js, zero_row).map_err(|e| e.to_string())
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Show { scenario } => show(&Scenario::from_path(scenario)?),
        Command::Invariant { scenario, choice } => invariant(&Scenario::from_path(scenario)?, choice.as_ref()),
        Command::Verify { scenario, choice } => verify(&Scenario::from_path(scenario)?, choice.as_ref()),
        Command::Frame { scenario, order, seed } => frame(&Scenario::from_path(scenario)?, *order, *seed),
        Command::ChainCheck { scenario, power } => chain_check(&Scenario::from_path(scenario)?, *power),
        Command::Decompose {
            n,
            target,
            m,
            k,
            no_zero_row,
            limit,
        } => {
            let target = match (target, m, k) {
                (Some(t), _, _) => *t,
                (None, Some(m), Some(k)) => variant(*no_zero_row).target(*m, *k),
                _ => return Err(CliError::Input("give --target or both --m and --k".into())),
            };
            decompose(*n, target, *limit)
        }
        Command::Scan { m, n, kmax, no_zero_row } => scan(*m, *n, *kmax, variant(*no_zero_row)),
        Command::Selftest {
            seed,
            trials,
            extended,
            sequential,
        } => Ok(selftest(*seed, *trials, *extended, *sequential)),
    }
}

fn variant(no_zero_row: bool) -> Variant {
    if no_zero_row {
        Variant::WithoutZeroRow
    } else {
        Variant::WithZeroRow
    }
}

fn object(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map,
        _ => unreachable!("reports are objects"),
    }
}

fn weights_json(w: &Weights) -> Value {
    json!({ "l": w.l, "K": w.k_exp })
}

fn matrix_json(m: &Matrix) -> Value {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(format_rational).collect::<Vec<_>>())
        .collect()
}

fn scenario_choice(sc: &Scenario, flag: Option<&RepresentationChoice>) -> Result<RepresentationChoice, CliError> {
    flag.or(sc.choice.as_ref())
        .cloned()
        .ok_or_else(|| CliError::Input("no representation choice: pass --choice or add [choice] to the scenario".into()))
}

fn show(sc: &Scenario) -> Result<Outcome, CliError> {
    let mut report = object(json!({ "command": "show" }));
    report.extend(object(serde_json::to_value(sc.to_raw()).expect("scenario serializes")));
    Ok(Outcome { report, pass: true })
}

fn invariant(sc: &Scenario, flag: Option<&RepresentationChoice>) -> Result<Outcome, CliError> {
    let choice = scenario_choice(sc, flag)?;
    let w = weights(sc.m, sc.n, &choice)?;
    let value = relative_invariant(&sc.surface, &choice)?;
    Ok(Outcome {
        report: object(json!({
            "command": "invariant",
            "choice": choice.to_string(),
            "size": choice.col_count(sc.n),
            "weights": weights_json(&w),
            "value": format_rational(&value),
        })),
        pass: true,
    })
}

fn verify(sc: &Scenario, flag: Option<&RepresentationChoice>) -> Result<Outcome, CliError> {
    let choice = scenario_choice(sc, flag)?;
    let s = sc.reparam.clone().unwrap_or_else(|| ReparamJet::identity(sc.m, sc.order));
    let h = sc.group_element.clone().unwrap_or_else(|| Matrix::identity(sc.n));
    let r = equivariance_check(&sc.surface, &s, &h, &choice)?;
    Ok(Outcome {
        report: object(json!({
            "command": "verify",
            "choice": choice.to_string(),
            "reparam": if sc.reparam.is_some() { "scenario" } else { "identity" },
            "group_element": if sc.group_element.is_some() { "scenario" } else { "identity" },
            "weights": weights_json(&r.weights),
            "det_g": format_rational(&r.det_g),
            "det_h": format_rational(&r.det_h),
            "invariant_u": format_rational(&r.invariant_u),
            "invariant_v": format_rational(&r.lhs),
            "expected_v": format_rational(&r.rhs),
            "pass": r.pass,
        })),
        pass: r.pass,
    })
}

fn frame(sc: &Scenario, order: Option<usize>, seed: u64) -> Result<Outcome, CliError> {
    let choices = match &sc.frame_choices {
        Some(cs) => cs.clone(),
        None if sc.m == 2 && matches!(sc.n, 3 | 4) => default_frame_choices(sc.n),
        None => {
            return Err(CliError::Input(format!(
                "no default frame for m = {}, n = {}; add frame_choices to the scenario",
                sc.m, sc.n
            )))
        }
    };
    let top = choices.iter().map(|c| c.k).max().unwrap_or(0);
    let available = sc.order.checked_sub(top + 1).ok_or_else(|| {
        CliError::Input(format!("order: {} is too low, the frame invariants need at least {}", sc.order, top + 1))
    })?;
    let order = match order {
        Some(o) if o > available => {
            return Err(CliError::Input(format!(
                "--order {o} needs a surface of order {}, the scenario has {}",
                o + top + 1,
                sc.order
            )))
        }
        Some(o) => o,
        None => available.min(2),
    };
    let frame = build_frame(&sc.surface, &choices, order)?;
    let phi = Sampler::new(seed).scalar_jet(sc.m, order + 1);
    let residuals = commutator_residuals(&frame, &phi)?;
    let closed = frame.is_closed()?;
    let commute = residuals.iter().all(|(_, r)| r.is_zero());
    let m = frame.vars();
    let entries: Vec<Vec<String>> = (0..m)
        .map(|i| (0..m).map(|j| frame.matrix().get(i, j).to_string()).collect())
        .collect();
    let residual_rows: Vec<Value> = residuals
        .iter()
        .map(|((i, j), r)| {
            json!({
                "pair": format!("δ{},δ{}", i + 1, j + 1),
                "residual": r.to_string(),
                "valid_to_order": r.order(),
            })
        })
        .collect();
    Ok(Outcome {
        report: object(json!({
            "command": "frame",
            "invariants": choices.iter().zip(frame.weights()).map(|(c, w)| json!({
                "choice": c.to_string(),
                "weights": weights_json(w),
            })).collect::<Vec<_>>(),
            "valid_order": frame.valid_order(),
            "at_origin": matrix_json(&frame.constant_term()),
            "entries": entries,
            "closed": closed,
            "test_function": phi.to_string(),
            "commutators": residual_rows,
            "pass": closed && commute,
        })),
        pass: closed && commute,
    })
}

fn chain_check(sc: &Scenario, power: Option<usize>) -> Result<Outcome, CliError> {
    let s = sc
        .reparam
        .as_ref()
        .ok_or_else(|| CliError::Input("reparam: chain-check needs a reparameterization".into()))?;
    let power = power.unwrap_or(sc.order.min(4));
    if power == 0 || power > sc.order {
        return Err(CliError::Input(format!("--power must lie in 1..={}", sc.order)));
    }
    let chain = chain_blocks(s, power)?;
    let mut rows = Vec::new();
    let mut pass = true;
    for p in 1..=power {
        let mut oracle_mismatches = 0usize;
        for (a_rank, alpha) in enumerate(sc.m, p).iter().enumerate() {
            for q in 0..=p {
                for (g_rank, gamma) in enumerate(sc.m, q).iter().enumerate() {
                    if chain.block(p, q).matrix()[(a_rank, g_rank)] != monomial_coefficient(s, alpha, gamma)? {
                        oracle_mismatches += 1;
                    }
                }
            }
        }
        let closed = closed_form_chain_row(s, p, Normalization::Shifted)?;
        let closed_mismatches = closed
            .iter()
            .enumerate()
            .filter(|(q, block)| **block != chain.block(p, *q))
            .count();
        pass &= oracle_mismatches == 0 && closed_mismatches == 0;
        rows.push(json!({
            "power": p,
            "recursion_vs_expansion_mismatches": oracle_mismatches,
            "closed_form_mismatches": closed_mismatches,
        }));
    }
    let mut report = object(json!({
        "command": "chain-check",
        "jacobian": matrix_json(&s.jacobian_at_origin()),
        "rows": rows,
    }));
    if power >= 2 {
        // dividing the base factors by i! instead of (i+1)! is only correct
        // when the reparameterization is linear
        let literal = closed_form_chain_row(s, 2, Normalization::Literal)?;
        let agrees = literal.iter().enumerate().all(|(q, block)| *block == chain.block(2, q));
        report.insert("unshifted_normalization_at_power_2".into(), json!(if agrees { "agrees" } else { "differs" }));
    }
    report.insert("pass".into(), json!(pass));
    Ok(Outcome { report, pass })
}

fn count_json(count: u128) -> Value {
    u64::try_from(count).map_or_else(|_| json!(count.to_string()), |c| json!(c))
}

fn decomposition_json(d: &Decomposition) -> Value {
    json!({
        "js": d.parts.iter().map(ToString::to_string).collect::<Vec<_>>().join(":"),
        "sum": d.values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" + "),
    })
}

fn decompose(n: usize, target: u64, limit: u128) -> Result<Outcome, CliError> {
    if n < 2 {
        return Err(CliError::Input("n: must be at least 2".into()));
    }
    let count = count_decompositions(target, n);
    if count > limit {
        return Err(CliError::Input(format!(
            "{target} has {count} decompositions for n = {n}; raise --limit to list them"
        )));
    }
    let all = decompose_target(target, n);
    Ok(Outcome {
        report: object(json!({
            "command": "decompose",
            "n": n,
            "target": target,
            "count": count_json(count),
            "decompositions": all.iter().map(decomposition_json).collect::<Vec<_>>(),
        })),
        pass: true,
    })
}

fn scan(m: usize, n: usize, kmax: usize, variant: Variant) -> Result<Outcome, CliError> {
    if m == 0 || n < 2 {
        return Err(CliError::Input("need m ≥ 1 and n ≥ 2".into()));
    }
    let rows: Vec<Value> = scan_representable(m, n, kmax, variant)
        .iter()
        .map(|row| {
            json!({
                "k": row.k,
                "target": row.target,
                "count": count_json(row.count),
                "first": row.first.as_ref().map(decomposition_json),
            })
        })
        .collect();
    Ok(Outcome {
        report: object(json!({
            "command": "scan",
            "m": m,
            "n": n,
            "variant": if variant.include_zero_row() { "zero-row" } else { "no-zero-row" },
            "rows": rows,
        })),
        pass: true,
    })
}

fn selftest(seed: u64, trials: usize, extended: bool, sequential: bool) -> Outcome {
    let config = SuiteConfig {
        seed,
        trials,
        execution: if sequential { Execution::Sequential } else { Execution::default() },
        ..SuiteConfig::default()
    };
    let outcomes = run_all(&config, extended);
    let pass = outcomes.iter().all(|o| o.passed());
    let criteria: Vec<Value> = outcomes
        .iter()
        .map(|o| {
            json!({
                "criterion": o.id,
                "title": o.title,
                "status": if o.passed() { "PASS" } else { "FAIL" },
                "checks": o.checks,
                "failures": o.failures.iter().take(5).collect::<Vec<_>>(),
            })
        })
        .collect();
    Outcome {
        report: object(json!({
            "command": "selftest",
            "seed": seed,
            "trials": trials,
            "extended": extended,
            "criteria": criteria,
            "pass": pass,
        })),
        pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn choice_flag() {
        let c = parse_choice("k=3,js=1:2,zero-row=false").unwrap();
        assert_eq!(c, RepresentationChoice::new(3, &[1, 2], false).unwrap());
        assert_eq!(parse_choice("k=1,js=1").unwrap(), RepresentationChoice::new(1, &[1], true).unwrap());
        assert!(parse_choice("k=1").is_err());
        assert!(parse_choice("k=2,js=2:1").is_err());
        assert!(parse_choice("k=1,js=1,colour=red").is_err());
    }

    #[test]
    fn decompose_refuses_huge_listings() {
        assert_eq!(decompose(2, 400, 10_000).unwrap_err().exit_code(), 2);
        let ok = decompose(3, 44, 10_000).unwrap();
        assert!(ok.to_text().contains("sum: 6 + 10 + 28"));
    }
}
