//! Structured output: JSON or CSV records with locale-independent floats and
//! deterministic ordering.

use clap::ValueEnum;
use serde_json::{json, Value};

use steerbound::linalg::Ket;
use steerbound::scenario::{BoundResult, IdealLhsOptimum};
use steerbound::seesaw::LHSStrategy;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

fn ket_to_json(k: &Ket) -> Value {
    Value::Array(
        k.amps()
            .iter()
            .map(|z| json!([z.re, z.im]))
            .collect(),
    )
}

pub fn bound_result(result: &BoundResult, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(&json!({
            "value": result.value,
            "method": result.method.as_str(),
            "mu_star": result.mu_star,
            "valid": result.valid,
        }))
        .unwrap(),
        OutputFormat::Csv => {
            let mu = result
                .mu_star
                .map(|m| m.to_string())
                .unwrap_or_default();
            format!(
                "value,method,mu_star,valid\n{},{},{},{}",
                result.value,
                result.method.as_str(),
                mu,
                result.valid
            )
        }
    }
}

pub fn ideal_optimum(opt: &IdealLhsOptimum, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(&json!({
            "value": opt.result.value,
            "method": opt.result.method.as_str(),
            "assignment": opt.assignment,
            "state": ket_to_json(&opt.state),
            "valid": opt.result.valid,
        }))
        .unwrap(),
        OutputFormat::Csv => {
            let assignment = opt
                .assignment
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(";");
            format!(
                "value,method,assignment,valid\n{},{},{},{}",
                opt.result.value,
                opt.result.method.as_str(),
                assignment,
                opt.result.valid
            )
        }
    }
}

pub fn strategy(strat: &LHSStrategy, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(&json!({
            "value": strat.value,
            "assignment": strat.assignment,
            "heuristic_assignment": strat.heuristic_assignment,
            "bob_state": ket_to_json(&strat.bob_state),
            "bob_rays": strat
                .bob_rays
                .iter()
                .map(|row| Value::Array(row.iter().map(ket_to_json).collect()))
                .collect::<Vec<_>>(),
        }))
        .unwrap(),
        OutputFormat::Csv => {
            let assignment = strat
                .assignment
                .iter()
                .map(|a| a.to_string())
                .collect::<Vec<_>>()
                .join(";");
            format!(
                "value,assignment,heuristic\n{},{},{}",
                strat.value, assignment, strat.heuristic_assignment
            )
        }
    }
}

pub struct GridRow {
    pub eps1: f64,
    pub eps2: f64,
    pub upper: f64,
    pub lower: f64,
}

pub fn grid_rows(rows: &[GridRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => serde_json::to_string_pretty(
            &rows
                .iter()
                .map(|r| {
                    json!({
                        "eps1": r.eps1,
                        "eps2": r.eps2,
                        "upper": r.upper,
                        "lower": r.lower,
                        "gap": r.upper - r.lower,
                    })
                })
                .collect::<Vec<_>>(),
        )
        .unwrap(),
        OutputFormat::Csv => {
            let mut out = String::from("eps1,eps2,upper,lower,gap\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.eps1,
                    r.eps2,
                    r.upper,
                    r.lower,
                    r.upper - r.lower
                ));
            }
            out.pop();
            out
        }
    }
}
