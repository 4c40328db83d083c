//! Text encodings of reports, trajectories and sweep tables.
//!
//! Reals are rounded to 12 significant digits and printed in their
//! shortest round-trip form, so the same value always prints the same way.

use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::policy_game::{EquilibriumReport, Mode};
use crate::repeated_game::Trajectory;
use crate::{Result, Scalar};

pub const SIGNIFICANT_DIGITS: usize = 12;

pub const REPORT_FIELDS: [&str; 10] = [
    "mode",
    "a",
    "b_bar",
    "discount_factor",
    "pi_discretion",
    "pi_ideal",
    "pi_best_enforceable",
    "range_lo",
    "range_hi",
    "range_width",
];

pub const TRAJECTORY_HEADER: [&str; 8] = [
    "t",
    "announced_target",
    "expected_inflation",
    "realized_inflation",
    "period_loss",
    "action",
    "planned_action",
    "reversal",
];

/// Rounds to `SIGNIFICANT_DIGITS` significant digits. Non-finite values
/// pass through.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Text of `round_sig(x)`: plain decimal, or exponent form outside
/// `[1e-5, 1e16)`.
pub fn fmt_real(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        // Normalizes -0.
        return "0".to_string();
    }
    if r.is_finite() && !(1e-5..1e16).contains(&r.abs()) {
        return format!("{r:e}");
    }
    format!("{r}")
}

/// JSON number for a rounded real; `null` when not finite.
pub fn json_real(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig(x) + 0.0)
        .map(Value::Number)
        .unwrap_or(Value::Null)
}

fn mode_token(mode: Mode) -> &'static str {
    match mode {
        Mode::Baseline => "baseline",
        Mode::Behavioral => "behavioral",
    }
}

/// The report as a JSON object with the fixed field names, in order.
pub fn report_json<T: Scalar>(report: &EquilibriumReport<T>) -> Value {
    let mut m = Map::new();
    m.insert("mode".into(), Value::String(mode_token(report.mode).into()));
    let reals = [
        report.a,
        report.b_bar,
        report.discount_factor,
        report.pi_discretion,
        report.pi_ideal,
        report.pi_best_enforceable,
        report.range_lo,
        report.range_hi,
        report.range_width,
    ];
    for (name, v) in REPORT_FIELDS[1..].iter().zip(reals) {
        m.insert((*name).into(), json_real(v.as_f64()));
    }
    Value::Object(m)
}

pub fn report_csv_row<T: Scalar>(report: &EquilibriumReport<T>) -> Vec<String> {
    let mut row = vec![mode_token(report.mode).to_string()];
    row.extend(
        [
            report.a,
            report.b_bar,
            report.discount_factor,
            report.pi_discretion,
            report.pi_ideal,
            report.pi_best_enforceable,
            report.range_lo,
            report.range_hi,
            report.range_width,
        ]
        .into_iter()
        .map(|v| fmt_real(v.as_f64())),
    );
    row
}

pub fn write_reports_csv<T: Scalar, W: Write>(
    out: W,
    reports: &[EquilibriumReport<T>],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(REPORT_FIELDS)?;
    for r in reports {
        w.write_record(report_csv_row(r))?;
    }
    w.flush()?;
    Ok(())
}

fn trajectory_row<T: Scalar>(p: &crate::repeated_game::PeriodRecord<T>) -> [String; 8] {
    [
        p.t.to_string(),
        p.announced_target
            .map(|x| fmt_real(x.as_f64()))
            .unwrap_or_default(),
        fmt_real(p.expected_inflation.as_f64()),
        fmt_real(p.realized_inflation.as_f64()),
        fmt_real(p.period_loss.as_f64()),
        p.action.token().to_string(),
        p.planned_action.token().to_string(),
        p.reversal.to_string(),
    ]
}

/// One row per period under [`TRAJECTORY_HEADER`]. An abstaining period has
/// an empty `announced_target`.
pub fn write_trajectory_csv<T: Scalar, W: Write>(out: W, trajectory: &Trajectory<T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TRAJECTORY_HEADER)?;
    for p in &trajectory.periods {
        w.write_record(trajectory_row(p))?;
    }
    w.flush()?;
    Ok(())
}

pub fn trajectory_json<T: Scalar>(trajectory: &Trajectory<T>) -> Value {
    #[derive(Serialize)]
    struct Summary {
        policymaker_type: crate::repeated_game::PolicymakerType,
        total_discounted_loss_actual_beta: Value,
        cheat_count: usize,
        reversal_count: usize,
    }
    let periods: Vec<Value> = trajectory
        .periods
        .iter()
        .map(|p| {
            let mut m = Map::new();
            m.insert("t".into(), Value::from(p.t));
            m.insert(
                "announced_target".into(),
                p.announced_target
                    .map(|x| json_real(x.as_f64()))
                    .unwrap_or(Value::Null),
            );
            m.insert(
                "expected_inflation".into(),
                json_real(p.expected_inflation.as_f64()),
            );
            m.insert(
                "realized_inflation".into(),
                json_real(p.realized_inflation.as_f64()),
            );
            m.insert("period_loss".into(), json_real(p.period_loss.as_f64()));
            m.insert("action".into(), Value::String(p.action.token().into()));
            m.insert(
                "planned_action".into(),
                Value::String(p.planned_action.token().into()),
            );
            m.insert("reversal".into(), Value::Bool(p.reversal));
            Value::Object(m)
        })
        .collect();
    let summary = Summary {
        policymaker_type: trajectory.kind,
        total_discounted_loss_actual_beta: json_real(
            trajectory
                .summary
                .total_discounted_loss_actual_beta
                .as_f64(),
        ),
        cheat_count: trajectory.summary.cheat_count,
        reversal_count: trajectory.summary.reversal_count,
    };
    serde_json::json!({
        "summary": summary,
        "periods": periods,
    })
}
