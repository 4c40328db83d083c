//! Randomized cross-checks between independent routes to the same result.
//!
//! Each check draws parameter tuples from a seeded stream and counts the
//! tuples on which the two routes agree within the stated tolerance.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::discounting::DiscountSpec;
use crate::policy_game::{
    best_enforceable_rule_both, enforcement, equilibrium_report, iterate_discretion, temptation,
    EquilibriumReport, GameParams,
};
use crate::repeated_game::{detect_reversal, one_shot_deviation_value, PolicymakerProfile};
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub tolerance: f64,
    pub passed: usize,
    pub failed: usize,
    /// Largest discrepancy seen, in the check's own units.
    pub max_error: f64,
}

impl CheckOutcome {
    fn new(name: &'static str, tolerance: f64) -> Self {
        CheckOutcome {
            name,
            tolerance,
            passed: 0,
            failed: 0,
            max_error: 0.0,
        }
    }

    fn record(&mut self, error: f64) {
        self.max_error = self.max_error.max(error);
        if error <= self.tolerance {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
    }

    fn record_bool(&mut self, ok: bool) {
        self.record(if ok { 0.0 } else { 1.0 });
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub trials: usize,
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(CheckOutcome::ok)
    }

    pub fn failed(&self) -> usize {
        self.checks.iter().map(|c| c.failed).sum()
    }

    pub fn passed(&self) -> usize {
        self.checks.iter().map(|c| c.passed).sum()
    }
}

fn report_fields(r: &EquilibriumReport<f64>) -> [f64; 9] {
    [
        r.a,
        r.b_bar,
        r.discount_factor,
        r.pi_discretion,
        r.pi_ideal,
        r.pi_best_enforceable,
        r.range_lo,
        r.range_hi,
        r.range_width,
    ]
}

/// Runs every check on `trials` random tuples.
pub fn run_oracle_suite(trials: usize, seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |lo: f64, hi: f64| lo + (hi - lo) * rng.random::<f64>();

    let mut closed_vs_bisection =
        CheckOutcome::new("best rule: closed form vs bisection (rel)", 1e-10);
    let mut deviation = CheckOutcome::new(
        "temptation - enforcement vs two-path deviation (abs)",
        1e-12,
    );
    let mut fixed_point = CheckOutcome::new("discretion: fixed point vs b_bar/a (abs)", 1e-12);
    let mut reduction = CheckOutcome::new("beta = 1 behavioral report vs baseline (abs)", 1e-15);
    let mut reversal = CheckOutcome::new("reversal iff beta*delta*E < T <= beta_hat*delta*E", 0.0);
    let mut narrowing = CheckOutcome::new("width(beta*delta) < width(delta) for beta < 1", 0.0);

    for _ in 0..trials {
        let a = draw(0.5, 4.0);
        let b_bar = draw(0.5, 2.0);
        let df = draw(0.05, 0.95);
        let params = GameParams::new(a, b_bar)?;
        let disc = b_bar / a;

        let rule = best_enforceable_rule_both(&params, df)?;
        closed_vs_bisection.record((rule.closed_form - rule.bisection).abs() / rule.closed_form);

        let target = draw(0.0, 1.0) * disc;
        let spec = DiscountSpec::exponential_factor(df)?;
        let two_path = one_shot_deviation_value(&params, &spec, target)?;
        let formula = temptation(target, &params)? - enforcement(target, &params, df)?;
        let sign_ok = two_path.signum() == formula.signum() || formula.abs() <= 1e-12;
        deviation.record(if sign_ok {
            (two_path - formula).abs()
        } else {
            f64::INFINITY
        });

        let fp = iterate_discretion(&params, 0.5)?;
        fixed_point.record((fp.value - disc).abs());

        let delta = draw(0.05, 0.95);
        let base = equilibrium_report(&params, &DiscountSpec::exponential_factor(delta)?)?;
        let behav = equilibrium_report(&params, &DiscountSpec::quasi_hyperbolic(1.0, delta)?)?;
        let worst = report_fields(&base)
            .iter()
            .zip(report_fields(&behav))
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        reduction.record(worst);

        let beta = draw(0.05, 1.0);
        let beta_hat = beta + draw(0.0, 1.0) * (1.0 - beta);
        let profile = PolicymakerProfile::new(beta, beta_hat, delta)?;
        let t = (a * target - b_bar).powi(2) / (2.0 * a);
        let e = b_bar * b_bar / (2.0 * a) - a / 2.0 * target * target;
        let expected = beta * delta * e < t && t <= beta_hat * delta * e;
        reversal.record_bool(detect_reversal(&profile, &params, target)? == expected);

        if beta < 1.0 {
            let biased =
                equilibrium_report(&params, &DiscountSpec::quasi_hyperbolic(beta, delta)?)?;
            narrowing.record_bool(biased.range_width < base.range_width);
        }
    }

    Ok(VerifyReport {
        trials,
        seed,
        checks: vec![
            closed_vs_bisection,
            deviation,
            fixed_point,
            reduction,
            reversal,
            narrowing,
        ],
    })
}
