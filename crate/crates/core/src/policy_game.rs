//! The one-shot and reputational policy game.
//!
//! Per-period loss of the policymaker:
//!
//! ```text
//! z(π, πᵉ) = (a/2)·π² − b·(π − πᵉ)
//! ```
//!
//! Under discretion the policymaker sets `π = b̄/a` whatever agents expect, so
//! the only Nash equilibrium is `π = πᵉ = b̄/a`. An announced target `π̂` is
//! enforceable when the one-period gain from surprising agents (temptation)
//! does not exceed the discounted loss from the punishment interval that
//! follows, during which agents expect discretion (enforcement).
//!
//! Equating the two gives the best enforceable rule in closed form,
//! `π̂* = (b̄/a)·(1 − w)/(1 + w)` where `w` is the total discount weight on
//! the punishment interval. [`best_enforceable_rule`] computes it that way
//! and by bisection, and refuses to answer if the two disagree.

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::discounting::DiscountSpec;
use crate::{Error, Result, Scalar};

/// Primitives of the game.
#[derive(Debug, Clone, PartialEq)]
pub struct GameParams<T> {
    /// Weight on the inflation cost.
    pub a: T,
    /// Mean slope of the benefit from surprise inflation.
    pub b_bar: T,
    /// Periods of discretionary expectations that follow a detected cheat.
    pub punishment_periods: u32,
    /// Stochastic benefit slope. `None` means `b_t = b̄` every period.
    pub shock: Option<ShockSpec<T>>,
}

impl<T: Scalar> GameParams<T> {
    /// Deterministic game with a single punishment period.
    pub fn new(a: T, b_bar: T) -> Result<Self> {
        let params = GameParams {
            a,
            b_bar,
            punishment_periods: 1,
            shock: None,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_punishment_periods(mut self, periods: u32) -> Result<Self> {
        self.punishment_periods = periods;
        self.validate()?;
        Ok(self)
    }

    pub fn with_shock(mut self, shock: ShockSpec<T>) -> Result<Self> {
        self.shock = Some(shock);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a.is_finite() && self.a > T::zero()) {
            return Err(Error::domain(
                "a",
                self.a.as_f64(),
                "must be finite and > 0",
            ));
        }
        if !(self.b_bar.is_finite() && self.b_bar > T::zero()) {
            return Err(Error::domain(
                "b_bar",
                self.b_bar.as_f64(),
                "must be finite and > 0",
            ));
        }
        if self.punishment_periods == 0 {
            return Err(Error::domain(
                "punishment_periods",
                0.0,
                "must be at least 1",
            ));
        }
        if !self.discretion().is_finite() {
            return Err(Error::Numerical(format!(
                "discretionary inflation b_bar/a = {}/{} overflows",
                self.b_bar, self.a
            )));
        }
        if let Some(shock) = &self.shock {
            shock.validate(self.b_bar)?;
        }
        Ok(())
    }

    /// Discretionary inflation `b̄/a`.
    pub fn discretion(&self) -> T {
        self.b_bar / self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShockDistribution<T> {
    None,
    Uniform {
        lo: T,
        hi: T,
    },
    /// Logistic around `mean`, restricted to `(0, 2·mean)` by rejection.
    /// The window is symmetric about the mean, so the mean is preserved.
    LogisticClippedPositive {
        mean: T,
        scale: T,
    },
}

/// Distribution and seed of the per-period benefit slope `b_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockSpec<T> {
    pub distribution: ShockDistribution<T>,
    pub seed: u64,
    /// Draws used by the Monte Carlo expectations.
    #[serde(default = "default_draws")]
    pub draws: usize,
}

fn default_draws() -> usize {
    100_000
}

impl<T: Scalar> ShockSpec<T> {
    pub fn new(distribution: ShockDistribution<T>, seed: u64) -> Self {
        ShockSpec {
            distribution,
            seed,
            draws: default_draws(),
        }
    }

    /// Checks positivity of the support and that the analytic mean is `b̄`.
    pub fn validate(&self, b_bar: T) -> Result<()> {
        let mean_matches = |m: T| (m - b_bar).abs() <= T::agreement_tol() * b_bar;
        match self.distribution {
            ShockDistribution::None => {}
            ShockDistribution::Uniform { lo, hi } => {
                if !(lo.is_finite() && lo > T::zero()) {
                    return Err(Error::domain(
                        "shock.lo",
                        lo.as_f64(),
                        "support must be > 0",
                    ));
                }
                if !(hi.is_finite() && hi >= lo) {
                    return Err(Error::domain(
                        "shock.hi",
                        hi.as_f64(),
                        "must be finite and >= lo",
                    ));
                }
                let mean = (lo + hi) / T::lit(2.0);
                if !mean_matches(mean) {
                    return Err(Error::domain(
                        "shock.mean",
                        mean.as_f64(),
                        "uniform midpoint must equal b_bar",
                    ));
                }
            }
            ShockDistribution::LogisticClippedPositive { mean, scale } => {
                if !mean_matches(mean) {
                    return Err(Error::domain(
                        "shock.mean",
                        mean.as_f64(),
                        "must equal b_bar",
                    ));
                }
                if !(scale.is_finite() && scale > T::zero()) {
                    return Err(Error::domain(
                        "shock.scale",
                        scale.as_f64(),
                        "must be finite and > 0",
                    ));
                }
            }
        }
        if self.draws < 2 {
            return Err(Error::domain(
                "shock.draws",
                self.draws as f64,
                "must be at least 2",
            ));
        }
        Ok(())
    }

    /// Infinite stream of `b_t` draws, fully determined by `seed`.
    pub fn sampler(&self, b_bar: T) -> ShockSampler<T> {
        ShockSampler {
            distribution: self.distribution,
            b_bar,
            rng: ChaCha8Rng::seed_from_u64(self.seed),
        }
    }
}

pub struct ShockSampler<T> {
    distribution: ShockDistribution<T>,
    b_bar: T,
    rng: ChaCha8Rng,
}

impl<T: Scalar> Iterator for ShockSampler<T> {
    type Item = T;

    fn next(&mut self) -> Option<T> {
        let b = match self.distribution {
            ShockDistribution::None => self.b_bar,
            ShockDistribution::Uniform { lo, hi } => {
                let u: f64 = self.rng.random();
                lo + (hi - lo) * T::lit(u)
            }
            ShockDistribution::LogisticClippedPositive { mean, scale } => {
                let (m, s) = (mean.as_f64(), scale.as_f64());
                loop {
                    let u: f64 = self.rng.random();
                    if u <= 0.0 {
                        continue;
                    }
                    let x = m + s * (u / (1.0 - u)).ln();
                    if x > 0.0 && x < 2.0 * m {
                        break T::lit(x);
                    }
                }
            }
        };
        Some(b)
    }
}

/// Monte Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub mean: T,
    pub std_error: T,
    pub draws: usize,
}

impl<T: Scalar> Estimate<T> {
    fn exact(value: T) -> Self {
        Estimate {
            mean: value,
            std_error: T::zero(),
            draws: 0,
        }
    }

    fn from_samples(samples: impl Iterator<Item = T>) -> Self {
        // Welford's running mean and variance.
        let (mut n, mut mean, mut m2) = (0usize, T::zero(), T::zero());
        for x in samples {
            n += 1;
            let delta = x - mean;
            mean = mean + delta / T::lit(n as f64);
            m2 = m2 + delta * (x - mean);
        }
        let var = if n > 1 {
            m2 / T::lit((n - 1) as f64)
        } else {
            T::zero()
        };
        Estimate {
            mean,
            std_error: (var / T::lit(n.max(1) as f64)).sqrt(),
            draws: n,
        }
    }
}

fn check_finite<T: Scalar>(field: &'static str, x: T) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(field, x.as_f64(), "must be finite"))
    }
}

fn check_target<T: Scalar>(target: T) -> Result<()> {
    check_finite("target", target)?;
    if target < T::zero() {
        return Err(Error::domain(
            "target",
            target.as_f64(),
            "deflation targets are outside the model",
        ));
    }
    Ok(())
}

/// Inflation cost `(a/2)·π²`.
pub fn inflation_cost<T: Scalar>(pi: T, a: T) -> T {
    a / T::lit(2.0) * pi * pi
}

/// Benefit of surprise inflation `b·(π − πᵉ)`.
pub fn surprise_benefit<T: Scalar>(pi: T, pi_e: T, b: T) -> T {
    b * (pi - pi_e)
}

/// Period loss `(a/2)·π² − b·(π − πᵉ)`.
pub fn loss<T: Scalar>(pi: T, pi_e: T, params: &GameParams<T>, b_t: T) -> Result<T> {
    params.validate()?;
    check_finite("pi", pi)?;
    check_finite("pi_e", pi_e)?;
    check_finite("b_t", b_t)?;
    Ok(inflation_cost(pi, params.a) - surprise_benefit(pi, pi_e, b_t))
}

/// Loss-minimizing inflation for fixed expectations: `b̄/a`.
pub fn best_cheat<T: Scalar>(params: &GameParams<T>) -> Result<T> {
    params.validate()?;
    Ok(params.discretion())
}

/// One-period gain from inflating to `b̄/a` while agents expect `target`:
/// `(a·target − b̄)²/(2a)`.
pub fn temptation<T: Scalar>(target: T, params: &GameParams<T>) -> Result<T> {
    params.validate()?;
    check_target(target)?;
    Ok(temptation_unchecked(target, params.a, params.b_bar))
}

// Written around b̄/a so that both vanish exactly at discretion.
pub(crate) fn temptation_unchecked<T: Scalar>(target: T, a: T, b_bar: T) -> T {
    let gap = target - b_bar / a;
    a / T::lit(2.0) * gap * gap
}

/// Loss increase in one punishment period: discretionary outcome
/// `b̄²/(2a)` against the rule outcome `(a/2)·target²`.
pub(crate) fn punishment_differential<T: Scalar>(target: T, a: T, b_bar: T) -> T {
    let disc = b_bar / a;
    a / T::lit(2.0) * (disc - target) * (disc + target)
}

fn check_discount_factor<T: Scalar>(df: T) -> Result<()> {
    if !(df > T::zero() && df <= T::one()) {
        return Err(Error::domain(
            "discount_factor",
            df.as_f64(),
            "must lie in (0, 1]",
        ));
    }
    Ok(())
}

/// Total weight `Σ_{k=1}^{P} df^k` on a punishment interval of `P` periods
/// discounted at a constant per-period factor.
fn geometric_weight<T: Scalar>(df: T, periods: u32) -> T {
    let mut running = T::one();
    (0..periods)
        .map(|_| {
            running = running * df;
            running
        })
        .sum()
}

/// Total weight `Σ_{k=1}^{P} D(k)` the spec puts on a punishment interval of
/// `periods` periods starting next period.
pub fn punishment_weight<T: Scalar>(spec: &DiscountSpec<T>, periods: u32) -> T {
    spec.weights().skip(1).take(periods as usize).sum()
}

/// Discounted loss increase from the punishment that follows a cheat.
///
/// `discount_factor` is the one-period factor: `q̃` for an exponential
/// policymaker, `β·δ` for a quasi-hyperbolic one. A punishment interval of
/// `P > 1` periods is discounted geometrically at that factor; use
/// [`enforcement_under`] to weight the interval by a full discount function.
pub fn enforcement<T: Scalar>(target: T, params: &GameParams<T>, discount_factor: T) -> Result<T> {
    params.validate()?;
    check_target(target)?;
    check_discount_factor(discount_factor)?;
    let weight = geometric_weight(discount_factor, params.punishment_periods);
    Ok(weight * punishment_differential(target, params.a, params.b_bar))
}

/// Enforcement with the punishment interval weighted by `spec`.
pub fn enforcement_under<T: Scalar>(
    target: T,
    params: &GameParams<T>,
    spec: &DiscountSpec<T>,
) -> Result<T> {
    params.validate()?;
    check_target(target)?;
    spec.validate()?;
    let weight = punishment_weight(spec, params.punishment_periods);
    Ok(weight * punishment_differential(target, params.a, params.b_bar))
}

/// Expected temptation under the benefit-slope shock.
///
/// Inflation is set before `b_t` is realized, so the cheat is `b̄/a` and the
/// per-draw gain `(a/2)·target² − (a/2)·(b̄/a)² + b_t·(b̄/a − target)` is linear
/// in `b_t`. Without a shock the exact value is returned with zero error.
pub fn expected_temptation<T: Scalar>(target: T, params: &GameParams<T>) -> Result<Estimate<T>> {
    let exact = temptation(target, params)?;
    let Some(shock) = params
        .shock
        .filter(|s| s.distribution != ShockDistribution::None)
    else {
        return Ok(Estimate::exact(exact));
    };
    let cheat = params.discretion();
    let a = params.a;
    let samples = shock.sampler(params.b_bar).take(shock.draws).map(|b| {
        (inflation_cost(target, a) - surprise_benefit(target, target, b))
            - (inflation_cost(cheat, a) - surprise_benefit(cheat, target, b))
    });
    Ok(Estimate::from_samples(samples))
}

/// Expected enforcement under the benefit-slope shock, one-period factor
/// `discount_factor` as in [`enforcement`].
///
/// During punishment inflation and expectations both sit at `b̄/a`, so the
/// surprise term vanishes draw by draw and the standard error is zero.
pub fn expected_enforcement<T: Scalar>(
    target: T,
    params: &GameParams<T>,
    discount_factor: T,
) -> Result<Estimate<T>> {
    let exact = enforcement(target, params, discount_factor)?;
    let Some(shock) = params
        .shock
        .filter(|s| s.distribution != ShockDistribution::None)
    else {
        return Ok(Estimate::exact(exact));
    };
    let weight = geometric_weight(discount_factor, params.punishment_periods);
    let d = params.discretion();
    let a = params.a;
    // Shocks are drawn from a stream offset from the temptation stream.
    let mut stream = shock;
    stream.seed = shock.seed.wrapping_add(1);
    let samples = stream.sampler(params.b_bar).take(shock.draws).map(|b| {
        let punished = inflation_cost(d, a) - surprise_benefit(d, d, b);
        let complied = inflation_cost(target, a) - surprise_benefit(target, target, b);
        weight * (punished - complied)
    });
    Ok(Estimate::from_samples(samples))
}

/// Outcome of best-response iteration on expectations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPoint<T> {
    pub value: T,
    pub steps: usize,
}

pub const MAX_FIXED_POINT_STEPS: usize = 10_000;

/// Damped best-response iteration `πᵉ ← πᵉ + λ·(BR(πᵉ) − πᵉ)` from `πᵉ = 0`,
/// stopping once a step moves less than `1e-12`.
pub fn iterate_discretion<T: Scalar>(params: &GameParams<T>, damping: T) -> Result<FixedPoint<T>> {
    params.validate()?;
    if !(damping > T::zero() && damping <= T::one()) {
        return Err(Error::domain(
            "damping",
            damping.as_f64(),
            "must lie in (0, 1]",
        ));
    }
    let tol = T::lit(1e-12).max(T::lit(4.0) * T::epsilon() * params.discretion());
    let mut expected = T::zero();
    for step in 1..=MAX_FIXED_POINT_STEPS {
        let response = best_response(expected, params);
        let delta = damping * (response - expected);
        expected = expected + delta;
        if delta.abs() < tol {
            return Ok(FixedPoint {
                value: expected,
                steps: step,
            });
        }
    }
    Err(Error::Numerical(format!(
        "best-response iteration did not converge in {MAX_FIXED_POINT_STEPS} steps (last {})",
        expected
    )))
}

// First-order condition of the period loss in π at fixed expectations:
// a·π − b̄ = 0. Expectations drop out.
fn best_response<T: Scalar>(_expected: T, params: &GameParams<T>) -> T {
    params.b_bar / params.a
}

/// Discretionary equilibrium inflation `b̄/a`, checked against best-response
/// iteration.
pub fn discretionary_equilibrium<T: Scalar>(params: &GameParams<T>) -> Result<T> {
    let analytic = best_cheat(params)?;
    let iterated = iterate_discretion(params, T::lit(0.5))?;
    let tol = T::lit(1e-12).max(T::lit(8.0) * T::epsilon() * analytic);
    if (iterated.value - analytic).abs() > tol {
        return Err(Error::Numerical(format!(
            "fixed point {} disagrees with analytic discretion {}",
            iterated.value, analytic
        )));
    }
    Ok(analytic)
}

/// Best enforceable rule computed both ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestRule<T> {
    pub closed_form: T,
    pub bisection: T,
}

/// `(b̄/a)·(1 − w)/(1 + w)`, or `0` when `w ≥ 1` makes the ideal rule
/// enforceable.
pub fn best_rule_closed_form<T: Scalar>(params: &GameParams<T>, weight: T) -> T {
    if weight >= T::one() {
        return T::zero();
    }
    params.discretion() * (T::one() - weight) / (T::one() + weight)
}

/// Smallest target `π ≥ 0` with `temptation(π) ≤ weight·differential(π)`,
/// by bisection.
///
/// `g = temptation − enforcement` vanishes at `b̄/a` as well as at the rule,
/// and is negative in between, so the upper end of the bracket is searched
/// for on `b̄/a·(1 − 2⁻ᵏ)`.
pub fn best_rule_bisection<T: Scalar>(params: &GameParams<T>, weight: T) -> Result<T> {
    let (a, b_bar) = (params.a, params.b_bar);
    let g =
        |pi: T| temptation_unchecked(pi, a, b_bar) - weight * punishment_differential(pi, a, b_bar);
    let disc = params.discretion();
    let mut lo = T::zero();
    let g_lo = g(lo);
    if g_lo <= T::zero() {
        return Ok(T::zero());
    }

    let mut hi = None;
    let mut gap = T::lit(0.5);
    while gap > T::epsilon() {
        let candidate = disc * (T::one() - gap);
        if g(candidate) <= T::zero() {
            hi = Some(candidate);
            break;
        }
        gap = gap * T::lit(0.5);
    }
    let Some(mut hi) = hi else {
        return Err(Error::Numerical(format!(
            "no enforceable target below discretion: g(0) = {g_lo}, g({}) = {}, weight = {weight}",
            disc * (T::one() - gap),
            g(disc * (T::one() - gap))
        )));
    };

    for _ in 0..400 {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) <= T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn solve_best_rule<T: Scalar>(params: &GameParams<T>, weight: T) -> Result<BestRule<T>> {
    let closed_form = best_rule_closed_form(params, weight);
    let bisection = best_rule_bisection(params, weight)?;
    // The absolute floor only matters as the rule approaches zero, where
    // bisection on g is limited by cancellation in g itself.
    let floor = T::lit(64.0) * T::epsilon() * params.discretion();
    if (closed_form - bisection).abs() > T::agreement_tol() * closed_form + floor {
        return Err(Error::Numerical(format!(
            "best enforceable rule: closed form {closed_form} vs bisection {bisection} (weight {weight})"
        )));
    }
    Ok(BestRule {
        closed_form,
        bisection,
    })
}

/// Both routes to the best enforceable rule at one-period factor
/// `discount_factor ∈ (0, 1)`.
pub fn best_enforceable_rule_both<T: Scalar>(
    params: &GameParams<T>,
    discount_factor: T,
) -> Result<BestRule<T>> {
    params.validate()?;
    if !(discount_factor > T::zero() && discount_factor < T::one()) {
        return Err(Error::domain(
            "discount_factor",
            discount_factor.as_f64(),
            "must lie in (0, 1)",
        ));
    }
    solve_best_rule(
        params,
        geometric_weight(discount_factor, params.punishment_periods),
    )
}

/// Lowest inflation target the policymaker can credibly hold.
pub fn best_enforceable_rule<T: Scalar>(params: &GameParams<T>, discount_factor: T) -> Result<T> {
    best_enforceable_rule_both(params, discount_factor).map(|r| r.closed_form)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Exponential discounting.
    Baseline,
    /// Quasi-hyperbolic discounting.
    Behavioral,
}

/// Equilibrium summary of the reputational game for one discount function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumReport<T> {
    pub mode: Mode,
    pub a: T,
    pub b_bar: T,
    /// One-period factor `q̃` (baseline) or `β·δ` (behavioral).
    pub discount_factor: T,
    pub pi_discretion: T,
    pub pi_ideal: T,
    pub pi_best_enforceable: T,
    pub range_lo: T,
    pub range_hi: T,
    pub range_width: T,
}

/// Builds the report for an exponential (baseline) or quasi-hyperbolic
/// (behavioral) policymaker.
pub fn equilibrium_report<T: Scalar>(
    params: &GameParams<T>,
    spec: &DiscountSpec<T>,
) -> Result<EquilibriumReport<T>> {
    params.validate()?;
    spec.validate()?;
    let mode = match spec {
        DiscountSpec::Exponential { .. } => Mode::Baseline,
        DiscountSpec::QuasiHyperbolic { .. } => Mode::Behavioral,
        DiscountSpec::GeneralizedHyperbolic { .. } => {
            return Err(Error::Unsupported(
                "hyperbolic discounting has no single per-period factor for enforcement",
            ))
        }
    };
    let discount_factor = spec.eval(1);
    if discount_factor >= T::one() {
        return Err(Error::domain(
            "discount_factor",
            discount_factor.as_f64(),
            "must lie in (0, 1)",
        ));
    }
    let pi_discretion = discretionary_equilibrium(params)?;
    let weight = punishment_weight(spec, params.punishment_periods);
    let pi_best_enforceable = solve_best_rule(params, weight)?.closed_form;
    Ok(EquilibriumReport {
        mode,
        a: params.a,
        b_bar: params.b_bar,
        discount_factor,
        pi_discretion,
        pi_ideal: T::zero(),
        pi_best_enforceable,
        range_lo: pi_best_enforceable,
        range_hi: pi_discretion,
        range_width: pi_discretion - pi_best_enforceable,
    })
}
