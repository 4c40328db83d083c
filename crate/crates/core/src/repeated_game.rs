//! Period-by-period play of the reputational game by behavioral policymakers.
//!
//! Agents expect the announced target while the policymaker has a clean
//! record. After a cheat they expect discretion for `punishment_periods`
//! periods and then trust the target again.
//!
//! The policymaker's type follows from its actual present bias `β`, its
//! belief `β̂` about its own future present bias, and whether it is bound by
//! a commitment device:
//!
//! | type             | condition                           |
//! |------------------|-------------------------------------|
//! | myopic           | `β ≤ 1e-6`                          |
//! | resolute         | committed, or `β = β̂ = 1`           |
//! | naive            | `β̂ = 1 > β`                         |
//! | sophisticated    | `β̂ = β < 1`                         |
//! | partially naive  | `β < β̂ < 1`                         |

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::discounting::{present_value, DiscountSpec, PayoffStream};
use crate::policy_game::{
    inflation_cost, punishment_differential, surprise_benefit, temptation_unchecked, GameParams,
    ShockDistribution,
};
use crate::{Error, Result, Scalar};

/// Present bias at or below which a policymaker is treated as myopic.
pub const MYOPIC_THRESHOLD: f64 = 1e-6;
/// Absolute tolerance on equality between `β`, `β̂` and 1.
pub const TYPE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolicymakerProfile<T> {
    /// Actual present bias.
    pub beta: T,
    /// Believed present bias.
    pub beta_hat: T,
    pub delta: T,
    /// Bound by a commitment device that sanctions deviations.
    pub committed: bool,
    /// Cost of cheating while committed. Infinite bars cheating outright.
    pub sanction: T,
}

impl<T: Scalar> PolicymakerProfile<T> {
    /// Uncommitted profile.
    pub fn new(beta: T, beta_hat: T, delta: T) -> Result<Self> {
        let profile = PolicymakerProfile {
            beta,
            beta_hat,
            delta,
            committed: false,
            sanction: T::infinity(),
        };
        profile.validate()?;
        Ok(profile)
    }

    /// Committed profile with the given sanction (`T::infinity()` for an
    /// absolute bar).
    pub fn committed(beta: T, beta_hat: T, delta: T, sanction: T) -> Result<Self> {
        let profile = PolicymakerProfile {
            committed: true,
            sanction,
            ..Self::new(beta, beta_hat, delta)?
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn validate(&self) -> Result<()> {
        let unit = |field, x: T| {
            if x > T::zero() && x <= T::one() {
                Ok(())
            } else {
                Err(Error::domain(field, x.as_f64(), "must lie in (0, 1]"))
            }
        };
        unit("beta", self.beta)?;
        unit("beta_hat", self.beta_hat)?;
        if !(self.delta > T::zero() && self.delta < T::one()) {
            return Err(Error::domain(
                "delta",
                self.delta.as_f64(),
                "must lie in (0, 1)",
            ));
        }
        if self.sanction.is_nan() || self.sanction < T::zero() {
            return Err(Error::domain(
                "sanction",
                self.sanction.as_f64(),
                "must be >= 0",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicymakerType {
    Naive,
    PartiallyNaive,
    Sophisticated,
    Resolute,
    Myopic,
}

pub fn classify<T: Scalar>(profile: &PolicymakerProfile<T>) -> Result<PolicymakerType> {
    profile.validate()?;
    let tol = T::lit(TYPE_TOLERANCE);
    let (beta, beta_hat) = (profile.beta, profile.beta_hat);
    if beta_hat < beta - tol {
        return Err(Error::InvalidProfile(format!(
            "believed present bias {beta_hat} below actual {beta}"
        )));
    }
    if beta <= T::lit(MYOPIC_THRESHOLD) {
        return Ok(PolicymakerType::Myopic);
    }
    let is_one = |x: T| (x - T::one()).abs() <= tol;
    Ok(if profile.committed || (is_one(beta) && is_one(beta_hat)) {
        PolicymakerType::Resolute
    } else if is_one(beta_hat) {
        PolicymakerType::Naive
    } else if (beta_hat - beta).abs() <= tol {
        PolicymakerType::Sophisticated
    } else {
        PolicymakerType::PartiallyNaive
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    Comply,
    Cheat,
    Punished,
    Abstain,
}

impl Action {
    pub fn token(self) -> &'static str {
        match self {
            Action::Comply => "COMPLY",
            Action::Cheat => "CHEAT",
            Action::Punished => "PUNISHED",
            Action::Abstain => "ABSTAIN",
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// Which present bias the policymaker applies to the punishment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecisionBasis {
    /// The present bias that governs the choice when it is made.
    ActualBeta,
    /// The present bias the policymaker expects to act on, i.e. its plan.
    BelievedBeta,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decision<T> {
    /// `Comply` or `Cheat`.
    pub action: Action,
    /// Discounted punishment minus net temptation; negative means cheat.
    pub margin: T,
}

fn check_decision_inputs<T: Scalar>(
    profile: &PolicymakerProfile<T>,
    params: &GameParams<T>,
    target: T,
) -> Result<()> {
    profile.validate()?;
    params.validate()?;
    if !(target >= T::zero() && target <= params.discretion()) {
        return Err(Error::domain(
            "target",
            target.as_f64(),
            "must lie in [0, b_bar/a]",
        ));
    }
    Ok(())
}

/// Undiscounted-by-β punishment term: `Σ_{k=1}^{P} δ^{k−1}` times the
/// per-period loss increase, so that `β·δ·E` is the quasi-hyperbolic
/// enforcement.
fn punishment_value<T: Scalar>(
    profile: &PolicymakerProfile<T>,
    params: &GameParams<T>,
    target: T,
) -> T {
    let mut weight = T::zero();
    let mut running = T::one();
    for _ in 0..params.punishment_periods {
        weight = weight + running;
        running = running * profile.delta;
    }
    weight * punishment_differential(target, params.a, params.b_bar)
}

/// Cheat iff `T − sanction > β_used·δ·E`, ties complying.
///
/// `sanction` only counts when the profile is committed. Myopic profiles
/// use `β_used = 0`.
pub fn decide<T: Scalar>(
    profile: &PolicymakerProfile<T>,
    params: &GameParams<T>,
    target: T,
    basis: DecisionBasis,
) -> Result<Decision<T>> {
    check_decision_inputs(profile, params, target)?;
    let kind = classify(profile)?;
    Ok(decide_unchecked(profile, kind, params, target, basis))
}

fn decide_unchecked<T: Scalar>(
    profile: &PolicymakerProfile<T>,
    kind: PolicymakerType,
    params: &GameParams<T>,
    target: T,
    basis: DecisionBasis,
) -> Decision<T> {
    let beta_used = match (kind, basis) {
        (PolicymakerType::Myopic, _) => T::zero(),
        (_, DecisionBasis::ActualBeta) => profile.beta,
        (_, DecisionBasis::BelievedBeta) => profile.beta_hat,
    };
    let temptation = temptation_unchecked(target, params.a, params.b_bar);
    let sanction = if profile.committed {
        profile.sanction
    } else {
        T::zero()
    };
    let punishment = beta_used * profile.delta * punishment_value(profile, params, target);
    let margin = punishment - (temptation - sanction);
    let action = if temptation - sanction > punishment {
        Action::Cheat
    } else {
        Action::Comply
    };
    Decision { action, margin }
}

/// A planned compliance that turns into a cheat when the moment comes.
pub fn detect_reversal<T: Scalar>(
    profile: &PolicymakerProfile<T>,
    params: &GameParams<T>,
    target: T,
) -> Result<bool> {
    let planned = decide(profile, params, target, DecisionBasis::BelievedBeta)?;
    let actual = decide(profile, params, target, DecisionBasis::ActualBeta)?;
    Ok(planned.action == Action::Comply && actual.action == Action::Cheat)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodRecord<T> {
    pub t: u32,
    /// `None` while the policymaker abstains from announcing a target.
    pub announced_target: Option<T>,
    pub expected_inflation: T,
    pub realized_inflation: T,
    pub period_loss: T,
    pub action: Action,
    pub planned_action: Action,
    pub reversal: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySummary<T> {
    /// Losses discounted by the spec passed to [`simulate`].
    pub total_discounted_loss_actual_beta: T,
    pub cheat_count: usize,
    pub reversal_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub kind: PolicymakerType,
    pub periods: Vec<PeriodRecord<T>>,
    pub summary: TrajectorySummary<T>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn actions(&self) -> impl Iterator<Item = Action> + '_ {
        self.periods.iter().map(|p| p.action)
    }

    pub fn count(&self, action: Action) -> usize {
        self.actions().filter(|&a| a == action).count()
    }
}

/// Plays `horizon` periods of the game at announced `target`.
///
/// `spec` discounts the realized loss stream for the summary; pass the
/// profile's own `β–δ` function to score the run from the policymaker's
/// point of view. `seed` replaces the shock seed of `params`, and only
/// matters when a shock is configured.
pub fn simulate<T: Scalar>(
    profile: &PolicymakerProfile<T>,
    params: &GameParams<T>,
    spec: &DiscountSpec<T>,
    target: T,
    horizon: u32,
    seed: u64,
) -> Result<Trajectory<T>> {
    check_decision_inputs(profile, params, target)?;
    spec.validate()?;
    if horizon == 0 {
        return Err(Error::domain("horizon", 0.0, "must be at least 1"));
    }
    let kind = classify(profile)?;
    let discretion = params.discretion();
    let mut shocks = params
        .shock
        .filter(|s| s.distribution != ShockDistribution::None)
        .map(|mut s| {
            s.seed = seed;
            s.sampler(params.b_bar)
        });
    let mut next_b = || match shocks.as_mut() {
        Some(sampler) => sampler.next().unwrap_or(params.b_bar),
        None => params.b_bar,
    };
    let period_loss =
        |pi: T, pi_e: T, b: T| inflation_cost(pi, params.a) - surprise_benefit(pi, pi_e, b);

    let mut periods = Vec::with_capacity(horizon as usize);
    let mut punish_left = 0u32;
    for t in 0..horizon {
        let b = next_b();
        let planned = decide_unchecked(profile, kind, params, target, DecisionBasis::BelievedBeta);
        let record = if kind == PolicymakerType::Sophisticated && planned.action == Action::Cheat {
            // Foreseeing its own cheat, the sophisticate stays out: no target,
            // discretionary outcome.
            PeriodRecord {
                t,
                announced_target: None,
                expected_inflation: discretion,
                realized_inflation: discretion,
                period_loss: period_loss(discretion, discretion, b),
                action: Action::Abstain,
                planned_action: Action::Abstain,
                reversal: false,
            }
        } else if punish_left > 0 {
            punish_left -= 1;
            PeriodRecord {
                t,
                announced_target: Some(target),
                expected_inflation: discretion,
                realized_inflation: discretion,
                period_loss: period_loss(discretion, discretion, b),
                action: Action::Punished,
                planned_action: Action::Punished,
                reversal: false,
            }
        } else {
            let actual = decide_unchecked(profile, kind, params, target, DecisionBasis::ActualBeta);
            let realized = match actual.action {
                Action::Cheat => {
                    punish_left = params.punishment_periods;
                    discretion
                }
                _ => target,
            };
            PeriodRecord {
                t,
                announced_target: Some(target),
                expected_inflation: target,
                realized_inflation: realized,
                period_loss: period_loss(realized, target, b),
                action: actual.action,
                planned_action: planned.action,
                reversal: planned.action == Action::Comply && actual.action == Action::Cheat,
            }
        };
        periods.push(record);
    }

    let losses = PayoffStream::new(periods.iter().map(|p| p.period_loss).collect())?;
    let summary = TrajectorySummary {
        total_discounted_loss_actual_beta: present_value(&losses, spec)?,
        cheat_count: periods.iter().filter(|p| p.action == Action::Cheat).count(),
        reversal_count: periods.iter().filter(|p| p.reversal).count(),
    };
    Ok(Trajectory {
        kind,
        periods,
        summary,
    })
}

/// Discounted loss of complying forever minus that of cheating once, serving
/// the punishment and complying afterwards. Positive means cheating pays.
///
/// Both paths are built period by period from the loss function and
/// discounted with `spec`, with no use of the temptation or enforcement
/// formulas.
pub fn one_shot_deviation_value<T: Scalar>(
    params: &GameParams<T>,
    spec: &DiscountSpec<T>,
    target: T,
) -> Result<T> {
    params.validate()?;
    spec.validate()?;
    if !(target >= T::zero() && target <= params.discretion()) {
        return Err(Error::domain(
            "target",
            target.as_f64(),
            "must lie in [0, b_bar/a]",
        ));
    }
    let b = params.b_bar;
    let z = |pi: T, pi_e: T| inflation_cost(pi, params.a) - surprise_benefit(pi, pi_e, b);
    let cheat_pi = params.b_bar / params.a;
    let punishment = params.punishment_periods as usize;
    let horizon = punishment + 2;

    let comply = vec![z(target, target); horizon];
    let cheat: Vec<T> = (0..horizon)
        .map(|t| match t {
            0 => z(cheat_pi, target),
            t if t <= punishment => z(cheat_pi, cheat_pi),
            _ => z(target, target),
        })
        .collect();
    // Periods after the punishment coincide; subtract stream by stream so
    // they cancel exactly.
    let diff: Vec<T> = comply.iter().zip(&cheat).map(|(c, d)| *c - *d).collect();
    present_value(&PayoffStream::new(diff)?, spec)
}
