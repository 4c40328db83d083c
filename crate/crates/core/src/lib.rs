//! Barro–Gordon reputational monetary-policy game with behavioral discounting.
//!
//! The crate computes the discretionary equilibrium, the best enforceable
//! inflation rule and the enforceable range of targets when the policymaker
//! discounts exponentially or quasi-hyperbolically (β–δ), simulates the
//! repeated game for naive, partially naive, sophisticated, resolute and
//! myopic policymakers, and sweeps parameter grids to measure how present
//! bias narrows the enforceable range.
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the
//! aliases at the crate root fix the scalar to `f64`.
//!
//! ```
//! use policy_game_lab::{equilibrium_report, DiscountSpec, GameParams};
//!
//! let params = GameParams::new(1.0, 1.0).unwrap();
//! let behavioral = DiscountSpec::quasi_hyperbolic(0.7, 0.9).unwrap();
//! let report = equilibrium_report(&params, &behavioral).unwrap();
//! assert!((report.pi_best_enforceable - 0.37 / 1.63).abs() < 1e-12);
//! ```

pub mod discounting;
mod error;
pub mod format;
pub mod policy_game;
pub mod repeated_game;
mod scalar;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use discounting::{eval_discount, present_value, DiscountKind};
pub use policy_game::{
    best_cheat, best_enforceable_rule, discretionary_equilibrium, enforcement, equilibrium_report,
    loss, temptation, Mode,
};
pub use repeated_game::{
    classify, decide, detect_reversal, one_shot_deviation_value, simulate, Action, DecisionBasis,
    PolicymakerType,
};
pub use sweep::{narrowing_report, run_sweep};

pub type DiscountSpec = discounting::DiscountSpec<f64>;
pub type PayoffStream = discounting::PayoffStream<f64>;
pub type GameParams = policy_game::GameParams<f64>;
pub type ShockSpec = policy_game::ShockSpec<f64>;
pub type EquilibriumReport = policy_game::EquilibriumReport<f64>;
pub type Estimate = policy_game::Estimate<f64>;
pub type PolicymakerProfile = repeated_game::PolicymakerProfile<f64>;
pub type Decision = repeated_game::Decision<f64>;
pub type Trajectory = repeated_game::Trajectory<f64>;
pub type PeriodRecord = repeated_game::PeriodRecord<f64>;
pub type SweepSpec = sweep::SweepSpec<f64>;
pub type SweepRow = sweep::SweepRow<f64>;
pub type SweepTable = sweep::SweepTable<f64>;
pub type NarrowingSummary = sweep::NarrowingSummary<f64>;
