//! Run configuration: JSON file merged with command-line flags.
//!
//! Every flag has a config key; `--b-bar` maps to `bBar`, `--punishment-periods`
//! to `punishmentPeriods`, and so on. Flags win over the file.

use std::path::{Path, PathBuf};

use policy_game_lab::policy_game::ShockDistribution;
use policy_game_lab::{DiscountSpec, GameParams, PolicymakerProfile, ShockSpec, SweepSpec};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_bar: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub punishment_periods: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub committed: Option<bool>,
    /// Absent means an infinite sanction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sanction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shock: Option<ShockDistribution<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shock_draws: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

macro_rules! overlay {
    ($base:ident, $top:ident; $($field:ident),* $(,)?) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field; } )*
    };
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }

    /// `self` with every field set in `flags` replaced.
    pub fn overlay(mut self, flags: RunConfig) -> Self {
        overlay!(self, flags;
            a, b_bar, beta, beta_hat, delta, q, target, horizon, punishment_periods,
            committed, sanction, seed, format, output, shock, shock_draws,
            beta_grid, delta_grid, q_grid, trials,
        );
        self
    }

    pub fn a(&self) -> f64 {
        self.a.unwrap_or(1.0)
    }

    pub fn b_bar(&self) -> f64 {
        self.b_bar.unwrap_or(1.0)
    }

    pub fn beta(&self) -> f64 {
        self.beta.unwrap_or(1.0)
    }

    /// Naive by default.
    pub fn beta_hat(&self) -> f64 {
        self.beta_hat.unwrap_or(1.0)
    }

    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or(0.9)
    }

    /// Baseline factor; matches `delta` unless given.
    pub fn q(&self) -> f64 {
        self.q.unwrap_or_else(|| self.delta())
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// Fills in the defaults relevant to `command`, for echoing.
    pub fn effective(&self, command: &str) -> RunConfig {
        let mut c = self.clone();
        c.a = Some(self.a());
        c.b_bar = Some(self.b_bar());
        c.seed = Some(self.seed());
        c.punishment_periods = Some(self.punishment_periods.unwrap_or(1));
        match command {
            "analyze" => {
                c.beta = Some(self.beta());
                c.delta = Some(self.delta());
                c.q = Some(self.q());
            }
            "simulate" => {
                c.beta = Some(self.beta());
                c.beta_hat = Some(self.beta_hat());
                c.delta = Some(self.delta());
                c.target = Some(self.target.unwrap_or(0.0));
                c.horizon = Some(self.horizon.unwrap_or(20));
                c.committed = Some(self.committed.unwrap_or(false));
            }
            "sweep" => {
                c.beta_grid = Some(self.beta_grid.clone().unwrap_or_else(|| tenths(1, 10)));
                c.delta_grid = Some(self.delta_grid.clone().unwrap_or_else(|| tenths(1, 9)));
            }
            "verify" => {
                c.trials = Some(self.trials.unwrap_or(1000));
                c.seed = Some(self.seed.unwrap_or(42));
            }
            _ => {}
        }
        c
    }

    pub fn game(&self) -> Result<GameParams, CliError> {
        let mut params = GameParams::new(self.a(), self.b_bar())?
            .with_punishment_periods(self.punishment_periods.unwrap_or(1))?;
        if let Some(dist) = self.shock {
            let mut shock = ShockSpec::new(dist, self.seed());
            if let Some(draws) = self.shock_draws {
                shock.draws = draws;
            }
            params = params.with_shock(shock)?;
        }
        Ok(params)
    }

    pub fn baseline_spec(&self) -> Result<DiscountSpec, CliError> {
        Ok(DiscountSpec::exponential_factor(self.q())?)
    }

    pub fn behavioral_spec(&self) -> Result<DiscountSpec, CliError> {
        Ok(DiscountSpec::quasi_hyperbolic(self.beta(), self.delta())?)
    }

    pub fn profile(&self) -> Result<PolicymakerProfile, CliError> {
        let sanction = self.sanction.unwrap_or(f64::INFINITY);
        let profile = if self.committed.unwrap_or(false) {
            PolicymakerProfile::committed(self.beta(), self.beta_hat(), self.delta(), sanction)?
        } else {
            let p = PolicymakerProfile::new(self.beta(), self.beta_hat(), self.delta())?;
            PolicymakerProfile { sanction, ..p }
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn sweep_spec(&self) -> Result<SweepSpec, CliError> {
        let eff = self.effective("sweep");
        let mut spec = SweepSpec::new(
            self.a(),
            self.b_bar(),
            eff.beta_grid.unwrap_or_default(),
            eff.delta_grid.unwrap_or_default(),
        );
        spec.punishment_periods = self.punishment_periods.unwrap_or(1);
        spec.q_grid = self.q_grid.clone();
        spec.validate()?;
        Ok(spec)
    }
}

// {lo/10, …, hi/10}, computed from integers so the grid prints cleanly.
fn tenths(lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|i| f64::from(i) / 10.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_keys() {
        let err = serde_json::from_str::<RunConfig>(r#"{"a": 1, "bogus": 2}"#).unwrap_err();
        assert!(err.to_string().contains("bogus"));
    }

    #[test]
    fn camel_case_keys_and_scientific_notation() {
        let c: RunConfig = serde_json::from_str(
            r#"{"bBar": 2.5e-1, "betaHat": 0.8, "punishmentPeriods": 2,
                "shock": {"kind": "uniform", "lo": 0.2, "hi": 0.3}, "shockDraws": 10}"#,
        )
        .unwrap();
        assert_eq!(c.b_bar, Some(0.25));
        assert_eq!(c.beta_hat, Some(0.8));
        assert_eq!(c.punishment_periods, Some(2));
        let g = c.game().unwrap();
        assert_eq!(g.shock.unwrap().draws, 10);
    }

    #[test]
    fn flags_override_file() {
        let file = RunConfig {
            a: Some(2.0),
            beta: Some(0.5),
            ..Default::default()
        };
        let flags = RunConfig {
            beta: Some(0.7),
            ..Default::default()
        };
        let c = file.overlay(flags);
        assert_eq!(c.a, Some(2.0));
        assert_eq!(c.beta, Some(0.7));
    }

    #[test]
    fn default_grids() {
        let spec = RunConfig::default().sweep_spec().unwrap();
        assert_eq!(spec.beta_grid.len(), 10);
        assert_eq!(
            spec.delta_grid,
            vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
        );
    }
}
