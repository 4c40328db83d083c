//! Discount functions and discounted present values of payoff streams.
//!
//! Three families are supported:
//!
//! * exponential, `D(t) = q^t` with `q = 1/(1+r)`;
//! * quasi-hyperbolic, `D(0) = 1` and `D(t) = β·δ^t` for `t ≥ 1`;
//! * generalized hyperbolic, `D(t) = 1/(1+k·t)`.
//!
//! Time is discrete: `t` counts whole periods from the present.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscountKind {
    Exponential,
    QuasiHyperbolic,
    GeneralizedHyperbolic,
}

/// A validated discount function.
///
/// The exponential variant keeps both the rate `r` and the per-period
/// factor `q`. Constructing from the factor stores it verbatim, so an
/// exponential spec built with `q = δ` discounts bit-for-bit like a
/// quasi-hyperbolic spec with `β = 1` and the same `δ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiscountSpec<T> {
    Exponential { r: T, q: T },
    QuasiHyperbolic { beta: T, delta: T },
    GeneralizedHyperbolic { k: T },
}

impl<T: Scalar> DiscountSpec<T> {
    /// Exponential discounting at rate `r > -1` per period.
    pub fn exponential(r: T) -> Result<Self> {
        if !(r.is_finite() && r > -T::one()) {
            return Err(Error::domain("r", r.as_f64(), "must be finite and > -1"));
        }
        Ok(DiscountSpec::Exponential {
            r,
            q: T::one() / (T::one() + r),
        })
    }

    /// Exponential discounting with per-period factor `q > 0`.
    pub fn exponential_factor(q: T) -> Result<Self> {
        if !(q.is_finite() && q > T::zero()) {
            return Err(Error::domain("q", q.as_f64(), "must be finite and > 0"));
        }
        Ok(DiscountSpec::Exponential {
            r: T::one() / q - T::one(),
            q,
        })
    }

    pub fn quasi_hyperbolic(beta: T, delta: T) -> Result<Self> {
        if !(beta > T::zero() && beta <= T::one()) {
            return Err(Error::domain("beta", beta.as_f64(), "must lie in (0, 1]"));
        }
        if !(delta > T::zero() && delta < T::one()) {
            return Err(Error::domain("delta", delta.as_f64(), "must lie in (0, 1)"));
        }
        Ok(DiscountSpec::QuasiHyperbolic { beta, delta })
    }

    pub fn generalized_hyperbolic(k: T) -> Result<Self> {
        if !(k.is_finite() && k > T::zero()) {
            return Err(Error::domain("k", k.as_f64(), "must be finite and > 0"));
        }
        Ok(DiscountSpec::GeneralizedHyperbolic { k })
    }

    /// Re-checks the invariants; useful for specs built by struct literal.
    pub fn validate(&self) -> Result<()> {
        match *self {
            DiscountSpec::Exponential { r, q } => {
                Self::exponential(r)?;
                Self::exponential_factor(q).map(|_| ())
            }
            DiscountSpec::QuasiHyperbolic { beta, delta } => {
                Self::quasi_hyperbolic(beta, delta).map(|_| ())
            }
            DiscountSpec::GeneralizedHyperbolic { k } => {
                Self::generalized_hyperbolic(k).map(|_| ())
            }
        }
    }

    pub fn kind(&self) -> DiscountKind {
        match self {
            DiscountSpec::Exponential { .. } => DiscountKind::Exponential,
            DiscountSpec::QuasiHyperbolic { .. } => DiscountKind::QuasiHyperbolic,
            DiscountSpec::GeneralizedHyperbolic { .. } => DiscountKind::GeneralizedHyperbolic,
        }
    }

    /// `D(t)`.
    pub fn eval(&self, t: u32) -> T {
        if t == 0 {
            return T::one();
        }
        match *self {
            DiscountSpec::Exponential { q, .. } => powi(q, t),
            DiscountSpec::QuasiHyperbolic { beta, delta } => beta * powi(delta, t),
            DiscountSpec::GeneralizedHyperbolic { k } => {
                T::one() / (T::one() + k * T::lit(f64::from(t)))
            }
        }
    }

    /// `D(0), D(1), …` without re-multiplying from scratch; yields exactly
    /// the values of [`DiscountSpec::eval`].
    pub fn weights(&self) -> impl Iterator<Item = T> + '_ {
        let mut running = T::one();
        (0u32..).map(move |t| {
            if t == 0 {
                return T::one();
            }
            match *self {
                DiscountSpec::Exponential { q, .. } => {
                    running = running * q;
                    running
                }
                DiscountSpec::QuasiHyperbolic { beta, delta } => {
                    running = running * delta;
                    beta * running
                }
                DiscountSpec::GeneralizedHyperbolic { .. } => self.eval(t),
            }
        })
    }

    /// The factor linking today to next period, `D(1)`: `q` for exponential
    /// and `β·δ` for quasi-hyperbolic discounting. Hyperbolic discounting has
    /// no single such factor.
    pub fn one_period_factor(&self) -> Option<T> {
        match self {
            DiscountSpec::GeneralizedHyperbolic { .. } => None,
            _ => Some(self.eval(1)),
        }
    }
}

// Repeated multiplication keeps the exponential and β = 1 quasi-hyperbolic
// paths on the same rounding sequence.
fn powi<T: Scalar>(base: T, t: u32) -> T {
    (0..t).fold(T::one(), |acc, _| acc * base)
}

/// Evaluates `D(t)` after validating the spec.
pub fn eval_discount<T: Scalar>(spec: &DiscountSpec<T>, t: u32) -> Result<T> {
    spec.validate()?;
    Ok(spec.eval(t))
}

/// A finite, non-empty sequence of per-period payoffs starting at `t = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffStream<T>(Vec<T>);

impl<T: Scalar> PayoffStream<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain(
                "stream",
                0.0,
                "must contain at least one period",
            ));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(
                "stream",
                bad.as_f64(),
                "entries must be finite",
            ));
        }
        Ok(PayoffStream(values))
    }

    pub fn values(&self) -> &[T] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `Σ_t stream[t]·D(t)`.
pub fn present_value<T: Scalar>(stream: &PayoffStream<T>, spec: &DiscountSpec<T>) -> Result<T> {
    spec.validate()?;
    Ok(stream
        .values()
        .iter()
        .zip(spec.weights())
        .map(|(&v, w)| v * w)
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type DiscountSpec = super::DiscountSpec<f64>;
    type PayoffStream = super::PayoffStream<f64>;

    // Independent oracle: builds D(t) from the textbook definitions with
    // std's powf rather than the crate's multiplication loop.
    fn oracle(spec: &DiscountSpec, t: u32) -> f64 {
        match *spec {
            DiscountSpec::Exponential { r, .. } => (1.0 / (1.0 + r)).powf(t as f64),
            DiscountSpec::QuasiHyperbolic { beta, delta } => {
                if t == 0 {
                    1.0
                } else {
                    beta * delta.powf(t as f64)
                }
            }
            DiscountSpec::GeneralizedHyperbolic { k } => 1.0 / (1.0 + k * t as f64),
        }
    }

    #[test]
    fn exponential_at_zero_is_one() {
        let spec = DiscountSpec::exponential(0.1).unwrap();
        assert_eq!(eval_discount(&spec, 0).unwrap(), 1.0);
    }

    #[test]
    fn quasi_hyperbolic_spot_value() {
        let spec = DiscountSpec::quasi_hyperbolic(0.5, 0.9).unwrap();
        let v = eval_discount(&spec, 2).unwrap();
        assert!((v - 0.405).abs() < 1e-15);
        assert!((v - oracle(&spec, 2)).abs() < 1e-15);
    }

    #[test]
    fn beta_one_collapses_to_exponential() {
        let qh = DiscountSpec::quasi_hyperbolic(1.0, 0.9).unwrap();
        let ex = DiscountSpec::exponential(1.0 / 0.9 - 1.0).unwrap();
        assert!((qh.eval(3) - 0.729).abs() < 1e-15);
        assert!((qh.eval(3) - ex.eval(3)).abs() < 1e-15);
        let exq = DiscountSpec::exponential_factor(0.9).unwrap();
        for t in 0..20 {
            assert_eq!(qh.eval(t).to_bits(), exq.eval(t).to_bits());
        }
    }

    #[test]
    fn hyperbolic_form() {
        let spec = DiscountSpec::generalized_hyperbolic(0.5).unwrap();
        assert_eq!(spec.eval(0), 1.0);
        assert!((spec.eval(4) - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(spec.one_period_factor(), None);
    }

    #[test]
    fn rejects_out_of_domain_parameters() {
        let cases: Vec<(Result<DiscountSpec>, &str)> = vec![
            (DiscountSpec::exponential(-1.0), "r"),
            (DiscountSpec::exponential(f64::NAN), "r"),
            (DiscountSpec::exponential_factor(0.0), "q"),
            (DiscountSpec::quasi_hyperbolic(0.0, 0.9), "beta"),
            (DiscountSpec::quasi_hyperbolic(1.2, 0.9), "beta"),
            (DiscountSpec::quasi_hyperbolic(0.5, 1.0), "delta"),
            (DiscountSpec::quasi_hyperbolic(0.5, 0.0), "delta"),
            (DiscountSpec::generalized_hyperbolic(0.0), "k"),
        ];
        for (res, field) in cases {
            match res {
                Err(Error::Domain { field: f, .. }) => assert_eq!(f, field),
                other => panic!("expected domain error on {field}, got {other:?}"),
            }
        }
        let literal = DiscountSpec::QuasiHyperbolic {
            beta: 0.5,
            delta: 2.0,
        };
        assert!(eval_discount(&literal, 1).is_err());
    }

    #[test]
    fn present_value_examples() {
        let any = DiscountSpec::quasi_hyperbolic(0.3, 0.4).unwrap();
        let single = PayoffStream::new(vec![5.0]).unwrap();
        assert_eq!(present_value(&single, &any).unwrap(), 5.0);

        let ex = DiscountSpec::exponential(0.25).unwrap();
        let s = PayoffStream::new(vec![0.0, 1.0]).unwrap();
        assert!((present_value(&s, &ex).unwrap() - 0.8).abs() < 1e-15);

        let qh = DiscountSpec::quasi_hyperbolic(0.5, 0.5).unwrap();
        let s = PayoffStream::new(vec![1.0, 1.0, 1.0]).unwrap();
        assert!((present_value(&s, &qh).unwrap() - 1.375).abs() < 1e-15);
    }

    #[test]
    fn stream_validation() {
        assert!(PayoffStream::new(vec![]).is_err());
        assert!(PayoffStream::new(vec![1.0, f64::INFINITY]).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let spec = super::DiscountSpec::<f32>::quasi_hyperbolic(0.5, 0.9).unwrap();
        assert!((spec.eval(2) - 0.405).abs() < 1e-6);
    }

    fn any_spec() -> impl Strategy<Value = DiscountSpec> {
        prop_oneof![
            (0.0..2.0f64).prop_map(|r| DiscountSpec::exponential(r).unwrap()),
            (0.01..=1.0f64, 0.01..0.99f64)
                .prop_map(|(b, d)| DiscountSpec::quasi_hyperbolic(b, d).unwrap()),
            (0.01..5.0f64).prop_map(|k| DiscountSpec::generalized_hyperbolic(k).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn matches_oracle_and_is_non_increasing(spec in any_spec(), t in 0u32..60) {
            prop_assert_eq!(spec.eval(0), 1.0);
            let v = spec.eval(t);
            prop_assert!((v - oracle(&spec, t)).abs() <= 1e-12 * oracle(&spec, t).max(1e-300));
            prop_assert!(spec.eval(t + 1) <= v);
            prop_assert_eq!(spec.weights().nth(t as usize).unwrap().to_bits(), v.to_bits());
        }

        #[test]
        fn present_bias_scales_future(beta in 0.01..0.999f64, delta in 0.01..0.99f64, t in 1u32..40) {
            let qh = DiscountSpec::quasi_hyperbolic(beta, delta).unwrap();
            let ex = DiscountSpec::exponential_factor(delta).unwrap();
            prop_assert!(qh.eval(t) < ex.eval(t));
            prop_assert!((qh.eval(t) - beta * ex.eval(t)).abs() <= 1e-15 * ex.eval(t));
        }

        #[test]
        fn present_value_is_linear(
            spec in any_spec(),
            alpha in -10.0..10.0f64,
            pairs in prop::collection::vec((-100.0..100.0f64, -100.0..100.0f64), 1..30),
        ) {
            let x: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let y: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let combo: Vec<f64> = pairs.iter().map(|p| alpha * p.0 + p.1).collect();
            let pv = |v: Vec<f64>| present_value(&PayoffStream::new(v).unwrap(), &spec).unwrap();
            let lhs = pv(combo);
            let px = pv(x.clone());
            let py = pv(y.clone());
            let rhs = alpha * px + py;
            // Relative to the magnitude of the summands, which bounds the
            // rounding of either side.
            let scale: f64 = pairs.iter().map(|p| alpha.abs() * p.0.abs() + p.1.abs()).sum();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0));
        }
    }
}
