//! Ex-post payoff functions u(θ).
//!
//! A small set of named families with analytic derivatives, plus a
//! tabulated option interpolated by a natural cubic spline for shapes
//! outside the named families.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Payoff family with value and first/second derivatives.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Payoff {
    /// u(θ) = intercept + slope·θ
    Affine { intercept: f64, slope: f64 },
    /// u(θ) = scale·θ^exponent
    Power { scale: f64, exponent: f64 },
    /// u(θ) = scale·(1 - e^{-rate·θ})
    BoundedExp { scale: f64, rate: f64 },
    /// u(θ) = level
    Constant { level: f64 },
    /// Natural cubic spline through (knots, values).
    Table(Spline),
}

impl Payoff {
    pub fn affine(intercept: f64, slope: f64) -> Result<Self> {
        if !(intercept.is_finite() && slope.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "affine",
                reason: "intercept and slope must be finite".into(),
            });
        }
        Ok(Payoff::Affine { intercept, slope })
    }

    pub fn power(scale: f64, exponent: f64) -> Result<Self> {
        if !(scale.is_finite() && exponent.is_finite() && exponent > 0.0) {
            return Err(Error::InvalidParameter {
                name: "power",
                reason: format!("need finite scale and exponent > 0, got {scale}, {exponent}"),
            });
        }
        Ok(Payoff::Power { scale, exponent })
    }

    pub fn bounded_exp(scale: f64, rate: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite() && rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "bounded_exp",
                reason: format!("need positive finite scale and rate, got {scale}, {rate}"),
            });
        }
        Ok(Payoff::BoundedExp { scale, rate })
    }

    pub fn constant(level: f64) -> Result<Self> {
        if !level.is_finite() {
            return Err(Error::InvalidParameter {
                name: "constant",
                reason: "level must be finite".into(),
            });
        }
        Ok(Payoff::Constant { level })
    }

    pub fn table(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Ok(Payoff::Table(Spline::natural(knots, values)?))
    }

    pub fn value(&self, theta: f64) -> f64 {
        match self {
            Payoff::Affine { intercept, slope } => intercept + slope * theta,
            Payoff::Power { scale, exponent } => scale * theta.powf(*exponent),
            Payoff::BoundedExp { scale, rate } => scale * (1.0 - (-rate * theta).exp()),
            Payoff::Constant { level } => *level,
            Payoff::Table(s) => s.value(theta),
        }
    }

    pub fn deriv(&self, theta: f64) -> f64 {
        match self {
            Payoff::Affine { slope, .. } => *slope,
            Payoff::Power { scale, exponent } => scale * exponent * theta.powf(exponent - 1.0),
            Payoff::BoundedExp { scale, rate } => scale * rate * (-rate * theta).exp(),
            Payoff::Constant { .. } => 0.0,
            Payoff::Table(s) => s.deriv(theta),
        }
    }

    pub fn second_deriv(&self, theta: f64) -> f64 {
        match self {
            Payoff::Affine { .. } | Payoff::Constant { .. } => 0.0,
            Payoff::Power { scale, exponent } => {
                scale * exponent * (exponent - 1.0) * theta.powf(exponent - 2.0)
            }
            Payoff::BoundedExp { scale, rate } => -scale * rate * rate * (-rate * theta).exp(),
            Payoff::Table(s) => s.second_deriv(theta),
        }
    }
}

/// Natural cubic spline on strictly increasing knots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spline {
    knots: Vec<f64>,
    values: Vec<f64>,
    /// Second derivatives at the knots (zero at the endpoints).
    m: Vec<f64>,
}

impl Spline {
    pub fn natural(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        let n = knots.len();
        if n < 3 || values.len() != n {
            return Err(Error::InvalidParameter {
                name: "table",
                reason: format!(
                    "need at least 3 knots with matching values, got {n} knots, {} values",
                    values.len()
                ),
            });
        }
        if knots.windows(2).any(|w| w[1] <= w[0])
            || knots.iter().chain(values.iter()).any(|x| !x.is_finite())
        {
            return Err(Error::InvalidParameter {
                name: "table",
                reason: "knots must be finite and strictly increasing, values finite".into(),
            });
        }

        // Tridiagonal system for interior second derivatives (Thomas algorithm).
        let h: Vec<f64> = knots.windows(2).map(|w| w[1] - w[0]).collect();
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        for i in 1..n - 1 {
            diag[i] = 2.0 * (h[i - 1] + h[i]);
            rhs[i] =
                6.0 * ((values[i + 1] - values[i]) / h[i] - (values[i] - values[i - 1]) / h[i - 1]);
        }
        let mut c_prime = vec![0.0; n];
        let mut d_prime = vec![0.0; n];
        for i in 1..n - 1 {
            let denom = diag[i]
                - if i > 1 {
                    h[i - 1] * c_prime[i - 1]
                } else {
                    0.0
                };
            c_prime[i] = h[i] / denom;
            d_prime[i] = (rhs[i]
                - if i > 1 {
                    h[i - 1] * d_prime[i - 1]
                } else {
                    0.0
                })
                / denom;
        }
        let mut m = vec![0.0; n];
        for i in (1..n - 1).rev() {
            m[i] = d_prime[i] - c_prime[i] * m[i + 1];
        }
        Ok(Self { knots, values, m })
    }

    fn segment(&self, theta: f64) -> usize {
        match self
            .knots
            .binary_search_by(|k| k.partial_cmp(&theta).unwrap())
        {
            Ok(i) => i.min(self.knots.len() - 2),
            Err(i) => i.clamp(1, self.knots.len() - 1) - 1,
        }
    }

    pub fn value(&self, theta: f64) -> f64 {
        let i = self.segment(theta);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - theta) / h;
        let b = (theta - self.knots[i]) / h;
        a * self.values[i]
            + b * self.values[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn deriv(&self, theta: f64) -> f64 {
        let i = self.segment(theta);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - theta) / h;
        let b = (theta - self.knots[i]) / h;
        (self.values[i + 1] - self.values[i]) / h
            + ((3.0 * b * b - 1.0) * self.m[i + 1] - (3.0 * a * a - 1.0) * self.m[i]) * h / 6.0
    }

    pub fn second_deriv(&self, theta: f64) -> f64 {
        let i = self.segment(theta);
        let h = self.knots[i + 1] - self.knots[i];
        let a = (self.knots[i + 1] - theta) / h;
        let b = (theta - self.knots[i]) / h;
        a * self.m[i] + b * self.m[i + 1]
    }
}
