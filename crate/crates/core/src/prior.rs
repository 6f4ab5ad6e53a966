//! Common priors over correlated good/bad states.
//!
//! Two representations share the same symmetric structure: a discrete
//! two-type prior parameterized by the cross-type transition probability
//! `p`, and a continuum prior generated by a two-state reversible Markov
//! chain with rates (`lambda_g`, `lambda_b`). In both cases the stationary
//! good-state mass is `mu >= 1/2` and reversibility `mu * P_gb = (1 - mu) *
//! P_bg` holds by construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn check_probability(name: &'static str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) || !v.is_finite() {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("must be a probability in [0, 1], got {v}"),
        });
    }
    Ok(())
}

fn check_mu(mu: f64) -> Result<()> {
    if !(0.5..1.0).contains(&mu) {
        return Err(Error::InvalidParameter {
            name: "mu",
            reason: format!("must satisfy 1/2 <= mu < 1, got {mu}"),
        });
    }
    Ok(())
}

/// Prior for the two-type economy: stationary mass `mu` on the good state
/// and cross-type transition probability `p = P_gb`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoTypePrior {
    mu: f64,
    p: f64,
}

impl TwoTypePrior {
    pub fn new(mu: f64, p: f64) -> Result<Self> {
        check_mu(mu)?;
        check_probability("p", p)?;
        let p_max = (1.0 - mu) / mu;
        if p > p_max + 1e-15 {
            return Err(Error::InvalidParameter {
                name: "p",
                reason: format!("must satisfy p <= (1 - mu)/mu = {p_max}, got {p}"),
            });
        }
        Ok(Self {
            mu,
            p: p.min(p_max),
        })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Joint density entries (sigma_g, xi, xi, sigma_b) and their ordering
    /// regime. Entries are nonnegative and sigma_g + 2 xi + sigma_b = 1.
    pub fn density(&self) -> Density {
        let sigma_g = self.mu * (1.0 - self.p);
        let xi = self.mu * self.p;
        let sigma_b = (1.0 - self.mu) - self.mu * self.p;
        // sigma_g >= sigma_b always (their gap is 2 mu - 1); ties go to MIDDLE.
        let regime = if xi >= sigma_b && sigma_g >= xi {
            DensityRegime::Middle
        } else if sigma_b > xi {
            DensityRegime::Sigma
        } else {
            DensityRegime::Xi
        };
        Density {
            sigma_g,
            xi,
            sigma_b,
            regime,
        }
    }

    /// Conditional transition matrix across the two types.
    pub fn transition_matrix(&self) -> TransitionMatrix {
        let p_gb = self.p;
        let p_bg = self.mu * self.p / (1.0 - self.mu);
        TransitionMatrix {
            p_gg: 1.0 - p_gb,
            p_gb,
            p_bg,
            p_bb: 1.0 - p_bg,
        }
    }
}

/// Density ordering regimes of the two-type prior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DensityRegime {
    /// sigma_g >= sigma_b > xi (low correlation across states).
    Sigma,
    /// sigma_g >= xi >= sigma_b.
    Middle,
    /// xi > sigma_g >= sigma_b (negatively correlated states).
    Xi,
}

/// Joint density of the two-type prior in the (sigma_g, xi, sigma_b)
/// parameterization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Density {
    pub sigma_g: f64,
    pub xi: f64,
    pub sigma_b: f64,
    pub regime: DensityRegime,
}

/// Generator of the continuum prior: a two-state reversible chain with
/// stationary distribution (mu, 1 - mu). The good-to-bad rate is derived
/// from local balance, `lambda_g = lambda_b (1 - mu) / mu`, so the balance
/// equation cannot be violated by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    mu: f64,
    lambda_b: f64,
}

impl ChainParams {
    pub fn new(mu: f64, lambda_b: f64) -> Result<Self> {
        check_mu(mu)?;
        if lambda_b < 0.0 || !lambda_b.is_finite() {
            return Err(Error::InvalidParameter {
                name: "lambda_b",
                reason: format!("must be a nonnegative rate, got {lambda_b}"),
            });
        }
        Ok(Self { mu, lambda_b })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn lambda_b(&self) -> f64 {
        self.lambda_b
    }

    pub fn lambda_g(&self) -> f64 {
        self.lambda_b * (1.0 - self.mu) / self.mu
    }

    /// `lambda_b = 0` freezes the chain: states are perfectly correlated and
    /// the continuum problem reduces to posted-price monopoly.
    pub fn is_frozen(&self) -> bool {
        self.lambda_b == 0.0
    }

    /// Transition matrix P(delta) = exp(Q delta) in closed form.
    pub fn transition(&self, delta: f64) -> Result<TransitionMatrix> {
        if delta < 0.0 || delta.is_nan() {
            return Err(Error::NegativeDelta(delta));
        }
        let lg = self.lambda_g();
        let lb = self.lambda_b;
        let total = lg + lb;
        if total == 0.0 {
            return Ok(TransitionMatrix::identity());
        }
        let decay = (-delta * total).exp();
        Ok(TransitionMatrix {
            p_gg: (lb + lg * decay) / total,
            p_gb: (lg - lg * decay) / total,
            p_bg: (lb - lb * decay) / total,
            p_bb: (lg + lb * decay) / total,
        })
    }

    /// Derivative P'(delta) = P(delta) Q = Q P(delta) = exp(-delta(lg+lb)) Q.
    pub fn transition_derivative(&self, delta: f64) -> Result<RateMatrix> {
        if delta < 0.0 || delta.is_nan() {
            return Err(Error::NegativeDelta(delta));
        }
        let lg = self.lambda_g();
        let lb = self.lambda_b;
        let decay = (-delta * (lg + lb)).exp();
        Ok(RateMatrix {
            gg: -lg * decay,
            gb: lg * decay,
            bg: lb * decay,
            bb: -lb * decay,
        })
    }
}

/// A 2x2 stochastic matrix of conditional state probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    pub p_gg: f64,
    pub p_gb: f64,
    pub p_bg: f64,
    pub p_bb: f64,
}

impl TransitionMatrix {
    pub fn identity() -> Self {
        Self {
            p_gg: 1.0,
            p_gb: 0.0,
            p_bg: 0.0,
            p_bb: 1.0,
        }
    }

    /// Row product: self * other.
    pub fn compose(&self, other: &TransitionMatrix) -> TransitionMatrix {
        TransitionMatrix {
            p_gg: self.p_gg * other.p_gg + self.p_gb * other.p_bg,
            p_gb: self.p_gg * other.p_gb + self.p_gb * other.p_bb,
            p_bg: self.p_bg * other.p_gg + self.p_bb * other.p_bg,
            p_bb: self.p_bg * other.p_gb + self.p_bb * other.p_bb,
        }
    }

    /// Gap in the reversibility identity mu * P_gb = (1 - mu) * P_bg.
    pub fn reversibility_gap(&self, mu: f64) -> f64 {
        (mu * self.p_gb - (1.0 - mu) * self.p_bg).abs()
    }
}

/// Entry-wise transition rates, P'(delta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateMatrix {
    pub gg: f64,
    pub gb: f64,
    pub bg: f64,
    pub bb: f64,
}
