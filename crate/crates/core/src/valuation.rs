//! Blackwell experiments, posteriors and values of information.
//!
//! An experiment is a customized responsive 2x2 signal structure
//! `(pi_g, pi_b)` where `pi_g = P(s_g | good)` and `pi_b = P(s_b | bad)`.
//! Values are computed with the full best-response max operators, so they
//! are valid for imitation at any type distance, not only locally.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::bisect;
use crate::prior::{ChainParams, TransitionMatrix};

/// Tolerance below which the responsiveness constraint counts as binding
/// (the experiment is classified uninformative).
pub const RESPONSIVE_TOL: f64 = 1e-12;

/// Signal realizations of a two-signal experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Signal {
    Good,
    Bad,
}

/// Actions available to the buyer; `Good` is the default action under a
/// prior with `mu >= 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Good,
    Bad,
}

/// A customized responsive 2x2 signal structure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Experiment {
    pub pi_g: f64,
    pub pi_b: f64,
}

impl Experiment {
    pub fn new(pi_g: f64, pi_b: f64) -> Result<Self> {
        for (name, v) in [("pi_g", pi_g), ("pi_b", pi_b)] {
            if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be a probability in [0, 1], got {v}"),
                });
            }
        }
        Ok(Self { pi_g, pi_b })
    }

    pub fn fully_informative() -> Self {
        Self {
            pi_g: 1.0,
            pi_b: 1.0,
        }
    }

    /// Probability of taking the right action for the truthful type:
    /// `mu pi_g + (1 - mu) pi_b`.
    pub fn accuracy(&self, mu: f64) -> f64 {
        mu * self.pi_g + (1.0 - mu) * self.pi_b
    }

    /// Responsiveness: accuracy at least the prior mass of the good state.
    pub fn is_responsive(&self, mu: f64) -> bool {
        self.accuracy(mu) >= mu - RESPONSIVE_TOL
    }

    /// Strict informativeness: the responsiveness constraint is slack.
    pub fn is_informative(&self, mu: f64) -> bool {
        self.accuracy(mu) > mu + RESPONSIVE_TOL
    }
}

/// An experiment together with its price.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MenuItem {
    pub experiment: Experiment,
    pub price: f64,
}

impl MenuItem {
    pub fn new(experiment: Experiment, price: f64) -> Result<Self> {
        if price < 0.0 || !price.is_finite() {
            return Err(Error::InvalidParameter {
                name: "price",
                reason: format!("must be nonnegative, got {price}"),
            });
        }
        Ok(Self { experiment, price })
    }
}

/// Joint mass of each signal with each own-state when a buyer at the given
/// transition distance consumes the experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaTerms {
    /// Good signal, own state good.
    pub gg: f64,
    /// Good signal, own state bad.
    pub gb: f64,
    /// Bad signal, own state good.
    pub bg: f64,
    /// Bad signal, own state bad.
    pub bb: f64,
}

impl GammaTerms {
    /// Best response after each signal; ties resolve to the default action.
    pub fn best_responses(&self) -> (Action, Action) {
        let after_good = if self.gg >= self.gb {
            Action::Good
        } else {
            Action::Bad
        };
        let after_bad = if self.bb > self.bg {
            Action::Bad
        } else {
            Action::Good
        };
        (after_good, after_bad)
    }
}

/// Reservation utility `mu * u` from acting on the prior alone.
pub fn reservation_utility(mu: f64, u: f64) -> f64 {
    mu * u
}

/// Value of a responsive experiment to the truthful type.
pub fn own_value(exp: &Experiment, mu: f64, u: f64) -> Result<f64> {
    if !exp.is_responsive(mu) {
        return Err(Error::NotResponsive {
            mu,
            accuracy: exp.accuracy(mu),
        });
    }
    Ok((exp.accuracy(mu) - mu).max(0.0) * u)
}

/// Signal-by-own-state joint masses for a buyer whose state is reached from
/// the seller-targeted state through `trans`.
pub fn gamma_terms(exp: &Experiment, mu: f64, trans: &TransitionMatrix) -> Result<GammaTerms> {
    let gap = trans.reversibility_gap(mu);
    if gap > 1e-9 {
        return Err(Error::MismatchedPrior { mu, gap });
    }
    let good_signal_mass_g = mu * exp.pi_g;
    let good_signal_mass_b = (1.0 - mu) * (1.0 - exp.pi_b);
    let bad_signal_mass_g = mu * (1.0 - exp.pi_g);
    let bad_signal_mass_b = (1.0 - mu) * exp.pi_b;
    Ok(GammaTerms {
        gg: good_signal_mass_g * trans.p_gg + good_signal_mass_b * trans.p_bg,
        gb: good_signal_mass_g * trans.p_gb + good_signal_mass_b * trans.p_bb,
        bg: bad_signal_mass_g * trans.p_gg + bad_signal_mass_b * trans.p_bg,
        bb: bad_signal_mass_g * trans.p_gb + bad_signal_mass_b * trans.p_bb,
    })
}

/// Value of an experiment to an imitating buyer, with the full max
/// operators over post-signal actions. Zero when the experiment leaves the
/// buyer at the default action after both signals.
pub fn cross_value(exp: &Experiment, mu: f64, u: f64, trans: &TransitionMatrix) -> Result<f64> {
    let g = gamma_terms(exp, mu, trans)?;
    Ok((g.gg.max(g.gb) + g.bg.max(g.bb) - mu).max(0.0) * u)
}

/// Posterior belief on the good state after the given signal, via Bayes'
/// rule. Errors when the signal has zero marginal probability.
pub fn posterior(exp: &Experiment, mu: f64, signal: Signal) -> Result<f64> {
    let (num, denom, name) = match signal {
        Signal::Good => {
            let num = mu * exp.pi_g;
            (num, num + (1.0 - mu) * (1.0 - exp.pi_b), "good")
        }
        Signal::Bad => {
            let num = mu * (1.0 - exp.pi_g);
            (num, num + (1.0 - mu) * exp.pi_b, "bad")
        }
    };
    if denom <= 0.0 {
        return Err(Error::ZeroProbabilitySignal { signal: name });
    }
    Ok(num / denom)
}

/// Largest distance at which a buyer remains responsive to both signals of
/// a strictly informative experiment, i.e. the root of
/// `gamma_bb(delta) - gamma_bg(delta) = 0`. Returns `theta_max` when the
/// gap never crosses zero on `[0, theta_max]`.
pub fn informativeness_radius(
    exp: &Experiment,
    params: &ChainParams,
    theta_max: f64,
) -> Result<f64> {
    let mu = params.mu();
    if !exp.is_informative(mu) {
        return Err(Error::NotInformative { mu });
    }
    if params.is_frozen() {
        return Err(Error::WrongRegime(
            "informativeness radius requires lambda_b > 0".into(),
        ));
    }
    let gap = |delta: f64| {
        let trans = params.transition(delta).expect("delta >= 0");
        let g = gamma_terms(exp, mu, &trans).expect("matched prior");
        g.bb - g.bg
    };
    // Dense pre-scan locates the sign change; the gap is monotone in delta
    // for a fixed experiment, so one bracket suffices.
    const SCAN_POINTS: usize = 1000;
    let step = theta_max / SCAN_POINTS as f64;
    let mut prev = 0.0;
    for i in 1..=SCAN_POINTS {
        let delta = i as f64 * step;
        if gap(delta) <= 0.0 {
            return bisect(gap, prev, delta, 1e-10);
        }
        prev = delta;
    }
    Ok(theta_max)
}
