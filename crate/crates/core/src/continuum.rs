//! Continuum-type solver: value-based-fee test, posted-price limit, and the
//! three-region optimal menu with its two cutoff types.
//!
//! The menu has an uninformative-to-partially-informative region below the
//! lower cutoff (zero rents, distorted good-state signal), a fully
//! informative middle region where rents accrue, and a fully informative
//! top region priced at full surplus.

use serde::{Deserialize, Serialize};

use crate::distribution::TypeDistribution;
use crate::error::{Error, Result};
use crate::numerics::{bisect, golden_max, simpson};
use crate::payoff::Payoff;
use crate::prior::ChainParams;

const VALIDATION_SAMPLES: usize = 512;

/// Continuum-type economy: bounded type space, chain, payoff and type
/// distribution with matching support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuumEconomy {
    theta_max: f64,
    params: ChainParams,
    u: Payoff,
    dist: TypeDistribution,
}

impl ContinuumEconomy {
    pub fn new(
        theta_max: f64,
        params: ChainParams,
        u: Payoff,
        dist: TypeDistribution,
    ) -> Result<Self> {
        if !(theta_max > 0.0 && theta_max.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "theta_max",
                reason: format!("must be positive and finite, got {theta_max}"),
            });
        }
        let (lo, hi) = dist.support();
        if lo.abs() > 1e-12 || (hi - theta_max).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "distribution",
                reason: format!(
                    "support [{lo}, {hi}] must coincide with the type space [0, {theta_max}]"
                ),
            });
        }
        // Sampled regularity checks: u nondecreasing with bounded slope,
        // nonnegative, and a positive density with nondecreasing hazard.
        let mut prev_hazard = f64::NEG_INFINITY;
        for i in 0..=VALIDATION_SAMPLES {
            let theta = theta_max * i as f64 / VALIDATION_SAMPLES as f64;
            let (v, dv) = (u.value(theta), u.deriv(theta));
            if !(v.is_finite() && dv.is_finite()) || v < -1e-12 || dv < -1e-10 {
                return Err(Error::InvalidParameter {
                    name: "payoff",
                    reason: format!(
                        "payoff must be nonnegative and nondecreasing; at theta = {theta} got u = {v}, u' = {dv}"
                    ),
                });
            }
            if i < VALIDATION_SAMPLES {
                // Interior density must be positive and the hazard monotone.
                let t = theta_max * (i as f64 + 0.5) / VALIDATION_SAMPLES as f64;
                if dist.pdf(t) <= 0.0 {
                    return Err(Error::InvalidParameter {
                        name: "distribution",
                        reason: format!("density vanishes at theta = {t}"),
                    });
                }
                let h = dist.hazard(t);
                if h < prev_hazard - 1e-9 {
                    return Err(Error::InvalidParameter {
                        name: "distribution",
                        reason: format!("hazard rate decreases near theta = {t}"),
                    });
                }
                prev_hazard = h;
            }
        }
        Ok(Self {
            theta_max,
            params,
            u,
            dist,
        })
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    pub fn params(&self) -> &ChainParams {
        &self.params
    }

    pub fn payoff(&self) -> &Payoff {
        &self.u
    }

    pub fn distribution(&self) -> &TypeDistribution {
        &self.dist
    }

    /// u'(θ) - 2 λ_b u(θ): nonpositivity of this gap is the value-based-fee
    /// condition under which full surplus extraction is feasible.
    fn c2_gap(&self, theta: f64) -> f64 {
        self.u.deriv(theta) - 2.0 * self.params.lambda_b() * self.u.value(theta)
    }
}

/// Outcome of the value-based-fee test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum C2Status {
    Holds,
    /// Condition fails; `theta_g` is the type where u' = 2 λ_b u (the rent
    /// peak), or θ̄ when the gap stays positive on the whole space.
    Fails {
        theta_g: f64,
    },
}

/// Test u'(θ) ≤ 2 λ_b u(θ) on a dense interior sample.
///
/// The sample excludes θ = 0: when u(0) = 0 the inequality is degenerate at
/// the boundary and fails on a vanishing neighborhood for every finite λ_b.
pub fn check_c2(econ: &ContinuumEconomy, n_samples: usize) -> Result<C2Status> {
    if n_samples < 2 {
        return Err(Error::InvalidParameter {
            name: "n_samples",
            reason: format!("need at least 2 samples, got {n_samples}"),
        });
    }
    let step = econ.theta_max / n_samples as f64;
    let mut first_positive: Option<f64> = None;
    for i in 1..=n_samples {
        let theta = i as f64 * step;
        let gap = econ.c2_gap(theta);
        if gap > 1e-12 && first_positive.is_none() {
            first_positive = Some(theta);
        }
        if gap <= 0.0 {
            if let Some(lo) = first_positive {
                // Sign change: bracket the rent-peak type and refine.
                let theta_g = bisect(|t| econ.c2_gap(t), lo, theta, 1e-12)?;
                return Ok(C2Status::Fails { theta_g });
            }
        }
    }
    if first_positive.is_some() {
        Ok(C2Status::Fails {
            theta_g: econ.theta_max,
        })
    } else {
        Ok(C2Status::Holds)
    }
}

/// Exponential envelope u(0)·e^{2 λ_b θ}; the value-based-fee condition
/// implies u stays below it, so the bound doubles as a fast necessary test.
pub fn gronwall_bound(econ: &ContinuumEconomy, theta: f64) -> f64 {
    econ.u.value(0.0) * (2.0 * econ.params.lambda_b() * theta).exp()
}

/// Optimal posted price for the frozen-chain limit (λ_b = 0), where the
/// product market collapses to selling the fully informative experiment to a
/// buyer with private valuation v(θ) = (1-μ)u(θ).
pub fn solve_posted_price(econ: &ContinuumEconomy) -> Result<(f64, f64)> {
    if econ.params.lambda_b() != 0.0 {
        return Err(Error::WrongRegime(format!(
            "posted price applies only to the frozen chain; lambda_b = {}",
            econ.params.lambda_b()
        )));
    }
    let mu = econ.params.mu();
    let objective = |theta: f64| (1.0 - mu) * econ.u.value(theta) * (1.0 - econ.dist.cdf(theta));
    // Dense scan to localize the peak, golden-section refinement around it.
    let n = 2000usize;
    let mut best_i = 0usize;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=n {
        let theta = econ.theta_max * i as f64 / n as f64;
        let r = objective(theta);
        if r > best {
            best = r;
            best_i = i;
        }
    }
    let lo = econ.theta_max * best_i.saturating_sub(1) as f64 / n as f64;
    let hi = econ.theta_max * (best_i + 1).min(n) as f64 / n as f64;
    let refined = golden_max(objective, lo, hi, 1e-12);
    let theta_star = if objective(refined) >= best {
        refined
    } else {
        econ.theta_max * best_i as f64 / n as f64
    };
    Ok(((1.0 - mu) * econ.u.value(theta_star), objective(theta_star)))
}

/// Optimal menu over the whole type space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MenuSchedule {
    pub grid: Vec<f64>,
    pub pi_g: Vec<f64>,
    pub pi_b: Vec<f64>,
    pub price: Vec<f64>,
    pub rent: Vec<f64>,
    /// Lower cutoff θ_*: below it signals are distorted and rents are zero.
    pub theta_star_low: f64,
    /// Upper cutoff θ^*: above it prices extract full surplus.
    pub theta_star_high: f64,
    /// Rent-peak type where u' = 2 λ_b u.
    pub theta_g: f64,
    /// Expected revenue ∫ t(θ) f(θ) dθ.
    pub revenue: f64,
}

fn integral_2mu_lambda_u(econ: &ContinuumEconomy, a: f64, b: f64) -> f64 {
    let c = 2.0 * econ.params.mu() * econ.params.lambda_g();
    simpson(|s| c * econ.u.value(s), a, b, 200)
}

/// Lower cutoff solving χ(θ_*, θ^*) = 0 for a fixed upper cutoff, where
/// χ(θ, θ^*) = u(θ) - (u'(θ) - 2 λ_g u(θ))·(F(θ^*) - F(θ))/f(θ).
/// Returns 0 when the corner binds.
pub fn lower_cutoff_for(econ: &ContinuumEconomy, theta_star_high: f64) -> Result<f64> {
    let chi = |theta: f64| {
        let f = econ.dist.pdf(theta);
        let tail = econ.dist.cdf(theta_star_high) - econ.dist.cdf(theta);
        econ.u.value(theta)
            - (econ.u.deriv(theta) - 2.0 * econ.params.lambda_g() * econ.u.value(theta)) * tail / f
    };
    if chi(0.0) >= 0.0 {
        return Ok(0.0);
    }
    bisect(chi, 0.0, theta_star_high, 1e-13)
}

/// Rent mismatch at the upper cutoff: positive means full-surplus pricing at
/// θ^* still leaves a rent, so the cutoff must move up.
fn rent_gap_at_high(econ: &ContinuumEconomy, theta_star_high: f64) -> Result<f64> {
    let mu = econ.params.mu();
    let low = lower_cutoff_for(econ, theta_star_high)?;
    Ok(
        (1.0 - mu) * (econ.u.value(theta_star_high) - econ.u.value(low))
            - integral_2mu_lambda_u(econ, low, theta_star_high),
    )
}

fn assumption1_check(econ: &ContinuumEconomy) -> Result<()> {
    let lambda_g = econ.params.lambda_g();
    for i in 0..=VALIDATION_SAMPLES {
        let theta = econ.theta_max * i as f64 / VALIDATION_SAMPLES as f64;
        let (v, dv, ddv) = (
            econ.u.value(theta),
            econ.u.deriv(theta),
            econ.u.second_deriv(theta),
        );
        // Log-concavity as u''·u - (u')² ≤ 0 avoids dividing by u(0) = 0.
        if ddv * v - dv * dv > 1e-9 {
            return Err(Error::InvalidParameter {
                name: "payoff",
                reason: format!("payoff is not log-concave near theta = {theta}"),
            });
        }
        if ddv - 2.0 * lambda_g * dv > 1e-9 {
            return Err(Error::InvalidParameter {
                name: "payoff",
                reason: format!(
                    "u' - 2 lambda_g u must be nonincreasing; violated near theta = {theta}"
                ),
            });
        }
    }
    Ok(())
}

/// Distorted good-state signal weight assigned below the lower cutoff. The
/// weight makes the marginal information rent vanish pointwise.
pub fn distorted_pi_g(econ: &ContinuumEconomy, theta: f64) -> f64 {
    let mu = econ.params.mu();
    if mu == 0.5 {
        return 0.0;
    }
    let dv = econ.u.deriv(theta);
    let denom = dv - 2.0 * econ.params.lambda_g() * econ.u.value(theta);
    ((2.0 * mu - 1.0) / mu * dv / denom).clamp(0.0, 1.0)
}

/// Build the three-region schedule for given cutoffs on a uniform grid.
pub fn schedule_for_cutoffs(
    econ: &ContinuumEconomy,
    theta_star_low: f64,
    theta_star_high: f64,
    theta_g: f64,
    grid_size: usize,
) -> Result<MenuSchedule> {
    if grid_size < 2 {
        return Err(Error::EmptyGrid(format!(
            "schedule grid needs at least 2 points, got {grid_size}"
        )));
    }
    let mu = econ.params.mu();
    let n = grid_size - 1;
    let mut grid = Vec::with_capacity(grid_size);
    let mut pi_g = Vec::with_capacity(grid_size);
    let mut pi_b = Vec::with_capacity(grid_size);
    let mut price = Vec::with_capacity(grid_size);
    let mut rent = Vec::with_capacity(grid_size);

    let base_price = (1.0 - mu) * econ.u.value(theta_star_low);
    for i in 0..grid_size {
        let theta = econ.theta_max * i as f64 / n as f64;
        grid.push(theta);
        pi_b.push(1.0);
        if theta < theta_star_low {
            let pg = distorted_pi_g(econ, theta);
            pi_g.push(pg);
            price.push((mu * pg + 1.0 - 2.0 * mu) * econ.u.value(theta));
            rent.push(0.0);
        } else if theta <= theta_star_high {
            pi_g.push(1.0);
            let t = base_price + integral_2mu_lambda_u(econ, theta_star_low, theta);
            price.push(t);
            rent.push(((1.0 - mu) * econ.u.value(theta) - t).max(0.0));
        } else {
            pi_g.push(1.0);
            price.push((1.0 - mu) * econ.u.value(theta));
            rent.push(0.0);
        }
    }

    // Expected revenue, integrated per region so the value is independent of
    // the reporting grid.
    let rev_b = simpson(
        |t| (mu * distorted_pi_g(econ, t) + 1.0 - 2.0 * mu) * econ.u.value(t) * econ.dist.pdf(t),
        0.0,
        theta_star_low,
        400,
    );
    let rev_c = simpson(
        |t| (base_price + integral_2mu_lambda_u(econ, theta_star_low, t)) * econ.dist.pdf(t),
        theta_star_low,
        theta_star_high,
        400,
    );
    let rev_d = simpson(
        |t| (1.0 - mu) * econ.u.value(t) * econ.dist.pdf(t),
        theta_star_high,
        econ.theta_max,
        400,
    );

    Ok(MenuSchedule {
        grid,
        pi_g,
        pi_b,
        price,
        rent,
        theta_star_low,
        theta_star_high,
        theta_g,
        revenue: rev_b + rev_c + rev_d,
    })
}

/// Solve for the optimal menu.
///
/// When the value-based-fee condition holds, the seller extracts full
/// surplus with fully informative experiments and no cutoffs. Otherwise the
/// cutoffs solve the coupled system {χ(θ_*, θ^*) = 0, zero rent at θ^*} by
/// nested bisection, with corner handling at θ_* = 0 and θ^* = θ̄.
pub fn solve_menu(econ: &ContinuumEconomy, grid_size: usize) -> Result<MenuSchedule> {
    if econ.params.lambda_b() == 0.0 {
        return Err(Error::WrongRegime(
            "frozen chain has no screening menu; use the posted-price solver".into(),
        ));
    }
    let theta_g = match check_c2(econ, 200)? {
        C2Status::Holds => {
            // Full surplus: every region collapses into the top one.
            return schedule_for_cutoffs(econ, 0.0, 0.0, 0.0, grid_size);
        }
        C2Status::Fails { theta_g } => theta_g,
    };
    assumption1_check(econ)?;

    let high = if rent_gap_at_high(econ, theta_g)? <= 0.0 {
        theta_g
    } else if rent_gap_at_high(econ, econ.theta_max)? >= 0.0 {
        econ.theta_max
    } else {
        bisect(
            |t| rent_gap_at_high(econ, t).unwrap_or(f64::NAN),
            theta_g,
            econ.theta_max,
            1e-11,
        )?
    };
    let low = lower_cutoff_for(econ, high)?.min(theta_g);
    schedule_for_cutoffs(econ, low, high.max(theta_g), theta_g, grid_size)
}

/// Virtual surplus of assigning signal weight `pi_g` to type `theta`, with
/// the bad-state signal fixed at its undistorted value.
pub fn virtual_surplus(
    econ: &ContinuumEconomy,
    theta: f64,
    pi_g: f64,
    theta_star_high: f64,
) -> Result<f64> {
    let f = econ.dist.pdf(theta);
    if f == 0.0 {
        return Err(Error::InvalidParameter {
            name: "theta",
            reason: format!("density vanishes at theta = {theta}"),
        });
    }
    let mu = econ.params.mu();
    let lambda_g = econ.params.lambda_g();
    let coeff = mu * pi_g + 1.0 - 2.0 * mu;
    let tail = (econ.dist.cdf(theta_star_high) - econ.dist.cdf(theta)) / f;
    Ok(coeff * econ.u.value(theta)
        - (coeff * econ.u.deriv(theta) - 2.0 * mu * lambda_g * pi_g * econ.u.value(theta)) * tail)
}

/// Envelope selection γ(π, θ): the marginal information rent of type θ
/// holding the experiment fixed. Zero above the upper cutoff, where the
/// seller prices at full surplus.
pub fn selection_gamma(
    econ: &ContinuumEconomy,
    pi_g: f64,
    pi_b: f64,
    theta: f64,
    theta_star_high: f64,
) -> f64 {
    let mu = econ.params.mu();
    if theta > theta_star_high || mu * pi_g + (1.0 - mu) * pi_b <= mu {
        return 0.0;
    }
    (mu * pi_g + (1.0 - mu) * pi_b - mu) * econ.u.deriv(theta)
        - 2.0 * mu * econ.params.lambda_g() * (pi_g + pi_b - 1.0) * econ.u.value(theta)
}

/// Cumulative envelope rents ∫_0^θ γ at the schedule's grid points.
///
/// Each grid interval is split at the cutoffs and the integrand's region
/// branch is chosen once per smooth piece, so the quadrature never straddles
/// a kink or jump of the selection. Below the lower cutoff the distorted
/// signal weight makes γ vanish identically; above the upper cutoff the
/// seller extracts full surplus and γ is zero by construction.
pub fn envelope_rents(schedule: &MenuSchedule, econ: &ContinuumEconomy) -> Vec<f64> {
    let low = schedule.theta_star_low;
    let high = schedule.theta_star_high;
    let n = schedule.grid.len();
    let mut rents = Vec::with_capacity(n);
    let mut acc = 0.0;
    for i in 0..n {
        if i > 0 {
            let (a, b) = (schedule.grid[i - 1], schedule.grid[i]);
            let mut cuts = vec![a];
            for c in [low, high] {
                if c > a && c < b {
                    cuts.push(c);
                }
            }
            cuts.push(b);
            for w in cuts.windows(2) {
                let mid = 0.5 * (w[0] + w[1]);
                if mid < low || mid > high {
                    // Zero-rent regions contribute nothing to the envelope.
                    continue;
                }
                acc += simpson(
                    |t| selection_gamma(econ, 1.0, 1.0, t, f64::INFINITY),
                    w[0],
                    w[1],
                    8,
                );
            }
        }
        rents.push(acc);
    }
    rents
}

/// Recompute rents from the envelope representation U(θ) = ∫_0^θ γ and
/// compare with the schedule's stored rents; a mismatch flags a solver bug.
pub fn rent_schedule(schedule: &MenuSchedule, econ: &ContinuumEconomy) -> Result<Vec<f64>> {
    let rents = envelope_rents(schedule, econ);
    let worst = rents
        .iter()
        .zip(schedule.rent.iter())
        .map(|(a, b)| (a.max(0.0) - b).abs())
        .fold(0.0f64, f64::max);
    let tol = 1e-6;
    if worst > tol {
        return Err(Error::Inconsistent(format!(
            "envelope rents deviate from schedule rents by {worst} (tolerance {tol})"
        )));
    }
    Ok(rents)
}
