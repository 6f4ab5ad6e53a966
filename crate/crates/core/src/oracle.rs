//! Independent verification of solver output: exhaustive IC/IR audits,
//! brute-force menu search, Monte Carlo simulation of states and signals,
//! and the envelope-representation consistency check.
//!
//! Everything here deliberately avoids the closed-form solver formulas, so
//! agreement between the two is evidence rather than tautology.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::continuum::{envelope_rents, ContinuumEconomy, MenuSchedule};
use crate::error::{Error, Result};
use crate::numerics::bisect;
use crate::prior::TransitionMatrix;
use crate::two_type::{MenuRegime, TwoTypeEconomy, TwoTypeMenu};
use crate::valuation::{cross_value, gamma_terms, own_value, Action, Experiment, MenuItem};

/// Seed for reproducible simulation; the same seed and partition size give
/// bit-identical results regardless of how work is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSeed(pub u64);

/// Fixed partition size for Monte Carlo draws; each partition gets its own
/// derived stream so reductions are order-stable.
const PARTITION_SIZE: usize = 8192;

/// A single incentive-compatibility violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IcViolation {
    pub buyer: String,
    pub imitated: String,
    pub magnitude: f64,
}

/// A single participation violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IrViolation {
    pub buyer: String,
    pub magnitude: f64,
}

/// Outcome of an audit run; empty violation lists mean the menu passed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub ic_violations: Vec<IcViolation>,
    pub ir_violations: Vec<IrViolation>,
    pub revenue_closed_form: f64,
    pub revenue_oracle: Option<f64>,
    pub monotone: bool,
    pub max_mc_error: Option<f64>,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.ic_violations.is_empty() && self.ir_violations.is_empty() && self.monotone
    }
}

/// Audit a two-item menu: participation and both imitation constraints with
/// the full max-operator deviation values, plus Blackwell monotonicity.
pub fn audit_menu(menu: &TwoTypeMenu, econ: &TwoTypeEconomy, tolerance: f64) -> VerificationReport {
    let mu = econ.prior().mu();
    let trans = econ.prior().transition_matrix();
    let mut report = VerificationReport {
        ic_violations: Vec::new(),
        ir_violations: Vec::new(),
        revenue_closed_form: menu.revenue(econ.rho()),
        revenue_oracle: None,
        monotone: menu.high.experiment.accuracy(mu) >= menu.low.experiment.accuracy(mu) - 1e-12,
        max_mc_error: None,
    };
    let rent = |item: &MenuItem, u: f64| own_value(&item.experiment, mu, u).map(|v| v - item.price);
    let (rent_l, rent_h) = match (rent(&menu.low, econ.u_l()), rent(&menu.high, econ.u_h())) {
        (Ok(l), Ok(h)) => (l, h),
        _ => {
            // A non-responsive item never clears an audit.
            report.monotone = false;
            return report;
        }
    };
    for (label, r) in [("low", rent_l), ("high", rent_h)] {
        if r < -tolerance {
            report.ir_violations.push(IrViolation {
                buyer: label.into(),
                magnitude: -r,
            });
        }
    }
    let deviation = |item: &MenuItem, u: f64| {
        cross_value(&item.experiment, mu, u, &trans).map(|v| v - item.price)
    };
    let pairs = [
        ("high", "low", rent_h, deviation(&menu.low, econ.u_h())),
        ("low", "high", rent_l, deviation(&menu.high, econ.u_l())),
    ];
    for (buyer, imitated, r, dev) in pairs {
        if let Ok(d) = dev {
            if d > r + tolerance {
                report.ic_violations.push(IcViolation {
                    buyer: buyer.into(),
                    imitated: imitated.into(),
                    magnitude: d - r,
                });
            }
        }
    }
    report
}

/// Audit a continuum schedule over all ordered grid pairs, with deviation
/// values computed through the transition kernel at the actual type
/// distance.
pub fn audit_schedule(
    schedule: &MenuSchedule,
    econ: &ContinuumEconomy,
    tolerance: f64,
) -> Result<VerificationReport> {
    let mu = econ.params().mu();
    let n = schedule.grid.len();
    if n == 0 {
        return Err(Error::EmptyGrid("schedule has no grid points".into()));
    }
    let mut report = VerificationReport {
        ic_violations: Vec::new(),
        ir_violations: Vec::new(),
        revenue_closed_form: schedule.revenue,
        revenue_oracle: None,
        monotone: true,
        max_mc_error: None,
    };

    let mut exps: Vec<Experiment> = Vec::with_capacity(n);
    let mut rents = Vec::with_capacity(n);
    for i in 0..n {
        let exp = Experiment::new(schedule.pi_g[i], schedule.pi_b[i])?;
        let u = econ.payoff().value(schedule.grid[i]);
        let r = own_value(&exp, mu, u)? - schedule.price[i];
        if r < -tolerance {
            report.ir_violations.push(IrViolation {
                buyer: format!("{:.6}", schedule.grid[i]),
                magnitude: -r,
            });
        }
        if i > 0 && exp.accuracy(mu) < exps[i - 1].accuracy(mu) - 1e-12 {
            report.monotone = false;
        }
        exps.push(exp);
        rents.push(r);
    }

    // Transition matrices depend only on the type distance; cache one per
    // grid offset (the grid is uniform for solver output).
    #[allow(clippy::needless_range_loop)]
    for i in 0..n {
        let u_i = econ.payoff().value(schedule.grid[i]);
        for j in 0..n {
            if i == j {
                continue;
            }
            let trans = econ
                .params()
                .transition((schedule.grid[i] - schedule.grid[j]).abs())?;
            let dev = cross_value(&exps[j], mu, u_i, &trans)? - schedule.price[j];
            if dev > rents[i] + tolerance {
                report.ic_violations.push(IcViolation {
                    buyer: format!("{:.6}", schedule.grid[i]),
                    imitated: format!("{:.6}", schedule.grid[j]),
                    magnitude: dev - rents[i],
                });
            }
        }
    }
    Ok(report)
}

fn oracle_candidate(
    econ: &TwoTypeEconomy,
    low_exp: Experiment,
    trans: &TransitionMatrix,
) -> Result<Option<(TwoTypeMenu, f64)>> {
    let mu = econ.prior().mu();
    if !low_exp.is_responsive(mu) {
        return Ok(None);
    }
    let full = Experiment::fully_informative();
    let t_l = own_value(&low_exp, mu, econ.u_l())?;
    let dev_h = cross_value(&low_exp, mu, econ.u_h(), trans)? - t_l;
    let t_h = (1.0 - mu) * econ.u_h() - dev_h.max(0.0);
    if t_h < 0.0 {
        return Ok(None);
    }
    let regime = if low_exp == full {
        if dev_h > 0.0 {
            MenuRegime::RentsToHigh
        } else {
            MenuRegime::FullSurplus
        }
    } else {
        MenuRegime::DistortLow
    };
    let menu = TwoTypeMenu {
        low: MenuItem::new(low_exp, t_l)?,
        high: MenuItem::new(full, t_h)?,
        regime,
    };
    if !audit_menu(&menu, econ, 1e-9).is_clean() {
        return Ok(None);
    }
    Ok(Some((menu, menu.revenue(econ.rho()))))
}

/// Brute-force search over the low type's experiment with the high item
/// fixed at full information and prices pinned by binding participation and
/// downward imitation constraints. In addition to the uniform grid, the
/// search adds, per bad-signal row, the point where the high type's
/// imitation rent changes sign (located by bisection), plus the exclusion
/// and pooling corners.
pub fn grid_search_two_type(
    econ: &TwoTypeEconomy,
    resolution: usize,
) -> Result<(TwoTypeMenu, f64)> {
    if resolution < 11 {
        return Err(Error::InvalidParameter {
            name: "resolution",
            reason: format!("need at least 11 grid points, got {resolution}"),
        });
    }
    let mu = econ.prior().mu();
    let trans = econ.prior().transition_matrix();
    let mut best: Option<(TwoTypeMenu, f64)> = None;
    let mut consider = |cand: Option<(TwoTypeMenu, f64)>| {
        if let Some((menu, rev)) = cand {
            if best.as_ref().is_none_or(|(_, b)| rev > *b) {
                best = Some((menu, rev));
            }
        }
    };

    let step = 1.0 / (resolution - 1) as f64;
    for i in 0..resolution {
        let pi_b = i as f64 * step;
        // Imitation-rent sign as a function of pi_g along this row; a sign
        // change brackets the revenue kink, which the uniform grid can miss.
        let rent_gap = |pi_g: f64| -> f64 {
            let exp = Experiment { pi_g, pi_b };
            let own = own_value(&exp, mu, econ.u_l()).unwrap_or(0.0);
            let cross = cross_value(&exp, mu, econ.u_h(), &trans).unwrap_or(0.0);
            cross - own
        };
        let mut prev: Option<(f64, f64)> = None;
        for j in 0..resolution {
            let pi_g = j as f64 * step;
            let exp = Experiment { pi_g, pi_b };
            consider(oracle_candidate(econ, exp, &trans)?);
            if exp.is_responsive(mu) {
                let g = rent_gap(pi_g);
                if let Some((p_pi, p_g)) = prev {
                    if p_g < 0.0 && g > 0.0 {
                        let root = bisect(rent_gap, p_pi, pi_g, 1e-13)?;
                        consider(oracle_candidate(
                            econ,
                            Experiment { pi_g: root, pi_b },
                            &trans,
                        )?);
                    }
                }
                prev = Some((pi_g, g));
            }
        }
    }

    // Exclusion corner: low type gets an uninformative item for free.
    consider(oracle_candidate(
        econ,
        Experiment {
            pi_g: 1.0,
            pi_b: 0.0,
        },
        &trans,
    )?);
    // Pooling corner: both types buy full information at the low price.
    let pool_price = (1.0 - mu) * econ.u_l();
    let pool = TwoTypeMenu {
        low: MenuItem::new(Experiment::fully_informative(), pool_price)?,
        high: MenuItem::new(Experiment::fully_informative(), pool_price)?,
        regime: MenuRegime::RentsToHigh,
    };
    if audit_menu(&pool, econ, 1e-9).is_clean() {
        consider(Some((pool, pool.revenue(econ.rho()))));
    }

    best.ok_or_else(|| Error::Inconsistent("no feasible menu found by grid search".into()))
}

/// Monte Carlo estimate of the value of an experiment consumed across an
/// explicit transition kernel: draws target state, signal, and own state,
/// plays the analytic best response, and nets out the reservation utility.
/// Returns the empirical value and its standard error.
pub fn simulate_value_matrix(
    exp: &Experiment,
    mu: f64,
    trans: &TransitionMatrix,
    u: f64,
    n_draws: usize,
    seed: RngSeed,
) -> Result<(f64, f64)> {
    if n_draws < 1000 {
        return Err(Error::InvalidParameter {
            name: "n_draws",
            reason: format!("need at least 1000 draws, got {n_draws}"),
        });
    }
    let (after_good, after_bad) = gamma_terms(exp, mu, trans)?.best_responses();

    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let partitions = n_draws.div_ceil(PARTITION_SIZE);
    for part in 0..partitions {
        let derived = seed
            .0
            .wrapping_add((part as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut rng = ChaCha12Rng::seed_from_u64(derived);
        let draws = PARTITION_SIZE.min(n_draws - part * PARTITION_SIZE);
        let mut part_sum = 0.0;
        let mut part_sq = 0.0;
        for _ in 0..draws {
            let target_good = rng.gen::<f64>() < mu;
            let signal_good = if target_good {
                rng.gen::<f64>() < exp.pi_g
            } else {
                rng.gen::<f64>() >= exp.pi_b
            };
            let own_good = if target_good {
                rng.gen::<f64>() < trans.p_gg
            } else {
                rng.gen::<f64>() < trans.p_bg
            };
            let action = if signal_good { after_good } else { after_bad };
            let hit = match action {
                Action::Good => own_good,
                Action::Bad => !own_good,
            };
            let payoff = if hit { u } else { 0.0 };
            part_sum += payoff;
            part_sq += payoff * payoff;
        }
        sum += part_sum;
        sum_sq += part_sq;
    }
    let n = n_draws as f64;
    let mean = sum / n;
    let var = ((sum_sq / n) - mean * mean).max(0.0) * n / (n - 1.0);
    Ok((mean - mu * u, (var / n).sqrt()))
}

/// Monte Carlo value across a chain at the given type distance.
pub fn simulate_value(
    exp: &Experiment,
    params: &crate::prior::ChainParams,
    u: f64,
    delta: f64,
    n_draws: usize,
    seed: RngSeed,
) -> Result<(f64, f64)> {
    let trans = params.transition(delta)?;
    simulate_value_matrix(exp, params.mu(), &trans, u, n_draws, seed)
}

/// Maximum gap between rents recomputed from primitives, U(θ) = V(π_θ, θ) -
/// t(θ), and the envelope integral ∫_0^θ γ. The integral is evaluated from
/// the region formulas piecewise between the cutoffs, so the comparison has
/// quadrature accuracy well below the schedule's grid spacing.
pub fn mirrlees_check(schedule: &MenuSchedule, econ: &ContinuumEconomy) -> Result<f64> {
    let mu = econ.params().mu();
    let envelope = envelope_rents(schedule, econ);
    let mut max_gap = 0.0f64;
    #[allow(clippy::needless_range_loop)]
    for i in 0..schedule.grid.len() {
        let exp = Experiment::new(schedule.pi_g[i], schedule.pi_b[i])?;
        let value = own_value(&exp, mu, econ.payoff().value(schedule.grid[i]))?;
        let rent = value - schedule.price[i];
        max_gap = max_gap.max((rent - envelope[i]).abs());
    }
    Ok(max_gap)
}
