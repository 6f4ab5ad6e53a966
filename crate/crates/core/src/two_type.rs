//! Closed-form optimal menus for the two-type economy.
//!
//! The solver classifies the primitives against condition C1 (full surplus
//! extraction feasible), and otherwise applies the rent/distortion
//! characterization: the high type always gets the fully informative
//! experiment; the low type's item is either also fully informative with
//! rents conceded to the high type, or distorted on a single signal with
//! full (inefficient) surplus extraction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prior::{DensityRegime, TwoTypePrior};
use crate::valuation::{cross_value, own_value, Experiment, MenuItem};

/// Two-type economy: prior, mass of the low type, and ex-post payoffs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoTypeEconomy {
    prior: TwoTypePrior,
    rho: f64,
    u_l: f64,
    u_h: f64,
}

impl TwoTypeEconomy {
    pub fn new(prior: TwoTypePrior, rho: f64, u_l: f64, u_h: f64) -> Result<Self> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidParameter {
                name: "rho",
                reason: format!("must lie in (0, 1), got {rho}"),
            });
        }
        if !(u_l > 0.0 && u_h > u_l && u_h.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "u_h",
                reason: format!("payoffs must satisfy 0 < u_l < u_h, got u_l = {u_l}, u_h = {u_h}"),
            });
        }
        Ok(Self {
            prior,
            rho,
            u_l,
            u_h,
        })
    }

    pub fn prior(&self) -> &TwoTypePrior {
        &self.prior
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn u_l(&self) -> f64 {
        self.u_l
    }

    pub fn u_h(&self) -> f64 {
        self.u_h
    }
}

/// Which clause of condition C1 holds, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum C1Class {
    C1A,
    C1B,
    C1Ci,
    C1Cii,
    NotC1,
}

impl C1Class {
    pub fn holds(&self) -> bool {
        *self != C1Class::NotC1
    }
}

/// Qualitative shape of the optimal two-type menu.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MenuRegime {
    FullSurplus,
    RentsToHigh,
    DistortLow,
}

/// Optimal menu with one item per type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoTypeMenu {
    pub low: MenuItem,
    pub high: MenuItem,
    pub regime: MenuRegime,
}

impl TwoTypeMenu {
    pub fn revenue(&self, rho: f64) -> f64 {
        rho * self.low.price + (1.0 - rho) * self.high.price
    }
}

/// Classify the economy against condition C1.
pub fn classify_c1(econ: &TwoTypeEconomy) -> C1Class {
    let mu = econ.prior.mu();
    let p = econ.prior.p();
    let ratio = econ.u_l / econ.u_h;
    let lower = (1.0 - mu) / (2.0 * mu);
    let upper = (1.0 - mu) / mu;

    if p > 0.0 && p < lower {
        if ratio >= (1.0 - mu - 2.0 * mu * p) / (1.0 - mu) {
            return C1Class::C1A;
        }
        return C1Class::NotC1;
    }
    if mu >= 2.0 / 3.0 {
        if p >= lower && p <= upper {
            return C1Class::C1B;
        }
        return C1Class::NotC1;
    }
    // mu in [1/2, 2/3)
    if p >= lower && p <= 0.5 {
        return C1Class::C1Ci;
    }
    if p > 0.5 && p <= upper {
        if ratio >= (2.0 * p - 1.0) * mu / (1.0 - mu) {
            return C1Class::C1Cii;
        }
        return C1Class::NotC1;
    }
    C1Class::NotC1
}

/// Solve for the revenue-maximizing menu.
///
/// The dropped upward constraint IC_lh is re-checked on the output; a
/// violation indicates a solver bug and is reported as an internal error
/// rather than returned silently.
pub fn solve(econ: &TwoTypeEconomy) -> Result<TwoTypeMenu> {
    let mu = econ.prior.mu();
    let (u_l, u_h, rho) = (econ.u_l, econ.u_h, econ.rho);
    let full = Experiment::fully_informative();

    let menu = if classify_c1(econ).holds() {
        TwoTypeMenu {
            low: MenuItem::new(full, (1.0 - mu) * u_l)?,
            high: MenuItem::new(full, (1.0 - mu) * u_h)?,
            regime: MenuRegime::FullSurplus,
        }
    } else {
        let d = econ.prior.density();
        let (sigma_g, xi, sigma_b) = (d.sigma_g, d.xi, d.sigma_b);
        match d.regime {
            // A middle ordering always satisfies C1(b)/(c.i); unreachable
            // under not-C1 but routed to full surplus for completeness.
            DensityRegime::Middle => TwoTypeMenu {
                low: MenuItem::new(full, (1.0 - mu) * u_l)?,
                high: MenuItem::new(full, (1.0 - mu) * u_h)?,
                regime: MenuRegime::FullSurplus,
            },
            DensityRegime::Sigma => {
                if u_l / u_h >= (1.0 - rho) * (sigma_g - xi) / (sigma_g + xi) {
                    let t_h = 2.0 * xi * u_h + (sigma_b + xi) * u_l;
                    TwoTypeMenu {
                        low: MenuItem::new(full, (1.0 - mu) * u_l)?,
                        high: MenuItem::new(full, t_h)?,
                        regime: MenuRegime::RentsToHigh,
                    }
                } else {
                    let pi_lg = (sigma_g - sigma_b) * (u_h - u_l)
                        / ((sigma_g - xi) * u_h - (sigma_g + xi) * u_l);
                    let low_exp = Experiment::new(pi_lg.clamp(0.0, 1.0), 1.0)?;
                    let t_l = own_value(&low_exp, mu, u_l)?;
                    TwoTypeMenu {
                        low: MenuItem::new(low_exp, t_l)?,
                        high: MenuItem::new(full, (1.0 - mu) * u_h)?,
                        regime: MenuRegime::DistortLow,
                    }
                }
            }
            DensityRegime::Xi => {
                if u_l / u_h >= (1.0 - rho) * (xi - sigma_b) / (xi + sigma_b) {
                    let t_h = (sigma_g + sigma_b) * u_h + (sigma_b + xi) * u_l;
                    TwoTypeMenu {
                        low: MenuItem::new(full, (1.0 - mu) * u_l)?,
                        high: MenuItem::new(full, t_h)?,
                        regime: MenuRegime::RentsToHigh,
                    }
                } else {
                    let pi_lb =
                        (sigma_g - sigma_b) * u_h / ((xi - sigma_b) * u_h - (sigma_b + xi) * u_l);
                    let low_exp = Experiment::new(1.0, pi_lb.clamp(0.0, 1.0))?;
                    let t_l = own_value(&low_exp, mu, u_l)?;
                    TwoTypeMenu {
                        low: MenuItem::new(low_exp, t_l)?,
                        high: MenuItem::new(full, (1.0 - mu) * u_h)?,
                        regime: MenuRegime::DistortLow,
                    }
                }
            }
        }
    };

    // Ex-post check of the dropped upward constraint.
    let trans = econ.prior.transition_matrix();
    let low_rent = own_value(&menu.low.experiment, mu, u_l)? - menu.low.price;
    let deviation = cross_value(&menu.high.experiment, mu, u_l, &trans)? - menu.high.price;
    if deviation > low_rent + 1e-9 {
        return Err(Error::Inconsistent(format!(
            "IC_lh violated by solver output: deviation payoff {deviation} exceeds rent {low_rent}"
        )));
    }
    Ok(menu)
}

/// One evaluated cell of the Figure-1-style region map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionCell {
    pub u: f64,
    pub p: f64,
    pub regime: MenuRegime,
    pub t_l: f64,
    pub t_h: f64,
    pub pi_lg: f64,
    pub pi_lb: f64,
    pub revenue: f64,
}

/// Analytic boundary curves overlaid on the region map, sampled at the
/// same payoff-ratio grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub u: f64,
    /// Full-surplus boundary p = (1-mu)/(2 mu) * (u-1)/u.
    pub p_full_surplus: f64,
    /// Rents boundary p = ((1-rho) u - 1) / (2 (1-rho) u).
    pub p_rents: f64,
}

/// Inclusive grid specification for the region map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub u_min: f64,
    pub u_max: f64,
    pub u_step: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub p_step: f64,
}

impl RegionGrid {
    fn axis(min: f64, max: f64, step: f64) -> Vec<f64> {
        if step <= 0.0 || max < min {
            return Vec::new();
        }
        let n = ((max - min) / step + 1e-9).floor() as usize;
        (0..=n).map(|i| min + i as f64 * step).collect()
    }

    pub fn u_values(&self) -> Vec<f64> {
        Self::axis(self.u_min, self.u_max, self.u_step)
    }

    pub fn p_values(&self) -> Vec<f64> {
        Self::axis(self.p_min, self.p_max, self.p_step)
    }
}

/// Region map evaluated cell by cell, in row-major (u outer, p inner) order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMap {
    pub cells: Vec<RegionCell>,
    pub boundaries: Vec<BoundaryPoint>,
}

/// Sweep payoff ratio u = u_h / u_l and correlation parameter p, solving
/// each cell's economy. `u_l` anchors the payoff scale.
pub fn region_map(mu: f64, rho: f64, u_l: f64, grid: &RegionGrid) -> Result<RegionMap> {
    let u_values = grid.u_values();
    let p_values = grid.p_values();
    if u_values.is_empty() || p_values.is_empty() {
        return Err(Error::EmptyGrid(format!(
            "u range [{}, {}] step {} and p range [{}, {}] step {} must be nonempty",
            grid.u_min, grid.u_max, grid.u_step, grid.p_min, grid.p_max, grid.p_step
        )));
    }
    if grid.u_min < 1.0 {
        return Err(Error::InvalidParameter {
            name: "u_min",
            reason: format!("payoff ratio grid must start at u >= 1, got {}", grid.u_min),
        });
    }
    let p_max_admissible = (1.0 - mu) / mu;
    if grid.p_min < 0.0 || grid.p_max > p_max_admissible + 1e-12 {
        return Err(Error::InvalidParameter {
            name: "p_max",
            reason: format!(
                "p range must lie within [0, (1-mu)/mu] = [0, {p_max_admissible}], got [{}, {}]",
                grid.p_min, grid.p_max
            ),
        });
    }

    let mut cells = Vec::with_capacity(u_values.len() * p_values.len());
    for &u in &u_values {
        for &p in &p_values {
            let prior = TwoTypePrior::new(mu, p.min(p_max_admissible))?;
            let u_h = (u * u_l).max(u_l * (1.0 + 1e-12));
            let econ = TwoTypeEconomy::new(prior, rho, u_l, u_h)?;
            let menu = solve(&econ)?;
            cells.push(RegionCell {
                u,
                p,
                regime: menu.regime,
                t_l: menu.low.price,
                t_h: menu.high.price,
                pi_lg: menu.low.experiment.pi_g,
                pi_lb: menu.low.experiment.pi_b,
                revenue: menu.revenue(rho),
            });
        }
    }
    let boundaries = u_values
        .iter()
        .map(|&u| BoundaryPoint {
            u,
            p_full_surplus: (1.0 - mu) / (2.0 * mu) * (u - 1.0) / u,
            p_rents: ((1.0 - rho) * u - 1.0) / (2.0 * (1.0 - rho) * u),
        })
        .collect();
    Ok(RegionMap { cells, boundaries })
}
