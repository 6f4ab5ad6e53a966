//! Type distributions on a bounded interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distribution of the buyer's type with closed-form cdf and pdf.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum TypeDistribution {
    /// Uniform on [lo, hi].
    Uniform { lo: f64, hi: f64 },
    /// F(θ) = (θ/θ̄)^exponent on [0, θ̄].
    Power { theta_max: f64, exponent: f64 },
}

impl TypeDistribution {
    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(Error::InvalidParameter {
                name: "uniform",
                reason: format!("need finite lo < hi, got [{lo}, {hi}]"),
            });
        }
        Ok(TypeDistribution::Uniform { lo, hi })
    }

    pub fn power(theta_max: f64, exponent: f64) -> Result<Self> {
        if !(theta_max > 0.0 && theta_max.is_finite() && exponent >= 1.0 && exponent.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "power",
                reason: format!(
                    "need theta_max > 0 and exponent >= 1 (regularity), got {theta_max}, {exponent}"
                ),
            });
        }
        Ok(TypeDistribution::Power {
            theta_max,
            exponent,
        })
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            TypeDistribution::Uniform { lo, hi } => (*lo, *hi),
            TypeDistribution::Power { theta_max, .. } => (0.0, *theta_max),
        }
    }

    pub fn cdf(&self, theta: f64) -> f64 {
        let (lo, hi) = self.support();
        if theta <= lo {
            return 0.0;
        }
        if theta >= hi {
            return 1.0;
        }
        match self {
            TypeDistribution::Uniform { lo, hi } => (theta - lo) / (hi - lo),
            TypeDistribution::Power {
                theta_max,
                exponent,
            } => (theta / theta_max).powf(*exponent),
        }
    }

    pub fn pdf(&self, theta: f64) -> f64 {
        let (lo, hi) = self.support();
        if theta < lo || theta > hi {
            return 0.0;
        }
        match self {
            TypeDistribution::Uniform { lo, hi } => 1.0 / (hi - lo),
            TypeDistribution::Power {
                theta_max,
                exponent,
            } => exponent / theta_max * (theta / theta_max).powf(exponent - 1.0),
        }
    }

    /// Hazard rate f/(1-F); infinite at the upper support end.
    pub fn hazard(&self, theta: f64) -> f64 {
        self.pdf(theta) / (1.0 - self.cdf(theta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_cdf_pdf() {
        let f = TypeDistribution::uniform(0.0, 2.0).unwrap();
        assert_eq!(f.cdf(1.0), 0.5);
        assert_eq!(f.pdf(1.5), 0.5);
        assert_eq!(f.cdf(-1.0), 0.0);
        assert_eq!(f.cdf(3.0), 1.0);
    }

    #[test]
    fn power_cdf_pdf() {
        let f = TypeDistribution::power(1.0, 2.0).unwrap();
        assert!((f.cdf(0.5) - 0.25).abs() < 1e-15);
        assert!((f.pdf(0.5) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn hazard_nondecreasing_on_samples() {
        for f in [
            TypeDistribution::uniform(0.0, 2.0).unwrap(),
            TypeDistribution::power(2.0, 1.5).unwrap(),
        ] {
            let mut prev = 0.0;
            for i in 1..100 {
                let theta = i as f64 * 0.019;
                let h = f.hazard(theta);
                assert!(h >= prev - 1e-12, "hazard decreased at {theta}");
                prev = h;
            }
        }
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(TypeDistribution::uniform(1.0, 1.0).is_err());
        assert!(TypeDistribution::power(0.0, 2.0).is_err());
        assert!(TypeDistribution::power(1.0, 0.5).is_err());
    }
}
