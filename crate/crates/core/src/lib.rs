//! Revenue-maximizing menus of information products.
//!
//! A seller offers Blackwell experiments about a persistent binary state to
//! buyers whose own states are correlated with the targeted one through a
//! two-state reversible Markov chain. The crate solves the two-type problem
//! in closed form, the continuum-type problem by quadrature and root
//! finding, and ships independent oracles (brute-force search, exhaustive
//! incentive audits, Monte Carlo simulation) to verify both.

pub mod continuum;
pub mod distribution;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod payoff;
pub mod prior;
pub mod two_type;
pub mod valuation;

pub use continuum::{
    check_c2, distorted_pi_g, envelope_rents, gronwall_bound, lower_cutoff_for, rent_schedule,
    schedule_for_cutoffs, selection_gamma, solve_menu, solve_posted_price, virtual_surplus,
    C2Status, ContinuumEconomy, MenuSchedule,
};
pub use distribution::TypeDistribution;
pub use error::{Error, Result};
pub use oracle::{
    audit_menu, audit_schedule, grid_search_two_type, mirrlees_check, simulate_value,
    simulate_value_matrix, IcViolation, IrViolation, RngSeed, VerificationReport,
};
pub use payoff::Payoff;
pub use prior::{ChainParams, Density, DensityRegime, RateMatrix, TransitionMatrix, TwoTypePrior};
pub use two_type::{
    classify_c1, region_map, solve as solve_two_type, BoundaryPoint, C1Class, MenuRegime,
    RegionCell, RegionGrid, RegionMap, TwoTypeEconomy, TwoTypeMenu,
};
pub use valuation::{
    cross_value, gamma_terms, informativeness_radius, own_value, posterior, reservation_utility,
    Action, Experiment, GammaTerms, MenuItem, Signal,
};
