//! Randomized identity suites for the chain, the posterior, and the value
//! functions. Each suite draws 10^4 parameter tuples from a seeded stream so
//! failures are reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use infomenu::{cross_value, own_value, posterior, ChainParams, Experiment, Signal, TwoTypePrior};

const CASES: usize = 10_000;

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn random_params(rng: &mut ChaCha12Rng) -> ChainParams {
    let mu = rng.gen_range(0.5..0.95);
    let lambda_b = rng.gen_range(0.0..5.0);
    ChainParams::new(mu, lambda_b).unwrap()
}

fn random_experiment(rng: &mut ChaCha12Rng) -> Experiment {
    Experiment::new(rng.gen_range(0.0..=1.0), rng.gen_range(0.0..=1.0)).unwrap()
}

#[test]
fn chapman_kolmogorov_composition() {
    let mut rng = rng(101);
    for _ in 0..CASES {
        let params = random_params(&mut rng);
        let s = rng.gen_range(0.0..3.0);
        let t = rng.gen_range(0.0..3.0);
        let lhs = params
            .transition(s)
            .unwrap()
            .compose(&params.transition(t).unwrap());
        let rhs = params.transition(s + t).unwrap();
        for (a, b) in [
            (lhs.p_gg, rhs.p_gg),
            (lhs.p_gb, rhs.p_gb),
            (lhs.p_bg, rhs.p_bg),
            (lhs.p_bb, rhs.p_bb),
        ] {
            assert!((a - b).abs() < 1e-12, "composition gap {}", (a - b).abs());
        }
    }
}

#[test]
fn stationarity_of_the_prior() {
    let mut rng = rng(102);
    for _ in 0..CASES {
        let params = random_params(&mut rng);
        let mu = params.mu();
        let p = params.transition(rng.gen_range(0.0..4.0)).unwrap();
        // Rows are probability distributions and mu is invariant.
        assert!((p.p_gg + p.p_gb - 1.0).abs() < 1e-12);
        assert!((p.p_bg + p.p_bb - 1.0).abs() < 1e-12);
        assert!((mu * p.p_gg + (1.0 - mu) * p.p_bg - mu).abs() < 1e-12);
        assert!((mu * p.p_gb + (1.0 - mu) * p.p_bb - (1.0 - mu)).abs() < 1e-12);
    }
}

#[test]
fn reversibility_local_balance() {
    let mut rng = rng(103);
    for _ in 0..CASES {
        let params = random_params(&mut rng);
        let p = params.transition(rng.gen_range(0.0..4.0)).unwrap();
        assert!(p.reversibility_gap(params.mu()) < 1e-12);
    }
}

#[test]
fn forward_and_backward_equations_agree() {
    let mut rng = rng(104);
    for _ in 0..CASES {
        let params = random_params(&mut rng);
        let delta = rng.gen_range(0.0..3.0);
        let p = params.transition(delta).unwrap();
        let dp = params.transition_derivative(delta).unwrap();
        // The generator is the derivative at zero.
        let q = params.transition_derivative(0.0).unwrap();
        // Forward: P'(d) = P(d) Q.
        assert!((dp.gg - (p.p_gg * q.gg + p.p_gb * q.bg)).abs() < 1e-12);
        assert!((dp.gb - (p.p_gg * q.gb + p.p_gb * q.bb)).abs() < 1e-12);
        assert!((dp.bg - (p.p_bg * q.gg + p.p_bb * q.bg)).abs() < 1e-12);
        assert!((dp.bb - (p.p_bg * q.gb + p.p_bb * q.bb)).abs() < 1e-12);
        // Backward: P'(d) = Q P(d).
        assert!((dp.gg - (q.gg * p.p_gg + q.gb * p.p_bg)).abs() < 1e-12);
        assert!((dp.gb - (q.gg * p.p_gb + q.gb * p.p_bb)).abs() < 1e-12);
        assert!((dp.bg - (q.bg * p.p_gg + q.bb * p.p_bg)).abs() < 1e-12);
        assert!((dp.bb - (q.bg * p.p_gb + q.bb * p.p_bb)).abs() < 1e-12);
        // Rate rows sum to zero.
        assert!((dp.gg + dp.gb).abs() < 1e-12 && (dp.bg + dp.bb).abs() < 1e-12);
    }
}

#[test]
fn transition_derivative_matches_finite_difference() {
    let mut rng = rng(105);
    for _ in 0..CASES {
        let params = random_params(&mut rng);
        let delta = rng.gen_range(0.01..3.0);
        let h = 1e-6;
        let a = params.transition(delta - h).unwrap();
        let b = params.transition(delta + h).unwrap();
        let dp = params.transition_derivative(delta).unwrap();
        assert!((dp.gg - (b.p_gg - a.p_gg) / (2.0 * h)).abs() < 1e-6);
        assert!((dp.bb - (b.p_bb - a.p_bb) / (2.0 * h)).abs() < 1e-6);
    }
}

#[test]
fn posterior_is_a_martingale() {
    let mut rng = rng(106);
    for _ in 0..CASES {
        let mu = rng.gen_range(0.5..0.95);
        let exp = random_experiment(&mut rng);
        let prob_good = mu * exp.pi_g + (1.0 - mu) * (1.0 - exp.pi_b);
        if !(1e-9..=1.0 - 1e-9).contains(&prob_good) {
            continue;
        }
        let mean = prob_good * posterior(&exp, mu, Signal::Good).unwrap()
            + (1.0 - prob_good) * posterior(&exp, mu, Signal::Bad).unwrap();
        assert!(
            (mean - mu).abs() < 1e-12,
            "martingale gap {}",
            (mean - mu).abs()
        );
    }
}

#[test]
fn cross_value_at_zero_distance_is_own_value() {
    let mut rng = rng(107);
    for _ in 0..CASES {
        let params = random_params(&mut rng);
        let exp = random_experiment(&mut rng);
        if !exp.is_responsive(params.mu()) {
            continue;
        }
        let u = rng.gen_range(0.1..10.0);
        let own = own_value(&exp, params.mu(), u).unwrap();
        let cross = cross_value(&exp, params.mu(), u, &params.transition(0.0).unwrap()).unwrap();
        assert!((own - cross).abs() < 1e-12);
    }
}

#[test]
fn cross_value_decays_with_distance_for_full_information() {
    let mut rng = rng(108);
    let exp = Experiment::fully_informative();
    for _ in 0..CASES {
        let params = random_params(&mut rng);
        let u = rng.gen_range(0.1..10.0);
        let d1 = rng.gen_range(0.0..3.0);
        let d2 = d1 + rng.gen_range(0.0..3.0);
        let v1 = cross_value(&exp, params.mu(), u, &params.transition(d1).unwrap()).unwrap();
        let v2 = cross_value(&exp, params.mu(), u, &params.transition(d2).unwrap()).unwrap();
        assert!(v2 <= v1 + 1e-12, "value rose from {v1} to {v2}");
        assert!(v2 >= -1e-12, "deviation value must stay nonnegative");
    }
}

#[test]
fn own_value_is_monotone_in_accuracy() {
    let mut rng = rng(109);
    for _ in 0..CASES {
        let mu = rng.gen_range(0.5..0.95);
        let u = rng.gen_range(0.1..10.0);
        let a = random_experiment(&mut rng);
        let b = random_experiment(&mut rng);
        if !(a.is_responsive(mu) && b.is_responsive(mu)) {
            continue;
        }
        let (va, vb) = (own_value(&a, mu, u).unwrap(), own_value(&b, mu, u).unwrap());
        if a.accuracy(mu) >= b.accuracy(mu) {
            assert!(va >= vb - 1e-12);
        } else {
            assert!(vb >= va - 1e-12);
        }
    }
}

#[test]
fn two_type_transition_matches_prior_masses() {
    let mut rng = rng(110);
    for _ in 0..CASES {
        let mu = rng.gen_range(0.5..0.95);
        let p = rng.gen_range(0.0..(1.0 - mu) / mu);
        let prior = TwoTypePrior::new(mu, p).unwrap();
        let trans = prior.transition_matrix();
        let d = prior.density();
        assert!((mu * trans.p_gg - d.sigma_g).abs() < 1e-12);
        assert!((mu * trans.p_gb - d.xi).abs() < 1e-12);
        assert!(((1.0 - mu) * trans.p_bg - d.xi).abs() < 1e-12);
        assert!(((1.0 - mu) * trans.p_bb - d.sigma_b).abs() < 1e-12);
        assert!(trans.reversibility_gap(mu) < 1e-12);
    }
}
