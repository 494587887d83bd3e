//! Randomized invariants for the model primitives, the solvers, and the
//! tail-infimum machinery.

use proptest::prelude::*;

use overtake::asymptotics::{limit_path_closed_form, saving_ratio};
use overtake::liminf::liminf_estimate;
use overtake::model::feasibility_check;
use overtake::solver::{path_objective, saving_schedule, solve_closed_form};
use overtake::{ModelSpec, Primitives};

fn alpha_strategy() -> impl Strategy<Value = f64> {
    0.05f64..0.95
}

fn stock_strategy() -> impl Strategy<Value = f64> {
    0.01f64..0.99
}

proptest! {
    // Production is concave: every chord midpoint lies on or below the
    // curve.
    #[test]
    fn production_chord_below_curve(alpha in alpha_strategy(), a in stock_strategy(), b in stock_strategy()) {
        let model = ModelSpec::log_cobb_douglas(alpha).unwrap();
        let mid = 0.5 * (a + b);
        let chord = 0.5 * (model.production(a).unwrap() + model.production(b).unwrap());
        prop_assert!(model.production(mid).unwrap() >= chord - 1e-12);
    }

    // Marginal utility strictly decreases in consumption.
    #[test]
    fn marginal_utility_decreasing(alpha in alpha_strategy(), c1 in 0.01f64..0.99, gap in 0.001f64..0.5) {
        let model = ModelSpec::log_cobb_douglas(alpha).unwrap();
        let c2 = c1 + gap;
        prop_assert!(model.marginal_utility(c1).unwrap() > model.marginal_utility(c2).unwrap());
    }

    // The analytic production derivative matches a centered finite
    // difference.
    #[test]
    fn production_derivative_matches_finite_difference(alpha in alpha_strategy(), k in 0.02f64..0.98) {
        let model = ModelSpec::log_cobb_douglas(alpha).unwrap();
        let h = 1e-6 * k;
        let fd = (model.production(k + h).unwrap() - model.production(k - h).unwrap()) / (2.0 * h);
        let exact = model.production_derivative(k).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-6 * exact.max(1.0), "fd {fd} vs exact {exact}");
    }

    // Marginal utility and its inverse are mutual inverses.
    #[test]
    fn inverse_marginal_round_trip(alpha in alpha_strategy(), c in 0.01f64..10.0) {
        let model = ModelSpec::log_cobb_douglas(alpha).unwrap();
        let back = model.inverse_marginal_utility(model.marginal_utility(c).unwrap()).unwrap();
        prop_assert!((back - c).abs() <= 1e-12 * c.max(1.0));
    }

    // The optimal saving schedule lives in [0, alpha) and ends at zero.
    #[test]
    fn saving_schedule_within_bounds(alpha in alpha_strategy(), horizon in 0usize..120) {
        let s = saving_schedule(alpha, horizon).unwrap();
        prop_assert_eq!(s.len(), horizon + 1);
        prop_assert_eq!(*s.last().unwrap(), 0.0);
        for &v in &s {
            prop_assert!((0.0..=alpha).contains(&v));
        }
    }

    // Closed-form output always passes the independent feasibility gate,
    // and its objective is finite and negative (consumption below one).
    #[test]
    fn closed_form_paths_always_feasible(alpha in alpha_strategy(), k0 in stock_strategy(), horizon in 0usize..60) {
        let model = ModelSpec::log_cobb_douglas(alpha).unwrap();
        let path = solve_closed_form(alpha, k0, horizon).unwrap();
        let verdict = feasibility_check(&model, k0, &path).unwrap();
        prop_assert!(verdict.feasible, "violation: {:?}", verdict.first_violation);
        let objective = path_objective(&model, &path).unwrap();
        prop_assert!(objective.is_finite() && objective < 0.0);
    }

    // On the limit path the saving ratio is the same constant at every
    // date, whatever the starting stock.
    #[test]
    fn limit_saving_ratio_constant(alpha in alpha_strategy(), k0 in stock_strategy()) {
        let model = ModelSpec::log_cobb_douglas(alpha).unwrap();
        let limit = limit_path_closed_form(alpha, k0, 30).unwrap();
        for r in saving_ratio(&model, &limit.k_star).unwrap() {
            prop_assert!((r - alpha).abs() <= 1e-12);
        }
    }

    // Deeper tail windows can only raise the infimum: the suffix infimum
    // is non-decreasing in the window start.
    #[test]
    fn tail_infima_monotone_in_window_depth(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let seq: Vec<f64> = (0..200).map(|_| rng.gen_range(-5.0..5.0)).collect();
        let est = liminf_estimate(&seq, &[0.1, 0.3, 0.5, 0.7, 0.9]).unwrap();
        for w in est.window_infima.windows(2) {
            prop_assert!(w[1].1 >= w[0].1 - 1e-15);
        }
    }
}
