//! Infinite-horizon limits of the finite-horizon solutions: the tabulated
//! limit path, the steady state, and the numerical checks behind the
//! constant-saving result and the convergence/path-dependence propositions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FinitePath, Primitives};
use crate::solver::{solve_shooting, ShootingConfig};

/// Tabulated limit trajectory c°, k°, λ° with per-index convergence
/// evidence from the horizon ladder that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitPath {
    pub t_max: usize,
    pub k_star: Vec<f64>,
    pub c_star: Vec<f64>,
    pub lambda_star: Vec<f64>,
    /// |value at largest horizon − value at second largest|, per index
    /// (max over the three components).
    pub convergence_error: Vec<f64>,
    pub horizons_used: Vec<usize>,
    /// Set when the per-index error grew between the last two horizon
    /// pairs instead of shrinking.
    pub non_cauchy: bool,
}

/// Stationary values (k_∞, c_∞, λ_∞) of the limit dynamics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    pub alpha: f64,
    pub k_inf: f64,
    pub c_inf: f64,
    pub lambda_inf: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(())
}

fn check_k0(k0: f64) -> Result<()> {
    if !(k0 > 0.0 && k0 < 1.0) {
        return Err(Error::Domain(format!("k0 must lie in (0,1), got {k0}")));
    }
    Ok(())
}

/// Steady state of k(t+1) = α·k(t)^α:
/// k_∞ = α^{1/(1−α)}, c_∞ = (1−α)·α^{α/(1−α)}, λ_∞ = 1/c_∞.
pub fn steady_state(alpha: f64) -> Result<SteadyState> {
    check_alpha(alpha)?;
    let k_inf = alpha.powf(1.0 / (1.0 - alpha));
    let c_inf = (1.0 - alpha) * alpha.powf(alpha / (1.0 - alpha));
    Ok(SteadyState {
        alpha,
        k_inf,
        c_inf,
        lambda_inf: 1.0 / c_inf,
    })
}

/// Closed-form limit path for the parametric instance, evaluated in log
/// space: ln k°(t) = ln k_∞ + α^t·(ln k0 − ln k_∞), c°(t) = (1−α)·k°(t)^α.
pub fn limit_path_closed_form(alpha: f64, k0: f64, t_max: usize) -> Result<LimitPath> {
    check_alpha(alpha)?;
    check_k0(k0)?;
    let ss = steady_state(alpha)?;
    let ln_k_inf = ss.k_inf.ln();
    let offset0 = k0.ln() - ln_k_inf;
    let mut k_star = Vec::with_capacity(t_max + 1);
    let mut c_star = Vec::with_capacity(t_max + 1);
    let mut offset = offset0;
    for _ in 0..=t_max {
        let ln_k = ln_k_inf + offset;
        let k = ln_k.exp();
        k_star.push(k);
        c_star.push((1.0 - alpha) * (alpha * ln_k).exp());
        offset *= alpha;
    }
    let lambda_star = c_star.iter().map(|c| 1.0 / c).collect();
    Ok(LimitPath {
        t_max,
        k_star,
        c_star,
        lambda_star,
        convergence_error: vec![0.0; t_max + 1],
        horizons_used: Vec::new(),
        non_cauchy: false,
    })
}

/// Numerical limit extraction: solves the finite problem at each horizon
/// and keeps the values at the largest one, with Cauchy evidence from the
/// last two. Horizons must be increasing and all at least `t_max`.
pub fn limit_path_numeric<M: Primitives>(
    model: &M,
    k0: f64,
    t_max: usize,
    horizons: &[usize],
) -> Result<LimitPath> {
    if horizons.len() < 2 {
        return Err(Error::Structural(
            "limit extraction needs at least two horizons".into(),
        ));
    }
    if horizons.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Structural("horizons must be strictly increasing".into()));
    }
    if horizons[0] < t_max {
        return Err(Error::Structural(format!(
            "all horizons must be >= t_max = {t_max}, got {}",
            horizons[0]
        )));
    }
    let cfg = ShootingConfig::default();
    let mut solved = Vec::with_capacity(horizons.len());
    for &horizon in horizons {
        let path = solve_shooting(model, k0, horizon, &cfg).map_err(|e| Error::AtHorizon {
            horizon,
            source: Box::new(e),
        })?;
        solved.push(path);
    }

    let index_error = |a: &FinitePath, b: &FinitePath, t: usize| -> f64 {
        let dk = (a.capital[t] - b.capital[t]).abs();
        let dc = (a.consumption[t] - b.consumption[t]).abs();
        let dl = (a.multipliers[t] - b.multipliers[t]).abs();
        dk.max(dc).max(dl)
    };
    let last = &solved[solved.len() - 1];
    let prev = &solved[solved.len() - 2];
    let convergence_error: Vec<f64> = (0..=t_max).map(|t| index_error(last, prev, t)).collect();
    let non_cauchy = if solved.len() >= 3 {
        let earlier = &solved[solved.len() - 3];
        (0..=t_max).any(|t| {
            let before = index_error(prev, earlier, t);
            convergence_error[t] > before.max(1e-15)
        })
    } else {
        false
    };
    Ok(LimitPath {
        t_max,
        k_star: last.capital[..=t_max].to_vec(),
        c_star: last.consumption[..=t_max].to_vec(),
        lambda_star: last.multipliers[..=t_max].to_vec(),
        convergence_error,
        horizons_used: horizons.to_vec(),
        non_cauchy,
    })
}

/// Saving ratios k[t+1]/f(k[t]) along a capital trajectory.
pub fn saving_ratio<M: Primitives>(model: &M, capital: &[f64]) -> Result<Vec<f64>> {
    if capital.len() < 2 {
        return Err(Error::Structural(
            "saving ratio needs at least two capital values".into(),
        ));
    }
    let mut ratios = Vec::with_capacity(capital.len() - 1);
    for t in 0..capital.len() - 1 {
        let output = model.production(capital[t])?;
        if output == 0.0 {
            return Err(Error::Domain(format!("f(k[{t}]) = 0 in saving ratio")));
        }
        ratios.push(capital[t + 1] / output);
    }
    Ok(ratios)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceClass {
    IncreasingToSteadyState,
    DecreasingToSteadyState,
    Stationary,
}

/// Monotone-convergence evidence for the limit path, one case per
/// position of k0 relative to the steady state.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub alpha: f64,
    pub k0: f64,
    pub classification: ConvergenceClass,
    pub k_strictly_monotone: bool,
    pub c_strictly_monotone: bool,
    pub lambda_opposite_monotone: bool,
}

pub fn monotone_convergence_report(alpha: f64, k0: f64, t_max: usize) -> Result<MonotoneReport> {
    let ss = steady_state(alpha)?;
    let path = limit_path_closed_form(alpha, k0, t_max)?;
    let rel = (k0 - ss.k_inf) / ss.k_inf;
    let classification = if rel.abs() < 1e-14 {
        ConvergenceClass::Stationary
    } else if rel < 0.0 {
        ConvergenceClass::IncreasingToSteadyState
    } else {
        ConvergenceClass::DecreasingToSteadyState
    };
    let strict = |v: &[f64], up: bool| v.windows(2).all(|w| if up { w[1] > w[0] } else { w[1] < w[0] });
    let (k_mono, c_mono, l_mono) = match classification {
        ConvergenceClass::Stationary => {
            let flat = |v: &[f64]| v.windows(2).all(|w| (w[1] - w[0]).abs() < 1e-14);
            (flat(&path.k_star), flat(&path.c_star), flat(&path.lambda_star))
        }
        ConvergenceClass::IncreasingToSteadyState => (
            strict(&path.k_star, true),
            strict(&path.c_star, true),
            strict(&path.lambda_star, false),
        ),
        ConvergenceClass::DecreasingToSteadyState => (
            strict(&path.k_star, false),
            strict(&path.c_star, false),
            strict(&path.lambda_star, true),
        ),
    };
    Ok(MonotoneReport {
        alpha,
        k0,
        classification,
        k_strictly_monotone: k_mono,
        c_strictly_monotone: c_mono,
        lambda_opposite_monotone: l_mono,
    })
}

/// Closed form for the difference in time needed to approach the
/// steady state from k0 = k_∞/a versus k_∞/b is ln(ln a / ln b)/(−ln α).
pub fn recovery_time_gap(a: f64, b: f64, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if !(a > b && b > 1.0) {
        return Err(Error::Domain(format!(
            "recovery gap requires a > b > 1, got a = {a}, b = {b}"
        )));
    }
    Ok((a.ln() / b.ln()).ln() / -alpha.ln())
}

/// Periods until the ln-distance to the steady state falls below `delta`,
/// simulating the limit recursion k(t+1) = α·k(t)^α.
pub fn recovery_time(alpha: f64, k0: f64, delta: f64, max_periods: usize) -> Result<usize> {
    check_alpha(alpha)?;
    check_k0(k0)?;
    if delta <= 0.0 || delta.is_nan() {
        return Err(Error::Domain("delta must be positive".into()));
    }
    let ss = steady_state(alpha)?;
    let ln_k_inf = ss.k_inf.ln();
    let mut ln_k = k0.ln();
    for t in 0..=max_periods {
        if (ln_k - ln_k_inf).abs() < delta {
            return Ok(t);
        }
        ln_k = alpha.ln() + alpha * ln_k;
    }
    Err(Error::Convergence {
        lo: 0.0,
        hi: max_periods as f64,
        best_terminal: (ln_k - ln_k_inf).abs(),
        iters: max_periods as u32,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
    Mixed,
}

/// Evidence that the initial-condition effect vanishes with t, and the
/// measured directions of k_∞ and c_∞ across the α grid. Directions are
/// reported as observed, not asserted.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElasticityReport {
    pub t_probe: usize,
    /// Per alpha: max over the k0 grid of |k°(t_probe) − k_∞|.
    pub initial_condition_spread: Vec<(f64, f64)>,
    pub k_inf_values: Vec<(f64, f64)>,
    pub c_inf_values: Vec<(f64, f64)>,
    pub k_inf_direction: Direction,
    pub c_inf_direction: Direction,
}

pub fn elasticity_effect_report(
    alphas: &[f64],
    k0s: &[f64],
    t_probe: usize,
) -> Result<ElasticityReport> {
    if alphas.len() < 2 || k0s.is_empty() {
        return Err(Error::Structural(
            "elasticity report needs >= 2 alphas and >= 1 k0".into(),
        ));
    }
    let mut spread = Vec::new();
    let mut k_infs = Vec::new();
    let mut c_infs = Vec::new();
    for &alpha in alphas {
        let ss = steady_state(alpha)?;
        let mut worst = 0.0f64;
        for &k0 in k0s {
            let path = limit_path_closed_form(alpha, k0, t_probe)?;
            worst = worst.max((path.k_star[t_probe] - ss.k_inf).abs());
        }
        spread.push((alpha, worst));
        k_infs.push((alpha, ss.k_inf));
        c_infs.push((alpha, ss.c_inf));
    }
    let direction = |vals: &[(f64, f64)]| {
        let up = vals.windows(2).all(|w| w[1].1 > w[0].1);
        let down = vals.windows(2).all(|w| w[1].1 < w[0].1);
        match (up, down) {
            (true, _) => Direction::Increasing,
            (_, true) => Direction::Decreasing,
            _ => Direction::Mixed,
        }
    };
    Ok(ElasticityReport {
        t_probe,
        initial_condition_spread: spread,
        k_inf_direction: direction(&k_infs),
        c_inf_direction: direction(&c_infs),
        k_inf_values: k_infs,
        c_inf_values: c_infs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelSpec;
    use crate::solver::solve_closed_form;

    #[test]
    fn steady_state_alpha_half() {
        let ss = steady_state(0.5).unwrap();
        assert!((ss.k_inf - 0.25).abs() < 1e-15);
        assert!((ss.c_inf - 0.25).abs() < 1e-15);
        assert!((ss.lambda_inf - 4.0).abs() < 1e-14);
    }

    #[test]
    fn steady_state_alpha_fifth() {
        let ss = steady_state(0.2).unwrap();
        assert!((ss.k_inf - 0.2f64.powf(1.25)).abs() < 1e-15);
        assert!((ss.c_inf - 0.8 * 0.2f64.powf(0.25)).abs() < 1e-15);
        for &alpha in &[0.1, 0.2, 0.5, 0.8, 0.9] {
            let ss = steady_state(alpha).unwrap();
            assert!((ss.lambda_inf * ss.c_inf - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn steady_state_is_fixed_point_of_limit_recursion() {
        for &alpha in &[0.2, 0.5, 0.8] {
            let ss = steady_state(alpha).unwrap();
            let next = alpha * ss.k_inf.powf(alpha);
            assert!((next - ss.k_inf).abs() < 1e-12);
            assert!((ss.c_inf - (ss.k_inf.powf(alpha) - ss.k_inf)).abs() < 1e-12);
        }
    }

    #[test]
    fn limit_path_closed_form_values() {
        let path = limit_path_closed_form(0.5, 0.0625, 3).unwrap();
        assert!((path.k_star[0] - 0.0625).abs() < 1e-15);
        assert!((path.k_star[1] - 0.125).abs() < 1e-14);
        assert!((path.k_star[2] - 0.176776695296637).abs() < 1e-12);
        assert!((path.c_star[0] - 0.125).abs() < 1e-14);
        // Budget along the limit: k°(t+1) = f(k°(t)) − c°(t).
        for t in 0..3 {
            let budget = path.k_star[t].powf(0.5) - path.c_star[t];
            assert!((path.k_star[t + 1] - budget).abs() < 1e-10);
            let recursion = 0.5 * path.k_star[t].powf(0.5);
            assert!((path.k_star[t + 1] - recursion).abs() < 1e-10);
        }
    }

    #[test]
    fn limit_path_at_steady_state_is_constant() {
        let path = limit_path_closed_form(0.5, 0.25, 10).unwrap();
        for t in 0..=10 {
            assert!((path.k_star[t] - 0.25).abs() < 1e-14);
            assert!((path.c_star[t] - 0.25).abs() < 1e-14);
            assert!((path.lambda_star[t] - 4.0).abs() < 1e-13);
        }
    }

    #[test]
    fn limit_path_numeric_agrees_with_closed_form() {
        let model = ModelSpec::log_cobb_douglas(0.5).unwrap();
        let numeric = limit_path_numeric(&model, 0.0625, 10, &[20, 40, 80]).unwrap();
        let exact = limit_path_closed_form(0.5, 0.0625, 10).unwrap();
        for t in 0..=10 {
            assert!((numeric.k_star[t] - exact.k_star[t]).abs() < 1e-6);
            assert!((numeric.c_star[t] - exact.c_star[t]).abs() < 1e-6);
        }
        assert!(!numeric.non_cauchy);
        assert_eq!(numeric.k_star[0], 0.0625);
    }

    #[test]
    fn limit_numeric_error_decays_geometrically() {
        let model = ModelSpec::log_cobb_douglas(0.5).unwrap();
        let wide = limit_path_numeric(&model, 0.0625, 5, &[10, 20, 40]).unwrap();
        let wider = limit_path_numeric(&model, 0.0625, 5, &[20, 40, 80]).unwrap();
        for t in 0..=5 {
            assert!(
                wider.convergence_error[t] <= wide.convergence_error[t].max(1e-13),
                "error grew at t={t}"
            );
        }
    }

    #[test]
    fn limit_numeric_input_validation() {
        let model = ModelSpec::log_cobb_douglas(0.5).unwrap();
        assert!(limit_path_numeric(&model, 0.0625, 10, &[20]).is_err());
        assert!(limit_path_numeric(&model, 0.0625, 10, &[40, 20]).is_err());
        assert!(limit_path_numeric(&model, 0.0625, 30, &[20, 40]).is_err());
    }

    #[test]
    fn saving_ratio_on_limit_path_is_alpha() {
        let model = ModelSpec::log_cobb_douglas(0.5).unwrap();
        let path = limit_path_closed_form(0.5, 0.0625, 50).unwrap();
        let ratios = saving_ratio(&model, &path.k_star).unwrap();
        for (t, r) in ratios.iter().enumerate() {
            assert!((r - 0.5).abs() < 1e-12, "ratio at t={t} is {r}");
        }
    }

    #[test]
    fn saving_ratio_on_finite_path_matches_schedule() {
        let model = ModelSpec::log_cobb_douglas(0.5).unwrap();
        let path = solve_closed_form(0.5, 0.0625, 2).unwrap();
        let ratios = saving_ratio(&model, &path.capital).unwrap();
        assert!((ratios[0] - 3.0 / 7.0).abs() < 1e-14);
        assert!((ratios[1] - 1.0 / 3.0).abs() < 1e-14);
        assert_eq!(ratios[2], 0.0);
        for r in &ratios {
            assert!(*r < 0.5);
        }
        let t0 = solve_closed_form(0.5, 0.0625, 0).unwrap();
        assert_eq!(saving_ratio(&model, &t0.capital).unwrap(), vec![0.0]);
    }

    #[test]
    fn monotone_report_cases() {
        let inc = monotone_convergence_report(0.5, 0.0625, 40).unwrap();
        assert_eq!(inc.classification, ConvergenceClass::IncreasingToSteadyState);
        assert!(inc.k_strictly_monotone && inc.c_strictly_monotone && inc.lambda_opposite_monotone);
        let dec = monotone_convergence_report(0.5, 0.9, 40).unwrap();
        assert_eq!(dec.classification, ConvergenceClass::DecreasingToSteadyState);
        assert!(dec.k_strictly_monotone && dec.c_strictly_monotone && dec.lambda_opposite_monotone);
        let flat = monotone_convergence_report(0.5, 0.25, 40).unwrap();
        assert_eq!(flat.classification, ConvergenceClass::Stationary);
    }

    #[test]
    fn recovery_gap_formula() {
        assert!((recovery_time_gap(4.0, 2.0, 0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!(recovery_time_gap(2.0, 4.0, 0.5).is_err());
        assert!(recovery_time_gap(4.0, 1.0, 0.5).is_err());
        // gap -> 0 as a -> b.
        let tiny = recovery_time_gap(2.0 + 1e-9, 2.0, 0.5).unwrap();
        assert!(tiny > 0.0 && tiny < 1e-8);
        // gap·(−ln α) is independent of α.
        let invariant: Vec<f64> = [0.2, 0.5, 0.8]
            .iter()
            .map(|&a| recovery_time_gap(4.0, 2.0, a).unwrap() * -a.ln())
            .collect();
        for w in invariant.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn recovery_gap_empirical_cross_check() {
        let ss = steady_state(0.5).unwrap();
        let delta = 1e-6;
        let t_quarter = recovery_time(0.5, ss.k_inf / 4.0, delta, 10_000).unwrap();
        let t_half = recovery_time(0.5, ss.k_inf / 2.0, delta, 10_000).unwrap();
        let simulated_gap = t_quarter as f64 - t_half as f64;
        let formula = recovery_time_gap(4.0, 2.0, 0.5).unwrap();
        assert!(
            (simulated_gap - formula).abs() <= 0.51,
            "simulated {simulated_gap} vs formula {formula}"
        );
    }

    #[test]
    fn elasticity_report_directions() {
        let report =
            elasticity_effect_report(&[0.2, 0.5, 0.8], &[0.05, 0.9], 30).unwrap();
        // The alpha^t collapse rate depends on alpha; the tight bound is
        // stated for alpha = 0.5.
        for (alpha, spread) in &report.initial_condition_spread {
            if (*alpha - 0.5).abs() < 1e-12 {
                assert!(*spread < 1e-6, "spread {spread} at alpha {alpha}");
            }
            assert!(spread.is_finite());
        }
        // Measured: k_inf increases in alpha, c_inf decreases.
        assert_eq!(report.k_inf_direction, Direction::Increasing);
        assert_eq!(report.c_inf_direction, Direction::Decreasing);
        let c: Vec<f64> = report.c_inf_values.iter().map(|p| p.1).collect();
        assert!((c[0] - 0.534992).abs() < 1e-6);
        assert!((c[1] - 0.25).abs() < 1e-12);
        assert!((c[2] - 0.081920).abs() < 2e-6);
        let k: Vec<f64> = report.k_inf_values.iter().map(|p| p.1).collect();
        assert!((k[0] - 0.133748).abs() < 1e-6);
        assert!((k[1] - 0.25).abs() < 1e-12);
        assert!((k[2] - 0.327680).abs() < 2e-6);
    }

    #[test]
    fn ln_distance_decays_with_ratio_alpha() {
        let ss = steady_state(0.5).unwrap();
        let path = limit_path_closed_form(0.5, 0.0625, 30).unwrap();
        let ln_k_inf = ss.k_inf.ln();
        // Late t's are skipped: the ln-distance shrinks below the f64
        // round-trip noise of exp/ln around 1e-9.
        for t in 0..20 {
            let d0 = path.k_star[t].ln() - ln_k_inf;
            let d1 = path.k_star[t + 1].ln() - ln_k_inf;
            assert!((d1 / d0 - 0.5).abs() < 1e-8, "ratio off at t={t}");
        }
    }
}
