//! Finite-horizon solvers: closed-form recursion for the log/Cobb-Douglas
//! instance, generic Euler-equation shooting, and a brute-force
//! dynamic-programming oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{FinitePath, ModelSpec, Primitives};

/// Settings for the shooting solver.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ShootingConfig {
    /// Terminal-capital tolerance |k[T+1]| must reach before clamping.
    pub tolerance: f64,
    pub max_bisection_iters: u32,
}

impl Default for ShootingConfig {
    fn default() -> Self {
        ShootingConfig {
            tolerance: 1e-12,
            max_bisection_iters: 200,
        }
    }
}

impl ShootingConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tolerance <= 0.0 || self.tolerance.is_nan() {
            return Err(Error::Domain(format!(
                "shooting tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_bisection_iters < 1 {
            return Err(Error::Domain("max_bisection_iters must be >= 1".into()));
        }
        Ok(())
    }
}

/// Capital grid for the dynamic-programming oracle.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DPGrid {
    pub grid_points: usize,
    pub k_min: f64,
    pub k_max: f64,
}

impl DPGrid {
    pub fn validate(&self) -> Result<()> {
        if self.grid_points < 2 {
            return Err(Error::Domain("DP grid needs at least 2 points".into()));
        }
        if !(0.0 < self.k_min && self.k_min < self.k_max && self.k_max < 1.0) {
            return Err(Error::Domain(format!(
                "DP grid bounds must satisfy 0 < k_min < k_max < 1, got [{}, {}]",
                self.k_min, self.k_max
            )));
        }
        Ok(())
    }

    fn node(&self, j: usize) -> f64 {
        let step = (self.k_max - self.k_min) / (self.grid_points - 1) as f64;
        self.k_min + step * j as f64
    }
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

/// Optimal saving rates s[t] = α(1−α^{T−t})/(1−α^{T−t+1}) for t = 0..=T.
///
/// The rate is strictly decreasing in t, ends at s[T] = 0 so the terminal
/// stock is exhausted, and stays below α everywhere.
pub fn saving_schedule(alpha: f64, horizon: usize) -> Result<Vec<f64>> {
    check_alpha(alpha)?;
    let mut s = Vec::with_capacity(horizon + 1);
    for t in 0..=horizon {
        let remaining = (horizon - t) as f64;
        // Cancellation-free form: s = α − α(1−α)·x/(1−αx) with x = α^{T−t}
        // keeps the gap below α representable until x itself underflows.
        if remaining == 0.0 {
            s.push(0.0);
        } else {
            let x = alpha.powf(remaining);
            s.push(alpha - alpha * (1.0 - alpha) * x / (1.0 - alpha * x));
        }
    }
    Ok(s)
}

/// Closed-form optimum for the log/Cobb-Douglas instance.
///
/// Capital follows k[t+1] = s[t]·k[t]^α; the product formulas are evaluated
/// by accumulating ln k, so horizons up to ~10^4 stay accurate even though
/// the raw α^T factors underflow.
pub fn solve_closed_form(alpha: f64, k0: f64, horizon: usize) -> Result<FinitePath> {
    check_alpha(alpha)?;
    check_k0(k0)?;
    let schedule = saving_schedule(alpha, horizon)?;
    let mut capital = Vec::with_capacity(horizon + 2);
    let mut consumption = Vec::with_capacity(horizon + 1);
    let mut ln_k = k0.ln();
    capital.push(k0);
    for (t, &s) in schedule.iter().enumerate() {
        let ln_output = alpha * ln_k;
        let output = ln_output.exp();
        consumption.push((1.0 - s) * output);
        if t < horizon {
            ln_k = s.ln() + ln_output;
            capital.push(ln_k.exp());
        } else {
            capital.push(0.0);
        }
    }
    let multipliers = consumption.iter().map(|c| 1.0 / c).collect();
    Ok(FinitePath {
        horizon,
        consumption,
        capital,
        multipliers,
    })
}

/// Outcome of one forward propagation from a trial c(0).
enum Shot {
    /// Reached t = T+1; carries the terminal capital.
    Terminal(FinitePath, f64),
    /// Capital hit zero before the end: c(0) too large.
    Overshoot,
    /// Capital left the admissible domain from above: c(0) too small.
    Undershoot,
}

fn propagate<M: Primitives>(model: &M, k0: f64, horizon: usize, c0: f64) -> Result<Shot> {
    let x_bar = model.max_sustainable_stock();
    let mut consumption = Vec::with_capacity(horizon + 1);
    let mut capital = Vec::with_capacity(horizon + 2);
    capital.push(k0);
    consumption.push(c0);
    let mut k = model.production(k0)? - c0;
    for t in 1..=horizon {
        if k <= 0.0 {
            return Ok(Shot::Overshoot);
        }
        if k >= x_bar {
            return Ok(Shot::Undershoot);
        }
        capital.push(k);
        let prev_mu = model.marginal_utility(consumption[t - 1])?;
        let c = model.inverse_marginal_utility(prev_mu / model.production_derivative(k)?)?;
        consumption.push(c);
        k = model.production(k)? - c;
    }
    capital.push(k);
    let multipliers = consumption
        .iter()
        .map(|&c| model.marginal_utility(c))
        .collect::<Result<Vec<f64>>>()?;
    let terminal = k;
    Ok(Shot::Terminal(
        FinitePath {
            horizon,
            consumption,
            capital,
            multipliers,
        },
        terminal,
    ))
}

/// Solves the two-point boundary value problem by bisecting on c(0).
///
/// Larger c(0) leaves less capital at every later date, so the map
/// c(0) ↦ k(T+1) is strictly decreasing; the bracket is (0, f(k0)). Domain
/// exits during propagation are classified by sign and fold back into the
/// bisection rather than aborting it. The returned path has its terminal
/// stock clamped to exactly 0.
pub fn solve_shooting<M: Primitives>(
    model: &M,
    k0: f64,
    horizon: usize,
    cfg: &ShootingConfig,
) -> Result<FinitePath> {
    cfg.validate()?;
    if !(k0 > 0.0 && k0 < model.max_sustainable_stock()) {
        return Err(Error::Domain(format!(
            "k0 must lie in (0, {}), got {k0}",
            model.max_sustainable_stock()
        )));
    }
    let output0 = model.production(k0)?;
    if horizon == 0 {
        // No intertemporal choice: consume all output.
        return Ok(FinitePath {
            horizon: 0,
            consumption: vec![output0],
            capital: vec![k0, 0.0],
            multipliers: vec![model.marginal_utility(output0)?],
        });
    }

    let mut lo = 0.0_f64; // terminal capital positive (or undershoot)
    let mut hi = output0; // terminal capital negative (or overshoot)
    let mut best: Option<(FinitePath, f64)> = None;
    for _ in 0..cfg.max_bisection_iters {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket exhausted at f64 resolution
        }
        match propagate(model, k0, horizon, mid)? {
            Shot::Overshoot => hi = mid,
            Shot::Undershoot => lo = mid,
            Shot::Terminal(path, terminal) => {
                if best
                    .as_ref()
                    .is_none_or(|(_, b)| terminal.abs() < b.abs())
                {
                    best = Some((path, terminal));
                }
                if terminal.abs() <= cfg.tolerance {
                    break;
                }
                if terminal > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
    }
    if let Some((path, terminal)) = &best {
        if terminal.abs() <= cfg.tolerance {
            let mut path = path.clone();
            let last = path.capital.len() - 1;
            path.capital[last] = 0.0;
            return Ok(path);
        }
    }
    // The Euler map is a saddle: near the optimum the terminal capital
    // moves by ~mu^T per ulp of c(0), so for long horizons bisection hits
    // the f64 sensitivity floor before reaching the tolerance. Finish with
    // Newton on the whole interior capital trajectory, which is
    // well-conditioned even when single shooting is not. The bisection
    // output seeds it.
    let guess: Vec<f64> = match &best {
        Some((path, _)) => path.capital[1..=horizon].to_vec(),
        None => (1..=horizon)
            .map(|t| k0 * (1.0 - t as f64 / (horizon + 1) as f64))
            .collect(),
    };
    let polished = match polish_newton(model, k0, horizon, guess) {
        Ok(path) => Ok(path),
        Err(_) if horizon >= 2 => {
            // Long-horizon paths hover near the steady state before the
            // final run-down, so single shooting leaves the tail of the
            // seed badly wrong. Solve half the horizon instead and pad
            // its flattest stretch out to the full length; that preserves
            // both the approach and the run-down shape.
            solve_shooting(model, k0, horizon / 2, cfg).and_then(|half| {
                let expanded = pad_flattest_stretch(&half.capital, horizon);
                polish_newton(model, k0, horizon, expanded)
            })
        }
        Err(e) => Err(e),
    };
    polished.map_err(|_| Error::Convergence {
        lo,
        hi,
        best_terminal: best.as_ref().map_or(f64::NAN, |(_, t)| *t),
        iters: cfg.max_bisection_iters,
    })
}

/// Stretch a solved capital trajectory to a longer horizon by repeating
/// the stock at its flattest interior point. `capital` holds the full
/// vector k_0..k_{m+1} of a solved problem; the result is an interior
/// guess k_1..k_target for the longer one.
fn pad_flattest_stretch(capital: &[f64], target: usize) -> Vec<f64> {
    let m = capital.len() - 2;
    let mut interior: Vec<f64> = capital[1..=m].to_vec();
    if interior.is_empty() {
        return vec![capital[0]; target];
    }
    let mut flattest = 0;
    for j in 0..m.saturating_sub(1) {
        if (interior[j + 1] - interior[j]).abs() < (interior[flattest + 1] - interior[flattest]).abs() {
            flattest = j;
        }
    }
    let pad = vec![interior[flattest]; target - m];
    interior.splice(flattest..flattest, pad);
    interior
}

/// Euler residual at one interior date, as a function of the three capital
/// stocks it touches: f'(k_t)·U'(f(k_t) − k_{t+1}) − U'(f(k_{t−1}) − k_t).
fn euler_gap<M: Primitives>(model: &M, km1: f64, kt: f64, kp1: f64) -> Result<f64> {
    let c_t = model.production(kt)? - kp1;
    let c_prev = model.production(km1)? - kt;
    if c_t <= 0.0 || c_prev <= 0.0 {
        return Err(Error::Domain("nonpositive consumption in Euler gap".into()));
    }
    Ok(model.production_derivative(kt)? * model.marginal_utility(c_t)?
        - model.marginal_utility(c_prev)?)
}

/// Damped Newton iteration on the interior capitals k_1..k_T with the two
/// boundary stocks pinned (k_0 = k0, k_{T+1} = 0). The Jacobian is
/// tridiagonal; entries come from centered finite differences of
/// [`euler_gap`], so no second derivatives are demanded of the model.
fn polish_newton<M: Primitives>(
    model: &M,
    k0: f64,
    horizon: usize,
    mut interior: Vec<f64>,
) -> Result<FinitePath> {
    let n = horizon;
    debug_assert_eq!(interior.len(), n);
    if n == 0 {
        // Nothing to iterate on: the whole output is eaten at t = 0.
        let c0 = model.production(k0)?;
        let mu = model.marginal_utility(c0)?;
        return Ok(FinitePath {
            horizon: 0,
            consumption: vec![c0],
            capital: vec![k0, 0.0],
            multipliers: vec![mu],
        });
    }
    let x_bar = model.max_sustainable_stock();
    let stock = |interior: &[f64], t: usize| -> f64 {
        if t == 0 {
            k0
        } else if t <= n {
            interior[t - 1]
        } else {
            0.0
        }
    };
    let residual = |interior: &[f64]| -> Result<Vec<f64>> {
        (1..=n)
            .map(|t| {
                euler_gap(
                    model,
                    stock(interior, t - 1),
                    stock(interior, t),
                    stock(interior, t + 1),
                )
            })
            .collect()
    };
    let inf_norm = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));

    let mut g = residual(&interior)?;
    let mut g_norm = inf_norm(&g);
    for _iter in 0..60 {
        if g_norm == 0.0 {
            break;
        }
        // Tridiagonal Jacobian by centered differences in each of the
        // three stocks a row touches.
        let mut sub = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n];
        for t in 1..=n {
            let km1 = stock(&interior, t - 1);
            let kt = stock(&interior, t);
            let kp1 = stock(&interior, t + 1);
            // Keep the perturbation well inside the feasible region: both
            // consumptions this row touches must stay positive.
            let c_t = model.production(kt)? - kp1;
            let c_prev = model.production(km1)? - kt;
            let h = (1e-7 * kt.abs().max(1e-4))
                .min(0.25 * c_t)
                .min(0.25 * c_prev);
            if t > 1 {
                sub[t - 1] = (euler_gap(model, km1 + h, kt, kp1)?
                    - euler_gap(model, km1 - h, kt, kp1)?)
                    / (2.0 * h);
            }
            diag[t - 1] = (euler_gap(model, km1, kt + h, kp1)?
                - euler_gap(model, km1, kt - h, kp1)?)
                / (2.0 * h);
            if t < n {
                sup[t - 1] = (euler_gap(model, km1, kt, kp1 + h)?
                    - euler_gap(model, km1, kt, kp1 - h)?)
                    / (2.0 * h);
            }
        }
        let step = solve_tridiagonal(&sub, &diag, &sup, &g)?;
        // Backtrack until the trial stays feasible and reduces the
        // residual norm.
        let mut lambda = 1.0;
        let mut improved = false;
        for _ in 0..40 {
            let trial: Vec<f64> = interior
                .iter()
                .zip(&step)
                .map(|(k, d)| k - lambda * d)
                .collect();
            let feasible = trial.iter().all(|&k| k > 0.0 && k < x_bar);
            if feasible {
                if let Ok(trial_g) = residual(&trial) {
                    let trial_norm = inf_norm(&trial_g);
                    if trial_norm < g_norm {
                        interior = trial;
                        g = trial_g;
                        g_norm = trial_norm;
                        improved = true;
                        break;
                    }
                }
            }
            lambda *= 0.5;
        }
        if !improved {
            break;
        }
    }
    // Residual scale: the gaps live on the scale of the marginal
    // utilities along the path.
    let mut capital = Vec::with_capacity(n + 2);
    capital.push(k0);
    capital.extend_from_slice(&interior);
    capital.push(0.0);
    let mut consumption = Vec::with_capacity(n + 1);
    let mut multipliers = Vec::with_capacity(n + 1);
    let mut mu_scale = 0.0f64;
    for t in 0..=n {
        let c = model.production(capital[t])? - capital[t + 1];
        if c <= 0.0 {
            return Err(Error::Domain(format!(
                "polish produced nonpositive consumption at t = {t}"
            )));
        }
        let mu = model.marginal_utility(c)?;
        mu_scale = mu_scale.max(mu);
        consumption.push(c);
        multipliers.push(mu);
    }
    if g_norm > 1e-10 * mu_scale {
        return Err(Error::Domain(format!(
            "Newton polish stalled with residual {g_norm:e}"
        )));
    }
    Ok(FinitePath {
        horizon: n,
        consumption,
        capital,
        multipliers,
    })
}

/// Thomas algorithm. `sub[i]` multiplies x[i-1], `sup[i]` multiplies
/// x[i+1]; sub[0] and sup[n-1] are ignored.
fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut c_prime = vec![0.0; n];
    let mut d_prime = vec![0.0; n];
    let mut denom = diag[0];
    if denom == 0.0 {
        return Err(Error::Domain("singular tridiagonal system".into()));
    }
    c_prime[0] = sup[0] / denom;
    d_prime[0] = rhs[0] / denom;
    for i in 1..n {
        denom = diag[i] - sub[i] * c_prime[i - 1];
        if denom == 0.0 {
            return Err(Error::Domain("singular tridiagonal system".into()));
        }
        if i < n - 1 {
            c_prime[i] = sup[i] / denom;
        }
        d_prime[i] = (rhs[i] - sub[i] * d_prime[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d_prime[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d_prime[i] - c_prime[i] * x[i + 1];
    }
    Ok(x)
}

/// Brute-force backward induction over a uniform capital grid, with the
/// terminal decision forced to consume all remaining output so k(T+1) = 0.
///
/// Small-horizon oracle only (T <= 6). Capital lives on the grid except for
/// the exact initial stock; consumption is recovered from the budget
/// identity so the returned path satisfies it to machine precision.
pub fn solve_bruteforce_dp<M: Primitives>(
    model: &M,
    k0: f64,
    horizon: usize,
    grid: &DPGrid,
) -> Result<FinitePath> {
    grid.validate()?;
    if horizon > 6 {
        return Err(Error::Domain(format!(
            "DP oracle is limited to T <= 6, got {horizon}"
        )));
    }
    if !(grid.k_min <= k0 && k0 <= grid.k_max) {
        return Err(Error::Domain(format!(
            "k0 = {k0} outside DP grid [{}, {}]",
            grid.k_min, grid.k_max
        )));
    }
    let n = grid.grid_points;
    let nodes: Vec<f64> = (0..n).map(|j| grid.node(j)).collect();

    // value[j] holds V_{t+1}(k_j) while filling stage t.
    let mut value: Vec<f64> = nodes
        .iter()
        .map(|&k| model.production(k).and_then(|f| model.utility(f)))
        .collect::<Result<Vec<f64>>>()?;
    // policy[t][j]: next-period grid index chosen at stage t from node j.
    let mut policy: Vec<Vec<usize>> = Vec::new();
    for _stage in (0..horizon).rev() {
        let mut stage_value = vec![f64::NEG_INFINITY; n];
        let mut stage_policy = vec![0usize; n];
        for j in 0..n {
            let output = model.production(nodes[j])?;
            let (best_j, best_v) = maximize_over_grid(model, output, &nodes, &value)?;
            stage_value[j] = best_v;
            stage_policy[j] = best_j;
        }
        value = stage_value;
        policy.push(stage_policy);
    }
    policy.reverse();

    // Forward pass: the first decision is taken from the exact k0 against
    // the stage-1 continuation values, later ones follow the grid policy.
    let mut capital = vec![k0];
    let mut consumption = Vec::new();
    let mut current = k0;
    let mut current_idx: Option<usize> = None;
    for stage in 0..horizon {
        let output = model.production(current)?;
        let next_idx = match current_idx {
            None => {
                let continuation = value_at_stage(&policy, &nodes, model, stage, horizon)?;
                maximize_over_grid(model, output, &nodes, &continuation)?.0
            }
            Some(idx) => policy[stage][idx],
        };
        let next_k = nodes[next_idx];
        consumption.push(output - next_k);
        capital.push(next_k);
        current = next_k;
        current_idx = Some(next_idx);
    }
    let final_output = model.production(current)?;
    consumption.push(final_output);
    capital.push(0.0);
    let multipliers = consumption
        .iter()
        .map(|&c| model.marginal_utility(c))
        .collect::<Result<Vec<f64>>>()?;
    Ok(FinitePath {
        horizon,
        consumption,
        capital,
        multipliers,
    })
}

/// Continuation values V_{stage+1} on the grid, rebuilt from the stored
/// policies so the forward pass can branch off-grid at stage 0.
fn value_at_stage<M: Primitives>(
    policy: &[Vec<usize>],
    nodes: &[f64],
    model: &M,
    stage: usize,
    horizon: usize,
) -> Result<Vec<f64>> {
    let n = nodes.len();
    let mut value: Vec<f64> = nodes
        .iter()
        .map(|&k| model.production(k).and_then(|f| model.utility(f)))
        .collect::<Result<Vec<f64>>>()?;
    for s in (stage + 1..horizon).rev() {
        let mut next = vec![f64::NEG_INFINITY; n];
        for j in 0..n {
            let output = model.production(nodes[j])?;
            let target = policy[s][j];
            let c = output - nodes[target];
            next[j] = model.utility(c)? + value[target];
        }
        value = next;
    }
    Ok(value)
}

/// Maximizes U(output − k_j) + value[j] over grid indices j with
/// output − k_j > 0. The objective is concave in k_j (strictly concave
/// utility plus a concave continuation value), hence unimodal in j: a
/// ternary search narrows the window, a linear scan finishes it.
fn maximize_over_grid<M: Primitives>(
    model: &M,
    output: f64,
    nodes: &[f64],
    value: &[f64],
) -> Result<(usize, f64)> {
    // Largest feasible index: nodes[j] < output strictly.
    let hi_end = nodes.partition_point(|&k| k < output);
    if hi_end == 0 {
        return Err(Error::Domain(format!(
            "no feasible saving choice: output {output} below the grid floor"
        )));
    }
    let score = |j: usize| -> f64 {
        let c = output - nodes[j];
        if c <= 0.0 {
            f64::NEG_INFINITY
        } else {
            model.utility(c).map_or(f64::NEG_INFINITY, |u| u) + value[j]
        }
    };
    let mut lo = 0usize;
    let mut hi = hi_end - 1;
    while hi - lo > 32 {
        let m1 = lo + (hi - lo) / 3;
        let m2 = hi - (hi - lo) / 3;
        if score(m1) < score(m2) {
            lo = m1 + 1;
        } else {
            hi = m2;
        }
    }
    let mut best_j = lo;
    let mut best_v = score(lo);
    for j in lo + 1..=hi {
        let v = score(j);
        if v > best_v {
            best_v = v;
            best_j = j;
        }
    }
    Ok((best_j, best_v))
}

/// Total utility of a path under the model, Σ U(c[t]).
pub fn path_objective<M: Primitives>(model: &M, path: &FinitePath) -> Result<f64> {
    path.consumption
        .iter()
        .try_fold(0.0, |acc, &c| Ok(acc + model.utility(c)?))
}

/// Convenience wrapper: the parametric instance solved by shooting.
pub fn solve_shooting_log_cd(
    alpha: f64,
    k0: f64,
    horizon: usize,
    cfg: &ShootingConfig,
) -> Result<FinitePath> {
    let model = ModelSpec::log_cobb_douglas(alpha)?;
    solve_shooting(&model, k0, horizon, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{euler_residuals, feasibility_check};

    fn log_cd(alpha: f64) -> ModelSpec {
        ModelSpec::log_cobb_douglas(alpha).unwrap()
    }

    #[test]
    fn saving_schedule_t2() {
        let s = saving_schedule(0.5, 2).unwrap();
        assert!((s[0] - 3.0 / 7.0).abs() < 1e-15);
        assert!((s[1] - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(s[2], 0.0);
    }

    #[test]
    fn saving_schedule_monotone_below_alpha() {
        for &alpha in &[0.2, 0.5, 0.8] {
            let s = saving_schedule(alpha, 40).unwrap();
            for t in 0..40 {
                assert!(s[t] >= s[t + 1], "not decreasing at t={t}");
                assert!(s[t] <= alpha);
                // Strictness is only representable while the gap
                // alpha^(T-t) clears the ulp of alpha itself.
                if alpha.powi(40 - t as i32) > 1e-12 {
                    assert!(s[t] > s[t + 1], "not strictly decreasing at t={t}");
                    assert!(s[t] < alpha);
                }
            }
            assert_eq!(s[40], 0.0);
        }
    }

    #[test]
    fn saving_schedule_long_horizon_approaches_alpha() {
        let s = saving_schedule(0.5, 200).unwrap();
        assert!((s[0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn closed_form_t0_consumes_everything() {
        let path = solve_closed_form(0.5, 0.0625, 0).unwrap();
        assert_eq!(path.consumption, vec![0.25]);
        assert_eq!(path.capital, vec![0.0625, 0.0]);
    }

    #[test]
    fn closed_form_t1_hand_values() {
        let path = solve_closed_form(0.5, 0.0625, 1).unwrap();
        assert!((path.capital[1] - 1.0 / 12.0).abs() < 1e-15);
        assert!((path.consumption[0] - 1.0 / 6.0).abs() < 1e-15);
        assert!((path.consumption[1] - (1.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn closed_form_is_euler_exact_and_feasible() {
        let model = log_cd(0.5);
        let path = solve_closed_form(0.5, 0.0625, 50).unwrap();
        let residuals = euler_residuals(&model, &path).unwrap();
        let max = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        assert!(max <= 1e-10, "max residual {max}");
        assert!(feasibility_check(&model, 0.0625, &path).unwrap().feasible);
    }

    #[test]
    fn perturbed_path_has_nonzero_residual() {
        let model = log_cd(0.5);
        let mut path = solve_closed_form(0.5, 0.0625, 10).unwrap();
        path.consumption[1] += 1e-3;
        let residuals = euler_residuals(&model, &path).unwrap();
        // residuals[0] is the t = 1 interior condition.
        assert!(residuals[0].abs() > 1e-4, "residual[1] = {}", residuals[0]);
    }

    #[test]
    fn shooting_matches_closed_form() {
        let cfg = ShootingConfig::default();
        let model = log_cd(0.5);
        let oracle = solve_closed_form(0.5, 0.0625, 10).unwrap();
        let shot = solve_shooting(&model, 0.0625, 10, &cfg).unwrap();
        for t in 0..=10 {
            assert!((oracle.consumption[t] - shot.consumption[t]).abs() < 1e-9);
            assert!((oracle.capital[t] - shot.capital[t]).abs() < 1e-9);
            assert!((oracle.multipliers[t] - shot.multipliers[t]).abs() < 1e-6);
        }
        assert_eq!(shot.capital[11], 0.0);
    }

    #[test]
    fn shooting_t0() {
        let cfg = ShootingConfig::default();
        let model = log_cd(0.5);
        let path = solve_shooting(&model, 0.0625, 0, &cfg).unwrap();
        assert_eq!(path.consumption, vec![0.25]);
    }

    #[test]
    fn shooting_satisfies_multiplier_recursion() {
        let cfg = ShootingConfig::default();
        let model = log_cd(0.3);
        let path = solve_shooting(&model, 0.5, 20, &cfg).unwrap();
        for t in 1..=20 {
            let lhs = path.multipliers[t] * model.production_derivative(path.capital[t]).unwrap();
            assert!((lhs - path.multipliers[t - 1]).abs() < 1e-10);
        }
    }

    #[test]
    fn dp_t0_consumes_output() {
        let model = log_cd(0.5);
        let grid = DPGrid {
            grid_points: 11,
            k_min: 0.01,
            k_max: 0.99,
        };
        let path = solve_bruteforce_dp(&model, 0.0625, 0, &grid).unwrap();
        assert_eq!(path.consumption, vec![0.25]);
        assert_eq!(path.capital, vec![0.0625, 0.0]);
    }

    #[test]
    fn dp_close_to_closed_form_objective() {
        let model = log_cd(0.5);
        let grid = DPGrid {
            grid_points: 20001,
            k_min: 0.001,
            k_max: 0.999,
        };
        let dp = solve_bruteforce_dp(&model, 0.0625, 2, &grid).unwrap();
        let exact = solve_closed_form(0.5, 0.0625, 2).unwrap();
        let gap = path_objective(&model, &exact).unwrap() - path_objective(&model, &dp).unwrap();
        assert!(gap >= -1e-12, "DP cannot beat the true optimum, gap {gap}");
        assert!(gap < 1e-4, "objective gap {gap}");
    }

    #[test]
    fn dp_gap_shrinks_with_density() {
        let model = log_cd(0.3);
        let exact = solve_closed_form(0.3, 0.5, 3).unwrap();
        let obj_exact = path_objective(&model, &exact).unwrap();
        let gap_at = |points: usize| {
            let grid = DPGrid {
                grid_points: points,
                k_min: 0.001,
                k_max: 0.999,
            };
            let dp = solve_bruteforce_dp(&model, 0.5, 3, &grid).unwrap();
            obj_exact - path_objective(&model, &dp).unwrap()
        };
        let coarse = gap_at(2001);
        let dense = gap_at(4001);
        assert!(dense <= coarse * 0.75, "coarse {coarse}, dense {dense}");
    }

    #[test]
    fn dp_matches_shooting_value() {
        let model = log_cd(0.3);
        let grid = DPGrid {
            grid_points: 8001,
            k_min: 0.001,
            k_max: 0.999,
        };
        let dp = solve_bruteforce_dp(&model, 0.5, 5, &grid).unwrap();
        let shot = solve_shooting(&model, 0.5, 5, &ShootingConfig::default()).unwrap();
        let gap = path_objective(&model, &shot).unwrap() - path_objective(&model, &dp).unwrap();
        assert!(gap.abs() < 1e-3, "gap {gap}");
    }

    #[test]
    fn dp_rejects_out_of_grid_k0() {
        let model = log_cd(0.5);
        let grid = DPGrid {
            grid_points: 11,
            k_min: 0.1,
            k_max: 0.9,
        };
        assert!(solve_bruteforce_dp(&model, 0.05, 2, &grid).is_err());
    }

    #[test]
    fn path_components_monotone_in_horizon() {
        // For fixed t: k_T(t) and lambda_T(t) strictly increase in T,
        // c_T(t) strictly decreases.
        for &t in &[0usize, 1, 5] {
            let mut prev: Option<(f64, f64, f64)> = None;
            for horizon in t..=t + 30 {
                let path = solve_closed_form(0.5, 0.0625, horizon).unwrap();
                let cur = (
                    path.capital[t],
                    path.consumption[t],
                    path.multipliers[t],
                );
                if let Some((pk, pc, pl)) = prev {
                    if t > 0 {
                        assert!(cur.0 > pk, "k_T({t}) not increasing at T={horizon}");
                    }
                    assert!(cur.1 < pc, "c_T({t}) not decreasing at T={horizon}");
                    assert!(cur.2 > pl, "lambda_T({t}) not increasing at T={horizon}");
                }
                prev = Some(cur);
            }
        }
    }
}
