//! The overtaking comparator: terminal-date path conversion, the ∞/∞
//! catch-up ratio, certification of the two divergence/vanishing-gap
//! conditions, and the terminal-consumption bound that backs them.
//!
//! Everything here works under the negative-utility convention of the
//! parametric instance: ln c < 0 on (0,1), so "catches up" means the tail
//! ratio of the (negative) truncated totals stays at or above one.

use serde::{Deserialize, Serialize};

use crate::asymptotics::limit_path_closed_form;
use crate::error::{Error, Result};
use crate::model::{ModelSpec, Primitives};
use crate::solver::solve_closed_form;

/// A feasible path truncated at a chosen terminal date: consumption is
/// unchanged before T, the whole remaining stock is eaten at T, and both
/// consumption and capital are zero afterwards (implicitly).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvertedPath {
    pub horizon: usize,
    /// c̃(0..=T); the last entry is f(k(T)).
    pub consumption: Vec<f64>,
    /// k̃(0..=T); k̃(T+1) = 0 by construction.
    pub capital: Vec<f64>,
}

/// Applies the terminal-date conversion at T: c̃(t) = c(t) for t < T,
/// c̃(T) = f(k(T)). The base path must be feasible on [0, T].
pub fn convert_path<M: Primitives>(
    c: &[f64],
    k: &[f64],
    model: &M,
    horizon: usize,
) -> Result<ConvertedPath> {
    if k.len() < horizon + 1 || c.len() < horizon {
        return Err(Error::Structural(format!(
            "conversion at T = {horizon} needs k[0..=T] and c[0..T], got k: {}, c: {}",
            k.len(),
            c.len()
        )));
    }
    for (t, &stock) in k.iter().enumerate().take(horizon + 1) {
        if stock <= 0.0 {
            return Err(Error::Infeasible {
                index: t,
                constraint: "positive capital".into(),
                magnitude: -k[t],
            });
        }
    }
    for t in 0..horizon {
        if c[t] <= 0.0 {
            return Err(Error::Infeasible {
                index: t,
                constraint: "positive consumption".into(),
                magnitude: -c[t],
            });
        }
        let output = model.production(k[t])?;
        let gap = (k[t + 1] - (output - c[t])).abs();
        if gap > 1e-10 * output.max(1.0) {
            return Err(Error::Infeasible {
                index: t,
                constraint: "budget identity".into(),
                magnitude: gap,
            });
        }
    }
    let mut consumption: Vec<f64> = c[..horizon].to_vec();
    consumption.push(model.production(k[horizon])?);
    Ok(ConvertedPath {
        horizon,
        consumption,
        capital: k[..=horizon].to_vec(),
    })
}

/// Truncated utility total Σ_{t<T} U(c(t)) + U(f(k(T))) of a converted
/// path. Rejects any consumption with U(c) >= 0, since the ratio's
/// direction depends on the all-negative convention.
pub fn converted_total<M: Primitives>(model: &M, path: &ConvertedPath) -> Result<f64> {
    let mut total = 0.0;
    for (t, &c) in path.consumption.iter().enumerate() {
        let u = model.utility(c)?;
        if u >= 0.0 {
            return Err(Error::SignConvention { index: t, c });
        }
        total += u;
    }
    Ok(total)
}

/// The ∞/∞ catch-up ratio at one horizon:
/// [Σ_{t<T} U(c1) + U(f(k1(T)))] / [Σ_{t<T} U(c2) + U(f(k2(T)))].
/// With both totals negative, path2 catches up to path1 when the tail
/// liminf of this ratio over T is at least 1.
pub fn catch_up_ratio<M: Primitives>(
    path1: &ConvertedPath,
    path2: &ConvertedPath,
    model: &M,
) -> Result<f64> {
    if path1.horizon != path2.horizon {
        return Err(Error::Structural(format!(
            "catch-up ratio requires equal horizons, got {} vs {}",
            path1.horizon, path2.horizon
        )));
    }
    let num = converted_total(model, path1)?;
    let den = converted_total(model, path2)?;
    if den == 0.0 {
        return Err(Error::DegenerateComparison {
            horizon: path1.horizon,
        });
    }
    Ok(num / den)
}

fn check_grid(t_grid: &[usize]) -> Result<()> {
    if t_grid.len() < 2 {
        return Err(Error::Structural("horizon grid needs >= 2 entries".into()));
    }
    if t_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Structural("horizon grid must be strictly increasing".into()));
    }
    if t_grid[0] == 0 {
        return Err(Error::Structural("horizon grid must start at T >= 1".into()));
    }
    Ok(())
}

/// Σ_{t<=T} ln c_T(t): the finite optimum's truncated total, which is also
/// its converted total since c_T(T) = f(k_T(T)).
pub fn finite_optimum_total(alpha: f64, k0: f64, horizon: usize) -> Result<f64> {
    let path = solve_closed_form(alpha, k0, horizon)?;
    let mut total = 0.0;
    for (t, &c) in path.consumption.iter().enumerate() {
        if c >= 1.0 {
            return Err(Error::SignConvention { index: t, c });
        }
        total += c.ln();
    }
    Ok(total)
}

/// Condition (i) evidence: S(T) = Σ_{t<=T} ln c_T(t) over the grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionIReport {
    pub horizons: Vec<usize>,
    pub partial_sums: Vec<f64>,
    pub strictly_decreasing: bool,
    /// (S_last − S_first)/(T_last − T_first); near ln c_∞ for k0 near the
    /// steady state.
    pub slope_estimate: f64,
    /// Divergence classification: decreasing with at least linear growth
    /// of |S|.
    pub divergent: bool,
}

pub fn check_condition_i(alpha: f64, k0: f64, t_grid: &[usize]) -> Result<ConditionIReport> {
    check_grid(t_grid)?;
    let partial_sums: Vec<f64> = t_grid
        .iter()
        .map(|&t| finite_optimum_total(alpha, k0, t))
        .collect::<Result<Vec<f64>>>()?;
    let strictly_decreasing = partial_sums.windows(2).all(|w| w[1] < w[0]);
    let first = partial_sums[0];
    let last = *partial_sums.last().unwrap();
    let t_first = t_grid[0] as f64;
    let t_last = *t_grid.last().unwrap() as f64;
    let slope_estimate = (last - first) / (t_last - t_first);
    let linear_floor = first.abs() + 0.5 * (first.abs() / t_first) * (t_last - t_first);
    let divergent = strictly_decreasing && last < 0.0 && last.abs() >= linear_floor;
    Ok(ConditionIReport {
        horizons: t_grid.to_vec(),
        partial_sums,
        strictly_decreasing,
        slope_estimate,
        divergent,
    })
}

/// Condition (ii) evidence: the relative gap ρ(T) between the finite
/// optimum's total and the limit path's truncated total.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConditionIIReport {
    pub horizons: Vec<usize>,
    /// Σ_{t<T}(ln c_T(t) − ln c°(t)) + ln f(k_T(T)) − ln f(k°(T)).
    pub numerators: Vec<f64>,
    /// Σ_{t<=T} ln c_T(t).
    pub denominators: Vec<f64>,
    pub rhos: Vec<f64>,
    /// max |numerator| over the grid; bounded per the terminal-consumption
    /// bound while the denominator diverges.
    pub numerator_bound_observed: f64,
    /// |ρ| eventually decreasing with |ρ(T_last)| < |ρ(T_first)|.
    pub satisfied: bool,
}

pub fn check_condition_ii(alpha: f64, k0: f64, t_grid: &[usize]) -> Result<ConditionIIReport> {
    check_grid(t_grid)?;
    let mut numerators = Vec::with_capacity(t_grid.len());
    let mut denominators = Vec::with_capacity(t_grid.len());
    let mut rhos = Vec::with_capacity(t_grid.len());
    for &horizon in t_grid {
        let finite = solve_closed_form(alpha, k0, horizon)?;
        let limit = limit_path_closed_form(alpha, k0, horizon)?;
        let mut num = 0.0;
        for t in 0..horizon {
            let c_t = finite.consumption[t];
            if !(c_t > 0.0 && c_t < 1.0) {
                return Err(Error::SignConvention { index: t, c: c_t });
            }
            num += c_t.ln() - limit.c_star[t].ln();
        }
        // Terminal terms: ln f(k_T(T)) = ln c_T(T) since nothing is saved
        // at T; the limit path's terminal term uses f(k°(T)).
        num += finite.consumption[horizon].ln() - alpha * limit.k_star[horizon].ln();
        let den = finite_optimum_total(alpha, k0, horizon)?;
        if den == 0.0 {
            return Err(Error::DegenerateComparison { horizon });
        }
        if !num.is_finite() || !den.is_finite() {
            return Err(Error::Structural(format!(
                "non-finite condition (ii) terms at T = {horizon}: num = {num}, den = {den}"
            )));
        }
        numerators.push(num);
        denominators.push(den);
        rhos.push(num / den);
    }
    let abs_rhos: Vec<f64> = rhos.iter().map(|r| r.abs()).collect();
    // Eventually decreasing: strictly decreasing from some grid point on.
    let mut tail_start = abs_rhos.len() - 1;
    while tail_start > 0 && abs_rhos[tail_start - 1] > abs_rhos[tail_start] {
        tail_start -= 1;
    }
    let eventually_decreasing = tail_start + 1 < abs_rhos.len() || abs_rhos.len() == 1;
    let satisfied =
        eventually_decreasing && abs_rhos.last().unwrap() < &abs_rhos[0];
    let numerator_bound_observed = numerators.iter().fold(0.0f64, |m, n| m.max(n.abs()));
    Ok(ConditionIIReport {
        horizons: t_grid.to_vec(),
        numerators,
        denominators,
        rhos,
        numerator_bound_observed,
        satisfied,
    })
}

/// G(α): the signed bound expression whose negativity the appendix proves
/// by series expansion.
pub fn appendix_g(alpha: f64) -> f64 {
    let a = alpha;
    a * a.ln() / (1.0 - a)
        + a * (1.0 - a).ln()
        + (1.0 - a) / (a * a.ln()) * (-(1.0 - a) * (1.0 - a).ln() - a)
}

/// F(α) = G(α)·(1−α)·α·ln α, positive on (0,1).
pub fn appendix_f(alpha: f64) -> f64 {
    let a = alpha;
    let la = a.ln();
    let l1a = (1.0 - a).ln();
    a * a * la * la + (1.0 - a) * a * a * l1a * la
        - (1.0 - a).powi(3) * l1a
        - (1.0 - a) * (1.0 - a) * a
}

/// The k0-free bound on |ln c_T(T)|:
/// |α ln α/(1−α) + α ln(1−α)| + (1−α)/(α ln α)·[−(1−α)ln(1−α) − α].
pub fn appendix_bound(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    let a = alpha;
    let first = (a * a.ln() / (1.0 - a) + a * (1.0 - a).ln()).abs();
    let second = (1.0 - a) / (a * a.ln()) * (-(1.0 - a) * (1.0 - a).ln() - a);
    Ok(first + second)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundCheck {
    pub alpha: f64,
    pub k0: f64,
    pub bound: f64,
    /// (T, |ln c_T(T)|, bound + |ln k0|·α^T + slack).
    pub entries: Vec<(usize, f64, f64)>,
    pub worst_excess: f64,
    pub holds: bool,
}

/// Checks |ln c_T(T)| ≤ appendix_bound(α) + |ln k0|·α^T + 1e-9 on the grid.
pub fn bound_check(alpha: f64, k0: f64, t_grid: &[usize]) -> Result<BoundCheck> {
    let bound = appendix_bound(alpha)?;
    if t_grid.is_empty() {
        return Err(Error::Structural("empty horizon grid".into()));
    }
    let mut entries = Vec::with_capacity(t_grid.len());
    let mut worst_excess = f64::NEG_INFINITY;
    for &horizon in t_grid {
        let path = solve_closed_form(alpha, k0, horizon)?;
        let lhs = path.consumption[horizon].ln().abs();
        let rhs = bound + k0.ln().abs() * alpha.powi(horizon as i32) + 1e-9;
        worst_excess = worst_excess.max(lhs - rhs);
        entries.push((horizon, lhs, rhs));
    }
    Ok(BoundCheck {
        alpha,
        k0,
        bound,
        entries,
        worst_excess,
        holds: worst_excess <= 0.0,
    })
}

/// Built-in feasible rivals for the certification harness. All of them
/// keep capital and consumption inside (0,1) for the parametric instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Challenger {
    /// Fixed saving rate s: k(t+1) = s·f(k(t)).
    ConstantSaving { rate: f64 },
    /// Saves only half of the optimal amount in period 0, optimal rate α
    /// afterwards.
    ImpatientBurst,
    /// Saves at rate α/2 for the first `delay` periods, α afterwards.
    DelayedStart { delay: usize },
    /// The limit policy itself (saving rate exactly α); the reflexivity
    /// case.
    LimitPolicy,
}

impl Challenger {
    pub fn label(&self) -> String {
        match self {
            Challenger::ConstantSaving { rate } => format!("constant_saving_{rate}"),
            Challenger::ImpatientBurst => "impatient_burst".into(),
            Challenger::DelayedStart { delay } => format!("delayed_start_{delay}"),
            Challenger::LimitPolicy => "limit_policy".into(),
        }
    }

    fn rate_at(&self, t: usize, alpha: f64) -> f64 {
        match self {
            Challenger::ConstantSaving { rate } => *rate,
            Challenger::ImpatientBurst => {
                if t == 0 {
                    alpha / 2.0
                } else {
                    alpha
                }
            }
            Challenger::DelayedStart { delay } => {
                if t < *delay {
                    alpha / 2.0
                } else {
                    alpha
                }
            }
            Challenger::LimitPolicy => alpha,
        }
    }

    /// Generates the feasible base path (c, k) on [0, horizon]; k has one
    /// extra trailing entry so the budget identity is checkable at every t.
    pub fn generate(&self, alpha: f64, k0: f64, horizon: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        if let Challenger::ConstantSaving { rate } = self {
            if !(*rate > 0.0 && *rate < 1.0) {
                return Err(Error::Domain(format!(
                    "constant saving rate must lie in (0,1), got {rate}"
                )));
            }
        }
        let model = ModelSpec::log_cobb_douglas(alpha)?;
        let mut capital = vec![k0];
        let mut consumption = Vec::with_capacity(horizon + 1);
        for t in 0..=horizon {
            let output = model.production(capital[t])?;
            let s = self.rate_at(t, alpha);
            consumption.push((1.0 - s) * output);
            capital.push(s * output);
        }
        Ok((consumption, capital))
    }
}

/// The three rivals the certification harness ships with.
pub fn builtin_challengers() -> Vec<Challenger> {
    vec![
        Challenger::ConstantSaving { rate: 0.7 },
        Challenger::ImpatientBurst,
        Challenger::DelayedStart { delay: 3 },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Overtakes,
    Overtaken,
    Inconclusive,
}

/// Numerical evidence that the limit path catches up to one challenger.
/// The verdict is certified by finite evidence only: it covers the grid
/// that was actually evaluated.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OvertakingReport {
    pub challenger: String,
    pub horizons: Vec<usize>,
    pub numerators: Vec<f64>,
    pub denominators: Vec<f64>,
    pub ratio_sequence: Vec<f64>,
    /// running_tail_infimum[i] = inf of ratio_sequence[i..].
    pub running_tail_infimum: Vec<f64>,
    pub verdict: Verdict,
    /// Records the negative-utility convention the ratio direction
    /// depends on.
    pub sign_convention: String,
}

/// Converts the limit path's truncation at `horizon`.
fn converted_limit(alpha: f64, k0: f64, horizon: usize) -> Result<ConvertedPath> {
    let model = ModelSpec::log_cobb_douglas(alpha)?;
    let limit = limit_path_closed_form(alpha, k0, horizon)?;
    convert_path(&limit.c_star, &limit.k_star, &model, horizon)
}

/// Runs the catch-up comparison for each challenger against the limit
/// path's truncations over the horizon grid.
pub fn certify_optimality(
    alpha: f64,
    k0: f64,
    challengers: &[Challenger],
    t_grid: &[usize],
) -> Result<Vec<OvertakingReport>> {
    check_grid(t_grid)?;
    let model = ModelSpec::log_cobb_douglas(alpha)?;
    let mut reports = Vec::with_capacity(challengers.len());
    for challenger in challengers {
        let mut numerators = Vec::with_capacity(t_grid.len());
        let mut denominators = Vec::with_capacity(t_grid.len());
        let mut ratios = Vec::with_capacity(t_grid.len());
        for &horizon in t_grid {
            let (c, k) = challenger.generate(alpha, k0, horizon)?;
            let converted = convert_path(&c, &k, &model, horizon)?;
            let limit = converted_limit(alpha, k0, horizon)?;
            numerators.push(converted_total(&model, &converted)?);
            denominators.push(converted_total(&model, &limit)?);
            ratios.push(catch_up_ratio(&converted, &limit, &model)?);
        }
        let mut running_tail_infimum = vec![0.0; ratios.len()];
        let mut inf = f64::INFINITY;
        for i in (0..ratios.len()).rev() {
            inf = inf.min(ratios[i]);
            running_tail_infimum[i] = inf;
        }
        // liminf proxy: the infimum over the deeper half of the grid.
        let mid = ratios.len() / 2;
        let tail_liminf = running_tail_infimum[mid];
        let tail_sup = ratios[mid..].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let verdict = if tail_liminf >= 1.0 - 1e-9 {
            Verdict::Overtakes
        } else if tail_sup < 1.0 - 1e-9 {
            Verdict::Overtaken
        } else {
            Verdict::Inconclusive
        };
        reports.push(OvertakingReport {
            challenger: challenger.label(),
            horizons: t_grid.to_vec(),
            numerators,
            denominators,
            ratio_sequence: ratios,
            running_tail_infimum,
            verdict,
            sign_convention: "U(c) = ln c < 0 for all evaluated consumption".into(),
        });
    }
    Ok(reports)
}

/// The factorization behind the optimality proof at one horizon:
/// ratio(challenger, limit) = ratio(challenger, finite optimum)
///                          × (finite optimum total / limit truncated total).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Factorization {
    pub direct_ratio: f64,
    pub vs_finite_optimum: f64,
    pub optimum_over_limit: f64,
}

pub fn factorization_check(
    alpha: f64,
    k0: f64,
    challenger: &Challenger,
    horizon: usize,
) -> Result<Factorization> {
    let model = ModelSpec::log_cobb_douglas(alpha)?;
    let (c, k) = challenger.generate(alpha, k0, horizon)?;
    let converted = convert_path(&c, &k, &model, horizon)?;
    let challenger_total = converted_total(&model, &converted)?;
    let optimum_total = finite_optimum_total(alpha, k0, horizon)?;
    let limit_total = converted_total(&model, &converted_limit(alpha, k0, horizon)?)?;
    Ok(Factorization {
        direct_ratio: challenger_total / limit_total,
        vs_finite_optimum: challenger_total / optimum_total,
        optimum_over_limit: optimum_total / limit_total,
    })
}
