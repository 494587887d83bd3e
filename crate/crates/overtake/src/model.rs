//! Economic primitives: utility and production functions, path containers,
//! feasibility checks, and Euler residuals.
//!
//! The general contract is the [`Primitives`] trait (evaluate, derivative,
//! inverse-derivative). [`ModelSpec`] is the serializable catalogue of
//! concrete instances; the log-utility / Cobb-Douglas pair is the one with
//! closed forms and is the baseline everywhere else in the crate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance for budget-identity checks.
pub const BUDGET_RTOL: f64 = 1e-12;

/// Abstract model contract: everything the shooting solver and the
/// overtaking comparator need from (U, f).
pub trait Primitives {
    /// Instantaneous utility U(c).
    fn utility(&self, c: f64) -> Result<f64>;
    /// Marginal utility U'(c).
    fn marginal_utility(&self, c: f64) -> Result<f64>;
    /// The inverse of U': returns c with U'(c) = m.
    fn inverse_marginal_utility(&self, m: f64) -> Result<f64>;
    /// Production f(k), with f(0) = 0.
    fn production(&self, k: f64) -> Result<f64>;
    /// Production derivative f'(k), k > 0.
    fn production_derivative(&self, k: f64) -> Result<f64>;
    /// Maximum sustainable stock x̄ with f(x) < x for x > x̄.
    fn max_sustainable_stock(&self) -> f64;
}

/// A concrete model instance. Serializes as
/// `{"family":"log_cobb_douglas","alpha":<real>}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModelSpec {
    /// U(c) = ln c, f(k) = k^alpha with alpha in (0,1). Admissible capital
    /// domain is (0,1), so x̄ = 1.
    LogCobbDouglas { alpha: f64 },
}

impl ModelSpec {
    /// Constructs the log/Cobb-Douglas instance, validating alpha.
    pub fn log_cobb_douglas(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(ModelSpec::LogCobbDouglas { alpha })
    }

    pub fn alpha(&self) -> f64 {
        match self {
            ModelSpec::LogCobbDouglas { alpha } => *alpha,
        }
    }

    /// Parses the JSON wire form, rejecting unknown families by name.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)
            .map_err(|e| Error::Structural(format!("invalid model JSON: {e}")))?;
        let family = value
            .get("family")
            .and_then(|f| f.as_str())
            .ok_or_else(|| Error::Structural("model JSON lacks a \"family\" field".into()))?;
        if family != "log_cobb_douglas" {
            return Err(Error::UnknownFamily(family.to_string()));
        }
        let spec: ModelSpec = serde_json::from_value(value)
            .map_err(|e| Error::Structural(format!("invalid model JSON: {e}")))?;
        check_alpha(spec.alpha())?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("model serialization cannot fail")
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0,1), got {alpha}")));
    }
    Ok(())
}

impl Primitives for ModelSpec {
    fn utility(&self, c: f64) -> Result<f64> {
        if c <= 0.0 {
            return Err(Error::Domain(format!("utility requires c > 0, got {c}")));
        }
        Ok(c.ln())
    }

    fn marginal_utility(&self, c: f64) -> Result<f64> {
        if c <= 0.0 {
            return Err(Error::Domain(format!(
                "marginal utility requires c > 0, got {c}"
            )));
        }
        Ok(1.0 / c)
    }

    fn inverse_marginal_utility(&self, m: f64) -> Result<f64> {
        if m <= 0.0 {
            return Err(Error::Domain(format!(
                "inverse marginal utility requires m > 0, got {m}"
            )));
        }
        Ok(1.0 / m)
    }

    fn production(&self, k: f64) -> Result<f64> {
        if k < 0.0 {
            return Err(Error::Domain(format!("production requires k >= 0, got {k}")));
        }
        if k == 0.0 {
            return Ok(0.0);
        }
        Ok(k.powf(self.alpha()))
    }

    fn production_derivative(&self, k: f64) -> Result<f64> {
        if k <= 0.0 {
            return Err(Error::Domain(format!(
                "production derivative requires k > 0, got {k}"
            )));
        }
        let alpha = self.alpha();
        Ok(alpha * k.powf(alpha - 1.0))
    }

    fn max_sustainable_stock(&self) -> f64 {
        1.0
    }
}

/// A solved finite-horizon trajectory.
///
/// Index conventions: `consumption` and `multipliers` run over t = 0..=T,
/// `capital` over t = 0..=T+1 with `capital[T+1] == 0` at an optimum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FinitePath {
    pub horizon: usize,
    pub consumption: Vec<f64>,
    pub capital: Vec<f64>,
    pub multipliers: Vec<f64>,
}

impl FinitePath {
    /// Checks the array lengths against the horizon.
    pub fn check_shape(&self) -> Result<()> {
        let t = self.horizon;
        if self.consumption.len() != t + 1
            || self.capital.len() != t + 2
            || self.multipliers.len() != t + 1
        {
            return Err(Error::Structural(format!(
                "path arrays inconsistent with horizon {t}: c={}, k={}, lambda={}",
                self.consumption.len(),
                self.capital.len(),
                self.multipliers.len()
            )));
        }
        Ok(())
    }
}

/// Which feasibility constraint a path violated first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    InitialStock,
    BudgetIdentity,
    NonnegativeConsumption,
    NonnegativeCapital,
    TerminalExhaustion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub constraint: Constraint,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    pub first_violation: Option<Violation>,
}

impl FeasibilityVerdict {
    fn ok() -> Self {
        FeasibilityVerdict {
            feasible: true,
            first_violation: None,
        }
    }

    fn violated(index: usize, constraint: Constraint, magnitude: f64) -> Self {
        FeasibilityVerdict {
            feasible: false,
            first_violation: Some(Violation {
                index,
                constraint,
                magnitude,
            }),
        }
    }
}

/// Euler-equation residuals r[t] = f'(k[t])·U'(c[t]) − U'(c[t−1]) for
/// t = 1..=T. An exact optimum yields the zero vector; T = 0 has no
/// interior period and yields an empty vector.
pub fn euler_residuals<M: Primitives>(model: &M, path: &FinitePath) -> Result<Vec<f64>> {
    path.check_shape()?;
    let t_max = path.horizon;
    let mut residuals = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        let lhs = model.production_derivative(path.capital[t])?
            * model.marginal_utility(path.consumption[t])?;
        let rhs = model.marginal_utility(path.consumption[t - 1])?;
        residuals.push(lhs - rhs);
    }
    Ok(residuals)
}

/// Verifies the feasibility constraints: correct initial stock,
/// budget identity within `BUDGET_RTOL·max(1, f(k[t]))`, nonnegativity, and
/// terminal exhaustion.
pub fn feasibility_check<M: Primitives>(
    model: &M,
    k0: f64,
    path: &FinitePath,
) -> Result<FeasibilityVerdict> {
    path.check_shape()?;
    let t_max = path.horizon;

    let init_gap = (path.capital[0] - k0).abs();
    if init_gap > BUDGET_RTOL * k0.max(1.0) {
        return Ok(FeasibilityVerdict::violated(
            0,
            Constraint::InitialStock,
            init_gap,
        ));
    }
    for t in 0..=t_max {
        let c = path.consumption[t];
        if c < 0.0 {
            return Ok(FeasibilityVerdict::violated(
                t,
                Constraint::NonnegativeConsumption,
                -c,
            ));
        }
        let k = path.capital[t];
        if k < 0.0 {
            return Ok(FeasibilityVerdict::violated(
                t,
                Constraint::NonnegativeCapital,
                -k,
            ));
        }
        let output = model.production(k.max(0.0))?;
        let gap = (path.capital[t + 1] - (output - c)).abs();
        if gap > BUDGET_RTOL * output.max(1.0) {
            return Ok(FeasibilityVerdict::violated(
                t,
                Constraint::BudgetIdentity,
                gap,
            ));
        }
        // A negative next-period stock is blamed on the consumption decision
        // at t, matching how the budget identity is indexed.
        if path.capital[t + 1] < 0.0 && t < t_max {
            return Ok(FeasibilityVerdict::violated(
                t,
                Constraint::NonnegativeCapital,
                -path.capital[t + 1],
            ));
        }
    }
    let terminal = path.capital[t_max + 1].abs();
    if terminal > BUDGET_RTOL {
        return Ok(FeasibilityVerdict::violated(
            t_max + 1,
            Constraint::TerminalExhaustion,
            terminal,
        ));
    }
    Ok(FeasibilityVerdict::ok())
}
