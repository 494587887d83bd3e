//! CSV emission and parsing for paths and reports. Values are printed with
//! 17 significant digits so a parse of our own output reproduces every f64
//! bit-exactly.

use std::fmt::Write as _;

use crate::asymptotics::LimitPath;
use crate::error::{Error, Result};
use crate::model::{euler_residuals, FinitePath, Primitives};
use crate::overtaking::OvertakingReport;

/// 17 significant digits: enough for f64 round-trip fidelity.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub const PATH_CSV_HEADER: &str = "t,k,c,lambda,saving_rate,euler_residual";

/// Renders a finite path as CSV: one row per t in [0, T] plus a terminal
/// row carrying only k[T+1] = 0.
pub fn path_to_csv<M: Primitives>(model: &M, path: &FinitePath) -> Result<String> {
    path.check_shape()?;
    let residuals = euler_residuals(model, path)?;
    let mut out = String::new();
    out.push_str(PATH_CSV_HEADER);
    out.push('\n');
    for t in 0..=path.horizon {
        let output = model.production(path.capital[t])?;
        let saving = if output > 0.0 {
            fmt_f64(path.capital[t + 1] / output)
        } else {
            String::new()
        };
        let residual = if t >= 1 {
            fmt_f64(residuals[t - 1])
        } else {
            String::new()
        };
        let _ = writeln!(
            out,
            "{t},{},{},{},{saving},{residual}",
            fmt_f64(path.capital[t]),
            fmt_f64(path.consumption[t]),
            fmt_f64(path.multipliers[t]),
        );
    }
    let _ = writeln!(
        out,
        "{},{},,,,",
        path.horizon + 1,
        fmt_f64(path.capital[path.horizon + 1])
    );
    Ok(out)
}

/// Parses the CSV produced by [`path_to_csv`] back into a path.
pub fn path_from_csv(text: &str) -> Result<FinitePath> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == PATH_CSV_HEADER => {}
        Some((_, other)) => {
            return Err(Error::Parse {
                line: 1,
                reason: format!("unexpected header: {other}"),
            })
        }
        None => {
            return Err(Error::Parse {
                line: 1,
                reason: "empty file".into(),
            })
        }
    }
    let mut capital = Vec::new();
    let mut consumption = Vec::new();
    let mut multipliers = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(Error::Parse {
                line: idx + 1,
                reason: format!("expected 6 fields, got {}", fields.len()),
            });
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>().map_err(|e| Error::Parse {
                line: idx + 1,
                reason: format!("bad number {s:?}: {e}"),
            })
        };
        capital.push(parse(fields[1])?);
        if !fields[2].is_empty() {
            consumption.push(parse(fields[2])?);
            multipliers.push(parse(fields[3])?);
        }
    }
    if capital.len() != consumption.len() + 1 || consumption.is_empty() {
        return Err(Error::Parse {
            line: 0,
            reason: format!(
                "inconsistent row counts: {} capital rows, {} consumption rows",
                capital.len(),
                consumption.len()
            ),
        });
    }
    Ok(FinitePath {
        horizon: consumption.len() - 1,
        consumption,
        capital,
        multipliers,
    })
}

pub const LIMIT_CSV_HEADER: &str = "t,k_star,c_star,lambda_star,convergence_error";

pub fn limit_path_to_csv(path: &LimitPath) -> String {
    let mut out = String::new();
    out.push_str(LIMIT_CSV_HEADER);
    out.push('\n');
    for t in 0..=path.t_max {
        let _ = writeln!(
            out,
            "{t},{},{},{},{}",
            fmt_f64(path.k_star[t]),
            fmt_f64(path.c_star[t]),
            fmt_f64(path.lambda_star[t]),
            fmt_f64(path.convergence_error[t]),
        );
    }
    out
}

pub const RATIO_CSV_HEADER: &str = "T,numerator,denominator,ratio,tail_infimum";

pub fn ratios_to_csv(report: &OvertakingReport) -> String {
    let mut out = String::new();
    out.push_str(RATIO_CSV_HEADER);
    out.push('\n');
    for i in 0..report.horizons.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            report.horizons[i],
            fmt_f64(report.numerators[i]),
            fmt_f64(report.denominators[i]),
            fmt_f64(report.ratio_sequence[i]),
            fmt_f64(report.running_tail_infimum[i]),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{feasibility_check, ModelSpec};
    use crate::solver::solve_closed_form;

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let model = ModelSpec::log_cobb_douglas(0.5).unwrap();
        let path = solve_closed_form(0.5, 0.0625, 10).unwrap();
        let text = path_to_csv(&model, &path).unwrap();
        let back = path_from_csv(&text).unwrap();
        assert_eq!(back.horizon, path.horizon);
        assert_eq!(back.capital, path.capital);
        assert_eq!(back.consumption, path.consumption);
        assert_eq!(back.multipliers, path.multipliers);
    }

    #[test]
    fn t0_path_has_two_data_rows() {
        let model = ModelSpec::log_cobb_douglas(0.5).unwrap();
        let path = solve_closed_form(0.5, 0.0625, 0).unwrap();
        let text = path_to_csv(&model, &path).unwrap();
        assert_eq!(text.lines().count(), 3); // header + 2 rows
    }

    #[test]
    fn reimported_path_is_feasible() {
        let model = ModelSpec::log_cobb_douglas(0.5).unwrap();
        let path = solve_closed_form(0.5, 0.0625, 25).unwrap();
        let back = path_from_csv(&path_to_csv(&model, &path).unwrap()).unwrap();
        assert!(feasibility_check(&model, 0.0625, &back).unwrap().feasible);
    }
}
