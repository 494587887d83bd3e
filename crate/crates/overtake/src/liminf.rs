//! Finite-evidence liminf estimation and the product rule for liminfs
//! (valid when one factor actually converges).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailTrend {
    Increasing,
    Decreasing,
    Oscillating,
    Constant,
}

/// Tail-infimum evidence for a finite prefix of a sequence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiminfEstimate {
    /// Infimum over the final (smallest) tail window.
    pub estimate: f64,
    /// (tail start fraction, infimum over that suffix).
    pub window_infima: Vec<(f64, f64)>,
    /// Set when the per-window infima disagree by more than 1e-6.
    pub windows_disagree: bool,
    pub trend: TailTrend,
}

/// Estimates liminf from a finite sequence by taking suffix infima at the
/// given tail start fractions; the reported estimate comes from the last
/// (deepest) window.
pub fn liminf_estimate(seq: &[f64], tail_start_fractions: &[f64]) -> Result<LiminfEstimate> {
    if seq.len() < 10 {
        return Err(Error::Structural(format!(
            "liminf estimation needs >= 10 points, got {}",
            seq.len()
        )));
    }
    if tail_start_fractions.is_empty() {
        return Err(Error::Structural("no tail windows requested".into()));
    }
    let mut fractions = tail_start_fractions.to_vec();
    fractions.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut window_infima = Vec::with_capacity(fractions.len());
    for &frac in &fractions {
        if !(0.0..1.0).contains(&frac) {
            return Err(Error::Structural(format!(
                "tail start fraction must lie in [0,1), got {frac}"
            )));
        }
        let start = ((seq.len() as f64) * frac).floor() as usize;
        let start = start.min(seq.len() - 1);
        let inf = seq[start..].iter().cloned().fold(f64::INFINITY, f64::min);
        window_infima.push((frac, inf));
    }
    let infima: Vec<f64> = window_infima.iter().map(|w| w.1).collect();
    let spread = infima.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - infima.iter().cloned().fold(f64::INFINITY, f64::min);
    let estimate = *infima.last().unwrap();

    let deepest_start = ((seq.len() as f64) * fractions.last().unwrap()).floor() as usize;
    let tail = &seq[deepest_start.min(seq.len() - 1)..];
    let trend = classify_trend(tail);
    Ok(LiminfEstimate {
        estimate,
        window_infima,
        windows_disagree: spread > 1e-6,
        trend,
    })
}

fn classify_trend(tail: &[f64]) -> TailTrend {
    if tail.len() < 2 {
        return TailTrend::Constant;
    }
    let up = tail.windows(2).all(|w| w[1] >= w[0]);
    let down = tail.windows(2).all(|w| w[1] <= w[0]);
    match (up, down) {
        (true, true) => TailTrend::Constant,
        (true, false) => TailTrend::Increasing,
        (false, true) => TailTrend::Decreasing,
        _ => TailTrend::Oscillating,
    }
}

/// Outcome of checking liminf(a·b) = liminf(a)·lim(b) on finite evidence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProductCheck {
    pub holds: bool,
    /// The stated rule needs the second factor to converge; this is set
    /// when the tail of `b` keeps oscillating and the rule is not
    /// applicable (a hypothesis violation, not a numerical failure).
    pub hypothesis_violated: bool,
    pub liminf_a: f64,
    pub limit_b: f64,
    pub liminf_ab: f64,
    pub tolerance: f64,
}

const PRODUCT_FRACTIONS: &[f64] = &[0.5, 0.75, 0.9];

/// Verifies the product rule liminf(a·b) = liminf(a)·lim(b) on sampled
/// sequences. Requires liminf(a) > 0 and a convergent positive `b`;
/// non-convergent `b` is reported as a hypothesis violation because the
/// rule genuinely fails there (e.g. a = 1,2,1,2,…, b = 2,1,2,1,…).
pub fn liminf_product_check(a: &[f64], b: &[f64]) -> Result<ProductCheck> {
    if a.len() != b.len() {
        return Err(Error::Structural(format!(
            "sequence lengths differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let est_a = liminf_estimate(a, PRODUCT_FRACTIONS)?;
    let est_b = liminf_estimate(b, PRODUCT_FRACTIONS)?;
    let ab: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    let est_ab = liminf_estimate(&ab, PRODUCT_FRACTIONS)?;

    // Convergence probe for b: the oscillation band over the deepest tail
    // window must be well below the band over the widest one.
    let band = |frac: f64| {
        let start = ((b.len() as f64) * frac).floor() as usize;
        let tail = &b[start.min(b.len() - 1)..];
        tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - tail.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let wide_band = band(PRODUCT_FRACTIONS[0]);
    let deep_band = band(*PRODUCT_FRACTIONS.last().unwrap());
    let b_converges = deep_band <= 1e-9 || deep_band <= 0.75 * wide_band;

    let limit_b = if b_converges {
        // Midpoint of the deepest band: symmetric around the limit for a
        // convergent tail.
        let start = ((b.len() as f64) * PRODUCT_FRACTIONS.last().unwrap()).floor() as usize;
        let tail = &b[start.min(b.len() - 1)..];
        let hi = tail.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = tail.iter().cloned().fold(f64::INFINITY, f64::min);
        0.5 * (hi + lo)
    } else {
        est_b.estimate
    };

    if est_a.estimate <= 0.0 || est_b.estimate <= 0.0 {
        return Ok(ProductCheck {
            holds: false,
            hypothesis_violated: true,
            liminf_a: est_a.estimate,
            limit_b,
            liminf_ab: est_ab.estimate,
            tolerance: 0.0,
        });
    }
    if !b_converges {
        return Ok(ProductCheck {
            holds: false,
            hypothesis_violated: true,
            liminf_a: est_a.estimate,
            limit_b,
            liminf_ab: est_ab.estimate,
            tolerance: 0.0,
        });
    }
    // Window residue: how much the finite tail can still move either
    // factor. Scales the acceptance tolerance.
    let residue_a = {
        let infs: Vec<f64> = est_a.window_infima.iter().map(|w| w.1).collect();
        infs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - infs.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let tolerance = 10.0 * (residue_a * limit_b.abs() + deep_band * (est_a.estimate.abs() + 1.0))
        + 1e-9;
    let gap = (est_ab.estimate - est_a.estimate * limit_b).abs();
    Ok(ProductCheck {
        holds: gap <= tolerance,
        hypothesis_violated: false,
        liminf_a: est_a.estimate,
        limit_b,
        liminf_ab: est_ab.estimate,
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FRACS: &[f64] = &[0.5, 0.75, 0.9];

    #[test]
    fn constant_sequence() {
        let seq = vec![1.0; 50];
        let est = liminf_estimate(&seq, FRACS).unwrap();
        assert_eq!(est.estimate, 1.0);
        assert!(!est.windows_disagree);
        assert_eq!(est.trend, TailTrend::Constant);
    }

    #[test]
    fn alternating_sequence_converging_to_two() {
        // seq(T) = 2 + (−1)^T / T, T = 1..=N: liminf 2.
        let seq: Vec<f64> = (1..=2000)
            .map(|t| 2.0 + if t % 2 == 0 { 1.0 } else { -1.0 } / t as f64)
            .collect();
        let est = liminf_estimate(&seq, FRACS).unwrap();
        assert!((est.estimate - 2.0).abs() < 2e-3);
        assert_eq!(est.trend, TailTrend::Oscillating);
        // Deeper windows give estimates at least as large.
        let infs: Vec<f64> = est.window_infima.iter().map(|w| w.1).collect();
        assert!(infs.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn monotone_decreasing_sequence() {
        let seq: Vec<f64> = (1..=500).map(|t| 1.0 + 1.0 / t as f64).collect();
        let est = liminf_estimate(&seq, FRACS).unwrap();
        assert!(est.estimate > 1.0 && est.estimate < 1.01);
        assert_eq!(est.trend, TailTrend::Decreasing);
    }

    #[test]
    fn short_sequence_rejected() {
        assert!(liminf_estimate(&[1.0; 5], FRACS).is_err());
        assert!(liminf_estimate(&[1.0; 50], &[]).is_err());
        assert!(liminf_estimate(&[1.0; 50], &[1.5]).is_err());
    }

    #[test]
    fn product_rule_on_convergent_factor() {
        let a: Vec<f64> = (1..=5000)
            .map(|t| 2.0 + if t % 2 == 0 { 1.0 } else { -1.0 } / t as f64)
            .collect();
        let b: Vec<f64> = (1..=5000).map(|t| 3.0 + 1.0 / t as f64).collect();
        let check = liminf_product_check(&a, &b).unwrap();
        assert!(!check.hypothesis_violated);
        assert!(check.holds, "gap vs tolerance: {check:?}");
        assert!((check.liminf_a * check.limit_b - 6.0).abs() < 0.01);
    }

    #[test]
    fn product_rule_constant_factors() {
        let ones = vec![1.0; 100];
        let check = liminf_product_check(&ones, &ones).unwrap();
        assert!(check.holds);
        assert_eq!(check.liminf_ab, 1.0);
    }

    #[test]
    fn alternating_counterexample_flagged() {
        // a = 1,2,1,2,…  b = 2,1,2,1,…  ab ≡ 2 but liminf a·liminf b = 1.
        let a: Vec<f64> = (0..200).map(|t| if t % 2 == 0 { 1.0 } else { 2.0 }).collect();
        let b: Vec<f64> = (0..200).map(|t| if t % 2 == 0 { 2.0 } else { 1.0 }).collect();
        let check = liminf_product_check(&a, &b).unwrap();
        assert!(check.hypothesis_violated, "b does not converge");
        assert!((check.liminf_ab - 2.0).abs() < 1e-12);
        assert!((check.liminf_a - 1.0).abs() < 1e-12);
    }
}
