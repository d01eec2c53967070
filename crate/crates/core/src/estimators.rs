//! Tail-exponent estimators for ranked lists.
//!
//! The primary route is an ordinary least-squares line through the
//! `(ln rank, ln value)` cloud; its slope is `-alpha_rank` and
//! `alpha = 1 / alpha_rank`. The Hill maximum-likelihood estimator gives an
//! independent estimate of the same exponent. Either can be wrapped in a
//! percentile bootstrap.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::empirical::RankList;
use crate::error::{Error, Result};

/// Straight-line least-squares fit `y = intercept + slope * x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub stderr_slope: f64,
    pub r_squared: f64,
    pub n: usize,
}

/// Unweighted OLS over at least two points with distinct `x`.
pub fn least_squares(points: &[(f64, f64)]) -> Option<LineFit> {
    let n = points.len();
    if n < 2 {
        return None;
    }
    let nf = n as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx <= 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = points
        .iter()
        .map(|&(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let r_squared = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    let stderr_slope = if n > 2 {
        (sse / (nf - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Some(LineFit {
        slope,
        intercept,
        stderr_slope,
        r_squared,
        n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankFit {
    /// Magnitude of the log-log slope.
    pub alpha_rank: f64,
    pub alpha: f64,
    pub stderr_alpha: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl RankFit {
    pub fn slope(&self) -> f64 {
        -self.alpha_rank
    }
}

pub fn fit_rank_regression(list: &RankList) -> Result<RankFit> {
    let distinct = list.distinct_count();
    if distinct < 2 {
        return Err(Error::DegenerateInput { distinct });
    }
    let line = least_squares(&list.plot_points()).ok_or(Error::DegenerateInput { distinct })?;
    if line.slope.is_nan() || line.slope >= 0.0 {
        return Err(Error::DegenerateFit { slope: line.slope });
    }
    let alpha_rank = -line.slope;
    Ok(RankFit {
        alpha_rank,
        alpha: 1.0 / alpha_rank,
        // d(1/s) = ds / s^2
        stderr_alpha: line.stderr_slope / (alpha_rank * alpha_rank),
        intercept: line.intercept,
        r_squared: line.r_squared,
        n_points: line.n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HillFit {
    pub alpha_hat: f64,
    pub stderr: f64,
    pub n: usize,
    pub m_min: f64,
}

/// `alpha_hat = n / sum ln(m_i / m_min)`; `m_min` defaults to the smallest
/// value, which then contributes `ln 1 = 0` to the sum.
pub fn fit_hill(list: &RankList, m_min: Option<f64>) -> Result<HillFit> {
    let values = list.values();
    let smallest = *values.last().ok_or(Error::EmptyInput)?;
    let m_min = match m_min {
        Some(t) if !(t.is_finite() && t > 0.0) => {
            return Err(Error::Domain {
                name: "m_min",
                value: t,
                domain: "(0, inf)",
            })
        }
        Some(t) => t,
        None => smallest,
    };
    if let Some(index) = values.iter().position(|&v| v < m_min) {
        return Err(Error::BelowThreshold {
            index,
            value: values[index],
            m_min,
        });
    }
    let log_sum: f64 = values.iter().map(|v| (v / m_min).ln()).sum();
    if log_sum.is_nan() || log_sum <= 0.0 {
        return Err(Error::DivergentEstimate);
    }
    let n = values.len();
    let alpha_hat = n as f64 / log_sum;
    Ok(HillFit {
        alpha_hat,
        stderr: alpha_hat / (n as f64).sqrt(),
        n,
        m_min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    RankRegression,
    Hill,
}

impl Method {
    pub fn estimate(self, list: &RankList) -> Result<f64> {
        match self {
            Method::RankRegression => fit_rank_regression(list).map(|f| f.alpha),
            Method::Hill => fit_hill(list, None).map(|f| f.alpha_hat),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapCi {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    /// Replicates requested.
    pub replicates: usize,
    /// Replicates skipped because the resample could not be fitted.
    pub failed: usize,
    pub point: f64,
}

impl BootstrapCi {
    pub fn contains(&self, alpha: f64) -> bool {
        self.lower <= alpha && alpha <= self.upper
    }
}

/// Linear-interpolation quantile of an ascending slice.
fn sorted_quantile(sorted: &[f64], q: f64) -> f64 {
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Percentile bootstrap interval for the exponent.
///
/// Replicate `i` draws from its own ChaCha stream `i` under `seed`, so the
/// result does not depend on how replicates are scheduled.
pub fn bootstrap_ci(
    list: &RankList,
    method: Method,
    replicates: usize,
    level: f64,
    seed: u64,
) -> Result<BootstrapCi> {
    if replicates == 0 {
        return Err(Error::Domain {
            name: "replicates",
            value: 0.0,
            domain: "replicates >= 1",
        });
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::Domain {
            name: "level",
            value: level,
            domain: "(0, 1)",
        });
    }
    let point = method.estimate(list)?;
    let values = list.values();
    let n = values.len();

    let outcomes: Vec<Option<f64>> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let resample: Vec<f64> = (0..n).map(|_| values[rng.gen_range(0..n)]).collect();
            let rl = RankList::from_values(list.key().clone(), resample).ok()?;
            method.estimate(&rl).ok()
        })
        .collect();

    let mut estimates: Vec<f64> = outcomes.into_iter().flatten().collect();
    let failed = replicates - estimates.len();
    if 2 * failed > replicates {
        return Err(Error::BootstrapFailure { failed, replicates });
    }
    estimates.sort_by(f64::total_cmp);
    Ok(BootstrapCi {
        lower: sorted_quantile(&estimates, (1.0 - level) / 2.0),
        upper: sorted_quantile(&estimates, (1.0 + level) / 2.0),
        level,
        replicates,
        failed,
        point,
    })
}
