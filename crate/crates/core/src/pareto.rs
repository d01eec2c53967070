//! Density, survival function, quantiles, moments and sampling of the
//! Pareto law `P(m) = (alpha/m0) (m0/m)^(alpha+1)` for `m >= m0`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Exponent of the "strongest" Pareto law.
pub const STRONGEST_ALPHA: f64 = 1.5;

/// Scale `m0` (lowest value of the variable) and exponent `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoParams {
    m0: f64,
    alpha: f64,
}

/// Result of a moment computation. Moments of order `k >= alpha` do not exist.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    Finite(f64),
    Divergent,
}

impl Moment {
    pub fn finite(self) -> Option<f64> {
        match self {
            Moment::Finite(v) => Some(v),
            Moment::Divergent => None,
        }
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, Moment::Divergent)
    }
}

impl ParetoParams {
    pub fn new(m0: f64, alpha: f64) -> Result<Self> {
        let ok = |x: f64| x.is_finite() && x > 0.0;
        if ok(m0) && ok(alpha) {
            Ok(Self { m0, alpha })
        } else {
            Err(Error::InvalidParams { m0, alpha })
        }
    }

    pub fn m0(&self) -> f64 {
        self.m0
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn pdf(&self, m: f64) -> f64 {
        if m < self.m0 {
            return 0.0;
        }
        (self.alpha / self.m0) * (self.m0 / m).powf(self.alpha + 1.0)
    }

    /// Survival function `P(X > m)`. Equals 1 below the support.
    pub fn ccdf(&self, m: f64) -> f64 {
        if m < self.m0 {
            return 1.0;
        }
        (m / self.m0).powf(-self.alpha)
    }

    /// Value below which a fraction `p` of the mass lies.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::Domain {
                name: "p",
                value: p,
                domain: "[0, 1)",
            });
        }
        Ok(self.m0 * (1.0 - p).powf(-1.0 / self.alpha))
    }

    pub fn median(&self) -> f64 {
        self.m0 * 2f64.powf(1.0 / self.alpha)
    }

    /// Raw moment `E[X^k]`, finite only for `k < alpha`.
    pub fn moment(&self, k: f64) -> Result<Moment> {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::Domain {
                name: "k",
                value: k,
                domain: "[0, inf)",
            });
        }
        if k >= self.alpha {
            return Ok(Moment::Divergent);
        }
        Ok(Moment::Finite(
            self.alpha * self.m0.powf(k) / (self.alpha - k),
        ))
    }

    /// Inverse-transform map from `u` in `(0, 1]` to the support.
    pub fn transform_uniform(&self, u: f64) -> f64 {
        self.m0 * u.powf(-1.0 / self.alpha)
    }

    /// Draw `n` values, reproducible for a given `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_with(&mut rng, n)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n)
            .map(|_| {
                // gen::<f64>() is in [0, 1); flip to (0, 1]
                let u = 1.0 - rng.gen::<f64>();
                self.transform_uniform(u)
            })
            .collect()
    }
}
