//! Bandwidth and normalizer schedules for recursive and fixed-window
//! estimation.
//!
//! A plan is the triple `(beta, d, c1)`. With `rho = beta / (2 beta + d)` the
//! recursive schedule is `h_1 = 1`, `h_k = c1 (ln k / k)^rho` for `k >= 2`;
//! the fixed-window (batch) schedule evaluates the same formula at the final
//! sample size. The uniform-deviation normalizer is `B_1 = 1`,
//! `B_n = (n / ln n)^rho`, so that `B_n h_n = c1` holds exactly for `n >= 2`
//! — both powers are computed from the same ratio `ln n / n` so the identity
//! survives floating point to within a couple of ulps.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smoothness/dimension/constant triple driving every schedule.
///
/// Serialized as `{"beta", "d", "c1"}`; the exponent `rho` is derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandwidthPlan {
    beta: f64,
    d: u32,
    c1: f64,
}

impl BandwidthPlan {
    /// Validate and build a plan. Requires `beta > 0`, `d >= 1`, `c1 > 0`.
    pub fn new(beta: f64, d: u32, c1: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::invalid(format!(
                "smoothness index must be positive and finite, got {beta}"
            )));
        }
        if d == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if !(c1 > 0.0) || !c1.is_finite() {
            return Err(Error::invalid(format!(
                "schedule constant must be positive and finite, got {c1}"
            )));
        }
        Ok(BandwidthPlan { beta, d, c1 })
    }

    /// Parse from the documented JSON form, revalidating the fields.
    pub fn from_json(text: &str) -> Result<Self> {
        let plan: BandwidthPlan = serde_json::from_str(text)?;
        BandwidthPlan::new(plan.beta, plan.d, plan.c1)
    }

    #[must_use]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[must_use]
    pub fn dim(&self) -> u32 {
        self.d
    }

    #[must_use]
    pub fn c1(&self) -> f64 {
        self.c1
    }

    /// Schedule exponent `rho = beta / (2 beta + d)`, always in `(0, 1/2)`.
    #[must_use]
    pub fn rho(&self) -> f64 {
        self.beta / (2.0 * self.beta + self.d as f64)
    }

    /// Recursive-schedule bandwidth for observation `k` (1-based).
    ///
    /// `h_1 = 1` regardless of the constant; `h_k = c1 (ln k / k)^rho` after.
    pub fn bandwidth_at(&self, k: u64) -> Result<f64> {
        match k {
            0 => Err(Error::invalid("bandwidth schedule starts at k = 1")),
            1 => Ok(1.0),
            _ => {
                let r = (k as f64).ln() / k as f64;
                Ok(self.c1 * r.powf(self.rho()))
            }
        }
    }

    /// Fixed-window bandwidth for a batch of size `n`: `c1 (ln n / n)^rho`.
    ///
    /// Needs `n >= 2` (at `n = 1` the window would collapse to zero).
    pub fn pr_bandwidth(&self, n: u64) -> Result<f64> {
        if n < 2 {
            return Err(Error::invalid(
                "fixed-window bandwidth needs a sample of size >= 2",
            ));
        }
        let r = (n as f64).ln() / n as f64;
        Ok(self.c1 * r.powf(self.rho()))
    }

    /// Uniform-deviation normalizer: `B_1 = 1`, `B_n = (n / ln n)^rho`.
    pub fn normalizer(&self, n: u64) -> Result<f64> {
        match n {
            0 => Err(Error::invalid("normalizer starts at n = 1")),
            1 => Ok(1.0),
            _ => {
                let r = (n as f64).ln() / n as f64;
                Ok(r.powf(-self.rho()))
            }
        }
    }

    /// Effective-resolution scale `V(n) = n h_n`.
    ///
    /// For `n >= 2` this equals `c1 n^((beta+d)/(2 beta+d)) (ln n)^rho` exactly.
    pub fn effective_sample(&self, n: u64) -> Result<f64> {
        Ok(n as f64 * self.bandwidth_at(n)?)
    }
}
