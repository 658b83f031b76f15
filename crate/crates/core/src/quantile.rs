//! Order-statistic VAR and expected shortfall over a loss sample.
//!
//! VAR at confidence `c` over `N` losses is the `ceil(c N)`-th smallest
//! loss (1-based, no interpolation). ES is the mean of every loss greater
//! than or equal to that VAR, summed in ascending order.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Guards `ceil` against products like `0.99 * 100 = 99.00000000000001`.
const RANK_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ImKind {
    Var,
    Es,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImMethod {
    pub kind: ImKind,
    pub confidence: f64,
}

impl ImMethod {
    pub const DEFAULT_CONFIDENCE: f64 = 0.99;

    pub fn new(kind: ImKind, confidence: f64) -> Result<Self> {
        let method = Self { kind, confidence };
        method.validate()?;
        Ok(method)
    }

    pub fn var(confidence: f64) -> Result<Self> {
        Self::new(ImKind::Var, confidence)
    }

    pub fn es(confidence: f64) -> Result<Self> {
        Self::new(ImKind::Es, confidence)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.confidence > 0.5 && self.confidence < 1.0) {
            return Err(domain(format!("confidence {} outside (0.5, 1)", self.confidence)));
        }
        Ok(())
    }
}

impl Default for ImMethod {
    fn default() -> Self {
        Self {
            kind: ImKind::Var,
            confidence: Self::DEFAULT_CONFIDENCE,
        }
    }
}

/// 1-based rank of the VAR order statistic.
pub fn var_rank(confidence: f64, n: usize) -> usize {
    let rank = (confidence * n as f64 - RANK_EPS).ceil() as usize;
    rank.clamp(1, n)
}

/// VAR and ES of `losses`; the slice is sorted ascending in place.
pub fn var_es(losses: &mut [f64], confidence: f64) -> (f64, f64) {
    assert!(!losses.is_empty(), "empty loss sample");
    losses.sort_unstable_by(f64::total_cmp);
    let var = losses[var_rank(confidence, losses.len()) - 1];
    let start = losses.partition_point(|&l| l < var);
    let tail = &losses[start..];
    let es = tail.iter().sum::<f64>() / tail.len() as f64;
    (var, es)
}

/// The statistic selected by `method`, floored at zero.
pub fn margin(losses: &mut [f64], method: &ImMethod) -> f64 {
    let (var, es) = var_es(losses, method.confidence);
    match method.kind {
        ImKind::Var => var.max(0.0),
        ImKind::Es => es.max(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn four_loss_example() {
        let mut losses = [4.0, 1.0, 3.0, 2.0];
        assert_eq!(var_es(&mut losses, 0.75), (3.0, 3.5));
    }

    #[test]
    fn rank_is_robust_to_rounding() {
        assert_eq!(var_rank(0.99, 100), 99);
        assert_eq!(var_rank(0.99, 1294), 1282);
        assert_eq!(var_rank(0.75, 4), 3);
        assert_eq!(var_rank(0.999, 10), 10);
    }

    #[test]
    fn ties_enter_the_tail() {
        let mut losses = [1.0, 2.0, 2.0, 2.0, 5.0];
        // rank ceil(0.8 * 5) = 4 -> 2.0; tail {2, 2, 2, 5}
        assert_eq!(var_es(&mut losses, 0.8), (2.0, 2.75));
    }

    #[test]
    fn margin_is_floored() {
        let mut gains = [-3.0, -2.0, -1.0, -0.5];
        assert_eq!(margin(&mut gains, &ImMethod::var(0.75).unwrap()), 0.0);
        assert_eq!(margin(&mut [0.0; 8], &ImMethod::es(0.99).unwrap()), 0.0);
    }

    #[test]
    fn invalid_confidence() {
        assert!(ImMethod::var(0.5).is_err());
        assert!(ImMethod::var(1.0).is_err());
        assert!(ImMethod::es(0.975).is_ok());
    }

    proptest! {
        #[test]
        fn es_dominates_var(losses in proptest::collection::vec(-1e6f64..1e6, 2..300), conf in 0.51f64..0.999) {
            let mut l = losses.clone();
            let (var, es) = var_es(&mut l, conf);
            prop_assert!(es >= var);
        }
    }
}
