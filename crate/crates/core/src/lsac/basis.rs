use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::instruments::{self, remaining_coupons, DEFAULT_FREQ};
use crate::market::ZeroCurve;

/// Constant, `m` unit payer swaps and `m` unit annuities ending at
/// `i * 30 / m` years, `i = 1..=m`. The swaps are struck at the time-zero
/// par rate of their end date. The same basis serves every stopping date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub m: usize,
    pub end_dates: Vec<f64>,
    pub strikes: Vec<f64>,
}

impl BasisSpec {
    pub const HORIZON: f64 = 30.0;

    pub fn new(m: usize, base_curve: &ZeroCurve) -> Result<Self> {
        if m == 0 {
            return Err(domain("basis needs at least one swap/annuity pair"));
        }
        let end_dates: Vec<f64> = (1..=m).map(|i| i as f64 * Self::HORIZON / m as f64).collect();
        let strikes = end_dates
            .iter()
            // an end date before the first coupon gives an empty swap; strike is irrelevant
            .map(|&end| instruments::par_rate(base_curve, 0.0, end).unwrap_or(0.0))
            .collect();
        Ok(Self {
            m,
            end_dates,
            strikes,
        })
    }

    /// Number of basis functions, `2m + 1`.
    pub fn size(&self) -> usize {
        2 * self.m + 1
    }
}

/// Basis values at `t` on `curve`; see [`basis_values_into`].
pub fn basis_values(curve: &ZeroCurve, t: f64, spec: &BasisSpec) -> Vec<f64> {
    let mut out = vec![0.0; spec.size()];
    basis_values_into(curve, t, spec, &mut out, &mut Vec::new());
    out
}

/// Writes `[1, swap_1..swap_m, annuity_1..annuity_m]` into `out`.
///
/// All basis instruments share the schedule, so the discount factors are
/// computed once and the legs are read off running sums. The arithmetic
/// matches [`instruments::price_swap`] and [`instruments::price_annuity`]
/// term for term.
pub fn basis_values_into(
    curve: &ZeroCurve,
    t: f64,
    spec: &BasisSpec,
    out: &mut [f64],
    scratch: &mut Vec<(f64, f64)>,
) {
    debug_assert_eq!(out.len(), spec.size());
    out.fill(0.0);
    out[0] = 1.0;
    let longest = spec.end_dates.iter().fold(0.0_f64, |a, &b| a.max(b));
    let Some((first, last)) = remaining_coupons(t, longest, DEFAULT_FREQ) else {
        return;
    };
    let tau = 1.0 / DEFAULT_FREQ as f64;
    // (df, running annuity) for schedule dates first..=last
    scratch.clear();
    let mut annuity = 0.0;
    for k in first..=last {
        let df = curve.df(k as f64 * tau - t);
        annuity += tau * df;
        scratch.push((df, annuity));
    }
    let m = spec.m;
    for (i, (&end, &strike)) in spec.end_dates.iter().zip(spec.strikes.iter()).enumerate() {
        let Some((_, end_index)) = remaining_coupons(t, end, DEFAULT_FREQ) else {
            continue;
        };
        let (df, annuity) = scratch[(end_index - first) as usize];
        out[1 + i] = (1.0 - df) - strike * annuity;
        out[1 + m + i] = annuity;
    }
}
