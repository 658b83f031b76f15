//! Valuation adjustments as integrals over simulated profiles.
//!
//! Every adjustment has the form `-int_0^T c(u) D(u) E[Z(u)] du` with the
//! kernel `D(u) = exp(-int_0^u (r + lambda_B + lambda_C))`, where `r` is the
//! base curve's instantaneous forward and the spreads are flat:
//!
//! | adjustment | `c(u)`                   | `Z(u)`    |
//! |------------|--------------------------|-----------|
//! | CVA        | `(1 - R_C) lambda_C`     | `V+`      |
//! | DVA        | `(1 - R_B) lambda_B`     | `V-`      |
//! | FCA        | `(1 - R_B) lambda_B`     | `V+`      |
//! | COLVA      | `s_X`                    | `X`       |
//! | MVA        | `(1 - R_B) lambda_B - s_I` | `I`     |
//!
//! The integrals are evaluated with the trapezoidal rule on the profile
//! dates. Signed values follow the convention that a cost is negative;
//! [`XvaResult::mva_bps`] reports the margin funding cost as a positive number.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::lsac::{ExposureProfile, ImProfile};
use crate::market::ZeroCurve;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct XvaParams {
    /// Issuer spread.
    pub lambda_b: f64,
    /// Counterparty spread.
    pub lambda_c: f64,
    pub recovery_b: f64,
    pub recovery_c: f64,
    /// Spread received on posted initial margin.
    pub s_i: f64,
    /// Spread on variation margin.
    pub s_x: f64,
    /// Expected variation-margin profile on the stopping dates; `None` is unsecured.
    pub collateral: Option<Vec<f64>>,
}

impl Default for XvaParams {
    fn default() -> Self {
        Self {
            lambda_b: 0.0167,
            lambda_c: 0.0,
            recovery_b: 0.40,
            recovery_c: 0.40,
            s_i: 0.0,
            s_x: 0.0,
            collateral: None,
        }
    }
}

impl XvaParams {
    pub fn validate(&self) -> Result<()> {
        for (name, r) in [("R_B", self.recovery_b), ("R_C", self.recovery_c)] {
            if !(0.0..1.0).contains(&r) {
                return Err(domain(format!("recovery {name} = {r} outside [0, 1)")));
            }
        }
        for (name, s) in [
            ("lambda_B", self.lambda_b),
            ("lambda_C", self.lambda_c),
            ("s_I", self.s_i),
            ("s_X", self.s_x),
        ] {
            if !s.is_finite() {
                return Err(domain(format!("{name} must be finite")));
            }
        }
        Ok(())
    }

    /// MVA integrand weight `(1 - R_B) lambda_B - s_I`.
    pub fn margin_funding_spread(&self) -> f64 {
        (1.0 - self.recovery_b) * self.lambda_b - self.s_i
    }
}

/// `exp(-int_0^u (r(s) + lambda_B + lambda_C) ds)` with `r` from the base curve.
pub fn adjustment_discount(params: &XvaParams, curve: &ZeroCurve, u: f64) -> Result<f64> {
    let df = curve.discount_factor(u)?;
    Ok(df * (-(params.lambda_b + params.lambda_c) * u).exp())
}

/// Trapezoidal rule over (possibly non-uniform) dates.
pub fn trapezoid(dates: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(dates.len(), values.len());
    dates
        .windows(2)
        .zip(values.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

/// `-int c D(u) profile(u) du` for a constant weight `c`.
fn adjustment(weight: f64, dates: &[f64], profile: &[f64], params: &XvaParams, curve: &ZeroCurve) -> Result<f64> {
    if dates.len() != profile.len() {
        return Err(Error::Mismatch(format!(
            "{} dates but {} profile values",
            dates.len(),
            profile.len()
        )));
    }
    let integrand = dates
        .iter()
        .zip(profile.iter())
        .map(|(&u, &z)| Ok(weight * adjustment_discount(params, curve, u)? * z))
        .collect::<Result<Vec<_>>>()?;
    // 0 - x rather than -x keeps a zero adjustment at +0
    Ok(0.0 - trapezoid(dates, &integrand))
}

/// Signed MVA; negative when margin funding is a cost.
pub fn compute_mva(im: &ImProfile, params: &XvaParams, curve: &ZeroCurve) -> Result<f64> {
    adjustment(params.margin_funding_spread(), &im.dates, &im.expected, params, curve)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CreditFunding {
    pub cva: f64,
    pub dva: f64,
    pub fca: f64,
    /// `fca + dva`.
    pub fva: f64,
    pub colva: f64,
}

pub fn compute_credit_funding(exposure: &ExposureProfile, params: &XvaParams, curve: &ZeroCurve) -> Result<CreditFunding> {
    let dates = &exposure.dates;
    let issuer = (1.0 - params.recovery_b) * params.lambda_b;
    let cva = adjustment((1.0 - params.recovery_c) * params.lambda_c, dates, &exposure.epe, params, curve)?;
    let dva = adjustment(issuer, dates, &exposure.ene, params, curve)?;
    let fca = adjustment(issuer, dates, &exposure.epe, params, curve)?;
    let colva = match &params.collateral {
        Some(x) => adjustment(params.s_x, dates, x, params, curve)?,
        None => 0.0,
    };
    Ok(CreditFunding {
        cva,
        dva,
        fca,
        fva: fca + dva,
        colva,
    })
}

fn bps(value: f64, gross_notional: f64) -> f64 {
    if gross_notional > 0.0 {
        1e4 * value / gross_notional
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub rule: String,
    pub dates: Vec<f64>,
}

/// Adjustments in currency and bps of gross notional.
///
/// All `*_bps` fields carry the signed value except `mva_bps`, which is
/// the margin funding cost (`-mva`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct XvaResult {
    pub cva: f64,
    pub dva: f64,
    pub fca: f64,
    pub fva: f64,
    pub colva: f64,
    pub mva: f64,
    /// Capital adjustment; the capital model is not part of this engine, so it is always 0.
    pub kva: f64,
    pub cva_bps: f64,
    pub dva_bps: f64,
    pub fca_bps: f64,
    pub fva_bps: f64,
    pub colva_bps: f64,
    pub mva_bps: f64,
    pub gross_notional: f64,
    pub params: XvaParams,
    pub grid: QuadratureGrid,
}

impl XvaResult {
    pub fn assemble(cf: CreditFunding, mva: f64, gross_notional: f64, params: &XvaParams, dates: &[f64]) -> Self {
        Self {
            cva: cf.cva,
            dva: cf.dva,
            fca: cf.fca,
            fva: cf.fva,
            colva: cf.colva,
            mva,
            kva: 0.0,
            cva_bps: bps(cf.cva, gross_notional),
            dva_bps: bps(cf.dva, gross_notional),
            fca_bps: bps(cf.fca, gross_notional),
            fva_bps: bps(cf.fva, gross_notional),
            colva_bps: bps(cf.colva, gross_notional),
            mva_bps: bps(-mva, gross_notional),
            gross_notional,
            params: params.clone(),
            grid: QuadratureGrid {
                rule: "trapezoid".into(),
                dates: dates.to_vec(),
            },
        }
    }

    /// Margin funding cost in currency (positive for a cost).
    pub fn mva_cost(&self) -> f64 {
        -self.mva
    }
}

/// All adjustments from the exposure and margin profiles.
pub fn compute_xva(
    exposure: &ExposureProfile,
    im: &ImProfile,
    params: &XvaParams,
    curve: &ZeroCurve,
    gross_notional: f64,
) -> Result<XvaResult> {
    params.validate()?;
    if exposure.dates != im.dates {
        return Err(Error::Mismatch("exposure and margin profiles use different dates".into()));
    }
    let cf = compute_credit_funding(exposure, params, curve)?;
    let mva = compute_mva(im, params, curve)?;
    Ok(XvaResult::assemble(cf, mva, gross_notional, params, &im.dates))
}
