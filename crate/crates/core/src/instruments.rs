//! Single-curve swap and annuity pricing, and the randomized test books.
//!
//! Conventions: both legs pay on the same schedule of `k / freq` years
//! (anchored at today), every accrual fraction is exactly `1 / freq`, and
//! the same curve forwards and discounts. A maturity that is not on the
//! schedule ends the trade at the last schedule date before it. From a
//! valuation time `t` the floating leg is worth `1 - df(T_end - t)` per
//! unit of notional, which is exact whenever `t` is a schedule date.

use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::market::ZeroCurve;
use crate::rng::{self, Domain};

pub const DEFAULT_FREQ: u32 = 2;
const SCHEDULE_EPS: f64 = 1e-9;

fn default_freq() -> u32 {
    DEFAULT_FREQ
}

fn is_default_freq(freq: &u32) -> bool {
    *freq == DEFAULT_FREQ
}

/// Indices `first..=last` of the schedule dates `k / freq` in `(t, maturity]`.
#[inline]
pub(crate) fn remaining_coupons(t: f64, maturity: f64, freq: u32) -> Option<(u32, u32)> {
    let f = freq as f64;
    let last = (maturity * f + SCHEDULE_EPS).floor();
    let first = (t * f + SCHEDULE_EPS).floor() + 1.0;
    (last >= first && last >= 1.0).then_some((first as u32, last as u32))
}

/// Present value per unit notional of `1/freq` paid on each remaining
/// schedule date up to `maturity`.
pub fn price_annuity_freq(curve: &ZeroCurve, t: f64, maturity: f64, freq: u32) -> f64 {
    let Some((first, last)) = remaining_coupons(t, maturity, freq) else {
        return 0.0;
    };
    let tau = 1.0 / freq as f64;
    (first..=last)
        .map(|k| tau * curve.df(k as f64 * tau - t))
        .sum()
}

/// Semi-annual annuity.
pub fn price_annuity(curve: &ZeroCurve, t: f64, maturity: f64) -> f64 {
    price_annuity_freq(curve, t, maturity, DEFAULT_FREQ)
}

/// Floating-leg value per unit notional.
fn float_leg(curve: &ZeroCurve, t: f64, maturity: f64, freq: u32) -> f64 {
    match remaining_coupons(t, maturity, freq) {
        Some((_, last)) => 1.0 - curve.df(last as f64 / freq as f64 - t),
        None => 0.0,
    }
}

/// Fixed rate that makes an ungeared swap worth zero.
pub fn par_rate(curve: &ZeroCurve, t: f64, maturity: f64) -> Result<f64> {
    if maturity <= t {
        return Err(domain(format!("maturity {maturity} not after valuation time {t}")));
    }
    let annuity = price_annuity(curve, t, maturity);
    if annuity == 0.0 {
        return Err(domain(format!("no schedule dates in ({t}, {maturity}]")));
    }
    Ok(float_leg(curve, t, maturity, DEFAULT_FREQ) / annuity)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Swap {
    pub notional: f64,
    pub fixed_rate: f64,
    /// Multiplier on the floating leg.
    pub gearing: f64,
    /// End date in years from today.
    pub maturity: f64,
    /// Pays fixed, receives floating.
    pub is_payer: bool,
    #[serde(default = "default_freq", skip_serializing_if = "is_default_freq")]
    pub freq: u32,
}

impl Swap {
    pub fn new(notional: f64, fixed_rate: f64, gearing: f64, maturity: f64, is_payer: bool) -> Result<Self> {
        let swap = Self {
            notional,
            fixed_rate,
            gearing,
            maturity,
            is_payer,
            freq: DEFAULT_FREQ,
        };
        swap.validate()?;
        Ok(swap)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.notional > 0.0 && self.notional.is_finite()) {
            return Err(domain(format!("notional {} must be positive", self.notional)));
        }
        if !(self.maturity > 0.0 && self.maturity.is_finite()) {
            return Err(domain(format!("maturity {} must be positive", self.maturity)));
        }
        if !(self.gearing > 0.0 && self.gearing.is_finite()) {
            return Err(domain(format!("gearing {} must be positive", self.gearing)));
        }
        if !self.fixed_rate.is_finite() {
            return Err(domain("fixed rate must be finite"));
        }
        if self.freq == 0 {
            return Err(domain("payment frequency must be positive"));
        }
        Ok(())
    }

    pub fn mirrored(&self) -> Self {
        Self {
            is_payer: !self.is_payer,
            ..self.clone()
        }
    }

    fn sign(&self) -> f64 {
        if self.is_payer {
            1.0
        } else {
            -1.0
        }
    }
}

/// Value of `swap` to its holder at time `t` on `curve`.
pub fn price_swap(curve: &ZeroCurve, t: f64, swap: &Swap) -> f64 {
    let Some((first, last)) = remaining_coupons(t, swap.maturity, swap.freq) else {
        return 0.0;
    };
    let tau = 1.0 / swap.freq as f64;
    let mut annuity = 0.0;
    let mut end_df = 1.0;
    for k in first..=last {
        end_df = curve.df(k as f64 * tau - t);
        annuity += tau * end_df;
    }
    let float = 1.0 - end_df;
    swap.notional * swap.sign() * (swap.gearing * float - swap.fixed_rate * annuity)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Portfolio {
    swaps: Vec<Swap>,
    gross_notional: f64,
}

impl Portfolio {
    pub fn new(swaps: Vec<Swap>) -> Result<Self> {
        for s in &swaps {
            s.validate()?;
        }
        let gross_notional = swaps.iter().map(|s| s.notional.abs()).sum();
        Ok(Self {
            swaps,
            gross_notional,
        })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn swaps(&self) -> &[Swap] {
        &self.swaps
    }

    pub fn len(&self) -> usize {
        self.swaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.swaps.is_empty()
    }

    pub fn gross_notional(&self) -> f64 {
        self.gross_notional
    }

    /// Latest maturity in the book, 0 when empty.
    pub fn last_maturity(&self) -> f64 {
        self.swaps.iter().fold(0.0, |m, s| m.max(s.maturity))
    }

    /// Every swap with payer and receiver exchanged.
    pub fn mirrored(&self) -> Self {
        Self {
            swaps: self.swaps.iter().map(Swap::mirrored).collect(),
            gross_notional: self.gross_notional,
        }
    }

    /// Every notional multiplied by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.swaps
                .iter()
                .map(|s| Swap {
                    notional: s.notional * factor,
                    ..s.clone()
                })
                .collect(),
        )
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let swaps: Vec<Swap> = serde_json::from_str(text)?;
        Self::new(swaps)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.swaps)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// Full revaluation: the sum of the trade values in book order.
pub fn price_portfolio(curve: &ZeroCurve, t: f64, portfolio: &Portfolio) -> f64 {
    portfolio.swaps.iter().map(|s| price_swap(curve, t, s)).sum()
}

/// Parameters of the randomized test book.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioRecipe {
    pub n: usize,
    pub p_payer: f64,
    #[serde(default = "PortfolioRecipe::default_strike_base")]
    pub strike_base: f64,
    #[serde(default = "PortfolioRecipe::default_y")]
    pub y: f64,
    #[serde(default)]
    pub seed: u64,
}

impl PortfolioRecipe {
    pub const STRIKE_BASE: f64 = 0.025;
    /// Strike offset that balances positive and negative exposure.
    pub const BALANCED_Y: f64 = 1.455;

    fn default_strike_base() -> f64 {
        Self::STRIKE_BASE
    }

    fn default_y() -> f64 {
        1.0
    }

    pub fn new(n: usize, p_payer: f64, seed: u64) -> Self {
        Self {
            n,
            p_payer,
            strike_base: Self::STRIKE_BASE,
            y: 1.0,
            seed,
        }
    }
}

impl Default for PortfolioRecipe {
    fn default() -> Self {
        Self::new(1000, 0.9, 1)
    }
}

/// Randomized book: swap `i` (1-based) matures at `i * 30 / n`, has notional
/// `1e8 (0.5 + x)`, strike `K (y + x')`, gearing `0.5 + x''` and is a payer
/// with probability `p_payer`.
///
/// Uniforms come from one PCG stream (`rng::Domain::Portfolio`, index 0)
/// consumed per swap in the order notional, strike, gearing, payer flag.
pub fn generate_portfolio(recipe: &PortfolioRecipe) -> Result<Portfolio> {
    if recipe.n == 0 {
        return Err(domain("portfolio size must be at least 1"));
    }
    if !(0.0..=1.0).contains(&recipe.p_payer) {
        return Err(domain(format!("p_payer {} outside [0, 1]", recipe.p_payer)));
    }
    let mut rng = rng::stream(recipe.seed, Domain::Portfolio, 0);
    let swaps = (1..=recipe.n)
        .map(|i| {
            let x_notional: f64 = rng.gen();
            let x_strike: f64 = rng.gen();
            let x_gearing: f64 = rng.gen();
            let u_payer: f64 = rng.gen();
            Swap {
                notional: 1e8 * (0.5 + x_notional),
                fixed_rate: recipe.strike_base * (recipe.y + x_strike),
                gearing: 0.5 + x_gearing,
                maturity: i as f64 * 30.0 / recipe.n as f64,
                is_payer: u_payer < recipe.p_payer,
                freq: DEFAULT_FREQ,
            }
        })
        .collect();
    Portfolio::new(swaps)
}
