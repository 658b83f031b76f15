//! One-factor Hull-White short-rate Monte Carlo.
//!
//! The short rate is `r(t) = x(t) + phi(t)` with
//! `dx = -a x dt + sigma dW`, `x(0) = 0`, and `phi` chosen so model
//! zero-coupon bonds reprice the base curve at time zero. Transitions of
//! `x` between stopping dates are sampled exactly. Bond prices are affine,
//!
//! ```text
//! P(t, T) = P0(T) / P0(t) * exp(0.5 (V(t,T) - V(0,T) + V(0,t)) - B(t,T) x(t))
//! ```
//!
//! and the pathwise deflator is accumulated with the trapezoidal rule on
//! the stopping dates.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::market::{ZeroCurve, N_TENORS, TENORS};
use crate::rng::{self, Domain};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub mean_reversion: f64,
    pub vol: f64,
    pub base_curve: ZeroCurve,
}

impl ModelParams {
    pub const DEFAULT_MEAN_REVERSION: f64 = 0.03;
    pub const DEFAULT_VOL: f64 = 0.01;
    pub const DEFAULT_BASE_RATE: f64 = 0.025;

    pub fn new(mean_reversion: f64, vol: f64, base_curve: ZeroCurve) -> Result<Self> {
        let params = Self {
            mean_reversion,
            vol,
            base_curve,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mean_reversion > 0.0 && self.mean_reversion.is_finite()) {
            return Err(domain(format!("mean reversion {} must be positive", self.mean_reversion)));
        }
        if !(self.vol >= 0.0 && self.vol.is_finite()) {
            return Err(domain(format!("volatility {} must be non-negative", self.vol)));
        }
        Ok(())
    }

    fn b(&self, tau: f64) -> f64 {
        (1.0 - (-self.mean_reversion * tau).exp()) / self.mean_reversion
    }

    /// Variance of `int_t^T x(u) du` given `x(t)`.
    fn v(&self, tau: f64) -> f64 {
        let a = self.mean_reversion;
        let e = (-a * tau).exp();
        self.vol * self.vol / (a * a) * (tau + 2.0 / a * e - 0.5 / a * e * e - 1.5 / a)
    }

    /// Deterministic shift `phi(t)` of the short rate.
    pub fn shift(&self, t: f64) -> f64 {
        let a = self.mean_reversion;
        let g = 1.0 - (-a * t).exp();
        self.base_curve.forward_rate(t) + self.vol * self.vol / (2.0 * a * a) * g * g
    }

    /// `ln A(t, T)` and `B(t, T)` of the affine bond `P = A exp(-B x)`.
    pub fn affine_coefficients(&self, t: f64, maturity: f64) -> (f64, f64) {
        let tau = maturity - t;
        let p0 = &self.base_curve;
        let log_fwd = -p0.rate(maturity) * maturity + p0.rate(t) * t;
        let convexity = 0.5 * (self.v(tau) - self.v(maturity) + self.v(t));
        (log_fwd + convexity, self.b(tau))
    }

    /// Model bond price `P(t, maturity)` given the state `x(t)`.
    pub fn bond_price(&self, t: f64, maturity: f64, x: f64) -> f64 {
        let (log_a, b) = self.affine_coefficients(t, maturity);
        (log_a - b * x).exp()
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            mean_reversion: Self::DEFAULT_MEAN_REVERSION,
            vol: Self::DEFAULT_VOL,
            base_curve: ZeroCurve::flat(Self::DEFAULT_BASE_RATE),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimGrid {
    pub dates: Vec<f64>,
    pub n_paths: usize,
    pub seed: u64,
}

impl SimGrid {
    pub const DEFAULT_PATHS: usize = 1024;

    /// Equally spaced dates `0, step, ..., horizon`.
    pub fn uniform(horizon: f64, step: f64, n_paths: usize, seed: u64) -> Result<Self> {
        if !(step > 0.0 && horizon >= 0.0) {
            return Err(domain("grid step must be positive and horizon non-negative"));
        }
        let n = (horizon / step + 1e-9).floor() as usize;
        let grid = Self {
            dates: (0..=n).map(|k| k as f64 * step).collect(),
            n_paths,
            seed,
        };
        grid.validate()?;
        Ok(grid)
    }

    /// Six-monthly dates out to 30 years.
    pub fn standard(n_paths: usize, seed: u64) -> Result<Self> {
        Self::uniform(30.0, 0.5, n_paths, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dates.first() != Some(&0.0) {
            return Err(domain("stopping dates must start at 0"));
        }
        if self.dates.windows(2).any(|w| w[1] <= w[0]) {
            return Err(domain("stopping dates must be strictly increasing"));
        }
        if self.n_paths < 2 {
            return Err(domain("at least two paths are required"));
        }
        Ok(())
    }

    pub fn n_dates(&self) -> usize {
        self.dates.len()
    }
}

/// Simulated states, deflators and the per-date affine curve coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct PathGrid {
    params: ModelParams,
    grid: SimGrid,
    /// `n_paths * n_dates`, path-major.
    states: Vec<f64>,
    deflators: Vec<f64>,
    /// Per date: `(ln A, B)` for each pillar tenor, plus the short-rate shift.
    coefficients: Vec<DateCoefficients>,
}

#[derive(Debug, Clone, PartialEq)]
struct DateCoefficients {
    shift: f64,
    pillars: [(f64, f64); N_TENORS],
}

impl PathGrid {
    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &SimGrid {
        &self.grid
    }

    pub fn dates(&self) -> &[f64] {
        &self.grid.dates
    }

    pub fn n_paths(&self) -> usize {
        self.grid.n_paths
    }

    pub fn n_dates(&self) -> usize {
        self.grid.dates.len()
    }

    pub fn state(&self, path: usize, date_index: usize) -> f64 {
        self.states[path * self.n_dates() + date_index]
    }

    pub fn states(&self) -> &[f64] {
        &self.states
    }

    /// Short rate `x + phi(t)` on a path at a stopping date.
    pub fn short_rate(&self, path: usize, date_index: usize) -> f64 {
        self.state(path, date_index) + self.coefficients[date_index].shift
    }

    /// Trapezoidal `exp(-int_0^t r)` on a path at a stopping date.
    pub fn deflator(&self, path: usize, date_index: usize) -> f64 {
        self.deflators[path * self.n_dates() + date_index]
    }

    fn check(&self, path: usize, date_index: usize) -> Result<()> {
        if path >= self.n_paths() || date_index >= self.n_dates() {
            return Err(domain(format!(
                "index (path {path}, date {date_index}) outside {}x{} grid",
                self.n_paths(),
                self.n_dates()
            )));
        }
        Ok(())
    }

    /// Zero curve seen on `path` at stopping date `date_index`, anchored at that date.
    pub fn curve_at(&self, path: usize, date_index: usize) -> Result<ZeroCurve> {
        self.check(path, date_index)?;
        Ok(self.curve_unchecked(path, date_index))
    }

    pub(crate) fn curve_unchecked(&self, path: usize, date_index: usize) -> ZeroCurve {
        let x = self.state(path, date_index);
        let coeffs = &self.coefficients[date_index];
        let mut zeros = [0.0; N_TENORS];
        zeros[0] = x + coeffs.shift;
        for j in 1..N_TENORS {
            let (log_a, b) = coeffs.pillars[j];
            zeros[j] = (b * x - log_a) / TENORS[j];
        }
        ZeroCurve::from_parts(zeros, self.grid.dates[date_index])
    }
}

/// Samples the grid. Path `p` draws from its own PCG stream, so the result
/// does not depend on the number of worker threads.
pub fn simulate(params: &ModelParams, grid: &SimGrid) -> Result<PathGrid> {
    params.validate()?;
    grid.validate()?;
    let a = params.mean_reversion;
    let dates = &grid.dates;
    let n_dates = dates.len();

    let transitions: Vec<(f64, f64)> = dates
        .windows(2)
        .map(|w| {
            let dt = w[1] - w[0];
            let decay = (-a * dt).exp();
            let sd = params.vol * ((1.0 - (-2.0 * a * dt).exp()) / (2.0 * a)).sqrt();
            (decay, sd)
        })
        .collect();
    let coefficients: Vec<DateCoefficients> = dates
        .iter()
        .map(|&t| {
            let mut pillars = [(0.0, 0.0); N_TENORS];
            for (j, &tau) in TENORS.iter().enumerate().skip(1) {
                pillars[j] = params.affine_coefficients(t, t + tau);
            }
            DateCoefficients {
                shift: params.shift(t),
                pillars,
            }
        })
        .collect();

    let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..grid.n_paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = rng::stream(grid.seed, Domain::Paths, p as u64);
            let mut xs = Vec::with_capacity(n_dates);
            let mut ds = Vec::with_capacity(n_dates);
            let mut x = 0.0;
            let mut deflator = 1.0;
            xs.push(x);
            ds.push(deflator);
            for k in 1..n_dates {
                let (decay, sd) = transitions[k - 1];
                let z: f64 = StandardNormal.sample(&mut rng);
                let prev_rate = x + coefficients[k - 1].shift;
                x = x * decay + sd * z;
                let rate = x + coefficients[k].shift;
                deflator *= (-0.5 * (dates[k] - dates[k - 1]) * (prev_rate + rate)).exp();
                xs.push(x);
                ds.push(deflator);
            }
            (xs, ds)
        })
        .collect();

    let mut states = Vec::with_capacity(grid.n_paths * n_dates);
    let mut deflators = Vec::with_capacity(grid.n_paths * n_dates);
    for (xs, ds) in rows {
        states.extend(xs);
        deflators.extend(ds);
    }
    Ok(PathGrid {
        params: params.clone(),
        grid: grid.clone(),
        states,
        deflators,
        coefficients,
    })
}
