//! Longstaff-Schwartz Augmented Compression.
//!
//! At every stopping date the whole portfolio is replaced by one linear
//! regression on a fixed basis of swaps and annuities. The training set at
//! date `k` holds one state per path: the simulated curve with a single
//! VAR shock applied (path `p` takes shock `p mod S`). Because the shocked
//! states span the region that the VAR scenarios visit, initial margin can
//! then be computed by evaluating the regression at every shocked curve,
//! at a cost that does not depend on the number of trades.

mod basis;
pub mod regression;

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use basis::{basis_values, basis_values_into, BasisSpec};

use crate::error::{domain, Error, Result};
use crate::instruments::{price_portfolio, Portfolio};
use crate::market::{ShockSet, ZeroCurve};
use crate::quantile::{self, ImMethod};
use crate::simulation::PathGrid;

/// Regression at one stopping date and its in-sample fit quality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DateModel {
    pub date: f64,
    pub coefficients: Vec<f64>,
    /// Mean absolute residual against full revaluation, bps of gross notional.
    pub mean_abs_error_bps: f64,
    /// Maximum absolute residual against full revaluation, bps of gross notional.
    pub max_abs_error_bps: f64,
    pub rank: usize,
    pub rank_deficient: bool,
}

/// Compressed portfolio valuator: one [`DateModel`] per stopping date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionSet {
    pub spec: BasisSpec,
    pub gross_notional: f64,
    pub models: Vec<DateModel>,
}

impl RegressionSet {
    pub fn n_dates(&self) -> usize {
        self.models.len()
    }

    pub fn dates(&self) -> Vec<f64> {
        self.models.iter().map(|m| m.date).collect()
    }

    /// Largest in-sample residual over all dates, bps of gross notional.
    pub fn max_error_bps(&self) -> f64 {
        self.models.iter().fold(0.0, |m, d| m.max(d.max_abs_error_bps))
    }

    /// Date-average of the mean absolute residuals, bps of gross notional.
    pub fn mean_error_bps(&self) -> f64 {
        self.models.iter().map(|d| d.mean_abs_error_bps).sum::<f64>() / self.models.len().max(1) as f64
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    fn check_grid(&self, pg: &PathGrid) -> Result<()> {
        if self.dates() != pg.dates() {
            return Err(Error::Mismatch("regression dates differ from the path grid".into()));
        }
        Ok(())
    }
}

/// Index of the shock paired with `path` in the training set.
pub fn shock_index(path: usize, n_shocks: usize) -> usize {
    path % n_shocks
}

/// The augmented training state of `path` at `date_index`.
pub fn training_curve(pg: &PathGrid, shocks: &ShockSet, path: usize, date_index: usize) -> Result<ZeroCurve> {
    let curve = pg.curve_at(path, date_index)?;
    Ok(curve.apply_shock(&shocks.shocks()[shock_index(path, shocks.len())]))
}

fn to_bps(value: f64, gross_notional: f64) -> f64 {
    if gross_notional > 0.0 {
        1e4 * value / gross_notional
    } else {
        0.0
    }
}

/// Fits the regression for one stopping date.
pub fn fit_date(
    pg: &PathGrid,
    portfolio: &Portfolio,
    shocks: &ShockSet,
    spec: &BasisSpec,
    date_index: usize,
) -> Result<DateModel> {
    let n_paths = pg.n_paths();
    let size = spec.size();
    if n_paths < size {
        return Err(domain(format!(
            "{n_paths} paths cannot determine {size} basis coefficients"
        )));
    }
    if date_index >= pg.n_dates() {
        return Err(domain(format!("date index {date_index} out of range")));
    }
    let t = pg.dates()[date_index];
    let mut design = DMatrix::zeros(n_paths, size);
    let mut target = DVector::zeros(n_paths);
    let mut row = vec![0.0; size];
    let mut scratch = Vec::new();
    for p in 0..n_paths {
        let shock = &shocks.shocks()[shock_index(p, shocks.len())];
        let curve = pg.curve_unchecked(p, date_index).apply_shock(shock);
        target[p] = price_portfolio(&curve, t, portfolio);
        basis_values_into(&curve, t, spec, &mut row, &mut scratch);
        for (j, v) in row.iter().enumerate() {
            design[(p, j)] = *v;
        }
    }

    let ls = regression::solve(&design, &target);
    if ls.is_rank_deficient() {
        log::warn!(
            "regression at t={t} is rank deficient ({} of {} columns); using minimum-norm solution",
            ls.rank,
            ls.active_columns
        );
    }
    let fitted = &design * DVector::from_column_slice(&ls.coefficients);
    let gross = portfolio.gross_notional();
    let (sum, max) = fitted
        .iter()
        .zip(target.iter())
        .map(|(f, y)| (f - y).abs())
        .fold((0.0, 0.0_f64), |(s, m), e| (s + e, m.max(e)));
    Ok(DateModel {
        date: t,
        rank_deficient: ls.is_rank_deficient(),
        rank: ls.rank,
        coefficients: ls.coefficients,
        mean_abs_error_bps: to_bps(sum / n_paths as f64, gross),
        max_abs_error_bps: to_bps(max, gross),
    })
}

/// Fits every stopping date independently (in parallel).
pub fn fit_regressions(
    pg: &PathGrid,
    portfolio: &Portfolio,
    shocks: &ShockSet,
    spec: &BasisSpec,
) -> Result<RegressionSet> {
    let models = (0..pg.n_dates())
        .into_par_iter()
        .map(|k| fit_date(pg, portfolio, shocks, spec, k))
        .collect::<Result<Vec<_>>>()?;
    Ok(RegressionSet {
        spec: spec.clone(),
        gross_notional: portfolio.gross_notional(),
        models,
    })
}

/// Portfolio value on `curve` at stopping date `date_index` from the regression.
pub fn eval_portfolio(rs: &RegressionSet, date_index: usize, curve: &ZeroCurve) -> Result<f64> {
    if date_index >= rs.n_dates() {
        return Err(domain(format!("date index {date_index} out of range")));
    }
    Ok(RegressionValuator::new(rs).value(date_index, curve))
}

/// Prices a curve at a stopping date.
pub(crate) trait Valuator {
    fn value(&mut self, date_index: usize, curve: &ZeroCurve) -> f64;
}

pub(crate) struct RegressionValuator<'a> {
    rs: &'a RegressionSet,
    row: Vec<f64>,
    scratch: Vec<(f64, f64)>,
}

impl<'a> RegressionValuator<'a> {
    pub(crate) fn new(rs: &'a RegressionSet) -> Self {
        Self {
            rs,
            row: vec![0.0; rs.spec.size()],
            scratch: Vec::new(),
        }
    }
}

impl Valuator for RegressionValuator<'_> {
    fn value(&mut self, date_index: usize, curve: &ZeroCurve) -> f64 {
        let model = &self.rs.models[date_index];
        basis_values_into(curve, model.date, &self.rs.spec, &mut self.row, &mut self.scratch);
        self.row
            .iter()
            .zip(model.coefficients.iter())
            .map(|(x, b)| x * b)
            .sum()
    }
}

pub(crate) struct FullRevaluation<'a> {
    pub portfolio: &'a Portfolio,
    pub dates: &'a [f64],
}

impl Valuator for FullRevaluation<'_> {
    fn value(&mut self, date_index: usize, curve: &ZeroCurve) -> f64 {
        price_portfolio(curve, self.dates[date_index], self.portfolio)
    }
}

/// Margin on one state: losses `base - value(shocked)` over every shock,
/// reduced by the order-statistic rule of `method`.
pub(crate) fn shocked_margin(
    curve: &ZeroCurve,
    shocks: &ShockSet,
    method: &ImMethod,
    losses: &mut Vec<f64>,
    mut value: impl FnMut(&ZeroCurve) -> f64,
) -> f64 {
    let base = value(curve);
    losses.clear();
    losses.extend(shocks.shocks().iter().map(|s| base - value(&curve.apply_shock(s))));
    quantile::margin(losses, method)
}

fn check_shocks(shocks: &ShockSet) -> Result<()> {
    if shocks.len() < 2 {
        return Err(domain("initial margin needs at least two shocks"));
    }
    Ok(())
}

/// Initial margin on `path` at `date_index`, valuing every scenario with the regression.
pub fn compute_im(
    rs: &RegressionSet,
    pg: &PathGrid,
    shocks: &ShockSet,
    method: &ImMethod,
    path: usize,
    date_index: usize,
) -> Result<f64> {
    check_shocks(shocks)?;
    method.validate()?;
    rs.check_grid(pg)?;
    let curve = pg.curve_at(path, date_index)?;
    let mut valuator = RegressionValuator::new(rs);
    Ok(shocked_margin(&curve, shocks, method, &mut Vec::new(), |c| {
        valuator.value(date_index, c)
    }))
}

/// Expected initial margin per stopping date plus the per-path margins.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImProfile {
    pub dates: Vec<f64>,
    pub expected: Vec<f64>,
    /// `per_path[k][p]`: margin on path `p` at date `k`.
    pub per_path: Vec<Vec<f64>>,
}

impl ImProfile {
    pub fn zeros(dates: &[f64], n_paths: usize) -> Self {
        Self {
            dates: dates.to_vec(),
            expected: vec![0.0; dates.len()],
            per_path: vec![vec![0.0; n_paths]; dates.len()],
        }
    }
}

pub(crate) fn margin_profile<V, F>(
    pg: &PathGrid,
    shocks: &ShockSet,
    method: &ImMethod,
    valuator: F,
) -> Result<ImProfile>
where
    V: Valuator,
    F: Fn() -> V + Sync,
{
    check_shocks(shocks)?;
    method.validate()?;
    let per_path: Vec<Vec<f64>> = (0..pg.n_dates())
        .into_par_iter()
        .map(|k| {
            let mut v = valuator();
            let mut losses = Vec::with_capacity(shocks.len());
            (0..pg.n_paths())
                .map(|p| {
                    let curve = pg.curve_unchecked(p, k);
                    shocked_margin(&curve, shocks, method, &mut losses, |c| v.value(k, c))
                })
                .collect()
        })
        .collect();
    let expected = per_path.iter().map(|row| mean(row)).collect();
    Ok(ImProfile {
        dates: pg.dates().to_vec(),
        expected,
        per_path,
    })
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Expected initial margin profile from the regressions.
pub fn im_profile(rs: &RegressionSet, pg: &PathGrid, shocks: &ShockSet, method: &ImMethod) -> Result<ImProfile> {
    rs.check_grid(pg)?;
    margin_profile(pg, shocks, method, || RegressionValuator::new(rs))
}

/// Path-average portfolio value per date on the unshocked states.
pub(crate) fn mean_value_profile<V, F>(pg: &PathGrid, valuator: F) -> Vec<f64>
where
    V: Valuator,
    F: Fn() -> V + Sync,
{
    (0..pg.n_dates())
        .into_par_iter()
        .map(|k| {
            let mut v = valuator();
            let values: Vec<f64> = (0..pg.n_paths()).map(|p| v.value(k, &pg.curve_unchecked(p, k))).collect();
            mean(&values)
        })
        .collect()
}

/// Mean regression value per date on the unshocked simulated states.
pub fn regression_mean_values(rs: &RegressionSet, pg: &PathGrid) -> Result<Vec<f64>> {
    rs.check_grid(pg)?;
    Ok(mean_value_profile(pg, || RegressionValuator::new(rs)))
}

/// Mean full-revaluation value per date on the unshocked simulated states.
pub fn full_mean_values(pg: &PathGrid, portfolio: &Portfolio) -> Vec<f64> {
    mean_value_profile(pg, || FullRevaluation {
        portfolio,
        dates: pg.dates(),
    })
}

/// Expected positive and negative exposure per stopping date.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExposureProfile {
    pub dates: Vec<f64>,
    pub epe: Vec<f64>,
    pub ene: Vec<f64>,
}

/// EPE and ENE by full revaluation of the unshocked states.
pub fn exposure_profiles(pg: &PathGrid, portfolio: &Portfolio) -> ExposureProfile {
    let rows: Vec<(f64, f64)> = (0..pg.n_dates())
        .into_par_iter()
        .map(|k| {
            let t = pg.dates()[k];
            let values: Vec<f64> = (0..pg.n_paths())
                .map(|p| price_portfolio(&pg.curve_unchecked(p, k), t, portfolio))
                .collect();
            let pos: Vec<f64> = values.iter().map(|v| v.max(0.0)).collect();
            let neg: Vec<f64> = values.iter().map(|v| v.min(0.0)).collect();
            (mean(&pos), mean(&neg))
        })
        .collect();
    ExposureProfile {
        dates: pg.dates().to_vec(),
        epe: rows.iter().map(|r| r.0).collect(),
        ene: rows.iter().map(|r| r.1).collect(),
    }
}
