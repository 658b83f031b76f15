//! Brute-force reference: every trade is repriced under every VAR shock
//! on every path at every stopping date.
//!
//! The shock application and quantile reduction are the same code the
//! regression engine uses, so any difference between the two profiles is
//! regression error.

use std::io::Write;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instruments::Portfolio;
use crate::lsac::{self, BasisSpec, FullRevaluation, ImProfile};
use crate::market::{ShockSet, ZeroCurve};
use crate::quantile::ImMethod;
use crate::simulation::PathGrid;
use crate::xva::{self, XvaParams};

/// Default ceiling on `paths * dates * shocks * trades`.
pub const DEFAULT_BUDGET: f64 = 2e9;

/// Work estimate of a brute-force margin profile.
pub fn work_estimate(pg: &PathGrid, portfolio: &Portfolio, shocks: &ShockSet) -> f64 {
    pg.n_paths() as f64 * pg.n_dates() as f64 * shocks.len() as f64 * portfolio.len() as f64
}

/// Expected initial margin by full revaluation of every scenario.
pub fn brute_force_im_profile(
    pg: &PathGrid,
    portfolio: &Portfolio,
    shocks: &ShockSet,
    method: &ImMethod,
    budget: f64,
) -> Result<ImProfile> {
    let estimate = work_estimate(pg, portfolio, shocks);
    if estimate > budget {
        return Err(Error::BudgetExceeded { estimate, budget });
    }
    lsac::margin_profile(pg, shocks, method, || FullRevaluation {
        portfolio,
        dates: pg.dates(),
    })
}

/// Identifies the inputs a set of outputs was produced from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fingerprint {
    pub n_paths: usize,
    pub seed: u64,
    pub dates: Vec<f64>,
    pub n_shocks: usize,
    pub shock_provenance: String,
    pub n_trades: usize,
    pub gross_notional: f64,
    pub method: ImMethod,
}

impl Fingerprint {
    pub fn new(pg: &PathGrid, portfolio: &Portfolio, shocks: &ShockSet, method: &ImMethod) -> Self {
        Self {
            n_paths: pg.n_paths(),
            seed: pg.grid().seed,
            dates: pg.dates().to_vec(),
            n_shocks: shocks.len(),
            shock_provenance: shocks.provenance().to_string(),
            n_trades: portfolio.len(),
            gross_notional: portfolio.gross_notional(),
            method: *method,
        }
    }
}

/// Profiles and timing of one margin method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodOutputs {
    pub label: String,
    pub fingerprint: Fingerprint,
    /// Path-average portfolio value on the unshocked states.
    pub mean_values: Vec<f64>,
    pub im: ImProfile,
    /// MVA integrated up to each stopping date (signed).
    pub mva_to_date: Vec<f64>,
    pub mva: f64,
    pub seconds: f64,
}

fn cumulative_mva(im: &ImProfile, params: &XvaParams, curve: &ZeroCurve) -> Result<Vec<f64>> {
    (1..=im.dates.len())
        .map(|k| {
            let head = ImProfile {
                dates: im.dates[..k].to_vec(),
                expected: im.expected[..k].to_vec(),
                per_path: Vec::new(),
            };
            xva::compute_mva(&head, params, curve)
        })
        .collect()
}

fn finish(
    label: &str,
    fingerprint: Fingerprint,
    mean_values: Vec<f64>,
    im: ImProfile,
    seconds: f64,
    params: &XvaParams,
    curve: &ZeroCurve,
) -> Result<MethodOutputs> {
    let mva_to_date = cumulative_mva(&im, params, curve)?;
    Ok(MethodOutputs {
        label: label.to_string(),
        fingerprint,
        mean_values,
        mva: *mva_to_date.last().unwrap_or(&0.0),
        mva_to_date,
        im,
        seconds: seconds.max(1e-9),
    })
}

/// Fits the regressions and computes the margin profile; `seconds` covers both.
#[allow(clippy::too_many_arguments)]
pub fn lsac_outputs(
    pg: &PathGrid,
    portfolio: &Portfolio,
    shocks: &ShockSet,
    spec: &BasisSpec,
    method: &ImMethod,
    params: &XvaParams,
    curve: &ZeroCurve,
) -> Result<MethodOutputs> {
    let start = Instant::now();
    let rs = lsac::fit_regressions(pg, portfolio, shocks, spec)?;
    let im = lsac::im_profile(&rs, pg, shocks, method)?;
    let seconds = start.elapsed().as_secs_f64();
    let mean_values = lsac::regression_mean_values(&rs, pg)?;
    finish(
        "lsac",
        Fingerprint::new(pg, portfolio, shocks, method),
        mean_values,
        im,
        seconds,
        params,
        curve,
    )
}

/// Brute-force margin profile; `seconds` covers the profile only.
pub fn oracle_outputs(
    pg: &PathGrid,
    portfolio: &Portfolio,
    shocks: &ShockSet,
    method: &ImMethod,
    params: &XvaParams,
    curve: &ZeroCurve,
    budget: f64,
) -> Result<MethodOutputs> {
    let start = Instant::now();
    let im = brute_force_im_profile(pg, portfolio, shocks, method, budget)?;
    let seconds = start.elapsed().as_secs_f64();
    let mean_values = lsac::full_mean_values(pg, portfolio);
    finish(
        "brute_force",
        Fingerprint::new(pg, portfolio, shocks, method),
        mean_values,
        im,
        seconds,
        params,
        curve,
    )
}

/// Datewise and aggregate LSAC-vs-brute-force errors, bps of gross notional.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub dates: Vec<f64>,
    pub gross_notional: f64,
    pub mean_value_error_bps: Vec<f64>,
    pub im_error_bps: Vec<f64>,
    pub funding_cost_error_bps: Vec<f64>,
    pub max_mean_value_error_bps: f64,
    pub max_im_error_bps: f64,
    pub mva_error_bps: f64,
    pub lsac_seconds: f64,
    pub oracle_seconds: f64,
    pub speedup: f64,
}

fn bps_diff(a: &[f64], b: &[f64], gross: f64) -> Vec<f64> {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| if gross > 0.0 { 1e4 * (x - y).abs() / gross } else { 0.0 })
        .collect()
}

fn max_of(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, &x| m.max(x))
}

pub fn compare(lsac: &MethodOutputs, oracle: &MethodOutputs) -> Result<OracleReport> {
    if lsac.fingerprint != oracle.fingerprint {
        return Err(Error::Mismatch(format!(
            "outputs come from different inputs: {:?} vs {:?}",
            lsac.fingerprint, oracle.fingerprint
        )));
    }
    let gross = lsac.fingerprint.gross_notional;
    let mean_value_error_bps = bps_diff(&lsac.mean_values, &oracle.mean_values, gross);
    let im_error_bps = bps_diff(&lsac.im.expected, &oracle.im.expected, gross);
    let funding_cost_error_bps = bps_diff(&lsac.mva_to_date, &oracle.mva_to_date, gross);
    Ok(OracleReport {
        dates: lsac.fingerprint.dates.clone(),
        gross_notional: gross,
        max_mean_value_error_bps: max_of(&mean_value_error_bps),
        max_im_error_bps: max_of(&im_error_bps),
        mva_error_bps: bps_diff(&[lsac.mva], &[oracle.mva], gross)[0],
        mean_value_error_bps,
        im_error_bps,
        funding_cost_error_bps,
        lsac_seconds: lsac.seconds,
        oracle_seconds: oracle.seconds,
        speedup: oracle.seconds / lsac.seconds,
    })
}

impl OracleReport {
    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    /// One row per date: `date,mean_value_error_bps,im_error_bps,funding_cost_error_bps`.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "date,mean_value_error_bps,im_error_bps,funding_cost_error_bps")?;
        for k in 0..self.dates.len() {
            writeln!(
                out,
                "{},{},{},{}",
                self.dates[k], self.mean_value_error_bps[k], self.im_error_bps[k], self.funding_cost_error_bps[k]
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instruments::{generate_portfolio, PortfolioRecipe, Swap};
    use crate::market::synth_shock_set;
    use crate::simulation::{simulate, ModelParams, SimGrid};

    fn setup(n_paths: usize) -> (PathGrid, ShockSet, BasisSpec) {
        let params = ModelParams::default();
        let pg = simulate(&params, &SimGrid::uniform(30.0, 3.0, n_paths, 17).unwrap()).unwrap();
        let shocks = synth_shock_set(2, 25, 0.3).unwrap();
        let spec = BasisSpec::new(5, &params.base_curve).unwrap();
        (pg, shocks, spec)
    }

    #[test]
    fn spanned_portfolio_matches_lsac() {
        let (pg, shocks, spec) = setup(40);
        let book = Portfolio::new(vec![
            Swap::new(1e8, spec.strikes[1], 1.0, spec.end_dates[1], true).unwrap(),
            Swap::new(6e7, spec.strikes[4], 1.0, spec.end_dates[4], false).unwrap(),
        ])
        .unwrap();
        let method = ImMethod::var(0.9).unwrap();
        let rs = lsac::fit_regressions(&pg, &book, &shocks, &spec).unwrap();
        let fast = lsac::im_profile(&rs, &pg, &shocks, &method).unwrap();
        let slow = brute_force_im_profile(&pg, &book, &shocks, &method, DEFAULT_BUDGET).unwrap();
        for (a, b) in fast.expected.iter().zip(slow.expected.iter()) {
            assert!((a - b).abs() <= 1e-9 * b.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn zero_shocks_zero_profile() {
        let (pg, _, _) = setup(10);
        let book = generate_portfolio(&PortfolioRecipe::new(10, 0.9, 1)).unwrap();
        let profile = brute_force_im_profile(&pg, &book, &ShockSet::zeros(5).unwrap(), &ImMethod::default(), DEFAULT_BUDGET).unwrap();
        assert!(profile.expected.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn budget_guard_refuses_with_estimate() {
        let (pg, shocks, _) = setup(10);
        let book = generate_portfolio(&PortfolioRecipe::new(10, 0.9, 1)).unwrap();
        let err = brute_force_im_profile(&pg, &book, &shocks, &ImMethod::default(), 100.0).unwrap_err();
        match err {
            Error::BudgetExceeded { estimate, budget } => {
                assert_eq!(estimate, 10.0 * 11.0 * 25.0 * 10.0);
                assert_eq!(budget, 100.0);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn self_comparison_is_exact_and_mismatch_detected() {
        let (pg, shocks, spec) = setup(24);
        let book = generate_portfolio(&PortfolioRecipe::new(15, 0.9, 1)).unwrap();
        let params = XvaParams::default();
        let curve = pg.params().base_curve.clone();
        let method = ImMethod::default();
        let out = oracle_outputs(&pg, &book, &shocks, &method, &params, &curve, DEFAULT_BUDGET).unwrap();
        let report = compare(&out, &out).unwrap();
        assert!(report.im_error_bps.iter().all(|&e| e == 0.0));
        assert!(report.mean_value_error_bps.iter().all(|&e| e == 0.0));
        assert_eq!(report.mva_error_bps, 0.0);
        assert!(report.oracle_seconds > 0.0);

        let fast = lsac_outputs(&pg, &book, &shocks, &spec, &method, &params, &curve).unwrap();
        let report = compare(&fast, &out).unwrap();
        assert!(report.im_error_bps.iter().all(|e| e.is_finite() && *e >= 0.0));
        assert!(report.lsac_seconds > 0.0);

        let other = oracle_outputs(&pg, &book.mirrored(), &synth_shock_set(9, 25, 0.3).unwrap(), &method, &params, &curve, DEFAULT_BUDGET).unwrap();
        assert!(matches!(compare(&fast, &other), Err(Error::Mismatch(_))));
    }

    #[test]
    fn profile_is_invariant_under_path_reordering() {
        let (pg, shocks, _) = setup(16);
        let book = generate_portfolio(&PortfolioRecipe::new(12, 0.7, 4)).unwrap();
        let profile = brute_force_im_profile(&pg, &book, &shocks, &ImMethod::default(), DEFAULT_BUDGET).unwrap();
        for (k, row) in profile.per_path.iter().enumerate() {
            let mut reversed = row.clone();
            reversed.reverse();
            let mean = reversed.iter().sum::<f64>() / reversed.len() as f64;
            assert!((mean - profile.expected[k]).abs() <= 1e-12 * profile.expected[k].abs().max(1.0));
        }
    }
}
