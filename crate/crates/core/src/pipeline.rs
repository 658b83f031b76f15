//! End-to-end runs, benchmarks and the state-space diagnostic.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instruments::{generate_portfolio, Portfolio, PortfolioRecipe};
use crate::lsac::{self, BasisSpec, ExposureProfile, ImProfile, RegressionSet};
use crate::market::{self, ShockSet, YieldHistory, ZeroCurve};
use crate::oracle::{self, OracleReport};
use crate::quantile::{self, ImMethod};
use crate::rng::{self, Domain};
use crate::simulation::{self, ModelParams, PathGrid, SimGrid};
use crate::xva::{self, XvaParams, XvaResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PortfolioSource {
    pub recipe: Option<PortfolioRecipe>,
    /// Portfolio JSON file; takes precedence over `recipe` when both are set.
    pub file: Option<PathBuf>,
}

impl Default for PortfolioSource {
    fn default() -> Self {
        Self {
            recipe: Some(PortfolioRecipe::default()),
            file: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SynthShocks {
    pub seed: u64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ShockSource {
    pub file: Option<PathBuf>,
    pub history: Option<PathBuf>,
    pub synth: Option<SynthShocks>,
    /// Largest relative move of a synthetic set.
    pub max_rel: f64,
    /// Overlap horizon, in observations, for shocks built from a history file.
    pub horizon_days: usize,
}

impl Default for ShockSource {
    fn default() -> Self {
        Self {
            file: None,
            history: None,
            synth: Some(SynthShocks { seed: 1, count: 1294 }),
            max_rel: 0.3,
            horizon_days: 10,
        }
    }
}

impl ShockSource {
    /// Parses `PATH` or `synth:SEED:COUNT`.
    pub fn from_flag(flag: &str) -> Result<Self> {
        let base = Self {
            synth: None,
            ..Self::default()
        };
        if let Some(rest) = flag.strip_prefix("synth:") {
            let (seed, count) = rest
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("expected synth:SEED:COUNT, got `{flag}`")))?;
            let seed = seed.parse().map_err(|e| Error::Config(format!("shock seed `{seed}`: {e}")))?;
            let count = count.parse().map_err(|e| Error::Config(format!("shock count `{count}`: {e}")))?;
            Ok(Self {
                synth: Some(SynthShocks { seed, count }),
                ..base
            })
        } else {
            Ok(Self {
                file: Some(PathBuf::from(flag)),
                ..base
            })
        }
    }

    pub fn load(&self) -> Result<ShockSet> {
        match (&self.file, &self.history, &self.synth) {
            (Some(path), None, None) => ShockSet::read_csv(path),
            (None, Some(path), None) => {
                let history = YieldHistory::read_csv(path)?;
                let rows: Vec<_> = history.observations.iter().map(|(_, r)| *r).collect();
                market::shocks_from_history(&rows, self.horizon_days, path.display().to_string())
            }
            (None, None, Some(s)) => market::synth_shock_set(s.seed, s.count, self.max_rel),
            _ => Err(Error::Config(
                "exactly one of shocks.file, shocks.history, shocks.synth must be set".into(),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelConfig {
    pub mean_reversion: f64,
    pub vol: f64,
    /// Flat base curve level, used when no curve file is given.
    pub base_rate: f64,
    pub base_curve_file: Option<PathBuf>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            mean_reversion: ModelParams::DEFAULT_MEAN_REVERSION,
            vol: ModelParams::DEFAULT_VOL,
            base_rate: ModelParams::DEFAULT_BASE_RATE,
            base_curve_file: None,
        }
    }
}

impl ModelConfig {
    pub fn params(&self) -> Result<ModelParams> {
        let curve = match &self.base_curve_file {
            Some(path) => ZeroCurve::read_csv(path)?,
            None => ZeroCurve::flat(self.base_rate),
        };
        ModelParams::new(self.mean_reversion, self.vol, curve)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub paths: usize,
    pub seed: u64,
    pub horizon: f64,
    pub step: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            paths: SimGrid::DEFAULT_PATHS,
            seed: 1,
            horizon: 30.0,
            step: 0.5,
        }
    }
}

impl GridConfig {
    pub fn grid(&self) -> Result<SimGrid> {
        SimGrid::uniform(self.horizon, self.step, self.paths, self.seed)
    }
}

/// Everything a run needs. Loaded from TOML; command-line flags override fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub portfolio: PortfolioSource,
    pub shocks: ShockSource,
    pub model: ModelConfig,
    pub grid: GridConfig,
    pub basis_m: usize,
    pub im: ImMethod,
    pub xva: XvaParams,
    pub out: PathBuf,
    /// Ceiling on `paths * dates * shocks * trades` for brute-force runs.
    pub oracle_budget: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            portfolio: PortfolioSource::default(),
            shocks: ShockSource::default(),
            model: ModelConfig::default(),
            grid: GridConfig::default(),
            basis_m: 20,
            im: ImMethod::default(),
            xva: XvaParams::default(),
            out: PathBuf::from("out"),
            oracle_budget: oracle::DEFAULT_BUDGET,
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let sources = [
            self.shocks.file.is_some(),
            self.shocks.history.is_some(),
            self.shocks.synth.is_some(),
        ];
        if sources.iter().filter(|&&s| s).count() != 1 {
            return Err(Error::Config(
                "exactly one of shocks.file, shocks.history, shocks.synth must be set".into(),
            ));
        }
        let files = [
            self.portfolio.file.as_ref(),
            self.shocks.file.as_ref(),
            self.shocks.history.as_ref(),
            self.model.base_curve_file.as_ref(),
        ];
        for path in files.into_iter().flatten() {
            if !path.is_file() {
                return Err(Error::Config(format!("file {} does not exist", path.display())));
            }
        }
        if self.portfolio.file.is_none() && self.portfolio.recipe.is_none() {
            return Err(Error::Config("portfolio needs a recipe or a file".into()));
        }
        if self.basis_m == 0 {
            return Err(Error::Config("basis_m must be at least 1".into()));
        }
        self.im.validate().map_err(config)?;
        self.xva.validate().map_err(config)?;
        self.grid.grid().map_err(config)?;
        self.model.params().map_err(config)?;
        Ok(())
    }

    pub fn load_portfolio(&self) -> Result<Portfolio> {
        match (&self.portfolio.file, &self.portfolio.recipe) {
            (Some(path), _) => Portfolio::read_json(path),
            (None, Some(recipe)) if recipe.n == 0 => Ok(Portfolio::empty()),
            (None, Some(recipe)) => generate_portfolio(recipe),
            (None, None) => Err(Error::Config("portfolio needs a recipe or a file".into())),
        }
    }
}

fn config(e: Error) -> Error {
    match e {
        Error::Domain(msg) => Error::Config(msg),
        other => other,
    }
}

/// Loaded inputs shared by the run, compare and bench drivers.
pub struct Inputs {
    pub portfolio: Portfolio,
    pub shocks: ShockSet,
    pub model: ModelParams,
    pub paths: PathGrid,
    pub spec: BasisSpec,
}

impl Inputs {
    pub fn load(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let portfolio = config.load_portfolio()?;
        let shocks = config.shocks.load()?;
        let model = config.model.params()?;
        let paths = simulation::simulate(&model, &config.grid.grid()?)?;
        let spec = BasisSpec::new(config.basis_m, &model.base_curve)?;
        Ok(Self {
            portfolio,
            shocks,
            model,
            paths,
            spec,
        })
    }
}

/// Profiles and adjustments produced by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutputs {
    pub xva: XvaResult,
    pub im: ImProfile,
    pub exposure: ExposureProfile,
    pub regressions: RegressionSet,
}

pub const XVA_FILE: &str = "xva.json";
pub const IM_FILE: &str = "im_profile.csv";
pub const EXPOSURE_FILE: &str = "exposure.csv";
pub const REGRESSION_FILE: &str = "regressions.json";

/// Simulates, fits, computes margin and exposure profiles and all
/// adjustments, then writes them to `config.out`.
pub fn run(config: &RunConfig) -> Result<RunOutputs> {
    let inputs = Inputs::load(config)?;
    let outputs = compute(&inputs, config)?;
    write_outputs(&outputs, &config.out)?;
    Ok(outputs)
}

/// [`run`] without touching the filesystem.
pub fn compute(inputs: &Inputs, config: &RunConfig) -> Result<RunOutputs> {
    let regressions = lsac::fit_regressions(&inputs.paths, &inputs.portfolio, &inputs.shocks, &inputs.spec)?;
    let im = lsac::im_profile(&regressions, &inputs.paths, &inputs.shocks, &config.im)?;
    let exposure = lsac::exposure_profiles(&inputs.paths, &inputs.portfolio);
    let xva = xva::compute_xva(
        &exposure,
        &im,
        &config.xva,
        &inputs.model.base_curve,
        inputs.portfolio.gross_notional(),
    )?;
    Ok(RunOutputs {
        xva,
        im,
        exposure,
        regressions,
    })
}

pub fn write_outputs(outputs: &RunOutputs, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(XVA_FILE), serde_json::to_string_pretty(&outputs.xva)?)?;
    outputs.regressions.write_json(&dir.join(REGRESSION_FILE))?;

    let mut im = std::io::BufWriter::new(std::fs::File::create(dir.join(IM_FILE))?);
    writeln!(im, "date,expected_im")?;
    for (t, e) in outputs.im.dates.iter().zip(outputs.im.expected.iter()) {
        writeln!(im, "{t},{e}")?;
    }
    im.flush()?;

    let ex = &outputs.exposure;
    let mut out = std::io::BufWriter::new(std::fs::File::create(dir.join(EXPOSURE_FILE))?);
    writeln!(out, "date,epe,ene")?;
    for k in 0..ex.dates.len() {
        writeln!(out, "{},{},{}", ex.dates[k], ex.epe[k], ex.ene[k])?;
    }
    out.flush()?;
    Ok(())
}

/// Runs LSAC and the brute-force reference on the same inputs and compares them.
pub fn oracle_compare(config: &RunConfig) -> Result<OracleReport> {
    let inputs = Inputs::load(config)?;
    let curve = &inputs.model.base_curve;
    let estimate = oracle::work_estimate(&inputs.paths, &inputs.portfolio, &inputs.shocks);
    if estimate > config.oracle_budget {
        return Err(Error::BudgetExceeded {
            estimate,
            budget: config.oracle_budget,
        });
    }
    let fast = oracle::lsac_outputs(
        &inputs.paths,
        &inputs.portfolio,
        &inputs.shocks,
        &inputs.spec,
        &config.im,
        &config.xva,
        curve,
    )?;
    let slow = oracle::oracle_outputs(
        &inputs.paths,
        &inputs.portfolio,
        &inputs.shocks,
        &config.im,
        &config.xva,
        curve,
        config.oracle_budget,
    )?;
    let report = oracle::compare(&fast, &slow)?;
    std::fs::create_dir_all(&config.out)?;
    report.write_json(&config.out.join("oracle_report.json"))?;
    report.write_csv(&config.out.join("oracle_report.csv"))?;
    Ok(report)
}

/// One benchmark row; oracle fields are `None` when the size exceeds the budget.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub lsac_fit_seconds: f64,
    pub lsac_eval_seconds: f64,
    pub lsac_seconds: f64,
    pub oracle_seconds: Option<f64>,
    pub speedup: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
    /// Largest over smallest LSAC evaluation time.
    pub eval_time_ratio: f64,
    /// Evaluation time varied by more than 2x across sizes.
    pub eval_time_flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOptions {
    pub sizes: Vec<usize>,
    /// Evaluation timings keep the fastest of this many repeats.
    pub repeats: usize,
}

impl Default for BenchOptions {
    fn default() -> Self {
        Self {
            sizes: vec![50, 100, 1000],
            repeats: 3,
        }
    }
}

/// Times LSAC (fit and margin evaluation) and brute force per portfolio size.
/// Paths, shocks and the basis come from `config`; the recipe's `n` is
/// replaced by each size.
pub fn bench(config: &RunConfig, options: &BenchOptions) -> Result<BenchTable> {
    config.validate()?;
    if options.sizes.is_empty() {
        return Err(Error::Config("bench needs at least one size".into()));
    }
    let shocks = config.shocks.load()?;
    let model = config.model.params()?;
    let paths = simulation::simulate(&model, &config.grid.grid()?)?;
    let spec = BasisSpec::new(config.basis_m, &model.base_curve)?;
    let recipe = config.portfolio.recipe.clone().unwrap_or_default();

    let mut rows = Vec::with_capacity(options.sizes.len());
    for &n in &options.sizes {
        let portfolio = generate_portfolio(&PortfolioRecipe { n, ..recipe.clone() })?;

        let start = Instant::now();
        let rs = lsac::fit_regressions(&paths, &portfolio, &shocks, &spec)?;
        let fit = start.elapsed().as_secs_f64();
        let mut eval = f64::INFINITY;
        for _ in 0..options.repeats.max(1) {
            let start = Instant::now();
            let profile = lsac::im_profile(&rs, &paths, &shocks, &config.im)?;
            eval = eval.min(start.elapsed().as_secs_f64());
            std::hint::black_box(profile);
        }
        let lsac_seconds = fit + eval;

        let estimate = oracle::work_estimate(&paths, &portfolio, &shocks);
        let oracle_seconds = if estimate > config.oracle_budget {
            log::warn!(
                "skipping brute force for n={n}: work estimate {estimate:.3e} exceeds budget {:.3e}",
                config.oracle_budget
            );
            None
        } else {
            let start = Instant::now();
            let profile = oracle::brute_force_im_profile(&paths, &portfolio, &shocks, &config.im, config.oracle_budget)?;
            std::hint::black_box(profile);
            Some(start.elapsed().as_secs_f64())
        };
        rows.push(BenchRow {
            n,
            lsac_fit_seconds: fit,
            lsac_eval_seconds: eval,
            lsac_seconds,
            speedup: oracle_seconds.map(|o| o / lsac_seconds),
            oracle_seconds,
        });
    }
    let (lo, hi) = rows
        .iter()
        .fold((f64::INFINITY, 0.0_f64), |(lo, hi), r| (lo.min(r.lsac_eval_seconds), hi.max(r.lsac_eval_seconds)));
    let eval_time_ratio = hi / lo;
    if eval_time_ratio > 2.0 {
        log::warn!("LSAC evaluation time varies {eval_time_ratio:.2}x across sizes");
    }
    Ok(BenchTable {
        rows,
        eval_time_ratio,
        eval_time_flagged: eval_time_ratio > 2.0,
    })
}

impl BenchTable {
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(out, "n,lsac_fit_seconds,lsac_eval_seconds,lsac_seconds,oracle_seconds,speedup")?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.n,
                r.lsac_fit_seconds,
                r.lsac_eval_seconds,
                r.lsac_seconds,
                opt(r.oracle_seconds),
                opt(r.speedup)
            )?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Mean-reverting diagnostic process `dx = eta (mu - x) dt + sigma dW`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OuParams {
    pub x0: f64,
    pub mu: f64,
    pub eta: f64,
    pub sigma: f64,
}

impl Default for OuParams {
    fn default() -> Self {
        Self {
            x0: 1.0,
            mu: 1.0,
            eta: 0.25,
            sigma: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandRow {
    pub date: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_shocked: f64,
    pub upper_shocked: f64,
}

pub const BAND_LOWER: f64 = 0.01;
pub const BAND_UPPER: f64 = 0.99;

/// Cross-path 1%/99% bands of the diagnostic process per date, and the same
/// bands pushed outwards by a relative shift of `shock_magnitude`
/// (`upper * (1 + s)`, `lower * (1 - s)`).
pub fn state_space_report(
    ou: &OuParams,
    n_paths: usize,
    shock_magnitude: f64,
    grid: &SimGrid,
) -> Result<Vec<BandRow>> {
    if n_paths == 0 {
        return Err(Error::Config("state-space report needs at least one path".into()));
    }
    let dates = &grid.dates;
    let columns: Vec<Vec<f64>> = (0..n_paths)
        .into_par_iter()
        .map(|p| {
            let mut rng = rng::stream(grid.seed, Domain::StateSpace, p as u64);
            let mut x = ou.x0;
            let mut out = Vec::with_capacity(dates.len());
            out.push(x);
            for w in dates.windows(2) {
                let dt = w[1] - w[0];
                let decay = (-ou.eta * dt).exp();
                let sd = if ou.eta > 0.0 {
                    ou.sigma * ((1.0 - decay * decay) / (2.0 * ou.eta)).sqrt()
                } else {
                    ou.sigma * dt.sqrt()
                };
                let z: f64 = StandardNormal.sample(&mut rng);
                x = ou.mu + (x - ou.mu) * decay + sd * z;
                out.push(x);
            }
            out
        })
        .collect();
    let lower_rank = quantile::var_rank(BAND_LOWER, n_paths);
    let upper_rank = quantile::var_rank(BAND_UPPER, n_paths);
    Ok(dates
        .iter()
        .enumerate()
        .map(|(k, &date)| {
            let mut xs: Vec<f64> = columns.iter().map(|c| c[k]).collect();
            xs.sort_unstable_by(f64::total_cmp);
            let lower = xs[lower_rank - 1];
            let upper = xs[upper_rank - 1];
            BandRow {
                date,
                lower,
                upper,
                lower_shocked: lower * (1.0 - shock_magnitude),
                upper_shocked: upper * (1.0 + shock_magnitude),
            }
        })
        .collect())
}

pub fn write_bands_csv(rows: &[BandRow], path: &Path) -> Result<()> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(out, "date,lower_1pct,upper_99pct,lower_shocked,upper_shocked")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.date, r.lower, r.upper, r.lower_shocked, r.upper_shocked)?;
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_config(out: &Path) -> RunConfig {
        RunConfig {
            portfolio: PortfolioSource {
                recipe: Some(PortfolioRecipe::new(20, 0.9, 3)),
                file: None,
            },
            shocks: ShockSource {
                synth: Some(SynthShocks { seed: 2, count: 40 }),
                ..ShockSource::default()
            },
            grid: GridConfig {
                paths: 48,
                seed: 5,
                horizon: 30.0,
                step: 2.5,
            },
            basis_m: 5,
            out: out.to_path_buf(),
            ..RunConfig::default()
        }
    }

    #[test]
    fn default_config_round_trips_through_toml() {
        let cfg = RunConfig::default();
        let text = cfg.to_toml().unwrap();
        assert_eq!(RunConfig::from_toml_str(&text).unwrap(), cfg);
        assert_eq!(RunConfig::from_toml_str("").unwrap(), cfg);
        assert!(RunConfig::from_toml_str("basis_m = 'x'").is_err());
        assert!(RunConfig::from_toml_str("unknown_key = 1").is_err());
    }

    #[test]
    fn partial_toml_keeps_defaults() {
        let cfg = RunConfig::from_toml_str(
            r#"
            basis_m = 7
            [grid]
            paths = 256
            [im]
            kind = "es"
            confidence = 0.975
            "#,
        )
        .unwrap();
        assert_eq!(cfg.basis_m, 7);
        assert_eq!(cfg.grid.paths, 256);
        assert_eq!(cfg.grid.step, 0.5);
        assert_eq!(cfg.im, ImMethod::es(0.975).unwrap());
        assert_eq!(cfg.xva, XvaParams::default());
    }

    #[test]
    fn shock_source_validation() {
        let dir = tempfile::tempdir().unwrap();
        let mut cfg = small_config(dir.path());
        cfg.shocks.file = Some(dir.path().join("missing.csv"));
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
        cfg.shocks.synth = None;
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));

        let flag = ShockSource::from_flag("synth:4:100").unwrap();
        assert_eq!(flag.synth, Some(SynthShocks { seed: 4, count: 100 }));
        assert!(ShockSource::from_flag("synth:4").is_err());
        assert_eq!(ShockSource::from_flag("a.csv").unwrap().file, Some(PathBuf::from("a.csv")));
    }

    #[test]
    fn history_shock_source() {
        let dir = tempfile::tempdir().unwrap();
        let history = YieldHistory {
            observations: (0..30)
                .map(|i| {
                    let d = chrono::NaiveDate::from_ymd_opt(2010, 1, 1).unwrap() + chrono::Days::new(i);
                    (d, [0.02 + 0.0002 * (i as f64).sin(); market::N_TENORS])
                })
                .collect(),
        };
        let path = dir.path().join("hist.csv");
        history.write_csv(&path).unwrap();
        let source = ShockSource {
            history: Some(path),
            synth: None,
            ..ShockSource::default()
        };
        assert_eq!(source.load().unwrap().len(), 20);
    }

    #[test]
    fn run_writes_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config(dir.path());
        let out = run(&cfg).unwrap();
        for f in [XVA_FILE, IM_FILE, EXPOSURE_FILE, REGRESSION_FILE] {
            assert!(dir.path().join(f).is_file(), "{f}");
        }
        assert!(out.xva.mva_bps > 0.0);
        assert_eq!(out.xva.cva, 0.0);
        let im = std::fs::read_to_string(dir.path().join(IM_FILE)).unwrap();
        assert_eq!(im.lines().count(), 14);
    }

    #[test]
    fn portfolio_file_source() {
        let dir = tempfile::tempdir().unwrap();
        let book = generate_portfolio(&PortfolioRecipe::new(6, 0.2, 8)).unwrap();
        let path = dir.path().join("book.json");
        book.write_json(&path).unwrap();
        let mut cfg = small_config(dir.path());
        cfg.portfolio.file = Some(path);
        assert_eq!(cfg.load_portfolio().unwrap(), book);
    }

    #[test]
    fn bands() {
        let grid = SimGrid::uniform(30.0, 0.5, 2, 1).unwrap();
        let rows = state_space_report(&OuParams::default(), 1024, 0.3, &grid).unwrap();
        assert_eq!(rows.len(), 61);
        assert!(rows.iter().all(|r| r.upper_shocked > r.upper && r.lower <= r.upper));
        assert!(rows.iter().filter(|r| r.lower > 0.0).all(|r| r.lower_shocked < r.lower));

        let still = OuParams {
            sigma: 0.0,
            ..OuParams::default()
        };
        let rows = state_space_report(&still, 64, 0.3, &grid).unwrap();
        assert!(rows.iter().all(|r| r.lower == r.upper));

        let rows = state_space_report(&OuParams::default(), 64, 0.0, &grid).unwrap();
        assert!(rows.iter().all(|r| r.lower_shocked == r.lower && r.upper_shocked == r.upper));
    }

    #[test]
    fn bench_single_size() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = small_config(dir.path());
        let table = bench(&cfg, &BenchOptions { sizes: vec![10], repeats: 1 }).unwrap();
        assert_eq!(table.rows.len(), 1);
        assert!(table.rows[0].oracle_seconds.is_some());
        assert_eq!(table.eval_time_ratio, 1.0);

        let tight = RunConfig {
            oracle_budget: 1.0,
            ..cfg
        };
        let table = bench(&tight, &BenchOptions { sizes: vec![10], repeats: 1 }).unwrap();
        assert!(table.rows[0].oracle_seconds.is_none());
    }
}
