//! `mva`: portfolio and shock generation, MVA runs, brute-force comparison,
//! benchmarks and the state-space diagnostic.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mva_core::instruments::{generate_portfolio, PortfolioRecipe};
use mva_core::pipeline::{self, BenchOptions, OuParams, RunConfig, ShockSource};
use mva_core::quantile::ImKind;
use mva_core::simulation::SimGrid;
use mva_core::Error;

#[derive(Parser)]
#[command(name = "mva", version, about = "Margin valuation adjustment for swap portfolios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a randomized swap portfolio as JSON.
    GenPortfolio {
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 0.9)]
        p_payer: f64,
        /// Strike offset; 1.455 balances positive and negative exposure.
        #[arg(long, default_value_t = 1.0)]
        y: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a shock set CSV, synthetic or from a yield history.
    GenShocks {
        /// `synth:SEED:COUNT`, or a yield history CSV.
        #[arg(long)]
        source: String,
        #[arg(long, default_value_t = 0.3)]
        max_rel: f64,
        #[arg(long, default_value_t = 10)]
        horizon_days: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Full MVA run; writes xva.json, im_profile.csv, exposure.csv, regressions.json.
    Run(Common),
    /// Compare LSAC margin profiles with full revaluation.
    OracleCompare(Common),
    /// Time LSAC and brute force across portfolio sizes.
    Bench {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "50,100,1000")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
    /// 1%/99% bands of a mean-reverting process, plain and shocked.
    StateSpace {
        #[arg(long, default_value_t = 1024)]
        paths: usize,
        #[arg(long, default_value_t = 0.3)]
        shock: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1.0)]
        x0: f64,
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        #[arg(long, default_value_t = 0.25)]
        eta: f64,
        #[arg(long, default_value_t = 0.3)]
        sigma: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Var,
    Es,
}

#[derive(Args)]
struct Common {
    /// TOML run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Path simulation seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    paths: Option<usize>,
    #[arg(long)]
    basis_m: Option<usize>,
    /// Shock CSV or `synth:SEED:COUNT`.
    #[arg(long)]
    shocks: Option<String>,
    #[arg(long, value_enum)]
    im_method: Option<MethodArg>,
    #[arg(long)]
    confidence: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn config(&self) -> Result<RunConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.grid.seed = seed;
        }
        if let Some(paths) = self.paths {
            cfg.grid.paths = paths;
        }
        if let Some(m) = self.basis_m {
            cfg.basis_m = m;
        }
        if let Some(flag) = &self.shocks {
            let parsed = ShockSource::from_flag(flag)?;
            cfg.shocks = ShockSource {
                max_rel: cfg.shocks.max_rel,
                horizon_days: cfg.shocks.horizon_days,
                ..parsed
            };
        }
        if let Some(kind) = self.im_method {
            cfg.im.kind = match kind {
                MethodArg::Var => ImKind::Var,
                MethodArg::Es => ImKind::Es,
            };
        }
        if let Some(c) = self.confidence {
            cfg.im.confidence = c;
        }
        if let Some(out) = &self.out {
            cfg.out = out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn install_threads(&self) -> Result<(), Error> {
        if let Some(n) = self.threads {
            if n == 0 {
                return Err(Error::Config("--threads must be at least 1".into()));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }
}

fn execute(command: Command) -> Result<(), Error> {
    match command {
        Command::GenPortfolio {
            n,
            p_payer,
            y,
            seed,
            out,
        } => {
            let recipe = PortfolioRecipe {
                y,
                ..PortfolioRecipe::new(n, p_payer, seed)
            };
            let book = generate_portfolio(&recipe).map_err(as_config)?;
            book.write_json(&out)?;
            println!("{} swaps, gross notional {:.0} -> {}", book.len(), book.gross_notional(), out.display());
        }
        Command::GenShocks {
            source,
            max_rel,
            horizon_days,
            out,
        } => {
            let parsed = ShockSource::from_flag(&source)?;
            let source = match parsed.file {
                Some(history) => ShockSource {
                    history: Some(history),
                    file: None,
                    ..parsed
                },
                None => parsed,
            };
            let shocks = ShockSource {
                max_rel,
                horizon_days,
                ..source
            }
            .load()
            .map_err(as_config)?;
            shocks.write_csv(&out)?;
            println!("{} shocks, max |s| {:.4} -> {}", shocks.len(), shocks.max_abs(), out.display());
        }
        Command::Run(common) => {
            let cfg = common.config()?;
            common.install_threads()?;
            let outputs = pipeline::run(&cfg)?;
            let x = &outputs.xva;
            println!("gross notional {:.0}", x.gross_notional);
            println!(
                "bps  CVA {:.3}  DVA {:.3}  FCA {:.3}  FVA {:.3}  COLVA {:.3}  MVA {:.3}  KVA {:.3}",
                x.cva_bps, x.dva_bps, x.fca_bps, x.fva_bps, x.colva_bps, x.mva_bps, x.kva
            );
            println!(
                "max regression error {:.4} bps; outputs in {}",
                outputs.regressions.max_error_bps(),
                cfg.out.display()
            );
        }
        Command::OracleCompare(common) => {
            let cfg = common.config()?;
            common.install_threads()?;
            let r = pipeline::oracle_compare(&cfg)?;
            println!(
                "max IM error {:.4} bps, MVA error {:.4} bps, max mean-value error {:.4} bps",
                r.max_im_error_bps, r.mva_error_bps, r.max_mean_value_error_bps
            );
            println!(
                "LSAC {:.2}s, brute force {:.2}s, speedup {:.1}x; report in {}",
                r.lsac_seconds,
                r.oracle_seconds,
                r.speedup,
                cfg.out.display()
            );
        }
        Command::Bench {
            common,
            sizes,
            repeats,
        } => {
            let cfg = common.config()?;
            common.install_threads()?;
            let table = pipeline::bench(&cfg, &BenchOptions { sizes, repeats })?;
            std::fs::create_dir_all(&cfg.out)?;
            let path = cfg.out.join("bench.csv");
            table.write_csv(&path)?;
            for r in &table.rows {
                match (r.oracle_seconds, r.speedup) {
                    (Some(o), Some(s)) => println!(
                        "n={:>6}  LSAC {:.3}s (fit {:.3}s, eval {:.3}s)  brute force {o:.3}s  speedup {s:.1}x",
                        r.n, r.lsac_seconds, r.lsac_fit_seconds, r.lsac_eval_seconds
                    ),
                    _ => println!(
                        "n={:>6}  LSAC {:.3}s (fit {:.3}s, eval {:.3}s)  brute force skipped: over budget",
                        r.n, r.lsac_seconds, r.lsac_fit_seconds, r.lsac_eval_seconds
                    ),
                }
            }
            if table.eval_time_flagged {
                println!("warning: evaluation time varies {:.2}x across sizes", table.eval_time_ratio);
            }
            println!("table in {}", path.display());
        }
        Command::StateSpace {
            paths,
            shock,
            seed,
            x0,
            mu,
            eta,
            sigma,
            out,
        } => {
            let ou = OuParams { x0, mu, eta, sigma };
            let grid = SimGrid::standard(paths.max(2), seed).map_err(as_config)?;
            let rows = pipeline::state_space_report(&ou, paths, shock, &grid)?;
            pipeline::write_bands_csv(&rows, &out)?;
            println!("{} dates -> {}", rows.len(), out.display());
        }
    }
    Ok(())
}

fn as_config(e: Error) -> Error {
    match e {
        Error::Domain(msg) | Error::Parse(msg) => Error::Config(msg),
        other => other,
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BudgetExceeded { .. } => 3,
        Error::Config(_) | Error::Domain(_) | Error::Parse(_) | Error::Mismatch(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

