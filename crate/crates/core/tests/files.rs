use chrono::{Days, NaiveDate};
use mva_core::instruments::{generate_portfolio, PortfolioRecipe};
use mva_core::market::{synth_shock_set, YieldHistory, ZeroCurve, N_TENORS};
use mva_core::pipeline::{self, GridConfig, ModelConfig, PortfolioSource, RunConfig, ShockSource};

fn history(days: u64) -> YieldHistory {
    let start = NaiveDate::from_ymd_opt(2012, 3, 1).unwrap();
    YieldHistory {
        observations: (0..days)
            .map(|i| {
                let wiggle = 0.002 * ((i as f64) * 0.37).sin();
                let mut row = [0.0; N_TENORS];
                for (j, y) in row.iter_mut().enumerate() {
                    *y = 0.01 + 0.001 * j as f64 + wiggle * (1.0 + 0.05 * j as f64);
                }
                (start + Days::new(i), row)
            })
            .collect(),
    }
}

fn grid() -> GridConfig {
    GridConfig {
        paths: 48,
        seed: 3,
        horizon: 30.0,
        step: 2.5,
    }
}

#[test]
fn run_from_files_matches_run_from_recipe() {
    let dir = tempfile::tempdir().unwrap();
    let recipe = PortfolioRecipe::new(25, 0.7, 6);
    let book_path = dir.path().join("book.json");
    generate_portfolio(&recipe).unwrap().write_json(&book_path).unwrap();
    let shocks_path = dir.path().join("shocks.csv");
    synth_shock_set(4, 50, 0.3).unwrap().write_csv(&shocks_path).unwrap();

    let from_recipe = RunConfig {
        portfolio: PortfolioSource {
            recipe: Some(recipe),
            file: None,
        },
        shocks: ShockSource::from_flag("synth:4:50").unwrap(),
        grid: grid(),
        basis_m: 6,
        out: dir.path().join("a"),
        ..RunConfig::default()
    };
    let from_files = RunConfig {
        portfolio: PortfolioSource {
            recipe: None,
            file: Some(book_path),
        },
        shocks: ShockSource::from_flag(shocks_path.to_str().unwrap()).unwrap(),
        out: dir.path().join("b"),
        ..from_recipe.clone()
    };
    let a = pipeline::run(&from_recipe).unwrap();
    let b = pipeline::run(&from_files).unwrap();
    assert_eq!(a.im.expected, b.im.expected);
    assert_eq!(a.xva.mva, b.xva.mva);
    assert_eq!(a.xva.fva, b.xva.fva);
}

#[test]
fn run_from_history_and_curve_file() {
    let dir = tempfile::tempdir().unwrap();
    let hist_path = dir.path().join("history.csv");
    history(120).write_csv(&hist_path).unwrap();
    let curve_path = dir.path().join("curve.csv");
    let mut zeros = [0.0; N_TENORS];
    for (j, z) in zeros.iter_mut().enumerate() {
        *z = 0.015 + 0.0008 * j as f64;
    }
    ZeroCurve::new(zeros, 0.0).unwrap().write_csv(&curve_path).unwrap();

    let cfg = RunConfig {
        portfolio: PortfolioSource {
            recipe: Some(PortfolioRecipe::new(20, 0.9, 2)),
            file: None,
        },
        shocks: ShockSource {
            history: Some(hist_path),
            synth: None,
            ..ShockSource::default()
        },
        model: ModelConfig {
            base_curve_file: Some(curve_path),
            ..ModelConfig::default()
        },
        grid: grid(),
        basis_m: 6,
        out: dir.path().join("out"),
        ..RunConfig::default()
    };
    let inputs = pipeline::Inputs::load(&cfg).unwrap();
    assert_eq!(inputs.shocks.len(), 110);
    assert_eq!(inputs.model.base_curve.zeros()[3], zeros[3]);
    let out = pipeline::run(&cfg).unwrap();
    assert!(out.xva.mva_bps > 0.0);
    assert!(out.im.expected.iter().all(|e| e.is_finite() && *e >= 0.0));
    let text = std::fs::read_to_string(dir.path().join("out").join(pipeline::EXPOSURE_FILE)).unwrap();
    assert_eq!(text.lines().next(), Some("date,epe,ene"));
}

#[test]
fn config_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.toml");
    let cfg = RunConfig {
        grid: grid(),
        ..RunConfig::default()
    };
    std::fs::write(&path, cfg.to_toml().unwrap()).unwrap();
    assert_eq!(RunConfig::from_file(&path).unwrap(), cfg);
    assert!(RunConfig::from_file(&dir.path().join("nope.toml")).is_err());
}
