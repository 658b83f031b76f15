//! Zero curves on the 18-pillar grid and relative VAR shocks.
//!
//! Yields are continuously compounded and linearly interpolated in `T`
//! between pillars, flat beyond the last pillar. A relative shock `s`
//! moves a pillar yield `r` to `r * (1 + s)`; the shocked pillar yields are
//! then interpolated with the same rule.

use std::io::{Read, Write};
use std::path::Path;

use chrono::NaiveDate;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::rng::{self, Domain};

pub const N_TENORS: usize = 18;

/// Pillar tenors in years.
pub const TENORS: [f64; N_TENORS] = [
    0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0, 11.0, 12.0, 15.0, 20.0, 25.0, 30.0,
];

/// Bound on the magnitude of any relative shock component.
pub const MAX_ABS_SHIFT: f64 = 5.0;

/// The fixed pillar grid shared by curves and shocks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TenorGrid;

impl TenorGrid {
    pub fn tenors(&self) -> &'static [f64; N_TENORS] {
        &TENORS
    }

    pub fn len(&self) -> usize {
        N_TENORS
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Column labels used by the shock and history CSV files.
    pub fn labels(&self) -> Vec<String> {
        TENORS.iter().map(|t| format!("tenor_{t}")).collect()
    }

    /// Checks that `tenors` is exactly this grid.
    pub fn check(&self, tenors: &[f64]) -> Result<()> {
        if tenors.len() != N_TENORS {
            return Err(domain(format!(
                "expected {N_TENORS} tenors, found {}",
                tenors.len()
            )));
        }
        for (got, want) in tenors.iter().zip(TENORS.iter()) {
            if (got - want).abs() > 1e-12 {
                return Err(domain(format!("tenor {got} does not match grid pillar {want}")));
            }
        }
        Ok(())
    }

    /// Index of the pillar segment containing `t`, i.e. the largest `j`
    /// with `TENORS[j] <= t`.
    #[inline]
    fn segment(t: f64) -> usize {
        TENORS.partition_point(|&p| p <= t).saturating_sub(1)
    }
}

/// Zero-yield curve observed at `anchor` (years from today).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroCurve {
    zeros: [f64; N_TENORS],
    anchor: f64,
}

impl ZeroCurve {
    pub fn new(zeros: [f64; N_TENORS], anchor: f64) -> Result<Self> {
        if let Some(z) = zeros.iter().find(|z| !z.is_finite()) {
            return Err(domain(format!("non-finite zero yield {z}")));
        }
        if !anchor.is_finite() || anchor < 0.0 {
            return Err(domain(format!("invalid curve anchor {anchor}")));
        }
        Ok(Self { zeros, anchor })
    }

    pub fn flat(rate: f64) -> Self {
        Self {
            zeros: [rate; N_TENORS],
            anchor: 0.0,
        }
    }

    pub(crate) fn from_parts(zeros: [f64; N_TENORS], anchor: f64) -> Self {
        debug_assert!(zeros.iter().all(|z| z.is_finite()));
        Self { zeros, anchor }
    }

    pub fn zeros(&self) -> &[f64; N_TENORS] {
        &self.zeros
    }

    pub fn anchor(&self) -> f64 {
        self.anchor
    }

    pub fn grid(&self) -> TenorGrid {
        TenorGrid
    }

    /// Interpolated zero yield for time-to-maturity `t`.
    pub fn zero_rate(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t < 0.0 {
            return Err(domain(format!("negative or NaN maturity {t}")));
        }
        Ok(self.rate(t))
    }

    /// `exp(-r(t) * t)`.
    pub fn discount_factor(&self, t: f64) -> Result<f64> {
        Ok((-self.zero_rate(t)? * t).exp())
    }

    #[inline]
    pub(crate) fn rate(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0);
        let j = TenorGrid::segment(t);
        if j + 1 >= N_TENORS {
            return self.zeros[N_TENORS - 1];
        }
        let (t0, t1) = (TENORS[j], TENORS[j + 1]);
        let w = (t - t0) / (t1 - t0);
        self.zeros[j] + w * (self.zeros[j + 1] - self.zeros[j])
    }

    #[inline]
    pub(crate) fn df(&self, t: f64) -> f64 {
        (-self.rate(t) * t).exp()
    }

    /// Instantaneous forward `d/dt (r(t) t)`, taking the right-hand slope at pillars.
    pub fn forward_rate(&self, t: f64) -> f64 {
        let j = TenorGrid::segment(t.max(0.0));
        if j + 1 >= N_TENORS {
            return self.zeros[N_TENORS - 1];
        }
        let slope = (self.zeros[j + 1] - self.zeros[j]) / (TENORS[j + 1] - TENORS[j]);
        self.rate(t) + t * slope
    }

    /// New curve with pillar yields `r_j * (1 + s_j)`.
    pub fn apply_shock(&self, shock: &RelativeShock) -> ZeroCurve {
        let mut zeros = self.zeros;
        for (z, s) in zeros.iter_mut().zip(shock.shifts.iter()) {
            *z *= 1.0 + s;
        }
        ZeroCurve {
            zeros,
            anchor: self.anchor,
        }
    }

    /// Reads a `tenor,zero_yield` file on the pillar grid.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let headers = reader.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "tenor" || &headers[1] != "zero_yield" {
            return Err(Error::Parse(format!(
                "{}: expected header `tenor,zero_yield`",
                path.display()
            )));
        }
        let mut tenors = Vec::with_capacity(N_TENORS);
        let mut zeros = Vec::with_capacity(N_TENORS);
        for record in reader.records() {
            let record = record?;
            tenors.push(parse_f64(&record[0])?);
            zeros.push(parse_f64(&record[1])?);
        }
        TenorGrid.check(&tenors)?;
        let mut arr = [0.0; N_TENORS];
        arr.copy_from_slice(&zeros);
        ZeroCurve::new(arr, 0.0)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        writer.write_record(["tenor", "zero_yield"])?;
        for (t, z) in TENORS.iter().zip(self.zeros.iter()) {
            writer.write_record([t.to_string(), z.to_string()])?;
        }
        writer.flush()?;
        Ok(())
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
}

/// Relative moves of the pillar yields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelativeShock {
    shifts: [f64; N_TENORS],
}

impl RelativeShock {
    pub fn new(shifts: [f64; N_TENORS]) -> Result<Self> {
        for s in &shifts {
            if !s.is_finite() || s.abs() >= MAX_ABS_SHIFT {
                return Err(domain(format!(
                    "relative shift {s} outside (-{MAX_ABS_SHIFT}, {MAX_ABS_SHIFT})"
                )));
            }
        }
        Ok(Self { shifts })
    }

    pub fn zero() -> Self {
        Self {
            shifts: [0.0; N_TENORS],
        }
    }

    pub fn shifts(&self) -> &[f64; N_TENORS] {
        &self.shifts
    }

    pub fn max_abs(&self) -> f64 {
        self.shifts.iter().fold(0.0, |m, s| m.max(s.abs()))
    }
}

/// Ordered, non-empty set of historical (or synthetic) VAR shocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShockSet {
    shocks: Vec<RelativeShock>,
    provenance: String,
}

impl ShockSet {
    pub fn new(shocks: Vec<RelativeShock>, provenance: impl Into<String>) -> Result<Self> {
        if shocks.is_empty() {
            return Err(domain("shock set must not be empty"));
        }
        Ok(Self {
            shocks,
            provenance: provenance.into(),
        })
    }

    /// `count` copies of the zero shock.
    pub fn zeros(count: usize) -> Result<Self> {
        Self::new(vec![RelativeShock::zero(); count], "zero")
    }

    pub fn shocks(&self) -> &[RelativeShock] {
        &self.shocks
    }

    pub fn len(&self) -> usize {
        self.shocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shocks.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn max_abs(&self) -> f64 {
        self.shocks.iter().fold(0.0, |m, s| m.max(s.max_abs()))
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        Self::from_reader(file, path.display().to_string())
    }

    pub fn from_reader<R: Read>(reader: R, provenance: String) -> Result<Self> {
        let mut reader = csv::Reader::from_reader(reader);
        let headers = reader.headers()?.clone();
        let labels = TenorGrid.labels();
        if headers.len() != N_TENORS || headers.iter().zip(labels.iter()).any(|(h, l)| h != l) {
            return Err(Error::Parse(format!(
                "{provenance}: shock header must be `{}`",
                labels.join(",")
            )));
        }
        let mut shocks = Vec::new();
        for record in reader.records() {
            let record = record?;
            shocks.push(RelativeShock::new(parse_row(&record, 0)?)?);
        }
        Self::new(shocks, provenance)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.to_writer(file)
    }

    pub fn to_writer<W: Write>(&self, writer: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(writer);
        writer.write_record(TenorGrid.labels())?;
        for shock in &self.shocks {
            writer.write_record(shock.shifts.iter().map(|s| s.to_string()))?;
        }
        writer.flush()?;
        Ok(())
    }
}

fn parse_row(record: &csv::StringRecord, offset: usize) -> Result<[f64; N_TENORS]> {
    if record.len() != N_TENORS + offset {
        return Err(Error::Parse(format!(
            "expected {} columns, found {}",
            N_TENORS + offset,
            record.len()
        )));
    }
    let mut row = [0.0; N_TENORS];
    for (j, v) in row.iter_mut().enumerate() {
        *v = parse_f64(&record[j + offset])?;
    }
    Ok(row)
}

/// Dated zero-yield observations on the pillar grid, oldest first.
#[derive(Debug, Clone, PartialEq)]
pub struct YieldHistory {
    pub observations: Vec<(NaiveDate, [f64; N_TENORS])>,
}

impl YieldHistory {
    /// Reads `date,tenor_0,...,tenor_30` with ISO dates.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path)?;
        let headers = reader.headers()?.clone();
        if headers.len() != N_TENORS + 1 || &headers[0] != "date" {
            return Err(Error::Parse(format!(
                "{}: expected `date` followed by {N_TENORS} yield columns",
                path.display()
            )));
        }
        let mut observations = Vec::new();
        for record in reader.records() {
            let record = record?;
            let date = NaiveDate::parse_from_str(record[0].trim(), "%Y-%m-%d")
                .map_err(|e| Error::Parse(format!("date `{}`: {e}", &record[0])))?;
            observations.push((date, parse_row(&record, 1)?));
        }
        if observations.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::Parse(format!(
                "{}: dates must be strictly increasing",
                path.display()
            )));
        }
        Ok(Self { observations })
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut writer = csv::Writer::from_path(path)?;
        let mut header = vec!["date".to_string()];
        header.extend(TenorGrid.labels());
        writer.write_record(&header)?;
        for (date, yields) in &self.observations {
            let mut row = vec![date.format("%Y-%m-%d").to_string()];
            row.extend(yields.iter().map(|y| y.to_string()));
            writer.write_record(&row)?;
        }
        writer.flush()?;
        Ok(())
    }
}

/// Overlapping `horizon_days`-observation relative moves,
/// `s_j = r_j(t + h) / r_j(t) - 1`. Pillars with `r_j(t) = 0` give `s_j = 0`.
pub fn shocks_from_history(
    history: &[[f64; N_TENORS]],
    horizon_days: usize,
    provenance: impl Into<String>,
) -> Result<ShockSet> {
    if horizon_days == 0 {
        return Err(domain("horizon must be at least one observation"));
    }
    if history.len() < horizon_days + 1 {
        return Err(domain(format!(
            "series of {} observations too short for a {horizon_days}-day horizon",
            history.len()
        )));
    }
    let shocks = history
        .iter()
        .zip(history.iter().skip(horizon_days))
        .map(|(start, end)| {
            let mut shifts = [0.0; N_TENORS];
            for j in 0..N_TENORS {
                if start[j] != 0.0 {
                    shifts[j] = end[j] / start[j] - 1.0;
                }
            }
            RelativeShock::new(shifts)
        })
        .collect::<Result<Vec<_>>>()?;
    ShockSet::new(shocks, provenance)
}

/// Deterministic synthetic shock set standing in for a stressed
/// historical window.
///
/// Shocks are driven by level/slope/curvature factors with Nelson-Siegel
/// loadings plus small per-pillar noise; a contiguous block of a fifth of
/// the set is drawn at three times the calm volatility. The set is then
/// rescaled so its largest component has magnitude `max_rel`.
pub fn synth_shock_set(seed: u64, count: usize, max_rel: f64) -> Result<ShockSet> {
    if count == 0 {
        return Err(domain("shock count must be at least 1"));
    }
    if !(0.0..MAX_ABS_SHIFT).contains(&max_rel) {
        return Err(domain(format!("max_rel {max_rel} outside [0, {MAX_ABS_SHIFT})")));
    }
    let provenance = format!("synth:{seed}:{count}:{max_rel}");
    if max_rel == 0.0 {
        return ShockSet::new(vec![RelativeShock::zero(); count], provenance);
    }

    const DECAY: f64 = 3.0;
    let loadings: Vec<[f64; 3]> = TENORS
        .iter()
        .map(|&t| {
            let slope = if t == 0.0 {
                1.0
            } else {
                (1.0 - (-t / DECAY).exp()) / (t / DECAY)
            };
            [1.0, slope, slope - (-t / DECAY).exp()]
        })
        .collect();
    let stress_start = (2 * count) / 5;
    let stress_end = stress_start + (count / 5).max(1);

    let mut rng = rng::stream(seed, Domain::Shocks, 0);
    let mut raw: Vec<[f64; N_TENORS]> = (0..count)
        .map(|i| {
            let vol = if (stress_start..stress_end).contains(&i) { 3.0 } else { 1.0 };
            let level: f64 = rng.sample::<f64, _>(StandardNormal) * 0.06 * vol;
            let slope: f64 = rng.sample::<f64, _>(StandardNormal) * 0.05 * vol;
            let curve: f64 = rng.sample::<f64, _>(StandardNormal) * 0.03 * vol;
            let mut shifts = [0.0; N_TENORS];
            for (s, l) in shifts.iter_mut().zip(loadings.iter()) {
                let noise: f64 = rng.sample::<f64, _>(StandardNormal) * 0.005 * vol;
                *s = level * l[0] + slope * l[1] + curve * l[2] + noise;
            }
            shifts
        })
        .collect();

    let peak = raw
        .iter()
        .flat_map(|s| s.iter())
        .fold(0.0_f64, |m, s| m.max(s.abs()));
    if peak > 0.0 {
        let scale = max_rel / peak;
        for s in raw.iter_mut().flat_map(|s| s.iter_mut()) {
            *s *= scale;
        }
    }
    let shocks = raw
        .into_iter()
        .map(RelativeShock::new)
        .collect::<Result<Vec<_>>>()?;
    ShockSet::new(shocks, provenance)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn steep() -> ZeroCurve {
        let mut z = [0.0; N_TENORS];
        for (j, t) in TENORS.iter().enumerate() {
            z[j] = 0.01 + 0.001 * t;
        }
        ZeroCurve::new(z, 0.0).unwrap()
    }

    #[test]
    fn interpolation_examples() {
        let mut z = [0.03; N_TENORS];
        z[6] = 0.02; // 5y
        z[2] = 0.02; // 1y
        z[3] = 0.04; // 2y
        let c = ZeroCurve::new(z, 0.0).unwrap();
        assert_eq!(c.zero_rate(5.0).unwrap(), 0.02);
        assert_relative_eq!(c.zero_rate(1.5).unwrap(), 0.03, epsilon = 1e-15);
        assert_eq!(c.zero_rate(40.0).unwrap(), 0.03);
        assert!(matches!(c.zero_rate(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn discount_factor_examples() {
        let c = ZeroCurve::flat(0.02);
        assert_eq!(c.discount_factor(0.0).unwrap(), 1.0);
        assert_relative_eq!(c.discount_factor(5.0).unwrap(), 0.904837418, epsilon = 1e-9);
        let shocked = c.apply_shock(&RelativeShock::new([0.3; N_TENORS]).unwrap());
        assert_relative_eq!(shocked.discount_factor(5.0).unwrap(), 0.878095431, epsilon = 1e-9);
    }

    #[test]
    fn shock_examples() {
        let c = ZeroCurve::flat(0.02);
        assert_eq!(c.apply_shock(&RelativeShock::zero()), c);
        let up = c.apply_shock(&RelativeShock::new([0.3; N_TENORS]).unwrap());
        for z in up.zeros() {
            assert_relative_eq!(*z, 0.026, epsilon = 1e-15);
        }
        let neg = ZeroCurve::flat(-0.01).apply_shock(&RelativeShock::new([0.3; N_TENORS]).unwrap());
        assert_relative_eq!(neg.zeros()[4], -0.013, epsilon = 1e-15);
        assert!(RelativeShock::new([5.0; N_TENORS]).is_err());
    }

    #[test]
    fn shocked_df_matches_pillar_formula() {
        let c = steep();
        let mut shifts = [0.0; N_TENORS];
        for (j, s) in shifts.iter_mut().enumerate() {
            *s = 0.02 * j as f64 - 0.15;
        }
        let shock = RelativeShock::new(shifts).unwrap();
        let shocked = c.apply_shock(&shock);
        for (j, &t) in TENORS.iter().enumerate() {
            let expected = (-c.zeros()[j] * t * (1.0 + shifts[j])).exp();
            assert_relative_eq!(shocked.discount_factor(t).unwrap(), expected, max_relative = 1e-15);
        }
    }

    #[test]
    fn forward_rate_integrates_to_log_discount() {
        let c = steep();
        // midpoint rule on a fine grid inside each segment
        let n = 20_000;
        let upper = 17.3;
        let h = upper / n as f64;
        let integral: f64 = (0..n).map(|i| c.forward_rate((i as f64 + 0.5) * h) * h).sum();
        assert_relative_eq!(integral, -c.discount_factor(upper).unwrap().ln(), max_relative = 1e-7);
    }

    #[test]
    fn history_examples() {
        let constant = vec![[0.02; N_TENORS]; 15];
        let set = shocks_from_history(&constant, 10, "const").unwrap();
        assert_eq!(set.len(), 5);
        assert!(set.shocks().iter().all(|s| s.max_abs() == 0.0));

        let long = vec![[0.02; N_TENORS]; 1304];
        assert_eq!(shocks_from_history(&long, 10, "long").unwrap().len(), 1294);

        let mut doubling = vec![[0.02; N_TENORS]; 11];
        doubling[10][7] = 0.04;
        let set = shocks_from_history(&doubling, 10, "dbl").unwrap();
        assert_eq!(set.shocks()[0].shifts()[7], 1.0);
        assert_eq!(set.shocks()[0].shifts()[6], 0.0);

        let mut zero_pillar = vec![[0.02; N_TENORS]; 11];
        zero_pillar[0][0] = 0.0;
        let set = shocks_from_history(&zero_pillar, 10, "z").unwrap();
        assert_eq!(set.shocks()[0].shifts()[0], 0.0);

        assert!(shocks_from_history(&constant[..10], 10, "short").is_err());
    }

    #[test]
    fn synthetic_examples() {
        let a = synth_shock_set(1, 4, 0.3).unwrap();
        let b = synth_shock_set(1, 4, 0.3).unwrap();
        assert_eq!(a, b);

        let full = synth_shock_set(1, 1294, 0.3).unwrap();
        let peak = full.max_abs();
        assert!((0.25..=0.30).contains(&peak), "peak {peak}");

        let flat = synth_shock_set(1, 10, 0.0).unwrap();
        assert_eq!(flat.max_abs(), 0.0);
        assert!(synth_shock_set(1, 0, 0.3).is_err());
    }

    #[test]
    fn synthetic_set_has_stressed_cluster() {
        let set = synth_shock_set(9, 1000, 0.3).unwrap();
        let mean_abs = |range: std::ops::Range<usize>| {
            let n = range.len() as f64;
            set.shocks()[range].iter().map(|s| s.shifts()[10].abs()).sum::<f64>() / n
        };
        assert!(mean_abs(400..600) > 2.0 * mean_abs(0..400));
    }

    #[test]
    fn shock_csv_round_trip() {
        let set = synth_shock_set(3, 7, 0.3).unwrap();
        let mut buf = Vec::new();
        set.to_writer(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("tenor_0,tenor_0.5,tenor_1,tenor_2,"));
        assert!(text.lines().next().unwrap().ends_with("tenor_25,tenor_30"));
        let back = ShockSet::from_reader(&buf[..], "mem".into()).unwrap();
        assert_eq!(back.shocks(), set.shocks());

        let bad = "tenor_0,tenor_1\n0.1,0.2\n";
        assert!(ShockSet::from_reader(bad.as_bytes(), "bad".into()).is_err());
    }

    #[test]
    fn history_and_curve_files() {
        let dir = tempfile::tempdir().unwrap();
        let hist = YieldHistory {
            observations: (0..12)
                .map(|i| {
                    let d = NaiveDate::from_ymd_opt(2007, 1, 1).unwrap() + chrono::Days::new(i);
                    (d, [0.02 + 0.001 * i as f64; N_TENORS])
                })
                .collect(),
        };
        let path = dir.path().join("hist.csv");
        hist.write_csv(&path).unwrap();
        assert_eq!(YieldHistory::read_csv(&path).unwrap(), hist);

        let curve = steep();
        let path = dir.path().join("curve.csv");
        curve.write_csv(&path).unwrap();
        assert_eq!(ZeroCurve::read_csv(&path).unwrap(), curve);
    }

    proptest! {
        #[test]
        fn interpolation_is_affine_between_pillars(seg in 0usize..N_TENORS - 1, lambda in 0.0f64..=1.0) {
            let c = steep();
            let (t1, t2) = (TENORS[seg], TENORS[seg + 1]);
            let t = (1.0 - lambda) * t1 + lambda * t2;
            let expected = (1.0 - lambda) * c.zeros()[seg] + lambda * c.zeros()[seg + 1];
            prop_assert!((c.zero_rate(t).unwrap() - expected).abs() < 1e-15);
        }

        #[test]
        fn time_reversed_history_gives_reciprocal_shocks(
            levels in proptest::collection::vec(0.01f64..0.04, 12..30),
        ) {
            let series: Vec<[f64; N_TENORS]> = levels
                .iter()
                .enumerate()
                .map(|(i, &l)| {
                    let mut row = [0.0; N_TENORS];
                    for (j, r) in row.iter_mut().enumerate() {
                        *r = l * (1.0 + 0.01 * j as f64) + 0.0001 * i as f64;
                    }
                    row
                })
                .collect();
            let mut reversed = series.clone();
            reversed.reverse();
            let fwd = shocks_from_history(&series, 10, "f").unwrap();
            let rev = shocks_from_history(&reversed, 10, "r").unwrap();
            let n = fwd.len();
            for i in 0..n {
                let s = fwd.shocks()[i].shifts();
                let r = rev.shocks()[n - 1 - i].shifts();
                for j in 0..N_TENORS {
                    prop_assert!((r[j] - (1.0 / (1.0 + s[j]) - 1.0)).abs() < 1e-12);
                }
            }
        }
    }
}
