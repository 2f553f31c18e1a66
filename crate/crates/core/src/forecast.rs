//! Rolling-window evaluation of combination models on forecast panels.
//!
//! Fold `f` (0-based) trains on rows `f..f+L` and forecasts row `f+L`. The
//! ground truth of a fold is only reachable through a [`TruthGuard`], which
//! refuses reads past the training window and records the furthest row read.

use crate::error::{Error, Result};
use crate::exec::{derive_seed, rng_from_seed, Executor, Sequential, SimRng};
use crate::mcmc::{ChainConfig, ParamSummary};
use crate::model::{fit, posterior_predictive, sample_error_law, Family, ModelSpec, TrainingWindow};
use crate::special::{mean, variance};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::Cell;
#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// One entity's actuals and analyst forecasts; `None` marks a missing forecast.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastPanel {
    ticker: String,
    periods: Vec<String>,
    y: Vec<f64>,
    x: Vec<Option<f64>>,
    m: usize,
}

impl ForecastPanel {
    pub fn new(ticker: String, periods: Vec<String>, y: Vec<f64>, rows: Vec<Vec<Option<f64>>>) -> Result<Self> {
        let t_len = y.len();
        if periods.len() != t_len || rows.len() != t_len {
            return Err(Error::Dimension {
                expected: t_len,
                got: if periods.len() != t_len { periods.len() } else { rows.len() },
            });
        }
        let m = rows.first().map_or(0, Vec::len);
        if m == 0 {
            return Err(Error::Dimension { expected: 1, got: 0 });
        }
        for w in periods.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Config(alloc::format!(
                    "periods must be strictly increasing: {} then {}",
                    w[0],
                    w[1]
                )));
            }
        }
        let mut x = Vec::with_capacity(t_len * m);
        for (t, r) in rows.into_iter().enumerate() {
            if r.len() != m {
                return Err(Error::Dimension { expected: m, got: r.len() });
            }
            if r.iter().all(Option::is_none) {
                return Err(Error::AllMissing { t });
            }
            if r.iter().flatten().any(|v| !v.is_finite()) || !y[t].is_finite() {
                return Err(Error::NonFinite { t });
            }
            x.extend(r);
        }
        Ok(Self { ticker, periods, y, x, m })
    }

    pub fn ticker(&self) -> &str {
        &self.ticker
    }

    pub fn periods(&self) -> &[String] {
        &self.periods
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn actuals(&self) -> &[f64] {
        &self.y
    }

    pub fn forecasts(&self, t: usize) -> &[Option<f64>] {
        &self.x[t * self.m..(t + 1) * self.m]
    }

    /// Copy with the actuals replaced.
    pub fn with_actuals(&self, y: Vec<f64>) -> Result<Self> {
        if y.len() != self.y.len() {
            return Err(Error::Dimension {
                expected: self.y.len(),
                got: y.len(),
            });
        }
        Ok(Self { y, ..self.clone() })
    }
}

/// Access to the actuals of one fold, limited to rows `≤ limit`.
#[derive(Debug)]
pub struct TruthGuard<'a> {
    y: &'a [f64],
    fold: usize,
    limit: usize,
    furthest: Cell<Option<usize>>,
}

impl<'a> TruthGuard<'a> {
    pub fn new(y: &'a [f64], fold: usize, limit: usize) -> Self {
        Self {
            y,
            fold,
            limit,
            furthest: Cell::new(None),
        }
    }

    pub fn actual(&self, t: usize) -> Result<f64> {
        if t > self.limit || t >= self.y.len() {
            return Err(Error::Leakage {
                fold: self.fold,
                t,
                limit: self.limit,
            });
        }
        self.furthest.set(Some(self.furthest.get().map_or(t, |f| f.max(t))));
        Ok(self.y[t])
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Furthest row read so far.
    pub fn furthest_read(&self) -> Option<usize> {
        self.furthest.get()
    }
}

/// How missing forecasts are filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Imputation {
    /// Cross-sectional mean of the observed forecasts.
    Mean,
    /// Draws from `N(μ̂_t, σ̂²_t)` of the observed forecasts.
    Stochastic,
}

/// Complete forecast vector for row `t`.
pub fn impute_missing(panel: &ForecastPanel, t: usize, mode: Imputation, rng: &mut SimRng) -> Result<Vec<f64>> {
    if t >= panel.len() {
        return Err(Error::Dimension {
            expected: panel.len(),
            got: t,
        });
    }
    let row = panel.forecasts(t);
    let observed: Vec<f64> = row.iter().flatten().copied().collect();
    if observed.is_empty() {
        return Err(Error::AllMissing { t });
    }
    let mu = mean(&observed);
    let sd = if observed.len() >= 2 { variance(&observed).sqrt() } else { 0.0 };
    Ok(row
        .iter()
        .map(|v| match (v, mode) {
            (Some(v), _) => *v,
            (None, Imputation::Mean) => mu,
            (None, Imputation::Stochastic) => {
                let e: f64 = StandardNormal.sample(rng);
                mu + sd * e
            }
        })
        .collect())
}

/// Equally weighted mean of the observed forecasts for row `t`.
pub fn consensus(panel: &ForecastPanel, t: usize) -> Result<f64> {
    let observed: Vec<f64> = panel.forecasts(t).iter().flatten().copied().collect();
    if observed.is_empty() {
        return Err(Error::AllMissing { t });
    }
    Ok(mean(&observed))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RollingWindowConfig {
    pub window: usize,
    pub folds: usize,
    pub imputation: Imputation,
    /// Keep the centered posterior-predictive draws of every fold.
    pub keep_ppd: bool,
}

impl RollingWindowConfig {
    /// As many folds as the panel allows: `F = T − L`.
    pub fn full(window: usize, panel_len: usize) -> Self {
        Self {
            window,
            folds: panel_len.saturating_sub(window),
            imputation: Imputation::Mean,
            keep_ppd: false,
        }
    }

    pub fn validate(&self, panel_len: usize, m: usize) -> Result<()> {
        if self.window < m + 2 {
            return Err(Error::Config(alloc::format!(
                "window length {} is below m + 2 = {}",
                self.window,
                m + 2
            )));
        }
        if self.folds == 0 || self.window + self.folds > panel_len {
            return Err(Error::Config(alloc::format!(
                "panel of length {panel_len} cannot hold {} folds with window {}",
                self.folds,
                self.window
            )));
        }
        Ok(())
    }
}

/// Outcome of one fold.
#[derive(Debug, Clone, PartialEq)]
pub struct FoldResult {
    pub fold: usize,
    /// Row that was forecast.
    pub target: usize,
    /// Posterior mean of the conditional mode.
    pub forecast: f64,
    /// Posterior median of the conditional mode.
    pub forecast_median: f64,
    pub summary: Vec<ParamSummary>,
    /// Centered posterior-predictive draws, if requested.
    pub ppd: Vec<f64>,
    /// Furthest row of ground truth the fold read.
    pub furthest_read: usize,
}

fn run_fold(
    panel: &ForecastPanel,
    spec: &ModelSpec,
    rw: &RollingWindowConfig,
    chains: &ChainConfig,
    fold: usize,
) -> Result<FoldResult> {
    let l = rw.window;
    let guard = TruthGuard::new(panel.actuals(), fold, fold + l - 1);
    let mut rng = rng_from_seed(derive_seed(chains.seed, (fold as u64) << 1));
    let mut rows = Vec::with_capacity(l);
    let mut y = Vec::with_capacity(l);
    for t in fold..fold + l {
        rows.push(impute_missing(panel, t, rw.imputation, &mut rng)?);
        y.push(guard.actual(t)?);
    }
    let window = TrainingWindow::new(y, &rows, fold)?;
    let x_next = impute_missing(panel, fold + l, rw.imputation, &mut rng)?;
    let cfg = ChainConfig {
        seed: derive_seed(chains.seed, ((fold as u64) << 1) | 1),
        ..chains.clone()
    };
    let draws = fit(spec, &window, &cfg, &Sequential)?;
    let pred = posterior_predictive(spec, &draws, &x_next, &mut rng)?;
    Ok(FoldResult {
        fold,
        target: fold + l,
        forecast: pred.point,
        forecast_median: pred.point_median,
        summary: draws.summary().to_vec(),
        ppd: if rw.keep_ppd { pred.centered() } else { Vec::new() },
        furthest_read: guard.furthest_read().unwrap_or(fold),
    })
}

/// Fits every fold through `exec`; a failing fold is reported with its index.
pub fn run_rolling_cv<E: Executor>(
    panel: &ForecastPanel,
    spec: &ModelSpec,
    rw: &RollingWindowConfig,
    chains: &ChainConfig,
    exec: &E,
) -> Result<Vec<FoldResult>> {
    rw.validate(panel.len(), panel.m())?;
    spec.validate(panel.m())?;
    chains.validate()?;
    let results = exec.map(rw.folds, |f| {
        run_fold(panel, spec, rw, chains, f).map_err(|e| Error::Fold {
            fold: f,
            source: alloc::boxed::Box::new(e),
        })
    });
    let out: Vec<FoldResult> = results.into_iter().collect::<Result<_>>()?;
    for r in &out {
        if r.furthest_read + 1 > r.fold + rw.window {
            return Err(Error::Leakage {
                fold: r.fold,
                t: r.furthest_read,
                limit: r.fold + rw.window - 1,
            });
        }
    }
    Ok(out)
}

/// One evaluated fold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldEval {
    pub fold: usize,
    pub forecast: f64,
    pub consensus: f64,
    pub actual: f64,
    pub hit: bool,
    pub win: bool,
}

impl FoldEval {
    pub fn new(fold: usize, forecast: f64, consensus: f64, actual: f64) -> Self {
        Self {
            fold,
            forecast,
            consensus,
            actual,
            hit: is_hit(forecast, consensus, actual),
            win: is_win(forecast, consensus, actual),
        }
    }
}

fn sign(v: f64) -> i8 {
    if v >= 0.0 {
        1
    } else {
        -1
    }
}

/// Same side of the consensus as the actual; zero counts as positive.
pub fn is_hit(forecast: f64, consensus: f64, actual: f64) -> bool {
    sign(actual - consensus) == sign(forecast - consensus)
}

/// Strictly closer to the actual than the consensus.
pub fn is_win(forecast: f64, consensus: f64, actual: f64) -> bool {
    (actual - forecast).abs() < (actual - consensus).abs()
}

pub fn hit_rate(rows: &[FoldEval]) -> Result<f64> {
    rate(rows, |r| r.hit)
}

pub fn win_rate(rows: &[FoldEval]) -> Result<f64> {
    rate(rows, |r| r.win)
}

fn rate(rows: &[FoldEval], f: impl Fn(&FoldEval) -> bool) -> Result<f64> {
    if rows.is_empty() {
        return Err(Error::Dimension { expected: 1, got: 0 });
    }
    Ok(rows.iter().filter(|r| f(r)).count() as f64 / rows.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub rows: Vec<FoldEval>,
    pub hit_rate: f64,
    pub win_rate: f64,
}

impl EvalReport {
    /// Scores fold forecasts against the actuals and consensus of their
    /// target rows.
    pub fn from_folds(panel: &ForecastPanel, folds: &[FoldResult]) -> Result<Self> {
        let rows = folds
            .iter()
            .map(|f| {
                Ok(FoldEval::new(
                    f.fold,
                    f.forecast,
                    consensus(panel, f.target)?,
                    panel.actuals()[f.target],
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn from_rows(rows: Vec<FoldEval>) -> Result<Self> {
        Ok(Self {
            hit_rate: hit_rate(&rows)?,
            win_rate: win_rate(&rows)?,
            rows,
        })
    }
}

/// Generator for synthetic analyst panels with a known combination.
///
/// Every entity has its own sharply unequal weights (a random permutation of
/// `weights`); analysts report a common latent level plus independent noise,
/// and the actual is the weighted combination plus an error from `family`.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticPanelConfig {
    pub entities: usize,
    pub periods: usize,
    pub weights: Vec<f64>,
    pub intercept: f64,
    pub family: Family,
    pub scale: f64,
    pub asymmetry: Option<f64>,
    /// Standard deviation of each analyst's idiosyncratic noise.
    pub analyst_noise: f64,
    /// Probability that a forecast is missing (one per row is always kept).
    pub missing_rate: f64,
}

impl Default for SyntheticPanelConfig {
    fn default() -> Self {
        Self {
            entities: 23,
            periods: 36,
            weights: vec![0.6, 0.25, 0.1, 0.05],
            intercept: 0.0,
            family: Family::Ald,
            scale: 0.1,
            asymmetry: Some(0.5),
            analyst_noise: 1.0,
            missing_rate: 0.05,
        }
    }
}

/// Entity panels plus the weights each was generated with.
pub fn synthetic_panels(cfg: &SyntheticPanelConfig, seed: u64) -> Result<Vec<(ForecastPanel, Vec<f64>)>> {
    let m = cfg.weights.len();
    (0..cfg.entities)
        .map(|e| {
            let mut rng = rng_from_seed(derive_seed(seed, e as u64));
            let mut w = cfg.weights.clone();
            w.shuffle(&mut rng);
            let mut level = 0.0;
            let mut periods = Vec::with_capacity(cfg.periods);
            let mut y = Vec::with_capacity(cfg.periods);
            let mut rows = Vec::with_capacity(cfg.periods);
            for t in 0..cfg.periods {
                let step: f64 = StandardNormal.sample(&mut rng);
                level += 0.5 * step;
                let x: Vec<f64> = (0..m)
                    .map(|_| {
                        let n: f64 = StandardNormal.sample(&mut rng);
                        level + cfg.analyst_noise * n
                    })
                    .collect();
                let mode = cfg.intercept + w.iter().zip(&x).map(|(a, b)| a * b).sum::<f64>();
                y.push(sample_error_law(cfg.family, mode, cfg.scale, cfg.asymmetry, &mut rng)?);
                let keep = rng.random_range(0..m);
                rows.push(
                    x.into_iter()
                        .enumerate()
                        .map(|(j, v)| (j == keep || rng.random::<f64>() >= cfg.missing_rate).then_some(v))
                        .collect(),
                );
                periods.push(alloc::format!("{}Q{}", 2000 + t / 4, t % 4 + 1));
            }
            let panel = ForecastPanel::new(alloc::format!("E{:02}", e + 1), periods, y, rows)?;
            Ok((panel, w))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelPriors;
    use alloc::string::ToString;

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|t| alloc::format!("{t:03}")).collect()
    }

    fn panel_from(y: Vec<f64>, rows: Vec<Vec<Option<f64>>>) -> ForecastPanel {
        ForecastPanel::new("T".to_string(), labels(y.len()), y, rows).unwrap()
    }

    #[test]
    fn imputation_examples() {
        let p = panel_from(
            vec![0.0; 3],
            vec![
                vec![Some(10.0), None, Some(12.0)],
                vec![Some(1.0), Some(2.0), Some(3.0)],
                vec![None, Some(7.0), None],
            ],
        );
        let mut r = rng_from_seed(1);
        assert_eq!(impute_missing(&p, 0, Imputation::Mean, &mut r).unwrap(), [10.0, 11.0, 12.0]);
        assert_eq!(impute_missing(&p, 1, Imputation::Stochastic, &mut r).unwrap(), [1.0, 2.0, 3.0]);
        assert_eq!(impute_missing(&p, 2, Imputation::Stochastic, &mut r).unwrap(), [7.0, 7.0, 7.0]);
        let draws: Vec<f64> = (0..40_000)
            .map(|_| impute_missing(&p, 0, Imputation::Stochastic, &mut r).unwrap()[1])
            .collect();
        let (mu, sd) = (mean(&draws), variance(&draws).sqrt());
        assert!((mu - 11.0).abs() < 0.03, "{mu}");
        assert!((sd - 2f64.sqrt()).abs() < 0.03, "{sd}");
    }

    #[test]
    fn panel_validation() {
        let bad = ForecastPanel::new("T".into(), labels(2), vec![1.0, 2.0], vec![vec![Some(1.0)], vec![None]]);
        assert_eq!(bad, Err(Error::AllMissing { t: 1 }));
        let unordered = ForecastPanel::new(
            "T".into(),
            vec!["b".into(), "a".into()],
            vec![1.0, 2.0],
            vec![vec![Some(1.0)], vec![Some(1.0)]],
        );
        assert!(unordered.is_err());
    }

    #[test]
    fn guard_blocks_future_reads() {
        let y = [1.0, 2.0, 3.0, 4.0];
        let g = TruthGuard::new(&y, 0, 1);
        assert_eq!(g.actual(1).unwrap(), 2.0);
        assert_eq!(g.actual(2), Err(Error::Leakage { fold: 0, t: 2, limit: 1 }));
        assert_eq!(g.furthest_read(), Some(1));
    }

    #[test]
    fn rates_and_tie_rules() {
        let perfect: Vec<FoldEval> = (0..5).map(|f| FoldEval::new(f, f as f64, 2.0, f as f64)).collect();
        assert_eq!(hit_rate(&perfect).unwrap(), 1.0);
        let alternating: Vec<FoldEval> = (0..4)
            .map(|f| FoldEval::new(f, if f % 2 == 0 { 1.0 } else { -1.0 }, 0.0, 1.0))
            .collect();
        assert_eq!(hit_rate(&alternating).unwrap(), 0.5);
        // four folds: actual side of consensus +, +, -, + ; forecast side +, -, -, +
        let golden = [
            FoldEval::new(0, 11.0, 10.0, 12.0),
            FoldEval::new(1, 9.0, 10.0, 13.0),
            FoldEval::new(2, 8.0, 10.0, 9.0),
            FoldEval::new(3, 10.0, 10.0, 10.5),
        ];
        assert_eq!(hit_rate(&golden).unwrap(), 0.75);
        let at_consensus: Vec<FoldEval> = (0..4).map(|f| FoldEval::new(f, 3.0, 3.0, f as f64)).collect();
        assert_eq!(win_rate(&at_consensus).unwrap(), 0.0);
        let exact: Vec<FoldEval> = (0..4).map(|f| FoldEval::new(f, f as f64, 9.0, f as f64)).collect();
        assert_eq!(win_rate(&exact).unwrap(), 1.0);
        // distances to the actual: (1 vs 2), (3 vs 2), (0 vs 1), (2 vs 2)
        let fixture = [
            FoldEval::new(0, 1.0, 2.0, 0.0),
            FoldEval::new(1, 3.0, -2.0, 0.0),
            FoldEval::new(2, 5.0, 6.0, 5.0),
            FoldEval::new(3, -2.0, 2.0, 0.0),
        ];
        assert_eq!(win_rate(&fixture).unwrap(), 0.5);
        let tie = [FoldEval::new(0, 5.0, 5.0, 5.0)];
        assert_eq!(hit_rate(&tie).unwrap(), 1.0);
        assert!(hit_rate(&[]).is_err());
    }

    #[test]
    fn rates_shift_invariant() {
        let mut r = rng_from_seed(2);
        let rows: Vec<(f64, f64, f64)> = (0..200).map(|_| (r.random(), r.random(), r.random())).collect();
        let base: Vec<FoldEval> = rows.iter().enumerate().map(|(i, &(a, b, c))| FoldEval::new(i, a, b, c)).collect();
        for shift in [-3.0, 0.5, 100.0] {
            let moved: Vec<FoldEval> = rows
                .iter()
                .enumerate()
                .map(|(i, &(a, b, c))| FoldEval::new(i, a + shift, b + shift, c + shift))
                .collect();
            assert_eq!(hit_rate(&base), hit_rate(&moved));
            assert_eq!(win_rate(&base), win_rate(&moved));
        }
    }

    fn small_chains(seed: u64) -> ChainConfig {
        ChainConfig::new(2, 300, 600, seed)
    }

    #[test]
    fn fold_layout_and_no_leakage() {
        let cfg = SyntheticPanelConfig {
            entities: 1,
            ..Default::default()
        };
        let (panel, _) = synthetic_panels(&cfg, 3).unwrap().remove(0);
        let rw = RollingWindowConfig::full(12, panel.len());
        assert_eq!(rw.folds, 24);
        let spec = ModelSpec::new(Family::Ald, ModelPriors::data_defaults(Family::Ald, 4));
        let folds = run_rolling_cv(&panel, &spec, &rw, &small_chains(4), &Sequential).unwrap();
        for (f, r) in folds.iter().enumerate() {
            assert_eq!(r.fold, f);
            assert_eq!(r.target, f + 12);
            assert_eq!(r.furthest_read, f + 11);
        }
        // poisoning every future actual leaves each fold's forecast unchanged
        for f in [0, 11, 23] {
            let mut y = panel.actuals().to_vec();
            for v in &mut y[f + 12..] {
                *v = 1e6;
            }
            let poisoned = panel.with_actuals(y).unwrap();
            let one = RollingWindowConfig { folds: f + 1, ..rw.clone() };
            let again = run_rolling_cv(&poisoned, &spec, &one, &small_chains(4), &Sequential).unwrap();
            assert_eq!(again[f].forecast, folds[f].forecast);
        }
    }

    #[test]
    fn constant_panel_forecasts_constant() {
        let c = 3.0;
        let n = 20;
        let mut r = rng_from_seed(5);
        let rows: Vec<Vec<Option<f64>>> = (0..n).map(|_| vec![Some(c); 3]).collect();
        // tiny jitter keeps the scale posterior proper
        let y: Vec<f64> = (0..n).map(|_| c + 1e-3 * (r.random::<f64>() - 0.5)).collect();
        let panel = panel_from(y, rows);
        let rw = RollingWindowConfig {
            window: 12,
            folds: 3,
            imputation: Imputation::Mean,
            keep_ppd: true,
        };
        let mut priors = ModelPriors::data_defaults(Family::Ald, 3);
        priors.w0 = crate::priors::PriorSpec::Normal { mean: 0.0, var: 1e-6 };
        let spec = ModelSpec::new(Family::Ald, priors);
        let folds = run_rolling_cv(&panel, &spec, &rw, &small_chains(6), &Sequential).unwrap();
        for f in &folds {
            let w0 = &f.summary[0];
            assert!((f.forecast - c).abs() < 4.0 * w0.mcse.max(1e-4), "{}", f.forecast);
            assert_eq!(f.ppd.len(), 1200);
        }
    }

    #[test]
    fn errors_name_the_fold() {
        let cfg = SyntheticPanelConfig {
            entities: 1,
            periods: 16,
            ..Default::default()
        };
        let (panel, _) = synthetic_panels(&cfg, 7).unwrap().remove(0);
        let spec = ModelSpec::new(Family::Ald, ModelPriors::data_defaults(Family::Ald, 4));
        let chains = small_chains(8);
        let rw = RollingWindowConfig::full(12, panel.len());
        let too_long = RollingWindowConfig { folds: 5, ..rw.clone() };
        assert!(matches!(
            run_rolling_cv(&panel, &spec, &too_long, &chains, &Sequential),
            Err(Error::Config(_))
        ));
        let latent = ModelSpec {
            lambda: 0.2,
            ..ModelSpec::new(Family::AldLatent, ModelPriors::data_defaults(Family::AldLatent, 4))
        };
        let err = run_rolling_cv(&panel, &latent, &rw, &chains, &Sequential).unwrap_err();
        assert!(matches!(err, Error::Fold { fold: 0, .. }), "{err:?}");
    }

    #[test]
    fn synthetic_panel_shape() {
        let panels = synthetic_panels(&SyntheticPanelConfig::default(), 9).unwrap();
        assert_eq!(panels.len(), 23);
        for (p, w) in &panels {
            assert_eq!(p.len(), 36);
            assert_eq!(p.m(), 4);
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_eq!(panels, synthetic_panels(&SyntheticPanelConfig::default(), 9).unwrap());
    }
}
