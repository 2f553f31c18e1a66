//! Command-line definitions and the four commands.

use crate::config::{parse_family, parse_normalization, resolve_chains, resolve_priors, RunConfig};
use crate::error::{AppError, AppResult};
use crate::exec::ThreadedExecutor;
use crate::io;
use clap::{Args, Parser, Subcommand};
use modalcomb_core::exec::{derive_seed, rng_from_seed};
use modalcomb_core::forecast::{impute_missing, run_rolling_cv, EvalReport, ForecastPanel, Imputation, RollingWindowConfig};
use modalcomb_core::mcmc::ChainConfig;
use modalcomb_core::model::{fit, posterior_predictive, Family, ModelSpec, TrainingWindow};
use modalcomb_core::simstudy::{run_study, SimConfig};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "modalcomb", version, about = "Bayesian modal regression for forecast combination")]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Refuse to run without an explicit seed.
    #[arg(long, global = true)]
    pub ci: bool,
    /// Output directory.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// `sim-defaults`, `data-defaults` or a TOML prior file.
    #[arg(long, global = true)]
    pub priors: Option<String>,
    /// Number of chains.
    #[arg(long, global = true)]
    pub chains: Option<usize>,
    #[arg(long, global = true)]
    pub burn_in: Option<usize>,
    /// Kept draws per chain.
    #[arg(long, global = true)]
    pub draws: Option<usize>,
    /// Exponential discount rate of older observations.
    #[arg(long, global = true)]
    pub lambda: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulation study over a grid of error-law parameters.
    Simulate(SimulateArgs),
    /// Fit one window of a panel and summarize the posterior.
    Fit(FitArgs),
    /// Rolling-window evaluation of hit and win rates.
    Evaluate(EvaluateArgs),
    /// Posterior-predictive draws for the next period.
    Ppd(PpdArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// ald, an, rg or ald_latent.
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub tau: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub kappa: Vec<f64>,
    #[arg(long)]
    pub n_reps: Option<usize>,
    #[arg(long)]
    pub n_obs: Option<usize>,
    /// Full-scale replicate count and chain lengths.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Args)]
pub struct PanelArgs {
    /// Panel CSV `ticker,period,actual,f1,...,fm`.
    #[arg(long)]
    pub panel: Option<PathBuf>,
    /// Entity to use; defaults to the first one.
    #[arg(long)]
    pub ticker: Option<String>,
    #[arg(long)]
    pub family: Option<String>,
    /// Number of trailing rows to fit.
    #[arg(long)]
    pub window: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub panel: PanelArgs,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub panel: Option<PathBuf>,
    /// Comma-separated families.
    #[arg(long, value_delimiter = ',')]
    pub families: Vec<String>,
    #[arg(long)]
    pub window: Option<usize>,
    #[arg(long)]
    pub folds: Option<usize>,
    /// mean or stochastic.
    #[arg(long)]
    pub imputation: Option<String>,
    /// Predictive draws kept per fold; 0 disables the file.
    #[arg(long)]
    pub ppd_draws: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PpdArgs {
    #[command(flatten)]
    pub panel: PanelArgs,
    /// Forecast vector to predict at; defaults to the row after the window.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<f64>,
}

/// Settings shared by every command after merging file and flags.
struct Common {
    file: RunConfig,
    seed: u64,
    output: PathBuf,
    exec: ThreadedExecutor,
}

impl Common {
    fn new(cli: &Cli) -> AppResult<Self> {
        let file = match &cli.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let seed = cli.seed.or(file.seed);
        if cli.ci && cli.seed.is_none() {
            return Err(AppError::config("seed", "--seed is required with --ci"));
        }
        let threads = cli
            .threads
            .or(file.threads)
            .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if threads == 0 {
            return Err(AppError::config("threads", "must be at least 1"));
        }
        let exec = ThreadedExecutor::new(threads).map_err(|e| AppError::config("threads", e.to_string()))?;
        let output = cli.output.clone().or_else(|| file.output.clone()).unwrap_or_else(|| PathBuf::from("."));
        std::fs::create_dir_all(&output).map_err(|e| AppError::Io {
            path: output.clone(),
            source: e,
        })?;
        Ok(Self {
            seed: seed.unwrap_or(1),
            file,
            output,
            exec,
        })
    }

    fn family(&self, flag: Option<&str>, default: &str) -> AppResult<Family> {
        parse_family(flag.or(self.file.family.as_deref()).unwrap_or(default))
    }

    fn chains(&self, cli: &Cli, preset: &str, seed: u64) -> AppResult<ChainConfig> {
        resolve_chains(self.file.chains.as_ref(), preset, (cli.chains, cli.burn_in, cli.draws), seed)
    }

    fn spec(&self, cli: &Cli, family: Family, m: usize, default_priors: &str) -> AppResult<ModelSpec> {
        let priors = resolve_priors(cli.priors.as_deref(), self.file.priors.as_ref(), default_priors, family, m)?;
        let mut spec = ModelSpec::new(family, priors);
        spec.lambda = cli.lambda.or(self.file.lambda).unwrap_or(0.0);
        if let Some(n) = &self.file.normalization {
            spec.normalization = parse_normalization(n)?;
        }
        if !(spec.lambda.is_finite() && spec.lambda >= 0.0) {
            return Err(AppError::config("lambda", format!("must be finite and non-negative, got {}", spec.lambda)));
        }
        spec.validate(m)?;
        Ok(spec)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.output.join(name)
    }
}

/// Runs a parsed command line; returns the files written.
pub fn run(cli: &Cli) -> AppResult<Vec<PathBuf>> {
    let common = Common::new(cli)?;
    match &cli.command {
        Command::Simulate(a) => simulate(cli, &common, a),
        Command::Fit(a) => fit_cmd(cli, &common, a),
        Command::Evaluate(a) => evaluate(cli, &common, a),
        Command::Ppd(a) => ppd(cli, &common, a),
    }
}

fn simulate(cli: &Cli, c: &Common, a: &SimulateArgs) -> AppResult<Vec<PathBuf>> {
    let family = c.family(a.family.as_deref(), "ald")?;
    let file = c.file.simulate.clone().unwrap_or_default();
    let pick = |flag: &Vec<f64>, f: &Option<Vec<f64>>| if flag.is_empty() { f.clone() } else { Some(flag.clone()) };
    let (tau, beta, kappa) = (pick(&a.tau, &file.tau), pick(&a.beta, &file.beta), pick(&a.kappa, &file.kappa));
    let (grid_name, grid, others) = match family {
        Family::Ald | Family::An => ("tau", tau, [("beta", beta), ("kappa", kappa)]),
        Family::Rg => ("beta", beta, [("tau", tau), ("kappa", kappa)]),
        Family::AldLatent => ("kappa", kappa, [("tau", tau), ("beta", beta)]),
    };
    for (name, v) in &others {
        if v.is_some() {
            return Err(AppError::config(*name, format!("not a grid parameter of {}", family.name())));
        }
    }
    let grid = grid.unwrap_or_else(|| match family {
        Family::Ald | Family::An => modalcomb_core::simstudy::TAU_GRID.to_vec(),
        Family::Rg => modalcomb_core::simstudy::BETA_GRID.to_vec(),
        Family::AldLatent => modalcomb_core::simstudy::KAPPA_GRID.to_vec(),
    });
    let full = a.full || file.full.unwrap_or(false);
    let mut configs = Vec::with_capacity(grid.len());
    for (i, &g) in grid.iter().enumerate() {
        if !g.is_finite() {
            return Err(AppError::config(grid_name, format!("{g} is not finite")));
        }
        let seed = derive_seed(c.seed, i as u64);
        let mut cfg = if full { SimConfig::full(family, g, seed) } else { SimConfig::desk(family, g, seed) };
        cfg.chains = c.chains(cli, if full { "simulation" } else { "desk" }, seed)?;
        cfg.priors = resolve_priors(cli.priors.as_deref(), c.file.priors.as_ref(), "sim-defaults", family, cfg.m())?;
        if let Some(n) = a.n_reps.or(file.n_reps) {
            cfg.n_reps = n;
        }
        if let Some(n) = a.n_obs.or(file.n_obs) {
            cfg.n_obs = n;
        }
        cfg.validate().map_err(|e| match e {
            modalcomb_core::Error::Domain { .. } => AppError::config(grid_name, e.to_string()),
            e => e.into(),
        })?;
        configs.push(cfg);
    }
    let reports = configs.iter().map(|cfg| run_study(cfg, &c.exec)).collect::<Result<Vec<_>, _>>()?;
    let csv = c.path(&format!("sim_{}.csv", family.name()));
    let txt = c.path(&format!("sim_{}.txt", family.name()));
    io::write_sim_reports(&csv, &reports)?;
    io::write_text(&txt, &io::sim_table(&reports))?;
    Ok(vec![csv, txt])
}

fn load_panels(c: &Common, flag: Option<&PathBuf>) -> AppResult<(PathBuf, Vec<ForecastPanel>)> {
    let path = flag
        .or(c.file.panel.as_ref())
        .cloned()
        .ok_or_else(|| AppError::config("panel", "no panel file given"))?;
    let panels = io::read_panels(&path)?;
    if panels.is_empty() {
        return Err(io::data_err(&path, 1, "", "panel has no rows"));
    }
    Ok((path, panels))
}

fn select_panel(c: &Common, a: &PanelArgs) -> AppResult<ForecastPanel> {
    let (path, panels) = load_panels(c, a.panel.as_ref())?;
    match a.ticker.as_ref().or(c.file.ticker.as_ref()) {
        None => Ok(panels.into_iter().next().expect("non-empty")),
        Some(t) => panels
            .into_iter()
            .find(|p| p.ticker() == t)
            .ok_or_else(|| io::data_err(&path, 1, "ticker", format!("ticker '{t}' not found"))),
    }
}

fn window_of(panel: &ForecastPanel, rows: std::ops::Range<usize>, seed: u64) -> AppResult<TrainingWindow> {
    let mut rng = rng_from_seed(seed);
    let mut x = Vec::with_capacity(rows.len());
    for t in rows.clone() {
        x.push(impute_missing(panel, t, Imputation::Mean, &mut rng)?);
    }
    let y = panel.actuals()[rows.clone()].to_vec();
    Ok(TrainingWindow::new(y, &x, rows.start)?)
}

fn check_window(window: usize, available: usize, m: usize) -> AppResult<()> {
    if window < m + 2 || window > available {
        return Err(AppError::config(
            "window",
            format!("must lie between {} and {available}, got {window}", m + 2),
        ));
    }
    Ok(())
}

fn fit_cmd(cli: &Cli, c: &Common, a: &FitArgs) -> AppResult<Vec<PathBuf>> {
    let family = c.family(a.panel.family.as_deref(), "ald")?;
    let panel = select_panel(c, &a.panel)?;
    let m = panel.m();
    let n = panel.len();
    let window = a.panel.window.unwrap_or(n);
    check_window(window, n, m)?;
    let spec = c.spec(cli, family, m, "data-defaults")?;
    let chains = c.chains(cli, "data", c.seed)?;
    let data = window_of(&panel, n - window..n, c.seed)?;
    let draws = fit(&spec, &data, &chains, &c.exec)?;
    let (dp, sp) = (c.path("draws.csv"), c.path("summary.csv"));
    io::write_draws(&dp, &draws)?;
    io::write_summary(&sp, draws.summary())?;
    Ok(vec![dp, sp])
}

fn ppd(cli: &Cli, c: &Common, a: &PpdArgs) -> AppResult<Vec<PathBuf>> {
    let family = c.family(a.panel.family.as_deref(), "ald")?;
    let panel = select_panel(c, &a.panel)?;
    let m = panel.m();
    let n = panel.len();
    let (rows, x_next, actual) = if a.x.is_empty() {
        let window = a.panel.window.unwrap_or(n.saturating_sub(1));
        check_window(window, n.saturating_sub(1), m)?;
        let target = n - 1;
        let mut rng = rng_from_seed(derive_seed(c.seed, 1));
        let x = impute_missing(&panel, target, Imputation::Mean, &mut rng)?;
        (target - window..target, x, Some(panel.actuals()[target]))
    } else {
        if a.x.len() != m {
            return Err(AppError::config("x", format!("expected {m} values, got {}", a.x.len())));
        }
        if a.x.iter().any(|v| !v.is_finite()) {
            return Err(AppError::config("x", "values must be finite"));
        }
        let window = a.panel.window.unwrap_or(n);
        check_window(window, n, m)?;
        (n - window..n, a.x.clone(), None)
    };
    let spec = c.spec(cli, family, m, "data-defaults")?;
    let chains = c.chains(cli, "data", c.seed)?;
    let data = window_of(&panel, rows, c.seed)?;
    let draws = fit(&spec, &data, &chains, &c.exec)?;
    let mut rng = rng_from_seed(derive_seed(c.seed, 2));
    let pred = posterior_predictive(&spec, &draws, &x_next, &mut rng)?;
    let rows: Vec<Vec<String>> = pred
        .samples
        .iter()
        .enumerate()
        .map(|(i, s)| vec![i.to_string(), io::fmt_f64(*s), io::fmt_f64(s - pred.point)])
        .collect();
    let (pp, sp) = (c.path("ppd.csv"), c.path("ppd_summary.csv"));
    io::write_table(&pp, &["draw", "value", "centered"], &rows)?;
    io::write_table(
        &sp,
        &["forecast", "forecast_median", "actual"],
        &[vec![
            io::fmt_f64(pred.point),
            io::fmt_f64(pred.point_median),
            actual.map(io::fmt_f64).unwrap_or_default(),
        ]],
    )?;
    Ok(vec![pp, sp])
}

/// Stable per-family stream index for seeding.
fn family_index(f: Family) -> u64 {
    match f {
        Family::Ald => 0,
        Family::An => 1,
        Family::Rg => 2,
        Family::AldLatent => 3,
    }
}

fn evaluate(cli: &Cli, c: &Common, a: &EvaluateArgs) -> AppResult<Vec<PathBuf>> {
    let (_, panels) = load_panels(c, a.panel.as_ref())?;
    let file = c.file.evaluate.clone().unwrap_or_default();
    let names: Vec<String> = if !a.families.is_empty() {
        a.families.clone()
    } else if let Some(f) = &c.file.families {
        f.clone()
    } else {
        vec!["ald".into(), "an".into(), "rg".into()]
    };
    let families = names.iter().map(|s| parse_family(s)).collect::<AppResult<Vec<_>>>()?;
    let imputation = match a.imputation.as_deref().or(file.imputation.as_deref()).unwrap_or("mean") {
        "mean" => Imputation::Mean,
        "stochastic" => Imputation::Stochastic,
        s => return Err(AppError::config("imputation", format!("unknown imputation '{s}' (expected mean or stochastic)"))),
    };
    let ppd_draws = a.ppd_draws.or(file.ppd_draws).unwrap_or(100);
    let shortest = panels.iter().map(ForecastPanel::len).min().unwrap_or(0);
    let m = panels[0].m();
    let window = a.window.or(file.window).unwrap_or(12);
    let folds = a.folds.or(file.folds).unwrap_or(shortest.saturating_sub(window));
    let rw = RollingWindowConfig {
        window,
        folds,
        imputation,
        keep_ppd: ppd_draws > 0,
    };
    for p in &panels {
        rw.validate(p.len(), p.m()).map_err(|e| AppError::config("window", format!("{}: {e}", p.ticker())))?;
    }

    let mut fold_rows = Vec::new();
    let mut summary_rows = Vec::new();
    let mut asym_rows = Vec::new();
    let mut ppd_rows = Vec::new();
    let mut rates: Vec<Vec<(f64, f64)>> = Vec::new();
    for &family in &families {
        let spec = c.spec(cli, family, m, "data-defaults")?;
        let fam_seed = derive_seed(c.seed, family_index(family));
        let mut fam_rates = Vec::with_capacity(panels.len());
        for (e, panel) in panels.iter().enumerate() {
            let chains = c.chains(cli, "data", derive_seed(fam_seed, e as u64))?;
            let results = run_rolling_cv(panel, &spec, &rw, &chains, &c.exec)?;
            let report = EvalReport::from_folds(panel, &results)?;
            for (r, ev) in results.iter().zip(&report.rows) {
                fold_rows.push(vec![
                    family.name().to_string(),
                    panel.ticker().to_string(),
                    r.fold.to_string(),
                    panel.periods()[r.target].clone(),
                    io::fmt_f64(r.forecast),
                    io::fmt_f64(r.forecast_median),
                    io::fmt_f64(ev.consensus),
                    io::fmt_f64(ev.actual),
                    u8::from(ev.hit).to_string(),
                    u8::from(ev.win).to_string(),
                ]);
                let asym = family.asymmetry_name().unwrap_or(family.scale_name());
                if let Some(s) = r.summary.iter().find(|s| s.name == asym) {
                    asym_rows.push(vec![
                        family.name().to_string(),
                        panel.ticker().to_string(),
                        r.fold.to_string(),
                        s.name.clone(),
                        io::fmt_f64(s.mean),
                        io::fmt_f64(s.q025),
                        io::fmt_f64(s.q975),
                    ]);
                }
                let step = (r.ppd.len() / ppd_draws.max(1)).max(1);
                for (k, v) in r.ppd.iter().step_by(step).take(ppd_draws).enumerate() {
                    ppd_rows.push(vec![
                        family.name().to_string(),
                        panel.ticker().to_string(),
                        r.fold.to_string(),
                        k.to_string(),
                        io::fmt_f64(*v),
                    ]);
                }
            }
            summary_rows.push(vec![
                family.name().to_string(),
                panel.ticker().to_string(),
                io::fmt_f64(report.hit_rate),
                io::fmt_f64(report.win_rate),
            ]);
            fam_rates.push((report.hit_rate, report.win_rate));
        }
        let k = fam_rates.len() as f64;
        let (mh, mw) = fam_rates.iter().fold((0.0, 0.0), |(a, b), (h, w)| (a + h, b + w));
        summary_rows.push(vec![
            family.name().to_string(),
            "Mean".into(),
            io::fmt_f64(mh / k),
            io::fmt_f64(mw / k),
        ]);
        rates.push(fam_rates);
    }

    let mut written = Vec::new();
    let mut out = |name: &str, header: &[&str], rows: &[Vec<String>]| -> AppResult<()> {
        let p = c.path(name);
        io::write_table(&p, header, rows)?;
        written.push(p);
        Ok(())
    };
    out(
        "eval_folds.csv",
        &["family", "ticker", "fold", "period", "forecast", "forecast_median", "consensus", "actual", "hit", "win"],
        &fold_rows,
    )?;
    out("eval_summary.csv", &["family", "ticker", "hit_rate", "win_rate"], &summary_rows)?;
    out("asymmetry_folds.csv", &["family", "ticker", "fold", "param", "mean", "q025", "q975"], &asym_rows)?;
    if ppd_draws > 0 {
        out("ppd_folds.csv", &["family", "ticker", "fold", "draw", "centered"], &ppd_rows)?;
    }
    let tickers: Vec<&str> = panels.iter().map(ForecastPanel::ticker).collect();
    for (name, pick) in [("hit_rates.txt", 0usize), ("win_rates.txt", 1)] {
        let p = c.path(name);
        io::write_text(&p, &rate_table(&tickers, &families, &rates, pick))?;
        written.push(p);
    }
    Ok(written)
}

/// Percentages with one decimal, one row per entity and a Mean row.
fn rate_table(tickers: &[&str], families: &[Family], rates: &[Vec<(f64, f64)>], pick: usize) -> String {
    let get = |r: &(f64, f64)| if pick == 0 { r.0 } else { r.1 };
    let mut s = format!("{:<10}", "Ticker");
    for f in families {
        s.push_str(&format!("{:>10}", f.name().to_uppercase()));
    }
    s.push('\n');
    for (e, t) in tickers.iter().enumerate() {
        s.push_str(&format!("{t:<10}"));
        for r in rates {
            s.push_str(&format!("{:>10.1}", 100.0 * get(&r[e])));
        }
        s.push('\n');
    }
    s.push_str(&format!("{:<10}", "Mean"));
    for r in rates {
        let m = r.iter().map(get).sum::<f64>() / r.len() as f64;
        s.push_str(&format!("{:>10.1}", 100.0 * m));
    }
    s.push('\n');
    s
}

/// Single-line error report: `error: kind=<kind> exit=<code>: <message>`.
pub fn error_line(e: &AppError) -> String {
    let mut msg = e.to_string();
    let mut src = std::error::Error::source(e);
    while let Some(s) = src {
        let t = s.to_string();
        if !msg.contains(&t) {
            msg.push_str(": ");
            msg.push_str(&t);
        }
        src = s.source();
    }
    format!("error: kind={} exit={}: {}", e.kind(), e.exit_code(), msg.replace('\n', " "))
}

