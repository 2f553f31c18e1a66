//! CSV input and output.
//!
//! Floats are written with 17 significant digits so that every file parses
//! back to the exact values that were written.

use crate::error::{AppError, AppResult};
use modalcomb_core::forecast::ForecastPanel;
use modalcomb_core::mcmc::{mcse, ParamSummary, PosteriorDraws};
use modalcomb_core::model::Family;
use modalcomb_core::simstudy::{SimRow, SimStudyReport};
use std::fs::File;
use std::io::Write;
use std::path::Path;

pub const PANEL_HEADER: [&str; 3] = ["ticker", "period", "actual"];
pub const SUMMARY_HEADER: [&str; 7] = ["param", "mean", "sd", "q025", "q975", "rhat", "ess"];
pub const SIM_HEADER: [&str; 10] = [
    "family", "grid_name", "grid_value", "n_reps", "param", "truth", "bias", "avg_se", "mcse", "cov",
];

pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// Table as read from disk: header plus `(line number, cells)` records.
pub struct Table {
    pub path: std::path::PathBuf,
    pub header: Vec<String>,
    pub rows: Vec<(usize, Vec<String>)>,
}

impl Table {
    pub fn read(path: &Path) -> AppResult<Self> {
        let file = File::open(path).map_err(|e| data_err(path, 0, "", e.to_string()))?;
        let mut rdr = csv::ReaderBuilder::new().has_headers(true).flexible(false).from_reader(file);
        let header: Vec<String> = rdr
            .headers()
            .map_err(|e| data_err(path, 1, "", e.to_string()))?
            .iter()
            .map(|s| s.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line() as usize);
                data_err(path, line, "", e.to_string())
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            rows.push((line, rec.iter().map(|s| s.trim().to_string()).collect()));
        }
        Ok(Self {
            path: path.to_path_buf(),
            header,
            rows,
        })
    }

    pub fn expect_header(&self, expected: &[&str]) -> AppResult<()> {
        if self.header.len() < expected.len() || self.header.iter().zip(expected).any(|(a, b)| a != b) {
            return Err(data_err(
                &self.path,
                1,
                "",
                format!("expected header starting with {}", expected.join(",")),
            ));
        }
        Ok(())
    }

    pub fn f64_at(&self, line: usize, cells: &[String], col: usize) -> AppResult<f64> {
        cells[col]
            .parse::<f64>()
            .map_err(|_| data_err(&self.path, line, &self.header[col], format!("cannot parse '{}' as a number", cells[col])))
    }

    pub fn usize_at(&self, line: usize, cells: &[String], col: usize) -> AppResult<usize> {
        cells[col].parse::<usize>().map_err(|_| {
            data_err(&self.path, line, &self.header[col], format!("cannot parse '{}' as an integer", cells[col]))
        })
    }
}

pub fn data_err(path: &Path, row: usize, column: &str, message: impl Into<String>) -> AppError {
    AppError::Data {
        path: path.to_path_buf(),
        row,
        column: column.to_string(),
        message: message.into(),
    }
}

fn io_err(path: &Path, e: impl Into<std::io::Error>) -> AppError {
    AppError::Io {
        path: path.to_path_buf(),
        source: e.into(),
    }
}

pub fn write_table<S: AsRef<str>>(path: &Path, header: &[S], rows: &[Vec<String>]) -> AppResult<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    w.write_record(header.iter().map(AsRef::as_ref)).map_err(|e| io_err(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))
}

pub fn write_text(path: &Path, text: &str) -> AppResult<()> {
    let mut f = File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| io_err(path, e))
}

/// Reads `ticker,period,actual,f1..fm`; empty forecast cells are missing.
/// Entities keep the order of their first row.
pub fn read_panels(path: &Path) -> AppResult<Vec<ForecastPanel>> {
    let t = Table::read(path)?;
    t.expect_header(&PANEL_HEADER)?;
    let m = t.header.len() - PANEL_HEADER.len();
    if m == 0 {
        return Err(data_err(path, 1, "", "no forecast columns"));
    }
    struct Acc {
        ticker: String,
        first_line: usize,
        periods: Vec<String>,
        y: Vec<f64>,
        rows: Vec<Vec<Option<f64>>>,
    }
    let mut acc: Vec<Acc> = Vec::new();
    for (line, cells) in &t.rows {
        let ticker = &cells[0];
        if ticker.is_empty() {
            return Err(data_err(path, *line, "ticker", "empty ticker"));
        }
        let y = t.f64_at(*line, cells, 2)?;
        let mut x = Vec::with_capacity(m);
        for col in 3..cells.len() {
            x.push(if cells[col].is_empty() { None } else { Some(t.f64_at(*line, cells, col)?) });
        }
        if x.iter().all(Option::is_none) {
            return Err(data_err(path, *line, "", "no observed forecast"));
        }
        let idx = match acc.iter().position(|a| &a.ticker == ticker) {
            Some(i) => i,
            None => {
                acc.push(Acc {
                    ticker: ticker.clone(),
                    first_line: *line,
                    periods: Vec::new(),
                    y: Vec::new(),
                    rows: Vec::new(),
                });
                acc.len() - 1
            }
        };
        let a = &mut acc[idx];
        if a.periods.last().is_some_and(|p| p >= &cells[1]) {
            return Err(data_err(path, *line, "period", format!("periods of {ticker} are not strictly increasing")));
        }
        a.periods.push(cells[1].clone());
        a.y.push(y);
        a.rows.push(x);
    }
    acc.into_iter()
        .map(|a| {
            ForecastPanel::new(a.ticker, a.periods, a.y, a.rows).map_err(|e| data_err(path, a.first_line, "", e.to_string()))
        })
        .collect()
}

pub fn write_panels(path: &Path, panels: &[ForecastPanel]) -> AppResult<()> {
    let m = panels.first().map_or(0, ForecastPanel::m);
    let mut header: Vec<String> = PANEL_HEADER.iter().map(|s| s.to_string()).collect();
    header.extend((1..=m).map(|j| format!("f{j}")));
    let mut rows = Vec::new();
    for p in panels {
        for t in 0..p.len() {
            let mut r = vec![p.ticker().to_string(), p.periods()[t].clone(), fmt_f64(p.actuals()[t])];
            r.extend(p.forecasts(t).iter().map(|v| v.map(fmt_f64).unwrap_or_default()));
            rows.push(r);
        }
    }
    write_table(path, &header, &rows)
}

pub fn write_summary(path: &Path, summary: &[ParamSummary]) -> AppResult<()> {
    let rows: Vec<Vec<String>> = summary
        .iter()
        .map(|s| {
            vec![
                s.name.clone(),
                fmt_f64(s.mean),
                fmt_f64(s.sd),
                fmt_f64(s.q025),
                fmt_f64(s.q975),
                s.rhat.map(fmt_f64).unwrap_or_default(),
                fmt_f64(s.ess),
            ]
        })
        .collect();
    write_table(path, &SUMMARY_HEADER, &rows)
}

pub fn read_summary(path: &Path) -> AppResult<Vec<ParamSummary>> {
    let t = Table::read(path)?;
    t.expect_header(&SUMMARY_HEADER)?;
    t.rows
        .iter()
        .map(|(line, c)| {
            let sd = t.f64_at(*line, c, 2)?;
            let ess = t.f64_at(*line, c, 6)?;
            Ok(ParamSummary {
                name: c[0].clone(),
                mean: t.f64_at(*line, c, 1)?,
                sd,
                q025: t.f64_at(*line, c, 3)?,
                q975: t.f64_at(*line, c, 4)?,
                rhat: if c[5].is_empty() { None } else { Some(t.f64_at(*line, c, 5)?) },
                ess,
                mcse: mcse(sd, ess),
            })
        })
        .collect()
}

/// Draws as `chain,draw,<param...>`.
pub fn write_draws(path: &Path, draws: &PosteriorDraws) -> AppResult<()> {
    let mut header = vec!["chain".to_string(), "draw".to_string()];
    header.extend(draws.names().iter().cloned());
    let per = draws.draws_per_chain();
    let rows: Vec<Vec<String>> = draws
        .rows()
        .enumerate()
        .map(|(i, r)| {
            let mut v = vec![(i / per).to_string(), (i % per).to_string()];
            v.extend(r.iter().map(|&x| fmt_f64(x)));
            v
        })
        .collect();
    write_table(path, &header, &rows)
}

/// Reads a draws file back; acceptance rates are not stored and come back empty.
pub fn read_draws(path: &Path) -> AppResult<PosteriorDraws> {
    let t = Table::read(path)?;
    t.expect_header(&["chain", "draw"])?;
    let names: Vec<String> = t.header[2..].to_vec();
    let mut values = Vec::with_capacity(t.rows.len() * names.len());
    let mut n_chains = 0;
    for (line, c) in &t.rows {
        n_chains = n_chains.max(t.usize_at(*line, c, 0)? + 1);
        for col in 2..c.len() {
            values.push(t.f64_at(*line, c, col)?);
        }
    }
    let per = if n_chains == 0 { 0 } else { t.rows.len() / n_chains };
    PosteriorDraws::new(names, n_chains, per, values, Vec::new()).map_err(|e| data_err(path, 0, "", e.to_string()))
}

pub fn write_sim_reports(path: &Path, reports: &[SimStudyReport]) -> AppResult<()> {
    let mut rows = Vec::new();
    for r in reports {
        for row in &r.rows {
            rows.push(vec![
                r.family.name().to_string(),
                r.grid_name.clone(),
                fmt_f64(r.grid_value),
                r.n_reps.to_string(),
                row.param.clone(),
                fmt_f64(row.truth),
                fmt_f64(row.bias),
                fmt_f64(row.avg_se),
                fmt_f64(row.mcse),
                fmt_f64(row.cov),
            ]);
        }
    }
    write_table(path, &SIM_HEADER, &rows)
}

pub fn read_sim_reports(path: &Path) -> AppResult<Vec<SimStudyReport>> {
    let t = Table::read(path)?;
    t.expect_header(&SIM_HEADER)?;
    let mut out: Vec<SimStudyReport> = Vec::new();
    for (line, c) in &t.rows {
        let family = Family::parse(&c[0]).ok_or_else(|| data_err(path, *line, "family", format!("unknown family '{}'", c[0])))?;
        let grid_value = t.f64_at(*line, c, 2)?;
        let row = SimRow {
            param: c[4].clone(),
            truth: t.f64_at(*line, c, 5)?,
            bias: t.f64_at(*line, c, 6)?,
            avg_se: t.f64_at(*line, c, 7)?,
            mcse: t.f64_at(*line, c, 8)?,
            cov: t.f64_at(*line, c, 9)?,
        };
        match out.last_mut() {
            Some(r) if r.family == family && r.grid_value.to_bits() == grid_value.to_bits() => r.rows.push(row),
            _ => out.push(SimStudyReport {
                family,
                grid_name: c[1].clone(),
                grid_value,
                n_reps: t.usize_at(*line, c, 3)?,
                rows: vec![row],
            }),
        }
    }
    Ok(out)
}

/// Aligned text table: parameter blocks with one line per grid value.
pub fn sim_table(reports: &[SimStudyReport]) -> String {
    let grid = reports.first().map_or("grid", |r| r.grid_name.as_str());
    let mut s = format!(
        "{:<10} {:>6} {:>8} {:>8} {:>8} {:>8}\n",
        "Parameter", grid, "BIAS", "AVG.SE", "MCSE", "COV"
    );
    let params: Vec<&str> = reports.first().map_or(Vec::new(), |r| r.rows.iter().map(|x| x.param.as_str()).collect());
    for p in params {
        for (i, r) in reports.iter().enumerate() {
            if let Some(row) = r.row(p) {
                s.push_str(&format!(
                    "{:<10} {:>6} {:>8.3} {:>8.3} {:>8.3} {:>8.3}\n",
                    if i == 0 { p } else { "" },
                    format!("{}", r.grid_value),
                    row.bias,
                    row.avg_se,
                    row.mcse,
                    row.cov
                ));
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02e23, 0.0, -0.0, f64::MAX, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(1.5), "1.5000000000000000e0");
    }

    #[test]
    fn panel_errors_cite_row_and_column() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.csv");
        std::fs::write(&p, "ticker,period,actual,f1,f2\nA,1,1.0,2.0,\nA,2,x,1.0,1.0\n").unwrap();
        let e = read_panels(&p).unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("row 3") && msg.contains("column actual"), "{msg}");
        assert_eq!(e.exit_code(), 3);
        std::fs::write(&p, "ticker,period,actual,f1,f2\nA,2,1.0,2.0,\nA,1,1.0,1.0,1.0\n").unwrap();
        assert!(read_panels(&p).unwrap_err().to_string().contains("column period"));
        std::fs::write(&p, "ticker,period,actual,f1,f2\nA,1,1.0,,\n").unwrap();
        assert!(read_panels(&p).unwrap_err().to_string().contains("row 2"));
        std::fs::write(&p, "tick,period,actual,f1\n").unwrap();
        assert!(read_panels(&p).is_err());
    }

    #[test]
    fn panels_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("p.csv");
        let cfg = modalcomb_core::forecast::SyntheticPanelConfig {
            entities: 3,
            missing_rate: 0.2,
            ..Default::default()
        };
        let panels: Vec<ForecastPanel> = modalcomb_core::forecast::synthetic_panels(&cfg, 1)
            .unwrap()
            .into_iter()
            .map(|(p, _)| p)
            .collect();
        write_panels(&p, &panels).unwrap();
        assert_eq!(read_panels(&p).unwrap(), panels);
    }
}
