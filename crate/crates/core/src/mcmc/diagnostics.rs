use super::PosteriorDraws;
use crate::special::{column_summary, mean, variance};
use alloc::string::String;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

#[derive(Debug, Clone, PartialEq)]
pub struct ParamSummary {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    pub q025: f64,
    pub q975: f64,
    /// Split-chain potential scale reduction; absent for a single chain.
    pub rhat: Option<f64>,
    pub ess: f64,
    pub mcse: f64,
}

/// Split-chain R-hat over equal-length chains; `None` for fewer than two
/// chains or fewer than four draws per chain.
pub fn rhat(chains: &[Vec<f64>]) -> Option<f64> {
    if chains.len() < 2 {
        return None;
    }
    let n = chains.iter().map(Vec::len).min()? / 2;
    if n < 2 {
        return None;
    }
    let halves: Vec<&[f64]> = chains
        .iter()
        .flat_map(|c| {
            let len = c.len();
            [&c[..n], &c[len - n..]]
        })
        .collect();
    let means: Vec<f64> = halves.iter().map(|h| mean(h)).collect();
    let w = mean(&halves.iter().map(|h| variance(h)).collect::<Vec<_>>());
    let b = n as f64 * variance(&means);
    let nf = n as f64;
    let var_plus = (nf - 1.0) / nf * w + b / nf;
    if w <= 0.0 {
        return Some(if b <= 0.0 { 1.0 } else { f64::INFINITY });
    }
    Some((var_plus / w).sqrt())
}

/// Effective sample size from the multi-chain autocorrelation, summing
/// consecutive pairs of autocorrelations until the first negative pair.
pub fn ess(chains: &[Vec<f64>]) -> f64 {
    let m = chains.len();
    if m == 0 {
        return 0.0;
    }
    let n = chains.iter().map(Vec::len).min().unwrap_or(0);
    if n < 4 {
        return (m * n) as f64;
    }
    let nf = n as f64;
    let centered: Vec<Vec<f64>> = chains
        .iter()
        .map(|c| {
            let mu = mean(&c[..n]);
            c[..n].iter().map(|v| v - mu).collect()
        })
        .collect();
    let autocov = |lag: usize| -> f64 {
        let total: f64 = centered
            .iter()
            .map(|c| c[..n - lag].iter().zip(&c[lag..]).map(|(a, b)| a * b).sum::<f64>() / nf)
            .sum();
        total / m as f64
    };
    let means: Vec<f64> = chains.iter().map(|c| mean(&c[..n])).collect();
    let w = autocov(0) * nf / (nf - 1.0);
    let b_over_n = if m > 1 { variance(&means) } else { 0.0 };
    let var_plus = (nf - 1.0) / nf * w + b_over_n;
    if !(var_plus > 0.0) {
        return (m * n) as f64;
    }
    let rho = |lag: usize| 1.0 - (w - autocov(lag)) / var_plus;
    let mut sum = 0.0;
    let mut lag = 0;
    while lag + 1 < n {
        let pair = rho(lag) + rho(lag + 1);
        if pair < 0.0 {
            break;
        }
        sum += pair;
        lag += 2;
    }
    let tau = (-1.0 + 2.0 * sum).max(1.0 / (m as f64 * nf).log10().max(1.0));
    (m as f64 * nf) / tau
}

/// `sd / √ess`.
pub fn mcse(sd: f64, ess: f64) -> f64 {
    if ess > 0.0 {
        sd / ess.sqrt()
    } else {
        f64::INFINITY
    }
}

/// Per-parameter summary with chain diagnostics.
pub fn summarize(draws: &PosteriorDraws) -> Vec<ParamSummary> {
    (0..draws.n_params())
        .map(|j| {
            let pooled = draws.column(j);
            let (m, sd, q025, q975) = column_summary(&pooled);
            let chains: Vec<Vec<f64>> = (0..draws.n_chains()).map(|c| draws.chain_column(c, j)).collect();
            let e = ess(&chains);
            ParamSummary {
                name: draws.names()[j].clone(),
                mean: m,
                sd,
                q025,
                q975,
                rhat: rhat(&chains),
                ess: e,
                mcse: mcse(sd, e),
            }
        })
        .collect()
}
