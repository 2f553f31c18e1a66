//! Numerical oracles shared by the test suites.
//!
//! Nothing here is used by the library code paths. Every routine is written
//! from first principles so that it stays independent of what it checks.

/// Gauss–Kronrod 7/15 nodes on [-1, 1] (positive half, center last).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK.iter().take(7).enumerate() {
        let dx = h * x;
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (val, err) = gk15(f, a, b);
    if err <= tol || depth == 0 || (b - a).abs() < 1e-14 * (1.0 + a.abs()) {
        return val;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive Gauss–Kronrod quadrature of `f` over the finite interval `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> f64 {
    // a coarse initial partition keeps sharp peaks from hiding between nodes
    let pieces = 16;
    let step = (b - a) / pieces as f64;
    (0..pieces)
        .map(|i| {
            let lo = a + step * i as f64;
            let hi = if i + 1 == pieces { b } else { lo + step };
            adapt(&f, lo, hi, abs_tol / pieces as f64, 40)
        })
        .sum()
}

/// Integral of `f` over `[a, +inf)` via the substitution `x = a + t / (1 - t)`.
pub fn integrate_upper<F: Fn(f64) -> f64>(f: F, a: f64, scale: f64, abs_tol: f64) -> f64 {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let x = a + scale * t / (1.0 - t);
        let v = f(x) * scale / ((1.0 - t) * (1.0 - t));
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    integrate(g, 0.0, 1.0, abs_tol)
}

/// Integral of `f` over `(-inf, b]`.
pub fn integrate_lower<F: Fn(f64) -> f64>(f: F, b: f64, scale: f64, abs_tol: f64) -> f64 {
    integrate_upper(|x| f(2.0 * b - x), b, scale, abs_tol)
}

/// Integral over the whole real line, split at `center`.
pub fn integrate_real<F: Fn(f64) -> f64>(f: F, center: f64, scale: f64, abs_tol: f64) -> f64 {
    integrate_lower(&f, center, scale, 0.5 * abs_tol) + integrate_upper(&f, center, scale, 0.5 * abs_tol)
}

/// Root of a monotone function by bisection.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if (hi - lo).abs() < tol {
            return mid;
        }
        let fm = f(mid);
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Point of a uniform grid on `[lo, hi]` (with `n` points) where `f` is largest.
pub fn grid_argmax<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, n: usize) -> (f64, f64) {
    let step = (hi - lo) / (n - 1) as f64;
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..n {
        let x = lo + step * i as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    (best.0, step)
}

/// One-sample Kolmogorov–Smirnov statistic. `samples` need not be sorted.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Asymptotic KS critical value at significance `alpha`.
pub fn ks_critical(n: usize, alpha: f64) -> f64 {
    (-(0.5 * alpha).ln() / 2.0).sqrt() / (n as f64).sqrt()
}

/// Two-sample KS statistic.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    let mut xa = a.to_vec();
    let mut xb = b.to_vec();
    xa.sort_by(|p, q| p.partial_cmp(q).unwrap());
    xb.sort_by(|p, q| p.partial_cmp(q).unwrap());
    let (na, nb) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

fn ln_choose(n: u64, k: u64) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64).ln() - (i as f64).ln()).sum()
}

/// Exact binomial pmf.
pub fn binom_pmf(n: u64, k: u64, p: f64) -> f64 {
    (ln_choose(n, k) + k as f64 * p.ln() + (n - k) as f64 * (1.0 - p).ln()).exp()
}

/// Equal-tailed band `[lo, hi]` (as proportions) holding `level` of Binomial(n, p) mass:
/// `lo` is the (1-level)/2 quantile and `hi` the (1+level)/2 quantile.
pub fn binomial_band(n: u64, p: f64, level: f64) -> (f64, f64) {
    let lower_q = 0.5 * (1.0 - level);
    let upper_q = 0.5 * (1.0 + level);
    let mut cdf = 0.0;
    let mut lo = None;
    let mut hi = n;
    for k in 0..=n {
        cdf += binom_pmf(n, k, p);
        if lo.is_none() && cdf >= lower_q {
            lo = Some(k);
        }
        if cdf >= upper_q - 1e-15 {
            hi = k;
            break;
        }
    }
    (lo.unwrap_or(0) as f64 / n as f64, hi as f64 / n as f64)
}

/// Upper `alpha` critical value of the chi-square distribution (Wilson–Hilferty).
pub fn chi2_critical(df: usize, z_alpha: f64) -> f64 {
    let k = df as f64;
    let t = 2.0 / (9.0 * k);
    k * (1.0 - t + z_alpha * t.sqrt()).powi(3)
}

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Total-variation distance between two histograms with shared edges.
pub fn histogram_tv(a: &[f64], b: &[f64], edges: &[f64]) -> f64 {
    let hist = |xs: &[f64]| {
        let mut h = vec![0.0; edges.len() + 1];
        for &x in xs {
            let k = edges.iter().position(|&e| x < e).unwrap_or(edges.len());
            h[k] += 1.0 / xs.len() as f64;
        }
        h
    };
    let (ha, hb) = (hist(a), hist(b));
    0.5 * ha.iter().zip(&hb).map(|(p, q)| (p - q).abs()).sum::<f64>()
}

/// Empirical quantile (sorted copy, nearest-rank) used to place histogram edges.
pub fn empirical_quantiles(xs: &[f64], probs: &[f64]) -> Vec<f64> {
    let mut s = xs.to_vec();
    s.sort_by(|a, b| a.partial_cmp(b).unwrap());
    probs
        .iter()
        .map(|p| s[((p * s.len() as f64) as usize).min(s.len() - 1)])
        .collect()
}
