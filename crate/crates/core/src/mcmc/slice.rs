use crate::exec::SimRng;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

const MAX_STEPS: usize = 50;
const MAX_SHRINK: usize = 200;

/// One univariate slice-sampling update (stepping out, then shrinkage) of
/// the log density `f` from `x0` with initial width `w`, restricted to
/// `(lo, hi)`.
pub fn slice_sample<F: Fn(f64) -> f64>(
    f: F,
    x0: f64,
    w: f64,
    lo: f64,
    hi: f64,
    rng: &mut SimRng,
) -> f64 {
    let fx0 = f(x0);
    let e: f64 = rng.random::<f64>();
    let level = fx0 + (1.0 - e).ln();
    let u: f64 = rng.random();
    let mut l = x0 - w * u;
    let mut r = l + w;
    let j = (MAX_STEPS as f64 * rng.random::<f64>()) as usize;
    let mut k = MAX_STEPS - 1 - j;
    let mut j = j;
    while j > 0 && l > lo && f(l) > level {
        l -= w;
        j -= 1;
    }
    while k > 0 && r < hi && f(r) > level {
        r += w;
        k -= 1;
    }
    l = l.max(lo);
    r = r.min(hi);
    for _ in 0..MAX_SHRINK {
        let x1 = l + rng.random::<f64>() * (r - l);
        if x1 > lo && x1 < hi && f(x1) > level {
            return x1;
        }
        if x1 < x0 {
            l = x1;
        } else {
            r = x1;
        }
    }
    x0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::rng_from_seed;
    use alloc::vec::Vec;
    use modalcomb_oracles::{ks_critical, ks_statistic};

    #[test]
    fn samples_gamma_density() {
        // Gamma(3, 1) on (0, ∞)
        let mut r = rng_from_seed(8);
        let mut x = 1.0;
        let mut out = Vec::new();
        for i in 0..60_000 {
            x = slice_sample(|v| 2.0 * v.ln() - v, x, 2.0, 0.0, f64::INFINITY, &mut r);
            if i % 6 == 0 {
                out.push(x);
            }
        }
        let cdf = |v: f64| 1.0 - (-v).exp() * (1.0 + v + 0.5 * v * v);
        let d = ks_statistic(&out, cdf);
        assert!(d < ks_critical(out.len(), 0.001), "{d}");
    }

    #[test]
    fn respects_bounds() {
        let mut r = rng_from_seed(9);
        let mut x = 0.5;
        for _ in 0..1000 {
            x = slice_sample(|_| 0.0, x, 10.0, 0.2, 0.9, &mut r);
            assert!(x > 0.2 && x < 0.9);
        }
    }
}
