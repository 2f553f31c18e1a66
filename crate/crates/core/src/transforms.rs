//! Maps between constrained parameters and the unconstrained sampling space.
//!
//! `to_constrained` returns `log |det ∂x/∂z|`, so a density `p(x)` on the
//! constrained scale becomes `p(x(z)) · exp(logjac)` on the unconstrained one.

use crate::error::{Error, Result};
use crate::special::{ln_sigmoid, logit, sigmoid};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;
#[allow(unused_imports)]
use num_traits::Float;

/// Tolerance on `Σω = 1` accepted by the inverse simplex map.
pub const SIMPLEX_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamTransform {
    /// `x = z` on the real line.
    Identity,
    /// `x = exp(z)` on `(0, ∞)`.
    Log,
    /// `x = sigmoid(z)` on `(0, 1)`.
    Logit,
    /// `x = lo + (hi - lo) sigmoid(z)` on `(lo, hi)`.
    ScaledLogit { lo: f64, hi: f64 },
    /// Simplex of dimension `dim` from `dim - 1` reals, by logistic stick-breaking.
    StickBreaking { dim: usize },
}

impl ParamTransform {
    pub fn constrained_dim(&self) -> usize {
        match *self {
            ParamTransform::StickBreaking { dim } => dim,
            _ => 1,
        }
    }

    pub fn unconstrained_dim(&self) -> usize {
        match *self {
            ParamTransform::StickBreaking { dim } => dim - 1,
            _ => 1,
        }
    }

    /// Writes `x(z)` into `x` and returns the log-Jacobian.
    pub fn constrain_into(&self, z: &[f64], x: &mut [f64]) -> f64 {
        match *self {
            ParamTransform::Identity => {
                x[0] = z[0];
                0.0
            }
            ParamTransform::Log => {
                x[0] = z[0].exp();
                z[0]
            }
            ParamTransform::Logit => {
                x[0] = sigmoid(z[0]);
                ln_sigmoid(z[0]) + ln_sigmoid(-z[0])
            }
            ParamTransform::ScaledLogit { lo, hi } => {
                let w = hi - lo;
                x[0] = (lo + w * sigmoid(z[0])).clamp(lo, hi);
                w.ln() + ln_sigmoid(z[0]) + ln_sigmoid(-z[0])
            }
            ParamTransform::StickBreaking { dim } => {
                let mut rem = 1.0;
                let mut lj = 0.0;
                for k in 0..dim - 1 {
                    let y = z[k] - ((dim - 1 - k) as f64).ln();
                    let v = sigmoid(y);
                    lj += ln_sigmoid(y) + ln_sigmoid(-y) + rem.ln();
                    x[k] = rem * v;
                    rem -= x[k];
                }
                x[dim - 1] = rem;
                lj
            }
        }
    }

    pub fn to_constrained(&self, z: &[f64]) -> Result<(Vec<f64>, f64)> {
        self.check_len(self.unconstrained_dim(), z.len())?;
        let mut x = vec![0.0; self.constrained_dim()];
        let lj = self.constrain_into(z, &mut x);
        Ok((x, lj))
    }

    /// Inverse map; points on the boundary of the domain are rejected.
    pub fn to_unconstrained(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(self.constrained_dim(), x.len())?;
        let mut z = vec![0.0; self.unconstrained_dim()];
        self.unconstrain_into(x, &mut z)?;
        Ok(z)
    }

    pub fn unconstrain_into(&self, x: &[f64], z: &mut [f64]) -> Result<()> {
        match *self {
            ParamTransform::Identity => {
                crate::error::check_finite("x", x[0])?;
                z[0] = x[0];
            }
            ParamTransform::Log => {
                crate::error::check_positive("x", x[0])?;
                z[0] = x[0].ln();
            }
            ParamTransform::Logit => {
                crate::error::check_unit_open("x", x[0])?;
                z[0] = logit(x[0]);
            }
            ParamTransform::ScaledLogit { lo, hi } => {
                if !(x[0] > lo && x[0] < hi) {
                    return Err(Error::domain("x", x[0], "outside the open interval"));
                }
                z[0] = logit((x[0] - lo) / (hi - lo));
            }
            ParamTransform::StickBreaking { dim } => {
                if let Some(&bad) = x.iter().find(|&&v| !(v > 0.0)) {
                    return Err(Error::domain("omega", bad, "simplex components must be positive"));
                }
                let sum: f64 = x.iter().sum();
                if (sum - 1.0).abs() > SIMPLEX_TOL {
                    return Err(Error::domain("omega", sum, "weights must sum to one"));
                }
                // tail[k] = Σ_{j>k} x_j, accumulated from the right
                let mut tail = 0.0;
                for k in (0..dim - 1).rev() {
                    tail += x[k + 1];
                    z[k] = x[k].ln() - tail.ln() + ((dim - 1 - k) as f64).ln();
                }
            }
        }
        Ok(())
    }

    fn check_len(&self, expected: usize, got: usize) -> Result<()> {
        if expected == got {
            Ok(())
        } else {
            Err(Error::Dimension { expected, got })
        }
    }
}

/// One named parameter block.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub name: String,
    pub transform: ParamTransform,
}

/// Concatenation of parameter blocks, laid out in order on both scales.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamLayout {
    blocks: Vec<Block>,
}

impl ParamLayout {
    pub fn new(blocks: Vec<Block>) -> Self {
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn constrained_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.transform.constrained_dim()).sum()
    }

    pub fn unconstrained_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.transform.unconstrained_dim()).sum()
    }

    /// Names of the constrained coordinates; a block of dimension `d > 1`
    /// named `w` expands to `w1..wd`.
    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::new();
        for b in &self.blocks {
            let d = b.transform.constrained_dim();
            if d == 1 {
                out.push(b.name.clone());
            } else {
                out.extend((1..=d).map(|i| format!("{}{}", b.name, i)));
            }
        }
        out
    }

    /// Index ranges of the blocks in the unconstrained vector.
    pub fn unconstrained_ranges(&self) -> Vec<Range<usize>> {
        let mut at = 0;
        self.blocks
            .iter()
            .map(|b| {
                let r = at..at + b.transform.unconstrained_dim();
                at = r.end;
                r
            })
            .collect()
    }

    pub fn constrained_ranges(&self) -> Vec<Range<usize>> {
        let mut at = 0;
        self.blocks
            .iter()
            .map(|b| {
                let r = at..at + b.transform.constrained_dim();
                at = r.end;
                r
            })
            .collect()
    }

    /// Writes `x(z)` into `x`; returns the total log-Jacobian.
    pub fn constrain_into(&self, z: &[f64], x: &mut [f64]) -> f64 {
        let (mut zi, mut xi) = (0, 0);
        let mut lj = 0.0;
        for b in &self.blocks {
            let (du, dc) = (b.transform.unconstrained_dim(), b.transform.constrained_dim());
            lj += b.transform.constrain_into(&z[zi..zi + du], &mut x[xi..xi + dc]);
            zi += du;
            xi += dc;
        }
        lj
    }

    pub fn to_constrained(&self, z: &[f64]) -> Result<(Vec<f64>, f64)> {
        if z.len() != self.unconstrained_dim() {
            return Err(Error::Dimension {
                expected: self.unconstrained_dim(),
                got: z.len(),
            });
        }
        let mut x = vec![0.0; self.constrained_dim()];
        let lj = self.constrain_into(z, &mut x);
        Ok((x, lj))
    }

    pub fn to_unconstrained(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.constrained_dim() {
            return Err(Error::Dimension {
                expected: self.constrained_dim(),
                got: x.len(),
            });
        }
        let mut z = vec![0.0; self.unconstrained_dim()];
        let (mut zi, mut xi) = (0, 0);
        for b in &self.blocks {
            let (du, dc) = (b.transform.unconstrained_dim(), b.transform.constrained_dim());
            b.transform
                .unconstrain_into(&x[xi..xi + dc], &mut z[zi..zi + du])?;
            zi += du;
            xi += dc;
        }
        Ok(z)
    }
}

pub fn to_unconstrained(t: &ParamTransform, x: &[f64]) -> Result<Vec<f64>> {
    t.to_unconstrained(x)
}

pub fn to_constrained(t: &ParamTransform, z: &[f64]) -> Result<(Vec<f64>, f64)> {
    t.to_constrained(z)
}
