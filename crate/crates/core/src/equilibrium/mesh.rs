use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::strategy::StrategyAngles;

/// Angles within this distance of a grid level are considered on it.
const ON_GRID: f64 = 1e-9;

/// Discretized strategy space: `n_theta` levels of θ on [0, π], and on every
/// interior level an `n_phi` x `n_alpha` grid of (φ, α) on [0, 2π] with both
/// endpoints. The two poles carry a single strategy each.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MeshSpec {
    n_theta: usize,
    n_phi: usize,
    n_alpha: usize,
}

/// 1-based position in the mesh ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StrategyIndex(u32);

impl StrategyIndex {
    pub fn new(value: u32) -> Self {
        assert!(value >= 1, "strategy indices are 1-based");
        Self(value)
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub(crate) fn from_zero_based(i: usize) -> Self {
        Self(i as u32 + 1)
    }

    pub(crate) fn zero_based(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for StrategyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn level(span: f64, n: usize, k: usize) -> f64 {
    if n == 1 {
        0.0
    } else if k == n - 1 {
        span
    } else {
        span * k as f64 / (n - 1) as f64
    }
}

fn nearest_level(span: f64, n: usize, x: f64) -> Option<usize> {
    if n == 1 {
        return (x.abs() <= ON_GRID).then_some(0);
    }
    let step = span / (n - 1) as f64;
    let k = (x / step).round();
    if k < 0.0 || k > (n - 1) as f64 {
        return None;
    }
    let k = k as usize;
    ((x - level(span, n, k)).abs() <= ON_GRID).then_some(k)
}

impl MeshSpec {
    pub fn new(n_theta: usize, n_phi: usize, n_alpha: usize) -> Result<Self> {
        if n_theta < 3 || n_phi < 1 || n_alpha < 1 {
            return Err(Error::Invalid {
                what: "mesh",
                reason: format!("need n_theta >= 3 and n_phi, n_alpha >= 1, got ({n_theta},{n_phi},{n_alpha})"),
            });
        }
        let n = (n_theta - 2) as u64 * n_phi as u64 * n_alpha as u64 + 2;
        if n > u32::MAX as u64 {
            return Err(Error::Invalid {
                what: "mesh",
                reason: format!("{n} strategies do not fit a u32 index"),
            });
        }
        Ok(Self {
            n_theta,
            n_phi,
            n_alpha,
        })
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn n_alpha(&self) -> usize {
        self.n_alpha
    }

    /// N_S = (N_θ − 2)·N_φ·N_α + 2
    pub fn num_strategies(&self) -> usize {
        (self.n_theta - 2) * self.n_phi * self.n_alpha + 2
    }

    pub fn index_to_angles(&self, idx: StrategyIndex) -> Result<StrategyAngles> {
        let n = self.num_strategies();
        let i = idx.get() as usize;
        if i < 1 || i > n {
            return Err(Error::OutOfRange {
                name: "strategy index",
                value: i as f64,
                min: 1.0,
                max: n as f64,
            });
        }
        Ok(self.angles_at(i - 1))
    }

    /// Zero-based lookup used by the search loops.
    pub(crate) fn angles_at(&self, i: usize) -> StrategyAngles {
        let n = self.num_strategies();
        if i == 0 {
            return StrategyAngles::identity();
        }
        if i == n - 1 {
            return StrategyAngles::flip();
        }
        let j = i - 1;
        let per_level = self.n_phi * self.n_alpha;
        let k_theta = j / per_level + 1;
        let k_phi = (j % per_level) / self.n_alpha;
        let k_alpha = j % self.n_alpha;
        StrategyAngles::new(
            level(TAU, self.n_phi, k_phi),
            level(TAU, self.n_alpha, k_alpha),
            level(PI, self.n_theta, k_theta),
        )
        .expect("mesh levels lie in range")
    }

    /// Inverse of `index_to_angles` for strategies that sit on the mesh.
    pub fn angles_to_index(&self, g: &StrategyAngles) -> Option<StrategyIndex> {
        if g.theta() == 0.0 {
            return (g.phi().abs() <= ON_GRID).then_some(StrategyIndex(1));
        }
        if g.theta() == PI {
            return (g.alpha().abs() <= ON_GRID).then_some(StrategyIndex(self.num_strategies() as u32));
        }
        let k_theta = nearest_level(PI, self.n_theta, g.theta())?;
        if k_theta == 0 || k_theta == self.n_theta - 1 {
            return None;
        }
        let k_phi = nearest_level(TAU, self.n_phi, g.phi())?;
        let k_alpha = nearest_level(TAU, self.n_alpha, g.alpha())?;
        let j = ((k_theta - 1) * self.n_phi + k_phi) * self.n_alpha + k_alpha;
        Some(StrategyIndex(j as u32 + 2))
    }

    pub fn strategies(&self) -> Vec<StrategyAngles> {
        (0..self.num_strategies()).map(|i| self.angles_at(i)).collect()
    }
}

impl FromStr for MeshSpec {
    type Err = Error;

    /// Parses "Nθ,Nφ,Nα".
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        let bad = || Error::Invalid {
            what: "mesh",
            reason: format!("expected `n_theta,n_phi,n_alpha`, got `{s}`"),
        };
        if parts.len() != 3 {
            return Err(bad());
        }
        let mut v = [0usize; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p.parse().map_err(|_| bad())?;
        }
        Self::new(v[0], v[1], v[2])
    }
}

impl fmt::Display for MeshSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.n_theta, self.n_phi, self.n_alpha)
    }
}
