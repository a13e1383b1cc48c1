//! Linear scan for the vanishing threshold ε.

use serde::{Deserialize, Serialize};

use crate::error::{AviError, Result};
use crate::points::PointSet;
use crate::sbc::{fit, FitConfig};

/// What a good basis should look like: exactly `num_linear` linear vanishing
/// polynomials, none of degree 2..d_min−1, and at least `num_at_dmin` of
/// degree `d_min`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EpsilonTarget {
    pub num_linear: usize,
    pub d_min: usize,
    pub num_at_dmin: usize,
}

impl EpsilonTarget {
    /// Does a per-degree `(|G_t|, |F_t|)` sequence meet the target?
    pub fn accepts(&self, counts: &[(usize, usize)]) -> bool {
        let g = |t: usize| counts.get(t - 1).map_or(0, |c| c.0);
        if g(1) != self.num_linear {
            return false;
        }
        if self.d_min <= 1 {
            return g(1) >= self.num_at_dmin;
        }
        (2..self.d_min).all(|t| g(t) == 0) && g(self.d_min) >= self.num_at_dmin
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub epsilon: f64,
    pub counts: Vec<(usize, usize)>,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum EpsilonSearch {
    Found {
        epsilon: f64,
        range: (f64, f64),
        trace: Vec<ScanEntry>,
    },
    NotFound {
        trace: Vec<ScanEntry>,
    },
}

impl EpsilonSearch {
    pub fn epsilon(&self) -> Option<f64> {
        match self {
            EpsilonSearch::Found { epsilon, .. } => Some(*epsilon),
            EpsilonSearch::NotFound { .. } => None,
        }
    }

    pub fn trace(&self) -> &[ScanEntry] {
        match self {
            EpsilonSearch::Found { trace, .. } | EpsilonSearch::NotFound { trace } => trace,
        }
    }
}

/// `count` logarithmically spaced values from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) || count == 0 {
        return Err(AviError::InvalidArgument(format!(
            "grid needs 0 < lo <= hi and at least one value, got [{lo}, {hi}] x {count}"
        )));
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect())
}

/// The default grid: 60 log-spaced values over `[1e-4, 1]·mean‖x‖`, with `x`
/// preprocessed as `cfg` prescribes.
pub fn default_grid(x: &PointSet, cfg: &FitConfig) -> Result<Vec<f64>> {
    let mut p = x.clone();
    if cfg.center {
        p = p.centered();
    }
    if cfg.unit_mean_norm {
        p = p.unit_mean_norm();
    }
    let s = p.mean_norm();
    if !(s > 0.0) {
        return Err(AviError::InvalidArgument(
            "points have zero mean norm".into(),
        ));
    }
    log_grid(1e-4 * s, s, 60)
}

/// Fit at every grid value (ascending), up to degree `d_min`, and return the
/// midpoint of the longest run of consecutive accepted values.
pub fn epsilon_search(
    x: &PointSet,
    target: &EpsilonTarget,
    cfg: &FitConfig,
    grid: &[f64],
) -> Result<EpsilonSearch> {
    if grid.is_empty() || grid.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
        return Err(AviError::InvalidArgument(
            "epsilon grid values must be positive".into(),
        ));
    }
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    let cap = target.d_min.max(1);
    let mut trace = Vec::with_capacity(grid.len());
    for &eps in &grid {
        let run_cfg = FitConfig {
            epsilon: eps,
            max_degree: Some(cfg.max_degree.map_or(cap, |m| m.min(cap))),
            ..cfg.clone()
        };
        let counts = fit(x, &run_cfg)?.counts();
        trace.push(ScanEntry {
            epsilon: eps,
            accepted: target.accepts(&counts),
            counts,
        });
    }
    let mut best: Option<(usize, usize)> = None;
    let mut i = 0;
    while i < trace.len() {
        if !trace[i].accepted {
            i += 1;
            continue;
        }
        let start = i;
        while i < trace.len() && trace[i].accepted {
            i += 1;
        }
        if best.is_none_or(|(s, e)| i - start > e - s) {
            best = Some((start, i));
        }
    }
    Ok(match best {
        Some((s, e)) => {
            let range = (trace[s].epsilon, trace[e - 1].epsilon);
            EpsilonSearch::Found {
                epsilon: 0.5 * (range.0 + range.1),
                range,
                trace,
            }
        }
        None => EpsilonSearch::NotFound { trace },
    })
}
