//! κ sweeps over the one-parameter families: closed form next to the
//! alternating solver and, optionally, the grid oracle.

use rayon::prelude::*;

use crate::closed_form::{Family, Regime};
use crate::error::{Error, Result};
use crate::oracle::{grid_pmax, GridConfig};
use crate::solver::{alternating_pmax, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: Family,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub steps: usize,
    pub spacing: Spacing,
    pub with_grid: bool,
    pub solver: SolverConfig,
    pub grid: GridConfig,
}

impl SweepConfig {
    pub fn new(family: Family, kappa_min: f64, kappa_max: f64, steps: usize) -> Self {
        Self {
            family,
            kappa_min,
            kappa_max,
            steps,
            spacing: Spacing::Log,
            with_grid: false,
            solver: SolverConfig::default(),
            grid: GridConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub kappa: f64,
    pub p_closed: f64,
    pub p_alt: f64,
    pub p_grid: Option<f64>,
    pub regime: Regime,
    /// From the closed form.
    pub groverian: f64,
}

/// `steps` values from `min` to `max` inclusive.
pub fn kappa_grid(min: f64, max: f64, steps: usize, spacing: Spacing) -> Result<Vec<f64>> {
    if !(min >= 0.0 && min < max && max.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 ≤ kappa-min < kappa-max, got [{min}, {max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    let last = (steps - 1) as f64;
    match spacing {
        Spacing::Linear => Ok((0..steps)
            .map(|i| {
                if i + 1 == steps {
                    max
                } else {
                    min + (max - min) * i as f64 / last
                }
            })
            .collect()),
        Spacing::Log => {
            if min == 0.0 {
                return Err(Error::InvalidArgument(
                    "log spacing needs kappa-min > 0".into(),
                ));
            }
            let (lo, hi) = (min.ln(), max.ln());
            Ok((0..steps)
                .map(|i| match i {
                    0 => min,
                    _ if i + 1 == steps => max,
                    _ => (lo + (hi - lo) * i as f64 / last).exp(),
                })
                .collect())
        }
    }
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let kappas = kappa_grid(cfg.kappa_min, cfg.kappa_max, cfg.steps, cfg.spacing)?;
    cfg.solver.validate()?;
    kappas
        .par_iter()
        .map(|&kappa| {
            let point = cfg.family.pmax(kappa)?;
            let state = cfg.family.state(kappa)?;
            let p_alt = alternating_pmax(&state, &cfg.solver)?.p_max;
            let p_grid = if cfg.with_grid {
                Some(grid_pmax(&state, &cfg.grid)?)
            } else {
                None
            };
            Ok(SweepRow {
                kappa,
                p_closed: point.p_max,
                p_alt,
                p_grid,
                regime: point.regime,
                groverian: (1.0 - point.p_max).max(0.0).sqrt(),
            })
        })
        .collect()
}

/// Largest `|p_closed − p_alt|` and, when present, `|p_closed − p_grid|`.
pub fn max_discrepancies(rows: &[SweepRow]) -> (f64, Option<f64>) {
    let alt = rows
        .iter()
        .map(|r| (r.p_closed - r.p_alt).abs())
        .fold(0.0, f64::max);
    let grid = rows
        .iter()
        .map(|r| r.p_grid.map(|g| (r.p_closed - g).abs()))
        .try_fold(0.0f64, |m, d| d.map(|d| m.max(d)));
    (alt, grid)
}
