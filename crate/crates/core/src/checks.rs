//! Seeded invariant batteries: agreement of the direct and reduced paths,
//! local-unitary invariance, the `2^{1−n}` bound and its strictness, the
//! reduced-overlap inequality, and monotone ascent.
//!
//! Each battery reports its worst-case slack: the distance between the
//! tolerance and the worst observed value, positive when the invariant holds.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::bounds::{check_reduced_inequality, combinations, lower_bound, mixedness_report};
use crate::error::{Error, Result};
use crate::random::{haar_unitary, random_pure_state, stream_rng};
use crate::solver::{alternating_pmax, pmax_via_reduced, PmaxReport, SolverConfig, ASCENT_SLACK};
use crate::state::PureState;

/// `|direct − reduced(k)|` bound.
pub const PATH_AGREEMENT_TOL: f64 = 1e-8;
/// `|P_max(ψ) − P_max(Uψ)|` bound.
pub const LU_TOL: f64 = 1e-8;
/// Slack below `2^{1−n}` tolerated on every sample.
pub const LOWER_BOUND_SLACK: f64 = 1e-9;
/// Margin above `2^{1−n}` required for `n ≥ 3`.
pub const STRICT_MARGIN: f64 = 1e-6;
/// Both reduction orders below this count as completely mixed.
pub const MIXED_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Bounds,
    Lu,
    Theorem1,
    All,
}

impl Suite {
    /// Sample count used when none is given.
    pub fn default_samples(self) -> usize {
        match self {
            Suite::Bounds => 100,
            Suite::Lu => 25,
            Suite::Theorem1 | Suite::All => 50,
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bounds" => Ok(Suite::Bounds),
            "lu" => Ok(Suite::Lu),
            "theorem1" => Ok(Suite::Theorem1),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidArgument(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckConfig {
    pub seed: u64,
    pub samples: usize,
    pub solver: SolverConfig,
}

impl CheckConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        Self {
            seed,
            samples,
            solver: SolverConfig {
                seed,
                ..SolverConfig::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvariantOutcome {
    pub name: String,
    pub passed: bool,
    pub worst_slack: f64,
    pub detail: String,
}

impl fmt::Display for InvariantOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: worst slack {:.6e} ({})",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst_slack,
            self.detail
        )
    }
}

// stream ids keep each battery's samples independent of the others
const STREAM_THEOREM1: u64 = 1 << 40;
const STREAM_LU: u64 = 2 << 40;
const STREAM_BOUNDS: u64 = 3 << 40;
const STREAM_INEQUALITY: u64 = 4 << 40;

/// Sample `i` of `n` qubits for a battery.
pub fn sample_state(seed: u64, battery: u64, n: usize, i: usize) -> PureState {
    let mut rng = stream_rng(seed, battery + ((n as u64) << 24) + i as u64);
    random_pure_state(&vec![2; n], &mut rng).expect("qubit dims are valid")
}

fn monotone_outcome(name: &str, reports: &[PmaxReport]) -> InvariantOutcome {
    let worst = reports
        .iter()
        .map(PmaxReport::worst_descent)
        .fold(f64::NEG_INFINITY, f64::max);
    let count: usize = reports.iter().map(|r| r.trajectories.len()).sum();
    InvariantOutcome {
        name: name.into(),
        passed: worst <= ASCENT_SLACK,
        worst_slack: ASCENT_SLACK - worst.max(0.0),
        detail: format!(
            "{count} trajectories, worst decrease {:.3e}",
            worst.max(0.0)
        ),
    }
}

/// Direct path against the reduced path for every traced party.
pub fn theorem1_battery(cfg: &CheckConfig, ns: &[usize]) -> Result<Vec<InvariantOutcome>> {
    let mut out = Vec::new();
    let mut all_reports = Vec::new();
    for &n in ns {
        let results: Vec<(f64, Vec<PmaxReport>)> = (0..cfg.samples)
            .into_par_iter()
            .map(|i| {
                let s = sample_state(cfg.seed, STREAM_THEOREM1, n, i);
                let direct = alternating_pmax(&s, &cfg.solver)?;
                let mut worst: f64 = 0.0;
                let mut reports = vec![];
                for k in 0..n {
                    let red = pmax_via_reduced(&s, k, &cfg.solver)?;
                    worst = worst.max((direct.p_max - red.p_max).abs());
                    reports.push(red);
                }
                reports.push(direct);
                Ok((worst, reports))
            })
            .collect::<Result<_>>()?;
        let worst = results.iter().map(|r| r.0).fold(0.0, f64::max);
        out.push(InvariantOutcome {
            name: format!("direct vs reduced path agreement n={n}"),
            passed: worst < PATH_AGREEMENT_TOL,
            worst_slack: PATH_AGREEMENT_TOL - worst,
            detail: format!(
                "{} states × {n} traced parties, max |direct − reduced| {worst:.3e}",
                cfg.samples
            ),
        });
        all_reports.extend(results.into_iter().flat_map(|r| r.1));
    }
    out.push(monotone_outcome("monotone ascent", &all_reports));
    Ok(out)
}

/// `P_max` invariance under `U_1 ⊗ U_2 ⊗ U_3`.
pub fn lu_battery(cfg: &CheckConfig) -> Result<Vec<InvariantOutcome>> {
    let n = 3;
    let diffs: Vec<f64> = (0..cfg.samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_state(cfg.seed, STREAM_LU, n, i);
            let mut rng = stream_rng(cfg.seed, STREAM_LU + (1 << 36) + i as u64);
            let mut t = s.clone();
            for k in 0..n {
                t = t.apply_local(k, &haar_unitary(2, &mut rng))?;
            }
            let a = alternating_pmax(&s, &cfg.solver)?.p_max;
            let b = alternating_pmax(&t, &cfg.solver)?.p_max;
            Ok((a - b).abs())
        })
        .collect::<Result<_>>()?;
    let worst = diffs.iter().copied().fold(0.0, f64::max);
    Ok(vec![InvariantOutcome {
        name: "local-unitary invariance n=3".into(),
        passed: worst < LU_TOL,
        worst_slack: LU_TOL - worst,
        detail: format!("{} states, max |ΔP_max| {worst:.3e}", cfg.samples),
    }])
}

/// `P_max ≥ 2^{1−n}` on every sample, strictly for `n ≥ 3`.
pub fn lower_bound_battery(cfg: &CheckConfig, ns: &[usize]) -> Result<Vec<InvariantOutcome>> {
    let mut out = Vec::new();
    for &n in ns {
        let bound = lower_bound(n)?;
        let values: Vec<f64> = (0..cfg.samples)
            .into_par_iter()
            .map(|i| {
                Ok(
                    alternating_pmax(&sample_state(cfg.seed, STREAM_BOUNDS, n, i), &cfg.solver)?
                        .p_max,
                )
            })
            .collect::<Result<_>>()?;
        let min_gap = values
            .iter()
            .map(|v| v - bound)
            .fold(f64::INFINITY, f64::min);
        out.push(InvariantOutcome {
            name: format!("lower bound n={n}"),
            passed: min_gap >= -LOWER_BOUND_SLACK,
            worst_slack: min_gap + LOWER_BOUND_SLACK,
            detail: format!(
                "{} states, min P_max − 2^(1−n) = {min_gap:.6e}",
                cfg.samples
            ),
        });
        if n >= 3 {
            out.push(InvariantOutcome {
                name: format!("strictly above bound n={n}"),
                passed: min_gap > STRICT_MARGIN,
                worst_slack: min_gap - STRICT_MARGIN,
                detail: format!("margin required {STRICT_MARGIN:e}"),
            });
        }
    }
    Ok(out)
}

/// Reduced-overlap inequality on every subset of every sample.
pub fn reduced_inequality_battery(
    cfg: &CheckConfig,
    ns: &[usize],
) -> Result<Vec<InvariantOutcome>> {
    let mut out = Vec::new();
    for &n in ns {
        let slacks: Vec<f64> = (0..cfg.samples)
            .into_par_iter()
            .map(|i| {
                let s = sample_state(cfg.seed, STREAM_INEQUALITY, n, i);
                let mut worst = f64::INFINITY;
                for m in 1..n {
                    for subset in combinations(n, m) {
                        worst =
                            worst.min(check_reduced_inequality(&s, &subset, &cfg.solver)?.slack());
                    }
                }
                Ok(worst)
            })
            .collect::<Result<_>>()?;
        let worst = slacks.iter().copied().fold(f64::INFINITY, f64::min);
        out.push(InvariantOutcome {
            name: format!("reduced-overlap inequality n={n}"),
            passed: worst >= -crate::bounds::INEQUALITY_SLACK,
            worst_slack: worst + crate::bounds::INEQUALITY_SLACK,
            detail: format!(
                "{} states, all subsets, min lhs − rhs = {worst:.6e}",
                cfg.samples
            ),
        });
    }
    Ok(out)
}

/// No sampled three-qubit state has both its one- and two-party reductions
/// completely mixed.
pub fn mixedness_battery(cfg: &CheckConfig) -> Result<Vec<InvariantOutcome>> {
    let mut closest = f64::INFINITY;
    for i in 0..cfg.samples {
        let s = sample_state(cfg.seed, STREAM_BOUNDS, 3, i);
        let d1 = mixedness_report(&s, 1)?.max_deviation;
        let d2 = mixedness_report(&s, 2)?.max_deviation;
        closest = closest.min(d1.max(d2));
    }
    Ok(vec![InvariantOutcome {
        name: "no all-mixed three-qubit state".into(),
        passed: closest >= MIXED_TOL,
        worst_slack: closest - MIXED_TOL,
        detail: format!(
            "{} states, smallest max(dev₁, dev₂) = {closest:.6e}",
            cfg.samples
        ),
    }])
}

pub fn run_suite(suite: Suite, cfg: &CheckConfig) -> Result<Vec<InvariantOutcome>> {
    cfg.solver.validate()?;
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let mut out = Vec::new();
    if matches!(suite, Suite::Bounds | Suite::All) {
        out.extend(lower_bound_battery(cfg, &[2, 3, 4, 5])?);
        let ineq = CheckConfig {
            samples: cfg.samples.min(50),
            ..cfg.clone()
        };
        out.extend(reduced_inequality_battery(&ineq, &[3, 4])?);
        out.extend(mixedness_battery(cfg)?);
    }
    if matches!(suite, Suite::Lu | Suite::All) {
        out.extend(lu_battery(cfg)?);
    }
    if matches!(suite, Suite::Theorem1 | Suite::All) {
        out.extend(theorem1_battery(cfg, &[3, 4])?);
    }
    Ok(out)
}
