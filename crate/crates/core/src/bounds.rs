//! Executable forms of the `2^{1−n}` lower bound and its consequences:
//! the reduced-overlap inequality, the completely-mixed-reductions
//! criterion for states on the bound, and an empirical witness that no
//! three-qubit pure state has all of its reductions completely mixed.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::random::stream_rng;
use crate::solver::{alternating_pmax, SolverConfig};
use crate::state::{kron, pauli_matrices, PureState, C64};

/// Slack allowed when comparing the two sides of the reduced inequality.
pub const INEQUALITY_SLACK: f64 = 1e-9;

/// `2^{1−n}`, the smallest `P_max` any `n`-qubit pure state can have.
pub fn lower_bound(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::InvalidArgument("lower bound needs n ≥ 1".into()));
    }
    Ok(0.5f64.powi(n as i32 - 1))
}

/// All `m`-element subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < m - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if m <= n {
        go(0, n, m, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

fn qubit_state_check(state: &PureState) -> Result<()> {
    if !state.is_qubits() {
        return Err(Error::Unsupported("qubit states only".into()));
    }
    if !state.is_normalized() {
        return Err(Error::NotNormalized(state.norm_sqr()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedInequality {
    /// `P_max(ψ)`.
    pub lhs: f64,
    /// `2^{−(n−m−1)} · max tr(ρ_S ϱ_1 ⊗ ⋯ ⊗ ϱ_m)`.
    pub rhs: f64,
    /// The reduced product overlap before scaling. Not an entanglement measure.
    pub reduced_overlap: f64,
    pub holds: bool,
}

impl ReducedInequality {
    pub fn slack(&self) -> f64 {
        self.lhs - self.rhs
    }
}

/// `P_max(ψ) ≥ 2^{−(n−m−1)} P_max(ρ_S)` for the reduction onto `subset`.
pub fn check_reduced_inequality(
    state: &PureState,
    subset: &[usize],
    cfg: &SolverConfig,
) -> Result<ReducedInequality> {
    qubit_state_check(state)?;
    let n = state.n_parties();
    let m = subset.len();
    if m < 1 || m >= n {
        return Err(Error::InvalidParties(format!(
            "subset size {m} must lie in 1..{n}"
        )));
    }
    let mut seen = vec![false; n];
    for &k in subset {
        if k >= n || seen[k] {
            return Err(Error::InvalidParties(format!("invalid subset {subset:?}")));
        }
        seen[k] = true;
    }
    let traced: Vec<usize> = (0..n).filter(|&k| !seen[k]).collect();
    let reduced = state.reduce(&traced)?;
    let lhs = alternating_pmax(state, cfg)?.p_max;
    let reduced_overlap = alternating_pmax(&reduced, cfg)?.p_max;
    let rhs = 0.5f64.powi((n - m - 1) as i32) * reduced_overlap;
    Ok(ReducedInequality {
        lhs,
        rhs,
        reduced_overlap,
        holds: lhs >= rhs - INEQUALITY_SLACK,
    })
}

/// Frobenius distance of every `m`-party reduction from `I/2^m`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixednessReport {
    pub order: usize,
    /// `(subset, ‖ρ_S − I/2^m‖_F)` for every subset, lexicographic.
    pub deviations: Vec<(Vec<usize>, f64)>,
    pub max_deviation: f64,
    pub worst_subset: Vec<usize>,
}

pub fn mixedness_report(state: &PureState, m: usize) -> Result<MixednessReport> {
    qubit_state_check(state)?;
    let n = state.n_parties();
    if m < 1 || m >= n {
        return Err(Error::InvalidArgument(format!(
            "order {m} must lie in 1..{n}"
        )));
    }
    let dim = 1usize << m;
    let target = DMatrix::<C64>::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
    let mut deviations = Vec::new();
    for subset in combinations(n, m) {
        let traced: Vec<usize> = (0..n).filter(|k| !subset.contains(k)).collect();
        let red = state.reduce(&traced)?;
        deviations.push((subset, (red.matrix() - &target).norm()));
    }
    let (worst_subset, max_deviation) =
        deviations
            .iter()
            .fold((Vec::new(), f64::NEG_INFINITY), |acc, (s, d)| {
                if *d > acc.1 {
                    (s.clone(), *d)
                } else {
                    acc
                }
            });
    Ok(MixednessReport {
        order: m,
        deviations,
        max_deviation,
        worst_subset,
    })
}

/// `Σ g²` forced by `tr ρ² = 1` for `ρ = (I + g σ⊗σ⊗σ)/8`.
pub const PURITY_SPHERE: f64 = 7.0;

/// Search settings for [`three_qubit_purity_gap`].
#[derive(Debug, Clone, PartialEq)]
pub struct PurityGapConfig {
    pub seed: u64,
    pub restarts: usize,
    pub steps: usize,
    /// Initial step length; halved whenever a step would raise the residual.
    pub step: f64,
    /// Forward-difference increment for the gradient.
    pub fd_step: f64,
}

impl Default for PurityGapConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 50,
            steps: 500,
            step: 0.5,
            fd_step: 1e-7,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PurityGapResult {
    /// Smallest `‖ρ² − ρ‖_F` found.
    pub best_residual: f64,
    /// `g_{abc}` at index `9a + 3b + c`, `(a, b, c) ∈ {x, y, z}³`.
    pub best_g: [f64; 27],
    pub iterations: usize,
    pub seed: u64,
    /// Residual after initialization and after each step, per restart.
    pub trajectories: Vec<Vec<f64>>,
}

/// The 27 three-qubit Pauli strings `σ_a ⊗ σ_b ⊗ σ_c`.
fn pauli_strings() -> Vec<DMatrix<C64>> {
    let p = pauli_matrices();
    let mut out = Vec::with_capacity(27);
    for a in &p {
        for b in &p {
            let ab = kron(a, b);
            for c in &p {
                out.push(kron(&ab, c));
            }
        }
    }
    out
}

/// `ρ(g) = (I + Σ g_{abc} σ_a ⊗ σ_b ⊗ σ_c) / 8`.
pub fn all_mixed_operator(g: &[f64; 27]) -> DMatrix<C64> {
    residual_ops().rho(g)
}

/// `‖ρ(g)² − ρ(g)‖_F`.
pub fn purity_residual(g: &[f64; 27]) -> f64 {
    residual_ops().residual(g)
}

struct ResidualOps {
    strings: Vec<DMatrix<C64>>,
}

fn residual_ops() -> ResidualOps {
    ResidualOps {
        strings: pauli_strings(),
    }
}

impl ResidualOps {
    fn rho(&self, g: &[f64; 27]) -> DMatrix<C64> {
        let mut rho = DMatrix::<C64>::identity(8, 8);
        for (s, &w) in self.strings.iter().zip(g) {
            if w != 0.0 {
                rho += s * C64::new(w, 0.0);
            }
        }
        rho * C64::new(0.125, 0.0)
    }

    fn residual(&self, g: &[f64; 27]) -> f64 {
        let rho = self.rho(g);
        (&rho * &rho - &rho).norm()
    }
}

fn project(g: &mut [f64; 27]) {
    let n = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    let scale = PURITY_SPHERE.sqrt() / n;
    g.iter_mut().for_each(|x| *x *= scale);
}

fn descend(ops: &ResidualOps, cfg: &PurityGapConfig, restart: usize) -> (f64, [f64; 27], Vec<f64>) {
    let mut rng = stream_rng(cfg.seed, restart as u64);
    let mut g = [0.0; 27];
    g.iter_mut().for_each(|x| *x = rng.sample(StandardNormal));
    project(&mut g);
    let mut value = ops.residual(&g);
    let mut step = cfg.step;
    let mut trajectory = Vec::with_capacity(cfg.steps + 1);
    trajectory.push(value);
    for _ in 0..cfg.steps {
        let mut grad = [0.0; 27];
        for i in 0..27 {
            let mut probe = g;
            probe[i] += cfg.fd_step;
            grad[i] = (ops.residual(&probe) - value) / cfg.fd_step;
        }
        let mut trial = g;
        trial
            .iter_mut()
            .zip(&grad)
            .for_each(|(x, d)| *x -= step * d);
        project(&mut trial);
        let next = ops.residual(&trial);
        if next <= value {
            g = trial;
            value = next;
        } else {
            step *= 0.5;
        }
        trajectory.push(value);
    }
    (value, g, trajectory)
}

/// Minimizes `‖ρ(g)² − ρ(g)‖_F` over real `g` with `Σ g² = 7` using seeded
/// random restarts and projected finite-difference descent. A floor bounded
/// away from zero means no pure three-qubit state has all reductions
/// completely mixed.
pub fn three_qubit_purity_gap(cfg: &PurityGapConfig) -> Result<PurityGapResult> {
    if cfg.restarts == 0 {
        return Err(Error::InvalidArgument(
            "at least one restart is required".into(),
        ));
    }
    if !(cfg.step > 0.0 && cfg.fd_step > 0.0) {
        return Err(Error::InvalidArgument("step sizes must be positive".into()));
    }
    let ops = residual_ops();
    let runs: Vec<(f64, [f64; 27], Vec<f64>)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| descend(&ops, cfg, r))
        .collect();
    let best = runs
        .iter()
        .enumerate()
        .fold(0, |b, (i, r)| if r.0 < runs[b].0 { i } else { b });
    Ok(PurityGapResult {
        best_residual: runs[best].0,
        best_g: runs[best].1,
        iterations: cfg.restarts * cfg.steps,
        seed: cfg.seed,
        trajectories: runs.into_iter().map(|r| r.2).collect(),
    })
}
