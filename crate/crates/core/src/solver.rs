//! Maximal product-state overlap by alternating local eigen-updates.
//!
//! Every local update is linear: with all parties but `k` fixed, the overlap
//! is `tr(M_k ϱ_k)` for an effective `d_k × d_k` Hermitian matrix `M_k`, so
//! the best `ϱ_k` is the projector onto its top eigenvector. For a pure
//! input `M_k = |χ⟩⟨χ|` with `χ = ⟨q_1 … q̂_k … q_n|ψ⟩` and the update is just
//! `q_k = χ/‖χ‖`. The reduced path traces out one party first and runs the
//! same ascent on the mixed `(n−1)`-party operator; both paths share the
//! same maximum for pure inputs.
//!
//! Ascent only finds local maxima, so each solve runs several starts and
//! keeps the best.

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::random::{random_unit_vector, stream_rng};
use crate::state::{
    hermiticity_defect, strides, subset_offsets, DensityOperator, ProductAssignment, PureState, C64,
};

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Largest `|A − A†|` entry accepted by [`top_eigen_hermitian`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Slack allowed for a decreasing step in an ascent trajectory.
pub const ASCENT_SLACK: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Ascent on the pure state itself.
    Direct,
    /// Ascent on the reduced operator with the given party (0-based) traced out.
    Reduced(usize),
    /// Direct for pure inputs.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Stop a start once the overlap changes by less than this over a sweep.
    pub tol: f64,
    /// Sweep budget per start.
    pub max_iter: usize,
    pub starts: usize,
    pub seed: u64,
    pub method: Method,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 1000,
            starts: 24,
            seed: 0,
            method: Method::Auto,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.starts == 0 {
            return Err(Error::InvalidArgument("starts must be at least 1".into()));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of a multi-start solve.
#[derive(Debug, Clone, PartialEq)]
pub struct PmaxReport {
    pub p_max: f64,
    /// `√(1 − p_max)`.
    pub groverian: f64,
    pub best_assignment: ProductAssignment,
    /// False only when no start met the tolerance.
    pub converged: bool,
    /// Sweeps used by the reporting start.
    pub iterations_used: usize,
    pub best_start: usize,
    pub per_start_values: Vec<f64>,
    /// Overlap after initialization and after every sweep, per start.
    pub trajectories: Vec<Vec<f64>>,
    /// Set when the input was a mixed operator: the value is then a maximal
    /// product overlap, not an entanglement measure.
    pub not_a_measure: bool,
}

impl PmaxReport {
    /// Worst decrease between consecutive recorded overlaps (≤ 0 means none).
    pub fn worst_descent(&self) -> f64 {
        self.trajectories
            .iter()
            .flat_map(|t| t.windows(2).map(|w| w[0] - w[1]))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_monotone(&self) -> bool {
        self.worst_descent() <= ASCENT_SLACK
    }
}

/// Input to [`alternating_pmax`].
#[derive(Debug, Clone, Copy)]
pub enum Target<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityOperator),
}

impl<'a> From<&'a PureState> for Target<'a> {
    fn from(s: &'a PureState) -> Self {
        Target::Pure(s)
    }
}

impl<'a> From<&'a DensityOperator> for Target<'a> {
    fn from(r: &'a DensityOperator) -> Self {
        Target::Mixed(r)
    }
}

/// `G = √(1 − P_max)`.
pub fn groverian_measure(p_max: f64) -> Result<f64> {
    if !(p_max > 0.0 && p_max <= 1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "p_max must lie in (0, 1], got {p_max}"
        )));
    }
    Ok((1.0 - p_max).max(0.0).sqrt())
}

/// `½(tr A + √((tr A)² − 4 det A))` for a 2×2 Hermitian `A`.
pub fn radical_top_eigenvalue(a: &DMatrix<C64>) -> f64 {
    assert!(a.nrows() == 2 && a.ncols() == 2, "2x2 matrix expected");
    let tr = a[(0, 0)].re + a[(1, 1)].re;
    let det = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).re;
    0.5 * (tr + (tr * tr - 4.0 * det).max(0.0).sqrt())
}

/// Rotates `v` so its first non-negligible component is real and positive.
fn fix_phase(v: &mut [C64]) {
    let scale = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if let Some(i) = v.iter().position(|z| z.norm() > 1e-12 * scale) {
        let z = v[i];
        let phase = z.conj() / z.norm();
        v.iter_mut().for_each(|x| *x *= phase);
        v[i] = C64::new(z.norm(), 0.0);
    }
}

fn top_eigen_2x2(a: &DMatrix<C64>) -> (f64, Vec<C64>) {
    let (p, d) = (a[(0, 0)].re, a[(1, 1)].re);
    let c = 0.5 * (a[(0, 1)] + a[(1, 0)].conj());
    let gap = ((p - d) * (p - d) + 4.0 * c.norm_sqr()).sqrt();
    let lambda = 0.5 * (p + d + gap);
    let scale = p.abs().max(d.abs()).max(c.norm());
    let mut v = if c.norm() <= 1e-15 * scale || scale == 0.0 {
        if p >= d {
            vec![ONE, ZERO]
        } else {
            vec![ZERO, ONE]
        }
    } else {
        // Two algebraically equivalent kernels of (A − λ); keep the longer one.
        let u = [c, C64::new(lambda - p, 0.0)];
        let w = [C64::new(lambda - d, 0.0), c.conj()];
        let pick = if u[0].norm_sqr() + u[1].norm_sqr() >= w[0].norm_sqr() + w[1].norm_sqr() {
            u
        } else {
            w
        };
        let n = (pick[0].norm_sqr() + pick[1].norm_sqr()).sqrt();
        vec![pick[0] / n, pick[1] / n]
    };
    fix_phase(&mut v);
    (lambda, v)
}

fn top_eigen_general(a: &DMatrix<C64>) -> (f64, Vec<C64>) {
    let eig = SymmetricEigen::new(a.clone());
    let mut best = 0;
    for i in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[i] > eig.eigenvalues[best] {
            best = i;
        }
    }
    let mut v: Vec<C64> = eig.eigenvectors.column(best).iter().copied().collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= n);
    fix_phase(&mut v);
    (eig.eigenvalues[best], v)
}

/// Largest eigenvalue and a unit eigenvector of a Hermitian matrix. The
/// eigenvector's first non-negligible component is real and positive.
/// 2×2 inputs use the closed-form radical.
pub fn top_eigen_hermitian(a: &DMatrix<C64>) -> Result<(f64, Vec<C64>)> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} is not square",
            a.nrows(),
            a.ncols()
        )));
    }
    let defect = hermiticity_defect(a);
    if defect.is_nan() || defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(top_eigen_unchecked(a))
}

/// General eigen-solver path, bypassing the 2×2 closed form.
pub fn top_eigen_dense(a: &DMatrix<C64>) -> Result<(f64, Vec<C64>)> {
    let defect = hermiticity_defect(a);
    if defect.is_nan() || defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(top_eigen_general(a))
}

fn top_eigen_unchecked(a: &DMatrix<C64>) -> (f64, Vec<C64>) {
    if a.nrows() == 2 {
        top_eigen_2x2(a)
    } else {
        top_eigen_general(a)
    }
}

/// Kronecker product of all local vectors except `site`, in party order.
fn others_product(locals: &[Vec<C64>], site: usize) -> Vec<C64> {
    let mut w = vec![ONE];
    for (j, q) in locals.iter().enumerate() {
        if j == site {
            continue;
        }
        let mut next = Vec::with_capacity(w.len() * q.len());
        for a in &w {
            for b in q {
                next.push(a * b);
            }
        }
        w = next;
    }
    w
}

/// Index layout reused across sweeps: per site, the offsets of the other
/// parties' multi-indices and the site's own stride.
struct Layout {
    dims: Vec<usize>,
    rest_offsets: Vec<Vec<usize>>,
    strides: Vec<usize>,
}

impl Layout {
    fn new(dims: &[usize]) -> Self {
        let n = dims.len();
        let rest_offsets = (0..n)
            .map(|k| {
                let rest: Vec<usize> = (0..n).filter(|&j| j != k).collect();
                subset_offsets(dims, &rest)
            })
            .collect();
        Self {
            dims: dims.to_vec(),
            rest_offsets,
            strides: strides(dims),
        }
    }
}

fn local_matrix(
    rho: &DMatrix<C64>,
    layout: &Layout,
    locals: &[Vec<C64>],
    site: usize,
) -> DMatrix<C64> {
    let w = others_product(locals, site);
    let off = &layout.rest_offsets[site];
    let st = layout.strides[site];
    let d = layout.dims[site];
    let mut m = DMatrix::from_element(d, d, ZERO);
    for a in 0..d {
        for b in a..d {
            let mut acc = ZERO;
            for (r, &ro) in off.iter().enumerate() {
                let wr = w[r].conj();
                if wr == ZERO {
                    continue;
                }
                let row = ro + a * st;
                let mut inner = ZERO;
                for (s, &so) in off.iter().enumerate() {
                    inner += rho[(row, so + b * st)] * w[s];
                }
                acc += wr * inner;
            }
            m[(a, b)] = acc;
            m[(b, a)] = acc.conj();
        }
        m[(a, a)].im = 0.0;
    }
    m
}

/// `M_k = tr_{j≠k}(ρ · ⊗_{j≠k} ϱ_j ⊗ I_k)`; the entry of `assignment` at
/// `site` is ignored.
pub fn effective_local_matrix(
    rho: &DensityOperator,
    assignment: &ProductAssignment,
    site: usize,
) -> Result<DMatrix<C64>> {
    if site >= rho.n_parties() {
        return Err(Error::InvalidParties(format!("site {site} out of range")));
    }
    if assignment.dims() != rho.dims() {
        return Err(Error::DimensionMismatch(format!(
            "assignment dims {:?} vs operator dims {:?}",
            assignment.dims(),
            rho.dims()
        )));
    }
    Ok(local_matrix(
        rho.matrix(),
        &Layout::new(rho.dims()),
        assignment.locals(),
        site,
    ))
}

/// `χ = ⟨q_1 … q̂_k … q_n|ψ⟩`.
fn contract_except(amps: &[C64], layout: &Layout, locals: &[Vec<C64>], site: usize) -> Vec<C64> {
    let w = others_product(locals, site);
    let off = &layout.rest_offsets[site];
    let st = layout.strides[site];
    (0..layout.dims[site])
        .map(|i| {
            off.iter()
                .zip(&w)
                .map(|(&o, q)| q.conj() * amps[o + i * st])
                .sum()
        })
        .collect()
}

/// Amplitude overlap `|⟨q|ψ⟩|²`.
fn pure_overlap(amps: &[C64], locals: &[Vec<C64>]) -> f64 {
    let v = ProductAssignment::from_parts_unchecked(locals.to_vec()).product_vector();
    v.iter()
        .zip(amps)
        .map(|(q, a)| q.conj() * a)
        .sum::<C64>()
        .norm_sqr()
}

fn mixed_overlap(rho: &DMatrix<C64>, locals: &[Vec<C64>]) -> f64 {
    let v = ProductAssignment::from_parts_unchecked(locals.to_vec()).product_vector();
    let mut acc = ZERO;
    for (r, vr) in v.iter().enumerate() {
        if *vr == ZERO {
            continue;
        }
        let row: C64 = v.iter().enumerate().map(|(c, vc)| rho[(r, c)] * vc).sum();
        acc += vr.conj() * row;
    }
    acc.re
}

enum Problem<'a> {
    Pure(&'a [C64]),
    Mixed(&'a DMatrix<C64>),
}

impl Problem<'_> {
    fn overlap(&self, locals: &[Vec<C64>]) -> f64 {
        match self {
            Problem::Pure(a) => pure_overlap(a, locals),
            Problem::Mixed(r) => mixed_overlap(r, locals),
        }
    }

    /// Updates one site in place; returns the overlap afterwards.
    fn update(&self, layout: &Layout, locals: &mut [Vec<C64>], site: usize) -> f64 {
        match self {
            Problem::Pure(amps) => {
                let chi = contract_except(amps, layout, locals, site);
                let n2: f64 = chi.iter().map(|z| z.norm_sqr()).sum();
                if n2 > 0.0 {
                    let n = n2.sqrt();
                    locals[site] = chi.into_iter().map(|z| z / n).collect();
                }
                n2
            }
            Problem::Mixed(rho) => {
                let m = local_matrix(rho, layout, locals, site);
                let (value, v) = top_eigen_unchecked(&m);
                locals[site] = v;
                value
            }
        }
    }
}

struct StartOutcome {
    locals: Vec<Vec<C64>>,
    trajectory: Vec<f64>,
    converged: bool,
}

fn initial_locals(dims: &[usize], start: usize, basis_starts: usize, seed: u64) -> Vec<Vec<C64>> {
    if start < basis_starts {
        let mut rem = start;
        let mut digits = vec![0; dims.len()];
        for k in (0..dims.len()).rev() {
            digits[k] = rem % dims[k];
            rem /= dims[k];
        }
        dims.iter()
            .zip(&digits)
            .map(|(&d, &i)| (0..d).map(|j| if j == i { ONE } else { ZERO }).collect())
            .collect()
    } else {
        let mut rng = stream_rng(seed, start as u64);
        dims.iter()
            .map(|&d| random_unit_vector(d, &mut rng))
            .collect()
    }
}

/// Number of leading starts seeded from computational-basis assignments.
pub fn basis_start_count(dims: &[usize], starts: usize) -> usize {
    let total = dims
        .iter()
        .try_fold(1usize, |a, &d| a.checked_mul(d))
        .unwrap_or(usize::MAX);
    total.min(starts / 2)
}

fn run_start(
    problem: &Problem,
    layout: &Layout,
    cfg: &SolverConfig,
    start: usize,
    basis: usize,
) -> StartOutcome {
    let n = layout.dims.len();
    let mut locals = initial_locals(&layout.dims, start, basis, cfg.seed);
    let mut value = problem.overlap(&locals);
    let mut trajectory = vec![value];
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let mut next = value;
        for site in 0..n {
            next = problem.update(layout, &mut locals, site);
        }
        trajectory.push(next);
        let delta = (next - value).abs();
        value = next;
        if delta < cfg.tol {
            converged = true;
            break;
        }
    }
    StartOutcome {
        locals,
        trajectory,
        converged,
    }
}

fn solve(
    problem: Problem,
    dims: &[usize],
    cfg: &SolverConfig,
    not_a_measure: bool,
) -> Result<PmaxReport> {
    cfg.validate()?;
    let layout = Layout::new(dims);
    let basis = basis_start_count(dims, cfg.starts);
    let outcomes: Vec<StartOutcome> = (0..cfg.starts)
        .into_par_iter()
        .map(|s| run_start(&problem, &layout, cfg, s, basis))
        .collect();

    let per_start_values: Vec<f64> = outcomes
        .iter()
        .map(|o| *o.trajectory.last().expect("trajectory is never empty"))
        .collect();
    let top = per_start_values
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let best_start = per_start_values
        .iter()
        .position(|&v| v >= top - cfg.tol)
        .expect("at least one start");
    let best = &outcomes[best_start];
    let p_max = per_start_values[best_start].min(1.0);
    Ok(PmaxReport {
        p_max,
        groverian: (1.0 - p_max).max(0.0).sqrt(),
        best_assignment: ProductAssignment::from_parts_unchecked(
            best.locals
                .iter()
                .cloned()
                .map(|mut q| {
                    fix_phase(&mut q);
                    q
                })
                .collect(),
        ),
        converged: outcomes.iter().any(|o| o.converged),
        iterations_used: best.trajectory.len() - 1,
        best_start,
        per_start_values,
        trajectories: outcomes.into_iter().map(|o| o.trajectory).collect(),
        not_a_measure,
    })
}

/// Multi-start alternating ascent of `tr(ρ ϱ_1 ⊗ ⋯ ⊗ ϱ_n)`.
///
/// Pure inputs use the `χ`-update on the amplitudes. Mixed inputs use the
/// top eigenvector of the effective local matrix and the report is flagged
/// [`PmaxReport::not_a_measure`].
pub fn alternating_pmax<'a>(
    input: impl Into<Target<'a>>,
    cfg: &SolverConfig,
) -> Result<PmaxReport> {
    match input.into() {
        Target::Pure(state) => {
            if !state.is_normalized() {
                return Err(Error::NotNormalized(state.norm_sqr()));
            }
            solve(Problem::Pure(state.amps()), state.dims(), cfg, false)
        }
        Target::Mixed(rho) => solve(Problem::Mixed(rho.matrix()), rho.dims(), cfg, true),
    }
}

/// `P_max` of a pure state computed from its reduction with `site` traced
/// out. The returned assignment covers all `n` parties: the traced party's
/// local state is recovered as `χ/‖χ‖`.
pub fn pmax_via_reduced(state: &PureState, site: usize, cfg: &SolverConfig) -> Result<PmaxReport> {
    let n = state.n_parties();
    if n < 2 {
        return Err(Error::InvalidParties(
            "need at least two parties to trace one out".into(),
        ));
    }
    if site >= n {
        return Err(Error::InvalidParties(format!(
            "site {site} out of range for {n} parties"
        )));
    }
    let reduced = state.reduce(&[site])?;
    let mut report = solve(Problem::Mixed(reduced.matrix()), reduced.dims(), cfg, false)?;

    let mut locals: Vec<Vec<C64>> = report.best_assignment.locals().to_vec();
    let d = state.dims()[site];
    locals.insert(site, vec![ZERO; d]);
    let layout = Layout::new(state.dims());
    let chi = contract_except(state.amps(), &layout, &locals, site);
    let norm = chi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    locals[site] = if norm > 0.0 {
        let mut q: Vec<C64> = chi.into_iter().map(|z| z / norm).collect();
        fix_phase(&mut q);
        q
    } else {
        (0..d).map(|j| if j == 0 { ONE } else { ZERO }).collect()
    };
    report.best_assignment = ProductAssignment::from_parts_unchecked(locals);
    Ok(report)
}

/// Dispatches on [`SolverConfig::method`].
pub fn pmax(state: &PureState, cfg: &SolverConfig) -> Result<PmaxReport> {
    match cfg.method {
        Method::Direct | Method::Auto => alternating_pmax(state, cfg),
        Method::Reduced(k) => pmax_via_reduced(state, k, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::random_hermitian;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn m2(e: [f64; 4]) -> DMatrix<C64> {
        DMatrix::from_row_slice(2, 2, &[c(e[0]), c(e[1]), c(e[2]), c(e[3])])
    }

    fn bell() -> PureState {
        PureState::from_real(vec![2, 2], &[1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    #[test]
    fn top_eigen_examples() {
        let (v, _) = top_eigen_hermitian(&m2([1.0, 0.0, 0.0, 1.0])).unwrap();
        assert!((v - 1.0).abs() < 1e-15);

        let (v, x) = top_eigen_hermitian(&m2([1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert!((x[0] - ONE).norm() < 1e-15 && x[1].norm() < 1e-15);

        let (v, x) = top_eigen_hermitian(&m2([0.5, 0.5, 0.5, 0.5])).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        let h = 1.0 / 2f64.sqrt();
        assert!((x[0] - c(h)).norm() < 1e-15 && (x[1] - c(h)).norm() < 1e-15);
    }

    #[test]
    fn top_eigen_rejects_non_hermitian() {
        assert!(matches!(
            top_eigen_hermitian(&m2([1.0, 1.0, 0.0, 1.0])),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn fast_path_matches_general_solver() {
        let mut rng = stream_rng(11, 0);
        for _ in 0..200 {
            let a = random_hermitian(2, &mut rng);
            let (v1, x1) = top_eigen_hermitian(&a).unwrap();
            let (v2, x2) = top_eigen_dense(&a).unwrap();
            assert!((v1 - v2).abs() < 1e-12);
            // same phase convention, so the vectors agree up to rounding
            let d: f64 = x1.iter().zip(&x2).map(|(p, q)| (p - q).norm()).sum();
            assert!(d < 1e-9, "{x1:?} vs {x2:?}");
        }
    }

    #[test]
    fn effective_matrix_examples() {
        let rho = DensityOperator::from_pure(&bell()).unwrap();
        let a = ProductAssignment::basis(&[2, 2], &[0, 0]).unwrap();
        let m = effective_local_matrix(&rho, &a, 0).unwrap();
        assert!((m - m2([0.5, 0.0, 0.0, 0.0])).norm() < 1e-15);

        let p00 =
            DensityOperator::from_pure(&PureState::basis(vec![2, 2], &[0, 0]).unwrap()).unwrap();
        let m = effective_local_matrix(&p00, &a, 0).unwrap();
        assert!((m - m2([1.0, 0.0, 0.0, 0.0])).norm() < 1e-15);
        let a01 = ProductAssignment::basis(&[2, 2], &[0, 1]).unwrap();
        let m = effective_local_matrix(&p00, &a01, 0).unwrap();
        assert!(m.norm() < 1e-15);

        assert!(effective_local_matrix(&p00, &a, 2).is_err());
        let a3 = ProductAssignment::basis(&[2, 2, 2], &[0, 0, 0]).unwrap();
        assert!(matches!(
            effective_local_matrix(&p00, &a3, 0),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn effective_matrix_reproduces_overlap() {
        let mut rng = stream_rng(5, 0);
        let s = crate::random::random_pure_state(&[2, 3, 2], &mut rng).unwrap();
        let rho = DensityOperator::from_pure(&s).unwrap();
        let locals: Vec<Vec<C64>> = [2, 3, 2]
            .iter()
            .map(|&d| random_unit_vector(d, &mut rng))
            .collect();
        let a = ProductAssignment::new(locals).unwrap();
        let full = rho.overlap_with_product(&a).unwrap();
        for k in 0..3 {
            let m = effective_local_matrix(&rho, &a, k).unwrap();
            let q = &a.locals()[k];
            let val: C64 = (0..q.len())
                .flat_map(|i| (0..q.len()).map(move |j| (i, j)))
                .map(|(i, j)| q[i].conj() * m[(i, j)] * q[j])
                .sum();
            assert!((val.re - full).abs() < 1e-12);
        }
    }

    #[test]
    fn bell_and_products() {
        let cfg = SolverConfig::default();
        let r = alternating_pmax(&bell(), &cfg).unwrap();
        assert!((r.p_max - 0.5).abs() < 1e-12);
        assert!((r.groverian - 0.5f64.sqrt()).abs() < 1e-14);
        assert!(r.converged && !r.not_a_measure);

        let p = PureState::basis(vec![2, 3, 2], &[1, 2, 0]).unwrap();
        let r = alternating_pmax(&p, &cfg).unwrap();
        assert!((r.p_max - 1.0).abs() < 1e-14);
        assert_eq!(r.groverian, 0.0);
    }

    #[test]
    fn reduced_path_bell_and_product() {
        let cfg = SolverConfig::default();
        let r = pmax_via_reduced(&bell(), 1, &cfg).unwrap();
        assert!((r.p_max - 0.5).abs() < 1e-12);
        let p = PureState::basis(vec![2, 2, 2], &[0, 0, 0]).unwrap();
        let r = pmax_via_reduced(&p, 0, &cfg).unwrap();
        assert!((r.p_max - 1.0).abs() < 1e-14);
        assert_eq!(r.best_assignment.dims(), vec![2, 2, 2]);

        let single = PureState::basis(vec![3], &[1]).unwrap();
        assert!(matches!(
            pmax_via_reduced(&single, 0, &cfg),
            Err(Error::InvalidParties(_))
        ));
        assert!(pmax_via_reduced(&p, 3, &cfg).is_err());
    }

    #[test]
    fn mixed_input_is_flagged() {
        let rho = bell().reduce(&[1]).unwrap();
        let r = alternating_pmax(&rho, &SolverConfig::default()).unwrap();
        assert!(r.not_a_measure);
        assert!((r.p_max - 0.5).abs() < 1e-14);
    }

    #[test]
    fn unnormalized_pure_input_is_an_error() {
        let raw = PureState::new(vec![2, 2], vec![c(1.0), c(0.0), c(0.0), c(1.0)]).unwrap();
        assert!(matches!(
            alternating_pmax(&raw, &SolverConfig::default()),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn groverian_examples() {
        assert_eq!(groverian_measure(1.0).unwrap(), 0.0);
        assert!((groverian_measure(0.5).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((groverian_measure(4.0 / 9.0).unwrap() - 5f64.sqrt() / 3.0).abs() < 1e-15);
        assert!(groverian_measure(0.0).is_err());
        assert!(groverian_measure(1.5).is_err());
        assert!(groverian_measure(f64::NAN).is_err());
    }

    #[test]
    fn config_validation() {
        let bad = [
            SolverConfig {
                tol: 0.0,
                ..Default::default()
            },
            SolverConfig {
                starts: 0,
                ..Default::default()
            },
            SolverConfig {
                max_iter: 0,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(alternating_pmax(&bell(), &cfg).is_err());
        }
    }

    #[test]
    fn max_iter_exhaustion_reports_unconverged() {
        let mut rng = stream_rng(2, 0);
        let s = crate::random::random_pure_state(&[2, 2, 2, 2], &mut rng).unwrap();
        let cfg = SolverConfig {
            max_iter: 1,
            tol: 1e-300,
            starts: 3,
            ..Default::default()
        };
        let r = alternating_pmax(&s, &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.p_max > 0.0);
    }

    #[test]
    fn ties_resolve_to_lowest_start() {
        // every basis start of a GHZ state that touches |000⟩ or |111⟩ lands on 1/2
        let mut a = vec![0.0; 8];
        a[0] = 1.0;
        a[7] = 1.0;
        let ghz = PureState::from_real(vec![2, 2, 2], &a).unwrap();
        let r = alternating_pmax(&ghz, &SolverConfig::default()).unwrap();
        assert_eq!(r.best_start, 0);
        assert!((r.p_max - 0.5).abs() < 1e-12);
    }

    #[test]
    fn basis_start_split() {
        assert_eq!(basis_start_count(&[2, 2, 2], 24), 8);
        assert_eq!(basis_start_count(&[2, 2, 2, 2], 24), 12);
        assert_eq!(basis_start_count(&[2, 2], 1), 0);
    }
}
