//! Brute-force product-state search over local angles.
//!
//! Each qubit is parametrized as `|q⟩ = cos θ |0⟩ + e^{iφ} sin θ |1⟩` with
//! `θ ∈ [0, π)` and `φ ∈ [0, 2π)`; the global phase is irrelevant, so this
//! covers every local pure state. The oracle evaluates `|⟨q_1 … q_n|ψ⟩|²` on
//! a grid, then re-grids a window ten times narrower around the best cell,
//! always keeping the incumbent point on the new grid. It never solves an
//! eigenproblem and shares no code with the solver.
//!
//! States with non-negative real amplitudes use `φ = 0` for every party (the
//! triangle inequality shows phases cannot help there). Other states scan
//! phases as well; to keep that affordable the last party is maximized
//! exactly (`max_q |⟨q|v⟩|² = ‖v‖²` by Cauchy-Schwarz) unless
//! [`GridConfig::exact_last_party`] is turned off.

use rayon::prelude::*;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::state::{PureState, C64};

/// Largest supported number of qubits.
pub const MAX_PARTIES: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct GridConfig {
    pub theta_steps: usize,
    /// `None` picks 1 for non-negative real states and 30 otherwise.
    pub phi_steps: Option<usize>,
    pub refine_rounds: usize,
    /// Phase-scanning path only: maximize the last party analytically.
    pub exact_last_party: bool,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            theta_steps: 60,
            phi_steps: None,
            refine_rounds: 3,
            exact_last_party: true,
        }
    }
}

/// Best grid value and where it was found.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult {
    pub p_max: f64,
    /// Best value after the initial grid and after each refinement round.
    pub round_values: Vec<f64>,
    /// `(θ, φ)` per party.
    pub angles: Vec<(f64, f64)>,
    /// Whether phases were scanned.
    pub phase_scan: bool,
}

fn nonnegative_real(state: &PureState) -> bool {
    state.amps().iter().all(|a| a.im == 0.0 && a.re >= 0.0)
}

#[derive(Clone, Copy)]
struct Candidate {
    angles: (f64, f64),
    /// `conj(q)`.
    bra: [C64; 2],
}

impl Candidate {
    fn new(theta: f64, phi: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            angles: (theta, phi),
            bra: [C64::new(c, 0.0), C64::from_polar(s, -phi)],
        }
    }
}

/// One party's candidate list for a window around `center`.
fn axis(center: f64, width: f64, steps: usize, period: f64, wrap: bool, first: bool) -> Vec<f64> {
    if first {
        return (0..steps)
            .map(|i| i as f64 * period / steps as f64)
            .collect();
    }
    let h = width / steps as f64;
    let mid = (steps / 2) as i64;
    (0..steps as i64)
        .map(|i| center + (i - mid) as f64 * h)
        .filter_map(|t| {
            if wrap {
                Some(t.rem_euclid(period))
            } else if (0.0..period).contains(&t) {
                Some(t)
            } else {
                None
            }
        })
        .collect()
}

struct Scan<'a> {
    levels: &'a [Vec<Candidate>],
    exact_last: bool,
}

impl Scan<'_> {
    /// Depth-first maximization below `level`; `path` holds the chosen
    /// candidate index per level. Strict improvement keeps the first maximum
    /// in scan order.
    fn walk(&self, level: usize, v: &[C64], path: &mut Vec<usize>, best: &mut (f64, Vec<usize>)) {
        if level == self.levels.len() {
            // scanned parties consumed: v is the scalar amplitude, or the
            // last party's vector χ when that party is maximized exactly
            let val: f64 = if self.exact_last {
                v.iter().map(|z| z.norm_sqr()).sum()
            } else {
                v[0].norm_sqr()
            };
            if val > best.0 {
                *best = (val, path.clone());
            }
            return;
        }
        let half = v.len() / 2;
        let mut next = vec![C64::new(0.0, 0.0); half];
        for (ci, cand) in self.levels[level].iter().enumerate() {
            for j in 0..half {
                next[j] = cand.bra[0] * v[j] + cand.bra[1] * v[half + j];
            }
            path.push(ci);
            self.walk(level + 1, &next, path, best);
            path.pop();
        }
    }
}

fn last_party_angles(state: &PureState, levels: &[Vec<Candidate>], path: &[usize]) -> (f64, f64) {
    let mut v = state.amps().to_vec();
    for (lvl, &ci) in path.iter().enumerate() {
        let bra = levels[lvl][ci].bra;
        let half = v.len() / 2;
        v = (0..half)
            .map(|j| bra[0] * v[j] + bra[1] * v[half + j])
            .collect();
    }
    let theta = v[1].norm().atan2(v[0].norm());
    let phi = if v[1].norm() > 0.0 && v[0].norm() > 0.0 {
        (v[1].arg() - v[0].arg()).rem_euclid(2.0 * PI)
    } else {
        0.0
    };
    (theta, phi)
}

/// Full grid-and-refine search.
pub fn grid_search(state: &PureState, cfg: &GridConfig) -> Result<GridResult> {
    if !state.is_qubits() {
        return Err(Error::Unsupported(
            "grid oracle handles qubit states only".into(),
        ));
    }
    let n = state.n_parties();
    if n > MAX_PARTIES {
        return Err(Error::Unsupported(format!(
            "grid oracle handles at most {MAX_PARTIES} qubits, got {n}"
        )));
    }
    if !state.is_normalized() {
        return Err(Error::NotNormalized(state.norm_sqr()));
    }
    let phase_scan = !nonnegative_real(state);
    let phi_steps = cfg.phi_steps.unwrap_or(if phase_scan { 30 } else { 1 });
    if cfg.theta_steps < 2 || (phase_scan && phi_steps < 2) {
        return Err(Error::InvalidArgument(
            "grid needs at least 2 steps per active angle".into(),
        ));
    }
    let scanned = if phase_scan && cfg.exact_last_party {
        n - 1
    } else {
        n
    };
    let exact_last = phase_scan && cfg.exact_last_party;

    let mut theta_width = PI;
    let mut phi_width = 2.0 * PI;
    let mut centers = vec![(0.0, 0.0); scanned];
    let mut round_values = Vec::with_capacity(cfg.refine_rounds + 1);
    let mut best_value = f64::NEG_INFINITY;
    let mut best_angles: Vec<(f64, f64)> = Vec::new();

    for round in 0..=cfg.refine_rounds {
        let first = round == 0;
        let levels: Vec<Vec<Candidate>> = centers
            .iter()
            .map(|&(tc, pc)| {
                let thetas = axis(tc, theta_width, cfg.theta_steps, PI, false, first);
                let phis = if phase_scan {
                    axis(pc, phi_width, phi_steps, 2.0 * PI, true, first)
                } else {
                    vec![0.0]
                };
                thetas
                    .iter()
                    .flat_map(|&t| phis.iter().map(move |&p| Candidate::new(t, p)))
                    .collect()
            })
            .collect();

        let scan = Scan {
            levels: &levels,
            exact_last,
        };
        let amps = state.amps();
        let (value, path) = if scanned == 0 {
            (amps.iter().map(|z| z.norm_sqr()).sum(), Vec::new())
        } else {
            let half = amps.len() / 2;
            let partials: Vec<(f64, Vec<usize>)> = levels[0]
                .par_iter()
                .enumerate()
                .map(|(ci, cand)| {
                    let v: Vec<C64> = (0..half)
                        .map(|j| cand.bra[0] * amps[j] + cand.bra[1] * amps[half + j])
                        .collect();
                    let mut best = (f64::NEG_INFINITY, Vec::new());
                    let mut path = vec![ci];
                    scan.walk(1, &v, &mut path, &mut best);
                    best
                })
                .collect();
            partials
                .into_iter()
                .fold((f64::NEG_INFINITY, Vec::new()), |acc, p| {
                    if p.0 > acc.0 {
                        p
                    } else {
                        acc
                    }
                })
        };

        let mut angles: Vec<(f64, f64)> = path
            .iter()
            .enumerate()
            .map(|(l, &ci)| levels[l][ci].angles)
            .collect();
        if exact_last {
            angles.push(last_party_angles(state, &levels, &path));
        }
        if value > best_value || best_angles.is_empty() {
            best_value = value;
            best_angles = angles;
        }
        round_values.push(value);
        centers = best_angles[..scanned].to_vec();
        theta_width /= 10.0;
        phi_width /= 10.0;
    }

    Ok(GridResult {
        p_max: best_value,
        round_values,
        angles: best_angles,
        phase_scan,
    })
}

/// `max |⟨q_1 … q_n|ψ⟩|²` over the refined angle grid; never exceeds the
/// true `P_max`.
pub fn grid_pmax(state: &PureState, cfg: &GridConfig) -> Result<f64> {
    grid_search(state, cfg).map(|r| r.p_max)
}
