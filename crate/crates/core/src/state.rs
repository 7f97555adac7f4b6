//! Dense pure states, density operators, product assignments and Pauli
//! correlation tensors.
//!
//! Basis ordering: for local dimensions `(d_1, …, d_n)` the amplitude of
//! `|i_1 i_2 … i_n⟩` lives at `i_1·(d_2⋯d_n) + i_2·(d_3⋯d_n) + … + i_n`, so
//! party 0 (the leftmost ket label) is the most significant digit. Parties
//! are indexed from 0 throughout the library.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Normalization tolerance on Σ|amp|².
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity and unit-trace tolerance for density operators.
pub const DENSITY_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted for a density operator.
pub const PSD_TOL: f64 = -1e-10;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

fn validate_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::InvalidDims("at least one party is required".into()));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDims(format!("local dimension {d} < 2")));
    }
    dims.iter()
        .try_fold(1usize, |acc, &d| acc.checked_mul(d))
        .ok_or_else(|| Error::InvalidDims("total dimension overflows".into()))
}

/// Stride of each party in the flattened basis index.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

/// Global index offsets of every multi-index over `parties`, enumerated with
/// the first listed party most significant.
pub(crate) fn subset_offsets(dims: &[usize], parties: &[usize]) -> Vec<usize> {
    let st = strides(dims);
    let mut out = vec![0usize];
    for &p in parties {
        let mut next = Vec::with_capacity(out.len() * dims[p]);
        for &base in &out {
            for i in 0..dims[p] {
                next.push(base + i * st[p]);
            }
        }
        out = next;
    }
    out
}

fn check_traced(n: usize, traced: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let mut mask = vec![false; n];
    for &k in traced {
        if k >= n {
            return Err(Error::InvalidParties(format!(
                "party {k} out of range for {n} parties"
            )));
        }
        if mask[k] {
            return Err(Error::InvalidParties(format!("party {k} listed twice")));
        }
        mask[k] = true;
    }
    let kept: Vec<usize> = (0..n).filter(|&k| !mask[k]).collect();
    if kept.is_empty() {
        return Err(Error::InvalidParties(
            "cannot trace out every party (result would be a scalar)".into(),
        ));
    }
    let traced: Vec<usize> = (0..n).filter(|&k| mask[k]).collect();
    Ok((kept, traced))
}

/// Pure state of `n` parties with local dimensions `dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<C64>,
}

impl PureState {
    /// Builds a state without normalizing it. Use [`PureState::normalize`]
    /// or [`PureState::normalized`] for that.
    pub fn new(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        let total = validate_dims(&dims)?;
        if amps.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for total dimension {total}",
                amps.len()
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        Ok(Self { dims, amps })
    }

    /// Builds a normalized state from unnormalized amplitudes.
    pub fn normalized(dims: Vec<usize>, amps: Vec<C64>) -> Result<Self> {
        Self::new(dims, amps)?.normalize()
    }

    /// Builds a normalized state from real amplitudes.
    pub fn from_real(dims: Vec<usize>, amps: &[f64]) -> Result<Self> {
        Self::normalized(dims, amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// Computational basis state `|i_1 … i_n⟩`.
    pub fn basis(dims: Vec<usize>, digits: &[usize]) -> Result<Self> {
        let total = validate_dims(&dims)?;
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(&i, &d)| i >= d) {
            return Err(Error::InvalidArgument(format!(
                "basis label {digits:?} for dims {dims:?}"
            )));
        }
        let idx: usize = digits.iter().zip(strides(&dims)).map(|(&i, s)| i * s).sum();
        let mut amps = vec![ZERO; total];
        amps[idx] = ONE;
        Ok(Self { dims, amps })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// True when every amplitude has a vanishing imaginary part.
    pub fn is_real(&self) -> bool {
        self.amps
            .iter()
            .all(|a| a.im.abs() <= 1e-15 * (1.0 + a.re.abs()))
    }

    pub fn normalize(mut self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::NullState);
        }
        let inv = 1.0 / n2.sqrt();
        self.amps.iter_mut().for_each(|a| *a *= inv);
        Ok(self)
    }

    /// `(U acting on party k) |ψ⟩`.
    pub fn apply_local(&self, party: usize, u: &DMatrix<C64>) -> Result<Self> {
        let n = self.n_parties();
        if party >= n {
            return Err(Error::InvalidParties(format!("party {party} out of range")));
        }
        let d = self.dims[party];
        if u.nrows() != d || u.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} operator on party of dimension {d}",
                u.nrows(),
                u.ncols()
            )));
        }
        let stride = strides(&self.dims)[party];
        let rest: Vec<usize> = (0..n).filter(|&k| k != party).collect();
        let mut out = vec![ZERO; self.amps.len()];
        for base in subset_offsets(&self.dims, &rest) {
            for i in 0..d {
                let mut acc = ZERO;
                for j in 0..d {
                    acc += u[(i, j)] * self.amps[base + j * stride];
                }
                out[base + i * stride] = acc;
            }
        }
        Ok(Self {
            dims: self.dims.clone(),
            amps: out,
        })
    }

    /// Reduced density operator after tracing out `traced`, computed straight
    /// from the amplitudes.
    pub fn reduce(&self, traced: &[usize]) -> Result<DensityOperator> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized(self.norm_sqr()));
        }
        let (kept, traced) = check_traced(self.n_parties(), traced)?;
        let kept_off = subset_offsets(&self.dims, &kept);
        let traced_off = subset_offsets(&self.dims, &traced);
        let m = kept_off.len();
        let mut mat = DMatrix::from_element(m, m, ZERO);
        for (r, &ro) in kept_off.iter().enumerate() {
            for (c, &co) in kept_off.iter().enumerate().skip(r) {
                let v: C64 = traced_off
                    .iter()
                    .map(|&t| self.amps[ro + t] * self.amps[co + t].conj())
                    .sum();
                mat[(r, c)] = v;
                mat[(c, r)] = v.conj();
            }
        }
        let dims = kept.iter().map(|&k| self.dims[k]).collect();
        Ok(DensityOperator { dims, mat })
    }

    /// `⟨q_1 … q_n | ψ⟩`.
    pub fn product_amplitude(&self, assignment: &ProductAssignment) -> Result<C64> {
        assignment.check_dims(&self.dims)?;
        let v = assignment.product_vector();
        Ok(v.iter().zip(&self.amps).map(|(q, a)| q.conj() * a).sum())
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: StateFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        file.into_state()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&StateFile::from(self)).expect("state file serializes")
    }
}

/// On-disk form of a [`PureState`]: `{"dims": [..], "amps": [[re, im], ..]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub amps: Vec<[f64; 2]>,
}

impl StateFile {
    pub fn into_state(self) -> Result<PureState> {
        PureState::new(
            self.dims,
            self.amps
                .into_iter()
                .map(|[re, im]| C64::new(re, im))
                .collect(),
        )
    }
}

impl From<&PureState> for StateFile {
    fn from(s: &PureState) -> Self {
        Self {
            dims: s.dims.clone(),
            amps: s.amps.iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

/// Hermitian, unit-trace, positive semidefinite operator over a set of
/// parties.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    dims: Vec<usize>,
    mat: DMatrix<C64>,
}

impl DensityOperator {
    pub fn new(dims: Vec<usize>, mat: DMatrix<C64>) -> Result<Self> {
        let total = validate_dims(&dims)?;
        if mat.nrows() != total || mat.ncols() != total {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for total dimension {total}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let herm = hermiticity_defect(&mat);
        if herm > DENSITY_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min_eig = SymmetricEigen::new(mat.clone()).eigenvalues.min();
        if min_eig < PSD_TOL {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min_eig:e}"
            )));
        }
        Ok(Self { dims, mat })
    }

    /// `|ψ⟩⟨ψ|`. The state must already be normalized.
    pub fn from_pure(state: &PureState) -> Result<Self> {
        if !state.is_normalized() {
            return Err(Error::NotNormalized(state.norm_sqr()));
        }
        let d = state.amps.len();
        let mat = DMatrix::from_fn(d, d, |r, c| state.amps[r] * state.amps[c].conj());
        Ok(Self {
            dims: state.dims.clone(),
            mat,
        })
    }

    /// `|ψ⟩⟨ψ|` after normalizing `state`.
    pub fn from_pure_normalizing(state: &PureState) -> Result<Self> {
        Self::from_pure(&state.clone().normalize()?)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn n_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(self.mat.clone())
            .eigenvalues
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `tr ρ²`.
    pub fn purity(&self) -> f64 {
        self.mat.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Partial trace over `traced`; the retained parties keep their order.
    pub fn partial_trace(&self, traced: &[usize]) -> Result<Self> {
        let (kept, traced) = check_traced(self.n_parties(), traced)?;
        let kept_off = subset_offsets(&self.dims, &kept);
        let traced_off = subset_offsets(&self.dims, &traced);
        let m = kept_off.len();
        let mat = DMatrix::from_fn(m, m, |r, c| {
            traced_off
                .iter()
                .map(|&t| self.mat[(kept_off[r] + t, kept_off[c] + t)])
                .sum()
        });
        let dims = kept.iter().map(|&k| self.dims[k]).collect();
        Ok(Self { dims, mat })
    }

    /// `tr(ρ · ϱ_1 ⊗ ⋯ ⊗ ϱ_n)` with `ϱ_k = |q_k⟩⟨q_k|`.
    pub fn overlap_with_product(&self, assignment: &ProductAssignment) -> Result<f64> {
        assignment.check_dims(&self.dims)?;
        let v = assignment.product_vector();
        let rv = &self.mat * nalgebra::DVector::from_vec(v.clone());
        Ok(v.iter()
            .zip(rv.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re)
    }

    /// Pauli correlation tensor `g_{α_1…α_m} = tr(ρ σ^{α_1} ⊗ ⋯ ⊗ σ^{α_m})`
    /// over all retained qubits.
    pub fn correlation_tensor(&self) -> Result<CorrelationTensor> {
        if !self.is_qubits() {
            return Err(Error::Unsupported(
                "correlation tensors are defined for qubit parties only".into(),
            ));
        }
        let m = self.n_parties();
        let count = 3usize.pow(m as u32);
        let dim = self.mat.nrows();
        let mut values = Vec::with_capacity(count);
        let mut labels = vec![0usize; m];
        for _ in 0..count {
            let mut acc = ZERO;
            for col in 0..dim {
                let mut row = col;
                let mut coeff = ONE;
                for (q, &a) in labels.iter().enumerate() {
                    let bit_pos = m - 1 - q;
                    let bit = (col >> bit_pos) & 1;
                    let (flip, c) = pauli_column(a, bit);
                    if flip {
                        row ^= 1 << bit_pos;
                    }
                    coeff *= c;
                }
                // tr(ρP) = Σ_col ρ[col, row] P[row, col]
                acc += self.mat[(col, row)] * coeff;
            }
            values.push(acc.re);
            for q in (0..m).rev() {
                labels[q] += 1;
                if labels[q] < 3 {
                    break;
                }
                labels[q] = 0;
            }
        }
        Ok(CorrelationTensor { order: m, values })
    }
}

/// Column `bit` of σ_x (a=0), σ_y (a=1) or σ_z (a=2): whether the nonzero
/// entry sits on the flipped row, and its value.
fn pauli_column(a: usize, bit: usize) -> (bool, C64) {
    match (a, bit) {
        (0, _) => (true, ONE),
        (1, 0) => (true, C64::new(0.0, 1.0)),
        (1, _) => (true, C64::new(0.0, -1.0)),
        (_, 0) => (false, ONE),
        _ => (false, -ONE),
    }
}

/// Largest entry of `|A − A†|`.
pub fn hermiticity_defect(a: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((a[(r, c)] - a[(c, r)].conj()).norm());
        }
    }
    worst
}

/// One normalized local state per party; the candidate closest product state.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductAssignment {
    locals: Vec<Vec<C64>>,
}

impl ProductAssignment {
    /// Validates unit norms within [`NORM_TOL`].
    pub fn new(locals: Vec<Vec<C64>>) -> Result<Self> {
        if locals.is_empty() {
            return Err(Error::InvalidDims("empty assignment".into()));
        }
        for (k, v) in locals.iter().enumerate() {
            let n2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            if (n2 - 1.0).abs() > NORM_TOL {
                return Err(Error::NotNormalized(n2));
            }
            if v.len() < 2 {
                return Err(Error::InvalidDims(format!(
                    "local vector {k} has length {}",
                    v.len()
                )));
            }
        }
        Ok(Self { locals })
    }

    /// Normalizes each local vector.
    pub fn from_unnormalized(locals: Vec<Vec<C64>>) -> Result<Self> {
        let locals = locals
            .into_iter()
            .map(|v| {
                let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                if n == 0.0 || !n.is_finite() {
                    Err(Error::NullState)
                } else {
                    Ok(v.into_iter().map(|z| z / n).collect())
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(locals)
    }

    /// Computational basis assignment `|i_1⟩ ⊗ ⋯ ⊗ |i_n⟩`.
    pub fn basis(dims: &[usize], digits: &[usize]) -> Result<Self> {
        if digits.len() != dims.len() || digits.iter().zip(dims).any(|(&i, &d)| i >= d) {
            return Err(Error::InvalidArgument(format!(
                "basis label {digits:?} for dims {dims:?}"
            )));
        }
        Self::new(
            dims.iter()
                .zip(digits)
                .map(|(&d, &i)| (0..d).map(|j| if j == i { ONE } else { ZERO }).collect())
                .collect(),
        )
    }

    pub(crate) fn from_parts_unchecked(locals: Vec<Vec<C64>>) -> Self {
        Self { locals }
    }

    pub fn locals(&self) -> &[Vec<C64>] {
        &self.locals
    }

    pub fn dims(&self) -> Vec<usize> {
        self.locals.iter().map(Vec::len).collect()
    }

    pub(crate) fn check_dims(&self, dims: &[usize]) -> Result<()> {
        let own = self.dims();
        if own != dims {
            return Err(Error::DimensionMismatch(format!(
                "assignment dims {own:?} vs {dims:?}"
            )));
        }
        Ok(())
    }

    /// Kronecker product `q_1 ⊗ ⋯ ⊗ q_n` in the library's basis order.
    pub fn product_vector(&self) -> Vec<C64> {
        let mut v = vec![ONE];
        for q in &self.locals {
            let mut next = Vec::with_capacity(v.len() * q.len());
            for a in &v {
                for b in q {
                    next.push(a * b);
                }
            }
            v = next;
        }
        v
    }
}

/// Real Pauli correlation tensor of an `m`-qubit operator. Index `α ∈ {0,1,2}`
/// stands for `(σ_x, σ_y, σ_z)`; the first party is the most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTensor {
    order: usize,
    values: Vec<f64>,
}

impl CorrelationTensor {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, labels: &[usize]) -> f64 {
        assert_eq!(
            labels.len(),
            self.order,
            "label count must equal tensor order"
        );
        let idx = labels.iter().fold(0, |acc, &a| {
            assert!(a < 3, "Pauli label out of range");
            acc * 3 + a
        });
        self.values[idx]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// The three Pauli matrices `(σ_x, σ_y, σ_z)`.
pub fn pauli_matrices() -> [DMatrix<C64>; 3] {
    let i = C64::new(0.0, 1.0);
    [
        DMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        DMatrix::from_row_slice(2, 2, &[ZERO, -i, i, ZERO]),
        DMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
    ]
}

/// Kronecker product of square matrices, first factor most significant.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell() -> PureState {
        PureState::from_real(vec![2, 2], &[1.0, 0.0, 0.0, 1.0]).unwrap()
    }

    fn ghz() -> PureState {
        let mut a = vec![0.0; 8];
        a[0] = 1.0;
        a[7] = 1.0;
        PureState::from_real(vec![2, 2, 2], &a).unwrap()
    }

    fn assert_mat(m: &DMatrix<C64>, expect: &[f64], tol: f64) {
        assert_eq!(m.len(), expect.len());
        for r in 0..m.nrows() {
            for col in 0..m.ncols() {
                let e = expect[r * m.ncols() + col];
                assert!(
                    (m[(r, col)] - c(e)).norm() < tol,
                    "entry ({r},{col}) = {} vs {e}",
                    m[(r, col)]
                );
            }
        }
    }

    #[test]
    fn normalize_uniform_qutrit() {
        let s = PureState::from_real(vec![3], &[1.0, 1.0, 1.0]).unwrap();
        for a in s.amps() {
            assert!((a.re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn normalize_w_state() {
        let s =
            PureState::from_real(vec![2, 2, 2], &[0.0, 1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0]).unwrap();
        for i in [1, 2, 4] {
            assert!((s.amps()[i].re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        }
        assert!(s.is_normalized());
    }

    #[test]
    fn null_state_is_rejected() {
        let err = PureState::from_real(vec![2], &[0.0, 0.0]).unwrap_err();
        assert_eq!(err, Error::NullState);
    }

    #[test]
    fn bad_dims_rejected() {
        assert!(PureState::new(vec![], vec![]).is_err());
        assert!(PureState::new(vec![1, 2], vec![c(1.0), c(0.0)]).is_err());
        assert!(PureState::new(vec![2, 2], vec![c(1.0); 3]).is_err());
    }

    #[test]
    fn density_of_basis_and_bell() {
        let zero = PureState::basis(vec![2], &[0]).unwrap();
        assert_mat(
            DensityOperator::from_pure(&zero).unwrap().matrix(),
            &[1.0, 0.0, 0.0, 0.0],
            1e-15,
        );

        let rho = DensityOperator::from_pure(&bell()).unwrap();
        let mut e = vec![0.0; 16];
        for i in [0, 3, 12, 15] {
            e[i] = 0.5;
        }
        assert_mat(rho.matrix(), &e, 1e-15);
    }

    #[test]
    fn density_requires_normalized_input() {
        let raw = PureState::new(vec![2], vec![c(1.0), c(1.0)]).unwrap();
        assert!(matches!(
            DensityOperator::from_pure(&raw),
            Err(Error::NotNormalized(_))
        ));
        let rho = DensityOperator::from_pure_normalizing(&raw).unwrap();
        assert!((rho.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn partial_trace_examples() {
        let rho = DensityOperator::from_pure(&bell()).unwrap();
        assert_mat(
            rho.partial_trace(&[1]).unwrap().matrix(),
            &[0.5, 0.0, 0.0, 0.5],
            1e-15,
        );

        let rho = DensityOperator::from_pure(&ghz()).unwrap();
        let red = rho.partial_trace(&[2]).unwrap();
        let mut e = vec![0.0; 16];
        e[0] = 0.5;
        e[15] = 0.5;
        assert_mat(red.matrix(), &e, 1e-15);

        let p01 = PureState::basis(vec![2, 2], &[0, 1]).unwrap();
        let red = DensityOperator::from_pure(&p01)
            .unwrap()
            .partial_trace(&[0])
            .unwrap();
        assert_mat(red.matrix(), &[0.0, 0.0, 0.0, 1.0], 1e-15);
    }

    #[test]
    fn tracing_everything_is_an_error() {
        let rho = DensityOperator::from_pure(&bell()).unwrap();
        assert!(matches!(
            rho.partial_trace(&[0, 1]),
            Err(Error::InvalidParties(_))
        ));
        assert!(matches!(
            rho.partial_trace(&[2]),
            Err(Error::InvalidParties(_))
        ));
        assert!(matches!(
            rho.partial_trace(&[0, 0]),
            Err(Error::InvalidParties(_))
        ));
    }

    #[test]
    fn reduce_from_amplitudes_matches_partial_trace() {
        let s = PureState::normalized(
            vec![2, 3, 2],
            (0..12)
                .map(|i| C64::new((i as f64).sin(), (i as f64 * 0.7).cos()))
                .collect(),
        )
        .unwrap();
        let rho = DensityOperator::from_pure(&s).unwrap();
        for traced in [vec![0], vec![1], vec![2], vec![0, 2], vec![2, 0]] {
            let a = s.reduce(&traced).unwrap();
            let b = rho.partial_trace(&traced).unwrap();
            assert_eq!(a.dims(), b.dims());
            assert!((a.matrix() - b.matrix()).norm() < 1e-14);
        }
    }

    #[test]
    fn overlap_examples() {
        let p00 =
            DensityOperator::from_pure(&PureState::basis(vec![2, 2], &[0, 0]).unwrap()).unwrap();
        let a00 = ProductAssignment::basis(&[2, 2], &[0, 0]).unwrap();
        let a01 = ProductAssignment::basis(&[2, 2], &[0, 1]).unwrap();
        assert!((p00.overlap_with_product(&a00).unwrap() - 1.0).abs() < 1e-15);

        let rho = DensityOperator::from_pure(&bell()).unwrap();
        assert!((rho.overlap_with_product(&a00).unwrap() - 0.5).abs() < 1e-15);
        assert!(rho.overlap_with_product(&a01).unwrap().abs() < 1e-15);

        let a3 = ProductAssignment::basis(&[2, 2, 2], &[0, 0, 0]).unwrap();
        assert!(matches!(
            rho.overlap_with_product(&a3),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn correlation_tensor_examples() {
        let mixed = DensityOperator::new(vec![2], DMatrix::identity(2, 2) * c(0.5)).unwrap();
        assert!(mixed.correlation_tensor().unwrap().max_abs() < 1e-15);

        let g = DensityOperator::from_pure(&bell())
            .unwrap()
            .correlation_tensor()
            .unwrap();
        let expect = [1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 1.0];
        for (v, e) in g.values().iter().zip(expect) {
            assert!((v - e).abs() < 1e-14);
        }
        assert_eq!(g.get(&[1, 1]), g.values()[4]);

        let single = ghz().reduce(&[1, 2]).unwrap().correlation_tensor().unwrap();
        assert!(single.max_abs() < 1e-15);

        let qutrit = DensityOperator::new(vec![3], DMatrix::identity(3, 3) * c(1.0 / 3.0)).unwrap();
        assert!(matches!(
            qutrit.correlation_tensor(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn correlation_tensor_matches_explicit_pauli_products() {
        let s = PureState::normalized(
            vec![2, 2],
            vec![
                C64::new(0.3, 0.1),
                C64::new(-0.2, 0.5),
                C64::new(0.7, 0.0),
                C64::new(0.1, -0.4),
            ],
        )
        .unwrap();
        let rho = DensityOperator::from_pure(&s).unwrap();
        let g = rho.correlation_tensor().unwrap();
        let p = pauli_matrices();
        for a in 0..3 {
            for b in 0..3 {
                let explicit = (rho.matrix() * kron(&p[a], &p[b])).trace();
                assert!(explicit.im.abs() < 1e-14);
                assert!((g.get(&[a, b]) - explicit.re).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn density_validation() {
        let not_herm = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.0), c(0.5)]);
        assert!(matches!(
            DensityOperator::new(vec![2], not_herm),
            Err(Error::NotHermitian(_))
        ));
        let bad_trace = DMatrix::identity(2, 2) * c(1.0);
        assert!(matches!(
            DensityOperator::new(vec![2], bad_trace),
            Err(Error::InvalidDensity(_))
        ));
        let negative = DMatrix::from_row_slice(2, 2, &[c(1.5), c(0.0), c(0.0), c(-0.5)]);
        assert!(matches!(
            DensityOperator::new(vec![2], negative),
            Err(Error::InvalidDensity(_))
        ));
    }

    #[test]
    fn apply_local_acts_on_the_right_party() {
        let s = PureState::basis(vec![2, 3], &[0, 1]).unwrap();
        let x = pauli_matrices()[0].clone();
        let t = s.apply_local(0, &x).unwrap();
        assert_eq!(t, PureState::basis(vec![2, 3], &[1, 1]).unwrap());
        assert!(s.apply_local(1, &x).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = PureState::normalized(
            vec![2, 2],
            vec![
                C64::new(0.1, 0.2),
                C64::new(1.0 / 3.0, 0.0),
                c(0.0),
                C64::new(-0.5, 0.25),
            ],
        )
        .unwrap();
        let back = PureState::from_json_str(&s.to_json_string()).unwrap();
        assert_eq!(back, s);
        assert!(PureState::from_json_str(r#"{"dims":[2],"amps":[[1,0]]}"#).is_err());
        assert!(PureState::from_json_str("not json").is_err());
    }
}
