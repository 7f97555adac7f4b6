//! Seeded sampling of pure states, local states and Haar unitaries.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::state::{PureState, C64};

/// Deterministic generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Unit vector drawn uniformly from the complex sphere in `C^d`.
pub fn random_unit_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if n > 1e-8 {
            return v.into_iter().map(|z| z / n).collect();
        }
    }
}

/// Haar-random pure state with local dimensions `dims`.
pub fn random_pure_state<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> Result<PureState> {
    let total = dims.iter().product();
    PureState::new(dims.to_vec(), random_unit_vector(total, rng))
}

/// Haar-random unitary: complex Gaussian columns orthonormalized by modified
/// Gram-Schmidt (equivalent to QR with a positive diagonal in R).
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<C64> {
    'draw: loop {
        let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
        for _ in 0..d {
            let mut v: Vec<C64> = (0..d).map(|_| gaussian(rng)).collect();
            for u in &cols {
                let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(u).for_each(|(x, y)| *x -= proj * y);
            }
            let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if n < 1e-8 {
                continue 'draw;
            }
            cols.push(v.into_iter().map(|z| z / n).collect());
        }
        return DMatrix::from_fn(d, d, |r, c| cols[c][r]);
    }
}

/// Random Hermitian matrix with complex Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DMatrix<C64> {
    let g = DMatrix::from_fn(d, d, |_, _| gaussian(rng));
    (&g + g.adjoint()) * C64::new(0.5, 0.0)
}
