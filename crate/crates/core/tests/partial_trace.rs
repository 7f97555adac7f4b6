use groverian::random::{random_pure_state, stream_rng};
use groverian::state::{hermiticity_defect, kron, pauli_matrices};
use groverian::{DensityOperator, PureState, C64};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn sample(seed: u64, dims: &[usize]) -> PureState {
    random_pure_state(dims, &mut stream_rng(seed, 0)).unwrap()
}

fn trace_distance_max(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn trace(m: &DMatrix<C64>) -> C64 {
    m.diagonal().iter().sum()
}

#[test]
fn reductions_are_density_operators() {
    let shapes: [&[usize]; 5] = [&[2, 2], &[2, 2, 2], &[3, 2], &[2, 3, 2], &[2, 2, 2, 2]];
    for seed in 0..200u64 {
        let dims = shapes[seed as usize % shapes.len()];
        let s = sample(seed, dims);
        for k in 0..dims.len() {
            let rho = s.reduce(&[k]).unwrap();
            let m = rho.matrix();
            assert!((trace(m) - C64::new(1.0, 0.0)).norm() < 1e-12);
            assert!(hermiticity_defect(m) < 1e-12);
            assert!(rho.eigenvalues()[0] > -1e-12);
            // revalidates through the checked constructor
            DensityOperator::new(rho.dims().to_vec(), m.clone()).unwrap();
        }
    }
}

#[test]
fn reduced_expectation_matches_full() {
    let [x, y, z] = pauli_matrices();
    let id = DMatrix::<C64>::identity(2, 2);
    for seed in 0..50u64 {
        let s = sample(seed, &[2, 2, 2]);
        let rho_ab = s.reduce(&[2]).unwrap();
        let rho_a = s.reduce(&[1, 2]).unwrap();
        for p in [&x, &y, &z] {
            let full = trace(&(rho_ab.matrix() * kron(p, &id)));
            let part = trace(&(rho_a.matrix() * p));
            assert!((full - part).norm() < 1e-12);
        }
    }
}

#[test]
fn sequential_tracing_equals_joint() {
    for seed in 0..50u64 {
        let s = sample(seed, &[2, 3, 2, 2]);
        let joint = s.reduce(&[0, 2]).unwrap();
        // after removing party 0, party 2 sits at index 1
        let seq = s.reduce(&[0]).unwrap().partial_trace(&[1]).unwrap();
        assert_eq!(joint.dims(), seq.dims());
        assert!(trace_distance_max(joint.matrix(), seq.matrix()) < 1e-13);
    }
}

#[test]
fn single_qubit_bloch_reconstruction() {
    let paulis = pauli_matrices();
    for seed in 0..50u64 {
        let s = sample(seed, &[2, 2, 2]);
        for keep in 0..3 {
            let traced: Vec<usize> = (0..3).filter(|&k| k != keep).collect();
            let rho = s.reduce(&traced).unwrap();
            let g = rho.correlation_tensor().unwrap();
            let mut rebuilt = DMatrix::<C64>::identity(2, 2);
            for (a, p) in paulis.iter().enumerate() {
                rebuilt += p * C64::new(g.get(&[a]), 0.0);
            }
            rebuilt *= C64::new(0.5, 0.0);
            assert!(trace_distance_max(&rebuilt, rho.matrix()) < 1e-13);
            assert!(g.values().iter().map(|v| v * v).sum::<f64>() <= 1.0 + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn purity_of_complementary_reductions_agree(seed in any::<u64>(), cut in 1usize..4) {
        let s = sample(seed, &[2, 2, 2, 2]);
        let left: Vec<usize> = (0..cut).collect();
        let right: Vec<usize> = (cut..4).collect();
        let a = s.reduce(&left).unwrap().purity();
        let b = s.reduce(&right).unwrap().purity();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_is_tight(seed in any::<u64>()) {
        let s = sample(seed, &[2, 3]);
        let back = PureState::from_json_str(&s.to_json_string()).unwrap();
        for (x, y) in s.amps().iter().zip(back.amps()) {
            prop_assert!((x - y).norm() <= 1e-15);
        }
    }
}
