use proptest::prelude::*;
use qae_core::pipeline::{generate_instance, InstanceKind};
use qae_core::qstate::{
    apply_unitary, eigendecompose, frobenius_distance, mutual_information, partial_trace,
    random_unitary, relative_entropy, von_neumann_entropy, BipartiteDims, Subsystem,
};
use qae_core::rng::rng_from_seed;

fn dims(a: usize, b: usize) -> BipartiteDims {
    BipartiteDims::new(a, b).unwrap()
}

#[test]
fn random_4x4_reconstructs() {
    for seed in 0..20 {
        let rho = generate_instance(InstanceKind::RandomDense, dims(2, 2), seed);
        let s = eigendecompose(&rho).unwrap();
        assert!(frobenius_distance(&s.reconstruct(), rho.matrix()) < 1e-9);
        assert!(s.probs().windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn random_2x3_partial_traces_have_unit_trace() {
    for seed in 0..20 {
        let rho = generate_instance(InstanceKind::RandomDense, dims(2, 3), seed);
        for keep in [Subsystem::A, Subsystem::B] {
            let r = partial_trace(&rho, dims(2, 3), keep).unwrap();
            assert!((r.matrix().trace().re - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn unitary_preserves_spectrum() {
    let mut rng = rng_from_seed(9);
    for seed in 0..10 {
        let rho = generate_instance(InstanceKind::RandomDense, dims(3, 3), seed);
        let u = random_unitary(9, &mut rng);
        let out = apply_unitary(&rho, &u).unwrap();
        for (a, b) in rho.eigenvalues().iter().zip(out.eigenvalues()) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!((out.matrix().trace().re - 1.0).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn entropy_is_unitarily_invariant(seed in any::<u64>(), d_a in 1usize..4, d_b in 1usize..4) {
        let d = dims(d_a, d_b);
        let rho = generate_instance(InstanceKind::RandomDense, d, seed);
        let u = random_unitary(d.total(), &mut rng_from_seed(seed ^ 0xabc));
        let rotated = apply_unitary(&rho, &u).unwrap();
        prop_assert!((von_neumann_entropy(&rotated) - von_neumann_entropy(&rho)).abs() < 1e-9);
    }

    #[test]
    fn relative_entropy_is_nonnegative(seed in any::<u64>(), d_a in 1usize..4, d_b in 1usize..3, pure in any::<bool>()) {
        let d = dims(d_a, d_b);
        let kind = if pure { InstanceKind::Pure } else { InstanceKind::RandomDense };
        let rho = generate_instance(kind, d, seed);
        let sigma = generate_instance(InstanceKind::RandomDense, d, seed.wrapping_add(1));
        prop_assert!(relative_entropy(&rho, &sigma).unwrap() >= -1e-9);
        prop_assert!(relative_entropy(&sigma, &sigma).unwrap().abs() < 1e-9);
    }

    #[test]
    fn product_states_have_no_mutual_information(seed in any::<u64>(), d_a in 1usize..4, d_b in 1usize..4) {
        let a = generate_instance(InstanceKind::RandomDense, dims(d_a, 1), seed);
        let b = generate_instance(InstanceKind::RandomDense, dims(d_b, 1), seed.wrapping_add(7));
        let mi = mutual_information(&a.kron(&b), dims(d_a, d_b)).unwrap();
        prop_assert!(mi.abs() < 1e-9);
    }

    #[test]
    fn mutual_information_is_nonnegative(seed in any::<u64>(), d_a in 1usize..4, d_b in 1usize..4) {
        let d = dims(d_a, d_b);
        let rho = generate_instance(InstanceKind::RandomDense, d, seed);
        prop_assert!(mutual_information(&rho, d).unwrap() >= -1e-9);
    }

    #[test]
    fn nested_partial_traces_preserve_trace(seed in any::<u64>(), d_a in 1usize..4, d_b in 1usize..4) {
        let d = dims(d_a, d_b);
        let rho = generate_instance(InstanceKind::Pure, d, seed);
        let b = partial_trace(&rho, d, Subsystem::B).unwrap();
        let scalar = partial_trace(&b, dims(d_b, 1), Subsystem::B).unwrap();
        prop_assert!((scalar.matrix()[(0, 0)].re - 1.0).abs() < 1e-10);
    }
}
