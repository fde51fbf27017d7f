use proptest::prelude::*;

use infoinv::invariant::{closed_form_total, information_distribution, reference_set};
use infoinv::measure::{information_bits, lack_of_information};
use infoinv::mub::{probability_square_sum, rotate_set, spin_triple, two_qubit_set, validate_mub};
use infoinv::states::{random_mixed, random_mixture, random_pure};
use infoinv::{
    information, random_unitary, total_information, Complex, ComplexMatrix, DensityMatrix,
    InformationMeasureConfig, MubSet, ProbabilityVector, TOL,
};

fn matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), dim * dim).prop_map(move |v| {
        let data = v.into_iter().map(|(re, im)| Complex::new(re, im)).collect();
        ComplexMatrix::new(dim, dim, data).unwrap()
    })
}

fn probabilities(n: usize) -> impl Strategy<Value = ProbabilityVector> {
    prop::collection::vec(0.0f64..1.0, n).prop_filter_map("non-zero weight", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-6).then(|| ProbabilityVector::new(w.iter().map(|x| x / s).collect()).unwrap())
    })
}

fn state(k: usize) -> impl Strategy<Value = DensityMatrix> {
    (any::<u64>(), 0usize..3).prop_map(move |(seed, kind)| match kind {
        0 => random_pure(k, seed).unwrap().to_density(),
        1 => random_mixed(k, seed).unwrap(),
        _ => random_mixture(k, 1 << k, seed).unwrap(),
    })
}

fn dim_of(k: usize) -> usize {
    1 << k
}

proptest! {
    #[test]
    fn matmul_is_associative(a in matrix(3), b in matrix(3), c in matrix(3)) {
        let left = a.matmul(&b).unwrap().matmul(&c).unwrap();
        let right = a.matmul(&b.matmul(&c).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right) < 1e-10);
    }

    #[test]
    fn adjoint_is_an_involution(a in matrix(4)) {
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn trace_is_cyclic(a in matrix(4), b in matrix(4)) {
        let ab = a.matmul(&b).unwrap().trace().unwrap();
        let ba = b.matmul(&a).unwrap().trace().unwrap();
        prop_assert!((ab - ba).norm() < 1e-10);
    }

    #[test]
    fn kron_mixed_product(a in matrix(2), b in matrix(2), c in matrix(2), d in matrix(2)) {
        let left = a.kron(&b).matmul(&c.kron(&d)).unwrap();
        let right = a.matmul(&c).unwrap().kron(&b.matmul(&d).unwrap());
        prop_assert!(left.max_abs_diff(&right) < 1e-10);
    }

    #[test]
    fn information_is_permutation_invariant(p in probabilities(4), shift in 0usize..4) {
        let mut q = p.as_slice().to_vec();
        q.rotate_left(shift);
        q.swap(0, 3);
        let q = ProbabilityVector::new(q).unwrap();
        prop_assert!((information_bits(&p) - information_bits(&q)).abs() < 1e-12);
    }

    #[test]
    fn information_plus_lack_is_constant(p in probabilities(8)) {
        // N * (sum p^2 - 1/n) + N * (1 - sum p^2) = N (n - 1) / n = k
        let total = information_bits(&p) + (24.0 / 7.0) * lack_of_information(&p);
        prop_assert!((total - 3.0).abs() < 1e-12);
    }

    #[test]
    fn information_is_convex(p in probabilities(4), q in probabilities(4), t in 0.0f64..1.0) {
        let mix: Vec<f64> = p.as_slice().iter().zip(q.as_slice()).map(|(a, b)| t * a + (1.0 - t) * b).collect();
        let mix = ProbabilityVector::new(mix).unwrap();
        let chord = t * information_bits(&p) + (1.0 - t) * information_bits(&q);
        prop_assert!(information_bits(&mix) <= chord + 1e-12);
    }

    #[test]
    fn information_lies_between_zero_and_k(p in probabilities(2), q in probabilities(4), r in probabilities(16)) {
        for (v, k) in [(&p, 1.0), (&q, 2.0), (&r, 4.0)] {
            let i = information_bits(v);
            prop_assert!((-1e-12..=k + 1e-12).contains(&i));
        }
    }

    #[test]
    fn information_is_linear_in_the_normalization(p in probabilities(4)) {
        let cfg = InformationMeasureConfig::new(2).unwrap();
        let raw: f64 = p.as_slice().iter().map(|x| (x - 0.25).powi(2)).sum();
        prop_assert!((information(&p, &cfg).unwrap() - cfg.normalization() * raw).abs() < 1e-12);
    }

    #[test]
    fn mixing_sets_purity(rho in state(2), lambda in 0.0f64..=1.0) {
        let expected = lambda * lambda * rho.purity() + (1.0 - lambda * lambda) / 4.0;
        prop_assert!((rho.mix(lambda).unwrap().purity() - expected).abs() < TOL);
    }

    #[test]
    fn reduced_states_of_product_pure_states_are_pure(a in any::<u64>(), b in any::<u64>()) {
        let psi = random_pure(1, a).unwrap().tensor(&random_pure(1, b).unwrap()).unwrap();
        let rho = psi.to_density();
        for keep in [1, 2] {
            prop_assert!((rho.partial_trace(keep).unwrap().purity() - 1.0).abs() < TOL);
        }
        let d = information_distribution(&rho).unwrap();
        prop_assert!(d.joint.abs() < TOL);
    }

    #[test]
    fn square_sum_identity(k in 1usize..=3, seed in any::<u64>(), phi1 in -7.0f64..7.0, phi2 in -7.0f64..7.0) {
        let rho = random_mixed(k, seed).unwrap();
        let set = reference_set(k, &[phi1, phi2]).unwrap();
        let s = probability_square_sum(&rho, &set).unwrap();
        prop_assert!((s - rho.purity() - 1.0).abs() < TOL);
    }

    #[test]
    fn two_ways_of_changing_basis_agree(k in 1usize..=3, s in any::<u64>(), u in any::<u64>()) {
        let rho = random_mixed(k, s).unwrap();
        let set = reference_set(k, &[]).unwrap();
        let u = random_unitary(dim_of(k), u).unwrap();
        let moved_state = total_information(&rho.evolve(&u).unwrap(), &set).unwrap();
        let moved_set = total_information(&rho, &rotate_set(&set, &u.adjoint()).unwrap()).unwrap();
        prop_assert!((moved_state.total_sum - moved_set.total_sum).abs() < TOL);
    }

    #[test]
    fn total_is_within_range(k in 1usize..=3, rho_seed in any::<u64>()) {
        let rho = random_mixed(k, rho_seed).unwrap();
        let total = closed_form_total(&rho);
        prop_assert!(total >= -TOL && total <= k as f64 + TOL);
    }

    #[test]
    fn total_equals_k_only_for_pure_states(seed in any::<u64>(), lambda in 0.0f64..0.999) {
        let pure = random_pure(2, seed).unwrap().to_density();
        prop_assert!((closed_form_total(&pure) - 2.0).abs() < TOL);
        let mixed = pure.mix(lambda).unwrap();
        prop_assert!(closed_form_total(&mixed) < 2.0 - TOL);
    }

    #[test]
    fn rotated_sets_stay_unbiased(seed in any::<u64>(), phi1 in -7.0f64..7.0, phi2 in -7.0f64..7.0) {
        let u = random_unitary(4, seed).unwrap();
        let set = rotate_set(&two_qubit_set(phi1, phi2), &u).unwrap();
        prop_assert!(validate_mub(&set).passed());
    }

    #[test]
    fn text_round_trip(phi in -7.0f64..7.0, phi1 in -7.0f64..7.0, phi2 in -7.0f64..7.0) {
        for set in [spin_triple(phi), two_qubit_set(phi1, phi2)] {
            prop_assert_eq!(MubSet::from_text(&set.to_text()).unwrap(), set);
        }
    }
}

#[test]
fn total_is_zero_only_for_the_maximally_mixed_state() {
    for k in 1..=3 {
        let rho = DensityMatrix::maximally_mixed(k).unwrap();
        assert!(closed_form_total(&rho).abs() < TOL);
        let nearby = random_pure(k, 11).unwrap().to_density().mix(1e-3).unwrap();
        assert!(closed_form_total(&nearby) > TOL);
    }
}

#[test]
fn pauli_partition_text_round_trip() {
    let set = reference_set(3, &[]).unwrap();
    assert_eq!(MubSet::from_text(&set.to_text()).unwrap(), set);
}
