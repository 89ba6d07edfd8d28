#![allow(clippy::needless_range_loop)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use qgrav::gie::{gie_state, GieVariant};
use qgrav::interferometry::Axis;
use qgrav::nonlocality::{bell_state, BellKind};
use qgrav::quantum::{
    born_probabilities, entanglement_entropy, sample, schmidt_separability, tensor_all,
    Bipartition, DensityMatrix, Operator, ProjectiveMeasurement, StateVector, Tensor,
};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Eigenvalues of a 2×2 Hermitian matrix from its trace and determinant.
fn eig2(m: [[C64; 2]; 2]) -> (f64, f64) {
    let tr = (m[0][0] + m[1][1]).re;
    let det = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re;
    let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
    (tr / 2.0 + disc, tr / 2.0 - disc)
}

fn h2(l: f64) -> f64 {
    [l, 1.0 - l]
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum()
}

fn z_measurement() -> ProjectiveMeasurement {
    ProjectiveMeasurement::from_basis(&[StateVector::zero(), StateVector::one()], &["0", "1"])
        .unwrap()
}

#[test]
fn tensor_matches_cnot_convention() {
    let cnot = Operator::from_real_rows(&[
        &[1., 0., 0., 0.],
        &[0., 1., 0., 0.],
        &[0., 0., 0., 1.],
        &[0., 0., 1., 0.],
    ])
    .unwrap()
    .certify_unitary()
    .unwrap();
    // Control |1⟩ on the left flips the right factor.
    let input = StateVector::one().tensor(&StateVector::zero()).unwrap();
    let expected = StateVector::one().tensor(&StateVector::one()).unwrap();
    assert_eq!(cnot.apply(&input).unwrap(), expected);
    let untouched = StateVector::zero().tensor(&StateVector::one()).unwrap();
    assert_eq!(cnot.apply(&untouched).unwrap(), untouched);
}

#[test]
fn bell_partial_trace_is_half_identity() {
    // Oracle: ρ = |Φ+⟩⟨Φ+| written out entrywise; tracing out B sums the
    // diagonal 2×2 blocks ρ[(a,b),(a',b)].
    let amps = [FRAC_1_SQRT_2, 0.0, 0.0, FRAC_1_SQRT_2];
    let mut oracle = [[0.0; 2]; 2];
    for a in 0..2 {
        for a2 in 0..2 {
            for b in 0..2 {
                oracle[a][a2] += amps[2 * a + b] * amps[2 * a2 + b];
            }
        }
    }
    assert!((oracle[0][0] - 0.5).abs() < 1e-15 && (oracle[1][1] - 0.5).abs() < 1e-15);
    assert!(oracle[0][1] == 0.0 && oracle[1][0] == 0.0);
    let rho = bell_state(BellKind::PhiPlus).partial_trace(&[0]).unwrap();
    for a in 0..2 {
        for a2 in 0..2 {
            assert!((rho.entries()[(a, a2)] - c(oracle[a][a2], 0.0)).norm() < 1e-15);
        }
    }
    let via_density = DensityMatrix::from_pure(&bell_state(BellKind::PhiPlus))
        .partial_trace(&[0])
        .unwrap();
    assert!((via_density.entries() - rho.entries()).norm() < 1e-15);
}

#[test]
fn gie_reduced_state_eigenvalues() {
    // ρ_A = MM† with M = [[1,1],[1,e^{iφ}]]/2.
    for phi in [PI, 0.3, 2.0, -1.1] {
        let e = C64::from_polar(1.0, phi);
        let m = [[c(0.5, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), e / 2.0]];
        let mut rho = [[c(0.0, 0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                rho[i][j] = m[i][0] * m[j][0].conj() + m[i][1] * m[j][1].conj();
            }
        }
        let (l1, l2) = eig2(rho);
        let reduced = gie_state(phi, GieVariant::Path)
            .unwrap()
            .partial_trace(&[0])
            .unwrap();
        let ev = reduced.eigenvalues();
        assert!(
            (ev[0] - l1).abs() < 1e-12 && (ev[1] - l2).abs() < 1e-12,
            "φ={phi}: {ev:?}"
        );
        let s = entanglement_entropy(
            &gie_state(phi, GieVariant::Path).unwrap(),
            &Bipartition::first(),
        )
        .unwrap();
        assert!((s - h2(l1)).abs() < 1e-9);
    }
    let ev = gie_state(PI, GieVariant::Path)
        .unwrap()
        .partial_trace(&[0])
        .unwrap()
        .eigenvalues();
    assert!((ev[0] - 0.5).abs() < 1e-12 && (ev[1] - 0.5).abs() < 1e-12);
}

#[test]
fn entropy_examples() {
    let product = StateVector::plus().tensor(&StateVector::one()).unwrap();
    assert_eq!(
        entanglement_entropy(&product, &Bipartition::first()).unwrap(),
        0.0
    );
    for kind in BellKind::ALL {
        let s = entanglement_entropy(&bell_state(kind), &Bipartition::first()).unwrap();
        assert!((s - 1.0).abs() < 1e-9);
    }
    let gie = gie_state(PI, GieVariant::Path).unwrap();
    assert!((entanglement_entropy(&gie, &Bipartition::first()).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn schmidt_examples() {
    let d = schmidt_separability(&bell_state(BellKind::PhiPlus), None).unwrap();
    assert_eq!(d.coefficients.len(), 2);
    assert!(d
        .coefficients
        .iter()
        .all(|s| (s - FRAC_1_SQRT_2).abs() < 1e-12));
    // φ = 0 factors as |+⟩|+⟩.
    let gie0 = gie_state(0.0, GieVariant::Path).unwrap();
    let d = schmidt_separability(&gie0, None).unwrap();
    assert!(d.is_separable());
    assert!(gie0.approx_eq(
        &StateVector::plus().tensor(&StateVector::plus()).unwrap(),
        1e-15
    ));
}

#[test]
fn balanced_sampling_within_three_sigma() {
    let n = 100_000u64;
    let r = sample(&StateVector::plus(), &z_measurement(), 2024, n).unwrap();
    let sigma = (n as f64 * 0.25).sqrt();
    for count in r.counts {
        assert!(
            (count as f64 - n as f64 / 2.0).abs() <= 3.0 * sigma,
            "count {count}"
        );
    }
}

#[test]
fn sequential_z_x_z_via_post_states() {
    // Post-state chain, shot by shot: z up, then x (random), then z again.
    let z = Axis::Z.measurement();
    let x = Axis::X.measurement();
    let first = z.post_state(&StateVector::zero(), 0).unwrap();
    let mut up = 0u64;
    let n = 100_000u64;
    for k in 0..2u64 {
        let after_x = x.post_state(&first, k as usize).unwrap();
        let p_up = born_probabilities(&after_x, &z).unwrap().probabilities[0];
        assert!((p_up - 0.5).abs() < 1e-12);
        up += sample(&after_x, &z, 11 + k, n / 2).unwrap().counts[0];
    }
    let sigma = (n as f64 * 0.25).sqrt();
    assert!((up as f64 - n as f64 / 2.0).abs() <= 4.0 * sigma);
}

fn arb_state(n_qubits: usize) -> impl Strategy<Value = StateVector> {
    let dim = 1usize << n_qubits;
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("non-zero", |v| {
            v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3
        })
        .prop_map(move |v| {
            StateVector::normalized(
                v.into_iter().map(|(a, b)| c(a, b)).collect(),
                vec![2; n_qubits],
            )
            .unwrap()
        })
}

/// Random 2×2 unitary `e^{iα}[[a, −b*],[b, a*]]`.
fn arb_unitary() -> impl Strategy<Value = Operator> {
    (0.0..PI, 0.0..2.0 * PI, 0.0..2.0 * PI, 0.0..2.0 * PI).prop_map(|(theta, p1, p2, alpha)| {
        let a = C64::from_polar(theta.cos(), p1);
        let b = C64::from_polar(theta.sin(), p2);
        let g = C64::from_polar(1.0, alpha);
        Operator::from_rows(&[vec![g * a, -g * b.conj()], vec![g * b, g * a.conj()]])
            .unwrap()
            .certify_unitary()
            .unwrap()
    })
}

proptest! {
    #[test]
    fn unitaries_preserve_norm(s in arb_state(2), u in arb_unitary(), v in arb_unitary()) {
        let out = u.tensor(&v).unwrap().apply(&s).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn probabilities_complete(s in arb_state(3)) {
        let d = born_probabilities(&s, &ProjectiveMeasurement::computational(8).unwrap()).unwrap();
        prop_assert!((d.probabilities.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn entropy_same_from_both_sides(s in arb_state(3), side in 0usize..3) {
        let cut = Bipartition::new(vec![side]);
        let a = entanglement_entropy(&s, &cut).unwrap();
        let b = entanglement_entropy(&s, &cut.complement(3)).unwrap();
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!((-1e-12..=1.0 + 1e-9).contains(&a));
    }

    #[test]
    fn partial_trace_routes_agree(s in arb_state(3), keep in prop::sample::subsequence(vec![0usize, 1, 2], 1..3)) {
        let direct = s.partial_trace(&keep).unwrap();
        let via_density = DensityMatrix::from_pure(&s).partial_trace(&keep).unwrap();
        prop_assert!((direct.entries() - via_density.entries()).norm() < 1e-12);
    }

    #[test]
    fn tensor_associative(a in arb_state(1), b in arb_state(1), cc in arb_state(1)) {
        let left = a.tensor(&b).unwrap().tensor(&cc).unwrap();
        let right = a.tensor(&b.tensor(&cc).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-15));
        prop_assert_eq!(left.subsystem_dims(), right.subsystem_dims());
        prop_assert!(tensor_all(&[a, b, cc]).unwrap().approx_eq(&left, 1e-15));
    }

    #[test]
    fn local_unitaries_keep_product_states_separable(
        a in arb_state(1), b in arb_state(1), u in arb_unitary(), v in arb_unitary()
    ) {
        let s = u.tensor(&v).unwrap().apply(&a.tensor(&b).unwrap()).unwrap();
        prop_assert!(schmidt_separability(&s, None).unwrap().is_separable());
    }
}

#[test]
fn sampling_converges_for_a_seed_batch() {
    let n = 100_000u64;
    let states = [
        StateVector::qubit(c(0.6, 0.0), c(0.0, 0.8)).unwrap(),
        StateVector::plus(),
        StateVector::qubit(c(0.1f64.sqrt(), 0.0), c(0.9f64.sqrt(), 0.0)).unwrap(),
    ];
    for (k, s) in states.iter().enumerate() {
        for seed in 0..5u64 {
            let p = born_probabilities(s, &z_measurement())
                .unwrap()
                .probabilities;
            let r = sample(s, &z_measurement(), seed * 31 + k as u64, n).unwrap();
            for (pi, count) in p.iter().zip(&r.counts) {
                let sigma = (n as f64 * pi * (1.0 - pi)).sqrt();
                assert!((*count as f64 - n as f64 * pi).abs() <= 4.0 * sigma.max(1e-9));
            }
        }
    }
}
