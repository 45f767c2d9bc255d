use collsync::collision::{
    build_step_unitaries, labels, run_trajectory, InitialStateSpec, ModelParams, StepUnitaries, Strategy as Carry,
};
use collsync::linalg::{
    hermitian_eig, kron, partial_trace, psd_sqrt, unitary_from_hamiltonian, von_neumann_entropy, ComplexMatrix,
    DensityMatrix, SubsystemLayout,
};
use collsync::observables::{concurrence, mutual_information, Axis, SystemSpin};
use collsync::sync::{pearson, sliding_pearson, WindowSpec};
use collsync::Complex64;
use proptest::collection::vec;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    vec((-1.0..1.0f64, -1.0..1.0f64), rows * cols)
        .prop_map(move |v| ComplexMatrix::new(rows, cols, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    matrix(n, n).prop_map(|a| (&a + &a.adjoint()).scale(c(0.5, 0.0)))
}

fn unitary(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    hermitian(n).prop_map(|h| unitary_from_hamiltonian(&h, 1.0).unwrap())
}

/// `A A† / Tr(A A†)` for a random complex `A`.
fn density_matrix(qubits: usize) -> impl Strategy<Value = ComplexMatrix> {
    let n = 1 << qubits;
    matrix(n, n).prop_map(|a| {
        let m = a.matmul(&a.adjoint()).unwrap();
        let t = m.trace().re;
        m.scale(c(1.0 / t, 0.0))
    })
}

fn layout(names: &[&str]) -> SubsystemLayout {
    SubsystemLayout::new(names.iter().copied()).unwrap()
}

fn state(m: ComplexMatrix, names: &[&str]) -> DensityMatrix {
    DensityMatrix::new(m, layout(names)).unwrap()
}

fn pair(m: ComplexMatrix) -> DensityMatrix {
    state(m, &[labels::S1, labels::S2])
}

/// Entry `(r, s)` of `op` acting on qubit positions `targets` of an
/// `n`-qubit register, identity elsewhere; written out from bit indices.
fn embedded_entry(op: &ComplexMatrix, targets: &[usize], n: usize, r: usize, s: usize) -> Complex64 {
    let bit = |x: usize, p: usize| (x >> (n - 1 - p)) & 1;
    let others_equal = (0..n).filter(|p| !targets.contains(p)).all(|p| bit(r, p) == bit(s, p));
    if !others_equal {
        return c(0.0, 0.0);
    }
    let local = |x: usize| targets.iter().fold(0, |acc, &p| (acc << 1) | bit(x, p));
    op[(local(r), local(s))]
}

fn embedded(op: &ComplexMatrix, targets: &[usize], n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(1 << n, 1 << n, |r, s| embedded_entry(op, targets, n, r, s))
}

fn one_shot_total(u: &StepUnitaries) -> ComplexMatrix {
    let factors: [(&ComplexMatrix, &[usize]); 6] = [
        (&u.u_s1e1, &[0, 2]),
        (&u.u_s2e2, &[1, 3]),
        (&u.u_ss, &[0, 1]),
        (&u.u_s1, &[0]),
        (&u.u_s2, &[1]),
        (&u.u_swap, &[3, 4]),
    ];
    factors
        .iter()
        .fold(ComplexMatrix::identity(64), |acc, (op, t)| embedded(op, t, labels::FULL_QUBITS).matmul(&acc).unwrap())
}

fn model_params() -> impl Strategy<Value = ModelParams> {
    (0.0..0.3f64, 0.0..0.3f64, 0.5..1.5f64, 0.5..1.5f64, 0.05..0.5f64, 0.0..std::f64::consts::FRAC_PI_2, 0.0..5.0f64, 0.0..5.0f64)
        .prop_map(|(g_se, g_ss, omega1, omega2, dt_s, gamma, temp1, temp2)| ModelParams {
            g_se,
            g_ss,
            omega1,
            omega2,
            dt_s,
            gamma,
            temp1,
            temp2,
            strategy: Carry::KeepCorrelations,
        })
}

fn initial_state() -> impl Strategy<Value = InitialStateSpec> {
    (0.0..3.2f64, -3.2..3.2f64, 0.0..3.2f64, -3.2..3.2f64)
        .prop_map(|(theta1, phi1, theta2, phi2)| InitialStateSpec { theta1, phi1, theta2, phi2 })
}

/// Brute-force partial trace over a 3-qubit register, keeping qubit 0.
fn keep_first_of_three(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |a, b| (0..4).map(|k| m[(a * 4 + k, b * 4 + k)]).sum())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in matrix(2, 3), b in matrix(2, 2), d in matrix(3, 2)) {
        let left = kron(&kron(&a, &b), &d);
        let right = kron(&a, &kron(&b, &d));
        prop_assert!(left.max_abs_diff(&right) <= 1e-12);
    }

    #[test]
    fn kron_is_bilinear(a in matrix(2, 2), a2 in matrix(2, 2), b in matrix(3, 2), s in -2.0..2.0f64, t in -2.0..2.0f64) {
        let lhs = kron(&(&a.scale(c(s, 0.0)) + &a2.scale(c(0.0, t))), &b);
        let rhs = &kron(&a, &b).scale(c(s, 0.0)) + &kron(&a2, &b).scale(c(0.0, t));
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        let lhs = kron(&b, &(&a + &a2));
        let rhs = &kron(&b, &a) + &kron(&b, &a2);
        prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
    }

    #[test]
    fn partial_trace_of_product(a in density_matrix(1), b in density_matrix(2)) {
        let rho = state(a.clone(), &["a"]).tensor(&state(b.clone(), &["b", "c"])).unwrap();
        prop_assert!(partial_trace(&rho, &["a"]).unwrap().matrix().max_abs_diff(&a) <= 1e-12);
        prop_assert!(partial_trace(&rho, &["b", "c"]).unwrap().matrix().max_abs_diff(&b) <= 1e-12);
    }

    #[test]
    fn partial_trace_matches_index_sum(m in density_matrix(3)) {
        let rho = state(m.clone(), &["a", "b", "c"]);
        let reduced = partial_trace(&rho, &["a"]).unwrap();
        prop_assert!(reduced.matrix().max_abs_diff(&keep_first_of_three(&m)) <= 1e-12);
        for keep in [&["b"][..], &["a", "c"], &["c", "b"]] {
            let r = partial_trace(&rho, keep).unwrap();
            prop_assert!((r.matrix().trace() - c(1.0, 0.0)).norm() <= 1e-12);
        }
    }

    #[test]
    fn eigen_reconstruction(h in hermitian(4)) {
        let e = hermitian_eig(&h).unwrap();
        prop_assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(e.vectors.is_unitary(1e-10));
        let rebuilt = e.map_spectrum(|l| c(l, 0.0));
        prop_assert!(rebuilt.max_abs_diff(&h) <= 1e-10);
    }

    #[test]
    fn exponential_group_property(h in hermitian(4), t1 in -2.0..2.0f64, t2 in -2.0..2.0f64) {
        let u1 = unitary_from_hamiltonian(&h, t1).unwrap();
        let u2 = unitary_from_hamiltonian(&h, t2).unwrap();
        let u12 = unitary_from_hamiltonian(&h, t1 + t2).unwrap();
        prop_assert!(u1.is_unitary(1e-12));
        prop_assert!(u1.matmul(&u2).unwrap().max_abs_diff(&u12) <= 1e-10);
    }

    #[test]
    fn sqrt_squares_back(m in density_matrix(2)) {
        let r = psd_sqrt(&m).unwrap();
        prop_assert!(r.matmul(&r).unwrap().max_abs_diff(&m) <= 1e-10);
        prop_assert!(r.hermiticity_deviation() <= 1e-12);
    }

    #[test]
    fn entropy_is_unitarily_invariant(m in density_matrix(2), u in unitary(4)) {
        let s = von_neumann_entropy(&pair(m.clone())).unwrap();
        let mut rotated = m.conjugate_by(&u).unwrap();
        rotated.hermitize();
        let t = von_neumann_entropy(&pair(rotated)).unwrap();
        prop_assert!((s - t).abs() <= 1e-10);
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&s));
    }

    #[test]
    fn concurrence_local_unitary_invariance(m in density_matrix(2), u in unitary(2), v in unitary(2)) {
        let before = concurrence(&pair(m.clone())).unwrap();
        let mut rotated = m.conjugate_by(&kron(&u, &v)).unwrap();
        rotated.hermitize();
        let after = concurrence(&pair(rotated)).unwrap();
        prop_assert!((before - after).abs() <= 1e-10, "{before} vs {after}");
    }

    #[test]
    fn separable_mixtures_have_no_concurrence(
        factors in vec((density_matrix(1), density_matrix(1), 0.01..1.0f64), 1..5)
    ) {
        let total: f64 = factors.iter().map(|f| f.2).sum();
        let mix = factors
            .iter()
            .fold(ComplexMatrix::zeros(4, 4), |acc, (a, b, p)| &acc + &kron(a, b).scale(c(p / total, 0.0)));
        prop_assert!(concurrence(&pair(mix)).unwrap() <= 1e-10);
    }

    #[test]
    fn mutual_information_bounds(m in density_matrix(2)) {
        let i = mutual_information(&pair(m)).unwrap();
        prop_assert!((-1e-12..=2.0 + 1e-12).contains(&i), "{i}");
    }

    #[test]
    fn pearson_affine_invariance(
        xy in vec((-1.0..1.0f64, -1.0..1.0f64), 3..40),
        a in prop_oneof![-5.0..-0.1f64, 0.1..5.0f64],
        b in -3.0..3.0f64,
        k in prop_oneof![-5.0..-0.1f64, 0.1..5.0f64],
        d in -3.0..3.0f64,
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
        let r = pearson(&x, &y).unwrap().unwrap();
        prop_assert!(r.abs() <= 1.0);
        let xs: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let ys: Vec<f64> = y.iter().map(|v| k * v + d).collect();
        let s = pearson(&xs, &ys).unwrap().unwrap();
        prop_assert!((s - (a * k).signum() * r).abs() <= 1e-12);
    }

    #[test]
    fn unit_stride_window_count(len in 5usize..80, width in 2usize..5) {
        let x: Vec<f64> = (0..len).map(|i| (i as f64 * 0.7).sin()).collect();
        let y: Vec<f64> = (0..len).map(|i| (i as f64 * 1.3).cos()).collect();
        let s = sliding_pearson(&x, &y, WindowSpec::new(width, width - 1).unwrap()).unwrap();
        prop_assert_eq!(s.len(), len - width + 1);
        prop_assert!(s.points.iter().enumerate().all(|(k, p)| p.window_start == k + 1));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn pearson_is_bounded(xy in vec((-1.0..1.0f64, -1.0..1.0f64), 2..30)) {
        let (x, y): (Vec<f64>, Vec<f64>) = xy.into_iter().unzip();
        if let Some(r) = pearson(&x, &y).unwrap() {
            prop_assert!((-1.0..=1.0).contains(&r));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn total_unitary_matches_one_shot_product(p in model_params()) {
        let u = build_step_unitaries(&p).unwrap();
        prop_assert!(u.u_total.max_abs_diff(&one_shot_total(&u)) <= 1e-12);
    }

    #[test]
    fn strategies_agree_on_marginals_without_spin_coupling(p in model_params(), init in initial_state()) {
        let keep = ModelParams { g_ss: 0.0, gamma: 0.0, ..p };
        let erase = ModelParams { strategy: Carry::EraseCorrelations, ..keep };
        let a = run_trajectory(&init, &keep, 40).unwrap();
        let b = run_trajectory(&init, &erase, 40).unwrap();
        for (r, s) in a.records.iter().zip(&b.records) {
            for axis in [Axis::X, Axis::Y, Axis::Z] {
                for spin in [SystemSpin::S1, SystemSpin::S2] {
                    prop_assert!((r.spin(axis, spin) - s.spin(axis, spin)).abs() <= 1e-10);
                }
            }
        }
        let (s1, s2, _) = b.final_state.marginals().unwrap();
        let joint = a.final_state.joint().unwrap();
        prop_assert!(partial_trace(joint, &[labels::S1]).unwrap().matrix().max_abs_diff(s1.matrix()) <= 1e-10);
        prop_assert!(partial_trace(joint, &[labels::S2]).unwrap().matrix().max_abs_diff(s2.matrix()) <= 1e-10);
    }

    #[test]
    fn exchanging_the_spins_swaps_the_series(p in model_params(), init in initial_state()) {
        let p = ModelParams { gamma: 0.0, ..p };
        let q = ModelParams { omega1: p.omega2, omega2: p.omega1, temp1: p.temp2, temp2: p.temp1, ..p };
        let swapped = InitialStateSpec { theta1: init.theta2, phi1: init.phi2, theta2: init.theta1, phi2: init.phi1 };
        let a = run_trajectory(&init, &p, 40).unwrap();
        let b = run_trajectory(&swapped, &q, 40).unwrap();
        for (r, s) in a.records.iter().zip(&b.records) {
            prop_assert!((r.sx1 - s.sx2).abs() <= 1e-10 && (r.sx2 - s.sx1).abs() <= 1e-10);
        }
    }
}

#[test]
fn invariants_hold_over_six_thousand_steps() {
    for strategy in [Carry::KeepCorrelations, Carry::EraseCorrelations] {
        let p = ModelParams { strategy, temp1: 0.7, temp2: 0.3, ..ModelParams::reference() };
        let t = run_trajectory(&InitialStateSpec { theta1: 0.4, phi1: 0.9, theta2: 1.1, phi2: -0.2 }, &p, 6000).unwrap();
        assert_eq!(t.records.len(), 6000);
        assert!(t.drift.max_trace_error <= 1e-10, "{strategy:?}: {:?}", t.drift);
        assert!(t.drift.max_hermiticity <= 1e-10, "{strategy:?}: {:?}", t.drift);
        assert!(t.drift.min_eigenvalue >= -1e-8, "{strategy:?}: {:?}", t.drift);
    }
}
