use proptest::prelude::*;
use qwot::linalg::*;

fn hermitian(d: usize, entries: &[f64]) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, |i, j| C64::new(entries[2 * (i * d + j)], entries[2 * (i * d + j) + 1]));
    g.add(&g.adjoint()).scale(0.5)
}

fn hermitian_strategy(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = ComplexMatrix> {
    dims.prop_flat_map(|d| {
        prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |v| hermitian(d, &v))
    })
}

fn psd_strategy(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = ComplexMatrix> {
    hermitian_strategy(dims).prop_map(|h| h.matmul(&h))
}

fn density_strategy(d: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |v| {
        let h = hermitian(d, &v);
        let p = h.matmul(&h).add(&ComplexMatrix::identity(d).scale(1e-3));
        let tr = p.trace().re;
        p.scale(1.0 / tr)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eig_reconstructs_input(m in hermitian_strategy(2..=9)) {
        let e = hermitian_eig(&m).unwrap();
        let scale = m.frobenius_norm().max(1.0);
        prop_assert!(e.reconstruct().sub(&m).frobenius_norm() <= 1e-12 * scale);
        let v = &e.eigenvectors;
        let gram = v.adjoint().matmul(v).sub(&ComplexMatrix::identity(m.dim()));
        prop_assert!(gram.frobenius_norm() <= 1e-12);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn eig_is_deterministic(m in hermitian_strategy(2..=6)) {
        let a = hermitian_eig(&m).unwrap();
        let b = hermitian_eig(&m).unwrap();
        prop_assert_eq!(a.eigenvalues, b.eigenvalues);
        prop_assert_eq!(a.eigenvectors, b.eigenvectors);
    }

    #[test]
    fn sqrt_squares_back(m in psd_strategy(2..=6)) {
        let r = matrix_sqrt_psd(&m).unwrap();
        let scale = m.frobenius_norm().max(1e-300);
        prop_assert!(r.matmul(&r).sub(&m).frobenius_norm() <= 1e-10 * scale.max(1.0));
    }

    #[test]
    fn partial_trace_of_product_recovers_factor(
        (rho, sigma) in (2usize..=4).prop_flat_map(|d| (density_strategy(d), density_strategy(d)))
    ) {
        let d = rho.dim();
        let x = kron(&rho, &sigma);
        let m1 = partial_trace(&x, Subsystem::Second, d).unwrap();
        let m2 = partial_trace(&x, Subsystem::First, d).unwrap();
        prop_assert!(m1.sub(&rho).frobenius_norm() <= 1e-13);
        prop_assert!(m2.sub(&sigma).frobenius_norm() <= 1e-13);
    }

    #[test]
    fn kron_trace_factorizes(a in hermitian_strategy(2..=4), b in hermitian_strategy(2..=4)) {
        let t = kron(&a, &b).trace();
        prop_assert!((t - a.trace() * b.trace()).norm() <= 1e-13);
    }

    #[test]
    fn psd_projection_is_idempotent(m in hermitian_strategy(2..=6)) {
        let once = psd_project(&m).unwrap();
        let twice = psd_project(&once).unwrap();
        prop_assert!(twice.sub(&once).frobenius_norm() <= 1e-12);
        prop_assert!(hermitian_eig(&once).unwrap().min_eigenvalue() >= -1e-12);
    }

    #[test]
    fn transpose_commutes_with_squaring(m in hermitian_strategy(2..=5)) {
        let lhs = m.matmul(&m).transpose();
        let rhs = m.transpose().matmul(&m.transpose());
        prop_assert!(lhs.sub(&rhs).frobenius_norm() <= 1e-13);
    }
}
