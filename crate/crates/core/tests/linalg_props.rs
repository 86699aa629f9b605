mod common;

use common::{density_from, hermitian_from, psd_from};
use nalgebra::{Complex, Matrix4};
use proptest::prelude::*;
use werner_metrology::linalg::{hermitian_eig, kron, matrix_sqrt, partial_trace, Subsystem};

fn unit_entries(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eig_reconstructs_random_hermitian(xs in unit_entries(16)) {
        let a = hermitian_from(4, &xs);
        let eig = hermitian_eig(&a).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&a) <= 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        for i in 0..4 {
            for j in 0..4 {
                let ip: Complex<f64> = eig.eigenvectors[i]
                    .iter()
                    .zip(&eig.eigenvectors[j])
                    .map(|(x, y)| x.conj() * y)
                    .sum();
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((ip - Complex::new(want, 0.0)).norm() <= 1e-10);
            }
        }
    }

    #[test]
    fn sqrt_squares_back(xs in unit_entries(32)) {
        let a = psd_from(4, &xs);
        let s = matrix_sqrt(&a).unwrap();
        prop_assert!(s.is_hermitian(1e-12));
        prop_assert!((&s * &s).max_abs_diff(&a) <= 1e-8);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigenvalues_agree_with_nalgebra(xs in prop::collection::vec(-10.0f64..10.0, 16)) {
        let a = hermitian_from(4, &xs);
        let ours = hermitian_eig(&a).unwrap().eigenvalues;
        let m = Matrix4::from_fn(|i, j| a[(i, j)]);
        let mut theirs: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        theirs.sort_by(f64::total_cmp);
        for (x, y) in ours.iter().zip(&theirs) {
            prop_assert!((x - y).abs() <= 1e-9, "{ours:?} vs {theirs:?}");
        }
    }

    #[test]
    fn kron_trace_factorizes(xs in unit_entries(8), ys in unit_entries(8)) {
        let a = common::complex_from(2, &xs);
        let b = common::complex_from(2, &ys);
        let t = kron(&a, &b).trace();
        prop_assert!((t - a.trace() * b.trace()).norm() <= 1e-12);
    }

    #[test]
    fn partial_traces_are_states(xs in unit_entries(32)) {
        let rho = density_from(4, &xs);
        for keep in [Subsystem::First, Subsystem::Second] {
            let r = partial_trace(rho.matrix(), keep).unwrap();
            prop_assert!((r.trace().re - 1.0).abs() <= 1e-9);
            prop_assert!(r.is_hermitian(1e-9));
            prop_assert!(r.is_psd(1e-9));
        }
    }
}
