//! Property-based invariants of the dense linear-algebra layer: tensor
//! algebra, partial traces, the Hermitian eigensolver, and state containers.

use num_complex::Complex64;
use proptest::prelude::*;
use telsim::linalg::{
    fidelity_pure, hermitian_eigen, hermitian_exp, partial_trace, tensor_chain, tensor_product,
    ComplexMatrix, PureState,
};

/// Loose bound for chained float algebra on matrices with entries of order
/// one; individual operations are exact to machine precision, and the chains
/// exercised here multiply at most a handful of them.
const ALGEBRA_TOL: f64 = 1e-10;

fn complex_entries(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    proptest::collection::vec(
        (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im)),
        len,
    )
}

fn matrix_from(n: usize, entries: &[Complex64]) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |i, j| entries[i * n + j])
}

fn hermitian_from(n: usize, entries: &[Complex64]) -> ComplexMatrix {
    let m = matrix_from(n, entries);
    let half = Complex64::new(0.5, 0.0);
    (&m + &m.dagger()).scale(half)
}

/// `(dim, entries)` pairs for a square matrix with `dim` in `2..=max_dim`.
fn square(max_dim: usize) -> impl Strategy<Value = (usize, Vec<Complex64>)> {
    (2..=max_dim).prop_flat_map(|n| (Just(n), complex_entries(n * n)))
}

proptest! {
    #[test]
    fn tensor_trace_is_multiplicative(a in square(4), b in square(4)) {
        let (na, ea) = a;
        let (nb, eb) = b;
        let ma = matrix_from(na, &ea);
        let mb = matrix_from(nb, &eb);
        let joint = tensor_product(&ma, &mb).unwrap();
        let lhs = joint.trace();
        let rhs = ma.trace() * mb.trace();
        prop_assert!((lhs - rhs).norm() < ALGEBRA_TOL);
    }

    #[test]
    fn partial_trace_recovers_each_tensor_factor(a in square(3), b in square(3)) {
        let (na, ea) = a;
        let (nb, eb) = b;
        let ma = matrix_from(na, &ea);
        let mb = matrix_from(nb, &eb);
        let joint = tensor_product(&ma, &mb).unwrap();
        let left = partial_trace(&joint, &[na, nb], &[0]).unwrap();
        let right = partial_trace(&joint, &[na, nb], &[1]).unwrap();
        prop_assert!(left.max_abs_diff(&ma.scale(mb.trace())) < ALGEBRA_TOL);
        prop_assert!(right.max_abs_diff(&mb.scale(ma.trace())) < ALGEBRA_TOL);
    }

    #[test]
    fn partial_trace_over_everything_equals_the_trace(a in square(3), b in square(3)) {
        let (na, ea) = a;
        let (nb, eb) = b;
        let joint = tensor_product(&matrix_from(na, &ea), &matrix_from(nb, &eb)).unwrap();
        let scalar = partial_trace(&joint, &[na, nb], &[]).unwrap();
        prop_assert_eq!(scalar.rows(), 1);
        prop_assert!((scalar[(0, 0)] - joint.trace()).norm() < ALGEBRA_TOL);
    }

    #[test]
    fn tensor_chain_is_associative(
        a in square(2),
        b in square(3),
        c in square(2),
    ) {
        let (na, ea) = a;
        let (nb, eb) = b;
        let (nc, ec) = c;
        let ma = matrix_from(na, &ea);
        let mb = matrix_from(nb, &eb);
        let mc = matrix_from(nc, &ec);
        let left = tensor_product(&tensor_product(&ma, &mb).unwrap(), &mc).unwrap();
        let right = tensor_product(&ma, &tensor_product(&mb, &mc).unwrap()).unwrap();
        let chained = tensor_chain(&[&ma, &mb, &mc]).unwrap();
        // Scalar multiplication is not associative in floats, so the two
        // groupings agree only to round-off; the chain folds left and must
        // reproduce the left grouping bitwise.
        prop_assert!(left.max_abs_diff(&right) < ALGEBRA_TOL);
        prop_assert!(left.max_abs_diff(&chained) == 0.0);
    }

    #[test]
    fn product_dagger_reverses_factors(a in square(4), b in square(4)) {
        let (na, ea) = a;
        let (nb, eb) = b;
        prop_assume!(na == nb);
        let ma = matrix_from(na, &ea);
        let mb = matrix_from(nb, &eb);
        let lhs = (&ma * &mb).dagger();
        let rhs = &mb.dagger() * &ma.dagger();
        prop_assert!(lhs.max_abs_diff(&rhs) < ALGEBRA_TOL);
    }

    #[test]
    fn eigendecomposition_reconstructs_hermitian_input(m in square(5)) {
        let (n, entries) = m;
        let h = hermitian_from(n, &entries);
        let eig = hermitian_eigen(&h).unwrap();
        let id = ComplexMatrix::identity(n);
        prop_assert!((&eig.vectors * &eig.vectors.dagger()).max_abs_diff(&id) < ALGEBRA_TOL);
        let diag = ComplexMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(eig.values[i], 0.0)
            } else {
                Complex64::ZERO
            }
        });
        let rebuilt = &(&eig.vectors * &diag) * &eig.vectors.dagger();
        prop_assert!(rebuilt.max_abs_diff(&h) < ALGEBRA_TOL);
    }

    #[test]
    fn hermitian_exponential_is_unitary_and_composes(
        m in square(4),
        t1 in -2.0..2.0f64,
        t2 in -2.0..2.0f64,
    ) {
        let (n, entries) = m;
        let h = hermitian_from(n, &entries);
        let u1 = hermitian_exp(&h, t1).unwrap();
        let u2 = hermitian_exp(&h, t2).unwrap();
        let both = hermitian_exp(&h, t1 + t2).unwrap();
        let id = ComplexMatrix::identity(n);
        prop_assert!((&u1 * &u1.dagger()).max_abs_diff(&id) < ALGEBRA_TOL);
        prop_assert!((&u2 * &u1).max_abs_diff(&both) < ALGEBRA_TOL);
    }

    #[test]
    fn fidelity_ignores_the_global_phase_of_the_target(
        amps in complex_entries(3),
        theta in 0.0..std::f64::consts::TAU,
    ) {
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let scaled: Vec<Complex64> = amps.iter().map(|z| z / norm).collect();
        let psi = PureState::new(scaled.clone()).unwrap();
        let phase = Complex64::from_polar(1.0, theta);
        let rotated = PureState::new(scaled.iter().map(|z| z * phase).collect()).unwrap();
        let rho = psi.density();
        let f_plain = fidelity_pure(&rho, &psi).unwrap();
        let f_rotated = fidelity_pure(&rho, &rotated).unwrap();
        prop_assert!((f_plain - 1.0).abs() < ALGEBRA_TOL);
        prop_assert!((f_plain - f_rotated).abs() < ALGEBRA_TOL);
    }

    #[test]
    fn pure_density_matrices_are_projectors(amps in complex_entries(4)) {
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        prop_assume!(norm > 1e-3);
        let psi = PureState::new(amps.iter().map(|z| z / norm).collect()).unwrap();
        let rho = psi.density();
        let m = rho.matrix();
        prop_assert!((m * m).max_abs_diff(m) < ALGEBRA_TOL);
        prop_assert!((m.trace() - Complex64::ONE).norm() < ALGEBRA_TOL);
    }
}
