//! Randomized invariant checks for the algebraic core: eigensolver
//! contracts, basis orthogonality, decomposition round trips, and the
//! embedding identities that make the qubit lift faithful.

use num_complex::Complex64;
use proptest::prelude::*;

use qutrit_bell::cglmp;
use qutrit_bell::decomp::{
    decompose_gamma, lift_to_qubits, pauli_expand, pauli_reconstruct, reconstruct_gamma,
};
use qutrit_bell::functional::{evaluate, lhv_bounds};
use qutrit_bell::matrix::{
    commutator, expectation, hermitian_eig, tensor_product, ComplexMatrix, StateVector,
};
use qutrit_bell::spin::{
    delta_basis, embed_state, gamma_basis, singlet, spin_matrices, SpinVariant,
};

fn herm(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(-1.0f64..1.0, dim * dim * 2).prop_map(move |raw| {
        let m = ComplexMatrix::from_fn(dim, |i, j| {
            let k = 2 * (i * dim + j);
            Complex64::new(raw[k], raw[k + 1])
        });
        m.add(&m.adjoint()).unwrap().scale_re(0.5)
    })
}

fn state(dim: usize) -> impl Strategy<Value = StateVector> {
    proptest::collection::vec(-1.0f64..1.0, dim * 2).prop_filter_map(
        "norm too small to normalize",
        move |raw| {
            let amps: Vec<Complex64> = (0..dim)
                .map(|k| Complex64::new(raw[2 * k], raw[2 * k + 1]))
                .collect();
            StateVector::normalize(amps).ok()
        },
    )
}

// Small Gaussian-integer entries keep every product exact in doubles,
// so associativity can be asserted entrywise with no tolerance.
fn int_matrix(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    proptest::collection::vec(-4i32..=4, dim * dim * 2).prop_map(move |raw| {
        ComplexMatrix::from_fn(dim, |i, j| {
            let k = 2 * (i * dim + j);
            Complex64::new(raw[k] as f64, raw[k + 1] as f64)
        })
    })
}

fn outer(v: &StateVector) -> ComplexMatrix {
    ComplexMatrix::from_fn(v.dim(), |i, j| v.amplitude(i) * v.amplitude(j).conj())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_product_is_associative(
        a in int_matrix(2),
        b in int_matrix(3),
        c in int_matrix(2),
    ) {
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        prop_assert_eq!(left.max_abs_diff(&right), 0.0);
    }

    #[test]
    fn eigendecomposition_contracts(m in herm(9)) {
        let eig = hermitian_eig(&m).unwrap();
        let lambdas = eig.eigenvalues();

        for w in lambdas.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }

        let lambda_sum: f64 = lambdas.iter().sum();
        prop_assert!((lambda_sum - m.trace().re).abs() <= 1e-9);

        let mut rebuilt = ComplexMatrix::zeros(m.dim());
        for (lambda, vec) in lambdas.iter().zip(eig.eigenvectors()) {
            rebuilt = rebuilt.add(&outer(vec).scale_re(*lambda)).unwrap();
        }
        prop_assert!(rebuilt.max_abs_diff(&m) <= 1e-8);
    }

    #[test]
    fn expectation_stays_inside_the_spectrum(m in herm(6), psi in state(6)) {
        let eig = hermitian_eig(&m).unwrap();
        let e = expectation(&m, &psi).unwrap();
        prop_assert!(e >= eig.min_eigenvalue() - 1e-9);
        prop_assert!(e <= eig.max_eigenvalue() + 1e-9);
    }

    #[test]
    fn embedding_preserves_inner_products(phi in state(3), psi in state(3)) {
        for variant in [SpinVariant::A, SpinVariant::B] {
            let ephi = embed_state(&phi, variant).unwrap();
            let epsi = embed_state(&psi, variant).unwrap();
            prop_assert!((ephi.inner(&epsi) - phi.inner(&psi)).norm() <= 1e-12);
        }
    }

    #[test]
    fn gamma_round_trip_single_qutrit(m in herm(3)) {
        for variant in [SpinVariant::A, SpinVariant::B] {
            let coeffs = decompose_gamma(&m, variant).unwrap();
            let back = reconstruct_gamma(&coeffs, variant).unwrap();
            prop_assert!(back.max_abs_diff(&m) <= 1e-10);
        }
    }

    #[test]
    fn gamma_round_trip_two_qutrits(m in herm(9)) {
        for variant in [SpinVariant::A, SpinVariant::B] {
            let coeffs = decompose_gamma(&m, variant).unwrap();
            let back = reconstruct_gamma(&coeffs, variant).unwrap();
            prop_assert!(back.max_abs_diff(&m) <= 1e-10);
        }
    }

    #[test]
    fn pauli_round_trip(m in herm(8)) {
        let poly = pauli_expand(&m).unwrap();
        let back = pauli_reconstruct(&poly).unwrap();
        prop_assert!(back.max_abs_diff(&m) <= 1e-10);
    }

    #[test]
    fn lift_lands_in_the_symmetric_block(m in herm(3)) {
        let sym = ComplexMatrix::identity(4).sub(&outer(&singlet())).unwrap();
        for variant in [SpinVariant::A, SpinVariant::B] {
            let coeffs = decompose_gamma(&m, variant).unwrap();
            let lifted = lift_to_qubits(&coeffs).unwrap();
            let projected = sym.mul(&lifted).unwrap().mul(&sym).unwrap();
            prop_assert!(projected.max_abs_diff(&lifted) <= 1e-10);
        }
    }

    #[test]
    fn lift_reproduces_expectations_on_embedded_states(m in herm(3), psi in state(3)) {
        let direct = expectation(&m, &psi).unwrap();
        for variant in [SpinVariant::A, SpinVariant::B] {
            let coeffs = decompose_gamma(&m, variant).unwrap();
            let lifted = lift_to_qubits(&coeffs).unwrap();
            let embedded = embed_state(&psi, variant).unwrap();
            let through = expectation(&lifted, &embedded).unwrap();
            prop_assert!((through - direct).abs() <= 1e-9);
        }
    }

    #[test]
    fn product_states_respect_classical_bounds(phi in state(3), psi in state(3)) {
        let f = cglmp::functional();
        let (lo, hi) = lhv_bounds(&f).unwrap();
        let settings = cglmp::canonical_settings().unwrap();
        let v = evaluate(&f, &settings, &phi.tensor(&psi)).unwrap();
        prop_assert!(v >= lo - 1e-9);
        prop_assert!(v <= hi + 1e-9);
    }
}

#[test]
fn bases_are_trace_orthogonal() {
    let bases = [
        gamma_basis(SpinVariant::A),
        gamma_basis(SpinVariant::B),
        delta_basis(),
    ];
    for basis in &bases {
        let elements = basis.elements();
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                if i != j {
                    let t = a.trace_product(b).unwrap();
                    assert!(
                        t.norm() <= 1e-12,
                        "{} elements {} and {} overlap: {t}",
                        basis.label(),
                        i + 1,
                        j + 1
                    );
                }
            }
        }
    }
}

#[test]
fn spin_matrices_obey_cyclic_commutators() {
    for variant in [SpinVariant::A, SpinVariant::B] {
        let [sx, sy, sz] = spin_matrices(variant);
        let i = Complex64::new(0.0, 1.0);
        let cases = [
            (commutator(&sx, &sy).unwrap(), &sz),
            (commutator(&sy, &sz).unwrap(), &sx),
            (commutator(&sz, &sx).unwrap(), &sy),
        ];
        for (lhs, rhs) in cases {
            assert!(lhs.max_abs_diff(&rhs.scale(i)) <= 1e-14);
        }
    }
}

#[test]
fn symmetric_basis_has_a_zero_singlet_block() {
    let p = outer(&singlet());
    for (k, d) in delta_basis().elements().iter().enumerate() {
        let block = p.mul(d).unwrap().mul(&p).unwrap();
        assert_eq!(
            block.max_abs_entry(),
            0.0,
            "delta_{} leaks onto the singlet",
            k + 1
        );
    }
}
