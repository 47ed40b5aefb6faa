use qutrit_bell::decomp::{decompose_gamma, lift_to_qubits};
use qutrit_bell::matrix::{expectation, hermitian_eig};
use qutrit_bell::spin::{embed_state, SpinVariant};
use qutrit_bell::cglmp;

fn main() -> qutrit_bell::Result<()> {
    // Two-qutrit Bell operator and its maximum.
    let op = cglmp::canonical_operator();
    let eig = hermitian_eig(&op)?;
    println!("lambda_max = {:.12}", eig.max_eigenvalue()); // 1 + sqrt(11/3)

    // The same operator as a 4-qubit operator, same coefficients.
    let coeffs = decompose_gamma(&op, SpinVariant::A)?;
    let lifted = lift_to_qubits(&coeffs)?;

    // Expectations agree through the embedding.
    let psi = cglmp::optimal_state();
    let embedded = embed_state(&psi, SpinVariant::A)?;
    assert!((expectation(&op, &psi)? - expectation(&lifted, &embedded)?).abs() < 1e-10);
    Ok(())
}
