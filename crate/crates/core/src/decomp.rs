//! Tensor-basis decomposition of multi-qutrit operators, the lift to
//! qubit pairs, and Pauli-string expansion of multi-qubit operators.
//!
//! A Hermitian operator on n qutrits expands over products of the nine
//! basis elements with real coefficients obtained from trace inner
//! products. Reinterpreting the same coefficients over the two-qubit
//! counterpart basis lifts the operator to 2n qubits while preserving
//! all matrix elements between embedded states.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{power_of, tensor_product, ComplexMatrix};
use crate::spin::{delta_basis, gamma_basis, SpinVariant};

/// Real coefficients over n-fold products of the nine-element basis,
/// keyed by 1-based index tuples.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorCoefficients {
    n: usize,
    terms: BTreeMap<Vec<u8>, f64>,
}

impl TensorCoefficients {
    pub fn new(n: usize) -> Self {
        TensorCoefficients {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u8>, f64)>) -> Result<Self> {
        let mut out = Self::new(n);
        for (indices, coeff) in terms {
            out.add_term(&indices, coeff)?;
        }
        Ok(out)
    }

    /// Accumulate a coefficient onto an index tuple; entries cancelling
    /// to zero are dropped.
    pub fn add_term(&mut self, indices: &[u8], coeff: f64) -> Result<()> {
        if indices.len() != self.n {
            return Err(Error::ArityMismatch {
                detail: format!(
                    "index tuple {:?} has length {}, expected {}",
                    indices,
                    indices.len(),
                    self.n
                ),
            });
        }
        for &i in indices {
            if i == 0 || i > 9 {
                return Err(Error::BasisIndexOutOfRange { index: i });
            }
        }
        let slot = self.terms.entry(indices.to_vec()).or_insert(0.0);
        *slot += coeff;
        if slot.abs() < 1e-12 {
            self.terms.remove(indices);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, indices: &[u8]) -> f64 {
        self.terms.get(indices).copied().unwrap_or(0.0)
    }

    /// Terms in sorted index order.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u8>, f64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn max_abs_coeff_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<&Vec<u8>> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.sort();
        keys.dedup();
        keys.iter()
            .map(|k| (self.get(k) - other.get(k)).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffTermRepr {
    index: Vec<u8>,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct CoeffsRepr {
    n: usize,
    terms: Vec<CoeffTermRepr>,
}

impl Serialize for TensorCoefficients {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffsRepr {
            n: self.n,
            terms: self
                .iter()
                .map(|(k, v)| CoeffTermRepr {
                    index: k.clone(),
                    coeff: v,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TensorCoefficients {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CoeffsRepr::deserialize(d)?;
        let mut out = TensorCoefficients::new(repr.n);
        for t in repr.terms {
            out.add_term(&t.index, t.coeff)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

/// All n-fold products of basis elements for a 9-element basis, walked
/// by a callback to avoid materializing 9^n matrices at once.
fn for_each_index_tuple(n: usize, mut f: impl FnMut(&[u8]) -> Result<()>) -> Result<()> {
    let mut tuple = vec![1u8; n];
    loop {
        f(&tuple)?;
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            if tuple[pos] < 9 {
                tuple[pos] += 1;
                for t in &mut tuple[pos + 1..] {
                    *t = 1;
                }
                break;
            }
        }
    }
}

fn basis_product(basis: &crate::spin::OperatorBasis, indices: &[u8]) -> Result<ComplexMatrix> {
    let mut out = basis.element(indices[0])?.clone();
    for &i in &indices[1..] {
        out = tensor_product(&out, basis.element(i)?);
    }
    Ok(out)
}

/// Expand a Hermitian operator on n qutrits over the gamma product basis.
///
/// Coefficients are Tr(M Gamma_I) / prod Tr(gamma_i^2); imaginary parts
/// above 1e-10 are an error, magnitudes below 1e-12 are dropped.
pub fn decompose_gamma(m: &ComplexMatrix, variant: SpinVariant) -> Result<TensorCoefficients> {
    let n = power_of(3, m.dim())?;
    if n == 0 {
        return Err(Error::NotPowerOf { base: 3, dim: 1 });
    }
    let gamma = gamma_basis(variant);
    let mut coeffs = TensorCoefficients::new(n);
    for_each_index_tuple(n, |indices| {
        let g = basis_product(&gamma, indices)?;
        let t = m.trace_product(&g)?;
        if t.im.abs() > 1e-10 {
            return Err(Error::ImaginaryResidue { residue: t.im });
        }
        let norm: f64 = indices
            .iter()
            .map(|&i| gamma.norms()[i as usize - 1])
            .product();
        let c = t.re / norm;
        if c.abs() >= 1e-12 {
            coeffs.add_term(indices, c)?;
        }
        Ok(())
    })?;
    Ok(coeffs)
}

/// Rebuild the 3^n-dimensional operator from gamma coefficients.
pub fn reconstruct_gamma(
    coeffs: &TensorCoefficients,
    variant: SpinVariant,
) -> Result<ComplexMatrix> {
    let gamma = gamma_basis(variant);
    let dim = 3usize.pow(coeffs.n() as u32);
    let mut out = ComplexMatrix::zeros(dim);
    for (indices, c) in coeffs.iter() {
        let g = basis_product(&gamma, indices)?;
        out = out.add(&g.scale_re(c))?;
    }
    Ok(out)
}

/// Reinterpret gamma coefficients over the two-qubit counterpart basis,
/// producing the 4^n-dimensional lifted operator.
pub fn lift_to_qubits(coeffs: &TensorCoefficients) -> Result<ComplexMatrix> {
    let delta = delta_basis();
    let dim = 4usize.pow(coeffs.n() as u32);
    let mut out = ComplexMatrix::zeros(dim);
    for (indices, c) in coeffs.iter() {
        let d = basis_product(&delta, indices)?;
        out = out.add(&d.scale_re(c))?;
    }
    Ok(out)
}

/// Real-coefficient Pauli polynomial on a fixed number of qubits, keyed
/// by strings over {I, X, Y, Z} (leftmost character = qubit 1).
#[derive(Clone, Debug, PartialEq)]
pub struct PauliPolynomial {
    n_qubits: usize,
    terms: BTreeMap<String, f64>,
}

impl PauliPolynomial {
    pub fn new(n_qubits: usize) -> Self {
        PauliPolynomial {
            n_qubits,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        n_qubits: usize,
        terms: impl IntoIterator<Item = (String, f64)>,
    ) -> Result<Self> {
        let mut out = Self::new(n_qubits);
        for (string, coeff) in terms {
            out.add_term(&string, coeff)?;
        }
        Ok(out)
    }

    pub fn add_term(&mut self, string: &str, coeff: f64) -> Result<()> {
        if string.len() != self.n_qubits
            || !string.chars().all(|c| matches!(c, 'I' | 'X' | 'Y' | 'Z'))
        {
            return Err(Error::InvalidData {
                detail: format!(
                    "Pauli string {string:?} must be {} characters over I, X, Y, Z",
                    self.n_qubits
                ),
            });
        }
        let slot = self.terms.entry(string.to_string()).or_insert(0.0);
        *slot += coeff;
        if slot.abs() < 1e-12 {
            self.terms.remove(string);
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, string: &str) -> f64 {
        self.terms.get(string).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, f64)> {
        self.terms.iter().map(|(k, &v)| (k, v))
    }

    pub fn max_abs_coeff_diff(&self, other: &Self) -> f64 {
        let mut keys: Vec<&String> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.sort();
        keys.dedup();
        keys.iter()
            .map(|k| (self.get(k) - other.get(k)).abs())
            .fold(0.0, f64::max)
    }
}

#[derive(Serialize, Deserialize)]
struct PauliTermRepr {
    string: String,
    coeff: f64,
}

#[derive(Serialize, Deserialize)]
struct PauliRepr {
    n_qubits: usize,
    terms: Vec<PauliTermRepr>,
}

impl Serialize for PauliPolynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PauliRepr {
            n_qubits: self.n_qubits,
            terms: self
                .iter()
                .map(|(k, v)| PauliTermRepr {
                    string: k.clone(),
                    coeff: v,
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PauliPolynomial {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PauliRepr::deserialize(d)?;
        let mut out = PauliPolynomial::new(repr.n_qubits);
        for t in repr.terms {
            out.add_term(&t.string, t.coeff)
                .map_err(serde::de::Error::custom)?;
        }
        Ok(out)
    }
}

/// Per-qubit action of one Pauli letter on basis bit `v`: the image bit
/// and the phase picked up.
fn pauli_action(letter: u8, v: usize) -> (usize, Complex64) {
    match letter {
        b'I' => (v, Complex64::new(1.0, 0.0)),
        b'X' => (1 - v, Complex64::new(1.0, 0.0)),
        b'Y' => (
            1 - v,
            // Y|0> = i|1>, Y|1> = -i|0>; acting on v the phase is
            // i * (-1)^v attached to the flipped bit.
            Complex64::new(0.0, if v == 0 { 1.0 } else { -1.0 }),
        ),
        b'Z' => (v, Complex64::new(if v == 0 { 1.0 } else { -1.0 }, 0.0)),
        _ => unreachable!("validated Pauli letter"),
    }
}

/// Column image of a Pauli string on basis index `a`: the row index it
/// maps to and the phase, i.e. P|a> = phase |row>.
fn pauli_column_action(string: &str, a: usize, n: usize) -> (usize, Complex64) {
    let mut row = 0usize;
    let mut phase = Complex64::new(1.0, 0.0);
    for (pos, letter) in string.bytes().enumerate() {
        let shift = n - 1 - pos;
        let bit = (a >> shift) & 1;
        let (out_bit, p) = pauli_action(letter, bit);
        row |= out_bit << shift;
        phase *= p;
    }
    (row, phase)
}

/// Dense matrix of one Pauli string.
pub fn pauli_string_matrix(string: &str) -> Result<ComplexMatrix> {
    let n = string.len();
    if n == 0 || !string.chars().all(|c| matches!(c, 'I' | 'X' | 'Y' | 'Z')) {
        return Err(Error::InvalidData {
            detail: format!("invalid Pauli string {string:?}"),
        });
    }
    let dim = 1usize << n;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for a in 0..dim {
        let (row, phase) = pauli_column_action(string, a, n);
        entries[row * dim + a] = phase;
    }
    Ok(ComplexMatrix::from_fn(dim, |i, j| entries[i * dim + j]))
}

/// Expand a Hermitian 2^m-dimensional operator over Pauli strings.
///
/// Coefficient of string s is Tr(M s) / 2^m, computed through the
/// signed-permutation action without materializing s. Imaginary parts
/// above 1e-12 are an error; magnitudes below 1e-12 are dropped.
pub fn pauli_expand(m: &ComplexMatrix) -> Result<PauliPolynomial> {
    let n = power_of(2, m.dim())?;
    if n == 0 {
        return Err(Error::NotPowerOf { base: 2, dim: 1 });
    }
    let dim = m.dim();
    let letters = [b'I', b'X', b'Y', b'Z'];
    let mut poly = PauliPolynomial::new(n);
    let total = 4usize.pow(n as u32);
    let mut buf = vec![b'I'; n];
    for code in 0..total {
        let mut rest = code;
        for pos in (0..n).rev() {
            buf[pos] = letters[rest % 4];
            rest /= 4;
        }
        let string = std::str::from_utf8(&buf).unwrap();
        // Tr(M s) = sum_a M[a][pi(a)] phase_a where s|a> = phase_a |pi(a)>.
        let mut t = Complex64::new(0.0, 0.0);
        for a in 0..dim {
            let (row, phase) = pauli_column_action(string, a, n);
            t += m.get(a, row) * phase;
        }
        if t.im.abs() > 1e-12 {
            return Err(Error::ImaginaryResidue { residue: t.im });
        }
        let c = t.re / dim as f64;
        if c.abs() >= 1e-12 {
            poly.add_term(string, c)?;
        }
    }
    Ok(poly)
}

/// Rebuild the dense operator from a Pauli polynomial.
pub fn pauli_reconstruct(poly: &PauliPolynomial) -> Result<ComplexMatrix> {
    let n = poly.n_qubits();
    let dim = 1usize << n;
    let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (string, coeff) in poly.iter() {
        for a in 0..dim {
            let (row, phase) = pauli_column_action(string, a, n);
            entries[row * dim + a] += phase * Complex64::new(coeff, 0.0);
        }
    }
    Ok(ComplexMatrix::from_fn(dim, |i, j| entries[i * dim + j]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hermitian_eig;

    #[test]
    fn identity_decomposes_onto_casimir_complements() {
        let coeffs = decompose_gamma(&ComplexMatrix::identity(3), SpinVariant::A).unwrap();
        assert_eq!(coeffs.len(), 3);
        for idx in [4u8, 5, 6] {
            assert!((coeffs.get(&[idx]) - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn single_product_term_round_trips() {
        let gamma = gamma_basis(SpinVariant::A);
        let m = tensor_product(gamma.element(1).unwrap(), gamma.element(9).unwrap());
        let coeffs = decompose_gamma(&m, SpinVariant::A).unwrap();
        assert_eq!(coeffs.len(), 1);
        assert!((coeffs.get(&[1, 9]) - 1.0).abs() <= 1e-12);
        let back = reconstruct_gamma(&coeffs, SpinVariant::A).unwrap();
        assert!(back.approx_eq(&m, 1e-12));
    }

    #[test]
    fn random_hermitian_round_trip_both_variants() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for variant in [SpinVariant::A, SpinVariant::B] {
            let raw = ComplexMatrix::from_fn(9, |_, _| {
                Complex64::new(
                    rand::Rng::gen_range(&mut rng, -1.0..1.0),
                    rand::Rng::gen_range(&mut rng, -1.0..1.0),
                )
            });
            let h = raw.add(&raw.adjoint()).unwrap().scale_re(0.5);
            let coeffs = decompose_gamma(&h, variant).unwrap();
            let back = reconstruct_gamma(&coeffs, variant).unwrap();
            assert!(back.approx_eq(&h, 1e-10));
        }
    }

    #[test]
    fn lift_of_single_complement_is_bell_projector() {
        let coeffs = TensorCoefficients::from_terms(1, [(vec![4u8], 1.0)]).unwrap();
        let lifted = lift_to_qubits(&coeffs).unwrap();
        let phim = crate::matrix::StateVector::from_real(&[1.0, 0.0, 0.0, -1.0]).unwrap();
        let proj = ComplexMatrix::from_fn(4, |i, j| {
            phim.amplitude(i) * phim.amplitude(j).conj()
        });
        assert!(lifted.approx_eq(&proj, 1e-12));
    }

    #[test]
    fn pauli_expand_identity() {
        let poly = pauli_expand(&ComplexMatrix::identity(4)).unwrap();
        assert_eq!(poly.len(), 1);
        assert!((poly.get("II") - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn pauli_expand_single_string() {
        let m = pauli_string_matrix("XY").unwrap();
        let hm = m.clone();
        // XY is Hermitian as a tensor of Hermitian factors.
        assert!(hm.hermiticity_deviation() <= 1e-15);
        let poly = pauli_expand(&m).unwrap();
        assert_eq!(poly.len(), 1);
        assert!((poly.get("XY") - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn pauli_round_trip_random() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let raw = ComplexMatrix::from_fn(8, |_, _| {
            Complex64::new(
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
            )
        });
        let h = raw.add(&raw.adjoint()).unwrap().scale_re(0.5);
        let poly = pauli_expand(&h).unwrap();
        let back = pauli_reconstruct(&poly).unwrap();
        assert!(back.approx_eq(&h, 1e-10));
    }

    #[test]
    fn pauli_matrix_matches_tensor_build() {
        let x = pauli_string_matrix("X").unwrap();
        let y = pauli_string_matrix("Y").unwrap();
        let xy = pauli_string_matrix("XY").unwrap();
        assert!(xy.approx_eq(&tensor_product(&x, &y), 1e-15));
    }

    #[test]
    fn coefficients_serde_round_trip() {
        let coeffs =
            TensorCoefficients::from_terms(2, [(vec![1u8, 1], 2.0), (vec![4u8, 5], -1.0)])
                .unwrap();
        let text = serde_json::to_string(&coeffs).unwrap();
        let back: TensorCoefficients = serde_json::from_str(&text).unwrap();
        assert_eq!(coeffs, back);
    }

    #[test]
    fn pauli_serde_round_trip() {
        let poly =
            PauliPolynomial::from_terms(4, [("XXYY".to_string(), 0.25), ("IIXX".to_string(), -0.5)])
                .unwrap();
        let text = serde_json::to_string(&poly).unwrap();
        let back: PauliPolynomial = serde_json::from_str(&text).unwrap();
        assert_eq!(poly, back);
    }

    #[test]
    fn add_term_validates() {
        let mut coeffs = TensorCoefficients::new(2);
        assert!(matches!(
            coeffs.add_term(&[1], 1.0),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(matches!(
            coeffs.add_term(&[0, 1], 1.0),
            Err(Error::BasisIndexOutOfRange { index: 0 })
        ));
        assert!(matches!(
            coeffs.add_term(&[10, 1], 1.0),
            Err(Error::BasisIndexOutOfRange { index: 10 })
        ));
        let mut poly = PauliPolynomial::new(2);
        assert!(poly.add_term("XQ", 1.0).is_err());
        assert!(poly.add_term("XYZ", 1.0).is_err());
    }

    #[test]
    fn lift_preserves_spectral_radius_structure() {
        // Lifting adds the singlet-supported kernel but never new
        // nonzero eigenvalues: the lift of gamma_4 has eigenvalues
        // {0, 0, 0, 1} matching the qutrit {0, 0, 1} plus one zero.
        let coeffs = TensorCoefficients::from_terms(1, [(vec![4u8], 1.0)]).unwrap();
        let lifted = lift_to_qubits(&coeffs).unwrap();
        let eig = hermitian_eig(&lifted).unwrap();
        let expect = [0.0, 0.0, 0.0, 1.0];
        for (got, want) in eig.eigenvalues().iter().zip(expect) {
            assert!((got - want).abs() <= 1e-12);
        }
    }
}
