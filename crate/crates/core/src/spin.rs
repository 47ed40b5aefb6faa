//! Spin-1 operator bases, their two-qubit counterparts, and the
//! qutrit-to-symmetric-qubit-pair embedding.
//!
//! Two spin conventions are supported. Variant A is the standard spin-1
//! triple built from ladder operators; variant B is the adjoint (cross
//! product) representation. Either one generates the same nine-element
//! Hermitian operator basis pattern: three spins, three squared-spin
//! complements, three symmetrized products.
//!
//! On the qubit side the same algebra lives inside the triplet subspace
//! of two qubits, with the nine generators chosen to annihilate the
//! singlet. `solve_embedding` recovers the isometry between the two
//! pictures numerically instead of hardcoding it, then pins the global
//! phase so the images match the closed-form maps.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{hermitian_eig, power_of, ComplexMatrix, StateVector};

/// Which spin-1 matrix convention generates the qutrit basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinVariant {
    /// Ladder-built spin matrices; Sz diagonal.
    A,
    /// Adjoint representation; (S_k)_{ij} = -i eps_{kij}.
    B,
}

impl FromStr for SpinVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(SpinVariant::A),
            "b" => Ok(SpinVariant::B),
            other => Err(Error::InvalidData {
                detail: format!("unknown spin variant {other:?}, expected \"A\" or \"B\""),
            }),
        }
    }
}

impl fmt::Display for SpinVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpinVariant::A => write!(f, "A"),
            SpinVariant::B => write!(f, "B"),
        }
    }
}

/// The three spin-1 matrices (Sx, Sy, Sz) in the chosen convention.
pub fn spin_matrices(variant: SpinVariant) -> [ComplexMatrix; 3] {
    let z = |re: f64, im: f64| Complex64::new(re, im);
    match variant {
        SpinVariant::A => {
            let r = 1.0 / 2.0_f64.sqrt();
            let sx = ComplexMatrix::from_real_sparse(
                3,
                &[(0, 1, r), (1, 0, r), (1, 2, r), (2, 1, r)],
            );
            let sy = ComplexMatrix::from_fn(3, |i, j| match (i, j) {
                (0, 1) | (1, 2) => z(0.0, -r),
                (1, 0) | (2, 1) => z(0.0, r),
                _ => z(0.0, 0.0),
            });
            let sz = ComplexMatrix::from_real_sparse(3, &[(0, 0, 1.0), (2, 2, -1.0)]);
            [sx, sy, sz]
        }
        SpinVariant::B => {
            let sx = ComplexMatrix::from_fn(3, |i, j| match (i, j) {
                (1, 2) => z(0.0, -1.0),
                (2, 1) => z(0.0, 1.0),
                _ => z(0.0, 0.0),
            });
            let sy = ComplexMatrix::from_fn(3, |i, j| match (i, j) {
                (0, 2) => z(0.0, -1.0),
                (2, 0) => z(0.0, 1.0),
                _ => z(0.0, 0.0),
            });
            let sz = ComplexMatrix::from_fn(3, |i, j| match (i, j) {
                (0, 1) => z(0.0, 1.0),
                (1, 0) => z(0.0, -1.0),
                _ => z(0.0, 0.0),
            });
            [sx, sy, sz]
        }
    }
}

/// A labeled family of Hermitian matrices, trace-orthogonal with known norms.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    label: String,
    dim: usize,
    elements: Vec<ComplexMatrix>,
    norms: Vec<f64>,
}

impl OperatorBasis {
    fn new(label: &str, elements: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = elements[0].dim();
        for (idx, e) in elements.iter().enumerate() {
            if e.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: e.dim(),
                });
            }
            let dev = e.hermiticity_deviation();
            if dev > 1e-12 {
                return Err(Error::InvalidData {
                    detail: format!("basis element {} is not Hermitian (deviation {dev:e})", idx + 1),
                });
            }
        }
        let mut norms = Vec::with_capacity(elements.len());
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                let t = a.mul(b)?.trace();
                if i == j {
                    norms.push(t.re);
                } else if t.norm() > 1e-12 {
                    return Err(Error::InvalidData {
                        detail: format!(
                            "basis elements {} and {} are not trace-orthogonal (Tr = {t})",
                            i + 1,
                            j + 1
                        ),
                    });
                }
            }
        }
        Ok(OperatorBasis {
            label: label.to_string(),
            dim,
            elements,
            norms,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Element by 1-based index (the index used in coefficient tables).
    pub fn element(&self, index: u8) -> Result<&ComplexMatrix> {
        if index == 0 || index as usize > self.elements.len() {
            return Err(Error::BasisIndexOutOfRange { index });
        }
        Ok(&self.elements[index as usize - 1])
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Tr(element_i^2) for each element, 0-based slice.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }
}

/// Nine-element qutrit operator basis: spins, squared-spin complements,
/// symmetrized spin products.
pub fn gamma_basis(variant: SpinVariant) -> OperatorBasis {
    let [sx, sy, sz] = spin_matrices(variant);
    let id = ComplexMatrix::identity(3);
    let sq = |s: &ComplexMatrix| id.sub(&s.mul(s).unwrap()).unwrap();
    let sym = |a: &ComplexMatrix, b: &ComplexMatrix| {
        a.mul(b).unwrap().add(&b.mul(a).unwrap()).unwrap()
    };
    let elements = vec![
        sx.clone(),
        sy.clone(),
        sz.clone(),
        sq(&sx),
        sq(&sy),
        sq(&sz),
        sym(&sz, &sy),
        sym(&sx, &sz),
        sym(&sx, &sy),
    ];
    OperatorBasis::new(&format!("gamma[{variant}]"), elements)
        .expect("gamma basis is orthogonal by construction")
}

fn pauli(idx: usize) -> ComplexMatrix {
    let z = |re: f64, im: f64| Complex64::new(re, im);
    match idx {
        0 => ComplexMatrix::identity(2),
        1 => ComplexMatrix::from_real_sparse(2, &[(0, 1, 1.0), (1, 0, 1.0)]),
        2 => ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => z(0.0, -1.0),
            (1, 0) => z(0.0, 1.0),
            _ => z(0.0, 0.0),
        }),
        3 => ComplexMatrix::from_real_sparse(2, &[(0, 0, 1.0), (1, 1, -1.0)]),
        _ => unreachable!("Pauli index must be 0..=3"),
    }
}

/// Nine-element two-qubit basis mirroring the qutrit one inside the
/// triplet subspace. Every element annihilates the singlet state.
pub fn delta_basis() -> OperatorBasis {
    let i2 = ComplexMatrix::identity(2);
    let (x, y, zp) = (pauli(1), pauli(2), pauli(3));
    let two = |a: &ComplexMatrix, b: &ComplexMatrix| crate::matrix::tensor_product(a, b);
    let half_sym = |a: &ComplexMatrix| {
        two(&i2, a).add(&two(a, &i2)).unwrap().scale_re(0.5)
    };

    let d1 = half_sym(&x);
    let d2 = half_sym(&y);
    let d3 = half_sym(&zp);

    let i4 = ComplexMatrix::identity(4);
    let xx = two(&x, &x);
    let yy = two(&y, &y);
    let zz = two(&zp, &zp);
    let quarter = |m: ComplexMatrix| m.scale_re(0.25);
    let d4 = quarter(i4.sub(&xx).unwrap().add(&yy).unwrap().add(&zz).unwrap());
    let d5 = quarter(i4.add(&xx).unwrap().sub(&yy).unwrap().add(&zz).unwrap());
    let d6 = quarter(i4.add(&xx).unwrap().add(&yy).unwrap().sub(&zz).unwrap());

    let half_cross = |a: &ComplexMatrix, b: &ComplexMatrix| {
        two(a, b).add(&two(b, a)).unwrap().scale_re(0.5)
    };
    let d7 = half_cross(&y, &zp);
    let d8 = half_cross(&x, &zp);
    let d9 = half_cross(&x, &y);

    OperatorBasis::new("delta", vec![d1, d2, d3, d4, d5, d6, d7, d8, d9])
        .expect("delta basis is orthogonal by construction")
}

/// The two-qubit singlet (|01> - |10>)/sqrt(2).
pub fn singlet() -> StateVector {
    StateVector::from_real(&[0.0, 1.0, -1.0, 0.0]).expect("nonzero")
}

/// Isometry sending the qutrit basis states into the two-qubit triplet
/// subspace, represented by the three image states.
#[derive(Clone, Debug)]
pub struct StateEmbedding {
    images: [StateVector; 3],
}

impl StateEmbedding {
    fn new(images: [StateVector; 3]) -> Result<Self> {
        let s = singlet();
        for (i, a) in images.iter().enumerate() {
            for (j, b) in images.iter().enumerate() {
                let g = a.inner(b);
                let expect = if i == j { 1.0 } else { 0.0 };
                if (g - Complex64::new(expect, 0.0)).norm() > 1e-12 {
                    return Err(Error::InvalidData {
                        detail: format!("embedding images {i} and {j} are not orthonormal"),
                    });
                }
            }
            if s.inner(a).norm() > 1e-12 {
                return Err(Error::InvalidData {
                    detail: format!("embedding image {i} overlaps the singlet"),
                });
            }
        }
        Ok(StateEmbedding { images })
    }

    /// Image of qutrit basis state |k>.
    pub fn image(&self, k: usize) -> &StateVector {
        &self.images[k]
    }

    pub fn images(&self) -> &[StateVector; 3] {
        &self.images
    }
}

/// Solve for the embedding intertwining the qutrit basis with the
/// two-qubit one: delta_j W = W gamma_j for all nine j.
///
/// The gamma matrices act irreducibly, so the intertwiner is unique up
/// to one complex scalar. The linear system (108 equations in the 12
/// entries of W) is condensed into the 12x12 normal matrix M^dag M,
/// whose unique null eigenvector is W up to scale. Columns are then
/// normalized and the global phase is anchored on the first qutrit
/// image so the result reproduces the closed-form maps: for variant A
/// the anchor amplitude is real positive, for variant B it is +i times
/// a positive number.
pub fn solve_embedding(variant: SpinVariant) -> Result<StateEmbedding> {
    let gamma = gamma_basis(variant);
    let delta = delta_basis();

    // Flatten W (4x3) as w[r*3 + c]. Row a, column b of equation j:
    //   sum_r delta_j[a][r] w[r*3+b] - sum_s gamma_j[s][b] w[a*3+s] = 0.
    let unknowns = 12;
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(9 * 12);
    for j in 0..9 {
        let dj = &delta.elements()[j];
        let gj = &gamma.elements()[j];
        for a in 0..4 {
            for b in 0..3 {
                let mut row = vec![Complex64::new(0.0, 0.0); unknowns];
                for r in 0..4 {
                    row[r * 3 + b] += dj.get(a, r);
                }
                for s in 0..3 {
                    row[a * 3 + s] -= gj.get(s, b);
                }
                rows.push(row);
            }
        }
    }

    // Normal matrix G = M^dag M; its kernel equals ker M.
    let g = ComplexMatrix::from_fn(unknowns, |i, j| {
        rows.iter().map(|row| row[i].conj() * row[j]).sum()
    });
    let eig = hermitian_eig(&g)?;
    let lambda0 = eig.eigenvalues()[0];
    if lambda0.abs() > 1e-10 {
        return Err(Error::NoEmbedding {
            residual: lambda0.abs(),
            tolerance: 1e-10,
        });
    }
    let w = eig.eigenvectors()[0].clone();

    // Reshape into columns and normalize; W^dag W must be proportional
    // to the identity for an intertwiner between irreducible actions.
    let col = |b: usize| -> Vec<Complex64> { (0..4).map(|r| w.amplitude(r * 3 + b)).collect() };
    let col_norm = |c: &[Complex64]| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let n0 = col_norm(&col(0));
    for b in 1..3 {
        let nb = col_norm(&col(b));
        if (nb - n0).abs() > 1e-10 * n0.max(1.0) {
            return Err(Error::NoEmbedding {
                residual: (nb - n0).abs(),
                tolerance: 1e-10,
            });
        }
    }
    for b in 0..3 {
        for c in (b + 1)..3 {
            let dot: Complex64 = col(b)
                .iter()
                .zip(col(c))
                .map(|(x, y)| x.conj() * y)
                .sum();
            if dot.norm() > 1e-10 {
                return Err(Error::NoEmbedding {
                    residual: dot.norm(),
                    tolerance: 1e-10,
                });
            }
        }
    }

    let mut images: Vec<StateVector> = (0..3)
        .map(|b| StateVector::normalize(col(b)))
        .collect::<Result<_>>()?;

    // Phase anchor on the first image's leading amplitude.
    let target_phase = match variant {
        SpinVariant::A => Complex64::new(1.0, 0.0),
        SpinVariant::B => Complex64::new(0.0, 1.0),
    };
    let lead = images[0]
        .amplitudes()
        .iter()
        .find(|a| a.norm() > 1e-6)
        .copied()
        .ok_or(Error::ZeroVector)?;
    let rotate = target_phase * lead.conj() / lead.norm();
    for img in &mut images {
        *img = img.with_phase(rotate);
    }

    let embedding = StateEmbedding::new([
        images[0].clone(),
        images[1].clone(),
        images[2].clone(),
    ])?;

    // The defining matrix-element condition, all 81 combinations.
    for j in 0..9 {
        let dj = &delta.elements()[j];
        let gj = &gamma.elements()[j];
        for i in 0..3 {
            let dv = dj.mul_vec(embedding.image(i).amplitudes())?;
            for k in 0..3 {
                let lhs: Complex64 = embedding
                    .image(k)
                    .amplitudes()
                    .iter()
                    .zip(&dv)
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                // Note transposed roles: lhs = <e_k| delta_j |e_i>.
                let rhs = gj.get(k, i);
                if (lhs - rhs).norm() > 1e-10 {
                    return Err(Error::NoEmbedding {
                        residual: (lhs - rhs).norm(),
                        tolerance: 1e-10,
                    });
                }
            }
        }
    }

    Ok(embedding)
}

/// Map an n-qutrit state into the 2n-qubit space by embedding each
/// qutrit factor. Errors unless the input dimension is a power of 3.
pub fn embed_state(psi: &StateVector, variant: SpinVariant) -> Result<StateVector> {
    let n = power_of(3, psi.dim())?;
    let embedding = solve_embedding(variant)?;
    let out_dim = 4usize.pow(n as u32);
    let mut out = vec![Complex64::new(0.0, 0.0); out_dim];
    for idx in 0..psi.dim() {
        let amp = psi.amplitude(idx);
        if amp.norm() < 1e-300 {
            continue;
        }
        // Decode base-3 digits, most significant first.
        let mut digits = vec![0usize; n];
        let mut rest = idx;
        for d in (0..n).rev() {
            digits[d] = rest % 3;
            rest /= 3;
        }
        let mut factor = StateVector::basis_state(1, 0);
        for &d in &digits {
            factor = factor.tensor(embedding.image(d));
        }
        for (slot, a) in factor.amplitudes().iter().enumerate() {
            out[slot] += amp * a;
        }
    }
    StateVector::normalize(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{commutator, expectation, tensor_product};

    const EPS: f64 = 1e-12;

    #[test]
    fn variant_a_matches_closed_form() {
        let [sx, sy, sz] = spin_matrices(SpinVariant::A);
        let r = 1.0 / 2.0_f64.sqrt();
        assert!((sx.get(0, 1) - Complex64::new(r, 0.0)).norm() <= EPS);
        assert!((sy.get(1, 0) - Complex64::new(0.0, r)).norm() <= EPS);
        assert!((sz.get(0, 0) - Complex64::new(1.0, 0.0)).norm() <= EPS);
        assert!((sz.get(2, 2) - Complex64::new(-1.0, 0.0)).norm() <= EPS);
    }

    #[test]
    fn spin_commutation_relations() {
        for variant in [SpinVariant::A, SpinVariant::B] {
            let s = spin_matrices(variant);
            for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
                let lhs = commutator(&s[a], &s[b]).unwrap();
                let rhs = s[c].scale(Complex64::new(0.0, 1.0));
                assert!(
                    lhs.approx_eq(&rhs, EPS),
                    "[S{a}, S{b}] != i S{c} for variant {variant}"
                );
            }
        }
    }

    #[test]
    fn spin_casimir_is_two() {
        for variant in [SpinVariant::A, SpinVariant::B] {
            let s = spin_matrices(variant);
            let mut total = ComplexMatrix::zeros(3);
            for m in &s {
                total = total.add(&m.mul(m).unwrap()).unwrap();
            }
            assert!(total.approx_eq(&ComplexMatrix::identity(3).scale_re(2.0), EPS));
        }
    }

    #[test]
    fn gamma_casimir_partition() {
        for variant in [SpinVariant::A, SpinVariant::B] {
            let gamma = gamma_basis(variant);
            let sum = gamma.elements()[3]
                .add(&gamma.elements()[4])
                .unwrap()
                .add(&gamma.elements()[5])
                .unwrap();
            assert!(sum.approx_eq(&ComplexMatrix::identity(3), EPS));
        }
    }

    #[test]
    fn gamma_norms() {
        let expect = [2.0, 2.0, 2.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0];
        for variant in [SpinVariant::A, SpinVariant::B] {
            let gamma = gamma_basis(variant);
            for (got, want) in gamma.norms().iter().zip(expect) {
                assert!((got - want).abs() <= EPS, "variant {variant}");
            }
        }
    }

    #[test]
    fn gamma_nine_is_anticommutator() {
        let [sx, sy, _] = spin_matrices(SpinVariant::A);
        let gamma = gamma_basis(SpinVariant::A);
        let anti = crate::matrix::anticommutator(&sx, &sy).unwrap();
        assert!(gamma.elements()[8].approx_eq(&anti, EPS));
    }

    #[test]
    fn delta_targets_bell_projectors() {
        let delta = delta_basis();
        // delta_4 = |Phi^-><Phi^-| with |Phi^-> = (|00> - |11>)/sqrt(2).
        let phim = StateVector::from_real(&[1.0, 0.0, 0.0, -1.0]).unwrap();
        let proj = ComplexMatrix::from_fn(4, |i, j| {
            phim.amplitude(i) * phim.amplitude(j).conj()
        });
        assert!(delta.elements()[3].approx_eq(&proj, EPS));

        let val = expectation(&delta.elements()[3], &phim).unwrap();
        assert!((val - 1.0).abs() <= EPS);
    }

    #[test]
    fn delta_annihilates_singlet() {
        let delta = delta_basis();
        let s = singlet();
        for (i, d) in delta.elements().iter().enumerate() {
            let dv = d.mul_vec(s.amplitudes()).unwrap();
            let norm: f64 = dv.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!(norm <= EPS, "delta_{} does not annihilate the singlet", i + 1);
        }
    }

    #[test]
    fn delta_projector_completeness() {
        let delta = delta_basis();
        let s = singlet();
        let singlet_proj =
            ComplexMatrix::from_fn(4, |i, j| s.amplitude(i) * s.amplitude(j).conj());
        let sum = delta.elements()[3]
            .add(&delta.elements()[4])
            .unwrap()
            .add(&delta.elements()[5])
            .unwrap();
        let expect = ComplexMatrix::identity(4).sub(&singlet_proj).unwrap();
        assert!(sum.approx_eq(&expect, EPS));
    }

    #[test]
    fn delta_norms_match_gamma_norms() {
        let delta = delta_basis();
        let expect = [2.0, 2.0, 2.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0];
        for (got, want) in delta.norms().iter().zip(expect) {
            assert!((got - want).abs() <= EPS);
        }
    }

    #[test]
    fn embedding_variant_a_closed_form() {
        let emb = solve_embedding(SpinVariant::A).unwrap();
        let r = 1.0 / 2.0_f64.sqrt();
        let e0 = StateVector::from_real(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        let e1 = StateVector::from_real(&[0.0, r, r, 0.0]).unwrap();
        let e2 = StateVector::from_real(&[0.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(emb.image(0).max_abs_diff(&e0) <= 1e-10);
        assert!(emb.image(1).max_abs_diff(&e1) <= 1e-10);
        assert!(emb.image(2).max_abs_diff(&e2) <= 1e-10);
    }

    #[test]
    fn embedding_variant_b_closed_form() {
        // The consistent variant-B solution: e0 = i(|00> - |11>)/sqrt(2),
        // e1 = -(|00> + |11>)/sqrt(2), e2 = i(|01> + |10>)/sqrt(2). With
        // e1 flipped to +, the matrix-element condition fails for
        // <e0| delta_3 |e1>, so the minus sign is forced.
        let emb = solve_embedding(SpinVariant::B).unwrap();
        let r = 1.0 / 2.0_f64.sqrt();
        let zi = |x: f64| Complex64::new(0.0, x);
        let zr = |x: f64| Complex64::new(x, 0.0);
        let e0 = StateVector::normalize(vec![zi(r), zr(0.0), zr(0.0), zi(-r)]).unwrap();
        let e1 = StateVector::normalize(vec![zr(-r), zr(0.0), zr(0.0), zr(-r)]).unwrap();
        let e2 = StateVector::normalize(vec![zr(0.0), zi(r), zi(r), zr(0.0)]).unwrap();
        assert!(emb.image(0).max_abs_diff(&e0) <= 1e-10);
        assert!(emb.image(1).max_abs_diff(&e1) <= 1e-10);
        assert!(emb.image(2).max_abs_diff(&e2) <= 1e-10);
    }

    #[test]
    fn embedding_matrix_elements_agree() {
        for variant in [SpinVariant::A, SpinVariant::B] {
            let emb = solve_embedding(variant).unwrap();
            let gamma = gamma_basis(variant);
            let delta = delta_basis();
            for j in 0..9 {
                for i in 0..3 {
                    for k in 0..3 {
                        let dv = delta.elements()[j]
                            .mul_vec(emb.image(k).amplitudes())
                            .unwrap();
                        let lhs: Complex64 = emb
                            .image(i)
                            .amplitudes()
                            .iter()
                            .zip(&dv)
                            .map(|(a, b)| a.conj() * b)
                            .sum();
                        let rhs = gamma.elements()[j].get(i, k);
                        assert!(
                            (lhs - rhs).norm() <= 1e-10,
                            "variant {variant} j={j} i={i} k={k}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn embed_two_qutrit_maximally_entangled() {
        // (|00> + |11> + |22>)/sqrt(3) maps onto
        // sqrt(2/3) GHZ_4 + sqrt(1/3) |psi^+>|psi^+>.
        let me = StateVector::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let emb = embed_state(&me, SpinVariant::A).unwrap();

        let mut ghz = vec![Complex64::new(0.0, 0.0); 16];
        ghz[0] = Complex64::new(1.0, 0.0);
        ghz[15] = Complex64::new(1.0, 0.0);
        let ghz = StateVector::normalize(ghz).unwrap();
        let psip = StateVector::from_real(&[0.0, 1.0, 1.0, 0.0]).unwrap();
        let pp = psip.tensor(&psip);

        let expect: Vec<Complex64> = (0..16)
            .map(|i| {
                ghz.amplitude(i) * Complex64::new((2.0f64 / 3.0).sqrt(), 0.0)
                    + pp.amplitude(i) * Complex64::new((1.0f64 / 3.0).sqrt(), 0.0)
            })
            .collect();
        let expect = StateVector::normalize(expect).unwrap();
        assert!(emb.max_abs_diff(&expect) <= 1e-10);
    }

    #[test]
    fn embed_three_qutrit_maximally_entangled() {
        let mut amps = vec![0.0; 27];
        amps[0] = 1.0;
        amps[13] = 1.0;
        amps[26] = 1.0;
        let me = StateVector::from_real(&amps).unwrap();
        let emb = embed_state(&me, SpinVariant::A).unwrap();

        let mut ghz = vec![Complex64::new(0.0, 0.0); 64];
        ghz[0] = Complex64::new(1.0, 0.0);
        ghz[63] = Complex64::new(1.0, 0.0);
        let ghz = StateVector::normalize(ghz).unwrap();
        let psip = StateVector::from_real(&[0.0, 1.0, 1.0, 0.0]).unwrap();
        let ppp = psip.tensor(&psip).tensor(&psip);

        let expect: Vec<Complex64> = (0..64)
            .map(|i| {
                ghz.amplitude(i) * Complex64::new((2.0f64 / 3.0).sqrt(), 0.0)
                    + ppp.amplitude(i) * Complex64::new((1.0f64 / 3.0).sqrt(), 0.0)
            })
            .collect();
        let expect = StateVector::normalize(expect).unwrap();
        assert!(emb.max_abs_diff(&expect) <= 1e-10);
    }

    #[test]
    fn embed_rejects_non_power_of_three() {
        let psi = StateVector::from_real(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            embed_state(&psi, SpinVariant::A),
            Err(Error::NotPowerOf { base: 3, .. })
        ));
    }

    #[test]
    fn embedding_preserves_inner_products() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for variant in [SpinVariant::A, SpinVariant::B] {
            for _ in 0..10 {
                let a = StateVector::random(9, &mut rng);
                let b = StateVector::random(9, &mut rng);
                let ea = embed_state(&a, variant).unwrap();
                let eb = embed_state(&b, variant).unwrap();
                assert!((a.inner(&b) - ea.inner(&eb)).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn delta_embeds_gamma_tensor_products() {
        // <psi| G1 (x) G2 |psi> must equal the lifted expectation on the
        // embedded state for spot-check pairs.
        let gamma = gamma_basis(SpinVariant::A);
        let delta = delta_basis();
        let me = StateVector::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let emb = embed_state(&me, SpinVariant::A).unwrap();
        for (i, j) in [(0, 0), (3, 4), (8, 8), (1, 6)] {
            let g = tensor_product(&gamma.elements()[i], &gamma.elements()[j]);
            let d = tensor_product(&delta.elements()[i], &delta.elements()[j]);
            let lhs = expectation(&g, &me).unwrap();
            let rhs = expectation(&d, &emb).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10, "pair ({i}, {j})");
        }
    }
}
