//! Dense complex matrices, state vectors, and a Hermitian eigensolver.
//!
//! Everything here is sized for the operators this crate actually builds
//! (at most 64x64). Matrices and state vectors are immutable after
//! construction; all operations return new values, so sharing across
//! threads needs no synchronization.
//!
//! Serialized forms:
//! operators `{"dim": n, "entries": [[[re, im], ...], ...]}` (row-major),
//! states `{"dim": n, "amplitudes": [[re, im], ...]}`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute tolerance below which a matrix counts as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Dense square matrix of complex numbers, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        ComplexMatrix {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    /// Identity matrix of the given dimension.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build a matrix by evaluating `f(row, col)`.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m.entries[i * dim + j] = f(i, j);
            }
        }
        m
    }

    /// Build from rows of (re, im) pairs; every row must have length `dim`.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidData {
                detail: "matrix needs at least one row".into(),
            });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            entries.extend(row.iter().map(|&(re, im)| Complex64::new(re, im)));
        }
        Ok(ComplexMatrix { dim, entries })
    }

    /// Build a matrix with the given real entries on listed positions, zero elsewhere.
    pub fn from_real_sparse(dim: usize, entries: &[(usize, usize, f64)]) -> Self {
        let mut m = Self::zeros(dim);
        for &(i, j, v) in entries {
            m.entries[i * dim + j] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    /// Largest absolute deviation from Hermiticity, max |M[i][j] - conj(M[j][i])|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    fn require_hermitian(&self) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: HERMITICITY_TOL,
            });
        }
        Ok(())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ComplexMatrix {
            dim: self.dim,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ComplexMatrix {
            dim: self.dim,
            entries,
        })
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Matrix product self * other.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product as a raw amplitude vector.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        let n = self.dim;
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.entries[i * n + j] * v[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &Self) -> Result<Complex64> {
        self.check_same_dim(other)?;
        let n = self.dim;
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..n {
            for b in 0..n {
                acc += self.entries[a * n + b] * other.entries[b * n + a];
            }
        }
        Ok(acc)
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest absolute entry of self - other.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff needs equal dimensions");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim == other.dim && self.max_abs_diff(other) <= tol
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }
}

/// Normalized state vector over a complex Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dim: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Normalize the amplitudes to unit norm; errors on the zero vector.
    pub fn normalize(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::ZeroVector);
        }
        let inv = 1.0 / norm;
        Ok(StateVector {
            dim: amplitudes.len(),
            amplitudes: amplitudes.iter().map(|a| a * inv).collect(),
        })
    }

    /// Computational basis state |k> of the given dimension.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index out of range");
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        StateVector { dim, amplitudes }
    }

    /// Build from real amplitudes and normalize.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::normalize(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Haar-agnostic random state: i.i.d. uniform complex amplitudes, normalized.
    /// Good enough for equality spot checks; not a Haar sample.
    pub fn random(dim: usize, rng: &mut impl rand::Rng) -> Self {
        loop {
            let amplitudes: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            if let Ok(s) = Self::normalize(amplitudes) {
                return s;
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn amplitude(&self, k: usize) -> Complex64 {
        self.amplitudes[k]
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Inner product <self|other> (antilinear in self).
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!(self.dim, other.dim, "inner product needs equal dimensions");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// |<self|other>|, the overlap magnitude.
    pub fn overlap_abs(&self, other: &Self) -> f64 {
        self.inner(other).norm()
    }

    /// Tensor product self (most significant factor) with other.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim * other.dim);
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        StateVector {
            dim: self.dim * other.dim,
            amplitudes,
        }
    }

    /// Multiply every amplitude by a unit phase.
    pub fn with_phase(&self, phase: Complex64) -> Self {
        StateVector {
            dim: self.dim,
            amplitudes: self.amplitudes.iter().map(|a| a * phase).collect(),
        }
    }

    /// Fix the global phase: the first amplitude of magnitude above 1e-6
    /// becomes real positive.
    pub fn canonical_phase(&self) -> Self {
        for a in &self.amplitudes {
            if a.norm() > 1e-6 {
                return self.with_phase(a.conj() / a.norm());
            }
        }
        self.clone()
    }

    /// Largest absolute amplitude difference.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "max_abs_diff needs equal dimensions");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Kronecker product; the left factor is the most significant block.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    ComplexMatrix::from_fn(da * db, |i, j| {
        a.get(i / db, j / db) * b.get(i % db, j % db)
    })
}

/// AB + BA.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.mul(b)?.add(&b.mul(a)?)
}

/// AB - BA.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.mul(b)?.sub(&b.mul(a)?)
}

/// <psi|M|psi> for Hermitian M; errors if the imaginary residue exceeds 1e-10.
pub fn expectation(m: &ComplexMatrix, psi: &StateVector) -> Result<f64> {
    if m.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            left: m.dim(),
            right: psi.dim(),
        });
    }
    m.require_hermitian()?;
    let mv = m.mul_vec(psi.amplitudes())?;
    let val: Complex64 = psi
        .amplitudes()
        .iter()
        .zip(&mv)
        .map(|(a, b)| a.conj() * b)
        .sum();
    if val.im.abs() > 1e-10 {
        return Err(Error::ImaginaryResidue { residue: val.im });
    }
    Ok(val.re)
}

/// Full spectrum of a Hermitian matrix.
///
/// Eigenvalues ascend; ties are broken by lexicographic order of the
/// phase-canonicalized eigenvector rounded to 9 decimals, making the
/// ordering deterministic.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<StateVector>,
}

impl EigenDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &[StateVector] {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    pub fn top_eigenvector(&self) -> &StateVector {
        self.eigenvectors.last().unwrap()
    }
}

fn round9(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Each rotation zeroes one off-diagonal entry with a phased Givens
/// rotation; sweeps repeat until the off-diagonal Frobenius mass drops
/// below 1e-12 relative to the matrix scale. Deterministic sweep order,
/// no dependencies, entirely adequate at dimension <= 64.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    m.require_hermitian()?;
    let n = m.dim();
    let mut a: Vec<Complex64> = m.entries.clone();
    let mut v: Vec<Complex64> = ComplexMatrix::identity(n).entries;

    let scale = m.frobenius_norm().max(1.0);
    let target = 1e-12 * scale;
    let max_sweeps = 100;
    let mut converged = false;

    for _sweep in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[i * n + j].norm_sqr();
                }
            }
        }
        let off = off.sqrt();
        if off <= target {
            converged = true;
            break;
        }

        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r <= 1e-300 {
                    continue;
                }
                let phi = apq / r;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * r);
                // (J^dag A J)[p][q] = r(c^2 - s^2) + cs(aqq - app), so t = s/c
                // must solve t^2 - 2*tau*t - 1 = 0; take the smaller root.
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Unitary J differs from identity only in rows/cols p, q:
                //   J[p][p] = c        J[p][q] = -s
                //   J[q][p] = s*conj(phi)   J[q][q] = c*conj(phi)
                // chosen so that (J^dag A J)[p][q] = 0.
                let jqp = Complex64::new(s, 0.0) * phi.conj();
                let jqq = Complex64::new(c, 0.0) * phi.conj();

                // A <- A J (columns p, q change).
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c + akq * jqp;
                    a[k * n + q] = akp * (-s) + akq * jqq;
                }
                // A <- J^dag A (rows p, q change).
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c + aqk * jqp.conj();
                    a[q * n + k] = apk * (-s) + aqk * jqq.conj();
                }
                // Accumulate eigenvectors: V <- V J.
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * c + vkq * jqp;
                    v[k * n + q] = vkp * (-s) + vkq * jqq;
                }
            }
        }
    }

    if !converged {
        let mut off = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off += a[i * n + j].norm_sqr();
                }
            }
        }
        return Err(Error::NoConvergence {
            sweeps: max_sweeps,
            off: off.sqrt(),
        });
    }

    let mut pairs: Vec<(f64, StateVector)> = (0..n)
        .map(|col| {
            let amplitudes: Vec<Complex64> = (0..n).map(|row| v[row * n + col]).collect();
            let vec = StateVector {
                dim: n,
                amplitudes,
            }
            .canonical_phase();
            (a[col * n + col].re, vec)
        })
        .collect();

    pairs.sort_by(|x, y| {
        let lx = round9(x.0);
        let ly = round9(y.0);
        lx.partial_cmp(&ly).unwrap().then_with(|| {
            for (ax, ay) in x.1.amplitudes().iter().zip(y.1.amplitudes()) {
                let c = round9(ax.re)
                    .partial_cmp(&round9(ay.re))
                    .unwrap()
                    .then(round9(ax.im).partial_cmp(&round9(ay.im)).unwrap());
                if c != std::cmp::Ordering::Equal {
                    return c;
                }
            }
            std::cmp::Ordering::Equal
        })
    });

    // Residual guard: ||Mv - lambda v||_inf <= 1e-9 ||M||_inf per pair.
    let m_inf = m.max_abs_entry().max(1e-300);
    for (lambda, vec) in &pairs {
        let mv = m.mul_vec(vec.amplitudes())?;
        let residual = mv
            .iter()
            .zip(vec.amplitudes())
            .map(|(x, y)| (x - y * Complex64::new(*lambda, 0.0)).norm())
            .fold(0.0, f64::max);
        if residual > 1e-9 * m_inf {
            return Err(Error::NoConvergence {
                sweeps: max_sweeps,
                off: residual,
            });
        }
    }

    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

// Serialized forms.

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    dim: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.dim)
            .map(|i| {
                (0..self.dim)
                    .map(|j| {
                        let z = self.get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        MatrixRepr {
            dim: self.dim,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.dim == 0 || repr.entries.len() != repr.dim {
            return Err(D::Error::custom("entries array must be dim x dim"));
        }
        let mut entries = Vec::with_capacity(repr.dim * repr.dim);
        for row in &repr.entries {
            if row.len() != repr.dim {
                return Err(D::Error::custom("entries array must be dim x dim"));
            }
            entries.extend(row.iter().map(|&[re, im]| Complex64::new(re, im)));
        }
        Ok(ComplexMatrix {
            dim: repr.dim,
            entries,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    dim: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        StateRepr {
            dim: self.dim,
            amplitudes: self.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StateRepr::deserialize(deserializer)?;
        if repr.amplitudes.len() != repr.dim {
            return Err(D::Error::custom("amplitudes length must equal dim"));
        }
        let amplitudes = repr
            .amplitudes
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::normalize(amplitudes).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// log_base(dim), or an error when dim is not a clean power.
pub fn power_of(base: usize, dim: usize) -> Result<usize> {
    let mut n = 0;
    let mut d = dim;
    while d > 1 {
        if d % base != 0 {
            return Err(Error::NotPowerOf { base, dim });
        }
        d /= base;
        n += 1;
    }
    if dim == 0 {
        return Err(Error::NotPowerOf { base, dim });
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::from_real_sparse(2, &[(0, 1, 1.0), (1, 0, 1.0)])
    }

    fn pauli_y() -> ComplexMatrix {
        ComplexMatrix::from_fn(2, |i, j| match (i, j) {
            (0, 1) => Complex64::new(0.0, -1.0),
            (1, 0) => Complex64::new(0.0, 1.0),
            _ => Complex64::new(0.0, 0.0),
        })
    }

    #[test]
    fn tensor_identity_case() {
        let i2 = ComplexMatrix::identity(2);
        assert!(tensor_product(&i2, &i2).approx_eq(&ComplexMatrix::identity(4), 0.0));
    }

    #[test]
    fn tensor_xx_is_antidiagonal() {
        let xx = tensor_product(&pauli_x(), &pauli_x());
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(xx.get(i, j), Complex64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn anticommutator_xy_vanishes() {
        let ac = anticommutator(&pauli_x(), &pauli_y()).unwrap();
        assert!(ac.max_abs_entry() <= 1e-15);
    }

    #[test]
    fn commutator_dimension_mismatch() {
        let err = commutator(&pauli_x(), &ComplexMatrix::identity(3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn eig_sorts_ascending() {
        let m = ComplexMatrix::from_real_sparse(3, &[(0, 0, 3.0), (1, 1, 1.0), (2, 2, 2.0)]);
        let eig = hermitian_eig(&m).unwrap();
        let expect = [1.0, 2.0, 3.0];
        for (got, want) in eig.eigenvalues().iter().zip(expect) {
            assert!((got - want).abs() <= 1e-12);
        }
    }

    #[test]
    fn eig_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_sparse(2, &[(0, 1, 1.0)]);
        assert!(matches!(
            hermitian_eig(&m),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn eig_random_hermitian_invariants() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let raw = ComplexMatrix::from_fn(9, |_, _| {
                Complex64::new(
                    rand::Rng::gen_range(&mut rng, -1.0..1.0),
                    rand::Rng::gen_range(&mut rng, -1.0..1.0),
                )
            });
            let h = raw.add(&raw.adjoint()).unwrap().scale_re(0.5);
            let eig = hermitian_eig(&h).unwrap();

            let trace_sum: f64 = eig.eigenvalues().iter().sum();
            assert!((trace_sum - h.trace().re).abs() <= 1e-9);

            // Orthonormality within 1e-9.
            for (i, vi) in eig.eigenvectors().iter().enumerate() {
                for (j, vj) in eig.eigenvectors().iter().enumerate() {
                    let g = vi.inner(vj);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((g - Complex64::new(expect, 0.0)).norm() <= 1e-9);
                }
            }

            // Reconstruction sum lambda_i v_i v_i^dag within 1e-8.
            let mut recon = ComplexMatrix::zeros(9);
            for (lambda, vec) in eig.eigenvalues().iter().zip(eig.eigenvectors()) {
                let outer = ComplexMatrix::from_fn(9, |r, c| {
                    vec.amplitude(r) * vec.amplitude(c).conj() * Complex64::new(*lambda, 0.0)
                });
                recon = recon.add(&outer).unwrap();
            }
            assert!(recon.max_abs_diff(&h) <= 1e-8);
        }
    }

    #[test]
    fn expectation_identity_is_one() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let psi = StateVector::random(5, &mut rng);
        let val = expectation(&ComplexMatrix::identity(5), &psi).unwrap();
        assert!((val - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn expectation_within_spectrum() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let raw = ComplexMatrix::from_fn(6, |_, _| {
            Complex64::new(
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
                rand::Rng::gen_range(&mut rng, -1.0..1.0),
            )
        });
        let h = raw.add(&raw.adjoint()).unwrap().scale_re(0.5);
        let eig = hermitian_eig(&h).unwrap();
        for _ in 0..20 {
            let psi = StateVector::random(6, &mut rng);
            let val = expectation(&h, &psi).unwrap();
            assert!(val >= eig.min_eigenvalue() - 1e-9);
            assert!(val <= eig.max_eigenvalue() + 1e-9);
        }
    }

    #[test]
    fn expectation_rejects_non_hermitian() {
        let m = ComplexMatrix::from_real_sparse(2, &[(0, 1, 1.0)]);
        let psi = StateVector::basis_state(2, 0);
        assert!(matches!(
            expectation(&m, &psi),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn degenerate_eigenvectors_order_deterministically() {
        let m = ComplexMatrix::identity(4);
        let e1 = hermitian_eig(&m).unwrap();
        let e2 = hermitian_eig(&m).unwrap();
        for (a, b) in e1.eigenvectors().iter().zip(e2.eigenvectors()) {
            assert!(a.max_abs_diff(b) == 0.0);
        }
    }

    #[test]
    fn matrix_json_round_trip() {
        let m = ComplexMatrix::from_fn(3, |i, j| Complex64::new(i as f64, j as f64));
        let text = serde_json::to_string(&m).unwrap();
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert!(m.approx_eq(&back, 0.0));
        assert!(text.starts_with("{\"dim\":3,\"entries\":"));
    }

    #[test]
    fn state_json_round_trip() {
        let s = StateVector::from_real(&[1.0, 2.0, 2.0]).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: StateVector = serde_json::from_str(&text).unwrap();
        assert!(s.max_abs_diff(&back) <= 1e-15);
    }

    #[test]
    fn power_of_checks() {
        assert_eq!(power_of(3, 27).unwrap(), 3);
        assert_eq!(power_of(2, 16).unwrap(), 4);
        assert!(power_of(3, 12).is_err());
    }
}
