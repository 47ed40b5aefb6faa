//! The symmetric three-qutrit Bell expression and the bundled
//! coefficient tables for its operator, in two pictures: spin products
//! on 27 dimensions and Pauli pairs on six qubits.
//!
//! The two tables should describe the same operator, one as the qubit
//! lift of the other. They do not. Each table also assigns two
//! different values to one of its entries ((4,4,4) in the spin table,
//! (00)(33)(33) in the pair table), so every combination of readings is
//! compared by [`resolve_tables`]; none matches, and the first-listed
//! readings win the residual tie. Downstream code uses that canonical
//! reading, whose largest eigenvalue 3.5737 sits well below the
//! expression's quantum maximum (3 + sqrt(33))/2, so the reconstruction
//! is reported as inconsistent rather than patched.

use std::collections::{BTreeMap, BTreeSet};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use serde::Serialize;

use crate::decomp::{
    lift_to_qubits, pauli_reconstruct, reconstruct_gamma, PauliPolynomial, TensorCoefficients,
};
use crate::error::{Error, Result};
use crate::functional::{BellFunctional, Term};
use crate::golden;
use crate::matrix::{
    expectation, hermitian_eig, tensor_product, ComplexMatrix, StateVector,
};
use crate::spin::{singlet, SpinVariant};

/// The eight-term symmetric three-qutrit expression with deterministic
/// bounds (-3, 3). Each term is coeff * P(A + B + C == target mod 3)
/// under the listed settings, all outcome signs +1.
pub fn functional() -> BellFunctional {
    let term = |s: [usize; 3], target: u32, coeff: f64| Term::Prob {
        settings: s.to_vec(),
        signs: vec![1, 1, 1],
        target,
        coeff,
    };
    BellFunctional::new(
        3,
        2,
        3,
        vec![
            term([0, 0, 0], 0, 1.0),
            term([0, 1, 1], 1, 1.0),
            term([1, 0, 1], 1, 1.0),
            term([1, 1, 0], 1, 1.0),
            term([1, 1, 1], 0, 2.0),
            term([1, 0, 0], 2, -1.0),
            term([0, 1, 0], 2, -1.0),
            term([0, 0, 1], 2, -1.0),
        ],
        Some((-3.0, 3.0)),
    )
    .expect("fixed term list is valid")
}

/// Largest Bell-operator eigenvalue the expression admits over all
/// settings, (3 + sqrt(33))/2: three halves of the bipartite maximum.
pub fn functional_quantum_max() -> f64 {
    (3.0 + 33.0f64.sqrt()) / 2.0
}

/// (|000> + |111> + |222>)/sqrt(3).
pub fn me_state() -> StateVector {
    let w = 1.0 / 3.0f64.sqrt();
    let mut amps = vec![0.0; 27];
    amps[0] = w;
    amps[13] = w;
    amps[26] = w;
    StateVector::from_real(&amps).expect("nonzero")
}

const SLOT_ORDERS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// One row of the bundled spin-product table: a coefficient bound to an
/// index triple, optionally ranging over all distinct permutations of
/// the triple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GammaEntry {
    pub indices: [u8; 3],
    pub coefficient: f64,
    pub expand: bool,
}

impl GammaEntry {
    /// The distinct index triples this row denotes.
    pub fn triples(&self) -> Vec<[u8; 3]> {
        if !self.expand {
            return vec![self.indices];
        }
        let mut set = BTreeSet::new();
        for order in SLOT_ORDERS {
            set.insert([
                self.indices[order[0]],
                self.indices[order[1]],
                self.indices[order[2]],
            ]);
        }
        set.into_iter().collect()
    }
}

/// A conflict-free interpretation of a bundled table, labeled by the
/// value chosen for each conflicting entry.
#[derive(Clone, Debug)]
pub struct GammaReading {
    pub label: String,
    pub coefficients: TensorCoefficients,
}

/// The bundled spin-product coefficient table, rows in listed order.
/// The triple (4,4,4) appears twice with different values.
pub struct GammaCoefficientTable {
    entries: Vec<GammaEntry>,
}

impl GammaCoefficientTable {
    pub fn bundled() -> Self {
        let e = |indices: [u8; 3], coefficient: f64, expand: bool| GammaEntry {
            indices,
            coefficient,
            expand,
        };
        let s = 1.0 / (8.0 * 2.0f64.sqrt());
        GammaCoefficientTable {
            entries: vec![
                e([1, 2, 2], -3.0 * s, true),
                e([1, 7, 7], -3.0 * s, true),
                e([2, 7, 9], -3.0 * s, true),
                e([1, 2, 7], -s, true),
                e([2, 2, 8], -s, true),
                e([7, 7, 8], -s, true),
                e([4, 4, 4], -0.25, false),
                e([4, 5, 5], -0.25, true),
                e([5, 9, 9], -0.5, true),
                e([4, 9, 9], 0.5, true),
                e([3, 3, 4], 0.25, true),
                e([3, 3, 5], 0.25, true),
                e([8, 8, 8], s, false),
                e([1, 1, 8], s, true),
                e([1, 1, 1], 3.0 * s, false),
                e([1, 8, 8], 3.0 * s, true),
                e([5, 5, 5], 0.75, false),
                e([4, 4, 5], 0.75, true),
                e([4, 4, 4], 1.0, false),
            ],
        }
    }

    pub fn entries(&self) -> &[GammaEntry] {
        &self.entries
    }

    /// Index triples assigned more than one value, values in row order.
    pub fn conflicts(&self) -> Vec<([u8; 3], Vec<f64>)> {
        let mut seen: BTreeMap<[u8; 3], Vec<f64>> = BTreeMap::new();
        for entry in &self.entries {
            seen.entry(entry.indices).or_default().push(entry.coefficient);
        }
        seen.into_iter().filter(|(_, v)| v.len() > 1).collect()
    }

    /// One fully expanded coefficient set per way of resolving the
    /// conflicts, first-listed values first.
    pub fn readings(&self) -> Vec<GammaReading> {
        resolve_choices(&self.conflicts())
            .into_iter()
            .map(|choice| {
                let mut coefficients = TensorCoefficients::new(3);
                let mut used: BTreeSet<[u8; 3]> = BTreeSet::new();
                for entry in &self.entries {
                    let coefficient = match choice.get(&entry.indices) {
                        Some(&v) => {
                            // keep one row per conflicted triple, the one
                            // carrying the chosen value
                            if entry.coefficient != v || used.contains(&entry.indices) {
                                continue;
                            }
                            used.insert(entry.indices);
                            v
                        }
                        None => entry.coefficient,
                    };
                    for triple in entry.triples() {
                        coefficients
                            .add_term(&triple, coefficient)
                            .expect("bundled table indices are valid");
                    }
                }
                let label = choice
                    .iter()
                    .map(|(t, v)| format!("b{}{}{}={}", t[0], t[1], t[2], v))
                    .collect::<Vec<_>>()
                    .join(",");
                GammaReading {
                    label,
                    coefficients,
                }
            })
            .collect()
    }
}

/// Cartesian product over each conflict's candidate values, preserving
/// listed order so the first choice combination is the first reading.
fn resolve_choices<K: Copy + Ord>(conflicts: &[(K, Vec<f64>)]) -> Vec<BTreeMap<K, f64>> {
    let mut choices: Vec<BTreeMap<K, f64>> = vec![BTreeMap::new()];
    for (key, values) in conflicts {
        let mut next = Vec::with_capacity(choices.len() * values.len());
        for base in &choices {
            for &v in values {
                let mut c = base.clone();
                c.insert(*key, v);
                next.push(c);
            }
        }
        choices = next;
    }
    choices
}

/// One row of the bundled Pauli-pair table. Pair digits 0..=3 stand for
/// I, X, Y, Z; the three pairs bind to qubit pairs (1,2), (3,4), (5,6).
/// Expanded rows range over all orderings of the three pair slots and
/// both orders inside each pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliPairEntry {
    pub pairs: [(u8, u8); 3],
    pub coefficient: f64,
    pub expand: bool,
}

impl PauliPairEntry {
    /// The distinct six-letter Pauli strings this row denotes.
    pub fn strings(&self) -> Vec<String> {
        const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];
        let make = |order: [usize; 3], mask: u8| {
            let mut s = String::with_capacity(6);
            for (slot, &src) in order.iter().enumerate() {
                let (x, y) = self.pairs[src];
                let (p, q) = if mask >> slot & 1 == 1 { (y, x) } else { (x, y) };
                s.push(LETTERS[p as usize]);
                s.push(LETTERS[q as usize]);
            }
            s
        };
        if !self.expand {
            return vec![make([0, 1, 2], 0)];
        }
        let mut set = BTreeSet::new();
        for order in SLOT_ORDERS {
            for mask in 0..8u8 {
                set.insert(make(order, mask));
            }
        }
        set.into_iter().collect()
    }
}

/// A conflict-free interpretation of the bundled pair table as a
/// six-qubit Pauli polynomial. Table values scale their strings by the
/// table's overall 1/16 normalization.
#[derive(Clone, Debug)]
pub struct PauliReading {
    pub label: String,
    pub polynomial: PauliPolynomial,
}

/// The bundled Pauli-pair coefficient table, rows in listed order. The
/// pair triple (00)(33)(33) appears twice with different values.
pub struct PauliPairTable {
    entries: Vec<PauliPairEntry>,
}

impl PauliPairTable {
    pub fn bundled() -> Self {
        let e = |pairs: [(u8, u8); 3], coefficient: f64, expand: bool| PauliPairEntry {
            pairs,
            coefficient,
            expand,
        };
        let r = 1.0 / 2.0f64.sqrt();
        #[rustfmt::skip]
        let entries = vec![
            e([(0, 1), (0, 2), (0, 2)], -3.0 * r, true),
            e([(0, 1), (2, 3), (2, 3)], -3.0 * r, true),
            e([(1, 3), (0, 2), (2, 3)], -3.0 * r, true),
            e([(0, 1), (0, 2), (2, 3)], -r, true),
            e([(0, 1), (0, 1), (1, 3)], -r, true),
            e([(0, 2), (0, 2), (1, 3)], -r, true),
            e([(1, 1), (1, 2), (1, 2)], -4.0, true),
            e([(2, 2), (2, 2), (2, 2)], -3.0, false),
            e([(1, 1), (1, 1), (2, 2)], -3.0, true),
            e([(0, 0), (1, 1), (3, 3)], -1.0, true),
            e([(0, 0), (2, 2), (3, 3)], -1.0, true),
            e([(0, 0), (0, 0), (1, 1)], 1.0, true),
            e([(0, 0), (0, 0), (2, 2)], 1.0, true),
            e([(0, 0), (0, 0), (3, 3)], 1.0, true),
            e([(0, 0), (1, 1), (1, 1)], 1.0, true),
            e([(0, 0), (2, 2), (2, 2)], 1.0, true),
            e([(0, 0), (3, 3), (3, 3)], 1.0, true),
            e([(0, 0), (1, 1), (2, 2)], 1.0, true),
            e([(1, 1), (3, 3), (3, 3)], 1.0, true),
            e([(2, 2), (3, 3), (3, 3)], 1.0, true),
            e([(3, 3), (3, 3), (3, 3)], 1.0, false),
            e([(0, 0), (0, 3), (0, 3)], 2.0, true),
            e([(0, 3), (0, 3), (3, 3)], 2.0, true),
            e([(0, 0), (0, 0), (0, 0)], 3.0, false),
            e([(0, 0), (3, 3), (3, 3)], 3.0, true),
            e([(1, 2), (1, 2), (2, 2)], 4.0, true),
            e([(1, 1), (1, 1), (1, 1)], 5.0, false),
            e([(1, 1), (2, 2), (2, 2)], 5.0, true),
            e([(0, 1), (0, 1), (0, 1)], 3.0 * r, true),
            e([(0, 1), (1, 3), (1, 3)], 3.0 * r, true),
            e([(0, 1), (0, 1), (2, 3)], r, true),
            e([(1, 3), (1, 3), (1, 3)], r, true),
        ];
        PauliPairTable { entries }
    }

    pub fn entries(&self) -> &[PauliPairEntry] {
        &self.entries
    }

    /// Pair triples assigned more than one value, values in row order.
    pub fn conflicts(&self) -> Vec<([(u8, u8); 3], Vec<f64>)> {
        let mut seen: BTreeMap<[(u8, u8); 3], Vec<f64>> = BTreeMap::new();
        for entry in &self.entries {
            seen.entry(entry.pairs).or_default().push(entry.coefficient);
        }
        seen.into_iter().filter(|(_, v)| v.len() > 1).collect()
    }

    /// One polynomial per way of resolving the conflicts, first-listed
    /// values first.
    pub fn readings(&self) -> Vec<PauliReading> {
        resolve_choices(&self.conflicts())
            .into_iter()
            .map(|choice| {
                let mut polynomial = PauliPolynomial::new(6);
                let mut used: BTreeSet<[(u8, u8); 3]> = BTreeSet::new();
                for entry in &self.entries {
                    let coefficient = match choice.get(&entry.pairs) {
                        Some(&v) => {
                            if entry.coefficient != v || used.contains(&entry.pairs) {
                                continue;
                            }
                            used.insert(entry.pairs);
                            v
                        }
                        None => entry.coefficient,
                    };
                    for string in entry.strings() {
                        polynomial
                            .add_term(&string, coefficient / 16.0)
                            .expect("bundled table strings are valid");
                    }
                }
                let label = choice
                    .iter()
                    .map(|(pairs, v)| {
                        let digits: String = pairs
                            .iter()
                            .flat_map(|&(a, b)| [a, b])
                            .map(|d| char::from(b'0' + d))
                            .collect();
                        format!("b{digits}={v}")
                    })
                    .collect::<Vec<_>>()
                    .join(",");
                PauliReading { label, polynomial }
            })
            .collect()
    }
}

/// The 27x27 operator a spin-table reading denotes under the given spin
/// convention.
pub fn operator_from_gamma_table(
    reading: &GammaReading,
    variant: SpinVariant,
) -> Result<ComplexMatrix> {
    reconstruct_gamma(&reading.coefficients, variant)
}

/// The 64x64 operator a pair-table reading denotes.
pub fn operator_from_pauli_table(reading: &PauliReading) -> Result<ComplexMatrix> {
    pauli_reconstruct(&reading.polynomial)
}

/// Projector onto the triplet sector of all three qubit pairs, the
/// image of the three-qutrit space inside six qubits.
pub fn pair_triplet_projector() -> ComplexMatrix {
    let s = singlet();
    let proj = ComplexMatrix::from_fn(4, |i, j| s.amplitude(i) * s.amplitude(j).conj());
    let p2 = ComplexMatrix::identity(4).sub(&proj).expect("same dim");
    tensor_product(&tensor_product(&p2, &p2), &p2)
}

/// Diagnostics for one combination of spin convention, spin-table
/// reading, and pair-table reading.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateDiagnostics {
    pub variant: String,
    pub gamma_label: String,
    pub pauli_label: String,
    /// max entry of |lift of spin-form operator - compressed pair-form
    /// operator|; zero for a faithful pair of readings
    pub cross_residual: f64,
    pub lambda_max: f64,
    /// |amplitude| of the top eigenvector at |000>, |111>, |222>
    pub eigvec_diag: [f64; 3],
    pub me_expectation: f64,
}

/// Outcome of comparing every reading combination.
#[derive(Clone, Debug, Serialize)]
pub struct ResolutionReport {
    pub candidates: Vec<CandidateDiagnostics>,
    pub chosen: usize,
    pub matched: bool,
    pub tolerance: f64,
}

impl ResolutionReport {
    pub fn chosen_candidate(&self) -> &CandidateDiagnostics {
        &self.candidates[self.chosen]
    }
}

/// Compare every interpretation of the two bundled tables.
///
/// A faithful pair of readings would make the qubit lift of the
/// spin-form operator equal the pair-form operator compressed to the
/// triplet sectors. No combination comes close (the smallest residual
/// is 6.0 on entries of order one), so `matched` is false and the
/// first-listed readings win the residual tie: spin convention A,
/// b444=-0.25, b003333=1. Residuals are rounded to nine decimals before
/// comparison so float noise cannot shuffle exact ties.
pub fn resolve_tables() -> Result<ResolutionReport> {
    let gamma_readings = GammaCoefficientTable::bundled().readings();
    let pauli_readings = PauliPairTable::bundled().readings();
    let p3 = pair_triplet_projector();
    let me3 = me_state();
    let mut candidates = Vec::new();
    for variant in [SpinVariant::A, SpinVariant::B] {
        for gr in &gamma_readings {
            let b = operator_from_gamma_table(gr, variant)?;
            let eig = hermitian_eig(&b)?;
            let top = eig.top_eigenvector();
            let lift = lift_to_qubits(&gr.coefficients)?;
            let me_expectation = expectation(&b, &me3)?;
            for pr in &pauli_readings {
                let q = operator_from_pauli_table(pr)?;
                let compressed = p3.mul(&q)?.mul(&p3)?;
                candidates.push(CandidateDiagnostics {
                    variant: variant.to_string(),
                    gamma_label: gr.label.clone(),
                    pauli_label: pr.label.clone(),
                    cross_residual: compressed.max_abs_diff(&lift),
                    lambda_max: eig.max_eigenvalue(),
                    eigvec_diag: [
                        top.amplitude(0).norm(),
                        top.amplitude(13).norm(),
                        top.amplitude(26).norm(),
                    ],
                    me_expectation,
                });
            }
        }
    }
    let round9 = |x: f64| (x * 1e9).round();
    let mut chosen = 0usize;
    for (i, c) in candidates.iter().enumerate().skip(1) {
        if round9(c.cross_residual) < round9(candidates[chosen].cross_residual) {
            chosen = i;
        }
    }
    let tolerance = 1e-9;
    let matched = candidates[chosen].cross_residual <= tolerance;
    Ok(ResolutionReport {
        candidates,
        chosen,
        matched,
        tolerance,
    })
}

/// The reading everything downstream uses: first-listed conflict values
/// (b444=-0.25, and b003333=1 on the pair side), spin convention A.
pub fn canonical_coefficients() -> TensorCoefficients {
    GammaCoefficientTable::bundled().readings()[0]
        .coefficients
        .clone()
}

/// 27x27 operator of the canonical reading.
pub fn canonical_operator() -> Result<ComplexMatrix> {
    reconstruct_gamma(&canonical_coefficients(), SpinVariant::A)
}

/// 64x64 qubit lift of the canonical reading.
pub fn lifted_operator() -> Result<ComplexMatrix> {
    lift_to_qubits(&canonical_coefficients())
}

/// sqrt(p) (sin(theta) |0>^6 + cos(theta) |1>^6) + sqrt(1-p) |psi+>^3,
/// unit norm for every p in [0, 1] and theta in [0, pi/2].
pub fn family_state(p: f64, theta: f64) -> Result<StateVector> {
    check_param("p", p, 0.0, 1.0)?;
    check_param("theta", theta, 0.0, FRAC_PI_2)?;
    let mut amps = vec![0.0; 64];
    amps[0] = p.sqrt() * theta.sin();
    amps[63] = p.sqrt() * theta.cos();
    // |psi+>^3 lives on indices with one of {01, 10} per qubit pair
    let w = (1.0 - p).sqrt() / (2.0 * 2.0f64.sqrt());
    for a in [1usize, 2] {
        for b in [1usize, 2] {
            for c in [1usize, 2] {
                amps[16 * a + 4 * b + c] += w;
            }
        }
    }
    StateVector::from_real(&amps)
}

fn check_param(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    if !(lo..=hi).contains(&value) {
        return Err(Error::ParamOutOfRange {
            name,
            value,
            lo,
            hi,
        });
    }
    Ok(())
}

/// Expectation of a 64x64 operator on the family state.
pub fn family_expectation(op: &ComplexMatrix, p: f64, theta: f64) -> Result<f64> {
    expectation(op, &family_state(p, theta)?)
}

/// Which family parameters to search over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyMode {
    /// p alone at theta = pi/4 (equal GHZ branch weights).
    POnly,
    /// p and theta jointly.
    PTheta,
}

/// Where the family peaks against an operator, and how much of the
/// operator's top eigenvector the peak state captures.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyOptimum {
    pub p: f64,
    pub theta: f64,
    pub value: f64,
    /// |<family peak | top eigenvector>|^2
    pub top_overlap_sq: f64,
}

/// Maximize the family expectation of a 64x64 Hermitian operator by
/// golden-section search: over p alone, or over (p, theta) with the
/// outer search seeded by a 41-point theta grid.
pub fn optimize_family(op: &ComplexMatrix, mode: FamilyMode) -> Result<FamilyOptimum> {
    if op.dim() != 64 {
        return Err(Error::DimensionMismatch {
            left: op.dim(),
            right: 64,
        });
    }
    // rejects non-Hermitian input once instead of on every probe
    family_expectation(op, 0.5, FRAC_PI_4)?;
    let value_at = |p: f64, theta: f64| {
        family_expectation(op, p, theta).expect("search stays inside the parameter box")
    };
    let (p, theta, value) = match mode {
        FamilyMode::POnly => {
            let (p, value) = golden::maximize(|p| value_at(p, FRAC_PI_4), 0.0, 1.0, 1e-8);
            (p, FRAC_PI_4, value)
        }
        FamilyMode::PTheta => {
            let best_p = |theta: f64| golden::maximize(|p| value_at(p, theta), 0.0, 1.0, 1e-8);
            let step = FRAC_PI_2 / 40.0;
            let mut seed = (f64::NEG_INFINITY, 0.0);
            for k in 0..=40 {
                let theta = k as f64 * step;
                let v = best_p(theta).1;
                if v > seed.0 {
                    seed = (v, theta);
                }
            }
            let lo = (seed.1 - 2.0 * step).max(0.0);
            let hi = (seed.1 + 2.0 * step).min(FRAC_PI_2);
            let (theta, _) = golden::maximize(|theta| best_p(theta).1, lo, hi, 1e-8);
            let (p, value) = best_p(theta);
            (p, theta, value)
        }
    };
    let eig = hermitian_eig(op)?;
    let top_overlap_sq = family_state(p, theta)?
        .inner(eig.top_eigenvector())
        .norm_sqr();
    Ok(FamilyOptimum {
        p,
        theta,
        value,
        top_overlap_sq,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cglmp;
    use crate::decomp::decompose_gamma;
    use crate::functional::lhv_bounds;
    use crate::spin::embed_state;

    fn term(s: [usize; 3], target: u32, coeff: f64) -> Term {
        Term::Prob {
            settings: s.to_vec(),
            signs: vec![1, 1, 1],
            target,
            coeff,
        }
    }

    #[test]
    fn deterministic_bounds_match_declared() {
        let f = functional();
        assert_eq!(lhv_bounds(&f).unwrap(), (-3.0, 3.0));
        assert_eq!(f.declared_bounds(), Some((-3.0, 3.0)));
    }

    #[test]
    fn quantum_max_is_three_halves_of_bipartite() {
        assert!((functional_quantum_max() - 4.372281323269014).abs() < 1e-12);
        assert!((functional_quantum_max() - 1.5 * cglmp::quantum_max()).abs() < 1e-12);
    }

    /// Flipping the third term's target to 0 describes a weaker
    /// expression whose deterministic maximum rises to 4; the shipped
    /// target keeps the symmetric bound 3.
    #[test]
    fn third_term_target_controls_the_upper_bound() {
        let f = BellFunctional::new(
            3,
            2,
            3,
            vec![
                term([0, 0, 0], 0, 1.0),
                term([0, 1, 1], 1, 1.0),
                term([1, 0, 1], 0, 1.0),
                term([1, 1, 0], 1, 1.0),
                term([1, 1, 1], 0, 2.0),
                term([1, 0, 0], 2, -1.0),
                term([0, 1, 0], 2, -1.0),
                term([0, 0, 1], 2, -1.0),
            ],
            None,
        )
        .unwrap();
        assert_eq!(lhv_bounds(&f).unwrap(), (-3.0, 4.0));
    }

    #[test]
    fn terms_are_cyclic_in_the_parties() {
        let f = functional();
        let key = |t: &Term| match t {
            Term::Prob {
                settings,
                target,
                coeff,
                ..
            } => (settings.clone(), *target, coeff.to_bits()),
            Term::Corr { .. } => unreachable!(),
        };
        let mut original: Vec<_> = f.terms().iter().map(key).collect();
        let mut rotated: Vec<_> = f
            .terms()
            .iter()
            .map(|t| {
                let (s, target, coeff) = key(t);
                (vec![s[2], s[0], s[1]], target, coeff)
            })
            .collect();
        original.sort();
        rotated.sort();
        assert_eq!(original, rotated);
    }

    #[test]
    fn gamma_table_shape_and_conflict() {
        let table = GammaCoefficientTable::bundled();
        assert_eq!(table.entries().len(), 19);
        assert_eq!(
            table.conflicts(),
            vec![([4, 4, 4], vec![-0.25, 1.0])]
        );

        let readings = table.readings();
        assert_eq!(readings.len(), 2);
        assert_eq!(readings[0].label, "b444=-0.25");
        assert_eq!(readings[1].label, "b444=1");
        for r in &readings {
            assert_eq!(r.coefficients.len(), 52);
        }
        assert_eq!(readings[0].coefficients.get(&[4, 4, 4]), -0.25);
        assert_eq!(readings[1].coefficients.get(&[4, 4, 4]), 1.0);

        // permuted triples share the row's value; unlisted triples are absent
        let s = 1.0 / (8.0 * 2.0f64.sqrt());
        let c = &readings[0].coefficients;
        assert_eq!(c.get(&[1, 2, 2]), -3.0 * s);
        assert_eq!(c.get(&[2, 1, 2]), -3.0 * s);
        assert_eq!(c.get(&[2, 2, 1]), -3.0 * s);
        assert_eq!(c.get(&[1, 1, 1]), 3.0 * s);
        assert_eq!(c.get(&[9, 7, 2]), -3.0 * s);
        assert_eq!(c.get(&[5, 5, 4]), -0.25);
        assert_eq!(c.get(&[2, 2, 2]), 0.0);
    }

    #[test]
    fn expanded_triple_counts() {
        let all_distinct = GammaEntry {
            indices: [2, 7, 9],
            coefficient: 1.0,
            expand: true,
        };
        assert_eq!(all_distinct.triples().len(), 6);
        let one_pair = GammaEntry {
            indices: [4, 5, 5],
            coefficient: 1.0,
            expand: true,
        };
        assert_eq!(one_pair.triples().len(), 3);
        let unexpanded = GammaEntry {
            indices: [4, 4, 4],
            coefficient: 1.0,
            expand: false,
        };
        assert_eq!(unexpanded.triples(), vec![[4, 4, 4]]);
    }

    #[test]
    fn reading_traces_disagree_with_the_expression() {
        // the expression's operator has trace 9 * (sum of coefficients) = 27;
        // both readings fall far short of it
        for (idx, expected) in [(0usize, 2.0), (1usize, 3.25)] {
            let reading = &GammaCoefficientTable::bundled().readings()[idx];
            let op = operator_from_gamma_table(reading, SpinVariant::A).unwrap();
            assert!((op.trace().re - expected).abs() < 1e-12);
            assert!(op.trace().im.abs() < 1e-12);
        }
    }

    #[test]
    fn reading_round_trips_through_decomposition() {
        let reading = &GammaCoefficientTable::bundled().readings()[0];
        for variant in [SpinVariant::A, SpinVariant::B] {
            let op = operator_from_gamma_table(reading, variant).unwrap();
            let back = decompose_gamma(&op, variant).unwrap();
            assert!(back.max_abs_coeff_diff(&reading.coefficients) < 1e-10);
        }
    }

    #[test]
    fn pauli_table_shape_and_conflict() {
        let table = PauliPairTable::bundled();
        assert_eq!(table.entries().len(), 32);
        assert_eq!(
            table.conflicts(),
            vec![([(0, 0), (3, 3), (3, 3)], vec![1.0, 3.0])]
        );

        let readings = table.readings();
        assert_eq!(readings.len(), 2);
        assert_eq!(readings[0].label, "b003333=1");
        assert_eq!(readings[1].label, "b003333=3");

        let p = &readings[0].polynomial;
        assert_eq!(p.n_qubits(), 6);
        assert_eq!(p.get("IIIIII"), 3.0 / 16.0);
        assert_eq!(p.get("ZZZZZZ"), 1.0 / 16.0);
        assert_eq!(p.get("IXIYIY"), -3.0 / 2.0f64.sqrt() / 16.0);
        assert_eq!(p.get("IIZZZZ"), 1.0 / 16.0);
        assert_eq!(readings[1].polynomial.get("IIZZZZ"), 3.0 / 16.0);

        // the readings differ only on the three strings of the
        // conflicted row
        let q = &readings[1].polynomial;
        assert_eq!(p.len(), q.len());
        assert!((p.max_abs_coeff_diff(q) - 2.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn expanded_string_counts() {
        let entry = |pairs: [(u8, u8); 3]| PauliPairEntry {
            pairs,
            coefficient: 1.0,
            expand: true,
        };
        assert_eq!(entry([(0, 1), (1, 3), (1, 3)]).strings().len(), 24);
        assert_eq!(entry([(1, 1), (1, 2), (1, 2)]).strings().len(), 12);
        assert_eq!(
            entry([(0, 0), (0, 0), (1, 1)]).strings(),
            vec!["IIIIXX", "IIXXII", "XXIIII"]
        );
        let fixed = PauliPairEntry {
            pairs: [(2, 2), (2, 2), (2, 2)],
            coefficient: -3.0,
            expand: false,
        };
        assert_eq!(fixed.strings(), vec!["YYYYYY"]);
    }

    #[test]
    fn resolution_prefers_first_listed_readings() {
        let report = resolve_tables().unwrap();
        assert_eq!(report.candidates.len(), 8);
        assert_eq!(report.chosen, 0);
        assert!(!report.matched);

        let chosen = report.chosen_candidate();
        assert_eq!(chosen.variant, "A");
        assert_eq!(chosen.gamma_label, "b444=-0.25");
        assert_eq!(chosen.pauli_label, "b003333=1");
        assert!((chosen.cross_residual - 6.0).abs() < 1e-5);
        assert!((chosen.lambda_max - 3.573684431).abs() < 1e-6);
        assert!((chosen.eigvec_diag[0] - 0.692591).abs() < 1e-5);
        assert!((chosen.eigvec_diag[1] - 0.358450).abs() < 1e-5);
        assert!((chosen.eigvec_diag[2] - 0.613189).abs() < 1e-5);
        assert!((chosen.me_expectation - 3.25).abs() < 1e-9);

        // candidate order: variant, then spin reading, then pair reading
        let c2 = &report.candidates[2];
        assert_eq!(c2.gamma_label, "b444=1");
        assert!((c2.cross_residual - 6.15625).abs() < 1e-5);
        assert!((c2.lambda_max - 3.575110232).abs() < 1e-6);
        assert!((c2.eigvec_diag[0] - 0.696133).abs() < 1e-5);
        assert!((c2.eigvec_diag[1] - 0.359186).abs() < 1e-5);
        assert!((c2.eigvec_diag[2] - 0.608640).abs() < 1e-5);
        assert!((c2.me_expectation - 3.25).abs() < 1e-9);

        // spin convention B is unitarily equivalent, so residuals and
        // spectra repeat
        for c in &report.candidates {
            let expected = if c.gamma_label == "b444=-0.25" {
                (6.0, 3.573684431)
            } else {
                (6.15625, 3.575110232)
            };
            assert!((c.cross_residual - expected.0).abs() < 1e-5);
            assert!((c.lambda_max - expected.1).abs() < 1e-6);
        }
    }

    #[test]
    fn pair_form_diagnostics() {
        let readings = PauliPairTable::bundled().readings();
        let p3 = pair_triplet_projector();
        let emb = embed_state(&me_state(), SpinVariant::A).unwrap();
        let expected = [(16.708333333, 16.857896595), (17.083333333, 17.232896595)];
        for (reading, (me, lambda)) in readings.iter().zip(expected) {
            let q = operator_from_pauli_table(reading).unwrap();
            assert!((expectation(&q, &emb).unwrap() - me).abs() < 1e-6);
            let compressed = p3.mul(&q).unwrap().mul(&p3).unwrap();
            let eig = hermitian_eig(&compressed).unwrap();
            assert!((eig.max_eigenvalue() - lambda).abs() < 1e-6);
        }
    }

    #[test]
    fn triplet_projector_is_a_rank_27_projector() {
        let p3 = pair_triplet_projector();
        assert!(p3.mul(&p3).unwrap().max_abs_diff(&p3) < 1e-12);
        assert!((p3.trace().re - 27.0).abs() < 1e-12);
        let emb = embed_state(&me_state(), SpinVariant::A).unwrap();
        let fixed = p3.mul_vec(emb.amplitudes()).unwrap();
        let diff: f64 = fixed
            .iter()
            .zip(emb.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn lift_preserves_the_operator() {
        let op = canonical_operator().unwrap();
        let lift = lifted_operator().unwrap();
        let me3 = me_state();
        let emb = embed_state(&me3, SpinVariant::A).unwrap();
        let direct = expectation(&op, &me3).unwrap();
        let lifted = expectation(&lift, &emb).unwrap();
        assert!((direct - 3.25).abs() < 1e-12);
        assert!((direct - lifted).abs() < 1e-9);

        // the lift is the operator on the triplet sectors plus kernel
        let top27 = hermitian_eig(&op).unwrap().max_eigenvalue();
        let top64 = hermitian_eig(&lift).unwrap().max_eigenvalue();
        assert!((top27 - top64).abs() < 1e-9);
    }

    #[test]
    fn operator_is_invariant_under_qutrit_swaps() {
        let op = canonical_operator().unwrap();
        let digits = |idx: usize| [idx / 9, (idx / 3) % 3, idx % 3];
        for order in SLOT_ORDERS {
            for row in 0..27 {
                for col in 0..27 {
                    let r = digits(row);
                    let c = digits(col);
                    let pr = 9 * r[order[0]] + 3 * r[order[1]] + r[order[2]];
                    let pc = 9 * c[order[0]] + 3 * c[order[1]] + c[order[2]];
                    assert!((op.get(pr, pc) - op.get(row, col)).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn family_hits_the_embedded_state_at_its_base_point() {
        let emb = embed_state(&me_state(), SpinVariant::A).unwrap();
        let base = family_state(2.0 / 3.0, FRAC_PI_4).unwrap();
        assert!(base.max_abs_diff(&emb) < 1e-12);
        let lift = lifted_operator().unwrap();
        assert!((family_expectation(&lift, 2.0 / 3.0, FRAC_PI_4).unwrap() - 3.25).abs() < 1e-9);
    }

    #[test]
    fn family_rejects_out_of_range_parameters() {
        assert!(matches!(
            family_state(-0.1, 1.0),
            Err(Error::ParamOutOfRange { name: "p", .. })
        ));
        assert!(matches!(
            family_state(0.5, 1.6),
            Err(Error::ParamOutOfRange { name: "theta", .. })
        ));
    }

    #[test]
    fn family_peak_in_p_alone() {
        let lift = lifted_operator().unwrap();
        let opt = optimize_family(&lift, FamilyMode::POnly).unwrap();
        assert!((opt.value - 3.501952170).abs() < 1e-6);
        assert!((opt.p - 0.8747).abs() < 1e-3);
        assert_eq!(opt.theta, FRAC_PI_4);
    }

    #[test]
    fn family_peak_in_p_and_theta() {
        let lift = lifted_operator().unwrap();
        let opt = optimize_family(&lift, FamilyMode::PTheta).unwrap();
        assert!((opt.value - 3.516174551).abs() < 1e-6);
        assert!((opt.p - 0.868801).abs() < 1e-3);
        assert!((opt.theta - 0.846280).abs() < 1e-3);
        assert!((opt.top_overlap_sq - 0.984168040).abs() < 1e-6);
    }

    #[test]
    fn family_peak_for_the_other_reading() {
        let reading = &GammaCoefficientTable::bundled().readings()[1];
        let lift = lift_to_qubits(&reading.coefficients).unwrap();
        let opt = optimize_family(&lift, FamilyMode::PTheta).unwrap();
        assert!((opt.value - 3.517255790).abs() < 1e-6);
        assert!((opt.p - 0.868390).abs() < 1e-3);
        assert!((opt.theta - 0.850913).abs() < 1e-3);
        assert!((opt.top_overlap_sq - 0.984055958).abs() < 1e-6);
    }

    #[test]
    fn optimizer_rejects_wrong_dimension() {
        let op = ComplexMatrix::identity(16);
        assert!(matches!(
            optimize_family(&op, FamilyMode::POnly),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
