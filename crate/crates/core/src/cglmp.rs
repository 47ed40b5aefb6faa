//! The two-setting three-outcome bipartite Bell expression, its qutrit
//! Bell operator, and the four-qubit image of that operator.
//!
//! The expression combines eight outcome-difference probabilities with
//! deterministic bounds (-4, 2). Under the standard phase-offset
//! Fourier settings its Bell operator takes a sparse closed form whose
//! largest eigenvalue 1 + sqrt(11/3) exceeds the classical bound 2.
//!
//! Lifting the operator to four qubits splits it into four two-qubit
//! blocks plus an eight-term four-body block. The matching four-qubit
//! correlation inequality has classical bounds 1 -+ 4/sqrt(3), and the
//! lifted operator never violates them: its largest eigenvalue stays at
//! 1 + sqrt(11/3) < 1 + 4/sqrt(3).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::decomp::{
    lift_to_qubits, pauli_string_matrix, PauliPolynomial, TensorCoefficients,
};
use crate::error::{Error, Result};
use crate::functional::{bell_operator, BellFunctional, MeasurementSettings, Term};
use crate::golden;
use crate::matrix::{expectation, hermitian_eig, ComplexMatrix, StateVector};

/// Largest eigenvalue of the Bell operator, 1 + sqrt(11/3).
pub fn quantum_max() -> f64 {
    1.0 + (11.0f64 / 3.0).sqrt()
}

/// Expectation on the maximally entangled state, 4/3 + 8/(3 sqrt(3)).
pub fn me_expectation_closed_form() -> f64 {
    4.0 / 3.0 + 8.0 / (3.0 * 3.0f64.sqrt())
}

/// Weight of the GHZ branch in the optimal lifted state, (11 + sqrt(33))/22.
pub fn p_max() -> f64 {
    (11.0 + 33.0f64.sqrt()) / 22.0
}

/// Outer amplitude of the optimal two-qutrit state (|00> and |22>).
pub fn a_coefficient() -> f64 {
    (5.0 * 3.0f64.sqrt() + 3.0 * 11.0f64.sqrt()) / (462.0 + 78.0 * 33.0f64.sqrt()).sqrt()
}

/// Middle amplitude of the optimal two-qutrit state (|11>).
pub fn b_coefficient() -> f64 {
    (9.0 + 33.0f64.sqrt()) / (462.0 + 78.0 * 33.0f64.sqrt()).sqrt()
}

/// The eight probability terms with their deterministic bounds (-4, 2).
///
/// Each term is P(A - B == target mod 3) under the listed settings,
/// outcome signs (+1, -1).
pub fn functional() -> BellFunctional {
    let term = |a: usize, b: usize, target: u32, coeff: f64| Term::Prob {
        settings: vec![a, b],
        signs: vec![1, -1],
        target,
        coeff,
    };
    BellFunctional::new(
        2,
        2,
        3,
        vec![
            term(0, 0, 0, 1.0),
            term(1, 0, 2, 1.0),
            term(1, 1, 0, 1.0),
            term(0, 1, 0, 1.0),
            term(0, 0, 2, -1.0),
            term(1, 0, 0, -1.0),
            term(1, 1, 2, -1.0),
            term(0, 1, 1, -1.0),
        ],
        Some((-4.0, 2.0)),
    )
    .expect("fixed term list is valid")
}

/// Phase-offset Fourier measurement bases: Alice's offsets are
/// (0, 1/2), Bob's (1/4, -1/4), with Bob's outcome index entering the
/// exponent negated.
pub fn canonical_settings() -> Result<MeasurementSettings> {
    let r = 1.0 / 3.0f64.sqrt();
    let omega = |x: f64| Complex64::from_polar(r, 2.0 * PI * x / 3.0);
    let basis = |offset: f64, flip: f64| -> Result<Vec<StateVector>> {
        (0..3)
            .map(|k| {
                StateVector::normalize(
                    (0..3)
                        .map(|j| omega(j as f64 * (flip * k as f64 + offset)))
                        .collect(),
                )
            })
            .collect()
    };
    MeasurementSettings::new(
        3,
        vec![
            vec![basis(0.0, 1.0)?, basis(0.5, 1.0)?],
            vec![basis(0.25, -1.0)?, basis(-0.25, -1.0)?],
        ],
    )
}

/// The 9x9 Bell operator under the canonical settings, in closed form.
/// Basis ordering |ab> = 3a + b.
pub fn canonical_operator() -> ComplexMatrix {
    let t = 2.0 / 3.0f64.sqrt();
    let upper = [
        (0usize, 4usize, t),
        (1, 5, t),
        (3, 7, t),
        (4, 8, t),
        (0, 8, 2.0),
    ];
    let mut entries = Vec::with_capacity(10);
    for &(i, j, v) in &upper {
        entries.push((i, j, v));
        entries.push((j, i, v));
    }
    ComplexMatrix::from_real_sparse(9, &entries)
}

/// The seven-term expansion of the Bell operator over spin products
/// (ladder-convention basis).
pub fn spin_coefficients() -> TensorCoefficients {
    let t = 2.0 / 3.0f64.sqrt();
    TensorCoefficients::from_terms(
        2,
        [
            (vec![1u8, 1], t),
            (vec![2, 2], -t),
            (vec![4, 4], 1.0),
            (vec![5, 5], 1.0),
            (vec![4, 5], -1.0),
            (vec![5, 4], -1.0),
            (vec![9, 9], -1.0),
        ],
    )
    .expect("fixed coefficient list is valid")
}

/// The four-qubit image of the Bell operator.
pub fn lifted_operator() -> Result<ComplexMatrix> {
    lift_to_qubits(&spin_coefficients())
}

/// The sixteen-term Pauli expansion of the lifted operator in closed
/// form: eight two-body terms of weight +-1/(2 sqrt(3)) and eight
/// four-body terms of weight +-1/4.
pub fn pauli_closed_form() -> PauliPolynomial {
    let s = 0.5 / 3.0f64.sqrt();
    let q = 0.25;
    let terms = [
        ("XIXI", s),
        ("YIYI", -s),
        ("XIIX", s),
        ("YIIY", -s),
        ("IXXI", s),
        ("IYYI", -s),
        ("IXIX", s),
        ("IYIY", -s),
        ("XXXX", q),
        ("YYYY", q),
        ("YYXX", -q),
        ("XXYY", -q),
        ("YXYX", -q),
        ("YXXY", -q),
        ("XYXY", -q),
        ("XYYX", -q),
    ];
    PauliPolynomial::from_terms(4, terms.iter().map(|&(st, c)| (st.to_string(), c)))
        .expect("fixed term list is valid")
}

/// The four-qubit correlation inequality whose Bell operator under X/Y
/// measurements reproduces the lifted operator. Declared bounds are the
/// deterministic extremes 1 -+ 4/sqrt(3).
pub fn four_qubit_functional() -> BellFunctional {
    let s = 0.5 / 3.0f64.sqrt();
    let q = 0.25;
    let corr = |slots: [Option<usize>; 4], coeff: f64| Term::Corr {
        settings: slots.to_vec(),
        coeff,
    };
    let swing = 4.0 / 3.0f64.sqrt();
    BellFunctional::new(
        4,
        2,
        2,
        vec![
            corr([Some(0), None, Some(0), None], s),
            corr([Some(1), None, Some(1), None], -s),
            corr([Some(0), None, None, Some(0)], s),
            corr([Some(1), None, None, Some(1)], -s),
            corr([None, Some(0), Some(0), None], s),
            corr([None, Some(1), Some(1), None], -s),
            corr([None, Some(0), None, Some(0)], s),
            corr([None, Some(1), None, Some(1)], -s),
            corr([Some(0), Some(0), Some(0), Some(0)], q),
            corr([Some(1), Some(1), Some(1), Some(1)], q),
            corr([Some(0), Some(0), Some(1), Some(1)], -q),
            corr([Some(0), Some(1), Some(0), Some(1)], -q),
            corr([Some(1), Some(0), Some(0), Some(1)], -q),
            corr([Some(0), Some(1), Some(1), Some(0)], -q),
            corr([Some(1), Some(0), Some(1), Some(0)], -q),
            corr([Some(1), Some(1), Some(0), Some(0)], -q),
        ],
        Some((1.0 - swing, 1.0 + swing)),
    )
    .expect("fixed term list is valid")
}

/// X and Y eigenbases for every party: setting 0 measures X, setting 1
/// measures Y; outcome 0 is the +1 eigenvector.
pub fn xy_qubit_settings(parties: usize) -> Result<MeasurementSettings> {
    let r = 1.0 / 2.0f64.sqrt();
    let re = |x: f64| Complex64::new(x, 0.0);
    let im = |x: f64| Complex64::new(0.0, x);
    let xp = StateVector::normalize(vec![re(r), re(r)])?;
    let xm = StateVector::normalize(vec![re(r), re(-r)])?;
    let yp = StateVector::normalize(vec![re(r), im(r)])?;
    let ym = StateVector::normalize(vec![re(r), im(-r)])?;
    let per_party = vec![vec![xp, xm], vec![yp, ym]];
    MeasurementSettings::new(2, vec![per_party; parties])
}

/// Two-qubit sub-block of the four-qubit expansion: the terms whose
/// support is exactly one qubit of the first pair and one of the second.
#[derive(Clone, Debug)]
pub struct ChshBlock {
    pair: (usize, usize),
    terms: Vec<(String, f64)>,
}

impl ChshBlock {
    /// 1-based qubit indices carrying the block.
    pub fn pair(&self) -> (usize, usize) {
        self.pair
    }

    pub fn terms(&self) -> &[(String, f64)] {
        &self.terms
    }

    /// Largest eigenvalue of the block reduced to its two active qubits.
    pub fn lambda(&self) -> Result<f64> {
        let mut op = ComplexMatrix::zeros(4);
        for (string, coeff) in &self.terms {
            let bytes = string.as_bytes();
            let reduced: String = [bytes[self.pair.0 - 1], bytes[self.pair.1 - 1]]
                .iter()
                .map(|&b| b as char)
                .collect();
            op = op.add(&pauli_string_matrix(&reduced)?.scale_re(*coeff))?;
        }
        Ok(hermitian_eig(&op)?.max_eigenvalue())
    }
}

/// Split of the four-qubit expansion into four cross-pair two-body
/// blocks and the four-body block.
#[derive(Clone, Debug)]
pub struct TermClassification {
    chsh_blocks: Vec<ChshBlock>,
    mermin_terms: Vec<(String, f64)>,
}

impl TermClassification {
    pub fn chsh_blocks(&self) -> &[ChshBlock] {
        &self.chsh_blocks
    }

    pub fn mermin_terms(&self) -> &[(String, f64)] {
        &self.mermin_terms
    }
}

/// Classify a four-qubit Pauli polynomial into cross-pair two-body
/// blocks, keyed (1,3), (1,4), (2,3), (2,4), plus full-support terms.
/// Any term fitting neither shape is an error.
pub fn classify_terms(poly: &PauliPolynomial) -> Result<TermClassification> {
    if poly.n_qubits() != 4 {
        return Err(Error::ArityMismatch {
            detail: format!("classification needs 4 qubits, got {}", poly.n_qubits()),
        });
    }
    let pairs = [(1usize, 3usize), (1, 4), (2, 3), (2, 4)];
    let mut blocks: Vec<ChshBlock> = pairs
        .iter()
        .map(|&pair| ChshBlock {
            pair,
            terms: Vec::new(),
        })
        .collect();
    let mut mermin_terms = Vec::new();
    let mut residual: Vec<String> = Vec::new();
    for (string, coeff) in poly.iter() {
        let support: Vec<usize> = string
            .bytes()
            .enumerate()
            .filter(|&(_, b)| b != b'I')
            .map(|(i, _)| i + 1)
            .collect();
        match support.as_slice() {
            [_, _, _, _] => mermin_terms.push((string.clone(), coeff)),
            [p, q] if *p <= 2 && *q >= 3 => {
                let slot = blocks
                    .iter_mut()
                    .find(|b| b.pair == (*p, *q))
                    .expect("cross pairs cover (1..2, 3..4)");
                slot.terms.push((string.clone(), coeff));
            }
            _ => residual.push(string.clone()),
        }
    }
    if !residual.is_empty() {
        return Err(Error::UnclassifiedTerms {
            count: residual.len(),
            first: residual[0].clone(),
        });
    }
    Ok(TermClassification {
        chsh_blocks: blocks,
        mermin_terms,
    })
}

/// The maximally entangled two-qutrit state (|00> + |11> + |22>)/sqrt(3).
pub fn me_state() -> StateVector {
    StateVector::from_real(&[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).expect("nonzero")
}

/// The optimal two-qutrit state (a, 0, 0, 0, b, 0, 0, 0, a).
pub fn optimal_state() -> StateVector {
    let a = a_coefficient();
    let b = b_coefficient();
    StateVector::from_real(&[a, 0.0, 0.0, 0.0, b, 0.0, 0.0, 0.0, a]).expect("nonzero")
}

/// Interpolation between the four-qubit GHZ state and a double triplet
/// pair: sqrt(p) GHZ + sqrt(1-p) |psi^+>|psi^+>.
pub fn family_state(p: f64) -> Result<StateVector> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParamOutOfRange {
            name: "p",
            value: p,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 16];
    let g = (p / 2.0).sqrt();
    amps[0] = Complex64::new(g, 0.0);
    amps[15] = Complex64::new(g, 0.0);
    let u = (1.0 - p).sqrt() / 2.0;
    for idx in [5, 6, 9, 10] {
        amps[idx] = Complex64::new(u, 0.0);
    }
    StateVector::normalize(amps)
}

/// Closed-form expectation of the lifted operator on the family:
/// 2p + 4 sqrt(2 p (1-p) / 3).
pub fn family_expectation_closed_form(p: f64) -> f64 {
    2.0 * p + 4.0 * (2.0 * p * (1.0 - p) / 3.0).sqrt()
}

/// Maximize the lifted expectation over the family. Returns (p, value);
/// the peak sits at (11 + sqrt(33))/22 with value 1 + sqrt(11/3).
pub fn optimize_family() -> Result<(f64, f64)> {
    let op = lifted_operator()?;
    let objective = |p: f64| {
        let psi = family_state(p).expect("p stays inside [0, 1]");
        expectation(&op, &psi).expect("lifted operator is Hermitian")
    };
    Ok(golden::maximize(objective, 0.0, 1.0, 1e-10))
}

/// Classical and quantum extremes of the four-qubit inequality.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct NonviolationReport {
    pub classical_min: f64,
    pub classical_max: f64,
    pub quantum_max: f64,
    pub violated: bool,
}

/// Compare the lifted operator's spectrum against the deterministic
/// bounds of the four-qubit inequality. The quantum maximum never
/// reaches the classical one.
pub fn four_qubit_nonviolation() -> Result<NonviolationReport> {
    let f = four_qubit_functional();
    let (classical_min, classical_max) = crate::functional::lhv_bounds(&f)?;
    let op = bell_operator(&f, &xy_qubit_settings(4)?)?;
    let quantum_max = hermitian_eig(&op)?.max_eigenvalue();
    Ok(NonviolationReport {
        classical_min,
        classical_max,
        quantum_max,
        violated: quantum_max > classical_max + 1e-9,
    })
}
