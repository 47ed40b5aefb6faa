//! Complementarity bound on the four-qubit expression.
//!
//! The sixteen Pauli terms of the lifted operator fall into five
//! classes whose members share one expectation value on the embedded
//! subspace. Anticommutation between class representatives forces
//! sphere constraints on those expectations, and one positive operator
//! adds a linear constraint. Maximizing the objective over the
//! resulting feasible set bounds the quantum value from above by
//! 1 + sqrt(11/3), which the embedded optimal state attains: the
//! algebraic ceiling and the achievable maximum coincide.

use serde::Serialize;

use crate::decomp::pauli_string_matrix;
use crate::error::{Error, Result};
use crate::golden;
use crate::matrix::{anticommutator, expectation, ComplexMatrix, StateVector};

/// The five classes of Pauli terms sharing an expectation value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationClass {
    Alpha,
    Beta,
    Tau,
    Epsilon,
    Unit,
}

impl std::fmt::Display for CorrelationClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            CorrelationClass::Alpha => "alpha",
            CorrelationClass::Beta => "beta",
            CorrelationClass::Tau => "tau",
            CorrelationClass::Epsilon => "epsilon",
            CorrelationClass::Unit => "unit",
        };
        write!(f, "{name}")
    }
}

/// Member strings of each class.
pub fn class_strings(class: CorrelationClass) -> &'static [&'static str] {
    match class {
        CorrelationClass::Alpha => &["XIXI", "XIIX", "IXXI", "IXIX"],
        CorrelationClass::Beta => &["YIIY", "YIYI", "IYYI", "IYIY"],
        CorrelationClass::Tau => &["YXYX", "YXXY", "XYXY", "XYYX"],
        CorrelationClass::Epsilon => &["XXYY", "YYXX"],
        CorrelationClass::Unit => &["XXXX", "YYYY"],
    }
}

/// One shared expectation value per non-unit class.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CorrelationVariables {
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    pub epsilon: f64,
}

/// Objective (8/sqrt(3) (alpha - beta) - 4 tau - 2 epsilon + 2) / 4,
/// the operator expectation written in class variables with the unit
/// class pinned to 1.
pub fn objective(v: &CorrelationVariables) -> f64 {
    0.25 * (8.0 / 3.0f64.sqrt() * (v.alpha - v.beta) - 4.0 * v.tau - 2.0 * v.epsilon + 2.0)
}

/// The constraints cutting the feasible set: three spheres from
/// pairwise-anticommuting representatives, a linear cut from a positive
/// operator, and the [-1, 1] box on every variable.
#[derive(Clone, Copy, Debug)]
pub struct ConstraintSystem {
    tol: f64,
}

impl ConstraintSystem {
    pub fn new(tol: f64) -> Self {
        ConstraintSystem { tol }
    }

    /// Named slack of every constraint; a slack below -tol is a violation.
    pub fn slacks(&self, v: &CorrelationVariables) -> Vec<(&'static str, f64)> {
        vec![
            (
                "alpha^2 + beta^2 + epsilon^2 <= 1",
                1.0 - (v.alpha * v.alpha + v.beta * v.beta + v.epsilon * v.epsilon),
            ),
            ("alpha^2 + tau^2 <= 1", 1.0 - (v.alpha * v.alpha + v.tau * v.tau)),
            ("beta^2 + tau^2 <= 1", 1.0 - (v.beta * v.beta + v.tau * v.tau)),
            ("epsilon - 2 tau <= 1", 1.0 - (v.epsilon - 2.0 * v.tau)),
            ("|alpha| <= 1", 1.0 - v.alpha.abs()),
            ("|beta| <= 1", 1.0 - v.beta.abs()),
            ("|tau| <= 1", 1.0 - v.tau.abs()),
            ("|epsilon| <= 1", 1.0 - v.epsilon.abs()),
        ]
    }

    pub fn is_feasible(&self, v: &CorrelationVariables) -> bool {
        self.slacks(v).iter().all(|&(_, s)| s >= -self.tol)
    }
}

/// A tuple of class representatives that pairwise anticommute and
/// square to the identity, certifying one sphere constraint.
#[derive(Clone, Debug, Serialize)]
pub struct AnticommutingWitness {
    pub classes: Vec<CorrelationClass>,
    pub strings: Vec<String>,
}

/// Search each class set that must carry a sphere constraint for a
/// witness tuple. Exhaustive over member combinations; errors if any
/// set has none.
pub fn verify_anticommuting_sets() -> Result<Vec<AnticommutingWitness>> {
    use CorrelationClass::{Alpha, Beta, Epsilon, Tau};
    let sets: [&[CorrelationClass]; 3] = [&[Alpha, Beta, Epsilon], &[Alpha, Tau], &[Beta, Tau]];
    let mut reports = Vec::new();
    for &set in &sets {
        let members: Vec<&'static [&'static str]> =
            set.iter().map(|&c| class_strings(c)).collect();
        let mut found: Option<Vec<String>> = None;
        let total: usize = members.iter().map(|m| m.len()).product();
        'combos: for code in 0..total {
            let mut rest = code;
            let mut tuple = Vec::with_capacity(set.len());
            for m in &members {
                tuple.push(m[rest % m.len()]);
                rest /= m.len();
            }
            let mats: Vec<ComplexMatrix> = tuple
                .iter()
                .map(|s| pauli_string_matrix(s))
                .collect::<Result<_>>()?;
            for m in &mats {
                let sq = m.mul(m)?;
                if !sq.approx_eq(&ComplexMatrix::identity(16), 1e-12) {
                    continue 'combos;
                }
            }
            for i in 0..mats.len() {
                for j in (i + 1)..mats.len() {
                    if anticommutator(&mats[i], &mats[j])?.max_abs_entry() > 1e-12 {
                        continue 'combos;
                    }
                }
            }
            found = Some(tuple.iter().map(|s| s.to_string()).collect());
            break;
        }
        match found {
            Some(strings) => reports.push(AnticommutingWitness {
                classes: set.to_vec(),
                strings,
            }),
            None => {
                return Err(Error::NoWitness {
                    set: set
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(", "),
                })
            }
        }
    }
    Ok(reports)
}

/// The positive operator 2 - XXXX - XXYY + YXYX + YXXY behind the
/// linear cut: its expectation is 1 - epsilon + 2 tau >= 0 once the
/// unit class is pinned to 1.
pub fn pi_operator() -> Result<ComplexMatrix> {
    let mut op = ComplexMatrix::identity(16).scale_re(2.0);
    op = op.sub(&pauli_string_matrix("XXXX")?)?;
    op = op.sub(&pauli_string_matrix("XXYY")?)?;
    op = op.add(&pauli_string_matrix("YXYX")?)?;
    op = op.add(&pauli_string_matrix("YXXY")?)?;
    Ok(op)
}

/// Mean member expectation of a class on a 16-dimensional state, with
/// the largest member deviation from that mean.
pub fn class_expectation(
    class: CorrelationClass,
    psi: &StateVector,
) -> Result<(f64, f64)> {
    let strings = class_strings(class);
    let mut values = Vec::with_capacity(strings.len());
    for s in strings {
        values.push(expectation(&pauli_string_matrix(s)?, psi)?);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let spread = values.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
    Ok((mean, spread))
}

/// Class variables read off a state (means of the member expectations).
pub fn correlation_variables(psi: &StateVector) -> Result<CorrelationVariables> {
    Ok(CorrelationVariables {
        alpha: class_expectation(CorrelationClass::Alpha, psi)?.0,
        beta: class_expectation(CorrelationClass::Beta, psi)?.0,
        tau: class_expectation(CorrelationClass::Tau, psi)?.0,
        epsilon: class_expectation(CorrelationClass::Epsilon, psi)?.0,
    })
}

/// The maximizer and maximum of the objective over the feasible set.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundReport {
    pub variables: CorrelationVariables,
    pub value: f64,
}

/// With (alpha, beta) fixed the objective decreases in both tau and
/// epsilon, so both sit at their floors: epsilon on the sphere,
/// tau at the tighter of its sphere cap and the linear cut.
fn inner_solution(alpha: f64, beta: f64) -> CorrelationVariables {
    let epsilon = -(1.0 - alpha * alpha - beta * beta).max(0.0).sqrt();
    let cap = (1.0 - alpha.abs().max(beta.abs()).powi(2)).max(0.0).sqrt();
    let tau = (-cap).max((epsilon - 1.0) / 2.0);
    CorrelationVariables {
        alpha,
        beta,
        tau,
        epsilon,
    }
}

fn restricted_objective(alpha: f64, beta: f64) -> f64 {
    objective(&inner_solution(alpha, beta))
}

/// Maximize the objective over the constraint set.
///
/// Scans (alpha, beta) on a 0.01 grid over the unit disk with the
/// remaining variables solved in closed form, then sharpens the best
/// cell with nested golden-section passes down to 1e-8. The maximum is
/// 1 + sqrt(11/3) at alpha = -beta = 2/sqrt(11).
pub fn maximize() -> BoundReport {
    let n = 200;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..=n {
        let alpha = -1.0 + 2.0 * i as f64 / n as f64;
        for j in 0..=n {
            let beta = -1.0 + 2.0 * j as f64 / n as f64;
            if alpha * alpha + beta * beta > 1.0 {
                continue;
            }
            let v = restricted_objective(alpha, beta);
            if v > best.0 {
                best = (v, alpha, beta);
            }
        }
    }

    let window = 0.02;
    let (_, a0, b0) = best;
    let blo = (b0 - window).max(-1.0);
    let bhi = (b0 + window).min(1.0);
    let best_beta = |alpha: f64| golden::maximize(|b| restricted_objective(alpha, b), blo, bhi, 1e-8);
    let (alpha, _) = golden::maximize(
        |a| best_beta(a).1,
        (a0 - window).max(-1.0),
        (a0 + window).min(1.0),
        1e-8,
    );
    let (beta, value) = best_beta(alpha);
    BoundReport {
        variables: inner_solution(alpha, beta),
        value,
    }
}
