//! Bell functionals: probability or correlation combinations, their
//! exact local-hidden-variable bounds by exhaustive strategy
//! enumeration, and the quantum Bell operator for given measurement
//! settings.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{expectation, tensor_product, ComplexMatrix, StateVector};

/// One additive term of a Bell functional.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Term {
    /// coeff * P(sum_i signs[i] * A_i == target mod outcomes), where
    /// A_i is party i's outcome under its listed setting.
    Prob {
        settings: Vec<usize>,
        signs: Vec<i8>,
        target: u32,
        coeff: f64,
    },
    /// coeff * <product of +-1 observables>; None leaves a party
    /// unmeasured (its factor is 1, the identity operator).
    Corr {
        settings: Vec<Option<usize>>,
        coeff: f64,
    },
}

/// A Bell expression over a fixed scenario (parties, settings per
/// party, outcomes per measurement), with optional declared bounds used
/// for reporting.
#[derive(Clone, Debug, PartialEq)]
pub struct BellFunctional {
    parties: usize,
    settings: usize,
    outcomes: usize,
    terms: Vec<Term>,
    declared_bounds: Option<(f64, f64)>,
}

impl BellFunctional {
    pub fn new(
        parties: usize,
        settings: usize,
        outcomes: usize,
        terms: Vec<Term>,
        declared_bounds: Option<(f64, f64)>,
    ) -> Result<Self> {
        if parties == 0 || settings == 0 || outcomes == 0 {
            return Err(Error::InvalidFunctional {
                detail: "parties, settings, and outcomes must all be positive".into(),
            });
        }
        let mut saw_prob = false;
        let mut saw_corr = false;
        for (idx, term) in terms.iter().enumerate() {
            match term {
                Term::Prob {
                    settings: s,
                    signs,
                    target,
                    ..
                } => {
                    saw_prob = true;
                    if s.len() != parties || signs.len() != parties {
                        return Err(Error::ArityMismatch {
                            detail: format!(
                                "term {idx}: settings/signs lengths {}/{} do not match {parties} parties",
                                s.len(),
                                signs.len()
                            ),
                        });
                    }
                    if let Some(&bad) = s.iter().find(|&&x| x >= settings) {
                        return Err(Error::InvalidFunctional {
                            detail: format!("term {idx}: setting {bad} out of range"),
                        });
                    }
                    if *target as usize >= outcomes {
                        return Err(Error::InvalidFunctional {
                            detail: format!("term {idx}: target {target} out of range"),
                        });
                    }
                    if signs.iter().any(|&x| x == 0) {
                        return Err(Error::InvalidFunctional {
                            detail: format!("term {idx}: outcome signs must be nonzero"),
                        });
                    }
                }
                Term::Corr { settings: s, .. } => {
                    saw_corr = true;
                    if outcomes != 2 {
                        return Err(Error::InvalidFunctional {
                            detail: "correlation terms need two-outcome measurements".into(),
                        });
                    }
                    if s.len() != parties {
                        return Err(Error::ArityMismatch {
                            detail: format!(
                                "term {idx}: settings length {} does not match {parties} parties",
                                s.len()
                            ),
                        });
                    }
                    if let Some(bad) = s.iter().flatten().find(|&&x| x >= settings) {
                        return Err(Error::InvalidFunctional {
                            detail: format!("term {idx}: setting {bad} out of range"),
                        });
                    }
                }
            }
        }
        if saw_prob && saw_corr {
            return Err(Error::MixedTermKinds);
        }
        Ok(BellFunctional {
            parties,
            settings,
            outcomes,
            terms,
            declared_bounds,
        })
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    pub fn settings(&self) -> usize {
        self.settings
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn declared_bounds(&self) -> Option<(f64, f64)> {
        self.declared_bounds
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&FunctionalRepr::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let repr: FunctionalRepr = serde_json::from_str(text)?;
        repr.try_into()
    }
}

#[derive(Serialize, Deserialize)]
struct FunctionalRepr {
    parties: usize,
    settings: usize,
    outcomes: usize,
    terms: Vec<Term>,
    #[serde(skip_serializing_if = "Option::is_none")]
    bounds: Option<(f64, f64)>,
}

impl From<&BellFunctional> for FunctionalRepr {
    fn from(f: &BellFunctional) -> Self {
        FunctionalRepr {
            parties: f.parties,
            settings: f.settings,
            outcomes: f.outcomes,
            terms: f.terms.clone(),
            bounds: f.declared_bounds,
        }
    }
}

impl TryFrom<FunctionalRepr> for BellFunctional {
    type Error = Error;

    fn try_from(repr: FunctionalRepr) -> Result<Self> {
        BellFunctional::new(
            repr.parties,
            repr.settings,
            repr.outcomes,
            repr.terms,
            repr.bounds,
        )
    }
}

/// Exact deterministic-strategy bounds (min, max) of the functional.
///
/// Every local deterministic strategy assigns one outcome per (party,
/// setting). The search space has outcomes^(settings * parties) points;
/// anything above the 1e7 budget is refused rather than subsampled.
pub fn lhv_bounds(f: &BellFunctional) -> Result<(f64, f64)> {
    let slots = f.settings * f.parties;
    let budget = 1e7;
    let required = (f.outcomes as f64).powi(slots as i32);
    if required > budget {
        return Err(Error::EnumerationBudget { required, budget });
    }
    if f.terms.is_empty() {
        return Ok((0.0, 0.0));
    }
    let total = (f.outcomes as u64).pow(slots as u32);

    // outcome_of[party][setting], flattened.
    let mut assign = vec![0usize; slots];
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for code in 0..total {
        let mut rest = code;
        for slot in assign.iter_mut() {
            *slot = (rest % f.outcomes as u64) as usize;
            rest /= f.outcomes as u64;
        }
        let mut value = 0.0;
        for term in &f.terms {
            match term {
                Term::Prob {
                    settings,
                    signs,
                    target,
                    coeff,
                } => {
                    let mut acc: i64 = 0;
                    for (party, (&s, &sign)) in settings.iter().zip(signs).enumerate() {
                        let outcome = assign[party * f.settings + s] as i64;
                        acc += sign as i64 * outcome;
                    }
                    if acc.rem_euclid(f.outcomes as i64) == *target as i64 {
                        value += coeff;
                    }
                }
                Term::Corr { settings, coeff } => {
                    let mut prod = 1.0;
                    for (party, s) in settings.iter().enumerate() {
                        if let Some(s) = s {
                            let outcome = assign[party * f.settings + s];
                            prod *= if outcome == 0 { 1.0 } else { -1.0 };
                        }
                    }
                    value += coeff * prod;
                }
            }
        }
        min = min.min(value);
        max = max.max(value);
    }
    Ok((min, max))
}

/// Local measurement bases: for each party and setting, an orthonormal
/// family of outcome states.
#[derive(Clone, Debug)]
pub struct MeasurementSettings {
    outcomes: usize,
    bases: Vec<Vec<Vec<StateVector>>>,
}

impl MeasurementSettings {
    pub fn new(outcomes: usize, bases: Vec<Vec<Vec<StateVector>>>) -> Result<Self> {
        for (party, party_bases) in bases.iter().enumerate() {
            for (setting, basis) in party_bases.iter().enumerate() {
                if basis.len() != outcomes {
                    return Err(Error::ArityMismatch {
                        detail: format!(
                            "party {party} setting {setting}: {} outcome states, expected {outcomes}",
                            basis.len()
                        ),
                    });
                }
                for (i, a) in basis.iter().enumerate() {
                    for (j, b) in basis.iter().enumerate() {
                        let g = a.inner(b);
                        let expect = if i == j { 1.0 } else { 0.0 };
                        let deviation = (g - Complex64::new(expect, 0.0)).norm();
                        if deviation > 1e-12 {
                            return Err(Error::NotOrthonormal {
                                party,
                                setting,
                                deviation,
                            });
                        }
                    }
                }
            }
        }
        Ok(MeasurementSettings { outcomes, bases })
    }

    pub fn outcomes(&self) -> usize {
        self.outcomes
    }

    pub fn parties(&self) -> usize {
        self.bases.len()
    }

    pub fn settings(&self) -> usize {
        self.bases.first().map_or(0, |p| p.len())
    }

    pub fn outcome_state(&self, party: usize, setting: usize, outcome: usize) -> &StateVector {
        &self.bases[party][setting][outcome]
    }

    fn local_dim(&self) -> usize {
        self.bases[0][0][0].dim()
    }

    fn projector(&self, party: usize, setting: usize, outcome: usize) -> ComplexMatrix {
        let v = self.outcome_state(party, setting, outcome);
        ComplexMatrix::from_fn(v.dim(), |i, j| v.amplitude(i) * v.amplitude(j).conj())
    }

    /// The +-1 observable P_0 - P_1 for a two-outcome setting.
    fn dichotomic_observable(&self, party: usize, setting: usize) -> ComplexMatrix {
        self.projector(party, setting, 0)
            .sub(&self.projector(party, setting, 1))
            .unwrap()
    }
}

/// Build the Bell operator of a functional under concrete measurement
/// settings. The result acts on the tensor product of the parties'
/// local spaces, party 0 most significant.
pub fn bell_operator(
    f: &BellFunctional,
    settings: &MeasurementSettings,
) -> Result<ComplexMatrix> {
    if settings.parties() != f.parties {
        return Err(Error::ArityMismatch {
            detail: format!(
                "settings cover {} parties, functional has {}",
                settings.parties(),
                f.parties
            ),
        });
    }
    if settings.settings() < f.settings {
        return Err(Error::ArityMismatch {
            detail: format!(
                "settings provide {} choices per party, functional needs {}",
                settings.settings(),
                f.settings
            ),
        });
    }
    if settings.outcomes() != f.outcomes {
        return Err(Error::ArityMismatch {
            detail: format!(
                "settings have {} outcomes, functional has {}",
                settings.outcomes(),
                f.outcomes
            ),
        });
    }

    let d = settings.local_dim();
    let total_dim = d.pow(f.parties as u32);
    let mut op = ComplexMatrix::zeros(total_dim);

    for term in &f.terms {
        match term {
            Term::Prob {
                settings: term_settings,
                signs,
                target,
                coeff,
            } => {
                // Sum the projector products over all outcome tuples
                // satisfying the congruence.
                let mut outcomes = vec![0usize; f.parties];
                loop {
                    let acc: i64 = outcomes
                        .iter()
                        .zip(signs)
                        .map(|(&o, &s)| s as i64 * o as i64)
                        .sum();
                    if acc.rem_euclid(f.outcomes as i64) == *target as i64 {
                        let mut factor =
                            settings.projector(0, term_settings[0], outcomes[0]);
                        for party in 1..f.parties {
                            factor = tensor_product(
                                &factor,
                                &settings.projector(party, term_settings[party], outcomes[party]),
                            );
                        }
                        op = op.add(&factor.scale_re(*coeff))?;
                    }
                    let mut pos = f.parties;
                    let mut done = false;
                    loop {
                        if pos == 0 {
                            done = true;
                            break;
                        }
                        pos -= 1;
                        outcomes[pos] += 1;
                        if outcomes[pos] < f.outcomes {
                            break;
                        }
                        outcomes[pos] = 0;
                    }
                    if done {
                        break;
                    }
                }
            }
            Term::Corr {
                settings: term_settings,
                coeff,
            } => {
                let mut factor = match term_settings[0] {
                    Some(s) => settings.dichotomic_observable(0, s),
                    None => ComplexMatrix::identity(d),
                };
                for party in 1..f.parties {
                    let local = match term_settings[party] {
                        Some(s) => settings.dichotomic_observable(party, s),
                        None => ComplexMatrix::identity(d),
                    };
                    factor = tensor_product(&factor, &local);
                }
                op = op.add(&factor.scale_re(*coeff))?;
            }
        }
    }
    Ok(op)
}

/// Expectation of the functional on a state under given settings.
pub fn evaluate(
    f: &BellFunctional,
    settings: &MeasurementSettings,
    psi: &StateVector,
) -> Result<f64> {
    let op = bell_operator(f, settings)?;
    expectation(&op, psi)
}
