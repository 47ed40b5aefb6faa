//! Command-line front end for the qutrit-bell library.
//!
//! Every pipeline stage is a subcommand: basis dumps, state embedding,
//! operator decomposition and lifting, Bell operator construction,
//! exact classical bounds, the bundled two- and three-qutrit reports,
//! the correlation-space bound, and a one-shot `reproduce` run of all
//! built-in checks.
//!
//! Exit codes: 0 on success, 1 on runtime or check failures, 2 on
//! usage errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::json;

use qutrit_bell::checks;
use qutrit_bell::cglmp;
use qutrit_bell::decomp::{decompose_gamma, lift_to_qubits, pauli_expand, TensorCoefficients};
use qutrit_bell::functional::{bell_operator, lhv_bounds, BellFunctional, MeasurementSettings};
use qutrit_bell::matrix::{expectation, hermitian_eig, ComplexMatrix, StateVector};
use qutrit_bell::resources;
use qutrit_bell::spin::{
    delta_basis, embed_state, gamma_basis, spin_matrices, OperatorBasis, SpinVariant,
};
use qutrit_bell::three_qutrit;
use qutrit_bell::tsirelson;

#[derive(Parser)]
#[command(
    name = "qutrit-bell",
    version,
    about = "Qutrit Bell operators in the symmetric two-qubit representation"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Tolerance for flagged comparisons in reports. Reporting only:
    /// `reproduce` always judges its criteria at their built-in
    /// tolerances.
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<VariantArg> for SpinVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::A => SpinVariant::A,
            VariantArg::B => SpinVariant::B,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisKind {
    /// Spin-1 matrices of the chosen variant
    Spin,
    /// Nine-element qutrit operator basis
    Gamma,
    /// Matching symmetric two-qubit basis
    Delta,
}

#[derive(Clone, Copy, ValueEnum)]
enum DecompBasis {
    Gamma,
    Pauli,
}

#[derive(Subcommand)]
enum Command {
    /// Print a built-in operator basis
    Bases {
        which: BasisKind,
        /// Spin convention (ignored for delta)
        #[arg(long, value_enum, default_value_t = VariantArg::A)]
        variant: VariantArg,
    },
    /// Map a qutrit state into the symmetric two-qubit subspace
    Embed {
        /// State JSON file: {"dim": 3, "amplitudes": [[re, im], ...]}
        state: PathBuf,
        #[arg(long, value_enum, default_value_t = VariantArg::A)]
        variant: VariantArg,
    },
    /// Expand a Hermitian operator over a product basis
    Decompose {
        /// Operator JSON file: {"dim": n, "entries": [[[re, im], ...], ...]}
        operator: PathBuf,
        #[arg(long, value_enum, default_value_t = DecompBasis::Gamma)]
        basis: DecompBasis,
        #[arg(long, value_enum, default_value_t = VariantArg::A)]
        variant: VariantArg,
    },
    /// Lift spin-product coefficients to a 2n-qubit operator
    Lift {
        /// Coefficient JSON file: {"n": n, "terms": [{"index": [..], "coeff": x}, ...]}
        coeffs: PathBuf,
    },
    /// Build the Bell operator of a functional under measurement settings
    Bellop {
        /// Functional JSON file, or a built-in name (cglmp, four-qubit,
        /// three-qutrit)
        functional: Option<String>,
        /// Settings JSON file: {"outcomes": d, "bases": [party][setting][outcome] states}
        settings: Option<PathBuf>,
        /// Export a built-in functional as JSON (all names when omitted)
        #[arg(long, value_name = "NAME", num_args = 0..=1, default_missing_value = "")]
        dump: Option<String>,
    },
    /// Exact deterministic bounds of a Bell functional
    Lhv {
        /// Functional JSON file, or a built-in name
        source: String,
    },
    /// Two-qutrit report: operator, decompositions, and optima
    Cglmp,
    /// Correlation-space bound matching the operator maximum
    Tsirelson,
    /// Three-qutrit reconstruction report from the bundled tables
    ThreeQutrit,
    /// Run every bundled check and print a pass/fail table
    Reproduce,
}

/// Twelve significant digits, trailing zeros trimmed.
fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (11 - mag).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn fmt_c(re: f64, im: f64) -> String {
    if im == 0.0 {
        sig12(re)
    } else if re == 0.0 {
        format!("{}i", sig12(im))
    } else if im < 0.0 {
        format!("{}{}i", sig12(re), sig12(im))
    } else {
        format!("{}+{}i", sig12(re), sig12(im))
    }
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("report serializes")
    );
}

fn print_matrix(m: &ComplexMatrix) {
    for i in 0..m.dim() {
        let row: Vec<String> = (0..m.dim())
            .map(|j| {
                let z = m.get(i, j);
                fmt_c(z.re, z.im)
            })
            .collect();
        println!("{}", row.join("  "));
    }
}

fn print_state(psi: &StateVector) {
    for k in 0..psi.dim() {
        let z = psi.amplitude(k);
        println!("{k}: {}", fmt_c(z.re, z.im));
    }
}

fn read_file(section: &str, path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{section}: cannot read {}: {e}", path.display()))
}

fn parse_json<T: for<'de> Deserialize<'de>>(
    section: &str,
    path: &Path,
    text: &str,
) -> Result<T, String> {
    serde_json::from_str(text).map_err(|e| format!("{section}: {} is not valid: {e}", path.display()))
}

/// A functional argument names either a JSON file or, as a fallback, a
/// built-in resource (an optional .json suffix is ignored for the
/// lookup, so `lhv cglmp.json` works without a file of that name).
fn load_functional(section: &str, source: &str) -> Result<BellFunctional, String> {
    let path = Path::new(source);
    if path.exists() {
        let text = read_file(section, path)?;
        return BellFunctional::from_json(&text)
            .map_err(|e| format!("{section}: {source} is not a functional: {e}"));
    }
    let name = source.strip_suffix(".json").unwrap_or(source);
    resources::builtin(name).map_err(|_| {
        format!(
            "{section}: {source} is neither a readable file nor a built-in functional \
             (built-ins: {})",
            resources::NAMES.join(", ")
        )
    })
}

#[derive(Deserialize)]
struct SettingsFile {
    outcomes: usize,
    bases: Vec<Vec<Vec<StateVector>>>,
}

fn load_settings(section: &str, path: &Path) -> Result<MeasurementSettings, String> {
    let text = read_file(section, path)?;
    let file: SettingsFile = parse_json(section, path, &text)?;
    MeasurementSettings::new(file.outcomes, file.bases)
        .map_err(|e| format!("{section}: invalid settings: {e}"))
}

fn basis_report(basis: &OperatorBasis, format: Format) {
    match format {
        Format::Json => print_json(&json!({
            "label": basis.label(),
            "elements": basis.elements(),
        })),
        Format::Table => {
            println!("basis {}", basis.label());
            for (k, element) in basis.elements().iter().enumerate() {
                println!("element {}", k + 1);
                print_matrix(element);
            }
        }
    }
}

fn cmd_bases(which: BasisKind, variant: SpinVariant, format: Format) {
    match which {
        BasisKind::Gamma => basis_report(&gamma_basis(variant), format),
        BasisKind::Delta => basis_report(&delta_basis(), format),
        BasisKind::Spin => {
            let [sx, sy, sz] = spin_matrices(variant);
            match format {
                Format::Json => print_json(&json!({
                    "label": format!("spin[{variant}]"),
                    "elements": [sx, sy, sz],
                })),
                Format::Table => {
                    println!("basis spin[{variant}]");
                    for (k, m) in [sx, sy, sz].iter().enumerate() {
                        println!("element {}", k + 1);
                        print_matrix(m);
                    }
                }
            }
        }
    }
}

fn cmd_embed(state: &Path, variant: SpinVariant, format: Format) -> Result<(), String> {
    let text = read_file("embed", state)?;
    let psi: StateVector = parse_json("embed", state, &text)?;
    let image = embed_state(&psi, variant).map_err(|e| format!("embed: {e}"))?;
    match format {
        Format::Json => print_json(&image),
        Format::Table => print_state(&image),
    }
    Ok(())
}

fn cmd_decompose(
    operator: &Path,
    basis: DecompBasis,
    variant: SpinVariant,
    format: Format,
) -> Result<(), String> {
    let text = read_file("decompose", operator)?;
    let m: ComplexMatrix = parse_json("decompose", operator, &text)?;
    match basis {
        DecompBasis::Gamma => {
            let coeffs = decompose_gamma(&m, variant).map_err(|e| format!("decompose: {e}"))?;
            match format {
                Format::Json => print_json(&coeffs),
                Format::Table => {
                    for (index, coeff) in coeffs.iter() {
                        let idx: Vec<String> = index.iter().map(u8::to_string).collect();
                        println!("({})  {}", idx.join(","), sig12(coeff));
                    }
                }
            }
        }
        DecompBasis::Pauli => {
            let poly = pauli_expand(&m).map_err(|e| format!("decompose: {e}"))?;
            match format {
                Format::Json => print_json(&poly),
                Format::Table => {
                    for (string, coeff) in poly.iter() {
                        println!("{string}  {}", sig12(coeff));
                    }
                }
            }
        }
    }
    Ok(())
}

fn cmd_lift(coeffs: &Path, format: Format) -> Result<(), String> {
    let text = read_file("lift", coeffs)?;
    let c: TensorCoefficients = parse_json("lift", coeffs, &text)?;
    let lifted = lift_to_qubits(&c).map_err(|e| format!("lift: {e}"))?;
    match format {
        Format::Json => print_json(&lifted),
        Format::Table => print_matrix(&lifted),
    }
    Ok(())
}

fn cmd_bellop_dump(name: &str, format: Format) -> Result<(), String> {
    if name.is_empty() {
        match format {
            Format::Json => {
                let mut all = serde_json::Map::new();
                for n in resources::NAMES {
                    let raw = resources::builtin_json(n).map_err(|e| format!("bellop: {e}"))?;
                    let value: serde_json::Value =
                        serde_json::from_str(raw).expect("embedded resource parses");
                    all.insert(n.to_string(), value);
                }
                print_json(&all);
            }
            Format::Table => {
                for n in resources::NAMES {
                    println!("{n}");
                }
            }
        }
        return Ok(());
    }
    let raw = resources::builtin_json(name).map_err(|_| {
        format!(
            "bellop: no built-in functional named {name} (built-ins: {})",
            resources::NAMES.join(", ")
        )
    })?;
    // Byte-identical export of the embedded resource.
    print!("{raw}");
    Ok(())
}

fn cmd_bellop(
    functional: Option<&str>,
    settings: Option<&Path>,
    dump: Option<&str>,
    format: Format,
) -> Result<(), String> {
    if let Some(name) = dump {
        return cmd_bellop_dump(name, format);
    }
    let (source, settings_path) = match (functional, settings) {
        (Some(f), Some(s)) => (f, s),
        _ => {
            let mut cmd = Cli::command();
            cmd.error(
                clap::error::ErrorKind::MissingRequiredArgument,
                "bellop needs <FUNCTIONAL> and <SETTINGS>, or --dump [NAME]",
            )
            .exit();
        }
    };
    let f = load_functional("bellop", source)?;
    let s = load_settings("bellop", settings_path)?;
    let op = bell_operator(&f, &s).map_err(|e| format!("bellop: {e}"))?;
    match format {
        Format::Json => print_json(&op),
        Format::Table => print_matrix(&op),
    }
    Ok(())
}

fn cmd_lhv(source: &str, format: Format) -> Result<(), String> {
    let f = load_functional("lhv", source)?;
    let (lo, hi) = lhv_bounds(&f).map_err(|e| format!("lhv: {e}"))?;
    match format {
        Format::Json => print_json(&json!({ "min": lo, "max": hi })),
        Format::Table => println!("min {} max {}", sig12(lo), sig12(hi)),
    }
    Ok(())
}

fn cmd_cglmp(format: Format, tol: f64) -> Result<(), String> {
    let section = |e: qutrit_bell::Error| format!("cglmp: {e}");
    let op = cglmp::canonical_operator();
    let eig = hermitian_eig(&op).map_err(section)?;
    let lambda_max = eig.max_eigenvalue();
    let eigenvector = eig.top_eigenvector().clone();
    let me_value = expectation(&op, &cglmp::me_state()).map_err(section)?;
    let (p, peak) = cglmp::optimize_family().map_err(section)?;
    let coeffs = cglmp::spin_coefficients();
    let poly = cglmp::pauli_closed_form();
    let classification = cglmp::classify_terms(&poly).map_err(section)?;
    let four_qubit = cglmp::four_qubit_nonviolation().map_err(section)?;

    let lambda_err = (lambda_max - cglmp::quantum_max()).abs();
    let me_err = (me_value - cglmp::me_expectation_closed_form()).abs();
    let p_err = (p - cglmp::p_max()).abs();

    let blocks: Vec<serde_json::Value> = classification
        .chsh_blocks()
        .iter()
        .map(|b| {
            let lambda = b.lambda().map_err(section)?;
            Ok(json!({
                "pair": [b.pair().0, b.pair().1],
                "lambda": lambda,
                "terms": b.terms().iter()
                    .map(|(s, c)| json!({ "string": s, "coeff": c }))
                    .collect::<Vec<_>>(),
            }))
        })
        .collect::<Result<_, String>>()?;
    let mermin: Vec<serde_json::Value> = classification
        .mermin_terms()
        .iter()
        .map(|(s, c)| json!({ "string": s, "coeff": c }))
        .collect();

    match format {
        Format::Json => print_json(&json!({
            "canonical_operator": op,
            "classification": { "chsh_blocks": blocks, "mermin_terms": mermin },
            "consistency": {
                "lambda_max_abs_error": lambda_err,
                "me_expectation_abs_error": me_err,
                "family_peak_p_abs_error": p_err,
                "tol": tol,
                "within_tol": lambda_err <= tol && me_err <= tol,
            },
            "eigenvector": eigenvector,
            "family_peak": { "p": p, "value": peak },
            "four_qubit": four_qubit,
            "lambda_max": lambda_max,
            "me_expectation": me_value,
            "p_max_closed_form": cglmp::p_max(),
            "pauli_terms": poly,
            "spin_coefficients": coeffs,
        })),
        Format::Table => {
            println!("lambda_max: {}", sig12(lambda_max));
            println!("me_expectation: {}", sig12(me_value));
            println!("family peak: value {} at p {}", sig12(peak), sig12(p));
            println!("p_max closed form: {}", sig12(cglmp::p_max()));
            println!(
                "four-qubit bounds: classical [{}, {}], quantum max {}, violated: {}",
                sig12(four_qubit.classical_min),
                sig12(four_qubit.classical_max),
                sig12(four_qubit.quantum_max),
                if four_qubit.violated { "yes" } else { "no" }
            );
            println!(
                "consistency vs closed forms (tol {}): lambda {} me {} p {}",
                sig12(tol),
                sig12(lambda_err),
                sig12(me_err),
                sig12(p_err)
            );
            println!("top eigenvector:");
            print_state(&eigenvector);
            println!("canonical operator:");
            print_matrix(&op);
            println!("spin coefficients:");
            for (index, coeff) in coeffs.iter() {
                let idx: Vec<String> = index.iter().map(u8::to_string).collect();
                println!("({})  {}", idx.join(","), sig12(coeff));
            }
            println!("Pauli terms:");
            for (string, coeff) in poly.iter() {
                println!("{string}  {}", sig12(coeff));
            }
            for b in classification.chsh_blocks() {
                let lambda = b.lambda().map_err(section)?;
                println!(
                    "CHSH block on qubits ({}, {}): lambda {}",
                    b.pair().0,
                    b.pair().1,
                    sig12(lambda)
                );
                for (s, c) in b.terms() {
                    println!("  {s}  {}", sig12(*c));
                }
            }
            println!("four-body terms:");
            for (s, c) in classification.mermin_terms() {
                println!("  {s}  {}", sig12(*c));
            }
        }
    }
    Ok(())
}

fn cmd_tsirelson(format: Format, tol: f64) -> Result<(), String> {
    let section = |e: qutrit_bell::Error| format!("tsirelson: {e}");
    let witnesses = tsirelson::verify_anticommuting_sets().map_err(section)?;
    let spectrum = hermitian_eig(&tsirelson::pi_operator().map_err(section)?)
        .map_err(section)?
        .eigenvalues()
        .to_vec();
    let mut multiplicities: Vec<(f64, usize)> = Vec::new();
    for &value in &spectrum {
        match multiplicities.last_mut() {
            Some((v, count)) if (*v - value).abs() <= 1e-9 => *count += 1,
            _ => multiplicities.push((value, 1)),
        }
    }
    let bound = tsirelson::maximize();
    let operator_max = hermitian_eig(&cglmp::canonical_operator())
        .map_err(section)?
        .max_eigenvalue();
    let difference = (bound.value - operator_max).abs();

    match format {
        Format::Json => print_json(&json!({
            "argmax": bound.variables,
            "comparison": {
                "operator_lambda_max": operator_max,
                "difference": difference,
                "tol": tol,
                "within_tol": difference <= tol,
            },
            "max_value": bound.value,
            "pi_spectrum": multiplicities.iter()
                .map(|(v, n)| json!({ "value": v, "multiplicity": n }))
                .collect::<Vec<_>>(),
            "witnesses": witnesses,
        })),
        Format::Table => {
            for w in &witnesses {
                let classes: Vec<String> = w.classes.iter().map(|c| format!("{c:?}")).collect();
                println!(
                    "witness for {{{}}}: {}",
                    classes.join(", "),
                    w.strings.join(", ")
                );
            }
            let summary: Vec<String> = multiplicities
                .iter()
                .map(|(v, n)| format!("{} (x{n})", sig12(*v)))
                .collect();
            println!("projector spectrum: {}", summary.join(", "));
            println!(
                "argmax: alpha {} beta {} tau {} epsilon {}",
                sig12(bound.variables.alpha),
                sig12(bound.variables.beta),
                sig12(bound.variables.tau),
                sig12(bound.variables.epsilon)
            );
            println!("max value: {}", sig12(bound.value));
            println!(
                "operator lambda_max: {} (difference {}, tol {})",
                sig12(operator_max),
                sig12(difference),
                sig12(tol)
            );
        }
    }
    Ok(())
}

fn cmd_three_qutrit(format: Format, tol: f64) -> Result<(), String> {
    let section = |e: qutrit_bell::Error| format!("three-qutrit: {e}");
    let (lo, hi) = lhv_bounds(&three_qutrit::functional()).map_err(section)?;
    let gamma_readings = three_qutrit::GammaCoefficientTable::bundled().readings();
    let pauli_readings = three_qutrit::PauliPairTable::bundled().readings();
    let report = three_qutrit::resolve_tables().map_err(section)?;
    let chosen = report.chosen_candidate().clone();

    let spin_spectrum = hermitian_eig(&three_qutrit::canonical_operator().map_err(section)?)
        .map_err(section)?
        .eigenvalues()
        .to_vec();
    let pair_reading = pauli_readings
        .iter()
        .find(|r| r.label == chosen.pauli_label)
        .expect("chosen pair reading exists");
    let pair_spectrum =
        hermitian_eig(&three_qutrit::operator_from_pauli_table(pair_reading).map_err(section)?)
            .map_err(section)?
            .eigenvalues()
            .to_vec();

    let lifted = three_qutrit::lifted_operator().map_err(section)?;
    let p_only =
        three_qutrit::optimize_family(&lifted, three_qutrit::FamilyMode::POnly).map_err(section)?;
    let p_theta = three_qutrit::optimize_family(&lifted, three_qutrit::FamilyMode::PTheta)
        .map_err(section)?;

    match format {
        Format::Json => print_json(&json!({
            "cross_residual": chosen.cross_residual,
            "cross_residual_within_tol": chosen.cross_residual <= tol,
            "family": { "p_only": p_only, "p_theta": p_theta },
            "functional_bounds": { "min": lo, "max": hi },
            "gamma_readings": gamma_readings.iter()
                .map(|r| json!({ "label": r.label, "coefficients": r.coefficients }))
                .collect::<Vec<_>>(),
            "pauli_readings": pauli_readings.iter()
                .map(|r| json!({ "label": r.label, "polynomial": r.polynomial }))
                .collect::<Vec<_>>(),
            "resolution": report,
            "spectra": { "pair_form": pair_spectrum, "spin_form": spin_spectrum },
        })),
        Format::Table => {
            println!("functional bounds: min {} max {}", sig12(lo), sig12(hi));
            for r in &gamma_readings {
                println!(
                    "spin-table reading {}: {} expanded terms",
                    r.label,
                    r.coefficients.len()
                );
            }
            for r in &pauli_readings {
                println!(
                    "pair-table reading {}: {} strings",
                    r.label,
                    r.polynomial.len()
                );
            }
            println!("reading candidates:");
            for (k, c) in report.candidates.iter().enumerate() {
                let mark = if k == report.chosen { " (chosen)" } else { "" };
                println!(
                    "  variant {} {} {}: residual {} lambda_max {} me {}{}",
                    c.variant,
                    c.gamma_label,
                    c.pauli_label,
                    sig12(c.cross_residual),
                    sig12(c.lambda_max),
                    sig12(c.me_expectation),
                    mark
                );
            }
            println!(
                "representations agree: {} (best residual {}, tol {})",
                if report.matched { "yes" } else { "no" },
                sig12(chosen.cross_residual),
                sig12(tol)
            );
            let fmt_spectrum = |s: &[f64]| {
                s.iter().map(|&x| sig12(x)).collect::<Vec<_>>().join(" ")
            };
            println!("spin-form spectrum ({}):", spin_spectrum.len());
            println!("  {}", fmt_spectrum(&spin_spectrum));
            println!("pair-form spectrum ({}):", pair_spectrum.len());
            println!("  {}", fmt_spectrum(&pair_spectrum));
            println!(
                "family peak, p only: value {} at p {} (overlap^2 {})",
                sig12(p_only.value),
                sig12(p_only.p),
                sig12(p_only.top_overlap_sq)
            );
            println!(
                "family peak, p and theta: value {} at p {} theta {} (overlap^2 {})",
                sig12(p_theta.value),
                sig12(p_theta.p),
                sig12(p_theta.theta),
                sig12(p_theta.top_overlap_sq)
            );
        }
    }
    Ok(())
}

fn cmd_reproduce(format: Format) -> Result<ExitCode, String> {
    let results = checks::run_all().map_err(|e| format!("reproduce: {e}"))?;
    match format {
        Format::Json => print_json(&results),
        Format::Table => {
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                println!("criterion {:2}: {status}  {}", r.id, r.title);
                for item in &r.items {
                    let mark = if item.passed { "ok  " } else { "FAIL" };
                    println!(
                        "    {mark} {} | computed {} | expected {}",
                        item.label, item.computed, item.expected
                    );
                }
            }
        }
    }
    let failed: Vec<String> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| format!("{} ({})", r.id, r.title))
        .collect();
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("reproduce: criteria failed: {}", failed.join(", "));
        Ok(ExitCode::from(1))
    }
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    let format = cli.format;
    let tol = cli.tol;
    match &cli.command {
        Command::Bases { which, variant } => {
            cmd_bases(*which, (*variant).into(), format);
            Ok(ExitCode::SUCCESS)
        }
        Command::Embed { state, variant } => {
            cmd_embed(state, (*variant).into(), format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Decompose {
            operator,
            basis,
            variant,
        } => {
            cmd_decompose(operator, *basis, (*variant).into(), format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Lift { coeffs } => {
            cmd_lift(coeffs, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bellop {
            functional,
            settings,
            dump,
        } => {
            cmd_bellop(
                functional.as_deref(),
                settings.as_deref(),
                dump.as_deref(),
                format,
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Lhv { source } => {
            cmd_lhv(source, format)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Cglmp => {
            cmd_cglmp(format, tol)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Tsirelson => {
            cmd_tsirelson(format, tol)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ThreeQutrit => {
            cmd_three_qutrit(format, tol)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reproduce => cmd_reproduce(format),
    }
}

fn main() -> ExitCode {
    // Restore default SIGPIPE handling so piping a long table into a
    // pager that exits early kills the process quietly instead of
    // panicking on the closed stream.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }

    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("{message}");
            ExitCode::from(1)
        }
    }
}
