//! Benchmark problems and the JSON problem-file format.
//!
//! ```json
//! {
//!   "name": "ho_g",
//!   "potential": ["0", "0", "1"],
//!   "trial_poly": ["1"],
//!   "alpha": "2/5"
//! }
//! ```
//!
//! `potential[k]` and `trial_poly[k]` multiply `x^k`. Every number is a
//! rational string (`"3"`, `"-1/4"`), never a float.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{rat, ExactRational, GaussianPolyState, PolynomialHamiltonian};

/// A tabulated value attached to a problem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceValue {
    pub label: String,
    pub value: String,
    pub source: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemSpec {
    pub name: String,
    pub hamiltonian: PolynomialHamiltonian,
    pub trial: GaussianPolyState,
    pub references: Vec<ReferenceValue>,
}

pub const BUILTIN_NAMES: [&str; 4] = ["ho_g", "ho_e", "aho_g", "aho_e"];

fn reference(label: &str, value: &str, source: &str) -> ReferenceValue {
    ReferenceValue { label: label.into(), value: value.into(), source: source.into() }
}

fn make(name: &str, potential: &[i64], trial: &[(i64, i64)], alpha: (i64, i64), refs: Vec<ReferenceValue>) -> ProblemSpec {
    let hamiltonian = PolynomialHamiltonian::new(potential.iter().map(|&c| rat(c, 1)).collect())
        .expect("builtin potential is valid");
    let trial = GaussianPolyState::new(trial.iter().map(|&(n, d)| rat(n, d)).collect(), rat(alpha.0, alpha.1))
        .expect("builtin trial state is valid");
    ProblemSpec { name: name.into(), hamiltonian, trial, references: refs }
}

/// `ho_g`, `ho_e`: `H = p² + x²` with `exp(-2x²/5)` and `(x² - 1/2)·exp(-2x²/5)`;
/// `aho_g`, `aho_e`: `H = p² + x⁴` with `exp(-3x²/2)` and `(x² - 1/4)·exp(-3x²/2)`.
pub fn builtin(name: &str) -> Result<ProblemSpec> {
    let t1 = "Table 1";
    let t10 = "Table 10, exact";
    Ok(match name {
        "ho_g" => make(
            "ho_g",
            &[0, 0, 1],
            &[(1, 1)],
            (2, 5),
            vec![
                reference("E_0", "1", "harmonic spectrum"),
                reference("|<phi|psi_0>|^2", "1.969393167", t1),
                reference("|<phi|psi_2>|^2", "0.01215674794", t1),
                reference("|<phi|psi_4>|^2", "0.0001125624810", t1),
                reference("|<phi|psi_6>|^2", "0.000001158050216", t1),
            ],
        ),
        "ho_e" => make(
            "ho_e",
            &[0, 0, 1],
            &[(-1, 2), (0, 1), (1, 1)],
            (2, 5),
            vec![
                reference("E_2", "5", "harmonic spectrum"),
                reference("|<phi|psi_0>|^2", "0.006078373974", t1),
                reference("|<phi|psi_2>|^2", "1.515878931", t1),
                reference("|<phi|psi_4>|^2", "0.05586468983", t1),
                reference("|<phi|psi_6>|^2", "0.001291015111", t1),
            ],
        ),
        "aho_g" => make("aho_g", &[0, 0, 0, 0, 1], &[(1, 1)], (3, 2), vec![reference("E_0", "1.060362090", t10)]),
        "aho_e" => make(
            "aho_e",
            &[0, 0, 0, 0, 1],
            &[(-1, 4), (0, 1), (1, 1)],
            (3, 2),
            vec![reference("E_2", "7.455697938", t10)],
        ),
        _ => return Err(Error::UnknownProblem(name.into())),
    })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProblemFile {
    name: String,
    potential: Vec<String>,
    trial_poly: Vec<String>,
    alpha: String,
}

fn line_of(text: &str, needle: &str) -> usize {
    let quoted = format!("\"{needle}\"");
    text.lines().position(|l| l.contains(&quoted)).map_or(1, |i| i + 1)
}

/// Parses `"n"` or `"n/d"` exactly.
pub fn parse_rational(s: &str) -> std::result::Result<ExactRational, String> {
    let t = s.trim();
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n = BigInt::from_str(n).map_err(|_| format!("`{s}` is not a rational number"))?;
    let d = BigInt::from_str(d).map_err(|_| format!("`{s}` is not a rational number"))?;
    if d.is_zero() {
        return Err(format!("`{s}` has a zero denominator"));
    }
    Ok(ExactRational::new(n, d))
}

pub fn format_rational(q: &ExactRational) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Reads a problem from its JSON text.
pub fn load_problem(text: &str) -> Result<ProblemSpec> {
    let file: ProblemFile =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line().max(1), reason: e.to_string() })?;
    let parse_all = |v: &[String]| -> Result<Vec<ExactRational>> {
        v.iter()
            .map(|s| parse_rational(s).map_err(|reason| Error::Parse { line: line_of(text, s), reason }))
            .collect()
    };
    let potential = parse_all(&file.potential)?;
    let poly = parse_all(&file.trial_poly)?;
    let alpha = parse_rational(&file.alpha).map_err(|reason| Error::Parse { line: line_of(text, &file.alpha), reason })?;
    if file.name.trim().is_empty() {
        return Err(Error::Validation("problem name is empty".into()));
    }
    if !alpha.is_positive() {
        return Err(Error::Validation(format!("alpha must be positive, got {}", file.alpha)));
    }
    if poly.iter().all(|c| c.is_zero()) {
        return Err(Error::Validation("trial polynomial is empty".into()));
    }
    let hamiltonian = PolynomialHamiltonian::new(potential)?;
    let trial = GaussianPolyState::new(poly, alpha)?;
    let references = builtin(&file.name)
        .ok()
        .filter(|b| b.hamiltonian == hamiltonian && b.trial == trial)
        .map(|b| b.references)
        .unwrap_or_default();
    Ok(ProblemSpec { name: file.name, hamiltonian, trial, references })
}

/// The JSON problem file for `spec`; [`load_problem`] inverts it exactly.
pub fn serialize(spec: &ProblemSpec) -> String {
    let file = ProblemFile {
        name: spec.name.clone(),
        potential: spec.hamiltonian.potential().iter().map(format_rational).collect(),
        trial_poly: spec.trial.coeffs().iter().map(format_rational).collect(),
        alpha: format_rational(spec.trial.alpha()),
    };
    serde_json::to_string_pretty(&file).expect("plain strings serialize") + "\n"
}

/// A builtin name, or else the path of a problem file.
pub fn resolve(name_or_path: &str) -> Result<ProblemSpec> {
    if let Ok(p) = builtin(name_or_path) {
        return Ok(p);
    }
    let path = Path::new(name_or_path);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
        return load_problem(&text);
    }
    Err(Error::UnknownProblem(name_or_path.into()))
}
