#![allow(dead_code)]

use momx::problems::parse_rational;
use momx::qstate::ExactRational;
use momx::reference::PrintedSection;
use momx::tables::Section;
use momx::Complex;
use num_bigint::BigInt;
use num_traits::Signed;

/// A printed decimal as an exact rational together with one unit in its
/// last printed digit.
pub fn printed_value(s: &str) -> (ExactRational, ExactRational) {
    let t = s.trim();
    let (neg, body) = match t.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, t),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let digits = parse_rational(&format!("{int}{frac}")).expect("printed value parses");
    let mut value = digits / ExactRational::from_integer(scale.clone());
    if neg {
        value = -value;
    }
    (value, ExactRational::new(BigInt::from(1), scale))
}

/// `|z - printed| <= ulp`, with a vanishing imaginary part.
pub fn within_ulp(z: &Complex, printed: &str) -> bool {
    let (v, ulp) = printed_value(printed);
    z.im.abs().to_f64() < 1e-30 && (z.re.to_rational() - v).abs() <= ulp
}

/// Cells of `section` that disagree with the printed section, as
/// `row/column: computed vs printed` strings.
pub fn mismatches(section: &Section, printed: &PrintedSection) -> Vec<String> {
    let mut out = Vec::new();
    if section.rows.len() != printed.rows.len() {
        out.push(format!("{} rows computed, {} printed", section.rows.len(), printed.rows.len()));
        return out;
    }
    for (row, (label, cells)) in section.rows.iter().zip(printed.rows) {
        for (k, (cell, want)) in row.cells.iter().zip(cells.iter()).enumerate() {
            let col = &section.columns[k];
            match (want, &cell.exact) {
                (None, _) => {}
                (Some(w), Some(z)) => {
                    if !within_ulp(z, w) {
                        out.push(format!("{label} {col}: {} vs {w}", cell.value.clone().unwrap_or_default()));
                    }
                }
                (Some(w), None) => {
                    if cell.value.as_deref() != Some(*w) {
                        out.push(format!("{label} {col}: missing vs {w}"));
                    }
                }
            }
        }
    }
    out
}
