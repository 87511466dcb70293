//! The benchmark tables, computed and rendered.
//!
//! Every table is computed twice, at the working precision `P` and at
//! `P + 20` digits; each cell records how many significant digits agree
//! between the two runs.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use crate::cmx::{connected_moments, fit_e, fit_u, knowles_a0, knowles_a0_approx, overlap_s2, track_roots, ConnectedMoments, CmxModel};
use crate::error::{Error, Result};
use crate::expmatch::{match_moments, ExponentialModel, PrecisionContext};
use crate::problems::{builtin, ProblemSpec};
use crate::qstate::{harmonic_overlap, moment_sequence, MomentSequence};
use crate::real::Complex;

/// Significant digits shown in every table.
pub const DISPLAY_DIGITS: usize = 10;

/// Extra digits of the confirmation run.
pub const CONFIRM_DIGITS: u32 = 20;

pub const TABLE_COUNT: u32 = 12;

#[derive(Debug, Clone, Serialize)]
pub struct Cell {
    /// Rounded display string; `None` for a blank cell.
    pub value: Option<String>,
    /// Significant digits confirmed by the higher-precision run.
    pub digits: Option<u32>,
    #[serde(skip)]
    pub exact: Option<Complex>,
}

impl Cell {
    pub fn blank() -> Self {
        Cell { value: None, digits: None, exact: None }
    }

    pub fn text(s: &str) -> Self {
        Cell { value: Some(s.to_string()), digits: None, exact: None }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Section {
    pub title: String,
    pub label: String,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table {
    pub id: String,
    pub title: String,
    pub digits: u32,
    pub sections: Vec<Section>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct TableOptions {
    /// Extend the Knowles table to `M = 100` with floating elimination.
    pub deep: bool,
}

// ---- raw computation ----

#[derive(Clone)]
enum Raw {
    Value(Complex),
    Text(String),
    Blank,
}

struct RawSection {
    title: String,
    label: String,
    columns: Vec<String>,
    rows: Vec<(String, Vec<Raw>)>,
}

struct RawTable {
    title: String,
    sections: Vec<RawSection>,
    notes: Vec<String>,
}

/// Exact moments and connected moments of a problem, computed once.
pub struct ProblemData {
    pub spec: ProblemSpec,
    pub moments: MomentSequence,
    pub connected: ConnectedMoments,
}

impl ProblemData {
    pub fn new(spec: ProblemSpec, kmax: usize) -> Result<Self> {
        let moments = moment_sequence(&spec.hamiltonian, &spec.trial, kmax.max(1))?;
        let connected = connected_moments(&moments.normalized(), kmax.max(1))?;
        Ok(ProblemData { spec, moments, connected })
    }
}

#[derive(Default)]
struct Cache {
    data: RefCell<HashMap<String, Rc<ProblemData>>>,
}

impl Cache {
    fn get(&self, name: &str, kmax: usize) -> Result<Rc<ProblemData>> {
        if let Some(d) = self.data.borrow().get(name) {
            if d.connected.len() >= kmax {
                return Ok(d.clone());
            }
        }
        let d = Rc::new(ProblemData::new(builtin(name)?, kmax)?);
        self.data.borrow_mut().insert(name.to_string(), d.clone());
        Ok(d)
    }
}

/// Runs `f`, and once more at `max(60, 8·order + 40)` digits if the first
/// attempt lost too much precision.
pub fn with_precision_retry<T>(
    ctx: &PrecisionContext,
    order: usize,
    f: impl Fn(&PrecisionContext) -> Result<T>,
) -> Result<T> {
    match f(ctx) {
        Err(e @ (Error::IllConditioned { .. } | Error::NoConvergence { .. })) => {
            let digits = (8 * order as u32 + 40).max(60);
            if digits > ctx.digits() {
                f(&PrecisionContext::new(digits)?)
            } else {
                Err(e)
            }
        }
        r => r,
    }
}

fn exps_amps(m: &ExponentialModel) -> (Vec<Complex>, Vec<Complex>) {
    (m.exponents(), m.amplitudes())
}

/// `[b_0, b_1, ...]` and `[A_0, A_1, ...]` of a U fit, sorted by real part.
fn u_lists(m: &CmxModel) -> (Vec<Complex>, Vec<Complex>) {
    let mut pairs: Vec<(Complex, Complex)> = vec![(m.b0.clone().expect("U fit has b0"), m.a0.clone())];
    pairs.extend(m.terms.iter().map(|t| (t.exponent.clone(), t.amplitude.clone())));
    pairs.sort_by(|a, b| a.0.re.partial_cmp(&b.0.re).unwrap_or(std::cmp::Ordering::Equal));
    pairs.into_iter().unzip()
}

fn e_lists(m: &CmxModel) -> (Vec<Complex>, Vec<Complex>) {
    m.terms.iter().map(|t| (t.exponent.clone(), t.amplitude.clone())).unzip()
}

fn first_k(v: &[Complex], k: usize) -> Vec<Raw> {
    (0..k).map(|i| v.get(i).cloned().map_or(Raw::Blank, Raw::Value)).collect()
}

fn pick(v: &[Complex], idx: &[Option<usize>]) -> Vec<Raw> {
    idx.iter().map(|i| i.and_then(|i| v.get(i).cloned()).map_or(Raw::Blank, Raw::Value)).collect()
}

fn headers(sym: (&str, &str), from: usize, k: usize) -> Vec<String> {
    (from..from + k).map(|j| format!("{}_{j} / {}_{j}", sym.0, sym.1)).collect()
}

/// Rows `"N W"`/`"N d"` (or `b`/`A`) for a sequence of fits, either the
/// first `k` roots of each fit or, with `track`, the roots continuing the
/// trajectories of the first fit.
fn pair_rows(
    labels: &[usize],
    fits: &[(Vec<Complex>, Vec<Complex>)],
    sym: (&str, &str),
    k: usize,
    track: bool,
    notes: &mut Vec<String>,
) -> Vec<(String, Vec<Raw>)> {
    let mut rows = Vec::new();
    if track {
        let roots: Vec<Vec<Complex>> = fits.iter().map(|f| f.0.clone()).collect();
        let t = track_roots(&roots);
        for (r, (label, (e, a))) in labels.iter().zip(fits).enumerate() {
            let idx: Vec<Option<usize>> = t.tracks.iter().take(k).map(|tr| tr[r]).collect();
            rows.push((format!("{label} {}", sym.0), pick(e, &idx)));
            rows.push((format!("{label} {}", sym.1), pick(a, &idx)));
        }
        for (r, i) in t.spurious {
            let (e, a) = &fits[r];
            notes.push(format!(
                "N={}: root {} = {} with {} = {} continues no trajectory of the first row",
                labels[r],
                sym.0,
                e[i].format_sig(DISPLAY_DIGITS, 1e-30),
                sym.1,
                a[i].format_sig(DISPLAY_DIGITS, 1e-30)
            ));
        }
    } else {
        for (label, (e, a)) in labels.iter().zip(fits) {
            rows.push((format!("{label} {}", sym.0), first_k(e, k)));
            rows.push((format!("{label} {}", sym.1), first_k(a, k)));
        }
    }
    rows
}

fn one(title: &str, label: &str, columns: Vec<String>, rows: Vec<(String, Vec<Raw>)>) -> RawSection {
    RawSection { title: title.into(), label: label.into(), columns, rows }
}

fn compute(n: u32, cache: &Cache, ctx: &PrecisionContext, opts: TableOptions) -> Result<RawTable> {
    let mut notes = Vec::new();
    let (title, sections) = match n {
        1 => {
            let g = builtin("ho_g")?;
            let e = builtin("ho_e")?;
            let rows = [0usize, 2, 4, 6]
                .iter()
                .map(|&j| {
                    let cells = [&g, &e]
                        .iter()
                        .map(|p| Raw::Value(Complex::from_real(harmonic_overlap(&p.trial, j, ctx))))
                        .collect();
                    (j.to_string(), cells)
                })
                .collect();
            (
                "Exact overlaps of the harmonic trial states with the oscillator eigenfunctions",
                vec![one("", "j", vec!["|<phi_g|psi_j>|^2".into(), "|<phi_e|psi_j>|^2".into()], rows)],
            )
        }
        2 | 7 | 9 => {
            let (name, labels, k, track): (&str, &[usize], usize, bool) = match n {
                2 => ("ho_g", &[2, 3, 4], 4, false),
                7 => ("ho_e", &[2, 3, 4, 5], 4, false),
                _ => ("aho_g", &[2, 3, 4, 5], 3, true),
            };
            let d = cache.get(name, 2 * labels.last().unwrap() + 2)?;
            let fits = labels
                .iter()
                .map(|&l| with_precision_retry(ctx, l + 1, |c| match_moments(&d.moments, l + 1, c)).map(|m| exps_amps(&m)))
                .collect::<Result<Vec<_>>>()?;
            notes.push("Row N lists the fit with N + 1 exponentials.".into());
            let rows = pair_rows(labels, &fits, ("W", "d"), k, track, &mut notes);
            let title = match n {
                2 => "W_j and d_j for the harmonic oscillator, trial state phi_g",
                7 => "W_j and d_j for the harmonic oscillator, trial state phi_e",
                _ => "W_j and d_j for the anharmonic oscillator, trial state phi_g",
            };
            (title, vec![one("", "N", headers(("W", "d"), 0, k), rows)])
        }
        3 => {
            let d = cache.get("ho_g", 10)?;
            let labels = [2usize, 3, 4];
            let fits = labels
                .iter()
                .map(|&l| with_precision_retry(ctx, l, |c| fit_u(&d.connected, l - 1, c)).map(|m| u_lists(&m)))
                .collect::<Result<Vec<_>>>()?;
            notes.push("Row N lists the U fit with N exponentials in total.".into());
            let rows = pair_rows(&labels, &fits, ("b", "A"), 4, false, &mut notes);
            (
                "U-ansatz b_j and A_j for the harmonic oscillator, trial state phi_g",
                vec![one("", "N", headers(("b", "A"), 0, 4), rows)],
            )
        }
        4 => {
            let d = cache.get("ho_g", 10)?;
            let labels = [2usize, 3, 4];
            let fits = labels
                .iter()
                .map(|&l| with_precision_retry(ctx, l, |c| fit_e(&d.connected, l, c)).map(|m| e_lists(&m)))
                .collect::<Result<Vec<_>>>()?;
            let rows = pair_rows(&labels, &fits, ("b", "A"), 3, false, &mut notes);
            (
                "E-ansatz b_j and A_j for the harmonic oscillator, trial state phi_g",
                vec![one("", "N", headers(("b", "A"), 1, 3), rows)],
            )
        }
        5 | 12 => {
            let (name, labels): (&str, &[usize]) = if n == 5 { ("ho_g", &[2, 3, 4]) } else { ("aho_g", &[2, 3, 4, 5, 6]) };
            let d = cache.get(name, 2 * labels.last().unwrap() + 1)?;
            let rows = labels
                .iter()
                .map(|&l| {
                    let s = with_precision_retry(ctx, l, |c| {
                        let m = fit_e(&d.connected, l, c)?;
                        overlap_s2(&m, &d.moments.mu0(c), c)
                    })?;
                    Ok((l.to_string(), vec![Raw::Value(Complex::from_real(s))]))
                })
                .collect::<Result<Vec<_>>>()?;
            let title = if n == 5 {
                "Ground-state overlap S_N^2 for the harmonic oscillator"
            } else {
                "Ground-state overlap S_N^2 for the anharmonic oscillator"
            };
            (title, vec![one("", "N", vec!["S_N^2".into()], rows)])
        }
        6 => {
            let g = cache.get("ho_g", 21)?;
            let e = cache.get("ho_e", 21)?;
            let rows = (1..=10usize)
                .map(|m| {
                    let cells = [&g, &e]
                        .iter()
                        .map(|d| knowles_a0(&d.connected, m).map(|q| Raw::Value(Complex::from_real(ctx.real(&q)))))
                        .collect::<Result<Vec<_>>>()?;
                    Ok((m.to_string(), cells))
                })
                .collect::<Result<Vec<_>>>()?;
            (
                "Knowles approximant A_{0,N} for the harmonic oscillator",
                vec![one("", "N", vec!["A_{0,N}(g)".into(), "A_{0,N}(e)".into()], rows)],
            )
        }
        8 => {
            let d = cache.get("ho_e", 12)?;
            let rows = (2..=5usize)
                .map(|l| {
                    let m = with_precision_retry(ctx, l + 1, |c| fit_u(&d.connected, l, c))?;
                    Ok((l.to_string(), vec![Raw::Value(m.b0.clone().expect("U fit")), Raw::Value(m.a0)]))
                })
                .collect::<Result<Vec<_>>>()?;
            (
                "U-ansatz b_0 and A_0 for the harmonic oscillator, trial state phi_e",
                vec![one("", "N", vec!["b_0".into(), "A_0".into()], rows)],
            )
        }
        10 => {
            let ms: Vec<usize> = if opts.deep {
                vec![5, 10, 15, 20, 25, 30, 35, 40, 50, 60, 70, 80, 90, 100]
            } else {
                vec![5, 10, 15, 20, 25, 30]
            };
            let (g_cap, e_cap) = if opts.deep { (100, 100) } else { (30, 20) };
            let g = cache.get("aho_g", 2 * g_cap + 1)?;
            let e = cache.get("aho_e", 2 * e_cap + 1)?;
            let cell = |d: &ProblemData, m: usize, cap: usize| -> Result<Raw> {
                if m > cap {
                    return Ok(Raw::Blank);
                }
                if m <= 30 {
                    let q = knowles_a0(&d.connected, m)?;
                    return Ok(Raw::Value(Complex::from_real(ctx.real(&q))));
                }
                let digits = ctx.digits().max(400);
                let c = PrecisionContext::new(digits + (ctx.digits() - ctx.digits().min(60)))?;
                Ok(Raw::Value(Complex::from_real(knowles_a0_approx(&d.connected, m, &c)?)))
            };
            let mut rows = ms
                .iter()
                .map(|&m| Ok((m.to_string(), vec![cell(&g, m, g_cap)?, cell(&e, m, e_cap)?])))
                .collect::<Result<Vec<_>>>()?;
            let exact = |d: &ProblemData| {
                d.spec.references.iter().find(|r| r.label.starts_with("E_")).map_or(Raw::Blank, |r| Raw::Text(r.value.clone()))
            };
            rows.push(("exact".into(), vec![exact(&g), exact(&e)]));
            if opts.deep {
                notes.push("Orders above 30 use floating elimination at 400 or more digits.".into());
            } else {
                notes.push("Blank cells need --deep.".into());
            }
            (
                "Knowles approximant A_{0,M} for the anharmonic oscillator",
                vec![one("", "M", vec!["A_{0,M}(g)".into(), "A_{0,M}(e)".into()], rows)],
            )
        }
        11 => {
            let d = cache.get("aho_g", 14)?;
            let u_labels = [2usize, 3, 4];
            let u_orders = [2usize, 3, 5];
            let fits = u_orders
                .iter()
                .map(|&o| with_precision_retry(ctx, o + 1, |c| fit_u(&d.connected, o, c)).map(|m| u_lists(&m)))
                .collect::<Result<Vec<_>>>()?;
            notes.push("U rows N = 2, 3, 4 use fits with 3, 4 and 6 exponentials; columns follow the N = 2 roots.".into());
            let u_rows = pair_rows(&u_labels, &fits, ("b", "A"), 3, true, &mut notes);
            let e_labels = [2usize, 3, 4, 5];
            let fits = e_labels
                .iter()
                .map(|&l| with_precision_retry(ctx, l, |c| fit_e(&d.connected, l, c)).map(|m| e_lists(&m)))
                .collect::<Result<Vec<_>>>()?;
            let e_rows = pair_rows(&e_labels, &fits, ("b", "A"), 3, false, &mut notes);
            (
                "U- and E-ansatz b_j and A_j for the anharmonic oscillator, trial state phi_g",
                vec![
                    one("U ansatz", "N", headers(("b", "A"), 0, 3), u_rows),
                    one("E ansatz", "N", headers(("b", "A"), 1, 3), e_rows),
                ],
            )
        }
        _ => {
            return Err(Error::Validation(format!("no table {n}; tables are numbered 1 to {TABLE_COUNT}")));
        }
    };
    Ok(RawTable { title: title.to_string(), sections, notes })
}

/// Significant digits on which `a` and `b` agree, capped at `cap`.
pub fn agreeing_digits(a: &Complex, b: &Complex, cap: u32) -> u32 {
    let diff = a.dist(b);
    if diff.is_zero() {
        return cap;
    }
    let scale = b.abs();
    if scale.is_zero() {
        return 0;
    }
    let rel = diff.log10_abs() - scale.log10_abs();
    ((-rel).floor().max(0.0) as u32).min(cap)
}

fn raw_cell(x: &Raw) -> Cell {
    match x {
        Raw::Value(v) => Cell { value: Some(v.format_sig(DISPLAY_DIGITS, 1e-30)), digits: None, exact: Some(v.clone()) },
        Raw::Text(s) => Cell::text(s),
        Raw::Blank => Cell::blank(),
    }
}

/// Table `n` (1 to 12) at `ctx` precision, confirmed at `ctx + 20` digits.
pub fn build_table(n: u32, ctx: &PrecisionContext, opts: TableOptions) -> Result<Table> {
    let cache = Cache::default();
    let base = compute(n, &cache, ctx, opts)?;
    let hi = compute(n, &cache, &PrecisionContext::new(ctx.digits() + CONFIRM_DIGITS)?, opts)?;
    let sections = base
        .sections
        .iter()
        .zip(&hi.sections)
        .map(|(s, h)| Section {
            title: s.title.clone(),
            label: s.label.clone(),
            columns: s.columns.clone(),
            rows: s
                .rows
                .iter()
                .zip(&h.rows)
                .map(|((label, cells), (_, hcells))| Row {
                    label: label.clone(),
                    cells: cells
                        .iter()
                        .zip(hcells)
                        .map(|(c, hc)| {
                            let mut cell = raw_cell(c);
                            if let (Raw::Value(a), Raw::Value(b)) = (c, hc) {
                                cell.digits = Some(agreeing_digits(a, b, ctx.digits()));
                            }
                            cell
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect();
    Ok(Table { id: n.to_string(), title: base.title, digits: ctx.digits(), sections, notes: base.notes })
}

// ---- rendering ----

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Markdown,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(table).expect("tables serialize") + "\n",
        Format::Csv => {
            let mut out = String::from("table,section,row,column,value,digits\n");
            for s in &table.sections {
                for r in &s.rows {
                    for (c, cell) in s.columns.iter().zip(&r.cells) {
                        let fields = [
                            table.id.clone(),
                            s.title.clone(),
                            r.label.clone(),
                            c.clone(),
                            cell.value.clone().unwrap_or_default(),
                            cell.digits.map(|d| d.to_string()).unwrap_or_default(),
                        ];
                        out.push_str(&fields.iter().map(|f| csv_field(f)).collect::<Vec<_>>().join(","));
                        out.push('\n');
                    }
                }
            }
            out
        }
        Format::Markdown => {
            let mut out = format!("## {}: {}\n\n", table.id, table.title);
            for s in &table.sections {
                if !s.title.is_empty() {
                    out.push_str(&format!("### {}\n\n", s.title));
                }
                out.push_str(&format!("| {} | {} |\n", s.label, s.columns.join(" | ")));
                out.push_str(&format!("|---|{}\n", "---|".repeat(s.columns.len())));
                for r in &s.rows {
                    let cells: Vec<String> = r
                        .cells
                        .iter()
                        .map(|c| match (&c.value, c.digits) {
                            (None, _) => "-".to_string(),
                            (Some(v), Some(d)) => format!("{v} [{d}]"),
                            (Some(v), None) => v.clone(),
                        })
                        .collect();
                    out.push_str(&format!("| {} | {} |\n", r.label, cells.join(" | ")));
                }
                out.push('\n');
            }
            let annotated = table.sections.iter().flat_map(|s| &s.rows).flat_map(|r| &r.cells).any(|c| c.digits.is_some());
            if annotated {
                out.push_str(&format!(
                    "Working precision {} digits; [k] is the number of significant digits confirmed at {} digits.\n",
                    table.digits,
                    table.digits + CONFIRM_DIGITS
                ));
            } else {
                out.push_str(&format!("Working precision {} digits.\n", table.digits));
            }
            for n in &table.notes {
                out.push_str(&format!("\n- {n}"));
            }
            if !table.notes.is_empty() {
                out.push('\n');
            }
            out
        }
    }
}
