//! The `momx` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::cmx::{fit_e, fit_u_reducing, fit_e_reducing, knowles_a0_approx, knowles_a0_reducing, overlap_s2, CmxModel};
use crate::error::{Error, Result};
use crate::expmatch::{evaluate, match_moments, PrecisionContext};
use crate::problems::resolve;
use crate::real::{Complex, Real};
use crate::tables::{self, build_table, render, with_precision_retry, Cell, ProblemData, Row, Section, Table, TableOptions, DISPLAY_DIGITS};

/// Largest moment index the command line will compute.
pub const MAX_MOMENTS: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
    Md,
}

impl From<OutputFormat> for tables::Format {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => tables::Format::Csv,
            OutputFormat::Json => tables::Format::Json,
            OutputFormat::Md => tables::Format::Markdown,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    E,
    U,
}

#[derive(Debug, Parser)]
#[command(name = "momx", version, about = "Exponential matching of moment and connected-moment expansions")]
pub struct Cli {
    /// Builtin problem (ho_g, ho_e, aho_g, aho_e) or path to a problem file
    #[arg(long, global = true, default_value = "ho_g")]
    pub problem: String,

    /// Order N, or an inclusive range N1..N2
    #[arg(long, global = true, default_value = "4")]
    pub order: String,

    /// Working precision in decimal digits
    #[arg(long, global = true, default_value_t = 60)]
    pub precision: u32,

    /// Output format (md by default; csv for dynamics)
    #[arg(long, global = true, value_enum)]
    pub format: Option<OutputFormat>,

    /// Write the output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// High orders with floating elimination at 400+ digits
    #[arg(long, global = true)]
    pub deep: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact normalized moments nu_j and moments mu_j
    Moments {
        #[arg(long, default_value_t = 10)]
        jmax: usize,
    },
    /// Exponents W_j and weights d_j of Z(t)
    Match,
    /// E- or U-ansatz fit of the connected moments
    Cmx {
        #[arg(long, value_enum, default_value = "e")]
        variant: Variant,
    },
    /// Knowles approximant A_{0,M} (M given by --order)
    Knowles,
    /// Ground-state overlap estimate S_N^2 from the E ansatz
    Overlap,
    /// Reproduce a benchmark table (1 to 12)
    Table { number: u32 },
    /// Survival amplitude Z(it) of the fitted model
    Dynamics {
        #[arg(long, default_value_t = 10.0)]
        tmax: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
}

/// `"N"` or `"N1..N2"`, every order at least 1.
pub fn parse_orders(s: &str) -> Result<Vec<usize>> {
    let bad = || Error::Validation(format!("invalid order `{s}`; expected N or N1..N2"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse::<usize>().map_err(|_| bad())?, b.trim().parse::<usize>().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse::<usize>().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo == 0 || hi < lo {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

fn fmt(z: &Complex) -> String {
    z.format_sig(DISPLAY_DIGITS, 1e-30)
}

fn value(z: &Complex) -> Cell {
    Cell { value: Some(fmt(z)), digits: None, exact: Some(z.clone()) }
}

fn real(x: Real) -> Cell {
    value(&Complex::from_real(x))
}

fn section(title: String, label: &str, columns: &[&str], rows: Vec<Row>) -> Section {
    Section { title, label: label.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows }
}

fn row(label: impl ToString, cells: Vec<Cell>) -> Row {
    Row { label: label.to_string(), cells }
}

fn report(id: &str, title: String, digits: u32, sections: Vec<Section>, notes: Vec<String>) -> Table {
    Table { id: id.into(), title, digits, sections, notes }
}

fn load(cli: &Cli, kmax: usize) -> Result<ProblemData> {
    if kmax > MAX_MOMENTS {
        return Err(Error::InsufficientData { needed: kmax, available: MAX_MOMENTS });
    }
    ProblemData::new(resolve(&cli.problem)?, kmax)
}

fn cmx_section(m: &CmxModel, n: usize) -> Section {
    let mut rows = Vec::new();
    if let Some(b0) = &m.b0 {
        rows.push(row(0, vec![value(b0), value(&m.a0)]));
    } else {
        rows.push(row("A0", vec![Cell::blank(), value(&m.a0)]));
    }
    for (j, t) in m.terms.iter().enumerate() {
        rows.push(row(j + 1, vec![value(&t.exponent), value(&t.amplitude)]));
    }
    section(format!("N = {n}"), "j", &["b_j", "A_j"], rows)
}

fn reduction_note(n: usize, effective: usize, notes: &mut Vec<String>) {
    if effective < n {
        notes.push(format!("N = {n}: degenerate data, reduced to order {effective}"));
    }
}

/// Output of one command, or the dynamics CSV/JSON/markdown text.
pub fn execute(cli: &Cli) -> Result<String> {
    let ctx = PrecisionContext::new(cli.precision)?;
    let orders = parse_orders(&cli.order)?;
    let max_order = *orders.last().unwrap();
    let format: tables::Format = cli.format.unwrap_or(OutputFormat::Md).into();
    let mut notes = Vec::new();
    let table = match &cli.command {
        Command::Moments { jmax } => {
            if *jmax < 1 {
                return Err(Error::Validation("--jmax must be at least 1".into()));
            }
            let d = load(cli, *jmax)?;
            let nu = d.moments.normalized();
            let rows = (0..=*jmax)
                .map(|j| {
                    let mu = d.moments.mu(j, &ctx);
                    row(j, vec![Cell::text(&crate::problems::format_rational(&nu[j])), Cell::text(&mu.format_sig(ctx.digits() as usize))])
                })
                .collect();
            report(
                "moments",
                format!("Moments of {}", d.spec.name),
                ctx.digits(),
                vec![section(String::new(), "j", &["nu_j", "mu_j"], rows)],
                vec![],
            )
        }
        Command::Match => {
            let d = load(cli, 2 * max_order)?;
            let mut sections = Vec::new();
            for &n in &orders {
                let m = with_precision_retry(&ctx, n, |c| match_moments(&d.moments, n, c))?;
                reduction_note(n, m.effective_order, &mut notes);
                let rows = m.terms.iter().enumerate().map(|(j, t)| row(j, vec![value(&t.exponent), value(&t.amplitude)])).collect();
                sections.push(section(format!("N = {n}"), "j", &["W_j", "d_j"], rows));
            }
            report("match", format!("Exponential fit of Z(t) for {}", d.spec.name), ctx.digits(), sections, notes)
        }
        Command::Cmx { variant } => {
            let need = match variant {
                Variant::E => 2 * max_order + 1,
                Variant::U => 2 * max_order + 2,
            };
            let d = load(cli, need)?;
            let mut sections = Vec::new();
            for &n in &orders {
                let m = with_precision_retry(&ctx, n + 1, |c| match variant {
                    Variant::E => fit_e_reducing(&d.connected, n, c),
                    Variant::U => fit_u_reducing(&d.connected, n, c),
                })?;
                reduction_note(n, m.effective_order, &mut notes);
                sections.push(cmx_section(&m, n));
            }
            let v = if *variant == Variant::E { "E" } else { "U" };
            report("cmx", format!("{v}-ansatz fit for {}", d.spec.name), ctx.digits(), sections, notes)
        }
        Command::Knowles => {
            let d = load(cli, 2 * max_order + 1)?;
            let mut rows = Vec::new();
            for &m in &orders {
                let cell = if cli.deep {
                    let c = PrecisionContext::new(ctx.digits().max(400))?;
                    real(knowles_a0_approx(&d.connected, m, &c)?)
                } else {
                    let (q, used) = knowles_a0_reducing(&d.connected, m)?;
                    reduction_note(m, used, &mut notes);
                    real(ctx.real(&q))
                };
                rows.push(row(m, vec![cell]));
            }
            report(
                "knowles",
                format!("Knowles approximant for {}", d.spec.name),
                ctx.digits(),
                vec![section(String::new(), "M", &["A_{0,M}"], rows)],
                notes,
            )
        }
        Command::Overlap => {
            let d = load(cli, 2 * max_order + 1)?;
            let mut rows = Vec::new();
            for &n in &orders {
                let s = with_precision_retry(&ctx, n, |c| {
                    let m = fit_e(&d.connected, n, c)?;
                    overlap_s2(&m, &d.moments.mu0(c), c)
                })?;
                rows.push(row(n, vec![real(s)]));
            }
            report(
                "overlap",
                format!("Overlap estimate S_N^2 for {}", d.spec.name),
                ctx.digits(),
                vec![section(String::new(), "N", &["S_N^2"], rows)],
                vec![],
            )
        }
        Command::Table { number } => build_table(*number, &ctx, TableOptions { deep: cli.deep })?,
        Command::Dynamics { tmax, steps } => {
            if !(tmax.is_finite() && *tmax >= 0.0) || *steps == 0 {
                return Err(Error::Validation("--tmax must be finite and nonnegative, --steps positive".into()));
            }
            let d = load(cli, 2 * max_order)?;
            let m = with_precision_retry(&ctx, max_order, |c| match_moments(&d.moments, max_order, c))?;
            let format = cli.format.unwrap_or(OutputFormat::Csv);
            return Ok(dynamics(&m, *tmax, *steps, &ctx, format));
        }
    };
    Ok(render(&table, format))
}

fn dynamics(m: &crate::expmatch::ExponentialModel, tmax: f64, steps: usize, ctx: &PrecisionContext, format: OutputFormat) -> String {
    let p = ctx.bits();
    let step = Real::from_f64(tmax, p) / Real::from_i64(steps as i64, p);
    let rows: Vec<[String; 4]> = (0..=steps)
        .map(|k| {
            let t = &step * &Real::from_i64(k as i64, p);
            let z = evaluate(m, &Complex::new(Real::zero(p), t.clone()), ctx);
            [t.format_sig(DISPLAY_DIGITS), z.re.format_sig(DISPLAY_DIGITS), z.im.format_sig(DISPLAY_DIGITS), z.norm_sqr().format_sig(DISPLAY_DIGITS)]
        })
        .collect();
    let header = ["t", "re_z", "im_z", "abs_z_sq"];
    match format {
        OutputFormat::Csv => {
            let mut out = header.join(",") + "\n";
            for r in &rows {
                out.push_str(&r.join(","));
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let v: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| serde_json::Value::Object(header.iter().zip(r).map(|(h, x)| (h.to_string(), x.clone().into())).collect()))
                .collect();
            serde_json::to_string_pretty(&v).expect("strings serialize") + "\n"
        }
        OutputFormat::Md => {
            let mut out = format!("| {} |\n|---|---|---|---|\n", header.join(" | "));
            for r in &rows {
                out.push_str(&format!("| {} |\n", r.join(" | ")));
            }
            out
        }
    }
}

/// Exit status for an error: 3 for numerical failures, 2 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_numerical() {
        3
    } else {
        2
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    2
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
