//! Matching `2N` Taylor coefficients `F_k` to an exponential sum
//! `Σ d_j·exp(-t·e_j)`, i.e. `F_k = Σ d_j·e_j^k` for `k < 2N`.
//!
//! The exponents are the roots of the characteristic polynomial
//! `Σ_j p_j·W^j` whose coefficients solve the Hankel system
//! `Σ_j F_{i+j}·p_j = 0`. The amplitudes solve the first `N` equations.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{hankel, leading_minors, solve_complex, solve_exact, vandermonde_log10_condition, vandermonde_solve};
use crate::qstate::{ExactRational, MomentSequence};
use crate::real::{bits_for_digits, Complex, Real};
use crate::roots::{aberth, exact_polynomial_roots};

/// Working precision and the tolerances derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecisionContext {
    digits: u32,
    merge_tol: Real,
    residual_tol: Real,
}

impl PrecisionContext {
    pub const MIN_DIGITS: u32 = 30;

    pub fn new(digits: u32) -> Result<Self> {
        if digits < Self::MIN_DIGITS {
            return Err(Error::Validation(format!(
                "precision must be at least {} digits, got {digits}",
                Self::MIN_DIGITS
            )));
        }
        let bits = bits_for_digits(digits);
        Ok(PrecisionContext {
            digits,
            merge_tol: pow10(-(digits as i64) / 2, bits),
            residual_tol: pow10(-(digits as i64) + 5, bits),
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    /// Binary precision of every [`Real`] created under this context.
    pub fn bits(&self) -> usize {
        bits_for_digits(self.digits)
    }

    /// Relative distance below which two exponents count as one.
    pub fn merge_tol(&self) -> &Real {
        &self.merge_tol
    }

    /// Relative Newton step at which a root counts as polished.
    pub fn residual_tol(&self) -> &Real {
        &self.residual_tol
    }

    /// `10^-(digits-15)`, the tolerance for identities checked after a fit.
    pub fn check_tol(&self) -> Real {
        pow10(-(self.digits as i64) + 15, self.bits())
    }

    pub fn real(&self, x: &ExactRational) -> Real {
        Real::from_rational(x, self.bits())
    }
}

pub(crate) fn pow10(e: i64, prec: usize) -> Real {
    let ten = Real::from_i64(10, prec);
    let p = ten.powi(e.unsigned_abs() as usize);
    if e < 0 {
        Real::one(prec) / p
    } else {
        p
    }
}

/// Taylor coefficients `F_0..F_{2N-1}`.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesCoefficients {
    Exact(Vec<ExactRational>),
    Approx(Vec<Real>),
}

impl SeriesCoefficients {
    fn check_len(n: usize) -> Result<()> {
        if n < 2 || !n.is_multiple_of(2) {
            return Err(Error::Validation(format!(
                "need an even number (at least 2) of Taylor coefficients, got {n}"
            )));
        }
        Ok(())
    }

    pub fn exact(values: Vec<ExactRational>) -> Result<Self> {
        Self::check_len(values.len())?;
        Ok(SeriesCoefficients::Exact(values))
    }

    pub fn approx(values: Vec<Real>) -> Result<Self> {
        Self::check_len(values.len())?;
        Ok(SeriesCoefficients::Approx(values))
    }

    /// The first `2·order` coefficients of `values`.
    pub fn exact_prefix(values: &[ExactRational], order: usize) -> Result<Self> {
        if values.len() < 2 * order {
            return Err(Error::InsufficientData { needed: 2 * order, available: values.len() });
        }
        Self::exact(values[..2 * order].to_vec())
    }

    pub fn len(&self) -> usize {
        match self {
            SeriesCoefficients::Exact(v) => v.len(),
            SeriesCoefficients::Approx(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn order(&self) -> usize {
        self.len() / 2
    }

    fn truncate(&self, order: usize) -> Self {
        match self {
            SeriesCoefficients::Exact(v) => SeriesCoefficients::Exact(v[..2 * order].to_vec()),
            SeriesCoefficients::Approx(v) => SeriesCoefficients::Approx(v[..2 * order].to_vec()),
        }
    }

    pub fn to_complex(&self, ctx: &PrecisionContext) -> Vec<Complex> {
        match self {
            SeriesCoefficients::Exact(v) => v.iter().map(|x| Complex::from_real(ctx.real(x))).collect(),
            SeriesCoefficients::Approx(v) => v.iter().map(|x| Complex::from_real(x.with_precision(ctx.bits()))).collect(),
        }
    }
}

/// One term `d·exp(-t·e)`.
#[derive(Debug, Clone)]
pub struct ExpTerm {
    pub amplitude: Complex,
    pub exponent: Complex,
}

#[derive(Debug, Clone)]
pub struct ExponentialModel {
    pub terms: Vec<ExpTerm>,
    /// Number of terms actually fitted, after order reduction and merging.
    pub effective_order: usize,
    /// Order that was asked for.
    pub requested_order: usize,
    pub constant: Option<Complex>,
}

impl ExponentialModel {
    pub fn exponents(&self) -> Vec<Complex> {
        self.terms.iter().map(|t| t.exponent.clone()).collect()
    }

    pub fn amplitudes(&self) -> Vec<Complex> {
        self.terms.iter().map(|t| t.amplitude.clone()).collect()
    }

    /// Multiplies every amplitude (and the constant) by `s`.
    pub fn scaled(mut self, s: &Real) -> Self {
        for t in &mut self.terms {
            t.amplitude = t.amplitude.scale(s);
        }
        self.constant = self.constant.map(|c| c.scale(s));
        self
    }
}

fn singular_order(values: &[ExactRational], order: usize) -> usize {
    let h = hankel(values, 0, order);
    leading_minors(&h)
        .iter()
        .enumerate()
        .take(order.saturating_sub(1))
        .filter(|(_, d)| !d.is_zero())
        .map(|(k, _)| k + 1)
        .next_back()
        .unwrap_or(0)
}

/// Coefficients `p_0..p_N` (with `p_N = 1`) of the characteristic polynomial.
pub fn characteristic_polynomial(f: &SeriesCoefficients) -> Result<Vec<ExactRational>> {
    let SeriesCoefficients::Exact(values) = f else {
        return Err(Error::Validation("characteristic polynomial needs exact coefficients".into()));
    };
    let n = f.order();
    let h = hankel(values, 0, n);
    let rhs: Vec<ExactRational> = (0..n).map(|i| -values[i + n].clone()).collect();
    match solve_exact(&h, &rhs) {
        Some(mut p) => {
            p.push(ExactRational::from_integer(1.into()));
            Ok(p)
        }
        None => Err(Error::SingularHankel { max_feasible_order: singular_order(values, n) }),
    }
}

fn characteristic_polynomial_approx(values: &[Complex], ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    let n = values.len() / 2;
    let h = hankel(values, 0, n);
    let rhs: Vec<Complex> = (0..n).map(|i| -&values[i + n]).collect();
    let mut p = solve_complex(&h, &rhs).ok_or(Error::IllConditioned { digits_lost: f64::INFINITY, digits: ctx.digits() })?;
    p.push(Complex::one(values[0].precision()));
    Ok(p)
}

fn sort_key(a: &Complex, b: &Complex) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

/// All `N` roots of `Σ p_j W^j`, repeated according to multiplicity and
/// sorted by real part, then imaginary part.
pub fn pencil_roots(p: &[ExactRational], ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    let roots = exact_polynomial_roots(p, ctx.bits(), ctx.residual_tol())?;
    let mut out: Vec<Complex> = roots
        .into_iter()
        .flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity))
        .collect();
    symmetrize_roots(&mut out, ctx);
    out.sort_by(sort_key);
    Ok(out)
}

/// For a real polynomial: snaps numerically real roots onto the axis and
/// makes complex roots exact conjugate pairs.
fn symmetrize_roots(roots: &mut [Complex], ctx: &PrecisionContext) {
    let prec = ctx.bits();
    let one = Real::one(prec);
    let tol = ctx.merge_tol();
    let mut paired = vec![false; roots.len()];
    for i in 0..roots.len() {
        if paired[i] {
            continue;
        }
        let scale = roots[i].abs().max(one.clone());
        if roots[i].im.abs() <= tol * &scale {
            roots[i].im = Real::zero(prec);
            paired[i] = true;
            continue;
        }
        if roots[i].im.is_negative() {
            continue;
        }
        let target = roots[i].conj();
        let partner = (0..roots.len())
            .filter(|&j| j != i && !paired[j] && roots[j].im.is_negative())
            .min_by(|&a, &b| {
                roots[a].dist(&target).partial_cmp(&roots[b].dist(&target)).unwrap_or(std::cmp::Ordering::Equal)
            });
        if let Some(j) = partner {
            let re = (&roots[i].re + &roots[j].re) / Real::from_i64(2, prec);
            let im = (&roots[i].im - &roots[j].im) / Real::from_i64(2, prec);
            roots[i] = Complex::new(re.clone(), im.clone());
            roots[j] = Complex::new(re, -im);
            paired[i] = true;
            paired[j] = true;
        }
    }
}

/// Groups roots closer than the merge tolerance; returns the distinct
/// representatives (group means) in input order.
fn merge_roots(roots: &[Complex], ctx: &PrecisionContext) -> Vec<Complex> {
    let prec = ctx.bits();
    let one = Real::one(prec);
    let mut groups: Vec<(Complex, usize)> = Vec::new();
    for r in roots {
        let scale = r.abs().max(one.clone());
        let tol = ctx.merge_tol() * &scale;
        match groups.iter_mut().find(|(g, n)| {
            let mean = g.scale(&(Real::one(prec) / Real::from_i64(*n as i64, prec)));
            mean.dist(r) < tol
        }) {
            Some((sum, n)) => {
                *sum = &*sum + r;
                *n += 1;
            }
            None => groups.push((r.clone(), 1)),
        }
    }
    groups
        .into_iter()
        .map(|(s, n)| s.scale(&(Real::one(prec) / Real::from_i64(n as i64, prec))))
        .collect()
}

/// Amplitudes from the first `roots.len()` equations `Σ d_n e_n^k = F_k`.
pub fn solve_amplitudes(f: &SeriesCoefficients, roots: &[Complex], ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    let values = f.to_complex(ctx);
    solve_amplitudes_complex(&values, roots, ctx)
}

fn solve_amplitudes_complex(values: &[Complex], roots: &[Complex], ctx: &PrecisionContext) -> Result<Vec<Complex>> {
    let m = roots.len();
    if values.len() < m {
        return Err(Error::InsufficientData { needed: m, available: values.len() });
    }
    let lost = vandermonde_log10_condition(roots);
    if !lost.is_finite() || lost > ctx.digits() as f64 - 10.0 {
        return Err(Error::IllConditioned { digits_lost: lost, digits: ctx.digits() });
    }
    Ok(vandermonde_solve(roots, &values[..m]))
}

/// Full match: characteristic polynomial, roots, amplitudes. An exactly
/// singular Hankel matrix reduces the order to the largest feasible one.
pub fn match_expansion(f: &SeriesCoefficients, ctx: &PrecisionContext) -> Result<ExponentialModel> {
    let requested = f.order();
    let mut order = requested;
    let roots = loop {
        let fo = f.truncate(order);
        let attempt = match &fo {
            SeriesCoefficients::Exact(_) => characteristic_polynomial(&fo).and_then(|p| pencil_roots(&p, ctx)),
            SeriesCoefficients::Approx(_) => {
                let values = fo.to_complex(ctx);
                characteristic_polynomial_approx(&values, ctx).and_then(|p| {
                    let mut r = aberth(&p, ctx.residual_tol())?;
                    symmetrize_roots(&mut r, ctx);
                    r.sort_by(sort_key);
                    Ok(r)
                })
            }
        };
        match attempt {
            Ok(r) => break r,
            Err(Error::SingularHankel { max_feasible_order }) if max_feasible_order < order => {
                order = max_feasible_order;
                if order == 0 {
                    break Vec::new();
                }
            }
            Err(e) => return Err(e),
        }
    };
    let distinct = merge_roots(&roots, ctx);
    let values = f.to_complex(ctx);
    let mut amps = solve_amplitudes_complex(&values, &distinct, ctx)?;
    // Real input: real exponents carry real weights, conjugate exponents
    // carry conjugate weights.
    for (a, r) in amps.iter_mut().zip(&distinct) {
        if r.im.is_zero() {
            a.im = Real::zero(ctx.bits());
        }
    }
    for i in 0..distinct.len() {
        if distinct[i].im.is_negative() {
            if let Some(j) = (0..distinct.len()).find(|&j| distinct[j] == distinct[i].conj()) {
                amps[i] = amps[j].conj();
            }
        }
    }
    let mut terms: Vec<ExpTerm> = distinct
        .into_iter()
        .zip(amps)
        .map(|(exponent, amplitude)| ExpTerm { amplitude, exponent })
        .collect();
    terms.sort_by(|a, b| sort_key(&a.exponent, &b.exponent));
    Ok(ExponentialModel { effective_order: terms.len(), terms, requested_order: requested, constant: None })
}

/// `constant + Σ d_j·exp(-t·e_j)`.
pub fn evaluate(model: &ExponentialModel, t: &Complex, ctx: &PrecisionContext) -> Complex {
    let t = t.with_precision(ctx.bits());
    let start = model.constant.clone().unwrap_or_else(|| Complex::zero(ctx.bits()));
    model.terms.iter().fold(start, |acc, term| {
        let x = -&(&t * &term.exponent);
        &acc + &(&term.amplitude * &x.exp())
    })
}

/// `Σ d_j·e_j^k` for `k = 0..=kmax` (the constant contributes to `k = 0`).
pub fn reconstruct_taylor(model: &ExponentialModel, kmax: usize) -> Vec<Complex> {
    let prec = model
        .terms
        .first()
        .map(|t| t.exponent.precision())
        .or_else(|| model.constant.as_ref().map(|c| c.precision()))
        .unwrap_or(64);
    let mut out = vec![Complex::zero(prec); kmax + 1];
    if let Some(c) = &model.constant {
        out[0] = c.clone();
    }
    for term in &model.terms {
        let mut w = term.amplitude.clone();
        for slot in out.iter_mut() {
            *slot = &*slot + &w;
            w = &w * &term.exponent;
        }
    }
    out
}

/// Matches the normalized moments `ν_0..ν_{2N-1}` and rescales the
/// amplitudes by `μ_0`, giving `Z(t) = Σ d_j·exp(-t·W_j)` for the
/// unnormalized trial state.
pub fn match_moments(moments: &MomentSequence, order: usize, ctx: &PrecisionContext) -> Result<ExponentialModel> {
    let nu = moments.normalized();
    let f = SeriesCoefficients::exact_prefix(&nu, order)?;
    Ok(match_expansion(&f, ctx)?.scaled(&moments.mu0(ctx)))
}
