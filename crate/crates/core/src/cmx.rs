//! Connected moments and the fits built on them.
//!
//! With `E(t) = <φ|H e^{-tH}|φ>/<φ|e^{-tH}|φ>` the connected moments are the
//! Taylor coefficients `E(t) = Σ_k I_{k+1}·(-t)^k/k!`. Two ansätze are fitted:
//!
//! * E: `E(t) = A0 + Σ_{j=1..N} A_j·exp(-b_j t)`, from `I_2..I_{2N+1}` plus `I_1`;
//! * U: `E(t) = Σ_{j=0..N} A_j·exp(-b_j t)`, from `I_1..I_{2N+2}`.
//!
//! `A0` (or the amplitude of the smallest exponent `b_0` in the U form)
//! estimates the ground-state energy.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expmatch::{match_expansion, ExpTerm, ExponentialModel, PrecisionContext, SeriesCoefficients};
use crate::linalg::{bordered_schur_complement, hankel, leading_minors, solve_complex};
use crate::qstate::ExactRational;
use crate::real::{Complex, Real};

/// Connected moments `I_1..I_kmax`; `values()[k]` is `I_{k+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectedMoments {
    values: Vec<ExactRational>,
}

impl ConnectedMoments {
    pub fn values(&self) -> &[ExactRational] {
        &self.values
    }

    /// `I_k`, one-based.
    pub fn get(&self, k: usize) -> &ExactRational {
        &self.values[k - 1]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    fn require(&self, needed: usize) -> Result<()> {
        if self.values.len() < needed {
            return Err(Error::InsufficientData { needed, available: self.values.len() });
        }
        Ok(())
    }
}

fn binomial_row(j: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 1..=j {
        let next = &row[k - 1] * BigInt::from(j + 1 - k) / BigInt::from(k);
        row.push(next);
    }
    row
}

/// `I_1 = ν_1`, `I_{j+1} = ν_{j+1} - Σ_{i<j} C(j,i)·I_{i+1}·ν_{j-i}`.
pub fn connected_moments(nu: &[ExactRational], kmax: usize) -> Result<ConnectedMoments> {
    if nu.first().is_none_or(|x| !x.is_one()) {
        return Err(Error::NotNormalized);
    }
    if kmax + 1 > nu.len() {
        return Err(Error::InsufficientData { needed: kmax + 1, available: nu.len() });
    }
    let mut values: Vec<ExactRational> = Vec::with_capacity(kmax);
    for j in 0..kmax {
        let c = binomial_row(j);
        let mut acc = nu[j + 1].clone();
        for i in 0..j {
            acc -= ExactRational::from_integer(c[i].clone()) * &values[i] * &nu[j - i];
        }
        values.push(acc);
    }
    Ok(ConnectedMoments { values })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmxVariant {
    E,
    U,
}

#[derive(Debug, Clone)]
pub struct CmxModel {
    pub variant: CmxVariant,
    /// Requested order `N`.
    pub order: usize,
    /// Number of `(A_j, b_j)` terms besides `A0` after order reduction.
    pub effective_order: usize,
    /// The energy estimate: the constant (E) or the weight of `b_0` (U).
    pub a0: Complex,
    /// U only: the exponent of smallest modulus.
    pub b0: Option<Complex>,
    /// `(A_j, b_j)` for `j ≥ 1`, sorted by real part of `b_j`.
    pub terms: Vec<ExpTerm>,
}

impl CmxModel {
    /// The fit as an exponential sum in `t`; reproduces `I_1, I_2, ...`
    /// under `reconstruct_taylor`.
    pub fn to_exponential_model(&self) -> ExponentialModel {
        let mut terms = self.terms.clone();
        let constant = match (&self.variant, &self.b0) {
            (CmxVariant::U, Some(b0)) => {
                terms.insert(0, ExpTerm { amplitude: self.a0.clone(), exponent: b0.clone() });
                None
            }
            _ => Some(self.a0.clone()),
        };
        ExponentialModel {
            effective_order: terms.len(),
            requested_order: self.order,
            terms,
            constant,
        }
    }
}

fn to_series(values: &[ExactRational]) -> Result<SeriesCoefficients> {
    SeriesCoefficients::exact(values.to_vec())
}

fn snap_real(z: &mut Complex, ctx: &PrecisionContext) {
    if z.im.abs() < ctx.check_tol() {
        z.im = Real::zero(ctx.bits());
    }
}

/// E-ansatz fit, reducing the order when the data are degenerate. The
/// effective order of the result may be below `n`.
pub fn fit_e_reducing(i: &ConnectedMoments, n: usize, ctx: &PrecisionContext) -> Result<CmxModel> {
    if n == 0 {
        return Err(Error::Validation("order must be at least 1".into()));
    }
    i.require(2 * n + 1)?;
    let mut order = n;
    loop {
        // F'_k = I_{k+2} = Σ (A_j b_j)·b_j^k
        let shifted = to_series(&i.values[1..2 * order + 1])?;
        let m = match_expansion(&shifted, ctx)?;
        if m.terms.iter().any(|t| t.exponent.abs() <= *ctx.merge_tol()) {
            // A vanishing exponent folds its term into the constant.
            order = m.effective_order - 1;
            if order == 0 {
                return Ok(constant_model(CmxVariant::E, n, i, ctx));
            }
            continue;
        }
        let mut a0 = Complex::from_real(ctx.real(i.get(1)));
        let terms: Vec<ExpTerm> = m
            .terms
            .into_iter()
            .map(|t| {
                let amplitude = &t.amplitude / &t.exponent;
                a0 = &a0 - &amplitude;
                ExpTerm { amplitude, exponent: t.exponent }
            })
            .collect();
        snap_real(&mut a0, ctx);
        return Ok(CmxModel { variant: CmxVariant::E, order: n, effective_order: terms.len(), a0, b0: None, terms });
    }
}

fn constant_model(variant: CmxVariant, n: usize, i: &ConnectedMoments, ctx: &PrecisionContext) -> CmxModel {
    CmxModel {
        variant,
        order: n,
        effective_order: 0,
        a0: Complex::from_real(ctx.real(i.get(1))),
        b0: None,
        terms: Vec::new(),
    }
}

/// E-ansatz fit of order `n`. Degenerate data (a singular Hankel matrix,
/// repeated or vanishing exponents) give `SingularHankel` with the largest
/// order that can be fitted; see [`fit_e_reducing`].
pub fn fit_e(i: &ConnectedMoments, n: usize, ctx: &PrecisionContext) -> Result<CmxModel> {
    let m = fit_e_reducing(i, n, ctx)?;
    if m.effective_order < n {
        return Err(Error::SingularHankel { max_feasible_order: m.effective_order });
    }
    Ok(m)
}

/// U-ansatz fit with `n + 1` exponentials, reducing the order when the data
/// are degenerate.
pub fn fit_u_reducing(i: &ConnectedMoments, n: usize, ctx: &PrecisionContext) -> Result<CmxModel> {
    i.require(2 * n + 2)?;
    let f = to_series(&i.values[..2 * n + 2])?;
    let m = match_expansion(&f, ctx)?;
    let mut terms = m.terms;
    let k = (0..terms.len())
        .min_by(|&a, &b| {
            terms[a]
                .exponent
                .abs()
                .partial_cmp(&terms[b].exponent.abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .ok_or(Error::SingularHankel { max_feasible_order: 0 })?;
    let t0 = terms.remove(k);
    Ok(CmxModel {
        variant: CmxVariant::U,
        order: n,
        effective_order: terms.len(),
        a0: t0.amplitude,
        b0: Some(t0.exponent),
        terms,
    })
}

/// U-ansatz fit; `SingularHankel` when fewer than `n + 1` exponentials are
/// supported by the data (for an eigenstate, `E(t)` is constant).
pub fn fit_u(i: &ConnectedMoments, n: usize, ctx: &PrecisionContext) -> Result<CmxModel> {
    let m = fit_u_reducing(i, n, ctx)?;
    if m.effective_order < n {
        return Err(Error::SingularHankel { max_feasible_order: m.effective_order });
    }
    Ok(m)
}

/// Pieces of the bordered system: `c = I_1`, `v = (I_2..I_{M+1})`,
/// `H = (I_{i+j+1})_{i,j=1..M}`.
fn knowles_blocks<T: Clone>(i: &[T], m: usize) -> (Vec<Vec<T>>, Vec<T>, T) {
    let h = hankel(i, 2, m);
    let v = i[1..m + 1].to_vec();
    (h, v, i[0].clone())
}

/// `A_{0,M} = I_1 - vᵗ·H⁻¹·v`, exactly.
pub fn knowles_a0(i: &ConnectedMoments, m: usize) -> Result<ExactRational> {
    i.require(2 * m + 1)?;
    let (h, v, c) = knowles_blocks(&i.values, m);
    bordered_schur_complement(&h, &v, &c).ok_or_else(|| {
        let max_feasible_order = leading_minors(&h)
            .iter()
            .take(m.saturating_sub(1))
            .rposition(|d| !d.is_zero())
            .map_or(0, |k| k + 1);
        Error::SingularMatrix { max_feasible_order }
    })
}

/// [`knowles_a0`], falling back to the largest nonsingular order. Returns
/// the value and the order actually used.
pub fn knowles_a0_reducing(i: &ConnectedMoments, m: usize) -> Result<(ExactRational, usize)> {
    match knowles_a0(i, m) {
        Ok(v) => Ok((v, m)),
        Err(Error::SingularMatrix { max_feasible_order }) => {
            knowles_a0(i, max_feasible_order).map(|v| (v, max_feasible_order))
        }
        Err(e) => Err(e),
    }
}

/// [`knowles_a0`] at working precision: the moments are rounded once and
/// the system is solved by partial-pivoting elimination. Used for large `M`
/// where exact elimination is too slow.
pub fn knowles_a0_approx(i: &ConnectedMoments, m: usize, ctx: &PrecisionContext) -> Result<Real> {
    i.require(2 * m + 1)?;
    let vals: Vec<Complex> = i.values[..2 * m + 1].iter().map(|x| Complex::from_real(ctx.real(x))).collect();
    let (h, v, c) = knowles_blocks(&vals, m);
    if m == 0 {
        return Ok(c.re);
    }
    let x = solve_complex(&h, &v).ok_or(Error::SingularMatrix { max_feasible_order: m - 1 })?;
    let quad = v.iter().zip(&x).fold(Complex::zero(ctx.bits()), |acc, (a, b)| &acc + &(a * b));
    Ok((&c - &quad).re)
}

/// Overlap estimate `S² = exp(ln μ0 - Σ A_j/b_j)` from an E-ansatz fit.
pub fn overlap_s2(model: &CmxModel, mu0: &Real, ctx: &PrecisionContext) -> Result<Real> {
    if model.variant != CmxVariant::E {
        return Err(Error::Validation("the overlap estimate needs an E-ansatz model".into()));
    }
    if !mu0.is_finite() || mu0.is_negative() || mu0.is_zero() {
        return Err(Error::Validation("mu0 must be positive".into()));
    }
    let mut sum = Complex::zero(ctx.bits());
    for (index, t) in model.terms.iter().enumerate() {
        if t.exponent.is_zero() {
            return Err(Error::ZeroExponent { index: index + 1 });
        }
        sum = &sum + &(&t.amplitude / &t.exponent);
    }
    if sum.im.abs() >= ctx.check_tol() {
        return Err(Error::NonRealResult { imag: sum.im.to_f64() });
    }
    Ok((mu0.with_precision(ctx.bits()).ln() - sum.re).exp())
}

/// Root trajectories across a sequence of fits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootTracks {
    /// `tracks[t][r]` is the index of trajectory `t`'s root in row `r`.
    pub tracks: Vec<Vec<Option<usize>>>,
    /// `(row, index)` of roots that continue no trajectory.
    pub spurious: Vec<(usize, usize)>,
}

/// Greedy nearest-neighbour continuation of roots from row to row, seeded
/// by the first row. Ties go to the root with the smaller imaginary part.
pub fn track_roots(rows: &[Vec<Complex>]) -> RootTracks {
    let Some(first) = rows.first() else {
        return RootTracks { tracks: vec![], spurious: vec![] };
    };
    let mut tracks: Vec<Vec<Option<usize>>> = (0..first.len()).map(|k| vec![Some(k)]).collect();
    let mut last: Vec<Complex> = first.clone();
    let mut spurious = Vec::new();
    for (r, row) in rows.iter().enumerate().skip(1) {
        let mut pairs: Vec<(f64, f64, usize, usize)> = Vec::new();
        for (t, prev) in last.iter().enumerate() {
            for (k, z) in row.iter().enumerate() {
                pairs.push((prev.dist(z).to_f64(), z.im.abs().to_f64(), t, k));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut used_t = vec![false; last.len()];
        let mut used_k = vec![false; row.len()];
        for track in tracks.iter_mut() {
            track.push(None);
        }
        for (_, _, t, k) in pairs {
            if used_t[t] || used_k[k] {
                continue;
            }
            used_t[t] = true;
            used_k[k] = true;
            tracks[t][r] = Some(k);
            last[t] = row[k].clone();
        }
        spurious.extend((0..row.len()).filter(|&k| !used_k[k]).map(|k| (r, k)));
    }
    RootTracks { tracks, spurious }
}
