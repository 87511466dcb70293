//! Exact operator algebra for `H = -d²/dx² + V(x)` acting on states
//! `p(x)·exp(-αx²)` with rational coefficients.
//!
//! Every quantity here is an exact rational. Gaussian integrals are carried
//! as a rational part `R` and an exponent `β`, with the value `R·sqrt(π/β)`;
//! the irrational factor is only applied when a caller asks for a [`Real`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::expmatch::PrecisionContext;
use crate::real::Real;

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type ExactRational = BigRational;

pub fn rat(n: i64, d: i64) -> ExactRational {
    ExactRational::new(BigInt::from(n), BigInt::from(d))
}

fn trim(mut v: Vec<ExactRational>) -> Vec<ExactRational> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// `p(x)·exp(-αx²)`; `coeffs[k]` multiplies `x^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussianPolyState {
    coeffs: Vec<ExactRational>,
    alpha: ExactRational,
}

impl GaussianPolyState {
    pub fn new(coeffs: Vec<ExactRational>, alpha: ExactRational) -> Result<Self> {
        if !alpha.is_positive() {
            return Err(Error::Validation(format!("Gaussian exponent must be positive, got {alpha}")));
        }
        Ok(GaussianPolyState { coeffs: trim(coeffs), alpha })
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn alpha(&self) -> &ExactRational {
        &self.alpha
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Multiplies the polynomial part by a scalar.
    pub fn scaled(&self, c: &ExactRational) -> Self {
        GaussianPolyState {
            coeffs: trim(self.coeffs.iter().map(|x| x * c).collect()),
            alpha: self.alpha.clone(),
        }
    }
}

/// `H = -d²/dx² + Σ potential[k]·x^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolynomialHamiltonian {
    potential: Vec<ExactRational>,
}

impl PolynomialHamiltonian {
    pub fn new(potential: Vec<ExactRational>) -> Result<Self> {
        let potential = trim(potential);
        if potential.len() < 2 {
            return Err(Error::Validation("potential must be a polynomial of degree >= 1".into()));
        }
        Ok(PolynomialHamiltonian { potential })
    }

    pub fn potential(&self) -> &[ExactRational] {
        &self.potential
    }

    pub fn degree(&self) -> usize {
        self.potential.len() - 1
    }
}

/// Exact moments `μ_j = R_j·sqrt(π/β)` of a Hamiltonian in a trial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentSequence {
    rational_parts: Vec<ExactRational>,
    beta: ExactRational,
}

impl MomentSequence {
    pub fn rational_parts(&self) -> &[ExactRational] {
        &self.rational_parts
    }

    pub fn beta(&self) -> &ExactRational {
        &self.beta
    }

    pub fn jmax(&self) -> usize {
        self.rational_parts.len() - 1
    }

    /// Normalized moments `ν_j = μ_j/μ_0`.
    pub fn normalized(&self) -> Vec<ExactRational> {
        let r0 = &self.rational_parts[0];
        self.rational_parts.iter().map(|r| r / r0).collect()
    }

    /// `sqrt(π/β)`, the factor shared by every moment.
    pub fn gaussian_factor(&self, ctx: &PrecisionContext) -> Real {
        let p = ctx.bits();
        (Real::pi(p) / Real::from_rational(&self.beta, p)).sqrt()
    }

    pub fn mu(&self, j: usize, ctx: &PrecisionContext) -> Real {
        Real::from_rational(&self.rational_parts[j], ctx.bits()) * self.gaussian_factor(ctx)
    }

    pub fn mu0(&self, ctx: &PrecisionContext) -> Real {
        self.mu(0, ctx)
    }
}

/// `Hφ` for `φ = p·exp(-αx²)`:
/// `q = -p'' + 4αx·p' + 2α·p - 4α²x²·p + V·p`.
pub fn apply_hamiltonian(h: &PolynomialHamiltonian, s: &GaussianPolyState) -> GaussianPolyState {
    let a = &s.alpha;
    let p = &s.coeffs;
    if p.is_empty() {
        return s.clone();
    }
    let two_a = a * ExactRational::from_integer(2.into());
    let four_a = a * ExactRational::from_integer(4.into());
    let four_a2 = a * a * ExactRational::from_integer(4.into());
    let mut q = vec![ExactRational::zero(); p.len() + h.potential.len().max(3)];
    for (k, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if k >= 2 {
            q[k - 2] -= c * ExactRational::from_integer(BigInt::from(k * (k - 1)));
        }
        q[k] += c * (&four_a * ExactRational::from_integer(BigInt::from(k)) + &two_a);
        q[k + 2] -= c * &four_a2;
        for (m, v) in h.potential.iter().enumerate() {
            if !v.is_zero() {
                q[k + m] += c * v;
            }
        }
    }
    GaussianPolyState { coeffs: trim(q), alpha: s.alpha.clone() }
}

/// Rational part of `∫ x^(2n) exp(-βx²) dx / sqrt(π/β) = (2n-1)!!/(2β)^n`.
fn gaussian_even_moment(n: usize, beta: &ExactRational) -> ExactRational {
    let two_beta = beta * ExactRational::from_integer(2.into());
    let mut r = ExactRational::one();
    for i in 0..n {
        r *= ExactRational::from_integer(BigInt::from(2 * i + 1));
        r /= &two_beta;
    }
    r
}

/// Gaussian moment weights `G_k`, `k = 0..=kmax`; odd entries are zero.
fn gaussian_moments(kmax: usize, beta: &ExactRational) -> Vec<ExactRational> {
    let two_beta = beta * ExactRational::from_integer(2.into());
    let mut out = Vec::with_capacity(kmax + 1);
    let mut even = ExactRational::one();
    for k in 0..=kmax {
        if k % 2 == 0 {
            if k > 0 {
                even = even * ExactRational::from_integer(BigInt::from(k - 1)) / &two_beta;
            }
            out.push(even.clone());
        } else {
            out.push(ExactRational::zero());
        }
    }
    out
}

/// `<s1|s2> = R·sqrt(π/β)` with `β = α1 + α2`; returns `(R, β)`.
pub fn inner_product(s1: &GaussianPolyState, s2: &GaussianPolyState) -> (ExactRational, ExactRational) {
    let beta = &s1.alpha + &s2.alpha;
    let kmax = (s1.coeffs.len() + s2.coeffs.len()).saturating_sub(2);
    let g = gaussian_moments(kmax, &beta);
    let mut r = ExactRational::zero();
    for (i, a) in s1.coeffs.iter().enumerate() {
        for (j, b) in s2.coeffs.iter().enumerate() {
            if (i + j) % 2 == 0 && !a.is_zero() && !b.is_zero() {
                r += a * b * &g[i + j];
            }
        }
    }
    (r, beta)
}

/// Polynomial with integer coefficients over a shared positive denominator.
/// Used to run long `H^j` chains without a gcd per coefficient operation.
struct ScaledPoly {
    num: Vec<BigInt>,
    den: BigInt,
}

fn common_denominator(xs: &[&ExactRational]) -> BigInt {
    xs.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn to_integer(x: &ExactRational, den: &BigInt) -> BigInt {
    x.numer() * (den / x.denom())
}

/// `H` specialised to a fixed α and potential on [`ScaledPoly`] values.
struct ScaledHamiltonian {
    /// Common denominator L of 4α, 2α, 4α², V_k.
    scale: BigInt,
    four_a: BigInt,
    two_a: BigInt,
    four_a2: BigInt,
    potential: Vec<BigInt>,
}

impl ScaledHamiltonian {
    fn new(h: &PolynomialHamiltonian, alpha: &ExactRational) -> Self {
        let four_a = alpha * ExactRational::from_integer(4.into());
        let two_a = alpha * ExactRational::from_integer(2.into());
        let four_a2 = alpha * alpha * ExactRational::from_integer(4.into());
        let mut all: Vec<&ExactRational> = vec![&four_a, &two_a, &four_a2];
        all.extend(h.potential.iter());
        let scale = common_denominator(&all);
        ScaledHamiltonian {
            four_a: to_integer(&four_a, &scale),
            two_a: to_integer(&two_a, &scale),
            four_a2: to_integer(&four_a2, &scale),
            potential: h.potential.iter().map(|v| to_integer(v, &scale)).collect(),
            scale,
        }
    }

    fn apply(&self, p: &ScaledPoly) -> ScaledPoly {
        let n = p.num.len();
        let mut q = vec![BigInt::zero(); n + self.potential.len().max(3)];
        for (k, c) in p.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k >= 2 {
                q[k - 2] -= c * BigInt::from(k * (k - 1)) * &self.scale;
            }
            q[k] += c * (&self.four_a * BigInt::from(k) + &self.two_a);
            q[k + 2] -= c * &self.four_a2;
            for (m, v) in self.potential.iter().enumerate() {
                if !v.is_zero() {
                    q[k + m] += c * v;
                }
            }
        }
        while q.last().is_some_and(|c| c.is_zero()) {
            q.pop();
        }
        let mut den = &p.den * &self.scale;
        // strip common content so coefficient growth tracks the true values
        let content = q.iter().fold(den.clone(), |g, c| g.gcd(c));
        if !content.is_one() && !content.is_zero() {
            for c in q.iter_mut() {
                *c /= &content;
            }
            den /= &content;
        }
        ScaledPoly { num: q, den }
    }
}

/// Exact `μ_j = <s|H^j|s>`, `j = 0..=jmax`, all with `β = 2α`.
pub fn moment_sequence(h: &PolynomialHamiltonian, s: &GaussianPolyState, jmax: usize) -> Result<MomentSequence> {
    if jmax < 1 {
        return Err(Error::Validation("jmax must be at least 1".into()));
    }
    if s.is_zero() {
        return Err(Error::Validation("trial state is zero".into()));
    }
    let beta = &s.alpha + &s.alpha;
    let hs = ScaledHamiltonian::new(h, &s.alpha);
    let max_deg = s.coeffs.len() - 1 + jmax * (h.degree().max(2));
    let g = gaussian_moments(max_deg + s.coeffs.len(), &beta);

    // w_b = Σ_a s_a·G_{a+b}; R_j = Σ_b q_b·w_b
    let w: Vec<ExactRational> = (0..=max_deg)
        .map(|b| {
            s.coeffs
                .iter()
                .enumerate()
                .filter(|(a, c)| (a + b) % 2 == 0 && !c.is_zero())
                .map(|(a, c)| c * &g[a + b])
                .fold(ExactRational::zero(), |acc, x| acc + x)
        })
        .collect();
    let w_den = common_denominator(&w.iter().collect::<Vec<_>>());
    let w_int: Vec<BigInt> = w.iter().map(|x| to_integer(x, &w_den)).collect();

    let den0 = common_denominator(&s.coeffs.iter().collect::<Vec<_>>());
    let mut q = ScaledPoly { num: s.coeffs.iter().map(|c| to_integer(c, &den0)).collect(), den: den0 };
    let mut parts = Vec::with_capacity(jmax + 1);
    for j in 0..=jmax {
        let acc = q
            .num
            .iter()
            .zip(&w_int)
            .filter(|(c, _)| !c.is_zero())
            .fold(BigInt::zero(), |acc, (c, wb)| acc + c * wb);
        parts.push(ExactRational::new(acc, &q.den * &w_den));
        if j < jmax {
            q = hs.apply(&q);
        }
    }
    if !parts[0].is_positive() {
        return Err(Error::Validation("trial state has zero norm".into()));
    }
    Ok(MomentSequence { rational_parts: parts, beta })
}

/// Physicists' Hermite polynomial `H_n` as exact coefficients.
pub fn hermite(n: usize) -> Vec<ExactRational> {
    let mut h0 = vec![BigInt::one()];
    if n == 0 {
        return vec![ExactRational::one()];
    }
    let mut h1 = vec![BigInt::zero(), BigInt::from(2)];
    for k in 1..n {
        // H_{k+1} = 2x H_k - 2k H_{k-1}
        let mut h2 = vec![BigInt::zero(); k + 2];
        for (i, c) in h1.iter().enumerate() {
            h2[i + 1] += c * 2;
        }
        for (i, c) in h0.iter().enumerate() {
            h2[i] -= c * BigInt::from(2 * k);
        }
        h0 = h1;
        h1 = h2;
    }
    h1.into_iter().map(ExactRational::from_integer).collect()
}

/// `|<s|ψ_n>|²` for the eigenfunctions `ψ_n` of `-d²/dx² + x²`.
///
/// `ψ_n = (2^n n! sqrt(π))^(-1/2)·H_n(x)·exp(-x²/2)`, so with
/// `<s|H_n e^{-x²/2}> = R·sqrt(π/β)` the overlap is `R²·sqrt(π)/(β·2^n·n!)`.
/// Only meaningful for the harmonic Hamiltonian.
pub fn harmonic_overlap(s: &GaussianPolyState, n: usize, ctx: &PrecisionContext) -> Real {
    let psi = GaussianPolyState { coeffs: hermite(n), alpha: rat(1, 2) };
    let (r, beta) = inner_product(s, &psi);
    if r.is_zero() {
        return Real::zero(ctx.bits());
    }
    let mut denom = beta;
    for k in 1..=n {
        denom *= ExactRational::from_integer(BigInt::from(2 * k));
    }
    let p = ctx.bits();
    Real::from_rational(&(&r * &r / denom), p) * Real::pi(p).sqrt()
}

/// Rational part of the even Gaussian moment, exposed for tests.
pub fn gaussian_even_rational(n: usize, beta: &ExactRational) -> ExactRational {
    gaussian_even_moment(n, beta)
}
