//! All-roots polynomial solver: Aberth–Ehrlich iteration seeded in `f64`,
//! refined and Newton-polished in multi-precision arithmetic.
//!
//! Exact rational polynomials are first split into square-free factors
//! (Yun), so every factor handed to the iteration has simple roots and the
//! multiplicities come out exactly.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qstate::ExactRational;
use crate::real::{Complex, Real};

/// A root together with its multiplicity.
#[derive(Debug, Clone)]
pub struct PolyRoot {
    pub value: Complex,
    pub multiplicity: usize,
}

// ---- exact polynomial helpers (low order first) ----

fn trim_exact(mut p: Vec<ExactRational>) -> Vec<ExactRational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn derivative(p: &[ExactRational]) -> Vec<ExactRational> {
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * ExactRational::from_integer(k.into()))
        .collect()
}

fn monic(p: Vec<ExactRational>) -> Vec<ExactRational> {
    let p = trim_exact(p);
    match p.last() {
        Some(lead) if !lead.is_one() => {
            let lead = lead.clone();
            p.into_iter().map(|c| c / &lead).collect()
        }
        _ => p,
    }
}

/// Quotient and remainder of `a / b`.
fn divrem(a: &[ExactRational], b: &[ExactRational]) -> (Vec<ExactRational>, Vec<ExactRational>) {
    let mut r = trim_exact(a.to_vec());
    let b = trim_exact(b.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![ExactRational::zero(); r.len() - db];
    let lead = b[db].clone();
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &f * c;
        }
        q[shift] = f;
        r.pop();
        r = trim_exact(r);
    }
    (trim_exact(q), r)
}

fn gcd(a: &[ExactRational], b: &[ExactRational]) -> Vec<ExactRational> {
    let mut a = monic(a.to_vec());
    let mut b = monic(b.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = monic(r);
    }
    a
}

const PRIMES: [u64; 3] = [2_305_843_009_213_693_951, 1_000_000_007, 998_244_353];

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    r
}

/// Image of `p` in `F_m[x]`, or `None` if a denominator or the leading
/// coefficient vanishes there.
fn reduce_mod(p: &[ExactRational], m: u64) -> Option<Vec<u64>> {
    let big = num_bigint::BigInt::from(m);
    let to_u64 = |x: &num_bigint::BigInt| -> u64 {
        let r = ((x % &big) + &big) % &big;
        r.try_into().expect("residue fits")
    };
    let mut out = Vec::with_capacity(p.len());
    for c in p {
        let d = to_u64(c.denom());
        if d == 0 {
            return None;
        }
        out.push(mul_mod(to_u64(c.numer()), pow_mod(d, m - 2, m), m));
    }
    (out.last() != Some(&0)).then_some(out)
}

fn gcd_degree_mod(a: Vec<u64>, b: Vec<u64>, m: u64) -> usize {
    let trim = |mut v: Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    };
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), m - 2, m);
        while a.len() >= b.len() {
            let f = mul_mod(*a.last().unwrap(), inv, m);
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + m - mul_mod(f, *c, m)) % m;
            }
            a = trim(a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// `gcd(p, p') = 1` certified modulo a prime that keeps both degrees: the
/// modular gcd degree bounds the rational one from above.
fn certainly_square_free(p: &[ExactRational], dp: &[ExactRational]) -> bool {
    PRIMES.iter().any(|&m| match (reduce_mod(p, m), reduce_mod(dp, m)) {
        (Some(a), Some(b)) => gcd_degree_mod(a, b, m) == 0,
        _ => false,
    })
}

/// Yun's square-free factorization: returns `(factor, multiplicity)` pairs
/// with monic, square-free, pairwise coprime factors of positive degree.
pub fn square_free_factors(p: &[ExactRational]) -> Vec<(Vec<ExactRational>, usize)> {
    let p = monic(p.to_vec());
    if p.len() <= 1 {
        return vec![];
    }
    let dp = derivative(&p);
    if certainly_square_free(&p, &dp) {
        return vec![(p, 1)];
    }
    let a0 = gcd(&p, &dp);
    let mut b = divrem(&p, &a0).0;
    let c = divrem(&dp, &a0).0;
    let db = derivative(&b);
    let mut d: Vec<ExactRational> = {
        let n = c.len().max(db.len());
        (0..n)
            .map(|i| {
                c.get(i).cloned().unwrap_or_else(ExactRational::zero)
                    - db.get(i).cloned().unwrap_or_else(ExactRational::zero)
            })
            .collect()
    };
    d = trim_exact(d);
    let mut out = Vec::new();
    let mut k = 1;
    while b.len() > 1 {
        let a = gcd(&b, &d);
        if a.len() > 1 {
            out.push((a.clone(), k));
        }
        b = divrem(&b, &a).0;
        let c = divrem(&d, &a).0;
        let db = derivative(&b);
        let n = c.len().max(db.len());
        d = trim_exact(
            (0..n)
                .map(|i| {
                    c.get(i).cloned().unwrap_or_else(ExactRational::zero)
                        - db.get(i).cloned().unwrap_or_else(ExactRational::zero)
                })
                .collect(),
        );
        k += 1;
    }
    out
}

// ---- numeric root finding ----

fn horner(p: &[Complex], z: &Complex) -> (Complex, Complex) {
    let prec = z.precision();
    let mut val = Complex::zero(prec);
    let mut der = Complex::zero(prec);
    for c in p.iter().rev() {
        der = &(&der * z) + &val;
        val = &(&val * z) + c;
    }
    (val, der)
}

fn horner64(p: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut val = Complex64::new(0.0, 0.0);
    let mut der = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        der = der * z + val;
        val = val * z + c;
    }
    (val, der)
}

fn initial_guesses(p: &[Complex64]) -> Vec<Complex64> {
    let n = p.len() - 1;
    let lead = p[n];
    // Fujiwara-style bound for the root radius.
    let radius = (0..n)
        .map(|k| (p[k] / lead).norm().powf(1.0 / (n - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let center = -p[n - 1] / (lead * n as f64);
    (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            center + Complex64::from_polar(radius, th)
        })
        .collect()
}

fn aberth64(p: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = p.len() - 1;
    let mut z = initial_guesses(p);
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for i in 0..n {
            let (v, d) = horner64(p, z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.is_finite() {
                return None;
            }
            z[i] -= w;
            max_step = max_step.max(w.norm() / z[i].norm().max(1.0));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    z.iter().all(|x| x.is_finite()).then_some(z)
}

/// Roots of `Σ p_k z^k` (simple roots expected) at the precision of the
/// coefficients, polished until the Newton step is below
/// `step_tol·max(1, |z|)`.
pub fn aberth(p: &[Complex], step_tol: &Real) -> Result<Vec<Complex>> {
    let prec = p.iter().map(|c| c.precision()).max().unwrap_or(64);
    let n = p.len() - 1;
    if n == 0 {
        return Ok(vec![]);
    }
    let inv_lead = p[n].inv();
    let p: Vec<Complex> = p.iter().map(|c| c * &inv_lead).collect();
    if n == 1 {
        return Ok(vec![-&p[0]]);
    }
    let p64: Vec<Complex64> = p.iter().map(|c| {
        let (re, im) = c.to_f64_pair();
        Complex64::new(re, im)
    }).collect();
    let seeds = if p64.iter().all(|c| c.is_finite()) { aberth64(&p64) } else { None };
    let seeds = seeds.unwrap_or_else(|| initial_guesses(&p64.iter().map(|c| if c.is_finite() { *c } else { Complex64::new(1e300, 0.0) }).collect::<Vec<_>>()));
    let mut z: Vec<Complex> = seeds.iter().map(|s| Complex::from_f64(s.re, s.im, prec)).collect();

    let one = Complex::one(prec);
    let max_iter = 200 + 20 * n;
    let mut converged = vec![false; n];
    for _ in 0..max_iter {
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (v, d) = horner(&p, &z[i]);
            if v.is_zero() {
                converged[i] = true;
                continue;
            }
            let ratio = &v / &d;
            let mut s = Complex::zero(prec);
            for j in 0..n {
                if j != i {
                    s = &s + &(&z[i] - &z[j]).inv();
                }
            }
            let w = &ratio / &(&one - &(&ratio * &s));
            z[i] = &z[i] - &w;
            let scale = z[i].abs().max(Real::one(prec));
            if w.abs() <= step_tol * &scale {
                converged[i] = true;
            }
        }
        if converged.iter().all(|c| *c) {
            break;
        }
    }
    if let Some(i) = converged.iter().position(|c| !c) {
        return Err(Error::NoConvergence { root_index: i });
    }
    // Newton polish
    for (i, zi) in z.iter_mut().enumerate() {
        let mut ok = false;
        for _ in 0..8 {
            let (v, d) = horner(&p, zi);
            if v.is_zero() {
                ok = true;
                break;
            }
            if d.is_zero() {
                break;
            }
            let step = &v / &d;
            *zi = &*zi - &step;
            let scale = zi.abs().max(Real::one(prec));
            if step.abs() <= step_tol * &scale {
                ok = true;
                break;
            }
        }
        if !ok {
            return Err(Error::NoConvergence { root_index: i });
        }
    }
    Ok(z)
}

/// All roots of an exact rational polynomial, with exact multiplicities.
pub fn exact_polynomial_roots(p: &[ExactRational], prec: usize, step_tol: &Real) -> Result<Vec<PolyRoot>> {
    let mut out = Vec::new();
    for (factor, mult) in square_free_factors(p) {
        let coeffs: Vec<Complex> = factor.iter().map(|c| Complex::from_real(Real::from_rational(c, prec))).collect();
        for value in aberth(&coeffs, step_tol)? {
            out.push(PolyRoot { value, multiplicity: mult });
        }
    }
    Ok(out)
}
