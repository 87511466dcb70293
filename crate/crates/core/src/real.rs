//! Multi-precision real and complex scalars.
//!
//! [`Real`] wraps an `astro_float::BigFloat` together with the binary
//! precision it should be computed at. Binary operations run at the larger of
//! the two operand precisions and always round half to even. Conversions to
//! and from [`ExactRational`] are exact in the direction float -> rational
//! (every binary float is a dyadic rational).

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::qstate::ExactRational;

const RM: RoundingMode = RoundingMode::ToEven;
const WORD_BITS: usize = 64;
const LOG2_10: f64 = std::f64::consts::LOG2_10;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Number of mantissa bits needed to hold `digits` decimal digits plus guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    (digits as f64 * LOG2_10).ceil() as usize + 32
}

#[derive(Clone)]
pub struct Real {
    v: BigFloat,
    prec: usize,
}

impl Real {
    pub fn zero(prec: usize) -> Self {
        Real { v: BigFloat::new(prec), prec }
    }

    pub fn one(prec: usize) -> Self {
        Real::from_i64(1, prec)
    }

    pub fn from_i64(x: i64, prec: usize) -> Self {
        Real { v: BigFloat::from_i64(x, prec.max(64)), prec }.rounded()
    }

    pub fn from_f64(x: f64, prec: usize) -> Self {
        Real { v: BigFloat::from_f64(x, prec.max(64)), prec }.rounded()
    }

    /// Exact image of an integer, then rounded to `prec` bits.
    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        if n.is_zero() {
            return Real::zero(prec);
        }
        let (sign, mag) = n.to_u64_digits();
        let e = (mag.len() * WORD_BITS) as i32;
        let s = if sign == IntSign::Minus { Sign::Neg } else { Sign::Pos };
        let v = BigFloat::from_words(&mag, s, e);
        Real { v, prec }.rounded()
    }

    pub fn from_rational(q: &ExactRational, prec: usize) -> Self {
        let num = Real::from_bigint_exact(q.numer());
        let den = Real::from_bigint_exact(q.denom());
        Real { v: num.v.div(&den.v, prec, RM), prec }
    }

    fn from_bigint_exact(n: &BigInt) -> Self {
        let bits = (n.bits() as usize).max(64);
        let mut r = Real::from_bigint(n, bits.div_ceil(WORD_BITS) * WORD_BITS);
        r.prec = bits;
        r
    }

    fn rounded(mut self) -> Self {
        let _ = self.v.set_precision(self.prec, RM);
        self
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Re-rounds to a new precision.
    pub fn with_precision(&self, prec: usize) -> Self {
        Real { v: self.v.clone(), prec }.rounded()
    }

    pub fn pi(prec: usize) -> Self {
        Real { v: with_consts(|cc| cc.pi(prec, RM)), prec }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        !self.v.is_zero() && self.v.is_negative()
    }

    pub fn is_finite(&self) -> bool {
        !self.v.is_nan() && !self.v.is_inf()
    }

    pub fn abs(&self) -> Self {
        Real { v: self.v.abs(), prec: self.prec }
    }

    pub fn sqrt(&self) -> Self {
        Real { v: self.v.sqrt(self.prec, RM), prec: self.prec }
    }

    pub fn exp(&self) -> Self {
        Real { v: with_consts(|cc| self.v.exp(self.prec, RM, cc)), prec: self.prec }
    }

    pub fn ln(&self) -> Self {
        Real { v: with_consts(|cc| self.v.ln(self.prec, RM, cc)), prec: self.prec }
    }

    pub fn sin(&self) -> Self {
        Real { v: with_consts(|cc| self.v.sin(self.prec, RM, cc)), prec: self.prec }
    }

    pub fn cos(&self) -> Self {
        Real { v: with_consts(|cc| self.v.cos(self.prec, RM, cc)), prec: self.prec }
    }

    pub fn atan2(&self, x: &Real) -> Self {
        // atan2(y, x) with y = self
        let prec = self.prec.max(x.prec);
        if x.is_zero() {
            let half_pi = Real::pi(prec) * Real::from_f64(0.5, prec);
            return if self.is_negative() { -half_pi } else { half_pi };
        }
        let ratio = self.clone() / x.clone();
        let base = Real { v: with_consts(|cc| ratio.v.atan(prec, RM, cc)), prec };
        if x.is_negative() {
            if self.is_negative() {
                base - Real::pi(prec)
            } else {
                base + Real::pi(prec)
            }
        } else {
            base
        }
    }

    pub fn powi(&self, n: usize) -> Self {
        Real { v: self.v.powi(n, self.prec, RM), prec: self.prec }
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    /// log2 of |x| as an f64; -inf for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.v.is_zero() {
            return f64::NEG_INFINITY;
        }
        let (words, _, _, e, _) = self.v.as_raw_parts().expect("finite nonzero value");
        let top = *words.last().unwrap() as f64 / 2f64.powi(64);
        e as f64 + top.log2()
    }

    pub fn log10_abs(&self) -> f64 {
        self.log2_abs() / LOG2_10
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_zero() {
            return 0.0;
        }
        let l2 = self.log2_abs();
        if l2 > 1000.0 {
            return if self.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY };
        }
        if l2 < -1000.0 {
            return 0.0;
        }
        self.to_f64_lossy()
    }

    /// Exact dyadic rational equal to this value.
    pub fn to_rational(&self) -> ExactRational {
        let Some((words, _bits, sign, e, _)) = self.v.as_raw_parts() else {
            return ExactRational::zero();
        };
        if words.iter().all(|w| *w == 0) {
            return ExactRational::zero();
        }
        let mut digits = Vec::with_capacity(words.len() * 2);
        for w in words {
            digits.push(*w as u32);
            digits.push((*w >> 32) as u32);
        }
        let mag = BigInt::from_biguint(IntSign::Plus, BigUint::new(digits));
        let mag = if sign == Sign::Neg { -mag } else { mag };
        let shift = e as i64 - (words.len() * WORD_BITS) as i64;
        if shift >= 0 {
            ExactRational::from_integer(mag << shift as usize)
        } else {
            ExactRational::new(mag, BigInt::one() << (-shift) as usize)
        }
    }

    /// Decimal rendering rounded half-to-even to `sig` significant digits.
    pub fn format_sig(&self, sig: usize) -> String {
        format_rational_sig(&self.to_rational(), sig)
    }
}

/// Rounds `q` half-to-even to `sig` significant decimal digits and renders it.
///
/// Plain positional notation is used for decimal exponents in [-7, 10);
/// otherwise scientific notation `d.ddde±x`.
pub fn format_rational_sig(q: &ExactRational, sig: usize) -> String {
    let sig = sig.max(1);
    if q.is_zero() {
        return "0".to_string();
    }
    let neg = q.is_negative();
    let a = q.abs();
    // k = floor(log10 a)
    let mut k = {
        let approx = a.numer().bits() as f64 - a.denom().bits() as f64;
        (approx / LOG2_10).floor() as i64
    };
    let ten = BigInt::from(10u32);
    let pow10 = |e: i64| -> ExactRational {
        if e >= 0 {
            ExactRational::from_integer(num_traits::pow(ten.clone(), e as usize))
        } else {
            ExactRational::new(BigInt::one(), num_traits::pow(ten.clone(), (-e) as usize))
        }
    };
    while pow10(k) > a {
        k -= 1;
    }
    while pow10(k + 1) <= a {
        k += 1;
    }
    let scaled = &a * pow10(sig as i64 - 1 - k);
    let mut int = round_half_even(&scaled);
    if int >= num_traits::pow(ten.clone(), sig) {
        int /= &ten;
        k += 1;
    }
    let digits = int.to_string();
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    if (-7..10).contains(&k) {
        if k < 0 {
            out.push_str("0.");
            for _ in 0..(-k - 1) {
                out.push('0');
            }
            out.push_str(&digits);
        } else {
            let int_len = (k + 1) as usize;
            if digits.len() <= int_len {
                out.push_str(&digits);
                for _ in digits.len()..int_len {
                    out.push('0');
                }
            } else {
                out.push_str(&digits[..int_len]);
                out.push('.');
                out.push_str(&digits[int_len..]);
            }
        }
    } else {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push_str(&format!("e{k}"));
    }
    out
}

fn round_half_even(q: &ExactRational) -> BigInt {
    let (fl, rem) = q.numer().div_mod_floor(q.denom());
    let twice: BigInt = &rem * 2;
    match twice.cmp(q.denom()) {
        Ordering::Less => fl,
        Ordering::Greater => fl + 1,
        Ordering::Equal => {
            if fl.is_even() {
                fl
            } else {
                fl + 1
            }
        }
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.format_sig(25))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = f.precision().unwrap_or(12);
        write!(f, "{}", self.format_sig(sig))
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.v.cmp(&other.v).map(|c| c.cmp(&0))
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl $trait for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                let prec = self.prec.max(rhs.prec);
                Real { v: self.v.$op(&rhs.v, prec, RM), prec }
            }
        }
        impl<'a> $trait<&'a Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                let prec = self.prec.max(rhs.prec);
                Real { v: self.v.$op(&rhs.v, prec, RM), prec }
            }
        }
    };
}

real_binop!(Add, add, add);
real_binop!(Sub, sub, sub);
real_binop!(Mul, mul, mul);
real_binop!(Div, div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { v: self.v.neg(), prec: self.prec }
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real { v: self.v.clone().neg(), prec: self.prec }
    }
}

/// Complex number over [`Real`].
#[derive(Clone, PartialEq)]
pub struct Complex {
    pub re: Real,
    pub im: Real,
}

impl Complex {
    pub fn new(re: Real, im: Real) -> Self {
        Complex { re, im }
    }

    pub fn from_real(re: Real) -> Self {
        let prec = re.precision();
        Complex { re, im: Real::zero(prec) }
    }

    pub fn zero(prec: usize) -> Self {
        Complex { re: Real::zero(prec), im: Real::zero(prec) }
    }

    pub fn one(prec: usize) -> Self {
        Complex::from_real(Real::one(prec))
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        Complex { re: Real::from_f64(re, prec), im: Real::from_f64(im, prec) }
    }

    pub fn precision(&self) -> usize {
        self.re.precision().max(self.im.precision())
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        Complex { re: self.re.with_precision(prec), im: self.im.with_precision(prec) }
    }

    pub fn conj(&self) -> Self {
        Complex { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sqr(&self) -> Real {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn abs(&self) -> Real {
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn scale(&self, s: &Real) -> Self {
        Complex { re: &self.re * s, im: &self.im * s }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        if self.im.is_zero() {
            return Complex::from_real(m);
        }
        Complex { re: &m * &self.im.cos(), im: &m * &self.im.sin() }
    }

    pub fn inv(&self) -> Self {
        let d = self.norm_sqr();
        Complex { re: &self.re / &d, im: -(&self.im / &d) }
    }

    pub fn powi(&self, n: usize) -> Self {
        let mut acc = Complex::one(self.precision());
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Distance |a - b|.
    pub fn dist(&self, other: &Complex) -> Real {
        (self - other).abs()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Renders `a`, or `a+bi` when the imaginary part exceeds `|z|·tol`.
    pub fn format_sig(&self, sig: usize, tol: f64) -> String {
        let scale = self.abs().to_f64().max(f64::MIN_POSITIVE);
        if self.im.is_zero() || self.im.abs().to_f64() <= tol * scale {
            return self.re.format_sig(sig);
        }
        let im = self.im.format_sig(sig);
        let re = self.re.format_sig(sig);
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

impl fmt::Debug for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

impl<'a> Add<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn add(self, rhs: &'a Complex) -> Complex {
        Complex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn sub(self, rhs: &'a Complex) -> Complex {
        Complex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn mul(self, rhs: &'a Complex) -> Complex {
        Complex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a Complex> for &'a Complex {
    type Output = Complex;
    fn div(self, rhs: &'a Complex) -> Complex {
        self * &rhs.inv()
    }
}

impl Add for Complex {
    type Output = Complex;
    fn add(self, rhs: Complex) -> Complex {
        &self + &rhs
    }
}

impl Sub for Complex {
    type Output = Complex;
    fn sub(self, rhs: Complex) -> Complex {
        &self - &rhs
    }
}

impl Mul for Complex {
    type Output = Complex;
    fn mul(self, rhs: Complex) -> Complex {
        &self * &rhs
    }
}

impl Div for Complex {
    type Output = Complex;
    fn div(self, rhs: Complex) -> Complex {
        &self / &rhs
    }
}

impl Neg for Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -self.re, im: -self.im }
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex { re: -&self.re, im: -&self.im }
    }
}
