//! Exact arithmetic in the coefficient field `Q(s)`, `s = q^(1/2)`.
//!
//! A [`Scalar`] is a quotient of integer-coefficient Laurent polynomials in
//! `s`, kept in a canonical form so that equality of values is equality of
//! representations:
//!
//! * the fraction is in lowest terms (integer content and polynomial gcd
//!   removed),
//! * the denominator is an ordinary polynomial (lowest `s`-exponent zero,
//!   the Laurent shift is absorbed into the numerator) with positive leading
//!   coefficient.
//!
//! The field carries q-conjugation (`s -> 1/s`, hence `q -> 1/q`), exact
//! evaluation at rational points of `s`, and the classical limit `q -> 1`.
//! Exponents are tracked in half-units of `q`, i.e. integer powers of `s`,
//! which is enough for everything produced by the constructions in this
//! crate; no other algebraic extensions are supported.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use thiserror::Error;

/// Errors produced by scalar arithmetic and evaluation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("pole at s = {0}")]
    Pole(String),
    #[error("evaluation point outside domain: {0}")]
    Domain(String),
    #[error("no classical limit: pole at q = 1")]
    NotClassical,
    #[error("parse error: {0}")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// Laurent polynomials in s over Z
// ---------------------------------------------------------------------------

/// Integer-coefficient Laurent polynomial in `s`.
///
/// `coeffs[k]` is the coefficient of `s^(lo + k)`; both ends of `coeffs` are
/// nonzero unless the polynomial is zero (empty `coeffs`, `lo = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    lo: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { lo: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        LaurentPoly { lo: 0, coeffs: vec![BigInt::one()] }
    }

    /// `c * s^k`.
    pub fn monomial(c: BigInt, k: i64) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { lo: k, coeffs: vec![c] }
        }
    }

    /// Build from `(coefficient, s-exponent)` pairs; repeated exponents add.
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut acc = Self::zero();
        for &(c, k) in terms {
            acc = acc.add(&Self::monomial(BigInt::from(c), k));
        }
        acc
    }

    /// Ascending coefficients starting at exponent `lo`.
    pub fn from_bigint_coeffs(coeffs: &[BigInt], lo: i64) -> Self {
        Self::trim(lo, coeffs.to_vec())
    }

    fn trim(lo: i64, mut coeffs: Vec<BigInt>) -> Self {
        let leading_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if leading_zeros == coeffs.len() {
            return Self::zero();
        }
        coeffs.drain(..leading_zeros);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LaurentPoly { lo: lo + leading_zeros as i64, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest present exponent (0 for the zero polynomial).
    pub fn lowest_exponent(&self) -> i64 {
        self.lo
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(other.lo);
        let hi = (self.lo + self.coeffs.len() as i64).max(other.lo + other.coeffs.len() as i64);
        let mut coeffs = vec![BigInt::zero(); (hi - lo) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.lo - lo) as usize + k] += c;
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            coeffs[(other.lo - lo) as usize + k] += c;
        }
        Self::trim(lo, coeffs)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { lo: self.lo, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        Self::trim(self.lo + other.lo, coeffs)
    }

    /// Substitute `s -> 1/s`.
    pub fn reverse(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let hi = self.lo + self.coeffs.len() as i64 - 1;
        let coeffs = self.coeffs.iter().rev().cloned().collect();
        LaurentPoly { lo: -hi, coeffs }
    }

    /// Exact rational value at `s = s0` (`s0` nonzero).
    pub fn eval(&self, s0: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        // Horner on the ordinary part, then the Laurent shift.
        for c in self.coeffs.iter().rev() {
            acc = acc * s0 + BigRational::from(c.clone());
        }
        acc * pow_rational(s0, self.lo)
    }
}

fn pow_rational(x: &BigRational, k: i64) -> BigRational {
    if k == 0 {
        return BigRational::one();
    }
    let p = x.pow(k.unsigned_abs() as u32 as i32);
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

// ---------------------------------------------------------------------------
// Ordinary integer polynomial helpers (ascending coefficients, last nonzero)
// ---------------------------------------------------------------------------

fn ptrim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn pdeg(v: &[BigInt]) -> usize {
    debug_assert!(!v.is_empty());
    v.len() - 1
}

fn pmul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    ptrim(out)
}

fn pscale(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

fn content(a: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in a {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn pdiv_exact_int(a: &[BigInt], c: &BigInt) -> Vec<BigInt> {
    a.iter()
        .map(|x| {
            let (q, r) = x.div_rem(c);
            debug_assert!(r.is_zero());
            q
        })
        .collect()
}

/// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a = q*b + r`.
fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = pdeg(b);
    let lb = b.last().unwrap().clone();
    let mut r: Vec<BigInt> = a.to_vec();
    // Each reduction step consumes one factor of lc(b); degree jumps from
    // cancellation must still be compensated to get the exact premultiplier.
    let mut remaining = pdeg(a) as i64 - db as i64 + 1;
    while !r.is_empty() && pdeg(&r) >= db {
        let dr = pdeg(&r);
        let lr = r.last().unwrap().clone();
        // r <- lb*r - lr * x^(dr-db) * b
        r = pscale(&r, &lb);
        for (j, c) in b.iter().enumerate() {
            r[dr - db + j] -= &lr * c;
        }
        r = ptrim(r);
        remaining -= 1;
    }
    for _ in 0..remaining {
        r = pscale(&r, &lb);
    }
    r
}

/// Exact polynomial quotient; panics if the division is not exact.
fn pdiv_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    assert!(!b.is_empty(), "division by zero polynomial");
    if a.is_empty() {
        return Vec::new();
    }
    let da = pdeg(a);
    let db = pdeg(b);
    assert!(da >= db, "inexact polynomial division");
    let lb = b.last().unwrap();
    let mut rem: Vec<BigInt> = a.to_vec();
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let idx = k + db;
        if rem.len() <= idx {
            continue;
        }
        let c = rem[idx].clone();
        if c.is_zero() {
            continue;
        }
        let (q, r) = c.div_rem(lb);
        assert!(r.is_zero(), "inexact polynomial division");
        quot[k] = q.clone();
        for (j, bc) in b.iter().enumerate() {
            rem[k + j] -= &q * bc;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    ptrim(quot)
}

/// GCD over `Z[s]` via the subresultant polynomial remainder sequence.
///
/// Fraction-free: coefficient growth is controlled by exact divisions by the
/// previous pivots instead of rational arithmetic. Result has positive
/// leading coefficient.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() {
        return sign_normalize(b.to_vec());
    }
    if b.is_empty() {
        return sign_normalize(a.to_vec());
    }
    let ca = content(a);
    let cb = content(b);
    let cg = ca.gcd(&cb);
    let mut p = pdiv_exact_int(a, &ca);
    let mut q = pdiv_exact_int(b, &cb);
    if pdeg(&p) < pdeg(&q) {
        std::mem::swap(&mut p, &mut q);
    }
    let mut g = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let d = pdeg(&p) - pdeg(&q);
        let r = pseudo_rem(&p, &q);
        if r.is_empty() {
            break;
        }
        if pdeg(&r) == 0 {
            q = vec![BigInt::one()];
            break;
        }
        p = q;
        let mut divisor = g.clone();
        for _ in 0..d {
            divisor *= &h;
        }
        q = pdiv_exact_int(&r, &divisor);
        g = p.last().unwrap().clone();
        h = if d == 0 {
            h
        } else {
            // h <- g^d / h^(d-1), exact in Z
            let mut num = BigInt::one();
            for _ in 0..d {
                num *= &g;
            }
            let mut den = BigInt::one();
            for _ in 0..d - 1 {
                den *= &h;
            }
            let (hq, hr) = num.div_rem(&den);
            debug_assert!(hr.is_zero());
            hq
        };
    }
    let cq = content(&q);
    let prim = pdiv_exact_int(&q, &cq);
    sign_normalize(pscale(&prim, &cg))
}

fn sign_normalize(v: Vec<BigInt>) -> Vec<BigInt> {
    match v.last().map(|c| c.sign()) {
        Some(Sign::Minus) => v.into_iter().map(|c| -c).collect(),
        _ => v,
    }
}

// ---------------------------------------------------------------------------
// Scalar
// ---------------------------------------------------------------------------

/// An element of `Q(s)` in canonical form. See the module docs for the
/// normalization; two scalars are equal as field elements iff their
/// representations are identical.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: LaurentPoly,
    den: Vec<BigInt>,
}

impl Scalar {
    fn normalized(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar { num: LaurentPoly::zero(), den: vec![BigInt::one()] });
        }
        // Absorb the denominator's Laurent shift into the numerator.
        let mut num = num;
        num.lo -= den.lo;
        let mut den_coeffs = den.coeffs;
        // Polynomial gcd (both coefficient lists have nonzero constant term).
        let g = poly_gcd(&num.coeffs, &den_coeffs);
        if pdeg(&g) > 0 || !g[0].is_one() {
            num.coeffs = pdiv_exact(&num.coeffs, &g);
            den_coeffs = pdiv_exact(&den_coeffs, &g);
        }
        // Integer content.
        let c = content(&num.coeffs).gcd(&content(&den_coeffs));
        if !c.is_one() {
            num.coeffs = pdiv_exact_int(&num.coeffs, &c);
            den_coeffs = pdiv_exact_int(&den_coeffs, &c);
        }
        // Positive leading denominator coefficient.
        if den_coeffs.last().unwrap().sign() == Sign::Minus {
            num.coeffs = num.coeffs.iter().map(|c| -c).collect();
            den_coeffs = den_coeffs.iter().map(|c| -c).collect();
        }
        // The gcd division cannot introduce boundary zeros, but keep the
        // numerator invariant airtight.
        let num = LaurentPoly::trim(num.lo, num.coeffs);
        Ok(Scalar { num, den: den_coeffs })
    }

    /// `num / den` as a field element.
    pub fn from_fraction(num: LaurentPoly, den: LaurentPoly) -> Result<Self, ScalarError> {
        Self::normalized(num, den)
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self::normalized(p, LaurentPoly::one()).unwrap()
    }

    pub fn zero() -> Self {
        Scalar { num: LaurentPoly::zero(), den: vec![BigInt::one()] }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(LaurentPoly::monomial(BigInt::from(n), 0))
    }

    /// `a / b` for integers, `b != 0`.
    pub fn rational(a: i64, b: i64) -> Self {
        assert!(b != 0, "zero denominator");
        Self::normalized(
            LaurentPoly::monomial(BigInt::from(a), 0),
            LaurentPoly::monomial(BigInt::from(b), 0),
        )
        .unwrap()
    }

    /// `s^k = q^(k/2)`.
    pub fn s_pow(k: i64) -> Self {
        Self::from_poly(LaurentPoly::monomial(BigInt::one(), k))
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::s_pow(2 * k)
    }

    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q - q^(-1)`.
    pub fn q_minus_qinv() -> Self {
        Self::q_pow(1) - Self::q_pow(-1)
    }

    /// The q-integer `(q^k - q^(-k)) / (q - q^(-1))`.
    pub fn q_int(k: i64) -> Self {
        if k == 0 {
            return Self::zero();
        }
        ((Self::q_pow(k) - Self::q_pow(-k)) / Self::q_minus_qinv()).unwrap()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &Self::one()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator_coeffs(&self) -> &[BigInt] {
        &self.den
    }

    /// Multiplicative inverse; error on zero.
    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let den = LaurentPoly { lo: 0, coeffs: self.den.clone() };
        let num = self.num.clone();
        Self::normalized(den, num)
    }

    /// q-conjugation: substitute `s -> 1/s` (hence `q -> 1/q`) and
    /// re-canonicalize. An involutive field automorphism.
    pub fn qconj(&self) -> Scalar {
        if self.is_zero() {
            return Self::zero();
        }
        let num = self.num.reverse();
        let den = LaurentPoly { lo: 0, coeffs: self.den.clone() }.reverse();
        Self::normalized(num, den).unwrap()
    }

    /// Exact value at `s = s0`, `s0` a nonzero rational.
    pub fn eval(&self, s0: &BigRational) -> Result<BigRational, ScalarError> {
        if s0.is_zero() {
            return Err(ScalarError::Domain("s = 0".into()));
        }
        let den = LaurentPoly { lo: 0, coeffs: self.den.clone() };
        let dv = den.eval(s0);
        if dv.is_zero() {
            return Err(ScalarError::Pole(s0.to_string()));
        }
        Ok(self.num.eval(s0) / dv)
    }

    /// The specialization `q = 1` (i.e. `s = 1`); errors when the canonical
    /// form has a pole there.
    pub fn classical_limit(&self) -> Result<BigRational, ScalarError> {
        self.eval(&BigRational::one()).map_err(|e| match e {
            ScalarError::Pole(_) => ScalarError::NotClassical,
            other => other,
        })
    }

    /// Number of terms in the canonical numerator (a size proxy for caps).
    pub fn num_terms(&self) -> usize {
        self.num.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

// Operator impls: owned and borrowed forms used throughout the crate.

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let lden = LaurentPoly { lo: 0, coeffs: self.den.clone() };
        let rden = LaurentPoly { lo: 0, coeffs: rhs.den.clone() };
        let num = self.num.mul(&rden).add(&rhs.num.mul(&lden));
        Scalar::normalized(num, lden.mul(&rden)).unwrap()
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let num = self.num.mul(&rhs.num);
        let den = LaurentPoly { lo: 0, coeffs: pmul(&self.den, &rhs.den) };
        Scalar::normalized(num, den).unwrap()
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl $trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl AddAssign for Scalar {
    fn add_assign(&mut self, rhs: Scalar) {
        *self = &*self + &rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

/// Checked division: `Err` when `rhs` is zero.
impl Div for &Scalar {
    type Output = Result<Scalar, ScalarError>;
    fn div(self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self * rhs.inv()?)
    }
}

impl Div for Scalar {
    type Output = Result<Scalar, ScalarError>;
    fn div(self, rhs: Scalar) -> Result<Scalar, ScalarError> {
        &self / &rhs
    }
}

// ---------------------------------------------------------------------------
// Printing and parsing: the q-exponent grammar shared by all file outputs
// ---------------------------------------------------------------------------

fn fmt_poly(p: &LaurentPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    // Strictly descending q-exponent order.
    for (k, c) in p.coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let negative = c.sign() == Sign::Minus;
        let mag = c.abs();
        if first {
            if negative {
                write!(f, "-")?;
            }
            first = false;
        } else if negative {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let halves = p.lo + k as i64;
        if halves == 0 {
            write!(f, "{mag}")?;
        } else {
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            if halves % 2 == 0 {
                write!(f, "q^({})", halves / 2)?;
            } else {
                write!(f, "q^({halves}/2)")?;
            }
        }
    }
    Ok(())
}

fn poly_term_count(p: &LaurentPoly) -> usize {
    p.coeffs.iter().filter(|c| !c.is_zero()).count()
}

impl fmt::Display for Scalar {
    /// Renders in the serialization grammar: `+`/`-` separated terms
    /// `c*q^(e)` with half-integer exponents `k` or `k/2` in strictly
    /// descending order; multi-term polynomials are parenthesized and an
    /// omitted denominator means 1. Example: `(q^(2) - q^(-2))`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let den_one = self.den.len() == 1 && self.den[0].is_one();
        let num_multi = poly_term_count(&self.num) > 1;
        if num_multi {
            write!(f, "(")?;
        }
        fmt_poly(&self.num, f)?;
        if num_multi {
            write!(f, ")")?;
        }
        if !den_one {
            let den = LaurentPoly { lo: 0, coeffs: self.den.clone() };
            write!(f, "/")?;
            let den_multi = poly_term_count(&den) > 1;
            if den_multi {
                write!(f, "(")?;
            }
            fmt_poly(&den, f)?;
            if den_multi {
                write!(f, ")")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { bytes: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn expect(&mut self, c: u8) -> Result<(), ScalarError> {
        match self.bump() {
            Some(x) if x == c => Ok(()),
            other => Err(ScalarError::Parse(format!(
                "expected '{}', found {:?}",
                c as char,
                other.map(|b| b as char)
            ))),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ScalarError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') || self.bytes.get(self.pos) == Some(&b'+') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(ScalarError::Parse("expected integer".into()));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<BigInt>().map_err(|e| ScalarError::Parse(e.to_string()))
    }

    /// Exponent inside `q^(...)`, in half-units of q.
    fn exponent_halves(&mut self) -> Result<i64, ScalarError> {
        self.expect(b'(')?;
        let n = self.integer()?;
        let halves = if self.peek() == Some(b'/') {
            self.bump();
            let d = self.integer()?;
            if d != BigInt::from(2) {
                return Err(ScalarError::Parse("exponent denominator must be 2".into()));
            }
            n
        } else {
            n * 2
        };
        self.expect(b')')?;
        i64::try_from(halves).map_err(|_| ScalarError::Parse("exponent out of range".into()))
    }

    /// One term: `c`, `c*q^(e)`, `q^(e)`, or bare `q`, with optional sign.
    fn term(&mut self) -> Result<LaurentPoly, ScalarError> {
        let mut negative = false;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.bump();
                }
                b'-' => {
                    negative = !negative;
                    self.bump();
                }
                _ => break,
            }
        }
        let mut coeff = BigInt::one();
        let mut have_coeff = false;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            coeff = self.integer()?;
            have_coeff = true;
            if self.peek() == Some(b'*') {
                self.bump();
            }
        }
        if negative {
            coeff = -coeff;
        }
        match self.peek() {
            Some(b'q') => {
                self.bump();
                let halves = if self.peek() == Some(b'^') {
                    self.bump();
                    self.exponent_halves()?
                } else {
                    2
                };
                Ok(LaurentPoly::monomial(coeff, halves))
            }
            _ if have_coeff => Ok(LaurentPoly::monomial(coeff, 0)),
            other => Err(ScalarError::Parse(format!("unexpected {:?}", other.map(|b| b as char)))),
        }
    }

    fn poly_body(&mut self) -> Result<LaurentPoly, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.bump();
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn poly(&mut self) -> Result<LaurentPoly, ScalarError> {
        if self.peek() == Some(b'(') {
            self.bump();
            let p = self.poly_body()?;
            self.expect(b')')?;
            Ok(p)
        } else {
            self.poly_body()
        }
    }
}

impl std::str::FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let num = p.poly()?;
        let den = if p.peek() == Some(b'/') {
            p.bump();
            p.poly()?
        } else {
            LaurentPoly::one()
        };
        if p.peek().is_some() {
            return Err(ScalarError::Parse(format!("trailing input at byte {}", p.pos)));
        }
        Scalar::normalized(num, den)
    }
}

/// Total order on canonical forms; used only to make reports deterministic.
impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num.lo, &self.num.coeffs, &self.den).cmp(&(
            other.num.lo,
            &other.num.coeffs,
            &other.den,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Scalar {
        Scalar::q()
    }

    fn qi(k: i64) -> Scalar {
        Scalar::q_pow(k)
    }

    #[test]
    fn add_q_and_qinv() {
        // q + q^(-1) = (s^4 + 1)/s^2; canonically the s^(-2) shift sits in
        // the numerator.
        let sum = q() + qi(-1);
        let expect = Scalar::from_fraction(
            LaurentPoly::from_terms(&[(1, 4), (1, 0)]),
            LaurentPoly::monomial(BigInt::from(1), 2),
        )
        .unwrap();
        assert_eq!(sum, expect);
        assert_eq!(expect.numerator(), &LaurentPoly::from_terms(&[(1, 2), (1, -2)]));
        assert_eq!(sum.to_string(), "(q^(1) + q^(-1))");
    }

    #[test]
    fn mul_by_zero_absorbs() {
        let a = Scalar::q_minus_qinv();
        assert!((a * Scalar::zero()).is_zero());
    }

    #[test]
    fn inv_of_q_minus_qinv() {
        // (q - q^(-1))^(-1) = s^2/(s^4 - 1)
        let inv = Scalar::q_minus_qinv().inv().unwrap();
        let expect = Scalar::from_fraction(
            LaurentPoly::monomial(BigInt::from(1), 2),
            LaurentPoly::from_terms(&[(1, 4), (-1, 0)]),
        )
        .unwrap();
        assert_eq!(inv, expect);
    }

    #[test]
    fn inv_zero_is_error() {
        assert_eq!(Scalar::zero().inv(), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn qconj_odd_even() {
        let odd = Scalar::q_minus_qinv();
        assert_eq!(odd.qconj(), -&odd);
        let even = q() + qi(-1);
        assert_eq!(even.qconj(), even);
    }

    #[test]
    fn eval_cancels_before_substitution() {
        // (q^2 - 1)/(q - 1) reduces to q + 1, value 5 at s = 2 (q = 4).
        let f = ((qi(2) - Scalar::one()) / (q() - Scalar::one())).unwrap();
        let two = BigRational::from(BigInt::from(2));
        assert_eq!(f.eval(&two).unwrap(), BigRational::from(BigInt::from(5)));
    }

    #[test]
    fn eval_qinv() {
        let two = BigRational::from(BigInt::from(2));
        let v = qi(-1).eval(&two).unwrap();
        assert_eq!(v, BigRational::new(BigInt::from(1), BigInt::from(4)));
    }

    #[test]
    fn eval_pole_detected() {
        let f = (Scalar::one() / (q() - Scalar::one())).unwrap();
        assert!(matches!(f.eval(&BigRational::one()), Err(ScalarError::Pole(_))));
        assert!(matches!(f.eval(&BigRational::zero()), Err(ScalarError::Domain(_))));
    }

    #[test]
    fn classical_limit_of_q_integers() {
        for k in 1..=5 {
            assert_eq!(
                Scalar::q_int(k).classical_limit().unwrap(),
                BigRational::from(BigInt::from(k))
            );
        }
    }

    #[test]
    fn classical_limit_of_off_diagonal_coefficient() {
        // (1/2) q^(-j+1/2) (1 + q^n) -> 1 at q = 1, for any j, n.
        for j in 1..4i64 {
            for n in 2..5i64 {
                let v = Scalar::rational(1, 2)
                    * Scalar::s_pow(-2 * j + 1)
                    * (Scalar::one() + Scalar::q_pow(n));
                assert_eq!(v.classical_limit().unwrap(), BigRational::one());
            }
        }
    }

    #[test]
    fn classical_limit_antisymmetric() {
        let v = qi(2) - qi(-2);
        assert_eq!(v.classical_limit().unwrap(), BigRational::zero());
    }

    #[test]
    fn classical_limit_pole_is_error() {
        let f = (Scalar::one() / (q() - Scalar::one())).unwrap();
        assert_eq!(f.classical_limit(), Err(ScalarError::NotClassical));
    }

    #[test]
    fn display_examples() {
        assert_eq!(Scalar::zero().to_string(), "0");
        assert_eq!(Scalar::from_int(-3).to_string(), "-3");
        assert_eq!((qi(2) - qi(-2)).to_string(), "(q^(2) - q^(-2))");
        assert_eq!(Scalar::s_pow(1).to_string(), "q^(1/2)");
        assert_eq!(
            (Scalar::from_int(2) * Scalar::s_pow(-3)).to_string(),
            "2*q^(-3/2)"
        );
        let f = (q() / (qi(2) - Scalar::one())).unwrap();
        assert_eq!(f.to_string(), "q^(1)/(q^(2) - 1)");
    }

    #[test]
    fn parse_display_examples() {
        for text in ["0", "-3", "(q^(2) - q^(-2))", "q^(1/2)", "2*q^(-3/2)", "q^(1)/(q^(2) - 1)"] {
            let v: Scalar = text.parse().unwrap();
            assert_eq!(v.to_string(), text);
        }
        // Unparenthesized and bare-q inputs are accepted too.
        let a: Scalar = "q^(2) - q^(-2)".parse().unwrap();
        assert_eq!(a, qi(2) - qi(-2));
        let b: Scalar = "q".parse().unwrap();
        assert_eq!(b, q());
    }

    // Random scalars: numerators and denominators with small support.
    fn arb_poly(max_terms: usize) -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-6i64..=6, -5i64..=5), 0..max_terms)
            .prop_map(|terms| LaurentPoly::from_terms(&terms))
    }

    prop_compose! {
        fn arb_scalar()(num in arb_poly(4), den in arb_poly(3)) -> Scalar {
            let den = if den.is_zero() { LaurentPoly::one() } else { den };
            Scalar::from_fraction(num, den).unwrap()
        }
    }

    prop_compose! {
        fn arb_nonzero()(a in arb_scalar()) -> Scalar {
            if a.is_zero() { Scalar::one() } else { a }
        }
    }

    proptest! {
        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &Scalar::zero(), a.clone());
            prop_assert_eq!(&a * &Scalar::one(), a.clone());
            prop_assert_eq!(&a + &(-&a), Scalar::zero());
        }

        #[test]
        fn multiplicative_inverse(a in arb_nonzero()) {
            prop_assert_eq!(&a * &a.inv().unwrap(), Scalar::one());
        }

        #[test]
        fn qconj_is_field_automorphism(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!((&a * &b).qconj(), &a.qconj() * &b.qconj());
            prop_assert_eq!((&a + &b).qconj(), &a.qconj() + &b.qconj());
            prop_assert_eq!(a.qconj().qconj(), a);
        }

        #[test]
        fn canonical_equality_decides_zero(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!((&a - &b).is_zero(), a == b);
        }

        #[test]
        fn eval_is_ring_homomorphism(a in arb_scalar(), b in arb_scalar()) {
            let s0 = BigRational::new(BigInt::from(3), BigInt::from(2));
            let (ea, eb) = (a.eval(&s0), b.eval(&s0));
            if let (Ok(ea), Ok(eb)) = (ea, eb) {
                if let Ok(es) = (&a + &b).eval(&s0) {
                    prop_assert_eq!(es, &ea + &eb);
                }
                if let Ok(ep) = (&a * &b).eval(&s0) {
                    prop_assert_eq!(ep, &ea * &eb);
                }
            }
        }

        #[test]
        fn print_parse_round_trip(a in arb_scalar()) {
            let text = a.to_string();
            let back: Scalar = text.parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}
