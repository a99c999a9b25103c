//! Exact arithmetic in the quadratic field generated by the LS scaling ratio.
//!
//! For a pair `(L, S)` the ratio `γ` is the positive root of `Sγ² + Lγ − 1 = 0`,
//! i.e. `γ = (−L + √(L² + 4S)) / 2S`. Every interval endpoint of an LS-partition
//! and every LS-point is an element `p + qγ` of `Q(γ)` with rational `p, q`, so
//! they can be stored and ordered without rounding.
//!
//! Two carriers live here:
//!
//! * [`QuadNum`] is `p + qγ` tied to one [`LsParams`]; multiplication reduces
//!   `γ² = (1 − Lγ)/S` so only the `γ¹` coefficient survives.
//! * [`SqrtNum`] is `a + b√d` with squarefree `d`. It is the canonical form used
//!   to compare numbers coming from *different* parameter pairs, which is what
//!   resonance detection needs.
//!
//! When `L² + 4S` is a perfect square (e.g. `(1, 2)` where `γ = 1/2`) the field
//! degenerates to `Q`; values are then kept with `q = 0` so that equality stays
//! componentwise.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest accepted value for either `L` or `S`.
pub const MAX_PARAM: u32 = 1 << 20;

/// Bits of the fixed-point `√d` approximation used for float projections.
const SHADOW_BITS: usize = 192;

/// A validated `(L, S)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LsParams {
    long: u32,
    short: u32,
    #[serde(skip)]
    root_factor: u64,
    #[serde(skip)]
    radicand: u64,
}

impl LsParams {
    /// Builds the pair, rejecting zero counts.
    pub fn new(long: u32, short: u32) -> Result<Self> {
        if long == 0 || short == 0 {
            return Err(Error::InvalidParams(format!(
                "L and S must both be at least 1 (got L={long}, S={short})"
            )));
        }
        if long > MAX_PARAM || short > MAX_PARAM {
            return Err(Error::InvalidParams(format!(
                "L and S must not exceed {MAX_PARAM} (got L={long}, S={short})"
            )));
        }
        let l = u64::from(long);
        let (root_factor, radicand) = squarefree_decomposition(l * l + 4 * u64::from(short));
        Ok(Self {
            long,
            short,
            root_factor,
            radicand,
        })
    }

    /// Number of long intervals in the splitting pattern (`L`).
    pub fn long(&self) -> u32 {
        self.long
    }

    /// Number of short intervals in the splitting pattern (`S`).
    pub fn short(&self) -> u32 {
        self.short
    }

    /// Digit base `L + S`.
    pub fn base(&self) -> u64 {
        u64::from(self.long) + u64::from(self.short)
    }

    /// `L² + 4S`.
    pub fn discriminant(&self) -> u64 {
        let l = u64::from(self.long);
        l * l + 4 * u64::from(self.short)
    }

    /// Writes the discriminant as `k²·d` with `d` squarefree; returns `(k, d)`.
    pub fn sqrt_decomposition(&self) -> (u64, u64) {
        (self.root_factor, self.radicand)
    }

    /// Squarefree part of the discriminant: `Q(γ) = Q(√d)`.
    pub fn field_radicand(&self) -> u64 {
        self.radicand
    }

    /// True when `γ` is rational (perfect-square discriminant).
    pub fn is_rational(&self) -> bool {
        self.field_radicand() == 1
    }

    /// `γ` as an exact field element.
    pub fn gamma(&self) -> QuadNum {
        QuadNum::new(*self, BigRational::zero(), BigRational::one())
    }

    /// Nearest-double projection of `γ`.
    pub fn gamma_f64(&self) -> f64 {
        self.gamma().to_f64()
    }

    pub fn zero(&self) -> QuadNum {
        QuadNum::from_rational(*self, BigRational::zero())
    }

    pub fn one(&self) -> QuadNum {
        QuadNum::from_rational(*self, BigRational::one())
    }

    /// Exponent `1 − τ = −log(Sγ)/log γ` governing the discrepancy growth
    /// when `S ≥ L + 2`. Negative or zero in the other regimes.
    pub fn growth_exponent(&self) -> f64 {
        let g = self.gamma_f64();
        -(f64::from(self.short) * g).ln() / g.ln()
    }

    /// Classifies the pair by the relation between `S` and `L`.
    pub fn regime(&self) -> Regime {
        if self.short <= self.long {
            Regime::Low
        } else if self.short == self.long + 1 {
            Regime::Logarithmic
        } else {
            Regime::Polynomial
        }
    }
}

impl fmt::Display for LsParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.long, self.short)
    }
}

/// Discrepancy growth regime of an `(L, S)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `S ≤ L`: bounded `t_n·D`.
    Low,
    /// `S = L + 1`: `t_n·D` of order `log t_n`.
    Logarithmic,
    /// `S ≥ L + 2`: `t_n·D` of order `t_n^(1−τ)`.
    Polynomial,
}

/// Returns `(k, d)` with `n = k²·d` and `d` squarefree. `n` must be positive.
pub fn squarefree_decomposition(n: u64) -> (u64, u64) {
    assert!(n > 0, "squarefree decomposition of zero");
    let mut rest = n;
    let mut k = 1u64;
    let mut d = 1u64;
    let mut f = 2u64;
    while f * f <= rest {
        let mut e = 0;
        while rest.is_multiple_of(f) {
            rest /= f;
            e += 1;
        }
        for _ in 0..e / 2 {
            k *= f;
        }
        if e % 2 == 1 {
            d *= f;
        }
        f += if f == 2 { 1 } else { 2 };
    }
    (k, d * rest)
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_u(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact sign of `a + b√d` for squarefree (or any non-negative) `d`.
fn surd_signum(a: &BigRational, b: &BigRational, d: u64) -> Ordering {
    let sa = a.cmp(&BigRational::zero());
    let sb = b.cmp(&BigRational::zero());
    if d == 0 || sb == Ordering::Equal {
        return sa;
    }
    if sa == Ordering::Equal || sa == sb {
        return sb;
    }
    // Opposite signs: compare a² with b²·d.
    let lhs = a * a;
    let rhs = b * b * rat_u(d);
    match lhs.cmp(&rhs) {
        Ordering::Greater => sa,
        Ordering::Less => sb,
        Ordering::Equal => Ordering::Equal,
    }
}

/// `floor(√d · 2^SHADOW_BITS)`, cached per radicand.
fn sqrt_fixed(d: u64) -> BigInt {
    thread_local! {
        static CACHE: RefCell<HashMap<u64, BigInt>> = RefCell::new(HashMap::new());
    }
    CACHE.with(|c| {
        c.borrow_mut()
            .entry(d)
            .or_insert_with(|| (BigInt::from(d) << (2 * SHADOW_BITS)).sqrt())
            .clone()
    })
}

/// Float value of `(a + b√d)/den`.
fn surd_to_f64(a: &BigInt, b: &BigInt, den: &BigInt, d: u64) -> f64 {
    if b.is_zero() {
        return BigRational::new_raw(a.clone(), den.clone()).to_f64().unwrap_or(f64::NAN);
    }
    let numer = (a << SHADOW_BITS) + b * sqrt_fixed(d);
    BigRational::new_raw(numer, den << SHADOW_BITS)
        .to_f64()
        .unwrap_or(f64::NAN)
}

/// Element `p + qγ` of `Q(γ)` for a fixed [`LsParams`].
///
/// Arithmetic operators panic when the operands belong to different params.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadNum {
    p: BigRational,
    q: BigRational,
    params: LsParams,
}

impl QuadNum {
    /// Builds `p + qγ`, folding `q` into `p` when `γ` is rational.
    pub fn new(params: LsParams, p: BigRational, q: BigRational) -> Self {
        let mut x = Self { p, q, params };
        x.normalize();
        x
    }

    pub fn from_rational(params: LsParams, p: BigRational) -> Self {
        Self {
            p,
            q: BigRational::zero(),
            params,
        }
    }

    pub fn from_integer(params: LsParams, n: i64) -> Self {
        Self::from_rational(params, rat(n))
    }

    fn normalize(&mut self) {
        if self.q.is_zero() {
            return;
        }
        let (k, d) = self.params.sqrt_decomposition();
        if d == 1 {
            // γ = (k − L) / 2S
            let g = BigRational::new(
                BigInt::from(k) - BigInt::from(self.params.long),
                BigInt::from(2 * u64::from(self.params.short)),
            );
            let q = std::mem::take(&mut self.q);
            self.p += q * g;
        }
    }

    /// Rational part.
    pub fn p(&self) -> &BigRational {
        &self.p
    }

    /// Coefficient of `γ`.
    pub fn q(&self) -> &BigRational {
        &self.q
    }

    pub fn params(&self) -> LsParams {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    fn check_same(&self, other: &Self) {
        assert_eq!(
            self.params, other.params,
            "QuadNum operands belong to different fields"
        );
    }

    /// `self^exp` by repeated squaring.
    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = self.params.one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by a rational scalar.
    pub fn scale(&self, k: &BigRational) -> Self {
        Self {
            p: &self.p * k,
            q: &self.q * k,
            params: self.params,
        }
    }

    /// Sign of the represented real number.
    pub fn signum(&self) -> Ordering {
        let s = self.to_sqrt_form();
        surd_signum(&s.a, &s.b, s.d)
    }

    /// Exact comparison of two elements of the same field.
    pub fn compare(&self, other: &Self) -> Ordering {
        self.check_same(other);
        if self.p == other.p && self.q == other.q {
            return Ordering::Equal;
        }
        (self - other).signum()
    }

    /// Integer form `(A + B√d)/den` of this number, for fast exact sorting.
    pub fn surd_key(&self) -> SurdKey {
        // p + qγ = (2S·p − L·q + k·q·√d) / 2S
        let (k, d) = self.params.sqrt_decomposition();
        let (pn, pd) = (self.p.numer(), self.p.denom());
        let (qn, qd) = (self.q.numer(), self.q.denom());
        let two_s = BigInt::from(2 * u64::from(self.params.short));
        let l = BigInt::from(self.params.long);
        let a = &two_s * pn * qd - l * qn * pd;
        let b = BigInt::from(k) * qn * pd;
        let den = two_s * pd * qd;
        SurdKey::new(a, b, den, d)
    }

    /// Rewrites `p + qγ` as `a + b√d` with `d` the squarefree part of `L² + 4S`.
    pub fn to_sqrt_form(&self) -> SqrtNum {
        let (k, d) = self.params.sqrt_decomposition();
        let two_s = rat_u(2 * u64::from(self.params.short));
        // γ = −L/2S + (k/2S)·√d
        let a = &self.p - &self.q * rat_u(u64::from(self.params.long)) / &two_s;
        let b = &self.q * rat_u(k) / two_s;
        SqrtNum::new(a, b, d)
    }

    /// Float projection, accurate to well below `1e−15` relative to the
    /// magnitude of `p + qγ`'s terms (uses a 192-bit `√d`).
    pub fn to_f64(&self) -> f64 {
        let key = self.surd_key();
        surd_to_f64(&key.a, &key.b, &key.den, key.d)
    }
}

impl Ord for QuadNum {
    fn cmp(&self, other: &Self) -> Ordering {
        self.compare(other)
    }
}

impl PartialOrd for QuadNum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q.is_zero() {
            write!(f, "{}", self.p)
        } else if self.p.is_zero() {
            write!(f, "{}γ", self.q)
        } else if self.q.is_negative() {
            write!(f, "{} - {}γ", self.p, -&self.q)
        } else {
            write!(f, "{} + {}γ", self.p, self.q)
        }
    }
}

impl<'a> Add<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn add(self, rhs: &'a QuadNum) -> QuadNum {
        self.check_same(rhs);
        QuadNum {
            p: &self.p + &rhs.p,
            q: &self.q + &rhs.q,
            params: self.params,
        }
    }
}

impl<'a> Sub<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn sub(self, rhs: &'a QuadNum) -> QuadNum {
        self.check_same(rhs);
        QuadNum {
            p: &self.p - &rhs.p,
            q: &self.q - &rhs.q,
            params: self.params,
        }
    }
}

impl<'a> Mul<&'a QuadNum> for &'a QuadNum {
    type Output = QuadNum;
    fn mul(self, rhs: &'a QuadNum) -> QuadNum {
        self.check_same(rhs);
        // (p1 + q1γ)(p2 + q2γ) with γ² = 1/S − (L/S)γ
        let qq = &self.q * &rhs.q;
        let s = rat_u(u64::from(self.params.short));
        let l = rat_u(u64::from(self.params.long));
        let p = &self.p * &rhs.p + &qq / &s;
        let q = &self.p * &rhs.q + &self.q * &rhs.p - qq * l / s;
        QuadNum::new(self.params, p, q)
    }
}

impl Neg for &QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        QuadNum {
            p: -&self.p,
            q: -&self.q,
            params: self.params,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: QuadNum) -> QuadNum {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a QuadNum> for QuadNum {
            type Output = QuadNum;
            fn $m(self, rhs: &'a QuadNum) -> QuadNum {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadNum {
    type Output = QuadNum;
    fn neg(self) -> QuadNum {
        -&self
    }
}

/// `a + b√d` with `d` squarefree. Canonical: `b = 0` forces `d = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SqrtNum {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl SqrtNum {
    /// Builds `a + b√d`. `d` is reduced to its squarefree part, the square
    /// factor moving into `b`.
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        assert!(d > 0, "SqrtNum radicand must be positive");
        let (k, d) = squarefree_decomposition(d);
        let b = b * rat_u(k);
        let mut x = Self { a, b, d };
        if x.d == 1 {
            x.a = &x.a + &x.b;
            x.b = BigRational::zero();
        }
        if x.b.is_zero() {
            x.d = 1;
        }
        x
    }

    pub fn rational(a: BigRational) -> Self {
        Self::new(a, BigRational::zero(), 1)
    }

    pub fn a(&self) -> &BigRational {
        &self.a
    }

    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn common_radicand(&self, other: &Self) -> u64 {
        match (self.d, other.d) {
            (1, d) | (d, 1) => d,
            (x, y) => {
                assert_eq!(x, y, "SqrtNum operands live in different fields");
                x
            }
        }
    }

    pub fn signum(&self) -> Ordering {
        surd_signum(&self.a, &self.b, self.d)
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::rational(BigRational::one());
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        // a + b√d = (an·bd + bn·ad·√d) / (ad·bd)
        let (an, ad) = (self.a.numer(), self.a.denom());
        let (bn, bd) = (self.b.numer(), self.b.denom());
        surd_to_f64(&(an * bd), &(bn * ad), &(ad * bd), self.d)
    }
}

impl fmt::Display for SqrtNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}√{}", self.a, self.b, self.d)
        }
    }
}

impl<'a> Add<&'a SqrtNum> for &'a SqrtNum {
    type Output = SqrtNum;
    fn add(self, rhs: &'a SqrtNum) -> SqrtNum {
        let d = self.common_radicand(rhs);
        SqrtNum::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }
}

impl<'a> Sub<&'a SqrtNum> for &'a SqrtNum {
    type Output = SqrtNum;
    fn sub(self, rhs: &'a SqrtNum) -> SqrtNum {
        let d = self.common_radicand(rhs);
        SqrtNum::new(&self.a - &rhs.a, &self.b - &rhs.b, d)
    }
}

impl<'a> Mul<&'a SqrtNum> for &'a SqrtNum {
    type Output = SqrtNum;
    fn mul(self, rhs: &'a SqrtNum) -> SqrtNum {
        let d = self.common_radicand(rhs);
        let a = &self.a * &rhs.a + &self.b * &rhs.b * rat_u(d);
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        SqrtNum::new(a, b, d)
    }
}

impl Neg for &SqrtNum {
    type Output = SqrtNum;
    fn neg(self) -> SqrtNum {
        SqrtNum {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }
}

impl PartialOrd for SqrtNum {
    /// Ordering is defined only within one field (or against rationals).
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.d != other.d && self.d != 1 && other.d != 1 {
            return None;
        }
        Some((self - other).signum())
    }
}

/// `(a + b√d)/den` with `den > 0`, all integers. Ordered exactly; keys with
/// different irrational radicands are not comparable.
#[derive(Clone, Debug)]
pub struct SurdKey {
    a: BigInt,
    b: BigInt,
    den: BigInt,
    d: u64,
}

impl SurdKey {
    pub fn new(a: BigInt, b: BigInt, den: BigInt, d: u64) -> Self {
        assert!(den.is_positive(), "SurdKey denominator must be positive");
        let d = if b.is_zero() { 1 } else { d };
        Self { a, b, den, d }
    }

    pub fn rational(r: &BigRational) -> Self {
        Self::new(r.numer().clone(), BigInt::zero(), r.denom().clone(), 1)
    }
}

impl Ord for SurdKey {
    fn cmp(&self, other: &Self) -> Ordering {
        let d = match (self.d, other.d) {
            (1, d) | (d, 1) => d,
            (x, y) => {
                assert_eq!(x, y, "SurdKey operands live in different fields");
                x
            }
        };
        let x = &self.a * &other.den - &other.a * &self.den;
        let y = &self.b * &other.den - &other.b * &self.den;
        let (sx, sy) = (x.sign(), y.sign());
        use num_bigint::Sign::*;
        match (sx, sy) {
            (NoSign, NoSign) => Ordering::Equal,
            (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
            (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
            (Plus, Minus) | (Minus, Plus) => {
                let lhs = &x * &x;
                let rhs = &y * &y * BigInt::from(d);
                match lhs.cmp(&rhs) {
                    Ordering::Greater => if sx == Plus { Ordering::Greater } else { Ordering::Less },
                    Ordering::Less => if sy == Plus { Ordering::Greater } else { Ordering::Less },
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }
}

impl PartialOrd for SurdKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for SurdKey {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for SurdKey {}

/// Lazily extended table of `γ^k`.
#[derive(Clone, Debug)]
pub struct GammaPowers {
    gamma: QuadNum,
    powers: Vec<QuadNum>,
}

impl GammaPowers {
    pub fn new(params: LsParams) -> Self {
        Self {
            gamma: params.gamma(),
            powers: vec![params.one()],
        }
    }

    pub fn get(&mut self, k: u32) -> &QuadNum {
        while self.powers.len() <= k as usize {
            let next = self.powers.last().unwrap() * &self.gamma;
            self.powers.push(next);
        }
        &self.powers[k as usize]
    }
}

/// Parses `"L,S"` into validated params.
pub fn parse_params(s: &str) -> Result<LsParams> {
    let mut parts = s.split(',').map(str::trim);
    let (Some(l), Some(s2), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::InvalidParams(format!("expected `L,S`, got `{s}`")));
    };
    let parse = |t: &str| {
        t.parse::<u32>()
            .map_err(|_| Error::InvalidParams(format!("`{t}` is not a non-negative integer")))
    };
    LsParams::new(parse(l)?, parse(s2)?)
}
