//! Exact coefficient arithmetic.
//!
//! Every algorithm in the crate is generic over [`Scalar`]. Two backends
//! implement it: [`BigRational`] for computations at a fixed rational value
//! of `q`, and [`RatFunc`] for computations over the field `Q(q)`.

mod parse;
pub mod poly;
mod ratfunc;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use parse::parse_scalar;
pub use ratfunc::RatFunc;

use crate::error::{Error, Result};

/// Coefficient field used throughout the engine.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Backend name as it appears in reports.
    const BACKEND: &'static str;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn try_inv(&self) -> Result<Self>;
    fn from_rational(r: BigRational) -> Self;

    fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// The value this backend uses for `q` under `config`.
    fn q_from_config(config: &QConfig) -> Result<Self>;

    /// Maps a symbolic value into this backend at the configured `q`.
    fn specialize(s: &RatFunc, config: &QConfig) -> Result<Self>;

    /// The value as a rational number, if it is one.
    fn as_rational(&self) -> Option<BigRational>;
}

impl Scalar for BigRational {
    const BACKEND: &'static str = "fixed";

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.recip())
        }
    }

    fn from_rational(r: BigRational) -> Self {
        r
    }

    fn q_from_config(config: &QConfig) -> Result<Self> {
        match config {
            QConfig::Fixed(q) => Ok(q.clone()),
            QConfig::Symbolic => Err(Error::Config(
                "symbolic q requested with the fixed-q backend".into(),
            )),
        }
    }

    fn specialize(s: &RatFunc, config: &QConfig) -> Result<Self> {
        s.eval_at(&Self::q_from_config(config)?)
    }

    fn as_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }
}

impl Scalar for RatFunc {
    const BACKEND: &'static str = "symbolic";

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn try_inv(&self) -> Result<Self> {
        RatFunc::try_inv(self)
    }

    fn from_rational(r: BigRational) -> Self {
        RatFunc::from_rational(r)
    }

    fn q_from_config(config: &QConfig) -> Result<Self> {
        match config {
            QConfig::Symbolic => Ok(RatFunc::q()),
            QConfig::Fixed(q) => Err(Error::Config(format!(
                "fixed q = {q} requested with the symbolic backend"
            ))),
        }
    }

    fn specialize(s: &RatFunc, config: &QConfig) -> Result<Self> {
        Self::q_from_config(config)?;
        Ok(s.clone())
    }

    fn as_rational(&self) -> Option<BigRational> {
        if self.shift() == 0 && self.denominator().is_one() && self.numerator().degree().unwrap_or(0) == 0 {
            Some(self.numerator().coeffs().first().cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }
}

/// How `q` is treated: a fixed rational sample or the indeterminate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QConfig {
    Fixed(BigRational),
    Symbolic,
}

impl QConfig {
    /// Fixed rational `q`, rejecting `0` and `±1`.
    pub fn fixed(q: BigRational) -> Result<Self> {
        if q.is_zero() || q.abs().is_one() {
            return Err(Error::Config(format!("q = {q} is not admissible")));
        }
        Ok(QConfig::Fixed(q))
    }

    /// `q = 1`, reserved for involutive symmetries such as the plain flip.
    pub fn classical() -> Self {
        QConfig::Fixed(BigRational::one())
    }

    /// Accepts `"symbolic"`, `"1"` (classical) or a rational literal such as `"3/5"`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if t.eq_ignore_ascii_case("symbolic") {
            return Ok(QConfig::Symbolic);
        }
        let q = parse_rational(t)?;
        if q.is_one() {
            return Ok(QConfig::classical());
        }
        QConfig::fixed(q)
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, QConfig::Symbolic)
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, QConfig::Fixed(q) if q.is_one())
    }

    pub fn label(&self) -> String {
        match self {
            QConfig::Fixed(q) => q.to_string(),
            QConfig::Symbolic => "symbolic".into(),
        }
    }
}

/// Parses `"a/b"` or `"a"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Config(format!("'{text}' is not a rational number"));
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

/// A backend together with its value of `q`; source of `q`-powers and `q`-numbers.
#[derive(Clone, Debug)]
pub struct QContext<S> {
    config: QConfig,
    q: S,
    q_inv: S,
}

impl<S: Scalar> QContext<S> {
    pub fn new(config: QConfig) -> Result<Self> {
        let q = S::q_from_config(&config)?;
        let q_inv = q.try_inv()?;
        Ok(QContext { config, q, q_inv })
    }

    pub fn config(&self) -> &QConfig {
        &self.config
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn q_inv(&self) -> &S {
        &self.q_inv
    }

    pub fn qpow(&self, n: i64) -> S {
        let base = if n < 0 { &self.q_inv } else { &self.q };
        let mut acc = S::one();
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul_ref(base);
        }
        acc
    }

    /// `k_q = q^{k-1} + q^{k-3} + ... + q^{1-k}`, zero for `k = 0`.
    pub fn qnum(&self, k: usize) -> S {
        let k = k as i64;
        (0..k).fold(S::zero(), |acc, j| acc.add_ref(&self.qpow(k - 1 - 2 * j)))
    }

    /// Converts a symbolic value into this backend.
    pub fn lift(&self, s: &RatFunc) -> Result<S> {
        S::specialize(s, &self.config)
    }
}
