//! The field of rational functions in `q` over the rationals.
//!
//! An element is stored as `q^shift * num(q) / den(q)` where `num` and `den`
//! are ordinary polynomials with nonzero constant terms, `den` is monic and
//! the two are coprime. That form is unique, so structural equality is field
//! equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    shift: i64,
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds `q^shift * num / den` and brings it to canonical form.
    pub fn new(shift: i64, num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(shift, num, den))
    }

    fn normalize(mut shift: i64, num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let lo = num.low_order();
        let mut num = num.shift_down(lo);
        shift += lo as i64;
        let lo = den.low_order();
        let mut den = den.shift_down(lo);
        shift -= lo as i64;
        if den.degree() != Some(0) {
            let g = num.gcd(&den);
            if !g.is_one() {
                num = num.div_rem(&g).0;
                den = den.div_rem(&g).0;
            }
        }
        if let Some(lc) = den.leading().cloned() {
            if !lc.is_one() {
                let inv = lc.recip();
                num = num.scale(&inv);
                den = den.scale(&inv);
            }
        }
        RatFunc { shift, num, den }
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::qpow(1)
    }

    pub fn qpow(n: i64) -> Self {
        RatFunc {
            shift: n,
            num: Poly::one(),
            den: Poly::one(),
        }
    }

    pub fn from_rational(c: BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatFunc {
            shift: 0,
            num: Poly::constant(c),
            den: Poly::one(),
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Laurent polynomial from `(exponent, coefficient)` pairs.
    pub fn laurent(terms: &[(i64, BigRational)]) -> Self {
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::zero();
        };
        let mut num = Poly::zero();
        for (e, c) in terms {
            num = num.add(&Poly::monomial(c.clone(), (e - lo) as usize));
        }
        Self::normalize(lo, num, Poly::one())
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_laurent_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Exponent range `(lowest, highest)` of the numerator Laurent polynomial.
    pub fn numerator_span(&self) -> Option<(i64, i64)> {
        self.num
            .degree()
            .map(|d| (self.shift, self.shift + d as i64))
    }

    pub fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(-self.shift, self.den.clone(), self.num.clone()))
    }

    /// Exact evaluation at a rational point.
    pub fn eval_at(&self, q0: &BigRational) -> Result<BigRational> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        if q0.is_zero() {
            if self.shift < 0 {
                return Err(Error::Pole(q0.to_string()));
            }
            return Ok(if self.shift == 0 {
                &self.num.coeffs()[0] / &self.den.coeffs()[0]
            } else {
                BigRational::zero()
            });
        }
        let d = self.den.eval(q0);
        if d.is_zero() {
            return Err(Error::Pole(q0.to_string()));
        }
        Ok(pow(q0, self.shift) * self.num.eval(q0) / d)
    }

    /// Substitutes `q -> 1/q`.
    pub fn bar(&self) -> Self {
        // q^s n(q)/d(q) at 1/q = q^{-s} q^{dd - dn} rev(n)/rev(d)
        let rev = |p: &Poly| Poly::from_coeffs(p.coeffs().iter().rev().cloned().collect());
        let dn = self.num.degree().unwrap_or(0) as i64;
        let dd = self.den.degree().unwrap_or(0) as i64;
        Self::normalize(-self.shift + dd - dn, rev(&self.num), rev(&self.den))
    }
}

fn pow(x: &BigRational, n: i64) -> BigRational {
    let base = if n < 0 { x.recip() } else { x.clone() };
    num_traits::pow(base, n.unsigned_abs() as usize)
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc {
            shift: 0,
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        Self::qpow(0)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;

    fn add(self, other: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let s = self.shift.min(other.shift);
        let a = self.num.shift_up((self.shift - s) as usize);
        let b = other.num.shift_up((other.shift - s) as usize);
        if self.den == other.den {
            RatFunc::normalize(s, a.add(&b), self.den.clone())
        } else {
            let num = a.mul(&other.den).add(&b.mul(&self.den));
            RatFunc::normalize(s, num, self.den.mul(&other.den))
        }
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;

    fn mul(self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        let shift = self.shift + other.shift;
        if self.den.is_one() && other.den.is_one() {
            return RatFunc {
                shift,
                num: self.num.mul(&other.num),
                den: Poly::one(),
            };
        }
        RatFunc::normalize(shift, self.num.mul(&other.num), self.den.mul(&other.den))
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;

    fn sub(self, other: &RatFunc) -> RatFunc {
        self + &(-other)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        RatFunc {
            shift: self.shift,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;

    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Add for RatFunc {
    type Output = RatFunc;

    fn add(self, other: RatFunc) -> RatFunc {
        &self + &other
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;

    fn sub(self, other: RatFunc) -> RatFunc {
        &self - &other
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;

    fn mul(self, other: RatFunc) -> RatFunc {
        &self * &other
    }
}

fn fmt_laurent(f: &mut fmt::Formatter<'_>, shift: i64, p: &Poly) -> fmt::Result {
    let mut first = true;
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = shift + i as i64;
        let negative = c.is_negative();
        let mag = c.abs();
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { "-" } else { "+" })?;
        }
        first = false;
        let power = match e {
            0 => None,
            1 => Some("q".to_string()),
            e if e < 0 => Some(format!("q^({e})")),
            e => Some(format!("q^{e}")),
        };
        match power {
            None => write!(f, "{mag}")?,
            Some(pw) if mag.is_one() => write!(f, "{pw}")?,
            Some(pw) => write!(f, "{mag}*{pw}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Prints in the scalar text grammar, so output parses back to the same value.
impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return fmt_laurent(f, self.shift, &self.num);
        }
        write!(f, "(")?;
        fmt_laurent(f, self.shift, &self.num)?;
        write!(f, ")/(")?;
        fmt_laurent(f, 0, &self.den)?;
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> RatFunc {
        RatFunc::from_integer(n)
    }

    #[test]
    fn q_times_inverse_is_one() {
        assert_eq!(&RatFunc::q() * &RatFunc::qpow(-1), RatFunc::one());
    }

    #[test]
    fn inverse_of_q_minus_qinv() {
        let x = &RatFunc::q() - &RatFunc::qpow(-1);
        assert_eq!(&x.try_inv().unwrap() * &x, RatFunc::one());
        assert_eq!(RatFunc::zero().try_inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn zero_has_unique_form() {
        let x = &(&RatFunc::q() + &int(1)).try_inv().unwrap() - &(&RatFunc::q() + &int(1)).try_inv().unwrap();
        assert_eq!(x, RatFunc::zero());
        assert_eq!(x.denominator(), &Poly::one());
    }

    #[test]
    fn eval_and_pole() {
        let x = &RatFunc::q() + &RatFunc::qpow(-1);
        assert_eq!(
            x.eval_at(&BigRational::from_integer(2.into())).unwrap(),
            BigRational::new(5.into(), 2.into())
        );
        let pole = (&RatFunc::q() - &int(1)).try_inv().unwrap();
        assert!(matches!(pole.eval_at(&BigRational::one()), Err(Error::Pole(_))));
    }

    #[test]
    fn bar_swaps_q_and_inverse() {
        let x = (&RatFunc::qpow(3) + &int(2)).try_inv().unwrap();
        let y = (&RatFunc::qpow(-3) + &int(2)).try_inv().unwrap();
        assert_eq!(x.bar(), y);
        assert_eq!(x.bar().bar(), x);
    }

    #[test]
    fn display_uses_grammar() {
        let x = &(&RatFunc::q() - &RatFunc::qpow(-1)) + &int(0);
        assert_eq!(x.to_string(), "q - q^(-1)");
        let y = (&RatFunc::qpow(2) + &int(1)).try_inv().unwrap();
        assert_eq!(y.to_string(), "(1)/(q^2 + 1)");
    }
}
