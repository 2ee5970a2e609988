//! Coefficient fields.
//!
//! Every series, field and form in this crate is generic over a [`Scalar`].
//! The exact fields are [`Qi`] (Gaussian rationals, the default everywhere)
//! and [`BigRational`]. `f64` is provided for quick numerical experiments;
//! its equality is bitwise, so identities that hold exactly over the
//! rationals will usually fail in floating point.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A commutative field of coefficients.
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
    + Div<Output = Self>
    + Send
    + Sync
    + 'static
{
    fn from_rational(r: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn mul_ref(&self, other: &Self) -> Self;

    fn add_assign_ref(&mut self, other: &Self);

    /// `self += a * b`
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        let p = a.mul_ref(b);
        self.add_assign_ref(&p);
    }

    /// `true` when the value is a rational number with a real embedding.
    /// Used only for choosing readable renderings.
    fn is_real(&self) -> bool {
        true
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    /// Integer power; negative exponents require a nonzero base.
    fn powi(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&b);
            }
            b = b.mul_ref(&b);
            e >>= 1;
        }
        Some(acc)
    }
}

impl Scalar for BigRational {
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}

impl Scalar for f64 {
    fn from_rational(r: &BigRational) -> Self {
        r.to_f64().unwrap_or(f64::NAN)
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
}

/// A Gaussian rational `re + im·i` with `re, im ∈ ℚ`.
///
/// Both parts are kept in lowest terms by `BigRational`, so structural
/// equality and hashing agree with numerical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Qi {
    re: BigRational,
    im: BigRational,
}

impl Qi {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Qi { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Qi {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::real(BigRational::from_integer(n.into()))
    }

    /// `num/den` as a real Gaussian rational. Panics when `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    pub fn i() -> Self {
        Qi {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn conj(&self) -> Self {
        Qi {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `re² + im²`
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// The real rational value, if the imaginary part vanishes.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.im.is_zero() {
            Some(&self.re)
        } else {
            None
        }
    }

    /// The value as a machine integer, if it is one.
    pub fn as_i64(&self) -> Option<i64> {
        let r = self.as_rational()?;
        if r.is_integer() {
            r.to_integer().to_i64()
        } else {
            None
        }
    }
}

impl Zero for Qi {
    fn zero() -> Self {
        Qi {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Qi {
    fn one() -> Self {
        Qi {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
}

impl Neg for Qi {
    type Output = Qi;
    fn neg(self) -> Qi {
        Qi {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Add for Qi {
    type Output = Qi;
    fn add(mut self, rhs: Qi) -> Qi {
        self.add_assign_ref(&rhs);
        self
    }
}

impl Sub for Qi {
    type Output = Qi;
    fn sub(self, rhs: Qi) -> Qi {
        Qi {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for Qi {
    type Output = Qi;
    fn mul(self, rhs: Qi) -> Qi {
        self.mul_ref(&rhs)
    }
}

impl Div for Qi {
    type Output = Qi;
    fn div(self, rhs: Qi) -> Qi {
        assert!(!rhs.is_zero(), "division by zero Gaussian rational");
        if rhs.im.is_zero() {
            return Qi {
                re: self.re / &rhs.re,
                im: self.im / &rhs.re,
            };
        }
        let n = rhs.norm_sqr();
        let num = self.mul_ref(&rhs.conj());
        Qi {
            re: num.re / &n,
            im: num.im / n,
        }
    }
}

impl Scalar for Qi {
    fn from_rational(r: &BigRational) -> Self {
        Qi::real(r.clone())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        // Most work is over the reals; skip the cross terms when possible.
        match (self.im.is_zero(), other.im.is_zero()) {
            (true, true) => Qi::real(&self.re * &other.re),
            (true, false) => Qi {
                re: &self.re * &other.re,
                im: &self.re * &other.im,
            },
            (false, true) => Qi {
                re: &self.re * &other.re,
                im: &self.im * &other.re,
            },
            (false, false) => Qi {
                re: &self.re * &other.re - &self.im * &other.im,
                im: &self.re * &other.im + &self.im * &other.re,
            },
        }
    }

    fn add_assign_ref(&mut self, other: &Self) {
        if !other.re.is_zero() {
            self.re += &other.re;
        }
        if !other.im.is_zero() {
            self.im += &other.im;
        }
    }

    fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Qi {
    /// `3/2`, `-i`, `2/3*i`, `1/2+3/4*i`, `-1-i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if !self.re.is_zero() {
            fmt_rational(&self.re, f)?;
            if self.im.is_positive() {
                write!(f, "+")?;
            }
        }
        if self.im.is_one() {
            write!(f, "i")
        } else if (-self.im.clone()).is_one() {
            write!(f, "-i")
        } else {
            fmt_rational(&self.im, f)?;
            write!(f, "*i")
        }
    }
}

/// Generalized binomial coefficient `C(alpha, j)` over ℚ.
pub fn binomial(alpha: &BigRational, j: u32) -> BigRational {
    let mut acc = BigRational::one();
    for t in 0..j {
        let t = BigRational::from_integer(t.into());
        acc = acc * (alpha - &t) / (&t + BigRational::one());
    }
    acc
}

/// `1/n!` as a rational.
pub fn inv_factorial(n: u32) -> BigRational {
    let mut d = BigInt::one();
    for k in 2..=n {
        d *= BigInt::from(k);
    }
    BigRational::new(BigInt::one(), d)
}

/// Parse `p`, `p/q` or `-p/q` into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn gaussian_field_ops() {
        let a = Qi::new(q(1, 2), q(3, 4));
        let b = Qi::new(q(-2, 1), q(1, 3));
        let prod = a.clone() * b.clone();
        assert_eq!(prod.clone() / b.clone(), a);
        assert_eq!(a.clone() - a.clone(), Qi::zero());
        assert_eq!(Qi::i() * Qi::i(), -Qi::one());
        assert_eq!(a.inv().unwrap() * a, Qi::one());
    }

    #[test]
    fn canonical_form_is_reduced() {
        let a = Qi::ratio(6, -4);
        assert_eq!(a.re().numer(), &BigInt::from(-3));
        assert_eq!(a.re().denom(), &BigInt::from(2));
    }

    #[test]
    fn display() {
        assert_eq!(Qi::ratio(3, 2).to_string(), "3/2");
        assert_eq!(Qi::i().to_string(), "i");
        assert_eq!((-Qi::i()).to_string(), "-i");
        assert_eq!(Qi::new(q(1, 2), q(3, 4)).to_string(), "1/2+3/4*i");
        assert_eq!(Qi::new(q(-1, 1), q(-1, 1)).to_string(), "-1-i");
        assert_eq!(Qi::new(q(0, 1), q(2, 3)).to_string(), "2/3*i");
    }

    #[test]
    fn binomial_coefficients() {
        assert_eq!(binomial(&q(1, 2), 2), q(-1, 8));
        assert_eq!(binomial(&q(5, 1), 2), q(10, 1));
        assert_eq!(binomial(&q(2, 1), 3), q(0, 1));
        assert_eq!(binomial(&q(-1, 1), 3), q(-1, 1));
    }

    #[test]
    fn powers() {
        assert_eq!(Qi::int(2).powi(-3).unwrap(), Qi::ratio(1, 8));
        assert_eq!(Qi::i().powi(4).unwrap(), Qi::one());
        assert!(Qi::zero().powi(-1).is_none());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational("7"), Some(q(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
