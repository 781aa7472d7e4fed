//! The scalar field Q(lambda).
//!
//! A [`Scalar`] is a quotient of integer polynomials kept in lowest terms:
//! numerator and denominator are coprime in Z[lambda] and the denominator
//! has a positive leading coefficient. That representation is unique, so
//! structural equality is field equality.

mod poly;

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub use poly::{parse_poly, Poly, VAR};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at lambda = {0}")]
    Pole(BigRational),
    #[error("cannot parse scalar `{text}`: {reason}")]
    Parse { text: String, reason: String },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Poly,
    den: Poly,
}

impl Scalar {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_one() {
            return Scalar { num, den };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        if den.lead().is_negative() {
            num = num.neg();
            den = den.neg();
        }
        Scalar { num, den }
    }

    pub fn zero() -> Self {
        Scalar { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Scalar { num: Poly::one(), den: Poly::one() }
    }

    pub fn int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar { num: Poly::constant(n), den: Poly::one() }
    }

    pub fn rational(q: &BigRational) -> Self {
        Self::normalized(Poly::constant(q.numer().clone()), Poly::constant(q.denom().clone()))
    }

    /// The indeterminate lambda.
    pub fn lambda() -> Self {
        Scalar { num: Poly::var(), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        Scalar { num: p, den: Poly::one() }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a rational number, when it does not involve lambda.
    pub fn as_rational(&self) -> Option<BigRational> {
        (self.num.is_constant() && self.den.is_constant())
            .then(|| BigRational::new(self.num.constant_term(), self.den.constant_term()))
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::normalized(self.num.mul(&rhs.den), self.den.mul(&rhs.num)))
    }

    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: u32) -> Scalar {
        (0..e).fold(Scalar::one(), |acc, _| &acc * self)
    }

    /// Value at `lambda = at`.
    pub fn specialize(&self, at: &BigRational) -> Result<BigRational, ScalarError> {
        let d = self.den.eval(at);
        if d.is_zero() {
            return Err(ScalarError::Pole(at.clone()));
        }
        Ok(self.num.eval(at) / d)
    }

    /// `specialize` lifted back into the field.
    pub fn substitute(&self, at: &BigRational) -> Result<Scalar, ScalarError> {
        self.specialize(at).map(|q| Scalar::rational(&q))
    }

    /// Wire form `num/den`, both sides rendered as polynomials in `lambda`.
    pub fn to_wire(&self) -> String {
        format!("{}/{}", self.num, self.den)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::int(n)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &Poly| {
            let terms = p.coeffs().iter().filter(|c| !c.is_zero()).count();
            if terms > 1 || (p.degree() > Some(0) && !p.lead().abs().is_one()) {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.to_wire())
    }
}

/// Accepts the wire form `num/den`, the display form with parenthesized
/// parts, and bare polynomials or integers; `7/2` is seven halves.
impl FromStr for Scalar {
    type Err = ScalarError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let err = |reason: String| ScalarError::Parse { text: text.to_string(), reason };
        let part = |p: &str| {
            let p = p.trim();
            let inner = p.strip_prefix('(').and_then(|q| q.strip_suffix(')')).unwrap_or(p);
            parse_poly(inner).map_err(err)
        };
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (part(n)?, part(d)?),
            None => (part(text)?, Poly::one()),
        };
        Scalar::new(num, den)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign:ident) => {
        impl $trait<Scalar> for Scalar {
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
        impl $assign_trait<&Scalar> for Scalar {
            fn $assign(&mut self, rhs: &Scalar) {
                *self = (&*self).$method(rhs);
            }
        }
        impl $assign_trait<Scalar> for Scalar {
            fn $assign(&mut self, rhs: Scalar) {
                *self = (&*self).$method(&rhs);
            }
        }
    };
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.den == rhs.den {
            return Scalar::normalized(self.num.add(&rhs.num), self.den.clone());
        }
        Scalar::normalized(
            self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den)),
            self.den.mul(&rhs.den),
        )
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        Scalar::normalized(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

forward_binop!(Add, add, AddAssign, add_assign);
forward_binop!(Sub, sub, SubAssign, sub_assign);
forward_binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg(), den: self.den.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Scalar> for Scalar {
    fn sum<I: Iterator<Item = &'a Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl Product for Scalar {
    fn product<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::one(), |a, b| a * b)
    }
}

/// Falling factorial `x (x - 1) ... (x - n + 1)`.
pub fn falling_factorial(x: &Scalar, n: usize) -> Scalar {
    (0..n).map(|i| x - &Scalar::int(i as i64)).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn difference_of_squares() {
        let l = Scalar::lambda();
        let prod = (&l - &Scalar::one()) * (&l + &Scalar::one());
        assert_eq!(prod, &l * &l - Scalar::one());
    }

    #[test]
    fn cancellation_normalizes() {
        let l = Scalar::lambda();
        let r = (&l * &l - &l).checked_div(&l).unwrap();
        assert_eq!(r, &l - &Scalar::one());
        assert!(r.denominator().is_one());
    }

    #[test]
    fn specialization() {
        let l = Scalar::lambda();
        let v = &l * (&l - &Scalar::one());
        assert_eq!(v.specialize(&q(3, 1)).unwrap(), q(6, 1));
        let pole = Scalar::one().checked_div(&(&l - &Scalar::int(2))).unwrap();
        assert_eq!(pole.specialize(&q(2, 1)), Err(ScalarError::Pole(q(2, 1))));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(ScalarError::DivisionByZero));
        assert_eq!(Scalar::new(Poly::one(), Poly::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn denominators_have_positive_lead() {
        let s = Scalar::int(3).checked_div(&Scalar::int(-6)).unwrap();
        assert_eq!(s.to_wire(), "-1/2");
        let l = Scalar::lambda();
        let t = Scalar::int(2).checked_div(&(Scalar::int(4) - &l * Scalar::int(2))).unwrap();
        assert_eq!(t.to_wire(), "-1/lambda - 2");
    }

    #[test]
    fn wire_round_trip() {
        let l = Scalar::lambda();
        let s = (&l * &l + Scalar::int(3)).checked_div(&(&l - Scalar::int(7))).unwrap();
        assert_eq!(s.to_wire().parse::<Scalar>().unwrap(), s);
        assert_eq!("7/2".parse::<Scalar>().unwrap(), Scalar::rational(&q(7, 2)));
        assert!("1/0".parse::<Scalar>().is_err());
    }

    #[test]
    fn display_is_readable() {
        let l = Scalar::lambda();
        assert_eq!((&l - Scalar::int(2)).to_string(), "lambda - 2");
        assert_eq!(Scalar::int(-8).to_string(), "-8");
        let f = l.checked_div(&(&l + Scalar::one())).unwrap();
        assert_eq!(f.to_string(), "lambda/(lambda + 1)");
    }

    #[test]
    fn falling_factorial_values() {
        let l = Scalar::lambda();
        let f3 = falling_factorial(&l, 3);
        assert_eq!(f3, &l * (&l - Scalar::int(1)) * (&l - Scalar::int(2)));
        assert_eq!(falling_factorial(&Scalar::int(3), 4), Scalar::zero());
        assert_eq!(falling_factorial(&l, 0), Scalar::one());
    }
}
