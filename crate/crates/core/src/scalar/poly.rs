//! Dense univariate polynomials over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Name of the indeterminate in rendered output.
pub const VAR: &str = "lambda";

/// Integer polynomial in one indeterminate; coefficients in ascending
/// degree with no trailing zeros (the zero polynomial has none).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn from_coeffs(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The indeterminate itself.
    pub fn var() -> Self {
        Poly { coeffs: vec![BigInt::zero(), BigInt::one()] }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lead(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coeffs.first().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i);
                let b = other.coeffs.get(i);
                match (a, b) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                }
            })
            .collect();
        Poly::from_coeffs(coeffs)
    }

    pub fn neg(&self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    /// Non-negative gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `self / content`, with positive leading coefficient.
    pub fn primitive_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut c = self.content();
        if self.lead().is_negative() {
            c = -c;
        }
        Poly { coeffs: self.coeffs.iter().map(|x| x / &c).collect() }
    }

    /// Pseudo-remainder: `lead(d)^(deg a - deg d + 1) * a mod d`.
    pub fn pseudo_rem(&self, d: &Poly) -> Poly {
        assert!(!d.is_zero(), "pseudo-division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let ld = d.lead();
        let mut r = self.coeffs.clone();
        while r.len() > dd && !r.is_empty() {
            let lr = r.last().unwrap().clone();
            let shift = r.len() - 1 - dd;
            for x in r.iter_mut() {
                *x *= &ld;
            }
            for (i, c) in d.coeffs.iter().enumerate() {
                r[shift + i] -= &lr * c;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::from_coeffs(r)
    }

    /// Exact quotient `self / d` in Z[x], or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() - 1 < dd {
            return None;
        }
        let ld = d.lead();
        let mut r = self.coeffs.clone();
        let mut q = vec![BigInt::zero(); r.len() - dd];
        while r.len() > dd && !r.is_empty() {
            let (quot, rem) = r.last().unwrap().div_rem(&ld);
            if !rem.is_zero() {
                return None;
            }
            let shift = r.len() - 1 - dd;
            for (i, c) in d.coeffs.iter().enumerate() {
                r[shift + i] -= &quot * c;
            }
            q[shift] = quot;
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        if r.is_empty() {
            Some(Poly::from_coeffs(q))
        } else {
            None
        }
    }

    /// Greatest common divisor in Z[x], with positive leading coefficient.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.with_positive_lead();
        }
        if other.is_zero() {
            return self.with_positive_lead();
        }
        let c = self.content().gcd(&other.content());
        if self.is_constant() || other.is_constant() {
            return Poly::constant(c);
        }
        let (mut p, mut q) = (self.primitive_part(), other.primitive_part());
        if p.coeffs.len() < q.coeffs.len() {
            std::mem::swap(&mut p, &mut q);
        }
        while !q.is_zero() {
            let r = p.pseudo_rem(&q);
            p = q;
            q = r.primitive_part();
        }
        p.scale(&c)
    }

    fn with_positive_lead(&self) -> Poly {
        if self.lead().is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn eval(&self, at: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * at + BigRational::from_integer(c.clone()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            match deg {
                0 => write!(f, "{abs}")?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{abs}*")?;
                    }
                    f.write_str(VAR)?;
                    if deg > 1 {
                        write!(f, "^{deg}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Parses the rendering produced by `Display`, e.g. `2*lambda^2 - lambda + 3`.
pub fn parse_poly(text: &str) -> Result<Poly, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty polynomial".into());
    }
    let bytes = s.as_bytes();
    let mut pos = 0;
    let mut acc = Poly::zero();
    while pos < bytes.len() {
        let mut sign = BigInt::one();
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -sign;
            }
            pos += 1;
        } else if pos > 0 {
            return Err(format!("expected `+` or `-` at offset {pos}"));
        }
        let start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        let coeff = if pos > start {
            s[start..pos].parse::<BigInt>().map_err(|e| e.to_string())?
        } else {
            BigInt::one()
        };
        let mut degree = 0usize;
        let has_coeff = pos > start;
        if has_coeff && s[pos..].starts_with('*') {
            pos += 1;
            if !s[pos..].starts_with(VAR) {
                return Err(format!("expected `{VAR}` at offset {pos}"));
            }
        }
        if s[pos..].starts_with(VAR) {
            pos += VAR.len();
            degree = 1;
            if s[pos..].starts_with('^') {
                pos += 1;
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                degree = s[start..pos].parse().map_err(|_| format!("bad exponent at offset {start}"))?;
            }
        } else if !has_coeff {
            return Err(format!("expected a term at offset {pos}"));
        }
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = sign * coeff;
        acc = acc.add(&Poly::from_coeffs(coeffs));
    }
    Ok(acc)
}
