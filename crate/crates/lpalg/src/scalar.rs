//! Exact scalars: Gaussian rationals `a + bi` with `a, b ∈ ℚ`.
//!
//! All algebraic computations in this crate (cores, admissibility,
//! convolution, Leavitt identities) run over this field. Floating point
//! appears only inside norm estimation, via [`Scalar::to_complex`].

use num::complex::Complex64;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// A Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    pub re: BigRational,
    pub im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::new(BigRational::one(), BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    /// Real rational `num/den`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        assert!(re_den != 0 && im_den != 0, "zero denominator");
        Scalar::new(
            BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Exactly real and `> 0`.
    pub fn is_positive_real(&self) -> bool {
        self.is_real() && self.re.is_positive()
    }

    /// Exactly real and `≥ 0`.
    pub fn is_nonnegative_real(&self) -> bool {
        self.is_real() && !self.re.is_negative()
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|²` as an exact rational.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// `|z|` as a float.
    pub fn abs(&self) -> f64 {
        self.abs_sq().to_f64().unwrap_or(f64::INFINITY).sqrt()
    }

    /// Exact multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero scalar");
        let d = self.abs_sq();
        Scalar::new(&self.re / &d, -&self.im / &d)
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Parse `"a/b"`, `"a"`, `"a/b+c/d i"`, `"c/d i"`, `"-i"` and friends.
    pub fn parse(text: &str) -> Result<Self, String> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty scalar".to_string());
        }
        // Split into real and imaginary summands at a '+'/'-' that is not
        // leading and not part of an exponent-free rational.
        let mut parts: Vec<String> = Vec::new();
        let mut cur = String::new();
        for (idx, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && idx > 0 && !cur.is_empty() && !cur.ends_with('/') {
                parts.push(cur.clone());
                cur.clear();
            }
            cur.push(ch);
        }
        if !cur.is_empty() {
            parts.push(cur);
        }
        if parts.len() > 2 {
            return Err(format!("cannot parse scalar '{text}'"));
        }
        let mut re = BigRational::zero();
        let mut im = BigRational::zero();
        let mut seen_re = false;
        let mut seen_im = false;
        for part in parts {
            if let Some(body) = part.strip_suffix('i') {
                if seen_im {
                    return Err(format!("two imaginary parts in '{text}'"));
                }
                seen_im = true;
                let body = body.strip_suffix('*').unwrap_or(body);
                im = if body.is_empty() || body == "+" {
                    BigRational::one()
                } else if body == "-" {
                    -BigRational::one()
                } else {
                    parse_rational(body)?
                };
            } else {
                if seen_re {
                    return Err(format!("two real parts in '{text}'"));
                }
                seen_re = true;
                re = parse_rational(&part)?;
            }
        }
        Ok(Scalar::new(re, im))
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| format!("bad rational numerator '{s}'"))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| format!("bad rational denominator '{s}'"))?;
    if d.is_zero() {
        return Err(format!("zero denominator in '{s}'"));
    }
    Ok(BigRational::new(n, d))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let z = Scalar::from_parts(1, 2, -3, 4);
        let w = Scalar::from_parts(2, 1, 1, 3);
        let prod = &z * &w;
        assert_eq!(&prod / &w, z);
        assert!((&z - &z).is_zero());
        assert_eq!(&z * &Scalar::one(), z);
    }

    #[test]
    fn inverse_of_i() {
        assert_eq!(Scalar::i().inv(), -&Scalar::i());
    }

    #[test]
    fn positivity_is_exact() {
        assert!(Scalar::from_ratio(1, 100000).is_positive_real());
        assert!(!Scalar::from_ratio(0, 5).is_positive_real());
        assert!(Scalar::from_ratio(0, 5).is_nonnegative_real());
        assert!(!Scalar::from_parts(1, 1, 1, 1000000).is_positive_real());
    }

    #[test]
    fn parse_round_trip() {
        for text in ["3/2", "-1", "1/2+1/3i", "-2/7-1/7i", "i", "-i", "5i", "0"] {
            let z = Scalar::parse(text).unwrap();
            let again = Scalar::parse(&z.to_string()).unwrap();
            assert_eq!(z, again, "{text}");
        }
        assert!(Scalar::parse("1/0").is_err());
        assert!(Scalar::parse("").is_err());
    }

    #[test]
    fn unimodular_pythagorean() {
        let z = Scalar::from_parts(3, 5, 4, 5);
        assert!(z.abs_sq().is_one());
    }
}
