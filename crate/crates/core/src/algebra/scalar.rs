use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::prime::is_prime;
use super::AlgebraError;

/// The coefficient field an automaton, matrix or scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// Arbitrary-precision rationals.
    Rational,
    /// Integers modulo a prime `p`.
    Prime(u64),
}

impl Field {
    /// Builds the prime field of order `p`, rejecting composite moduli.
    pub fn prime(p: u64) -> Result<Field, AlgebraError> {
        if is_prime(p) {
            Ok(Field::Prime(p))
        } else {
            Err(AlgebraError::NotPrime(p))
        }
    }

    pub fn zero(&self) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rational(BigRational::zero()),
            Field::Prime(p) => Scalar::Residue { value: 0, modulus: p },
        }
    }

    pub fn one(&self) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rational(BigRational::one()),
            Field::Prime(p) => Scalar::Residue { value: 1 % p, modulus: p },
        }
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Scalar::Residue { value: reduce_bigint(v, p), modulus: p },
        }
    }

    /// `num/den` in this field. Fails when `den` vanishes in the field.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Result<Scalar, AlgebraError> {
        match *self {
            Field::Rational => {
                if den.is_zero() {
                    return Err(AlgebraError::DivisionByZero);
                }
                Ok(Scalar::Rational(BigRational::new(num.clone(), den.clone())))
            }
            Field::Prime(p) => {
                let d = reduce_bigint(den, p);
                let inv = mod_inverse(d, p).ok_or(AlgebraError::DivisionByZero)?;
                Ok(Scalar::Residue { value: mul_mod(reduce_bigint(num, p), inv, p), modulus: p })
            }
        }
    }

    /// Converts a rational into this field (reduction modulo `p` for prime fields).
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar, AlgebraError> {
        self.from_ratio(q.numer(), q.denom())
    }

    /// Parses `a`, `-a` or `a/b` with decimal integers.
    pub fn parse_scalar(&self, text: &str) -> Result<Scalar, AlgebraError> {
        let bad = || AlgebraError::BadScalar(text.to_string());
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n, d),
            None => (text, "1"),
        };
        let num: BigInt = num.parse().map_err(|_| bad())?;
        let den: BigInt = den.parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        self.from_ratio(&num, &den)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "q"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = AlgebraError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u64 = p.parse().map_err(|_| AlgebraError::BadField(s.to_string()))?;
            return Field::prime(p);
        }
        Err(AlgebraError::BadField(s.to_string()))
    }
}

/// A field element tagged with its field.
///
/// Rationals are kept in lowest terms with a positive denominator (zero is
/// `0/1`); residues lie in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Residue { .. } => None,
        }
    }

    /// The value as an integer, when it is one (residues always are).
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            Scalar::Rational(q) if q.is_integer() => Some(q.to_integer()),
            Scalar::Rational(_) => None,
            Scalar::Residue { value, .. } => Some(BigInt::from(*value)),
        }
    }

    fn check_same(&self, other: &Scalar) -> Result<(), AlgebraError> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch(self.field(), other.field()))
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        self.check_same(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        self.check_same(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        self.check_same(other)?;
        Ok(self * other)
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, AlgebraError> {
        self.check_same(other)?;
        let inv = other.inverse().ok_or(AlgebraError::DivisionByZero)?;
        Ok(self * &inv)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(q) => {
                if q.is_zero() {
                    None
                } else {
                    Some(Scalar::Rational(q.recip()))
                }
            }
            Scalar::Residue { value, modulus } => {
                mod_inverse(*value, *modulus).map(|v| Scalar::Residue { value: v, modulus: *modulus })
            }
        }
    }

    /// `self += a * b` without intermediate clones where possible.
    pub fn add_mul_assign(&mut self, a: &Scalar, b: &Scalar) {
        match (self, a, b) {
            (Scalar::Rational(acc), Scalar::Rational(x), Scalar::Rational(y)) => {
                if x.is_zero() || y.is_zero() {
                } else if acc.is_integer() && x.is_integer() && y.is_integer() {
                    // integer fast path: skips the gcd normalizations
                    *acc = BigRational::from_integer(acc.numer() + x.numer() * y.numer());
                } else {
                    *acc += x * y;
                }
            }
            (
                Scalar::Residue { value, modulus },
                Scalar::Residue { value: x, modulus: mx },
                Scalar::Residue { value: y, modulus: my },
            ) if modulus == mx && modulus == my => {
                *value = add_mod(*value, mul_mod(*x, *y, *modulus), *modulus);
            }
            (s, a, b) => panic!("mixed-field arithmetic: {} += {} * {}", s.field(), a.field(), b.field()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("mixed-field arithmetic: {} with {}", a.field(), b.field())
}

impl Add for &Scalar {
    type Output = Scalar;

    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue { value: add_mod(*a, *b, *p), modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;

    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue { value: add_mod(*a, (*p - *b) % *p, *p), modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;

    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) if a.is_integer() && b.is_integer() => Scalar::Rational(BigRational::from_integer(a.numer() * b.numer())),
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q }) if p == q => {
                Scalar::Residue { value: mul_mod(*a, *b, *p), modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

/// Panics on division by zero; use [`Scalar::try_div`] for a checked variant.
impl Div for &Scalar {
    type Output = Scalar;

    fn div(self, rhs: &Scalar) -> Scalar {
        self.try_div(rhs).expect("scalar division")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;

    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue { value: (*modulus - *value) % *modulus, modulus: *modulus },
        }
    }
}

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo a prime by Fermat's little theorem.
fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        None
    } else {
        Some(pow_mod(a, p - 2, p))
    }
}

/// Canonical residue of a (possibly negative) big integer.
pub(crate) fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    let mut r = v % &m;
    if r.is_negative() {
        r += &m;
    }
    r.to_u64().expect("residue fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Field::Rational.from_ratio(&BigInt::from(n), &BigInt::from(d)).unwrap()
    }

    #[test]
    fn rationals_stay_normalized() {
        let a = q(2, -4);
        let Scalar::Rational(r) = &a else { panic!() };
        assert_eq!(r.numer(), &BigInt::from(-1));
        assert_eq!(r.denom(), &BigInt::from(2));
        let z = &q(1, 3) - &q(1, 3);
        let Scalar::Rational(r) = &z else { panic!() };
        assert!(r.numer().is_zero());
        assert!(r.denom().is_one());
    }

    #[test]
    fn display_omits_unit_denominator() {
        assert_eq!(q(6, 3).to_string(), "2");
        assert_eq!(q(-3, 6).to_string(), "-1/2");
        let f = Field::prime(7).unwrap();
        assert_eq!(f.from_i64(-1).to_string(), "6");
    }

    #[test]
    fn parse_roundtrip() {
        let f = Field::Rational;
        for s in ["0", "5", "-7/3", "12/5"] {
            assert_eq!(f.parse_scalar(s).unwrap().to_string(), s);
        }
        assert!(f.parse_scalar("1/0").is_err());
        assert!(f.parse_scalar("x").is_err());
        let p = Field::prime(11).unwrap();
        // 1/2 = 6 mod 11
        assert_eq!(p.parse_scalar("1/2").unwrap().to_string(), "6");
        assert!(p.parse_scalar("1/11").is_err());
    }

    #[test]
    fn field_parsing_checks_primality() {
        assert_eq!("q".parse::<Field>().unwrap(), Field::Rational);
        assert_eq!("fp:13".parse::<Field>().unwrap(), Field::Prime(13));
        assert!(matches!("fp:15".parse::<Field>(), Err(AlgebraError::NotPrime(15))));
        assert!("r".parse::<Field>().is_err());
    }

    #[test]
    fn mixed_fields_are_errors() {
        let a = Field::Rational.one();
        let b = Field::Prime(5).one();
        assert!(matches!(a.try_add(&b), Err(AlgebraError::FieldMismatch(..))));
        assert!(matches!(a.try_mul(&b), Err(AlgebraError::FieldMismatch(..))));
    }

    #[test]
    fn prime_field_inverse() {
        let f = Field::Prime(101);
        for v in 1..101 {
            let s = f.from_i64(v);
            assert!((&s * &s.inverse().unwrap()).is_one());
        }
        assert!(f.zero().inverse().is_none());
    }
}
