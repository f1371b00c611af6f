use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::Rational;

/// Coefficient field: the rationals or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unrecognised field {0:?} (expected Q or Fp:P)")]
    Unrecognised(String),
    #[error("invalid scalar literal {0:?}")]
    BadScalar(String),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime(p: u32) -> Result<Self, FieldError> {
        // u32 products must fit in u64 and residues in u32
        if is_prime(p as u64) && p < (1 << 31) {
            Ok(FieldSpec::PrimeField(p))
        } else {
            Err(FieldError::NotPrime(p as u64))
        }
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(Rational::from_int(n)),
            FieldSpec::PrimeField(p) => Scalar::Fp(n.rem_euclid(*p as i64) as u32, *p),
        }
    }

    pub fn from_rational(&self, r: &Rational) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Q(r.clone()),
            FieldSpec::PrimeField(p) => {
                let big = r.to_big();
                let p = *p as i64;
                let red = |x: &num_bigint::BigInt| -> i64 {
                    let m = x % num_bigint::BigInt::from(p);
                    let m: i64 = num_traits::ToPrimitive::to_i64(&m).unwrap();
                    m.rem_euclid(p)
                };
                let n = red(big.numer());
                let d = red(big.denom());
                assert!(d != 0, "denominator vanishes mod {p}");
                self.from_i64(n) * Scalar::Fp(inv_mod(d as u32, p as u32), p as u32)
            }
        }
    }

    pub fn parse_scalar(&self, s: &str) -> Result<Scalar, FieldError> {
        let r: Rational = s.parse().map_err(|_| FieldError::BadScalar(s.to_string()))?;
        if let FieldSpec::PrimeField(p) = self {
            let d: num_bigint::BigInt = r.to_big().denom().clone();
            if (&d % num_bigint::BigInt::from(*p)) == num_bigint::BigInt::from(0) {
                return Err(FieldError::BadScalar(s.to_string()));
            }
        }
        Ok(self.from_rational(&r))
    }

    pub fn label(&self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::PrimeField(p) => format!("Fp:{p}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self, FieldError> {
        let t = s.trim();
        if t == "Q" || t == "QQ" || t.eq_ignore_ascii_case("rationals") {
            return Ok(FieldSpec::Rationals);
        }
        let rest = t
            .strip_prefix("Fp:")
            .or_else(|| t.strip_prefix("F"))
            .ok_or_else(|| FieldError::Unrecognised(s.to_string()))?;
        let p: u32 = rest.parse().map_err(|_| FieldError::Unrecognised(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        FieldSpec::parse(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    assert!(a % p != 0, "inverse of zero mod {p}");
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// A field element. Residues carry their modulus so mixed-field arithmetic is caught.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(Rational),
    Fp(u32, u32),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp(v, _) => *v == 1,
        }
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Q(_) => FieldSpec::Rationals,
            Scalar::Fp(_, p) => FieldSpec::PrimeField(*p),
        }
    }

    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(r) => Scalar::Q(r.recip()),
            Scalar::Fp(v, p) => Scalar::Fp(inv_mod(*v, *p), *p),
        }
    }

    /// Sign `(-1)^e` times this scalar.
    pub fn signed(self, e: i64) -> Scalar {
        if e.rem_euclid(2) == 0 {
            self
        } else {
            -self
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(r) => write!(f, "{r}"),
            Scalar::Fp(v, _) => write!(f, "{v}"),
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
    fn add(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => {
                Scalar::Fp(((*a as u64 + *b as u64) % *p as u64) as u32, *p)
            }
            _ => panic!("scalar field mismatch"),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp(a, p), Scalar::Fp(b, q)) if p == q => {
                Scalar::Fp(((*a as u64 * *b as u64) % *p as u64) as u32, *p)
            }
            _ => panic!("scalar field mismatch"),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp(0, p) => Scalar::Fp(0, *p),
            Scalar::Fp(a, p) => Scalar::Fp(p - a, *p),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

macro_rules! scalar_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
scalar_owned!(Add, add);
scalar_owned!(Sub, sub);
scalar_owned!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Vector helpers on `Vec<Scalar>` coordinates.
pub mod vecops {
    use super::{FieldSpec, Scalar};

    pub fn zeros(f: FieldSpec, n: usize) -> Vec<Scalar> {
        vec![f.zero(); n]
    }

    pub fn is_zero(v: &[Scalar]) -> bool {
        v.iter().all(Scalar::is_zero)
    }

    pub fn add_into(acc: &mut [Scalar], v: &[Scalar]) {
        debug_assert_eq!(acc.len(), v.len());
        for (a, b) in acc.iter_mut().zip(v) {
            if !b.is_zero() {
                *a += b;
            }
        }
    }

    pub fn axpy(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
        if c.is_zero() {
            return;
        }
        for (a, b) in acc.iter_mut().zip(v) {
            if !b.is_zero() {
                *a += &(c * b);
            }
        }
    }

    pub fn scale(c: &Scalar, v: &[Scalar]) -> Vec<Scalar> {
        v.iter().map(|x| c * x).collect()
    }

    pub fn sub(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn neg(a: &[Scalar]) -> Vec<Scalar> {
        a.iter().map(|x| -x).collect()
    }

    pub fn unit(f: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
        let mut v = zeros(f, n);
        v[i] = f.one();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_fields() {
        assert_eq!(FieldSpec::parse("Q").unwrap(), FieldSpec::Rationals);
        assert_eq!(FieldSpec::parse("Fp:7").unwrap(), FieldSpec::PrimeField(7));
        assert!(FieldSpec::parse("Fp:8").is_err());
        assert!(FieldSpec::parse("R").is_err());
    }

    #[test]
    fn residues_are_canonical() {
        let f = FieldSpec::PrimeField(5);
        assert_eq!(f.from_i64(-1).to_string(), "4");
        assert_eq!((f.from_i64(2) * f.from_i64(4)).to_string(), "3");
        assert_eq!(f.from_i64(2).inv(), f.from_i64(3));
        assert_eq!(f.parse_scalar("1/2").unwrap(), f.from_i64(3));
        assert!(f.parse_scalar("1/5").is_err());
    }
}
