//! Exact field elements: rationals with arbitrary-precision integers, and
//! prime fields `F_p` with `p < 2^31`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default prime for the finite-field mode.
pub const DEFAULT_PRIME: u32 = 101;

/// The working field of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Q,
    Fp(u32),
}

impl Field {
    /// Checked constructor for a prime field.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= (1u64 << 31) || !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Fp(p as u32))
    }

    pub fn zero(self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { value: 0, modulus: p },
        }
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(v))),
            Field::Fp(p) => Scalar::Fp { value: v.rem_euclid(p as i64) as u32, modulus: p },
        }
    }

    /// Parses an exact coefficient: `"3"`, `"-1"`, `"3/2"`.
    pub fn parse(self, text: &str) -> Result<Scalar> {
        let text = text.trim();
        let bad = || Error::Parse(format!("bad scalar `{text}`"));
        let (num, den) = match text.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (text, "1"),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = BigInt::from_str(den).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        let q = BigRational::new(num, den);
        Scalar::Q(q).to_field(self).ok_or_else(bad)
    }

    /// A random element: integers in `[-3, 3]` over Q, uniform over `F_p`.
    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> Scalar {
        match self {
            Field::Q => self.from_i64(rng.gen_range(-3..=3)),
            Field::Fp(p) => Scalar::Fp { value: rng.gen_range(0..p), modulus: p },
        }
    }

    /// Number of elements, `None` for Q.
    pub fn size(self) -> Option<u64> {
        match self {
            Field::Q => None,
            Field::Fp(p) => Some(p as u64),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q`, `F101`, `Fp:101`, `Fp(101)` or a bare prime.
    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Q);
        }
        let digits = s
            .trim_start_matches("Fp")
            .trim_start_matches("F")
            .trim_matches(|c| c == ':' || c == '(' || c == ')');
        let p: u64 = digits.parse().map_err(|_| Error::InvalidField(s.to_string()))?;
        Field::prime(p)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element carrying its field tag.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u32, modulus: u32 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { modulus, .. } => Field::Fp(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: pow_mod(*value as u64, *modulus as u64 - 2, *modulus as u64) as u32,
                modulus: *modulus,
            },
        }
    }

    /// Maps a rational into `field`; `None` when the denominator vanishes mod p.
    pub fn to_field(&self, field: Field) -> Option<Scalar> {
        match (self, field) {
            (_, f) if self.field() == f => Some(self.clone()),
            (Scalar::Q(q), Field::Fp(p)) => {
                let p_big = BigInt::from(p);
                let num = q.numer().mod_floor_i(&p_big);
                let den = q.denom().mod_floor_i(&p_big);
                if den == 0 {
                    return None;
                }
                let den_inv = pow_mod(den, p as u64 - 2, p as u64);
                Some(Scalar::Fp { value: (num * den_inv % p as u64) as u32, modulus: p })
            }
            _ => None,
        }
    }

    /// Integer value when the scalar is a small integer (Q) or its canonical
    /// representative (F_p).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Q(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Q(_) => None,
            Scalar::Fp { value, .. } => Some(*value as i64),
        }
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn check(&self, other: &Scalar) {
        if self.field() != other.field() {
            panic!("mixed scalar fields: {} vs {}", self.field(), other.field());
        }
    }
}

trait ModFloor {
    fn mod_floor_i(&self, p: &BigInt) -> u64;
}

impl ModFloor for BigInt {
    fn mod_floor_i(&self, p: &BigInt) -> u64 {
        let r = self % p;
        let r = if r.is_negative() { r + p } else { r };
        r.to_u64().expect("residue fits in u64")
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Fp { value, .. } => write!(f, "{value}"),
        }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { value: a, modulus }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((*a as u64 + *b as u64) % *modulus as u64) as u32,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { value: a, modulus }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((*a as u64 + *modulus as u64 - *b as u64) % *modulus as u64) as u32,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.check(rhs);
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { value: a, modulus }, Scalar::Fp { value: b, .. }) => Scalar::Fp {
                value: ((*a as u64 * *b as u64) % *modulus as u64) as u32,
                modulus: *modulus,
            },
            _ => unreachable!(),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, modulus } => Scalar::Fp {
                value: (*modulus - *value) % *modulus,
                modulus: *modulus,
            },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $f:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: Scalar) -> Scalar {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $f(self, rhs: &Scalar) -> Scalar {
                (&self).$f(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
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

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_rationals() {
        let q = Field::Q;
        assert_eq!(q.parse("3/6").unwrap(), q.parse("1/2").unwrap());
        assert_eq!(q.parse("-1").unwrap(), -q.one());
        assert!(q.parse("1/0").is_err());
        assert!(q.parse("x").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::Fp(101);
        let a = f.from_i64(-1);
        assert_eq!(a.to_i64(), Some(100));
        assert!((&a * &a).is_one());
        let half = f.parse("1/2").unwrap();
        assert!((&half * &f.from_i64(2)).is_one());
        assert!((&f.from_i64(7) * &f.from_i64(7).inv()).is_one());
    }

    #[test]
    fn field_parsing() {
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Q);
        assert_eq!("Fp:101".parse::<Field>().unwrap(), Field::Fp(101));
        assert_eq!("F7".parse::<Field>().unwrap(), Field::Fp(7));
        assert!("Fp(100)".parse::<Field>().is_err());
    }

    #[test]
    #[should_panic(expected = "mixed scalar fields")]
    fn mixed_fields_panic() {
        let _ = &Field::Q.one() + &Field::Fp(7).one();
    }
}
