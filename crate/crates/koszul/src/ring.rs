//! Exact coefficient arithmetic over the three supported base rings.
//!
//! Every scalar in the engine is tagged with the ring it belongs to, and all
//! arithmetic goes through [`BaseRing`] methods so that integer, rational and
//! prime-field computations share one code path.  Integer arithmetic is
//! arbitrary precision; there is no silent overflow anywhere.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// The coefficient ring the engine computes over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseRing {
    /// The integers Z, with arbitrary precision arithmetic.
    Integers,
    /// The rationals Q, exact fractions.
    Rationals,
    /// The field F_p for a prime p < 2^31.
    PrimeField(u32),
}

/// Error raised when constructing an invalid ring.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("modulus {0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} exceeds 2^31 - 1")]
    ModulusTooLarge(u64),
}

fn is_prime_u32(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    let p64 = p as u64;
    while d * d <= p64 {
        if p64 % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseRing {
    /// Builds the prime field F_p, checking primality by trial division.
    pub fn prime_field(p: u32) -> Result<BaseRing, RingError> {
        if p > (1u32 << 31) - 1 {
            return Err(RingError::ModulusTooLarge(p as u64));
        }
        if !is_prime_u32(p) {
            return Err(RingError::NotPrime(p));
        }
        Ok(BaseRing::PrimeField(p))
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, BaseRing::Integers)
    }

    pub fn zero(&self) -> Scalar {
        match self {
            BaseRing::Integers => Scalar::Int(BigInt::zero()),
            BaseRing::Rationals => Scalar::Rat(BigRational::zero()),
            BaseRing::PrimeField(_) => Scalar::Fp(0),
        }
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match self {
            BaseRing::Integers => Scalar::Int(BigInt::from(v)),
            BaseRing::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
            BaseRing::PrimeField(p) => {
                let p = *p as i64;
                Scalar::Fp(v.rem_euclid(p) as u64)
            }
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match self {
            BaseRing::Integers => Scalar::Int(v.clone()),
            BaseRing::Rationals => Scalar::Rat(BigRational::from_integer(v.clone())),
            BaseRing::PrimeField(p) => {
                let m = BigInt::from(*p);
                let r = v.mod_floor(&m);
                Scalar::Fp(r.to_u64_digits().1.first().copied().unwrap_or(0))
            }
        }
    }

    fn tag_check(&self, a: &Scalar) {
        let ok = matches!(
            (self, a),
            (BaseRing::Integers, Scalar::Int(_))
                | (BaseRing::Rationals, Scalar::Rat(_))
                | (BaseRing::PrimeField(_), Scalar::Fp(_))
        );
        assert!(ok, "scalar {a:?} does not belong to ring {self:?}");
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.tag_check(a);
        self.tag_check(b);
        match (self, a, b) {
            (BaseRing::Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            (BaseRing::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (BaseRing::PrimeField(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp((x + y) % (*p as u64))
            }
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.tag_check(a);
        match (self, a) {
            (BaseRing::Integers, Scalar::Int(x)) => Scalar::Int(-x),
            (BaseRing::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (BaseRing::PrimeField(p), Scalar::Fp(x)) => {
                let p = *p as u64;
                Scalar::Fp(if *x == 0 { 0 } else { p - x })
            }
            _ => unreachable!(),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.tag_check(a);
        self.tag_check(b);
        match (self, a, b) {
            (BaseRing::Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            (BaseRing::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            // p < 2^31 so the product of two representatives fits in u64.
            (BaseRing::PrimeField(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp((x * y) % (*p as u64))
            }
            _ => unreachable!(),
        }
    }

    pub fn is_zero(&self, a: &Scalar) -> bool {
        self.tag_check(a);
        match a {
            Scalar::Int(x) => x.is_zero(),
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Fp(x) => *x == 0,
        }
    }

    pub fn is_one(&self, a: &Scalar) -> bool {
        self.tag_check(a);
        match a {
            Scalar::Int(x) => x.is_one(),
            Scalar::Rat(x) => x.is_one(),
            Scalar::Fp(x) => *x == 1,
        }
    }

    /// Multiplicative inverse.  `None` when the element is not a unit.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        self.tag_check(a);
        match (self, a) {
            (BaseRing::Integers, Scalar::Int(x)) => {
                if x.is_one() {
                    Some(Scalar::Int(BigInt::one()))
                } else if (-x).is_one() {
                    Some(Scalar::Int(-BigInt::one()))
                } else {
                    None
                }
            }
            (BaseRing::Rationals, Scalar::Rat(x)) => {
                if x.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(x.recip()))
                }
            }
            (BaseRing::PrimeField(p), Scalar::Fp(x)) => {
                if *x == 0 {
                    None
                } else {
                    Some(Scalar::Fp(mod_inverse(*x, *p as u64)))
                }
            }
            _ => unreachable!(),
        }
    }

    /// Exact division: returns `a / b` when `b` divides `a` in the ring.
    pub fn div_exact(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        self.tag_check(a);
        self.tag_check(b);
        if self.is_zero(b) {
            return None;
        }
        match (self, a, b) {
            (BaseRing::Integers, Scalar::Int(x), Scalar::Int(y)) => {
                let (q, r) = x.div_rem(y);
                if r.is_zero() {
                    Some(Scalar::Int(q))
                } else {
                    None
                }
            }
            _ => Some(self.mul(a, &self.inv(b).unwrap())),
        }
    }

    /// Integer-like magnitude used for pivot selection over Z.
    pub fn abs_bigint(&self, a: &Scalar) -> BigInt {
        match a {
            Scalar::Int(x) => x.abs(),
            _ => panic!("abs_bigint is only meaningful over the integers"),
        }
    }

    pub fn render(&self) -> String {
        match self {
            BaseRing::Integers => "Z".to_string(),
            BaseRing::Rationals => "Q".to_string(),
            BaseRing::PrimeField(p) => format!("Fp {p}"),
        }
    }
}

/// A scalar value belonging to one of the three base rings.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Int(BigInt),
    Rat(BigRational),
    Fp(u64),
}

impl Scalar {
    /// The underlying integer, for scalars known to be integral.
    pub fn expect_int(&self) -> &BigInt {
        match self {
            Scalar::Int(x) => x,
            _ => panic!("expected an integer scalar, got {self:?}"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(x) => write!(f, "{x}"),
            Scalar::Rat(x) => write!(f, "{x}"),
            Scalar::Fp(x) => write!(f, "{x}"),
        }
    }
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // extended Euclid on signed 128-bit; p < 2^31 keeps everything in range
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "{a} is not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert_eq!(BaseRing::prime_field(4), Err(RingError::NotPrime(4)));
        assert_eq!(BaseRing::prime_field(1), Err(RingError::NotPrime(1)));
        assert!(BaseRing::prime_field(2).is_ok());
        assert!(BaseRing::prime_field(2147483647).is_ok()); // 2^31 - 1 is prime
    }

    #[test]
    fn field_inverses() {
        let f7 = BaseRing::prime_field(7).unwrap();
        for v in 1..7 {
            let x = f7.from_i64(v);
            let y = f7.inv(&x).unwrap();
            assert!(f7.is_one(&f7.mul(&x, &y)));
        }
        assert_eq!(f7.inv(&f7.zero()), None);

        let q = BaseRing::Rationals;
        let half = q.inv(&q.from_i64(2)).unwrap();
        assert_eq!(q.mul(&half, &q.from_i64(4)), q.from_i64(2));
    }

    #[test]
    fn integer_units_and_exact_division() {
        let z = BaseRing::Integers;
        assert_eq!(z.inv(&z.from_i64(-1)), Some(z.from_i64(-1)));
        assert_eq!(z.inv(&z.from_i64(2)), None);
        assert_eq!(z.div_exact(&z.from_i64(6), &z.from_i64(-3)), Some(z.from_i64(-2)));
        assert_eq!(z.div_exact(&z.from_i64(7), &z.from_i64(2)), None);
    }

    #[test]
    fn negative_representatives_normalize_mod_p() {
        let f5 = BaseRing::prime_field(5).unwrap();
        assert_eq!(f5.from_i64(-1), Scalar::Fp(4));
        assert_eq!(f5.from_i64(-10), Scalar::Fp(0));
        assert_eq!(f5.from_bigint(&BigInt::from(-3)), Scalar::Fp(2));
    }
}
