//! The base field k: arbitrary-precision rationals or a prime field F_p.
//!
//! Every value is exact; no floating point enters any arithmetic path.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which base field coefficients live in.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum BaseField {
    Rationals,
    /// F_p for a prime p.
    Prime(u64),
}

impl BaseField {
    /// Validates the field descriptor (primality of p).
    pub fn validate(self) -> Result<Self> {
        match self {
            BaseField::Rationals => Ok(self),
            BaseField::Prime(p) => {
                if is_prime_u64(p) {
                    Ok(self)
                } else {
                    Err(Error::NotPrime(p))
                }
            }
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Coeff {
        match self {
            BaseField::Rationals => Coeff::Rat(BigRational::zero()),
            BaseField::Prime(p) => Coeff::Fp { v: 0, p },
        }
    }

    pub fn one(self) -> Coeff {
        match self {
            BaseField::Rationals => Coeff::Rat(BigRational::one()),
            BaseField::Prime(p) => Coeff::Fp { v: 1 % p, p },
        }
    }

    pub fn from_i64(self, n: i64) -> Coeff {
        match self {
            BaseField::Rationals => Coeff::Rat(BigRational::from(BigInt::from(n))),
            BaseField::Prime(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                Coeff::Fp { v: r, p }
            }
        }
    }

    /// Maps a rational a/b into the field (reduction mod p for F_p).
    pub fn from_rational(self, q: &BigRational) -> Result<Coeff> {
        match self {
            BaseField::Rationals => Ok(Coeff::Rat(q.clone())),
            BaseField::Prime(p) => {
                let num = bigint_mod_u64(q.numer(), p);
                let den = bigint_mod_u64(q.denom(), p);
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                let inv = mod_inverse(den, p).ok_or(Error::DivisionByZero)?;
                Ok(Coeff::Fp {
                    v: mulmod(num, inv, p),
                    p,
                })
            }
        }
    }

    /// The elements of the field with naive height at most `h`
    /// (|numerator| <= h and |denominator| <= h, in lowest terms), zero first,
    /// then in a fixed deterministic order. For F_p the height bound is
    /// ignored and the whole field is returned.
    pub fn elements_of_height(self, h: u64) -> Vec<Coeff> {
        match self {
            BaseField::Prime(p) => (0..p).map(|v| Coeff::Fp { v, p }).collect(),
            BaseField::Rationals => {
                let mut out = vec![self.zero()];
                for den in 1..=h {
                    for num in 1..=h {
                        if num_integer::gcd(num, den) != 1 {
                            continue;
                        }
                        let q = BigRational::new(BigInt::from(num), BigInt::from(den));
                        out.push(Coeff::Rat(q.clone()));
                        out.push(Coeff::Rat(-q));
                    }
                }
                out
            }
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "q"),
            BaseField::Prime(p) => write!(f, "f{p}"),
        }
    }
}

/// An exact element of the base field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Coeff {
    Rat(BigRational),
    Fp { v: u64, p: u64 },
}

impl Coeff {
    pub fn field(&self) -> BaseField {
        match self {
            Coeff::Rat(_) => BaseField::Rationals,
            Coeff::Fp { p, .. } => BaseField::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rat(q) => q.is_zero(),
            Coeff::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rat(q) => q.is_one(),
            Coeff::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a + b),
            (Coeff::Fp { v: a, p }, Coeff::Fp { v: b, p: p2 }) => {
                debug_assert_eq!(p, p2);
                Coeff::Fp {
                    v: addmod(*a, *b, *p),
                    p: *p,
                }
            }
            _ => panic!("field mismatch in coefficient arithmetic"),
        }
    }

    pub fn sub(&self, rhs: &Coeff) -> Coeff {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Rat(a) => Coeff::Rat(-a),
            Coeff::Fp { v, p } => Coeff::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
        }
    }

    pub fn mul(&self, rhs: &Coeff) -> Coeff {
        match (self, rhs) {
            (Coeff::Rat(a), Coeff::Rat(b)) => Coeff::Rat(a * b),
            (Coeff::Fp { v: a, p }, Coeff::Fp { v: b, p: p2 }) => {
                debug_assert_eq!(p, p2);
                Coeff::Fp {
                    v: mulmod(*a, *b, *p),
                    p: *p,
                }
            }
            _ => panic!("field mismatch in coefficient arithmetic"),
        }
    }

    pub fn inv(&self) -> Result<Coeff> {
        match self {
            Coeff::Rat(a) => {
                if a.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Coeff::Rat(a.recip()))
                }
            }
            Coeff::Fp { v, p } => mod_inverse(*v, *p)
                .map(|v| Coeff::Fp { v, p: *p })
                .ok_or(Error::DivisionByZero),
        }
    }

    pub fn div(&self, rhs: &Coeff) -> Result<Coeff> {
        Ok(self.mul(&rhs.inv()?))
    }

    /// Deterministic total order used for witness tie-breaking.
    pub fn cmp_key(&self, other: &Coeff) -> std::cmp::Ordering {
        match (self, other) {
            (Coeff::Fp { v: a, .. }, Coeff::Fp { v: b, .. }) => a.cmp(b),
            (Coeff::Rat(a), Coeff::Rat(b)) => a.cmp(b),
            (Coeff::Fp { .. }, Coeff::Rat(_)) => std::cmp::Ordering::Less,
            (Coeff::Rat(_), Coeff::Fp { .. }) => std::cmp::Ordering::Greater,
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rat(q) => {
                if q.denom().is_one() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Coeff::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

fn bigint_mod_u64(n: &BigInt, p: u64) -> u64 {
    let m = n % BigInt::from(p);
    let m = if m.is_negative() { m + BigInt::from(p) } else { m };
    let digits = m.to_u64_digits().1;
    digits.first().copied().unwrap_or(0)
}

fn addmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn mod_inverse(a: u64, p: u64) -> Option<u64> {
    if a % p == 0 {
        return None;
    }
    // p prime, so a^(p-2) works; extended Euclid would be equivalent.
    Some(powmod(a, p - 2, p))
}

/// Deterministic Miller-Rabin, valid for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_field_ops() {
        let f = BaseField::Rationals;
        let half = f.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        let third = f.from_rational(&BigRational::new(1.into(), 3.into())).unwrap();
        // 1/2 + 1/3 = 5/6
        let sum = half.add(&third);
        assert_eq!(sum.to_string(), "5/6");
        assert!(half.mul(&half.inv().unwrap()).is_one());
    }

    #[test]
    fn prime_field_ops() {
        let f = BaseField::Prime(7).validate().unwrap();
        let a = f.from_i64(5);
        let b = f.from_i64(4);
        assert_eq!(a.mul(&b).to_string(), "6"); // 20 mod 7
        assert!(a.mul(&a.inv().unwrap()).is_one());
        assert_eq!(f.from_i64(-1).to_string(), "6");
    }

    #[test]
    fn primality() {
        assert!(BaseField::Prime(2).validate().is_ok());
        assert!(BaseField::Prime(3).validate().is_ok());
        assert!(BaseField::Prime(1_000_000_007).validate().is_ok());
        assert_eq!(BaseField::Prime(6).validate(), Err(Error::NotPrime(6)));
        assert_eq!(BaseField::Prime(1).validate(), Err(Error::NotPrime(1)));
    }

    #[test]
    fn height_one_rationals() {
        let elems = BaseField::Rationals.elements_of_height(1);
        let shown: Vec<String> = elems.iter().map(|c| c.to_string()).collect();
        assert_eq!(shown, vec!["0", "1", "-1"]);
    }

    #[test]
    fn height_two_rationals_include_half() {
        let elems = BaseField::Rationals.elements_of_height(2);
        let shown: Vec<String> = elems.iter().map(|c| c.to_string()).collect();
        assert!(shown.contains(&"1/2".to_string()));
        assert!(shown.contains(&"-2".to_string()));
        assert_eq!(elems.len(), 7);
    }
}
