//! Exact coefficient fields: the rationals and prime fields `F_p`.
//!
//! Coefficients are stored as `BigRational`; over `F_p` they are kept
//! reduced to an integer in `[0, p)`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::group::parse_rational;

pub type Coeff = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if p < 2
            || (2..)
                .take_while(|d| d * d <= p)
                .any(|d| p.is_multiple_of(d))
        {
            return Err(Error::Parse(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn reduce(&self, x: &BigRational) -> Result<Coeff> {
        match self {
            Field::Rationals => Ok(x.clone()),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let n = x.numer().mod_floor(&p);
                let d = x.denom().mod_floor(&p);
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let d_inv = mod_inverse(&d, &p).ok_or(Error::DivisionByZero)?;
                Ok(BigRational::from_integer((n * d_inv).mod_floor(&p)))
            }
        }
    }

    pub fn from_i64(&self, n: i64) -> Coeff {
        self.reduce(&BigRational::from_integer(n.into()))
            .expect("integers reduce")
    }

    pub fn zero(&self) -> Coeff {
        BigRational::zero()
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn parse(&self, s: &str) -> Result<Coeff> {
        self.reduce(&parse_rational(s)?)
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.wrap(a + b)
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.wrap(a - b)
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.wrap(a * b)
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        self.wrap(-a)
    }

    pub fn inv(&self, a: &Coeff) -> Result<Coeff> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        match self {
            Field::Rationals => Ok(a.recip()),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let inv = mod_inverse(a.numer(), &p).ok_or(Error::DivisionByZero)?;
                Ok(BigRational::from_integer(inv))
            }
        }
    }

    pub fn pow(&self, a: &Coeff, e: i64) -> Result<Coeff> {
        if e < 0 {
            return self.pow(&self.inv(a)?, -e);
        }
        let mut base = a.clone();
        let mut acc = self.one();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// A `k`-th root of `a` in the field, if one exists.
    pub fn root(&self, a: &Coeff, k: u64) -> Option<Coeff> {
        if k == 1 || a.is_zero() {
            return Some(a.clone());
        }
        match self {
            Field::Rationals => {
                let n = int_root(a.numer(), k)?;
                let d = int_root(a.denom(), k)?;
                Some(BigRational::new(n, d))
            }
            Field::Prime(p) => (1..*p)
                .map(|x| BigRational::from_integer(x.into()))
                .find(|x| self.pow(x, k as i64).ok().as_ref() == Some(a)),
        }
    }

    fn wrap(&self, x: BigRational) -> Coeff {
        match self {
            Field::Rationals => x,
            Field::Prime(p) => {
                BigRational::from_integer(x.to_integer().mod_floor(&BigInt::from(*p)))
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(p);
    e.gcd.is_one().then(|| e.x.mod_floor(p))
}

fn int_root(n: &BigInt, k: u64) -> Option<BigInt> {
    if n.is_negative() {
        return (k % 2 == 1).then(|| int_root(&-n, k).map(|r| -r)).flatten();
    }
    let guess = n.to_f64()?.powf(1.0 / k as f64).round();
    let g = BigInt::from(guess as i64);
    (-1i64..=1)
        .map(|d| &g + d)
        .find(|r| !r.is_negative() && num_traits::pow(r.clone(), k as usize) == *n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Coeff {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(3).unwrap();
        assert_eq!(f.parse("1/2").unwrap(), q(2, 1));
        assert_eq!(f.add(&q(2, 1), &q(2, 1)), q(1, 1));
        assert_eq!(f.inv(&q(2, 1)).unwrap(), q(2, 1));
        assert_eq!(f.pow(&q(2, 1), -3).unwrap(), q(2, 1));
        assert!(f.parse("1/3").is_err());
        let f2 = Field::prime(2).unwrap();
        assert_eq!(f2.add(&f2.one(), &f2.one()), f2.zero());
    }

    #[test]
    fn non_primes_rejected() {
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(7).is_ok());
    }

    #[test]
    fn roots() {
        let f = Field::Rationals;
        assert_eq!(f.root(&q(4, 9), 2), Some(q(2, 3)));
        assert_eq!(f.root(&q(2, 1), 2), None);
        assert_eq!(f.root(&q(-8, 1), 3), Some(q(-2, 1)));
        let f5 = Field::prime(5).unwrap();
        let r = f5.root(&q(4, 1), 2).unwrap();
        assert_eq!(f5.mul(&r, &r), q(4, 1));
        assert_eq!(f5.root(&q(2, 1), 2), None);
    }
}
