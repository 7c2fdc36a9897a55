//! Exact scalar arithmetic: arbitrary-precision rationals (the default,
//! certified path) and prime fields `Z/p` (for cross-checking).
//!
//! All computations in this crate are exact; no floating point anywhere.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::fmt;

/// Which ground field a computation runs over.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum FieldSpec {
    /// The rational numbers, exact.
    Rationals,
    /// The prime field `Z/p`.
    Prime(u64),
}

impl FieldSpec {
    pub fn zero(self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Fp { p, v: 0 },
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(p) => Scalar::Fp { p, v: 1 % p },
        }
    }

    pub fn from_int(self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rationals => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let m = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { p, v: m }
            }
        }
    }

    pub fn from_ratio(self, num: i64, den: i64) -> Option<Scalar> {
        if den == 0 {
            return None;
        }
        match self {
            FieldSpec::Rationals => Some(Scalar::Rat(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            FieldSpec::Prime(_) => {
                let d = self.from_int(den);
                let inv = d.inv()?;
                Some(&self.from_int(num) * &inv)
            }
        }
    }

    /// Characteristic of the field: 0 for the rationals, p for `Z/p`.
    pub fn characteristic(self) -> u64 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::Prime(p) => p,
        }
    }

    pub fn name(self) -> String {
        match self {
            FieldSpec::Rationals => "Q".to_string(),
            FieldSpec::Prime(p) => format!("F{p}"),
        }
    }
}

/// An element of the chosen ground field.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp { p: u64, v: u64 },
}

fn fp_mul(p: u64, a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn fp_pow(p: u64, mut base: u64, mut exp: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fp_mul(p, acc, base);
        }
        base = fp_mul(p, base, base);
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rationals,
            Scalar::Fp { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { p, v } => *v == 1 % *p,
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: fp_pow(*p, *v, *p - 2),
            },
        })
    }

    /// Parses `n` or `n/d` with optional sign. Rejects anything else.
    pub fn parse(field: FieldSpec, text: &str) -> Option<Scalar> {
        let text = text.trim();
        if let Some((n, d)) = text.split_once('/') {
            let num: i64 = n.trim().parse().ok()?;
            let den: i64 = d.trim().parse().ok()?;
            field.from_ratio(num, den)
        } else {
            let n: i64 = text.parse().ok()?;
            Some(field.from_int(n))
        }
    }
}

fn check_same(a: FieldSpec, b: FieldSpec) {
    assert_eq!(a, b, "scalar arithmetic across different fields");
}

impl std::ops::Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        check_same(self.field(), rhs.field());
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                p: *p,
                v: (a + b) % p,
            },
            _ => unreachable!(),
        }
    }
}

impl std::ops::Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        check_same(self.field(), rhs.field());
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { v: b, .. }) => Scalar::Fp {
                p: *p,
                v: fp_mul(*p, *a, *b),
            },
            _ => unreachable!(),
        }
    }
}

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: (p - v) % p,
            },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else if r.is_negative() {
                    write!(f, "-{}/{}", r.numer().abs(), r.denom())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => write!(f, "{v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let q = FieldSpec::Rationals;
        let half = q.from_ratio(1, 2).unwrap();
        let third = q.from_ratio(1, 3).unwrap();
        let sum = &half + &third;
        assert_eq!(sum, q.from_ratio(5, 6).unwrap());
        assert_eq!(&half * &half.inv().unwrap(), q.one());
        assert!(q.zero().inv().is_none());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f7 = FieldSpec::Prime(7);
        let a = f7.from_int(3);
        let b = f7.from_int(5);
        assert_eq!(&a * &b, f7.from_int(1));
        assert_eq!(&a + &b, f7.from_int(1));
        assert_eq!(a.inv().unwrap(), f7.from_int(5));
        assert_eq!(f7.from_int(-1), f7.from_int(6));
    }

    #[test]
    fn parse_scalars() {
        let q = FieldSpec::Rationals;
        assert_eq!(Scalar::parse(q, "3").unwrap(), q.from_int(3));
        assert_eq!(Scalar::parse(q, "-2/4").unwrap(), q.from_ratio(-1, 2).unwrap());
        assert!(Scalar::parse(q, "1.5").is_none());
        assert!(Scalar::parse(q, "1/0").is_none());
    }

    #[test]
    fn display_round_trip() {
        let q = FieldSpec::Rationals;
        for s in ["0", "7", "-3", "1/2", "-5/3"] {
            let v = Scalar::parse(q, s).unwrap();
            assert_eq!(format!("{v}"), s);
        }
    }
}
