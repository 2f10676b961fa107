//! Scalar rings and fields used by the exact matrix routines.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Commutative ring with exact division, enough for fraction-free elimination.
pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn neg(&self) -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    /// Exact division: `Some(q)` with `q * rhs == self`, `None` otherwise.
    fn exact_div(&self, rhs: &Self) -> Option<Self>;
}

/// Ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Multiplicative inverse; `None` for zero.
    fn inv(&self) -> Option<Self>;
}

/// Arbitrary-precision rational scalar. `num_rational::BigRational` already
/// keeps the invariants we need: reduced fraction, positive denominator,
/// zero stored as 0/1.
pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational n/d; panics on d = 0 (fixture-construction helper).
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Ring for BigRational {
    fn zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn one() -> Self {
        <BigRational as One>::one()
    }
    fn is_zero(&self) -> bool {
        <BigRational as Zero>::is_zero(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        if <BigRational as Zero>::is_zero(rhs) {
            None
        } else {
            Some(self / rhs)
        }
    }
}

impl Field for BigRational {
    fn inv(&self) -> Option<Self> {
        if <BigRational as Zero>::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Element of the prime field with `P` elements; residue kept in `[0, P)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Gf<const P: u32>(u32);

pub type Gf2 = Gf<2>;
pub type Gf3 = Gf<3>;

impl<const P: u32> Gf<P> {
    pub fn new(v: i64) -> Self {
        Gf(v.rem_euclid(P as i64) as u32)
    }

    pub fn residue(&self) -> u32 {
        self.0
    }
}

impl<const P: u32> fmt::Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Ring for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn one() -> Self {
        Gf(1 % P)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
    fn neg(&self) -> Self {
        Gf((P - self.0) % P)
    }
    fn add(&self, rhs: &Self) -> Self {
        Gf((self.0 + rhs.0) % P)
    }
    fn sub(&self, rhs: &Self) -> Self {
        Gf((self.0 + P - rhs.0) % P)
    }
    fn mul(&self, rhs: &Self) -> Self {
        Gf((self.0 * rhs.0) % P)
    }
    fn exact_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self.mul(&i))
    }
}

impl<const P: u32> Field for Gf<P> {
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // P is 2 or 3 in practice; a scan is fine.
        (1..P).map(Gf::<P>).find(|c| self.mul(c).0 == 1 % P)
    }
}

/// Field tag used by serialization and the CLI.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FieldTag {
    Q,
    F2,
    F3,
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Q => write!(f, "Q"),
            FieldTag::F2 => write!(f, "F2"),
            FieldTag::F3 => write!(f, "F3"),
        }
    }
}

impl FieldTag {
    pub fn parse(s: &str) -> Result<FieldTag> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q" => Ok(FieldTag::Q),
            "f2" | "gf2" | "2" => Ok(FieldTag::F2),
            "f3" | "gf3" | "3" => Ok(FieldTag::F3),
            other => Err(Error::Schema(format!("unknown field tag `{other}`"))),
        }
    }
}

/// True when the rational is -1, 0 or 1.
pub fn is_signed_unit_or_zero(x: &Rat) -> bool {
    x.is_integer() && x.numer().abs() <= BigInt::one()
}
