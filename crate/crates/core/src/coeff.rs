//! Coefficient rings for the sparse algebras: exact rationals and doubles.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

/// Shorthand for the rational `num/den`.
pub fn q(num: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn q_to_f64(x: &Q) -> f64 {
    ToPrimitive::to_f64(x).unwrap_or_else(|| {
        // ratio of huge integers: scale down both sides
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Renders `p/q`, or just `p` for integers.
pub fn q_to_string(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn q_pow(x: &Q, e: u32) -> Q {
    let mut acc = Q::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

pub fn q_abs(x: &Q) -> Q {
    x.abs()
}

/// Scalars an algebra element can carry.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    fn from_q(x: &Q) -> Self;
    fn to_f64(&self) -> f64;
}

impl Coeff for Q {
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
    fn to_f64(&self) -> f64 {
        q_to_f64(self)
    }
}

impl Coeff for f64 {
    fn from_q(x: &Q) -> Self {
        q_to_f64(x)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
}
