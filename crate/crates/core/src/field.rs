//! Scalar traits and the prime field `GF(p)`.
//!
//! Everything above this module is generic over [`Field`]; orbit enumeration
//! additionally needs [`FiniteField`] to walk every element.

use std::fmt;
use std::hash::Hash;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_traits::{Inv, One, Zero};

/// Exact field scalar. Ordering is an arbitrary total order used only to make
/// canonical forms comparable.
pub trait Field:
    Copy
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Inv<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Sum
    + Product
{
    fn characteristic() -> u32;

    fn from_i64(value: i64) -> Self;

    /// Symmetric integer representative, e.g. `p - 1` renders as `-1`.
    fn to_signed(self) -> i64;
}

/// A field with finitely many elements that can be enumerated.
pub trait FiniteField: Field {
    fn order() -> u32;

    /// Bijection `0..order() -> Self`; index 0 is zero.
    fn from_index(index: u32) -> Self;

    fn index(self) -> u32;

    /// Generator of the multiplicative group.
    fn primitive_element() -> Self;

    fn elements() -> Box<dyn Iterator<Item = Self>> {
        Box::new((0..Self::order()).map(Self::from_index))
    }
}

pub const fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Residue class modulo the prime `P`, stored as `0 <= value < P`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const PRIME: () = assert!(is_prime(P), "Fp modulus must be prime");

    pub fn new(value: u32) -> Self {
        #[allow(clippy::let_unit_value)]
        let () = Self::PRIME;
        Fp(value % P)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_signed())
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Self::new(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Self::new(1)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let s = self.0 + rhs.0;
        Fp(if s >= P { s - P } else { s })
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(if self.0 >= rhs.0 { self.0 - rhs.0 } else { self.0 + P - rhs.0 })
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fp(if self.0 == 0 { 0 } else { P - self.0 })
    }
}

impl<const P: u32> Inv for Fp<P> {
    type Output = Self;
    /// Panics on zero, like integer division by zero.
    fn inv(self) -> Self {
        assert!(self.0 != 0, "inverse of zero in GF({P})");
        self.pow(P as u64 - 2)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}

impl<const P: u32> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u32> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u32> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u32> Sum for Fp<P> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

impl<const P: u32> Product for Fp<P> {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |a, b| a * b)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn characteristic() -> u32 {
        P
    }

    fn from_i64(value: i64) -> Self {
        Self::new(value.rem_euclid(P as i64) as u32)
    }

    fn to_signed(self) -> i64 {
        if self.0 as u64 * 2 > P as u64 {
            self.0 as i64 - P as i64
        } else {
            self.0 as i64
        }
    }
}

impl<const P: u32> FiniteField for Fp<P> {
    fn order() -> u32 {
        P
    }

    fn from_index(index: u32) -> Self {
        Self::new(index)
    }

    fn index(self) -> u32 {
        self.0
    }

    fn primitive_element() -> Self {
        if P == 2 {
            return Self::one();
        }
        let order = P - 1;
        let mut factors = Vec::new();
        let mut m = order;
        let mut d = 2;
        while d * d <= m {
            if m.is_multiple_of(d) {
                factors.push(d);
                while m.is_multiple_of(d) {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            factors.push(m);
        }
        (2..P)
            .map(Self::new)
            .find(|g| factors.iter().all(|&f| g.pow((order / f) as u64) != Self::one()))
            .expect("every prime field has a primitive root")
    }
}
