use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Serialize, Serializer};

/// A residue modulo an odd prime `p < 2^31`.
///
/// The modulus travels with the value. Mixing moduli in a binary operation
/// is a programming error and panics.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FpElem {
    value: u64,
    modulus: u64,
}

impl FpElem {
    /// Reduces `value` modulo `modulus`.
    #[inline]
    pub fn new(value: u64, modulus: u64) -> Self {
        debug_assert!((2..(1 << 31)).contains(&modulus));
        FpElem {
            value: value % modulus,
            modulus,
        }
    }

    /// Reduces a signed integer into `[0, modulus)`.
    #[inline]
    pub fn from_i64(value: i64, modulus: u64) -> Self {
        let m = modulus as i128;
        let r = (value as i128).rem_euclid(m);
        FpElem {
            value: r as u64,
            modulus,
        }
    }

    #[inline]
    pub fn zero(modulus: u64) -> Self {
        FpElem { value: 0, modulus }
    }

    #[inline]
    pub fn one(modulus: u64) -> Self {
        FpElem { value: 1, modulus }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    #[inline]
    pub fn is_one(self) -> bool {
        self.value == 1
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = FpElem::one(self.modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc *= base;
            }
            base *= base;
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via Fermat; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.modulus - 2))
        }
    }

    /// The representative of `self` or `-self` lying in `[0, p/2]`.
    pub fn canonical_sign(self) -> Self {
        let neg = -self;
        if neg.value < self.value {
            neg
        } else {
            self
        }
    }

    #[inline]
    fn check(self, other: Self) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixed moduli in Z_p arithmetic"
        );
    }
}

impl fmt::Debug for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for FpElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Serialize for FpElem {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_u64(self.value)
    }
}

impl Add for FpElem {
    type Output = FpElem;
    #[inline]
    fn add(self, rhs: FpElem) -> FpElem {
        self.check(rhs);
        let s = self.value + rhs.value;
        FpElem {
            value: if s >= self.modulus {
                s - self.modulus
            } else {
                s
            },
            modulus: self.modulus,
        }
    }
}

impl Sub for FpElem {
    type Output = FpElem;
    #[inline]
    fn sub(self, rhs: FpElem) -> FpElem {
        self.check(rhs);
        let value = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + self.modulus - rhs.value
        };
        FpElem {
            value,
            modulus: self.modulus,
        }
    }
}

impl Mul for FpElem {
    type Output = FpElem;
    #[inline]
    fn mul(self, rhs: FpElem) -> FpElem {
        self.check(rhs);
        FpElem {
            value: self.value * rhs.value % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl Div for FpElem {
    type Output = FpElem;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: FpElem) -> FpElem {
        self * rhs.inv().expect("division by zero in Z_p")
    }
}

impl Neg for FpElem {
    type Output = FpElem;
    #[inline]
    fn neg(self) -> FpElem {
        FpElem {
            value: if self.value == 0 {
                0
            } else {
                self.modulus - self.value
            },
            modulus: self.modulus,
        }
    }
}

impl AddAssign for FpElem {
    #[inline]
    fn add_assign(&mut self, rhs: FpElem) {
        *self = *self + rhs;
    }
}

impl SubAssign for FpElem {
    #[inline]
    fn sub_assign(&mut self, rhs: FpElem) {
        *self = *self - rhs;
    }
}

impl MulAssign for FpElem {
    #[inline]
    fn mul_assign(&mut self, rhs: FpElem) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signed_reduction() {
        assert_eq!(FpElem::from_i64(-15, 7).value(), 6);
        assert_eq!(FpElem::from_i64(-1, 7).value(), 6);
        assert_eq!(
            FpElem::from_i64(i64::MIN, 7).value(),
            (i64::MIN as i128).rem_euclid(7) as u64
        );
    }

    #[test]
    fn field_ops() {
        let a = FpElem::new(5, 7);
        let b = FpElem::new(4, 7);
        assert_eq!((a + b).value(), 2);
        assert_eq!((b - a).value(), 6);
        assert_eq!((a * b).value(), 6);
        assert_eq!((-a).value(), 2);
        assert_eq!((a / b * b), a);
        assert_eq!(FpElem::zero(7).inv(), None);
    }

    #[test]
    #[should_panic(expected = "mixed moduli")]
    fn mixed_moduli_panics() {
        let _ = FpElem::new(1, 7) + FpElem::new(1, 11);
    }

    #[test]
    fn canonical_sign_picks_lower_half() {
        assert_eq!(FpElem::new(4, 7).canonical_sign().value(), 3);
        assert_eq!(FpElem::new(3, 7).canonical_sign().value(), 3);
        assert_eq!(FpElem::new(0, 7).canonical_sign().value(), 0);
    }
}
