use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use super::FpElem;

/// An element `a + b√Δ` of `K_p = Z_p(√Δ)`.
///
/// `Δ` is stored with each element and must agree across binary operations.
/// When `Δ` is a nonresidue this is the field with `p²` elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Fp2Elem {
    pub a: FpElem,
    pub b: FpElem,
    pub delta: FpElem,
}

impl Fp2Elem {
    pub fn new(a: FpElem, b: FpElem, delta: FpElem) -> Self {
        assert_eq!(a.modulus(), b.modulus(), "mixed moduli in K_p element");
        assert_eq!(a.modulus(), delta.modulus(), "mixed moduli in K_p element");
        Fp2Elem { a, b, delta }
    }

    /// Embeds a base-field element.
    pub fn from_base(a: FpElem, delta: FpElem) -> Self {
        Fp2Elem::new(a, FpElem::zero(a.modulus()), delta)
    }

    pub fn one(delta: FpElem) -> Self {
        Fp2Elem::from_base(FpElem::one(delta.modulus()), delta)
    }

    /// `√Δ` itself.
    pub fn sqrt_delta(delta: FpElem) -> Self {
        let m = delta.modulus();
        Fp2Elem::new(FpElem::zero(m), FpElem::one(m), delta)
    }

    pub fn modulus(&self) -> u64 {
        self.delta.modulus()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    /// Lies in the base field `Z_p`.
    pub fn in_base_field(&self) -> bool {
        self.b.is_zero()
    }

    /// `a − b√Δ`; the Frobenius image when `Δ` is a nonresidue.
    pub fn conj(&self) -> Self {
        Fp2Elem {
            a: self.a,
            b: -self.b,
            delta: self.delta,
        }
    }

    /// `a² − Δb²`.
    pub fn norm(&self) -> FpElem {
        self.a * self.a - self.delta * self.b * self.b
    }

    pub fn scale(&self, k: FpElem) -> Self {
        Fp2Elem {
            a: self.a * k,
            b: self.b * k,
            delta: self.delta,
        }
    }

    /// `None` when the norm vanishes (zero, or a zero divisor if `Δ` is a square).
    pub fn inv(&self) -> Option<Self> {
        let n = self.norm().inv()?;
        Some(self.conj().scale(n))
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = *self;
        let mut acc = Fp2Elem::one(self.delta);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }

    #[inline]
    fn check(&self, other: &Self) {
        assert_eq!(self.delta, other.delta, "mixed Δ in K_p arithmetic");
    }
}

impl fmt::Debug for Fp2Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}√{} (mod {})",
            self.a,
            self.b,
            self.delta,
            self.modulus()
        )
    }
}

impl Add for Fp2Elem {
    type Output = Fp2Elem;
    fn add(self, rhs: Fp2Elem) -> Fp2Elem {
        self.check(&rhs);
        Fp2Elem {
            a: self.a + rhs.a,
            b: self.b + rhs.b,
            delta: self.delta,
        }
    }
}

impl Sub for Fp2Elem {
    type Output = Fp2Elem;
    fn sub(self, rhs: Fp2Elem) -> Fp2Elem {
        self.check(&rhs);
        Fp2Elem {
            a: self.a - rhs.a,
            b: self.b - rhs.b,
            delta: self.delta,
        }
    }
}

impl Mul for Fp2Elem {
    type Output = Fp2Elem;
    fn mul(self, rhs: Fp2Elem) -> Fp2Elem {
        self.check(&rhs);
        Fp2Elem {
            a: self.a * rhs.a + self.b * rhs.b * self.delta,
            b: self.a * rhs.b + self.b * rhs.a,
            delta: self.delta,
        }
    }
}

impl Neg for Fp2Elem {
    type Output = Fp2Elem;
    fn neg(self) -> Fp2Elem {
        Fp2Elem {
            a: -self.a,
            b: -self.b,
            delta: self.delta,
        }
    }
}
