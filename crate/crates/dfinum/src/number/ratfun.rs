//! Rational functions over Q(i), the scalars of the operator linear algebra.

use crate::number::gaussian::GaussianRational;
use crate::number::poly::{Field, Poly, PolyG};
use std::fmt;

/// num/den with den monic and gcd(num, den) = 1.
#[derive(Clone, PartialEq)]
pub struct RationalFunction {
    num: PolyG,
    den: PolyG,
}

impl RationalFunction {
    pub fn new(num: PolyG, den: PolyG) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalFunction {
                num: Poly::zero(),
                den: Poly::one(),
            };
        }
        let g = num.gcd(&den);
        let num = num.divrem(&g).0;
        let den = den.divrem(&g).0;
        let c = den.lc().inv();
        RationalFunction {
            num: num.scale(&c),
            den: den.scale(&c),
        }
    }

    pub fn from_poly(p: PolyG) -> Self {
        RationalFunction::new(p, Poly::one())
    }

    pub fn num(&self) -> &PolyG {
        &self.num
    }

    pub fn den(&self) -> &PolyG {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }
}

impl Field for RationalFunction {
    fn zero() -> Self {
        RationalFunction {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }
    fn one() -> Self {
        RationalFunction {
            num: Poly::one(),
            den: Poly::one(),
        }
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn add(&self, other: &Self) -> Self {
        RationalFunction::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        RationalFunction::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }
    fn neg(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
    fn inv(&self) -> Self {
        assert!(!self.num.is_zero(), "inverse of zero rational function");
        RationalFunction::new(self.den.clone(), self.num.clone())
    }
}

impl RationalFunction {
    /// Shift x -> x + 1 (the shift-algebra automorphism).
    pub fn sigma_shift(&self) -> Self {
        let one = GaussianRational::one();
        RationalFunction::new(self.num.shift(&one), self.den.shift(&one))
    }

    /// d/dx by the quotient rule (the differential-algebra derivation).
    pub fn delta_diff(&self) -> Self {
        let n = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        RationalFunction::new(n, self.den.mul(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/({:?})", self.num, self.den)
    }
}
