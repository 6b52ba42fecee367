//! Arbitrary-precision dyadic numbers `mant * 2^exp`, the midpoint type of
//! enclosures.  All operations are exact; `round` trims the mantissa to a
//! working precision and reports an upper bound on the discarded amount.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

/// Round a nonnegative bound upward a little so that later f64 arithmetic on
/// it stays an upper bound.
pub fn up(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x == 0.0 {
        0.0
    } else {
        x * (1.0 + 4.0e-15) + f64::MIN_POSITIVE
    }
}

/// Upper bound on 2^e as f64, never underflowing to zero.
pub fn pow2_up(e: i64) -> f64 {
    if e < -1070 {
        f64::MIN_POSITIVE
    } else if e > 1020 {
        f64::INFINITY
    } else {
        up((e as f64).exp2())
    }
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn from_i64(v: i64) -> Self {
        Dyadic::new(BigInt::from(v), 0)
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn neg(&self) -> Self {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn add(&self, other: &Dyadic) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as u64;
        let b = &other.mant << (other.exp - e) as u64;
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Self {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Exact conversion to a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::from(1) << (-self.exp) as u64)
        }
    }

    /// Convert a rational to a dyadic with `prec` significant bits.
    /// Returns the rounded value and an upper bound on |exact - rounded|.
    pub fn from_rational(r: &BigRational, prec: u32) -> (Self, f64) {
        if r.is_zero() {
            return (Dyadic::zero(), 0.0);
        }
        let num = r.numer();
        let den = r.denom();
        // Exact when the denominator is a power of two.
        let dz = den.trailing_zeros().unwrap_or(0);
        if (den >> dz) == BigInt::from(1) {
            return (Dyadic::new(num.clone(), -(dz as i64)), 0.0);
        }
        let nb = num.bits() as i64;
        let db = den.bits() as i64;
        // Scale so the quotient carries about prec + 2 significant bits.
        let shift = (prec as i64 + 2 - (nb - db)).max(0);
        let q = (num << shift as u64) / den;
        let d = Dyadic::new(q, -shift);
        // Truncated division: error below one unit in the last place kept.
        (d, pow2_up(-shift))
    }

    /// Round to `prec` significant bits (toward zero).  Returns the rounded
    /// value and an upper bound on the discarded magnitude.
    pub fn round(&self, prec: u32) -> (Self, f64) {
        let bits = self.mant.bits();
        if bits <= prec as u64 {
            return (self.clone(), 0.0);
        }
        let drop = (bits - prec as u64) as i64;
        let m = &self.mant >> drop as u64;
        let d = Dyadic::new(m, self.exp + drop);
        (d, pow2_up(self.exp + drop))
    }

    /// Upper bound on the absolute value.
    pub fn abs_up(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        // |mant| < 2^bits, so |self| < 2^(bits + exp).
        let hi = pow2_up(bits as i64 + self.exp);
        // Tighten with an f64 conversion when it is finite.
        match self.to_f64() {
            v if v.is_finite() => up(v.abs()).min(hi),
            _ => hi,
        }
    }

    /// Lower bound on the absolute value.
    pub fn abs_down(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let v = self.to_f64().abs();
        if v.is_finite() {
            (v * (1.0 - 4.0e-15) - f64::MIN_POSITIVE).max(0.0)
        } else {
            f64::MAX
        }
    }

    pub fn to_f64(&self) -> f64 {
        // Keep at most 64 mantissa bits to avoid BigInt->f64 overflow noise.
        let bits = self.mant.bits();
        if bits <= 64 {
            self.mant.to_f64().unwrap_or(f64::NAN) * exp2i(self.exp)
        } else {
            let drop = bits - 64;
            let m = &self.mant >> drop;
            m.to_f64().unwrap_or(f64::NAN) * exp2i(self.exp + drop as i64)
        }
    }

    pub fn cmp_abs(&self, other: &Dyadic) -> Ordering {
        let d = self.abs_dyadic().sub(&other.abs_dyadic());
        if d.is_zero() {
            Ordering::Equal
        } else if d.mant.is_negative() {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }

    fn abs_dyadic(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
        }
    }

    /// Decimal string with `digits` fractional digits, rounded to nearest.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scaled = self.to_rational() * BigRational::from_integer(pow10(digits));
        let rounded = scaled.round().to_integer();
        let neg = rounded.is_negative();
        let mut s = rounded.abs().to_string();
        if s.len() <= digits {
            s = format!("{}{}", "0".repeat(digits - s.len() + 1), s);
        }
        let cut = s.len() - digits;
        let (int, frac) = s.split_at(cut);
        let body = if digits == 0 {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

fn exp2i(e: i64) -> f64 {
    (e as f64).exp2()
}

pub fn pow10(d: usize) -> BigInt {
    BigInt::from(10u32).pow(d as u32)
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.mant, self.exp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn arithmetic_is_exact() {
        let a = Dyadic::new(BigInt::from(3), -2); // 0.75
        let b = Dyadic::new(BigInt::from(5), -1); // 2.5
        assert_eq!(a.add(&b).to_rational(), rat(13, 4));
        assert_eq!(a.mul(&b).to_rational(), rat(15, 8));
        assert_eq!(a.sub(&b).to_rational(), rat(-7, 4));
    }

    #[test]
    fn from_rational_error_bound() {
        let r = rat(1, 3);
        let (d, err) = Dyadic::from_rational(&r, 100);
        let diff = (r - d.to_rational()).abs();
        assert!(diff.to_f64().unwrap() <= err);
        assert!(err < 1e-29);
    }

    #[test]
    fn dyadic_rational_converts_exactly() {
        let (d, err) = Dyadic::from_rational(&rat(-7, 16), 8);
        assert_eq!(err, 0.0);
        assert_eq!(d.to_rational(), rat(-7, 16));
    }

    #[test]
    fn round_reports_dropped_magnitude() {
        let big = Dyadic::new(BigInt::from(1) << 200u32 | BigInt::from(12345), -200);
        let (r, err) = big.round(64);
        let diff = (big.to_rational() - r.to_rational()).abs();
        assert!(diff.to_f64().unwrap() <= err);
    }

    #[test]
    fn decimal_printing() {
        let (d, _) = Dyadic::from_rational(&rat(1, 4), 10);
        assert_eq!(d.to_decimal(3), "0.250");
        let (d, _) = Dyadic::from_rational(&rat(-31, 10), 64);
        assert_eq!(d.to_decimal(1), "-3.1");
    }
}
