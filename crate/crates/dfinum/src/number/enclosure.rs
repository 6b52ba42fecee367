//! Complex midpoint-radius enclosures.  The midpoint is a pair of dyadics,
//! the radius a machine float handled with outward rounding, so every
//! operation returns a disk containing the exact image of its input disks.

use crate::number::dyadic::{pow2_up, up, Dyadic};
use crate::number::gaussian::GaussianRational;
use num_rational::BigRational;
use std::fmt;

#[derive(Clone, Debug)]
pub struct Enclosure {
    re: Dyadic,
    im: Dyadic,
    rad: f64,
    prec: u32,
}

impl Enclosure {
    pub fn exact_dyadic(re: Dyadic, im: Dyadic, prec: u32) -> Self {
        Enclosure {
            re,
            im,
            rad: 0.0,
            prec,
        }
    }

    pub fn zero(prec: u32) -> Self {
        Enclosure::exact_dyadic(Dyadic::zero(), Dyadic::zero(), prec)
    }

    /// Enclose an exact Gaussian rational.  Radius is zero whenever both
    /// components are dyadic rationals.
    pub fn from_exact(x: &GaussianRational, prec: u32) -> Self {
        let (re, e1) = Dyadic::from_rational(&x.re, prec);
        let (im, e2) = Dyadic::from_rational(&x.im, prec);
        Enclosure {
            re,
            im,
            rad: up(e1 + e2),
            prec,
        }
    }

    pub fn from_rational(x: &BigRational, prec: u32) -> Self {
        let (re, e1) = Dyadic::from_rational(x, prec);
        Enclosure {
            re,
            im: Dyadic::zero(),
            rad: up(e1),
            prec,
        }
    }

    pub fn with_radius(mut self, rad: f64) -> Self {
        self.rad = rad;
        self
    }

    pub fn re(&self) -> &Dyadic {
        &self.re
    }

    pub fn im(&self) -> &Dyadic {
        &self.im
    }

    pub fn rad(&self) -> f64 {
        self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.rad == 0.0
    }

    fn join_prec(&self, other: &Enclosure) -> u32 {
        self.prec.max(other.prec)
    }

    fn rounded(re: Dyadic, im: Dyadic, rad: f64, prec: u32) -> Self {
        let (re, e1) = re.round(prec);
        let (im, e2) = im.round(prec);
        Enclosure {
            re,
            im,
            rad: up(rad + e1 + e2),
            prec,
        }
    }

    pub fn add(&self, other: &Enclosure) -> Self {
        let prec = self.join_prec(other);
        Enclosure::rounded(
            self.re.add(&other.re),
            self.im.add(&other.im),
            self.rad + other.rad,
            prec,
        )
    }

    pub fn sub(&self, other: &Enclosure) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Enclosure {
            re: self.re.neg(),
            im: self.im.neg(),
            rad: self.rad,
            prec: self.prec,
        }
    }

    /// Upper bound on |midpoint|.
    pub fn mid_abs_up(&self) -> f64 {
        let r = self.re.abs_up();
        let i = self.im.abs_up();
        up((r * r + i * i).sqrt())
    }

    /// Upper bound on |value| over the whole disk.
    pub fn abs_up(&self) -> f64 {
        up(self.mid_abs_up() + self.rad)
    }

    /// Lower bound on |value| over the whole disk (0 if the disk may contain 0).
    pub fn abs_down(&self) -> f64 {
        let r = self.re.abs_down();
        let i = self.im.abs_down();
        let m = (r * r + i * i).sqrt() * (1.0 - 4.0e-15);
        (m - self.rad).max(0.0)
    }

    pub fn mul(&self, other: &Enclosure) -> Self {
        let prec = self.join_prec(other);
        // (a+bi)(c+di), exact on midpoints.
        let re = self.re.mul(&other.re).sub(&self.im.mul(&other.im));
        let im = self.re.mul(&other.im).add(&self.im.mul(&other.re));
        let m1 = self.mid_abs_up();
        let m2 = other.mid_abs_up();
        let rad = m1 * other.rad + m2 * self.rad + self.rad * other.rad;
        Enclosure::rounded(re, im, up(rad), prec)
    }

    pub fn mul_exact(&self, c: &GaussianRational) -> Self {
        self.mul(&Enclosure::from_exact(c, self.prec))
    }

    pub fn div_exact(&self, c: &GaussianRational) -> Self {
        self.mul_exact(&c.inv())
    }

    /// Widen the radius by `extra` (outward).
    pub fn widen(&self, extra: f64) -> Self {
        let mut e = self.clone();
        e.rad = up(e.rad + extra);
        e
    }

    /// True if the exact point x lies in this disk, up to a rounding slack
    /// of 2^(4-prec) at the boundary.
    pub fn contains_exact(&self, x: &GaussianRational) -> bool {
        let xe = Enclosure::from_exact(x, self.prec.max(64));
        up(self.mid_dist_up(&xe) + xe.rad) <= self.rad + pow2_up(-(self.prec as i64) + 4)
    }

    /// True if the two disks certainly intersect.
    pub fn intersects(&self, other: &Enclosure) -> bool {
        let d = self.sub(other);
        // d's radius already includes both input radii, so the midpoints are
        // closer than rad(self) + rad(other) iff |mid(d)| <= that sum.
        d.re.to_f64().hypot(d.im.to_f64()) <= self.rad + other.rad + d.rad
    }

    /// Distance upper bound between the midpoints.
    pub fn mid_dist_up(&self, other: &Enclosure) -> f64 {
        let dr = self.re.sub(&other.re);
        let di = self.im.sub(&other.im);
        up(dr.abs_up().hypot(di.abs_up()))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// Decimal rendering that never prints midpoint digits below the radius
    /// magnitude; the radius is shown in 2-digit scientific form.
    pub fn to_decimal(&self, digits: usize) -> String {
        let printable = if self.rad == 0.0 {
            digits
        } else {
            let safe = (-self.rad.log10()).floor();
            if safe <= 0.0 {
                0
            } else {
                digits.min(safe as usize)
            }
        };
        let re = self.re.to_decimal(printable);
        let body = if self.im.is_zero() {
            re
        } else {
            let im = self.im.to_decimal(printable);
            if im.starts_with('-') {
                format!("{re} - {}*i", &im[1..])
            } else {
                format!("{re} + {im}*i")
            }
        };
        if self.rad == 0.0 {
            format!("{body} (exact)")
        } else {
            format!("{body} ± {:.1e}", self.rad)
        }
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(((self.prec as f64) * 0.301) as usize))
    }
}

/// Tagged union of an exact Gaussian rational and an enclosure; models the
/// split between the operator field and the value ring.
#[derive(Clone, Debug)]
pub enum NumberValue {
    Exact(GaussianRational),
    Approx(Enclosure),
}

impl NumberValue {
    pub fn zero() -> Self {
        NumberValue::Exact(GaussianRational::zero())
    }

    pub fn as_enclosure(&self, prec: u32) -> Enclosure {
        match self {
            NumberValue::Exact(x) => Enclosure::from_exact(x, prec),
            NumberValue::Approx(e) => e.clone(),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, NumberValue::Exact(_))
    }

    pub fn exact(&self) -> Option<&GaussianRational> {
        match self {
            NumberValue::Exact(x) => Some(x),
            NumberValue::Approx(_) => None,
        }
    }

    pub fn add(&self, other: &NumberValue, prec: u32) -> NumberValue {
        match (self, other) {
            (NumberValue::Exact(a), NumberValue::Exact(b)) => NumberValue::Exact(a + b),
            _ => NumberValue::Approx(self.as_enclosure(prec).add(&other.as_enclosure(prec))),
        }
    }

    pub fn mul(&self, other: &NumberValue, prec: u32) -> NumberValue {
        match (self, other) {
            (NumberValue::Exact(a), NumberValue::Exact(b)) => NumberValue::Exact(a * b),
            _ => NumberValue::Approx(self.as_enclosure(prec).mul(&other.as_enclosure(prec))),
        }
    }

    pub fn mul_exact(&self, c: &GaussianRational) -> NumberValue {
        match self {
            NumberValue::Exact(a) => NumberValue::Exact(a * c),
            NumberValue::Approx(e) => NumberValue::Approx(e.mul_exact(c)),
        }
    }

    pub fn div_exact(&self, c: &GaussianRational) -> NumberValue {
        self.mul_exact(&c.inv())
    }

    pub fn neg(&self) -> NumberValue {
        match self {
            NumberValue::Exact(a) => NumberValue::Exact(-a),
            NumberValue::Approx(e) => NumberValue::Approx(e.neg()),
        }
    }

    pub fn conj(&self) -> NumberValue {
        match self {
            NumberValue::Exact(a) => NumberValue::Exact(a.conj()),
            NumberValue::Approx(e) => NumberValue::Approx(Enclosure {
                re: e.re.clone(),
                im: e.im.neg(),
                rad: e.rad,
                prec: e.prec,
            }),
        }
    }
}
