//! Dense univariate polynomials over an exact field.

use crate::number::gaussian::GaussianRational;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;

/// Exact field operations, implemented by BigRational, GaussianRational and
/// RationalFunction.
pub trait Field: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Self;
    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

impl Field for GaussianRational {
    fn zero() -> Self {
        GaussianRational::zero()
    }
    fn one() -> Self {
        GaussianRational::one()
    }
    fn is_zero(&self) -> bool {
        GaussianRational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        GaussianRational::inv(self)
    }
}

/// Coefficient list with trailing zeros trimmed; empty list is the zero
/// polynomial.
#[derive(Clone, PartialEq)]
pub struct Poly<K: Field> {
    coeffs: Vec<K>,
}

impl<K: Field> Poly<K> {
    pub fn new(mut coeffs: Vec<K>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![K::one()],
        }
    }

    pub fn constant(c: K) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial x.
    pub fn x() -> Self {
        Poly::new(vec![K::zero(), K::one()])
    }

    pub fn monomial(c: K, deg: usize) -> Self {
        let mut v = vec![K::zero(); deg + 1];
        v[deg] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[K] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> K {
        self.coeffs.get(i).cloned().unwrap_or_else(K::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; zero polynomial reports 0 via `deg`, use `is_zero` to tell apart.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn lc(&self) -> K {
        self.coeffs.last().cloned().unwrap_or_else(K::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i).add(&other.coeff(i)));
        }
        Poly::new(v)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![K::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Poly::new(v)
    }

    pub fn scale(&self, c: &K) -> Self {
        Poly::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn divrem(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero(), "polynomial division by zero");
        let mut rem = self.clone();
        let mut quo = vec![K::zero(); self.coeffs.len()];
        let dlc_inv = den.lc().inv();
        while !rem.is_zero() && rem.deg() >= den.deg() {
            let k = rem.deg() - den.deg();
            let q = rem.lc().mul(&dlc_inv);
            quo[k] = q.clone();
            rem = rem.sub(&den.mul(&Poly::monomial(q, k)));
        }
        (Poly::new(quo), rem)
    }

    pub fn rem(&self, den: &Self) -> Self {
        self.divrem(den).1
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lc().inv())
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) monic with s*self + t*other = g.
    pub fn xgcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let c = r0.lc().inv();
        (r0.scale(&c), s0.scale(&c), t0.scale(&c))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut v = Vec::with_capacity(self.coeffs.len() - 1);
        let mut k = K::one();
        let mut counter = K::one();
        for c in self.coeffs.iter().skip(1) {
            v.push(c.mul(&k));
            counter = counter.add(&K::one());
            k = counter.clone();
        }
        Poly::new(v)
    }

    pub fn eval(&self, x: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Substitute another polynomial for the variable.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// Taylor shift x -> x + c.
    pub fn shift(&self, c: &K) -> Self {
        self.compose(&Poly::new(vec![c.clone(), K::one()]))
    }
}

impl<K: Field> fmt::Debug for Poly<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

pub type PolyG = Poly<GaussianRational>;

impl PolyG {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| GaussianRational::from_i64(c)).collect())
    }

    pub fn conj(&self) -> Self {
        Poly::new(self.coeffs().iter().map(|c| c.conj()).collect())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs().iter().all(|c| c.is_real())
    }

    /// Evaluate at a nonnegative integer index.
    pub fn eval_i64(&self, n: i64) -> GaussianRational {
        self.eval(&GaussianRational::from_i64(n))
    }
}
