//! Operators with rational-function coefficients: the scalars of LCLM and
//! ansatz computations.  Only used internally; public results are cleared
//! back to polynomial coefficients.

use crate::number::poly::{Field, Poly, PolyG};
use crate::number::ratfun::RationalFunction;
use crate::ore::{Operator, OreAlgebra};
use std::marker::PhantomData;

#[derive(Clone, PartialEq, Debug)]
pub struct RatOp<A: OreAlgebra> {
    coeffs: Vec<RationalFunction>,
    _alg: PhantomData<A>,
}

impl<A: OreAlgebra> RatOp<A> {
    pub fn new(mut coeffs: Vec<RationalFunction>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        RatOp {
            coeffs,
            _alg: PhantomData,
        }
    }

    pub fn zero() -> Self {
        RatOp::new(vec![])
    }

    pub fn one() -> Self {
        RatOp::new(vec![RationalFunction::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, j: usize) -> RationalFunction {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(RationalFunction::zero)
    }

    pub fn coeffs(&self) -> &[RationalFunction] {
        &self.coeffs
    }

    pub fn lc(&self) -> RationalFunction {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(RationalFunction::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        RatOp::new((0..n).map(|j| self.coeff(j).add(&other.coeff(j))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatOp::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    /// Left multiplication by the generator.
    pub fn gen_mul(&self) -> Self {
        let mut out = vec![RationalFunction::zero(); self.coeffs.len() + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            out[j + 1] = out[j + 1].add(&A::sigma_rf(c));
            out[j] = out[j].add(&A::delta_rf(c));
        }
        RatOp::new(out)
    }

    /// Left multiplication by a scalar rational function.
    pub fn scale(&self, c: &RationalFunction) -> Self {
        RatOp::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    /// theta^k applied to sigma, k times, on a scalar.
    fn sigma_pow(c: &RationalFunction, k: usize) -> RationalFunction {
        let mut out = c.clone();
        for _ in 0..k {
            out = A::sigma_rf(&out);
        }
        out
    }

    /// Monomial product q * theta^k * self.
    fn mono_mul(&self, q: &RationalFunction, k: usize) -> Self {
        let mut acc = self.clone();
        for _ in 0..k {
            acc = acc.gen_mul();
        }
        acc.scale(q)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut acc = RatOp::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            acc = acc.add(&other.mono_mul(a, i));
        }
        acc
    }

    /// Right division: self = quo * den + rem with order(rem) < order(den).
    pub fn divrem(&self, den: &Self) -> (Self, Self) {
        assert!(!den.is_zero(), "division by zero operator");
        let mut rem = self.clone();
        let mut quo = RatOp::zero();
        while !rem.is_zero() && rem.order() >= den.order() {
            let k = rem.order() - den.order();
            // leading coefficient of theta^k * den is sigma^k(lc(den))
            let q = rem.lc().div(&Self::sigma_pow(&den.lc(), k));
            let mut term = vec![RationalFunction::zero(); k + 1];
            term[k] = q;
            let term = RatOp::new(term);
            quo = quo.add(&term);
            rem = rem.sub(&term.mul(den));
        }
        (quo, rem)
    }

    pub fn rem(&self, den: &Self) -> Self {
        self.divrem(den).1
    }

    /// True when den right-divides self exactly.
    pub fn divisible_by(&self, den: &Self) -> bool {
        self.rem(den).is_zero()
    }

    /// Clear denominators and normalize to the canonical polynomial form.
    pub fn to_operator(&self) -> Operator<A> {
        if self.is_zero() {
            return Operator::zero();
        }
        let mut den: PolyG = Poly::one();
        for c in &self.coeffs {
            let g = den.gcd(c.den());
            den = den.mul(&c.den().divrem(&g).0);
        }
        let polys: Vec<PolyG> = self
            .coeffs
            .iter()
            .map(|c| {
                let cleared = c.num().mul(&den.divrem(c.den()).0);
                cleared
            })
            .collect();
        Operator::new(polys).normalize()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::{DiffAlg, DiffOperator, ShiftAlg};
    use crate::number::poly::PolyG;

    fn rf(n: &[i64]) -> RationalFunction {
        RationalFunction::from_poly(PolyG::from_i64(n))
    }

    #[test]
    fn divrem_exact_on_products() {
        // (D + z) * (z D - 1), divided by (z D - 1), quotient (D + z)
        let a: RatOp<DiffAlg> = RatOp::new(vec![rf(&[0, 1]), rf(&[1])]);
        let b: RatOp<DiffAlg> = RatOp::new(vec![rf(&[-1]), rf(&[0, 1])]);
        let prod = a.mul(&b);
        let (q, r) = prod.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q, a);
    }

    #[test]
    fn shift_division() {
        let a: RatOp<ShiftAlg> = RatOp::new(vec![rf(&[1, 1]), rf(&[0, 2])]);
        let b: RatOp<ShiftAlg> = RatOp::new(vec![rf(&[-3]), rf(&[1, 5])]);
        let prod = a.mul(&b);
        assert!(prod.divisible_by(&b));
        assert!(!prod.divisible_by(&RatOp::new(vec![rf(&[1]), rf(&[1])])));
    }

    #[test]
    fn clears_denominators() {
        // (1/z) D + 1 -> D + z
        let a: RatOp<DiffAlg> = RatOp::new(vec![
            rf(&[1]),
            RationalFunction::new(PolyG::from_i64(&[1]), PolyG::from_i64(&[0, 1])),
        ]);
        let op: DiffOperator = a.to_operator();
        assert_eq!(op, DiffOperator::new(vec![PolyG::from_i64(&[0, 1]), PolyG::from_i64(&[1])]));
    }
}
