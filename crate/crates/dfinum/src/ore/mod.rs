//! Non-commutative operator algebras F[n]<S_n> and F[z]<D_z> over F = Q(i):
//! arithmetic, closure properties, operator/recurrence conversion,
//! singularity extraction and base-point shifts.

pub mod closure;
pub mod convert;
pub mod ratop;
pub mod sequence;

use crate::error::{Error, Result};
use crate::number::enclosure::Enclosure;
use crate::number::gaussian::GaussianRational;
use crate::number::poly::{Poly, PolyG};
use crate::number::ratfun::RationalFunction;
use crate::number::roots::complex_roots;
use std::fmt;
use std::marker::PhantomData;

pub use sequence::SequenceWindow;

/// Commutation data of an Ore algebra: theta * a = sigma(a) * theta + delta(a).
pub trait OreAlgebra: Clone + PartialEq + fmt::Debug + 'static {
    /// Variable name ('n' or 'z').
    const VAR: char;
    /// Generator name for display.
    const GEN: &'static str;
    /// Index steps of the generator on a product of solutions, over the
    /// basis e_{ij}: differential D(f^(i)g^(j)) touches (i+1,j) and
    /// (i,j+1); shift S(u_{n+i}v_{n+j}) touches (i+1,j+1).
    const PRODUCT_STEPS: &'static [(usize, usize)];
    fn sigma(p: &PolyG) -> PolyG;
    fn delta(p: &PolyG) -> PolyG;
    fn sigma_rf(r: &RationalFunction) -> RationalFunction;
    fn delta_rf(r: &RationalFunction) -> RationalFunction;
}

/// The shift algebra F[n]<S_n>, S_n * a(n) = a(n+1) * S_n.
#[derive(Clone, PartialEq, Debug)]
pub struct ShiftAlg;

/// The differential algebra F[z]<D_z>, D_z * a(z) = a(z) * D_z + a'(z).
#[derive(Clone, PartialEq, Debug)]
pub struct DiffAlg;

impl OreAlgebra for ShiftAlg {
    const VAR: char = 'n';
    const GEN: &'static str = "S_n";
    const PRODUCT_STEPS: &'static [(usize, usize)] = &[(1, 1)];
    fn sigma(p: &PolyG) -> PolyG {
        p.shift(&GaussianRational::one())
    }
    fn delta(_p: &PolyG) -> PolyG {
        Poly::zero()
    }
    fn sigma_rf(r: &RationalFunction) -> RationalFunction {
        r.sigma_shift()
    }
    fn delta_rf(_r: &RationalFunction) -> RationalFunction {
        crate::number::poly::Field::zero()
    }
}

impl OreAlgebra for DiffAlg {
    const VAR: char = 'z';
    const GEN: &'static str = "D_z";
    const PRODUCT_STEPS: &'static [(usize, usize)] = &[(1, 0), (0, 1)];
    fn sigma(p: &PolyG) -> PolyG {
        p.clone()
    }
    fn delta(p: &PolyG) -> PolyG {
        p.derivative()
    }
    fn sigma_rf(r: &RationalFunction) -> RationalFunction {
        r.clone()
    }
    fn delta_rf(r: &RationalFunction) -> RationalFunction {
        r.delta_diff()
    }
}

/// Operator with polynomial coefficients; index j holds the coefficient of
/// the j-th power of the generator.
#[derive(Clone, PartialEq)]
pub struct Operator<A: OreAlgebra> {
    coeffs: Vec<PolyG>,
    _alg: PhantomData<A>,
}

pub type ShiftOperator = Operator<ShiftAlg>;
pub type DiffOperator = Operator<DiffAlg>;

impl<A: OreAlgebra> Operator<A> {
    pub fn new(mut coeffs: Vec<PolyG>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Operator {
            coeffs,
            _alg: PhantomData,
        }
    }

    pub fn zero() -> Self {
        Operator::new(vec![])
    }

    pub fn one() -> Self {
        Operator::new(vec![Poly::one()])
    }

    /// The generator itself (S_n or D_z).
    pub fn gen() -> Self {
        Operator::new(vec![Poly::zero(), Poly::one()])
    }

    pub fn from_poly(p: PolyG) -> Self {
        Operator::new(vec![p])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[PolyG] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> PolyG {
        self.coeffs.get(j).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn lc(&self) -> PolyG {
        self.coeffs.last().cloned().unwrap_or_else(Poly::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Operator::new((0..n).map(|j| self.coeff(j).add(&other.coeff(j))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Operator::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    /// Left multiplication by the generator.
    fn gen_mul(op: &Self) -> Self {
        let mut out = vec![Poly::zero(); op.coeffs.len() + 1];
        for (j, c) in op.coeffs.iter().enumerate() {
            out[j + 1] = out[j + 1].add(&A::sigma(c));
            out[j] = out[j].add(&A::delta(c));
        }
        Operator::new(out)
    }

    /// Non-commutative product; order adds, and the result is exact
    /// (no normalization, so associativity holds on coefficient lists).
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Operator::zero();
        }
        // powers[i] = theta^i * other
        let mut powers = vec![other.clone()];
        for _ in 0..self.order() {
            powers.push(Self::gen_mul(powers.last().unwrap()));
        }
        let mut acc = Operator::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let scaled =
                Operator::new(powers[i].coeffs.iter().map(|c| c.mul(a)).collect());
            acc = acc.add(&scaled);
        }
        acc
    }

    /// Multiply on the left by a plain polynomial.
    pub fn scale(&self, p: &PolyG) -> Self {
        Operator::new(self.coeffs.iter().map(|c| c.mul(p)).collect())
    }

    /// Canonical form: divide out the gcd of the coefficients and scale so
    /// the leading coefficient polynomial is monic.
    pub fn normalize(&self) -> Self {
        if self.is_zero() {
            return Operator::zero();
        }
        let mut g = Poly::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        let reduced: Vec<PolyG> = self.coeffs.iter().map(|c| c.divrem(&g).0).collect();
        let lc_inv = reduced.last().unwrap().lc().inv();
        Operator::new(reduced.into_iter().map(|c| c.scale(&lc_inv)).collect())
    }

    /// Coefficient-wise complex conjugation; annihilates the conjugated
    /// solutions.
    pub fn conjugate_op(&self) -> Self {
        Operator::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_real())
    }

    pub(crate) fn to_ratop(&self) -> ratop::RatOp<A> {
        ratop::RatOp::new(
            self.coeffs
                .iter()
                .map(|c| RationalFunction::from_poly(c.clone()))
                .collect(),
        )
    }
}

impl DiffOperator {
    /// Certified enclosures of the roots of the leading coefficient.
    pub fn singularities(&self, prec: u32) -> Result<Vec<(Enclosure, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        complex_roots(&self.lc(), prec)
    }

    /// Replace z by z + beta in every coefficient; translates ordinary and
    /// singular points by -beta.
    pub fn shift_point(&self, beta: &GaussianRational) -> DiffOperator {
        Operator::new(self.coeffs.iter().map(|c| c.shift(beta)).collect())
    }

    /// True when the point is an ordinary point (exact check).
    pub fn is_ordinary(&self, point: &GaussianRational) -> bool {
        !self.is_zero() && !self.lc().eval(point).is_zero()
    }
}

impl<A: OreAlgebra> fmt::Debug for Operator<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_operator(self))
    }
}

impl<A: OreAlgebra> fmt::Display for Operator<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::text::format_operator(self))
    }
}
