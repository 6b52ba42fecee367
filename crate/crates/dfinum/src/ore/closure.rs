//! Closure properties: LCLM, sums, products, partial sums, geometric
//! twists, and real forms.  Everything reduces to finding the first linear
//! dependence among reductions in a finite-dimensional module over the
//! rational-function field.

use crate::error::{Error, Result};
use crate::linalg::SpanSolver;
use crate::number::gaussian::GaussianRational;
use crate::number::poly::{Field, PolyG};
use crate::number::ratfun::RationalFunction;
use crate::ore::ratop::RatOp;
use crate::ore::{Operator, OreAlgebra, ShiftOperator};

impl<A: OreAlgebra> Operator<A> {
    /// Least common left multiple: the minimal-order operator that both
    /// inputs right-divide.  Its solution space contains both solution
    /// spaces.
    pub fn lclm(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let a = self.to_ratop();
        let b = other.to_ratop();
        let dim = a.order() + b.order();
        let mut solver = SpanSolver::new(dim);
        // powers of the generator reduced modulo each input, side by side
        let mut ra = RatOp::<A>::one().rem(&a);
        let mut rb = RatOp::<A>::one().rem(&b);
        loop {
            let mut v = Vec::with_capacity(dim);
            for j in 0..a.order() {
                v.push(ra.coeff(j));
            }
            for j in 0..b.order() {
                v.push(rb.coeff(j));
            }
            if let Some(comb) = solver.insert(v) {
                let result = RatOp::<A>::new(comb).to_operator();
                debug_assert!(result.to_ratop().rem(&a).is_zero());
                debug_assert!(result.to_ratop().rem(&b).is_zero());
                return Ok(result);
            }
            ra = ra.gen_mul().rem(&a);
            rb = rb.gen_mul().rem(&b);
        }
    }

    /// Annihilator of f+g for solutions f of self and g of other.
    pub fn annihilator_sum(&self, other: &Self) -> Result<Self> {
        self.lclm(other)
    }

    /// Annihilator of the product (termwise product for sequences,
    /// function product in the differential case).  Ansatz over the module
    /// with basis f^(i)g^(j) (resp. u_{n+i}v_{n+j}), dimension
    /// order(self)*order(other).
    pub fn annihilator_product(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let m = self.order();
        let n = other.order();
        if m == 0 || n == 0 {
            // an order-0 annihilator only kills the zero solution, and
            // zero times anything is zero
            return Ok(Operator::one());
        }
        // reduction rows express the order-m (resp. -n) symbol in lower ones
        let red_a = reduction_row(self);
        let red_b = reduction_row(other);
        let dim = m * n;
        let mut solver = SpanSolver::new(dim);
        // current element as a coefficient matrix over the basis e_{ij}
        let mut cur = vec![vec![RationalFunction::zero(); n]; m];
        cur[0][0] = RationalFunction::one();
        loop {
            let mut flat = Vec::with_capacity(dim);
            for row in &cur {
                for c in row {
                    flat.push(c.clone());
                }
            }
            if let Some(comb) = solver.insert(flat) {
                return Ok(RatOp::<A>::new(comb).to_operator());
            }
            cur = theta_on_product::<A>(&cur, &red_a, &red_b);
        }
    }

    /// Operator with real coefficients annihilating every solution of
    /// self, via lclm with the conjugate.
    pub fn realify(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        if self.is_real() {
            return Ok(self.clone());
        }
        let r = self.lclm(&self.conjugate_op())?;
        debug_assert!(r.is_real());
        Ok(r)
    }
}

/// For L = sum p_i theta^i of order m: row v with
/// (theta^m symbol) = sum_i v[i] * (theta^i symbol) on solutions of L.
fn reduction_row<A: OreAlgebra>(op: &Operator<A>) -> Vec<RationalFunction> {
    let m = op.order();
    let lc = RationalFunction::from_poly(op.lc());
    (0..m)
        .map(|i| RationalFunction::from_poly(op.coeff(i)).div(&lc).neg())
        .collect()
}

/// Add c * e_{ij} to acc, reducing out-of-range indices via the rows.
fn add_symbol(
    acc: &mut [Vec<RationalFunction>],
    c: &RationalFunction,
    i: usize,
    j: usize,
    red_a: &[RationalFunction],
    red_b: &[RationalFunction],
) {
    if c.is_zero() {
        return;
    }
    let m = red_a.len();
    let n = red_b.len();
    match (i == m, j == n) {
        (false, false) => acc[i][j] = acc[i][j].add(c),
        (true, false) => {
            for (i2, r) in red_a.iter().enumerate() {
                acc[i2][j] = acc[i2][j].add(&c.mul(r));
            }
        }
        (false, true) => {
            for (j2, r) in red_b.iter().enumerate() {
                acc[i][j2] = acc[i][j2].add(&c.mul(r));
            }
        }
        (true, true) => {
            for (i2, ra) in red_a.iter().enumerate() {
                for (j2, rb) in red_b.iter().enumerate() {
                    acc[i2][j2] = acc[i2][j2].add(&c.mul(ra).mul(rb));
                }
            }
        }
    }
}

/// Apply the generator to an element of the product module:
/// theta(c * e_{ij}) = delta(c) e_{ij} + sigma(c) * (index steps).
fn theta_on_product<A: OreAlgebra>(
    cur: &[Vec<RationalFunction>],
    red_a: &[RationalFunction],
    red_b: &[RationalFunction],
) -> Vec<Vec<RationalFunction>> {
    let m = red_a.len();
    let n = red_b.len();
    let mut out = vec![vec![RationalFunction::zero(); n]; m];
    for (i, row) in cur.iter().enumerate() {
        for (j, c) in row.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let d = A::delta_rf(c);
            add_symbol(&mut out, &d, i, j, red_a, red_b);
            let s = A::sigma_rf(c);
            for &(di, dj) in A::PRODUCT_STEPS {
                add_symbol(&mut out, &s, i + di, j + dj, red_a, red_b);
            }
        }
    }
    out
}

impl ShiftOperator {
    /// Annihilator of s(n) = sum_{k<=n} a(k) for solutions a of self:
    /// (self with n -> n+1) * (S - 1).
    pub fn partial_sum_annihilator(&self) -> Result<ShiftOperator> {
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let one = GaussianRational::one();
        let shifted = Operator::new(self.coeffs().iter().map(|p| p.shift(&one)).collect());
        let step = ShiftOperator::new(vec![PolyG::from_i64(&[-1]), PolyG::from_i64(&[1])]);
        Ok(shifted.mul(&step).normalize())
    }

    /// Annihilator of (a(n) zeta^n): p_j(n) -> p_j(n) zeta^{-j}, cleared to
    /// polynomial coefficients by multiplying through with zeta^order.
    pub fn geometric_twist(&self, zeta: &GaussianRational) -> Result<ShiftOperator> {
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        if zeta.is_zero() {
            return Err(Error::ZeroTwist);
        }
        let r = self.order();
        let coeffs = self
            .coeffs()
            .iter()
            .enumerate()
            .map(|(j, p)| p.scale(&zeta.pow((r - j) as i64)))
            .collect();
        Ok(ShiftOperator::new(coeffs).normalize())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::sequence::SequenceWindow;
    use crate::ore::{DiffOperator, ShiftOperator};

    fn gq(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    fn pg(c: &[i64]) -> PolyG {
        PolyG::from_i64(c)
    }

    fn sh(coeffs: &[&[i64]]) -> ShiftOperator {
        ShiftOperator::new(coeffs.iter().map(|c| pg(c)).collect())
    }

    fn df(coeffs: &[&[i64]]) -> DiffOperator {
        DiffOperator::new(coeffs.iter().map(|c| pg(c)).collect())
    }

    fn assert_annihilates(op: &ShiftOperator, w: &SequenceWindow) {
        assert!(
            op.apply_to_window(w, 64).is_exactly_zero(),
            "nonzero residual for {op:?}"
        );
    }

    #[test]
    fn lclm_constant_coefficients() {
        // lclm(D, D-1) = D^2 - D
        let a = df(&[&[0], &[1]]);
        let b = df(&[&[-1], &[1]]);
        assert_eq!(a.lclm(&b).unwrap(), df(&[&[0], &[-1], &[1]]));
    }

    #[test]
    fn lclm_idempotent() {
        let a = df(&[&[-1], &[1]]);
        assert_eq!(a.lclm(&a).unwrap(), a);
        let s = sh(&[&[-1], &[1, 1]]);
        assert_eq!(s.lclm(&s).unwrap(), s.normalize());
    }

    #[test]
    fn lclm_is_left_multiple() {
        let a = sh(&[&[-1], &[1, 1]]); // (n+1)S - 1
        let b = sh(&[&[-1], &[1]]); // S - 1
        let l = a.lclm(&b).unwrap();
        assert!(l.to_ratop().rem(&a.to_ratop()).is_zero());
        assert!(l.to_ratop().rem(&b.to_ratop()).is_zero());
        // annihilates both 1/n! and the constant sequence
        let fac = a
            .unroll(&SequenceWindow::exact(0, vec![gq(1, 1)]), 80, 64)
            .unwrap();
        let ones = SequenceWindow::exact(0, vec![gq(1, 1); 80]);
        assert_annihilates(&l, &fac);
        assert_annihilates(&l, &ones);
    }

    #[test]
    fn sum_closure() {
        // solutions of (n+1)S-1 (c/n!) plus solutions of S-2 (c 2^n)
        let a = sh(&[&[-1], &[1, 1]]);
        let b = sh(&[&[-2], &[1]]);
        let l = a.annihilator_sum(&b).unwrap();
        let fac = a
            .unroll(&SequenceWindow::exact(0, vec![gq(1, 1)]), 60, 64)
            .unwrap()
            .exact_values()
            .unwrap();
        let geo = b
            .unroll(&SequenceWindow::exact(0, vec![gq(3, 1)]), 60, 64)
            .unwrap()
            .exact_values()
            .unwrap();
        let sum: Vec<GaussianRational> =
            fac.iter().zip(&geo).map(|(x, y)| x.add(y)).collect();
        assert_annihilates(&l, &SequenceWindow::exact(0, sum));
    }

    #[test]
    fn product_closure_shift() {
        // constants times 2^n is annihilated by an order-1 operator
        let a = sh(&[&[-1], &[1]]);
        let b = sh(&[&[-2], &[1]]);
        let p = a.annihilator_product(&b).unwrap();
        assert_eq!(p.order(), 1);
        let w = SequenceWindow::exact(0, (0u32..30).map(|k| gq(2i64.pow(k), 1)).collect());
        assert_annihilates(&p, &w);
    }

    #[test]
    fn product_closure_diff() {
        // exp * exp is annihilated by D-2
        let a = df(&[&[-1], &[1]]);
        let p = a.annihilator_product(&a).unwrap();
        assert_eq!(p, df(&[&[-2], &[1]]));
        // exp * exp(-z) = 1 is annihilated by D
        let b = df(&[&[1], &[1]]);
        assert_eq!(a.annihilator_product(&b).unwrap(), df(&[&[0], &[1]]));
    }

    #[test]
    fn product_closure_shift_polynomial_coeffs() {
        // (1/n!) * 2^n = 2^n/n!, so the product operator must reproduce it
        let a = sh(&[&[-1], &[1, 1]]);
        let b = sh(&[&[-2], &[1]]);
        let p = a.annihilator_product(&b).unwrap();
        let w = p
            .unroll(&SequenceWindow::exact(0, vec![gq(1, 1)]), 8, 64)
            .unwrap();
        let got = w.exact_values().unwrap();
        assert_eq!(got[3], gq(8, 6));
        assert_eq!(got[4], gq(16, 24));
    }

    #[test]
    fn partial_sums() {
        // a_n = 2^n, s_n = 2^{n+1} - 1
        let l = sh(&[&[-2], &[1]]).partial_sum_annihilator().unwrap();
        let s = SequenceWindow::exact(
            0,
            (0u32..40).map(|k| gq(2i64.pow(k + 1) - 1, 1)).collect(),
        );
        assert_annihilates(&l, &s);
        // constants: s_n = (n+1) c
        let l2 = sh(&[&[-1], &[1]]).partial_sum_annihilator().unwrap();
        let s2 = SequenceWindow::exact(0, (0..40).map(|k| gq(5 * (k + 1), 1)).collect());
        assert_annihilates(&l2, &s2);
    }

    #[test]
    fn twist() {
        // S-1 twisted by 1/2 annihilates (1/2)^n, equals 2S-1 up to content
        let l = sh(&[&[-1], &[1]]).geometric_twist(&gq(1, 2)).unwrap();
        assert_eq!(l, sh(&[&[-1], &[2]]).normalize());
        // twisting by zeta then 1/zeta is the identity up to content
        let a = sh(&[&[-1, 3], &[2, 1]]);
        let round = a
            .geometric_twist(&gq(5, 3))
            .unwrap()
            .geometric_twist(&gq(3, 5))
            .unwrap();
        assert_eq!(round, a.normalize());
        assert!(matches!(
            a.geometric_twist(&GaussianRational::zero()),
            Err(Error::ZeroTwist)
        ));
    }

    #[test]
    fn twist_factorial() {
        // (n+1)S-1 twisted by 3 annihilates 3^n/n!
        let l = sh(&[&[-1], &[1, 1]]).geometric_twist(&gq(3, 1)).unwrap();
        let mut v = vec![gq(1, 1)];
        for n in 1..40i64 {
            let prev = v.last().unwrap().clone();
            v.push(prev.mul(&gq(3, n)));
        }
        assert_annihilates(&l, &SequenceWindow::exact(0, v));
    }

    #[test]
    fn realify_diff() {
        // D - i realifies to D^2 + 1
        let a = DiffOperator::new(vec![
            PolyG::new(vec![GaussianRational::i().neg()]),
            pg(&[1]),
        ]);
        let r = a.realify().unwrap();
        assert!(r.is_real());
        assert_eq!(r, df(&[&[1], &[0], &[1]]));
        // real operator untouched
        let b = df(&[&[1, 2], &[0, 0, 3]]);
        assert_eq!(b.realify().unwrap(), b);
    }

    #[test]
    fn realify_shift_annihilates_both_powers_of_i() {
        // S - i: the real form must annihilate i^n and (-i)^n
        let a = ShiftOperator::new(vec![
            PolyG::new(vec![GaussianRational::i().neg()]),
            pg(&[1]),
        ]);
        let r = a.realify().unwrap();
        assert!(r.is_real());
        let mut p = vec![GaussianRational::one()];
        let mut q = vec![GaussianRational::one()];
        for _ in 1..40 {
            p.push(p.last().unwrap().mul(&GaussianRational::i()));
            q.push(q.last().unwrap().mul(&GaussianRational::i().conj()));
        }
        assert_annihilates(&r, &SequenceWindow::exact(0, p));
        assert_annihilates(&r, &SequenceWindow::exact(0, q));
    }

    #[test]
    fn conjugate_solution_check() {
        // L = (i n + 1) S - n: the conjugate operator annihilates the
        // conjugates of L's solutions
        let l = ShiftOperator::new(vec![
            pg(&[0, -1]),
            PolyG::new(vec![GaussianRational::one(), GaussianRational::i()]),
        ]);
        let seed = GaussianRational::new(crate::number::gaussian::rat(2, 3), crate::number::gaussian::rat(5, 7));
        let w = l
            .unroll(&SequenceWindow::exact(0, vec![seed]), 30, 64)
            .unwrap();
        let cw = SequenceWindow::exact(
            0,
            w.exact_values().unwrap().iter().map(|x| x.conj()).collect(),
        );
        assert_annihilates(&l.conjugate_op(), &cw);
    }
}
