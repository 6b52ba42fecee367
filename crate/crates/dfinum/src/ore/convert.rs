//! Conversion between differential operators acting on power series and
//! shift operators acting on their coefficient sequences.

use crate::error::{Error, Result};
use crate::number::gaussian::GaussianRational;
use crate::number::poly::{Poly, PolyG};
use crate::ore::{DiffOperator, Operator, ShiftOperator};
use std::collections::BTreeMap;

/// Content removal that is safe for recurrences meant to hold at every
/// n >= 0: dividing by a common polynomial factor with a nonnegative
/// integer root would silently drop the (vacuous) relation at that index
/// and strengthen the recurrence, so we only divide when the content has
/// no such root.
fn normalize_keeping_integer_roots(op: ShiftOperator) -> ShiftOperator {
    if op.is_zero() {
        return op;
    }
    let mut g = Poly::zero();
    for c in op.coeffs() {
        g = g.gcd(c);
    }
    if g.deg() > 0 {
        // Cauchy bound on root magnitude, checked at integer points only
        let lc_abs = g.lc().abs_up();
        let mut bound = 1.0f64;
        for k in 0..g.deg() {
            let b = 1.0 + g.coeff(k).abs_up() / lc_abs;
            bound = bound.max(b);
        }
        let top = bound.ceil() as i64;
        for n in 0..=top {
            if g.eval_i64(n).is_zero() {
                // scalar scaling only
                let inv = op.lc().lc().inv();
                return ShiftOperator::new(
                    op.coeffs().iter().map(|c| c.scale(&inv)).collect(),
                );
            }
        }
    }
    op.normalize()
}

impl DiffOperator {
    /// Recurrence satisfied by the coefficient sequence of every power
    /// series solution, valid for all n >= 0 under the convention that
    /// coefficients with negative index are zero.  The substitution is
    /// z^a D^b -> (n+b-a)(n+b-a-1)...(n+1-a) S^(b-a), followed by an index
    /// shift clearing negative powers of the shift.
    pub fn to_recurrence(&self) -> Result<ShiftOperator> {
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        // terms[t] = polynomial q_t(n) of the raw relation
        //   sum_t q_t(n) a_{n+t} = 0
        let mut terms: BTreeMap<i64, PolyG> = BTreeMap::new();
        for (b, p) in self.coeffs().iter().enumerate() {
            for a in 0..=p.deg() {
                let c = p.coeff(a);
                if c.is_zero() {
                    continue;
                }
                // falling-factorial factor prod_{j=1..b} (n + j - a)
                let mut q = Poly::constant(c);
                for j in 1..=b {
                    let lin = Poly::new(vec![
                        GaussianRational::from_i64(j as i64 - a as i64),
                        GaussianRational::one(),
                    ]);
                    q = q.mul(&lin);
                }
                let t = b as i64 - a as i64;
                let entry = terms.entry(t).or_insert_with(Poly::zero);
                *entry = entry.add(&q);
            }
        }
        terms.retain(|_, q| !q.is_zero());
        let t_min = *terms.keys().next().unwrap_or(&0);
        let t_max = *terms.keys().next_back().unwrap_or(&0);
        let s = (-t_min).max(0);
        // substitute n -> n + s so every shift index is nonnegative
        let shift = GaussianRational::from_i64(s);
        let mut coeffs = vec![Poly::zero(); (t_max + s + 1) as usize];
        for (t, q) in terms {
            coeffs[(t + s) as usize] = q.shift(&shift);
        }
        Ok(normalize_keeping_integer_roots(ShiftOperator::new(coeffs)))
    }

    /// Apply the operator to a series truncation (exact).  With the input
    /// known mod z^N the result is valid mod z^(N - order); the returned
    /// vector is cut to that length.
    pub fn apply_to_series(&self, coeffs: &[GaussianRational]) -> Vec<GaussianRational> {
        let r = self.order();
        let n = coeffs.len().saturating_sub(r);
        let f = Poly::new(coeffs.to_vec());
        let mut acc: PolyG = Poly::zero();
        let mut deriv = f;
        for (j, p) in self.coeffs().iter().enumerate() {
            if j > 0 {
                deriv = deriv.derivative();
            }
            acc = acc.add(&p.mul(&deriv));
        }
        (0..n).map(|k| acc.coeff(k)).collect()
    }
}

impl ShiftOperator {
    /// Differential operator M with M.f a polynomial of degree <= the
    /// returned bound, for f the generating series of any solution valid
    /// at all n >= 0.  Maps n to z*D_z and clears negative powers of z:
    /// M = sum_j z^(J-j) p_j(theta - j), bound J - 1, where J = order.
    pub fn to_diffop(&self) -> Result<(DiffOperator, usize)> {
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let jmax = self.order();
        let theta = DiffOperator::new(vec![Poly::zero(), Poly::new(vec![
            GaussianRational::zero(),
            GaussianRational::one(),
        ])]);
        let mut m = DiffOperator::zero();
        for (j, p) in self.coeffs().iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            // p(theta - j) by operator Horner
            let x = theta.sub(&Operator::from_poly(Poly::constant(
                GaussianRational::from_i64(j as i64),
            )));
            let mut acc = DiffOperator::zero();
            for k in (0..=p.deg()).rev() {
                acc = acc.mul(&x);
                acc = acc.add(&Operator::from_poly(Poly::constant(p.coeff(k))));
            }
            let zpow = Poly::new(
                std::iter::repeat(GaussianRational::zero())
                    .take(jmax - j)
                    .chain(std::iter::once(GaussianRational::one()))
                    .collect(),
            );
            m = m.add(&acc.scale(&zpow));
        }
        let bound = jmax.saturating_sub(1);
        Ok((m, bound))
    }
}

impl DiffOperator {
    /// Turn "M.f is a polynomial of degree <= d" into a true annihilator:
    /// D^(d+1) * M.
    pub fn homogenize(&self, d: usize) -> DiffOperator {
        let mut acc = self.clone();
        for _ in 0..=d {
            acc = DiffOperator::gen().mul(&acc);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ore::sequence::SequenceWindow;
    use crate::number::poly::Field;

    fn gq(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    fn pg(c: &[i64]) -> PolyG {
        PolyG::from_i64(c)
    }

    fn df(coeffs: &[&[i64]]) -> DiffOperator {
        DiffOperator::new(coeffs.iter().map(|c| pg(c)).collect())
    }

    fn sh(coeffs: &[&[i64]]) -> ShiftOperator {
        ShiftOperator::new(coeffs.iter().map(|c| pg(c)).collect())
    }

    /// Residual of a diff operator on a truncated series must vanish.
    fn assert_series_annihilated(l: &DiffOperator, coeffs: &[GaussianRational]) {
        for (k, c) in l.apply_to_series(coeffs).iter().enumerate() {
            assert!(c.is_zero(), "residual at z^{k}: {c:?}");
        }
    }

    #[test]
    fn exponential_rule() {
        // D - 1 -> (n+1) a_{n+1} - a_n
        let rec = df(&[&[-1], &[1]]).to_recurrence().unwrap();
        assert_eq!(rec, sh(&[&[-1], &[1, 1]]));
    }

    #[test]
    fn log_like_operator() {
        // (1+z) D^2 + D annihilates log(1+z):
        // (n+2)(n+1) a_{n+2} + (n+1)^2 a_{n+1} = 0
        let rec = df(&[&[0], &[1], &[1, 1]]).to_recurrence().unwrap();
        let mut v = vec![gq(0, 1), gq(1, 1)];
        for n in 2..40i64 {
            v.push(gq(if n % 2 == 0 { -1 } else { 1 }, n));
        }
        let w = SequenceWindow::exact(0, v);
        assert!(rec.apply_to_window(&w, 64).is_exactly_zero());
    }

    #[test]
    fn sqrt_two_power_recurrence_matches_series() {
        // (z+1)^2 D^2 + (z+1) D - 2: unroll its recurrence and feed the
        // truncation back through the differential operator
        let l = df(&[&[-2], &[1, 1], &[1, 2, 1]]);
        let rec = l.to_recurrence().unwrap();
        let r = rec.order();
        let seed = SequenceWindow::exact(0, (0..r as i64).map(|k| gq(1 + k, 1)).collect());
        let w = rec.unroll(&seed, 50, 64).unwrap();
        assert_series_annihilated(&l, &w.exact_values().unwrap());
    }

    #[test]
    fn bessel_recurrence_reproduces_odd_pattern() {
        // z^2 D^2 + z D + (z^2 - 1): coefficients of the regular solution
        // follow a_{2k+1} = (-1)^k / (k! (k+1)! 4^k) * a_1 with a_0 = 0
        let rec = df(&[&[-1, 0, 1], &[0, 1], &[0, 0, 1]]).to_recurrence().unwrap();
        let r = rec.order();
        assert!(r >= 2);
        let mut seed = vec![GaussianRational::zero(); r];
        seed[1] = gq(1, 2);
        let w = rec
            .unroll(&SequenceWindow::exact(0, seed), 30, 64)
            .unwrap();
        let got = w.exact_values().unwrap();
        fn fact(m: i64) -> i64 {
            (1..=m).product::<i64>().max(1)
        }
        for k in 0..8i64 {
            let denom = fact(k) * fact(k + 1) * 4i64.pow(k as u32) * 2;
            let want = gq(if k % 2 == 0 { 1 } else { -1 }, denom);
            assert_eq!(got[(2 * k + 1) as usize], want, "odd coefficient {k}");
            if 2 * k < 30 {
                assert!(got[(2 * k) as usize].is_zero());
            }
        }
    }

    #[test]
    fn constants_give_one_minus_z() {
        let (m, bound) = sh(&[&[-1], &[1]]).to_diffop().unwrap();
        assert_eq!(bound, 0);
        // M = 1 - z: applied to sum z^n the residual is the constant 1
        let ones = vec![GaussianRational::one(); 60];
        let res = m.apply_to_series(&ones);
        assert_eq!(res[0], GaussianRational::one());
        assert!(res[1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn factorial_recurrence_gives_exponential_factor() {
        // (n+1)S - 1 -> z(D - 1) up to the construction's left factor
        let (m, bound) = sh(&[&[-1], &[1, 1]]).to_diffop().unwrap();
        // right-divisible by D - 1
        let d1 = df(&[&[-1], &[1]]);
        assert!(m.to_ratop().rem(&d1.to_ratop()).is_zero());
        // residual on the exponential series is a polynomial of deg <= 0
        let mut coeffs = vec![GaussianRational::one()];
        for n in 1..60i64 {
            let prev = coeffs.last().unwrap().clone();
            coeffs.push(prev.mul(&gq(1, n)));
        }
        let res = m.apply_to_series(&coeffs);
        assert!(res[bound + 1..].iter().all(|c| c.is_zero()));
    }

    #[test]
    fn weight_three_polylog() {
        // n(n+1)^3 S - n^4 annihilates a_n = 1/n^3 (a_0 = 0) for all n >= 0
        let l = ShiftOperator::new(vec![
            pg(&[0, 0, 0, 0, -1]),
            pg(&[0, 1]).mul(&pg(&[1, 1]).pow(3)),
        ]);
        let mut v = vec![GaussianRational::zero()];
        for n in 1..80i64 {
            v.push(gq(1, n * n * n));
        }
        assert!(l
            .apply_to_window(&SequenceWindow::exact(0, v.clone()), 64)
            .is_exactly_zero());
        let (m, bound) = l.to_diffop().unwrap();
        let res = m.apply_to_series(&v);
        assert!(res[bound + 1..].iter().all(|c| c.is_zero()));
        // homogenized operator annihilates outright
        let h = m.homogenize(bound);
        assert_series_annihilated(&h, &v);
    }

    #[test]
    fn homogenize_basics() {
        assert_eq!(df(&[&[0], &[1]]).homogenize(0), df(&[&[0], &[0], &[1]]));
    }

    #[test]
    fn round_trip_annihilates_solutions() {
        // L with ordinary origin: (1+z) D^2 + D (solutions 1, log(1+z))
        let l = df(&[&[0], &[1], &[1, 1]]);
        let rec = l.to_recurrence().unwrap();
        let (m, bound) = rec.to_diffop().unwrap();
        let h = m.homogenize(bound);
        let mut v = vec![gq(3, 1), gq(1, 1)];
        for n in 2..60i64 {
            v.push(gq(if n % 2 == 0 { -1 } else { 1 }, n));
        }
        assert_series_annihilated(&h, &v);
    }
}
