//! Unrolling P-recursive sequences from initial values.

use crate::error::{Error, Result};
use crate::number::enclosure::NumberValue;
use crate::number::gaussian::GaussianRational;
use crate::ore::ShiftOperator;

/// A contiguous window a(offset), a(offset+1), ... of sequence values,
/// exact or enclosed.
#[derive(Clone, Debug)]
pub struct SequenceWindow {
    pub offset: usize,
    pub values: Vec<NumberValue>,
}

impl SequenceWindow {
    pub fn exact(offset: usize, values: Vec<GaussianRational>) -> Self {
        SequenceWindow {
            offset,
            values: values.into_iter().map(NumberValue::Exact).collect(),
        }
    }

    pub fn get(&self, n: usize) -> Option<&NumberValue> {
        n.checked_sub(self.offset).and_then(|k| self.values.get(k))
    }

    /// All values as exact rationals, when none is an enclosure.
    pub fn exact_values(&self) -> Option<Vec<GaussianRational>> {
        self.values
            .iter()
            .map(|v| v.exact().cloned())
            .collect()
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.values
            .iter()
            .all(|v| v.exact().map_or(false, |x| x.is_zero()))
    }
}

impl ShiftOperator {
    /// Extend `initial` (at least `order` consecutive values) to `count`
    /// terms using self as annihilator: sum_j p_j(n) a(n+j) = 0, solved for
    /// the top term.  Exact inputs stay exact; enclosures propagate at
    /// precision `prec`.
    pub fn unroll(
        &self,
        initial: &SequenceWindow,
        count: usize,
        prec: u32,
    ) -> Result<SequenceWindow> {
        if self.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let r = self.order();
        if initial.values.len() < r {
            return Err(Error::BadInitialConditions {
                got: initial.values.len(),
                order: r,
            });
        }
        let offset = initial.offset;
        let mut values = initial.values.clone();
        let mut k = 0usize;
        loop {
            let have_next = k + r < values.len();
            if !have_next && values.len() >= count {
                break;
            }
            let n = (offset + k) as i64;
            let lc = self.coeff(r).eval_i64(n);
            let rhs = self.partial_relation(&values, k, n, r, prec);
            if have_next {
                // supplied values beyond the order must satisfy the relation
                let full = rhs.add(&values[k + r].mul_exact(&lc), prec);
                if full.exact().map_or(false, |x| !x.is_zero()) {
                    return Err(Error::BadInitialConditions {
                        got: initial.values.len(),
                        order: r,
                    });
                }
            } else if lc.is_zero() {
                // can't step over a root of the leading coefficient
                return Err(Error::LeadingCoeffZero { index: n });
            } else {
                values.push(rhs.neg().div_exact(&lc));
            }
            k += 1;
        }
        values.truncate(count);
        Ok(SequenceWindow { offset, values })
    }

    /// sum_{j<top} p_j(n) a(n+j), the known part of the relation.
    fn partial_relation(
        &self,
        values: &[NumberValue],
        k: usize,
        n: i64,
        top: usize,
        prec: u32,
    ) -> NumberValue {
        let mut acc = NumberValue::zero();
        for j in 0..top {
            let c = self.coeff(j).eval_i64(n);
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&values[k + j].mul_exact(&c), prec);
        }
        acc
    }

    /// Apply the operator to a window: result(n) = sum_j p_j(n) a(n+j).
    /// Used to check that candidate annihilators really annihilate.
    pub fn apply_to_window(&self, w: &SequenceWindow, prec: u32) -> SequenceWindow {
        let r = self.order();
        let len = w.values.len().saturating_sub(r);
        let mut out = Vec::with_capacity(len);
        for k in 0..len {
            let n = (w.offset + k) as i64;
            let mut acc = NumberValue::zero();
            for j in 0..=r {
                let c = self.coeff(j).eval_i64(n);
                acc = acc.add(&w.values[k + j].mul_exact(&c), prec);
            }
            out.push(acc);
        }
        SequenceWindow {
            offset: w.offset,
            values: out,
        }
    }
}
