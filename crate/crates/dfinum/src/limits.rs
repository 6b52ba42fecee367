//! Sequence limits: algebraic sequences converging to polynomial roots,
//! heuristic limit detection for P-recursive sequences, and the transform
//! turning a sequence limit into a function value at 1.

use crate::algebraic::{alg_to_diffop, series_root, BivariatePolynomial};
use crate::error::{Error, Result};
use crate::number::enclosure::Enclosure;
use crate::number::gaussian::GaussianRational;
use crate::number::poly::PolyG;
use crate::number::roots::complex_roots;
use crate::ore::{DiffOperator, SequenceWindow, ShiftOperator};

/// A P-recursive sequence given by an annihilator and enough initial
/// values; the sequence is expected (not proven) to converge.
#[derive(Clone, Debug)]
pub struct ConvergentRecurrence {
    pub op: ShiftOperator,
    pub initial: SequenceWindow,
    pub target_hint: Option<Enclosure>,
}

impl ConvergentRecurrence {
    /// Validates that unrolling can proceed past the initial window: the
    /// leading coefficient must have no nonnegative integer root at or
    /// beyond the first index it gets solved at.
    pub fn new(
        op: ShiftOperator,
        initial: SequenceWindow,
        target_hint: Option<Enclosure>,
    ) -> Result<Self> {
        if op.is_zero() {
            return Err(Error::ZeroOperator);
        }
        let r = op.order();
        if initial.values.len() < r {
            return Err(Error::BadInitialConditions {
                got: initial.values.len(),
                order: r,
            });
        }
        let first_step = (initial.offset + initial.values.len() - r) as i64;
        if let Some(n) = last_nonneg_integer_root(&op.lc()) {
            if n >= first_step {
                return Err(Error::LeadingCoeffZero { index: n });
            }
        }
        Ok(ConvergentRecurrence {
            op,
            initial,
            target_hint,
        })
    }
}

/// Largest nonnegative integer root, scanned up to the Cauchy bound.
pub(crate) fn last_nonneg_integer_root(p: &PolyG) -> Option<i64> {
    if p.is_zero() || p.deg() == 0 {
        return None;
    }
    let lc_abs = p.lc().abs_up();
    let mut bound = 1.0f64;
    for k in 0..p.deg() {
        bound = bound.max(1.0 + p.coeff(k).abs_up() / lc_abs);
    }
    let top = bound.ceil() as i64;
    (0..=top).rev().find(|&n| p.eval_i64(n).is_zero())
}

/// P(z, y) = p((1-z) y) - p(eta) (1-z).  Its unique power-series root with
/// constant term eta has coefficients converging to a root of p near eta.
pub fn root_series_polynomial(
    p: &PolyG,
    eta: &GaussianRational,
) -> Result<BivariatePolynomial> {
    if p.is_zero() || p.deg() == 0 {
        return Err(Error::ConstantPolynomial(
            "need a nonconstant polynomial to chase a root of".into(),
        ));
    }
    let one_minus_z = PolyG::from_i64(&[1, -1]);
    let mut rows: Vec<PolyG> = (0..=p.deg())
        .map(|k| one_minus_z.pow(k).scale(&p.coeff(k)))
        .collect();
    rows[0] = rows[0].sub(&one_minus_z.scale(&p.eval(eta)));
    BivariatePolynomial::new(rows)
}

/// The coefficient sequence of the root series of root_series_polynomial,
/// packaged as a recurrence with enough exact seed terms.
pub fn root_sequence(p: &PolyG, eta: &GaussianRational) -> Result<ConvergentRecurrence> {
    let big = root_series_polynomial(p, eta)?;
    let ann = alg_to_diffop(&big)?;
    let rec = ann.to_recurrence()?;
    let r = rec.order();
    let mut need = r.max(1);
    if let Some(n) = last_nonneg_integer_root(&rec.lc()) {
        need = need.max(n as usize + r + 1);
    }
    let root = series_root(&big, eta, need)?;
    let initial = SequenceWindow::exact(0, root.coeffs().to_vec());
    ConvergentRecurrence::new(rec, initial, None)
}

/// Midpoint-only unrolling at fixed dyadic precision.  Interval radii are
/// deliberately dropped each step: carrying them through thousands of
/// steps inflates them geometrically (wrapping effect) even when the
/// iteration itself is stable.  The caller accounts for rounding with a
/// coarse allowance; the whole limit detection is heuristic anyway.
fn unroll_midpoints(
    op: &ShiftOperator,
    initial: &SequenceWindow,
    count: usize,
    prec: u32,
) -> Result<Vec<Enclosure>> {
    let r = op.order();
    let offset = initial.offset;
    let mut vals: Vec<Enclosure> = initial
        .values
        .iter()
        .map(|v| v.as_enclosure(prec).with_radius(0.0))
        .collect();
    while vals.len() < count {
        let k = vals.len() - r;
        let n = (offset + k) as i64;
        let lc = op.coeff(r).eval_i64(n);
        if lc.is_zero() {
            return Err(Error::LeadingCoeffZero { index: n });
        }
        let mut acc = Enclosure::zero(prec);
        for j in 0..r {
            let c = op.coeff(j).eval_i64(n);
            if c.is_zero() {
                continue;
            }
            acc = acc.add(&vals[k + j].mul_exact(&c));
        }
        vals.push(acc.div_exact(&lc).neg().with_radius(0.0));
    }
    Ok(vals)
}

/// Contraction-ratio tail estimate over a trailing window of differences.
/// Returns the enclosing radius to add to the last iterate, or None when
/// no contraction is visible.
fn tail_estimate(vals: &[Enclosure], noise: f64) -> Option<f64> {
    const WINDOW: usize = 8;
    const INFLATE: f64 = 4.0;
    let n = vals.len();
    if n < WINDOW + 2 {
        return None;
    }
    let diffs: Vec<f64> = vals[n - WINDOW - 1..]
        .windows(2)
        .map(|pair| pair[0].mid_dist_up(&pair[1]))
        .collect();
    let last = *diffs.last().unwrap();
    if last <= noise {
        // stationary at working precision; the caller's rounding
        // allowance covers the rest
        return Some(0.0);
    }
    let mut rho = 0.0f64;
    for k in 0..diffs.len() - 1 {
        if diffs[k] <= noise {
            return None; // stalled then moved again: no clean contraction
        }
        rho = rho.max(diffs[k + 1] / diffs[k]);
    }
    if !(rho < 1.0) {
        return None;
    }
    Some(last * rho / (1.0 - rho) * INFLATE)
}

/// Empirical limit of the sequence: midpoint is the last iterate, radius a
/// heuristic geometric-tail estimate.  Not rigorous; callers should
/// surface that flag.  An exact fixed point is detected symbolically and
/// returned with radius 0.
pub fn limit_of_recurrence(
    c: &ConvergentRecurrence,
    tol: f64,
    budget: usize,
) -> Result<Enclosure> {
    assert!(tol > 0.0, "tolerance must be positive");
    let prec = ((-tol.log2()).ceil().max(0.0) as u32).saturating_add(64);
    // exactly-constant sequences: c0 is a fixed point iff the coefficient
    // sum annihilates constants (or c0 = 0)
    if let Some(vals) = c.initial.exact_values() {
        if let Some(c0) = vals.first() {
            let constant = vals.iter().all(|v| v == c0);
            let sum = c
                .op
                .coeffs()
                .iter()
                .fold(PolyG::zero(), |a, b| a.add(b));
            if constant && (c0.is_zero() || sum.is_zero()) {
                return Ok(Enclosure::from_exact(c0, prec));
            }
        }
    }
    let floor = c.initial.values.len() + c.op.order();
    let budget = budget.max(floor);
    let mut count = (floor + 16).next_power_of_two().min(budget);
    loop {
        let vals = unroll_midpoints(&c.op, &c.initial, count, prec)?;
        let last = vals.last().unwrap();
        // coarse rounding allowance for the dropped per-step radii
        let allowance = crate::number::dyadic::up(
            count as f64
                * crate::number::dyadic::pow2_up(-(prec as i64) + 8)
                * (1.0 + last.mid_abs_up()),
        );
        if let Some(tail) = tail_estimate(&vals, allowance) {
            if tail + allowance <= tol {
                return Ok(last.widen(tail + allowance));
            }
        }
        if count >= budget {
            return Err(Error::NoConvergence { budget });
        }
        count = (count * 2).min(budget);
    }
}

/// Index of the unique certified root disk the enclosure meets.
pub fn identify_root(limit: &Enclosure, disks: &[(Enclosure, usize)]) -> Result<usize> {
    let hits: Vec<usize> = disks
        .iter()
        .enumerate()
        .filter(|(_, (d, _))| d.intersects(limit))
        .map(|(i, _)| i)
        .collect();
    match hits.as_slice() {
        [i] => Ok(*i),
        _ => Err(Error::AmbiguousRoot),
    }
}

/// Run root_sequence, detect its limit, and certify which root of p it
/// converged to.  On an ambiguous match, raise precision and budget once
/// before giving up.
pub fn converge_to_root(
    p: &PolyG,
    eta: &GaussianRational,
    tol: f64,
    budget: usize,
) -> Result<(Enclosure, usize, Vec<(Enclosure, usize)>)> {
    let rec = root_sequence(p, eta)?;
    let prec = ((-tol.log2()).ceil().max(0.0) as u32).saturating_add(64);
    let mut attempt_tol = tol;
    let mut attempt_budget = budget;
    let mut attempt_prec = prec;
    for retry in 0..2 {
        let lim = limit_of_recurrence(&rec, attempt_tol, attempt_budget)?;
        let disks = complex_roots(p, attempt_prec)?;
        match identify_root(&lim, &disks) {
            Ok(i) => return Ok((lim, i, disks)),
            Err(Error::AmbiguousRoot) if retry == 0 => {
                attempt_tol = tol * 1e-8;
                attempt_budget = budget * 2;
                attempt_prec = prec * 2;
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::AmbiguousRoot)
}

/// Annihilator of g(z) = (1-z) sum a_n z^n; the limit of (a_n) equals
/// lim_{z->1-} g(z).  The returned note records that reading.
pub fn to_function_limit(c: &ConvergentRecurrence) -> Result<(DiffOperator, String)> {
    let (m, bound) = c.op.to_diffop()?;
    let hom = m.homogenize(bound);
    // (1-z) is annihilated by (1-z) D + 1
    let one_minus_z = DiffOperator::new(vec![PolyG::from_i64(&[1]), PolyG::from_i64(&[1, -1])]);
    let ann = hom.annihilator_product(&one_minus_z)?;
    let note = "limit of the sequence = lim_{z->1^-} g(z) where g(z) = (1-z) * sum a_n z^n"
        .to_string();
    Ok((ann, note))
}
