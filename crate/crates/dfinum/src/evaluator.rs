//! Numerical evaluation of D-finite functions: local Taylor summation
//! inside the disk certified by the leading-coefficient roots, and
//! analytic continuation along ball-covered paths.

use crate::error::{Error, Result};
use crate::limits::last_nonneg_integer_root;
use crate::number::dyadic::{pow2_up, up};
use crate::number::enclosure::{Enclosure, NumberValue};
use crate::number::gaussian::GaussianRational;
use crate::number::poly::Field;
use crate::number::ratfun::RationalFunction;
use crate::number::roots::distance_lower_bound;
use crate::ore::{DiffOperator, SequenceWindow};

/// Fraction of the certified singularity distance a single step or a local
/// evaluation may use.
pub const SAFETY: f64 = 0.75;

const TAIL_WINDOW: usize = 8;
const TAIL_RATIO_CAP: f64 = 0.875;
const TAIL_INFLATE: f64 = 4.0;
const TERM_BUDGET: usize = 100_000;
const PATH_WAYPOINT_CAP: usize = 256;

/// A concrete solution of a differential operator: the operator, an
/// ordinary base point, and the derivatives f(base), f'(base), ...,
/// f^(order-1)(base).
#[derive(Clone, Debug)]
pub struct DFiniteInstance {
    pub op: DiffOperator,
    pub base: GaussianRational,
    pub ics: Vec<NumberValue>,
}

impl DFiniteInstance {
    pub fn new(
        op: DiffOperator,
        base: GaussianRational,
        ics: Vec<NumberValue>,
    ) -> Result<Self> {
        if op.is_zero() {
            return Err(Error::ZeroOperator);
        }
        if !op.is_ordinary(&base) {
            return Err(Error::SingularPoint {
                point: format!("{base}"),
            });
        }
        if ics.len() != op.order() {
            return Err(Error::BadInitialConditions {
                got: ics.len(),
                order: op.order(),
            });
        }
        Ok(DFiniteInstance { op, base, ics })
    }
}

/// Waypoints of an analytic-continuation path, all Gaussian rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalPath {
    pub waypoints: Vec<GaussianRational>,
}

impl EvalPath {
    /// Check the ball-cover invariant: every waypoint ordinary, every step
    /// within the safety fraction of the certified singularity distance.
    pub fn validate(&self, op: &DiffOperator, prec: u32) -> Result<()> {
        if self.waypoints.len() < 2 {
            return Err(Error::BadPath);
        }
        let disks = op.singularities(prec)?;
        for w in &self.waypoints {
            if !op.is_ordinary(w) {
                return Err(Error::SingularPoint {
                    point: format!("{w}"),
                });
            }
        }
        for pair in self.waypoints.windows(2) {
            let r = distance_lower_bound(&pair[0], &disks);
            let step = pair[1].sub(&pair[0]).abs_up();
            if !(step <= SAFETY * r) {
                return Err(Error::BadPath);
            }
        }
        Ok(())
    }
}

/// Which side to prefer when a path must detour around a singularity.
/// Branch choices of multivalued continuations hang on this.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PathSide {
    Upper,
    Lower,
}

#[derive(Clone, Debug)]
pub struct SegmentInfo {
    pub from: GaussianRational,
    pub to: GaussianRational,
    pub terms: usize,
    pub tail_ratio: f64,
}

#[derive(Clone, Debug)]
pub struct Diagnostics {
    pub segments: Vec<SegmentInfo>,
    pub rigor: &'static str,
}

impl Diagnostics {
    fn new() -> Self {
        Diagnostics {
            segments: Vec::new(),
            rigor: "heuristic-tail",
        }
    }
}

#[derive(Clone, Debug)]
pub struct EvalResult {
    pub value: Enclosure,
    pub diagnostics: Diagnostics,
}

/// Rows expressing f^(m) as a combination of f, f', ..., f^(rho-1) with
/// rational-function coefficients, for m = 0..count-1.  Derived from the
/// operator by repeated differentiation; denominators divide powers of the
/// leading coefficient, hence are nonzero at ordinary points.
fn derivative_rows(op: &DiffOperator, count: usize) -> Vec<Vec<RationalFunction>> {
    let rho = op.order();
    let lc = RationalFunction::from_poly(op.lc());
    let red: Vec<RationalFunction> = (0..rho)
        .map(|i| {
            RationalFunction::from_poly(op.coeff(i))
                .div(&lc)
                .neg()
        })
        .collect();
    let mut rows: Vec<Vec<RationalFunction>> = Vec::with_capacity(count);
    for m in 0..count {
        if m < rho {
            let mut e = vec![RationalFunction::zero(); rho];
            e[m] = RationalFunction::one();
            rows.push(e);
            continue;
        }
        let prev = &rows[m - 1];
        let mut next = vec![RationalFunction::zero(); rho];
        for (i, r) in prev.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            next[i] = next[i].add(&r.delta_diff());
            if i + 1 < rho {
                next[i + 1] = next[i + 1].add(r);
            } else {
                for (i2, rd) in red.iter().enumerate() {
                    next[i2] = next[i2].add(&r.mul(rd));
                }
            }
        }
        rows.push(next);
    }
    rows
}

fn eval_ratfun(r: &RationalFunction, x: &GaussianRational) -> GaussianRational {
    r.num().eval(x).div(&r.den().eval(x))
}

/// f^(m)(point) for m = 0..count-1 from the instance's ics, via the ODE.
fn derivatives_at_base(inst: &DFiniteInstance, count: usize, prec: u32) -> Vec<NumberValue> {
    let rows = derivative_rows(&inst.op, count);
    rows.iter()
        .map(|row| {
            let mut acc = NumberValue::zero();
            for (i, r) in row.iter().enumerate() {
                if r.is_zero() {
                    continue;
                }
                acc = acc.add(&inst.ics[i].mul_exact(&eval_ratfun(r, &inst.base)), prec);
            }
            acc
        })
        .collect()
}

/// Taylor coefficients of the solution at its base point: the recurrence
/// for the shifted operator, seeded from the ics (derivatives divided by
/// factorials, extended through leading-coefficient roots via the ODE).
pub fn local_taylor(inst: &DFiniteInstance, count: usize, prec: u32) -> Result<SequenceWindow> {
    let shifted = inst.op.shift_point(&inst.base);
    let rec = shifted.to_recurrence()?;
    let r = rec.order();
    let mut need = r.max(inst.op.order()).max(1);
    if let Some(n) = last_nonneg_integer_root(&rec.lc()) {
        need = need.max(n as usize + r + 1);
    }
    let derivs = derivatives_at_base(inst, need, prec);
    let mut fact = GaussianRational::one();
    let seeds: Vec<NumberValue> = derivs
        .into_iter()
        .enumerate()
        .map(|(k, d)| {
            if k > 1 {
                fact = fact.mul(&GaussianRational::from_i64(k as i64));
            }
            d.div_exact(&fact)
        })
        .collect();
    let window = SequenceWindow {
        offset: 0,
        values: seeds,
    };
    rec.unroll(&window, count.max(need), prec)
}

/// Geometric tail extrapolation over the trailing nonzero term magnitudes.
/// Some(tail) once TAIL_WINDOW consecutive ratios sit below the cap.
fn geometric_tail(mags: &[f64]) -> Option<(f64, f64)> {
    if mags.len() < TAIL_WINDOW + 1 {
        return None;
    }
    let tail = &mags[mags.len() - TAIL_WINDOW - 1..];
    let mut rho = 0.0f64;
    for pair in tail.windows(2) {
        if pair[0] == 0.0 {
            return None;
        }
        rho = rho.max(pair[1] / pair[0]);
    }
    if rho > TAIL_RATIO_CAP {
        return None;
    }
    let last = *tail.last().unwrap();
    Some((up(last * rho / (1.0 - rho) * TAIL_INFLATE), rho))
}

struct SummedSeries {
    sums: Vec<Enclosure>,
    tails: Vec<f64>,
    terms: usize,
    ratio: f64,
}

/// Sum the first `derivs` termwise-differentiated Taylor series of inst at
/// base + u, stopping when every tail estimate drops below `target`.
fn sum_series(
    inst: &DFiniteInstance,
    u: &GaussianRational,
    derivs: usize,
    target: f64,
    prec: u32,
) -> Result<SummedSeries> {
    // dyadic enclosure arithmetic throughout: exact rational powers of u
    // make every partial sum quadratically more expensive for no benefit
    let u_enc = Enclosure::from_exact(u, prec);
    let one = Enclosure::from_exact(&GaussianRational::one(), prec);
    let mut sums = vec![Enclosure::zero(prec); derivs];
    let mut tails = vec![f64::INFINITY; derivs];
    let mut mags: Vec<Vec<f64>> = vec![Vec::new(); derivs];
    let mut ratio = 0.0f64;
    let mut count = 64usize;
    let mut n = 0usize;
    let mut zero_run = 0usize;
    let mut upow = vec![one; derivs]; // u^(n-k) per k
    loop {
        let window = local_taylor(inst, count, prec)?;
        while n < window.values.len() {
            let c = window.values[n].as_enclosure(prec);
            let mut all_zero = true;
            for k in 0..derivs {
                if n < k {
                    continue;
                }
                // term = c_n * n(n-1)...(n-k+1) * u^(n-k)
                let mut ff = GaussianRational::one();
                for j in 0..k {
                    ff = ff.mul(&GaussianRational::from_i64((n - j) as i64));
                }
                let term = c.mul_exact(&ff).mul(&upow[k]);
                upow[k] = upow[k].mul(&u_enc);
                let m = term.abs_up();
                if m > 0.0 {
                    mags[k].push(m);
                    all_zero = false;
                }
                sums[k] = sums[k].add(&term);
            }
            zero_run = if all_zero { zero_run + 1 } else { 0 };
            if zero_run >= 64 {
                // the series terminated (e.g. a polynomial solution)
                return Ok(SummedSeries {
                    sums,
                    tails: vec![0.0; derivs],
                    terms: n + 1,
                    ratio,
                });
            }
            n += 1;
            // stop checks are cheap; run them every few terms
            if n % 4 == 0 || n == count {
                let mut all_done = true;
                for k in 0..derivs {
                    if let Some((t, r)) = geometric_tail(&mags[k]) {
                        tails[k] = t;
                        ratio = ratio.max(r);
                    }
                    if !(tails[k] <= target) {
                        all_done = false;
                    }
                }
                if all_done {
                    return Ok(SummedSeries {
                        sums,
                        tails,
                        terms: n,
                        ratio,
                    });
                }
            }
        }
        if count >= TERM_BUDGET {
            return Err(Error::NoDecay {
                budget: TERM_BUDGET,
            });
        }
        count = (count * 2).min(TERM_BUDGET);
    }
}

fn check_in_disk(
    op: &DiffOperator,
    base: &GaussianRational,
    target: &GaussianRational,
    prec: u32,
) -> Result<()> {
    let disks = op.singularities(prec)?;
    let r = distance_lower_bound(base, &disks);
    let step = target.sub(base).abs_up();
    if step <= SAFETY * r {
        Ok(())
    } else {
        Err(Error::OutsideDisk {
            base: format!("{base}"),
            target: format!("{target}"),
            radius: SAFETY * r,
        })
    }
}

/// Evaluate the solution at zeta by direct Taylor summation; zeta must lie
/// within the safety fraction of the certified singularity distance.
pub fn evaluate_local(
    inst: &DFiniteInstance,
    zeta: &GaussianRational,
    prec: u32,
) -> Result<EvalResult> {
    let wprec = prec + 32;
    if zeta == &inst.base {
        let mut diag = Diagnostics::new();
        diag.segments.push(SegmentInfo {
            from: inst.base.clone(),
            to: zeta.clone(),
            terms: 0,
            tail_ratio: 0.0,
        });
        return Ok(EvalResult {
            value: inst.ics[0].as_enclosure(wprec),
            diagnostics: diag,
        });
    }
    check_in_disk(&inst.op, &inst.base, zeta, wprec)?;
    let u = zeta.sub(&inst.base);
    let target = pow2_up(-(prec as i64) - 8);
    let summed = sum_series(inst, &u, 1, target, wprec)?;
    let mut diag = Diagnostics::new();
    diag.segments.push(SegmentInfo {
        from: inst.base.clone(),
        to: zeta.clone(),
        terms: summed.terms,
        tail_ratio: summed.ratio,
    });
    Ok(EvalResult {
        value: summed.sums[0].widen(summed.tails[0]),
        diagnostics: diag,
    })
}

/// Transport the instance to a new base point within the current safe
/// disk: the new ics are the enclosures of f(beta), ..., f^(rho-1)(beta)
/// from termwise-differentiated local summation.
pub fn continue_to(
    inst: &DFiniteInstance,
    beta: &GaussianRational,
    prec: u32,
) -> Result<DFiniteInstance> {
    let (next, _) = continue_segment(inst, beta, prec)?;
    Ok(next)
}

fn continue_segment(
    inst: &DFiniteInstance,
    beta: &GaussianRational,
    prec: u32,
) -> Result<(DFiniteInstance, SegmentInfo)> {
    if beta == &inst.base {
        return Ok((
            inst.clone(),
            SegmentInfo {
                from: inst.base.clone(),
                to: beta.clone(),
                terms: 0,
                tail_ratio: 0.0,
            },
        ));
    }
    if !inst.op.is_ordinary(beta) {
        return Err(Error::SingularPoint {
            point: format!("{beta}"),
        });
    }
    let wprec = prec + 32;
    check_in_disk(&inst.op, &inst.base, beta, wprec)?;
    let u = beta.sub(&inst.base);
    let target = pow2_up(-(prec as i64) - 8);
    let rho = inst.op.order();
    let summed = sum_series(inst, &u, rho, target, wprec)?;
    let ics: Vec<NumberValue> = (0..rho)
        .map(|k| NumberValue::Approx(summed.sums[k].widen(summed.tails[k])))
        .collect();
    let info = SegmentInfo {
        from: inst.base.clone(),
        to: beta.clone(),
        terms: summed.terms,
        tail_ratio: summed.ratio,
    };
    Ok((DFiniteInstance::new(inst.op.clone(), beta.clone(), ics)?, info))
}

fn step_ok(
    op: &DiffOperator,
    disks: &[(Enclosure, usize)],
    from: &GaussianRational,
    to: &GaussianRational,
) -> bool {
    if !op.is_ordinary(to) {
        return false;
    }
    let r = distance_lower_bound(from, disks);
    to.sub(from).abs_up() <= SAFETY * r
}

/// Straight-line path from `from` to `to`, recursively subdivided so every
/// step stays within the safety fraction; segments passing too close to a
/// singularity get perpendicular detour waypoints, preferring `side`.
/// Deterministic in all arguments.
pub fn auto_path_sided(
    op: &DiffOperator,
    from: &GaussianRational,
    to: &GaussianRational,
    prec: u32,
    side: PathSide,
) -> Result<EvalPath> {
    for p in [from, to] {
        if !op.is_ordinary(p) {
            return Err(Error::SingularPoint {
                point: format!("{p}"),
            });
        }
    }
    let disks = op.singularities(prec)?;
    let blocking = || {
        disks
            .iter()
            .map(|(d, _)| d.to_decimal(6))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let mut waypoints = vec![from.clone()];
    // stack of pending targets, nearest first
    let mut pending = vec![to.clone()];
    while let Some(target) = pending.pop() {
        let cur = waypoints.last().unwrap().clone();
        if step_ok(op, &disks, &cur, &target) {
            waypoints.push(target);
            if waypoints.len() > PATH_WAYPOINT_CAP {
                return Err(Error::NoPath {
                    blocking: blocking(),
                });
            }
            continue;
        }
        // subdivide; detour perpendicular to the segment when the midpoint
        // sits too close to a singularity
        let half = GaussianRational::from_ratio(1, 2);
        let mid = cur.add(&target).mul(&half);
        let seg = target.sub(&cur);
        let seg_len = seg.abs_up();
        if seg_len == 0.0 {
            continue;
        }
        let mut candidates = vec![mid.clone()];
        for t in [(1i64, 4i64), (1, 2), (1, 1), (3, 2)] {
            let off = seg.mul(&GaussianRational::i()).mul(&GaussianRational::from_ratio(t.0, t.1));
            let a = mid.add(&off);
            let b = mid.sub(&off);
            // order the pair by the preferred half plane
            let (first, second) = match side {
                PathSide::Upper => {
                    if a.im > b.im {
                        (a, b)
                    } else {
                        (b, a)
                    }
                }
                PathSide::Lower => {
                    if a.im < b.im {
                        (a, b)
                    } else {
                        (b, a)
                    }
                }
            };
            candidates.push(first);
            candidates.push(second);
        }
        let threshold = seg_len / 8.0;
        let chosen = candidates
            .into_iter()
            .find(|c| op.is_ordinary(c) && distance_lower_bound(c, &disks) >= threshold);
        match chosen {
            Some(c) => {
                pending.push(target);
                pending.push(c);
            }
            None => {
                return Err(Error::NoPath {
                    blocking: blocking(),
                });
            }
        }
        if pending.len() > PATH_WAYPOINT_CAP {
            return Err(Error::NoPath {
                blocking: blocking(),
            });
        }
    }
    Ok(EvalPath { waypoints })
}

/// auto_path with the default upper-half-plane preference.
pub fn auto_path(
    op: &DiffOperator,
    from: &GaussianRational,
    to: &GaussianRational,
    prec: u32,
) -> Result<EvalPath> {
    auto_path_sided(op, from, to, prec, PathSide::Upper)
}

/// Evaluate the k-th derivative of the solution at zeta, continuing along
/// `path` (or an automatic one) and summing locally at the final hop.
pub fn evaluate(
    inst: &DFiniteInstance,
    zeta: &GaussianRational,
    k: usize,
    prec: u32,
    path: Option<&EvalPath>,
) -> Result<EvalResult> {
    if !inst.op.is_ordinary(zeta) {
        return Err(Error::SingularPoint {
            point: format!("{zeta}"),
        });
    }
    let route = match path {
        Some(p) => {
            if p.waypoints.first() != Some(&inst.base) || p.waypoints.last() != Some(zeta) {
                return Err(Error::BadPath);
            }
            p.validate(&inst.op, prec + 32)?;
            p.clone()
        }
        None => {
            if zeta == &inst.base {
                EvalPath {
                    waypoints: vec![inst.base.clone(), zeta.clone()],
                }
            } else {
                auto_path(&inst.op, &inst.base, zeta, prec + 32)?
            }
        }
    };
    let mut diag = Diagnostics::new();
    let mut cur = inst.clone();
    for w in &route.waypoints[1..] {
        let (next, info) = continue_segment(&cur, w, prec)?;
        diag.segments.push(info);
        cur = next;
    }
    let rho = cur.op.order();
    let value = if k < rho {
        cur.ics[k].as_enclosure(prec + 32)
    } else {
        derivatives_at_base(&cur, k + 1, prec + 32)[k].as_enclosure(prec + 32)
    };
    Ok(EvalResult {
        value,
        diagnostics: diag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::poly::{Poly, PolyG};
    use num_rational::BigRational;

    fn gq(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    fn df(coeffs: &[&[i64]]) -> DiffOperator {
        DiffOperator::new(coeffs.iter().map(|c| PolyG::from_i64(c)).collect())
    }

    fn exp_instance() -> DFiniteInstance {
        DFiniteInstance::new(
            df(&[&[-1], &[1]]),
            GaussianRational::zero(),
            vec![NumberValue::Exact(GaussianRational::one())],
        )
        .unwrap()
    }

    fn log1p_instance() -> DFiniteInstance {
        // (1+z) f'' + f' = 0 with f(0) = 0, f'(0) = 1: log(1+z)
        DFiniteInstance::new(
            df(&[&[0], &[1], &[1, 1]]),
            GaussianRational::zero(),
            vec![
                NumberValue::Exact(GaussianRational::zero()),
                NumberValue::Exact(GaussianRational::one()),
            ],
        )
        .unwrap()
    }

    fn atan_instance() -> DFiniteInstance {
        // (1+z^2) f'' + 2z f' = 0 with f(0) = 0, f'(0) = 1: arctan
        DFiniteInstance::new(
            df(&[&[0], &[0, 2], &[1, 0, 1]]),
            GaussianRational::zero(),
            vec![
                NumberValue::Exact(GaussianRational::zero()),
                NumberValue::Exact(GaussianRational::one()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn singular_base_rejected() {
        // Bessel-type operator: z^2 f'' + z f' + (z^2 - 1) f, singular at 0
        let op = df(&[&[-1, 0, 1], &[0, 1], &[0, 0, 1]]);
        let r = DFiniteInstance::new(
            op,
            GaussianRational::zero(),
            vec![NumberValue::zero(), NumberValue::zero()],
        );
        assert!(matches!(r, Err(Error::SingularPoint { .. })));
    }

    #[test]
    fn exponential_coefficients() {
        let w = local_taylor(&exp_instance(), 8, 64).unwrap();
        let vals = w.exact_values().unwrap();
        let mut fact = GaussianRational::one();
        for (k, v) in vals.iter().enumerate() {
            if k > 1 {
                fact = fact.mul(&GaussianRational::from_i64(k as i64));
            }
            assert_eq!(v.mul(&fact), GaussianRational::one());
        }
    }

    #[test]
    fn log_coefficients_alternate_harmonically() {
        let w = local_taylor(&log1p_instance(), 8, 64).unwrap();
        let vals = w.exact_values().unwrap();
        assert!(vals[0].is_zero());
        for k in 1..8i64 {
            let want = if k % 2 == 1 { gq(1, k) } else { gq(-1, k) };
            assert_eq!(vals[k as usize], want);
        }
    }

    #[test]
    fn arctan_coefficients() {
        let w = local_taylor(&atan_instance(), 9, 64).unwrap();
        let vals = w.exact_values().unwrap();
        let want = [
            gq(0, 1),
            gq(1, 1),
            gq(0, 1),
            gq(-1, 3),
            gq(0, 1),
            gq(1, 5),
            gq(0, 1),
            gq(-1, 7),
            gq(0, 1),
        ];
        assert_eq!(&vals[..], &want);
    }

    /// e to high precision from exact partial sums of 1/n!, with the tail
    /// bracketed by 2/(n+1)!.
    fn e_oracle(prec_bits: u32) -> Enclosure {
        let mut sum = GaussianRational::zero();
        let mut term = GaussianRational::one();
        let mut n = 0i64;
        loop {
            sum = sum.add(&term);
            n += 1;
            term = term.mul(&gq(1, n));
            let bound = 2.0 * term.abs_up();
            if bound < pow2_up(-(prec_bits as i64) - 4) {
                return Enclosure::from_exact(&sum, prec_bits + 16).widen(bound);
            }
        }
    }

    #[test]
    fn exponential_at_one() {
        let prec = 220; // ~66 decimal digits
        let res = evaluate_local(&exp_instance(), &GaussianRational::one(), prec).unwrap();
        assert!(res.value.rad() <= 1e-60);
        assert!(res.value.intersects(&e_oracle(prec)));
        assert_eq!(res.diagnostics.rigor, "heuristic-tail");
    }

    #[test]
    fn outside_disk_is_refused() {
        // log(1+z) has a singularity at -1; 1 sits on the disk boundary
        let r = evaluate_local(&log1p_instance(), &GaussianRational::one(), 64);
        assert!(matches!(r, Err(Error::OutsideDisk { .. })));
    }

    #[test]
    fn base_point_is_exact() {
        let res = evaluate_local(&exp_instance(), &GaussianRational::zero(), 64).unwrap();
        assert_eq!(res.value.rad(), 0.0);
        assert!(res.value.contains_exact(&GaussianRational::one()));
        let res = evaluate(&exp_instance(), &GaussianRational::zero(), 0, 64, None).unwrap();
        assert_eq!(res.value.rad(), 0.0);
    }

    #[test]
    fn continuation_to_one_gives_e() {
        let moved = continue_to(&exp_instance(), &GaussianRational::one(), 160).unwrap();
        let e = e_oracle(160);
        assert!(moved.ics[0].as_enclosure(192).intersects(&e));
    }

    #[test]
    fn arctan_at_half() {
        let res = evaluate(&atan_instance(), &gq(1, 2), 0, 96, None).unwrap();
        let (re, im) = res.value.to_f64_pair();
        assert!(im.abs() < 1e-20);
        assert!((re - 0.4636476090008061).abs() < 1e-15);
    }

    /// log 2 = sum 1/(n 2^n), geometric tail bounded by 1/((n+1) 2^n).
    fn log2_oracle(prec_bits: u32) -> Enclosure {
        let mut sum = GaussianRational::zero();
        let mut pow = GaussianRational::one();
        let mut n = 1i64;
        loop {
            pow = pow.mul(&gq(1, 2));
            sum = sum.add(&pow.mul(&gq(1, n)));
            let bound = pow.abs_up() / (n + 1) as f64;
            if bound < pow2_up(-(prec_bits as i64) - 4) {
                return Enclosure::from_exact(&sum, prec_bits + 16).widen(bound);
            }
            n += 1;
        }
    }

    #[test]
    fn log_two_via_continuation() {
        // 1 is outside the safe disk, so evaluate() must continue
        let res = evaluate(&log1p_instance(), &GaussianRational::one(), 0, 96, None).unwrap();
        assert!(res.diagnostics.segments.len() >= 2);
        assert!(res.value.intersects(&log2_oracle(96)));
    }

    #[test]
    fn derivative_evaluation_consistent() {
        // f = exp: f'(1/2) = f(1/2); also check a finite difference
        let inst = exp_instance();
        let d1 = evaluate(&inst, &gq(1, 2), 1, 128, None).unwrap();
        let d0 = evaluate(&inst, &gq(1, 2), 0, 128, None).unwrap();
        assert!(d1.value.intersects(&d0.value));
        let h = gq(1, 100_000_000);
        let hi = evaluate(&inst, &gq(1, 2).add(&h), 0, 128, None).unwrap();
        let lo = evaluate(&inst, &gq(1, 2).sub(&h), 0, 128, None).unwrap();
        let quot = hi
            .value
            .sub(&lo.value)
            .div_exact(&h.mul(&GaussianRational::from_i64(2)));
        // central difference has O(h^2) truncation error
        assert!(quot.mid_dist_up(&d1.value) < 1e-14);
    }

    #[test]
    fn high_order_derivative_via_ode() {
        // f = exp: every derivative at 0 is 1
        let res = evaluate(&exp_instance(), &GaussianRational::zero(), 5, 64, None).unwrap();
        assert!(res.value.contains_exact(&GaussianRational::one()));
    }

    #[test]
    fn trivial_path_is_single_step() {
        let p = auto_path(
            &df(&[&[-1], &[1]]),
            &GaussianRational::zero(),
            &GaussianRational::one(),
            64,
        )
        .unwrap();
        assert_eq!(p.waypoints.len(), 2);
    }

    #[test]
    fn path_respects_safety_factor() {
        let op = df(&[&[0], &[1], &[1, 1]]); // singular at -1
        let p = auto_path(&op, &GaussianRational::zero(), &GaussianRational::one(), 64).unwrap();
        assert!(p.waypoints.len() >= 3);
        p.validate(&op, 64).unwrap();
        // every step within 3/4 of the exact distance to -1
        let m1 = gq(-1, 1);
        for pair in p.waypoints.windows(2) {
            let dist = pair[0].sub(&m1).abs_up();
            let step = pair[1].sub(&pair[0]).abs_up();
            assert!(step <= 0.7500001 * dist);
        }
    }

    #[test]
    fn hinted_paths_pass_the_singularity_on_opposite_sides() {
        // (1+z) f' + i f = 0: solution (1+z)^(-i), singular at -1
        let op = DiffOperator::new(vec![
            Poly::constant(GaussianRational::i()),
            PolyG::from_i64(&[1, 1]),
        ]);
        let to = gq(-2, 1);
        let upper =
            auto_path_sided(&op, &GaussianRational::zero(), &to, 64, PathSide::Upper).unwrap();
        let lower =
            auto_path_sided(&op, &GaussianRational::zero(), &to, 64, PathSide::Lower).unwrap();
        let zero = BigRational::from_integer(0.into());
        assert!(upper.waypoints[1..upper.waypoints.len() - 1]
            .iter()
            .any(|w| w.im > zero));
        assert!(upper.waypoints[1..upper.waypoints.len() - 1]
            .iter()
            .all(|w| w.im >= zero));
        assert!(lower.waypoints[1..lower.waypoints.len() - 1]
            .iter()
            .any(|w| w.im < zero));
        upper.validate(&op, 64).unwrap();
        lower.validate(&op, 64).unwrap();
    }

    /// pi from the Machin formula with exact-arithmetic arctan partial
    /// sums (alternating series, so truncation brackets the value).
    fn pi_oracle(prec_bits: u32) -> Enclosure {
        fn atan_inv(q: i64, prec_bits: u32) -> Enclosure {
            let x = gq(1, q);
            let x2 = x.mul(&x);
            let mut term = x.clone();
            let mut sum = GaussianRational::zero();
            let mut n = 0i64;
            loop {
                let signed = if n % 2 == 0 { term.clone() } else { term.neg() };
                sum = sum.add(&signed.mul(&gq(1, 2 * n + 1)));
                term = term.mul(&x2);
                n += 1;
                let bound = term.abs_up();
                if bound < pow2_up(-(prec_bits as i64) - 8) {
                    return Enclosure::from_exact(&sum, prec_bits + 16).widen(bound);
                }
            }
        }
        let a = atan_inv(5, prec_bits).mul_exact(&GaussianRational::from_i64(16));
        let b = atan_inv(239, prec_bits).mul_exact(&GaussianRational::from_i64(4));
        a.sub(&b)
    }

    #[test]
    fn e_to_the_pi_via_upper_path() {
        // (1+z)^(-i) at z = -2 along an upper-half-plane path is
        // (-1)^(-i) = e^pi for the branch reached that way
        let op = DiffOperator::new(vec![
            Poly::constant(GaussianRational::i()),
            PolyG::from_i64(&[1, 1]),
        ]);
        let inst = DFiniteInstance::new(
            op.clone(),
            GaussianRational::zero(),
            vec![NumberValue::Exact(GaussianRational::one())],
        )
        .unwrap();
        let to = gq(-2, 1);
        let prec = 128;
        let upper = auto_path_sided(&op, &GaussianRational::zero(), &to, prec, PathSide::Upper)
            .unwrap();
        let res = evaluate(&inst, &to, 0, prec, Some(&upper)).unwrap();
        let (re, im) = res.value.to_f64_pair();
        assert!((re - 23.140692632779269).abs() < 1e-10, "re = {re}");
        assert!(im.abs() < 1e-10);
        // mirrored path gives the reciprocal branch e^(-pi)
        let lower = auto_path_sided(&op, &GaussianRational::zero(), &to, prec, PathSide::Lower)
            .unwrap();
        let res = evaluate(&inst, &to, 0, prec, Some(&lower)).unwrap();
        let (re, im) = res.value.to_f64_pair();
        assert!((re - (-23.140692632779269f64).recip().abs()).abs() < 1e-12, "re = {re}");
        assert!(im.abs() < 1e-12);
        let _ = pi_oracle(64); // exercised more heavily in the acceptance suite
    }

    #[test]
    fn path_independence_for_homotopic_paths() {
        let inst = log1p_instance();
        let direct = EvalPath {
            waypoints: vec![GaussianRational::zero(), gq(1, 2)],
        };
        let detour = EvalPath {
            waypoints: vec![
                GaussianRational::zero(),
                GaussianRational::new(
                    BigRational::new(1.into(), 4.into()),
                    BigRational::new(1.into(), 4.into()),
                ),
                gq(1, 2),
            ],
        };
        let a = evaluate(&inst, &gq(1, 2), 0, 96, Some(&direct)).unwrap();
        let b = evaluate(&inst, &gq(1, 2), 0, 96, Some(&detour)).unwrap();
        assert!(a.value.intersects(&b.value));
    }

    #[test]
    fn continuation_semigroup() {
        let inst = exp_instance();
        let one_hop = continue_to(&inst, &gq(1, 2), 128).unwrap();
        let via = continue_to(&inst, &gq(1, 4), 128).unwrap();
        let two_hop = continue_to(&via, &gq(1, 2), 128).unwrap();
        assert!(one_hop.ics[0]
            .as_enclosure(160)
            .intersects(&two_hop.ics[0].as_enclosure(160)));
    }

    #[test]
    fn doubling_precision_shrinks_radius() {
        let inst = log1p_instance();
        let lo = evaluate(&inst, &GaussianRational::one(), 0, 64, None).unwrap();
        let hi = evaluate(&inst, &GaussianRational::one(), 0, 128, None).unwrap();
        assert!(hi.value.rad() <= lo.value.rad());
    }

    #[test]
    fn invalid_paths_rejected() {
        let inst = log1p_instance();
        // wrong endpoints
        let p = EvalPath {
            waypoints: vec![gq(1, 2), GaussianRational::one()],
        };
        assert!(matches!(
            evaluate(&inst, &GaussianRational::one(), 0, 64, Some(&p)),
            Err(Error::BadPath)
        ));
        // step too large for the safe disk
        let p = EvalPath {
            waypoints: vec![GaussianRational::zero(), GaussianRational::one()],
        };
        assert!(matches!(
            evaluate(&inst, &GaussianRational::one(), 0, 64, Some(&p)),
            Err(Error::BadPath)
        ));
    }
}
