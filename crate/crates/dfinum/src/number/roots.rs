//! Certified complex root enclosures: simultaneous f64 iteration on the
//! squarefree part, Newton polishing in exact arithmetic, and an a
//! posteriori radius bound `deg * |q(x)/q'(x)|` which is valid for any
//! polynomial with simple roots.

use crate::error::{Error, Result};
use crate::number::dyadic::{up, Dyadic};
use crate::number::enclosure::Enclosure;
use crate::number::gaussian::GaussianRational;
use crate::number::poly::PolyG;
use num_rational::BigRational;
use num_traits::ToPrimitive;

#[derive(Clone, Copy)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    fn new(re: f64, im: f64) -> Self {
        C64 { re, im }
    }
    fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: C64) -> C64 {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    fn div(self, o: C64) -> C64 {
        let n = o.re * o.re + o.im * o.im;
        C64::new(
            (self.re * o.re + self.im * o.im) / n,
            (self.im * o.re - self.re * o.im) / n,
        )
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
}

fn eval_c64(coeffs: &[C64], x: C64) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        acc = acc.mul(x).add(*c);
    }
    acc
}

/// All-roots fixed-point iteration (Durand-Kerner) in double precision.
fn durand_kerner(q: &PolyG) -> Vec<C64> {
    let n = q.deg();
    let lc = q.lc();
    let coeffs: Vec<C64> = q
        .coeffs()
        .iter()
        .map(|c| {
            let m = c / &lc;
            let (re, im) = m.to_f64_pair();
            C64::new(re, im)
        })
        .collect();
    // Cauchy-style bound on root magnitudes.
    let bound = 1.0
        + coeffs[..n]
            .iter()
            .map(|c| c.abs())
            .fold(0.0f64, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut roots: Vec<C64> = (0..n)
        .map(|k| {
            let mut p = C64::new(1.0, 0.0);
            for _ in 0..=k {
                p = p.mul(seed);
            }
            p.mul(C64::new(bound.min(1e6), 0.0))
        })
        .collect();
    for _ in 0..400 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let xi = roots[i];
            let mut den = C64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den = den.mul(xi.sub(roots[j]));
                }
            }
            let num = eval_c64(&coeffs, xi);
            let delta = num.div(den);
            roots[i] = xi.sub(delta);
            moved = moved.max(delta.abs());
        }
        if moved < 1e-14 {
            break;
        }
    }
    roots
}

fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(|| BigRational::from_integer(0.into()))
}

fn round_gaussian(x: &GaussianRational, prec: u32) -> GaussianRational {
    let (re, _) = Dyadic::from_rational(&x.re, prec);
    let (im, _) = Dyadic::from_rational(&x.im, prec);
    GaussianRational::new(re.to_rational(), im.to_rational())
}

/// Certified enclosing radius at the point x: deg(q) * |q(x)/q'(x)|,
/// computed as an f64 upper bound from exact values.
fn cert_radius(q: &PolyG, qd: &PolyG, x: &GaussianRational) -> Option<f64> {
    let v = q.eval(x);
    let d = qd.eval(x);
    if d.is_zero() {
        return None;
    }
    let ratio2 = v.norm2() / d.norm2();
    let r = up(ratio2.to_f64()?.sqrt());
    Some(up(r * q.deg() as f64))
}

/// Polish one approximate root by exact Newton steps, returning a midpoint
/// (dyadic Gaussian rational) and a certified radius <= target if possible.
fn polish(q: &PolyG, qd: &PolyG, start: C64, target: f64) -> Option<(GaussianRational, f64)> {
    let prec = ((-target.log2()).max(10.0) as u32) * 2 + 64;
    let mut x = GaussianRational::new(f64_to_rational(start.re), f64_to_rational(start.im));
    let mut best: Option<(GaussianRational, f64)> = None;
    for _ in 0..64 {
        let rad = cert_radius(q, qd, &x)?;
        if best.as_ref().map_or(true, |(_, b)| rad < *b) {
            best = Some((x.clone(), rad));
        }
        if rad <= target {
            return best;
        }
        let v = q.eval(&x);
        let d = qd.eval(&x);
        if d.is_zero() {
            return best;
        }
        x = round_gaussian(&(&x - &(&v / &d)), prec);
        if let Some((_, b)) = &best {
            if rad > *b * 0.5 && rad <= *b {
                // Stalled twice in a row at this precision: give up refining.
                if *b <= target {
                    return best;
                }
            }
        }
    }
    best
}

/// Squarefree decomposition (Yun): returns pairs (factor, multiplicity)
/// with pairwise coprime squarefree factors.
fn squarefree_decomposition(p: &PolyG) -> Vec<(PolyG, usize)> {
    let mut out = Vec::new();
    let pd = p.derivative();
    let g = p.gcd(&pd);
    if g.is_constant() {
        out.push((p.monic(), 1));
        return out;
    }
    let mut c = p.divrem(&g).0;
    let mut d = pd.divrem(&g).0.sub(&c.derivative());
    let mut k = 1usize;
    while !c.is_constant() {
        let f = c.gcd(&d);
        if f.deg() > 0 {
            out.push((f.clone(), k));
        }
        c = c.divrem(&f).0;
        d = d.divrem(&f).0.sub(&c.derivative());
        k += 1;
    }
    out
}

/// Certified complex roots with multiplicities.  `prec` is the working
/// precision in bits; returned disks have radius about 2^-prec relative to
/// the root magnitude and are pairwise disjoint across distinct roots.
pub fn complex_roots(p: &PolyG, prec: u32) -> Result<Vec<(Enclosure, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(vec![]);
    }
    let mut disks: Vec<(Enclosure, usize, f64)> = Vec::new();
    for (q, mult) in squarefree_decomposition(p) {
        if q.deg() == 0 {
            continue;
        }
        let qd = q.derivative();
        let approx = durand_kerner(&q);
        for a in approx {
            let scale = a.abs().max(1.0);
            let target = (-(prec as f64)).exp2() * scale;
            let (mid, rad) = polish(&q, &qd, a, target).ok_or(Error::RootSeparation {
                achieved: f64::INFINITY,
                requested: target,
            })?;
            let enc = Enclosure::from_exact(&mid, prec + 16).widen(rad);
            disks.push((enc, mult, rad));
        }
    }
    // Pairwise disjointness certifies one root per disk.
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            let (a, _, ra) = &disks[i];
            let (b, _, rb) = &disks[j];
            let dist = a.mid_dist_up(b);
            if dist <= ra + rb {
                return Err(Error::RootSeparation {
                    achieved: dist,
                    requested: ra + rb,
                });
            }
        }
    }
    Ok(disks.into_iter().map(|(e, m, _)| (e, m)).collect())
}

/// Lower bound on the distance from an exact point to every disk in `roots`.
/// Returns +inf when the list is empty.
pub fn distance_lower_bound(point: &GaussianRational, roots: &[(Enclosure, usize)]) -> f64 {
    let mut best = f64::INFINITY;
    for (disk, _) in roots {
        let pe = Enclosure::from_exact(point, disk.prec().max(64));
        let d = pe.sub(disk);
        let lower = d.abs_down();
        best = best.min(lower);
    }
    best
}
