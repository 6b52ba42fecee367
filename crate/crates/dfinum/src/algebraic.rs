//! Algebraic functions: power-series roots of bivariate polynomials,
//! annihilating differential operators for algebraic functions, and
//! composition of a D-finite function with an algebraic function.

use crate::error::{Error, Result};
use crate::linalg::SpanSolver;
use crate::number::gaussian::GaussianRational;
use crate::number::poly::{Field, Poly, PolyG};
use crate::number::ratfun::RationalFunction;
use crate::ore::ratop::RatOp;
use crate::ore::{DiffAlg, DiffOperator, Operator};

/// P(z,y) as a list of z-polynomials; index j holds the coefficient of y^j.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariatePolynomial {
    rows: Vec<PolyG>,
}

/// Polynomial in y over the rational-function field F(z).
type YPoly = Poly<RationalFunction>;

impl BivariatePolynomial {
    pub fn new(mut rows: Vec<PolyG>) -> Result<Self> {
        while rows.last().map_or(false, |p| p.is_zero()) {
            rows.pop();
        }
        if rows.len() < 2 {
            return Err(Error::ConstantPolynomial(
                "bivariate polynomial must have y-degree at least 1".into(),
            ));
        }
        Ok(BivariatePolynomial { rows })
    }

    pub fn parse(s: &str) -> Result<Self> {
        BivariatePolynomial::new(crate::text::parse_bivariate_rows(s)?)
    }

    pub fn deg_y(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn rows(&self) -> &[PolyG] {
        &self.rows
    }

    /// P(0, y) as a polynomial in y.
    pub fn fiber_at_origin(&self) -> PolyG {
        Poly::new(self.rows.iter().map(|p| p.coeff(0)).collect())
    }

    /// dP/dy row list (may have y-degree 0).
    fn dy_rows(&self) -> Vec<PolyG> {
        self.rows
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, p)| p.scale(&GaussianRational::from_i64(j as i64)))
            .collect()
    }

    /// P(z, f) mod z^n for a truncated series f (Horner in y).
    pub fn eval_series(&self, f: &PolyG, n: usize) -> PolyG {
        eval_rows_series(&self.rows, f, n)
    }

    /// View in F(z)[y].
    fn to_ypoly(&self) -> YPoly {
        rows_to_ypoly(&self.rows)
    }
}

impl std::fmt::Display for BivariatePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", crate::text::format_bivariate_rows(&self.rows, 'z', 'y'))
    }
}

fn rows_to_ypoly(rows: &[PolyG]) -> YPoly {
    Poly::new(
        rows.iter()
            .map(|p| RationalFunction::from_poly(p.clone()))
            .collect(),
    )
}

fn eval_rows_series(rows: &[PolyG], f: &PolyG, n: usize) -> PolyG {
    let mut acc: PolyG = Poly::zero();
    for row in rows.iter().rev() {
        acc = trunc(&acc.mul(f), n).add(&trunc(row, n));
    }
    acc
}

fn trunc(p: &PolyG, n: usize) -> PolyG {
    Poly::new(
        (0..n.min(p.deg() + 1))
            .map(|k| p.coeff(k))
            .collect(),
    )
}

/// Inverse of a series with nonzero constant term, mod z^n (Newton).
fn series_inv(u: &PolyG, n: usize) -> PolyG {
    let c = u.coeff(0);
    assert!(!c.is_zero(), "series inversion needs a unit constant term");
    let mut g = Poly::constant(c.inv());
    let mut m = 1usize;
    while m < n {
        m = (2 * m).min(n);
        // g <- g(2 - u g) mod z^m
        let ug = trunc(&u.mul(&g), m);
        let two_minus = Poly::constant(GaussianRational::from_i64(2)).sub(&ug);
        g = trunc(&g.mul(&two_minus), m);
    }
    g
}

/// The unique power-series root of P with constant term y0.
#[derive(Clone, Debug)]
pub struct SeriesRoot {
    parent: BivariatePolynomial,
    y0: GaussianRational,
    coeffs: Vec<GaussianRational>,
}

impl SeriesRoot {
    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn y0(&self) -> &GaussianRational {
        &self.y0
    }

    pub fn parent(&self) -> &BivariatePolynomial {
        &self.parent
    }

    /// Make at least n coefficients available.
    pub fn extend(&mut self, n: usize) -> Result<()> {
        if self.coeffs.len() < n {
            *self = series_root(&self.parent, &self.y0, n)?;
        }
        Ok(())
    }

    pub fn truncation(&self) -> PolyG {
        Poly::new(self.coeffs.clone())
    }
}

/// Newton lifting of the series root with f(0) = y0, exact to order n.
pub fn series_root(
    p: &BivariatePolynomial,
    y0: &GaussianRational,
    n: usize,
) -> Result<SeriesRoot> {
    let fiber = p.fiber_at_origin();
    if !fiber.eval(y0).is_zero() {
        return Err(Error::NotARoot {
            point: format!("{y0}"),
        });
    }
    let dy = p.dy_rows();
    let dfiber = Poly::new(dy.iter().map(|q| q.coeff(0)).collect());
    if dfiber.eval(y0).is_zero() {
        return Err(Error::CriticalRoot {
            point: format!("{y0}"),
        });
    }
    let n = n.max(1);
    let mut f = Poly::constant(y0.clone());
    let mut m = 1usize;
    while m < n {
        m = (2 * m).min(n);
        let num = trunc(&p.eval_series(&f, m), m);
        let den = eval_rows_series(&dy, &f, m);
        let delta = trunc(&num.mul(&series_inv(&den, m)), m);
        f = trunc(&f.sub(&delta), m);
    }
    // certify the truncation by exact substitution
    let residual = p.eval_series(&f, n);
    assert!(
        residual.is_zero(),
        "series root lifting failed to certify: residual {residual:?}"
    );
    let coeffs = (0..n).map(|k| f.coeff(k)).collect();
    Ok(SeriesRoot {
        parent: p.clone(),
        y0: y0.clone(),
        coeffs,
    })
}

/// Reduce mod P and return the coefficient vector of length deg_y(P).
fn reduce_vec(el: &YPoly, p: &YPoly) -> (YPoly, Vec<RationalFunction>) {
    let r = el.rem(p);
    let d = p.deg();
    let v = (0..d).map(|j| r.coeff(j)).collect();
    (r, v)
}

/// Coefficient-wise d/dz of an element of F(z)[y].
fn dz_ypoly(el: &YPoly) -> YPoly {
    Poly::new((0..=el.deg()).map(|j| el.coeff(j).delta_diff()).collect())
}

/// gcd-based squarefreeness check and the derivative inverse mod P:
/// returns (P as YPoly, g' = -P_z/P_y mod P).
fn quotient_setup(p: &BivariatePolynomial) -> Result<(YPoly, YPoly)> {
    let py = p.to_ypoly();
    let pd = py.derivative();
    if py.gcd(&pd).deg() > 0 {
        return Err(Error::NotSquarefree);
    }
    let (_, s, _) = pd.xgcd(&py); // s*pd + t*py = 1
    let inv_pd = s.rem(&py);
    let pz = rows_to_ypoly(&p.rows.iter().map(|r| r.derivative()).collect::<Vec<_>>());
    let fprime = pz.neg().mul(&inv_pd).rem(&py);
    Ok((py, fprime))
}

/// Differential annihilator of every root of P (Abel's theorem): find the
/// first linear dependence among f, f', f'', ... represented in
/// F(z)[y]/(P) via f' = -P_z/P_y.
pub fn alg_to_diffop(p: &BivariatePolynomial) -> Result<DiffOperator> {
    let (py, fprime) = quotient_setup(p)?;
    let d = py.deg();
    let mut solver = SpanSolver::new(d);
    // f itself is the class of y
    let mut r: YPoly = Poly::new(vec![RationalFunction::zero(), RationalFunction::one()]);
    loop {
        let (red, v) = reduce_vec(&r, &py);
        if let Some(comb) = solver.insert(v) {
            return Ok(RatOp::<DiffAlg>::new(comb).to_operator());
        }
        // (R)' = dR/dz + dR/dy * f'
        r = dz_ypoly(&red).add(&red.derivative().mul(&fprime)).rem(&py);
    }
}

/// Annihilator of f(g(z)) for every solution f of l and every root g of p.
/// Ansatz over the module with basis y^j * (f^(i) o g), dimension
/// order(l) * deg_y(p).
pub fn compose_dfinite_algebraic(
    l: &DiffOperator,
    p: &BivariatePolynomial,
) -> Result<DiffOperator> {
    if l.is_zero() {
        return Err(Error::ZeroOperator);
    }
    let rho = l.order();
    if rho == 0 {
        // only the zero function is annihilated, and 0 o g = 0
        return Ok(Operator::one());
    }
    let (py, fprime) = quotient_setup(p)?;
    let d = py.deg();
    // p_i(g(z)) is p_i with z replaced by y, as an element of the quotient
    let subst = |q: &PolyG| -> YPoly {
        Poly::new(
            (0..=q.deg())
                .map(|k| RationalFunction::from_poly(Poly::constant(q.coeff(k))))
                .collect(),
        )
        .rem(&py)
    };
    let lc_y = subst(&l.lc());
    let (g, s, _) = lc_y.xgcd(&py);
    if g.deg() > 0 || g.is_zero() {
        return Err(Error::LeadingCoeffNotInvertible);
    }
    let inv_lc = s.rem(&py);
    // reduction of f^(rho) o g onto the lower slots
    let red: Vec<YPoly> = (0..rho)
        .map(|i| subst(&l.coeff(i)).mul(&inv_lc).neg().rem(&py))
        .collect();
    let dim = rho * d;
    let mut solver = SpanSolver::new(dim);
    // element = sum_i a[i] * (f^(i) o g) with a[i] in F(z)[y]/(P)
    let mut a: Vec<YPoly> = vec![Poly::zero(); rho];
    a[0] = Poly::one();
    loop {
        let mut flat = Vec::with_capacity(dim);
        for ai in &a {
            for j in 0..d {
                flat.push(ai.coeff(j));
            }
        }
        if let Some(comb) = solver.insert(flat) {
            return Ok(RatOp::<DiffAlg>::new(comb).to_operator());
        }
        // differentiate: a_i (f_i o g) -> (a_i' + da_i/dy g')(f_i o g)
        //                              + a_i g' (f_{i+1} o g)
        let mut next: Vec<YPoly> = vec![Poly::zero(); rho];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let base = dz_ypoly(ai).add(&ai.derivative().mul(&fprime)).rem(&py);
            next[i] = next[i].add(&base);
            let chain = ai.mul(&fprime).rem(&py);
            if i + 1 < rho {
                next[i + 1] = next[i + 1].add(&chain);
            } else {
                for (i2, r) in red.iter().enumerate() {
                    next[i2] = next[i2].add(&chain.mul(r).rem(&py));
                }
            }
        }
        a = next;
    }
}
