//! Text formats shared by the CLI and the file grammars: rational and
//! Gaussian literals, polynomial literals like `3*z^2 - 1/2*z + 1+2*i`,
//! operator forms `diff z: [p0; ...; pr]` / `shift n: [...]`, bivariate
//! polynomials `poly z,y: [[...],[...]]`, number values (`~mid ± rad`),
//! and instances.

use crate::error::{Error, Result};
use crate::number::enclosure::{Enclosure, NumberValue};
use crate::number::gaussian::GaussianRational;
use crate::number::poly::{Field, Poly, PolyG};
use crate::ore::{DiffOperator, Operator, OreAlgebra, ShiftOperator};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

// ---------------------------------------------------------------- parsing

struct Cursor {
    chars: Vec<char>,
    pos: usize,
}

impl Cursor {
    fn new(s: &str) -> Self {
        Cursor {
            chars: s.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn peek_raw(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn error(&self, msg: &str) -> Error {
        let rest: String = self.chars[self.pos.min(self.chars.len())..]
            .iter()
            .take(20)
            .collect();
        Error::Parse(format!("{msg} at '{rest}'"))
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let mut out = String::new();
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_alphanumeric() || c == '_' {
                out.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        out
    }

    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let mut out = String::new();
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_digit() {
                out.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        if out.is_empty() {
            Err(self.error("expected digits"))
        } else {
            Ok(out)
        }
    }

    fn uint(&mut self) -> Result<usize> {
        self.digits()?
            .parse()
            .map_err(|_| self.error("integer too large"))
    }

    /// Unsigned rational: digits ('/' digits)?
    fn rational(&mut self) -> Result<BigRational> {
        let num: BigInt = self.digits()?.parse().unwrap();
        if self.eat('/') {
            let den: BigInt = self.digits()?.parse().unwrap();
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            Ok(BigRational::new(num, den))
        } else {
            Ok(BigRational::from_integer(num))
        }
    }

    /// Unsigned decimal literal: digits ['.' digits] [('e'|'E') ['+'|'-'] digits]
    fn decimal(&mut self) -> Result<BigRational> {
        let int = self.digits()?;
        let mut mant: BigInt = int.parse().unwrap();
        let mut scale = 0i64;
        if self.peek_raw() == Some('.') {
            self.pos += 1;
            let frac = self.digits()?;
            scale = frac.len() as i64;
            mant = mant * BigInt::from(10u32).pow(frac.len() as u32)
                + frac.parse::<BigInt>().unwrap();
        }
        let mut exp = 0i64;
        if matches!(self.peek_raw(), Some('e') | Some('E')) {
            self.pos += 1;
            let neg = if self.peek_raw() == Some('-') {
                self.pos += 1;
                true
            } else {
                if self.peek_raw() == Some('+') {
                    self.pos += 1;
                }
                false
            };
            let e: i64 = self
                .digits()?
                .parse()
                .map_err(|_| self.error("exponent too large"))?;
            exp = if neg { -e } else { e };
        }
        let net = exp - scale;
        let ten = BigInt::from(10u32);
        Ok(if net >= 0 {
            BigRational::from_integer(mant * ten.pow(net as u32))
        } else {
            BigRational::new(mant, ten.pow((-net) as u32))
        })
    }

    /// A product of factors: rationals, `i`, and powers of the variable.
    fn term(&mut self, var: Option<char>) -> Result<(GaussianRational, usize)> {
        let mut coeff = GaussianRational::one();
        let mut pow = 0usize;
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let r = self.rational()?;
                    coeff = coeff.mul(&GaussianRational::from_rational(r));
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let id = self.ident();
                    if id == "i" {
                        coeff = coeff.mul(&GaussianRational::i());
                    } else if id.len() == 1 && Some(id.chars().next().unwrap()) == var {
                        let e = if self.eat('^') { self.uint()? } else { 1 };
                        pow += e;
                    } else {
                        return Err(self.error(&format!("unexpected symbol '{id}'")));
                    }
                }
                _ => return Err(self.error("expected a term")),
            }
            if !self.eat('*') {
                break;
            }
        }
        Ok((coeff, pow))
    }

    /// Polynomial literal in the given variable.
    fn poly(&mut self, var: Option<char>) -> Result<PolyG> {
        let mut coeffs: Vec<GaussianRational> = Vec::new();
        let mut neg = false;
        if self.eat('-') {
            neg = true;
        } else {
            let _ = self.eat('+');
        }
        loop {
            let (c, p) = self.term(var)?;
            let c = if neg { c.neg() } else { c };
            if coeffs.len() <= p {
                coeffs.resize(p + 1, GaussianRational::zero());
            }
            coeffs[p] = coeffs[p].add(&c);
            if self.eat('+') {
                neg = false;
            } else if self.eat('-') {
                neg = true;
            } else {
                break;
            }
        }
        Ok(Poly::new(coeffs))
    }

    fn poly_list(&mut self, var: Option<char>) -> Result<Vec<PolyG>> {
        self.expect('[')?;
        let mut polys = vec![self.poly(var)?];
        while self.eat(';') {
            polys.push(self.poly(var)?);
        }
        self.expect(']')?;
        Ok(polys)
    }

    fn end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.pos == self.chars.len() {
            Ok(())
        } else {
            Err(self.error("trailing input"))
        }
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let mut cur = Cursor::new(s);
    let neg = cur.eat('-');
    let r = cur.rational()?;
    cur.end()?;
    Ok(if neg { -r } else { r })
}

pub fn parse_gaussian(s: &str) -> Result<GaussianRational> {
    let mut cur = Cursor::new(s);
    let g = gaussian_inner(&mut cur)?;
    cur.end()?;
    Ok(g)
}

fn gaussian_inner(cur: &mut Cursor) -> Result<GaussianRational> {
    let p = cur.poly(None)?;
    if p.deg() > 0 {
        return Err(cur.error("expected a constant"));
    }
    Ok(p.coeff(0))
}

pub fn parse_poly(s: &str, var: char) -> Result<PolyG> {
    let mut cur = Cursor::new(s);
    let p = cur.poly(Some(var))?;
    cur.end()?;
    Ok(p)
}

/// A parsed operator of either algebra.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyOperator {
    Diff(DiffOperator),
    Shift(ShiftOperator),
}

pub fn parse_operator(s: &str) -> Result<AnyOperator> {
    let mut cur = Cursor::new(s);
    let op = operator_inner(&mut cur)?;
    cur.end()?;
    Ok(op)
}

fn operator_inner(cur: &mut Cursor) -> Result<AnyOperator> {
    let kind = cur.ident();
    let var = cur.ident();
    if var.len() != 1 {
        return Err(cur.error("expected a single-letter variable"));
    }
    let var = var.chars().next().unwrap();
    cur.expect(':')?;
    let polys = cur.poly_list(Some(var))?;
    match kind.as_str() {
        "diff" => Ok(AnyOperator::Diff(DiffOperator::new(polys))),
        "shift" => Ok(AnyOperator::Shift(ShiftOperator::new(polys))),
        other => Err(cur.error(&format!("unknown operator kind '{other}'"))),
    }
}

pub fn parse_diff_operator(s: &str) -> Result<DiffOperator> {
    match parse_operator(s)? {
        AnyOperator::Diff(op) => Ok(op),
        AnyOperator::Shift(_) => Err(Error::AlgebraMismatch),
    }
}

pub fn parse_shift_operator(s: &str) -> Result<ShiftOperator> {
    match parse_operator(s)? {
        AnyOperator::Shift(op) => Ok(op),
        AnyOperator::Diff(_) => Err(Error::AlgebraMismatch),
    }
}

/// `poly z,y: [[row for y^0],[row for y^1],...]` with rows polynomial
/// literals in the first variable.
pub fn parse_bivariate_rows(s: &str) -> Result<Vec<PolyG>> {
    let mut cur = Cursor::new(s);
    let kw = cur.ident();
    if kw != "poly" {
        return Err(cur.error("expected 'poly'"));
    }
    let inner = cur.ident();
    if inner.len() != 1 {
        return Err(cur.error("expected a single-letter variable"));
    }
    let inner = inner.chars().next().unwrap();
    cur.expect(',')?;
    let outer = cur.ident();
    if outer.len() != 1 {
        return Err(cur.error("expected a single-letter variable"));
    }
    cur.expect(':')?;
    cur.expect('[')?;
    let mut rows = Vec::new();
    loop {
        cur.expect('[')?;
        rows.push(cur.poly(Some(inner))?);
        cur.expect(']')?;
        if !cur.eat(',') {
            break;
        }
    }
    cur.expect(']')?;
    cur.end()?;
    Ok(rows)
}

/// NumberValue literal: a Gaussian rational, or `~re [+ im*i] ± rad`.
pub fn parse_number_value(s: &str, prec: u32) -> Result<NumberValue> {
    let mut cur = Cursor::new(s);
    let v = number_value_inner(&mut cur, prec)?;
    cur.end()?;
    Ok(v)
}

fn number_value_inner(cur: &mut Cursor, prec: u32) -> Result<NumberValue> {
    if !cur.eat('~') {
        return Ok(NumberValue::Exact(gaussian_inner(cur)?));
    }
    let re_neg = cur.eat('-');
    let re = cur.decimal()?;
    let re = if re_neg { -re } else { re };
    let mut im: BigRational = num_traits::Zero::zero();
    if matches!(cur.peek(), Some('+') | Some('-')) {
        let neg = cur.bump() == Some('-');
        let v = cur.decimal()?;
        cur.expect('*')?;
        let id = cur.ident();
        if id != "i" {
            return Err(cur.error("expected 'i'"));
        }
        im = if neg { -v } else { v };
    }
    let mid = GaussianRational::new(re, im);
    let mut rad = 0.0f64;
    if cur.eat('±') {
        let r = cur.decimal()?;
        rad = crate::number::dyadic::up(rational_to_f64_up(&r));
    }
    Ok(NumberValue::Approx(
        Enclosure::from_exact(&mid, prec).widen(rad),
    ))
}

fn rational_to_f64_up(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::INFINITY)
}

/// `instance { op: <diff op>; base: <gaussian>; ics: [v, v, ...] }`
pub fn parse_instance(
    s: &str,
    prec: u32,
) -> Result<(DiffOperator, GaussianRational, Vec<NumberValue>)> {
    let mut cur = Cursor::new(s);
    let kw = cur.ident();
    if kw != "instance" {
        return Err(cur.error("expected 'instance'"));
    }
    cur.expect('{')?;
    let mut op = None;
    let mut base = None;
    let mut ics = None;
    loop {
        match cur.peek() {
            Some('}') => break,
            None => return Err(cur.error("unterminated instance")),
            _ => {}
        }
        let key = cur.ident();
        cur.expect(':')?;
        match key.as_str() {
            "op" => match operator_inner(&mut cur)? {
                AnyOperator::Diff(d) => op = Some(d),
                AnyOperator::Shift(_) => return Err(Error::AlgebraMismatch),
            },
            "base" => base = Some(gaussian_inner(&mut cur)?),
            "ics" => {
                cur.expect('[')?;
                let mut v = vec![number_value_inner(&mut cur, prec)?];
                while cur.eat(',') {
                    v.push(number_value_inner(&mut cur, prec)?);
                }
                cur.expect(']')?;
                ics = Some(v);
            }
            other => return Err(cur.error(&format!("unknown instance field '{other}'"))),
        }
        if !cur.eat(';') {
            break;
        }
    }
    cur.expect('}')?;
    cur.end()?;
    match (op, base, ics) {
        (Some(op), Some(base), Some(ics)) => Ok((op, base, ics)),
        _ => Err(Error::Parse(
            "instance requires op, base, and ics fields".into(),
        )),
    }
}

// -------------------------------------------------------------- formatting

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// One signed monomial `q * [i] * var^k` without the sign.
fn fmt_monomial(q: &BigRational, imaginary: bool, var: char, k: usize) -> String {
    let mut parts: Vec<String> = Vec::new();
    let abs = q.abs();
    if !abs.is_one() || (!imaginary && k == 0) {
        parts.push(fmt_rat(&abs));
    }
    if imaginary {
        parts.push("i".to_string());
    }
    if k == 1 {
        parts.push(var.to_string());
    } else if k > 1 {
        parts.push(format!("{var}^{k}"));
    }
    parts.join("*")
}

pub fn format_poly(p: &PolyG, var: char) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for k in (0..=p.deg()).rev() {
        let c = p.coeff(k);
        for (q, imaginary) in [(&c.re, false), (&c.im, true)] {
            if num_traits::Zero::is_zero(q) {
                continue;
            }
            if out.is_empty() {
                if q.is_negative() {
                    out.push('-');
                }
            } else if q.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            out.push_str(&fmt_monomial(q, imaginary, var, k));
        }
    }
    out
}

pub fn format_operator<A: OreAlgebra>(op: &Operator<A>) -> String {
    let kind = if A::VAR == 'n' { "shift" } else { "diff" };
    let body = if op.is_zero() {
        "0".to_string()
    } else {
        op.coeffs()
            .iter()
            .map(|p| format_poly(p, A::VAR))
            .collect::<Vec<_>>()
            .join("; ")
    };
    format!("{kind} {}: [{body}]", A::VAR)
}

pub fn format_bivariate_rows(rows: &[PolyG], inner: char, outer: char) -> String {
    let body = rows
        .iter()
        .map(|p| format!("[{}]", format_poly(p, inner)))
        .collect::<Vec<_>>()
        .join(",");
    format!("poly {inner},{outer}: [{body}]")
}

pub fn format_number_value(v: &NumberValue) -> String {
    match v {
        NumberValue::Exact(x) => format!("{x}"),
        NumberValue::Approx(e) => {
            // enough digits that the printed radius absorbs the decimal
            // truncation of the midpoint
            let digits = if e.rad() > 0.0 {
                ((-e.rad().log10()).ceil() as i64 + 2).clamp(1, 60) as usize
            } else {
                40
            };
            let trunc = 2.0 * 10f64.powi(-(digits as i32));
            let rad = crate::number::dyadic::up(e.rad() + trunc);
            let re = e.re().to_decimal(digits);
            let im = e.im().to_decimal(digits);
            let mut out = format!("~{re}");
            if !e.im().is_zero() {
                if let Some(stripped) = im.strip_prefix('-') {
                    out.push_str(&format!("-{stripped}*i"));
                } else {
                    out.push_str(&format!("+{im}*i"));
                }
            }
            out.push_str(&format!(" ± {rad:e}"));
            out
        }
    }
}

pub fn format_instance(
    op: &DiffOperator,
    base: &GaussianRational,
    ics: &[NumberValue],
) -> String {
    let ics_s = ics
        .iter()
        .map(format_number_value)
        .collect::<Vec<_>>()
        .join(", ");
    format!(
        "instance {{ op: {}; base: {}; ics: [{}] }}",
        format_operator(op),
        base,
        ics_s
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_atoms() {
        assert_eq!(parse_rational("3/4").unwrap(), crate::number::gaussian::rat(3, 4));
        assert_eq!(parse_rational("-7").unwrap(), crate::number::gaussian::rat(-7, 1));
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn gaussian_atoms() {
        let g = parse_gaussian("1/2-3/4*i").unwrap();
        assert_eq!(format!("{g}"), "1/2-3/4*i");
        assert_eq!(parse_gaussian("i").unwrap(), GaussianRational::i());
        assert_eq!(
            parse_gaussian("-i").unwrap(),
            GaussianRational::i().neg()
        );
        assert_eq!(parse_gaussian("2*i").unwrap().im, crate::number::gaussian::rat(2, 1));
    }

    #[test]
    fn poly_literals() {
        let p = parse_poly("3*z^2 - 1/2*z + 1+2*i", 'z').unwrap();
        assert_eq!(p.deg(), 2);
        assert_eq!(p.coeff(2), GaussianRational::from_i64(3));
        assert_eq!(p.coeff(1), GaussianRational::from_ratio(-1, 2));
        assert_eq!(
            p.coeff(0),
            GaussianRational::new(crate::number::gaussian::rat(1, 1), crate::number::gaussian::rat(2, 1))
        );
        assert_eq!(parse_poly("0", 'z').unwrap(), Poly::zero());
        // repeated variable factors multiply out
        let q = parse_poly("z*z - z^2", 'z').unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn poly_round_trip() {
        for s in ["3*z^2 - 1/2*z + 1 + 2*i", "-z^5 + i*z", "0", "7", "-i"] {
            let p = parse_poly(s, 'z').unwrap();
            let printed = format_poly(&p, 'z');
            let again = parse_poly(&printed, 'z').unwrap();
            assert_eq!(p, again, "round trip through '{printed}'");
            assert_eq!(printed, format_poly(&again, 'z'));
        }
    }

    #[test]
    fn operator_form() {
        let op = parse_diff_operator("diff z: [-1; 1]").unwrap();
        assert_eq!(op.order(), 1);
        let printed = format_operator(&op);
        assert_eq!(printed, "diff z: [-1; 1]");
        assert_eq!(parse_diff_operator(&printed).unwrap(), op);
        let s = parse_shift_operator("shift n: [-1; n + 1]").unwrap();
        assert_eq!(s.order(), 1);
        assert!(parse_diff_operator("shift n: [1]").is_err());
    }

    #[test]
    fn bivariate_form() {
        let rows = parse_bivariate_rows("poly z,y: [[1 - z],[0],[2*z^2]]").unwrap();
        assert_eq!(rows.len(), 3);
        let printed = format_bivariate_rows(&rows, 'z', 'y');
        assert_eq!(parse_bivariate_rows(&printed).unwrap(), rows);
    }

    #[test]
    fn number_values() {
        let v = parse_number_value("3/2+1/2*i", 64).unwrap();
        assert!(v.is_exact());
        let v = parse_number_value("~1.25 ± 1e-10", 64).unwrap();
        match &v {
            NumberValue::Approx(e) => {
                assert!(e.rad() >= 1e-10 && e.rad() < 1e-9);
                assert!(e.contains_exact(&GaussianRational::from_ratio(5, 4)));
            }
            _ => panic!("expected enclosure"),
        }
        // printing keeps containment
        let printed = format_number_value(&v);
        let back = parse_number_value(&printed, 64).unwrap();
        match back {
            NumberValue::Approx(e) => {
                assert!(e.contains_exact(&GaussianRational::from_ratio(5, 4)))
            }
            _ => panic!("expected enclosure"),
        }
    }

    #[test]
    fn instance_form() {
        let (op, base, ics) = parse_instance(
            "instance { op: diff z: [-1; 1]; base: 0; ics: [1] }",
            64,
        )
        .unwrap();
        assert_eq!(op.order(), 1);
        assert!(base.is_zero());
        assert_eq!(ics.len(), 1);
        let printed = format_instance(&op, &base, &ics);
        let (op2, base2, ics2) = parse_instance(&printed, 64).unwrap();
        assert_eq!(op, op2);
        assert_eq!(base, base2);
        assert_eq!(ics.len(), ics2.len());
    }
}
