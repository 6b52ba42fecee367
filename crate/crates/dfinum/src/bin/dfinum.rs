//! Command-line front end: evaluation, root-chasing sequences, closure
//! operations, sequence limits, singularity reports and a constants gallery.
//! Report lines are `key = value` pairs with stable ordering; errors map to
//! documented exit codes.

use clap::{Args, Parser, Subcommand, ValueEnum};

use dfinum::error::Error;
use dfinum::evaluator::{evaluate, DFiniteInstance, EvalPath, EvalResult};
use dfinum::limits::{
    converge_to_root, limit_of_recurrence, root_sequence, ConvergentRecurrence,
};
use dfinum::number::{Enclosure, GaussianRational, NumberValue};
use dfinum::ore::{DiffOperator, SequenceWindow, ShiftOperator};
use dfinum::text::{
    format_bivariate_rows, format_number_value, format_operator, parse_gaussian,
    parse_instance, parse_operator, parse_poly, AnyOperator,
};

// Exit codes: 2 parse/input, 3 singular point, 4 path, 5 budget, 6 ambiguity.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SingularPoint { .. } | Error::OutsideDisk { .. } => 3,
        Error::NoPath { .. } | Error::BadPath => 4,
        Error::NoDecay { .. } | Error::NoConvergence { .. } | Error::RootSeparation { .. } => 5,
        Error::AmbiguousRoot => 6,
        _ => 2,
    }
}

#[derive(Parser)]
#[command(name = "dfinum", version, about = "exact D-finite arithmetic and validated evaluation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Exact,
    Decimal,
    Both,
}

#[derive(Args)]
struct Common {
    /// Requested precision in decimal digits.
    #[arg(long, default_value_t = 30)]
    prec: usize,
    /// Term budget for iterative stages.
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    /// How to print values that have an exact representation.
    #[arg(long, value_enum, default_value_t = Format::Decimal)]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a D-finite instance (file or inline literal) at a point.
    Eval {
        /// `instance { op: ...; base: ...; ics: [...] }`, inline or a file path.
        instance: String,
        /// Target point (Gaussian rational).
        #[arg(long)]
        at: String,
        /// Derivative order.
        #[arg(long, default_value_t = 0)]
        deriv: usize,
        /// Continuation path as comma-separated waypoints, base first.
        #[arg(long)]
        path: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Chase a root of a univariate polynomial via its series sequence.
    Rootseq {
        /// Polynomial in y, inline or a file path.
        poly: String,
        /// Rational starting value near the wanted root.
        #[arg(long)]
        eta: String,
        /// How many exact leading terms to print.
        #[arg(long, default_value_t = 6)]
        terms: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Apply a closure operation to one or two operators.
    Closure {
        #[arg(value_parser = ["add", "mul", "sum", "twist", "lclm", "realify", "ode2rec", "rec2ode"])]
        operation: String,
        /// First operand, inline or a file path.
        #[arg(long)]
        op: String,
        /// Second operand for binary operations.
        #[arg(long)]
        op2: Option<String>,
        /// Twist point for `twist`.
        #[arg(long)]
        zeta: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Limit of a convergent P-recursive sequence.
    Limit {
        /// Shift operator, inline or a file path.
        #[arg(long)]
        op: String,
        /// Comma-separated initial values.
        #[arg(long)]
        initial: String,
        /// Index of the first initial value.
        #[arg(long, default_value_t = 0)]
        offset: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Certified singularity report for a differential operator.
    Singularities {
        /// Differential operator, inline or a file path.
        #[arg(long)]
        op: String,
        #[command(flatten)]
        common: Common,
    },
    /// Pre-wired pipelines for classical constants.
    Gallery {
        #[arg(value_parser = ["e", "log2", "pi4", "zeta3", "epi", "sqrt2"])]
        name: String,
        #[command(flatten)]
        common: Common,
    },
}

fn main() {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Eval {
            instance,
            at,
            deriv,
            path,
            common,
        } => cmd_eval(&instance, &at, deriv, path.as_deref(), &common),
        Cmd::Rootseq {
            poly,
            eta,
            terms,
            common,
        } => cmd_rootseq(&poly, &eta, terms, &common),
        Cmd::Closure {
            operation,
            op,
            op2,
            zeta,
            common,
        } => cmd_closure(&operation, &op, op2.as_deref(), zeta.as_deref(), &common),
        Cmd::Limit {
            op,
            initial,
            offset,
            common,
        } => cmd_limit(&op, &initial, offset, &common),
        Cmd::Singularities { op, common } => cmd_singularities(&op, &common),
        Cmd::Gallery { name, common } => cmd_gallery(&name, &common),
    };
    if let Err(e) = res {
        eprintln!("error: {e}");
        std::process::exit(exit_code(&e));
    }
}

/// Inline literal or path to a UTF-8 file holding one.
fn load(s: &str) -> String {
    match std::fs::read_to_string(s) {
        Ok(body) => body.trim().to_string(),
        Err(_) => s.to_string(),
    }
}

fn bits(digits: usize) -> u32 {
    (digits.max(1) as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

fn print_value(key: &str, v: &Enclosure, exact: Option<&GaussianRational>, c: &Common) {
    match (c.format, exact) {
        (Format::Exact, Some(x)) => println!("{key} = {x}"),
        (Format::Both, Some(x)) => {
            println!("{key} = {x}");
            println!("{key}.decimal = {}", v.to_decimal(c.prec));
        }
        _ => println!("{key} = {}", v.to_decimal(c.prec)),
    }
}

fn parse_path(s: &str) -> Result<EvalPath, Error> {
    let waypoints = s
        .split(',')
        .map(|w| parse_gaussian(w.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EvalPath { waypoints })
}

fn format_path(p: &[dfinum::evaluator::SegmentInfo], base: &GaussianRational) -> String {
    let mut out = format!("{base}");
    for seg in p {
        out.push_str(&format!(" -> {}", seg.to));
    }
    out
}

fn report_eval(res: &EvalResult, base: &GaussianRational, c: &Common) {
    print_value("value", &res.value, None, c);
    println!("radius = {:.2e}", res.value.rad());
    println!("path = {}", format_path(&res.diagnostics.segments, base));
    println!(
        "terms = {}",
        res.diagnostics
            .segments
            .iter()
            .map(|s| s.terms)
            .sum::<usize>()
    );
    println!("rigor = {}", res.diagnostics.rigor);
}

fn cmd_eval(
    instance: &str,
    at: &str,
    deriv: usize,
    path: Option<&str>,
    c: &Common,
) -> Result<(), Error> {
    let wprec = bits(c.prec);
    let (op, base, ics) = parse_instance(&load(instance), wprec)?;
    let inst = DFiniteInstance::new(op, base, ics)?;
    let zeta = parse_gaussian(at)?;
    let path = path.map(|s| parse_path(&load(s))).transpose()?;
    println!("command = eval");
    println!("point = {zeta}");
    let res = evaluate(&inst, &zeta, deriv, wprec, path.as_ref())?;
    report_eval(&res, &inst.base, c);
    Ok(())
}

fn cmd_rootseq(poly: &str, eta: &str, terms: usize, c: &Common) -> Result<(), Error> {
    let p = parse_poly(&load(poly), 'y')?;
    let eta = parse_gaussian(eta)?;
    let tol = 10f64.powi(-(c.prec as i32));
    println!("command = rootseq");
    let rec = root_sequence(&p, &eta)?;
    let bivar = dfinum::limits::root_series_polynomial(&p, &eta)?;
    println!(
        "bivariate = {}",
        format_bivariate_rows(bivar.rows(), 'z', 'y')
    );
    println!("recurrence = {}", format_operator(&rec.op));
    let shown = rec.op.unroll(&rec.initial, terms.max(rec.op.order()), bits(c.prec))?;
    let listed = shown
        .values
        .iter()
        .map(format_number_value)
        .collect::<Vec<_>>()
        .join(", ");
    println!("terms = {listed}");
    let (lim, idx, disks) = converge_to_root(&p, &eta, tol, c.budget)?;
    print_value("limit", &lim, None, c);
    println!("radius = {:.2e}", lim.rad());
    println!("root = {}", disks[idx].0.to_decimal(c.prec));
    println!("root.index = {idx}");
    println!("rigor = heuristic-tail");
    Ok(())
}

fn cmd_closure(
    operation: &str,
    op: &str,
    op2: Option<&str>,
    zeta: Option<&str>,
    _c: &Common,
) -> Result<(), Error> {
    let a = parse_operator(&load(op))?;
    let b = op2.map(|s| parse_operator(&load(s))).transpose()?;
    println!("command = closure");
    println!("operation = {operation}");
    let need2 = || b.clone().ok_or(Error::Parse("missing --op2 operand".into()));
    let result: AnyOperator = match (operation, a) {
        ("add", AnyOperator::Diff(x)) => match need2()? {
            AnyOperator::Diff(y) => AnyOperator::Diff(x.annihilator_sum(&y)?),
            _ => return Err(Error::AlgebraMismatch),
        },
        ("add", AnyOperator::Shift(x)) => match need2()? {
            AnyOperator::Shift(y) => AnyOperator::Shift(x.annihilator_sum(&y)?),
            _ => return Err(Error::AlgebraMismatch),
        },
        ("mul", AnyOperator::Diff(x)) => match need2()? {
            AnyOperator::Diff(y) => AnyOperator::Diff(x.annihilator_product(&y)?),
            _ => return Err(Error::AlgebraMismatch),
        },
        ("mul", AnyOperator::Shift(x)) => match need2()? {
            AnyOperator::Shift(y) => AnyOperator::Shift(x.annihilator_product(&y)?),
            _ => return Err(Error::AlgebraMismatch),
        },
        ("lclm", AnyOperator::Diff(x)) => match need2()? {
            AnyOperator::Diff(y) => AnyOperator::Diff(x.lclm(&y)?),
            _ => return Err(Error::AlgebraMismatch),
        },
        ("lclm", AnyOperator::Shift(x)) => match need2()? {
            AnyOperator::Shift(y) => AnyOperator::Shift(x.lclm(&y)?),
            _ => return Err(Error::AlgebraMismatch),
        },
        ("realify", AnyOperator::Diff(x)) => AnyOperator::Diff(x.realify()?),
        ("realify", AnyOperator::Shift(x)) => AnyOperator::Shift(x.realify()?),
        ("sum", AnyOperator::Shift(x)) => AnyOperator::Shift(x.partial_sum_annihilator()?),
        ("twist", AnyOperator::Shift(x)) => {
            let z = zeta.ok_or(Error::Parse("twist requires --zeta".into()))?;
            AnyOperator::Shift(x.geometric_twist(&parse_gaussian(z)?)?)
        }
        ("ode2rec", AnyOperator::Diff(x)) => AnyOperator::Shift(x.to_recurrence()?),
        ("rec2ode", AnyOperator::Shift(x)) => {
            let (m, bound) = x.to_diffop()?;
            AnyOperator::Diff(m.homogenize(bound))
        }
        _ => return Err(Error::AlgebraMismatch),
    };
    let text = match result {
        AnyOperator::Diff(x) => format_operator(&x.normalize()),
        AnyOperator::Shift(x) => format_operator(&x.normalize()),
    };
    println!("result = {text}");
    Ok(())
}

fn cmd_limit(op: &str, initial: &str, offset: usize, c: &Common) -> Result<(), Error> {
    let op = match parse_operator(&load(op))? {
        AnyOperator::Shift(s) => s,
        AnyOperator::Diff(_) => return Err(Error::AlgebraMismatch),
    };
    let values = load(initial)
        .split(',')
        .map(|v| parse_gaussian(v.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    let rec = ConvergentRecurrence::new(op, SequenceWindow::exact(offset, values), None)?;
    let tol = 10f64.powi(-(c.prec as i32));
    println!("command = limit");
    let lim = limit_of_recurrence(&rec, tol, c.budget)?;
    print_value("limit", &lim, None, c);
    println!("radius = {:.2e}", lim.rad());
    println!("rigor = heuristic-tail");
    Ok(())
}

fn cmd_singularities(op: &str, c: &Common) -> Result<(), Error> {
    let op = match parse_operator(&load(op))? {
        AnyOperator::Diff(d) => d,
        AnyOperator::Shift(_) => return Err(Error::AlgebraMismatch),
    };
    println!("command = singularities");
    let sings = op.singularities(bits(c.prec))?;
    println!("count = {}", sings.len());
    for (i, (disk, mult)) in sings.iter().enumerate() {
        println!("singularity[{i}] = {}", disk.to_decimal(c.prec));
        println!("singularity[{i}].multiplicity = {mult}");
    }
    Ok(())
}

fn pg(coeffs: &[i64]) -> dfinum::number::PolyG {
    dfinum::number::PolyG::from_i64(coeffs)
}

fn gi() -> GaussianRational {
    GaussianRational::new(num_traits::Zero::zero(), num_traits::One::one())
}

fn cmd_gallery(name: &str, c: &Common) -> Result<(), Error> {
    println!("command = gallery");
    println!("name = {name}");
    let wprec = bits(c.prec);
    let one = GaussianRational::one();
    let zero = GaussianRational::zero();
    match name {
        "e" => {
            // f' = f, f(0) = 1, evaluated at 1
            let op = DiffOperator::new(vec![pg(&[-1]), pg(&[1])]);
            let inst = DFiniteInstance::new(op, zero, vec![NumberValue::Exact(one.clone())])?;
            println!("pipeline = exp' - exp = 0 at 0, continued to 1");
            let res = evaluate(&inst, &one, 0, wprec, None)?;
            report_eval(&res, &inst.base, c);
        }
        "log2" => {
            // (1+z) f'' + f' = 0 solves log(1+z); value at 1 is log 2
            let op = DiffOperator::new(vec![pg(&[0]), pg(&[1]), pg(&[1, 1])]);
            let inst = DFiniteInstance::new(
                op,
                zero.clone(),
                vec![NumberValue::Exact(zero.clone()), NumberValue::Exact(one.clone())],
            )?;
            println!("pipeline = log(1+z) annihilator at 0, continued to 1");
            let res = evaluate(&inst, &one, 0, wprec, None)?;
            report_eval(&res, &inst.base, c);
        }
        "pi4" => {
            // (1+z^2) f'' + 2z f' = 0 solves arctan; arctan(1) = pi/4
            let op = DiffOperator::new(vec![pg(&[0]), pg(&[0, 2]), pg(&[1, 0, 1])]);
            let inst = DFiniteInstance::new(
                op,
                zero.clone(),
                vec![NumberValue::Exact(zero.clone()), NumberValue::Exact(one.clone())],
            )?;
            println!("pipeline = arctan annihilator at 0, continued to 1");
            let res = evaluate(&inst, &one, 0, wprec, None)?;
            report_eval(&res, &inst.base, c);
        }
        "epi" => {
            // (1+z) f' + i f = 0 solves (1+z)^(-i); the upper-half-plane
            // branch at -2 is (-1)^(-i) = exp(pi).  Fixed waypoint list
            // keeps the branch choice deterministic.
            let op = DiffOperator::new(vec![
                dfinum::number::PolyG::new(vec![gi()]),
                pg(&[1, 1]),
            ]);
            let inst =
                DFiniteInstance::new(op, zero, vec![NumberValue::Exact(one.clone())])?;
            let w = |rn: i64, rd: i64, im_n: i64, im_d: i64| {
                GaussianRational::new(
                    num_rational::BigRational::new(rn.into(), rd.into()),
                    num_rational::BigRational::new(im_n.into(), im_d.into()),
                )
            };
            let path = EvalPath {
                waypoints: vec![
                    GaussianRational::zero(),
                    w(-1, 4, 1, 2),
                    w(-3, 4, 3, 4),
                    w(-5, 4, 3, 4),
                    w(-7, 4, 1, 2),
                    GaussianRational::from_i64(-2),
                ],
            };
            println!("pipeline = (1+z)^(-i) continued to -2 above the singularity at -1");
            let res = evaluate(&inst, &GaussianRational::from_i64(-2), 0, wprec, Some(&path))?;
            report_eval(&res, &inst.base, c);
        }
        "sqrt2" => {
            let p = pg(&[-2, 0, 1]);
            let eta = GaussianRational::from_ratio(3, 2);
            let tol = 10f64.powi(-(c.prec as i32));
            println!("pipeline = root sequence for y^2 - 2 started at 3/2");
            let (lim, idx, disks) = converge_to_root(&p, &eta, tol, c.budget)?;
            print_value("value", &lim, None, c);
            println!("radius = {:.2e}", lim.rad());
            println!("root = {}", disks[idx].0.to_decimal(c.prec));
            println!("rigor = heuristic-tail");
        }
        "zeta3" => {
            // partial sums of 1/n^3: term recurrence n(n+1)^3 a(n+1) = n^4 a(n)
            let terms = ShiftOperator::new(vec![pg(&[0, 0, 0, 0, -1]), pg(&[0, 1, 3, 3, 1])]);
            let sums = terms.partial_sum_annihilator()?;
            let initial = SequenceWindow::exact(0, vec![zero.clone(), one.clone()]);
            let rec = ConvergentRecurrence::new(sums, initial, None)?;
            let tol = 10f64.powi(-(c.prec as i32));
            println!("pipeline = limit of partial sums of 1/n^3");
            let lim = limit_of_recurrence(&rec, tol, c.budget)?;
            print_value("value", &lim, None, c);
            println!("radius = {:.2e}", lim.rad());
            println!("rigor = heuristic-tail");
        }
        other => {
            return Err(Error::Parse(format!(
                "unknown gallery name '{other}'; available: e, log2, pi4, zeta3, epi, sqrt2"
            )))
        }
    }
    Ok(())
}
