use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("zero polynomial not allowed here")]
    ZeroPolynomial,

    #[error("zero operator not allowed here")]
    ZeroOperator,

    #[error("operand algebras do not match")]
    AlgebraMismatch,

    #[error("root refinement stalled: best separation achieved {achieved:.3e}, requested {requested:.3e}")]
    RootSeparation { achieved: f64, requested: f64 },

    #[error("leading coefficient vanishes at index {index}; supply more initial terms")]
    LeadingCoeffZero { index: i64 },

    #[error("initial window too short: need {need} values, got {got}")]
    WindowTooShort { need: usize, got: usize },

    #[error("{point} is not a root of the z = 0 fiber")]
    NotARoot { point: String },

    #[error("critical root: the y-derivative vanishes at {point}; perturb the starting value")]
    CriticalRoot { point: String },

    #[error("polynomial is not squarefree in y; take the squarefree part first")]
    NotSquarefree,

    #[error("leading coefficient of the outer operator is not invertible modulo P")]
    LeadingCoeffNotInvertible,

    #[error("constant polynomial rejected: {0}")]
    ConstantPolynomial(String),

    #[error("twist by zero rejected")]
    ZeroTwist,

    #[error("{point} is a singular point of the operator")]
    SingularPoint { point: String },

    #[error("initial conditions length {got} does not match operator order {order}")]
    BadInitialConditions { got: usize, order: usize },

    #[error("target {target} lies outside the safe disk around {base} (radius {radius:.6e}); use analytic continuation")]
    OutsideDisk {
        base: String,
        target: String,
        radius: f64,
    },

    #[error("no geometric decay detected within the term budget ({budget} terms)")]
    NoDecay { budget: usize },

    #[error("no convergence evidence within the term budget ({budget} terms)")]
    NoConvergence { budget: usize },

    #[error("ambiguous root: limit enclosure meets more than one certified root disk")]
    AmbiguousRoot,

    #[error("no path found: blocked by singularity enclosures {blocking}")]
    NoPath { blocking: String },

    #[error("path does not match the requested endpoints")]
    BadPath,

    #[error("derivative order {k} not supported here")]
    BadDerivativeOrder { k: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
