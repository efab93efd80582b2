//! Exact symbolic kernel.
//!
//! Values are canonical rational functions ([`RatFun`]) over a [`Context`]
//! of symbols. A symbol is either an indeterminate carrying a numeric
//! witness, the cosine or sine of an indeterminate angle, or an adjoined
//! square root of a polynomial radicand. Sines and roots satisfy quadratic
//! relations (`sin^2 = 1 - cos^2`, `root^2 = radicand`) and every canonical
//! value is reduced so that such symbols appear at most linearly in the
//! numerator and not at all in the denominator.

mod context;
mod diff;
mod display;
mod expr;
pub mod gcd;
mod interval;
mod numeric;
pub mod poly;
mod resultant;
mod solve;
mod sqrt;
mod subst;
pub mod trig;
mod verdict;

pub use context::{Context, RatFun, SideCondition, Sign, Symbol, SymbolId, SymbolKind};
pub use expr::Expr;
pub use interval::{BigInterval, F64Interval, Interval};
pub use numeric::{Approx, Env, Precision};
pub use poly::{Monomial, Poly, Var};
pub use resultant::{determinant, resultant, sylvester_matrix};
pub use solve::{LinearSolution, QuadraticRoots};
pub use subst::Bindings;
pub use trig::AngleForm;
pub use verdict::{ProofVerdict, Sample, VerdictStatus};

use alloc::string::String;
use num_rational::BigRational;
use num_traits::ToPrimitive;

/// Exact rational number; the coefficient field of every polynomial.
pub type Q = BigRational;

pub(crate) fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational value of a finite float.
pub fn q_from_f64(x: f64) -> Option<Q> {
    BigRational::from_float(x)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CasError {
    #[error("division by an expression that is identically zero")]
    DegenerateExpression,
    #[error("negative radicand {0} at the witness")]
    DomainError(String),
    #[error("zero denominator at the evaluation point")]
    EvalSingular,
    #[error("neither polynomial contains the elimination variable")]
    NothingToEliminate,
    #[error("resultant of a zero polynomial")]
    ZeroPolynomial,
    #[error("equation is not linear in {0}")]
    NotLinear(String),
    #[error("equation is not quadratic in {0}")]
    NotQuadratic(String),
    #[error("negative discriminant at the witness: complex roots")]
    ComplexRoots,
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{0}` is already declared")]
    DuplicateSymbol(String),
    #[error("exponent must be an integer constant")]
    NonIntegerPower,
    #[error("unsupported function `{0}`")]
    UnsupportedFunction(String),
    #[error("trigonometric argument must be an integer combination of angles and multiples of pi/2: {0}")]
    NonLinearAngle(String),
    #[error("cannot substitute into {0}")]
    UnsupportedSubstitution(String),
}
