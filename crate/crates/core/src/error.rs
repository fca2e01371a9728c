use alloc::string::String;
use core::fmt;

use crate::algebra::Rational;

/// Failure modes of the computational pipeline.
///
/// Every variant maps to a stable error name (see [`Error::name`]) that the
/// command-line front end prints on stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    Shape(String),
    NotUnit,
    BadAlpha(String),
    BadFiltration(String),
    /// Lattice saturation did not stabilize within `max_iter` steps.
    Irregular { max_iter: usize },
    /// The residue has a characteristic-polynomial factor without rational roots.
    IrrationalExponent { residual_degree: usize },
    NotLogarithmic,
    NoStabilize { beta: Rational, degree_cap: usize },
    VAdaptFail(String),
    Window(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::Shape(_) => "E_SHAPE",
            Error::NotUnit => "E_NOT_UNIT",
            Error::BadAlpha(_) => "E_BAD_ALPHA",
            Error::BadFiltration(_) => "E_BAD_FILTRATION",
            Error::Irregular { .. } => "E_IRREGULAR",
            Error::IrrationalExponent { .. } => "E_IRRATIONAL_EXPONENT",
            Error::NotLogarithmic => "E_NOT_LOG",
            Error::NoStabilize { .. } => "E_NO_STABILIZE",
            Error::VAdaptFail(_) => "E_VADAPT_FAIL",
            Error::Window(_) => "E_WINDOW",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape(msg) => write!(f, "E_SHAPE: {msg}"),
            Error::NotUnit => write!(f, "E_NOT_UNIT: determinant is not a unit of the Laurent ring"),
            Error::BadAlpha(msg) => write!(f, "E_BAD_ALPHA: {msg}"),
            Error::BadFiltration(msg) => write!(f, "E_BAD_FILTRATION: {msg}"),
            Error::Irregular { max_iter } => write!(
                f,
                "E_IRREGULAR: lattice saturation at infinity did not stabilize within {max_iter} steps \
                 (max-sat={max_iter}); the connection is irregular at infinity or the cap is too low \
                 (raise it with --max-sat or IRRHODGE_MAX_SAT)"
            ),
            Error::IrrationalExponent { residual_degree } => write!(
                f,
                "E_IRRATIONAL_EXPONENT: residue characteristic polynomial has a factor of degree \
                 {residual_degree} without rational roots"
            ),
            Error::NotLogarithmic => write!(f, "E_NOT_LOG: connection matrix has a pole of order > 1"),
            Error::NoStabilize { beta, degree_cap } => write!(
                f,
                "E_NO_STABILIZE: section space at beta={beta} still grows at degree cap {degree_cap}"
            ),
            Error::VAdaptFail(msg) => write!(f, "E_VADAPT_FAIL: {msg}"),
            Error::Window(msg) => write!(f, "E_WINDOW: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
