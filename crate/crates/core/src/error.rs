use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A vector that must have nonzero length is (numerically) zero.
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(&'static str),

    /// `|q_e|^2 - q_b.q_e <= 0`: the boresight line through the two terminals
    /// never becomes orthogonal to the eavesdropper direction for any finite
    /// adjustment factor.
    #[error("alpha_max undefined: |q_e|^2 - q_b.q_e = {0:.6e} <= 0")]
    AlphaMaxUndefined(f64),

    /// The channel-power density collapses to a point mass at zero because the
    /// boresight cosine toward this terminal is not positive.
    #[error("degenerate channel-power density: boresight cosine = {0:.6e} <= 0")]
    DegenerateDensity(f64),

    /// An adaptive quadrature ran out of its subdivision or window budget
    /// before reaching the requested tolerance.
    #[error("quadrature did not converge: {0}")]
    NonConvergent(&'static str),

    /// User and eavesdropper directions are collinear as seen from the array,
    /// so a quantity that divides by sin of the separation angle is undefined.
    #[error("collinear geometry: sin of terminal separation angle = {0:.6e}")]
    CollinearGeometry(f64),

    /// Config text could not be parsed.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Config parsed but violates an invariant.
    #[error("invalid config: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
