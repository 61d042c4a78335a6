use num_complex::Complex64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by the zero quaternion")]
    ZeroDivision,

    #[error("division by the zero polynomial")]
    ZeroDivisor,

    #[error("polynomial has degree zero")]
    DegreeZero,

    /// The simultaneous iteration stopped at its cap. Carries the best
    /// estimates and their residuals `|p(z)|`.
    #[error("root iteration did not converge after {iterations} iterations (max residual {max_residual:.3e})")]
    NoConvergence {
        iterations: usize,
        roots: Vec<Complex64>,
        residuals: Vec<f64>,
        max_residual: f64,
    },

    #[error("nonreal root {root} has no conjugate partner")]
    UnpairedRoot { root: Complex64 },

    #[error("discriminant polynomial has non-real coefficients (relative imaginary part {relative_imag:.3e})")]
    NonRealDiscriminant { relative_imag: f64 },

    #[error("companion polynomial has non-real coefficients (relative imaginary part {relative_imag:.3e})")]
    NonRealCompanion { relative_imag: f64 },

    #[error("both omega denominators vanish at eta = {eta}")]
    BothDenominatorsZero { eta: Complex64 },

    #[error("gcd does not divide the derived polynomials (relative remainder {relative_remainder:.3e})")]
    InexactDivision { relative_remainder: f64 },

    #[error("coefficient {index} is not complex (has j or k component)")]
    NotComplexCoefficients { index: usize },
}
