//! Error type shared by every module in the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while factoring.
///
/// The first two variants are input-side problems; the rest are run-time
/// failures with enough context attached to diagnose the instance that
/// produced them. Counts and moduli are reported as `f64` regardless of the
/// working scalar so the messages stay printable.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// The request itself is malformed (empty input, non-monic polynomial,
    /// out-of-range parameter, mismatched lengths, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested tolerance needs a ray landing height below what the
    /// scalar type can carry. Tighter epsilon or higher degree both shrink
    /// tau exponentially, hence the practical degree guard.
    #[error(
        "tau underflow: landing height tau = {tau:e} for degree {degree} is outside the \
         precision budget (floor {floor:e}, practical guard: degree <= {max_degree})"
    )]
    TauUnderflow {
        tau: f64,
        floor: f64,
        degree: usize,
        max_degree: usize,
    },

    /// A derivative modulus fell below the derivative floor where a division
    /// by it was required.
    #[error("derivative vanishes at the evaluation point")]
    DerivativeVanishes,

    /// A polynomial evaluation produced a non-finite value.
    #[error("overflow evaluating polynomial at point index {index}")]
    Overflow { index: usize },

    /// A probe ray did not produce enough usable crossings to seed a batch.
    #[error(
        "ray {ray}: only {found} of {needed} probe crossings available after fallback selection"
    )]
    InsufficientCrossings {
        ray: usize,
        needed: usize,
        found: usize,
    },

    /// Every admissible rotation of the interpolation nodes still collided
    /// with a divisor root.
    #[error("interpolation nodes collide with divisor roots in all {attempts} rotations")]
    NodeCollision { attempts: usize },

    /// No quadrant yielded the guaranteed half batch of accepted roots. The
    /// stage guarantee proves this branch unreachable in exact arithmetic, so
    /// reaching it means the instance has exhausted the working precision.
    /// `quadrant_yields` lists (certified, surviving) counts per quadrant.
    #[error(
        "stage guarantee violated at degree {degree}: no quadrant yielded \
         ceil(d/2) roots (certified/surviving per quadrant: {quadrant_yields:?}); \
         this branch is proven unreachable in exact arithmetic and indicates a \
         precision failure"
    )]
    TheoremViolation {
        degree: usize,
        quadrant_yields: Vec<(usize, usize)>,
    },

    /// The independent reference solver ran out of sweeps while its output
    /// still had a poor backward error.
    #[error(
        "reference root finder did not converge within {sweeps} sweeps \
         (max backward error {backward_error:e})"
    )]
    NoConvergence { sweeps: usize, backward_error: f64 },
}
