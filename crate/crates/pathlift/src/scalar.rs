//! Real scalar abstraction the solver is written against.
//!
//! Every numeric routine in this crate is generic over [`Scalar`] so the same
//! code drives `f32`, `f64`, or a wider type added later. The precision
//! floors live here as associated functions because they are properties of
//! the backend, not of the algorithm: a big-float backend would raise them
//! and thereby lift the practical degree limit.

use core::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point real type underlying all complex arithmetic in the solver.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Smallest admissible ray landing height τ. Below this the final
    /// perturbed targets are too close to the underflow range for the stage
    /// arithmetic to mean anything, and the solver refuses to run.
    fn tau_floor() -> Self;

    /// A derivative modulus at or below this is treated as vanishing; the
    /// affected point is dropped rather than divided by.
    fn derivative_floor() -> Self;

    /// Relative threshold deciding that an interpolation node has collided
    /// with a divisor root: the node set is rotated when
    /// `min |p(node)| <= floor * max |p(node)|`.
    fn node_collision_floor() -> Self;
}

impl Scalar for f64 {
    #[inline]
    fn tau_floor() -> Self {
        1e-250
    }

    #[inline]
    fn derivative_floor() -> Self {
        1e-300
    }

    #[inline]
    fn node_collision_floor() -> Self {
        1e-13
    }
}

impl Scalar for f32 {
    #[inline]
    fn tau_floor() -> Self {
        1e-25
    }

    #[inline]
    fn derivative_floor() -> Self {
        1e-30
    }

    #[inline]
    fn node_collision_floor() -> Self {
        1e-5
    }
}

/// Converts an `f64` literal into the working scalar type.
///
/// Infallible for any backend wide enough to run the solver; the `expect`
/// only fires if a backend cannot represent small integer-like constants.
#[inline]
pub(crate) fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("scalar type must represent f64 constants")
}

/// Finiteness of both components of a complex value, for any scalar.
#[inline]
pub(crate) fn finite_c<T: Scalar>(z: num_complex::Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
