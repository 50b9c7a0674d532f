//! Certification predicates: Smale's alpha test for approximate zeros, the
//! Newton-contraction bound used in the lifting analysis, and the
//! Koebe-distortion test deciding whether two certified points approximate
//! the same simple root.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{real, Scalar};

/// A point is certified as an approximate zero when its alpha value is
/// below this threshold.
pub const ALPHA_THRESHOLD: f64 = 0.125;

/// Largest admissible argument of [`contraction_b`]; the bound function is
/// only controlled on `0 <= r < 0.148`.
pub const CONTRACTION_DOMAIN_END: f64 = 0.148;

/// The alpha certificate at a point, with the data a caller needs to act
/// on it.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaReport<T: Scalar> {
    /// `max_(k>1) |f/f'| * |f^(k)/(k! f')|^(1/(k-1))` at the point.
    pub alpha: T,
    /// The Newton displacement `f(z)/f'(z)` at the point.
    pub newton_step: Complex<T>,
    /// The index attaining the max; 0 when the degree is below 2 (the max
    /// ranges over an empty set and alpha is 0), otherwise in `[2, d]`.
    pub argmax_k: usize,
}

impl<T: Scalar> AlphaReport<T> {
    /// True when the point is certified (`alpha < 1/8`).
    #[inline]
    pub fn certified(&self) -> bool {
        self.alpha < real::<T>(ALPHA_THRESHOLD)
    }
}

/// Computes the alpha certificate of `f` at `z` from the recentered Taylor
/// coefficients: `alpha = |c_0/c_1| * max_(k>1) |c_k/c_1|^(1/(k-1))`.
/// Alpha below 1/8 guarantees `z` is an approximate zero: plain Newton from
/// `z` converges to a root with doubling exponent.
///
/// The (k-1)-th root of each modulus ratio is taken in log space so large
/// intermediate ratios cannot overflow. Fails with
/// [`Error::DerivativeVanishes`] when `|f'(z)|` is below the scalar floor.
pub fn alpha<T: Scalar>(f: &Polynomial<T>, z: Complex<T>) -> Result<AlphaReport<T>> {
    let c = f.taylor_coeffs_at(z);
    if c.len() < 2 {
        return Err(Error::DerivativeVanishes); // constant: f' vanishes everywhere
    }
    let c1 = c[1];
    let d1 = c1.norm();
    if d1 < T::derivative_floor() {
        return Err(Error::DerivativeVanishes);
    }
    let newton_step = c[0] / c1;

    let mut best = T::zero();
    let mut argmax_k = 0usize;
    for (k, ck) in c.iter().enumerate().skip(2) {
        let ratio = ck.norm() / d1;
        let rooted = if ratio > T::zero() {
            (ratio.ln() / real::<T>((k - 1) as f64)).exp()
        } else {
            T::zero()
        };
        if rooted > best || argmax_k == 0 {
            best = rooted;
            argmax_k = k;
        }
    }

    let c0n = c[0].norm();
    let alpha = if argmax_k == 0 || c0n == T::zero() {
        // Degree below 2 (the max ranges over nothing), or z is an exact
        // root: alpha is zero either way.
        T::zero()
    } else {
        let direct = (c0n / d1) * best;
        if direct.is_finite() {
            direct
        } else {
            // Some modulus ratio left the representable range; recombine
            // the whole expression in log space. Rounding differs from the
            // direct path, but this branch is only reachable when the
            // direct value overflows.
            let l1 = d1.ln();
            let e_best = c
                .iter()
                .enumerate()
                .skip(2)
                .filter(|(_, ck)| ck.norm() > T::zero())
                .map(|(k, ck)| (ck.norm().ln() - l1) / real::<T>((k - 1) as f64))
                .fold(T::neg_infinity(), T::max);
            (c0n.ln() - l1 + e_best).exp()
        }
    };
    Ok(AlphaReport {
        alpha,
        newton_step,
        argmax_k,
    })
}

/// The Newton-contraction bound `B(r) = 2r (1+r)^3 / (1-r)^5`, controlling
/// how much one damped Newton step can magnify the relative residual.
/// Only valid on `0 <= r < 0.148`; arguments outside are rejected.
pub fn contraction_b<T: Scalar>(r: T) -> Result<T> {
    if !(r >= T::zero() && r < real::<T>(CONTRACTION_DOMAIN_END)) {
        return Err(Error::InvalidInput(format!(
            "contraction bound needs 0 <= r < {CONTRACTION_DOMAIN_END}"
        )));
    }
    let one = T::one();
    Ok(real::<T>(2.0) * r * (one + r).powi(3) / (one - r).powi(5))
}

/// Koebe-distortion duplicate test: do `accepted` and `candidate`
/// approximate the same simple root of `psi`?
///
/// True iff `|accepted - candidate| < 3 |psi(candidate)| / |psi'(candidate)|`.
/// Callers must pass the point with the larger `|psi|` value as `candidate`
/// (the weeding loop's sorted traversal guarantees this). Fails with
/// [`Error::DerivativeVanishes`] when `|psi'(candidate)|` is below the
/// scalar floor; such candidates cannot be certified distinct and are
/// rejected upstream.
pub fn same_root<T: Scalar>(
    psi: &Polynomial<T>,
    accepted: Complex<T>,
    candidate: Complex<T>,
) -> Result<bool> {
    let (v, dv) = psi.eval_with_derivative(candidate);
    let dnorm = dv.norm();
    if dnorm < T::derivative_floor() {
        return Err(Error::DerivativeVanishes);
    }
    // A computed |psi(candidate)| at or below the Horner rounding bound --
    // possibly exactly zero -- no longer measures the distance to the
    // root, and taking it literally would let a point declare itself
    // distinct from its own duplicates. Flooring by the bound keeps the
    // comparison meaningful: points separated by less than the evaluation
    // noise radius count as the same root.
    let vnorm = v.norm().max(psi.eval_error_bound(candidate));
    // Compare in product form; dividing by a tiny derivative could overflow.
    Ok((accepted - candidate).norm() * dnorm < real::<T>(3.0) * vnorm)
}
