//! Discrete Fourier transforms on roots of unity and interpolation-based
//! polynomial deflation.
//!
//! Dividing out a batch of accepted roots is done spectrally: evaluate the
//! quotient ψ/p at the (n+1)-st roots of unity and inverse-transform to
//! recover its coefficients. When a node falls on (or numerically too close
//! to) a root of the divisor, the node set is rotated by a fixed
//! deterministic sequence of angles; interpolation at rotated nodes stays
//! exact after a per-index twist of the recovered coefficients.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{expand_factors, Polynomial};
use crate::scalar::{real, Scalar};

/// Number of node sets tried before giving up: the unrotated set plus eight
/// rotations.
pub const MAX_NODE_ROTATIONS: usize = 8;

/// Quotient, divisor, and measured remainder of one deflation step.
#[derive(Debug, Clone)]
pub struct DeflationResult<T: Scalar> {
    /// The interpolated quotient, re-monicized by its leading coefficient.
    pub quotient: Polynomial<T>,
    /// The monic divisor expanded from the accepted roots.
    pub divisor: Polynomial<T>,
    /// `max_norm(psi - divisor * quotient)`, computed by expansion, never
    /// assumed zero.
    pub remainder_norm: T,
    /// Distance of the quotient's leading coefficient from 1 before
    /// re-monicization; a rounding health indicator.
    pub monic_defect: T,
}

/// Forward transform: `out_j = sum_k values_k w^(jk)` with
/// `w = e^(2 pi i/m)`, `m` the input length. Equivalently, evaluates the
/// polynomial with ascending coefficients `values` at the m-th roots of
/// unity in counterclockwise order.
pub fn dft<T: Scalar>(values: &[Complex<T>]) -> Vec<Complex<T>> {
    transform(values, false)
}

/// Inverse transform: `out_k = (1/m) sum_j values_j w^(-jk)`. Interpolates:
/// given values on the m-th roots of unity, returns the coefficients of the
/// unique polynomial of degree < m taking them.
pub fn idft<T: Scalar>(values: &[Complex<T>]) -> Vec<Complex<T>> {
    transform(values, true)
}

fn transform<T: Scalar>(values: &[Complex<T>], inverse: bool) -> Vec<Complex<T>> {
    let m = values.len();
    if m == 0 {
        return Vec::new();
    }
    let two_pi = real::<T>(2.0) * T::PI();
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let mut acc = Complex::<T>::zero();
        for (k, &v) in values.iter().enumerate() {
            // Reduce j*k mod m before forming the angle so large products
            // cost no accuracy.
            let angle = two_pi * real::<T>(((j * k) % m) as f64) / real::<T>(m as f64);
            let w = if inverse {
                Complex::from_polar(T::one(), -angle)
            } else {
                Complex::from_polar(T::one(), angle)
            };
            acc = acc + v * w;
        }
        if inverse {
            acc = acc / real::<T>(m as f64);
        }
        out.push(acc);
    }
    out
}

/// Divides a monic polynomial by the monic factor with the given roots,
/// recovering the quotient by interpolation at the (n+1)-st roots of unity,
/// `n` the quotient degree.
///
/// The divisor is evaluated at each node in product form, so a node that
/// equals a root exactly is detected exactly. A node set where some
/// `|p(node)|` falls below the collision floor (relative to the largest
/// node value) is discarded and the nodes are rotated by
/// `theta = pi k / (7(n+1))`, `k = 1..=8`; coefficients are recovered from
/// rotated nodes by the inverse transform followed by a per-index twist
/// `e^(-ik theta)`. Fails with [`Error::NodeCollision`] when every node set
/// collides.
pub fn deflate<T: Scalar>(psi: &Polynomial<T>, v: &[Complex<T>]) -> Result<DeflationResult<T>> {
    if !psi.is_monic() {
        return Err(Error::InvalidInput(
            "deflation requires a monic polynomial".into(),
        ));
    }
    if v.len() >= psi.degree() {
        return Err(Error::InvalidInput(format!(
            "deflation by {} roots needs degree > {}, got {}",
            v.len(),
            v.len(),
            psi.degree()
        )));
    }

    let n = psi.degree() - v.len();
    let m = n + 1;
    let two_pi = real::<T>(2.0) * T::PI();

    for attempt in 0..=MAX_NODE_ROTATIONS {
        let theta = T::PI() * real::<T>(attempt as f64) / real::<T>((7 * m) as f64);
        let nodes: Vec<Complex<T>> = (0..m)
            .map(|j| {
                let angle = two_pi * real::<T>(j as f64) / real::<T>(m as f64) + theta;
                Complex::from_polar(T::one(), angle)
            })
            .collect();

        // Divisor values in product form: exact zero on an exact hit.
        let p_vals: Vec<Complex<T>> = nodes
            .iter()
            .map(|&node| {
                v.iter()
                    .fold(Complex::from(T::one()), |acc, &root| acc * (node - root))
            })
            .collect();

        let max_p = p_vals.iter().map(|p| p.norm()).fold(T::zero(), T::max);
        let min_p = p_vals.iter().map(|p| p.norm()).fold(T::infinity(), T::min);
        // <= rather than < so an all-zero node set (max_p = 0) also rotates.
        if min_p <= T::node_collision_floor() * max_p {
            continue;
        }

        let ratios: Vec<Complex<T>> = nodes
            .iter()
            .zip(&p_vals)
            .map(|(&node, &p)| psi.eval(node) / p)
            .collect();
        let mut coeffs = idft(&ratios);
        if attempt > 0 {
            for (k, c) in coeffs.iter_mut().enumerate() {
                let twist = Complex::from_polar(T::one(), -theta * real::<T>(k as f64));
                *c = *c * twist;
            }
        }

        let raw = Polynomial::new(coeffs);
        let monic_defect = (raw.leading() - Complex::from(T::one())).norm();
        let quotient = raw.monicized();
        let divisor = expand_factors(v);
        let remainder_norm = (psi - &(&divisor * &quotient)).max_norm();
        return Ok(DeflationResult {
            quotient,
            divisor,
            remainder_norm,
            monic_defect,
        });
    }

    Err(Error::NodeCollision {
        attempts: MAX_NODE_ROTATIONS + 1,
    })
}
