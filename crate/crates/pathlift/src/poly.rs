//! Dense complex polynomials and the coefficient-level operations the solver
//! is built from: Horner evaluation, derivatives, Taylor recentering, the
//! max coefficient norm, root-radius bounds, and the two rescalings that
//! bring an arbitrary monic input into the solver's working disk.

use num_complex::Complex;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lifter::DEFAULT_MAX_DEGREE;
use crate::scalar::{finite_c, real, Scalar};

/// A polynomial over `Complex<T>`, stored dense in ascending degree order.
///
/// The coefficient vector is never empty and carries no trailing zero
/// coefficients except in the zero polynomial, which is stored as `[0]`.
/// `degree` is therefore `coeffs.len() - 1`, with the usual caveat that the
/// zero polynomial reports degree 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial<T: Scalar> {
    coeffs: Vec<Complex<T>>,
}

impl<T: Scalar> Polynomial<T> {
    /// Builds a polynomial from ascending coefficients, trimming trailing
    /// zeros. An empty list yields the zero polynomial.
    pub fn new(mut coeffs: Vec<Complex<T>>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex::zero());
        }
        Polynomial { coeffs }
    }

    /// Builds a polynomial from ascending real coefficients.
    pub fn from_real(coeffs: &[T]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::new(c, T::zero())).collect())
    }

    /// The monomial `z^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![Complex::zero(); d + 1];
        coeffs[d] = Complex::one();
        Polynomial { coeffs }
    }

    /// Ascending coefficients, constant term first.
    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    /// Formal degree: index of the leading coefficient. The zero polynomial
    /// reports 0; check [`Self::is_zero`] where the distinction matters.
    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Leading coefficient.
    #[inline]
    pub fn leading(&self) -> Complex<T> {
        *self
            .coeffs
            .last()
            .expect("coefficient vector is never empty")
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    /// True when the leading coefficient is exactly one.
    #[inline]
    pub fn is_monic(&self) -> bool {
        self.leading() == Complex::one()
    }

    /// True when every coefficient is finite in both components.
    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|&c| finite_c(c))
    }

    /// Divides by the leading coefficient. The zero polynomial is returned
    /// unchanged.
    pub fn monicized(&self) -> Self {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let lead = self.leading();
        let mut coeffs: Vec<Complex<T>> = self.coeffs.iter().map(|&c| c / lead).collect();
        // z/z is exact in this arithmetic, but pin the contract anyway.
        *coeffs.last_mut().expect("nonempty") = Complex::one();
        Polynomial { coeffs }
    }

    /// Evaluates by Horner's scheme. Non-finite results propagate IEEE
    /// semantics and are the overflow signal; callers that need an error
    /// instead use [`Self::eval_many`].
    pub fn eval(&self, z: Complex<T>) -> Complex<T> {
        let mut acc = Complex::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Evaluates the polynomial and its derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex<T>) -> (Complex<T>, Complex<T>) {
        let mut acc = Complex::zero();
        let mut dacc = Complex::zero();
        for &c in self.coeffs.iter().rev() {
            dacc = dacc * z + acc;
            acc = acc * z + c;
        }
        (acc, dacc)
    }

    /// Evaluates at many points, failing on the first non-finite value with
    /// the index of the offending point.
    pub fn eval_many(&self, points: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let mut out = Vec::with_capacity(points.len());
        for (index, &z) in points.iter().enumerate() {
            let v = self.eval(z);
            if !finite_c(v) {
                return Err(Error::Overflow { index });
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Formal derivative. Differentiating a constant yields the zero
    /// polynomial.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Polynomial {
                coeffs: vec![Complex::zero()],
            };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, &c)| c * Complex::new(real::<T>(j as f64), T::zero()))
            .collect();
        Polynomial::new(coeffs)
    }

    /// Taylor coefficients of the polynomial recentered at `z`:
    /// `f(z + w) = sum_k c_k w^k`, so `c_k = f^(k)(z) / k!`. Computed by
    /// repeated synthetic division, one multiply-add per cell.
    pub fn taylor_coeffs_at(&self, z: Complex<T>) -> Vec<Complex<T>> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for k in 0..n {
            for i in (k..n - 1).rev() {
                let next = c[i + 1];
                c[i] = c[i] + next * z;
            }
        }
        c
    }

    /// Max coefficient modulus; the norm all residual guarantees are stated
    /// in.
    pub fn max_norm(&self) -> T {
        self.coeffs.iter().map(|c| c.norm()).fold(T::zero(), T::max)
    }

    /// First-order rounding bound for Horner evaluation at `z`:
    /// `2 (d+1) u sum_j |a_j| |z|^j` with `u` the scalar's machine epsilon.
    /// A computed value of [`Polynomial::eval`] below this bound is
    /// indistinguishable from zero.
    pub fn eval_error_bound(&self, z: Complex<T>) -> T {
        let zn = z.norm();
        let mut sum = T::zero();
        let mut pow = T::one();
        for a in &self.coeffs {
            sum = sum + a.norm() * pow;
            pow = pow * zn;
        }
        real::<T>(2.0 * self.coeffs.len() as f64) * T::epsilon() * sum
    }

    /// Upper bound `2 * max |a_j / a_d|^(1/(d-j))` on the modulus of every
    /// root. Zero means every lower coefficient vanishes: all roots sit at
    /// the origin.
    pub fn root_radius_bound(&self) -> T {
        let d = self.degree();
        if d == 0 {
            return T::zero();
        }
        let lead = self.leading().norm();
        let mut max = T::zero();
        for (j, c) in self.coeffs.iter().enumerate().take(d) {
            let m = c.norm();
            if m > T::zero() {
                let e = T::one() / real::<T>((d - j) as f64);
                max = max.max((m / lead).powf(e));
            }
        }
        real::<T>(2.0) * max
    }

    /// Returns `self - c` (subtracts `c` from the constant coefficient).
    pub fn sub_constant(&self, c: Complex<T>) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = coeffs[0] - c;
        Polynomial::new(coeffs)
    }
}

impl<T: Scalar> core::ops::Mul for &Polynomial<T> {
    type Output = Polynomial<T>;

    /// Coefficient convolution.
    fn mul(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let mut out = vec![Complex::<T>::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl<T: Scalar> core::ops::Sub for &Polynomial<T> {
    type Output = Polynomial<T>;

    fn sub(self, rhs: &Polynomial<T>) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or_else(Complex::zero);
            let b = rhs.coeffs.get(i).copied().unwrap_or_else(Complex::zero);
            out.push(a - b);
        }
        Polynomial::new(out)
    }
}

/// A monic input rescaled into the solver's working disk.
#[derive(Debug, Clone)]
pub struct NormalizedInput<T: Scalar> {
    /// The rescaled polynomial; its roots lie in the disk of radius 1/2.
    pub f0: Polynomial<T>,
    /// The rescale factor: roots of the original input are `k` times the
    /// roots of `f0`.
    pub k: T,
    /// Degree of the original input.
    pub original_degree: usize,
}

/// Rescales a polynomial so that all non-leading coefficient moduli are at
/// most one, returning the scaled polynomial and the scale factor `B`:
/// the output is `p(Bz) / (lead * B^d)` and input roots are `B` times output
/// roots. `B = 1` when every lower coefficient vanishes.
pub fn normalize_to_pd1<T: Scalar>(p: &Polynomial<T>) -> (Polynomial<T>, T) {
    let d = p.degree();
    let lead = p.leading();
    let mut b = T::zero();
    for (j, c) in p.coeffs().iter().enumerate().take(d) {
        let m = (*c / lead).norm();
        if m > T::zero() {
            b = b.max(m.powf(T::one() / real::<T>((d - j) as f64)));
        }
    }
    if b == T::zero() {
        b = T::one();
    }
    let coeffs = p
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, &c)| c / lead * Complex::new(b.powi(j as i32 - d as i32), T::zero()))
        .collect();
    let mut out = Polynomial::new(coeffs);
    if !out.coeffs.is_empty() {
        *out.coeffs.last_mut().expect("nonempty") = Complex::one();
    }
    (out, b)
}

/// Brings a monic input into the solver's working frame: returns `f0` with
/// roots in the radius-1/2 disk together with the scale factor `K` and the
/// ray landing height `tau` matched to the requested tolerance.
///
/// `K = 4 * max |a_j|^(1/(d-j))` over the non-leading coefficients (1 when
/// they all vanish), `f0(z) = phi(Kz)/K^d`, and
/// `tau = (eps / (2 K^d)) * (4/7)^(d+3)`. Refuses with
/// [`Error::TauUnderflow`] when `tau` drops below the scalar's floor.
pub fn rescale_main<T: Scalar>(phi: &Polynomial<T>, eps: T) -> Result<(NormalizedInput<T>, T)> {
    if !phi.is_monic() {
        return Err(Error::InvalidInput(
            "rescaling requires a monic polynomial".into(),
        ));
    }
    let d = phi.degree();
    if d == 0 {
        return Err(Error::InvalidInput("rescaling requires degree >= 1".into()));
    }
    if !eps.is_finite() || eps <= T::zero() {
        return Err(Error::InvalidInput("epsilon must be positive".into()));
    }

    let mut max = T::zero();
    for (j, c) in phi.coeffs().iter().enumerate().take(d) {
        let m = c.norm();
        if m > T::zero() {
            max = max.max(m.powf(T::one() / real::<T>((d - j) as f64)));
        }
    }
    let k = if max == T::zero() {
        T::one()
    } else {
        real::<T>(4.0) * max
    };

    let coeffs = phi
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, &c)| c * Complex::new(k.powi(j as i32 - d as i32), T::zero()))
        .collect();
    let mut f0 = Polynomial::new(coeffs);
    *f0.coeffs.last_mut().expect("nonempty") = Complex::one();

    let tau = eps / (real::<T>(2.0) * k.powi(d as i32))
        * (real::<T>(4.0) / real::<T>(7.0)).powi(d as i32 + 3);
    if !tau.is_finite() || tau < T::tau_floor() {
        return Err(Error::TauUnderflow {
            tau: tau.to_f64().unwrap_or(f64::NAN),
            floor: T::tau_floor().to_f64().unwrap_or(f64::NAN),
            degree: d,
            max_degree: DEFAULT_MAX_DEGREE,
        });
    }

    Ok((
        NormalizedInput {
            f0,
            k,
            original_degree: d,
        },
        tau,
    ))
}

/// Expands the monic polynomial with the given roots. An empty list yields
/// the constant 1.
pub fn expand_factors<T: Scalar>(roots: &[Complex<T>]) -> Polynomial<T> {
    let mut c: Vec<Complex<T>> = Vec::with_capacity(roots.len() + 1);
    c.push(Complex::one());
    for &r in roots {
        c.push(Complex::zero());
        for i in (1..c.len()).rev() {
            let lower = c[i - 1];
            c[i] = lower - r * c[i];
        }
        c[0] = -r * c[0];
    }
    // Leading coefficient is exactly 1 by construction; no trimming can
    // apply.
    Polynomial { coeffs: c }
}

/// Max-norm of `phi - prod (z - root_j)`: the quantity every factorization
/// guarantee is stated in. The root list length must equal the degree.
pub fn residual_norm<T: Scalar>(phi: &Polynomial<T>, roots: &[Complex<T>]) -> Result<T> {
    if roots.len() != phi.degree() {
        return Err(Error::InvalidInput(format!(
            "residual needs exactly degree = {} roots, got {}",
            phi.degree(),
            roots.len()
        )));
    }
    let product = expand_factors(roots);
    Ok((phi - &product).max_norm())
}

/// Converts a target root precision into the factorization tolerance that
/// guarantees it: a coefficient error below `(eps_root / 8d)^d` forces every
/// root of the factorization within `eps_root` of a root of the input.
pub fn factor_to_root_precision<T: Scalar>(eps_root: T, d: usize) -> Result<T> {
    if d == 0 {
        return Err(Error::InvalidInput(
            "root-precision conversion requires degree >= 1".into(),
        ));
    }
    if !eps_root.is_finite() || eps_root <= T::zero() {
        return Err(Error::InvalidInput(
            "root precision must be positive".into(),
        ));
    }
    let eps = (eps_root / (real::<T>(8.0) * real::<T>(d as f64))).powi(d as i32);
    if !eps.is_finite() || eps < T::tau_floor() {
        return Err(Error::TauUnderflow {
            tau: eps.to_f64().unwrap_or(f64::NAN),
            floor: T::tau_floor().to_f64().unwrap_or(f64::NAN),
            degree: d,
            max_degree: DEFAULT_MAX_DEGREE,
        });
    }
    Ok(eps)
}
