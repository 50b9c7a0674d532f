//! Independent reference root solver used by tests and the CLI's
//! comparison mode.
//!
//! The solver runs simultaneous Aberth–Ehrlich iteration: every approximation
//! takes a Newton step corrected by mutual repulsion, so clustered and
//! multiple roots are handled without deflation. It deliberately shares no
//! iteration logic with the lifting pipeline — that independence is what
//! makes it usable as ground truth.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{real, Scalar};

/// Sweep cap; a well-posed desk-scale instance converges far earlier.
pub const MAX_SWEEPS: usize = 500;

/// Convergence threshold on the largest per-root update.
const UPDATE_TOL: f64 = 1e-13;

/// Largest acceptable backward error when the sweep cap is reached:
/// multiple-root clusters stall with updates at the noise floor while the
/// roots themselves are already as good as the arithmetic allows.
const CAP_BACKWARD_TOL: f64 = 1e-8;

/// Irrational angular offset for the initial circle, so the starting points
/// never align with a symmetry of the root set.
const INIT_ANGLE_OFFSET: f64 = 2.399_963_229_728_653;

/// Roots found by the reference solver, with convergence diagnostics.
#[derive(Debug, Clone)]
pub struct OracleResult<T: Scalar> {
    /// One approximation per root, multiplicity appearing as clusters.
    pub roots: Vec<Complex<T>>,
    /// `max_j |p(root_j)| / ||p||`, the residual scaled by the largest
    /// coefficient modulus.
    pub max_backward_error: T,
    /// Sweeps performed.
    pub iterations: usize,
}

/// Finds all roots of `p` by Aberth–Ehrlich simultaneous iteration.
///
/// Initial approximations sit equispaced on a circle of radius
/// `0.9 * root_radius_bound(p)` (radius 1/2 when the bound degenerates to
/// zero), rotated by an irrational offset. Iteration stops when the largest
/// update drops below 1e-13; at the sweep cap the result is still accepted
/// if every root's backward error is at most 1e-8, and rejected with
/// [`Error::NoConvergence`] otherwise.
pub fn oracle_roots<T: Scalar>(p: &Polynomial<T>) -> Result<OracleResult<T>> {
    if p.degree() < 1 || p.is_zero() {
        return Err(Error::InvalidInput(
            "the reference solver requires degree >= 1".into(),
        ));
    }
    if !p.is_finite() {
        return Err(Error::InvalidInput(
            "the reference solver requires finite coefficients".into(),
        ));
    }
    let f = p.monicized();
    let d = f.degree();

    let bound = f.root_radius_bound();
    let radius = if bound > T::zero() {
        real::<T>(0.9) * bound
    } else {
        real::<T>(0.5)
    };
    let mut z: Vec<Complex<T>> = (0..d)
        .map(|k| {
            let angle = real::<T>(2.0) * T::PI() * real::<T>(k as f64) / real::<T>(d as f64)
                + real::<T>(INIT_ANGLE_OFFSET);
            Complex::from_polar(radius, angle)
        })
        .collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_SWEEPS {
        iterations += 1;
        // Jacobi-style sweep: all updates computed from the previous state,
        // so the result is independent of visit order.
        let mut next = Vec::with_capacity(d);
        let mut max_update = T::zero();
        for i in 0..d {
            let zi = z[i];
            let (v, dv) = f.eval_with_derivative(zi);
            let w = if dv.norm() < T::derivative_floor() {
                // Saddle of the iteration (e.g. the exact midpoint of two
                // roots): nudge deterministically and keep sweeping.
                Complex::from_polar(real::<T>(1e-3) * (T::one() + zi.norm()), real::<T>(0.5))
            } else {
                let newton = v / dv;
                let mut repulsion = Complex::<T>::zero();
                for (j, &zj) in z.iter().enumerate() {
                    if j != i && zi != zj {
                        repulsion = repulsion + (zi - zj).inv();
                    }
                }
                let denom = Complex::from(T::one()) - newton * repulsion;
                if denom.norm() < T::derivative_floor() {
                    newton
                } else {
                    newton / denom
                }
            };
            max_update = max_update.max(w.norm());
            next.push(zi - w);
        }
        z = next;
        if max_update < real::<T>(UPDATE_TOL) {
            converged = true;
            break;
        }
    }

    let max_backward_error = z
        .iter()
        .map(|&zi| backward_error(&f, zi))
        .fold(T::zero(), T::max);
    if !converged && max_backward_error > real::<T>(CAP_BACKWARD_TOL) {
        return Err(Error::NoConvergence {
            sweeps: iterations,
            backward_error: max_backward_error.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(OracleResult {
        roots: z,
        max_backward_error,
        iterations,
    })
}

/// `|p(z)| / ||p||`: the residual at `z` scaled by the largest coefficient
/// modulus, a measure of how far the coefficients would need to move for
/// `z` to be an exact root.
fn backward_error<T: Scalar>(p: &Polynomial<T>, z: Complex<T>) -> T {
    let denom = p.max_norm();
    if denom > T::zero() {
        p.eval(z).norm() / denom
    } else {
        T::zero()
    }
}

/// Smallest achievable value of `max_j |a_j - b_(pi(j))|` over permutations
/// `pi`: the bottleneck distance between two equal-size point multisets.
///
/// Computed exactly by binary search over the sorted pairwise distances,
/// testing each threshold with augmenting-path bipartite matching.
pub fn match_multisets<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "multiset match needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n == 0 {
        return Ok(T::zero());
    }

    let dist: Vec<Vec<T>> = a
        .iter()
        .map(|&ai| b.iter().map(|&bj| (ai - bj).norm()).collect())
        .collect();
    let mut thresholds: Vec<T> = dist.iter().flatten().copied().collect();
    thresholds.sort_by(|x, y| x.partial_cmp(y).expect("distances are finite"));
    thresholds.dedup();

    let mut lo = 0usize;
    let mut hi = thresholds.len() - 1;
    if !perfect_matching_exists(&dist, thresholds[hi]) {
        return Err(Error::InvalidInput(
            "multiset match failed: non-finite distances".into(),
        ));
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if perfect_matching_exists(&dist, thresholds[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(thresholds[lo])
}

/// Can every left point be matched to a distinct right point using only
/// pairs at distance <= `t`? Kuhn's augmenting-path algorithm.
fn perfect_matching_exists<T: Scalar>(dist: &[Vec<T>], t: T) -> bool {
    let n = dist.len();
    let mut matched_right: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let mut visited = vec![false; n];
        if !augment(i, dist, t, &mut visited, &mut matched_right) {
            return false;
        }
    }
    true
}

fn augment<T: Scalar>(
    i: usize,
    dist: &[Vec<T>],
    t: T,
    visited: &mut [bool],
    matched_right: &mut [Option<usize>],
) -> bool {
    for j in 0..dist.len() {
        if dist[i][j] <= t && !visited[j] {
            visited[j] = true;
            let free = match matched_right[j] {
                None => true,
                Some(k) => augment(k, dist, t, visited, matched_right),
            };
            if free {
                matched_right[j] = Some(i);
                return true;
            }
        }
    }
    false
}
