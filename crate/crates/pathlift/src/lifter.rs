//! The four-quadrant lifting pipeline.
//!
//! One stage finds at least half the remaining roots: probe the circle
//! `|z| = 3/2` to pick, for each of the four axis rays, one starting point
//! per sheet of the branched cover; lift each ray toward the origin by
//! damped Newton steps against a geometrically decaying target; keep the
//! points the alpha test certifies; polish them with a fixed number of
//! plain Newton steps; weed duplicates with the Koebe-distortion test; and
//! deflate the found factor spectrally. The driver repeats stages until
//! every root is approximated, then rescales back to the input frame.

use num_complex::Complex;

use crate::certify::{alpha, same_root};
use crate::error::{Error, Result};
use crate::poly::{rescale_main, residual_norm, Polynomial};
use crate::scalar::{finite_c, real, Scalar};
use crate::spectral::deflate;

/// Practical degree guard for the default 64-bit scalar: the landing height
/// shrinks like (4/7)^d, so far beyond this the tolerance chain dips into
/// denormal territory. A wider scalar type can raise it via
/// [`SolveConfig::max_degree`].
pub const DEFAULT_MAX_DEGREE: usize = 24;

/// Probes per sheet: the circle gets `676 d` equally spaced probe points,
/// enough that consecutive image arguments move by at most `4 pi / 676`,
/// which is within the half-step tolerance `h/2` of the lifting iteration.
pub const DEFAULT_PROBE_MULTIPLIER: usize = 676;

/// Radius of the probe circle; roots are confined to the disk of radius
/// 3/4, so every probe sees all sheets of the cover.
pub const PROBE_RADIUS: f64 = 1.5;

/// Escape radius: no lifted path that still tracks a root can leave the
/// disk of radius 10, so crossing it marks the point divergent.
pub const ESCAPE_RADIUS: f64 = 10.0;

/// Tuning knobs of the solver. The defaults implement the four-quadrant
/// family; only `epsilon` normally needs choosing.
#[derive(Debug, Clone)]
pub struct SolveConfig<T: Scalar> {
    /// Target max-norm of the factorization residual.
    pub epsilon: T,
    /// Ray decay rate per step; must satisfy `h <= sin(A)/19` for the wedge
    /// half-angle `A`. The default 1/27 is adequate for `A = pi/4`.
    pub h: T,
    /// Number of rays; only the four-quadrant family (4) is implemented.
    pub family_m: usize,
    /// Probe points per sheet on the circle `|z| = 3/2`.
    pub probe_multiplier: usize,
    /// Half-angle of the wedge the lifted path must stay inside; `pi/4`
    /// for the four-quadrant family.
    pub wedge_half_angle: T,
    /// Largest accepted input degree; see [`DEFAULT_MAX_DEGREE`].
    pub max_degree: usize,
}

impl<T: Scalar> SolveConfig<T> {
    /// The default four-quadrant configuration at the given tolerance.
    pub fn new(epsilon: T) -> Self {
        SolveConfig {
            epsilon,
            h: T::one() / real::<T>(27.0),
            family_m: 4,
            probe_multiplier: DEFAULT_PROBE_MULTIPLIER,
            wedge_half_angle: T::FRAC_PI_4(),
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }

    /// Checks the configuration invariants.
    pub fn validate(&self) -> Result<()> {
        if !self.epsilon.is_finite() || self.epsilon <= T::zero() {
            return Err(Error::InvalidInput("epsilon must be positive".into()));
        }
        if self.family_m != 4 {
            return Err(Error::InvalidInput(
                "only the four-quadrant family (family_m = 4) is implemented".into(),
            ));
        }
        if self.wedge_half_angle.is_nan()
            || self.wedge_half_angle <= T::zero()
            || self.wedge_half_angle > T::FRAC_PI_2()
        {
            return Err(Error::InvalidInput(
                "wedge half-angle must lie in (0, pi/2]".into(),
            ));
        }
        let h_cap = self.wedge_half_angle.sin() / real::<T>(19.0);
        if self.h.is_nan() || self.h <= T::zero() || self.h > h_cap {
            return Err(Error::InvalidInput(format!(
                "step rate h must lie in (0, sin(A)/19 = {:e}]",
                h_cap.to_f64().unwrap_or(f64::NAN)
            )));
        }
        if self.probe_multiplier < 4 {
            return Err(Error::InvalidInput(
                "probe multiplier must be at least 4".into(),
            ));
        }
        if self.max_degree < 1 {
            return Err(Error::InvalidInput("max degree must be at least 1".into()));
        }
        Ok(())
    }
}

/// One quadrant's starting data: probe points on `|z| = 3/2` paired with
/// their initial ray targets.
#[derive(Debug, Clone)]
pub struct WedgeBatch<T: Scalar> {
    /// Quadrant index `j` in 1..=4; the target ray argument is `j pi/2`.
    pub ray_index: usize,
    /// Starting points, one per sheet of the cover.
    pub points: Vec<Complex<T>>,
    /// Per-point initial target `|f(z_0)| i^j` on the ray.
    pub w0: Vec<Complex<T>>,
}

/// Result of lifting one batch: landed points aligned with the batch
/// (divergent points are `None`), the largest per-point step count, and the
/// number of polynomial evaluations spent.
#[derive(Debug, Clone)]
pub struct PlmOutcome<T: Scalar> {
    /// One entry per batch point; `None` marks a divergent or lost point.
    pub points: Vec<Option<Complex<T>>>,
    /// Largest step count `N` over the batch.
    pub max_steps: usize,
    /// Polynomial evaluations performed (Horner passes; a fused
    /// value-and-derivative evaluation counts as two).
    pub evaluations: u64,
}

/// Instrumented record of lifting a single point.
#[derive(Debug, Clone)]
pub struct PlmTrace<T: Scalar> {
    /// The landed point, unless it diverged.
    pub landed: Option<Complex<T>>,
    /// Steps taken along the ray (excluding the final landing step).
    pub steps: usize,
    /// Max over all recorded states, the initial one included, of
    /// `|f(z_n) - w_n| / |w_n|`; the tracking guarantee keeps this at or
    /// below `h/2`.
    pub max_residual_ratio: T,
    /// `|w_N|` at the last ray step; lies in `[tau, tau/(1-h)]`.
    pub final_w_norm: T,
}

/// Counters for one stage of the driver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageStats {
    /// Degree at the start of the stage.
    pub degree: usize,
    /// Roots accepted by the stage (at least half the degree).
    pub accepted: usize,
    /// Quadrants tried until one yielded enough roots (1..=4).
    pub quadrants_tried: usize,
    /// Largest ray step count `N` over all lifted points in the stage.
    pub plm_iterations: usize,
    /// Newton polish steps applied to each certified point.
    pub polish_iterations: usize,
    /// Certified points in the successful quadrant before weeding.
    pub points_certified: usize,
    /// Points the weeding pass removed in the successful quadrant.
    pub points_weeded: usize,
    /// Polynomial evaluations across all quadrants of the stage.
    pub evaluations: u64,
}

/// Output of one stage: the accepted roots, the deflated remainder, and
/// the stage counters.
#[derive(Debug, Clone)]
pub struct StageResult<T: Scalar> {
    /// Accepted root approximations (working coordinates).
    pub accepted: Vec<Complex<T>>,
    /// The polynomial carrying the remaining roots.
    pub deflated: Polynomial<T>,
    /// Counters for this stage.
    pub stats: StageStats,
}

/// A certified factorization of the input.
#[derive(Debug, Clone)]
pub struct Factorization<T: Scalar> {
    /// All degree-many root approximations, in input coordinates, in
    /// acceptance order.
    pub roots: Vec<Complex<T>>,
    /// `max_norm(phi - prod (z - root_j))`, recomputed from the output.
    pub residual: T,
    /// Per-stage counters, in stage order (the final degree-1 shortcut
    /// records no stage).
    pub per_stage: Vec<StageStats>,
    /// Rescale factor between input and working coordinates.
    pub k: T,
    /// Landing height used for the ray targets.
    pub tau: T,
}

/// The exact unit `i^j`: the four axis directions, with exact zero
/// components.
pub fn unit_ray<T: Scalar>(j: usize) -> Complex<T> {
    match j % 4 {
        1 => Complex::new(T::zero(), T::one()),
        2 => Complex::new(-T::one(), T::zero()),
        3 => Complex::new(T::zero(), -T::one()),
        _ => Complex::new(T::one(), T::zero()),
    }
}

/// Number of ray steps needed to decay from `|w0|` to `tau`:
/// `floor(ln(tau/|w0|) / ln(1-h))`, clamped at zero.
pub fn plm_step_count<T: Scalar>(tau: T, w0_norm: T, h: T) -> usize {
    if tau.is_nan() || tau <= T::zero() || w0_norm.is_nan() || w0_norm <= T::zero() {
        return 0;
    }
    let steps = (tau / w0_norm).ln() / (T::one() - h).ln();
    if steps > T::zero() {
        steps.floor().to_usize().unwrap_or(0)
    } else {
        0
    }
}

/// Number of polish steps: `max(3, 1 + floor(log2 log2 (64 d (7/4)^d / tau)))`.
///
/// The inner logarithm is evaluated in log space so the argument cannot
/// overflow. The floor of 3 enforces the hypothesis of the duplicate test,
/// which needs every candidate polished at least three times.
pub fn polish_step_count<T: Scalar>(tau: T, d_top: usize) -> usize {
    let min_steps = 3usize;
    if tau.is_nan() || tau <= T::zero() || d_top == 0 {
        return min_steps;
    }
    let ln_inner = real::<T>(64.0).ln()
        + real::<T>(d_top as f64).ln()
        + real::<T>(d_top as f64) * (real::<T>(7.0) / real::<T>(4.0)).ln()
        - tau.ln();
    let log2_inner = ln_inner / T::LN_2();
    if log2_inner <= T::one() {
        return min_steps;
    }
    let iterated = log2_inner.ln() / T::LN_2();
    let m = 1 + iterated.floor().to_usize().unwrap_or(0);
    m.max(min_steps)
}

/// Wraps an angle into `(-pi, pi]`.
fn wrap_angle<T: Scalar>(x: T) -> T {
    let two_pi = real::<T>(2.0) * T::PI();
    let mut y = x % two_pi;
    if y > T::PI() {
        y = y - two_pi;
    } else if y <= -T::PI() {
        y = y + two_pi;
    }
    y
}

/// Cyclic distance between probe indices.
fn cyclic_index_distance(a: usize, b: usize, n: usize) -> usize {
    let diff = a.abs_diff(b);
    diff.min(n - diff)
}

/// Picks the four starting batches by probing `f` on the circle
/// `|z| = 3/2` at `probe_multiplier * d` equally spaced points.
///
/// For each axis ray `j pi/2`, the image argument of the probe sequence is
/// scanned for upward sign crossings of the ray (the argument increases
/// monotonically when all roots are strictly inside the circle, so there is
/// exactly one crossing per sheet); the crossing endpoint nearer the ray is
/// selected. If the crossing count differs from the degree — possible only
/// when the root-location precondition is violated or precision fails — a
/// fallback selects the `d` probes with smallest angular distance to the
/// ray, subject to pairwise index separation of half a sheet's probe
/// budget, and [`Error::InsufficientCrossings`] reports a ray where even
/// that fails.
pub fn choose_initial_points<T: Scalar>(
    f: &Polynomial<T>,
    cfg: &SolveConfig<T>,
) -> Result<Vec<WedgeBatch<T>>> {
    let d = f.degree();
    if d < 1 || f.is_zero() {
        return Err(Error::InvalidInput(
            "initial points need a polynomial of degree >= 1".into(),
        ));
    }
    let n_probes = cfg.probe_multiplier * d;
    let radius = real::<T>(PROBE_RADIUS);
    let two_pi = real::<T>(2.0) * T::PI();
    let probes: Vec<Complex<T>> = (0..n_probes)
        .map(|k| {
            Complex::from_polar(
                radius,
                two_pi * real::<T>(k as f64) / real::<T>(n_probes as f64),
            )
        })
        .collect();
    let values = f.eval_many(&probes)?;
    let args: Vec<T> = values.iter().map(|v| v.arg()).collect();

    let mut batches = Vec::with_capacity(4);
    for j in 1..=4usize {
        let ray_arg = real::<T>(j as f64) * T::FRAC_PI_2();
        let s: Vec<T> = args.iter().map(|&a| wrap_angle(a - ray_arg)).collect();

        // Upward crossings: s passes 0 between consecutive probes. The
        // half-pi guard rejects the spurious sign flip where s wraps from
        // +pi to -pi (the ray's antipode).
        let quarter = T::FRAC_PI_2();
        let mut selected: Vec<usize> = Vec::new();
        for k in 0..n_probes {
            let k2 = (k + 1) % n_probes;
            if s[k] <= T::zero()
                && s[k2] > T::zero()
                && s[k].abs() <= quarter
                && s[k2].abs() <= quarter
            {
                selected.push(if s[k].abs() <= s[k2] { k } else { k2 });
            }
        }

        if selected.len() != d {
            // Fallback: nearest arguments with per-sheet index separation.
            let mut order: Vec<usize> = (0..n_probes).collect();
            order.sort_by(|&a, &b| {
                s[a].abs()
                    .partial_cmp(&s[b].abs())
                    .unwrap_or(core::cmp::Ordering::Equal)
                    .then(a.cmp(&b))
            });
            let min_sep = cfg.probe_multiplier / 2;
            selected.clear();
            for k in order {
                if selected
                    .iter()
                    .all(|&p| cyclic_index_distance(p, k, n_probes) >= min_sep)
                {
                    selected.push(k);
                    if selected.len() == d {
                        break;
                    }
                }
            }
            if selected.len() != d {
                return Err(Error::InsufficientCrossings {
                    ray: j,
                    needed: d,
                    found: selected.len(),
                });
            }
        }

        let points: Vec<Complex<T>> = selected.iter().map(|&k| probes[k]).collect();
        let ray = unit_ray::<T>(j);
        let w0: Vec<Complex<T>> = selected
            .iter()
            .map(|&k| ray * Complex::from(values[k].norm()))
            .collect();
        batches.push(WedgeBatch {
            ray_index: j,
            points,
            w0,
        });
    }
    Ok(batches)
}

/// Lifts every point of a batch down its ray: `N` damped Newton steps
/// against the decaying targets `w_n = (1-h)^n w_0`, then one landing step
/// against `tau i^j`. Points whose derivative vanishes, that leave the
/// escape disk, or that lose finiteness become `None` without disturbing
/// the rest of the batch.
pub fn iterate_plm<T: Scalar>(
    f: &Polynomial<T>,
    batch: &WedgeBatch<T>,
    tau: T,
    cfg: &SolveConfig<T>,
) -> PlmOutcome<T> {
    let one_minus_h = T::one() - cfg.h;
    let direction = unit_ray::<T>(batch.ray_index);
    let escape_sq = real::<T>(ESCAPE_RADIUS * ESCAPE_RADIUS);
    let mut points = Vec::with_capacity(batch.points.len());
    let mut max_steps = 0usize;
    let mut evaluations = 0u64;

    for (idx, &z0) in batch.points.iter().enumerate() {
        let w0_norm = batch.w0[idx].norm();
        if w0_norm.is_nan() || w0_norm <= T::zero() {
            points.push(None);
            continue;
        }
        let n = plm_step_count(tau, w0_norm, cfg.h);
        max_steps = max_steps.max(n);

        let mut z = z0;
        let mut modulus = w0_norm;
        let mut alive = true;
        for _ in 0..n {
            modulus = modulus * one_minus_h;
            let w = direction * Complex::from(modulus);
            let (v, dv) = f.eval_with_derivative(z);
            evaluations += 2;
            if dv.norm() < T::derivative_floor() {
                alive = false;
                break;
            }
            z = z - (v - w) / dv;
            if !finite_c(z) || z.norm_sqr() > escape_sq {
                alive = false;
                break;
            }
        }
        if alive {
            // Land on the perturbed polynomial: one Newton step of
            // f - tau i^j.
            let target = direction * Complex::from(tau);
            let (v, dv) = f.eval_with_derivative(z);
            evaluations += 2;
            if dv.norm() < T::derivative_floor() {
                alive = false;
            } else {
                z = z - (v - target) / dv;
                alive = finite_c(z) && z.norm_sqr() <= escape_sq;
            }
        }
        points.push(if alive { Some(z) } else { None });
    }

    PlmOutcome {
        points,
        max_steps,
        evaluations,
    }
}

/// Lifts a single point like [`iterate_plm`] while recording the tracking
/// ratio `|f(z_n) - w_n| / |w_n|` at every state, the initial one included.
pub fn iterate_plm_traced<T: Scalar>(
    f: &Polynomial<T>,
    z0: Complex<T>,
    w0: Complex<T>,
    tau: T,
    cfg: &SolveConfig<T>,
) -> PlmTrace<T> {
    let w0_norm = w0.norm();
    if w0_norm.is_nan() || w0_norm <= T::zero() {
        return PlmTrace {
            landed: None,
            steps: 0,
            max_residual_ratio: T::infinity(),
            final_w_norm: T::zero(),
        };
    }
    let direction = w0 / Complex::from(w0_norm);
    let one_minus_h = T::one() - cfg.h;
    let escape_sq = real::<T>(ESCAPE_RADIUS * ESCAPE_RADIUS);
    let n = plm_step_count(tau, w0_norm, cfg.h);

    let mut z = z0;
    let mut modulus = w0_norm;
    let mut ratio = (f.eval(z) - w0).norm() / w0_norm;
    let mut alive = true;
    for _ in 0..n {
        modulus = modulus * one_minus_h;
        let w = direction * Complex::from(modulus);
        let (v, dv) = f.eval_with_derivative(z);
        if dv.norm() < T::derivative_floor() {
            alive = false;
            break;
        }
        z = z - (v - w) / dv;
        if !finite_c(z) || z.norm_sqr() > escape_sq {
            alive = false;
            break;
        }
        ratio = ratio.max((f.eval(z) - w).norm() / modulus);
    }
    let landed = if alive {
        let target = direction * Complex::from(tau);
        let (v, dv) = f.eval_with_derivative(z);
        if dv.norm() < T::derivative_floor() {
            None
        } else {
            let zf = z - (v - target) / dv;
            (finite_c(zf) && zf.norm_sqr() <= escape_sq).then_some(zf)
        }
    } else {
        None
    };
    PlmTrace {
        landed,
        steps: n,
        max_residual_ratio: ratio,
        final_w_norm: modulus,
    }
}

/// Keeps the points whose alpha certificate is below 1/8, preserving
/// order. Non-finite points and points where the derivative vanishes are
/// silently excluded.
pub fn select_approx_zeros<T: Scalar>(psi: &Polynomial<T>, y: &[Complex<T>]) -> Vec<Complex<T>> {
    select_counted(psi, y).0
}

fn select_counted<T: Scalar>(psi: &Polynomial<T>, y: &[Complex<T>]) -> (Vec<Complex<T>>, u64) {
    let cost = psi.degree() as u64;
    let mut evaluations = 0u64;
    let selected = y
        .iter()
        .copied()
        .filter(|&z| {
            if !finite_c(z) {
                return false;
            }
            evaluations += cost;
            matches!(alpha(psi, z), Ok(rep) if rep.certified())
        })
        .collect();
    (selected, evaluations)
}

/// Applies the fixed polish schedule — `polish_step_count(tau, d_top)`
/// plain Newton steps on `psi` — to every point. Points that lose their
/// derivative or finiteness are dropped.
pub fn polish<T: Scalar>(
    psi: &Polynomial<T>,
    x: &[Complex<T>],
    tau: T,
    d_top: usize,
) -> Vec<Complex<T>> {
    polish_counted(psi, x, tau, d_top).0
}

fn polish_counted<T: Scalar>(
    psi: &Polynomial<T>,
    x: &[Complex<T>],
    tau: T,
    d_top: usize,
) -> (Vec<Complex<T>>, u64) {
    let m = polish_step_count(tau, d_top);
    let mut evaluations = 0u64;
    let mut out = Vec::with_capacity(x.len());
    'points: for &start in x {
        let mut z = start;
        for _ in 0..m {
            let (v, dv) = psi.eval_with_derivative(z);
            evaluations += 2;
            if dv.norm() < T::derivative_floor() {
                continue 'points;
            }
            z = z - v / dv;
            if !finite_c(z) {
                continue 'points;
            }
        }
        out.push(z);
    }
    (out, evaluations)
}

/// Removes duplicate approximations: sorts by `|psi|` ascending and
/// greedily accepts each point unless the Koebe test says it approximates
/// the same root as an already accepted point. Candidates whose derivative
/// is below the floor cannot be certified distinct and are rejected.
pub fn weed<T: Scalar>(psi: &Polynomial<T>, w: &[Complex<T>]) -> Vec<Complex<T>> {
    weed_counted(psi, w).0
}

fn weed_counted<T: Scalar>(psi: &Polynomial<T>, w: &[Complex<T>]) -> (Vec<Complex<T>>, u64) {
    let mut evaluations = 0u64;
    let mut order: Vec<(Complex<T>, T)> = w
        .iter()
        .filter(|&&z| finite_c(z))
        .map(|&z| {
            evaluations += 1;
            (z, psi.eval(z).norm())
        })
        .filter(|(_, v)| v.is_finite())
        .collect();
    order.sort_by(|(za, va), (zb, vb)| {
        va.partial_cmp(vb)
            .unwrap_or(core::cmp::Ordering::Equal)
            .then(
                za.re
                    .partial_cmp(&zb.re)
                    .unwrap_or(core::cmp::Ordering::Equal),
            )
            .then(
                za.im
                    .partial_cmp(&zb.im)
                    .unwrap_or(core::cmp::Ordering::Equal),
            )
    });

    let mut accepted: Vec<Complex<T>> = Vec::new();
    for (z, _) in order {
        evaluations += 2;
        if psi.eval_with_derivative(z).1.norm() < T::derivative_floor() {
            continue; // cannot be certified distinct from anything
        }
        let duplicate = accepted.iter().any(|&v| {
            evaluations += 2;
            matches!(same_root(psi, v, z), Ok(true))
        });
        if !duplicate {
            accepted.push(z);
        }
    }
    (accepted, evaluations)
}

/// Runs one stage on `f`: tries the four quadrants in order and, for the
/// first whose certified, polished, weeded root set covers at least half
/// the degree, deflates and returns. The covering guarantee of the
/// four-ray family makes a fifth quadrant impossible; reaching it reports
/// [`Error::TheoremViolation`] with each quadrant's yield.
pub fn half_roots_and_deflate<T: Scalar>(
    f: &Polynomial<T>,
    tau: T,
    cfg: &SolveConfig<T>,
) -> Result<StageResult<T>> {
    let d = f.degree();
    if d < 2 {
        return Err(Error::InvalidInput(
            "stages need degree >= 2; the driver solves degree 1 directly".into(),
        ));
    }
    let needed = d.div_ceil(2);

    let batches = choose_initial_points(f, cfg)?;
    let mut evaluations = (cfg.probe_multiplier * d) as u64;
    let mut plm_iterations = 0usize;
    let polish_iterations = polish_step_count(tau, d);
    let mut quadrant_yields: Vec<(usize, usize)> = Vec::with_capacity(4);

    for batch in &batches {
        let j = batch.ray_index;
        let psi = f.sub_constant(unit_ray::<T>(j) * Complex::from(tau));

        let outcome = iterate_plm(f, batch, tau, cfg);
        evaluations += outcome.evaluations;
        plm_iterations = plm_iterations.max(outcome.max_steps);
        let landed: Vec<Complex<T>> = outcome.points.into_iter().flatten().collect();

        let (certified, used) = select_counted(&psi, &landed);
        evaluations += used;
        let (polished, used) = polish_counted(&psi, &certified, tau, d);
        evaluations += used;
        let (accepted, used) = weed_counted(&psi, &polished);
        evaluations += used;
        quadrant_yields.push((j, accepted.len()));

        if accepted.len() >= needed {
            let deflated = if accepted.len() == d {
                Polynomial::new(vec![Complex::from(T::one())])
            } else {
                deflate(&psi, &accepted)?.quotient
            };
            let stats = StageStats {
                degree: d,
                accepted: accepted.len(),
                quadrants_tried: j,
                plm_iterations,
                polish_iterations,
                points_certified: certified.len(),
                points_weeded: polished.len() - accepted.len(),
                evaluations,
            };
            return Ok(StageResult {
                accepted,
                deflated,
                stats,
            });
        }
    }

    Err(Error::TheoremViolation {
        degree: d,
        quadrant_yields,
    })
}

/// Factors a monic polynomial to tolerance `epsilon` with the default
/// configuration: returns `degree` root approximations whose expanded
/// product is within `epsilon` of the input in the max coefficient norm.
pub fn solve<T: Scalar>(phi: &Polynomial<T>, epsilon: T) -> Result<Factorization<T>> {
    solve_with_config(phi, &SolveConfig::new(epsilon))
}

/// [`solve`] with explicit configuration.
pub fn solve_with_config<T: Scalar>(
    phi: &Polynomial<T>,
    cfg: &SolveConfig<T>,
) -> Result<Factorization<T>> {
    cfg.validate()?;
    if phi.is_zero() || phi.degree() < 1 {
        return Err(Error::InvalidInput(
            "the solver requires degree >= 1".into(),
        ));
    }
    if !phi.is_finite() {
        return Err(Error::InvalidInput(
            "the solver requires finite coefficients".into(),
        ));
    }
    if !phi.is_monic() {
        return Err(Error::InvalidInput(
            "the solver requires a monic polynomial; divide by the leading coefficient first"
                .into(),
        ));
    }

    let d = phi.degree();
    let (normalized, tau) = rescale_main(phi, cfg.epsilon)?;
    if d > cfg.max_degree {
        return Err(Error::TauUnderflow {
            tau: tau.to_f64().unwrap_or(f64::NAN),
            floor: T::tau_floor().to_f64().unwrap_or(f64::NAN),
            degree: d,
            max_degree: cfg.max_degree,
        });
    }

    let mut f = normalized.f0;
    let mut lambda: Vec<Complex<T>> = Vec::with_capacity(d);
    let mut per_stage = Vec::new();
    while f.degree() >= 2 {
        let stage = half_roots_and_deflate(&f, tau, cfg)?;
        lambda.extend_from_slice(&stage.accepted);
        per_stage.push(stage.stats);
        f = stage.deflated;
    }
    if f.degree() == 1 {
        // Monic linear remainder z + a0: the root is -a0, exactly.
        lambda.push(-f.coeffs()[0]);
    }
    debug_assert_eq!(lambda.len(), d);

    let k = normalized.k;
    let roots: Vec<Complex<T>> = lambda.into_iter().map(|z| z * Complex::from(k)).collect();
    let residual = residual_norm(phi, &roots)?;
    Ok(Factorization {
        roots,
        residual,
        per_stage,
        k,
        tau,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{match_multisets, oracle_roots};
    use crate::poly::expand_factors;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    type C = Complex<f64>;
    type P = Polynomial<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    fn cfg(eps: f64) -> SolveConfig<f64> {
        SolveConfig::new(eps)
    }

    #[test]
    fn config_default_is_valid_and_guards_hold() {
        let conf = cfg(1e-4);
        conf.validate().unwrap();
        assert!(conf.h <= (FRAC_PI_2 / 2.0).sin() / 19.0);
        assert_eq!(conf.family_m, 4);
        assert_eq!(conf.probe_multiplier, 676);

        let mut bad = cfg(1e-4);
        bad.h = 0.038; // above sin(pi/4)/19 = 0.03722
        assert!(bad.validate().is_err());
        let mut bad = cfg(1e-4);
        bad.family_m = 3;
        assert!(bad.validate().is_err());
        assert!(cfg(0.0).validate().is_err());
        assert!(cfg(-1.0).validate().is_err());
    }

    #[test]
    fn step_count_examples() {
        assert_eq!(plm_step_count(1e-10, 1.0, 1.0 / 27.0), 610);
        assert_eq!(plm_step_count(1.0, 1.0, 1.0 / 27.0), 0);
        assert_eq!(plm_step_count(2.0, 1.0, 1.0 / 27.0), 0);
        // Decay really reaches the landing zone: tau <= |w_N| <= tau/(1-h).
        let h: f64 = 1.0 / 27.0;
        let tau: f64 = 1e-10;
        let n = plm_step_count(tau, 1.0, h);
        let w_n = (1.0 - h).powi(n as i32);
        assert!(tau <= w_n && w_n <= tau / (1.0 - h) * (1.0 + 1e-12));
    }

    #[test]
    fn polish_count_examples() {
        assert_eq!(polish_step_count(1.6187e-12, 8), 6);
        // The exact tolerance-chain value for d = 8, eps = 1e-4.
        let tau = 32.0 * 1e-4 / 7f64.powi(11);
        assert_eq!(polish_step_count(tau, 8), 6);
        assert_eq!(polish_step_count(1e-6, 2), 5);
        // Enormous tau still polishes three times (the weeding hypothesis).
        assert_eq!(polish_step_count(0.5, 1), 3);
        assert_eq!(polish_step_count(1e10, 4), 3);
    }

    #[test]
    fn unit_rays_are_exact_axis_units() {
        assert_eq!(unit_ray::<f64>(1), c(0.0, 1.0));
        assert_eq!(unit_ray::<f64>(2), c(-1.0, 0.0));
        assert_eq!(unit_ray::<f64>(3), c(0.0, -1.0));
        assert_eq!(unit_ray::<f64>(4), c(1.0, 0.0));
    }

    #[test]
    fn probes_of_monomial_find_one_crossing_per_sheet() {
        let f = P::monomial(2);
        let batches = choose_initial_points(&f, &cfg(1e-4)).unwrap();
        assert_eq!(batches.len(), 4);
        for (idx, batch) in batches.iter().enumerate() {
            assert_eq!(batch.ray_index, idx + 1);
            assert_eq!(batch.points.len(), 2);
            assert_eq!(batch.w0.len(), 2);
            for (z0, w0) in batch.points.iter().zip(&batch.w0) {
                assert!((z0.norm() - 1.5).abs() < 1e-14);
                // w0 sits exactly on the ray with modulus |f(z0)|.
                let expected = unit_ray::<f64>(batch.ray_index) * c(f.eval(*z0).norm(), 0.0);
                assert_eq!(*w0, expected);
                // Selected probes aim within the probe-spacing bound of
                // the ray.
                let miss = wrap_angle(f.eval(*z0).arg() - batch.ray_index as f64 * FRAC_PI_2).abs();
                assert!(miss <= 4.0 * PI / 676.0, "image argument misses by {miss}");
            }
        }
    }

    #[test]
    fn probes_cover_all_rays_for_separated_roots() {
        let f = expand_factors(&[c(0.25, 0.0), c(-0.25, 0.0)]);
        let batches = choose_initial_points(&f, &cfg(1e-4)).unwrap();
        for batch in &batches {
            assert_eq!(batch.points.len(), 2);
            for (z0, w0) in batch.points.iter().zip(&batch.w0) {
                let miss = wrap_angle(f.eval(*z0).arg() - batch.ray_index as f64 * FRAC_PI_2);
                assert!(miss.abs() <= 4.0 * PI / 676.0);
                assert!(w0.norm() > 0.0);
            }
        }
    }

    #[test]
    fn lifting_a_linear_polynomial_is_exact() {
        // f = z: every damped step lands exactly on the target, so the
        // lifted point equals tau i^j and the tracking ratio is zero.
        let f = P::monomial(1);
        let tau = 1e-8;
        let conf = cfg(1e-4);
        let z0 = c(0.0, 1.5);
        let w0 = c(0.0, 1.5); // f(z0) = z0 on ray j = 1
        let batch = WedgeBatch {
            ray_index: 1,
            points: vec![z0],
            w0: vec![w0],
        };
        let out = iterate_plm(&f, &batch, tau, &conf);
        let landed = out.points[0].unwrap();
        assert!((landed - c(0.0, tau)).norm() <= 1e-20);
        assert_eq!(out.max_steps, plm_step_count(tau, 1.5, conf.h));

        let trace = iterate_plm_traced(&f, z0, w0, tau, &conf);
        assert_eq!(trace.max_residual_ratio, 0.0);
        assert!(tau <= trace.final_w_norm && trace.final_w_norm <= tau / (1.0 - conf.h));
        assert_eq!(trace.landed.unwrap(), landed);
    }

    #[test]
    fn traced_lift_tracks_inside_the_wedge() {
        // A full good-quadrant run on f = z^2 - 1/4 must keep the tracking
        // ratio within h/2 at every recorded state and land within the
        // landing band.
        let f = P::from_real(&[-0.25, 0.0, 1.0]);
        let conf = cfg(1e-4);
        let tau = 1e-9;
        let batches = choose_initial_points(&f, &conf).unwrap();
        let mut certified_any = false;
        for batch in &batches {
            let psi = f.sub_constant(unit_ray::<f64>(batch.ray_index) * c(tau, 0.0));
            for (idx, &z0) in batch.points.iter().enumerate() {
                let trace = iterate_plm_traced(&f, z0, batch.w0[idx], tau, &conf);
                let Some(landed) = trace.landed else { continue };
                if !matches!(crate::certify::alpha(&psi, landed), Ok(r) if r.certified()) {
                    continue;
                }
                certified_any = true;
                assert!(
                    trace.max_residual_ratio <= conf.h / 2.0 * (1.0 + 1e-9),
                    "ratio {} exceeds h/2",
                    trace.max_residual_ratio
                );
                assert!(tau <= trace.final_w_norm);
                assert!(trace.final_w_norm <= tau / (1.0 - conf.h) * (1.0 + 1e-12));
            }
        }
        assert!(certified_any, "no certified point in any quadrant");
    }

    #[test]
    fn select_keeps_only_certified_points() {
        let psi = P::from_real(&[-1.0, 0.0, 1.0]);
        let kept = select_approx_zeros(&psi, &[c(1.01, 0.0), c(2.0, 0.0)]);
        assert_eq!(kept, vec![c(1.01, 0.0)]);
        assert!(select_approx_zeros(&psi, &[]).is_empty());
        // Non-finite points are dropped, not errors.
        let kept = select_approx_zeros(&psi, &[c(f64::NAN, 0.0), c(1.001, 0.0)]);
        assert_eq!(kept.len(), 1);
    }

    #[test]
    fn polish_fixes_exact_roots_and_contracts_nearby_points() {
        let psi = P::from_real(&[-0.25, 0.0, 1.0]);
        let polished = polish(&psi, &[c(0.5, 0.0)], 1e-10, 2);
        assert_eq!(polished, vec![c(0.5, 0.0)]);

        let polished = polish(&psi, &[c(0.5001, 0.0)], 1e-10, 2);
        assert!((polished[0] - c(0.5, 0.0)).norm() < 1e-15);

        // The critical point of psi loses its derivative and is dropped.
        let polished = polish(&psi, &[c(0.0, 0.0), c(0.4999, 0.0)], 1e-10, 2);
        assert_eq!(polished.len(), 1);
    }

    #[test]
    fn weed_collapses_duplicates_and_keeps_distinct_roots() {
        let psi = P::from_real(&[-0.25, 0.0, 1.0]);
        let w = [
            c(0.5 + 1e-12, 0.0),
            c(0.5 - 2e-12, 1e-12),
            c(-0.5 + 1e-12, 0.0),
        ];
        let kept = weed(&psi, &w);
        assert_eq!(kept.len(), 2);
        let matched = match_multisets(&kept, &[c(0.5, 0.0), c(-0.5, 0.0)]).unwrap();
        assert!(matched < 1e-10);

        // Idempotence.
        let again = weed(&psi, &kept);
        assert_eq!(again, kept);
    }

    #[test]
    fn stage_on_quadratic_finds_at_least_one_root() {
        let f = P::from_real(&[-0.25, 0.0, 1.0]);
        let tau = 1e-9;
        let stage = half_roots_and_deflate(&f, tau, &cfg(1e-4)).unwrap();
        assert!(stage.stats.quadrants_tried <= 4);
        assert!(!stage.accepted.is_empty());
        assert_eq!(stage.deflated.degree(), 2 - stage.accepted.len());
        assert_eq!(stage.stats.degree, 2);
        assert_eq!(stage.stats.accepted, stage.accepted.len());
        // Accepted points approximate roots of psi = f - tau i^j, which lie
        // within ~tau of the true roots +-1/2.
        for a in &stage.accepted {
            let best = [c(0.5, 0.0), c(-0.5, 0.0)]
                .iter()
                .map(|r| (a - r).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-6);
        }
    }

    #[test]
    fn stage_on_four_symmetric_roots_takes_half() {
        let roots = [c(0.3, 0.0), c(-0.3, 0.0), c(0.0, 0.3), c(0.0, -0.3)];
        let f = expand_factors(&roots);
        let stage = half_roots_and_deflate(&f, 1e-9, &cfg(1e-4)).unwrap();
        assert!(stage.accepted.len() >= 2);
        assert!(stage.stats.quadrants_tried <= 4);
        for a in &stage.accepted {
            let best = roots
                .iter()
                .map(|r| (a - r).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-6, "accepted point {a} near no root");
        }
    }

    #[test]
    fn stage_rejects_degree_below_two() {
        let f = P::from_real(&[0.5, 1.0]);
        assert!(matches!(
            half_roots_and_deflate(&f, 1e-9, &cfg(1e-4)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn solve_linear_is_exact() {
        let phi = P::new(vec![c(-0.3, 0.7), c(1.0, 0.0)]);
        let out = solve(&phi, 1e-6).unwrap();
        assert_eq!(out.roots, vec![c(0.3, -0.7)]);
        assert_eq!(out.residual, 0.0);
        assert!(out.per_stage.is_empty());
    }

    #[test]
    fn solve_z2_minus_1_to_tolerance() {
        let phi = P::from_real(&[-1.0, 0.0, 1.0]);
        let out = solve(&phi, 1e-6).unwrap();
        assert_eq!(out.roots.len(), 2);
        assert!(out.residual < 1e-6);
        let matched = match_multisets(&out.roots, &[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        assert!(matched < 1e-6);
        assert!((out.k - 4.0).abs() < 1e-12);
        for stats in &out.per_stage {
            assert!(stats.accepted * 2 >= stats.degree);
            assert!(stats.quadrants_tried <= 4);
            assert!(stats.polish_iterations >= 3);
        }
    }

    #[test]
    fn solve_handles_multiple_root_at_origin() {
        let phi = P::monomial(4);
        let out = solve(&phi, 1e-4).unwrap();
        assert_eq!(out.roots.len(), 4);
        assert!(out.residual < 1e-4);
        for r in &out.roots {
            assert!(r.norm() < 0.05, "cluster point {r} strayed from 0");
        }
    }

    #[test]
    fn solve_matches_oracle_on_a_fixed_instance() {
        let phi = P::new(vec![
            c(0.21, -0.33),
            c(-0.4, 0.12),
            c(0.05, 0.6),
            c(-0.7, 0.02),
            c(0.3, -0.1),
            c(1.0, 0.0),
        ]);
        let out = solve(&phi, 1e-6).unwrap();
        assert!(out.residual < 1e-6);
        let oracle = oracle_roots(&phi).unwrap();
        let matched = match_multisets(&out.roots, &oracle.roots).unwrap();
        assert!(matched < 1e-4, "matched distance {matched}");
    }

    #[test]
    fn solve_rejects_bad_inputs() {
        let nonmonic = P::from_real(&[1.0, 2.0]);
        assert!(matches!(
            solve(&nonmonic, 1e-4),
            Err(Error::InvalidInput(_))
        ));
        let constant = P::from_real(&[1.0]);
        assert!(matches!(
            solve(&constant, 1e-4),
            Err(Error::InvalidInput(_))
        ));
        let monic = P::from_real(&[-1.0, 0.0, 1.0]);
        assert!(matches!(solve(&monic, -1.0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn solve_reports_tau_underflow_with_the_degree_guard() {
        let mut coeffs = vec![c(0.0, 0.0); 21];
        coeffs[0] = c(1.0, 0.0);
        coeffs[20] = c(1.0, 0.0);
        let phi = P::new(coeffs);
        match solve(&phi, 1e-300) {
            Err(Error::TauUnderflow {
                degree, max_degree, ..
            }) => {
                assert_eq!(degree, 20);
                assert_eq!(max_degree, DEFAULT_MAX_DEGREE);
            }
            other => panic!("expected TauUnderflow, got {other:?}"),
        }
        // Degrees above the guard are rejected even at easy tolerances.
        let phi = P::monomial(25).sub_constant(c(0.5, 0.0));
        assert!(matches!(
            solve(&phi, 1e-4),
            Err(Error::TauUnderflow { degree: 25, .. })
        ));
    }

    fn unit_disk_coeff() -> impl Strategy<Value = C> {
        (-1.0f64..1.0, -1.0f64..1.0)
            .prop_filter("inside unit disk", |(re, im)| re * re + im * im <= 1.0)
            .prop_map(|(re, im)| Complex::new(re, im))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        // End-to-end: random members of the unit-coefficient family factor
        // to tolerance, with the stage guarantee holding throughout.
        #[test]
        fn solve_random_members_of_the_unit_family(
            coeffs in proptest::collection::vec(unit_disk_coeff(), 2..7),
        ) {
            let mut v = coeffs;
            v.push(Complex::new(1.0, 0.0));
            let phi = P::new(v);
            prop_assume!(phi.is_monic() && phi.degree() >= 2);
            let out = solve(&phi, 1e-3).unwrap();
            prop_assert_eq!(out.roots.len(), phi.degree());
            prop_assert!(out.residual < 2e-3, "residual {}", out.residual);
            for stats in &out.per_stage {
                prop_assert!(stats.accepted >= stats.degree.div_ceil(2));
                prop_assert!(stats.quadrants_tried <= 4);
            }
        }
    }
}
