//! Seeded, bounded, derivative-free minimization.
//!
//! [`minimize`] runs adaptive Nelder–Mead from a scrambled Halton start set,
//! then polishes the best few candidates with restarts until the simplex
//! collapses. Box bounds are enforced by projecting every trial point;
//! periodic coordinates float freely inside the simplex and are wrapped only
//! when the objective is evaluated or a result is reported.
//!
//! [`grid_oracle`] is the exhaustive tensor-grid reference used in tests.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::math;

/// Diameter threshold for a converged simplex.
pub const X_TOL: f64 = 1e-10;
/// Spread of vertex values for a converged simplex.
pub const F_TOL: f64 = 1e-12;
/// Upper bound on grid evaluations accepted by [`grid_oracle`].
pub const GRID_BUDGET: f64 = 1e8;

/// Box-bounded parameter space; periodic coordinates wrap into `[lo, hi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    bounds: Vec<(f64, f64)>,
    periodic: Vec<bool>,
}

impl SearchSpace {
    pub fn new(bounds: Vec<(f64, f64)>, periodic: Vec<bool>) -> Result<Self> {
        if bounds.is_empty() {
            return Err(Error::InvalidConfig("search space has no dimensions"));
        }
        if bounds.len() != periodic.len() {
            return Err(Error::InvalidConfig(
                "periodic mask length differs from bounds",
            ));
        }
        if bounds
            .iter()
            .any(|&(lo, hi)| !(lo < hi) || !lo.is_finite() || !hi.is_finite())
        {
            return Err(Error::InvalidConfig("every bound needs lo < hi"));
        }
        Ok(SearchSpace { bounds, periodic })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    /// Clamp bounded coordinates; leave periodic ones untouched.
    fn project(&self, x: &mut [f64]) {
        for ((v, &(lo, hi)), &p) in x.iter_mut().zip(&self.bounds).zip(&self.periodic) {
            if !p {
                *v = v.clamp(lo, hi);
            }
        }
    }

    /// Clamp bounded coordinates and wrap periodic ones.
    pub fn canonical(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .zip(&self.bounds)
            .zip(&self.periodic)
            .map(|((&v, &(lo, hi)), &p)| {
                if p {
                    math::wrap(v, lo, hi - lo)
                } else {
                    v.clamp(lo, hi)
                }
            })
            .collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(&self.bounds)
                .zip(&self.periodic)
                .all(|((&v, &(lo, hi)), &p)| {
                    if p {
                        v >= lo && v < hi
                    } else {
                        v >= lo && v <= hi
                    }
                })
    }

    fn width(&self, i: usize) -> f64 {
        self.bounds[i].1 - self.bounds[i].0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub argmin: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub converged: bool,
}

/// Tuning knobs for [`minimize_with`].
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeOptions {
    /// Number of low-discrepancy starts; `None` picks 32 for dimension > 4,
    /// otherwise 16.
    pub starts: Option<usize>,
    /// Additional starting points tried before the low-discrepancy set.
    pub warm_starts: Vec<Vec<f64>>,
    /// How many of the best candidates are polished to full tolerance.
    pub polish: usize,
    pub x_tol: f64,
    pub f_tol: f64,
    /// Evaluation cap for a single Nelder–Mead run.
    pub max_evals_per_run: usize,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        MinimizeOptions {
            starts: None,
            warm_starts: Vec::new(),
            polish: 3,
            x_tol: X_TOL,
            f_tol: F_TOL,
            max_evals_per_run: 4000,
        }
    }
}

impl MinimizeOptions {
    pub fn with_warm_start(mut self, x: Vec<f64>) -> Self {
        self.warm_starts.push(x);
        self
    }
}

/// Multi-start minimization with default options.
pub fn minimize<F>(objective: F, space: &SearchSpace, seed: u64) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64,
{
    minimize_with(objective, space, seed, &MinimizeOptions::default())
}

pub fn minimize_with<F>(
    objective: F,
    space: &SearchSpace,
    seed: u64,
    options: &MinimizeOptions,
) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64,
{
    let dim = space.dim();
    let n_starts = options
        .starts
        .unwrap_or(if dim > 4 { 32 } else { 16 })
        .max(1);
    let mut eval = Evaluator {
        objective: &objective,
        space,
        count: 0,
    };

    let mut starts: Vec<Vec<f64>> = options
        .warm_starts
        .iter()
        .filter(|x| x.len() == dim)
        .map(|x| space.canonical(x))
        .collect();
    starts.extend(start_points(space, n_starts, seed));

    // stage 1: coarse descent from every start
    let coarse_x = options.x_tol.max(1e-6);
    let coarse_f = options.f_tol.max(1e-10);
    let mut candidates = Vec::with_capacity(starts.len());
    for x0 in &starts {
        let step = initial_step(space, x0, 0.1);
        let run = nelder_mead(
            &mut eval,
            x0,
            &step,
            coarse_x,
            coarse_f,
            options.max_evals_per_run,
        )?;
        candidates.push(run);
    }
    // stable sort keeps the lowest start index first among ties
    candidates.sort_by(|a, b| a.f.total_cmp(&b.f));

    // stage 2: polish the best distinct candidates with restarts
    let mut best: Option<Run> = None;
    let mut polished: Vec<Vec<f64>> = Vec::new();
    for cand in &candidates {
        if polished.len() >= options.polish.max(1) {
            break;
        }
        let canon = space.canonical(&cand.x);
        if polished
            .iter()
            .any(|p| max_periodic_distance(space, p, &canon) < 1e-6)
        {
            continue;
        }
        polished.push(canon);
        let run = polish(&mut eval, cand, options)?;
        if best.as_ref().map_or(true, |b| run.f < b.f) {
            best = Some(run);
        }
    }
    let best = best.expect("at least one start");
    let argmin = space.canonical(&best.x);
    Ok(OptResult {
        argmin,
        value: best.f,
        evaluations: eval.count,
        converged: best.converged,
    })
}

/// Exhaustive evaluation on a tensor grid with `points_per_dim` nodes per axis
/// (endpoints included for bounded axes, the upper end excluded for periodic
/// ones).
pub fn grid_oracle<F>(objective: F, space: &SearchSpace, points_per_dim: usize) -> Result<OptResult>
where
    F: Fn(&[f64]) -> f64,
{
    if points_per_dim < 3 {
        return Err(Error::InvalidConfig(
            "grid needs at least 3 points per dimension",
        ));
    }
    let dim = space.dim();
    let total = libm::pow(points_per_dim as f64, dim as f64);
    if total > GRID_BUDGET {
        return Err(Error::GridBudgetExceeded {
            points: total,
            budget: GRID_BUDGET,
        });
    }
    let axes: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            let (lo, hi) = space.bounds[i];
            let n = points_per_dim;
            (0..n)
                .map(|k| {
                    if space.periodic[i] {
                        lo + (hi - lo) * k as f64 / n as f64
                    } else {
                        lo + (hi - lo) * k as f64 / (n - 1) as f64
                    }
                })
                .collect()
        })
        .collect();
    let mut idx = vec![0usize; dim];
    let mut x: Vec<f64> = axes.iter().map(|a| a[0]).collect();
    let mut best_x = x.clone();
    let mut best_f = f64::INFINITY;
    let mut count = 0usize;
    loop {
        let f = objective(&x);
        count += 1;
        if !f.is_finite() {
            return Err(Error::NonFiniteObjective {
                point: x.clone(),
                value: f,
            });
        }
        if f < best_f {
            best_f = f;
            best_x.clone_from(&x);
        }
        // odometer increment
        let mut d = 0;
        loop {
            if d == dim {
                return Ok(OptResult {
                    argmin: best_x,
                    value: best_f,
                    evaluations: count,
                    converged: true,
                });
            }
            idx[d] += 1;
            if idx[d] < points_per_dim {
                x[d] = axes[d][idx[d]];
                break;
            }
            idx[d] = 0;
            x[d] = axes[d][0];
            d += 1;
        }
    }
}

struct Evaluator<'a, F> {
    objective: &'a F,
    space: &'a SearchSpace,
    count: usize,
}

impl<F: Fn(&[f64]) -> f64> Evaluator<'_, F> {
    fn eval(&mut self, x: &[f64]) -> Result<f64> {
        let canon = self.space.canonical(x);
        let f = (self.objective)(&canon);
        self.count += 1;
        if f.is_finite() {
            Ok(f)
        } else {
            Err(Error::NonFiniteObjective {
                point: canon,
                value: f,
            })
        }
    }
}

#[derive(Debug, Clone)]
struct Run {
    x: Vec<f64>,
    f: f64,
    converged: bool,
}

fn initial_step(space: &SearchSpace, x0: &[f64], frac: f64) -> Vec<f64> {
    (0..space.dim())
        .map(|i| {
            let h = frac * space.width(i);
            if space.periodic[i] {
                h
            } else {
                let (lo, hi) = space.bounds[i];
                // step inward when the start sits near the upper bound
                if x0[i] + h <= hi || x0[i] - h < lo {
                    h
                } else {
                    -h
                }
            }
        })
        .collect()
}

fn polish<F: Fn(&[f64]) -> f64>(
    eval: &mut Evaluator<'_, F>,
    start: &Run,
    options: &MinimizeOptions,
) -> Result<Run> {
    let mut current = start.clone();
    let mut frac = 0.05;
    for _ in 0..8 {
        let step = initial_step(eval.space, &current.x, frac);
        let run = nelder_mead(
            eval,
            &current.x,
            &step,
            options.x_tol,
            options.f_tol,
            options.max_evals_per_run,
        )?;
        let gain = current.f - run.f;
        let improved = run.f <= current.f;
        if improved {
            current = run;
        }
        if improved && gain <= options.f_tol && current.converged {
            break;
        }
        frac = (frac * 0.1).max(1e-6);
    }
    Ok(current)
}

/// Adaptive Nelder–Mead (dimension-dependent coefficients).
fn nelder_mead<F: Fn(&[f64]) -> f64>(
    eval: &mut Evaluator<'_, F>,
    x0: &[f64],
    step: &[f64],
    x_tol: f64,
    f_tol: f64,
    max_evals: usize,
) -> Result<Run> {
    let space = eval.space;
    let n = x0.len();
    let nf = n as f64;
    let (alpha, gamma, rho, shrink) = (1.0, 1.0 + 2.0 / nf, 0.75 - 0.5 / nf, 1.0 - 1.0 / nf);

    let start_count = eval.count;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let mut base = x0.to_vec();
    space.project(&mut base);
    let f0 = eval.eval(&base)?;
    simplex.push((base.clone(), f0));
    for i in 0..n {
        let mut v = base.clone();
        v[i] += step[i];
        space.project(&mut v);
        if v[i] == base[i] {
            v[i] -= step[i];
            space.project(&mut v);
        }
        let f = eval.eval(&v)?;
        simplex.push((v, f));
    }

    let mut centroid = vec![0.0; n];
    let mut converged = false;
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(&simplex[0].0).map(|(a, b)| math::abs(a - b)))
            .fold(0.0f64, f64::max);
        if diameter <= x_tol && spread <= f_tol {
            converged = true;
            break;
        }
        if eval.count - start_count >= max_evals {
            break;
        }

        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (v, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / nf;
            }
        }
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            let mut p: Vec<f64> = centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect();
            space.project(&mut p);
            p
        };

        let xr = along(alpha);
        let fr = eval.eval(&xr)?;
        if fr < simplex[0].1 {
            let xe = along(alpha * gamma);
            let fe = eval.eval(&xe)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        // contraction, outside if the reflection beat the worst vertex
        let (xc, fc) = if fr < worst.1 {
            let xc = along(alpha * rho);
            let fc = eval.eval(&xc)?;
            (xc, fc)
        } else {
            let xc = along(-rho);
            let fc = eval.eval(&xc)?;
            (xc, fc)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let mut p: Vec<f64> = best
                .iter()
                .zip(&vertex.0)
                .map(|(b, v)| b + shrink * (v - b))
                .collect();
            space.project(&mut p);
            let f = eval.eval(&p)?;
            *vertex = (p, f);
        }
    }
    let (x, f) = simplex.swap_remove(0);
    Ok(Run { x, f, converged })
}

/// Scrambled Halton points mapped into the box. The scramble is a random
/// shift modulo 1 (Cranley–Patterson rotation) drawn from the seed.
fn start_points(space: &SearchSpace, count: usize, seed: u64) -> Vec<Vec<f64>> {
    const PRIMES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    let dim = space.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
    (1..=count)
        .map(|k| {
            (0..dim)
                .map(|i| {
                    let base = PRIMES[i % PRIMES.len()];
                    let u = radical_inverse(k as u64, base) + shift[i];
                    let u = u - math::floor(u);
                    let (lo, hi) = space.bounds[i];
                    lo + u * (hi - lo)
                })
                .collect()
        })
        .collect()
}

fn radical_inverse(mut k: u64, base: u32) -> f64 {
    let b = base as u64;
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while k > 0 {
        r += (k % b) as f64 * f;
        k /= b;
        f *= inv;
    }
    r
}

fn max_periodic_distance(space: &SearchSpace, a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(i, (x, y))| {
            let d = math::abs(x - y);
            if space.periodic[i] {
                d.min(space.width(i) - d)
            } else {
                d
            }
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(dim: usize) -> SearchSpace {
        SearchSpace::new(vec![(-1.0, 1.0); dim], vec![false; dim]).unwrap()
    }

    #[test]
    fn sum_of_squares() {
        let r = minimize(|x| x.iter().map(|v| v * v).sum(), &cube(4), 0).unwrap();
        assert!(r.value <= 1e-16, "{r:?}");
        assert!(r.argmin.iter().all(|v| v.abs() < 1e-7));
        assert!(r.converged);
    }

    #[test]
    fn boundary_minimum() {
        let space = SearchSpace::new(vec![(0.5, 2.0), (-1.0, 1.0)], vec![false, false]).unwrap();
        let r = minimize(|x| x[0] + (x[1] - 0.3).powi(2), &space, 7).unwrap();
        assert_eq!(r.argmin[0], 0.5);
        assert!((r.argmin[1] - 0.3).abs() < 1e-8);
    }

    #[test]
    fn periodic_coordinate_wraps() {
        let period = core::f64::consts::PI;
        let space = SearchSpace::new(vec![(0.0, period)], vec![true]).unwrap();
        // minimum at 0 ≡ π; starts on both sides must land on it
        let r = minimize(|x| -libm::cos(2.0 * x[0]), &space, 3).unwrap();
        assert!((r.value + 1.0).abs() < 1e-12);
        assert!(space.contains(&r.argmin));
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let f = |x: &[f64]| libm::sin(3.0 * x[0]) * libm::cos(2.0 * x[1]) + 0.1 * x[0];
        let a = minimize(f, &cube(2), 11).unwrap();
        let b = minimize(f, &cube(2), 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn value_matches_objective_at_argmin() {
        let f = |x: &[f64]| (x[0] - 0.2).powi(2) + libm::cos(5.0 * x[1]);
        let r = minimize(f, &cube(2), 5).unwrap();
        assert_eq!(f(&r.argmin), r.value);
    }

    #[test]
    fn non_finite_objective_is_reported() {
        let err = minimize(|x| if x[0] > 0.0 { f64::NAN } else { 0.0 }, &cube(1), 0).unwrap_err();
        assert!(matches!(err, Error::NonFiniteObjective { .. }));
    }

    #[test]
    fn grid_finds_origin() {
        let r = grid_oracle(|x| x.iter().map(|v| v * v).sum(), &cube(3), 11).unwrap();
        assert!(r.argmin.iter().all(|v| v.abs() < 1e-15));
        assert_eq!(r.evaluations, 11 * 11 * 11);
    }

    #[test]
    fn grid_budget_and_config() {
        assert!(matches!(
            grid_oracle(|_| 0.0, &cube(7), 31),
            Err(Error::GridBudgetExceeded { .. })
        ));
        assert!(grid_oracle(|_| 0.0, &cube(2), 2).is_err());
        assert!(SearchSpace::new(vec![(1.0, 1.0)], vec![false]).is_err());
        assert!(SearchSpace::new(vec![(0.0, 1.0)], vec![]).is_err());
    }

    #[test]
    fn never_loses_to_grid() {
        let f =
            |x: &[f64]| libm::sin(4.0 * x[0]) + libm::cos(3.0 * x[1]) * x[0] + 0.3 * x[1] * x[1];
        let grid = grid_oracle(f, &cube(2), 201).unwrap();
        let nm = minimize(f, &cube(2), 1).unwrap();
        assert!(
            nm.value <= grid.value + 1e-12,
            "{} vs {}",
            nm.value,
            grid.value
        );
    }
}
