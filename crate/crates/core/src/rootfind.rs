//! Simultaneous root finding (Aberth–Ehrlich) with residual certification.
//!
//! The iteration only needs the logarithmic derivative `p'/p` at a point, so
//! it runs against the [`RootTarget`] trait. [`ComplexPoly`] evaluates by
//! Horner's rule (on the reversed polynomial outside the unit disc); the
//! recurrence module provides a target that evaluates `P_n` through the
//! recurrence itself, which stays accurate where the expanded coefficients
//! cancel badly.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::par::Exec;
use crate::poly::ComplexPoly;

/// Degree from which a single Aberth sweep is spread over threads.
const PARALLEL_SWEEP_MIN_DEGREE: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RootOptions {
    pub max_iters: usize,
    /// Relative size of the per-root correction at which a root is accepted.
    pub tol: f64,
    /// Largest residual for which a root counts as certified.
    pub cert_tol: f64,
    /// Relative modulus gap below which the two smallest roots are equimodular.
    pub equimodular_tol: f64,
    pub exec: Exec,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            max_iters: 200,
            tol: 1e-13,
            cert_tol: 1e-10,
            equimodular_tol: 1e-6,
            exec: Exec::Sequential,
        }
    }
}

/// Result of evaluating a target at one point.
#[derive(Clone, Copy, Debug)]
pub struct PointEval {
    /// `p'(z)/p(z)`, or `None` when `p(z)` is exactly zero.
    pub log_deriv: Option<C64>,
    /// `|p(z)| / (max_i |c_i| · (1 + |z|)^deg)`.
    pub residual: f64,
    /// The value is indistinguishable from rounding noise.
    pub at_noise: bool,
}

/// Anything whose roots can be found by the simultaneous iteration.
pub trait RootTarget: Sync {
    fn degree(&self) -> usize;
    /// Moduli of the expanded coefficients, lowest degree first. Used only to
    /// place starting points.
    fn coeff_moduli(&self) -> Vec<f64>;
    fn eval(&self, z: C64) -> PointEval;
}

/// Horner evaluation of a dense polynomial.
pub struct HornerTarget<'a> {
    poly: &'a ComplexPoly,
    rev: ComplexPoly,
    degree: usize,
    max_coeff: f64,
}

impl<'a> HornerTarget<'a> {
    pub fn new(poly: &'a ComplexPoly) -> Result<Self> {
        match poly.degree() {
            Some(d) if d >= 1 => {}
            _ => return domain("root finding needs degree at least 1"),
        }
        if !poly.is_finite() {
            return domain("polynomial has non-finite coefficients");
        }
        Ok(HornerTarget {
            poly,
            rev: poly.reversed(),
            degree: poly.degree().unwrap_or(0),
            max_coeff: poly.max_abs_coeff(),
        })
    }
}

impl RootTarget for HornerTarget<'_> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn coeff_moduli(&self) -> Vec<f64> {
        self.poly.coeffs().iter().map(|c| c.norm()).collect()
    }

    fn eval(&self, z: C64) -> PointEval {
        let n = self.degree as f64;
        let noise = 4.0 * (n + 1.0) * f64::EPSILON;
        let r = z.norm();
        if r <= 1.0 {
            let (p, dp) = self.poly.eval_with_derivative(z);
            let residual = p.norm() / self.max_coeff / (1.0 + r).powf(n);
            PointEval {
                log_deriv: (p.norm() > 0.0).then(|| dp / p),
                residual,
                at_noise: p.norm() <= noise * self.poly.eval_abs(r),
            }
        } else {
            // p(z) = z^n rev(1/z), p'/p = w (n − w rev'(w)/rev(w)) with w = 1/z.
            let w = z.inv();
            let (rv, drv) = self.rev.eval_with_derivative(w);
            let residual = rv.norm() / self.max_coeff / (1.0 + w.norm()).powf(n);
            PointEval {
                log_deriv: (rv.norm() > 0.0).then(|| w * (n - w * drv / rv)),
                residual,
                at_noise: rv.norm() <= noise * self.rev.eval_abs(w.norm()),
            }
        }
    }
}

/// Roots of one polynomial, with residuals and a modulus ordering.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    roots: Vec<C64>,
    residuals: Vec<f64>,
    /// `order[i]` is the index of the i-th smallest root (modulus, then
    /// principal argument).
    order: Vec<usize>,
    certified: bool,
    converged: bool,
    iterations: usize,
}

impl RootSet {
    pub(crate) fn build(roots: Vec<C64>, residuals: Vec<f64>, converged: bool, iterations: usize, cert_tol: f64) -> Self {
        let mut order: Vec<usize> = (0..roots.len()).collect();
        order.sort_by(|&a, &b| modulus_order(roots[a], roots[b]));
        let certified = converged && residuals.iter().all(|r| r.is_finite() && *r <= cert_tol);
        RootSet { roots, residuals, order, certified, converged, iterations }
    }

    /// Roots in the order the iteration produced them.
    pub fn roots(&self) -> &[C64] {
        &self.roots
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Roots sorted by modulus ascending (ties by principal argument).
    pub fn sorted(&self) -> Vec<C64> {
        self.order.iter().map(|&i| self.roots[i]).collect()
    }

    /// `(root, residual)` pairs in modulus order.
    pub fn sorted_with_residuals(&self) -> Vec<(C64, f64)> {
        self.order.iter().map(|&i| (self.roots[i], self.residuals[i])).collect()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Total order used for root lists: modulus, then principal argument.
pub fn modulus_order(a: C64, b: C64) -> Ordering {
    a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg()))
}

/// Ratios of the roots to the smallest one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuotientProfile {
    /// Smallest-modulus root `t_1`.
    pub base: C64,
    /// `t_i / t_1` for `i ≥ 2`, in modulus order.
    pub quotients: Vec<C64>,
    /// `|t_2| / |t_1| ≤ 1 + equimodular_tol`.
    pub equimodular: bool,
}

impl QuotientProfile {
    /// The quotient of the second-smallest root, `u = q_2`.
    pub fn u(&self) -> Option<C64> {
        self.quotients.first().copied()
    }
}

pub fn quotient_profile(rs: &RootSet, equimodular_tol: f64) -> Result<QuotientProfile> {
    if !rs.is_certified() {
        return domain("quotient profile needs a certified root set");
    }
    let sorted = rs.sorted();
    let Some(&base) = sorted.first() else {
        return domain("empty root set");
    };
    if base.norm() == 0.0 {
        return domain("smallest root is zero; quotients undefined");
    }
    let quotients: Vec<C64> = sorted[1..].iter().map(|&t| t / base).collect();
    let equimodular = quotients.first().is_some_and(|q| q.norm() <= 1.0 + equimodular_tol);
    Ok(QuotientProfile { base, quotients, equimodular })
}

/// Roots of a dense polynomial. Exact zero roots (vanishing low-order
/// coefficients) are split off before iterating.
pub fn find_roots(p: &ComplexPoly, opts: &RootOptions) -> Result<RootSet> {
    let target = HornerTarget::new(p)?;
    let zeros = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    if zeros == 0 {
        return find_roots_with(&target, opts);
    }
    let mut roots = vec![C64::new(0.0, 0.0); zeros];
    let mut residuals = vec![0.0; zeros];
    let (mut converged, mut iterations) = (true, 0);
    if zeros < target.degree {
        let rest = ComplexPoly::new(p.coeffs()[zeros..].to_vec());
        let rs = find_roots_with(&HornerTarget::new(&rest)?, opts)?;
        converged = rs.converged;
        iterations = rs.iterations;
        for &z in rs.roots() {
            roots.push(z);
            residuals.push(target.eval(z).residual);
        }
    }
    Ok(RootSet::build(roots, residuals, converged, iterations, opts.cert_tol))
}

/// Aberth–Ehrlich iteration against any [`RootTarget`], followed by one
/// Newton polishing pass.
pub fn find_roots_with<T: RootTarget + ?Sized>(target: &T, opts: &RootOptions) -> Result<RootSet> {
    let n = target.degree();
    if n == 0 {
        return domain("root finding needs degree at least 1");
    }
    let mut z = initial_guesses(&target.coeff_moduli(), n);
    let mut done = vec![false; n];
    let mut last_step = vec![f64::INFINITY; n];
    let sweep_exec = if n >= PARALLEL_SWEEP_MIN_DEGREE { opts.exec } else { Exec::Sequential };
    let mut iterations = 0;
    while iterations < opts.max_iters && done.iter().any(|d| !d) {
        iterations += 1;
        let snapshot = &z;
        let flags = &done;
        let steps: Vec<Option<(C64, bool)>> = sweep_exec.map_range(n, |i| {
            if flags[i] {
                return None;
            }
            let zi = snapshot[i];
            let ev = target.eval(zi);
            let ld = match ev.log_deriv {
                Some(ld) if !ev.at_noise => ld,
                _ => return Some((C64::new(0.0, 0.0), true)),
            };
            let repulsion: C64 = snapshot
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &zj)| (zi - zj).inv())
                .sum();
            let step = (ld - repulsion).inv();
            if step.re.is_finite() && step.im.is_finite() {
                Some((step, false))
            } else {
                Some((C64::new(0.0, 0.0), false))
            }
        });
        for (i, s) in steps.into_iter().enumerate() {
            let Some((step, exact)) = s else { continue };
            if exact {
                done[i] = true;
                continue;
            }
            z[i] -= step;
            let size = step.norm();
            let scale = z[i].norm().max(f64::MIN_POSITIVE);
            // Accept on a small relative step, or when steps stop shrinking
            // once already small (rounding-limited, e.g. clustered roots).
            if size <= opts.tol * scale || (size <= 1e-6 * scale && size >= 0.9 * last_step[i]) {
                done[i] = true;
            }
            last_step[i] = size;
        }
    }
    let converged = done.iter().all(|&d| d);

    let polished: Vec<(C64, f64)> = opts.exec.map_slice(&z, |&zi| {
        let ev = target.eval(zi);
        if let Some(ld) = ev.log_deriv {
            let step = ld.inv();
            let cand = zi - step;
            if cand.re.is_finite() && cand.im.is_finite() {
                let ev2 = target.eval(cand);
                if ev2.residual < ev.residual {
                    return (cand, ev2.residual);
                }
            }
        }
        (zi, ev.residual)
    });
    let (roots, residuals): (Vec<C64>, Vec<f64>) = polished.into_iter().unzip();
    Ok(RootSet::build(roots, residuals, converged, iterations, opts.cert_tol))
}

/// Starting points from the upper convex hull of `(i, ln|c_i|)`: each hull
/// edge from `i` to `j` contributes `j − i` points on a circle of radius
/// `(|c_i|/|c_j|)^{1/(j−i)}`.
pub fn initial_guesses(moduli: &[f64], degree: usize) -> Vec<C64> {
    let pts: Vec<(usize, f64)> = moduli
        .iter()
        .enumerate()
        .take(degree + 1)
        .filter(|(_, &m)| m > 0.0 && m.is_finite())
        .map(|(i, &m)| (i, m.ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut guesses = Vec::with_capacity(degree);
    let offset = 0.4;
    let first = hull.first().map_or(0, |p| p.0);
    if first > 0 {
        // Vanishing low-order coefficients: roots at (or very near) zero.
        let r = hull
            .windows(2)
            .next()
            .map_or(1.0, |w| ((w[0].1 - w[1].1) / (w[1].0 - w[0].0) as f64).exp())
            * 1e-3;
        for j in 0..first {
            guesses.push(C64::from_polar(r, 2.0 * PI * j as f64 / first as f64 + offset));
        }
    }
    for w in hull.windows(2) {
        let (i0, l0) = w[0];
        let (i1, l1) = w[1];
        let count = i1 - i0;
        let radius = ((l0 - l1) / count as f64).exp();
        for j in 0..count {
            let theta = 2.0 * PI * j as f64 / count as f64 + 2.0 * PI * i0 as f64 / degree as f64 + offset;
            guesses.push(C64::from_polar(radius, theta));
        }
    }
    while guesses.len() < degree {
        let j = guesses.len();
        guesses.push(C64::from_polar(1.0, 2.0 * PI * j as f64 / degree as f64 + offset));
    }
    guesses.truncate(degree);
    guesses
}

/// Root sets for many polynomials; `opts.exec` is applied across the batch.
pub fn find_roots_batch(polys: &[ComplexPoly], opts: &RootOptions) -> Vec<Result<RootSet>> {
    let inner = RootOptions { exec: Exec::Sequential, ..*opts };
    opts.exec.map_slice(polys, |p| find_roots(p, &inner))
}
