//! Polynomial sequences `P_n + B·P_{n−l} + A·P_{n−k} = 0` with `P_0 = 1` and
//! `P_{−1} = … = P_{1−k} = 0`, generated two ways: by unrolling the
//! recurrence and as Taylor coefficients of `1/(1 + B t^l + A t^k)`.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::poly::ComplexPoly;
use crate::polyalg::check_k_l;
use crate::rootfind::{find_roots_with, PointEval, RootOptions, RootSet, RootTarget};

/// A sequence family: coprime `1 ≤ l < k` and nonzero polynomials `A`, `B`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceSpec {
    k: usize,
    l: usize,
    a: ComplexPoly,
    b: ComplexPoly,
}

impl RecurrenceSpec {
    pub fn new(k: usize, l: usize, a: ComplexPoly, b: ComplexPoly) -> Result<Self> {
        if k < 2 {
            return domain(format!("need k >= 2, got {k}"));
        }
        check_k_l(k, l)?;
        if a.is_zero() || b.is_zero() {
            return domain("A and B must be nonzero polynomials");
        }
        if !a.is_finite() || !b.is_finite() {
            return domain("A and B must have finite coefficients");
        }
        Ok(RecurrenceSpec { k, l, a, b })
    }

    /// Builds a spec from polynomial text in the variable `z`.
    pub fn parse(k: usize, l: usize, a: &str, b: &str) -> Result<Self> {
        Self::new(k, l, crate::polyparse::parse(a)?, crate::polyparse::parse(b)?)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn a(&self) -> &ComplexPoly {
        &self.a
    }

    pub fn b(&self) -> &ComplexPoly {
        &self.b
    }

    /// `D(t, z) = A(z) t^k + B(z) t^l + 1` as a polynomial in `t`.
    pub fn denominator_at(&self, z: C64) -> ComplexPoly {
        crate::polyalg::trinomial(self.a.eval(z), self.b.eval(z), self.k, self.l)
    }
}

impl<'de> Deserialize<'de> for RecurrenceSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            k: usize,
            l: usize,
            a: ComplexPoly,
            b: ComplexPoly,
        }
        let raw = Raw::deserialize(d)?;
        RecurrenceSpec::new(raw.k, raw.l, raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}

/// `P_0, …, P_{n_max}` for one spec.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceWindow {
    pub spec: RecurrenceSpec,
    pub polys: Vec<ComplexPoly>,
}

impl SequenceWindow {
    pub fn n_max(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&ComplexPoly> {
        self.polys.get(n)
    }

    /// Largest coefficient-wise deviation from the recurrence,
    /// `|P_n + B·P_{n−l} + A·P_{n−k}|`, over `1 ≤ n ≤ n_max`.
    pub fn recurrence_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for n in 1..self.polys.len() {
            let mut r = self.polys[n].clone();
            if n >= self.spec.l {
                r = &r + &(&self.spec.b * &self.polys[n - self.spec.l]);
            }
            if n >= self.spec.k {
                r = &r + &(&self.spec.a * &self.polys[n - self.spec.k]);
            }
            worst = worst.max(r.max_abs_coeff());
        }
        worst
    }
}

/// Unrolls `P_n = −B·P_{n−l} − A·P_{n−k}`.
pub fn sequence_generate(spec: &RecurrenceSpec, n_max: usize) -> SequenceWindow {
    let mut polys: Vec<ComplexPoly> = Vec::with_capacity(n_max + 1);
    polys.push(ComplexPoly::one());
    for n in 1..=n_max {
        let mut p = ComplexPoly::zero();
        if n >= spec.l {
            p = &p - &(&spec.b * &polys[n - spec.l]);
        }
        if n >= spec.k {
            p = &p - &(&spec.a * &polys[n - spec.k]);
        }
        polys.push(p);
    }
    SequenceWindow { spec: spec.clone(), polys }
}

/// Taylor coefficients of `1/d(t)` for a denominator whose `t^0`
/// coefficient is a nonzero constant, by `c_n = −(Σ_{j=1..n} d_j c_{n−j}) / d_0`.
pub fn reciprocal_series(den: &[ComplexPoly], n_max: usize) -> Result<Vec<ComplexPoly>> {
    let d0 = match den.first().map(|p| (p.degree(), p.coeff(0))) {
        Some((Some(0), c)) => c,
        _ => return domain("series denominator needs a nonzero constant term"),
    };
    let inv = d0.inv();
    let mut out: Vec<ComplexPoly> = Vec::with_capacity(n_max + 1);
    out.push(ComplexPoly::constant(inv));
    for n in 1..=n_max {
        let mut acc = ComplexPoly::zero();
        for j in 1..=n.min(den.len() - 1) {
            if den[j].is_zero() {
                continue;
            }
            acc = &acc + &(&den[j] * &out[n - j]);
        }
        out.push(acc.scale(-inv));
    }
    Ok(out)
}

/// Coefficients of the generating function `1/(1 + B t^l + A t^k)`.
pub fn series_expand(spec: &RecurrenceSpec, n_max: usize) -> SequenceWindow {
    let mut den = vec![ComplexPoly::zero(); spec.k + 1];
    den[0] = ComplexPoly::one();
    den[spec.l] = spec.b.clone();
    den[spec.k] = spec.a.clone();
    let polys = reciprocal_series(&den, n_max).expect("constant term is 1");
    SequenceWindow { spec: spec.clone(), polys }
}

/// Evaluates `P_n(z)` and `P_n'(z)` by running the recurrence on numbers.
///
/// This is far better conditioned than Horner on the expanded coefficients of
/// `P_n`, whose magnitudes grow exponentially while the values cancel. The
/// running window is rescaled to stay in range; only the logarithm of the
/// scale is tracked.
///
/// Exact zeros at the origin (vanishing low-order coefficients of `P_n`) are
/// divided out: the target is `P_n(z)/z^m` and has degree `deg P_n − m`.
pub struct SequenceTarget<'a> {
    spec: &'a RecurrenceSpec,
    n: usize,
    expanded: &'a ComplexPoly,
    zero_mult: usize,
    degree: usize,
    ln_max_coeff: f64,
}

impl<'a> SequenceTarget<'a> {
    /// `expanded` must be `P_n` as produced by [`sequence_generate`].
    pub fn new(spec: &'a RecurrenceSpec, n: usize, expanded: &'a ComplexPoly) -> Result<Self> {
        let full = match expanded.degree() {
            Some(d) if d >= 1 => d,
            _ => return domain("P_n has no zeros"),
        };
        let zero_mult = expanded.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
        Ok(SequenceTarget {
            spec,
            n,
            expanded,
            zero_mult,
            degree: full - zero_mult,
            ln_max_coeff: expanded.max_abs_coeff().ln(),
        })
    }

    /// Multiplicity of the zero at the origin that was divided out.
    pub fn zero_multiplicity(&self) -> usize {
        self.zero_mult
    }

    /// `(P_n(z), P_n'(z))` scaled by `exp(-ln_scale)`, and `ln_scale`.
    pub fn eval_scaled(&self, z: C64) -> (C64, C64, f64) {
        let (k, l) = (self.spec.k, self.spec.l);
        let (a, da) = self.spec.a.eval_with_derivative(z);
        let (b, db) = self.spec.b.eval_with_derivative(z);
        let zero = C64::new(0.0, 0.0);
        // ring buffer of the last k (value, derivative) pairs
        let mut val = vec![zero; k];
        let mut der = vec![zero; k];
        val[0] = C64::new(1.0, 0.0);
        let mut ln_scale = 0.0;
        const BIG: f64 = 1e150;
        for m in 1..=self.n {
            let (mut v, mut d) = (zero, zero);
            if m >= l {
                let i = (m - l) % k;
                v -= b * val[i];
                d -= db * val[i] + b * der[i];
            }
            if m >= k {
                let i = (m - k) % k;
                v -= a * val[i];
                d -= da * val[i] + a * der[i];
            }
            val[m % k] = v;
            der[m % k] = d;
            let mag = v.norm().max(d.norm());
            if mag > BIG || (mag < 1.0 / BIG && mag > 0.0) {
                let f = if mag > BIG { 1.0 / BIG } else { BIG };
                for x in val.iter_mut().chain(der.iter_mut()) {
                    *x *= f;
                }
                ln_scale -= f.ln();
            }
        }
        (val[self.n % k], der[self.n % k], ln_scale)
    }
}

impl RootTarget for SequenceTarget<'_> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn coeff_moduli(&self) -> Vec<f64> {
        self.expanded.coeffs()[self.zero_mult..].iter().map(|c| c.norm()).collect()
    }

    fn eval(&self, z: C64) -> PointEval {
        let m = self.zero_mult;
        if m > 0 && z.norm() == 0.0 {
            // the reduced polynomial at 0 is just its lowest coefficients
            let (c0, c1) = (self.expanded.coeff(m), self.expanded.coeff(m + 1));
            return PointEval {
                log_deriv: Some(c1 / c0),
                residual: c0.norm() / self.ln_max_coeff.exp(),
                at_noise: false,
            };
        }
        let (v, d, ln_scale) = self.eval_scaled(z);
        let residual = if v.norm() == 0.0 {
            0.0
        } else {
            let ln_reduced = v.norm().ln() + ln_scale - m as f64 * z.norm().ln();
            (ln_reduced - self.ln_max_coeff - self.degree as f64 * (1.0 + z.norm()).ln()).exp()
        };
        PointEval {
            log_deriv: (v.norm() > 0.0).then(|| d / v - m as f64 / z),
            residual,
            at_noise: false,
        }
    }
}

/// Zeros of `P_n`, located with recurrence-based evaluation.
pub fn zeros_of(window: &SequenceWindow, n: usize, opts: &RootOptions) -> Result<RootSet> {
    let Some(p) = window.get(n) else {
        return domain(format!("n = {n} beyond the generated window"));
    };
    let target = SequenceTarget::new(&window.spec, n, p)?;
    let m = target.zero_multiplicity();
    if m == 0 {
        return find_roots_with(&target, opts);
    }
    let mut roots = vec![C64::new(0.0, 0.0); m];
    let mut residuals = vec![0.0; m];
    let (mut converged, mut iterations) = (true, 0);
    if target.degree() > 0 {
        let rs = find_roots_with(&target, opts)?;
        roots.extend_from_slice(rs.roots());
        residuals.extend_from_slice(rs.residuals());
        converged = rs.converged();
        iterations = rs.iterations();
    }
    Ok(RootSet::build(roots, residuals, converged, iterations, opts.cert_tol))
}
