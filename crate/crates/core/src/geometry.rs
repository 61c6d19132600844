//! Geometry of root quotients of `D(t) = A t^k + B t^l + 1`.
//!
//! For `(k, l) = (3, 2)` the quotients live on `Γ = C1 ∪ C2 ∪ C3`:
//!
//! * `C1`: the unit circle with `Re ≤ −1/2`,
//! * `C2`: the circle `|q + 1| = 1` with `Re ≥ −1/2`,
//! * `C3`: the line `Re = −1/2` with `|Im| ≥ √3/2`.
//!
//! For `(4, 3)` the second quotient `u` sits on the unit arc `C4`
//! (`Re u ≥ −1/3`) and the other two on the quartic `C5`. The scalar maps
//! `f(q) = B^k/A^l` that send these quotients to the real axis are here too.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, pole, Result};

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// The two families with a worked-out quotient geometry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// `(k, l) = (3, 2)`
    K3L2,
    /// `(k, l) = (4, 3)`
    K4L3,
}

impl Family {
    pub fn from_k_l(k: usize, l: usize) -> Option<Family> {
        match (k, l) {
            (3, 2) => Some(Family::K3L2),
            (4, 3) => Some(Family::K4L3),
            _ => None,
        }
    }

    pub fn k_l(self) -> (usize, usize) {
        match self {
            Family::K3L2 => (3, 2),
            Family::K4L3 => (4, 3),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Branch {
    C1,
    C2,
    C3,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaVerdict {
    /// Every branch within tolerance, so junction points report several.
    pub branches: Vec<Branch>,
    /// Distance to the nearest branch.
    pub distance: f64,
}

impl GammaVerdict {
    pub fn on_gamma(&self) -> bool {
        !self.branches.is_empty()
    }

    /// The branch with the smallest distance, if on Γ.
    pub fn nearest(&self) -> Option<Branch> {
        self.branches.first().copied()
    }
}

fn c1_endpoints() -> [C64; 2] {
    [C64::new(-0.5, SQRT3_2), C64::new(-0.5, -SQRT3_2)]
}

/// Distance from `q` to the arc of `center + radius·e^{iφ}` with
/// `cos φ ≥ cos_min` (when `outward` the arc is centered on `φ = 0`,
/// otherwise on `φ = π`).
fn arc_distance(q: C64, center: C64, radius: f64, cos_min: f64, facing_right: bool) -> f64 {
    let d = q - center;
    let r = d.norm();
    let cos_phi = if r == 0.0 { 1.0 } else { d.re / r };
    let cos_rel = if facing_right { cos_phi } else { -cos_phi };
    if r > 0.0 && cos_rel >= cos_min {
        (r - radius).abs()
    } else {
        c1_endpoints().iter().map(|e| (q - e).norm()).fold(f64::INFINITY, f64::min)
    }
}

pub fn distance_c1(q: C64) -> f64 {
    // unit circle around 0, Re ≤ −1/2  ⇔  cos φ ≤ −1/2
    arc_distance(q, C64::new(0.0, 0.0), 1.0, 0.5, false)
}

pub fn distance_c2(q: C64) -> f64 {
    // circle around −1, Re ≥ −1/2  ⇔  cos φ ≥ 1/2
    arc_distance(q, C64::new(-1.0, 0.0), 1.0, 0.5, true)
}

pub fn distance_c3(q: C64) -> f64 {
    if q.im.abs() >= SQRT3_2 {
        (q.re + 0.5).abs()
    } else {
        let y = SQRT3_2.copysign(if q.im == 0.0 { 1.0 } else { q.im });
        (q - C64::new(-0.5, y)).norm()
    }
}

/// Which branches of Γ pass within `tol` of `q`.
pub fn gamma_classify(q: C64, tol: f64) -> GammaVerdict {
    let mut d = [
        (distance_c1(q), Branch::C1),
        (distance_c2(q), Branch::C2),
        (distance_c3(q), Branch::C3),
    ];
    d.sort_by(|a, b| a.0.total_cmp(&b.0));
    GammaVerdict {
        branches: d.iter().filter(|(x, _)| *x <= tol).map(|&(_, b)| b).collect(),
        distance: d[0].0,
    }
}

pub fn mobius_invert(z: C64) -> Result<C64> {
    if z.norm() == 0.0 {
        return domain("inversion of zero");
    }
    Ok(z.inv())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticVerdict {
    /// Value of the quartic at `(Re q, Im q)`.
    pub residual: f64,
    /// `|residual| / |∇|`, a first-order distance to the curve.
    pub distance: f64,
    pub on_curve: bool,
    /// `||q| − 1| ≤ tol` and `Re q ≥ −1/3 − tol`.
    pub c4_arc: bool,
}

/// The quartic `1 + 2x + 2x² + 2x³ + x⁴ − 2y² + 2xy² + 2x²y² + y⁴` and its gradient.
pub fn quartic_c5(x: f64, y: f64) -> (f64, [f64; 2]) {
    let (x2, y2) = (x * x, y * y);
    let v = 1.0 + 2.0 * x + 2.0 * x2 + 2.0 * x2 * x + x2 * x2 - 2.0 * y2 + 2.0 * x * y2 + 2.0 * x2 * y2 + y2 * y2;
    let gx = 2.0 + 4.0 * x + 6.0 * x2 + 4.0 * x2 * x + 2.0 * y2 + 4.0 * x * y2;
    let gy = -4.0 * y + 4.0 * x * y + 4.0 * x2 * y + 4.0 * y2 * y;
    (v, [gx, gy])
}

pub fn quartic_classify(q: C64, tol: f64) -> QuarticVerdict {
    let (v, [gx, gy]) = quartic_c5(q.re, q.im);
    let g = gx.hypot(gy);
    let distance = if v == 0.0 { 0.0 } else { v.abs() / g };
    QuarticVerdict {
        residual: v,
        distance,
        on_curve: v.abs() <= tol * g,
        c4_arc: (q.norm() - 1.0).abs() <= tol && q.re >= -1.0 / 3.0 - tol,
    }
}

/// The two roots of `q² + u(u+1)/(u²+u+1)·q + u²/(u²+u+1) = 0`, smaller
/// modulus first.
pub fn quotient_pair_from_u(u: C64) -> Result<(C64, C64)> {
    let den = u * u + u + 1.0;
    if den.norm() <= 1e-14 * (1.0 + u.norm_sqr()) {
        return domain("u is a primitive cube root of unity");
    }
    let b = u * (u + 1.0) / den;
    let c = u * u / den;
    let disc = (b * b - 4.0 * c).sqrt();
    // add quantities of like sign to avoid cancellation
    let s = if (b.conj() * disc).re >= 0.0 { disc } else { -disc };
    let q1 = -(b + s) / 2.0;
    let q2 = if q1.norm() == 0.0 { -b - q1 } else { c / q1 };
    Ok(if crate::rootfind::modulus_order(q1, q2).is_le() { (q1, q2) } else { (q2, q1) })
}

/// `f(q) = −(1 + q + q²)³ / (q² (1 + q)²)`, the value of `B³/A²` forced by a
/// pair of roots with ratio `q`.
pub fn f32(q: C64) -> Result<C64> {
    let den = q * q * (q + 1.0) * (q + 1.0);
    if q.norm() <= 1e-300 || (q + 1.0).norm() <= 1e-300 {
        return pole("f32 has poles at q = 0 and q = -1");
    }
    let s = q * q + q + 1.0;
    Ok(-(s * s * s) / den)
}

/// `f(q) = (q⁴ − 1)⁴ / ((q³ − 1)³ (q⁴ − q³))`, evaluated in the cancelled form
/// `(1 + q)⁴ (1 + q²)⁴ / (q³ (1 + q + q²)³)` so that `q = 1` gives `256/27`.
pub fn f43(q: C64) -> Result<C64> {
    let s = q * q + q + 1.0;
    if q.norm() <= 1e-300 || s.norm() <= 1e-14 {
        return pole("f43 has poles at q = 0 and the primitive cube roots of unity");
    }
    let a = (q + 1.0) * (q * q + 1.0);
    let a2 = a * a;
    Ok(a2 * a2 / (q * q * q * s * s * s))
}

/// The family's quotient map `f`.
pub fn f_family(family: Family, q: C64) -> Result<C64> {
    match family {
        Family::K3L2 => f32(q),
        Family::K4L3 => f43(q),
    }
}

/// `f(e^{iθ})` in real trigonometric form.
pub fn f_theta(family: Family, theta: f64) -> Result<f64> {
    match family {
        Family::K3L2 => {
            let c = theta.cos();
            let den = 2.0 * c + 2.0;
            if den.abs() <= 1e-15 {
                return pole("F(θ) for (3,2) has a pole at θ = π");
            }
            Ok(-(2.0 * c + 1.0).powi(3) / den)
        }
        Family::K4L3 => {
            let den = ((3.0 * theta).cos() - 1.0) * ((2.0 * theta).cos() - theta.cos());
            if den.abs() <= 1e-15 {
                return pole("F(θ) for (4,3) has poles at θ ∈ {0, 2π/3, 4π/3}");
            }
            Ok(((4.0 * theta).cos() - 1.0).powi(2) / den)
        }
    }
}

/// `h(q) = (1 − q^k)^k / ((1 − q^l)^l (q^l − q^k)^{k−l})`, real on `|q| = 1`.
pub fn h_ratio(q: C64, k: usize, l: usize) -> Result<C64> {
    if l == 0 || l >= k {
        return domain(format!("need 1 <= l < k, got k = {k}, l = {l}"));
    }
    let (ki, li) = (k as i32, l as i32);
    let one = C64::new(1.0, 0.0);
    let den = (one - q.powi(li)).powi(li) * (q.powi(li) - q.powi(ki)).powi(ki - li);
    if den.norm() <= 1e-300 {
        return pole("h(q) denominator vanishes");
    }
    Ok((one - q.powi(ki)).powi(ki) / den)
}

const ARC_EPS: f64 = 1e-12;

/// Whether `e^{iθ}` lies on the family's admissible arc Ω (closed).
/// `(3,2)`: `θ ∈ [2π/3, 4π/3]`; `(4,3)`: `θ ∈ [π/2, 2π/3] ∪ [4π/3, 3π/2]`.
pub fn omega_membership(family: Family, theta: f64) -> bool {
    let t = theta.rem_euclid(2.0 * PI);
    let within = |lo: f64, hi: f64| t >= lo - ARC_EPS && t <= hi + ARC_EPS;
    match family {
        Family::K3L2 => within(2.0 * PI / 3.0, 4.0 * PI / 3.0),
        Family::K4L3 => within(PI / 2.0, 2.0 * PI / 3.0) || within(4.0 * PI / 3.0, 3.0 * PI / 2.0),
    }
}
