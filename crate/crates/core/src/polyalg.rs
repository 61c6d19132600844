//! Resultants, ordinary discriminants and q-discriminants.
//!
//! Three routes to the q-discriminant are provided:
//!
//! * [`q_discriminant_definitional`]: the product over root pairs,
//!   `q^{n(n-1)/2} a_n^{2n-2} Π_{i<j} (x_i² + x_j² − (q⁻¹ + q) x_i x_j)`.
//!   This is the canonical value.
//! * [`q_discriminant_ismail`]: `(−1)^{n(n-1)/2} a_n^{n-2} Π (D_q P)(x_i)`.
//! * [`q_discriminant_trinomial`]: the closed form for `A t^k + B t^l + 1`.
//!   It matches the canonical value up to a factor `B^{l-1}` (observed on
//!   every tested `(k, l)`), so it is meant for locating the vanishing locus.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::poly::ComplexPoly;
use crate::rootfind::{find_roots, RootOptions};

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn sign_pow(e: usize) -> f64 {
    if e.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Which computation produced a q-discriminant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QDiscPath {
    Definitional,
    Ismail,
    TrinomialClosedForm,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QDiscResult {
    pub value: C64,
    pub path: QDiscPath,
    pub q: C64,
    /// Known proportionality factor relative to the definitional value.
    pub note: String,
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(mut m: Vec<Vec<C64>>) -> C64 {
    let n = m.len();
    let mut det = c(1.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .unwrap_or(col);
        if m[pivot][col].norm() == 0.0 {
            return c(0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for r in lower.iter_mut() {
            let f = r[col] / p;
            if f.norm() == 0.0 {
                continue;
            }
            for (x, v) in r[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * v;
            }
        }
    }
    det
}

/// The `(n+m)×(n+m)` Sylvester matrix of `p` (degree n) and `q` (degree m).
pub fn sylvester_matrix(p: &ComplexPoly, q: &ComplexPoly) -> Result<Vec<Vec<C64>>> {
    let (Some(n), Some(m)) = (p.degree(), q.degree()) else {
        return domain("resultant of the zero polynomial");
    };
    let size = n + m;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..m {
        let mut row = vec![c(0.0); size];
        for (i, &a) in p.coeffs().iter().rev().enumerate() {
            row[shift + i] = a;
        }
        rows.push(row);
    }
    for shift in 0..n {
        let mut row = vec![c(0.0); size];
        for (i, &b) in q.coeffs().iter().rev().enumerate() {
            row[shift + i] = b;
        }
        rows.push(row);
    }
    Ok(rows)
}

/// `Res(p, q) = a_n^m Π q(x_i)`, computed as the Sylvester determinant.
pub fn sylvester_resultant(p: &ComplexPoly, q: &ComplexPoly) -> Result<C64> {
    Ok(determinant(sylvester_matrix(p, q)?))
}

/// Ordinary discriminant `(−1)^{n(n−1)/2} Res(p, p′) / a_n`.
pub fn discriminant(p: &ComplexPoly) -> Result<C64> {
    let n = match p.degree() {
        Some(n) if n >= 1 => n,
        _ => return domain("discriminant needs degree at least 1"),
    };
    let lead = p.leading().expect("nonzero polynomial");
    let res = sylvester_resultant(p, &p.derivative())?;
    Ok(res * sign_pow(n * (n - 1) / 2) / lead)
}

/// `1 + q + … + q^{i−1}`, which is `(1 − q^i)/(1 − q)` away from `q = 1`.
fn q_integer(q: C64, i: usize) -> C64 {
    let mut acc = c(0.0);
    let mut pw = c(1.0);
    for _ in 0..i {
        acc += pw;
        pw *= q;
    }
    acc
}

/// Jackson q-derivative `(P(t) − P(qt)) / ((1 − q) t)`.
///
/// Coefficients are formed as `c_i (1 + q + … + q^{i−1})`, so `q = 1` yields the
/// ordinary derivative.
pub fn q_derivative(p: &ComplexPoly, q: C64) -> ComplexPoly {
    ComplexPoly::new(
        p.coeffs()
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &ci)| ci * q_integer(q, i))
            .collect(),
    )
}

fn check_q_nonzero(q: C64) -> Result<()> {
    if q.norm() == 0.0 {
        return domain("q-discriminant undefined at q = 0");
    }
    Ok(())
}

fn check_roots(p: &ComplexPoly, roots: &[C64]) -> Result<(usize, C64)> {
    let Some(n) = p.degree() else {
        return domain("q-discriminant of the zero polynomial");
    };
    if roots.len() != n {
        return domain(format!("expected {n} roots, got {}", roots.len()));
    }
    Ok((n, p.leading().expect("nonzero polynomial")))
}

/// Product form over root pairs. At `q = 1` this is the ordinary discriminant.
pub fn q_discriminant_definitional(p: &ComplexPoly, q: C64, roots: &[C64]) -> Result<QDiscResult> {
    check_q_nonzero(q)?;
    let (n, lead) = check_roots(p, roots)?;
    let s = q.inv() + q;
    let mut prod = c(1.0);
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (roots[i], roots[j]);
            prod *= a * a + b * b - s * a * b;
        }
    }
    let pairs = (n * (n.saturating_sub(1)) / 2) as i32;
    let value = q.powi(pairs) * lead.powi(2 * n as i32 - 2) * prod;
    Ok(QDiscResult {
        value,
        path: QDiscPath::Definitional,
        q,
        note: "canonical value".into(),
    })
}

/// Product of the q-derivative over the roots.
pub fn q_discriminant_ismail(p: &ComplexPoly, q: C64, roots: &[C64]) -> Result<QDiscResult> {
    check_q_nonzero(q)?;
    let (n, lead) = check_roots(p, roots)?;
    let dq = q_derivative(p, q);
    let prod: C64 = roots.iter().map(|&x| dq.eval(x)).product();
    let value = sign_pow(n * (n.saturating_sub(1)) / 2) * lead.powi(n as i32 - 2) * prod;
    Ok(QDiscResult {
        value,
        path: QDiscPath::Ismail,
        q,
        note: "equal to the definitional value".into(),
    })
}

/// Definitional q-discriminant with roots computed internally.
pub fn q_discriminant(p: &ComplexPoly, q: C64) -> Result<QDiscResult> {
    let rs = find_roots(p, &RootOptions::default())?;
    q_discriminant_definitional(p, q, rs.roots())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn check_k_l(k: usize, l: usize) -> Result<()> {
    if l < 1 || l >= k {
        return domain(format!("need 1 <= l < k, got k = {k}, l = {l}"));
    }
    if gcd(k, l) != 1 {
        return domain(format!("k = {k} and l = {l} are not coprime"));
    }
    Ok(())
}

/// `A t^k + B t^l + 1` as a polynomial in `t`.
pub fn trinomial(a: C64, b: C64, k: usize, l: usize) -> ComplexPoly {
    let mut coeffs = vec![c(0.0); k + 1];
    coeffs[0] = c(1.0);
    coeffs[l] += b;
    coeffs[k] += a;
    ComplexPoly::new(coeffs)
}

/// Closed-form q-discriminant of `A t^k + B t^l + 1`:
///
/// `(−1)^{k(k+1)/2} [(q^k−1)^k A^l − B^k (1−q^l)^l (q^l−q^k)^{k−l}] A^{k−l−1} B^{l−1} (1−q)^{−k}`.
///
/// Refused at `q ∈ {0, 1}`; use [`q_discriminant_definitional`] or
/// [`discriminant`] there.
pub fn q_discriminant_trinomial(a: C64, b: C64, k: usize, l: usize, q: C64) -> Result<QDiscResult> {
    check_k_l(k, l)?;
    if q.norm() == 0.0 || (q - 1.0).norm() == 0.0 {
        return domain("closed form is undefined at q = 0 and q = 1; use the definitional path");
    }
    if a.norm() == 0.0 {
        return domain("closed form requires A != 0");
    }
    let (ki, li) = (k as i32, l as i32);
    let bracket = (q.powi(ki) - 1.0).powi(ki) * a.powi(li)
        - b.powi(ki) * (c(1.0) - q.powi(li)).powi(li) * (q.powi(li) - q.powi(ki)).powi(ki - li);
    let w = a.powi(ki - li - 1) * b.powi(li - 1) * (c(1.0) - q).powi(-ki);
    let value = sign_pow(k * (k + 1) / 2) * bracket * w;
    Ok(QDiscResult {
        value,
        path: QDiscPath::TrinomialClosedForm,
        q,
        note: format!("equals B^{} times the definitional value", l - 1),
    })
}

/// The `l = 1` closed form for `A t^n + B t + 1`:
///
/// `s · A^{n−2} (B^n q^{n−1} (1−q^{n−1})^{n−1}/(1−q)^{n−1} + (−1)^{n−1} (1−q^n)^n/(1−q)^n · A)`
///
/// with sign `s = (−1)^{(n−1)(n−2)/2}`, which makes it agree with the
/// definitional value.
pub fn q_discriminant_trinomial_l1(a: C64, b: C64, n: usize, q: C64) -> Result<QDiscResult> {
    if n < 2 {
        return domain("need degree n >= 2");
    }
    if q.norm() == 0.0 || (q - 1.0).norm() == 0.0 {
        return domain("closed form is undefined at q = 0 and q = 1; use the definitional path");
    }
    let ni = n as i32;
    let one_q = c(1.0) - q;
    let first = b.powi(ni) * q.powi(ni - 1) * (c(1.0) - q.powi(ni - 1)).powi(ni - 1) / one_q.powi(ni - 1);
    let second = sign_pow(n - 1) * (c(1.0) - q.powi(ni)).powi(ni) / one_q.powi(ni) * a;
    let value = sign_pow((n - 1) * (n - 2) / 2) * a.powi(ni - 2) * (first + second);
    Ok(QDiscResult {
        value,
        path: QDiscPath::TrinomialClosedForm,
        q,
        note: "equal to the definitional value".into(),
    })
}

/// The value of `B^k/A^l` at which the closed form vanishes:
/// `(q^k − 1)^k / ((1 − q^l)^l (q^l − q^k)^{k−l})`.
pub fn trinomial_vanishing_ratio(k: usize, l: usize, q: C64) -> Result<C64> {
    check_k_l(k, l)?;
    let (ki, li) = (k as i32, l as i32);
    let den = (c(1.0) - q.powi(li)).powi(li) * (q.powi(li) - q.powi(ki)).powi(ki - li);
    if den.norm() == 0.0 {
        return crate::error::pole("vanishing ratio has a pole at this q");
    }
    Ok((q.powi(ki) - 1.0).powi(ki) / den)
}
