//! Verification harness: zeros of `P_n` against the curve `Im(B^k/A^l) = 0`
//! and its sign rule, root quotients against their curves, and agreement of
//! the q-discriminant computations.
//!
//! Reports are plain serde structs; given the same inputs (and seed) their
//! JSON is byte-identical.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvetrace::{classify_region, trace_curve, w_log, w_map, BBox, CurveNet, Grid, SignClass};
use crate::error::{domain, Result};
use crate::examples::{example, NamedExample};
use crate::geometry::{gamma_classify, quartic_classify, Family};
use crate::par::Exec;
use crate::poly::ComplexPoly;
use crate::polyalg::{
    discriminant, q_discriminant_definitional, q_discriminant_ismail, q_discriminant_trinomial, trinomial,
};
use crate::recurrence::{sequence_generate, zeros_of, RecurrenceSpec};
use crate::rootfind::{find_roots, quotient_profile, RootOptions, RootSet};
use crate::TOOL_VERSION;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    /// Threshold for `|sin(arg w)|` and for the quotient distances.
    pub tol: f64,
    /// Zeros with `|A(z)|` or `|B(z)|` below `ab_eps` times that polynomial's
    /// scale `max|c_i|·(1+|z|)^deg` are set aside.
    pub ab_eps: f64,
    /// `|Disc_t D(·, z)| ≤ repeated_tol · max(|A|, |B|, 1)^{2k−2}` marks a
    /// zero as a repeated-root point.
    pub repeated_tol: f64,
    pub roots: RootOptions,
    pub exec: Exec,
    pub seed: Option<u64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            tol: 1e-6,
            ab_eps: 1e-8,
            repeated_tol: 1e-10,
            roots: RootOptions::default(),
            exec: Exec::default(),
            seed: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    /// Too close to a zero of `A` or `B`; not checked.
    Filtered,
    /// `D(·, z)` has a (near-)repeated root; checked against the
    /// repeated-root value of `w` instead of the sign rule.
    RepeatedRoot,
    /// Failed a check that is a theorem for this `(k, l)`.
    TheoremViolation,
    /// Failed a check that is only conjectured for this `(k, l)`.
    ConjectureCandidate,
    /// The zero's residual exceeds the certification tolerance.
    NonCertified,
    NonFinite,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::Filtered => "filtered",
            Flag::RepeatedRoot => "repeated-root",
            Flag::TheoremViolation => "theorem-violation",
            Flag::ConjectureCandidate => "conjecture-candidate",
            Flag::NonCertified => "non-certified",
            Flag::NonFinite => "non-finite",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    ZerosOnCurve,
    Quotients,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZeroRecord {
    pub z: C64,
    pub residual: f64,
    pub abs_a: f64,
    pub abs_b: f64,
    /// `max|c_i|·(1+|z|)^deg` for `A` and `B`; the filter compares against
    /// `ab_eps` times these.
    pub a_scale: f64,
    pub b_scale: f64,
    pub w: C64,
    /// `|sin(arg w)|`.
    pub im_defect: f64,
    pub re_sign_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_distance: Option<f64>,
    /// `||u| − 1|` for the second-smallest quotient.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_modulus_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<C64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c4_arc: Option<bool>,
    /// Gradient-normalized quartic residual, worst of the remaining quotients.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quartic_distance: Option<f64>,
    pub passed: bool,
    pub flags: Vec<Flag>,
}

impl ZeroRecord {
    pub fn has(&self, f: Flag) -> bool {
        self.flags.contains(&f)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Aggregates {
    pub degree: usize,
    pub passing: usize,
    pub failing: usize,
    pub filtered: usize,
    pub repeated_root: usize,
    pub max_im_defect: f64,
    /// `passing / (passing + failing)`, 1 when nothing was checked.
    pub fraction_passing: f64,
    pub certified: bool,
    pub theorem_violations: usize,
    pub conjecture_candidates: usize,
    /// Indices of failing records, worst defect first.
    pub ranked_failures: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub kind: ReportKind,
    pub spec: RecurrenceSpec,
    pub n: usize,
    pub tol: f64,
    pub ab_eps: f64,
    pub records: Vec<ZeroRecord>,
    pub aggregates: Aggregates,
    pub seed: Option<u64>,
    pub tool_version: String,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.aggregates.failing == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `w` at which `A t^k + B t^l + 1` has a repeated root:
/// `(−1)^k k^k / ((k−l)^{k−l} l^l)`.
pub fn repeated_root_value(k: usize, l: usize) -> f64 {
    let (kf, lf, m) = (k as f64, l as f64, (k - l) as f64);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * (kf * kf.ln() - m * m.ln() - lf * lf.ln()).exp()
}

fn poly_scale(p: &ComplexPoly, z: C64) -> f64 {
    p.max_abs_coeff() * (1.0 + z.norm()).powi(p.degree().unwrap_or(0) as i32)
}

fn proven(k: usize, l: usize) -> bool {
    Family::from_k_l(k, l).is_some()
}

/// The part of a record shared by both checks.
fn base_record(spec: &RecurrenceSpec, z: C64, residual: f64, opts: &VerifyOptions) -> ZeroRecord {
    let (a, b) = (spec.a().eval(z), spec.b().eval(z));
    let (a_scale, b_scale) = (poly_scale(spec.a(), z), poly_scale(spec.b(), z));
    let mut flags = Vec::new();
    if residual > opts.roots.cert_tol {
        flags.push(Flag::NonCertified);
    }
    let filtered = a.norm() <= opts.ab_eps * a_scale || b.norm() <= opts.ab_eps * b_scale;
    if filtered {
        flags.push(Flag::Filtered);
    }
    let (w, im_defect) = match w_log(z, spec) {
        Ok((_, arg)) => (w_map(z, spec).unwrap_or(C64::new(f64::NAN, f64::NAN)), arg.sin().abs()),
        Err(_) => (C64::new(f64::NAN, f64::NAN), f64::NAN),
    };
    if !filtered && !(im_defect.is_finite() && w.re.is_finite() && w.im.is_finite()) {
        flags.push(Flag::NonFinite);
    }
    ZeroRecord {
        z,
        residual,
        abs_a: a.norm(),
        abs_b: b.norm(),
        a_scale,
        b_scale,
        w,
        im_defect,
        re_sign_ok: classify_region(w, spec.k(), spec.l()) == SignClass::Admissible,
        gamma_distance: None,
        u_modulus_defect: None,
        u: None,
        c4_arc: None,
        quartic_distance: None,
        passed: false,
        flags,
    }
}

fn assemble(
    kind: ReportKind,
    spec: &RecurrenceSpec,
    n: usize,
    mut records: Vec<ZeroRecord>,
    certified: bool,
    opts: &VerifyOptions,
) -> VerificationReport {
    let failure = if proven(spec.k(), spec.l()) { Flag::TheoremViolation } else { Flag::ConjectureCandidate };
    let mut agg = Aggregates { degree: records.len(), certified, ..Default::default() };
    for r in records.iter_mut() {
        if r.has(Flag::Filtered) {
            r.passed = false;
            agg.filtered += 1;
            continue;
        }
        if r.has(Flag::RepeatedRoot) {
            agg.repeated_root += 1;
        }
        if r.im_defect.is_finite() {
            agg.max_im_defect = agg.max_im_defect.max(r.im_defect);
        }
        if r.passed {
            agg.passing += 1;
        } else {
            agg.failing += 1;
            r.flags.push(failure);
        }
    }
    agg.theorem_violations = records.iter().filter(|r| r.has(Flag::TheoremViolation)).count();
    agg.conjecture_candidates = records.iter().filter(|r| r.has(Flag::ConjectureCandidate)).count();
    let checked = agg.passing + agg.failing;
    agg.fraction_passing = if checked == 0 { 1.0 } else { agg.passing as f64 / checked as f64 };
    let mut failing: Vec<usize> = (0..records.len()).filter(|&i| !records[i].passed && !records[i].has(Flag::Filtered)).collect();
    let severity = |r: &ZeroRecord| r.im_defect.max(r.gamma_distance.unwrap_or(0.0)).max(r.quartic_distance.unwrap_or(0.0));
    failing.sort_by(|&i, &j| severity(&records[j]).total_cmp(&severity(&records[i])).then(i.cmp(&j)));
    agg.ranked_failures = failing;
    VerificationReport {
        kind,
        spec: spec.clone(),
        n,
        tol: opts.tol,
        ab_eps: opts.ab_eps,
        records,
        aggregates: agg,
        seed: opts.seed,
        tool_version: TOOL_VERSION.to_string(),
    }
}

/// Zeros of `P_n` in modulus order, or `None` when `P_n` is constant.
fn zeros(spec: &RecurrenceSpec, n: usize, opts: &VerifyOptions) -> Result<Option<RootSet>> {
    if n == 0 {
        return domain("need n >= 1");
    }
    if opts.tol.is_nan() || opts.tol <= 0.0 || opts.ab_eps.is_nan() || opts.ab_eps <= 0.0 {
        return domain("tol and ab_eps must be positive");
    }
    let window = sequence_generate(spec, n);
    match window.get(n).and_then(|p| p.degree()) {
        Some(d) if d >= 1 => Ok(Some(zeros_of(&window, n, &opts.roots)?)),
        _ => Ok(None),
    }
}

/// Checks that every zero of `P_n` away from the zeros of `A` and `B` lies on
/// `Im(w) = 0` (`|sin(arg w)| ≤ tol`) and satisfies the sign rule.
///
/// Zeros at which `D(·, z)` has a repeated root are instead checked against
/// the repeated-root value of `w`.
pub fn verify_zeros_on_curve(spec: &RecurrenceSpec, n: usize, opts: &VerifyOptions) -> Result<VerificationReport> {
    let Some(rs) = zeros(spec, n, opts)? else {
        return Ok(assemble(ReportKind::ZerosOnCurve, spec, n, Vec::new(), true, opts));
    };
    let (k, l) = (spec.k(), spec.l());
    let target = repeated_root_value(k, l);
    let sorted = rs.sorted_with_residuals();
    let records = opts.exec.map_slice(&sorted, |&(z, res)| {
        let mut r = base_record(spec, z, res, opts);
        if r.has(Flag::Filtered) || r.has(Flag::NonFinite) {
            return r;
        }
        let (a, b) = (spec.a().eval(z), spec.b().eval(z));
        let scale = a.norm().max(b.norm()).max(1.0).powi(2 * k as i32 - 2);
        let repeated = discriminant(&trinomial(a, b, k, l)).is_ok_and(|d| d.norm() <= opts.repeated_tol * scale);
        let on_curve = r.im_defect <= opts.tol;
        r.passed = if repeated {
            r.flags.push(Flag::RepeatedRoot);
            on_curve && (r.w - target).norm() <= opts.tol * (1.0 + target.abs())
        } else {
            on_curve && r.re_sign_ok
        };
        r
    });
    Ok(assemble(ReportKind::ZerosOnCurve, spec, n, records, rs.is_certified(), opts))
}

/// For every zero `z₀` of `P_n` away from the zeros of `A` and `B`, checks
/// the quotients `q_i = t_i/t_1` of the roots of `D(·, z₀)`:
///
/// * `(3, 2)`: `q_2` and `q_3` on `Γ` within `tol`;
/// * `(4, 3)`: `u = q_2` on the arc `|u| = 1`, `Re u ≥ −1/3`, and `q_3`, `q_4`
///   on the quartic, both within `tol`;
///
/// and in both cases `||q_2| − 1| ≤ tol`.
pub fn verify_quotients(spec: &RecurrenceSpec, n: usize, opts: &VerifyOptions) -> Result<VerificationReport> {
    let Some(family) = Family::from_k_l(spec.k(), spec.l()) else {
        return domain(format!("quotient curves are known only for (3,2) and (4,3), not ({}, {})", spec.k(), spec.l()));
    };
    let Some(rs) = zeros(spec, n, opts)? else {
        return Ok(assemble(ReportKind::Quotients, spec, n, Vec::new(), true, opts));
    };
    let sorted = rs.sorted_with_residuals();
    let records = opts.exec.map_slice(&sorted, |&(z, res)| {
        let mut r = base_record(spec, z, res, opts);
        if r.has(Flag::Filtered) {
            return r;
        }
        let d = spec.denominator_at(z);
        let profile = find_roots(&d, &opts.roots).and_then(|t| quotient_profile(&t, opts.roots.equimodular_tol));
        let Ok(profile) = profile else {
            r.flags.push(Flag::NonCertified);
            return r;
        };
        let qs = &profile.quotients;
        let u = qs[0];
        let u_defect = (u.norm() - 1.0).abs();
        r.u = Some(u);
        r.u_modulus_defect = Some(u_defect);
        r.passed = u_defect <= opts.tol
            && match family {
                Family::K3L2 => {
                    let g = qs.iter().map(|&q| gamma_classify(q, opts.tol).distance).fold(0.0, f64::max);
                    r.gamma_distance = Some(g);
                    g <= opts.tol
                }
                Family::K4L3 => {
                    let c4 = quartic_classify(u, opts.tol).c4_arc;
                    let quartic = qs[1..].iter().map(|&q| quartic_classify(q, opts.tol).distance).fold(0.0, f64::max);
                    r.c4_arc = Some(c4);
                    r.quartic_distance = Some(quartic);
                    c4 && quartic <= opts.tol
                }
            };
        r
    });
    Ok(assemble(ReportKind::Quotients, spec, n, records, rs.is_certified(), opts))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowOrigin {
    Checkpoint,
    Random,
    /// Supplied by the caller.
    Given,
}

/// One trinomial `A t^k + B t^l + 1` evaluated along every available path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QDiscRow {
    pub origin: RowOrigin,
    pub k: usize,
    pub l: usize,
    pub a: C64,
    pub b: C64,
    pub q: C64,
    pub definitional: C64,
    pub ismail: C64,
    /// Absent at `q = 1`, where the closed form is undefined.
    pub closed_form: Option<C64>,
    /// Present at `q = 1`.
    pub ordinary: Option<C64>,
    /// `|definitional − ismail| / max(|definitional|, |ismail|)`, with the
    /// denominator floored at `√ε` times the size of the product's terms.
    pub path_rel_diff: f64,
    /// `closed_form / definitional`.
    pub ratio: Option<C64>,
    /// `B^{l−1}`.
    pub expected_ratio: C64,
    /// `|ratio − B^{l−1}| / |B^{l−1}|`, or the relative gap to the ordinary
    /// discriminant at `q = 1`.
    pub ratio_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QDiscAggregates {
    pub rows: usize,
    pub max_path_rel_diff: f64,
    pub max_ratio_error: f64,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QDiscReport {
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub rows: Vec<QDiscRow>,
    pub aggregates: QDiscAggregates,
    pub tool_version: String,
}

impl QDiscReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Size of the terms in the pair product, `|q|^{n(n−1)/2} |a_n|^{2n−2}
/// Π_{i<j} (|x_i|² + |x_j|² + |q⁻¹ + q| |x_i| |x_j|)`. A value far below it
/// is zero up to rounding.
fn pair_product_scale(p: &ComplexPoly, q: C64, roots: &[C64]) -> f64 {
    let n = roots.len();
    let s = (q.inv() + q).norm();
    let mut prod = 1.0;
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (roots[i].norm(), roots[j].norm());
            prod *= a * a + b * b + s * a * b;
        }
    }
    let lead = p.leading().map_or(0.0, |c| c.norm());
    q.norm().powi((n * n.saturating_sub(1) / 2) as i32) * lead.powi(2 * n as i32 - 2) * prod
}

fn rel_diff(x: C64, y: C64, scale: f64) -> f64 {
    let m = x.norm().max(y.norm()).max(f64::EPSILON.sqrt() * scale);
    if m == 0.0 {
        0.0
    } else {
        (x - y).norm() / m
    }
}

/// Evaluates every path for one trinomial.
pub fn qdisc_row(origin: RowOrigin, a: C64, b: C64, k: usize, l: usize, q: C64) -> Result<QDiscRow> {
    let p = trinomial(a, b, k, l);
    let rs = find_roots(&p, &RootOptions::default())?;
    let def = q_discriminant_definitional(&p, q, rs.roots())?.value;
    let ism = q_discriminant_ismail(&p, q, rs.roots())?.value;
    let expected_ratio = b.powi(l as i32 - 1);
    let at_one = (q - 1.0).norm() == 0.0;
    let (closed_form, ordinary, ratio, ratio_error) = if at_one {
        let ord = discriminant(&p)?;
        (None, Some(ord), None, (def - ord).norm() / (1.0 + ord.norm()))
    } else {
        let cf = q_discriminant_trinomial(a, b, k, l, q)?.value;
        let ratio = cf / def;
        (Some(cf), None, Some(ratio), (ratio - expected_ratio).norm() / expected_ratio.norm())
    };
    Ok(QDiscRow {
        origin,
        k,
        l,
        a,
        b,
        q,
        definitional: def,
        ismail: ism,
        closed_form,
        ordinary,
        path_rel_diff: rel_diff(def, ism, pair_product_scale(&p, q, rs.roots())),
        ratio,
        expected_ratio,
        ratio_error,
    })
}

const RANDOM_FAMILIES: [(usize, usize); 8] = [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3), (5, 2), (5, 3), (5, 4)];

/// Fixed checkpoints plus `samples` random trinomials (seeded), each run
/// through the definitional, q-derivative and closed-form paths.
pub fn verify_qdisc_consistency(samples: usize, seed: u64) -> Result<QDiscReport> {
    if samples == 0 {
        return domain("need at least one sample");
    }
    let c = |re: f64| C64::new(re, 0.0);
    let mut rows = vec![
        qdisc_row(RowOrigin::Checkpoint, c(1.0), c(1.0), 3, 2, c(2.0))?,
        qdisc_row(RowOrigin::Checkpoint, c(2.0), c(1.0), 3, 2, c(2.0))?,
        qdisc_row(RowOrigin::Checkpoint, c(1.0), c(2.0), 3, 2, c(2.0))?,
        qdisc_row(RowOrigin::Checkpoint, c(1.0), c(1.0), 3, 2, c(1.0))?,
        qdisc_row(RowOrigin::Checkpoint, c(1.0), c(2.0), 2, 1, c(1.0))?,
        qdisc_row(RowOrigin::Checkpoint, c(1.0), c(1.0), 4, 3, c(1.0))?,
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeff = |rng: &mut ChaCha8Rng| loop {
        let z = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if z.norm() >= 0.25 {
            return z;
        }
    };
    for _ in 0..samples {
        let (k, l) = RANDOM_FAMILIES[rng.gen_range(0..RANDOM_FAMILIES.len())];
        let (a, b) = (coeff(&mut rng), coeff(&mut rng));
        let q = loop {
            let q = C64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
            if (q - 1.0).norm() >= 0.1 {
                break q;
            }
        };
        rows.push(qdisc_row(RowOrigin::Random, a, b, k, l, q)?);
    }
    let tol = 1e-8;
    let max_path = rows.iter().map(|r| r.path_rel_diff).fold(0.0, f64::max);
    let max_ratio = rows.iter().map(|r| r.ratio_error).fold(0.0, f64::max);
    Ok(QDiscReport {
        samples,
        seed,
        tol,
        aggregates: QDiscAggregates { rows: rows.len(), max_path_rel_diff: max_path, max_ratio_error: max_ratio, agree: max_path <= tol && max_ratio <= tol },
        rows,
        tool_version: TOOL_VERSION.to_string(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureOptions {
    /// Grid nodes along each axis.
    pub nodes: usize,
    pub refine_tol: f64,
    /// Relative padding around the hull of the zeros.
    pub pad: f64,
    pub roots: RootOptions,
    pub exec: Exec,
    /// Fixed window instead of the padded hull of the zeros.
    pub bbox: Option<BBox>,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions {
            nodes: 300,
            refine_tol: 1e-12,
            pad: 0.15,
            roots: RootOptions::default(),
            exec: Exec::default(),
            bbox: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Figure {
    pub example: NamedExample,
    pub n: usize,
    pub zeros: RootSet,
    pub net: CurveNet,
}

/// Zeros of `P_n` for a named example with the curve traced around them.
pub fn reproduce_figure(example_id: &str, n: usize, opts: &FigureOptions) -> Result<Figure> {
    let ex = *example(example_id)?;
    let spec = ex.spec();
    let window = sequence_generate(&spec, n);
    let zeros = zeros_of(&window, n, &opts.roots)?;
    let bbox = match opts.bbox {
        Some(b) => b,
        None => BBox::around(zeros.roots(), opts.pad, 1.0)?,
    };
    let grid = Grid::new(bbox, opts.nodes, opts.nodes)?;
    let net = trace_curve(&spec, &grid, opts.refine_tol, opts.exec)?;
    Ok(Figure { example: ex, n, zeros, net })
}
