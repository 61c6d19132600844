//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use polyzeros::curvetrace::{
    curve_agreement, dominance_map, trace_curve, BBox, DominanceOptions, Grid,
};
use polyzeros::examples::example;
use polyzeros::geometry::{
    f32, f43, f_theta, gamma_classify, h_ratio, mobius_invert, omega_membership, Branch, Family,
};
use polyzeros::par::Exec;
use polyzeros::polyalg::{
    discriminant, q_discriminant_definitional, q_discriminant_ismail, q_discriminant_trinomial, trinomial,
};
use polyzeros::recurrence::{sequence_generate, series_expand, zeros_of, RecurrenceSpec};
use polyzeros::rootfind::{find_roots, RootOptions};
use polyzeros::verify::{verify_quotients, verify_zeros_on_curve, VerifyOptions};
use polyzeros::{ComplexPoly, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn rand_c(rng: &mut ChaCha8Rng, r: f64) -> C64 {
    C64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn qdisc_oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let deg = rng.gen_range(2..=6);
        let mut coeffs: Vec<C64> = (0..=deg).map(|_| rand_c(&mut rng, 2.0)).collect();
        if coeffs[deg].norm() < 0.1 {
            coeffs[deg] = c(1.0);
        }
        let p = ComplexPoly::new(coeffs);
        let q = C64::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(0.0..2.0 * PI));
        let roots = find_roots(&p, &RootOptions::default()).unwrap();
        let d = q_discriminant_definitional(&p, q, roots.roots()).unwrap().value;
        let i = q_discriminant_ismail(&p, q, roots.roots()).unwrap().value;
        worst = worst.max((d - i).norm() / d.norm().max(i.norm()));
    }
    let t = start.elapsed();
    outcome(worst <= 1e-8 && within(t, 5.0), format!("max relative gap {worst:.2e} over 200 polynomials in {t:.2?}"))
}

fn closed_form_checkpoints() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (a, b, expected) in [(1.0, 1.0, -379.0), (2.0, 1.0, -1408.0)] {
        let p = trinomial(c(a), c(b), 3, 2);
        let roots = find_roots(&p, &RootOptions::default()).unwrap();
        let d = q_discriminant_definitional(&p, c(2.0), roots.roots()).unwrap().value;
        let i = q_discriminant_ismail(&p, c(2.0), roots.roots()).unwrap().value;
        let f = q_discriminant_trinomial(c(a), c(b), 3, 2, c(2.0)).unwrap().value;
        let good = [d, i, f].iter().all(|v| (v - c(expected)).norm() <= 1e-10 * expected.abs());
        ok &= good;
        notes.push(format!("A={a},B={b}: {:.6}/{:.6}/{:.6}", d.re, i.re, f.re));
    }
    let p = trinomial(c(1.0), c(2.0), 3, 2);
    let roots = find_roots(&p, &RootOptions::default()).unwrap();
    let d = q_discriminant_definitional(&p, c(2.0), roots.roots()).unwrap().value;
    let f = q_discriminant_trinomial(c(1.0), c(2.0), 3, 2, c(2.0)).unwrap().value;
    let ratio = f / d;
    ok &= (f - c(-1262.0)).norm() <= 1e-10 * 1262.0 && (d - c(-631.0)).norm() <= 1e-10 * 631.0;
    ok &= (ratio - c(2.0)).norm() <= 1e-10;
    notes.push(format!("A=1,B=2: closed {:.6} vs definitional {:.6}, ratio {:.12}", f.re, d.re, ratio.re));
    outcome(ok, notes.join("; "))
}

fn q_one_reduction() -> Outcome {
    let cases: [(&[f64], f64); 3] = [(&[1.0, 0.0, 1.0, 1.0], -31.0), (&[1.0, 2.0, 1.0], 0.0), (&[1.0, 0.0, 0.0, 1.0, 1.0], 229.0)];
    let mut ok = true;
    let mut notes = Vec::new();
    for (coeffs, expected) in cases {
        let p = ComplexPoly::from_real(coeffs);
        let roots = find_roots(&p, &RootOptions::default()).unwrap();
        let d = q_discriminant_definitional(&p, c(1.0), roots.roots()).unwrap().value;
        let ord = discriminant(&p).unwrap();
        let tol = 1e-8 * expected.abs().max(1.0);
        ok &= (d - c(expected)).norm() <= tol && (d - ord).norm() <= tol;
        notes.push(format!("{expected}: {:.3e}", (d - c(expected)).norm()));
    }
    outcome(ok, format!("deviation from exact: {}", notes.join(", ")))
}

fn generating_function_identity() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    let mut families = 0;
    for (k, l) in [(3, 2), (4, 3), (2, 1), (5, 2)] {
        for _ in 0..5 {
            let poly = |rng: &mut ChaCha8Rng| {
                let d = rng.gen_range(0..=3);
                let mut v: Vec<C64> = (0..=d).map(|_| rand_c(rng, 1.0)).collect();
                v[d] += c(1.0);
                ComplexPoly::new(v)
            };
            let spec = RecurrenceSpec::new(k, l, poly(&mut rng), poly(&mut rng)).unwrap();
            let g = sequence_generate(&spec, 50);
            let s = series_expand(&spec, 50);
            for (x, y) in g.polys.iter().zip(&s.polys) {
                let d = (x - y).max_abs_coeff();
                worst = worst.max(d);
            }
            families += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        worst <= 1e-12 && within(t, 2.0),
        format!("max coefficient gap {worst:.2e} over {families} random families, n <= 50, in {t:.2?}"),
    )
}

fn zeros_on_curve(ids: &[(&str, [usize; 2])], limit_s: f64) -> Outcome {
    let start = Instant::now();
    let opts = VerifyOptions::default();
    let mut ok = true;
    let mut notes = Vec::new();
    for (id, ns) in ids {
        let spec = example(id).unwrap().spec();
        for &n in ns {
            let r = verify_zeros_on_curve(&spec, n, &opts).unwrap();
            // recheck the two thresholds directly from the records
            let checked: Vec<_> = r.records.iter().filter(|z| {
                z.abs_a > opts.ab_eps * z.a_scale && z.abs_b > opts.ab_eps * z.b_scale
            }).collect();
            let good = checked
                .iter()
                .filter(|z| z.im_defect <= 1e-6 && z.w.re >= -1e-6 * (1.0 + z.w.norm()))
                .count();
            ok &= good == checked.len() && r.aggregates.certified;
            notes.push(format!("{id}/n={n}: {good}/{} (max |sin arg w| {:.1e})", checked.len(), r.aggregates.max_im_defect));
        }
    }
    let t = start.elapsed();
    ok &= within(t, limit_s);
    outcome(ok, format!("{} in {t:.2?}", notes.join(", ")))
}

fn quotient_geometry() -> Outcome {
    let opts = VerifyOptions::default();
    let mut notes = Vec::new();
    let mut ok = true;
    for (id, ns) in [("5.1", [30, 70]), ("5.2", [120, 200]), ("5.3", [40, 70]), ("5.4", [50, 150])] {
        let spec = example(id).unwrap().spec();
        let mut good = 0;
        let mut total = 0;
        let mut worst_re_u = f64::INFINITY;
        let mut worst_quartic = 0.0f64;
        for n in ns {
            let r = verify_quotients(&spec, n, &opts).unwrap();
            for z in r.records.iter().filter(|z| z.abs_a > opts.ab_eps * z.a_scale && z.abs_b > opts.ab_eps * z.b_scale) {
                total += 1;
                let pass = if spec.k() == 3 {
                    z.gamma_distance.is_some_and(|g| g <= 1e-6)
                } else {
                    let u = z.u.unwrap_or(c(f64::NAN));
                    worst_re_u = worst_re_u.min(u.re);
                    let qd = z.quartic_distance.unwrap_or(f64::INFINITY);
                    worst_quartic = worst_quartic.max(qd);
                    (u.norm() - 1.0).abs() <= 1e-6 && u.re >= -1.0 / 3.0 - 1e-6 && qd <= 1e-6
                };
                good += pass as usize;
            }
        }
        ok &= good == total;
        if spec.k() == 3 {
            notes.push(format!("{id}: {good}/{total} on Γ"));
        } else {
            notes.push(format!("{id}: {good}/{total} (min Re u {worst_re_u:.4}, max quartic distance {worst_quartic:.2})"));
        }
    }
    outcome(ok, notes.join(", "))
}

fn range_functions() -> Outcome {
    let mut ok = true;
    let f1 = f_theta(Family::K3L2, 2.0 * PI / 3.0).unwrap();
    let f2 = f_theta(Family::K4L3, PI / 2.0).unwrap();
    ok &= f1.abs() <= 1e-12 && f2.abs() <= 1e-12;
    let sample = |family: Family, parts: &[(f64, f64)]| -> f64 {
        let per = 10_000 / parts.len();
        let mut min = f64::INFINITY;
        for &(lo, hi) in parts {
            for i in 0..per {
                let t = lo + (i as f64 + 0.5) / per as f64 * (hi - lo);
                assert!(omega_membership(family, t));
                min = min.min(f_theta(family, t).unwrap());
            }
        }
        min
    };
    let m32 = sample(Family::K3L2, &[(2.0 * PI / 3.0, 4.0 * PI / 3.0)]);
    let m43 = sample(Family::K4L3, &[(PI / 2.0, 2.0 * PI / 3.0), (4.0 * PI / 3.0, 3.0 * PI / 2.0)]);
    ok &= m32 >= -1e-12 && m43 >= -1e-12;
    let diverges = f_theta(Family::K3L2, PI).is_err()
        && [1e-3, 1e-5].iter().all(|d| f_theta(Family::K3L2, PI - d).unwrap() >= 0.5 / (d * d));
    ok &= diverges;
    let a = f32(c(1.0)).unwrap();
    let b = f43(c(1.0)).unwrap();
    ok &= (a - c(-27.0 / 4.0)).norm() <= 1e-12 && (b - c(256.0 / 27.0)).norm() <= 1e-12;
    outcome(
        ok,
        format!(
            "zeros {f1:.1e}, {f2:.1e}; min on Ω {m32:.2e} / {m43:.2e}; pole at π {}; f32(1) = {:.15}, f43(1) = {:.15}",
            if diverges { "ok" } else { "missing" },
            a.re,
            b.re
        ),
    )
}

fn h_is_real_on_circle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut pairs = 0;
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    for k in 2..=7 {
        for l in (1..k).filter(|&l| gcd(k, l) == 1) {
            pairs += 1;
            for _ in 0..1000 {
                let q = C64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
                if let Ok(h) = h_ratio(q, k, l) {
                    worst = worst.max(h.im.abs() / (1.0 + h.norm()));
                }
            }
        }
    }
    let h = h_ratio(C64::from_polar(1.0, PI / 3.0), 3, 2).unwrap();
    let ok = worst <= 1e-10 && (h - c(8.0 / 3.0)).norm() <= 1e-12;
    outcome(ok, format!("max |Im h|/(1+|h|) {worst:.2e} over {pairs} pairs; h(e^(iπ/3); 3,2) = {:.15}", h.re))
}

fn gamma_inversion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let s3 = 3f64.sqrt() / 2.0;
    let mut worst = 0.0f64;
    let mut branch_ok = true;
    for _ in 0..1000 {
        let on_c1 = C64::from_polar(1.0, rng.gen_range(2.0 * PI / 3.0..=4.0 * PI / 3.0));
        let on_c2 = c(-1.0) + C64::from_polar(1.0, rng.gen_range(-PI / 3.0..=PI / 3.0));
        let y = s3 + rng.gen_range(0.0..20.0);
        let on_c3 = C64::new(-0.5, if rng.gen_bool(0.5) { y } else { -y });
        for (z, from, to) in [(on_c1, Branch::C1, Branch::C1), (on_c2, Branch::C2, Branch::C3), (on_c3, Branch::C3, Branch::C2)] {
            if !gamma_classify(z, 1e-12).branches.contains(&from) {
                branch_ok = false;
            }
            let Ok(img) = mobius_invert(z) else {
                // the origin lies on C2
                continue;
            };
            let v = gamma_classify(img, 1e-9);
            worst = worst.max(v.distance);
            branch_ok &= v.branches.contains(&to);
        }
    }
    outcome(worst <= 1e-9 && branch_ok, format!("max image distance {worst:.2e}; branch map C1→C1, C2→C3, C3→C2 {}", if branch_ok { "observed" } else { "violated" }))
}

fn l1_window() -> Outcome {
    let spec = RecurrenceSpec::parse(2, 1, "z", "z").unwrap();
    let w = sequence_generate(&spec, 40);
    let rs = zeros_of(&w, 40, &RootOptions::default()).unwrap();
    let max_im = rs.roots().iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    let lo = rs.roots().iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    let hi = rs.roots().iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let ok = rs.len() == 40 && max_im <= 1e-8 && lo >= -1e-8 && hi <= 4.0 + 1e-8;
    outcome(ok, format!("{} zeros, max |Im| {max_im:.1e}, real parts in [{lo:.3e}, {hi:.12}]", rs.len()))
}

fn dominance_agreement() -> Outcome {
    let start = Instant::now();
    let spec = example("5.1").unwrap().spec();
    let grid = Grid::new(BBox::square(6.0).unwrap(), 200, 200).unwrap();
    let net = trace_curve(&spec, &grid, 1e-12, Exec::Parallel).unwrap();
    let field = dominance_map(&spec, &grid, &DominanceOptions::default()).unwrap();
    let a = curve_agreement(&field, &net, 2.0);
    let t = start.elapsed();
    let ok = a.equimodular > 0 && a.fraction() >= 0.95 && within(t, 120.0);
    outcome(ok, format!("{}/{} equimodular nodes within 2 cells ({:.1}%) in {t:.2?}", a.near_admissible_curve, a.equimodular, 100.0 * a.fraction()))
}

type Check = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Check; 12] = [
        ("q-discriminant path equivalence", qdisc_oracle_equivalence),
        ("closed-form checkpoints", closed_form_checkpoints),
        ("q = 1 reduction", q_one_reduction),
        ("generating-function identity", generating_function_identity),
        ("(3,2) zeros on curve", || zeros_on_curve(&[("5.1", [30, 70]), ("5.2", [120, 200])], 60.0)),
        ("(4,3) zeros on curve", || zeros_on_curve(&[("5.3", [40, 70]), ("5.4", [50, 150])], 60.0)),
        ("quotient geometry", quotient_geometry),
        ("range functions", range_functions),
        ("h real on the unit circle", h_is_real_on_circle),
        ("Γ inversion invariance", gamma_inversion),
        ("l = 1 window", l1_window),
        ("dominance / curve agreement", dominance_agreement),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {:>2} {:<34} {}  {}", i + 1, name, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria passed");
    } else {
        println!("acceptance: {} of 12 criteria failed: {failed:?}", failed.len());
        std::process::exit(1);
    }
}
