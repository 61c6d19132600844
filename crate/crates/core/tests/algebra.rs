use polyzeros::geometry::{f32, f43};
use polyzeros::polyalg::{
    discriminant, q_discriminant_definitional, q_discriminant_ismail, q_discriminant_trinomial,
    sylvester_resultant, trinomial, trinomial_vanishing_ratio,
};
use polyzeros::polyparse::{format_poly, parse, parse_poly, PolySource};
use polyzeros::rootfind::{find_roots, RootOptions};
use polyzeros::{ComplexPoly, C64};
use proptest::prelude::*;

fn unit_disc() -> impl Strategy<Value = C64> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn annulus(lo: f64, hi: f64) -> impl Strategy<Value = C64> {
    (lo..hi, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

/// A q on `|q| ∈ [0.5, 2]` kept away from 1.
fn q_value() -> impl Strategy<Value = C64> {
    annulus(0.5, 2.0).prop_filter("q away from 1", |q| (q - 1.0).norm() > 1e-3)
}

fn poly_deg(lo: usize, hi: usize) -> impl Strategy<Value = ComplexPoly> {
    prop::collection::vec(unit_disc(), lo + 1..=hi + 1)
        .prop_filter("leading coefficient not tiny", |v| v.last().unwrap().norm() > 0.05)
        .prop_map(ComplexPoly::new)
}

fn roots_of(p: &ComplexPoly) -> Vec<C64> {
    find_roots(p, &RootOptions::default()).unwrap().roots().to_vec()
}

fn sign(e: usize) -> f64 {
    if e.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn definitional_and_q_derivative_paths_agree(p in poly_deg(2, 6), q in q_value()) {
        let roots = roots_of(&p);
        let d = q_discriminant_definitional(&p, q, &roots).unwrap().value;
        let i = q_discriminant_ismail(&p, q, &roots).unwrap().value;
        prop_assert!((d - i).norm() <= 1e-8 * (1.0 + d.norm()), "{d} vs {i}");
    }

    #[test]
    fn q_one_gives_ordinary_discriminant(p in poly_deg(2, 6)) {
        let roots = roots_of(&p);
        let d = q_discriminant_definitional(&p, C64::new(1.0, 0.0), &roots).unwrap().value;
        let ord = discriminant(&p).unwrap();
        prop_assert!((d - ord).norm() <= 1e-8 * (1.0 + ord.norm()), "{d} vs {ord}");
    }

    #[test]
    fn discriminant_is_the_scaled_resultant(p in poly_deg(1, 8)) {
        let n = p.degree().unwrap();
        let res = sylvester_resultant(&p, &p.derivative()).unwrap();
        let expected = res * sign(n * (n - 1) / 2) / p.leading().unwrap();
        let d = discriminant(&p).unwrap();
        prop_assert!((d - expected).norm() <= 1e-12 * (1.0 + expected.norm()));
    }
}

fn trinomial_family() -> impl Strategy<Value = (usize, usize)> {
    prop_oneof![Just((3usize, 2usize)), Just((4, 3))]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn closed_form_ratio_is_constant_in_q(
        (k, l) in trinomial_family(),
        a in annulus(0.5, 2.0),
        b in annulus(0.5, 2.0),
        q1 in q_value(),
        q2 in q_value(),
    ) {
        let p = trinomial(a, b, k, l);
        let roots = roots_of(&p);
        let ratio = |q: C64| {
            let cf = q_discriminant_trinomial(a, b, k, l, q).unwrap().value;
            let d = q_discriminant_definitional(&p, q, &roots).unwrap().value;
            cf / d
        };
        let (r1, r2) = (ratio(q1), ratio(q2));
        prop_assert!((r1 - r2).norm() <= 1e-6 * r1.norm(), "{r1} vs {r2}");
        let expected = b.powi(l as i32 - 1);
        prop_assert!((r1 - expected).norm() <= 1e-6 * expected.norm());
    }

    /// Choosing `B` so that `q` is a root ratio makes both forms vanish.
    #[test]
    fn closed_form_vanishes_with_definitional(
        (k, l) in trinomial_family(),
        a in annulus(0.5, 2.0),
        q in q_value(),
    ) {
        let Ok(target) = trinomial_vanishing_ratio(k, l, q) else { return Ok(()) };
        prop_assume!(target.norm() > 1e-6 && target.norm() < 1e6);
        // B^k = target · A^l
        let b = (target * a.powi(l as i32)).powf(1.0 / k as f64);
        let p = trinomial(a, b, k, l);
        let roots = roots_of(&p);
        let cf = q_discriminant_trinomial(a, b, k, l, q).unwrap().value;
        let (ki, li) = (k as i32, l as i32);
        let one = C64::new(1.0, 0.0);
        let cf_scale = ((q.powi(ki) - 1.0).powi(ki) * a.powi(li)).norm()
            + (b.powi(ki) * (one - q.powi(li)).powi(li) * (q.powi(li) - q.powi(ki)).powi(ki - li)).norm();
        let cf_scale = cf_scale * (a.powi(ki - li - 1) * b.powi(li - 1) * (one - q).powi(-ki)).norm();
        prop_assert!(cf.norm() <= 1e-8 * cf_scale, "closed form {cf} vs scale {cf_scale}");

        let d = q_discriminant_definitional(&p, q, &roots).unwrap().value;
        let s = (q.inv() + q).norm();
        let mut scale = q.norm().powi(ki * (ki - 1) / 2) * a.norm().powi(2 * ki - 2);
        for i in 0..roots.len() {
            for j in i + 1..roots.len() {
                let (x, y) = (roots[i].norm(), roots[j].norm());
                scale *= x * x + y * y + s * x * y;
            }
        }
        prop_assert!(d.norm() <= 1e-8 * scale, "definitional {d} vs scale {scale}");
    }

    #[test]
    fn vanishing_ratio_reproduces_scalar_maps(q in q_value()) {
        prop_assume!((q + 1.0).norm() > 1e-3 && (q * q + q + 1.0).norm() > 1e-3);
        let r32 = trinomial_vanishing_ratio(3, 2, q).unwrap();
        let f = f32(q).unwrap();
        prop_assert!((r32 - f).norm() <= 1e-10 * f.norm());
        let r43 = trinomial_vanishing_ratio(4, 3, q).unwrap();
        let g = f43(q).unwrap();
        prop_assert!((r43 - g).norm() <= 1e-10 * g.norm());
    }
}

fn small_coeff() -> impl Strategy<Value = C64> {
    prop_oneof![
        Just(C64::new(0.0, 0.0)),
        (-50i32..50).prop_map(|x| C64::new(x as f64, 0.0)),
        (-1e3..1e3f64, -1e3..1e3f64).prop_map(|(a, b)| C64::new(a, b)),
        (-1e3..1e3f64).prop_map(|b| C64::new(0.0, b)),
        (1e-9..1e9f64).prop_map(|a| C64::new(a, -a / 3.0)),
    ]
}

proptest! {
    #[test]
    fn format_then_parse_round_trips(coeffs in prop::collection::vec(small_coeff(), 0..12)) {
        let p = ComplexPoly::new(coeffs);
        let text = format_poly(&p, 'z');
        let back = parse(&text).unwrap();
        prop_assert_eq!(back.coeffs(), p.coeffs(), "{}", text);
    }

    #[test]
    fn round_trip_in_other_variables(coeffs in prop::collection::vec(small_coeff(), 1..6), var in prop::sample::select(vec!['t', 'x', 'e', 'q'])) {
        let p = ComplexPoly::new(coeffs);
        let text = format_poly(&p, var);
        let back = parse_poly(&PolySource::with_variable(text.clone(), var)).unwrap();
        prop_assert_eq!(back.coeffs(), p.coeffs(), "{}", text);
    }
}

#[test]
fn reference_inputs_round_trip() {
    for s in ["z + 5", "-z^2 + 2z + 5", "z^3 - z + 6", "-z^2 + 7z - 5", "z^2 + 1", "z^3 - 1", "7z^5 - 2z + i", "-z^2 - 2z + 5"] {
        let p = parse(s).unwrap();
        assert_eq!(parse(&format_poly(&p, 'z')).unwrap(), p, "{s}");
    }
    assert!(parse("0").unwrap().is_zero());
    assert_eq!(parse("0").unwrap(), ComplexPoly::zero());
}
