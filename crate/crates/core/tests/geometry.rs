use std::f64::consts::{PI, TAU};

use polyzeros::geometry::{
    f32, f43, f_family, f_theta, gamma_classify, h_ratio, mobius_invert, quartic_classify,
    quotient_pair_from_u, Branch, Family,
};
use polyzeros::C64;
use proptest::prelude::*;

const S3: f64 = 0.8660254037844386;

fn on_c1() -> impl Strategy<Value = C64> {
    (2.0 * PI / 3.0..=4.0 * PI / 3.0).prop_map(|t| C64::from_polar(1.0, t))
}

fn on_c2() -> impl Strategy<Value = C64> {
    (-PI / 3.0..=PI / 3.0).prop_map(|t| C64::new(-1.0, 0.0) + C64::from_polar(1.0, t))
}

fn on_c3() -> impl Strategy<Value = C64> {
    (0.0..50.0f64, any::<bool>()).prop_map(|(y, up)| C64::new(-0.5, if up { S3 + y } else { -S3 - y }))
}

fn is_real(v: C64) -> bool {
    v.im.abs() <= 1e-10 * (1.0 + v.norm())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn inversion_maps_gamma_to_itself(q in prop_oneof![on_c1(), on_c2(), on_c3()]) {
        prop_assume!(q.norm() > 1e-6);
        let img = mobius_invert(q).unwrap();
        let v = gamma_classify(img, 1e-9);
        prop_assert!(v.on_gamma(), "1/{q} = {img} is {:e} from Γ", v.distance);
    }

    #[test]
    fn inversion_swaps_line_and_shifted_circle(q in on_c3()) {
        let img = mobius_invert(q).unwrap();
        prop_assert!(gamma_classify(img, 1e-9).branches.contains(&Branch::C2));
    }

    #[test]
    fn f32_is_real_on_gamma(q in prop_oneof![on_c1(), on_c2(), on_c3()]) {
        let Ok(v) = f32(q) else { return Ok(()) };
        prop_assert!(is_real(v), "f32({q}) = {v}");
    }

    /// `q ↦ f32(q)` agrees with its conjugate on the line and on `|1 + q| = 1`.
    #[test]
    fn f32_conjugation_identities(y in -20.0..20.0f64, t in 0.0..TAU) {
        let q = C64::new(-0.5, y);
        prop_assert!(is_real(f32(q).unwrap()));
        let q = C64::new(-1.0, 0.0) + C64::from_polar(1.0, t);
        prop_assume!(q.norm() > 1e-3);
        let v = f32(q).unwrap();
        prop_assert!((v - f32(q.conj()).unwrap().conj()).norm() <= 1e-10 * (1.0 + v.norm()));
        prop_assert!(is_real(v));
    }

    /// The remaining quotients produced from `u` on the arc lie on the
    /// quartic and share the value of the quotient map.
    #[test]
    fn c4_arc_feeds_the_quartic(c in -1.0 / 3.0..0.0f64, upper in any::<bool>()) {
        let s = (1.0 - c * c).sqrt();
        let u = C64::new(c, if upper { s } else { -s });
        let (q3, q4) = quotient_pair_from_u(u).unwrap();
        let fu = f43(u).unwrap();
        for q in [q3, q4] {
            let fq = f43(q).unwrap();
            prop_assert!((fq - fu).norm() <= 1e-10 * (1.0 + fu.norm()), "{fq} vs {fu}");
            let v = quartic_classify(q, 1e-9);
            prop_assert!(v.on_curve, "{q}: distance {:e}", v.distance);
        }
        prop_assert!(quartic_classify(u, 1e-9).c4_arc);
    }

    #[test]
    fn trig_form_matches_complex_form(theta in 0.0..TAU, pick in any::<bool>()) {
        let family = if pick { Family::K3L2 } else { Family::K4L3 };
        let (Ok(real), Ok(full)) = (f_theta(family, theta), f_family(family, C64::from_polar(1.0, theta))) else {
            return Ok(());
        };
        prop_assume!(real.abs() < 1e8);
        prop_assert!((full.re - real).abs() <= 1e-9 * (1.0 + real.abs()), "{full} vs {real}");
        prop_assert!(is_real(full));
    }

    #[test]
    fn h_is_real_on_unit_circle(theta in 0.0..TAU, pair in prop::sample::select(vec![(2usize, 1usize), (3, 1), (3, 2), (4, 1), (4, 3), (5, 2), (5, 3), (5, 4), (7, 3)])) {
        let Ok(h) = h_ratio(C64::from_polar(1.0, theta), pair.0, pair.1) else { return Ok(()) };
        prop_assert!(is_real(h), "h = {h}");
    }
}

#[test]
fn quartic_family_diverges_at_the_inner_arc_ends() {
    for d in [1e-2, 1e-3] {
        assert!(f_theta(Family::K4L3, 2.0 * PI / 3.0 - d).unwrap() >= 0.1 / (d * d * d));
        assert!(f_theta(Family::K4L3, 4.0 * PI / 3.0 + d).unwrap() >= 0.1 / (d * d * d));
    }
}
