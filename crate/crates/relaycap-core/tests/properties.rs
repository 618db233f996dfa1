use proptest::prelude::*;
use relaycap_core::capacity::{
    exact_capacity, high_snr_char, lower_bound, lower_bound_nr1, offset_shift, upper_bound,
    upper_bound_nr1, QuadratureSpec,
};
use relaycap_core::eigenstats::{
    expected_logdet_at, expected_logdet_q_eq_s, unordered_pdf, Dims, SystemConfig,
};

fn config() -> impl Strategy<Value = SystemConfig> {
    (1u32..=4, 1u32..=4, 1u32..=4, -1.0f64..2.0, -1.0f64..2.5).prop_map(|(ns, nr, nd, la, lr)| {
        SystemConfig::new(ns, nr, nd, 10f64.powf(la), 10f64.powf(lr)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bounds_sandwich_exact(c in config()) {
        let x = exact_capacity(&c, QuadratureSpec::default()).unwrap().value;
        let l = lower_bound(&c).unwrap().value;
        let u = upper_bound(&c).unwrap().value;
        prop_assert!(l <= x * (1.0 + 1e-9) + 1e-12, "{l} > {x}");
        prop_assert!(x <= u * (1.0 + 1e-9) + 1e-12, "{x} > {u}");
    }

    #[test]
    fn density_is_normalized(c in config()) {
        let m = unordered_pdf(&c).total_mass().unwrap();
        prop_assert!((m - 1.0).abs() < 1e-8, "{m}");
    }

    #[test]
    fn capacity_grows_with_snr(c in config(), step in 1.01f64..4.0) {
        let q = QuadratureSpec::default();
        let lo = exact_capacity(&c, q).unwrap().value;
        let hi = exact_capacity(&c.with_rho(c.rho * step).unwrap(), q).unwrap().value;
        prop_assert!(hi >= lo * (1.0 - 1e-9), "{lo} {hi}");
    }

    #[test]
    fn single_relay_corollaries(ns in 1u32..=5, nd in 1u32..=6, la in -1.0f64..3.0, lr in -1.0f64..3.0) {
        let (alpha, rho) = (10f64.powf(la), 10f64.powf(lr));
        let c = SystemConfig::new(ns, 1, nd, alpha, rho).unwrap();
        let (u, u1) = (upper_bound(&c).unwrap().value, upper_bound_nr1(ns, nd, alpha, rho).unwrap().value);
        let (l, l1) = (lower_bound(&c).unwrap().value, lower_bound_nr1(ns, nd, alpha, rho).unwrap().value);
        prop_assert!((u - u1).abs() <= 1e-10 * u.abs().max(1e-300), "{u} {u1}");
        prop_assert!((l - l1).abs() <= 1e-10 * l.abs().max(1e-300), "{l} {l1}");
    }

    #[test]
    fn logdet_forms_agree(ns in 1u32..=4, q in 1u32..=4, extra in 0u32..4, la in -2.0f64..3.0) {
        let d = Dims::new(ns, q, q + extra).unwrap();
        prop_assume!(d.s() == q);
        let a = 10f64.powf(la);
        let x = expected_logdet_at(d, a).unwrap();
        let y = expected_logdet_q_eq_s(d, a).unwrap();
        prop_assert!((x - y).abs() <= 1e-8 * x.abs().max(1.0), "{x} {y}");
    }

    #[test]
    fn offset_shift_negative_and_additive(nd in 1u32..6, k1 in 1u32..5, k2 in 1u32..5, lb in -1.0f64..1.5) {
        let beta = 10f64.powf(lb);
        let a = offset_shift(nd, k1, beta).unwrap();
        let b = offset_shift(nd + k1, k2, beta).unwrap();
        let ab = offset_shift(nd, k1 + k2, beta).unwrap();
        prop_assert!(a < 0.0 && b < 0.0);
        prop_assert!((a + b - ab).abs() < 1e-12);
    }

    #[test]
    fn slope_is_half_rank(ns in 1u32..=5, nr in 1u32..=5, nd in 1u32..=5, lb in -1.0f64..1.5) {
        let ch = high_snr_char(ns, nr, nd, 10f64.powf(lb)).unwrap();
        prop_assert_eq!(ch.slope, 0.5 * f64::from(ns.min(nr).min(nd)));
    }
}
