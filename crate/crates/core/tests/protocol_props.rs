use proptest::prelude::*;
use quasirect::protocol::{build_superposition, dyadic_schedule, expand_schedule, success_probability, PulseSchedule};
use quasirect::SqueezeParameter;

fn sq(r: f64) -> SqueezeParameter {
    SqueezeParameter::new(r).unwrap()
}

fn schedule() -> impl Strategy<Value = PulseSchedule> {
    prop_oneof![
        // quantized areas hit the merge path often
        proptest::collection::vec((1u32..6).prop_map(|k| k as f64 * 0.25), 1..8),
        proptest::collection::vec(0.01..3.0f64, 1..8),
    ]
    .prop_map(|areas| PulseSchedule::new(areas, "prop").unwrap())
}

proptest! {
    #[test]
    fn weights_sum_to_one(s in schedule()) {
        let m = expand_schedule(&s);
        prop_assert!((m.total_weight() - 1.0).abs() <= 1e-14);
        prop_assert!(m.entries().windows(2).all(|w| w[0].amplitude < w[1].amplitude));
    }

    #[test]
    fn multiset_is_negation_symmetric(s in schedule()) {
        let m = expand_schedule(&s);
        let e = m.entries();
        let n = e.len();
        for k in 0..n {
            prop_assert!((e[k].amplitude + e[n - 1 - k].amplitude).abs() <= 1e-12);
            prop_assert_eq!(e[k].weight, e[n - 1 - k].weight);
        }
    }

    #[test]
    fn extra_pulse_never_raises_success(s in schedule(), extra in 0.01..3.0f64, r in -1.0..2.0f64) {
        let p0 = success_probability(&s, sq(r)).unwrap();
        let p1 = success_probability(&s.with_pulse(extra).unwrap(), sq(r)).unwrap();
        prop_assert!(p0 > 0.0 && p0 <= 1.0 + 1e-12);
        prop_assert!(p1 <= p0 + 1e-12);
    }

    #[test]
    fn components_are_sorted(p in 1usize..8, tau in 0.01..2.0f64, r in -2.0..3.0f64) {
        let st = build_superposition(&dyadic_schedule(p, tau).unwrap(), sq(r)).unwrap();
        prop_assert_eq!(st.len(), 1 << p);
        prop_assert!(st.components().windows(2).all(|w| w[0].amplitude < w[1].amplitude));
    }
}
