use hardy::sampling::{reconstruct, reconstruct_certified, sample_energy, sinc, SampleSet};
use num_complex::Complex64;
use proptest::prelude::*;

fn samples() -> impl Strategy<Value = SampleSet> {
    (-20i64..20, prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..30))
        .prop_map(|(start, v)| SampleSet::new(start, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interpolates_its_samples(s in samples()) {
        for (n, v) in s.iter() {
            prop_assert_eq!(reconstruct(&s, n as f64), v);
        }
    }

    #[test]
    fn pointwise_bound_by_energy(s in samples(), t in -30.0f64..30.0) {
        // |Σ a_n sinc(t − n)|² ≤ Σ|a_n|² · Σ sinc²(t − n) ≤ Σ|a_n|²
        prop_assert!(reconstruct(&s, t).norm_sqr() <= sample_energy(&s) * (1.0 + 1e-12));
    }

    #[test]
    fn complete_windows_have_no_tail_bound(s in samples(), t in -5.0f64..5.0) {
        prop_assert_eq!(reconstruct_certified(&s, t, 0.0).tail_bound, 0.0);
    }
}

#[test]
fn sinc_is_even_and_decays() {
    for t in [0.3, 1.7, 12.25] {
        assert_eq!(sinc(t), sinc(-t));
        assert!(sinc(t).abs() <= 1.0 / (std::f64::consts::PI * t));
    }
}
