use kgamma::identities::{Checker, MellinQuery};
use kgamma::repr::eval_representation;
use kgamma::{extended_beta_k, ExtBetaArgs, GammaMode, MLParams, QuadConfig, Representation, Tolerances, Verdict};
use proptest::prelude::*;

fn mode() -> impl Strategy<Value = GammaMode> {
    prop_oneof![Just(GammaMode::ClassicalGamma), Just(GammaMode::KDeformedGamma)]
}

fn params() -> impl Strategy<Value = MLParams> {
    (0.5f64..2.0, 0.6f64..1.6, 0.6f64..1.6, 0.6f64..1.6, mode())
        .prop_filter_map("evaluable", |(k, p, q, r, m)| MLParams::new(k, p, q, r, m).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn symmetry_and_functional_relation(p in params(), s in 0.4f64..3.0, t in 0.4f64..3.0, v in 0.0f64..3.0) {
        let checker = Checker::new(&p, QuadConfig::default(), Tolerances::default()).unwrap();
        let a = ExtBetaArgs::new(s, t, v).unwrap();
        let sym = checker.symmetry(a);
        prop_assert_eq!(sym.verdict, Verdict::Holds, "{:?}", sym);
        let fr = checker.functional_relation(a);
        prop_assert_eq!(fr.verdict, Verdict::Holds, "{:?}", fr);
    }

    #[test]
    fn representations_agree(p in params(), s in 0.4f64..3.0, t in 0.4f64..3.0, v in 0.0f64..3.0) {
        let a = ExtBetaArgs::new(s, t, v).unwrap();
        let direct = extended_beta_k(a, &p, &QuadConfig::default()).unwrap().value;
        for rep in Representation::alternatives() {
            let r = eval_representation(rep, a, &p, &QuadConfig::default()).unwrap();
            prop_assert!((r.value - direct).abs() <= 1e-7 * direct.abs(), "{}: {} vs {}", rep, r.value, direct);
        }
    }

    #[test]
    fn extended_beta_decreases_in_v_for_positive_kernel(s in 0.5f64..3.0, t in 0.5f64..3.0, v in 0.0f64..3.0) {
        let p = MLParams::unit(GammaMode::ClassicalGamma);
        let at = |v: f64| extended_beta_k(ExtBetaArgs::new(s, t, v).unwrap(), &p, &QuadConfig::default()).unwrap().value;
        prop_assert!(at(v + 0.5) < at(v));
    }
}

#[test]
fn corrected_mellin_at_unit_parameters() {
    let checker = Checker::new(&MLParams::unit(GammaMode::ClassicalGamma), QuadConfig::default(), Tolerances::default()).unwrap();
    for (s, t, g) in [(2.0, 3.0, 0.25), (3.0, 3.0, 0.5)] {
        let [literal, corrected] = checker.mellin(s, t, MellinQuery { g });
        assert_eq!(corrected.verdict, Verdict::Holds, "{corrected:?}");
        assert!(!literal.asserted);
    }
}
