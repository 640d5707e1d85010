use kgamma::quad::{integrate_01_singular, integrate_0inf, integrate_interval};
use kgamma::special::{beta, gamma};
use kgamma::{HalfLine, QuadConfig};
use proptest::prelude::*;

fn cfg() -> QuadConfig {
    QuadConfig::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linearity(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.0f64..2.0, alpha in -0.7f64..1.5) {
        let f = |x: f64| (c * x).sin();
        let g = |x: f64| (-c * x).exp();
        let lhs = integrate_01_singular(|x| a * f(x) + b * g(x), alpha, 0.0, &cfg()).unwrap().value;
        let rf = integrate_01_singular(f, alpha, 0.0, &cfg()).unwrap().value;
        let rg = integrate_01_singular(g, alpha, 0.0, &cfg()).unwrap().value;
        let scale = a.abs() * rf.abs() + b.abs() * rg.abs() + 1.0;
        prop_assert!((lhs - (a * rf + b * rg)).abs() < 1e-11 * scale);
    }

    #[test]
    fn singular_weights_match_beta(alpha in -0.9f64..3.0, beta_exp in -0.9f64..3.0) {
        let r = integrate_01_singular(|_| 1.0, alpha, beta_exp, &cfg()).unwrap();
        let exact = beta(alpha + 1.0, beta_exp + 1.0);
        prop_assert!(r.converged);
        prop_assert!((r.value - exact).abs() < 1e-10 * exact, "{} vs {}", r.value, exact);
    }

    #[test]
    fn refinement_does_not_hurt(alpha in -0.8f64..1.0, beta_exp in -0.8f64..1.0) {
        let exact = beta(alpha + 1.0, beta_exp + 1.0);
        let loose = QuadConfig { abs_tol: 1e-6, rel_tol: 1e-6, ..cfg() };
        let err = |c: &QuadConfig| (integrate_01_singular(|_| 1.0, alpha, beta_exp, c).unwrap().value - exact).abs();
        let (coarse, fine) = (err(&loose), err(&cfg()));
        prop_assert!(fine <= coarse.max(1e-13 * exact));
    }

    #[test]
    fn intervals_are_additive(split in 0.05f64..0.95, alpha in -0.6f64..1.0) {
        let f = |u: f64| (1.0 + u * u).recip();
        let whole = integrate_interval(f, 0.0, 1.0, alpha, 0.0, &cfg()).unwrap().value;
        let left = integrate_interval(f, 0.0, split, alpha, 0.0, &cfg()).unwrap().value;
        // the weight u^alpha is carried by the integrand away from the origin
        let right = integrate_interval(|u| u.powf(alpha) * f(u), split, 1.0, 0.0, 0.0, &cfg()).unwrap().value;
        prop_assert!((whole - left - right).abs() < 1e-11 * whole.abs());
    }

    #[test]
    fn half_line_gamma(s in 0.3f64..5.0) {
        let r = integrate_0inf(|m| (-m).exp(), HalfLine { origin_exponent: s - 1.0, decay: None }, &cfg()).unwrap();
        prop_assert!((r.value - gamma(s)).abs() < 1e-9 * gamma(s), "{} vs {}", r.value, gamma(s));
    }
}

#[test]
fn algebraic_tail_with_hint() {
    // ∫₀^∞ m^{s−1} / (1 + m)^2 dm = B(s, 2 − s)
    for s in [0.5, 1.0, 1.5] {
        let shape = HalfLine { origin_exponent: s - 1.0, decay: Some(3.0 - s) };
        let r = integrate_0inf(|m| (1.0 + m).powi(-2), shape, &cfg()).unwrap();
        let exact = beta(s, 2.0 - s);
        assert!((r.value - exact).abs() < 1e-9 * exact, "s = {s}: {} vs {exact}", r.value);
    }
}
