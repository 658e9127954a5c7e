mod common;

use std::f64::consts::PI;

use common::{arb_sequence, band_integral, rel_err};
use proptest::prelude::*;
use recdef::deformation::{
    bound_state_weight_one, deformed_density_one, deformed_density_three_report, deformed_g00_one,
    deformed_g00_three, deformed_polys_one, deformed_polys_three, find_bound_states_one,
};
use recdef::recursion::eval_polynomials;
use recdef::resolvent::continued_fraction_g00;
use recdef::{
    CoefficientSequence, Complex64, Deformation, DeformationOne, DeformationThree, Polynomials,
    ResolventOptions,
};

/// Three-parameter deformation with `b_0 + mu_0 > 0` for `seq`.
fn arb_three(b0: f64) -> impl Strategy<Value = DeformationThree> {
    (-1.0f64..1.0, -1.0f64..1.0, -0.9f64..1.0)
        .prop_map(move |(p, m, z)| DeformationThree::new(p, m, z * b0).unwrap())
}

fn arb_case() -> impl Strategy<Value = (CoefficientSequence, Deformation, f64)> {
    arb_sequence().prop_flat_map(|s| {
        let b0 = s.b(0);
        let d = prop_oneof![
            (-1.0f64..1.0).prop_map(|mu| Deformation::One(DeformationOne::new(mu).unwrap())),
            arb_three(b0).prop_map(Deformation::Three),
        ];
        (Just(s), d, -2.0f64..2.0)
    })
}

fn transformed(s: &CoefficientSequence, d: &Deformation, x: f64, n: usize) -> Polynomials {
    match d {
        Deformation::One(d) => deformed_polys_one(s, d, x, n).unwrap(),
        Deformation::Three(d) => deformed_polys_three(s, d, x, n).unwrap(),
    }
}

fn complex_points() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, prop_oneof![-2.0f64..-0.05, 0.05f64..2.0])
        .prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn transform_matches_direct_recursion((s, d, x) in arb_case()) {
        let direct = eval_polynomials(&d.apply(&s).unwrap(), x, 15).unwrap();
        let via = transformed(&s, &d, x, 15);
        for n in 0..=15 {
            prop_assert!(rel_err(via.p[n], direct.p[n]) <= 1e-9, "p_{n}: {} vs {}", via.p[n], direct.p[n]);
            prop_assert!(rel_err(via.q[n], direct.q[n]) <= 1e-9, "q_{n}: {} vs {}", via.q[n], direct.q[n]);
        }
    }

    #[test]
    fn deformed_wronskian((s, d, x) in arb_case()) {
        let deformed = d.apply(&s).unwrap();
        let Polynomials { p, q } = transformed(&s, &d, x, 30);
        for n in 1..=30 {
            let (left, right) = (p[n - 1] * q[n], p[n] * q[n - 1]);
            let b = deformed.b(n - 1);
            let scale = (b * left).abs().max((b * right).abs()).max(1.0);
            prop_assert!((b * (left - right) - 1.0).abs() <= 1e-9 * scale, "n = {n}");
        }
    }

    #[test]
    fn three_reduces_to_undeformed(s in arb_sequence(), z in complex_points()) {
        let opts = ResolventOptions::default();
        let zero = DeformationThree::new(0.0, 0.0, 0.0).unwrap();
        let g = continued_fraction_g00(&s, z, &opts).unwrap();
        let g_hat = deformed_g00_three(&s, &zero, z, &opts).unwrap();
        prop_assert!((g_hat - g).norm() <= 1e-12 * g.norm().max(1.0));
    }

    #[test]
    fn three_reduces_to_one(s in arb_sequence(), mu in -1.0f64..1.0, z in complex_points()) {
        let opts = ResolventOptions::default();
        let three = DeformationThree::new(mu, 0.0, 0.0).unwrap();
        let one = DeformationOne::new(mu).unwrap();
        let g = continued_fraction_g00(&s, z, &opts).unwrap();
        let expected = deformed_g00_one(g, &one).unwrap();
        let g_hat = deformed_g00_three(&s, &three, z, &opts).unwrap();
        prop_assert!((g_hat - expected).norm() <= 1e-12 * expected.norm().max(1.0));
    }

    #[test]
    fn one_density_is_resolvent_density(s in arb_sequence(), mu in -1.0f64..1.0) {
        let opts = ResolventOptions::default();
        let d = DeformationOne::new(mu).unwrap();
        let (lo, hi) = s.band();
        for i in 1..=50 {
            let x = lo + (hi - lo) * i as f64 / 51.0;
            let g = continued_fraction_g00(&s, Complex64::new(x, 0.0), &opts).unwrap();
            let expected = deformed_g00_one(g, &d).unwrap().im / PI;
            let got = deformed_density_one(&s, &d, x, &opts).unwrap();
            prop_assert!((got - expected).abs() <= 1e-10, "x = {x}: {got} vs {expected}");
        }
    }

    #[test]
    fn three_factorized_density_matches_resolvent(s in arb_sequence(), d in arb_three(1.0)) {
        prop_assume!(s.b(0) + d.mu_zero > 0.0);
        let opts = ResolventOptions::default();
        let (lo, hi) = s.band();
        for i in 1..=50 {
            let x = lo + (hi - lo) * i as f64 / 51.0;
            let report = deformed_density_three_report(&s, &d, x, &opts).unwrap();
            if let Some(r) = report.residual() {
                prop_assert!(r <= 1e-8 * report.resolvent.max(1.0), "x = {x}: residual {r}");
            }
        }
    }
}

#[test]
fn sum_rule_with_bound_state() {
    let s = CoefficientSequence::chebyshev();
    let d = DeformationOne::new(0.75).unwrap();
    let opts = ResolventOptions::default();
    let continuum = band_integral(4000, |x| deformed_density_one(&s, &d, x, &opts).unwrap());
    let roots = find_bound_states_one(&s, &d, (1.0 + 1e-9, 4.0)).unwrap();
    assert_eq!(roots.len(), 1);
    let weight = bound_state_weight_one(&s, &d, roots[0]).unwrap();
    assert!(
        (continuum + weight - 1.0).abs() <= 1e-2,
        "{continuum} + {weight}"
    );
    assert!(find_bound_states_one(&s, &d, (-4.0, -1.0 - 1e-9))
        .unwrap()
        .is_empty());
}
